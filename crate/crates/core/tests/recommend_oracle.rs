use std::collections::{BTreeSet, HashSet};

use atlas_core::recommend::{mutual_count, suggest, SuggestionReason};
use atlas_core::{Actor, AtlasGraph, NewPerson, PersonId};
use chrono::DateTime;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_atlas(rng: &mut ChaCha8Rng, max_n: usize) -> (AtlasGraph, Vec<PersonId>) {
    let n = rng.gen_range(2..=max_n);
    let groups = ["G1", "G2", "G3"];
    let mut g = AtlasGraph::new();
    // A small name alphabet forces display-name ties.
    let ids: Vec<PersonId> = (0..n)
        .map(|_| {
            let name = format!("N{}", rng.gen_range(0..n / 2 + 1));
            g.add_person(NewPerson::new(name, groups[rng.gen_range(0..3)])).unwrap()
        })
        .collect();
    let p: f64 = rng.gen_range(0.02..0.3);
    let at = DateTime::from_timestamp(0, 0).unwrap();
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.gen_bool(p) {
                let actor = match rng.gen_range(0..3) {
                    0 => Actor::System,
                    1 => Actor::Person(ids[i]),
                    _ => Actor::Person(ids[rng.gen_range(0..n)]),
                };
                g.create_link(actor, ids[i], ids[j], "interaction", at).unwrap();
            }
        }
    }
    (g, ids)
}

/// Recomputes every candidate's score by explicit set intersection and
/// sorts with the same tie-break.
fn brute_force(
    g: &AtlasGraph,
    subject: PersonId,
    limit: usize,
    excluded: &BTreeSet<PersonId>,
) -> Vec<(PersonId, usize, SuggestionReason)> {
    let neighbors: HashSet<PersonId> = g.links().filter_map(|l| l.other(subject)).collect();
    let me = g.person(subject).unwrap();
    let mut scored = Vec::new();
    let mut group = Vec::new();
    for p in g.people() {
        if p.id == subject || neighbors.contains(&p.id) || excluded.contains(&p.id) {
            continue;
        }
        let theirs: HashSet<PersonId> = g.links().filter_map(|l| l.other(p.id)).collect();
        let score = neighbors.intersection(&theirs).count();
        if score > 0 {
            scored.push((p.display_name.clone(), p.id, score));
        } else if p.group == me.group {
            group.push((p.display_name.clone(), p.id));
        }
    }
    scored.sort_by(|a, b| b.2.cmp(&a.2).then(a.0.cmp(&b.0)).then(a.1.cmp(&b.1)));
    group.sort();
    scored
        .into_iter()
        .map(|(_, id, s)| (id, s, SuggestionReason::MutualConnections))
        .chain(group.into_iter().map(|(_, id)| (id, 0, SuggestionReason::SameGroup)))
        .take(limit)
        .collect()
}

#[test]
fn suggest_matches_brute_force_on_random_graphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for _ in 0..100 {
        let (g, ids) = random_atlas(&mut rng, 50);
        let subject = ids[rng.gen_range(0..ids.len())];
        let excluded: BTreeSet<PersonId> = ids.iter().copied().filter(|_| rng.gen_bool(0.1)).collect();
        for limit in [1, 5, 10, 100] {
            let got: Vec<_> = suggest(&g, subject, limit, &excluded)
                .unwrap()
                .into_iter()
                .map(|s| (s.person, s.score, s.reason))
                .collect();
            assert_eq!(got, brute_force(&g, subject, limit, &excluded));
        }
    }
}

#[test]
fn mutual_count_matches_intersection() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..50 {
        let (g, ids) = random_atlas(&mut rng, 30);
        let s = ids[0];
        for &c in &ids[1..] {
            let ns: HashSet<_> = g.neighbors(s).collect();
            let nc: HashSet<_> = g.neighbors(c).collect();
            assert_eq!(mutual_count(&g, s, c).unwrap(), ns.intersection(&nc).count());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn linking_a_suggestion_removes_it(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (mut g, ids) = random_atlas(&mut rng, 25);
        let subject = ids[0];
        let none = BTreeSet::new();
        let first = suggest(&g, subject, 10, &none).unwrap();
        prop_assert_eq!(&first, &suggest(&g, subject, 10, &none).unwrap());
        for s in &first {
            prop_assert!(s.person != subject);
            prop_assert!(g.link_between(subject, s.person).is_none());
        }
        if let Some(top) = first.first() {
            let at = DateTime::from_timestamp(0, 0).unwrap();
            g.create_link(subject.into(), subject, top.person, "interaction", at).unwrap();
            let after = suggest(&g, subject, 10, &none).unwrap();
            prop_assert!(after.iter().all(|s| s.person != top.person));
        }
    }
}
