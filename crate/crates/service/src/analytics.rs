//! Usage analytics over the action log and the current graph.

use std::collections::{BTreeMap, BTreeSet};

use atlas_core::{AtlasGraph, PersonId};
use chrono::{DateTime, TimeDelta, Utc};
use serde::{Deserialize, Serialize};

use crate::events::{ActionEvent, ActionKind, AddSource, View};

/// Idle gap that ends a session.
pub const DEFAULT_IDLE_TIMEOUT: TimeDelta = TimeDelta::minutes(30);

/// A run of one person's events with no gap of `idle_timeout` or more.
#[derive(Clone, Debug, PartialEq)]
pub struct Session {
    pub actor: PersonId,
    pub start: DateTime<Utc>,
    pub end: DateTime<Utc>,
    pub events: Vec<ActionEvent>,
}

impl Session {
    pub fn duration(&self) -> TimeDelta {
        self.end - self.start
    }
}

/// Splits each person's events into sessions wherever consecutive events are
/// `idle_timeout` or more apart. System events are ignored. Sessions come out
/// ordered by person, then start time.
pub fn sessionize(events: &[ActionEvent], idle_timeout: TimeDelta) -> Vec<Session> {
    let mut per_actor: BTreeMap<PersonId, Vec<&ActionEvent>> = BTreeMap::new();
    for e in events {
        if let Some(p) = e.actor.person() {
            per_actor.entry(p).or_default().push(e);
        }
    }
    let mut sessions = Vec::new();
    for (actor, mut list) in per_actor {
        list.sort_by_key(|e| e.timestamp);
        let mut current: Vec<ActionEvent> = Vec::new();
        for e in list {
            if let Some(last) = current.last() {
                if e.timestamp - last.timestamp >= idle_timeout {
                    sessions.push(close(actor, std::mem::take(&mut current)));
                }
            }
            current.push(e.clone());
        }
        if !current.is_empty() {
            sessions.push(close(actor, current));
        }
    }
    sessions
}

fn close(actor: PersonId, events: Vec<ActionEvent>) -> Session {
    Session {
        actor,
        start: events[0].timestamp,
        end: events[events.len() - 1].timestamp,
        events,
    }
}

/// Time spent in each view. The gap between two consecutive events counts
/// toward the view active at the earlier one; sessions open in the default
/// view and only view switches change it. Nothing is counted after a
/// session's last event.
pub fn time_per_view(sessions: &[Session]) -> BTreeMap<View, TimeDelta> {
    let mut out: BTreeMap<View, TimeDelta> = View::ALL.iter().map(|&v| (v, TimeDelta::zero())).collect();
    for s in sessions {
        let mut view = View::DEFAULT;
        for pair in s.events.windows(2) {
            if pair[0].kind == ActionKind::ViewSwitch {
                view = pair[0].view.unwrap_or(view);
            }
            *out.get_mut(&view).expect("all views present") += pair[1].timestamp - pair[0].timestamp;
        }
    }
    out
}

/// Count of link additions by how the other person was found.
pub fn add_source_breakdown(events: &[ActionEvent]) -> BTreeMap<AddSource, usize> {
    let mut out: BTreeMap<AddSource, usize> = AddSource::ALL.iter().map(|&s| (s, 0)).collect();
    for e in events {
        if e.kind == ActionKind::AddLink {
            if let Some(source) = e.source {
                *out.get_mut(&source).expect("all sources present") += 1;
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThirdPartyStats {
    pub third_party: usize,
    pub total: usize,
    pub fraction: f64,
}

/// Live links whose creator was neither endpoint (imports included).
pub fn third_party_stats(graph: &AtlasGraph) -> ThirdPartyStats {
    let total = graph.link_count();
    let third_party = graph.links().filter(|l| l.is_third_party()).count();
    ThirdPartyStats {
        third_party,
        total,
        fraction: ratio(third_party, total),
    }
}

pub fn third_party_fraction(graph: &AtlasGraph) -> f64 {
    third_party_stats(graph).fraction
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfirmationStats {
    /// Endpoint confirmations made by someone other than the link's creator.
    pub confirmed: usize,
    /// Endpoints belonging to registered people that started unconfirmed.
    pub confirmable: usize,
    pub rate: f64,
}

/// Share of confirmable endpoints that were confirmed.
///
/// An endpoint is confirmable when it belongs to someone in `registered`
/// and was not confirmed at creation, i.e. its person did not create the link.
pub fn confirmation_stats(graph: &AtlasGraph, registered: &BTreeSet<PersonId>) -> ConfirmationStats {
    let mut confirmed = 0;
    let mut confirmable = 0;
    for link in graph.links() {
        for (end, flag) in [(link.a, link.a_confirmed), (link.b, link.b_confirmed)] {
            if link.created_by.is(end) {
                continue;
            }
            if flag {
                confirmed += 1;
            }
            if registered.contains(&end) {
                confirmable += 1;
            }
        }
    }
    ConfirmationStats {
        confirmed,
        confirmable,
        rate: ratio(confirmed, confirmable),
    }
}

pub fn confirmation_rate(graph: &AtlasGraph, registered: &BTreeSet<PersonId>) -> f64 {
    confirmation_stats(graph, registered).rate
}

fn ratio(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use atlas_core::{Actor, NewPerson};

    fn t(secs: i64) -> DateTime<Utc> {
        DateTime::from_timestamp(1_450_000_000 + secs, 0).unwrap()
    }

    fn ev(actor: u64, kind: ActionKind, secs: i64) -> ActionEvent {
        ActionEvent::new(Actor::Person(PersonId(actor)), kind, t(secs))
    }

    fn switch(actor: u64, view: View, secs: i64) -> ActionEvent {
        ev(actor, ActionKind::ViewSwitch, secs).with_view(view)
    }

    #[test]
    fn one_session_within_timeout() {
        let events: Vec<_> = [0, 100, 200].iter().map(|&s| ev(1, ActionKind::Search, s)).collect();
        let s = sessionize(&events, DEFAULT_IDLE_TIMEOUT);
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].duration(), TimeDelta::seconds(200));
    }

    #[test]
    fn gap_at_or_beyond_timeout_splits() {
        let events = vec![ev(1, ActionKind::Search, 0), ev(1, ActionKind::Search, 4000)];
        assert_eq!(sessionize(&events, DEFAULT_IDLE_TIMEOUT).len(), 2);
        let exact = vec![ev(1, ActionKind::Search, 0), ev(1, ActionKind::Search, 1800)];
        assert_eq!(sessionize(&exact, DEFAULT_IDLE_TIMEOUT).len(), 2);
        assert!(sessionize(&[], DEFAULT_IDLE_TIMEOUT).is_empty());
    }

    #[test]
    fn system_events_have_no_sessions() {
        let events = vec![ActionEvent::new(Actor::System, ActionKind::AddNode, t(0))];
        assert!(sessionize(&events, DEFAULT_IDLE_TIMEOUT).is_empty());
    }

    #[test]
    fn view_time_attribution() {
        let events = vec![
            switch(1, View::Ego, 0),
            switch(1, View::Global, 60),
            ev(1, ActionKind::Search, 90),
        ];
        let times = time_per_view(&sessionize(&events, DEFAULT_IDLE_TIMEOUT));
        assert_eq!(times[&View::Ego], TimeDelta::seconds(60));
        assert_eq!(times[&View::Global], TimeDelta::seconds(30));
        assert_eq!(times[&View::Physical], TimeDelta::zero());

        let lone = time_per_view(&sessionize(&[switch(1, View::Ego, 5)], DEFAULT_IDLE_TIMEOUT));
        assert!(lone.values().all(|d| d.is_zero()));

        let no_switch = vec![ev(2, ActionKind::Search, 0), ev(2, ActionKind::Search, 45)];
        let times = time_per_view(&sessionize(&no_switch, DEFAULT_IDLE_TIMEOUT));
        assert_eq!(times[&View::Ego], TimeDelta::seconds(45));
    }

    #[test]
    fn sources_counted() {
        let mut events = Vec::new();
        for (source, n) in [(AddSource::Suggestion, 5), (AddSource::Search, 3), (AddSource::Physical, 2)] {
            for i in 0..n {
                events.push(ev(i as u64 % 2 + 1, ActionKind::AddLink, i).with_view(View::Ego).with_source(source));
            }
        }
        let got = add_source_breakdown(&events);
        assert_eq!(got.values().copied().collect::<Vec<_>>(), vec![5, 3, 2]);
        assert!(add_source_breakdown(&[]).values().all(|&c| c == 0));
    }

    #[test]
    fn graph_ratios() {
        let mut g = AtlasGraph::new();
        assert_eq!(third_party_fraction(&g), 0.0);
        let p: Vec<PersonId> = (0..6)
            .map(|i| g.add_person(NewPerson::new(format!("P{i}"), "G")).unwrap())
            .collect();
        let at = t(0);
        g.create_link(p[0].into(), p[0], p[1], "x", at).unwrap();
        g.create_link(p[0].into(), p[0], p[2], "x", at).unwrap();
        g.create_link(p[3].into(), p[3], p[4], "x", at).unwrap();
        assert_eq!(third_party_fraction(&g), 0.0);
        g.create_link(p[0].into(), p[1], p[2], "x", at).unwrap();
        g.create_link(Actor::System, p[4], p[5], "coauthor", at).unwrap();
        assert_eq!(third_party_fraction(&g), 0.4);

        assert_eq!(confirmation_rate(&g, &BTreeSet::new()), 0.0);
        let everyone: BTreeSet<PersonId> = p.iter().copied().collect();
        // Confirmable ends: p1,p2 on links 1-2, p4 on link 3, p1,p2 on link 4, p4,p5 on link 5.
        let s = confirmation_stats(&g, &everyone);
        assert_eq!((s.confirmed, s.confirmable), (0, 7));
    }
}
