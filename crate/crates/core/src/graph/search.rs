use super::{AtlasGraph, Person};

impl AtlasGraph {
    /// Case-insensitive name search: prefix matches first, then substring
    /// matches, each group alphabetical.
    pub fn search_people(&self, query: &str, limit: usize) -> Vec<Person> {
        let needle = query.trim().to_lowercase();
        if needle.is_empty() || limit == 0 {
            return Vec::new();
        }
        let mut hits: Vec<(u8, String, &Person)> = self
            .people()
            .filter_map(|p| {
                let name = p.display_name.to_lowercase();
                let rank = if name.starts_with(&needle) {
                    0
                } else if name.contains(&needle) {
                    1
                } else {
                    return None;
                };
                Some((rank, name, p))
            })
            .collect();
        hits.sort_by(|x, y| {
            (x.0, &x.1, &x.2.display_name, x.2.id).cmp(&(y.0, &y.1, &y.2.display_name, y.2.id))
        });
        hits.into_iter().take(limit).map(|(_, _, p)| p.clone()).collect()
    }
}

#[cfg(test)]
mod tests {
    use crate::graph::{AtlasGraph, NewPerson};

    fn names(g: &AtlasGraph, q: &str, limit: usize) -> Vec<String> {
        g.search_people(q, limit).into_iter().map(|p| p.display_name).collect()
    }

    #[test]
    fn prefix_before_substring() {
        let mut g = AtlasGraph::new();
        for n in ["Martin", "Emma", "Bo"] {
            g.add_person(NewPerson::new(n, "G")).unwrap();
        }
        assert_eq!(names(&g, "ma", 10), ["Martin", "Emma"]);
        assert_eq!(names(&g, "MA", 1), ["Martin"]);
        assert!(names(&g, "", 10).is_empty());
        assert!(names(&g, "zzz", 10).is_empty());
    }

    #[test]
    fn ties_are_alphabetical() {
        let mut g = AtlasGraph::new();
        for n in ["mark", "Mara", "Anna Maria", "Amara"] {
            g.add_person(NewPerson::new(n, "G")).unwrap();
        }
        assert_eq!(names(&g, "ma", 10), ["Mara", "mark", "Amara", "Anna Maria"]);
    }
}
