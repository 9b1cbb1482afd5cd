//! The service core: single-writer mutation path, published read snapshots,
//! and the queries behind each endpoint.

use std::collections::{BTreeSet, HashMap};
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex, MutexGuard, RwLock};
use std::time::{Duration, Instant};

use atlas_core::community::{color_assignment, louvain, modularity};
use atlas_core::layout::PALETTE;
use atlas_core::recommend::{suggest, DEFAULT_SUGGESTION_LIMIT};
use atlas_core::{Actor, Link, LinkId, NewPerson, Person, PersonId, UGraph};
use chrono::{DateTime, SubsecRound, TimeDelta, Utc};

use crate::analytics::{self, ConfirmationStats, ThirdPartyStats};
use crate::error::AtlasError;
use crate::events::{ActionEvent, ActionKind, AddSource, FloorPlan, GraphChange, LogRecord, Target, View};
use crate::payload::{
    ColoredPerson, EgoPayload, FloorPayload, GlobalPayload, LinkPayload, Occupant, SourceStats,
    SuggestionPayload, ViewStats,
};
use crate::state::State;
use crate::store::{self, LogLine, LogWriter};

pub type Clock = Arc<dyn Fn() -> DateTime<Utc> + Send + Sync>;

#[derive(Clone, Debug)]
pub struct Config {
    pub idle_timeout: TimeDelta,
    /// How long a computed global view may be served after the graph changed.
    pub global_cache_ttl: Duration,
    /// Write a snapshot after this many log records (0 disables).
    pub snapshot_every: u64,
    /// fsync the log after every append.
    pub sync_writes: bool,
    pub louvain_seed: u64,
    pub suggestion_limit: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            idle_timeout: analytics::DEFAULT_IDLE_TIMEOUT,
            global_cache_ttl: Duration::from_secs(60),
            snapshot_every: 500,
            sync_writes: true,
            louvain_seed: 0,
            suggestion_limit: DEFAULT_SUGGESTION_LIMIT,
        }
    }
}

/// Result of a floor plan import.
#[derive(Clone, Debug, PartialEq)]
pub struct FloorImport {
    pub floors: usize,
    /// People whose office pointed at a missing floor or outside it.
    pub cleared: Vec<PersonId>,
}

struct Writer {
    dir: Option<PathBuf>,
    log: Option<LogWriter>,
    seq: u64,
    snapshot_seq: u64,
}

struct CachedGlobal {
    at: Instant,
    version: u64,
    payload: Arc<GlobalPayload>,
}

/// A running atlas. Mutations are serialized through one writer and logged
/// before they become visible; readers get immutable snapshots.
pub struct Atlas {
    config: Config,
    clock: Clock,
    writer: Mutex<Writer>,
    state: RwLock<Arc<State>>,
    events: RwLock<Vec<ActionEvent>>,
    global_cache: Mutex<HashMap<bool, CachedGlobal>>,
}

fn lock<T>(m: &Mutex<T>) -> MutexGuard<'_, T> {
    m.lock().unwrap_or_else(|e| e.into_inner())
}

fn system_clock() -> Clock {
    Arc::new(|| Utc::now().trunc_subsecs(0))
}

impl Atlas {
    /// An atlas without persistence.
    pub fn in_memory(config: Config) -> Self {
        Self::from_parts(config, None, None, State::default(), Vec::new(), 0, 0)
    }

    /// Opens (or creates) a store directory: loads the snapshot if present,
    /// then replays the log records after it.
    pub fn open(dir: impl AsRef<Path>, config: Config) -> Result<Self, AtlasError> {
        let dir = dir.as_ref().to_path_buf();
        let lines = store::read_log(&dir)?;
        let (mut state, snapshot_seq) = match store::read_snapshot(&dir)? {
            Some(s) => (s.state, s.seq),
            None => (State::default(), 0),
        };
        if snapshot_seq > lines.len() as u64 || state.version != snapshot_seq {
            return Err(AtlasError::CorruptSnapshot(format!(
                "snapshot covers {snapshot_seq} records (state version {}), log has {}",
                state.version,
                lines.len()
            )));
        }
        let mut events = Vec::new();
        for line in &lines {
            if line.seq > snapshot_seq {
                state.replay(&line.entry).map_err(|reason| AtlasError::Replay { seq: line.seq, reason })?;
            }
            if let LogRecord::Action(e) = &line.entry {
                events.push(e.clone());
            }
        }
        let log = LogWriter::open(&dir, config.sync_writes)?;
        let seq = lines.len() as u64;
        Ok(Self::from_parts(config, Some(dir), Some(log), state, events, seq, snapshot_seq))
    }

    /// Rebuilds state from log lines alone, starting from nothing.
    pub fn replay_lines(lines: &[LogLine]) -> Result<State, AtlasError> {
        let mut state = State::default();
        for line in lines {
            state
                .replay(&line.entry)
                .map_err(|reason| AtlasError::Replay { seq: line.seq, reason })?;
        }
        Ok(state)
    }

    fn from_parts(
        config: Config,
        dir: Option<PathBuf>,
        log: Option<LogWriter>,
        state: State,
        events: Vec<ActionEvent>,
        seq: u64,
        snapshot_seq: u64,
    ) -> Self {
        Atlas {
            config,
            clock: system_clock(),
            writer: Mutex::new(Writer {
                dir,
                log,
                seq,
                snapshot_seq,
            }),
            state: RwLock::new(Arc::new(state)),
            events: RwLock::new(events),
            global_cache: Mutex::new(HashMap::new()),
        }
    }

    /// Replaces the time source (tests script timestamps with this).
    pub fn with_clock(mut self, clock: Clock) -> Self {
        self.clock = clock;
        self
    }

    pub fn config(&self) -> &Config {
        &self.config
    }

    /// Current time according to the configured clock, whole seconds.
    pub fn now(&self) -> DateTime<Utc> {
        (self.clock)().trunc_subsecs(0)
    }

    /// Current immutable state.
    pub fn state(&self) -> Arc<State> {
        Arc::clone(&self.state.read().unwrap_or_else(|e| e.into_inner()))
    }

    /// Copy of the action log.
    pub fn events(&self) -> Vec<ActionEvent> {
        self.events.read().unwrap_or_else(|e| e.into_inner()).clone()
    }

    /// Runs `build` against a private copy of the state; if it succeeds, the
    /// records it produced are logged and the copy is published.
    fn commit<T>(
        &self,
        build: impl FnOnce(&mut State, &mut Vec<LogRecord>) -> Result<T, AtlasError>,
    ) -> Result<T, AtlasError> {
        let mut writer = lock(&self.writer);
        let mut next = (*self.state()).clone();
        let mut records = Vec::new();
        let out = build(&mut next, &mut records)?;
        if records.is_empty() {
            return Ok(out);
        }
        let first = writer.seq + 1;
        let lines: Vec<LogLine> = records
            .into_iter()
            .enumerate()
            .map(|(i, entry)| LogLine {
                seq: first + i as u64,
                entry,
            })
            .collect();
        if let Some(log) = writer.log.as_mut() {
            log.append(&lines)?;
        }
        writer.seq += lines.len() as u64;
        debug_assert_eq!(writer.seq, next.version);

        {
            let mut events = self.events.write().unwrap_or_else(|e| e.into_inner());
            events.extend(lines.iter().filter_map(|l| match &l.entry {
                LogRecord::Action(e) => Some(e.clone()),
                _ => None,
            }));
        }
        let next = Arc::new(next);
        *self.state.write().unwrap_or_else(|e| e.into_inner()) = Arc::clone(&next);

        let due = self.config.snapshot_every > 0 && writer.seq - writer.snapshot_seq >= self.config.snapshot_every;
        if due {
            if let Some(dir) = writer.dir.clone() {
                store::write_snapshot(&dir, writer.seq, &next)?;
                writer.snapshot_seq = writer.seq;
            }
        }
        Ok(out)
    }

    /// Writes a snapshot of the current state now.
    pub fn snapshot(&self) -> Result<(), AtlasError> {
        let mut writer = lock(&self.writer);
        if let Some(dir) = writer.dir.clone() {
            let state = self.state();
            store::write_snapshot(&dir, writer.seq, &state)?;
            writer.snapshot_seq = writer.seq;
        }
        Ok(())
    }

    fn require_person(state: &State, id: PersonId) -> Result<&Person, AtlasError> {
        state
            .graph
            .person(id)
            .ok_or_else(|| AtlasError::NotFound(format!("person {id}")))
    }

    fn check_office(state: &State, entry: &NewPerson) -> Result<(), AtlasError> {
        if let Some(o) = &entry.office {
            let floor = state
                .floors
                .get(&o.floor_id)
                .ok_or_else(|| AtlasError::Validation(format!("unknown floor {:?}", o.floor_id)))?;
            if !floor.contains(o.x, o.y) {
                return Err(AtlasError::Validation(format!(
                    "office ({}, {}) lies outside floor {:?}",
                    o.x, o.y, o.floor_id
                )));
            }
        }
        Ok(())
    }

    // ---- mutations -------------------------------------------------------

    /// Adds someone by hand. `actor` is whoever entered them.
    pub fn add_person(&self, actor: Actor, entry: NewPerson) -> Result<Person, AtlasError> {
        let now = self.now();
        self.commit(|state, records| {
            if let Actor::Person(p) = actor {
                Self::require_person(state, p)?;
            }
            Self::check_office(state, &entry)?;
            let id = state.graph.add_person(entry)?;
            let person = state.graph.person(id).expect("just added").clone();
            let mut event = ActionEvent::new(actor, ActionKind::AddNode, now);
            event.target = Some(Target::Person(id));
            event.change = Some(GraphChange::PersonAdded { person: person.clone() });
            state.push(records, LogRecord::Action(event));
            Ok(person)
        })
    }

    /// Creates a link on behalf of `actor`. Without an explicit view the
    /// physical source implies the physical view, anything else the ego view.
    pub fn create_link(
        &self,
        actor: PersonId,
        a: PersonId,
        b: PersonId,
        link_type: Option<&str>,
        source: Option<AddSource>,
        view: Option<View>,
    ) -> Result<Link, AtlasError> {
        let now = self.now();
        let view = view.unwrap_or(match source {
            Some(AddSource::Physical) => View::Physical,
            _ => View::Ego,
        });
        self.commit(|state, records| {
            Self::require_person(state, actor)?;
            let link_type = link_type.unwrap_or(atlas_core::graph::DEFAULT_LINK_TYPE);
            let link = state.graph.create_link(actor.into(), a, b, link_type, now)?;
            let mut event = ActionEvent::new(actor.into(), ActionKind::AddLink, now).with_view(view);
            event.source = source;
            event.target = Some(Target::Link(link.id));
            event.change = Some(GraphChange::LinkCreated { link: link.clone() });
            state.push(records, LogRecord::Action(event));
            Ok(link)
        })
    }

    pub fn confirm_link(&self, actor: PersonId, id: LinkId) -> Result<Link, AtlasError> {
        let now = self.now();
        self.commit(|state, records| {
            Self::require_person(state, actor)?;
            let link = state.graph.confirm_link(actor, id)?;
            let mut event = ActionEvent::new(actor.into(), ActionKind::ConfirmLink, now);
            event.target = Some(Target::Link(id));
            event.change = Some(GraphChange::LinkConfirmed { link: id });
            state.push(records, LogRecord::Action(event));
            Ok(link)
        })
    }

    pub fn delete_link(&self, actor: PersonId, id: LinkId) -> Result<Link, AtlasError> {
        let now = self.now();
        self.commit(|state, records| {
            Self::require_person(state, actor)?;
            let link = state.graph.delete_link(actor.into(), id)?;
            let mut event = ActionEvent::new(actor.into(), ActionKind::DeleteLink, now);
            event.target = Some(Target::Link(id));
            event.change = Some(GraphChange::LinkDeleted { link: id });
            state.push(records, LogRecord::Action(event));
            Ok(link)
        })
    }

    /// Logs a view switch or search reported by the client. Other kinds go
    /// through their own endpoints.
    pub fn record_event(&self, event: ActionEvent) -> Result<ActionEvent, AtlasError> {
        if !matches!(event.kind, ActionKind::ViewSwitch | ActionKind::Search) {
            return Err(AtlasError::Validation(format!(
                "{:?} events are recorded by their own endpoint",
                event.kind
            )));
        }
        event.validate()?;
        self.commit(|state, records| {
            match event.actor {
                Actor::Person(p) => {
                    Self::require_person(state, p)?;
                }
                Actor::System => return Err(AtlasError::Validation("client events need a person".into())),
            }
            match event.target {
                Some(Target::Person(p)) => {
                    Self::require_person(state, p)?;
                }
                Some(Target::Link(l)) if state.graph.link(l).is_none() => {
                    return Err(AtlasError::NotFound(format!("link {l}")));
                }
                _ => {}
            }
            state.push(records, LogRecord::Action(event.clone()));
            Ok(event)
        })
    }

    /// Adds people in one atomic batch on behalf of the system. Offices are
    /// kept as given until floors exist; once they do, offices that do not
    /// fit a floor are cleared and reported.
    pub fn import_people(&self, entries: Vec<NewPerson>) -> Result<(Vec<PersonId>, Vec<PersonId>), AtlasError> {
        let now = self.now();
        self.commit(|state, records| {
            let mut ids = Vec::with_capacity(entries.len());
            for entry in entries {
                let id = state.graph.add_person(entry)?;
                let person = state.graph.person(id).expect("just added").clone();
                let mut event = ActionEvent::new(Actor::System, ActionKind::AddNode, now);
                event.target = Some(Target::Person(id));
                event.change = Some(GraphChange::PersonAdded { person });
                state.push(records, LogRecord::Action(event));
                ids.push(id);
            }
            let cleared = if state.floors.is_empty() {
                Vec::new()
            } else {
                Self::clear_misplaced(state, records)?
            };
            Ok((ids, cleared))
        })
    }

    /// Creates system links (both ends unconfirmed) in one atomic batch.
    pub fn import_links(&self, pairs: &[(PersonId, PersonId)], link_type: &str) -> Result<Vec<Link>, AtlasError> {
        let now = self.now();
        self.commit(|state, records| {
            let mut links = Vec::with_capacity(pairs.len());
            for &(a, b) in pairs {
                let link = state.graph.create_link(Actor::System, a, b, link_type, now)?;
                let mut event = ActionEvent::new(Actor::System, ActionKind::AddLink, now);
                event.target = Some(Target::Link(link.id));
                event.change = Some(GraphChange::LinkCreated { link: link.clone() });
                state.push(records, LogRecord::Action(event));
                links.push(link);
            }
            Ok(links)
        })
    }

    /// Stores floor plans, then clears offices that no floor can hold.
    pub fn import_floors(&self, floors: Vec<FloorPlan>) -> Result<FloorImport, AtlasError> {
        for f in &floors {
            f.validate()?;
        }
        self.commit(|state, records| {
            let count = floors.len();
            for f in &floors {
                state.floors.insert(f.floor_id.clone(), f.clone());
            }
            state.push(records, LogRecord::Floors { floors });
            let cleared = Self::clear_misplaced(state, records)?;
            Ok(FloorImport { floors: count, cleared })
        })
    }

    fn clear_misplaced(state: &mut State, records: &mut Vec<LogRecord>) -> Result<Vec<PersonId>, AtlasError> {
        let misplaced = state.misplaced_offices();
        for &p in &misplaced {
            state.graph.clear_office(p)?;
            state.push(records, LogRecord::OfficeCleared { person: p });
        }
        Ok(misplaced)
    }

    // ---- queries ---------------------------------------------------------

    pub fn person(&self, id: PersonId) -> Result<Person, AtlasError> {
        Self::require_person(&self.state(), id).cloned()
    }

    pub fn search(&self, query: &str, limit: usize) -> Vec<Person> {
        self.state().graph.search_people(query, limit)
    }

    pub fn ego(&self, viewer: PersonId, subject: PersonId) -> Result<EgoPayload, AtlasError> {
        let state = self.state();
        let view = state.graph.ego_network(viewer, subject)?;
        let ids: Vec<PersonId> = view.neighbors.iter().map(|p| p.id).collect();
        let index: HashMap<PersonId, usize> = ids.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        let mut graph = UGraph::new(ids.len());
        for l in &view.links {
            if let (Some(&u), Some(&v)) = (index.get(&l.link.a), index.get(&l.link.b)) {
                graph.add_edge(u, v);
            }
        }
        let partition = louvain::<f64>(&graph, self.config.louvain_seed);
        let colors = color_assignment(&partition, PALETTE.len());
        let neighbors = view
            .neighbors
            .into_iter()
            .enumerate()
            .map(|(i, person)| {
                let community = partition.community_of(i);
                ColoredPerson {
                    person,
                    community,
                    color: colors[&community],
                }
            })
            .collect();
        let links = view
            .links
            .into_iter()
            .map(|l| LinkPayload {
                transparent: Some(l.transparent),
                ..LinkPayload::new(l.link)
            })
            .collect();
        Ok(EgoPayload {
            subject,
            neighbors,
            links,
            stats: view.stats,
        })
    }

    /// Whole network with community colors. Communities are computed over
    /// all live links, confirmed or not. Results are cached per version and
    /// may be served up to the configured TTL after a change.
    pub fn global(&self, include_unconfirmed: bool) -> Arc<GlobalPayload> {
        let state = self.state();
        {
            let cache = lock(&self.global_cache);
            if let Some(c) = cache.get(&include_unconfirmed) {
                if c.version == state.version || c.at.elapsed() < self.config.global_cache_ttl {
                    return Arc::clone(&c.payload);
                }
            }
        }
        let (graph, ids) = state.graph.index_graph(true);
        let partition = louvain::<f64>(&graph, self.config.louvain_seed);
        let q: f64 = modularity(&graph, &partition);
        let colors = color_assignment(&partition, PALETTE.len());
        let nodes = ids
            .iter()
            .enumerate()
            .map(|(i, &id)| {
                let community = partition.community_of(i);
                ColoredPerson {
                    person: state.graph.person(id).expect("indexed person").clone(),
                    community,
                    color: colors[&community],
                }
            })
            .collect();
        let links = state
            .graph
            .global_network(include_unconfirmed)
            .links
            .into_iter()
            .map(LinkPayload::new)
            .collect();
        let payload = Arc::new(GlobalPayload {
            nodes,
            links,
            community_count: partition.community_count(),
            modularity: q,
        });
        lock(&self.global_cache).insert(
            include_unconfirmed,
            CachedGlobal {
                at: Instant::now(),
                version: state.version,
                payload: Arc::clone(&payload),
            },
        );
        payload
    }

    pub fn suggestions(&self, subject: PersonId, limit: Option<usize>) -> Result<Vec<SuggestionPayload>, AtlasError> {
        let state = self.state();
        let limit = limit.unwrap_or(self.config.suggestion_limit);
        let list = suggest(&state.graph, subject, limit, &BTreeSet::new())?;
        Ok(list
            .into_iter()
            .map(|s| {
                let p = state.graph.person(s.person).expect("suggested person exists");
                SuggestionPayload {
                    id: p.id,
                    display_name: p.display_name.clone(),
                    group: p.group.clone(),
                    avatar_ref: p.avatar_ref.clone(),
                    score: s.score,
                    reason: s.reason,
                }
            })
            .collect())
    }

    pub fn floors(&self) -> Vec<FloorPlan> {
        self.state().floors.values().cloned().collect()
    }

    pub fn floor(&self, floor_id: &str) -> Result<FloorPayload, AtlasError> {
        let state = self.state();
        let floor = state
            .floors
            .get(floor_id)
            .ok_or_else(|| AtlasError::NotFound(format!("floor {floor_id:?}")))?
            .clone();
        let occupants = state
            .graph
            .people()
            .filter_map(|p| {
                let o = p.office.as_ref().filter(|o| o.floor_id == floor.floor_id)?;
                Some(Occupant {
                    id: p.id,
                    display_name: p.display_name.clone(),
                    group: p.group.clone(),
                    avatar_ref: p.avatar_ref.clone(),
                    x: o.x,
                    y: o.y,
                })
            })
            .collect();
        Ok(FloorPayload { floor, occupants })
    }

    // ---- analytics -------------------------------------------------------

    pub fn view_stats(&self) -> ViewStats {
        let sessions = analytics::sessionize(&self.events(), self.config.idle_timeout);
        let per_view = analytics::time_per_view(&sessions);
        let participants: BTreeSet<PersonId> = sessions.iter().map(|s| s.actor).collect();
        let total: i64 = sessions.iter().map(|s| s.duration().num_seconds()).sum();
        let average = if sessions.is_empty() {
            0.0
        } else {
            total as f64 / sessions.len() as f64
        };
        let people = participants.len().max(1) as f64;
        ViewStats {
            sessions: sessions.len(),
            participants: participants.len(),
            average_session_seconds: average,
            seconds_per_view: per_view.iter().map(|(&v, d)| (v, d.num_seconds())).collect(),
            seconds_per_view_per_participant: per_view
                .iter()
                .map(|(&v, d)| (v, d.num_seconds() as f64 / people))
                .collect(),
        }
    }

    pub fn source_stats(&self) -> SourceStats {
        let counts = analytics::add_source_breakdown(&self.events());
        SourceStats {
            total: counts.values().sum(),
            counts,
        }
    }

    pub fn confirmation_stats(&self) -> ConfirmationStats {
        let state = self.state();
        analytics::confirmation_stats(&state.graph, &state.registered())
    }

    pub fn third_party_stats(&self) -> ThirdPartyStats {
        analytics::third_party_stats(&self.state().graph)
    }
}
