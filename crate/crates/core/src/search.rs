//! Backtracking beam search over canonized Moser-lattice graphs, maximizing
//! the geometric fractional chromatic number, and the greedy endgame.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::canon::{canonize, children, parents, LatticeGraph};
use crate::error::{Error, Result};
use crate::field::{MoserPoint, Rational};
use crate::io::GraphFile;
use crate::lp::{chi_gf, Mode, NumericConfig, Status};

pub const DEFAULT_BEAM_WIDTH: usize = 100;
pub const DEFAULT_VALUE_TOLERANCE: f64 = 1e-6;
pub const DEFAULT_TIE_CAP: usize = 1_000;
pub const DEFAULT_GREEDY_THRESHOLD: f64 = 0.004;
pub const NUM_VERTICES_MIN: usize = 7;

#[derive(Debug, Clone, PartialEq)]
pub enum Scorer {
    Numeric(NumericConfig),
    Exact,
}

impl Scorer {
    /// χ_gf of `g`, or `None` (logged) if the LP could not be solved.
    pub fn score(&self, g: &LatticeGraph) -> Option<f64> {
        let mode = match self {
            Scorer::Numeric(cfg) => Mode::Numeric(cfg.clone()),
            Scorer::Exact => Mode::exact(),
        };
        let result = g.to_unit_graph().and_then(|u| chi_gf(&u, &mode));
        match result {
            Ok(sol) if sol.status == Status::Optimal => Some(sol.objective),
            Ok(sol) => {
                log::warn!("dropping candidate {:?}: LP status {}", g, sol.status);
                None
            }
            Err(e) => {
                log::warn!("dropping candidate {:?}: {}", g, e);
                None
            }
        }
    }

    pub fn score_exact(g: &LatticeGraph) -> Result<Rational> {
        let sol = chi_gf(&g.to_unit_graph()?, &Mode::exact())?;
        sol.exact
            .map(|e| e.objective)
            .ok_or_else(|| Error::Numeric(format!("exact LP ended with status {}", sol.status)))
    }
}

impl Default for Scorer {
    fn default() -> Self {
        Scorer::Numeric(NumericConfig::default())
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct StopConditions {
    pub target: Option<f64>,
    pub max_iterations: Option<usize>,
    pub max_size: Option<usize>,
    pub wall_clock: Option<Duration>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    TargetReached,
    MaxIterations,
    WallClock,
    /// Every reachable graph within the size limit has been seen.
    Exhausted,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    /// `None` keeps every candidate.
    pub beam_width: Option<usize>,
    /// Bound on beams swollen by tied values.
    pub tie_cap: Option<usize>,
    pub num_vertices_min: usize,
    pub tolerance: f64,
    pub stop: StopConditions,
    pub scorer: Scorer,
}

impl SearchConfig {
    pub fn beam(&self) -> Beam {
        Beam {
            width: self.beam_width,
            tolerance: self.tolerance,
            tie_cap: self.tie_cap,
        }
    }
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            beam_width: Some(DEFAULT_BEAM_WIDTH),
            tie_cap: Some(DEFAULT_TIE_CAP),
            num_vertices_min: NUM_VERTICES_MIN,
            tolerance: DEFAULT_VALUE_TOLERANCE,
            stop: StopConditions::default(),
            scorer: Scorer::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LogEntry {
    pub iteration: usize,
    pub size: usize,
    pub direction: i32,
    pub candidates: usize,
    /// Best value among this iteration's new candidates.
    pub best_value: Option<f64>,
}

/// Scores `graphs` (in parallel), dropping failures, in input order.
fn score_all(scorer: &Scorer, cache: &mut HashMap<LatticeGraph, f64>, graphs: &[LatticeGraph]) {
    let todo: Vec<&LatticeGraph> = graphs.iter().filter(|g| !cache.contains_key(*g)).collect();
    let scored: Vec<(LatticeGraph, Option<f64>)> = todo
        .par_iter()
        .map(|g| ((*g).clone(), scorer.score(g)))
        .collect();
    for (g, v) in scored {
        if let Some(v) = v {
            cache.insert(g, v);
        }
    }
}

/// Sorted by value descending, then canonical form ascending.
fn ranked<'a, I: IntoIterator<Item = &'a LatticeGraph>>(
    graphs: I,
    scores: &HashMap<LatticeGraph, f64>,
) -> Vec<(LatticeGraph, f64)> {
    let mut v: Vec<(LatticeGraph, f64)> = graphs
        .into_iter()
        .filter_map(|g| scores.get(g).map(|s| (g.clone(), *s)))
        .collect();
    v.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    v
}

/// Beam selection rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Beam {
    /// `None` keeps every candidate.
    pub width: Option<usize>,
    /// Values within this of the threshold count as ties.
    pub tolerance: f64,
    /// Upper bound on the beam once ties are included, `None` for no bound.
    pub tie_cap: Option<usize>,
}

/// All graphs scoring at least the value of the `width`-th best (ties
/// kept, up to the cap, in value-then-canonical order).
pub fn get_beam(
    graphs: &BTreeSet<LatticeGraph>,
    scores: &HashMap<LatticeGraph, f64>,
    beam: &Beam,
) -> BTreeSet<LatticeGraph> {
    let r = ranked(graphs, scores);
    let kept: Vec<LatticeGraph> = match beam.width {
        Some(w) if r.len() > w => {
            let threshold = r[w.max(1) - 1].1;
            r.into_iter()
                .filter(|(_, s)| *s >= threshold - beam.tolerance)
                .map(|(g, _)| g)
                .collect()
        }
        _ => r.into_iter().map(|(g, _)| g).collect(),
    };
    let cap = beam
        .tie_cap
        .map_or(usize::MAX, |c| c.max(beam.width.unwrap_or(0)));
    kept.into_iter().take(cap).collect()
}

#[derive(Debug, Clone)]
pub struct SearchState {
    pub seen: BTreeMap<usize, BTreeSet<LatticeGraph>>,
    pub best: BTreeMap<usize, f64>,
    pub forward: BTreeMap<usize, BTreeSet<LatticeGraph>>,
    pub direction: i32,
    pub current: BTreeSet<LatticeGraph>,
    pub size: usize,
    pub iteration: usize,
    pub scores: HashMap<LatticeGraph, f64>,
    pub log: Vec<LogEntry>,
}

impl SearchState {
    /// Initial state with `seen(|start|) = {start}`.
    pub fn new(start: LatticeGraph, scorer: &Scorer) -> Result<Self> {
        let mut scores = HashMap::new();
        score_all(scorer, &mut scores, std::slice::from_ref(&start));
        let v = *scores
            .get(&start)
            .ok_or_else(|| Error::Numeric("could not score the start graph".into()))?;
        let n = start.len();
        Ok(SearchState {
            seen: BTreeMap::from([(n, BTreeSet::from([start.clone()]))]),
            best: BTreeMap::from([(n, v)]),
            forward: BTreeMap::new(),
            direction: 1,
            current: BTreeSet::from([start]),
            size: n + 1,
            iteration: 0,
            scores,
            log: Vec::new(),
        })
    }

    /// Highest value scored among all `n`-vertex graphs seen so far.
    pub fn champions(&self) -> BTreeMap<usize, (LatticeGraph, f64)> {
        let mut out = BTreeMap::new();
        for (&n, set) in &self.seen {
            if let Some((g, v)) = ranked(set, &self.scores).into_iter().next() {
                out.insert(n, (g, v));
            }
        }
        out
    }

    pub fn best_value(&self) -> f64 {
        self.champions()
            .values()
            .map(|(_, v)| *v)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// `n,best_chi_gf` rows for every size seen.
    pub fn figure2_csv(&self) -> String {
        let mut s = String::from("n,best_chi_gf\n");
        for (n, (_, v)) in self.champions() {
            writeln!(s, "{},{:.12}", n, v).unwrap();
        }
        s
    }

    pub fn log_csv(&self) -> String {
        let mut s = String::from("iteration,size,direction,candidates,best_value\n");
        for e in &self.log {
            let best = e
                .best_value
                .map(|v| format!("{:.12}", v))
                .unwrap_or_default();
            writeln!(
                s,
                "{},{},{},{},{}",
                e.iteration, e.size, e.direction, e.candidates, best
            )
            .unwrap();
        }
        s
    }

    /// Text checkpoint. Graphs are blocks of `a b c d` lines, each opened by
    /// a `graph <value>` line, grouped into `seen`, `forward` and `current`
    /// sections.
    pub fn to_checkpoint(&self) -> String {
        let mut s = String::from("# search checkpoint\n");
        writeln!(
            s,
            "state {} {} {}",
            self.iteration, self.size, self.direction
        )
        .unwrap();
        for (n, v) in &self.best {
            writeln!(s, "best {} {:?}", n, v).unwrap();
        }
        let block = |s: &mut String, head: String, set: &BTreeSet<LatticeGraph>| {
            s.push_str(&head);
            s.push('\n');
            for g in set {
                match self.scores.get(g) {
                    Some(v) => writeln!(s, "graph {:?}", v).unwrap(),
                    None => s.push_str("graph\n"),
                }
                s.push_str(&g.to_graph_file().to_text());
            }
        };
        for (n, set) in &self.seen {
            block(&mut s, format!("seen {}", n), set);
        }
        for (n, set) in &self.forward {
            block(&mut s, format!("forward {}", n), set);
        }
        block(&mut s, "current".into(), &self.current);
        s
    }

    pub fn from_checkpoint(text: &str) -> Result<Self> {
        let bad = |m: String| Error::Parse(format!("checkpoint: {}", m));
        let mut state = SearchState {
            seen: BTreeMap::new(),
            best: BTreeMap::new(),
            forward: BTreeMap::new(),
            direction: 1,
            current: BTreeSet::new(),
            size: 0,
            iteration: 0,
            scores: HashMap::new(),
            log: Vec::new(),
        };
        enum Target {
            None,
            Seen(usize),
            Forward(usize),
            Current,
        }
        let mut target = Target::None;
        let mut pending: Option<(Option<f64>, Vec<MoserPoint>)> = None;
        let flush = |state: &mut SearchState,
                     target: &Target,
                     pending: &mut Option<(Option<f64>, Vec<MoserPoint>)>| {
            if let Some((v, pts)) = pending.take() {
                let g = LatticeGraph::new(pts);
                if let Some(v) = v {
                    state.scores.insert(g.clone(), v);
                }
                match target {
                    Target::Seen(n) => {
                        state.seen.entry(*n).or_default().insert(g);
                    }
                    Target::Forward(n) => {
                        state.forward.entry(*n).or_default().insert(g);
                    }
                    Target::Current => {
                        state.current.insert(g);
                    }
                    Target::None => {}
                }
            }
        };
        for line in text.lines() {
            let tok: Vec<&str> = line.split_whitespace().collect();
            match tok.as_slice() {
                [] => {}
                [c, ..] if c.starts_with('#') => {}
                ["state", it, size, dir] => {
                    state.iteration = it.parse().map_err(|_| bad(line.into()))?;
                    state.size = size.parse().map_err(|_| bad(line.into()))?;
                    state.direction = dir.parse().map_err(|_| bad(line.into()))?;
                }
                ["best", n, v] => {
                    state.best.insert(
                        n.parse().map_err(|_| bad(line.into()))?,
                        v.parse().map_err(|_| bad(line.into()))?,
                    );
                }
                ["seen", n] | ["forward", n] => {
                    flush(&mut state, &target, &mut pending);
                    let n: usize = n.parse().map_err(|_| bad(line.into()))?;
                    target = if tok[0] == "seen" {
                        Target::Seen(n)
                    } else {
                        Target::Forward(n)
                    };
                }
                ["current"] => {
                    flush(&mut state, &target, &mut pending);
                    target = Target::Current;
                }
                ["graph", rest @ ..] => {
                    flush(&mut state, &target, &mut pending);
                    let v = match rest {
                        [] => None,
                        [v] => Some(v.parse().map_err(|_| bad(line.into()))?),
                        _ => return Err(bad(line.into())),
                    };
                    pending = Some((v, Vec::new()));
                }
                _ => {
                    let p: MoserPoint =
                        line.parse().map_err(|e| bad(format!("{}: {}", line, e)))?;
                    pending
                        .as_mut()
                        .ok_or_else(|| bad("point outside a graph block".into()))?
                        .1
                        .push(p);
                }
            }
        }
        flush(&mut state, &target, &mut pending);
        if state.size == 0 {
            return Err(bad("missing state line".into()));
        }
        Ok(state)
    }
}

#[derive(Debug, Clone)]
pub struct SearchRun {
    pub state: SearchState,
    pub reason: StopReason,
}

fn stop_reason(state: &SearchState, cfg: &SearchConfig, started: Instant) -> Option<StopReason> {
    if let Some(t) = cfg.stop.target {
        if state.scores.values().any(|v| *v >= t - cfg.tolerance) {
            return Some(StopReason::TargetReached);
        }
    }
    if cfg
        .stop
        .max_iterations
        .is_some_and(|m| state.iteration >= m)
    {
        return Some(StopReason::MaxIterations);
    }
    if cfg.stop.wall_clock.is_some_and(|w| started.elapsed() >= w) {
        return Some(StopReason::WallClock);
    }
    None
}

/// Runs the backtracking beam search from `start`.
pub fn beam_search(start: LatticeGraph, cfg: &SearchConfig) -> Result<SearchRun> {
    let state = SearchState::new(start, &cfg.scorer)?;
    resume_search(state, cfg)
}

/// Continues a search from a (possibly checkpointed) state.
pub fn resume_search(mut st: SearchState, cfg: &SearchConfig) -> Result<SearchRun> {
    let started = Instant::now();
    let tol = cfg.tolerance;
    let beam_rule = cfg.beam();
    loop {
        if let Some(reason) = stop_reason(&st, cfg, started) {
            return Ok(SearchRun { state: st, reason });
        }
        let i = st.size;
        let mut cand: BTreeSet<LatticeGraph> = BTreeSet::new();
        for x in &st.current {
            if st.direction == 1 {
                cand.extend(children(x));
            } else if x.len() >= 2 {
                cand.extend(parents(x)?);
            }
        }
        if let Some(seen) = st.seen.get(&i) {
            cand.retain(|g| !seen.contains(g));
        }
        let cand_vec: Vec<LatticeGraph> = cand.iter().cloned().collect();
        score_all(&cfg.scorer, &mut st.scores, &cand_vec);
        cand.retain(|g| st.scores.contains_key(g));
        let direction = st.direction;
        st.iteration += 1;

        if cand.is_empty() {
            st.log.push(LogEntry {
                iteration: st.iteration,
                size: i,
                direction,
                candidates: 0,
                best_value: None,
            });
            let top = st
                .seen
                .iter()
                .rev()
                .find(|(_, s)| !s.is_empty())
                .map(|(n, _)| *n)
                .expect("start graph is seen");
            if cfg.stop.max_size.is_some_and(|m| top + 1 > m) {
                return Ok(SearchRun {
                    state: st,
                    reason: StopReason::Exhausted,
                });
            }
            st.direction = 1;
            st.size = top + 1;
            st.current = get_beam(&st.seen[&top], &st.scores, &beam_rule);
            continue;
        }

        st.seen.entry(i).or_default().extend(cand.iter().cloned());
        let new_best = cand
            .iter()
            .map(|g| st.scores[g])
            .fold(f64::NEG_INFINITY, f64::max);
        st.log.push(LogEntry {
            iteration: st.iteration,
            size: i,
            direction,
            candidates: cand.len(),
            best_value: Some(new_best),
        });
        let best_i = st.best.get(&i).copied().unwrap_or(0.0);
        if new_best >= best_i - tol && i > cfg.num_vertices_min {
            st.best.insert(i, best_i.max(new_best));
            st.direction = -1;
            let beam = get_beam(&cand, &st.scores, &beam_rule);
            let mut fwd = st.forward.remove(&i).unwrap_or_default();
            fwd.extend(beam.iter().cloned());
            st.forward.insert(i, get_beam(&fwd, &st.scores, &beam_rule));
            st.current = beam;
        } else {
            st.direction = 1;
            let mut fwd = st.forward.remove(&i).unwrap_or_default();
            fwd.extend(cand);
            st.current = get_beam(&fwd, &st.scores, &beam_rule);
        }
        let next = i as i64 + st.direction as i64;
        st.size = next as usize;
        if st.direction == 1 && cfg.stop.max_size.is_some_and(|m| st.size > m) {
            st.direction = -1;
            st.size = i - 1;
        }
    }
}

#[derive(Debug, Clone)]
pub struct GreedyConfig {
    pub threshold: f64,
    pub children_only: bool,
    pub tolerance: f64,
    pub stop: StopConditions,
    pub scorer: Scorer,
}

impl Default for GreedyConfig {
    fn default() -> Self {
        GreedyConfig {
            threshold: DEFAULT_GREEDY_THRESHOLD,
            children_only: true,
            tolerance: DEFAULT_VALUE_TOLERANCE,
            stop: StopConditions::default(),
            scorer: Scorer::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct GreedyRun {
    /// Visited graphs with their values, starting with the start graph.
    pub path: Vec<(LatticeGraph, f64)>,
    pub log: Vec<LogEntry>,
    /// `None` when halted at a local maximum.
    pub reason: Option<StopReason>,
}

impl GreedyRun {
    pub fn log_csv(&self) -> String {
        let state = SearchState {
            seen: BTreeMap::new(),
            best: BTreeMap::new(),
            forward: BTreeMap::new(),
            direction: 1,
            current: BTreeSet::new(),
            size: 0,
            iteration: 0,
            scores: HashMap::new(),
            log: self.log.clone(),
        };
        state.log_csv()
    }
}

/// Beam width one: move to the best-valued neighbour if it improves the
/// current value by at least the threshold.
pub fn greedy_search(start: LatticeGraph, cfg: &GreedyConfig) -> Result<GreedyRun> {
    let started = Instant::now();
    let mut scores = HashMap::new();
    score_all(&cfg.scorer, &mut scores, std::slice::from_ref(&start));
    let v0 = *scores
        .get(&start)
        .ok_or_else(|| Error::Numeric("could not score the start graph".into()))?;
    let mut run = GreedyRun {
        path: vec![(start, v0)],
        log: Vec::new(),
        reason: None,
    };
    loop {
        let (cur, v) = run.path.last().cloned().expect("nonempty path");
        if cfg.stop.target.is_some_and(|t| v >= t - cfg.tolerance) {
            run.reason = Some(StopReason::TargetReached);
            return Ok(run);
        }
        if cfg.stop.max_iterations.is_some_and(|m| run.log.len() >= m) {
            run.reason = Some(StopReason::MaxIterations);
            return Ok(run);
        }
        if cfg.stop.wall_clock.is_some_and(|w| started.elapsed() >= w) {
            run.reason = Some(StopReason::WallClock);
            return Ok(run);
        }
        let mut cand = children(&cur);
        if cfg.stop.max_size.is_some_and(|m| cur.len() + 1 > m) {
            cand.clear();
        }
        if !cfg.children_only && cur.len() >= 2 {
            cand.extend(parents(&cur)?);
        }
        let cand_vec: Vec<LatticeGraph> = cand.iter().cloned().collect();
        score_all(&cfg.scorer, &mut scores, &cand_vec);
        let order = ranked(&cand, &scores);
        run.log.push(LogEntry {
            iteration: run.log.len() + 1,
            size: cur.len() + 1,
            direction: 1,
            candidates: order.len(),
            best_value: order.first().map(|(_, s)| *s),
        });
        match order
            .into_iter()
            .find(|(_, s)| *s - v >= cfg.threshold - cfg.tolerance)
        {
            Some(next) => run.path.push(next),
            None => return Ok(run),
        }
    }
}

#[derive(Debug, Clone)]
pub struct DescendantReport {
    pub base: (LatticeGraph, f64),
    pub children: Vec<(LatticeGraph, f64)>,
    /// Randomly sampled children of children.
    pub grandchildren: Vec<(LatticeGraph, f64)>,
}

impl DescendantReport {
    /// Whether every scored descendant matches the base value within `tol`.
    pub fn all_equal(&self, tol: f64) -> bool {
        let v = self.base.1;
        self.children
            .iter()
            .chain(&self.grandchildren)
            .all(|(_, s)| (s - v).abs() <= tol)
    }

    pub fn min_value(&self) -> f64 {
        self.children
            .iter()
            .chain(&self.grandchildren)
            .map(|(_, s)| *s)
            .fold(self.base.1, f64::min)
    }
}

/// Scores all children of `g` and `samples` random grandchildren.
pub fn descendants(
    g: &LatticeGraph,
    samples: usize,
    seed: u64,
    scorer: &Scorer,
) -> Result<DescendantReport> {
    let mut scores = HashMap::new();
    score_all(scorer, &mut scores, std::slice::from_ref(g));
    let base = *scores
        .get(g)
        .ok_or_else(|| Error::Numeric("could not score the graph".into()))?;
    let kids: Vec<LatticeGraph> = children(g).into_iter().collect();
    score_all(scorer, &mut scores, &kids);
    let mut pool: BTreeSet<LatticeGraph> = BTreeSet::new();
    for k in &kids {
        pool.extend(children(k));
    }
    let mut pool: Vec<LatticeGraph> = pool.into_iter().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    pool.shuffle(&mut rng);
    pool.truncate(samples);
    pool.sort();
    score_all(scorer, &mut scores, &pool);
    let pick = |v: &[LatticeGraph]| -> Vec<(LatticeGraph, f64)> {
        v.iter()
            .filter_map(|x| scores.get(x).map(|s| (x.clone(), *s)))
            .collect()
    };
    Ok(DescendantReport {
        base: (g.clone(), base),
        children: pick(&kids),
        grandchildren: pick(&pool),
    })
}

/// All canonized graphs reachable from `start` by repeated children, grouped
/// by size, up to `max_size` vertices.
pub fn descendant_closure(
    start: &LatticeGraph,
    max_size: usize,
) -> BTreeMap<usize, BTreeSet<LatticeGraph>> {
    let mut out: BTreeMap<usize, BTreeSet<LatticeGraph>> = BTreeMap::new();
    let mut layer = BTreeSet::from([start.clone()]);
    let mut n = start.len();
    while n <= max_size && !layer.is_empty() {
        out.insert(n, layer.clone());
        if n == max_size {
            break;
        }
        let next: Vec<BTreeSet<LatticeGraph>> = layer.par_iter().map(children).collect();
        layer = next.into_iter().flatten().collect();
        n += 1;
    }
    out
}

/// Reads a single graph from a vertex file and canonizes it.
pub fn canonical_from_file(file: &GraphFile) -> Result<LatticeGraph> {
    canonize(&file.points())
}
