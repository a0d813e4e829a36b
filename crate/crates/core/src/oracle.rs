//! Offline maximum matchings and competitive-ratio evaluation of online runs.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::engine::{ArrivalOutcome, CheckMode, EngineError, InvariantReport, MatchState, Property, Runner};
use crate::instances::ArrivalStream;
use crate::numeric::{golden_c, rat, Golden, GoldenRepr};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("exhaustive search is limited to {limit} edges, got {got}")]
    TooLarge { limit: usize, got: usize },
}

pub const BRUTE_FORCE_LIMIT: usize = 20;

/// Undirected simple graph over dense vertex indices.
#[derive(Clone, Debug, Default)]
pub struct Graph {
    names: Vec<String>,
    index: HashMap<String, usize>,
    pub edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_edges<'a, I>(edges: I) -> Self
    where
        I: IntoIterator<Item = &'a (String, String)>,
    {
        let mut g = Graph::new();
        for (u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    fn vertex(&mut self, name: &str) -> usize {
        if let Some(&i) = self.index.get(name) {
            return i;
        }
        let i = self.names.len();
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), i);
        self.adj.push(Vec::new());
        i
    }

    /// Adds an edge and returns its index.
    pub fn add_edge(&mut self, u: &str, v: &str) -> usize {
        let (a, b) = (self.vertex(u), self.vertex(v));
        self.adj[a].push(b);
        self.adj[b].push(a);
        self.edges.push((a, b));
        self.edges.len() - 1
    }

    pub fn vertex_count(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }
}

/// A set of edge indices of a [`Graph`], pairwise vertex-disjoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matching {
    pub edges: Vec<usize>,
}

impl Matching {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn is_valid_in(&self, g: &Graph) -> bool {
        let mut used = HashSet::new();
        self.edges.iter().all(|&e| {
            e < g.edges.len() && {
                let (a, b) = g.edges[e];
                used.insert(a) && used.insert(b)
            }
        })
    }
}

/// Edmonds' augmenting-path search with blossom contraction.
struct Blossom<'a> {
    adj: &'a [Vec<usize>],
    mate: &'a mut Vec<Option<usize>>,
    parent: Vec<Option<usize>>,
    base: Vec<usize>,
    used: Vec<bool>,
    in_blossom: Vec<bool>,
}

impl<'a> Blossom<'a> {
    fn new(adj: &'a [Vec<usize>], mate: &'a mut Vec<Option<usize>>) -> Self {
        let n = adj.len();
        Blossom {
            adj,
            mate,
            parent: vec![None; n],
            base: (0..n).collect(),
            used: vec![false; n],
            in_blossom: vec![false; n],
        }
    }

    fn lca(&self, mut a: usize, mut b: usize) -> usize {
        let mut seen = vec![false; self.adj.len()];
        loop {
            a = self.base[a];
            seen[a] = true;
            match self.mate[a] {
                None => break,
                Some(m) => a = self.parent[m].expect("outer vertex has a parent"),
            }
        }
        loop {
            b = self.base[b];
            if seen[b] {
                return b;
            }
            let m = self.mate[b].expect("path reaches the root");
            b = self.parent[m].expect("outer vertex has a parent");
        }
    }

    fn mark_path(&mut self, mut v: usize, b: usize, mut child: usize) {
        while self.base[v] != b {
            let m = self.mate[v].expect("blossom vertex is matched");
            self.in_blossom[self.base[v]] = true;
            self.in_blossom[self.base[m]] = true;
            self.parent[v] = Some(child);
            child = m;
            v = self.parent[m].expect("outer vertex has a parent");
        }
    }

    /// Searches for an augmenting path from `root`; returns its free end.
    fn find_path(&mut self, root: usize) -> Option<usize> {
        let n = self.adj.len();
        self.used.iter_mut().for_each(|u| *u = false);
        self.parent.iter_mut().for_each(|p| *p = None);
        for (i, b) in self.base.iter_mut().enumerate() {
            *b = i;
        }
        self.used[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for idx in 0..self.adj[v].len() {
                let to = self.adj[v][idx];
                if self.base[v] == self.base[to] || self.mate[v] == Some(to) {
                    continue;
                }
                let to_outer = to == root || self.mate[to].is_some_and(|m| self.parent[m].is_some());
                if to_outer {
                    let cur = self.lca(v, to);
                    self.in_blossom.iter_mut().for_each(|b| *b = false);
                    self.mark_path(v, cur, to);
                    self.mark_path(to, cur, v);
                    for i in 0..n {
                        if self.in_blossom[self.base[i]] {
                            self.base[i] = cur;
                            if !self.used[i] {
                                self.used[i] = true;
                                queue.push_back(i);
                            }
                        }
                    }
                } else if self.parent[to].is_none() {
                    self.parent[to] = Some(v);
                    match self.mate[to] {
                        None => return Some(to),
                        Some(m) => {
                            self.used[m] = true;
                            queue.push_back(m);
                        }
                    }
                }
            }
        }
        None
    }

    fn augment(&mut self, mut v: usize) {
        loop {
            let pv = self.parent[v].expect("augmenting path is rooted");
            let next = self.mate[pv];
            self.mate[v] = Some(pv);
            self.mate[pv] = Some(v);
            match next {
                None => break,
                Some(n) => v = n,
            }
        }
    }

    fn try_root(&mut self, root: usize) -> bool {
        match self.find_path(root) {
            Some(end) => {
                self.augment(end);
                true
            }
            None => false,
        }
    }
}

/// Maximum-cardinality matching of a general graph.
pub fn max_matching(g: &Graph) -> Matching {
    let n = g.vertex_count();
    let mut mate = vec![None; n];
    // Greedy start, then one search per still-free vertex.
    for &(a, b) in &g.edges {
        if mate[a].is_none() && mate[b].is_none() {
            mate[a] = Some(b);
            mate[b] = Some(a);
        }
    }
    {
        let mut bl = Blossom::new(&g.adj, &mut mate);
        for v in 0..n {
            if bl.mate[v].is_none() {
                bl.try_root(v);
            }
        }
    }
    let mut edges = Vec::new();
    let mut taken = vec![false; n];
    for (i, &(a, b)) in g.edges.iter().enumerate() {
        if mate[a] == Some(b) && !taken[a] {
            taken[a] = true;
            taken[b] = true;
            edges.push(i);
        }
    }
    Matching { edges }
}

/// Exhaustive maximum matching size, for cross-checking.
pub fn max_matching_bruteforce(g: &Graph) -> Result<usize, OracleError> {
    if g.edges.len() > BRUTE_FORCE_LIMIT {
        return Err(OracleError::TooLarge { limit: BRUTE_FORCE_LIMIT, got: g.edges.len() });
    }
    fn go(edges: &[(usize, usize)], i: usize, used: &mut Vec<bool>) -> usize {
        if i == edges.len() {
            return 0;
        }
        let skip = go(edges, i + 1, used);
        let (a, b) = edges[i];
        if used[a] || used[b] {
            return skip;
        }
        used[a] = true;
        used[b] = true;
        let take = 1 + go(edges, i + 1, used);
        used[a] = false;
        used[b] = false;
        skip.max(take)
    }
    Ok(go(&g.edges, 0, &mut vec![false; g.vertex_count()]))
}

/// Maximum matching size maintained under edge insertions.
///
/// An insertion raises the optimum by at most one, and any augmenting path
/// must use the new edge; if an endpoint is free the search starts there,
/// otherwise every free vertex of the new edge's component is tried.
#[derive(Clone, Debug, Default)]
pub struct IncrementalMatching {
    graph: Graph,
    mate: Vec<Option<usize>>,
    size: usize,
}

impl IncrementalMatching {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    /// Inserts an edge and returns the new optimum.
    pub fn add_edge(&mut self, u: &str, v: &str) -> usize {
        let e = self.graph.add_edge(u, v);
        self.mate.resize(self.graph.vertex_count(), None);
        let (a, b) = self.graph.edges[e];
        let roots: Vec<usize> = match (self.mate[a], self.mate[b]) {
            (None, None) => {
                self.mate[a] = Some(b);
                self.mate[b] = Some(a);
                self.size += 1;
                return self.size;
            }
            (None, Some(_)) => vec![a],
            (Some(_), None) => vec![b],
            (Some(_), Some(_)) => self.free_in_component(a),
        };
        let mut bl = Blossom::new(&self.graph.adj, &mut self.mate);
        for r in roots {
            if bl.try_root(r) {
                self.size += 1;
                break;
            }
        }
        self.size
    }

    fn free_in_component(&self, start: usize) -> Vec<usize> {
        let mut seen = vec![false; self.graph.vertex_count()];
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        let mut free = Vec::new();
        while let Some(v) = queue.pop_front() {
            if self.mate[v].is_none() {
                free.push(v);
            }
            for &w in &self.graph.adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        free
    }
}

/// Maximum matching size after each batch of a stream.
pub fn mu_sequence(stream: &ArrivalStream) -> Vec<usize> {
    let mut inc = IncrementalMatching::new();
    stream
        .batches()
        .iter()
        .map(|batch| {
            for (u, v) in batch.iter() {
                inc.add_edge(u, v);
            }
            inc.size()
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Checkpoints {
    EveryArrival,
    EveryBatch,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatioRecord {
    pub step: usize,
    pub alg_value: Golden,
    pub opt: usize,
}

impl RatioRecord {
    /// `alg/opt`, or `None` while the graph is empty.
    pub fn ratio(&self) -> Option<Golden> {
        (self.opt > 0).then(|| self.alg_value.scale(&rat(1, self.opt as i64)))
    }

    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Line {
            step: usize,
            alg: GoldenRepr,
            opt: usize,
            ratio: Option<String>,
        }
        serde_json::to_value(Line {
            step: self.step,
            alg: GoldenRepr::from(&self.alg_value),
            opt: self.opt,
            ratio: self.ratio().map(|r| r.to_decimal(10)),
        })
        .expect("serializable")
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RatioTrace {
    pub records: Vec<RatioRecord>,
    /// Smallest `alg/opt` over the checkpoints with `opt > 0`.
    pub min_ratio: Option<Golden>,
    /// First checkpoint step where `alg < c·opt`.
    pub below_c_at: Option<usize>,
}

/// Full record of replaying a stream through the engine.
#[derive(Clone, Debug)]
pub struct Run {
    pub state: MatchState,
    pub outcomes: Vec<ArrivalOutcome>,
    pub trace: RatioTrace,
    /// First invariant failure in strict mode: step, property, location.
    pub invariant_failure: Option<(usize, Property, String)>,
}

/// Replays `stream` through the engine, comparing against the offline
/// optimum at each checkpoint.
pub fn run_stream(stream: &ArrivalStream, checkpoints: Checkpoints, mode: CheckMode) -> Result<Run, EngineError> {
    run_stream_with(stream, checkpoints, mode, |_, _, _, _| {})
}

/// [`run_stream`] with an observer called after every arrival with the new
/// state, the arrival, its invariant report and, at checkpoints, the ratio
/// record.
pub fn run_stream_with<F>(
    stream: &ArrivalStream,
    checkpoints: Checkpoints,
    mode: CheckMode,
    mut observe: F,
) -> Result<Run, EngineError>
where
    F: FnMut(&MatchState, &ArrivalOutcome, Option<&InvariantReport>, Option<&RatioRecord>),
{
    let c = golden_c();
    let mut runner = Runner::new(mode);
    let mut opt = IncrementalMatching::new();
    let mut outcomes = Vec::with_capacity(stream.len());
    let mut trace = RatioTrace::default();
    let mut invariant_failure = None;
    let marks: HashSet<usize> = match (&stream.batch_marks, checkpoints) {
        (Some(m), Checkpoints::EveryBatch) => m.iter().copied().collect(),
        (None, Checkpoints::EveryBatch) => HashSet::from([stream.len()]),
        (_, Checkpoints::EveryArrival) => (1..=stream.len()).collect(),
    };
    for (i, (u, v)) in stream.arrivals.iter().enumerate() {
        let (outcome, report) = runner.step(u, v)?;
        if invariant_failure.is_none() {
            if let Some((p, loc)) = report.as_ref().and_then(|r| r.first_failure()) {
                invariant_failure = Some((i + 1, p, runner.state.describe(&loc)));
            }
        }
        let size = opt.add_edge(u, v);
        let mut record = None;
        if marks.contains(&(i + 1)) {
            let rec = RatioRecord { step: i + 1, alg_value: runner.state.alg_value(), opt: size };
            if size > 0 {
                let bound = c.scale(&rat(size as i64, 1));
                if rec.alg_value < bound && trace.below_c_at.is_none() {
                    trace.below_c_at = Some(i + 1);
                }
                let r = rec.ratio().expect("opt > 0");
                trace.min_ratio = Some(match trace.min_ratio.take() {
                    Some(m) => m.min(r),
                    None => r,
                });
            }
            record = Some(rec);
        }
        observe(&runner.state, &outcome, report.as_ref(), record.as_ref());
        outcomes.push(outcome);
        trace.records.extend(record);
    }
    Ok(Run { state: runner.state, outcomes, trace, invariant_failure })
}

/// Ratio trace of the engine on `stream`, without invariant checks.
pub fn competitive_trace(stream: &ArrivalStream, checkpoints: Checkpoints) -> Result<RatioTrace, EngineError> {
    run_stream(stream, checkpoints, CheckMode::OnDemand).map(|r| r.trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::consistent_instance;

    fn graph(edges: &[(&str, &str)]) -> Graph {
        let owned: Vec<(String, String)> = edges.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
        Graph::from_edges(&owned)
    }

    #[test]
    fn triangle_and_paths() {
        let tri = graph(&[("a", "b"), ("b", "c"), ("c", "a")]);
        assert_eq!(max_matching(&tri).len(), 1);
        assert_eq!(max_matching_bruteforce(&tri).unwrap(), 1);
        let p5 = graph(&[("0", "1"), ("1", "2"), ("2", "3"), ("3", "4"), ("4", "5")]);
        assert_eq!(max_matching_bruteforce(&p5).unwrap(), 3);
        assert_eq!(max_matching(&p5).len(), 3);
        assert_eq!(max_matching_bruteforce(&Graph::new()).unwrap(), 0);
        assert_eq!(max_matching_bruteforce(&graph(&[("a", "b")])).unwrap(), 1);
    }

    #[test]
    fn blossom_needed() {
        // Odd cycle with a stem: greedy picks poorly, blossom search repairs it.
        let g = graph(&[("a", "b"), ("b", "c"), ("c", "d"), ("d", "e"), ("e", "a"), ("c", "x"), ("a", "y")]);
        let m = max_matching(&g);
        assert!(m.is_valid_in(&g));
        assert_eq!(m.len(), max_matching_bruteforce(&g).unwrap());
        assert_eq!(m.len(), 3);
    }

    #[test]
    fn consistent_instance_is_perfectly_matchable() {
        let s = consistent_instance(4).unwrap();
        let g = Graph::from_edges(&s.arrivals);
        assert_eq!(max_matching(&g).len(), 6);
        assert_eq!(max_matching_bruteforce(&g).unwrap(), 6);
    }

    #[test]
    fn incremental_agrees_with_batch() {
        let s = crate::instances::random_stream(3, 30, 3).unwrap();
        let mut inc = IncrementalMatching::new();
        for (k, (u, v)) in s.arrivals.iter().enumerate() {
            inc.add_edge(u, v);
            let g = Graph::from_edges(&s.arrivals[..=k]);
            assert_eq!(inc.size(), max_matching(&g).len());
        }
    }

    #[test]
    fn brute_force_cap() {
        let edges: Vec<(String, String)> = (0..21).map(|i| (format!("a{i}"), format!("b{i}"))).collect();
        assert_eq!(
            max_matching_bruteforce(&Graph::from_edges(&edges)),
            Err(OracleError::TooLarge { limit: 20, got: 21 })
        );
    }

    #[test]
    fn ratio_on_small_streams() {
        let single = ArrivalStream::parse("max_degree 3\nedge a b\n").unwrap();
        let t = competitive_trace(&single, Checkpoints::EveryArrival).unwrap();
        assert_eq!(t.min_ratio, Some(golden_c()));
        let t = competitive_trace(&consistent_instance(4).unwrap(), Checkpoints::EveryArrival).unwrap();
        let last = t.records.last().unwrap();
        assert_eq!(last.opt, 6);
        assert_eq!(last.alg_value, golden_c().scale(&rat(6, 1)));
        assert_eq!(last.ratio(), Some(golden_c()));
        assert!(t.below_c_at.is_none());
    }
}
