//! Arrival streams: the adversarial constructions, random legal streams and
//! a line-oriented instance file format.
//!
//! # Instance file grammar
//!
//! One directive per line; `#` starts a comment, blank lines are ignored.
//!
//! ```text
//! max_degree <3|4>          required, first directive
//! edges <count>             optional, checked against the edge lines
//! batches <count>           optional, checked against the batch lines
//! meta <key> <value...>     free-form metadata
//! edge <u> <v>              next arrival
//! batch                     closes the current batch (at least one edge)
//! opt <mu>                  maximum matching size after the next batch
//! ```
//!
//! When any `batch` line is present every edge must belong to a closed batch.
//! `opt` lines, if present, must number exactly one per batch.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("vertex {vertex} reaches degree {degree} above the declared maximum {cap}")]
    DegreeViolation { vertex: String, degree: usize, cap: usize },
    #[error("self-loop at {0}")]
    SelfLoop(String),
    #[error("edge {0} {1} appears twice")]
    DuplicateEdge(String, String),
    #[error("invalid batch marks: {0}")]
    BatchMarks(String),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("unknown instance {0:?}")]
    Unknown(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// An ordered list of edge arrivals, optionally grouped into batches.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ArrivalStream {
    pub name: String,
    pub arrivals: Vec<(String, String)>,
    /// Exclusive end index of each batch; the last equals `arrivals.len()`.
    pub batch_marks: Option<Vec<usize>>,
    pub declared_max_degree: usize,
    /// Maximum matching size after each batch.
    pub expected_opt_per_batch: Option<Vec<usize>>,
    pub meta: Vec<(String, String)>,
}

impl ArrivalStream {
    fn new(name: impl Into<String>, max_degree: usize) -> Self {
        ArrivalStream {
            name: name.into(),
            declared_max_degree: max_degree,
            ..Default::default()
        }
    }

    fn push(&mut self, u: impl Into<String>, v: impl Into<String>) {
        self.arrivals.push((u.into(), v.into()));
    }

    fn close_batch(&mut self) {
        let end = self.arrivals.len();
        self.batch_marks.get_or_insert_with(Vec::new).push(end);
    }

    pub fn len(&self) -> usize {
        self.arrivals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrivals.is_empty()
    }

    /// Arrivals grouped by batch; a stream without marks is a single batch.
    pub fn batches(&self) -> Vec<&[(String, String)]> {
        match &self.batch_marks {
            None => vec![&self.arrivals[..]],
            Some(marks) => {
                let mut start = 0;
                marks
                    .iter()
                    .map(|&end| {
                        let b = &self.arrivals[start..end];
                        start = end;
                        b
                    })
                    .collect()
            }
        }
    }

    /// Checks simplicity, the degree cap and the batch structure.
    pub fn validate(&self) -> Result<(), InstanceError> {
        let mut degree: HashMap<&str, usize> = HashMap::new();
        let mut seen: HashSet<(&str, &str)> = HashSet::new();
        for (u, v) in &self.arrivals {
            if u == v {
                return Err(InstanceError::SelfLoop(u.clone()));
            }
            let k = if u < v { (u.as_str(), v.as_str()) } else { (v.as_str(), u.as_str()) };
            if !seen.insert(k) {
                return Err(InstanceError::DuplicateEdge(u.clone(), v.clone()));
            }
            for w in [u, v] {
                let d = degree.entry(w.as_str()).or_insert(0);
                *d += 1;
                if *d > self.declared_max_degree {
                    return Err(InstanceError::DegreeViolation {
                        vertex: w.clone(),
                        degree: *d,
                        cap: self.declared_max_degree,
                    });
                }
            }
        }
        if let Some(marks) = &self.batch_marks {
            if marks.is_empty() {
                return Err(InstanceError::BatchMarks("no batches".into()));
            }
            if marks.windows(2).any(|w| w[0] >= w[1]) || marks[0] == 0 {
                return Err(InstanceError::BatchMarks("marks must strictly increase from 1".into()));
            }
            if *marks.last().unwrap() != self.arrivals.len() {
                return Err(InstanceError::BatchMarks("last mark must equal the edge count".into()));
            }
        }
        if let Some(mu) = &self.expected_opt_per_batch {
            let batches = self.batch_marks.as_ref().map_or(1, Vec::len);
            if mu.len() != batches {
                return Err(InstanceError::BatchMarks(format!(
                    "{} opt values for {} batches",
                    mu.len(),
                    batches
                )));
            }
        }
        Ok(())
    }

    pub fn to_file_string(&self) -> String {
        let mut out = String::new();
        writeln!(out, "max_degree {}", self.declared_max_degree).unwrap();
        writeln!(out, "edges {}", self.arrivals.len()).unwrap();
        if let Some(marks) = &self.batch_marks {
            writeln!(out, "batches {}", marks.len()).unwrap();
        }
        if !self.name.is_empty() {
            writeln!(out, "meta name {}", self.name).unwrap();
        }
        for (k, v) in &self.meta {
            writeln!(out, "meta {k} {v}").unwrap();
        }
        let marks = self.batch_marks.clone().unwrap_or_default();
        let mut next_mark = marks.iter().peekable();
        for (i, (u, v)) in self.arrivals.iter().enumerate() {
            writeln!(out, "edge {u} {v}").unwrap();
            if next_mark.peek() == Some(&&(i + 1)) {
                next_mark.next();
                writeln!(out, "batch").unwrap();
            }
        }
        if let Some(mu) = &self.expected_opt_per_batch {
            for m in mu {
                writeln!(out, "opt {m}").unwrap();
            }
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self, InstanceError> {
        let err = |line: usize, message: &str| InstanceError::Parse { line, message: message.into() };
        let mut stream = ArrivalStream::default();
        let mut declared_edges = None;
        let mut declared_batches = None;
        let mut opts = Vec::new();
        let mut saw_degree = false;
        let mut last_line = 0;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            last_line = line;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let tokens: Vec<&str> = content.split_whitespace().collect();
            if !saw_degree && tokens[0] != "max_degree" {
                return Err(err(line, "expected max_degree before other directives"));
            }
            let number = |t: Option<&&str>| -> Result<usize, InstanceError> {
                t.and_then(|s| s.parse().ok()).ok_or_else(|| err(line, "expected a non-negative integer"))
            };
            match tokens[0] {
                "max_degree" => {
                    if saw_degree || tokens.len() != 2 {
                        return Err(err(line, "max_degree takes one value and appears once"));
                    }
                    let d = number(tokens.get(1))?;
                    if d != 3 && d != 4 {
                        return Err(err(line, "max_degree must be 3 or 4"));
                    }
                    stream.declared_max_degree = d;
                    saw_degree = true;
                }
                "edges" if tokens.len() == 2 => declared_edges = Some(number(tokens.get(1))?),
                "batches" if tokens.len() == 2 => declared_batches = Some(number(tokens.get(1))?),
                "meta" if tokens.len() >= 3 => {
                    let value = tokens[2..].join(" ");
                    if tokens[1] == "name" {
                        stream.name = value;
                    } else {
                        stream.meta.push((tokens[1].to_string(), value));
                    }
                }
                "edge" if tokens.len() == 3 => stream.push(tokens[1], tokens[2]),
                "batch" => {
                    if tokens.len() != 1 {
                        return Err(err(line, "batch takes no arguments"));
                    }
                    let start = stream.batch_marks.as_ref().and_then(|m| m.last().copied()).unwrap_or(0);
                    if stream.arrivals.len() == start {
                        return Err(err(line, "empty batch"));
                    }
                    stream.close_batch();
                }
                "opt" if tokens.len() == 2 => opts.push(number(tokens.get(1))?),
                _ => return Err(err(line, &format!("malformed directive {content:?}"))),
            }
        }
        if !saw_degree {
            return Err(err(last_line.max(1), "missing max_degree"));
        }
        if let Some(marks) = &stream.batch_marks {
            if marks.last() != Some(&stream.arrivals.len()) {
                return Err(err(last_line, "edges after the last batch line"));
            }
        }
        if declared_edges.is_some_and(|n| n != stream.arrivals.len()) {
            return Err(err(last_line, "edge count differs from the edges header"));
        }
        let batch_count = stream.batch_marks.as_ref().map_or(0, Vec::len);
        if declared_batches.is_some_and(|n| n != batch_count) {
            return Err(err(last_line, "batch count differs from the batches header"));
        }
        if !opts.is_empty() {
            stream.expected_opt_per_batch = Some(opts);
        }
        stream.validate()?;
        Ok(stream)
    }
}

pub fn load_instance(path: &Path) -> Result<ArrivalStream, InstanceError> {
    ArrivalStream::parse(&std::fs::read_to_string(path)?)
}

pub fn save_instance(stream: &ArrivalStream, path: &Path) -> Result<(), InstanceError> {
    std::fs::write(path, stream.to_file_string())?;
    Ok(())
}

fn vl(side: char, i: usize) -> String {
    format!("v_{side}_{i}")
}

fn vhat(side: char, i: usize) -> String {
    format!("vhat_{side}_{i}")
}

/// Two paths grown from a shared first edge, with pendant spokes behind the
/// growing ends. Batches: the first edge, each later round, then all spokes.
pub fn consistent_instance(n: usize) -> Result<ArrivalStream, InstanceError> {
    if n < 2 {
        return Err(InstanceError::Parameter("consistent instance needs n >= 2".into()));
    }
    let mut s = ArrivalStream::new(format!("consistent:{n}"), 3);
    s.push(vl('l', 1), vl('r', 1));
    s.close_batch();
    for i in 2..=n {
        s.push(vl('l', i - 1), vl('l', i));
        s.push(vl('r', i - 1), vl('r', i));
        s.close_batch();
    }
    for i in 1..=n.saturating_sub(2) {
        s.push(vl('l', i), vhat('l', i));
        s.push(vl('r', i), vhat('r', i));
    }
    if n > 2 {
        s.close_batch();
    }
    Ok(s)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IntegralOption {
    Start,
    First,
    Second,
}

impl std::str::FromStr for IntegralOption {
    type Err = InstanceError;
    fn from_str(s: &str) -> Result<Self, InstanceError> {
        match s {
            "start" => Ok(IntegralOption::Start),
            "first" => Ok(IntegralOption::First),
            "second" => Ok(IntegralOption::Second),
            _ => Err(InstanceError::Parameter(format!("unknown option {s:?}"))),
        }
    }
}

/// The two-gadget instances behind the integral upper bound at degree three.
///
/// Every variant starts with two disjoint two-edge paths, one per gadget
/// (`u` above, `d` below). Batches close after the first edges, after the
/// second edges, and after each later phase.
pub fn integral_hard_instance(option: IntegralOption) -> ArrivalStream {
    let name = match option {
        IntegralOption::Start => "integral:start",
        IntegralOption::First => "integral:first",
        IntegralOption::Second => "integral:second",
    };
    let mut s = ArrivalStream::new(name, 3);
    s.push("1ul", "1ur");
    s.push("1dl", "1dr");
    s.close_batch();
    s.push("1ul", "2ul");
    s.push("1dl", "2dl");
    s.close_batch();
    let mu: Vec<usize> = match option {
        IntegralOption::Start => vec![2, 2],
        IntegralOption::First => {
            for g in ['u', 'd'] {
                s.push(format!("1{g}l"), format!("1{g}s"));
                s.push(format!("2{g}l"), format!("1{g}r"));
            }
            s.close_batch();
            vec![2, 2, 4]
        }
        IntegralOption::Second => {
            // Solid edges extend each gadget to a three-edge path.
            s.push("1ur", "2ur");
            s.push("1dr", "2dr");
            s.close_batch();
            // Curvy edges: pendants at the middle right vertices and a link
            // between the two gadgets' far ends.
            s.push("1ur", "1us");
            s.push("1dr", "1ds");
            s.push("2ur", "2dr");
            s.close_batch();
            // Dashed edges: pendants at the far ends.
            s.push("2ur", "2us");
            s.push("2dr", "2ds");
            s.close_batch();
            vec![2, 2, 4, 5, 6]
        }
    };
    s.expected_opt_per_batch = Some(mu);
    s
}

/// The batch structure of the degree-four construction: a six-round
/// consistent instance with four spoke pairs, four linking edges each with
/// two pendant edges, and four copies of the consistent instance grown from
/// the linking edges round by round.
///
/// The drawing this follows is not available, so the attachment of the
/// linking edges is a reconstruction: each linking edge's pendants join the
/// main instance's spoke leaves of the same index. The maximum matching
/// sizes after each batch match the target sequence.
pub fn degree4_instance() -> ArrivalStream {
    let mut s = ArrivalStream::new("degree4", 4);
    let copy = |k: usize, side: char, i: usize| format!("c{k}_v_{side}_{i}");
    let copy_hat = |k: usize, side: char, i: usize| format!("c{k}_vhat_{side}_{i}");

    s.push(vl('l', 1), vl('r', 1));
    s.close_batch();
    s.push(vl('l', 1), vl('l', 2));
    s.push(vl('r', 1), vl('r', 2));
    s.close_batch();
    for i in 3..=6 {
        s.push(vl('l', i - 1), vl('l', i));
        s.push(vl('r', i - 1), vl('r', i));
        s.push(vl('l', i - 2), vhat('l', i - 2));
        s.push(vl('r', i - 2), vhat('r', i - 2));
        s.close_batch();
    }
    for k in 1..=4 {
        s.push(copy(k, 'l', 1), copy(k, 'r', 1));
        s.push(copy(k, 'l', 1), vhat('l', k));
        s.push(copy(k, 'r', 1), vhat('r', k));
        s.close_batch();
    }
    for k in 1..=4 {
        s.push(copy(k, 'l', 1), copy(k, 'l', 2));
        s.push(copy(k, 'r', 1), copy(k, 'r', 2));
        s.close_batch();
    }
    for i in 3..=6 {
        for k in 1..=4 {
            s.push(copy(k, 'l', i - 1), copy(k, 'l', i));
            s.push(copy(k, 'r', i - 1), copy(k, 'r', i));
            s.push(copy(k, 'l', i - 2), copy_hat(k, 'l', i - 2));
            s.push(copy(k, 'r', i - 2), copy_hat(k, 'r', i - 2));
            s.close_batch();
        }
    }
    s.expected_opt_per_batch = Some(degree4_target_mu());
    s
}

/// Target maximum matching sizes after each of the 30 batches.
pub fn degree4_target_mu() -> Vec<usize> {
    let mut mu = vec![1, 2, 4, 6, 8, 10];
    mu.extend(11..=18);
    mu.extend((20..=50).step_by(2));
    mu
}

/// The shipped instance-file copy of [`degree4_instance`].
pub const DEGREE4_FILE: &str = include_str!("../data/degree4.inst");

/// First MinIndex family: a path of `3n + 3` edges in three residue-class
/// batches, then gadgets hung off the internal path vertices.
pub fn minindex_family1(n: usize) -> Result<ArrivalStream, InstanceError> {
    if n < 1 {
        return Err(InstanceError::Parameter("family 1 needs n >= 1".into()));
    }
    let m = 3 * n + 3;
    let u = |j: usize| format!("u{j}");
    let edge = |j: usize| (u(j - 1), u(j));
    let mut s = ArrivalStream::new(format!("family1:{n}"), 3);
    for j in (1..=m).filter(|j| j % 3 == 2) {
        let (a, b) = edge(j);
        s.push(a, b);
    }
    s.close_batch();
    for j in (1..=m).filter(|&j| j % 3 == 1 || j == m) {
        let (a, b) = edge(j);
        s.push(a, b);
    }
    s.close_batch();
    for j in (1..=3 * n).filter(|j| j % 3 == 0) {
        let (a, b) = edge(j);
        s.push(a, b);
    }
    s.close_batch();

    // Internal vertex u_j sits on e_j and e_{j+1}; the missing residue class
    // decides its gadget.
    let mut gadget: [Vec<(String, String)>; 4] = Default::default();
    for j in 2..=3 * n + 1 {
        let (w, v, t, r, q) = (
            format!("w{j}"),
            format!("v{j}"),
            format!("t{j}"),
            format!("r{j}"),
            format!("q{j}"),
        );
        match j % 3 {
            1 => gadget[2].push((u(j), w)),
            0 => {
                gadget[3].push((u(j), w.clone()));
                gadget[0].push((w, v.clone()));
                gadget[1].push((v, t));
            }
            _ => {
                gadget[3].push((u(j), w.clone()));
                gadget[1].push((w, v.clone()));
                gadget[0].push((v.clone(), t.clone()));
                gadget[1].push((t, r));
                gadget[2].push((v, q));
            }
        }
    }
    for batch in gadget {
        for (a, b) in batch {
            s.push(a, b);
        }
        s.close_batch();
    }
    Ok(s)
}

/// Second MinIndex family: the consistent instance graph with odd path
/// pairs (and the first edge) first, even pairs second, spokes last.
pub fn minindex_family2(n: usize) -> Result<ArrivalStream, InstanceError> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(InstanceError::Parameter("family 2 needs an even n >= 2".into()));
    }
    let mut s = ArrivalStream::new(format!("family2:{n}"), 3);
    for i in (3..=n).step_by(2) {
        s.push(vl('l', i - 1), vl('l', i));
        s.push(vl('r', i - 1), vl('r', i));
    }
    s.push(vl('l', 1), vl('r', 1));
    s.close_batch();
    for i in (2..=n).step_by(2) {
        s.push(vl('l', i - 1), vl('l', i));
        s.push(vl('r', i - 1), vl('r', i));
    }
    s.close_batch();
    if n > 2 {
        for i in 1..=n - 2 {
            s.push(vl('l', i), vhat('l', i));
            s.push(vl('r', i), vhat('r', i));
        }
        s.close_batch();
    }
    Ok(s)
}

/// A deterministic pseudo-random simple graph stream within the degree cap.
///
/// The vertex pool size is drawn per stream so that sparse forests and
/// dense degree-saturated graphs both occur.
pub fn random_stream(seed: u64, edges: usize, max_degree: usize) -> Result<ArrivalStream, InstanceError> {
    if edges == 0 {
        return Err(InstanceError::Parameter("random stream needs at least one edge".into()));
    }
    if max_degree == 0 {
        return Err(InstanceError::Parameter("max degree must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = ArrivalStream::new(format!("random:{seed}:{edges}"), max_degree);
    let low = (2 * edges).div_ceil(max_degree).max(2);
    let mut pool = rng.gen_range(low..=2 * edges + 1);
    let mut degree = vec![0usize; pool];
    let mut present: HashSet<(usize, usize)> = HashSet::new();
    while s.arrivals.len() < edges {
        let mut placed = false;
        for _ in 0..64 {
            let a = rng.gen_range(0..pool);
            let b = rng.gen_range(0..pool);
            let k = (a.min(b), a.max(b));
            if a == b || degree[a] >= max_degree || degree[b] >= max_degree || present.contains(&k) {
                continue;
            }
            present.insert(k);
            degree[a] += 1;
            degree[b] += 1;
            s.push(format!("n{a}"), format!("n{b}"));
            placed = true;
            break;
        }
        if !placed {
            // Saturated pool: grow it by two fresh vertices.
            pool += 2;
            degree.resize(pool, 0);
        }
    }
    Ok(s)
}

/// Resolves a builtin instance name such as `consistent:4`,
/// `integral:second`, `degree4`, `family1:2`, `family2:4` or `random:7:40`.
pub fn builtin(spec: &str) -> Result<ArrivalStream, InstanceError> {
    let parts: Vec<&str> = spec.split(':').collect();
    let num = |i: usize| -> Result<usize, InstanceError> {
        parts
            .get(i)
            .and_then(|p| p.parse().ok())
            .ok_or_else(|| InstanceError::Parameter(format!("{spec:?} needs a numeric parameter")))
    };
    match parts[0] {
        "consistent" => consistent_instance(num(1)?),
        "integral" => Ok(integral_hard_instance(parts.get(1).copied().unwrap_or("second").parse()?)),
        "degree4" => Ok(degree4_instance()),
        "family1" => minindex_family1(num(1)?),
        "family2" => minindex_family2(num(1)?),
        "random" => random_stream(num(1)? as u64, num(2)?, 3),
        _ => Err(InstanceError::Unknown(spec.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn consistent_counts() {
        assert_eq!(consistent_instance(2).unwrap().len(), 3);
        assert_eq!(consistent_instance(4).unwrap().len(), 11);
        assert_eq!(consistent_instance(10).unwrap().len(), 35);
        assert!(consistent_instance(1).is_err());
    }

    #[test]
    fn integral_counts() {
        assert_eq!(integral_hard_instance(IntegralOption::Start).len(), 4);
        assert_eq!(integral_hard_instance(IntegralOption::First).len(), 8);
        let second = integral_hard_instance(IntegralOption::Second);
        assert_eq!(second.len(), 11);
        assert_eq!(second.batch_marks, Some(vec![2, 4, 6, 9, 11]));
        for opt in [IntegralOption::Start, IntegralOption::First, IntegralOption::Second] {
            integral_hard_instance(opt).validate().unwrap();
        }
    }

    #[test]
    fn degree4_shape() {
        let s = degree4_instance();
        s.validate().unwrap();
        assert_eq!(s.batch_marks.as_ref().unwrap().len(), 30);
        let mu = s.expected_opt_per_batch.as_ref().unwrap();
        assert_eq!(mu[5], 10);
        assert_eq!(mu[29], 50);
        assert_eq!(ArrivalStream::parse(DEGREE4_FILE).unwrap(), s);
    }

    #[test]
    fn family_sizes() {
        let f1 = minindex_family1(2).unwrap();
        f1.validate().unwrap();
        assert_eq!(f1.batch_marks.as_ref().unwrap().len(), 7);
        let f2 = minindex_family2(4).unwrap();
        f2.validate().unwrap();
        assert_eq!(f2.len(), 11);
        assert!(minindex_family2(3).is_err());
    }

    #[test]
    fn random_streams_are_deterministic_and_capped() {
        let one = random_stream(1, 1, 3).unwrap();
        assert_eq!(one.len(), 1);
        let a = random_stream(7, 40, 3).unwrap();
        assert_eq!(a, random_stream(7, 40, 3).unwrap());
        assert_eq!(a.len(), 40);
        a.validate().unwrap();
    }

    #[test]
    fn file_round_trip() {
        let s = consistent_instance(4).unwrap();
        assert_eq!(ArrivalStream::parse(&s.to_file_string()).unwrap(), s);
        let b = minindex_family1(1).unwrap();
        assert_eq!(ArrivalStream::parse(&b.to_file_string()).unwrap(), b);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let bad = "max_degree 3\nedge a b\nbatch 2\n";
        match ArrivalStream::parse(bad) {
            Err(InstanceError::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        let empty_batch = "max_degree 3\nedge a b\nbatch\nbatch\n";
        assert!(matches!(ArrivalStream::parse(empty_batch), Err(InstanceError::Parse { line: 4, .. })));
    }

    #[test]
    fn degree_cap_is_enforced_on_load() {
        let mut text = String::from("max_degree 4\n");
        for i in 0..5 {
            text.push_str(&format!("edge hub leaf{i}\n"));
        }
        assert!(matches!(
            ArrivalStream::parse(&text),
            Err(InstanceError::DegreeViolation { degree: 5, cap: 4, .. })
        ));
    }

    #[test]
    fn builtin_names() {
        assert_eq!(builtin("consistent:4").unwrap().len(), 11);
        assert_eq!(builtin("integral:first").unwrap().len(), 8);
        assert!(matches!(builtin("nope"), Err(InstanceError::Unknown(_))));
        assert!(builtin("consistent:x").is_err());
    }
}
