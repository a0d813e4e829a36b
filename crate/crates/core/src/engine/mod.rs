//! The online state machine for fractional matching at maximum degree three.
//!
//! Each arriving edge is classified as a path edge, a spoke or a bridge from
//! the type vectors of its endpoints, receives an irrevocable value `y`, and
//! the value is split between the endpoint cover values `x` so that
//! `Σx = Σy` holds after every step.

mod invariants;
pub mod table;

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::numeric::{golden_c, ytilde, Golden, GoldenRepr};

pub use invariants::{CheckMode, InvariantReport, Location, Property, Verdict};

/// Handle of a vertex inside a [`MatchState`], assigned in first-seen order.
pub type Vid = usize;
/// Edge id, assigned in arrival order starting at 0.
pub type Eid = usize;

pub const MAX_DEGREE: usize = 3;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(String),
    #[error("edge {0} {1} already present")]
    DuplicateEdge(String, String),
    #[error("vertex {vertex} would reach degree {degree}")]
    DegreeViolation { vertex: String, degree: usize },
    #[error("endpoint types {0} and {1} form an impossible combination")]
    ImpossibleCombination(TypeVector, TypeVector),
    #[error("bridge case {0:?} found an unexpected neighbourhood")]
    BridgeShape(BridgeCase),
}

/// Counts of path edges, spokes and bridges in a set of edges.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct TypeVector {
    pub t1: u8,
    pub t2: u8,
    pub t3: u8,
}

impl TypeVector {
    pub const fn new(t1: u8, t2: u8, t3: u8) -> Self {
        TypeVector { t1, t2, t3 }
    }

    pub fn total(&self) -> usize {
        (self.t1 + self.t2 + self.t3) as usize
    }

    /// The two neighbourhoods after which `x` may still decrease.
    pub fn is_exceptional(&self) -> bool {
        *self == TypeVector::new(0, 2, 0) || *self == TypeVector::new(1, 1, 0)
    }

    fn add(&mut self, class: EdgeClass) {
        match class {
            EdgeClass::Path => self.t1 += 1,
            EdgeClass::Spoke => self.t2 += 1,
            EdgeClass::Bridge => self.t3 += 1,
        }
    }
}

impl fmt::Display for TypeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.t1, self.t2, self.t3)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum EdgeClass {
    Path,
    Spoke,
    Bridge,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum BridgeCase {
    /// Both endpoints carry exactly one path edge.
    B1,
    /// One endpoint has a path edge, the other a spoke.
    B2,
    /// Two spokes on one side, a path edge on the other.
    B3,
    /// A path edge and a spoke on one side, a path edge on the other.
    B4,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EdgeKind {
    Path { n: u64, z: Vid, w: Vid },
    Spoke { z: Vid, w: Vid },
    Bridge { case: BridgeCase, z: Option<Vid>, w: Option<Vid> },
}

impl EdgeKind {
    pub fn class(&self) -> EdgeClass {
        match self {
            EdgeKind::Path { .. } => EdgeClass::Path,
            EdgeKind::Spoke { .. } => EdgeClass::Spoke,
            EdgeKind::Bridge { .. } => EdgeClass::Bridge,
        }
    }

    /// Position indicator of a path edge.
    pub fn n(&self) -> Option<u64> {
        match self {
            EdgeKind::Path { n, .. } => Some(*n),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeRecord {
    pub id: Eid,
    pub endpoints: (Vid, Vid),
    pub kind: EdgeKind,
    pub y: Golden,
    /// Share of `y` credited to each endpoint on arrival, in endpoint order.
    pub shares: (Golden, Golden),
}

impl EdgeRecord {
    pub fn other(&self, v: Vid) -> Vid {
        if self.endpoints.0 == v {
            self.endpoints.1
        } else {
            self.endpoints.0
        }
    }

    pub fn share_of(&self, v: Vid) -> &Golden {
        if self.endpoints.0 == v {
            &self.shares.0
        } else {
            &self.shares.1
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexRecord {
    pub id: Vid,
    pub name: String,
    pub x: Golden,
    pub incident: Vec<Eid>,
    /// Cover value pinned when the vertex became `z` of a spoke.
    pub frozen_x: Option<Golden>,
}

/// Endpoint type vectors that drove a classification, in table orientation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TableCell {
    pub row: TypeVector,
    pub col: TypeVector,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrivalOutcome {
    pub edge: EdgeRecord,
    /// Signed change of `x` per endpoint.
    pub x_deltas: Vec<(Vid, Golden)>,
    pub cell: TableCell,
}

/// Violations noticed while an arrival is processed, as opposed to those
/// visible in a snapshot of the state.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub(crate) struct ArrivalFlags {
    pub p5: Option<Location>,
    pub z_degree: Option<Location>,
    pub unique_path_at_z: Option<Location>,
}

#[derive(Clone, Debug, Default)]
pub struct MatchState {
    vertices: Vec<VertexRecord>,
    names: HashMap<String, Vid>,
    edges: Vec<EdgeRecord>,
    adjacency: HashMap<(Vid, Vid), Eid>,
    sum_x: Golden,
    sum_y: Golden,
    pub(crate) flags: ArrivalFlags,
}

fn key(a: Vid, b: Vid) -> (Vid, Vid) {
    (a.min(b), a.max(b))
}

impl MatchState {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn step(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[VertexRecord] {
        &self.vertices
    }

    pub fn edges(&self) -> &[EdgeRecord] {
        &self.edges
    }

    pub fn vertex(&self, v: Vid) -> &VertexRecord {
        &self.vertices[v]
    }

    pub fn edge(&self, e: Eid) -> &EdgeRecord {
        &self.edges[e]
    }

    pub fn vid(&self, name: &str) -> Option<Vid> {
        self.names.get(name).copied()
    }

    pub fn name(&self, v: Vid) -> &str {
        &self.vertices[v].name
    }

    pub fn x(&self, v: Vid) -> &Golden {
        &self.vertices[v].x
    }

    pub fn degree(&self, v: Vid) -> usize {
        self.vertices[v].incident.len()
    }

    pub fn edge_between(&self, a: Vid, b: Vid) -> Option<Eid> {
        self.adjacency.get(&key(a, b)).copied()
    }

    /// Type vector of `δ(v)`, optionally without one edge.
    pub fn type_vector(&self, v: Vid, excluding: Option<Eid>) -> TypeVector {
        let mut t = TypeVector::default();
        for &e in &self.vertices[v].incident {
            if Some(e) != excluding {
                t.add(self.edges[e].kind.class());
            }
        }
        t
    }

    /// `1 − Σ y` over `δ(v)`, optionally without one edge.
    pub fn residual(&self, v: Vid, excluding: Option<Eid>) -> Golden {
        let used: Golden = self.vertices[v]
            .incident
            .iter()
            .filter(|&&e| Some(e) != excluding)
            .map(|&e| &self.edges[e].y)
            .sum();
        Golden::one() - used
    }

    /// Σ y over all edges.
    pub fn alg_value(&self) -> Golden {
        self.sum_y.clone()
    }

    /// Σ x over all vertices, maintained incrementally.
    pub fn cover_value(&self) -> Golden {
        self.sum_x.clone()
    }

    fn incident_of_class(&self, v: Vid, class: EdgeClass) -> impl Iterator<Item = &EdgeRecord> {
        self.vertices[v]
            .incident
            .iter()
            .map(move |&e| &self.edges[e])
            .filter(move |r| r.kind.class() == class)
    }

    fn single_path_edge(&self, v: Vid, case: BridgeCase) -> Result<&EdgeRecord, EngineError> {
        let mut it = self.incident_of_class(v, EdgeClass::Path);
        match (it.next(), it.next()) {
            (Some(f), None) => Ok(f),
            _ => Err(EngineError::BridgeShape(case)),
        }
    }

    fn single_spoke(&self, v: Vid, case: BridgeCase) -> Result<&EdgeRecord, EngineError> {
        let mut it = self.incident_of_class(v, EdgeClass::Spoke);
        match (it.next(), it.next()) {
            (Some(f), None) => Ok(f),
            _ => Err(EngineError::BridgeShape(case)),
        }
    }

    /// Orders the endpoints so that `deg(v) ≤ deg(u)` counting the new edge,
    /// with ties resolved in favour of the first-seen vertex as `u`.
    fn normalize(&self, a: Vid, b: Vid) -> (Vid, Vid) {
        let (da, db) = (self.degree(a), self.degree(b));
        if da > db || (da == db && a < b) {
            (a, b)
        } else {
            (b, a)
        }
    }

    /// The choice of `(z, w)` for non-bridge edges. `u`, `v` must already be
    /// normalized; degrees count the arriving edge.
    pub fn orient(&self, u: Vid, v: Vid) -> (Vid, Vid) {
        let deg_v = self.degree(v) + usize::from(self.edge_between(u, v).is_none());
        if deg_v == 3 && self.residual(v, None) < self.residual(u, None) {
            (v, u)
        } else {
            (u, v)
        }
    }

    /// Classifies a prospective edge between existing or new vertices
    /// without mutating the state.
    pub fn classify(&self, a: &str, b: &str) -> Result<EdgeClass, EngineError> {
        let mut probe = self.clone();
        probe.arrive(a, b).map(|o| o.edge.kind.class())
    }

    fn bridge_case(tu: TypeVector, tv: TypeVector) -> Option<BridgeCase> {
        let p = TypeVector::new(1, 0, 0);
        let s = TypeVector::new(0, 1, 0);
        let ps = TypeVector::new(1, 1, 0);
        let ss = TypeVector::new(0, 2, 0);
        let pair = |a: TypeVector, b: TypeVector| (tu == a && tv == b) || (tu == b && tv == a);
        if tu == p && tv == p {
            Some(BridgeCase::B1)
        } else if pair(p, s) {
            Some(BridgeCase::B2)
        } else if pair(ss, p) {
            Some(BridgeCase::B3)
        } else if pair(ps, p) {
            Some(BridgeCase::B4)
        } else {
            None
        }
    }

    /// Processes the arrival of edge `{a, b}` per the online rule.
    ///
    /// On error the state is left exactly as it was.
    pub fn arrive(&mut self, a: &str, b: &str) -> Result<ArrivalOutcome, EngineError> {
        if a == b {
            return Err(EngineError::SelfLoop(a.to_string()));
        }
        let (ia, ib) = (self.vid(a), self.vid(b));
        if let (Some(x), Some(y)) = (ia, ib) {
            if self.edge_between(x, y).is_some() {
                return Err(EngineError::DuplicateEdge(a.to_string(), b.to_string()));
            }
        }
        for (name, id) in [(a, ia), (b, ib)] {
            if let Some(v) = id {
                if self.degree(v) + 1 > MAX_DEGREE {
                    return Err(EngineError::DegreeViolation {
                        vertex: name.to_string(),
                        degree: self.degree(v) + 1,
                    });
                }
            }
        }
        let before = self.vertices.len();
        let va = self.intern(a);
        let vb = self.intern(b);
        match self.assign(va, vb) {
            Ok(outcome) => Ok(outcome),
            Err(err) => {
                for v in self.vertices.drain(before..) {
                    self.names.remove(&v.name);
                }
                Err(err)
            }
        }
    }

    fn intern(&mut self, name: &str) -> Vid {
        if let Some(v) = self.vid(name) {
            return v;
        }
        let id = self.vertices.len();
        self.vertices.push(VertexRecord {
            id,
            name: name.to_string(),
            x: Golden::zero(),
            incident: Vec::new(),
            frozen_x: None,
        });
        self.names.insert(name.to_string(), id);
        id
    }

    /// Computes the edge record and cover deltas, then commits them.
    fn assign(&mut self, a: Vid, b: Vid) -> Result<ArrivalOutcome, EngineError> {
        let c = golden_c();
        let (u, v) = self.normalize(a, b);
        let (tu, tv) = (self.type_vector(u, None), self.type_vector(v, None));
        let deg_new = |s: &Self, x: Vid| s.degree(x) + 1;

        let (kind, y, du, dv, cell) = if let Some(case) = Self::bridge_case(tu, tv) {
            let cell = TableCell { row: tu, col: tv };
            let (kind, y, du, dv) = self.bridge(case, u, v, tu)?;
            (kind, y, du, dv, cell)
        } else {
            if let table::Cell::Grey = table::lookup(tu, tv) {
                return Err(EngineError::ImpossibleCombination(tu, tv));
            }
            let (z, w) = self.orient(u, v);
            let tz = self.type_vector(z, None);
            let tw = self.type_vector(w, None);
            let cell = TableCell { row: tz, col: tw };
            if deg_new(self, z) < deg_new(self, w) {
                self.flags.z_degree.get_or_insert(Location::Vertex(z));
            }
            if deg_new(self, z) == 3 && !tz.is_exceptional() {
                let y = &c - self.x(z);
                let kind = EdgeKind::Spoke { z, w };
                let (dz, dw) = (Golden::zero(), y.clone());
                let (du, dv) = if z == u { (dz, dw) } else { (dw, dz) };
                (kind, y, du, dv, cell)
            } else {
                let paths: Vec<u64> = self
                    .incident_of_class(z, EdgeClass::Path)
                    .filter_map(|f| f.kind.n())
                    .collect();
                if paths.len() > 1 {
                    self.flags.unique_path_at_z.get_or_insert(Location::Vertex(z));
                }
                let n = paths.iter().map(|m| m + 1).max().unwrap_or(1);
                let target = ytilde(n as usize);
                let y = target.min(self.residual(z, None));
                let w_share = &c - ytilde(n as usize + 1);
                let dz = &y - &w_share;
                let kind = EdgeKind::Path { n, z, w };
                let (du, dv) = if z == u { (dz, w_share) } else { (w_share, dz) };
                (kind, y, du, dv, cell)
            }
        };

        for (vertex, t, delta) in [(u, tu, &du), (v, tv, &dv)] {
            if delta.is_negative() && !t.is_exceptional() {
                self.flags.p5.get_or_insert(Location::Vertex(vertex));
            }
        }

        let id = self.edges.len();
        let record = EdgeRecord {
            id,
            endpoints: (u, v),
            kind,
            y: y.clone(),
            shares: (du.clone(), dv.clone()),
        };
        self.vertices[u].x += &du;
        self.vertices[v].x += &dv;
        self.sum_x += &du;
        self.sum_x += &dv;
        self.sum_y += &y;
        self.vertices[u].incident.push(id);
        self.vertices[v].incident.push(id);
        self.adjacency.insert(key(u, v), id);
        if let EdgeKind::Spoke { z, .. } = record.kind {
            if self.vertices[z].frozen_x.is_none() {
                self.vertices[z].frozen_x = Some(self.vertices[z].x.clone());
            }
        }
        self.edges.push(record.clone());
        Ok(ArrivalOutcome {
            edge: record,
            x_deltas: vec![(u, du), (v, dv)],
            cell,
        })
    }

    /// Bridge branch; returns the kind, `y`, and the deltas for `u` and `v`.
    fn bridge(
        &self,
        case: BridgeCase,
        u: Vid,
        v: Vid,
        tu: TypeVector,
    ) -> Result<(EdgeKind, Golden, Golden, Golden), EngineError> {
        let c = golden_c();
        let zero = Golden::zero();
        let yt_next = |f: &EdgeRecord| ytilde(f.kind.n().expect("path edge") as usize + 1);
        match case {
            BridgeCase::B4 => {
                // The (1,1,0) endpoint has degree three after the arrival, so it is u.
                let (hub, tip) = if tu == TypeVector::new(1, 1, 0) { (u, v) } else { (v, u) };
                let f1 = self.single_path_edge(hub, case)?;
                let f2 = self.single_spoke(hub, case)?;
                let f3 = self.single_path_edge(tip, case)?;
                let reach = yt_next(f3) - &f2.y;
                let slack = (&c - yt_next(f1)).min(f2.y.clone());
                let y = (&reach - slack).max(zero.clone());
                let tip_share = reach.max(zero);
                let hub_share = &y - &tip_share;
                let (du, dv) = if hub == u { (hub_share, tip_share) } else { (tip_share, hub_share) };
                Ok((EdgeKind::Bridge { case, z: None, w: None }, y, du, dv))
            }
            BridgeCase::B3 => {
                let (hub, tip) = if tu == TypeVector::new(0, 2, 0) { (u, v) } else { (v, u) };
                let fv = self.single_path_edge(tip, case)?;
                if self.degree(tip) != 1 {
                    return Err(EngineError::BridgeShape(case));
                }
                let spoke_max = self
                    .incident_of_class(hub, EdgeClass::Spoke)
                    .map(|f| f.y.clone())
                    .max()
                    .ok_or(EngineError::BridgeShape(case))?;
                let y = (yt_next(fv) - spoke_max).max(zero.clone());
                let (du, dv) = if tip == v { (zero, y.clone()) } else { (y.clone(), zero) };
                Ok((EdgeKind::Bridge { case, z: None, w: None }, y, du, dv))
            }
            BridgeCase::B1 => {
                let fu = self.single_path_edge(u, case)?;
                let fv = self.single_path_edge(v, case)?;
                let (z, w, fz, fw) = if yt_next(fv) < yt_next(fu) {
                    (v, u, fv, fu)
                } else {
                    (u, v, fu, fv)
                };
                let (tz, tw) = (yt_next(fz), yt_next(fw));
                let y = &tz - (&c - &tw);
                let room = Golden::one() - &fz.y - &y;
                let half_c = c.half();
                let dz = &tz - half_c.clone().min(room.clone());
                let dw = &tw - half_c.max(&c - &room);
                let (du, dv) = if z == u { (dz, dw) } else { (dw, dz) };
                Ok((EdgeKind::Bridge { case, z: Some(z), w: Some(w) }, y, du, dv))
            }
            BridgeCase::B2 => {
                let (z, w) = if tu == TypeVector::new(1, 0, 0) { (u, v) } else { (v, u) };
                let f1 = self.single_path_edge(z, case)?;
                let f2 = self.single_spoke(w, case)?;
                let y = (yt_next(f1) - &f2.y).max(zero.clone());
                let two_c_minus_one = c.scale(&crate::numeric::rat(2, 1)) - Golden::one();
                let dw = (two_c_minus_one - &f2.y).max(zero);
                let dz = &y - &dw;
                let (du, dv) = if z == u { (dz, dw) } else { (dw, dz) };
                Ok((EdgeKind::Bridge { case, z: Some(z), w: Some(w) }, y, du, dv))
            }
        }
    }

    /// Adds `delta` to the stored `y` of an edge without touching `x`.
    /// Exists to exercise the invariant checker and the CLI fault path.
    #[doc(hidden)]
    pub fn inject_fault(&mut self, e: Eid, delta: &Golden) {
        self.edges[e].y += delta;
        self.sum_y += delta;
    }

    /// Renders one arrival as a JSON-lines trace record.
    pub fn trace_event(&self, outcome: &ArrivalOutcome, report: Option<&InvariantReport>) -> TraceEvent {
        let e = &outcome.edge;
        let (kind, case, n) = match &e.kind {
            EdgeKind::Path { n, .. } => ("path", None, Some(*n)),
            EdgeKind::Spoke { .. } => ("spoke", None, None),
            EdgeKind::Bridge { case, .. } => ("bridge", Some(*case), None),
        };
        let invariants = match report {
            None => serde_json::Value::String("unchecked".into()),
            Some(r) => match r.first_failure() {
                None => serde_json::Value::String("pass".into()),
                Some((p, loc)) => serde_json::json!({
                    "first_failure": { "property": p.label(), "at": self.describe(&loc) }
                }),
            },
        };
        TraceEvent {
            step: e.id + 1,
            edge: [self.name(e.endpoints.0).to_string(), self.name(e.endpoints.1).to_string()],
            kind,
            case,
            n,
            y: GoldenRepr::from(&e.y),
            x_deltas: outcome
                .x_deltas
                .iter()
                .map(|(v, d)| {
                    let r = GoldenRepr::from(d);
                    DeltaRepr { vertex: self.name(*v).to_string(), a: r.a, b: r.b }
                })
                .collect(),
            invariants,
        }
    }

    /// Human-readable form of a counterexample location.
    pub fn describe(&self, loc: &Location) -> String {
        match loc {
            Location::Global => "global".into(),
            Location::Vertex(v) => format!("vertex {}", self.name(*v)),
            Location::Edge(e) => {
                let (a, b) = self.edges[*e].endpoints;
                format!("edge {} ({} {})", e, self.name(a), self.name(b))
            }
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DeltaRepr {
    pub vertex: String,
    pub a: String,
    pub b: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct TraceEvent {
    pub step: usize,
    pub edge: [String; 2],
    pub kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub case: Option<BridgeCase>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    pub y: GoldenRepr,
    pub x_deltas: Vec<DeltaRepr>,
    pub invariants: serde_json::Value,
}

/// Replays a list of arrivals, checking invariants as requested.
pub struct Runner {
    pub state: MatchState,
    pub mode: CheckMode,
}

impl Runner {
    pub fn new(mode: CheckMode) -> Self {
        Runner { state: MatchState::new(), mode }
    }

    /// One arrival; in strict mode the returned report covers the state
    /// after the arrival.
    pub fn step(&mut self, a: &str, b: &str) -> Result<(ArrivalOutcome, Option<InvariantReport>), EngineError> {
        let outcome = self.state.arrive(a, b)?;
        let report = match self.mode {
            CheckMode::Strict => {
                let (u, v) = outcome.edge.endpoints;
                Some(self.state.check_local(&[u, v]))
            }
            CheckMode::OnDemand => None,
        };
        Ok((outcome, report))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::rat;

    fn chain(state: &mut MatchState, edges: &[(&str, &str)]) -> Vec<ArrivalOutcome> {
        edges.iter().map(|(a, b)| state.arrive(a, b).unwrap()).collect()
    }

    #[test]
    fn first_edge_is_a_path_edge_with_value_c() {
        let mut s = MatchState::new();
        let out = s.arrive("a", "b").unwrap();
        let c = golden_c();
        assert_eq!(out.edge.kind, EdgeKind::Path { n: 1, z: 0, w: 1 });
        assert_eq!(out.edge.y, c);
        assert_eq!(s.x(0), &c.half());
        assert_eq!(s.x(1), &c.half());
        assert_eq!(s.alg_value(), c);
    }

    #[test]
    fn type_vector_counts() {
        let mut s = MatchState::new();
        s.arrive("a", "b").unwrap();
        assert_eq!(s.type_vector(s.vid("a").unwrap(), None), TypeVector::new(1, 0, 0));
        assert_eq!(s.type_vector(s.vid("a").unwrap(), Some(0)), TypeVector::new(0, 0, 0));
        // Degree-3 star centre: third edge is a spoke.
        chain(&mut s, &[("a", "c"), ("a", "d")]);
        assert_eq!(s.type_vector(s.vid("a").unwrap(), None), TypeVector::new(2, 1, 0));
    }

    #[test]
    fn residual_values() {
        let mut s = MatchState::new();
        s.arrive("a", "b").unwrap();
        let a = s.vid("a").unwrap();
        assert_eq!(s.residual(a, None), Golden::one() - golden_c());
        assert_eq!(s.residual(a, Some(0)), Golden::one());
    }

    #[test]
    fn orient_prefers_smaller_residual_only_strictly() {
        let mut s = MatchState::new();
        chain(&mut s, &[("p", "q"), ("r", "t")]);
        let (p, r) = (s.vid("p").unwrap(), s.vid("r").unwrap());
        assert_eq!(s.orient(p, r), (p, r));
    }

    #[test]
    fn rejected_arrivals_leave_state_untouched() {
        let mut s = MatchState::new();
        chain(&mut s, &[("a", "b"), ("a", "c"), ("a", "d")]);
        let snapshot = (s.vertices().to_vec(), s.edges().to_vec());
        assert_eq!(s.arrive("a", "a"), Err(EngineError::SelfLoop("a".into())));
        assert_eq!(s.arrive("b", "a"), Err(EngineError::DuplicateEdge("b".into(), "a".into())));
        assert!(matches!(s.arrive("a", "zz"), Err(EngineError::DegreeViolation { .. })));
        assert_eq!((s.vertices().to_vec(), s.edges().to_vec()), snapshot);
        assert!(s.vid("zz").is_none());
    }

    #[test]
    fn simple_path_takes_ideal_values() {
        let mut s = MatchState::new();
        let outs = chain(&mut s, &[("a0", "a1"), ("a1", "a2"), ("a2", "a3"), ("a3", "a4")]);
        for (i, o) in outs.iter().enumerate() {
            assert_eq!(o.edge.y, ytilde(i + 1));
            assert_eq!(o.edge.kind.n(), Some(i as u64 + 1));
        }
        // The tail vertex carries exactly its w-share.
        assert_eq!(s.x(s.vid("a4").unwrap()), &(golden_c() - ytilde(5)));
    }

    #[test]
    fn deltas_sum_to_y() {
        let mut s = MatchState::new();
        let outs = chain(
            &mut s,
            &[("a", "b"), ("b", "c"), ("c", "d"), ("b", "e"), ("d", "f"), ("c", "g")],
        );
        for o in outs {
            let sum: Golden = o.x_deltas.iter().map(|(_, d)| d).sum();
            assert_eq!(sum, o.edge.y);
        }
        assert_eq!(s.alg_value(), s.cover_value());
    }

    #[test]
    fn classify_does_not_mutate() {
        let mut s = MatchState::new();
        s.arrive("a", "b").unwrap();
        assert_eq!(s.classify("c", "d").unwrap(), EdgeClass::Path);
        assert_eq!(s.step(), 1);
        assert!(s.vid("c").is_none());
    }

    #[test]
    fn injected_fault_moves_alg_value() {
        let mut s = MatchState::new();
        s.arrive("a", "b").unwrap();
        s.inject_fault(0, &Golden::from_rational(rat(1, 1000)));
        assert_ne!(s.alg_value(), s.cover_value());
    }
}
