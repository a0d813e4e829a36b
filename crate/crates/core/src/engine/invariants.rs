//! Exact runtime checks of the structural properties the algorithm maintains.

use std::fmt;

use super::{EdgeClass, EdgeKind, Eid, MatchState, TypeVector, Vid};
use crate::numeric::{golden_c, rat, ytilde, Golden};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckMode {
    /// Check after every arrival.
    Strict,
    /// Check only when asked.
    OnDemand,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Property {
    /// Σx = Σy.
    P1,
    /// x_u + x_v ≥ c on every edge.
    P2,
    /// Σy ≤ 1 at every vertex.
    P3,
    /// Cover window at degree-two vertices.
    P4,
    /// x decreases only next to the two exceptional neighbourhoods.
    P5,
    /// Cover lower bounds around path edges.
    P6,
    /// x_w ≥ y for spokes.
    P7,
    YNonnegative,
    XNonnegative,
    /// Path values never exceed their target ỹ.
    PathValueCap,
    /// At most one path edge at z when a path edge arrives.
    UniquePathAtZ,
    /// Cover at a spoke's z is fixed from the spoke's arrival on.
    SpokeCentreFrozen,
    /// Vertices touching only one or two spokes hold exactly their sum.
    SpokeOnlyVertex,
    /// Two path edges at a degree-two vertex have adjacent indices.
    PathIndexGap,
    /// deg(z) ≥ deg(w) for path edges and spokes.
    ZDegree,
    /// Exact cover at vertices of type (1,1,0).
    PathSpokeVertex,
    /// Every spoke value lies in [1 − 3c/2, 1 − c].
    SpokeRange,
}

impl Property {
    pub const ALL: [Property; 17] = [
        Property::P1,
        Property::P2,
        Property::P3,
        Property::P4,
        Property::P5,
        Property::P6,
        Property::P7,
        Property::YNonnegative,
        Property::XNonnegative,
        Property::PathValueCap,
        Property::UniquePathAtZ,
        Property::SpokeCentreFrozen,
        Property::SpokeOnlyVertex,
        Property::PathIndexGap,
        Property::ZDegree,
        Property::PathSpokeVertex,
        Property::SpokeRange,
    ];

    pub fn label(&self) -> &'static str {
        match self {
            Property::P1 => "P1",
            Property::P2 => "P2",
            Property::P3 => "P3",
            Property::P4 => "P4",
            Property::P5 => "P5",
            Property::P6 => "P6",
            Property::P7 => "P7",
            Property::YNonnegative => "y>=0",
            Property::XNonnegative => "x>=0",
            Property::PathValueCap => "path-cap",
            Property::UniquePathAtZ => "unique-path-at-z",
            Property::SpokeCentreFrozen => "spoke-centre-frozen",
            Property::SpokeOnlyVertex => "spoke-only-vertex",
            Property::PathIndexGap => "path-index-gap",
            Property::ZDegree => "z-degree",
            Property::PathSpokeVertex => "path-spoke-vertex",
            Property::SpokeRange => "spoke-range",
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Location {
    Global,
    Vertex(Vid),
    Edge(Eid),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail(Location),
}

/// One verdict per [`Property`], in [`Property::ALL`] order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantReport {
    verdicts: Vec<(Property, Verdict)>,
}

impl InvariantReport {
    fn new() -> Self {
        InvariantReport {
            verdicts: Property::ALL.iter().map(|&p| (p, Verdict::Pass)).collect(),
        }
    }

    fn fail(&mut self, p: Property, at: Location) {
        let slot = &mut self.verdicts.iter_mut().find(|(q, _)| *q == p).expect("known property").1;
        if *slot == Verdict::Pass {
            *slot = Verdict::Fail(at);
        }
    }

    fn require(&mut self, ok: bool, p: Property, at: Location) {
        if !ok {
            self.fail(p, at);
        }
    }

    pub fn verdict(&self, p: Property) -> Verdict {
        self.verdicts.iter().find(|(q, _)| *q == p).map(|(_, v)| *v).expect("known property")
    }

    pub fn verdicts(&self) -> &[(Property, Verdict)] {
        &self.verdicts
    }

    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|(_, v)| *v == Verdict::Pass)
    }

    pub fn first_failure(&self) -> Option<(Property, Location)> {
        self.verdicts.iter().find_map(|(p, v)| match v {
            Verdict::Fail(at) => Some((*p, *at)),
            Verdict::Pass => None,
        })
    }

    pub fn failures(&self) -> impl Iterator<Item = (Property, Location)> + '_ {
        self.verdicts.iter().filter_map(|(p, v)| match v {
            Verdict::Fail(at) => Some((*p, *at)),
            Verdict::Pass => None,
        })
    }
}

struct Bounds {
    c: Golden,
    two_c_minus_one: Golden,
    five_c_minus_two_half: Golden,
    spoke_low: Golden,
    spoke_high: Golden,
}

impl Bounds {
    fn new() -> Self {
        let c = golden_c();
        let one = Golden::one();
        Bounds {
            two_c_minus_one: c.scale(&rat(2, 1)) - &one,
            five_c_minus_two_half: (c.scale(&rat(5, 1)) - Golden::from_ints(2, 0)).half(),
            spoke_low: &one - c.scale(&rat(3, 2)),
            spoke_high: &one - &c,
            c,
        }
    }
}

impl MatchState {
    /// Evaluates every property over the whole state.
    pub fn check_invariants(&self) -> InvariantReport {
        let mut report = InvariantReport::new();
        let bounds = Bounds::new();
        let sum_x: Golden = self.vertices.iter().map(|v| &v.x).sum();
        let sum_y: Golden = self.edges.iter().map(|e| &e.y).sum();
        if sum_x != sum_y {
            report.fail(Property::P1, self.locate_p1());
        }
        for v in 0..self.vertices.len() {
            self.check_vertex(v, &bounds, &mut report);
        }
        for e in 0..self.edges.len() {
            self.check_edge(e, &bounds, &mut report);
        }
        self.apply_flags(&mut report);
        report
    }

    /// Checks only what can change when an edge arrives between the given
    /// vertices, assuming the rest was valid before.
    pub fn check_local(&self, touched: &[Vid]) -> InvariantReport {
        let mut report = InvariantReport::new();
        let bounds = Bounds::new();
        if self.sum_x != self.sum_y {
            report.fail(Property::P1, self.locate_p1());
        }
        for &v in touched {
            self.check_vertex(v, &bounds, &mut report);
            for &e in &self.vertices[v].incident {
                self.check_edge(e, &bounds, &mut report);
            }
        }
        self.apply_flags(&mut report);
        report
    }

    fn locate_p1(&self) -> Location {
        for e in &self.edges {
            if &e.shares.0 + &e.shares.1 != e.y {
                return Location::Edge(e.id);
            }
        }
        for v in &self.vertices {
            let credited: Golden = v.incident.iter().map(|&e| self.edges[e].share_of(v.id)).sum();
            if credited != v.x {
                return Location::Vertex(v.id);
            }
        }
        Location::Global
    }

    fn apply_flags(&self, report: &mut InvariantReport) {
        if let Some(at) = self.flags.p5 {
            report.fail(Property::P5, at);
        }
        if let Some(at) = self.flags.z_degree {
            report.fail(Property::ZDegree, at);
        }
        if let Some(at) = self.flags.unique_path_at_z {
            report.fail(Property::UniquePathAtZ, at);
        }
    }

    fn check_vertex(&self, v: Vid, b: &Bounds, report: &mut InvariantReport) {
        let rec = &self.vertices[v];
        let at = Location::Vertex(v);
        let load: Golden = rec.incident.iter().map(|&e| &self.edges[e].y).sum();
        report.require(load <= Golden::one(), Property::P3, at);
        report.require(!rec.x.is_negative(), Property::XNonnegative, at);
        let credited: Golden = rec.incident.iter().map(|&e| self.edges[e].share_of(v)).sum();
        report.require(credited == rec.x, Property::P1, at);
        if let Some(frozen) = &rec.frozen_x {
            report.require(*frozen == rec.x, Property::SpokeCentreFrozen, at);
        }

        let t = self.type_vector(v, None);
        if rec.incident.len() == 2 && !t.is_exceptional() {
            let in_window = rec.x >= b.two_c_minus_one && rec.x <= b.five_c_minus_two_half;
            let above_load = rec.x >= &b.c - Golden::one() + &load;
            report.require(in_window && above_load, Property::P4, at);
        }
        if t.t1 == 0 && t.t3 == 0 && (1..=2).contains(&t.t2) {
            report.require(rec.x == load, Property::SpokeOnlyVertex, at);
        }
        if t == TypeVector::new(2, 0, 0) {
            let ns: Vec<u64> = rec.incident.iter().filter_map(|&e| self.edges[e].kind.n()).collect();
            report.require(ns[0].abs_diff(ns[1]) == 1, Property::PathIndexGap, at);
        }
        if t == TypeVector::new(1, 1, 0) {
            let mut path = None;
            let mut spoke = None;
            for &e in &rec.incident {
                match self.edges[e].kind.class() {
                    EdgeClass::Path => path = Some(&self.edges[e]),
                    EdgeClass::Spoke => spoke = Some(&self.edges[e]),
                    EdgeClass::Bridge => {}
                }
            }
            let (fp, fs) = (path.expect("one path edge"), spoke.expect("one spoke"));
            let n = fp.kind.n().expect("path edge") as usize;
            let expected = &b.c - ytilde(n + 1) + &fs.y;
            report.require(rec.x == expected, Property::PathSpokeVertex, at);
        }
    }

    fn check_edge(&self, e: Eid, b: &Bounds, report: &mut InvariantReport) {
        let rec = &self.edges[e];
        let at = Location::Edge(e);
        let (p, q) = rec.endpoints;
        report.require(self.x(p) + self.x(q) >= b.c, Property::P2, at);
        report.require(!rec.y.is_negative(), Property::YNonnegative, at);
        match &rec.kind {
            EdgeKind::Path { n, z, w } => {
                let next = ytilde(*n as usize + 1);
                let w_floor = &b.c - &next;
                let mut ok = *self.x(*z) >= next && *self.x(*w) >= w_floor;
                if self.degree(*w) == 1 {
                    ok &= *self.x(*w) == w_floor;
                }
                report.require(ok, Property::P6, at);
                report.require(rec.y <= ytilde(*n as usize), Property::PathValueCap, at);
            }
            EdgeKind::Spoke { w, .. } => {
                report.require(*self.x(*w) >= rec.y, Property::P7, at);
                let in_range = rec.y >= b.spoke_low && rec.y <= b.spoke_high;
                report.require(in_range, Property::SpokeRange, at);
            }
            EdgeKind::Bridge { .. } => {}
        }
    }
}
