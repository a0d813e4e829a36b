//! Exact linear programming over the rationals.
//!
//! [`simplex_max`] runs a two-phase dense tableau simplex with Bland's
//! lowest-index rule, so it terminates on degenerate programs. Each optimal
//! solution carries one dual multiplier per constraint, and
//! [`LinearProgram::certify`] checks primal feasibility and the matching dual
//! bound without looking at the tableau.
//!
//! # Text format
//!
//! [`LinearProgram::to_text`] writes a small LP-file dialect that
//! [`LinearProgram::parse`] reads back:
//!
//! ```text
//! \ comment (the first one names the program)
//! maximize
//!   obj: + 1 gamma
//! subject to
//!   r1: + 2 x1 - 2 gamma >= 0
//! bounds
//!   gamma free
//!   0 <= x1 <= 1
//!   p1 >= 0
//! end
//! ```
//!
//! Every term is a sign, a coefficient (`p`, `p/q` or a decimal) and a
//! variable name. Relations are `<=`, `>=` and `=`. A variable missing from
//! the bounds section defaults to `>= 0`.

use std::collections::HashMap;
use std::fmt::Write as _;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::instances::{ArrivalStream, IntegralOption};
use crate::numeric::{parse_rational, rat, rational_to_string};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LpError {
    #[error("unknown variable {0}")]
    UnknownVariable(String),
    #[error("duplicate variable {0}")]
    DuplicateVariable(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("vertex enumeration is limited to {limit} variables, got {got}")]
    TooLarge { limit: usize, got: usize },
    #[error("stream lacks {0}")]
    MissingData(&'static str),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

impl Relation {
    fn symbol(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Ge => ">=",
            Relation::Eq => "=",
        }
    }

    fn holds(self, lhs: &BigRational, rhs: &BigRational) -> bool {
        match self {
            Relation::Le => lhs <= rhs,
            Relation::Ge => lhs >= rhs,
            Relation::Eq => lhs == rhs,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bound {
    pub lower: Option<BigRational>,
    pub upper: Option<BigRational>,
}

impl Bound {
    pub fn free() -> Self {
        Bound { lower: None, upper: None }
    }

    pub fn nonnegative() -> Self {
        Bound { lower: Some(BigRational::zero()), upper: None }
    }

    pub fn unit() -> Self {
        Bound { lower: Some(BigRational::zero()), upper: Some(BigRational::one()) }
    }

    fn contains(&self, x: &BigRational) -> bool {
        self.lower.as_ref().is_none_or(|l| x >= l) && self.upper.as_ref().is_none_or(|u| x <= u)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Constraint {
    pub name: String,
    pub coeffs: Vec<BigRational>,
    pub relation: Relation,
    pub rhs: BigRational,
}

impl Constraint {
    fn lhs(&self, x: &[BigRational]) -> BigRational {
        dot(&self.coeffs, x)
    }
}

/// An affine expression `Σ cᵢ xᵢ + constant` over a program's variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Affine {
    pub coeffs: Vec<BigRational>,
    pub constant: BigRational,
}

impl Affine {
    pub fn zero(n: usize) -> Self {
        Affine { coeffs: vec![BigRational::zero(); n], constant: BigRational::zero() }
    }

    pub fn constant(n: usize, c: BigRational) -> Self {
        Affine { constant: c, ..Affine::zero(n) }
    }

    pub fn var(n: usize, j: usize) -> Self {
        let mut a = Affine::zero(n);
        a.coeffs[j] = BigRational::one();
        a
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        Affine {
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
            constant: &self.constant * k,
        }
    }
}

impl std::ops::Add for Affine {
    type Output = Affine;
    fn add(self, o: Affine) -> Affine {
        Affine {
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect(),
            constant: self.constant + o.constant,
        }
    }
}

impl std::ops::Sub for Affine {
    type Output = Affine;
    fn sub(self, o: Affine) -> Affine {
        self + o.scale(&rat(-1, 1))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearProgram {
    name: String,
    variables: Vec<String>,
    bounds: Vec<Bound>,
    objective: Vec<BigRational>,
    constraints: Vec<Constraint>,
}

impl LinearProgram {
    pub fn new(name: impl Into<String>) -> Self {
        LinearProgram {
            name: name.into(),
            variables: Vec::new(),
            bounds: Vec::new(),
            objective: Vec::new(),
            constraints: Vec::new(),
        }
    }

    pub fn add_variable(&mut self, name: impl Into<String>, bound: Bound) -> Result<usize, LpError> {
        let name = name.into();
        if self.variables.contains(&name) {
            return Err(LpError::DuplicateVariable(name));
        }
        self.variables.push(name);
        self.bounds.push(bound);
        self.objective.push(BigRational::zero());
        for c in &mut self.constraints {
            c.coeffs.push(BigRational::zero());
        }
        Ok(self.variables.len() - 1)
    }

    pub fn index(&self, name: &str) -> Result<usize, LpError> {
        self.variables
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| LpError::UnknownVariable(name.to_string()))
    }

    pub fn set_objective(&mut self, coeffs: Vec<BigRational>) {
        assert_eq!(coeffs.len(), self.variables.len(), "objective arity");
        self.objective = coeffs;
    }

    /// Maximize a single variable.
    pub fn maximize_variable(&mut self, j: usize) {
        let mut c = vec![BigRational::zero(); self.variables.len()];
        c[j] = BigRational::one();
        self.objective = c;
    }

    pub fn add_constraint(
        &mut self,
        name: impl Into<String>,
        coeffs: Vec<BigRational>,
        relation: Relation,
        rhs: BigRational,
    ) {
        assert_eq!(coeffs.len(), self.variables.len(), "constraint arity");
        self.constraints.push(Constraint { name: name.into(), coeffs, relation, rhs });
    }

    /// Adds `lhs rel rhs` for two affine expressions.
    pub fn add_affine(&mut self, name: impl Into<String>, lhs: Affine, relation: Relation, rhs: Affine) {
        let d = lhs - rhs;
        self.add_constraint(name, d.coeffs, relation, -d.constant);
    }

    pub fn without_constraint(&self, name: &str) -> Self {
        let mut lp = self.clone();
        lp.constraints.retain(|c| c.name != name);
        lp
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn bounds(&self) -> &[Bound] {
        &self.bounds
    }

    pub fn objective(&self) -> &[BigRational] {
        &self.objective
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn constraint(&self, name: &str) -> Option<&Constraint> {
        self.constraints.iter().find(|c| c.name == name)
    }

    pub fn objective_value(&self, x: &[BigRational]) -> BigRational {
        dot(&self.objective, x)
    }

    pub fn is_feasible(&self, x: &[BigRational]) -> bool {
        x.len() == self.variables.len()
            && self.bounds.iter().zip(x).all(|(b, v)| b.contains(v))
            && self.constraints.iter().all(|c| c.relation.holds(&c.lhs(x), &c.rhs))
    }

    /// Checks an optimal solution: the assignment is feasible with the
    /// reported value, and the dual multipliers prove no feasible point does
    /// better.
    pub fn certify(&self, sol: &LpSolution) -> bool {
        if sol.status != LpStatus::Optimal || sol.duals.len() != self.constraints.len() {
            return false;
        }
        if !self.is_feasible(&sol.assignment) || self.objective_value(&sol.assignment) != sol.value {
            return false;
        }
        self.dual_bound(&sol.duals).is_some_and(|b| b == sol.value)
    }

    /// The upper bound on the objective implied by row multipliers, or
    /// `None` when they have the wrong signs or leave an unbounded residual.
    pub fn dual_bound(&self, duals: &[BigRational]) -> Option<BigRational> {
        let mut residual = self.objective.clone();
        let mut bound = BigRational::zero();
        for (c, y) in self.constraints.iter().zip(duals) {
            let ok = match c.relation {
                Relation::Le => !y.is_negative(),
                Relation::Ge => !y.is_positive(),
                Relation::Eq => true,
            };
            if !ok {
                return None;
            }
            if y.is_zero() {
                continue;
            }
            for (r, a) in residual.iter_mut().zip(&c.coeffs) {
                *r -= y * a;
            }
            bound += y * &c.rhs;
        }
        for (r, b) in residual.iter().zip(&self.bounds) {
            if r.is_positive() {
                bound += r * b.upper.as_ref()?;
            } else if r.is_negative() {
                bound += r * b.lower.as_ref()?;
            }
        }
        Some(bound)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "\\ {}", self.name);
        out.push_str("maximize\n");
        let _ = writeln!(out, "  obj:{}", self.terms(&self.objective));
        out.push_str("subject to\n");
        for c in &self.constraints {
            let _ = writeln!(
                out,
                "  {}:{} {} {}",
                c.name,
                self.terms(&c.coeffs),
                c.relation.symbol(),
                rational_to_string(&c.rhs)
            );
        }
        out.push_str("bounds\n");
        for (v, b) in self.variables.iter().zip(&self.bounds) {
            let line = match (&b.lower, &b.upper) {
                (None, None) => format!("{v} free"),
                (Some(l), None) => format!("{v} >= {}", rational_to_string(l)),
                (None, Some(u)) => format!("{v} <= {}", rational_to_string(u)),
                (Some(l), Some(u)) => {
                    format!("{} <= {v} <= {}", rational_to_string(l), rational_to_string(u))
                }
            };
            let _ = writeln!(out, "  {line}");
        }
        out.push_str("end\n");
        out
    }

    fn terms(&self, coeffs: &[BigRational]) -> String {
        let mut s = String::new();
        for (c, v) in coeffs.iter().zip(&self.variables) {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { '-' } else { '+' };
            let _ = write!(s, " {sign} {} {v}", rational_to_string(&c.abs()));
        }
        if s.is_empty() {
            s.push_str(" + 0");
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self, LpError> {
        #[derive(PartialEq)]
        enum Section {
            Head,
            Objective,
            Rows,
            Bounds,
            Done,
        }
        type Terms = Vec<(BigRational, String)>;
        let mut name = None;
        let mut section = Section::Head;
        let mut objective: Terms = Vec::new();
        let mut rows: Vec<(String, Terms, Relation, BigRational)> = Vec::new();
        let mut bounds: Vec<(String, Bound)> = Vec::new();
        let mut order: Vec<String> = Vec::new();
        let note = |order: &mut Vec<String>, v: &str| {
            if !order.iter().any(|o| o == v) {
                order.push(v.to_string());
            }
        };

        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let err = |message: String| LpError::Parse { line: line_no, message };
            let line = raw.trim();
            if let Some(comment) = line.strip_prefix('\\') {
                if name.is_none() {
                    name = Some(comment.trim().to_string());
                }
                continue;
            }
            if line.is_empty() {
                continue;
            }
            match line.to_ascii_lowercase().as_str() {
                "maximize" => {
                    section = Section::Objective;
                    continue;
                }
                "subject to" => {
                    section = Section::Rows;
                    continue;
                }
                "bounds" => {
                    section = Section::Bounds;
                    continue;
                }
                "end" => {
                    section = Section::Done;
                    continue;
                }
                _ => {}
            }
            match section {
                Section::Head | Section::Done => return Err(err(format!("unexpected `{line}`"))),
                Section::Objective => {
                    let (_, body) = line.split_once(':').ok_or_else(|| err("missing label".into()))?;
                    objective = parse_terms(body).map_err(err)?;
                    for (_, v) in &objective {
                        note(&mut order, v);
                    }
                }
                Section::Rows => {
                    let (label, body) = line.split_once(':').ok_or_else(|| err("missing label".into()))?;
                    let (rel, pos, width) = ["<=", ">=", "="]
                        .iter()
                        .find_map(|sym| body.find(sym).map(|p| (*sym, p, sym.len())))
                        .ok_or_else(|| err("missing relation".into()))?;
                    let relation = match rel {
                        "<=" => Relation::Le,
                        ">=" => Relation::Ge,
                        _ => Relation::Eq,
                    };
                    let terms = parse_terms(&body[..pos]).map_err(err)?;
                    let rhs = parse_rational(&body[pos + width..]).map_err(|e| err(e.to_string()))?;
                    for (_, v) in &terms {
                        note(&mut order, v);
                    }
                    rows.push((label.trim().to_string(), terms, relation, rhs));
                }
                Section::Bounds => {
                    bounds.push(parse_bound(line).map_err(err)?);
                }
            }
        }
        if section != Section::Done {
            return Err(LpError::Parse { line: text.lines().count(), message: "missing `end`".into() });
        }

        // Declared bounds fix the order; unlisted variables follow.
        let mut all: Vec<String> = bounds.iter().map(|(v, _)| v.clone()).collect();
        for v in order {
            if !all.contains(&v) {
                all.push(v);
            }
        }
        let mut lp = LinearProgram::new(name.unwrap_or_default());
        for v in &all {
            let b = bounds
                .iter()
                .find(|(n, _)| n == v)
                .map_or_else(Bound::nonnegative, |(_, b)| b.clone());
            lp.add_variable(v.clone(), b)?;
        }
        let dense = |lp: &LinearProgram, terms: &Terms| -> Result<Vec<BigRational>, LpError> {
            let mut c = vec![BigRational::zero(); lp.variables.len()];
            for (k, v) in terms {
                c[lp.index(v)?] += k;
            }
            Ok(c)
        };
        lp.objective = dense(&lp, &objective)?;
        for (label, terms, relation, rhs) in rows {
            let c = dense(&lp, &terms)?;
            lp.add_constraint(label, c, relation, rhs);
        }
        Ok(lp)
    }
}

fn parse_terms(s: &str) -> Result<Vec<(BigRational, String)>, String> {
    let tokens: Vec<&str> = s.split_whitespace().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < tokens.len() {
        let mut sign = BigRational::one();
        if tokens[i] == "+" || tokens[i] == "-" {
            if tokens[i] == "-" {
                sign = -sign;
            }
            i += 1;
        }
        let coef = tokens.get(i).ok_or("dangling sign")?;
        if is_name(coef) {
            out.push((sign, coef.to_string()));
            i += 1;
            continue;
        }
        let k = parse_rational(coef).map_err(|e| e.to_string())?;
        i += 1;
        match tokens.get(i) {
            Some(v) if is_name(v) => {
                out.push((sign * k, v.to_string()));
                i += 1;
            }
            // A bare constant is only allowed as the zero placeholder.
            None if k.is_zero() => {}
            _ => return Err(format!("expected a variable after `{coef}`")),
        }
    }
    Ok(out)
}

fn is_name(s: &str) -> bool {
    let mut chars = s.chars();
    chars.next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '.')
}

fn parse_bound(line: &str) -> Result<(String, Bound), String> {
    let t: Vec<&str> = line.split_whitespace().collect();
    let num = |s: &str| parse_rational(s).map_err(|e| e.to_string());
    match t.as_slice() {
        [v, "free"] if is_name(v) => Ok((v.to_string(), Bound::free())),
        [v, ">=", l] if is_name(v) => Ok((v.to_string(), Bound { lower: Some(num(l)?), upper: None })),
        [v, "<=", u] if is_name(v) => Ok((v.to_string(), Bound { lower: None, upper: Some(num(u)?) })),
        [l, "<=", v, "<=", u] if is_name(v) => {
            Ok((v.to_string(), Bound { lower: Some(num(l)?), upper: Some(num(u)?) }))
        }
        _ => Err(format!("bad bound `{line}`")),
    }
}

fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter()
        .zip(b)
        .filter(|(x, _)| !x.is_zero())
        .map(|(x, y)| x * y)
        .fold(BigRational::zero(), |s, t| s + t)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Unbounded,
    Infeasible,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Optimal objective value; zero unless the status is optimal.
    pub value: BigRational,
    /// One value per variable, in declaration order.
    pub assignment: Vec<BigRational>,
    /// One multiplier per constraint, in declaration order.
    pub duals: Vec<BigRational>,
}

impl LpSolution {
    fn without_optimum(status: LpStatus) -> Self {
        LpSolution { status, value: BigRational::zero(), assignment: Vec::new(), duals: Vec::new() }
    }

    pub fn get(&self, lp: &LinearProgram, name: &str) -> Option<&BigRational> {
        lp.index(name).ok().and_then(|j| self.assignment.get(j))
    }
}

/// How an original variable is rebuilt from nonnegative tableau columns.
enum Substitution {
    /// `x = offset + t`
    Shift { col: usize, offset: BigRational },
    /// `x = offset - t`
    Mirror { col: usize, offset: BigRational },
    /// `x = t⁺ - t⁻`
    Split { pos: usize, neg: usize },
}

struct Tableau {
    rows: Vec<Vec<BigRational>>,
    rhs: Vec<BigRational>,
    basis: Vec<usize>,
    cost: Vec<BigRational>,
    value: BigRational,
}

impl Tableau {
    fn pivot(&mut self, r: usize, j: usize) {
        let p = self.rows[r][j].clone();
        if !p.is_one() {
            for a in self.rows[r].iter_mut().filter(|a| !a.is_zero()) {
                *a /= &p;
            }
            self.rhs[r] /= &p;
        }
        let prow = self.rows[r].clone();
        let prhs = self.rhs[r].clone();
        let nz: Vec<usize> = (0..prow.len()).filter(|&k| !prow[k].is_zero()).collect();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][j].is_zero() {
                continue;
            }
            let f = self.rows[i][j].clone();
            for &k in &nz {
                let d = &f * &prow[k];
                self.rows[i][k] -= d;
            }
            self.rhs[i] -= &f * &prhs;
        }
        if !self.cost[j].is_zero() {
            let f = self.cost[j].clone();
            for &k in &nz {
                let d = &f * &prow[k];
                self.cost[k] -= d;
            }
            self.value += &f * &prhs;
        }
        self.basis[r] = j;
    }

    /// Loads reduced costs for maximizing `c`.
    fn price(&mut self, c: &[BigRational]) {
        self.cost = c.to_vec();
        self.value = BigRational::zero();
        for (i, &b) in self.basis.iter().enumerate() {
            if c[b].is_zero() {
                continue;
            }
            let cb = c[b].clone();
            for (k, a) in self.rows[i].iter().enumerate() {
                if !a.is_zero() {
                    self.cost[k] -= &cb * a;
                }
            }
            self.value += &cb * &self.rhs[i];
        }
    }

    /// Bland's rule. Returns false on unboundedness.
    fn optimize(&mut self, allowed: usize) -> bool {
        loop {
            let Some(j) = (0..allowed).find(|&k| self.cost[k].is_positive()) else {
                return true;
            };
            let mut best: Option<(usize, BigRational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][j];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            let Some((r, _)) = best else {
                return false;
            };
            self.pivot(r, j);
        }
    }
}

/// Maximizes the objective exactly.
pub fn simplex_max(lp: &LinearProgram) -> LpSolution {
    let zero = BigRational::zero;
    let n = lp.variables.len();

    // Columns for the structural variables, plus bound rows `t <= u - l`.
    let mut subs = Vec::with_capacity(n);
    let mut ncols = 0;
    let mut bound_rows: Vec<(usize, BigRational)> = Vec::new();
    for b in &lp.bounds {
        match (&b.lower, &b.upper) {
            (Some(l), u) => {
                if let Some(u) = u {
                    bound_rows.push((ncols, u - l));
                }
                subs.push(Substitution::Shift { col: ncols, offset: l.clone() });
                ncols += 1;
            }
            (None, Some(u)) => {
                subs.push(Substitution::Mirror { col: ncols, offset: u.clone() });
                ncols += 1;
            }
            (None, None) => {
                subs.push(Substitution::Split { pos: ncols, neg: ncols + 1 });
                ncols += 2;
            }
        }
    }
    if bound_rows.iter().any(|(_, w)| w.is_negative()) {
        return LpSolution::without_optimum(LpStatus::Infeasible);
    }

    let expand = |coeffs: &[BigRational]| -> (Vec<BigRational>, BigRational) {
        let mut row = vec![zero(); ncols];
        let mut constant = zero();
        for (a, s) in coeffs.iter().zip(&subs) {
            if a.is_zero() {
                continue;
            }
            match s {
                Substitution::Shift { col, offset } => {
                    row[*col] += a;
                    constant += a * offset;
                }
                Substitution::Mirror { col, offset } => {
                    row[*col] -= a;
                    constant += a * offset;
                }
                Substitution::Split { pos, neg } => {
                    row[*pos] += a;
                    row[*neg] -= a;
                }
            }
        }
        (row, constant)
    };

    // Rows: original constraints first, then bound rows.
    let mut raw: Vec<(Vec<BigRational>, Relation, BigRational)> = Vec::new();
    for c in &lp.constraints {
        let (row, k) = expand(&c.coeffs);
        raw.push((row, c.relation, &c.rhs - k));
    }
    for (col, w) in &bound_rows {
        let mut row = vec![zero(); ncols];
        row[*col] = BigRational::one();
        raw.push((row, Relation::Le, w.clone()));
    }
    let m = raw.len();

    let mut flipped = vec![false; m];
    for (i, (row, rel, rhs)) in raw.iter_mut().enumerate() {
        if rhs.is_negative() {
            flipped[i] = true;
            for a in row.iter_mut() {
                *a = -a.clone();
            }
            *rhs = -rhs.clone();
            *rel = match rel {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
            };
        }
    }

    let slacks: Vec<usize> = (0..m).filter(|&i| raw[i].1 != Relation::Eq).collect();
    let arts: Vec<usize> = (0..m).filter(|&i| raw[i].1 != Relation::Le).collect();
    let width = ncols + slacks.len() + arts.len();
    let first_art = ncols + slacks.len();
    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    let mut basis = vec![0; m];
    // The column holding the identity for each row: its dual lives there.
    let mut unit_col = vec![0; m];
    for (i, (row, rel, b)) in raw.into_iter().enumerate() {
        let mut full = row;
        full.resize(width, zero());
        if let Some(s) = slacks.iter().position(|&k| k == i) {
            full[ncols + s] = if rel == Relation::Le { BigRational::one() } else { rat(-1, 1) };
            if rel == Relation::Le {
                basis[i] = ncols + s;
                unit_col[i] = ncols + s;
            }
        }
        if let Some(a) = arts.iter().position(|&k| k == i) {
            full[first_art + a] = BigRational::one();
            basis[i] = first_art + a;
            unit_col[i] = first_art + a;
        }
        rows.push(full);
        rhs.push(b);
    }
    let mut t = Tableau { rows, rhs, basis, cost: Vec::new(), value: zero() };

    if !arts.is_empty() {
        let mut c1 = vec![zero(); width];
        for c in c1.iter_mut().skip(first_art) {
            *c = rat(-1, 1);
        }
        t.price(&c1);
        t.optimize(width);
        if t.value.is_negative() {
            return LpSolution::without_optimum(LpStatus::Infeasible);
        }
        // Drive zero-level artificials out where some real column can replace them.
        for i in 0..m {
            if t.basis[i] >= first_art {
                if let Some(j) = (0..first_art).find(|&j| !t.rows[i][j].is_zero()) {
                    t.pivot(i, j);
                }
            }
        }
    }

    let mut c2 = vec![zero(); width];
    let mut offset = zero();
    for (cj, s) in lp.objective.iter().zip(&subs) {
        if cj.is_zero() {
            continue;
        }
        match s {
            Substitution::Shift { col, offset: o } => {
                c2[*col] += cj;
                offset += cj * o;
            }
            Substitution::Mirror { col, offset: o } => {
                c2[*col] -= cj;
                offset += cj * o;
            }
            Substitution::Split { pos, neg } => {
                c2[*pos] += cj;
                c2[*neg] -= cj;
            }
        }
    }
    t.price(&c2);
    if !t.optimize(first_art) {
        return LpSolution::without_optimum(LpStatus::Unbounded);
    }

    let mut cols = vec![zero(); width];
    for (i, &b) in t.basis.iter().enumerate() {
        cols[b] = t.rhs[i].clone();
    }
    let assignment: Vec<BigRational> = subs
        .iter()
        .map(|s| match s {
            Substitution::Shift { col, offset } => offset + &cols[*col],
            Substitution::Mirror { col, offset } => offset - &cols[*col],
            Substitution::Split { pos, neg } => &cols[*pos] - &cols[*neg],
        })
        .collect();
    let duals = (0..lp.constraints.len())
        .map(|i| {
            let y = -t.cost[unit_col[i]].clone();
            if flipped[i] {
                -y
            } else {
                y
            }
        })
        .collect();
    LpSolution { status: LpStatus::Optimal, value: t.value + offset, assignment, duals }
}

pub const ENUMERATION_LIMIT: usize = 6;

/// Best objective over all basic feasible solutions, found by solving every
/// square subsystem of tight constraints and bounds. Assumes the optimum is
/// attained at a vertex.
pub fn enumerate_vertices_max(lp: &LinearProgram) -> Result<Option<(BigRational, Vec<BigRational>)>, LpError> {
    let n = lp.variables.len();
    if n > ENUMERATION_LIMIT {
        return Err(LpError::TooLarge { limit: ENUMERATION_LIMIT, got: n });
    }
    let mut planes: Vec<(Vec<BigRational>, BigRational)> =
        lp.constraints.iter().map(|c| (c.coeffs.clone(), c.rhs.clone())).collect();
    for (j, b) in lp.bounds.iter().enumerate() {
        for v in [&b.lower, &b.upper].into_iter().flatten() {
            let mut e = vec![BigRational::zero(); n];
            e[j] = BigRational::one();
            planes.push((e, v.clone()));
        }
    }
    let mut best: Option<(BigRational, Vec<BigRational>)> = None;
    let mut pick: Vec<usize> = (0..n).collect();
    if planes.len() < n {
        return Ok(None);
    }
    loop {
        let a: Vec<Vec<BigRational>> = pick.iter().map(|&i| planes[i].0.clone()).collect();
        let b: Vec<BigRational> = pick.iter().map(|&i| planes[i].1.clone()).collect();
        if let Some(x) = solve_square(a, b) {
            if lp.is_feasible(&x) {
                let v = lp.objective_value(&x);
                if best.as_ref().is_none_or(|(bv, _)| v > *bv) {
                    best = Some((v, x));
                }
            }
        }
        // Next n-subset in lexicographic order.
        let mut k = n;
        loop {
            if k == 0 {
                return Ok(best);
            }
            k -= 1;
            if pick[k] < planes.len() - n + k {
                break;
            }
        }
        pick[k] += 1;
        for i in k + 1..n {
            pick[i] = pick[i - 1] + 1;
        }
    }
}

/// Gauss-Jordan elimination; `None` when singular.
fn solve_square(mut a: Vec<Vec<BigRational>>, mut b: Vec<BigRational>) -> Option<Vec<BigRational>> {
    let n = b.len();
    for col in 0..n {
        let p = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, p);
        b.swap(col, p);
        let piv = a[col][col].clone();
        for k in col..n {
            a[col][k] /= &piv;
        }
        b[col] /= &piv;
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for k in col..n {
                    let d = &f * &a[col][k];
                    a[r][k] -= d;
                }
                let d = &f * &b[col];
                b[r] -= d;
            }
        }
    }
    Some(b)
}

/// Variable order of the integral program.
pub const INTEGRAL_VARIABLES: [&str; 6] = ["gamma", "x1", "x2", "x3u", "x3d", "x4"];

/// The bound for integral algorithms on maximum degree three. Variables are
/// the probabilities that the edges drawn with a box are in the matching.
pub fn build_integral_deg3_lp() -> LinearProgram {
    let mut lp = LinearProgram::new("integral-deg3");
    lp.add_variable("gamma", Bound::free()).unwrap();
    for v in &INTEGRAL_VARIABLES[1..] {
        lp.add_variable(*v, Bound::unit()).unwrap();
    }
    lp.maximize_variable(0);
    let n = INTEGRAL_VARIABLES.len();
    let x = |j: usize| Affine::var(n, j);
    let k = |c: i64| Affine::constant(n, rat(c, 1));
    let g = |m: i64| Affine::var(n, 0).scale(&rat(m, 1));
    let (x1, x2, x3u, x3d, x4) = (x(1), x(2), x(3), x(4), x(5));
    let free12 = k(1) - x1.clone() - x2.clone();
    let pend_u = k(1) - x1.clone() - x3u.clone();
    let pend_d = k(1) - x1.clone() - x3d.clone();
    let dash_u = k(1) - x3u.clone() - x4.clone();
    let dash_d = k(1) - x3d.clone() - x4.clone();
    let two = |a: Affine| a.scale(&rat(2, 1));

    let r4 = two(x1.clone()) + two(x2.clone()) + x3u.clone() + x3d.clone();
    let r5 = r4.clone() + x4.clone() + pend_u.clone() + pend_d.clone();
    let r6 = r5.clone() + dash_u.clone() + dash_d.clone();
    lp.add_affine("r1", two(x1.clone()), Relation::Ge, g(2));
    lp.add_affine("r2", two(x1.clone()) + two(x2.clone()) + free12.clone().scale(&rat(4, 1)), Relation::Ge, g(4));
    lp.add_affine("r3", free12, Relation::Ge, k(0));
    lp.add_affine("r4", r4, Relation::Ge, g(4));
    lp.add_affine("r5", r5, Relation::Ge, g(5));
    lp.add_affine("r6", r6, Relation::Ge, g(6));
    lp.add_affine("r7", pend_u, Relation::Ge, k(0));
    lp.add_affine("r8", pend_d, Relation::Ge, k(0));
    lp.add_affine("r9", dash_u, Relation::Ge, k(0));
    lp.add_affine("r10", dash_d, Relation::Ge, k(0));
    lp
}

/// The matching probability of each edge of an integral option, in arrival
/// order, as an affine form over [`INTEGRAL_VARIABLES`]. Edges whose
/// endpoints are otherwise unmatched take the leftover probability.
pub fn integral_box_forms(option: IntegralOption) -> Vec<Affine> {
    let n = INTEGRAL_VARIABLES.len();
    let x = |j: usize| Affine::var(n, j);
    let one = || Affine::constant(n, BigRational::one());
    let mut forms = vec![x(1), x(1), x(2), x(2)];
    match option {
        IntegralOption::Start => {}
        IntegralOption::First => {
            for _ in 0..4 {
                forms.push(one() - x(1) - x(2));
            }
        }
        IntegralOption::Second => {
            forms.extend([x(3), x(4)]);
            forms.extend([one() - x(1) - x(3), one() - x(1) - x(4), x(5)]);
            forms.extend([one() - x(3) - x(5), one() - x(4) - x(5)]);
        }
    }
    forms
}

/// One `γ` variable plus one `y` per edge; a prefix constraint per batch and
/// a capacity constraint per vertex.
pub fn build_deg4_lp(stream: &ArrivalStream) -> Result<LinearProgram, LpError> {
    let marks = stream.batch_marks.as_ref().ok_or(LpError::MissingData("batch marks"))?;
    let mu = stream.expected_opt_per_batch.as_ref().ok_or(LpError::MissingData("matching sizes"))?;
    if mu.len() != marks.len() {
        return Err(LpError::MissingData("one matching size per batch"));
    }
    let mut lp = LinearProgram::new(format!("batch-prefix:{}", stream.name));
    lp.add_variable("gamma", Bound::free())?;
    for e in 1..=stream.len() {
        lp.add_variable(format!("y{e}"), Bound::nonnegative())?;
    }
    lp.maximize_variable(0);
    let n = stream.len() + 1;
    for (i, (&end, &m)) in marks.iter().zip(mu).enumerate() {
        let mut c = vec![BigRational::zero(); n];
        c[0] = rat(-(m as i64), 1);
        for ce in c.iter_mut().take(end + 1).skip(1) {
            *ce = BigRational::one();
        }
        lp.add_constraint(format!("mu{}", i + 1), c, Relation::Ge, BigRational::zero());
    }
    let mut vertex: HashMap<&str, usize> = HashMap::new();
    let mut incidence: Vec<Vec<usize>> = Vec::new();
    for (e, (u, v)) in stream.arrivals.iter().enumerate() {
        for w in [u, v] {
            let next = vertex.len();
            let id = *vertex.entry(w.as_str()).or_insert(next);
            if id == incidence.len() {
                incidence.push(Vec::new());
            }
            incidence[id].push(e + 1);
        }
    }
    for (id, edges) in incidence.iter().enumerate() {
        let mut c = vec![BigRational::zero(); n];
        for &e in edges {
            c[e] = BigRational::one();
        }
        lp.add_constraint(format!("v{}", id + 1), c, Relation::Le, BigRational::one());
    }
    Ok(lp)
}

/// The MinIndex program over the probabilities of the first four matchings.
pub fn build_minindex_lp() -> LinearProgram {
    let mut lp = LinearProgram::new("minindex");
    lp.add_variable("gamma", Bound::free()).unwrap();
    for i in 1..=4 {
        lp.add_variable(format!("p{i}"), Bound::nonnegative()).unwrap();
    }
    lp.maximize_variable(0);
    let rows = [
        [rat(1, 1), rat(0, 1), rat(0, 1), rat(0, 1)],
        [rat(1, 2), rat(1, 1), rat(0, 1), rat(0, 1)],
        [rat(1, 2), rat(1, 2), rat(1, 1), rat(0, 1)],
        [rat(1, 2), rat(2, 3), rat(1, 2), rat(1, 3)],
    ];
    for (i, r) in rows.into_iter().enumerate() {
        let mut c = vec![rat(-1, 1)];
        c.extend(r);
        lp.add_constraint(format!("ratio{}", i + 1), c, Relation::Ge, BigRational::zero());
    }
    let mut total = vec![BigRational::zero()];
    total.extend((0..4).map(|_| BigRational::one()));
    lp.add_constraint("total", total, Relation::Le, BigRational::one());
    lp
}

#[cfg(test)]
mod tests {
    use super::*;

    fn solved(lp: &LinearProgram) -> LpSolution {
        let s = simplex_max(lp);
        assert_eq!(s.status, LpStatus::Optimal);
        assert!(lp.certify(&s), "certificate for {}", lp.name());
        s
    }

    #[test]
    fn trivial_programs() {
        let mut lp = LinearProgram::new("t");
        lp.add_variable("g", Bound::free()).unwrap();
        lp.maximize_variable(0);
        lp.add_constraint("a", vec![rat(1, 1)], Relation::Le, rat(1, 1));
        assert_eq!(solved(&lp).value, rat(1, 1));

        let mut lp = LinearProgram::new("t2");
        lp.add_variable("g", Bound::free()).unwrap();
        lp.add_variable("x", Bound::nonnegative()).unwrap();
        lp.maximize_variable(0);
        lp.add_constraint("a", vec![rat(1, 1), rat(-1, 1)], Relation::Le, rat(0, 1));
        lp.add_constraint("b", vec![rat(0, 1), rat(1, 1)], Relation::Le, rat(3, 4));
        assert_eq!(solved(&lp).value, rat(3, 4));
    }

    #[test]
    fn statuses() {
        let mut lp = LinearProgram::new("unbounded");
        lp.add_variable("g", Bound::free()).unwrap();
        lp.maximize_variable(0);
        lp.add_constraint("a", vec![rat(1, 1)], Relation::Ge, rat(-2, 1));
        assert_eq!(simplex_max(&lp).status, LpStatus::Unbounded);

        let mut lp = LinearProgram::new("infeasible");
        lp.add_variable("x", Bound::unit()).unwrap();
        lp.maximize_variable(0);
        lp.add_constraint("a", vec![rat(1, 1)], Relation::Ge, rat(2, 1));
        assert_eq!(simplex_max(&lp).status, LpStatus::Infeasible);

        let mut lp = LinearProgram::new("eq");
        lp.add_variable("x", Bound { lower: None, upper: Some(rat(5, 1)) }).unwrap();
        lp.add_variable("y", Bound::unit()).unwrap();
        lp.set_objective(vec![rat(1, 1), rat(1, 1)]);
        lp.add_constraint("a", vec![rat(1, 1), rat(2, 1)], Relation::Eq, rat(3, 1));
        let s = solved(&lp);
        assert_eq!(s.value, rat(3, 1));
        assert_eq!(s.assignment, vec![rat(3, 1), rat(0, 1)]);
    }

    #[test]
    fn minindex_program() {
        let lp = build_minindex_lp();
        let s = solved(&lp);
        assert_eq!(s.value, rat(5, 9));
        assert_eq!(s.assignment[1..], [rat(5, 9), rat(3, 9), rat(1, 9), rat(0, 1)]);
        let relaxed = simplex_max(&lp.without_constraint("ratio4"));
        assert!(relaxed.value >= rat(5, 9));
    }

    #[test]
    fn integral_program() {
        let lp = build_integral_deg3_lp();
        assert_eq!(lp.variables().len(), 6);
        assert_eq!(solved(&lp).value, rat(18, 31));
    }

    #[test]
    fn vertex_enumeration_agrees() {
        for lp in [build_minindex_lp(), build_integral_deg3_lp()] {
            let (v, x) = enumerate_vertices_max(&lp).unwrap().unwrap();
            assert_eq!(v, simplex_max(&lp).value);
            assert!(lp.is_feasible(&x));
        }
    }

    #[test]
    fn text_round_trip() {
        for lp in [build_minindex_lp(), build_integral_deg3_lp()] {
            let text = lp.to_text();
            assert_eq!(LinearProgram::parse(&text).unwrap(), lp);
        }
        let lp = LinearProgram::parse("\\ tiny\nmaximize\n obj: + 1 g\nsubject to\n a: g - 0.5 x <= 0\n b: + 1 x <= 3/2\nbounds\n g free\nend\n").unwrap();
        assert_eq!(simplex_max(&lp).value, rat(3, 4));
        assert!(matches!(LinearProgram::parse("maximize\n obj: + 1 g\n"), Err(LpError::Parse { .. })));
        assert!(matches!(
            LinearProgram::parse("maximize\n obj: + 1\nend\n"),
            Err(LpError::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn dual_bound_rejects_wrong_signs() {
        let lp = build_minindex_lp();
        let s = simplex_max(&lp);
        let mut bad = s.duals.clone();
        bad[4] = rat(-1, 1);
        assert_eq!(lp.dual_bound(&bad), None);
    }
}

#[cfg(test)]
mod deg4_tests {
    use super::*;
    use crate::instances::degree4_instance;

    #[test]
    fn batch_prefix_program() {
        let stream = degree4_instance();
        let lp = build_deg4_lp(&stream).unwrap();
        assert_eq!(lp.variables().len(), stream.len() + 1);
        let prefix = lp.constraints().iter().filter(|c| c.name.starts_with("mu")).count();
        assert_eq!(prefix, 30);
        assert!(lp.is_feasible(&vec![BigRational::zero(); stream.len() + 1]));
        let s = simplex_max(&lp);
        assert!(lp.certify(&s));
    }
}
