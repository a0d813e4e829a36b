//! The MinIndex meta-algorithm: `k` greedy matchings, each arriving edge
//! going to the first one that can take it, with matching `i` returned with
//! probability `p_i`.

use std::collections::HashSet;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::instances::ArrivalStream;
use crate::numeric::{rat, rational_to_string};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MinIndexError {
    #[error("need at least one matching")]
    NoMatchings,
    #[error("{given} probabilities for {k} matchings")]
    Arity { k: usize, given: usize },
    #[error("negative probability at index {0}")]
    Negative(usize),
    #[error("probabilities sum to {0}, not 1")]
    Sum(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Placement {
    /// Zero-based index of the receiving matching.
    Placed(usize),
    Rejected,
}

#[derive(Clone, Debug)]
pub struct MinIndexState {
    probabilities: Vec<BigRational>,
    matchings: Vec<Vec<(String, String)>>,
    covered: Vec<HashSet<String>>,
    rejected: usize,
    step: usize,
}

impl MinIndexState {
    pub fn new(k: usize, probabilities: Vec<BigRational>) -> Result<Self, MinIndexError> {
        if k == 0 {
            return Err(MinIndexError::NoMatchings);
        }
        if probabilities.len() != k {
            return Err(MinIndexError::Arity { k, given: probabilities.len() });
        }
        if let Some(i) = probabilities.iter().position(|p| p.is_negative()) {
            return Err(MinIndexError::Negative(i));
        }
        let sum: BigRational = probabilities.iter().sum();
        if !sum.is_one() {
            return Err(MinIndexError::Sum(rational_to_string(&sum)));
        }
        Ok(MinIndexState {
            probabilities,
            matchings: vec![Vec::new(); k],
            covered: vec![HashSet::new(); k],
            rejected: 0,
            step: 0,
        })
    }

    pub fn k(&self) -> usize {
        self.matchings.len()
    }

    pub fn feed(&mut self, u: &str, v: &str) -> Placement {
        self.step += 1;
        for i in 0..self.k() {
            if !self.covered[i].contains(u) && !self.covered[i].contains(v) {
                self.covered[i].insert(u.to_string());
                self.covered[i].insert(v.to_string());
                self.matchings[i].push((u.to_string(), v.to_string()));
                return Placement::Placed(i);
            }
        }
        self.rejected += 1;
        Placement::Rejected
    }

    /// Whether matching `i` could take the edge now.
    pub fn accepts(&self, i: usize, u: &str, v: &str) -> bool {
        !self.covered[i].contains(u) && !self.covered[i].contains(v)
    }

    pub fn matchings(&self) -> &[Vec<(String, String)>] {
        &self.matchings
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.matchings.iter().map(Vec::len).collect()
    }

    pub fn rejected(&self) -> usize {
        self.rejected
    }

    /// `Σ p_i |M_i|`.
    pub fn expected(&self) -> BigRational {
        self.probabilities
            .iter()
            .zip(&self.matchings)
            .map(|(p, m)| p * BigRational::from_integer((m.len() as i64).into()))
            .fold(BigRational::zero(), |a, b| a + b)
    }

    pub fn trace_event(&self, u: &str, v: &str, placement: Placement) -> serde_json::Value {
        match placement {
            Placement::Placed(i) => serde_json::json!({
                "step": self.step, "edge": [u, v], "placed_index": i + 1
            }),
            Placement::Rejected => serde_json::json!({
                "step": self.step, "edge": [u, v], "rejected": true
            }),
        }
    }
}

/// Feeds a whole stream; returns the state and per-edge placements.
pub fn run_minindex(
    stream: &ArrivalStream,
    probabilities: Vec<BigRational>,
) -> Result<(MinIndexState, Vec<Placement>), MinIndexError> {
    let mut state = MinIndexState::new(probabilities.len(), probabilities)?;
    let placements = stream.arrivals.iter().map(|(u, v)| state.feed(u, v)).collect();
    Ok((state, placements))
}

/// The parameters that are optimal for the MinIndex linear program.
pub fn optimal_parameters() -> Vec<BigRational> {
    vec![rat(5, 9), rat(3, 9), rat(1, 9), rat(0, 1)]
}

/// `slope·n + intercept`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearInN {
    pub slope: BigRational,
    pub intercept: BigRational,
}

impl LinearInN {
    pub fn new(slope: i64, intercept: i64) -> Self {
        LinearInN { slope: rat(slope, 1), intercept: rat(intercept, 1) }
    }

    pub fn at(&self, n: usize) -> BigRational {
        &self.slope * BigRational::from_integer((n as i64).into()) + &self.intercept
    }

    /// `lim_{n→∞} self(n) / other(n)`.
    pub fn limit_ratio(&self, other: &LinearInN) -> BigRational {
        &self.slope / &other.slope
    }
}

/// Matching sizes of the first family as functions of `n`.
pub fn family1_size_forms() -> Vec<LinearInN> {
    vec![LinearInN::new(3, 1), LinearInN::new(4, 2), LinearInN::new(3, 0), LinearInN::new(2, 0)]
}

pub fn family1_opt_form() -> LinearInN {
    LinearInN::new(6, 2)
}

/// Matching sizes of the second family as functions of even `n`.
pub fn family2_size_forms() -> Vec<LinearInN> {
    vec![LinearInN::new(1, -1), LinearInN::new(1, 0), LinearInN::new(2, -4)]
}

pub fn family2_opt_form() -> LinearInN {
    LinearInN::new(2, -2)
}

/// `E[|M|] / OPT` on a family instance with the given parameters.
pub fn family_ratio(sizes: &[usize], probabilities: &[BigRational], opt: usize) -> BigRational {
    let e: BigRational = sizes
        .iter()
        .zip(probabilities)
        .map(|(&s, p)| p * BigRational::from_integer((s as i64).into()))
        .fold(BigRational::zero(), |a, b| a + b);
    e / BigRational::from_integer((opt as i64).into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::{minindex_family1, minindex_family2};

    #[test]
    fn parameter_validation() {
        assert!(MinIndexState::new(3, vec![rat(5, 9), rat(3, 9), rat(1, 9)]).is_ok());
        assert!(MinIndexState::new(1, vec![rat(1, 1)]).is_ok());
        assert_eq!(
            MinIndexState::new(2, vec![rat(1, 2), rat(1, 3)]).unwrap_err(),
            MinIndexError::Sum("5/6".into())
        );
        assert_eq!(MinIndexState::new(0, vec![]).unwrap_err(), MinIndexError::NoMatchings);
        assert!(matches!(
            MinIndexState::new(2, vec![rat(3, 2), rat(-1, 2)]),
            Err(MinIndexError::Negative(1))
        ));
    }

    #[test]
    fn placements() {
        let mut s = MinIndexState::new(2, vec![rat(1, 2), rat(1, 2)]).unwrap();
        assert_eq!(s.feed("a", "b"), Placement::Placed(0));
        assert_eq!(s.feed("b", "c"), Placement::Placed(1));
        assert_eq!(s.feed("a", "c"), Placement::Rejected);
        assert_eq!(s.rejected(), 1);
        assert_eq!(s.expected(), rat(1, 1));
        assert_eq!(MinIndexState::new(1, vec![rat(1, 1)]).unwrap().expected(), rat(0, 1));
    }

    #[test]
    fn family_examples() {
        let (s1, _) = run_minindex(&minindex_family1(2).unwrap(), optimal_parameters()).unwrap();
        assert_eq!(s1.sizes(), vec![7, 10, 6, 4]);
        assert_eq!(s1.expected(), rat(71, 9));
        let p3 = optimal_parameters()[..3].to_vec();
        let (s2, _) = run_minindex(&minindex_family2(4).unwrap(), p3).unwrap();
        assert_eq!(s2.sizes(), vec![3, 4, 4]);
        assert_eq!(s2.expected(), rat(31, 9));
    }

    #[test]
    fn limiting_coefficients() {
        let opt = family1_opt_form();
        let lim: Vec<_> = family1_size_forms().iter().map(|f| f.limit_ratio(&opt)).collect();
        assert_eq!(lim, vec![rat(1, 2), rat(2, 3), rat(1, 2), rat(1, 3)]);
        let opt2 = family2_opt_form();
        let lim2: Vec<_> = family2_size_forms().iter().map(|f| f.limit_ratio(&opt2)).collect();
        assert_eq!(lim2, vec![rat(1, 2), rat(1, 2), rat(1, 1)]);
    }
}
