//! The hand-entered linear programs, rederived from the instances they
//! summarize.

use num_rational::BigRational;
use num_traits::{One, Zero};

use fracmatch::instances::{integral_hard_instance, minindex_family1, minindex_family2, IntegralOption};
use fracmatch::lp::{
    build_integral_deg3_lp, build_minindex_lp, integral_box_forms, simplex_max, Affine, Constraint, LinearProgram,
    LpStatus, Relation, INTEGRAL_VARIABLES,
};
use fracmatch::minindex::{
    family1_opt_form, family1_size_forms, family2_opt_form, family2_size_forms, run_minindex, MinIndexState,
};
use fracmatch::numeric::rat;
use fracmatch::oracle::mu_sequence;

/// `Σ forms[..end] ≥ μ·γ`, normalized the way the program stores rows.
fn prefix_row(forms: &[Affine], end: usize, mu: usize) -> (Vec<BigRational>, BigRational) {
    let n = INTEGRAL_VARIABLES.len();
    let mut sum = Affine::zero(n);
    for f in &forms[..end] {
        sum = sum + f.clone();
    }
    let d = sum - Affine::var(n, 0).scale(&rat(mu as i64, 1));
    (d.coeffs, -d.constant)
}

fn stored(c: &Constraint) -> (Vec<BigRational>, BigRational) {
    assert_eq!(c.relation, Relation::Ge, "{}", c.name);
    (c.coeffs.clone(), c.rhs.clone())
}

fn row(lp: &LinearProgram, name: &str) -> (Vec<BigRational>, BigRational) {
    stored(lp.constraint(name).unwrap_or_else(|| panic!("missing row {name}")))
}

fn eval(a: &Affine, x: &[BigRational]) -> BigRational {
    a.coeffs.iter().zip(x).map(|(c, v)| c * v).fold(a.constant.clone(), |s, t| s + t)
}

#[test]
fn batch_prefixes_give_the_ratio_rows() {
    let lp = build_integral_deg3_lp();
    let expected = [
        (IntegralOption::First, vec![Some("r1"), None, Some("r2")]),
        (IntegralOption::Second, vec![Some("r1"), None, Some("r4"), Some("r5"), Some("r6")]),
    ];
    for (option, rows) in expected {
        let stream = integral_hard_instance(option);
        let forms = integral_box_forms(option);
        assert_eq!(forms.len(), stream.len());
        let marks = stream.batch_marks.clone().unwrap();
        let mu = mu_sequence(&stream);
        assert_eq!(Some(&mu), stream.expected_opt_per_batch.as_ref());
        assert_eq!(marks.len(), rows.len());
        for ((&end, &m), name) in marks.iter().zip(&mu).zip(rows) {
            let derived = prefix_row(&forms, end, m);
            match name {
                Some(name) => assert_eq!(derived, row(&lp, name), "{option:?} prefix {end}"),
                // 2x₁ + 2x₂ ≥ 2γ follows from 2x₁ ≥ 2γ and x₂ ≥ 0.
                None => {
                    let r1 = row(&lp, "r1");
                    let slack: Vec<BigRational> = derived.0.iter().zip(&r1.0).map(|(a, b)| a - b).collect();
                    assert!(slack.iter().all(|c| *c >= BigRational::zero()));
                    assert_eq!(slack[0], BigRational::zero());
                    assert_eq!(derived.1, r1.1);
                }
            }
        }
    }
}

#[test]
fn nonnegativity_rows_are_the_derived_edge_forms() {
    let lp = build_integral_deg3_lp();
    let derived: Vec<(Vec<BigRational>, BigRational)> = [IntegralOption::First, IntegralOption::Second]
        .into_iter()
        .flat_map(integral_box_forms)
        .filter(|f| !f.constant.is_zero())
        .map(|f| (f.coeffs.clone(), -f.constant))
        .collect();
    for name in ["r3", "r7", "r8", "r9", "r10"] {
        assert!(derived.contains(&row(&lp, name)), "{name}");
    }
}

#[test]
fn optimum_is_a_fractional_matching_on_both_options() {
    let lp = build_integral_deg3_lp();
    let s = simplex_max(&lp);
    assert_eq!(s.status, LpStatus::Optimal);
    assert_eq!(s.value, rat(18, 31));
    for option in [IntegralOption::First, IntegralOption::Second] {
        let stream = integral_hard_instance(option);
        let values: Vec<BigRational> = integral_box_forms(option).iter().map(|f| eval(f, &s.assignment)).collect();
        let mut load = std::collections::HashMap::<&str, BigRational>::new();
        for ((u, v), y) in stream.arrivals.iter().zip(&values) {
            assert!(*y >= BigRational::zero());
            for w in [u, v] {
                *load.entry(w.as_str()).or_insert_with(BigRational::zero) += y;
            }
        }
        assert!(load.values().all(|l| *l <= BigRational::one()), "{option:?}");
    }
}

/// Measured `|Mᵢ| / OPT` for each of four greedy matchings.
fn measured_row(stream_edges: &[(&str, &str)], opt: usize) -> Vec<BigRational> {
    let mut state = MinIndexState::new(4, vec![rat(1, 4); 4]).unwrap();
    for (u, v) in stream_edges {
        state.feed(u, v);
    }
    state.sizes().iter().map(|&s| rat(s as i64, opt as i64)).collect()
}

fn minindex_row(lp: &LinearProgram, name: &str) -> Vec<BigRational> {
    let c = lp.constraint(name).unwrap();
    assert_eq!(c.coeffs[0], rat(-1, 1));
    c.coeffs[1..].to_vec()
}

#[test]
fn minindex_rows_are_measured_ratios() {
    let lp = build_minindex_lp();
    assert_eq!(minindex_row(&lp, "ratio1"), measured_row(&[("a", "b")], 1));
    assert_eq!(
        minindex_row(&lp, "ratio2"),
        measured_row(&[("b", "c"), ("a", "b"), ("c", "d")], 2)
    );

    let zero = BigRational::zero();
    let mut family2: Vec<BigRational> =
        family2_size_forms().iter().map(|f| f.limit_ratio(&family2_opt_form())).collect();
    family2.push(zero);
    assert_eq!(minindex_row(&lp, "ratio3"), family2);
    let family1: Vec<BigRational> =
        family1_size_forms().iter().map(|f| f.limit_ratio(&family1_opt_form())).collect();
    assert_eq!(minindex_row(&lp, "ratio4"), family1);
}

#[test]
fn family_size_forms_match_greedy_runs() {
    for n in 2..=10 {
        let s = minindex_family1(n).unwrap();
        let (state, _) = run_minindex(&s, vec![rat(1, 4); 4]).unwrap();
        let sizes: Vec<BigRational> = state.sizes().iter().map(|&k| rat(k as i64, 1)).collect();
        let forms: Vec<BigRational> = family1_size_forms().iter().map(|f| f.at(n)).collect();
        assert_eq!(sizes, forms, "family 1, n = {n}");
        assert_eq!(rat(*mu_sequence(&s).last().unwrap() as i64, 1), family1_opt_form().at(n));
    }
    for n in (4..=12).step_by(2) {
        let s = minindex_family2(n).unwrap();
        let (state, _) = run_minindex(&s, vec![rat(1, 3); 3]).unwrap();
        let sizes: Vec<BigRational> = state.sizes().iter().map(|&k| rat(k as i64, 1)).collect();
        let forms: Vec<BigRational> = family2_size_forms().iter().map(|f| f.at(n)).collect();
        assert_eq!(sizes, forms, "family 2, n = {n}");
        assert_eq!(rat(*mu_sequence(&s).last().unwrap() as i64, 1), family2_opt_form().at(n));
    }
}
