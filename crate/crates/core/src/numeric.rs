//! Exact arithmetic in the quadratic field Q(√5).
//!
//! Every matching and cover value the online algorithm produces is an affine
//! expression in `c = 4/(9 − √5)` with rational coefficients, so all of them
//! live in Q(√5). [`Golden`] stores `a + b·√5` with arbitrary-precision
//! rational `a`, `b`, which keeps every comparison the algorithm makes exact.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::sync::{OnceLock, RwLock};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NumericError {
    #[error("Fibonacci numbers are indexed from 1")]
    FibonacciIndexZero,
    #[error("division by zero in Q(sqrt5)")]
    DivisionByZero,
    #[error("invalid rational literal {0:?}")]
    BadRational(String),
}

/// Builds the rational `num/den`. Panics on a zero denominator.
pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Renders a rational as `"p/q"`, always with an explicit denominator.
pub fn rational_to_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `"p/q"`, `"p"`, or a finite decimal literal such as `"0.25"`.
pub fn parse_rational(s: &str) -> Result<BigRational, NumericError> {
    let bad = || NumericError::BadRational(s.to_string());
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int.starts_with('-');
        let int_digits = int.trim_start_matches(['-', '+']);
        let joined = format!("{}{}", if int_digits.is_empty() { "0" } else { int_digits }, frac);
        let mut n: BigInt = joined.parse().map_err(|_| bad())?;
        if negative {
            n = -n;
        }
        let d = num_traits::pow(BigInt::from(10), frac.len());
        return Ok(BigRational::new(n, d));
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(BigRational::from_integer(n))
}

/// An element `a + b·√5` of Q(√5).
///
/// The representation is unique because `BigRational` is always reduced, so
/// derived equality and hashing are component-wise.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Golden {
    a: BigRational,
    b: BigRational,
}

impl Golden {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        Golden { a, b }
    }

    pub fn from_ints(a: i64, b: i64) -> Self {
        Golden::new(rat(a, 1), rat(b, 1))
    }

    pub fn from_rational(a: BigRational) -> Self {
        Golden::new(a, BigRational::zero())
    }

    pub fn zero() -> Self {
        Golden::default()
    }

    pub fn one() -> Self {
        Golden::from_ints(1, 0)
    }

    pub fn sqrt5() -> Self {
        Golden::from_ints(0, 1)
    }

    /// Rational part.
    pub fn a(&self) -> &BigRational {
        &self.a
    }

    /// Coefficient of √5.
    pub fn b(&self) -> &BigRational {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Field norm `a² − 5b²`, which is zero only for zero itself.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - rat(5, 1) * &self.b * &self.b
    }

    pub fn conjugate(&self) -> Self {
        Golden::new(self.a.clone(), -self.b.clone())
    }

    pub fn inverse(&self) -> Result<Self, NumericError> {
        if self.is_zero() {
            return Err(NumericError::DivisionByZero);
        }
        let n = self.norm();
        Ok(Golden::new(&self.a / &n, -(&self.b / &n)))
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        Golden::new(&self.a * k, &self.b * k)
    }

    pub fn half(&self) -> Self {
        self.scale(&rat(1, 2))
    }

    /// Integer power; negative exponents need a nonzero base.
    pub fn pow(&self, e: i64) -> Result<Self, NumericError> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut out = Golden::one();
        for _ in 0..e.unsigned_abs() {
            out = &out * &base;
        }
        Ok(out)
    }

    /// Exact sign of the real number `a + b√5`.
    pub fn sign(&self) -> Ordering {
        // Scale by the positive denominators: sign(p·s + r·q·√5).
        let x = self.a.numer() * self.b.denom();
        let y = self.b.numer() * self.a.denom();
        integer_sign(&x, &y)
    }

    pub fn is_positive(&self) -> bool {
        self.sign() == Ordering::Greater
    }

    pub fn is_negative(&self) -> bool {
        self.sign() == Ordering::Less
    }

    pub fn min(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    /// `floor(self)` as an integer, computed exactly.
    pub fn floor(&self) -> BigInt {
        // Candidate from a decimal approximation fine enough that the √5
        // error times |b| stays below one unit, then corrected exactly.
        let digits = 32 + (self.b.numer().bits() as usize) / 3;
        let approx = self.approx_scaled(digits);
        let scale = num_traits::pow(BigInt::from(10), digits);
        let mut k = approx.div_floor(&scale);
        loop {
            let kg = Golden::from_rational(BigRational::from_integer(k.clone()));
            if *self < kg {
                k -= 1;
                continue;
            }
            let k1 = Golden::from_rational(BigRational::from_integer(&k + 1));
            if *self >= k1 {
                k += 1;
                continue;
            }
            return k;
        }
    }

    /// Approximates `self · 10^digits` by an integer, within a few units.
    fn approx_scaled(&self, digits: usize) -> BigInt {
        let scale = num_traits::pow(BigInt::from(10), digits);
        let sqrt5_scaled = (BigInt::from(5) * &scale * &scale).sqrt();
        let a = (self.a.numer() * &scale).div_floor(self.a.denom());
        let b = (self.b.numer() * &sqrt5_scaled).div_floor(self.b.denom());
        a + b
    }

    /// Decimal rendering with `places` fractional digits, rounded half away
    /// from zero.
    pub fn to_decimal(&self, places: usize) -> String {
        let shift = Golden::from_rational(BigRational::from_integer(num_traits::pow(
            BigInt::from(10),
            places,
        )));
        let scaled = self * &shift;
        let half = Golden::from_rational(rat(1, 2));
        let negative = scaled.is_negative();
        let magnitude = if negative { -scaled } else { scaled };
        let rounded = (magnitude + half).floor();
        let digits = rounded.to_string();
        let body = if places == 0 {
            digits
        } else {
            let padded = format!("{:0>width$}", digits, width = places + 1);
            let (int, frac) = padded.split_at(padded.len() - places);
            format!("{int}.{frac}")
        };
        if negative && !rounded.is_zero() {
            format!("-{body}")
        } else {
            body
        }
    }

    /// Lossy conversion, for reporting only.
    pub fn to_f64(&self) -> f64 {
        self.to_decimal(17).parse().unwrap_or(f64::NAN)
    }
}

/// Free-function form of the decimal renderer.
pub fn golden_decimal(x: &Golden, places: usize) -> String {
    x.to_decimal(places)
}

impl fmt::Debug for Golden {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.b)
    }
}

impl fmt::Display for Golden {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) => write!(f, "{}·√5", self.b),
            (false, false) => {
                if self.b.is_negative() {
                    write!(f, "{} − {}·√5", self.a, -self.b.clone())
                } else {
                    write!(f, "{} + {}·√5", self.a, self.b)
                }
            }
        }
    }
}

impl PartialOrd for Golden {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Golden {
    fn cmp(&self, other: &Self) -> Ordering {
        // Sign of the difference without reducing any fraction.
        let (a1, a2) = (&self.a, &other.a);
        let (b1, b2) = (&self.b, &other.b);
        let a_den = a1.denom() * a2.denom();
        let a_num = a1.numer() * a2.denom() - a2.numer() * a1.denom();
        let b_den = b1.denom() * b2.denom();
        let b_num = b1.numer() * b2.denom() - b2.numer() * b1.denom();
        integer_sign(&(a_num * &b_den), &(b_num * &a_den))
    }
}

/// Sign of `x + y√5` for integers.
fn integer_sign(x: &BigInt, y: &BigInt) -> Ordering {
    let of = |s: Sign| match s {
        Sign::Plus => Ordering::Greater,
        Sign::Minus => Ordering::Less,
        Sign::NoSign => Ordering::Equal,
    };
    let (sx, sy) = (x.sign(), y.sign());
    if sy == Sign::NoSign || sx == sy {
        return of(sx);
    }
    if sx == Sign::NoSign {
        return of(sy);
    }
    // Mixed signs: the term with the larger square wins.
    match (x * x).cmp(&(y * y * BigInt::from(5))) {
        Ordering::Greater => of(sx),
        Ordering::Less => of(sy),
        // x² = 5y² with nonzero terms would make √5 rational.
        Ordering::Equal => unreachable!("sqrt(5) is irrational"),
    }
}

impl<'a> Add<&'a Golden> for &'a Golden {
    type Output = Golden;
    fn add(self, rhs: &'a Golden) -> Golden {
        Golden::new(&self.a + &rhs.a, &self.b + &rhs.b)
    }
}

impl<'a> Sub<&'a Golden> for &'a Golden {
    type Output = Golden;
    fn sub(self, rhs: &'a Golden) -> Golden {
        Golden::new(&self.a - &rhs.a, &self.b - &rhs.b)
    }
}

impl<'a> Mul<&'a Golden> for &'a Golden {
    type Output = Golden;
    fn mul(self, rhs: &'a Golden) -> Golden {
        let a = &self.a * &rhs.a + rat(5, 1) * &self.b * &rhs.b;
        let b = &self.a * &rhs.b + &rhs.a * &self.b;
        Golden::new(a, b)
    }
}

impl<'a> Div<&'a Golden> for &'a Golden {
    type Output = Golden;
    /// Panics on division by zero; use [`Golden::inverse`] to handle it.
    fn div(self, rhs: &'a Golden) -> Golden {
        self * &rhs.inverse().expect("division by zero in Q(sqrt5)")
    }
}

macro_rules! forward_owned {
    ($trait:ident, $method:ident) => {
        impl $trait<Golden> for Golden {
            type Output = Golden;
            fn $method(self, rhs: Golden) -> Golden {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $trait<&'a Golden> for Golden {
            type Output = Golden;
            fn $method(self, rhs: &'a Golden) -> Golden {
                (&self).$method(rhs)
            }
        }
        impl<'a> $trait<Golden> for &'a Golden {
            type Output = Golden;
            fn $method(self, rhs: Golden) -> Golden {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for Golden {
    type Output = Golden;
    fn neg(self) -> Golden {
        Golden::new(-self.a, -self.b)
    }
}

impl Neg for &Golden {
    type Output = Golden;
    fn neg(self) -> Golden {
        Golden::new(-self.a.clone(), -self.b.clone())
    }
}

impl AddAssign<&Golden> for Golden {
    fn add_assign(&mut self, rhs: &Golden) {
        self.a += &rhs.a;
        self.b += &rhs.b;
    }
}

impl SubAssign<&Golden> for Golden {
    fn sub_assign(&mut self, rhs: &Golden) {
        self.a -= &rhs.a;
        self.b -= &rhs.b;
    }
}

impl std::iter::Sum for Golden {
    fn sum<I: Iterator<Item = Golden>>(iter: I) -> Golden {
        iter.fold(Golden::zero(), |acc, x| acc + x)
    }
}

impl<'a> std::iter::Sum<&'a Golden> for Golden {
    fn sum<I: Iterator<Item = &'a Golden>>(iter: I) -> Golden {
        iter.fold(Golden::zero(), |mut acc, x| {
            acc += x;
            acc
        })
    }
}

/// Wire form used by traces: both components as `"p/q"` plus a decimal.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoldenRepr {
    pub a: String,
    pub b: String,
    pub decimal: String,
}

impl From<&Golden> for GoldenRepr {
    fn from(g: &Golden) -> Self {
        GoldenRepr {
            a: rational_to_string(&g.a),
            b: rational_to_string(&g.b),
            decimal: g.to_decimal(10),
        }
    }
}

impl TryFrom<&GoldenRepr> for Golden {
    type Error = NumericError;
    fn try_from(r: &GoldenRepr) -> Result<Self, NumericError> {
        Ok(Golden::new(parse_rational(&r.a)?, parse_rational(&r.b)?))
    }
}

/// The optimal ratio `c = 4/(9 − √5) = (9 + √5)/19`.
pub fn golden_c() -> Golden {
    Golden::new(rat(9, 19), rat(1, 19))
}

/// The golden ratio φ = (1 + √5)/2.
pub fn phi() -> Golden {
    Golden::new(rat(1, 2), rat(1, 2))
}

/// `F₁ = F₂ = 1`, `Fₙ = Fₙ₋₁ + Fₙ₋₂`.
pub fn fibonacci(n: u64) -> Result<BigUint, NumericError> {
    if n == 0 {
        return Err(NumericError::FibonacciIndexZero);
    }
    let (mut prev, mut cur) = (BigUint::zero(), BigUint::one());
    for _ in 1..n {
        let next = &prev + &cur;
        prev = std::mem::replace(&mut cur, next);
    }
    Ok(cur)
}

fn ytilde_closed_form(n: usize) -> Golden {
    let c = golden_c();
    match n {
        1 => c,
        2 => c.half(),
        3 => (c.scale(&rat(5, 1)) - Golden::from_ints(2, 0)).half(),
        _ => {
            let to_rat = |u: BigUint| BigRational::from_integer(BigInt::from_biguint(Sign::Plus, u));
            let f_n = to_rat(fibonacci(n as u64).expect("n >= 4"));
            let f_n2 = to_rat(fibonacci(n as u64 - 2).expect("n >= 4"));
            let coeff = rat(3, 1) * &f_n + f_n2 - rat(2, 1);
            let constant = rat(2, 1) - rat(2, 1) * f_n;
            (c.scale(&coeff) + Golden::from_rational(constant)).half()
        }
    }
}

fn ytilde_table() -> &'static RwLock<Vec<Golden>> {
    static TABLE: OnceLock<RwLock<Vec<Golden>>> = OnceLock::new();
    TABLE.get_or_init(|| RwLock::new(Vec::new()))
}

/// The ideal path value ỹₙ, memoized process-wide.
///
/// Panics for `n == 0`; the sequence starts at ỹ₁ = c.
pub fn ytilde(n: usize) -> Golden {
    assert!(n >= 1, "ytilde is indexed from 1");
    {
        let table = ytilde_table().read().expect("ytilde table poisoned");
        if let Some(v) = table.get(n - 1) {
            return v.clone();
        }
    }
    let mut table = ytilde_table().write().expect("ytilde table poisoned");
    while table.len() < n {
        let next = ytilde_closed_form(table.len() + 1);
        table.push(next);
    }
    table[n - 1].clone()
}
