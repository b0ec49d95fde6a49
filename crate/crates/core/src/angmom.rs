//! Angular momentum coefficients.
//!
//! Clebsch–Gordan coefficients are evaluated exactly with the Racah sum in
//! big-integer rational arithmetic and kept in the form `sign·√(num/den)`.
//! Phase convention is Condon–Shortley. All `(2j+1)`-dimensional matrices
//! index `m` from `+j` down to `−j`.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::matcore::{CMatrix, Complex};

/// Integer or half-integer, stored as twice its value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfInt {
    twice: i64,
}

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt { twice: 0 };
    pub const HALF: HalfInt = HalfInt { twice: 1 };
    pub const ONE: HalfInt = HalfInt { twice: 2 };

    pub const fn from_twice(twice: i64) -> Self {
        HalfInt { twice }
    }

    pub const fn integer(n: i64) -> Self {
        HalfInt { twice: 2 * n }
    }

    #[inline]
    pub const fn twice(self) -> i64 {
        self.twice
    }

    pub const fn is_integer(self) -> bool {
        self.twice % 2 == 0
    }

    pub fn to_f64(self) -> f64 {
        self.twice as f64 / 2.0
    }

    /// `2j+1` for a magnitude `j ≥ 0`.
    pub fn multiplicity(self) -> usize {
        debug_assert!(self.twice >= 0);
        (self.twice + 1) as usize
    }

    /// Projections `+j, j−1, …, −j`.
    pub fn projections(self) -> impl Iterator<Item = HalfInt> {
        let j = self.twice;
        (0..=j).map(move |i| HalfInt::from_twice(j - 2 * i))
    }

    /// `true` if `self − other` is an integer.
    pub fn same_parity(self, other: HalfInt) -> bool {
        (self.twice - other.twice) % 2 == 0
    }

    pub fn abs(self) -> Self {
        HalfInt::from_twice(self.twice.abs())
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt::from_twice(self.twice + rhs.twice)
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt::from_twice(self.twice - rhs.twice)
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt::from_twice(-self.twice)
    }
}

impl From<i64> for HalfInt {
    fn from(n: i64) -> Self {
        HalfInt::integer(n)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

/// Parses `"3"`, `"-1"`, `"3/2"` or any `p/q` whose value is a multiple of ½.
impl FromStr for HalfInt {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::MalformedAngularMomentum(format!("cannot parse {s:?} as an integer or half-integer"));
        let s = s.trim();
        let (p, q) = match s.split_once('/') {
            Some((p, q)) => (
                p.trim().parse::<i64>().map_err(|_| bad())?,
                q.trim().parse::<i64>().map_err(|_| bad())?,
            ),
            None => (s.parse::<i64>().map_err(|_| bad())?, 1),
        };
        if q <= 0 || (2 * p) % q != 0 {
            return Err(bad());
        }
        Ok(HalfInt::from_twice(2 * p / q))
    }
}

/// `sign·√(num/den)` with `num/den` in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactCoeff {
    sign: i8,
    num: BigUint,
    den: BigUint,
}

impl ExactCoeff {
    pub fn zero() -> Self {
        ExactCoeff {
            sign: 0,
            num: BigUint::zero(),
            den: BigUint::one(),
        }
    }

    /// Builds `sign·√square`; `square` must be non-negative.
    pub fn from_signed_square(sign: i8, square: &BigRational) -> Self {
        debug_assert!(!square.is_negative());
        if sign == 0 || square.is_zero() {
            return Self::zero();
        }
        let reduced = square.reduced();
        ExactCoeff {
            sign: sign.signum(),
            num: reduced.numer().magnitude().clone(),
            den: reduced.denom().magnitude().clone(),
        }
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn num(&self) -> &BigUint {
        &self.num
    }

    pub fn den(&self) -> &BigUint {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    /// The exact value squared, `num/den`.
    pub fn square(&self) -> BigRational {
        BigRational::new(
            BigInt::from_biguint(Sign::Plus, self.num.clone()),
            BigInt::from_biguint(Sign::Plus, self.den.clone()),
        )
    }

    /// The exact signed square `sign·num/den`.
    pub fn signed_square(&self) -> BigRational {
        let sq = self.square();
        if self.sign < 0 {
            -sq
        } else {
            sq
        }
    }

    pub fn to_f64(&self) -> f64 {
        if self.sign == 0 {
            return 0.0;
        }
        let sq = self.square().to_f64().expect("finite rational");
        f64::from(self.sign) * sq.sqrt()
    }
}

impl fmt::Display for ExactCoeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            0 => write!(f, "0"),
            s => write!(f, "{}√({}/{})", if s < 0 { "-" } else { "" }, self.num, self.den),
        }
    }
}

fn factorial(n: i64) -> BigInt {
    debug_assert!(n >= 0);
    (2..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

fn check_parity(j: HalfInt, m: HalfInt) -> Result<()> {
    if j.twice() < 0 {
        return Err(Error::MalformedAngularMomentum(format!("negative magnitude j={j}")));
    }
    if !j.same_parity(m) {
        return Err(Error::MalformedAngularMomentum(format!(
            "j={j}, m={m}: j−m is not integral"
        )));
    }
    Ok(())
}

/// Clebsch–Gordan coefficient `⟨j1 m1; j2 m2 | j m⟩`, exactly.
///
/// Returns an exact zero when the triangle or projection constraints fail.
/// Errors when a magnitude is negative or some `j − m` is not an integer.
pub fn clebsch_gordan(
    j1: HalfInt,
    j2: HalfInt,
    j: HalfInt,
    m1: HalfInt,
    m2: HalfInt,
    m: HalfInt,
) -> Result<ExactCoeff> {
    check_parity(j1, m1)?;
    check_parity(j2, m2)?;
    check_parity(j, m)?;

    if m1 + m2 != m || m1.abs() > j1 || m2.abs() > j2 || m.abs() > j {
        return Ok(ExactCoeff::zero());
    }
    if j > j1 + j2 || j < (j1 - j2).abs() || !(j1 + j2 + j).is_integer() {
        return Ok(ExactCoeff::zero());
    }

    // every combination below is an integer once the checks above pass
    let half = |x: HalfInt| x.twice() / 2;
    let a = half(j1 + j2 - j);
    let b = half(j1 - m1);
    let c = half(j2 + m2);
    let d = half(j - j2 + m1);
    let e = half(j - j1 - m2);

    let k_min = 0.max(-d).max(-e);
    let k_max = a.min(b).min(c);
    let mut sum = BigRational::zero();
    for k in k_min..=k_max {
        let den =
            factorial(k) * factorial(a - k) * factorial(b - k) * factorial(c - k) * factorial(d + k) * factorial(e + k);
        let term = BigRational::new(BigInt::one(), den);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
    }
    if sum.is_zero() {
        return Ok(ExactCoeff::zero());
    }

    let pre_num = BigInt::from(j.twice() + 1)
        * factorial(half(j + j1 - j2))
        * factorial(half(j - j1 + j2))
        * factorial(a)
        * factorial(half(j + m))
        * factorial(half(j - m))
        * factorial(half(j1 - m1))
        * factorial(half(j1 + m1))
        * factorial(half(j2 - m2))
        * factorial(half(j2 + m2));
    let pre_den = factorial(half(j1 + j2 + j) + 1);
    let square = &sum * &sum * BigRational::new(pre_num, pre_den);
    let sign = if sum.is_positive() { 1 } else { -1 };
    Ok(ExactCoeff::from_signed_square(sign, &square))
}

fn factorial_f64(n: i64) -> f64 {
    (2..=n).map(|k| k as f64).product()
}

/// Wigner small-d matrix `d^j_{m'm}(β)`, rows `m'` and columns `m` from `+j` down.
pub fn wigner_small_d(j: HalfInt, beta: f64) -> CMatrix {
    let dim = j.multiplicity();
    let (cos, sin) = ((beta / 2.0).cos(), (beta / 2.0).sin());
    CMatrix::from_fn(dim, dim, |r, c| {
        let jt = j.twice();
        let mp = jt - 2 * r as i64; // twice m'
        let m = jt - 2 * c as i64;
        let jp_mp = (jt + mp) / 2;
        let j_mp = (jt - mp) / 2;
        let jp_m = (jt + m) / 2;
        let j_m = (jt - m) / 2;
        let dm = (mp - m) / 2;
        let norm = (factorial_f64(jp_mp) * factorial_f64(j_mp) * factorial_f64(jp_m) * factorial_f64(j_m)).sqrt();
        let s_min = 0.max(-dm);
        let s_max = jp_m.min(j_mp);
        let mut acc = 0.0;
        for s in s_min..=s_max {
            let sign = if (dm + s) % 2 == 0 { 1.0 } else { -1.0 };
            let den = factorial_f64(jp_m - s) * factorial_f64(s) * factorial_f64(dm + s) * factorial_f64(j_mp - s);
            // cos^(2j + m − m' − 2s) · sin^(m' − m + 2s)
            let cos_exp = jt + (m - mp) / 2 - 2 * s;
            let sin_exp = dm + 2 * s;
            acc += sign * cos.powi(cos_exp as i32) * sin.powi(sin_exp as i32) / den;
        }
        Complex::new(norm * acc, 0.0)
    })
}

/// Wigner D-matrix `D^j_{m'm}(α,β,γ) = e^{−im'α} d^j_{m'm}(β) e^{−imγ}`.
pub fn wigner_big_d(j: HalfInt, alpha: f64, beta: f64, gamma: f64) -> CMatrix {
    let small = wigner_small_d(j, beta);
    let jt = j.twice();
    CMatrix::from_fn(small.rows(), small.cols(), |r, c| {
        let mp = (jt - 2 * r as i64) as f64 / 2.0;
        let m = (jt - 2 * c as i64) as f64 / 2.0;
        Complex::from_polar(1.0, -(mp * alpha + m * gamma)) * small[(r, c)]
    })
}
