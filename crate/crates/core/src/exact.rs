//! Exact rationals and certified comparisons against powers of `e`.
//!
//! A comparison `x <=> e^j` for rational `x` runs on dyadic enclosures of `e`
//! at 64, 256 and 1024 bits (then x4 steps) until the enclosure of `e^j`
//! excludes `x`. For `x != 0` and `j != 0` the two sides can never be equal, so
//! the ladder always terminates given enough precision; the cap turns an
//! unexpectedly long escalation into an error instead of a guess.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub const PRECISION_LADDER: [u32; 3] = [64, 256, 1024];
pub const DEFAULT_PRECISION_CAP: u32 = 1024;

pub fn ratio(num: u64, den: u64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: u64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn pow(base: &Rational, exp: u32) -> Rational {
    num_traits::pow(base.clone(), exp as usize)
}

pub fn to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // Huge numerators/denominators: fall back to a shifted division.
        let n = x.numer().bits() as i64;
        let d = x.denom().bits() as i64;
        let shift = (n - d) - 60;
        let scaled = if shift > 0 {
            x / Rational::from_integer(BigInt::one() << shift as usize)
        } else {
            x * Rational::from_integer(BigInt::one() << (-shift) as usize)
        };
        scaled.to_f64().unwrap_or(f64::NAN) * 2f64.powi(shift as i32)
    })
}

/// Outcome of a single-precision comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    Less,
    Equal,
    Greater,
    Undecided,
}

impl Decision {
    pub fn ordering(self) -> Option<Ordering> {
        match self {
            Decision::Less => Some(Ordering::Less),
            Decision::Equal => Some(Ordering::Equal),
            Decision::Greater => Some(Ordering::Greater),
            Decision::Undecided => None,
        }
    }
}

/// A certified comparison result and the precision that settled it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Certified {
    pub ordering: Ordering,
    pub bits: u32,
}

fn e_bounds_uncached(bits: u32) -> (Rational, Rational) {
    // e = sum 1/k!, tail after the k = N term is below 2/(N+1)!.
    let mut sum = Rational::zero();
    let mut fact = BigInt::one();
    let mut k: u32 = 0;
    let target = BigInt::one() << (bits as usize + 4);
    loop {
        if k > 0 {
            fact *= BigInt::from(k);
        }
        sum += Rational::new(BigInt::one(), fact.clone());
        if fact > target {
            break;
        }
        k += 1;
    }
    let next_fact = &fact * BigInt::from(k + 1);
    let tail = Rational::new(BigInt::from(2), next_fact);
    let hi = &sum + tail;
    let scale = BigInt::one() << bits as usize;
    let lo_d = (&sum * Rational::from_integer(scale.clone())).floor().to_integer();
    let hi_d = (&hi * Rational::from_integer(scale.clone())).ceil().to_integer();
    (Rational::new(lo_d, scale.clone()), Rational::new(hi_d, scale))
}

/// Dyadic enclosure `lo < e < hi` with width about `2^-bits`.
pub fn e_bounds(bits: u32) -> (Rational, Rational) {
    static CACHE: OnceLock<Mutex<HashMap<u32, (Rational, Rational)>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(b) = cache.lock().unwrap().get(&bits) {
        return b.clone();
    }
    let b = e_bounds_uncached(bits);
    cache.lock().unwrap().insert(bits, b.clone());
    b
}

/// Enclosure of `e^j`.
pub fn exp_bounds(j: i64, bits: u32) -> (Rational, Rational) {
    if j == 0 {
        return (Rational::one(), Rational::one());
    }
    let (lo, hi) = e_bounds(bits);
    let k = j.unsigned_abs() as u32;
    let (plo, phi) = (pow(&lo, k), pow(&hi, k));
    if j > 0 {
        (plo, phi)
    } else {
        (phi.recip(), plo.recip())
    }
}

/// Compares `x` with `e^j` using one fixed precision.
pub fn cmp_exp_at(x: &Rational, j: i64, bits: u32) -> Decision {
    if j == 0 {
        return match x.cmp(&Rational::one()) {
            Ordering::Less => Decision::Less,
            Ordering::Equal => Decision::Equal,
            Ordering::Greater => Decision::Greater,
        };
    }
    if !x.is_positive() {
        return Decision::Less;
    }
    let (lo, hi) = exp_bounds(j, bits);
    if *x < lo {
        Decision::Less
    } else if *x > hi {
        Decision::Greater
    } else {
        Decision::Undecided
    }
}

/// Precision steps from `start` up to `cap`: the fixed ladder, then x4.
pub fn precision_steps(start: u32, cap: u32) -> Vec<u32> {
    let mut steps: Vec<u32> = PRECISION_LADDER.iter().copied().filter(|&b| b >= start && b <= cap).collect();
    if steps.first() != Some(&start) && start <= cap {
        steps.insert(0, start);
    }
    let mut b = steps.last().copied().unwrap_or(start).max(PRECISION_LADDER[2]);
    while b.saturating_mul(4) <= cap {
        b *= 4;
        steps.push(b);
    }
    steps
}

/// Certified comparison of `x` with `e^j`, escalating precision from `start`.
pub fn cmp_exp_from(x: &Rational, j: i64, start: u32, cap: u32) -> Result<Certified> {
    for bits in precision_steps(start, cap) {
        if let Some(ordering) = cmp_exp_at(x, j, bits).ordering() {
            return Ok(Certified { ordering, bits });
        }
    }
    Err(Error::PrecisionExhausted { cap })
}

pub fn cmp_exp(x: &Rational, j: i64, cap: u32) -> Result<Certified> {
    cmp_exp_from(x, j, PRECISION_LADDER[0], cap)
}

/// Floating-point approximation of `e^j` for reports only.
pub fn exp_f64(j: i64) -> f64 {
    (j as f64).exp()
}

pub fn rational_string(x: &Rational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// `q^k` as a big integer.
pub fn big_pow(q: u64, k: usize) -> BigInt {
    num_traits::pow(BigInt::from(q), k)
}

/// Exact binomial coefficient.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= BigInt::from(n - i);
        acc = acc.div_floor(&BigInt::from(i + 1));
    }
    acc
}
