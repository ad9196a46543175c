//! Local-lemma style conditions on `p(𝓑)` and `d(𝓑)`, checked with exact
//! rationals against certified enclosures of powers of `e`.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::csp::Csp;
use crate::error::Result;
use crate::exact::{self, cmp_exp, int, pow, rational_string, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "s")]
pub enum LllCondition {
    /// `p(d+1) <= 1/e`
    Classic,
    /// `p(d+1)^s <= e^-s`
    Shatter(u32),
    /// `p(d+1)^(s+1) <= e^-(s+1)`
    Separation(u32),
    /// `p(d+1)^8 <= 2^-15`
    Polynomial,
}

impl LllCondition {
    /// Exponent `k` of `(d+1)`.
    pub fn exponent(self) -> u32 {
        match self {
            LllCondition::Classic => 1,
            LllCondition::Shatter(s) => s,
            LllCondition::Separation(s) => s + 1,
            LllCondition::Polynomial => 8,
        }
    }

    pub fn inequality(self) -> String {
        match self {
            LllCondition::Polynomial => "p(d+1)^8 <= 2^-15".to_string(),
            other => {
                let k = other.exponent();
                format!("p(d+1)^{k} <= e^-{k}")
            }
        }
    }
}

impl fmt::Display for LllCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LllCondition::Classic => write!(f, "classic"),
            LllCondition::Shatter(s) => write!(f, "shatter({s})"),
            LllCondition::Separation(s) => write!(f, "separation({s})"),
            LllCondition::Polynomial => write!(f, "polynomial"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    HoldsStrictly,
    /// Equality; only possible when the right-hand side is rational.
    Holds,
    Fails,
}

impl Verdict {
    pub fn holds(self) -> bool {
        self != Verdict::Fails
    }

    fn from_ordering(o: Ordering) -> Self {
        match o {
            Ordering::Less => Verdict::HoldsStrictly,
            Ordering::Equal => Verdict::Holds,
            Ordering::Greater => Verdict::Fails,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionReport {
    pub condition: LllCondition,
    pub inequality: String,
    pub p: String,
    pub d: usize,
    pub lhs: String,
    pub lhs_approx: f64,
    pub rhs_approx: f64,
    /// `lhs / rhs` as a float; below 1 means the condition holds.
    pub ratio_approx: f64,
    pub verdict: Verdict,
    /// Precision that settled the comparison (0 when exact).
    pub bits: u32,
}

/// Left-hand side `p(d+1)^k`.
pub fn condition_lhs(p: &Rational, d: usize, cond: LllCondition) -> Rational {
    p * pow(&int(d as u64 + 1), cond.exponent())
}

/// Decides `cond` for given parameters with precision escalating up to `cap`.
pub fn check_params(p: &Rational, d: usize, cond: LllCondition, cap: u32) -> Result<ConditionReport> {
    let lhs = condition_lhs(p, d, cond);
    let (ordering, bits, rhs_approx) = match cond {
        LllCondition::Polynomial => {
            let rhs = Rational::new(1.into(), num_bigint::BigInt::from(1u64 << 15));
            (lhs.cmp(&rhs), 0, 2f64.powi(-15))
        }
        other => {
            let k = other.exponent() as i64;
            let c = cmp_exp(&lhs, -k, cap)?;
            (c.ordering, if k == 0 { 0 } else { c.bits }, exact::exp_f64(-k))
        }
    };
    let lhs_approx = exact::to_f64(&lhs);
    Ok(ConditionReport {
        condition: cond,
        inequality: cond.inequality(),
        p: rational_string(p),
        d,
        lhs: rational_string(&lhs),
        lhs_approx,
        rhs_approx,
        ratio_approx: lhs_approx / rhs_approx,
        verdict: Verdict::from_ordering(ordering),
        bits,
    })
}

pub fn check_condition(csp: &Csp, cond: LllCondition, cap: u32) -> Result<ConditionReport> {
    check_params(&csp.p_param(), csp.d_param(), cond, cap)
}
