//! Simultaneous Diophantine approximation witnesses for merged progressions.
//!
//! For `R` normalized so that `min(R) = 1`, an integer `q` is a witness when
//! `qX` lies within `α_n·q^(-1/m)` of a multiple of every irrational generator
//! `α_n` (`X` a common multiple of the rational numerators, `m` the number of
//! irrational generators). `S(R)` then has no element strictly inside
//! `[qX - 1 + α q^(-1/m), qX - α q^(-1/m)]`, `α` the largest irrational
//! generator, which forces gaps of length close to 1.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::multiset::{merge_progressions, GeneratorSet, SortedSpectrum};

/// Denominator cap for rational classification.
pub const MAX_DENOMINATOR: u64 = 50;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Rationality {
    Rational { numerator: u64, denominator: u64 },
    Irrational,
}

/// Continued-fraction convergents `(p, q)` of `x >= 0` with `q <= max_den`.
pub fn convergents(x: f64, max_den: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let (mut h_prev, mut h) = (1u128, x.floor() as u128);
    let (mut k_prev, mut k) = (0u128, 1u128);
    let mut rest = x - x.floor();
    out.push((h as u64, k as u64));
    while rest > 1e-15 {
        let inv = 1.0 / rest;
        let a = inv.floor();
        rest = inv - a;
        let a = a as u128;
        let (h_next, k_next) = (a * h + h_prev, a * k + k_prev);
        if k_next > max_den as u128 || h_next > u64::MAX as u128 {
            break;
        }
        (h_prev, h, k_prev, k) = (h, h_next, k, k_next);
        out.push((h as u64, k as u64));
    }
    out
}

/// Rational if some convergent `p/q` with `q <= MAX_DENOMINATOR` is within
/// `tolerance` (relative, never below a few ulps) of `x`.
pub fn classify(x: f64, tolerance: f64) -> Rationality {
    let tol = tolerance.max(4.0 * f64::EPSILON) * x.abs();
    convergents(x, MAX_DENOMINATOR)
        .into_iter()
        .find(|&(p, q)| (x - p as f64 / q as f64).abs() <= tol)
        .map_or(Rationality::Irrational, |(p, q)| Rationality::Rational {
            numerator: p,
            denominator: q,
        })
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Approximant {
    pub alpha: f64,
    pub p: u64,
    /// `|qX - p·α|`
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirichletWitness {
    pub q: u64,
    pub x: u64,
    pub approximants: Vec<Approximant>,
    /// Number of irrational generators.
    pub m: usize,
}

impl DirichletWitness {
    /// `α·q^(-1/m)` for the largest irrational generator (0 when `m = 0`).
    pub fn radius(&self) -> f64 {
        let alpha = self.largest_irrational().unwrap_or(0.0);
        if self.m == 0 {
            0.0
        } else {
            alpha * (self.q as f64).powf(-1.0 / self.m as f64)
        }
    }

    pub fn largest_irrational(&self) -> Option<f64> {
        self.approximants.iter().map(|a| a.alpha).reduce(f64::max)
    }

    /// Whether every approximant satisfies `residual < α_n·q^(-1/m)`.
    pub fn holds(&self) -> bool {
        let exponent = -1.0 / self.m.max(1) as f64;
        self.approximants
            .iter()
            .all(|a| a.residual < a.alpha * (self.q as f64).powf(exponent))
    }

    pub fn anchor(&self) -> f64 {
        (self.q * self.x) as f64
    }

    /// `(qX - 1 + r, qX - r)` with `r` the radius; may be inverted for small
    /// `q`, in which case it contains nothing.
    pub fn interval(&self) -> (f64, f64) {
        let r = self.radius();
        (self.anchor() - 1.0 + r, self.anchor() - r)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessSearch {
    pub classification: Vec<(f64, Rationality)>,
    pub x: u64,
    pub m: usize,
    /// No irrational generators: every `q` is a witness with no residuals.
    pub degenerate: bool,
    pub witnesses: Vec<DirichletWitness>,
}

fn check_normalized(generators: &GeneratorSet) -> Result<()> {
    if (generators.min() - 1.0).abs() > 1e-12 {
        return Err(invalid(format!(
            "generators must be normalized so that min = 1, got min = {}",
            generators.min()
        )));
    }
    Ok(())
}

/// Exhaustive scan of `q = 1..=q_max`.
pub fn find_witnesses(generators: &GeneratorSet, q_max: u64, rational_tolerance: f64) -> Result<WitnessSearch> {
    check_normalized(generators)?;
    if q_max < 1 {
        return Err(invalid("q_max must be at least 1"));
    }
    let classification: Vec<(f64, Rationality)> = generators
        .alphas()
        .iter()
        .map(|&a| (a, classify(a, rational_tolerance)))
        .collect();
    let mut x = 1u64;
    for (_, c) in &classification {
        if let Rationality::Rational { numerator, .. } = c {
            let g = gcd(x, *numerator);
            x = (x / g)
                .checked_mul(*numerator)
                .ok_or_else(|| invalid("common multiple of rational numerators overflows"))?;
        }
    }
    let irrational: Vec<f64> = classification
        .iter()
        .filter(|(_, c)| *c == Rationality::Irrational)
        .map(|(a, _)| *a)
        .collect();
    let m = irrational.len();
    if q_max.checked_mul(x).is_none_or(|v| v > (1u64 << 52)) {
        return Err(invalid("q_max·X exceeds exact double range"));
    }

    let exponent = -1.0 / m.max(1) as f64;
    let witnesses = (1..=q_max)
        .filter_map(|q| {
            let qx = (q * x) as f64;
            let bound = (q as f64).powf(exponent);
            let approximants = irrational
                .iter()
                .map(|&alpha| {
                    let p = (qx / alpha).round();
                    Approximant {
                        alpha,
                        p: p as u64,
                        residual: (qx - p * alpha).abs(),
                    }
                })
                .collect::<Vec<_>>();
            approximants
                .iter()
                .all(|a| a.residual < a.alpha * bound)
                .then_some(DirichletWitness { q, x, approximants, m })
        })
        .collect();
    Ok(WitnessSearch {
        classification,
        x,
        m,
        degenerate: m == 0,
        witnesses,
    })
}

/// Whether `S(R)` truncated at `cutoff` has no element strictly inside the
/// witness interval.
pub fn verify_empty_interval(generators: &GeneratorSet, witness: &DirichletWitness, cutoff: f64) -> Result<bool> {
    check_normalized(generators)?;
    let spectrum = merge_progressions(generators, cutoff)?;
    verify_empty_interval_in(&spectrum, witness, cutoff)
}

/// [`verify_empty_interval`] against an already merged `S(R)`.
pub fn verify_empty_interval_in(spectrum: &SortedSpectrum, witness: &DirichletWitness, cutoff: f64) -> Result<bool> {
    let (lo, hi) = witness.interval();
    if hi > cutoff {
        return Err(invalid(format!("interval end {hi} lies above the cutoff {cutoff}")));
    }
    if lo >= hi {
        return Ok(true);
    }
    let first_above = spectrum.values().partition_point(|v| *v <= lo);
    Ok(spectrum.values().get(first_above).is_none_or(|v| *v >= hi))
}

/// Length of the gap of `spectrum` that contains the witness interval.
pub fn straddling_gap(spectrum: &SortedSpectrum, witness: &DirichletWitness) -> Option<f64> {
    let (lo, _) = witness.interval();
    let values = spectrum.values();
    let i = values.partition_point(|v| *v <= lo);
    if i == 0 || i == values.len() {
        return None;
    }
    Some(values[i] - values[i - 1])
}
