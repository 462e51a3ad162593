//! Recovery of boundary lengths from a spectrum by repeated peeling.
//!
//! Each round estimates the smallest generator `L` as the tail limsup of the
//! gaps, normalizes so that `L = 1`, confirms that every large integer `j` has
//! two elements within the proximity threshold, removes the two closest ones
//! (`G₁(j)`, `G₂(j)`), and repeats on what is left.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::multiset::{tail_max_gap, GeneratorSet, SortedSpectrum};

/// Added to `3·(peels + 1)` by the default stopping rule.
pub const MIN_REMAINDER_CONSTANT: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeelParams {
    /// Distance (in units of the current generator) within which an element
    /// counts as near an integer.
    pub proximity_threshold: f64,
    pub tail_fraction: f64,
    /// Leading elements ignored by the limsup estimate and the tail checks.
    pub skip_prefix: usize,
    /// Fraction of the top of the data excluded from peeling.
    pub edge_margin: f64,
    /// Stop when at most this many elements remain; `None` uses
    /// `3·(peels + 1) + MIN_REMAINDER_CONSTANT`.
    pub min_remainder: Option<usize>,
    pub max_components: usize,
    /// A peel must confirm at least this many consecutive integers.
    pub min_confirmed: usize,
}

impl Default for PeelParams {
    fn default() -> Self {
        Self {
            proximity_threshold: 0.1,
            tail_fraction: 0.5,
            skip_prefix: 8,
            edge_margin: 0.1,
            min_remainder: None,
            max_components: 16,
            min_confirmed: 8,
        }
    }
}

impl PeelParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.proximity_threshold > 0.0 && self.proximity_threshold < 0.5) {
            return Err(invalid(format!(
                "proximity threshold must lie in (0, 1/2), got {}",
                self.proximity_threshold
            )));
        }
        if !(self.tail_fraction > 0.0 && self.tail_fraction <= 1.0) {
            return Err(invalid(format!(
                "tail fraction must lie in (0, 1], got {}",
                self.tail_fraction
            )));
        }
        if !(self.edge_margin > 0.0 && self.edge_margin < 1.0) {
            return Err(invalid(format!(
                "edge margin must lie in (0, 1), got {}",
                self.edge_margin
            )));
        }
        if self.max_components == 0 {
            return Err(invalid("max_components must be positive"));
        }
        Ok(())
    }

    pub fn min_remainder_after(&self, peels: usize) -> usize {
        self.min_remainder.unwrap_or(3 * (peels + 1) + MIN_REMAINDER_CONSTANT)
    }
}

/// One removal round.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeelStep {
    /// Raw tail-gap estimate of the generator.
    pub l_estimate: f64,
    /// Scale actually used for normalization.
    pub l_used: f64,
    /// Least-squares generator from the removed pairs.
    pub generator: f64,
    pub n0: usize,
    /// Largest integer considered, `⌊(1 - edge_margin)·max / L⌋`.
    pub j_max: usize,
    /// `(j, G₁(j), G₂(j))` in the input's units.
    pub removed_pairs: Vec<(usize, f64, f64)>,
    /// Elements dropped because they lie in the edge margin.
    pub discarded_above: usize,
    pub remainder_size: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryProfile {
    pub k: usize,
    /// Descending.
    pub lengths: Vec<f64>,
}

impl BoundaryProfile {
    pub fn new(mut lengths: Vec<f64>) -> Result<Self> {
        if lengths.is_empty() {
            return Err(invalid("a boundary profile needs at least one component"));
        }
        if let Some(l) = lengths.iter().find(|l| !(l.is_finite() && **l > 0.0)) {
            return Err(invalid(format!("boundary lengths must be positive, got {l}")));
        }
        lengths.sort_unstable_by(|a, b| b.total_cmp(a));
        Ok(Self {
            k: lengths.len(),
            lengths,
        })
    }

    pub fn from_generators(generators: &GeneratorSet) -> Self {
        Self {
            k: generators.len(),
            lengths: generators.lengths(),
        }
    }

    pub fn total_length(&self) -> f64 {
        self.lengths.iter().sum()
    }

    /// Max relative error between matched lengths; `None` when the counts
    /// differ.
    pub fn max_relative_error(&self, truth: &BoundaryProfile) -> Option<f64> {
        if self.k != truth.k {
            return None;
        }
        Some(
            self.lengths
                .iter()
                .zip(&truth.lengths)
                .map(|(a, b)| (a - b).abs() / b.abs())
                .fold(0.0, f64::max),
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecoveryReport {
    pub steps: Vec<PeelStep>,
    pub generators: GeneratorSet,
    pub profile: BoundaryProfile,
    pub residual_size: usize,
}

fn tail_after_prefix(spectrum: &SortedSpectrum, skip: usize) -> SortedSpectrum {
    SortedSpectrum::from_sorted_unchecked(spectrum.values()[skip.min(spectrum.len())..].to_vec())
}

/// Max gap over the tail window after dropping the first `skip_prefix`
/// entries; the finite-data surrogate for `limsup (A_{j+1} - A_j)`.
pub fn estimate_min_generator(spectrum: &SortedSpectrum, params: &PeelParams) -> Result<f64> {
    params.validate()?;
    let rest = tail_after_prefix(spectrum, params.skip_prefix);
    let required = params.skip_prefix + (2.0 / params.tail_fraction).ceil() as usize;
    match tail_max_gap(&rest, params.tail_fraction) {
        Err(Error::InsufficientData { .. }) => Err(Error::InsufficientData {
            required,
            available: spectrum.len(),
        }),
        other => other,
    }
}

/// Largest boundary length, `2π / limsup gap`.
pub fn max_boundary_length(spectrum: &SortedSpectrum, params: &PeelParams) -> Result<f64> {
    let l = estimate_min_generator(spectrum, params)?;
    if l <= 0.0 {
        return Err(Error::NoProgressionStructure("tail gaps are all zero".into()));
    }
    Ok(TAU / l)
}

/// Indices of the two elements closest to `j·scale`, both within
/// `threshold·scale`; ties go to the larger value.
fn nearest_pair(values: &[f64], scale: f64, j: usize, threshold: f64) -> Option<(usize, usize)> {
    let jf = j as f64;
    let lo = values.partition_point(|v| *v < (jf - threshold) * scale);
    let hi = values.partition_point(|v| *v <= (jf + threshold) * scale);
    let mut best: [Option<(f64, usize)>; 2] = [None, None];
    // scanning from the top means an equal distance never displaces the
    // larger element already held
    for i in (lo..hi).rev() {
        let d = (values[i] / scale - jf).abs();
        if d >= threshold {
            continue;
        }
        match best {
            [None, _] => best[0] = Some((d, i)),
            [Some((d0, _)), _] if d < d0 => {
                best[1] = best[0];
                best[0] = Some((d, i));
            }
            [Some(_), None] => best[1] = Some((d, i)),
            [Some(_), Some((d1, _))] if d < d1 => best[1] = Some((d, i)),
            _ => {}
        }
    }
    match best {
        [Some((_, a)), Some((_, b))] => Some((a, b)),
        _ => None,
    }
}

struct Confirmation {
    n0: usize,
    pairs: Vec<(usize, usize, usize)>,
}

/// Finds `N₀` over `1..=j_max` and the nearest pairs above it.
fn confirm(values: &[f64], scale: f64, j_max: usize, threshold: f64) -> Confirmation {
    let found: Vec<Option<(usize, usize)>> = (1..=j_max).map(|j| nearest_pair(values, scale, j, threshold)).collect();
    let n0 = found.iter().rposition(Option::is_none).map_or(0, |i| i + 1);
    let pairs = found[n0..]
        .iter()
        .enumerate()
        .map(|(offset, p)| {
            let (a, b) = p.expect("every j above N0 has a pair");
            (n0 + 1 + offset, a, b)
        })
        .collect();
    Confirmation { n0, pairs }
}

fn fit_generator(values: &[f64], pairs: &[(usize, usize, usize)]) -> Option<f64> {
    let (mut num, mut den) = (0.0, 0.0);
    for &(j, a, b) in pairs {
        let jf = j as f64;
        num += jf * (values[a] + values[b]);
        den += 2.0 * jf * jf;
    }
    (den > 0.0).then(|| num / den)
}

fn peel_range(spectrum: &SortedSpectrum, scale: f64, params: &PeelParams) -> usize {
    let top = spectrum.max().unwrap_or(0.0);
    ((1.0 - params.edge_margin) * top / scale).floor() as usize
}

/// Improves a generator estimate by fitting `G(j) ≈ α·j` over windows of
/// confirmed integers that double in length.
pub fn refine_generator(spectrum: &SortedSpectrum, estimate: f64, params: &PeelParams) -> Result<f64> {
    params.validate()?;
    if !(estimate > 0.0 && estimate.is_finite()) {
        return Err(invalid(format!("generator estimate must be positive, got {estimate}")));
    }
    let values = spectrum.values();
    let j_max = peel_range(spectrum, estimate, params);
    let mut scale = estimate;
    let mut hi = j_max.min(16);
    while hi >= 1 {
        let c = confirm(values, scale, hi, params.proximity_threshold);
        if c.n0 > hi / 2 {
            break;
        }
        if let Some(fit) = fit_generator(values, &c.pairs) {
            scale = fit;
        }
        if hi == j_max {
            break;
        }
        hi = (2 * hi).min(j_max);
    }
    Ok(scale)
}

/// Removes the progression of generator `l` from `spectrum`.
pub fn peel_once(spectrum: &SortedSpectrum, l: f64, params: &PeelParams) -> Result<(SortedSpectrum, PeelStep)> {
    params.validate()?;
    if !(l > 0.0 && l.is_finite()) {
        return Err(invalid(format!("generator must be positive, got {l}")));
    }
    if spectrum.is_empty() {
        return Err(invalid("cannot peel an empty spectrum"));
    }
    let values = spectrum.values();
    let j_max = peel_range(spectrum, l, params);
    if j_max == 0 {
        return Err(Error::GeneratorNotConfirmed(format!(
            "no integer multiple of {l} below the edge margin"
        )));
    }
    let c = confirm(values, l, j_max, params.proximity_threshold);
    let confirmed = j_max - c.n0;
    if confirmed < params.min_confirmed || c.n0 > j_max / 2 {
        return Err(Error::GeneratorNotConfirmed(format!(
            "{l} confirmed on {confirmed} of {j_max} integers (N0 = {})",
            c.n0
        )));
    }

    let mut removed = vec![false; values.len()];
    let mut removed_pairs = Vec::with_capacity(c.pairs.len());
    for &(j, a, b) in &c.pairs {
        removed[a] = true;
        removed[b] = true;
        removed_pairs.push((j, values[a], values[b]));
    }
    let ceiling = (j_max as f64 + 0.5) * l;
    let kept_end = values.partition_point(|v| *v < ceiling);
    let remainder: Vec<f64> = values[..kept_end]
        .iter()
        .zip(&removed)
        .filter(|(_, r)| !**r)
        .map(|(v, _)| *v)
        .collect();
    let generator = fit_generator(values, &c.pairs).unwrap_or(l);
    let step = PeelStep {
        l_estimate: l,
        l_used: l,
        generator,
        n0: c.n0,
        j_max,
        removed_pairs,
        discarded_above: values.len() - kept_end,
        remainder_size: remainder.len(),
    };
    Ok((SortedSpectrum::from_sorted_unchecked(remainder), step))
}

/// Full peeling loop: estimate, refine, peel, repeat.
pub fn recover(spectrum: &SortedSpectrum, params: &PeelParams) -> Result<RecoveryReport> {
    params.validate()?;
    let mut current = spectrum.clone();
    let mut steps: Vec<PeelStep> = Vec::new();

    while steps.len() < params.max_components {
        let first = steps.is_empty();
        let estimate = match estimate_min_generator(&current, params) {
            Ok(l) if l > 0.0 => l,
            Ok(_) if first => return Err(Error::NoProgressionStructure("tail gaps are all zero".into())),
            Err(e) if first => return Err(Error::NoProgressionStructure(e.to_string())),
            _ => break,
        };
        let scale = refine_generator(&current, estimate, params)?;
        let (remainder, mut step) = match peel_once(&current, scale, params) {
            Ok(r) => r,
            Err(e) if first => return Err(Error::NoProgressionStructure(e.to_string())),
            Err(_) => break,
        };
        step.l_estimate = estimate;
        steps.push(step);
        current = remainder;
        if current.len() <= params.min_remainder_after(steps.len()) {
            break;
        }
    }

    let generators = GeneratorSet::new(steps.iter().map(|s| s.generator).collect())?;
    Ok(RecoveryReport {
        profile: BoundaryProfile::from_generators(&generators),
        generators,
        residual_size: current.len(),
        steps,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiplicityReport {
    pub max_tail_cluster: usize,
    pub bound: usize,
    pub within_bound: bool,
}

/// Largest cluster of consecutive values (successive differences at most
/// `cluster_tol`) beyond `skip_prefix`, against the bound `2k`.
pub fn multiplicity_tail_check(
    spectrum: &SortedSpectrum,
    k: usize,
    cluster_tol: f64,
    skip_prefix: usize,
) -> MultiplicityReport {
    let tail = &spectrum.values()[skip_prefix.min(spectrum.len())..];
    let mut max_cluster = usize::from(!tail.is_empty());
    let mut run = 1;
    for w in tail.windows(2) {
        if w[1] - w[0] <= cluster_tol {
            run += 1;
        } else {
            run = 1;
        }
        max_cluster = max_cluster.max(run);
    }
    MultiplicityReport {
        max_tail_cluster: max_cluster,
        bound: 2 * k,
        within_bound: max_cluster <= 2 * k,
    }
}
