//! Sorted multisets of non-negative reals and the merged progressions `S(R)`.
//!
//! A multiset is stored as its nondecreasing sequence of elements; equal
//! values are kept as distinct entries so that everything downstream can be
//! index driven.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Nondecreasing finite sequence of non-negative reals.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct SortedSpectrum {
    values: Vec<f64>,
    zero_count: usize,
}

impl SortedSpectrum {
    /// Wraps values that are already sorted.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        for (i, v) in values.iter().enumerate() {
            if !v.is_finite() || *v < 0.0 {
                return Err(Error::InvalidSpectrum(format!(
                    "entry {i} = {v} is not a finite non-negative real"
                )));
            }
        }
        if let Some(i) = values.windows(2).position(|w| w[0] > w[1]) {
            return Err(Error::InvalidSpectrum(format!(
                "entries {i} and {} are out of order ({} > {})",
                i + 1,
                values[i],
                values[i + 1]
            )));
        }
        Ok(Self::from_sorted_unchecked(values))
    }

    /// Sorts the values first.
    pub fn from_unsorted(mut values: Vec<f64>) -> Result<Self> {
        if let Some(v) = values.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(Error::InvalidSpectrum(format!("{v} is not a finite non-negative real")));
        }
        values.sort_unstable_by(f64::total_cmp);
        Ok(Self::from_sorted_unchecked(values))
    }

    pub(crate) fn from_sorted_unchecked(values: Vec<f64>) -> Self {
        debug_assert!(values.windows(2).all(|w| w[0] <= w[1]));
        let zero_count = values.iter().take_while(|v| **v == 0.0).count();
        Self { values, zero_count }
    }

    pub fn empty() -> Self {
        Self {
            values: Vec::new(),
            zero_count: 0,
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn zero_count(&self) -> usize {
        self.zero_count
    }

    pub fn max(&self) -> Option<f64> {
        self.values.last().copied()
    }

    /// Multiplies every element by `factor > 0`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if !(factor > 0.0 && factor.is_finite()) {
            return Err(invalid(format!("scale factor must be positive, got {factor}")));
        }
        Ok(Self::from_sorted_unchecked(
            self.values.iter().map(|v| v * factor).collect(),
        ))
    }

    /// Elements `<= cutoff`.
    pub fn truncated_at(&self, cutoff: f64) -> Self {
        let end = self.values.partition_point(|v| *v <= cutoff);
        Self::from_sorted_unchecked(self.values[..end].to_vec())
    }

    /// The first `count` elements.
    pub fn first(&self, count: usize) -> Self {
        Self::from_sorted_unchecked(self.values[..count.min(self.len())].to_vec())
    }

    /// Number of elements strictly below `x`.
    pub fn count_below(&self, x: f64) -> usize {
        self.values.partition_point(|v| *v < x)
    }

    /// Sorted merge of two spectra.
    pub fn merged(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        while i < self.len() && j < other.len() {
            if other.values[j] < self.values[i] {
                out.push(other.values[j]);
                j += 1;
            } else {
                out.push(self.values[i]);
                i += 1;
            }
        }
        out.extend_from_slice(&self.values[i..]);
        out.extend_from_slice(&other.values[j..]);
        Self::from_sorted_unchecked(out)
    }
}

impl TryFrom<Vec<f64>> for SortedSpectrum {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        Self::new(values)
    }
}

impl From<SortedSpectrum> for Vec<f64> {
    fn from(s: SortedSpectrum) -> Self {
        s.values
    }
}

/// Finite multiset of positive reals, stored ascending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct GeneratorSet {
    alphas: Vec<f64>,
}

impl GeneratorSet {
    pub fn new(mut alphas: Vec<f64>) -> Result<Self> {
        if alphas.is_empty() {
            return Err(Error::NoGenerators);
        }
        if let Some(a) = alphas.iter().find(|a| !(a.is_finite() && **a > 0.0)) {
            return Err(invalid(format!("generators must be positive and finite, got {a}")));
        }
        alphas.sort_unstable_by(f64::total_cmp);
        Ok(Self { alphas })
    }

    /// Generators `2π/ℓ` for boundary lengths `ℓ`.
    pub fn from_lengths(lengths: &[f64]) -> Result<Self> {
        if let Some(l) = lengths.iter().find(|l| !(l.is_finite() && **l > 0.0)) {
            return Err(invalid(format!("lengths must be positive and finite, got {l}")));
        }
        Self::new(lengths.iter().map(|l| std::f64::consts::TAU / l).collect())
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn len(&self) -> usize {
        self.alphas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alphas.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.alphas[0]
    }

    pub fn max(&self) -> f64 {
        self.alphas[self.alphas.len() - 1]
    }

    /// Boundary lengths `2π/α`, sorted descending.
    pub fn lengths(&self) -> Vec<f64> {
        self.alphas.iter().map(|a| std::f64::consts::TAU / a).collect()
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::new(self.alphas.iter().map(|a| a * factor).collect())
    }

    pub fn with(&self, alpha: f64) -> Result<Self> {
        let mut alphas = self.alphas.clone();
        alphas.push(alpha);
        Self::new(alphas)
    }
}

impl TryFrom<Vec<f64>> for GeneratorSet {
    type Error = Error;

    fn try_from(alphas: Vec<f64>) -> Result<Self> {
        Self::new(alphas)
    }
}

impl From<GeneratorSet> for Vec<f64> {
    fn from(g: GeneratorSet) -> Self {
        g.alphas
    }
}

/// All elements of `S(R)` that are `<= cutoff`: `|R|` zeros and two copies of
/// `nα` for every generator `α` and every `n >= 1` with `nα <= cutoff`.
pub fn merge_progressions(generators: &GeneratorSet, cutoff: f64) -> Result<SortedSpectrum> {
    if !(cutoff > 0.0 && cutoff.is_finite()) {
        return Err(invalid(format!("cutoff must be positive and finite, got {cutoff}")));
    }
    let streams: Vec<Vec<f64>> = generators
        .alphas()
        .iter()
        .map(|&alpha| {
            let mut stream = Vec::with_capacity(2 * (cutoff / alpha) as usize + 2);
            let mut n = 1u64;
            loop {
                let v = n as f64 * alpha;
                if v > cutoff {
                    break;
                }
                stream.extend([v, v]);
                n += 1;
            }
            stream
        })
        .collect();

    let mut merged = SortedSpectrum::from_sorted_unchecked(vec![0.0; generators.len()]);
    for stream in streams {
        merged = merged.merged(&SortedSpectrum::from_sorted_unchecked(stream));
    }
    Ok(merged)
}

/// The first `count` elements of `S(R)`.
pub fn merge_progressions_count(generators: &GeneratorSet, count: usize) -> Result<SortedSpectrum> {
    // the densest progression alone supplies 2 elements per step
    let cutoff = generators.min() * (count.div_ceil(2) as f64).max(1.0);
    Ok(merge_progressions(generators, cutoff)?.first(count))
}

/// Consecutive differences.
pub fn gaps(spectrum: &SortedSpectrum) -> Result<Vec<f64>> {
    if spectrum.len() < 2 {
        return Err(Error::InsufficientData {
            required: 2,
            available: spectrum.len(),
        });
    }
    Ok(spectrum.values().windows(2).map(|w| w[1] - w[0]).collect())
}

/// Max gap over the last `⌈tail_fraction·|S|⌉` elements.
pub fn tail_max_gap(spectrum: &SortedSpectrum, tail_fraction: f64) -> Result<f64> {
    if !(tail_fraction > 0.0 && tail_fraction <= 1.0) {
        return Err(invalid(format!(
            "tail_fraction must lie in (0, 1], got {tail_fraction}"
        )));
    }
    let window = ((tail_fraction * spectrum.len() as f64).ceil() as usize).min(spectrum.len());
    if window < 2 {
        let required = (2.0 / tail_fraction).ceil() as usize;
        return Err(Error::InsufficientData {
            required,
            available: spectrum.len(),
        });
    }
    let tail = &spectrum.values()[spectrum.len() - window..];
    Ok(tail.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max))
}

/// Index matching between two equally long spectra, with exceedance counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CloseMapReport {
    pub matched_pairs: Vec<(f64, f64)>,
    /// Ascending.
    pub probe_tolerances: Vec<f64>,
    /// `exceed_counts[i]` = number of pairs with `|x - y| >= probe_tolerances[i]`.
    pub exceed_counts: Vec<usize>,
    pub last_exceed_index: Vec<Option<usize>>,
}

impl CloseMapReport {
    /// Count for a probed tolerance; `None` if `eps` was not probed.
    pub fn exceed_count(&self, eps: f64) -> Option<usize> {
        self.probe_tolerances
            .iter()
            .position(|t| *t == eps)
            .map(|i| self.exceed_counts[i])
    }

    pub fn max_deviation(&self) -> f64 {
        self.matched_pairs
            .iter()
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max)
    }
}

pub fn closeness_report(a: &SortedSpectrum, b: &SortedSpectrum, probe_tolerances: &[f64]) -> Result<CloseMapReport> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    if let Some(t) = probe_tolerances.iter().find(|t| t.is_nan() || **t <= 0.0) {
        return Err(invalid(format!("probe tolerances must be positive, got {t}")));
    }
    let mut tolerances = probe_tolerances.to_vec();
    tolerances.sort_unstable_by(f64::total_cmp);

    let matched_pairs: Vec<(f64, f64)> = a.values().iter().copied().zip(b.values().iter().copied()).collect();
    let mut exceed_counts = Vec::with_capacity(tolerances.len());
    let mut last_exceed_index = Vec::with_capacity(tolerances.len());
    for &eps in &tolerances {
        let over = || {
            matched_pairs
                .iter()
                .enumerate()
                .filter(|(_, (x, y))| (x - y).abs() >= eps)
        };
        exceed_counts.push(over().count());
        last_exceed_index.push(over().next_back().map(|(i, _)| i));
    }
    Ok(CloseMapReport {
        matched_pairs,
        probe_tolerances: tolerances,
        exceed_counts,
        last_exceed_index,
    })
}
