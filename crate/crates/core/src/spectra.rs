//! Steklov spectra of model surfaces.
//!
//! Exact spectra for disks and disjoint unions, per-mode closed forms for the
//! planar annulus, a Fourier–Galerkin solver for the unit disk with a boundary
//! weight, and synthetic `S(R)` with seeded decaying noise.

use std::f64::consts::{PI, TAU};

use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::multiset::{merge_progressions, merge_progressions_count, GeneratorSet, SortedSpectrum};

/// Fraction of the Galerkin spectrum kept by default; the top of a truncated
/// pencil is polluted by the truncation.
pub const DEFAULT_TRUSTED_FRACTION: f64 = 2.0 / 3.0;

/// Positivity of a weight is checked at this many samples per Galerkin mode.
const POSITIVITY_SAMPLES_PER_MODE: usize = 8;

fn check_positive(name: &str, x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(invalid(format!("{name} must be positive and finite, got {x}")))
    }
}

/// Spectrum of the disk of radius `radius`: `S({1/radius})` up to `cutoff`.
pub fn disk_spectrum(radius: f64, cutoff: f64) -> Result<SortedSpectrum> {
    check_positive("radius", radius)?;
    check_positive("cutoff", cutoff)?;
    merge_progressions(&GeneratorSet::new(vec![1.0 / radius])?, cutoff)
}

/// Spectrum of a disjoint union: the merged multiset of the parts.
pub fn union_spectrum(parts: &[SortedSpectrum]) -> Result<SortedSpectrum> {
    let (first, rest) = parts.split_first().ok_or_else(|| invalid("union of no spectra"))?;
    Ok(rest.iter().fold(first.clone(), |acc, p| acc.merged(p)))
}

/// The two Steklov eigenvalues of mode `n >= 1` on the annulus `a <= r <= b`,
/// ascending. Each has multiplicity two (cosine and sine).
///
/// With `u = P (r/b)^n + Q (a/r)^n` and `t = (a/b)^n`, the boundary conditions
/// `u_r = σu` at `r = b` and `-u_r = σu` at `r = a` give
/// `σ² - σ·n(1/a + 1/b)(1 + t²)/(1 - t²) + n²/(ab) = 0`.
pub fn annulus_mode_eigenvalues(a: f64, b: f64, n: u32) -> Result<(f64, f64)> {
    check_positive("inner radius", a)?;
    check_positive("outer radius", b)?;
    if a >= b {
        return Err(invalid(format!("inner radius {a} must be below outer radius {b}")));
    }
    if n == 0 {
        return Err(invalid("mode 0 has no 2x2 block; use annulus_radial_eigenvalue"));
    }
    let n = n as f64;
    let t2 = (a / b).powf(2.0 * n);
    let sum = n * (1.0 / a + 1.0 / b) * (1.0 + t2) / (1.0 - t2);
    let product = n * n / (a * b);
    let disc = (sum * sum - 4.0 * product).max(0.0);
    let upper = 0.5 * (sum + disc.sqrt());
    Ok((product / upper, upper))
}

/// Non-zero eigenvalue of the radial mode `A + B log r`.
pub fn annulus_radial_eigenvalue(a: f64, b: f64) -> Result<f64> {
    check_positive("inner radius", a)?;
    if a >= b {
        return Err(invalid(format!("inner radius {a} must be below outer radius {b}")));
    }
    Ok((1.0 / a + 1.0 / b) / (b / a).ln())
}

/// Steklov spectrum of the annulus through mode `max_mode`: `2 + 4·max_mode`
/// values with exactly one zero.
pub fn annulus_spectrum(a: f64, b: f64, max_mode: u32) -> Result<SortedSpectrum> {
    if max_mode < 1 {
        return Err(invalid("max_mode must be at least 1"));
    }
    let mut values = Vec::with_capacity(2 + 4 * max_mode as usize);
    values.push(0.0);
    values.push(annulus_radial_eigenvalue(a, b)?);
    for n in 1..=max_mode {
        let (lo, hi) = annulus_mode_eigenvalues(a, b, n)?;
        values.extend([lo, lo, hi, hi]);
    }
    SortedSpectrum::from_unsorted(values)
}

/// Every annulus eigenvalue below this bound comes from a mode `<= max_mode`:
/// the lower root of mode `max_mode + 1`.
pub fn annulus_complete_below(a: f64, b: f64, max_mode: u32) -> Result<f64> {
    Ok(annulus_mode_eigenvalues(a, b, max_mode + 1)?.0)
}

/// Boundary weight `δ(θ) = a0 + Σ (a_n cos nθ + b_n sin nθ)` on the unit circle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightSpec {
    pub a0: f64,
    pub cos: Vec<f64>,
    pub sin: Vec<f64>,
}

impl WeightSpec {
    pub fn constant(c: f64) -> Self {
        Self {
            a0: c,
            cos: Vec::new(),
            sin: Vec::new(),
        }
    }

    /// Coefficient list `[a0, a1, b1, a2, b2, ...]`.
    pub fn from_interleaved(coefficients: &[f64]) -> Result<Self> {
        let (&a0, rest) = coefficients
            .split_first()
            .ok_or_else(|| invalid("empty weight coefficient list"))?;
        let mut cos = Vec::new();
        let mut sin = Vec::new();
        for pair in rest.chunks(2) {
            cos.push(pair[0]);
            sin.push(pair.get(1).copied().unwrap_or(0.0));
        }
        Ok(Self { a0, cos, sin })
    }

    pub fn degree(&self) -> usize {
        self.cos.len().max(self.sin.len())
    }

    pub fn eval(&self, theta: f64) -> f64 {
        let mut v = self.a0;
        for n in 1..=self.degree() {
            let nt = n as f64 * theta;
            v += self.cos_coefficient(n) * nt.cos() + self.sin_coefficient(n) * nt.sin();
        }
        v
    }

    fn cos_coefficient(&self, n: usize) -> f64 {
        if n == 0 {
            self.a0
        } else {
            self.cos.get(n - 1).copied().unwrap_or(0.0)
        }
    }

    fn sin_coefficient(&self, n: usize) -> f64 {
        if n == 0 {
            0.0
        } else {
            self.sin.get(n - 1).copied().unwrap_or(0.0)
        }
    }

    /// Length of the boundary in the weighted metric, `∫ δ dθ`.
    pub fn boundary_length(&self) -> f64 {
        TAU * self.a0
    }

    /// The weight `θ ↦ δ(θ + φ)`.
    pub fn rotated(&self, phi: f64) -> Self {
        let mut cos = Vec::with_capacity(self.degree());
        let mut sin = Vec::with_capacity(self.degree());
        for n in 1..=self.degree() {
            let (s, c) = (n as f64 * phi).sin_cos();
            let (an, bn) = (self.cos_coefficient(n), self.sin_coefficient(n));
            cos.push(an * c + bn * s);
            sin.push(bn * c - an * s);
        }
        Self { a0: self.a0, cos, sin }
    }

    /// Minimum over `samples` equispaced points.
    pub fn sampled_min(&self, samples: usize) -> f64 {
        (0..samples.max(1))
            .map(|i| self.eval(TAU * i as f64 / samples.max(1) as f64))
            .fold(f64::INFINITY, f64::min)
    }

    fn check(&self, modes: usize) -> Result<()> {
        let all = std::iter::once(&self.a0).chain(&self.cos).chain(&self.sin);
        if all.clone().any(|c| !c.is_finite()) {
            return Err(invalid("weight coefficients must be finite"));
        }
        let samples = (POSITIVITY_SAMPLES_PER_MODE * modes.max(self.degree())).max(16);
        let min = self.sampled_min(samples);
        if min > 0.0 {
            Ok(())
        } else {
            Err(Error::NonPositiveWeight { min })
        }
    }

    /// `(1/π) ∫ δ cos kθ` for any integer `k` (so `2a0` at `k = 0`).
    fn cos_moment(&self, k: i64) -> f64 {
        let k = k.unsigned_abs() as usize;
        if k == 0 {
            2.0 * self.a0
        } else {
            self.cos_coefficient(k)
        }
    }

    /// `(1/π) ∫ δ sin kθ` for any integer `k`.
    fn sin_moment(&self, k: i64) -> f64 {
        let s = self.sin_coefficient(k.unsigned_abs() as usize);
        if k < 0 {
            -s
        } else {
            s
        }
    }
}

/// Basis function of the real orthonormal Fourier basis on the circle:
/// index 0 is the constant, `2n - 1` is `cos nθ`, `2n` is `sin nθ`.
#[derive(Clone, Copy)]
enum Basis {
    Constant,
    Cos(i64),
    Sin(i64),
}

impl Basis {
    fn at(index: usize) -> Self {
        match index {
            0 => Basis::Constant,
            i if i % 2 == 1 => Basis::Cos(i.div_ceil(2) as i64),
            i => Basis::Sin((i / 2) as i64),
        }
    }

    fn frequency(self) -> f64 {
        match self {
            Basis::Constant => 0.0,
            Basis::Cos(n) | Basis::Sin(n) => n as f64,
        }
    }
}

/// Gram matrix of multiplication by `δ` in the orthonormal Fourier basis.
fn weight_matrix(w: &WeightSpec, modes: usize) -> DMatrix<f64> {
    let dim = 2 * modes + 1;
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    DMatrix::from_fn(dim, dim, |i, j| match (Basis::at(i), Basis::at(j)) {
        (Basis::Constant, Basis::Constant) => w.a0,
        (Basis::Constant, Basis::Cos(n)) | (Basis::Cos(n), Basis::Constant) => w.cos_moment(n) * inv_sqrt2,
        (Basis::Constant, Basis::Sin(n)) | (Basis::Sin(n), Basis::Constant) => w.sin_moment(n) * inv_sqrt2,
        (Basis::Cos(m), Basis::Cos(n)) => 0.5 * (w.cos_moment(m - n) + w.cos_moment(m + n)),
        (Basis::Sin(m), Basis::Sin(n)) => 0.5 * (w.cos_moment(m - n) - w.cos_moment(m + n)),
        (Basis::Cos(m), Basis::Sin(n)) | (Basis::Sin(n), Basis::Cos(m)) => {
            0.5 * (w.sin_moment(n + m) + w.sin_moment(n - m))
        }
    })
}

/// Full Galerkin spectrum of `D f = σ δ f` on the unit disk, `D` the
/// Dirichlet-to-Neumann map (symbol `|n|`), over Fourier modes `|n| <= modes`.
///
/// Returns `2·modes + 1` values. The upper part is affected by truncation;
/// see [`weighted_disk_trusted`].
pub fn weighted_disk_spectrum(w: &WeightSpec, modes: usize) -> Result<SortedSpectrum> {
    if modes < 1 {
        return Err(invalid("modes must be at least 1"));
    }
    w.check(modes)?;
    let dim = 2 * modes + 1;
    let rho = weight_matrix(w, modes);
    let freq: Vec<f64> = (0..dim).map(|i| Basis::at(i).frequency()).collect();

    let diagonal = (0..dim).all(|i| (0..dim).all(|j| i == j || rho[(i, j)] == 0.0));
    if diagonal {
        let values = (0..dim).map(|i| freq[i] / rho[(i, i)]).collect();
        return SortedSpectrum::from_unsorted(values);
    }

    // ρ = L Lᵀ, D = H², so the pencil is similar to (L⁻¹H)(L⁻¹H)ᵀ
    let chol = rho
        .cholesky()
        .ok_or_else(|| Error::LinearAlgebra("weight Gram matrix is not positive definite".into()))?;
    let half = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(dim, freq.iter().map(|f| f.sqrt())));
    let m = chol
        .l()
        .solve_lower_triangular(&half)
        .ok_or_else(|| Error::LinearAlgebra("singular Cholesky factor".into()))?;
    let c = &m * m.transpose();
    let eig = SymmetricEigen::new(c);
    let scale = eig.eigenvalues.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let values = eig
        .eigenvalues
        .iter()
        .map(|&v| if v.abs() <= 1e-12 * scale { 0.0 } else { v })
        .collect::<Vec<_>>();
    if let Some(v) = values.iter().find(|v| **v < 0.0) {
        return Err(Error::LinearAlgebra(format!("negative pencil eigenvalue {v}")));
    }
    SortedSpectrum::from_unsorted(values)
}

/// The lower `trusted_fraction` of [`weighted_disk_spectrum`].
pub fn weighted_disk_trusted(w: &WeightSpec, modes: usize, trusted_fraction: f64) -> Result<SortedSpectrum> {
    if !(trusted_fraction > 0.0 && trusted_fraction <= 1.0) {
        return Err(invalid(format!(
            "trusted fraction must lie in (0, 1], got {trusted_fraction}"
        )));
    }
    let full = weighted_disk_spectrum(w, modes)?;
    let keep = ((trusted_fraction * full.len() as f64).floor() as usize).max(1);
    Ok(full.first(keep))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NoiseKind {
    None,
    /// `amplitude · (1 + j)^(-exponent)`
    PowerDecay {
        amplitude: f64,
        exponent: f64,
    },
    /// `amplitude · exp(-rate · j)`
    ExpDecay {
        amplitude: f64,
        rate: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub kind: NoiseKind,
    pub seed: u64,
}

impl NoiseModel {
    pub const NONE: NoiseModel = NoiseModel {
        kind: NoiseKind::None,
        seed: 0,
    };

    pub fn exp_decay(amplitude: f64, rate: f64, seed: u64) -> Self {
        Self {
            kind: NoiseKind::ExpDecay { amplitude, rate },
            seed,
        }
    }

    pub fn power_decay(amplitude: f64, exponent: f64, seed: u64) -> Self {
        Self {
            kind: NoiseKind::PowerDecay { amplitude, exponent },
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self.kind {
            NoiseKind::None => Ok(()),
            NoiseKind::PowerDecay { amplitude, exponent } => {
                if amplitude >= 0.0 && amplitude.is_finite() && exponent > 0.0 && exponent.is_finite() {
                    Ok(())
                } else {
                    Err(invalid(format!(
                        "power noise needs c >= 0 and p > 0, got c={amplitude}, p={exponent}"
                    )))
                }
            }
            NoiseKind::ExpDecay { amplitude, rate } => {
                if amplitude >= 0.0 && amplitude.is_finite() && rate > 0.0 && rate.is_finite() {
                    Ok(())
                } else {
                    Err(invalid(format!(
                        "exponential noise needs c >= 0 and β > 0, got c={amplitude}, β={rate}"
                    )))
                }
            }
        }
    }

    /// Bound on the perturbation of entry `j`.
    pub fn envelope(&self, j: usize) -> f64 {
        match self.kind {
            NoiseKind::None => 0.0,
            NoiseKind::PowerDecay { amplitude, exponent } => amplitude * (1.0 + j as f64).powf(-exponent),
            NoiseKind::ExpDecay { amplitude, rate } => amplitude * (-rate * j as f64).exp(),
        }
    }

    /// Perturbs entry `j` of `spectrum` by at most `envelope(j)` and re-sorts.
    /// Exact zeros are left alone; a perturbation that would go negative is
    /// reflected, which keeps it inside the envelope.
    pub fn apply(&self, spectrum: &SortedSpectrum) -> Result<SortedSpectrum> {
        self.validate()?;
        if matches!(self.kind, NoiseKind::None) {
            return Ok(spectrum.clone());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let values = spectrum
            .values()
            .iter()
            .enumerate()
            .map(|(j, &v)| {
                let u: f64 = rng.random_range(-1.0..=1.0);
                if v == 0.0 {
                    v
                } else {
                    (v + u * self.envelope(j)).abs()
                }
            })
            .collect();
        SortedSpectrum::from_unsorted(values)
    }
}

/// `S(R)` up to `cutoff` with seeded noise applied.
pub fn synthetic_spectrum(generators: &GeneratorSet, noise: &NoiseModel, cutoff: f64) -> Result<SortedSpectrum> {
    noise.apply(&merge_progressions(generators, cutoff)?)
}

/// Counting function against the two-dimensional Weyl law `N(σ) ≈ ℓσ/π`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeylReport {
    pub total_length: f64,
    /// `(σ, N(σ), ℓσ/π)`
    pub probes: Vec<(f64, usize, f64)>,
    pub max_deviation: f64,
    /// Max deviation over the lower and upper half of the probes.
    pub early_max_deviation: f64,
    pub late_max_deviation: f64,
    pub insufficient_data: bool,
}

impl WeylReport {
    /// Ratio of late to early deviation; bounded remainders keep this near 1.
    pub fn growth_ratio(&self) -> f64 {
        if self.early_max_deviation > 0.0 {
            self.late_max_deviation / self.early_max_deviation
        } else {
            f64::INFINITY
        }
    }
}

const WEYL_PROBES: usize = 64;

pub fn weyl_check(spectrum: &SortedSpectrum, total_length: f64) -> WeylReport {
    let top = spectrum.max().unwrap_or(0.0);
    if spectrum.len() < 2 || top <= 0.0 || total_length.is_nan() || total_length <= 0.0 {
        return WeylReport {
            total_length,
            probes: Vec::new(),
            max_deviation: 0.0,
            early_max_deviation: 0.0,
            late_max_deviation: 0.0,
            insufficient_data: true,
        };
    }
    let probes: Vec<(f64, usize, f64)> = (0..WEYL_PROBES)
        .map(|i| {
            let sigma = top * (i as f64 + 0.5) / WEYL_PROBES as f64;
            (sigma, spectrum.count_below(sigma), total_length * sigma / PI)
        })
        .collect();
    let dev = |p: &(f64, usize, f64)| (p.1 as f64 - p.2).abs();
    let (early, late) = probes.split_at(WEYL_PROBES / 2);
    let max_of = |s: &[(f64, usize, f64)]| s.iter().map(dev).fold(0.0, f64::max);
    WeylReport {
        total_length,
        max_deviation: max_of(&probes),
        early_max_deviation: max_of(early),
        late_max_deviation: max_of(late),
        probes,
        insufficient_data: false,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Truncation {
    Cutoff(f64),
    Count(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Source {
    Disk {
        radius: f64,
    },
    Annulus {
        inner_radius: f64,
        outer_radius: f64,
        max_mode: u32,
    },
    WeightedDisk {
        weight: WeightSpec,
        modes: usize,
    },
    Union {
        parts: Vec<Source>,
    },
    Synthetic {
        generators: GeneratorSet,
        noise: NoiseModel,
    },
}

/// A spectrum source plus truncation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SourceSpec {
    pub source: Source,
    pub truncation: Option<Truncation>,
}

impl SourceSpec {
    pub fn new(source: Source, truncation: Option<Truncation>) -> Self {
        Self { source, truncation }
    }

    pub fn validate(&self) -> Result<()> {
        match self.truncation {
            Some(Truncation::Cutoff(c)) => check_positive("cutoff", c)?,
            Some(Truncation::Count(0)) => return Err(invalid("count must be positive")),
            _ => {}
        }
        validate_source(&self.source, self.truncation.is_some())
    }

    pub fn generate(&self) -> Result<SortedSpectrum> {
        self.validate()?;
        let raw = generate_source(&self.source, self.truncation)?;
        Ok(match self.truncation {
            Some(Truncation::Cutoff(c)) => raw.truncated_at(c),
            Some(Truncation::Count(n)) => raw.first(n),
            None => raw,
        })
    }

    /// Boundary lengths of the described surface, descending.
    pub fn boundary_lengths(&self) -> Vec<f64> {
        let mut lengths = Vec::new();
        collect_lengths(&self.source, &mut lengths);
        lengths.sort_unstable_by(|a, b| b.total_cmp(a));
        lengths
    }
}

fn validate_source(source: &Source, truncated: bool) -> Result<()> {
    match source {
        Source::Disk { radius } => {
            check_positive("radius", *radius)?;
            if !truncated {
                return Err(invalid("disk spectrum needs a cutoff or count"));
            }
        }
        Source::Annulus {
            inner_radius,
            outer_radius,
            max_mode,
        } => {
            check_positive("inner radius", *inner_radius)?;
            check_positive("outer radius", *outer_radius)?;
            if inner_radius >= outer_radius {
                return Err(invalid("inner radius must be below outer radius"));
            }
            if *max_mode < 1 {
                return Err(invalid("max_mode must be at least 1"));
            }
        }
        Source::WeightedDisk { weight, modes } => {
            if *modes < 1 {
                return Err(invalid("modes must be at least 1"));
            }
            weight.check(*modes)?;
        }
        Source::Union { parts } => {
            if parts.is_empty() {
                return Err(invalid("union of no sources"));
            }
            for p in parts {
                validate_source(p, truncated)?;
            }
        }
        Source::Synthetic { noise, .. } => {
            noise.validate()?;
            if !truncated {
                return Err(invalid("synthetic spectrum needs a cutoff or count"));
            }
        }
    }
    Ok(())
}

fn generate_source(source: &Source, truncation: Option<Truncation>) -> Result<SortedSpectrum> {
    let progression = |generators: &GeneratorSet| match truncation {
        Some(Truncation::Cutoff(c)) => merge_progressions(generators, c),
        Some(Truncation::Count(n)) => merge_progressions_count(generators, n),
        None => Err(invalid("progression needs a cutoff or count")),
    };
    match source {
        Source::Disk { radius } => progression(&GeneratorSet::new(vec![1.0 / radius])?),
        Source::Annulus {
            inner_radius,
            outer_radius,
            max_mode,
        } => {
            let full = annulus_spectrum(*inner_radius, *outer_radius, *max_mode)?;
            let complete = annulus_complete_below(*inner_radius, *outer_radius, *max_mode)?;
            Ok(SortedSpectrum::from_sorted_unchecked(
                full.values()[..full.count_below(complete)].to_vec(),
            ))
        }
        Source::WeightedDisk { weight, modes } => weighted_disk_trusted(weight, *modes, DEFAULT_TRUSTED_FRACTION),
        Source::Union { parts } => {
            let parts = parts
                .iter()
                .map(|p| generate_source(p, truncation))
                .collect::<Result<Vec<_>>>()?;
            union_spectrum(&parts)
        }
        Source::Synthetic { generators, noise } => noise.apply(&progression(generators)?),
    }
}

fn collect_lengths(source: &Source, out: &mut Vec<f64>) {
    match source {
        Source::Disk { radius } => out.push(TAU * radius),
        Source::Annulus {
            inner_radius,
            outer_radius,
            ..
        } => {
            out.push(TAU * outer_radius);
            out.push(TAU * inner_radius);
        }
        Source::WeightedDisk { weight, .. } => out.push(weight.boundary_length()),
        Source::Union { parts } => parts.iter().for_each(|p| collect_lengths(p, out)),
        Source::Synthetic { generators, .. } => out.extend(generators.lengths()),
    }
}
