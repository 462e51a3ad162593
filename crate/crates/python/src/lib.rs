use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use steklov_core::numtheory;
use steklov_core::recovery;
use steklov_core::spectra;
use steklov_core::{Error, GeneratorSet, NoiseModel, SortedSpectrum, SpectrumFile, WeightSpec};

fn to_py(e: Error) -> PyErr {
    match e {
        Error::NoProgressionStructure(_) | Error::GeneratorNotConfirmed(_) | Error::LinearAlgebra(_) => {
            PyRuntimeError::new_err(e.to_string())
        }
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn generators(alphas: Vec<f64>) -> PyResult<GeneratorSet> {
    GeneratorSet::new(alphas).map_err(to_py)
}

/// Sorted multiset of non-negative reals.
#[pyclass(name = "Spectrum", frozen)]
struct PySpectrum {
    inner: SortedSpectrum,
}

#[pymethods]
impl PySpectrum {
    #[new]
    fn new(values: Vec<f64>) -> PyResult<Self> {
        Ok(Self {
            inner: SortedSpectrum::from_unsorted(values).map_err(to_py)?,
        })
    }

    #[getter]
    fn values(&self) -> Vec<f64> {
        self.inner.values().to_vec()
    }

    #[getter]
    fn zero_count(&self) -> usize {
        self.inner.zero_count()
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("Spectrum(len={}, max={:?})", self.inner.len(), self.inner.max())
    }

    fn gaps(&self) -> PyResult<Vec<f64>> {
        steklov_core::gaps(&self.inner).map_err(to_py)
    }

    #[pyo3(signature = (tail_fraction = 0.5))]
    fn tail_max_gap(&self, tail_fraction: f64) -> PyResult<f64> {
        steklov_core::tail_max_gap(&self.inner, tail_fraction).map_err(to_py)
    }

    fn scaled(&self, factor: f64) -> PyResult<Self> {
        Ok(Self {
            inner: self.inner.scaled(factor).map_err(to_py)?,
        })
    }

    fn truncated_at(&self, cutoff: f64) -> Self {
        Self {
            inner: self.inner.truncated_at(cutoff),
        }
    }
}

#[pyclass(name = "PeelParams", from_py_object)]
#[derive(Clone)]
struct PyPeelParams {
    #[pyo3(get, set)]
    proximity_threshold: f64,
    #[pyo3(get, set)]
    tail_fraction: f64,
    #[pyo3(get, set)]
    skip_prefix: usize,
    #[pyo3(get, set)]
    edge_margin: f64,
    #[pyo3(get, set)]
    max_components: usize,
}

#[pymethods]
impl PyPeelParams {
    #[new]
    #[pyo3(signature = (proximity_threshold = 0.1, tail_fraction = 0.5, skip_prefix = 8, edge_margin = 0.1, max_components = 16))]
    fn new(
        proximity_threshold: f64,
        tail_fraction: f64,
        skip_prefix: usize,
        edge_margin: f64,
        max_components: usize,
    ) -> Self {
        Self {
            proximity_threshold,
            tail_fraction,
            skip_prefix,
            edge_margin,
            max_components,
        }
    }
}

impl PyPeelParams {
    fn to_core(&self) -> recovery::PeelParams {
        recovery::PeelParams {
            proximity_threshold: self.proximity_threshold,
            tail_fraction: self.tail_fraction,
            skip_prefix: self.skip_prefix,
            edge_margin: self.edge_margin,
            max_components: self.max_components,
            ..Default::default()
        }
    }
}

fn params_or_default(params: Option<PyPeelParams>) -> recovery::PeelParams {
    params.map(|p| p.to_core()).unwrap_or_default()
}

#[pyclass(name = "RecoveryReport", frozen)]
struct PyRecoveryReport {
    inner: recovery::RecoveryReport,
}

#[pymethods]
impl PyRecoveryReport {
    #[getter]
    fn k(&self) -> usize {
        self.inner.profile.k
    }

    /// Boundary lengths, descending.
    #[getter]
    fn lengths(&self) -> Vec<f64> {
        self.inner.profile.lengths.clone()
    }

    #[getter]
    fn generators(&self) -> Vec<f64> {
        self.inner.generators.alphas().to_vec()
    }

    #[getter]
    fn residual_size(&self) -> usize {
        self.inner.residual_size
    }

    /// `(l_estimate, generator, n0, j_max, removed, remainder_size)` per step.
    #[getter]
    fn steps(&self) -> Vec<(f64, f64, usize, usize, usize, usize)> {
        self.inner
            .steps
            .iter()
            .map(|s| {
                (
                    s.l_estimate,
                    s.generator,
                    s.n0,
                    s.j_max,
                    2 * s.removed_pairs.len(),
                    s.remainder_size,
                )
            })
            .collect()
    }

    fn __repr__(&self) -> String {
        format!(
            "RecoveryReport(k={}, lengths={:?})",
            self.inner.profile.k, self.inner.profile.lengths
        )
    }
}

#[pyfunction]
fn merge_progressions(alphas: Vec<f64>, cutoff: f64) -> PyResult<PySpectrum> {
    let inner = steklov_core::merge_progressions(&generators(alphas)?, cutoff).map_err(to_py)?;
    Ok(PySpectrum { inner })
}

#[pyfunction]
fn disk_spectrum(radius: f64, cutoff: f64) -> PyResult<PySpectrum> {
    Ok(PySpectrum {
        inner: spectra::disk_spectrum(radius, cutoff).map_err(to_py)?,
    })
}

#[pyfunction]
fn union_spectrum(parts: Vec<PyRef<'_, PySpectrum>>) -> PyResult<PySpectrum> {
    let parts: Vec<SortedSpectrum> = parts.iter().map(|p| p.inner.clone()).collect();
    Ok(PySpectrum {
        inner: spectra::union_spectrum(&parts).map_err(to_py)?,
    })
}

#[pyfunction]
fn annulus_spectrum(inner_radius: f64, outer_radius: f64, max_mode: u32) -> PyResult<PySpectrum> {
    Ok(PySpectrum {
        inner: spectra::annulus_spectrum(inner_radius, outer_radius, max_mode).map_err(to_py)?,
    })
}

/// Weight given as `[a0, a1, b1, a2, b2, ...]`.
#[pyfunction]
#[pyo3(signature = (weight, modes, trusted_fraction = None))]
fn weighted_disk_spectrum(weight: Vec<f64>, modes: usize, trusted_fraction: Option<f64>) -> PyResult<PySpectrum> {
    let w = WeightSpec::from_interleaved(&weight).map_err(to_py)?;
    let inner = match trusted_fraction {
        Some(f) => spectra::weighted_disk_trusted(&w, modes, f),
        None => spectra::weighted_disk_spectrum(&w, modes),
    }
    .map_err(to_py)?;
    Ok(PySpectrum { inner })
}

/// `noise` is `"none"`, `("exp", c, beta)` or `("pow", c, p)`.
#[pyfunction]
#[pyo3(signature = (alphas, cutoff, noise = None, seed = 0))]
fn synthetic_spectrum(
    alphas: Vec<f64>,
    cutoff: f64,
    noise: Option<(String, f64, f64)>,
    seed: u64,
) -> PyResult<PySpectrum> {
    let model = match noise {
        None => NoiseModel::NONE,
        Some((kind, c, rate)) => match kind.as_str() {
            "exp" => NoiseModel::exp_decay(c, rate, seed),
            "pow" => NoiseModel::power_decay(c, rate, seed),
            other => return Err(PyValueError::new_err(format!("unknown noise kind '{other}'"))),
        },
    };
    let inner = spectra::synthetic_spectrum(&generators(alphas)?, &model, cutoff).map_err(to_py)?;
    Ok(PySpectrum { inner })
}

#[pyfunction]
#[pyo3(signature = (spectrum, params = None))]
fn recover(spectrum: &PySpectrum, params: Option<PyPeelParams>) -> PyResult<PyRecoveryReport> {
    let inner = recovery::recover(&spectrum.inner, &params_or_default(params)).map_err(to_py)?;
    Ok(PyRecoveryReport { inner })
}

#[pyfunction]
#[pyo3(signature = (spectrum, params = None))]
fn max_boundary_length(spectrum: &PySpectrum, params: Option<PyPeelParams>) -> PyResult<f64> {
    recovery::max_boundary_length(&spectrum.inner, &params_or_default(params)).map_err(to_py)
}

/// `(max_tail_cluster, within_bound)`.
#[pyfunction]
#[pyo3(signature = (spectrum, k, cluster_tol = 1e-9, skip_prefix = 8))]
fn multiplicity_tail_check(spectrum: &PySpectrum, k: usize, cluster_tol: f64, skip_prefix: usize) -> (usize, bool) {
    let r = recovery::multiplicity_tail_check(&spectrum.inner, k, cluster_tol, skip_prefix);
    (r.max_tail_cluster, r.within_bound)
}

/// `(q, qX, residuals, interval_lo, interval_hi)`
type WitnessRow = (u64, u64, Vec<f64>, f64, f64);

/// One row per witness.
#[pyfunction]
#[pyo3(signature = (alphas, q_max, rational_tolerance = 1e-9))]
fn find_witnesses(alphas: Vec<f64>, q_max: u64, rational_tolerance: f64) -> PyResult<Vec<WitnessRow>> {
    let search = numtheory::find_witnesses(&generators(alphas)?, q_max, rational_tolerance).map_err(to_py)?;
    Ok(search
        .witnesses
        .iter()
        .map(|w| {
            let (lo, hi) = w.interval();
            (
                w.q,
                w.q * w.x,
                w.approximants.iter().map(|a| a.residual).collect(),
                lo,
                hi,
            )
        })
        .collect())
}

/// Parses spectrum-file text into `(spectrum, truth lengths or None)`.
#[pyfunction]
fn parse_spectrum_file(text: &str) -> PyResult<(PySpectrum, Option<Vec<f64>>)> {
    let file = SpectrumFile::parse(text).map_err(to_py)?;
    Ok((PySpectrum { inner: file.values }, file.meta.truth))
}

#[pymodule]
fn steklov(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySpectrum>()?;
    m.add_class::<PyPeelParams>()?;
    m.add_class::<PyRecoveryReport>()?;
    m.add_function(wrap_pyfunction!(merge_progressions, m)?)?;
    m.add_function(wrap_pyfunction!(disk_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(union_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(annulus_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(weighted_disk_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(synthetic_spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(recover, m)?)?;
    m.add_function(wrap_pyfunction!(max_boundary_length, m)?)?;
    m.add_function(wrap_pyfunction!(multiplicity_tail_check, m)?)?;
    m.add_function(wrap_pyfunction!(find_witnesses, m)?)?;
    m.add_function(wrap_pyfunction!(parse_spectrum_file, m)?)?;
    Ok(())
}
