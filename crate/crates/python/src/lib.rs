//! Python bindings: measure models, distance profiles and spectral sweeps.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use fracspec_core::asymptotics as asy;
use fracspec_core::distdist::{self, DistanceProfile};
use fracspec_core::measures::{AxisSpec, DigitAxis, MeasureModel, Mode, TorusPoint};
use fracspec_core::specfun;
use fracspec_core::spectral;

fn err(e: fracspec_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A finite Borel measure on the unit flat torus.
#[pyclass(from_py_object)]
#[derive(Clone)]
struct Measure {
    inner: MeasureModel,
}

#[pymethods]
impl Measure {
    /// Lebesgue measure on an s-dimensional subtorus of T^n.
    #[staticmethod]
    fn subtorus(n: usize, s: usize, normal_offset: Vec<f64>) -> PyResult<Self> {
        Ok(Measure { inner: MeasureModel::subtorus(n, s, normal_offset).map_err(err)? })
    }

    /// Digit self-similar measure with one fractal axis in T^n.
    #[staticmethod]
    fn digit(n: usize, base: u32, digits: Vec<u32>, normal_offset: Vec<f64>) -> PyResult<Self> {
        let axis = AxisSpec::Digits(DigitAxis::new(base, digits).map_err(err)?);
        Ok(Measure {
            inner: MeasureModel::digit_self_similar(n, vec![axis], normal_offset).map_err(err)?,
        })
    }

    /// Cosine-weighted density on a subtorus: modes are (k, amplitude).
    #[staticmethod]
    fn fourier_weighted(
        n: usize,
        s: usize,
        normal_offset: Vec<f64>,
        modes: Vec<(Vec<i64>, f64)>,
    ) -> PyResult<Self> {
        let modes = modes
            .into_iter()
            .map(|(k, amplitude)| Mode { k, amplitude })
            .collect();
        Ok(Measure {
            inner: MeasureModel::fourier_weighted(n, s, normal_offset, modes).map_err(err)?,
        })
    }

    /// Sum of measures on a common ambient torus.
    #[staticmethod]
    fn mixture(components: Vec<Measure>) -> PyResult<Self> {
        let parts = components.into_iter().map(|m| m.inner).collect();
        Ok(Measure { inner: MeasureModel::mixture(parts).map_err(err)? })
    }

    #[getter]
    fn ambient_dim(&self) -> usize {
        self.inner.ambient_dim()
    }

    #[getter]
    fn dimension(&self) -> f64 {
        self.inner.dimension()
    }

    #[getter]
    fn total_mass(&self) -> f64 {
        self.inner.total_mass()
    }

    /// Closed-form averaged density, when the measure admits one.
    #[getter]
    fn averaged_density(&self) -> Option<f64> {
        self.inner.averaged_density_exact()
    }

    /// Exact Fourier coefficient as (re, im).
    fn fourier_coefficient(&self, k: Vec<i64>) -> PyResult<(f64, f64)> {
        if k.len() != self.inner.ambient_dim() {
            return Err(PyValueError::new_err("frequency dimension mismatch"));
        }
        let c = self.inner.fourier_coefficient(&k);
        Ok((c.re, c.im))
    }

    /// Seeded i.i.d. samples from the normalized measure.
    fn sample(&self, seed: u64, count: usize) -> Vec<Vec<f64>> {
        self.inner
            .sample(seed, count)
            .into_iter()
            .map(|p| p.coords().to_vec())
            .collect()
    }

    /// Mass of the geodesic ball B(x, r).
    fn ball_mass(&self, x: Vec<f64>, r: f64) -> PyResult<f64> {
        self.inner.ball_mass(&TorusPoint::new(x), r).map_err(err)
    }
}

/// A distance distribution F(r) with its Gaussian average and energies.
#[pyclass]
struct Profile {
    inner: DistanceProfile,
}

#[pymethods]
impl Profile {
    /// Monte Carlo profile from seeded pair samples.
    #[staticmethod]
    fn empirical(mu: &Measure, pair_count: usize, seed: u64) -> PyResult<Self> {
        Ok(Profile { inner: DistanceProfile::empirical(&mu.inner, pair_count, seed).map_err(err)? })
    }

    /// Exact self-similar law of a digit measure (separated geometry).
    #[staticmethod]
    fn renewal(mu: &Measure) -> PyResult<Self> {
        Ok(Profile { inner: DistanceProfile::renewal(&mu.inner).map_err(err)? })
    }

    /// Exact torus-metric law of a digit measure (includes wrap pairs).
    #[staticmethod]
    fn torus_exact(mu: &Measure) -> PyResult<Self> {
        Ok(Profile { inner: DistanceProfile::torus_exact(&mu.inner).map_err(err)? })
    }

    /// Closed-form profile of a subtorus measure.
    #[staticmethod]
    fn exact(mu: &Measure) -> PyResult<Self> {
        Ok(Profile { inner: DistanceProfile::exact_subtorus(&mu.inner).map_err(err)? })
    }

    /// Piecewise log-constant level profile F(r) = level(r) r^s.
    #[staticmethod]
    #[pyo3(signature = (blocks, s, diam = 0.5))]
    fn synthetic(blocks: Vec<(f64, f64)>, s: f64, diam: f64) -> PyResult<Self> {
        Ok(Profile { inner: DistanceProfile::synthetic_blocks(&blocks, s, diam).map_err(err)? })
    }

    #[getter]
    fn s(&self) -> f64 {
        self.inner.s()
    }

    #[getter]
    fn diam(&self) -> f64 {
        self.inner.diam()
    }

    #[getter]
    fn mass_sq(&self) -> f64 {
        self.inner.mass_sq()
    }

    #[getter]
    fn kind(&self) -> &'static str {
        self.inner.kind_name()
    }

    /// F(r): pair mass at distance <= r.
    fn f(&self, r: f64) -> f64 {
        self.inner.f_at(r)
    }

    /// a(r) = F(r)/r^s.
    fn a(&self, r: f64) -> PyResult<f64> {
        self.inner.coeff_a(r).map_err(err)
    }

    /// Gaussian pair average G(t).
    fn gaussian(&self, t: f64) -> PyResult<f64> {
        self.inner.gaussian_average(t).map_err(err)
    }

    /// (min, max) of a(r) over a log grid in [r_min, r_max].
    fn density_window(&self, r_min: f64, r_max: f64) -> PyResult<(f64, f64)> {
        self.inner.density_window(r_min, r_max).map_err(err)
    }

    /// Layer-cake Riesz energy I_u.
    fn riesz_layercake(&self, u: f64) -> PyResult<f64> {
        Ok(self.inner.riesz_layercake(u).map_err(err)?.value)
    }
}

/// Constant bundle for (n, s) as a dict.
#[pyfunction]
fn constants(py: Python<'_>, n: u32, s: f64) -> PyResult<Py<PyDict>> {
    let b = specfun::constant_bundle(n, s).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("n", b.n)?;
    d.set_item("s", b.s)?;
    d.set_item("vol_ball_s", b.vol_ball_s)?;
    d.set_item("vol_ball_ns", b.vol_ball_ns)?;
    d.set_item("c_ns", b.c_ns)?;
    d.set_item("gamma_s", b.gamma_s)?;
    d.set_item("gamma_ns", b.gamma_ns)?;
    d.set_item("kappa_s", b.kappa_s)?;
    Ok(d.into())
}

/// Euler gamma function.
#[pyfunction]
fn gamma(x: f64) -> PyResult<f64> {
    specfun::gamma_fn(x).map_err(err)
}

/// Ball-average Fourier multiplier m_s(tau).
#[pyfunction]
fn ball_multiplier(s: u32, tau: f64) -> PyResult<f64> {
    specfun::ball_multiplier(s, tau).map_err(err)
}

/// Cumulative spectral sum N_mu(lambda).
#[pyfunction]
fn kuznecov_sum(mu: &Measure, lam: f64) -> PyResult<f64> {
    spectral::kuznecov_sum(&mu.inner, lam).map_err(err)
}

/// Spectral sweep over a lambda grid: returns (lambdas, values).
#[pyfunction]
#[pyo3(signature = (mu, grid, budget = None))]
fn kuznecov_sweep(
    mu: &Measure,
    grid: Vec<f64>,
    budget: Option<u64>,
) -> PyResult<(Vec<f64>, Vec<f64>)> {
    let series =
        spectral::kuznecov_sweep(&mu.inner, &grid, budget.unwrap_or(spectral::DEFAULT_BUDGET))
            .map_err(err)?;
    Ok((series.lambdas, series.values))
}

/// Heat-regularized sum H_mu(t).
#[pyfunction]
#[pyo3(signature = (mu, t, epsilon = 1e-10))]
fn heat_sum(mu: &Measure, t: f64, epsilon: f64) -> PyResult<f64> {
    spectral::heat_sum(&mu.inner, t, epsilon).map_err(err)
}

/// Ratio-sweep diagnostics over [lambda_min, lambda_max]; returns a dict
/// with the fitted exponent, oscillation amplitudes and the verdict.
#[pyfunction]
#[pyo3(signature = (mu, lambda_min, lambda_max, per_decade = 40, period = 10.0, a = None))]
fn sweep_report(
    py: Python<'_>,
    mu: &Measure,
    lambda_min: f64,
    lambda_max: f64,
    per_decade: usize,
    period: f64,
    a: Option<f64>,
) -> PyResult<Py<PyDict>> {
    let grid = if (period - 10.0).abs() > 1e-9 {
        asy::period_grid(lambda_min, lambda_max, period, per_decade)
    } else {
        asy::geometric_grid(lambda_min, lambda_max, per_decade)
    };
    let series =
        spectral::kuznecov_sweep(&mu.inner, &grid, spectral::DEFAULT_BUDGET).map_err(err)?;
    let rep = asy::ratio_sweep(&series, a, period).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("fitted_exponent", rep.fitted_exponent)?;
    d.set_item("fit_halfwidth", rep.fit_halfwidth)?;
    d.set_item("amplitude_final", rep.amplitude_final)?;
    d.set_item("amplitude_prev", rep.amplitude_prev)?;
    d.set_item("verdict", rep.verdict.as_str())?;
    d.set_item("normalized", rep.normalized)?;
    Ok(d.into())
}

/// Monte Carlo Riesz energy: returns (value, stderr).
#[pyfunction]
fn riesz_montecarlo(mu: &Measure, u: f64, pair_count: usize, seed: u64) -> PyResult<(f64, f64)> {
    let e = distdist::riesz_energy_montecarlo(&mu.inner, u, pair_count, seed).map_err(err)?;
    Ok((e.value, e.stderr.unwrap_or(f64::NAN)))
}

#[pymodule]
fn fracspec(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Measure>()?;
    m.add_class::<Profile>()?;
    m.add_function(wrap_pyfunction!(constants, m)?)?;
    m.add_function(wrap_pyfunction!(gamma, m)?)?;
    m.add_function(wrap_pyfunction!(ball_multiplier, m)?)?;
    m.add_function(wrap_pyfunction!(kuznecov_sum, m)?)?;
    m.add_function(wrap_pyfunction!(kuznecov_sweep, m)?)?;
    m.add_function(wrap_pyfunction!(heat_sum, m)?)?;
    m.add_function(wrap_pyfunction!(sweep_report, m)?)?;
    m.add_function(wrap_pyfunction!(riesz_montecarlo, m)?)?;
    Ok(())
}
