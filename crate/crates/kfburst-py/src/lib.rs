//! Python extension module `_kfburst`: the main types and operations of the
//! kfburst crate. Build with `cargo build -p kfburst-py --release`; the
//! smoke test under `python/` locates and loads the resulting cdylib.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use kfburst::init::InitialDensity;
use kfburst::laplace::{InversionConfig, LaplaceImage};
use kfburst::mc::McConfig;
use kfburst::params;
use kfburst::{cauchy, green, mc, pde};

fn err(e: kfburst::Error) -> PyErr {
    use kfburst::Error::*;
    match &e {
        InvalidParams(_) | InvalidInput(_) | Unsupported(_) => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

/// Model rates (beta, lambda, k); alpha = lambda/beta is derived.
#[pyclass(name = "ModelParams", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyModelParams {
    inner: params::ModelParams,
}

#[pymethods]
impl PyModelParams {
    #[new]
    fn new(beta: f64, lambda_: f64, k: f64) -> PyResult<Self> {
        Ok(Self {
            inner: params::ModelParams::new(beta, lambda_, k).map_err(err)?,
        })
    }

    #[getter]
    fn beta(&self) -> f64 {
        self.inner.beta()
    }

    #[getter]
    fn lambda_(&self) -> f64 {
        self.inner.lambda()
    }

    #[getter]
    fn k(&self) -> f64 {
        self.inner.k()
    }

    #[getter]
    fn alpha(&self) -> f64 {
        self.inner.alpha()
    }

    #[getter]
    fn integer_alpha(&self) -> Option<u32> {
        self.inner.integer_alpha()
    }

    fn __repr__(&self) -> String {
        format!(
            "ModelParams(beta={}, lambda_={}, k={})",
            self.inner.beta(),
            self.inner.lambda(),
            self.inner.k()
        )
    }
}

/// Series truncation control.
#[pyclass(name = "SeriesConfig", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PySeriesConfig {
    inner: params::SeriesConfig,
}

#[pymethods]
impl PySeriesConfig {
    #[new]
    #[pyo3(signature = (rel_tol=1e-12, max_terms=100_000, compensated=true))]
    fn new(rel_tol: f64, max_terms: usize, compensated: bool) -> PyResult<Self> {
        Ok(Self {
            inner: params::SeriesConfig::new(rel_tol, max_terms, compensated).map_err(err)?,
        })
    }
}

fn cfg_of(cfg: Option<&PySeriesConfig>) -> params::SeriesConfig {
    cfg.map(|c| c.inner).unwrap_or_else(params::SeriesConfig::deep)
}

/// Initial probability density for the Cauchy problem.
#[pyclass(name = "InitialDensity", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyInitialDensity {
    inner: InitialDensity,
}

#[pymethods]
impl PyInitialDensity {
    /// Point mass at y.
    #[staticmethod]
    fn dirac(y: f64) -> PyResult<Self> {
        Ok(Self {
            inner: InitialDensity::dirac(y).map_err(err)?,
        })
    }

    /// x^power e^{-rate x}, normalized.
    #[staticmethod]
    fn gamma_like(power: f64, rate: f64) -> PyResult<Self> {
        Ok(Self {
            inner: InitialDensity::gamma_like(power, rate).map_err(err)?,
        })
    }

    /// x^power e^{-rate x^2}, normalized.
    #[staticmethod]
    fn gauss_like(power: f64, rate: f64) -> PyResult<Self> {
        Ok(Self {
            inner: InitialDensity::gauss_like(power, rate).map_err(err)?,
        })
    }

    #[staticmethod]
    fn uniform(lo: f64, hi: f64) -> PyResult<Self> {
        Ok(Self {
            inner: InitialDensity::uniform(lo, hi).map_err(err)?,
        })
    }

    /// Piecewise-constant values between consecutive breakpoints.
    #[staticmethod]
    fn steps(breakpoints: Vec<f64>, values: Vec<f64>) -> PyResult<Self> {
        Ok(Self {
            inner: InitialDensity::steps(breakpoints, values).map_err(err)?,
        })
    }

    /// Linear interpolation through (xs, ys), zero outside.
    #[staticmethod]
    fn tabulated(xs: Vec<f64>, ys: Vec<f64>) -> PyResult<Self> {
        Ok(Self {
            inner: InitialDensity::tabulated(xs, ys).map_err(err)?,
        })
    }

    fn density(&self, x: f64) -> f64 {
        self.inner.density(x)
    }

    fn mean(&self) -> f64 {
        self.inner.mean()
    }

    fn is_c1(&self) -> bool {
        self.inner.is_c1()
    }

    #[getter]
    fn atom(&self) -> Option<(f64, f64)> {
        self.inner.atom()
    }
}

/// Solved density snapshot.
#[pyclass(name = "DensitySolution", frozen)]
struct PyDensitySolution {
    inner: cauchy::DensitySolution,
}

#[pymethods]
impl PyDensitySolution {
    #[getter]
    fn t(&self) -> f64 {
        self.inner.t
    }

    #[getter]
    fn grid(&self) -> Vec<f64> {
        self.inner.grid.clone()
    }

    #[getter]
    fn regular_values(&self) -> Vec<f64> {
        self.inner.regular_values.clone()
    }

    #[getter]
    fn atoms(&self) -> Vec<(f64, f64)> {
        self.inner.atoms.clone()
    }

    #[getter]
    fn discontinuities(&self) -> Vec<f64> {
        self.inner.discontinuities.clone()
    }

    #[getter]
    fn total_mass(&self) -> f64 {
        self.inner.total_mass
    }

    #[getter]
    fn mass_tolerance(&self) -> f64 {
        self.inner.mass_tolerance
    }
}

/// Mass e^{-alpha beta t} of the no-burst atom.
#[pyfunction]
fn singular_amplitude(p: &PyModelParams, t: f64) -> PyResult<f64> {
    green::singular_amplitude(&p.inner, t).map_err(err)
}

/// Transported atom position y e^{-beta t}.
#[pyfunction]
fn atom_location(p: &PyModelParams, t: f64, y: f64) -> f64 {
    green::atom_location(&p.inner, t, y)
}

/// Regular part of the kernel started at y (finite sum for integer alpha,
/// series otherwise).
#[pyfunction]
#[pyo3(signature = (p, t, x, y, cfg=None))]
fn green_regular(
    p: &PyModelParams,
    t: f64,
    x: f64,
    y: f64,
    cfg: Option<&PySeriesConfig>,
) -> PyResult<f64> {
    green::green_regular(&p.inner, t, x, y, &cfg_of(cfg)).map_err(err)
}

/// CDF of the kernel (atom included).
#[pyfunction]
#[pyo3(signature = (p, t, x, y, cfg=None))]
fn green_cdf(
    p: &PyModelParams,
    t: f64,
    x: f64,
    y: f64,
    cfg: Option<&PySeriesConfig>,
) -> PyResult<f64> {
    green::green_cdf(&p.inner, t, x, y, &cfg_of(cfg)).map_err(err)
}

/// Long-time gamma density k^a x^{a-1} e^{-kx}/Gamma(a).
#[pyfunction]
fn stationary_density(p: &PyModelParams, x: f64) -> f64 {
    green::stationary_density(&p.inner, x)
}

/// Mode of the stationary density; None when it sits at the origin.
#[pyfunction]
fn stationary_mode(p: &PyModelParams) -> Option<f64> {
    green::stationary_mode(&p.inner)
}

/// Solve the Cauchy problem on a grid.
#[pyfunction]
#[pyo3(signature = (p, phi, t, grid, cfg=None))]
fn solve(
    p: &PyModelParams,
    phi: &PyInitialDensity,
    t: f64,
    grid: Vec<f64>,
    cfg: Option<&PySeriesConfig>,
) -> PyResult<PyDensitySolution> {
    Ok(PyDensitySolution {
        inner: cauchy::solve(&p.inner, &phi.inner, t, &grid, &cfg_of(cfg)).map_err(err)?,
    })
}

/// First moment of the solution at time t.
#[pyfunction]
fn solution_mean(p: &PyModelParams, phi: &PyInitialDensity, t: f64) -> f64 {
    cauchy::mean(&p.inner, &phi.inner, t)
}

/// CDF of the solution at (t, x).
#[pyfunction]
#[pyo3(signature = (p, phi, t, x, cfg=None))]
fn solution_cdf(
    p: &PyModelParams,
    phi: &PyInitialDensity,
    t: f64,
    x: f64,
    cfg: Option<&PySeriesConfig>,
) -> PyResult<f64> {
    cauchy::cdf(&p.inner, &phi.inner, t, x, &cfg_of(cfg)).map_err(err)
}

/// Fully explicit solution for integer alpha and gamma-type phi with
/// integer power.
#[pyfunction]
fn closed_form_solution(
    p: &PyModelParams,
    phi: &PyInitialDensity,
    t: f64,
    x: f64,
) -> PyResult<f64> {
    cauchy::closed_form_solution(&p.inner, &phi.inner, t, x).map_err(err)
}

/// Laplace image of the kernel at w = w_re + i w_im; returns (re, im).
#[pyfunction]
fn laplace_image(p: &PyModelParams, t: f64, y: f64, w_re: f64, w_im: f64) -> PyResult<(f64, f64)> {
    let img = LaplaceImage::new(p.inner, t, y).map_err(err)?;
    let v = img
        .eval(num_complex::Complex64::new(w_re, w_im))
        .map_err(err)?;
    Ok((v.re, v.im))
}

/// Numerical inversion of the atom-subtracted image: returns
/// (value, node_doubling_error).
#[pyfunction]
#[pyo3(signature = (p, t, x, y, nodes=64))]
fn laplace_green_regular(
    p: &PyModelParams,
    t: f64,
    x: f64,
    y: f64,
    nodes: usize,
) -> PyResult<(f64, f64)> {
    let img = LaplaceImage::new(p.inner, t, y).map_err(err)?;
    let cfg = InversionConfig {
        contour_nodes: nodes,
        ..Default::default()
    };
    let r = kfburst::laplace::oracle_green_regular(&img, x, &cfg).map_err(err)?;
    Ok((r.value, r.err_estimate))
}

/// Exact event-driven Monte Carlo run; returns a dict with the sorted
/// samples, moments, no-burst fraction and (for atomic starts) the KS
/// distance against the analytic CDF.
#[pyfunction]
#[pyo3(signature = (p, phi, t_end, n_paths, seed, keep_samples=false))]
fn mc_run<'py>(
    py: Python<'py>,
    p: &PyModelParams,
    phi: &PyInitialDensity,
    t_end: f64,
    n_paths: usize,
    seed: u64,
    keep_samples: bool,
) -> PyResult<Bound<'py, PyDict>> {
    let cfg = McConfig::new(n_paths, t_end, seed, phi.inner.clone()).map_err(err)?;
    let emp = mc::empirical_distribution(&p.inner, &cfg).map_err(err)?;
    let ks = match phi.inner.atom() {
        Some((y0, _)) => {
            let scfg = params::SeriesConfig::deep();
            let atom = (
                green::atom_location(&p.inner, t_end, y0),
                green::singular_amplitude(&p.inner, t_end).map_err(err)?,
            );
            Some(mc::ks_distance(
                &emp,
                |x| green::green_cdf(&p.inner, t_end, x, y0, &scfg).unwrap_or(f64::NAN),
                &[atom],
            ))
        }
        None => None,
    };
    let d = PyDict::new(py);
    d.set_item("mean", emp.mean)?;
    d.set_item("variance", emp.variance)?;
    d.set_item("mean_std_err", emp.mean_std_err)?;
    d.set_item("atom_candidate_mass", emp.atom_candidate_mass)?;
    d.set_item("n_paths", emp.n_paths)?;
    d.set_item("ks_distance", ks)?;
    if keep_samples {
        d.set_item("samples", emp.samples)?;
    }
    Ok(d)
}

/// Upwind finite-difference solve; returns (centers, values, mass_drift).
#[pyfunction]
#[pyo3(signature = (p, phi, x_max, cells, t_end, cfl=0.9))]
fn pde_solve(
    p: &PyModelParams,
    phi: &PyInitialDensity,
    x_max: f64,
    cells: usize,
    t_end: f64,
    cfl: f64,
) -> PyResult<(Vec<f64>, Vec<f64>, f64)> {
    let grid = pde::GridConfig::uniform_with_cfl(x_max, cells, t_end, cfl, &p.inner).map_err(err)?;
    let field = pde::project_density(&phi.inner, &grid);
    let run = pde::solve_pde(&p.inner, &field, &grid).map_err(err)?;
    Ok((grid.centers().to_vec(), run.state.values, run.mass_drift))
}

#[pymodule]
fn _kfburst(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyModelParams>()?;
    m.add_class::<PySeriesConfig>()?;
    m.add_class::<PyInitialDensity>()?;
    m.add_class::<PyDensitySolution>()?;
    m.add_function(wrap_pyfunction!(singular_amplitude, m)?)?;
    m.add_function(wrap_pyfunction!(atom_location, m)?)?;
    m.add_function(wrap_pyfunction!(green_regular, m)?)?;
    m.add_function(wrap_pyfunction!(green_cdf, m)?)?;
    m.add_function(wrap_pyfunction!(stationary_density, m)?)?;
    m.add_function(wrap_pyfunction!(stationary_mode, m)?)?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(solution_mean, m)?)?;
    m.add_function(wrap_pyfunction!(solution_cdf, m)?)?;
    m.add_function(wrap_pyfunction!(closed_form_solution, m)?)?;
    m.add_function(wrap_pyfunction!(laplace_image, m)?)?;
    m.add_function(wrap_pyfunction!(laplace_green_regular, m)?)?;
    m.add_function(wrap_pyfunction!(mc_run, m)?)?;
    m.add_function(wrap_pyfunction!(pde_solve, m)?)?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    Ok(())
}
