//! Python bindings for `minkowski_lattice`.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use minkowski_lattice as ml;
use ml::configuration::Tolerances;
use ml::table::{sweep, sweep_csv_string, SweepOptions};

fn to_py(e: ml::Error) -> PyErr {
    match e {
        ml::Error::Domain(_) | ml::Error::OrderViolation { .. } => PyValueError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

type Pair = (f64, f64);

fn pair(v: ml::Vec2) -> Pair {
    (v.x, v.y)
}

/// Critical configuration of `2^m · D_p`.
#[pyclass(frozen, get_all, module = "minkowski_py")]
pub struct Configuration {
    p: f64,
    m: u32,
    tau_p: f64,
    sigma_p: f64,
    delta0: f64,
    delta1: f64,
    davis_constant: f64,
    class_name: String,
    branch: String,
    critical_determinant: f64,
    lattice_kind: String,
    a: Pair,
    b: Pair,
}

#[pymethods]
impl Configuration {
    #[new]
    #[pyo3(signature = (p, m = 0, tol = None))]
    fn new(p: f64, m: u32, tol: Option<f64>) -> PyResult<Self> {
        let mut t = Tolerances::default();
        if let Some(tol) = tol {
            t.root = tol;
        }
        let c = ml::CriticalConfiguration::with_tolerances(p, m, &t).map_err(to_py)?;
        Ok(Configuration {
            p,
            m,
            tau_p: c.constants.tau_p,
            sigma_p: c.constants.sigma_p,
            delta0: c.constants.delta0,
            delta1: c.constants.delta1,
            davis_constant: c.davis_constant,
            class_name: c.class.name().to_string(),
            branch: c.branch.name().to_string(),
            critical_determinant: c.critical_determinant,
            lattice_kind: c.kind().name().to_string(),
            a: pair(c.lattice.a()),
            b: pair(c.lattice.b()),
        })
    }

    /// The six contact points `±a, ±b, ±(a + b)` in counterclockwise order.
    fn contact_points(&self) -> PyResult<Vec<Pair>> {
        let basis = ml::LatticeBasis::new(self.a.into(), self.b.into()).map_err(to_py)?;
        Ok(ml::lattice::contact_points(&basis).into_iter().map(pair).collect())
    }

    fn __repr__(&self) -> String {
        format!(
            "Configuration(p={}, m={}, class={}, branch={}, delta={})",
            self.p, self.m, self.class_name, self.branch, self.critical_determinant
        )
    }
}

#[pyfunction]
fn davis_constant() -> f64 {
    ml::davis_constant()
}

#[pyfunction]
fn classify(p: f64) -> PyResult<String> {
    let p0 = ml::davis_constant();
    Ok(ml::classify(p, p0).map_err(to_py)?.name().to_string())
}

#[pyfunction]
#[pyo3(signature = (p, m = 0))]
fn critical_determinant(p: f64, m: u32) -> PyResult<f64> {
    Ok(ml::CriticalConfiguration::new(p, m).map_err(to_py)?.critical_determinant)
}

/// `(area, packing determinant, density)` of the optimal lattice packing of `2^m · D_p`.
#[pyfunction]
#[pyo3(signature = (p, m = 0))]
fn packing_density(p: f64, m: u32) -> PyResult<(f64, f64, f64)> {
    let r = ml::packing::packing_density(p, m).map_err(to_py)?;
    Ok((r.area, r.lattice.det(), r.density))
}

/// `(inscribed area, circumscribed area)`; the latter is `None` at `p = 1`.
#[pyfunction]
#[pyo3(signature = (p, m = 0))]
fn hexagon_areas(p: f64, m: u32) -> PyResult<(f64, Option<f64>)> {
    let inscribed = ml::hexagon::inscribed_hexagon(p, m).map_err(to_py)?.area;
    let circumscribed = if p > 1.0 {
        Some(ml::hexagon::circumscribed_hexagon(p, m).map_err(to_py)?.area)
    } else {
        None
    };
    Ok((inscribed, circumscribed))
}

/// `(σ*, τ*, Δ*)` minimizing the determinant over the moduli curve.
#[pyfunction]
#[pyo3(signature = (p, grid = 1000))]
fn oracle_min(p: f64, grid: usize) -> PyResult<(f64, f64, f64)> {
    let o = ml::moduli::oracle_min(p, grid).map_err(to_py)?;
    Ok((o.sigma_star, o.tau_star, o.delta_star))
}

#[pyfunction]
#[pyo3(signature = (p_min, p_max, steps, m = 0, oracle_grid = None))]
fn sweep_csv(p_min: f64, p_max: f64, steps: usize, m: u32, oracle_grid: Option<usize>) -> PyResult<String> {
    let mut opts = SweepOptions::new(p_min, p_max, steps);
    opts.m = m;
    opts.oracle_grid = oracle_grid;
    Ok(sweep_csv_string(&sweep(&opts).map_err(to_py)?))
}

#[pyfunction]
#[pyo3(signature = (kind, p, m = 0))]
fn render(kind: &str, p: f64, m: u32) -> PyResult<String> {
    let kind: ml::render::RenderKind = kind.parse().map_err(to_py)?;
    ml::render::render(kind, p, m).map_err(to_py)
}

/// `(member, level)`: the least `m` with the point in `2^m · D_p`.
#[pyfunction]
fn limit_membership(p: f64, x: f64, y: f64) -> PyResult<(bool, u32)> {
    let r = ml::direct::limit_membership(p, ml::Vec2::new(x, y)).map_err(to_py)?;
    Ok((r.member, r.level))
}

/// `(passed, report text)` of the invariant suite.
#[pyfunction]
#[pyo3(signature = (full = false))]
fn verify(full: bool) -> (bool, String) {
    let level = if full { ml::verify::VerifyLevel::Full } else { ml::verify::VerifyLevel::Fast };
    let report = ml::verify::run(&ml::verify::VerifyOptions::new(level));
    (report.passed(), report.to_text())
}

#[pymodule]
fn minkowski_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Configuration>()?;
    m.add_function(wrap_pyfunction!(davis_constant, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(critical_determinant, m)?)?;
    m.add_function(wrap_pyfunction!(packing_density, m)?)?;
    m.add_function(wrap_pyfunction!(hexagon_areas, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_min, m)?)?;
    m.add_function(wrap_pyfunction!(sweep_csv, m)?)?;
    m.add_function(wrap_pyfunction!(render, m)?)?;
    m.add_function(wrap_pyfunction!(limit_membership, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
