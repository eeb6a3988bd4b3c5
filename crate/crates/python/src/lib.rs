use ndarray::Array2;
use num_complex::Complex64;
use pyo3::exceptions::{PyArithmeticError, PyOSError, PyValueError};
use pyo3::prelude::*;
use zernike_core::dedup::SignatureConfig;
use zernike_core::io::MomentFile;
use zernike_core::{MomentOptions, RadialMethod, ZernikeError};

fn to_py(e: ZernikeError) -> PyErr {
    match e.exit_code() {
        1 => PyValueError::new_err(e.to_string()),
        2 => PyOSError::new_err(e.to_string()),
        _ => PyArithmeticError::new_err(e.to_string()),
    }
}

fn method(name: &str) -> PyResult<RadialMethod> {
    name.parse().map_err(to_py)
}

fn to_array(rows: Vec<Vec<f64>>) -> PyResult<Array2<f64>> {
    let h = rows.len();
    let w = rows.first().map_or(0, Vec::len);
    if h == 0 || w == 0 || rows.iter().any(|r| r.len() != w) {
        return Err(PyValueError::new_err("expected a non-empty rectangular list of rows"));
    }
    Ok(Array2::from_shape_vec((h, w), rows.into_iter().flatten().collect()).expect("shape checked"))
}

fn to_rows(a: &Array2<f64>) -> Vec<Vec<f64>> {
    a.rows().into_iter().map(|r| r.to_vec()).collect()
}

/// Zernike coefficients of one image band.
#[pyclass(name = "MomentSet", module = "zernike_fft", frozen)]
struct PyMomentSet {
    inner: zernike_core::MomentSet,
}

#[pymethods]
impl PyMomentSet {
    #[getter]
    fn n_max(&self) -> u32 {
        self.inner.n_max()
    }

    #[getter]
    fn method(&self) -> &'static str {
        self.inner.method().as_str()
    }

    #[getter]
    fn neumann(&self) -> bool {
        self.inner.neumann()
    }

    /// `(min, max)` of the source band.
    #[getter]
    fn band_range(&self) -> (f64, f64) {
        self.inner.band_stats()
    }

    /// Side of the square embedding grid.
    #[getter]
    fn grid_size(&self) -> usize {
        self.inner.grid().size
    }

    /// `Z_nm`; negative `m` returns the conjugate.
    fn get(&self, n: u32, m: i32) -> PyResult<Complex64> {
        self.inner
            .get(n, m)
            .ok_or_else(|| PyValueError::new_err(format!("no coefficient for (n={n}, m={m})")))
    }

    /// `[(n, m, Z_nm)]` for `m >= 0`, ascending.
    fn coefficients(&self) -> Vec<(u32, u32, Complex64)> {
        self.inner.iter().collect()
    }

    fn __len__(&self) -> usize {
        self.inner.coefficients().len()
    }

    fn __repr__(&self) -> String {
        format!(
            "MomentSet(n_max={}, method='{}', neumann={})",
            self.inner.n_max(),
            self.inner.method(),
            self.inner.neumann()
        )
    }

    fn to_json(&self) -> PyResult<String> {
        MomentFile::from_sets(std::slice::from_ref(&self.inner))
            .and_then(|f| f.to_json())
            .map_err(to_py)
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let mut sets = MomentFile::from_json(text)
            .and_then(|f| f.to_sets())
            .map_err(to_py)?;
        if sets.len() != 1 {
            return Err(PyValueError::new_err("moment file holds more than one band"));
        }
        Ok(Self { inner: sets.remove(0) })
    }
}

/// `R_nm(rho)` by the chosen route.
#[pyfunction]
#[pyo3(signature = (n, m, rho, method = "fft"))]
fn radial(n: u32, m: i32, rho: f64, method: &str) -> PyResult<f64> {
    let method = self::method(method)?;
    let table = zernike_core::radial_table(n, &[rho], method).map_err(to_py)?;
    let am = m.unsigned_abs();
    table
        .get(n, am, 0)
        .ok_or_else(|| PyValueError::new_err(format!("invalid pair (n={n}, m={m})")))
}

#[pyfunction]
#[pyo3(signature = (image, order, method = "fft", neumann = false, symmetry = false))]
fn compute_moments(
    py: Python<'_>,
    image: Vec<Vec<f64>>,
    order: u32,
    method: &str,
    neumann: bool,
    symmetry: bool,
) -> PyResult<PyMomentSet> {
    let band = to_array(image)?;
    let opts = MomentOptions {
        method: self::method(method)?,
        neumann,
        symmetry,
    };
    let inner = py
        .detach(|| {
            let grid = zernike_core::embed_image(band.view())?;
            zernike_core::compute_moments(&grid, order, opts)
        })
        .map_err(to_py)?;
    Ok(PyMomentSet { inner })
}

/// Reconstruction cropped to the original image window.
#[pyfunction]
#[pyo3(signature = (moments, order = None, normalize = true))]
fn reconstruct(py: Python<'_>, moments: &PyMomentSet, order: Option<u32>, normalize: bool) -> PyResult<Vec<Vec<f64>>> {
    let set = &moments.inner;
    let cap = order.unwrap_or(set.n_max());
    let band = py
        .detach(|| {
            let raw = zernike_core::reconstruct(set, cap)?.into_bands().remove(0);
            let band = if normalize {
                let (lo, hi) = set.band_stats();
                zernike_core::minmax_normalize(&raw, lo, hi)?
            } else {
                raw
            };
            Ok(zernike_core::crop(&band, &set.grid()))
        })
        .map_err(to_py)?;
    Ok(to_rows(&band))
}

/// Squared error over the whole image, normalized by peak value and pixel count.
///
/// The inputs are embedded first so that the sum runs over the unit disc.
#[pyfunction]
fn epsilon(original: Vec<Vec<f64>>, reconstructed: Vec<Vec<f64>>) -> PyResult<f64> {
    let (f, g) = (to_array(original)?, to_array(reconstructed)?);
    if f.dim() != g.dim() {
        return Err(PyValueError::new_err("image shapes differ"));
    }
    let fe = zernike_core::embed_image(f.view()).map_err(to_py)?;
    let ge = zernike_core::embed_image(g.view()).map_err(to_py)?;
    zernike_core::epsilon(fe.band().view(), ge.band().view()).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (method, order, grid_points = zernike_core::metrics::DEFAULT_GRID_POINTS))]
fn stability_qf(py: Python<'_>, method: &str, order: u32, grid_points: usize) -> PyResult<f64> {
    let method = self::method(method)?;
    py.detach(|| zernike_core::stability_qf(method, order, grid_points))
        .map_err(to_py)
}

/// Per-order signature hashes of a gray image.
#[pyfunction]
#[pyo3(signature = (image, orders = 8, decimals = 6))]
fn signature(image: Vec<Vec<f64>>, orders: u32, decimals: u32) -> PyResult<Vec<u64>> {
    let band = to_array(image)?;
    zernike_core::zm_signature(&[band.view()], SignatureConfig { orders, decimals }, 0)
        .map(|s| s.per_order)
        .map_err(to_py)
}

#[pymodule]
fn zernike_fft(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PyMomentSet>()?;
    m.add_function(wrap_pyfunction!(radial, m)?)?;
    m.add_function(wrap_pyfunction!(compute_moments, m)?)?;
    m.add_function(wrap_pyfunction!(reconstruct, m)?)?;
    m.add_function(wrap_pyfunction!(epsilon, m)?)?;
    m.add_function(wrap_pyfunction!(stability_qf, m)?)?;
    m.add_function(wrap_pyfunction!(signature, m)?)?;
    Ok(())
}
