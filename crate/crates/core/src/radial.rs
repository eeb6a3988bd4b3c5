//! Zernike radial polynomials `R_nm(rho)`.
//!
//! Three evaluation routes are provided:
//!
//! * [`RadialMethod::Direct`]: the alternating factorial sum, evaluated in
//!   double-double arithmetic. Accurate at low orders, it degrades as the
//!   monomial coefficients grow exponentially with `n`.
//! * [`RadialMethod::Fft`]: the discrete cosine identity
//!   `R_nm(rho) = (1/N) sum_k U_n(rho cos(2 pi k / N)) cos(2 pi m k / N)` with
//!   `N >= 2n + 1`, where `U_n` is the Chebyshev polynomial of the second kind.
//!   One transform of the node samples yields every repetition of an order.
//! * [`RadialMethod::QRecursive`]: the repetition-descending recurrence seeded
//!   by `R_nn` and `R_{n,n-2}`.
//!
//! Tables are stored in the flat pair layout of [`crate::pairs`].

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};
use twofloat::TwoFloat;

use crate::error::{Result, ZernikeError};
use crate::pairs::{order_offset, pair_count, pair_index, repetitions};

/// Orders above this are refused by the direct factorial sum.
pub const DIRECT_MAX_ORDER: u32 = 1000;

/// Below this `|sin v|` the Chebyshev closed form switches to its endpoint limit.
const SIN_GUARD: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RadialMethod {
    #[serde(rename = "direct")]
    Direct,
    #[serde(rename = "fft")]
    Fft,
    #[serde(rename = "qrec")]
    QRecursive,
}

impl RadialMethod {
    pub const ALL: [RadialMethod; 3] = [
        RadialMethod::Direct,
        RadialMethod::Fft,
        RadialMethod::QRecursive,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            RadialMethod::Direct => "direct",
            RadialMethod::Fft => "fft",
            RadialMethod::QRecursive => "qrec",
        }
    }
}

impl fmt::Display for RadialMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RadialMethod {
    type Err = ZernikeError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "direct" => Ok(RadialMethod::Direct),
            "fft" => Ok(RadialMethod::Fft),
            "qrec" | "qrecursive" | "q-recursive" => Ok(RadialMethod::QRecursive),
            other => Err(ZernikeError::param(format!(
                "unknown radial method '{other}' (expected fft, direct or qrec)"
            ))),
        }
    }
}

fn check_rho(rho: f64) -> Result<()> {
    if (0.0..=1.0).contains(&rho) {
        Ok(())
    } else {
        Err(ZernikeError::param(format!("radius {rho} outside [0, 1]")))
    }
}

fn check_pair(n: u32, m: i32) -> Result<u32> {
    let m = m.unsigned_abs();
    if m > n || (n - m) % 2 != 0 {
        return Err(ZernikeError::param(format!(
            "invalid pair (n={n}, m={m}): need |m| <= n and n - |m| even"
        )));
    }
    Ok(m)
}

// ---------------------------------------------------------------------------
// Direct factorial sum

/// Coefficients of `R_nm` as a polynomial in `t = rho^2`, scaled by `rho^m`.
#[derive(Debug, Clone)]
struct DirectPoly {
    m: u32,
    /// `coeffs[s]` multiplies `rho^(n - 2s)`; Horner runs from `s = 0`.
    coeffs: Vec<TwoFloat>,
}

impl DirectPoly {
    fn new(n: u32, m: u32) -> Result<Self> {
        let overflow = ZernikeError::Overflow {
            order: n,
            limit: DIRECT_MAX_ORDER,
        };
        if n > DIRECT_MAX_ORDER {
            return Err(overflow);
        }
        let a = (n - m) / 2;
        let b = (n + m) / 2;

        // s = 0 term: n! / (a! b!) = prod_{i=1..a} (b + i) / i
        let mut c = TwoFloat::from(1.0);
        for i in 1..=a {
            c = c * f64::from(b + i) / f64::from(i);
        }

        let mut coeffs = Vec::with_capacity(a as usize + 1);
        for s in 0..=a {
            if !c.hi().is_finite() {
                return Err(overflow);
            }
            coeffs.push(c);
            if s < a {
                let num = f64::from(a - s) * f64::from(b - s);
                let den = f64::from(s + 1) * f64::from(n - s);
                c = -(c * num / den);
            }
        }
        Ok(Self { m, coeffs })
    }

    fn eval(&self, rho: f64) -> f64 {
        let t = TwoFloat::new_mul(rho, rho);
        let mut acc = self.coeffs[0];
        for &c in &self.coeffs[1..] {
            acc = acc * t + c;
        }
        acc.hi() * rho.powi(self.m as i32)
    }
}

/// Direct factorial sum for `R_nm(rho)`; `R_{n,-m} = R_{n,m}`.
pub fn zrp_direct(n: u32, m: i32, rho: f64) -> Result<f64> {
    let m = check_pair(n, m)?;
    check_rho(rho)?;
    Ok(DirectPoly::new(n, m)?.eval(rho))
}

// ---------------------------------------------------------------------------
// Chebyshev polynomials of the second kind

/// `U_n(x) = sin((n+1)v) / sin(v)` with `x = cos(v)`.
///
/// When `|sin v|` drops below `1e-12` the analytic limit `(n+1) sign(x)^n`
/// is returned. Negative `x` goes through `U_n(-x) = (-1)^n U_n(x)`, since
/// `acos` near `-1` keeps only a few digits of the small angle `pi - v`.
pub fn chebyshev_u(n: u32, x: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&x) {
        return Err(ZernikeError::Domain(x));
    }
    let sign = if x < 0.0 && n % 2 == 1 { -1.0 } else { 1.0 };
    let v = x.abs().acos();
    let s = v.sin();
    let k = f64::from(n) + 1.0;
    if s < SIN_GUARD {
        return Ok(sign * k);
    }
    Ok(sign * (k * v).sin() / s)
}

/// `U_n(x)` by the ascending three-term recurrence `U_{k+1} = 2x U_k - U_{k-1}`.
pub fn chebyshev_u_recurrence(n: u32, x: f64) -> f64 {
    let (mut prev, mut cur) = (0.0, 1.0);
    for _ in 0..n {
        let next = 2.0 * x * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

// ---------------------------------------------------------------------------
// FFT route

/// Smallest 5-smooth length `>= 2 n_max + 1`.
pub fn transform_len(n_max: u32) -> usize {
    let min = 2 * n_max as usize + 1;
    (min..)
        .find(|&len| {
            let mut r = len;
            for p in [2, 3, 5] {
                while r % p == 0 {
                    r /= p;
                }
            }
            r == 1
        })
        .expect("5-smooth numbers are unbounded")
}

fn node_cosines(len: usize) -> Vec<f64> {
    (0..len)
        .map(|k| (2.0 * PI * k as f64 / len as f64).cos())
        .collect()
}

/// All repetitions of order `n` at `rho` from one length-`len` transform.
///
/// The result is indexed by `m = 0..=n`; entries with `n - m` odd are zero.
pub fn zrp_fft(n: u32, rho: f64, len: usize) -> Result<Vec<f64>> {
    check_rho(rho)?;
    let min = 2 * n as usize + 1;
    if len < min {
        return Err(ZernikeError::Aliasing { len, order: n, min });
    }
    let fft = FftPlanner::new().plan_fft_forward(len);
    let mut buf: Vec<Complex64> = node_cosines(len)
        .into_iter()
        .map(|c| Complex64::new(chebyshev_u_recurrence(n, rho * c), 0.0))
        .collect();
    fft.process(&mut buf);
    let scale = 1.0 / len as f64;
    Ok((0..=n)
        .map(|m| {
            if (n - m) % 2 == 0 {
                buf[m as usize].re * scale
            } else {
                0.0
            }
        })
        .collect())
}

/// Shared transform plan and node cosines for every order up to `n_max`.
struct FftBank {
    len: usize,
    nodes: Vec<f64>,
    fft: Arc<dyn Fft<f64>>,
}

impl FftBank {
    fn new(n_max: u32) -> Self {
        let len = transform_len(n_max);
        Self {
            len,
            nodes: node_cosines(len),
            fft: FftPlanner::new().plan_fft_forward(len),
        }
    }

    /// Fills every pair up to `n_max`.
    ///
    /// Orders `2b` and `2b + 1` share one complex transform: both sample
    /// vectors are real and even in `k`, so their spectra are real and land
    /// in the real and imaginary parts respectively.
    fn fill_row(&self, n_max: u32, rho: f64, row: &mut [f64], scratch: &mut Scratch) {
        let len = self.len;
        let blocks = n_max as usize / 2 + 1;
        scratch.prepare(blocks * len, self.fft.get_inplace_scratch_len(), len);
        let Scratch {
            buf,
            fft: fft_scratch,
            x,
            prev,
            cur,
        } = scratch;

        for (((xk, p), c), &node) in x.iter_mut().zip(prev.iter_mut()).zip(cur.iter_mut()).zip(&self.nodes) {
            *xk = rho * node;
            *p = 0.0;
            *c = 1.0;
        }

        for n in 0..=n_max as usize {
            let block = &mut buf[(n / 2) * len..(n / 2 + 1) * len];
            if n % 2 == 0 {
                for (z, &u) in block.iter_mut().zip(cur.iter()) {
                    *z = Complex64::new(u, 0.0);
                }
            } else {
                for (z, &u) in block.iter_mut().zip(cur.iter()) {
                    z.im = u;
                }
            }
            for ((p, c), &xk) in prev.iter_mut().zip(cur.iter_mut()).zip(x.iter()) {
                let next = 2.0 * xk * *c - *p;
                *p = *c;
                *c = next;
            }
        }

        self.fft.process_with_scratch(buf, fft_scratch);

        let scale = 1.0 / len as f64;
        for n in 0..=n_max {
            let block = &buf[(n as usize / 2) * len..];
            let off = order_offset(n);
            for (j, m) in repetitions(n).enumerate() {
                let z = block[m as usize];
                row[off + j] = if n % 2 == 0 { z.re } else { z.im } * scale;
            }
        }
    }

    /// Repetitions of a single order `n` (pair layout within the order).
    fn fill_order(&self, n: u32, rho: f64, out: &mut [f64], scratch: &mut Scratch) {
        let len = self.len;
        scratch.prepare(len, self.fft.get_inplace_scratch_len(), len);
        for (z, &node) in scratch.buf.iter_mut().zip(&self.nodes) {
            *z = Complex64::new(chebyshev_u_recurrence(n, rho * node), 0.0);
        }
        self.fft.process_with_scratch(&mut scratch.buf, &mut scratch.fft);
        let scale = 1.0 / len as f64;
        for (j, m) in repetitions(n).enumerate() {
            out[j] = scratch.buf[m as usize].re * scale;
        }
    }
}

/// Per-thread work buffers for radial evaluation.
#[derive(Default)]
pub(crate) struct Scratch {
    buf: Vec<Complex64>,
    fft: Vec<Complex64>,
    x: Vec<f64>,
    prev: Vec<f64>,
    cur: Vec<f64>,
}

impl Scratch {
    fn prepare(&mut self, buf_len: usize, fft_len: usize, nodes: usize) {
        self.buf.resize(buf_len, Complex64::default());
        self.fft.resize(fft_len, Complex64::default());
        self.x.resize(nodes, 0.0);
        self.prev.resize(nodes, 0.0);
        self.cur.resize(nodes, 0.0);
    }
}

// ---------------------------------------------------------------------------
// q-recursive route

/// Order `n` at `rho` into `out` (length `n / 2 + 1`, ascending `m`).
fn qrec_order_into(n: u32, rho: f64, out: &mut [f64]) {
    let last = out.len() - 1;
    if rho == 0.0 {
        for (j, m) in repetitions(n).enumerate() {
            out[j] = match (m, (n / 2) % 2) {
                (0, 0) => 1.0,
                (0, _) => -1.0,
                _ => 0.0,
            };
        }
        return;
    }
    let nf = f64::from(n);
    let rho_n = rho.powi(n as i32);
    out[last] = rho_n;
    if n < 2 {
        return;
    }
    out[last - 1] = nf * rho_n - (nf - 1.0) * rho.powi(n as i32 - 2);

    let inv_rho2 = 1.0 / (rho * rho);
    for j in (0..last - 1).rev() {
        let m = f64::from(n % 2 + 2 * j as u32);
        let h3 = -4.0 * (m + 2.0) * (m + 1.0) / ((nf + m + 2.0) * (nf - m));
        let h2 = h3 * (nf + m + 4.0) * (nf - m - 2.0) / (4.0 * (m + 3.0)) + (m + 2.0);
        let h1 = (m + 4.0) * (m + 3.0) / 2.0 - (m + 4.0) * h2
            + h3 * (nf + m + 6.0) * (nf - m - 4.0) / 8.0;
        out[j] = h1 * out[j + 2] + (h2 + h3 * inv_rho2) * out[j + 1];
    }
}

/// q-recursive values of order `n` on each radius, indexed `[radius][m]`
/// with zeros where `n - m` is odd.
pub fn zrp_qrecursive(n: u32, radii: &[f64]) -> Result<Vec<Vec<f64>>> {
    radii.iter().try_for_each(|&r| check_rho(r))?;
    let mut tmp = vec![0.0; n as usize / 2 + 1];
    Ok(radii
        .iter()
        .map(|&rho| {
            qrec_order_into(n, rho, &mut tmp);
            let mut row = vec![0.0; n as usize + 1];
            for (j, m) in repetitions(n).enumerate() {
                row[m as usize] = tmp[j];
            }
            row
        })
        .collect())
}

// ---------------------------------------------------------------------------
// Method dispatch and tables

/// A radial evaluator prepared for all orders up to `n_max`.
pub(crate) struct RadialEvaluator {
    method: RadialMethod,
    n_max: u32,
    kind: EvaluatorKind,
}

enum EvaluatorKind {
    Direct(Vec<DirectPoly>),
    Fft(FftBank),
    QRecursive,
}

impl RadialEvaluator {
    pub(crate) fn new(method: RadialMethod, n_max: u32) -> Result<Self> {
        let kind = match method {
            RadialMethod::Direct => {
                if n_max > DIRECT_MAX_ORDER {
                    return Err(ZernikeError::Overflow {
                        order: n_max,
                        limit: DIRECT_MAX_ORDER,
                    });
                }
                let polys = crate::pairs::pairs(n_max)
                    .map(|(n, m)| DirectPoly::new(n, m))
                    .collect::<Result<Vec<_>>>()?;
                EvaluatorKind::Direct(polys)
            }
            RadialMethod::Fft => EvaluatorKind::Fft(FftBank::new(n_max)),
            RadialMethod::QRecursive => EvaluatorKind::QRecursive,
        };
        Ok(Self {
            method,
            n_max,
            kind,
        })
    }

    pub(crate) fn n_max(&self) -> u32 {
        self.n_max
    }

    /// Every pair up to `n_max` at `rho`, in pair layout.
    pub(crate) fn fill_row(&self, rho: f64, row: &mut [f64], scratch: &mut Scratch) {
        match &self.kind {
            EvaluatorKind::Direct(polys) => {
                for (v, p) in row.iter_mut().zip(polys) {
                    *v = p.eval(rho);
                }
            }
            EvaluatorKind::Fft(bank) => bank.fill_row(self.n_max, rho, row, scratch),
            EvaluatorKind::QRecursive => {
                for n in 0..=self.n_max {
                    let off = order_offset(n);
                    qrec_order_into(n, rho, &mut row[off..off + n as usize / 2 + 1]);
                }
            }
        }
    }

    /// Repetitions of order `n <= n_max` at `rho`.
    pub(crate) fn fill_order(&self, n: u32, rho: f64, out: &mut [f64], scratch: &mut Scratch) {
        debug_assert!(n <= self.n_max);
        match &self.kind {
            EvaluatorKind::Direct(polys) => {
                let off = order_offset(n);
                for (j, v) in out.iter_mut().enumerate() {
                    *v = polys[off + j].eval(rho);
                }
            }
            EvaluatorKind::Fft(bank) => bank.fill_order(n, rho, out, scratch),
            EvaluatorKind::QRecursive => qrec_order_into(n, rho, out),
        }
    }

    /// Table over `radii`, optionally parallel over radii. Non-finite values are an error.
    pub(crate) fn table(&self, radii: &[f64], parallel: bool) -> Result<RadialTable> {
        let table = self.table_raw(radii, parallel);
        let stride = pair_count(self.n_max);
        if let Some(pos) = table.values.iter().position(|v| !v.is_finite()) {
            let pair = pos % stride;
            let order = (0..=self.n_max)
                .rev()
                .find(|&n| order_offset(n) <= pair)
                .unwrap_or(0);
            return Err(ZernikeError::NonFinite {
                method: self.method.as_str(),
                order,
            });
        }
        Ok(table)
    }

    /// Table over `radii` without the finiteness check.
    pub(crate) fn table_raw(&self, radii: &[f64], parallel: bool) -> RadialTable {
        let stride = pair_count(self.n_max);
        let mut values = vec![0.0; stride * radii.len()];
        if parallel {
            values
                .par_chunks_mut(stride)
                .zip(radii.par_iter())
                .for_each_init(Scratch::default, |scratch, (row, &rho)| {
                    self.fill_row(rho, row, scratch)
                });
        } else {
            let mut scratch = Scratch::default();
            for (row, &rho) in values.chunks_mut(stride).zip(radii) {
                self.fill_row(rho, row, &mut scratch);
            }
        }
        RadialTable {
            method: self.method,
            n_max: self.n_max,
            radii: radii.to_vec(),
            values,
        }
    }
}

/// Precomputed `R_nm` for every valid pair up to `n_max` on a list of radii.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialTable {
    method: RadialMethod,
    n_max: u32,
    radii: Vec<f64>,
    /// Radius-major; each row holds `pair_count(n_max)` values.
    values: Vec<f64>,
}

impl RadialTable {
    pub fn method(&self) -> RadialMethod {
        self.method
    }

    pub fn n_max(&self) -> u32 {
        self.n_max
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn pair_count(&self) -> usize {
        pair_count(self.n_max)
    }

    /// `R_nm(radii[i])`, or `None` for an invalid pair or index.
    pub fn get(&self, n: u32, m: u32, i: usize) -> Option<f64> {
        if n > self.n_max || m > n || (n - m) % 2 != 0 || i >= self.radii.len() {
            return None;
        }
        Some(self.values[i * self.pair_count() + pair_index(n, m)])
    }

    /// All pairs at `radii[i]` in pair layout.
    pub fn row(&self, i: usize) -> &[f64] {
        let stride = self.pair_count();
        &self.values[i * stride..(i + 1) * stride]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// Builds a [`RadialTable`] for every valid pair up to `n_max`.
pub fn radial_table(n_max: u32, radii: &[f64], method: RadialMethod) -> Result<RadialTable> {
    radii.iter().try_for_each(|&r| check_rho(r))?;
    RadialEvaluator::new(method, n_max)?.table(radii, true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn direct_examples() {
        assert_eq!(zrp_direct(0, 0, 0.7).unwrap(), 1.0);
        assert!((zrp_direct(2, 2, 0.5).unwrap() - 0.25).abs() < 1e-15);
        assert!((zrp_direct(2, 0, 0.5).unwrap() + 0.5).abs() < 1e-15);
        assert!((zrp_direct(4, 0, 1.0).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(
            zrp_direct(5, -3, 0.3).unwrap(),
            zrp_direct(5, 3, 0.3).unwrap()
        );
    }

    #[test]
    fn direct_rejects_bad_pairs() {
        assert!(matches!(zrp_direct(3, 0, 0.5), Err(ZernikeError::Parameter(_))));
        assert!(matches!(zrp_direct(2, 4, 0.5), Err(ZernikeError::Parameter(_))));
        assert!(matches!(zrp_direct(2, 0, 1.5), Err(ZernikeError::Parameter(_))));
        assert!(matches!(
            zrp_direct(1002, 0, 0.5),
            Err(ZernikeError::Overflow { .. })
        ));
        // coefficients of R_{1000,0} exceed the f64 range
        assert!(matches!(
            zrp_direct(1000, 0, 0.5),
            Err(ZernikeError::Overflow { .. })
        ));
    }

    #[test]
    fn chebyshev_examples() {
        assert_eq!(chebyshev_u(0, 0.3).unwrap(), 1.0);
        assert!((chebyshev_u(1, 0.5).unwrap() - 1.0).abs() < 1e-14);
        assert_eq!(chebyshev_u(5, 1.0).unwrap(), 6.0);
        assert_eq!(chebyshev_u(5, -1.0).unwrap(), -6.0);
        assert_eq!(chebyshev_u(4, -1.0).unwrap(), 5.0);
        assert!(matches!(chebyshev_u(2, 1.0001), Err(ZernikeError::Domain(_))));
        assert!(matches!(chebyshev_u(2, f64::NAN), Err(ZernikeError::Domain(_))));
    }

    #[test]
    fn fft_examples() {
        for len in 1..6 {
            let r = zrp_fft(0, 0.42, len).unwrap();
            assert_eq!(r.len(), 1);
            assert!((r[0] - 1.0).abs() < 1e-15);
        }
        let r = zrp_fft(2, 0.5, 5).unwrap();
        assert!((r[0] + 0.5).abs() <= 1e-10);
        assert_eq!(r[1], 0.0);
        assert!((r[2] - 0.25).abs() <= 1e-10);
    }

    #[test]
    fn fft_refuses_aliasing() {
        match zrp_fft(10, 0.5, 20) {
            Err(ZernikeError::Aliasing { len, order, min }) => {
                assert_eq!((len, order, min), (20, 10, 21));
            }
            other => panic!("expected aliasing error, got {other:?}"),
        }
        assert!(zrp_fft(10, 0.5, 21).is_ok());
    }

    #[test]
    fn transform_lengths_are_smooth_and_long_enough() {
        assert_eq!(transform_len(0), 1);
        assert_eq!(transform_len(2), 5);
        assert_eq!(transform_len(10), 24);
        assert_eq!(transform_len(500), 1024);
        for n in 0..300 {
            assert!(transform_len(n) >= 2 * n as usize + 1);
        }
    }

    #[test]
    fn qrecursive_examples() {
        let v = zrp_qrecursive(2, &[0.5]).unwrap();
        assert_eq!(v[0][2], 0.25);
        let v = zrp_qrecursive(4, &[0.0]).unwrap();
        assert_eq!(v[0], vec![1.0, 0.0, 0.0, 0.0, 0.0]);
        let v = zrp_qrecursive(6, &[0.0]).unwrap();
        assert_eq!(v[0][0], -1.0);
    }

    #[test]
    fn table_rows_match_single_order_paths() {
        let radii = [0.0, 0.13, 0.5, 0.77, 1.0];
        for method in RadialMethod::ALL {
            let table = radial_table(12, &radii, method).unwrap();
            let eval = RadialEvaluator::new(method, 12).unwrap();
            let mut scratch = Scratch::default();
            for (i, &rho) in radii.iter().enumerate() {
                for n in 0..=12 {
                    let mut out = vec![0.0; n as usize / 2 + 1];
                    eval.fill_order(n, rho, &mut out, &mut scratch);
                    for (j, m) in repetitions(n).enumerate() {
                        let t = table.get(n, m, i).unwrap();
                        assert!((t - out[j]).abs() < 1e-13, "{method} n={n} m={m}");
                    }
                }
            }
        }
    }

    #[test]
    fn table_lookup_rejects_invalid_pairs() {
        let table = radial_table(4, &[0.5], RadialMethod::Fft).unwrap();
        assert!(table.get(4, 1, 0).is_none());
        assert!(table.get(5, 1, 0).is_none());
        assert!(table.get(4, 2, 1).is_none());
        assert_eq!(table.row(0).len(), table.pair_count());
    }

    #[test]
    fn table_rejects_radii_outside_disc() {
        assert!(radial_table(4, &[0.5, 1.2], RadialMethod::Fft).is_err());
        assert!(radial_table(4, &[-0.1], RadialMethod::QRecursive).is_err());
    }

    #[test]
    fn method_names_round_trip() {
        for m in RadialMethod::ALL {
            assert_eq!(m.as_str().parse::<RadialMethod>().unwrap(), m);
        }
        assert!("gauss".parse::<RadialMethod>().is_err());
    }
}
