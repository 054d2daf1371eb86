//! Fourier representation of periodic fields on the flat torus `[0, 2π]^dim`.
//!
//! Coefficients follow the convention `c_k = N^-dim Σ_x f(x) e^{-i k·x}`, so a
//! field is recovered as `f(x) = Σ_k c_k e^{i k·x}`. Arrays are stored in
//! row-major wavevector order with the first axis varying fastest; the array
//! index `m` along an axis maps to the wavenumber `m` for `m <= n/2` and to
//! `m - n` otherwise.
//!
//! The Nyquist plane (`|k_i| = n/2` on any axis) has no well-defined real
//! derivative. Every differential or projection operator writes zero there.
//! The forward transform itself is an exact DFT.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, OnceLock, RwLock};

use num_complex::Complex64;
use rand::Rng;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Uniform periodic grid with `n_points` samples per axis over `[0, 2π)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TorusGrid {
    dim: usize,
    n: usize,
}

impl fmt::Display for TorusGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.n, self.dim)
    }
}

impl TorusGrid {
    pub fn new(dim: usize, n_points: usize) -> Result<Self> {
        if !(2..=3).contains(&dim) {
            return Err(Error::InvalidGrid(format!("dim must be 2 or 3, got {dim}")));
        }
        if n_points < 8 || !n_points.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "n_points must be a power of two >= 8, got {n_points}"
            )));
        }
        Ok(Self { dim, n: n_points })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_points(&self) -> usize {
        self.n
    }

    /// Total number of modes (equivalently grid points).
    pub fn len(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Largest retained wavenumber per axis under the 2/3 rule.
    pub fn cutoff(&self) -> usize {
        self.n / 3
    }

    /// Physical volume `(2π)^dim`.
    pub fn volume(&self) -> f64 {
        (2.0 * PI).powi(self.dim as i32)
    }

    /// Signed wavenumber for array position `m` along one axis.
    pub fn wavenumber(&self, m: usize) -> i64 {
        let n = self.n as i64;
        let m = m as i64;
        if m <= n / 2 {
            m
        } else {
            m - n
        }
    }

    /// Signed wavevector at a flat index; trailing axes beyond `dim` are zero.
    pub fn wavevector(&self, idx: usize) -> [i64; 3] {
        let mut k = [0i64; 3];
        let mut rest = idx;
        for ka in k.iter_mut().take(self.dim) {
            *ka = self.wavenumber(rest % self.n);
            rest /= self.n;
        }
        k
    }

    /// Flat index of a wavevector, or `None` if outside the representable range.
    pub fn index_of(&self, k: &[i64]) -> Option<usize> {
        if k.len() != self.dim {
            return None;
        }
        let n = self.n as i64;
        let mut idx = 0usize;
        let mut stride = 1usize;
        for &ka in k {
            if ka <= -n / 2 || ka > n / 2 {
                return None;
            }
            let m = if ka < 0 { ka + n } else { ka } as usize;
            idx += m * stride;
            stride *= self.n;
        }
        Some(idx)
    }

    /// Physical coordinate of a grid point along each axis.
    pub fn point(&self, idx: usize) -> [f64; 3] {
        let h = 2.0 * PI / self.n as f64;
        let mut x = [0.0; 3];
        let mut rest = idx;
        for xa in x.iter_mut().take(self.dim) {
            *xa = (rest % self.n) as f64 * h;
            rest /= self.n;
        }
        x
    }

    pub(crate) fn tables(&self) -> Arc<GridTables> {
        static CACHE: OnceLock<RwLock<HashMap<TorusGrid, Arc<GridTables>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
        if let Some(t) = cache.read().expect("plan cache poisoned").get(self) {
            return Arc::clone(t);
        }
        let mut w = cache.write().expect("plan cache poisoned");
        Arc::clone(
            w.entry(*self)
                .or_insert_with(|| Arc::new(GridTables::build(*self))),
        )
    }

    fn check_same(&self, other: &TorusGrid) -> Result<()> {
        if self != other {
            return Err(Error::GridMismatch {
                left: self.to_string(),
                right: other.to_string(),
            });
        }
        Ok(())
    }
}

/// Per-grid lookup tables and FFT plans, shared read-only across threads.
pub(crate) struct GridTables {
    fwd: Arc<dyn Fft<f64>>,
    inv: Arc<dyn Fft<f64>>,
    pub(crate) k: Vec<[f64; 3]>,
    pub(crate) k2: Vec<f64>,
    pub(crate) keep: Vec<bool>,
    pub(crate) nyquist: Vec<bool>,
}

impl GridTables {
    fn build(grid: TorusGrid) -> Self {
        let mut planner = FftPlanner::new();
        let fwd = planner.plan_fft_forward(grid.n);
        let inv = planner.plan_fft_inverse(grid.n);
        let half = (grid.n / 2) as i64;
        let cut = grid.cutoff() as i64;
        let len = grid.len();
        let mut k = Vec::with_capacity(len);
        let mut k2 = Vec::with_capacity(len);
        let mut keep = Vec::with_capacity(len);
        let mut nyquist = Vec::with_capacity(len);
        for idx in 0..len {
            let kv = grid.wavevector(idx);
            let kf = [kv[0] as f64, kv[1] as f64, kv[2] as f64];
            k2.push(kf.iter().map(|x| x * x).sum());
            k.push(kf);
            keep.push(kv.iter().all(|ka| ka.abs() <= cut));
            nyquist.push(kv.iter().take(grid.dim).any(|&ka| ka == half));
        }
        Self {
            fwd,
            inv,
            k,
            k2,
            keep,
            nyquist,
        }
    }
}

fn fft_nd(grid: &TorusGrid, data: &mut [Complex64], inverse: bool) {
    let tables = grid.tables();
    let plan = if inverse { &tables.inv } else { &tables.fwd };
    let n = grid.n;
    let len = data.len();
    // axis 0 is contiguous
    plan.process(data);
    let mut lines = vec![ZERO; len];
    for axis in 1..grid.dim {
        let stride = n.pow(axis as u32);
        let block = stride * n;
        let mut line = 0;
        for outer in (0..len).step_by(block) {
            for inner in 0..stride {
                let base = outer + inner;
                for m in 0..n {
                    lines[line * n + m] = data[base + m * stride];
                }
                line += 1;
            }
        }
        plan.process(&mut lines);
        line = 0;
        for outer in (0..len).step_by(block) {
            for inner in 0..stride {
                let base = outer + inner;
                for m in 0..n {
                    data[base + m * stride] = lines[line * n + m];
                }
                line += 1;
            }
        }
    }
}

/// One scalar function on the torus, stored as Fourier coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct Scalar {
    grid: TorusGrid,
    coeffs: Vec<Complex64>,
}

impl Scalar {
    pub fn zeros(grid: TorusGrid) -> Self {
        Self {
            grid,
            coeffs: vec![ZERO; grid.len()],
        }
    }

    pub fn from_coeffs(grid: TorusGrid, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::Shape {
                expected: grid.len(),
                got: coeffs.len(),
            });
        }
        Ok(Self { grid, coeffs })
    }

    /// Forward transform of real samples.
    pub fn from_physical(grid: TorusGrid, samples: &[f64]) -> Result<Self> {
        if samples.len() != grid.len() {
            return Err(Error::Shape {
                expected: grid.len(),
                got: samples.len(),
            });
        }
        let mut data: Vec<Complex64> = samples.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        fft_nd(&grid, &mut data, false);
        let scale = 1.0 / grid.len() as f64;
        data.iter_mut().for_each(|c| *c *= scale);
        Ok(Self { grid, coeffs: data })
    }

    /// Build from a function of the grid coordinates.
    pub fn from_fn(grid: TorusGrid, f: impl Fn([f64; 3]) -> f64) -> Self {
        let samples: Vec<f64> = (0..grid.len()).map(|i| f(grid.point(i))).collect();
        Self::from_physical(grid, &samples).expect("sample count matches grid")
    }

    pub fn to_physical(&self) -> Vec<f64> {
        self.to_physical_complex()
            .into_iter()
            .map(|c| c.re)
            .collect()
    }

    /// Inverse transform keeping the imaginary part, which is zero up to
    /// roundoff for a real field.
    pub fn to_physical_complex(&self) -> Vec<Complex64> {
        let mut data = self.coeffs.clone();
        fft_nd(&self.grid, &mut data, true);
        data
    }

    pub fn grid(&self) -> TorusGrid {
        self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Coefficient at wavevector `k`; zero if `k` is not representable.
    pub fn mode(&self, k: &[i64]) -> Complex64 {
        self.grid.index_of(k).map_or(ZERO, |i| self.coeffs[i])
    }

    /// Set the coefficient at `k` and its conjugate partner at `-k`.
    pub fn set_mode_real(&mut self, k: &[i64], c: Complex64) -> Result<()> {
        let idx = self.grid.index_of(k).ok_or(Error::IndexOutOfRange {
            what: "wavevector",
            index: k
                .iter()
                .map(|x| x.unsigned_abs() as usize)
                .max()
                .unwrap_or(0),
            limit: self.grid.n / 2,
        })?;
        let neg: Vec<i64> = k.iter().map(|x| -x).collect();
        match self.grid.index_of(&neg) {
            Some(j) if j == idx => self.coeffs[idx] = Complex64::new(c.re, 0.0),
            Some(j) => {
                self.coeffs[idx] = c;
                self.coeffs[j] = c.conj();
            }
            // Nyquist partner is not representable; such modes are dropped
            None => self.coeffs[idx] = ZERO,
        }
        Ok(())
    }

    /// Spatial mean, i.e. the real part of the `k = 0` coefficient.
    pub fn mean(&self) -> f64 {
        self.coeffs[0].re
    }

    /// `∂/∂x_axis`, exact for band-limited data.
    pub fn derivative(&self, axis: usize) -> Result<Scalar> {
        if axis >= self.grid.dim {
            return Err(Error::IndexOutOfRange {
                what: "axis",
                index: axis,
                limit: self.grid.dim,
            });
        }
        let t = self.grid.tables();
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                if t.nyquist[i] {
                    ZERO
                } else {
                    Complex64::new(0.0, t.k[i][axis]) * c
                }
            })
            .collect();
        Ok(Scalar {
            grid: self.grid,
            coeffs,
        })
    }

    /// Zero every mode with some `|k_i| > n/3`.
    pub fn dealias(&self) -> Scalar {
        let t = self.grid.tables();
        let coeffs = self
            .coeffs
            .iter()
            .zip(&t.keep)
            .map(|(&c, &keep)| if keep { c } else { ZERO })
            .collect();
        Scalar {
            grid: self.grid,
            coeffs,
        }
    }

    /// Dealiased pseudo-spectral product.
    pub fn pointwise_product(&self, other: &Scalar) -> Result<Scalar> {
        self.grid.check_same(&other.grid)?;
        let a = self.to_physical();
        let b = other.to_physical();
        let prod: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x * y).collect();
        Ok(Scalar::from_physical(self.grid, &prod)?.dealias())
    }

    /// Solve `Δφ = self` for zero-mean `φ`; the mean of `self` is ignored.
    pub fn inverse_laplacian(&self) -> Scalar {
        let t = self.grid.tables();
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                if i == 0 || t.nyquist[i] {
                    ZERO
                } else {
                    -c / t.k2[i]
                }
            })
            .collect();
        Scalar {
            grid: self.grid,
            coeffs,
        }
    }

    /// `∫ f g dV` by Parseval.
    pub fn inner_product(&self, other: &Scalar) -> Result<f64> {
        self.grid.check_same(&other.grid)?;
        Ok(self.grid.volume() * raw_dot(&self.coeffs, &other.coeffs))
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs
            .iter()
            .all(|c| c.re.is_finite() && c.im.is_finite())
    }

    fn zip_with(&self, other: &Scalar, f: impl Fn(Complex64, Complex64) -> Complex64) -> Scalar {
        assert_eq!(self.grid, other.grid, "grid mismatch in scalar arithmetic");
        Scalar {
            grid: self.grid,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }
}

fn raw_dot(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.re * y.re + x.im * y.im)
        .sum()
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Mul<f64> for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: f64) -> Scalar {
        Scalar {
            grid: self.grid,
            coeffs: self.coeffs.iter().map(|&c| c * rhs).collect(),
        }
    }
}

impl Mul<Complex64> for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Complex64) -> Scalar {
        Scalar {
            grid: self.grid,
            coeffs: self.coeffs.iter().map(|&c| c * rhs).collect(),
        }
    }
}

/// A real vector field (or 1-form representative) on the torus.
///
/// Vector fields, magnetic fields and 1-form classes all share this
/// representation; which role a value plays is decided by the caller.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralField {
    grid: TorusGrid,
    components: Vec<Scalar>,
}

impl SpectralField {
    /// Zero field with `dim` components.
    pub fn zeros(grid: TorusGrid) -> Self {
        Self {
            grid,
            components: vec![Scalar::zeros(grid); grid.dim],
        }
    }

    pub fn from_components(components: Vec<Scalar>) -> Result<Self> {
        let grid = components.first().map(|c| c.grid).ok_or(Error::Shape {
            expected: 1,
            got: 0,
        })?;
        for c in &components {
            grid.check_same(&c.grid)?;
        }
        Ok(Self { grid, components })
    }

    /// Forward transform, one sample array per component.
    pub fn to_spectral(grid: TorusGrid, samples: &[Vec<f64>]) -> Result<Self> {
        if samples.len() != grid.dim {
            return Err(Error::Shape {
                expected: grid.dim,
                got: samples.len(),
            });
        }
        let components = samples
            .iter()
            .map(|s| Scalar::from_physical(grid, s))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { grid, components })
    }

    pub fn from_fn(grid: TorusGrid, f: impl Fn([f64; 3]) -> [f64; 3]) -> Self {
        let components = (0..grid.dim)
            .map(|c| Scalar::from_fn(grid, |x| f(x)[c]))
            .collect();
        Self { grid, components }
    }

    pub fn to_physical(&self) -> Vec<Vec<f64>> {
        self.components.iter().map(Scalar::to_physical).collect()
    }

    pub fn grid(&self) -> TorusGrid {
        self.grid
    }

    pub fn n_components(&self) -> usize {
        self.components.len()
    }

    pub fn component(&self, i: usize) -> &Scalar {
        &self.components[i]
    }

    pub fn component_mut(&mut self, i: usize) -> &mut Scalar {
        &mut self.components[i]
    }

    pub fn components(&self) -> &[Scalar] {
        &self.components
    }

    /// `∂f_component/∂x_axis`.
    pub fn partial_derivative(&self, component: usize, axis: usize) -> Result<Scalar> {
        let c = self
            .components
            .get(component)
            .ok_or(Error::IndexOutOfRange {
                what: "component",
                index: component,
                limit: self.components.len(),
            })?;
        c.derivative(axis)
    }

    pub fn divergence(&self) -> Scalar {
        assert_eq!(
            self.components.len(),
            self.grid.dim,
            "divergence of a non-vector field"
        );
        let t = self.grid.tables();
        let mut out = vec![ZERO; self.grid.len()];
        for (i, o) in out.iter_mut().enumerate() {
            if t.nyquist[i] {
                continue;
            }
            let mut s = ZERO;
            for (a, comp) in self.components.iter().enumerate() {
                s += comp.coeffs[i] * t.k[i][a];
            }
            *o = Complex64::new(0.0, 1.0) * s;
        }
        Scalar {
            grid: self.grid,
            coeffs: out,
        }
    }

    /// Orthogonal projection onto divergence-free fields.
    ///
    /// `u_k ↦ u_k − k (k·u_k)/|k|²` for `k ≠ 0`; the mean mode passes through.
    /// Also used to pick the co-closed representative of a 1-form class.
    pub fn leray_project(&self) -> SpectralField {
        let t = self.grid.tables();
        let dim = self.grid.dim;
        let mut comps: Vec<Vec<Complex64>> =
            self.components.iter().map(|c| c.coeffs.clone()).collect();
        for i in 1..self.grid.len() {
            if t.nyquist[i] {
                comps.iter_mut().for_each(|c| c[i] = ZERO);
                continue;
            }
            let k = &t.k[i];
            let mut kdotu = ZERO;
            for a in 0..dim {
                kdotu += comps[a][i] * k[a];
            }
            let s = kdotu / t.k2[i];
            for a in 0..dim {
                comps[a][i] -= s * k[a];
            }
        }
        Self {
            grid: self.grid,
            components: comps
                .into_iter()
                .map(|coeffs| Scalar {
                    grid: self.grid,
                    coeffs,
                })
                .collect(),
        }
    }

    pub fn dealias(&self) -> SpectralField {
        self.map(Scalar::dealias)
    }

    /// `∫ Σ_i f_i g_i dV` by Parseval.
    pub fn inner_product(&self, other: &SpectralField) -> Result<f64> {
        self.grid.check_same(&other.grid)?;
        if self.components.len() != other.components.len() {
            return Err(Error::Shape {
                expected: self.components.len(),
                got: other.components.len(),
            });
        }
        let s: f64 = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| raw_dot(&a.coeffs, &b.coeffs))
            .sum();
        Ok(self.grid.volume() * s)
    }

    /// L² norm `sqrt(∫ |f|² dV)`.
    pub fn norm(&self) -> f64 {
        self.inner_product(self).expect("same field").sqrt()
    }

    /// Mean of each component.
    pub fn mean(&self) -> Vec<f64> {
        self.components.iter().map(Scalar::mean).collect()
    }

    /// Maximum over grid points of the Euclidean magnitude `|f(x)|`.
    pub fn max_magnitude(&self) -> f64 {
        let phys = self.to_physical();
        (0..self.grid.len())
            .map(|p| phys.iter().map(|c| c[p] * c[p]).sum::<f64>().sqrt())
            .fold(0.0, f64::max)
    }

    /// Largest `|k·f_k|` over modes, relative to the largest `|k||f_k|`.
    ///
    /// Lies in `[0, 1]`; a pure single-mode gradient gives 1.
    pub fn divergence_residual(&self) -> f64 {
        let t = self.grid.tables();
        let mut num: f64 = 0.0;
        let mut den: f64 = 0.0;
        for i in 1..self.grid.len() {
            let k = &t.k[i];
            let mut kdotu = ZERO;
            let mut mag2 = 0.0;
            for (a, comp) in self.components.iter().enumerate() {
                kdotu += comp.coeffs[i] * k[a];
                mag2 += comp.coeffs[i].norm_sqr();
            }
            num = num.max(kdotu.norm());
            den = den.max((t.k2[i] * mag2).sqrt());
        }
        if den == 0.0 {
            0.0
        } else {
            num / den
        }
    }

    pub fn is_finite(&self) -> bool {
        self.components.iter().all(Scalar::is_finite)
    }

    pub fn map(&self, f: impl Fn(&Scalar) -> Scalar) -> SpectralField {
        Self {
            grid: self.grid,
            components: self.components.iter().map(f).collect(),
        }
    }

    /// `self + a * other`
    pub fn axpy(&self, a: f64, other: &SpectralField) -> SpectralField {
        self.zip_with(other, |x, y| x + y * a)
    }

    fn zip_with(
        &self,
        other: &SpectralField,
        f: impl Fn(Complex64, Complex64) -> Complex64 + Copy,
    ) -> SpectralField {
        assert_eq!(self.grid, other.grid, "grid mismatch in field arithmetic");
        assert_eq!(self.components.len(), other.components.len());
        Self {
            grid: self.grid,
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a.zip_with(b, f))
                .collect(),
        }
    }
}

impl Add for &SpectralField {
    type Output = SpectralField;
    fn add(self, rhs: &SpectralField) -> SpectralField {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &SpectralField {
    type Output = SpectralField;
    fn sub(self, rhs: &SpectralField) -> SpectralField {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Mul<f64> for &SpectralField {
    type Output = SpectralField;
    fn mul(self, rhs: f64) -> SpectralField {
        self.map(|c| c * rhs)
    }
}

impl Neg for &SpectralField {
    type Output = SpectralField;
    fn neg(self) -> SpectralField {
        self * -1.0
    }
}

/// Random divergence-free field with every `|k_i| <= k_cap` mode populated by
/// uniform coefficients in `[-1, 1] + i[-1, 1]`, zero mean. Mode order is fixed,
/// so a seeded generator gives a reproducible field.
pub fn random_solenoidal<R: Rng + ?Sized>(
    grid: TorusGrid,
    k_cap: usize,
    rng: &mut R,
) -> SpectralField {
    let cap = k_cap.min(grid.n / 2 - 1) as i64;
    let mut components = vec![Scalar::zeros(grid); grid.dim];
    for idx in 1..grid.len() {
        let k = grid.wavevector(idx);
        if k.iter().any(|ka| ka.abs() > cap) {
            continue;
        }
        // one representative per ±k pair: first nonzero entry positive
        if k.iter().find(|&&ka| ka != 0).is_some_and(|&ka| ka < 0) {
            continue;
        }
        for comp in components.iter_mut() {
            let c = Complex64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0));
            comp.set_mode_real(&k[..grid.dim], c)
                .expect("k within range");
        }
    }
    SpectralField { grid, components }.leray_project()
}

/// `∇φ` as a vector field.
pub fn gradient(phi: &Scalar) -> SpectralField {
    let grid = phi.grid();
    SpectralField {
        grid,
        components: (0..grid.dim)
            .map(|a| phi.derivative(a).expect("axis < dim"))
            .collect(),
    }
}

/// Physical-space values of every first derivative, indexed `[i * dim + j]`
/// for `∂f_i/∂x_j`.
pub(crate) fn physical_jacobian(f: &SpectralField) -> Vec<Vec<f64>> {
    let dim = f.grid.dim;
    let mut out = Vec::with_capacity(f.components.len() * dim);
    for c in &f.components {
        for j in 0..dim {
            out.push(c.derivative(j).expect("axis < dim").to_physical());
        }
    }
    out
}

/// Physical-space values of second derivatives, indexed `[(i * dim + j) * dim + k]`
/// for `∂²f_i/∂x_j∂x_k`.
pub(crate) fn physical_hessian(f: &SpectralField) -> Vec<Vec<f64>> {
    let dim = f.grid.dim;
    let n = f.components.len();
    let mut out = vec![Vec::new(); n * dim * dim];
    for (i, c) in f.components.iter().enumerate() {
        for j in 0..dim {
            let dj = c.derivative(j).expect("axis < dim");
            for k in j..dim {
                let v = dj.derivative(k).expect("axis < dim").to_physical();
                if k != j {
                    out[(i * dim + k) * dim + j] = v.clone();
                }
                out[(i * dim + j) * dim + k] = v;
            }
        }
    }
    out
}

/// Forward-transform accumulated physical products and apply the 2/3 rule.
pub(crate) fn field_from_products(grid: TorusGrid, comps: Vec<Vec<f64>>) -> SpectralField {
    SpectralField {
        grid,
        components: comps
            .iter()
            .map(|c| {
                Scalar::from_physical(grid, c)
                    .expect("product buffer matches grid")
                    .dealias()
            })
            .collect(),
    }
}
