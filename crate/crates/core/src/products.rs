//! Physical-space evaluation of the quadratic terms shared by the algebra and
//! the PDE right-hand sides. Products are summed pointwise and transformed
//! once; since the 2/3 mask and the transform are linear this equals the sum
//! of individually dealiased products.

use crate::spectral::{
    field_from_products, physical_hessian, physical_jacobian, SpectralField, TorusGrid,
};

/// A field together with its physical-space values and derivatives.
pub(crate) struct Jet {
    dim: usize,
    vals: Vec<Vec<f64>>,
    jac: Vec<Vec<f64>>,
    hess: Option<Vec<Vec<f64>>>,
}

impl Jet {
    pub(crate) fn new(f: &SpectralField, with_hessian: bool) -> Self {
        Self {
            dim: f.grid().dim(),
            vals: f.to_physical(),
            jac: physical_jacobian(f),
            hess: with_hessian.then(|| physical_hessian(f)),
        }
    }

    /// `∂f_i/∂x_j`
    fn d(&self, i: usize, j: usize) -> &[f64] {
        &self.jac[i * self.dim + j]
    }

    /// `∂²f_i/∂x_j∂x_k`
    fn dd(&self, i: usize, j: usize, k: usize) -> &[f64] {
        let h = self
            .hess
            .as_ref()
            .expect("jet built without second derivatives");
        &h[(i * self.dim + j) * self.dim + k]
    }
}

/// Accumulator of physical-space vector values.
pub(crate) struct Accum {
    grid: TorusGrid,
    comps: Vec<Vec<f64>>,
}

impl Accum {
    pub(crate) fn new(grid: TorusGrid) -> Self {
        Self {
            grid,
            comps: vec![vec![0.0; grid.len()]; grid.dim()],
        }
    }

    fn add_prod(&mut self, k: usize, sign: f64, a: &[f64], b: &[f64]) {
        for ((o, x), y) in self.comps[k].iter_mut().zip(a).zip(b) {
            *o += sign * x * y;
        }
    }

    /// `+= sign · (a·∇)b`, component `j` being `Σ_i a_i ∂b_j/∂x_i`.
    pub(crate) fn advection(&mut self, sign: f64, a: &Jet, b: &Jet) {
        let dim = a.dim;
        for j in 0..dim {
            for i in 0..dim {
                self.add_prod(j, sign, &a.vals[i], b.d(j, i));
            }
        }
    }

    /// `+= sign · Σ_j w_j d(v_j)`, component `k` being `Σ_j w_j ∂v_j/∂x_k`.
    pub(crate) fn form_differential(&mut self, sign: f64, w: &Jet, v: &Jet) {
        let dim = w.dim;
        for k in 0..dim {
            for j in 0..dim {
                self.add_prod(k, sign, &w.vals[j], v.d(j, k));
            }
        }
    }

    /// `+= sign · Σ_{i,j} (∂a_i/∂x_j) d(∂b_j/∂x_i)`, component `k` being
    /// `Σ_{i,j} (∂a_i/∂x_j)(∂²b_j/∂x_i∂x_k)`. `b` needs second derivatives.
    pub(crate) fn cocycle(&mut self, sign: f64, a: &Jet, b: &Jet) {
        let dim = a.dim;
        for k in 0..dim {
            for i in 0..dim {
                for j in 0..dim {
                    self.add_prod(k, sign, a.d(i, j), b.dd(j, i, k));
                }
            }
        }
    }

    /// Transform to spectral space with the 2/3 mask applied.
    pub(crate) fn finish(self) -> SpectralField {
        field_from_products(self.grid, self.comps)
    }
}
