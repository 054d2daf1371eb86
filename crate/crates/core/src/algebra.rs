//! The Lie algebra `g(τ) = SVect ⊕ Ω¹/dΩ⁰` of divergence-free vector fields
//! extended by 1-forms modulo exact forms, with the bracket twisted by the
//! third-order cocycle
//!
//! ```text
//! τ(v, w) = Σ_{i,j} (∂v_i/∂x_j) d(∂w_j/∂x_i).
//! ```
//!
//! A 1-form class is always carried as its co-closed representative (the
//! Leray projection of any representative, mean mode included), so two
//! classes are equal exactly when their stored coefficients agree.

use crate::error::{Error, Result};
use crate::products::{Accum, Jet};
use crate::spectral::{SpectralField, TorusGrid};

/// Relative divergence residual above which an input is rejected.
pub const SOLENOIDAL_TOLERANCE: f64 = 1e-10;

pub(crate) fn ensure_solenoidal(f: &SpectralField, what: &str) -> Result<()> {
    if f.n_components() != f.grid().dim() {
        return Err(Error::Shape {
            expected: f.grid().dim(),
            got: f.n_components(),
        });
    }
    let residual = f.divergence_residual();
    if residual > SOLENOIDAL_TOLERANCE {
        return Err(Error::ContractViolation {
            what: format!("{what} is not divergence-free"),
            residual,
        });
    }
    Ok(())
}

fn ensure_pair(v: &SpectralField, w: &SpectralField) -> Result<()> {
    if v.grid() != w.grid() {
        return Err(Error::GridMismatch {
            left: v.grid().to_string(),
            right: w.grid().to_string(),
        });
    }
    ensure_solenoidal(v, "left argument")?;
    ensure_solenoidal(w, "right argument")
}

/// An element `X = Σ vf_i ∂_i + Σ form_j dx_j` of `g(τ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraElement {
    vf: SpectralField,
    form: SpectralField,
}

impl AlgebraElement {
    /// Both parts must be divergence-free; the form part is the co-closed
    /// representative of its class.
    pub fn new(vf: SpectralField, form: SpectralField) -> Result<Self> {
        ensure_pair(&vf, &form)?;
        Ok(Self { vf, form })
    }

    /// Normalizes an arbitrary 1-form representative to its co-closed one.
    pub fn from_form_representative(vf: SpectralField, form: SpectralField) -> Result<Self> {
        Self::new(vf, form.leray_project())
    }

    pub fn zero(grid: TorusGrid) -> Self {
        Self {
            vf: SpectralField::zeros(grid),
            form: SpectralField::zeros(grid),
        }
    }

    pub fn pure_vector(vf: SpectralField) -> Result<Self> {
        let form = SpectralField::zeros(vf.grid());
        Self::new(vf, form)
    }

    pub fn pure_form(form: SpectralField) -> Result<Self> {
        let vf = SpectralField::zeros(form.grid());
        Self::new(vf, form)
    }

    pub fn vf(&self) -> &SpectralField {
        &self.vf
    }

    pub fn form(&self) -> &SpectralField {
        &self.form
    }

    pub fn into_parts(self) -> (SpectralField, SpectralField) {
        (self.vf, self.form)
    }

    pub fn grid(&self) -> TorusGrid {
        self.vf.grid()
    }

    /// `sqrt(‖vf‖² + ‖form‖²)`, the L² norm on the underlying vector space.
    pub fn norm(&self) -> f64 {
        (self.vf.norm().powi(2) + self.form.norm().powi(2)).sqrt()
    }

    pub fn add(&self, other: &AlgebraElement) -> AlgebraElement {
        AlgebraElement {
            vf: &self.vf + &other.vf,
            form: &self.form + &other.form,
        }
    }

    pub fn sub(&self, other: &AlgebraElement) -> AlgebraElement {
        AlgebraElement {
            vf: &self.vf - &other.vf,
            form: &self.form - &other.form,
        }
    }

    pub fn scale(&self, a: f64) -> AlgebraElement {
        AlgebraElement {
            vf: &self.vf * a,
            form: &self.form * a,
        }
    }
}

/// Bracket of divergence-free vector fields, `(v·∇)w − (w·∇)v`.
pub fn vf_bracket(v: &SpectralField, w: &SpectralField) -> Result<SpectralField> {
    ensure_pair(v, w)?;
    let (jv, jw) = (Jet::new(v, false), Jet::new(w, false));
    let mut acc = Accum::new(v.grid());
    acc.advection(1.0, &jv, &jw);
    acc.advection(-1.0, &jw, &jv);
    Ok(acc.finish().leray_project())
}

/// Lie derivative of the 1-form class `w_form` along `v`, returned as the
/// co-closed representative.
pub fn lie_derivative(v: &SpectralField, w_form: &SpectralField) -> Result<SpectralField> {
    ensure_pair(v, w_form)?;
    let (jv, jw) = (Jet::new(v, false), Jet::new(w_form, false));
    let mut acc = Accum::new(v.grid());
    acc.advection(1.0, &jv, &jw);
    acc.form_differential(1.0, &jw, &jv);
    Ok(acc.finish().leray_project())
}

/// The cocycle `τ(v, w)` modulo exact forms.
pub fn cocycle_tau(v: &SpectralField, w: &SpectralField) -> Result<SpectralField> {
    ensure_pair(v, w)?;
    let (jv, jw) = (Jet::new(v, false), Jet::new(w, true));
    let mut acc = Accum::new(v.grid());
    acc.cocycle(1.0, &jv, &jw);
    Ok(acc.finish().leray_project())
}

/// The bracket of `g(τ)`:
///
/// `[X, Y] = [X.vf, Y.vf] ⊕ ( τ(X.vf, Y.vf) + L_{X.vf} Y.form − L_{Y.vf} X.form )`,
/// with the bracket of two 1-forms equal to zero.
pub fn full_bracket(x: &AlgebraElement, y: &AlgebraElement) -> Result<AlgebraElement> {
    let grid = x.grid();
    if grid != y.grid() {
        return Err(Error::GridMismatch {
            left: grid.to_string(),
            right: y.grid().to_string(),
        });
    }
    let xv = Jet::new(&x.vf, false);
    let yv = Jet::new(&y.vf, true);
    let xf = Jet::new(&x.form, false);
    let yf = Jet::new(&y.form, false);

    let mut vf = Accum::new(grid);
    vf.advection(1.0, &xv, &yv);
    vf.advection(-1.0, &yv, &xv);

    let mut form = Accum::new(grid);
    form.cocycle(1.0, &xv, &yv);
    form.advection(1.0, &xv, &yf);
    form.form_differential(1.0, &yf, &xv);
    form.advection(-1.0, &yv, &xf);
    form.form_differential(-1.0, &xf, &yv);

    Ok(AlgebraElement {
        vf: vf.finish().leray_project(),
        form: form.finish().leray_project(),
    })
}

/// The invariant pairing `(X | Y) = ⟨X.vf, Y.form⟩ + ⟨X.form, Y.vf⟩`.
pub fn invariant_form(x: &AlgebraElement, y: &AlgebraElement) -> Result<f64> {
    Ok(x.vf.inner_product(&y.form)? + x.form.inner_product(&y.vf)?)
}

/// The inertia involution swapping the vector-field and 1-form parts.
pub fn inertia_apply(x: &AlgebraElement) -> AlgebraElement {
    AlgebraElement {
        vf: x.form.clone(),
        form: x.vf.clone(),
    }
}

/// Right-hand side of the generalized Euler equation `X_t = −[AX, X]`,
/// evaluated as `[X, AX]`.
pub fn euler_rhs(x: &AlgebraElement) -> Result<AlgebraElement> {
    full_bracket(x, &inertia_apply(x))
}
