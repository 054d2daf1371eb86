//! Right-hand sides of ideal MHD and of MHD with the asymmetric stress term
//!
//! ```text
//! ∂v/∂t = −(v·∇)v + (B·∇)B + Σ_{i,j} (∂B_i/∂x_j) ∇(∂v_j/∂x_i) − ∇p
//! ∂B/∂t = −{v, B}
//! ```
//!
//! `B` is measured in Alfvén velocity units so every coefficient is one. The
//! pressure is never evolved: the Leray projection removes it, and
//! [`pressure_solve`] recovers it on demand.

use std::fmt;
use std::str::FromStr;

use crate::algebra::{ensure_solenoidal, AlgebraElement};
use crate::error::{Error, Result};
use crate::products::{Accum, Jet};
use crate::spectral::{Scalar, SpectralField, TorusGrid};

/// Which momentum equation to evolve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Model {
    Classical,
    Stress,
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::Classical => "classical",
            Model::Stress => "stress",
        })
    }
}

impl FromStr for Model {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "classical" => Ok(Model::Classical),
            "stress" => Ok(Model::Stress),
            other => Err(Error::config(format!(
                "model must be \"classical\" or \"stress\", got {other:?}"
            ))),
        }
    }
}

/// Velocity and magnetic field at time `t`, both divergence-free.
#[derive(Clone, Debug, PartialEq)]
pub struct MhdState {
    v: SpectralField,
    b: SpectralField,
    t: f64,
}

impl MhdState {
    pub fn new(v: SpectralField, b: SpectralField, t: f64) -> Result<Self> {
        if v.grid() != b.grid() {
            return Err(Error::GridMismatch {
                left: v.grid().to_string(),
                right: b.grid().to_string(),
            });
        }
        ensure_solenoidal(&v, "velocity")?;
        ensure_solenoidal(&b, "magnetic field")?;
        Ok(Self { v, b, t })
    }

    pub fn zero(grid: TorusGrid) -> Self {
        Self {
            v: SpectralField::zeros(grid),
            b: SpectralField::zeros(grid),
            t: 0.0,
        }
    }

    /// Skips the divergence check; callers guarantee projected inputs.
    pub(crate) fn from_projected(v: SpectralField, b: SpectralField, t: f64) -> Self {
        Self { v, b, t }
    }

    pub fn v(&self) -> &SpectralField {
        &self.v
    }

    pub fn b(&self) -> &SpectralField {
        &self.b
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn grid(&self) -> TorusGrid {
        self.v.grid()
    }

    pub fn with_time(mut self, t: f64) -> Self {
        self.t = t;
        self
    }

    /// `X = B∂ + v dx`: the magnetic field is the vector-field part and the
    /// velocity is the 1-form part.
    pub fn to_algebra(&self) -> AlgebraElement {
        AlgebraElement::new(self.b.clone(), self.v.clone())
            .expect("state invariants imply a valid algebra element")
    }

    pub fn from_algebra(x: &AlgebraElement, t: f64) -> Self {
        Self {
            v: x.form().clone(),
            b: x.vf().clone(),
            t,
        }
    }

    /// `‖v − v'‖² + ‖B − B'‖²`, square-rooted.
    pub fn distance(&self, other: &MhdState) -> f64 {
        ((&self.v - &other.v).norm().powi(2) + (&self.b - &other.b).norm().powi(2)).sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.v.is_finite() && self.b.is_finite()
    }
}

/// Time derivatives `(dv/dt, dB/dt)`.
#[derive(Clone, Debug, PartialEq)]
pub struct StateRate {
    pub dv: SpectralField,
    pub db: SpectralField,
}

impl StateRate {
    /// Reads an algebra element `dB ∂ + dv dx` as a state rate.
    pub fn from_algebra(x: &AlgebraElement) -> Self {
        Self {
            dv: x.form().clone(),
            db: x.vf().clone(),
        }
    }

    pub fn norm(&self) -> f64 {
        (self.dv.norm().powi(2) + self.db.norm().powi(2)).sqrt()
    }

    pub fn sub(&self, other: &StateRate) -> StateRate {
        StateRate {
            dv: &self.dv - &other.dv,
            db: &self.db - &other.db,
        }
    }
}

fn check_state(state: &MhdState) -> Result<()> {
    ensure_solenoidal(&state.v, "velocity")?;
    ensure_solenoidal(&state.b, "magnetic field")
}

/// Unprojected velocity right-hand side and projected induction term.
fn raw_rates(state: &MhdState, model: Model) -> Result<(SpectralField, SpectralField)> {
    check_state(state)?;
    let grid = state.grid();
    let jv = Jet::new(&state.v, model == Model::Stress);
    let jb = Jet::new(&state.b, false);

    let mut dv = Accum::new(grid);
    dv.advection(-1.0, &jv, &jv);
    dv.advection(1.0, &jb, &jb);
    if model == Model::Stress {
        dv.cocycle(1.0, &jb, &jv);
    }

    let mut db = Accum::new(grid);
    db.advection(-1.0, &jv, &jb);
    db.advection(1.0, &jb, &jv);

    Ok((dv.finish(), db.finish().leray_project()))
}

pub fn mhd_rhs(state: &MhdState, model: Model) -> Result<StateRate> {
    let (dv, db) = raw_rates(state, model)?;
    Ok(StateRate {
        dv: dv.leray_project(),
        db,
    })
}

/// Ideal incompressible MHD.
pub fn mhd_rhs_classical(state: &MhdState) -> Result<StateRate> {
    mhd_rhs(state, Model::Classical)
}

/// MHD with the asymmetric stress term added to the momentum equation.
pub fn mhd_rhs_stress(state: &MhdState) -> Result<StateRate> {
    mhd_rhs(state, Model::Stress)
}

/// `Σ_{i,j} (∂B_i/∂x_j) ∇(∂v_j/∂x_i)`, dealiased but not projected.
pub fn stress_term(state: &MhdState) -> Result<SpectralField> {
    check_state(state)?;
    let mut acc = Accum::new(state.grid());
    acc.cocycle(1.0, &Jet::new(&state.b, false), &Jet::new(&state.v, true));
    Ok(acc.finish())
}

/// The alternative form `−Σ_{i,j} (∂v_j/∂x_i) ∇(∂B_i/∂x_j)`, which differs
/// from [`stress_term`] by a gradient.
pub fn stress_term_alt(state: &MhdState) -> Result<SpectralField> {
    check_state(state)?;
    let mut acc = Accum::new(state.grid());
    acc.cocycle(-1.0, &Jet::new(&state.v, false), &Jet::new(&state.b, true));
    Ok(acc.finish())
}

/// Weights of the admissible stress family `α T + β T'`, `α + β = 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StressWeights {
    alpha: f64,
    beta: f64,
}

impl StressWeights {
    pub const TOLERANCE: f64 = 1e-12;

    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha.is_finite() && beta.is_finite()) || (alpha + beta - 1.0).abs() > Self::TOLERANCE
        {
            return Err(Error::config(format!(
                "stress weights must satisfy alpha + beta = 1, got alpha + beta = {}",
                alpha + beta
            )));
        }
        Ok(Self { alpha, beta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

impl Default for StressWeights {
    fn default() -> Self {
        Self {
            alpha: 1.0,
            beta: 0.0,
        }
    }
}

/// The stress tensor field `T_ki`; generally `T_ki ≠ T_ik`.
#[derive(Clone, Debug, PartialEq)]
pub struct StressTensor {
    grid: TorusGrid,
    entries: Vec<Scalar>,
    weights: StressWeights,
}

impl StressTensor {
    /// Entry `T_ki` (zero-based indices).
    pub fn get(&self, k: usize, i: usize) -> &Scalar {
        &self.entries[k * self.grid.dim() + i]
    }

    pub fn weights(&self) -> StressWeights {
        self.weights
    }

    /// `(div T)_k = Σ_i ∂T_ki/∂x_i`.
    pub fn divergence(&self) -> SpectralField {
        let dim = self.grid.dim();
        let comps = (0..dim)
            .map(|k| {
                (0..dim).fold(Scalar::zeros(self.grid), |acc, i| {
                    &acc + &self.get(k, i).derivative(i).expect("axis < dim")
                })
            })
            .collect();
        SpectralField::from_components(comps).expect("components share a grid")
    }

    /// Largest physical value of `|T_ki − T_ik|` and of `|T_ki|`.
    pub fn asymmetry(&self) -> (f64, f64) {
        let dim = self.grid.dim();
        let phys: Vec<Vec<f64>> = self.entries.iter().map(Scalar::to_physical).collect();
        let mut skew: f64 = 0.0;
        let mut size: f64 = 0.0;
        for k in 0..dim {
            for i in 0..dim {
                let a = &phys[k * dim + i];
                let b = &phys[i * dim + k];
                for (x, y) in a.iter().zip(b) {
                    skew = skew.max((x - y).abs());
                    size = size.max(x.abs());
                }
            }
        }
        (skew, size)
    }
}

/// `T_ki = α Σ_j (∂B_i/∂x_j)(∂v_j/∂x_k) − β Σ_j (∂v_i/∂x_j)(∂B_j/∂x_k)`.
pub fn stress_tensor_field(state: &MhdState, weights: StressWeights) -> Result<StressTensor> {
    check_state(state)?;
    let grid = state.grid();
    let dim = grid.dim();
    let dv: Vec<Vec<Vec<f64>>> = jacobian(&state.v);
    let db: Vec<Vec<Vec<f64>>> = jacobian(&state.b);
    let (a, b) = (weights.alpha, weights.beta);
    let mut entries = Vec::with_capacity(dim * dim);
    for k in 0..dim {
        for i in 0..dim {
            let mut acc = vec![0.0; grid.len()];
            for j in 0..dim {
                for (p, o) in acc.iter_mut().enumerate() {
                    *o += a * db[i][j][p] * dv[j][k][p] - b * dv[i][j][p] * db[j][k][p];
                }
            }
            entries.push(Scalar::from_physical(grid, &acc)?.dealias());
        }
    }
    Ok(StressTensor {
        grid,
        entries,
        weights,
    })
}

fn jacobian(f: &SpectralField) -> Vec<Vec<Vec<f64>>> {
    let dim = f.grid().dim();
    (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| {
                    f.partial_derivative(i, j)
                        .expect("indices < dim")
                        .to_physical()
                })
                .collect()
        })
        .collect()
}

/// Zero-mean pressure `p = Δ⁻¹ div(raw velocity RHS)`, so that
/// `∇p` is exactly the part removed by the projection.
pub fn pressure_solve(state: &MhdState, model: Model) -> Result<Scalar> {
    let (raw, _) = raw_rates(state, model)?;
    Ok(raw.divergence().inverse_laplacian())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::gradient;

    fn grid() -> TorusGrid {
        TorusGrid::new(2, 16).unwrap()
    }

    fn field(g: TorusGrid, f: impl Fn(f64, f64) -> [f64; 2]) -> SpectralField {
        SpectralField::from_fn(g, |x| {
            let v = f(x[0], x[1]);
            [v[0], v[1], 0.0]
        })
    }

    fn cross_state(g: TorusGrid) -> MhdState {
        MhdState::new(
            field(g, |_, y| [y.cos(), 0.0]),
            field(g, |x, _| [0.0, x.cos()]),
            0.0,
        )
        .unwrap()
    }

    #[test]
    fn rejects_compressible_state() {
        let g = grid();
        let grad = gradient(&Scalar::from_fn(g, |x| x[0].sin()));
        assert!(matches!(
            MhdState::new(grad, SpectralField::zeros(g), 0.0),
            Err(Error::ContractViolation { .. })
        ));
    }

    #[test]
    fn classical_examples() {
        let g = grid();
        let b = field(g, |_, y| [y.cos(), 0.0]);
        let eq = MhdState::new(SpectralField::zeros(g), b.clone(), 0.0).unwrap();
        assert!(mhd_rhs_classical(&eq).unwrap().norm() < 1e-14);

        let w = field(g, |x, y| {
            [y.sin() + (x + 2.0 * y).cos(), -0.5 * (x + 2.0 * y).cos()]
        });
        let aligned = MhdState::new(w.clone(), w, 0.0).unwrap();
        let r = mhd_rhs_classical(&aligned).unwrap();
        assert!(r.dv.norm() < 1e-14 && r.db.norm() < 1e-14);

        let r = mhd_rhs_classical(&cross_state(g)).unwrap();
        assert!(r.dv.norm() < 1e-14);
        let expected = field(g, |x, y| [-x.cos() * y.sin(), x.sin() * y.cos()]);
        assert!((&r.db - &expected).norm() < 1e-13);
    }

    #[test]
    fn stress_term_examples() {
        let g = grid();
        let w = field(g, |_, y| [y.cos(), 0.0]);
        let vonly = MhdState::new(w.clone(), SpectralField::zeros(g), 0.0).unwrap();
        let bonly = MhdState::new(SpectralField::zeros(g), w, 0.0).unwrap();
        assert_eq!(stress_term(&vonly).unwrap().norm(), 0.0);
        assert_eq!(stress_term(&bonly).unwrap().norm(), 0.0);

        let s = stress_term(&cross_state(g)).unwrap();
        let raw = field(g, |x, y| [0.0, x.sin() * y.cos()]);
        assert!((&s - &raw).norm() < 1e-13);
        let proj = field(g, |x, y| {
            [-0.5 * x.cos() * y.sin(), 0.5 * x.sin() * y.cos()]
        });
        assert!((&s.leray_project() - &proj).norm() < 1e-13);
    }

    #[test]
    fn stress_rhs_examples() {
        let g = grid();
        let c = field(g, |_, y| [y.cos(), 0.0]);
        let steady = MhdState::new(c.clone(), c.clone(), 0.0).unwrap();
        assert!(mhd_rhs_stress(&steady).unwrap().norm() < 1e-14);

        // with B = 0 both models reduce to incompressible Euler
        let u = field(g, |x, y| [y.cos() + (x + y).sin(), -(x + y).sin()]);
        let euler = MhdState::new(u, SpectralField::zeros(g), 0.0).unwrap();
        let a = mhd_rhs_stress(&euler).unwrap();
        let b = mhd_rhs_classical(&euler).unwrap();
        assert_eq!(a, b);
        assert!(a.dv.norm() > 1e-3);

        let r = mhd_rhs_stress(&cross_state(g)).unwrap();
        let dv = field(g, |x, y| {
            [-0.5 * x.cos() * y.sin(), 0.5 * x.sin() * y.cos()]
        });
        let db = field(g, |x, y| [-x.cos() * y.sin(), x.sin() * y.cos()]);
        assert!((&r.dv - &dv).norm() < 1e-13);
        assert!((&r.db - &db).norm() < 1e-13);
    }

    #[test]
    fn stress_tensor_examples() {
        let g = grid();
        let b = field(g, |x, _| [0.0, x.cos()]);
        let zero_v = MhdState::new(SpectralField::zeros(g), b, 0.0).unwrap();
        let t = stress_tensor_field(&zero_v, StressWeights::default()).unwrap();
        assert!(t.entries.iter().all(|e| e.max_abs_coeff() == 0.0));

        let t = stress_tensor_field(&cross_state(g), StressWeights::default()).unwrap();
        let t22 = Scalar::from_fn(g, |x| x[0].sin() * x[1].sin());
        assert!((t.get(1, 1) - &t22).max_abs_coeff() < 1e-15);
        for (k, i) in [(0, 0), (0, 1), (1, 0)] {
            assert!(t.get(k, i).max_abs_coeff() < 1e-15, "T[{k}][{i}]");
        }
        let div = t.divergence();
        let s = stress_term(&cross_state(g)).unwrap();
        assert!((&div.leray_project() - &s.leray_project()).norm() < 1e-13);
    }

    #[test]
    fn weight_constraint() {
        assert!(StressWeights::new(0.5, 0.4).is_err());
        assert!(StressWeights::new(0.25, 0.75).is_ok());
        assert!(StressWeights::new(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn pressure_examples() {
        let g = grid();
        let w = field(g, |x, y| {
            [y.sin() + 0.2 * (x - y).cos(), 0.2 * (x - y).cos()]
        });
        let aligned = MhdState::new(w.clone(), w, 0.0).unwrap();
        assert!(
            pressure_solve(&aligned, Model::Classical)
                .unwrap()
                .max_abs_coeff()
                < 1e-15
        );

        // ∇p = raw − projected = (½ cos x₁ sin x₂, ½ sin x₁ cos x₂)
        let p = pressure_solve(&cross_state(g), Model::Stress).unwrap();
        let expected = Scalar::from_fn(g, |x| 0.5 * x[0].sin() * x[1].sin());
        assert!((&p - &expected).max_abs_coeff() < 1e-15);
        assert_eq!(p.mean(), 0.0);
    }

    #[test]
    fn model_parsing() {
        assert_eq!("stress".parse::<Model>().unwrap(), Model::Stress);
        assert_eq!("classical".parse::<Model>().unwrap(), Model::Classical);
        assert!("kdv".parse::<Model>().is_err());
    }
}
