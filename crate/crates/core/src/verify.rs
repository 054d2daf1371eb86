//! Randomized checks of the algebraic identities and the Alfvén-wave
//! convergence study. All residuals are relative and scale-free.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{euler_rhs, full_bracket, inertia_apply, invariant_form, AlgebraElement};
use crate::config::random_state;
use crate::diagnostics::alfven_exact;
use crate::dynamics::{mhd_rhs_stress, MhdState, Model, StateRate};
use crate::error::Result;
use crate::integrator::{integrate, StepControl};
use crate::spectral::{random_solenoidal, SpectralField, TorusGrid};

fn ratio(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        num
    } else {
        num / den
    }
}

/// `‖[X,Y] + [Y,X]‖ / ‖[X,Y]‖`
pub fn antisymmetry_residual(x: &AlgebraElement, y: &AlgebraElement) -> Result<f64> {
    let xy = full_bracket(x, y)?;
    let yx = full_bracket(y, x)?;
    Ok(ratio(xy.add(&yx).norm(), xy.norm()))
}

/// `‖Σ_cyc [X,[Y,Z]]‖ / max ‖[X,[Y,Z]]‖`
pub fn jacobi_residual(x: &AlgebraElement, y: &AlgebraElement, z: &AlgebraElement) -> Result<f64> {
    let a = full_bracket(x, &full_bracket(y, z)?)?;
    let b = full_bracket(y, &full_bracket(z, x)?)?;
    let c = full_bracket(z, &full_bracket(x, y)?)?;
    let scale = a.norm().max(b.norm()).max(c.norm());
    Ok(ratio(a.add(&b).add(&c).norm(), scale))
}

/// `|([X,Y]|Z) − (X|[Y,Z])| / (‖[X,Y]‖‖Z‖ + ‖X‖‖[Y,Z]‖)`
pub fn invariance_residual(
    x: &AlgebraElement,
    y: &AlgebraElement,
    z: &AlgebraElement,
) -> Result<f64> {
    let xy = full_bracket(x, y)?;
    let yz = full_bracket(y, z)?;
    let lhs = invariant_form(&xy, z)?;
    let rhs = invariant_form(x, &yz)?;
    Ok(ratio(
        (lhs - rhs).abs(),
        xy.norm() * z.norm() + x.norm() * yz.norm(),
    ))
}

/// `|(AX | [X,AX])| / (‖AX‖ ‖[X,AX]‖)`, zero for energy conservation.
pub fn energy_law_residual(x: &AlgebraElement) -> Result<f64> {
    let ax = inertia_apply(x);
    let r = euler_rhs(x)?;
    Ok(ratio(invariant_form(&ax, &r)?.abs(), ax.norm() * r.norm()))
}

/// `|(X | [X,AX])| / (‖X‖ ‖[X,AX]‖)`, zero for cross-helicity conservation.
pub fn casimir_law_residual(x: &AlgebraElement) -> Result<f64> {
    let r = euler_rhs(x)?;
    Ok(ratio(invariant_form(x, &r)?.abs(), x.norm() * r.norm()))
}

/// Relative gap between the algebraic Euler right-hand side under `X = B∂ + v dx`
/// and the stress-model MHD right-hand side.
pub fn equivalence_residual(state: &MhdState) -> Result<f64> {
    let via_algebra = StateRate::from_algebra(&euler_rhs(&state.to_algebra())?);
    let direct = mhd_rhs_stress(state)?;
    Ok(ratio(via_algebra.sub(&direct).norm(), direct.norm()))
}

/// Random element with both parts band-limited to `k_cap`.
pub fn random_element(grid: TorusGrid, k_cap: usize, rng: &mut ChaCha8Rng) -> AlgebraElement {
    let vf = random_solenoidal(grid, k_cap, rng);
    let form = random_solenoidal(grid, k_cap, rng);
    AlgebraElement::new(vf, form).expect("projected fields are solenoidal")
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    pub antisymmetry: f64,
    pub jacobi: f64,
    pub invariance: f64,
    pub first_integrals: f64,
    pub equivalence: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            antisymmetry: 1e-10,
            jacobi: 1e-10,
            invariance: 1e-11,
            first_integrals: 1e-10,
            equivalence: 1e-10,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteOptions {
    pub seed: u64,
    pub trials: usize,
    pub dim: usize,
    pub n_points: usize,
    pub tolerances: Tolerances,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            trials: 10,
            dim: 2,
            n_points: 16,
            tolerances: Tolerances::default(),
        }
    }
}

/// Worst residual of one identity over all trials.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub worst: f64,
    pub tolerance: f64,
    pub trials: usize,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.worst < self.tolerance
    }
}

/// Run every identity check on seeded random elements.
///
/// Inputs are band-limited to half the dealias cutoff, so nested brackets are
/// never truncated and every identity holds to roundoff.
pub fn algebra_suite(opts: &SuiteOptions) -> Result<Vec<CheckOutcome>> {
    let grid = TorusGrid::new(opts.dim, opts.n_points)?;
    let k_cap = (grid.cutoff() / 2).max(1);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let tol = opts.tolerances;
    let names: [(&'static str, f64); 8] = [
        ("antisymmetry", tol.antisymmetry),
        ("jacobi", tol.jacobi),
        ("invariance (vf, vf, form)", tol.invariance),
        ("invariance (vf, form, vf)", tol.invariance),
        ("invariance (vf, vf, vf)", tol.invariance),
        ("energy law (AX | [X, AX])", tol.first_integrals),
        ("cross-helicity law (X | [X, AX])", tol.first_integrals),
        ("euler/mhd equivalence", tol.equivalence),
    ];
    let mut worst = [0.0f64; 8];
    let pure_vf =
        |e: &AlgebraElement| AlgebraElement::pure_vector(e.vf().clone()).expect("solenoidal");
    let pure_form =
        |e: &AlgebraElement| AlgebraElement::pure_form(e.form().clone()).expect("solenoidal");
    for _ in 0..opts.trials {
        let x = random_element(grid, k_cap, &mut rng);
        let y = random_element(grid, k_cap, &mut rng);
        let z = random_element(grid, k_cap, &mut rng);
        let r = [
            antisymmetry_residual(&x, &y)?,
            jacobi_residual(&x, &y, &z)?,
            invariance_residual(&pure_vf(&x), &pure_vf(&y), &pure_form(&z))?,
            invariance_residual(&pure_vf(&x), &pure_form(&y), &pure_vf(&z))?,
            invariance_residual(&pure_vf(&x), &pure_vf(&y), &pure_vf(&z))?,
            energy_law_residual(&x)?,
            casimir_law_residual(&x)?,
            equivalence_residual(&MhdState::new(x.vf().clone(), x.form().clone(), 0.0)?)?,
        ];
        for (w, v) in worst.iter_mut().zip(r) {
            *w = w.max(if v.is_nan() { f64::INFINITY } else { v });
        }
    }
    Ok(names
        .iter()
        .zip(worst)
        .map(|(&(name, tolerance), worst)| CheckOutcome {
            name,
            worst,
            tolerance,
            trials: opts.trials,
        })
        .collect())
}

/// Seeded states for the equivalence check at the given grid and band limit.
pub fn random_states(
    grid: TorusGrid,
    k_cap: usize,
    amplitude: f64,
    seeds: std::ops::Range<u64>,
) -> Vec<MhdState> {
    seeds
        .map(|s| random_state(grid, s, k_cap, amplitude, 0.5))
        .collect()
}

/// Final-time L² error `√(‖v − v*‖² + ‖B − B*‖²)` of one Alfvén run.
pub fn alfven_error(
    w: &SpectralField,
    b0: &[f64],
    t_end: f64,
    dt: f64,
    model: Model,
) -> Result<f64> {
    let initial = alfven_exact(w, b0, 0.0)?;
    let control = StepControl::new(dt, t_end, usize::MAX, 1.0)?;
    let out = integrate(initial, model, &control, |_, _| Ok(()))?;
    let exact = alfven_exact(w, b0, t_end)?;
    Ok(out.state.distance(&exact))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceRow {
    pub dt: f64,
    pub error: f64,
    /// `error(previous dt) / error(this dt)`; `None` on the first row.
    pub ratio: Option<f64>,
}

/// Errors of the Alfvén run for each `dt` and the successive reduction
/// ratios. RK4 predicts a ratio of 16 per halving.
pub fn alfven_convergence(
    w: &SpectralField,
    b0: &[f64],
    t_end: f64,
    dts: &[f64],
    model: Model,
) -> Result<Vec<ConvergenceRow>> {
    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(dts.len());
    for &dt in dts {
        let error = alfven_error(w, b0, t_end, dt, model)?;
        let ratio = rows.last().map(|p| p.error / error);
        rows.push(ConvergenceRow { dt, error, ratio });
    }
    Ok(rows)
}
