//! Classical fourth-order Runge–Kutta time stepping with invariant sampling.

use crate::config::SimConfig;
use crate::diagnostics::InvariantRecord;
use crate::dynamics::{mhd_rhs, MhdState, Model, StateRate};
use crate::error::{Error, Result};
use crate::spectral::SpectralField;

/// Extent of the RK4 stability region along the imaginary axis (≈ 2√2),
/// rounded down.
pub const RK4_IMAGINARY_EXTENT: f64 = 2.8;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StepControl {
    pub dt: f64,
    pub t_end: f64,
    pub sample_every: usize,
    pub stability_factor: f64,
}

impl StepControl {
    pub const DEFAULT_SAMPLE_EVERY: usize = 10;
    pub const DEFAULT_STABILITY_FACTOR: f64 = 0.9;

    pub fn new(dt: f64, t_end: f64, sample_every: usize, stability_factor: f64) -> Result<Self> {
        let mut errors = Vec::new();
        if !(dt.is_finite() && dt > 0.0) {
            errors.push(format!("dt must be positive, got {dt}"));
        }
        if !(t_end.is_finite() && t_end >= 0.0) {
            errors.push(format!("t_end must be non-negative, got {t_end}"));
        }
        if sample_every == 0 {
            errors.push("sample_every must be at least 1".to_string());
        }
        if !(stability_factor > 0.0 && stability_factor <= 1.0) {
            errors.push(format!(
                "stability_factor must lie in (0, 1], got {stability_factor}"
            ));
        }
        if !errors.is_empty() {
            return Err(Error::Config(errors));
        }
        Ok(Self {
            dt,
            t_end,
            sample_every,
            stability_factor,
        })
    }

    /// Number of steps; the last one is shortened to land on `t_end`.
    pub fn n_steps(&self) -> usize {
        if self.t_end == 0.0 {
            0
        } else {
            (self.t_end / self.dt - 1e-9).ceil().max(1.0) as usize
        }
    }

    fn time_at(&self, step: usize) -> f64 {
        (step as f64 * self.dt).min(self.t_end)
    }

    /// Largest stable step for `state`: `2.8 / max(ω_adv, ω_disp)` with
    /// `ω_adv = k_max (max|v| + max|B|)` and, for the stress model,
    /// `ω_disp = k_max³`, where `k_max` is the dealias cutoff.
    pub fn dt_max(state: &MhdState, model: Model) -> f64 {
        let k_max = state.grid().cutoff() as f64;
        let mut omega = k_max * (state.v().max_magnitude() + state.b().max_magnitude());
        if model == Model::Stress {
            omega = omega.max(k_max.powi(3));
        }
        if omega == 0.0 {
            f64::INFINITY
        } else {
            RK4_IMAGINARY_EXTENT / omega
        }
    }

    pub fn check_stability(&self, state: &MhdState, model: Model) -> Result<()> {
        let limit = self.stability_factor * Self::dt_max(state, model);
        if self.dt > limit {
            return Err(Error::config(format!(
                "dt = {} exceeds the stability limit {limit:.6e}",
                self.dt
            )));
        }
        Ok(())
    }
}

fn stage(state: &MhdState, h: f64, k: &StateRate) -> MhdState {
    MhdState::from_projected(
        state.v().axpy(h, &k.dv),
        state.b().axpy(h, &k.db),
        state.t() + h,
    )
}

/// RK4 increment `(Δv, ΔB)` for one step of length `dt`, projected and
/// dealiased.
pub fn rk4_increment(state: &MhdState, dt: f64, model: Model) -> Result<StateRate> {
    let k1 = mhd_rhs(state, model)?;
    let k2 = mhd_rhs(&stage(state, 0.5 * dt, &k1), model)?;
    let k3 = mhd_rhs(&stage(state, 0.5 * dt, &k2), model)?;
    let k4 = mhd_rhs(&stage(state, dt, &k3), model)?;
    let w = dt / 6.0;
    let combine = |parts: [&SpectralField; 4]| {
        (parts[0] + parts[3])
            .axpy(2.0, &(parts[1] + parts[2]))
            .map(|c| c * w)
            .leray_project()
            .dealias()
    };
    Ok(StateRate {
        dv: combine([&k1.dv, &k2.dv, &k3.dv, &k4.dv]),
        db: combine([&k1.db, &k2.db, &k3.db, &k4.db]),
    })
}

/// One RK4 step of length `dt`.
pub fn rk4_step(state: &MhdState, dt: f64, model: Model) -> Result<MhdState> {
    let inc = rk4_increment(state, dt, model)?;
    let next = MhdState::from_projected(state.v() + &inc.dv, state.b() + &inc.db, state.t() + dt);
    if !next.is_finite() {
        return Err(Error::BlowUp {
            t_last: state.t(),
            records: Vec::new(),
        });
    }
    Ok(next)
}

/// `y += delta` with Kahan compensation; `carry` holds the low-order bits lost
/// so far and must start at zero.
fn compensated_add(y: &mut SpectralField, carry: &mut SpectralField, delta: &SpectralField) {
    for c in 0..y.n_components() {
        let ys = y.component_mut(c).coeffs_mut();
        let cs = carry.component_mut(c).coeffs_mut();
        for ((yi, ci), &di) in ys
            .iter_mut()
            .zip(cs.iter_mut())
            .zip(delta.component(c).coeffs())
        {
            let corrected = di - *ci;
            let sum = *yi + corrected;
            *ci = (sum - *yi) - corrected;
            *yi = sum;
        }
    }
}

/// Final state plus the sampled diagnostics.
#[derive(Clone, Debug)]
pub struct RunOutput {
    pub state: MhdState,
    pub records: Vec<InvariantRecord>,
}

/// Integrate from `initial` over a span of `control.t_end`, so the final
/// time is `initial.t() + control.t_end`.
///
/// Diagnostics are sampled at the start, every `sample_every` steps, and at
/// the end. `on_step` sees the state after each step (step index from 1).
/// On blow-up the returned error carries every record taken so far. The state
/// update uses compensated summation, so roundoff does not grow with the
/// number of steps.
pub fn integrate(
    initial: MhdState,
    model: Model,
    control: &StepControl,
    mut on_step: impl FnMut(usize, &MhdState) -> Result<()>,
) -> Result<RunOutput> {
    control.check_stability(&initial, model)?;
    let n_steps = control.n_steps();
    let mut records = vec![InvariantRecord::sample(&initial)];
    let grid = initial.grid();
    let t0 = initial.t();
    let (mut v, mut b) = (initial.v().clone(), initial.b().clone());
    let (mut carry_v, mut carry_b) = (SpectralField::zeros(grid), SpectralField::zeros(grid));
    let mut state = initial;
    for step in 1..=n_steps {
        let dt = control.time_at(step) - control.time_at(step - 1);
        let t_next = t0 + control.time_at(step);
        let t_prev = state.t();
        let inc = rk4_increment(&state, dt, model)?;
        compensated_add(&mut v, &mut carry_v, &inc.dv);
        compensated_add(&mut b, &mut carry_b, &inc.db);
        state = MhdState::from_projected(v.clone(), b.clone(), t_next);
        if !state.is_finite() {
            return Err(Error::BlowUp {
                t_last: t_prev,
                records,
            });
        }
        if step % control.sample_every == 0 || step == n_steps {
            records.push(InvariantRecord::sample(&state));
        }
        on_step(step, &state)?;
    }
    Ok(RunOutput { state, records })
}

/// Build the initial state described by `config` and integrate it.
pub fn run(config: &SimConfig) -> Result<RunOutput> {
    let initial = crate::config::make_initial_state(config)?;
    integrate(initial, config.model, &config.control, |_, _| Ok(()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagnostics::alfven_exact;
    use crate::spectral::TorusGrid;

    fn grid() -> TorusGrid {
        TorusGrid::new(2, 16).unwrap()
    }

    #[test]
    fn steady_state_is_fixed() {
        let g = grid();
        let c = SpectralField::from_fn(g, |x| [0.1 * x[1].cos(), 0.0, 0.0]);
        let s = MhdState::new(c.clone(), c, 0.0).unwrap();
        let next = rk4_step(&s, 1e-3, Model::Stress).unwrap();
        assert!(next.distance(&s) < 1e-13);
        assert_eq!(next.t(), 1e-3);
    }

    #[test]
    fn zero_state_stays_zero() {
        let s = MhdState::zero(grid());
        let next = rk4_step(&s, 1e-2, Model::Stress).unwrap();
        assert_eq!(next.distance(&s), 0.0);
    }

    #[test]
    fn alfven_single_step() {
        let g = grid();
        let w = SpectralField::from_fn(g, |x| [x[1].sin(), 0.0, 0.0]);
        let b0 = [0.0, 1.0];
        let s0 = alfven_exact(&w, &b0, 0.0).unwrap();
        let dt = 1e-2;
        let s1 = rk4_step(&s0, dt, Model::Stress).unwrap();
        let exact = SpectralField::from_fn(g, |x| [(x[1] + dt).sin(), 0.0, 0.0]);
        // local RK4 error for a unit-frequency mode is about dt⁵/120 relative
        let err = (s1.v() - &exact).norm() / exact.norm();
        assert!(err < 1e-10, "err = {err:e}");
    }

    #[test]
    fn step_count_and_sampling() {
        let c = StepControl::new(0.1, 1.0, 3, 0.9).unwrap();
        assert_eq!(c.n_steps(), 10);
        let c = StepControl::new(0.3, 1.0, 1, 0.9).unwrap();
        assert_eq!(c.n_steps(), 4);
        assert!((c.time_at(4) - 1.0).abs() < 1e-15);
        assert_eq!(StepControl::new(0.1, 0.0, 1, 0.9).unwrap().n_steps(), 0);

        let g = grid();
        let c = SpectralField::from_fn(g, |x| [0.1 * x[1].cos(), 0.0, 0.0]);
        let s = MhdState::new(c.clone(), c, 0.0).unwrap();
        let ctl = StepControl::new(0.01, 0.1, 3, 0.9).unwrap();
        let out = integrate(s, Model::Classical, &ctl, |_, _| Ok(())).unwrap();
        // t = 0, steps 3, 6, 9, and the final step 10
        assert_eq!(out.records.len(), 5);
        assert!((out.records.last().unwrap().t - 0.1).abs() < 1e-15);
    }

    #[test]
    fn span_is_measured_from_the_initial_time() {
        let c = SpectralField::from_fn(grid(), |x| [0.1 * x[1].cos(), 0.0, 0.0]);
        let s = MhdState::new(c.clone(), c, 2.0).unwrap();
        let ctl = StepControl::new(0.01, 0.05, 2, 0.9).unwrap();
        let out = integrate(s, Model::Stress, &ctl, |_, _| Ok(())).unwrap();
        assert!((out.state.t() - 2.05).abs() < 1e-15);
        assert_eq!(out.records[0].t, 2.0);
    }

    #[test]
    fn control_validation() {
        assert!(StepControl::new(0.0, 1.0, 1, 0.5).is_err());
        assert!(StepControl::new(0.1, -1.0, 1, 0.5).is_err());
        assert!(StepControl::new(0.1, 1.0, 0, 0.5).is_err());
        match StepControl::new(-1.0, 1.0, 0, 2.0) {
            Err(Error::Config(v)) => assert_eq!(v.len(), 3),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unstable_dt_rejected() {
        let g = TorusGrid::new(2, 32).unwrap();
        let ctl = StepControl::new(1e-2, 1.0, 1, 0.9).unwrap();
        // ω_disp = 10³ gives dt_max = 2.8e-3
        let dt_max = StepControl::dt_max(&MhdState::zero(g), Model::Stress);
        assert!((dt_max - 2.8e-3).abs() < 1e-15);
        assert!(ctl
            .check_stability(&MhdState::zero(g), Model::Stress)
            .is_err());
        assert!(ctl
            .check_stability(&MhdState::zero(g), Model::Classical)
            .is_ok());
    }

    #[test]
    fn blow_up_is_reported() {
        let g = grid();
        let mut v = SpectralField::from_fn(g, |x| [x[1].cos(), 0.0, 0.0]);
        v.component_mut(0).coeffs_mut()[g.index_of(&[0, 1]).unwrap()] =
            num_complex::Complex64::new(f64::NAN, 0.0);
        let s = MhdState::from_projected(v, SpectralField::zeros(g), 0.25);
        match rk4_step(&s, 1e-3, Model::Classical) {
            Err(Error::BlowUp { t_last, .. }) => assert_eq!(t_last, 0.25),
            other => panic!("{other:?}"),
        }
    }
}
