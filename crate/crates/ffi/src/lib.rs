//! C ABI over the `asym_mhd` simulator.
//!
//! A simulation is an opaque [`AmhdSimulation`] created from a TOML
//! configuration and released with [`amhd_simulation_free`]. Every fallible
//! call returns an [`AmhdStatus`]; on failure a description is available from
//! [`amhd_last_error_message`] on the same thread. Status values 2, 3 and 4
//! match the exit codes of the `asym-mhd` command-line tool.
//!
//! No function unwinds across the boundary: panics are caught and reported as
//! [`AmhdStatus::Panic`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use asym_mhd::config::{make_initial_state, parse_config};
use asym_mhd::dynamics::{stress_tensor_field, StressWeights};
use asym_mhd::io::write_snapshot;
use asym_mhd::verify::{algebra_suite, SuiteOptions};
use asym_mhd::{integrate, Error, InvariantRecord, MhdState, Model, StepControl};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AmhdStatus {
    Ok = 0,
    Error = 1,
    ConfigError = 2,
    BlowUp = 3,
    PropertyFailure = 4,
    NullPointer = 5,
    InvalidArgument = 6,
    Panic = 7,
}

/// Which field [`amhd_simulation_copy_coefficients`] reads.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AmhdField {
    Velocity = 0,
    Magnetic = 1,
}

/// Diagnostics of the current state. Unused momentum entries are zero.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct AmhdInvariants {
    pub t: f64,
    pub energy: f64,
    pub cross_helicity: f64,
    pub momentum: [f64; 3],
    /// False on 2D grids and for a magnetic field with nonzero mean.
    pub has_magnetic_helicity: bool,
    pub magnetic_helicity: f64,
    pub max_div_v: f64,
    pub max_div_b: f64,
}

impl From<&InvariantRecord> for AmhdInvariants {
    fn from(r: &InvariantRecord) -> Self {
        let mut momentum = [0.0; 3];
        momentum[..r.momentum.len()].copy_from_slice(&r.momentum);
        Self {
            t: r.t,
            energy: r.energy,
            cross_helicity: r.cross_helicity,
            momentum,
            has_magnetic_helicity: r.magnetic_helicity.is_some(),
            magnetic_helicity: r.magnetic_helicity.unwrap_or(0.0),
            max_div_v: r.max_div_v,
            max_div_b: r.max_div_b,
        }
    }
}

/// Opaque simulation handle.
pub struct AmhdSimulation {
    state: MhdState,
    model: Model,
    weights: StressWeights,
    dt: f64,
    stability_factor: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(CString::new(msg).expect("NUL bytes removed")));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn status_of(err: &Error) -> AmhdStatus {
    match err.exit_code() {
        2 => AmhdStatus::ConfigError,
        3 => AmhdStatus::BlowUp,
        _ => AmhdStatus::Error,
    }
}

/// Run `f`, translating errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), (AmhdStatus, String)>) -> AmhdStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => AmhdStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("internal panic: {msg}"));
            AmhdStatus::Panic
        }
    }
}

fn lift(e: Error) -> (AmhdStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (AmhdStatus, String) {
    (AmhdStatus::NullPointer, format!("{what} is null"))
}

fn invalid(msg: impl Into<String>) -> (AmhdStatus, String) {
    (AmhdStatus::InvalidArgument, msg.into())
}

/// # Safety
/// `s` must be null or point to a NUL-terminated string.
unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, (AmhdStatus, String)> {
    if s.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| invalid(format!("{what} is not valid UTF-8")))
}

/// # Safety
/// `sim` must be null or a live handle from [`amhd_simulation_new`].
unsafe fn sim_ref<'a>(
    sim: *const AmhdSimulation,
) -> Result<&'a AmhdSimulation, (AmhdStatus, String)> {
    sim.as_ref().ok_or_else(|| null("simulation handle"))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn amhd_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message for the most recent failure on this thread, or null if the last
/// call succeeded. Valid until the next library call on this thread.
#[no_mangle]
pub extern "C" fn amhd_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Parse a TOML configuration and build its initial state.
///
/// # Safety
/// `config_toml` must be a NUL-terminated string and `out` a valid pointer.
/// On success `*out` owns a handle that must be released with
/// [`amhd_simulation_free`]; on failure `*out` is set to null.
#[no_mangle]
pub unsafe extern "C" fn amhd_simulation_new(
    config_toml: *const c_char,
    out: *mut *mut AmhdSimulation,
) -> AmhdStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = ptr::null_mut();
        let text = read_str(config_toml, "config_toml")?;
        let config = parse_config(text).map_err(lift)?;
        let state = make_initial_state(&config).map_err(lift)?;
        config
            .control
            .check_stability(&state, config.model)
            .map_err(lift)?;
        let sim = AmhdSimulation {
            state,
            model: config.model,
            weights: config.weights,
            dt: config.control.dt,
            stability_factor: config.control.stability_factor,
        };
        *out = Box::into_raw(Box::new(sim));
        Ok(())
    })
}

/// Release a handle. Null is ignored.
///
/// # Safety
/// `sim` must be null or a handle from [`amhd_simulation_new`] that has not
/// been freed.
#[no_mangle]
pub unsafe extern "C" fn amhd_simulation_free(sim: *mut AmhdSimulation) {
    if !sim.is_null() {
        drop(Box::from_raw(sim));
    }
}

/// Advance by `n_steps` RK4 steps of the configured `dt`. On blow-up the
/// handle keeps the last finite state.
///
/// # Safety
/// `sim` must be a live handle not used concurrently from another thread.
#[no_mangle]
pub unsafe extern "C" fn amhd_simulation_step(
    sim: *mut AmhdSimulation,
    n_steps: usize,
) -> AmhdStatus {
    guard(|| {
        let sim = sim.as_mut().ok_or_else(|| null("simulation handle"))?;
        if n_steps == 0 {
            return Ok(());
        }
        let span = sim.dt * n_steps as f64;
        let control =
            StepControl::new(sim.dt, span, usize::MAX, sim.stability_factor).map_err(lift)?;
        let out = integrate(sim.state.clone(), sim.model, &control, |_, _| Ok(())).map_err(lift)?;
        sim.state = out.state;
        Ok(())
    })
}

/// Current simulation time.
///
/// # Safety
/// `sim` must be a live handle and `out_t` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn amhd_simulation_time(
    sim: *const AmhdSimulation,
    out_t: *mut f64,
) -> AmhdStatus {
    guard(|| {
        let sim = sim_ref(sim)?;
        let out_t = out_t.as_mut().ok_or_else(|| null("out_t"))?;
        *out_t = sim.state.t();
        Ok(())
    })
}

/// Grid dimension and points per axis.
///
/// # Safety
/// `sim` must be a live handle; both out pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn amhd_simulation_grid(
    sim: *const AmhdSimulation,
    out_dim: *mut usize,
    out_n_points: *mut usize,
) -> AmhdStatus {
    guard(|| {
        let sim = sim_ref(sim)?;
        let d = out_dim.as_mut().ok_or_else(|| null("out_dim"))?;
        let n = out_n_points.as_mut().ok_or_else(|| null("out_n_points"))?;
        *d = sim.state.grid().dim();
        *n = sim.state.grid().n_points();
        Ok(())
    })
}

/// Diagnostics of the current state.
///
/// # Safety
/// `sim` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn amhd_simulation_invariants(
    sim: *const AmhdSimulation,
    out: *mut AmhdInvariants,
) -> AmhdStatus {
    guard(|| {
        let sim = sim_ref(sim)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = AmhdInvariants::from(&InvariantRecord::sample(&sim.state));
        Ok(())
    })
}

/// Relative skew part `‖T − Tᵀ‖ / ‖T‖` of the stress tensor of the current
/// state under the configured weights.
///
/// # Safety
/// `sim` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn amhd_simulation_stress_asymmetry(
    sim: *const AmhdSimulation,
    out: *mut f64,
) -> AmhdStatus {
    guard(|| {
        let sim = sim_ref(sim)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let (skew, size) = stress_tensor_field(&sim.state, sim.weights)
            .map_err(lift)?
            .asymmetry();
        *out = if size == 0.0 { 0.0 } else { skew / size };
        Ok(())
    })
}

/// Number of doubles [`amhd_simulation_copy_coefficients`] writes for one
/// component: `2 · n_points^dim`.
///
/// # Safety
/// `sim` must be a live handle and `out_len` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn amhd_simulation_component_len(
    sim: *const AmhdSimulation,
    out_len: *mut usize,
) -> AmhdStatus {
    guard(|| {
        let sim = sim_ref(sim)?;
        let out = out_len.as_mut().ok_or_else(|| null("out_len"))?;
        *out = 2 * sim.state.grid().len();
        Ok(())
    })
}

/// Copy one component's Fourier coefficients as interleaved `(re, im)`
/// pairs in the snapshot ordering (first axis fastest). `component` is
/// 0-based.
///
/// # Safety
/// `sim` must be a live handle and `out` must have room for `capacity`
/// doubles.
#[no_mangle]
pub unsafe extern "C" fn amhd_simulation_copy_coefficients(
    sim: *const AmhdSimulation,
    field: AmhdField,
    component: usize,
    out: *mut f64,
    capacity: usize,
) -> AmhdStatus {
    guard(|| {
        let sim = sim_ref(sim)?;
        if out.is_null() {
            return Err(null("out"));
        }
        let f = match field {
            AmhdField::Velocity => sim.state.v(),
            AmhdField::Magnetic => sim.state.b(),
        };
        if component >= f.n_components() {
            return Err(invalid(format!(
                "component {component} out of range for a {}-component field",
                f.n_components()
            )));
        }
        let coeffs = f.component(component).coeffs();
        if capacity < 2 * coeffs.len() {
            return Err(invalid(format!(
                "capacity {capacity} < required {}",
                2 * coeffs.len()
            )));
        }
        let dst = std::slice::from_raw_parts_mut(out, 2 * coeffs.len());
        for (pair, z) in dst.chunks_exact_mut(2).zip(coeffs) {
            pair[0] = z.re;
            pair[1] = z.im;
        }
        Ok(())
    })
}

/// Write the current state as an `MHDC` snapshot.
///
/// # Safety
/// `sim` must be a live handle and `path` a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn amhd_simulation_write_snapshot(
    sim: *const AmhdSimulation,
    path: *const c_char,
) -> AmhdStatus {
    guard(|| {
        let sim = sim_ref(sim)?;
        let path = read_str(path, "path")?;
        write_snapshot(&sim.state, Path::new(path)).map_err(lift)
    })
}

/// Run the algebra identity suite on a 2D grid. Returns
/// [`AmhdStatus::PropertyFailure`] if any identity misses its default
/// tolerance; `out_worst`, if non-null, receives the largest ratio of residual
/// to tolerance.
///
/// # Safety
/// `out_worst` must be null or a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn amhd_algebra_check(
    seed: u64,
    trials: usize,
    n_points: usize,
    out_worst: *mut f64,
) -> AmhdStatus {
    guard(|| {
        let opts = SuiteOptions {
            seed,
            trials,
            n_points,
            ..SuiteOptions::default()
        };
        let outcomes = algebra_suite(&opts).map_err(lift)?;
        let worst = outcomes
            .iter()
            .map(|c| c.worst / c.tolerance)
            .fold(0.0, f64::max);
        if let Some(w) = out_worst.as_mut() {
            *w = worst;
        }
        match outcomes.iter().find(|c| !c.passed()) {
            None => Ok(()),
            Some(c) => Err((
                AmhdStatus::PropertyFailure,
                format!(
                    "{}: residual {:.3e} exceeds {:.1e}",
                    c.name, c.worst, c.tolerance
                ),
            )),
        }
    })
}
