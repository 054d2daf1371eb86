//! Run configuration: a TOML document parsed into a validated [`SimConfig`],
//! and the deterministic initial-condition recipes it names.
//!
//! ```toml
//! dim = 2
//! n_points = 32
//! model = "stress"          # or "classical"
//! dt = 5e-4
//! t_end = 1.0
//! # optional: alpha = 1.0, beta = 0.0, sample_every = 10, stability_factor = 0.9
//!
//! [ic]
//! kind = "random-bandlimited"
//! seed = 7
//! k_cap = 4
//! amplitude = 0.1
//! # optional: correlation = 0.5, mean_velocity = [0.0, 0.0]
//!
//! [output]                  # every key optional
//! timeseries = "run.csv"
//! snapshot_prefix = "snap"
//! snapshot_every = 100
//! final_snapshot = "final.mhdc"
//! ```
//!
//! Other `ic.kind` values:
//!
//! * `"alfven"` with `b0 = [..]` (default `e₂`) and `w = [mode, ..]`
//!   (default `0.1 sin(x₂) e₁`);
//! * `"aligned-steady"` with `amplitude`, giving `v = B = amplitude·cos(x₂) e₁`;
//! * `"explicit-modes"` with `v = [mode, ..]` and `b = [mode, ..]`.
//!
//! A mode is an inline table `{ component = 1, k = [0, 1], re = 0.0, im = -0.05 }`
//! with a 1-based component. Its conjugate partner at `-k` is filled in so the
//! field is real.

use std::path::PathBuf;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use toml::{Table, Value};

use crate::diagnostics::alfven_exact;
use crate::dynamics::{MhdState, Model, StressWeights};
use crate::error::{Error, Result};
use crate::integrator::StepControl;
use crate::spectral::{random_solenoidal, Scalar, SpectralField, TorusGrid};

/// One Fourier mode of a real field.
#[derive(Clone, Debug, PartialEq)]
pub struct ModeSpec {
    /// 0-based component index.
    pub component: usize,
    pub k: Vec<i64>,
    pub coeff: Complex64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum InitialCondition {
    RandomBandlimited {
        seed: u64,
        k_cap: usize,
        amplitude: f64,
        /// Fraction of `B` drawn from the same random field as `v`.
        correlation: f64,
        /// Added to the velocity mean mode after normalization.
        mean_velocity: Vec<f64>,
    },
    Alfven {
        b0: Vec<f64>,
        w: Vec<ModeSpec>,
    },
    AlignedSteady {
        amplitude: f64,
    },
    ExplicitModes {
        v: Vec<ModeSpec>,
        b: Vec<ModeSpec>,
    },
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct OutputSpec {
    pub timeseries: Option<PathBuf>,
    pub snapshot_prefix: Option<PathBuf>,
    pub snapshot_every: Option<usize>,
    pub final_snapshot: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SimConfig {
    pub grid: TorusGrid,
    pub model: Model,
    pub weights: StressWeights,
    pub control: StepControl,
    pub ic: InitialCondition,
    pub output: OutputSpec,
}

impl SimConfig {
    pub const DEFAULT_CORRELATION: f64 = 0.5;

    /// Default Alfvén profile `0.1 sin(x₂) e₁`.
    pub fn default_alfven_profile() -> Vec<ModeSpec> {
        vec![ModeSpec {
            component: 0,
            k: vec![0, 1],
            coeff: Complex64::new(0.0, -0.05),
        }]
    }
}

/// Collects every problem found while walking a table.
struct Reader<'t, 'e> {
    table: &'t Table,
    prefix: &'static str,
    errors: &'e mut Vec<String>,
}

impl<'t> Reader<'t, '_> {
    fn name(&self, key: &str) -> String {
        format!("{}{key}", self.prefix)
    }

    fn check_keys(&mut self, allowed: &[&str]) {
        for key in self.table.keys() {
            if !allowed.contains(&key.as_str()) {
                let name = self.name(key);
                self.errors.push(format!("unknown key `{name}`"));
            }
        }
    }

    fn missing(&mut self, key: &str) {
        let name = self.name(key);
        self.errors.push(format!("missing required key `{name}`"));
    }

    fn wrong_type(&mut self, key: &str, want: &str) {
        let name = self.name(key);
        self.errors.push(format!("`{name}` must be {want}"));
    }

    fn float(&mut self, key: &str) -> Option<f64> {
        match self.table.get(key) {
            None => None,
            Some(v) => match as_float(v) {
                Some(x) => Some(x),
                None => {
                    self.wrong_type(key, "a number");
                    None
                }
            },
        }
    }

    fn uint(&mut self, key: &str) -> Option<usize> {
        match self.table.get(key) {
            None => None,
            Some(Value::Integer(i)) if *i >= 0 => Some(*i as usize),
            Some(_) => {
                self.wrong_type(key, "a non-negative integer");
                None
            }
        }
    }

    fn string(&mut self, key: &str) -> Option<&'t str> {
        match self.table.get(key) {
            None => None,
            Some(Value::String(s)) => Some(s.as_str()),
            Some(_) => {
                self.wrong_type(key, "a string");
                None
            }
        }
    }

    fn float_array(&mut self, key: &str) -> Option<Vec<f64>> {
        match self.table.get(key) {
            None => None,
            Some(Value::Array(a)) => match a.iter().map(as_float).collect::<Option<Vec<_>>>() {
                Some(v) => Some(v),
                None => {
                    self.wrong_type(key, "an array of numbers");
                    None
                }
            },
            Some(_) => {
                self.wrong_type(key, "an array of numbers");
                None
            }
        }
    }

    fn modes(&mut self, key: &str) -> Option<Vec<ModeSpec>> {
        let name = self.name(key);
        let items = match self.table.get(key) {
            None => return None,
            Some(Value::Array(a)) => a,
            Some(_) => {
                self.wrong_type(key, "an array of mode tables");
                return None;
            }
        };
        let mut out = Vec::with_capacity(items.len());
        for (i, item) in items.iter().enumerate() {
            match parse_mode(item) {
                Ok(m) => out.push(m),
                Err(e) => self.errors.push(format!("`{name}[{i}]`: {e}")),
            }
        }
        Some(out)
    }
}

fn as_float(v: &Value) -> Option<f64> {
    match v {
        Value::Float(x) => Some(*x),
        Value::Integer(i) => Some(*i as f64),
        _ => None,
    }
}

fn parse_mode(item: &Value) -> std::result::Result<ModeSpec, String> {
    let t = item.as_table().ok_or("expected a table")?;
    for key in t.keys() {
        if !["component", "k", "re", "im"].contains(&key.as_str()) {
            return Err(format!("unknown key `{key}`"));
        }
    }
    let component = match t.get("component") {
        Some(Value::Integer(c)) if *c >= 1 => (*c - 1) as usize,
        Some(_) => return Err("`component` must be an integer >= 1".into()),
        None => return Err("missing `component`".into()),
    };
    let k = match t.get("k") {
        Some(Value::Array(a)) => a
            .iter()
            .map(|x| x.as_integer())
            .collect::<Option<Vec<_>>>()
            .ok_or("`k` must be an array of integers")?,
        Some(_) => return Err("`k` must be an array of integers".into()),
        None => return Err("missing `k`".into()),
    };
    let re = t
        .get("re")
        .map(as_float)
        .unwrap_or(Some(0.0))
        .ok_or("`re` must be a number")?;
    let im = t
        .get("im")
        .map(as_float)
        .unwrap_or(Some(0.0))
        .ok_or("`im` must be a number")?;
    Ok(ModeSpec {
        component,
        k,
        coeff: Complex64::new(re, im),
    })
}

fn check_modes(modes: &[ModeSpec], grid: TorusGrid, what: &str, errors: &mut Vec<String>) {
    let cut = grid.cutoff() as i64;
    for (i, m) in modes.iter().enumerate() {
        if m.component >= grid.dim() {
            errors.push(format!(
                "{what}[{i}]: component {} exceeds dim = {}",
                m.component + 1,
                grid.dim()
            ));
        }
        if m.k.len() != grid.dim() {
            errors.push(format!(
                "{what}[{i}]: k has {} entries, expected {}",
                m.k.len(),
                grid.dim()
            ));
        } else if m.k.iter().any(|ka| ka.abs() > cut) {
            errors.push(format!(
                "{what}[{i}]: k = {:?} exceeds the dealias cutoff {cut}",
                m.k
            ));
        }
    }
}

const TOP_KEYS: &[&str] = &[
    "dim",
    "n_points",
    "model",
    "alpha",
    "beta",
    "dt",
    "t_end",
    "sample_every",
    "stability_factor",
    "ic",
    "output",
];

/// Parse and validate a configuration document. On failure the error lists
/// every problem found.
pub fn parse_config(text: &str) -> Result<SimConfig> {
    let root: Table = text
        .parse()
        .map_err(|e: toml::de::Error| Error::config(format!("malformed TOML: {}", e.message())))?;
    let mut errors = Vec::new();
    let mut top = Reader {
        table: &root,
        prefix: "",
        errors: &mut errors,
    };
    top.check_keys(TOP_KEYS);

    let dim = top.uint("dim");
    let n_points = top.uint("n_points");
    let model = top.string("model");
    let alpha = top.float("alpha").unwrap_or(1.0);
    let beta = top.float("beta").unwrap_or(0.0);
    let dt = top.float("dt");
    let t_end = top.float("t_end");
    let sample_every = top
        .uint("sample_every")
        .unwrap_or(StepControl::DEFAULT_SAMPLE_EVERY);
    let stability_factor = top
        .float("stability_factor")
        .unwrap_or(StepControl::DEFAULT_STABILITY_FACTOR);
    for key in ["dim", "n_points", "model", "dt", "t_end", "ic"] {
        if !root.contains_key(key) {
            top.missing(key);
        }
    }

    let grid = match (dim, n_points) {
        (Some(d), Some(n)) => TorusGrid::new(d, n)
            .map_err(|e| errors.push(e.to_string()))
            .ok(),
        _ => None,
    };
    let model = model.and_then(|m| {
        m.parse::<Model>()
            .map_err(|e| errors.push(e.to_string()))
            .ok()
    });
    let weights = StressWeights::new(alpha, beta)
        .map_err(|e| errors.push(e.to_string()))
        .ok();
    let control = match (dt, t_end) {
        (Some(dt), Some(t_end)) => {
            match StepControl::new(dt, t_end, sample_every, stability_factor) {
                Ok(c) => Some(c),
                Err(Error::Config(v)) => {
                    errors.extend(v);
                    None
                }
                Err(e) => {
                    errors.push(e.to_string());
                    None
                }
            }
        }
        _ => None,
    };

    let ic = match root.get("ic") {
        Some(Value::Table(t)) => parse_ic(t, grid, &mut errors),
        Some(_) => {
            errors.push("`ic` must be a table".into());
            None
        }
        None => None,
    };
    let output = match root.get("output") {
        Some(Value::Table(t)) => parse_output(t, &mut errors),
        Some(_) => {
            errors.push("`output` must be a table".into());
            OutputSpec::default()
        }
        None => OutputSpec::default(),
    };

    match (grid, model, weights, control, ic) {
        (Some(grid), Some(model), Some(weights), Some(control), Some(ic)) if errors.is_empty() => {
            Ok(SimConfig {
                grid,
                model,
                weights,
                control,
                ic,
                output,
            })
        }
        _ => Err(Error::Config(errors)),
    }
}

fn parse_ic(
    t: &Table,
    grid: Option<TorusGrid>,
    errors: &mut Vec<String>,
) -> Option<InitialCondition> {
    let mut r = Reader {
        table: t,
        prefix: "ic.",
        errors,
    };
    let kind = match r.string("kind") {
        Some(k) => k,
        None => {
            if !t.contains_key("kind") {
                r.missing("kind");
            }
            return None;
        }
    };
    let positive_amplitude = |r: &mut Reader| -> Option<f64> {
        match r.float("amplitude") {
            Some(a) if a > 0.0 && a.is_finite() => Some(a),
            Some(a) => {
                r.errors
                    .push(format!("ic.amplitude must be positive, got {a}"));
                None
            }
            None => {
                if !t.contains_key("amplitude") {
                    r.missing("amplitude");
                }
                None
            }
        }
    };
    match kind {
        "random-bandlimited" => {
            r.check_keys(&[
                "kind",
                "seed",
                "k_cap",
                "amplitude",
                "correlation",
                "mean_velocity",
            ]);
            let seed = r.uint("seed");
            let k_cap = r.uint("k_cap");
            let amplitude = positive_amplitude(&mut r);
            let correlation = r
                .float("correlation")
                .unwrap_or(SimConfig::DEFAULT_CORRELATION);
            let mean_velocity = r.float_array("mean_velocity");
            for key in ["seed", "k_cap"] {
                if !t.contains_key(key) {
                    r.missing(key);
                }
            }
            if !(-1.0..=1.0).contains(&correlation) {
                r.errors.push(format!(
                    "ic.correlation must lie in [-1, 1], got {correlation}"
                ));
            }
            if let (Some(k), Some(g)) = (k_cap, grid) {
                if k == 0 || k > g.cutoff() {
                    r.errors.push(format!(
                        "ic.k_cap = {k} must lie in 1..={} (dealias cutoff for n_points = {})",
                        g.cutoff(),
                        g.n_points()
                    ));
                }
            }
            let dim = grid.map(|g| g.dim());
            let mean_velocity = match (mean_velocity, dim) {
                (Some(m), Some(d)) if m.len() != d => {
                    r.errors.push(format!(
                        "ic.mean_velocity has {} entries, expected {d}",
                        m.len()
                    ));
                    None
                }
                (Some(m), _) => Some(m),
                (None, Some(d)) => Some(vec![0.0; d]),
                (None, None) => None,
            };
            Some(InitialCondition::RandomBandlimited {
                seed: seed? as u64,
                k_cap: k_cap?,
                amplitude: amplitude?,
                correlation,
                mean_velocity: mean_velocity?,
            })
        }
        "alfven" => {
            r.check_keys(&["kind", "b0", "w"]);
            let b0 = r.float_array("b0");
            let w = r
                .modes("w")
                .unwrap_or_else(SimConfig::default_alfven_profile);
            let g = grid?;
            let b0 = b0.unwrap_or_else(|| {
                let mut e = vec![0.0; g.dim()];
                e[1] = 1.0;
                e
            });
            if b0.len() != g.dim() {
                errors.push(format!(
                    "ic.b0 has {} entries, expected {}",
                    b0.len(),
                    g.dim()
                ));
            }
            check_modes(&w, g, "ic.w", errors);
            Some(InitialCondition::Alfven { b0, w })
        }
        "aligned-steady" => {
            r.check_keys(&["kind", "amplitude"]);
            Some(InitialCondition::AlignedSteady {
                amplitude: positive_amplitude(&mut r)?,
            })
        }
        "explicit-modes" => {
            r.check_keys(&["kind", "v", "b"]);
            let v = r.modes("v").unwrap_or_default();
            let b = r.modes("b").unwrap_or_default();
            let g = grid?;
            check_modes(&v, g, "ic.v", errors);
            check_modes(&b, g, "ic.b", errors);
            Some(InitialCondition::ExplicitModes { v, b })
        }
        other => {
            r.errors.push(format!(
                "ic.kind must be one of random-bandlimited, alfven, aligned-steady, explicit-modes; got {other:?}"
            ));
            None
        }
    }
}

fn parse_output(t: &Table, errors: &mut Vec<String>) -> OutputSpec {
    let mut r = Reader {
        table: t,
        prefix: "output.",
        errors,
    };
    r.check_keys(&[
        "timeseries",
        "snapshot_prefix",
        "snapshot_every",
        "final_snapshot",
    ]);
    let out = OutputSpec {
        timeseries: r.string("timeseries").map(PathBuf::from),
        snapshot_prefix: r.string("snapshot_prefix").map(PathBuf::from),
        snapshot_every: r.uint("snapshot_every"),
        final_snapshot: r.string("final_snapshot").map(PathBuf::from),
    };
    if out.snapshot_every == Some(0) {
        errors.push("output.snapshot_every must be at least 1".into());
    }
    if out.snapshot_every.is_some() != out.snapshot_prefix.is_some() {
        errors
            .push("output.snapshot_every and output.snapshot_prefix must be given together".into());
    }
    out
}

/// Real field holding the given modes and their conjugates, projected and
/// dealiased.
pub fn field_from_modes(grid: TorusGrid, modes: &[ModeSpec]) -> Result<SpectralField> {
    let mut comps = vec![Scalar::zeros(grid); grid.dim()];
    for m in modes {
        let comp = comps.get_mut(m.component).ok_or(Error::IndexOutOfRange {
            what: "component",
            index: m.component,
            limit: grid.dim(),
        })?;
        let idx = grid
            .index_of(&m.k)
            .ok_or_else(|| Error::config(format!("k = {:?} out of range", m.k)))?;
        let existing = comp.coeffs()[idx];
        comp.set_mode_real(&m.k, existing + m.coeff)?;
    }
    Ok(SpectralField::from_components(comps)?
        .leray_project()
        .dealias())
}

fn normalize(f: SpectralField, amplitude: f64) -> SpectralField {
    let peak = f.max_magnitude();
    if peak == 0.0 {
        f
    } else {
        &f * (amplitude / peak)
    }
}

/// Seeded random state: `v = û₁`, `B = c û₁ + √(1-c²) û₂`, each rescaled so
/// that its pointwise maximum equals `amplitude`.
pub fn random_state(
    grid: TorusGrid,
    seed: u64,
    k_cap: usize,
    amplitude: f64,
    correlation: f64,
) -> MhdState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u1 = random_solenoidal(grid, k_cap, &mut rng).dealias();
    let u2 = random_solenoidal(grid, k_cap, &mut rng).dealias();
    let u1 = normalize(u1, 1.0);
    let u2 = normalize(u2, 1.0);
    let c = correlation;
    let b = (&u1 * c).axpy((1.0 - c * c).sqrt(), &u2);
    MhdState::from_projected(normalize(u1, amplitude), normalize(b, amplitude), 0.0)
}

/// Build the initial state a configuration describes. Deterministic.
pub fn make_initial_state(config: &SimConfig) -> Result<MhdState> {
    let grid = config.grid;
    match &config.ic {
        InitialCondition::RandomBandlimited {
            seed,
            k_cap,
            amplitude,
            correlation,
            mean_velocity,
        } => {
            let s = random_state(grid, *seed, *k_cap, *amplitude, *correlation);
            let mut v = s.v().clone();
            for (c, &m) in mean_velocity.iter().enumerate() {
                v.component_mut(c).coeffs_mut()[0] += m;
            }
            MhdState::new(v, s.b().clone(), 0.0)
        }
        InitialCondition::Alfven { b0, w } => alfven_exact(&field_from_modes(grid, w)?, b0, 0.0),
        InitialCondition::AlignedSteady { amplitude } => {
            let a = *amplitude;
            let f = SpectralField::from_fn(grid, |x| [a * x[1].cos(), 0.0, 0.0]);
            MhdState::new(f.clone(), f, 0.0)
        }
        InitialCondition::ExplicitModes { v, b } => {
            MhdState::new(field_from_modes(grid, v)?, field_from_modes(grid, b)?, 0.0)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
        dim = 2
        n_points = 32
        model = "stress"
        dt = 5e-4
        t_end = 1.0
        [ic]
        kind = "random-bandlimited"
        seed = 1
        k_cap = 4
        amplitude = 0.1
    "#;

    fn errors_of(text: &str) -> Vec<String> {
        match parse_config(text) {
            Err(Error::Config(v)) => v,
            other => panic!("expected config error, got {other:?}"),
        }
    }

    #[test]
    fn minimal_config_gets_defaults() {
        let c = parse_config(MINIMAL).unwrap();
        assert_eq!(c.grid, TorusGrid::new(2, 32).unwrap());
        assert_eq!(c.model, Model::Stress);
        assert_eq!(c.weights, StressWeights::default());
        assert_eq!(c.control.sample_every, 10);
        assert_eq!(c.control.stability_factor, 0.9);
        assert_eq!(c.output, OutputSpec::default());
        match c.ic {
            InitialCondition::RandomBandlimited {
                correlation,
                ref mean_velocity,
                ..
            } => {
                assert_eq!(correlation, 0.5);
                assert_eq!(mean_velocity, &vec![0.0, 0.0]);
            }
            ref other => panic!("{other:?}"),
        }
    }

    #[test]
    fn weight_sum_error_names_alpha_beta() {
        let text = format!("alpha = 0.5\nbeta = 0.4\n{MINIMAL}");
        let errs = errors_of(&text);
        assert_eq!(errs.len(), 1);
        assert!(errs[0].contains("alpha + beta"), "{errs:?}");
    }

    #[test]
    fn k_cap_beyond_cutoff() {
        let errs = errors_of(&MINIMAL.replace("k_cap = 4", "k_cap = 20"));
        assert_eq!(errs.len(), 1);
        assert!(errs[0].contains("k_cap"), "{errs:?}");
    }

    #[test]
    fn every_violation_is_listed() {
        let text = r#"
            dim = 4
            n_points = 30
            model = "ideal"
            alpha = 2.0
            dt = -1.0
            colour = "red"
            [ic]
            kind = "aligned-steady"
            amplitude = -1.0
        "#;
        let errs = errors_of(text);
        for needle in [
            "colour",
            "t_end",
            "dim",
            "model",
            "alpha + beta",
            "amplitude",
        ] {
            assert!(
                errs.iter().any(|e| e.contains(needle)),
                "{needle} not in {errs:?}"
            );
        }
    }

    #[test]
    fn malformed_toml_is_config_error() {
        assert!(matches!(parse_config("dim = = 2"), Err(Error::Config(_))));
    }

    #[test]
    fn aligned_steady_recipe() {
        let text = MINIMAL.replace(
            "kind = \"random-bandlimited\"\n        seed = 1\n        k_cap = 4\n",
            "kind = \"aligned-steady\"\n",
        );
        let s = make_initial_state(&parse_config(&text).unwrap()).unwrap();
        let expected = SpectralField::from_fn(s.grid(), |x| [0.1 * x[1].cos(), 0.0, 0.0]);
        assert!((s.v() - &expected).norm() < 1e-15);
        assert_eq!(s.v(), s.b());
    }

    #[test]
    fn alfven_recipe_matches_exact_solution() {
        let text = r#"
            dim = 2
            n_points = 16
            model = "stress"
            dt = 1e-3
            t_end = 1.0
            [ic]
            kind = "alfven"
            b0 = [0.0, 1.0]
            w = [{ component = 1, k = [0, 1], im = -0.5 }]
        "#;
        let s = make_initial_state(&parse_config(text).unwrap()).unwrap();
        let w = SpectralField::from_fn(s.grid(), |x| [x[1].sin(), 0.0, 0.0]);
        assert!((s.v() - &w).norm() < 1e-14);
        let b0 = SpectralField::from_fn(s.grid(), |_| [0.0, 1.0, 0.0]);
        assert!((s.b() - &(&w + &b0)).norm() < 1e-14);
    }

    #[test]
    fn default_alfven_profile() {
        let text = MINIMAL.replace(
            "kind = \"random-bandlimited\"\n        seed = 1\n        k_cap = 4\n        amplitude = 0.1",
            "kind = \"alfven\"",
        );
        let s = make_initial_state(&parse_config(&text).unwrap()).unwrap();
        let w = SpectralField::from_fn(s.grid(), |x| [0.1 * x[1].sin(), 0.0, 0.0]);
        assert!((s.v() - &w).norm() < 1e-15);
        assert!((s.b().mean()[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn seeded_state_is_deterministic_and_normalized() {
        let c = parse_config(MINIMAL).unwrap();
        let a = make_initial_state(&c).unwrap();
        let b = make_initial_state(&c).unwrap();
        assert_eq!(a, b);
        assert!((a.v().max_magnitude() - 0.1).abs() < 1e-15);
        assert!((a.b().max_magnitude() - 0.1).abs() < 1e-15);
        assert!(a.v().divergence_residual() < 1e-13);
        let other = parse_config(&MINIMAL.replace("seed = 1", "seed = 2")).unwrap();
        assert_ne!(make_initial_state(&other).unwrap(), a);
    }

    #[test]
    fn mean_velocity_injected() {
        let text = format!("{MINIMAL}\n        mean_velocity = [0.01, -0.02]");
        let s = make_initial_state(&parse_config(&text).unwrap()).unwrap();
        let m = s.v().mean();
        assert!((m[0] - 0.01).abs() < 1e-16 && (m[1] + 0.02).abs() < 1e-16);
    }

    #[test]
    fn explicit_modes_are_real_and_projected() {
        let text = r#"
            dim = 2
            n_points = 16
            model = "classical"
            dt = 1e-3
            t_end = 0.1
            [ic]
            kind = "explicit-modes"
            v = [{ component = 1, k = [0, 1], re = 0.5 }]
            b = [{ component = 1, k = [1, 0], re = 0.5 }]
        "#;
        let s = make_initial_state(&parse_config(text).unwrap()).unwrap();
        let expected = SpectralField::from_fn(s.grid(), |x| [x[1].cos(), 0.0, 0.0]);
        assert!((s.v() - &expected).norm() < 1e-14);
        // cos(x₁) e₁ is a pure gradient
        assert!(s.b().norm() < 1e-14);
    }

    #[test]
    fn explicit_mode_errors() {
        let text = r#"
            dim = 2
            n_points = 16
            model = "classical"
            dt = 1e-3
            t_end = 0.1
            [ic]
            kind = "explicit-modes"
            v = [{ component = 3, k = [0, 9] }, { component = 0, k = [1] }]
        "#;
        let errs = errors_of(text);
        assert_eq!(errs.len(), 3, "{errs:?}");
    }
}
