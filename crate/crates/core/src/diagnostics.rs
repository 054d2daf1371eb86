//! Conserved quantities, divergence residuals and the Alfvén-wave exact
//! solution.

use num_complex::Complex64;

use crate::algebra::ensure_solenoidal;
use crate::dynamics::MhdState;
use crate::error::{Error, Result};
use crate::spectral::{Scalar, SpectralField};

/// One sampled row of diagnostics.
#[derive(Clone, Debug, PartialEq)]
pub struct InvariantRecord {
    pub t: f64,
    pub energy: f64,
    pub cross_helicity: f64,
    pub momentum: Vec<f64>,
    /// Present only on 3D grids with a zero-mean magnetic field.
    pub magnetic_helicity: Option<f64>,
    pub max_div_v: f64,
    pub max_div_b: f64,
}

impl InvariantRecord {
    pub fn sample(state: &MhdState) -> Self {
        let (max_div_v, max_div_b) = divergence_residuals(state);
        Self {
            t: state.t(),
            energy: energy(state),
            cross_helicity: cross_helicity(state),
            momentum: momentum(state),
            magnetic_helicity: magnetic_helicity(state).ok(),
            max_div_v,
            max_div_b,
        }
    }
}

/// `∫ |v|² + |B|² dV`
pub fn energy(state: &MhdState) -> f64 {
    state.v().norm().powi(2) + state.b().norm().powi(2)
}

/// `∫ v·B dV`
pub fn cross_helicity(state: &MhdState) -> f64 {
    state
        .v()
        .inner_product(state.b())
        .expect("state fields share a grid")
}

/// `∫ v dV`
pub fn momentum(state: &MhdState) -> Vec<f64> {
    let vol = state.grid().volume();
    state.v().mean().into_iter().map(|m| vol * m).collect()
}

/// Coulomb-gauge vector potential `Â_k = i k × B̂_k / |k|²`, `Â_0 = 0`.
pub fn vector_potential(b: &SpectralField) -> Result<SpectralField> {
    let grid = b.grid();
    if grid.dim() != 3 {
        return Err(Error::NotThreeDimensional(grid.dim()));
    }
    let mean = b.mean().iter().map(|m| m * m).sum::<f64>().sqrt();
    if mean > 1e-12 * b.norm().max(1.0) {
        return Err(Error::GaugeAmbiguity { mean });
    }
    let t = grid.tables();
    let mut a = vec![vec![Complex64::new(0.0, 0.0); grid.len()]; 3];
    let i = Complex64::new(0.0, 1.0);
    for idx in 1..grid.len() {
        if t.nyquist[idx] {
            continue;
        }
        let k = t.k[idx];
        let bk = [
            b.component(0).coeffs()[idx],
            b.component(1).coeffs()[idx],
            b.component(2).coeffs()[idx],
        ];
        let cross = [
            bk[2] * k[1] - bk[1] * k[2],
            bk[0] * k[2] - bk[2] * k[0],
            bk[1] * k[0] - bk[0] * k[1],
        ];
        for (ac, xc) in a.iter_mut().zip(cross) {
            ac[idx] = i * xc / t.k2[idx];
        }
    }
    SpectralField::from_components(
        a.into_iter()
            .map(|c| Scalar::from_coeffs(grid, c))
            .collect::<Result<Vec<_>>>()?,
    )
}

/// `∫ A·B dV` with `A` the Coulomb-gauge potential. Defined for 3D fields
/// with zero mean.
pub fn magnetic_helicity(state: &MhdState) -> Result<f64> {
    let a = vector_potential(state.b())?;
    a.inner_product(state.b())
}

/// Normalized divergence residuals `(v, B)`; see
/// [`SpectralField::divergence_residual`].
pub fn divergence_residuals(state: &MhdState) -> (f64, f64) {
    (
        state.v().divergence_residual(),
        state.b().divergence_residual(),
    )
}

/// Exact Alfvén wave on the constant background `b0`:
/// `v = w(x + b0 t)`, `B = b0 + w(x + b0 t)`.
pub fn alfven_exact(w: &SpectralField, b0: &[f64], t: f64) -> Result<MhdState> {
    let grid = w.grid();
    if b0.len() != grid.dim() {
        return Err(Error::Shape {
            expected: grid.dim(),
            got: b0.len(),
        });
    }
    ensure_solenoidal(w, "Alfvén profile")?;
    let tables = grid.tables();
    let shifted = w.map(|c| {
        let coeffs = c
            .coeffs()
            .iter()
            .enumerate()
            .map(|(idx, &z)| {
                let phase: f64 = tables.k[idx]
                    .iter()
                    .zip(b0)
                    .map(|(k, b)| k * b)
                    .sum::<f64>()
                    * t;
                z * Complex64::from_polar(1.0, phase)
            })
            .collect();
        Scalar::from_coeffs(grid, coeffs).expect("same length")
    });
    let mut b = shifted.clone();
    for (c, &b0c) in b0.iter().enumerate() {
        b.component_mut(c).coeffs_mut()[0] += b0c;
    }
    MhdState::new(shifted, b, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{gradient, TorusGrid};
    use std::f64::consts::PI;

    fn g2() -> TorusGrid {
        TorusGrid::new(2, 16).unwrap()
    }

    fn g3() -> TorusGrid {
        TorusGrid::new(3, 16).unwrap()
    }

    fn state(v: SpectralField, b: SpectralField) -> MhdState {
        MhdState::new(v, b, 0.0).unwrap()
    }

    #[test]
    fn energy_examples() {
        let g = g2();
        assert_eq!(energy(&MhdState::zero(g)), 0.0);
        let v = SpectralField::from_fn(g, |x| [x[1].cos(), 0.0, 0.0]);
        let s = state(v, SpectralField::zeros(g));
        assert!((energy(&s) - 2.0 * PI * PI).abs() < 1e-12);
    }

    #[test]
    fn cross_helicity_examples() {
        let g = g2();
        let c = SpectralField::from_fn(g, |x| [x[1].cos(), 0.0, 0.0]);
        assert_eq!(
            cross_helicity(&state(c.clone(), SpectralField::zeros(g))),
            0.0
        );
        assert!((cross_helicity(&state(c.clone(), c.clone())) - 2.0 * PI * PI).abs() < 1e-12);
        let b = SpectralField::from_fn(g, |x| [0.0, x[0].cos(), 0.0]);
        assert!(cross_helicity(&state(c, b)).abs() < 1e-14);
    }

    #[test]
    fn momentum_examples() {
        let g = g2();
        let zm = SpectralField::from_fn(g, |x| [x[1].cos(), x[0].sin(), 0.0]);
        let m = momentum(&state(zm, SpectralField::zeros(g)));
        assert!(m.iter().all(|x| x.abs() < 1e-14));
        let v = SpectralField::from_fn(g, |x| [0.3 + x[1].cos(), 0.0, 0.0]);
        let m = momentum(&state(v, SpectralField::zeros(g)));
        assert!((m[0] - 0.3 * 4.0 * PI * PI).abs() < 1e-12);
        assert!(m[1].abs() < 1e-15);
    }

    #[test]
    fn helicity_examples() {
        let g = g3();
        let mirror = SpectralField::from_fn(g, |x| [x[2].cos(), 0.0, 0.0]);
        let h = magnetic_helicity(&state(SpectralField::zeros(g), mirror)).unwrap();
        assert!(h.abs() < 1e-13);

        // curl B = B, so A = B and ∫A·B = ∫|B|² = (2π)³
        let beltrami = SpectralField::from_fn(g, |x| [x[2].sin(), x[2].cos(), 0.0]);
        let a = vector_potential(&beltrami).unwrap();
        assert!((&a - &beltrami).norm() < 1e-13);
        let s = state(SpectralField::zeros(g), beltrami.clone());
        let h = magnetic_helicity(&s).unwrap();
        assert!((h - 8.0 * PI.powi(3)).abs() < 1e-11);

        let s2 = state(SpectralField::zeros(g), &beltrami * 2.0);
        assert!((magnetic_helicity(&s2).unwrap() - 4.0 * h).abs() < 1e-10);
    }

    #[test]
    fn helicity_errors() {
        let g = g3();
        let with_mean = SpectralField::from_fn(g, |x| [1.0, x[0].cos(), 0.0]);
        assert!(matches!(
            magnetic_helicity(&state(SpectralField::zeros(g), with_mean)),
            Err(Error::GaugeAmbiguity { .. })
        ));
        assert!(matches!(
            magnetic_helicity(&MhdState::zero(g2())),
            Err(Error::NotThreeDimensional(2))
        ));
    }

    #[test]
    fn residual_examples() {
        let g = g2();
        let c = SpectralField::from_fn(g, |x| [x[1].cos() + x[0].cos(), x[0].sin(), 0.0]);
        let p = c.leray_project();
        assert!(p.divergence_residual() < 1e-13);
        let u = gradient(&Scalar::from_fn(g, |x| x[0].sin()));
        assert!((u.divergence_residual() - 1.0).abs() < 1e-14);
        let s = state(p.clone(), p);
        let (dv, db) = divergence_residuals(&s);
        assert!(dv < 1e-13 && db < 1e-13);
    }

    #[test]
    fn alfven_examples() {
        let g = g2();
        let w = SpectralField::from_fn(g, |x| [x[1].sin(), 0.0, 0.0]);
        let s0 = alfven_exact(&w, &[0.0, 1.0], 0.0).unwrap();
        assert_eq!(s0.v(), &w);
        assert!((s0.b().mean()[1] - 1.0).abs() < 1e-15);
        assert!((s0.b() - s0.v()).component(0).max_abs_coeff() < 1e-15);

        let s = alfven_exact(&w, &[0.0, 1.0], PI).unwrap();
        let expected = SpectralField::from_fn(g, |x| [-x[1].sin(), 0.0, 0.0]);
        assert!((s.v() - &expected).norm() < 1e-14);
        assert_eq!(s.t(), PI);
    }
}
