//! Two-qubit communication states with a diagonal correlation dyadic,
//! rho = (I + c11 sx(x)sx + c22 sy(x)sy + c33 sz(x)sz) / 4.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, c, kron2, Mat4};

/// Physicality tolerance on the smallest eigenvalue.
pub const EIGEN_TOLERANCE: f64 = 1e-12;

/// Diagonal correlation triple of the shared two-qubit state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationDyadic {
    pub c11: f64,
    pub c22: f64,
    pub c33: f64,
}

impl CorrelationDyadic {
    pub fn new(c11: f64, c22: f64, c33: f64) -> Result<Self> {
        for (name, v) in [("c11", c11), ("c22", c22), ("c33", c33)] {
            if !(-1.0..=1.0).contains(&v) {
                return Err(Error::domain(name, format!("{v} is outside [-1, 1]")));
            }
        }
        Ok(CorrelationDyadic { c11, c22, c33 })
    }

    /// Diagonal weights (A1, A2) and coherences (A3, A4) of the X-shaped density matrix.
    pub fn x_weights(&self) -> [f64; 4] {
        [
            (1.0 + self.c33) / 4.0,
            (1.0 - self.c33) / 4.0,
            (self.c11 + self.c22) / 4.0,
            (self.c11 - self.c22) / 4.0,
        ]
    }

    pub fn density(&self) -> Mat4 {
        dyadic_to_density(self)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "preset", rename_all = "kebab-case")]
pub enum ChannelPreset {
    BellPhiPlus,
    BellPsiMinus,
    Werner { f: f64 },
    XState { c11: f64, c22: f64, c33: f64 },
}

impl ChannelPreset {
    /// The partially entangled X-state used in the figure presets.
    pub const FIGURE_X_STATE: ChannelPreset = ChannelPreset::XState {
        c11: -0.9,
        c22: -0.8,
        c33: -0.7,
    };

    pub fn name(&self) -> &'static str {
        match self {
            ChannelPreset::BellPhiPlus => "bell-phi-plus",
            ChannelPreset::BellPsiMinus => "bell-psi-minus",
            ChannelPreset::Werner { .. } => "werner",
            ChannelPreset::XState { .. } => "x-state",
        }
    }

    pub fn dyadic(&self) -> Result<CorrelationDyadic> {
        preset_dyadic(*self)
    }
}

impl fmt::Display for ChannelPreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub fn preset_dyadic(preset: ChannelPreset) -> Result<CorrelationDyadic> {
    match preset {
        ChannelPreset::BellPhiPlus => CorrelationDyadic::new(1.0, -1.0, 1.0),
        ChannelPreset::BellPsiMinus => CorrelationDyadic::new(-1.0, -1.0, -1.0),
        ChannelPreset::Werner { f } => {
            if !(0.0..=1.0).contains(&f) {
                return Err(Error::domain("F", format!("{f} is outside [0, 1]")));
            }
            CorrelationDyadic::new(-f, -f, -f)
        }
        ChannelPreset::XState { c11, c22, c33 } => CorrelationDyadic::new(c11, c22, c33),
    }
}

pub fn dyadic_to_density(d: &CorrelationDyadic) -> Mat4 {
    let xx = kron2(&linalg::sigma_x(), &linalg::sigma_x());
    let yy = kron2(&linalg::sigma_y(), &linalg::sigma_y());
    let zz = kron2(&linalg::sigma_z(), &linalg::sigma_z());
    (Mat4::identity() + xx * c(d.c11) + yy * c(d.c22) + zz * c(d.c33)) * c(0.25)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Physicality {
    pub physical: bool,
    pub min_eigenvalue: f64,
}

pub fn validate_physical(d: &CorrelationDyadic) -> Physicality {
    let min_eigenvalue = linalg::min_eigenvalue(&dyadic_to_density(d));
    Physicality {
        physical: min_eigenvalue >= -EIGEN_TOLERANCE,
        min_eigenvalue,
    }
}

/// Parses a bare preset name. Werner defaults to F = 1 and x-state to the
/// figure X-state; callers override the parameters from their own flags.
impl FromStr for ChannelPreset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bell-phi-plus" => Ok(ChannelPreset::BellPhiPlus),
            "bell-psi-minus" => Ok(ChannelPreset::BellPsiMinus),
            "werner" => Ok(ChannelPreset::Werner { f: 1.0 }),
            "x-state" => Ok(ChannelPreset::FIGURE_X_STATE),
            _ => Err(Error::parse("channel preset", s)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs_diff, ONE, ZERO};
    use nalgebra::Vector4;
    use num_complex::Complex64;

    fn projector(v: Vector4<Complex64>) -> Mat4 {
        v * v.adjoint()
    }

    #[test]
    fn preset_table() {
        let d = preset_dyadic(ChannelPreset::BellPsiMinus).unwrap();
        assert_eq!((d.c11, d.c22, d.c33), (-1.0, -1.0, -1.0));
        let d = preset_dyadic(ChannelPreset::BellPhiPlus).unwrap();
        assert_eq!((d.c11, d.c22, d.c33), (1.0, -1.0, 1.0));
        let d = preset_dyadic(ChannelPreset::Werner { f: 0.0 }).unwrap();
        assert_eq!((d.c11, d.c22, d.c33), (0.0, 0.0, 0.0));
        let d = preset_dyadic(ChannelPreset::FIGURE_X_STATE).unwrap();
        assert_eq!((d.c11, d.c22, d.c33), (-0.9, -0.8, -0.7));
    }

    #[test]
    fn out_of_range_presets_name_the_field() {
        let err = preset_dyadic(ChannelPreset::Werner { f: 1.5 }).unwrap_err();
        assert!(err.to_string().starts_with("F:"), "{err}");
        let err = preset_dyadic(ChannelPreset::XState {
            c11: 0.0,
            c22: -1.2,
            c33: 0.0,
        })
        .unwrap_err();
        assert!(err.to_string().starts_with("c22:"), "{err}");
    }

    #[test]
    fn maximally_mixed() {
        let rho = dyadic_to_density(&CorrelationDyadic::new(0.0, 0.0, 0.0).unwrap());
        assert!(max_abs_diff(&rho, &(Mat4::identity() * c(0.25))) < 1e-15);
    }

    #[test]
    fn bell_states_match_state_vector_projectors() {
        let h = c(std::f64::consts::FRAC_1_SQRT_2);
        let singlet = projector(Vector4::new(ZERO, h, -h, ZERO));
        let phi_plus = projector(Vector4::new(h, ZERO, ZERO, h));
        let rho = preset_dyadic(ChannelPreset::BellPsiMinus).unwrap().density();
        assert!(max_abs_diff(&rho, &singlet) < 1e-15);
        let rho = preset_dyadic(ChannelPreset::BellPhiPlus).unwrap().density();
        assert!(max_abs_diff(&rho, &phi_plus) < 1e-15);
    }

    #[test]
    fn physicality_verdicts() {
        let p = validate_physical(&CorrelationDyadic::new(-1.0, -1.0, -1.0).unwrap());
        assert!(p.physical && p.min_eigenvalue.abs() < 1e-12);
        let p = validate_physical(&CorrelationDyadic::new(1.0, 1.0, 1.0).unwrap());
        assert!(!p.physical && (p.min_eigenvalue + 0.5).abs() < 1e-12);
        let p = validate_physical(&CorrelationDyadic::new(0.0, 0.0, 0.0).unwrap());
        assert!(p.physical && (p.min_eigenvalue - 0.25).abs() < 1e-12);
    }

    #[test]
    fn presets_are_physical() {
        for preset in [
            ChannelPreset::BellPhiPlus,
            ChannelPreset::BellPsiMinus,
            ChannelPreset::FIGURE_X_STATE,
        ] {
            assert!(validate_physical(&preset.dyadic().unwrap()).physical, "{preset}");
        }
        for i in 0..=20 {
            let f = i as f64 / 20.0;
            let d = preset_dyadic(ChannelPreset::Werner { f }).unwrap();
            assert!(validate_physical(&d).physical, "F = {f}");
        }
    }

    /// Closed-form spectrum of the X-shaped state, used as an oracle for the eigensolver.
    fn spectrum_oracle(d: &CorrelationDyadic) -> [f64; 4] {
        let mut ev = [
            (1.0 - d.c11 - d.c22 - d.c33) / 4.0,
            (1.0 - d.c11 + d.c22 + d.c33) / 4.0,
            (1.0 + d.c11 - d.c22 + d.c33) / 4.0,
            (1.0 + d.c11 + d.c22 - d.c33) / 4.0,
        ];
        ev.sort_by(f64::total_cmp);
        ev
    }

    #[test]
    fn grid_spectrum_and_trace() {
        let axis: Vec<f64> = (0..9).map(|i| -1.0 + i as f64 * 0.25).collect();
        for &c11 in &axis {
            for &c22 in &axis {
                for &c33 in &axis {
                    let d = CorrelationDyadic::new(c11, c22, c33).unwrap();
                    let rho = d.density();
                    assert!(linalg::hermiticity_error(&rho) < 1e-12);
                    assert!((rho.trace() - ONE).norm() < 1e-12);
                    let ev = linalg::hermitian_eigenvalues(&rho);
                    assert!((ev.iter().sum::<f64>() - 1.0).abs() < 1e-12);
                    for (a, b) in ev.iter().zip(spectrum_oracle(&d)) {
                        assert!((a - b).abs() < 1e-12);
                    }
                }
            }
        }
    }

    #[test]
    fn preset_names_round_trip() {
        for name in ["bell-phi-plus", "bell-psi-minus", "werner", "x-state"] {
            assert_eq!(name.parse::<ChannelPreset>().unwrap().name(), name);
        }
        assert!("ghz".parse::<ChannelPreset>().is_err());
    }
}
