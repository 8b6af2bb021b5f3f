//! Quantum Fisher information of Bob's teleported qubit.
//!
//! For a qubit with Bloch vector `s(k)` the Fisher information about `k` is
//!
//! ```text
//! F = |ds|^2 + (s . ds)^2 / (1 - |s|^2)        (mixed, |s| < 1)
//! F = |ds|^2                                   (pure,  |s| = 1)
//! ```
//!
//! The Bloch vector is always taken from the teleported density matrix by
//! traces against the Pauli matrices. Partial derivatives come either from
//! hand-derived closed forms or from finite differences of the same
//! trace-based Bloch vector.

use std::f64::consts::FRAC_PI_4;
use std::fmt;
use std::ops::{Add, Mul, Sub};
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::channel::CorrelationDyadic;
use crate::error::{Error, Result};
use crate::linalg::I;
use crate::teleport::{bloch_of, teleport_analytic, InputState};
use crate::unruh::{accelerate, UnruhParams};

/// Below this value of `1 - |s|^2` the pure-state formula is used.
pub const PURE_EPSILON: f64 = 1e-9;
/// Finite-difference step, in radians.
pub const FD_STEP: f64 = 1e-5;
/// Largest rounding-level negative Fisher value that is clamped to zero.
pub const NEGATIVE_TOLERANCE: f64 = 1e-9;
const BLOCH_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl BlochVector {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        BlochVector { x, y, z }
    }

    pub fn dot(&self, other: &BlochVector) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn norm_sqr(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.x.abs().max(self.y.abs()).max(self.z.abs())
    }
}

impl Add for BlochVector {
    type Output = BlochVector;
    fn add(self, o: BlochVector) -> BlochVector {
        BlochVector::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for BlochVector {
    type Output = BlochVector;
    fn sub(self, o: BlochVector) -> BlochVector {
        BlochVector::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for BlochVector {
    type Output = BlochVector;
    fn mul(self, k: f64) -> BlochVector {
        BlochVector::new(self.x * k, self.y * k, self.z * k)
    }
}

/// Parameter whose Fisher information is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EstimandParam {
    #[serde(rename = "theta")]
    Theta,
    #[serde(rename = "phi")]
    Phi,
    #[serde(rename = "r")]
    UnruhR,
}

impl EstimandParam {
    pub const ALL: [EstimandParam; 3] = [EstimandParam::Theta, EstimandParam::Phi, EstimandParam::UnruhR];

    pub fn name(self) -> &'static str {
        match self {
            EstimandParam::Theta => "theta",
            EstimandParam::Phi => "phi",
            EstimandParam::UnruhR => "r",
        }
    }
}

impl fmt::Display for EstimandParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EstimandParam {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "theta" => Ok(EstimandParam::Theta),
            "phi" => Ok(EstimandParam::Phi),
            "r" => Ok(EstimandParam::UnruhR),
            _ => Err(Error::domain("param", format!("unknown estimand {s:?}"))),
        }
    }
}

/// Which Bloch vector the Fisher formula is applied to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NormalizationMode {
    /// Bloch vector of the trace-one conditional state.
    #[default]
    Normalized,
    /// Bloch vector of the unnormalized 00 branch (trace 1/4), taken
    /// component-wise without dividing by the outcome probability. Shrinks
    /// `s` by a factor of four.
    AsPublished,
}

impl NormalizationMode {
    pub fn name(self) -> &'static str {
        match self {
            NormalizationMode::Normalized => "normalized",
            NormalizationMode::AsPublished => "as-published",
        }
    }

    /// Scale from the unnormalized branch Bloch vector to this mode's.
    fn branch_scale(self) -> f64 {
        match self {
            NormalizationMode::Normalized => 4.0,
            NormalizationMode::AsPublished => 1.0,
        }
    }
}

impl fmt::Display for NormalizationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NormalizationMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "normalized" => Ok(NormalizationMode::Normalized),
            "as-published" => Ok(NormalizationMode::AsPublished),
            _ => Err(Error::domain("norm", format!("unknown normalization mode {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DerivativeMethod {
    #[default]
    Analytic,
    CentralDifference {
        step: f64,
    },
}

impl DerivativeMethod {
    pub const FD: DerivativeMethod = DerivativeMethod::CentralDifference { step: FD_STEP };

    pub fn name(self) -> &'static str {
        match self {
            DerivativeMethod::Analytic => "analytic",
            DerivativeMethod::CentralDifference { .. } => "fd",
        }
    }
}

impl FromStr for DerivativeMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "analytic" => Ok(DerivativeMethod::Analytic),
            "fd" | "central-difference" => Ok(DerivativeMethod::FD),
            _ => Err(Error::domain("method", format!("unknown derivative method {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FisherValue {
    pub value: f64,
    pub pure_branch_taken: bool,
    /// A rounding-level negative value was clamped to zero.
    pub clamped: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FisherResult {
    pub value: f64,
    pub param: EstimandParam,
    pub mode: NormalizationMode,
    pub method: DerivativeMethod,
    pub pure_branch_taken: bool,
    pub clamped: bool,
}

/// Bloch vector of Bob's 00-branch state in the requested normalization.
pub fn bloch_teleported(
    input: &InputState,
    d: &CorrelationDyadic,
    u: &UnruhParams,
    mode: NormalizationMode,
) -> Result<BlochVector> {
    let bob = teleport_analytic(input, &accelerate(d, u))?;
    Ok(match mode {
        NormalizationMode::Normalized => bloch_of(&bob.rho_normalized),
        NormalizationMode::AsPublished => bloch_of(&bob.rho),
    })
}

pub fn fisher_from_bloch(s: &BlochVector, ds: &BlochVector) -> Result<FisherValue> {
    let norm = s.norm();
    if !(norm <= 1.0 + BLOCH_TOLERANCE) {
        return Err(Error::NonPhysicalBloch(norm));
    }
    let speed = ds.norm_sqr();
    let gap = 1.0 - s.norm_sqr();
    let pure_branch_taken = gap <= PURE_EPSILON;
    let value = if pure_branch_taken {
        speed
    } else {
        speed + s.dot(ds).powi(2) / gap
    };
    if value < -NEGATIVE_TOLERANCE {
        return Err(Error::NegativeFisher(value));
    }
    let clamped = value < 0.0;
    Ok(FisherValue {
        value: if clamped { 0.0 } else { value },
        pure_branch_taken,
        clamped,
    })
}

/// Partial derivative of the teleported Bloch vector with respect to `param`.
pub fn bloch_partial(
    input: &InputState,
    d: &CorrelationDyadic,
    u: &UnruhParams,
    mode: NormalizationMode,
    param: EstimandParam,
    method: DerivativeMethod,
) -> Result<BlochVector> {
    match method {
        DerivativeMethod::Analytic => Ok(analytic_partial(input, d, u, param) * mode.branch_scale()),
        DerivativeMethod::CentralDifference { step } => {
            if !(step > 0.0) || step > 0.1 {
                return Err(Error::domain("step", format!("{step} is not a usable difference step")));
            }
            finite_difference_partial(input, d, u, mode, param, step)
        }
    }
}

pub fn fisher(
    input: &InputState,
    d: &CorrelationDyadic,
    u: &UnruhParams,
    mode: NormalizationMode,
    param: EstimandParam,
    method: DerivativeMethod,
) -> Result<FisherResult> {
    let s = bloch_teleported(input, d, u, mode)?;
    let ds = bloch_partial(input, d, u, mode, param, method)?;
    let f = fisher_from_bloch(&s, &ds)?;
    Ok(FisherResult {
        value: f.value,
        param,
        mode,
        method,
        pure_branch_taken: f.pure_branch_taken,
        clamped: f.clamped,
    })
}

/// Derivative of the unnormalized branch Bloch vector (trace 1/4 state).
///
/// The branch coherence is
/// `rho01 = sin(theta)/8 [c11 cos(phi) P + i c22 sin(phi) M]` with
/// `P = qR* cos r + qL sin r` and `M = qR* cos r - qL sin r`, so that
/// `sx = 2 Re rho01` and `sy = -2 Im rho01`, while
/// `sz = [cos 2r (1 + c33 cos theta) + (|qL|^2 - |qR|^2)(1 - c33 cos theta)] / 8`.
fn analytic_partial(
    input: &InputState,
    d: &CorrelationDyadic,
    u: &UnruhParams,
    param: EstimandParam,
) -> BlochVector {
    let (st, ct) = input.theta().sin_cos();
    let (sp, cp) = input.phi().sin_cos();
    let (sr, cr) = u.r().sin_cos();
    let (qr, ql) = (u.q_r(), u.q_l());
    let imbalance = ql.norm_sqr() - qr.norm_sqr();

    let p = qr.conj() * cr + ql * sr;
    let m = qr.conj() * cr - ql * sr;
    let coherence = |sin_t: f64, cos_p: f64, sin_p: f64, p: Complex64, m: Complex64| {
        (p * (d.c11 * cos_p) + I * m * (d.c22 * sin_p)) * (sin_t / 8.0)
    };

    let (d_rho01, d_sz) = match param {
        EstimandParam::Theta => (
            coherence(ct, cp, sp, p, m),
            d.c33 * st * (imbalance - (2.0 * u.r()).cos()) / 8.0,
        ),
        EstimandParam::Phi => (coherence(st, -sp, cp, p, m), 0.0),
        EstimandParam::UnruhR => {
            let dp = -qr.conj() * sr + ql * cr;
            let dm = -qr.conj() * sr - ql * cr;
            (
                coherence(st, cp, sp, dp, dm),
                -(2.0 * u.r()).sin() * (1.0 + d.c33 * ct) / 4.0,
            )
        }
    };
    BlochVector::new(2.0 * d_rho01.re, -2.0 * d_rho01.im, d_sz)
}

fn finite_difference_partial(
    input: &InputState,
    d: &CorrelationDyadic,
    u: &UnruhParams,
    mode: NormalizationMode,
    param: EstimandParam,
    h: f64,
) -> Result<BlochVector> {
    let at = |offset: f64| -> Result<BlochVector> {
        match param {
            EstimandParam::Theta => {
                let shifted = InputState::unchecked(input.theta() + offset, input.phi());
                bloch_teleported(&shifted, d, u, mode)
            }
            EstimandParam::Phi => {
                let shifted = InputState::unchecked(input.theta(), input.phi() + offset);
                bloch_teleported(&shifted, d, u, mode)
            }
            EstimandParam::UnruhR => bloch_teleported(input, d, &u.at_r(u.r() + offset), mode),
        }
    };

    if param == EstimandParam::UnruhR {
        let r = u.r();
        if r - h < 0.0 {
            let (f0, f1, f2) = (at(0.0)?, at(h)?, at(2.0 * h)?);
            return Ok((f1 * 4.0 - f0 * 3.0 - f2) * (0.5 / h));
        }
        if r + h > FRAC_PI_4 {
            let (f0, f1, f2) = (at(0.0)?, at(-h)?, at(-2.0 * h)?);
            return Ok((f0 * 3.0 - f1 * 4.0 + f2) * (0.5 / h));
        }
    }
    Ok((at(h)? - at(-h)?) * (0.5 / h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::ChannelPreset;
    use crate::unruh::ModePreset;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn phi_plus() -> CorrelationDyadic {
        ChannelPreset::BellPhiPlus.dyadic().unwrap()
    }

    fn wsma(r: f64) -> UnruhParams {
        UnruhParams::with_mode(r, ModePreset::Wsma).unwrap()
    }

    fn close(a: &BlochVector, b: &BlochVector, tol: f64) -> bool {
        (*a - *b).max_abs() < tol
    }

    #[test]
    fn formula_substitutions() {
        let f = fisher_from_bloch(&BlochVector::default(), &BlochVector::new(1.0, 0.0, 0.0)).unwrap();
        assert_eq!(f.value, 1.0);
        assert!(!f.pure_branch_taken);
        let f = fisher_from_bloch(&BlochVector::new(0.5, 0.0, 0.0), &BlochVector::new(1.0, 0.0, 0.0)).unwrap();
        assert!((f.value - 4.0 / 3.0).abs() < 1e-15);
        let f = fisher_from_bloch(&BlochVector::new(0.0, 0.0, 1.0), &BlochVector::new(0.0, 1.0, 0.0)).unwrap();
        assert_eq!(f.value, 1.0);
        assert!(f.pure_branch_taken);
    }

    #[test]
    fn non_physical_bloch_rejected() {
        let err = fisher_from_bloch(&BlochVector::new(0.0, 0.0, 1.1), &BlochVector::default()).unwrap_err();
        assert!(matches!(err, Error::NonPhysicalBloch(_)));
        assert!(fisher_from_bloch(&BlochVector::new(0.0, 0.0, 1.0 + 1e-13), &BlochVector::default()).is_ok());
    }

    #[test]
    fn unknown_tags_are_domain_errors() {
        assert!(matches!("newton".parse::<DerivativeMethod>(), Err(Error::Domain { .. })));
        assert!(matches!("kappa".parse::<EstimandParam>(), Err(Error::Domain { .. })));
        assert!(matches!("raw".parse::<NormalizationMode>(), Err(Error::Domain { .. })));
    }

    #[test]
    fn perfect_channel_bloch_is_input_bloch() {
        let input = InputState::new(1.1, 2.3).unwrap();
        let s = bloch_teleported(&input, &phi_plus(), &wsma(0.0), NormalizationMode::Normalized).unwrap();
        assert!(close(&s, &input.bloch(), 1e-15));
        let s = bloch_teleported(&input, &phi_plus(), &wsma(0.0), NormalizationMode::AsPublished).unwrap();
        assert!(close(&s, &(input.bloch() * 0.25), 1e-15));
    }

    #[test]
    fn pole_has_no_transverse_component() {
        let d = ChannelPreset::FIGURE_X_STATE.dyadic().unwrap();
        let u = UnruhParams::with_mode(0.4, ModePreset::Bsma).unwrap();
        let input = InputState::new(0.0, 0.9).unwrap();
        for mode in [NormalizationMode::Normalized, NormalizationMode::AsPublished] {
            let s = bloch_teleported(&input, &d, &u, mode).unwrap();
            assert_eq!((s.x, s.y), (0.0, 0.0));
        }
    }

    #[test]
    fn theta_partial_at_inertial_limit() {
        let (theta, phi) = (0.8, 2.0);
        let input = InputState::new(theta, phi).unwrap();
        let want = BlochVector::new(theta.cos() * phi.cos(), theta.cos() * phi.sin(), -theta.sin());
        for method in [DerivativeMethod::Analytic, DerivativeMethod::FD] {
            let ds = bloch_partial(&input, &phi_plus(), &wsma(0.0), NormalizationMode::Normalized, EstimandParam::Theta, method).unwrap();
            assert!(close(&ds, &want, 1e-9), "{method:?}: {ds:?}");
        }
    }

    #[test]
    fn phi_partial_vanishes_at_pole() {
        let input = InputState::new(0.0, 1.0).unwrap();
        let d = ChannelPreset::BellPsiMinus.dyadic().unwrap();
        let ds = bloch_partial(&input, &d, &wsma(0.3), NormalizationMode::Normalized, EstimandParam::Phi, DerivativeMethod::Analytic).unwrap();
        assert_eq!(ds.norm(), 0.0);
    }

    #[test]
    fn r_stencils_at_domain_ends() {
        let input = InputState::new(0.9, 0.4).unwrap();
        let d = ChannelPreset::FIGURE_X_STATE.dyadic().unwrap();
        for r in [0.0, 0.5 * FD_STEP, FRAC_PI_4 - 0.5 * FD_STEP, FRAC_PI_4] {
            let u = UnruhParams::with_mode(r, ModePreset::Bsma).unwrap();
            let a = bloch_partial(&input, &d, &u, NormalizationMode::Normalized, EstimandParam::UnruhR, DerivativeMethod::Analytic).unwrap();
            let f = bloch_partial(&input, &d, &u, NormalizationMode::Normalized, EstimandParam::UnruhR, DerivativeMethod::FD).unwrap();
            assert!(close(&a, &f, 1e-8), "r = {r}: {a:?} vs {f:?}");
        }
    }

    #[test]
    fn fisher_anchor_points() {
        let input = InputState::new(0.0, 0.0).unwrap();
        for r in [0.05, 0.3, FRAC_PI_4] {
            let f = fisher(&input, &phi_plus(), &wsma(r), NormalizationMode::Normalized, EstimandParam::UnruhR, DerivativeMethod::Analytic).unwrap();
            assert!((f.value - 4.0).abs() < 1e-9, "r = {r}: {}", f.value);
        }
        let input = InputState::new(FRAC_PI_2 / 2.0, PI / 3.0).unwrap();
        let f = fisher(&input, &phi_plus(), &wsma(0.0), NormalizationMode::Normalized, EstimandParam::Phi, DerivativeMethod::Analytic).unwrap();
        assert!(f.pure_branch_taken);
        assert!((f.value - (FRAC_PI_2 / 2.0).sin().powi(2)).abs() < 1e-12);
    }

    #[test]
    fn continuity_near_inertial_limit() {
        let input = InputState::new(1.0, 0.5).unwrap();
        let f = fisher(&input, &phi_plus(), &wsma(1e-4), NormalizationMode::Normalized, EstimandParam::Theta, DerivativeMethod::Analytic).unwrap();
        assert!(!f.pure_branch_taken);
        assert!((f.value - 1.0).abs() < 1e-3);
    }

    #[test]
    fn fd_step_must_be_positive() {
        let input = InputState::new(1.0, 0.5).unwrap();
        let err = bloch_partial(&input, &phi_plus(), &wsma(0.2), NormalizationMode::Normalized, EstimandParam::Theta, DerivativeMethod::CentralDifference { step: 0.0 });
        assert!(err.is_err());
    }
}
