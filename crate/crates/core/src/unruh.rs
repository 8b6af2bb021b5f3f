//! Unruh acceleration acting on Bob's half of the shared state.
//!
//! Bob's qubit is mapped into region I and region II Rindler modes by the
//! isometry
//!
//! ```text
//! |0> -> cos r |0>_I |0>_II + sin r |1>_I |1>_II
//! |1> -> qR |1>_I |0>_II + qL |0>_I |1>_II
//! ```
//!
//! and region II is traced out. [`accelerate`] gives the reduced state in
//! closed form as eight coefficients placed on the X-shaped pattern;
//! [`bogoliubov_oracle`] builds the isometry explicitly and performs the
//! partial trace numerically.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, PI};
use std::fmt;
use std::str::FromStr;

use nalgebra::SMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::channel::CorrelationDyadic;
use crate::error::{Error, Result};
use crate::linalg::{c, Mat4, Mat8, ZERO};

pub const NORMALIZATION_TOLERANCE: f64 = 1e-12;

/// Converts (angular frequency, proper acceleration, speed of light) into the
/// Rindler parameter r, with tan r = exp(-pi * omega * c / a).
pub fn r_from_acceleration(omega: f64, accel: f64, c: f64) -> Result<f64> {
    if !(omega > 0.0) {
        return Err(Error::domain("omega", format!("{omega} must be positive")));
    }
    if !(c > 0.0) {
        return Err(Error::domain("c", format!("{c} must be positive")));
    }
    if !(accel >= 0.0) {
        return Err(Error::domain("accel", format!("{accel} must be non-negative")));
    }
    if accel == 0.0 {
        return Ok(0.0);
    }
    Ok((-PI * omega * c / accel).exp().atan())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModePreset {
    /// Single-mode approximation: qR = 1, qL = 0.
    Wsma,
    /// Symmetric mode mixing: qR = qL = 1/sqrt(2).
    Bsma,
}

impl ModePreset {
    pub fn weights(self) -> (Complex64, Complex64) {
        match self {
            ModePreset::Wsma => (c(1.0), ZERO),
            ModePreset::Bsma => (c(FRAC_1_SQRT_2), c(FRAC_1_SQRT_2)),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ModePreset::Wsma => "wsma",
            ModePreset::Bsma => "bsma",
        }
    }
}

impl fmt::Display for ModePreset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModePreset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "wsma" => Ok(ModePreset::Wsma),
            "bsma" => Ok(ModePreset::Bsma),
            _ => Err(Error::parse("mode preset", s)),
        }
    }
}

/// Rindler parameter and the right/left mode weights of Bob's excitation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UnruhParams {
    r: f64,
    q_r: Complex64,
    q_l: Complex64,
}

impl UnruhParams {
    pub fn new(r: f64, q_r: Complex64, q_l: Complex64) -> Result<Self> {
        if !(0.0..=FRAC_PI_4).contains(&r) {
            return Err(Error::domain("r", format!("{r} is outside [0, pi/4]")));
        }
        let norm = q_r.norm_sqr() + q_l.norm_sqr();
        if (norm - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(Error::domain(
                "qR/qL",
                format!("|qR|^2 + |qL|^2 = {norm}, expected 1"),
            ));
        }
        Ok(UnruhParams { r, q_r, q_l })
    }

    pub fn with_mode(r: f64, mode: ModePreset) -> Result<Self> {
        let (q_r, q_l) = mode.weights();
        Self::new(r, q_r, q_l)
    }

    pub fn inertial() -> Self {
        UnruhParams {
            r: 0.0,
            q_r: c(1.0),
            q_l: ZERO,
        }
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn q_r(&self) -> Complex64 {
        self.q_r
    }

    pub fn q_l(&self) -> Complex64 {
        self.q_l
    }

    /// Same weights at a different r. Finite-difference stencils stay inside
    /// [0, pi/4], so no range check is needed here.
    pub(crate) fn at_r(&self, r: f64) -> Self {
        UnruhParams { r, ..*self }
    }

    /// Bob's qubit -> (region I, region II) isometry, rows ordered |I II>.
    pub fn isometry(&self) -> SMatrix<Complex64, 4, 2> {
        let (cr, sr) = (self.r.cos(), self.r.sin());
        let mut v = SMatrix::<Complex64, 4, 2>::zeros();
        v[(0, 0)] = c(cr);
        v[(3, 0)] = c(sr);
        v[(2, 1)] = self.q_r;
        v[(1, 1)] = self.q_l;
        v
    }
}

/// Which expression is used for the (01,10) coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum B7Form {
    /// A3 qR cos r + A4 qL* sin r, the complex conjugate of B6.
    #[default]
    Hermitian,
    /// A3 qL* sin r + A4 qR cos r, a known misprint of this coefficient
    /// that duplicates B3. Kept only so verification can show that it is
    /// detected. It differs from conj(B6) by (A3 - A4)(qL* sin r - qR cos r),
    /// so it breaks Hermiticity unless A3 = A4 or qR cos r = qL* sin r.
    Misprinted,
}

/// Coefficients of the accelerated Alice-Bob state on the X pattern.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AcceleratedChannel {
    /// (00,00)
    pub b1: Complex64,
    /// (00,11)
    pub b2: Complex64,
    /// (11,00)
    pub b3: Complex64,
    /// (01,01)
    pub b4: Complex64,
    /// (10,10)
    pub b5: Complex64,
    /// (10,01)
    pub b6: Complex64,
    /// (01,10)
    pub b7: Complex64,
    /// (11,11)
    pub b8: Complex64,
}

impl AcceleratedChannel {
    pub fn coefficients(&self) -> [Complex64; 8] {
        [
            self.b1, self.b2, self.b3, self.b4, self.b5, self.b6, self.b7, self.b8,
        ]
    }

    pub fn density(&self) -> Mat4 {
        accelerated_density(self)
    }

    /// Largest violation among the unit-trace, Hermiticity and
    /// non-negative-population invariants.
    pub fn invariant_error(&self) -> f64 {
        let trace = (self.b1 + self.b4 + self.b5 + self.b8 - c(1.0)).norm();
        let herm = (self.b3 - self.b2.conj())
            .norm()
            .max((self.b7 - self.b6.conj()).norm());
        let pops = [self.b1, self.b4, self.b5, self.b8]
            .iter()
            .map(|b| b.im.abs().max(-b.re))
            .fold(0.0, f64::max);
        trace.max(herm).max(pops)
    }
}

pub fn accelerate(d: &CorrelationDyadic, u: &UnruhParams) -> AcceleratedChannel {
    accelerate_with(d, u, B7Form::Hermitian)
}

pub fn accelerate_with(d: &CorrelationDyadic, u: &UnruhParams, form: B7Form) -> AcceleratedChannel {
    let [a1, a2, a3, a4] = d.x_weights();
    let (cr, sr) = (u.r.cos(), u.r.sin());
    let (qr, ql) = (u.q_r, u.q_l);
    let (qr2, ql2) = (qr.norm_sqr(), ql.norm_sqr());

    let b6 = qr.conj() * (a3 * cr) + ql * (a4 * sr);
    let b7 = match form {
        B7Form::Hermitian => qr * (a3 * cr) + ql.conj() * (a4 * sr),
        B7Form::Misprinted => ql.conj() * (a3 * sr) + qr * (a4 * cr),
    };
    AcceleratedChannel {
        b1: c(a1 * cr * cr + a2 * ql2),
        b2: qr.conj() * (a4 * cr) + ql * (a3 * sr),
        b3: ql.conj() * (a3 * sr) + qr * (a4 * cr),
        b4: c(a1 * sr * sr + a2 * qr2),
        b5: c(a2 * cr * cr + a1 * ql2),
        b6,
        b7,
        b8: c(a2 * sr * sr + a1 * qr2),
    }
}

pub fn accelerated_density(ch: &AcceleratedChannel) -> Mat4 {
    let mut m = Mat4::zeros();
    m[(0, 0)] = ch.b1;
    m[(0, 3)] = ch.b2;
    m[(3, 0)] = ch.b3;
    m[(1, 1)] = ch.b4;
    m[(2, 2)] = ch.b5;
    m[(2, 1)] = ch.b6;
    m[(1, 2)] = ch.b7;
    m[(3, 3)] = ch.b8;
    m
}

/// Applies `I (x) V` to the shared state on an explicit eight-dimensional
/// Alice (x) Bob_I (x) Bob_II space and traces out Bob_II.
pub fn bogoliubov_oracle(d: &CorrelationDyadic, u: &UnruhParams) -> Mat4 {
    let rho = d.density();
    let v = u.isometry();

    let mut w = SMatrix::<Complex64, 8, 4>::zeros();
    for alice in 0..2 {
        for row in 0..4 {
            for col in 0..2 {
                w[(4 * alice + row, 2 * alice + col)] = v[(row, col)];
            }
        }
    }
    let big: Mat8 = w * rho * w.adjoint();

    let mut out = Mat4::zeros();
    for i in 0..4 {
        for j in 0..4 {
            let (ai, bi) = (i / 2, i % 2);
            let (aj, bj) = (j / 2, j % 2);
            out[(i, j)] = (0..2)
                .map(|k| big[(4 * ai + 2 * bi + k, 4 * aj + 2 * bj + k)])
                .sum();
        }
    }
    out
}
