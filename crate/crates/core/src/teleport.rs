//! Teleportation of cos(theta/2)|0> + sin(theta/2) e^{i phi}|1> through an
//! accelerated channel, conditioned on Alice measuring 00.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::channel::CorrelationDyadic;
use crate::error::{Error, Result};
use crate::fisher::BlochVector;
use crate::linalg::{self, c, Mat2, Mat4, Mat8, I};
use crate::unruh::{AcceleratedChannel, UnruhParams};

/// Branch probabilities at or below this cannot be normalized.
pub const DEGENERATE_BRANCH: f64 = 1e-15;

/// Polar (weight) and azimuthal (phase) angles of the teleported pure state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InputState {
    theta: f64,
    phi: f64,
}

impl InputState {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::domain("theta", format!("{theta} is outside [0, pi]")));
        }
        if !(0.0..=TAU).contains(&phi) {
            return Err(Error::domain("phi", format!("{phi} is outside [0, 2pi]")));
        }
        Ok(InputState { theta, phi })
    }

    /// Angles outside the nominal ranges still define a valid state; the
    /// finite-difference stencils step across the range ends this way.
    pub(crate) fn unchecked(theta: f64, phi: f64) -> Self {
        InputState { theta, phi }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn amplitudes(&self) -> (Complex64, Complex64) {
        let half = self.theta / 2.0;
        (c(half.cos()), Complex64::from_polar(half.sin(), self.phi))
    }

    pub fn density(&self) -> Mat2 {
        let (alpha, beta) = self.amplitudes();
        let psi = nalgebra::Vector2::new(alpha, beta);
        psi * psi.adjoint()
    }

    pub fn bloch(&self) -> BlochVector {
        let (st, ct) = self.theta.sin_cos();
        BlochVector::new(st * self.phi.cos(), st * self.phi.sin(), ct)
    }
}

/// Bob's conditional state for Alice's 00 outcome.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BobState {
    /// Unnormalized branch state; its trace is the outcome probability.
    pub rho: Mat2,
    pub outcome_prob: f64,
    pub rho_normalized: Mat2,
}

impl BobState {
    pub fn from_branch(rho: Mat2) -> Result<Self> {
        let outcome_prob = rho.trace().re;
        if !(outcome_prob > DEGENERATE_BRANCH) {
            return Err(Error::DegenerateBranch(outcome_prob));
        }
        Ok(BobState {
            rho,
            outcome_prob,
            rho_normalized: rho / c(outcome_prob),
        })
    }

    pub fn bloch(&self) -> BlochVector {
        bloch_of(&self.rho_normalized)
    }

    /// <psi| rho_normalized |psi> for a pure reference state.
    pub fn fidelity_with(&self, input: &InputState) -> f64 {
        let (alpha, beta) = input.amplitudes();
        let psi = nalgebra::Vector2::new(alpha, beta);
        (psi.adjoint() * self.rho_normalized * psi)[(0, 0)].re
    }
}

/// Bob's 00-branch state from the channel coefficients.
pub fn teleport_analytic(input: &InputState, ch: &AcceleratedChannel) -> Result<BobState> {
    BobState::from_branch(branch_from_coefficients(input, ch))
}

pub fn branch_from_coefficients(input: &InputState, ch: &AcceleratedChannel) -> Mat2 {
    let (alpha, beta) = input.amplitudes();
    let (aa, bb) = (alpha.norm_sqr(), beta.norm_sqr());
    let ab = alpha * beta.conj();
    let ba = beta * alpha.conj();
    Mat2::new(
        (ch.b1 * aa + ch.b5 * bb) * 0.5,
        (ab * ch.b2 + ba * ch.b6) * 0.5,
        (ab * ch.b7 + ba * ch.b3) * 0.5,
        (ch.b4 * aa + ch.b8 * bb) * 0.5,
    )
}

/// The same branch state written directly in the input angles, the
/// correlation triple and the Unruh parameters. Independent of the channel
/// coefficients, so it cross-checks [`teleport_analytic`].
pub fn branch_explicit(input: &InputState, d: &CorrelationDyadic, u: &UnruhParams) -> Mat2 {
    let (st, ct) = input.theta.sin_cos();
    let (sp, cp) = input.phi.sin_cos();
    let (sr, cr) = u.r().sin_cos();
    let (qr, ql) = (u.q_r(), u.q_l());

    let rho00 = (cr * cr * (1.0 + d.c33 * ct) + ql.norm_sqr() * (1.0 - d.c33 * ct)) / 8.0;
    let rho11 = (sr * sr * (1.0 + d.c33 * ct) + qr.norm_sqr() * (1.0 - d.c33 * ct)) / 8.0;
    let rho01 = (c(d.c11 * cp) * (qr.conj() * cr + ql * sr)
        + I * (d.c22 * sp) * (qr.conj() * cr - ql * sr))
        * (st / 8.0);
    let rho10 = (c(d.c11 * cp) * (ql.conj() * sr + qr * cr)
        + I * (d.c22 * sp) * (ql.conj() * sr - qr * cr))
        * (st / 8.0);
    Mat2::new(c(rho00), rho01, rho10, c(rho11))
}

/// Unnormalized Bob states for Alice's four outcomes, indexed `2 * m_input + m_alice`.
///
/// Qubit order is (input, Alice, Bob). Alice applies CNOT with the input as
/// control and her channel qubit as target, then a Hadamard on the input,
/// then measures both in the computational basis.
pub fn circuit_branches(input: &InputState, channel: &Mat4) -> [Mat2; 4] {
    let total: Mat8 = input.density().kronecker(channel);

    let mut cnot = Mat8::zeros();
    for idx in 0..8 {
        let (q_in, q_alice, q_bob) = (idx >> 2, (idx >> 1) & 1, idx & 1);
        let out = (q_in << 2) | ((q_alice ^ q_in) << 1) | q_bob;
        cnot[(out, idx)] = c(1.0);
    }
    let h: Mat8 = linalg::hadamard().kronecker(&Mat4::identity());
    let u = h * cnot;
    let evolved = u * total * u.adjoint();

    std::array::from_fn(|outcome| {
        let base = 2 * outcome;
        Mat2::new(
            evolved[(base, base)],
            evolved[(base, base + 1)],
            evolved[(base + 1, base)],
            evolved[(base + 1, base + 1)],
        )
    })
}

/// Independent simulation of the protocol on the full three-qubit density matrix.
pub fn teleport_circuit_oracle(input: &InputState, channel: &Mat4) -> Result<BobState> {
    let [b00, ..] = circuit_branches(input, channel);
    BobState::from_branch(b00)
}

/// (tr rho sx, tr rho sy, tr rho sz).
pub fn bloch_of(rho: &Mat2) -> BlochVector {
    BlochVector::new(
        (rho * linalg::sigma_x()).trace().re,
        (rho * linalg::sigma_y()).trace().re,
        (rho * linalg::sigma_z()).trace().re,
    )
}
