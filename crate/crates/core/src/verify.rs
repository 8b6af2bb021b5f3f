//! Seeded cross-checks of every closed form against its independent oracle.
//!
//! Draws are generated sequentially from a ChaCha stream, evaluated in
//! parallel and reduced with `max`, so the rendered report depends only on
//! `(trials, seed)` and not on the worker count.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_8, PI, TAU};
use std::fmt::Write as _;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::channel::{validate_physical, ChannelPreset, CorrelationDyadic, EIGEN_TOLERANCE};
use crate::error::{Error, Result};
use crate::fisher::{bloch_partial, fisher, DerivativeMethod, EstimandParam, NormalizationMode};
use crate::linalg::{self, c, max_abs_diff, Mat2};
use crate::teleport::{branch_explicit, branch_from_coefficients, circuit_branches, BobState, InputState};
use crate::unruh::{accelerate_with, bogoliubov_oracle, B7Form, ModePreset, UnruhParams};

/// Partials smaller than this are skipped by the relative-error check.
pub const DERIVATIVE_FLOOR: f64 = 1e-3;

#[derive(Debug, Clone, Copy, Default)]
pub struct VerifyOptions {
    /// Coefficient form used on every closed-form path.
    pub b7: B7Form,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Draw {
    pub dyadic: CorrelationDyadic,
    pub unruh: UnruhParams,
    pub input: InputState,
}

/// Draws a physical dyadic, Unruh parameters and an input state. Every fourth
/// draw uses the single-mode weights and every fourth+1 the symmetric ones;
/// the rest use arbitrary complex weights on the normalization sphere.
pub fn random_draws(count: usize, seed: u64) -> Vec<Draw> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let dyadic = loop {
                let d = CorrelationDyadic::new(
                    rng.random_range(-1.0..=1.0),
                    rng.random_range(-1.0..=1.0),
                    rng.random_range(-1.0..=1.0),
                )
                .expect("sampled inside [-1, 1]");
                if validate_physical(&d).physical {
                    break d;
                }
            };
            let r = rng.random_range(0.0..=FRAC_PI_4);
            let mu: f64 = rng.random_range(0.0..=FRAC_PI_2);
            let chi: f64 = rng.random_range(0.0..TAU);
            let eta: f64 = rng.random_range(0.0..TAU);
            let unruh = match i % 4 {
                0 => UnruhParams::with_mode(r, ModePreset::Wsma),
                1 => UnruhParams::with_mode(r, ModePreset::Bsma),
                _ => UnruhParams::new(r, Complex64::from_polar(mu.cos(), chi), Complex64::from_polar(mu.sin(), eta)),
            }
            .expect("normalized weights");
            let input = InputState::new(rng.random_range(0.0..=PI), rng.random_range(0.0..=TAU))
                .expect("sampled inside range");
            Draw { dyadic, unruh, input }
        })
        .collect()
}

struct CheckDef {
    section: usize,
    label: &'static str,
    tolerance: f64,
}

const SECTIONS: [&str; 6] = [
    "(a) channel closed form vs Bogoliubov isometry oracle",
    "(b) teleportation closed form vs three-qubit circuit oracle",
    "(c) coefficient form vs explicit angle form of the branch state",
    "(d) analytic vs finite-difference Bloch partials (relative)",
    "(e) invariants",
    "(f) misprinted B7 coefficient (documentation only)",
];

const CHECKS: [CheckDef; 22] = [
    CheckDef { section: 0, label: "max |closed form - oracle|", tolerance: 1e-12 },
    CheckDef { section: 0, label: "max |V^dag V - I|", tolerance: 1e-12 },
    CheckDef { section: 1, label: "max |rho_analytic - rho_circuit|", tolerance: 1e-12 },
    CheckDef { section: 1, label: "max |sum of outcome probabilities - 1|", tolerance: 1e-12 },
    CheckDef { section: 2, label: "max |rho_coefficients - rho_explicit|", tolerance: 1e-12 },
    CheckDef { section: 3, label: "theta, normalized", tolerance: 1e-6 },
    CheckDef { section: 3, label: "theta, as-published", tolerance: 1e-6 },
    CheckDef { section: 3, label: "phi, normalized", tolerance: 1e-6 },
    CheckDef { section: 3, label: "phi, as-published", tolerance: 1e-6 },
    CheckDef { section: 3, label: "r, normalized", tolerance: 1e-6 },
    CheckDef { section: 3, label: "r, as-published", tolerance: 1e-6 },
    CheckDef { section: 4, label: "source state hermiticity / trace", tolerance: 1e-12 },
    CheckDef { section: 4, label: "channel coefficient invariants", tolerance: 1e-12 },
    CheckDef { section: 4, label: "channel hermiticity", tolerance: 1e-12 },
    CheckDef { section: 4, label: "channel |trace - 1|", tolerance: 1e-12 },
    CheckDef { section: 4, label: "channel negativity", tolerance: EIGEN_TOLERANCE },
    CheckDef { section: 4, label: "Bob state hermiticity", tolerance: 1e-12 },
    CheckDef { section: 4, label: "Bob |outcome probability - 1/4|", tolerance: 1e-12 },
    CheckDef { section: 4, label: "Bob state negativity", tolerance: EIGEN_TOLERANCE },
    CheckDef { section: 4, label: "Bob |s| - 1 excess", tolerance: 1e-12 },
    CheckDef { section: 4, label: "Fisher negativity", tolerance: 1e-9 },
    CheckDef { section: 4, label: "failed evaluations", tolerance: 0.0 },
];

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub section: usize,
    pub label: &'static str,
    pub max_error: f64,
    pub tolerance: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub trials: usize,
    pub seed: u64,
    pub b7: B7Form,
    pub checks: Vec<CheckResult>,
    /// Largest |B7_misprinted - conj(B6)| over the draws.
    pub misprinted_b7_violation: f64,
    /// The same for the singlet at r = pi/8 in the single-mode approximation.
    pub misprinted_b7_singlet_example: f64,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn section_passed(&self, section: usize) -> bool {
        self.checks.iter().filter(|c| c.section == section).all(|c| c.passed)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let b7 = match self.b7 {
            B7Form::Hermitian => "hermitian",
            B7Form::Misprinted => "misprinted",
        };
        let _ = writeln!(out, "verify: trials={} seed={} b7={}", self.trials, self.seed, b7);
        for (index, title) in SECTIONS.iter().enumerate() {
            let _ = writeln!(out, "{title}");
            if index == 5 {
                let _ = writeln!(out, "    {:<44} {:>10.3e}", "max |B7_misprinted - conj(B6)|", self.misprinted_b7_violation);
                let _ = writeln!(
                    out,
                    "    {:<44} {:>10.3e}",
                    "singlet, r=pi/8, wsma", self.misprinted_b7_singlet_example
                );
                let _ = writeln!(out, "    the misprinted form is never used in computation");
                continue;
            }
            for check in self.checks.iter().filter(|c| c.section == index) {
                let _ = writeln!(
                    out,
                    "    {:<44} {:>10.3e}  tol {:.0e}  {}",
                    check.label,
                    check.max_error,
                    check.tolerance,
                    if check.passed { "PASS" } else { "FAIL" }
                );
            }
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        let _ = writeln!(
            out,
            "result: {} ({} of {} checks passed)",
            if failed == 0 { "PASS" } else { "FAIL" },
            self.checks.len() - failed,
            self.checks.len()
        );
        out
    }
}

pub fn verify(trials: usize, seed: u64) -> Result<VerifyReport> {
    verify_with(trials, seed, VerifyOptions::default())
}

pub fn verify_with(trials: usize, seed: u64, options: VerifyOptions) -> Result<VerifyReport> {
    if trials == 0 {
        return Err(Error::domain("trials", "must be at least 1"));
    }
    let draws = random_draws(trials, seed);
    let per_draw: Vec<[f64; CHECKS.len()]> = draws.par_iter().map(|d| measure(d, options.b7)).collect();

    let mut worst = [0.0f64; CHECKS.len()];
    for errors in &per_draw {
        for (w, e) in worst.iter_mut().zip(errors) {
            // NaN propagates as a failure
            *w = if e.is_nan() || w.is_nan() { f64::NAN } else { w.max(*e) };
        }
    }
    let checks = CHECKS
        .iter()
        .zip(worst)
        .map(|(def, max_error)| CheckResult {
            section: def.section,
            label: def.label,
            max_error,
            tolerance: def.tolerance,
            passed: max_error <= def.tolerance,
        })
        .collect();

    let misprinted_b7_violation = draws
        .iter()
        .map(|d| b7_misprint_size(&d.dyadic, &d.unruh))
        .fold(0.0, f64::max);
    let singlet = ChannelPreset::BellPsiMinus.dyadic()?;
    let example = UnruhParams::with_mode(FRAC_PI_8, ModePreset::Wsma)?;

    Ok(VerifyReport {
        trials,
        seed,
        b7: options.b7,
        checks,
        misprinted_b7_violation,
        misprinted_b7_singlet_example: b7_misprint_size(&singlet, &example),
    })
}

fn b7_misprint_size(d: &CorrelationDyadic, u: &UnruhParams) -> f64 {
    let ch = accelerate_with(d, u, B7Form::Misprinted);
    (ch.b7 - ch.b6.conj()).norm()
}

fn negativity<const N: usize>(m: &nalgebra::SMatrix<Complex64, N, N>) -> f64 {
    (-linalg::min_eigenvalue(m)).max(0.0)
}

fn relative_error(a: &crate::BlochVector, b: &crate::BlochVector) -> f64 {
    let scale = a.norm();
    if scale > DERIVATIVE_FLOOR {
        (*a - *b).norm() / scale
    } else {
        0.0
    }
}

fn measure(draw: &Draw, b7: B7Form) -> [f64; CHECKS.len()] {
    let mut e = [0.0f64; CHECKS.len()];
    let Draw { dyadic: d, unruh: u, input } = draw;

    let channel = accelerate_with(d, u, b7);
    let closed = channel.density();
    let oracle = bogoliubov_oracle(d, u);
    e[0] = max_abs_diff(&closed, &oracle);
    let v = u.isometry();
    e[1] = max_abs_diff(&(v.adjoint() * v), &Mat2::identity());

    let branch = branch_from_coefficients(input, &channel);
    let branches = circuit_branches(input, &oracle);
    e[2] = max_abs_diff(&branch, &branches[0]);
    e[3] = (branches.iter().map(|b| b.trace().re).sum::<f64>() - 1.0).abs();

    e[4] = max_abs_diff(&branch, &branch_explicit(input, d, u));

    let mut slot = 5;
    for param in EstimandParam::ALL {
        for mode in [NormalizationMode::Normalized, NormalizationMode::AsPublished] {
            let analytic = bloch_partial(input, d, u, mode, param, DerivativeMethod::Analytic);
            let numeric = bloch_partial(input, d, u, mode, param, DerivativeMethod::FD);
            e[slot] = match (analytic, numeric) {
                (Ok(a), Ok(n)) => relative_error(&a, &n),
                _ => f64::INFINITY,
            };
            slot += 1;
        }
    }

    let source = d.density();
    e[11] = linalg::hermiticity_error(&source).max((source.trace() - c(1.0)).norm());
    e[12] = channel.invariant_error();
    e[13] = linalg::hermiticity_error(&closed);
    e[14] = (closed.trace() - c(1.0)).norm();
    e[15] = negativity(&closed);

    let mut failures = 0.0;
    match BobState::from_branch(branch) {
        Ok(bob) => {
            e[16] = linalg::hermiticity_error(&bob.rho_normalized);
            e[17] = (bob.outcome_prob - 0.25).abs();
            e[18] = negativity(&bob.rho_normalized);
            e[19] = (bob.bloch().norm() - 1.0).max(0.0);
        }
        Err(_) => failures += 1.0,
    }
    for param in EstimandParam::ALL {
        match fisher(input, d, u, NormalizationMode::Normalized, param, DerivativeMethod::Analytic) {
            Ok(_) => {}
            Err(Error::NegativeFisher(v)) => e[20] = e[20].max(-v),
            Err(_) => failures += 1.0,
        }
    }
    e[21] = failures;
    e
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_passes() {
        let report = verify(40, 7).unwrap();
        assert!(report.passed(), "{}", report.render());
    }

    #[test]
    fn report_has_every_section() {
        let text = verify(1, 3).unwrap().render();
        for title in SECTIONS {
            assert!(text.contains(title), "{title}");
        }
    }

    #[test]
    fn draws_are_seeded() {
        assert_eq!(random_draws(20, 11), random_draws(20, 11));
        assert_ne!(random_draws(20, 11), random_draws(20, 12));
    }

    #[test]
    fn zero_trials_rejected() {
        assert!(verify(0, 1).is_err());
    }

    #[test]
    fn injected_misprint_is_caught() {
        let report = verify_with(40, 7, VerifyOptions { b7: B7Form::Misprinted }).unwrap();
        assert!(!report.passed());
        assert!(!report.section_passed(1) || !report.section_passed(4));
        assert!(report.misprinted_b7_singlet_example > 0.1);
    }
}
