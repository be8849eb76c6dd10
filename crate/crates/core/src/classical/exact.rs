//! Closed-form actions for the exactly solvable members of the catalog.

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ExactKind {
    Free,
    Linear { force: f64 },
    Harmonic { omega: f64 },
}

/// S_cl(B|A) for duration ε.
pub fn exact_action(kind: ExactKind, mass: f64, q_a: f64, q_b: f64, eps: f64) -> Result<f64> {
    let d = q_b - q_a;
    match kind {
        ExactKind::Free => Ok(mass * d * d / (2.0 * eps)),
        ExactKind::Linear { force } => Ok(mass * d * d / (2.0 * eps) + 0.5 * force * (q_a + q_b) * eps
            - force * force * eps.powi(3) / (24.0 * mass)),
        ExactKind::Harmonic { omega } => {
            if omega == 0.0 {
                return Ok(mass * d * d / (2.0 * eps));
            }
            let x = omega * eps;
            let s = x.sin();
            if s.abs() < 1e-12 {
                return Err(Error::ConjugatePoint { jacobian: s.abs() });
            }
            Ok(mass * omega / (2.0 * s) * ((q_a * q_a + q_b * q_b) * x.cos() - 2.0 * q_a * q_b))
        }
    }
}

/// Taylor coefficients (c₋₁, c₁, c₃, c₅) of the oscillator action in ε, from the
/// cot/csc expansions with a = q_A² + q_B² and b = q_A q_B.
pub fn harmonic_action_taylor(mass: f64, omega: f64, q_a: f64, q_b: f64) -> [f64; 4] {
    let a = q_a * q_a + q_b * q_b;
    let b = q_a * q_b;
    let w2 = omega * omega;
    [
        0.5 * mass * (a - 2.0 * b),
        -mass * w2 / 6.0 * (a + b),
        -mass * w2 * w2 / 720.0 * (8.0 * a + 14.0 * b),
        -mass * w2 * w2 * w2 / 30240.0 * (32.0 * a + 62.0 * b),
    ]
}
