//! Admissibility gate: p at most quadratic with constant mass.

use serde::Serialize;

use crate::classical::potential::{HamiltonianSpec, MagneticTerm, Potential};
use crate::kernels::{QFunction, SymbolFunction};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RejectReason {
    /// Degree in p exceeds two.
    PDegree,
    /// The p² coefficient depends on q.
    NonConstantMass,
    /// The p² coefficient vanishes or is negative.
    NonPositiveMass,
    /// The u₀ or V coefficient lies outside the catalog (u₀ polynomial; V catalog or polynomial).
    OutsideCatalog,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Classification {
    Accepted(HamiltonianSpec),
    Rejected(RejectReason),
}

fn to_potential(c: &QFunction) -> Option<Potential> {
    match c {
        QFunction::Potential(v) => Some(v.clone()),
        _ => c.as_poly().map(Potential::Polynomial),
    }
}

pub fn classify_hamiltonian(h: &SymbolFunction) -> Classification {
    if h.p_degree() > 2 {
        return Classification::Rejected(RejectReason::PDegree);
    }
    let c2 = h.coeffs.get(2).cloned().unwrap_or(QFunction::Zero);
    let half_inv_mass = match c2.constant_value() {
        Some(c) => c,
        None => return Classification::Rejected(RejectReason::NonConstantMass),
    };
    if !(half_inv_mass > 0.0) {
        return Classification::Rejected(RejectReason::NonPositiveMass);
    }
    let mass = 0.5 / half_inv_mass;
    let u0 = match h.coeffs.get(1) {
        None => None,
        Some(c) if c.is_zero() => None,
        Some(c) => match c.as_poly() {
            Some(p) => Some(MagneticTerm { poly: p }),
            None => return Classification::Rejected(RejectReason::OutsideCatalog),
        },
    };
    let v = match to_potential(&h.coeffs[0]) {
        // The harmonic prefactor is tied to its own mass; keep V itself when the masses differ.
        Some(v @ Potential::Harmonic { mass: hm, .. }) if hm != mass => Potential::Polynomial(v.as_poly().expect("polynomial")),
        Some(v) => v,
        None => return Classification::Rejected(RejectReason::OutsideCatalog),
    };
    match HamiltonianSpec::with_magnetic(mass, u0, v) {
        Ok(spec) => Classification::Accepted(spec),
        Err(_) => Classification::Rejected(RejectReason::NonPositiveMass),
    }
}
