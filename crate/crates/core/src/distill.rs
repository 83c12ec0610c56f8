//! Magic-state distillation accounting.
//!
//! The fault-tolerant gate set is completed by injecting noisy magic states
//! and purifying them in a 15-to-1 distillation cascade. One round maps an
//! input error rate ε to 35·ε³, so the cascade converges iff ε < 1/√35.
//! Injection prepares a state of error ε₀ ≈ 6p at physical error rate p;
//! the resulting purification threshold in p is 1/(6√35) ≈ 2.8% — far above
//! the memory threshold, so the topological layer is the bottleneck.
//!
//! Resource scaling: one output at level n consumes 15ⁿ injected inputs,
//! and reaching a target error S⁻¹ costs O(S·(ln S)³) when the softer
//! overhead of the cascade is folded in; the cascade's own exponent is
//! γ = log₃ 15 ≈ 2.465, i.e. ε_out ~ ε^(3ⁿ) at cost 15ⁿ.

use serde::{Deserialize, Serialize};

/// Error rate of one distillation round's output given its inputs.
pub fn output_error(eps: f64) -> f64 {
    35.0 * eps.powi(3)
}

/// Error rate of an injected magic state at physical error rate p.
pub fn injection_error(p: f64) -> f64 {
    6.0 * p
}

/// Fixed point of the distillation map: the cascade contracts below this
/// input error and diverges above it.
pub const FIXED_POINT: f64 = 0.169_030_850_945_703_32; // 1/√35

/// Largest physical error rate whose injected states can be purified:
/// 1/(6·√35).
pub const INJECTION_THRESHOLD: f64 = 0.028_171_808_490_950_552;

/// Cost exponent of the cascade: 15ⁿ inputs purify to error ε^(3ⁿ), so cost
/// scales as (log 1/ε)^γ with γ = log₃ 15.
pub const COST_EXPONENT: f64 = 2.464_973_520_717_927;

/// Error after `levels` rounds of distillation.
pub fn cascade(eps0: f64, levels: u32) -> f64 {
    let mut eps = eps0;
    for _ in 0..levels {
        eps = output_error(eps);
    }
    eps
}

/// Raw magic states consumed per output after `levels` rounds.
pub fn input_states(levels: u32) -> u64 {
    15u64.pow(levels)
}

/// Fewest distillation rounds that push an injected state below `target`,
/// or `None` when the cascade cannot converge.
pub fn levels_needed(eps0: f64, target: f64) -> Option<u32> {
    assert!(target > 0.0);
    if eps0 <= target {
        return Some(0);
    }
    if eps0 >= FIXED_POINT {
        return None;
    }
    let mut eps = eps0;
    for level in 1..=64 {
        eps = output_error(eps);
        if eps <= target {
            return Some(level);
        }
    }
    None // not reachable for eps0 < FIXED_POINT, but keeps the loop total
}

/// One row of a distillation plan.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct DistillLevel {
    pub level: u32,
    pub error: f64,
    pub inputs: u64,
}

/// Full plan from physical error rate to target output error: the error and
/// cumulative raw-state cost after each round, ending at the first level
/// below `target`. `None` when p is beyond the injection threshold.
pub fn plan(p: f64, target: f64) -> Option<Vec<DistillLevel>> {
    let eps0 = injection_error(p);
    let levels = levels_needed(eps0, target)?;
    Some(
        (0..=levels)
            .map(|level| DistillLevel {
                level,
                error: cascade(eps0, level),
                inputs: input_states(level),
            })
            .collect(),
    )
}

/// Leading-order cost of running a circuit of size S with distilled gates:
/// S gates each needing error 1/S costs S·(ln S)³ elementary operations up
/// to a constant.
pub fn overhead(s: f64) -> f64 {
    assert!(s > 1.0);
    s * s.ln().powi(3)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_are_what_the_formulas_say() {
        assert!((FIXED_POINT - 1.0 / 35.0f64.sqrt()).abs() < 1e-16);
        assert!((INJECTION_THRESHOLD - 1.0 / (6.0 * 35.0f64.sqrt())).abs() < 1e-16);
        assert!((COST_EXPONENT - 15.0f64.ln() / 3.0f64.ln()).abs() < 1e-12);
        // The fixed point maps to itself.
        assert!((output_error(FIXED_POINT) - FIXED_POINT).abs() < 1e-15);
    }

    #[test]
    fn cascade_contracts_below_and_diverges_above() {
        let below = FIXED_POINT * 0.9;
        assert!(output_error(below) < below);
        let above = FIXED_POINT * 1.1;
        assert!(output_error(above) > above);
        // Strict monotone decrease all the way down.
        let mut eps = 0.1;
        for _ in 0..6 {
            let next = output_error(eps);
            assert!(next < eps);
            eps = next;
        }
    }

    #[test]
    fn three_rounds_purify_typical_injected_states() {
        // At p = 7.5e-3 the injected error is 4.5e-2; three rounds reach
        // 1e-15.
        let eps0 = injection_error(7.5e-3);
        assert!((eps0 - 0.045).abs() < 1e-15);
        assert_eq!(levels_needed(eps0, 1e-15), Some(3));
        assert!(cascade(eps0, 3) < 1e-15);
        assert!(cascade(eps0, 2) > 1e-15);
    }

    #[test]
    fn injection_threshold_separates_convergence() {
        let eps_lo = injection_error(INJECTION_THRESHOLD * 0.99);
        let eps_hi = injection_error(INJECTION_THRESHOLD * 1.01);
        assert!(levels_needed(eps_lo, 1e-12).is_some());
        assert_eq!(levels_needed(eps_hi, 1e-12), None);
    }

    #[test]
    fn plan_counts_raw_inputs() {
        let rows = plan(7.5e-3, 1e-15).unwrap();
        assert_eq!(rows.len(), 4); // levels 0..=3
        assert_eq!(rows[0].inputs, 1);
        assert_eq!(rows[1].inputs, 15);
        assert_eq!(rows[3].inputs, 3375);
        assert!(rows[3].error < 1e-15);
        assert!(plan(0.05, 1e-15).is_none());
    }

    #[test]
    fn overhead_is_superlinear_but_subquadratic() {
        let s1 = 1e6;
        let s2 = 1e7;
        let ratio = overhead(s2) / overhead(s1);
        assert!(ratio > 10.0);
        assert!(ratio < 100.0);
    }
}
