//! Two-qubit synthesis as a walk on one angle.
//!
//! When a single ancilla couples to two register qubits in turn (symmetric
//! flavor) and is then measured, each branch applies known local gates plus a
//! pure two-qubit phase `e^{i b ZZ}`.  Locals are cheap, so the only quantity
//! that needs synthesising is the accumulated phase angle — and since the
//! angle only matters modulo a half turn, a sequence of rounds is exactly a
//! random walk on a circle with two fixed increments.  The rare outcome's
//! increment depends on the coupling strength; the common one is always a
//! quarter turn backwards.
//!
//! Generic strengths make the rare increment an irrational fraction of the
//! circle, so orbits are dense and any angle is reachable to tolerance.  One
//! special strength pins the increment to exactly one eighth of the circle,
//! collapsing the walk onto a finite grid that it hits *exactly*; the
//! reachability analysis for declared-rational increments lives here too.

use serde::Serialize;
use std::collections::VecDeque;
use std::f64::consts::{FRAC_PI_4, PI};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::channel::{ChannelSpec, InteractionFlavor};
use crate::error::{AdqcError, Result};
use crate::synth1q::{summarize, HittingStats, TrialRecord};

/// Distance between two phase angles on the half-turn circle.
pub fn beta_distance(a: f64, b: f64) -> f64 {
    let r = (a - b).rem_euclid(PI);
    r.min(PI - r)
}

/// The two increments and their probabilities for the entangling-phase walk
/// at a given coupling strength.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct BetaWalkParams {
    pub alpha: f64,
    /// Phase advance on the `+i` outcome; strength-dependent.
    pub delta_plus: f64,
    /// Phase advance on the `-i` outcome; a quarter turn backwards at every
    /// strength.
    pub delta_minus: f64,
    pub p_plus: f64,
    pub p_minus: f64,
}

/// Read the walk increments off the two-qubit symmetric-flavor channel.
///
/// The strength must lie strictly inside `(0, pi/2)` and away from `pi/4`,
/// where the branch asymmetry degenerates and both increments collapse onto
/// the quarter-turn grid.
pub fn increments(alpha: f64) -> Result<BetaWalkParams> {
    if !(alpha > 0.0 && alpha < PI / 2.0) {
        return Err(AdqcError::InvalidParameter(format!(
            "coupling strength must lie in (0, pi/2), got {alpha}"
        )));
    }
    if (2.0 * alpha).cos().abs() < 1e-12 {
        return Err(AdqcError::SingularStrength { alpha });
    }
    let spec = ChannelSpec::two_qubit(InteractionFlavor::Symmetric, alpha);
    let branches = spec.kraus_branches()?;
    let plus = &branches[0];
    let minus = &branches[1];
    let (cp, cm) = match (plus.classification, minus.classification) {
        (Some(cp), Some(cm)) => (cp, cm),
        _ => {
            return Err(AdqcError::Internal(
                "symmetric-flavor branches should decompose cleanly".into(),
            ))
        }
    };
    Ok(BetaWalkParams {
        alpha,
        delta_plus: cp.beta,
        delta_minus: cm.beta,
        p_plus: plus.probability,
        p_minus: minus.probability,
    })
}

/// The strength at which the rare increment is exactly one eighth of the
/// circle, so the walk lives on a finite grid and hits grid angles exactly.
pub fn exact_grid_strength() -> f64 {
    0.5 * (2.0f64.sqrt() - 1.0).acos()
}

/// The rational declaration matching [`exact_grid_strength`], for
/// [`exact_reachable_set`].
pub fn exact_grid_flag() -> (i64, u64) {
    (-3, 8)
}

/// One walk over the phase circle, starting from angle zero.
#[derive(Debug, Clone, Serialize)]
pub struct BetaTrajectory {
    pub seed: u64,
    pub outcomes: String,
    /// The angle after each round, folded into `[0, pi)`; the leading entry
    /// is the starting zero, so the length is one more than the round count.
    pub beta_values: Vec<f64>,
    pub stop_step: Option<usize>,
    pub final_distance: f64,
}

/// Walk until the accumulated angle is within `epsilon` of `target_beta` on
/// the half-turn circle, or `cap` rounds pass.  Checked before the first
/// round, so a target equivalent to zero is free.
pub fn run_until_beta(
    params: &BetaWalkParams,
    target_beta: f64,
    epsilon: f64,
    cap: usize,
    seed: u64,
) -> Result<BetaTrajectory> {
    validate_walk_args(target_beta, epsilon, cap)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut beta = 0.0f64;
    let mut outcomes = String::new();
    let mut beta_values = vec![beta];
    let mut stop_step = None;
    let mut final_distance = f64::INFINITY;
    for step in 0..=cap {
        let d = beta_distance(beta, target_beta);
        final_distance = d;
        if d <= epsilon {
            stop_step = Some(step);
            break;
        }
        if step == cap {
            break;
        }
        if rng.gen::<f64>() < params.p_plus {
            outcomes.push('1');
            beta += params.delta_plus;
        } else {
            outcomes.push('0');
            beta += params.delta_minus;
        }
        beta = beta.rem_euclid(PI);
        beta_values.push(beta);
    }
    Ok(BetaTrajectory {
        seed,
        outcomes,
        beta_values,
        stop_step,
        final_distance,
    })
}

fn validate_walk_args(target_beta: f64, epsilon: f64, cap: usize) -> Result<()> {
    if !target_beta.is_finite() {
        return Err(AdqcError::InvalidParameter(
            "target angle must be finite".into(),
        ));
    }
    if !(epsilon > 0.0 && epsilon <= PI / 2.0) {
        return Err(AdqcError::InvalidParameter(format!(
            "angle tolerance must lie in (0, pi/2], got {epsilon}"
        )));
    }
    if cap == 0 {
        return Err(AdqcError::InvalidParameter(
            "the round cap must be positive".into(),
        ));
    }
    Ok(())
}

/// Hitting-time statistics for the angle walk, trial `i` seeded with
/// `base_seed ^ i` just like the single-qubit statistics.
pub fn beta_hitting_stats(
    params: &BetaWalkParams,
    target_beta: f64,
    epsilon: f64,
    cap: usize,
    base_seed: u64,
    trials: usize,
) -> Result<HittingStats> {
    validate_walk_args(target_beta, epsilon, cap)?;
    if trials == 0 {
        return Err(AdqcError::InvalidParameter(
            "need at least one trial".into(),
        ));
    }
    let records: Vec<TrialRecord> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let seed = base_seed ^ i as u64;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut beta = 0.0f64;
            let mut stop_step = None;
            let mut final_distance = f64::INFINITY;
            for step in 0..=cap {
                let d = beta_distance(beta, target_beta);
                final_distance = d;
                if d <= epsilon {
                    stop_step = Some(step);
                    break;
                }
                if step == cap {
                    break;
                }
                beta += if rng.gen::<f64>() < params.p_plus {
                    params.delta_plus
                } else {
                    params.delta_minus
                };
                beta = beta.rem_euclid(PI);
            }
            TrialRecord {
                trial: i,
                seed,
                stop_step,
                final_distance,
            }
        })
        .collect();
    let summary = summarize(&records);
    Ok(HittingStats { records, summary })
}

/// A grid angle the exact-mode walk can land on, with one witness round
/// count for each outcome type.
#[derive(Debug, Clone, Serialize)]
pub struct ResidueWitness {
    /// Position on the grid, in units of `pi / lattice`.
    pub residue: u64,
    pub beta: f64,
    pub n_plus: u64,
    pub n_minus: u64,
}

/// The finite orbit of a walk whose rare increment is declared rational.
#[derive(Debug, Clone, Serialize)]
pub struct ExactReachability {
    /// The declaration: the strength-dependent angle is `p pi / q`.
    pub numerator: i64,
    pub denominator: u64,
    /// Grid size: angles are multiples of `pi / lattice`, `lattice = 4q`.
    pub lattice: u64,
    /// Both increments as grid steps.
    pub step_plus: u64,
    pub step_minus: u64,
    pub reachable_count: u64,
    /// Every reachable angle with shortest witnesses, present when the orbit
    /// is small enough to enumerate comfortably.
    pub residues: Option<Vec<ResidueWitness>>,
}

const DENSE_LIMIT: u64 = 1_000_000;

/// Enumerate exactly which angles a declared-rational walk can reach.
///
/// `flag = (p, q)` asserts that the strength-dependent angle underlying the
/// rare increment is `p pi / q`.  The declaration is checked against the
/// actual increment first and rejected if they disagree.  Orbits larger than
/// a million grid points are reported as [`AdqcError::EffectivelyDense`] —
/// at that size exact reachability is of no practical use anyway.
pub fn exact_reachable_set(
    params: &BetaWalkParams,
    flag: (i64, u64),
) -> Result<ExactReachability> {
    let (p, q) = flag;
    if q == 0 || q > i64::MAX as u64 {
        return Err(AdqcError::InvalidParameter(format!(
            "denominator must be a reasonable positive integer, got {q}"
        )));
    }
    // the declared angle phi = p pi / q makes the rare increment -(phi + pi/4)
    let expected = -(p as f64 * PI / q as f64 + FRAC_PI_4);
    let got = params.delta_plus;
    let mismatch = beta_distance(expected, got);
    if mismatch > 1e-9 {
        return Err(AdqcError::InconsistentRational {
            expected: expected.rem_euclid(PI),
            got: got.rem_euclid(PI),
        });
    }
    if q > DENSE_LIMIT / 4 {
        return Err(AdqcError::EffectivelyDense {
            limit: DENSE_LIMIT as usize,
        });
    }
    let lattice = 4 * q;
    let step_plus = (-(4 * p + q as i64)).rem_euclid(lattice as i64) as u64;
    let step_minus = (-(q as i64)).rem_euclid(lattice as i64) as u64;
    let g = gcd(gcd(step_plus, step_minus), lattice);
    let reachable_count = lattice / g.max(1);
    if reachable_count > DENSE_LIMIT {
        return Err(AdqcError::EffectivelyDense {
            limit: DENSE_LIMIT as usize,
        });
    }
    // breadth-first over the grid subgroup, remembering one shortest witness
    let mut witness: Vec<Option<(u64, u64)>> = vec![None; lattice as usize];
    witness[0] = Some((0, 0));
    let mut queue = VecDeque::from([0u64]);
    while let Some(r) = queue.pop_front() {
        let (np, nm) = witness[r as usize].unwrap();
        for (next, add_plus) in [((r + step_plus) % lattice, true), ((r + step_minus) % lattice, false)] {
            if witness[next as usize].is_none() {
                witness[next as usize] = Some(if add_plus { (np + 1, nm) } else { (np, nm + 1) });
                queue.push_back(next);
            }
        }
    }
    let found = witness.iter().filter(|w| w.is_some()).count() as u64;
    if found != reachable_count {
        return Err(AdqcError::Internal(format!(
            "orbit size {found} disagrees with subgroup size {reachable_count}"
        )));
    }
    let residues = if reachable_count <= 4096 {
        Some(
            witness
                .iter()
                .enumerate()
                .filter_map(|(r, w)| {
                    w.map(|(n_plus, n_minus)| ResidueWitness {
                        residue: r as u64,
                        beta: r as f64 * PI / lattice as f64,
                        n_plus,
                        n_minus,
                    })
                })
                .collect(),
        )
    } else {
        None
    };
    Ok(ExactReachability {
        numerator: p,
        denominator: q,
        lattice,
        step_plus,
        step_minus,
        reachable_count,
        residues,
    })
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// A new record-low return of `k` rare increments towards zero on the
/// circle.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct OrbitReturn {
    pub k: u64,
    pub distance: f64,
}

/// Running minima of how close `k` rare increments come back to zero, for
/// `k` up to `k_max`.  A truly periodic increment would produce an exact
/// return; an irrational one only produces a slowly decaying sequence of
/// near-misses, and that decay is the numerical witness of a dense orbit.
pub fn irrationality_witness(params: &BetaWalkParams, k_max: u64) -> Vec<OrbitReturn> {
    let mut out = Vec::new();
    let mut best = f64::INFINITY;
    let mut angle = 0.0f64;
    for k in 1..=k_max {
        angle = (angle + params.delta_plus).rem_euclid(PI);
        let d = angle.min(PI - angle);
        if d < best {
            best = d;
            out.push(OrbitReturn { k, distance: d });
        }
    }
    out
}
