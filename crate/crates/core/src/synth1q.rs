//! Single-qubit repeat-until-success synthesis.
//!
//! One ancilla round lands one of two unitaries on a register qubit, chosen
//! by the heralded measurement outcome.  Nothing is ever undone: the walk
//! just keeps multiplying landed unitaries onto an accumulator until the
//! product is within tolerance of the target, and the ancilla count *is* the
//! gate cost.  This module runs those walks, collects hitting-time
//! statistics over many seeds, and handles the degenerate case where the two
//! branch unitaries only generate a finite group.

use std::collections::HashMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::channel::{ChannelSpec, InteractionFlavor};
use crate::error::{AdqcError, Result};
use crate::qcore::gates::{hadamard, pauli_x, pauli_y, pauli_z};
use crate::qcore::metrics::gate_distance;
use crate::qcore::operator::SquareOperator;

/// How often the accumulated product is re-projected onto the unitary group
/// to stop floating-point drift from compounding over long walks.
const REUNITARIZE_EVERY: usize = 10_000;

/// The two branch unitaries of a single-qubit round, with the probability of
/// the first (`+i`) outcome.  Outcome bits in trajectory strings follow the
/// same order: `'1'` is the `+i` branch, `'0'` the `-i` branch.
#[derive(Debug, Clone, Serialize)]
pub struct Generators {
    plus: SquareOperator,
    minus: SquareOperator,
    p_plus: f64,
}

impl Generators {
    pub fn new(plus: SquareOperator, minus: SquareOperator, p_plus: f64) -> Result<Self> {
        for u in [&plus, &minus] {
            if u.dim() != 2 {
                return Err(AdqcError::DimensionMismatch {
                    expected: 2,
                    found: u.dim(),
                });
            }
            let defect = u.unitarity_defect();
            if defect > 1e-10 {
                return Err(AdqcError::NotUnitary { deviation: defect });
            }
        }
        if !(0.0..=1.0).contains(&p_plus) || !p_plus.is_finite() {
            return Err(AdqcError::InvalidParameter(format!(
                "branch probability must lie in [0, 1], got {p_plus}"
            )));
        }
        Ok(Generators {
            plus,
            minus,
            p_plus,
        })
    }

    /// Extract the generators from a single-qubit channel description.
    pub fn from_channel(spec: &ChannelSpec) -> Result<Self> {
        if spec.register_qubits() != 1 {
            return Err(AdqcError::InvalidParameter(
                "single-qubit synthesis needs a single-qubit round".into(),
            ));
        }
        let branches = spec.kraus_branches()?;
        if branches.len() != 2 {
            return Err(AdqcError::Internal(format!(
                "expected two surviving branches, found {}",
                branches.len()
            )));
        }
        Generators::new(
            branches[0].unitary.clone(),
            branches[1].unitary.clone(),
            branches[0].probability,
        )
    }

    pub fn for_flavor(flavor: InteractionFlavor, alpha: f64) -> Result<Self> {
        Generators::from_channel(&ChannelSpec::single_qubit(flavor, alpha))
    }

    pub fn plus(&self) -> &SquareOperator {
        &self.plus
    }

    pub fn minus(&self) -> &SquareOperator {
        &self.minus
    }

    pub fn p_plus(&self) -> f64 {
        self.p_plus
    }
}

/// What a walk is aiming for and when it is allowed to stop.
#[derive(Debug, Clone)]
pub struct SynthTarget {
    target: SquareOperator,
    epsilon: f64,
    cap: usize,
    pauli_tolerant: bool,
}

impl SynthTarget {
    pub fn new(target: SquareOperator, epsilon: f64) -> Result<Self> {
        if target.dim() != 2 {
            return Err(AdqcError::DimensionMismatch {
                expected: 2,
                found: target.dim(),
            });
        }
        let defect = target.unitarity_defect();
        if defect > 1e-10 {
            return Err(AdqcError::NotUnitary { deviation: defect });
        }
        if !(epsilon > 0.0 && epsilon <= 1.0) {
            return Err(AdqcError::InvalidParameter(format!(
                "tolerance must lie in (0, 1], got {epsilon}"
            )));
        }
        Ok(SynthTarget {
            target,
            epsilon,
            cap: 10_000_000,
            pauli_tolerant: false,
        })
    }

    /// Abort a walk after this many rounds (default ten million).
    pub fn with_cap(mut self, cap: usize) -> Result<Self> {
        if cap == 0 {
            return Err(AdqcError::InvalidParameter(
                "the round cap must be positive".into(),
            ));
        }
        self.cap = cap;
        Ok(self)
    }

    /// Accept any Pauli multiple of the target.  A left Pauli byproduct is
    /// free to correct classically, so tolerating it shortens walks.
    pub fn with_pauli_tolerance(mut self) -> Self {
        self.pauli_tolerant = true;
        self
    }

    pub fn target(&self) -> &SquareOperator {
        &self.target
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    /// The set of operators the walk may stop at, labelled by the Pauli
    /// correction each would require afterwards.
    fn comparison_set(&self) -> Vec<(&'static str, SquareOperator)> {
        if !self.pauli_tolerant {
            return vec![("I", self.target.clone())];
        }
        vec![
            ("I", self.target.clone()),
            ("X", pauli_x().mul(&self.target)),
            ("Y", pauli_y().mul(&self.target)),
            ("Z", pauli_z().mul(&self.target)),
        ]
    }
}

/// Full record of one walk: the outcome string (`'1'` = `+i` branch), where
/// it stopped, and what it landed on.
#[derive(Debug, Clone, Serialize)]
pub struct WalkTrajectory {
    pub seed: u64,
    pub outcomes: String,
    pub final_operator: SquareOperator,
    /// Rounds consumed before the stop condition held; `None` if the cap was
    /// reached first.
    pub stop_step: Option<usize>,
    pub final_distance: f64,
    /// With Pauli tolerance, the byproduct to correct for; `"I"` means none.
    pub pauli_byproduct: Option<String>,
}

/// Run a single walk to completion (or to the cap), keeping the whole
/// trajectory.  The stop condition is checked before the first round, so a
/// target within tolerance of the identity costs zero ancillas.
pub fn run_until(gens: &Generators, spec: &SynthTarget, seed: u64) -> Result<WalkTrajectory> {
    let comparison = spec.comparison_set();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut acc = SquareOperator::identity(2);
    let mut outcomes = String::new();
    let mut stop_step = None;
    let mut final_distance = f64::INFINITY;
    let mut byproduct = None;
    for step in 0..=spec.cap {
        let (label, d) = closest_of(&comparison, &acc)?;
        final_distance = d;
        if d <= spec.epsilon {
            stop_step = Some(step);
            byproduct = spec.pauli_tolerant.then(|| label.to_string());
            break;
        }
        if step == spec.cap {
            break;
        }
        if rng.gen::<f64>() < gens.p_plus {
            outcomes.push('1');
            acc = gens.plus.mul(&acc);
        } else {
            outcomes.push('0');
            acc = gens.minus.mul(&acc);
        }
        if (step + 1) % REUNITARIZE_EVERY == 0 {
            acc = acc.polar_unitary()?;
        }
    }
    Ok(WalkTrajectory {
        seed,
        outcomes,
        final_operator: acc,
        stop_step,
        final_distance,
        pauli_byproduct: byproduct,
    })
}

fn closest_of(
    comparison: &[(&'static str, SquareOperator)],
    acc: &SquareOperator,
) -> Result<(&'static str, f64)> {
    let mut best = ("I", f64::INFINITY);
    for (label, op) in comparison {
        let d = gate_distance(acc, op)?;
        if d < best.1 {
            best = (label, d);
        }
    }
    Ok(best)
}

/// Stripped-down walk used for statistics: no outcome string, no operator
/// kept at the end.
fn hit_time(
    gens: &Generators,
    comparison: &[(&'static str, SquareOperator)],
    epsilon: f64,
    cap: usize,
    seed: u64,
) -> Result<(Option<usize>, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut acc = SquareOperator::identity(2);
    for step in 0..=cap {
        let (_, d) = closest_of(comparison, &acc)?;
        if d <= epsilon {
            return Ok((Some(step), d));
        }
        if step == cap {
            return Ok((None, d));
        }
        let gen = if rng.gen::<f64>() < gens.p_plus {
            &gens.plus
        } else {
            &gens.minus
        };
        acc = gen.mul(&acc);
        if (step + 1) % REUNITARIZE_EVERY == 0 {
            acc = acc.polar_unitary()?;
        }
    }
    unreachable!("loop always returns");
}

#[derive(Debug, Clone, Serialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub seed: u64,
    pub stop_step: Option<usize>,
    pub final_distance: f64,
}

/// Aggregates over the successful trials; step quantiles use the
/// nearest-rank convention.
#[derive(Debug, Clone, Serialize)]
pub struct HittingSummary {
    pub trials: usize,
    pub successes: usize,
    pub failures: usize,
    pub mean_steps: Option<f64>,
    pub median_steps: Option<f64>,
    pub p95_steps: Option<f64>,
    pub max_steps: Option<usize>,
}

#[derive(Debug, Clone, Serialize)]
pub struct HittingStats {
    pub records: Vec<TrialRecord>,
    pub summary: HittingSummary,
}

/// Hitting-time statistics over `trials` independent walks.  Trial `i` is
/// seeded with `base_seed ^ i`, so any single trial can be replayed with
/// [`run_until`].  Trials run in parallel.
pub fn hitting_stats(
    gens: &Generators,
    spec: &SynthTarget,
    base_seed: u64,
    trials: usize,
) -> Result<HittingStats> {
    if trials == 0 {
        return Err(AdqcError::InvalidParameter(
            "need at least one trial".into(),
        ));
    }
    let comparison = spec.comparison_set();
    let records: Vec<TrialRecord> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let seed = base_seed ^ i as u64;
            let (stop_step, final_distance) =
                hit_time(gens, &comparison, spec.epsilon, spec.cap, seed)?;
            Ok(TrialRecord {
                trial: i,
                seed,
                stop_step,
                final_distance,
            })
        })
        .collect::<Result<_>>()?;
    let summary = summarize(&records);
    Ok(HittingStats { records, summary })
}

pub(crate) fn summarize(records: &[TrialRecord]) -> HittingSummary {
    let mut steps: Vec<usize> = records.iter().filter_map(|r| r.stop_step).collect();
    steps.sort_unstable();
    let successes = steps.len();
    let nearest_rank = |q: f64| -> Option<f64> {
        if steps.is_empty() {
            return None;
        }
        let rank = ((q * successes as f64).ceil() as usize).clamp(1, successes);
        Some(steps[rank - 1] as f64)
    };
    HittingSummary {
        trials: records.len(),
        successes,
        failures: records.len() - successes,
        mean_steps: (successes > 0)
            .then(|| steps.iter().sum::<usize>() as f64 / successes as f64),
        median_steps: nearest_rank(0.50),
        p95_steps: nearest_rank(0.95),
        max_steps: steps.last().copied(),
    }
}

/// One element of a finite closure, labelled when it is a recognisable gate.
#[derive(Debug, Clone, Serialize)]
pub struct GroupElement {
    pub label: String,
    pub operator: SquareOperator,
}

#[derive(Debug, Clone, Serialize)]
pub struct FiniteGroupReport {
    pub order: usize,
    pub elements: Vec<GroupElement>,
}

impl FiniteGroupReport {
    pub fn labels(&self) -> Vec<&str> {
        self.elements.iter().map(|e| e.label.as_str()).collect()
    }
}

/// Close the two branch unitaries under multiplication, up to global phase.
/// Errors with [`AdqcError::NotAFiniteGroup`] once more than `limit` distinct
/// elements have shown up — the signature of a walk that is dense rather
/// than periodic.
pub fn finite_group_closure(gens: &Generators, limit: usize) -> Result<FiniteGroupReport> {
    let mut seen = HashMap::new();
    let mut elements = vec![SquareOperator::identity(2)];
    seen.insert(quantized_key(&elements[0]), 0usize);
    let mut frontier = vec![elements[0].clone()];
    while let Some(m) = frontier.pop() {
        for g in [&gens.plus, &gens.minus] {
            let next = g.mul(&m).canonical_phase();
            let key = quantized_key(&next);
            if !seen.contains_key(&key) {
                seen.insert(key, elements.len());
                elements.push(next.clone());
                if elements.len() > limit {
                    return Err(AdqcError::NotAFiniteGroup { limit });
                }
                frontier.push(next);
            }
        }
    }
    let named = named_references();
    let elements = elements
        .into_iter()
        .enumerate()
        .map(|(i, op)| {
            let label = named
                .iter()
                .find(|(_, r)| op.approx_eq_up_to_phase(r, 1e-9))
                .map(|(n, _)| n.to_string())
                .unwrap_or_else(|| format!("g{i}"));
            GroupElement {
                label,
                operator: op,
            }
        })
        .collect();
    Ok(FiniteGroupReport {
        order: seen.len(),
        elements,
    })
}

fn named_references() -> Vec<(&'static str, SquareOperator)> {
    let h = hadamard();
    vec![
        ("I", SquareOperator::identity(2)),
        ("X", pauli_x()),
        ("Y", pauli_y()),
        ("Z", pauli_z()),
        ("H", h.clone()),
        ("HX", h.mul(&pauli_x())),
        ("HY", h.mul(&pauli_y())),
        ("HZ", h.mul(&pauli_z())),
    ]
}

fn quantized_key(op: &SquareOperator) -> Vec<(i64, i64)> {
    let op = op.canonical_phase();
    op.entries()
        .iter()
        .map(|z| ((z.re / 1e-9).round() as i64, (z.im / 1e-9).round() as i64))
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct ElementHitStats {
    pub label: String,
    pub mean_steps: f64,
    pub hits: usize,
}

/// Mean first-visit time to every element of a finite closure, over
/// independent walks.  A walk runs until it has visited everything or spent
/// `cap` rounds.
pub fn first_hit_times(
    gens: &Generators,
    report: &FiniteGroupReport,
    base_seed: u64,
    trials: usize,
    cap: usize,
) -> Result<Vec<ElementHitStats>> {
    let n = report.elements.len();
    let totals: Vec<(Vec<usize>, Vec<usize>)> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(base_seed ^ i as u64);
            let mut acc = SquareOperator::identity(2);
            let mut first: Vec<Option<usize>> = vec![None; n];
            let mut remaining = n;
            for step in 0..=cap {
                let here = index_of(report, &acc)?;
                if first[here].is_none() {
                    first[here] = Some(step);
                    remaining -= 1;
                    if remaining == 0 {
                        break;
                    }
                }
                let gen = if rng.gen::<f64>() < gens.p_plus {
                    &gens.plus
                } else {
                    &gens.minus
                };
                acc = gen.mul(&acc);
                if (step + 1) % 1000 == 0 {
                    acc = acc.polar_unitary()?;
                }
            }
            let mut sums = vec![0usize; n];
            let mut hits = vec![0usize; n];
            for (j, f) in first.iter().enumerate() {
                if let Some(s) = f {
                    sums[j] = *s;
                    hits[j] = 1;
                }
            }
            Ok((sums, hits))
        })
        .collect::<Result<_>>()?;
    let mut out = Vec::with_capacity(n);
    for (j, element) in report.elements.iter().enumerate() {
        let total: usize = totals.iter().map(|(s, _)| s[j]).sum();
        let hits: usize = totals.iter().map(|(_, h)| h[j]).sum();
        out.push(ElementHitStats {
            label: element.label.clone(),
            mean_steps: if hits > 0 {
                total as f64 / hits as f64
            } else {
                f64::NAN
            },
            hits,
        });
    }
    Ok(out)
}

fn index_of(report: &FiniteGroupReport, acc: &SquareOperator) -> Result<usize> {
    let mut best = (0usize, f64::INFINITY);
    for (i, e) in report.elements.iter().enumerate() {
        let d = gate_distance(acc, &e.operator)?;
        if d < best.1 {
            best = (i, d);
        }
    }
    if best.1 > 1e-6 {
        return Err(AdqcError::Internal(format!(
            "walk left the finite closure (nearest element at distance {:.3e})",
            best.1
        )));
    }
    Ok(best.0)
}

/// Budget for a composite gate synthesised piece by piece: the sum of the
/// pieces' expected round counts.  Sequential synthesis multiplies unitaries
/// in written order, so this is an upper bound on the composite's cost.
pub fn expected_time_upper_bound(
    sequence: &[&str],
    estimates: &HashMap<String, f64>,
) -> Result<f64> {
    let mut total = 0.0;
    for name in sequence {
        match estimates.get(*name) {
            Some(e) => total += e,
            None => return Err(AdqcError::MissingGateEstimate((*name).to_string())),
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::gates::zroot;
    use std::f64::consts::FRAC_PI_8;

    fn full_generators() -> Generators {
        Generators::for_flavor(InteractionFlavor::Full, FRAC_PI_8).unwrap()
    }

    #[test]
    fn generators_come_out_of_the_channel_in_outcome_order() {
        let gens = full_generators();
        let h_t = hadamard().mul(&zroot(4).unwrap());
        let xh_t = pauli_x().mul(&h_t);
        assert!(gens.plus().approx_eq_up_to_phase(&xh_t, 1e-10));
        assert!(gens.minus().approx_eq_up_to_phase(&h_t, 1e-10));
        assert!((gens.p_plus() - 0.14644660940672624).abs() < 1e-12);
    }

    #[test]
    fn identity_target_costs_nothing() {
        let gens = full_generators();
        let spec = SynthTarget::new(SquareOperator::identity(2), 0.01).unwrap();
        let walk = run_until(&gens, &spec, 7).unwrap();
        assert_eq!(walk.stop_step, Some(0));
        assert!(walk.outcomes.is_empty());
        assert!(walk.final_distance <= 1e-12);
    }

    #[test]
    fn same_seed_same_trajectory() {
        let gens = full_generators();
        let spec = SynthTarget::new(hadamard(), 0.05).unwrap();
        let a = run_until(&gens, &spec, 12345).unwrap();
        let b = run_until(&gens, &spec, 12345).unwrap();
        assert_eq!(a.outcomes, b.outcomes);
        assert_eq!(a.stop_step, b.stop_step);
        assert_eq!(a.final_operator.entries(), b.final_operator.entries());
    }

    #[test]
    fn walk_reaches_a_hadamard() {
        let gens = full_generators();
        let spec = SynthTarget::new(hadamard(), 0.1)
            .unwrap()
            .with_cap(100_000)
            .unwrap();
        let walk = run_until(&gens, &spec, 42).unwrap();
        let steps = walk.stop_step.expect("walk should hit at this tolerance");
        assert!(walk.final_distance <= 0.1);
        assert_eq!(walk.outcomes.len(), steps);
    }

    #[test]
    fn capped_walk_reports_failure_honestly() {
        let gens = full_generators();
        let spec = SynthTarget::new(hadamard(), 1e-6)
            .unwrap()
            .with_cap(50)
            .unwrap();
        let walk = run_until(&gens, &spec, 3).unwrap();
        assert_eq!(walk.stop_step, None);
        assert_eq!(walk.outcomes.len(), 50);
        assert!(walk.final_distance > 1e-6);
    }

    #[test]
    fn hitting_stats_are_reproducible_and_plausible() {
        let gens = full_generators();
        let spec = SynthTarget::new(hadamard(), 0.1)
            .unwrap()
            .with_cap(100_000)
            .unwrap();
        let stats = hitting_stats(&gens, &spec, 99, 40).unwrap();
        assert_eq!(stats.summary.trials, 40);
        assert_eq!(stats.summary.failures, 0);
        let mean = stats.summary.mean_steps.unwrap();
        assert!(mean > 0.5 && mean < 100.0, "mean {mean} out of band");
        // every record replays through run_until
        let r = &stats.records[7];
        let replay = run_until(&gens, &spec, r.seed).unwrap();
        assert_eq!(replay.stop_step, r.stop_step);
    }

    #[test]
    fn pauli_tolerance_never_slows_a_walk() {
        let gens = full_generators();
        let plain = SynthTarget::new(zroot(4).unwrap(), 0.08)
            .unwrap()
            .with_cap(100_000)
            .unwrap();
        let tolerant = plain.clone().with_pauli_tolerance();
        for seed in [1u64, 2, 3, 4, 5] {
            let a = run_until(&gens, &plain, seed).unwrap();
            let b = run_until(&gens, &tolerant, seed).unwrap();
            match (a.stop_step, b.stop_step) {
                (Some(sa), Some(sb)) => assert!(sb <= sa),
                (None, _) => {}
                (Some(_), None) => panic!("tolerant walk lost a hit"),
            }
            if let Some(p) = &b.pauli_byproduct {
                assert!(["I", "X", "Y", "Z"].contains(&p.as_str()));
            }
        }
    }

    #[test]
    fn symmetric_flavor_generates_a_group_of_eight() {
        let gens = Generators::for_flavor(InteractionFlavor::Symmetric, FRAC_PI_8).unwrap();
        let report = finite_group_closure(&gens, 100).unwrap();
        assert_eq!(report.order, 8);
        let mut labels = report.labels();
        labels.sort_unstable();
        assert_eq!(labels, ["H", "HX", "HY", "HZ", "I", "X", "Y", "Z"]);
    }

    #[test]
    fn full_flavor_closure_never_terminates() {
        let gens = full_generators();
        assert!(matches!(
            finite_group_closure(&gens, 200),
            Err(AdqcError::NotAFiniteGroup { limit: 200 })
        ));
    }

    #[test]
    fn every_group_element_gets_visited() {
        let gens = Generators::for_flavor(InteractionFlavor::Symmetric, FRAC_PI_8).unwrap();
        let report = finite_group_closure(&gens, 100).unwrap();
        let stats = first_hit_times(&gens, &report, 5, 20, 10_000).unwrap();
        for s in &stats {
            assert_eq!(s.hits, 20, "element {} missed in some trial", s.label);
            assert!(s.mean_steps < 100.0);
        }
        let identity = stats.iter().find(|s| s.label == "I").unwrap();
        assert_eq!(identity.mean_steps, 0.0);
    }

    #[test]
    fn composite_budget_adds_up_and_flags_gaps() {
        let mut estimates = HashMap::new();
        estimates.insert("H".to_string(), 6.0);
        estimates.insert("T".to_string(), 1050.0);
        let total = expected_time_upper_bound(&["H", "T", "H"], &estimates).unwrap();
        assert!((total - 1062.0).abs() < 1e-12);
        assert!(matches!(
            expected_time_upper_bound(&["H", "S"], &estimates),
            Err(AdqcError::MissingGateEstimate(name)) if name == "S"
        ));
    }
}
