//! One ancilla round, seen from the register.
//!
//! A round couples a freshly prepared ancilla to the register through a fixed
//! two-qubit unitary and then measures the ancilla in a fixed basis.  Tracing
//! the ancilla out branch-by-branch turns the round into a pair of Kraus
//! operators on the register; when the measurement basis sits symmetrically
//! with respect to the states the register back-acts onto, both Kraus
//! operators are proportional to unitaries and the round implements a random
//! unitary with classical heralding.  This module builds those branches and
//! checks the symmetry question explicitly.
//!
//! Ancilla preparation defaults to `|+i>` and the measurement basis to
//! `{|+i>, |-i>}`; both can be overridden to probe configurations where the
//! unitarity property fails (for instance a computational-basis measurement).

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{AdqcError, Result};
use crate::qcore::gates::{controlled_rz, hadamard, interaction, interaction_symmetric};
use crate::qcore::metrics::{ising_decompose, IsingDecomposition};
use crate::qcore::operator::SquareOperator;
use crate::qcore::state::StateVector;

/// How the ancilla-register coupling is dressed with local Hadamards.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InteractionFlavor {
    /// `(H (x) H) . CRz(4a)` — the interaction used by the full protocol.
    Full,
    /// `(H (x) H) . e^{i a ZZ}` — same entangling content, symmetric phases;
    /// its branches are `H` and `HZ` and its two-qubit walk needs no
    /// frame bookkeeping beyond Paulis.
    Symmetric,
    /// The bare controlled phase `CRz(4a)`, kept around as the degenerate
    /// reference point: no Hadamard dressing, so single-qubit branches are
    /// diagonal and the two-qubit round is not even unitary branch-wise.
    ControlledOnly,
}

impl InteractionFlavor {
    /// The 4x4 coupling unitary at strength `alpha` (ancilla = left factor).
    pub fn matrix(self, alpha: f64) -> Result<SquareOperator> {
        match self {
            InteractionFlavor::Full => interaction(alpha),
            InteractionFlavor::Symmetric => interaction_symmetric(alpha),
            InteractionFlavor::ControlledOnly => controlled_rz(4.0 * alpha),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            InteractionFlavor::Full => "full",
            InteractionFlavor::Symmetric => "symmetric",
            InteractionFlavor::ControlledOnly => "controlled-only",
        }
    }
}

impl std::fmt::Display for InteractionFlavor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for InteractionFlavor {
    type Err = AdqcError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(InteractionFlavor::Full),
            "symmetric" | "sym" => Ok(InteractionFlavor::Symmetric),
            "controlled-only" | "controlled" => Ok(InteractionFlavor::ControlledOnly),
            other => Err(AdqcError::InvalidParameter(format!(
                "unknown interaction flavor `{other}` (expected full, symmetric, or controlled-only)"
            ))),
        }
    }
}

const ORTHONORMAL_TOL: f64 = 1e-12;

/// An orthonormal pair of single-qubit states the ancilla is measured in,
/// with the outcome labels used in trajectory records.
#[derive(Debug, Clone, Serialize)]
pub struct MeasurementBasis {
    states: [StateVector; 2],
    labels: [String; 2],
}

impl MeasurementBasis {
    pub fn new(states: [StateVector; 2], labels: [String; 2]) -> Result<Self> {
        for s in &states {
            if s.n_qubits() != 1 {
                return Err(AdqcError::InvalidParameter(
                    "measurement basis states must be single-qubit".into(),
                ));
            }
            let dev = (s.norm() - 1.0).abs();
            if dev > ORTHONORMAL_TOL {
                return Err(AdqcError::NotNormalized { deviation: dev });
            }
        }
        let overlap = states[0].inner(&states[1]).norm();
        if overlap > ORTHONORMAL_TOL {
            return Err(AdqcError::InvalidParameter(format!(
                "measurement basis states are not orthogonal (|<b0|b1>| = {overlap:.3e})"
            )));
        }
        Ok(MeasurementBasis { states, labels })
    }

    /// The `{|+i>, |-i>}` basis.  This is the one that pairs symmetrically
    /// with the default preparation, so every branch comes out unitary.
    pub fn circular() -> Self {
        MeasurementBasis {
            states: [StateVector::plus_i(), StateVector::minus_i()],
            labels: ["+i".into(), "-i".into()],
        }
    }

    /// The `{|0>, |1>}` basis — deliberately misaligned with the coupling's
    /// back-action, useful as the counterexample configuration.
    pub fn computational() -> Self {
        MeasurementBasis {
            states: [
                StateVector::computational(1, 0),
                StateVector::computational(1, 1),
            ],
            labels: ["0".into(), "1".into()],
        }
    }

    pub fn states(&self) -> &[StateVector; 2] {
        &self.states
    }

    pub fn labels(&self) -> &[String; 2] {
        &self.labels
    }
}

/// Full description of one ancilla round: coupling flavor and strength, how
/// many register qubits take part, the ancilla preparation, and the
/// measurement basis.
#[derive(Debug, Clone, Serialize)]
pub struct ChannelSpec {
    flavor: InteractionFlavor,
    alpha: f64,
    register_qubits: usize,
    prep: StateVector,
    basis: MeasurementBasis,
}

impl ChannelSpec {
    /// A round touching a single register qubit, with the default `|+i>`
    /// preparation and circular measurement.
    pub fn single_qubit(flavor: InteractionFlavor, alpha: f64) -> Self {
        ChannelSpec {
            flavor,
            alpha,
            register_qubits: 1,
            prep: StateVector::plus_i(),
            basis: MeasurementBasis::circular(),
        }
    }

    /// A round where the same ancilla couples to two register qubits in
    /// sequence before being measured.
    pub fn two_qubit(flavor: InteractionFlavor, alpha: f64) -> Self {
        ChannelSpec {
            register_qubits: 2,
            ..ChannelSpec::single_qubit(flavor, alpha)
        }
    }

    pub fn with_prep(mut self, prep: StateVector) -> Result<Self> {
        if prep.n_qubits() != 1 {
            return Err(AdqcError::InvalidParameter(
                "ancilla preparation must be a single-qubit state".into(),
            ));
        }
        let dev = (prep.norm() - 1.0).abs();
        if dev > ORTHONORMAL_TOL {
            return Err(AdqcError::NotNormalized { deviation: dev });
        }
        self.prep = prep;
        Ok(self)
    }

    pub fn with_basis(mut self, basis: MeasurementBasis) -> Self {
        self.basis = basis;
        self
    }

    pub fn flavor(&self) -> InteractionFlavor {
        self.flavor
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn register_qubits(&self) -> usize {
        self.register_qubits
    }

    pub fn prep(&self) -> &StateVector {
        &self.prep
    }

    pub fn basis(&self) -> &MeasurementBasis {
        &self.basis
    }

    /// The full coupling unitary on ancilla + register, ancilla as the most
    /// significant factor.  For two register qubits the same ancilla is
    /// coupled to each in turn (first qubit first), giving an 8x8 operator.
    pub fn interaction_unitary(&self) -> Result<SquareOperator> {
        let e = self.flavor.matrix(self.alpha)?;
        match self.register_qubits {
            1 => Ok(e),
            2 => {
                let on_first = embed_pair(&e, 0, 1, 3);
                let on_second = embed_pair(&e, 0, 2, 3);
                Ok(on_second.mul(&on_first))
            }
            n => Err(AdqcError::InvalidParameter(format!(
                "a round may touch 1 or 2 register qubits, not {n}"
            ))),
        }
    }

    /// The two Kraus operators on the register, one per measurement outcome,
    /// with no unitarity requirement.  Completeness (`sum K^dag K = I`) is
    /// asserted internally since it holds for any preparation and basis.
    pub fn raw_branches(&self) -> Result<Vec<RawBranch>> {
        let u = self.interaction_unitary()?;
        let rdim = 1usize << self.register_qubits;
        let prep = self.prep.amplitudes();
        let mut out = Vec::with_capacity(2);
        let mut completeness = SquareOperator::zeros(rdim);
        for (m, label) in self.basis.states.iter().zip(self.basis.labels.iter()) {
            let meas = m.amplitudes();
            let k = SquareOperator::from_fn(rdim, |r, c| {
                let mut acc = Complex64::new(0.0, 0.0);
                for (ap, m_amp) in meas.iter().enumerate() {
                    for (a, p_amp) in prep.iter().enumerate() {
                        acc += m_amp.conj() * p_amp * u.entry(ap * rdim + r, a * rdim + c);
                    }
                }
                acc
            });
            let ktk = k.adjoint().mul(&k);
            let probability = ktk.trace().re / rdim as f64;
            let mut dev_op = ktk.clone();
            for i in 0..rdim {
                let d = dev_op.entry(i, i);
                dev_op.set(i, i, d - Complex64::new(probability, 0.0));
            }
            let unitarity_deviation = dev_op.max_abs();
            completeness = completeness.add(&ktk);
            out.push(RawBranch {
                outcome: label.clone(),
                kraus: k,
                probability,
                unitarity_deviation,
            });
        }
        let defect = completeness.max_abs_diff(&SquareOperator::identity(rdim));
        if defect > 1e-10 {
            return Err(AdqcError::Internal(format!(
                "Kraus completeness violated by {defect:.3e}"
            )));
        }
        Ok(out)
    }

    /// The branches of a round whose outcomes all herald unitaries: each
    /// Kraus operator is checked to be proportional to a unitary and returned
    /// together with that unitary (phase-fixed) and, for two-qubit rounds
    /// whose branch is Hadamards-times-diagonal, its entangling-phase
    /// decomposition.
    ///
    /// Fails with [`AdqcError::NonUnitaryBranch`] when the measurement basis
    /// is not symmetric with respect to the states the register back-acts
    /// onto — see [`ChannelSpec::back_action`] for the geometric test.
    pub fn kraus_branches(&self) -> Result<Vec<KrausBranch>> {
        let raw = self.raw_branches()?;
        let mut out = Vec::with_capacity(raw.len());
        for branch in raw {
            if branch.probability < 1e-12 {
                continue; // outcome never occurs; nothing lands on the register
            }
            if branch.unitarity_deviation > 1e-8 {
                return Err(AdqcError::NonUnitaryBranch {
                    outcome: branch.outcome,
                    deviation: branch.unitarity_deviation,
                });
            }
            let unitary = branch
                .kraus
                .scale(Complex64::new(1.0 / branch.probability.sqrt(), 0.0))
                .canonical_phase();
            let classification = if unitary.dim() == 4 {
                let h2 = hadamard().kron(&hadamard());
                let undressed = h2.mul(&unitary);
                if undressed.max_offdiag() <= 1e-8 {
                    Some(ising_decompose(&undressed)?)
                } else {
                    None
                }
            } else {
                None
            };
            out.push(KrausBranch {
                outcome: branch.outcome,
                kraus: branch.kraus,
                probability: branch.probability,
                unitary,
                classification,
            });
        }
        Ok(out)
    }

    /// The states the ancilla is steered into by each register basis state,
    /// and whether the measurement basis sees them all at equal overlap —
    /// the geometric criterion deciding unitarity of the branches.
    pub fn back_action(&self) -> Result<BackActionReport> {
        let u = self.interaction_unitary()?;
        let rdim = 1usize << self.register_qubits;
        let prep = self.prep.amplitudes();
        let mut induced = Vec::with_capacity(rdim);
        for r in 0..rdim {
            let mut amps = vec![Complex64::new(0.0, 0.0); 2];
            for (ap, amp_out) in amps.iter_mut().enumerate() {
                for (a, p_amp) in prep.iter().enumerate() {
                    *amp_out += u.entry(ap * rdim + r, a * rdim + r) * p_amp;
                }
            }
            let state = StateVector::from_unnormalized(1, amps)?;
            induced.push(state);
        }
        let mut basis_overlaps = Vec::with_capacity(2);
        let mut symmetric = true;
        for m in &self.basis.states {
            let overlaps: Vec<f64> = induced.iter().map(|v| m.inner(v).norm()).collect();
            let lo = overlaps.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = overlaps.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            if hi - lo > 1e-10 {
                symmetric = false;
            }
            basis_overlaps.push(overlaps);
        }
        let planes_perpendicular = if rdim == 4 {
            Some(two_qubit_planes_perpendicular(&induced)?)
        } else {
            None
        };
        Ok(BackActionReport {
            induced_states: induced,
            basis_overlaps,
            symmetric,
            planes_perpendicular,
        })
    }
}

/// The family member whose controlled part is an `n`-th root of Z: the full
/// flavor at strength `pi/(4n)`.  Its rare branch fires with probability
/// `sin^2(pi/4n)`.
pub fn generalized_family(n: u32) -> Result<ChannelSpec> {
    if n == 0 {
        return Err(AdqcError::InvalidParameter(
            "root index for the generalized family must be at least 1".into(),
        ));
    }
    Ok(ChannelSpec::single_qubit(
        InteractionFlavor::Full,
        std::f64::consts::PI / (4.0 * n as f64),
    ))
}

/// A Kraus operator as extracted, before any unitarity judgement.
#[derive(Debug, Clone, Serialize)]
pub struct RawBranch {
    pub outcome: String,
    pub kraus: SquareOperator,
    pub probability: f64,
    /// `max |K^dag K - p I|`; zero exactly when the branch heralds a unitary.
    pub unitarity_deviation: f64,
}

/// A measurement outcome together with the unitary it lands on the register.
#[derive(Debug, Clone, Serialize)]
pub struct KrausBranch {
    pub outcome: String,
    pub kraus: SquareOperator,
    pub probability: f64,
    /// `K / sqrt(p)` with the overall phase fixed canonically.
    pub unitary: SquareOperator,
    /// For two-qubit rounds of the Hadamard-dressed flavors: the branch with
    /// its `H (x) H` stripped is diagonal, and this is its phase content.
    pub classification: Option<IsingDecomposition>,
}

/// Where the register steers the ancilla, and whether the measurement basis
/// is blind to that steering.
#[derive(Debug, Clone, Serialize)]
pub struct BackActionReport {
    /// Normalized ancilla state induced by each register basis state.
    pub induced_states: Vec<StateVector>,
    /// `basis_overlaps[m][r] = |<basis_m | induced_r>|`.
    pub basis_overlaps: Vec<Vec<f64>>,
    /// True when every outcome sees all induced states at equal overlap,
    /// i.e. when all Kraus branches are proportional to unitaries.
    pub symmetric: bool,
    /// Two-qubit rounds only: whether the two Bloch-sphere displacement
    /// directions (first register qubit flipping, second register qubit
    /// flipping) are perpendicular.  Perpendicularity is what lets a single
    /// basis be symmetric for both at once.
    pub planes_perpendicular: Option<bool>,
}

fn two_qubit_planes_perpendicular(induced: &[StateVector]) -> Result<bool> {
    let bloch: Vec<[f64; 3]> = induced
        .iter()
        .map(StateVector::bloch)
        .collect::<Result<_>>()?;
    // displacement when the first register qubit flips, averaged over the
    // second one's value (they agree for product-form couplings), and vice
    // versa; indices are r = 2j + k
    let mut n1 = [0.0f64; 3];
    let mut n2 = [0.0f64; 3];
    for i in 0..3 {
        n1[i] = (bloch[0][i] - bloch[2][i] + bloch[1][i] - bloch[3][i]) / 2.0;
        n2[i] = (bloch[0][i] - bloch[1][i] + bloch[2][i] - bloch[3][i]) / 2.0;
    }
    let norm1 = n1.iter().map(|x| x * x).sum::<f64>().sqrt();
    let norm2 = n2.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm1 < 1e-9 || norm2 < 1e-9 {
        // one of the displacements vanishes: no plane to speak of
        return Ok(false);
    }
    let dot: f64 = (0..3).map(|i| n1[i] * n2[i]).sum::<f64>() / (norm1 * norm2);
    Ok(dot.abs() <= 1e-8)
}

/// Embed a 4x4 operator onto factors `qa` (more significant side of the op)
/// and `qb` of an `n_qubits` register, identity elsewhere.
pub(crate) fn embed_pair(
    op: &SquareOperator,
    qa: usize,
    qb: usize,
    n_qubits: usize,
) -> SquareOperator {
    assert_eq!(op.dim(), 4);
    assert!(qa < n_qubits && qb < n_qubits && qa != qb);
    let dim = 1usize << n_qubits;
    let pos_a = n_qubits - 1 - qa;
    let pos_b = n_qubits - 1 - qb;
    let mask = (1usize << pos_a) | (1usize << pos_b);
    SquareOperator::from_fn(dim, |r, c| {
        if r & !mask != c & !mask {
            return Complex64::new(0.0, 0.0);
        }
        let sub = |i: usize| ((i >> pos_a) & 1) * 2 + ((i >> pos_b) & 1);
        op.entry(sub(r), sub(c))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::gates::{pauli_x, pauli_z, zroot};
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, FRAC_PI_8, PI};

    fn approx(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    #[test]
    fn full_flavor_single_qubit_branches() {
        let spec = ChannelSpec::single_qubit(InteractionFlavor::Full, FRAC_PI_8);
        let branches = spec.kraus_branches().unwrap();
        assert_eq!(branches.len(), 2);
        assert_eq!(branches[0].outcome, "+i");
        assert_eq!(branches[1].outcome, "-i");
        approx(branches[0].probability, 0.14644660940672624, 1e-12);
        approx(branches[1].probability, 0.85355339059327373, 1e-12);
        approx(branches[0].probability + branches[1].probability, 1.0, 1e-12);

        let h_t = hadamard().mul(&zroot(4).unwrap());
        let xh_t = pauli_x().mul(&h_t);
        assert!(branches[0].unitary.approx_eq_up_to_phase(&xh_t, 1e-10));
        assert!(branches[1].unitary.approx_eq_up_to_phase(&h_t, 1e-10));
        assert!(branches[0].classification.is_none());
    }

    #[test]
    fn controlled_only_branches_are_phase_projections() {
        let spec = ChannelSpec::single_qubit(InteractionFlavor::ControlledOnly, FRAC_PI_8);
        let branches = spec.kraus_branches().unwrap();
        let half = Complex64::new(0.5, 0.0);
        let plus = SquareOperator::identity(2).add(&zroot(2).unwrap()).scale(half);
        let minus = SquareOperator::identity(2).sub(&zroot(2).unwrap()).scale(half);
        assert!(branches[0].kraus.max_abs_diff(&plus) <= 1e-12);
        assert!(branches[1].kraus.max_abs_diff(&minus) <= 1e-12);
        // both branches herald pure phase gates
        assert!(branches[0].unitary.approx_eq_up_to_phase(&zroot(4).unwrap(), 1e-10));
        let z_zroot = pauli_z().mul(&zroot(4).unwrap());
        assert!(branches[1].unitary.approx_eq_up_to_phase(&z_zroot, 1e-10));
    }

    #[test]
    fn symmetric_flavor_single_qubit_branches() {
        let spec = ChannelSpec::single_qubit(InteractionFlavor::Symmetric, FRAC_PI_8);
        let branches = spec.kraus_branches().unwrap();
        approx(branches[0].probability, 0.14644660940672624, 1e-12);
        approx(branches[1].probability, 0.85355339059327373, 1e-12);
        let hz = hadamard().mul(&pauli_z());
        assert!(branches[0].unitary.approx_eq_up_to_phase(&hz, 1e-10));
        assert!(branches[1].unitary.approx_eq_up_to_phase(&hadamard(), 1e-10));
    }

    #[test]
    fn computational_measurement_breaks_unitarity() {
        let spec = ChannelSpec::single_qubit(InteractionFlavor::Full, FRAC_PI_8)
            .with_basis(MeasurementBasis::computational());
        let raw = spec.raw_branches().unwrap();
        approx(raw[0].unitarity_deviation, 0.35355339059327362, 1e-10);
        approx(raw[1].unitarity_deviation, 0.35355339059327362, 1e-10);
        match spec.kraus_branches() {
            Err(AdqcError::NonUnitaryBranch { deviation, .. }) => {
                approx(deviation, 0.35355339059327362, 1e-10)
            }
            other => panic!("expected a non-unitary branch, got {other:?}"),
        }
        let report = spec.back_action().unwrap();
        assert!(!report.symmetric);
        approx(report.basis_overlaps[0][0], 0.92387953251128674, 1e-10);
        approx(report.basis_overlaps[0][1], 0.38268343236508978, 1e-10);
    }

    #[test]
    fn circular_measurement_is_symmetric_for_back_action() {
        let spec = ChannelSpec::single_qubit(InteractionFlavor::Full, FRAC_PI_8);
        let report = spec.back_action().unwrap();
        assert!(report.symmetric);
        assert!(report.planes_perpendicular.is_none());
        // each outcome sees both induced states at one fixed overlap
        for &o in &report.basis_overlaps[0] {
            approx(o, 0.38268343236508973, 1e-10);
        }
        for &o in &report.basis_overlaps[1] {
            approx(o, 0.92387953251128674, 1e-10);
        }
    }

    #[test]
    fn rare_branch_probability_tracks_the_root_index() {
        for n in [1u32, 2, 3, 8, 64] {
            let spec = generalized_family(n).unwrap();
            let branches = spec.kraus_branches().unwrap();
            let expected = (PI / (4.0 * n as f64)).sin().powi(2);
            approx(branches[0].probability, expected, 1e-12);
            approx(branches[1].probability, 1.0 - expected, 1e-12);
        }
        assert!(generalized_family(0).is_err());
    }

    #[test]
    fn two_qubit_symmetric_branches_carry_clean_phase_content() {
        let spec = ChannelSpec::two_qubit(InteractionFlavor::Symmetric, FRAC_PI_8);
        let branches = spec.kraus_branches().unwrap();
        approx(branches[0].probability, 0.75, 1e-12);
        approx(branches[1].probability, 0.25, 1e-12);

        let plus = branches[0].classification.unwrap();
        approx(plus.z1, 0.0, 1e-12);
        approx(plus.z2, 0.0, 1e-12);
        approx(plus.beta, 0.16991845472706091, 1e-12);

        let minus = branches[1].classification.unwrap();
        approx(minus.z1, 0.0, 1e-12);
        approx(minus.z2, FRAC_PI_2, 1e-12);
        approx(minus.beta, -FRAC_PI_4, 1e-12);
    }

    #[test]
    fn two_qubit_full_branches_carry_clean_phase_content() {
        let spec = ChannelSpec::two_qubit(InteractionFlavor::Full, FRAC_PI_8);
        let branches = spec.kraus_branches().unwrap();
        approx(branches[0].probability, 0.75, 1e-12);
        approx(branches[1].probability, 0.25, 1e-12);

        let plus = branches[0].classification.unwrap();
        approx(plus.z1, -FRAC_PI_8, 1e-12);
        approx(plus.z2, -FRAC_PI_8, 1e-12);
        approx(plus.beta, 0.16991845472706091, 1e-12);

        let minus = branches[1].classification.unwrap();
        approx(minus.z1, -FRAC_PI_8, 1e-12);
        approx(minus.z2, 3.0 * FRAC_PI_8, 1e-12);
        approx(minus.beta, -FRAC_PI_4, 1e-12);
    }

    #[test]
    fn two_qubit_branch_probabilities_follow_the_strength() {
        for alpha in [PI / 6.0, PI / 10.0] {
            let spec = ChannelSpec::two_qubit(InteractionFlavor::Symmetric, alpha);
            let branches = spec.kraus_branches().unwrap();
            let p_minus = (2.0 * alpha).sin().powi(2) / 2.0;
            approx(branches[0].probability, 1.0 - p_minus, 1e-12);
            approx(branches[1].probability, p_minus, 1e-12);
            let predicted = (1.0 / (2.0 * alpha).cos()).atan() - FRAC_PI_4;
            approx(branches[0].classification.unwrap().beta, predicted, 1e-12);
            approx(branches[1].classification.unwrap().beta, -FRAC_PI_4, 1e-12);
        }
    }

    #[test]
    fn two_qubit_controlled_only_is_not_unitary_branchwise() {
        let spec = ChannelSpec::two_qubit(InteractionFlavor::ControlledOnly, FRAC_PI_8);
        let raw = spec.raw_branches().unwrap();
        approx(raw[0].unitarity_deviation, 0.25, 1e-10);
        assert!(matches!(
            spec.kraus_branches(),
            Err(AdqcError::NonUnitaryBranch { .. })
        ));
        let report = spec.back_action().unwrap();
        assert_eq!(report.planes_perpendicular, Some(false));

        let full = ChannelSpec::two_qubit(InteractionFlavor::Full, FRAC_PI_8);
        assert_eq!(full.back_action().unwrap().planes_perpendicular, Some(true));
    }

    #[test]
    fn special_strength_pins_the_rare_increment_to_an_eighth_turn() {
        let alpha_star = 0.5 * (2.0f64.sqrt() - 1.0).acos();
        let spec = ChannelSpec::two_qubit(InteractionFlavor::Symmetric, alpha_star);
        let branches = spec.kraus_branches().unwrap();
        approx(branches[0].probability, 2.0 - 2.0f64.sqrt(), 1e-12);
        approx(branches[0].classification.unwrap().beta, FRAC_PI_8, 1e-12);
        approx(branches[1].classification.unwrap().beta, -FRAC_PI_4, 1e-12);
    }

    #[test]
    fn custom_prep_and_basis_are_validated() {
        let spec = ChannelSpec::single_qubit(InteractionFlavor::Full, FRAC_PI_8);
        assert!(spec
            .clone()
            .with_prep(StateVector::computational(2, 0))
            .is_err());
        let unnormalized = StateVector::from_unnormalized(
            1,
            vec![Complex64::new(3.0, 0.0), Complex64::new(4.0, 0.0)],
        )
        .unwrap();
        // from_unnormalized normalizes, so this one is fine
        assert!(spec.clone().with_prep(unnormalized).is_ok());
        assert!(MeasurementBasis::new(
            [StateVector::plus_i(), StateVector::plus_i()],
            ["a".into(), "b".into()],
        )
        .is_err());
    }
}
