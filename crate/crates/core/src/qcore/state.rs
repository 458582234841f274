//! Statevectors over a small number of qubits.
//!
//! Tensor ordering is fixed once for the whole crate: **factor 0 is the most
//! significant bit of the amplitude index**. The ancilla always sits at
//! factor 0, register qubits follow in index order. So for a two-factor
//! state, amplitude `0b10` is "first factor 1, second factor 0".

use num_complex::Complex64;
use serde::de::Error as _;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{AdqcError, Result};
use crate::qcore::operator::SquareOperator;

const NORM_TOL: f64 = 1e-12;

/// A normalised pure state on `n_qubits` qubits.
#[derive(Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// Builds a state from amplitudes, insisting on normalisation within
    /// 1e-12.
    pub fn new(n_qubits: usize, amps: Vec<Complex64>) -> Result<Self> {
        if amps.len() != 1 << n_qubits {
            return Err(AdqcError::DimensionMismatch {
                expected: 1 << n_qubits,
                found: amps.len(),
            });
        }
        let norm_sqr: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sqr - 1.0).abs() > NORM_TOL {
            return Err(AdqcError::NotNormalized {
                deviation: (norm_sqr - 1.0).abs(),
            });
        }
        Ok(Self { n_qubits, amps })
    }

    /// Builds a state from unnormalised amplitudes by rescaling.
    pub fn from_unnormalized(n_qubits: usize, amps: Vec<Complex64>) -> Result<Self> {
        let norm_sqr: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if norm_sqr < 1e-24 {
            return Err(AdqcError::NotNormalized { deviation: 1.0 });
        }
        let scale = norm_sqr.sqrt().recip();
        let amps = amps.into_iter().map(|a| a * scale).collect();
        Self::new(n_qubits, amps)
    }

    /// Computational basis state `|index>`.
    pub fn computational(n_qubits: usize, index: usize) -> Self {
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amps[index] = Complex64::new(1.0, 0.0);
        Self { n_qubits, amps }
    }

    /// The circular states (|0> ± i|1>)/sqrt(2); the scheme prepares and
    /// measures its ancilla in these.
    pub fn plus_i() -> Self {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            n_qubits: 1,
            amps: vec![Complex64::new(r, 0.0), Complex64::new(0.0, r)],
        }
    }

    pub fn minus_i() -> Self {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        Self {
            n_qubits: 1,
            amps: vec![Complex64::new(r, 0.0), Complex64::new(0.0, -r)],
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `<self|rhs>`.
    pub fn inner(&self, rhs: &Self) -> Complex64 {
        assert_eq!(self.n_qubits, rhs.n_qubits, "inner product needs equal sizes");
        self.amps
            .iter()
            .zip(&rhs.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// `self (x) rhs`, with `self` as the more significant factor group.
    pub fn tensor(&self, rhs: &Self) -> Self {
        let mut amps = Vec::with_capacity(self.amps.len() * rhs.amps.len());
        for a in &self.amps {
            for b in &rhs.amps {
                amps.push(a * b);
            }
        }
        Self {
            n_qubits: self.n_qubits + rhs.n_qubits,
            amps,
        }
    }

    fn bit_position(&self, qubit: usize) -> usize {
        self.n_qubits - 1 - qubit
    }

    /// Applies a `2^k`-dimensional operator to the listed qubits, in the
    /// order given: `qubits[0]` is the operator's most significant factor.
    pub fn apply(&self, op: &SquareOperator, qubits: &[usize]) -> Result<Self> {
        let k = qubits.len();
        if op.dim() != 1 << k {
            return Err(AdqcError::DimensionMismatch {
                expected: 1 << k,
                found: op.dim(),
            });
        }
        for (i, &q) in qubits.iter().enumerate() {
            if q >= self.n_qubits {
                return Err(AdqcError::InvalidParameter(format!(
                    "qubit index {q} out of range for {} qubits",
                    self.n_qubits
                )));
            }
            if qubits[..i].contains(&q) {
                return Err(AdqcError::InvalidParameter(format!(
                    "qubit index {q} repeated in apply"
                )));
            }
        }

        let positions: Vec<usize> = qubits.iter().map(|&q| self.bit_position(q)).collect();
        let target_mask: usize = positions.iter().map(|&p| 1usize << p).sum();
        let dim = self.amps.len();
        let block = 1usize << k;
        let mut out = vec![Complex64::new(0.0, 0.0); dim];
        let mut gathered = vec![Complex64::new(0.0, 0.0); block];
        let mut indices = vec![0usize; block];

        for base in 0..dim {
            if base & target_mask != 0 {
                continue;
            }
            for sub in 0..block {
                // operator factor j (0 = most significant) maps to qubits[j]
                let mut idx = base;
                for (j, &pos) in positions.iter().enumerate() {
                    if sub >> (k - 1 - j) & 1 == 1 {
                        idx |= 1 << pos;
                    }
                }
                indices[sub] = idx;
                gathered[sub] = self.amps[idx];
            }
            for (r, &idx) in indices.iter().enumerate() {
                let mut acc = Complex64::new(0.0, 0.0);
                for (c, &amp) in gathered.iter().enumerate() {
                    acc += op.entry(r, c) * amp;
                }
                out[idx] = acc;
            }
        }
        Ok(Self {
            n_qubits: self.n_qubits,
            amps: out,
        })
    }

    /// Contracts one qubit against a single-qubit state: returns the squared
    /// norm of `(<onto| at qubit) |self>` — the Born probability of that
    /// outcome — together with the normalised residual state on the
    /// remaining qubits (or `None` when the probability vanishes).
    pub fn contract_qubit(
        &self,
        qubit: usize,
        onto: &StateVector,
    ) -> Result<(f64, Option<StateVector>)> {
        if onto.n_qubits != 1 {
            return Err(AdqcError::DimensionMismatch {
                expected: 2,
                found: onto.amps.len(),
            });
        }
        if qubit >= self.n_qubits || self.n_qubits == 1 {
            return Err(AdqcError::InvalidParameter(format!(
                "cannot contract qubit {qubit} of a {}-qubit state",
                self.n_qubits
            )));
        }
        let pos = self.bit_position(qubit);
        let low_mask = (1usize << pos) - 1;
        let rest_dim = self.amps.len() / 2;
        let mut rest = Vec::with_capacity(rest_dim);
        for j in 0..rest_dim {
            let spread = (j & !low_mask) << 1 | (j & low_mask);
            let a0 = self.amps[spread];
            let a1 = self.amps[spread | 1 << pos];
            rest.push(onto.amps[0].conj() * a0 + onto.amps[1].conj() * a1);
        }
        let prob: f64 = rest.iter().map(|a| a.norm_sqr()).sum();
        if prob < 1e-24 {
            return Ok((prob, None));
        }
        let scale = prob.sqrt().recip();
        let state = StateVector::new(
            self.n_qubits - 1,
            rest.into_iter().map(|a| a * scale).collect(),
        )?;
        Ok((prob, Some(state)))
    }

    /// Reduced density matrix of one qubit (partial trace over the rest).
    pub fn reduced_density(&self, qubit: usize) -> Result<SquareOperator> {
        if qubit >= self.n_qubits {
            return Err(AdqcError::InvalidParameter(format!(
                "qubit index {qubit} out of range"
            )));
        }
        let pos = self.bit_position(qubit);
        let low_mask = (1usize << pos) - 1;
        let mut rho = SquareOperator::zeros(2);
        if self.n_qubits == 1 {
            for r in 0..2 {
                for c in 0..2 {
                    rho.set(r, c, self.amps[r] * self.amps[c].conj());
                }
            }
            return Ok(rho);
        }
        let rest_dim = self.amps.len() / 2;
        for j in 0..rest_dim {
            let spread = (j & !low_mask) << 1 | (j & low_mask);
            let a = [self.amps[spread], self.amps[spread | 1 << pos]];
            for r in 0..2 {
                for c in 0..2 {
                    let v = rho.entry(r, c) + a[r] * a[c].conj();
                    rho.set(r, c, v);
                }
            }
        }
        Ok(rho)
    }

    /// Purity `Tr(rho^2)` of one qubit's reduced state; 1 for a product
    /// factor, 1/2 for a maximally entangled one.
    pub fn purity_of(&self, qubit: usize) -> Result<f64> {
        let rho = self.reduced_density(qubit)?;
        let rho2 = rho.mul(&rho);
        Ok(rho2.trace().re)
    }

    /// Bloch vector (<sx>, <sy>, <sz>) of a single-qubit state.
    pub fn bloch(&self) -> Result<[f64; 3]> {
        if self.n_qubits != 1 {
            return Err(AdqcError::DimensionMismatch {
                expected: 2,
                found: self.amps.len(),
            });
        }
        let cross = self.amps[0].conj() * self.amps[1];
        Ok([
            2.0 * cross.re,
            2.0 * cross.im,
            self.amps[0].norm_sqr() - self.amps[1].norm_sqr(),
        ])
    }
}

impl std::fmt::Debug for StateVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "StateVector({} qubits) [", self.n_qubits)?;
        for a in &self.amps {
            write!(f, " {:+.4}{:+.4}i", a.re, a.im)?;
        }
        write!(f, " ]")
    }
}

// JSON shape: {"n_qubits": n, "amplitudes": [[re, im], ...]}.

impl Serialize for StateVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("StateVector", 2)?;
        st.serialize_field("n_qubits", &self.n_qubits)?;
        let pairs: Vec<[f64; 2]> = self.amps.iter().map(|z| [z.re, z.im]).collect();
        st.serialize_field("amplitudes", &pairs)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for StateVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            n_qubits: usize,
            amplitudes: Vec<[f64; 2]>,
        }
        let raw = Raw::deserialize(deserializer)?;
        let amps = raw
            .amplitudes
            .into_iter()
            .map(|[re, im]| Complex64::new(re, im))
            .collect();
        StateVector::new(raw.n_qubits, amps).map_err(D::Error::custom)
    }
}
