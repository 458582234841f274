//! Dense complex square matrices sized for gate work (2x2 to 8x8).
//!
//! Everything here is plain row-major `Vec<Complex64>` arithmetic. At these
//! dimensions a hand-rolled kernel beats pulling in a linear-algebra stack,
//! and keeping the representation dumb makes the phase conventions easy to
//! audit entry by entry.

use num_complex::Complex64;
use serde::de::Error as _;
use serde::ser::SerializeStruct;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{AdqcError, Result};

/// A square complex matrix with its dimension carried alongside the data.
///
/// Indexing is row-major: entry `(r, c)` lives at `r * dim + c`. Operators
/// are immutable in practice — every method returns a fresh value — so they
/// are cheap to share between threads.
#[derive(Clone, PartialEq)]
pub struct SquareOperator {
    dim: usize,
    entries: Vec<Complex64>,
}

impl SquareOperator {
    /// Builds an operator from a row-major entry list.
    pub fn from_entries(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(AdqcError::DimensionMismatch {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(AdqcError::InvalidParameter(
                "operator entries must be finite".into(),
            ));
        }
        Ok(Self { dim, entries })
    }

    /// Builds an operator by evaluating `f(row, col)` over all entries.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut entries = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                entries.push(f(r, c));
            }
        }
        Self { dim, entries }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |r, c| {
            if r == c {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    /// Diagonal matrix from the given entries.
    pub fn diagonal(diag: &[Complex64]) -> Self {
        let dim = diag.len();
        Self::from_fn(dim, |r, c| {
            if r == c {
                diag[r]
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, r: usize, c: usize) -> Complex64 {
        self.entries[r * self.dim + c]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn set(&mut self, r: usize, c: usize, value: Complex64) {
        self.entries[r * self.dim + c] = value;
    }

    /// Matrix product `self * rhs`. Panics on dimension mismatch; the typed
    /// error path is reserved for user-facing operations.
    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "operator product needs equal dimensions");
        let d = self.dim;
        let mut out = Self::zeros(d);
        for r in 0..d {
            for k in 0..d {
                let a = self.entries[r * d + k];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for c in 0..d {
                    out.entries[r * d + c] += a * rhs.entries[k * d + c];
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "operator sum needs equal dimensions");
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| a + b)
            .collect();
        Self {
            dim: self.dim,
            entries,
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "operator difference needs equal dimensions");
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| a - b)
            .collect();
        Self {
            dim: self.dim,
            entries,
        }
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            dim: self.dim,
            entries: self.entries.iter().map(|z| z * factor).collect(),
        }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |r, c| self.entry(c, r).conj())
    }

    /// Kronecker product; `self` is the more significant factor.
    pub fn kron(&self, rhs: &Self) -> Self {
        let (da, db) = (self.dim, rhs.dim);
        Self::from_fn(da * db, |r, c| {
            self.entry(r / db, c / db) * rhs.entry(r % db, c % db)
        })
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.entry(i, i)).sum()
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise difference `max |self - rhs|`.
    pub fn max_abs_diff(&self, rhs: &Self) -> f64 {
        assert_eq!(self.dim, rhs.dim, "comparison needs equal dimensions");
        self.entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `max |U†U - I|`, the unitarity defect.
    pub fn unitarity_defect(&self) -> f64 {
        self.adjoint()
            .mul(self)
            .max_abs_diff(&Self::identity(self.dim))
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() <= tol
    }

    /// Largest off-diagonal magnitude.
    pub fn max_offdiag(&self) -> f64 {
        let mut worst = 0.0f64;
        for r in 0..self.dim {
            for c in 0..self.dim {
                if r != c {
                    worst = worst.max(self.entry(r, c).norm());
                }
            }
        }
        worst
    }

    /// Inverse by Gauss-Jordan elimination with partial pivoting. Only ever
    /// called on well-conditioned (near-unitary) matrices.
    pub fn inverse(&self) -> Result<Self> {
        let d = self.dim;
        let mut a = self.entries.clone();
        let mut inv = Self::identity(d).entries;
        for col in 0..d {
            let pivot_row = (col..d)
                .max_by(|&i, &j| {
                    a[i * d + col]
                        .norm()
                        .partial_cmp(&a[j * d + col].norm())
                        .unwrap()
                })
                .unwrap();
            if a[pivot_row * d + col].norm() < 1e-14 {
                return Err(AdqcError::Internal(
                    "singular matrix passed to inverse".into(),
                ));
            }
            if pivot_row != col {
                for k in 0..d {
                    a.swap(pivot_row * d + k, col * d + k);
                    inv.swap(pivot_row * d + k, col * d + k);
                }
            }
            let pivot = a[col * d + col];
            for k in 0..d {
                a[col * d + k] /= pivot;
                inv[col * d + k] /= pivot;
            }
            for r in 0..d {
                if r == col {
                    continue;
                }
                let factor = a[r * d + col];
                if factor.norm_sqr() == 0.0 {
                    continue;
                }
                for k in 0..d {
                    let s = a[col * d + k];
                    a[r * d + k] -= factor * s;
                    let s = inv[col * d + k];
                    inv[r * d + k] -= factor * s;
                }
            }
        }
        Ok(Self { dim: d, entries: inv })
    }

    /// Unitary factor of the polar decomposition, via the Newton iteration
    /// `X <- (X + (X†)^-1) / 2`. Used to project long products back onto the
    /// unitary group; on nearly-unitary input it converges in two or three
    /// iterations.
    pub fn polar_unitary(&self) -> Result<Self> {
        let mut x = self.clone();
        for _ in 0..40 {
            if x.unitarity_defect() <= 1e-15 {
                break;
            }
            let correction = x.adjoint().inverse()?;
            x = x.add(&correction).scale(Complex64::new(0.5, 0.0));
        }
        Ok(x)
    }

    /// Removes the global phase by making the largest-magnitude entry real
    /// and positive (first such entry in row-major order on ties). Two
    /// operators equal up to phase canonicalise to the same matrix.
    pub fn canonical_phase(&self) -> Self {
        let mut best = 0usize;
        let mut best_norm = 0.0f64;
        for (i, z) in self.entries.iter().enumerate() {
            let n = z.norm();
            if n > best_norm + 1e-12 {
                best_norm = n;
                best = i;
            }
        }
        if best_norm == 0.0 {
            return self.clone();
        }
        let phase = self.entries[best] / best_norm;
        self.scale(phase.conj())
    }

    /// True when `self` and `rhs` agree entrywise after phase
    /// canonicalisation.
    pub fn approx_eq_up_to_phase(&self, rhs: &Self, tol: f64) -> bool {
        self.dim == rhs.dim
            && self
                .canonical_phase()
                .max_abs_diff(&rhs.canonical_phase())
                <= tol
    }
}

impl std::fmt::Debug for SquareOperator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "SquareOperator (dim {})", self.dim)?;
        for r in 0..self.dim {
            write!(f, "  [")?;
            for c in 0..self.dim {
                let z = self.entry(r, c);
                write!(f, " {:+.4}{:+.4}i", z.re, z.im)?;
            }
            writeln!(f, " ]")?;
        }
        Ok(())
    }
}

// JSON shape: {"dim": d, "entries": [[re, im], ...]} in row-major order.

impl Serialize for SquareOperator {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("SquareOperator", 2)?;
        st.serialize_field("dim", &self.dim)?;
        let pairs: Vec<[f64; 2]> = self.entries.iter().map(|z| [z.re, z.im]).collect();
        st.serialize_field("entries", &pairs)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for SquareOperator {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            dim: usize,
            entries: Vec<[f64; 2]>,
        }
        let raw = Raw::deserialize(deserializer)?;
        let entries = raw
            .entries
            .into_iter()
            .map(|[re, im]| Complex64::new(re, im))
            .collect();
        SquareOperator::from_entries(raw.dim, entries).map_err(D::Error::custom)
    }
}
