//! Gate constructors under one fixed set of phase conventions.
//!
//! The conventions every other module leans on:
//!
//! * roots of Z are phase-symmetric: `Zroot(n) = diag(e^{-i pi/2n}, e^{+i pi/2n})`,
//!   so `Zroot(n)` has a real trace and `Zroot(n)^n ∝ Z`;
//! * `Rz(theta) = diag(e^{-i theta/2}, e^{+i theta/2})`;
//! * `Ising(alpha) = e^{i alpha sz⊗sz}`, diagonal `(e^{ia}, e^{-ia}, e^{-ia}, e^{ia})`;
//! * the fixed ancilla-register interaction is
//!   `E(alpha) = (H⊗H) · CRz(4 alpha)`, whose controlled part applies
//!   `diag(e^{-2i alpha}, e^{+2i alpha})` to the register when the ancilla
//!   (the left factor) is `|1>`. At `alpha = pi/8` the controlled part is
//!   exactly controlled-`Zroot(2)`.
//!
//! Changing any of these silently breaks closed-form identities asserted all
//! over the test suite; treat them as frozen.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{AdqcError, Result};
use crate::qcore::operator::SquareOperator;

fn polar(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta)
}

pub fn pauli_i() -> SquareOperator {
    SquareOperator::identity(2)
}

pub fn pauli_x() -> SquareOperator {
    SquareOperator::from_fn(2, |r, c| {
        if r != c {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

pub fn pauli_y() -> SquareOperator {
    let mut m = SquareOperator::zeros(2);
    m.set(0, 1, Complex64::new(0.0, -1.0));
    m.set(1, 0, Complex64::new(0.0, 1.0));
    m
}

pub fn pauli_z() -> SquareOperator {
    SquareOperator::diagonal(&[Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)])
}

pub fn hadamard() -> SquareOperator {
    let r = Complex64::new(FRAC_1_SQRT_2, 0.0);
    SquareOperator::from_entries(2, vec![r, r, r, -r]).unwrap()
}

/// `Z^{1/n}` in the symmetric-phase convention `diag(e^{-i pi/2n}, e^{+i pi/2n})`.
pub fn zroot(n: u32) -> Result<SquareOperator> {
    if n == 0 {
        return Err(AdqcError::InvalidParameter("Zroot index must be >= 1".into()));
    }
    let half = PI / (2.0 * f64::from(n));
    Ok(SquareOperator::diagonal(&[polar(-half), polar(half)]))
}

/// `Rz(theta) = diag(e^{-i theta/2}, e^{+i theta/2})`.
pub fn rz(theta: f64) -> Result<SquareOperator> {
    finite(theta)?;
    Ok(SquareOperator::diagonal(&[polar(-theta / 2.0), polar(theta / 2.0)]))
}

/// `e^{i alpha sz⊗sz}`.
pub fn ising(alpha: f64) -> Result<SquareOperator> {
    finite(alpha)?;
    Ok(SquareOperator::diagonal(&[
        polar(alpha),
        polar(-alpha),
        polar(-alpha),
        polar(alpha),
    ]))
}

/// `diag(1, 1, 1, e^{i alpha})`; `CPhase(pi)` is CZ.
pub fn cphase(alpha: f64) -> Result<SquareOperator> {
    finite(alpha)?;
    Ok(SquareOperator::diagonal(&[
        Complex64::new(1.0, 0.0),
        Complex64::new(1.0, 0.0),
        Complex64::new(1.0, 0.0),
        polar(alpha),
    ]))
}

/// Controlled z-rotation: applies `Rz(theta)` to the right factor when the
/// left factor is `|1>`.
pub fn controlled_rz(theta: f64) -> Result<SquareOperator> {
    finite(theta)?;
    Ok(SquareOperator::diagonal(&[
        Complex64::new(1.0, 0.0),
        Complex64::new(1.0, 0.0),
        polar(-theta / 2.0),
        polar(theta / 2.0),
    ]))
}

/// The fixed interaction `E(alpha) = (H⊗H) · CRz(4 alpha)` between ancilla
/// (left factor) and one register qubit (right factor).
pub fn interaction(alpha: f64) -> Result<SquareOperator> {
    let hh = hadamard().kron(&hadamard());
    Ok(hh.mul(&controlled_rz(4.0 * alpha)?))
}

/// The symmetric variant `(H⊗H) · e^{i alpha sz⊗sz}`, which differs from
/// `E(alpha)` by a register-local z-rotation only.
pub fn interaction_symmetric(alpha: f64) -> Result<SquareOperator> {
    let hh = hadamard().kron(&hadamard());
    Ok(hh.mul(&ising(alpha)?))
}

fn finite(x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(AdqcError::InvalidParameter("gate angle must be finite".into()))
    }
}

/// Gate identifiers accepted by [`make_gate`] and by the command line.
#[derive(Debug, Clone, PartialEq)]
pub enum Gate {
    I,
    X,
    Y,
    Z,
    H,
    /// `Z^{1/n}`; `Zroot(2)` is S-like, `Zroot(4)` is T-like under the
    /// symmetric phase convention.
    Zroot(u32),
    Rz(f64),
    Ising(f64),
    CPhase(f64),
    /// The fixed interaction `E(alpha)`.
    Interaction(f64),
}

/// Builds the matrix for a gate identifier.
pub fn make_gate(gate: &Gate) -> Result<SquareOperator> {
    match gate {
        Gate::I => Ok(pauli_i()),
        Gate::X => Ok(pauli_x()),
        Gate::Y => Ok(pauli_y()),
        Gate::Z => Ok(pauli_z()),
        Gate::H => Ok(hadamard()),
        Gate::Zroot(n) => zroot(*n),
        Gate::Rz(theta) => rz(*theta),
        Gate::Ising(alpha) => ising(*alpha),
        Gate::CPhase(alpha) => cphase(*alpha),
        Gate::Interaction(alpha) => interaction(*alpha),
    }
}

impl Gate {
    pub fn matrix(&self) -> Result<SquareOperator> {
        make_gate(self)
    }
}

impl FromStr for Gate {
    type Err = AdqcError;

    /// Parses `I,X,Y,Z,H`, the aliases `S = Zroot(2)`, `T = Zroot(4)` and
    /// `CZ = CPhase(pi)`, and the parameterised forms `Zroot(4)`, `Rz(0.3)`,
    /// `Ising(0.3)`, `CPhase(1.5)`, `E(0.3927)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "I" => return Ok(Gate::I),
            "X" => return Ok(Gate::X),
            "Y" => return Ok(Gate::Y),
            "Z" => return Ok(Gate::Z),
            "H" => return Ok(Gate::H),
            "S" => return Ok(Gate::Zroot(2)),
            "T" => return Ok(Gate::Zroot(4)),
            "CZ" => return Ok(Gate::CPhase(PI)),
            _ => {}
        }
        let (name, arg) = s
            .strip_suffix(')')
            .and_then(|rest| rest.split_once('('))
            .ok_or_else(|| AdqcError::UnknownGate(s.into()))?;
        let arg = arg.trim();
        match name.trim() {
            "Zroot" => {
                let n: u32 = arg
                    .parse()
                    .map_err(|_| AdqcError::InvalidParameter(format!("bad Zroot index `{arg}`")))?;
                Ok(Gate::Zroot(n))
            }
            "Rz" => Ok(Gate::Rz(parse_angle(arg)?)),
            "Ising" => Ok(Gate::Ising(parse_angle(arg)?)),
            "CPhase" => Ok(Gate::CPhase(parse_angle(arg)?)),
            "E" => Ok(Gate::Interaction(parse_angle(arg)?)),
            _ => Err(AdqcError::UnknownGate(s.into())),
        }
    }
}

impl std::fmt::Display for Gate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Gate::I => write!(f, "I"),
            Gate::X => write!(f, "X"),
            Gate::Y => write!(f, "Y"),
            Gate::Z => write!(f, "Z"),
            Gate::H => write!(f, "H"),
            Gate::Zroot(n) => write!(f, "Zroot({n})"),
            Gate::Rz(t) => write!(f, "Rz({t})"),
            Gate::Ising(a) => write!(f, "Ising({a})"),
            Gate::CPhase(a) => write!(f, "CPhase({a})"),
            Gate::Interaction(a) => write!(f, "E({a})"),
        }
    }
}

fn parse_angle(arg: &str) -> Result<f64> {
    let v: f64 = arg
        .parse()
        .map_err(|_| AdqcError::InvalidParameter(format!("bad gate angle `{arg}`")))?;
    finite(v)?;
    Ok(v)
}

/// Parses a `*`-separated product of gate names into a single matrix,
/// multiplied in the written order: `"H*T"` is the matrix `H · T` (so `T`
/// acts first). All factors must share one dimension.
pub fn parse_gate_product(s: &str) -> Result<SquareOperator> {
    let mut result: Option<SquareOperator> = None;
    for part in s.split('*') {
        let m = Gate::from_str(part)?.matrix()?;
        result = Some(match result {
            None => m,
            Some(acc) => {
                if acc.dim() != m.dim() {
                    return Err(AdqcError::DimensionMismatch {
                        expected: acc.dim(),
                        found: m.dim(),
                    });
                }
                acc.mul(&m)
            }
        });
    }
    result.ok_or_else(|| AdqcError::UnknownGate(s.into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    #[test]
    fn all_constructors_are_unitary() {
        let gates = [
            Gate::I,
            Gate::X,
            Gate::Y,
            Gate::Z,
            Gate::H,
            Gate::Zroot(1),
            Gate::Zroot(2),
            Gate::Zroot(4),
            Gate::Zroot(16),
            Gate::Rz(0.37),
            Gate::Ising(0.3),
            Gate::CPhase(1.1),
            Gate::Interaction(PI / 8.0),
        ];
        for g in gates {
            let m = make_gate(&g).unwrap();
            assert!(
                m.unitarity_defect() <= 1e-12,
                "{g} deviates by {}",
                m.unitarity_defect()
            );
        }
    }

    #[test]
    fn zroot_matches_symmetric_phase_convention() {
        let s = zroot(2).unwrap();
        assert!((s.entry(0, 0) - polar(-FRAC_PI_4)).norm() < 1e-15);
        assert!((s.entry(1, 1) - polar(FRAC_PI_4)).norm() < 1e-15);
        // Zroot(n)^n is Z up to global phase
        let t = zroot(4).unwrap();
        let t4 = t.mul(&t).mul(&t).mul(&t);
        assert!(t4.approx_eq_up_to_phase(&pauli_z(), 1e-12));
    }

    #[test]
    fn ising_zero_is_identity() {
        assert!(ising(0.0).unwrap().max_abs_diff(&SquareOperator::identity(4)) < 1e-15);
    }

    #[test]
    fn interaction_controlled_part_is_controlled_zroot2_at_pi_8() {
        let ctrl = controlled_rz(4.0 * PI / 8.0).unwrap();
        let expected = {
            // |0><0| (x) I + |1><1| (x) Zroot(2)
            let mut m = SquareOperator::identity(4);
            let s = zroot(2).unwrap();
            for r in 0..2 {
                for c in 0..2 {
                    m.set(2 + r, 2 + c, s.entry(r, c));
                }
            }
            m
        };
        assert!(ctrl.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn symmetric_variant_differs_by_register_local_rotation() {
        let alpha = 0.31;
        let full = interaction(alpha).unwrap();
        let sym = interaction_symmetric(alpha).unwrap();
        // E_sym = E_full · (I (x) Rz(-2 alpha)) up to global phase
        let local = SquareOperator::identity(2).kron(&rz(-2.0 * alpha).unwrap());
        assert!(sym.approx_eq_up_to_phase(&full.mul(&local), 1e-12));
    }

    #[test]
    fn gate_names_round_trip() {
        for text in ["I", "H", "Zroot(4)", "Rz(0.25)", "Ising(0.3)", "CPhase(3.14)", "E(0.3926990816987241)"] {
            let g: Gate = text.parse().unwrap();
            let again: Gate = g.to_string().parse().unwrap();
            assert_eq!(g, again);
        }
        assert_eq!("T".parse::<Gate>().unwrap(), Gate::Zroot(4));
        assert_eq!("S".parse::<Gate>().unwrap(), Gate::Zroot(2));
        assert!("Q".parse::<Gate>().is_err());
        assert!("Rz(nope)".parse::<Gate>().is_err());
    }

    #[test]
    fn gate_products_multiply_in_written_order() {
        let ht = parse_gate_product("H*T").unwrap();
        let expected = hadamard().mul(&zroot(4).unwrap());
        assert!(ht.max_abs_diff(&expected) < 1e-15);
    }
}
