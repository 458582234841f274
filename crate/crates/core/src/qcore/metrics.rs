//! Gate metrics: phase-invariant distance, axis-angle form of single-qubit
//! unitaries, and the phase split of diagonal two-qubit unitaries into
//! global / local-z / Ising parts.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{AdqcError, Result};
use crate::qcore::operator::SquareOperator;

const UNITARY_TOL: f64 = 1e-10;

/// Global-phase-invariant distance `d(U, V) = 1 - |Tr(U†V)| / dim`,
/// in `[0, 1]`, zero exactly when `U = e^{i theta} V`.
pub fn gate_distance(u: &SquareOperator, v: &SquareOperator) -> Result<f64> {
    if u.dim() != v.dim() {
        return Err(AdqcError::DimensionMismatch {
            expected: u.dim(),
            found: v.dim(),
        });
    }
    let overlap = u.adjoint().mul(v).trace().norm() / u.dim() as f64;
    Ok((1.0 - overlap).clamp(0.0, 1.0))
}

/// Rotation-axis form of a 2x2 unitary: `U = e^{i phase} e^{-i (angle/2) axis·sigma}`
/// with `angle` in `[0, pi]` and a unit `axis`.
///
/// Inputs within ~1e-6 of a phase multiple of the identity have no usable
/// axis; they are reported with `angle = 0`, axis `z`, and the `degenerate`
/// flag set rather than as an error, because synthesis walks routinely pass
/// through the identity.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct AxisAngle {
    pub axis: [f64; 3],
    pub angle: f64,
    pub degenerate: bool,
}

pub fn axis_angle(u: &SquareOperator) -> Result<AxisAngle> {
    if u.dim() != 2 {
        return Err(AdqcError::DimensionMismatch {
            expected: 2,
            found: u.dim(),
        });
    }
    let defect = u.unitarity_defect();
    if defect > UNITARY_TOL {
        return Err(AdqcError::NotUnitary { deviation: defect });
    }
    // strip the determinant phase to land in SU(2)
    let det = u.entry(0, 0) * u.entry(1, 1) - u.entry(0, 1) * u.entry(1, 0);
    let half_phase = Complex64::from_polar(1.0, -det.arg() / 2.0);
    let mut v: Vec<Complex64> = u.entries().iter().map(|z| z * half_phase).collect();
    // fold the SU(2) double cover so that cos(angle/2) >= 0
    let mut cos_half = (v[0].re + v[3].re) / 2.0;
    if cos_half < 0.0 {
        for z in &mut v {
            *z = -*z;
        }
        cos_half = -cos_half;
    }
    // V = cos(a/2) I - i sin(a/2) (n·sigma)
    let sn = [
        -(v[1].im + v[2].im) / 2.0,
        (v[2].re - v[1].re) / 2.0,
        -(v[0].im - v[3].im) / 2.0,
    ];
    let sin_half = (sn[0] * sn[0] + sn[1] * sn[1] + sn[2] * sn[2]).sqrt();
    if sin_half < 1e-6 {
        return Ok(AxisAngle {
            axis: [0.0, 0.0, 1.0],
            angle: 0.0,
            degenerate: true,
        });
    }
    Ok(AxisAngle {
        axis: [sn[0] / sin_half, sn[1] / sin_half, sn[2] / sin_half],
        angle: 2.0 * sin_half.atan2(cos_half),
        degenerate: false,
    })
}

/// Rebuilds `e^{-i (angle/2) axis·sigma}` from an axis-angle pair.
pub fn axis_angle_reconstruct(aa: &AxisAngle) -> SquareOperator {
    let (c, s) = ((aa.angle / 2.0).cos(), (aa.angle / 2.0).sin());
    let [nx, ny, nz] = aa.axis;
    SquareOperator::from_entries(
        2,
        vec![
            Complex64::new(c, -s * nz),
            Complex64::new(-s * ny, -s * nx),
            Complex64::new(s * ny, -s * nx),
            Complex64::new(c, s * nz),
        ],
    )
    .unwrap()
}

/// Phase split of a diagonal two-qubit unitary,
/// `U = e^{i g} (e^{i z1 sz} ⊗ e^{i z2 sz}) e^{i beta sz⊗sz}`.
///
/// The four diagonal phases only determine `(g, z1, z2, beta)` up to a
/// lattice of simultaneous pi/2 shifts (`e^{i pi/2 sz⊗sz}` is itself a
/// product of local z factors and a phase), so a canonical representative is
/// fixed: `z1` in `[-pi/4, pi/4)`, `z2` and `beta` in `(-pi/2, pi/2]`, `g`
/// in `(-pi, pi]`. This choice is stable against the branch cuts of `arg` on
/// the input's entries, and it keeps the reconstruction exact.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct IsingDecomposition {
    pub global_phase: f64,
    pub z1: f64,
    pub z2: f64,
    pub beta: f64,
}

pub fn ising_decompose(u: &SquareOperator) -> Result<IsingDecomposition> {
    if u.dim() != 4 {
        return Err(AdqcError::DimensionMismatch {
            expected: 4,
            found: u.dim(),
        });
    }
    let offdiag = u.max_offdiag();
    if offdiag > 1e-10 {
        return Err(AdqcError::NotDiagonal {
            max_offdiag: offdiag,
        });
    }
    let defect = u.unitarity_defect();
    if defect > UNITARY_TOL {
        return Err(AdqcError::NotUnitary { deviation: defect });
    }
    let phi: Vec<f64> = (0..4).map(|i| u.entry(i, i).arg()).collect();
    // invert phi_ab = g + z1 (-1)^a + z2 (-1)^b + beta (-1)^(a+b)
    let mut z1 = (phi[0] + phi[1] - phi[2] - phi[3]) / 4.0;
    let mut z2 = (phi[0] - phi[1] + phi[2] - phi[3]) / 4.0;
    let mut beta = (phi[0] - phi[1] - phi[2] + phi[3]) / 4.0;

    // canonicalise z1 into [-pi/4, pi/4); an odd number of quarter-turn
    // moves must hit z2 and beta too (lattice parity)
    let k = ((z1 + FRAC_PI_4) / FRAC_PI_2).floor();
    z1 -= k * FRAC_PI_2;
    if (k as i64).rem_euclid(2) == 1 {
        z2 -= FRAC_PI_2;
        beta -= FRAC_PI_2;
    }
    // fold z2 and beta into (-pi/2, pi/2] with half-turn moves
    let wrap_half = |x: f64| x - (((x + FRAC_PI_2) / PI).ceil() - 1.0) * PI;
    z2 = wrap_half(z2);
    beta = wrap_half(beta);
    // every move above shuffles quarter turns into the global phase; rather
    // than track them, re-derive g exactly from the |00> entry and fold it
    // into (-pi, pi]
    let mut g = phi[0] - z1 - z2 - beta;
    g -= (((g + PI) / (2.0 * PI)).ceil() - 1.0) * 2.0 * PI;

    Ok(IsingDecomposition {
        global_phase: g,
        z1,
        z2,
        beta,
    })
}

/// Rebuilds the diagonal unitary described by a decomposition.
pub fn ising_reconstruct(d: &IsingDecomposition) -> SquareOperator {
    let entry = |a: f64, b: f64| {
        Complex64::from_polar(1.0, d.global_phase + d.z1 * a + d.z2 * b + d.beta * a * b)
    };
    SquareOperator::diagonal(&[
        entry(1.0, 1.0),
        entry(1.0, -1.0),
        entry(-1.0, 1.0),
        entry(-1.0, -1.0),
    ])
}
