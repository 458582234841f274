//! Dense linear-algebra kernel: operators, state vectors, the gate zoo, and
//! the distance/decomposition metrics everything upstream is scored with.
//!
//! Register convention used throughout the crate: qubit 0 is the **most
//! significant** bit of a computational basis index, and in every tensor
//! product the left factor is the more significant one.

pub mod gates;
pub mod metrics;
pub mod operator;
pub mod state;

pub use gates::{
    cphase, controlled_rz, hadamard, interaction, interaction_symmetric, ising, make_gate,
    parse_gate_product, pauli_i, pauli_x, pauli_y, pauli_z, rz, zroot, Gate,
};
pub use metrics::{
    axis_angle, axis_angle_reconstruct, gate_distance, ising_decompose, ising_reconstruct,
    AxisAngle, IsingDecomposition,
};
pub use operator::SquareOperator;
pub use state::StateVector;
