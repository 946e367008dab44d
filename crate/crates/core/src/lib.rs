//! Dense state-vector quantum simulation and a suite of textbook quantum
//! algorithms built on it.
//!
//! The crate is `no_std` and needs only `alloc`. Everything is exact
//! simulation over a `Vec` of complex amplitudes; randomness comes from an
//! explicitly seeded ChaCha8 generator so every sampled result is
//! reproducible.
//!
//! # Conventions
//!
//! * Qubit 0 is the most significant bit of a basis index, so the index of
//!   `|q0 q1 ... q(n-1)>` is `sum q_k 2^(n-1-k)`. Bitstrings are printed in
//!   the same left-to-right order.
//! * Registers are capped at [`MAX_QUBITS`] qubits.
//! * Matrix and state comparisons use the max-norm with tolerance `1e-10`
//!   unless a function documents otherwise.
//!
//! # Layout
//!
//! | module | contents |
//! |---|---|
//! | [`state`] | amplitudes, gate kernel, measurement, sampling |
//! | [`circuit`] | gate catalog, circuit IR, execution, inverse |
//! | [`decompose`] | Z-Y, AXBXC, C²(U), multi-controlled, two-level, gray code |
//! | [`oracles`] | bit/phase oracles, comparator, modular multiplication |
//! | [`foundations`] | Bell, teleportation, Deutsch-Jozsa, Bernstein-Vazirani, Simon, mitigation |
//! | [`fourier`] | QFT, QPE, iterative phase estimation |
//! | [`number`] | Euclid, continued fractions, period finding, Shor, discrete log, RSA |
//! | [`grover`] | Grover search, counting, amplitude estimation, derandomized search |
//! | [`pauli`] | Pauli strings and sums |
//! | [`hamsim`] | Pauli exponentials, Trotter, 1-sparse simulation, LCU |
//! | [`variational`] | QUBO/MaxCut, QAOA, adiabatic evolution, HHL, VQLS |
//! | [`fermion`] | ladder operators, Jordan-Wigner, parity and Bravyi-Kitaev encodings |

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod circuit;
pub mod decompose;
pub mod error;
pub mod fermion;
pub mod foundations;
pub mod fourier;
pub mod grover;
pub mod hamsim;
pub mod math;
pub mod matrix;
pub mod number;
pub mod oracles;
pub mod pauli;
pub mod rng;
pub mod state;
pub mod variational;

pub use circuit::{Circuit, Gate, Instruction};
pub use error::{Error, Result};
pub use matrix::Matrix;
pub use state::{BasisLabel, Control, Distribution, QuantumState, MAX_QUBITS};

/// Complex amplitude type used throughout the crate.
pub type C64 = num_complex::Complex64;
