//! Relaxator Liouville dynamics for open quantum systems.
//!
//! The crate builds frequency-dependent generators `L(ω) = L_P + ΔH(ω) − iΓ(ω)`
//! for the reduced dynamics of a small system coupled to an environment, two
//! ways:
//!
//! * **exactly**, from a fully specified finite total system, via projection
//!   onto the system Liouville space and the Schur-complement resolvent
//!   identity ([`exact`]);
//! * **in weak coupling**, from a system Hamiltonian, coupling operators and
//!   tabulated environmental correlation functions ([`bath`], [`weak`]).
//!
//! On top of either generator it computes time evolution (residue expansion
//! over effective eigenvalues, or numerical inverse Laplace transform),
//! stationary states, Pauli master rates with detailed balance, Markov and
//! secular (Lindblad) limits, and dynamic susceptibilities with
//! Kramers-Kronig validation ([`spectral`], [`pauli`], [`markov`],
//! [`response`]). Closed-form results for a qubit coupled to a thermal bath
//! ([`qubit`]) serve as the analytic ground truth for the numerical pipeline.
//!
//! The `relaxator` binary runs declarative scenario files; see [`scenario`].

pub mod bath;
pub mod bohr;
pub mod error;
pub mod exact;
pub mod freq;
pub mod linalg;
pub mod markov;
pub mod operator;
pub mod pauli;
pub mod quad;
pub mod qubit;
pub mod response;
pub mod scenario;
pub mod spectral;
pub mod superop;
pub mod testutil;
pub mod weak;

pub use error::{Error, Result};
pub use operator::{CMat, CVec, OperatorMatrix};
pub use superop::SuperOp;

pub use num_complex::Complex64 as C64;
