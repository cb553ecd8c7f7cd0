//! Executable parity machinery for Selmer ranks in dihedral p-extensions.
//!
//! * [`fplinalg`]: subspaces and bilinear forms over F_p.
//! * [`selmer_lab`]: synthetic self-dual Selmer structures and the duality checks
//!   they must satisfy, including the Howard pairing.
//! * [`cyclotomic`]: arithmetic in `Z[ζ_{p^n}]` and its finite quotients, the
//!   trace pairing, semilinear/ι-adjoint pairing transport, skew-Hermitian
//!   decompositions, and the group-ring lattice split.
//! * [`ec_arith`]: elliptic curves over Q, Tate's algorithm, point counting and
//!   residue-field torsion.
//! * [`parity_engine`]: local invariants δ_v and rank predictions.

pub mod arith;
pub mod cyclotomic;
pub mod ec_arith;
pub mod fplinalg;
pub mod parity_engine;
pub mod selmer_lab;
