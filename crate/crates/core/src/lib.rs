//! Symbolic–numeric engine for Kontsevich's deformation quantization on the
//! dual of a finite-dimensional Lie algebra.
//!
//! The crate enumerates admissible graphs, integrates their configuration
//! space weights by Monte Carlo, compiles graphs into bidifferential
//! operators, evaluates the star product exactly on polynomials, and checks
//! the Duflo isomorphism and graded Kashiwara–Vergne identities on concrete
//! algebras with exact rational arithmetic.

pub mod ratio;

pub mod diffop;
pub mod expr;
pub mod fixtures;
pub mod graphs;
pub mod lie;
pub mod poly;
pub mod uea;

pub mod duflo;
pub mod star;
pub mod weights;

pub use diffop::{apply_right_operator, DiffOperator};
pub use lie::{
    adjoint_field, find_invariants, is_invariant, load_algebra, normalize_constants,
    trace_power_poly, InvariantBasis, LieAlgebra,
};
pub use poly::{multiply_jet, pairing, Coords, Polynomial};
pub use ratio::Rat;
pub use uea::{symmetrize, uea_mul, unsymmetrize, UEnvElement};
