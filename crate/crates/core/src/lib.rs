//! Symbolic computation with Leavitt path algebras of finite directed graphs.
//!
//! * [`graph`]: graphs, paths, vertex and edge deletion, trimmability.
//! * [`lpa`]: elements in normal form, the grading, Laurent tensors, the
//!   text grammar, and a word-level rewriting engine.
//! * [`morphisms`]: maps given on generators, with relation checking.
//! * [`verify`]: the brute-force quotient oracle and windowed pullback checks.
//! * [`linalg`]: exact sparse elimination used by the checks.

pub mod graph;
pub mod linalg;
pub mod lpa;
pub mod morphisms;
pub mod verify;
pub mod scalar;

pub use graph::{Graph, GraphError, TrimFailure, TrimmabilityReport};
pub use lpa::{Element, Generator, Lpa, LpaError, Monomial, SpecialEdgeChoice, TensorElement};
pub use scalar::{Fp, Rational, Scalar};
