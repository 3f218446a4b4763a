//! Permutation polynomials of F_{q^2} of the form `X^r h(X^{q-1})` that act
//! as a monomial on each coset of a subgroup of `mu_{q+1}`.
//!
//! [`construction`] builds them from per-coset data, [`classes`] decides the
//! sparse binomial and trinomial shapes, [`census`] counts what the forward
//! construction can produce, and [`oracle`] verifies everything by
//! exhaustion. [`format`] holds the JSON documents the CLI reads and writes.

pub mod arith;
pub mod census;
pub mod classes;
pub mod construction;
pub mod coset;
pub mod error;
pub mod field;
pub mod format;
pub mod oracle;
pub mod poly;

pub use classes::{ClassTag, ClassVerdict, Shape, SparseSpec};
pub use construction::{assemble, monomial_profile, AlgoInput, InputRow, PPCertificate};
pub use coset::{coset_system, CosetSystem};
pub use error::{Error, Result};
pub use field::{FieldCtx, FieldOptions, Gf};
pub use oracle::{is_permutation, VerifyReport};
pub use poly::Poly;
