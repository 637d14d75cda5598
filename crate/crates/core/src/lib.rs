//! Exact character-sum kernels over odd-characteristic finite fields.
//!
//! The crate is layered bottom-up:
//!
//! * [`ff`]: fully tabulated fields `F_q`, `q = p^r`, with a fixed generator
//!   and discrete-log / Zech-log tables.
//! * [`cyclo`]: the rational group ring `Q[Z_n]` used to carry sums of
//!   `n`-th roots of unity exactly, with reduction modulo `Phi_n`.
//! * [`chars`]: multiplicative characters, Jacobi sums and Greene's binomial
//!   symbol, plus [`chars::laws`], the executable catalogue of the symbol
//!   identities they satisfy.
//! * [`hyp`]: Gaussian hypergeometric series `_{n+1}F_n` and the specialised
//!   `2F1(phi, phi; eps | x)` evaluator, two-square decompositions and the
//!   classical value at `-1`.
//! * [`curves`]: brute-force point counts on general Huff, Huff,
//!   `y^2 = x(x+a)(x+b)` and Edwards curves, and the birational maps between
//!   them.
//! * [`audit`]: a registry of counting and transformation identities (as
//!   originally stated and as corrected against the counting oracle) with an exact
//!   sweep engine and JSON/CSV reports.
//!
//! Data-parallel loops go through [`Exec`]; with the `parallel` feature off
//! every mode runs sequentially.

pub mod audit;
pub mod chars;
pub mod curves;
pub mod cyclo;
mod error;
pub mod exec;
pub mod ff;
pub mod hyp;

pub use error::{Error, Result};
pub use exec::Exec;

pub use cyclo::{GroupRingElement, Rat};
pub use ff::{FieldCtx, FieldElement};
