//! Exact computation over `Z_{p^2}` of the objects around Heilbronn's
//! exponential sum
//!
//! ```text
//!     S(a) = sum_{n=1}^{p} e(a n^p / p^2)
//! ```
//!
//! The crate is organised bottom-up:
//!
//! * [`arith`]: residues, modular powers and inverses, primality, the
//!   projection `Z*_{p^r} -> Z*_{p^{r-1}}`.
//! * [`group`]: the subgroup `Γ = { m^p : 1 <= m <= p-1 }` of `Z*_{p^2}`,
//!   its coset decomposition and coset classification.
//! * [`spectral`]: exact convolution / correlation tables, Fourier
//!   transforms, additive energies `E`, `E_k`, `T_k`, generalized
//!   convolutions and the triple-product inequality.
//! * [`stepanov`]: polynomials over `Z_p`, the truncated logarithm `f(X)`,
//!   the difference-counting identity and auxiliary-polynomial certificates.
//! * [`heilbronn`]: the sums themselves and bound-ratio reports.
//! * [`fermat`]: Fermat quotients, `l_p` scans and the congruence count.
//!
//! Heavy loops run on rayon when the `parallel` feature is enabled (the
//! default). Every reduction is performed in a fixed order, so results are
//! bit-identical for any thread count; see [`exec`].

pub mod arith;
pub mod error;
pub mod exec;
pub mod fermat;
pub mod group;
pub mod heilbronn;
pub mod spectral;
pub mod stepanov;

pub use arith::{Prime, Residue};
pub use error::{Error, Result};
pub use group::{CosetDecomposition, CosetLabel, Subgroup};
