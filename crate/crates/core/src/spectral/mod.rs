//! Exact convolution and correlation over `Z_N`, additive energies, Fourier
//! transforms and the objects built on them.
//!
//! Conventions:
//!
//! ```text
//!     (f * g)(x) = Σ_y f(y) g(x - y)        (f ∘ g)(x) = Σ_y f(y) g(y + x)
//!     f̂(ξ) = Σ_x f(x) e(-ξx / N)            e(t) = exp(2πi t)
//! ```
//!
//! All counting is exact. Tables hold `u64` entries and are promoted to
//! `BigUint` when a product or sum overflows; scalar results are always
//! `BigUint`. Floating point appears only in [`fourier`].
//!
//! [`invariant`] holds the coset-compressed route for functions on
//! `Z_{p^2}` that are constant on the cosets of `Γ`; the dense routes here
//! serve as its oracle.

mod convolution;
mod energy;
pub mod fourier;
mod generalized;
pub mod invariant;
mod levels;
mod table;
mod triple;

pub use convolution::{convolve, correlate, iterated_convolution};
pub use energy::{energy, energy_forms, higher_energy, t_k};
pub use fourier::{dft, dft_real, ComplexTable};
pub use generalized::{c_k, GeneralizedConvolution, DEFAULT_CK_CAP};
pub use invariant::{psi_k, ClassTable};
pub use levels::{level_sets, LevelSetFamily};
pub use table::{CountTable, ResidueSet, DENSE_MODULUS_LIMIT};
pub use triple::{subgroup_mass_identity, triple_product_check, TripleProduct};
