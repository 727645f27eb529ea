//! Polynomials over `Z_p`, the truncated logarithm
//! `f(X) = Σ_{k=1}^{p-1} X^k / k`, the difference-counting identity for
//! cosets of `Γ`, and auxiliary-polynomial certificates.
//!
//! For `λ = (1 + sp) g` with `g ∈ Γ`, the number of `x ∈ ξ_iΓ` with
//! `x - λ ∈ ξ_jΓ` equals the number of `b ∈ Z_p ∖ {0, 1}` with
//! `f(b) ≡ (i - j) b + (j - s) (mod p)`. The values `b = 0, 1` always solve the
//! unrestricted equation when `j ≡ s`, resp. `i ≡ s`, and never correspond to
//! a difference, so both counts are reported.

mod cells;
mod certificate;
mod fpoly;
mod moments;
mod poly;

pub use cells::{
    boundary_count, lambda_sample, m_cell_count_direct, m_cell_count_reduced, union_of_points,
    verify_difference_lemma, DifferenceLemmaReport, LemmaFailure, MCell, ReducedCount,
};
pub use certificate::{
    build_certificate, default_params, psi_from_phi, verify_certificate, CellTranscript,
    Certificate, CertificateReport, Params, PointOrder,
};
pub use fpoly::{derivative_decompose, f_poly, f_values};
pub use moments::{
    coset_correlation, ordered_convolution_values, CosetCorrelation, CosetValue, OrderedValues,
};
pub use poly::PolyFp;
