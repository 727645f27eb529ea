//! Auxiliary-polynomial certificates.
//!
//! `Φ(X, Y, Z) = Σ λ_{a,b,c} X^a Y^b Z^c` with `a < A`, `b < B`, `c < C`, and
//! `Ψ(X) = Φ(X, f(X), X^p)`. The builder chooses `λ` so that `Ψ` vanishes to
//! order `D` at every point of every cell; the verifier checks this with
//! nothing but `Ψ`, the cells recomputed in `Z_{p^2}`, and synthetic division.
//!
//! With `D_n G = [X(1-X)]^n G^{(n)}`, Leibniz gives
//! `D_n(uv) = Σ_k C(n,k) D_k(u) D_{n-k}(v)`, `D_k(X^a) = a^{(k)} X^a (1-X)^k`
//! and `D_n(X^{cp} G) = X^{cp} D_n G` in characteristic `p`. On a cell point
//! `X^p = X`, `f = (i-j)X + (j-s)` and `D_k f = q_k` for `k >= 1`, which turns
//! each condition `D_n Ψ = 0` into a polynomial identity linear in `λ`.

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

use super::cells::MCell;
use super::fpoly::{f_poly, falling, q_table};
use super::poly::PolyFp;
use crate::arith::{add_mod, mul_mod, sub_mod, inv_mod, Prime};
use crate::error::{Error, Result};
use crate::exec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Params {
    #[serde(rename = "A")]
    pub a: u64,
    #[serde(rename = "B")]
    pub b: u64,
    #[serde(rename = "C")]
    pub c: u64,
    #[serde(rename = "D")]
    pub d: u64,
}

impl Params {
    pub fn new(a: u64, b: u64, c: u64, d: u64) -> Self {
        Params { a, b, c, d }
    }

    /// Number of unknowns `A·B·C`.
    pub fn unknowns(&self) -> u64 {
        self.a * self.b * self.c
    }

    /// Flat index of `λ_{a,b,c}`: `(a·B + b)·C + c`.
    pub fn index(&self, a: u64, b: u64, c: u64) -> usize {
        ((a * self.b + b) * self.c + c) as usize
    }

    /// `(A + p(B + C)) / D`.
    pub fn bound(&self, p: Prime) -> f64 {
        (self.a + p.get() * (self.b + self.c)) as f64 / self.d as f64
    }

    /// `s·D·(A+B+C+2D) < A·B·C`, `A·B <= p` and `D < p`.
    pub fn check(&self, p: Prime, s: u64) -> Result<()> {
        let q = p.get() as u128;
        let (a, b, c, d, s) = (self.a as u128, self.b as u128, self.c as u128, self.d as u128, s as u128);
        if a == 0 || b == 0 || c == 0 || d == 0 {
            return Err(Error::Inadmissible("A, B, C, D must all be positive".into()));
        }
        let lhs = s * d * (a + b + c + 2 * d);
        if lhs >= a * b * c {
            return Err(Error::Inadmissible(format!(
                "s·D·(A+B+C+2D) < A·B·C fails: {lhs} >= {}",
                a * b * c
            )));
        }
        if a * b > q {
            return Err(Error::Inadmissible(format!("A·B <= p fails: {} > {q}", a * b)));
        }
        if d >= q {
            return Err(Error::Inadmissible(format!("D < p fails: {d} >= {q}")));
        }
        Ok(())
    }
}

/// Largest `x` with `x^3 · s <= n`.
fn cube_root_floor(n: u128, s: u128) -> u64 {
    let (mut lo, mut hi) = (0u128, 1u128 << 43);
    while lo < hi {
        let mid = (lo + hi + 1) / 2;
        if mid.checked_pow(3).and_then(|v| v.checked_mul(s)).map_or(false, |v| v <= n) {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    lo as u64
}

/// `A = ⌊p^{2/3} s^{-1/3}⌋`, `B = C = ⌊p^{1/3} s^{1/3}⌋`, `D = ⌊A' / 32⌋`
/// with `A'` the unrounded `A`. Computed with exact integer roots.
pub fn default_params(p: Prime, s: u64) -> Result<Params> {
    if s == 0 {
        return Err(Error::InvalidArgument("s must be positive".into()));
    }
    let q = p.get() as u128;
    let a = cube_root_floor(q * q, s as u128);
    let b = cube_root_floor(q * s as u128, 1);
    let d = cube_root_floor(q * q, 32768 * s as u128);
    if d == 0 {
        return Err(Error::Inadmissible(format!(
            "default D = ⌊p^(2/3) s^(-1/3) / 32⌋ is 0 for p = {q}, s = {s}; give explicit parameters"
        )));
    }
    Ok(Params::new(a, b, b, d))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointOrder {
    /// The point `b ∈ Z_p`.
    pub b: u64,
    pub order: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellTranscript {
    pub i: u64,
    pub j: u64,
    pub lambda: u64,
    pub points: Vec<PointOrder>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub p: Prime,
    pub params: Params,
    /// Number of cells, the multiplicity `s` of the admissibility condition.
    pub s_count: u64,
    pub cells: Vec<MCell>,
    /// `λ_{a,b,c}` flattened row-major in `(a, b, c)`.
    pub phi: Vec<u64>,
    pub psi: PolyFp,
    pub transcript: Vec<CellTranscript>,
    /// `(A + p(B + C)) / D`.
    pub bound: f64,
}

fn binomials(n: u64, q: u64) -> Vec<Vec<u64>> {
    let mut rows = vec![vec![1u64]];
    for m in 1..=n as usize {
        let prev = &rows[m - 1];
        let mut row = vec![1u64; m + 1];
        for k in 1..m {
            row[k] = add_mod(prev[k - 1], prev[k], q);
        }
        rows.push(row);
    }
    rows
}

/// Linear constraints on `λ` from one cell: the coefficients of
/// `Σ λ_{a,b,c} X^{a+c} Σ_k C(n,k) a^{(k)} (1-X)^k G_{n-k,b}` for `n < D`.
fn cell_rows(cell: &MCell, params: Params, qs: &[PolyFp], binom: &[Vec<u64>]) -> Result<Vec<Vec<u64>>> {
    let p = cell.p;
    let q = p.get();
    let (slope, intercept) = cell.linear_form();
    let lin = PolyFp::new(p, vec![intercept, slope]);
    let factor = |k: usize| if k == 0 { &lin } else { &qs[k] };
    let (bb, dd) = (params.b as usize, params.d as usize);

    // g[m][b] = D_m(f^b) on the cell
    let mut g = vec![vec![PolyFp::zero(p); bb]; dd];
    g[0][0] = PolyFp::constant(p, 1);
    for b in 1..bb {
        for m in 0..dd {
            let mut acc = PolyFp::zero(p);
            for k in 0..=m {
                let term = (factor(k) * &g[m - k][b - 1]).scale(binom[m][k]);
                acc = &acc + &term;
            }
            g[m][b] = acc;
        }
    }
    let one_minus_x = PolyFp::new(p, vec![1, q - 1]);
    let omx_pow: Vec<PolyFp> = (0..dd).map(|k| one_minus_x.pow(k as u32)).collect();

    let limit = (params.a + params.b + params.c + 2 * params.d) as usize;
    let cols = params.unknowns() as usize;
    let mut rows = Vec::new();
    for n in 0..dd {
        let mut polys: Vec<(usize, PolyFp)> = Vec::with_capacity(cols);
        let mut top = 0usize;
        for a in 0..params.a {
            for b in 0..bb {
                let mut h = PolyFp::zero(p);
                for k in 0..=n {
                    let c = mul_mod(binom[n][k], falling(a, k as u64, q), q);
                    if c != 0 {
                        h = &h + &(&omx_pow[k] * &g[n - k][b]).scale(c);
                    }
                }
                for c in 0..params.c {
                    let shift = (a + c) as usize;
                    if let Some(deg) = h.degree() {
                        if deg + shift > limit {
                            return Err(Error::Internal(format!(
                                "P_(n,a,b,c) has degree {} > A+B+C+2D = {limit}",
                                deg + shift
                            )));
                        }
                        top = top.max(deg + shift);
                    }
                    polys.push((params.index(a, b as u64, c), h.shift(shift)));
                }
            }
        }
        for e in 0..=top {
            let row: Vec<u64> = {
                let mut r = vec![0u64; cols];
                for (idx, poly) in &polys {
                    r[*idx] = poly.coeff(e);
                }
                r
            };
            if row.iter().any(|&v| v != 0) {
                rows.push(row);
            }
        }
    }
    Ok(rows)
}

/// A nonzero solution of `M x = 0` over `Z_p`: reduced row echelon form,
/// first free column set to 1, other free columns 0.
fn nullspace_vector(mut rows: Vec<Vec<u64>>, cols: usize, q: u64) -> Option<Vec<u64>> {
    let mut pivots: Vec<(usize, usize)> = Vec::new();
    let mut rank = 0;
    for col in 0..cols {
        let Some(pr) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, pr);
        let inv = inv_mod(rows[rank][col], q).expect("nonzero pivot");
        for v in rows[rank].iter_mut() {
            *v = mul_mod(*v, inv, q);
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[col] != 0 {
                let factor = row[col];
                for (v, &pv) in row.iter_mut().zip(&pivot_row) {
                    *v = sub_mod(*v, mul_mod(factor, pv, q), q);
                }
            }
        }
        pivots.push((rank, col));
        rank += 1;
    }
    let pivot_cols: BTreeSet<usize> = pivots.iter().map(|&(_, c)| c).collect();
    let free = (0..cols).find(|c| !pivot_cols.contains(c))?;
    let mut x = vec![0u64; cols];
    x[free] = 1;
    for &(r, c) in &pivots {
        x[c] = sub_mod(0, rows[r][free], q);
    }
    Some(x)
}

/// `Ψ = Σ_b f^b · Σ_{a,c} λ_{a,b,c} X^{a + pc}`.
pub fn psi_from_phi(p: Prime, params: Params, phi: &[u64]) -> Result<PolyFp> {
    if phi.len() as u64 != params.unknowns() {
        return Err(Error::InvalidArgument(format!(
            "phi has {} coefficients, expected A·B·C = {}",
            phi.len(),
            params.unknowns()
        )));
    }
    let q = p.get() as usize;
    let f = f_poly(p);
    let mut f_pow = PolyFp::constant(p, 1);
    let mut psi = PolyFp::zero(p);
    for b in 0..params.b {
        let mut coeffs = vec![0u64; params.a as usize + q * params.c as usize];
        for a in 0..params.a {
            for c in 0..params.c {
                coeffs[a as usize + q * c as usize] = phi[params.index(a, b, c)];
            }
        }
        psi = &psi + &(&f_pow * &PolyFp::new(p, coeffs));
        f_pow = &f_pow * &f;
    }
    Ok(psi)
}

pub fn build_certificate(p: Prime, cells: &[MCell], params: Params) -> Result<Certificate> {
    if cells.is_empty() {
        return Err(Error::EmptyCells);
    }
    for c in cells {
        if c.p != p || !c.is_consistent() {
            return Err(Error::InvalidArgument(format!("cell {c:?} is not a valid cell mod {p}^2")));
        }
        if c.is_boundary() {
            return Err(Error::InvalidArgument(format!(
                "cell ({}, {}) involves pΓ; certificates need unit cosets",
                c.i, c.j
            )));
        }
        if c.points().is_empty() {
            return Err(Error::Precondition(format!(
                "cell ({}, {}) with λ = {} is empty",
                c.i, c.j, c.lambda
            )));
        }
    }
    let s = cells.len() as u64;
    params.check(p, s)?;
    let q = p.get();
    let qs = q_table(p, params.d.saturating_sub(1))?;
    let binom = binomials(params.d, q);

    let per_cell = exec::map_slice(cells, |c| cell_rows(c, params, &qs, &binom));
    let mut rows = Vec::new();
    for r in per_cell {
        rows.extend(r?);
    }
    let phi = nullspace_vector(rows, params.unknowns() as usize, q)
        .ok_or_else(|| Error::Internal("the constraint system has only the trivial solution".into()))?;
    let psi = psi_from_phi(p, params, &phi)?;

    let mut cert = Certificate {
        p,
        params,
        s_count: s,
        cells: cells.to_vec(),
        phi,
        psi,
        transcript: Vec::new(),
        bound: params.bound(p),
    };
    let report = verify_certificate(&cert);
    if !report.psi_nonzero {
        return Err(Error::Internal("Ψ vanished identically".into()));
    }
    cert.transcript = report.cells;
    let recheck = verify_certificate(&cert);
    if !recheck.valid() {
        return Err(Error::Internal(format!(
            "built certificate failed verification: {}",
            recheck.failures.join("; ")
        )));
    }
    Ok(cert)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub p: u64,
    pub params: Params,
    pub psi_nonzero: bool,
    pub psi_degree: Option<usize>,
    pub cells: Vec<CellTranscript>,
    pub min_order: Option<u64>,
    /// `|M|`, distinct points over all cells.
    pub m_size: u64,
    pub bound: f64,
    pub failures: Vec<String>,
}

impl CertificateReport {
    pub fn valid(&self) -> bool {
        self.failures.is_empty()
    }
}

/// `Σ_{a,b,c} λ_{a,b,c} X^a f^b X^{pc}`, by Horner's scheme in `f`.
fn psi_horner(p: Prime, params: Params, phi: &[u64]) -> PolyFp {
    let q = p.get() as usize;
    let f = f_poly(p);
    let mut acc = PolyFp::zero(p);
    for b in (0..params.b).rev() {
        let mut layer = PolyFp::zero(p);
        for a in 0..params.a {
            for c in 0..params.c {
                let coef = phi[params.index(a, b, c)];
                if coef != 0 {
                    layer = &layer + &PolyFp::monomial(p, coef, a as usize + q * c as usize);
                }
            }
        }
        acc = &(&acc * &f) + &layer;
    }
    acc
}

pub fn verify_certificate(cert: &Certificate) -> CertificateReport {
    let p = cert.p;
    let params = cert.params;
    let mut failures = Vec::new();
    let mut report = CertificateReport {
        p: p.get(),
        params,
        psi_nonzero: !cert.psi.is_zero(),
        psi_degree: cert.psi.degree(),
        cells: Vec::new(),
        min_order: None,
        m_size: 0,
        bound: params.bound(p),
        failures: Vec::new(),
    };

    if cert.s_count != cert.cells.len() as u64 {
        failures.push(format!("s_count {} != number of cells {}", cert.s_count, cert.cells.len()));
    }
    if let Err(e) = params.check(p, cert.cells.len().max(1) as u64) {
        failures.push(e.to_string());
    }
    if cert.cells.is_empty() {
        failures.push(Error::EmptyCells.to_string());
    }
    if (cert.bound - report.bound).abs() > 1e-9 * report.bound.abs().max(1.0) {
        failures.push(format!("bound {} != (A+p(B+C))/D = {}", cert.bound, report.bound));
    }
    let phi_ok = cert.phi.len() as u64 == params.unknowns()
        && cert.phi.iter().all(|&v| v < p.get())
        && cert.phi.iter().any(|&v| v != 0);
    if !phi_ok {
        failures.push("phi is not a nonzero reduced A·B·C tensor".into());
    } else if psi_horner(p, params, &cert.phi) != cert.psi {
        failures.push("psi != Φ(X, f(X), X^p)".into());
    }
    if !report.psi_nonzero {
        failures.push("Ψ is the zero polynomial".into());
    }
    if cert.psi.p() != p {
        failures.push("psi is over a different field".into());
    }

    let mut points: Vec<(usize, u64)> = Vec::new();
    for (ci, cell) in cert.cells.iter().enumerate() {
        if cell.p != p || !cell.is_consistent() || cell.is_boundary() {
            failures.push(format!("cell {ci} is not a consistent unit-coset cell"));
            continue;
        }
        for b in cell.reduced_points() {
            if b > 1 {
                points.push((ci, b));
            }
        }
    }
    let cap = cert.psi.degree().map_or(0, |d| d + 1);
    let orders = exec::map_slice(&points, |&(_, b)| cert.psi.vanishing_order(b, cap) as u64);

    let mut transcript: Vec<CellTranscript> = cert
        .cells
        .iter()
        .map(|c| CellTranscript {
            i: c.i,
            j: c.j,
            lambda: c.lambda,
            points: Vec::new(),
        })
        .collect();
    for (&(ci, b), &order) in points.iter().zip(&orders) {
        if order < params.d {
            failures.push(format!(
                "cell ({}, {}): Ψ vanishes to order {order} < D = {} at {b}",
                cert.cells[ci].i, cert.cells[ci].j, params.d
            ));
        }
        transcript[ci].points.push(PointOrder { b, order });
    }
    if !cert.transcript.is_empty() && cert.transcript != transcript {
        failures.push("stored transcript does not match recomputed vanishing orders".into());
    }

    report.min_order = orders.iter().copied().min();
    report.m_size = points.iter().map(|&(_, b)| b).collect::<BTreeSet<_>>().len() as u64;
    report.cells = transcript;
    report.failures = failures;
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stepanov::cells::{m_cell_count_direct, m_cell_count_reduced};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p(v: u64) -> Prime {
        Prime::new(v).unwrap()
    }

    fn example() -> Certificate {
        let pr = p(101);
        let cell = MCell::new(pr, 1, 2, 1).unwrap();
        build_certificate(pr, &[cell], Params::new(10, 5, 2, 3)).unwrap()
    }

    #[test]
    fn params_arithmetic() {
        let prm = Params::new(10, 5, 2, 3);
        assert!(prm.check(p(101), 1).is_ok());
        assert_eq!(prm.bound(p(101)), 239.0);
        assert_eq!(prm.index(1, 0, 0), 10);
        assert!(matches!(prm.check(p(101), 2), Err(Error::Inadmissible(_))));
        assert!(Params::new(11, 10, 2, 1).check(p(101), 1).is_err());
        assert!(Params::new(10, 5, 2, 0).check(p(101), 1).is_err());
    }

    #[test]
    fn default_params_use_exact_roots() {
        assert!(matches!(default_params(p(101), 1), Err(Error::Inadmissible(_))));
        // p = 1009: p^2 = 1018081, A = 100, B = 10, D = ⌊100.6/32⌋ = 3
        assert_eq!(default_params(p(1009), 1).unwrap(), Params::new(100, 10, 10, 3));
        assert_eq!(cube_root_floor(27, 1), 3);
        assert_eq!(cube_root_floor(26, 1), 2);
        assert_eq!(cube_root_floor(1000, 8), 5);
    }

    #[test]
    fn nullspace_small() {
        // x + y + z = 0, y + 2z = 0 over Z_5
        let x = nullspace_vector(vec![vec![1, 1, 1], vec![0, 1, 2]], 3, 5).unwrap();
        assert_eq!(x, vec![1, 3, 1]);
        assert!(nullspace_vector(vec![vec![1, 0], vec![0, 1]], 2, 5).is_none());
    }

    #[test]
    fn psi_routes_agree() {
        let pr = p(13);
        let prm = Params::new(3, 2, 2, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let phi: Vec<u64> = (0..prm.unknowns()).map(|_| rng.gen_range(0..13)).collect();
        assert_eq!(psi_from_phi(pr, prm, &phi).unwrap(), psi_horner(pr, prm, &phi));
    }

    #[test]
    fn example_certificate() {
        let cert = example();
        assert!(!cert.psi.is_zero());
        assert_eq!(cert.bound, 239.0);
        let cell = cert.cells[0];
        assert_eq!(cell.reduced_points(), vec![47, 95]);
        assert_eq!(m_cell_count_direct(&cell), m_cell_count_reduced(&cell).unwrap().restricted);
        let report = verify_certificate(&cert);
        assert!(report.valid(), "{:?}", report.failures);
        assert!(report.min_order.unwrap() >= 3);
        assert_eq!(report.m_size, 2);
        assert!((report.m_size as f64) <= report.bound);
        assert_eq!(report.cells, cert.transcript);
        // the nullspace choice is deterministic
        assert_eq!(example().phi, cert.phi);
    }

    #[test]
    fn json_round_trip() {
        let cert = example();
        let text = serde_json::to_string(&cert).unwrap();
        let back: Certificate = serde_json::from_str(&text).unwrap();
        assert_eq!(back, cert);
        assert!(verify_certificate(&back).valid());
    }

    #[test]
    fn perturbations_are_rejected() {
        let cert = example();
        let q = cert.p.get();
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for _ in 0..20 {
            let mut bad = cert.clone();
            let k = rng.gen_range(0..bad.phi.len());
            let delta = rng.gen_range(1..q);
            bad.phi[k] = (bad.phi[k] + delta) % q;
            bad.psi = psi_from_phi(bad.p, bad.params, &bad.phi).unwrap();
            bad.transcript.clear();
            assert!(!verify_certificate(&bad).valid(), "phi[{k}] + {delta} accepted");
        }
        let mut bad = cert.clone();
        bad.psi = &bad.psi + &PolyFp::monomial(bad.p, 1, 3);
        assert!(!verify_certificate(&bad).valid());
    }

    #[test]
    fn builder_rejections() {
        let pr = p(101);
        assert!(matches!(
            build_certificate(pr, &[], Params::new(10, 5, 2, 3)),
            Err(Error::EmptyCells)
        ));
        let cell = MCell::new(pr, 1, 2, 1).unwrap();
        assert!(matches!(
            build_certificate(pr, &[cell], Params::new(10, 5, 2, 4)),
            Err(Error::Inadmissible(_))
        ));
        let boundary = MCell::new(pr, 0, 2, 1).unwrap();
        assert!(build_certificate(pr, &[boundary], Params::new(10, 5, 2, 3)).is_err());
    }

    #[test]
    fn several_cells() {
        let pr = p(101);
        let cells: Vec<MCell> = [(1, 2, 1), (3, 7, 5)]
            .iter()
            .map(|&(i, j, l)| MCell::new(pr, i, j, l).unwrap())
            .filter(|c| m_cell_count_direct(c) > 0)
            .collect();
        let prm = Params::new(12, 8, 4, 2);
        prm.check(pr, cells.len() as u64).unwrap();
        let cert = build_certificate(pr, &cells, prm).unwrap();
        assert!(verify_certificate(&cert).valid());
    }
}
