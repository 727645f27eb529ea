use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

use super::fpoly::f_values;
use crate::arith::{add_mod, inv_mod, mul_mod, sub_mod, Prime};
use crate::error::{Error, Result};
use crate::exec;
use crate::group::{build_gamma, classify, gamma_lift, CosetLabel};

/// `M_{i,j}(λ) = { x - y ≡ λ : x ∈ ξ_iΓ, y ∈ ξ_jΓ }`, with `λ = (1 + sp) g`.
///
/// An index of 0 stands for `pΓ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MCell {
    pub p: Prime,
    pub i: u64,
    pub j: u64,
    pub lambda: u64,
    pub s: u64,
    pub g: u64,
}

fn label_of(idx: u64) -> CosetLabel {
    if idx == 0 {
        CosetLabel::PCoset
    } else {
        CosetLabel::Unit(idx)
    }
}

impl MCell {
    pub fn new(p: Prime, i: u64, j: u64, lambda: u64) -> Result<Self> {
        let q = p.get();
        if i > q || j > q {
            return Err(Error::InvalidArgument(format!(
                "coset indices ({i}, {j}) must lie in [0, {q}]"
            )));
        }
        let lambda = lambda % p.square();
        let s = match classify(p, lambda) {
            CosetLabel::Unit(s) => s,
            _ => {
                return Err(Error::NotAUnit {
                    value: lambda,
                    modulus: p.square(),
                })
            }
        };
        let g = gamma_lift(p, lambda);
        Ok(MCell { p, i, j, lambda, s, g })
    }

    /// True for the `pΓ` cases, where the count is at most one.
    pub fn is_boundary(&self) -> bool {
        self.i == 0 || self.j == 0
    }

    /// Checks `(1 + sp) g ≡ λ (mod p^2)`, `g ∈ Γ` and the index ranges.
    pub fn is_consistent(&self) -> bool {
        let q = self.p.get();
        let n = self.p.square();
        self.i <= q
            && self.j <= q
            && (1..=q).contains(&self.s)
            && self.lambda < n
            && self.g == gamma_lift(self.p, self.g)
            && self.g % q == self.lambda % q
            && mul_mod((1 + self.s * q) % n, self.g, n) == self.lambda
    }

    /// Members `x` of the first coset with `x - λ` in the second.
    pub fn points(&self) -> Vec<u64> {
        let n = self.p.square();
        let rep = label_of(self.i).representative(self.p);
        let target = label_of(self.j);
        let mut out: Vec<u64> = build_gamma(self.p)
            .elements()
            .iter()
            .map(|&g| mul_mod(rep, g, n))
            .filter(|&x| classify(self.p, sub_mod(x, self.lambda, n)) == target)
            .collect();
        out.sort_unstable();
        out
    }

    /// Cell points as residues `b = x λ^{-1} mod p`, ascending.
    pub fn reduced_points(&self) -> Vec<u64> {
        let q = self.p.get();
        let li = inv_mod(self.lambda % q, q).expect("λ is a unit");
        let mut out: Vec<u64> = self.points().iter().map(|&x| mul_mod(x % q, li, q)).collect();
        out.sort_unstable();
        out
    }

    /// `(i - j) X + (j - s)` as `(slope, intercept)` mod `p`.
    pub fn linear_form(&self) -> (u64, u64) {
        let q = self.p.get();
        (sub_mod(self.i % q, self.j % q, q), sub_mod(self.j % q, self.s % q, q))
    }
}

pub fn m_cell_count_direct(cell: &MCell) -> u64 {
    cell.points().len() as u64
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReducedCount {
    pub unrestricted: u64,
    /// Solutions with `b ∉ {0, 1}`.
    pub restricted: u64,
    pub solutions: Vec<u64>,
}

/// Solutions `b ∈ Z_p` of `f(b) ≡ (i - j) b + (j - s)`.
pub fn m_cell_count_reduced(cell: &MCell) -> Result<ReducedCount> {
    reduced_with(cell, &f_values(cell.p))
}

fn reduced_with(cell: &MCell, fvals: &[u64]) -> Result<ReducedCount> {
    if cell.is_boundary() {
        return Err(Error::InvalidArgument(
            "the reduced count applies to unit cosets; use boundary_count for pΓ".into(),
        ));
    }
    let q = cell.p.get();
    let (slope, intercept) = cell.linear_form();
    let solutions: Vec<u64> = (0..q)
        .filter(|&b| fvals[b as usize] == add_mod(mul_mod(slope, b, q), intercept, q))
        .collect();
    let restricted = solutions.iter().filter(|&&b| b > 1).count() as u64;
    Ok(ReducedCount {
        unrestricted: solutions.len() as u64,
        restricted,
        solutions,
    })
}

/// Closed form for the `pΓ` cells: `[i ≢ s]` when `y ∈ pΓ`, `[s ≢ j]` when
/// `x ∈ pΓ`, and 0 when both are.
pub fn boundary_count(cell: &MCell) -> Option<u64> {
    let q = cell.p.get();
    match (cell.i, cell.j) {
        (0, 0) => Some(0),
        (i, 0) => Some(u64::from(i % q != cell.s % q)),
        (0, j) => Some(u64::from(cell.s % q != j % q)),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaFailure {
    pub i: u64,
    pub j: u64,
    pub lambda: u64,
    pub direct: u64,
    pub reduced: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DifferenceLemmaReport {
    pub p: u64,
    pub lambdas: usize,
    pub cases: u64,
    pub boundary_cases: u64,
    /// Cases where `b = 0` or `b = 1` solved the unrestricted equation.
    pub spurious_cases: u64,
    pub failures: Vec<LemmaFailure>,
}

impl DifferenceLemmaReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Units mod `p^2` to test: all of them, or `sample` drawn without
/// replacement from a seeded generator.
pub fn lambda_sample(p: Prime, sample: Option<usize>, seed: u64) -> Vec<u64> {
    let q = p.get();
    let mut units: Vec<u64> = (1..p.square()).filter(|x| x % q != 0).collect();
    if let Some(k) = sample {
        if k < units.len() {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            units.shuffle(&mut rng);
            units.truncate(k);
            units.sort_unstable();
        }
    }
    units
}

/// Direct count against the restricted reduced count for every
/// `(i, j) ∈ [p]^2` and every sampled `λ`, plus the `pΓ` cells against their
/// closed forms (each at most 1).
pub fn verify_difference_lemma(p: Prime, sample: Option<usize>, seed: u64) -> Result<DifferenceLemmaReport> {
    let q = p.get();
    let lambdas = lambda_sample(p, sample, seed);
    let fvals = f_values(p);
    let per_lambda = exec::map_slice(&lambdas, |&lambda| -> Result<(u64, u64, u64, Vec<LemmaFailure>)> {
        let (mut cases, mut boundary, mut spurious) = (0u64, 0u64, 0u64);
        let mut failures = Vec::new();
        for i in 0..=q {
            for j in 0..=q {
                let cell = MCell::new(p, i, j, lambda)?;
                let direct = m_cell_count_direct(&cell);
                let reduced = if cell.is_boundary() {
                    boundary += 1;
                    boundary_count(&cell).expect("boundary cell")
                } else {
                    cases += 1;
                    let r = reduced_with(&cell, &fvals)?;
                    if r.unrestricted != r.restricted {
                        spurious += 1;
                    }
                    r.restricted
                };
                if direct != reduced {
                    failures.push(LemmaFailure {
                        i,
                        j,
                        lambda,
                        direct,
                        reduced,
                    });
                }
            }
        }
        Ok((cases, boundary, spurious, failures))
    });
    let mut report = DifferenceLemmaReport {
        p: q,
        lambdas: lambdas.len(),
        cases: 0,
        boundary_cases: 0,
        spurious_cases: 0,
        failures: Vec::new(),
    };
    for r in per_lambda {
        let (c, b, s, f) = r?;
        report.cases += c;
        report.boundary_cases += b;
        report.spurious_cases += s;
        report.failures.extend(f);
    }
    Ok(report)
}

/// Distinct reduced points of a list of cells.
pub fn union_of_points(cells: &[MCell]) -> BTreeSet<u64> {
    cells.iter().flat_map(|c| c.reduced_points()).collect()
}
