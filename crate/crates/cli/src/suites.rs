//! The identity suites behind `verify`.

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use heilbronn_core::arith::mul_mod;
use heilbronn_core::group::build_gamma;
use heilbronn_core::heilbronn::{heilbronn_sum, mean_square_by_cosets, mean_square_direct};
use heilbronn_core::spectral::invariant::{gamma_energy, gamma_higher_energy, gamma_t_k, LabelMap};
use heilbronn_core::spectral::{energy, higher_energy, t_k, ResidueSet};
use heilbronn_core::stepanov::{derivative_decompose, f_poly, verify_difference_lemma, PolyFp};
use heilbronn_core::{Prime, Result};

/// Largest `p` for which the energy oracle enumerates tuples.
pub const BRUTE_ENERGY_LIMIT: u64 = 13;
/// Largest `p` for which every `a mod p^2` and every `r < p` is checked.
pub const EXHAUSTIVE_LIMIT: u64 = 211;
const PARTIAL_R: u64 = 64;
const SEED: u64 = 0x5eed;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteResult {
    pub suite: &'static str,
    pub cases: u64,
    pub failures: u64,
    pub detail: String,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

pub fn difference_lemma(p: Prime, sample: Option<usize>) -> Result<SuiteResult> {
    let sample = sample.or(if p.get() <= 7 { None } else { Some(50) });
    let r = verify_difference_lemma(p, sample, SEED)?;
    let detail = match r.failures.first() {
        Some(f) => format!(
            "i={} j={} lambda={}: direct {} != reduced {}",
            f.i, f.j, f.lambda, f.direct, f.reduced
        ),
        None => format!(
            "{} lambdas, {} boundary cells, {} cells with spurious b in {{0,1}}",
            r.lambdas, r.boundary_cases, r.spurious_cases
        ),
    };
    Ok(SuiteResult {
        suite: "difference-lemma",
        cases: r.cases + r.boundary_cases,
        failures: r.failures.len() as u64,
        detail,
    })
}

/// `E = #{a - b = c - d}` by enumerating quadruples.
pub fn brute_energy(g: &[u64], n: u64) -> BigUint {
    let mut count = 0u64;
    for &a in g {
        for &b in g {
            for &c in g {
                for &d in g {
                    if (a + n - b) % n == (c + n - d) % n {
                        count += 1;
                    }
                }
            }
        }
    }
    count.into()
}

/// `E_3 = #{a_1 - b_1 = a_2 - b_2 = a_3 - b_3}`, enumerating the first pair
/// and counting matching pairs for the other two.
pub fn brute_energy3(g: &[u64], n: u64) -> BigUint {
    let mut total = 0u64;
    for &a in g {
        for &b in g {
            let x = (a + n - b) % n;
            let mut c = 0u64;
            for &u in g {
                for &v in g {
                    if (u + n - v) % n == x {
                        c += 1;
                    }
                }
            }
            total += c * c;
        }
    }
    total.into()
}

/// `T_3 = #{a_1 + a_2 + a_3 = b_1 + b_2 + b_3}` over all six-tuples.
pub fn brute_t3(g: &[u64], n: u64) -> BigUint {
    let mut total = 0u64;
    for &a1 in g {
        for &a2 in g {
            for &a3 in g {
                let s = (a1 + a2 + a3) % n;
                for &b1 in g {
                    for &b2 in g {
                        for &b3 in g {
                            if (b1 + b2 + b3) % n == s {
                                total += 1;
                            }
                        }
                    }
                }
            }
        }
    }
    total.into()
}

/// Coset-compressed `E`, `E_3`, `T_3` against tuple enumeration
/// (`p <= 13`) or the dense convolution tables.
pub fn energy_oracle(p: Prime) -> Result<SuiteResult> {
    let map = LabelMap::new(p)?;
    let fast = [
        gamma_energy(&map),
        gamma_higher_energy(&map, 3)?,
        gamma_t_k(&map, 3)?,
    ];
    let g = build_gamma(p);
    let n = p.square();
    let (oracle, how) = if p.get() <= BRUTE_ENERGY_LIMIT {
        let e = g.elements();
        ([brute_energy(e, n), brute_energy3(e, n), brute_t3(e, n)], "tuple enumeration")
    } else {
        let set = ResidueSet::new(n, g.elements().iter().copied())?;
        (
            [energy(&set, &set)?, higher_energy(&set, &set, 3)?, t_k(&set, 3)?],
            "dense tables",
        )
    };
    let names = ["E", "E_3", "T_3"];
    let mismatches: Vec<String> = (0..3)
        .filter(|&k| fast[k] != oracle[k])
        .map(|k| format!("{}: {} vs {}", names[k], fast[k], oracle[k]))
        .collect();
    let detail = if mismatches.is_empty() {
        format!("E={} E_3={} T_3={} against {how}", fast[0], fast[1], fast[2])
    } else {
        mismatches.join("; ")
    };
    Ok(SuiteResult {
        suite: "energy-oracle",
        cases: 3,
        failures: mismatches.len() as u64,
        detail,
    })
}

/// Reality of `S(a)`, `S(ag) = S(a)` on 20 seeded pairs, and
/// `Σ |S(a)|^2 = p^3`.
pub fn heilbronn_invariants(p: Prime) -> Result<SuiteResult> {
    let q = p.get();
    let n = p.square();
    let mut cases = 0u64;
    let mut failures = 0u64;
    let mut notes = Vec::new();

    let exhaustive = q <= EXHAUSTIVE_LIMIT;
    let residues: Vec<u64> = if exhaustive {
        (0..n).collect()
    } else {
        (1..=q).map(|j| (1 + q * j) % n).chain([0, q]).collect()
    };
    let non_real = heilbronn_core::exec::map_slice(&residues, |&a| !heilbronn_sum(p, a).is_real(1e-9));
    cases += residues.len() as u64;
    let bad = non_real.iter().filter(|&&b| b).count() as u64;
    if bad > 0 {
        notes.push(format!("{bad} sums with nonzero imaginary part"));
    }
    failures += bad;

    let g = build_gamma(p);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for _ in 0..20 {
        let a = rng.gen_range(0..n);
        let h = g.elements()[rng.gen_range(0..g.len())];
        let lhs = heilbronn_sum(p, mul_mod(a, h, n)).value;
        let rhs = heilbronn_sum(p, a).value;
        cases += 1;
        if (lhs - rhs).norm() > 1e-9 * (1.0 + rhs.norm()) {
            failures += 1;
            notes.push(format!("S({a}·{h}) != S({a})"));
        }
    }

    let total = if exhaustive {
        mean_square_direct(p)
    } else {
        mean_square_by_cosets(p)
    };
    let cube = (q as f64).powi(3);
    cases += 1;
    if (total - cube).abs() > 1e-6 * cube {
        failures += 1;
        notes.push(format!("Σ|S|^2 = {total} != p^3"));
    }
    let detail = if notes.is_empty() {
        format!(
            "{} residues, 20 invariance pairs, Parseval {}",
            residues.len(),
            if exhaustive { "direct" } else { "by cosets" }
        )
    } else {
        notes.join("; ")
    };
    Ok(SuiteResult {
        suite: "heilbronn-invariants",
        cases,
        failures,
        detail,
    })
}

/// `(X(1-X))^r f^{(r)} = q_r + (X^p - X) h_r` with the degree bounds, and
/// `(q_1, h_1) = (0, -1)`.
pub fn derivative_identity(p: Prime) -> Result<SuiteResult> {
    let q = p.get();
    let r_max = if q <= EXHAUSTIVE_LIMIT { q - 1 } else { PARTIAL_R.min(q - 1) };
    let x_one_minus_x = PolyFp::new(p, vec![0, 1, q - 1]);
    let modulus = &PolyFp::monomial(p, 1, q as usize) - &PolyFp::monomial(p, 1, 1);
    let mut deriv = f_poly(p);
    let mut weight = PolyFp::constant(p, 1);
    let mut failures = 0u64;
    let mut first = None;
    for r in 1..=r_max {
        deriv = deriv.derivative();
        weight = &weight * &x_one_minus_x;
        let ok = match derivative_decompose(p, r) {
            Ok((qr, hr)) => {
                let degrees = qr.degree().map_or(true, |d| d as u64 <= r + 1)
                    && hr.degree().map_or(true, |d| d as u64 + 1 <= r);
                let closed = r != 1 || (qr.is_zero() && hr == PolyFp::constant(p, q - 1));
                degrees && closed && &weight * &deriv == &qr + &(&modulus * &hr)
            }
            Err(_) => false,
        };
        if !ok {
            failures += 1;
            first.get_or_insert(r);
        }
    }
    let detail = match first {
        Some(r) => format!("identity fails at r = {r}"),
        None => format!("r = 1..={r_max}"),
    };
    Ok(SuiteResult {
        suite: "derivative-decomposition",
        cases: r_max,
        failures,
        detail,
    })
}

pub fn run_all(p: Prime, sample: Option<usize>) -> Result<Vec<SuiteResult>> {
    Ok(vec![
        difference_lemma(p, sample)?,
        energy_oracle(p)?,
        heilbronn_invariants(p)?,
        derivative_identity(p)?,
    ])
}
