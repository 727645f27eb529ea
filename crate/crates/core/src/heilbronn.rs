//! Heilbronn sums `S(a) = Σ_{n=1}^{p} e(a n^p / p^2)` and bound-ratio reports.
//!
//! Phases are reduced exactly mod `p^2` before being mapped to the unit
//! circle. `S(ag) = S(a)` for `g ∈ Γ` (substitute `n -> ng`), so scans over
//! `a` only visit the `p` coset representatives `ξ_j`.

use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use crate::arith::{mul_mod, pow_mod, Prime};
use crate::error::{Error, Result};
use crate::exec;
use crate::group::CosetLabel;
use crate::spectral::invariant::{gamma_autocorrelation, gamma_t_k, LabelMap};

/// Default largest `p` for which [`scan_bounds`] computes energies.
pub const DEFAULT_SCAN_CAP: u64 = 2003;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SumResult {
    pub p: Prime,
    pub a: u64,
    pub value: Complex64,
}

impl SumResult {
    pub fn abs(&self) -> f64 {
        self.value.norm()
    }

    /// `|Im S(a)| <= tol · (1 + |S(a)|)`.
    pub fn is_real(&self, tol: f64) -> bool {
        self.value.im.abs() <= tol * (1.0 + self.abs())
    }
}

/// `e(num / den)` with `num` already reduced mod `den`.
#[inline]
fn circle(num: u64, den: u64) -> Complex64 {
    // symmetric reduction keeps the angle in (-π, π]
    let signed = if num > den / 2 {
        -((den - num) as f64)
    } else {
        num as f64
    };
    Complex64::from_polar(1.0, TAU * signed / den as f64)
}

/// `Σ_{n=m}^{m+len-1} e(a n^p / p^2)`: exactly `len` terms starting at `m`.
pub fn interval_sum(p: Prime, a: u64, m: u64, len: u64) -> Result<Complex64> {
    if len == 0 || len > p.get() {
        return Err(Error::InvalidArgument(format!(
            "interval length {len} must lie in [1, {}]",
            p.get()
        )));
    }
    if m == 0 {
        return Err(Error::InvalidArgument("interval start must be at least 1".into()));
    }
    let q = p.get();
    let n2 = p.square();
    let a = a % n2;
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..len {
        let n = (m % n2 + k) % n2;
        let phase = mul_mod(a, pow_mod(n, q, n2), n2);
        acc += circle(phase, n2);
    }
    Ok(acc)
}

pub fn heilbronn_sum(p: Prime, a: u64) -> SumResult {
    let value = interval_sum(p, a, 1, p.get()).expect("full range is valid");
    SumResult { p, a: a % p.square(), value }
}

/// `S(ξ_j)` for `j = 1..=p`, which covers every unit `a`.
pub fn coset_sums(p: Prime) -> Vec<SumResult> {
    exec::map_range(p.get() as usize, |j| {
        heilbronn_sum(p, CosetLabel::Unit(j as u64 + 1).representative(p))
    })
}

/// `Σ_{a mod p^2} |S(a)|^2` by direct evaluation of all `p^2` sums.
pub fn mean_square_direct(p: Prime) -> f64 {
    let sums = exec::map_range(p.square() as usize, |a| heilbronn_sum(p, a as u64).value.norm_sqr());
    sums.iter().sum()
}

/// The same total from one sum per coset: `S(0) = p`, `S` vanishes on `pΓ`,
/// and units contribute `(p-1) Σ_j |S(ξ_j)|^2`.
pub fn mean_square_by_cosets(p: Prime) -> f64 {
    mean_square_from(p, &coset_sums(p))
}

fn mean_square_from(p: Prime, sums: &[SumResult]) -> f64 {
    let q = p.get() as f64;
    let units: f64 = sums.iter().map(|s| s.value.norm_sqr()).sum();
    let pc = heilbronn_sum(p, p.get()).value.norm_sqr();
    q * q + (q - 1.0) * (units + pc)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundRow {
    pub quantity: String,
    /// Exact integer, or a decimal for floating-point quantities.
    pub value: String,
    pub bound_formula: String,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub p: u64,
    pub rows: Vec<BoundRow>,
}

impl BoundReport {
    pub fn row(&self, quantity: &str, bound_formula: &str) -> Option<&BoundRow> {
        self.rows
            .iter()
            .find(|r| r.quantity == quantity && r.bound_formula == bound_formula)
    }
}

fn big_f64(v: &BigUint) -> f64 {
    v.to_f64().unwrap_or(f64::INFINITY)
}

fn row(quantity: &str, value: String, formula: &str, numerator: f64, bound: f64) -> BoundRow {
    BoundRow {
        quantity: quantity.to_string(),
        value,
        bound_formula: formula.to_string(),
        ratio: numerator / bound,
    }
}

/// Exact `E(Γ)`, `E_3(Γ)`, `T_3(Γ)` and `max_a |S(a)|`, each against the
/// shape of its asymptotic bound. Logarithms are base 2.
pub fn scan_bounds(p: Prime, cap: u64) -> Result<BoundReport> {
    if p.get() > cap {
        return Err(Error::TooLarge {
            p: p.get(),
            limit: cap,
            what: "energy rows of the bound scan",
        });
    }
    let q = p.get() as f64;
    let t = q - 1.0;
    let log_p = q.log2();
    let log_t = t.log2();

    let map = LabelMap::new(p)?;
    let corr = gamma_autocorrelation(&map);
    let e2 = corr.power_sum(2);
    let e3 = corr.power_sum(3);
    let t3 = gamma_t_k(&map, 3)?;

    let sums = coset_sums(p);
    let max_abs = sums.iter().map(SumResult::abs).fold(0.0, f64::max);
    let total = mean_square_from(p, &sums);

    let (e2f, e3f, t3f) = (big_f64(&e2), big_f64(&e3), big_f64(&t3));
    let rows = vec![
        row(
            "max_abs_S",
            format!("{max_abs:.12}"),
            "p^(31/36) log^(1/6) p",
            max_abs,
            q.powf(31.0 / 36.0) * log_p.powf(1.0 / 6.0),
        ),
        row(
            "max_abs_S",
            format!("{max_abs:.12}"),
            "E(G)^(1/4) p^(1/4)",
            max_abs,
            e2f.powf(0.25) * q.powf(0.25),
        ),
        row(
            "E",
            e2.to_string(),
            "p^(22/9) log^(2/3) p",
            e2f,
            q.powf(22.0 / 9.0) * log_p.powf(2.0 / 3.0),
        ),
        row("E", e2.to_string(), "|G|^(5/2)", e2f, t.powf(2.5)),
        row(
            "E_3",
            e3.to_string(),
            "|G|^3 log|G|",
            e3f,
            t.powi(3) * log_t.max(f64::MIN_POSITIVE),
        ),
        row(
            "T_3",
            t3.to_string(),
            "t^(151/36) log^(2/3) t",
            t3f,
            t.powf(151.0 / 36.0) * log_t.powf(2.0 / 3.0).max(f64::MIN_POSITIVE),
        ),
        row("sum_abs_S_sq", format!("{total:.6}"), "p^3", total, q.powi(3)),
    ];
    Ok(BoundReport { p: p.get(), rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::primes_in_range;
    use crate::group::build_gamma;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn p(v: u64) -> Prime {
        Prime::new(v).unwrap()
    }

    #[test]
    fn small_values() {
        let s = heilbronn_sum(p(3), 1);
        let expected = 1.0 + 2.0 * (2.0 * PI / 9.0).cos();
        assert!((s.value.re - expected).abs() < 1e-12);
        assert!((expected - 2.532_088_886).abs() < 1e-9);
        let s2 = heilbronn_sum(p(3), 2);
        let expected2 = 1.0 + 2.0 * (4.0 * PI / 9.0).cos();
        assert!((s2.value.re - expected2).abs() < 1e-12);
        assert!((expected2 - 1.347_296_355).abs() < 1e-9);
        for q in [3u64, 5, 7, 101] {
            let s0 = heilbronn_sum(p(q), 0);
            assert!((s0.value - Complex64::new(q as f64, 0.0)).norm() < 1e-9);
        }
    }

    #[test]
    fn interval_examples() {
        let pr = p(5);
        let full = interval_sum(pr, 3, 1, 5).unwrap();
        assert_eq!(full, heilbronn_sum(pr, 3).value);
        let one = interval_sum(pr, 3, 4, 1).unwrap();
        assert!((one.norm() - 1.0).abs() < 1e-12);
        let two = interval_sum(pr, 1, 2, 2).unwrap();
        let expected = Complex64::from_polar(1.0, TAU * 7.0 / 25.0)
            + Complex64::from_polar(1.0, TAU * 18.0 / 25.0);
        assert!((two - expected).norm() < 1e-12);
        assert!(interval_sum(pr, 1, 1, 6).is_err());
        assert!(interval_sum(pr, 1, 1, 0).is_err());
        // ranges past p wrap through n mod p^2
        let far = interval_sum(pr, 1, 26, 2).unwrap();
        assert!((far - interval_sum(pr, 1, 1, 2).unwrap()).norm() < 1e-12);
    }

    #[test]
    fn sums_are_real() {
        for pr in primes_in_range(3, 31) {
            for a in 0..pr.square() {
                assert!(heilbronn_sum(pr, a).is_real(1e-9), "p={pr} a={a}");
            }
        }
    }

    #[test]
    fn invariant_under_gamma() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for pr in primes_in_range(3, 31) {
            let g = build_gamma(pr);
            for _ in 0..20 {
                let a = rng.gen_range(0..pr.square());
                let h = g.elements()[rng.gen_range(0..g.len())];
                let lhs = heilbronn_sum(pr, mul_mod(a, h, pr.square())).value;
                let rhs = heilbronn_sum(pr, a).value;
                assert!((lhs - rhs).norm() <= 1e-9 * (1.0 + rhs.norm()));
            }
        }
    }

    #[test]
    fn parseval() {
        for pr in primes_in_range(3, 31) {
            let q = pr.get() as f64;
            let direct = mean_square_direct(pr);
            assert!((direct - q.powi(3)).abs() <= 1e-6 * q.powi(3), "p={pr}");
            let by_cosets = mean_square_by_cosets(pr);
            assert!((by_cosets - q.powi(3)).abs() <= 1e-6 * q.powi(3));
        }
    }

    #[test]
    fn scan_p5() {
        let r = scan_bounds(p(5), DEFAULT_SCAN_CAP).unwrap();
        let e = r.row("E", "|G|^(5/2)").unwrap();
        assert_eq!(e.value, "36");
        assert!((e.ratio - 1.125).abs() < 1e-12);
        assert_eq!(r.row("E_3", "|G|^3 log|G|").unwrap().value, "100");
        let pars = r.row("sum_abs_S_sq", "p^3").unwrap();
        assert!((pars.ratio - 1.0).abs() < 1e-6);
        assert!(r.rows.iter().all(|row| row.ratio.is_finite() && row.ratio >= 0.0));
        assert!(scan_bounds(p(2011), DEFAULT_SCAN_CAP).is_err());
    }

    #[test]
    fn scan_visits_one_sum_per_coset() {
        let pr = p(11);
        let sums = coset_sums(pr);
        assert_eq!(sums.len(), 11);
        let brute = (1..pr.square())
            .filter(|a| a % 11 != 0)
            .map(|a| heilbronn_sum(pr, a).abs())
            .fold(0.0, f64::max);
        let fast = sums.iter().map(SumResult::abs).fold(0.0, f64::max);
        assert!((brute - fast).abs() < 1e-9);
    }
}
