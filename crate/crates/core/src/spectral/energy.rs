use num_bigint::BigUint;

use super::convolution::{correlate, iterated_convolution};
use super::table::{same_modulus, CountTable, ResidueSet};
use crate::error::{Error, Result};

/// The three expressions for `E(A, B)`:
/// `Σ (A*B)^2`, `Σ (A∘B)^2`, `Σ (A∘A)(B∘B)`.
pub fn energy_forms(a: &ResidueSet, b: &ResidueSet) -> Result<[BigUint; 3]> {
    same_modulus(a.modulus(), b.modulus())?;
    let ia = CountTable::indicator(a)?;
    let ib = CountTable::indicator(b)?;
    let sum = super::convolve(&ia, &ib)?.sum_squares();
    let diff = correlate(&ia, &ib)?.sum_squares();
    let aa = correlate(&ia, &ia)?;
    let bb = correlate(&ib, &ib)?;
    let mixed = aa.weighted_power_sum(&bb, 1)?;
    Ok([sum, diff, mixed])
}

/// Additive energy `E(A, B) = |{a1 + b1 = a2 + b2}|`.
pub fn energy(a: &ResidueSet, b: &ResidueSet) -> Result<BigUint> {
    same_modulus(a.modulus(), b.modulus())?;
    let e = correlate(&CountTable::indicator(a)?, &CountTable::indicator(b)?)?.sum_squares();
    #[cfg(debug_assertions)]
    {
        let forms = energy_forms(a, b)?;
        debug_assert!(forms.iter().all(|f| *f == e), "energy forms disagree: {forms:?}");
    }
    Ok(e)
}

/// `E_k(A, B) = Σ_x (A∘A)(x) (B∘B)(x)^{k-1}`; `E_k(A)` when `b == a`.
pub fn higher_energy(a: &ResidueSet, b: &ResidueSet, k: u32) -> Result<BigUint> {
    if k < 2 {
        return Err(Error::InvalidArgument("k must be at least 2".into()));
    }
    same_modulus(a.modulus(), b.modulus())?;
    let ia = CountTable::indicator(a)?;
    let aa = correlate(&ia, &ia)?;
    if a == b {
        return Ok(aa.power_sum(k));
    }
    let ib = CountTable::indicator(b)?;
    let bb = correlate(&ib, &ib)?;
    aa.weighted_power_sum(&bb, k - 1)
}

/// `T_k(A)`, the number of `2k`-tuples with `a_1+…+a_k = a'_1+…+a'_k`.
pub fn t_k(a: &ResidueSet, k: u32) -> Result<BigUint> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    Ok(iterated_convolution(a, k)?.sum_squares())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Prime;
    use crate::group::build_gamma;
    use proptest::prelude::*;

    fn gamma_set(p: u64) -> ResidueSet {
        let g = build_gamma(Prime::new(p).unwrap());
        ResidueSet::new(g.modulus(), g.elements().iter().copied()).unwrap()
    }

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    /// Counts `(x_1..x_k, y_1..y_k)` with equal sums by plain enumeration.
    fn brute_t_k(a: &ResidueSet, k: usize) -> u64 {
        let n = a.modulus();
        let e = a.elements();
        let tuples = e.len().pow(2 * k as u32);
        let mut count = 0;
        for mut code in 0..tuples {
            let mut lhs = 0;
            let mut rhs = 0;
            for slot in 0..2 * k {
                let v = e[code % e.len()];
                code /= e.len();
                if slot < k {
                    lhs += v;
                } else {
                    rhs += v;
                }
            }
            if lhs % n == rhs % n {
                count += 1;
            }
        }
        count
    }

    fn brute_energy(a: &ResidueSet, b: &ResidueSet) -> u64 {
        let n = a.modulus();
        let mut count = 0;
        for &a1 in a.elements() {
            for &a2 in a.elements() {
                for &b1 in b.elements() {
                    for &b2 in b.elements() {
                        if (a1 + b1) % n == (a2 + b2) % n {
                            count += 1;
                        }
                    }
                }
            }
        }
        count
    }

    #[test]
    fn gamma_p5_values() {
        let g = gamma_set(5);
        assert_eq!(energy(&g, &g).unwrap(), big(36));
        assert_eq!(brute_energy(&g, &g), 36);
        assert_eq!(higher_energy(&g, &g, 3).unwrap(), big(100));
        assert_eq!(t_k(&g, 2).unwrap(), big(36));
        assert_eq!(t_k(&g, 1).unwrap(), big(4));
    }

    #[test]
    fn t3_gamma_p3() {
        let g = gamma_set(3);
        assert_eq!(brute_t_k(&g, 3), 20);
        assert_eq!(t_k(&g, 3).unwrap(), big(20));
    }

    #[test]
    fn trivial_energies() {
        let single = ResidueSet::new(17, [5]).unwrap();
        assert_eq!(energy(&single, &single).unwrap(), big(1));
        for k in 2..6 {
            assert_eq!(higher_energy(&single, &single, k).unwrap(), big(1));
        }
        let full = ResidueSet::full(11).unwrap();
        assert_eq!(energy(&full, &full).unwrap(), big(11 * 11 * 11));
        assert!(higher_energy(&single, &single, 1).is_err());
        assert!(t_k(&single, 0).is_err());
    }

    #[test]
    fn e2_is_energy() {
        let a = ResidueSet::new(30, [1, 4, 9, 16, 25, 6]).unwrap();
        let b = ResidueSet::new(30, [0, 2, 3, 5, 7, 11, 13]).unwrap();
        assert_eq!(higher_energy(&a, &b, 2).unwrap(), energy(&a, &b).unwrap());
        assert_eq!(higher_energy(&a, &a, 2).unwrap(), energy(&a, &a).unwrap());
    }

    #[test]
    fn t_k_matches_enumeration() {
        let sets = [
            ResidueSet::new(13, [0, 1, 3, 9]).unwrap(),
            ResidueSet::new(20, [2, 5, 7, 11, 19, 4]).unwrap(),
            ResidueSet::new(9, [1, 2, 4, 8, 7]).unwrap(),
        ];
        for a in &sets {
            for k in 1..=3 {
                assert_eq!(t_k(a, k).unwrap(), big(brute_t_k(a, k as usize)), "{a:?} k={k}");
            }
        }
    }

    fn arb_pair() -> impl Strategy<Value = (u64, Vec<u64>, Vec<u64>)> {
        (2u64..=50).prop_flat_map(|n| {
            (
                Just(n),
                prop::collection::vec(0..n, 1..12),
                prop::collection::vec(0..n, 1..12),
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn energy_forms_agree((n, a, b) in arb_pair()) {
            let a = ResidueSet::new(n, a).unwrap();
            let b = ResidueSet::new(n, b).unwrap();
            let [s, d, m] = energy_forms(&a, &b).unwrap();
            prop_assert_eq!(&s, &d);
            prop_assert_eq!(&d, &m);
            prop_assert_eq!(s, big(brute_energy(&a, &b)));
        }

        #[test]
        fn energy_bounds((n, a, _b) in arb_pair()) {
            let a = ResidueSet::new(n, a).unwrap();
            let e = energy(&a, &a).unwrap();
            let size = a.len() as u64;
            prop_assert!(e >= big(size * size));
            prop_assert!(e <= big(size * size * size));
        }
    }
}
