use num_bigint::BigUint;

use super::table::{same_modulus, ResidueSet};
use crate::error::{Error, Result};

/// Default cap on the number of entries of a `C_k` table.
pub const DEFAULT_CK_CAP: u128 = 1 << 26;

/// `C_k(f_0, …, f_{k-1})(x_1, …, x_{k-1}) = Σ_z f_0(z) f_1(z + x_1) ⋯ f_{k-1}(z + x_{k-1})`
/// for indicator functions, stored row-major in `(x_1, …, x_{k-1})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralizedConvolution {
    modulus: u64,
    arity: usize,
    values: Vec<u64>,
}

impl GeneralizedConvolution {
    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// `k`.
    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn get(&self, shifts: &[u64]) -> u64 {
        assert_eq!(shifts.len(), self.arity - 1, "expected k - 1 shifts");
        let idx = shifts
            .iter()
            .fold(0usize, |acc, &s| acc * self.modulus as usize + (s % self.modulus) as usize);
        self.values[idx]
    }

    pub fn sum_squares(&self) -> BigUint {
        self.values.iter().map(|&v| BigUint::from(v) * v).sum()
    }
}

pub fn c_k(sets: &[ResidueSet], cap: u128) -> Result<GeneralizedConvolution> {
    let k = sets.len();
    if k < 2 {
        return Err(Error::InvalidArgument("C_k needs at least two functions".into()));
    }
    let n = sets[0].modulus();
    for s in &sets[1..] {
        same_modulus(n, s.modulus())?;
    }
    let entries = (n as u128).checked_pow(k as u32 - 1).unwrap_or(u128::MAX);
    if entries > cap {
        return Err(Error::MemoryCap { entries, cap });
    }
    let mut values = vec![0u64; entries as usize];

    // For each base point z, every tuple of shifts x_i = a_i - z with a_i ∈ f_i.
    let rest = &sets[1..];
    let mut cursor = vec![0usize; rest.len()];
    for &z in sets[0].elements() {
        if rest.iter().any(|s| s.is_empty()) {
            break;
        }
        cursor.iter_mut().for_each(|c| *c = 0);
        'tuples: loop {
            let idx = rest.iter().zip(&cursor).fold(0usize, |acc, (s, &c)| {
                let shift = (s.elements()[c] + n - z) % n;
                acc * n as usize + shift as usize
            });
            values[idx] += 1;
            // odometer over the k - 1 cursors
            let mut pos = rest.len();
            loop {
                if pos == 0 {
                    break 'tuples;
                }
                pos -= 1;
                cursor[pos] += 1;
                if cursor[pos] < rest[pos].len() {
                    continue 'tuples;
                }
                cursor[pos] = 0;
            }
        }
    }
    Ok(GeneralizedConvolution {
        modulus: n,
        arity: k,
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Prime;
    use crate::group::build_gamma;
    use crate::spectral::{correlate, higher_energy, CountTable};

    #[test]
    fn c2_is_correlation() {
        let a = ResidueSet::new(15, [0, 2, 3, 7, 11]).unwrap();
        let b = ResidueSet::new(15, [1, 2, 5, 14]).unwrap();
        let c2 = c_k(&[a.clone(), b.clone()], DEFAULT_CK_CAP).unwrap();
        let corr = correlate(&CountTable::indicator(&a).unwrap(), &CountTable::indicator(&b).unwrap()).unwrap();
        for x in 0..15 {
            assert_eq!(c2.get(&[x]), corr.get_u64(x).unwrap());
        }
    }

    #[test]
    fn c3_squares_sum_to_e3() {
        let g = build_gamma(Prime::new(5).unwrap());
        let gamma = ResidueSet::new(25, g.elements().iter().copied()).unwrap();
        let c3 = c_k(&[gamma.clone(), gamma.clone(), gamma.clone()], DEFAULT_CK_CAP).unwrap();
        assert_eq!(c3.sum_squares(), BigUint::from(100u32));
        assert_eq!(higher_energy(&gamma, &gamma, 3).unwrap(), BigUint::from(100u32));
    }

    #[test]
    fn c3_of_a_point() {
        let zero = ResidueSet::new(7, [0]).unwrap();
        let c3 = c_k(&[zero.clone(), zero.clone(), zero], DEFAULT_CK_CAP).unwrap();
        for x1 in 0..7 {
            for x2 in 0..7 {
                assert_eq!(c3.get(&[x1, x2]), u64::from(x1 == 0 && x2 == 0));
            }
        }
    }

    #[test]
    fn cap_is_enforced() {
        let a = ResidueSet::new(100, [1]).unwrap();
        let err = c_k(&[a.clone(), a.clone(), a.clone(), a], 1 << 19).unwrap_err();
        assert!(matches!(err, Error::MemoryCap { .. }));
    }
}
