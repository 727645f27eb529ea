use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::Zero;

use super::table::CountTable;
use crate::error::{Error, Result};

/// Dyadic level sets `S_i = { x != 0 : 2^{i-1} d < ψ(x) <= 2^i d }`, `i >= 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelSetFamily {
    threshold: Ratio<BigUint>,
    sets: Vec<Vec<u64>>,
}

impl LevelSetFamily {
    pub fn threshold(&self) -> &Ratio<BigUint> {
        &self.threshold
    }

    /// Number of levels `l`; trailing empty levels are not kept.
    pub fn levels(&self) -> usize {
        self.sets.len()
    }

    /// `S_i` for `i ∈ [l]`, ascending elements. Empty for `i` beyond `l`.
    pub fn set(&self, i: usize) -> &[u64] {
        assert!(i >= 1, "levels are 1-based");
        self.sets.get(i - 1).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn sets(&self) -> &[Vec<u64>] {
        &self.sets
    }
}

/// Smallest `i >= 1` with `value <= 2^i · num / den`, given `value > num / den`.
fn level_of(value: &BigUint, num: &BigUint, den: &BigUint) -> usize {
    let lhs = value * den;
    let guess = (lhs.bits().saturating_sub(num.bits())).max(1) as usize;
    let mut i = guess.saturating_sub(1).max(1);
    while (num << i) < lhs {
        i += 1;
    }
    i
}

pub fn level_sets(psi: &CountTable, d: &Ratio<BigUint>) -> Result<LevelSetFamily> {
    if d.numer().is_zero() {
        return Err(Error::InvalidArgument("threshold d must be positive".into()));
    }
    let (num, den) = (d.numer(), d.denom());
    let mut sets: Vec<Vec<u64>> = Vec::new();
    for x in 1..psi.modulus() {
        if psi.is_zero_at(x) {
            continue;
        }
        let v = psi.get(x);
        if &v * den <= *num {
            continue;
        }
        let i = level_of(&v, num, den);
        if sets.len() < i {
            sets.resize(i, Vec::new());
        }
        sets[i - 1].push(x);
    }
    Ok(LevelSetFamily {
        threshold: d.clone(),
        sets,
    })
}
