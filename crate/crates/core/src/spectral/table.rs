use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest modulus for which dense tables are built (`8192^2`).
pub const DENSE_MODULUS_LIMIT: u64 = 8192 * 8192;

/// A subset of `Z_N`, sorted and deduplicated.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ResidueSet {
    modulus: u64,
    elements: Vec<u64>,
}

impl ResidueSet {
    /// Reduces every element mod `modulus`, then sorts and deduplicates.
    pub fn new(modulus: u64, elements: impl IntoIterator<Item = u64>) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::InvalidArgument("modulus must be positive".into()));
        }
        let mut elements: Vec<u64> = elements.into_iter().map(|x| x % modulus).collect();
        elements.sort_unstable();
        elements.dedup();
        Ok(ResidueSet { modulus, elements })
    }

    pub fn full(modulus: u64) -> Result<Self> {
        Self::new(modulus, 0..modulus)
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: u64) -> bool {
        self.elements.binary_search(&(x % self.modulus)).is_ok()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Values {
    Word(Vec<u64>),
    Big(Vec<BigUint>),
}

/// An exact nonnegative-integer-valued function on `Z_N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTable {
    modulus: u64,
    values: Values,
}

impl CountTable {
    pub fn zeros(modulus: u64) -> Result<Self> {
        check_dense(modulus)?;
        Ok(CountTable {
            modulus,
            values: Values::Word(vec![0; modulus as usize]),
        })
    }

    pub fn from_words(values: Vec<u64>) -> Result<Self> {
        let modulus = values.len() as u64;
        check_dense(modulus)?;
        if modulus == 0 {
            return Err(Error::InvalidArgument("empty table".into()));
        }
        Ok(CountTable {
            modulus,
            values: Values::Word(values),
        })
    }

    /// Builds from big entries, demoting to words when every entry fits.
    pub fn from_big(values: Vec<BigUint>) -> Result<Self> {
        let modulus = values.len() as u64;
        check_dense(modulus)?;
        if modulus == 0 {
            return Err(Error::InvalidArgument("empty table".into()));
        }
        let words: Option<Vec<u64>> = values.iter().map(|v| v.to_u64()).collect();
        Ok(CountTable {
            modulus,
            values: match words {
                Some(w) => Values::Word(w),
                None => Values::Big(values),
            },
        })
    }

    pub fn indicator(set: &ResidueSet) -> Result<Self> {
        let mut t = vec![0u64; set.modulus() as usize];
        check_dense(set.modulus())?;
        for &x in set.elements() {
            t[x as usize] = 1;
        }
        Self::from_words(t)
    }

    pub fn delta(modulus: u64, at: u64) -> Result<Self> {
        let mut t = Self::zeros(modulus)?;
        if let Values::Word(w) = &mut t.values {
            w[(at % modulus) as usize] = 1;
        }
        Ok(t)
    }

    pub(crate) fn raw(&self) -> &Values {
        &self.values
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn len(&self) -> usize {
        self.modulus as usize
    }

    pub fn is_empty(&self) -> bool {
        self.modulus == 0
    }

    /// Entries as machine words, when no entry needed promotion.
    pub fn words(&self) -> Option<&[u64]> {
        match &self.values {
            Values::Word(w) => Some(w),
            Values::Big(_) => None,
        }
    }

    pub fn is_promoted(&self) -> bool {
        matches!(self.values, Values::Big(_))
    }

    pub fn get(&self, x: u64) -> BigUint {
        let i = (x % self.modulus) as usize;
        match &self.values {
            Values::Word(w) => BigUint::from(w[i]),
            Values::Big(b) => b[i].clone(),
        }
    }

    pub fn get_u64(&self, x: u64) -> Option<u64> {
        let i = (x % self.modulus) as usize;
        match &self.values {
            Values::Word(w) => Some(w[i]),
            Values::Big(b) => b[i].to_u64(),
        }
    }

    pub fn is_zero_at(&self, x: u64) -> bool {
        let i = (x % self.modulus) as usize;
        match &self.values {
            Values::Word(w) => w[i] == 0,
            Values::Big(b) => b[i].is_zero(),
        }
    }

    /// Indices with a nonzero entry, ascending.
    pub fn support(&self) -> Vec<u64> {
        (0..self.modulus).filter(|&x| !self.is_zero_at(x)).collect()
    }

    pub fn to_big(&self) -> Vec<BigUint> {
        match &self.values {
            Values::Word(w) => w.iter().map(|&v| BigUint::from(v)).collect(),
            Values::Big(b) => b.clone(),
        }
    }

    pub fn to_f64(&self) -> Vec<f64> {
        match &self.values {
            Values::Word(w) => w.iter().map(|&v| v as f64).collect(),
            Values::Big(b) => b.iter().map(|v| v.to_f64().unwrap_or(f64::INFINITY)).collect(),
        }
    }

    pub fn total(&self) -> BigUint {
        self.power_sum(1)
    }

    pub fn sum_squares(&self) -> BigUint {
        self.power_sum(2)
    }

    /// `Σ_x t(x)^k`.
    pub fn power_sum(&self, k: u32) -> BigUint {
        match &self.values {
            Values::Word(w) => power_sum_words(w, k),
            Values::Big(b) => b.iter().map(|v| v.pow(k)).sum(),
        }
    }

    /// `Σ_x self(x) · other(x)^k`.
    pub fn weighted_power_sum(&self, other: &CountTable, k: u32) -> Result<BigUint> {
        same_modulus(self.modulus, other.modulus)?;
        if let (Values::Word(a), Values::Word(b)) = (&self.values, &other.values) {
            let mut acc: u128 = 0;
            let fast = a.iter().zip(b).try_for_each(|(&x, &y)| {
                let term = (y as u128).checked_pow(k)?.checked_mul(x as u128)?;
                acc = acc.checked_add(term)?;
                Some(())
            });
            if fast.is_some() {
                return Ok(BigUint::from(acc));
            }
        }
        Ok((0..self.modulus)
            .filter(|&x| !self.is_zero_at(x))
            .map(|x| self.get(x) * other.get(x).pow(k))
            .sum())
    }

    /// `t(-x) = t(x)` for every `x`.
    pub fn is_even(&self) -> bool {
        let n = self.modulus;
        (1..n).all(|x| match &self.values {
            Values::Word(w) => w[x as usize] == w[(n - x) as usize],
            Values::Big(b) => b[x as usize] == b[(n - x) as usize],
        })
    }

    pub fn max(&self) -> BigUint {
        match &self.values {
            Values::Word(w) => BigUint::from(w.iter().copied().max().unwrap_or(0)),
            Values::Big(b) => b.iter().max().cloned().unwrap_or_default(),
        }
    }
}

fn power_sum_words(w: &[u64], k: u32) -> BigUint {
    let mut acc: u128 = 0;
    let fast = w.iter().try_for_each(|&v| {
        acc = acc.checked_add((v as u128).checked_pow(k)?)?;
        Some(())
    });
    match fast {
        Some(()) => BigUint::from(acc),
        None => w.iter().map(|&v| BigUint::from(v).pow(k)).sum(),
    }
}

pub(crate) fn check_dense(modulus: u64) -> Result<()> {
    if modulus > DENSE_MODULUS_LIMIT {
        return Err(Error::MemoryCap {
            entries: modulus as u128,
            cap: DENSE_MODULUS_LIMIT as u128,
        });
    }
    Ok(())
}

pub(crate) fn same_modulus(a: u64, b: u64) -> Result<()> {
    if a != b {
        return Err(Error::ModulusMismatch(a, b));
    }
    Ok(())
}
