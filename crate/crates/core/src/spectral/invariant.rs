//! Functions on `Z_{p^2}` that are constant on each piece of
//! `{0} ⊔ pΓ ⊔ ξ_1Γ ⊔ … ⊔ ξ_pΓ`.
//!
//! Every iterated convolution `Γ *_{d-1} Γ` and every `ψ_k` is such a
//! function, so it is determined by `p + 2` values. Convolving with `Γ`
//! then costs `O(p^2)` instead of `O(p^3)` (or `O(p^4)` dense), which is
//! what makes scans up to `p ≈ 2000` cheap.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use super::table::{check_dense, CountTable};
use crate::arith::{mul_mod, Prime};
use crate::error::{Error, Result};
use crate::exec;
use crate::group::{build_gamma, classify, label_count, CosetLabel};

/// Dense `x -> label index` lookup for all of `Z_{p^2}`.
#[derive(Debug, Clone)]
pub struct LabelMap {
    p: Prime,
    labels: Vec<u16>,
}

impl LabelMap {
    /// Built by enumerating `ξ_j · g`, one multiplication per residue.
    pub fn new(p: Prime) -> Result<Self> {
        let n = p.square();
        check_dense(n)?;
        let q = p.get();
        let gamma = build_gamma(p);
        let mut labels = vec![0u16; n as usize];
        labels[0] = CosetLabel::Zero.index(p) as u16;
        for j in 1..=q {
            let xi = (1 + q * j) % n;
            let idx = CosetLabel::Unit(j).index(p) as u16;
            for &g in gamma.elements() {
                labels[mul_mod(xi, g, n) as usize] = idx;
            }
        }
        let pc = CosetLabel::PCoset.index(p) as u16;
        for m in 1..q {
            labels[(m * q) as usize] = pc;
        }
        Ok(LabelMap { p, labels })
    }

    #[inline]
    pub fn index(&self, x: u64) -> usize {
        self.labels[x as usize] as usize
    }

    pub fn label(&self, x: u64) -> CosetLabel {
        CosetLabel::from_index(self.index(x), self.p)
    }

    pub fn p(&self) -> Prime {
        self.p
    }
}

/// A coset-constant function on `Z_{p^2}`, one exact value per label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassTable {
    p: Prime,
    values: Vec<BigUint>,
}

impl ClassTable {
    pub fn from_values(p: Prime, values: Vec<BigUint>) -> Result<Self> {
        if values.len() != label_count(p) {
            return Err(Error::InvalidArgument(format!(
                "expected {} class values, got {}",
                label_count(p),
                values.len()
            )));
        }
        Ok(ClassTable { p, values })
    }

    /// Indicator of `Γ = ξ_p Γ`.
    pub fn gamma_indicator(p: Prime) -> Self {
        let mut values = vec![BigUint::zero(); label_count(p)];
        values[CosetLabel::Unit(p.get()).index(p)] = BigUint::from(1u32);
        ClassTable { p, values }
    }

    pub fn p(&self) -> Prime {
        self.p
    }

    pub fn value(&self, label: CosetLabel) -> &BigUint {
        &self.values[label.index(self.p)]
    }

    pub fn values(&self) -> &[BigUint] {
        &self.values
    }

    pub fn at(&self, x: u64) -> &BigUint {
        self.value(classify(self.p, x))
    }

    fn words(&self) -> Option<Vec<u64>> {
        self.values.iter().map(|v| v.to_u64()).collect()
    }

    /// `(F * Γ)(x) = Σ_{g∈Γ} F(x - g)`, evaluated at one representative per label.
    pub fn convolve_gamma(&self, map: &LabelMap) -> ClassTable {
        let p = self.p;
        let n = p.square();
        let gamma = build_gamma(p);
        let counts: Vec<Vec<u64>> = exec::map_range(label_count(p), |li| {
            let x = CosetLabel::from_index(li, p).representative(p);
            let mut cnt = vec![0u64; label_count(p)];
            for &g in gamma.elements() {
                cnt[map.index((x + n - g) % n)] += 1;
            }
            cnt
        });
        self.combine(&counts)
    }

    /// `(Γ ∘ F)(x) = Σ_{g∈Γ} F(g + x)`.
    pub fn correlate_gamma(&self, map: &LabelMap) -> ClassTable {
        let p = self.p;
        let n = p.square();
        let gamma = build_gamma(p);
        let counts: Vec<Vec<u64>> = exec::map_range(label_count(p), |li| {
            let x = CosetLabel::from_index(li, p).representative(p);
            let mut cnt = vec![0u64; label_count(p)];
            for &g in gamma.elements() {
                cnt[map.index((g + x) % n)] += 1;
            }
            cnt
        });
        self.combine(&counts)
    }

    fn combine(&self, counts: &[Vec<u64>]) -> ClassTable {
        let values = counts
            .iter()
            .map(|cnt| {
                cnt.iter()
                    .zip(&self.values)
                    .filter(|(c, _)| **c > 0)
                    .map(|(&c, v)| v * c)
                    .sum()
            })
            .collect();
        ClassTable { p: self.p, values }
    }

    /// `(F ∘ F)(x) = Σ_y F(y) F(y + x)`, summing over all of `Z_{p^2}`.
    pub fn self_correlation(&self, map: &LabelMap) -> ClassTable {
        let p = self.p;
        let n = p.square();
        let words = self.words();
        let values = exec::map_range(label_count(p), |li| {
            let x = CosetLabel::from_index(li, p).representative(p);
            if let Some(w) = &words {
                let mut acc: u128 = 0;
                let fast = (0..n).try_for_each(|y| {
                    let a = w[map.index(y)];
                    if a != 0 {
                        let b = w[map.index((y + x) % n)];
                        acc = acc.checked_add((a as u128).checked_mul(b as u128)?)?;
                    }
                    Some(())
                });
                if fast.is_some() {
                    return BigUint::from(acc);
                }
            }
            // pair counts by label, then weight
            let mut pairs = std::collections::BTreeMap::<(usize, usize), u64>::new();
            for y in 0..n {
                *pairs.entry((map.index(y), map.index((y + x) % n))).or_default() += 1;
            }
            pairs
                .into_iter()
                .map(|((a, b), c)| &self.values[a] * &self.values[b] * c)
                .sum()
        });
        ClassTable { p, values }
    }

    /// `Σ_x F(x)^k` over all of `Z_{p^2}`.
    pub fn power_sum(&self, k: u32) -> BigUint {
        (0..self.values.len())
            .map(|i| self.values[i].pow(k) * CosetLabel::from_index(i, self.p).size(self.p))
            .sum()
    }

    /// `Σ_x F(x) G(x)^k`.
    pub fn weighted_power_sum(&self, other: &ClassTable, k: u32) -> BigUint {
        (0..self.values.len())
            .map(|i| {
                &self.values[i]
                    * other.values[i].pow(k)
                    * CosetLabel::from_index(i, self.p).size(self.p)
            })
            .sum()
    }

    pub fn to_dense(&self, map: &LabelMap) -> Result<CountTable> {
        let n = self.p.square();
        match self.words() {
            Some(w) => CountTable::from_words((0..n).map(|x| w[map.index(x)]).collect()),
            None => CountTable::from_big((0..n).map(|x| self.values[map.index(x)].clone()).collect()),
        }
    }

    /// True when `dense` is constant on every label and agrees with `self`.
    pub fn matches_dense(&self, dense: &CountTable, map: &LabelMap) -> bool {
        dense.modulus() == self.p.square()
            && (0..dense.modulus()).all(|x| dense.get(x) == self.values[map.index(x)])
    }
}

/// `Γ *_{d-1} Γ`, the `d`-fold sum count.
pub fn gamma_iterated(map: &LabelMap, d: u32) -> Result<ClassTable> {
    if d == 0 {
        return Err(Error::InvalidArgument("d must be at least 1".into()));
    }
    let mut acc = ClassTable::gamma_indicator(map.p());
    for _ in 1..d {
        acc = acc.convolve_gamma(map);
    }
    Ok(acc)
}

/// `Γ ∘ Γ`.
pub fn gamma_autocorrelation(map: &LabelMap) -> ClassTable {
    ClassTable::gamma_indicator(map.p()).correlate_gamma(map)
}

/// `E(Γ) = Σ (Γ∘Γ)^2`.
pub fn gamma_energy(map: &LabelMap) -> BigUint {
    gamma_autocorrelation(map).power_sum(2)
}

/// `E_k(Γ) = Σ (Γ∘Γ)^k`.
pub fn gamma_higher_energy(map: &LabelMap, k: u32) -> Result<BigUint> {
    if k < 2 {
        return Err(Error::InvalidArgument("k must be at least 2".into()));
    }
    Ok(gamma_autocorrelation(map).power_sum(k))
}

/// `T_k(Γ) = Σ (Γ *_{k-1} Γ)^2`.
pub fn gamma_t_k(map: &LabelMap, k: u32) -> Result<BigUint> {
    Ok(gamma_iterated(map, k)?.power_sum(2))
}

/// `ψ_k = (Γ *_{k-1} Γ) ∘ (Γ *_{k-1} Γ)` by label.
pub fn psi_k_classes(map: &LabelMap, k: u32) -> Result<ClassTable> {
    Ok(gamma_iterated(map, k)?.self_correlation(map))
}

/// `ψ_k` as a dense table on `Z_{p^2}`.
pub fn psi_k(p: Prime, k: u32) -> Result<CountTable> {
    let map = LabelMap::new(p)?;
    psi_k_classes(&map, k)?.to_dense(&map)
}
