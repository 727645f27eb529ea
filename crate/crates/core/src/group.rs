//! The subgroup `Γ = { m^p mod p^2 : 1 <= m <= p-1 }` and the decomposition
//!
//! ```text
//!     Z*_{p^2} = ⊔_{j=1}^{p} ξ_j Γ,   ξ_j = 1 + p j,
//!     Z_{p^2} \ Z*_{p^2} = {0} ⊔ pΓ.
//! ```
//!
//! `ξ_p ≡ 1`, so the coset with index `p` is `Γ` itself.

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;

use crate::arith::{mul_mod, pow_mod, Prime};
use crate::error::{Error, Result};

/// `Γ` as a sorted list of residues mod `p^2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    p: Prime,
    elements: Vec<u64>,
}

impl Subgroup {
    pub fn p(&self) -> Prime {
        self.p
    }

    pub fn modulus(&self) -> u64 {
        self.p.square()
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

    /// Membership by binary search over the sorted elements.
    pub fn contains(&self, x: u64) -> bool {
        self.elements.binary_search(&(x % self.modulus())).is_ok()
    }

    /// The unique element of `Γ` congruent to `x` modulo `p` (`x` a unit).
    pub fn lift(&self, x: u64) -> u64 {
        gamma_lift(self.p, x)
    }
}

/// `(x mod p)^p mod p^2`: the element of `Γ` in the residue class of `x` mod `p`.
#[inline]
pub fn gamma_lift(p: Prime, x: u64) -> u64 {
    let q = p.get();
    pow_mod(x % q, q, q * q)
}

pub fn build_gamma(p: Prime) -> Subgroup {
    let n = p.square();
    let mut elements: Vec<u64> = (1..p.get()).map(|m| pow_mod(m, p.get(), n)).collect();
    elements.sort_unstable();
    elements.dedup();
    Subgroup { p, elements }
}

/// Which piece of the decomposition a residue mod `p^2` lies in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CosetLabel {
    /// `ξ_j Γ` with `j ∈ [p]`; `Unit(p)` is `Γ`.
    Unit(u64),
    /// `pΓ`, the nonzero multiples of `p`.
    PCoset,
    Zero,
}

impl CosetLabel {
    /// Dense index: `Unit(j) -> j - 1`, `PCoset -> p`, `Zero -> p + 1`.
    pub fn index(self, p: Prime) -> usize {
        match self {
            CosetLabel::Unit(j) => (j - 1) as usize,
            CosetLabel::PCoset => p.get() as usize,
            CosetLabel::Zero => p.get() as usize + 1,
        }
    }

    pub fn from_index(index: usize, p: Prime) -> CosetLabel {
        let q = p.get() as usize;
        match index {
            i if i < q => CosetLabel::Unit(i as u64 + 1),
            i if i == q => CosetLabel::PCoset,
            _ => CosetLabel::Zero,
        }
    }

    /// Number of residues carrying this label.
    pub fn size(self, p: Prime) -> u64 {
        match self {
            CosetLabel::Zero => 1,
            _ => p.order(),
        }
    }

    /// A fixed member: `ξ_j`, `p`, or `0`.
    pub fn representative(self, p: Prime) -> u64 {
        match self {
            CosetLabel::Unit(j) => (1 + p.get() * j) % p.square(),
            CosetLabel::PCoset => p.get(),
            CosetLabel::Zero => 0,
        }
    }
}

impl fmt::Display for CosetLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CosetLabel::Unit(j) => write!(f, "{j}"),
            CosetLabel::PCoset => f.write_str("p"),
            CosetLabel::Zero => f.write_str("0"),
        }
    }
}

/// Number of distinct labels, `p + 2`.
pub fn label_count(p: Prime) -> usize {
    p.get() as usize + 2
}

/// Coset of `x` mod `p^2`.
///
/// For a unit `x = ξ_j g`, `x^{p-1} ≡ (1 + pj)^{p-1} ≡ 1 - pj (mod p^2)`, so
/// `j` is read off a single modular power.
pub fn classify(p: Prime, x: u64) -> CosetLabel {
    let q = p.get();
    let n = q * q;
    let x = x % n;
    if x == 0 {
        return CosetLabel::Zero;
    }
    if x % q == 0 {
        return CosetLabel::PCoset;
    }
    let t = pow_mod(x, q - 1, n);
    // t = 1 + p * (-j mod p)
    let minus_j = (t + n - 1) % n / q;
    let j = (q - minus_j) % q;
    CosetLabel::Unit(if j == 0 { q } else { j })
}

/// The full decomposition, verified as a partition at construction.
#[derive(Debug, Clone)]
pub struct CosetDecomposition {
    p: Prime,
    gamma: Subgroup,
    reps: Vec<u64>,
    cosets: Vec<Vec<u64>>,
    p_coset: Vec<u64>,
}

impl CosetDecomposition {
    pub fn p(&self) -> Prime {
        self.p
    }

    pub fn gamma(&self) -> &Subgroup {
        &self.gamma
    }

    /// `ξ_1, …, ξ_p` with `ξ_j = 1 + pj mod p^2`.
    pub fn reps(&self) -> &[u64] {
        &self.reps
    }

    /// `ξ_j Γ`, sorted, for `j ∈ [p]`.
    pub fn coset(&self, j: u64) -> &[u64] {
        &self.cosets[(j - 1) as usize]
    }

    pub fn cosets(&self) -> &[Vec<u64>] {
        &self.cosets
    }

    /// `pΓ`, sorted.
    pub fn p_coset(&self) -> &[u64] {
        &self.p_coset
    }

    pub fn members(&self, label: CosetLabel) -> Vec<u64> {
        match label {
            CosetLabel::Unit(j) => self.coset(j).to_vec(),
            CosetLabel::PCoset => self.p_coset.clone(),
            CosetLabel::Zero => vec![0],
        }
    }
}

pub fn coset_decomposition(p: Prime) -> Result<CosetDecomposition> {
    let q = p.get();
    let n = p.square();
    let gamma = build_gamma(p);
    if gamma.len() as u64 != p.order() {
        return Err(Error::PartitionFailed(format!(
            "|Γ| = {} instead of {}",
            gamma.len(),
            p.order()
        )));
    }
    let reps: Vec<u64> = (1..=q).map(|j| (1 + q * j) % n).collect();
    let cosets: Vec<Vec<u64>> = reps
        .iter()
        .map(|&xi| {
            let mut c: Vec<u64> = gamma.elements().iter().map(|&g| mul_mod(xi, g, n)).collect();
            c.sort_unstable();
            c
        })
        .collect();
    let mut p_coset: Vec<u64> = gamma.elements().iter().map(|&g| mul_mod(q, g, n)).collect();
    p_coset.sort_unstable();

    let mut seen = vec![false; n as usize];
    let mut mark = |x: u64, what: &str| -> Result<()> {
        if std::mem::replace(&mut seen[x as usize], true) {
            return Err(Error::PartitionFailed(format!("{x} covered twice ({what})")));
        }
        Ok(())
    };
    for (j, c) in cosets.iter().enumerate() {
        for &x in c {
            if x % q == 0 {
                return Err(Error::PartitionFailed(format!("{x} in ξ_{}Γ is not a unit", j + 1)));
            }
            mark(x, "unit coset")?;
        }
    }
    for &x in &p_coset {
        if x == 0 || x % q != 0 {
            return Err(Error::PartitionFailed(format!("{x} in pΓ is not a nonzero multiple of p")));
        }
        mark(x, "pΓ")?;
    }
    mark(0, "zero")?;
    if let Some(x) = seen.iter().position(|s| !s) {
        return Err(Error::PartitionFailed(format!("{x} not covered")));
    }

    Ok(CosetDecomposition {
        p,
        gamma,
        reps,
        cosets,
        p_coset,
    })
}

/// True iff `Q·g = Q` for every `g ∈ Γ`, i.e. `Q` is a union of labels.
pub fn is_gamma_invariant(p: Prime, q: &BTreeSet<u64>) -> bool {
    let n = p.square();
    let mut counts = vec![0u64; label_count(p)];
    for &x in q {
        if x >= n {
            return false;
        }
        counts[classify(p, x).index(p)] += 1;
    }
    counts.iter().enumerate().all(|(i, &c)| {
        let size = CosetLabel::from_index(i, p).size(p);
        c == 0 || c == size
    })
}

/// All residues carrying one of `labels`, sorted.
pub fn union_of(p: Prime, labels: &[CosetLabel]) -> Vec<u64> {
    let gamma = build_gamma(p);
    let n = p.square();
    let mut out: Vec<u64> = Vec::new();
    let wanted: BTreeSet<CosetLabel> = labels.iter().copied().collect();
    for label in wanted {
        match label {
            CosetLabel::Zero => out.push(0),
            _ => {
                let r = label.representative(p);
                out.extend(gamma.elements().iter().map(|&g| mul_mod(r, g, n)));
            }
        }
    }
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: u64) -> Prime {
        Prime::new(v).unwrap()
    }

    #[test]
    fn gamma_examples() {
        assert_eq!(build_gamma(p(3)).elements(), &[1, 8]);
        assert_eq!(build_gamma(p(5)).elements(), &[1, 7, 18, 24]);
        for q in [3u64, 5, 7, 101, 1009] {
            assert!(build_gamma(p(q)).contains(1));
        }
    }

    #[test]
    fn gamma_is_the_kernel_of_the_fermat_quotient() {
        for q in [3u64, 5, 7, 11, 13] {
            let g = build_gamma(p(q));
            let n = q * q;
            let kernel: Vec<u64> = (1..n)
                .filter(|x| x % q != 0 && pow_mod(*x, q - 1, n) == 1)
                .collect();
            assert_eq!(g.elements(), kernel.as_slice());
            assert_eq!(g.len() as u64, q - 1);
            for &a in g.elements() {
                for &b in g.elements() {
                    assert!(g.contains(mul_mod(a, b, n)));
                }
            }
        }
    }

    #[test]
    fn gamma_is_symmetric() {
        for pr in crate::arith::primes_in_range(3, 199) {
            let g = build_gamma(pr);
            let n = pr.square();
            assert!(g.elements().iter().all(|&x| g.contains(n - x)));
        }
    }

    #[test]
    fn decomposition_examples() {
        let d = coset_decomposition(p(5)).unwrap();
        assert_eq!(d.coset(1), &[6, 8, 17, 19]);
        assert_eq!(d.coset(2), &[2, 11, 14, 23]);
        assert_eq!(d.coset(5), &[1, 7, 18, 24]);
        assert_eq!(d.p_coset(), &[5, 10, 15, 20]);
        assert_eq!(d.reps(), &[6, 11, 16, 21, 1]);
        for q in [3u64, 7, 11, 13, 31] {
            let d = coset_decomposition(p(q)).unwrap();
            assert_eq!(d.coset(q), d.gamma().elements());
        }
    }

    #[test]
    fn classify_examples() {
        let pr = p(5);
        assert_eq!(classify(pr, 17), CosetLabel::Unit(1));
        assert_eq!(classify(pr, 0), CosetLabel::Zero);
        assert_eq!(classify(pr, 10), CosetLabel::PCoset);
        assert_eq!(classify(pr, 1), CosetLabel::Unit(5));
    }

    #[test]
    fn classify_agrees_with_decomposition() {
        for q in [3u64, 5, 7, 11, 13] {
            let pr = p(q);
            let d = coset_decomposition(pr).unwrap();
            for j in 1..=q {
                for &x in d.coset(j) {
                    assert_eq!(classify(pr, x), CosetLabel::Unit(j));
                }
            }
            for &x in d.p_coset() {
                assert_eq!(classify(pr, x), CosetLabel::PCoset);
            }
        }
    }

    #[test]
    fn labels_round_trip() {
        let pr = p(7);
        for i in 0..label_count(pr) {
            let l = CosetLabel::from_index(i, pr);
            assert_eq!(l.index(pr), i);
            assert_eq!(classify(pr, l.representative(pr)), l);
        }
    }

    #[test]
    fn invariance() {
        let pr = p(5);
        let d = coset_decomposition(pr).unwrap();
        let gamma: BTreeSet<u64> = d.gamma().elements().iter().copied().collect();
        assert!(is_gamma_invariant(pr, &gamma));
        assert!(!is_gamma_invariant(pr, &BTreeSet::from([1])));
        let q: BTreeSet<u64> = d.coset(1).iter().chain(d.coset(3)).copied().collect();
        assert!(is_gamma_invariant(pr, &q));
        let mut broken = q.clone();
        broken.remove(&6);
        assert!(!is_gamma_invariant(pr, &broken));
        assert!(is_gamma_invariant(pr, &BTreeSet::from([0])));
        assert!(is_gamma_invariant(pr, &BTreeSet::new()));
        let u = union_of(pr, &[CosetLabel::Unit(1), CosetLabel::Unit(3)]);
        assert_eq!(u, q.into_iter().collect::<Vec<_>>());
    }
}
