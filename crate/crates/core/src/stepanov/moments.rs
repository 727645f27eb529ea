use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

use crate::arith::{mul_mod, Prime};
use crate::error::{Error, Result};
use crate::exec;
use crate::group::{build_gamma, CosetLabel};
use crate::spectral::invariant::{gamma_iterated, LabelMap};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CosetCorrelation {
    /// `Σ_{x∈Q} (Q_1 ∘ Q_2)(x)`.
    pub count: u128,
    /// `|Q| |Q_1| |Q_2|`.
    pub size_product: u128,
    /// `count / (p^{-1/3} (|Q||Q_1||Q_2|)^{2/3})`.
    pub ratio: f64,
}

fn check_indices(p: Prime, set: &BTreeSet<u64>, name: &str) -> Result<()> {
    match set.iter().find(|&&j| j == 0 || j > p.get()) {
        Some(j) => Err(Error::InvalidArgument(format!(
            "{name} contains coset index {j} outside [1, {}]",
            p.get()
        ))),
        None => Ok(()),
    }
}

/// `Q`, `Q_1`, `Q_2` are unions of unit cosets `ξ_jΓ`, given by their indices.
///
/// `(Q_1 ∘ Q_2)` is constant on cosets, so `x` runs over one representative
/// per coset of `Q` and `y` over `Q_2`, counting `x + y ∈ Q_1`.
pub fn coset_correlation(
    p: Prime,
    q: &BTreeSet<u64>,
    q1: &BTreeSet<u64>,
    q2: &BTreeSet<u64>,
) -> Result<CosetCorrelation> {
    check_indices(p, q, "Q")?;
    check_indices(p, q1, "Q1")?;
    check_indices(p, q2, "Q2")?;
    let map = LabelMap::new(p)?;
    let n = p.square();
    let gamma = build_gamma(p);
    let in_q1: Vec<bool> = (0..crate::group::label_count(p))
        .map(|li| matches!(CosetLabel::from_index(li, p), CosetLabel::Unit(j) if q1.contains(&j)))
        .collect();
    let q2_members: Vec<u64> = q2
        .iter()
        .flat_map(|&j| {
            let xi = CosetLabel::Unit(j).representative(p);
            gamma.elements().iter().map(move |&g| mul_mod(xi, g, n))
        })
        .collect();
    let reps: Vec<u64> = q.iter().map(|&j| CosetLabel::Unit(j).representative(p)).collect();
    let per_rep = exec::map_slice(&reps, |&x| {
        q2_members.iter().filter(|&&y| in_q1[map.index((x + y) % n)]).count() as u128
    });
    let t = p.order() as u128;
    let count = per_rep.iter().sum::<u128>() * t;
    let size_product = q.len() as u128 * q1.len() as u128 * q2.len() as u128 * t * t * t;
    let scale = (p.get() as f64).powf(-1.0 / 3.0) * (size_product as f64).powf(2.0 / 3.0);
    let ratio = if size_product == 0 { 0.0 } else { count as f64 / scale };
    Ok(CosetCorrelation {
        count,
        size_product,
        ratio,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetValue {
    pub coset: u64,
    pub value: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderedValues {
    pub p: u64,
    pub d: u32,
    /// `(Γ *_{d-1} Γ)(ξ_j)`, descending, ties by ascending `j`.
    pub values: Vec<CosetValue>,
    pub at_zero: BigUint,
    pub on_p_coset: BigUint,
}

/// The `d`-fold sum count of `Γ` at one point per unit coset, sorted.
///
/// Values come from the coset-compressed convolution; each is re-evaluated
/// from the `(d-1)`-fold table at a second member of its coset to confirm
/// constancy.
pub fn ordered_convolution_values(p: Prime, d: u32) -> Result<OrderedValues> {
    if d < 2 {
        return Err(Error::InvalidArgument("d must be at least 2".into()));
    }
    let map = LabelMap::new(p)?;
    let prev = gamma_iterated(&map, d - 1)?;
    let table = prev.convolve_gamma(&map);
    let n = p.square();
    let gamma = build_gamma(p);
    let other = gamma.elements().iter().copied().find(|&g| g != 1).unwrap_or(1);

    let checks = exec::map_range(p.get() as usize, |k| {
        let label = CosetLabel::Unit(k as u64 + 1);
        let x = mul_mod(label.representative(p), other, n);
        let direct: BigUint = gamma.elements().iter().map(|&g| prev.at((x + n - g) % n)).sum();
        direct == *table.value(label)
    });
    if let Some(k) = checks.iter().position(|ok| !ok) {
        return Err(Error::Internal(format!("convolution not constant on coset {}", k + 1)));
    }

    let mut values: Vec<CosetValue> = (1..=p.get())
        .map(|j| CosetValue {
            coset: j,
            value: table.value(CosetLabel::Unit(j)).clone(),
        })
        .collect();
    values.sort_by(|a, b| b.value.cmp(&a.value).then(a.coset.cmp(&b.coset)));
    Ok(OrderedValues {
        p: p.get(),
        d,
        values,
        at_zero: table.value(CosetLabel::Zero).clone(),
        on_p_coset: table.value(CosetLabel::PCoset).clone(),
    })
}
