use num_bigint::BigUint;
use num_rational::Ratio;

use super::fourier::has_nonnegative_transform;
use super::table::{same_modulus, CountTable, ResidueSet};
use super::correlate;
use crate::error::{Error, Result};
use crate::exec;
use crate::group::Subgroup;

/// Relative tolerance for the numerical `ψ̂ >= 0` precondition.
pub const POSITIVITY_TOLERANCE: f64 = 1e-6;

/// Both sides of
/// `|A|^{-3} (Σ_x ψ(x)(A∘A)(x))^3 <= Σ_{x,y,z ∈ A} ψ(x-y) ψ(x-z) ψ(y-z)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TripleProduct {
    pub lhs: Ratio<BigUint>,
    pub rhs: BigUint,
    pub holds: bool,
}

pub fn triple_product_check(a: &ResidueSet, psi: &CountTable) -> Result<TripleProduct> {
    same_modulus(a.modulus(), psi.modulus())?;
    if a.is_empty() {
        return Err(Error::InvalidArgument("A must be nonempty".into()));
    }
    if !psi.is_even() {
        return Err(Error::Precondition("ψ is not even".into()));
    }
    if !has_nonnegative_transform(psi, POSITIVITY_TOLERANCE) {
        return Err(Error::Precondition("ψ̂ has a negative value".into()));
    }
    let ind = CountTable::indicator(a)?;
    let mass = correlate(&ind, &ind)?.weighted_power_sum(psi, 1)?;
    let size = BigUint::from(a.len());
    let size3 = size.pow(3);
    let mass3 = mass.pow(3);

    let n = a.modulus();
    let elems = a.elements();
    let psi_at = |x: u64, y: u64| psi.get((x + n - y) % n);
    let partial: Vec<BigUint> = exec::map_slice(elems, |&x| {
        let mut acc = BigUint::default();
        for &y in elems {
            let xy = psi_at(x, y);
            if xy == BigUint::default() {
                continue;
            }
            for &z in elems {
                acc += &xy * psi_at(x, z) * psi_at(y, z);
            }
        }
        acc
    });
    let rhs: BigUint = partial.into_iter().sum();

    let holds = mass3 <= &rhs * &size3;
    Ok(TripleProduct {
        lhs: Ratio::new(mass3, size3),
        rhs,
        holds,
    })
}

/// Both sides of `t · Σ_{x∈Γ} (ψ * Γ)(x)^2 = (Σ_x ψ(x) (Γ∘Γ)(x))^2`,
/// returned as `(lhs, rhs)`.
pub fn subgroup_mass_identity(gamma: &Subgroup, psi: &CountTable) -> Result<(BigUint, BigUint)> {
    let n = gamma.modulus();
    same_modulus(n, psi.modulus())?;
    let elems = gamma.elements();
    let conv: Vec<BigUint> = exec::map_slice(elems, |&x| {
        elems.iter().map(|&g| psi.get((x + n - g) % n)).sum()
    });
    let lhs: BigUint = conv.iter().map(|v| v * v).sum::<BigUint>() * BigUint::from(elems.len());
    let set = ResidueSet::new(n, elems.iter().copied())?;
    let ind = CountTable::indicator(&set)?;
    let mass = correlate(&ind, &ind)?.weighted_power_sum(psi, 1)?;
    Ok((lhs, mass.pow(2)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Prime;
    use crate::group::build_gamma;
    use crate::spectral::{higher_energy, psi_k, t_k};

    #[test]
    fn point_and_delta() {
        let a = ResidueSet::new(11, [0]).unwrap();
        let psi = CountTable::delta(11, 0).unwrap();
        let r = triple_product_check(&a, &psi).unwrap();
        assert_eq!(r.lhs, Ratio::from_integer(BigUint::from(1u32)));
        assert_eq!(r.rhs, BigUint::from(1u32));
        assert!(r.holds);
    }

    #[test]
    fn full_group_and_constant() {
        let n = 9u64;
        let a = ResidueSet::full(n).unwrap();
        let psi = CountTable::from_words(vec![1; n as usize]).unwrap();
        let r = triple_product_check(&a, &psi).unwrap();
        assert_eq!(r.lhs, Ratio::from_integer(BigUint::from(n.pow(3))));
        assert_eq!(r.rhs, BigUint::from(n.pow(3)));
        assert!(r.holds);
    }

    #[test]
    fn gamma_p5_with_its_autocorrelation() {
        let p = Prime::new(5).unwrap();
        let g = build_gamma(p);
        let set = ResidueSet::new(25, g.elements().iter().copied()).unwrap();
        let psi = psi_k(p, 1).unwrap();
        let r = triple_product_check(&set, &psi).unwrap();
        assert!(r.holds);
        // Σ ψ (Γ∘Γ) = Σ (Γ∘Γ)^2 = T_2(Γ)
        let t2 = t_k(&set, 2).unwrap();
        assert_eq!(r.lhs, Ratio::new(t2.pow(3), BigUint::from(64u32)));
        // brute force right-hand side
        let mut rhs = 0u64;
        for &x in g.elements() {
            for &y in g.elements() {
                for &z in g.elements() {
                    let v = |u: u64, w: u64| psi.get_u64((u + 25 - w) % 25).unwrap();
                    rhs += v(x, y) * v(x, z) * v(y, z);
                }
            }
        }
        assert_eq!(r.rhs, BigUint::from(rhs));
        assert_eq!(higher_energy(&set, &set, 3).unwrap(), BigUint::from(100u32));
    }

    #[test]
    fn preconditions() {
        let a = ResidueSet::new(6, [1, 2]).unwrap();
        let odd = CountTable::from_words(vec![1, 2, 0, 0, 0, 0]).unwrap();
        assert!(matches!(triple_product_check(&a, &odd), Err(Error::Precondition(_))));
        // even but with a negative transform: 1 - cos term
        let neg = CountTable::from_words(vec![0, 1, 0, 0, 0, 1]).unwrap();
        assert!(matches!(triple_product_check(&a, &neg), Err(Error::Precondition(_))));
        let empty = ResidueSet::new(6, []).unwrap();
        let ok = CountTable::delta(6, 0).unwrap();
        assert!(triple_product_check(&empty, &ok).is_err());
    }

    #[test]
    fn mass_identity_for_invariant_tables() {
        for q in [5u64, 7, 11] {
            let p = Prime::new(q).unwrap();
            let g = build_gamma(p);
            for k in 1..=2 {
                let psi = psi_k(p, k).unwrap();
                let (lhs, rhs) = subgroup_mass_identity(&g, &psi).unwrap();
                assert_eq!(lhs, rhs, "p={q} k={k}");
            }
        }
    }

    #[test]
    fn mass_identity_fails_for_non_invariant_tables() {
        let p = Prime::new(7).unwrap();
        let g = build_gamma(p);
        let mut w = vec![0u64; 49];
        w[0] = 3;
        w[1] = 1;
        w[48] = 1;
        let psi = CountTable::from_words(w).unwrap();
        let (lhs, rhs) = subgroup_mass_identity(&g, &psi).unwrap();
        assert_ne!(lhs, rhs);
    }
}
