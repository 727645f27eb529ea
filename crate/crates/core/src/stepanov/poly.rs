use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::arith::{add_mod, inv_mod, mul_mod, sub_mod, Prime};
use crate::error::{Error, Result};

/// Dense polynomial over `Z_p`, lowest degree first, no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawPoly", into = "RawPoly")]
pub struct PolyFp {
    p: Prime,
    coeffs: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct RawPoly {
    p: Prime,
    coefficients: Vec<u64>,
}

impl TryFrom<RawPoly> for PolyFp {
    type Error = Error;

    fn try_from(raw: RawPoly) -> Result<Self> {
        let q = raw.p.get();
        if let Some(c) = raw.coefficients.iter().find(|&&c| c >= q) {
            return Err(Error::InvalidArgument(format!("coefficient {c} is not reduced mod {q}")));
        }
        if raw.coefficients.last() == Some(&0) {
            return Err(Error::InvalidArgument("leading coefficient is zero".into()));
        }
        Ok(PolyFp {
            p: raw.p,
            coeffs: raw.coefficients,
        })
    }
}

impl From<PolyFp> for RawPoly {
    fn from(f: PolyFp) -> Self {
        RawPoly {
            p: f.p,
            coefficients: f.coeffs,
        }
    }
}

impl PolyFp {
    /// Reduces every coefficient and strips leading zeros.
    pub fn new(p: Prime, coeffs: Vec<u64>) -> Self {
        let q = p.get();
        let mut coeffs: Vec<u64> = coeffs.into_iter().map(|c| c % q).collect();
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        PolyFp { p, coeffs }
    }

    pub fn zero(p: Prime) -> Self {
        PolyFp { p, coeffs: Vec::new() }
    }

    pub fn constant(p: Prime, c: u64) -> Self {
        Self::new(p, vec![c])
    }

    /// `c X^k`.
    pub fn monomial(p: Prime, c: u64, k: usize) -> Self {
        let mut coeffs = vec![0; k + 1];
        coeffs[k] = c;
        Self::new(p, coeffs)
    }

    /// `X - r`.
    pub fn linear_root(p: Prime, r: u64) -> Self {
        Self::new(p, vec![sub_mod(0, r % p.get(), p.get()), 1])
    }

    pub fn p(&self) -> Prime {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    /// Coefficient of `X^k`, zero beyond the degree.
    pub fn coeff(&self, k: usize) -> u64 {
        self.coeffs.get(k).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, x: u64) -> u64 {
        let q = self.p.get();
        let x = x % q;
        self.coeffs.iter().rev().fold(0, |acc, &c| add_mod(mul_mod(acc, x, q), c, q))
    }

    pub fn scale(&self, c: u64) -> Self {
        let q = self.p.get();
        Self::new(self.p, self.coeffs.iter().map(|&a| mul_mod(a, c % q, q)).collect())
    }

    /// Multiplication by `X^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![0; k];
        coeffs.extend_from_slice(&self.coeffs);
        PolyFp { p: self.p, coeffs }
    }

    pub fn derivative(&self) -> Self {
        let q = self.p.get();
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| mul_mod(c, k as u64 % q, q))
            .collect();
        Self::new(self.p, coeffs)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::constant(self.p, 1);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Euclidean division: `self = quotient · divisor + remainder`.
    pub fn div_rem(&self, divisor: &PolyFp) -> Result<(PolyFp, PolyFp)> {
        self.check_same(divisor);
        let q = self.p.get();
        let dd = divisor
            .degree()
            .ok_or_else(|| Error::InvalidArgument("division by the zero polynomial".into()))?;
        let lead_inv = inv_mod(divisor.coeffs[dd], q).expect("nonzero mod p");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Self::zero(self.p), self.clone()));
        }
        let mut quot = vec![0u64; rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = mul_mod(rem[k + dd], lead_inv, q);
            quot[k] = c;
            if c != 0 {
                for (t, &d) in divisor.coeffs.iter().enumerate() {
                    rem[k + t] = sub_mod(rem[k + t], mul_mod(c, d, q), q);
                }
            }
        }
        rem.truncate(dd);
        Ok((Self::new(self.p, quot), Self::new(self.p, rem)))
    }

    /// Division by `X - r` by Horner's scheme: `(quotient, self(r))`.
    pub fn synthetic_division(&self, r: u64) -> (PolyFp, u64) {
        let q = self.p.get();
        let r = r % q;
        if self.coeffs.is_empty() {
            return (self.clone(), 0);
        }
        let n = self.coeffs.len();
        let mut quot = vec![0u64; n - 1];
        let mut carry = 0u64;
        for k in (0..n).rev() {
            let v = add_mod(self.coeffs[k], mul_mod(carry, r, q), q);
            if k == 0 {
                return (Self::new(self.p, quot), v);
            }
            quot[k - 1] = v;
            carry = v;
        }
        unreachable!()
    }

    /// Largest `m <= cap` with `(X - r)^m` dividing `self`; `cap` for the zero
    /// polynomial.
    pub fn vanishing_order(&self, r: u64, cap: usize) -> usize {
        let mut cur = self.clone();
        for m in 0..cap {
            if cur.is_zero() {
                return cap;
            }
            let (quot, rem) = cur.synthetic_division(r);
            if rem != 0 {
                return m;
            }
            cur = quot;
        }
        cap
    }

    fn check_same(&self, other: &PolyFp) {
        assert_eq!(self.p, other.p, "polynomials over different fields");
    }
}

impl fmt::Display for PolyFp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}X")?,
                _ => write!(f, "{c}X^{k}")?,
            }
        }
        Ok(())
    }
}

impl Add for &PolyFp {
    type Output = PolyFp;

    fn add(self, rhs: &PolyFp) -> PolyFp {
        self.check_same(rhs);
        let q = self.p.get();
        let n = self.coeffs.len().max(rhs.coeffs.len());
        PolyFp::new(self.p, (0..n).map(|k| add_mod(self.coeff(k), rhs.coeff(k), q)).collect())
    }
}

impl Sub for &PolyFp {
    type Output = PolyFp;

    fn sub(self, rhs: &PolyFp) -> PolyFp {
        self.check_same(rhs);
        let q = self.p.get();
        let n = self.coeffs.len().max(rhs.coeffs.len());
        PolyFp::new(self.p, (0..n).map(|k| sub_mod(self.coeff(k), rhs.coeff(k), q)).collect())
    }
}

impl Neg for &PolyFp {
    type Output = PolyFp;

    fn neg(self) -> PolyFp {
        let q = self.p.get();
        PolyFp::new(self.p, self.coeffs.iter().map(|&c| sub_mod(0, c, q)).collect())
    }
}

impl Mul for &PolyFp {
    type Output = PolyFp;

    fn mul(self, rhs: &PolyFp) -> PolyFp {
        self.check_same(rhs);
        if self.is_zero() || rhs.is_zero() {
            return PolyFp::zero(self.p);
        }
        let q = self.p.get();
        // accumulate in u128 and reduce once per output coefficient
        let mut acc = vec![0u128; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                acc[i + j] += (a * b) as u128;
            }
        }
        PolyFp::new(self.p, acc.into_iter().map(|v| (v % q as u128) as u64).collect())
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for PolyFp {
            type Output = PolyFp;
            fn $m(self, rhs: PolyFp) -> PolyFp {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p7() -> Prime {
        Prime::new(7).unwrap()
    }

    #[test]
    fn normalisation() {
        let f = PolyFp::new(p7(), vec![8, 0, 7, 14]);
        assert_eq!(f.coeffs(), &[1]);
        assert_eq!(f.degree(), Some(0));
        assert!(PolyFp::new(p7(), vec![0, 0]).is_zero());
        assert_eq!(PolyFp::zero(p7()).degree(), None);
    }

    #[test]
    fn serde_rejects_unnormalised() {
        let ok: PolyFp = serde_json::from_str(r#"{"p":7,"coefficients":[1,2]}"#).unwrap();
        assert_eq!(ok, PolyFp::new(p7(), vec![1, 2]));
        assert!(serde_json::from_str::<PolyFp>(r#"{"p":7,"coefficients":[1,0]}"#).is_err());
        assert!(serde_json::from_str::<PolyFp>(r#"{"p":7,"coefficients":[9]}"#).is_err());
        assert!(serde_json::from_str::<PolyFp>(r#"{"p":8,"coefficients":[1]}"#).is_err());
        let s = serde_json::to_string(&ok).unwrap();
        assert_eq!(s, r#"{"p":7,"coefficients":[1,2]}"#);
    }

    #[test]
    fn orders() {
        // (X-2)^3 (X-5)
        let f = &PolyFp::linear_root(p7(), 2).pow(3) * &PolyFp::linear_root(p7(), 5);
        assert_eq!(f.vanishing_order(2, 10), 3);
        assert_eq!(f.vanishing_order(5, 10), 1);
        assert_eq!(f.vanishing_order(1, 10), 0);
        assert_eq!(f.vanishing_order(2, 2), 2);
        assert_eq!(format!("{}", PolyFp::new(p7(), vec![3, 0, 1])), "1X^2 + 3");
    }

    fn poly() -> impl Strategy<Value = Vec<u64>> {
        prop::collection::vec(0u64..7, 0..12)
    }

    proptest! {
        #[test]
        fn ring_laws(a in poly(), b in poly(), c in poly(), x in 0u64..7) {
            let (a, b, c) = (PolyFp::new(p7(), a), PolyFp::new(p7(), b), PolyFp::new(p7(), c));
            prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
            prop_assert_eq!(&(&a - &b) + &b, a.clone());
            prop_assert_eq!((&a * &b).eval(x), mul_mod(a.eval(x), b.eval(x), 7));
            prop_assert_eq!((&a * &b).derivative(), &(&a.derivative() * &b) + &(&a * &b.derivative()));
        }

        #[test]
        fn division(a in poly(), b in poly(), r in 0u64..7) {
            let (a, b) = (PolyFp::new(p7(), a), PolyFp::new(p7(), b));
            if !b.is_zero() {
                let (q, rem) = a.div_rem(&b).unwrap();
                prop_assert_eq!(&(&q * &b) + &rem, a.clone());
                prop_assert!(rem.degree() < b.degree());
            }
            let (q, v) = a.synthetic_division(r);
            prop_assert_eq!(v, a.eval(r));
            prop_assert_eq!(&(&q * &PolyFp::linear_root(p7(), r)) + &PolyFp::constant(p7(), v), a);
        }
    }
}
