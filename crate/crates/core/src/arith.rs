//! Exact modular arithmetic over `Z_p`, `Z_{p^2}` and `Z_{p^r}`.
//!
//! Moduli stay below `2^63`; every product is formed in `u128` before
//! reduction. Primality uses Miller-Rabin with the first twelve primes as
//! witnesses, which is deterministic for all 64-bit inputs.

use serde::{Deserialize, Serialize};
use std::fmt;

use crate::error::{Error, Result};

/// Upper bound (exclusive) on primes accepted by [`Prime::new`].
pub const PRIME_LIMIT: u64 = 1 << 31;

/// An odd prime `3 <= p < 2^31`, so that `p^2` fits in a machine word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct Prime(u64);

impl Prime {
    pub fn new(value: u64) -> Result<Self> {
        if value < 3 || value >= PRIME_LIMIT || !is_prime(value) {
            return Err(Error::NotPrime(value));
        }
        Ok(Prime(value))
    }

    #[inline]
    pub fn get(self) -> u64 {
        self.0
    }

    /// `p^2`.
    #[inline]
    pub fn square(self) -> u64 {
        self.0 * self.0
    }

    /// `|Γ| = p - 1`.
    #[inline]
    pub fn order(self) -> u64 {
        self.0 - 1
    }
}

impl TryFrom<u64> for Prime {
    type Error = Error;
    fn try_from(v: u64) -> Result<Self> {
        Prime::new(v)
    }
}

impl From<Prime> for u64 {
    fn from(p: Prime) -> u64 {
        p.0
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// An element of `Z_N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Residue {
    value: u64,
    modulus: u64,
}

impl Residue {
    /// Reduces `value` modulo `modulus`. Panics on a zero modulus.
    pub fn new(value: u64, modulus: u64) -> Self {
        assert!(modulus > 0, "modulus must be positive");
        Residue {
            value: value % modulus,
            modulus,
        }
    }

    #[inline]
    pub fn value(self) -> u64 {
        self.value
    }

    #[inline]
    pub fn modulus(self) -> u64 {
        self.modulus
    }

    pub fn is_unit(self) -> bool {
        gcd(self.value, self.modulus) == 1
    }

    pub fn mul(self, other: Residue) -> Result<Residue> {
        if self.modulus != other.modulus {
            return Err(Error::ModulusMismatch(self.modulus, other.modulus));
        }
        Ok(Residue {
            value: mul_mod(self.value, other.value, self.modulus),
            modulus: self.modulus,
        })
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64, m: u64) -> u64 {
    let s = a as u128 + b as u128;
    (s % m as u128) as u64
}

#[inline]
pub fn sub_mod(a: u64, b: u64, m: u64) -> u64 {
    let (a, b) = (a % m, b % m);
    if a >= b {
        a - b
    } else {
        m - (b - a)
    }
}

/// `base^exp mod m` by square-and-multiply.
pub fn pow_mod(base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    let mut b = base % m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        exp >>= 1;
    }
    acc
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let (mut r0, mut r1) = (m as i128, (a % m) as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return None;
    }
    Some(t0.rem_euclid(m as i128) as u64)
}

pub fn mod_pow(base: Residue, exp: u64) -> Residue {
    Residue {
        value: pow_mod(base.value, exp, base.modulus),
        modulus: base.modulus,
    }
}

pub fn mod_inv(x: Residue) -> Result<Residue> {
    inv_mod(x.value, x.modulus)
        .map(|value| Residue {
            value,
            modulus: x.modulus,
        })
        .ok_or(Error::NotAUnit {
            value: x.value,
            modulus: x.modulus,
        })
}

/// The canonical projection `Z*_{p^r} -> Z*_{p^{r-1}}`, `x -> x mod p^{r-1}`.
pub fn project(x: Residue, p: Prime) -> Result<Residue> {
    let p = p.get();
    let mut m = x.modulus;
    let mut r = 0u32;
    while m % p == 0 {
        m /= p;
        r += 1;
    }
    if m != 1 || r < 2 {
        return Err(Error::BadProjection {
            modulus: x.modulus,
            p,
        });
    }
    if x.value % p == 0 {
        return Err(Error::NotAUnit {
            value: x.value,
            modulus: x.modulus,
        });
    }
    Ok(Residue::new(x.value, x.modulus / p))
}

const MR_WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic Miller-Rabin for every `n < 2^64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &w in &MR_WITNESSES {
        if n % w == 0 {
            return n == w;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &MR_WITNESSES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// All odd primes in `[lo, hi]`, ascending, by a segmented sieve.
pub fn primes_in_range(lo: u64, hi: u64) -> Vec<Prime> {
    let lo = lo.max(3);
    let hi = hi.min(PRIME_LIMIT - 1);
    if lo > hi {
        return Vec::new();
    }
    let root = (hi as f64).sqrt() as u64 + 1;
    let mut small = vec![true; root as usize + 1];
    let mut base = Vec::new();
    for i in 2..=root as usize {
        if small[i] {
            base.push(i as u64);
            let mut k = i * i;
            while k <= root as usize {
                small[k] = false;
                k += i;
            }
        }
    }

    const SEGMENT: u64 = 1 << 18;
    let mut out = Vec::new();
    let mut start = lo;
    while start <= hi {
        let end = (start + SEGMENT - 1).min(hi);
        let mut mark = vec![true; (end - start + 1) as usize];
        for &q in &base {
            if q * q > end {
                break;
            }
            let first = (start.div_ceil(q) * q).max(q * q);
            let mut k = first;
            while k <= end {
                mark[(k - start) as usize] = false;
                k += q;
            }
        }
        for (off, &is_p) in mark.iter().enumerate() {
            let n = start + off as u64;
            if is_p && n >= 3 && n % 2 == 1 {
                out.push(Prime(n));
            }
        }
        start = end + 1;
    }
    out
}
