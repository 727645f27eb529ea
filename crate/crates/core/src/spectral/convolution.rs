use num_bigint::BigUint;
use num_traits::Zero;
use std::sync::atomic::{AtomicBool, Ordering};

use super::table::{same_modulus, CountTable, ResidueSet, Values};
use crate::error::Result;
use crate::exec;

/// Below this many support pairs a sequential scatter beats the parallel gather.
const SCATTER_PAIRS: usize = 1 << 22;
const CHUNK: usize = 1 << 12;

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    /// out[y + z] += f(y) g(z)
    Convolution,
    /// out[z - y] += f(y) g(z)
    Correlation,
}

trait Exact: Clone + Send + Sync {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    /// `acc += a * b`; false on overflow.
    fn mul_add(acc: &mut Self, a: &Self, b: &Self) -> bool;
}

impl Exact for u64 {
    fn zero() -> Self {
        0
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    #[inline]
    fn mul_add(acc: &mut Self, a: &Self, b: &Self) -> bool {
        match a.checked_mul(*b).and_then(|t| acc.checked_add(t)) {
            Some(v) => {
                *acc = v;
                true
            }
            None => false,
        }
    }
}

impl Exact for BigUint {
    fn zero() -> Self {
        Zero::zero()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn mul_add(acc: &mut Self, a: &Self, b: &Self) -> bool {
        *acc += a * b;
        true
    }
}

fn kernel<T: Exact>(f: &[T], g: &[T], kind: Kind) -> Option<Vec<T>> {
    let n = f.len();
    let supp_f: Vec<usize> = (0..n).filter(|&i| !f[i].is_zero()).collect();
    let supp_g: Vec<usize> = (0..n).filter(|&i| !g[i].is_zero()).collect();
    let mut out = vec![T::zero(); n];

    if supp_f.len().saturating_mul(supp_g.len()) <= SCATTER_PAIRS || !exec::is_parallel() {
        for &y in &supp_f {
            for &z in &supp_g {
                let x = match kind {
                    Kind::Convolution => (y + z) % n,
                    Kind::Correlation => (z + n - y) % n,
                };
                if !T::mul_add(&mut out[x], &f[y], &g[z]) {
                    return None;
                }
            }
        }
        return Some(out);
    }

    // Gather: out[x] summed over the smaller support, chunked by x.
    let overflow = AtomicBool::new(false);
    let iterate_f = supp_f.len() <= supp_g.len();
    exec::fill_chunks(&mut out, CHUNK, |start, chunk| {
        for (k, slot) in chunk.iter_mut().enumerate() {
            let x = start + k;
            let ok = if iterate_f {
                supp_f.iter().all(|&y| {
                    let z = match kind {
                        Kind::Convolution => (x + n - y) % n,
                        Kind::Correlation => (y + x) % n,
                    };
                    g[z].is_zero() || T::mul_add(slot, &f[y], &g[z])
                })
            } else {
                supp_g.iter().all(|&z| {
                    let y = match kind {
                        Kind::Convolution => (x + n - z) % n,
                        Kind::Correlation => (z + n - x) % n,
                    };
                    f[y].is_zero() || T::mul_add(slot, &f[y], &g[z])
                })
            };
            if !ok {
                overflow.store(true, Ordering::Relaxed);
                return;
            }
        }
    });
    if overflow.load(Ordering::Relaxed) {
        None
    } else {
        Some(out)
    }
}

fn apply(f: &CountTable, g: &CountTable, kind: Kind) -> Result<CountTable> {
    same_modulus(f.modulus(), g.modulus())?;
    if let (Values::Word(a), Values::Word(b)) = (f.raw(), g.raw()) {
        if let Some(out) = kernel(a, b, kind) {
            return CountTable::from_words(out);
        }
    }
    let out = kernel(&f.to_big(), &g.to_big(), kind).expect("big integers do not overflow");
    CountTable::from_big(out)
}

/// `(f * g)(x) = Σ_y f(y) g(x - y)`, exact.
pub fn convolve(f: &CountTable, g: &CountTable) -> Result<CountTable> {
    apply(f, g, Kind::Convolution)
}

/// `(f ∘ g)(x) = Σ_y f(y) g(y + x)`, exact.
pub fn correlate(f: &CountTable, g: &CountTable) -> Result<CountTable> {
    apply(f, g, Kind::Correlation)
}

/// `A *_{d-1} A`: the number of ways to write `x` as a sum of `d` elements
/// of `A`. `d = 1` is the indicator of `A`.
pub fn iterated_convolution(a: &ResidueSet, d: u32) -> Result<CountTable> {
    if d == 0 {
        return Err(crate::Error::InvalidArgument("d must be at least 1".into()));
    }
    let ind = CountTable::indicator(a)?;
    let mut acc = ind.clone();
    for _ in 1..d {
        acc = convolve(&acc, &ind)?;
    }
    Ok(acc)
}
