//! Fermat quotients `q(n) = (n^{p-1} - 1)/p mod p`, the least non-vanishing
//! argument `l_p`, resumable `l_p` scans, and the count `N` of solutions of
//! `ux ≡ y (mod p^2)` with `u ∈ Γ`, `0 < |x|, |y| <= H`.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fs::{self, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use crate::arith::{mul_mod, pow_mod, primes_in_range, Prime};
use crate::error::{Error, Result};
use crate::exec;
use crate::group::build_gamma;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientValue {
    pub p: Prime,
    pub n: u64,
    pub q: u64,
}

/// `((n^{p-1} mod p^2) - 1) / p`; the division is exact because
/// `n^{p-1} ≡ 1 (mod p)`.
pub fn fermat_quotient(p: Prime, n: u64) -> Result<QuotientValue> {
    let q = p.get();
    if n % q == 0 {
        return Err(Error::InvalidArgument(format!("{q} divides {n}")));
    }
    let t = pow_mod(n, q - 1, p.square());
    Ok(QuotientValue {
        p,
        n,
        q: (t - 1) / q,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LpRecord {
    pub p: Prime,
    pub l_p: u64,
}

impl LpRecord {
    /// `(log_2 p)^{131/72}`.
    pub fn log_bound(&self) -> f64 {
        (self.p.get() as f64).log2().powf(131.0 / 72.0)
    }
}

/// Least `n >= 1` with `q(n) ≢ 0 (mod p)`. Terminates because `Γ` is a
/// proper subgroup of the units.
pub fn smallest_nonvanishing(p: Prime) -> LpRecord {
    let l_p = (2..)
        .filter(|n| n % p.get() != 0)
        .find(|&n| fermat_quotient(p, n).map(|v| v.q != 0).unwrap_or(false))
        .expect("Γ is a proper subgroup");
    LpRecord { p, l_p }
}

/// `|{(u, x, y) : u ∈ Γ, 0 < |x|, |y| <= H, ux ≡ y (mod p^2)}|`.
pub fn congruence_count(p: Prime, h: u64) -> Result<u64> {
    let n = p.square();
    if h == 0 || 2 * h >= n {
        return Err(Error::InvalidArgument(format!(
            "H = {h} must satisfy 1 <= H and 2H < p^2 = {n}"
        )));
    }
    let gamma = build_gamma(p);
    let per_u = exec::map_slice(gamma.elements(), |&u| {
        let mut count = 0u64;
        for x in 1..=h {
            for xr in [x, n - x] {
                let y = mul_mod(u, xr, n);
                let small = if y > n / 2 { n - y } else { y };
                if small >= 1 && small <= h {
                    count += 1;
                }
            }
        }
        count
    });
    Ok(per_u.iter().sum())
}

/// `l_p` for every odd prime in `[p_min, p_max]`, ascending.
pub fn lp_scan(p_min: u64, p_max: u64) -> Result<Vec<LpRecord>> {
    check_range(p_min, p_max)?;
    let primes = primes_in_range(p_min, p_max);
    Ok(exec::map_slice(&primes, |&p| smallest_nonvanishing(p)))
}

fn check_range(p_min: u64, p_max: u64) -> Result<()> {
    if p_max >= crate::arith::PRIME_LIMIT {
        return Err(Error::InvalidArgument(format!("p_max = {p_max} must be below 2^31")));
    }
    if p_min > p_max {
        return Err(Error::InvalidArgument(format!("empty range {p_min}:{p_max}")));
    }
    Ok(())
}

/// Append-only `p,l_p` CSV cache for [`lp_scan`].
#[derive(Debug, Clone)]
pub struct LpCache {
    path: PathBuf,
}

/// Result of a cached scan, with how many primes were computed afresh.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpScan {
    pub records: Vec<LpRecord>,
    pub computed: usize,
    pub reused: usize,
}

impl LpCache {
    pub const FILE_NAME: &'static str = "lp.csv";
    pub const HEADER: &'static str = "p,l_p";

    pub fn in_dir(dir: &Path) -> Self {
        LpCache {
            path: dir.join(Self::FILE_NAME),
        }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn load(&self) -> Result<BTreeMap<u64, u64>> {
        let mut out = BTreeMap::new();
        let file = match fs::File::open(&self.path) {
            Ok(f) => f,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(out),
            Err(e) => return Err(e.into()),
        };
        for (lineno, line) in BufReader::new(file).lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || (lineno == 0 && line == Self::HEADER) {
                continue;
            }
            let parsed = line
                .split_once(',')
                .and_then(|(a, b)| Some((a.parse::<u64>().ok()?, b.parse::<u64>().ok()?)));
            match parsed {
                Some((p, l)) => {
                    out.insert(p, l);
                }
                None => {
                    return Err(Error::Io(format!(
                        "{}:{}: malformed row {line:?}",
                        self.path.display(),
                        lineno + 1
                    )))
                }
            }
        }
        Ok(out)
    }

    fn append(&self, records: &[LpRecord]) -> Result<()> {
        if records.is_empty() {
            return Ok(());
        }
        if let Some(dir) = self.path.parent() {
            fs::create_dir_all(dir)?;
        }
        let fresh = !self.path.exists();
        let mut f = OpenOptions::new().create(true).append(true).open(&self.path)?;
        let mut buf = String::new();
        if fresh {
            buf.push_str(Self::HEADER);
            buf.push('\n');
        }
        for r in records {
            buf.push_str(&format!("{},{}\n", r.p, r.l_p));
        }
        f.write_all(buf.as_bytes())?;
        Ok(())
    }

    /// Scans `[p_min, p_max]`, computing only primes absent from the cache
    /// and appending them.
    pub fn scan(&self, p_min: u64, p_max: u64) -> Result<LpScan> {
        check_range(p_min, p_max)?;
        let known = self.load()?;
        let primes = primes_in_range(p_min, p_max);
        let missing: Vec<Prime> = primes
            .iter()
            .copied()
            .filter(|p| !known.contains_key(&p.get()))
            .collect();
        let fresh: Vec<LpRecord> = exec::map_slice(&missing, |&p| smallest_nonvanishing(p));
        self.append(&fresh)?;

        let mut by_p: BTreeMap<u64, u64> = known;
        for r in &fresh {
            by_p.insert(r.p.get(), r.l_p);
        }
        let records = primes
            .iter()
            .map(|&p| LpRecord {
                p,
                l_p: by_p[&p.get()],
            })
            .collect();
        Ok(LpScan {
            records,
            computed: fresh.len(),
            reused: primes.len() - fresh.len(),
        })
    }
}
