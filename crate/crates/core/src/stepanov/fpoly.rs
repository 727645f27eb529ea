use super::poly::PolyFp;
use crate::arith::{inv_mod, mul_mod, Prime};
use crate::error::{Error, Result};

/// `f(X) = X + X^2/2 + … + X^{p-1}/(p-1)` over `Z_p`.
pub fn f_poly(p: Prime) -> PolyFp {
    let q = p.get();
    let mut coeffs = vec![0u64; q as usize];
    for (k, c) in coeffs.iter_mut().enumerate().skip(1) {
        *c = inv_mod(k as u64, q).expect("k < p");
    }
    PolyFp::new(p, coeffs)
}

/// `f(b)` for every `b ∈ Z_p`, indexed by `b`.
pub fn f_values(p: Prime) -> Vec<u64> {
    let f = f_poly(p);
    (0..p.get()).map(|b| f.eval(b)).collect()
}

/// `(q_r, h_r)` with `(X(1-X))^r f^{(r)}(X) = q_r(X) + (X^p - X) h_r(X)`,
/// `deg q_r <= r + 1` and `deg h_r <= r - 1`.
pub fn derivative_decompose(p: Prime, r: u64) -> Result<(PolyFp, PolyFp)> {
    let q = p.get();
    if r == 0 || r > q - 1 {
        return Err(Error::InvalidArgument(format!("r = {r} must lie in [1, {}]", q - 1)));
    }
    let mut deriv = f_poly(p);
    for _ in 0..r {
        deriv = deriv.derivative();
    }
    let x_one_minus_x = PolyFp::new(p, vec![0, 1, q - 1]);
    let lhs = &x_one_minus_x.pow(r as u32) * &deriv;
    let modulus = &PolyFp::monomial(p, 1, q as usize) - &PolyFp::monomial(p, 1, 1);
    let (h, qr) = lhs.div_rem(&modulus)?;
    let too_big = |poly: &PolyFp, bound: i64| poly.degree().map_or(false, |d| d as i64 > bound);
    if too_big(&qr, r as i64 + 1) || too_big(&h, r as i64 - 1) {
        return Err(Error::Internal(format!(
            "degree bound violated for p = {q}, r = {r}: deg q = {:?}, deg h = {:?}",
            qr.degree(),
            h.degree()
        )));
    }
    Ok((qr, h))
}

/// `[q_1, …, q_m]` evaluated as polynomials, with index 0 unused.
pub(crate) fn q_table(p: Prime, m: u64) -> Result<Vec<PolyFp>> {
    let mut out = vec![PolyFp::zero(p)];
    for r in 1..=m {
        out.push(derivative_decompose(p, r)?.0);
    }
    Ok(out)
}

/// `x^{\underline k} mod p`.
pub(crate) fn falling(x: u64, k: u64, q: u64) -> u64 {
    (0..k).fold(1, |acc, t| {
        if t > x {
            0
        } else {
            mul_mod(acc, (x - t) % q, q)
        }
    })
}
