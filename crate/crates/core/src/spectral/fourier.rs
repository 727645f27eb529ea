//! Discrete Fourier transform on `Z_N` with `f̂(ξ) = Σ_x f(x) e(-ξx/N)`.
//!
//! This is the only floating-point code in the module; the exact tables
//! never pass through it.

use num_complex::Complex64;
use rustfft::FftPlanner;

use super::table::CountTable;

/// Complex values indexed by `Z_N`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexTable {
    values: Vec<Complex64>,
}

impl ComplexTable {
    pub fn new(values: Vec<Complex64>) -> Self {
        ComplexTable { values }
    }

    pub fn modulus(&self) -> u64 {
        self.values.len() as u64
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn get(&self, xi: u64) -> Complex64 {
        self.values[(xi % self.modulus()) as usize]
    }

    pub fn l2_squared(&self) -> f64 {
        self.values.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Largest `|f̂(ξ)|`.
    pub fn max_norm(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Smallest real part.
    pub fn min_re(&self) -> f64 {
        self.values.iter().map(|z| z.re).fold(f64::INFINITY, f64::min)
    }

    /// `Σ|f̂|^2 = N Σ|f|^2` to relative tolerance `tol`.
    pub fn parseval_holds(&self, original: &[Complex64], tol: f64) -> bool {
        let lhs = self.l2_squared();
        let rhs = self.values.len() as f64 * original.iter().map(|z| z.norm_sqr()).sum::<f64>();
        (lhs - rhs).abs() <= tol * rhs.abs().max(1.0)
    }
}

/// Forward transform of a complex table.
pub fn dft(values: &[Complex64]) -> ComplexTable {
    let mut buf = values.to_vec();
    if !buf.is_empty() {
        let mut planner = FftPlanner::<f64>::new();
        planner.plan_fft_forward(buf.len()).process(&mut buf);
    }
    ComplexTable::new(buf)
}

/// Forward transform of an exact table.
pub fn dft_real(table: &CountTable) -> ComplexTable {
    let values: Vec<Complex64> = table
        .to_f64()
        .into_iter()
        .map(|v| Complex64::new(v, 0.0))
        .collect();
    dft(&values)
}

/// True when `ψ̂` is real and `min Re ψ̂ >= -rel_tol · max|ψ̂|`.
pub fn has_nonnegative_transform(table: &CountTable, rel_tol: f64) -> bool {
    let hat = dft_real(table);
    let scale = hat.max_norm().max(1.0);
    hat.min_re() >= -rel_tol * scale
        && hat.values().iter().all(|z| z.im.abs() <= rel_tol * scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{convolve, correlate, ResidueSet};
    use proptest::prelude::*;
    use std::f64::consts::PI;

    /// O(N^2) transform straight from the definition.
    fn naive(values: &[Complex64]) -> Vec<Complex64> {
        let n = values.len();
        (0..n)
            .map(|xi| {
                values
                    .iter()
                    .enumerate()
                    .map(|(x, v)| {
                        let phase = -2.0 * PI * ((xi * x) % n) as f64 / n as f64;
                        v * Complex64::from_polar(1.0, phase)
                    })
                    .sum()
            })
            .collect()
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol * (1.0 + a.norm().max(b.norm()))
    }

    #[test]
    fn delta_and_constant() {
        let d = CountTable::delta(12, 0).unwrap();
        assert!(dft_real(&d).values().iter().all(|z| close(*z, Complex64::new(1.0, 0.0), 1e-12)));
        let ones = CountTable::from_words(vec![1; 12]).unwrap();
        let hat = dft_real(&ones);
        assert!(close(hat.get(0), Complex64::new(12.0, 0.0), 1e-12));
        assert!((1..12).all(|xi| hat.get(xi).norm() < 1e-9));
    }

    #[test]
    fn gamma_p3_at_one() {
        let g = ResidueSet::new(9, [1, 8]).unwrap();
        let hat = dft_real(&CountTable::indicator(&g).unwrap());
        let expected = 2.0 * (2.0 * PI / 9.0).cos();
        assert!((hat.get(1).re - expected).abs() < 1e-12);
        assert!((expected - 1.532_088_886).abs() < 1e-9);
        assert!(hat.get(1).im.abs() < 1e-12);
    }

    #[test]
    fn matches_definition() {
        let v: Vec<Complex64> = (0..35).map(|x| Complex64::new((x * x % 11) as f64, 0.0)).collect();
        let fast = dft(&v);
        for (a, b) in fast.values().iter().zip(naive(&v)) {
            assert!(close(*a, b, 1e-9));
        }
        assert!(fast.parseval_holds(&v, 1e-9));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn convolution_theorem(n in 2usize..60, seed in prop::collection::vec(0u64..6, 120)) {
            let f = CountTable::from_words(seed[..n].to_vec()).unwrap();
            let g = CountTable::from_words(seed[60..60 + n].to_vec()).unwrap();
            let (fh, gh) = (dft_real(&f), dft_real(&g));
            let conv = dft_real(&convolve(&f, &g).unwrap());
            let corr = dft_real(&correlate(&f, &g).unwrap());
            for xi in 0..n as u64 {
                prop_assert!(close(conv.get(xi), fh.get(xi) * gh.get(xi), 1e-9));
                prop_assert!(close(corr.get(xi), fh.get(xi).conj() * gh.get(xi), 1e-9));
            }
            let values: Vec<Complex64> = f.to_f64().into_iter().map(|v| Complex64::new(v, 0.0)).collect();
            prop_assert!(fh.parseval_holds(&values, 1e-9));
        }
    }
}
