//! Characteristic-polynomial coefficients of `U(k)`, their k-averaged second
//! moment by Monte Carlo, and the exact principal-minor oracle.
//!
//! Coefficients follow `det(U - z I) = sum_n a_n z^{B-n}`.

use itertools::Itertools;
use nalgebra::{Complex, DMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::BondId;
use crate::quantize::{evolution_operator, unitarity_defect, BondLengths, BondScattering};
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientVector<T: Real> {
    /// `a_0, ..., a_B`.
    pub coefficients: Vec<Complex<T>>,
    /// Spectral parameter the operator was evaluated at, when known.
    pub k: Option<T>,
}

impl<T: Real> CoefficientVector<T> {
    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }

    pub fn get(&self, n: usize) -> Complex<T> {
        self.coefficients[n]
    }

    /// `a_B = det U`.
    pub fn last(&self) -> Complex<T> {
        self.coefficients[self.degree()]
    }
}

/// Expands `prod_i (lambda_i - z)` into `sum_n a_n z^{B-n}`.
pub fn coefficients_from_eigenvalues<T: Real>(eigenvalues: &[Complex<T>]) -> Vec<Complex<T>> {
    // c[j] holds the coefficient of z^j of the partial product.
    let b = eigenvalues.len();
    let mut c = vec![Complex::new(T::zero(), T::zero()); b + 1];
    c[0] = Complex::new(T::one(), T::zero());
    for (done, &lambda) in eigenvalues.iter().enumerate() {
        // multiply by (lambda - z)
        for j in (0..=done + 1).rev() {
            let shifted = if j > 0 { c[j - 1] } else { Complex::new(T::zero(), T::zero()) };
            c[j] = c[j] * lambda - shifted;
        }
    }
    c.reverse();
    c
}

pub fn char_poly_coefficients<T: Real>(u: &DMatrix<Complex<T>>) -> Result<CoefficientVector<T>> {
    let (rows, cols) = u.shape();
    if rows != cols {
        return Err(Error::NotSquare { rows, cols });
    }
    let defect = unitarity_defect(u).as_f64();
    if !(defect <= T::GROSS_DEFECT) {
        return Err(Error::NotUnitary { defect });
    }
    let eigenvalues: Vec<Complex<T>> = match rows {
        0 => Vec::new(),
        1 => vec![u[(0, 0)]],
        _ => u.eigenvalues().ok_or(Error::NoConvergence)?.iter().copied().collect(),
    };
    Ok(CoefficientVector { coefficients: coefficients_from_eigenvalues(&eigenvalues), k: None })
}

/// `max_n |a_n - a_B conj(a_{B-n})|`; zero up to rounding for unitary input.
pub fn riemann_siegel_residual<T: Real>(a: &CoefficientVector<T>) -> T {
    let b = a.degree();
    let last = a.last();
    (0..=b)
        .map(|n| (a.get(n) - last * a.get(b - n).conj()).norm_sqr().sqrt())
        .fold(T::zero(), |acc, x| if x > acc { x } else { acc })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MonteCarloConfig {
    pub samples: u64,
    pub seed: u64,
    pub k_max: f64,
}

impl MonteCarloConfig {
    pub fn new(samples: u64, seed: u64, k_max: f64) -> Self {
        MonteCarloConfig { samples, seed, k_max }
    }

    fn check(&self) -> Result<()> {
        if self.samples < 2 {
            return Err(Error::InvalidSampling("need at least 2 samples".into()));
        }
        if !(self.k_max > 0.0 && self.k_max.is_finite()) {
            return Err(Error::InvalidSampling(format!("k_max must be positive, got {}", self.k_max)));
        }
        Ok(())
    }

    /// Spectral parameter of sample `index`: each index owns its own
    /// generator stream, so the draw does not depend on scheduling.
    pub fn sample_k(&self, index: u64) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index);
        self.k_max * rng.gen::<f64>()
    }
}

impl Default for MonteCarloConfig {
    fn default() -> Self {
        MonteCarloConfig { samples: 1_000_000, seed: 0, k_max: 1e8 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VarianceEstimate {
    pub n: usize,
    /// Sample mean of `|a_n|^2`.
    pub mean: f64,
    pub std_error: f64,
    pub samples: u64,
    pub seed: u64,
    pub k_max: f64,
}

#[derive(Clone, Copy, Debug, Default)]
struct Moments {
    count: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn merge(self, other: Moments) -> Moments {
        if self.count == 0 {
            return other;
        }
        if other.count == 0 {
            return self;
        }
        let count = self.count + other.count;
        let delta = other.mean - self.mean;
        let mean = self.mean + delta * other.count as f64 / count as f64;
        let m2 = self.m2 + other.m2 + delta * delta * (self.count as f64 * other.count as f64) / count as f64;
        Moments { count, mean, m2 }
    }
}

const CHUNK: u64 = 1024;

/// Monte Carlo estimate of `<|a_n|^2>` for every `n` in `n_set`, averaging over
/// `k` uniform on `[0, k_max]`.
///
/// Samples are grouped in fixed chunks whose partial moments are merged in
/// chunk order, so the result is bit-identical for any thread count.
pub fn mc_variance<T: Real>(
    s: &BondScattering<T>,
    l: &BondLengths<T>,
    n_set: &[usize],
    config: &MonteCarloConfig,
) -> Result<Vec<VarianceEstimate>> {
    config.check()?;
    let b = s.dim();
    if l.len() != b {
        return Err(Error::DimensionMismatch { expected: b, found: l.len() });
    }
    if let Some(&n) = n_set.iter().find(|&&n| n > b) {
        return Err(Error::IndexOutOfRange { n, max: b });
    }
    let chunks = config.samples.div_ceil(CHUNK);
    let partials: Vec<Vec<Moments>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut moments = vec![Moments::default(); n_set.len()];
            for i in c * CHUNK..((c + 1) * CHUNK).min(config.samples) {
                let k = T::lit(config.sample_k(i));
                let u = evolution_operator(s, l, k)?;
                let a = char_poly_coefficients(&u)?;
                for (m, &n) in moments.iter_mut().zip(n_set) {
                    m.push(a.get(n).norm_sqr().as_f64());
                }
            }
            Ok(moments)
        })
        .collect::<Result<_>>()?;

    let totals = partials.into_iter().fold(vec![Moments::default(); n_set.len()], |acc, chunk| {
        acc.into_iter().zip(chunk).map(|(a, c)| a.merge(c)).collect()
    });
    Ok(n_set
        .iter()
        .zip(totals)
        .map(|(&n, m)| {
            let variance = m.m2 / (m.count - 1) as f64;
            VarianceEstimate {
                n,
                mean: m.mean,
                std_error: (variance / m.count as f64).sqrt(),
                samples: m.count,
                seed: config.seed,
                k_max: config.k_max,
            }
        })
        .collect())
}

/// Determinant by Gaussian elimination with partial pivoting; `a` is row-major
/// `dim x dim` and is overwritten.
pub fn determinant_lu<T: Real>(a: &mut [T], dim: usize) -> T {
    let mut det = T::one();
    for col in 0..dim {
        let pivot = (col..dim)
            .max_by(|&i, &j| a[i * dim + col].abs().partial_cmp(&a[j * dim + col].abs()).expect("finite"))
            .expect("non-empty range");
        if a[pivot * dim + col] == T::zero() {
            return T::zero();
        }
        if pivot != col {
            for j in 0..dim {
                a.swap(col * dim + j, pivot * dim + j);
            }
            det = -det;
        }
        let p = a[col * dim + col];
        det *= p;
        for i in col + 1..dim {
            let factor = a[i * dim + col] / p;
            if factor != T::zero() {
                for j in col + 1..dim {
                    let upper = a[col * dim + j];
                    a[i * dim + j] -= factor * upper;
                }
            }
        }
    }
    det
}

/// Principal minor `det S_I` for the bond subset `subset`.
pub fn principal_minor<T: Real>(s: &BondScattering<T>, subset: &[BondId]) -> T {
    let dim = subset.len();
    let m = s.matrix();
    let mut a: Vec<T> = Vec::with_capacity(dim * dim);
    for &i in subset {
        for &j in subset {
            a.push(m[(i, j)]);
        }
    }
    determinant_lu(&mut a, dim)
}

/// Exact k-average of `|a_n|^2`: the sum of `|det S_I|^2` over all `n`-element
/// bond subsets `I`. Cost grows as `C(B, n)`.
pub fn minor_sum_variance<T: Real>(s: &BondScattering<T>, n: usize) -> Result<T> {
    let b = s.dim();
    if n > b {
        return Err(Error::IndexOutOfRange { n, max: b });
    }
    if n == 0 {
        return Ok(T::one());
    }
    // split by lowest bond; partial sums are added in bond order
    let partials: Vec<T> = (0..=b - n)
        .into_par_iter()
        .map(|first| {
            (first + 1..b).combinations(n - 1).fold(T::zero(), |acc, rest| {
                let mut subset = Vec::with_capacity(n);
                subset.push(first);
                subset.extend(rest);
                let d = principal_minor(s, &subset);
                acc + d * d
            })
        })
        .collect();
    Ok(partials.into_iter().fold(T::zero(), |acc, x| acc + x))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SubsetContribution<T> {
    /// `|det S_I|^2`.
    pub minor_squared: T,
    /// Vertices entered by two bonds of `I`; `None` when `I` is unbalanced.
    pub doubly_visited: Option<usize>,
}

pub fn subset_contribution<T: Real>(s: &BondScattering<T>, subset: &[BondId]) -> SubsetContribution<T> {
    let d = principal_minor(s, subset);
    SubsetContribution {
        minor_squared: d * d,
        doubly_visited: s.graph().doubly_visited(subset).map(|vs| vs.len()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::build_binary_graph;
    use crate::quantize::sample_bond_lengths;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn identity_gives_binomial_coefficients() {
        let u = DMatrix::<Complex<f64>>::identity(4, 4);
        let a = char_poly_coefficients(&u).unwrap();
        let expected = [1.0, -4.0, 6.0, -4.0, 1.0];
        for (x, e) in a.coefficients.iter().zip(expected) {
            assert!((x - c(e, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn diag_one_minus_one() {
        let u = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1.0, 0.0), c(-1.0, 0.0)]));
        let a = char_poly_coefficients(&u).unwrap();
        assert!((a.get(0) - c(1.0, 0.0)).norm() < 1e-14);
        assert!(a.get(1).norm() < 1e-14);
        assert!((a.get(2) - c(-1.0, 0.0)).norm() < 1e-14);
        assert!(riemann_siegel_residual(&a) < 1e-14);
    }

    #[test]
    fn contraction_breaks_symmetry() {
        // 0.5 I is not unitary, so expand its eigenvalues directly.
        let a = CoefficientVector { coefficients: coefficients_from_eigenvalues(&[c(0.5, 0.0); 4]), k: None };
        assert!(riemann_siegel_residual(&a) > 0.5);
    }

    #[test]
    fn rejects_non_unitary_and_non_square() {
        let half = DMatrix::<Complex<f64>>::identity(3, 3) * c(0.5, 0.0);
        assert!(matches!(char_poly_coefficients(&half), Err(Error::NotUnitary { .. })));
        let rect = DMatrix::<Complex<f64>>::zeros(2, 3);
        assert!(matches!(char_poly_coefficients(&rect), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn de_bruijn_symmetry_and_leading_terms() {
        let g = build_binary_graph(1, 3).unwrap();
        let s = BondScattering::<f64>::new(&g).unwrap();
        let l = sample_bond_lengths::<f64>(&g, 5, 1.0, 2.0).unwrap();
        for k in [0.3, 17.3, 1234.5] {
            let a = char_poly_coefficients(&evolution_operator(&s, &l, k).unwrap()).unwrap();
            assert!((a.get(0) - c(1.0, 0.0)).norm() < 1e-12);
            assert!((a.last().norm() - 1.0).abs() < 1e-12);
            assert!(riemann_siegel_residual(&a) < 1e-10);
        }
    }

    #[test]
    fn determinant_lu_matches_hand_values() {
        let mut a = vec![2.0f64, 1.0, 1.0, 3.0];
        assert!((determinant_lu(&mut a, 2) - 5.0).abs() < 1e-15);
        let mut p = vec![0.0f64, 1.0, 1.0, 0.0];
        assert_eq!(determinant_lu(&mut p, 2), -1.0);
        let mut singular = vec![1.0f64, 2.0, 2.0, 4.0];
        assert_eq!(determinant_lu(&mut singular, 2), 0.0);
        assert_eq!(determinant_lu::<f64>(&mut [], 0), 1.0);
    }

    #[test]
    fn minor_sum_edge_cases() {
        let g = build_binary_graph(1, 3).unwrap();
        let s = BondScattering::<f64>::new(&g).unwrap();
        assert!((minor_sum_variance(&s, 0).unwrap() - 1.0).abs() < 1e-15);
        assert!((minor_sum_variance(&s, 16).unwrap() - 1.0).abs() < 1e-12);
        assert!(minor_sum_variance(&s, 17).is_err());
    }

    #[test]
    fn self_loop_contribution() {
        let g = build_binary_graph(1, 3).unwrap();
        let s = BondScattering::<f64>::new(&g).unwrap();
        let c = subset_contribution(&s, &[0]);
        assert!((c.minor_squared - 0.5).abs() < 1e-15);
        assert_eq!(c.doubly_visited, Some(0));
        let unbalanced = subset_contribution(&s, &[1]);
        assert_eq!(unbalanced.doubly_visited, None);
        assert_eq!(unbalanced.minor_squared, 0.0);
    }

    #[test]
    fn mc_rejects_bad_config() {
        let g = build_binary_graph(1, 1).unwrap();
        let s = BondScattering::<f64>::new(&g).unwrap();
        let l = sample_bond_lengths::<f64>(&g, 0, 1.0, 2.0).unwrap();
        assert!(mc_variance(&s, &l, &[0], &MonteCarloConfig::new(1, 0, 1e5)).is_err());
        assert!(mc_variance(&s, &l, &[0], &MonteCarloConfig::new(10, 0, 0.0)).is_err());
        assert!(mc_variance(&s, &l, &[5], &MonteCarloConfig::new(10, 0, 1.0)).is_err());
    }

    #[test]
    fn mc_leading_coefficient_is_exact() {
        let g = build_binary_graph(1, 2).unwrap();
        let s = BondScattering::<f64>::new(&g).unwrap();
        let l = sample_bond_lengths::<f64>(&g, 0, 1.0, 2.0).unwrap();
        let est = mc_variance(&s, &l, &[0], &MonteCarloConfig::new(3000, 9, 1e5)).unwrap();
        assert!((est[0].mean - 1.0).abs() < 1e-12);
        assert!(est[0].std_error < 1e-12);
        assert_eq!(est[0].samples, 3000);
    }
}
