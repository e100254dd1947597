//! Adaptive Gauss-Kronrod integration and Gauss rules built by the
//! Golub-Welsch eigenvalue method.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
// Gauss weights on the odd Kronrod nodes (xgk[1], xgk[3], xgk[5], xgk[7])
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    pub epsabs: f64,
    pub epsrel: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            epsabs: 1e-10,
            epsrel: 1e-13,
            max_intervals: 4000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    /// Sum of per-interval `|K15 − G7|`.
    pub error: f64,
    pub evaluations: usize,
    pub intervals: usize,
}

struct Piece {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn gk15<F>(f: &mut F, a: f64, b: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut eval = |x: f64| -> Result<f64> {
        let v = f(x)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::IntegrandSingular { t: x })
        }
    };
    let fc = eval(c)?;
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for i in 0..7 {
        let dx = h * XGK[i];
        let s = eval(c - dx)? + eval(c + dx)?;
        k += WGK[i] * s;
        if i % 2 == 1 {
            g += WG[i / 2] * s;
        }
    }
    Ok((k * h, ((k - g) * h).abs()))
}

/// `∫ₐᵇ f` by globally adaptive bisection on the interval with the largest
/// error estimate, until the total estimate is within
/// `max(epsabs, epsrel·|I|)`.
pub fn integrate<F>(mut f: F, a: f64, b: f64, opts: &QuadOptions) -> Result<QuadResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    if a == b {
        return Ok(QuadResult {
            value: 0.0,
            error: 0.0,
            evaluations: 0,
            intervals: 0,
        });
    }
    if b < a {
        let r = integrate(f, b, a, opts)?;
        return Ok(QuadResult {
            value: -r.value,
            ..r
        });
    }
    let (v, e) = gk15(&mut f, a, b)?;
    let mut pieces = vec![Piece { a, b, value: v, error: e }];
    let mut evaluations = 15;
    loop {
        let total: f64 = pieces.iter().map(|p| p.value).sum();
        let err: f64 = pieces.iter().map(|p| p.error).sum();
        if err <= opts.epsabs.max(opts.epsrel * total.abs()) {
            return Ok(QuadResult {
                value: total,
                error: err,
                evaluations,
                intervals: pieces.len(),
            });
        }
        if pieces.len() >= opts.max_intervals {
            return Err(Error::QuadratureNotConverged {
                estimate: total,
                refined: err,
            });
        }
        let (idx, _) = pieces
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .expect("non-empty");
        let worst = pieces.swap_remove(idx);
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            return Err(Error::QuadratureNotConverged {
                estimate: total,
                refined: err,
            });
        }
        let (v1, e1) = gk15(&mut f, worst.a, mid)?;
        let (v2, e2) = gk15(&mut f, mid, worst.b)?;
        evaluations += 30;
        pieces.push(Piece { a: worst.a, b: mid, value: v1, error: e1 });
        pieces.push(Piece { a: mid, b: worst.b, value: v2, error: e2 });
    }
}

/// Nodes and weights of an `n`-point Gauss rule.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Golub-Welsch: eigenvalues of the Jacobi matrix are the nodes, the squared
/// first eigenvector components times `μ₀` the weights.
fn golub_welsch(diag: &[f64], off: &[f64], mu0: f64) -> GaussRule {
    let n = diag.len();
    let mut j = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        j[(i, i)] = diag[i];
        if i + 1 < n {
            j[(i, i + 1)] = off[i];
            j[(i + 1, i)] = off[i];
        }
    }
    let eig = j.symmetric_eigen();
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|k| (eig.eigenvalues[k], mu0 * eig.eigenvectors[(0, k)].powi(2)))
        .collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    GaussRule {
        nodes: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1).collect(),
    }
}

/// Gauss-Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> GaussRule {
    let diag = vec![0.0; n];
    let off: Vec<f64> = (1..n)
        .map(|k| {
            let k = k as f64;
            k / (4.0 * k * k - 1.0).sqrt()
        })
        .collect();
    golub_welsch(&diag, &off, 2.0)
}

/// Gauss-Legendre rule mapped to `[a, b]`.
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> GaussRule {
    let r = gauss_legendre(n);
    let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
    GaussRule {
        nodes: r.nodes.iter().map(|x| c + h * x).collect(),
        weights: r.weights.iter().map(|w| h * w).collect(),
    }
}

/// Gauss-Laguerre rule for `∫₀^∞ e^{−s} g(s) ds`.
pub fn gauss_laguerre(n: usize) -> GaussRule {
    let diag: Vec<f64> = (0..n).map(|k| 2.0 * k as f64 + 1.0).collect();
    let off: Vec<f64> = (1..n).map(|k| k as f64).collect();
    golub_welsch(&diag, &off, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn legendre_is_exact_for_polynomials() {
        let r = gauss_legendre(10);
        for deg in 0..20 {
            let got: f64 = r.nodes.iter().zip(&r.weights).map(|(x, w)| w * x.powi(deg)).sum();
            let want = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
            assert!((got - want).abs() < 1e-14, "deg {deg}: {got} vs {want}");
        }
    }

    #[test]
    fn laguerre_moments_are_factorials() {
        let r = gauss_laguerre(16);
        let mut fact = 1.0;
        for deg in 0..30 {
            if deg > 0 {
                fact *= deg as f64;
            }
            let got: f64 = r.nodes.iter().zip(&r.weights).map(|(x, w)| w * x.powi(deg)).sum();
            assert!((got - fact).abs() <= 1e-12 * fact, "deg {deg}");
        }
    }

    #[test]
    fn adaptive_handles_peaks() {
        // ∫₀¹ 1/(1e-4 + x²) dx = 100 atan(100)
        let r = integrate(|x| Ok(1.0 / (1e-4 + x * x)), 0.0, 1.0, &QuadOptions::default()).unwrap();
        let want = 100.0 * 100f64.atan();
        assert!((r.value - want).abs() < 1e-9, "{} {}", r.value, want);
    }

    #[test]
    fn reversed_and_empty_intervals() {
        let o = QuadOptions::default();
        assert_eq!(integrate(Ok, 1.0, 1.0, &o).unwrap().value, 0.0);
        let r = integrate(|x| Ok(x.exp()), 1.0, 0.0, &o).unwrap();
        assert!((r.value + (1f64.exp() - 1.0)).abs() < 1e-14);
    }

    #[test]
    fn singular_integrand_is_reported() {
        let err = integrate(|x| Ok(1.0 / (x - 0.5)), 0.0, 1.0, &QuadOptions::default()).unwrap_err();
        assert!(matches!(err, Error::IntegrandSingular { .. } | Error::QuadratureNotConverged { .. }));
        let err = integrate(|x| Ok((x - 0.5).ln()), 0.0, 1.0, &QuadOptions::default()).unwrap_err();
        assert!(matches!(err, Error::IntegrandSingular { .. }));
    }

    proptest! {
        #[test]
        fn gaussian_integral(c in 0.1f64..5.0) {
            let r = integrate(|x| Ok((-c * x * x).exp()), -20.0, 20.0, &QuadOptions::default()).unwrap();
            let want = (std::f64::consts::PI / c).sqrt();
            prop_assert!((r.value - want).abs() < 1e-10);
            prop_assert!((r.value - want).abs() <= r.error.max(1e-13));
        }
    }
}
