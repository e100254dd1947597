//! Eigenfunctions of the Lewis invariant in polar coordinates, their
//! orthonormality by Gauss quadrature, and a finite-difference application
//! of the invariant operator.

use num_complex::Complex64;
use serde::Serialize;

use crate::ep::{EpCurve, EpFamily, EpKind};
use crate::error::{Error, Result};
use crate::model::Scenario;
use crate::quadrature::{gauss_laguerre, gauss_legendre_on};

/// Generalized Laguerre `L_m^{(α)}(z)` by the three-term recurrence.
pub fn laguerre(m: u32, alpha: f64, z: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, 1.0 + alpha - z);
    if m == 0 {
        return prev;
    }
    for k in 1..m {
        let kf = f64::from(k);
        let next = ((2.0 * kf + 1.0 + alpha - z) * cur - (kf + alpha) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(f64::from).product()
}

/// Terminating Tricomi function `U(−m, b, z) = (−1)^m m! L_m^{(b−1)}(z)`.
pub fn tricomi_u_poly(m: u32, b: f64, z: f64) -> f64 {
    let sign = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
    sign * factorial(m) * laguerre(m, b - 1.0, z)
}

/// `r^{n−m} U(−m, 1−m+n, z)`. For `m > n` the zero of `U` at `z = 0`
/// cancels the pole: with `k = m − n` and `z = r²/ρ²` the product is
/// `(−1)^{m+k} n! (z/r)^k L_n^{(k)}(z)`.
pub fn radial_product(n: u32, m: u32, r: f64, z: f64) -> f64 {
    if n >= m {
        return r.powi((n - m) as i32) * tricomi_u_poly(m, 1.0 + f64::from(n) - f64::from(m), z);
    }
    let k = m - n;
    if r == 0.0 {
        return 0.0;
    }
    let sign = if (m + k).is_multiple_of(2) { 1.0 } else { -1.0 };
    sign * factorial(n) * (z / r).powi(k as i32) * laguerre(n, f64::from(k), z)
}

/// Point in the plane; `ang` is the polar angle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PolarPoint {
    pub r: f64,
    pub ang: f64,
}

impl PolarPoint {
    pub fn new(r: f64, ang: f64) -> Self {
        Self { r, ang }
    }
}

/// Quantum numbers and scale data of one eigenfunction at one time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EigenfunctionSpec {
    pub n: u32,
    pub m: u32,
    pub rho: f64,
    pub rho_dot: f64,
    pub a: f64,
    pub xi2: f64,
    pub t: f64,
}

impl EigenfunctionSpec {
    pub fn from_curve<C: EpCurve + ?Sized>(curve: &C, n: u32, m: u32, t: f64) -> Result<Self> {
        curve.check_domain(t)?;
        Ok(Self {
            n,
            m,
            rho: curve.rho(t),
            rho_dot: curve.rho_dot(t),
            a: curve.a(t),
            xi2: curve.xi2(),
            t,
        })
    }

    pub fn at(scenario: &Scenario, n: u32, m: u32, t: f64) -> Result<Self> {
        scenario.check_time(t)?;
        Self::from_curve(&scenario.ep, n, m, t)
    }

    /// `l = m − n`
    pub fn l(&self) -> i64 {
        i64::from(self.m) - i64::from(self.n)
    }

    /// `λ_n² = 1/(π n! ρ^{2n+2})`
    pub fn lambda_sq(&self) -> Result<f64> {
        let rho2 = self.rho * self.rho;
        if !(self.rho > 0.0) || !(rho2 > 0.0) {
            return Err(Error::NegativeNormalization(rho2));
        }
        Ok(1.0 / (std::f64::consts::PI * factorial(self.n) * rho2.powi(self.n as i32 + 1)))
    }

    /// Coefficient of `−r²` in the exponent: `(a − iρρ̇)/(2aρ²)`.
    fn gaussian(&self) -> Complex64 {
        Complex64::new(self.a, -self.rho * self.rho_dot) / (2.0 * self.a * self.rho * self.rho)
    }
}

fn i_pow(m: u32) -> Complex64 {
    match m % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// `φ = λ_n (iρ)^m/√m! · r^{n−m} e^{i(m−n)ang − (a − iρρ̇)r²/(2aρ²)} U(−m, 1−m+n, r²/ρ²)`
pub fn eigenfunction(spec: &EigenfunctionSpec, pt: PolarPoint) -> Result<Complex64> {
    let lambda = spec.lambda_sq()?.sqrt();
    let z = pt.r * pt.r / (spec.rho * spec.rho);
    let pre = lambda * spec.rho.powi(spec.m as i32) / factorial(spec.m).sqrt();
    let radial = radial_product(spec.n, spec.m, pt.r, z);
    let expo = Complex64::new(0.0, spec.l() as f64 * pt.ang) - spec.gaussian() * pt.r * pt.r;
    Ok(i_pow(spec.m) * pre * radial * expo.exp())
}

/// The same eigenfunction written out for each analytic family, with its
/// own normalisation, Gaussian width and Tricomi argument.
pub fn eigenfunction_specialized(family: &EpFamily, n: u32, m: u32, t: f64, pt: PolarPoint) -> Result<Complex64> {
    let (r, ang) = (pt.r, pt.ang);
    let (nf, mf) = (f64::from(n), f64::from(m));
    let pi = std::f64::consts::PI;
    let angular = Complex64::new(0.0, (mf - nf) * ang);
    // (amplitude of (iρ)^m, λ_n², Gaussian coefficient, Tricomi argument)
    let (amp, lambda_sq, gauss, z) = match family.kind {
        EpKind::ExponentialSetI {
            sigma, vartheta, mu, ..
        } => {
            let e = (-vartheta * t).exp();
            (
                (mu * (-0.5 * vartheta * t).exp()).powi(m as i32),
                1.0 / (pi * factorial(n) * (mu * mu * e).powi(n as i32 + 1)),
                Complex64::new(2.0 * sigma, mu * mu * vartheta) / (4.0 * sigma * mu * mu * e),
                r * r * (vartheta * t).exp() / (mu * mu),
            )
        }
        EpKind::RationalSetII {
            sigma,
            gamma,
            chi,
            k,
            mu,
            ..
        } => {
            let s = gamma * t + chi;
            let kf = f64::from(k);
            // k/(k+2) > 0 for every admissible k
            let qk = kf / (kf + 2.0);
            (
                mu.powi(m as i32) * ((kf + 2.0) / (kf * s)).powf(mf / kf),
                (kf * s / (kf + 2.0)).powf(2.0 * (1.0 + nf) / kf) / (pi * factorial(n) * mu.powi(2 * n as i32 + 2)),
                Complex64::new(sigma * (kf + 2.0), mu * mu * gamma) * (qk * s).powf(2.0 / kf)
                    / (2.0 * sigma * (kf + 2.0) * mu * mu),
                r * r * (qk * s).powf(2.0 / kf) / (mu * mu),
            )
        }
        EpKind::RationalCritical {
            sigma, gamma, chi, mu, ..
        } => {
            let s = gamma * t + chi;
            (
                (mu * s.sqrt()).powi(m as i32),
                1.0 / (pi * factorial(n) * (mu * mu * s).powi(n as i32 + 1)),
                Complex64::new(2.0 * sigma, -mu * mu * gamma) / (4.0 * sigma * mu * mu * s),
                r * r / (mu * mu * s),
            )
        }
    };
    if !(lambda_sq > 0.0) {
        return Err(Error::NegativeNormalization(lambda_sq));
    }
    let radial = radial_product(n, m, r, z);
    Ok(i_pow(m) * lambda_sq.sqrt() * amp / factorial(m).sqrt() * radial * (angular - gauss * r * r).exp())
}

/// Gauss rule sizes for the orthonormality integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadConfig {
    pub radial_nodes: usize,
    pub angular_nodes: usize,
    /// allowed difference between the base and refined rules
    pub tolerance: f64,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self {
            radial_nodes: 32,
            angular_nodes: 48,
            tolerance: 1e-10,
        }
    }
}

fn overlap_with(a: &EigenfunctionSpec, b: &EigenfunctionSpec, radial: usize, angular: usize) -> Result<Complex64> {
    let rho = a.rho;
    let lag = gauss_laguerre(radial);
    let leg = gauss_legendre_on(angular, 0.0, 2.0 * std::f64::consts::PI);
    let mut sum = Complex64::new(0.0, 0.0);
    for (s, ws) in lag.nodes.iter().zip(&lag.weights) {
        // r dr = (ρ²/2) ds, weight e^{−s} divided back out
        let r = rho * s.sqrt();
        let wr = 0.5 * rho * rho * ws * s.exp();
        for (ang, wa) in leg.nodes.iter().zip(&leg.weights) {
            let pt = PolarPoint::new(r, *ang);
            sum += wr * wa * eigenfunction(a, pt)?.conj() * eigenfunction(b, pt)?;
        }
    }
    Ok(sum)
}

/// `∫∫ φ_A* φ_B r dr dang` over the plane, checked against a refined rule.
pub fn orthonormality_integral(a: &EigenfunctionSpec, b: &EigenfunctionSpec, cfg: &QuadConfig) -> Result<Complex64> {
    if a.rho != b.rho || a.rho_dot != b.rho_dot || a.a != b.a {
        return Err(Error::InvalidParameter {
            name: "spec",
            reason: "both eigenfunctions must be taken at the same time".into(),
        });
    }
    let base = overlap_with(a, b, cfg.radial_nodes, cfg.angular_nodes)?;
    let refined = overlap_with(a, b, cfg.radial_nodes + 16, 2 * cfg.angular_nodes)?;
    if (base - refined).norm() > cfg.tolerance {
        return Err(Error::QuadratureNotConverged {
            estimate: base.norm(),
            refined: refined.norm(),
        });
    }
    Ok(refined)
}

/// Interior sample points for the invariant check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioGrid {
    pub radii: Vec<f64>,
    pub angles: Vec<f64>,
    /// finite-difference step in both `r` and `ang`
    pub h: f64,
}

impl RatioGrid {
    /// `nr × na` points with `r ∈ [0.3ρ, 2.5ρ]` and angles away from the
    /// branch point at 0.
    pub fn around(rho: f64, nr: usize, na: usize, h: f64) -> Self {
        let lin = |lo: f64, hi: f64, k: usize, n: usize| {
            if n == 1 {
                lo
            } else {
                lo + (hi - lo) * k as f64 / (n - 1) as f64
            }
        };
        Self {
            radii: (0..nr).map(|k| lin(0.3 * rho, 2.5 * rho, k, nr)).collect(),
            angles: (0..na).map(|k| lin(0.2, 6.0, k, na)).collect(),
            h,
        }
    }
}

/// Pointwise `(Iφ)/φ` over a grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioField {
    pub mean_re: f64,
    pub mean_im: f64,
    /// `max |ratio − mean| / |mean|`
    pub spread: f64,
    pub samples: usize,
    pub skipped: usize,
}

/// Applies `I = (ξ²/ρ² + κ²) r² − ρ²∇² + 2iκρ(r∂_r + 1)`, `κ = ρ̇/a`, by
/// centered differences and returns the spread of `Iφ/φ`. Points where
/// `|φ|` falls below `1e-8` of the largest sampled value are skipped.
pub fn invariant_apply_polar(spec: &EigenfunctionSpec, grid: &RatioGrid) -> Result<RatioField> {
    let h = grid.h;
    let (rho, kappa) = (spec.rho, spec.rho_dot / spec.a);
    let phi = |r: f64, ang: f64| eigenfunction(spec, PolarPoint::new(r, ang));
    let mut values = Vec::new();
    for &r in &grid.radii {
        for &ang in &grid.angles {
            values.push((r, ang, phi(r, ang)?));
        }
    }
    let peak = values.iter().map(|v| v.2.norm()).fold(0.0, f64::max);
    let mut ratios = Vec::new();
    let mut skipped = 0;
    for (r, ang, p) in values {
        if r <= h || p.norm() < 1e-8 * peak {
            skipped += 1;
            continue;
        }
        let (rp, rm) = (phi(r + h, ang)?, phi(r - h, ang)?);
        let (ap, am) = (phi(r, ang + h)?, phi(r, ang - h)?);
        let d1 = (rp - rm) / (2.0 * h);
        let d2 = (rp - 2.0 * p + rm) / (h * h);
        let daa = (ap - 2.0 * p + am) / (h * h);
        let lap = d2 + d1 / r + daa / (r * r);
        let i_phi = (spec.xi2 / (rho * rho) + kappa * kappa) * r * r * p - rho * rho * lap
            + Complex64::new(0.0, 2.0 * kappa * rho) * (r * d1 + p);
        ratios.push(i_phi / p);
    }
    if ratios.is_empty() {
        return Err(Error::NodeTooCloseToZeroOfPhi { skipped });
    }
    let mean = ratios.iter().sum::<Complex64>() / ratios.len() as f64;
    let spread = ratios.iter().map(|z| (z - mean).norm()).fold(0.0, f64::max) / mean.norm().max(1e-300);
    Ok(RatioField {
        mean_re: mean.re,
        mean_im: mean.im,
        spread,
        samples: ratios.len(),
        skipped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{catalog, CaseId, ScenarioParams};

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / a.norm().max(b.norm()).max(1e-300)
    }

    #[test]
    fn tricomi_examples() {
        for (b, z) in [(0.5, 0.1), (3.0, 2.0), (-1.0, 7.0)] {
            assert_eq!(tricomi_u_poly(0, b, z), 1.0);
            assert!((tricomi_u_poly(1, b, z) - (z - b)).abs() < 1e-14);
        }
        assert!((tricomi_u_poly(2, 1.0, 0.0) - 2.0).abs() < 1e-14);
        // series: U(−2, b, z) = z² − 2(b+1)z + b(b+1)
        let (b, z) = (2.5, 1.3);
        assert!((tricomi_u_poly(2, b, z) - (z * z - 2.0 * (b + 1.0) * z + b * (b + 1.0))).abs() < 1e-13);
    }

    #[test]
    fn laguerre_at_zero_is_binomial() {
        // L_m^{(α)}(0) = C(m+α, m)
        assert!((laguerre(3, 2.0, 0.0) - 10.0).abs() < 1e-13);
        assert!((laguerre(4, 0.0, 0.0) - 1.0).abs() < 1e-13);
    }

    #[test]
    fn regular_product_matches_direct_form() {
        for (n, m) in [(0, 2), (1, 3), (0, 1), (2, 3)] {
            for r in [0.3, 1.1, 2.4] {
                let rho: f64 = 0.8;
                let z = r * r / (rho * rho);
                let direct = r.powi(n as i32 - m as i32) * tricomi_u_poly(m, 1.0 + n as f64 - m as f64, z);
                let reg = radial_product(n, m, r, z);
                assert!((direct - reg).abs() <= 1e-12 * direct.abs().max(1e-12), "{n} {m} {r}");
            }
        }
        assert_eq!(radial_product(0, 2, 0.0, 0.0), 0.0);
    }

    fn constant_curve() -> EpFamily {
        EpFamily::exponential(1.0, 1.0, 0.0, 1.0, 1.0)
    }

    #[test]
    fn ground_state_is_a_unit_gaussian() {
        let spec = EigenfunctionSpec::from_curve(&constant_curve(), 0, 0, 0.0).unwrap();
        let v = eigenfunction(&spec, PolarPoint::new(0.7, 1.0)).unwrap();
        let want = (-0.49f64 / 2.0).exp() / std::f64::consts::PI.sqrt();
        assert!((v.re - want).abs() < 1e-15 && v.im.abs() < 1e-15);
        let norm = orthonormality_integral(&spec, &spec, &QuadConfig::default()).unwrap();
        assert!((norm - 1.0).norm() < 1e-12);
    }

    #[test]
    fn angular_factor() {
        let s = catalog(CaseId::Set1Case1, &ScenarioParams::fig1()).unwrap();
        for (n, m) in [(0, 1), (2, 0), (1, 3)] {
            let spec = EigenfunctionSpec::at(&s, n, m, 0.4).unwrap();
            let a = eigenfunction(&spec, PolarPoint::new(0.6, 0.3)).unwrap();
            let b = eigenfunction(&spec, PolarPoint::new(0.6, 0.3 + std::f64::consts::FRAC_PI_2)).unwrap();
            let want = Complex64::from_polar(1.0, (m as f64 - n as f64) * std::f64::consts::FRAC_PI_2);
            assert!(rel(b / a, want) < 1e-12);
        }
    }

    #[test]
    fn specialisations_match_generic() {
        let fig1 = ScenarioParams::fig1();
        let mut families: Vec<EpFamily> = CaseId::ALL.iter().map(|&c| catalog(c, &fig1).unwrap().ep).collect();
        families.push(EpFamily::rational(2.0, 1.5, 1.0, 1.0, 3, 0.9, 1.0).unwrap());
        families.push(EpFamily::rational(2.0, 1.5, 1.0, 1.0, -4, 0.9, 1.0).unwrap());
        for fam in families {
            for t in [0.0, 0.7, 2.0] {
                for (n, m) in [(0, 0), (1, 0), (0, 2), (3, 1), (2, 3)] {
                    let spec = EigenfunctionSpec::from_curve(&fam, n, m, t).unwrap();
                    for (r, ang) in [(0.2, 0.1), (0.9, 2.0), (1.7, 4.5)] {
                        let pt = PolarPoint::new(r * spec.rho, ang);
                        let g = eigenfunction(&spec, pt).unwrap();
                        let s = eigenfunction_specialized(&fam, n, m, t, pt).unwrap();
                        assert!(rel(g, s) < 1e-12, "{fam:?} t={t} ({n},{m}): {g} vs {s}");
                    }
                }
            }
        }
    }

    #[test]
    fn orthonormal_examples() {
        let s = catalog(CaseId::Set1Case1, &ScenarioParams::fig1()).unwrap();
        let cfg = QuadConfig::default();
        let sp = |n, m| EigenfunctionSpec::at(&s, n, m, 1.0).unwrap();
        assert!((orthonormality_integral(&sp(0, 0), &sp(0, 0), &cfg).unwrap() - 1.0).norm() < 1e-6);
        assert!(orthonormality_integral(&sp(0, 0), &sp(1, 1), &cfg).unwrap().norm() < 1e-6);
        assert!((orthonormality_integral(&sp(1, 0), &sp(1, 0), &cfg).unwrap() - 1.0).norm() < 1e-6);
        assert!((orthonormality_integral(&sp(0, 3), &sp(0, 3), &cfg).unwrap() - 1.0).norm() < 1e-6);
    }

    #[test]
    fn mismatched_times_are_rejected() {
        let s = catalog(CaseId::Set1Case1, &ScenarioParams::fig1()).unwrap();
        let a = EigenfunctionSpec::at(&s, 0, 0, 0.0).unwrap();
        let b = EigenfunctionSpec::at(&s, 0, 0, 1.0).unwrap();
        assert!(orthonormality_integral(&a, &b, &QuadConfig::default()).is_err());
    }

    #[test]
    fn negative_scale_is_rejected() {
        let mut spec = EigenfunctionSpec::from_curve(&constant_curve(), 0, 0, 0.0).unwrap();
        spec.rho = 0.0;
        assert!(matches!(
            eigenfunction(&spec, PolarPoint::new(1.0, 0.0)),
            Err(Error::NegativeNormalization(_))
        ));
    }

    #[test]
    fn ratio_is_constant_with_second_order_error() {
        let spec = EigenfunctionSpec::from_curve(&constant_curve(), 0, 0, 0.0).unwrap();
        let coarse = invariant_apply_polar(&spec, &RatioGrid::around(1.0, 10, 6, 2e-3)).unwrap();
        let fine = invariant_apply_polar(&spec, &RatioGrid::around(1.0, 10, 6, 1e-3)).unwrap();
        assert!(fine.spread <= 1e-4, "{}", fine.spread);
        let order = coarse.spread / fine.spread;
        assert!((3.0..5.0).contains(&order), "{order}");
    }

    #[test]
    fn ratio_is_constant_for_a_damped_excited_state() {
        let s = catalog(CaseId::Set1Case1, &ScenarioParams::fig1()).unwrap();
        let spec = EigenfunctionSpec::at(&s, 1, 0, 0.0).unwrap();
        let f = invariant_apply_polar(&spec, &RatioGrid::around(spec.rho, 10, 6, 1e-3)).unwrap();
        assert!(f.spread <= 1e-4, "{}", f.spread);
        assert!(f.samples > 0);
    }
}
