//! Lewis phase `Θ_{n,l}(t) = (n+l) ∫₀ᵗ (c − a/ρ²) dT` by adaptive
//! quadrature, and the elementary closed forms available for some cases.

use num_complex::Complex64;
use serde::Serialize;

use crate::ep::EpCurve;
use crate::error::{Error, Result};
use crate::model::{CaseId, Scenario};
use crate::nc::NcPair;
use crate::quadrature::{integrate, QuadOptions, QuadResult};
use crate::wavefunction::{eigenfunction, EigenfunctionSpec, PolarPoint};

/// `m = n + l`, rejecting negative values.
pub fn tower_index(n: u32, l: i64) -> Result<u32> {
    let m = i64::from(n) + l;
    u32::try_from(m).map_err(|_| Error::InvalidParameter {
        name: "l",
        reason: format!("n + l must be a non-negative integer, got n = {n}, l = {l}"),
    })
}

/// `c(T) − a(T)/ρ(T)²`
pub fn phase_rate(scenario: &Scenario, t: f64) -> Result<f64> {
    let c = NcPair::new(scenario).c(t)?;
    let (a, rho) = (scenario.ep.a(t), scenario.ep.rho(t));
    let v = c - a / (rho * rho);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::IntegrandSingular { t })
    }
}

/// Default tolerances: absolute `1e-10·(1+|t|)`, relative `1e-13`.
pub fn phase_options(t: f64) -> QuadOptions {
    QuadOptions {
        epsabs: 1e-10 * (1.0 + t.abs()),
        ..QuadOptions::default()
    }
}

/// `∫_{t0}^{t1} (c − a/ρ²) dT` with error estimate.
pub fn phase_rate_integral(scenario: &Scenario, t0: f64, t1: f64, opts: &QuadOptions) -> Result<QuadResult> {
    integrate(|x| phase_rate(scenario, x), t0, t1, opts)
}

/// Phase by quadrature; exactly 0 when `n + l = 0`.
pub fn phase_quadrature(scenario: &Scenario, n: u32, l: i64, t: f64) -> Result<f64> {
    Ok(phase_quadrature_with(scenario, n, l, t, &phase_options(t))?.value)
}

/// Quadrature phase with the error estimate scaled by `n + l`.
pub fn phase_quadrature_with(
    scenario: &Scenario,
    n: u32,
    l: i64,
    t: f64,
    opts: &QuadOptions,
) -> Result<QuadResult> {
    let m = tower_index(n, l)?;
    if m == 0 {
        return Ok(QuadResult {
            value: 0.0,
            error: 0.0,
            evaluations: 0,
            intervals: 0,
        });
    }
    let r = phase_rate_integral(scenario, 0.0, t, opts)?;
    let mf = f64::from(m);
    Ok(QuadResult {
        value: mf * r.value,
        error: mf * r.error,
        ..r
    })
}

/// Real part of `atanh(x) − atanh(y)` after checking that the imaginary
/// parts of the principal values cancel.
fn atanh_pair(x: f64, y: f64, term: &'static str) -> Result<f64> {
    let d = Complex64::new(x, 0.0).atanh() - Complex64::new(y, 0.0).atanh();
    if d.im.abs() > 1e-10 {
        return Err(Error::DomainError { term, imag: d.im });
    }
    Ok(d.re)
}

/// `atanh` pairs, `atan` pairs and logs for the constant and decaying field
/// exponential cases; `rate` is Γ for a constant field and 2Γ for a field
/// decaying like the damping factor.
fn exponential_decay_form(scenario: &Scenario, rate: f64, t: f64) -> Result<f64> {
    let p = &scenario.params;
    let (m, q, b0, w0, sigma, dc) = (p.mass, p.charge, p.b0, p.omega0, p.sigma, p.delta_c);
    let mu = scenario.ep.mu();
    let g = rate;
    let ms1 = m * sigma - 1.0;
    let qb2s = q * q * b0 * b0 * sigma;
    let x = |t: f64| {
        let v = qb2s / (4.0 * m) + w0 * w0 * ms1 * (2.0 * g * t).exp();
        if v < 0.0 {
            Err(Error::DomainError { term: "sqrt(q^2 B0^2 sigma/4M + w0^2 (M sigma - 1) e^(2 rate t))", imag: (-v).sqrt() })
        } else {
            Ok(v.sqrt())
        }
    };
    let root = |v: f64, term: &'static str| {
        if v < 0.0 {
            Err(Error::DomainError { term, imag: (-v).sqrt() })
        } else {
            Ok(v.sqrt())
        }
    };
    let (xt, x0) = (x(t)?, x(0.0)?);
    let sq_ms1 = root(ms1, "sqrt(M sigma - 1)")?;
    let s_free = root(dc / m - w0 * w0, "sqrt(Delta/M - w0^2)")?;
    let ms = root(m * dc - m * m * w0 * w0, "sqrt(M Delta - M^2 w0^2)")?;
    let egt = (g * t).exp();

    let mut v = (s_free - sigma / (mu * mu)) * t;
    if ms1 != 0.0 {
        v += w0 * sq_ms1 / g * ((w0 * sq_ms1 * egt + xt) / (w0 * sq_ms1 + x0)).ln();
    }
    v += w0 / g * ((w0 * egt / xt).atan() - (w0 / x0).atan());
    if q * b0 == 0.0 {
        return Err(Error::DomainError { term: "atanh(2M X/(q B0)) with q B0 = 0", imag: f64::INFINITY });
    }
    v += ms / (m * g) * atanh_pair(2.0 * m * xt / (q * b0), 2.0 * m * x0 / (q * b0), "atanh(2M X/(q B0))")?;
    let y = |t: f64| ((qb2s + 4.0 * m * w0 * w0 * ms1 * (2.0 * g * t).exp()) / qb2s).sqrt();
    let s_sigma = root((dc - m * w0 * w0) * sigma, "sqrt((Delta - M w0^2) sigma)")?;
    v -= s_sigma / g * atanh_pair(y(t), y(0.0), "atanh(sqrt(1 + 4M w0^2 (M sigma - 1) e^(2 rate t)/(q^2 B0^2 sigma)))")?;
    v -= w0 / g * ((2.0 * m * w0 * egt / (q * b0)).atan() - (2.0 * m * w0 / (q * b0)).atan());
    let qb2 = q * q * b0 * b0;
    v += ms / (2.0 * g * m) * ((qb2 * (-2.0 * g * t).exp() + 4.0 * m * m * w0 * w0) / (qb2 + 4.0 * m * m * w0 * w0)).ln();
    Ok(v)
}

/// The constant bracket shared by the growing-field exponential case and the
/// critical rational case.
fn constant_cross_term(scenario: &Scenario) -> Result<f64> {
    let p = &scenario.params;
    let (m, q, b0, w0, sigma, dc) = (p.mass, p.charge, p.b0, p.omega0, p.sigma, p.delta_c);
    let ms2 = m * dc - m * m * w0 * w0;
    let r2 = q * q * b0 * b0 * sigma / (4.0 * m) + w0 * w0 * (m * sigma - 1.0);
    if ms2 < 0.0 || r2 < 0.0 || dc / m - w0 * w0 < 0.0 {
        return Err(Error::DomainError {
            term: "constant radicands",
            imag: (-ms2.min(r2)).max(0.0).sqrt(),
        });
    }
    let (ms, r) = (ms2.sqrt(), r2.sqrt());
    let den = q * q * b0 * b0 + 4.0 * m * m * w0 * w0;
    let bracket = (4.0 * m * m * w0 * w0 + 2.0 * q * b0 * ms) * r - 2.0 * q * b0 * m * w0 * w0 - q * q * b0 * b0 / m * ms;
    Ok(bracket / den + (dc / m - w0 * w0).sqrt())
}

/// Closed-form phase for the cases that have an elementary one.
pub fn phase_closed_form(scenario: &Scenario, n: u32, l: i64, t: f64) -> Result<f64> {
    let m = f64::from(tower_index(n, l)?);
    let case = scenario.case.ok_or(Error::InvalidParameter {
        name: "case",
        reason: "closed-form phases exist only for catalog cases".into(),
    })?;
    let g = scenario.params.gamma;
    let mu = scenario.ep.mu();
    let sigma = scenario.params.sigma;
    let per_unit = match case {
        CaseId::Set1Case1 => exponential_decay_form(scenario, g, t)?,
        CaseId::Set1Case3 => exponential_decay_form(scenario, 2.0 * g, t)?,
        CaseId::Set1Case2 => (constant_cross_term(scenario)? - sigma / (mu * mu)) * t,
        CaseId::Set2Case2 => {
            let chi = scenario.params.chi;
            let s = g * t + chi;
            if !(s > 0.0) {
                return Err(Error::ProfileDomain { t, value: s });
            }
            (constant_cross_term(scenario)? - sigma / (mu * mu)) / g * (s / chi).ln()
        }
        CaseId::Set1Case4 | CaseId::Set2Case1 => return Err(Error::OutOfCatalog(case)),
    };
    Ok(m * per_unit)
}

/// Phase sampled on a grid by both routes where available.
#[derive(Debug, Clone, Serialize)]
pub struct PhaseSeries {
    pub grid: Vec<f64>,
    pub theta_quad: Vec<f64>,
    /// accumulated quadrature error estimate
    pub error: Vec<f64>,
    pub theta_closed: Option<Vec<f64>>,
    pub n: u32,
    pub l: i64,
}

impl PhaseSeries {
    /// Largest `|quad − closed| / max(1, |quad|)`, if both exist.
    pub fn max_discrepancy(&self) -> Option<f64> {
        let closed = self.theta_closed.as_ref()?;
        Some(
            self.theta_quad
                .iter()
                .zip(closed)
                .map(|(q, c)| (q - c).abs() / q.abs().max(1.0))
                .fold(0.0, f64::max),
        )
    }
}

/// Cumulative quadrature over consecutive grid intervals, plus the closed
/// form when the case has one. The grid must be non-decreasing.
pub fn phase_series(scenario: &Scenario, n: u32, l: i64, grid: &[f64]) -> Result<PhaseSeries> {
    let m = f64::from(tower_index(n, l)?);
    let mut theta = Vec::with_capacity(grid.len());
    let mut error = Vec::with_capacity(grid.len());
    let (mut acc, mut acc_err, mut prev) = (0.0, 0.0, 0.0);
    for &t in grid {
        if t < prev {
            return Err(Error::InvalidParameter {
                name: "grid",
                reason: "phase grid must be non-decreasing and start at t >= 0".into(),
            });
        }
        if m != 0.0 && t > prev {
            let r = phase_rate_integral(scenario, prev, t, &phase_options(t - prev))?;
            acc += r.value;
            acc_err += r.error;
        }
        prev = t;
        theta.push(m * acc);
        error.push(m * acc_err);
    }
    let closed = match grid.iter().map(|&t| phase_closed_form(scenario, n, l, t)).collect::<Result<Vec<_>>>() {
        Ok(v) => Some(v),
        Err(Error::OutOfCatalog(_)) => None,
        Err(Error::InvalidParameter { name: "case", .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(PhaseSeries {
        grid: grid.to_vec(),
        theta_quad: theta,
        error,
        theta_closed: closed,
        n,
        l,
    })
}

/// `e^{iΘ_{n,m−n}(t)} φ_{n,m−n}(r, ang)` with the quadrature phase.
pub fn eigenstate_assemble(scenario: &Scenario, n: u32, m: u32, t: f64, pt: PolarPoint) -> Result<Complex64> {
    let l = i64::from(m) - i64::from(n);
    let theta = phase_quadrature(scenario, n, l, t)?;
    let spec = EigenfunctionSpec::at(scenario, n, m, t)?;
    Ok(Complex64::from_polar(1.0, theta) * eigenfunction(&spec, pt)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{catalog, ScenarioParams};

    fn fig1(case: CaseId) -> Scenario {
        catalog(case, &ScenarioParams::fig1()).unwrap()
    }

    #[test]
    fn zero_at_origin_and_for_ground_tower() {
        for case in CaseId::ALL {
            let s = fig1(case);
            assert_eq!(phase_quadrature(&s, 1, 0, 0.0).unwrap(), 0.0);
            assert_eq!(phase_quadrature(&s, 2, -2, 3.0).unwrap(), 0.0);
            if let Ok(v) = phase_closed_form(&s, 1, 1, 0.0) {
                assert_eq!(v, 0.0, "{case}");
            }
        }
    }

    #[test]
    fn negative_tower_is_rejected() {
        assert!(phase_quadrature(&fig1(CaseId::Set1Case1), 1, -2, 1.0).is_err());
    }

    #[test]
    fn out_of_catalog_cases() {
        for case in [CaseId::Set1Case4, CaseId::Set2Case1] {
            assert!(matches!(
                phase_closed_form(&fig1(case), 0, 1, 1.0),
                Err(Error::OutOfCatalog(c)) if c == case
            ));
        }
    }

    #[test]
    fn closed_forms_match_quadrature() {
        for case in [CaseId::Set1Case1, CaseId::Set1Case2, CaseId::Set1Case3, CaseId::Set2Case2] {
            let s = fig1(case);
            for t in [0.5, 1.0, 2.5, 4.0] {
                let q = phase_quadrature(&s, 0, 1, t).unwrap();
                let c = phase_closed_form(&s, 0, 1, t).unwrap();
                assert!((q - c).abs() <= 1e-6 * q.abs().max(1.0), "{case} t={t}: {q} vs {c}");
            }
        }
    }

    #[test]
    fn growing_field_phase_is_linear() {
        let s = fig1(CaseId::Set1Case2);
        let slope = phase_quadrature(&s, 1, 1, 1.0).unwrap();
        for t in [0.5, 2.0, 5.0] {
            let v = phase_quadrature(&s, 1, 1, t).unwrap();
            assert!((v / t - slope).abs() <= 1e-10 * slope.abs());
        }
    }

    #[test]
    fn series_matches_pointwise() {
        let s = fig1(CaseId::Set1Case1);
        let grid: Vec<f64> = (0..=8).map(|i| 0.5 * i as f64).collect();
        let ser = phase_series(&s, 0, 2, &grid).unwrap();
        assert_eq!(ser.theta_quad[0], 0.0);
        assert!(ser.max_discrepancy().unwrap() < 1e-6);
        let direct = phase_quadrature(&s, 0, 2, 4.0).unwrap();
        assert!((ser.theta_quad[8] - direct).abs() <= 1e-9 * direct.abs());
    }

    #[test]
    fn atanh_pair_rejects_mixed_sides() {
        assert!(atanh_pair(2.0, 3.0, "x").is_ok());
        assert!(matches!(atanh_pair(2.0, 0.5, "x"), Err(Error::DomainError { .. })));
        let d = atanh_pair(0.3, 0.1, "x").unwrap();
        assert!((d - (0.3f64.atanh() - 0.1f64.atanh())).abs() < 1e-15);
    }
}
