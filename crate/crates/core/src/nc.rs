//! Time-dependent noncommutativity parameters `θ(t)`, `Ω(t)` obtained by
//! inverting the `a` and `b` coefficient formulas against an EP family, and
//! the resulting cross-term coefficient `c(t)`.
//!
//! Writing `K = q²B²f/(4M) + Mω²/f`, the inversions are
//!
//! ```text
//! θ = (2/K)(±R − qBf/(2M)),   R² = K a − ω²
//! Ω = −qB ± (2M/f) S,         S² = f b/M − ω²
//! ```
//!
//! The `+` roots are the default branch.

use serde::Serialize;

use crate::algebra::Couplings;
use crate::ep::EpCurve;
use crate::error::{Error, Result};
use crate::model::{CaseId, Scenario};
use crate::xprec::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum RootBranch {
    /// `+` in front of both square roots.
    PlusRoots,
    /// `−` in front of both square roots.
    MinusRoots,
}

impl RootBranch {
    fn sign(self) -> f64 {
        match self {
            RootBranch::PlusRoots => 1.0,
            RootBranch::MinusRoots => -1.0,
        }
    }
}

/// Model inputs at one time lifted into a generic scalar.
#[derive(Debug, Clone, Copy)]
pub struct CouplingsT<T> {
    pub mass: T,
    pub charge: T,
    pub f: T,
    pub omega: T,
    pub bfield: T,
}

impl<T: Real> CouplingsT<T> {
    pub fn from_f64(c: &Couplings) -> Self {
        Self {
            mass: T::from_f64(c.mass),
            charge: T::from_f64(c.charge),
            f: T::from_f64(c.f),
            omega: T::from_f64(c.omega),
            bfield: T::from_f64(c.bfield),
        }
    }

    pub fn kappa(&self) -> T {
        let qb = self.charge * self.bfield;
        let four = T::from_f64(4.0);
        qb * qb * self.f / (four * self.mass) + self.mass * self.omega * self.omega / self.f
    }

    /// `K a − ω²`
    pub fn theta_radicand(&self, a_target: T) -> T {
        self.kappa() * a_target - self.omega * self.omega
    }

    /// `f b / M − ω²`
    pub fn omega_radicand(&self, b_target: T) -> T {
        self.f * b_target / self.mass - self.omega * self.omega
    }

    /// `(2/K)(r − qBf/(2M))` for a signed root `r`.
    pub fn theta_from_root(&self, r: T) -> T {
        let two = T::from_f64(2.0);
        let lin = self.charge * self.bfield * self.f / (two * self.mass);
        two / self.kappa() * (r - lin)
    }

    /// `−qB + (2M/f) s` for a signed root `s`.
    pub fn omega_from_root(&self, s: T) -> T {
        let two = T::from_f64(2.0);
        -(self.charge * self.bfield) + two * self.mass / self.f * s
    }

    /// Cross-term coefficient evaluated term by term from `(θ, Ω)`.
    pub fn c_literal(&self, theta: T, omega_nc: T) -> T {
        let (one, two, four) = (T::from_f64(1.0), T::from_f64(2.0), T::from_f64(4.0));
        let qbf_m = self.charge * self.bfield * self.f / self.mass;
        (qbf_m * (one + theta * omega_nc / four) + omega_nc * self.f / self.mass + self.kappa() * theta)
            / two
    }

    /// The same coefficient in terms of the signed roots `r`, `s`:
    /// `[4M²ω²(r + s) + 2MqBf(rs − ω²)] / (q²B²f² + 4M²ω²)`.
    ///
    /// Free of the `Ω ≈ −qB` cancellation that ruins the literal route for
    /// large fields.
    pub fn c_from_roots(&self, r: T, s: T) -> T {
        let (two, four) = (T::from_f64(2.0), T::from_f64(4.0));
        let m = self.mass;
        let w2 = self.omega * self.omega;
        let qbf = self.charge * self.bfield * self.f;
        let den = qbf * qbf + four * m * m * w2;
        (four * m * m * w2 * (r + s) + two * m * qbf * (r * s - w2)) / den
    }
}

fn signed_root(radicand: f64, which: &'static str, t: f64, branch: RootBranch) -> Result<f64> {
    if radicand < 0.0 {
        return Err(Error::NegativeRadicand {
            which,
            t,
            value: radicand,
        });
    }
    Ok(branch.sign() * radicand.sqrt())
}

/// Root of the `a` equation for `θ`. Falls back to the linear solution when
/// `K = 0`.
pub fn solve_theta(cp: &Couplings, a_target: f64, t: f64, branch: RootBranch) -> Result<f64> {
    let c = CouplingsT::<f64>::from_f64(cp);
    let k = c.kappa();
    if k == 0.0 {
        let lin = cp.charge * cp.bfield * cp.f / (2.0 * cp.mass);
        if lin == 0.0 {
            return Err(Error::DegenerateQuadratic { which: "theta", t });
        }
        return Ok((a_target - cp.f / cp.mass) / lin);
    }
    let r = signed_root(c.theta_radicand(a_target), "theta", t, branch)?;
    Ok(c.theta_from_root(r))
}

/// Root of the `b` equation for `Ω`.
pub fn solve_omega(cp: &Couplings, b_target: f64, t: f64, branch: RootBranch) -> Result<f64> {
    if !(cp.f > 0.0) {
        return Err(Error::NonPositiveDamping { t, value: cp.f });
    }
    let c = CouplingsT::<f64>::from_f64(cp);
    let s = signed_root(c.omega_radicand(b_target), "Omega", t, branch)?;
    Ok(c.omega_from_root(s))
}

/// Cross-term coefficient from `(θ, Ω)` term by term.
pub fn coefficient_c(cp: &Couplings, theta: f64, omega_nc: f64) -> f64 {
    CouplingsT::<f64>::from_f64(cp).c_literal(theta, omega_nc)
}

/// NC parameters and cross term at one time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NcPoint {
    pub t: f64,
    pub theta: f64,
    pub omega_nc: f64,
    /// cross term via the cancellation-free root form
    pub c: f64,
    /// cross term evaluated term by term from `(θ, Ω)`
    pub c_literal: f64,
    pub theta_radicand: f64,
    pub omega_radicand: f64,
    pub branch: RootBranch,
}

/// `θ(t)`, `Ω(t)` for a scenario on a chosen root branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NcPair {
    pub scenario: Scenario,
    pub branch: RootBranch,
}

impl NcPair {
    pub fn new(scenario: &Scenario) -> Self {
        Self {
            scenario: *scenario,
            branch: RootBranch::PlusRoots,
        }
    }

    pub fn with_branch(scenario: &Scenario, branch: RootBranch) -> Self {
        Self {
            scenario: *scenario,
            branch,
        }
    }

    pub fn at(&self, t: f64) -> Result<NcPoint> {
        let cp = self.scenario.couplings(t)?;
        let ep = &self.scenario.ep;
        let (a, b) = (ep.a(t), ep.b(t));
        let theta = solve_theta(&cp, a, t, self.branch)?;
        let omega_nc = solve_omega(&cp, b, t, self.branch)?;
        let ct = CouplingsT::<f64>::from_f64(&cp);
        let (rr, sr) = (ct.theta_radicand(a), ct.omega_radicand(b));
        let sign = self.branch.sign();
        let c = if ct.kappa() == 0.0 {
            ct.c_literal(theta, omega_nc)
        } else {
            ct.c_from_roots(sign * rr.sqrt(), sign * sr.sqrt())
        };
        Ok(NcPoint {
            t,
            theta,
            omega_nc,
            c,
            c_literal: ct.c_literal(theta, omega_nc),
            theta_radicand: rr,
            omega_radicand: sr,
            branch: self.branch,
        })
    }

    pub fn theta(&self, t: f64) -> Result<f64> {
        Ok(self.at(t)?.theta)
    }

    pub fn omega_nc(&self, t: f64) -> Result<f64> {
        Ok(self.at(t)?.omega_nc)
    }

    pub fn c(&self, t: f64) -> Result<f64> {
        Ok(self.at(t)?.c)
    }
}

/// `θ(t)Ω(t)` for the two cases where it is time independent.
pub fn theta_omega_product(scenario: &Scenario, t: f64) -> Result<f64> {
    match scenario.case {
        Some(CaseId::Set1Case2) | Some(CaseId::Set2Case2) => {
            let p = NcPair::new(scenario).at(t)?;
            Ok(p.theta * p.omega_nc)
        }
        Some(other) => Err(Error::NotApplicableCase(other)),
        None => Err(Error::InvalidParameter {
            name: "case",
            reason: "the theta-Omega product is only defined for catalog cases".into(),
        }),
    }
}

/// Cross term in extended precision: `(literal, root form)` evaluated with
/// the scalar type `T` from the same f64 inputs.
pub fn cross_term_in<T: Real>(scenario: &Scenario, t: f64) -> Result<(T, T)> {
    let cp = scenario.couplings(t)?;
    let ct = CouplingsT::<T>::from_f64(&cp);
    let a = T::from_f64(scenario.ep.a(t));
    let b = T::from_f64(scenario.ep.b(t));
    let (rr, sr) = (ct.theta_radicand(a), ct.omega_radicand(b));
    if rr < T::zero() || sr < T::zero() {
        return Err(Error::NegativeRadicand {
            which: if rr < T::zero() { "theta" } else { "Omega" },
            t,
            value: if rr < T::zero() { rr.to_f64() } else { sr.to_f64() },
        });
    }
    let (r, s) = (rr.sqrt(), sr.sqrt());
    let theta = ct.theta_from_root(r);
    let omega_nc = ct.omega_from_root(s);
    Ok((ct.c_literal(theta, omega_nc), ct.c_from_roots(r, s)))
}

/// Per-case closed forms for `θ`, `Ω`, `c` as printed for each catalog
/// case, transcribed independently of the generic inversion.
pub mod printed {
    use crate::error::{Error, Result};
    use crate::model::{CaseId, ScenarioParams};

    struct Consts {
        m: f64,
        q: f64,
        b0: f64,
        w0: f64,
        g: f64,
        sigma: f64,
        delta_c: f64,
        chi: f64,
    }

    fn consts(p: &ScenarioParams) -> Consts {
        Consts {
            m: p.mass,
            q: p.charge,
            b0: p.b0,
            w0: p.omega0,
            g: p.gamma,
            sigma: p.sigma,
            delta_c: p.delta_c,
            chi: p.chi,
        }
    }

    fn root(x: f64, which: &'static str, t: f64) -> Result<f64> {
        if x < 0.0 {
            Err(Error::NegativeRadicand { which, t, value: x })
        } else {
            Ok(x.sqrt())
        }
    }

    /// Exponential family with arbitrary `(ϑ, δ, Λ)`.
    pub fn theta_set1_general(p: &ScenarioParams, vartheta: f64, delta: f64, lambda: f64, t: f64) -> Result<f64> {
        let k = consts(p);
        let (m, q, b0, w0, g) = (k.m, k.q, k.b0, k.w0, k.g);
        let den = q * q * b0 * b0 * (2.0 * (lambda - g) * t).exp() + 4.0 * m * m * w0 * w0 * (-delta * t).exp();
        let rad = q * q * b0 * b0 * k.sigma * ((2.0 * lambda - g - vartheta) * t).exp() / (4.0 * m)
            + w0 * w0 * (-delta * t).exp() * (m * k.sigma * ((g - vartheta) * t).exp() - 1.0);
        let lin = q * b0 * ((lambda - g) * t).exp() / (2.0 * m);
        Ok(8.0 * m * (-g * t).exp() / den * (root(rad, "theta", t)? - lin))
    }

    pub fn omega_set1_general(p: &ScenarioParams, vartheta: f64, delta: f64, lambda: f64, t: f64) -> Result<f64> {
        let k = consts(p);
        let (m, w0, g) = (k.m, k.w0, k.g);
        let rad = m * k.delta_c * ((vartheta - g) * t).exp() - m * m * w0 * w0 * (-delta * t).exp();
        Ok(-k.q * k.b0 * (lambda * t).exp() + 2.0 * (g * t).exp() * root(rad, "Omega", t)?)
    }

    pub fn theta(case: CaseId, p: &ScenarioParams, t: f64) -> Result<f64> {
        let k = consts(p);
        let (m, q, b0, w0, g, sigma) = (k.m, k.q, k.b0, k.w0, k.g, k.sigma);
        let e = |x: f64| (x * t).exp();
        Ok(match case {
            CaseId::Set1Case1 => {
                let den = q * q * b0 * b0 * e(-2.0 * g) + 4.0 * m * m * w0 * w0;
                let rad = q * q * b0 * b0 * sigma * e(-2.0 * g) / (4.0 * m) + w0 * w0 * (m * sigma - 1.0);
                8.0 * m * e(-g) / den * (root(rad, "theta", t)? - q * b0 * e(-g) / (2.0 * m))
            }
            CaseId::Set1Case2 => {
                let den = q * q * b0 * b0 + 4.0 * m * m * w0 * w0;
                let rad = q * q * b0 * b0 * sigma / (4.0 * m) + w0 * w0 * (m * sigma - 1.0);
                8.0 * m * e(-g) / den * (root(rad, "theta", t)? - q * b0 / (2.0 * m))
            }
            CaseId::Set1Case3 => {
                let den = q * q * b0 * b0 * e(-4.0 * g) + 4.0 * m * m * w0 * w0;
                let rad = q * q * b0 * b0 * sigma * e(-4.0 * g) / (4.0 * m) + w0 * w0 * (m * sigma - 1.0);
                8.0 * m * e(-g) / den * (root(rad, "theta", t)? - q * b0 * e(-2.0 * g) / (2.0 * m))
            }
            CaseId::Set1Case4 => {
                let den = q * q * b0 * b0 + 4.0 * m * m * w0 * w0 * e(-g);
                let rad = q * q * b0 * b0 * sigma / (4.0 * m) + w0 * w0 * e(-g) * (m * sigma - 1.0);
                8.0 * m * e(-g) / den * (root(rad, "theta", t)? - q * b0 / (2.0 * m))
            }
            CaseId::Set2Case1 => {
                let s = g * t + k.chi;
                let den = q * q * b0 * b0 + 4.0 * m * m * w0 * w0;
                let rad = q * q * b0 * b0 * sigma / m + w0 * w0 * 4.0 * sigma * m - w0 * w0 * s * s;
                8.0 * m / den * (root(rad, "theta", t)? - q * b0 * s / (2.0 * m))
            }
            CaseId::Set2Case2 => {
                let s = g * t + k.chi;
                let den = q * q * b0 * b0 + 4.0 * m * m * w0 * w0;
                let rad = q * q * b0 * b0 * sigma / (4.0 * m) + w0 * w0 * (m * sigma - 1.0);
                8.0 * m * s / den * (root(rad, "theta", t)? - q * b0 / (2.0 * m))
            }
        })
    }

    pub fn omega_nc(case: CaseId, p: &ScenarioParams, t: f64) -> Result<f64> {
        let k = consts(p);
        let (m, q, b0, w0, g, dc) = (k.m, k.q, k.b0, k.w0, k.g, k.delta_c);
        let e = |x: f64| (x * t).exp();
        Ok(match case {
            CaseId::Set1Case1 => -q * b0 + 2.0 * e(g) * root(m * dc - m * m * w0 * w0, "Omega", t)?,
            CaseId::Set1Case2 => -q * b0 * e(g) + 2.0 * e(g) * root(m * dc - m * m * w0 * w0, "Omega", t)?,
            CaseId::Set1Case3 => -q * b0 * e(-g) + 2.0 * e(g) * root(m * dc - m * m * w0 * w0, "Omega", t)?,
            CaseId::Set1Case4 => {
                -q * b0 * e(g) + 2.0 * e(g) * root(m * dc - m * m * w0 * w0 * e(-g), "Omega", t)?
            }
            CaseId::Set2Case1 => {
                let s = g * t + k.chi;
                -q * b0 / s + 2.0 * root(m * dc - m * m * w0 * w0 / (s * s), "Omega", t)?
            }
            CaseId::Set2Case2 => {
                let s = g * t + k.chi;
                2.0 * root(m * dc - m * m * w0 * w0, "Omega", t)? / s - q * b0 / s
            }
        })
    }

    /// Cross term as printed per case.
    pub fn c(case: CaseId, p: &ScenarioParams, t: f64) -> Result<f64> {
        let k = consts(p);
        let (m, q, b0, w0, g, sigma, dc) = (k.m, k.q, k.b0, k.w0, k.g, k.sigma, k.delta_c);
        let e = |x: f64| (x * t).exp();
        let w2 = w0 * w0;
        let qb2 = q * q * b0 * b0;
        Ok(match case {
            CaseId::Set1Case1 | CaseId::Set1Case2 | CaseId::Set1Case3 => {
                // field decay factor inside the bracket: e^{-Γt}, 1, e^{-2Γt}
                let x = match case {
                    CaseId::Set1Case1 => e(-g),
                    CaseId::Set1Case2 => 1.0,
                    _ => e(-2.0 * g),
                };
                let ms = root(m * dc - m * m * w2, "Omega", t)?;
                let r = root(qb2 * sigma * x * x / (4.0 * m) + w2 * (m * sigma - 1.0), "theta", t)?;
                let bracket = (4.0 * m * m * w2 + 2.0 * q * b0 * x * ms) * r
                    - 2.0 * q * b0 * m * w2 * x
                    - qb2 / m * x * x * ms;
                bracket / (qb2 * x * x + 4.0 * m * m * w2) + root(dc / m - w2, "Omega", t)?
            }
            CaseId::Set1Case4 => {
                let y = e(-g);
                let ms = root(m * dc - m * m * w2 * y, "Omega", t)?;
                let r = root(qb2 * sigma / (4.0 * m) + w2 * y * (m * sigma - 1.0), "theta", t)?;
                let bracket = (4.0 * m * m * w2 * y + 2.0 * q * b0 * ms) * r
                    - 2.0 * q * b0 * m * w2 * y
                    - qb2 / m * ms;
                bracket / (qb2 + 4.0 * m * m * w2 * y) + root(dc / m - w2 * y, "Omega", t)?
            }
            CaseId::Set2Case1 => {
                let s = g * t + k.chi;
                let ms = root(m * dc * s * s - m * m * w2, "Omega", t)?;
                let r = root(qb2 * sigma / m - w2 * s * s + 4.0 * w2 * sigma * m, "theta", t)?;
                let bracket = (4.0 * m * m * w2 / (s * s) + 2.0 * q * b0 * ms / (s * s)) * r
                    - 2.0 * q * b0 * m * w2 / s
                    - qb2 * ms / (m * s);
                bracket / (4.0 * m * m * w2 + qb2) + root(dc / m - w2 / (s * s), "Omega", t)?
            }
            CaseId::Set2Case2 => {
                let s = g * t + k.chi;
                let ms = root(m * dc - m * m * w2, "Omega", t)?;
                let r = root(qb2 * sigma / (4.0 * m) + w2 * (m * sigma - 1.0), "theta", t)?;
                let bracket = (4.0 * m * m * w2 + 2.0 * q * b0 * ms) * r - 2.0 * q * b0 * m * w2 - qb2 * ms / m;
                bracket / ((4.0 * m * m * w2 + qb2) * s) + root(dc / m - w2, "Omega", t)? / s
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::hamiltonian_coefficients;
    use crate::model::{catalog, generic_set1, ScenarioParams};
    use crate::xprec::DoubleDouble;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
    }

    #[test]
    fn back_substitution_all_cases() {
        for case in CaseId::ALL {
            let s = catalog(case, &ScenarioParams::fig1()).unwrap();
            let pair = NcPair::new(&s);
            for i in 0..20 {
                let t = 0.25 * i as f64;
                let p = pair.at(t).unwrap();
                let cp = s.couplings(t).unwrap();
                let h = hamiltonian_coefficients(&cp, p.theta, p.omega_nc, t).unwrap();
                assert!(rel(h.a, s.ep.a(t)) < 1e-10, "{case} a at {t}");
                assert!(rel(h.b, s.ep.b(t)) < 1e-10, "{case} b at {t}");
            }
        }
    }

    #[test]
    fn alternate_branch_also_solves() {
        let s = catalog(CaseId::Set1Case1, &ScenarioParams::fig1()).unwrap();
        let p = NcPair::with_branch(&s, RootBranch::MinusRoots).at(0.5).unwrap();
        let cp = s.couplings(0.5).unwrap();
        let h = hamiltonian_coefficients(&cp, p.theta, p.omega_nc, 0.5).unwrap();
        assert!(rel(h.a, s.ep.a(0.5)) < 1e-10);
        assert!(rel(h.b, s.ep.b(0.5)) < 1e-10);
        assert!(rel(p.c, p.c_literal) < 1e-9);
    }

    #[test]
    fn printed_forms_match_inversion() {
        for case in CaseId::ALL {
            let pr = ScenarioParams::fig1();
            let s = catalog(case, &pr).unwrap();
            for t in [0.0, 0.7, 2.0, 4.0] {
                let p = NcPair::new(&s).at(t).unwrap();
                assert!(rel(p.theta, printed::theta(case, &pr, t).unwrap()) < 1e-9, "{case} theta {t}");
                assert!(rel(p.omega_nc, printed::omega_nc(case, &pr, t).unwrap()) < 1e-10, "{case} Omega {t}");
                assert!(rel(p.c, printed::c(case, &pr, t).unwrap()) < 1e-10, "{case} c {t}");
                assert!(rel(p.c, p.c_literal) < 1e-10, "{case} c literal {t}");
            }
        }
    }

    #[test]
    fn general_set1_form() {
        let p = ScenarioParams {
            vartheta: Some(0.8),
            delta: Some(0.3),
            lambda: Some(-0.4),
            ..ScenarioParams::fig1()
        };
        let s = generic_set1(&p).unwrap();
        assert!(s.off_catalog);
        for t in [0.0, 1.0, 3.0] {
            let nc = NcPair::new(&s).at(t).unwrap();
            let th = printed::theta_set1_general(&p, 0.8, 0.3, -0.4, t).unwrap();
            let om = printed::omega_set1_general(&p, 0.8, 0.3, -0.4, t).unwrap();
            assert!(rel(nc.theta, th) < 1e-9 && rel(nc.omega_nc, om) < 1e-10);
        }
    }

    #[test]
    fn set1_case1_omega_example() {
        let pr = ScenarioParams::fig1();
        let s = catalog(CaseId::Set1Case1, &pr).unwrap();
        let t: f64 = 1.3;
        let want = -1e2 + 2.0 * t.exp() * (1e7f64 - 1e6).sqrt();
        assert!(rel(NcPair::new(&s).omega_nc(t).unwrap(), want) < 1e-12);
    }

    #[test]
    fn omega_vanishes_without_field_at_balance() {
        // Δ = Mω₀² with B = 0 gives a zero radicand, up to rounding of order
        // √ε·ω₀
        let pr = ScenarioParams {
            b0: 0.0,
            delta_c: 1e6,
            ..ScenarioParams::fig1()
        };
        let s = catalog(CaseId::Set2Case2, &pr).unwrap();
        for t in [0.0, 1.0, 5.0] {
            assert!(NcPair::new(&s).omega_nc(t).unwrap().abs() < 1e-4);
        }
    }

    #[test]
    fn zero_inputs_give_zero_cross_term() {
        let cp = Couplings {
            mass: 1.0,
            charge: 1.0,
            f: 1.0,
            omega: 1.0,
            bfield: 0.0,
        };
        assert_eq!(coefficient_c(&cp, 0.0, 0.0), 0.0);
    }

    #[test]
    fn negative_radicand_reports_time() {
        let cp = Couplings {
            mass: 1.0,
            charge: 1.0,
            f: 1.0,
            omega: 3.0,
            bfield: 0.0,
        };
        match solve_omega(&cp, 1.0, 2.5, RootBranch::PlusRoots) {
            Err(Error::NegativeRadicand { which, t, value }) => {
                assert_eq!((which, t), ("Omega", 2.5));
                assert_eq!(value, 1.0 - 9.0);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn degenerate_theta_quadratic() {
        let cp = Couplings {
            mass: 1.0,
            charge: 1.0,
            f: 1.0,
            omega: 0.0,
            bfield: 0.0,
        };
        assert!(matches!(
            solve_theta(&cp, 2.0, 0.0, RootBranch::PlusRoots),
            Err(Error::DegenerateQuadratic { .. })
        ));
    }

    #[test]
    fn product_constancy_and_equality() {
        let pr = ScenarioParams::fig1();
        let s1 = catalog(CaseId::Set1Case2, &pr).unwrap();
        let s2 = catalog(CaseId::Set2Case2, &pr).unwrap();
        let p0 = theta_omega_product(&s1, 0.0).unwrap();
        for t in [0.5, 1.0, 3.0, 5.0] {
            assert!(rel(theta_omega_product(&s1, t).unwrap(), p0) < 1e-12);
            assert!(rel(theta_omega_product(&s2, t).unwrap(), p0) < 1e-12);
        }
        let s3 = catalog(CaseId::Set1Case1, &pr).unwrap();
        assert!(matches!(theta_omega_product(&s3, 1.0), Err(Error::NotApplicableCase(CaseId::Set1Case1))));
    }

    #[test]
    fn large_field_cross_term_agrees_with_extended_precision() {
        let pr = ScenarioParams::fig2();
        for case in [CaseId::Set2Case1, CaseId::Set2Case2] {
            let s = catalog(case, &pr).unwrap();
            for t in [0.0, 2.0, 5.0] {
                let c64 = NcPair::new(&s).c(t).unwrap();
                let (lit, roots) = cross_term_in::<DoubleDouble>(&s, t).unwrap();
                assert!(rel(c64, roots.to_f64()) < 1e-13, "{case} {t}");
                assert!(rel(c64, lit.to_f64()) < 1e-10, "{case} {t}");
            }
        }
    }
}
