//! Energy expectation in the invariant eigenstates, the per-case
//! ground-tower series and the reality windows outside which a radicand of
//! the NC parameters turns negative.

use std::fmt;

use serde::Serialize;

use crate::ep::EpCurve;
use crate::error::{Error, Result};
use crate::model::{CaseId, Family, Scenario};
use crate::nc::{cross_term_in, printed, CouplingsT, NcPair};
use crate::xprec::Real;

/// What fixes one end of a reality window.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundSource {
    /// unbounded on this side
    None,
    /// `K a − ω² ≥ 0`
    ThetaRadicand,
    /// `f b / M − ω² ≥ 0`
    OmegaRadicand,
    /// `Γt + χ > 0`, an open end
    ProfileDomain,
}

impl fmt::Display for BoundSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundSource::None => "none",
            BoundSource::ThetaRadicand => "theta radicand",
            BoundSource::OmegaRadicand => "Omega radicand",
            BoundSource::ProfileDomain => "profile domain",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Lower,
    Upper,
}

/// One analytic bound, whether or not it ends up binding.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WindowBound {
    pub side: Side,
    pub value: f64,
    pub source: BoundSource,
}

/// Time interval on which every radicand is non-negative.
///
/// `empty` marks a time-independent radicand that is negative; `lower` and
/// `upper` are then meaningless.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RealityWindow {
    pub lower: f64,
    pub upper: f64,
    pub lower_source: BoundSource,
    pub upper_source: BoundSource,
    /// `lower` itself is excluded
    pub lower_open: bool,
    pub empty: bool,
    /// every finite analytic bound, for certification
    pub bounds: Vec<WindowBound>,
}

impl RealityWindow {
    fn unbounded() -> Self {
        Self {
            lower: f64::NEG_INFINITY,
            upper: f64::INFINITY,
            lower_source: BoundSource::None,
            upper_source: BoundSource::None,
            lower_open: false,
            empty: false,
            bounds: Vec::new(),
        }
    }

    fn emptied(mut self, source: BoundSource) -> Self {
        self.empty = true;
        self.lower_source = source;
        self.upper_source = source;
        self
    }

    fn push(&mut self, side: Side, value: f64, source: BoundSource) {
        if value.is_finite() {
            self.bounds.push(WindowBound { side, value, source });
        }
        match side {
            Side::Lower if value > self.lower || (value == self.lower && self.lower_open) => {
                self.lower = value;
                self.lower_source = source;
                self.lower_open = source == BoundSource::ProfileDomain;
            }
            Side::Upper if value < self.upper => {
                self.upper = value;
                self.upper_source = source;
            }
            _ => {}
        }
        if self.lower > self.upper || self.lower == f64::INFINITY || self.upper == f64::NEG_INFINITY {
            self.empty = true;
        }
    }

    pub fn contains(&self, t: f64) -> bool {
        if self.empty {
            return false;
        }
        let above = if self.lower_open { t > self.lower } else { t >= self.lower };
        above && t <= self.upper
    }

    /// `contains` or an [`Error::OutsideRealityWindow`].
    pub fn require(&self, t: f64) -> Result<()> {
        if self.contains(t) {
            Ok(())
        } else {
            Err(Error::OutsideRealityWindow { t, window: self.clone() })
        }
    }
}

impl fmt::Display for RealityWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.empty {
            return write!(f, "empty (negative {})", self.lower_source);
        }
        let open = if self.lower_open { "(" } else { "[" };
        write!(
            f,
            "{open}{}, {}] (lower: {}, upper: {})",
            self.lower, self.upper, self.lower_source, self.upper_source
        )
    }
}

/// Window from the printed bounds of each catalog case. Off-catalog
/// scenarios get only the profile domain.
pub fn reality_window(scenario: &Scenario) -> RealityWindow {
    let p = &scenario.params;
    let (m, q, b0, w0, g, sigma, dc, chi) = (p.mass, p.charge, p.b0, p.omega0, p.gamma, p.sigma, p.delta_c, p.chi);
    let mut w = RealityWindow::unbounded();
    if scenario.family() == Family::SetII {
        w.push(Side::Lower, -chi / g, BoundSource::ProfileDomain);
    }
    let Some(case) = scenario.case else {
        return w;
    };
    let qb2 = q * q * b0 * b0;
    let ms = m * sigma;
    let omega_const = m * dc - m * m * w0 * w0;
    let theta_const = qb2 * sigma / (4.0 * m) + w0 * w0 * (ms - 1.0);
    match case {
        CaseId::Set1Case1 | CaseId::Set1Case3 => {
            if omega_const < 0.0 {
                return w.emptied(BoundSource::OmegaRadicand);
            }
            if ms < 1.0 {
                let arg = qb2 * sigma / (4.0 * m * w0 * w0 * (1.0 - ms));
                if !(arg > 0.0) {
                    return w.emptied(BoundSource::ThetaRadicand);
                }
                let rate = if case == CaseId::Set1Case1 { 2.0 * g } else { 4.0 * g };
                w.push(Side::Upper, arg.ln() / rate, BoundSource::ThetaRadicand);
            }
        }
        CaseId::Set1Case2 | CaseId::Set2Case2 => {
            if omega_const < 0.0 {
                return w.emptied(BoundSource::OmegaRadicand);
            }
            if theta_const < 0.0 {
                return w.emptied(BoundSource::ThetaRadicand);
            }
        }
        CaseId::Set1Case4 => {
            w.push(Side::Lower, (m * w0 * w0 / dc).ln() / g, BoundSource::OmegaRadicand);
            if ms < 1.0 {
                let arg = 4.0 * m * w0 * w0 * (1.0 - ms) / (qb2 * sigma);
                w.push(Side::Lower, arg.ln() / g, BoundSource::ThetaRadicand);
            }
        }
        CaseId::Set2Case1 => {
            w.push(Side::Lower, (w0 * (m / dc).sqrt() - chi) / g, BoundSource::OmegaRadicand);
            let rad = qb2 * sigma / (m * w0 * w0) + 4.0 * sigma * m;
            if rad < 0.0 {
                return w.emptied(BoundSource::ThetaRadicand);
            }
            w.push(Side::Upper, (rad.sqrt() - chi) / g, BoundSource::ThetaRadicand);
        }
    }
    w
}

/// `(K a − ω², f b/M − ω²)` from the generic couplings, independent of the
/// printed bounds.
pub fn radicands(scenario: &Scenario, t: f64) -> Result<(f64, f64)> {
    let cp = scenario.couplings(t)?;
    let ct = CouplingsT::<f64>::from_f64(&cp);
    Ok((ct.theta_radicand(scenario.ep.a(t)), ct.omega_radicand(scenario.ep.b(t))))
}

fn radicand(scenario: &Scenario, source: BoundSource, t: f64) -> Result<f64> {
    let (r, s) = radicands(scenario, t)?;
    Ok(if source == BoundSource::ThetaRadicand { r } else { s })
}

/// Root of one radicand near `guess` by bisection; `None` when no sign
/// change is found within a generous bracket.
pub fn bisect_radicand(scenario: &Scenario, source: BoundSource, guess: f64) -> Option<f64> {
    let floor = match scenario.family() {
        Family::SetII => -scenario.params.chi / scenario.params.gamma,
        Family::SetI => f64::NEG_INFINITY,
    };
    let eval = |t: f64| radicand(scenario, source, t).ok();
    let mut width = 1e-6 * guess.abs().max(1.0);
    for _ in 0..60 {
        let lo = (guess - width).max(floor + 1e-12 * floor.abs().max(1.0));
        let hi = guess + width;
        if let (Some(fl), Some(fh)) = (eval(lo), eval(hi)) {
            if fl == 0.0 {
                return Some(lo);
            }
            if fh == 0.0 {
                return Some(hi);
            }
            if (fl < 0.0) != (fh < 0.0) {
                let (mut a, mut b, mut fa) = (lo, hi, fl);
                for _ in 0..300 {
                    let mid = 0.5 * (a + b);
                    if !(mid > a && mid < b) {
                        break;
                    }
                    let fm = eval(mid)?;
                    if fm == 0.0 {
                        return Some(mid);
                    }
                    if (fm < 0.0) == (fa < 0.0) {
                        a = mid;
                        fa = fm;
                    } else {
                        b = mid;
                    }
                }
                return Some(0.5 * (a + b));
            }
        }
        width *= 4.0;
    }
    None
}

/// Analytic bound against its bisection root.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundCheck {
    pub bound: WindowBound,
    pub bisected: Option<f64>,
    /// `|analytic − bisected| / max(1, |analytic|)`, infinite when no root
    pub discrepancy: f64,
}

/// Bisection certificate for every radicand bound of the window.
pub fn certify_window(scenario: &Scenario, window: &RealityWindow) -> Vec<BoundCheck> {
    window
        .bounds
        .iter()
        .filter(|b| matches!(b.source, BoundSource::ThetaRadicand | BoundSource::OmegaRadicand))
        .map(|&bound| {
            let bisected = bisect_radicand(scenario, bound.source, bound.value);
            let discrepancy = bisected.map_or(f64::INFINITY, |r| (r - bound.value).abs() / bound.value.abs().max(1.0));
            BoundCheck {
                bound,
                bisected,
                discrepancy,
            }
        })
        .collect()
}

/// `bρ² + a/ρ² + ρ̇²/a`
pub fn invariant_bracket(scenario: &Scenario, t: f64) -> f64 {
    let ep = &scenario.ep;
    let (a, b, rho, rd) = (ep.a(t), ep.b(t), ep.rho(t), ep.rho_dot(t));
    b * rho * rho + a / (rho * rho) + rd * rd / a
}

fn outside(scenario: &Scenario, t: f64) -> impl Fn(Error) -> Error + '_ {
    move |e| match e {
        Error::NegativeRadicand { .. } => Error::OutsideRealityWindow {
            t,
            window: reality_window(scenario),
        },
        other => other,
    }
}

/// `½(n+m+1)[bρ² + a/ρ² + ρ̇²/a] + (n−m)c` with `c` from the root form.
pub fn energy_general(scenario: &Scenario, n: u32, m: u32, t: f64) -> Result<f64> {
    reality_window(scenario).require(t)?;
    scenario.check_time(t)?;
    let tower = 0.5 * f64::from(n + m + 1) * invariant_bracket(scenario, t);
    if n == m {
        return Ok(tower);
    }
    let c = NcPair::new(scenario).c(t).map_err(outside(scenario, t))?;
    Ok(tower + (f64::from(n) - f64::from(m)) * c)
}

/// Same formula with `c` evaluated term by term from `(θ, Ω)`.
pub fn energy_general_literal(scenario: &Scenario, n: u32, m: u32, t: f64) -> Result<f64> {
    reality_window(scenario).require(t)?;
    let tower = 0.5 * f64::from(n + m + 1) * invariant_bracket(scenario, t);
    let c = NcPair::new(scenario).at(t).map_err(outside(scenario, t))?.c_literal;
    Ok(tower + (f64::from(n) - f64::from(m)) * c)
}

/// General formula with the cross term in the scalar type `T`; returns
/// `(literal, root form)` energies.
pub fn energy_general_in<T: Real>(scenario: &Scenario, n: u32, m: u32, t: f64) -> Result<(T, T)> {
    reality_window(scenario).require(t)?;
    let ep = &scenario.ep;
    let (a, b, rho, rd) = (
        T::from_f64(ep.a(t)),
        T::from_f64(ep.b(t)),
        T::from_f64(ep.rho(t)),
        T::from_f64(ep.rho_dot(t)),
    );
    let bracket = b * rho * rho + a / (rho * rho) + rd * rd / a;
    let tower = T::from_f64(0.5 * f64::from(n + m + 1)) * bracket;
    let (lit, roots) = cross_term_in::<T>(scenario, t).map_err(outside(scenario, t))?;
    let k = T::from_f64(f64::from(n) - f64::from(m));
    Ok((tower + k * lit, tower + k * roots))
}

/// Ground-tower (`m = 0`) energy as printed for each catalog case.
///
/// The exponential and critical rational forms assume `ξ² = 1`.
pub fn energy_printed(scenario: &Scenario, n: u32, t: f64) -> Result<f64> {
    let case = scenario.case.ok_or(Error::InvalidParameter {
        name: "case",
        reason: "printed energy series exist only for catalog cases".into(),
    })?;
    let p = &scenario.params;
    if case != CaseId::Set2Case1 && p.xi2 != 1.0 {
        return Err(Error::InvalidParameter {
            name: "xi2",
            reason: "the printed energy series use xi^2 = 1".into(),
        });
    }
    reality_window(scenario).require(t)?;
    let mu = scenario.ep.mu();
    let nf = f64::from(n);
    let c = printed::c(case, p, t).map_err(outside(scenario, t))?;
    let tower = match case.family() {
        Family::SetI => (nf + 1.0) * mu * mu * p.delta_c,
        Family::SetII => {
            let s = p.gamma * t + p.chi;
            if case == CaseId::Set2Case1 {
                (nf + 1.0) / (2.0 * s)
                    * (2.0 * (p.sigma / (mu * mu) + p.delta_c * mu * mu) + mu * mu * p.gamma * p.gamma / (8.0 * p.sigma))
            } else {
                (nf + 1.0) * mu * mu * p.delta_c / s
            }
        }
    };
    Ok(tower + nf * c)
}

/// Energy samples on a time grid.
#[derive(Debug, Clone, Serialize)]
pub struct EnergySeries {
    pub case: Option<CaseId>,
    pub n: u32,
    pub m: u32,
    pub grid: Vec<f64>,
    pub value: Vec<f64>,
    /// `value / ω₀`
    pub scaled: Vec<f64>,
    pub window: RealityWindow,
}

fn series_with(
    scenario: &Scenario,
    n: u32,
    m: u32,
    grid: &[f64],
    eval: impl Fn(f64) -> Result<f64>,
) -> Result<EnergySeries> {
    let window = reality_window(scenario);
    let value = grid
        .iter()
        .map(|&t| {
            window.require(t)?;
            eval(t)
        })
        .collect::<Result<Vec<_>>>()?;
    let w0 = scenario.params.omega0;
    Ok(EnergySeries {
        case: scenario.case,
        n,
        m,
        grid: grid.to_vec(),
        scaled: value.iter().map(|v| v / w0).collect(),
        value,
        window,
    })
}

/// Printed ground-tower series.
pub fn energy_case_series(scenario: &Scenario, n: u32, grid: &[f64]) -> Result<EnergySeries> {
    series_with(scenario, n, 0, grid, |t| energy_printed(scenario, n, t))
}

/// General-formula series for any `(n, m)`.
pub fn energy_series(scenario: &Scenario, n: u32, m: u32, grid: &[f64]) -> Result<EnergySeries> {
    series_with(scenario, n, m, grid, |t| energy_general(scenario, n, m, t))
}

/// `t → ∞` limit of the constant-field exponential case, equal to its
/// zero-field value: `(n+1)μ²Δ + n ω₀√(Mσ−1) + n√(Δ/M − ω₀²)`.
pub fn constant_field_asymptote(scenario: &Scenario, n: u32) -> Result<f64> {
    let p = &scenario.params;
    let ms1 = p.mass * p.sigma - 1.0;
    let free = p.delta_c / p.mass - p.omega0 * p.omega0;
    if ms1 < 0.0 || free < 0.0 {
        return Err(Error::NegativeRadicand {
            which: if ms1 < 0.0 { "theta" } else { "Omega" },
            t: f64::INFINITY,
            value: ms1.min(free),
        });
    }
    let mu = scenario.ep.mu();
    let nf = f64::from(n);
    Ok((nf + 1.0) * mu * mu * p.delta_c + nf * p.omega0 * ms1.sqrt() + nf * free.sqrt())
}

/// Energies at charge `+|q|` and `−|q|`.
pub fn charge_asymmetry(scenario: &Scenario, n: u32, m: u32, t: f64) -> Result<(f64, f64)> {
    let q = scenario.params.charge.abs();
    let plus = energy_general(&scenario.with_charge(q)?, n, m, t)?;
    let minus = energy_general(&scenario.with_charge(-q)?, n, m, t)?;
    Ok((plus, minus))
}
