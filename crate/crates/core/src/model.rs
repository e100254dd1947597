//! Physical constants, time profiles and the catalog of solvable cases.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::ep::{derive_mu_critical, derive_mu_exponential, derive_mu_rational, EpCurve, EpFamily};
use crate::error::{Error, Result};

/// All physical and family constants of a scenario (natural units, ħ = 1).
///
/// `vartheta`, `delta`, `lambda` and `k` are fixed by the catalog case and
/// may be left unset; `mu` is derived from the family constraint when unset.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioParams {
    #[serde(rename = "M")]
    pub mass: f64,
    #[serde(rename = "q")]
    pub charge: f64,
    pub omega0: f64,
    #[serde(rename = "B0")]
    pub b0: f64,
    #[serde(rename = "Gamma")]
    pub gamma: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(rename = "Lambda", default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vartheta: Option<f64>,
    pub sigma: f64,
    #[serde(rename = "Delta_c")]
    pub delta_c: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
    #[serde(default = "one")]
    pub xi2: f64,
    #[serde(default = "one")]
    pub chi: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<i32>,
    #[serde(default = "one_u32")]
    pub n: u32,
    #[serde(default)]
    pub m: u32,
}

fn one() -> f64 {
    1.0
}

fn one_u32() -> u32 {
    1
}

impl ScenarioParams {
    /// Constants of the exponential-family energy figure: M = q = 1,
    /// B₀ = 10², σ = Δ = 10⁷, ω₀ = 10³, Γ = 1, n = 1, m = 0.
    pub fn fig1() -> Self {
        Self {
            mass: 1.0,
            charge: 1.0,
            omega0: 1e3,
            b0: 1e2,
            gamma: 1.0,
            delta: None,
            lambda: None,
            vartheta: None,
            sigma: 1e7,
            delta_c: 1e7,
            mu: None,
            xi2: 1.0,
            chi: 1.0,
            k: None,
            n: 1,
            m: 0,
        }
    }

    /// Same as [`fig1`](Self::fig1) with B₀ = 10²⁰.
    pub fn fig2() -> Self {
        Self {
            b0: 1e20,
            ..Self::fig1()
        }
    }

    pub fn with_b0(self, b0: f64) -> Self {
        Self { b0, ..self }
    }

    pub fn with_charge(self, charge: f64) -> Self {
        Self { charge, ..self }
    }

    pub fn with_quantum_numbers(self, n: u32, m: u32) -> Self {
        Self { n, m, ..self }
    }

    fn validate(&self) -> Result<()> {
        let positive = [
            ("M", self.mass),
            ("omega0", self.omega0),
            ("sigma", self.sigma),
            ("Delta_c", self.delta_c),
            ("xi2", self.xi2),
            ("chi", self.chi),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter {
                    name,
                    reason: format!("must be positive and finite, got {v}"),
                });
            }
        }
        let non_negative = [("B0", self.b0), ("Gamma", self.gamma), ("delta", self.delta.unwrap_or(0.0))];
        for (name, v) in non_negative {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter {
                    name,
                    reason: format!("must be non-negative and finite, got {v}"),
                });
            }
        }
        if !self.charge.is_finite() || !self.lambda.unwrap_or(0.0).is_finite() {
            return Err(Error::InvalidParameter {
                name: "q",
                reason: "charge and Lambda must be finite".into(),
            });
        }
        if let Some(mu) = self.mu {
            if !(mu > 0.0 && mu.is_finite()) {
                return Err(Error::InvalidParameter {
                    name: "mu",
                    reason: format!("must be positive and finite, got {mu}"),
                });
            }
        }
        if let Some(v) = self.vartheta {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter {
                    name: "vartheta",
                    reason: format!("must be positive and finite, got {v}"),
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProfileKind {
    Constant,
    /// `e^{rate·t}`
    Exponential { rate: f64 },
    /// `(Γt + χ)^power`, defined for `Γt + χ > 0`.
    Rational { gamma: f64, chi: f64, power: f64 },
}

/// `amplitude × shape(t)` with an analytic derivative.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TimeProfile {
    pub kind: ProfileKind,
    pub amplitude: f64,
}

impl TimeProfile {
    pub fn constant(amplitude: f64) -> Self {
        Self {
            kind: ProfileKind::Constant,
            amplitude,
        }
    }

    /// Exponential profile; a zero rate collapses to a constant.
    pub fn exponential(amplitude: f64, rate: f64) -> Self {
        if rate == 0.0 {
            return Self::constant(amplitude);
        }
        Self {
            kind: ProfileKind::Exponential { rate },
            amplitude,
        }
    }

    pub fn rational(amplitude: f64, gamma: f64, chi: f64, power: f64) -> Self {
        Self {
            kind: ProfileKind::Rational { gamma, chi, power },
            amplitude,
        }
    }

    pub fn value(&self, t: f64) -> f64 {
        match self.kind {
            ProfileKind::Constant => self.amplitude,
            ProfileKind::Exponential { rate } => self.amplitude * (rate * t).exp(),
            ProfileKind::Rational { gamma, chi, power } => {
                self.amplitude * (gamma * t + chi).powf(power)
            }
        }
    }

    pub fn derivative(&self, t: f64) -> f64 {
        match self.kind {
            ProfileKind::Constant => 0.0,
            ProfileKind::Exponential { rate } => rate * self.value(t),
            ProfileKind::Rational { gamma, chi, power } => {
                self.amplitude * power * gamma * (gamma * t + chi).powf(power - 1.0)
            }
        }
    }

    pub fn check(&self, t: f64) -> Result<()> {
        if let ProfileKind::Rational { gamma, chi, .. } = self.kind {
            let s = gamma * t + chi;
            if !(s > 0.0) {
                return Err(Error::ProfileDomain { t, value: s });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Family {
    SetI,
    SetII,
}

/// One of the six solvable (profile triple, EP family) combinations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CaseId {
    Set1Case1,
    Set1Case2,
    Set1Case3,
    Set1Case4,
    Set2Case1,
    Set2Case2,
}

impl CaseId {
    pub const ALL: [CaseId; 6] = [
        CaseId::Set1Case1,
        CaseId::Set1Case2,
        CaseId::Set1Case3,
        CaseId::Set1Case4,
        CaseId::Set2Case1,
        CaseId::Set2Case2,
    ];

    pub fn family(self) -> Family {
        match self {
            CaseId::Set1Case1 | CaseId::Set1Case2 | CaseId::Set1Case3 | CaseId::Set1Case4 => {
                Family::SetI
            }
            CaseId::Set2Case1 | CaseId::Set2Case2 => Family::SetII,
        }
    }

    /// 1-based case number within the family.
    pub fn index(self) -> u8 {
        match self {
            CaseId::Set1Case1 | CaseId::Set2Case1 => 1,
            CaseId::Set1Case2 | CaseId::Set2Case2 => 2,
            CaseId::Set1Case3 => 3,
            CaseId::Set1Case4 => 4,
        }
    }

    pub fn from_parts(family: Family, index: u8) -> Result<Self> {
        Ok(match (family, index) {
            (Family::SetI, 1) => CaseId::Set1Case1,
            (Family::SetI, 2) => CaseId::Set1Case2,
            (Family::SetI, 3) => CaseId::Set1Case3,
            (Family::SetI, 4) => CaseId::Set1Case4,
            (Family::SetII, 1) => CaseId::Set2Case1,
            (Family::SetII, 2) => CaseId::Set2Case2,
            (f, i) => return Err(Error::UnknownCase(format!("{f:?} case {i}"))),
        })
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CaseId::Set1Case1 => "set1-case1",
            CaseId::Set1Case2 => "set1-case2",
            CaseId::Set1Case3 => "set1-case3",
            CaseId::Set1Case4 => "set1-case4",
            CaseId::Set2Case1 => "set2-case1",
            CaseId::Set2Case2 => "set2-case2",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            CaseId::Set1Case1 => "f = e^(-Gt), w = w0, B = B0; exponential EP family",
            CaseId::Set1Case2 => "f = e^(-Gt), w = w0, B = B0 e^(Gt); exponential EP family",
            CaseId::Set1Case3 => "f = e^(-Gt), w = w0, B = B0 e^(-Gt); exponential EP family",
            CaseId::Set1Case4 => "f = e^(-Gt), w = w0 e^(-Gt/2), B = B0 e^(Gt); exponential EP family",
            CaseId::Set2Case1 => "f = 1, w = w0/s, B = B0/s (s = Gt + chi); rational EP family, k = 2",
            CaseId::Set2Case2 => "f = 1, w = w0/s, B = B0/s (s = Gt + chi); rational EP family, k = -2",
        }
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for CaseId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s
            .chars()
            .filter(|c| !matches!(c, '-' | '_' | ' '))
            .collect::<String>()
            .to_ascii_lowercase();
        match key.as_str() {
            "seti" | "set1" | "i" | "1" | "exponential" => Ok(Family::SetI),
            "setii" | "set2" | "ii" | "2" | "rational" => Ok(Family::SetII),
            _ => Err(Error::UnknownCase(format!("family `{s}`"))),
        }
    }
}

fn parse_case_index(s: &str) -> Option<u8> {
    let key = s.trim().to_ascii_lowercase();
    let key = key.strip_prefix("case").unwrap_or(&key).trim_start_matches(['-', '_', ' ']);
    match key {
        "1" | "i" => Some(1),
        "2" | "ii" => Some(2),
        "3" | "iii" => Some(3),
        "4" | "iv" => Some(4),
        _ => None,
    }
}

impl FromStr for CaseId {
    type Err = Error;

    /// Accepts `set1-case2` style identifiers.
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        let unknown = || Error::UnknownCase(s.to_string());
        let (fam, case) = lower.split_once("-case").ok_or_else(unknown)?;
        let family: Family = fam.parse().map_err(|_| unknown())?;
        let index = parse_case_index(case).ok_or_else(unknown)?;
        CaseId::from_parts(family, index).map_err(|_| unknown())
    }
}

/// Fully resolved scenario: profiles, EP family and the constants they use.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Scenario {
    /// `None` for generic (off-catalog) scenarios.
    pub case: Option<CaseId>,
    /// Constants with every case-determined field filled in.
    pub params: ScenarioParams,
    pub f: TimeProfile,
    pub omega: TimeProfile,
    pub bfield: TimeProfile,
    pub ep: EpFamily,
    pub mu_derived: bool,
    pub off_catalog: bool,
}

fn check_fixed(name: &'static str, given: Option<f64>, fixed: f64) -> Result<()> {
    match given {
        Some(v) if (v - fixed).abs() > 1e-12 * fixed.abs().max(1.0) => Err(Error::InvalidParameter {
            name,
            reason: format!("catalog case fixes {name} = {fixed}, config gives {v}"),
        }),
        _ => Ok(()),
    }
}

/// Uses `given` when present (after checking it against the constraint)
/// or else the derived value.
fn resolve_mu(ep: EpFamily, given: Option<f64>) -> Result<(EpFamily, bool)> {
    match given {
        None => Ok((ep, true)),
        Some(mu) => {
            let cand = ep.with_mu(mu);
            let (constraint, relative) = cand.constraint_mismatch();
            if relative > 1e-12 {
                return Err(Error::ConstraintViolated {
                    constraint,
                    relative,
                });
            }
            Ok((cand, false))
        }
    }
}

/// Profile triple and EP family for a catalog case.
pub fn catalog(case: CaseId, params: &ScenarioParams) -> Result<Scenario> {
    params.validate()?;
    let p = *params;
    match case.family() {
        Family::SetI => {
            let g = p.gamma;
            if !(g > 0.0) {
                return Err(Error::InvalidParameter {
                    name: "Gamma",
                    reason: "the exponential family needs Gamma = vartheta > 0".into(),
                });
            }
            let (delta, lambda) = match case {
                CaseId::Set1Case1 => (0.0, 0.0),
                CaseId::Set1Case2 => (0.0, g),
                CaseId::Set1Case3 => (0.0, -g),
                _ => (g, g),
            };
            check_fixed("vartheta", p.vartheta, g)?;
            check_fixed("delta", p.delta, delta)?;
            check_fixed("Lambda", p.lambda, lambda)?;
            let mut s = set1_scenario(&p, g, delta, lambda)?;
            s.case = Some(case);
            Ok(s)
        }
        Family::SetII => {
            if !(p.gamma > 0.0) {
                return Err(Error::InvalidParameter {
                    name: "Gamma",
                    reason: "the rational family needs Gamma > 0".into(),
                });
            }
            let k = if case == CaseId::Set2Case1 { 2 } else { -2 };
            if let Some(given) = p.k {
                if given != k {
                    return Err(Error::InvalidParameter {
                        name: "k",
                        reason: format!("catalog case fixes k = {k}, config gives {given}"),
                    });
                }
            }
            let mut s = set2_scenario(&p, k)?;
            s.case = Some(case);
            Ok(s)
        }
    }
}

/// Exponential-family scenario with arbitrary `(ϑ, δ, Λ)` from the params
/// (`ϑ` defaults to Γ, `δ` and `Λ` to 0); flagged off-catalog unless the
/// triple matches a catalog case.
pub fn generic_set1(params: &ScenarioParams) -> Result<Scenario> {
    params.validate()?;
    let vartheta = params.vartheta.unwrap_or(params.gamma);
    if !(vartheta > 0.0) {
        return Err(Error::InvalidParameter {
            name: "vartheta",
            reason: "must be positive".into(),
        });
    }
    set1_scenario(params, vartheta, params.delta.unwrap_or(0.0), params.lambda.unwrap_or(0.0))
}

/// Rational-family scenario with the params' `k` (default 2).
pub fn generic_set2(params: &ScenarioParams) -> Result<Scenario> {
    params.validate()?;
    set2_scenario(params, params.k.unwrap_or(2))
}

fn set1_scenario(p: &ScenarioParams, vartheta: f64, delta: f64, lambda: f64) -> Result<Scenario> {
    let g = p.gamma;
    let mu0 = derive_mu_exponential(p.sigma, p.delta_c, vartheta, p.xi2)?;
    let ep = EpFamily::exponential(p.sigma, p.delta_c, vartheta, mu0, p.xi2);
    let (ep, mu_derived) = resolve_mu(ep, p.mu)?;
    let catalog_triple = vartheta == g
        && ((delta == 0.0 && (lambda == 0.0 || lambda == g || lambda == -g))
            || (delta == g && lambda == g));
    let mut params = *p;
    params.vartheta = Some(vartheta);
    params.delta = Some(delta);
    params.lambda = Some(lambda);
    params.mu = Some(ep.mu());
    Ok(Scenario {
        case: None,
        params,
        f: TimeProfile::exponential(1.0, -g),
        omega: TimeProfile::exponential(p.omega0, -0.5 * delta),
        bfield: TimeProfile::exponential(p.b0, lambda),
        ep,
        mu_derived,
        off_catalog: !catalog_triple,
    })
}

fn set2_scenario(p: &ScenarioParams, k: i32) -> Result<Scenario> {
    let (g, chi) = (p.gamma, p.chi);
    let ep = if k == -2 {
        let mu0 = derive_mu_critical(p.sigma, p.delta_c, g, p.xi2)?;
        EpFamily::critical(p.sigma, p.delta_c, g, chi, mu0, p.xi2)
    } else {
        let mu0 = derive_mu_rational(p.sigma, p.delta_c, g, k, p.xi2)?;
        EpFamily::rational(p.sigma, p.delta_c, g, chi, k, mu0, p.xi2)?
    };
    let (ep, mu_derived) = resolve_mu(ep, p.mu)?;
    let mut params = *p;
    params.k = Some(k);
    params.mu = Some(ep.mu());
    Ok(Scenario {
        case: None,
        params,
        f: TimeProfile::constant(1.0),
        omega: TimeProfile::rational(p.omega0, g, chi, -1.0),
        bfield: TimeProfile::rational(p.b0, g, chi, -1.0),
        ep,
        mu_derived,
        off_catalog: k != 2,
    })
}

impl Scenario {
    pub fn family(&self) -> Family {
        match self.ep.kind {
            crate::ep::EpKind::ExponentialSetI { .. } => Family::SetI,
            _ => Family::SetII,
        }
    }

    /// Case id or `"generic"`.
    pub fn label(&self) -> String {
        self.case.map_or_else(|| "generic".to_string(), |c| c.to_string())
    }

    /// Ok when all profiles and the EP family are defined at `t`.
    pub fn check_time(&self, t: f64) -> Result<()> {
        self.f.check(t)?;
        self.omega.check(t)?;
        self.bfield.check(t)?;
        self.ep.check_domain(t)
    }

    /// Rebuilds the scenario with different constants, preserving the case
    /// (or the generic family).
    pub fn rebuild(&self, params: &ScenarioParams) -> Result<Scenario> {
        let mut p = *params;
        // μ was derived for the old constants
        if self.mu_derived {
            p.mu = None;
        }
        match self.case {
            Some(case) => catalog(case, &p),
            None => match self.family() {
                Family::SetI => generic_set1(&p),
                Family::SetII => generic_set2(&p),
            },
        }
    }

    pub fn with_b0(&self, b0: f64) -> Result<Scenario> {
        self.rebuild(&self.params.with_b0(b0))
    }

    pub fn with_charge(&self, q: f64) -> Result<Scenario> {
        self.rebuild(&self.params.with_charge(q))
    }

    /// `s = Γt + χ` for the rational family, `None` otherwise.
    pub fn rational_argument(&self, t: f64) -> Option<f64> {
        match self.family() {
            Family::SetI => None,
            Family::SetII => Some(self.params.gamma * t + self.params.chi),
        }
    }
}

/// Keys accepted in a scenario config document besides the constants.
#[derive(Debug, Clone, Deserialize)]
struct ConfigDocument {
    #[serde(default)]
    family: Option<String>,
    #[serde(default)]
    case: Option<serde_json::Value>,
    #[serde(flatten)]
    params: serde_json::Map<String, serde_json::Value>,
}

/// Parsed scenario config: constants plus an optional case selection.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub params: ScenarioParams,
    pub case: Option<CaseId>,
}

impl ScenarioConfig {
    /// Parses a JSON object whose keys are the [`ScenarioParams`] field
    /// names plus optional `family` and `case`.
    pub fn from_json_str(text: &str) -> Result<Self> {
        if text.trim().is_empty() {
            return Err(Error::Config("config document is empty".into()));
        }
        let doc: ConfigDocument =
            serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        if doc.params.is_empty() && doc.family.is_none() && doc.case.is_none() {
            return Err(Error::Config("config document has no keys".into()));
        }
        let params: ScenarioParams = serde_json::from_value(serde_json::Value::Object(doc.params))
            .map_err(|e| Error::Config(e.to_string()))?;
        let case = match (doc.family, doc.case) {
            (None, None) => None,
            (fam, Some(case)) => {
                let case_str = match &case {
                    serde_json::Value::String(s) => s.clone(),
                    serde_json::Value::Number(n) => n.to_string(),
                    other => return Err(Error::Config(format!("`case` must be a string or number, got {other}"))),
                };
                match fam {
                    // a full identifier may stand alone
                    None => Some(case_str.parse::<CaseId>().map_err(|e| Error::Config(e.to_string()))?),
                    Some(fam) => {
                        let family: Family = fam.parse().map_err(|e: Error| Error::Config(e.to_string()))?;
                        let index = parse_case_index(&case_str)
                            .ok_or_else(|| Error::Config(format!("unknown case `{case_str}`")))?;
                        Some(CaseId::from_parts(family, index).map_err(|e| Error::Config(e.to_string()))?)
                    }
                }
            }
            (Some(_), None) => {
                return Err(Error::Config("`family` given without `case`".into()));
            }
        };
        Ok(Self { params, case })
    }

    pub fn to_json_string(&self) -> String {
        let mut v = serde_json::to_value(self.params).expect("params serialise");
        if let (Some(case), serde_json::Value::Object(map)) = (self.case, &mut v) {
            map.insert("case".into(), serde_json::Value::String(case.to_string()));
        }
        serde_json::to_string_pretty(&v).expect("json value serialises")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Constraint;

    #[test]
    fn case_ids_round_trip() {
        for c in CaseId::ALL {
            assert_eq!(c.as_str().parse::<CaseId>().unwrap(), c);
            assert_eq!(CaseId::from_parts(c.family(), c.index()).unwrap(), c);
        }
        assert_eq!("Set-II-case-II".parse::<CaseId>().unwrap(), CaseId::Set2Case2);
        assert!(matches!("set2-case3".parse::<CaseId>(), Err(Error::UnknownCase(_))));
        assert!(CaseId::from_parts(Family::SetII, 4).is_err());
    }

    #[test]
    fn set1_case1_profiles() {
        let s = catalog(CaseId::Set1Case1, &ScenarioParams::fig1()).unwrap();
        assert_eq!(s.f.value(2.0), (-2.0f64).exp());
        assert_eq!(s.omega.value(3.0), 1e3);
        assert_eq!(s.bfield.value(3.0), 1e2);
        assert!(s.mu_derived && !s.off_catalog);
        let mu = s.ep.mu();
        assert_eq!(mu, (4e14f64 / (4e14 - 1.0)).powf(0.25));
    }

    #[test]
    fn set2_case1_profiles() {
        let s = catalog(CaseId::Set2Case1, &ScenarioParams::fig1()).unwrap();
        let t = 1.5;
        assert_eq!(s.f.value(t), 1.0);
        assert!((s.omega.value(t) - 1e3 / 2.5).abs() < 1e-12);
        assert!((s.bfield.value(t) - 1e2 / 2.5).abs() < 1e-12);
    }

    #[test]
    fn damping_starts_at_one() {
        for c in CaseId::ALL {
            let s = catalog(c, &ScenarioParams::fig2()).unwrap();
            assert_eq!(s.f.value(0.0), 1.0);
        }
    }

    #[test]
    fn inconsistent_mu_is_rejected() {
        let p = ScenarioParams {
            mu: Some(1.01),
            ..ScenarioParams::fig1()
        };
        match catalog(CaseId::Set1Case2, &p) {
            Err(Error::ConstraintViolated { constraint, relative }) => {
                assert_eq!(constraint, Constraint::Exponential);
                assert!(relative > 0.03);
            }
            other => panic!("{other:?}"),
        }
        // the figure's μ = 1 is within rounding of the derived value
        let p = ScenarioParams {
            mu: Some(1.0),
            ..ScenarioParams::fig1()
        };
        for c in CaseId::ALL {
            let s = catalog(c, &p).unwrap();
            assert!(!s.mu_derived);
        }
    }

    #[test]
    fn negative_discriminant_is_rejected() {
        let p = ScenarioParams {
            sigma: 0.1,
            delta_c: 0.1,
            ..ScenarioParams::fig1()
        };
        assert!(matches!(
            catalog(CaseId::Set1Case1, &p),
            Err(Error::ConstraintViolated {
                constraint: Constraint::ExponentialDiscriminant,
                ..
            })
        ));
    }

    #[test]
    fn catalog_fixed_rates_are_enforced() {
        let p = ScenarioParams {
            lambda: Some(0.5),
            ..ScenarioParams::fig1()
        };
        assert!(catalog(CaseId::Set1Case1, &p).is_err());
        let s = generic_set1(&p).unwrap();
        assert!(s.off_catalog);
        let p = ScenarioParams {
            lambda: Some(1.0),
            ..ScenarioParams::fig1()
        };
        assert!(!generic_set1(&p).unwrap().off_catalog);
    }

    #[test]
    fn profile_derivatives_match_finite_differences() {
        let profs = [
            TimeProfile::exponential(2.0, -0.7),
            TimeProfile::rational(3.0, 1.3, 0.4, -1.0),
            TimeProfile::rational(1.0, 1.0, 1.0, 0.5),
            TimeProfile::constant(4.0),
        ];
        for p in profs {
            for t in [0.0, 0.3, 2.0, 7.5] {
                let h = 1e-5 * f64::max(1.0, t);
                let fd = (p.value(t + h) - p.value(t - h)) / (2.0 * h);
                let d = p.derivative(t);
                let scale = d.abs().max(1e-12 * p.value(t).abs()).max(1e-300);
                assert!((fd - d).abs() <= 1e-8 * scale.max(p.value(t).abs() * 1e-3), "{p:?} {t}");
            }
        }
    }

    #[test]
    fn rational_profile_rejects_nonpositive_argument() {
        let p = TimeProfile::rational(1.0, 1.0, -2.0, -1.0);
        assert!(matches!(p.check(2.0), Err(Error::ProfileDomain { .. })));
        assert!(p.check(2.5).is_ok());
    }

    #[test]
    fn config_parsing() {
        let text = r#"{"M":1,"q":1,"omega0":1e3,"B0":100,"Gamma":1,"sigma":1e7,"Delta_c":1e7,
                       "family":"SetI","case":"II"}"#;
        let cfg = ScenarioConfig::from_json_str(text).unwrap();
        assert_eq!(cfg.case, Some(CaseId::Set1Case2));
        assert_eq!(cfg.params, ScenarioParams::fig1());

        let text = r#"{"M":1,"q":1,"omega0":1e3,"B0":100,"Gamma":1,"sigma":1e7,"Delta_c":1e7,"case":"set2-case1"}"#;
        assert_eq!(ScenarioConfig::from_json_str(text).unwrap().case, Some(CaseId::Set2Case1));

        for bad in ["", "   ", "{}", "[1,2]", r#"{"M":1}"#, r#"{"M":1,"bogus":2}"#] {
            assert!(matches!(ScenarioConfig::from_json_str(bad), Err(Error::Config(_))), "{bad}");
        }
    }

    #[test]
    fn config_round_trips() {
        let cfg = ScenarioConfig {
            params: ScenarioParams::fig2(),
            case: Some(CaseId::Set2Case2),
        };
        let back = ScenarioConfig::from_json_str(&cfg.to_json_string()).unwrap();
        assert_eq!(back, cfg);
    }
}
