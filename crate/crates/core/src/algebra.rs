//! Linear canonical algebra on the phase-space basis `z = (x₁, x₂, p₁, p₂)`.
//!
//! Commutators of linear observables come from the symplectic form
//! `[u·z, v·z] = i uᵀJv`, so the Bopp-shift table is exact. Quadratic
//! Hamiltonians are symmetric matrices `Q` with `H = ½ zᵀQz`.

use nalgebra::{Matrix4, Vector4};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::Scenario;

pub const X1: usize = 0;
pub const X2: usize = 1;
pub const P1: usize = 2;
pub const P2: usize = 3;

/// `u·z` for a coefficient vector `u` over `(x₁, x₂, p₁, p₂)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearObservable(pub [f64; 4]);

impl LinearObservable {
    pub fn basis(i: usize) -> Self {
        let mut c = [0.0; 4];
        c[i] = 1.0;
        Self(c)
    }

    pub fn x1() -> Self {
        Self::basis(X1)
    }
    pub fn x2() -> Self {
        Self::basis(X2)
    }
    pub fn p1() -> Self {
        Self::basis(P1)
    }
    pub fn p2() -> Self {
        Self::basis(P2)
    }

    pub fn scaled(self, s: f64) -> Self {
        Self(self.0.map(|v| v * s))
    }

    pub fn plus(self, other: Self) -> Self {
        let mut c = self.0;
        for (a, b) in c.iter_mut().zip(other.0) {
            *a += b;
        }
        Self(c)
    }

    pub fn eval(&self, z: &[f64; 4]) -> f64 {
        self.0.iter().zip(z).map(|(a, b)| a * b).sum()
    }

    fn vector(&self) -> Vector4<f64> {
        Vector4::from(self.0)
    }
}

/// Imaginary coefficient `κ` of `[u, v] = iκ`, i.e. `uᵀJv` with
/// `J = [[0, I], [−I, 0]]`.
pub fn commutator(u: &LinearObservable, v: &LinearObservable) -> f64 {
    let (u, v) = (u.0, v.0);
    u[X1] * v[P1] + u[X2] * v[P2] - u[P1] * v[X1] - u[P2] * v[X2]
}

/// Noncommutative observables expressed over the canonical basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoppShift {
    pub x1: LinearObservable,
    pub x2: LinearObservable,
    pub p1: LinearObservable,
    pub p2: LinearObservable,
}

impl BoppShift {
    pub fn as_array(&self) -> [LinearObservable; 4] {
        [self.x1, self.x2, self.p1, self.p2]
    }

    /// `table[i][j] = κ` with `[Oᵢ, Oⱼ] = iκ` over `(X₁, X₂, P₁, P₂)`.
    pub fn commutator_table(&self) -> [[f64; 4]; 4] {
        let obs = self.as_array();
        let mut t = [[0.0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                t[i][j] = commutator(&obs[i], &obs[j]);
            }
        }
        t
    }
}

/// `X₁ = x₁ − (θ/2)p₂`, `X₂ = x₂ + (θ/2)p₁`, `P₁ = p₁ + (Ω/2)x₂`,
/// `P₂ = p₂ − (Ω/2)x₁`.
pub fn bopp_shift(theta: f64, omega_nc: f64) -> BoppShift {
    let (ht, ho) = (0.5 * theta, 0.5 * omega_nc);
    BoppShift {
        x1: LinearObservable([1.0, 0.0, 0.0, -ht]),
        x2: LinearObservable([0.0, 1.0, ht, 0.0]),
        p1: LinearObservable([0.0, ho, 1.0, 0.0]),
        p2: LinearObservable([-ho, 0.0, 0.0, 1.0]),
    }
}

/// The table every Bopp shift must reproduce.
pub fn expected_commutator_table(theta: f64, omega_nc: f64) -> [[f64; 4]; 4] {
    let d = 1.0 + theta * omega_nc / 4.0;
    [
        [0.0, theta, d, 0.0],
        [-theta, 0.0, 0.0, d],
        [-d, 0.0, 0.0, omega_nc],
        [0.0, -d, -omega_nc, 0.0],
    ]
}

/// Symmetric `Q` with `H = ½ zᵀQz`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticForm {
    pub matrix: Matrix4<f64>,
}

impl QuadraticForm {
    pub fn zero() -> Self {
        Self {
            matrix: Matrix4::zeros(),
        }
    }

    /// Adds `k (u·z)²`, i.e. `2k uuᵀ` to `Q`.
    pub fn add_square(&mut self, k: f64, u: &LinearObservable) {
        let v = u.vector();
        self.matrix += (2.0 * k) * v * v.transpose();
    }

    /// `½(a(p₁²+p₂²) + b(x₁²+x₂²)) + c(p₁x₂ − p₂x₁)`.
    pub fn from_coefficients(c: &HamiltonianCoefficients) -> Self {
        let mut m = Matrix4::zeros();
        m[(X1, X1)] = c.b;
        m[(X2, X2)] = c.b;
        m[(P1, P1)] = c.a;
        m[(P2, P2)] = c.a;
        m[(P1, X2)] = c.c;
        m[(X2, P1)] = c.c;
        m[(P2, X1)] = -c.c;
        m[(X1, P2)] = -c.c;
        Self { matrix: m }
    }

    pub fn eval(&self, z: &[f64; 4]) -> f64 {
        let v = Vector4::from(*z);
        0.5 * (v.transpose() * self.matrix * v)[(0, 0)]
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.matrix[(i, j)]
    }

    /// Largest `|Qᵢⱼ − Qⱼᵢ|`.
    pub fn asymmetry(&self) -> f64 {
        (self.matrix - self.matrix.transpose()).amax()
    }

    /// Largest entry difference relative to the largest entry of either.
    pub fn relative_distance(&self, other: &Self) -> f64 {
        let scale = self.matrix.amax().max(other.matrix.amax());
        if scale == 0.0 {
            0.0
        } else {
            (self.matrix - other.matrix).amax() / scale
        }
    }
}

/// Instantaneous values of the model inputs at one time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Couplings {
    pub mass: f64,
    pub charge: f64,
    /// damping factor `f(t)`
    pub f: f64,
    /// oscillator frequency `ω(t)`
    pub omega: f64,
    /// field `B(t)`
    pub bfield: f64,
}

impl Couplings {
    fn check(&self, t: f64) -> Result<()> {
        if !(self.f > 0.0) {
            return Err(Error::NonPositiveDamping { t, value: self.f });
        }
        if !(self.mass > 0.0) {
            return Err(Error::InvalidParameter {
                name: "M",
                reason: format!("must be positive, got {}", self.mass),
            });
        }
        Ok(())
    }

    /// `q²B²f/(4M) + Mω²/f`, the coefficient shared by the θ² and Ω⁰ terms.
    pub fn kappa(&self) -> f64 {
        let qb = self.charge * self.bfield;
        qb * qb * self.f / (4.0 * self.mass) + self.mass * self.omega * self.omega / self.f
    }
}

impl Scenario {
    pub fn couplings(&self, t: f64) -> Result<Couplings> {
        self.check_time(t)?;
        let c = Couplings {
            mass: self.params.mass,
            charge: self.params.charge,
            f: self.f.value(t),
            omega: self.omega.value(t),
            bfield: self.bfield.value(t),
        };
        c.check(t)?;
        Ok(c)
    }
}

/// `(a, b, c)` of `H = ½a p² + ½b x² + c(p₁x₂ − p₂x₁)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HamiltonianCoefficients {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

/// Substitutes the Bopp-shifted observables and the symmetric-gauge
/// potential `A = (−B X₂/2, B X₁/2)` into the NC Hamiltonian.
pub fn expand_nc_hamiltonian(
    cp: &Couplings,
    theta: f64,
    omega_nc: f64,
    t: f64,
) -> Result<QuadraticForm> {
    cp.check(t)?;
    let nc = bopp_shift(theta, omega_nc);
    let half_qb = 0.5 * cp.charge * cp.bfield;
    // P₁ − qA₁ = P₁ + (qB/2)X₂,  P₂ − qA₂ = P₂ − (qB/2)X₁
    let pi1 = nc.p1.plus(nc.x2.scaled(half_qb));
    let pi2 = nc.p2.plus(nc.x1.scaled(-half_qb));
    let kin = cp.f / (2.0 * cp.mass);
    let pot = cp.mass * cp.omega * cp.omega / (2.0 * cp.f);
    let mut q = QuadraticForm::zero();
    q.add_square(kin, &pi1);
    q.add_square(kin, &pi2);
    q.add_square(pot, &nc.x1);
    q.add_square(pot, &nc.x2);
    Ok(q)
}

/// Closed-form `(a, b, c)` in terms of `(f, ω, B, θ, Ω)`.
pub fn hamiltonian_coefficients(
    cp: &Couplings,
    theta: f64,
    omega_nc: f64,
    t: f64,
) -> Result<HamiltonianCoefficients> {
    cp.check(t)?;
    let (m, f) = (cp.mass, cp.f);
    let qb = cp.charge * cp.bfield;
    let k = cp.kappa();
    let a = f / m + qb * f * theta / (2.0 * m) + 0.25 * k * theta * theta;
    let b = k + qb * f * omega_nc / (2.0 * m) + f * omega_nc * omega_nc / (4.0 * m);
    let c = 0.5 * ((qb * f / m) * (1.0 + theta * omega_nc / 4.0) + omega_nc * f / m + k * theta);
    Ok(HamiltonianCoefficients { a, b, c })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cp(mass: f64, charge: f64, f: f64, omega: f64, bfield: f64) -> Couplings {
        Couplings {
            mass,
            charge,
            f,
            omega,
            bfield,
        }
    }

    #[test]
    fn canonical_pairs() {
        let (x1, x2, p1) = (LinearObservable::x1(), LinearObservable::x2(), LinearObservable::p1());
        assert_eq!(commutator(&x1, &p1), 1.0);
        assert_eq!(commutator(&x1, &x2), 0.0);
        assert_eq!(commutator(&p1, &x1), -1.0);
    }

    #[test]
    fn identity_shift() {
        let s = bopp_shift(0.0, 0.0);
        assert_eq!(s.x1, LinearObservable::x1());
        assert_eq!(s.p2, LinearObservable::p2());
    }

    #[test]
    fn shifted_table_example() {
        let s = bopp_shift(0.1, 0.3);
        let t = s.commutator_table();
        assert!((t[0][2] - 1.0075).abs() < 1e-15);
        assert_eq!(t[0][3], 0.0);
        assert!((t[0][1] - 0.1).abs() < 1e-15);
        assert!((t[2][3] - 0.3).abs() < 1e-15);
    }

    #[test]
    fn free_oscillator_limit() {
        let c = cp(2.0, 1.0, 1.0, 3.0, 0.0);
        let h = hamiltonian_coefficients(&c, 0.0, 0.0, 0.0).unwrap();
        assert_eq!((h.a, h.b, h.c), (0.5, 18.0, 0.0));
        let q = expand_nc_hamiltonian(&c, 0.0, 0.0, 0.0).unwrap();
        assert!(q.relative_distance(&QuadraticForm::from_coefficients(&h)) < 1e-15);
    }

    #[test]
    fn hand_substitution_example() {
        let c = cp(1.0, 1.0, 1.0, 2.0, 0.0);
        let h = hamiltonian_coefficients(&c, 0.1, 0.3, 0.0).unwrap();
        assert!((h.a - 1.01).abs() < 1e-14);
        assert!((h.b - 4.0225).abs() < 1e-14);
        assert!((h.c - 0.35).abs() < 1e-14);
    }

    #[test]
    fn zero_field_cross_term() {
        let c = cp(1.5, -2.0, 0.7, 1.3, 0.0);
        let (th, om) = (0.2, -0.4);
        let h = hamiltonian_coefficients(&c, th, om, 0.0).unwrap();
        let expect = 0.5 * (om * c.f / c.mass + c.mass * c.omega * c.omega / c.f * th);
        assert!((h.c - expect).abs() < 1e-15);
    }

    #[test]
    fn non_positive_damping_is_rejected() {
        let c = cp(1.0, 1.0, 0.0, 1.0, 1.0);
        assert!(matches!(
            expand_nc_hamiltonian(&c, 0.0, 0.0, 2.0),
            Err(Error::NonPositiveDamping { t, .. }) if t == 2.0
        ));
        assert!(hamiltonian_coefficients(&c, 0.0, 0.0, 0.0).is_err());
    }

    proptest! {
        #[test]
        fn commutator_is_antisymmetric(u in prop::array::uniform4(-5.0f64..5.0),
                                       v in prop::array::uniform4(-5.0f64..5.0)) {
            let (u, v) = (LinearObservable(u), LinearObservable(v));
            let (a, b) = (commutator(&u, &v), commutator(&v, &u));
            prop_assert!((a + b).abs() <= 1e-14 * (1.0 + a.abs()));
        }

        #[test]
        fn bopp_table_matches(theta in -10.0f64..10.0, om in -10.0f64..10.0) {
            let got = bopp_shift(theta, om).commutator_table();
            let want = expected_commutator_table(theta, om);
            for i in 0..4 {
                for j in 0..4 {
                    prop_assert!((got[i][j] - want[i][j]).abs() <= 1e-14 * (1.0 + want[i][j].abs()));
                }
            }
        }

        #[test]
        fn expansion_matches_coefficients(mass in 0.1f64..10.0, charge in -3.0f64..3.0,
                                          f in 0.01f64..5.0, omega in 0.0f64..5.0,
                                          bfield in -5.0f64..5.0, theta in -2.0f64..2.0,
                                          om in -2.0f64..2.0,
                                          z in prop::array::uniform4(-3.0f64..3.0)) {
            let c = cp(mass, charge, f, omega, bfield);
            let q = expand_nc_hamiltonian(&c, theta, om, 0.0).unwrap();
            let h = hamiltonian_coefficients(&c, theta, om, 0.0).unwrap();
            let r = QuadraticForm::from_coefficients(&h);
            prop_assert!(q.asymmetry() <= 1e-15 * q.matrix.amax());
            prop_assert!(q.relative_distance(&r) < 1e-12);
            prop_assert!((q.entry(P1, X2) + q.entry(P2, X1)).abs() <= 1e-14 * q.matrix.amax());
            let (e1, e2) = (q.eval(&z), r.eval(&z));
            let scale = q.matrix.amax() * z.iter().map(|v| v * v).sum::<f64>();
            prop_assert!((e1 - e2).abs() <= 1e-12 * scale.max(1e-300));
        }
    }
}
