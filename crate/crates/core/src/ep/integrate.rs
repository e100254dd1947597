//! Adaptive Dormand-Prince 5(4) integration of the EP equation on a
//! prescribed output grid, with finite-difference residual certification.

use serde::Serialize;

use super::ep_residual;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub struct IntegratorOptions {
    /// Local error tolerance, used as both the relative and absolute weight.
    pub tolerance: f64,
    /// Bound on `|residual| / (sum of term magnitudes)` at interior nodes;
    /// `None` skips certification.
    pub residual_tolerance: Option<f64>,
    pub max_steps: usize,
}

impl Default for IntegratorOptions {
    fn default() -> Self {
        Self {
            tolerance: 1e-10,
            residual_tolerance: Some(1e-4),
            max_steps: 5_000_000,
        }
    }
}

/// Numeric `ρ` trajectory with the coefficient values sampled on the grid.
#[derive(Debug, Clone, Serialize)]
pub struct EpSolutionNumeric {
    pub grid: Vec<f64>,
    pub rho: Vec<f64>,
    pub rho_dot: Vec<f64>,
    pub a: Vec<f64>,
    pub a_dot: Vec<f64>,
    pub b: Vec<f64>,
    pub xi2: f64,
    /// Largest certified scaled residual over interior nodes (0 with fewer
    /// than three nodes).
    pub max_residual: f64,
    pub steps: usize,
}

// Dormand-Prince tableau
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
// fifth-order minus embedded fourth-order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

type State = [f64; 2];

fn axpy(y: State, h: f64, terms: &[(f64, State)]) -> State {
    let mut out = y;
    for &(w, k) in terms {
        out[0] += h * w * k[0];
        out[1] += h * w * k[1];
    }
    out
}

/// Integrates `ρ̈ = (ȧ/a)ρ̇ − abρ + ξ²a²/ρ³` from `grid[0]` and records the
/// state at every grid node.
///
/// `a` returns `(a(t), ȧ(t))`.
pub fn ep_integrate<A, B>(
    a: A,
    b: B,
    rho0: f64,
    rho_dot0: f64,
    xi2: f64,
    grid: &[f64],
    opts: &IntegratorOptions,
) -> Result<EpSolutionNumeric>
where
    A: Fn(f64) -> (f64, f64),
    B: Fn(f64) -> f64,
{
    if !(rho0 > 0.0) {
        return Err(Error::InvalidParameter {
            name: "rho0",
            reason: format!("initial rho must be positive, got {rho0}"),
        });
    }
    if grid.is_empty() {
        return Err(Error::InvalidParameter {
            name: "grid",
            reason: "empty grid".into(),
        });
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidParameter {
            name: "grid",
            reason: "grid must be strictly increasing".into(),
        });
    }

    let rhs = |t: f64, y: State| -> State {
        let (av, ad) = a(t);
        let bv = b(t);
        [y[1], (ad / av) * y[1] - av * bv * y[0] + xi2 * av * av / y[0].powi(3)]
    };

    let tol = opts.tolerance;
    let err_norm = |y: &State, ynew: &State, e: &State| -> f64 {
        let mut m: f64 = 0.0;
        for i in 0..2 {
            let sc = tol + tol * y[i].abs().max(ynew[i].abs());
            m = m.max((e[i] / sc).abs());
        }
        m
    };

    let mut rho = Vec::with_capacity(grid.len());
    let mut rho_dot = Vec::with_capacity(grid.len());
    rho.push(rho0);
    rho_dot.push(rho_dot0);

    let mut t = grid[0];
    let mut y: State = [rho0, rho_dot0];
    let mut k1 = rhs(t, y);
    let span = grid[grid.len() - 1] - grid[0];
    let mut h = initial_step(&rhs, t, y, k1, tol, span);
    let mut steps = 0usize;

    for &target in &grid[1..] {
        while t < target {
            if steps >= opts.max_steps {
                return Err(Error::BlowUp {
                    t_last: t,
                    reason: "step budget exhausted".into(),
                });
            }
            let mut last = false;
            let h_free = h;
            if t + h >= target {
                h = target - t;
                last = true;
            }
            if h <= 1e-14 * t.abs().max(1.0) {
                return Err(Error::BlowUp {
                    t_last: t,
                    reason: format!("step size underflow (h = {h:e}, rho = {:e})", y[0]),
                });
            }

            let k2 = rhs(t + C2 * h, axpy(y, h, &[(A21, k1)]));
            let k3 = rhs(t + C3 * h, axpy(y, h, &[(A31, k1), (A32, k2)]));
            let k4 = rhs(t + C4 * h, axpy(y, h, &[(A41, k1), (A42, k2), (A43, k3)]));
            let k5 = rhs(
                t + C5 * h,
                axpy(y, h, &[(A51, k1), (A52, k2), (A53, k3), (A54, k4)]),
            );
            let k6 = rhs(
                t + h,
                axpy(y, h, &[(A61, k1), (A62, k2), (A63, k3), (A64, k4), (A65, k5)]),
            );
            let ynew = axpy(y, h, &[(B1, k1), (B3, k3), (B4, k4), (B5, k5), (B6, k6)]);
            let k7 = rhs(t + h, ynew);
            let e = axpy(
                [0.0, 0.0],
                h,
                &[(E1, k1), (E3, k3), (E4, k4), (E5, k5), (E6, k6), (E7, k7)],
            );
            steps += 1;

            let finite = ynew.iter().chain(e.iter()).all(|v| v.is_finite());
            let err = if finite { err_norm(&y, &ynew, &e) } else { f64::INFINITY };

            if err <= 1.0 && ynew[0] > 0.0 {
                t = if last { target } else { t + h };
                y = ynew;
                k1 = k7;
                let fac = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
                // a step clipped to land on a node says little about the scale
                h = if last { h_free.max(h * fac) } else { h * fac };
            } else if err <= 1.0 {
                // ρ crossed zero: close in on the crossing until the step underflows
                h *= 0.5;
            } else {
                let fac = if err.is_finite() { (0.9 * err.powf(-0.2)).clamp(0.1, 0.9) } else { 0.1 };
                h *= fac;
            }
        }
        rho.push(y[0]);
        rho_dot.push(y[1]);
    }

    let mut a_v = Vec::with_capacity(grid.len());
    let mut a_d = Vec::with_capacity(grid.len());
    let mut b_v = Vec::with_capacity(grid.len());
    for &tt in grid {
        let (av, ad) = a(tt);
        a_v.push(av);
        a_d.push(ad);
        b_v.push(b(tt));
    }

    let mut sol = EpSolutionNumeric {
        grid: grid.to_vec(),
        rho,
        rho_dot,
        a: a_v,
        a_dot: a_d,
        b: b_v,
        xi2,
        max_residual: 0.0,
        steps,
    };
    sol.max_residual = sol.certify(opts.residual_tolerance)?;
    Ok(sol)
}

fn initial_step<F>(rhs: &F, t: f64, y: State, f0: State, tol: f64, span: f64) -> f64
where
    F: Fn(f64, State) -> State,
{
    // Hairer-Wanner starting-step heuristic
    let sc = |i: usize| tol + tol * y[i].abs();
    let d0 = ((y[0] / sc(0)).powi(2) + (y[1] / sc(1)).powi(2)).sqrt() / 2f64.sqrt();
    let d1 = ((f0[0] / sc(0)).powi(2) + (f0[1] / sc(1)).powi(2)).sqrt() / 2f64.sqrt();
    let h0 = if d0 < 1e-5 || d1 < 1e-5 { 1e-6 } else { 0.01 * d0 / d1 };
    let y1 = axpy(y, h0, &[(1.0, f0)]);
    let f1 = rhs(t + h0, y1);
    let d2 = (((f1[0] - f0[0]) / sc(0)).powi(2) + ((f1[1] - f0[1]) / sc(1)).powi(2)).sqrt()
        / 2f64.sqrt()
        / h0;
    let h1 = if d1.max(d2) <= 1e-15 {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / d1.max(d2)).powf(0.2)
    };
    let h = (100.0 * h0).min(h1);
    if span > 0.0 {
        h.min(span)
    } else {
        h
    }
}

impl EpSolutionNumeric {
    /// Scaled EP residual at interior node `i`, with `ρ̈` from the
    /// three-point second difference of the `ρ` samples.
    pub fn node_residual(&self, i: usize) -> Result<f64> {
        let (t0, t1, t2) = (self.grid[i - 1], self.grid[i], self.grid[i + 1]);
        let (h1, h2) = (t1 - t0, t2 - t1);
        let rho_ddot = 2.0
            * (h2 * self.rho[i - 1] - (h1 + h2) * self.rho[i] + h1 * self.rho[i + 1])
            / (h1 * h2 * (h1 + h2));
        let (a, ad, b, r, rd) = (self.a[i], self.a_dot[i], self.b[i], self.rho[i], self.rho_dot[i]);
        let res = ep_residual(a, ad, b, r, rd, rho_ddot, self.xi2).map_err(|e| match e {
            Error::SingularDenominator { what, .. } => Error::SingularDenominator { what, t: t1 },
            e => e,
        })?;
        let scale = rho_ddot.abs()
            + (ad / a * rd).abs()
            + (a * b * r).abs()
            + (self.xi2 * a * a / r.powi(3)).abs();
        Ok(if scale == 0.0 { res.abs() } else { res.abs() / scale })
    }

    fn certify(&self, tolerance: Option<f64>) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for i in 1..self.grid.len().saturating_sub(1) {
            let r = self.node_residual(i)?;
            if let Some(tol) = tolerance {
                if !(r <= tol) {
                    return Err(Error::ResidualNotCertified {
                        t: self.grid[i],
                        residual: r,
                        tolerance: tol,
                    });
                }
            }
            worst = worst.max(r);
        }
        Ok(worst)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform(t0: f64, t1: f64, n: usize) -> Vec<f64> {
        (0..n)
            .map(|i| t0 + (t1 - t0) * i as f64 / (n - 1) as f64)
            .collect()
    }

    #[test]
    fn free_particle_is_linear() {
        let grid = uniform(0.0, 5.0, 51);
        // every term of the residual vanishes, so certification is meaningless
        let opts = IntegratorOptions {
            residual_tolerance: None,
            ..Default::default()
        };
        let sol = ep_integrate(|_| (2.0, 0.0), |_| 0.0, 1.0, 0.5, 0.0, &grid, &opts).unwrap();
        for (t, r) in grid.iter().zip(&sol.rho) {
            assert!((r - (1.0 + 0.5 * t)).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let o = IntegratorOptions::default();
        assert!(ep_integrate(|_| (1.0, 0.0), |_| 1.0, 0.0, 0.0, 1.0, &[0.0, 1.0], &o).is_err());
        assert!(ep_integrate(|_| (1.0, 0.0), |_| 1.0, 1.0, 0.0, 1.0, &[0.0, 0.0], &o).is_err());
    }

    #[test]
    fn collapse_reports_blow_up() {
        // no repulsive term and inward velocity: ρ hits zero at t = 1
        let grid = uniform(0.0, 2.0, 21);
        let err = ep_integrate(|_| (1.0, 0.0), |_| 0.0, 1.0, -1.0, 0.0, &grid, &Default::default())
            .unwrap_err();
        match err {
            Error::BlowUp { t_last, .. } => assert!(t_last <= 1.0 && t_last > 0.8, "{t_last}"),
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn harmonic_ground_state_stays_put() {
        // a = b = 1, ξ² = 1: ρ = 1 is an equilibrium
        let grid = uniform(0.0, 10.0, 101);
        let sol = ep_integrate(|_| (1.0, 0.0), |_| 1.0, 1.0, 0.0, 1.0, &grid, &Default::default())
            .unwrap();
        assert!(sol.rho.iter().all(|r| (r - 1.0).abs() < 1e-12));
    }
}
