//! Closed-form outgoing fundamental solutions (source at the origin) used
//! for boundary data and error measurement, plus the manufactured plane
//! wave for convergence studies.
//!
//! Companion fields (acoustic velocity, magnetic field) are derived
//! analytically from the first-order systems so that boundary projections
//! and error metrics get smooth evaluations; finite-difference oracles in
//! the tests guard the derivations.

use crate::error::{Result, SolverError};
use crate::special::hankel1;
use crate::{C64, I};
use serde::{Deserialize, Serialize};

/// Physical parameters shared by the three models.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GreensParams {
    pub omega: f64,
    pub eps0: f64,
    pub mu0: f64,
    /// Conductivity; fixed 0 for the lossless experiments.
    pub sigma: f64,
    pub lambda: f64,
    pub mu_lame: f64,
    pub rho0: f64,
}

impl GreensParams {
    pub fn with_omega(omega: f64) -> Self {
        GreensParams {
            omega,
            eps0: 1.0,
            mu0: 1.0,
            sigma: 0.0,
            lambda: 2.0,
            mu_lame: 1.0,
            rho0: 1.0,
        }
    }

    /// Electromagnetic wavenumber k0 = omega sqrt(eps0 mu0).
    pub fn k0(&self) -> f64 {
        self.omega * (self.eps0 * self.mu0).sqrt()
    }

    /// Compressive wavenumber kp = omega sqrt(rho0 / (lambda + 2 mu)).
    pub fn kp(&self) -> f64 {
        self.omega * (self.rho0 / (self.lambda + 2.0 * self.mu_lame)).sqrt()
    }

    /// Shear wavenumber ks = omega sqrt(rho0 / mu).
    pub fn ks(&self) -> f64 {
        self.omega * (self.rho0 / self.mu_lame).sqrt()
    }
}

fn radius(x: (f64, f64)) -> Result<f64> {
    let r = f64::sqrt(x.0 * x.0 + x.1 * x.1);
    if r == 0.0 {
        return Err(SolverError::Singularity);
    }
    Ok(r)
}

/// Acoustic pressure p = (i/4) H_0^(1)(omega r) and the velocity
/// u = grad p / (-i omega) = (1/4) H_1^(1)(omega r) (x, y)/r.
pub fn acoustic_exact_2d(x: (f64, f64), params: &GreensParams) -> Result<(C64, [C64; 2])> {
    let r = radius(x)?;
    let w = params.omega;
    let p = I / 4.0 * hankel1(0, w * r)?;
    let h1 = hankel1(1, w * r)?;
    let u = [h1 / 4.0 * (x.0 / r), h1 / 4.0 * (x.1 / r)];
    Ok((p, u))
}

/// Electric field of an x-directed point current and the out-of-plane
/// magnetic field recovered from Faraday's law.
///
/// With g(r) = (i/4) H_0^(1)(k0 r) and z = k0 r, expanding the second
/// derivatives through the Hankel recurrences gives
///   E_x = -(omega mu0 / 4) [ H_0(z) y^2/r^2 + H_1(z)/z (x^2 - y^2)/r^2 ],
///   E_y = -(omega mu0 / 4) H_2(z) x y / r^2,
///   H   = (i k0 / 4) H_1(z) y / r.
pub fn maxwell_exact_2d(x: (f64, f64), params: &GreensParams) -> Result<([C64; 2], C64)> {
    let r = radius(x)?;
    let k0 = params.k0();
    let z = k0 * r;
    let h0 = hankel1(0, z)?;
    let h1 = hankel1(1, z)?;
    let h2 = hankel1(2, z)?;
    let (cx, cy) = (x.0 / r, x.1 / r);
    let scale = -params.omega * params.mu0 / 4.0;
    let e_x = scale * (h0 * (cy * cy) + h1 / z * (cx * cx - cy * cy));
    let e_y = scale * (h2 * (cx * cy));
    let h = I * k0 / 4.0 * h1 * cy;
    Ok(([e_x, e_y], h))
}

/// Displacement of an x-directed point force,
///   u_x = (i/4mu)(Psi + chi x^2/r^2),  u_y = (i/4mu) chi x y / r^2,
/// with
///   Psi = H_0(ks r) + (kp/ks)^2 H_1(kp r)/(kp r) - H_1(ks r)/(ks r),
///   chi = H_2(ks r) - (kp/ks)^2 H_2(kp r).
pub fn elastic_exact_2d(x: (f64, f64), params: &GreensParams) -> Result<[C64; 2]> {
    let r = radius(x)?;
    let kp = params.kp();
    let ks = params.ks();
    let (zp, zs) = (kp * r, ks * r);
    let ratio2 = (kp / ks).powi(2);
    let psi = hankel1(0, zs)? + ratio2 * hankel1(1, zp)? / zp - hankel1(1, zs)? / zs;
    let chi = hankel1(2, zs)? - ratio2 * hankel1(2, zp)?;
    let pre = I / (4.0 * params.mu_lame);
    let (cx, cy) = (x.0 / r, x.1 / r);
    Ok([pre * (psi + chi * cx * cx), pre * chi * (cx * cy)])
}

/// Manufactured plane wave, p = exp(i omega (x cos th + y sin th)) with
/// velocity u = -(cos th, sin th) p (from the first-order acoustic system).
#[derive(Debug, Clone, Copy)]
pub struct PlaneWave {
    pub omega: f64,
    pub angle: f64,
}

impl PlaneWave {
    pub fn pressure(&self, x: f64, y: f64) -> C64 {
        let (s, c) = self.angle.sin_cos();
        (I * self.omega * (x * c + y * s)).exp()
    }

    pub fn velocity(&self, x: f64, y: f64) -> [C64; 2] {
        let (s, c) = self.angle.sin_cos();
        let p = self.pressure(x, y);
        [-c * p, -s * p]
    }
}
