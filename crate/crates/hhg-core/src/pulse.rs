//! Closed-form physics primitives: drive field, vector potential,
//! semiclassical action, excursion and the hydrogenic dipole matrix element.

use std::f64::consts::PI;

use crate::config::RunConfig;
use crate::quad::{adaptive_quad, QuadError};
use crate::C64;

/// Flat-top linearly polarized drive `E(t) = e0 cos(omega t + phase)` on
/// `[t_start, t_end]`, zero outside.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaserField {
    pub e0: f64,
    pub omega: f64,
    pub phase: f64,
    pub t_start: f64,
    pub t_end: f64,
}

/// Field quantities at one instant. `a_int` and `a2_int` are the integrals of
/// A and A^2 from `t_start`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSample {
    pub e: f64,
    pub a: f64,
    pub a_int: f64,
    pub a2_int: f64,
}

impl LaserField {
    pub fn from_config(config: &RunConfig) -> Self {
        Self {
            e0: config.e0,
            omega: config.omega_l,
            phase: config.phase,
            t_start: 0.0,
            t_end: config.duration(),
        }
    }

    pub fn period(&self) -> f64 {
        2.0 * PI / self.omega
    }

    fn amplitude(&self) -> f64 {
        self.e0 / self.omega
    }

    pub fn electric_field(&self, t: f64) -> f64 {
        if t < self.t_start || t > self.t_end {
            0.0
        } else {
            self.e0 * (self.omega * t + self.phase).cos()
        }
    }

    /// `A(t) = -(e0/omega) sin(omega t + phase)` inside the pulse, held at its
    /// edge values outside so that A stays continuous.
    pub fn vector_potential(&self, t: f64) -> f64 {
        let tc = t.clamp(self.t_start, self.t_end);
        -self.amplitude() * (self.omega * tc + self.phase).sin()
    }

    pub fn sample(&self, t: f64) -> FieldSample {
        let a0 = self.amplitude();
        let w = self.omega;
        let tc = t.clamp(self.t_start, self.t_end);
        let (s, c) = (w * tc + self.phase).sin_cos();
        let (s0, c0) = (w * self.t_start + self.phase).sin_cos();
        let a = -a0 * s;
        // sin 2x - sin 2x0 = 2 (s c - s0 c0)
        let inside = tc - self.t_start;
        let mut a_int = a0 / w * (c - c0);
        let mut a2_int = a0 * a0 * (0.5 * inside - (s * c - s0 * c0) / (2.0 * w));
        let outside = t - tc;
        if outside != 0.0 {
            a_int += a * outside;
            a2_int += a * a * outside;
        }
        FieldSample {
            e: self.electric_field(t),
            a,
            a_int,
            a2_int,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AtomSpec {
    pub ip: f64,
    pub kappa: f64,
}

impl AtomSpec {
    pub fn from_config(config: &RunConfig) -> Self {
        Self {
            ip: config.ip,
            kappa: config.kappa,
        }
    }
}

/// Action accumulated from `laser.t_start` to the instant described by
/// `field`: `S(p, t, t_start)`.
#[inline]
pub fn phase_from_start(p: f64, t: f64, field: &FieldSample, laser: &LaserField, ip: f64) -> f64 {
    let dt = t - laser.t_start;
    0.5 * (p * p * dt + 2.0 * p * field.a_int + field.a2_int) + ip * dt
}

/// `S(p, t2, t1) = 1/2 int_{t1}^{t2} [p + A]^2 + ip (t2 - t1)` from the
/// closed-form antiderivatives of A and A^2.
pub fn action(p: f64, t2: f64, t1: f64, laser: &LaserField, atom: &AtomSpec) -> f64 {
    let f2 = laser.sample(t2);
    let f1 = laser.sample(t1);
    let dt = t2 - t1;
    0.5 * (p * p * dt + 2.0 * p * (f2.a_int - f1.a_int) + (f2.a2_int - f1.a2_int)) + atom.ip * dt
}

/// The same action evaluated by adaptive quadrature of the kinetic term.
pub fn action_quadrature(
    p: f64,
    t2: f64,
    t1: f64,
    laser: &LaserField,
    atom: &AtomSpec,
    tol: f64,
) -> Result<f64, QuadError<f64>> {
    let kinetic = adaptive_quad(
        |t| {
            let k = p + laser.vector_potential(t);
            0.5 * k * k
        },
        t1,
        t2,
        tol,
    )?;
    Ok(kinetic.value + atom.ip * (t2 - t1))
}

/// Classical excursion `dS/dp = int_{t0}^{t} [p + A]`.
pub fn excursion(p: f64, t: f64, t0: f64, laser: &LaserField) -> f64 {
    p * (t - t0) + laser.sample(t).a_int - laser.sample(t0).a_int
}

/// `<p|d|g> = (8i/pi) sqrt(2 kappa^5) p / (p^2 + kappa^2)^2`.
#[inline]
pub fn dipole_matrix_element(p: f64, atom: &AtomSpec) -> C64 {
    let k2 = atom.kappa * atom.kappa;
    let den = p * p + k2;
    C64::new(0.0, prefactor(atom) * p / (den * den))
}

/// `d/dp` of [`dipole_matrix_element`].
#[inline]
pub fn dipole_matrix_element_dp(p: f64, atom: &AtomSpec) -> C64 {
    let k2 = atom.kappa * atom.kappa;
    let den = p * p + k2;
    C64::new(0.0, prefactor(atom) * (k2 - 3.0 * p * p) / (den * den * den))
}

#[inline]
fn prefactor(atom: &AtomSpec) -> f64 {
    8.0 / PI * (2.0 * atom.kappa.powi(5)).sqrt()
}
