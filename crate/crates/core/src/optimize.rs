//! Measurement bases on one qubit and the search over them.
//!
//! A basis is fixed by Bloch angles `(θ, φ)`:
//!
//! ```text
//! |i₁⟩ =  cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩
//! |i₂⟩ = −e^{−iφ} sin(θ/2)|0⟩ + cos(θ/2)|1⟩
//! ```
//!
//! Minimization runs a coarse `θ × φ` grid and then a Nelder-Mead simplex
//! started at the best grid node. The simplex works on unconstrained angles;
//! any real `(θ, φ)` still describes a valid basis and results are folded
//! back into `θ ∈ [0, π]`, `φ ∈ [0, 2π)`.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qstate::Matrix2c;

/// Rank-1 projective measurement on a qubit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasurementBasis {
    pub theta: f64,
    pub phi: f64,
}

impl MeasurementBasis {
    /// Builds a basis, folding the angles into their canonical ranges.
    pub fn new(theta: f64, phi: f64) -> Self {
        let mut theta = theta.rem_euclid(TAU);
        let mut phi = phi;
        // (θ, φ) and (2π − θ, φ + π) give the same pair of rays
        if theta > PI {
            theta = TAU - theta;
            phi += PI;
        }
        MeasurementBasis {
            theta,
            phi: phi.rem_euclid(TAU),
        }
    }

    /// Computational basis `{|0⟩, |1⟩}`.
    pub fn computational() -> Self {
        MeasurementBasis::new(0.0, 0.0)
    }

    pub fn vectors(&self) -> [[Complex64; 2]; 2] {
        let (s, c) = (0.5 * self.theta).sin_cos();
        let phase = Complex64::from_polar(1.0, self.phi);
        [
            [Complex64::new(c, 0.0), phase * s],
            [-phase.conj() * s, Complex64::new(c, 0.0)],
        ]
    }

    pub fn projectors(&self) -> [Matrix2c; 2] {
        self.vectors().map(|v| {
            Matrix2c::new(
                v[0] * v[0].conj(),
                v[0] * v[1].conj(),
                v[1] * v[0].conj(),
                v[1] * v[1].conj(),
            )
        })
    }

    /// Unit Bloch vector of `|i₁⟩`.
    pub fn bloch(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }
}

/// Grid-then-simplex minimization settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BasisSearch {
    /// Grid nodes in `θ ∈ [0, π]`, both poles included.
    pub theta_points: usize,
    /// Grid nodes in `φ ∈ [0, 2π)`.
    pub phi_points: usize,
    /// Simplex stops once the spread of objective values is below this...
    pub f_tol: f64,
    /// ...and its vertices lie within this Bloch-sphere distance.
    pub x_tol: f64,
    pub max_iterations: usize,
}

impl Default for BasisSearch {
    fn default() -> Self {
        BasisSearch {
            theta_points: 32,
            phi_points: 32,
            f_tol: 1e-9,
            x_tol: 1e-6,
            max_iterations: 500,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisOptimum {
    pub value: f64,
    pub basis: MeasurementBasis,
    pub iterations: usize,
}

impl BasisSearch {
    /// Same search with objective and position tolerances scaled by `factor`.
    pub fn tightened(&self, factor: f64) -> Self {
        BasisSearch {
            f_tol: self.f_tol * factor,
            x_tol: self.x_tol * factor.sqrt(),
            max_iterations: self.max_iterations * 2,
            ..*self
        }
    }

    pub fn grid(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        let nt = self.theta_points.max(2);
        let np = self.phi_points.max(1);
        (0..nt).flat_map(move |i| {
            let theta = PI * i as f64 / (nt - 1) as f64;
            (0..np).map(move |j| (theta, TAU * j as f64 / np as f64))
        })
    }

    /// Minimizes `objective` over measurement bases.
    pub fn minimize<F>(&self, objective: F) -> Result<BasisOptimum>
    where
        F: Fn(&MeasurementBasis) -> f64,
    {
        let eval = |x: [f64; 2]| {
            let v = objective(&MeasurementBasis::new(x[0], x[1]));
            if v.is_nan() {
                f64::INFINITY
            } else {
                v
            }
        };

        let mut best = ([0.0, 0.0], f64::INFINITY);
        for (theta, phi) in self.grid() {
            let v = eval([theta, phi]);
            if v < best.1 {
                best = ([theta, phi], v);
            }
        }

        let step_theta = PI / (self.theta_points.max(2) - 1) as f64;
        let step_phi = TAU / self.phi_points.max(1) as f64;
        let (x, value, iterations) =
            self.nelder_mead(&eval, best.0, best.1, [step_theta, step_phi])?;
        Ok(BasisOptimum {
            value,
            basis: MeasurementBasis::new(x[0], x[1]),
            iterations,
        })
    }

    fn nelder_mead<F>(
        &self,
        f: &F,
        x0: [f64; 2],
        f0: f64,
        step: [f64; 2],
    ) -> Result<([f64; 2], f64, usize)>
    where
        F: Fn([f64; 2]) -> f64,
    {
        const REFLECT: f64 = 1.0;
        const EXPAND: f64 = 2.0;
        const CONTRACT: f64 = 0.5;
        const SHRINK: f64 = 0.5;

        let x1 = [x0[0] + step[0], x0[1]];
        let x2 = [x0[0], x0[1] + step[1]];
        let mut simplex = [(x0, f0), (x1, f(x1)), (x2, f(x2))];

        let lerp =
            |a: [f64; 2], b: [f64; 2], t: f64| [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];

        for iteration in 0..self.max_iterations {
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            if self.converged(&simplex) {
                return Ok((simplex[0].0, simplex[0].1, iteration));
            }
            let centroid = lerp(simplex[0].0, simplex[1].0, 0.5);
            let worst = simplex[2];

            let xr = lerp(centroid, worst.0, -REFLECT);
            let fr = f(xr);
            if fr < simplex[0].1 {
                let xe = lerp(centroid, worst.0, -EXPAND);
                let fe = f(xe);
                simplex[2] = if fe < fr { (xe, fe) } else { (xr, fr) };
                continue;
            }
            if fr < simplex[1].1 {
                simplex[2] = (xr, fr);
                continue;
            }
            let (xc, fc) = if fr < worst.1 {
                let xc = lerp(centroid, xr, CONTRACT);
                (xc, f(xc))
            } else {
                let xc = lerp(centroid, worst.0, CONTRACT);
                (xc, f(xc))
            };
            if fc < worst.1.min(fr) {
                simplex[2] = (xc, fc);
                continue;
            }
            let best = simplex[0].0;
            for v in simplex.iter_mut().skip(1) {
                let x = lerp(best, v.0, SHRINK);
                *v = (x, f(x));
            }
        }
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        if self.converged(&simplex) {
            return Ok((simplex[0].0, simplex[0].1, self.max_iterations));
        }
        Err(Error::OptimizerFailure {
            iterations: self.max_iterations,
        })
    }

    fn converged(&self, simplex: &[([f64; 2], f64); 3]) -> bool {
        let spread = simplex[2].1 - simplex[0].1;
        if !(spread <= self.f_tol) {
            return false;
        }
        let anchor = MeasurementBasis::new(simplex[0].0[0], simplex[0].0[1]).bloch();
        simplex[1..].iter().all(|(x, _)| {
            let b = MeasurementBasis::new(x[0], x[1]).bloch();
            let d2: f64 = (0..3).map(|k| (b[k] - anchor[k]).powi(2)).sum();
            d2.sqrt() <= self.x_tol
        })
    }
}
