//! Adaptive composite Gauss-Legendre quadrature over the half Brillouin zone
//! `[0, π]`.
//!
//! Every panel is integrated twice: once with the base rule on the whole panel
//! and once on each of its halves. The difference is the panel's error
//! estimate and the two-half value is kept. Panels with the largest error are
//! bisected until the global estimate meets `max(abs_tol, rel_tol·|I|)` for
//! every component.
//!
//! Gauss-Legendre nodes never touch the panel ends, so integrands that are
//! `0/0` exactly at `φ = 0` or `φ = π` (the `ã = ±1` case) need no special
//! treatment.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerances and rule size for [`integrate_bz`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    /// Gauss-Legendre nodes per panel.
    pub base_order: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_subdivisions: 512,
            base_order: 64,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) || !(self.rel_tol > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "quadrature tolerances must be positive (abs_tol = {}, rel_tol = {})",
                self.abs_tol, self.rel_tol
            )));
        }
        if self.max_subdivisions < 1 || self.base_order < 1 {
            return Err(Error::InvalidParameter(
                "max_subdivisions and base_order must be at least 1".into(),
            ));
        }
        Ok(())
    }

    /// Same spec with twice as many nodes per panel.
    pub fn doubled(&self) -> Self {
        QuadratureSpec {
            base_order: self.base_order * 2,
            ..*self
        }
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Computes the `n`-point rule by Newton iteration on `P_n`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        GaussLegendre { nodes, weights }
    }

    /// Shared instance for order `n`.
    pub fn cached(n: usize) -> Arc<GaussLegendre> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GaussLegendre>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().unwrap_or_else(|e| e.into_inner());
        guard
            .entry(n)
            .or_insert_with(|| Arc::new(GaussLegendre::new(n)))
            .clone()
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Applies the rule on `[lo, hi]` to a vector-valued integrand.
    pub fn apply<const N: usize, F>(&self, f: &F, lo: f64, hi: f64) -> [f64; N]
    where
        F: Fn(f64) -> [f64; N],
    {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        let mut acc = [0.0; N];
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            let v = f(mid + half * x);
            for k in 0..N {
                acc[k] += w * v[k];
            }
        }
        acc.map(|a| a * half)
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate<const N: usize> {
    pub value: [f64; N],
    pub error: [f64; N],
    pub subdivisions: usize,
}

struct Panel<const N: usize> {
    lo: f64,
    hi: f64,
    halves: [[f64; N]; 2],
    error: [f64; N],
}

impl<const N: usize> Panel<N> {
    fn new<F: Fn(f64) -> [f64; N]>(
        rule: &GaussLegendre,
        f: &F,
        lo: f64,
        hi: f64,
        whole: [f64; N],
    ) -> Self {
        let mid = 0.5 * (lo + hi);
        let left = rule.apply(f, lo, mid);
        let right = rule.apply(f, mid, hi);
        let mut error = [0.0; N];
        for k in 0..N {
            error[k] = (left[k] + right[k] - whole[k]).abs();
        }
        Panel {
            lo,
            hi,
            halves: [left, right],
            error,
        }
    }

    fn value(&self) -> [f64; N] {
        std::array::from_fn(|k| self.halves[0][k] + self.halves[1][k])
    }

    fn worst(&self) -> f64 {
        self.error.iter().copied().fold(0.0, f64::max)
    }
}

/// Adaptive integration of a vector-valued integrand over `[lo, hi]`.
///
/// All components share the node set, so expensive common subexpressions
/// are evaluated once per node. Convergence requires every component to meet
/// its own `max(abs_tol, rel_tol·|I_k|)`.
pub fn integrate_adaptive<const N: usize, F>(
    f: F,
    lo: f64,
    hi: f64,
    spec: &QuadratureSpec,
) -> Result<Estimate<N>>
where
    F: Fn(f64) -> [f64; N],
{
    spec.validate()?;
    let rule = GaussLegendre::cached(spec.base_order);
    let whole = rule.apply(&f, lo, hi);
    let mut panels = vec![Panel::new(&rule, &f, lo, hi, whole)];
    let mut subdivisions = 0;
    loop {
        let mut value = [0.0; N];
        let mut error = [0.0; N];
        for p in &panels {
            let v = p.value();
            for k in 0..N {
                value[k] += v[k];
                error[k] += p.error[k];
            }
        }
        let converged = (0..N).all(|k| {
            let tol = spec.abs_tol.max(spec.rel_tol * value[k].abs());
            error[k] <= tol
        });
        if converged {
            return Ok(Estimate {
                value,
                error,
                subdivisions,
            });
        }
        if subdivisions >= spec.max_subdivisions || value.iter().any(|v| !v.is_finite()) {
            let worst = (0..N)
                .max_by(|&i, &j| error[i].total_cmp(&error[j]))
                .unwrap_or(0);
            return Err(Error::ConvergenceFailure {
                subdivisions,
                estimate: value.get(worst).copied().unwrap_or(f64::NAN),
                error: error.get(worst).copied().unwrap_or(f64::NAN),
            });
        }
        let idx = panels
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.worst().total_cmp(&b.1.worst()))
            .map(|(i, _)| i)
            .expect("at least one panel");
        let p = panels.swap_remove(idx);
        let mid = 0.5 * (p.lo + p.hi);
        panels.push(Panel::new(&rule, &f, p.lo, mid, p.halves[0]));
        panels.push(Panel::new(&rule, &f, mid, p.hi, p.halves[1]));
        subdivisions += 1;
    }
}

/// Integrates a scalar function over `[0, π]`.
pub fn integrate_bz<F>(f: F, spec: &QuadratureSpec) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    integrate_adaptive(|x| [f(x)], 0.0, PI, spec).map(|e| e.value[0])
}
