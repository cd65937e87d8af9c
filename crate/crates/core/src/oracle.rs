//! Independent brute-force verification at tiny scale.
//!
//! [`brute_force_extremum`] searches the constrained extremum directly: the
//! (h-weighted) mass sphere of a two- or three-vertex graph is a circle or
//! sphere octant in suitable coordinates, parameterised by one or two angles
//! restricted to the nonnegative orthant (justified because replacing u by
//! |u| never hurts either objective). A dense angular grid plus local
//! refinement gives the reference value the iterative solver must match.
//!
//! [`fd_gradient_check`] validates the analytic gradient against central
//! finite differences of the energy itself.

use crate::energy::{
    directional_derivative, energy_components, lagrange_multiplier, validate_exponent, weight_at,
};
use crate::error::{Error, Result};
use crate::graph::{VertexFunction, WeightedGraph};
use crate::solver::{ProblemSpec, Solution};

/// Angular grid: `resolution` points per dimension plus `refine` local
/// refinement passes around the best cell.
#[derive(Debug, Clone, Copy)]
pub struct GridSpec {
    pub resolution: usize,
    pub refine: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            resolution: 2001,
            refine: 48,
        }
    }
}

impl GridSpec {
    /// A practical default for two angular dimensions, where a full-density
    /// grid would be wastefully large.
    pub fn planar() -> Self {
        Self {
            resolution: 201,
            refine: 24,
        }
    }
}

/// Whether to minimise J or maximise 𝒥 (the same critical point; the
/// reported energy differs in sign convention).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    MinJ,
    MaxScriptJ,
}

const HALF_PI: f64 = std::f64::consts::FRAC_PI_2;

/// Exhaustive constrained extremum on a 2- or 3-vertex graph.
///
/// The constraint `∫ h u² dμ = m` becomes `Σ z_i² = m` for
/// `z_i = u_i √(μ_i h_i)`; angles parameterise the nonnegative portion of
/// that sphere. Returns the best point with the multiplier evaluated by the
/// closed formula.
pub fn brute_force_extremum(
    g: &WeightedGraph,
    spec: &ProblemSpec,
    sense: Sense,
    grid: &GridSpec,
) -> Result<Solution> {
    spec.validate(g)?;
    let n = g.len();
    if !(2..=3).contains(&n) {
        return Err(Error::TooManyVertices(n));
    }
    if n == 2 && grid.resolution < 1000 {
        return Err(Error::InvalidProblem(format!(
            "two-vertex searches need resolution >= 1000 (got {})",
            grid.resolution
        )));
    }
    if grid.resolution < 3 {
        return Err(Error::InvalidProblem(
            "grid resolution must be at least 3".into(),
        ));
    }

    let h = spec.h.as_ref();
    let scale: Vec<f64> = (0..n)
        .map(|i| (g.measure(i) * weight_at(h, i)).sqrt())
        .collect();
    let sqrt_m = spec.m.sqrt();
    let p = spec.p;

    // J evaluated from angles; both senses extremise the same functional.
    let mut evals: u64 = 0;
    let mut eval_j = |angles: &[f64], u_out: Option<&mut VertexFunction>| -> f64 {
        let omega: [f64; 3] = match angles.len() {
            1 => [angles[0].cos(), angles[0].sin(), 0.0],
            _ => {
                let (theta, phi) = (angles[0], angles[1]);
                [
                    phi.sin() * theta.cos(),
                    phi.sin() * theta.sin(),
                    phi.cos(),
                ]
            }
        };
        let mut values = vec![0.0; 3];
        for i in 0..n {
            values[i] = sqrt_m * omega[i] / scale[i];
        }
        values.truncate(n);
        let u = VertexFunction::new(values);
        evals += 1;
        let j = energy_components(g, &u, p).expect("exponent validated").j();
        if let Some(out) = u_out {
            *out = u;
        }
        j
    };

    let dims = n - 1;
    let mut center = vec![HALF_PI / 2.0; dims];
    let mut half_width = HALF_PI / 2.0;
    let mut best_angles = center.clone();
    let mut best_j = f64::INFINITY;

    // Full-domain pass, then shrinking window refinements.
    let mut resolution = grid.resolution;
    for pass in 0..=grid.refine {
        let lo: Vec<f64> = center.iter().map(|c| (c - half_width).max(0.0)).collect();
        let hi: Vec<f64> = center
            .iter()
            .map(|c| (c + half_width).min(HALF_PI))
            .collect();
        let steps = resolution.max(3) - 1;
        let mut improved = false;
        match dims {
            1 => {
                for i in 0..=steps {
                    let t = lo[0] + (hi[0] - lo[0]) * i as f64 / steps as f64;
                    let j = eval_j(&[t], None);
                    if j < best_j {
                        best_j = j;
                        best_angles = vec![t];
                        improved = true;
                    }
                }
            }
            _ => {
                for i in 0..=steps {
                    let t = lo[0] + (hi[0] - lo[0]) * i as f64 / steps as f64;
                    for k in 0..=steps {
                        let f = lo[1] + (hi[1] - lo[1]) * k as f64 / steps as f64;
                        let j = eval_j(&[t, f], None);
                        if j < best_j {
                            best_j = j;
                            best_angles = vec![t, f];
                            improved = true;
                        }
                    }
                }
            }
        }
        let _ = improved;
        center = best_angles.clone();
        // Shrink around the best cell; after the first pass a coarse local
        // grid suffices.
        half_width = (hi[0] - lo[0]).max(if dims == 2 { hi[1] - lo[1] } else { 0.0 })
            / steps as f64
            * 2.0;
        resolution = 33;
        if half_width < 1e-13 {
            break;
        }
        if pass == grid.refine {
            break;
        }
    }

    let mut u = VertexFunction::zeros(g);
    let j = eval_j(&best_angles, Some(&mut u));
    let lambda = lagrange_multiplier(g, &u, h, p, spec.m)?;
    let residual = crate::energy::el_residual(g, &u, lambda, h, p)?;
    let energy = match sense {
        Sense::MinJ => j,
        Sense::MaxScriptJ => -j,
    };
    Ok(Solution {
        mass: crate::energy::weighted_mass(g, &u, h)?,
        u,
        lambda,
        energy,
        residual,
        iterations: evals,
        converged: true,
    })
}

/// Max over coordinate directions of the gap between the analytic
/// directional derivative of J and its central finite difference, relative
/// to max(1, |analytic|).
pub fn fd_gradient_check(
    g: &WeightedGraph,
    u: &VertexFunction,
    p: f64,
    step: f64,
) -> Result<f64> {
    validate_exponent(p)?;
    if !(step > 0.0) || !step.is_finite() {
        return Err(Error::NonPositiveStep(step));
    }
    if u.len() != g.len() {
        return Err(Error::DomainMismatch {
            expected: g.len(),
            got: u.len(),
        });
    }
    let mut worst = 0.0f64;
    for x in 0..g.len() {
        let basis = VertexFunction::from_fn(g, |i| if i == x { 1.0 } else { 0.0 });
        let analytic = directional_derivative(g, u, &basis, p)?;
        let mut plus = u.clone();
        plus.values_mut()[x] += step;
        let mut minus = u.clone();
        minus.values_mut()[x] -= step;
        let fd = (energy_components(g, &plus, p)?.j() - energy_components(g, &minus, p)?.j())
            / (2.0 * step);
        let dev = (analytic - fd).abs() / analytic.abs().max(1.0);
        worst = worst.max(dev);
    }
    Ok(worst)
}
