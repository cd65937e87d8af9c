//! Energy functionals, Lagrange multipliers, and Euler–Lagrange residuals.
//!
//! Two constrained problems share these pieces. On a finite graph the
//! functional
//!
//! ```text
//! J(u) = ½ ∫ |∇u|² dμ − (1/p) ∫ |u|^p dμ
//! ```
//!
//! is minimised over the mass sphere `{∫ u² dμ = m}`; with a confining
//! potential h the negation `𝒥 = −J` is maximised over `{∫ h u² dμ = m}`.
//! The 1/p coefficient makes the Euler–Lagrange equation of either problem
//!
//! ```text
//! −Δu + λ h u = |u|^{p−2} u,     λ = (1/m) { ∫ |u|^p dμ − ∫ |∇u|² dμ }
//! ```
//!
//! with h ≡ 1 in the finite case. The nonlinearity is extended to signed
//! inputs as the odd power `|u|^{p−2}u`.

use crate::error::{Error, Result};
use crate::graph::{VertexFunction, WeightedGraph};

/// Kinetic and nonlinear parts of the energy; both are nonnegative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyBreakdown {
    /// `½ ∫ |∇u|² dμ`
    pub kinetic: f64,
    /// `(1/p) ∫ |u|^p dμ`
    pub nonlinear: f64,
}

impl EnergyBreakdown {
    /// The functional minimised on the mass sphere: kinetic − nonlinear.
    pub fn j(&self) -> f64 {
        self.kinetic - self.nonlinear
    }

    /// The functional maximised under the weighted constraint: nonlinear − kinetic.
    pub fn j_script(&self) -> f64 {
        self.nonlinear - self.kinetic
    }
}

pub(crate) fn validate_exponent(p: f64) -> Result<()> {
    if !(p > 2.0) || !p.is_finite() {
        return Err(Error::InvalidExponent {
            value: p,
            requirement: "p > 2",
        });
    }
    Ok(())
}

/// Odd power `|t|^{p−2} t`, the nonlinearity on signed inputs.
pub(crate) fn odd_power(t: f64, p: f64) -> f64 {
    t.abs().powf(p - 2.0) * t
}

pub(crate) fn weight_at(h: Option<&VertexFunction>, i: usize) -> f64 {
    h.map_or(1.0, |h| h[i])
}

fn check_weight(g: &WeightedGraph, h: Option<&VertexFunction>) -> Result<()> {
    if let Some(h) = h {
        if h.len() != g.len() {
            return Err(Error::DomainMismatch {
                expected: g.len(),
                got: h.len(),
            });
        }
    }
    Ok(())
}

/// `∫ h u² dμ`, the (possibly h-weighted) squared mass.
pub fn weighted_mass(
    g: &WeightedGraph,
    u: &VertexFunction,
    h: Option<&VertexFunction>,
) -> Result<f64> {
    check_weight(g, h)?;
    if u.len() != g.len() {
        return Err(Error::DomainMismatch {
            expected: g.len(),
            got: u.len(),
        });
    }
    Ok(g
        .measures()
        .iter()
        .enumerate()
        .map(|(i, mu)| mu * weight_at(h, i) * u[i] * u[i])
        .sum())
}

/// Splits the energy of `u` into kinetic and nonlinear parts.
pub fn energy_components(
    g: &WeightedGraph,
    u: &VertexFunction,
    p: f64,
) -> Result<EnergyBreakdown> {
    validate_exponent(p)?;
    let kinetic = 0.5 * g.dirichlet_energy(u)?;
    let nonlinear: f64 = g
        .measures()
        .iter()
        .zip(u.values())
        .map(|(mu, v)| mu * v.abs().powf(p))
        .sum::<f64>()
        / p;
    Ok(EnergyBreakdown { kinetic, nonlinear })
}

/// `λ = (1/m) { ∫ |u|^p dμ − ∫ |∇u|² dμ }`.
///
/// The same formula serves the finite and the potential problem; h enters
/// only through the constraint, which is checked here. A relative mass
/// mismatch above 1e−8 logs a warning but still evaluates the formula.
pub fn lagrange_multiplier(
    g: &WeightedGraph,
    u: &VertexFunction,
    h: Option<&VertexFunction>,
    p: f64,
    m: f64,
) -> Result<f64> {
    validate_exponent(p)?;
    if !(m > 0.0) {
        return Err(Error::NonPositiveMass(m));
    }
    let mass = weighted_mass(g, u, h)?;
    if (mass - m).abs() > 1e-8 * m {
        log::warn!(
            "lagrange_multiplier: constraint mass is {mass}, expected {m}; \
             the formula is evaluated anyway"
        );
    }
    let lp: f64 = g
        .measures()
        .iter()
        .zip(u.values())
        .map(|(mu, v)| mu * v.abs().powf(p))
        .sum();
    let grad = g.dirichlet_energy(u)?;
    Ok((lp - grad) / m)
}

/// Sup-norm of `−Δu + λ h u − |u|^{p−2}u` over the vertices.
///
/// Zero certifies a solution of the Euler–Lagrange equation.
pub fn el_residual(
    g: &WeightedGraph,
    u: &VertexFunction,
    lambda: f64,
    h: Option<&VertexFunction>,
    p: f64,
) -> Result<f64> {
    validate_exponent(p)?;
    check_weight(g, h)?;
    let lap = g.laplacian(u)?;
    let mut worst = 0.0f64;
    for i in 0..g.len() {
        let r = -lap[i] + lambda * weight_at(h, i) * u[i] - odd_power(u[i], p);
        worst = worst.max(r.abs());
    }
    Ok(worst)
}

/// Upper bound `1/(p h₀ (μ_min h₀)^{(p−2)/2})` for the constrained maximum
/// at unit mass, where `h₀ = min h` and `μ_min = min μ`.
pub fn lambda1_upper_bound(g: &WeightedGraph, h: &VertexFunction, p: f64) -> Result<f64> {
    validate_exponent(p)?;
    check_weight(g, Some(h))?;
    let h0 = h.values().iter().copied().fold(f64::INFINITY, f64::min);
    if !(h0 > 0.0) {
        let at = h
            .values()
            .iter()
            .position(|&v| v == h0)
            .unwrap_or_default();
        return Err(Error::NonPositivePotential {
            id: g.id(at).to_string(),
            min: h0,
        });
    }
    let mu_min = g.min_measure();
    Ok(1.0 / (p * h0 * (mu_min * h0).powf((p - 2.0) / 2.0)))
}

/// L²(μ) gradient of J at u: `−Δu − |u|^{p−2}u`.
///
/// The directional derivative of J in direction φ is the μ-weighted inner
/// product of this with φ.
pub fn j_gradient(g: &WeightedGraph, u: &VertexFunction, p: f64) -> Result<VertexFunction> {
    validate_exponent(p)?;
    let lap = g.laplacian(u)?;
    Ok(VertexFunction::from_fn(g, |i| {
        -lap[i] - odd_power(u[i], p)
    }))
}

/// `d/dt J(u + tφ) |_{t=0} = ∫ Γ(u,φ) dμ − ∫ |u|^{p−2}u φ dμ`.
pub fn directional_derivative(
    g: &WeightedGraph,
    u: &VertexFunction,
    phi: &VertexFunction,
    p: f64,
) -> Result<f64> {
    validate_exponent(p)?;
    let cross = g.integrate(&g.gamma(u, phi)?)?;
    let nonlin: f64 = g
        .measures()
        .iter()
        .enumerate()
        .map(|(i, mu)| mu * odd_power(u[i], p) * phi[i])
        .sum();
    Ok(cross - nonlin)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testkit;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn g6_table1() -> WeightedGraph {
        crate::fixtures::load_fixture("g6-table1").unwrap().graph
    }

    fn unit_pair() -> WeightedGraph {
        WeightedGraph::builder()
            .vertex("a", 1.0)
            .vertex("b", 1.0)
            .edge("a", "b", 1.0)
            .build()
            .unwrap()
    }

    #[test]
    fn energy_of_zero_is_zero() {
        let g = unit_pair();
        let e = energy_components(&g, &VertexFunction::zeros(&g), 3.0).unwrap();
        assert_eq!(e.kinetic, 0.0);
        assert_eq!(e.nonlinear, 0.0);
        assert_eq!(e.j(), 0.0);
    }

    #[test]
    fn energy_of_constant_on_fixture() {
        let g = g6_table1();
        let c = 0.041885;
        let u = VertexFunction::constant(&g, c);
        let e = energy_components(&g, &u, 3.0).unwrap();
        assert_eq!(e.kinetic, 0.0);
        assert_relative_eq!(e.nonlinear, 57.0 * c.powi(3) / 3.0, epsilon = 1e-15);
        assert_relative_eq!(e.j(), -1.396e-3, epsilon = 2e-6);
    }

    #[test]
    fn energy_of_two_vertex_constant() {
        let g = unit_pair();
        let c = 1.0 / 2f64.sqrt();
        let u = VertexFunction::constant(&g, c);
        let e = energy_components(&g, &u, 3.0).unwrap();
        assert_relative_eq!(e.j_script(), 2f64.sqrt() / 6.0, epsilon = 1e-14);
    }

    #[test]
    fn rejects_small_exponent() {
        let g = unit_pair();
        let u = VertexFunction::zeros(&g);
        assert!(matches!(
            energy_components(&g, &u, 2.0).unwrap_err(),
            Error::InvalidExponent { .. }
        ));
    }

    #[test]
    fn multiplier_on_two_vertex_constant() {
        let g = unit_pair();
        let c = 1.0 / 2f64.sqrt();
        let u = VertexFunction::constant(&g, c);
        let lam = lagrange_multiplier(&g, &u, None, 3.0, 1.0).unwrap();
        assert_relative_eq!(lam, c, epsilon = 1e-14);
    }

    #[test]
    fn multiplier_of_constant_matches_el_identity() {
        let g = g6_table1();
        let m = 0.1;
        let c = (m / g.volume()).sqrt();
        let u = VertexFunction::constant(&g, c);
        let lam = lagrange_multiplier(&g, &u, None, 3.0, m).unwrap();
        // λc = c^{p−1} for constants, so λ = c at p = 3.
        assert_relative_eq!(lam, c, epsilon = 1e-12);
        assert_relative_eq!(lam, 57.0 * c.powi(3) / m, epsilon = 1e-12);
        assert_relative_eq!(c, 0.041885, epsilon = 1e-6);
    }

    #[test]
    fn multiplier_with_mass_mismatch_warns_and_returns_zero() {
        let g = unit_pair();
        let u = VertexFunction::zeros(&g);
        let lam = lagrange_multiplier(&g, &u, None, 3.0, 1.0).unwrap();
        assert_eq!(lam, 0.0);
    }

    #[test]
    fn el_residual_cases() {
        let g = unit_pair();
        let c = 1.0 / 2f64.sqrt();
        let u = VertexFunction::constant(&g, c);
        let r = el_residual(&g, &u, c, None, 3.0).unwrap();
        assert!(r <= 1e-15, "residual {r}");

        let zero = VertexFunction::zeros(&g);
        assert_eq!(el_residual(&g, &zero, 2.5, None, 3.0).unwrap(), 0.0);

        let spike = VertexFunction::new(vec![1.0, 0.0]);
        let r = el_residual(&g, &spike, 1.0, None, 3.0).unwrap();
        assert_relative_eq!(r, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn upper_bound_values() {
        let g = WeightedGraph::builder()
            .vertex("a", 1.0)
            .vertex("b", 1.0)
            .vertex("c", 1.0)
            .edge("a", "b", 1.0)
            .edge("b", "c", 1.0)
            .build()
            .unwrap();
        let ones = VertexFunction::constant(&g, 1.0);
        assert_relative_eq!(lambda1_upper_bound(&g, &ones, 3.0).unwrap(), 1.0 / 3.0);

        let fours = VertexFunction::constant(&g, 4.0);
        assert_relative_eq!(lambda1_upper_bound(&g, &fours, 4.0).unwrap(), 1.0 / 64.0);

        // Scaling h by t multiplies the bound by t^{-p/2}.
        let b1 = lambda1_upper_bound(&g, &ones, 3.0).unwrap();
        let b4 = lambda1_upper_bound(&g, &fours, 3.0).unwrap();
        assert_relative_eq!(b4, b1 * 4f64.powf(-1.5), epsilon = 1e-14);
        assert_relative_eq!(b4, 1.0 / 24.0, epsilon = 1e-14);
    }

    proptest! {
        /// Symmetrisation never increases J (and never decreases 𝒥).
        #[test]
        fn symmetrization_lowers_j(seed in any::<u64>(), p in 2.1..5.0f64) {
            let mut rng = testkit::rng(seed);
            let g = testkit::random_connected_graph(&mut rng, 15);
            let u = testkit::random_function(&mut rng, g.len(), -2.0, 2.0);
            let e_signed = energy_components(&g, &u, p).unwrap();
            let e_abs = energy_components(&g, &u.abs(), p).unwrap();
            prop_assert!(e_abs.j() <= e_signed.j() + 1e-12);
            prop_assert!(e_abs.j_script() >= e_signed.j_script() - 1e-12);
        }

        /// Exact rescaling identity:
        /// 𝒥(√m·v) = (m^{p/2}/p)∫|v|^p dμ − (m/2)∫|∇v|² dμ.
        #[test]
        fn rescaling_identity(seed in any::<u64>(), m in 1e-3..1e3f64, p in 2.1..5.0f64) {
            let mut rng = testkit::rng(seed);
            let g = testkit::random_connected_graph(&mut rng, 15);
            let v = testkit::random_function(&mut rng, g.len(), -2.0, 2.0);
            let scaled = v.scaled(m.sqrt());
            let lhs = energy_components(&g, &scaled, p).unwrap().j_script();
            let lp: f64 = g.measures().iter().zip(v.values())
                .map(|(mu, t)| mu * t.abs().powf(p)).sum();
            let rhs = m.powf(p / 2.0) / p * lp - m / 2.0 * g.dirichlet_energy(&v).unwrap();
            let scale = lhs.abs().max(rhs.abs()).max(1.0);
            prop_assert!((lhs - rhs).abs() <= 1e-12 * scale);
        }

        /// Constants are exact EL solutions with λ = c^{p−2}; the multiplier
        /// formula must reproduce that λ.
        #[test]
        fn constant_multiplier_identity(seed in any::<u64>(), c in 0.05..3.0f64, p in 2.1..5.0f64) {
            let mut rng = testkit::rng(seed);
            let g = testkit::random_connected_graph(&mut rng, 15);
            let u = VertexFunction::constant(&g, c);
            let lambda = c.powf(p - 2.0);
            let res = el_residual(&g, &u, lambda, None, p).unwrap();
            prop_assert!(res <= 1e-12 * lambda.max(1.0));
            let m = weighted_mass(&g, &u, None).unwrap();
            let formula = lagrange_multiplier(&g, &u, None, p, m).unwrap();
            prop_assert!((formula - lambda).abs() <= 1e-10 * lambda.max(1.0));
        }

        /// The directional derivative matches the gradient inner product.
        #[test]
        fn gradient_matches_directional_derivative(seed in any::<u64>(), p in 2.1..5.0f64) {
            let mut rng = testkit::rng(seed);
            let g = testkit::random_connected_graph(&mut rng, 12);
            let u = testkit::random_function(&mut rng, g.len(), -2.0, 2.0);
            let phi = testkit::random_function(&mut rng, g.len(), -1.0, 1.0);
            let grad = j_gradient(&g, &u, p).unwrap();
            let inner: f64 = g.measures().iter().enumerate()
                .map(|(i, mu)| mu * grad[i] * phi[i]).sum();
            let dd = directional_derivative(&g, &u, &phi, p).unwrap();
            prop_assert!((inner - dd).abs() <= 1e-10 * dd.abs().max(1.0));
        }
    }
}
