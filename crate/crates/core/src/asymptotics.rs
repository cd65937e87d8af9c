//! Mass sweeps and the classification of their limit objects.
//!
//! Rescaling a mass-m solution to `v_m = u_m/√m` puts every sweep on the
//! unit constraint sphere, where the Euler–Lagrange equation reads
//!
//! ```text
//! −Δv_m + λ_m h v_m = m^{p/2−1} v_m^{p−1},      ∫ h v_m² dμ = 1.
//! ```
//!
//! As m → 0⁺ the forcing dies and the tail approaches either a constant or
//! an eigenfunction of −Δv = λ₀ h v with λ₀ = −lim λ_m; as m → +∞ the
//! rescaled multiplier λ_m/m^{p/2−1} settles and the tail solves the
//! algebraic limit equation `|w|^{p−2}w = λ∞ h w` (h ≡ 1 turns that into
//! `w^{p−1} = ‖w‖_p^p w`, whose unit-mass solutions are constants
//! μ(S)^{−1/2} on their support S).
//!
//! Classification requires the sweep tail to have settled: the last two
//! rescaled iterates must agree to 1e−8 in sup norm (and the multipliers on
//! the matching scale), since the underlying limits are subsequential.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::energy::{odd_power, weight_at, weighted_mass};
use crate::error::{Error, Result};
use crate::graph::{VertexFunction, WeightedGraph};
use crate::solver::{
    forcing_coefficient, promote, solve_rescaled, Initialization, ProblemSpec, Solution,
    SolverOptions,
};

/// One solved mass along a sweep, with its rescaled view.
#[derive(Debug, Clone)]
pub struct SweepRecord {
    pub m: f64,
    /// The mass-m solution (u-space); `converged` marks failures.
    pub solution: Solution,
    /// `v_m = u_m/√m`, on the unit constraint sphere.
    pub rescaled: VertexFunction,
    /// Lagrange multiplier λ_m.
    pub lambda: f64,
    /// `λ_m / m^{p/2−1}`, the natural scale for increasing sweeps.
    pub rescaled_multiplier: f64,
}

/// Solves the constrained problem for each mass in order, warm-starting
/// every solve from the previous rescaled solution. Masses must be strictly
/// monotone (either direction) and positive; an empty list yields an empty
/// sweep. Non-convergent masses are recorded as failed and the sweep
/// continues from their best iterate.
pub fn mass_sweep(
    g: &WeightedGraph,
    spec: &ProblemSpec,
    masses: &[f64],
    opts: &SolverOptions,
) -> Result<Vec<SweepRecord>> {
    if masses.is_empty() {
        return Ok(Vec::new());
    }
    if masses.iter().any(|&m| !(m > 0.0) || !m.is_finite()) {
        return Err(Error::InvalidProblem(
            "sweep masses must be positive and finite".into(),
        ));
    }
    if masses.len() >= 2 {
        let increasing = masses.windows(2).all(|w| w[1] > w[0]);
        let decreasing = masses.windows(2).all(|w| w[1] < w[0]);
        if !increasing && !decreasing {
            return Err(Error::InvalidProblem(
                "sweep masses must be strictly monotone".into(),
            ));
        }
    }
    spec.validate(g)?;
    if !g.is_connected() {
        return Err(Error::DisconnectedGraph);
    }

    let h = spec.h.as_ref();
    let script = h.is_some();
    let mut records = Vec::with_capacity(masses.len());
    let mut warm: Option<VertexFunction> = None;

    for &m in masses {
        let kappa = forcing_coefficient(spec.p, m);
        let mut local = opts.clone();
        if let Some(prev) = warm.take() {
            local.initial = Initialization::Supplied(prev);
        }
        let rescaled = solve_rescaled(g, h, spec.p, kappa, &local, m)?;
        warm = Some(rescaled.v.clone());
        let solution = promote(g, h, m, &rescaled, script);
        if !solution.converged {
            log::warn!("sweep solve at m = {m} did not converge; record marked failed");
        }
        records.push(SweepRecord {
            m,
            rescaled: rescaled.v.clone(),
            lambda: rescaled.lambda,
            rescaled_multiplier: rescaled.lambda / kappa,
            solution,
        });
    }
    Ok(records)
}

/// What a settled sweep tail converged to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LimitKind {
    /// Finite case, small mass: the constant `|V|^{−1/2}`.
    Constant,
    /// Small mass: a positive eigenfunction of `−Δv = λ₀ h v`.
    Eigenfunction,
    /// Potential case: the limit vanishes in the infinite-volume reading.
    Zero,
    /// Large mass: a solution of the algebraic limit equation, constant on
    /// its support.
    SupportIndicator,
}

#[derive(Debug, Clone)]
pub struct LimitClassification {
    pub kind: LimitKind,
    pub limit_fn: VertexFunction,
    /// λ₀ (small mass) or λ∞ (large mass); zero for the constant and zero
    /// branches.
    pub limit_multiplier: f64,
    /// Sup-norm residual of the limit equation on `limit_fn`.
    pub residual: f64,
    /// Numerical support (vertex indices), for the support-indicator kind.
    pub support: Option<Vec<usize>>,
    /// Sup deviation of `limit_fn` from the exact on-support value.
    pub support_deviation: Option<f64>,
}

const SETTLE_TOL: f64 = 1e-8;
const MULTIPLIER_TOL: f64 = 1e-6;
const CONSTANT_BRANCH_TOL: f64 = 1e-6;
const SUPPORT_THRESHOLD_REL: f64 = 1e-6;

fn settled_tail<'a>(
    records: &'a [SweepRecord],
    decreasing: bool,
) -> Result<(&'a SweepRecord, &'a SweepRecord)> {
    if records.len() < 2 {
        return Err(Error::SweepNotSettled(
            "need at least two sweep records".into(),
        ));
    }
    let dir_ok = records.windows(2).all(|w| {
        if decreasing {
            w[1].m < w[0].m
        } else {
            w[1].m > w[0].m
        }
    });
    if !dir_ok {
        return Err(Error::InvalidProblem(format!(
            "classification expects a strictly {} mass sweep",
            if decreasing { "decreasing" } else { "increasing" }
        )));
    }
    let prev = &records[records.len() - 2];
    let last = &records[records.len() - 1];
    if !prev.solution.converged || !last.solution.converged {
        return Err(Error::SweepNotSettled(
            "tail records did not converge".into(),
        ));
    }
    let delta = prev.rescaled.sup_distance(&last.rescaled);
    if delta > SETTLE_TOL {
        return Err(Error::SweepNotSettled(format!(
            "rescaled tail delta {delta:.3e} above {SETTLE_TOL:.0e}"
        )));
    }
    Ok((prev, last))
}

/// Classifies the limit of a decreasing sweep.
///
/// Finite case (`h` absent): constant branch when the tail sits at
/// `|V|^{−1/2}`, else the eigenfunction branch with `λ₀ = ∫|∇v|² dμ`
/// cross-checked against `−lim λ_m`. Potential case: returns `Zero` when
/// the tail is h-harmonic (its weighted Rayleigh quotient vanishes — on a
/// finite truncation the rescaled iterates keep unit constraint mass, so a
/// vanishing infinite-volume limit shows up as the trivial constant
/// branch), else the eigenfunction branch for `−Δv = λ₀ h v`.
pub fn classify_small_mass_limit(
    g: &WeightedGraph,
    records: &[SweepRecord],
    h: Option<&VertexFunction>,
) -> Result<LimitClassification> {
    let (_, last) = settled_tail(records, true)?;
    let v = &last.rescaled;
    let lap = g.laplacian(v)?;

    match h {
        None => {
            let c_star = g.volume().powf(-0.5);
            let constant_dev = v
                .values()
                .iter()
                .fold(0.0f64, |a, &t| a.max((t - c_star).abs()));
            if constant_dev <= CONSTANT_BRANCH_TOL {
                let limit_fn = VertexFunction::new(vec![c_star; g.len()]);
                return Ok(LimitClassification {
                    kind: LimitKind::Constant,
                    residual: g.laplacian(&limit_fn)?.sup_norm(),
                    limit_fn,
                    limit_multiplier: 0.0,
                    support: None,
                    support_deviation: None,
                });
            }
            // Multipliers settle only on the eigenfunction branch, where
            // λ_m → −λ₀ directly.
            let lambda0 = g.dirichlet_energy(v)?;
            if (lambda0 + last.lambda).abs() > MULTIPLIER_TOL {
                return Err(Error::InconsistentMultiplier(format!(
                    "λ₀ = {lambda0:.6e} but −lim λ_m = {:.6e}",
                    -last.lambda
                )));
            }
            let residual = (0..g.len())
                .map(|i| (-lap[i] - lambda0 * v[i]).abs())
                .fold(0.0f64, f64::max);
            Ok(LimitClassification {
                kind: LimitKind::Eigenfunction,
                limit_fn: v.clone(),
                limit_multiplier: lambda0,
                residual,
                support: None,
                support_deviation: None,
            })
        }
        Some(h) => {
            let hv2 = weighted_mass(g, v, Some(h))?;
            let rayleigh = g.dirichlet_energy(v)? / hv2;
            if v.sup_norm() <= CONSTANT_BRANCH_TOL || rayleigh <= 1e-8 {
                return Ok(LimitClassification {
                    kind: LimitKind::Zero,
                    residual: lap.sup_norm(),
                    limit_fn: v.clone(),
                    limit_multiplier: 0.0,
                    support: None,
                    support_deviation: None,
                });
            }
            if (rayleigh + last.lambda).abs() > MULTIPLIER_TOL {
                return Err(Error::InconsistentMultiplier(format!(
                    "λ₀ = {rayleigh:.6e} but −lim λ_m = {:.6e}",
                    -last.lambda
                )));
            }
            let residual = (0..g.len())
                .map(|i| (-lap[i] - rayleigh * h[i] * v[i]).abs())
                .fold(0.0f64, f64::max);
            Ok(LimitClassification {
                kind: LimitKind::Eigenfunction,
                limit_fn: v.clone(),
                limit_multiplier: rayleigh,
                residual,
                support: None,
                support_deviation: None,
            })
        }
    }
}

/// Classifies the limit of an increasing sweep.
///
/// The settled tail `w` is tested against the algebraic limit equation.
/// Finite case: `w^{p−1} = ‖w‖_p^p w`, with the structural check that w is
/// constant `μ(S)^{−1/2}` on its numerical support S. Potential case:
/// `|w|^{p−2}w = λ∞ h w` with `λ∞ = ∫|w|^p dμ / ∫ h w² dμ`, cross-checked
/// against `lim λ_m/m^{p/2−1}`. On the support of the potential-case limit
/// the exact value is `(λ∞ h)^{1/(p−2)}`, which the deviation field reports.
pub fn classify_large_mass_limit(
    g: &WeightedGraph,
    records: &[SweepRecord],
    h: Option<&VertexFunction>,
    p: f64,
) -> Result<LimitClassification> {
    let (prev, last) = settled_tail(records, false)?;
    let multiplier_delta = (prev.rescaled_multiplier - last.rescaled_multiplier).abs();
    if multiplier_delta > SETTLE_TOL {
        return Err(Error::SweepNotSettled(format!(
            "rescaled multiplier delta {multiplier_delta:.3e} above {SETTLE_TOL:.0e}"
        )));
    }
    let w = &last.rescaled;
    if w.sup_norm() <= CONSTANT_BRANCH_TOL {
        return Ok(LimitClassification {
            kind: LimitKind::Zero,
            limit_fn: w.clone(),
            limit_multiplier: 0.0,
            residual: 0.0,
            support: None,
            support_deviation: None,
        });
    }

    let lp: f64 = g
        .measures()
        .iter()
        .zip(w.values())
        .map(|(mu, t)| mu * t.abs().powf(p))
        .sum();
    let hw2 = weighted_mass(g, w, h)?;
    let lambda_inf = lp / hw2;
    if (lambda_inf - last.rescaled_multiplier).abs() > MULTIPLIER_TOL {
        return Err(Error::InconsistentMultiplier(format!(
            "λ∞ = {lambda_inf:.6e} but lim λ_m/m^(p/2-1) = {:.6e}",
            last.rescaled_multiplier
        )));
    }

    let residual = (0..g.len())
        .map(|i| (odd_power(w[i], p) - lambda_inf * weight_at(h, i) * w[i]).abs())
        .fold(0.0f64, f64::max);

    let threshold = SUPPORT_THRESHOLD_REL * w.sup_norm();
    let support: Vec<usize> = (0..g.len()).filter(|&i| w[i].abs() > threshold).collect();
    let deviation = match h {
        None => {
            let mu_s: f64 = support.iter().map(|&i| g.measure(i)).sum();
            let target = mu_s.powf(-0.5);
            support
                .iter()
                .map(|&i| (w[i].abs() - target).abs())
                .fold(0.0f64, f64::max)
        }
        Some(h) => support
            .iter()
            .map(|&i| {
                let target = (lambda_inf * h[i]).powf(1.0 / (p - 2.0));
                (w[i].abs() - target).abs()
            })
            .fold(0.0f64, f64::max),
    };

    Ok(LimitClassification {
        kind: LimitKind::SupportIndicator,
        limit_fn: w.clone(),
        limit_multiplier: lambda_inf,
        residual,
        support: Some(support),
        support_deviation: Some(deviation),
    })
}

/// All eigenpairs of `−Δv = λ h v` in the μ-weighted inner product,
/// eigenvalues ascending, eigenfunctions normalised to `∫ h v² dμ = 1` with
/// a deterministic sign. With h ≡ 1 the first pair is λ₁ = 0 and the
/// constant eigenfunction.
///
/// Implemented as a dense symmetric eigensolve of `B^{−1/2} L B^{−1/2}` with
/// `B = diag(μ h)` and L the combinatorial weighted Laplacian; adequate for
/// truncations up to a few thousand vertices.
pub fn generalized_eigenpair(
    g: &WeightedGraph,
    h: Option<&VertexFunction>,
) -> Result<Vec<(f64, VertexFunction)>> {
    if !g.is_connected() {
        return Err(Error::DisconnectedGraph);
    }
    if let Some(h) = h {
        if h.len() != g.len() {
            return Err(Error::DomainMismatch {
                expected: g.len(),
                got: h.len(),
            });
        }
    }
    let n = g.len();
    let b_inv_sqrt: Vec<f64> = (0..n)
        .map(|i| 1.0 / (g.measure(i) * weight_at(h, i)).sqrt())
        .collect();

    let mut c = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        c[(i, i)] = g.degree(i) * b_inv_sqrt[i] * b_inv_sqrt[i];
    }
    for e in g.edges() {
        let off = -e.w * b_inv_sqrt[e.a] * b_inv_sqrt[e.b];
        c[(e.a, e.b)] = off;
        c[(e.b, e.a)] = off;
    }

    let eigen = SymmetricEigen::new(c);
    let mut pairs: Vec<(f64, VertexFunction)> = (0..n)
        .map(|k| {
            let z = eigen.eigenvectors.column(k);
            let mut v: Vec<f64> = (0..n).map(|i| z[i] * b_inv_sqrt[i]).collect();
            // Normalise ∫ h v² dμ = 1 and fix the sign at the largest entry.
            let mass: f64 = (0..n)
                .map(|i| g.measure(i) * weight_at(h, i) * v[i] * v[i])
                .sum();
            let mut s = 1.0 / mass.sqrt();
            let lead = (0..n)
                .max_by(|&a, &b| v[a].abs().total_cmp(&v[b].abs()))
                .unwrap_or(0);
            if v[lead] < 0.0 {
                s = -s;
            }
            v.iter_mut().for_each(|t| *t *= s);
            (eigen.eigenvalues[k], VertexFunction::new(v))
        })
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{ball_from_source, Lattice1d, RadialPotential};
    use crate::testkit;
    use approx::assert_relative_eq;

    fn log_spaced(from: f64, to: f64, points: usize) -> Vec<f64> {
        let (a, b) = (from.ln(), to.ln());
        (0..points)
            .map(|i| (a + (b - a) * i as f64 / (points - 1) as f64).exp())
            .collect()
    }

    fn synthetic_record(
        _g: &WeightedGraph,
        m: f64,
        p: f64,
        v: &VertexFunction,
        lambda: f64,
    ) -> SweepRecord {
        let kappa = m.powf(p / 2.0 - 1.0);
        SweepRecord {
            m,
            solution: Solution {
                u: v.scaled(m.sqrt()),
                lambda,
                energy: 0.0,
                residual: 0.0,
                mass: m,
                iterations: 0,
                converged: true,
            },
            rescaled: v.clone(),
            lambda,
            rescaled_multiplier: lambda / kappa,
        }
    }

    #[test]
    fn empty_mass_list_gives_empty_sweep() {
        let g = crate::fixtures::load_fixture("path2").unwrap().graph;
        let recs = mass_sweep(
            &g,
            &ProblemSpec::finite(3.0, 1.0),
            &[],
            &SolverOptions::default(),
        )
        .unwrap();
        assert!(recs.is_empty());
    }

    #[test]
    fn non_monotone_masses_rejected() {
        let g = crate::fixtures::load_fixture("path2").unwrap().graph;
        let err = mass_sweep(
            &g,
            &ProblemSpec::finite(3.0, 1.0),
            &[1.0, 2.0, 1.5],
            &SolverOptions::default(),
        )
        .unwrap_err();
        assert!(matches!(err, Error::InvalidProblem(_)));
    }

    #[test]
    fn uniform_fixture_small_mass_sweep_stays_constant() {
        let g = crate::fixtures::load_fixture("g6-uniform").unwrap().graph;
        let masses = log_spaced(10.0, 1e-6, 10);
        let opts = SolverOptions {
            restarts: 4,
            ..SolverOptions::default()
        };
        let recs = mass_sweep(&g, &ProblemSpec::finite(3.0, 1.0), &masses, &opts).unwrap();
        let c = 1.0 / 6f64.sqrt();
        for r in &recs {
            assert!(r.solution.converged);
            for &t in r.rescaled.values() {
                assert!((t - c).abs() < 1e-3, "rescaled {t} vs {c} at m {}", r.m);
            }
            let mass = weighted_mass(&g, &r.rescaled, None).unwrap();
            assert_relative_eq!(mass, 1.0, epsilon = 1e-10);
        }
        let class = classify_small_mass_limit(&g, &recs, None).unwrap();
        assert_eq!(class.kind, LimitKind::Constant);
        assert_eq!(class.limit_multiplier, 0.0);
        assert!((class.limit_fn[0] - 0.4082).abs() < 1e-4);
    }

    #[test]
    fn two_vertex_multiplier_vanishes_with_mass() {
        let g = crate::fixtures::load_fixture("path2").unwrap().graph;
        let masses = log_spaced(1.0, 1e-6, 7);
        let recs = mass_sweep(
            &g,
            &ProblemSpec::finite(3.0, 1.0),
            &masses,
            &SolverOptions::default(),
        )
        .unwrap();
        let last = recs.last().unwrap();
        let c = 1.0 / 2f64.sqrt();
        assert_relative_eq!(last.rescaled[0], c, epsilon = 1e-6);
        assert_relative_eq!(last.rescaled[1], c, epsilon = 1e-6);
        assert!(last.lambda.abs() < 1e-3);
        // λ_m = m^{1/2} ∫ v³ dμ on the constant branch.
        assert_relative_eq!(
            last.lambda,
            last.m.sqrt() * 2.0 * c.powi(3),
            epsilon = 1e-8
        );
    }

    #[test]
    fn rescaled_equation_residual_along_sweep() {
        // Every record satisfies −Δv + λ h v = κ v^{p−1} at solver tolerance.
        let g = crate::fixtures::load_fixture("g6-table1").unwrap().graph;
        let masses = log_spaced(10.0, 1e-3, 6);
        let opts = SolverOptions {
            restarts: 4,
            ..SolverOptions::default()
        };
        let recs = mass_sweep(&g, &ProblemSpec::finite(3.0, 1.0), &masses, &opts).unwrap();
        for r in &recs {
            let kappa = r.m.powf(0.5);
            let lap = g.laplacian(&r.rescaled).unwrap();
            let res = (0..g.len())
                .map(|i| {
                    (-lap[i] + r.lambda * r.rescaled[i]
                        - kappa * odd_power(r.rescaled[i], 3.0))
                    .abs()
                })
                .fold(0.0f64, f64::max);
            assert!(
                res <= 1e-10 * kappa.max(1.0) * 1.01,
                "residual {res} at m {}",
                r.m
            );
            // Forcing term dies along the decreasing sweep.
            if r.m <= 1e-2 {
                let forcing = kappa * r.rescaled.sup_norm().powf(2.0);
                assert!(forcing < 0.1);
            }
        }
    }

    #[test]
    fn synthetic_eigenfunction_branch_is_recognised() {
        let g = crate::fixtures::load_fixture("path3").unwrap().graph;
        let pairs = generalized_eigenpair(&g, None).unwrap();
        let (lambda2, v2) = &pairs[1];
        assert!(*lambda2 > 0.0);
        let records = vec![
            synthetic_record(&g, 1e-8, 3.0, v2, -lambda2),
            synthetic_record(&g, 1e-9, 3.0, v2, -lambda2),
        ];
        let class = classify_small_mass_limit(&g, &records, None).unwrap();
        assert_eq!(class.kind, LimitKind::Eigenfunction);
        assert_relative_eq!(class.limit_multiplier, *lambda2, epsilon = 1e-10);
        assert!(class.residual <= 1e-10);
        // The detected multiplier matches a spectrum entry.
        let best = pairs
            .iter()
            .map(|(l, _)| (l - class.limit_multiplier).abs())
            .fold(f64::INFINITY, f64::min);
        assert!(best <= 1e-10);
    }

    #[test]
    fn corrupted_multiplier_is_flagged() {
        let g = crate::fixtures::load_fixture("path3").unwrap().graph;
        let pairs = generalized_eigenpair(&g, None).unwrap();
        let (lambda2, v2) = &pairs[1];
        let records = vec![
            synthetic_record(&g, 1e-8, 3.0, v2, -lambda2 + 0.5),
            synthetic_record(&g, 1e-9, 3.0, v2, -lambda2 + 0.5),
        ];
        let err = classify_small_mass_limit(&g, &records, None).unwrap_err();
        assert!(matches!(err, Error::InconsistentMultiplier(_)));
    }

    #[test]
    fn unsettled_tail_is_flagged() {
        let g = crate::fixtures::load_fixture("path2").unwrap().graph;
        let a = VertexFunction::new(vec![0.8, 0.6]);
        let b = VertexFunction::new(vec![0.6, 0.8]);
        let records = vec![
            synthetic_record(&g, 1e-8, 3.0, &a, 0.0),
            synthetic_record(&g, 1e-9, 3.0, &b, 0.0),
        ];
        let err = classify_small_mass_limit(&g, &records, None).unwrap_err();
        assert!(matches!(err, Error::SweepNotSettled(_)));
    }

    #[test]
    fn potential_small_mass_zero_branch() {
        // Confined lattice, maximiser sweep: λ_m stays positive, so the
        // infinite-volume limit vanishes; on the truncation the tail is the
        // trivial constant with zero weighted Rayleigh quotient.
        let src = Lattice1d {
            potential: RadialPotential::default(),
        };
        let ball = ball_from_source(&src, 4).unwrap();
        let spec = ProblemSpec::with_potential(3.0, 1.0, ball.h.clone(), ball.origin.clone());
        let masses = log_spaced(1.0, 1e-18, 19);
        let opts = SolverOptions {
            restarts: 2,
            ..SolverOptions::default()
        };
        let recs = mass_sweep(&ball.graph, &spec, &masses, &opts).unwrap();
        assert!(recs.iter().all(|r| r.lambda >= 0.0));
        let class = classify_small_mass_limit(&ball.graph, &recs, Some(&ball.h)).unwrap();
        assert_eq!(class.kind, LimitKind::Zero);
        assert_eq!(class.limit_multiplier, 0.0);
        // The truncation constant: (∫ h dμ)^{-1/2} over the radius-4 ball.
        let total_h = ball.graph.integrate(&ball.h).unwrap();
        assert_relative_eq!(
            class.limit_fn[0],
            total_h.powf(-0.5),
            epsilon = 1e-6
        );
    }

    #[test]
    fn large_mass_single_vertex_indicator() {
        let g = crate::fixtures::load_fixture("g6-table1").unwrap().graph;
        let x4 = g.resolve("x4").unwrap();
        let mut w = vec![0.0; g.len()];
        w[x4] = 1.0; // μ(x4) = 1, so the on-support value is 1.
        let w = VertexFunction::new(w);
        let lambda_inf = 1.0; // ∫|w|³dμ = 1 = ∫w²dμ
        let records = vec![
            synthetic_record(&g, 1e18, 3.0, &w, lambda_inf * 1e9),
            synthetic_record(&g, 1e20, 3.0, &w, lambda_inf * 1e10),
        ];
        let class = classify_large_mass_limit(&g, &records, None, 3.0).unwrap();
        assert_eq!(class.kind, LimitKind::SupportIndicator);
        assert_eq!(class.support.as_deref(), Some(&[x4][..]));
        assert!(class.residual <= 1e-14);
        assert!(class.support_deviation.unwrap() <= 1e-14);
        assert_relative_eq!(class.limit_fn[x4], 1.0);
    }

    #[test]
    fn large_mass_full_support_constant() {
        let g = crate::fixtures::load_fixture("g6-uniform").unwrap().graph;
        let c = 1.0 / 6f64.sqrt();
        let w = VertexFunction::constant(&g, c);
        let lambda_inf = 6.0 * c.powi(3); // ∫|w|³ dμ with unit mass
        let records = vec![
            synthetic_record(&g, 1e18, 3.0, &w, lambda_inf * 1e9),
            synthetic_record(&g, 1e20, 3.0, &w, lambda_inf * 1e10),
        ];
        let class = classify_large_mass_limit(&g, &records, None, 3.0).unwrap();
        assert_eq!(class.kind, LimitKind::SupportIndicator);
        assert_eq!(class.support.as_ref().unwrap().len(), 6);
        assert!(class.residual <= 1e-14);
        assert!(class.support_deviation.unwrap() <= 1e-14);
        assert_relative_eq!(class.limit_fn[0], 0.4082, epsilon = 1e-4);
    }

    #[test]
    fn potential_large_mass_identity() {
        // Spike limit under a potential: λ∞ = w(a)^{p−2}/h(a) and the
        // defining ratio agree exactly.
        let g = crate::fixtures::load_fixture("path2").unwrap().graph;
        let h = VertexFunction::new(vec![2.0, 5.0]);
        let wa = (1.0f64 / 2.0).sqrt(); // unit h-mass spike at vertex 0
        let w = VertexFunction::new(vec![wa, 0.0]);
        let lambda_inf = wa / 2.0; // w(a)^{p-2}/h(a) at p = 3
        let ratio = {
            let lp: f64 = 1.0 * wa.powi(3);
            let hw2 = 2.0 * wa * wa;
            lp / hw2
        };
        assert_relative_eq!(lambda_inf, ratio, epsilon = 1e-15);
        let records = vec![
            synthetic_record(&g, 1e18, 3.0, &w, lambda_inf * 1e9),
            synthetic_record(&g, 1e20, 3.0, &w, lambda_inf * 1e10),
        ];
        let class = classify_large_mass_limit(&g, &records, Some(&h), 3.0).unwrap();
        assert_eq!(class.kind, LimitKind::SupportIndicator);
        assert_relative_eq!(class.limit_multiplier, lambda_inf, epsilon = 1e-14);
        assert!(class.residual <= 1e-14);
    }

    #[test]
    fn eigenpairs_two_vertex_closed_forms() {
        let g = crate::fixtures::load_fixture("path2").unwrap().graph;
        let pairs = generalized_eigenpair(&g, None).unwrap();
        assert_eq!(pairs.len(), 2);
        assert!(pairs[0].0.abs() <= 1e-12);
        assert_relative_eq!(pairs[1].0, 2.0, epsilon = 1e-12);
        // Second eigenfunction is proportional to (1, −1).
        let v = &pairs[1].1;
        assert_relative_eq!(v[0], -v[1], epsilon = 1e-12);

        let h = VertexFunction::new(vec![1.0, 2.0]);
        let pairs = generalized_eigenpair(&g, Some(&h)).unwrap();
        assert!(pairs[0].0.abs() <= 1e-12);
        assert_relative_eq!(pairs[1].0, 1.5, epsilon = 1e-12);
    }

    #[test]
    fn eigenpairs_satisfy_rayleigh_identity() {
        let mut rng = testkit::rng(11);
        for _ in 0..10 {
            let g = testkit::random_connected_graph(&mut rng, 12);
            let h = testkit::random_function(&mut rng, g.len(), 0.2, 4.0);
            let pairs = generalized_eigenpair(&g, Some(&h)).unwrap();
            assert!(pairs[0].0.abs() <= 1e-9);
            for (lambda, v) in &pairs {
                let grad = g.dirichlet_energy(v).unwrap();
                let hv2 = weighted_mass(&g, v, Some(&h)).unwrap();
                assert_relative_eq!(hv2, 1.0, epsilon = 1e-10);
                assert!(
                    (grad - lambda * hv2).abs() <= 1e-10 * lambda.abs().max(1.0),
                    "Rayleigh identity off: grad {grad}, λ {lambda}"
                );
            }
        }
    }
}
