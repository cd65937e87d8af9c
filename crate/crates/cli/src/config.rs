//! Experiment configuration, independent of the argument parser.

use std::path::PathBuf;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    Solve,
    Maximize,
    Sweep,
    Limits,
    Truncate,
    CheckConditions,
    Eigen,
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SourceSpec {
    File(PathBuf),
    Fixture(String),
    Lattice { dims: LatticeDims, radius: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LatticeDims {
    #[serde(rename = "1d")]
    One,
    #[serde(rename = "2d")]
    Two,
}

#[derive(Debug, Clone, Copy, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MassSpec {
    Single(f64),
    /// Log-spaced between the endpoints, inclusive.
    Range { from: f64, to: f64, points: usize },
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PotentialSpec {
    /// `h = a + b·ρ^gamma` with ρ the hop distance from the origin.
    Expression { a: f64, b: f64, gamma: f64 },
    /// JSON object mapping vertex id to h value.
    File(PathBuf),
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SolverSettings {
    pub tolerance: f64,
    pub max_iterations: u64,
    pub restarts: u32,
    pub seed: u64,
}

impl Default for SolverSettings {
    fn default() -> Self {
        Self {
            tolerance: 1e-10,
            max_iterations: 1_000_000,
            restarts: 8,
            seed: 0,
        }
    }
}

/// One fully-specified run of the tool.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentConfig {
    pub command: CommandKind,
    pub source: SourceSpec,
    pub p: f64,
    pub mass: Option<MassSpec>,
    pub potential: Option<PotentialSpec>,
    pub origin: Option<String>,
    /// Truncation radii (the `truncate` command).
    pub radii: Vec<u32>,
    pub solver: SolverSettings,
    pub out_dir: PathBuf,
}

/// Parses the `a+b*rho^g` potential grammar (`*b` and `^g` optional).
pub fn parse_potential_expression(text: &str) -> Option<PotentialSpec> {
    let re = regex::Regex::new(
        r"^\s*([0-9]*\.?[0-9]+(?:[eE][+-]?[0-9]+)?)\s*\+\s*(?:([0-9]*\.?[0-9]+(?:[eE][+-]?[0-9]+)?)\s*\*\s*)?rho(?:\s*\^\s*([0-9]*\.?[0-9]+(?:[eE][+-]?[0-9]+)?))?\s*$",
    )
    .expect("static regex");
    let caps = re.captures(text)?;
    let a: f64 = caps.get(1)?.as_str().parse().ok()?;
    let b: f64 = match caps.get(2) {
        Some(m) => m.as_str().parse().ok()?,
        None => 1.0,
    };
    let gamma: f64 = match caps.get(3) {
        Some(m) => m.as_str().parse().ok()?,
        None => 1.0,
    };
    if !(a > 0.0) || !(b > 0.0) || !(gamma >= 1.0) {
        return None;
    }
    Some(PotentialSpec::Expression { a, b, gamma })
}

/// The masses a [`MassSpec`] expands to.
pub fn expand_masses(spec: &MassSpec) -> Vec<f64> {
    match *spec {
        MassSpec::Single(m) => vec![m],
        MassSpec::Range { from, to, points } => {
            if points <= 1 {
                return vec![from];
            }
            let (a, b) = (from.ln(), to.ln());
            (0..points)
                .map(|i| (a + (b - a) * i as f64 / (points - 1) as f64).exp())
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn potential_grammar() {
        match parse_potential_expression("1+1*rho^1") {
            Some(PotentialSpec::Expression { a, b, gamma }) => {
                assert_eq!((a, b, gamma), (1.0, 1.0, 1.0));
            }
            other => panic!("unexpected {other:?}"),
        }
        match parse_potential_expression(" 2.5 + 0.5*rho^2 ") {
            Some(PotentialSpec::Expression { a, b, gamma }) => {
                assert_eq!((a, b, gamma), (2.5, 0.5, 2.0));
            }
            other => panic!("unexpected {other:?}"),
        }
        match parse_potential_expression("1+rho") {
            Some(PotentialSpec::Expression { a, b, gamma }) => {
                assert_eq!((a, b, gamma), (1.0, 1.0, 1.0));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_potential_expression("rho").is_none());
        assert!(parse_potential_expression("1-rho").is_none());
        assert!(parse_potential_expression("0+rho").is_none());
        assert!(parse_potential_expression("1+rho^0.5").is_none());
    }

    #[test]
    fn mass_expansion() {
        let masses = expand_masses(&MassSpec::Range {
            from: 10.0,
            to: 1e-6,
            points: 8,
        });
        assert_eq!(masses.len(), 8);
        assert!((masses[0] - 10.0).abs() < 1e-12);
        assert!((masses[7] - 1e-6).abs() < 1e-18);
        assert!(masses.windows(2).all(|w| w[1] < w[0]));
    }
}
