//! Picks a solver for an instance.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dp::solve_two_color_tree;
use crate::error::{Error, Result};
use crate::eval::evaluate_partition;
use crate::instance::{Instance, Mode};
use crate::oracle::{
    random_diameter3_instance, random_instance, random_star_instance, solve_brute_force_capped, OracleResult,
    DEFAULT_ENUMERATION_CAP,
};
use crate::star::{solve_diameter3, solve_star};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Algorithm {
    #[default]
    Auto,
    Brute,
    Dp2,
    Star,
    Diam3,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::Auto,
        Algorithm::Brute,
        Algorithm::Dp2,
        Algorithm::Star,
        Algorithm::Diam3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Auto => "auto",
            Algorithm::Brute => "brute",
            Algorithm::Dp2 => "dp2",
            Algorithm::Star => "star",
            Algorithm::Diam3 => "diam3",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown algorithm '{s}'")))
    }
}

/// Rejects instances no solver accepts, then reports which one `Auto`
/// would run: the two-color DP, the star or diameter-3 solver by shape, or
/// brute force.
pub fn choose(inst: &Instance) -> Result<Algorithm> {
    if inst.mode == Mode::Disconnected {
        return Err(Error::DisconnectedInstance);
    }
    if let Some(v) = inst.validate().first() {
        return Err(Error::invalid(v.to_string()));
    }
    let shape = inst.classify_shape();
    if !shape.is_tree {
        return Err(Error::NotATree);
    }
    Ok(match (inst.color_count(), shape.diameter) {
        (2, _) => Algorithm::Dp2,
        (_, Some(0..=2)) => Algorithm::Star,
        (_, Some(3)) => Algorithm::Diam3,
        _ => Algorithm::Brute,
    })
}

/// Runs `alg` (resolving `Auto` first) and returns the algorithm used.
pub fn solve(inst: &Instance, alg: Algorithm) -> Result<(Algorithm, OracleResult)> {
    let chosen = choose(inst)?;
    let alg = if alg == Algorithm::Auto { chosen } else { alg };
    let result = match alg {
        Algorithm::Brute | Algorithm::Auto => solve_brute_force_capped(inst, DEFAULT_ENUMERATION_CAP)?,
        Algorithm::Dp2 => solve_two_color_tree(inst)?,
        Algorithm::Star => solve_star(inst)?,
        Algorithm::Diam3 => solve_diameter3(inst)?,
    };
    Ok((alg, result))
}

/// Algorithms other than brute force that accept `inst`.
pub fn applicable(inst: &Instance) -> Result<Vec<Algorithm>> {
    choose(inst)?;
    let diameter = inst.classify_shape().diameter;
    let mut algs = Vec::new();
    if inst.color_count() == 2 {
        algs.push(Algorithm::Dp2);
    }
    match diameter {
        Some(0..=2) => algs.push(Algorithm::Star),
        Some(3) => algs.push(Algorithm::Diam3),
        _ => {}
    }
    Ok(algs)
}

/// A solver that disagreed with brute force or returned a bad witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Discrepancy {
    pub instance: Instance,
    pub algorithm: Algorithm,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CrosscheckReport {
    pub trials: usize,
    pub comparisons: usize,
    pub discrepancies: Vec<Discrepancy>,
}

/// Random sweep comparing every applicable solver with brute force.
/// Trials cycle through general trees, stars and diameter-3 trees with
/// `1..=max_n` vertices, `colors` colors and weights in `1..=6`.
pub fn crosscheck(max_n: usize, colors: usize, trials: usize, seed: u64) -> Result<CrosscheckReport> {
    if max_n == 0 || colors == 0 {
        return Err(Error::invalid("crosscheck needs at least one vertex and one color"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = CrosscheckReport {
        trials,
        ..Default::default()
    };
    for trial in 0..trials {
        let n = rng.gen_range(1..=max_n);
        let k = rng.gen_range(1..=n);
        let s = rng.gen();
        let inst = match trial % 3 {
            1 => random_star_instance(n, colors, 6, k, s),
            2 if n >= 4 => random_diameter3_instance(n, colors, 6, k, s),
            _ => random_instance(n, colors, 6, k, s),
        };
        let truth = solve_brute_force_capped(&inst, DEFAULT_ENUMERATION_CAP)?.answer;
        for alg in applicable(&inst)? {
            report.comparisons += 1;
            let detail = match solve(&inst, alg) {
                Ok((_, r)) if r.answer != truth => Some(format!("answered {} but brute force says {truth}", r.answer)),
                Ok((_, r)) => r
                    .witness
                    .filter(|w| !evaluate_partition(&inst, w).is_solution)
                    .map(|_| "witness is not a solution".to_string()),
                Err(e) => Some(format!("failed: {e}")),
            };
            if let Some(detail) = detail {
                report.discrepancies.push(Discrepancy {
                    instance: inst.clone(),
                    algorithm: alg,
                    detail,
                });
            }
        }
    }
    Ok(report)
}
