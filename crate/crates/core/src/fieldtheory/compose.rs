use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::lens::{generalized_intersections, solve_intersections};
use super::{CobordismChain, HolonomyTuple, Relation};
use crate::error::{Error, Result};
use crate::repvar::{project, SolverOptions};
use crate::su2::{SU2Element, Su2Vector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComposeMethod {
    Symbolic,
    Sampled,
    /// Closed chains: both composites are points, compared by emptiness.
    Intersection,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComposeReport {
    pub method: ComposeMethod,
    pub equal: bool,
    /// Points drawn from each side.
    pub samples: usize,
    pub disagreements: usize,
    pub tol: f64,
}

const PROJECT_TOL: f64 = 1e-12;
const MEMBER_TOL: f64 = 1e-8;

/// A point `(x, y)` on the relation over the flat slice, found by projecting a random start.
pub fn sample_relation<R: Rng + ?Sized>(rel: &Relation, rng: &mut R) -> Result<Option<(HolonomyTuple, HolonomyTuple)>> {
    let prob = rel.constraint_problem()?;
    let opts = SolverOptions { tol: PROJECT_TOL, descent_iters: 300, polish_iters: 80, ..SolverOptions::default() };
    for _ in 0..8 {
        let mut start = HolonomyTuple::random_flat(rel.source_genus, rng).coords();
        start.extend((0..rel.n_fibers).map(|_| SU2Element::random(rng)));
        if let Some(sol) = project(&prob, &start, &opts) {
            let ns = 2 * rel.source_genus;
            let x = HolonomyTuple::from_coords(Su2Vector::ZERO, &sol[..ns]);
            let y = HolonomyTuple::from_coords(Su2Vector::ZERO, &rel.image(&sol));
            if let (Ok(x), Ok(y)) = (x, y) {
                return Ok(Some((x, y)));
            }
        }
    }
    Ok(None)
}

/// Compares the composites of two chains with the same ends.
///
/// Graphs of maps are compared through their normal forms; otherwise `samples`
/// points are drawn from each side with per-sample streams derived from `seed`
/// and tested for membership in the other side.
pub fn compose_check(first: &CobordismChain, second: &CobordismChain, samples: usize, seed: u64) -> Result<ComposeReport> {
    let r1 = first.relation()?;
    let r2 = second.relation()?;
    if r1.source_genus != r2.source_genus {
        return Err(Error::GenusMismatch { expected: r1.source_genus, got: r2.source_genus });
    }
    if r1.target_genus != r2.target_genus {
        return Err(Error::GenusMismatch { expected: r1.target_genus, got: r2.target_genus });
    }
    if r1.is_functional() && r2.is_functional() {
        return Ok(ComposeReport {
            method: ComposeMethod::Symbolic,
            equal: r1.symbolically_equal(&r2),
            samples: 0,
            disagreements: 0,
            tol: 0.0,
        });
    }
    if first.is_closed() && second.is_closed() {
        let opts = SolverOptions { seed, ..SolverOptions::default() };
        let nonempty = |c: &CobordismChain| -> Result<bool> {
            match solve_intersections(&generalized_intersections(c)?, &opts) {
                Ok(r) => Ok(r.histogram.total() > 0),
                Err(Error::NoConvergence { .. }) => Ok(false),
                Err(e) => Err(e),
            }
        };
        return Ok(ComposeReport {
            method: ComposeMethod::Intersection,
            equal: nonempty(first)? == nonempty(second)?,
            samples: 0,
            disagreements: 0,
            tol: 0.0,
        });
    }
    let outcomes: Vec<Result<(usize, usize)>> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            let mut drawn = 0;
            let mut bad = 0;
            for (from, to) in [(&r1, &r2), (&r2, &r1)] {
                if let Some((x, y)) = sample_relation(from, &mut rng)? {
                    drawn += 1;
                    match to.member(&x, &y, MEMBER_TOL) {
                        Ok(true) => {}
                        Ok(false) => bad += 1,
                        Err(e) => return Err(e),
                    }
                }
            }
            Ok((drawn, bad))
        })
        .collect();
    let mut drawn = 0;
    let mut disagreements = 0;
    for o in outcomes {
        let (d, b) = o?;
        drawn += d;
        disagreements += b;
    }
    if drawn == 0 {
        return Err(Error::SamplingFailure("no point found on either composite".into()));
    }
    Ok(ComposeReport { method: ComposeMethod::Sampled, equal: disagreements == 0, samples: drawn, disagreements, tol: MEMBER_TOL })
}
