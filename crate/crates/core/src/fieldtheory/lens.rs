use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::{CobordismChain, Curve, Elementary, Piece};
use crate::error::{Error, Result};
use crate::grpres::{Presentation, Word};
use crate::repvar::{enumerate_lens, histogram, lens_histogram, solve_numeric, KindHistogram, SolverOptions, TwistedRepProblem};

/// Generalized intersection problem of a closed chain: the fiber variables
/// subject to every constraint of the composite.
pub fn generalized_intersections(chain: &CobordismChain) -> Result<TwistedRepProblem> {
    let rel = chain.relation()?;
    if !chain.is_closed() {
        return Err(Error::OpenChain(format!(
            "runs from genus {} to genus {}",
            chain.source_genus(),
            chain.target_genus()
        )));
    }
    let twisted = rel
        .constraints
        .iter()
        .filter(|c| !(c.word.is_empty() && c.sign > 0))
        .map(|c| (c.word.clone(), c.sign))
        .collect();
    TwistedRepProblem::new(Presentation::free(rel.n_fibers), twisted)
}

fn twist(curve: Curve, power: i64) -> Piece {
    Piece::new(Elementary::DehnTwist { genus: 1, pair: 0, curve, power })
}

/// A genus-one splitting of `L(p, q)` as a chain: a one-handle, Dehn twists
/// taking the meridian to the curve `p a - q b`, and a two-handle along `alpha`.
/// `c` gives the one-handle and two-handle class bits.
pub fn lens_chain(p: i64, q: i64, c: (u8, u8)) -> Result<CobordismChain> {
    if p < 0 || p.gcd(&q) != 1 {
        return Err(Error::InvalidParams(format!("lens data ({p},{q}) needs p >= 0 and gcd(p,q) = 1")));
    }
    // rows A = (p, -q), B = (r, t) with p t + q r = 1
    let e = p.extended_gcd(&q);
    let s = e.gcd;
    let (t, r) = (e.x * s, e.y * s);
    let mut a = [p, -q];
    let mut b = [r, t];
    let mut ops: Vec<(Curve, i64)> = Vec::new();
    let mut apply = |curve: Curve, k: i64, a: &mut [i64; 2], b: &mut [i64; 2]| {
        match curve {
            Curve::Beta => {
                a[0] += k * b[0];
                a[1] += k * b[1];
            }
            Curve::Alpha => {
                b[0] += k * a[0];
                b[1] += k * a[1];
            }
        }
        ops.push((curve, k));
    };
    while b[0] != 0 {
        if a[0] == 0 {
            apply(Curve::Beta, 1, &mut a, &mut b);
        } else if b[0].abs() >= a[0].abs() {
            apply(Curve::Alpha, -(b[0] / a[0]), &mut a, &mut b);
        } else {
            apply(Curve::Beta, -(a[0] / b[0]), &mut a, &mut b);
        }
    }
    if a[0] < 0 {
        for _ in 0..2 {
            apply(Curve::Beta, 1, &mut a, &mut b);
            apply(Curve::Alpha, -1, &mut a, &mut b);
            apply(Curve::Beta, 1, &mut a, &mut b);
        }
    }
    debug_assert!(a[0] == 1 && b == [0, 1]);
    let k = a[1];
    apply(Curve::Beta, -k, &mut a, &mut b);
    let mut pieces = vec![Piece::with_class(Elementary::OneHandle { genus: 0 }, vec![c.0 & 1])];
    pieces.extend(ops.iter().rev().filter(|(_, k)| *k != 0).map(|&(curve, k)| twist(curve, -k)));
    pieces.push(Piece::with_class(
        Elementary::TwoHandle { genus: 1, pair: 0, curve: Curve::Alpha, conjugator: Word::empty() },
        vec![c.1 & 1],
    ));
    CobordismChain::new(pieces)
}

/// Recognizes the genus-one problem `{B = e0 I, w(A, B) = e1 I}` and returns
/// `(p, q, c)` with `w` of exponent sums `(±p, ∓q)`.
pub fn recognize_lens(prob: &TwistedRepProblem) -> Option<(i64, i64, (u8, u8))> {
    if prob.n_generators() != 2 || !prob.presentation.relators.is_empty() || prob.twisted_relators.len() != 2 {
        return None;
    }
    let (w0, s0) = &prob.twisted_relators[0];
    let (w1, s1) = &prob.twisted_relators[1];
    if *w0 != Word::generator(1) {
        return None;
    }
    let sums = w1.exponent_sums(2);
    let (p, q) = if sums[0] < 0 { (-sums[0], sums[1]) } else { (sums[0], -sums[1]) };
    if p.gcd(&q) != 1 {
        return None;
    }
    let bit = |s: i8| u8::from(s < 0);
    Some((p, q, (bit(*s0), bit(*s1))))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IntersectionReport {
    pub method: String,
    pub histogram: KindHistogram,
    pub generators: usize,
    pub equations: usize,
}

/// Solves the problem numerically, falling back on exact enumeration for
/// genus-one lens problems when no restart converges.
pub fn solve_intersections(prob: &TwistedRepProblem, opts: &SolverOptions) -> Result<IntersectionReport> {
    let base = |method: &str, histogram| IntersectionReport {
        method: method.into(),
        histogram,
        generators: prob.n_generators(),
        equations: prob.equations().len(),
    };
    match solve_numeric(prob, opts) {
        Ok(orbits) => Ok(base("numeric", histogram(&orbits))),
        Err(Error::NoConvergence { tol, best }) => match recognize_lens(prob) {
            Some((p, q, c)) => Ok(base("exact", lens_histogram(&enumerate_lens(p, q, c)?))),
            None => Err(Error::NoConvergence { tol, best }),
        },
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_reads_off_the_lens_word() {
        for p in 0..12i64 {
            for q in -12..=12i64 {
                if p.gcd(&q) != 1 {
                    continue;
                }
                let chain = lens_chain(p, q, (0, 1)).unwrap();
                let prob = generalized_intersections(&chain).unwrap();
                assert_eq!(recognize_lens(&prob), Some((p, q, (0, 1))), "({p},{q})");
            }
        }
    }

    #[test]
    fn open_chain_is_rejected() {
        let c = CobordismChain::new(vec![Piece::new(Elementary::OneHandle { genus: 0 })]).unwrap();
        assert!(matches!(generalized_intersections(&c), Err(Error::OpenChain(_))));
    }

    #[test]
    fn sphere_has_one_central_point() {
        let prob = generalized_intersections(&lens_chain(1, 0, (0, 0)).unwrap()).unwrap();
        let rep = solve_intersections(&prob, &SolverOptions { restarts: 50, ..Default::default() }).unwrap();
        assert_eq!(rep.histogram, KindHistogram { central: 1, abelian: 0, irreducible: 0 });
    }

    #[test]
    fn twisted_s2xs1_is_empty() {
        let prob = generalized_intersections(&lens_chain(0, 1, (0, 1)).unwrap()).unwrap();
        let rep = solve_intersections(&prob, &SolverOptions { restarts: 30, ..Default::default() }).unwrap();
        assert_eq!(rep.method, "exact");
        assert_eq!(rep.histogram.total(), 0);
    }
}
