use std::time::Instant;

use hsikit::grpres::{pi1, ManifoldDesc};
use hsikit::repvar::{
    enumerate_brieskorn, enumerate_lens, histogram, lens_histogram, signatures_collide, signature, solve_numeric,
    SolverOptions, TwistedRepProblem,
};
use num_integer::Integer;

#[test]
fn numeric_solver_matches_lens_enumeration() {
    let opts = SolverOptions::default();
    let t = Instant::now();
    for p in 1..=7i64 {
        for q in (1..=p.max(1)).filter(|q| p.gcd(q) == 1) {
            for c in [(0, 0), (0, 1), (1, 0), (1, 1)] {
                let prob = TwistedRepProblem::lens(p, q, c);
                let exact = enumerate_lens(p, q, c).unwrap();
                let numeric = solve_numeric(&prob, &opts).unwrap();
                assert_eq!(histogram(&numeric), lens_histogram(&exact), "L({p},{q}) {c:?}");
                for comp in &exact {
                    let sig = signature(&comp.representative());
                    assert!(numeric.iter().any(|o| signatures_collide(&o.signature, &sig)), "L({p},{q}) {c:?}");
                }
                for o in &numeric {
                    assert!(prob.residual(&o.representative) < opts.tol);
                }
            }
        }
    }
    eprintln!("lens sweep {:?}", t.elapsed());
}

#[test]
fn numeric_solver_matches_brieskorn_enumeration() {
    let opts = SolverOptions::default();
    for a in [[2, 3, 5], [2, 3, 7], [2, 3, 11], [2, 5, 7]] {
        let t = Instant::now();
        let prob = TwistedRepProblem::untwisted(pi1(&ManifoldDesc::brieskorn(a[0], a[1], a[2])).unwrap());
        let exact = enumerate_brieskorn(a).unwrap();
        let numeric = solve_numeric(&prob, &opts).unwrap();
        assert_eq!(histogram(&numeric), exact.histogram(), "{a:?}");
        for r in &exact.irreducible {
            let sig = signature(&exact.representative(r).unwrap());
            assert!(numeric.iter().any(|o| signatures_collide(&o.signature, &sig)), "{a:?} {r:?}");
        }
        eprintln!("{a:?} {:?} {:?}", histogram(&numeric), t.elapsed());
    }
}
