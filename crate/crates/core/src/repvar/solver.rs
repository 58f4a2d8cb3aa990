use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{merge_orbit, sort_orbits, RepOrbit, TwistedRepProblem};
use crate::error::{Error, Result};
use crate::grpres::Word;
use crate::su2::{Quat, SU2Element};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    pub restarts: usize,
    pub tol: f64,
    pub seed: u64,
    /// Gradient-descent iterations per restart before the Gauss-Newton polish.
    pub descent_iters: usize,
    pub polish_iters: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { restarts: 500, tol: 1e-10, seed: 17, descent_iters: 400, polish_iters: 60 }
    }
}

const BASIS: [Quat; 3] = [Quat::new(0.0, 1.0, 0.0, 0.0), Quat::new(0.0, 0.0, 1.0, 0.0), Quat::new(0.0, 0.0, 0.0, 1.0)];

/// Equations flattened to `(generator, inverted)` letters and a target.
struct Compiled {
    n: usize,
    eqs: Vec<(Vec<(usize, bool)>, Quat)>,
}

impl Compiled {
    fn new(prob: &TwistedRepProblem) -> Self {
        let eqs = prob
            .equations()
            .into_iter()
            .map(|(w, s): (Word, i8)| {
                let letters = w.letters().iter().map(|l| (l.generator, l.exponent < 0)).collect();
                (letters, Quat::new(s as f64, 0.0, 0.0, 0.0))
            })
            .collect();
        Compiled { n: prob.n_generators(), eqs }
    }

    fn letter(x: &[Quat], (g, inv): (usize, bool)) -> Quat {
        if inv {
            x[g].conj()
        } else {
            x[g]
        }
    }

    fn word(x: &[Quat], letters: &[(usize, bool)]) -> Quat {
        letters.iter().fold(Quat::ONE, |acc, &l| acc * Self::letter(x, l))
    }

    fn objective(&self, x: &[Quat]) -> f64 {
        self.eqs.iter().map(|(w, t)| (Self::word(x, w) - *t).norm_sq()).sum()
    }

    fn max_residual(&self, x: &[Quat]) -> f64 {
        self.eqs.iter().map(|(w, t)| (Self::word(x, w) - *t).norm()).fold(0.0, f64::max)
    }

    /// Riemannian gradient of the objective on the product of unit spheres.
    fn gradient(&self, x: &[Quat]) -> Vec<Quat> {
        let mut grad = vec![Quat::ZERO; self.n];
        for (w, t) in &self.eqs {
            let m = w.len();
            let mut suffix = vec![Quat::ONE; m + 1];
            for j in (0..m).rev() {
                suffix[j] = Self::letter(x, w[j]) * suffix[j + 1];
            }
            let err = suffix[0] - *t;
            let mut prefix = Quat::ONE;
            for j in 0..m {
                let g = (prefix.conj() * err * suffix[j + 1].conj()).scale(2.0);
                let (gen, inv) = w[j];
                grad[gen] = grad[gen] + if inv { g.conj() } else { g };
                prefix = prefix * Self::letter(x, w[j]);
            }
        }
        for (g, xi) in grad.iter_mut().zip(x) {
            *g = *g - xi.scale(g.dot(*xi));
        }
        grad
    }

    fn descend(&self, x: &mut [Quat], iters: usize) {
        let mut f = self.objective(x);
        let mut step: f64 = 0.1;
        for _ in 0..iters {
            if f < 1e-6 {
                return;
            }
            let g = self.gradient(x);
            let gg: f64 = g.iter().map(|q| q.norm_sq()).sum();
            if gg < 1e-24 {
                return;
            }
            step = (step * 2.0).min(1.0);
            loop {
                let trial: Vec<Quat> = x.iter().zip(&g).map(|(xi, gi)| (*xi - gi.scale(step)).normalized()).collect();
                let ft = self.objective(&trial);
                if ft <= f - 1e-4 * step * gg {
                    x.copy_from_slice(&trial);
                    f = ft;
                    break;
                }
                step *= 0.5;
                if step < 1e-12 {
                    return;
                }
            }
        }
    }

    fn residual_vector(&self, x: &[Quat]) -> DVector<f64> {
        let mut r = DVector::zeros(4 * self.eqs.len());
        for (k, (w, t)) in self.eqs.iter().enumerate() {
            let e = Self::word(x, w) - *t;
            r[4 * k] = e.w;
            r[4 * k + 1] = e.x;
            r[4 * k + 2] = e.y;
            r[4 * k + 3] = e.z;
        }
        r
    }

    /// Jacobian with respect to right-translated tangent coordinates `x_g exp(d)`.
    fn jacobian(&self, x: &[Quat]) -> DMatrix<f64> {
        let mut jac = DMatrix::zeros(4 * self.eqs.len(), 3 * self.n);
        for (k, (w, _)) in self.eqs.iter().enumerate() {
            let m = w.len();
            let mut suffix = vec![Quat::ONE; m + 1];
            for j in (0..m).rev() {
                suffix[j] = Self::letter(x, w[j]) * suffix[j + 1];
            }
            let mut prefix = Quat::ONE;
            for j in 0..m {
                let (gen, inv) = w[j];
                let l = Self::letter(x, w[j]);
                for (a, e) in BASIS.iter().enumerate() {
                    let d = if inv {
                        -(prefix * *e * l * suffix[j + 1])
                    } else {
                        prefix * x[gen] * *e * suffix[j + 1]
                    };
                    let col = 3 * gen + a;
                    jac[(4 * k, col)] += d.w;
                    jac[(4 * k + 1, col)] += d.x;
                    jac[(4 * k + 2, col)] += d.y;
                    jac[(4 * k + 3, col)] += d.z;
                }
                prefix = prefix * l;
            }
        }
        jac
    }

    fn retract(x: &[Quat], delta: &DVector<f64>) -> Vec<Quat> {
        x.iter()
            .enumerate()
            .map(|(g, xi)| {
                let v = [delta[3 * g], delta[3 * g + 1], delta[3 * g + 2]];
                let r = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
                let e = if r < 1e-300 {
                    Quat::ONE
                } else {
                    let s = r.sin() / r;
                    Quat::new(r.cos(), v[0] * s, v[1] * s, v[2] * s)
                };
                (*xi * e).normalized()
            })
            .collect()
    }

    /// Levenberg-Marquardt in the tangent coordinates.
    fn polish(&self, x: &mut Vec<Quat>, iters: usize, tol: f64) {
        let mut f = self.objective(x);
        let mut lambda = 1e-3;
        for _ in 0..iters {
            if self.max_residual(x) < tol * 1e-3 {
                return;
            }
            let j = self.jacobian(x);
            let r = self.residual_vector(x);
            let jt = j.transpose();
            let jtj = &jt * &j;
            let rhs = -(&jt * &r);
            let mut improved = false;
            for _ in 0..12 {
                let mut a = jtj.clone();
                for i in 0..a.nrows() {
                    a[(i, i)] += lambda * (1.0 + jtj[(i, i)]);
                }
                let Some(delta) = a.cholesky().map(|c| c.solve(&rhs)) else {
                    lambda *= 10.0;
                    continue;
                };
                let trial = Self::retract(x, &delta);
                let ft = self.objective(&trial);
                if ft < f {
                    *x = trial;
                    f = ft;
                    lambda = (lambda / 5.0).max(1e-15);
                    improved = true;
                    break;
                }
                lambda *= 8.0;
            }
            if !improved {
                return;
            }
        }
    }
}

fn restart_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// Moves `start` onto the solution set; `None` if the residual stays at or above `opts.tol`.
pub fn project(prob: &TwistedRepProblem, start: &[SU2Element], opts: &SolverOptions) -> Option<Vec<SU2Element>> {
    let compiled = Compiled::new(prob);
    let mut x: Vec<Quat> = start.iter().map(|g| g.quat()).collect();
    if x.len() != compiled.n {
        return None;
    }
    compiled.descend(&mut x, opts.descent_iters);
    compiled.polish(&mut x, opts.polish_iters, opts.tol);
    (compiled.max_residual(&x) < opts.tol).then(|| x.into_iter().map(SU2Element::from_quat).collect())
}

/// Multi-start numerical search for solutions, clustered into conjugation orbits.
///
/// An empty variety is never reported: if no restart converges the result is
/// [`Error::NoConvergence`].
pub fn solve_numeric(prob: &TwistedRepProblem, opts: &SolverOptions) -> Result<Vec<RepOrbit>> {
    prob.validate()?;
    if opts.restarts == 0 || !(opts.tol > 0.0) {
        return Err(Error::InvalidParams("restarts must be >= 1 and tol > 0".into()));
    }
    let compiled = Compiled::new(prob);
    let results: Vec<(f64, Vec<Quat>)> = (0..opts.restarts)
        .into_par_iter()
        .map(|i| {
            let mut rng = restart_rng(opts.seed, i);
            let mut x: Vec<Quat> = (0..compiled.n).map(|_| SU2Element::random(&mut rng).quat()).collect();
            compiled.descend(&mut x, opts.descent_iters);
            compiled.polish(&mut x, opts.polish_iters, opts.tol);
            (compiled.max_residual(&x), x)
        })
        .collect();
    let best = results.iter().map(|r| r.0).fold(f64::INFINITY, f64::min);
    let mut orbits = Vec::new();
    for (_, x) in results {
        let rep: Vec<SU2Element> = x.into_iter().map(SU2Element::from_quat).collect();
        let orbit = RepOrbit::from_representative(prob, rep);
        if orbit.residual < opts.tol {
            merge_orbit(&mut orbits, orbit);
        }
    }
    if orbits.is_empty() {
        return Err(Error::NoConvergence { tol: opts.tol, best });
    }
    sort_orbits(&mut orbits);
    Ok(orbits)
}
