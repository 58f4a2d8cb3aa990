use serde::{Deserialize, Serialize};

use super::{boundary_word, canonical_cyclic, CorrespondenceExpr, CorrespondenceKind, HolonomyTuple};
use crate::error::{Error, Result};
use crate::grpres::{Letter, Presentation, Word};
use crate::repvar::TwistedRepProblem;
use crate::su2::{exp_su2, SU2Element};

/// `sign * word`, with `sign` in `{1, -1}` standing for a central factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SignedWord {
    pub sign: i8,
    pub word: Word,
}

impl SignedWord {
    pub fn var(i: usize) -> Self {
        SignedWord { sign: 1, word: Word::generator(i) }
    }

    pub fn substitute(&self, images: &[SignedWord]) -> SignedWord {
        let words: Vec<Word> = images.iter().map(|s| s.word.clone()).collect();
        let sums = self.word.exponent_sums(images.len());
        let mut sign = self.sign;
        for (img, e) in images.iter().zip(sums) {
            if img.sign < 0 && e % 2 != 0 {
                sign = -sign;
            }
        }
        SignedWord { sign, word: self.word.substitute(&words) }
    }

    pub fn eval(&self, values: &[SU2Element]) -> SU2Element {
        let g = crate::repvar::evaluate(&self.word, values);
        if self.sign < 0 {
            -g
        } else {
            g
        }
    }
}

/// The relation of a chain in normal form: variables are the source
/// coordinates `A_1, B_1, ...` followed by fiber variables introduced by
/// one-handles; the target coordinates are `Ad_{exp(rotation theta)}` of `outputs`
/// and every constraint `(sign, w)` reads `w = sign I`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Relation {
    pub source_genus: usize,
    pub target_genus: usize,
    pub n_fibers: usize,
    pub rotation: f64,
    pub outputs: Vec<SignedWord>,
    pub constraints: Vec<SignedWord>,
}

impl Relation {
    pub fn identity(genus: usize) -> Self {
        Relation {
            source_genus: genus,
            target_genus: genus,
            n_fibers: 0,
            rotation: 0.0,
            outputs: (0..2 * genus).map(SignedWord::var).collect(),
            constraints: Vec::new(),
        }
    }

    pub fn of_expr(expr: &CorrespondenceExpr) -> Result<Self> {
        Relation::identity(expr.source_genus).then(expr)
    }

    pub fn n_vars(&self) -> usize {
        2 * self.source_genus + self.n_fibers
    }

    /// The relation followed by `expr`.
    pub fn then(&self, expr: &CorrespondenceExpr) -> Result<Self> {
        if expr.source_genus != self.target_genus {
            return Err(Error::GenusMismatch { expected: self.target_genus, got: expr.source_genus });
        }
        let mut r = self.clone();
        match &expr.kind {
            CorrespondenceKind::SignFlip { flips } => {
                for (o, &f) in r.outputs.iter_mut().zip(flips) {
                    if f == 1 {
                        o.sign = -o.sign;
                    }
                }
            }
            CorrespondenceKind::BoundaryRotation { alpha } => r.rotation += alpha,
            CorrespondenceKind::WordSubstitution { .. } | CorrespondenceKind::PathConjugation { .. } => {
                let words = expr.kind.words(expr.source_genus).expect("functional word kind");
                r.outputs = words
                    .iter()
                    .map(|w| SignedWord { sign: 1, word: w.clone() }.substitute(&self.outputs))
                    .collect();
            }
            CorrespondenceKind::TwoHandle { pair, curve, sign, .. } => {
                // the conjugated curve is central exactly when the curve is
                let c = &r.outputs[super::generator_index(*pair, *curve)];
                r.constraints.push(SignedWord { sign: c.sign * sign, word: c.word.clone() });
                r.outputs.drain(2 * pair..2 * pair + 2);
                r.target_genus -= 1;
            }
            CorrespondenceKind::OneHandle { sign } => {
                let a = r.n_vars();
                r.n_fibers += 2;
                r.outputs.push(SignedWord::var(a));
                r.outputs.push(SignedWord::var(a + 1));
                r.constraints.push(SignedWord { sign: *sign, word: Word::generator(a + 1) });
                r.target_genus += 1;
            }
        }
        Ok(r)
    }

    /// A graph of a map: no fibers, no constraints, same genus.
    pub fn is_functional(&self) -> bool {
        self.n_fibers == 0 && self.constraints.is_empty() && self.source_genus == self.target_genus
    }

    /// Constraints up to inversion and cyclic conjugation, trivial ones dropped.
    pub fn normalized_constraints(&self) -> Vec<SignedWord> {
        let mut out: Vec<SignedWord> = self
            .constraints
            .iter()
            .filter(|c| !(c.word.is_empty() && c.sign > 0))
            .map(|c| SignedWord { sign: c.sign, word: canonical_cyclic(&c.word, true) })
            .collect();
        out.sort();
        out.dedup();
        out
    }

    /// Exact equality of normal forms.
    pub fn symbolically_equal(&self, other: &Relation) -> bool {
        self.source_genus == other.source_genus
            && self.target_genus == other.target_genus
            && self.n_fibers == other.n_fibers
            && (self.rotation - other.rotation).abs() < 1e-12
            && self.outputs == other.outputs
            && self.normalized_constraints() == other.normalized_constraints()
    }

    /// Flatness of the source together with the constraints, over all variables.
    pub fn constraint_problem(&self) -> Result<TwistedRepProblem> {
        let relators = if self.source_genus > 0 { vec![boundary_word(self.source_genus)] } else { Vec::new() };
        let twisted = self
            .constraints
            .iter()
            .filter(|c| !(c.word.is_empty() && c.sign > 0))
            .map(|c| (c.word.clone(), c.sign))
            .collect();
        TwistedRepProblem::new(Presentation::new(self.n_vars(), relators)?, twisted)
    }

    /// Target coordinates for given values of all variables, on the flat slice.
    pub fn image(&self, values: &[SU2Element]) -> Vec<SU2Element> {
        self.outputs.iter().map(|o| o.eval(values)).collect()
    }

    pub fn member(&self, x: &HolonomyTuple, y: &HolonomyTuple, tol: f64) -> Result<bool> {
        if x.genus() != self.source_genus {
            return Err(Error::GenusMismatch { expected: self.source_genus, got: x.genus() });
        }
        if y.genus() != self.target_genus {
            return Err(Error::GenusMismatch { expected: self.target_genus, got: y.genus() });
        }
        let dt: f64 = (0..3).map(|i| (x.theta.v[i] - y.theta.v[i]).abs()).fold(0.0, f64::max);
        if dt > tol {
            return Ok(false);
        }
        let rot = exp_su2(x.theta.scale(self.rotation));
        let mut vals: Vec<Option<SU2Element>> = x.coords().into_iter().map(Some).collect();
        vals.resize(self.n_vars(), None);
        let mut eqs: Vec<(&Word, SU2Element)> = Vec::new();
        for (o, yj) in self.outputs.iter().zip(y.coords()) {
            let t = rot.inverse() * yj * rot;
            eqs.push((&o.word, if o.sign < 0 { -t } else { t }));
        }
        for c in &self.constraints {
            eqs.push((&c.word, SU2Element::central(c.sign)));
        }
        let mut pending: Vec<usize> = (0..eqs.len()).collect();
        loop {
            let mut progress = false;
            let mut still = Vec::new();
            for &k in &pending {
                let (w, t) = eqs[k];
                let unknown: Vec<usize> =
                    w.letters().iter().enumerate().filter(|(_, l)| vals[l.generator].is_none()).map(|(i, _)| i).collect();
                match unknown.as_slice() {
                    [] => {
                        let v: Vec<SU2Element> = vals.iter().map(|v| v.unwrap_or(SU2Element::IDENTITY)).collect();
                        if crate::repvar::evaluate(w, &v).distance(&t) > tol {
                            return Ok(false);
                        }
                    }
                    [i] => {
                        let letters = w.letters();
                        let known = |ls: &[Letter]| {
                            ls.iter().fold(SU2Element::IDENTITY, |acc, l| {
                                let g = vals[l.generator].unwrap();
                                acc * if l.exponent > 0 { g } else { g.inverse() }
                            })
                        };
                        let left = known(&letters[..*i]);
                        let right = known(&letters[i + 1..]);
                        let z = left.inverse() * t * right.inverse();
                        let l = letters[*i];
                        vals[l.generator] = Some(if l.exponent > 0 { z } else { z.inverse() });
                        progress = true;
                    }
                    _ => still.push(k),
                }
            }
            pending = still;
            if !progress {
                break;
            }
        }
        if !pending.is_empty() {
            return Err(Error::SamplingFailure("a fiber variable is not determined by the target".into()));
        }
        Ok(true)
    }
}
