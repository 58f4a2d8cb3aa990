//! Twisted SU(2) representation varieties: exact enumeration for lens spaces
//! and Brieskorn spheres, a numerical solver for arbitrary presentations, and
//! orbit classification.

mod exact;
mod solver;

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

pub use exact::{
    lens_histogram,
    casson_brieskorn, enumerate_brieskorn, enumerate_lens, BrieskornEnumeration, BrieskornRep, LensComponent,
};
pub use solver::{project, solve_numeric, SolverOptions};

use crate::error::{Error, Result};
use crate::grpres::{quotient_by_square, Presentation, Word};
use crate::su2::SU2Element;

/// Maximum coordinate gap between signatures of the same orbit.
pub const COLLISION_RADIUS: f64 = 1e-6;
/// Distance to `±I` (or of a commutator to `I`) under which an element counts as central.
pub const CENTRAL_TOL: f64 = 1e-6;

/// Equations `rho(r) = I` for the relators of `presentation` together with
/// `rho(w) = ±I` for each twisted relator.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwistedRepProblem {
    pub presentation: Presentation,
    /// `(word, sign)` meaning `rho(word) = sign * I`.
    pub twisted_relators: Vec<(Word, i8)>,
}

impl TwistedRepProblem {
    pub fn new(presentation: Presentation, twisted_relators: Vec<(Word, i8)>) -> Result<Self> {
        let p = TwistedRepProblem { presentation, twisted_relators };
        p.validate()?;
        Ok(p)
    }

    /// Untwisted problem: representations of the presented group itself.
    pub fn untwisted(presentation: Presentation) -> Self {
        TwistedRepProblem { presentation, twisted_relators: Vec::new() }
    }

    /// Representations of `pi / mu^2` sending the marked word `mu` to `-I`.
    pub fn with_meridian(p: &Presentation, mu: &str) -> Result<Self> {
        let tilde = quotient_by_square(p, mu)?;
        let w = p.marked(mu)?.clone();
        Self::new(tilde, vec![(w, -1)])
    }

    /// The genus-one problem `{B = e0 I, A^p B^-q = e1 I}` with `A = g0`, `B = g1`.
    pub fn lens(p: i64, q: i64, c: (u8, u8)) -> Self {
        let sign = |b: u8| if b % 2 == 0 { 1 } else { -1 };
        let b = Word::generator(1);
        let rel = Word::power_of(0, p).concat(&Word::power_of(1, -q));
        TwistedRepProblem {
            presentation: Presentation::free(2),
            twisted_relators: vec![(b, sign(c.0)), (rel, sign(c.1))],
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.presentation.validate()?;
        for (w, s) in &self.twisted_relators {
            if *s != 1 && *s != -1 {
                return Err(Error::InvalidParams(format!("twisted target must be +1 or -1, got {s}")));
            }
            if w.max_generator().is_some_and(|g| g >= self.presentation.n_generators) {
                return Err(Error::InvalidParams(format!("twisted relator {w} uses an unknown generator")));
            }
        }
        Ok(())
    }

    pub fn n_generators(&self) -> usize {
        self.presentation.n_generators
    }

    /// Every equation as `(word, sign)`, untwisted relators first.
    pub fn equations(&self) -> Vec<(Word, i8)> {
        self.presentation
            .relators
            .iter()
            .map(|r| (r.clone(), 1))
            .chain(self.twisted_relators.iter().cloned())
            .collect()
    }

    /// `max_k |rho(w_k) - target_k|` in quaternion coordinates.
    pub fn residual(&self, rep: &[SU2Element]) -> f64 {
        self.equations()
            .iter()
            .map(|(w, s)| evaluate(w, rep).distance(&SU2Element::central(*s)))
            .fold(0.0, f64::max)
    }
}

impl fmt::Display for TwistedRepProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut eqs: Vec<String> = Vec::new();
        for (w, s) in self.equations() {
            eqs.push(format!("{w} = {}I", if s < 0 { "-" } else { "" }));
        }
        write!(f, "{} generators: {}", self.n_generators(), eqs.join(", "))
    }
}

/// Image of a word under a representation.
pub fn evaluate(w: &Word, rep: &[SU2Element]) -> SU2Element {
    w.evaluate(rep, SU2Element::IDENTITY, |a, b| *a * *b, |a| a.inverse())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrbitKind {
    Central,
    Abelian,
    Irreducible,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum OrbitType {
    #[serde(rename = "point")]
    Point,
    #[serde(rename = "S2")]
    Sphere,
    #[serde(rename = "SO3")]
    SO3,
    /// A whole copy of SU(2), as for `S^2 x S^1` with trivial class.
    #[serde(rename = "SU2")]
    Group,
}

impl OrbitType {
    /// Total mod 2 Betti number of the component.
    pub fn perturbed_count(self) -> usize {
        match self {
            OrbitType::Point => 1,
            OrbitType::Sphere | OrbitType::Group => 2,
            OrbitType::SO3 => 4,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct KindHistogram {
    pub central: usize,
    pub abelian: usize,
    pub irreducible: usize,
}

impl KindHistogram {
    pub fn add(&mut self, kind: OrbitKind) {
        match kind {
            OrbitKind::Central => self.central += 1,
            OrbitKind::Abelian => self.abelian += 1,
            OrbitKind::Irreducible => self.irreducible += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.central + self.abelian + self.irreducible
    }

    pub fn of(kinds: impl IntoIterator<Item = OrbitKind>) -> Self {
        let mut h = KindHistogram::default();
        for k in kinds {
            h.add(k);
        }
        h
    }
}

/// A conjugation orbit of solutions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RepOrbit {
    pub representative: Vec<SU2Element>,
    pub kind: OrbitKind,
    pub orbit_type: OrbitType,
    pub residual: f64,
    pub signature: Vec<f64>,
}

impl RepOrbit {
    pub fn from_representative(prob: &TwistedRepProblem, rep: Vec<SU2Element>) -> Self {
        let kind = classify(&rep);
        let orbit_type = match kind {
            OrbitKind::Central => OrbitType::Point,
            OrbitKind::Abelian => OrbitType::Sphere,
            OrbitKind::Irreducible => OrbitType::SO3,
        };
        RepOrbit { residual: prob.residual(&rep), signature: signature(&rep), representative: rep, kind, orbit_type }
    }
}

pub fn histogram(orbits: &[RepOrbit]) -> KindHistogram {
    KindHistogram::of(orbits.iter().map(|o| o.kind))
}

/// Traces of the generators, then of `g_i g_j` and `g_i g_j^-1` for `i < j`.
pub fn signature(rep: &[SU2Element]) -> Vec<f64> {
    let mut s: Vec<f64> = rep.iter().map(|g| g.trace()).collect();
    for i in 0..rep.len() {
        for j in i + 1..rep.len() {
            s.push((rep[i] * rep[j]).trace());
            s.push((rep[i] * rep[j].inverse()).trace());
        }
    }
    s
}

pub fn signatures_collide(a: &[f64], b: &[f64]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= COLLISION_RADIUS)
}

pub(crate) fn compare_signatures(a: &[f64], b: &[f64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        if (x - y).abs() > COLLISION_RADIUS {
            return x.total_cmp(y);
        }
    }
    a.len().cmp(&b.len())
}

pub fn classify(rep: &[SU2Element]) -> OrbitKind {
    if rep.iter().all(|g| g.is_central(CENTRAL_TOL)) {
        return OrbitKind::Central;
    }
    for i in 0..rep.len() {
        for j in i + 1..rep.len() {
            if rep[i].commutator(&rep[j]).distance(&SU2Element::IDENTITY) > CENTRAL_TOL {
                return OrbitKind::Irreducible;
            }
        }
    }
    OrbitKind::Abelian
}

/// Adds `orbit` unless an orbit with a colliding signature is already present.
pub fn merge_orbit(orbits: &mut Vec<RepOrbit>, orbit: RepOrbit) -> bool {
    if orbits.iter().any(|o| signatures_collide(&o.signature, &orbit.signature)) {
        return false;
    }
    orbits.push(orbit);
    true
}

pub fn sort_orbits(orbits: &mut [RepOrbit]) {
    orbits.sort_by(|a, b| compare_signatures(&a.signature, &b.signature));
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn signature_is_conjugation_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let rep: Vec<SU2Element> = (0..3).map(|_| SU2Element::random(&mut rng)).collect();
            let h = SU2Element::random(&mut rng);
            let conj: Vec<SU2Element> = rep.iter().map(|g| g.conjugate_by(&h)).collect();
            let (a, b) = (signature(&rep), signature(&conj));
            assert!(a.iter().zip(&b).all(|(x, y)| (x - y).abs() < 1e-9));
        }
    }

    #[test]
    fn classification() {
        let i = SU2Element::IDENTITY;
        let m = SU2Element::MINUS_IDENTITY;
        assert_eq!(classify(&[i, m]), OrbitKind::Central);
        let a = SU2Element::new(0.0, 1.0, 0.0, 0.0);
        let b = SU2Element::new(0.0, 0.0, 1.0, 0.0);
        assert_eq!(classify(&[a, m]), OrbitKind::Abelian);
        assert_eq!(classify(&[a, b]), OrbitKind::Irreducible);
    }

    #[test]
    fn lens_problem_shape() {
        let p = TwistedRepProblem::lens(3, 1, (0, 0));
        assert_eq!(p.to_string(), "2 generators: g1 = I, g0^3 g1^-1 = I");
        let p = TwistedRepProblem::lens(5, 2, (1, 0));
        assert_eq!(p.twisted_relators[0].1, -1);
    }
}
