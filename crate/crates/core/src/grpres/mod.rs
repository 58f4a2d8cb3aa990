//! Finitely presented groups, fundamental groups of the supported manifold
//! families, and first homology via Smith normal form.

mod intmat;
mod manifold;
mod word;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub use intmat::{smith_normal_form, IntMatrix, SmithForm};
pub use manifold::{seifert_invariants, Family, ManifoldDesc};
pub use word::{Letter, Word};

use crate::error::{Error, Result};

/// A finitely presented group `<g_0, ..., g_{n-1} | r_1, ..., r_k>` with named words.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    pub n_generators: usize,
    pub relators: Vec<Word>,
    pub marked_words: BTreeMap<String, Word>,
}

impl Presentation {
    pub fn new(n_generators: usize, relators: Vec<Word>) -> Result<Self> {
        let p = Presentation { n_generators, relators, marked_words: BTreeMap::new() };
        p.validate()?;
        Ok(p)
    }

    pub fn free(n_generators: usize) -> Self {
        Presentation { n_generators, relators: Vec::new(), marked_words: BTreeMap::new() }
    }

    pub fn with_marked(mut self, name: impl Into<String>, word: Word) -> Self {
        self.marked_words.insert(name.into(), word);
        self
    }

    pub fn marked(&self, name: &str) -> Result<&Word> {
        self.marked_words.get(name).ok_or_else(|| Error::UnknownMarkedWord(name.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        let words = self.relators.iter().chain(self.marked_words.values());
        for w in words {
            if let Some(g) = w.max_generator() {
                if g >= self.n_generators {
                    return Err(Error::InvalidParams(format!(
                        "word {w} uses generator {g} but only {} generators exist",
                        self.n_generators
                    )));
                }
            }
        }
        Ok(())
    }

    /// Relation matrix of the abelianisation: one row per relator, one column per generator.
    pub fn relation_matrix(&self) -> IntMatrix {
        let rows: Vec<Vec<i64>> = self.relators.iter().map(|r| r.exponent_sums(self.n_generators)).collect();
        let mut m = IntMatrix::zeros(rows.len(), self.n_generators);
        for (i, row) in rows.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                m[(i, j)] = BigInt::from(x);
            }
        }
        m
    }

    pub fn abelianization(&self) -> Result<H1> {
        H1::from_relation_matrix(&self.relation_matrix())
    }

    /// Free product; marked words of `other` are prefixed with `prefix`.
    pub fn free_product(&self, other: &Presentation, prefix: &str) -> Presentation {
        let offset = self.n_generators;
        let mut out = self.clone();
        out.n_generators += other.n_generators;
        out.relators.extend(other.relators.iter().map(|r| r.shifted(offset)));
        for (name, w) in &other.marked_words {
            out.marked_words.insert(format!("{prefix}{name}"), w.shifted(offset));
        }
        out
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let gens: Vec<String> = (0..self.n_generators).map(|i| format!("g{i}")).collect();
        let rels: Vec<String> = self.relators.iter().map(|r| r.to_string()).collect();
        write!(f, "<{} | {}>", gens.join(", "), rels.join(", "))
    }
}

/// Adds the relator `mu^2`, producing the group whose representations with
/// `rho(mu) = -I` form the twisted representation variety.
pub fn quotient_by_square(p: &Presentation, mu: &str) -> Result<Presentation> {
    let w = p.marked(mu)?.clone();
    let mut out = p.clone();
    out.relators.push(w.pow(2));
    Ok(out)
}

/// A finitely generated abelian group in invariant-factor form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct H1 {
    /// Invariant factors greater than one, each dividing the next.
    pub torsion: Vec<u64>,
    pub betti: usize,
}

impl H1 {
    pub fn from_relation_matrix(m: &IntMatrix) -> Result<Self> {
        let snf = smith_normal_form(m);
        let factors = snf.invariant_factors();
        let betti = m.ncols() - factors.len();
        let mut torsion = Vec::new();
        for f in factors {
            if f.is_one() {
                continue;
            }
            torsion.push(f.to_u64().ok_or_else(|| Error::Internal(format!("invariant factor {f} overflows u64")))?);
        }
        Ok(H1 { torsion, betti })
    }

    pub fn trivial() -> Self {
        H1 { torsion: Vec::new(), betti: 0 }
    }

    /// `|H_1|` with the convention that an infinite group counts as 0.
    pub fn order(&self) -> u64 {
        if self.betti > 0 {
            0
        } else {
            self.torsion.iter().product()
        }
    }

    pub fn is_finite(&self) -> bool {
        self.betti == 0
    }

    /// Direct sum, renormalised to invariant-factor form.
    pub fn direct_sum(&self, other: &H1) -> Result<H1> {
        let factors: Vec<u64> = self.torsion.iter().chain(other.torsion.iter()).copied().collect();
        let n = factors.len();
        let mut m = IntMatrix::zeros(n, n);
        for (i, f) in factors.iter().enumerate() {
            m[(i, i)] = BigInt::from(*f);
        }
        let mut out = H1::from_relation_matrix(&m)?;
        out.betti = self.betti + other.betti;
        Ok(out)
    }
}

impl fmt::Display for H1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.torsion.iter().map(|t| format!("Z/{t}")).collect();
        if self.betti > 0 {
            parts.push(if self.betti == 1 { "Z".into() } else { format!("Z^{}", self.betti) });
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Presentation of the exterior of the torus knot `T(r, s)`, with marked
/// `meridian` and (Seifert-framed) `longitude`.
pub fn torus_knot_complement(r: i64, s: i64) -> Result<Presentation> {
    if r < 1 || s < 1 || num_integer::gcd(r, s) != 1 {
        return Err(Error::InvalidParams(format!("torus knot T({r},{s}) needs coprime positive r, s")));
    }
    let (x, y) = (0usize, 1usize);
    // x ↦ s and y ↦ r in H_1 = Z; the meridian is x^u y^v with u s + v r = 1.
    let eg = num_integer::Integer::extended_gcd(&s, &r);
    let (u, v) = (eg.x, eg.y);
    let meridian = Word::from_syllables(&[(x, u), (y, v)]);
    let fiber = Word::power_of(x, r);
    let longitude = fiber.concat(&meridian.pow(-r * s));
    let relator = Word::from_syllables(&[(x, r), (y, -s)]);
    Ok(Presentation::new(2, vec![relator])?
        .with_marked("meridian", meridian)
        .with_marked("longitude", longitude)
        .with_marked("fiber", fiber))
}

/// Fundamental group of a closed manifold description.
pub fn pi1(desc: &ManifoldDesc) -> Result<Presentation> {
    desc.validate()?;
    match &desc.family {
        Family::Lens { p, .. } => {
            let a = Word::generator(0);
            Ok(Presentation::new(1, vec![a.pow(*p)])?.with_marked("core", a))
        }
        Family::S2xS1 => Ok(Presentation::free(1).with_marked("core", Word::generator(0))),
        Family::Brieskorn { a } => {
            let (b0, b) = seifert_invariants(*a)?;
            let h = 3usize;
            let hw = Word::generator(h);
            let mut relators = Vec::new();
            for i in 0..3 {
                relators.push(Word::commutator(&hw, &Word::generator(i)));
            }
            for i in 0..3 {
                relators.push(Word::from_syllables(&[(i, a[i] as i64), (h, b[i])]));
            }
            relators.push(Word::from_syllables(&[(0, 1), (1, 1), (2, 1), (h, b0)]));
            let mut p = Presentation::new(4, relators)?.with_marked("fiber", hw);
            for i in 0..3 {
                p = p.with_marked(format!("exceptional{i}"), Word::generator(i));
            }
            Ok(p)
        }
        Family::PlumbingTree { weights, edges } => {
            let n = weights.len();
            let mut nbrs = vec![Vec::new(); n];
            for &[a, b] in edges {
                nbrs[a].push(b);
                nbrs[b].push(a);
            }
            let mut relators = Vec::new();
            for &[a, b] in edges {
                relators.push(Word::commutator(&Word::generator(a), &Word::generator(b)));
            }
            for v in 0..n {
                let mut syl = vec![(v, weights[v])];
                let mut ns = nbrs[v].clone();
                ns.sort_unstable();
                syl.extend(ns.into_iter().map(|u| (u, 1)));
                relators.push(Word::from_syllables(&syl));
            }
            let mut p = Presentation::new(n, relators)?;
            for v in 0..n {
                p = p.with_marked(format!("meridian{v}"), Word::generator(v));
            }
            Ok(p)
        }
        Family::SurgeryOnTorusKnot { r, s, n } => {
            let mut p = torus_knot_complement(*r, *s)?;
            let mu = p.marked("meridian")?.clone();
            let lambda = p.marked("longitude")?.clone();
            p.relators.push(mu.pow(*n).concat(&lambda));
            Ok(p)
        }
        Family::ConnectedSum { summands } => {
            let mut acc = Presentation::free(0);
            for (i, s) in summands.iter().enumerate() {
                acc = acc.free_product(&pi1(s)?, &format!("{i}."));
            }
            Ok(acc)
        }
        Family::DoubleCover { .. } => Err(Error::UnsupportedDescription(
            "fundamental groups of branched double covers are not built; use h1".into(),
        )),
    }
}

/// First integral homology in invariant-factor form.
pub fn h1(desc: &ManifoldDesc) -> Result<H1> {
    desc.validate()?;
    match &desc.family {
        Family::Lens { p, .. } => Ok(H1 { torsion: if *p > 1 { vec![*p as u64] } else { vec![] }, betti: 0 }),
        Family::S2xS1 => Ok(H1 { torsion: vec![], betti: 1 }),
        Family::PlumbingTree { .. } => H1::from_relation_matrix(&desc.intersection_matrix()?),
        Family::DoubleCover { pd } => H1::from_relation_matrix(&pd.goeritz_matrix()?),
        Family::ConnectedSum { summands } => {
            let mut acc = H1::trivial();
            for s in summands {
                acc = acc.direct_sum(&h1(s)?)?;
            }
            Ok(acc)
        }
        _ => pi1(desc)?.abelianization(),
    }
}

/// `|H_1(Y; Z)|`, or 0 when infinite.
pub fn h1_order(desc: &ManifoldDesc) -> Result<u64> {
    Ok(h1(desc)?.order())
}

/// Rank over Z/2 of the columns of `m` reduced mod 2 and whether `target` lies in their span.
pub(crate) fn in_span_mod2(m: &IntMatrix, target: &[u8]) -> bool {
    let rows = m.nrows();
    let cols = m.ncols();
    // augmented system: columns of m, then the target
    let mut a: Vec<Vec<u8>> = (0..rows)
        .map(|i| {
            let mut r: Vec<u8> = (0..cols).map(|j| if (&m[(i, j)] % 2u8).is_zero() { 0 } else { 1 }).collect();
            r.push(target.get(i).copied().unwrap_or(0) & 1);
            r
        })
        .collect();
    let mut pivot_row = 0;
    for c in 0..cols {
        let Some(p) = (pivot_row..rows).find(|&i| a[i][c] == 1) else { continue };
        a.swap(pivot_row, p);
        for i in 0..rows {
            if i != pivot_row && a[i][c] == 1 {
                let src = a[pivot_row].clone();
                for (x, y) in a[i].iter_mut().zip(src) {
                    *x ^= y;
                }
            }
        }
        pivot_row += 1;
    }
    (pivot_row..rows).all(|i| a[i][cols] == 0)
}
