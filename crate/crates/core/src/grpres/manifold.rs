use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::{in_span_mod2, IntMatrix};
use crate::error::{Error, Result};
use crate::linkdiag::PDDiagram;

/// A closed oriented 3-manifold together with a class `c` in `H_1(Y; Z/2)`.
///
/// `class_c` is a bit vector over the basis declared by the family:
/// the two Heegaard cores for `lens` and `s2xs1`, the vertex meridians for
/// `plumbing`, the knot meridian for `surgery_torus_knot`, and the white
/// checkerboard regions (minus the last) for `double_cover`. Connected sums
/// carry their classes in the summands.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifoldDesc {
    #[serde(flatten)]
    pub family: Family,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub class_c: Vec<u8>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Family {
    Lens {
        p: i64,
        q: i64,
    },
    Brieskorn {
        a: [i64; 3],
    },
    #[serde(rename = "plumbing")]
    PlumbingTree {
        weights: Vec<i64>,
        #[serde(default)]
        edges: Vec<[usize; 2]>,
    },
    #[serde(rename = "surgery_torus_knot")]
    SurgeryOnTorusKnot {
        r: i64,
        s: i64,
        n: i64,
    },
    ConnectedSum {
        summands: Vec<ManifoldDesc>,
    },
    #[serde(rename = "s2xs1")]
    S2xS1,
    /// Branched double cover of `S^3` over the link of a PD diagram.
    DoubleCover {
        pd: PDDiagram,
    },
}

impl ManifoldDesc {
    pub fn new(family: Family) -> Self {
        ManifoldDesc { family, class_c: Vec::new() }
    }

    pub fn lens(p: i64, q: i64) -> Self {
        Self::new(Family::Lens { p, q })
    }

    pub fn s3() -> Self {
        Self::lens(1, 0)
    }

    pub fn s2xs1() -> Self {
        Self::new(Family::S2xS1)
    }

    pub fn brieskorn(a1: i64, a2: i64, a3: i64) -> Self {
        Self::new(Family::Brieskorn { a: [a1, a2, a3] })
    }

    pub fn plumbing(weights: Vec<i64>, edges: Vec<[usize; 2]>) -> Self {
        Self::new(Family::PlumbingTree { weights, edges })
    }

    pub fn torus_knot_surgery(r: i64, s: i64, n: i64) -> Self {
        Self::new(Family::SurgeryOnTorusKnot { r, s, n })
    }

    pub fn connected_sum(summands: Vec<ManifoldDesc>) -> Self {
        Self::new(Family::ConnectedSum { summands })
    }

    pub fn double_cover(pd: PDDiagram) -> Self {
        Self::new(Family::DoubleCover { pd })
    }

    pub fn with_class(mut self, bits: Vec<u8>) -> Self {
        self.class_c = bits;
        self
    }

    pub fn family_name(&self) -> &'static str {
        match self.family {
            Family::Lens { .. } => "lens",
            Family::Brieskorn { .. } => "brieskorn",
            Family::PlumbingTree { .. } => "plumbing",
            Family::SurgeryOnTorusKnot { .. } => "surgery_torus_knot",
            Family::ConnectedSum { .. } => "connected_sum",
            Family::S2xS1 => "s2xs1",
            Family::DoubleCover { .. } => "double_cover",
        }
    }

    /// Number of bits the declared `H_1(Y; Z/2)` basis allows in `class_c`.
    pub fn class_len(&self) -> usize {
        match &self.family {
            Family::Lens { .. } | Family::S2xS1 => 2,
            Family::Brieskorn { .. } | Family::ConnectedSum { .. } => 0,
            Family::PlumbingTree { weights, .. } => weights.len(),
            Family::SurgeryOnTorusKnot { .. } => 1,
            Family::DoubleCover { pd } => pd.white_region_count().saturating_sub(1),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidParams(m));
        match &self.family {
            Family::Lens { p, q } => {
                if *p < 1 {
                    return bad(format!("lens space needs p >= 1, got {p}"));
                }
                if p.gcd(q) != 1 {
                    return bad(format!("lens space L({p},{q}) needs gcd(p,q) = 1"));
                }
            }
            Family::Brieskorn { a } => {
                if a.iter().any(|&x| x < 2) {
                    return bad(format!("Brieskorn exponents must be >= 2, got {a:?}"));
                }
                for i in 0..3 {
                    for j in i + 1..3 {
                        if a[i].gcd(&a[j]) != 1 {
                            return bad(format!("Brieskorn exponents {a:?} are not pairwise coprime"));
                        }
                    }
                }
            }
            Family::PlumbingTree { weights, edges } => {
                let n = weights.len();
                let mut parent: Vec<usize> = (0..n).collect();
                fn find(p: &mut [usize], x: usize) -> usize {
                    let mut r = x;
                    while p[r] != r {
                        r = p[r];
                    }
                    p[x] = r;
                    r
                }
                for &[a, b] in edges {
                    if a >= n || b >= n {
                        return bad(format!("edge ({a},{b}) refers to a vertex outside 0..{n}"));
                    }
                    if a == b {
                        return bad(format!("self-loop at vertex {a}"));
                    }
                    let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                    if ra == rb {
                        return bad("plumbing graph must be a forest".into());
                    }
                    parent[ra] = rb;
                }
            }
            Family::SurgeryOnTorusKnot { r, s, .. } => {
                if *r < 1 || *s < 1 || r.gcd(s) != 1 {
                    return bad(format!("torus knot T({r},{s}) needs coprime positive parameters"));
                }
            }
            Family::ConnectedSum { summands } => {
                for s in summands {
                    s.validate()?;
                }
            }
            Family::S2xS1 => {}
            Family::DoubleCover { pd } => pd.validate()?,
        }
        if self.class_c.iter().any(|&b| b > 1) {
            return bad(format!("class_c entries must be 0 or 1, got {:?}", self.class_c));
        }
        if self.class_c.len() > self.class_len() && self.class_c.iter().skip(self.class_len()).any(|&b| b != 0) {
            return bad(format!(
                "class_c has {} bits but the {} basis has {}",
                self.class_c.len(),
                self.family_name(),
                self.class_len()
            ));
        }
        Ok(())
    }

    fn bits(&self) -> Vec<u8> {
        let mut b = self.class_c.clone();
        b.resize(self.class_len().max(b.len()), 0);
        b
    }

    /// Whether the class vanishes in `H_1(Y; Z/2)`.
    pub fn class_is_zero(&self) -> Result<bool> {
        self.validate()?;
        let b = self.bits();
        Ok(match &self.family {
            Family::Lens { p, .. } => p % 2 == 1 || (b[0] ^ b[1]) == 0,
            Family::S2xS1 => (b[0] ^ b[1]) == 0,
            Family::Brieskorn { .. } => true,
            Family::SurgeryOnTorusKnot { n, .. } => n % 2 != 0 || b[0] == 0,
            Family::PlumbingTree { .. } => in_span_mod2(&self.intersection_matrix()?, &b),
            Family::DoubleCover { pd } => in_span_mod2(&pd.goeritz_matrix()?, &b),
            Family::ConnectedSum { summands } => {
                let mut all = true;
                for s in summands {
                    all &= s.class_is_zero()?;
                }
                all
            }
        })
    }

    /// Intersection form of a plumbing: weights on the diagonal, 1 for each edge.
    pub fn intersection_matrix(&self) -> Result<IntMatrix> {
        let Family::PlumbingTree { weights, edges } = &self.family else {
            return Err(Error::UnsupportedDescription(format!("{} has no plumbing graph", self.family_name())));
        };
        let n = weights.len();
        let mut m = IntMatrix::zeros(n, n);
        for (i, w) in weights.iter().enumerate() {
            m[(i, i)] = BigInt::from(*w);
        }
        for &[a, b] in edges {
            m[(a, b)] = BigInt::from(1);
            m[(b, a)] = BigInt::from(1);
        }
        Ok(m)
    }
}

/// Seifert invariants `(b0, [b1, b2, b3])` of the Brieskorn sphere with
/// `b_i` in `[0, a_i)` and `a1 a2 a3 (-b0 + sum b_i / a_i) = 1`.
pub fn seifert_invariants(a: [i64; 3]) -> Result<(i64, [i64; 3])> {
    ManifoldDesc::new(Family::Brieskorn { a }).validate()?;
    let big_a: i64 = a.iter().product();
    let mut b = [0i64; 3];
    let mut total = 0i64;
    for i in 0..3 {
        let ai = big_a / a[i];
        let eg = ai.extended_gcd(&a[i]);
        b[i] = eg.x.rem_euclid(a[i]);
        total += b[i] * ai;
    }
    debug_assert_eq!((total - 1) % big_a, 0);
    Ok(((total - 1) / big_a, b))
}
