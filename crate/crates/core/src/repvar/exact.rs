use num_integer::Integer;
use num_rational::Ratio;
use num_traits::Signed;
use serde::{Deserialize, Serialize};

use super::{KindHistogram, OrbitKind, OrbitType};
use crate::error::{Error, Result};
use crate::grpres::seifert_invariants;
use crate::su2::{exp_su2, Su2Vector, SU2Element};

fn sign_of_bit(b: u8) -> i8 {
    if b % 2 == 0 {
        1
    } else {
        -1
    }
}

/// A component of `{B = e0 I, A^p B^-q = e1 I}` up to conjugation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LensComponent {
    /// Rotation angle of `A` in units of pi, in `[0, 1]`; `None` when `A` is free.
    pub angle: Option<Ratio<i64>>,
    pub b_sign: i8,
    pub kind: OrbitKind,
    pub orbit_type: OrbitType,
}

impl LensComponent {
    /// A point of the component as `[A, B]`.
    pub fn representative(&self) -> Vec<SU2Element> {
        let a = match self.angle {
            Some(t) => {
                let theta = std::f64::consts::PI * (*t.numer() as f64) / (*t.denom() as f64);
                exp_su2(Su2Vector::new(theta, 0.0, 0.0))
            }
            None => SU2Element::IDENTITY,
        };
        vec![a, SU2Element::central(self.b_sign)]
    }

    pub fn perturbed_count(&self) -> usize {
        self.orbit_type.perturbed_count()
    }
}

/// Exact solutions of the genus-one lens problem for the class bits `c = (c0, c1)`.
///
/// `p = 0` with `q = ±1` describes `S^2 x S^1`; the consistent case is a whole
/// copy of SU(2) and the inconsistent one is empty.
pub fn enumerate_lens(p: i64, q: i64, c: (u8, u8)) -> Result<Vec<LensComponent>> {
    if p < 0 || p.gcd(&q) != 1 {
        return Err(Error::InvalidParams(format!("lens data ({p},{q}) needs p >= 0 and gcd(p,q) = 1")));
    }
    let (e0, e1) = (sign_of_bit(c.0), sign_of_bit(c.1));
    // B^-q = e0^q, so A^p = e1 e0^q
    let s = e1 * if q % 2 == 0 { 1 } else { e0 };
    if p == 0 {
        return Ok(if s == 1 {
            vec![LensComponent { angle: None, b_sign: e0, kind: OrbitKind::Abelian, orbit_type: OrbitType::Group }]
        } else {
            Vec::new()
        });
    }
    let parity = if s == 1 { 0 } else { 1 };
    Ok((0..=p)
        .filter(|j| j % 2 == parity)
        .map(|j| {
            let edge = j == 0 || j == p;
            LensComponent {
                angle: Some(Ratio::new(j, p)),
                b_sign: e0,
                kind: if edge { OrbitKind::Central } else { OrbitKind::Abelian },
                orbit_type: if edge { OrbitType::Point } else { OrbitType::Sphere },
            }
        })
        .collect())
}

pub fn lens_histogram(components: &[LensComponent]) -> KindHistogram {
    KindHistogram::of(components.iter().map(|c| c.kind))
}

/// An irreducible representation of a Brieskorn sphere: `h = epsilon I` and
/// `x_i` conjugate to `exp(pi ell_i / a_i)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BrieskornRep {
    pub epsilon: i8,
    pub ell: [i64; 3],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BrieskornEnumeration {
    pub a: [i64; 3],
    pub irreducible: Vec<BrieskornRep>,
    /// The trivial representation.
    pub central: usize,
}

impl BrieskornEnumeration {
    pub fn histogram(&self) -> KindHistogram {
        KindHistogram { central: self.central, abelian: 0, irreducible: self.irreducible.len() }
    }

    /// Explicit representative `[x1, x2, x3, h]` of an irreducible orbit, in the
    /// generators of the Seifert presentation.
    pub fn representative(&self, rep: &BrieskornRep) -> Result<Vec<SU2Element>> {
        let (b0, _) = seifert_invariants(self.a)?;
        let pi = std::f64::consts::PI;
        let t: Vec<f64> = (0..3).map(|i| pi * rep.ell[i] as f64 / self.a[i] as f64).collect();
        let flip = rep.epsilon < 0 && b0 % 2 != 0;
        let t3 = if flip { pi - t[2] } else { t[2] };
        let cos_axis = (t[0].cos() * t[1].cos() - t3.cos()) / (t[0].sin() * t[1].sin());
        let sin_axis = (1.0 - cos_axis * cos_axis).max(0.0).sqrt();
        let x1 = exp_su2(Su2Vector::new(t[0], 0.0, 0.0));
        let x2 = exp_su2(Su2Vector::new(t[1] * cos_axis, t[1] * sin_axis, 0.0));
        let h = SU2Element::central(rep.epsilon);
        // x1 x2 x3 h^b0 = 1
        let x3 = (x1 * x2).inverse() * h.powi(-b0);
        Ok(vec![x1, x2, x3, h])
    }
}

/// Enumerates the irreducible SU(2) representations of the Brieskorn sphere
/// `Sigma(a1, a2, a3)` by rotation numbers.
pub fn enumerate_brieskorn(a: [i64; 3]) -> Result<BrieskornEnumeration> {
    let (b0, b) = seifert_invariants(a)?;
    let mut irreducible = Vec::new();
    for epsilon in [1i8, -1] {
        let parity = |e: i64| if epsilon < 0 && e % 2 != 0 { 1 } else { 0 };
        let flip = parity(b0) == 1;
        for l1 in (1..a[0]).filter(|l| l % 2 == parity(b[0])) {
            for l2 in (1..a[1]).filter(|l| l % 2 == parity(b[1])) {
                for l3 in (1..a[2]).filter(|l| l % 2 == parity(b[2])) {
                    let t1 = Ratio::new(l1, a[0]);
                    let t2 = Ratio::new(l2, a[1]);
                    let t3 = Ratio::new(l3, a[2]);
                    let target = if flip { Ratio::from_integer(1) - t3 } else { t3 };
                    let lower = (t1 - t2).abs();
                    let upper = (t1 + t2).min(Ratio::from_integer(2) - t1 - t2);
                    if lower < target && target < upper {
                        irreducible.push(BrieskornRep { epsilon, ell: [l1, l2, l3] });
                    }
                }
            }
        }
    }
    Ok(BrieskornEnumeration { a, irreducible, central: 1 })
}

/// Casson invariant as half the number of irreducible orbits.
pub fn casson_brieskorn(a: [i64; 3]) -> Result<u64> {
    let n = enumerate_brieskorn(a)?.irreducible.len();
    if n % 2 != 0 {
        return Err(Error::Internal(format!("odd irreducible count {n} for Sigma{a:?}")));
    }
    Ok((n / 2) as u64)
}
