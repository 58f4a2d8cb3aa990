//! HSI groups of resolved families, Euler characteristic checks, exact
//! triangle rank arithmetic and minimality certificates.

mod certify;

use serde::{Deserialize, Serialize};

pub use certify::{blow_up, certify_minimal, plumbing_qualifies, MinimalityCert, Triad};

use crate::error::{Error, Result};
use crate::gradedab::GradedAbelianGroup;
use crate::grpres::{h1, Family, ManifoldDesc};
use crate::repvar::casson_brieskorn;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Minimality {
    Certified,
    Unknown,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankBounds {
    pub lower: u64,
    pub upper: Option<u64>,
    /// Upper bound on the rational rank that holds only if the spectral sequence
    /// from the twisted representation variety exists.
    pub conditional_upper: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HSIResult {
    pub manifold: ManifoldDesc,
    /// `None` when only bounds are known.
    pub group: Option<GradedAbelianGroup>,
    pub rank: Option<u64>,
    pub bounds: RankBounds,
    pub chi_abs: u64,
    pub h1_order: u64,
    pub minimal: Minimality,
    pub provenance: Vec<String>,
}

pub const TAG_GENUS_ONE: &str = "genus-one computation";
pub const TAG_EULER: &str = "Euler characteristic equals |H_1|";
pub const TAG_KUNNETH: &str = "Kunneth formula for connected sums";
pub const TAG_CONDITIONAL: &str = "conditional: assumes the spectral sequence from the representation variety";
pub const TAG_CASSON: &str = "Casson invariant from representation counts";

impl HSIResult {
    fn known(manifold: ManifoldDesc, group: GradedAbelianGroup, minimal: Minimality, provenance: Vec<String>) -> Result<Self> {
        let h1 = h1(&manifold)?;
        let rank = group.rank() as u64;
        Ok(HSIResult {
            chi_abs: group.euler_abs(),
            h1_order: h1.order(),
            bounds: RankBounds { lower: rank, upper: Some(rank), conditional_upper: None },
            rank: Some(rank),
            group: Some(group),
            manifold,
            minimal,
            provenance,
        })
    }

    fn bounds_only(manifold: ManifoldDesc, bounds: RankBounds, provenance: Vec<String>) -> Result<Self> {
        let h1 = h1(&manifold)?;
        let chi_abs = if h1.betti == 0 { h1.order() } else { 0 };
        Ok(HSIResult {
            manifold,
            group: None,
            rank: None,
            bounds: RankBounds { lower: bounds.lower.max(chi_abs), ..bounds },
            chi_abs,
            h1_order: h1.order(),
            minimal: Minimality::Unknown,
            provenance,
        })
    }

    /// "even", "odd" or "mixed" for the degrees carrying free summands.
    pub fn parity(&self) -> Option<&'static str> {
        let g = self.group.as_ref()?;
        let (mut even, mut odd) = (false, false);
        for (&d, orders) in &g.degrees {
            if orders.contains(&0) {
                if d % 2 == 0 {
                    even = true;
                } else {
                    odd = true;
                }
            }
        }
        Some(match (even, odd) {
            (true, true) => "mixed",
            (false, true) => "odd",
            _ => "even",
        })
    }
}

fn tags(ts: &[&str]) -> Vec<String> {
    ts.iter().map(|t| t.to_string()).collect()
}

/// HSI of `desc` with the class it carries; falls back to rank bounds when
/// the family is not resolved. Errors only on invalid descriptions.
pub fn hsi(desc: &ManifoldDesc) -> Result<HSIResult> {
    desc.validate()?;
    match &desc.family {
        Family::Lens { p, .. } => {
            HSIResult::known(desc.clone(), GradedAbelianGroup::even_free(*p as usize), Minimality::Certified, tags(&[TAG_GENUS_ONE]))
        }
        Family::S2xS1 => {
            let g = if desc.class_is_zero()? {
                GradedAbelianGroup::free(0, 1).direct_sum(&GradedAbelianGroup::free(3, 1))
            } else {
                GradedAbelianGroup::zero()
            };
            HSIResult::known(desc.clone(), g, Minimality::Unknown, tags(&[TAG_GENUS_ONE]))
        }
        Family::ConnectedSum { summands } => {
            let parts: Vec<HSIResult> = summands.iter().map(hsi).collect::<Result<_>>()?;
            let mut prov = Vec::new();
            for p in &parts {
                for t in &p.provenance {
                    if !prov.contains(t) {
                        prov.push(t.clone());
                    }
                }
            }
            prov.push(TAG_KUNNETH.into());
            if parts.iter().all(|p| p.group.is_some()) {
                let g = parts
                    .iter()
                    .filter_map(|p| p.group.as_ref())
                    .fold(GradedAbelianGroup::free(0, 1), |acc, g| acc.kunneth(g));
                let minimal = if parts.iter().all(|p| p.minimal == Minimality::Certified) {
                    Minimality::Certified
                } else {
                    Minimality::Unknown
                };
                HSIResult::known(desc.clone(), g, minimal, prov)
            } else {
                // free rank of a Kunneth product is the product of free ranks
                let lower = parts.iter().map(|p| p.bounds.lower).product();
                let upper = parts.iter().map(|p| p.bounds.upper).product::<Option<u64>>();
                let conditional_upper = if parts.iter().any(|p| p.bounds.conditional_upper.is_some()) {
                    parts.iter().map(|p| p.bounds.conditional_upper.or(p.bounds.upper)).product::<Option<u64>>()
                } else {
                    None
                };
                HSIResult::bounds_only(desc.clone(), RankBounds { lower, upper, conditional_upper }, prov)
            }
        }
        Family::Brieskorn { a } => {
            let b = brieskorn_bounds(*a)?;
            HSIResult::bounds_only(
                desc.clone(),
                RankBounds { lower: 1, upper: None, conditional_upper: Some(b.rational) },
                tags(&[TAG_EULER, TAG_CASSON, TAG_CONDITIONAL]),
            )
        }
        Family::PlumbingTree { .. } | Family::SurgeryOnTorusKnot { .. } | Family::DoubleCover { .. } => {
            match certify_minimal(desc) {
                Some(cert) => {
                    let mut prov = tags(&[TAG_EULER]);
                    prov.extend(cert.rules().into_iter().map(String::from));
                    HSIResult::known(
                        desc.clone(),
                        GradedAbelianGroup::even_free(cert.h1_order() as usize),
                        Minimality::Certified,
                        prov,
                    )
                }
                None => HSIResult::bounds_only(
                    desc.clone(),
                    RankBounds { lower: 0, upper: None, conditional_upper: None },
                    tags(&[TAG_EULER]),
                ),
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EulerCheck {
    /// `|chi|` of the computed group, or the formula value when the group is unknown.
    pub chi_abs: u64,
    /// `|H_1|`, 0 when infinite.
    pub h1_order: u64,
    pub betti: usize,
    pub from_group: bool,
    pub agrees: bool,
}

pub fn euler_check(desc: &ManifoldDesc) -> Result<EulerCheck> {
    let r = hsi(desc)?;
    let betti = h1(desc)?.betti;
    let from_group = r.group.is_some();
    let chi_abs = r.group.as_ref().map_or(r.chi_abs, GradedAbelianGroup::euler_abs);
    let agrees = if betti == 0 { chi_abs == r.h1_order } else { chi_abs == 0 };
    Ok(EulerCheck { chi_abs, h1_order: r.h1_order, betti, from_group, agrees })
}

/// Range of `rank HSI(Y_alpha)` allowed by an exact triangle with the other two
/// ranks and `|chi(Y_alpha)|`.
pub fn triad_rank_bounds(rank_beta: u64, rank_gamma: u64, chi_alpha: u64) -> Result<(u64, u64)> {
    let hi = rank_beta + rank_gamma;
    if chi_alpha > hi {
        return Err(Error::InconsistentInputs(format!(
            "|chi| = {chi_alpha} exceeds {rank_beta} + {rank_gamma}"
        )));
    }
    if (chi_alpha + hi) % 2 == 1 {
        return Err(Error::InconsistentInputs(format!(
            "rank in a triangle with {rank_beta} and {rank_gamma} has the parity of {hi}, |chi| = {chi_alpha} does not"
        )));
    }
    let lo = chi_alpha.max(rank_beta.abs_diff(rank_gamma));
    Ok((lo, hi))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BrieskornBounds {
    pub lambda: u64,
    pub rational: u64,
    pub integral: u64,
    pub mod2: u64,
    pub conditional: bool,
}

/// `(4 lambda + 1, 4 lambda + 1, 8 lambda + 1)`.
pub fn brieskorn_bounds(a: [i64; 3]) -> Result<BrieskornBounds> {
    let lambda = casson_brieskorn(a)?;
    Ok(BrieskornBounds {
        lambda,
        rational: 4 * lambda + 1,
        integral: 4 * lambda + 1,
        mod2: 8 * lambda + 1,
        conditional: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gradedab::Grading;
    use crate::linkdiag::samples;

    #[test]
    fn lens_spaces_have_rank_p_in_every_class() {
        for p in 1..=12i64 {
            for q in 0..p.max(2) {
                if num_integer::gcd(p, q) != 1 {
                    continue;
                }
                for c in [vec![0, 0], vec![1, 0], vec![0, 1], vec![1, 1]] {
                    let r = hsi(&ManifoldDesc::lens(p, q).with_class(c)).unwrap();
                    assert_eq!(r.rank, Some(p as u64));
                    assert_eq!(r.minimal, Minimality::Certified);
                    assert_eq!(r.parity(), Some("even"));
                    assert!(r.group.unwrap().is_free());
                }
            }
        }
    }

    #[test]
    fn s2xs1_depends_on_the_class() {
        let r = hsi(&ManifoldDesc::s2xs1()).unwrap();
        let g = r.group.unwrap();
        assert_eq!(g.grading, Grading::Exact);
        assert_eq!(g.to_string(), "Z[0] + Z[3]");
        for c in [vec![1, 0], vec![0, 1]] {
            let r = hsi(&ManifoldDesc::s2xs1().with_class(c)).unwrap();
            assert!(r.group.unwrap().is_zero());
        }
        assert!(hsi(&ManifoldDesc::s2xs1().with_class(vec![1, 1])).unwrap().rank == Some(2));
    }

    #[test]
    fn kunneth_for_lens_sum() {
        let d = ManifoldDesc::connected_sum(vec![ManifoldDesc::lens(2, 1), ManifoldDesc::lens(3, 1)]);
        let r = hsi(&d).unwrap();
        assert_eq!(r.rank, Some(6));
        assert!(r.group.as_ref().unwrap().is_free());
        assert_eq!(r.minimal, Minimality::Certified);
        let swapped = ManifoldDesc::connected_sum(vec![ManifoldDesc::lens(3, 1), ManifoldDesc::lens(2, 1)]);
        assert_eq!(hsi(&swapped).unwrap().rank, Some(6));
    }

    #[test]
    fn euler_checks() {
        let e = euler_check(&ManifoldDesc::brieskorn(2, 3, 5)).unwrap();
        assert_eq!((e.chi_abs, e.h1_order), (1, 1));
        let e = euler_check(&ManifoldDesc::s2xs1()).unwrap();
        assert_eq!((e.chi_abs, e.h1_order, e.agrees), (0, 0, true));
        let e = euler_check(&ManifoldDesc::lens(7, 2)).unwrap();
        assert_eq!((e.chi_abs, e.h1_order), (7, 7));
        let d = ManifoldDesc::connected_sum(vec![ManifoldDesc::lens(5, 2), ManifoldDesc::s2xs1()]);
        let e = euler_check(&d).unwrap();
        assert!(e.from_group && e.agrees && e.chi_abs == 0);
    }

    #[test]
    fn triad_bounds() {
        assert_eq!(triad_rank_bounds(1, 2, 3).unwrap(), (3, 3));
        assert_eq!(triad_rank_bounds(2, 2, 0).unwrap(), (0, 4));
        assert_eq!(triad_rank_bounds(0, 3, 1).unwrap(), (3, 3));
        assert!(matches!(triad_rank_bounds(1, 1, 3), Err(Error::InconsistentInputs(_))));
        assert!(matches!(triad_rank_bounds(1, 1, 1), Err(Error::InconsistentInputs(_))));
    }

    #[test]
    fn poincare_sphere_bounds() {
        let b = brieskorn_bounds([2, 3, 5]).unwrap();
        assert_eq!((b.rational, b.integral, b.mod2), (5, 5, 9));
        assert!(b.conditional);
        let r = hsi(&ManifoldDesc::brieskorn(2, 3, 5)).unwrap();
        assert_eq!(r.bounds.conditional_upper, Some(5));
        assert!(r.bounds.lower >= r.chi_abs && r.chi_abs == 1);
        assert!(r.provenance.iter().any(|t| t.starts_with("conditional")));
    }

    #[test]
    fn certified_families_report_rank_h1() {
        let r = hsi(&ManifoldDesc::double_cover(samples::trefoil())).unwrap();
        assert_eq!((r.rank, r.minimal), (Some(3), Minimality::Certified));
        let r = hsi(&ManifoldDesc::plumbing(vec![2, 2, 2], vec![[0, 1], [1, 2]])).unwrap();
        assert_eq!(r.rank, Some(4));
        let r = hsi(&ManifoldDesc::torus_knot_surgery(2, 3, 2)).unwrap();
        assert_eq!((r.rank, r.bounds.lower), (None, 2));
    }
}
