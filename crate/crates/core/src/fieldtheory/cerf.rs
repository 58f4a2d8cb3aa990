use serde::{Deserialize, Serialize};

use super::{class_index, CobordismChain, Curve, Elementary, Piece};
use crate::error::{Error, Result};
use crate::grpres::{Letter, Word};

/// Local modifications of a chain that leave the composite unchanged.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "move", rename_all = "snake_case")]
pub enum CerfMove {
    /// Replace the conjugator of the two-handle at `position`.
    DiffeoEquivalence { position: usize, conjugator: Word },
    InsertCylinder { position: usize },
    RemoveCylinder { position: usize },
    /// Insert a one-handle followed by a two-handle along the new `alpha`.
    InsertBirthDeath { position: usize },
    RemoveBirthDeath { position: usize },
    /// Exchange the critical points of pieces `position` and `position + 1`.
    CriticalPointSwitch { position: usize },
    /// Give piece `position` the class `class` and compensate on piece `position + 1`.
    ClassSlide { position: usize, class: Vec<u8> },
}

fn not_applicable(msg: impl Into<String>) -> Error {
    Error::MoveNotApplicable(msg.into())
}

fn remap(w: &Word, f: impl Fn(usize) -> Option<usize>) -> Option<Word> {
    let letters: Option<Vec<Letter>> =
        w.letters().iter().map(|l| f(l.generator).map(|g| Letter::new(g, l.exponent))).collect();
    letters.map(Word::from_letters)
}

fn piece_at(chain: &CobordismChain, k: usize) -> Result<&Piece> {
    chain.pieces.get(k).ok_or_else(|| not_applicable(format!("no piece at position {k}")))
}

fn xor(a: &[u8], b: &[u8]) -> Vec<u8> {
    a.iter().zip(b).map(|(x, y)| x ^ y).collect()
}

fn switch(first: &Piece, second: &Piece) -> Result<(Piece, Piece)> {
    let c1 = first.class.clone();
    let c2 = second.class.clone();
    match (&first.cobordism, &second.cobordism) {
        (
            Elementary::TwoHandle { genus: g, pair: i, curve: k1, conjugator: w1 },
            Elementary::TwoHandle { genus: _, pair: j2, curve: k2, conjugator: w2 },
        ) => {
            let (i, j2) = (*i, *j2);
            let j = if j2 >= i { j2 + 1 } else { j2 };
            let lift = |gen: usize| Some(if gen / 2 >= i { gen + 2 } else { gen });
            let w2 = remap(w2, lift).expect("total map");
            let drop_j = |gen: usize| match (gen / 2).cmp(&j) {
                std::cmp::Ordering::Less => Some(gen),
                std::cmp::Ordering::Equal => None,
                std::cmp::Ordering::Greater => Some(gen - 2),
            };
            let w1 = remap(w1, drop_j).ok_or_else(|| not_applicable("first conjugator runs over the other handle"))?;
            let i2 = if i > j { i - 1 } else { i };
            Ok((
                Piece::with_class(Elementary::TwoHandle { genus: *g, pair: j, curve: *k2, conjugator: w2 }, c2),
                Piece::with_class(Elementary::TwoHandle { genus: g - 1, pair: i2, curve: *k1, conjugator: w1 }, c1),
            ))
        }
        (Elementary::OneHandle { genus: g }, Elementary::TwoHandle { pair, curve, conjugator, .. }) => {
            if *pair >= *g {
                return Err(not_applicable("the two-handle meets the new handle"));
            }
            if conjugator.max_generator().is_some_and(|m| m >= 2 * g) {
                return Err(not_applicable("conjugator runs over the new handle"));
            }
            Ok((
                Piece::with_class(
                    Elementary::TwoHandle { genus: *g, pair: *pair, curve: *curve, conjugator: conjugator.clone() },
                    c2,
                ),
                Piece::with_class(Elementary::OneHandle { genus: g - 1 }, c1),
            ))
        }
        (Elementary::TwoHandle { genus: g, pair, curve, conjugator }, Elementary::OneHandle { .. }) => Ok((
            Piece::with_class(Elementary::OneHandle { genus: *g }, c2),
            Piece::with_class(
                Elementary::TwoHandle { genus: g + 1, pair: *pair, curve: *curve, conjugator: conjugator.clone() },
                c1,
            ),
        )),
        (Elementary::OneHandle { .. }, Elementary::OneHandle { .. }) => {
            Err(not_applicable("exchanging two one-handles is not supported"))
        }
        _ => Err(not_applicable("both pieces must be handles")),
    }
}

fn slide(first: &Piece, second: &Piece, new_first: Vec<u8>) -> Result<Vec<u8>> {
    let c1 = first.class_bits()?;
    let c2 = second.class_bits()?;
    if new_first.len() != c1.len() || new_first.iter().any(|&b| b > 1) {
        return Err(Error::InvalidParams(format!("class must have {} entries in {{0, 1}}", c1.len())));
    }
    let diff = xor(&c1, &new_first);
    let trivial = diff.iter().all(|&b| b == 0);
    match (&first.cobordism, &second.cobordism) {
        (Elementary::Cylinder { .. }, Elementary::Cylinder { .. }) => Ok(xor(&c2, &diff)),
        (Elementary::Cylinder { .. }, Elementary::TwoHandle { pair, curve, .. }) => {
            let att = class_index(*pair, *curve);
            let dual = class_index(*pair, curve.dual());
            if diff.iter().enumerate().any(|(k, &b)| b == 1 && k != att && k != dual) {
                return Err(not_applicable("the class change does not lie over the attached handle"));
            }
            Ok(vec![c2[0] ^ diff[dual]])
        }
        (Elementary::OneHandle { genus }, Elementary::Cylinder { .. }) => {
            let mut d = c2.clone();
            d[class_index(*genus, Curve::Alpha)] ^= diff[0];
            Ok(d)
        }
        _ if trivial => Ok(c2),
        _ => Err(not_applicable("a class slide needs a cylinder next to the piece")),
    }
}

pub fn apply_cerf_move(chain: &CobordismChain, mv: &CerfMove) -> Result<CobordismChain> {
    chain.validate()?;
    let mut pieces = chain.pieces.clone();
    match mv {
        CerfMove::DiffeoEquivalence { position, conjugator } => {
            let p = piece_at(chain, *position)?;
            match &p.cobordism {
                Elementary::TwoHandle { genus, pair, curve, .. } => {
                    pieces[*position] = Piece::with_class(
                        Elementary::TwoHandle { genus: *genus, pair: *pair, curve: *curve, conjugator: conjugator.clone() },
                        p.class.clone(),
                    );
                }
                _ => return Err(not_applicable("the piece is not a two-handle")),
            }
        }
        CerfMove::InsertCylinder { position } => {
            if *position > pieces.len() {
                return Err(not_applicable(format!("no position {position}")));
            }
            let genus = chain.genus_at(*position);
            pieces.insert(*position, Piece::new(Elementary::Cylinder { genus }));
        }
        CerfMove::RemoveCylinder { position } => {
            let p = piece_at(chain, *position)?;
            if !p.cobordism.is_cylinder() || p.class.iter().any(|&b| b != 0) {
                return Err(not_applicable("the piece is not a cylinder with trivial class"));
            }
            pieces.remove(*position);
        }
        CerfMove::InsertBirthDeath { position } => {
            if *position > pieces.len() {
                return Err(not_applicable(format!("no position {position}")));
            }
            let g = chain.genus_at(*position);
            pieces.splice(
                *position..*position,
                [
                    Piece::with_class(Elementary::OneHandle { genus: g }, vec![0]),
                    Piece::with_class(
                        Elementary::TwoHandle { genus: g + 1, pair: g, curve: Curve::Alpha, conjugator: Word::empty() },
                        vec![0],
                    ),
                ],
            );
        }
        CerfMove::RemoveBirthDeath { position } => {
            let a = piece_at(chain, *position)?;
            let b = piece_at(chain, position + 1)?;
            let ok = match (&a.cobordism, &b.cobordism) {
                (Elementary::OneHandle { genus }, Elementary::TwoHandle { pair, curve: Curve::Alpha, .. }) => {
                    *pair == *genus && a.class_bits()? == [0] && b.class_bits()? == [0]
                }
                _ => false,
            };
            if !ok {
                return Err(not_applicable("not a cancelling pair of handles with trivial class"));
            }
            pieces.drain(*position..position + 2);
        }
        CerfMove::CriticalPointSwitch { position } => {
            let (a, b) = switch(piece_at(chain, *position)?, piece_at(chain, position + 1)?)?;
            pieces[*position] = a;
            pieces[position + 1] = b;
        }
        CerfMove::ClassSlide { position, class } => {
            let a = piece_at(chain, *position)?;
            let b = piece_at(chain, position + 1)?;
            let new_second = slide(a, b, class.clone())?;
            pieces[*position].class = class.clone();
            pieces[position + 1].class = new_second;
        }
    }
    CobordismChain::new(pieces)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fieldtheory::compose_check;

    fn h(genus: usize, pair: usize, curve: Curve, bit: u8) -> Piece {
        Piece::with_class(Elementary::TwoHandle { genus, pair, curve, conjugator: Word::empty() }, vec![bit])
    }

    fn same(a: &CobordismChain, b: &CobordismChain) -> bool {
        compose_check(a, b, 40, 11).unwrap().equal
    }

    #[test]
    fn two_handles_switch() {
        let c = CobordismChain::new(vec![h(3, 0, Curve::Alpha, 1), h(2, 1, Curve::Beta, 0)]).unwrap();
        let s = apply_cerf_move(&c, &CerfMove::CriticalPointSwitch { position: 0 }).unwrap();
        assert_eq!(s.pieces[0].cobordism, Elementary::TwoHandle { genus: 3, pair: 2, curve: Curve::Beta, conjugator: Word::empty() });
        assert!(same(&c, &s));
    }

    #[test]
    fn one_handles_do_not_switch() {
        let c = CobordismChain::new(vec![
            Piece::new(Elementary::OneHandle { genus: 0 }),
            Piece::new(Elementary::OneHandle { genus: 1 }),
        ])
        .unwrap();
        assert!(matches!(
            apply_cerf_move(&c, &CerfMove::CriticalPointSwitch { position: 0 }),
            Err(Error::MoveNotApplicable(_))
        ));
    }

    #[test]
    fn slide_into_handle() {
        let c = CobordismChain::new(vec![Piece::with_class(Elementary::Cylinder { genus: 1 }, vec![1, 1]), h(1, 0, Curve::Beta, 0)])
            .unwrap();
        let s = apply_cerf_move(&c, &CerfMove::ClassSlide { position: 0, class: vec![0, 0] }).unwrap();
        assert_eq!(s.pieces[1].class, vec![1]);
        assert!(same(&c, &s));
    }

    #[test]
    fn slide_off_one_handle() {
        let c = CobordismChain::new(vec![
            Piece::with_class(Elementary::OneHandle { genus: 1 }, vec![1]),
            Piece::with_class(Elementary::Cylinder { genus: 2 }, vec![0, 1, 0, 0]),
        ])
        .unwrap();
        let s = apply_cerf_move(&c, &CerfMove::ClassSlide { position: 0, class: vec![0] }).unwrap();
        assert_eq!(s.pieces[1].class, vec![0, 1, 1, 0]);
        assert!(same(&c, &s));
    }

    #[test]
    fn birth_death_round_trip() {
        let c = CobordismChain::new(vec![h(2, 1, Curve::Alpha, 1)]).unwrap();
        let b = apply_cerf_move(&c, &CerfMove::InsertBirthDeath { position: 1 }).unwrap();
        assert_eq!(b.len(), 3);
        assert!(same(&c, &b));
        let back = apply_cerf_move(&b, &CerfMove::RemoveBirthDeath { position: 1 }).unwrap();
        assert_eq!(back, c);
        assert!(apply_cerf_move(&c, &CerfMove::RemoveCylinder { position: 0 }).is_err());
    }
}
