use std::collections::{BTreeMap, BTreeSet};

use super::{PDDiagram, Slot};
use crate::error::{Error, Result};

/// Removes the crossings in `removed` and joins edge labels pairwise as given.
/// Label classes left without any crossing become free loops.
fn splice(d: &PDDiagram, removed: &[usize], joins: &[(usize, usize)]) -> PDDiagram {
    let mut parent: BTreeMap<usize, usize> = BTreeMap::new();
    fn find(p: &mut BTreeMap<usize, usize>, x: usize) -> usize {
        let px = *p.entry(x).or_insert(x);
        if px == x {
            return x;
        }
        let r = find(p, px);
        p.insert(x, r);
        r
    }
    for &(a, b) in joins {
        let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
        if ra != rb {
            parent.insert(ra, rb);
        }
    }
    let gone: BTreeSet<usize> = removed.iter().copied().collect();
    let mut crossings = Vec::new();
    let mut used = BTreeSet::new();
    for (i, c) in d.crossings().iter().enumerate() {
        if gone.contains(&i) {
            continue;
        }
        let nc = c.map(|l| find(&mut parent, l));
        used.extend(nc);
        crossings.push(nc);
    }
    let mut loops = BTreeSet::new();
    for &i in &gone {
        for l in d.crossings()[i] {
            let r = find(&mut parent, l);
            if !used.contains(&r) {
                loops.insert(r);
            }
        }
    }
    PDDiagram::from_raw(crossings, d.free_loops() + loops.len()).relabeled()
}

fn check_index(d: &PDDiagram, i: usize) -> Result<[usize; 4]> {
    d.crossings().get(i).copied().ok_or(Error::Index { index: i, count: d.crossing_count() })
}

/// Smooths crossing `i`: `r = 0` joins positions (0,1) and (2,3), `r = 1` joins (0,3) and (1,2).
pub fn resolve_crossing(d: &PDDiagram, i: usize, r: u8) -> Result<PDDiagram> {
    let c = check_index(d, i)?;
    let joins = match r {
        0 => [(c[0], c[1]), (c[2], c[3])],
        1 => [(c[0], c[3]), (c[1], c[2])],
        _ => return Err(Error::InvalidParams(format!("resolution must be 0 or 1, got {r}"))),
    };
    Ok(splice(d, &[i], &joins))
}

fn through(c: [usize; 4]) -> [(usize, usize); 2] {
    [(c[0], c[2]), (c[1], c[3])]
}

fn is_kink(c: [usize; 4]) -> bool {
    (0..4).any(|p| c[p] == c[(p + 1) % 4])
}

/// First crossing carrying a monogon.
pub fn find_r1(d: &PDDiagram) -> Option<usize> {
    d.crossings().iter().position(|&c| is_kink(c))
}

pub fn remove_r1(d: &PDDiagram, i: usize) -> Result<PDDiagram> {
    let c = check_index(d, i)?;
    if !is_kink(c) {
        return Err(Error::MoveNotApplicable(format!("crossing {i} carries no monogon")));
    }
    Ok(splice(d, &[i], &through(c)))
}

fn r2_pair(d: &PDDiagram, face: &[Slot]) -> Option<(usize, usize)> {
    let [(x, k), (y, _)] = face else { return None };
    if x == y {
        return None;
    }
    let e = d.crossings()[*x][*k];
    let slots = d.slots();
    let (oy, q) = PDDiagram::other_end(&slots, e, (*x, *k));
    (oy == *y && q % 2 == k % 2).then_some((*x.min(y), *x.max(y)))
}

/// First bigon whose two edges stay on the same level at both ends.
pub fn find_r2(d: &PDDiagram) -> Option<(usize, usize)> {
    d.faces().iter().find_map(|f| r2_pair(d, f))
}

pub fn remove_r2(d: &PDDiagram, x: usize, y: usize) -> Result<PDDiagram> {
    check_index(d, x)?;
    check_index(d, y)?;
    let key = (x.min(y), x.max(y));
    if !d.faces().iter().any(|f| r2_pair(d, f) == Some(key)) {
        return Err(Error::MoveNotApplicable(format!("crossings {x} and {y} do not bound a removable bigon")));
    }
    let mut joins = through(d.crossings()[x]).to_vec();
    joins.extend(through(d.crossings()[y]));
    Ok(splice(d, &[x, y], &joins))
}

/// Greedy Reidemeister I/II simplification.
pub fn simplify(d: &PDDiagram) -> PDDiagram {
    let mut cur = d.clone();
    loop {
        if let Some(i) = find_r1(&cur) {
            cur = remove_r1(&cur, i).expect("located monogon");
        } else if let Some((x, y)) = find_r2(&cur) {
            cur = remove_r2(&cur, x, y).expect("located bigon");
        } else {
            return cur;
        }
    }
}

/// Inserts a monogon on edge `label` (or on a free loop when the diagram has no
/// crossings). `variant` in `0..8` picks the side and sign of the kink.
pub fn add_kink(d: &PDDiagram, label: usize, variant: u8) -> Result<PDDiagram> {
    let k = (variant % 4) as usize;
    let m = d.max_label();
    let (a, l, b) = (m + 1, m + 2, m + 3);
    let mut crossings = d.crossings().to_vec();
    let mut loops = d.free_loops();
    let (ea, eb) = if crossings.is_empty() {
        if loops == 0 {
            return Err(Error::MoveNotApplicable("no edge to kink".into()));
        }
        loops -= 1;
        (a, a)
    } else {
        let slots = d.slots();
        let s = slots.get(&label).ok_or_else(|| Error::MoveNotApplicable(format!("no edge labelled {label}")))?;
        let ((x, p), (y, q)) = (s[0], s[1]);
        crossings[x][p] = a;
        crossings[y][q] = b;
        (a, b)
    };
    let (first, second) = if variant / 4 % 2 == 0 { (ea, eb) } else { (eb, ea) };
    let mut c = [0usize; 4];
    c[k] = l;
    c[(k + 1) % 4] = l;
    c[(k + 2) % 4] = first;
    c[(k + 3) % 4] = second;
    crossings.push(c);
    Ok(PDDiagram::from_raw(crossings, loops).relabeled())
}

/// Finger move pushing the edge at position `k` of crossing `x` across the
/// edge at position `k + 1`, creating a removable bigon.
pub fn add_r2(d: &PDDiagram, x: usize, k: usize, e_over: bool) -> Result<PDDiagram> {
    let c = check_index(d, x)?;
    let k = k % 4;
    let (e, f) = (c[k], c[(k + 1) % 4]);
    if e == f {
        return Err(Error::MoveNotApplicable(format!("corner {k} of crossing {x} is a monogon")));
    }
    let slots = d.slots();
    let far_e = PDDiagram::other_end(&slots, e, (x, k));
    let far_f = PDDiagram::other_end(&slots, f, (x, (k + 1) % 4));
    let m = d.max_label();
    let (e1, e2, e3, f1, f2, f3) = (m + 1, m + 2, m + 3, m + 4, m + 5, m + 6);
    let mut crossings = d.crossings().to_vec();
    crossings[x][k] = e1;
    crossings[x][(k + 1) % 4] = f1;
    crossings[far_e.0][far_e.1] = e3;
    crossings[far_f.0][far_f.1] = f3;
    if e_over {
        crossings.push([f1, e1, f2, e2]);
        crossings.push([f2, e3, f3, e2]);
    } else {
        crossings.push([e1, f2, e2, f1]);
        crossings.push([e3, f3, e2, f2]);
    }
    Ok(PDDiagram::from_raw(crossings, d.free_loops()).relabeled())
}

/// Connected sum of two connected diagrams, cutting each at its smallest label.
pub fn connected_sum(a: &PDDiagram, b: &PDDiagram) -> Result<PDDiagram> {
    if !a.is_connected() || !b.is_connected() {
        return Err(Error::DisconnectedDiagram);
    }
    if a.crossing_count() == 0 {
        return Ok(b.clone());
    }
    if b.crossing_count() == 0 {
        return Ok(a.clone());
    }
    let offset = a.max_label();
    let n = a.crossing_count();
    let mut crossings = a.crossings().to_vec();
    crossings.extend(b.crossings().iter().map(|c| c.map(|l| l + offset)));
    let la = *a.crossings().iter().flatten().min().expect("nonempty");
    let lb = *b.crossings().iter().flatten().min().expect("nonempty") + offset;
    let sa = a.slots()[&la].clone();
    let sb: Vec<Slot> = b.slots()[&(lb - offset)].iter().map(|&(x, p)| (x + n, p)).collect();
    let fresh = offset + b.max_label() + 1;
    crossings[sb[0].0][sb[0].1] = la;
    crossings[sa[1].0][sa[1].1] = fresh;
    crossings[sb[1].0][sb[1].1] = fresh;
    let d = PDDiagram::from_raw(crossings, 0).relabeled();
    d.validate()?;
    Ok(d)
}
