//! Planar link diagrams in PD notation, checkerboard colourings, Goeritz
//! determinants, crossing resolutions and quasi-alternating certificates.
//!
//! A crossing `[a, b, c, d]` lists its four edge labels counterclockwise,
//! starting from an under-strand; positions 0 and 2 are under, 1 and 3 over.
//! Corner `k` of a crossing is the region between positions `k` and `k + 1`.
//! The white checkerboard class is the one containing corner 0 of crossing 0.

mod moves;
mod qa;

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

pub use moves::{
    add_kink, add_r2, connected_sum, find_r1, find_r2, remove_r1, remove_r2, resolve_crossing, simplify,
};
pub use qa::{certify_quasi_alternating, QACertificate, QANode};

use crate::error::{Error, Result};
use crate::grpres::IntMatrix;

/// A slot is `(crossing index, position)`.
pub type Slot = (usize, usize);

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "PdRepr", into = "PdRepr")]
pub struct PDDiagram {
    crossings: Vec<[usize; 4]>,
    /// Closed components that meet no crossing.
    free_loops: usize,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum PdRepr {
    Bare(Vec<[usize; 4]>),
    Full {
        crossings: Vec<[usize; 4]>,
        #[serde(default)]
        free_loops: usize,
    },
}

impl TryFrom<PdRepr> for PDDiagram {
    type Error = Error;

    fn try_from(r: PdRepr) -> Result<Self> {
        match r {
            PdRepr::Bare(c) if c.is_empty() => Ok(PDDiagram::unknot()),
            PdRepr::Bare(c) => PDDiagram::new(c),
            PdRepr::Full { crossings, free_loops } => PDDiagram::with_free_loops(crossings, free_loops),
        }
    }
}

impl From<PDDiagram> for PdRepr {
    fn from(d: PDDiagram) -> Self {
        if d.free_loops == 0 {
            PdRepr::Bare(d.crossings)
        } else {
            PdRepr::Full { crossings: d.crossings, free_loops: d.free_loops }
        }
    }
}

impl std::fmt::Display for PDDiagram {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let xs: Vec<String> = self.crossings.iter().map(|c| format!("X[{},{},{},{}]", c[0], c[1], c[2], c[3])).collect();
        write!(f, "PD[{}]", xs.join(", "))?;
        if self.free_loops > 0 {
            write!(f, " + {} loop(s)", self.free_loops)?;
        }
        Ok(())
    }
}

impl PDDiagram {
    pub fn new(crossings: Vec<[usize; 4]>) -> Result<Self> {
        Self::with_free_loops(crossings, 0)
    }

    pub fn with_free_loops(crossings: Vec<[usize; 4]>, free_loops: usize) -> Result<Self> {
        let d = PDDiagram { crossings, free_loops };
        d.validate()?;
        Ok(d)
    }

    pub(crate) fn from_raw(crossings: Vec<[usize; 4]>, free_loops: usize) -> Self {
        PDDiagram { crossings, free_loops }
    }

    /// The crossingless circle.
    pub fn unknot() -> Self {
        PDDiagram { crossings: Vec::new(), free_loops: 1 }
    }

    pub fn crossings(&self) -> &[[usize; 4]] {
        &self.crossings
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn free_loops(&self) -> usize {
        self.free_loops
    }

    /// Both slots at which each label occurs.
    pub(crate) fn slots(&self) -> BTreeMap<usize, Vec<Slot>> {
        let mut m: BTreeMap<usize, Vec<Slot>> = BTreeMap::new();
        for (x, c) in self.crossings.iter().enumerate() {
            for (p, &l) in c.iter().enumerate() {
                m.entry(l).or_default().push((x, p));
            }
        }
        m
    }

    pub(crate) fn other_end(slots: &BTreeMap<usize, Vec<Slot>>, label: usize, here: Slot) -> Slot {
        let s = &slots[&label];
        if s[0] == here {
            s[1]
        } else {
            s[0]
        }
    }

    pub(crate) fn max_label(&self) -> usize {
        self.crossings.iter().flatten().copied().max().unwrap_or(0)
    }

    pub fn validate(&self) -> Result<()> {
        if self.crossings.is_empty() && self.free_loops == 0 {
            return Err(Error::InvalidDiagram("empty diagram".into()));
        }
        for (l, s) in self.slots() {
            if s.len() != 2 {
                return Err(Error::InvalidDiagram(format!("label {l} appears {} times", s.len())));
            }
        }
        let faces = self.faces().len();
        let n = self.crossings.len();
        if n > 0 && faces != n + 1 + self.graph_components() {
            return Err(Error::InvalidDiagram(format!(
                "PD code is not planar ({faces} faces for {n} crossings)"
            )));
        }
        Ok(())
    }

    /// Connected components of the underlying 4-valent graph.
    pub(crate) fn graph_components(&self) -> usize {
        let n = self.crossings.len();
        let slots = self.slots();
        let mut seen = vec![false; n];
        let mut count = 0;
        for s in 0..n {
            if seen[s] {
                continue;
            }
            count += 1;
            let mut queue = VecDeque::from([s]);
            seen[s] = true;
            while let Some(x) = queue.pop_front() {
                for p in 0..4 {
                    let (y, _) = Self::other_end(&slots, self.crossings[x][p], (x, p));
                    if !seen[y] {
                        seen[y] = true;
                        queue.push_back(y);
                    }
                }
            }
        }
        count
    }

    /// A diagram is connected when its projection is a connected planar curve system.
    pub fn is_connected(&self) -> bool {
        if self.crossings.is_empty() {
            self.free_loops == 1
        } else {
            self.free_loops == 0 && self.graph_components() == 1
        }
    }

    /// Number of link components.
    pub fn components(&self) -> usize {
        let slots = self.slots();
        let mut seen: BTreeSet<usize> = BTreeSet::new();
        let mut count = self.free_loops;
        for (&start, _) in slots.iter() {
            if seen.contains(&start) {
                continue;
            }
            count += 1;
            let mut label = start;
            let mut at = slots[&start][0];
            loop {
                seen.insert(label);
                let (x, p) = Self::other_end(&slots, label, at);
                let q = (p + 2) % 4;
                label = self.crossings[x][q];
                at = (x, q);
                if seen.contains(&label) {
                    break;
                }
            }
        }
        count
    }

    /// Faces as lists of corners `(crossing, k)`.
    pub fn faces(&self) -> Vec<Vec<Slot>> {
        let slots = self.slots();
        if slots.values().any(|s| s.len() != 2) {
            return Vec::new();
        }
        let n = self.crossings.len();
        let mut seen = vec![[false; 4]; n];
        let mut faces = Vec::new();
        for x in 0..n {
            for p in 0..4 {
                if seen[x][p] {
                    continue;
                }
                let mut face = Vec::new();
                let (mut cx, mut cp) = (x, p);
                while !seen[cx][cp] {
                    seen[cx][cp] = true;
                    face.push((cx, cp));
                    let (y, q) = Self::other_end(&slots, self.crossings[cx][cp], (cx, cp));
                    cx = y;
                    cp = (q + 3) % 4;
                }
                faces.push(face);
            }
        }
        faces
    }

    /// Checkerboard colouring: face index of every corner, and which faces are white.
    pub(crate) fn checkerboard(&self) -> Result<(Vec<[usize; 4]>, Vec<bool>)> {
        let faces = self.faces();
        let n = self.crossings.len();
        let mut face_of = vec![[usize::MAX; 4]; n];
        for (f, corners) in faces.iter().enumerate() {
            for &(x, k) in corners {
                face_of[x][k] = f;
            }
        }
        let mut color: Vec<Option<bool>> = vec![None; faces.len()];
        let mut adj: Vec<Vec<(usize, bool)>> = vec![Vec::new(); faces.len()];
        for corners in &face_of {
            for k in 0..4 {
                let (a, b) = (corners[k], corners[(k + 1) % 4]);
                adj[a].push((b, true));
                adj[b].push((a, true));
            }
        }
        for s in 0..faces.len() {
            if color[s].is_some() {
                continue;
            }
            color[s] = Some(face_of[0][0] == s);
            let mut queue = VecDeque::from([s]);
            while let Some(f) = queue.pop_front() {
                let cf = color[f].unwrap();
                for &(g, differ) in &adj[f] {
                    let want = cf ^ differ;
                    match color[g] {
                        None => {
                            color[g] = Some(want);
                            queue.push_back(g);
                        }
                        Some(c) if c != want => {
                            return Err(Error::InvalidDiagram("faces are not two-colourable".into()));
                        }
                        _ => {}
                    }
                }
            }
        }
        Ok((face_of, color.into_iter().map(|c| c.unwrap_or(false)).collect()))
    }

    pub fn white_region_count(&self) -> usize {
        if self.crossings.is_empty() {
            return self.free_loops.min(1);
        }
        match self.checkerboard() {
            Ok((_, white)) => white.iter().filter(|&&w| w).count(),
            Err(_) => 0,
        }
    }

    /// Reduced Goeritz matrix on the white regions (last region deleted).
    pub fn goeritz_matrix(&self) -> Result<IntMatrix> {
        if !self.is_connected() {
            return Err(Error::DisconnectedDiagram);
        }
        if self.crossings.is_empty() {
            return Ok(IntMatrix::zeros(0, 0));
        }
        let (face_of, white) = self.checkerboard()?;
        let mut index = vec![usize::MAX; white.len()];
        let mut w = 0;
        for (f, &is_white) in white.iter().enumerate() {
            if is_white {
                index[f] = w;
                w += 1;
            }
        }
        let mut g = vec![vec![0i64; w]; w];
        for corners in &face_of {
            let (eta, a, b) = if white[corners[0]] {
                (1, index[corners[0]], index[corners[2]])
            } else {
                (-1, index[corners[1]], index[corners[3]])
            };
            if a == b {
                continue;
            }
            g[a][b] -= eta;
            g[b][a] -= eta;
            g[a][a] += eta;
            g[b][b] += eta;
        }
        let reduced: Vec<Vec<i64>> = g.iter().take(w - 1).map(|r| r[..w - 1].to_vec()).collect();
        let mut m = IntMatrix::zeros(w - 1, w - 1);
        for (i, r) in reduced.iter().enumerate() {
            for (j, &x) in r.iter().enumerate() {
                m[(i, j)] = BigInt::from(x);
            }
        }
        Ok(m)
    }

    /// Relabels edges by order of first appearance, starting at 1.
    pub fn relabeled(&self) -> PDDiagram {
        let mut map: BTreeMap<usize, usize> = BTreeMap::new();
        let crossings = self
            .crossings
            .iter()
            .map(|c| {
                c.map(|l| {
                    let next = map.len() + 1;
                    *map.entry(l).or_insert(next)
                })
            })
            .collect();
        PDDiagram { crossings, free_loops: self.free_loops }
    }

    /// A relabelling-invariant key: the least code over traversals from every
    /// start crossing and both admissible rotations of it.
    pub fn canonical_key(&self) -> Vec<usize> {
        let n = self.crossings.len();
        let slots = self.slots();
        let mut best: Option<Vec<usize>> = None;
        for start in 0..n {
            for rot in [0usize, 2] {
                let code = self.traversal_code(&slots, start, rot);
                if best.as_ref().is_none_or(|b| code < *b) {
                    best = Some(code);
                }
            }
        }
        let mut key = vec![self.free_loops];
        key.extend(best.unwrap_or_default());
        key
    }

    fn traversal_code(&self, slots: &BTreeMap<usize, Vec<Slot>>, start: usize, rot: usize) -> Vec<usize> {
        let n = self.crossings.len();
        let mut rotation = vec![usize::MAX; n];
        let mut order = Vec::with_capacity(n);
        let mut labels: BTreeMap<usize, usize> = BTreeMap::new();
        let mut queue = VecDeque::new();
        let mut roots = std::iter::once(start).chain(0..n);
        let mut code = Vec::with_capacity(4 * n);
        loop {
            if queue.is_empty() {
                match roots.find(|&r| rotation[r] == usize::MAX) {
                    Some(r) => {
                        rotation[r] = if r == start { rot } else { 0 };
                        queue.push_back(r);
                    }
                    None => break,
                }
            }
            let x = queue.pop_front().unwrap();
            order.push(x);
            for i in 0..4 {
                let p = (i + rotation[x]) % 4;
                let l = self.crossings[x][p];
                let next = labels.len() + 1;
                code.push(*labels.entry(l).or_insert(next));
                let (y, q) = Self::other_end(slots, l, (x, p));
                if rotation[y] == usize::MAX {
                    // enter y so that the arrival slot keeps its parity
                    rotation[y] = if q % 2 == 0 { q } else { q - 1 };
                    queue.push_back(y);
                }
            }
        }
        code
    }
}

/// `|det|` of the Goeritz matrix; 0 stands for an infinite first homology of the double cover.
pub fn determinant(d: &PDDiagram) -> Result<u64> {
    let g = d.goeritz_matrix()?;
    let det = g.determinant().abs();
    det.to_u64().ok_or_else(|| Error::Internal(format!("determinant {det} overflows u64")))
}

/// Standard diagrams used by tests, examples and benches.
pub mod samples {
    use super::PDDiagram;

    pub fn trefoil() -> PDDiagram {
        PDDiagram::new(vec![[1, 5, 2, 4], [3, 1, 4, 6], [5, 3, 6, 2]]).expect("trefoil")
    }

    pub fn hopf() -> PDDiagram {
        PDDiagram::new(vec![[4, 1, 3, 2], [2, 3, 1, 4]]).expect("hopf")
    }

    pub fn figure_eight() -> PDDiagram {
        PDDiagram::new(vec![[4, 2, 5, 1], [8, 6, 1, 5], [6, 3, 7, 4], [2, 7, 3, 8]]).expect("figure eight")
    }

    /// Standard diagram of the (2, n) torus link.
    pub fn torus_2n(n: usize) -> PDDiagram {
        assert!(n >= 2);
        // closure of the braid sigma_1^n; level i carries edges 2i+1 (left) and 2i+2 (right)
        let m = 2 * n;
        let e = |k: usize| (k - 1) % m + 1;
        let crossings = (0..n).map(|i| [e(2 * i + 1), e(2 * i + 2), e(2 * i + 4), e(2 * i + 3)]).collect();
        PDDiagram::new(crossings).expect("torus link")
    }
}
