use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{determinant, resolve_crossing, simplify, PDDiagram};
use crate::error::{Error, Result};

/// One step of a quasi-alternating recursion.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "node", rename_all = "snake_case")]
pub enum QANode {
    /// The diagram simplifies to the crossingless unknot.
    Unknot { diagram: PDDiagram },
    Resolution {
        diagram: PDDiagram,
        /// Greedy Reidemeister simplification of `diagram`; the crossing index refers to it.
        simplified: PDDiagram,
        crossing: usize,
        det: u64,
        det0: u64,
        det1: u64,
        children: Box<[QANode; 2]>,
    },
}

impl QANode {
    pub fn diagram(&self) -> &PDDiagram {
        match self {
            QANode::Unknot { diagram } | QANode::Resolution { diagram, .. } => diagram,
        }
    }

    pub fn size(&self) -> usize {
        match self {
            QANode::Unknot { .. } => 1,
            QANode::Resolution { children, .. } => 1 + children[0].size() + children[1].size(),
        }
    }

    /// Visits every resolution node as `(det, det0, det1)`.
    pub fn additivity_triples(&self) -> Vec<(u64, u64, u64)> {
        let mut out = Vec::new();
        self.collect(&mut out);
        out
    }

    fn collect(&self, out: &mut Vec<(u64, u64, u64)>) {
        if let QANode::Resolution { det, det0, det1, children, .. } = self {
            out.push((*det, *det0, *det1));
            children[0].collect(out);
            children[1].collect(out);
        }
    }

    fn verify(&self) -> Result<()> {
        let fail = |m: String| Err(Error::Internal(format!("certificate check failed: {m}")));
        match self {
            QANode::Unknot { diagram } => {
                let s = simplify(diagram);
                if s.crossing_count() != 0 || s.components() != 1 {
                    return fail(format!("leaf {diagram} does not simplify to the unknot"));
                }
                if determinant(diagram)? != 1 {
                    return fail(format!("leaf {diagram} has determinant other than 1"));
                }
            }
            QANode::Resolution { diagram, simplified, crossing, det, det0, det1, children } => {
                if simplify(diagram) != *simplified {
                    return fail(format!("{simplified} is not the simplification of {diagram}"));
                }
                let recomputed = determinant(diagram)?;
                if recomputed != *det || determinant(simplified)? != *det {
                    return fail(format!("stored det {det}, recomputed {recomputed}"));
                }
                if *det0 == 0 || *det1 == 0 || det0 + det1 != *det {
                    return fail(format!("{det} != {det0} + {det1}"));
                }
                for (r, (child, want)) in children.iter().zip([det0, det1]).enumerate() {
                    let res = resolve_crossing(simplified, *crossing, r as u8)?;
                    if *child.diagram() != res {
                        return fail(format!("child {r} is not the resolution of crossing {crossing}"));
                    }
                    if determinant(&res)? != *want {
                        return fail(format!("resolution {r} determinant differs from {want}"));
                    }
                    child.verify()?;
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QACertificate {
    pub root: QANode,
}

impl QACertificate {
    pub fn det(&self) -> u64 {
        match &self.root {
            QANode::Unknot { .. } => 1,
            QANode::Resolution { det, .. } => *det,
        }
    }

    /// Recomputes every determinant and resolution from scratch.
    pub fn verify(&self) -> Result<()> {
        self.root.verify()
    }
}

fn det_or_zero(d: &PDDiagram) -> u64 {
    determinant(d).unwrap_or(0)
}

struct Search {
    /// Largest remaining depth at which a canonical diagram was shown unreachable.
    failed: HashMap<Vec<usize>, usize>,
    found: HashMap<PDDiagram, QANode>,
}

impl Search {
    fn run(&mut self, d: &PDDiagram, depth: usize) -> Option<QANode> {
        if let Some(n) = self.found.get(d) {
            return Some(n.clone());
        }
        let s = simplify(d);
        if s.crossing_count() == 0 && s.components() == 1 {
            return Some(QANode::Unknot { diagram: d.clone() });
        }
        if depth == 0 || !s.is_connected() {
            return None;
        }
        let key = s.canonical_key();
        if self.failed.get(&key).is_some_and(|&f| f >= depth) {
            return None;
        }
        let det = det_or_zero(&s);
        if det == 0 {
            self.failed.insert(key, usize::MAX);
            return None;
        }
        for i in 0..s.crossing_count() {
            let r0 = resolve_crossing(&s, i, 0).expect("index in range");
            let r1 = resolve_crossing(&s, i, 1).expect("index in range");
            let (d0, d1) = (det_or_zero(&r0), det_or_zero(&r1));
            if d0 == 0 || d1 == 0 || d0 + d1 != det {
                continue;
            }
            let Some(c0) = self.run(&r0, depth - 1) else { continue };
            let Some(c1) = self.run(&r1, depth - 1) else { continue };
            let node = QANode::Resolution {
                diagram: d.clone(),
                simplified: s,
                crossing: i,
                det,
                det0: d0,
                det1: d1,
                children: Box::new([c0, c1]),
            };
            self.found.insert(d.clone(), node.clone());
            return Some(node);
        }
        let e = self.failed.entry(key).or_insert(0);
        *e = (*e).max(depth);
        None
    }
}

/// Depth-first search for a quasi-alternating certificate. `None` means the
/// search gave up, not that the link fails to be quasi-alternating.
pub fn certify_quasi_alternating(d: &PDDiagram, depth_limit: usize) -> Option<QACertificate> {
    let mut search = Search { failed: HashMap::new(), found: HashMap::new() };
    search.run(d, depth_limit).map(|root| QACertificate { root })
}
