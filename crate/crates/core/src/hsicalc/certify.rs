use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grpres::{h1_order, Family, ManifoldDesc};
use crate::linkdiag::{certify_quasi_alternating, determinant, QACertificate};

/// Three manifolds from Dehn fillings of one knot exterior along slopes
/// pairwise meeting once, with their `|H_1|` (0 when infinite).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Triad {
    pub alpha: ManifoldDesc,
    pub beta: ManifoldDesc,
    pub gamma: ManifoldDesc,
    pub orders: [u64; 3],
}

impl Triad {
    pub fn new(alpha: ManifoldDesc, beta: ManifoldDesc, gamma: ManifoldDesc) -> Result<Self> {
        let orders = [h1_order(&alpha)?, h1_order(&beta)?, h1_order(&gamma)?];
        Ok(Triad { alpha, beta, gamma, orders })
    }

    /// One order is the sum of the other two.
    pub fn admissible(&self) -> bool {
        let [a, b, c] = self.orders;
        a == b + c || b == a + c || c == a + b
    }

    /// `|H_1(alpha)| = |H_1(beta)| + |H_1(gamma)|`, the form the induction needs.
    pub fn alpha_is_sum(&self) -> bool {
        let [a, b, c] = self.orders;
        a == b + c
    }
}

/// An induction proving that every class on a manifold gives free HSI of rank `|H_1|`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum MinimalityCert {
    /// The manifold is the lens space `L(p, q)`.
    Lens { manifold: ManifoldDesc, p: i64, q: i64, h1_order: u64 },
    /// Removing a weight-one leaf and lowering its neighbour does not change the manifold.
    BlowDown { manifold: ManifoldDesc, leaf: usize, h1_order: u64, child: Box<MinimalityCert> },
    /// Triads `(G, m_v = k+1), (G, m_v = k), (G - v)` for `k` running up from the base weight.
    WeightInduction {
        manifold: ManifoldDesc,
        leaf: usize,
        base_weight: i64,
        /// `[|H_1(alpha)|, |H_1(beta)|, |H_1(gamma)|]` for every step.
        steps: Vec<[u64; 3]>,
        base: Box<MinimalityCert>,
        complement: Box<MinimalityCert>,
    },
    /// Triads `(S^3_{k+1}(K), S^3_k(K), S^3)` for `k` from the base coefficient up.
    SurgeryInduction { manifold: ManifoldDesc, base_n: i64, steps: Vec<[u64; 3]>, base: Box<MinimalityCert> },
    ConnectedSum { manifold: ManifoldDesc, h1_order: u64, parts: Vec<MinimalityCert> },
    QuasiAlternating { manifold: ManifoldDesc, h1_order: u64, certificate: QACertificate },
}

impl MinimalityCert {
    pub fn manifold(&self) -> &ManifoldDesc {
        match self {
            MinimalityCert::Lens { manifold, .. }
            | MinimalityCert::BlowDown { manifold, .. }
            | MinimalityCert::WeightInduction { manifold, .. }
            | MinimalityCert::SurgeryInduction { manifold, .. }
            | MinimalityCert::ConnectedSum { manifold, .. }
            | MinimalityCert::QuasiAlternating { manifold, .. } => manifold,
        }
    }

    pub fn h1_order(&self) -> u64 {
        match self {
            MinimalityCert::Lens { h1_order, .. }
            | MinimalityCert::BlowDown { h1_order, .. }
            | MinimalityCert::ConnectedSum { h1_order, .. }
            | MinimalityCert::QuasiAlternating { h1_order, .. } => *h1_order,
            MinimalityCert::WeightInduction { steps, base, .. }
            | MinimalityCert::SurgeryInduction { steps, base, .. } => {
                steps.last().map_or(base.h1_order(), |s| s[0])
            }
        }
    }

    /// The fact the node relies on, in words.
    pub fn rule(&self) -> &'static str {
        match self {
            MinimalityCert::Lens { .. } => "genus-one computation for lens spaces",
            MinimalityCert::BlowDown { .. } => "blow-up invariance of the plumbed manifold",
            MinimalityCert::WeightInduction { .. } | MinimalityCert::SurgeryInduction { .. } => {
                "surgery exact triangle with additive |H_1|"
            }
            MinimalityCert::ConnectedSum { .. } => "Kunneth formula for connected sums",
            MinimalityCert::QuasiAlternating { .. } => "quasi-alternating resolution tree",
        }
    }

    /// Rule names used anywhere in the tree, deduplicated in order of first use.
    pub fn rules(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        self.visit(&mut |c| {
            if !out.contains(&c.rule()) {
                out.push(c.rule());
            }
        });
        out
    }

    fn visit(&self, f: &mut impl FnMut(&MinimalityCert)) {
        f(self);
        match self {
            MinimalityCert::BlowDown { child, .. } => child.visit(f),
            MinimalityCert::WeightInduction { base, complement, .. } => {
                base.visit(f);
                complement.visit(f);
            }
            MinimalityCert::SurgeryInduction { base, .. } => base.visit(f),
            MinimalityCert::ConnectedSum { parts, .. } => parts.iter().for_each(|p| p.visit(f)),
            MinimalityCert::Lens { .. } | MinimalityCert::QuasiAlternating { .. } => {}
        }
    }

    /// Recomputes every `|H_1|` and structural claim.
    pub fn verify(&self) -> Result<()> {
        let fail = |m: String| Err(Error::Internal(format!("minimality certificate: {m}")));
        let order = h1_order(self.manifold())?;
        if order != self.h1_order() {
            return fail(format!("stored |H_1| {} but recomputed {order}", self.h1_order()));
        }
        if order == 0 {
            return fail("infinite H_1".into());
        }
        match self {
            MinimalityCert::Lens { manifold, p, q, .. } => {
                if h1_order(&ManifoldDesc::lens(*p, *q))? != order {
                    return fail(format!("{} is not L({p},{q})", manifold.family_name()));
                }
                let ok = match &manifold.family {
                    Family::Lens { p: a, q: b } => (a, b) == (p, q),
                    Family::PlumbingTree { weights, .. } => weights.len() == 1 && (weights[0], 1) == (*p, *q),
                    Family::SurgeryOnTorusKnot { r, s, n } => {
                        let (r, s) = (*r, *s);
                        (r.min(s) == 1 && (*n, 1) == (*p, *q)) || (*n == r * s - 1 && (*p, *q) == moser_lens(r, s))
                    }
                    _ => false,
                };
                if !ok {
                    return fail(format!("no lens identification for {manifold:?}"));
                }
            }
            MinimalityCert::BlowDown { manifold, leaf, child, .. } => {
                let Some(down) = blow_down(manifold, *leaf) else {
                    return fail(format!("vertex {leaf} is not a weight-one leaf"));
                };
                if &down != child.manifold() {
                    return fail("child is not the blow-down".into());
                }
                child.verify()?;
            }
            MinimalityCert::WeightInduction { manifold, leaf, base_weight, steps, base, complement } => {
                let weights = plumbing_weights(manifold)?;
                let target = weights[*leaf];
                if target - base_weight != steps.len() as i64 {
                    return fail("step count does not reach the leaf weight".into());
                }
                if base.manifold() != &with_weight(manifold, *leaf, *base_weight) {
                    return fail("base has the wrong weight".into());
                }
                if complement.manifold() != &delete_vertex(manifold, *leaf) {
                    return fail("complement is not the graph minus the leaf".into());
                }
                let gamma = h1_order(complement.manifold())?;
                let mut prev = h1_order(base.manifold())?;
                for (k, s) in steps.iter().enumerate() {
                    let alpha = h1_order(&with_weight(manifold, *leaf, base_weight + k as i64 + 1))?;
                    if *s != [alpha, prev, gamma] || alpha != prev + gamma {
                        return fail(format!("step {k}: {s:?} against recomputed [{alpha}, {prev}, {gamma}]"));
                    }
                    prev = alpha;
                }
                base.verify()?;
                complement.verify()?;
            }
            MinimalityCert::SurgeryInduction { manifold, base_n, steps, base } => {
                let Family::SurgeryOnTorusKnot { r, s, n } = manifold.family else {
                    return fail("surgery induction on a non-surgery manifold".into());
                };
                if n - base_n != steps.len() as i64 || base.manifold() != &ManifoldDesc::torus_knot_surgery(r, s, *base_n) {
                    return fail("surgery induction does not connect base and target".into());
                }
                let mut prev = h1_order(base.manifold())?;
                for (k, st) in steps.iter().enumerate() {
                    let alpha = h1_order(&ManifoldDesc::torus_knot_surgery(r, s, base_n + k as i64 + 1))?;
                    if *st != [alpha, prev, 1] || alpha != prev + 1 {
                        return fail(format!("step {k}: {st:?}"));
                    }
                    prev = alpha;
                }
                base.verify()?;
            }
            MinimalityCert::ConnectedSum { parts, .. } => {
                let product: u64 = parts.iter().map(MinimalityCert::h1_order).product();
                if product != order {
                    return fail(format!("parts multiply to {product}, not {order}"));
                }
                for p in parts {
                    p.verify()?;
                }
            }
            MinimalityCert::QuasiAlternating { manifold, certificate, .. } => {
                let Family::DoubleCover { pd } = &manifold.family else {
                    return fail("quasi-alternating certificate on a non-cover".into());
                };
                if certificate.root.diagram() != pd || determinant(pd)? != order {
                    return fail("certificate root differs from the branch link".into());
                }
                certificate.verify()?;
            }
        }
        Ok(())
    }
}

/// `S^3_{rs-1}(T(r,s))` is this lens space.
fn moser_lens(r: i64, s: i64) -> (i64, i64) {
    let p = r * s - 1;
    (p, (s * s).rem_euclid(p))
}

fn plumbing_parts(desc: &ManifoldDesc) -> Result<(&[i64], &[[usize; 2]])> {
    match &desc.family {
        Family::PlumbingTree { weights, edges } => Ok((weights, edges)),
        _ => Err(Error::UnsupportedDescription(format!("{} is not a plumbing", desc.family_name()))),
    }
}

fn plumbing_weights(desc: &ManifoldDesc) -> Result<Vec<i64>> {
    plumbing_parts(desc).map(|(w, _)| w.to_vec())
}

fn degrees(n: usize, edges: &[[usize; 2]]) -> Vec<i64> {
    let mut d = vec![0i64; n];
    for &[a, b] in edges {
        d[a] += 1;
        d[b] += 1;
    }
    d
}

fn neighbours(v: usize, edges: &[[usize; 2]]) -> Vec<usize> {
    edges
        .iter()
        .filter_map(|&[a, b]| if a == v { Some(b) } else if b == v { Some(a) } else { None })
        .collect()
}

fn with_weight(desc: &ManifoldDesc, v: usize, w: i64) -> ManifoldDesc {
    let (weights, edges) = plumbing_parts(desc).expect("plumbing");
    let mut weights = weights.to_vec();
    weights[v] = w;
    ManifoldDesc::plumbing(weights, edges.to_vec())
}

fn delete_vertex(desc: &ManifoldDesc, v: usize) -> ManifoldDesc {
    let (weights, edges) = plumbing_parts(desc).expect("plumbing");
    let relabel = |x: usize| if x > v { x - 1 } else { x };
    let weights: Vec<i64> = weights.iter().enumerate().filter(|&(i, _)| i != v).map(|(_, &w)| w).collect();
    let edges = edges
        .iter()
        .filter(|e| !e.contains(&v))
        .map(|&[a, b]| [relabel(a), relabel(b)])
        .collect();
    ManifoldDesc::plumbing(weights, edges)
}

fn blow_down(desc: &ManifoldDesc, leaf: usize) -> Option<ManifoldDesc> {
    let (weights, edges) = plumbing_parts(desc).ok()?;
    let nb = neighbours(leaf, edges);
    if weights.get(leaf) != Some(&1) || nb.len() != 1 {
        return None;
    }
    let lowered = with_weight(desc, nb[0], weights[nb[0]] - 1);
    Some(delete_vertex(&lowered, leaf))
}

/// Blow-up at `vertex`: a new weight-one leaf attached to it, its weight raised by one.
/// The class gains a zero bit for the new vertex.
pub fn blow_up(desc: &ManifoldDesc, vertex: usize) -> Result<ManifoldDesc> {
    desc.validate()?;
    let (weights, edges) = plumbing_parts(desc)?;
    if vertex >= weights.len() {
        return Err(Error::Index { index: vertex, count: weights.len() });
    }
    let mut weights = weights.to_vec();
    let mut edges = edges.to_vec();
    weights[vertex] += 1;
    weights.push(1);
    edges.push([vertex, weights.len() - 1]);
    let mut out = ManifoldDesc::plumbing(weights, edges);
    if !desc.class_c.is_empty() {
        let mut c = desc.class_c.clone();
        c.resize(out.class_len() - 1, 0);
        c.push(0);
        out.class_c = c;
    }
    Ok(out)
}

/// Connected components of a plumbing forest as separate plumbings.
fn components(desc: &ManifoldDesc) -> Vec<ManifoldDesc> {
    let (weights, edges) = plumbing_parts(desc).expect("plumbing");
    let n = weights.len();
    let mut comp = vec![usize::MAX; n];
    let mut count = 0;
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        let mut stack = vec![s];
        comp[s] = count;
        while let Some(v) = stack.pop() {
            for u in neighbours(v, edges) {
                if comp[u] == usize::MAX {
                    comp[u] = count;
                    stack.push(u);
                }
            }
        }
        count += 1;
    }
    (0..count)
        .map(|c| {
            let verts: Vec<usize> = (0..n).filter(|&v| comp[v] == c).collect();
            let index = |v: usize| verts.iter().position(|&x| x == v).unwrap();
            let w = verts.iter().map(|&v| weights[v]).collect();
            let e = edges.iter().filter(|e| comp[e[0]] == c).map(|&[a, b]| [index(a), index(b)]).collect();
            ManifoldDesc::plumbing(w, e)
        })
        .collect()
}

/// `m(v) >= d(v)` everywhere, strict somewhere in every component.
pub fn plumbing_qualifies(desc: &ManifoldDesc) -> bool {
    if desc.validate().is_err() {
        return false;
    }
    let Ok((weights, edges)) = plumbing_parts(desc) else { return false };
    if weights.is_empty() {
        return false;
    }
    let d = degrees(weights.len(), edges);
    if weights.iter().zip(&d).any(|(m, d)| m < d) {
        return false;
    }
    components(desc).iter().all(|c| {
        let (w, e) = plumbing_parts(c).unwrap();
        let d = degrees(w.len(), e);
        w.iter().zip(&d).any(|(m, d)| m > d)
    })
}

fn certify_tree(desc: &ManifoldDesc) -> Result<MinimalityCert> {
    let (weights, edges) = plumbing_parts(desc)?;
    let order = h1_order(desc)?;
    if weights.len() == 1 {
        return Ok(MinimalityCert::Lens { manifold: desc.clone(), p: weights[0], q: 1, h1_order: order });
    }
    let d = degrees(weights.len(), edges);
    let leaves: Vec<usize> = (0..weights.len()).filter(|&v| d[v] == 1).collect();
    if let Some(&leaf) = leaves.iter().find(|&&v| weights[v] == 1) {
        let down = blow_down(desc, leaf).expect("weight-one leaf");
        let child = certify_tree(&down)?;
        return Ok(MinimalityCert::BlowDown { manifold: desc.clone(), leaf, h1_order: order, child: Box::new(child) });
    }
    // Every leaf is strict and there are at least two, so weight 1 at one leaf keeps the hypothesis.
    let leaf = leaves[0];
    let base_weight = 1;
    let base_desc = with_weight(desc, leaf, base_weight);
    let complement_desc = delete_vertex(desc, leaf);
    let base = certify_tree(&base_desc)?;
    let complement = certify_tree(&complement_desc)?;
    let gamma = complement.h1_order();
    let mut prev = base.h1_order();
    let mut steps = Vec::new();
    for k in base_weight..weights[leaf] {
        let alpha = h1_order(&with_weight(desc, leaf, k + 1))?;
        steps.push([alpha, prev, gamma]);
        prev = alpha;
    }
    Ok(MinimalityCert::WeightInduction {
        manifold: desc.clone(),
        leaf,
        base_weight,
        steps,
        base: Box::new(base),
        complement: Box::new(complement),
    })
}

fn certify_plumbing(desc: &ManifoldDesc) -> Option<MinimalityCert> {
    let plain = ManifoldDesc::new(desc.family.clone());
    if !plumbing_qualifies(&plain) {
        return None;
    }
    let parts = components(&plain);
    let cert = if parts.len() == 1 {
        certify_tree(&plain).ok()?
    } else {
        let certs: Vec<MinimalityCert> = parts.iter().map(certify_tree).collect::<Result<_>>().ok()?;
        MinimalityCert::ConnectedSum { manifold: plain, h1_order: h1_order(desc).ok()?, parts: certs }
    };
    Some(cert)
}

fn certify_surgery(r: i64, s: i64, n: i64) -> Option<MinimalityCert> {
    let desc = ManifoldDesc::torus_knot_surgery(r, s, n);
    if r.min(s) == 1 {
        return (n >= 1).then(|| MinimalityCert::Lens { manifold: desc, p: n, q: 1, h1_order: n as u64 });
    }
    let n0 = r * s - 1;
    if n < n0 {
        return None;
    }
    let (p, q) = moser_lens(r, s);
    let base =
        MinimalityCert::Lens { manifold: ManifoldDesc::torus_knot_surgery(r, s, n0), p, q, h1_order: n0 as u64 };
    let steps = (n0..n).map(|k| [(k + 1) as u64, k as u64, 1]).collect();
    Some(MinimalityCert::SurgeryInduction { manifold: desc, base_n: n0, steps, base: Box::new(base) })
}

/// Searches for a minimality certificate; `None` means unknown.
pub fn certify_minimal(desc: &ManifoldDesc) -> Option<MinimalityCert> {
    desc.validate().ok()?;
    let plain = ManifoldDesc::new(desc.family.clone());
    match &desc.family {
        Family::Lens { p, q } => Some(MinimalityCert::Lens { manifold: plain, p: *p, q: *q, h1_order: *p as u64 }),
        Family::PlumbingTree { .. } => certify_plumbing(desc),
        Family::SurgeryOnTorusKnot { r, s, n } => certify_surgery(*r, *s, *n),
        Family::DoubleCover { pd } => {
            let det = determinant(pd).ok()?;
            if det == 0 {
                return None;
            }
            let certificate = certify_quasi_alternating(pd, pd.crossing_count() + 1)?;
            Some(MinimalityCert::QuasiAlternating { manifold: plain, h1_order: det, certificate })
        }
        Family::ConnectedSum { summands } => {
            let parts: Vec<MinimalityCert> = summands.iter().map(certify_minimal).collect::<Option<_>>()?;
            Some(MinimalityCert::ConnectedSum { manifold: plain, h1_order: h1_order(desc).ok()?, parts })
        }
        Family::Brieskorn { .. } | Family::S2xS1 => None,
    }
}
