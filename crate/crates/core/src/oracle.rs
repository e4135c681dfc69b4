//! Brute-force reference implementations. Exponential by design; every
//! entry point refuses inputs above an explicit bound.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Error, Result};
use crate::model::{EdgeKind, Network, NodeId};
use crate::murep::{self, MuVector};
use crate::structure::{self, TreeChildStatus};

pub const DEFAULT_MU_BOUND: usize = 20;
pub const DEFAULT_PARTNER_BOUND: usize = 4096;
pub const DEFAULT_ISO_BOUND: usize = 12;

fn bound(what: &'static str, value: usize, bound: usize) -> Result<()> {
    if value > bound {
        Err(Error::BoundExceeded { what, value, bound })
    } else {
        Ok(())
    }
}

/// Path counts from `v` by explicit enumeration of every directed path.
pub fn mu_brute(g: &Network, v: NodeId) -> Result<MuVector> {
    mu_brute_bounded(g, v, DEFAULT_MU_BOUND)
}

pub fn mu_brute_bounded(g: &Network, v: NodeId, max_nodes: usize) -> Result<MuVector> {
    bound("nodes", g.node_count(), max_nodes)?;
    if !g.is_fully_directed() {
        return Err(Error::NotDirected);
    }
    if !g.contains(v) {
        return Err(Error::UnknownNode(v.to_string()));
    }
    let mut counts = vec![0u64; g.labels().len()];
    let mut on_path = vec![false; g.node_count()];
    walk(g, v, &mut on_path, &mut counts)?;
    Ok(MuVector(counts))
}

fn walk(g: &Network, x: NodeId, on_path: &mut [bool], counts: &mut [u64]) -> Result<()> {
    if on_path[x.0] {
        return Err(Error::Cyclic("directed cycle".into()));
    }
    if let Some(i) = g.label_index(x) {
        counts[i] = counts[i].checked_add(1).ok_or(Error::Overflow)?;
    }
    on_path[x.0] = true;
    for (_, c) in g.children(x) {
        walk(g, c, on_path, counts)?;
    }
    on_path[x.0] = false;
    Ok(())
}

/// One partner per root choice, in enumeration order.
pub fn enumerate_partners(n: &Network) -> Result<Vec<Network>> {
    enumerate_partners_bounded(n, DEFAULT_PARTNER_BOUND)
}

pub fn enumerate_partners_bounded(n: &Network, max_partners: usize) -> Result<Vec<Network>> {
    let count = structure::partner_count(n)?;
    bound("partners", usize::try_from(count).unwrap_or(usize::MAX), max_partners)?;
    let d = structure::network_decomposition(n)?;
    structure::root_choices_of(&d)
        .iter()
        .map(|rho| structure::rooted_partner_with(n, &d, rho))
        .collect()
}

/// Every non-leaf node of the DAG has a child of in-degree one.
pub fn dag_is_tree_child(g: &Network) -> bool {
    g.nodes().all(|v| {
        let mut kids = g.children(v).peekable();
        kids.peek().is_none() || g.children(v).any(|(_, c)| g.indeg(c) == 1)
    })
}

/// Tree-child status by checking every rooted partner.
pub fn tree_child_brute(n: &Network) -> Result<TreeChildStatus> {
    tree_child_brute_bounded(n, DEFAULT_PARTNER_BOUND)
}

pub fn tree_child_brute_bounded(n: &Network, max_partners: usize) -> Result<TreeChildStatus> {
    let partners = enumerate_partners_bounded(n, max_partners)?;
    let d = structure::network_decomposition(n)?;
    let choices = structure::root_choices_of(&d);
    let good: Vec<&structure::RootChoice> = partners
        .iter()
        .zip(&choices)
        .filter(|(g, _)| dag_is_tree_child(g))
        .map(|(_, c)| c)
        .collect();
    if good.is_empty() {
        return Ok(TreeChildStatus::NotTreeChild);
    }
    if good.len() == partners.len() {
        return Ok(TreeChildStatus::Strong);
    }
    // Components where every tree-child partner uses the same root.
    let mut witnesses = Vec::new();
    for (k, &ci) in d.root_components.iter().enumerate() {
        if d.components[ci].is_trivial() {
            continue;
        }
        let roots: BTreeSet<NodeId> = good.iter().map(|c| c.0[k]).collect();
        if roots.len() == 1 {
            witnesses.push((k, *roots.iter().next().unwrap()));
        }
    }
    Ok(TreeChildStatus::WeakOnly { witnesses })
}

/// Rooted and ambiguous leaves from the partners: leaves in all of them,
/// leaves in some but not all. Node sets are sorted.
pub fn leaves_brute(n: &Network, max_partners: usize) -> Result<(Vec<NodeId>, Vec<NodeId>)> {
    let partners = enumerate_partners_bounded(n, max_partners)?;
    let mut all = Vec::new();
    let mut some = Vec::new();
    for v in n.nodes() {
        let k = partners.iter().filter(|g| g.children(v).next().is_none()).count();
        if k == partners.len() {
            all.push(v);
        } else if k > 0 {
            some.push(v);
        }
    }
    Ok((all, some))
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
struct Signature {
    indeg: usize,
    outdeg: usize,
    undirected: usize,
    label: Option<usize>,
}

struct Adjacency {
    sig: Vec<Signature>,
    /// (u, v, directed?) -> multiplicity; undirected keys use u < v.
    mult: HashMap<(usize, usize, bool), usize>,
    neighbors: Vec<Vec<usize>>,
}

impl Adjacency {
    fn new(n: &Network) -> Self {
        let sig = n
            .nodes()
            .map(|v| {
                let d = n.degrees_of(v);
                Signature { indeg: d.indeg, outdeg: d.outdeg, undirected: d.undirected, label: n.label_index(v) }
            })
            .collect();
        let mut mult = HashMap::new();
        let mut neighbors = vec![Vec::new(); n.node_count()];
        for e in n.edges() {
            let key = match e.kind {
                EdgeKind::Directed => (e.u.0, e.v.0, true),
                EdgeKind::Undirected => (e.u.0.min(e.v.0), e.u.0.max(e.v.0), false),
            };
            *mult.entry(key).or_insert(0) += 1;
            neighbors[e.u.0].push(e.v.0);
            neighbors[e.v.0].push(e.u.0);
        }
        for l in &mut neighbors {
            l.sort_unstable();
            l.dedup();
        }
        Adjacency { sig, mult, neighbors }
    }

    fn count(&self, a: usize, b: usize) -> (usize, usize, usize) {
        let g = |k| self.mult.get(&k).copied().unwrap_or(0);
        (g((a, b, true)), g((b, a, true)), g((a.min(b), a.max(b), false)))
    }
}

/// Label-respecting isomorphism of the completions, by backtracking.
pub fn isomorphic_brute(n1: &Network, n2: &Network) -> Result<bool> {
    isomorphic_brute_bounded(n1, n2, DEFAULT_ISO_BOUND)
}

pub fn isomorphic_brute_bounded(n1: &Network, n2: &Network, max_nodes: usize) -> Result<bool> {
    bound("nodes", n1.node_count().max(n2.node_count()), max_nodes)?;
    if n1.labels() != n2.labels() {
        return Ok(false);
    }
    let c1 = structure::completion(n1)?;
    let c2 = structure::completion(n2)?;
    if c1.node_count() != c2.node_count() || c1.edge_count() != c2.edge_count() {
        return Ok(false);
    }
    let a1 = Adjacency::new(&c1);
    let a2 = Adjacency::new(&c2);
    let mut s1 = a1.sig.clone();
    let mut s2 = a2.sig.clone();
    let key = |s: &Signature| (s.indeg, s.outdeg, s.undirected, s.label);
    s1.sort_by_key(key);
    s2.sort_by_key(key);
    if s1 != s2 {
        return Ok(false);
    }
    let n = c1.node_count();
    let mut map: Vec<Option<usize>> = vec![None; n];
    let mut used = vec![false; n];
    // Labeled nodes are forced.
    for v in c1.nodes() {
        if let Some(l) = c1.label_index(v) {
            let Some(w) = c2.node_with_label(l) else {
                return Ok(false);
            };
            let w = w.0;
            if used[w] {
                return Ok(false);
            }
            map[v.0] = Some(w);
            used[w] = true;
        }
    }
    for v in 0..n {
        if let Some(w) = map[v] {
            if a1.sig[v] != a2.sig[w] || !consistent(&a1, &a2, &map, v, w) {
                return Ok(false);
            }
        }
    }
    Ok(extend(&a1, &a2, &mut map, &mut used))
}

fn consistent(a1: &Adjacency, a2: &Adjacency, map: &[Option<usize>], v: usize, w: usize) -> bool {
    for (x, m) in map.iter().enumerate() {
        if let Some(y) = m {
            if a1.count(v, x) != a2.count(w, *y) {
                return false;
            }
        }
    }
    true
}

fn extend(a1: &Adjacency, a2: &Adjacency, map: &mut Vec<Option<usize>>, used: &mut Vec<bool>) -> bool {
    // Next node: an unmapped neighbor of the mapped set, else any unmapped node.
    let next = (0..map.len())
        .filter(|&v| map[v].is_none())
        .max_by_key(|&v| (a1.neighbors[v].iter().filter(|&&x| map[x].is_some()).count(), std::cmp::Reverse(v)));
    let Some(v) = next else { return true };
    let anchor = a1.neighbors[v].iter().find_map(|&x| map[x]);
    let candidates: Vec<usize> = match anchor {
        Some(y) => a2.neighbors[y].clone(),
        None => (0..map.len()).collect(),
    };
    for w in candidates {
        if used[w] || a1.sig[v] != a2.sig[w] || !consistent(a1, a2, map, v, w) {
            continue;
        }
        map[v] = Some(w);
        used[w] = true;
        if extend(a1, a2, map, used) {
            return true;
        }
        map[v] = None;
        used[w] = false;
    }
    false
}

/// Nontrivial splits of the label set by the edges of a tree. Each split is
/// the side not containing label 0, as a sorted list of label indices.
pub fn bipartitions(t: &Network) -> Result<BTreeSet<Vec<usize>>> {
    let n = t.node_count();
    if t.classify_elements().hybrid_edges().next().is_some() {
        return Err(Error::HasHybridEdges);
    }
    if n == 0 || t.edge_count() != n - 1 {
        return Err(Error::Precondition("not a tree".into()));
    }
    let nl = t.labels().len();
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (i, e) in t.edges().iter().enumerate() {
        adj[e.u.0].push((e.v.0, i));
        adj[e.v.0].push((e.u.0, i));
    }
    // Iterative DFS from node 0.
    let mut parent = vec![usize::MAX; n];
    let mut parent_edge = vec![usize::MAX; n];
    let mut order = vec![0usize];
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut i = 0;
    while i < order.len() {
        let x = order[i];
        for &(y, e) in &adj[x] {
            if !seen[y] {
                seen[y] = true;
                parent[y] = x;
                parent_edge[y] = e;
                order.push(y);
            }
        }
        i += 1;
    }
    if order.len() != n {
        return Err(Error::Precondition("not connected".into()));
    }
    let words = nl.div_ceil(64).max(1);
    let mut below: Vec<Vec<u64>> = vec![vec![0; words]; n];
    for (v, bits) in below.iter_mut().enumerate() {
        if let Some(l) = t.label_index(NodeId(v)) {
            bits[l / 64] |= 1 << (l % 64);
        }
    }
    let mut out = BTreeSet::new();
    for &y in order.iter().skip(1).rev() {
        let side = below[y].clone();
        let p = parent[y];
        for (a, b) in below[p].iter_mut().zip(&side) {
            *a |= b;
        }
        let members: Vec<usize> = (0..nl).filter(|&l| side[l / 64] >> (l % 64) & 1 == 1).collect();
        let k = members.len();
        if k >= 2 && nl - k >= 2 {
            let split = if members.contains(&0) {
                (0..nl).filter(|l| !members.contains(l)).collect()
            } else {
                members
            };
            out.insert(split);
        }
    }
    Ok(out)
}

/// Robinson-Foulds distance between two unrooted trees.
pub fn rf_bipartition(t1: &Network, t2: &Network) -> Result<usize> {
    if t1.labels() != t2.labels() {
        return Err(Error::LabelMismatch);
    }
    let a = bipartitions(t1)?;
    let b = bipartitions(t2)?;
    Ok(a.symmetric_difference(&b).count())
}

/// Size of the multiset symmetric difference of node vectors.
pub fn mu_v_distance(g1: &Network, g2: &Network) -> Result<usize> {
    if g1.labels() != g2.labels() {
        return Err(Error::LabelMismatch);
    }
    let mut a = murep::mu_nodes(g1)?;
    let mut b = murep::mu_nodes(g2)?;
    a.sort();
    b.sort();
    let (mut i, mut j, mut d) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                d += 1;
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                d += 1;
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    Ok(d + (a.len() - i) + (b.len() - j))
}

/// Size bounds for tree-child networks without elementary nodes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BoundsReport {
    pub n: usize,
    pub t: usize,
    pub m: usize,
    pub hybrids: usize,
    pub nodes: usize,
    pub edges: usize,
}

impl BoundsReport {
    pub fn hybrids_ok(&self) -> bool {
        self.hybrids + self.t <= self.n
    }

    pub fn nodes_ok(&self) -> bool {
        self.nodes <= (self.m + 2) * (self.n - self.t.min(self.n)) + self.t
    }

    pub fn edges_ok(&self) -> bool {
        self.edges <= (2 * self.m + 1) * (self.n - self.t.min(self.n))
    }

    pub fn all_ok(&self) -> bool {
        self.hybrids_ok() && self.nodes_ok() && self.edges_ok()
    }
}

/// `m` is the largest hybrid in-degree, taken as at least 1.
pub fn bounds_report(n: &Network) -> Result<BoundsReport> {
    let status = structure::tree_child_classify(n)?;
    if status == TreeChildStatus::NotTreeChild {
        return Err(Error::Precondition("not tree-child".into()));
    }
    structure::check_labeled(n)?;
    if let Some(&v) = structure::elementary_nodes(n).first() {
        return Err(Error::Precondition(format!("elementary node {}", n.name(v))));
    }
    let d = structure::network_decomposition(n)?;
    let indeg: Vec<usize> = n.nodes().map(|v| n.indeg(v)).collect();
    let hybrids = indeg.iter().filter(|&&k| k >= 2).count();
    let m = indeg.iter().copied().filter(|&k| k >= 2).max().unwrap_or(0).max(1);
    Ok(BoundsReport {
        n: n.labels().len(),
        t: d.root_components.len(),
        m,
        hybrids,
        nodes: n.node_count(),
        edges: n.edge_count(),
    })
}

pub fn bounds_check(n: &Network) -> Result<bool> {
    Ok(bounds_report(n)?.all_ok())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::NetworkBuilder;

    /// Ladder of `depth` diamonds above one leaf.
    fn ladder(depth: usize) -> Network {
        let mut b = NetworkBuilder::new(["l"]).unwrap();
        let mut top = b.add_node("t0").unwrap();
        for i in 0..depth {
            let x = b.add_node(format!("x{i}")).unwrap();
            let y = b.add_node(format!("y{i}")).unwrap();
            let w = b.add_node(format!("t{}", i + 1)).unwrap();
            b.directed(top, x).unwrap();
            b.directed(top, y).unwrap();
            b.directed(x, w).unwrap();
            b.directed(y, w).unwrap();
            top = w;
        }
        let l = b.leaf("l").unwrap();
        b.directed(top, l).unwrap();
        b.build()
    }

    #[test]
    fn ladder_counts_powers_of_two() {
        let g = ladder(3);
        assert_eq!(mu_brute(&g, NodeId(0)).unwrap(), MuVector(vec![8]));
        let l = g.node_with_label(0).unwrap();
        assert_eq!(mu_brute(&g, l).unwrap(), MuVector(vec![1]));
        assert!(matches!(mu_brute(&ladder(7), NodeId(0)), Err(Error::BoundExceeded { .. })));
    }

    #[test]
    fn directed_path_is_strong() {
        let mut b = NetworkBuilder::new(["c"]).unwrap();
        let a = b.add_node("a").unwrap();
        let x = b.add_node("b").unwrap();
        let c = b.leaf("c").unwrap();
        b.directed(a, x).unwrap();
        b.directed(x, c).unwrap();
        let n = b.build();
        assert_eq!(tree_child_brute(&n).unwrap(), TreeChildStatus::Strong);
        assert_eq!(enumerate_partners(&n).unwrap(), vec![n]);
    }

    fn quartet(split: [&str; 4]) -> Network {
        let mut b = NetworkBuilder::new(["a", "b", "c", "d"]).unwrap();
        let x = b.add_node("x").unwrap();
        let y = b.add_node("y").unwrap();
        b.undirected(x, y).unwrap();
        for (i, l) in split.iter().enumerate() {
            let v = b.leaf(l).unwrap();
            b.directed(if i < 2 { x } else { y }, v).unwrap();
        }
        b.build()
    }

    #[test]
    fn quartet_rf() {
        let t1 = quartet(["a", "b", "c", "d"]);
        let t2 = quartet(["a", "c", "b", "d"]);
        assert_eq!(rf_bipartition(&t1, &t1).unwrap(), 0);
        assert_eq!(rf_bipartition(&t1, &t2).unwrap(), 2);
    }

    #[test]
    fn relabeled_is_isomorphic() {
        let t = quartet(["a", "b", "c", "d"]);
        let r = t.renamed(|_, s| format!("{s}_")).unwrap();
        let order: Vec<NodeId> = r.nodes().rev().collect();
        let p = r.permuted(&order).unwrap();
        assert!(isomorphic_brute(&t, &p).unwrap());
        assert!(!isomorphic_brute(&t, &quartet(["a", "c", "b", "d"])).unwrap());
    }

    #[test]
    fn rooted_binary_tree_bounds() {
        let mut b = NetworkBuilder::new(["a", "b", "c"]).unwrap();
        let r = b.add_node("r").unwrap();
        let x = b.add_node("x").unwrap();
        let a = b.leaf("a").unwrap();
        let c = b.leaf("b").unwrap();
        let d = b.leaf("c").unwrap();
        b.directed(r, x).unwrap();
        b.directed(r, d).unwrap();
        b.directed(x, a).unwrap();
        b.directed(x, c).unwrap();
        let rep = bounds_report(&b.build()).unwrap();
        assert_eq!(rep.hybrids, 0);
        assert!(rep.all_ok());
    }
}
