//! Path-count vectors and the edge-based representation.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::model::{EdgeId, Network, NodeId};
use crate::structure::{self, Decomposition};

/// Number of directed paths to each label, in label-vector order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MuVector(pub Vec<u64>);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MuOrder {
    Less,
    Greater,
    Equal,
    Incomparable,
}

impl MuVector {
    pub fn zero(n: usize) -> Self {
        MuVector(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        MuVector(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn total(&self) -> u128 {
        self.0.iter().map(|&x| x as u128).sum()
    }

    fn check_len(&self, other: &MuVector) -> Result<()> {
        if self.len() != other.len() {
            Err(Error::LengthMismatch(self.len(), other.len()))
        } else {
            Ok(())
        }
    }

    pub fn checked_add(&self, other: &MuVector) -> Result<MuVector> {
        self.check_len(other)?;
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_add(*b).ok_or(Error::Overflow))
            .collect::<Result<Vec<_>>>()
            .map(MuVector)
    }

    pub fn add_assign(&mut self, other: &MuVector) -> Result<()> {
        self.check_len(other)?;
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a = a.checked_add(*b).ok_or(Error::Overflow)?;
        }
        Ok(())
    }

    /// `self - other`, or `None` when some coordinate would go negative.
    pub fn checked_sub(&self, other: &MuVector) -> Option<MuVector> {
        if self.len() != other.len() {
            return None;
        }
        self.0.iter().zip(&other.0).map(|(a, b)| a.checked_sub(*b)).collect::<Option<Vec<_>>>().map(MuVector)
    }

    pub fn checked_mul(&self, k: u64) -> Result<MuVector> {
        self.0.iter().map(|a| a.checked_mul(k).ok_or(Error::Overflow)).collect::<Result<Vec<_>>>().map(MuVector)
    }

    /// Coordinatewise comparison.
    pub fn compare(&self, other: &MuVector) -> Result<MuOrder> {
        self.check_len(other)?;
        Ok(self.compare_unchecked(other))
    }

    pub(crate) fn compare_unchecked(&self, other: &MuVector) -> MuOrder {
        let (mut le, mut ge) = (true, true);
        for (a, b) in self.0.iter().zip(&other.0) {
            match a.cmp(b) {
                Ordering::Less => ge = false,
                Ordering::Greater => le = false,
                Ordering::Equal => {}
            }
        }
        match (le, ge) {
            (true, true) => MuOrder::Equal,
            (true, false) => MuOrder::Less,
            (false, true) => MuOrder::Greater,
            (false, false) => MuOrder::Incomparable,
        }
    }

    pub fn le(&self, other: &MuVector) -> bool {
        self.len() == other.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

impl fmt::Display for MuVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

pub fn mu_compare(a: &MuVector, b: &MuVector) -> Result<MuOrder> {
    a.compare(b)
}

/// Tags in their canonical order t < h < r.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tag {
    T,
    H,
    R,
}

impl Tag {
    pub fn as_str(self) -> &'static str {
        match self {
            Tag::T => "t",
            Tag::H => "h",
            Tag::R => "r",
        }
    }

    pub fn parse(s: &str) -> Option<Tag> {
        match s {
            "t" => Some(Tag::T),
            "h" => Some(Tag::H),
            "r" => Some(Tag::R),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TaggedMu {
    pub mu: MuVector,
    pub tag: Tag,
}

impl fmt::Display for TaggedMu {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.mu, self.tag.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Shape {
    Root,
    Tree,
    Hybrid,
    Pair,
}

/// One or two tagged vectors, members kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeMuSet(Vec<TaggedMu>);

impl EdgeMuSet {
    pub fn single(mu: MuVector, tag: Tag) -> Self {
        EdgeMuSet(vec![TaggedMu { mu, tag }])
    }

    /// Bidirectional pair. Equal halves still give two members.
    pub fn pair(a: MuVector, b: MuVector) -> Self {
        let mut v = vec![TaggedMu { mu: a, tag: Tag::T }, TaggedMu { mu: b, tag: Tag::T }];
        v.sort();
        EdgeMuSet(v)
    }

    /// Build from arbitrary members, validating the shape.
    pub fn from_members(mut members: Vec<TaggedMu>) -> Result<Self> {
        members.sort();
        match members.len() {
            1 => {}
            2 if members.iter().all(|m| m.tag == Tag::T) => {}
            2 => return Err(Error::MalformedRep("two-member set with a non-t tag".into())),
            k => return Err(Error::MalformedRep(format!("set with {k} members"))),
        }
        if members.len() == 2 && members[0].mu.len() != members[1].mu.len() {
            return Err(Error::LengthMismatch(members[0].mu.len(), members[1].mu.len()));
        }
        Ok(EdgeMuSet(members))
    }

    pub fn members(&self) -> &[TaggedMu] {
        &self.0
    }

    pub fn shape(&self) -> Shape {
        if self.0.len() == 2 {
            return Shape::Pair;
        }
        match self.0[0].tag {
            Tag::T => Shape::Tree,
            Tag::H => Shape::Hybrid,
            Tag::R => Shape::Root,
        }
    }

    /// The vector of a singleton set.
    pub fn single_mu(&self) -> Option<&MuVector> {
        (self.0.len() == 1).then(|| &self.0[0].mu)
    }

    pub fn dim(&self) -> usize {
        self.0[0].mu.len()
    }
}

impl fmt::Display for EdgeMuSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, m) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{m}")?;
        }
        write!(f, "}}")
    }
}

/// Multiset of edge sets in canonical order with multiplicities.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MuRep {
    labels: Vec<String>,
    elements: Vec<(EdgeMuSet, usize)>,
}

impl MuRep {
    pub fn new(labels: Vec<String>, mut sets: Vec<EdgeMuSet>) -> Result<Self> {
        for s in &sets {
            for m in s.members() {
                if m.mu.len() != labels.len() {
                    return Err(Error::LengthMismatch(m.mu.len(), labels.len()));
                }
            }
        }
        sets.sort();
        let mut elements: Vec<(EdgeMuSet, usize)> = Vec::new();
        for s in sets {
            match elements.last_mut() {
                Some((last, c)) if *last == s => *c += 1,
                _ => elements.push((s, 1)),
            }
        }
        Ok(MuRep { labels, elements })
    }

    pub fn from_counts(labels: Vec<String>, counted: Vec<(EdgeMuSet, usize)>) -> Result<Self> {
        let mut sets = Vec::new();
        for (s, c) in counted {
            if c == 0 {
                return Err(Error::MalformedRep("zero count".into()));
            }
            sets.extend(std::iter::repeat_n(s, c));
        }
        MuRep::new(labels, sets)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Distinct sets with their counts, canonical order.
    pub fn elements(&self) -> &[(EdgeMuSet, usize)] {
        &self.elements
    }

    /// Total size counting multiplicity.
    pub fn len(&self) -> usize {
        self.elements.iter().map(|(_, c)| c).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn count(&self, s: &EdgeMuSet) -> usize {
        self.elements.binary_search_by(|(x, _)| x.cmp(s)).map(|i| self.elements[i].1).unwrap_or(0)
    }

    /// Every set repeated by its multiplicity.
    pub fn iter(&self) -> impl Iterator<Item = &EdgeMuSet> + '_ {
        self.elements.iter().flat_map(|(s, c)| std::iter::repeat_n(s, *c))
    }

    pub fn count_shape(&self, shape: Shape) -> usize {
        self.elements.iter().filter(|(s, _)| s.shape() == shape).map(|(_, c)| c).sum()
    }

    /// Multiset difference `self - other`.
    pub fn difference(&self, other: &MuRep) -> MuRep {
        let mut out = Vec::new();
        for (s, c) in &self.elements {
            let d = c.saturating_sub(other.count(s));
            if d > 0 {
                out.push((s.clone(), d));
            }
        }
        MuRep { labels: self.labels.clone(), elements: out }
    }
}

impl fmt::Display for MuRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (s, c) in &self.elements {
            if *c == 1 {
                writeln!(f, "{s}")?;
            } else {
                writeln!(f, "{s} x{c}")?;
            }
        }
        Ok(())
    }
}

/// Topological order of a fully directed graph, parents first.
pub(crate) fn topo_order(g: &Network) -> Result<Vec<NodeId>> {
    let mut indeg: Vec<usize> = vec![0; g.node_count()];
    for e in g.edges() {
        if e.is_directed() {
            indeg[e.v.0] += 1;
        }
    }
    let mut stack: Vec<NodeId> = g.nodes().filter(|v| indeg[v.0] == 0).rev().collect();
    let mut order = Vec::with_capacity(g.node_count());
    while let Some(x) = stack.pop() {
        order.push(x);
        for (_, y) in g.children(x) {
            indeg[y.0] -= 1;
            if indeg[y.0] == 0 {
                stack.push(y);
            }
        }
    }
    if order.len() != g.node_count() {
        return Err(Error::Cyclic("directed cycle".into()));
    }
    Ok(order)
}

/// Sum of child vectors over directed edges only, bottom-up. Undirected
/// edges are ignored, so on a completion this gives the true vectors of the
/// directed part and the directed-child sums of root-component nodes.
fn directed_sums(g: &Network) -> Result<Vec<MuVector>> {
    let n = g.labels().len();
    let order = topo_order(g)?;
    let mut mu: Vec<MuVector> = vec![MuVector::default(); g.node_count()];
    for &v in order.iter().rev() {
        let mut acc = MuVector::zero(n);
        let mut any = false;
        for (_, c) in g.children(v) {
            acc.add_assign(&mu[c.0])?;
            any = true;
        }
        match g.label_index(v) {
            Some(i) if !any => acc = MuVector::unit(n, i),
            Some(_) => {
                return Err(Error::NotLabeled(format!("labeled node {} has children", g.name(v))));
            }
            None => {}
        }
        mu[v.0] = acc;
    }
    Ok(mu)
}

/// Path-count vector of every node of a labeled DAG.
pub fn mu_nodes(g: &Network) -> Result<Vec<MuVector>> {
    if !g.is_fully_directed() {
        return Err(Error::NotDirected);
    }
    for v in g.nodes() {
        if g.label_index(v).is_none() && g.children(v).next().is_none() {
            return Err(Error::NotLabeled(format!("leaf {} has no label", g.name(v))));
        }
    }
    directed_sums(g)
}

/// Directional and root vectors of a network.
#[derive(Clone, Debug)]
pub struct MuAnalysis {
    pub completion: Network,
    pub decomposition: Decomposition,
    /// Vector of every node counting directed edges only.
    pub directed_mu: Vec<MuVector>,
    /// Root vector per root component.
    pub root_mu: Vec<MuVector>,
    /// For each edge: for a root-component edge `uv`, `(mu_d(u,v), mu_d(v,u))`
    /// with `u`, `v` as stored; `None` otherwise.
    pub directional: Vec<Option<(MuVector, MuVector)>>,
}

impl MuAnalysis {
    pub fn labels(&self) -> &[String] {
        self.completion.labels()
    }
}

/// Vectors for every node and root-component edge of an L-network.
pub fn analyze(n: &Network) -> Result<MuAnalysis> {
    structure::check_labeled(n)?;
    let d = structure::network_decomposition(n)?;
    let c = structure::complete_with(n, &d);
    let directed_mu = directed_sums(&c)?;
    let mut root_mu = Vec::with_capacity(d.root_components.len());
    let mut directional: Vec<Option<(MuVector, MuVector)>> = vec![None; c.edge_count()];
    let mut sub: Vec<MuVector> = directed_mu.clone();
    for &ci in &d.root_components {
        let comp = &d.components[ci];
        let root = comp.nodes[0];
        // Root the tree at its first node; post-order accumulates subtree sums.
        let mut order = vec![(root, None::<EdgeId>)];
        let mut parent = vec![None::<NodeId>; 0];
        parent.resize(c.node_count(), None);
        let mut i = 0;
        while i < order.len() {
            let (x, _) = order[i];
            for (e, y) in c.undirected_neighbors(x) {
                if Some(y) != parent[x.0] {
                    parent[y.0] = Some(x);
                    order.push((y, Some(e)));
                }
            }
            i += 1;
        }
        for k in (1..order.len()).rev() {
            let (y, _) = order[k];
            let x = parent[y.0].expect("non-root has a parent");
            let s = sub[y.0].clone();
            sub[x.0].add_assign(&s)?;
        }
        let z = sub[root.0].clone();
        for &(y, e) in &order[1..] {
            let e = e.expect("non-root has a parent edge");
            let down = sub[y.0].clone();
            let up = z.checked_sub(&down).ok_or(Error::Overflow)?;
            let edge = c.edge(e);
            directional[e.0] = Some(if edge.v == y { (down, up) } else { (up, down) });
        }
        root_mu.push(z);
    }
    Ok(MuAnalysis { completion: c, decomposition: d, directed_mu, root_mu, directional })
}

/// `mu_d(u, v)` for the root-component edge between `u` and `v`.
pub fn mu_directional(n: &Network, u: NodeId, v: NodeId) -> Result<MuVector> {
    let a = analyze(n)?;
    directional_from(&a, u, v)
}

pub fn directional_from(a: &MuAnalysis, u: NodeId, v: NodeId) -> Result<MuVector> {
    let c = &a.completion;
    if !c.contains(u) || !c.contains(v) {
        return Err(Error::UnknownNode(format!("{u}/{v}")));
    }
    for (e, y) in c.undirected_neighbors(u) {
        if y == v {
            if let Some((f, b)) = &a.directional[e.0] {
                return Ok(if c.edge(e).u == u { f.clone() } else { b.clone() });
            }
        }
    }
    Err(Error::NotRootComponentEdge(format!("{}-{}", c.name(u), c.name(v))))
}

/// Root vector of root component `k`.
pub fn mu_root(n: &Network, k: usize) -> Result<MuVector> {
    let a = analyze(n)?;
    a.root_mu
        .get(k)
        .cloned()
        .ok_or_else(|| Error::Precondition(format!("no root component with index {k}")))
}

/// Per-edge sets of an L-network, in edge order of the input.
#[derive(Clone, Debug)]
pub struct EdgeSets {
    pub labels: Vec<String>,
    pub edges: Vec<EdgeMuSet>,
    /// One tag-r set per root component.
    pub roots: Vec<EdgeMuSet>,
}

impl EdgeSets {
    pub fn into_rep(self, simplified: bool) -> Result<MuRep> {
        let omit_roots = simplified && self.roots.len() == 1 && {
            // A single nontrivial component shows up as pairs.
            self.edges.iter().any(|s| s.shape() == Shape::Pair)
        };
        let mut sets = self.edges;
        if !omit_roots {
            sets.extend(self.roots);
        }
        MuRep::new(self.labels, sets)
    }
}

pub fn edge_sets(n: &Network) -> Result<EdgeSets> {
    let a = analyze(n)?;
    Ok(edge_sets_from(&a))
}

pub fn edge_sets_from(a: &MuAnalysis) -> EdgeSets {
    let c = &a.completion;
    let indeg: Vec<usize> = c.nodes().map(|v| c.indeg(v)).collect();
    let edges = c
        .edges()
        .iter()
        .enumerate()
        .map(|(i, e)| {
            if e.is_directed() {
                let tag = if indeg[e.v.0] >= 2 { Tag::H } else { Tag::T };
                EdgeMuSet::single(a.directed_mu[e.v.0].clone(), tag)
            } else {
                let (f, b) = a.directional[i].clone().expect("undirected edge of a completion is in a root component");
                EdgeMuSet::pair(f, b)
            }
        })
        .collect();
    let roots = a.root_mu.iter().map(|z| EdgeMuSet::single(z.clone(), Tag::R)).collect();
    EdgeSets { labels: c.labels().to_vec(), edges, roots }
}

/// The edge-based representation.
pub fn mu_edge_rep(n: &Network) -> Result<MuRep> {
    edge_sets(n)?.into_rep(false)
}

/// As [`mu_edge_rep`], dropping the root entry when there is a single
/// nontrivial root component and `simplified` is set.
pub fn mu_edge_rep_with(n: &Network, simplified: bool) -> Result<MuRep> {
    edge_sets(n)?.into_rep(simplified)
}
