//! Acyclicity, components, completion, rooted partners, leaf classes and
//! tree-child status.

use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::model::{Edge, EdgeId, Network, NodeId, UnionFind};

/// Tree of the undirected-edge forest. Singletons are included.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    /// Members in increasing index order.
    pub nodes: Vec<NodeId>,
    /// Undirected edges inside the component.
    pub edges: Vec<EdgeId>,
}

impl Component {
    pub fn is_trivial(&self) -> bool {
        self.nodes.len() == 1
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    /// All components, ordered by smallest member.
    pub components: Vec<Component>,
    pub component_of: Vec<usize>,
    /// Indices into `components` of the root components, in component order.
    pub root_components: Vec<usize>,
    /// For every component, its nodes with in-degree at least one.
    pub entries: Vec<Vec<NodeId>>,
}

impl Decomposition {
    pub fn root_component(&self, i: usize) -> &Component {
        &self.components[self.root_components[i]]
    }

    pub fn root_component_count(&self) -> usize {
        self.root_components.len()
    }

    pub fn is_root_component(&self, c: usize) -> bool {
        self.entries[c].is_empty()
    }

    /// Whether `v` lies in a root component.
    pub fn in_root_component(&self, v: NodeId) -> bool {
        self.is_root_component(self.component_of[v.0])
    }

    /// Nodes outside every root component.
    pub fn directed_part_nodes(&self) -> Vec<NodeId> {
        (0..self.component_of.len())
            .map(NodeId)
            .filter(|&v| !self.in_root_component(v))
            .collect()
    }

    /// Edges with no endpoint inside a root component's undirected tree.
    pub fn directed_part_edges(&self, n: &Network) -> Vec<EdgeId> {
        n.edge_ids()
            .filter(|&e| {
                let edge = n.edge(e);
                edge.is_directed() || !self.in_root_component(edge.u)
            })
            .collect()
    }
}

/// A chosen node per root component, aligned with
/// [`Decomposition::root_components`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RootChoice(pub Vec<NodeId>);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeafClassification {
    pub rooted_leaves: Vec<NodeId>,
    pub ambiguous_leaves: Vec<NodeId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TreeChildStatus {
    Strong,
    /// Each witness is (root component index, the node that must be the root).
    WeakOnly { witnesses: Vec<(usize, NodeId)> },
    NotTreeChild,
}

impl TreeChildStatus {
    pub fn name(&self) -> &'static str {
        match self {
            TreeChildStatus::Strong => "strong",
            TreeChildStatus::WeakOnly { .. } => "weak-only",
            TreeChildStatus::NotTreeChild => "not-tree-child",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ResolvePolicy {
    AllLeaves,
    RootAt(NodeId),
}

/// Undirected edges form a forest and the contraction is a DAG.
pub fn is_acyclic(n: &Network) -> bool {
    let mut uf = UnionFind::new(n.node_count());
    for e in n.edges() {
        if !e.is_directed() && !uf.union(e.u.0, e.v.0) {
            return false;
        }
    }
    n.contraction().is_acyclic()
}

pub fn decompose(n: &Network) -> Result<Decomposition> {
    if !is_acyclic(n) {
        return Err(Error::Cyclic("undirected cycle or directed cycle after contraction".into()));
    }
    Ok(decompose_unchecked(n))
}

pub(crate) fn decompose_unchecked(n: &Network) -> Decomposition {
    let c = n.contraction();
    let mut components: Vec<Component> =
        (0..c.node_count).map(|_| Component { nodes: Vec::new(), edges: Vec::new() }).collect();
    for v in n.nodes() {
        components[c.map[v.0]].nodes.push(v);
    }
    for (i, e) in n.edges().iter().enumerate() {
        if !e.is_directed() {
            components[c.map[e.u.0]].edges.push(EdgeId(i));
        }
    }
    let mut entries = vec![Vec::new(); c.node_count];
    for v in n.nodes() {
        if n.indeg(v) > 0 {
            entries[c.map[v.0]].push(v);
        }
    }
    let root_components = (0..c.node_count).filter(|&i| entries[i].is_empty()).collect();
    Decomposition { components, component_of: c.map, root_components, entries }
}

/// Acyclic and every undirected tree has at most one node of positive in-degree.
pub fn is_network(n: &Network) -> bool {
    match decompose(n) {
        Ok(d) => d.entries.iter().all(|e| e.len() <= 1),
        Err(_) => false,
    }
}

/// Decomposition of a network, or a diagnostic naming the offending part.
pub fn network_decomposition(n: &Network) -> Result<Decomposition> {
    let d = decompose(n).map_err(|_| Error::NotANetwork("graph is not acyclic".into()))?;
    for (i, entries) in d.entries.iter().enumerate() {
        if entries.len() > 1 {
            let names: Vec<&str> = entries.iter().map(|&v| n.name(v)).collect();
            return Err(Error::NotANetwork(format!(
                "no rooted partner: component containing {} has {} nodes with incoming edges ({})",
                n.name(d.components[i].nodes[0]),
                entries.len(),
                names.join(", ")
            )));
        }
    }
    Ok(d)
}

/// Direct every undirected edge of `comp` away from `from`.
fn orient_away(n: &Network, edges: &mut [Edge], comp: &Component, from: NodeId) {
    let mut seen = vec![false; n.node_count()];
    seen[from.0] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(x) = queue.pop_front() {
        for (e, y) in n.undirected_neighbors(x) {
            if !seen[y.0] {
                seen[y.0] = true;
                edges[e.0] = Edge::directed(x, y);
                queue.push_back(y);
            }
        }
    }
    debug_assert!(comp.nodes.iter().all(|v| seen[v.0]));
}

/// Direct each non-root undirected tree away from its entry node.
pub fn completion(n: &Network) -> Result<Network> {
    let d = network_decomposition(n)?;
    Ok(complete_with(n, &d))
}

pub(crate) fn complete_with(n: &Network, d: &Decomposition) -> Network {
    let mut edges = n.edges().to_vec();
    for (i, comp) in d.components.iter().enumerate() {
        if let Some(&entry) = d.entries[i].first() {
            if !comp.edges.is_empty() {
                orient_away(n, &mut edges, comp, entry);
            }
        }
    }
    n.with_edges(edges)
}

pub fn is_complete(n: &Network) -> Result<bool> {
    let d = network_decomposition(n)?;
    Ok(n.edges().iter().all(|e| e.is_directed() || d.in_root_component(e.u)))
}

/// The fully directed rooted partner for `choice`.
pub fn rooted_partner(n: &Network, choice: &RootChoice) -> Result<Network> {
    let d = network_decomposition(n)?;
    rooted_partner_with(n, &d, choice)
}

pub(crate) fn rooted_partner_with(n: &Network, d: &Decomposition, choice: &RootChoice) -> Result<Network> {
    if choice.0.len() != d.root_components.len() {
        return Err(Error::InvalidRootChoice(format!(
            "{} nodes given for {} root components",
            choice.0.len(),
            d.root_components.len()
        )));
    }
    let mut edges = n.edges().to_vec();
    for (i, comp) in d.components.iter().enumerate() {
        if let Some(&entry) = d.entries[i].first() {
            if !comp.edges.is_empty() {
                orient_away(n, &mut edges, comp, entry);
            }
        }
    }
    for (k, &ci) in d.root_components.iter().enumerate() {
        let r = choice.0[k];
        if !n.contains(r) || d.component_of[r.0] != ci {
            return Err(Error::InvalidRootChoice(format!(
                "node {} is not in root component {}",
                if n.contains(r) { n.name(r).to_string() } else { r.to_string() },
                k
            )));
        }
        let comp = &d.components[ci];
        if !comp.edges.is_empty() {
            orient_away(n, &mut edges, comp, r);
        }
    }
    Ok(n.with_edges(edges))
}

/// Number of rooted partners, the product of root component sizes.
pub fn partner_count(n: &Network) -> Result<u128> {
    let d = network_decomposition(n)?;
    d.root_components.iter().try_fold(1u128, |acc, &c| {
        acc.checked_mul(d.components[c].nodes.len() as u128).ok_or(Error::Overflow)
    })
}

/// Every root choice, in lexicographic order over (component, member index).
pub fn enumerate_root_choices(n: &Network) -> Result<Vec<RootChoice>> {
    let d = network_decomposition(n)?;
    Ok(root_choices_of(&d))
}

pub(crate) fn root_choices_of(d: &Decomposition) -> Vec<RootChoice> {
    let comps: Vec<&Component> = d.root_components.iter().map(|&c| &d.components[c]).collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; comps.len()];
    loop {
        out.push(RootChoice(comps.iter().zip(&idx).map(|(c, &i)| c.nodes[i]).collect()));
        let mut k = comps.len();
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < comps[k].nodes.len() {
                break;
            }
            idx[k] = 0;
        }
    }
}

/// Rooted leaves have no children in the completion and no undirected edge.
/// Ambiguous leaves sit in a root component with one undirected edge and no
/// directed edge.
pub fn classify_leaves(n: &Network) -> Result<LeafClassification> {
    let d = network_decomposition(n)?;
    let c = complete_with(n, &d);
    let mut rooted = Vec::new();
    let mut ambiguous = Vec::new();
    for v in c.nodes() {
        let deg = c.degrees_of(v);
        if deg.outdeg == 0 && deg.undirected == 0 {
            rooted.push(v);
        } else if deg.undirected == 1 && deg.outdeg == 0 && deg.indeg == 0 && d.in_root_component(v) {
            ambiguous.push(v);
        }
    }
    Ok(LeafClassification { rooted_leaves: rooted, ambiguous_leaves: ambiguous })
}

/// Turn ambiguous leaves into rooted leaves by directing their edges.
pub fn resolve_ambiguous_leaves(n: &Network, policy: &ResolvePolicy) -> Result<Network> {
    let leaves = classify_leaves(n)?;
    let mut is_amb = vec![false; n.node_count()];
    for &v in &leaves.ambiguous_leaves {
        is_amb[v.0] = true;
    }
    let mut edges = n.edges().to_vec();
    let mut fixed = vec![false; n.edge_count()];
    if let ResolvePolicy::RootAt(x) = policy {
        if !n.contains(*x) || !is_amb[x.0] {
            return Err(Error::NotAmbiguousLeaf(*x));
        }
        let (e, y) = n.undirected_neighbors(*x).next().expect("ambiguous leaf has an undirected edge");
        edges[e.0] = Edge::directed(*x, y);
        fixed[e.0] = true;
        // The rest of x's tree now hangs below x, so its leaves are no longer ambiguous.
        let d = decompose_unchecked(n);
        let comp = d.component_of[x.0];
        for v in &d.components[comp].nodes {
            is_amb[v.0] = false;
        }
    }
    for &v in &leaves.ambiguous_leaves {
        if !is_amb[v.0] {
            continue;
        }
        let (e, y) = n.undirected_neighbors(v).next().expect("ambiguous leaf has an undirected edge");
        if fixed[e.0] {
            continue;
        }
        // Two ambiguous leaves joined by a lone edge: direct from the lower index.
        let (p, c) = if is_amb[y.0] && v < y { (v, y) } else { (y, v) };
        edges[e.0] = Edge::directed(p, c);
        fixed[e.0] = true;
    }
    Ok(n.with_edges(edges))
}

/// Tree-child status from one pass over the completion.
pub fn tree_child_classify(n: &Network) -> Result<TreeChildStatus> {
    let d = network_decomposition(n)?;
    let c = complete_with(n, &d);
    let indeg: Vec<usize> = c.nodes().map(|v| c.indeg(v)).collect();
    let has_tree_child = |v: NodeId| c.children(v).any(|(_, w)| indeg[w.0] <= 1);

    for v in c.nodes() {
        let comp = d.component_of[v.0];
        let in_w0_or_dp = !d.is_root_component(comp) || d.components[comp].is_trivial();
        if in_w0_or_dp {
            let deg = c.degrees_of(v);
            let leaf = deg.outdeg == 0 && deg.undirected == 0;
            if !leaf && !has_tree_child(v) {
                return Ok(TreeChildStatus::NotTreeChild);
            }
        }
    }

    let mut witnesses = Vec::new();
    for (k, &ci) in d.root_components.iter().enumerate() {
        let comp = &d.components[ci];
        if comp.is_trivial() {
            continue;
        }
        let w1: Vec<NodeId> = comp
            .nodes
            .iter()
            .copied()
            .filter(|&v| {
                let deg = c.degrees_of(v);
                deg.undirected == 1 && deg.outdeg > 0 && !has_tree_child(v)
            })
            .collect();
        match w1.len() {
            0 => {}
            1 => witnesses.push((k, w1[0])),
            _ => return Ok(TreeChildStatus::NotTreeChild),
        }
    }
    if witnesses.is_empty() {
        Ok(TreeChildStatus::Strong)
    } else {
        Ok(TreeChildStatus::WeakOnly { witnesses })
    }
}

/// Labels biject onto the rooted leaves and there are no ambiguous leaves.
pub fn check_labeled(n: &Network) -> Result<()> {
    let leaves = classify_leaves(n)?;
    if let Some(&v) = leaves.ambiguous_leaves.first() {
        return Err(Error::NotLabeled(format!("ambiguous leaf {}", n.name(v))));
    }
    let mut is_leaf = vec![false; n.node_count()];
    for &v in &leaves.rooted_leaves {
        is_leaf[v.0] = true;
        if n.label_index(v).is_none() {
            return Err(Error::NotLabeled(format!("leaf {} has no label", n.name(v))));
        }
    }
    for v in n.nodes() {
        if n.label_index(v).is_some() && !is_leaf[v.0] {
            return Err(Error::NotLabeled(format!("labeled node {} is not a leaf", n.name(v))));
        }
    }
    for (i, l) in n.labels().iter().enumerate() {
        if n.node_with_label(i).is_none() {
            return Err(Error::NotLabeled(format!("label {l} is not attached to a node")));
        }
    }
    Ok(())
}

pub fn is_labeled_network(n: &Network) -> bool {
    check_labeled(n).is_ok()
}

/// Tree node with a single edge that points out, or with exactly two edges
/// not both outgoing.
pub fn elementary_nodes(n: &Network) -> Vec<NodeId> {
    n.nodes()
        .filter(|&v| {
            let d = n.degrees_of(v);
            let deg = d.total();
            d.indeg <= 1 && ((d.outdeg == 1 && deg == 1) || (deg == 2 && d.outdeg < 2))
        })
        .collect()
}
