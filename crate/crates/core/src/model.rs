//! Semidirected graph data model.
//!
//! A [`Network`] stores nodes interned to dense indices, a list of edges that
//! are either directed (parent, child) or undirected, and the ordered label
//! vector that fixes the coordinates of every mu-vector. Parallel edges are
//! distinct entries of the edge list. Networks never change after
//! [`NetworkBuilder::build`]; transformations return new values.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub usize);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeId(pub usize);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeKind {
    Directed,
    Undirected,
}

/// An edge. For directed edges `u` is the parent and `v` the child.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub u: NodeId,
    pub v: NodeId,
    pub kind: EdgeKind,
}

impl Edge {
    pub fn directed(u: NodeId, v: NodeId) -> Self {
        Edge { u, v, kind: EdgeKind::Directed }
    }

    pub fn undirected(u: NodeId, v: NodeId) -> Self {
        Edge { u, v, kind: EdgeKind::Undirected }
    }

    pub fn is_directed(&self) -> bool {
        self.kind == EdgeKind::Directed
    }

    /// The endpoint that is not `x`.
    pub fn other(&self, x: NodeId) -> NodeId {
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Degrees {
    pub indeg: usize,
    pub outdeg: usize,
    pub undirected: usize,
}

impl Degrees {
    pub fn total(&self) -> usize {
        self.indeg + self.outdeg + self.undirected
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NodeType {
    Tree,
    Hybrid,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EdgeType {
    Tree,
    Hybrid,
}

/// Tree/hybrid classification of every node and edge, indexed by id.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementClasses {
    pub nodes: Vec<NodeType>,
    pub edges: Vec<EdgeType>,
}

impl ElementClasses {
    pub fn hybrid_edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, t)| **t == EdgeType::Hybrid)
            .map(|(i, _)| EdgeId(i))
    }

    pub fn hybrid_nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.nodes
            .iter()
            .enumerate()
            .filter(|(_, t)| **t == NodeType::Hybrid)
            .map(|(i, _)| NodeId(i))
    }
}

/// Quotient of a network under undirected-edge connectivity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contraction {
    /// Number of contracted nodes.
    pub node_count: usize,
    /// Contracted node of every original node.
    pub map: Vec<usize>,
    /// One entry per directed edge of the original network, in edge order:
    /// (original edge, contracted parent, contracted child).
    pub edges: Vec<(EdgeId, usize, usize)>,
}

impl Contraction {
    /// Kahn's algorithm on the contracted multigraph. Self-loops count as cycles.
    pub fn is_acyclic(&self) -> bool {
        let mut indeg = vec![0usize; self.node_count];
        let mut out: Vec<Vec<usize>> = vec![Vec::new(); self.node_count];
        for &(_, a, b) in &self.edges {
            if a == b {
                return false;
            }
            indeg[b] += 1;
            out[a].push(b);
        }
        let mut stack: Vec<usize> = (0..self.node_count).filter(|&i| indeg[i] == 0).collect();
        let mut seen = 0;
        while let Some(x) = stack.pop() {
            seen += 1;
            for &y in &out[x] {
                indeg[y] -= 1;
                if indeg[y] == 0 {
                    stack.push(y);
                }
            }
        }
        seen == self.node_count
    }
}

/// Disjoint-set forest over node indices.
#[derive(Clone, Debug)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), rank: vec![0; n] }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when `a` and `b` were already joined.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
        true
    }
}

/// A semidirected multigraph with an ordered leaf-label vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Network {
    names: Vec<String>,
    name_index: HashMap<String, NodeId>,
    labels: Vec<String>,
    label_of: Vec<Option<usize>>,
    node_of_label: Vec<Option<NodeId>>,
    edges: Vec<Edge>,
    incident: Vec<Vec<EdgeId>>,
}

impl Network {
    pub fn node_count(&self) -> usize {
        self.names.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn nodes(&self) -> impl DoubleEndedIterator<Item = NodeId> + ExactSizeIterator + Clone {
        (0..self.names.len()).map(NodeId)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: EdgeId) -> &Edge {
        &self.edges[e.0]
    }

    pub fn edge_ids(&self) -> impl DoubleEndedIterator<Item = EdgeId> + ExactSizeIterator + Clone {
        (0..self.edges.len()).map(EdgeId)
    }

    /// External identifier of a node.
    pub fn name(&self, v: NodeId) -> &str {
        &self.names[v.0]
    }

    pub fn node_by_name(&self, name: &str) -> Option<NodeId> {
        self.name_index.get(name).copied()
    }

    /// The ordered label vector.
    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label_index(&self, v: NodeId) -> Option<usize> {
        self.label_of[v.0]
    }

    pub fn label(&self, v: NodeId) -> Option<&str> {
        self.label_of[v.0].map(|i| self.labels[i].as_str())
    }

    pub fn node_with_label(&self, i: usize) -> Option<NodeId> {
        self.node_of_label.get(i).copied().flatten()
    }

    pub fn node_with_label_name(&self, label: &str) -> Option<NodeId> {
        let i = self.labels.iter().position(|l| l == label)?;
        self.node_with_label(i)
    }

    pub fn incident(&self, v: NodeId) -> &[EdgeId] {
        &self.incident[v.0]
    }

    pub fn contains(&self, v: NodeId) -> bool {
        v.0 < self.names.len()
    }

    pub fn degrees(&self, v: NodeId) -> Result<Degrees> {
        if !self.contains(v) {
            return Err(Error::UnknownNode(v.to_string()));
        }
        Ok(self.degrees_of(v))
    }

    pub(crate) fn degrees_of(&self, v: NodeId) -> Degrees {
        let mut d = Degrees::default();
        for &e in &self.incident[v.0] {
            let edge = &self.edges[e.0];
            match edge.kind {
                EdgeKind::Undirected => d.undirected += 1,
                EdgeKind::Directed if edge.v == v => d.indeg += 1,
                EdgeKind::Directed => d.outdeg += 1,
            }
        }
        d
    }

    pub fn indeg(&self, v: NodeId) -> usize {
        self.incident[v.0]
            .iter()
            .filter(|e| {
                let edge = &self.edges[e.0];
                edge.is_directed() && edge.v == v
            })
            .count()
    }

    /// Outgoing directed edges with their children, parallel edges repeated.
    pub fn children(&self, v: NodeId) -> impl Iterator<Item = (EdgeId, NodeId)> + '_ {
        self.incident[v.0].iter().filter_map(move |&e| {
            let edge = &self.edges[e.0];
            (edge.is_directed() && edge.u == v).then_some((e, edge.v))
        })
    }

    /// Incoming directed edges with their parents.
    pub fn parents(&self, v: NodeId) -> impl Iterator<Item = (EdgeId, NodeId)> + '_ {
        self.incident[v.0].iter().filter_map(move |&e| {
            let edge = &self.edges[e.0];
            (edge.is_directed() && edge.v == v).then_some((e, edge.u))
        })
    }

    /// Undirected edges at `v` with the neighbor across each.
    pub fn undirected_neighbors(&self, v: NodeId) -> impl Iterator<Item = (EdgeId, NodeId)> + '_ {
        self.incident[v.0].iter().filter_map(move |&e| {
            let edge = &self.edges[e.0];
            (!edge.is_directed()).then_some((e, edge.other(v)))
        })
    }

    pub fn is_fully_directed(&self) -> bool {
        self.edges.iter().all(Edge::is_directed)
    }

    pub fn directed_edge_count(&self) -> usize {
        self.edges.iter().filter(|e| e.is_directed()).count()
    }

    /// A node is hybrid iff its in-degree is at least 2; a directed edge is
    /// hybrid iff its child is. Undirected edges are tree edges.
    pub fn classify_elements(&self) -> ElementClasses {
        let mut indeg = vec![0usize; self.node_count()];
        for e in &self.edges {
            if e.is_directed() {
                indeg[e.v.0] += 1;
            }
        }
        let nodes: Vec<NodeType> = indeg
            .iter()
            .map(|&d| if d >= 2 { NodeType::Hybrid } else { NodeType::Tree })
            .collect();
        let edges = self
            .edges
            .iter()
            .map(|e| {
                if e.is_directed() && nodes[e.v.0] == NodeType::Hybrid {
                    EdgeType::Hybrid
                } else {
                    EdgeType::Tree
                }
            })
            .collect();
        ElementClasses { nodes, edges }
    }

    /// Contract every undirected edge. Contracted nodes are numbered in order
    /// of their smallest member.
    pub fn contraction(&self) -> Contraction {
        let mut uf = UnionFind::new(self.node_count());
        for e in &self.edges {
            if !e.is_directed() {
                uf.union(e.u.0, e.v.0);
            }
        }
        let mut rep_index: HashMap<usize, usize> = HashMap::new();
        let mut map = Vec::with_capacity(self.node_count());
        for v in 0..self.node_count() {
            let r = uf.find(v);
            let next = rep_index.len();
            map.push(*rep_index.entry(r).or_insert(next));
        }
        let edges = self
            .edges
            .iter()
            .enumerate()
            .filter(|(_, e)| e.is_directed())
            .map(|(i, e)| (EdgeId(i), map[e.u.0], map[e.v.0]))
            .collect();
        Contraction { node_count: rep_index.len(), map, edges }
    }

    /// Same nodes and labels with a replacement edge list.
    pub fn with_edges(&self, edges: Vec<Edge>) -> Network {
        let mut incident = vec![Vec::new(); self.node_count()];
        for (i, e) in edges.iter().enumerate() {
            incident[e.u.0].push(EdgeId(i));
            incident[e.v.0].push(EdgeId(i));
        }
        Network {
            names: self.names.clone(),
            name_index: self.name_index.clone(),
            labels: self.labels.clone(),
            label_of: self.label_of.clone(),
            node_of_label: self.node_of_label.clone(),
            edges,
            incident,
        }
    }

    /// Same structure with node `v` renamed to `rename(v)`.
    pub fn renamed(&self, mut rename: impl FnMut(NodeId, &str) -> String) -> Result<Network> {
        let mut b = NetworkBuilder::new(self.labels.iter().cloned())?;
        for v in self.nodes() {
            b.add_node(rename(v, self.name(v)))?;
        }
        for v in self.nodes() {
            if let Some(l) = self.label(v) {
                b.set_label(v, l)?;
            }
        }
        for e in &self.edges {
            b.add_edge(*e)?;
        }
        Ok(b.build())
    }

    /// Rebuild with nodes permuted: new node `i` is old node `order[i]`.
    /// Edges are kept in their original order.
    pub fn permuted(&self, order: &[NodeId]) -> Result<Network> {
        if order.len() != self.node_count() || order.iter().any(|v| !self.contains(*v)) {
            return Err(Error::Precondition("node order is not a permutation".into()));
        }
        let mut new_of = vec![NodeId(0); self.node_count()];
        for (i, &old) in order.iter().enumerate() {
            new_of[old.0] = NodeId(i);
        }
        let mut b = NetworkBuilder::new(self.labels.iter().cloned())?;
        for &old in order {
            b.add_node(self.name(old))?;
        }
        for &old in order {
            if let Some(l) = self.label(old) {
                b.set_label(new_of[old.0], l)?;
            }
        }
        for e in &self.edges {
            b.add_edge(Edge { u: new_of[e.u.0], v: new_of[e.v.0], kind: e.kind })?;
        }
        Ok(b.build())
    }
}

/// Incremental construction of a [`Network`].
#[derive(Clone, Debug)]
pub struct NetworkBuilder {
    names: Vec<String>,
    name_index: HashMap<String, NodeId>,
    labels: Vec<String>,
    label_index: HashMap<String, usize>,
    label_of: Vec<Option<usize>>,
    node_of_label: Vec<Option<NodeId>>,
    edges: Vec<Edge>,
}

impl NetworkBuilder {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut b = NetworkBuilder {
            names: Vec::new(),
            name_index: HashMap::new(),
            labels: Vec::new(),
            label_index: HashMap::new(),
            label_of: Vec::new(),
            node_of_label: Vec::new(),
            edges: Vec::new(),
        };
        for l in labels {
            let l = l.into();
            if b.label_index.contains_key(&l) {
                return Err(Error::DuplicateLabel(l));
            }
            b.label_index.insert(l.clone(), b.labels.len());
            b.labels.push(l);
            b.node_of_label.push(None);
        }
        Ok(b)
    }

    pub fn add_node(&mut self, name: impl Into<String>) -> Result<NodeId> {
        let name = name.into();
        if self.name_index.contains_key(&name) {
            return Err(Error::DuplicateNode(name));
        }
        let id = NodeId(self.names.len());
        self.name_index.insert(name.clone(), id);
        self.names.push(name);
        self.label_of.push(None);
        Ok(id)
    }

    /// Existing node with this name, or a fresh one.
    pub fn node(&mut self, name: &str) -> NodeId {
        match self.name_index.get(name) {
            Some(&id) => id,
            None => self.add_node(name).expect("name checked absent"),
        }
    }

    pub fn lookup(&self, name: &str) -> Option<NodeId> {
        self.name_index.get(name).copied()
    }

    pub fn node_count(&self) -> usize {
        self.names.len()
    }

    pub fn set_label(&mut self, v: NodeId, label: &str) -> Result<()> {
        self.check_node(v)?;
        let &i = self.label_index.get(label).ok_or_else(|| Error::UnknownLabel(label.to_string()))?;
        if self.label_of[v.0].is_some() {
            return Err(Error::NodeAlreadyLabeled { node: self.names[v.0].clone() });
        }
        if self.node_of_label[i].is_some() {
            return Err(Error::LabelReused(label.to_string()));
        }
        self.label_of[v.0] = Some(i);
        self.node_of_label[i] = Some(v);
        Ok(())
    }

    /// Add a node carrying `label`, named after the label.
    pub fn leaf(&mut self, label: &str) -> Result<NodeId> {
        let v = self.add_node(label)?;
        self.set_label(v, label)?;
        Ok(v)
    }

    pub fn add_edge(&mut self, e: Edge) -> Result<EdgeId> {
        self.check_node(e.u)?;
        self.check_node(e.v)?;
        if e.u == e.v {
            return Err(Error::SelfLoop(self.names[e.u.0].clone()));
        }
        self.edges.push(e);
        Ok(EdgeId(self.edges.len() - 1))
    }

    pub fn directed(&mut self, u: NodeId, v: NodeId) -> Result<EdgeId> {
        self.add_edge(Edge::directed(u, v))
    }

    pub fn undirected(&mut self, u: NodeId, v: NodeId) -> Result<EdgeId> {
        self.add_edge(Edge::undirected(u, v))
    }

    fn check_node(&self, v: NodeId) -> Result<()> {
        if v.0 < self.names.len() {
            Ok(())
        } else {
            Err(Error::UnknownNode(v.to_string()))
        }
    }

    pub fn build(self) -> Network {
        let mut incident = vec![Vec::new(); self.names.len()];
        for (i, e) in self.edges.iter().enumerate() {
            incident[e.u.0].push(EdgeId(i));
            incident[e.v.0].push(EdgeId(i));
        }
        Network {
            names: self.names,
            name_index: self.name_index,
            labels: self.labels,
            label_of: self.label_of,
            node_of_label: self.node_of_label,
            edges: self.edges,
            incident,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> Network {
        let mut b = NetworkBuilder::new(["c"]).unwrap();
        let a = b.add_node("a").unwrap();
        let x = b.add_node("b").unwrap();
        let c = b.leaf("c").unwrap();
        b.directed(a, x).unwrap();
        b.directed(x, c).unwrap();
        b.build()
    }

    #[test]
    fn isolated_node_degrees() {
        let mut b = NetworkBuilder::new(Vec::<String>::new()).unwrap();
        let v = b.add_node("v").unwrap();
        let n = b.build();
        assert_eq!(n.degrees(v).unwrap(), Degrees { indeg: 0, outdeg: 0, undirected: 0 });
        assert!(n.degrees(NodeId(7)).is_err());
    }

    #[test]
    fn parallel_edges_counted_and_hybrid() {
        let mut b = NetworkBuilder::new(["v"]).unwrap();
        let u = b.add_node("u").unwrap();
        let v = b.leaf("v").unwrap();
        b.directed(u, v).unwrap();
        b.directed(u, v).unwrap();
        let n = b.build();
        assert_eq!(n.degrees(v).unwrap().indeg, 2);
        assert_eq!(n.degrees(u).unwrap().outdeg, 2);
        let c = n.classify_elements();
        assert_eq!(c.nodes[v.0], NodeType::Hybrid);
        assert_eq!(c.edges, vec![EdgeType::Hybrid, EdgeType::Hybrid]);
    }

    #[test]
    fn directed_path_has_no_hybrids() {
        let n = path3();
        let c = n.classify_elements();
        assert!(c.nodes.iter().all(|t| *t == NodeType::Tree));
        assert!(c.edges.iter().all(|t| *t == EdgeType::Tree));
    }

    #[test]
    fn self_loop_rejected() {
        let mut b = NetworkBuilder::new(Vec::<String>::new()).unwrap();
        let u = b.add_node("u").unwrap();
        assert!(matches!(b.directed(u, u), Err(Error::SelfLoop(_))));
    }

    #[test]
    fn duplicate_labels_rejected() {
        assert!(matches!(NetworkBuilder::new(["a", "a"]), Err(Error::DuplicateLabel(_))));
        let mut b = NetworkBuilder::new(["a"]).unwrap();
        let u = b.add_node("u").unwrap();
        let v = b.add_node("v").unwrap();
        b.set_label(u, "a").unwrap();
        assert!(matches!(b.set_label(v, "a"), Err(Error::LabelReused(_))));
        assert!(matches!(b.set_label(v, "zz"), Err(Error::UnknownLabel(_))));
    }

    #[test]
    fn single_undirected_edge_contracts_to_one_node() {
        let mut b = NetworkBuilder::new(Vec::<String>::new()).unwrap();
        let u = b.add_node("u").unwrap();
        let v = b.add_node("v").unwrap();
        b.undirected(u, v).unwrap();
        let c = b.build().contraction();
        assert_eq!(c.node_count, 1);
        assert!(c.edges.is_empty());
    }

    #[test]
    fn directed_contraction_is_identity() {
        let n = path3();
        let c = n.contraction();
        assert_eq!(c.node_count, 3);
        assert_eq!(c.map, vec![0, 1, 2]);
        assert_eq!(c.edges, vec![(EdgeId(0), 0, 1), (EdgeId(1), 1, 2)]);
        assert!(c.is_acyclic());
    }

    #[test]
    fn degree_sums() {
        let mut b = NetworkBuilder::new(Vec::<String>::new()).unwrap();
        let v: Vec<_> = (0..5).map(|i| b.add_node(format!("n{i}")).unwrap()).collect();
        b.directed(v[0], v[1]).unwrap();
        b.undirected(v[1], v[2]).unwrap();
        b.directed(v[2], v[3]).unwrap();
        b.directed(v[2], v[3]).unwrap();
        b.undirected(v[3], v[4]).unwrap();
        let n = b.build();
        let (mut ins, mut und) = (0, 0);
        for x in n.nodes() {
            let d = n.degrees(x).unwrap();
            ins += d.indeg;
            und += d.undirected;
        }
        assert_eq!(ins, 3);
        assert_eq!(und, 4);
    }
}
