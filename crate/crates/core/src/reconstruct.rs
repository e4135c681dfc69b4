//! Rebuilding a complete network from its edge-based representation.

use std::collections::{BTreeMap, HashSet};

use crate::distance;
use crate::error::{Error, Result};
use crate::model::{Edge, EdgeId, Network, NetworkBuilder};
use crate::murep::{self, MuOrder, MuRep, MuVector, Shape, Tag};
use crate::structure::{self, TreeChildStatus};

/// Pair data for one root vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RootGroup {
    pub z: MuVector,
    /// Both members of every pair summing to `z`, sorted, with multiplicity.
    pub m: Vec<MuVector>,
    /// The reference element picked from `m`, if `m` is nonempty.
    pub r: Option<MuVector>,
}

/// Node vectors of a rooted partner, split by origin. Multisets are sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MuGroups {
    pub labels: Vec<String>,
    pub b1: Vec<MuVector>,
    pub b2: Vec<MuVector>,
    pub b3: Vec<MuVector>,
    pub b4: Vec<MuVector>,
    pub roots: Vec<RootGroup>,
}

impl MuGroups {
    /// `b1 + b2 + b3 + b4` as a sorted multiset.
    pub fn all(&self) -> Vec<MuVector> {
        let mut v: Vec<MuVector> =
            self.b1.iter().chain(&self.b2).chain(&self.b3).chain(&self.b4).cloned().collect();
        v.sort();
        v
    }
}

/// Node vectors of a rooted partner, using the smallest element of each
/// `M(z)` as reference.
pub fn muv_from_mue(a: &MuRep) -> Result<MuGroups> {
    muv_from_mue_with(a, |_, m| m[0].clone())
}

/// As [`muv_from_mue`] with a caller-supplied reference choice. `choose`
/// receives `z` and the sorted, nonempty `M(z)`; its answer must be in `M(z)`.
pub fn muv_from_mue_with<F>(a: &MuRep, mut choose: F) -> Result<MuGroups>
where
    F: FnMut(&MuVector, &[MuVector]) -> MuVector,
{
    let n = a.labels().len();
    let mut b1 = Vec::new();
    let mut b2 = Vec::new();
    let mut b3 = Vec::new();
    let mut pairs: Vec<(&MuVector, &MuVector, usize)> = Vec::new();
    for (s, c) in a.elements() {
        for m in s.members() {
            if m.mu.len() != n {
                return Err(Error::LengthMismatch(m.mu.len(), n));
            }
        }
        let ms = s.members();
        match s.shape() {
            Shape::Tree => b1.extend(std::iter::repeat_n(ms[0].mu.clone(), *c)),
            Shape::Hybrid => b2.push(ms[0].mu.clone()),
            Shape::Root => {
                if *c > 1 {
                    return Err(Error::MalformedRep(format!("root vector {} repeated", ms[0].mu)));
                }
                b3.push(ms[0].mu.clone())
            }
            Shape::Pair => pairs.push((&ms[0].mu, &ms[1].mu, *c)),
        }
    }
    b1.sort();
    b2.dedup();
    b3.sort();
    b3.dedup();

    // A representation without root entries: recover the single root vector.
    if b3.is_empty() && !pairs.is_empty() {
        b3.push(pairs[0].0.checked_add(pairs[0].1)?);
    }

    let mut m: Vec<Vec<MuVector>> = vec![Vec::new(); b3.len()];
    let mut owner = Vec::with_capacity(pairs.len());
    for &(x1, x2, c) in &pairs {
        let z = x1.checked_add(x2)?;
        let k = b3
            .binary_search(&z)
            .map_err(|_| Error::MalformedRep(format!("pair sum {z} matches no root vector")))?;
        for _ in 0..c {
            m[k].push(x1.clone());
            m[k].push(x2.clone());
        }
        owner.push((k, z));
    }

    let mut roots = Vec::with_capacity(b3.len());
    for (k, z) in b3.iter().enumerate() {
        m[k].sort();
        let r = if m[k].is_empty() {
            None
        } else {
            let r = choose(z, &m[k]);
            if m[k].binary_search(&r).is_err() {
                return Err(Error::Precondition(format!("reference {r} is not in M({z})")));
            }
            Some(r)
        };
        roots.push(RootGroup { z: z.clone(), m: std::mem::take(&mut m[k]), r });
    }

    let mut b4 = Vec::new();
    for (&(x1, x2, c), (k, z)) in pairs.iter().zip(&owner) {
        let r = roots[*k].r.as_ref().expect("M(z) holds this pair");
        let mut picks: Vec<MuVector> = Vec::new();
        for x in [x1, x2] {
            match x.compare_unchecked(r) {
                MuOrder::Less | MuOrder::Equal => picks.push(x.clone()),
                MuOrder::Greater => picks.push(z.checked_sub(x).expect("member of a pair is below its sum")),
                MuOrder::Incomparable => {}
            }
        }
        picks.dedup();
        if picks.len() != 1 {
            return Err(Error::MalformedRep(format!(
                "pair {{{x1}, {x2}}} has {} orientations relative to {r}",
                picks.len()
            )));
        }
        b4.extend(std::iter::repeat_n(picks.pop().unwrap(), c));
    }
    b4.sort();
    Ok(MuGroups { labels: a.labels().to_vec(), b1, b2, b3, b4, roots })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Head {
    Root,
    Hybrid,
    Tree,
}

struct Chain {
    mu: MuVector,
    head: Head,
    len: usize,
    /// Node indices, head first.
    nodes: Vec<usize>,
}

/// Assemble the DAG whose node vectors are `groups.all()`.
///
/// Equal vectors form a chain. A tree-node chain hangs below the chain of the
/// unique smallest strictly larger vector. What each chain bottom still needs
/// after its tree children is covered by hybrid vectors, largest first.
pub fn dag_from_muv(groups: &MuGroups, a: &MuRep) -> Result<Network> {
    let n = groups.labels.len();
    if a.labels() != groups.labels.as_slice() {
        return Err(Error::LabelMismatch);
    }
    let mut chains: BTreeMap<MuVector, Chain> = BTreeMap::new();
    let mut add = |mu: &MuVector, head: Head| -> Result<()> {
        let c = chains.entry(mu.clone()).or_insert(Chain { mu: mu.clone(), head: Head::Tree, len: 0, nodes: vec![] });
        if head != Head::Tree {
            if c.head != Head::Tree {
                return Err(Error::Assembly(format!("vector {mu} is both a root and a hybrid vector")));
            }
            c.head = head;
        }
        c.len += 1;
        Ok(())
    };
    for x in &groups.b3 {
        add(x, Head::Root)?;
    }
    for x in &groups.b2 {
        add(x, Head::Hybrid)?;
    }
    for x in groups.b1.iter().chain(&groups.b4) {
        add(x, Head::Tree)?;
    }
    for x in chains.keys() {
        if x.len() != n {
            return Err(Error::LengthMismatch(x.len(), n));
        }
        if x.is_zero() {
            return Err(Error::Assembly("zero vector".into()));
        }
    }

    // Nodes in decreasing vector order; chain nodes are consecutive.
    let mut chains: Vec<Chain> = chains.into_values().rev().collect();
    let mut count = 0;
    for c in &mut chains {
        c.nodes = (count..count + c.len).collect();
        count += c.len;
    }
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for c in &chains {
        for w in c.nodes.windows(2) {
            edges.push((w[0], w[1]));
        }
    }

    // Tree chains: parent is the bottom of the least larger chain.
    let mut residual: Vec<MuVector> = chains.iter().map(|c| c.mu.clone()).collect();
    for c in &chains {
        if c.head != Head::Tree {
            continue;
        }
        let above: Vec<usize> = (0..chains.len())
            .filter(|&j| c.mu.compare_unchecked(&chains[j].mu) == MuOrder::Less)
            .collect();
        let minimal: Vec<usize> = above
            .iter()
            .copied()
            .filter(|&j| !above.iter().any(|&k| chains[k].mu.compare_unchecked(&chains[j].mu) == MuOrder::Less))
            .collect();
        if minimal.len() != 1 {
            return Err(Error::Assembly(format!(
                "tree vector {} has {} minimal larger vectors",
                c.mu,
                minimal.len()
            )));
        }
        let p = minimal[0];
        edges.push((*chains[p].nodes.last().unwrap(), c.nodes[0]));
        residual[p] = residual[p]
            .checked_sub(&c.mu)
            .ok_or_else(|| Error::Assembly(format!("children of {} exceed it", chains[p].mu)))?;
    }

    // Hybrid parents, decomposing what is left at every chain bottom.
    let mut hybrids: Vec<usize> = (0..chains.len()).filter(|&i| chains[i].head == Head::Hybrid).collect();
    hybrids.sort_by(|&x, &y| chains[y].mu.total().cmp(&chains[x].mu.total()).then(chains[y].mu.cmp(&chains[x].mu)));
    let mut hyb_in = vec![0usize; chains.len()];
    let mut leaf_of: Vec<Option<usize>> = vec![None; count];
    for (i, c) in chains.iter().enumerate() {
        let bottom = *c.nodes.last().unwrap();
        let unit = c.mu.0.iter().filter(|&&x| x > 0).count() == 1 && c.mu.total() == 1;
        if unit {
            if residual[i] != c.mu {
                return Err(Error::Assembly(format!("leaf vector {} has children", c.mu)));
            }
            let label = c.mu.0.iter().position(|&x| x == 1).unwrap();
            leaf_of[bottom] = Some(label);
            residual[i] = MuVector::zero(n);
            continue;
        }
        let mut rem = residual[i].clone();
        if rem.is_zero() {
            continue;
        }
        for &h in &hybrids {
            if h == i {
                continue;
            }
            let x = &chains[h].mu;
            let mut k = 0u64;
            while let Some(next) = rem.checked_sub(x) {
                rem = next;
                k += 1;
            }
            for _ in 0..k {
                edges.push((bottom, chains[h].nodes[0]));
            }
            hyb_in[h] += k as usize;
        }
        if !rem.is_zero() {
            return Err(Error::Assembly(format!("vector {} leaves {} uncovered", c.mu, rem)));
        }
        residual[i] = rem;
    }
    for &h in &hybrids {
        let want = a.count(&murep::EdgeMuSet::single(chains[h].mu.clone(), Tag::H));
        if hyb_in[h] != want || want < 2 {
            return Err(Error::Assembly(format!(
                "hybrid vector {} gets {} parents, representation says {}",
                chains[h].mu, hyb_in[h], want
            )));
        }
    }

    // Name leaves by label and the rest v0, v1, ... avoiding label clashes.
    let labels: HashSet<&str> = groups.labels.iter().map(String::as_str).collect();
    let mut b = NetworkBuilder::new(groups.labels.iter().cloned())?;
    let mut ids = Vec::with_capacity(count);
    let mut k = 0;
    for &leaf in leaf_of.iter().take(count) {
        let id = match leaf {
            Some(l) => b.leaf(&groups.labels[l])?,
            None => loop {
                let name = format!("v{k}");
                k += 1;
                if !labels.contains(name.as_str()) {
                    break b.add_node(name)?;
                }
            },
        };
        ids.push(id);
    }
    for (p, c) in edges {
        b.directed(ids[p], ids[c])?;
    }
    let g = b.build();
    if leaf_of.iter().flatten().count() != n {
        return Err(Error::Assembly("some label has no leaf".into()));
    }
    let mut got = murep::mu_nodes(&g).map_err(|e| Error::Assembly(format!("assembled graph: {e}")))?;
    got.sort();
    if got != groups.all() {
        return Err(Error::Assembly("assembled graph does not reproduce the node vectors".into()));
    }
    Ok(g)
}

/// What [`undirect_to_completion`] found and changed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UndirectTrace {
    /// Tag-t vectors of the DAG's representation missing from the target, with multiplicity.
    pub f: Vec<(MuVector, usize)>,
    /// For each distinct vector of `f`, the path of edges into nodes with that vector.
    pub paths: Vec<Vec<EdgeId>>,
    pub undirected: Vec<EdgeId>,
}

/// Undirect the top edges of each elementary path that the target
/// representation records as root-component edges.
pub fn undirect_to_completion(g: &Network, a: &MuRep) -> Result<(Network, UndirectTrace)> {
    let mu = murep::mu_nodes(g)?;
    let b = murep::mu_edge_rep(g)?;
    if b.labels() != a.labels() {
        return Err(Error::LabelMismatch);
    }
    let diff = b.difference(a);
    let f: Vec<(MuVector, usize)> = diff
        .elements()
        .iter()
        .filter(|(s, _)| s.shape() == Shape::Tree)
        .map(|(s, c)| (s.single_mu().unwrap().clone(), *c))
        .collect();
    let indeg: Vec<usize> = g.nodes().map(|v| g.indeg(v)).collect();
    let mut edges = g.edges().to_vec();
    let mut paths = Vec::new();
    let mut undirected = Vec::new();
    for (x, m) in &f {
        let into: Vec<EdgeId> = g
            .edge_ids()
            .filter(|&e| {
                let ed = g.edge(e);
                indeg[ed.v.0] == 1 && mu[ed.v.0] == *x
            })
            .collect();
        let starts: Vec<EdgeId> = into.iter().copied().filter(|&e| mu[g.edge(e).u.0] != *x).collect();
        if starts.len() != 1 {
            return Err(Error::Precondition(format!("vector {x} does not label a single path ({} entries)", starts.len())));
        }
        let mut path = vec![starts[0]];
        loop {
            let v = g.edge(*path.last().unwrap()).v;
            let next: Vec<EdgeId> = into.iter().copied().filter(|&e| g.edge(e).u == v).collect();
            match next.len() {
                0 => break,
                1 => path.push(next[0]),
                _ => return Err(Error::Precondition(format!("vector {x} branches"))),
            }
        }
        if path.len() != into.len() {
            return Err(Error::Precondition(format!("edges into vector {x} are not one path")));
        }
        if *m > path.len() {
            return Err(Error::Precondition(format!("vector {x} needs {m} edges, path has {}", path.len())));
        }
        for &e in &path[..*m] {
            let ed = g.edge(e);
            edges[e.0] = Edge::undirected(ed.u, ed.v);
            undirected.push(e);
        }
        paths.push(path);
    }
    undirected.sort();
    Ok((g.with_edges(edges), UndirectTrace { f, paths, undirected }))
}

/// Full pipeline, keeping the intermediate results.
#[derive(Clone, Debug)]
pub struct Reconstruction {
    pub groups: MuGroups,
    pub dag: Network,
    pub trace: UndirectTrace,
    pub network: Network,
}

pub fn reconstruct_traced(a: &MuRep) -> Result<Reconstruction> {
    let groups = muv_from_mue(a)?;
    let dag = dag_from_muv(&groups, a)?;
    let (network, trace) = undirect_to_completion(&dag, a)?;
    Ok(Reconstruction { groups, dag, trace, network })
}

pub fn reconstruct_network(a: &MuRep) -> Result<Network> {
    Ok(reconstruct_traced(a)?.network)
}

/// Isomorphism for strongly tree-child networks via the representation.
pub fn isomorphic_tree_child(n1: &Network, n2: &Network) -> Result<bool> {
    for n in [n1, n2] {
        let s = structure::tree_child_classify(n)?;
        if s != TreeChildStatus::Strong {
            return Err(Error::Precondition(format!("network is {}, not strongly tree-child", s.name())));
        }
    }
    Ok(distance::d_mu_e(n1, n2)?.value == 0)
}
