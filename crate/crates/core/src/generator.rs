//! Seeded random networks for tests, sweeps and benchmarks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{Network, NetworkBuilder};
use crate::structure::{self, TreeChildStatus};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GenConfig {
    pub n_leaves: usize,
    pub n_hybrids: usize,
    pub n_root_components: usize,
    pub max_in_degree: usize,
    pub allow_parallel: bool,
    pub forbid_elementary: bool,
    pub seed: u64,
}

impl GenConfig {
    pub fn new(n_leaves: usize, n_hybrids: usize, n_root_components: usize, seed: u64) -> Self {
        GenConfig {
            n_leaves,
            n_hybrids,
            n_root_components,
            max_in_degree: 2,
            allow_parallel: false,
            forbid_elementary: false,
            seed,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InfeasibleConfig(m));
        if self.n_root_components == 0 {
            return bad("need at least one root component".into());
        }
        if self.n_leaves < self.n_root_components {
            return bad(format!("{} leaves cannot fill {} root components", self.n_leaves, self.n_root_components));
        }
        if self.forbid_elementary && self.n_leaves < 2 * self.n_root_components {
            return bad("without elementary nodes every root needs two leaves".into());
        }
        if self.n_hybrids + self.n_root_components > self.n_leaves {
            return bad(format!(
                "{} hybrids exceed leaves minus roots ({})",
                self.n_hybrids,
                self.n_leaves - self.n_root_components
            ));
        }
        if self.max_in_degree < 2 {
            return bad("max in-degree must be at least 2".into());
        }
        Ok(())
    }
}

const BASE_RETRIES: usize = 40;
const CARVE_RETRIES: usize = 12;

/// Working graph. Edges are (parent, child, undirected).
#[derive(Clone, Debug)]
struct Raw {
    nodes: usize,
    edges: Vec<(usize, usize, bool)>,
    roots: Vec<usize>,
    leaves: Vec<usize>,
}

impl Raw {
    fn new_node(&mut self) -> usize {
        self.nodes += 1;
        self.nodes - 1
    }

    fn indeg(&self) -> Vec<usize> {
        let mut d = vec![0; self.nodes];
        for &(_, v, und) in &self.edges {
            if !und {
                d[v] += 1;
            }
        }
        d
    }

    fn children(&self) -> Vec<Vec<usize>> {
        let mut c = vec![Vec::new(); self.nodes];
        for &(u, v, _) in &self.edges {
            c[u].push(v);
        }
        c
    }

    /// Whether `to` is reachable from `from` following edges parent to child.
    fn reaches(&self, from: usize, to: usize) -> bool {
        let ch = self.children();
        let mut seen = vec![false; self.nodes];
        let mut stack = vec![from];
        while let Some(x) = stack.pop() {
            if x == to {
                return true;
            }
            if !seen[x] {
                seen[x] = true;
                stack.extend(&ch[x]);
            }
        }
        false
    }

    fn is_tree_child(&self) -> bool {
        let indeg = self.indeg();
        self.children().iter().all(|c| c.is_empty() || c.iter().any(|&y| indeg[y] == 1))
    }

    /// Indices of directed edges into tree nodes.
    fn tree_edges(&self) -> Vec<usize> {
        let indeg = self.indeg();
        (0..self.edges.len()).filter(|&i| !self.edges[i].2 && indeg[self.edges[i].1] == 1).collect()
    }

    fn subdivide(&mut self, e: usize) -> usize {
        let (a, b, und) = self.edges[e];
        let s = self.new_node();
        self.edges[e] = (a, s, und);
        self.edges.push((s, b, und));
        s
    }

    fn hybrid_count(&self) -> usize {
        self.indeg().iter().filter(|&&k| k >= 2).count()
    }
}

fn forest(rng: &mut ChaCha8Rng, n: usize, t: usize, min_group: usize) -> Raw {
    let mut sizes = vec![min_group; t];
    for _ in 0..n - min_group * t {
        sizes[rng.gen_range(0..t)] += 1;
    }
    let mut raw = Raw { nodes: 0, edges: Vec::new(), roots: Vec::new(), leaves: Vec::new() };
    for k in sizes {
        let r = raw.new_node();
        raw.roots.push(r);
        let mut leaves = Vec::new();
        let first = if k == 1 { 1 } else { 2 };
        for _ in 0..first {
            let l = raw.new_node();
            raw.edges.push((r, l, false));
            leaves.push(l);
        }
        for _ in first..k {
            let i = rng.gen_range(0..leaves.len());
            let x = leaves.swap_remove(i);
            for _ in 0..2 {
                let l = raw.new_node();
                raw.edges.push((x, l, false));
                leaves.push(l);
            }
        }
        raw.leaves.extend(leaves);
    }
    raw
}

/// New hybrid between two tree edges. `check` enforces tree-child.
fn try_add_hybrid(rng: &mut ChaCha8Rng, raw: &mut Raw, check: bool) -> bool {
    for _ in 0..40 {
        let te = raw.tree_edges();
        if te.len() < 2 {
            return false;
        }
        let e1 = te[rng.gen_range(0..te.len())];
        let e2 = te[rng.gen_range(0..te.len())];
        if e1 == e2 {
            continue;
        }
        let (a, _, _) = raw.edges[e1];
        let (_, d, _) = raw.edges[e2];
        if raw.reaches(d, a) {
            continue;
        }
        let saved = raw.clone();
        let s = raw.subdivide(e1);
        let h = raw.subdivide(e2);
        raw.edges.push((s, h, false));
        if !check || raw.is_tree_child() {
            return true;
        }
        *raw = saved;
    }
    false
}

fn try_extra_parent(rng: &mut ChaCha8Rng, raw: &mut Raw, m: usize, check: bool) -> bool {
    let indeg = raw.indeg();
    let hybrids: Vec<usize> = (0..raw.nodes).filter(|&v| indeg[v] >= 2 && indeg[v] < m).collect();
    if hybrids.is_empty() {
        return false;
    }
    for _ in 0..20 {
        let h = hybrids[rng.gen_range(0..hybrids.len())];
        let te = raw.tree_edges();
        let e = te[rng.gen_range(0..te.len())];
        let (a, _, _) = raw.edges[e];
        if raw.reaches(h, a) {
            continue;
        }
        let saved = raw.clone();
        let s = raw.subdivide(e);
        raw.edges.push((s, h, false));
        if !check || raw.is_tree_child() {
            return true;
        }
        *raw = saved;
    }
    false
}

fn try_parallel(rng: &mut ChaCha8Rng, raw: &mut Raw, m: usize) -> bool {
    let indeg = raw.indeg();
    let cands: Vec<usize> =
        (0..raw.edges.len()).filter(|&i| !raw.edges[i].2 && indeg[raw.edges[i].1] >= 2 && indeg[raw.edges[i].1] < m).collect();
    if cands.is_empty() {
        return false;
    }
    let e = cands[rng.gen_range(0..cands.len())];
    let saved = raw.clone();
    raw.edges.push(raw.edges[e]);
    if raw.is_tree_child() {
        return true;
    }
    *raw = saved;
    false
}

/// Undirect a random connected set of tree edges below each root, skipping
/// pendant edges, then optionally some directed-part tree edges.
fn carve(rng: &mut ChaCha8Rng, raw: &Raw, max_size: usize, pendants_ok: bool) -> Raw {
    let mut out = raw.clone();
    let indeg = raw.indeg();
    let ch = raw.children();
    let mut in_root = vec![false; raw.nodes];
    for &r in &raw.roots {
        in_root[r] = true;
        let want = rng.gen_range(0..=max_size);
        let mut taken = 0;
        let mut members = vec![r];
        while taken < want {
            let frontier: Vec<usize> = (0..out.edges.len())
                .filter(|&i| {
                    let (u, v, und) = out.edges[i];
                    !und && members.contains(&u)
                        && indeg[v] == 1
                        && !in_root[v]
                        && (pendants_ok || !ch[v].is_empty())
                })
                .collect();
            if frontier.is_empty() {
                break;
            }
            let e = frontier[rng.gen_range(0..frontier.len())];
            out.edges[e].2 = true;
            let v = out.edges[e].1;
            in_root[v] = true;
            members.push(v);
            taken += 1;
        }
    }
    if rng.gen_bool(0.5) {
        for _ in 0..rng.gen_range(1..=2) {
            let cands: Vec<usize> = (0..out.edges.len())
                .filter(|&i| {
                    let (u, v, und) = out.edges[i];
                    !und && !in_root[u] && indeg[v] == 1
                })
                .collect();
            if let Some(&e) = cands.choose(rng) {
                out.edges[e].2 = true;
            }
        }
    }
    out
}

/// Remove degree-2 roots whose edges were undirected, joining their two
/// neighbors. Returns `None` if that would create a parallel edge.
fn suppress_roots(raw: &Raw) -> Option<Raw> {
    let mut out = raw.clone();
    let mut removed = vec![false; raw.nodes];
    for &r in &raw.roots {
        let inc: Vec<usize> = (0..out.edges.len()).filter(|&i| out.edges[i].0 == r || out.edges[i].1 == r).collect();
        if inc.len() != 2 || !inc.iter().any(|&i| out.edges[i].2) {
            continue;
        }
        let other = |i: usize| if out.edges[i].0 == r { out.edges[i].1 } else { out.edges[i].0 };
        let (i, j) = if out.edges[inc[0]].2 { (inc[0], inc[1]) } else { (inc[1], inc[0]) };
        let (x, y) = (other(i), other(j));
        let und = out.edges[j].2;
        if out.edges.iter().any(|&(a, b, _)| (a == x && b == y) || (a == y && b == x)) {
            return None;
        }
        out.edges[i] = (x, y, und);
        out.edges.remove(j);
        removed[r] = true;
    }
    if !removed.iter().any(|&b| b) {
        return Some(out);
    }
    let mut map = vec![usize::MAX; raw.nodes];
    let mut k = 0;
    for v in 0..raw.nodes {
        if !removed[v] {
            map[v] = k;
            k += 1;
        }
    }
    for e in &mut out.edges {
        e.0 = map[e.0];
        e.1 = map[e.1];
    }
    out.nodes = k;
    out.roots = out.roots.iter().filter(|&&r| !removed[r]).map(|&r| map[r]).collect();
    out.leaves = out.leaves.iter().map(|&l| map[l]).collect();
    Some(out)
}

fn to_network(raw: &Raw, rng: &mut ChaCha8Rng) -> Result<Network> {
    let n = raw.leaves.len();
    let labels: Vec<String> = (1..=n).map(|i| format!("t{i}")).collect();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut b = NetworkBuilder::new(labels.iter().cloned())?;
    let ids: Vec<_> = (0..raw.nodes).map(|i| b.add_node(format!("n{i}"))).collect::<Result<_>>()?;
    for (k, &l) in raw.leaves.iter().enumerate() {
        b.set_label(ids[l], &labels[perm[k]])?;
    }
    for &(u, v, und) in &raw.edges {
        if und {
            b.undirected(ids[u], ids[v])?;
        } else {
            b.directed(ids[u], ids[v])?;
        }
    }
    Ok(b.build())
}

fn acceptable(n: &Network, cfg: &GenConfig) -> bool {
    structure::is_labeled_network(n)
        && matches!(structure::tree_child_classify(n), Ok(TreeChildStatus::Strong))
        && (!cfg.forbid_elementary || structure::elementary_nodes(n).is_empty())
}

fn base_graph(rng: &mut ChaCha8Rng, cfg: &GenConfig, tree_child: bool) -> Raw {
    let min_group = if cfg.forbid_elementary { 2 } else { 1 };
    let mut raw = forest(rng, cfg.n_leaves, cfg.n_root_components, min_group);
    let mut budget = 4 * cfg.n_hybrids + 4;
    while raw.hybrid_count() < cfg.n_hybrids && budget > 0 {
        try_add_hybrid(rng, &mut raw, tree_child);
        budget -= 1;
    }
    if cfg.max_in_degree > 2 && raw.hybrid_count() > 0 {
        for _ in 0..rng.gen_range(0..=cfg.n_hybrids) {
            try_extra_parent(rng, &mut raw, cfg.max_in_degree, tree_child);
        }
    }
    if cfg.allow_parallel && raw.hybrid_count() > 0 && rng.gen_bool(0.5) {
        try_parallel(rng, &mut raw, cfg.max_in_degree);
    }
    if !cfg.forbid_elementary {
        for _ in 0..rng.gen_range(0..=2) {
            let te = raw.tree_edges();
            if let Some(&e) = te.choose(rng) {
                raw.subdivide(e);
            }
        }
    }
    raw
}

/// A strongly tree-child L-network with the requested leaves and root
/// components and at most the requested hybrids.
pub fn gen_tree_child(cfg: &GenConfig) -> Result<Network> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut last_base = None;
    for _ in 0..BASE_RETRIES {
        let raw = base_graph(&mut rng, cfg, true);
        for _ in 0..CARVE_RETRIES {
            let carved = carve(&mut rng, &raw, 5, false);
            let carved = if cfg.forbid_elementary {
                match suppress_roots(&carved) {
                    Some(c) => c,
                    None => continue,
                }
            } else {
                carved
            };
            let n = to_network(&carved, &mut rng)?;
            if acceptable(&n, cfg) {
                return Ok(n);
            }
        }
        last_base = Some(raw);
    }
    // Fall back to the uncarved DAG, which is tree-child by construction.
    if let Some(raw) = last_base {
        let n = to_network(&raw, &mut rng)?;
        if acceptable(&n, cfg) {
            return Ok(n);
        }
    }
    Err(Error::RetriesExhausted(BASE_RETRIES * CARVE_RETRIES))
}

/// An L-network with no tree-child guarantee. Root components have at
/// most `max_root_nodes` nodes.
pub fn gen_network(cfg: &GenConfig, max_root_nodes: usize) -> Result<Network> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for _ in 0..BASE_RETRIES {
        let raw = base_graph(&mut rng, cfg, false);
        let carved = carve(&mut rng, &raw, max_root_nodes.saturating_sub(1), false);
        let n = to_network(&carved, &mut rng)?;
        if structure::is_labeled_network(&n) {
            return Ok(n);
        }
    }
    Err(Error::RetriesExhausted(BASE_RETRIES))
}

/// A fully directed rooted binary tree on `n` leaves.
pub fn gen_rooted_tree(n: usize, seed: u64) -> Result<Network> {
    if n == 0 {
        return Err(Error::InfeasibleConfig("a tree needs a leaf".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let raw = forest(&mut rng, n, 1, 1);
    to_network(&raw, &mut rng)
}

/// An unrooted binary tree by stepwise addition: pendant edges point to the
/// leaves and internal edges are undirected.
pub fn gen_unrooted_tree(n: usize, seed: u64) -> Result<Network> {
    if n < 3 {
        return Err(Error::InfeasibleConfig("an unrooted binary tree needs three leaves".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut raw = Raw { nodes: 4, edges: vec![(0, 1, false), (0, 2, false), (0, 3, false)], roots: vec![], leaves: vec![1, 2, 3] };
    for _ in 3..n {
        let e = rng.gen_range(0..raw.edges.len());
        let w = raw.subdivide(e);
        let l = raw.new_node();
        raw.edges.push((w, l, false));
        raw.leaves.push(l);
    }
    let is_leaf: Vec<bool> = {
        let mut v = vec![false; raw.nodes];
        for &l in &raw.leaves {
            v[l] = true;
        }
        v
    };
    // Orient pendant edges toward the leaf and undirect the rest.
    for e in &mut raw.edges {
        if is_leaf[e.0] {
            *e = (e.1, e.0, false);
        } else if !is_leaf[e.1] {
            e.2 = true;
        }
    }
    to_network(&raw, &mut rng)
}

/// Editable copy of a network keeping node names.
struct Editable {
    names: Vec<String>,
    labels: Vec<Option<String>>,
    edges: Vec<(usize, usize, bool)>,
    label_vec: Vec<String>,
}

impl Editable {
    fn of(n: &Network) -> Self {
        Editable {
            names: n.nodes().map(|v| n.name(v).to_string()).collect(),
            labels: n.nodes().map(|v| n.label(v).map(str::to_string)).collect(),
            edges: n.edges().iter().map(|e| (e.u.0, e.v.0, !e.is_directed())).collect(),
            label_vec: n.labels().to_vec(),
        }
    }

    fn degrees(&self, v: usize) -> (usize, usize, usize) {
        let mut d = (0, 0, 0);
        for &(a, b, und) in &self.edges {
            if und && (a == v || b == v) {
                d.2 += 1;
            } else if !und && b == v {
                d.0 += 1;
            } else if !und && a == v {
                d.1 += 1;
            }
        }
        d
    }

    /// Contract a node with one directed in-edge and one directed out-edge.
    fn contract(&mut self, v: usize) -> bool {
        if self.degrees(v) != (1, 1, 0) || self.labels[v].is_some() {
            return false;
        }
        let i = self.edges.iter().position(|e| e.1 == v).unwrap();
        let j = self.edges.iter().position(|e| e.0 == v).unwrap();
        let (a, b) = (self.edges[i].0, self.edges[j].1);
        self.edges[i] = (a, b, false);
        self.edges.remove(j);
        self.remove_node(v);
        true
    }

    fn remove_node(&mut self, v: usize) {
        self.names.remove(v);
        self.labels.remove(v);
        for e in &mut self.edges {
            if e.0 > v {
                e.0 -= 1;
            }
            if e.1 > v {
                e.1 -= 1;
            }
        }
    }

    fn build(&self) -> Result<Network> {
        let mut b = NetworkBuilder::new(self.label_vec.iter().cloned())?;
        let ids: Vec<_> = self.names.iter().map(|s| b.add_node(s.clone())).collect::<Result<_>>()?;
        for (i, l) in self.labels.iter().enumerate() {
            if let Some(l) = l {
                b.set_label(ids[i], l)?;
            }
        }
        for &(u, v, und) in &self.edges {
            if und {
                b.undirected(ids[u], ids[v])?;
            } else {
                b.directed(ids[u], ids[v])?;
            }
        }
        Ok(b.build())
    }
}

fn strong(n: &Network) -> bool {
    structure::is_labeled_network(n) && matches!(structure::tree_child_classify(n), Ok(TreeChildStatus::Strong))
}

fn swap_labels(n: &Network, rng: &mut ChaCha8Rng) -> Option<Network> {
    let mut e = Editable::of(n);
    let labeled: Vec<usize> = (0..e.names.len()).filter(|&v| e.labels[v].is_some()).collect();
    if labeled.len() < 2 {
        return None;
    }
    let i = rng.gen_range(0..labeled.len());
    let mut j = rng.gen_range(0..labeled.len() - 1);
    if j >= i {
        j += 1;
    }
    e.labels.swap(labeled[i], labeled[j]);
    e.build().ok().filter(strong)
}

fn regraft(n: &Network, rng: &mut ChaCha8Rng) -> Option<Network> {
    let base = Editable::of(n);
    let mut leaves: Vec<usize> = (0..base.names.len()).filter(|&v| base.labels[v].is_some()).collect();
    leaves.shuffle(rng);
    for l in leaves {
        let Some(pi) = base.edges.iter().position(|e| e.1 == l && !e.2) else { continue };
        let p = base.edges[pi].0;
        if base.degrees(p) != (1, 2, 0) {
            continue;
        }
        let gi = base.edges.iter().position(|e| e.1 == p).unwrap();
        let si = base.edges.iter().position(|e| e.0 == p && e.1 != l).unwrap();
        let (g, s) = (base.edges[gi].0, base.edges[si].1);
        let mut e = Editable { names: base.names.clone(), labels: base.labels.clone(), edges: Vec::new(), label_vec: base.label_vec.clone() };
        e.edges = base.edges.iter().enumerate().filter(|(i, _)| *i != gi && *i != si).map(|(_, x)| *x).collect();
        e.edges.push((g, s, false));
        let targets: Vec<usize> = (0..e.edges.len())
            .filter(|&i| {
                let (a, b, und) = e.edges[i];
                !und && a != p && b != p && !(a == g && b == s)
            })
            .collect();
        let Some(&t) = targets.choose(rng) else { continue };
        let (x, y, _) = e.edges[t];
        e.edges[t] = (x, p, false);
        e.edges.push((p, y, false));
        if let Some(net) = e.build().ok().filter(|m| structure::is_network(m) && strong(m)) {
            return Some(net);
        }
    }
    None
}

fn remove_hybrid_edge(n: &Network, rng: &mut ChaCha8Rng) -> Option<Network> {
    let base = Editable::of(n);
    let mut cands: Vec<usize> =
        (0..base.edges.len()).filter(|&i| !base.edges[i].2 && base.degrees(base.edges[i].1).0 >= 2).collect();
    cands.shuffle(rng);
    for i in cands {
        let mut e = Editable { names: base.names.clone(), labels: base.labels.clone(), edges: base.edges.clone(), label_vec: base.label_vec.clone() };
        let (u, h, _) = e.edges.remove(i);
        let (hi, ui) = if h > u { (h, u) } else { (u, h) };
        // Contract the higher index first so the other stays valid.
        e.contract(hi);
        e.contract(ui);
        if let Some(net) = e.build().ok().filter(|m| structure::is_network(m) && strong(m)) {
            return Some(net);
        }
    }
    None
}

/// One random edit keeping the network strongly tree-child.
pub fn perturb(n: &Network, seed: u64) -> Result<Network> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ops: Vec<u8> = vec![0, 1, 2];
    ops.shuffle(&mut rng);
    for op in ops {
        let out = match op {
            0 => swap_labels(n, &mut rng),
            1 => regraft(n, &mut rng),
            _ => remove_hybrid_edge(n, &mut rng),
        };
        if let Some(out) = out {
            return Ok(out);
        }
    }
    Err(Error::NoApplicableEdit)
}
