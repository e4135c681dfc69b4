mod common;

use common::{fixture, read_data};
use semidirected::distance::{d_mu_e, rf_check};
use semidirected::io::{murep_from_json, murep_to_json, parse_network, serialize_network};
use semidirected::model::Degrees;
use semidirected::murep::{mu_compare, mu_directional, mu_edge_rep, mu_nodes, mu_root, MuOrder, Shape};
use semidirected::oracle::{
    enumerate_partners, isomorphic_brute, isomorphic_brute_bounded, leaves_brute, rf_bipartition, tree_child_brute,
};
use semidirected::reconstruct::{isomorphic_tree_child, reconstruct_network};
use semidirected::structure::*;
use semidirected::{Error, MuVector, Network, NetworkBuilder, NodeId};

fn node(n: &Network, name: &str) -> NodeId {
    n.node_by_name(name).unwrap_or_else(|| panic!("no node {name}"))
}

fn v(xs: &[u64]) -> MuVector {
    MuVector(xs.to_vec())
}

#[test]
fn fixture_files_roundtrip() {
    for name in ["fix_a", "fix_b", "fix_c", "fix_d1", "fix_d2", "fix_d3", "fix_e1", "fix_e2", "no_partner"] {
        let text = read_data(&format!("{name}.net"));
        assert_eq!(serialize_network(&parse_network(&text).unwrap()), text, "{name}");
    }
}

#[test]
fn degrees_and_classes() {
    let d1 = fixture("fix_d1");
    assert_eq!(d1.degrees(node(&d1, "u")).unwrap(), Degrees { indeg: 0, outdeg: 2, undirected: 1 });
    assert!(matches!(d1.degrees(NodeId(99)), Err(Error::UnknownNode(_))));

    let a = fixture("fix_a");
    let cls = a.classify_elements();
    assert_eq!(cls.hybrid_edges().count(), 3);
    let hybrids: Vec<NodeId> = cls.hybrid_nodes().collect();
    assert_eq!(hybrids, vec![node(&a, "H")]);

    let indeg: usize = a.nodes().map(|x| a.degrees(x).unwrap().indeg).sum();
    let und: usize = a.nodes().map(|x| a.degrees(x).unwrap().undirected).sum();
    assert_eq!(indeg, a.directed_edge_count());
    assert_eq!(und, 2 * (a.edge_count() - a.directed_edge_count()));
}

#[test]
fn contraction_of_fix_c() {
    let c = fixture("fix_c");
    let k = c.contraction();
    assert_eq!(k.node_count, 7);
    assert_eq!(k.map[node(&c, "w").0], k.map[node(&c, "y").0]);
    assert_eq!(k.map[node(&c, "u").0], k.map[node(&c, "v").0]);
    assert_eq!(k.edges.len(), c.directed_edge_count());
    assert!(k.is_acyclic());
}

#[test]
fn components() {
    let c = fixture("fix_c");
    let d = decompose(&c).unwrap();
    assert_eq!(d.root_component_count(), 2);
    for i in 0..2 {
        assert_eq!(d.root_component(i).nodes.len(), 2);
    }

    let d2 = fixture("fix_d2");
    let d = decompose(&d2).unwrap();
    let mut roots: Vec<Vec<&str>> = (0..d.root_component_count())
        .map(|i| d.root_component(i).nodes.iter().map(|&x| d2.name(x)).collect())
        .collect();
    roots.sort();
    assert_eq!(roots, vec![vec!["a"], vec!["u", "v"]]);
}

#[test]
fn networks_and_partners() {
    let bad = fixture("no_partner");
    assert!(is_acyclic(&bad));
    assert!(!is_network(&bad));
    let e = network_decomposition(&bad).unwrap_err();
    assert!(e.to_string().contains("no rooted partner"), "{e}");

    assert!(is_network(&fixture("fix_a")));
    assert_eq!(enumerate_root_choices(&fixture("fix_c")).unwrap().len(), 4);
    assert_eq!(enumerate_root_choices(&fixture("fix_d2")).unwrap().len(), 2);
    assert_eq!(partner_count(&fixture("fix_b")).unwrap(), 8);
}

#[test]
fn completions() {
    let d3 = fixture("fix_d3");
    assert!(!is_complete(&d3).unwrap());
    let c = completion(&d3).unwrap();
    for leaf in ["b", "c"] {
        let x = node(&c, leaf);
        assert_eq!(c.degrees(x).unwrap(), Degrees { indeg: 1, outdeg: 0, undirected: 0 });
    }
    let d2 = fixture("fix_d2");
    assert!(is_complete(&d2).unwrap());
    assert_eq!(serialize_network(&completion(&d2).unwrap()), serialize_network(&d2));
}

#[test]
fn fix_c_partner_at_u_is_tree_child() {
    let c = fixture("fix_c");
    let d = network_decomposition(&c).unwrap();
    let (w, u) = (node(&c, "w"), node(&c, "u"));
    for first in [w, node(&c, "y")] {
        let choice: Vec<NodeId> =
            (0..d.root_component_count()).map(|i| if d.root_component(i).nodes.contains(&u) { u } else { first }).collect();
        let p = rooted_partner(&c, &RootChoice(choice)).unwrap();
        assert!(p.is_fully_directed());
        assert!(semidirected::oracle::dag_is_tree_child(&p));
    }
}

#[test]
fn fix_a_partner_matches_walkthrough_dag() {
    let a = fixture("fix_a");
    let p = rooted_partner(&a, &RootChoice(vec![node(&a, "q")])).unwrap();
    let rep = mu_edge_rep(&a).unwrap();
    let back = reconstruct_network(&rep).unwrap();
    assert!(isomorphic_brute_bounded(&back, &completion(&a).unwrap(), 64).unwrap());
    // Taking the q-r edge's vector as reference roots the DAG at q.
    let groups = semidirected::reconstruct::muv_from_mue_with(&rep, |_, _| v(&[0, 0, 0, 1, 1, 2, 2, 2])).unwrap();
    let dag = semidirected::reconstruct::dag_from_muv(&groups, &rep).unwrap();
    assert!(isomorphic_brute_bounded(&dag, &p, 64).unwrap());
}

#[test]
fn leaves() {
    let d1 = fixture("fix_d1");
    let l = classify_leaves(&d1).unwrap();
    let names = |xs: &[NodeId]| xs.iter().map(|&x| d1.name(x).to_string()).collect::<Vec<_>>();
    assert_eq!(names(&l.ambiguous_leaves), ["a"]);
    assert_eq!(names(&l.rooted_leaves), ["b", "c"]);
    let (all, some) = leaves_brute(&d1, 64).unwrap();
    assert_eq!(all, l.rooted_leaves);
    let mut amb = some.clone();
    amb.retain(|x| !all.contains(x));
    assert_eq!(amb, l.ambiguous_leaves);

    let d3 = fixture("fix_d3");
    let l = classify_leaves(&d3).unwrap();
    assert!(l.ambiguous_leaves.is_empty());
    assert_eq!(l.rooted_leaves.len(), 3);
}

#[test]
fn resolving_ambiguous_leaves() {
    let d1 = fixture("fix_d1");
    let all = resolve_ambiguous_leaves(&d1, &ResolvePolicy::AllLeaves).unwrap();
    assert_eq!(serialize_network(&all), read_data("fix_d3.net"));

    let a = node(&d1, "a");
    let at_a = resolve_ambiguous_leaves(&d1, &ResolvePolicy::RootAt(a)).unwrap();
    assert_eq!(at_a.degrees(a).unwrap(), Degrees { indeg: 0, outdeg: 1, undirected: 0 });
    assert!(classify_leaves(&at_a).unwrap().ambiguous_leaves.is_empty());
    assert_eq!(partner_count(&at_a).unwrap(), 1);
    assert!(matches!(
        resolve_ambiguous_leaves(&d1, &ResolvePolicy::RootAt(node(&d1, "u"))),
        Err(Error::NotAmbiguousLeaf(_))
    ));

    let d3 = fixture("fix_d3");
    let same = resolve_ambiguous_leaves(&d3, &ResolvePolicy::AllLeaves).unwrap();
    assert_eq!(serialize_network(&same), serialize_network(&d3));
}

#[test]
fn tree_child_fixtures() {
    let c = fixture("fix_c");
    let u = node(&c, "u");
    let d = network_decomposition(&c).unwrap();
    let k = (0..d.root_component_count()).find(|&i| d.root_component(i).nodes.contains(&u)).unwrap();
    assert_eq!(tree_child_classify(&c).unwrap(), TreeChildStatus::WeakOnly { witnesses: vec![(k, u)] });
    assert_eq!(tree_child_classify(&fixture("fix_d2")).unwrap(), TreeChildStatus::NotTreeChild);
    assert_eq!(tree_child_classify(&fixture("fix_a")).unwrap(), TreeChildStatus::Strong);
    for name in ["fix_a", "fix_b", "fix_c", "fix_d2", "fix_e1", "fix_e2"] {
        let n = fixture(name);
        assert_eq!(tree_child_classify(&n).unwrap(), tree_child_brute(&n).unwrap(), "{name}");
    }
    // Only the partner rooted at u is tree-child.
    let d1 = fixture("fix_d1");
    let ok: Vec<bool> = enumerate_partners(&d1).unwrap().iter().map(semidirected::oracle::dag_is_tree_child).collect();
    assert_eq!(ok.iter().filter(|&&b| b).count(), 1);
}

#[test]
fn vectors_on_fix_a() {
    let a = fixture("fix_a");
    let c = completion(&a).unwrap();
    let g = rooted_partner(&c, &RootChoice(vec![node(&c, "q")])).unwrap();
    let mu = mu_nodes(&g).unwrap();
    assert_eq!(mu[node(&g, "w").0], v(&[0, 0, 0, 0, 0, 1, 1, 0]));
    assert_eq!(mu[node(&g, "a1").0], v(&[1, 0, 0, 0, 0, 0, 0, 0]));

    let (u, p) = (node(&a, "u"), node(&a, "p"));
    let la = v(&[1, 1, 0, 0, 0, 0, 0, 0]);
    let rest = v(&[0, 0, 1, 1, 1, 3, 3, 3]);
    assert_eq!(mu_directional(&a, u, p).unwrap(), rest);
    assert_eq!(mu_directional(&a, p, u).unwrap(), la);
    assert_eq!(mu_compare(&la, &rest).unwrap(), MuOrder::Incomparable);
    assert_eq!(mu_root(&a, 0).unwrap(), v(&[1, 1, 1, 1, 1, 3, 3, 3]));
    assert!(matches!(mu_directional(&a, node(&a, "H"), node(&a, "w")), Err(Error::NotRootComponentEdge(_))));
}

#[test]
fn golden_json_roundtrip() {
    let text = read_data("fix_a_murep.json");
    let rep = murep_from_json(&text).unwrap();
    assert_eq!(rep, mu_edge_rep(&fixture("fix_a")).unwrap());
    assert_eq!(murep_to_json(&rep), text);
    assert_eq!(rep.count_shape(Shape::Pair), 6);
}

#[test]
fn fix_a_vs_fix_b() {
    let (a, b) = (fixture("fix_a"), fixture("fix_b"));
    let d = d_mu_e(&a, &b).unwrap();
    assert_eq!(d.value, 5);
    // Only the p-q and q-r edges are missing from the other network.
    let (p, q, r) = (node(&a, "p"), node(&a, "q"), node(&a, "r"));
    let pq = semidirected::EdgeMuSet::pair(mu_directional(&a, p, q).unwrap(), mu_directional(&a, q, p).unwrap());
    let qr = semidirected::EdgeMuSet::pair(mu_directional(&a, q, r).unwrap(), mu_directional(&a, r, q).unwrap());
    let mut want = vec![pq, qr];
    want.sort();
    assert_eq!(d.left_only.iter().cloned().collect::<Vec<_>>(), want);
    assert_eq!(d.right_only.len(), 3);
    assert_eq!(d_mu_e(&b, &a).unwrap().value, 5);
    assert_eq!(d_mu_e(&a, &a).unwrap().value, 0);
    assert!(!isomorphic_tree_child(&a, &b).unwrap());
}

#[test]
fn relabeled_ids_are_isomorphic() {
    let a = fixture("fix_a");
    let renamed = a.renamed(|_, name| format!("x_{name}")).unwrap();
    let mut order: Vec<NodeId> = a.nodes().collect();
    order.reverse();
    let shuffled = renamed.permuted(&order).unwrap();
    assert!(isomorphic_tree_child(&a, &shuffled).unwrap());
}

#[test]
fn weak_pair_needs_brute_force() {
    let (e1, e2) = (fixture("fix_e1"), fixture("fix_e2"));
    assert_eq!(d_mu_e(&e1, &e2).unwrap().value, 0);
    assert!(matches!(isomorphic_tree_child(&e1, &e2), Err(Error::Precondition(_))));
    assert!(!isomorphic_brute(&e1, &e2).unwrap());
}

fn unrooted(labels: &[&str], internal: &[(&str, &str)], pendants: &[(&str, &str)]) -> Network {
    let mut b = NetworkBuilder::new(labels.iter().copied()).unwrap();
    for l in labels {
        b.leaf(l).unwrap();
    }
    for (x, y) in internal {
        let (x, y) = (b.node(x), b.node(y));
        b.undirected(x, y).unwrap();
    }
    for (x, l) in pendants {
        let (x, l) = (b.node(x), b.lookup(l).unwrap());
        b.directed(x, l).unwrap();
    }
    b.build()
}

#[test]
fn tree_distances() {
    let labels = ["a", "b", "c", "d", "e", "f"];
    let caterpillar = unrooted(
        &labels,
        &[("x1", "x2"), ("x2", "x3"), ("x3", "x4")],
        &[("x1", "a"), ("x1", "b"), ("x2", "c"), ("x3", "d"), ("x4", "e"), ("x4", "f")],
    );
    let balanced = unrooted(
        &labels,
        &[("y0", "y1"), ("y0", "y2"), ("y0", "y3")],
        &[("y1", "a"), ("y1", "b"), ("y2", "c"), ("y2", "d"), ("y3", "e"), ("y3", "f")],
    );
    let d = rf_check(&caterpillar, &balanced).unwrap();
    assert_eq!(d, rf_bipartition(&caterpillar, &balanced).unwrap());
    assert_eq!(d, 2);
    assert_eq!(rf_check(&caterpillar, &caterpillar).unwrap(), 0);
    assert!(matches!(rf_check(&fixture("fix_a"), &fixture("fix_a")), Err(Error::HasHybridEdges)));
}
