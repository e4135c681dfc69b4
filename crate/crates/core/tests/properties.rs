mod common;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use semidirected::batch::{distance_matrix, distance_matrix_seq};
use semidirected::distance::d_mu_e;
use semidirected::generator::{gen_network, gen_tree_child, gen_unrooted_tree, perturb, GenConfig};
use semidirected::io::{murep_from_json, murep_to_json, parse_network, serialize_network};
use semidirected::murep::{mu_edge_rep, mu_edge_rep_with};
use semidirected::oracle::isomorphic_brute_bounded;
use semidirected::reconstruct::{dag_from_muv, muv_from_mue, muv_from_mue_with, reconstruct_network, undirect_to_completion};
use semidirected::structure::{completion, tree_child_classify, TreeChildStatus};
use semidirected::{Network, NodeId};

use common::corpus_config;

fn tree_child(seed: u64) -> Network {
    gen_tree_child(&corpus_config(seed)).unwrap()
}

fn shuffled(n: &Network, seed: u64) -> Network {
    let mut order: Vec<NodeId> = n.nodes().collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    n.renamed(|v, _| format!("z{}", v.0)).unwrap().permuted(&order).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn text_format_roundtrips(seed in 0u64..100_000) {
        let n = gen_network(&corpus_config(seed), 4).unwrap();
        let text = serialize_network(&n);
        let back = parse_network(&text).unwrap();
        prop_assert_eq!(serialize_network(&back), text);
        prop_assert_eq!(back.edges(), n.edges());
    }

    #[test]
    fn json_roundtrips(seed in 0u64..100_000) {
        let rep = mu_edge_rep(&tree_child(seed)).unwrap();
        let text = murep_to_json(&rep);
        prop_assert_eq!(murep_from_json(&text).unwrap(), rep);
    }

    #[test]
    fn completion_is_invisible(seed in 0u64..100_000) {
        let n = gen_network(&corpus_config(seed), 4).unwrap();
        let c = completion(&n).unwrap();
        prop_assert_eq!(d_mu_e(&n, &c).unwrap().value, 0);
        let cc = completion(&c).unwrap();
        prop_assert_eq!(cc.edges(), c.edges());
    }

    #[test]
    fn node_ids_do_not_matter(seed in 0u64..100_000) {
        let n = gen_network(&corpus_config(seed), 4).unwrap();
        let m = shuffled(&n, seed);
        prop_assert_eq!(mu_edge_rep(&n).unwrap(), mu_edge_rep(&m).unwrap());
        prop_assert_eq!(tree_child_classify(&n).unwrap().name(), tree_child_classify(&m).unwrap().name());
        let hn = n.classify_elements().hybrid_edges().count();
        prop_assert_eq!(hn, m.classify_elements().hybrid_edges().count());
    }

    #[test]
    fn any_reference_vector_gives_the_same_network(seed in 0u64..100_000) {
        let n = tree_child(seed);
        let rep = mu_edge_rep(&n).unwrap();
        let base = muv_from_mue(&rep).unwrap();
        let c = completion(&n).unwrap();
        for (k, group) in base.roots.iter().enumerate() {
            let mut choices = group.m.clone();
            choices.dedup();
            for r in choices {
                let z = group.z.clone();
                let g = muv_from_mue_with(&rep, |zz, m| if *zz == z { r.clone() } else { m[0].clone() }).unwrap();
                let dag = dag_from_muv(&g, &rep).unwrap();
                let (net, _) = undirect_to_completion(&dag, &rep).unwrap();
                prop_assert!(isomorphic_brute_bounded(&net, &c, 64).unwrap(), "root group {} reference {}", k, r);
            }
        }
    }

    #[test]
    fn simplified_form_reconstructs(seed in 0u64..100_000) {
        let mut cfg = corpus_config(seed);
        cfg.n_root_components = 1;
        let n = gen_tree_child(&cfg).unwrap();
        let rep = mu_edge_rep_with(&n, true).unwrap();
        let back = reconstruct_network(&rep).unwrap();
        prop_assert_eq!(d_mu_e(&back, &n).unwrap().value, 0);
    }

    #[test]
    fn unrooted_tree_distance_is_even(n in 4usize..24, s1 in 0u64..10_000, s2 in 0u64..10_000) {
        let d = d_mu_e(&gen_unrooted_tree(n, s1).unwrap(), &gen_unrooted_tree(n, s2).unwrap()).unwrap().value;
        prop_assert_eq!(d % 2, 0);
    }

    #[test]
    fn perturbed_networks_separate(seed in 0u64..100_000) {
        let mut cfg = corpus_config(seed);
        cfg.n_leaves = cfg.n_leaves.min(6);
        cfg.n_hybrids = cfg.n_hybrids.min(cfg.n_leaves - cfg.n_root_components);
        let n = gen_tree_child(&cfg).unwrap();
        let Ok(m) = perturb(&n, seed) else { return Ok(()) };
        prop_assert_eq!(tree_child_classify(&m).unwrap(), TreeChildStatus::Strong);
        if m.labels() == n.labels() {
            let d = d_mu_e(&n, &m).unwrap().value;
            let iso = isomorphic_brute_bounded(&completion(&n).unwrap(), &completion(&m).unwrap(), 64).unwrap();
            prop_assert_eq!(d == 0, iso);
        }
    }
}

#[test]
fn batch_backends_agree() {
    let nets: Vec<Network> = (1..=30).map(|s| gen_tree_child(&GenConfig::new(8, 2, 2, s)).unwrap()).collect();
    let m = distance_matrix(&nets).unwrap();
    assert_eq!(m, distance_matrix_seq(&nets).unwrap());
    for i in 0..nets.len() {
        for j in 0..nets.len() {
            assert_eq!(m[i][j], d_mu_e(&nets[i], &nets[j]).unwrap().value);
        }
    }
}

#[test]
fn isomorphism_oracle_sees_relabeling() {
    for seed in 1..=50 {
        let n = tree_child(seed);
        let m = shuffled(&n, seed + 7);
        assert!(isomorphic_brute_bounded(&n, &m, 64).unwrap(), "seed {seed}");
    }
}
