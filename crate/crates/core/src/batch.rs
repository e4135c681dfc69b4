//! Bulk computations over many networks.
//!
//! With the `parallel` feature (on by default) work is spread over the rayon
//! thread pool; without it everything runs on the calling thread.

use crate::distance::rep_distance;
use crate::error::Result;
use crate::model::Network;
use crate::murep::{mu_edge_rep, MuRep};

#[cfg(feature = "parallel")]
pub fn par_map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    T: Sync,
    U: Send,
    F: Fn(&T) -> U + Sync + Send,
{
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
pub fn par_map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

pub fn seq_map<T, U, F>(items: &[T], f: F) -> Vec<U>
where
    F: Fn(&T) -> U,
{
    items.iter().map(f).collect()
}

pub fn mu_reps(networks: &[Network]) -> Vec<Result<MuRep>> {
    par_map(networks, mu_edge_rep)
}

pub fn mu_reps_seq(networks: &[Network]) -> Vec<Result<MuRep>> {
    seq_map(networks, mu_edge_rep)
}

fn matrix_from(reps: Vec<MuRep>, pairwise: impl Fn(&[(usize, usize)], &[MuRep]) -> Vec<Result<usize>>) -> Result<Vec<Vec<usize>>> {
    let k = reps.len();
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).collect();
    let values = pairwise(&pairs, &reps);
    let mut m = vec![vec![0; k]; k];
    for (&(i, j), v) in pairs.iter().zip(values) {
        let v = v?;
        m[i][j] = v;
        m[j][i] = v;
    }
    Ok(m)
}

/// Symmetric matrix of pairwise distances between the networks' representations.
pub fn distance_matrix(networks: &[Network]) -> Result<Vec<Vec<usize>>> {
    let reps = mu_reps(networks).into_iter().collect::<Result<Vec<_>>>()?;
    matrix_from(reps, |pairs, reps| par_map(pairs, |&(i, j)| rep_distance(&reps[i], &reps[j]).map(|d| d.value)))
}

pub fn distance_matrix_seq(networks: &[Network]) -> Result<Vec<Vec<usize>>> {
    let reps = mu_reps_seq(networks).into_iter().collect::<Result<Vec<_>>>()?;
    matrix_from(reps, |pairs, reps| seq_map(pairs, |&(i, j)| rep_distance(&reps[i], &reps[j]).map(|d| d.value)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generator::{gen_tree_child, GenConfig};

    #[test]
    fn parallel_matches_sequential() {
        let nets: Vec<Network> = (0..12).map(|s| gen_tree_child(&GenConfig::new(6, 2, 1, s)).unwrap()).collect();
        let a = distance_matrix(&nets).unwrap();
        let b = distance_matrix_seq(&nets).unwrap();
        assert_eq!(a, b);
        for (i, row) in a.iter().enumerate() {
            assert_eq!(row[i], 0);
        }
    }
}
