//! Brute-force tree counting, kept independent of the recursive
//! enumerator: every labelled tree shape from Prüfer sequences, every
//! labelling into the graph, then deduplication by minimising an encoding
//! over relabellings.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::gkm::GkmGraph;

/// Largest number of tree edges the oracle will attempt.
pub const ORACLE_MAX_EDGES: i64 = 6;

/// Number of isomorphism classes of 1-marked trees over `root` of the
/// given degree.
pub fn count_oracle(g: &GkmGraph, root: usize, degree: &[i64]) -> Result<usize> {
    run(g, root, degree, false)
}

/// Same as [`count_oracle`] but counting sector assignments too.
pub fn count_oracle_sectored(g: &GkmGraph, root: usize, degree: &[i64]) -> Result<usize> {
    run(g, root, degree, true)
}

/// Per non-root node: (gkm edge, degree, sector) of the edge to its parent.
type EdgeData = (usize, i64, i64);

struct Raw {
    parent: Vec<usize>,
    label: Vec<usize>,
    edge: Vec<EdgeData>,
}

fn run(g: &GkmGraph, root: usize, degree: &[i64], sectors: bool) -> Result<usize> {
    let max_edges: i64 = degree.iter().sum();
    if max_edges > ORACLE_MAX_EDGES {
        return Err(Error::ResourceCap(format!(
            "count_oracle handles at most {ORACLE_MAX_EDGES} edges, degree allows {max_edges}"
        )));
    }
    let mut seen: HashSet<Vec<(usize, usize, EdgeData)>> = HashSet::new();
    for n in 1..=(max_edges as usize + 1) {
        for adj in labelled_trees(n) {
            let parent = orient(&adj);
            let mut raw = Raw { parent, label: vec![root; n], edge: vec![(0, 0, 0); n] };
            label_nodes(g, &mut raw, 1, degree.to_vec(), sectors, &mut |r| {
                seen.insert(canonical(r));
            });
        }
    }
    Ok(seen.len())
}

/// Adjacency lists of every labelled tree on `n` nodes.
fn labelled_trees(n: usize) -> Vec<Vec<Vec<usize>>> {
    if n == 1 {
        return vec![vec![Vec::new()]];
    }
    if n == 2 {
        return vec![vec![vec![1], vec![0]]];
    }
    let mut out = Vec::new();
    let total = n.pow(n as u32 - 2);
    for code in 0..total {
        let mut seq = Vec::with_capacity(n - 2);
        let mut c = code;
        for _ in 0..n - 2 {
            seq.push(c % n);
            c /= n;
        }
        out.push(prufer_decode(&seq, n));
    }
    out
}

fn prufer_decode(seq: &[usize], n: usize) -> Vec<Vec<usize>> {
    let mut deg = vec![1usize; n];
    for &s in seq {
        deg[s] += 1;
    }
    let mut adj = vec![Vec::new(); n];
    for &s in seq {
        let leaf = (0..n).find(|&i| deg[i] == 1).unwrap();
        adj[leaf].push(s);
        adj[s].push(leaf);
        deg[leaf] -= 1;
        deg[s] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&i| deg[i] == 1).collect();
    adj[rest[0]].push(rest[1]);
    adj[rest[1]].push(rest[0]);
    adj
}

/// Parent pointers with node 0 as root (root points to itself).
fn orient(adj: &[Vec<usize>]) -> Vec<usize> {
    let mut parent = vec![usize::MAX; adj.len()];
    parent[0] = 0;
    let mut stack = vec![0];
    while let Some(v) = stack.pop() {
        for &u in &adj[v] {
            if parent[u] == usize::MAX {
                parent[u] = v;
                stack.push(u);
            }
        }
    }
    parent
}

/// Nodes are visited in index order; a node's parent need not come
/// first, so labels are chosen freely and checked against every edge.
fn label_nodes(g: &GkmGraph, r: &mut Raw, i: usize, left: Vec<i64>, sectors: bool, emit: &mut dyn FnMut(&Raw)) {
    let n = r.parent.len();
    if i == n {
        if left.iter().all(|&x| x == 0) && edges_consistent(g, r) {
            emit(r);
        }
        return;
    }
    for lab in 0..g.vertices.len() {
        r.label[i] = lab;
        for (e, edge) in g.edges.iter().enumerate() {
            let mut k = 1;
            loop {
                let used: Vec<i64> = edge.class.iter().map(|c| c * k).collect();
                if used.iter().zip(&left).any(|(u, l)| u > l) {
                    break;
                }
                let rest: Vec<i64> = left.iter().zip(&used).map(|(l, u)| l - u).collect();
                let n_sec = if sectors { k } else { 1 };
                for s in 0..n_sec {
                    r.edge[i] = (e, k, s);
                    label_nodes(g, r, i + 1, rest.clone(), sectors, emit);
                }
                k += 1;
            }
        }
    }
}

fn edges_consistent(g: &GkmGraph, r: &Raw) -> bool {
    (1..r.parent.len()).all(|i| {
        let e = &g.edges[r.edge[i].0];
        let (a, b) = (r.label[i], r.label[r.parent[i]]);
        (e.v == a && e.w == b) || (e.v == b && e.w == a)
    })
}

fn depth(parent: &[usize], mut v: usize) -> usize {
    let mut d = 0;
    while v != 0 {
        v = parent[v];
        d += 1;
    }
    d
}

/// Minimum over relabellings preserving depth and label of the list of
/// (parent position, label, edge data).
fn canonical(r: &Raw) -> Vec<(usize, usize, EdgeData)> {
    let n = r.parent.len();
    let mut order: Vec<usize> = (1..n).collect();
    order.sort_by_key(|&v| (depth(&r.parent, v), r.label[v]));
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut prev = None;
    for &v in &order {
        let key = (depth(&r.parent, v), r.label[v]);
        if prev != Some(key) {
            blocks.push(Vec::new());
            prev = Some(key);
        }
        blocks.last_mut().unwrap().push(v);
    }
    let mut best: Option<Vec<(usize, usize, EdgeData)>> = None;
    let mut pos = vec![0usize; n];
    let mut arrangement: Vec<usize> = vec![0];
    permute_blocks(&blocks, 0, &mut arrangement, &mut |arr| {
        for (p, &v) in arr.iter().enumerate() {
            pos[v] = p;
        }
        let enc: Vec<(usize, usize, EdgeData)> = arr
            .iter()
            .map(|&v| {
                let par = if v == 0 { 0 } else { pos[r.parent[v]] };
                (par, r.label[v], if v == 0 { (0, 0, 0) } else { r.edge[v] })
            })
            .collect();
        if best.as_ref().is_none_or(|b| enc < *b) {
            best = Some(enc);
        }
    });
    best.unwrap()
}

fn permute_blocks(blocks: &[Vec<usize>], b: usize, arr: &mut Vec<usize>, emit: &mut dyn FnMut(&[usize])) {
    if b == blocks.len() {
        emit(arr);
        return;
    }
    let mut block = blocks[b].clone();
    let k = block.len();
    heap_permutations(&mut block, k, &mut |perm| {
        let base = arr.len();
        arr.extend_from_slice(perm);
        permute_blocks(blocks, b + 1, arr, emit);
        arr.truncate(base);
    });
}

fn heap_permutations(a: &mut [usize], k: usize, emit: &mut dyn FnMut(&[usize])) {
    if k <= 1 {
        emit(a);
        return;
    }
    for i in 0..k - 1 {
        heap_permutations(a, k - 1, emit);
        if k % 2 == 0 {
            a.swap(i, k - 1);
        } else {
            a.swap(0, k - 1);
        }
    }
    heap_permutations(a, k - 1, emit);
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gkm::build_projective_space;

    #[test]
    fn prufer_counts() {
        assert_eq!(labelled_trees(4).len(), 16);
        for t in labelled_trees(5) {
            assert_eq!(t.iter().map(|a| a.len()).sum::<usize>(), 8);
        }
    }

    #[test]
    fn p1_small() {
        let g = build_projective_space(1);
        assert_eq!(count_oracle(&g, 0, &[2]).unwrap(), 3);
        assert_eq!(count_oracle_sectored(&g, 0, &[2]).unwrap(), 4);
        assert!(matches!(count_oracle(&g, 0, &[7]), Err(Error::ResourceCap(_))));
    }
}
