use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use crate::gkm::GkmGraph;

use super::{DecoratedTree, TreeEdge, TreeVertex};

/// Unmarked rooted subtree produced during enumeration.
struct Sub {
    vertex: usize,
    branches: Vec<(usize, u32, Rc<Sub>)>,
    key: String,
}

struct BranchType {
    edge: usize,
    deg: u32,
    sub: Rc<Sub>,
    degree: Vec<i64>,
    key: String,
}

type Memo = HashMap<(usize, Vec<i64>), Rc<Vec<Rc<Sub>>>>;

fn fits(a: &[i64], b: &[i64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn minus(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn scaled(c: &[i64], k: u32) -> Vec<i64> {
    c.iter().map(|x| x * k as i64).collect()
}

/// All unmarked rooted trees at `v` of exactly degree `d`.
fn subtrees(g: &GkmGraph, v: usize, d: &[i64], memo: &mut Memo) -> Rc<Vec<Rc<Sub>>> {
    if let Some(r) = memo.get(&(v, d.to_vec())) {
        return r.clone();
    }
    let mut types = Vec::new();
    for e in g.incident(v) {
        let class = g.class(e);
        let u = g.other_end(e, v);
        let mut k = 1u32;
        loop {
            let used = scaled(class, k);
            if !fits(&used, d) {
                break;
            }
            for rest in boxed(&minus(d, &used)) {
                let degree: Vec<i64> = used.iter().zip(&rest).map(|(a, b)| a + b).collect();
                for sub in subtrees(g, u, &rest, memo).iter() {
                    let key = format!("{}:{}_0>{}", e, k, sub.key);
                    types.push(BranchType { edge: e, deg: k, sub: sub.clone(), degree: degree.clone(), key });
                }
            }
            k += 1;
        }
    }
    types.sort_by(|a, b| a.key.cmp(&b.key));
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    multisets(&types, 0, d, &mut chosen, &mut |picked: &[usize]| {
        let mut keys: Vec<&str> = picked.iter().map(|&i| types[i].key.as_str()).collect();
        keys.sort_unstable();
        let key = format!("{}({})", v, keys.join(","));
        let branches = picked.iter().map(|&i| (types[i].edge, types[i].deg, types[i].sub.clone())).collect();
        out.push(Rc::new(Sub { vertex: v, branches, key }));
    });
    let out = Rc::new(out);
    memo.insert((v, d.to_vec()), out.clone());
    out
}

/// All vectors `0 <= x <= top`.
fn boxed(top: &[i64]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for &t in top {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..=t).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out
}

/// Multisets of branch types (non-decreasing indices) whose degrees sum
/// to `left`.
fn multisets(
    types: &[BranchType],
    start: usize,
    left: &[i64],
    chosen: &mut Vec<usize>,
    emit: &mut dyn FnMut(&[usize]),
) {
    if left.iter().all(|&x| x == 0) {
        emit(chosen);
        return;
    }
    for i in start..types.len() {
        if fits(&types[i].degree, left) {
            chosen.push(i);
            let rest = minus(left, &types[i].degree);
            multisets(types, i, &rest, chosen, emit);
            chosen.pop();
        }
    }
}

fn flatten(sub: &Sub, t: &mut DecoratedTree, at: usize) {
    for (e, k, child) in &sub.branches {
        t.vertices.push(TreeVertex { gkm: child.vertex, marks: Vec::new() });
        let c = t.vertices.len() - 1;
        t.edges.push(TreeEdge { parent: at, child: c, gkm_edge: *e, degree: *k, sector: 0 });
        flatten(child, t, c);
    }
}

/// All trees of multidegree `degree` whose mark 1 sits over `root_vertex`,
/// up to isomorphism fixing the marks, sorted by canonical form.
///
/// Marks `2..=n_marks` are distributed over the tree vertices in every
/// way. `n_marks == 0` yields no trees.
pub fn enumerate_trees(g: &GkmGraph, root_vertex: usize, degree: &[i64], n_marks: usize) -> Vec<DecoratedTree> {
    if n_marks == 0 || degree.len() != g.picard || degree.iter().any(|&x| x < 0) || root_vertex >= g.vertices.len() {
        return Vec::new();
    }
    let mut memo = Memo::new();
    let subs = subtrees(g, root_vertex, degree, &mut memo);
    let mut out: BTreeMap<String, DecoratedTree> = BTreeMap::new();
    for sub in subs.iter() {
        let mut t = DecoratedTree::point(root_vertex, g.picard);
        flatten(sub, &mut t, 0);
        t.degree = degree.to_vec();
        for t in place_marks(t, 2, n_marks) {
            out.entry(t.canonical_form()).or_insert(t);
        }
    }
    out.into_values().collect()
}

fn place_marks(t: DecoratedTree, next: usize, n_marks: usize) -> Vec<DecoratedTree> {
    if next > n_marks {
        return vec![t];
    }
    let mut out = Vec::new();
    for v in 0..t.vertices.len() {
        let mut u = t.clone();
        u.vertices[v].marks.push(next);
        out.extend(place_marks(u, next + 1, n_marks));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gkm::{build_flag_sl, build_projective_space};

    #[test]
    fn p1_counts() {
        let g = build_projective_space(1);
        let counts: Vec<usize> = (0..5).map(|d| enumerate_trees(&g, 0, &[d], 1).len()).collect();
        assert_eq!(counts[..4], [1, 1, 3, 8]);
    }

    #[test]
    fn sl3_four_trees() {
        let g = build_flag_sl(3);
        let e = g.vertex_index("e").unwrap();
        let ts = enumerate_trees(&g, e, &[1, 1], 1);
        let mut shapes: Vec<String> = ts.iter().map(|t| t.describe(&g)).collect();
        shapes.sort();
        assert_eq!(
            shapes,
            vec![
                "e*1 -1_0- (12) -1_0- (132)",
                "e*1 -1_0- (13)",
                "e*1 -1_0- (23) -1_0- (123)",
                "e*1 { -1_0- (12) ; -1_0- (23) }",
            ]
        );
    }

    #[test]
    fn degrees_add_up() {
        let g = build_projective_space(2);
        for t in enumerate_trees(&g, 0, &[3], 1) {
            assert_eq!(t.total_degree(&g), vec![3]);
        }
    }

    #[test]
    fn extra_marks() {
        let g = build_projective_space(1);
        // single edge, second mark at either end
        assert_eq!(enumerate_trees(&g, 0, &[1], 2).len(), 2);
        assert_eq!(enumerate_trees(&g, 0, &[0], 3).len(), 1);
        assert!(enumerate_trees(&g, 0, &[1], 0).is_empty());
    }
}
