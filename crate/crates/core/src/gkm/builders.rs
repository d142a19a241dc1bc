use crate::algebra::{a_var, ExponentVector};

use super::GkmGraph;

/// Sign convention for flag variety weights at a fixed point `w`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum WeightConvention {
    /// `a_{w(i)} / a_{w(j)}` on the edge `w -- w t_ij`.
    #[default]
    Standard,
    /// The inverse weight.
    Flipped,
}

/// How curve classes are attached to flag variety edges.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ClassConvention {
    /// By the weight type `a_k / a_l` (`k < l`): sum of simple classes `k .. l-1`.
    #[default]
    WeightType,
    /// By the transposition position `t_ij`: sum of simple classes `i .. j-1`.
    Position,
}

fn ratio(k: usize, l: usize) -> ExponentVector {
    ExponentVector::var(a_var(k), 1).add(&ExponentVector::var(a_var(l), -1))
}

/// `P^n` with torus variables `a_0 .. a_n`.
pub fn build_projective_space(n: usize) -> GkmGraph {
    assert!(n >= 1, "P^n needs n >= 1");
    let mut g = GkmGraph::new(format!("pn:{n}"), n + 1, 1);
    for i in 0..=n {
        g.add_vertex(i.to_string());
    }
    for i in 0..=n {
        for j in i + 1..=n {
            g.add_edge(i, j, ratio(i, j), vec![1]);
        }
    }
    g
}

/// Full flags `SL_n / B` with torus variables `a_1 .. a_n`.
pub fn build_flag_sl(n: usize) -> GkmGraph {
    build_flag_sl_with(n, WeightConvention::Standard, ClassConvention::WeightType)
}

pub fn build_flag_sl_with(n: usize, weights: WeightConvention, classes: ClassConvention) -> GkmGraph {
    assert!(n >= 2, "SL_n/B needs n >= 2");
    let perms = permutations(n);
    let mut g = GkmGraph::new(format!("slflag:{n}"), n, n - 1);
    for p in &perms {
        g.add_vertex(cycle_notation(p));
    }
    for (a, p) in perms.iter().enumerate() {
        for i in 0..n {
            for j in i + 1..n {
                let mut q = p.clone();
                q.swap(i, j);
                let b = perms.binary_search(&q).expect("permutation listed");
                if b < a {
                    continue;
                }
                let (k, l) = (p[i], p[j]);
                let weight = match weights {
                    WeightConvention::Standard => ratio(k, l),
                    WeightConvention::Flipped => ratio(l, k),
                };
                let (lo, hi) = match classes {
                    ClassConvention::WeightType => (k.min(l), k.max(l)),
                    ClassConvention::Position => (i + 1, j + 1),
                };
                let mut class = vec![0; n - 1];
                for c in class.iter_mut().take(hi - 1).skip(lo - 1) {
                    *c = 1;
                }
                g.add_edge(a, b, weight, class);
            }
        }
    }
    g
}

/// One-line permutations of `1..=n`, lexicographic, identity first.
fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (1..=n).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (0..n - 1).rev().find(|&i| cur[i] < cur[i + 1]) else { break };
        let j = (i + 1..n).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
    out
}

/// Cycle notation with `e` for the identity; digits are concatenated for
/// `n <= 9`, comma separated otherwise.
pub fn cycle_notation(p: &[usize]) -> String {
    let n = p.len();
    let mut seen = vec![false; n + 1];
    let mut out = String::new();
    for start in 1..=n {
        if seen[start] || p[start - 1] == start {
            continue;
        }
        let mut cyc = vec![start];
        seen[start] = true;
        let mut x = p[start - 1];
        while x != start {
            seen[x] = true;
            cyc.push(x);
            x = p[x - 1];
        }
        let sep = if n <= 9 { "" } else { "," };
        let body: Vec<String> = cyc.iter().map(|c| c.to_string()).collect();
        out.push_str(&format!("({})", body.join(sep)));
    }
    if out.is_empty() {
        "e".to_string()
    } else {
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn projective_counts() {
        for n in 1..6 {
            let g = build_projective_space(n);
            assert_eq!(g.vertices.len(), n + 1);
            assert_eq!(g.edges.len(), n * (n + 1) / 2);
        }
        let g = build_projective_space(2);
        let w: Vec<String> = g.edges.iter().map(|e| e.weight.to_string()).collect();
        assert_eq!(w, vec!["a0 a1^-1", "a0 a2^-1", "a1 a2^-1"]);
    }

    #[test]
    fn sl3_hexagon() {
        let g = build_flag_sl(3);
        assert_eq!(g.vertices, vec!["e", "(23)", "(12)", "(123)", "(132)", "(13)"]);
        assert_eq!(g.edges.len(), 9);
        let e = g.vertex_index("e").unwrap();
        let s13 = g.vertex_index("(13)").unwrap();
        let edge = g.incident(e).into_iter().find(|&x| g.other_end(x, e) == s13).unwrap();
        assert_eq!(g.class(edge), &[1, 1]);
        assert_eq!(g.weight_at(edge, e).to_string(), "a1 a3^-1");
        let mut types: Vec<Vec<i64>> = g.edges.iter().map(|e| e.class.clone()).collect();
        types.sort();
        types.dedup();
        assert_eq!(types, vec![vec![0, 1], vec![1, 0], vec![1, 1]]);
    }

    #[test]
    fn sl2_is_p1() {
        let g = build_flag_sl(2);
        assert_eq!(g.vertices.len(), 2);
        assert_eq!(g.edges.len(), 1);
        assert_eq!(g.edges[0].class, vec![1]);
        assert_eq!(g.edges[0].weight.to_string(), "a1 a2^-1");
    }

    #[test]
    fn cycles() {
        assert_eq!(cycle_notation(&[2, 3, 1]), "(123)");
        assert_eq!(cycle_notation(&[3, 1, 2]), "(132)");
        assert_eq!(cycle_notation(&[2, 1, 4, 3]), "(12)(34)");
        assert_eq!(cycle_notation(&[1, 2]), "e");
    }
}
