//! Fixed-locus trees: enumeration, sector promotion, canonical forms.
//!
//! Trees are stored rooted at the vertex carrying mark 1, with edges
//! oriented away from the root. Vertex 0 is always the root.

mod dot;
mod enumerate;
mod oracle;
mod promote;

pub use dot::{to_dot, ktree_to_dot};
pub use enumerate::enumerate_trees;
pub use oracle::{count_oracle, count_oracle_sectored};
pub use promote::{promote, promote_with_counts};

use std::collections::BTreeMap;

use serde::Serialize;

use crate::gkm::GkmGraph;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TreeVertex {
    /// GKM vertex index.
    pub gkm: usize,
    /// Marked-point labels, starting at 1.
    pub marks: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TreeEdge {
    pub parent: usize,
    pub child: usize,
    pub gkm_edge: usize,
    pub degree: u32,
    pub sector: u32,
}

/// A fixed-locus tree. Sectors are all zero until promoted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecoratedTree {
    pub vertices: Vec<TreeVertex>,
    pub edges: Vec<TreeEdge>,
    pub degree: Vec<i64>,
}

impl DecoratedTree {
    /// A single vertex carrying mark 1.
    pub fn point(gkm: usize, picard: usize) -> Self {
        DecoratedTree {
            vertices: vec![TreeVertex { gkm, marks: vec![1] }],
            edges: Vec::new(),
            degree: vec![0; picard],
        }
    }

    pub fn root(&self) -> usize {
        0
    }

    /// Edge ids leaving `v` away from the root.
    pub fn children(&self, v: usize) -> Vec<usize> {
        (0..self.edges.len()).filter(|&i| self.edges[i].parent == v).collect()
    }

    pub fn parent_edge(&self, v: usize) -> Option<usize> {
        self.edges.iter().position(|e| e.child == v)
    }

    pub fn valency(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.parent == v || e.child == v).count()
    }

    /// Sum of `deg * class` over edges.
    pub fn total_degree(&self, g: &GkmGraph) -> Vec<i64> {
        let mut d = vec![0; g.picard];
        for e in &self.edges {
            for (x, c) in d.iter_mut().zip(g.class(e.gkm_edge)) {
                *x += e.degree as i64 * c;
            }
        }
        d
    }

    /// Rooted canonical encoding of the subtree hanging below `v`.
    pub fn subtree_key(&self, v: usize) -> String {
        let tv = &self.vertices[v];
        let mut out = tv.gkm.to_string();
        if !tv.marks.is_empty() {
            let m: Vec<String> = tv.marks.iter().map(|m| m.to_string()).collect();
            out.push('m');
            out.push_str(&m.join("."));
        }
        let mut kids: Vec<String> = self.children(v).into_iter().map(|e| self.branch_key(e)).collect();
        kids.sort();
        out.push('(');
        out.push_str(&kids.join(","));
        out.push(')');
        out
    }

    /// Encoding of an edge together with everything below it.
    pub fn branch_key(&self, e: usize) -> String {
        let te = &self.edges[e];
        format!("{}:{}_{}>{}", te.gkm_edge, te.degree, te.sector, self.subtree_key(te.child))
    }

    pub fn canonical_form(&self) -> String {
        self.subtree_key(0)
    }

    /// Children of `v` grouped into isomorphism classes of legs, in
    /// canonical order.
    pub fn leg_groups(&self, v: usize) -> Vec<Vec<usize>> {
        let mut by_key: BTreeMap<String, Vec<usize>> = BTreeMap::new();
        for e in self.children(v) {
            by_key.entry(self.branch_key(e)).or_default().push(e);
        }
        by_key.into_values().collect()
    }

    /// Order of the group of automorphisms fixing the root.
    pub fn automorphism_order(&self) -> u64 {
        (0..self.vertices.len())
            .flat_map(|v| self.leg_groups(v))
            .map(|g| (1..=g.len() as u64).product::<u64>())
            .product()
    }

    /// Builds a new tree re-rooted at `v` with everything outside the
    /// subtree below `v` removed. Marks are replaced by a single mark 1 at
    /// the new root.
    pub fn subtree_at(&self, v: usize, g: &GkmGraph) -> DecoratedTree {
        let mut out = DecoratedTree::point(self.vertices[v].gkm, g.picard);
        let mut stack = vec![(v, 0usize)];
        while let Some((old, new)) = stack.pop() {
            for e in self.children(old) {
                let te = &self.edges[e];
                out.vertices.push(TreeVertex { gkm: self.vertices[te.child].gkm, marks: Vec::new() });
                let nv = out.vertices.len() - 1;
                out.edges.push(TreeEdge { parent: new, child: nv, ..te.clone() });
                stack.push((te.child, nv));
            }
        }
        out.degree = out.total_degree(g);
        out
    }

    /// Short human-readable form such as `0 -[1]- 1`.
    pub fn describe(&self, g: &GkmGraph) -> String {
        self.describe_from(0, g)
    }

    fn describe_from(&self, v: usize, g: &GkmGraph) -> String {
        let tv = &self.vertices[v];
        let mut out = g.label(tv.gkm).to_string();
        for m in &tv.marks {
            out.push_str(&format!("*{m}"));
        }
        let kids = self.children(v);
        if !kids.is_empty() {
            let parts: Vec<String> = kids
                .iter()
                .map(|&e| {
                    let te = &self.edges[e];
                    format!("-{}_{}- {}", te.degree, te.sector, self.describe_from(te.child, g))
                })
                .collect();
            if parts.len() == 1 {
                out.push(' ');
                out.push_str(&parts[0]);
            } else {
                out.push_str(&format!(" {{ {} }}", parts.join(" ; ")));
            }
        }
        out
    }
}

/// Isomorphic legs at one vertex (the `S_k` data).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LegGroup {
    pub vertex: usize,
    pub edges: Vec<usize>,
}

/// A tree with sectors and its automorphism record.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KTree {
    pub tree: DecoratedTree,
    /// Groups of size at least two.
    pub groups: Vec<LegGroup>,
    pub automorphism_order: u64,
    /// Vertices fixed by every automorphism.
    pub fixed_vertices: Vec<usize>,
    /// Edges fixed by every automorphism.
    pub fixed_edges: Vec<usize>,
    /// Fixed vertices where some isomorphic legs get permuted.
    pub perm_vertices: Vec<usize>,
}

impl KTree {
    pub fn new(tree: DecoratedTree) -> KTree {
        let mut groups = Vec::new();
        for v in 0..tree.vertices.len() {
            for g in tree.leg_groups(v) {
                if g.len() > 1 {
                    groups.push(LegGroup { vertex: v, edges: g });
                }
            }
        }
        let mut fixed_vertices = vec![0];
        let mut fixed_edges = Vec::new();
        let mut perm_vertices = Vec::new();
        let mut i = 0;
        while i < fixed_vertices.len() {
            let v = fixed_vertices[i];
            let mut permuted = false;
            for g in tree.leg_groups(v) {
                if g.len() == 1 {
                    fixed_edges.push(g[0]);
                    fixed_vertices.push(tree.edges[g[0]].child);
                } else {
                    permuted = true;
                }
            }
            if permuted {
                perm_vertices.push(v);
            }
            i += 1;
        }
        fixed_vertices.sort_unstable();
        fixed_edges.sort_unstable();
        perm_vertices.sort_unstable();
        let automorphism_order = tree.automorphism_order();
        KTree { tree, groups, automorphism_order, fixed_vertices, fixed_edges, perm_vertices }
    }

    pub fn canonical_form(&self) -> String {
        self.tree.canonical_form()
    }
}

pub fn canonical_form(t: &KTree) -> String {
    t.canonical_form()
}
