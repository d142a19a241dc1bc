use crate::gkm::GkmGraph;

use super::{DecoratedTree, KTree};

/// Graphviz rendering; vertex labels carry the GKM label and marks, edge
/// labels read `deg_sector`.
pub fn to_dot(t: &DecoratedTree, g: &GkmGraph, name: &str) -> String {
    let mut out = format!("graph \"{name}\" {{\n");
    for (i, v) in t.vertices.iter().enumerate() {
        let mut label = g.label(v.gkm).to_string();
        for m in &v.marks {
            label.push_str(&format!(" *{m}"));
        }
        out.push_str(&format!("  n{i} [label=\"{label}\"];\n"));
    }
    for e in &t.edges {
        out.push_str(&format!("  n{} -- n{} [label=\"{}_{}\"];\n", e.parent, e.child, e.degree, e.sector));
    }
    out.push_str("}\n");
    out
}

pub fn ktree_to_dot(t: &KTree, g: &GkmGraph, name: &str) -> String {
    to_dot(&t.tree, g, name)
}
