//! GKM graphs: fixed points, invariant curves, weights and curve classes.

mod builders;
mod text;
mod validate;

pub use builders::{build_flag_sl, build_flag_sl_with, build_projective_space, ClassConvention, WeightConvention};
pub use text::{parse_graph, write_graph};
pub use validate::{validate_gkm, FlagData, NormalPair, ValidationReport, Violation};

use serde::Serialize;

use crate::algebra::{a_var, ExponentVector, Monomial};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GkmEdge {
    pub v: usize,
    pub w: usize,
    /// Weight at `v`, an integer vector in the torus slots.
    #[serde(serialize_with = "ser_exps")]
    pub weight: ExponentVector,
    pub class: Vec<i64>,
}

fn ser_exps<S: serde::Serializer>(e: &ExponentVector, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&e.to_string())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GkmGraph {
    pub name: String,
    pub rank: usize,
    pub picard: usize,
    pub vertices: Vec<String>,
    pub edges: Vec<GkmEdge>,
}

impl GkmGraph {
    pub fn new(name: impl Into<String>, rank: usize, picard: usize) -> Self {
        GkmGraph { name: name.into(), rank, picard, vertices: Vec::new(), edges: Vec::new() }
    }

    pub fn add_vertex(&mut self, label: impl Into<String>) -> usize {
        self.vertices.push(label.into());
        self.vertices.len() - 1
    }

    pub fn add_edge(&mut self, v: usize, w: usize, weight: ExponentVector, class: Vec<i64>) -> usize {
        self.edges.push(GkmEdge { v, w, weight, class });
        self.edges.len() - 1
    }

    pub fn vertex_index(&self, label: &str) -> Option<usize> {
        self.vertices.iter().position(|l| l == label).or_else(|| {
            label.parse::<usize>().ok().filter(|&i| i < self.vertices.len())
        })
    }

    pub fn label(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    /// Number of torus slots `a_0 .. a_{k-1}` needed to index every weight.
    pub fn torus_slots(&self) -> usize {
        self.edges
            .iter()
            .map(|e| e.weight.len().saturating_sub(a_var(0)))
            .max()
            .unwrap_or(0)
            .max(self.rank)
    }

    pub fn other_end(&self, edge: usize, v: usize) -> usize {
        let e = &self.edges[edge];
        if e.v == v {
            e.w
        } else {
            debug_assert_eq!(e.w, v);
            e.v
        }
    }

    /// Weight of `edge` at its endpoint `v`.
    pub fn weight_at(&self, edge: usize, v: usize) -> ExponentVector {
        let e = &self.edges[edge];
        if e.v == v {
            e.weight.clone()
        } else {
            debug_assert_eq!(e.w, v);
            e.weight.neg()
        }
    }

    pub fn weight_mono(&self, edge: usize, v: usize) -> Monomial {
        Monomial::from_exps(self.weight_at(edge, v))
    }

    /// Edges incident to `v`, in edge-id order.
    pub fn incident(&self, v: usize) -> Vec<usize> {
        (0..self.edges.len()).filter(|&i| self.edges[i].v == v || self.edges[i].w == v).collect()
    }

    /// Tangent weights at a fixed point.
    pub fn tangent_weights(&self, v: usize) -> Vec<Monomial> {
        self.incident(v).into_iter().map(|e| self.weight_mono(e, v)).collect()
    }

    pub fn class(&self, edge: usize) -> &[i64] {
        &self.edges[edge].class
    }
}
