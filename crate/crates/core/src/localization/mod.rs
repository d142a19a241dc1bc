//! Fixed-point contributions of K-theoretic trees and their sums.

mod edge;
mod parallel;
mod vertex;

pub use edge::{edge_factor, recursion_edge_factor, source_weight};
pub use parallel::Executor;
pub use vertex::{vertex_factor_perm, vertex_factor_perm_elementwise, vertex_factor_plain, yp_factor, PermGroup, VertexPoint};

use serde::Serialize;

use crate::algebra::{ExactScalar, Monomial, RatFun};
use crate::error::{Error, Result};
use crate::gkm::{validate_gkm, GkmGraph, ValidationReport};
use crate::trees::{enumerate_trees, promote, KTree};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum TwistMode {
    #[default]
    Untwisted,
    /// Inserts `S_hbar(-R pi_* ev^* Omega_X)`.
    Cotangent,
}

impl std::str::FromStr for TwistMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "untwisted" | "plain" => Ok(TwistMode::Untwisted),
            "cotangent" | "hbar" => Ok(TwistMode::Cotangent),
            other => Err(Error::Parse(format!("unknown mode `{other}`"))),
        }
    }
}

impl std::fmt::Display for TwistMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            TwistMode::Untwisted => "untwisted",
            TwistMode::Cotangent => "cotangent",
        })
    }
}

/// `Lambda_{-1} T` times `Lambda_{-hbar} T` in cotangent mode.
pub fn lambda_factor(tangent: &[Monomial], mode: TwistMode) -> RatFun {
    let one = ExactScalar::one();
    let mut out = RatFun::one();
    for w in tangent {
        out = out.mul(&RatFun::one_minus(&one, w));
        if mode == TwistMode::Cotangent {
            out = out.mul(&RatFun::one_minus(&one, &Monomial::hbar().mul(w)));
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FactorKind {
    Normalization,
    Edge { edge: usize },
    Vertex { vertex: usize },
    PermVertex { vertex: usize },
}

#[derive(Clone, Debug, Serialize)]
pub struct Factor {
    pub kind: FactorKind,
    #[serde(serialize_with = "ser_ratfun")]
    pub value: RatFun,
}

fn ser_ratfun<S: serde::Serializer>(r: &RatFun, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_factored_string())
}

#[derive(Clone, Debug, Serialize)]
pub struct Contribution {
    pub tree: KTree,
    #[serde(serialize_with = "ser_ratfun")]
    pub value: RatFun,
    /// Factors whose product is `value`. Subtrees below permuted legs are
    /// folded into their vertex factor.
    pub provenance: Vec<Factor>,
}

/// Evaluation context for one graph and twist.
pub struct Localizer<'a> {
    pub graph: &'a GkmGraph,
    pub report: ValidationReport,
    pub mode: TwistMode,
}

impl<'a> Localizer<'a> {
    pub fn new(graph: &'a GkmGraph, mode: TwistMode) -> Result<Self> {
        let report = validate_gkm(graph);
        if !report.is_ok() {
            return Err(Error::Invalid(format!("graph fails GKM validation: {:?}", report.violations)));
        }
        Ok(Localizer { graph, report, mode })
    }

    fn lambda(&self, v: usize) -> RatFun {
        lambda_factor(&self.graph.tangent_weights(v), self.mode)
    }

    fn edge(&self, t: &KTree, e: usize) -> Result<RatFun> {
        let te = &t.tree.edges[e];
        let from = t.tree.vertices[te.parent].gkm;
        let flag = self.report.flag(te.gkm_edge, from).ok_or_else(|| Error::Invalid("missing flag data".into()))?;
        edge_factor(self.graph, flag, te.degree, te.sector, self.mode)
    }

    fn leg_weight(&self, t: &KTree, e: usize, at_parent: bool) -> Monomial {
        let te = &t.tree.edges[e];
        let from = t.tree.vertices[te.parent].gkm;
        let w = source_weight(self.graph, te.gkm_edge, from, te.degree, te.sector);
        if at_parent {
            w
        } else {
            w.inv()
        }
    }

    /// Value of the subtree at `v`, including the vertex factor at `v` and
    /// everything below it. Factors are pushed to `prov` when `record`.
    fn subtree(&self, t: &KTree, v: usize, prov: &mut Vec<Factor>, record: bool) -> Result<RatFun> {
        let tree = &t.tree;
        let gv = tree.vertices[v].gkm;
        let lambda = self.lambda(gv);
        let mut fixed = Vec::new();
        match tree.parent_edge(v) {
            None => fixed.push(VertexPoint::mark(Monomial::q())),
            Some(pe) => fixed.push(VertexPoint::node(self.leg_weight(t, pe, false), RatFun::one())),
        }
        if tree.vertices[v].marks.len() > usize::from(v == 0) {
            return Err(Error::Unsupported("marked points beyond the first".into()));
        }
        let mut outside = RatFun::one();
        let mut groups = Vec::new();
        for group in tree.leg_groups(v) {
            let e = group[0];
            let w = self.leg_weight(t, e, true);
            if group.len() == 1 {
                let ef = self.edge(t, e)?;
                if record {
                    prov.push(Factor { kind: FactorKind::Edge { edge: e }, value: ef.clone() });
                }
                let below = self.subtree(t, tree.edges[e].child, prov, record)?;
                outside = outside.mul(&ef).mul(&below);
                fixed.push(VertexPoint::node(w, RatFun::one()));
            } else {
                let mut scratch = Vec::new();
                let gamma = self.edge(t, e)?.mul(&self.subtree(t, tree.edges[e].child, &mut scratch, false)?);
                groups.push(PermGroup { point: VertexPoint::node(w, gamma), multiplicity: group.len() });
            }
        }
        let (kind, vf) = if groups.is_empty() {
            (FactorKind::Vertex { vertex: v }, vertex_factor_plain(&fixed, &lambda)?)
        } else {
            (FactorKind::PermVertex { vertex: v }, vertex_factor_perm(&fixed, &groups, &lambda)?)
        };
        if record {
            prov.push(Factor { kind, value: vf.clone() });
        }
        Ok(outside.mul(&vf))
    }

    /// `Lambda / (1 - q)` at the root.
    pub fn normalization(&self, root: usize) -> Result<RatFun> {
        self.lambda(root).div(&RatFun::one_minus(&ExactScalar::one(), &Monomial::q()))
    }

    pub fn tree_contribution(&self, t: &KTree) -> Result<Contribution> {
        let root = t.tree.vertices[0].gkm;
        let norm = self.normalization(root)?;
        let mut provenance = vec![Factor { kind: FactorKind::Normalization, value: norm.clone() }];
        let body = self.subtree(t, 0, &mut provenance, true)?;
        Ok(Contribution { tree: t.clone(), value: norm.mul(&body), provenance })
    }

    /// All K-theoretic trees of the given degree, in canonical order.
    pub fn ktrees(&self, root: usize, degree: &[i64]) -> Vec<KTree> {
        let mut out: Vec<KTree> = enumerate_trees(self.graph, root, degree, 1).iter().flat_map(promote).collect();
        out.sort_by_cached_key(|k| k.canonical_form());
        out
    }

    pub fn contributions(&self, root: usize, degree: &[i64], exec: Executor) -> Result<Vec<Contribution>> {
        let trees = self.ktrees(root, degree);
        exec.map(&trees, |t| self.tree_contribution(t)).into_iter().collect()
    }

    pub fn sum_over_trees(&self, root: usize, degree: &[i64], exec: Executor) -> Result<RatFun> {
        let cs = self.contributions(root, degree, exec)?;
        Ok(sum_in_order(cs.iter().map(|c| &c.value)))
    }
}

/// Left-to-right sum, so the result does not depend on how the terms were
/// produced.
pub fn sum_in_order<'a>(items: impl IntoIterator<Item = &'a RatFun>) -> RatFun {
    RatFun::sum(items)
}

pub fn tree_contribution(g: &GkmGraph, t: &KTree, mode: TwistMode) -> Result<Contribution> {
    Localizer::new(g, mode)?.tree_contribution(t)
}

pub fn sum_over_trees(g: &GkmGraph, root: usize, degree: &[i64], mode: TwistMode) -> Result<RatFun> {
    Localizer::new(g, mode)?.sum_over_trees(root, degree, Executor::default())
}
