//! Growth of rational functions in equivariant limits `a_i = t^(sigma_i)`,
//! `t -> infinity`, with `q` and `hbar` held generic.
//!
//! The growth exponent of `f` along `sigma` is the support function of the
//! numerator's Newton polytope minus that of the denominator. Both are
//! additive under products, so nothing needs to be cancelled first.

mod polytope;

pub use polytope::{facet_normals, PointSet};

use num_traits::{Signed, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::Serialize;

use crate::algebra::{a_var, q_pochhammer, rat_int, ExactScalar, Monomial, RatFun, Rational, Term};
use crate::error::{Error, Result};
use crate::gkm::{FlagData, GkmGraph};
use crate::localization::{lambda_factor, source_weight, TwistMode};
use crate::trees::KTree;

/// Number of torus slots a function touches.
pub fn torus_width(f: &RatFun) -> usize {
    let (num, den, factors) = f.parts();
    let monos = num.terms().chain(den.terms()).map(|(m, _)| m.exps.len()).chain(factors.keys().map(|b| b.mono.exps.len()));
    monos.max().unwrap_or(0).saturating_sub(a_var(0))
}

/// Newton polytopes of numerator and denominator, in the torus slots.
pub fn newton_polytopes(f: &RatFun, width: usize) -> (PointSet, PointSet) {
    let c = f.canonical();
    let (num, den, factors) = c.parts();
    let mut top = PointSet::from_points(num.terms().map(|(m, _)| m.exps.a_part(width)));
    let mut bottom = PointSet::from_points(den.terms().map(|(m, _)| m.exps.a_part(width)));
    for (b, e) in factors {
        let w = b.mono.exps.a_part(width);
        if w.iter().all(Zero::is_zero) {
            continue;
        }
        let side = if *e > 0 { &mut top } else { &mut bottom };
        for _ in 0..e.unsigned_abs() {
            side.add_segment(&w);
        }
    }
    (top, bottom)
}

/// Growth exponent of `f` along `sigma`; `None` for `f = 0`.
pub fn newton_degree(f: &RatFun, sigma: &[Rational]) -> Option<Rational> {
    f.newton_degree(sigma)
}

#[derive(Clone, Debug, Serialize)]
pub struct BalanceVerdict {
    pub balanced: bool,
    /// A direction along which `f` grows, when unbalanced.
    pub witness: Option<Vec<String>>,
    /// Growth exponent along the witness.
    pub growth: Option<String>,
}

/// Whether `f` stays bounded in every equivariant limit, that is whether
/// the numerator's Newton polytope lies inside the denominator's. Only the
/// facet normals of the denominator polytope (and the normals of its
/// affine hull) need testing.
pub fn is_balanced(f: &RatFun) -> BalanceVerdict {
    let width = torus_width(f);
    if f.is_zero() {
        return BalanceVerdict { balanced: true, witness: None, growth: None };
    }
    let (top, bottom) = newton_polytopes(f, width);
    for sigma in facet_normals(&bottom.points()) {
        let h = top.support(&sigma) - bottom.support(&sigma);
        if h.is_positive() {
            return BalanceVerdict {
                balanced: false,
                witness: Some(sigma.iter().map(|x| x.to_string()).collect()),
                growth: Some(h.to_string()),
            };
        }
    }
    BalanceVerdict { balanced: true, witness: None, growth: None }
}

/// `c(v)` from the outgoing weights at a vertex.
pub fn c_of_vertex(weights: &[Monomial]) -> Result<RatFun> {
    let one = ExactScalar::one();
    match weights {
        [] => Err(Error::Invalid("c(v) needs at least one incident edge".into())),
        [w] => Ok(RatFun::one_minus(&one, w)),
        [w1, w2] => RatFun::one_minus(&one, &w1.mul(w2)).inv(),
        ws => ws.iter().try_fold(RatFun::one(), |acc, w| acc.div(&RatFun::one_minus(&one, w))),
    }
}

/// A representative of an asymptotic class, compared to exact values only
/// through growth exponents.
#[derive(Clone, Debug)]
pub struct AsymptoticClass {
    pub value: RatFun,
}

fn cotangent_numerator(g: &GkmGraph, v: usize) -> RatFun {
    let h = Monomial::hbar();
    let one = ExactScalar::one();
    g.tangent_weights(v).iter().fold(RatFun::one(), |acc, w| acc.mul(&RatFun::one_minus(&one, &h.mul(w))))
}

/// Outgoing weight of tree edge `e` at its parent (`at_parent`) or child.
fn outgoing(g: &GkmGraph, t: &KTree, e: usize, at_parent: bool) -> Monomial {
    let te = &t.tree.edges[e];
    let from = t.tree.vertices[te.parent].gkm;
    let w = source_weight(g, te.gkm_edge, from, te.degree, 0);
    if at_parent {
        w
    } else {
        w.inv()
    }
}

/// Outgoing weights at tree vertex `v`; the marked point counts as an
/// edge of weight `q`.
fn vertex_weights(g: &GkmGraph, t: &KTree, v: usize) -> Vec<Monomial> {
    let tree = &t.tree;
    let mut ws = Vec::new();
    if v == 0 {
        ws.push(Monomial::q());
    }
    if let Some(pe) = tree.parent_edge(v) {
        ws.push(outgoing(g, t, pe, false));
    }
    for e in tree.children(v) {
        ws.push(outgoing(g, t, e, true));
    }
    ws
}

/// `Lambda_{-hbar} T_p / Lambda_{-1} T_leaf`.
fn endpoint_ratio(g: &GkmGraph, p: usize, leaf: usize) -> Result<RatFun> {
    cotangent_numerator(g, p).div(&lambda_factor(&g.tangent_weights(leaf), TwistMode::Untwisted))
}

/// Class of a chain whose marked point sits at one end.
pub fn predict_chain(g: &GkmGraph, t: &KTree) -> Result<AsymptoticClass> {
    let tree = &t.tree;
    if tree.edges.is_empty() {
        return Err(Error::Invalid("a chain needs at least one edge".into()));
    }
    let mut path = vec![0];
    loop {
        let v = *path.last().unwrap();
        match tree.children(v).as_slice() {
            [] => break,
            [e] => path.push(tree.edges[*e].child),
            _ => return Err(Error::Invalid("tree is not a chain from its marked point".into())),
        }
    }
    let edges: Vec<usize> = path[1..].iter().map(|&v| tree.parent_edge(v).unwrap()).collect();
    let ws: Vec<Monomial> = edges.iter().map(|&e| outgoing(g, t, e, true)).collect();
    let one = ExactScalar::one();
    let leaf = tree.vertices[*path.last().unwrap()].gkm;
    let mut value = endpoint_ratio(g, tree.vertices[0].gkm, leaf)?;
    // the marked point contributes like an edge of weight q
    value = value.div(&RatFun::one_minus(&one, &Monomial::q().mul(&ws[0])))?;
    for pair in ws.windows(2) {
        value = value.div(&RatFun::one_minus(&one, &pair[0].inv().mul(&pair[1])))?;
    }
    value = value.mul(&RatFun::one_minus(&one, &ws[ws.len() - 1].inv()));
    Ok(AsymptoticClass { value })
}

/// Class of an arbitrary tree: one endpoint ratio per leaf and `c(v)` at
/// every vertex.
pub fn predict_tree(g: &GkmGraph, t: &KTree) -> Result<AsymptoticClass> {
    let tree = &t.tree;
    let p = tree.vertices[0].gkm;
    let mut value = RatFun::one();
    for v in 0..tree.vertices.len() {
        if v != 0 && tree.children(v).is_empty() {
            value = value.mul(&endpoint_ratio(g, p, tree.vertices[v].gkm)?);
        }
        let ws = vertex_weights(g, t, v);
        if ws.len() > 1 || v != 0 {
            value = value.mul(&c_of_vertex(&ws)?);
        }
    }
    Ok(AsymptoticClass { value })
}

/// The balanced part of an edge factor: the ratio of `hbar`-shifted to
/// plain reduced Pochhammer symbols left after `Lambda_{-hbar} T_v /
/// Lambda_{-1} T_{v'}` is split off.
pub fn edge_balanced_part(g: &GkmGraph, flag: &FlagData, deg: u32, sector: u32) -> Result<RatFun> {
    let d = deg as i64;
    let wg = source_weight(g, flag.edge, flag.from, deg, sector);
    let base = Term::mono(wg.inv());
    let mut dirs = vec![(g.weight_mono(flag.edge, flag.from), flag.tangent_degree)];
    dirs.extend(flag.normals.iter().map(|p| (g.weight_mono(p.f, flag.from), p.degree)));
    let mut out = RatFun::one();
    for (wf, a) in dirs {
        let x = wf.mul(&wg.inv());
        let top = q_pochhammer(&Term::mono(Monomial::hbar().mul(&x)), &base, a * d - 1, false)?;
        let bottom = q_pochhammer(&Term::mono(x), &base, a * d - 1, true)?;
        out = out.mul(&top).div(&bottom)?;
    }
    Ok(out)
}

/// Directions at which two growth functions must agree: facet normals of
/// all four Newton polytopes plus `samples` seeded random vectors.
pub fn test_directions(fs: &[&RatFun], samples: usize, seed: u64) -> Vec<Vec<Rational>> {
    let width = fs.iter().map(|f| torus_width(f)).max().unwrap_or(0);
    let mut out = Vec::new();
    for f in fs {
        let (top, bottom) = newton_polytopes(f, width);
        out.extend(facet_normals(&top.points()));
        out.extend(facet_normals(&bottom.points()));
    }
    let mut rng = StdRng::seed_from_u64(seed);
    for _ in 0..samples {
        out.push((0..width).map(|_| rat_int(rng.gen_range(-6..=6))).collect());
    }
    out.sort();
    out.dedup();
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct DirectionCheck {
    pub sigma: Vec<String>,
    pub exact: String,
    pub predicted: String,
    pub equal: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct AsymptoticReport {
    pub checks: Vec<DirectionCheck>,
}

impl AsymptoticReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.equal)
    }
}

/// Compares growth exponents of `exact` and `predicted` along `directions`
/// and along the facet normals of both sides.
pub fn compare_asymptotics(exact: &RatFun, predicted: &RatFun, directions: &[Vec<Rational>]) -> AsymptoticReport {
    let mut dirs = test_directions(&[exact, predicted], 0, 0);
    dirs.extend(directions.iter().cloned());
    dirs.sort();
    dirs.dedup();
    let show = |x: Option<Rational>| x.map_or_else(|| "-inf".to_string(), |r| r.to_string());
    let checks = dirs
        .into_iter()
        .map(|sigma| {
            let a = exact.newton_degree(&sigma);
            let b = predicted.newton_degree(&sigma);
            DirectionCheck {
                sigma: sigma.iter().map(|x| x.to_string()).collect(),
                equal: a == b,
                exact: show(a),
                predicted: show(b),
            }
        })
        .collect();
    AsymptoticReport { checks }
}

/// Whether `f` grows exactly like the monomial `m` in every direction.
pub fn grows_like(f: &RatFun, m: &Monomial, samples: usize) -> bool {
    compare_asymptotics(f, &RatFun::monomial(m.clone()), &test_directions(&[f], samples, 7)).pass()
}
