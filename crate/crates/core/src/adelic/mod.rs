//! Checks of the adelic conditions on computed J-series: where the poles
//! sit, absence of a regular part, and the residue recursion along edges.
//! Also the `q`-exponential and Pochhammer transforms for a point.
//!
//! Residues are those of `f dq/q` in the usual sense. With that sign the
//! edge recursion reads `Res + J_{v'}(q0) E = 0`.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::algebra::{
    binomial_q_roots, linear_factor, q_pochhammer, residue_at, ExactScalar, ExponentVector, Monomial, RatFun,
    Term, Q,
};
use crate::error::{Error, Result};
use crate::gkm::{validate_gkm, GkmGraph};
use crate::jfunction::{compute_jseries, JSeries};
use crate::localization::{recursion_edge_factor, source_weight, Executor, TwistMode};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PoleKind {
    /// `q` a root of unity.
    RootOfUnity,
    /// `q = zeta w_X(e, v)^(-1/m)`.
    WeightRoot { edge: usize, cover: i64 },
    /// Anything else, including `q = 0`.
    Disallowed,
}

#[derive(Clone, Debug, Serialize)]
pub struct PoleSpec {
    /// `None` for `q = 0` or a location that is not a monomial.
    #[serde(serialize_with = "ser_at")]
    pub at: Option<Monomial>,
    /// Order of the root of unity in front of the monomial part.
    pub root_order: i64,
    pub order: i64,
    pub kind: PoleKind,
}

fn ser_at<S: serde::Serializer>(m: &Option<Monomial>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match m {
        Some(m) => s.serialize_str(&m.to_string()),
        None => s.serialize_str("0"),
    }
}

impl PoleSpec {
    pub fn allowed(&self) -> bool {
        self.kind != PoleKind::Disallowed
    }
}

/// `Some(m)` when `x = -w / m` for a positive integer `m`.
fn cover_of(x: &ExponentVector, w: &ExponentVector) -> Option<i64> {
    let i = w.leading_index()?;
    let lambda = x.get(i) / w.get(i);
    if !lambda.is_negative() || x != &w.scale(&lambda) {
        return None;
    }
    let m = -lambda.recip();
    m.is_integer().then(|| m.to_integer().try_into().ok()).flatten()
}

fn classify(g: &GkmGraph, vertex: usize, at: &Monomial) -> PoleKind {
    if at.exps.is_zero() {
        return PoleKind::RootOfUnity;
    }
    for e in g.incident(vertex) {
        if let Some(cover) = cover_of(&at.exps, &g.weight_at(e, vertex)) {
            return PoleKind::WeightRoot { edge: e, cover };
        }
    }
    PoleKind::Disallowed
}

/// Nonzero `q`-poles of `f` with their orders, plus `q = 0` when `f` has a
/// pole there, classified against the edges at `vertex`.
///
/// Orders count binomial factors on both sides and linear factors of the
/// expanded numerator; a denominator that is not a monomial is reported as
/// a disallowed pole of unknown location.
pub fn pole_locus(f: &RatFun, g: &GkmGraph, vertex: usize) -> Vec<PoleSpec> {
    let c = f.canonical().simplify();
    let mut out = Vec::new();
    if c.is_zero() {
        return out;
    }
    let (num, den, factors) = c.parts();
    let mut order: BTreeMap<Monomial, i64> = BTreeMap::new();
    for (b, e) in factors {
        if b.q_exponent().is_zero() {
            continue;
        }
        match binomial_q_roots(b) {
            Some(roots) => {
                for r in roots {
                    *order.entry(r).or_default() -= *e as i64;
                }
            }
            None if *e < 0 => out.push(PoleSpec { at: None, root_order: 0, order: -*e as i64, kind: PoleKind::Disallowed }),
            None => {}
        }
    }
    for (at, ord) in order.iter_mut() {
        if *ord <= 0 {
            continue;
        }
        let lin = linear_factor(at);
        let mut n = num.clone();
        while *ord > 0 {
            match n.div_binomial(&lin.coef, &lin.mono) {
                Some(qt) => {
                    n = qt;
                    *ord -= 1;
                }
                None => break,
            }
        }
    }
    if den.as_term().is_none() && den.slot_range(Q).is_some_and(|(lo, hi)| lo != hi) {
        out.push(PoleSpec { at: None, root_order: 0, order: 1, kind: PoleKind::Disallowed });
    }
    if let Some(v) = c.q_valuation() {
        if v.is_negative() {
            let ord = (-v).ceil().to_integer().try_into().unwrap_or(i64::MAX);
            out.push(PoleSpec { at: None, root_order: 1, order: ord, kind: PoleKind::Disallowed });
        }
    }
    for (at, ord) in order {
        if ord > 0 {
            let kind = classify(g, vertex, &at);
            out.push(PoleSpec { root_order: at.phase.order(), at: Some(at), order: ord, kind });
        }
    }
    out
}

/// True when `f` has no pole at `q = 0` and vanishes at `q = infinity`, so
/// its partial fraction expansion in `q` is all principal parts.
pub fn check_no_regular_part(f: &RatFun) -> bool {
    if f.is_zero() {
        return true;
    }
    match (f.q_valuation(), f.q_degree()) {
        (Some(v), Some(d)) => !v.is_negative() && d.is_negative(),
        _ => true,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SectorCheck {
    pub sector: u32,
    #[serde(serialize_with = "ser_mono")]
    pub pole: Monomial,
    pub pass: bool,
    /// `Res + J_{v'}(q0) E` when nonzero.
    pub difference: Option<String>,
}

fn ser_mono<S: serde::Serializer>(m: &Monomial, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&m.to_string())
}

#[derive(Clone, Debug, Serialize)]
pub struct EdgeRecursionReport {
    pub vertex: usize,
    pub edge: usize,
    pub cover: u32,
    pub degree: Vec<i64>,
    pub sectors: Vec<SectorCheck>,
    /// Whether the residues summed over sectors have rational coefficients.
    pub sector_sum_rational: bool,
}

impl EdgeRecursionReport {
    pub fn pass(&self) -> bool {
        self.sectors.iter().all(|s| s.pass)
    }
}

/// Compares the residues of `J_v^(d)` at the poles of the `m`-fold cover
/// of `edge` with the recursion term built from `J_{v'}`.
pub fn check_edge_recursion(
    g: &GkmGraph,
    jv: &JSeries,
    jw: &JSeries,
    edge: usize,
    cover: u32,
    degree: &[i64],
) -> Result<EdgeRecursionReport> {
    let v = jv.root;
    if g.other_end(edge, v) != jw.root || jv.mode != jw.mode {
        return Err(Error::Invalid("series do not sit at the two ends of the edge".into()));
    }
    let report = validate_gkm(g);
    let flag = report.flag(edge, v).ok_or_else(|| Error::Invalid("missing flag data".into()))?;
    let rest: Vec<i64> = degree.iter().zip(g.class(edge)).map(|(d, c)| d - cover as i64 * c).collect();
    let top = jv.term(degree).ok_or_else(|| Error::Invalid(format!("degree {degree:?} not computed at {v}")))?;
    let lower = jw.term(&rest).ok_or_else(|| Error::Invalid(format!("degree {rest:?} not computed at {}", jw.root)))?;
    let mut sectors = Vec::new();
    let mut residues = Vec::new();
    for s in 0..cover {
        let pole = source_weight(g, edge, v, cover, s).inv();
        let res = residue_at(top, &pole)?;
        let e = recursion_edge_factor(g, flag, cover, s, jv.mode)?;
        let rhs = lower.evaluate_q(&pole)?.mul(&e);
        let diff = res.add(&rhs).canonical().simplify();
        let pass = diff.is_zero();
        sectors.push(SectorCheck { sector: s, pole, pass, difference: (!pass).then(|| diff.to_factored_string()) });
        residues.push(res);
    }
    let total = RatFun::sum(&residues).canonical();
    Ok(EdgeRecursionReport {
        vertex: v,
        edge,
        cover,
        degree: degree.to_vec(),
        sectors,
        sector_sum_rational: total.has_rational_coefficients(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct TermCheck {
    pub vertex: usize,
    pub degree: Vec<i64>,
    pub no_regular_part: bool,
    pub poles: Vec<PoleSpec>,
}

impl TermCheck {
    pub fn pass(&self) -> bool {
        self.no_regular_part && self.poles.iter().all(PoleSpec::allowed)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AdelicReport {
    pub terms: Vec<TermCheck>,
    pub recursions: Vec<EdgeRecursionReport>,
}

impl AdelicReport {
    pub fn pass(&self) -> bool {
        self.terms.iter().all(TermCheck::pass) && self.recursions.iter().all(EdgeRecursionReport::pass)
    }
}

/// Pole and regular-part checks for every term of `J_root` up to `cap`,
/// and the edge recursion for every edge at `root`, cover and degree.
pub fn verify_adelic(g: &GkmGraph, root: usize, mode: TwistMode, cap: &[i64], exec: Executor) -> Result<AdelicReport> {
    let jv = compute_jseries(g, root, mode, cap, exec)?;
    let mut terms = Vec::new();
    for (d, f) in &jv.terms {
        terms.push(TermCheck {
            vertex: root,
            degree: d.clone(),
            no_regular_part: d.iter().all(|&x| x == 0) || check_no_regular_part(f),
            poles: pole_locus(f, g, root),
        });
    }
    let mut recursions = Vec::new();
    let mut others: BTreeMap<usize, JSeries> = BTreeMap::new();
    for e in g.incident(root) {
        let w = g.other_end(e, root);
        if let std::collections::btree_map::Entry::Vacant(slot) = others.entry(w) {
            slot.insert(compute_jseries(g, w, mode, cap, exec)?);
        }
        for d in jv.terms.keys() {
            let mut m = 1u32;
            loop {
                let fits = d.iter().zip(g.class(e)).all(|(x, c)| m as i64 * c <= *x);
                if !fits || g.class(e).iter().all(|&c| c == 0) {
                    break;
                }
                recursions.push(check_edge_recursion(g, &jv, &others[&w], e, m, d)?);
                m += 1;
            }
        }
    }
    Ok(AdelicReport { terms, recursions })
}

/// Coefficients of `x^n` in `exp_q(x) = sum x^n / (q;q)_n` for
/// `n <= order`.
pub fn q_exp(order: usize) -> Vec<RatFun> {
    let q = Term::mono(Monomial::q());
    (0..=order as i64)
        .map(|n| q_pochhammer(&q, &q, n, false).and_then(|p| p.inv()).expect("(q;q)_n is invertible"))
        .collect()
}

/// Checks `(1 - x) E(x) = E(q x)` coefficientwise.
pub fn q_exp_recurrence_holds(coeffs: &[RatFun]) -> bool {
    coeffs.iter().enumerate().all(|(n, c)| {
        let left = if n == 0 { c.clone() } else { c.sub(&coeffs[n - 1]) };
        let right = c.mul(&RatFun::monomial(Monomial::q().pow(n as i64)));
        left.equals(&right)
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TransformDirection {
    Multiply,
    Divide,
}

/// `f_d (lambda q; q)_{l d}` or `f_d / (lambda q; q)_{l d}` for each `d`.
pub fn pochhammer_transform(f: &[RatFun], lambda: &Monomial, ell: u32, dir: TransformDirection) -> Result<Vec<RatFun>> {
    if ell == 0 {
        return Err(Error::Invalid("l must be positive".into()));
    }
    let q = Term::mono(Monomial::q());
    let x = Term::mono(lambda.mul(&Monomial::q()));
    f.iter()
        .enumerate()
        .map(|(d, fd)| {
            let p = q_pochhammer(&x, &q, ell as i64 * d as i64, false)?;
            match dir {
                TransformDirection::Multiply => Ok(fd.mul(&p)),
                TransformDirection::Divide => fd.div(&p),
            }
        })
        .collect()
}

/// Whether consecutive terms of a one-parameter series have the ratio of
/// the `P^n` closed form at fixed point `i`.
pub fn is_pn_hypergeometric(series: &JSeries, n: usize, i: usize) -> bool {
    let weights: Vec<Monomial> = (0..=n).map(|j| Monomial::a(i).div(&Monomial::a(j))).collect();
    let one = ExactScalar::one();
    let Some(f0) = series.term(&[0]) else { return false };
    if !f0.is_one() {
        return false;
    }
    let mut prev = f0.clone();
    for d in 1..=series.cap[0] {
        let Some(f) = series.term(&[d]) else { return false };
        let mut step = RatFun::one();
        for w in &weights {
            if series.mode == TwistMode::Cotangent {
                step = step.mul(&RatFun::one_minus(&one, &Monomial::hbar().mul(&Monomial::q().pow(d - 1)).mul(w)));
            }
            match step.div(&RatFun::one_minus(&one, &Monomial::q().pow(d).mul(w))) {
                Ok(s) => step = s,
                Err(_) => return false,
            }
        }
        if !f.equals(&prev.mul(&step)) {
            return false;
        }
        prev = f.clone();
    }
    true
}
