//! J-series assembled degree by degree, the closed form for projective
//! space, and the quasimap vertex series for complete flags.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::adelic::check_no_regular_part;
use crate::algebra::{q_pochhammer, Binomial, ExactScalar, Monomial, RatFun, Term};
use crate::error::{Error, Result};
use crate::gkm::GkmGraph;
use crate::localization::{Executor, Localizer, TwistMode};

#[derive(Clone, Debug)]
pub struct JSeries {
    pub graph: String,
    pub root: usize,
    pub mode: TwistMode,
    pub cap: Vec<i64>,
    pub terms: BTreeMap<Vec<i64>, RatFun>,
    /// Degrees whose term failed the no-regular-part check.
    pub waived: BTreeSet<Vec<i64>>,
}

impl JSeries {
    pub fn term(&self, degree: &[i64]) -> Option<&RatFun> {
        self.terms.get(degree)
    }
}

/// All vectors `0 <= d <= cap`, in lexicographic order.
pub fn degrees_up_to(cap: &[i64]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for &c in cap {
        out = out
            .into_iter()
            .flat_map(|p: Vec<i64>| {
                (0..=c.max(-1)).map(move |x| {
                    let mut v = p.clone();
                    v.push(x);
                    v
                })
            })
            .collect();
    }
    out.sort();
    out
}

/// Binomials likely to divide a term at `root` of total degree `<= d`:
/// `1 - q^k w` and `1 - hbar q^k w` over tangent weights and `w = 1`.
fn factor_pool(g: &GkmGraph, root: usize, d: i64) -> Vec<Binomial> {
    let mut ws = vec![Monomial::one()];
    ws.extend(g.tangent_weights(root));
    let mut pool = Vec::new();
    for w in &ws {
        for k in 0..=d {
            let base = Monomial::q().pow(k).mul(w);
            for m in [base.clone(), Monomial::hbar().mul(&base)] {
                if m.exps.is_zero() {
                    continue;
                }
                let f = RatFun::one_minus(&ExactScalar::one(), &m);
                pool.extend(f.factors().keys().cloned());
            }
        }
    }
    pool
}

/// Cancels what trial division can and pulls out the usual binomial
/// factors, so terms print in factored form.
pub fn tidy(f: &RatFun, g: &GkmGraph, root: usize, d: i64) -> RatFun {
    f.canonical().simplify().extract_factors(&factor_pool(g, root, d))
}

/// `J^(d)` at `root` for every `0 <= d <= cap`.
pub fn compute_jseries(g: &GkmGraph, root: usize, mode: TwistMode, cap: &[i64], exec: Executor) -> Result<JSeries> {
    if cap.len() != g.picard {
        return Err(Error::Invalid(format!("degree cap has {} entries, graph has Picard rank {}", cap.len(), g.picard)));
    }
    let loc = Localizer::new(g, mode)?;
    let mut terms = BTreeMap::new();
    let mut waived = BTreeSet::new();
    for d in degrees_up_to(cap) {
        let f = if d.iter().all(|&x| x == 0) {
            RatFun::one()
        } else {
            let total = d.iter().sum::<i64>();
            tidy(&loc.sum_over_trees(root, &d, exec)?, g, root, total)
        };
        if !d.iter().all(|&x| x == 0) && !check_no_regular_part(&f) {
            waived.insert(d.clone());
        }
        terms.insert(d, f);
    }
    Ok(JSeries { graph: g.name.clone(), root, mode, cap: cap.to_vec(), terms, waived })
}

fn pn_weights(n: usize, i: usize) -> Vec<Monomial> {
    (0..=n).map(|j| Monomial::a(i).div(&Monomial::a(j))).collect()
}

/// `prod_j (hbar w_j; q)_d / (q w_j; q)_d` with `w_j = a_i / a_j`; the
/// numerator is dropped when untwisted.
pub fn hypergeometric_term(n: usize, i: usize, d: i64, mode: TwistMode) -> Result<RatFun> {
    let base = Term::mono(Monomial::q());
    let mut out = RatFun::one();
    for w in pn_weights(n, i) {
        if mode == TwistMode::Cotangent {
            out = out.mul(&q_pochhammer(&Term::mono(Monomial::hbar().mul(&w)), &base, d, false)?);
        }
        out = out.div(&q_pochhammer(&Term::mono(Monomial::q().mul(&w)), &base, d, false)?)?;
    }
    Ok(out)
}

/// Closed-form cotangent J-series of `P^n` at fixed point `i`.
pub fn hypergeometric_i(n: usize, i: usize, cap: i64) -> Result<JSeries> {
    hypergeometric_i_with_mode(n, i, cap, TwistMode::Cotangent)
}

pub fn hypergeometric_i_with_mode(n: usize, i: usize, cap: i64, mode: TwistMode) -> Result<JSeries> {
    if i > n {
        return Err(Error::Invalid(format!("fixed point {i} out of range for P^{n}")));
    }
    let mut terms = BTreeMap::new();
    for d in 0..=cap.max(0) {
        terms.insert(vec![d], hypergeometric_term(n, i, d, mode)?);
    }
    Ok(JSeries { graph: format!("P{n}"), root: i, mode, cap: vec![cap], terms, waived: BTreeSet::new() })
}

/// Whether `f` is literally `prod (hbar w; q)_d / (q w; q)_d` over the
/// `P^n` weights at `i`: compared factor by factor, not by value.
pub fn is_self_dual_form(f: &RatFun, n: usize, i: usize, d: i64) -> bool {
    let Ok(expect) = hypergeometric_term(n, i, d, TwistMode::Cotangent) else {
        return false;
    };
    let (a, b) = (f.canonical(), expect.canonical());
    a.num().is_one() && a.den().is_one() && a.factors() == b.factors()
}

#[derive(Clone, Debug, Serialize)]
pub struct DegreeComparison {
    pub degree: Vec<i64>,
    pub equal: bool,
    /// `a - b` when they differ.
    pub difference: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SeriesComparison {
    pub degrees: Vec<DegreeComparison>,
    /// Degrees present on only one side.
    pub missing: Vec<Vec<i64>>,
}

impl SeriesComparison {
    pub fn all_equal(&self) -> bool {
        self.missing.is_empty() && self.degrees.iter().all(|d| d.equal)
    }
}

pub fn compare_series(a: &JSeries, b: &JSeries) -> SeriesComparison {
    let mut degrees = Vec::new();
    let mut missing = Vec::new();
    let keys: BTreeSet<&Vec<i64>> = a.terms.keys().chain(b.terms.keys()).collect();
    for d in keys {
        match (a.terms.get(d), b.terms.get(d)) {
            (Some(x), Some(y)) => {
                let diff = x.sub(y).canonical().simplify();
                let equal = diff.is_zero();
                let difference = (!equal).then(|| diff.to_factored_string());
                degrees.push(DegreeComparison { degree: d.clone(), equal, difference });
            }
            _ => missing.push(d.clone()),
        }
    }
    SeriesComparison { degrees, missing }
}

/// Flag-vortex degrees `d_{i,j}` for `1 <= j <= i <= n - 1`, flattened row
/// by row.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct VortexDegree(pub Vec<i64>);

impl VortexDegree {
    fn get(&self, n: usize, i: usize, j: usize) -> i64 {
        if i == n {
            return 0;
        }
        self.0[(i - 1) * i / 2 + (j - 1)]
    }

    /// Curve class `(sum_j d_{1,j}, ..., sum_j d_{n-1,j})`.
    pub fn class(&self, n: usize) -> Vec<i64> {
        (1..n).map(|i| (1..=i).map(|j| self.get(n, i, j)).sum()).collect()
    }
}

/// Membership test for the summation cone.
pub type ConePredicate = fn(&VortexDegree) -> bool;

/// The default cone: all `d_{i,j} >= 0`.
pub fn nonnegative_cone(d: &VortexDegree) -> bool {
    d.0.iter().all(|&x| x >= 0)
}

#[derive(Clone, Debug)]
pub struct QuasimapSeries {
    pub n: usize,
    pub terms: BTreeMap<VortexDegree, RatFun>,
    /// Cone points where a `(q;q)` symbol of negative length makes the
    /// summand infinite; they are left out.
    pub divergent: Vec<VortexDegree>,
}

impl QuasimapSeries {
    /// Terms summed by curve class.
    pub fn by_class(&self) -> BTreeMap<Vec<i64>, RatFun> {
        let mut groups: BTreeMap<Vec<i64>, Vec<&RatFun>> = BTreeMap::new();
        for (d, f) in &self.terms {
            groups.entry(d.class(self.n)).or_default().push(f);
        }
        groups.into_iter().map(|(k, v)| (k, RatFun::sum(v))).collect()
    }
}

fn a_ratio(j: usize, k: usize) -> Monomial {
    Monomial::a(j).div(&Monomial::a(k))
}

/// `(hbar x; q)_m / (q x; q)_m`.
fn ratio(x: &Monomial, m: i64) -> Result<RatFun> {
    let base = Term::mono(Monomial::q());
    let top = q_pochhammer(&Term::mono(Monomial::hbar().mul(x)), &base, m, false)?;
    let bottom = q_pochhammer(&Term::mono(Monomial::q().mul(x)), &base, m, false)?;
    top.div(&bottom)
}

/// One summand of the vertex function.
pub fn quasimap_summand(n: usize, d: &VortexDegree) -> Result<RatFun> {
    let mut out = RatFun::one();
    for i in 1..n {
        for j in 1..=i {
            for k in 1..=i {
                out = out.mul(&ratio(&a_ratio(j, k), d.get(n, i, j) - d.get(n, i, k))?);
            }
            for k in 1..=i + 1 {
                out = out.div(&ratio(&a_ratio(j, k), d.get(n, i, j) - d.get(n, i + 1, k))?)?;
            }
        }
    }
    Ok(out)
}

/// Vertex function of `T^* Fl_n` truncated to `sum_j d_{i,j} <= caps[i-1]`
/// and restricted to `cone`.
pub fn quasimap_vertex_v(n: usize, caps: &[i64], cone: ConePredicate) -> Result<QuasimapSeries> {
    if n < 2 || caps.len() != n - 1 {
        return Err(Error::Invalid(format!("need n >= 2 and {} caps", n.saturating_sub(1))));
    }
    let mut rows: Vec<Vec<Vec<i64>>> = Vec::new();
    for (i, &cap) in caps.iter().enumerate() {
        // compositions of every total <= cap into i + 1 parts
        let row: Vec<Vec<i64>> = degrees_up_to(&vec![cap; i + 1])
            .into_iter()
            .filter(|v| v.iter().sum::<i64>() <= cap)
            .collect();
        rows.push(row);
    }
    let mut points = vec![Vec::new()];
    for row in &rows {
        points = points
            .into_iter()
            .flat_map(|p: Vec<i64>| {
                row.iter().map(move |r| {
                    let mut v = p.clone();
                    v.extend(r);
                    v
                })
            })
            .collect();
    }
    let mut terms = BTreeMap::new();
    let mut divergent = Vec::new();
    for p in points {
        let d = VortexDegree(p);
        if !cone(&d) {
            continue;
        }
        match quasimap_summand(n, &d) {
            Ok(f) => {
                terms.insert(d, f);
            }
            Err(Error::Pole(_) | Error::DivisionByZero) => divergent.push(d),
            Err(e) => return Err(e),
        }
    }
    Ok(QuasimapSeries { n, terms, divergent })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::braces;
    use num_traits::Signed;

    #[test]
    fn boxes() {
        assert_eq!(degrees_up_to(&[1, 1]), vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert_eq!(degrees_up_to(&[]), vec![Vec::<i64>::new()]);
    }

    #[test]
    fn p1_closed_form_degree_two() {
        let t = a_ratio(0, 1);
        let (q, h) = (Monomial::q(), Monomial::hbar());
        let expect = braces(&[h.clone(), h.mul(&t), h.mul(&q), h.mul(&q).mul(&t)])
            .div(&braces(&[q.clone(), q.mul(&t), q.pow(2), q.pow(2).mul(&t)]))
            .unwrap();
        let s = hypergeometric_i(1, 0, 2).unwrap();
        assert!(s.term(&[2]).unwrap().equals(&expect));
        assert!(s.term(&[0]).unwrap().is_one());
        for d in 0..=2 {
            assert!(is_self_dual_form(s.term(&[d]).unwrap(), 1, 0, d));
        }
        assert!(!is_self_dual_form(&expect.mul(&expect), 1, 0, 2));
    }

    #[test]
    fn fixed_points_differ() {
        let a = hypergeometric_i(1, 0, 2).unwrap();
        let b = hypergeometric_i(1, 1, 2).unwrap();
        let c = compare_series(&a, &b);
        assert!(!c.all_equal());
        assert!(c.degrees[0].equal);
        assert!(compare_series(&a, &a).all_equal());
    }

    #[test]
    fn vortex_n2_degree_one() {
        let v = quasimap_vertex_v(2, &[1], nonnegative_cone).unwrap();
        assert!(v.terms[&VortexDegree(vec![0])].is_one());
        // (q;q)_1 (q a12;q)_1 / ((h;q)_1 (h a12;q)_1)
        let a12 = a_ratio(1, 2);
        let (q, h) = (Monomial::q(), Monomial::hbar());
        let expect = braces(&[q.clone(), q.mul(&a12)]).div(&braces(&[h.clone(), h.mul(&a12)])).unwrap();
        assert!(v.terms[&VortexDegree(vec![1])].equals(&expect));
    }

    #[test]
    fn vortex_n3() {
        let v = quasimap_vertex_v(3, &[1, 1], nonnegative_cone).unwrap();
        assert!(v.terms[&VortexDegree(vec![0, 0, 0])].is_one());
        // d_{1,1} < d_{2,1} puts (q;q)_{-1} upstairs
        assert!(v.divergent.contains(&VortexDegree(vec![0, 1, 0])));
        let by = v.by_class();
        assert!(by[&vec![0, 0]].is_one());
        // the printed summands are regular at q = 0
        for f in by.values() {
            assert!(!f.q_valuation().unwrap().is_negative(), "{f}");
        }
    }
}
