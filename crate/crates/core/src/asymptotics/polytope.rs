//! Small exact polytope routines: Minkowski sums with segments, support
//! functions and facet normals by brute force.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::algebra::Rational;

/// A finite point set standing for its convex hull.
#[derive(Clone, Debug, Default)]
pub struct PointSet {
    points: BTreeSet<Vec<Rational>>,
}

impl PointSet {
    pub fn from_points(it: impl IntoIterator<Item = Vec<Rational>>) -> Self {
        PointSet { points: it.into_iter().collect() }
    }

    pub fn points(&self) -> Vec<Vec<Rational>> {
        self.points.iter().cloned().collect()
    }

    /// Minkowski sum with the segment `[0, w]`, keeping only the points
    /// that can still be hull vertices.
    pub fn add_segment(&mut self, w: &[Rational]) {
        let mut next = self.points.clone();
        for p in &self.points {
            next.insert(p.iter().zip(w).map(|(a, b)| a + b).collect());
        }
        self.points = prune(next);
    }

    pub fn support(&self, sigma: &[Rational]) -> Rational {
        self.points.iter().map(|p| dot(p, sigma)).max().unwrap_or_else(Rational::zero)
    }
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

fn sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Drops points off the boundary of the hull once the set gets large, so
/// repeated segment sums stay cheap.
fn prune(points: BTreeSet<Vec<Rational>>) -> BTreeSet<Vec<Rational>> {
    if points.len() < 64 {
        return points;
    }
    let all: Vec<Vec<Rational>> = points.iter().cloned().collect();
    let maxima: Vec<(Vec<Rational>, Rational)> = facet_normals(&all)
        .into_iter()
        .filter_map(|n| {
            let hi = all.iter().map(|p| dot(p, &n)).max()?;
            let lo = all.iter().map(|p| dot(p, &n)).min()?;
            (lo < hi).then_some((n, hi))
        })
        .collect();
    if maxima.is_empty() {
        return points;
    }
    points.into_iter().filter(|p| maxima.iter().any(|(n, hi)| dot(p, n) == *hi)).collect()
}

/// Basis of the null space of the rows.
pub(crate) fn nullspace(rows: &[Vec<Rational>], width: usize) -> Vec<Vec<Rational>> {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..width {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let row = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(&row) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    let mut out = Vec::new();
    for free in (0..width).filter(|c| !pivots.contains(c)) {
        let mut v = vec![Rational::zero(); width];
        v[free] = Rational::one();
        for (i, &pc) in pivots.iter().enumerate() {
            v[pc] = -m[i][free].clone();
        }
        out.push(v);
    }
    out
}

/// Scales to a primitive integer vector.
fn primitive(v: Vec<Rational>) -> Vec<Rational> {
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Rational::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return v;
    }
    ints.into_iter().map(|x| Rational::from_integer(x / &g)).collect()
}

/// Outer facet normals of the hull of `points`, taken inside its affine
/// span, together with both normals of every hyperplane containing the
/// span.
pub fn facet_normals(points: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let Some(p0) = points.first() else { return Vec::new() };
    let width = p0.len();
    let diffs: Vec<Vec<Rational>> = points.iter().skip(1).map(|p| sub(p, p0)).collect();
    let ortho = nullspace(&diffs, width);
    let dim = width - ortho.len();
    let mut out: BTreeSet<Vec<Rational>> = BTreeSet::new();
    for n in &ortho {
        let n = primitive(n.clone());
        out.insert(n.iter().map(|x| -x).collect());
        out.insert(n);
    }
    if dim == 0 {
        return out.into_iter().collect();
    }
    if dim == 1 {
        // the span direction itself, both ways
        let d = primitive(diffs.iter().find(|d| d.iter().any(|x| !x.is_zero())).unwrap().clone());
        out.insert(d.iter().map(|x| -x).collect());
        out.insert(d);
        return out.into_iter().collect();
    }
    let mut idx: Vec<usize> = (0..dim).collect();
    let n = points.len();
    loop {
        let base = &points[idx[0]];
        let mut rows: Vec<Vec<Rational>> = idx[1..].iter().map(|&i| sub(&points[i], base)).collect();
        rows.extend(ortho.iter().cloned());
        let ns = nullspace(&rows, width);
        if ns.len() == 1 {
            let sigma = primitive(ns[0].clone());
            let h = dot(base, &sigma);
            let above = points.iter().any(|p| dot(p, &sigma) > h);
            let below = points.iter().any(|p| dot(p, &sigma) < h);
            if !(above && below) {
                let sigma = if above { sigma.iter().map(|x| -x).collect() } else { sigma };
                out.insert(sigma);
            }
        }
        // next combination
        let mut k = dim;
        loop {
            if k == 0 {
                return out.into_iter().filter(|s: &Vec<Rational>| s.iter().any(|x| !x.is_zero())).collect();
            }
            k -= 1;
            if idx[k] < n - dim + k {
                idx[k] += 1;
                for j in k + 1..dim {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}
