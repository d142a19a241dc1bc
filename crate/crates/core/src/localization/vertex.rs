use crate::algebra::{rat, rat_int, ExactScalar, Monomial, Phase, RatFun};
use crate::error::{Error, Result};

/// A special point on a contracted component: a node with weight `w` and
/// input `gamma`, or a marked point (`leg = false`, weight `q`).
#[derive(Clone, Debug)]
pub struct VertexPoint {
    pub weight: Monomial,
    pub gamma: RatFun,
    /// Nodes carry a factor of the tangent class term.
    pub leg: bool,
}

impl VertexPoint {
    pub fn node(weight: Monomial, gamma: RatFun) -> Self {
        VertexPoint { weight, gamma, leg: true }
    }

    pub fn mark(weight: Monomial) -> Self {
        VertexPoint { weight, gamma: RatFun::one(), leg: false }
    }
}

/// `multiplicity` isomorphic points permuted by `S_multiplicity`.
#[derive(Clone, Debug)]
pub struct PermGroup {
    pub point: VertexPoint,
    pub multiplicity: usize,
}

fn one_minus_inv(m: &Monomial) -> Result<RatFun> {
    RatFun::one_minus_pow(&ExactScalar::one(), m, -1).map_err(|_| Error::Degenerate(format!("node weight {m} equals 1")))
}

/// `chi(M_{0,n}, prod 1/(1 - w_i L_i))`, with the usual conventions for
/// `n = 1, 2`.
pub fn yp_factor(ws: &[Monomial]) -> Result<RatFun> {
    match ws.len() {
        0 => Err(Error::Invalid("vertex without special points".into())),
        1 => Ok(RatFun::one_minus(&ExactScalar::one(), &ws[0])),
        2 => one_minus_inv(&ws[0].mul(&ws[1])),
        n => {
            let mut prod = RatFun::one();
            let mut bracket = RatFun::one();
            for w in ws {
                let inv = one_minus_inv(w)?;
                bracket = bracket.add(&RatFun::monomial(w.clone()).mul(&inv));
                prod = prod.mul(&inv);
            }
            Ok(prod.mul(&bracket.pow(n as i32 - 3)?))
        }
    }
}

/// Vertex with no symmetry: `Lambda^(#nodes - 1) * prod gamma_i * YP`.
pub fn vertex_factor_plain(points: &[VertexPoint], lambda: &RatFun) -> Result<RatFun> {
    let ws: Vec<Monomial> = points.iter().map(|p| p.weight.clone()).collect();
    let mut out = yp_factor(&ws)?.div(lambda)?;
    for p in points {
        out = out.mul(&p.gamma);
        if p.leg {
            out = out.mul(lambda);
        }
    }
    Ok(out)
}

/// `Psi^r(gamma * Lambda) / (1 - Psi^r(w) * lambda)` where `lambda` is the
/// root of unity `exp(2 pi i * eigen)`.
fn insertion(p: &VertexPoint, lambda: &RatFun, r: i64, eigen: Phase) -> Result<RatFun> {
    let mut g = p.gamma.clone();
    if p.leg {
        g = g.mul(lambda);
    }
    let g = if r == 1 { g } else { g.adams(r)? };
    let w = p.weight.pow(r);
    let w = w.with_phase(w.phase.add(&eigen));
    Ok(g.mul(&one_minus_inv(&w)?))
}

/// Lefschetz trace of the permutation with the given cycles on the vertex
/// moduli, before dividing by `Lambda`.
fn trace(points: &[VertexPoint], cycles: &[Vec<usize>], lambda: &RatFun) -> Result<RatFun> {
    let n = points.len();
    let fixed: Vec<usize> = cycles.iter().filter(|c| c.len() == 1).map(|c| c[0]).collect();
    let long: Vec<&Vec<usize>> = cycles.iter().filter(|c| c.len() > 1).collect();
    if long.is_empty() {
        let mut gl = points.to_vec();
        for p in &mut gl {
            if p.leg {
                p.gamma = p.gamma.mul(lambda);
            }
            p.leg = false;
        }
        return vertex_factor_plain(&gl, &RatFun::one());
    }
    let ins = |i: usize, r: i64, eigen: Phase| insertion(&points[i], lambda, r, eigen);
    let half = Phase::new(1, 2);
    match (n, long.len(), long[0].len()) {
        // M_{0,3} is a point; the fixed point sees the eigenvalue -1
        (3, 1, 2) => Ok(ins(fixed[0], 1, half)?.mul(&ins(long[0][0], 2, Phase::ZERO)?)),
        // the fixed locus of a transposition on M_{0,4} is two points
        (4, 1, 2) => {
            let (a, b, c) = (fixed[0], fixed[1], long[0][0]);
            let cyc = ins(c, 2, Phase::ZERO)?;
            let minus = ins(a, 1, half)?.mul(&ins(b, 1, half)?);
            let plus = ins(a, 1, Phase::ZERO)?.mul(&ins(b, 1, Phase::ZERO)?);
            Ok(minus.add(&plus).mul(&cyc).scale_rational(&rat(1, 2)))
        }
        // a 3-cycle on M_{0,4} fixes two points with eigenvalues omega, omega^2
        (4, 1, 3) => {
            let (a, c) = (fixed[0], long[0][0]);
            let cyc = ins(c, 3, Phase::ZERO)?;
            let mut tot = RatFun::zero();
            for k in 1..3 {
                let lam = Phase::new(k, 3);
                let normal = one_minus_inv(&Monomial::one().with_phase(lam))?;
                tot = tot.add(&ins(a, 1, lam)?.mul(&normal));
            }
            Ok(tot.mul(&cyc))
        }
        _ => Err(Error::Unsupported(format!(
            "permutation-equivariant vertex with {n} points and cycle type {:?}",
            cycles.iter().map(|c| c.len()).collect::<Vec<_>>()
        ))),
    }
}

fn layout(fixed: &[VertexPoint], groups: &[PermGroup]) -> (Vec<VertexPoint>, Vec<Vec<usize>>) {
    let mut points = fixed.to_vec();
    let mut blocks = Vec::new();
    for g in groups {
        let start = points.len();
        for _ in 0..g.multiplicity {
            points.push(g.point.clone());
        }
        blocks.push((start..points.len()).collect());
    }
    (points, blocks)
}

fn partitions(n: usize, max: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in (1..=n.min(max)).rev() {
        for mut rest in partitions(n - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// Size of the conjugacy class of cycle type `parts` in `S_n`.
fn class_size(parts: &[usize]) -> u64 {
    let n: usize = parts.iter().sum();
    let mut z = 1u64;
    let mut i = 0;
    while i < parts.len() {
        let j = parts[i..].iter().take_while(|&&p| p == parts[i]).count();
        z *= (parts[i] as u64).pow(j as u32) * factorial(j);
        i += j;
    }
    factorial(n) / z
}

/// Averages the trace over `prod_i S_{k_i}`, one representative per
/// conjugacy class weighted by the class size.
pub fn vertex_factor_perm(fixed: &[VertexPoint], groups: &[PermGroup], lambda: &RatFun) -> Result<RatFun> {
    let (points, blocks) = layout(fixed, groups);
    let order: u64 = groups.iter().map(|g| factorial(g.multiplicity)).product();
    let mut classes: Vec<(Vec<Vec<usize>>, u64)> = vec![((0..fixed.len()).map(|i| vec![i]).collect(), 1)];
    for block in &blocks {
        let mut next = Vec::new();
        for (cycles, size) in &classes {
            for parts in partitions(block.len(), block.len()) {
                let mut cs = cycles.clone();
                let mut at = 0;
                for &p in &parts {
                    cs.push(block[at..at + p].to_vec());
                    at += p;
                }
                next.push((cs, size * class_size(&parts)));
            }
        }
        classes = next;
    }
    let mut total = RatFun::zero();
    for (cycles, size) in &classes {
        total = total.add(&trace(&points, cycles, lambda)?.scale_rational(&rat_int(*size as i64)));
    }
    total.scale_rational(&rat(1, order as i64)).div(lambda)
}

/// Same average taken element by element.
pub fn vertex_factor_perm_elementwise(fixed: &[VertexPoint], groups: &[PermGroup], lambda: &RatFun) -> Result<RatFun> {
    let (points, blocks) = layout(fixed, groups);
    let mut sigma: Vec<usize> = (0..points.len()).collect();
    let mut total = RatFun::zero();
    let mut count = 0i64;
    let mut err = None;
    each_element(&blocks, 0, &mut sigma, &mut |s| {
        if err.is_some() {
            return;
        }
        match trace(&points, &cycles_of(s), lambda) {
            Ok(v) => {
                total = total.add(&v);
                count += 1;
            }
            Err(e) => err = Some(e),
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    total.scale_rational(&rat(1, count)).div(lambda)
}

fn each_element(blocks: &[Vec<usize>], b: usize, sigma: &mut Vec<usize>, emit: &mut dyn FnMut(&[usize])) {
    if b == blocks.len() {
        emit(sigma);
        return;
    }
    let block = &blocks[b];
    let mut images = block.clone();
    permutations_of(&mut images, 0, &mut |img| {
        for (x, y) in block.iter().zip(img) {
            sigma[*x] = *y;
        }
        each_element(blocks, b + 1, sigma, emit);
    });
    for &x in block {
        sigma[x] = x;
    }
}

fn permutations_of(a: &mut Vec<usize>, i: usize, emit: &mut dyn FnMut(&[usize])) {
    if i == a.len() {
        emit(a);
        return;
    }
    for j in i..a.len() {
        a.swap(i, j);
        permutations_of(a, i + 1, emit);
        a.swap(i, j);
    }
}

fn cycles_of(sigma: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; sigma.len()];
    let mut out = Vec::new();
    for i in 0..sigma.len() {
        if seen[i] {
            continue;
        }
        let mut c = Vec::new();
        let mut j = i;
        while !seen[j] {
            seen[j] = true;
            c.push(j);
            j = sigma[j];
        }
        out.push(c);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{a_var, braces, ExponentVector};

    fn t() -> Monomial {
        Monomial::a(0)
    }

    fn w() -> Monomial {
        Monomial::from_exps(ExponentVector::var(a_var(1), 1))
    }

    #[test]
    fn yp_small_cases() {
        let x = Monomial::a(0);
        let y = Monomial::a(1);
        let z = Monomial::a(2);
        let single = std::slice::from_ref(&x);
        assert!(yp_factor(single).unwrap().equals(&braces(single)));
        assert!(yp_factor(&[x.clone(), y.clone()]).unwrap().equals(&braces(&[x.mul(&y)]).inv().unwrap()));
        let three = braces(&[x.clone(), y.clone(), z.clone()]).inv().unwrap();
        assert!(yp_factor(&[x.clone(), y.clone(), z.clone()]).unwrap().equals(&three));
        let u = Monomial::hbar();
        let four = yp_factor(&[x.clone(), y.clone(), z.clone(), u.clone()]).unwrap();
        let one = RatFun::one();
        let mut bracket = one.clone();
        for m in [&x, &y, &z, &u] {
            bracket = bracket.add(&RatFun::monomial(m.clone()).div(&braces(std::slice::from_ref(m))).unwrap());
        }
        let expect = bracket.div(&braces(&[x, y, z, u])).unwrap();
        assert!(four.equals(&expect));
    }

    #[test]
    fn m03_s2_golden() {
        let q = Monomial::q();
        let gamma = braces(&[w()]);
        let fixed = [VertexPoint::mark(q.clone())];
        let groups = [PermGroup { point: VertexPoint { weight: t(), gamma, leg: false }, multiplicity: 2 }];
        let v = vertex_factor_perm(&fixed, &groups, &RatFun::one()).unwrap();
        let mq = q.with_phase(Phase::new(1, 2));
        let mt = t().with_phase(Phase::new(1, 2));
        let mw = w().with_phase(Phase::new(1, 2));
        let first = braces(&[w(), w()]).div(&braces(&[q.clone(), t(), t()])).unwrap();
        let second = braces(&[w(), mw]).div(&braces(&[mq, t(), mt])).unwrap();
        let expect = first.add(&second).scale_rational(&rat(1, 2));
        assert!(v.equals(&expect), "{v}");
    }

    #[test]
    fn trivial_groups_are_plain() {
        let pts = [VertexPoint::mark(Monomial::q()), VertexPoint::node(t(), braces(&[w()])), VertexPoint::node(w(), RatFun::one())];
        let lambda = braces(&[t()]);
        let groups: Vec<PermGroup> = pts[1..].iter().map(|p| PermGroup { point: p.clone(), multiplicity: 1 }).collect();
        let a = vertex_factor_plain(&pts, &lambda).unwrap();
        let b = vertex_factor_perm(&pts[..1], &groups, &lambda).unwrap();
        assert!(a.equals(&b));
    }

    #[test]
    fn class_sum_matches_elementwise() {
        let lambda = braces(&[t(), t().inv()]);
        let fixed = [VertexPoint::mark(Monomial::q())];
        for k in 2..=3 {
            let groups = [PermGroup { point: VertexPoint::node(t(), braces(&[w()])), multiplicity: k }];
            let a = vertex_factor_perm(&fixed, &groups, &lambda).unwrap();
            let b = vertex_factor_perm_elementwise(&fixed, &groups, &lambda).unwrap();
            assert!(a.equals(&b));
        }
        assert_eq!(class_size(&[2, 1]), 3);
        assert_eq!(class_size(&[2, 2]), 3);
        assert_eq!(partitions(4, 4).len(), 5);
    }
}
