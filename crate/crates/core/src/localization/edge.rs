use crate::algebra::{q_pochhammer, rat, ExactScalar, Monomial, RatFun, Term};
use crate::error::{Error, Result};
use crate::gkm::{FlagData, GkmGraph};

use super::TwistMode;

/// `w_Gamma(e, v) = zeta_deg^sector * w_X(e, v)^(1/deg)`.
pub fn source_weight(g: &GkmGraph, edge: usize, v: usize, deg: u32, sector: u32) -> Monomial {
    g.weight_mono(edge, v).root(deg as i64, sector as i64)
}

/// Tangent and normal directions of an edge seen from `flag.from`, as
/// `(w_X(f, v), a)` pairs with the tangent direction first.
fn directions(g: &GkmGraph, flag: &FlagData) -> Vec<(Monomial, i64)> {
    let mut out = vec![(g.weight_mono(flag.edge, flag.from), flag.tangent_degree)];
    for p in &flag.normals {
        out.push((g.weight_mono(p.f, flag.from), p.degree));
    }
    out
}

/// Contribution of a multiple cover of degree `deg` in sector `sector`
/// over the edge of `flag`, oriented from `flag.from`.
pub fn edge_factor(g: &GkmGraph, flag: &FlagData, deg: u32, sector: u32, mode: TwistMode) -> Result<RatFun> {
    if deg == 0 || sector >= deg {
        return Err(Error::Invalid(format!("edge degree {deg} with sector {sector}")));
    }
    let d = deg as i64;
    let wg = source_weight(g, flag.edge, flag.from, deg, sector);
    let base = Term::mono(wg.inv());
    let mut out = RatFun::rational(rat(1, d));
    for (i, (wf, a)) in directions(g, flag).into_iter().enumerate() {
        let tangent = i == 0;
        let reduced = tangent || mode == TwistMode::Cotangent;
        let den = q_pochhammer(&Term::mono(wf.clone()), &base, a * d + 1, reduced).map_err(degenerate)?;
        out = out.div(&den).map_err(degenerate)?;
        if mode == TwistMode::Cotangent {
            let x = Term::new(ExactScalar::one(), Monomial::hbar().mul(&wf).mul(&wg.inv()));
            out = out.mul(&q_pochhammer(&x, &base, a * d - 1, false)?);
        }
    }
    Ok(out)
}

/// The factor `E` of the edge recursion: the edge with the vertex it
/// leaves, stripped of the node term. `deg` is the cover degree `m`.
pub fn recursion_edge_factor(
    g: &GkmGraph,
    flag: &FlagData,
    deg: u32,
    sector: u32,
    mode: TwistMode,
) -> Result<RatFun> {
    let d = deg as i64;
    let wg = source_weight(g, flag.edge, flag.from, deg, sector);
    let base = Term::mono(wg.inv());
    let mut out = super::lambda_factor(&g.tangent_weights(flag.from), mode).scale_rational(&rat(1, d));
    for (wf, a) in directions(g, flag) {
        let den = q_pochhammer(&Term::mono(wf.clone()), &base, a * d + 1, true).map_err(degenerate)?;
        out = out.div(&den).map_err(degenerate)?;
        if mode == TwistMode::Cotangent {
            let x = Term::new(ExactScalar::one(), Monomial::hbar().mul(&wf).mul(&wg.inv()));
            out = out.mul(&q_pochhammer(&x, &base, a * d - 1, false)?);
        }
    }
    Ok(out)
}

fn degenerate(e: Error) -> Error {
    match e {
        Error::Pole(s) => Error::Degenerate(s),
        Error::DivisionByZero => Error::Degenerate("division by zero".into()),
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{braces, Phase};
    use crate::gkm::{build_projective_space, validate_gkm};

    #[test]
    fn p1_degree_one_untwisted() {
        let g = build_projective_space(1);
        let r = validate_gkm(&g);
        let f = edge_factor(&g, r.flag(0, 0).unwrap(), 1, 0, TwistMode::Untwisted).unwrap();
        // 1 / ((1 - t)(1 - t^-1)) with the middle factor removed
        let t = g.weight_mono(0, 0);
        let expect = braces(&[t.clone(), t.inv()]).inv().unwrap();
        assert!(f.equals(&expect), "{f}");
    }

    #[test]
    fn sectors_differ_by_phase() {
        let g = build_projective_space(1);
        let r = validate_gkm(&g);
        let flag = r.flag(0, 0).unwrap();
        let w = source_weight(&g, 0, 0, 2, 1);
        assert_eq!(w.phase, Phase::new(1, 2));
        let a = edge_factor(&g, flag, 2, 0, TwistMode::Cotangent).unwrap();
        let b = edge_factor(&g, flag, 2, 1, TwistMode::Cotangent).unwrap();
        assert!(!a.equals(&b));
        assert!(a.at_hbar_zero().unwrap().equals(&edge_factor(&g, flag, 2, 0, TwistMode::Untwisted).unwrap()));
    }
}
