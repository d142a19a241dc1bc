use gkmloc::algebra::{
    rat, rat_int, residue_at, residue_at_infinity, residue_at_zero, ExactScalar, LaurentExpr, Monomial, Phase, RatFun,
    Rational,
};
use proptest::prelude::*;

fn scalar(n: i64, coeffs: &[(i64, i64)]) -> ExactScalar {
    coeffs.iter().enumerate().fold(ExactScalar::zero(), |acc, (k, &(p, d))| {
        let z = ExactScalar::root_of_unity(&Phase::new(k as i64, n));
        &acc + &z.mul_rational(&rat(p, d))
    })
}

fn scalars() -> impl Strategy<Value = (i64, Vec<(i64, i64)>, Vec<(i64, i64)>, Vec<(i64, i64)>)> {
    (1i64..=24).prop_flat_map(|n| {
        let c = prop::collection::vec((-5i64..=5, 1i64..=4), n as usize);
        (Just(n), c.clone(), c.clone(), c)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn cyclotomic_field_axioms((n, x, y, z) in scalars()) {
        let (a, b, c) = (scalar(n, &x), scalar(n, &y), scalar(n, &z));
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert!((&a - &a).is_zero());
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn newton_degree_is_additive(
        f in prop::collection::vec((-3i64..=3, -3i64..=3, 1i64..=5), 1..5),
        g in prop::collection::vec((-3i64..=3, -3i64..=3, 1i64..=5), 1..5),
        s in prop::collection::vec(-4i64..=4, 3),
    ) {
        let poly = |ts: &[(i64, i64, i64)]| {
            let mut p = LaurentExpr::zero();
            for &(i, j, c) in ts {
                let m = Monomial::a(0).pow(i).mul(&Monomial::a(1).pow(j)).mul(&Monomial::q().pow(c));
                p.add_term(m, ExactScalar::from_int(c));
            }
            RatFun::from(p)
        };
        let (f, g) = (poly(&f), poly(&g));
        let sigma: Vec<Rational> = s.iter().map(|&x| rat_int(x)).collect();
        let lhs = f.mul(&g).newton_degree(&sigma).unwrap();
        prop_assert_eq!(lhs, f.newton_degree(&sigma).unwrap() + g.newton_degree(&sigma).unwrap());
        let h = f.div(&g).unwrap();
        prop_assert_eq!(h.newton_degree(&sigma).unwrap(), f.newton_degree(&sigma).unwrap() - g.newton_degree(&sigma).unwrap());
    }

    #[test]
    fn residues_sum_to_zero(ks in prop::collection::btree_set(-3i64..=3, 1..4), j in 0i64..4) {
        // f = q^j / prod (1 - q a0^k), bounded at infinity when j <= #poles
        let ks: Vec<i64> = ks.into_iter().collect();
        prop_assume!(j as usize <= ks.len());
        let one = ExactScalar::one();
        let mut f = RatFun::monomial(Monomial::q().pow(j));
        for &k in &ks {
            f = f.div(&RatFun::one_minus(&one, &Monomial::q().mul(&Monomial::a(0).pow(k)))).unwrap();
        }
        let mut total = residue_at_zero(&f).unwrap().add(&residue_at_infinity(&f).unwrap());
        for &k in &ks {
            total = total.add(&residue_at(&f, &Monomial::a(0).pow(-k)).unwrap());
        }
        prop_assert!(total.is_zero() || total.canonical().simplify().is_zero(), "{}", total);
    }
}

#[test]
fn sector_collapse() {
    let y = Monomial::a(0).div(&Monomial::a(1));
    for m in 1..=12 {
        let mut prod = RatFun::one();
        for k in 0..m {
            prod = prod.mul(&RatFun::one_minus(&ExactScalar::root_of_unity(&Phase::new(k, m)), &y));
        }
        let expect = RatFun::one_minus(&ExactScalar::one(), &y.pow(m));
        assert!(prod.equals(&expect), "m = {m}");
    }
}

#[test]
fn lefschetz_average() {
    let qinv = Monomial::q().inv();
    for m in 2..=6 {
        let x = qinv.root(m, 0);
        let terms: Vec<RatFun> = (0..m)
            .map(|k| RatFun::one_minus(&ExactScalar::root_of_unity(&Phase::new(k, m)), &x).inv().unwrap())
            .collect();
        let avg = RatFun::sum(&terms).scale_rational(&rat(1, m));
        let expect = RatFun::one_minus(&ExactScalar::one(), &qinv).inv().unwrap();
        assert!(avg.equals(&expect), "m = {m}");
    }
}
