use gkmloc::adelic::{check_edge_recursion, pole_locus, verify_adelic, PoleKind};
use gkmloc::gkm::build_projective_space;
use gkmloc::jfunction::compute_jseries;
use gkmloc::localization::{Executor, TwistMode};

#[test]
fn p1_cotangent_degree_one_poles() {
    let g = build_projective_space(1);
    let j = compute_jseries(&g, 0, TwistMode::Cotangent, &[1], Executor::Sequential).unwrap();
    let poles = pole_locus(&j.terms[&vec![1]], &g, 0);
    assert_eq!(poles.len(), 2);
    assert!(poles.iter().all(|p| p.order == 1));
    assert!(poles.iter().any(|p| p.kind == PoleKind::RootOfUnity));
    let t = g.weight_mono(0, 0);
    assert!(poles.iter().any(|p| p.at.as_ref() == Some(&t.inv()) && p.kind == PoleKind::WeightRoot { edge: 0, cover: 1 }));
}

#[test]
fn p1_cotangent_recursion_degree_two() {
    let g = build_projective_space(1);
    let j0 = compute_jseries(&g, 0, TwistMode::Cotangent, &[2], Executor::Sequential).unwrap();
    let j1 = compute_jseries(&g, 1, TwistMode::Cotangent, &[2], Executor::Sequential).unwrap();
    for m in 1..=2 {
        let r = check_edge_recursion(&g, &j0, &j1, 0, m, &[2]).unwrap();
        assert!(r.pass(), "{r:?}");
        assert!(r.sector_sum_rational);
    }
    let r = check_edge_recursion(&g, &j0, &j1, 0, 1, &[1]).unwrap();
    assert!(r.pass());
    let q0 = r.sectors[0].pole.clone();
    assert_eq!(q0, g.weight_mono(0, 0).inv());
}

#[test]
fn p2_cotangent_all_edges() {
    let g = build_projective_space(2);
    let r = verify_adelic(&g, 0, TwistMode::Cotangent, &[2], Executor::default()).unwrap();
    assert_eq!(r.recursions.len(), 2 * (1 + 2));
    assert!(r.pass(), "{r:?}");
}

#[test]
fn p1_untwisted_to_degree_three() {
    let g = build_projective_space(1);
    let r = verify_adelic(&g, 0, TwistMode::Untwisted, &[3], Executor::default()).unwrap();
    assert!(r.pass(), "{r:?}");
    assert!(r.recursions.iter().all(|x| x.sector_sum_rational));
}
