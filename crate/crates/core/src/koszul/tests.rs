use super::*;
use crate::algebra::Presentation;
use crate::corpus::{commutative_two_loop, default_field, truncated_loops};
use crate::quiver::{PathElement, Quiver};

fn truncated(loops: usize, n: usize) -> AlgebraBundle {
    let window = if loops == 1 { 3 * n + 2 } else { 2 * n + 1 };
    AlgebraBundle::new(truncated_loops(default_field(), loops, n).unwrap(), window).unwrap()
}

#[test]
fn projective_module_resolves_in_one_step() {
    let b = truncated(1, 3);
    let p = GradedModule::regular(b.lambda.clone(), 2).unwrap();
    let seg = minimal_projective_resolution(&p, 4).unwrap();
    assert_eq!(seg.len(), 1);
    assert!(seg.finished);
    seg.check().unwrap();
}

#[test]
fn truncated_polynomial_resolution_is_periodic() {
    let b = truncated(1, 3);
    let seg = minimal_projective_resolution(&degree_zero_part(&b.lambda), 6).unwrap();
    seg.check().unwrap();
    let degrees: Vec<Vec<i64>> = (0..=6).map(|j| seg.generation_degrees(j)).collect();
    assert_eq!(degrees, vec![vec![0], vec![1], vec![3], vec![4], vec![6], vec![7], vec![9]]);
    assert!((0..=6).all(|j| seg.generators[j].len() == 1));
}

#[test]
fn truncated_algebras_are_n_koszul() {
    for (loops, n) in [(1, 3), (2, 3), (1, 2), (2, 4)] {
        let b = truncated(loops, n);
        let bound = if loops == 2 { 3 } else { 6 };
        assert!(is_n_koszul(&b.lambda, bound).unwrap(), "{loops} loops, n = {n}");
        let ext = ext_dims(&b.lambda, bound).unwrap();
        let dm = DegreeMap::new(0, n);
        for (j, t) in ext.iter().enumerate() {
            assert_eq!(t[0][0], b.dual_slices.dim(dm.delta(j as i64) as usize), "j = {j}");
        }
    }
}

#[test]
fn free_algebra_has_global_dimension_one() {
    let f = default_field();
    let q = Quiver::from_triples(1, &[("x", 0, 0)]).unwrap();
    let pres = Presentation::new(f, q, 3, vec![], None).unwrap();
    let b = AlgebraBundle::new(pres, 8).unwrap();
    let seg = minimal_projective_resolution(&degree_zero_part(&b.lambda), 4).unwrap();
    assert_eq!(seg.len(), 2);
    assert!(is_n_koszul(&b.lambda, 4).unwrap());
}

#[test]
fn quadratic_commutative_algebra_is_koszul() {
    let b = AlgebraBundle::new(commutative_two_loop(default_field()).unwrap(), 8).unwrap();
    let seg = minimal_projective_resolution(&degree_zero_part(&b.lambda), 3).unwrap();
    seg.check().unwrap();
    assert_eq!(seg.generators.iter().map(|g| g.len()).collect::<Vec<_>>(), vec![1, 2, 1]);
    assert!(is_n_koszul(&b.lambda, 3).unwrap());
}

#[test]
fn off_pattern_syzygy_breaks_koszulity() {
    // the relation x y x overlaps itself in one letter, giving a syzygy in degree 5
    let f = default_field();
    let q = Quiver::from_triples(1, &[("x", 0, 0), ("y", 0, 0)]).unwrap();
    let rels =
        ["x.y.x"].iter().map(|s| PathElement::from_terms(f, 3, [(q.parse_path(s).unwrap(), 1)]).unwrap()).collect();
    let b = AlgebraBundle::new(Presentation::new(f, q, 3, rels, None).unwrap(), 10).unwrap();
    let seg = minimal_projective_resolution(&degree_zero_part(&b.lambda), 3).unwrap();
    assert!(!is_n_koszul(&b.lambda, 3).unwrap(), "{:?}", (0..4).map(|j| seg.multiplicities(j)).collect::<Vec<_>>());
}

#[test]
fn cokoszul_examples() {
    let b = truncated(1, 3);
    let op = b.opposite().unwrap();
    let dl = crate::complexes::coinduced(&b.lambda, &[1], 0, false).unwrap();
    assert!(is_n_cokoszul(&dl, 5, &op.lambda).unwrap());
    let s = GradedModule::simple(b.lambda.clone(), 0, 0);
    assert!(is_n_cokoszul(&s, 5, &op.lambda).unwrap());
    let (c, _) = injective_coresolution(&s, 5, &op.lambda).unwrap();
    assert!(c.is_n_complex(2));
    let shifted = GradedModule::simple(b.lambda.clone(), 0, 1);
    assert!(!is_n_cokoszul(&shifted, 5, &op.lambda).unwrap());
}

#[test]
fn cokoszul_agrees_with_dual_resolution_degrees() {
    let b = truncated(2, 3);
    let op = b.opposite().unwrap();
    let dm = DegreeMap::new(0, 3);
    for m in
        [GradedModule::simple(b.lambda.clone(), 0, 0), GradedModule::regular(b.lambda.clone(), 2).unwrap().shift(2)]
    {
        let seg = minimal_projective_resolution(&m.graded_dual(op.lambda.clone()).unwrap(), 2).unwrap();
        let expected = (0..seg.len()).all(|j| seg.generation_degrees(j).iter().all(|&d| d == dm.delta(j as i64)));
        assert_eq!(is_n_cokoszul(&m, 2, &op.lambda).unwrap(), expected);
    }
}

#[test]
fn liftability_checker() {
    let b = truncated(1, 3);
    let op = b.opposite().unwrap();
    assert!(is_h0_liftable_resolution(&GradedModule::zero(b.lambda.clone()), 4, &b, &op).unwrap());
    let s = GradedModule::simple(b.lambda.clone(), 0, 0);
    assert!(is_h0_liftable_resolution(&s, 4, &b, &op).unwrap());
    let shifted = GradedModule::simple(b.lambda.clone(), 0, 1);
    assert!(is_h0_liftable_resolution(&shifted, 4, &b, &op).is_err());
}
