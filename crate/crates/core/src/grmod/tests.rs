use super::tests_support::two_loop_x;
use super::*;
use crate::corpus::{commutative_two_loop, default_field, truncated_loops, AlgebraBundle};
use crate::linalg::Field;
use crate::random::{random_cyclic_quotient, random_free_algebra_module, random_invertible};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn one_loop() -> AlgebraBundle {
    AlgebraBundle::new(truncated_loops(default_field(), 1, 3).unwrap(), 10).unwrap()
}

fn two_loop() -> AlgebraBundle {
    AlgebraBundle::new(truncated_loops(default_field(), 2, 3).unwrap(), 8).unwrap()
}

fn mat(f: Field, rows: &[Vec<i64>]) -> Matrix {
    Matrix::from_rows(f, rows).unwrap()
}

/// A one-vertex module with the given dims and one matrix per degree for a single generator.
fn loop_module(alg: Arc<GradedAlgebra>, lo: i64, dims: &[usize], acts: Vec<Matrix>) -> Result<GradedModule> {
    GradedModule::new(alg, lo, dims.iter().map(|&d| vec![d]).collect(), vec![acts])
}

#[test]
fn regular_module_is_valid() {
    let b = one_loop();
    let reg = GradedModule::regular(b.lambda.clone(), 5).unwrap();
    assert!(reg.is_valid());
    assert_eq!((0..=5).map(|d| reg.dim(d)).collect::<Vec<_>>(), vec![1, 1, 1, 0, 0, 0]);
    let two = two_loop();
    let reg = GradedModule::regular(two.lambda.clone(), 4).unwrap();
    assert!(reg.is_valid());
    assert_eq!((0..=3).map(|d| reg.dim(d)).collect::<Vec<_>>(), vec![1, 2, 4, 0]);
    for alg in [&two.dual, &two.u, &two.e] {
        assert!(GradedModule::regular(alg.clone(), 5).unwrap().is_valid());
    }
}

#[test]
fn relation_must_annihilate() {
    let b = one_loop();
    let f = default_field();
    let one = || mat(f, &[vec![1]]);
    let bad = loop_module(b.lambda.clone(), 0, &[1, 1, 1, 1], vec![one(), one(), one(), Matrix::zeros(f, 0, 1)]);
    match bad {
        Err(Error::InvalidModule(msg)) => assert!(msg.contains("differs")),
        other => panic!("expected a violation, got {other:?}"),
    }
    let good = loop_module(
        b.lambda.clone(),
        0,
        &[1, 1, 1, 1],
        vec![one(), one(), Matrix::zeros(f, 1, 1), Matrix::zeros(f, 0, 1)],
    );
    assert!(good.is_ok());
}

#[test]
fn random_actions_violate_relations() {
    let b = two_loop();
    let free_kq = Arc::new(GradedAlgebra::path(b.dual_slices.clone()));
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut caught = 0;
    for _ in 0..20 {
        // random actions of x, y on a module over Λ; Λ kills all paths of length 3
        let shape = random_free_algebra_module(&mut rng, free_kq.clone(), 0, 3, 2).unwrap();
        let m = GradedModule::from_parts(
            b.lambda.clone(),
            0,
            (0..=3).map(|d| shape.vertex_dims(d)).collect(),
            shape.actions().to_vec(),
        )
        .unwrap();
        let nonzero_chain = (0..=3).all(|d| m.dim(d) > 0);
        if nonzero_chain {
            assert!(!m.validate().is_empty());
            caught += 1;
        }
    }
    assert!(caught > 0);
}

#[test]
fn hom_space_examples() {
    let b = one_loop();
    let s0 = GradedModule::simple(b.lambda.clone(), 0, 0);
    assert_eq!(s0.hom_dim(&s0).unwrap(), 1);
    assert_eq!(s0.hom_dim(&GradedModule::simple(b.lambda.clone(), 0, 1)).unwrap(), 0);
    let reg = GradedModule::regular(b.lambda.clone(), 2).unwrap();
    let ends = reg.hom_space(&reg).unwrap();
    assert_eq!(ends.len(), 1);
    assert!(reg.is_morphism(&ends[0], &reg));

    let q = crate::quiver::Quiver::from_triples(2, &[("a", 0, 1)]).unwrap();
    let pres = crate::algebra::Presentation::truncated(default_field(), q, 2).unwrap();
    let b2 = AlgebraBundle::new(pres, 4).unwrap();
    let s1 = GradedModule::simple(b2.lambda.clone(), 0, 0);
    let s2 = GradedModule::simple(b2.lambda.clone(), 1, 0);
    assert_eq!(s1.hom_dim(&s2).unwrap(), 0);
    // e_0 Λ has basis e_0, a; maps e_0Λ -> e_0Λ ⊕ e_1Λ[-1]
    let p0 = GradedModule::free(b2.lambda.clone(), &[(0, 0)], 2).unwrap();
    let p1 = GradedModule::free(b2.lambda.clone(), &[(1, 1)], 2).unwrap();
    assert_eq!(p1.hom_dim(&p0).unwrap(), 1);
    assert_eq!(p0.hom_dim(&p1).unwrap(), 0);
}

#[test]
fn hom_dimension_is_basis_invariant() {
    let b = two_loop();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..6 {
        let gens = [(0, 0), (0, 1)];
        let m = random_cyclic_quotient(&mut rng, b.dual.clone(), &gens, 3, &[1, 2], 2).unwrap();
        let n = random_cyclic_quotient(&mut rng, b.dual.clone(), &[(0, 0)], 3, &[2], 1).unwrap();
        let base = m.hom_dim(&n).unwrap();
        let conj = |x: &GradedModule, rng: &mut ChaCha8Rng| {
            let ch: Vec<Matrix> = x.degrees().map(|d| random_invertible(rng, x.field(), x.dim(d))).collect();
            x.conjugate(&ch)
        };
        let (m2, n2) = (conj(&m, &mut rng), conj(&n, &mut rng));
        assert!(m2.is_valid() && n2.is_valid());
        assert_eq!(m2.hom_dim(&n2).unwrap(), base);
        for f in m.hom_space(&n).unwrap() {
            assert!(m.is_morphism(&f, &n));
        }
    }
}

#[test]
fn socle_and_cogeneration() {
    let b = one_loop();
    let reg = GradedModule::regular(b.lambda.clone(), 2).unwrap();
    let soc: Vec<usize> = reg.socle().iter().map(|s| s.dim()).collect();
    assert_eq!(soc, vec![0, 0, 1]);
    assert!(!reg.cogenerated_in_degrees(|d| d == 0));
    assert!(reg.cogenerated_in_degrees(|d| d == 2));
    let s = GradedModule::simple(b.lambda.clone(), 0, 0);
    assert_eq!(s.socle()[0].dim(), 1);
    assert!(s.cogenerated_in_degrees(|d| d == 0));

    let op = b.opposite().unwrap();
    let d_lambda = reg.graded_dual(op.lambda.clone()).unwrap();
    assert!(d_lambda.is_valid());
    assert_eq!(d_lambda.lo(), -2);
    assert_eq!((-2..=0).map(|d| d_lambda.dim(d)).collect::<Vec<_>>(), vec![1, 1, 1]);
    for k in [-1i64, 0, 2] {
        let shifted = d_lambda.shift(k);
        let socle_degrees: Vec<i64> =
            shifted.degrees().zip(shifted.socle()).filter(|(_, s)| !s.is_zero()).map(|(d, _)| d).collect();
        assert_eq!(socle_degrees, vec![-k]);
        assert!(shifted.cogenerated_in_degrees(|d| d == -k));
    }
}

#[test]
fn generation_examples() {
    let b = one_loop();
    for k in [-2i64, 0, 3] {
        let p = GradedModule::free(b.lambda.clone(), &[(0, -k)], 6).unwrap();
        assert!(p.generated_in_degrees(|d| d == -k));
    }
    assert!(!GradedModule::simple(b.lambda.clone(), 0, 3).generated_in_degrees(|d| d == 0));
    let f = default_field();
    let m = loop_module(b.lambda.clone(), 0, &[1, 1], vec![mat(f, &[vec![5]]), Matrix::zeros(f, 0, 1)]).unwrap();
    assert!(m.generated_in_degrees(|d| d == 0));
    let m = loop_module(b.lambda.clone(), 0, &[1, 1], vec![Matrix::zeros(f, 1, 1), Matrix::zeros(f, 0, 1)]).unwrap();
    assert!(!m.generated_in_degrees(|d| d == 0));
}

#[test]
fn generation_agrees_with_submodule_closure() {
    let b = two_loop();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..15 {
        let gens = crate::random::random_generators(&mut rng, 1, &[0, 1, 2], 2);
        let m = random_cyclic_quotient(&mut rng, b.dual.clone(), &gens, 3, &[1, 2, 3], 2).unwrap();
        for x in [0i64, 1, 2] {
            let pick = |d: i64| d <= x;
            let seeds: Vec<Subspace> = m
                .degrees()
                .map(
                    |d| if pick(d) { Subspace::full(m.field(), m.dim(d)) } else { Subspace::zero(m.field(), m.dim(d)) },
                )
                .collect();
            let closure = m.generated_submodule(&seeds);
            let everything = closure.iter().zip(m.degrees()).all(|(s, d)| s.dim() == m.dim(d));
            assert_eq!(everything, m.generated_in_degrees(pick));
        }
    }
}

#[test]
fn socle_of_dual_matches_top() {
    let b = two_loop();
    let op = b.opposite().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..10 {
        let gens = crate::random::random_generators(&mut rng, 1, &[0, 1], 2);
        let m = random_cyclic_quotient(&mut rng, b.lambda.clone(), &gens, 3, &[1, 2], 2).unwrap();
        let d = m.graded_dual(op.lambda.clone()).unwrap();
        assert!(d.is_valid());
        let top: Vec<(i64, Vec<usize>)> = m.top_dims();
        for (deg, dims) in top {
            let soc = d.socle_dims().into_iter().find(|(x, _)| *x == -deg).map(|x| x.1).unwrap();
            assert_eq!(soc, dims);
        }
        // biduality
        let dd = d.graded_dual(b.lambda.clone()).unwrap();
        assert_eq!(dd.lo(), m.lo());
        assert_eq!(dd.actions(), m.actions());
    }
}

#[test]
fn graded_dual_examples() {
    let b = one_loop();
    let op = b.opposite().unwrap();
    let s = GradedModule::simple(b.lambda.clone(), 0, 4);
    let ds = s.graded_dual(op.lambda.clone()).unwrap();
    assert_eq!(ds.support(), vec![-4]);
    let reg = GradedModule::regular(b.lambda.clone(), 2).unwrap();
    let d = reg.graded_dual(op.lambda.clone()).unwrap();
    let soc: Vec<i64> = d.degrees().zip(d.socle()).filter(|(_, s)| !s.is_zero()).map(|(x, _)| x).collect();
    assert_eq!(soc, vec![0]);
    // dual of a U-module lives over the opposite U-algebra
    let u = GradedModule::regular(b.u.clone(), 4).unwrap();
    let du = u.graded_dual(op.u.clone()).unwrap();
    assert!(du.is_valid());
}

#[test]
fn presentations() {
    let b = one_loop();
    let p = GradedModule::free(b.lambda.clone(), &[(0, 2)], 8).unwrap();
    assert!(presented_in_degrees(&p, |d| d == 2).unwrap());
    // The simple E-module needs relations in degree 1 (E_1) and 2 (E_2, since E_1 E_1 = 0).
    let s = GradedModule::simple(b.e.clone(), 0, 0);
    let (p0, p1) = minimal_presentation(&s).unwrap();
    assert_eq!(p0, vec![(0, 0)]);
    assert_eq!(p1, vec![(0, 1), (0, 2)]);
    assert!(!presented_in_degrees(&s, |d| d % 2 == 0).unwrap());
    // E/E_{>=2} is presented in even degrees
    let full = GradedModule::free(b.e.clone(), &[(0, 0)], 1).unwrap();
    assert!(presented_in_degrees(&full, |d| d % 2 == 0).unwrap());
    // a relation in degree 1 forces an odd generator of P1
    let f = default_field();
    let bad = GradedModule::new(
        b.e.clone(),
        0,
        vec![vec![1], vec![0], vec![1]],
        vec![
            vec![Matrix::zeros(f, 0, 1), Matrix::zeros(f, 1, 0), Matrix::zeros(f, 0, 1)],
            vec![mat(f, &[vec![1]]), Matrix::zeros(f, 0, 0), Matrix::zeros(f, 0, 1)],
        ],
    )
    .unwrap();
    assert!(!presented_in_degrees(&bad, |d| d % 2 == 0).unwrap());
}

#[test]
fn torsion_examples() {
    let b = one_loop();
    let params = TorsionParams::new(3, 1, 0).unwrap();
    let reg = GradedModule::regular(b.dual.clone(), 1).unwrap();
    assert!(torsion_submodule(&reg, &params).iter().all(|s| s.is_zero()));
    let off = GradedModule::simple(b.dual.clone(), 0, 2);
    assert!(torsion_submodule(&off, &params).iter().zip(off.degrees()).all(|(s, d)| s.dim() == off.dim(d)));
    assert!(!is_torsionfree(&off, &params));
    let on = GradedModule::simple(b.dual.clone(), 0, 3);
    assert!(is_torsionfree(&on, &params));
    assert!(params.in_quotient(3) && !params.in_quotient(4));
    let two = TorsionParams::new(2, 1, 0).unwrap();
    assert!((-4..4).all(|d| two.in_s(d) && two.in_quotient(d)));
    assert!(TorsionParams::new(4, 2, 0).is_err());
}

/// Every vertex-graded submodule of a small module over `F_2`, by brute force.
fn all_submodules(m: &GradedModule) -> Vec<Vec<Subspace>> {
    let f = m.field();
    assert_eq!(f.modulus(), 2);
    let mut choices: Vec<Vec<Vec<Vec<u32>>>> = Vec::new(); // per degree: list of generating sets
    for d in m.degrees() {
        let mut per_degree: Vec<Vec<Vec<u32>>> = vec![vec![]];
        for v in 0..m.algebra().vertex_count() {
            let k = m.vertex_dims(d)[v];
            let start = m.block_start(d, v);
            let vectors: Vec<Vec<u32>> = (1u32..(1 << k))
                .map(|bits| {
                    let mut x = vec![0; m.dim(d)];
                    for i in 0..k {
                        x[start + i] = (bits >> i) & 1;
                    }
                    x
                })
                .collect();
            let mut subspaces: Vec<Subspace> = Vec::new();
            for mask in 0u32..(1 << vectors.len()) {
                let chosen: Vec<Vec<u32>> =
                    (0..vectors.len()).filter(|i| mask >> i & 1 == 1).map(|i| vectors[i].clone()).collect();
                let s = Subspace::from_vectors(f, m.dim(d), &chosen);
                if !subspaces.contains(&s) {
                    subspaces.push(s);
                }
            }
            per_degree = per_degree
                .iter()
                .flat_map(|acc| {
                    subspaces.iter().map(move |s| {
                        let mut a = acc.clone();
                        a.extend(s.basis_vectors());
                        a
                    })
                })
                .collect();
        }
        choices.push(per_degree);
    }
    let mut out = Vec::new();
    let mut idx = vec![0usize; choices.len()];
    loop {
        let cand: Vec<Subspace> =
            m.degrees().enumerate().map(|(i, d)| Subspace::from_vectors(f, m.dim(d), &choices[i][idx[i]])).collect();
        if m.is_closed(&cand) {
            out.push(cand);
        }
        let mut k = 0;
        loop {
            if k == idx.len() {
                return out;
            }
            idx[k] += 1;
            if idx[k] < choices[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

#[test]
fn brute_force_over_f2() {
    let f2 = Field::new(2).unwrap();
    let pres = truncated_loops(f2, 2, 3).unwrap();
    let b = AlgebraBundle::new(pres, 6).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(19);
    let mut checked = 0;
    while checked < 25 {
        let count = rng.gen_range(1..=2);
        let gens = crate::random::random_generators(&mut rng, 1, &[0, 1, 2], count);
        let rels = rng.gen_range(1..=4);
        let m = random_cyclic_quotient(&mut rng, b.dual.clone(), &gens, 3, &[1, 2, 3], rels).unwrap();
        if m.total_dim() > 6 || m.degrees().any(|d| m.dim(d) > 3) {
            continue;
        }
        checked += 1;
        let subs = all_submodules(&m);
        let total = |s: &[Subspace]| s.iter().map(|x| x.dim()).sum::<usize>();
        for (n, r, mm) in [(3, 1, 0), (3, 1, 2), (2, 1, 0)] {
            let params = TorsionParams::new(n, r, mm).unwrap();
            let t = torsion_submodule(&m, &params);
            let best = subs
                .iter()
                .filter(|s| s.iter().zip(m.degrees()).all(|(x, d)| !params.in_s(d) || x.is_zero()))
                .map(|s| total(s))
                .max()
                .unwrap();
            assert_eq!(total(&t), best);
            assert_eq!(is_torsionfree(&m, &params), best == 0);
        }
        for x in [0i64, 1, 2] {
            let pick = |d: i64| d == x || d == x + 2;
            let raw_gen = subs
                .iter()
                .filter(|s| total(s) < m.total_dim())
                .all(|s| m.degrees().zip(s.iter()).any(|(d, sd)| pick(d) && sd.dim() < m.dim(d)));
            assert_eq!(raw_gen, m.generated_in_degrees(pick));
            let raw_cogen = subs
                .iter()
                .filter(|s| total(s) > 0)
                .all(|s| m.degrees().zip(s.iter()).any(|(d, sd)| pick(d) && sd.dim() > 0));
            assert_eq!(raw_cogen, m.cogenerated_in_degrees(pick));
        }
    }
}

#[test]
fn restriction_to_s() {
    let b = one_loop();
    let reg = GradedModule::regular(b.dual.clone(), 7).unwrap();
    let r = reg.restrict_s(0, b.u.clone()).unwrap();
    assert!(r.is_valid());
    assert_eq!(r.support(), vec![0, 1, 3, 4, 6, 7]);
    let s = GradedModule::simple(b.dual.clone(), 0, 2);
    assert!(s.restrict_s(0, b.u.clone()).unwrap().is_zero());
    let c = AlgebraBundle::new(commutative_two_loop(default_field()).unwrap(), 6).unwrap();
    let reg = GradedModule::regular(c.dual.clone(), 4).unwrap();
    let r = reg.restrict_s(0, c.u.clone()).unwrap();
    assert!(r.is_valid());
    assert_eq!(r.actions()[..2], reg.actions()[..2]);
}

#[test]
fn membership_in_g() {
    let b = one_loop();
    let params = TorsionParams::new(3, 1, 0).unwrap();
    assert!(in_g(&GradedModule::zero(b.dual.clone()), &params));
    assert!(in_g(&GradedModule::simple(b.dual.clone(), 0, 0), &params));
    let gen1 = GradedModule::free(b.dual.clone(), &[(0, 1)], 4).unwrap();
    assert!(!in_g(&gen1, &params));
}

#[test]
fn membership_in_l() {
    let b = two_loop();
    let params = TorsionParams::new(3, 1, 0).unwrap();
    let free = GradedModule::free(b.u.clone(), &[(0, 0)], 7).unwrap();
    assert!(in_l(&free, &params).unwrap());
    let ob = one_loop();
    let s = GradedModule::simple(ob.u.clone(), 0, 0);
    assert!(in_l(&s, &params).unwrap());
    assert!(!in_l(&two_loop_x(&b, "y^o.x^o.x^o"), &params).unwrap());
    assert!(in_l(&two_loop_x(&b, "x^o.x^o.x^o"), &params).unwrap());
    let off = GradedModule::simple(b.u.clone(), 0, 2);
    assert!(in_l(&off, &params).is_err());
}

#[test]
fn membership_in_l_e() {
    let c = AlgebraBundle::new(commutative_two_loop(default_field()).unwrap(), 6).unwrap();
    assert!(in_l_e(&GradedModule::simple(c.e.clone(), 0, 1)).unwrap());
    let b = two_loop();
    assert!(in_l_e(&GradedModule::free(b.e.clone(), &[(0, 0)], 5).unwrap()).unwrap());
    assert!(!in_l_e(&GradedModule::free(b.e.clone(), &[(0, 1)], 5).unwrap()).unwrap());
    // regrading dictionary
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..10 {
        let gens = crate::random::random_generators(&mut rng, 1, &[0, 2], 2);
        let v = random_cyclic_quotient(&mut rng, b.e.clone(), &gens, 5, &[1, 2, 3, 4], 2).unwrap();
        let x = regrade_e_to_u(&v, b.u.clone()).unwrap();
        assert!(x.is_valid());
        let params = TorsionParams::new(3, 1, 0).unwrap();
        assert_eq!(in_l_e(&v).unwrap(), in_l(&x, &params).unwrap());
    }
}

#[test]
fn comultiplication_examples() {
    let b = one_loop();
    let reg = GradedModule::regular(b.u.clone(), 4).unwrap().shift(4);
    // support is in degrees -4..0
    let id = comultiplication(&reg, 0, 0).unwrap();
    assert_eq!(id, Matrix::identity(default_field(), 1));
    let delta = comultiplication(&reg, 3, 1).unwrap();
    assert_eq!(delta, reg.action(0, -4));
    let zero = GradedModule::new(
        b.u.clone(),
        -1,
        vec![vec![1], vec![1]],
        b.u.generators()
            .iter()
            .map(|g| {
                vec![
                    Matrix::zeros(default_field(), if g.degree == 1 { 1 } else { 0 }, 1),
                    Matrix::zeros(default_field(), 0, 1),
                ]
            })
            .collect(),
    )
    .unwrap();
    assert!(comultiplication(&zero, 0, 1).unwrap().is_zero());
}

#[test]
fn membership_in_lo() {
    let b = two_loop();
    let op = b.opposite().unwrap();
    let params = TorsionParams::new(3, 1, 0).unwrap();
    assert!(in_lo(&GradedModule::zero(b.u.clone()), &params).unwrap());
    let simple = GradedModule::simple(b.u.clone(), 0, -1);
    assert!(!in_lo(&simple, &params).unwrap());
    for path in ["y^o.x^o.x^o", "x^o.x^o.x^o"] {
        let x = two_loop_x(&b, path);
        let dx = x.graded_dual(op.u.clone()).unwrap();
        assert_eq!(in_lo(&dx, &params).unwrap(), in_l(&x, &params).unwrap());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(29);
    for _ in 0..8 {
        let gens = crate::random::random_generators(&mut rng, 1, &[0, 3], 2);
        let m = random_cyclic_quotient(&mut rng, b.dual.clone(), &gens, 7, &[1, 2, 3, 4], 3).unwrap();
        let x = m.restrict_s(0, b.u.clone()).unwrap();
        assert!(in_l(&x, &params).unwrap());
        let dx = x.graded_dual(op.u.clone()).unwrap();
        assert!(in_lo(&dx, &params).unwrap());
    }
}
