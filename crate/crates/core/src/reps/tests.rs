use super::*;

fn simple(s: &str) -> Arc<RootDatum> {
    Arc::new(RootDatum::simple(s.parse().unwrap()))
}

#[test]
fn counit_is_a_central_irreducible_module() {
    for s in ["A1", "A2", "B2", "G2"] {
        let d = simple(s);
        let ell = 5;
        for m in [IsoLattice::root_lattice(d.clone()), IsoLattice::weight_lattice(d.clone())] {
            let rep = counit_representation(&m, ell, 5).unwrap();
            assert!(rep.verify_relations().unwrap().passed, "{s}");
            let ch = rep.l_character().unwrap();
            assert!(ch.central);
            assert!(ch.character.k_values.iter().all(CycloNum::is_one));
            assert_eq!(rep.irreducibility().unwrap().verdict, Irreducibility::Yes);
            let t = rep.trick_check().unwrap();
            assert!(t.passed());
            assert_eq!(t.hypothesis_checks, d.rank());
        }
    }
}

#[test]
fn showcase_module() {
    let rep = sl3_showcase(3).unwrap();
    assert_eq!(rep.dim(), 3);
    assert!(rep.e(0).get(1, 2).is_one());
    let report = rep.verify_relations().unwrap();
    assert!(report.passed, "{:?}", report.failures().collect::<Vec<_>>());
    let irr = rep.irreducibility().unwrap();
    assert_eq!(irr.verdict, Irreducibility::Yes);
    assert_eq!(irr.span_dimension, 9);
    let ch = rep.l_character().unwrap();
    assert!(ch.central);
    // η(K_{λ1}^6) = ε
    let eps = CycloNum::root_of_unity(9, 3);
    assert_eq!(rep.torus_power(&[1, 0], 2).unwrap(), eps);
    let t = rep.trick_check().unwrap();
    assert!(t.passed());
    assert_eq!(t.hypothesis_checks, 0);
    assert!(matches!(sl3_showcase(5), Err(RepError::WrongEll(5))));
}

#[test]
fn corrupted_showcase_fails_at_exchange_relation() {
    let rep = sl3_showcase(3).unwrap();
    let eps = |k: i64| CycloNum::root_of_unity(9, 3 * k);
    let mut k = vec![rep.k(0).clone(), Matrix::diagonal(&[eps(0), eps(1), eps(1)])];
    let bad = Representation::new(
        rep.lattice().datum_arc().clone(),
        rep.k_basis().clone(),
        3,
        9,
        vec![rep.e(0).clone(), rep.e(1).clone()],
        vec![rep.f(0).clone(), rep.f(1).clone()],
        std::mem::take(&mut k),
    )
    .unwrap();
    let report = bad.verify_relations().unwrap();
    assert!(!report.passed);
    assert!(report.failures().any(|r| r.label == "E1 F1 - F1 E1"));
}

#[test]
fn non_central_one_dim_a1() {
    let d = simple("A1");
    let q = IsoLattice::root_lattice(d.clone());
    let rep = Representation::new(
        d.clone(),
        q.basis().clone(),
        3,
        6,
        vec![Matrix::zero(1, 6)],
        vec![Matrix::zero(1, 6)],
        vec![Matrix::scalar(1, &CycloNum::from_integer(6, -1))],
    )
    .unwrap();
    assert!(rep.verify_relations().unwrap().passed);
    let ch = rep.l_character().unwrap();
    assert!(ch.central);
    assert_eq!(ch.character.k_values[0], CycloNum::from_integer(6, -1));
    // K ↦ ζ_9 has c^{2ℓ} ≠ 1: the exchange relation fails and η is not central
    let c = CycloNum::root_of_unity(9, 1);
    let rep = Representation::new(
        d,
        q.basis().clone(),
        3,
        9,
        vec![Matrix::zero(1, 9)],
        vec![Matrix::zero(1, 9)],
        vec![Matrix::scalar(1, &c)],
    )
    .unwrap();
    assert!(!rep.verify_relations().unwrap().passed);
    let ch = rep.l_character().unwrap();
    assert!(!ch.central);
    assert_eq!(ch.character.k_values[0], c.pow(3).unwrap());
    assert!(!rep.trick_check().unwrap().passed());
}

#[test]
fn direct_sum_is_reducible() {
    let q = IsoLattice::root_lattice(simple("A2"));
    let c = counit_representation(&q, 3, 3).unwrap();
    let s = c.direct_sum(&c).unwrap();
    assert!(s.verify_relations().unwrap().passed);
    let irr = s.irreducibility().unwrap();
    assert_eq!(irr.verdict, Irreducibility::No);
    assert_eq!(irr.invariant_subspace.unwrap().basis.len(), 1);
    let show = sl3_showcase(3).unwrap();
    let s = show.direct_sum(&show).unwrap();
    assert_eq!(s.irreducibility().unwrap().verdict, Irreducibility::No);
}

#[test]
fn existence_criterion_examples() {
    let a2 = simple("A2");
    let lam = IsoLattice::weight_lattice(a2.clone());
    assert!(!central_small_module_exists(&lam, 3, 3).unwrap());
    assert!(central_small_module_exists(&lam, 3, 1).unwrap());
    assert!(central_small_module_exists(&lam, 5, 3).unwrap());
    let a1 = IsoLattice::weight_lattice(simple("A1"));
    for ell in [3, 5, 7, 9] {
        assert!(central_small_module_exists(&a1, ell, 2).unwrap());
    }
    assert!(matches!(
        central_small_module_exists(&lam, 3, 2),
        Err(RepError::InvalidZOrder { .. })
    ));
    let q = IsoLattice::root_lattice(a2);
    assert!(matches!(central_small_module_exists(&q, 3, 3), Err(RepError::InvalidZOrder { .. })));
}

#[test]
fn one_dim_construction_round_trip() {
    let lam = IsoLattice::weight_lattice(simple("A2"));
    let w = CycloNum::root_of_unity(3, 1);
    let rep = construct_central_one_dim(&lam, 5, &w, None).unwrap();
    assert!(rep.verify_relations().unwrap().passed);
    let ch = rep.l_character().unwrap();
    assert!(ch.central);
    assert_eq!(rep.torus_power(&lambda_m(&lam).unwrap(), 2).unwrap(), w);
    assert!(matches!(
        construct_central_one_dim(&lam, 3, &w, None),
        Err(RepError::NoSmallModule { z_order: 3, m: 3, d: 3 })
    ));
    let one = CycloNum::one(1);
    let rep = construct_central_one_dim(&lam, 3, &one, None).unwrap();
    assert!(rep.verify_relations().unwrap().passed);
    assert_eq!(rep.torus_power(&lambda_m(&lam).unwrap(), 2).unwrap(), CycloNum::one(3));
}

#[test]
fn decision_matches_construction() {
    for s in ["A1", "A2", "A3", "A4", "E6"] {
        let d = simple(s);
        for lat in crate::lattice::enumerate_intermediate_lattices(d.clone()) {
            let m = lat.index_over_root_lattice();
            for ell in [3u64, 5, 9, 15] {
                for order in (1..=m).filter(|o| m % o == 0) {
                    let z = CycloNum::root_of_unity(order as u32, 1);
                    let exists = central_small_module_exists(&lat, ell, order).unwrap();
                    match construct_central_one_dim(&lat, ell, &z, None) {
                        Ok(rep) => {
                            assert!(exists, "{s} m={m} ℓ={ell} order={order}");
                            assert!(rep.verify_relations().unwrap().passed);
                            let ch = rep.l_character().unwrap();
                            assert!(ch.central);
                            assert_eq!(rep.torus_power(&lambda_m(&lat).unwrap(), 2).unwrap(), z);
                        }
                        Err(RepError::NoSmallModule { .. }) => assert!(!exists),
                        Err(e) => panic!("{s}: {e}"),
                    }
                }
            }
        }
    }
}

#[test]
fn json_round_trip() {
    let rep = sl3_showcase(3).unwrap();
    let j = rep.to_json();
    let text = serde_json::to_string(&j).unwrap();
    let back: RepresentationJson = serde_json::from_str(&text).unwrap();
    let rep2 = Representation::from_json(&back).unwrap();
    assert_eq!(rep2.to_json(), j);
    assert!(rep2.verify_relations().unwrap().passed);
    let mut broken = j.clone();
    broken.generators.remove("F2");
    assert!(Representation::from_json(&broken).is_err());
}

#[test]
fn matrix_inverse() {
    let rep = sl3_showcase(3).unwrap();
    let k = rep.k(0);
    assert_eq!(k.mul(&k.inverse().unwrap()), Matrix::identity(3, 9));
    assert!(Matrix::zero(2, 3).inverse().is_none());
}
