use super::*;
use crate::lattice::IsoLattice;

fn simple(s: &str) -> Arc<RootDatum> {
    Arc::new(RootDatum::simple(s.parse().unwrap()))
}

#[test]
fn a1_exchange_relation_normal_form() {
    let q = IsoLattice::root_lattice(simple("A1"));
    let g = QuantumGroup::new(&q, 3).unwrap();
    let ef = &g.e(0) * &g.f(0);
    let nf = g.normal_form(&ef).unwrap();
    // E F = F E + (K - K^-1)/(ε - ε^-1)
    assert_eq!(nf.len(), 3);
    assert!(nf.iter().any(|(m, c)| m.a == vec![1] && m.c == vec![1] && c.is_one()));
}

#[test]
fn generic_systems_are_confluent() {
    for s in ["A1", "A2", "B2"] {
        let q = IsoLattice::root_lattice(simple(s));
        let g = QuantumGroup::new(&q, 5).unwrap();
        g.check_confluence().unwrap();
    }
}

#[test]
fn reduced_dimensions() {
    for (s, ell, expected) in [("A1", 3u64, 27u64), ("A1", 5, 125), ("A2", 3, 6561)] {
        let q = IsoLattice::root_lattice(simple(s));
        let alg = ReducedAlgebra::new(&q, ell, counit_character(&q, ell)).unwrap();
        alg.check_confluence().unwrap();
        assert_eq!(alg.reduced_dimension().unwrap(), BigUint::from(expected), "{s} ℓ={ell}");
    }
}

#[test]
fn larger_reduced_dimensions() {
    for (s, ell, exp) in [("B2", 3u64, 10u32), ("A3", 3, 15), ("G2", 5, 14)] {
        let q = IsoLattice::root_lattice(simple(s));
        let t = std::time::Instant::now();
        let alg = ReducedAlgebra::new(&q, ell, counit_character(&q, ell)).unwrap();
        alg.check_confluence().unwrap();
        assert_eq!(alg.reduced_dimension().unwrap(), BigUint::from(ell).pow(exp), "{s}");
        eprintln!("{s}: {:?} rules={} {:?}", alg.stats(), alg.system().num_rules(), t.elapsed());
    }
}

fn datum_word(d: &RootDatum, word: &[usize]) -> ConvexOrder {
    ConvexOrder::from_word(d, word).unwrap()
}

#[test]
fn a2_composite_root_vector_formula() {
    let d = simple("A2");
    let order = datum_word(&d, &[1, 0, 1]);
    let rv = composite_root_vectors(&d, &order, 3, 3).unwrap();
    let mid = &rv[1];
    assert_eq!(mid.root, vec![1, 1]);
    // E_{α+β} = -E_β E_α + ε^{-1} E_α E_β
    let eps_inv = CycloNum::root_of_unity(3, -1);
    let mut expected = NcElement::zero();
    expected.add_term(vec![Gen::E(1), Gen::E(0)], -CycloNum::one(3));
    expected.add_term(vec![Gen::E(0), Gen::E(1)], eps_inv);
    assert_eq!(mid.e, expected);
}

#[test]
fn a2_serre_relation_coefficients() {
    let d = simple("A2");
    let q = IsoLattice::root_lattice(d);
    let rels = defining_relations(&q, 3, 3).unwrap();
    let serre = rels.iter().find(|r| r.label == "Serre E1 E2").unwrap();
    // E1^2 E2 - [2] E1 E2 E1 + E2 E1^2 with [2] = ε + ε^{-1} = -1 at ℓ = 3
    let two = &CycloNum::root_of_unity(3, 1) + &CycloNum::root_of_unity(3, -1);
    let mut expected = NcElement::zero();
    expected.add_term(vec![Gen::E(0), Gen::E(0), Gen::E(1)], CycloNum::one(3));
    expected.add_term(vec![Gen::E(0), Gen::E(1), Gen::E(0)], -two);
    expected.add_term(vec![Gen::E(1), Gen::E(0), Gen::E(0)], CycloNum::one(3));
    assert_eq!(serre.element, expected);
}

#[test]
fn unsupported_rank_is_an_error() {
    let q = IsoLattice::root_lattice(simple("B3"));
    assert!(matches!(QuantumGroup::new(&q, 3), Err(PbwError::Unsupported(_))));
    let q = IsoLattice::root_lattice(simple("G2"));
    assert!(QuantumGroup::new(&q, 3).is_err());
}

#[test]
fn l_powers_are_central() {
    for (s, ell) in [("A1", 3u64), ("A2", 3), ("A2", 5), ("B2", 3), ("A3", 3), ("G2", 5)] {
        let d = simple(s);
        for m in [IsoLattice::root_lattice(d.clone()), IsoLattice::weight_lattice(d.clone())] {
            let g = QuantumGroup::new(&m, ell).unwrap();
            assert!(check_l_center(&g).unwrap() > 0, "{s}");
        }
    }
}

#[test]
fn specialization_folds_powers() {
    let q = IsoLattice::root_lattice(simple("A1"));
    let alg = ReducedAlgebra::new(&q, 3, counit_character(&q, 3)).unwrap();
    assert!(alg.is_zero(&alg.e(0).pow(3, 3)).unwrap());
    let k3 = NcElement::k_power(&[3], 3);
    assert_eq!(alg.normal_form(&k3).unwrap(), alg.normal_form(&NcElement::one(3)).unwrap());
    let one = alg.normal_form(&NcElement::one(3)).unwrap();
    assert_eq!(one.len(), 1);
    assert_eq!(one[0].0, PbwMonomial { a: vec![0], b: vec![0], c: vec![0] });
}

#[test]
fn torus_commutation_in_normal_form() {
    let q = IsoLattice::root_lattice(simple("A2"));
    let g = QuantumGroup::new(&q, 5).unwrap();
    for j in 0..2 {
        for i in 0..2 {
            let k = NcElement::generator(Gen::K(j), 5);
            let lhs = &k * &g.e(i);
            let mu = q.basis().column(j);
            let p = q.datum().pair_weight_root(&mu, &q.datum().simple_root(i));
            let rhs = (&g.e(i) * &k).scale(&CycloNum::root_of_unity(5, p));
            assert!(g.is_zero(&(&lhs - &rhs)).unwrap());
        }
    }
}

#[test]
fn normal_basis_enumeration_matches_count() {
    let q = IsoLattice::root_lattice(simple("A1"));
    let alg = ReducedAlgebra::new(&q, 3, counit_character(&q, 3)).unwrap();
    let basis = alg.enumerate_normal_basis(1000).unwrap();
    assert_eq!(basis.len(), 27);
    assert!(basis.windows(2).all(|w| w[0] < w[1]));
    assert!(basis.iter().all(|m| m.a.iter().chain(&m.c).all(|&x| x < 3) && m.b.iter().all(|&x| (0..3).contains(&x))));
}

#[test]
fn sign_twists() {
    let d = simple("A1");
    let q = IsoLattice::root_lattice(d.clone());
    let g = QuantumGroup::new(&q, 3).unwrap();
    let id = sign_twist(&q, &[1]).unwrap();
    assert!(id.is_identity());
    let t = sign_twist(&q, &[-1]).unwrap();
    assert_eq!(t.e_signs, vec![-1]);
    assert!(t.preserves_relations(&g).unwrap());
    assert!(t.is_involution(3));

    let d = simple("A2");
    let lam = IsoLattice::weight_lattice(d.clone());
    let t = sign_twist(&lam, &[-1, 1]).unwrap();
    // α1 = 2λ1 - λ2, α2 = -λ1 + 2λ2
    assert_eq!(t.e_signs[..2], [1, -1]);
    let g = QuantumGroup::new(&lam, 3).unwrap();
    assert!(t.preserves_relations(&g).unwrap());
    assert!(t.is_involution(3));
}

#[test]
fn broken_twist_is_detected() {
    let q = IsoLattice::root_lattice(simple("A1"));
    let g = QuantumGroup::new(&q, 3).unwrap();
    let t = SignTwist { k_signs: vec![-1], e_signs: vec![1] };
    assert!(!t.preserves_relations(&g).unwrap());
}

fn brute_force_lifts(m: &IsoLattice, n: &IsoLattice, toral: &ToralCharacter) -> usize {
    let c = m.relative_matrix(n).unwrap();
    let l = toral.level as i64;
    let r = n.rank();
    let mut count = 0;
    let total = (l as usize).pow(r as u32);
    for t in 0..total {
        let mut x = vec![0i64; r];
        let mut v = t as i64;
        for xi in x.iter_mut() {
            *xi = v % l;
            v /= l;
        }
        let ok = (0..m.rank()).all(|j| {
            let s: i64 = (0..r).map(|i| c[(i, j)] * x[i]).sum();
            (s - toral.exponents[j]).rem_euclid(l) == 0
        });
        if ok {
            count += 1;
        }
    }
    count
}

#[test]
fn character_lift_counts() {
    for (s, ell, expected) in [("A1", 3u64, 2usize), ("A2", 3, 3), ("A3", 5, 4)] {
        let d = simple(s);
        let q = IsoLattice::root_lattice(d.clone());
        let lam = IsoLattice::weight_lattice(d.clone());
        let level = ell as u32 * expected as u32;
        let toral = ToralCharacter { level, exponents: vec![0; q.rank()] };
        assert_eq!(count_character_lifts(&q, &lam, ell, &toral).unwrap(), expected);
        assert_eq!(brute_force_lifts(&q, &lam, &toral), expected);
        assert_eq!(count_character_lifts(&lam, &lam, ell, &ToralCharacter { level, exponents: vec![1; q.rank()] }).unwrap(), 1);
    }
    // a nontrivial value at a level too small for its square roots
    let d = simple("A1");
    let q = IsoLattice::root_lattice(d.clone());
    let lam = IsoLattice::weight_lattice(d);
    let toral = ToralCharacter { level: 3, exponents: vec![1] };
    assert_eq!(
        count_character_lifts(&q, &lam, 3, &toral),
        Err(PbwError::LevelTooSmall { level: 3, needed: 6 })
    );
    let toral = ToralCharacter { level: 6, exponents: vec![2] };
    assert_eq!(count_character_lifts(&q, &lam, 3, &toral).unwrap(), 2);
}

#[test]
fn counit_lifts_from_root_lattice() {
    let d = simple("A2");
    let q = IsoLattice::root_lattice(d.clone());
    let lam = IsoLattice::weight_lattice(d);
    let eta = counit_character(&lam, 3);
    assert!(eta.is_central(&lam).unwrap());
    let restricted = ToralCharacter::from_character(&counit_character(&q, 3)).unwrap();
    let toral = ToralCharacter { level: 3, ..restricted };
    let lifts = character_lifts(&q, &lam, 3, &toral).unwrap();
    assert_eq!(lifts.len(), 3);
    assert!(lifts.contains(&vec![0, 0]));
}

#[test]
fn artifact_round_trip() {
    let d = simple("A2");
    let lam = IsoLattice::weight_lattice(d);
    let alg = ReducedAlgebra::new(&lam, 3, counit_character(&lam, 3)).unwrap();
    let json = alg.to_artifact().to_json();
    let back = ReducedAlgebra::from_artifact(&RewriteArtifact::from_json(&json).unwrap()).unwrap();
    assert_eq!(back.reduced_dimension().unwrap(), BigUint::from(6561u32));
    let x = &(&alg.e(2) * &alg.f(0)) * &alg.e(1);
    assert_eq!(alg.normal_form(&x).unwrap(), back.normal_form(&x).unwrap());
    let mut broken = RewriteArtifact::from_json(&json).unwrap();
    broken.schema_version = 99;
    assert!(matches!(ReducedAlgebra::from_artifact(&broken), Err(PbwError::Artifact(_))));
    let mut broken = RewriteArtifact::from_json(&json).unwrap();
    broken.rules.pop();
    assert!(ReducedAlgebra::from_artifact(&broken).is_err());
}

mod props {
    use super::*;
    use proptest::prelude::*;
    use std::sync::OnceLock;

    fn a2() -> &'static QuantumGroup {
        static G: OnceLock<QuantumGroup> = OnceLock::new();
        G.get_or_init(|| QuantumGroup::new(&IsoLattice::weight_lattice(simple("A2")), 3).unwrap())
    }

    fn word(codes: &[u8]) -> NcElement {
        let w = codes
            .iter()
            .map(|&c| match c % 8 {
                0..=2 => Gen::E((c % 8) as usize),
                3..=5 => Gen::F((c % 8 - 3) as usize),
                6 => Gen::K((c / 8 % 2) as usize),
                _ => Gen::KInv((c / 8 % 2) as usize),
            })
            .collect();
        NcElement::monomial(w, CycloNum::one(3))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn associativity(x in prop::collection::vec(any::<u8>(), 0..4),
                         y in prop::collection::vec(any::<u8>(), 0..4),
                         z in prop::collection::vec(any::<u8>(), 0..4)) {
            let g = a2();
            let (x, y, z) = (word(&x), word(&y), word(&z));
            let sys = g.system();
            let to = |e: &NcElement| sys.reduce(g.layout.to_poly(sys, e).unwrap());
            let left = sys.mul_reduced(&sys.mul_reduced(&to(&x), &to(&y)), &to(&z));
            let right = sys.mul_reduced(&to(&x), &sys.mul_reduced(&to(&y), &to(&z)));
            prop_assert_eq!(&left, &right);
            prop_assert_eq!(left, to(&(&(&x * &y) * &z)));
        }

        #[test]
        fn twist_squares_to_identity(s in prop::collection::vec(prop::bool::ANY, 2)) {
            let lam = IsoLattice::weight_lattice(simple("A2"));
            let signs: Vec<i64> = s.iter().map(|&b| if b { 1 } else { -1 }).collect();
            let t = sign_twist(&lam, &signs).unwrap();
            prop_assert!(t.is_involution(3));
        }
    }
}
