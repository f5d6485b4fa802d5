use std::sync::Arc;

use num_integer::Integer;
use proptest::prelude::*;

use qroot_core::lattice::{enumerate_intermediate_lattices, iso_rank, IsoLattice};
use qroot_core::pbw::{Gen, NcElement, PbwMonomial, ReducedAlgebra};
use qroot_core::reps::{sl3_showcase, Matrix, Representation, RepresentationJson};
use qroot_core::rootdata::{Family, RootDatum, SimpleType};

struct Showcase {
    rep: Representation,
    alg: ReducedAlgebra,
    /// E_γ, F_γ in convex order
    e_conv: Vec<Matrix>,
    f_conv: Vec<Matrix>,
    k_basis: Vec<Matrix>,
}

fn showcase() -> Showcase {
    let rep = sl3_showcase(3).unwrap();
    let lattice = rep.lattice().clone();
    let ch = rep.l_character().unwrap().character;
    let alg = ReducedAlgebra::new(&lattice, 3, ch).unwrap();
    let (es, fs) = rep.root_vector_matrices().unwrap();
    let datum = lattice.datum();
    let positions: Vec<usize> = alg
        .order()
        .roots()
        .iter()
        .map(|g| datum.root_position(g).unwrap())
        .collect();
    let e_conv = positions.iter().map(|&p| es[p].clone()).collect();
    let f_conv = positions.iter().map(|&p| fs[p].clone()).collect();
    let k_basis = lattice
        .basis()
        .columns()
        .iter()
        .map(|mu| rep.k_weight(mu).unwrap())
        .collect();
    Showcase {
        rep,
        alg,
        e_conv,
        f_conv,
        k_basis,
    }
}

fn word_matrix(s: &Showcase, word: &[Gen]) -> Matrix {
    let mut acc = Matrix::identity(s.rep.dim(), s.rep.level());
    for g in word {
        let m = match *g {
            Gen::E(i) => s.rep.e(i).clone(),
            Gen::F(i) => s.rep.f(i).clone(),
            Gen::K(j) => s.k_basis[j].clone(),
            Gen::KInv(j) => s.k_basis[j].inverse().unwrap(),
        };
        acc = acc.mul(&m);
    }
    acc
}

fn monomial_matrix(s: &Showcase, m: &PbwMonomial) -> Matrix {
    let n = s.e_conv.len();
    let mut acc = Matrix::identity(s.rep.dim(), s.rep.level());
    for (t, &a) in m.a.iter().enumerate() {
        acc = acc.mul(&s.f_conv[n - 1 - t].pow(a as u64));
    }
    for (j, &b) in m.b.iter().enumerate() {
        let k = if b >= 0 {
            s.k_basis[j].clone()
        } else {
            s.k_basis[j].inverse().unwrap()
        };
        acc = acc.mul(&k.pow(b.unsigned_abs()));
    }
    for (p, &c) in m.c.iter().enumerate() {
        acc = acc.mul(&s.e_conv[p].pow(c as u64));
    }
    acc
}

fn gen_strategy() -> impl Strategy<Value = Gen> {
    prop_oneof![
        (0..2usize).prop_map(Gen::E),
        (0..2usize).prop_map(Gen::F),
        (0..2usize).prop_map(Gen::K),
        (0..2usize).prop_map(Gen::KInv),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    /// The reduced algebra's normal form acts on the sl3 module exactly as
    /// the word it came from.
    #[test]
    fn normal_form_acts_like_the_word(word in prop::collection::vec(gen_strategy(), 0..7)) {
        let s = showcase();
        let level = s.rep.level();
        let x = NcElement::monomial(word.clone(), qroot_core::cyclo::CycloNum::one(level));
        let nf = s.alg.normal_form(&x).unwrap();
        let mut via_pbw = Matrix::zero(s.rep.dim(), level);
        for (m, c) in &nf {
            via_pbw = via_pbw.add(&monomial_matrix(&s, m).scale(c));
        }
        prop_assert_eq!(via_pbw, word_matrix(&s, &word));
    }

    /// On simple types `iso_rank` is `gcd(ℓ, |N/M|)`, for ℓ well past the
    /// acceptance sweep.
    #[test]
    fn isogeny_rank_is_a_gcd(
        family in prop_oneof![Just(Family::A), Just(Family::B), Just(Family::C), Just(Family::D)],
        rank in 2usize..7,
        half in 1u64..40,
        pick in any::<(usize, usize)>(),
    ) {
        let ell = 2 * half + 1;
        let Ok(kind) = SimpleType::new(family, rank) else { return Ok(()); };
        let lattices = enumerate_intermediate_lattices(Arc::new(RootDatum::simple(kind)));
        let m = &lattices[pick.0 % lattices.len()];
        let n = &lattices[pick.1 % lattices.len()];
        prop_assume!(m.is_sublattice_of(n));
        let index = m.index_in(n).unwrap();
        let r = iso_rank(m, n, ell).unwrap();
        prop_assert_eq!(r, ell.gcd(&index));
        prop_assert_eq!(index % r, 0);
    }
}

#[test]
fn normal_basis_of_the_showcase_algebra() {
    let s = showcase();
    let basis = s.alg.enumerate_normal_basis(10_000).unwrap();
    assert_eq!(basis.len(), 6561);
    let unit = basis
        .iter()
        .find(|m| m.a.iter().chain(&m.c).all(|&x| x == 0) && m.b.iter().all(|&x| x == 0))
        .expect("the unit monomial is normal");
    assert_eq!(monomial_matrix(&s, unit), Matrix::identity(3, s.rep.level()));
}

#[test]
fn representation_json_round_trips_through_text() {
    let rep = sl3_showcase(3).unwrap();
    let text = serde_json::to_string(&rep.to_json()).unwrap();
    let parsed: RepresentationJson = serde_json::from_str(&text).unwrap();
    let back = Representation::from_json(&parsed).unwrap();
    assert_eq!(back.to_json(), rep.to_json());
    assert!(back.verify_relations().unwrap().passed);
}

#[test]
fn showcase_lattice_is_the_weight_lattice() {
    let rep = sl3_showcase(3).unwrap();
    let weight = IsoLattice::weight_lattice(rep.lattice().datum_arc().clone());
    assert_eq!(rep.lattice(), &weight);
}
