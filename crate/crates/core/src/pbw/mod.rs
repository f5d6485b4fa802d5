//! The quantized enveloping algebra `U_ε^M(g)` at an odd root of unity:
//! its presentation, root vectors for a convex order, a confluent rewriting
//! system realizing the PBW basis `F^A K^B E^C`, the reduced algebras
//! `U_η^M(g)` attached to ℓ-characters, sign-twist automorphisms and lifts of
//! torus characters along `M ⊆ N`.
//!
//! Root vectors for non-simple roots are defined by q-brackets: for a root
//! `γ_k = γ_i + γ_j` with `i < k < j` in the convex order,
//!
//! ```text
//! E_{γ_k} = ε^{(γ_i|γ_j)} E_{γ_j} E_{γ_i} - E_{γ_i} E_{γ_j}
//! F_{γ_k} = ε^{(γ_i|γ_j)} F_{γ_j} F_{γ_i} - F_{γ_i} F_{γ_j}
//! ```
//!
//! where the pair `(i, j)` is chosen so that no other product of root
//! vectors strictly between `γ_i` and `γ_j` has weight `γ_k` (closest pair
//! first, then smallest `i`). For `A2` with the word `s_2 s_1 s_2` this gives
//! `E_{α+β} = -E_β E_α + ε^{-1} E_α E_β`. The `F` vectors are the images of
//! the `E` vectors under the automorphism `E ↔ F`, `K ↦ K^{-1}`.

pub mod engine;
pub mod nc;

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigUint;
use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cyclo::{q_binomial, CycloError, CycloNum};
use crate::lattice::{
    smith_normal_form, validate_ell, IntMatrix, IsoLattice, LatticeError,
};
use crate::rootdata::{ConvexOrder, Family, RootDataError, RootDatum, SimpleType};

use engine::{Code, CompletionLimits, CompletionStats, Fold, Letters, Mono, Poly, RewriteSystem, Rule};
pub use nc::{Gen, NcElement};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PbwError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    RootData(#[from] RootDataError),
    #[error(transparent)]
    Cyclo(#[from] CycloError),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("field level {level} is not a multiple of ℓ = {ell}")]
    LevelNotMultiple { level: u32, ell: u64 },
    #[error("leading coefficient of {word:?} is not a single torus monomial")]
    NonUnitLeading { word: Vec<u8> },
    #[error("relations imply 1 = 0")]
    Inconsistent,
    #[error("rewriting system is not confluent: {pair}")]
    NonConfluent { pair: String },
    #[error("completion limit reached: {detail}")]
    CompletionLimit { detail: String },
    #[error("the set of normal words is infinite")]
    InfiniteBasis,
    #[error("normal basis too large to enumerate ({count} words)")]
    TooLarge { count: String },
    #[error("a PBW word is not sorted: {0:?}")]
    UnsortedNormalWord(Vec<u8>),
    #[error("ℓ-character data does not match the algebra: {0}")]
    CharacterShape(String),
    #[error("torus value is not invertible")]
    NonUnitTorusValue,
    #[error("field level {level} is too small; characters of the larger lattice need level {needed}")]
    LevelTooSmall { level: u32, needed: u32 },
    #[error("malformed rewrite-system artifact: {0}")]
    Artifact(String),
}

/// Whether exact algebra construction is supported for the datum: simple
/// factors of rank at most 2, or `A3`.
pub fn check_supported(datum: &RootDatum) -> Result<(), PbwError> {
    for f in datum.factors() {
        let k = f.kind;
        let ok = k.rank <= 2 || (k.family == Family::A && k.rank == 3);
        if !ok {
            return Err(PbwError::Unsupported(format!(
                "exact PBW construction for a {k} factor (supported: rank ≤ 2 and A3)"
            )));
        }
    }
    Ok(())
}

fn check_level(level: u32, ell: u64) -> Result<(), PbwError> {
    if !(level as u64).is_multiple_of(ell) {
        return Err(PbwError::LevelNotMultiple { level, ell });
    }
    Ok(())
}

/// `ε^e` with `ε = ζ_L^{L/ℓ}`.
fn eps_pow(level: u32, ell: u64, e: i64) -> CycloNum {
    CycloNum::root_of_unity(level, e * (level as i64 / ell as i64))
}

/// Coordinates of every simple root in the lattice basis of `M`.
pub fn simple_roots_in_basis(lattice: &IsoLattice) -> Vec<Vec<i64>> {
    let cartan = IntMatrix::from_rows(lattice.datum().cartan());
    (0..lattice.rank())
        .map(|i| {
            lattice
                .coordinates(&cartan.column(i))
                .expect("Q ⊆ M")
        })
        .collect()
}

/// `(μ_j | α_i)` for basis vectors `μ_j` of `M`: `pairing[j][i]`.
fn basis_root_pairing(lattice: &IsoLattice) -> Vec<Vec<i64>> {
    let d = lattice.datum();
    lattice
        .basis()
        .columns()
        .iter()
        .map(|mu| (0..d.rank()).map(|i| d.pair_weight_root(mu, &d.simple_root(i))).collect())
        .collect()
}

/// A labelled defining relation `element = 0`.
#[derive(Clone, Debug)]
pub struct Relation {
    pub label: String,
    pub element: NcElement,
}

/// The defining relations of `U_ε^M(g)` in the Chevalley generators and the
/// torus generators `K_{μ_j}` of a basis of `M`, with coefficients in
/// `Q(ζ_L)`.
pub fn defining_relations(
    lattice: &IsoLattice,
    ell: u64,
    level: u32,
) -> Result<Vec<Relation>, PbwError> {
    let datum = lattice.datum();
    validate_ell(datum, ell)?;
    check_level(level, ell)?;
    let n = datum.rank();
    let one = CycloNum::one(level);
    let g = |x: Gen| NcElement::generator(x, level);
    let mut out = Vec::new();
    for j in 0..n {
        out.push(Relation {
            label: format!("K{} K{}^-1 = 1", j + 1, j + 1),
            element: &(&g(Gen::K(j)) * &g(Gen::KInv(j))) - &NcElement::one(level),
        });
        out.push(Relation {
            label: format!("K{}^-1 K{} = 1", j + 1, j + 1),
            element: &NcElement::monomial(vec![Gen::KInv(j), Gen::K(j)], one.clone())
                - &NcElement::one(level),
        });
        for i in j + 1..n {
            out.push(Relation {
                label: format!("K{} K{} = K{} K{}", j + 1, i + 1, i + 1, j + 1),
                element: NcElement::commutator(&g(Gen::K(j)), &g(Gen::K(i))),
            });
        }
    }
    let pairing = basis_root_pairing(lattice);
    for (j, row) in pairing.iter().enumerate() {
        for (i, &p) in row.iter().enumerate() {
            let k = g(Gen::K(j));
            out.push(Relation {
                label: format!("K{} E{} = ε^{} E{} K{}", j + 1, i + 1, p, i + 1, j + 1),
                element: &(&k * &g(Gen::E(i)))
                    - &(&g(Gen::E(i)) * &k).scale(&eps_pow(level, ell, p)),
            });
            out.push(Relation {
                label: format!("K{} F{} = ε^{} F{} K{}", j + 1, i + 1, -p, i + 1, j + 1),
                element: &(&k * &g(Gen::F(i)))
                    - &(&g(Gen::F(i)) * &k).scale(&eps_pow(level, ell, -p)),
            });
        }
    }
    let simple_m = simple_roots_in_basis(lattice);
    let sym = datum.symmetrizer();
    for i in 0..n {
        for j in 0..n {
            let mut el = NcElement::commutator(&g(Gen::E(i)), &g(Gen::F(j)));
            if i == j {
                let ei = eps_pow(level, ell, sym[i]);
                let denom = (&ei - &ei.inv()?).inv()?;
                let plus = NcElement::k_power(&simple_m[i], level);
                let neg: Vec<i64> = simple_m[i].iter().map(|x| -x).collect();
                let minus = NcElement::k_power(&neg, level);
                el = &el - &(&plus - &minus).scale(&denom);
            }
            out.push(Relation {
                label: format!("E{} F{} - F{} E{}", i + 1, j + 1, j + 1, i + 1),
                element: el,
            });
        }
    }
    let cartan = datum.cartan();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let top = 1 - cartan[i][j];
            let ei = eps_pow(level, ell, sym[i]);
            for (name, make) in [("E", Gen::E as fn(usize) -> Gen), ("F", Gen::F as fn(usize) -> Gen)] {
                let mut el = NcElement::zero();
                for a in 0..=top {
                    let sign = if a % 2 == 0 { 1 } else { -1 };
                    let coeff = q_binomial(top, a, &ei)?.scale(&num_rational::BigRational::from_integer(sign.into()));
                    let mut word = vec![make(i); (top - a) as usize];
                    word.push(make(j));
                    word.extend(std::iter::repeat_n(make(i), a as usize));
                    el.add_term(word, coeff);
                }
                out.push(Relation {
                    label: format!("Serre {name}{} {name}{}", i + 1, j + 1),
                    element: el,
                });
            }
        }
    }
    Ok(out)
}

fn in_between_count(roots: &[Vec<i64>], range: std::ops::Range<usize>, target: &[i64]) -> usize {
    fn go(roots: &[Vec<i64>], idx: &[usize], rem: &mut Vec<i64>, cap: usize) -> usize {
        if rem.iter().all(|&x| x == 0) {
            return 1;
        }
        let Some((&p, rest)) = idx.split_first() else {
            return 0;
        };
        let mut total = 0;
        let mut used = 0;
        loop {
            total += go(roots, rest, rem, cap);
            if total >= cap {
                break;
            }
            let fits = rem.iter().zip(&roots[p]).all(|(r, g)| r - g >= 0);
            if !fits {
                break;
            }
            for (r, g) in rem.iter_mut().zip(&roots[p]) {
                *r -= g;
            }
            used += 1;
        }
        for (r, g) in rem.iter_mut().zip(&roots[p]) {
            *r += g * used;
        }
        total
    }
    let idx: Vec<usize> = range.collect();
    go(roots, &idx, &mut target.to_vec(), 2)
}

/// For each convex position, the bracket pair `(i, j)` defining a
/// non-simple root vector (`None` for simple roots).
pub fn bracket_pairs(datum: &RootDatum, order: &ConvexOrder) -> Result<Vec<Option<(usize, usize)>>, PbwError> {
    check_supported(datum)?;
    let roots = order.roots();
    let n = roots.len();
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        if roots[k].iter().sum::<i64>() == 1 {
            out.push(None);
            continue;
        }
        let mut best: Option<(usize, usize, usize)> = None;
        for i in 0..k {
            for j in k + 1..n {
                let sums: bool = roots[i].iter().zip(&roots[j]).zip(&roots[k]).all(|((a, b), c)| a + b == *c);
                if !sums || in_between_count(roots, i + 1..j, &roots[k]) != 1 {
                    continue;
                }
                let key = (j - i, i, j);
                if best.is_none_or(|b| key < b) {
                    best = Some(key);
                }
            }
        }
        match best {
            Some((_, i, j)) => out.push(Some((i, j))),
            None => {
                return Err(PbwError::Unsupported(format!(
                    "no bracket pair for root {:?} in this convex order",
                    roots[k]
                )))
            }
        }
    }
    Ok(out)
}

/// A root vector and its expression in the Chevalley generators.
#[derive(Clone, Debug)]
pub struct RootVector {
    pub root: Vec<i64>,
    pub bracket: Option<(Vec<i64>, Vec<i64>)>,
    pub e: NcElement,
    pub f: NcElement,
}

/// Root vectors `E_γ`, `F_γ` for every positive root, in convex order.
pub fn composite_root_vectors(
    datum: &RootDatum,
    order: &ConvexOrder,
    ell: u64,
    level: u32,
) -> Result<Vec<RootVector>, PbwError> {
    validate_ell(datum, ell)?;
    check_level(level, ell)?;
    let pairs = bracket_pairs(datum, order)?;
    let roots = order.roots();
    let mut by_height: Vec<usize> = (0..roots.len()).collect();
    by_height.sort_by_key(|&p| roots[p].iter().sum::<i64>());
    let mut e: Vec<Option<NcElement>> = vec![None; roots.len()];
    let mut f: Vec<Option<NcElement>> = vec![None; roots.len()];
    for &p in &by_height {
        match pairs[p] {
            None => {
                let i = roots[p].iter().position(|&x| x == 1).expect("simple root");
                e[p] = Some(NcElement::generator(Gen::E(i), level));
                f[p] = Some(NcElement::generator(Gen::F(i), level));
            }
            Some((i, j)) => {
                let c = eps_pow(level, ell, datum.pair_roots(&roots[i], &roots[j]));
                let (ei, ej) = (e[i].as_ref().expect("lower"), e[j].as_ref().expect("lower"));
                e[p] = Some(&(ej * ei).scale(&c) - &(ei * ej));
                let (fi, fj) = (f[i].as_ref().expect("lower"), f[j].as_ref().expect("lower"));
                f[p] = Some(&(fj * fi).scale(&c) - &(fi * fj));
            }
        }
    }
    Ok((0..roots.len())
        .map(|p| RootVector {
            root: roots[p].clone(),
            bracket: pairs[p].map(|(i, j)| (roots[i].clone(), roots[j].clone())),
            e: e[p].take().expect("filled"),
            f: f[p].take().expect("filled"),
        })
        .collect())
}

/// A PBW monomial `F^A K^B E^C`: `a[t]` is the exponent of `F_{γ_{N-t}}`
/// (reverse convex order), `b` the torus exponents in the basis of `M`, and
/// `c[p]` the exponent of `E_{γ_{p+1}}` (convex order).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PbwMonomial {
    pub a: Vec<u32>,
    pub b: Vec<i64>,
    pub c: Vec<u32>,
}

/// Shared layout of an algebra: lattice, ℓ, field level, convex order and
/// the letter encoding.
#[derive(Clone, Debug)]
struct Layout {
    lattice: IsoLattice,
    ell: u64,
    level: u32,
    order: ConvexOrder,
    root_to_pos: Vec<usize>,
    pos_to_root: Vec<usize>,
    brackets: Vec<Option<(usize, usize)>>,
}

impl Layout {
    fn new(lattice: &IsoLattice, ell: u64, level: u32, order: ConvexOrder) -> Result<Layout, PbwError> {
        let datum = lattice.datum();
        validate_ell(datum, ell)?;
        check_level(level, ell)?;
        let brackets = bracket_pairs(datum, &order)?;
        let pos_to_root: Vec<usize> = order
            .roots()
            .iter()
            .map(|r| datum.root_position(r).expect("positive root"))
            .collect();
        let mut root_to_pos = vec![0; pos_to_root.len()];
        for (p, &r) in pos_to_root.iter().enumerate() {
            root_to_pos[r] = p;
        }
        Ok(Layout {
            lattice: lattice.clone(),
            ell,
            level,
            order,
            root_to_pos,
            pos_to_root,
            brackets,
        })
    }

    fn datum(&self) -> &RootDatum {
        self.lattice.datum()
    }

    fn letters(&self) -> Letters {
        let datum = self.datum();
        let roots = self.order.roots();
        let n = roots.len();
        let heights = roots.iter().map(|r| r.iter().sum::<i64>() as u32).collect();
        let pair = self
            .lattice
            .basis()
            .columns()
            .iter()
            .map(|mu| {
                (0..2 * n)
                    .map(|code| {
                        let (pos, sign) = if code < n { (n - 1 - code, -1) } else { (code - n, 1) };
                        sign * datum.pair_weight_root(mu, &roots[pos])
                    })
                    .collect()
            })
            .collect();
        Letters {
            n,
            heights,
            pair,
            ell: self.ell,
            level: self.level,
        }
    }

    fn code(&self, letters: &Letters, g: Gen) -> Option<Code> {
        match g {
            Gen::E(r) => Some(letters.e(self.root_to_pos[r])),
            Gen::F(r) => Some(letters.f(self.root_to_pos[r])),
            _ => None,
        }
    }

    fn gen_of(&self, letters: &Letters, c: Code) -> Gen {
        let r = self.pos_to_root[letters.position(c)];
        if letters.is_e(c) {
            Gen::E(r)
        } else {
            Gen::F(r)
        }
    }

    fn to_poly(&self, system: &RewriteSystem, x: &NcElement) -> Result<Poly, PbwError> {
        let letters = system.letters();
        let rank = letters.torus_rank();
        let npos = self.pos_to_root.len();
        let mut out = Poly::new();
        for (word, c) in x.terms() {
            let mut w: Vec<Code> = Vec::new();
            let mut k = vec![0i64; rank];
            let mut e = 0i64;
            for &g in word {
                match g {
                    Gen::E(r) | Gen::F(r) => {
                        if r >= npos {
                            return Err(PbwError::CharacterShape(format!("root index {r} out of range")));
                        }
                        let code = self.code(letters, g).expect("root letter");
                        e += letters.commute_exponent(&k, &[code]);
                        w.push(code);
                    }
                    Gen::K(j) | Gen::KInv(j) => {
                        if j >= rank {
                            return Err(PbwError::CharacterShape(format!("torus index {j} out of range")));
                        }
                        k[j] += if matches!(g, Gen::K(_)) { 1 } else { -1 };
                    }
                }
            }
            system.push(&mut out, w, k, c * &letters.eps(e));
        }
        Ok(out)
    }

    fn poly_to_pbw(&self, letters: &Letters, p: &Poly) -> Result<Vec<(PbwMonomial, CycloNum)>, PbwError> {
        let n = letters.n;
        let mut out: BTreeMap<PbwMonomial, CycloNum> = BTreeMap::new();
        for (m, c) in p {
            if m.word.windows(2).any(|w| w[0] > w[1]) {
                return Err(PbwError::UnsortedNormalWord(m.word.clone()));
            }
            let mut a = vec![0u32; n];
            let mut cc = vec![0u32; n];
            let mut e_part: Vec<Code> = Vec::new();
            for &code in &m.word {
                if letters.is_e(code) {
                    cc[letters.position(code)] += 1;
                    e_part.push(code);
                } else {
                    a[code as usize] += 1;
                }
            }
            // word · K^b = ε^{-(μ_b | wt E-part)} F-part · K^b · E-part
            let e = letters.commute_exponent(&m.k, &e_part);
            let coeff = c * &letters.eps(-e);
            out.insert(
                PbwMonomial {
                    a,
                    b: m.k.clone(),
                    c: cc,
                },
                coeff,
            );
        }
        Ok(out.into_iter().collect())
    }

    /// Relations fed to completion: bracket definitions first, then the
    /// defining relations.
    fn seed_relations(&self, system: &RewriteSystem) -> Result<Vec<Poly>, PbwError> {
        let letters = system.letters();
        let datum = self.datum();
        let roots = self.order.roots();
        let one = CycloNum::one(self.level);
        let zk = system.zero_k();
        let mut out = Vec::new();
        let mut composite: Vec<usize> = (0..roots.len()).filter(|&p| self.brackets[p].is_some()).collect();
        composite.sort_by_key(|&p| roots[p].iter().sum::<i64>());
        for p in composite {
            let (i, j) = self.brackets[p].expect("composite");
            let c = eps_pow(self.level, self.ell, datum.pair_roots(&roots[i], &roots[j]));
            for (mk, _) in [(Letters::e as fn(&Letters, usize) -> Code, 'E'), (Letters::f, 'F')] {
                let mut poly = Poly::new();
                system.push(&mut poly, vec![mk(letters, p)], zk.clone(), one.clone());
                system.push(&mut poly, vec![mk(letters, j), mk(letters, i)], zk.clone(), -&c);
                system.push(&mut poly, vec![mk(letters, i), mk(letters, j)], zk.clone(), one.clone());
                out.push(poly);
            }
        }
        for rel in defining_relations(&self.lattice, self.ell, self.level)? {
            out.push(self.to_poly(system, &rel.element)?);
        }
        Ok(out)
    }
}

/// `U_ε^M(g)` with a completed PBW rewriting system.
#[derive(Clone, Debug)]
pub struct QuantumGroup {
    layout: Layout,
    system: RewriteSystem,
    stats: CompletionStats,
}

impl QuantumGroup {
    /// Uses the greedy convex order and the smallest field level (`L = ℓ`).
    pub fn new(lattice: &IsoLattice, ell: u64) -> Result<QuantumGroup, PbwError> {
        let order = ConvexOrder::standard(lattice.datum());
        QuantumGroup::with_options(lattice, ell, ell as u32, order)
    }

    pub fn with_options(
        lattice: &IsoLattice,
        ell: u64,
        level: u32,
        order: ConvexOrder,
    ) -> Result<QuantumGroup, PbwError> {
        let layout = Layout::new(lattice, ell, level, order)?;
        let mut system = RewriteSystem::new(layout.letters());
        let seeds = layout.seed_relations(&system)?;
        let stats = system.complete(seeds, CompletionLimits::default())?;
        Ok(QuantumGroup {
            layout,
            system,
            stats,
        })
    }

    pub fn lattice(&self) -> &IsoLattice {
        &self.layout.lattice
    }

    pub fn ell(&self) -> u64 {
        self.layout.ell
    }

    pub fn level(&self) -> u32 {
        self.layout.level
    }

    pub fn order(&self) -> &ConvexOrder {
        &self.layout.order
    }

    pub fn stats(&self) -> &CompletionStats {
        &self.stats
    }

    pub fn system(&self) -> &RewriteSystem {
        &self.system
    }

    pub fn check_confluence(&self) -> Result<usize, PbwError> {
        self.system.check_confluence()
    }

    pub fn normal_form(&self, x: &NcElement) -> Result<Vec<(PbwMonomial, CycloNum)>, PbwError> {
        let p = self.system.reduce(self.layout.to_poly(&self.system, x)?);
        self.layout.poly_to_pbw(self.system.letters(), &p)
    }

    pub fn is_zero(&self, x: &NcElement) -> Result<bool, PbwError> {
        Ok(self.system.reduce(self.layout.to_poly(&self.system, x)?).is_empty())
    }

    /// The generator `E_γ` or `F_γ` for the datum's root index `r`, as a
    /// single letter.
    pub fn e(&self, r: usize) -> NcElement {
        NcElement::generator(Gen::E(r), self.layout.level)
    }

    pub fn f(&self, r: usize) -> NcElement {
        NcElement::generator(Gen::F(r), self.layout.level)
    }
}

/// An ℓ-character `η` of the ℓ-center: values on `E_γ^ℓ`, `F_γ^ℓ` (indexed
/// by the datum's positive-root index) and on `K_{μ_j}^ℓ` (indexed by the
/// lattice basis).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LCharacter {
    pub e_values: Vec<CycloNum>,
    pub f_values: Vec<CycloNum>,
    pub k_values: Vec<CycloNum>,
}

impl LCharacter {
    pub fn level(&self) -> u32 {
        self.e_values
            .iter()
            .chain(&self.f_values)
            .chain(&self.k_values)
            .fold(1u32, |acc, v| acc.lcm(&v.level()))
    }

    /// `η(K_μ^ℓ)` for `μ` given by coordinates in the lattice basis.
    pub fn torus_value(&self, coords: &[i64]) -> Result<CycloNum, PbwError> {
        let mut acc = CycloNum::one(self.level());
        for (v, &e) in self.k_values.iter().zip(coords) {
            acc = &acc * &v.pow(e).map_err(|_| PbwError::NonUnitTorusValue)?;
        }
        Ok(acc)
    }

    /// Central iff every root-vector value vanishes and `η(K_α^{2ℓ}) = 1`
    /// for every `α ∈ Q`.
    pub fn is_central(&self, lattice: &IsoLattice) -> Result<bool, PbwError> {
        if self.e_values.iter().chain(&self.f_values).any(|v| !v.is_zero()) {
            return Ok(false);
        }
        for coords in simple_roots_in_basis(lattice) {
            let v = self.torus_value(&coords)?;
            if !(&v * &v).is_one() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn check_shape(&self, lattice: &IsoLattice) -> Result<(), PbwError> {
        let np = lattice.datum().num_positive_roots();
        if self.e_values.len() != np || self.f_values.len() != np {
            return Err(PbwError::CharacterShape(format!(
                "expected {np} root-vector values"
            )));
        }
        if self.k_values.len() != lattice.rank() {
            return Err(PbwError::CharacterShape(format!(
                "expected {} torus values",
                lattice.rank()
            )));
        }
        if self.k_values.iter().any(CycloNum::is_zero) {
            return Err(PbwError::NonUnitTorusValue);
        }
        Ok(())
    }
}

/// The ℓ-character of the counit: `E, F ↦ 0`, `K ↦ 1`.
pub fn counit_character(lattice: &IsoLattice, _ell: u64) -> LCharacter {
    let np = lattice.datum().num_positive_roots();
    LCharacter {
        e_values: vec![CycloNum::zero(1); np],
        f_values: vec![CycloNum::zero(1); np],
        k_values: vec![CycloNum::one(1); lattice.rank()],
    }
}

/// The reduced algebra `U_η^M(g)`: `U_ε^M(g)` modulo `X^ℓ = η(X^ℓ)` for
/// `X ∈ {E_γ, F_γ, K_μ}`.
#[derive(Clone, Debug)]
pub struct ReducedAlgebra {
    layout: Layout,
    character: LCharacter,
    system: RewriteSystem,
    stats: CompletionStats,
}

impl ReducedAlgebra {
    pub fn new(lattice: &IsoLattice, ell: u64, character: LCharacter) -> Result<ReducedAlgebra, PbwError> {
        let order = ConvexOrder::standard(lattice.datum());
        ReducedAlgebra::with_order(lattice, ell, order, character)
    }

    pub fn with_order(
        lattice: &IsoLattice,
        ell: u64,
        order: ConvexOrder,
        character: LCharacter,
    ) -> Result<ReducedAlgebra, PbwError> {
        character.check_shape(lattice)?;
        let level = (ell as u32).lcm(&character.level());
        let group = QuantumGroup::with_options(lattice, ell, level, order)?;
        ReducedAlgebra::from_group(&group, character)
    }

    /// Specializes an already completed `U_ε^M(g)`; its field level must
    /// contain the character values.
    pub fn from_group(group: &QuantumGroup, character: LCharacter) -> Result<ReducedAlgebra, PbwError> {
        let layout = group.layout.clone();
        character.check_shape(&layout.lattice)?;
        if !layout.level.is_multiple_of(character.level()) {
            return Err(PbwError::LevelTooSmall {
                level: layout.level,
                needed: layout.level.lcm(&character.level()),
            });
        }
        let mut system = group.system.clone();
        let folds = fold_relations(&layout, &mut system, &character);
        let stats = system.complete(folds, CompletionLimits::default())?;
        Ok(ReducedAlgebra {
            layout,
            character,
            system,
            stats,
        })
    }

    pub fn lattice(&self) -> &IsoLattice {
        &self.layout.lattice
    }

    pub fn ell(&self) -> u64 {
        self.layout.ell
    }

    pub fn level(&self) -> u32 {
        self.layout.level
    }

    pub fn order(&self) -> &ConvexOrder {
        &self.layout.order
    }

    pub fn character(&self) -> &LCharacter {
        &self.character
    }

    pub fn stats(&self) -> &CompletionStats {
        &self.stats
    }

    pub fn system(&self) -> &RewriteSystem {
        &self.system
    }

    pub fn check_confluence(&self) -> Result<usize, PbwError> {
        self.system.check_confluence()
    }

    pub fn normal_form(&self, x: &NcElement) -> Result<Vec<(PbwMonomial, CycloNum)>, PbwError> {
        let p = self.system.reduce(self.layout.to_poly(&self.system, x)?);
        self.layout.poly_to_pbw(self.system.letters(), &p)
    }

    pub fn is_zero(&self, x: &NcElement) -> Result<bool, PbwError> {
        Ok(self.system.reduce(self.layout.to_poly(&self.system, x)?).is_empty())
    }

    /// Number of normal monomials: irreducible words times `ℓ^{rank}` torus
    /// exponents.
    pub fn reduced_dimension(&self) -> Result<BigUint, PbwError> {
        let words = self.system.count_irreducible_words()?;
        Ok(words * BigUint::from(self.layout.ell).pow(self.layout.lattice.rank() as u32))
    }

    /// The normal monomials, lexicographic in `(A, B, C)`.
    pub fn enumerate_normal_basis(&self, cap: usize) -> Result<Vec<PbwMonomial>, PbwError> {
        let letters = self.system.letters();
        let rank = self.layout.lattice.rank();
        let ell = self.layout.ell as i64;
        let words = self.system.irreducible_words(cap)?;
        let torus_count = (ell as usize).pow(rank as u32);
        if words.len().saturating_mul(torus_count) > cap {
            return Err(PbwError::TooLarge {
                count: format!("{} x {}", words.len(), torus_count),
            });
        }
        let mut out = Vec::with_capacity(words.len() * torus_count);
        let one = CycloNum::one(self.layout.level);
        for w in words {
            let mut poly = Poly::new();
            poly.insert(letters.mono(w, vec![0; rank]), one.clone());
            let (m, _) = self.layout.poly_to_pbw(letters, &poly)?.remove(0);
            for t in 0..torus_count {
                let mut b = vec![0i64; rank];
                let mut x = t as i64;
                for bj in b.iter_mut().rev() {
                    *bj = x % ell;
                    x /= ell;
                }
                out.push(PbwMonomial {
                    a: m.a.clone(),
                    b,
                    c: m.c.clone(),
                });
            }
        }
        out.sort();
        Ok(out)
    }

    pub fn e(&self, r: usize) -> NcElement {
        NcElement::generator(Gen::E(r), self.layout.level)
    }

    pub fn f(&self, r: usize) -> NcElement {
        NcElement::generator(Gen::F(r), self.layout.level)
    }

    pub fn to_artifact(&self) -> RewriteArtifact {
        RewriteArtifact::build(&self.layout, &self.system, Some(&self.character))
    }

    pub fn from_artifact(artifact: &RewriteArtifact) -> Result<ReducedAlgebra, PbwError> {
        let (layout, system, character) = artifact.restore()?;
        let character = character.ok_or_else(|| PbwError::Artifact("missing ℓ-character".into()))?;
        Ok(ReducedAlgebra {
            layout,
            character,
            system,
            stats: CompletionStats::default(),
        })
    }
}

fn fold_relations(layout: &Layout, system: &mut RewriteSystem, character: &LCharacter) -> Vec<Poly> {
    let letters = system.letters().clone();
    let level = layout.level;
    system.set_fold(Fold {
        ell: layout.ell as i64,
        values: character.k_values.iter().map(|v| v.lift(level)).collect(),
    });
    let zk = system.zero_k();
    let ell = layout.ell as usize;
    let mut out = Vec::new();
    for p in 0..letters.n {
        let r = layout.pos_to_root[p];
        for (code, value) in [(letters.e(p), &character.e_values[r]), (letters.f(p), &character.f_values[r])] {
            let mut poly = Poly::new();
            system.push(&mut poly, vec![code; ell], zk.clone(), CycloNum::one(level));
            system.push(&mut poly, Vec::new(), zk.clone(), -value.lift(level));
            out.push(poly);
        }
    }
    out
}

/// Checks that `X^ℓ` commutes with every generator in `U_ε^M(g)` for every
/// root vector `X ∈ {E_γ, F_γ}`. Returns the number of commutators checked.
pub fn check_l_center(group: &QuantumGroup) -> Result<usize, PbwError> {
    let datum = group.lattice().datum();
    let np = datum.num_positive_roots();
    let level = group.level();
    let ell = group.ell() as u32;
    let mut gens: Vec<NcElement> = Vec::new();
    for i in 0..datum.rank() {
        gens.push(group.e(i));
        gens.push(group.f(i));
        gens.push(NcElement::generator(Gen::K(i), level));
    }
    let mut checked = 0;
    for r in 0..np {
        for x in [group.e(r), group.f(r)] {
            let power = x.pow(ell, level);
            for g in &gens {
                checked += 1;
                if !group.is_zero(&NcElement::commutator(&power, g))? {
                    return Err(PbwError::NonConfluent {
                        pair: format!("ℓ-th power of root vector {} is not central (fails against {g})", r + 1),
                    });
                }
            }
        }
    }
    Ok(checked)
}

/// Generator substitution `K_{μ_j} ↦ σ_j K_{μ_j}`, `E_γ ↦ τ_γ E_γ`,
/// `F_γ ↦ F_γ`, where `τ_γ` is the sign of `K_γ` under `σ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignTwist {
    pub k_signs: Vec<i64>,
    /// Indexed by the datum's positive-root index.
    pub e_signs: Vec<i64>,
}

pub fn sign_twist(lattice: &IsoLattice, signs: &[i64]) -> Result<SignTwist, PbwError> {
    if signs.len() != lattice.rank() || signs.iter().any(|s| s.abs() != 1) {
        return Err(PbwError::CharacterShape(format!(
            "expected {} signs in {{1, -1}}",
            lattice.rank()
        )));
    }
    let datum = lattice.datum();
    let cartan = IntMatrix::from_rows(datum.cartan());
    let e_signs = datum
        .positive_roots()
        .iter()
        .map(|g| {
            let w = cartan.mul_vec(g);
            let coords = lattice.coordinates(&w).expect("roots lie in M");
            coords
                .iter()
                .zip(signs)
                .map(|(&c, &s)| if c.rem_euclid(2) == 1 { s } else { 1 })
                .product()
        })
        .collect();
    Ok(SignTwist {
        k_signs: signs.to_vec(),
        e_signs,
    })
}

impl SignTwist {
    pub fn image(&self, g: Gen, level: u32) -> NcElement {
        let one = CycloNum::one(level);
        let signed = |s: i64| if s == 1 { one.clone() } else { -&one };
        match g {
            Gen::E(r) => NcElement::monomial(vec![g], signed(self.e_signs[r])),
            Gen::F(_) => NcElement::monomial(vec![g], one.clone()),
            Gen::K(j) | Gen::KInv(j) => NcElement::monomial(vec![g], signed(self.k_signs[j])),
        }
    }

    pub fn apply(&self, x: &NcElement) -> NcElement {
        let level = x.level();
        x.substitute(&|g| self.image(g, level))
    }

    /// Whether the substitution maps every defining relation into the
    /// two-sided ideal of relations, i.e. the image reduces to zero.
    pub fn preserves_relations(&self, group: &QuantumGroup) -> Result<bool, PbwError> {
        for rel in defining_relations(group.lattice(), group.ell(), group.level())? {
            if !group.is_zero(&self.apply(&rel.element))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Whether applying the twist twice fixes every generator.
    pub fn is_involution(&self, level: u32) -> bool {
        let gens = (0..self.e_signs.len())
            .flat_map(|r| [Gen::E(r), Gen::F(r)])
            .chain((0..self.k_signs.len()).flat_map(|j| [Gen::K(j), Gen::KInv(j)]));
        gens.into_iter().all(|g| {
            let x = NcElement::generator(g, level);
            self.apply(&self.apply(&x)) == x
        })
    }

    pub fn is_identity(&self) -> bool {
        self.k_signs.iter().chain(&self.e_signs).all(|&s| s == 1)
    }
}

/// Torus part of an ℓ-character on a lattice `M`: `η(K_{μ_j}^ℓ) = ζ_L^{e_j}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToralCharacter {
    pub level: u32,
    pub exponents: Vec<i64>,
}

impl ToralCharacter {
    pub fn from_character(ch: &LCharacter) -> Result<ToralCharacter, PbwError> {
        let level = ch.k_values.iter().fold(1u32, |acc, v| acc.lcm(&v.level()));
        let exponents = ch
            .k_values
            .iter()
            .map(|v| {
                v.lift(level)
                    .root_exponent()
                    .map(|e| e as i64)
                    .ok_or_else(|| PbwError::Unsupported("torus value is not a root of unity".into()))
            })
            .collect::<Result<_, _>>()?;
        Ok(ToralCharacter { level, exponents })
    }

    pub fn values(&self) -> Vec<CycloNum> {
        self.exponents
            .iter()
            .map(|&e| CycloNum::root_of_unity(self.level, e))
            .collect()
    }
}

/// Every torus character of `N` with values in `μ_L` that restricts to the
/// given character of `M`, as exponent vectors on `N`'s basis.
pub fn character_lifts(
    m: &IsoLattice,
    n: &IsoLattice,
    ell: u64,
    toral: &ToralCharacter,
) -> Result<Vec<Vec<i64>>, PbwError> {
    validate_ell(m.datum(), ell)?;
    if toral.exponents.len() != m.rank() {
        return Err(PbwError::CharacterShape(format!("expected {} exponents", m.rank())));
    }
    let c = m.relative_matrix(n)?;
    let index = c.det().unsigned_abs();
    let level = toral.level as i64;
    let solve = |lvl: i64, rhs: &[i64]| -> Vec<Vec<i64>> { solve_mod(&c.transpose(), rhs, lvl) };
    let lifts = solve(level, &toral.exponents);
    if lifts.len() as u64 == index {
        return Ok(lifts);
    }
    // smallest multiple of the level over which all |N/M| lifts exist
    for t in 2..=index as i64 {
        let rhs: Vec<i64> = toral.exponents.iter().map(|e| e * t).collect();
        if solve(level * t, &rhs).len() as u64 == index {
            return Err(PbwError::LevelTooSmall {
                level: toral.level,
                needed: (level * t) as u32,
            });
        }
    }
    unreachable!("level L·|N/M| always admits all lifts")
}

pub fn count_character_lifts(
    m: &IsoLattice,
    n: &IsoLattice,
    ell: u64,
    toral: &ToralCharacter,
) -> Result<usize, PbwError> {
    Ok(character_lifts(m, n, ell, toral)?.len())
}

/// All `x ∈ (Z/L)^n` with `A x ≡ b (mod L)`, for square `A`.
fn solve_mod(a: &IntMatrix, b: &[i64], modulus: i64) -> Vec<Vec<i64>> {
    // A = U D V, so D (V x) ≡ U^{-1} b
    let snf = smith_normal_form(a);
    let rhs = snf.u_inv.mul_vec(b);
    let n = a.cols();
    let mut per_coord: Vec<Vec<i64>> = Vec::with_capacity(n);
    for i in 0..n {
        let d = snf.d[(i, i)].rem_euclid(modulus);
        let r = rhs[i].rem_euclid(modulus);
        let sols: Vec<i64> = (0..modulus).filter(|&z| (d * z - r).rem_euclid(modulus) == 0).collect();
        if sols.is_empty() {
            return Vec::new();
        }
        per_coord.push(sols);
    }
    let mut out: Vec<Vec<i64>> = vec![Vec::new()];
    for sols in &per_coord {
        let mut next = Vec::with_capacity(out.len() * sols.len());
        for prefix in &out {
            for &z in sols {
                let mut v = prefix.clone();
                v.push(z);
                next.push(v);
            }
        }
        out = next;
    }
    let mut xs: Vec<Vec<i64>> = out
        .into_iter()
        .map(|y| snf.v_inv.mul_vec(&y).iter().map(|v| v.rem_euclid(modulus)).collect())
        .collect();
    xs.sort();
    xs
}

pub const REWRITE_SCHEMA: &str = "qroot/rewrite-system";
pub const REWRITE_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArtifactTerm {
    pub word: Vec<u8>,
    pub k: Vec<i64>,
    pub coeff: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArtifactRule {
    pub lhs: Vec<u8>,
    pub rhs: Vec<ArtifactTerm>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArtifactCharacter {
    pub e_values: Vec<Vec<String>>,
    pub f_values: Vec<Vec<String>>,
    pub k_values: Vec<Vec<String>>,
}

/// Serialized form of a completed rewriting system.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RewriteArtifact {
    pub schema: String,
    pub schema_version: u32,
    pub factors: Vec<String>,
    pub ell: u64,
    pub field_level: u32,
    /// Rows of the lattice basis matrix (columns are basis weights).
    pub lattice_basis: Vec<Vec<i64>>,
    /// 1-based simple reflection indices.
    pub convex_word: Vec<usize>,
    /// Positive roots in convex order, root coordinates.
    pub roots: Vec<Vec<i64>>,
    /// Letter names by code.
    pub alphabet: Vec<String>,
    pub character: Option<ArtifactCharacter>,
    pub rules: Vec<ArtifactRule>,
}

fn value_strings(v: &CycloNum, level: u32) -> Vec<String> {
    v.lift(level).to_strings()
}

impl RewriteArtifact {
    fn build(layout: &Layout, system: &RewriteSystem, character: Option<&LCharacter>) -> RewriteArtifact {
        let letters = system.letters();
        let level = layout.level;
        let alphabet = (0..letters.num_letters())
            .map(|c| {
                let root = &layout.order.roots()[letters.position(c as Code)];
                let name = if letters.is_e(c as Code) { "E" } else { "F" };
                format!("{name}{root:?}")
            })
            .collect();
        let mut rules: Vec<ArtifactRule> = system
            .rules()
            .map(|r| ArtifactRule {
                lhs: r.lhs.clone(),
                rhs: r
                    .rhs
                    .iter()
                    .rev()
                    .map(|(m, c)| ArtifactTerm {
                        word: m.word.clone(),
                        k: m.k.clone(),
                        coeff: value_strings(c, level),
                    })
                    .collect(),
            })
            .collect();
        rules.sort_by(|a, b| a.lhs.cmp(&b.lhs));
        RewriteArtifact {
            schema: REWRITE_SCHEMA.to_string(),
            schema_version: REWRITE_SCHEMA_VERSION,
            factors: layout.datum().factors().iter().map(|f| f.kind.to_string()).collect(),
            ell: layout.ell,
            field_level: level,
            lattice_basis: layout.lattice.basis().to_rows(),
            convex_word: layout.order.word().iter().map(|i| i + 1).collect(),
            roots: layout.order.roots().to_vec(),
            alphabet,
            character: character.map(|ch| ArtifactCharacter {
                e_values: ch.e_values.iter().map(|v| value_strings(v, level)).collect(),
                f_values: ch.f_values.iter().map(|v| value_strings(v, level)).collect(),
                k_values: ch.k_values.iter().map(|v| value_strings(v, level)).collect(),
            }),
            rules,
        }
    }

    fn restore(&self) -> Result<(Layout, RewriteSystem, Option<LCharacter>), PbwError> {
        let bad = |m: &str| PbwError::Artifact(m.to_string());
        if self.schema != REWRITE_SCHEMA {
            return Err(bad("unknown schema"));
        }
        if self.schema_version != REWRITE_SCHEMA_VERSION {
            return Err(PbwError::Artifact(format!(
                "unsupported schema version {}",
                self.schema_version
            )));
        }
        let kinds = self
            .factors
            .iter()
            .map(|s| s.parse::<SimpleType>())
            .collect::<Result<Vec<_>, _>>()?;
        let datum = Arc::new(RootDatum::semisimple(&kinds)?);
        let basis = IntMatrix::from_rows(&self.lattice_basis);
        let lattice = IsoLattice::from_basis(datum.clone(), basis)?;
        if lattice.basis().to_rows() != self.lattice_basis {
            return Err(bad("lattice basis is not in Hermite normal form"));
        }
        let word: Vec<usize> = self
            .convex_word
            .iter()
            .map(|&i| i.checked_sub(1).ok_or_else(|| bad("convex word is 1-based")))
            .collect::<Result<_, _>>()?;
        let order = ConvexOrder::from_word(&datum, &word)?;
        if order.roots() != self.roots.as_slice() {
            return Err(bad("roots do not match the convex word"));
        }
        let layout = Layout::new(&lattice, self.ell, self.field_level, order)?;
        let mut system = RewriteSystem::new(layout.letters());
        let level = self.field_level;
        let parse = |v: &Vec<String>| CycloNum::from_strings(level, v).map_err(PbwError::from);
        let character = match &self.character {
            None => None,
            Some(ch) => Some(LCharacter {
                e_values: ch.e_values.iter().map(parse).collect::<Result<_, _>>()?,
                f_values: ch.f_values.iter().map(parse).collect::<Result<_, _>>()?,
                k_values: ch.k_values.iter().map(parse).collect::<Result<_, _>>()?,
            }),
        };
        if let Some(ch) = &character {
            ch.check_shape(&lattice)?;
            system.set_fold(Fold {
                ell: self.ell as i64,
                values: ch.k_values.clone(),
            });
        }
        let letters = system.letters().clone();
        let nletters = letters.num_letters();
        let mut rules = Vec::with_capacity(self.rules.len());
        for r in &self.rules {
            if r.lhs.is_empty() || r.lhs.iter().any(|&c| c as usize >= nletters) {
                return Err(bad("rule left side uses an unknown letter"));
            }
            let mut rhs = Poly::new();
            for t in &r.rhs {
                if t.word.iter().any(|&c| c as usize >= nletters) || t.k.len() != lattice.rank() {
                    return Err(bad("rule right side has the wrong shape"));
                }
                let c = parse(&t.coeff)?;
                rhs.insert(
                    Mono {
                        weight: letters.word_weight(&t.word),
                        word: t.word.clone(),
                        k: t.k.clone(),
                    },
                    c,
                );
            }
            rules.push(Rule {
                lhs: r.lhs.clone(),
                rhs,
            });
        }
        system.load_rules(rules)?;
        system.check_confluence()?;
        let mut required = layout.seed_relations(&system)?;
        if let Some(ch) = &character {
            required.extend(fold_relations(&layout, &mut system, ch));
        }
        if required.into_iter().any(|p| !system.reduce(p).is_empty()) {
            return Err(bad("rules do not imply the defining relations"));
        }
        Ok((layout, system, character))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("artifact serializes")
    }

    pub fn from_json(s: &str) -> Result<RewriteArtifact, PbwError> {
        serde_json::from_str(s).map_err(|e| PbwError::Artifact(e.to_string()))
    }
}

impl QuantumGroup {
    pub fn to_artifact(&self) -> RewriteArtifact {
        RewriteArtifact::build(&self.layout, &self.system, None)
    }
}

/// Letters of a normal word, as generators (for display).
pub fn describe_rule_lhs(alg: &ReducedAlgebra, lhs: &[u8]) -> Vec<Gen> {
    let letters = alg.system.letters();
    lhs.iter().map(|&c| alg.layout.gen_of(letters, c)).collect()
}

#[cfg(test)]
mod tests;
