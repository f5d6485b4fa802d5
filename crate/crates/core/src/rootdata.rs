//! Finite root systems in Bourbaki numbering, reduced words for the longest
//! Weyl group element and the convex orders on positive roots they induce.
//!
//! Conventions used throughout the crate:
//!
//! * simple indices are 0-based internally (`α_1` of the literature is index 0);
//! * weights are integer vectors in the fundamental-weight basis;
//! * roots are integer vectors in the simple-root basis ("root coordinates");
//! * `cartan[i][j] = 2(α_i|α_j)/(α_i|α_i)`, so column `j` of the Cartan matrix
//!   is `α_j` in weight coordinates;
//! * the form is normalized so that short roots have `(α|α) = 2`, and
//!   `d_i = (α_i|α_i)/2`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RootDataError {
    #[error("invalid root system {kind}{rank}")]
    InvalidType { kind: char, rank: usize },
    #[error("unknown root system type {0:?}")]
    UnknownType(String),
    #[error("simple index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },
    #[error("word is not a reduced expression of the longest element: {0}")]
    NotLongestWord(String),
    #[error("empty list of simple factors")]
    Empty,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

impl Family {
    pub fn letter(self) -> char {
        match self {
            Family::A => 'A',
            Family::B => 'B',
            Family::C => 'C',
            Family::D => 'D',
            Family::E => 'E',
            Family::F => 'F',
            Family::G => 'G',
        }
    }

    pub fn from_letter(c: char) -> Option<Family> {
        Some(match c.to_ascii_uppercase() {
            'A' => Family::A,
            'B' => Family::B,
            'C' => Family::C,
            'D' => Family::D,
            'E' => Family::E,
            'F' => Family::F,
            'G' => Family::G,
            _ => return None,
        })
    }
}

/// A simple type `X_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SimpleType {
    pub family: Family,
    pub rank: usize,
}

impl SimpleType {
    pub fn new(family: Family, rank: usize) -> Result<SimpleType, RootDataError> {
        let ok = match family {
            Family::A => rank >= 1,
            Family::B | Family::C => rank >= 2,
            Family::D => rank >= 4,
            Family::E => (6..=8).contains(&rank),
            Family::F => rank == 4,
            Family::G => rank == 2,
        };
        if ok {
            Ok(SimpleType { family, rank })
        } else {
            Err(RootDataError::InvalidType {
                kind: family.letter(),
                rank,
            })
        }
    }

    /// Every valid simple type of rank at most `max_rank`, in a fixed order.
    pub fn all_up_to(max_rank: usize) -> Vec<SimpleType> {
        let mut out = Vec::new();
        for family in [
            Family::A,
            Family::B,
            Family::C,
            Family::D,
            Family::E,
            Family::F,
            Family::G,
        ] {
            for rank in 1..=max_rank {
                if let Ok(t) = SimpleType::new(family, rank) {
                    out.push(t);
                }
            }
        }
        out
    }

    /// Cartan matrix, `cartan[i][j] = <α_j, α_i^∨>`.
    pub fn cartan(&self) -> Vec<Vec<i64>> {
        let n = self.rank;
        let mut a = vec![vec![0i64; n]; n];
        for (i, row) in a.iter_mut().enumerate() {
            row[i] = 2;
        }
        let mut link = |i: usize, j: usize| {
            a[i][j] = -1;
            a[j][i] = -1;
        };
        match self.family {
            Family::A | Family::B | Family::C => {
                for i in 0..n - 1 {
                    link(i, i + 1);
                }
            }
            Family::D => {
                for i in 0..n - 2 {
                    link(i, i + 1);
                }
                link(n - 3, n - 1);
            }
            Family::E => {
                link(0, 2);
                link(1, 3);
                for i in 2..n - 1 {
                    link(i, i + 1);
                }
            }
            Family::F => {
                for i in 0..3 {
                    link(i, i + 1);
                }
            }
            Family::G => link(0, 1),
        }
        match self.family {
            Family::B => a[n - 1][n - 2] = -2,
            Family::C => a[n - 2][n - 1] = -2,
            Family::F => a[2][1] = -2,
            Family::G => a[0][1] = -3,
            _ => {}
        }
        a
    }

    /// `d_i = (α_i|α_i)/2` with short roots of squared length 2.
    pub fn symmetrizer(&self) -> Vec<i64> {
        let n = self.rank;
        match self.family {
            Family::A | Family::D | Family::E => vec![1; n],
            Family::B => (0..n).map(|i| if i + 1 < n { 2 } else { 1 }).collect(),
            Family::C => (0..n).map(|i| if i + 1 < n { 1 } else { 2 }).collect(),
            Family::F => vec![2, 2, 1, 1],
            Family::G => vec![1, 3],
        }
    }

    /// The table value `b(g)`: the larger of the largest bad prime and the
    /// largest `m` such that the Dynkin diagram contains `A_{m-1}`.
    pub fn b_bound(&self) -> u64 {
        let n = self.rank as u64;
        match self.family {
            Family::A => n + 1,
            Family::B | Family::C | Family::D => n,
            Family::E => n,
            Family::F | Family::G => 3,
        }
    }

    /// `|Λ/Q|`.
    pub fn fundamental_group_order(&self) -> u64 {
        let n = self.rank as u64;
        match self.family {
            Family::A => n + 1,
            Family::B | Family::C => 2,
            Family::D => 4,
            Family::E => 9 - n,
            Family::F | Family::G => 1,
        }
    }
}

impl fmt::Display for SimpleType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.family.letter(), self.rank)
    }
}

impl FromStr for SimpleType {
    type Err = RootDataError;
    fn from_str(s: &str) -> Result<SimpleType, RootDataError> {
        let s = s.trim();
        let mut chars = s.chars();
        let letter = chars
            .next()
            .ok_or_else(|| RootDataError::UnknownType(s.to_string()))?;
        let family =
            Family::from_letter(letter).ok_or_else(|| RootDataError::UnknownType(s.to_string()))?;
        let rank: usize = chars
            .as_str()
            .trim_start_matches('_')
            .parse()
            .map_err(|_| RootDataError::UnknownType(s.to_string()))?;
        SimpleType::new(family, rank)
    }
}

/// One simple factor of a semisimple datum, occupying simple indices
/// `offset..offset + kind.rank`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Factor {
    pub kind: SimpleType,
    pub offset: usize,
}

impl Factor {
    pub fn range(&self) -> std::ops::Range<usize> {
        self.offset..self.offset + self.kind.rank
    }
}

/// A (semisimple) root datum: a block-diagonal sum of simple types.
#[derive(Debug, Clone)]
pub struct RootDatum {
    factors: Vec<Factor>,
    cartan: Vec<Vec<i64>>,
    sym: Vec<i64>,
    positive_roots: Vec<Vec<i64>>,
    root_index: HashMap<Vec<i64>, usize>,
}

pub fn build_root_datum(kind: SimpleType) -> RootDatum {
    RootDatum::simple(kind)
}

impl RootDatum {
    pub fn simple(kind: SimpleType) -> RootDatum {
        RootDatum::semisimple(&[kind]).expect("one factor")
    }

    pub fn from_parts(family: Family, rank: usize) -> Result<RootDatum, RootDataError> {
        Ok(RootDatum::simple(SimpleType::new(family, rank)?))
    }

    pub fn semisimple(kinds: &[SimpleType]) -> Result<RootDatum, RootDataError> {
        if kinds.is_empty() {
            return Err(RootDataError::Empty);
        }
        let n: usize = kinds.iter().map(|k| k.rank).sum();
        let mut cartan = vec![vec![0i64; n]; n];
        let mut sym = Vec::with_capacity(n);
        let mut factors = Vec::with_capacity(kinds.len());
        let mut offset = 0;
        for kind in kinds {
            let block = kind.cartan();
            for (i, row) in block.iter().enumerate() {
                for (j, &v) in row.iter().enumerate() {
                    cartan[offset + i][offset + j] = v;
                }
            }
            sym.extend(kind.symmetrizer());
            factors.push(Factor {
                kind: *kind,
                offset,
            });
            offset += kind.rank;
        }
        let positive_roots = reflection_closure(&cartan);
        let root_index = positive_roots
            .iter()
            .enumerate()
            .map(|(i, r)| (r.clone(), i))
            .collect();
        Ok(RootDatum {
            factors,
            cartan,
            sym,
            positive_roots,
            root_index,
        })
    }

    pub fn rank(&self) -> usize {
        self.cartan.len()
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn is_simple(&self) -> bool {
        self.factors.len() == 1
    }

    /// The single simple type, if this datum is simple.
    pub fn simple_type(&self) -> Option<SimpleType> {
        if self.is_simple() {
            Some(self.factors[0].kind)
        } else {
            None
        }
    }

    pub fn has_family(&self, family: Family) -> bool {
        self.factors.iter().any(|f| f.kind.family == family)
    }

    pub fn label(&self) -> String {
        self.factors
            .iter()
            .map(|f| f.kind.to_string())
            .collect::<Vec<_>>()
            .join("x")
    }

    pub fn cartan(&self) -> &[Vec<i64>] {
        &self.cartan
    }

    /// `d_i = (α_i|α_i)/2`.
    pub fn symmetrizer(&self) -> &[i64] {
        &self.sym
    }

    /// `dim g = rank + 2|Φ⁺|`.
    pub fn dimension(&self) -> usize {
        self.rank() + 2 * self.positive_roots.len()
    }

    /// Positive roots in root coordinates; the simple roots come first, in
    /// index order, followed by the rest ordered by height.
    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.positive_roots
    }

    pub fn num_positive_roots(&self) -> usize {
        self.positive_roots.len()
    }

    pub fn root_position(&self, root: &[i64]) -> Option<usize> {
        self.root_index.get(root).copied()
    }

    pub fn simple_root(&self, i: usize) -> Vec<i64> {
        let mut v = vec![0; self.rank()];
        v[i] = 1;
        v
    }

    /// Symmetric matrix `(α_i|α_j) = d_i a_ij`.
    pub fn root_form(&self) -> Vec<Vec<i64>> {
        let n = self.rank();
        (0..n)
            .map(|i| (0..n).map(|j| self.sym[i] * self.cartan[i][j]).collect())
            .collect()
    }

    /// `(γ|δ)` for roots given in root coordinates.
    pub fn pair_roots(&self, g: &[i64], h: &[i64]) -> i64 {
        let n = self.rank();
        let mut s = 0;
        for i in 0..n {
            if g[i] == 0 {
                continue;
            }
            for j in 0..n {
                s += g[i] * self.sym[i] * self.cartan[i][j] * h[j];
            }
        }
        s
    }

    /// `(μ|γ)` for a weight `μ` (weight coordinates) and a root-lattice
    /// element `γ` (root coordinates); always an integer.
    pub fn pair_weight_root(&self, mu: &[i64], g: &[i64]) -> i64 {
        mu.iter()
            .zip(&self.sym)
            .zip(g)
            .map(|((m, d), x)| m * d * x)
            .sum()
    }

    /// `(γ|γ)/2` for a root `γ` in root coordinates.
    pub fn root_half_norm(&self, g: &[i64]) -> i64 {
        self.pair_roots(g, g) / 2
    }

    /// Converts root coordinates to weight coordinates.
    pub fn root_to_weight(&self, g: &[i64]) -> Vec<i64> {
        let n = self.rank();
        (0..n)
            .map(|i| (0..n).map(|j| self.cartan[i][j] * g[j]).sum())
            .collect()
    }

    /// The form on weights, `(λ_i|λ_j)`, as a rational matrix `D A^{-1}`.
    pub fn weight_form(&self) -> Vec<Vec<BigRational>> {
        let inv = rational_inverse(&self.cartan);
        inv.into_iter()
            .enumerate()
            .map(|(i, row)| {
                row.into_iter()
                    .map(|x| x * BigRational::from_integer(BigInt::from(self.sym[i])))
                    .collect()
            })
            .collect()
    }

    /// `(μ|ν)` for weights in weight coordinates.
    pub fn pair_weights(&self, mu: &[i64], nu: &[i64]) -> BigRational {
        let g = self.weight_form();
        let mut s = BigRational::zero();
        for (i, row) in g.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                s += v * BigInt::from(mu[i] * nu[j]);
            }
        }
        s
    }

    /// `s_i` acting on a weight (weight coordinates).
    pub fn reflect_weight(&self, i: usize, mu: &mut [i64]) {
        let c = mu[i];
        if c != 0 {
            for (k, m) in mu.iter_mut().enumerate() {
                *m -= c * self.cartan[k][i];
            }
        }
    }

    /// `s_i` acting on a root-lattice element (root coordinates).
    pub fn reflect_root(&self, i: usize, g: &mut [i64]) {
        let c: i64 = (0..self.rank()).map(|j| self.cartan[i][j] * g[j]).sum();
        g[i] -= c;
    }

    /// Positive roots supported on the simple indices in `pi`.
    pub fn parabolic_positive_roots(&self, pi: &BTreeSet<usize>) -> Vec<Vec<i64>> {
        self.positive_roots
            .iter()
            .filter(|r| r.iter().enumerate().all(|(i, &c)| c == 0 || pi.contains(&i)))
            .cloned()
            .collect()
    }

    pub fn check_subset(&self, pi: &BTreeSet<usize>) -> Result<(), RootDataError> {
        match pi.iter().find(|&&i| i >= self.rank()) {
            Some(&index) => Err(RootDataError::IndexOutOfRange {
                index,
                rank: self.rank(),
            }),
            None => Ok(()),
        }
    }

    /// `b(g)`: the maximum of the table values over the simple factors.
    pub fn b_bound(&self) -> u64 {
        self.factors.iter().map(|f| f.kind.b_bound()).max().unwrap_or(1)
    }
}

pub fn b_bound(kind: SimpleType) -> u64 {
    kind.b_bound()
}

fn reflection_closure(cartan: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = cartan.len();
    let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut frontier: Vec<Vec<i64>> = Vec::new();
    for i in 0..n {
        let mut e = vec![0; n];
        e[i] = 1;
        seen.insert(e.clone());
        frontier.push(e);
    }
    while let Some(g) = frontier.pop() {
        for i in 0..n {
            let c: i64 = (0..n).map(|j| cartan[i][j] * g[j]).sum();
            if c == 0 {
                continue;
            }
            let mut h = g.clone();
            h[i] -= c;
            if h.iter().all(|&x| x >= 0) && h.iter().any(|&x| x > 0) && seen.insert(h.clone()) {
                frontier.push(h);
            }
        }
    }
    let mut roots: Vec<Vec<i64>> = seen.into_iter().collect();
    roots.sort_by(|a, b| {
        let ha: i64 = a.iter().sum();
        let hb: i64 = b.iter().sum();
        ha.cmp(&hb).then_with(|| b.cmp(a))
    });
    roots
}

pub(crate) fn rational_inverse(a: &[Vec<i64>]) -> Vec<Vec<BigRational>> {
    let n = a.len();
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<BigRational> = row
                .iter()
                .map(|&x| BigRational::from_integer(BigInt::from(x)))
                .collect();
            r.extend((0..n).map(|j| {
                if i == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            }));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !m[r][col].is_zero())
            .expect("singular matrix");
        m.swap(col, pivot);
        let inv = m[col][col].recip();
        for x in m[col].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                let pivot_row = m[col].clone();
                for (x, p) in m[r].iter_mut().zip(pivot_row) {
                    *x -= &f * p;
                }
            }
        }
    }
    m.into_iter().map(|row| row[n..].to_vec()).collect()
}

/// A reduced word for `w_0` and the order it induces on `Φ⁺`:
/// `γ_k = s_{i_1} ⋯ s_{i_{k-1}}(α_{i_k})`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvexOrder {
    word: Vec<usize>,
    roots: Vec<Vec<i64>>,
    parabolic_len: usize,
}

impl ConvexOrder {
    /// Validates `word` as a reduced expression for `w_0` and computes the
    /// induced order.
    pub fn from_word(datum: &RootDatum, word: &[usize]) -> Result<ConvexOrder, RootDataError> {
        let n = datum.rank();
        if let Some(&index) = word.iter().find(|&&i| i >= n) {
            return Err(RootDataError::IndexOutOfRange { index, rank: n });
        }
        if word.len() != datum.num_positive_roots() {
            return Err(RootDataError::NotLongestWord(format!(
                "length {} but |Φ⁺| = {}",
                word.len(),
                datum.num_positive_roots()
            )));
        }
        let mut roots = Vec::with_capacity(word.len());
        let mut seen = BTreeSet::new();
        for k in 0..word.len() {
            let mut g = datum.simple_root(word[k]);
            for &i in word[..k].iter().rev() {
                datum.reflect_root(i, &mut g);
            }
            if !g.iter().all(|&x| x >= 0) || !seen.insert(g.clone()) {
                return Err(RootDataError::NotLongestWord(format!(
                    "prefix of length {} is not reduced",
                    k + 1
                )));
            }
            roots.push(g);
        }
        Ok(ConvexOrder {
            word: word.to_vec(),
            roots,
            parabolic_len: 0,
        })
    }

    /// The greedy reduced word: from `ρ`, repeatedly reflect in the lowest
    /// simple index with positive coordinate.
    pub fn standard(datum: &RootDatum) -> ConvexOrder {
        parabolic_reduced_word(datum, &BTreeSet::new()).expect("empty subset is valid")
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    /// Positive roots (root coordinates) in the induced order.
    pub fn roots(&self) -> &[Vec<i64>] {
        &self.roots
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn position(&self, root: &[i64]) -> Option<usize> {
        self.roots.iter().position(|r| r == root)
    }

    /// Length of the prefix spelling `w_0^Π` when built for a parabolic subset.
    pub fn parabolic_len(&self) -> usize {
        self.parabolic_len
    }

    /// Whether every decomposition `γ = γ' + γ''` into positive roots places
    /// `γ` strictly between `γ'` and `γ''`.
    pub fn is_convex(&self) -> bool {
        let pos: HashMap<&Vec<i64>, usize> =
            self.roots.iter().enumerate().map(|(i, r)| (r, i)).collect();
        for (i, a) in self.roots.iter().enumerate() {
            for (j, b) in self.roots.iter().enumerate().skip(i + 1) {
                let s: Vec<i64> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                if let Some(&k) = pos.get(&s) {
                    if !(i < k && k < j) {
                        return false;
                    }
                }
            }
        }
        true
    }
}

/// A reduced word for `w_0` whose first `|Φ_Π⁺|` letters spell `w_0^Π`.
pub fn parabolic_reduced_word(
    datum: &RootDatum,
    pi: &BTreeSet<usize>,
) -> Result<ConvexOrder, RootDataError> {
    datum.check_subset(pi)?;
    let n = datum.rank();
    let mut v = vec![1i64; n];
    let mut word = Vec::new();
    let mut descend = |allowed: &dyn Fn(usize) -> bool, word: &mut Vec<usize>| {
        while let Some(i) = (0..n).find(|&i| allowed(i) && v[i] > 0) {
            datum.reflect_weight(i, &mut v);
            word.push(i);
        }
    };
    descend(&|i| pi.contains(&i), &mut word);
    let prefix = word.len();
    descend(&|_| true, &mut word);
    let mut order = ConvexOrder::from_word(datum, &word)?;
    order.parabolic_len = prefix;
    Ok(order)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn st(s: &str) -> SimpleType {
        s.parse().unwrap()
    }

    fn set(items: &[usize]) -> BTreeSet<usize> {
        items.iter().copied().collect()
    }

    #[test]
    fn parse_and_validate_types() {
        assert_eq!(st("A2"), SimpleType { family: Family::A, rank: 2 });
        assert_eq!(st("e_6").to_string(), "E6");
        assert!("D3".parse::<SimpleType>().is_err());
        assert!("G3".parse::<SimpleType>().is_err());
        assert!("X2".parse::<SimpleType>().is_err());
        assert!("A0".parse::<SimpleType>().is_err());
    }

    #[test]
    fn small_root_systems() {
        let a2 = RootDatum::simple(st("A2"));
        assert_eq!(
            a2.positive_roots(),
            &[vec![1, 0], vec![0, 1], vec![1, 1]]
        );
        assert_eq!(RootDatum::simple(st("A1")).num_positive_roots(), 1);
        let g2 = RootDatum::simple(st("G2"));
        let longest = g2
            .positive_roots()
            .iter()
            .map(|r| g2.pair_roots(r, r))
            .max()
            .unwrap();
        assert_eq!(longest, 6);
        assert_eq!(g2.pair_roots(&[0, 1], &[0, 1]), 6);
        assert_eq!(g2.num_positive_roots(), 6);
    }

    fn classical_count(t: SimpleType) -> usize {
        let n = t.rank;
        match t.family {
            Family::A => n * (n + 1) / 2,
            Family::B | Family::C => n * n,
            Family::D => n * (n - 1),
            Family::E => [36, 63, 120][n - 6],
            Family::F => 24,
            Family::G => 6,
        }
    }

    #[test]
    fn positive_root_counts() {
        for t in SimpleType::all_up_to(8) {
            let d = RootDatum::simple(t);
            assert_eq!(d.num_positive_roots(), classical_count(t), "{t}");
        }
    }

    #[test]
    fn form_is_symmetric_with_short_roots_of_norm_two() {
        for t in SimpleType::all_up_to(8) {
            let d = RootDatum::simple(t);
            let f = d.root_form();
            for i in 0..t.rank {
                assert_eq!(d.cartan()[i][i], 2);
                for j in 0..t.rank {
                    assert_eq!(f[i][j], f[j][i], "{t}");
                    if i != j {
                        assert!(d.cartan()[i][j] <= 0);
                    }
                }
            }
            let min = d
                .positive_roots()
                .iter()
                .map(|r| d.pair_roots(r, r))
                .min()
                .unwrap();
            assert_eq!(min, 2, "{t}");
        }
    }

    #[test]
    fn fundamental_weights_are_dual_to_coroots() {
        for t in SimpleType::all_up_to(6) {
            let d = RootDatum::simple(t);
            let n = t.rank;
            for i in 0..n {
                let mut lam = vec![0; n];
                lam[i] = 1;
                for j in 0..n {
                    let alpha = d.root_to_weight(&d.simple_root(j));
                    // <λ_i, α_j^∨> = 2(λ_i|α_j)/(α_j|α_j)
                    let pairing = d.pair_weights(&lam, &alpha)
                        / BigRational::from_integer(BigInt::from(d.symmetrizer()[j]));
                    let expected = if i == j { 1 } else { 0 };
                    assert_eq!(pairing, BigRational::from_integer(expected.into()), "{t}");
                    assert_eq!(
                        d.pair_weight_root(&lam, &d.simple_root(j)),
                        if i == j { d.symmetrizer()[j] } else { 0 }
                    );
                }
            }
        }
    }

    #[test]
    fn determinant_matches_fundamental_group() {
        for t in SimpleType::all_up_to(8) {
            let d = RootDatum::simple(t);
            let det = crate::lattice::IntMatrix::from_rows(d.cartan()).det();
            assert_eq!(det as u64, t.fundamental_group_order(), "{t}");
        }
    }

    #[test]
    fn greedy_words() {
        let a2 = RootDatum::simple(st("A2"));
        let order = ConvexOrder::standard(&a2);
        assert_eq!(order.word(), &[0, 1, 0]);
        let order = parabolic_reduced_word(&a2, &set(&[1])).unwrap();
        assert_eq!(order.word(), &[1, 0, 1]);
        assert_eq!(order.roots(), &[vec![0, 1], vec![1, 1], vec![1, 0]]);
        let order = parabolic_reduced_word(&a2, &set(&[0])).unwrap();
        assert_eq!(order.parabolic_len(), 1);
        assert_eq!(order.roots()[0], vec![1, 0]);
        assert!(parabolic_reduced_word(&a2, &set(&[2])).is_err());
    }

    #[test]
    fn explicit_words_are_validated() {
        let a2 = RootDatum::simple(st("A2"));
        assert!(ConvexOrder::from_word(&a2, &[1, 0, 1]).is_ok());
        assert!(ConvexOrder::from_word(&a2, &[1, 1, 0]).is_err());
        assert!(ConvexOrder::from_word(&a2, &[1, 0]).is_err());
        assert!(ConvexOrder::from_word(&a2, &[1, 0, 3]).is_err());
    }

    /// Longest element of `W_Π` by brute force: the unique element sending
    /// every root of `Φ_Π⁺` to a negative root, found by breadth-first search
    /// over words in `Π`.
    fn longest_parabolic_length(d: &RootDatum, pi: &BTreeSet<usize>) -> usize {
        let n = d.rank();
        let start: Vec<i64> = (0..n).map(|i| if pi.contains(&i) { 1 } else { 0 }).collect();
        let mut best = 0;
        let mut seen = BTreeSet::from([start.clone()]);
        let mut layer = vec![start];
        let mut depth = 0;
        while !layer.is_empty() {
            best = depth;
            let mut next = Vec::new();
            for v in &layer {
                for &i in pi {
                    let mut w = v.clone();
                    d.reflect_weight(i, &mut w);
                    if seen.insert(w.clone()) {
                        next.push(w);
                    }
                }
            }
            layer = next;
            depth += 1;
        }
        best
    }

    #[test]
    fn parabolic_prefix_spells_longest_parabolic_element() {
        let a3 = RootDatum::simple(st("A3"));
        let pi = set(&[0, 1]);
        let order = parabolic_reduced_word(&a3, &pi).unwrap();
        assert_eq!(order.parabolic_len(), 3);
        assert_eq!(longest_parabolic_length(&a3, &pi), 3);
        let prefix: BTreeSet<Vec<i64>> = order.roots()[..3].iter().cloned().collect();
        let expected: BTreeSet<Vec<i64>> = a3.parabolic_positive_roots(&pi).into_iter().collect();
        assert_eq!(prefix, expected);
    }

    #[test]
    fn all_parabolic_orders_are_convex() {
        for t in SimpleType::all_up_to(4) {
            let d = RootDatum::simple(t);
            for mask in 0u32..(1 << t.rank) {
                let pi: BTreeSet<usize> = (0..t.rank).filter(|i| mask >> i & 1 == 1).collect();
                let order = parabolic_reduced_word(&d, &pi).unwrap();
                assert!(order.is_convex(), "{t} {pi:?}");
                let np = d.parabolic_positive_roots(&pi).len();
                assert_eq!(order.parabolic_len(), np);
                assert_eq!(longest_parabolic_length(&d, &pi), np);
                let prefix: BTreeSet<_> = order.roots()[..np].iter().cloned().collect();
                let expected: BTreeSet<_> = d.parabolic_positive_roots(&pi).into_iter().collect();
                assert_eq!(prefix, expected, "{t} {pi:?}");
            }
        }
    }

    /// Largest `m` with `A_{m-1}` a subdiagram: longest simply-laced path of
    /// equal-length roots, found by brute force over subsets.
    fn max_type_a_subdiagram(t: SimpleType) -> u64 {
        let d = RootDatum::simple(t);
        let a = d.cartan();
        let n = t.rank;
        let mut best = 1;
        for mask in 1u32..(1 << n) {
            let nodes: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
            let simply_laced = nodes.iter().all(|&i| {
                nodes
                    .iter()
                    .all(|&j| i == j || (a[i][j] == 0 && a[j][i] == 0) || (a[i][j] == -1 && a[j][i] == -1))
            });
            if !simply_laced {
                continue;
            }
            let degrees: Vec<usize> = nodes
                .iter()
                .map(|&i| nodes.iter().filter(|&&j| j != i && a[i][j] != 0).count())
                .collect();
            let edges: usize = degrees.iter().sum::<usize>() / 2;
            let is_path = degrees.iter().all(|&g| g <= 2) && edges + 1 == nodes.len();
            if is_path {
                best = best.max(nodes.len() as u64 + 1);
            }
        }
        best
    }

    fn largest_bad_prime(t: SimpleType) -> u64 {
        match t.family {
            Family::A => 1,
            Family::B | Family::C | Family::D => 2,
            Family::E if t.rank == 8 => 5,
            Family::E | Family::F | Family::G => 3,
        }
    }

    #[test]
    fn b_bound_matches_definition() {
        for t in SimpleType::all_up_to(8) {
            let expected = largest_bad_prime(t).max(max_type_a_subdiagram(t));
            assert_eq!(t.b_bound(), expected, "{t}");
        }
        assert_eq!(st("A5").b_bound(), 6);
        assert_eq!(st("E8").b_bound(), 8);
        assert_eq!(st("G2").b_bound(), 3);
        assert_eq!(st("F4").b_bound(), 3);
    }

    #[test]
    fn semisimple_blocks() {
        let d = RootDatum::semisimple(&[st("A1"), st("B2")]).unwrap();
        assert_eq!(d.rank(), 3);
        assert_eq!(d.num_positive_roots(), 1 + 4);
        assert_eq!(d.factors()[1].range(), 1..3);
        assert_eq!(d.label(), "A1xB2");
        assert_eq!(d.b_bound(), 2);
        assert!(ConvexOrder::standard(&d).is_convex());
        assert!(RootDatum::semisimple(&[]).is_err());
    }
}
