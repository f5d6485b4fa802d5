//! Conjugacy-class dimensions and the small-module dimension ledger in
//! type A: nilpotent orbits by partitions, induction from standard Levi
//! subgroups, Richardson Levis, rigidity, and the bound `ℓ^{dim O / 2}`.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::lattice::{levi_splitting_index, validate_ell, IsoLattice, LatticeError};
use crate::rootdata::{Family, RootDataError, RootDatum, SimpleType};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrbitError {
    #[error("a partition needs at least one part")]
    EmptyPartition,
    #[error("partition parts must be positive")]
    ZeroPart,
    #[error("conjugacy class dimension {0} is odd")]
    OddDimension(u64),
    #[error("partition of {got} given for a factor needing {expected}")]
    WrongSize { expected: usize, got: usize },
    #[error("expected {expected} unipotent entries (one per simple factor of the Levi), got {got}")]
    FactorCount { expected: usize, got: usize },
    #[error("a partition was given for a factor of type {0}; only type A takes partitions")]
    NotTypeA(String),
    #[error(transparent)]
    RootData(#[from] RootDataError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
}

/// A partition with weakly decreasing positive parts.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Partition {
    parts: Vec<usize>,
}

impl Partition {
    /// Sorts the parts into weakly decreasing order.
    pub fn new(mut parts: Vec<usize>) -> Result<Partition, OrbitError> {
        if parts.is_empty() {
            return Err(OrbitError::EmptyPartition);
        }
        if parts.contains(&0) {
            return Err(OrbitError::ZeroPart);
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(Partition { parts })
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn size(&self) -> usize {
        self.parts.iter().sum()
    }

    pub fn transpose(&self) -> Partition {
        let cols = self.parts[0];
        let parts = (1..=cols)
            .map(|c| self.parts.iter().filter(|&&p| p >= c).count())
            .collect();
        Partition { parts }
    }

    /// All partitions of `k`, in reverse lexicographic order.
    pub fn all(k: usize) -> Vec<Partition> {
        fn go(rem: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if rem == 0 {
                out.push(Partition { parts: cur.clone() });
                return;
            }
            for p in (1..=rem.min(max)).rev() {
                cur.push(p);
                go(rem - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        if k > 0 {
            go(k, k, &mut Vec::new(), &mut out);
        }
        out
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", s.join(","))
    }
}

impl std::str::FromStr for Partition {
    type Err = OrbitError;
    fn from_str(s: &str) -> Result<Partition, OrbitError> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts = inner
            .split(',')
            .filter(|t| !t.trim().is_empty())
            .map(|t| t.trim().parse::<usize>().map_err(|_| OrbitError::ZeroPart))
            .collect::<Result<Vec<_>, _>>()?;
        Partition::new(parts)
    }
}

/// `k^2 - Σ (p^T_i)^2` for the nilpotent orbit of `p ⊢ k` in `gl_k`
/// (equivalently in `sl_k`).
pub fn nilpotent_orbit_dim_a(p: &Partition) -> u64 {
    let k = p.size() as u64;
    let centralizer: u64 = p.transpose().parts.iter().map(|&c| (c * c) as u64).sum();
    k * k - centralizer
}

/// The nilpotent matrix in Jordan form with block sizes `p`.
pub fn jordan_matrix(p: &Partition) -> Vec<Vec<i64>> {
    let k = p.size();
    let mut m = vec![vec![0; k]; k];
    let mut start = 0;
    for &b in &p.parts {
        for i in start..start + b - 1 {
            m[i][i + 1] = 1;
        }
        start += b;
    }
    m
}

fn rational_rank(rows: Vec<Vec<BigRational>>) -> usize {
    let mut rows = rows;
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let pivot = rows[rank][c].clone();
        for r in rank + 1..rows.len() {
            if rows[r][c].is_zero() {
                continue;
            }
            let f = &rows[r][c] / &pivot;
            for j in c..cols {
                let t = &rows[rank][j] * &f;
                rows[r][j] -= t;
            }
        }
        rank += 1;
    }
    rank
}

/// Dimension of `{X ∈ gl_k : JX = XJ}` for the Jordan matrix `J` of `p`,
/// by linear algebra on the commutator map.
pub fn jordan_centralizer_dim(p: &Partition) -> u64 {
    let j = jordan_matrix(p);
    let k = j.len();
    // (JX - XJ)_{ab} = Σ_c J_ac X_cb - X_ac J_cb, as a k²×k² matrix on vec(X)
    let mut rows = vec![vec![BigRational::zero(); k * k]; k * k];
    for a in 0..k {
        for b in 0..k {
            let row = &mut rows[a * k + b];
            for c in 0..k {
                if j[a][c] != 0 {
                    row[c * k + b] += BigRational::from_integer(j[a][c].into());
                }
                if j[c][b] != 0 {
                    row[a * k + c] -= BigRational::from_integer(j[c][b].into());
                }
            }
        }
    }
    (k * k - rational_rank(rows)) as u64
}

/// `|Φ_Π|`, counting positive and negative roots.
pub fn levi_root_count(datum: &RootDatum, pi: &BTreeSet<usize>) -> u64 {
    2 * datum.parabolic_positive_roots(pi).len() as u64
}

/// `|Φ| - |Φ_Π| + dim_inner`: the dimension of the class induced from a
/// class of dimension `dim_inner` in the standard Levi of `Π`.
pub fn induced_orbit_dim(datum: &RootDatum, pi: &BTreeSet<usize>, dim_inner: u64) -> Result<u64, OrbitError> {
    datum.check_subset(pi)?;
    Ok(2 * datum.num_positive_roots() as u64 - levi_root_count(datum, pi) + dim_inner)
}

/// Block sizes of a standard Levi of `gl_k` whose trivial class induces to
/// the nilpotent class of `p`: the transpose partition.
pub fn richardson_levi_a(p: &Partition) -> Vec<usize> {
    p.transpose().parts
}

/// Simple roots of the standard Levi of `sl_k` with consecutive diagonal
/// blocks of the given sizes (0-based indices into `A_{k-1}`).
pub fn levi_subset_from_blocks(blocks: &[usize]) -> BTreeSet<usize> {
    let mut out = BTreeSet::new();
    let mut start = 0;
    for &b in blocks {
        for i in start..start + b - 1 {
            out.insert(i);
        }
        start += b;
    }
    out
}

/// Block sizes of the standard Levi of `A_n` given by `Π`.
pub fn blocks_from_levi_subset(n: usize, pi: &BTreeSet<usize>) -> Vec<usize> {
    let mut out = Vec::new();
    let mut size = 1;
    for i in 0..n {
        if pi.contains(&i) {
            size += 1;
        } else {
            out.push(size);
            size = 1;
        }
    }
    out.push(size);
    out
}

/// Induction of nilpotent classes from a block-diagonal Levi of `gl_k`:
/// the parts add row by row.
pub fn induce_partitions_a(blocks: &[Partition]) -> Partition {
    let len = blocks.iter().map(|p| p.parts.len()).max().unwrap_or(0);
    let parts = (0..len)
        .map(|i| blocks.iter().map(|p| p.parts.get(i).copied().unwrap_or(0)).sum())
        .collect();
    Partition { parts }
}

/// Whether the nilpotent class of `p ⊢ n+1` is induced from some class of a
/// proper standard Levi of `sl_{n+1}`, searching every proper `Π`.
pub fn is_induced_a(p: &Partition) -> bool {
    let k = p.size();
    let n = k - 1;
    fn fits(target: &[usize], blocks: &[usize], acc: &mut Vec<usize>) -> bool {
        let Some((&b, rest)) = blocks.split_first() else {
            return acc.iter().zip(target).all(|(a, t)| a == t) && acc.len() <= target.len();
        };
        Partition::all(b).into_iter().any(|q| {
            let ok = q.parts.len() <= target.len()
                && q.parts.iter().enumerate().all(|(i, &x)| acc.get(i).copied().unwrap_or(0) + x <= target[i]);
            if !ok {
                return false;
            }
            let saved = acc.clone();
            for (i, &x) in q.parts.iter().enumerate() {
                if i < acc.len() {
                    acc[i] += x;
                } else {
                    acc.push(x);
                }
            }
            let r = fits(target, rest, acc);
            *acc = saved;
            r
        })
    }
    (0..1u64 << n).any(|mask| {
        let pi: BTreeSet<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
        if pi.len() == n {
            return false;
        }
        fits(&p.parts, &blocks_from_levi_subset(n, &pi), &mut Vec::new())
    })
}

pub fn is_rigid_a(p: &Partition) -> bool {
    !is_induced_a(p)
}

/// `ℓ^{dim / 2}`.
pub fn dckp_bound_for_dim(ell: u64, dim: u64) -> Result<BigUint, OrbitError> {
    if dim % 2 == 1 {
        return Err(OrbitError::OddDimension(dim));
    }
    Ok(BigUint::from(ell).pow((dim / 2) as u32))
}

pub fn dckp_bound(ell: u64, orbit: &OrbitDescriptor) -> Result<BigUint, OrbitError> {
    dckp_bound_for_dim(ell, orbit.dim)
}

/// `ℓ^{(|Φ| - |Φ_Π|)/2} · dim_v`: dimension of a module induced from the
/// standard Levi of `Π`.
pub fn module_induction_dim(ell: u64, dim_v: &BigUint, datum: &RootDatum, pi: &BTreeSet<usize>) -> Result<BigUint, OrbitError> {
    datum.check_subset(pi)?;
    let e = (2 * datum.num_positive_roots() as u64 - levi_root_count(datum, pi)) / 2;
    Ok(BigUint::from(ell).pow(e as u32) * dim_v)
}

/// Unipotent data on one simple factor of the Levi.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum UnipotentData {
    Partition(Partition),
    /// Class dimension supplied directly (non-type-A factors).
    Dimension(u64),
}

/// A simple factor of the subsystem spanned by `Π`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeviFactor {
    pub simple_roots: Vec<usize>,
    /// `Some(k)` when the factor is of type `A_k`.
    pub type_a_rank: Option<usize>,
}

/// Connected components of the Dynkin subdiagram on `Π`, in order of their
/// smallest index.
pub fn levi_factors(datum: &RootDatum, pi: &BTreeSet<usize>) -> Vec<LeviFactor> {
    let cartan = datum.cartan();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for &start in pi {
        if !seen.insert(start) {
            continue;
        }
        let mut comp = vec![start];
        let mut stack = vec![start];
        while let Some(i) = stack.pop() {
            for &j in pi {
                if cartan[i][j] != 0 && seen.insert(j) {
                    comp.push(j);
                    stack.push(j);
                }
            }
        }
        comp.sort_unstable();
        let k = comp.len();
        let edges: usize = comp
            .iter()
            .flat_map(|&i| comp.iter().map(move |&j| (i, j)))
            .filter(|&(i, j)| i < j && cartan[i][j] != 0)
            .count();
        let simply_laced = comp
            .iter()
            .all(|&i| comp.iter().all(|&j| i == j || cartan[i][j] >= -1));
        let max_degree = comp
            .iter()
            .map(|&i| comp.iter().filter(|&&j| j != i && cartan[i][j] != 0).count())
            .max()
            .unwrap_or(0);
        let is_path = edges + 1 == k && max_degree <= 2;
        out.push(LeviFactor {
            simple_roots: comp,
            type_a_rank: (simply_laced && is_path).then_some(k),
        });
    }
    out
}

/// A conjugacy class `O_g` described by the standard Levi `L` with
/// `C(g_s)° = L` (simple roots `Π`) and the unipotent part on each simple
/// factor of `[L, L]`.
#[derive(Clone, Debug)]
pub struct OrbitDescriptor {
    pub datum: Arc<RootDatum>,
    pub levi: BTreeSet<usize>,
    pub unipotent: Vec<UnipotentData>,
    pub dim: u64,
}

impl OrbitDescriptor {
    pub fn new(datum: Arc<RootDatum>, levi: BTreeSet<usize>, unipotent: Vec<UnipotentData>) -> Result<OrbitDescriptor, OrbitError> {
        datum.check_subset(&levi)?;
        let factors = levi_factors(&datum, &levi);
        if factors.len() != unipotent.len() {
            return Err(OrbitError::FactorCount {
                expected: factors.len(),
                got: unipotent.len(),
            });
        }
        let mut inner = 0;
        for (f, u) in factors.iter().zip(&unipotent) {
            inner += match u {
                UnipotentData::Partition(p) => {
                    let Some(k) = f.type_a_rank else {
                        return Err(OrbitError::NotTypeA(format!("{:?}", f.simple_roots)));
                    };
                    if p.size() != k + 1 {
                        return Err(OrbitError::WrongSize {
                            expected: k + 1,
                            got: p.size(),
                        });
                    }
                    nilpotent_orbit_dim_a(p)
                }
                UnipotentData::Dimension(d) => {
                    if d % 2 == 1 {
                        return Err(OrbitError::OddDimension(*d));
                    }
                    *d
                }
            };
        }
        let dim = induced_orbit_dim(&datum, &levi, inner)?;
        Ok(OrbitDescriptor {
            datum,
            levi,
            unipotent,
            dim,
        })
    }

    /// The unipotent class of `p ⊢ n+1` in `SL_{n+1}`.
    pub fn unipotent_a(p: &Partition) -> Result<OrbitDescriptor, OrbitError> {
        let n = p.size() - 1;
        if n == 0 {
            return Err(OrbitError::WrongSize { expected: 2, got: 1 });
        }
        let datum = Arc::new(RootDatum::simple(SimpleType::new(Family::A, n)?));
        OrbitDescriptor::new(datum, (0..n).collect(), vec![UnipotentData::Partition(p.clone())])
    }

    /// The class of `(g, g')` in the product group.
    pub fn product(&self, other: &OrbitDescriptor) -> Result<OrbitDescriptor, OrbitError> {
        let kinds: Vec<SimpleType> = self
            .datum
            .factors()
            .iter()
            .chain(other.datum.factors())
            .map(|f| f.kind)
            .collect();
        let datum = Arc::new(RootDatum::semisimple(&kinds)?);
        let shift = self.datum.rank();
        let levi = self.levi.iter().copied().chain(other.levi.iter().map(|i| i + shift)).collect();
        let unipotent = self.unipotent.iter().chain(&other.unipotent).cloned().collect();
        OrbitDescriptor::new(datum, levi, unipotent)
    }
}

/// One audited step of a ledger.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LedgerLine {
    pub step: String,
    pub claim: String,
    pub holds: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CertificateStatus {
    /// All identities hold and `gcd(ℓ, (n+1)!) = 1`.
    Certified,
    /// All identities hold but the coprimality hypothesis fails, so no
    /// existence claim is made.
    HypothesisFails,
    /// A dimension identity failed.
    Falsified,
}

impl fmt::Display for CertificateStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CertificateStatus::Certified => "certified",
            CertificateStatus::HypothesisFails => "hypothesis-fails",
            CertificateStatus::Falsified => "falsified",
        })
    }
}

/// Dimension ledger for a small module of `U_η^N(sl_{n+1})`.
#[derive(Clone, Debug, Serialize)]
pub struct LedgerReport {
    pub rank: usize,
    pub ell: u64,
    pub levi: Vec<usize>,
    pub partitions: Vec<String>,
    pub orbit_dim: u64,
    /// Simple roots of the Levi from which the counit is induced.
    pub richardson_levi: Vec<usize>,
    pub module_dim: String,
    pub dckp_bound: String,
    pub status: CertificateStatus,
    pub lines: Vec<LedgerLine>,
}

fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// Builds the induction chain for the class with semisimple part centralized
/// by the Levi of `Π` and unipotent parts `parts` (one per simple factor of
/// `Π`, in order), on the lattice `n_lattice` of `A_n`.
///
/// Chain: each unipotent factor is Richardson from the Levi of its
/// transpose partition; the union `Π'` of those Levis carries the counit;
/// inducing it to `g` gives a module of dimension `ℓ^{(|Φ| - |Φ_Π'|)/2}`,
/// which is compared with `ℓ^{dim O / 2}`.
pub fn small_module_ledger_a(
    n_lattice: &IsoLattice,
    ell: u64,
    pi: &BTreeSet<usize>,
    parts: &[Partition],
) -> Result<LedgerReport, OrbitError> {
    let datum = n_lattice.datum();
    let kind = datum.simple_type();
    let n = datum.rank();
    if kind.map(|k| k.family) != Some(Family::A) {
        return Err(OrbitError::NotTypeA(datum.label()));
    }
    validate_ell(datum, ell)?;
    let orbit = OrbitDescriptor::new(
        n_lattice.datum_arc().clone(),
        pi.clone(),
        parts.iter().cloned().map(UnipotentData::Partition).collect(),
    )?;
    let mut lines = Vec::new();
    let mut all_hold = true;
    let mut push = |lines: &mut Vec<LedgerLine>, step: &str, claim: String, holds: bool| {
        all_hold &= holds;
        lines.push(LedgerLine {
            step: step.to_string(),
            claim,
            holds,
        });
    };

    let fact = factorial(n as u64 + 1);
    let coprime = (BigUint::from(ell).gcd(&fact)).is_one();
    lines.push(LedgerLine {
        step: "hypothesis".into(),
        claim: format!("gcd(ℓ, (n+1)!) = gcd({ell}, {fact}) = 1"),
        holds: coprime,
    });

    let split = levi_splitting_index(n_lattice, pi);
    let split_ok = split.gcd(&ell) == 1;
    lines.push(LedgerLine {
        step: "levi splitting".into(),
        claim: format!("gcd(ℓ, |N/(Q_Π ⊕ N_⊥^Π)|) = gcd({ell}, {split}) = 1"),
        holds: split_ok,
    });

    let factors = levi_factors(datum, pi);
    let mut richardson = BTreeSet::new();
    let mut half_sum = 0u64;
    for (f, p) in factors.iter().zip(parts) {
        let blocks = richardson_levi_a(p);
        let local: BTreeSet<usize> = levi_subset_from_blocks(&blocks)
            .into_iter()
            .map(|i| f.simple_roots[i])
            .collect();
        let sub = Arc::new(RootDatum::simple(SimpleType::new(Family::A, f.simple_roots.len())?));
        let local_sub: BTreeSet<usize> = levi_subset_from_blocks(&blocks);
        let induced = induced_orbit_dim(&sub, &local_sub, 0)?;
        let formula = nilpotent_orbit_dim_a(p);
        push(
            &mut lines,
            "richardson",
            format!(
                "class {p} on roots {:?} is induced from the trivial class of blocks {:?}: {induced} = {formula}",
                f.simple_roots, blocks
            ),
            induced == formula,
        );
        half_sum += formula / 2;
        richardson.extend(local);
    }

    let half_levi = (2 * datum.num_positive_roots() as u64 - levi_root_count(datum, pi)) / 2;
    push(
        &mut lines,
        "semisimple induction",
        format!(
            "dim O / 2 = (|Φ| - |Φ_Π|)/2 + Σ dim O_i / 2: {} = {half_levi} + {half_sum}",
            orbit.dim / 2
        ),
        orbit.dim / 2 == half_levi + half_sum,
    );

    let module_dim = module_induction_dim(ell, &BigUint::one(), datum, &richardson)?;
    let bound = dckp_bound(ell, &orbit)?;
    push(
        &mut lines,
        "module induction",
        format!(
            "counit of the Levi {:?} induces to dimension ℓ^{{(|Φ| - |Φ_Π'|)/2}} = {module_dim}; bound ℓ^{{dim O/2}} = {bound}",
            richardson.iter().collect::<Vec<_>>()
        ),
        module_dim == bound,
    );

    let status = if !all_hold {
        CertificateStatus::Falsified
    } else if coprime && split_ok {
        CertificateStatus::Certified
    } else {
        CertificateStatus::HypothesisFails
    };
    Ok(LedgerReport {
        rank: n,
        ell,
        levi: pi.iter().copied().collect(),
        partitions: parts.iter().map(|p| p.to_string()).collect(),
        orbit_dim: orbit.dim,
        richardson_levi: richardson.into_iter().collect(),
        module_dim: module_dim.to_string(),
        dckp_bound: bound.to_string(),
        status,
        lines,
    })
}

/// Header of the DCKP table.
pub const DCKP_TABLE_HEADER: &str = "type\trank\tell\tpartition\tdim_O\tdckp_bound\trichardson_levi\tstatus";

/// TSV rows (without header) for every unipotent class of `sl_{n+1}` for
/// the given ranks and values of ℓ, on the root lattice.
pub fn dckp_table_rows(ranks: &[usize], ells: &[u64]) -> Result<Vec<String>, OrbitError> {
    let mut rows = Vec::new();
    for &n in ranks {
        let datum = Arc::new(RootDatum::simple(SimpleType::new(Family::A, n)?));
        let q = IsoLattice::root_lattice(datum);
        let full: BTreeSet<usize> = (0..n).collect();
        for &ell in ells {
            for p in Partition::all(n + 1) {
                let report = small_module_ledger_a(&q, ell, &full, std::slice::from_ref(&p))?;
                let blocks: Vec<String> = richardson_levi_a(&p).iter().map(|b| b.to_string()).collect();
                rows.push(format!(
                    "A\t{n}\t{ell}\t{p}\t{}\t{}\t({})\t{}",
                    report.orbit_dim,
                    report.dckp_bound,
                    blocks.join(","),
                    report.status
                ));
            }
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn part(p: &[usize]) -> Partition {
        Partition::new(p.to_vec()).unwrap()
    }

    fn set(items: &[usize]) -> BTreeSet<usize> {
        items.iter().copied().collect()
    }

    fn a(n: usize) -> Arc<RootDatum> {
        Arc::new(RootDatum::simple(SimpleType::new(Family::A, n).unwrap()))
    }

    #[test]
    fn sl3_orbit_dimensions() {
        assert_eq!(nilpotent_orbit_dim_a(&part(&[1, 1, 1])), 0);
        assert_eq!(nilpotent_orbit_dim_a(&part(&[3])), 6);
        assert_eq!(nilpotent_orbit_dim_a(&part(&[2, 1])), 4);
        assert_eq!(jordan_centralizer_dim(&part(&[3])), 3);
        assert_eq!(jordan_centralizer_dim(&part(&[2, 1])), 5);
    }

    #[test]
    fn induction_examples() {
        let d = a(2);
        assert_eq!(induced_orbit_dim(&d, &set(&[]), 0).unwrap(), 6);
        assert_eq!(induced_orbit_dim(&d, &set(&[0]), 0).unwrap(), 4);
        assert_eq!(induced_orbit_dim(&d, &set(&[0, 1]), 4).unwrap(), 4);
        assert_eq!(richardson_levi_a(&part(&[3])), vec![1, 1, 1]);
        assert_eq!(richardson_levi_a(&part(&[2, 1])), vec![2, 1]);
        assert_eq!(richardson_levi_a(&part(&[1, 1, 1])), vec![3]);
    }

    #[test]
    fn bounds() {
        assert_eq!(dckp_bound_for_dim(3, 0).unwrap(), BigUint::from(1u32));
        assert_eq!(dckp_bound_for_dim(3, 4).unwrap(), BigUint::from(9u32));
        assert_eq!(dckp_bound_for_dim(5, 6).unwrap(), BigUint::from(125u32));
        assert_eq!(dckp_bound_for_dim(5, 3), Err(OrbitError::OddDimension(3)));
        let d = a(2);
        let one = BigUint::one();
        assert_eq!(module_induction_dim(5, &one, &d, &set(&[0, 1])).unwrap(), one);
        assert_eq!(module_induction_dim(5, &one, &d, &set(&[0])).unwrap(), BigUint::from(25u32));
        assert_eq!(module_induction_dim(5, &one, &d, &set(&[])).unwrap(), BigUint::from(125u32));
    }

    #[test]
    fn ledger_examples() {
        let q = IsoLattice::root_lattice(a(2));
        let full = set(&[0, 1]);
        let r = small_module_ledger_a(&q, 5, &full, &[part(&[2, 1])]).unwrap();
        assert_eq!(r.status, CertificateStatus::Certified);
        assert_eq!(r.module_dim, "25");
        let r = small_module_ledger_a(&q, 5, &full, &[part(&[1, 1, 1])]).unwrap();
        assert_eq!(r.status, CertificateStatus::Certified);
        assert_eq!(r.module_dim, "1");
        let r = small_module_ledger_a(&q, 3, &full, &[part(&[3])]).unwrap();
        assert_eq!(r.status, CertificateStatus::HypothesisFails);
        assert!(!r.lines[0].holds);
        // regular semisimple: Π = ∅
        let r = small_module_ledger_a(&q, 5, &set(&[]), &[]).unwrap();
        assert_eq!(r.orbit_dim, 6);
        assert_eq!(r.module_dim, "125");
        // mixed: sl4 with Levi A1 × A1 and a regular nilpotent on one factor
        let q = IsoLattice::root_lattice(a(3));
        let r = small_module_ledger_a(&q, 5, &set(&[0, 2]), &[part(&[2]), part(&[1, 1])]).unwrap();
        assert_eq!(r.orbit_dim, 12 - 4 + 2);
        assert_eq!(r.status, CertificateStatus::Certified);
    }

    #[test]
    fn descriptor_validation() {
        let d = a(3);
        assert!(matches!(
            OrbitDescriptor::new(d.clone(), set(&[0, 2]), vec![UnipotentData::Partition(part(&[2]))]),
            Err(OrbitError::FactorCount { .. })
        ));
        assert!(matches!(
            OrbitDescriptor::new(d, set(&[0, 1]), vec![UnipotentData::Partition(part(&[2]))]),
            Err(OrbitError::WrongSize { expected: 3, got: 2 })
        ));
        let b2 = Arc::new(RootDatum::simple("B2".parse().unwrap()));
        let f = levi_factors(&b2, &set(&[0, 1]));
        assert_eq!(f[0].type_a_rank, None);
        let o = OrbitDescriptor::new(b2, set(&[0, 1]), vec![UnipotentData::Dimension(6)]).unwrap();
        assert_eq!(o.dim, 6);
    }

    #[test]
    fn only_trivial_class_is_rigid() {
        for k in 2..=6 {
            for p in Partition::all(k) {
                assert_eq!(is_rigid_a(&p), p.parts.iter().all(|&x| x == 1), "{p}");
            }
        }
    }

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (1..=8).map(|k| Partition::all(k).len()).collect();
        assert_eq!(counts, vec![1, 2, 3, 5, 7, 11, 15, 22]);
    }

    #[test]
    fn table_rows() {
        let rows = dckp_table_rows(&[2], &[5]).unwrap();
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[0], "A\t2\t5\t(3)\t6\t125\t(1,1,1)\tcertified");
    }

    fn arb_partition() -> impl Strategy<Value = Partition> {
        prop::collection::vec(1usize..5, 1..5).prop_map(|v| Partition::new(v).unwrap())
    }

    proptest! {
        #[test]
        fn transpose_is_involution(p in arb_partition()) {
            prop_assert_eq!(p.transpose().transpose(), p.clone());
            prop_assert_eq!(Partition::new(richardson_levi_a(&p)).unwrap().transpose(), p);
        }

        #[test]
        fn formula_matches_brute_force(p in arb_partition()) {
            let k = p.size() as u64;
            prop_assert_eq!(nilpotent_orbit_dim_a(&p), k * k - jordan_centralizer_dim(&p));
        }

        #[test]
        fn bounds_multiply_over_products(p in arb_partition(), q in arb_partition(), ell in prop::sample::select(vec![3u64, 5, 7])) {
            prop_assume!(p.size() >= 2 && q.size() >= 2);
            let a = OrbitDescriptor::unipotent_a(&p).unwrap();
            let b = OrbitDescriptor::unipotent_a(&q).unwrap();
            let ab = a.product(&b).unwrap();
            prop_assert_eq!(ab.dim, a.dim + b.dim);
            prop_assert_eq!(dckp_bound(ell, &ab).unwrap(), dckp_bound(ell, &a).unwrap() * dckp_bound(ell, &b).unwrap());
        }

        #[test]
        fn induction_of_trivial_classes_is_transpose(blocks in prop::collection::vec(1usize..4, 1..4)) {
            let trivial: Vec<Partition> = blocks.iter().map(|&b| Partition::new(vec![1; b]).unwrap()).collect();
            let induced = induce_partitions_a(&trivial);
            prop_assert_eq!(induced.transpose(), Partition::new(blocks).unwrap());
        }
    }
}
