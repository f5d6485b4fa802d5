//! Integer matrices, Smith and Hermite normal forms, and the lattices
//! `Q ⊆ M ⊆ Λ` sitting between the root and weight lattices.
//!
//! A lattice is stored by a square column basis in weight coordinates,
//! canonicalized to Hermite normal form so that equality of lattices is
//! equality of matrices.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use thiserror::Error;

use crate::rootdata::{Family, RootDatum};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("lattice is not contained in the target lattice")]
    NotContained,
    #[error("ℓ = {0} must be odd and at least 3")]
    EvenOrSmallEll(u64),
    #[error("ℓ = {0} must be coprime to 3 when a G2 factor is present")]
    EllDivisibleByThree(u64),
    #[error("generator is not an integral weight lattice basis")]
    Degenerate,
    #[error("lattice does not contain the root lattice")]
    MissingRoots,
    #[error("λ_Λ is only defined here for simple types A_n and E6, not {0}")]
    NoCyclicGenerator(String),
    #[error("lattice index {index} out of range (there are {count} intermediate lattices)")]
    IndexOutOfRange { index: usize, count: usize },
    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),
    #[error("matrix dimension mismatch")]
    Shape,
}

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.to_rows()).finish()
    }
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> IntMatrix {
        IntMatrix {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> IntMatrix {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows<R: AsRef<[i64]>>(rows: &[R]) -> IntMatrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.as_ref().len());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.as_ref().len(), c, "ragged matrix");
            data.extend_from_slice(row.as_ref());
        }
        IntMatrix {
            rows: r,
            cols: c,
            data,
        }
    }

    /// Builds a matrix whose columns are the given vectors (all of length
    /// `rows`).
    pub fn from_columns<C: AsRef<[i64]>>(rows: usize, cols: &[C]) -> IntMatrix {
        let mut m = IntMatrix::zeros(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.as_ref().len(), rows, "column length mismatch");
            for (i, &v) in col.as_ref().iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }

    pub fn diagonal(entries: &[i64]) -> IntMatrix {
        let mut m = IntMatrix::zeros(entries.len(), entries.len());
        for (i, &d) in entries.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn columns(&self) -> Vec<Vec<i64>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "matrix product shape mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[i64]) -> Vec<i64> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape mismatch");
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn select_rows(&self, idx: &[usize]) -> IntMatrix {
        let rows: Vec<Vec<i64>> = idx.iter().map(|&i| self.row(i).to_vec()).collect();
        if rows.is_empty() {
            return IntMatrix::zeros(0, self.cols);
        }
        IntMatrix::from_rows(&rows)
    }

    pub fn select_columns(&self, idx: &[usize]) -> IntMatrix {
        let cols: Vec<Vec<i64>> = idx.iter().map(|&j| self.column(j)).collect();
        IntMatrix::from_columns(self.rows, &cols)
    }

    /// Horizontal concatenation.
    pub fn hstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.rows, other.rows, "hstack shape mismatch");
        let mut cols = self.columns();
        cols.extend(other.columns());
        IntMatrix::from_columns(self.rows, &cols)
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> i64 {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return 1;
        }
        let mut m: Vec<Vec<BigInt>> = self
            .to_rows()
            .into_iter()
            .map(|r| r.into_iter().map(BigInt::from).collect())
            .collect();
        let mut sign = 1i64;
        let mut prev = BigInt::from(1);
        for k in 0..n - 1 {
            if m[k][k].is_zero() {
                match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                    Some(r) => {
                        m.swap(k, r);
                        sign = -sign;
                    }
                    None => return 0,
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                    m[i][j] = v;
                }
            }
            prev = m[k][k].clone();
        }
        let d = &m[n - 1][n - 1] * sign;
        d.to_i64().expect("determinant overflow")
    }

    /// Rational inverse of a square nonsingular matrix.
    pub fn rational_inverse(&self) -> Vec<Vec<BigRational>> {
        crate::rootdata::rational_inverse(&self.to_rows())
    }

    /// Solves `self · x = v` over the integers when `self` is square and
    /// nonsingular; `None` if the solution is not integral.
    pub fn solve_integral(&self, v: &[i64]) -> Option<Vec<i64>> {
        let inv = self.rational_inverse();
        let mut out = Vec::with_capacity(self.rows);
        for row in &inv {
            let mut s = BigRational::zero();
            for (a, &b) in row.iter().zip(v) {
                s += a * BigInt::from(b);
            }
            if !s.is_integer() {
                return None;
            }
            out.push(s.to_integer().to_i64()?);
        }
        Some(out)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row `dst` += c · row `src`
    fn add_row(&mut self, dst: usize, src: usize, c: i64) {
        if c != 0 {
            for j in 0..self.cols {
                let v = self[(src, j)];
                self[(dst, j)] += c * v;
            }
        }
    }

    /// column `dst` += c · column `src`
    fn add_col(&mut self, dst: usize, src: usize, c: i64) {
        if c != 0 {
            for i in 0..self.rows {
                let v = self[(i, src)];
                self[(i, dst)] += c * v;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            self[(i, j)] = -self[(i, j)];
        }
    }

    fn negate_col(&mut self, j: usize) {
        for i in 0..self.rows {
            self[(i, j)] = -self[(i, j)];
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = i64;
    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.data[i * self.cols + j]
    }
}

/// `A = U · D · V` with `U`, `V` unimodular and `D` diagonal,
/// `d_1 | d_2 | …`, nonnegative.
#[derive(Debug, Clone)]
pub struct Smith {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub u_inv: IntMatrix,
    pub v_inv: IntMatrix,
}

impl Smith {
    /// The diagonal entries `d_i` (length `min(rows, cols)`).
    pub fn invariants(&self) -> Vec<i64> {
        (0..self.d.rows.min(self.d.cols))
            .map(|i| self.d[(i, i)])
            .collect()
    }

    pub fn rank(&self) -> usize {
        self.invariants().iter().filter(|&&x| x != 0).count()
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> Smith {
    let (m, n) = (a.rows, a.cols);
    let mut d = a.clone();
    // P · A · Q = D, tracked together with the inverses
    let mut p = IntMatrix::identity(m);
    let mut p_inv = IntMatrix::identity(m);
    let mut q = IntMatrix::identity(n);
    let mut q_inv = IntMatrix::identity(n);

    macro_rules! row_swap {
        ($i:expr, $j:expr) => {{
            d.swap_rows($i, $j);
            p.swap_rows($i, $j);
            p_inv.swap_cols($i, $j);
        }};
    }
    macro_rules! col_swap {
        ($i:expr, $j:expr) => {{
            d.swap_cols($i, $j);
            q.swap_cols($i, $j);
            q_inv.swap_rows($i, $j);
        }};
    }
    // row dst += c row src
    macro_rules! row_add {
        ($dst:expr, $src:expr, $c:expr) => {{
            d.add_row($dst, $src, $c);
            p.add_row($dst, $src, $c);
            p_inv.add_col($src, $dst, -$c);
        }};
    }
    // col dst += c col src
    macro_rules! col_add {
        ($dst:expr, $src:expr, $c:expr) => {{
            d.add_col($dst, $src, $c);
            q.add_col($dst, $src, $c);
            q_inv.add_row($src, $dst, -$c);
        }};
    }

    for t in 0..m.min(n) {
        loop {
            // pivot: smallest nonzero entry in the remaining block
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    let v = d[(i, j)];
                    if v != 0 && best.is_none_or(|(bi, bj)| v.abs() < d[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                break;
            };
            row_swap!(t, pi);
            col_swap!(t, pj);
            let mut clean = true;
            for i in t + 1..m {
                let c = Integer::div_floor(&d[(i, t)], &d[(t, t)]);
                row_add!(i, t, -c);
                if d[(i, t)] != 0 {
                    clean = false;
                }
            }
            for j in t + 1..n {
                let c = Integer::div_floor(&d[(t, j)], &d[(t, t)]);
                col_add!(j, t, -c);
                if d[(t, j)] != 0 {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            let pivot = d[(t, t)];
            let offender = (t + 1..m).find(|&i| (t + 1..n).any(|j| d[(i, j)] % pivot != 0));
            match offender {
                Some(i) => row_add!(t, i, 1),
                None => break,
            }
        }
        if d[(t, t)] < 0 {
            d.negate_row(t);
            p.negate_row(t);
            p_inv.negate_col(t);
        }
    }
    Smith {
        u: p_inv,
        d,
        v: q_inv,
        u_inv: p,
        v_inv: q,
    }
}

/// Canonical basis of the lattice spanned by the columns of `gens`.
///
/// Returns a matrix whose columns form the Hermite normal form basis
/// (computed as the row-style HNF of the transpose: upper echelon, positive
/// pivots, entries above each pivot reduced into `[0, pivot)`).
pub fn hermite_basis(gens: &IntMatrix) -> IntMatrix {
    let mut h = gens.transpose();
    let (m, n) = (h.rows, h.cols);
    let mut r = 0;
    for c in 0..n {
        if r == m {
            break;
        }
        loop {
            let pivot = (r..m)
                .filter(|&i| h[(i, c)] != 0)
                .min_by_key(|&i| h[(i, c)].abs());
            let Some(pi) = pivot else {
                break;
            };
            h.swap_rows(r, pi);
            let mut done = true;
            for i in r + 1..m {
                let q = Integer::div_floor(&h[(i, c)], &h[(r, c)]);
                h.add_row(i, r, -q);
                if h[(i, c)] != 0 {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[(r, c)] == 0 {
            continue;
        }
        if h[(r, c)] < 0 {
            h.negate_row(r);
        }
        let piv = h[(r, c)];
        for i in 0..r {
            let q = Integer::div_floor(&h[(i, c)], &piv);
            h.add_row(i, r, -q);
        }
        r += 1;
    }
    let rows: Vec<Vec<i64>> = (0..r).map(|i| h.row(i).to_vec()).collect();
    IntMatrix::from_columns(n, &rows)
}

/// Columns spanning `{x ∈ Z^n : A x = 0}`.
pub fn integer_kernel(a: &IntMatrix) -> IntMatrix {
    let n = a.cols;
    if a.rows == 0 {
        return IntMatrix::identity(n);
    }
    let snf = smith_normal_form(a);
    let r = snf.rank();
    let cols: Vec<Vec<i64>> = (r..n).map(|j| snf.v_inv.column(j)).collect();
    IntMatrix::from_columns(n, &cols)
}

/// A lattice `Q ⊆ M ⊆ Λ`, stored by its Hermite basis in weight
/// coordinates.
#[derive(Clone)]
pub struct IsoLattice {
    datum: Arc<RootDatum>,
    basis: IntMatrix,
}

impl PartialEq for IsoLattice {
    fn eq(&self, other: &IsoLattice) -> bool {
        self.basis == other.basis && self.datum.cartan() == other.datum.cartan()
    }
}

impl Eq for IsoLattice {}

impl fmt::Debug for IsoLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IsoLattice[{}]{:?}", self.datum.label(), self.basis)
    }
}

impl IsoLattice {
    /// The lattice generated by `Q` together with extra weights.
    pub fn generated_by(datum: Arc<RootDatum>, extra: &[Vec<i64>]) -> IsoLattice {
        let n = datum.rank();
        let mut cols: Vec<Vec<i64>> = IntMatrix::from_rows(datum.cartan()).columns();
        cols.extend(extra.iter().cloned());
        let basis = hermite_basis(&IntMatrix::from_columns(n, &cols));
        IsoLattice { datum, basis }
    }

    /// Wraps an explicit square basis, checking `Q ⊆ M`.
    pub fn from_basis(datum: Arc<RootDatum>, basis: IntMatrix) -> Result<IsoLattice, LatticeError> {
        let n = datum.rank();
        if basis.rows != n || basis.cols != n {
            return Err(LatticeError::Shape);
        }
        if basis.det() == 0 {
            return Err(LatticeError::Degenerate);
        }
        let lattice = IsoLattice {
            basis: hermite_basis(&basis),
            datum,
        };
        let cartan = IntMatrix::from_rows(lattice.datum.cartan());
        for j in 0..n {
            if lattice.coordinates(&cartan.column(j)).is_none() {
                return Err(LatticeError::MissingRoots);
            }
        }
        Ok(lattice)
    }

    pub fn root_lattice(datum: Arc<RootDatum>) -> IsoLattice {
        IsoLattice::generated_by(datum, &[])
    }

    pub fn weight_lattice(datum: Arc<RootDatum>) -> IsoLattice {
        let n = datum.rank();
        let basis = IntMatrix::identity(n);
        IsoLattice { datum, basis }
    }

    pub fn datum(&self) -> &RootDatum {
        &self.datum
    }

    pub fn datum_arc(&self) -> &Arc<RootDatum> {
        &self.datum
    }

    pub fn rank(&self) -> usize {
        self.datum.rank()
    }

    /// Hermite basis; columns are the basis weights.
    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    /// `|Λ/M|`.
    pub fn index_in_weight_lattice(&self) -> u64 {
        self.basis.det().unsigned_abs()
    }

    /// `|M/Q|`.
    pub fn index_over_root_lattice(&self) -> u64 {
        let q = IntMatrix::from_rows(self.datum.cartan()).det().unsigned_abs();
        q / self.index_in_weight_lattice()
    }

    /// Coordinates of the weight `w` in this lattice's basis, if `w ∈ M`.
    pub fn coordinates(&self, w: &[i64]) -> Option<Vec<i64>> {
        self.basis.solve_integral(w)
    }

    pub fn contains(&self, w: &[i64]) -> bool {
        self.coordinates(w).is_some()
    }

    pub fn is_sublattice_of(&self, other: &IsoLattice) -> bool {
        self.basis.columns().iter().all(|c| other.contains(c))
    }

    /// The matrix `C` with `self.basis = other.basis · C`.
    pub fn relative_matrix(&self, other: &IsoLattice) -> Result<IntMatrix, LatticeError> {
        let cols = self
            .basis
            .columns()
            .iter()
            .map(|c| other.coordinates(c).ok_or(LatticeError::NotContained))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(IntMatrix::from_columns(self.rank(), &cols))
    }

    /// `|N/M|` for `M = self ⊆ N = other`.
    pub fn index_in(&self, other: &IsoLattice) -> Result<u64, LatticeError> {
        Ok(self.relative_matrix(other)?.det().unsigned_abs())
    }

    /// `M ∩ (span of the coordinates of one simple factor)`, as a basis of
    /// column vectors.
    pub fn factor_component(&self, factor: usize) -> IntMatrix {
        let f = self.datum.factors()[factor];
        let outside: Vec<usize> = (0..self.rank()).filter(|i| !f.range().contains(i)).collect();
        restrict_to_zero_rows(&self.basis, &outside)
    }

    /// Whether `M` is the direct sum of its intersections with the simple
    /// factors.
    pub fn is_product(&self) -> bool {
        let index: u64 = (0..self.datum.factors().len())
            .map(|k| self.factor_component(k).det().unsigned_abs())
            .product();
        index == self.index_in_weight_lattice()
    }

    /// `|N_i/M_i|` for every simple factor.
    pub fn factor_indices(&self, other: &IsoLattice) -> Result<Vec<u64>, LatticeError> {
        if !self.is_sublattice_of(other) {
            return Err(LatticeError::NotContained);
        }
        Ok((0..self.datum.factors().len())
            .map(|k| {
                let m = self.factor_component(k).det().unsigned_abs();
                let n = other.factor_component(k).det().unsigned_abs();
                m / n
            })
            .collect())
    }
}

/// Elements `basis · x` whose coordinates at `zero_rows` vanish; returns the
/// square block of the remaining coordinates when they form a complement.
fn restrict_to_zero_rows(basis: &IntMatrix, zero_rows: &[usize]) -> IntMatrix {
    let sub = basis.select_rows(zero_rows);
    let kernel = integer_kernel(&sub);
    let full = basis.mul(&kernel);
    let keep: Vec<usize> = (0..basis.rows).filter(|i| !zero_rows.contains(i)).collect();
    hermite_basis(&full.select_rows(&keep))
}

/// Validates `ℓ` for a datum: odd, at least 3, coprime to 3 with a `G2`
/// factor.
pub fn validate_ell(datum: &RootDatum, ell: u64) -> Result<(), LatticeError> {
    if ell < 3 || ell.is_multiple_of(2) {
        return Err(LatticeError::EvenOrSmallEll(ell));
    }
    if ell.is_multiple_of(3) && datum.has_family(Family::G) {
        return Err(LatticeError::EllDivisibleByThree(ell));
    }
    Ok(())
}

/// All lattices between `Q` and `Λ`, sorted by `|M/Q|` and then by basis
/// (so `Q` comes first and `Λ` last).
pub fn enumerate_intermediate_lattices(datum: Arc<RootDatum>) -> Vec<IsoLattice> {
    let n = datum.rank();
    let cartan = IntMatrix::from_rows(datum.cartan());
    let snf = smith_normal_form(&cartan);
    let inv = snf.invariants();
    // lifts of every element of Λ/Q ≅ ⊕ Z/d_i
    let mut elements: Vec<Vec<i64>> = vec![vec![0; n]];
    for (i, &d) in inv.iter().enumerate() {
        if d <= 1 {
            continue;
        }
        let mut next = Vec::new();
        for e in &elements {
            for k in 0..d {
                let mut y = e.clone();
                y[i] = k;
                next.push(y);
            }
        }
        elements = next;
    }
    let lifts: Vec<Vec<i64>> = elements.iter().map(|y| snf.u.mul_vec(y)).collect();

    let root = IsoLattice::root_lattice(datum.clone());
    let mut seen: HashSet<IntMatrix> = HashSet::from([root.basis.clone()]);
    let mut out = vec![root.clone()];
    let mut frontier = vec![root];
    while let Some(lat) = frontier.pop() {
        for w in &lifts {
            if lat.contains(w) {
                continue;
            }
            let mut cols = lat.basis.columns();
            cols.push(w.clone());
            let basis = hermite_basis(&IntMatrix::from_columns(n, &cols));
            if seen.insert(basis.clone()) {
                let next = IsoLattice {
                    datum: datum.clone(),
                    basis,
                };
                out.push(next.clone());
                frontier.push(next);
            }
        }
    }
    out.sort_by(|a, b| {
        a.index_over_root_lattice()
            .cmp(&b.index_over_root_lattice())
            .then_with(|| a.basis.cmp(&b.basis))
    });
    out
}

/// `λ_Λ` such that `λ_Λ, α_1, …, α_{n-1}` is a basis of `Λ`.
pub fn lambda_generator(datum: &RootDatum) -> Result<Vec<i64>, LatticeError> {
    let kind = datum
        .simple_type()
        .ok_or_else(|| LatticeError::NoCyclicGenerator(datum.label()))?;
    let n = kind.rank;
    let mut v = vec![0; n];
    match kind.family {
        Family::A => v[0] = 1,
        Family::E if n == 6 => {
            v[2] = 1;
            v[4] = -1;
        }
        _ => return Err(LatticeError::NoCyclicGenerator(kind.to_string())),
    }
    Ok(v)
}

/// The basis `(|Λ/M| λ_Λ, α_1, …, α_{n-1})` of `M` (types `A_n`, `E6`),
/// as columns in weight coordinates. Not Hermite-reduced.
pub fn cyclic_basis(lattice: &IsoLattice) -> Result<IntMatrix, LatticeError> {
    let datum = lattice.datum();
    let lam = lambda_generator(datum)?;
    let n = datum.rank();
    let k = lattice.index_in_weight_lattice() as i64;
    let cartan = IntMatrix::from_rows(datum.cartan());
    let mut cols = vec![lam.iter().map(|x| x * k).collect::<Vec<i64>>()];
    for j in 0..n - 1 {
        cols.push(cartan.column(j));
    }
    Ok(IntMatrix::from_columns(n, &cols))
}

fn checked_pow(base: u64, exp: usize) -> Result<u64, LatticeError> {
    base.checked_pow(exp as u32)
        .ok_or(LatticeError::Overflow("ℓ^n"))
}

/// Order of the image of `M/ℓM → N/ℓN`.
pub fn k_map_image_order(m: &IsoLattice, n: &IsoLattice, ell: u64) -> Result<u64, LatticeError> {
    validate_ell(m.datum(), ell)?;
    let c = m.relative_matrix(n)?;
    let snf = smith_normal_form(&c);
    let mut order = 1u64;
    for d in snf.invariants() {
        let g = (d.unsigned_abs()).gcd(&ell);
        order = order
            .checked_mul(ell / g)
            .ok_or(LatticeError::Overflow("image order"))?;
    }
    Ok(order)
}

pub fn k_map_is_iso(m: &IsoLattice, n: &IsoLattice, ell: u64) -> Result<bool, LatticeError> {
    Ok(k_map_image_order(m, n, ell)? == checked_pow(ell, m.rank())?)
}

/// `ℓ^n / |im k_MN|`.
pub fn iso_rank(m: &IsoLattice, n: &IsoLattice, ell: u64) -> Result<u64, LatticeError> {
    Ok(checked_pow(ell, m.rank())? / k_map_image_order(m, n, ell)?)
}

/// A sublattice of `Λ` of possibly lower rank, by a column basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sublattice {
    pub basis: IntMatrix,
}

impl Sublattice {
    pub fn rank(&self) -> usize {
        self.basis.cols()
    }
}

/// `N ∩ Π^⊥`, where `Π^⊥` is the set of weights orthogonal to `α_i`, `i ∈ Π`.
pub fn perp_sublattice(n: &IsoLattice, pi: &BTreeSet<usize>) -> Sublattice {
    let rows: Vec<usize> = pi.iter().copied().collect();
    // (μ|α_i) = d_i μ_i, so orthogonality is vanishing of the i-th coordinate
    let kernel = integer_kernel(&n.basis.select_rows(&rows));
    let full = n.basis.mul(&kernel);
    let basis = if full.cols() == 0 {
        full
    } else {
        hermite_basis(&full)
    };
    Sublattice { basis }
}

/// Elementary divisors of `N / (Q_Π ⊕ N_⊥^Π)`.
pub fn levi_quotient_invariants(n: &IsoLattice, pi: &BTreeSet<usize>) -> Vec<u64> {
    let cartan = IntMatrix::from_rows(n.datum().cartan());
    let idx: Vec<usize> = pi.iter().copied().collect();
    let q_pi = cartan.select_columns(&idx);
    let perp = perp_sublattice(n, pi);
    let s = q_pi.hstack(&perp.basis);
    let rel: Vec<Vec<i64>> = s
        .columns()
        .iter()
        .map(|c| n.coordinates(c).expect("Q_Π ⊕ N_⊥ lies in N"))
        .collect();
    let rel = IntMatrix::from_columns(n.rank(), &rel);
    smith_normal_form(&rel)
        .invariants()
        .into_iter()
        .map(|d| d.unsigned_abs())
        .collect()
}

/// `|N / (Q_Π ⊕ N_⊥^Π)|`.
pub fn levi_splitting_index(n: &IsoLattice, pi: &BTreeSet<usize>) -> u64 {
    levi_quotient_invariants(n, pi).iter().product()
}
