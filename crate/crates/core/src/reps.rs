//! Finite-dimensional representations given by matrices over `Q(ζ_L)`:
//! relation checks, ℓ-characters, irreducibility, the three-dimensional
//! `sl3` module at `ℓ = 3`, and one-dimensional modules with central
//! ℓ-character.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cyclo::{CycloError, CycloNum};
use crate::lattice::{cyclic_basis, smith_normal_form, validate_ell, IntMatrix, IsoLattice, LatticeError};
use crate::pbw::{
    check_supported, composite_root_vectors, defining_relations, Gen, LCharacter, NcElement, PbwError,
};
use crate::rootdata::{ConvexOrder, RootDataError, RootDatum, SimpleType};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RepError {
    #[error(transparent)]
    Pbw(#[from] PbwError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    RootData(#[from] RootDataError),
    #[error(transparent)]
    Cyclo(#[from] CycloError),
    #[error("malformed representation: {0}")]
    Shape(String),
    #[error("matrix of {generator} is singular")]
    SingularK { generator: String },
    #[error("not an ℓ-character-homogeneous module: {generator}^ℓ is not scalar")]
    NotHomogeneous { generator: String },
    #[error("the root system must be simple")]
    NotSimple,
    #[error("z of order {z_order} is not in the center for |M/Q| = {m} (exponent {exponent})")]
    InvalidZOrder { z_order: u64, m: u64, exponent: u64 },
    #[error("no 1-dimensional module: order of z is {z_order}, which does not divide m/d = {m}/{d}")]
    NoSmallModule { z_order: u64, m: u64, d: u64 },
    #[error("field level {level} is too small; need {needed}")]
    LevelTooSmall { level: u32, needed: u32 },
    #[error("the value is not a root of unity")]
    NotRootOfUnity,
    #[error("this example exists only for ℓ = 3 (got {0})")]
    WrongEll(u64),
    #[error("invalid representation JSON: {0}")]
    Json(String),
}

/// A dense square matrix with cyclotomic entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    n: usize,
    data: Vec<CycloNum>,
}

impl Matrix {
    pub fn zero(n: usize, level: u32) -> Matrix {
        Matrix {
            n,
            data: vec![CycloNum::zero(level); n * n],
        }
    }

    pub fn identity(n: usize, level: u32) -> Matrix {
        Matrix::scalar(n, &CycloNum::one(level))
    }

    pub fn scalar(n: usize, c: &CycloNum) -> Matrix {
        let mut m = Matrix::zero(n, c.level());
        for i in 0..n {
            m.data[i * n + i] = c.clone();
        }
        m
    }

    pub fn diagonal(entries: &[CycloNum]) -> Matrix {
        let n = entries.len();
        let level = entries.iter().map(CycloNum::level).max().unwrap_or(1);
        let mut m = Matrix::zero(n, level);
        for (i, e) in entries.iter().enumerate() {
            m.data[i * n + i] = e.clone();
        }
        m
    }

    /// The matrix unit with a 1 at `(i, j)`.
    pub fn unit(n: usize, i: usize, j: usize, level: u32) -> Matrix {
        let mut m = Matrix::zero(n, level);
        m.data[i * n + j] = CycloNum::one(level);
        m
    }

    pub fn from_rows(rows: Vec<Vec<CycloNum>>) -> Result<Matrix, RepError> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(RepError::Shape("matrix is not square".into()));
        }
        Ok(Matrix {
            n,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &CycloNum {
        &self.data[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<CycloNum>> {
        self.data.chunks(self.n.max(1)).map(|r| r.to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(CycloNum::is_zero)
    }

    /// `Some(c)` if the matrix is `c · I`.
    pub fn as_scalar(&self) -> Option<CycloNum> {
        let n = self.n;
        let c = self.data.first()?.clone();
        for i in 0..n {
            for j in 0..n {
                let v = &self.data[i * n + j];
                let ok = if i == j { *v == c } else { v.is_zero() };
                if !ok {
                    return None;
                }
            }
        }
        Some(c)
    }

    pub fn is_diagonal(&self) -> bool {
        let n = self.n;
        (0..n).all(|i| (0..n).all(|j| i == j || self.data[i * n + j].is_zero()))
    }

    pub fn transpose(&self) -> Matrix {
        let n = self.n;
        let mut data = Vec::with_capacity(n * n);
        for j in 0..n {
            for i in 0..n {
                data.push(self.data[i * n + j].clone());
            }
        }
        Matrix { n, data }
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        Matrix {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        Matrix {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, c: &CycloNum) -> Matrix {
        Matrix {
            n: self.n,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        let n = self.n;
        let level = self.level().max(other.level());
        let mut out = Matrix::zero(n, level);
        for i in 0..n {
            for k in 0..n {
                let a = &self.data[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &other.data[k * n + j];
                    if !b.is_zero() {
                        out.data[i * n + j] += &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[CycloNum]) -> Vec<CycloNum> {
        let n = self.n;
        (0..n)
            .map(|i| {
                let mut acc = CycloNum::zero(self.level());
                for (j, x) in v.iter().enumerate() {
                    let a = &self.data[i * n + j];
                    if !a.is_zero() && !x.is_zero() {
                        acc += &(a * x);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn pow(&self, e: u64) -> Matrix {
        let mut out = Matrix::identity(self.n, self.level());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                out = out.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        out
    }

    /// Gauss-Jordan inverse; `None` if singular.
    pub fn inverse(&self) -> Option<Matrix> {
        let n = self.n;
        let level = self.level();
        let mut a = self.rows();
        let mut inv = Matrix::identity(n, level).rows();
        for col in 0..n {
            let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
            a.swap(col, piv);
            inv.swap(col, piv);
            let p = a[col][col].inv().ok()?;
            for x in a[col].iter_mut().chain(inv[col].iter_mut()) {
                *x = &*x * &p;
            }
            for r in 0..n {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let f = a[r][col].clone();
                for c in 0..n {
                    let t = &a[col][c] * &f;
                    a[r][c] -= &t;
                    let t = &inv[col][c] * &f;
                    inv[r][c] -= &t;
                }
            }
        }
        Matrix::from_rows(inv).ok()
    }

    pub fn level(&self) -> u32 {
        self.data.iter().map(CycloNum::level).max().unwrap_or(1)
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.rows().iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            let cells: Vec<String> = row.iter().map(|c| c.to_string()).collect();
            write!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// Incrementally maintained echelon basis of a subspace of `Q(ζ_L)^n`.
#[derive(Clone, Debug, Default)]
struct Echelon {
    rows: Vec<(usize, Vec<CycloNum>)>,
}

impl Echelon {
    /// Adds `v` if it is independent of the current span; returns whether
    /// it was added.
    fn insert(&mut self, mut v: Vec<CycloNum>) -> bool {
        for (p, row) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let f = v[*p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x -= &(r * &f);
                }
            }
        }
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[p].inv().expect("nonzero pivot");
        for x in v.iter_mut() {
            *x = &*x * &inv;
        }
        self.rows.push((p, v));
        true
    }

    fn dim(&self) -> usize {
        self.rows.len()
    }
}

/// A basis of `{v : A v = 0 for all A}`.
fn common_kernel(mats: &[&Matrix], n: usize, level: u32) -> Vec<Vec<CycloNum>> {
    let mut rows: Vec<Vec<CycloNum>> = mats.iter().flat_map(|m| m.rows()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][col].inv().expect("nonzero pivot");
        for x in rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][col].is_zero() {
                let f = rows[i][col].clone();
                for c in 0..n {
                    let t = &rows[r][c] * &f;
                    rows[i][c] -= &t;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![CycloNum::zero(level); n];
            v[fc] = CycloNum::one(level);
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -&rows[i][fc];
            }
            v
        })
        .collect()
}

/// A representation of `U_ε^M(g)`: matrices for the simple `E_i`, `F_i`
/// and for `K_μ` with `μ` running over a chosen basis of `M`.
#[derive(Clone, Debug)]
pub struct Representation {
    lattice: IsoLattice,
    k_basis: IntMatrix,
    ell: u64,
    level: u32,
    dim: usize,
    e: Vec<Matrix>,
    f: Vec<Matrix>,
    k: Vec<Matrix>,
}

impl Representation {
    /// `k_basis` holds the weights (columns, weight coordinates) whose
    /// `K`-matrices are given in `k`; it must be a basis of a lattice
    /// between `Q` and `Λ`.
    pub fn new(
        datum: Arc<RootDatum>,
        k_basis: IntMatrix,
        ell: u64,
        level: u32,
        e: Vec<Matrix>,
        f: Vec<Matrix>,
        k: Vec<Matrix>,
    ) -> Result<Representation, RepError> {
        validate_ell(&datum, ell)?;
        if !(level as u64).is_multiple_of(ell) {
            return Err(RepError::Shape(format!("field level {level} is not a multiple of ℓ = {ell}")));
        }
        let n = datum.rank();
        if e.len() != n || f.len() != n || k.len() != n {
            return Err(RepError::Shape(format!("expected {n} matrices per generator family")));
        }
        let dim = e[0].size();
        if dim == 0 || e.iter().chain(&f).chain(&k).any(|m| m.size() != dim) {
            return Err(RepError::Shape("matrices must be nonempty and of equal size".into()));
        }
        let lattice = IsoLattice::from_basis(datum, k_basis.clone())?;
        if k_basis.det().unsigned_abs() != lattice.basis().det().unsigned_abs() {
            return Err(RepError::Shape("K weights are not a basis of a lattice".into()));
        }
        for (j, m) in k.iter().enumerate() {
            if m.inverse().is_none() {
                return Err(RepError::SingularK {
                    generator: format!("K{}", j + 1),
                });
            }
        }
        Ok(Representation {
            lattice,
            k_basis,
            ell,
            level,
            dim,
            e,
            f,
            k,
        })
    }

    pub fn lattice(&self) -> &IsoLattice {
        &self.lattice
    }

    pub fn k_basis(&self) -> &IntMatrix {
        &self.k_basis
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn e(&self, i: usize) -> &Matrix {
        &self.e[i]
    }

    pub fn f(&self, i: usize) -> &Matrix {
        &self.f[i]
    }

    pub fn k(&self, j: usize) -> &Matrix {
        &self.k[j]
    }

    /// `ρ(K_w)` for a weight `w ∈ M` (weight coordinates).
    pub fn k_weight(&self, w: &[i64]) -> Result<Matrix, RepError> {
        let coords = self
            .k_basis
            .solve_integral(w)
            .ok_or_else(|| RepError::Shape(format!("weight {w:?} is not in M")))?;
        let mut out = Matrix::identity(self.dim, self.level);
        for (j, &c) in coords.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let base = if c > 0 {
                self.k[j].clone()
            } else {
                self.k[j].inverse().ok_or_else(|| RepError::SingularK {
                    generator: format!("K{}", j + 1),
                })?
            };
            out = out.mul(&base.pow(c.unsigned_abs()));
        }
        Ok(out)
    }

    /// `ρ(K_γ)` for `γ` in root coordinates.
    pub fn k_root(&self, gamma: &[i64]) -> Result<Matrix, RepError> {
        let w = self.lattice.datum().root_to_weight(gamma);
        self.k_weight(&w)
    }

    /// Matrices of `K_{μ_j}` for the Hermite basis used by the presentation.
    fn hermite_k(&self) -> Result<Vec<(Matrix, Matrix)>, RepError> {
        self.lattice
            .basis()
            .columns()
            .iter()
            .map(|mu| {
                let m = self.k_weight(mu)?;
                let inv = m.inverse().ok_or_else(|| RepError::SingularK {
                    generator: format!("K{mu:?}"),
                })?;
                Ok((m, inv))
            })
            .collect()
    }

    fn evaluator(&self) -> Result<Evaluator<'_>, RepError> {
        Ok(Evaluator {
            rep: self,
            hermite_k: self.hermite_k()?,
        })
    }

    /// Substitutes the matrices into every defining relation.
    pub fn verify_relations(&self) -> Result<VerificationReport, RepError> {
        let eval = self.evaluator()?;
        let rels = defining_relations(&self.lattice, self.ell, self.level)?;
        let mut residuals = Vec::with_capacity(rels.len());
        for rel in rels {
            let m = eval.eval(&rel.element)?;
            residuals.push(Residual {
                label: rel.label,
                zero: m.is_zero(),
            });
        }
        Ok(VerificationReport {
            passed: residuals.iter().all(|r| r.zero),
            residuals,
        })
    }

    /// Matrices of `E_γ`, `F_γ` for every positive root (datum order).
    /// Composite root vectors need a supported rank unless every simple
    /// `E` (resp. `F`) acts by zero.
    pub fn root_vector_matrices(&self) -> Result<(Vec<Matrix>, Vec<Matrix>), RepError> {
        let datum = self.lattice.datum();
        let np = datum.num_positive_roots();
        let zero = Matrix::zero(self.dim, self.level);
        let all_zero = |ms: &[Matrix]| ms.iter().all(Matrix::is_zero);
        let supported = check_supported(datum).is_ok();
        if !supported && !(all_zero(&self.e) && all_zero(&self.f)) {
            check_supported(datum)?;
        }
        if !supported {
            return Ok((vec![zero.clone(); np], vec![zero; np]));
        }
        let order = ConvexOrder::standard(datum);
        let rvs = composite_root_vectors(datum, &order, self.ell, self.level)?;
        let eval = self.evaluator()?;
        let mut es = vec![zero.clone(); np];
        let mut fs = vec![zero; np];
        for rv in rvs {
            let r = datum.root_position(&rv.root).expect("positive root");
            es[r] = eval.eval(&rv.e)?;
            fs[r] = eval.eval(&rv.f)?;
        }
        Ok((es, fs))
    }

    /// The ℓ-character: scalars by which `E_γ^ℓ`, `F_γ^ℓ` and `K_{μ_j}^ℓ`
    /// act (`μ_j` the Hermite basis of `M`).
    pub fn l_character(&self) -> Result<CharacterReport, RepError> {
        let (es, fs) = self.root_vector_matrices()?;
        let scalar = |m: &Matrix, name: String| {
            m.pow(self.ell)
                .as_scalar()
                .ok_or(RepError::NotHomogeneous { generator: name })
        };
        let roots = self.lattice.datum().positive_roots();
        let e_values = es
            .iter()
            .zip(roots)
            .map(|(m, g)| scalar(m, format!("E{g:?}")))
            .collect::<Result<Vec<_>, _>>()?;
        let f_values = fs
            .iter()
            .zip(roots)
            .map(|(m, g)| scalar(m, format!("F{g:?}")))
            .collect::<Result<Vec<_>, _>>()?;
        let k_values = self
            .hermite_k()?
            .iter()
            .zip(self.lattice.basis().columns())
            .map(|((m, _), mu)| scalar(m, format!("K{mu:?}")))
            .collect::<Result<Vec<_>, _>>()?;
        let character = LCharacter {
            e_values,
            f_values,
            k_values,
        };
        let central = character.is_central(&self.lattice)?;
        Ok(CharacterReport { character, central })
    }

    /// `η(K_w^{ℓ t})` read off the representation, for `w ∈ M`.
    pub fn torus_power(&self, w: &[i64], times_ell: u64) -> Result<CycloNum, RepError> {
        self.k_weight(w)?
            .pow(self.ell * times_ell)
            .as_scalar()
            .ok_or(RepError::NotHomogeneous {
                generator: format!("K{w:?}"),
            })
    }

    fn generators(&self) -> Result<Vec<Matrix>, RepError> {
        let mut out: Vec<Matrix> = self.e.iter().chain(&self.f).chain(&self.k).cloned().collect();
        for (j, k) in self.k.iter().enumerate() {
            out.push(k.inverse().ok_or_else(|| RepError::SingularK {
                generator: format!("K{}", j + 1),
            })?);
        }
        Ok(out)
    }

    /// Burnside test plus a search for invariant subspaces spanned by
    /// cyclic submodules of natural candidate vectors.
    pub fn irreducibility(&self) -> Result<IrreducibilityReport, RepError> {
        let gens = self.generators()?;
        let n = self.dim;
        let flat = |m: &Matrix| m.rows().concat();
        let mut span = Echelon::default();
        let mut queue = vec![Matrix::identity(n, self.level)];
        span.insert(flat(&queue[0]));
        while let Some(x) = queue.pop() {
            for g in &gens {
                let y = g.mul(&x);
                if span.insert(flat(&y)) {
                    queue.push(y);
                }
            }
        }
        let span_dimension = span.dim();
        if span_dimension == n * n {
            return Ok(IrreducibilityReport {
                verdict: Irreducibility::Yes,
                span_dimension,
                invariant_subspace: None,
            });
        }
        let transposed: Vec<Matrix> = gens.iter().map(Matrix::transpose).collect();
        for (family, dual) in [(&gens, false), (&transposed, true)] {
            for v in self.candidate_vectors(family) {
                let sub = cyclic_submodule(family, v);
                if sub.len() < n {
                    return Ok(IrreducibilityReport {
                        verdict: Irreducibility::No,
                        span_dimension,
                        invariant_subspace: Some(InvariantSubspace { dual, basis: sub }),
                    });
                }
            }
        }
        Ok(IrreducibilityReport {
            verdict: Irreducibility::Undetermined,
            span_dimension,
            invariant_subspace: None,
        })
    }

    /// Common kernels of the `E`s and of the `F`s, and standard basis
    /// vectors when every torus matrix is diagonal.
    fn candidate_vectors(&self, family: &[Matrix]) -> Vec<Vec<CycloNum>> {
        let r = self.e.len();
        let n = self.dim;
        let (es, rest) = family.split_at(r);
        let (fs, ks) = rest.split_at(r);
        let mut out = common_kernel(&es.iter().collect::<Vec<_>>(), n, self.level);
        out.extend(common_kernel(&fs.iter().collect::<Vec<_>>(), n, self.level));
        if ks.iter().all(Matrix::is_diagonal) {
            for i in 0..n {
                let mut v = vec![CycloNum::zero(self.level); n];
                v[i] = CycloNum::one(self.level);
                out.push(v);
            }
        }
        out
    }

    /// If `E_α` or `F_α` acts by zero for a simple `α` then `K_α^2 = 1`;
    /// if `K_α^2 = 1` for a positive root `α` then `E_β = F_β = 0` for every
    /// `β` with `(α|β) ≢ 0 mod ℓ`.
    pub fn trick_check(&self) -> Result<TrickReport, RepError> {
        let datum = self.lattice.datum();
        let id = Matrix::identity(self.dim, self.level);
        let mut report = TrickReport::default();
        for i in 0..datum.rank() {
            if self.e[i].is_zero() || self.f[i].is_zero() {
                report.hypothesis_checks += 1;
                let k = self.k_root(&datum.simple_root(i))?;
                if k.mul(&k) != id {
                    report.violations.push(format!(
                        "generator E or F of simple root {} acts by zero but K^2 ≠ 1",
                        i + 1
                    ));
                }
            }
        }
        let (es, fs) = match self.root_vector_matrices() {
            Ok(v) => v,
            Err(RepError::Pbw(PbwError::Unsupported(_))) => {
                report.converse_skipped = true;
                return Ok(report);
            }
            Err(e) => return Err(e),
        };
        let roots = datum.positive_roots();
        let ell = self.ell as i64;
        for alpha in roots {
            let k = self.k_root(alpha)?;
            if k.mul(&k) != id {
                continue;
            }
            for (b, beta) in roots.iter().enumerate() {
                if datum.pair_roots(alpha, beta).rem_euclid(ell) == 0 {
                    continue;
                }
                report.converse_checks += 1;
                if !es[b].is_zero() || !fs[b].is_zero() {
                    report.violations.push(format!(
                        "K^2 = 1 for root {alpha:?} but root vectors of {beta:?} act nontrivially"
                    ));
                }
            }
        }
        Ok(report)
    }

    pub fn to_json(&self) -> RepresentationJson {
        let level = self.level;
        let mat = |m: &Matrix| -> Vec<Vec<Vec<String>>> {
            m.rows()
                .iter()
                .map(|r| r.iter().map(|c| c.lift(level).to_strings()).collect())
                .collect()
        };
        let mut generators = BTreeMap::new();
        for i in 0..self.e.len() {
            generators.insert(format!("E{}", i + 1), mat(&self.e[i]));
            generators.insert(format!("F{}", i + 1), mat(&self.f[i]));
        }
        for (j, k) in self.k.iter().enumerate() {
            generators.insert(format!("K{}", j + 1), mat(k));
        }
        RepresentationJson {
            schema: REPRESENTATION_SCHEMA.into(),
            schema_version: REPRESENTATION_SCHEMA_VERSION,
            factors: self
                .lattice
                .datum()
                .factors()
                .iter()
                .map(|f| f.kind.to_string())
                .collect(),
            ell: self.ell,
            field_level: level,
            lattice_basis: self.k_basis.to_rows(),
            dim: self.dim,
            generators,
        }
    }

    pub fn from_json(j: &RepresentationJson) -> Result<Representation, RepError> {
        if j.schema != REPRESENTATION_SCHEMA {
            return Err(RepError::Json(format!("unknown schema {:?}", j.schema)));
        }
        if j.schema_version != REPRESENTATION_SCHEMA_VERSION {
            return Err(RepError::Json(format!("unsupported schema version {}", j.schema_version)));
        }
        if j.field_level == 0 {
            return Err(RepError::Json("field level must be positive".into()));
        }
        let kinds = j
            .factors
            .iter()
            .map(|s| s.parse::<SimpleType>())
            .collect::<Result<Vec<_>, _>>()?;
        let datum = Arc::new(RootDatum::semisimple(&kinds)?);
        let n = datum.rank();
        if j.lattice_basis.len() != n || j.lattice_basis.iter().any(|r| r.len() != n) {
            return Err(RepError::Json(format!("lattice basis must be {n}×{n}")));
        }
        let basis = IntMatrix::from_rows(&j.lattice_basis);
        let get = |name: String| -> Result<Matrix, RepError> {
            let rows = j
                .generators
                .get(&name)
                .ok_or_else(|| RepError::Json(format!("missing generator {name}")))?;
            if rows.len() != j.dim {
                return Err(RepError::Json(format!("{name} is not {0}×{0}", j.dim)));
            }
            let rows = rows
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|c| CycloNum::from_strings(j.field_level, c).map_err(RepError::from))
                        .collect::<Result<Vec<_>, _>>()
                })
                .collect::<Result<Vec<_>, _>>()?;
            Matrix::from_rows(rows)
        };
        let e = (1..=n).map(|i| get(format!("E{i}"))).collect::<Result<Vec<_>, _>>()?;
        let f = (1..=n).map(|i| get(format!("F{i}"))).collect::<Result<Vec<_>, _>>()?;
        let k = (1..=n).map(|i| get(format!("K{i}"))).collect::<Result<Vec<_>, _>>()?;
        let expected: usize = 3 * n;
        if j.generators.len() != expected {
            return Err(RepError::Json("unexpected generator names".into()));
        }
        Representation::new(datum, basis, j.ell, j.field_level, e, f, k)
    }

    /// Direct sum with another representation over the same data.
    pub fn direct_sum(&self, other: &Representation) -> Result<Representation, RepError> {
        let block = |a: &Matrix, b: &Matrix| {
            let (p, q) = (a.size(), b.size());
            let level = a.level().max(b.level());
            let mut rows = vec![vec![CycloNum::zero(level); p + q]; p + q];
            for i in 0..p {
                for j in 0..p {
                    rows[i][j] = a.get(i, j).clone();
                }
            }
            for i in 0..q {
                for j in 0..q {
                    rows[p + i][p + j] = b.get(i, j).clone();
                }
            }
            Matrix::from_rows(rows).expect("square")
        };
        if self.k_basis != other.k_basis || self.ell != other.ell || self.level != other.level {
            return Err(RepError::Shape("direct sum needs identical lattice data".into()));
        }
        let zip = |a: &[Matrix], b: &[Matrix]| a.iter().zip(b).map(|(x, y)| block(x, y)).collect();
        Representation::new(
            self.lattice.datum_arc().clone(),
            self.k_basis.clone(),
            self.ell,
            self.level,
            zip(&self.e, &other.e),
            zip(&self.f, &other.f),
            zip(&self.k, &other.k),
        )
    }
}

fn cyclic_submodule(gens: &[Matrix], v: Vec<CycloNum>) -> Vec<Vec<CycloNum>> {
    let mut span = Echelon::default();
    let mut queue = vec![v.clone()];
    span.insert(v);
    while let Some(x) = queue.pop() {
        for g in gens {
            let y = g.mul_vec(&x);
            if span.insert(y.clone()) {
                queue.push(y);
            }
        }
    }
    span.rows.into_iter().map(|(_, r)| r).collect()
}

struct Evaluator<'a> {
    rep: &'a Representation,
    hermite_k: Vec<(Matrix, Matrix)>,
}

impl Evaluator<'_> {
    fn gen(&self, g: Gen) -> Result<&Matrix, RepError> {
        let rank = self.rep.e.len();
        match g {
            Gen::E(r) if r < rank => Ok(&self.rep.e[r]),
            Gen::F(r) if r < rank => Ok(&self.rep.f[r]),
            Gen::E(r) | Gen::F(r) => Err(RepError::Shape(format!("no matrix for root vector {}", r + 1))),
            Gen::K(j) => Ok(&self.hermite_k[j].0),
            Gen::KInv(j) => Ok(&self.hermite_k[j].1),
        }
    }

    fn eval(&self, x: &NcElement) -> Result<Matrix, RepError> {
        let n = self.rep.dim;
        let level = self.rep.level.lcm(&x.level());
        let mut out = Matrix::zero(n, level);
        for (word, c) in x.terms() {
            let mut m = Matrix::scalar(n, c);
            for &g in word {
                m = m.mul(self.gen(g)?);
            }
            out = out.add(&m);
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Residual {
    pub label: String,
    pub zero: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub passed: bool,
    pub residuals: Vec<Residual>,
}

impl VerificationReport {
    pub fn failures(&self) -> impl Iterator<Item = &Residual> {
        self.residuals.iter().filter(|r| !r.zero)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacterReport {
    pub character: LCharacter,
    pub central: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Irreducibility {
    Yes,
    No,
    Undetermined,
}

/// A proper invariant subspace of the module (`dual = false`) or of its
/// dual (`dual = true`, i.e. a proper quotient).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantSubspace {
    pub dual: bool,
    pub basis: Vec<Vec<CycloNum>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IrreducibilityReport {
    pub verdict: Irreducibility,
    pub span_dimension: usize,
    pub invariant_subspace: Option<InvariantSubspace>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TrickReport {
    pub hypothesis_checks: usize,
    pub converse_checks: usize,
    pub converse_skipped: bool,
    pub violations: Vec<String>,
}

impl TrickReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

pub const REPRESENTATION_SCHEMA: &str = "qroot/representation";
pub const REPRESENTATION_SCHEMA_VERSION: u32 = 1;

/// Serialized representation. Matrix entries are coefficient vectors in
/// the power basis of `Q(ζ_L)`, as `"p/q"` strings; `lattice_basis` rows
/// form a matrix whose columns are the weights `μ_j` with `K_{μ_j} ↦ Kj`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepresentationJson {
    pub schema: String,
    pub schema_version: u32,
    pub factors: Vec<String>,
    pub ell: u64,
    pub field_level: u32,
    pub lattice_basis: Vec<Vec<i64>>,
    pub dim: usize,
    pub generators: BTreeMap<String, Vec<Vec<Vec<String>>>>,
}

/// The 1-dimensional counit representation on any lattice.
pub fn counit_representation(lattice: &IsoLattice, ell: u64, level: u32) -> Result<Representation, RepError> {
    let n = lattice.rank();
    Representation::new(
        lattice.datum_arc().clone(),
        lattice.basis().clone(),
        ell,
        level,
        vec![Matrix::zero(1, level); n],
        vec![Matrix::zero(1, level); n],
        vec![Matrix::identity(1, level); n],
    )
}

/// The three-dimensional irreducible module of `U_ε^Λ(sl3)` at `ℓ = 3`
/// over `Q(ζ_9)`, with `ε = ζ_9^3`, `z = ζ_9^2` (so `z^3 = ε^2`), torus
/// basis `(λ_1, α_1)`, `K_{λ_1} ↦ diag(z, z^{-2}, z)` and
/// `K_{α_1} ↦ diag(1, ε, ε^2)`.
pub fn sl3_showcase(ell: u64) -> Result<Representation, RepError> {
    if ell != 3 {
        return Err(RepError::WrongEll(ell));
    }
    const L: u32 = 9;
    let datum = Arc::new(RootDatum::simple("A2".parse()?));
    let z = |k: i64| CycloNum::root_of_unity(L, 2 * k);
    let eps = |k: i64| CycloNum::root_of_unity(L, 3 * k);
    let basis = IntMatrix::from_columns(2, &[vec![1, 0], vec![2, -1]]);
    let unit = |i, j| Matrix::unit(3, i, j, L);
    Representation::new(
        datum,
        basis,
        ell,
        L,
        vec![unit(1, 2), unit(2, 0)],
        vec![unit(2, 1), unit(0, 2)],
        vec![
            Matrix::diagonal(&[z(1), z(-2), z(1)]),
            Matrix::diagonal(&[eps(0), eps(1), eps(2)]),
        ],
    )
}

fn simple_datum(lattice: &IsoLattice) -> Result<&RootDatum, RepError> {
    let d = lattice.datum();
    if !d.is_simple() {
        return Err(RepError::NotSimple);
    }
    Ok(d)
}

/// Exponent of `M/Q` (the largest elementary divisor).
fn quotient_exponent(lattice: &IsoLattice) -> Result<u64, RepError> {
    let q = IsoLattice::root_lattice(lattice.datum_arc().clone());
    let c = q.relative_matrix(lattice)?;
    Ok(smith_normal_form(&c)
        .invariants()
        .iter()
        .map(|d| d.unsigned_abs())
        .max()
        .unwrap_or(1))
}

/// `m = |M/Q|` and `d = gcd(ℓ, m)`.
pub fn central_parameters(lattice: &IsoLattice, ell: u64) -> Result<(u64, u64), RepError> {
    simple_datum(lattice)?;
    validate_ell(lattice.datum(), ell)?;
    let m = lattice.index_over_root_lattice();
    Ok((m, ell.gcd(&m)))
}

/// Whether `U_η^M(g)` has a 1-dimensional module for the central
/// ℓ-character with `π_M(η) = z`, given the order of `z` in `Z(G_M)`:
/// true iff the order divides `m/d`.
pub fn central_small_module_exists(lattice: &IsoLattice, ell: u64, z_order: u64) -> Result<bool, RepError> {
    let (m, d) = central_parameters(lattice, ell)?;
    let exponent = quotient_exponent(lattice)?;
    if z_order == 0 || exponent % z_order != 0 {
        return Err(RepError::InvalidZOrder { z_order, m, exponent });
    }
    Ok((m / d) % z_order == 0)
}

/// Writes a root of unity as `ζ_N^k` with `N` its level or twice it.
fn as_root_of_unity(v: &CycloNum) -> Result<(u32, u32), RepError> {
    let level = v.level();
    for lvl in [level, level.lcm(&2)] {
        if let Some(k) = v.lift(lvl).root_exponent() {
            return Ok((lvl, k));
        }
    }
    Err(RepError::NotRootOfUnity)
}

/// The deterministic `ξ` with `ξ^{2d} = target`: among the `2d` roots, the
/// one that exists in the smallest field containing `ζ_ℓ`, and then the
/// least exponent as a power of `ζ_L`. Returns `(L, exponent)`.
fn choose_xi(target: &CycloNum, d: u64, ell: u64, level: Option<u32>) -> Result<(u32, u32), RepError> {
    let (tl, tk) = as_root_of_unity(target)?;
    let two_d = 2 * d as u32;
    let n = tl * two_d;
    // candidates ζ_n^{tk + tl·j}
    let orders: Vec<u32> = (0..two_d)
        .map(|j| {
            let e = tk + tl * j;
            n / e.gcd(&n)
        })
        .collect();
    let base = match level {
        Some(l) => l,
        None => ell as u32,
    };
    let needed = orders.iter().map(|o| base.lcm(o)).min().expect("2d ≥ 2");
    let level = match level {
        Some(l) if l == needed => l,
        Some(l) => return Err(RepError::LevelTooSmall { level: l, needed }),
        None => needed,
    };
    let exp = (0..level)
        .find(|&k| {
            CycloNum::root_of_unity(level, k as i64)
                .pow(two_d as i64)
                .map(|p| p == *target)
                .unwrap_or(false)
        })
        .expect("a root exists at the needed level");
    Ok((level, exp))
}

/// The 1-dimensional module with central ℓ-character and
/// `η(K_{λ_M}^{2ℓ}) = z_value`, where `z_value = λ_M(z)`: `E, F ↦ 0`,
/// `K_{α_j} ↦ 1` for `j < n` and `K_{λ_M} ↦ ξ`, with `d = aℓ + bm` and
/// `ξ^{2d} = z_value^a`. The torus basis is `(λ_M, α_1, …, α_{n-1})`.
/// Only types `A_n` and `E6`, whose `Λ/Q` is cyclic, are handled.
pub fn construct_central_one_dim(
    lattice: &IsoLattice,
    ell: u64,
    z_value: &CycloNum,
    level: Option<u32>,
) -> Result<Representation, RepError> {
    let (m, d) = central_parameters(lattice, ell)?;
    let basis = cyclic_basis(lattice)?;
    let (zl, zk) = as_root_of_unity(z_value)?;
    let z_order = (zl / zk.gcd(&zl)) as u64;
    if m % z_order != 0 {
        return Err(RepError::InvalidZOrder {
            z_order,
            m,
            exponent: m,
        });
    }
    if (m / d) % z_order != 0 {
        return Err(RepError::NoSmallModule { z_order, m, d });
    }
    let g = (ell as i64).extended_gcd(&(m as i64));
    debug_assert_eq!(g.gcd as u64, d);
    let target = z_value.pow(g.x)?;
    if let Some(l) = level {
        if !(l as u64).is_multiple_of(ell) {
            return Err(RepError::Shape(format!("field level {l} is not a multiple of ℓ = {ell}")));
        }
    }
    let (level, xi_exp) = choose_xi(&target, d, ell, level)?;
    let n = lattice.rank();
    let xi = CycloNum::root_of_unity(level, xi_exp as i64);
    let mut k = vec![Matrix::identity(1, level); n];
    k[0] = Matrix::scalar(1, &xi);
    Representation::new(
        lattice.datum_arc().clone(),
        basis,
        ell,
        level,
        vec![Matrix::zero(1, level); n],
        vec![Matrix::zero(1, level); n],
        k,
    )
}

/// `λ_M` as a weight: the first vector of the cyclic basis of `M`.
pub fn lambda_m(lattice: &IsoLattice) -> Result<Vec<i64>, RepError> {
    Ok(cyclic_basis(lattice)?.column(0))
}

#[cfg(test)]
mod tests;
