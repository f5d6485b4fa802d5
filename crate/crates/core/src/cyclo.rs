//! Exact arithmetic in cyclotomic fields `Q(ζ_L)` and the q-combinatorics
//! built on top of it.
//!
//! A [`CycloNum`] is a polynomial in `ζ_L` of degree `< φ(L)` with rational
//! coefficients, always kept reduced modulo the cyclotomic polynomial `Φ_L`.
//! Reduced forms are canonical, so equality is decidable coefficient-wise.
//!
//! Values of different levels may be mixed freely: binary operations lift
//! both operands to the least common multiple of their levels.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CycloError {
    #[error("division by zero in Q(zeta_{level})")]
    DivisionByZero { level: u32 },
    #[error("q-parameter e satisfies e^2 = 1; [c]_e is undefined")]
    DegenerateParameter,
    #[error("q-binomial [{c} choose {d}] requires 0 <= d <= c")]
    InvalidBinomial { c: i64, d: i64 },
    #[error("cyclotomic level must be positive")]
    ZeroLevel,
    #[error("malformed coefficient {0:?}")]
    BadCoefficient(String),
    #[error("expected {expected} coefficients at level {level}, found {found}")]
    WrongLength {
        level: u32,
        expected: usize,
        found: usize,
    },
}

/// Integer coefficients of the `n`-th cyclotomic polynomial, constant term
/// first.
///
/// Computed by exact division of `x^n - 1` by `Φ_d` for every proper divisor
/// `d` of `n`.
pub fn cyclotomic_poly(n: u32) -> Vec<i64> {
    assert!(n > 0, "cyclotomic_poly: n must be positive");
    let mut memo: HashMap<u32, Vec<i64>> = HashMap::new();
    cyclotomic_memo(n, &mut memo)
}

fn cyclotomic_memo(n: u32, memo: &mut HashMap<u32, Vec<i64>>) -> Vec<i64> {
    if let Some(p) = memo.get(&n) {
        return p.clone();
    }
    let mut num = vec![0i64; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            let phi_d = cyclotomic_memo(d, memo);
            num = exact_div_monic(&num, &phi_d);
        }
    }
    memo.insert(n, num.clone());
    num
}

fn exact_div_monic(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qd = rem.len() - 1 - dd;
    let mut quot = vec![0i64; qd + 1];
    for i in (0..=qd).rev() {
        let c = rem[i + dd];
        quot[i] = c;
        if c != 0 {
            for (j, &dj) in den.iter().enumerate() {
                rem[i + j] = rem[i + j]
                    .checked_sub(c.checked_mul(dj).expect("cyclotomic overflow"))
                    .expect("cyclotomic overflow");
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0), "inexact cyclotomic division");
    quot
}

pub fn euler_phi(n: u32) -> usize {
    let mut n = n;
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result as usize
}

/// Reduction data for one level `L`.
#[derive(Debug)]
pub struct CycloField {
    level: u32,
    degree: usize,
    phi: Vec<i64>,
    /// `powers[k]` = coefficients of `x^k mod Φ_L`, for `0 <= k < L`.
    powers: Vec<Vec<i64>>,
}

impl CycloField {
    fn build(level: u32) -> CycloField {
        let phi = cyclotomic_poly(level);
        let degree = phi.len() - 1;
        let mut powers = Vec::with_capacity(level as usize);
        let mut cur = vec![0i64; degree];
        cur[0] = 1;
        if degree == 0 {
            unreachable!("cyclotomic polynomials have positive degree");
        }
        for _ in 0..level {
            powers.push(cur.clone());
            // multiply by x, then eliminate x^degree using the monic Φ_L
            let top = cur[degree - 1];
            for i in (1..degree).rev() {
                cur[i] = cur[i - 1];
            }
            cur[0] = 0;
            if top != 0 {
                for i in 0..degree {
                    cur[i] = cur[i]
                        .checked_sub(top.checked_mul(phi[i]).expect("power table overflow"))
                        .expect("power table overflow");
                }
            }
        }
        CycloField {
            level,
            degree,
            phi,
            powers,
        }
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Coefficients of `Φ_L`, constant term first.
    pub fn modulus(&self) -> &[i64] {
        &self.phi
    }
}

static FIELDS: OnceLock<Mutex<HashMap<u32, Arc<CycloField>>>> = OnceLock::new();

/// Shared reduction tables for level `L` (memoized).
pub fn field(level: u32) -> Arc<CycloField> {
    assert!(level > 0, "cyclotomic level must be positive");
    let cache = FIELDS.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("field cache poisoned");
    guard
        .entry(level)
        .or_insert_with(|| Arc::new(CycloField::build(level)))
        .clone()
}

/// An exact element of `Q(ζ_L)`.
#[derive(Clone)]
pub struct CycloNum {
    field: Arc<CycloField>,
    coeffs: Vec<BigRational>,
}

impl CycloNum {
    pub fn zero(level: u32) -> CycloNum {
        let field = field(level);
        let coeffs = vec![BigRational::zero(); field.degree];
        CycloNum { field, coeffs }
    }

    pub fn one(level: u32) -> CycloNum {
        CycloNum::from_integer(level, 1)
    }

    pub fn from_integer(level: u32, value: i64) -> CycloNum {
        CycloNum::from_rational(level, BigRational::from_integer(BigInt::from(value)))
    }

    pub fn from_rational(level: u32, value: BigRational) -> CycloNum {
        let mut out = CycloNum::zero(level);
        out.coeffs[0] = value;
        out
    }

    /// `ζ_L^(k mod L)` in reduced form.
    pub fn root_of_unity(level: u32, k: i64) -> CycloNum {
        let field = field(level);
        let e = k.rem_euclid(level as i64) as usize;
        let coeffs = field.powers[e]
            .iter()
            .map(|&c| BigRational::from_integer(BigInt::from(c)))
            .collect();
        CycloNum { field, coeffs }
    }

    /// Builds an element from coefficients of `1, ζ, ζ², …` of any length,
    /// reducing modulo `Φ_L`.
    pub fn from_power_coeffs(level: u32, coeffs: &[BigRational]) -> CycloNum {
        let field = field(level);
        let mut out = vec![BigRational::zero(); field.degree];
        for (k, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let row = &field.powers[k % level as usize];
            for (o, &r) in out.iter_mut().zip(row) {
                if r != 0 {
                    *o += c * BigInt::from(r);
                }
            }
        }
        CycloNum { field, coeffs: out }
    }

    /// Builds an element from its reduced coefficient vector, which must have
    /// length exactly `φ(L)`.
    pub fn from_reduced(level: u32, coeffs: Vec<BigRational>) -> Result<CycloNum, CycloError> {
        if level == 0 {
            return Err(CycloError::ZeroLevel);
        }
        let field = field(level);
        if coeffs.len() != field.degree {
            return Err(CycloError::WrongLength {
                level,
                expected: field.degree,
                found: coeffs.len(),
            });
        }
        Ok(CycloNum { field, coeffs })
    }

    pub fn level(&self) -> u32 {
        self.field.level
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// The rational value if this element lies in `Q`.
    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    /// Re-expresses this element in `Q(ζ_M)` for a multiple `M` of the level.
    pub fn lift(&self, new_level: u32) -> CycloNum {
        let level = self.level();
        assert!(
            new_level.is_multiple_of(level),
            "cannot lift level {level} to {new_level}"
        );
        if new_level == level {
            return self.clone();
        }
        let step = (new_level / level) as usize;
        let field = field(new_level);
        let mut out = vec![BigRational::zero(); field.degree];
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let row = &field.powers[(i * step) % new_level as usize];
            for (o, &r) in out.iter_mut().zip(row) {
                if r != 0 {
                    *o += c * BigInt::from(r);
                }
            }
        }
        CycloNum { field, coeffs: out }
    }

    fn aligned(a: &CycloNum, b: &CycloNum) -> (CycloNum, CycloNum) {
        let l = (a.level() as u64).lcm(&(b.level() as u64)) as u32;
        (a.lift(l), b.lift(l))
    }

    fn mul_same(&self, other: &CycloNum) -> CycloNum {
        let field = &self.field;
        let deg = field.degree;
        let level = field.level as usize;
        let mut raw: Vec<BigRational> = vec![BigRational::zero(); (2 * deg).saturating_sub(1).max(1)];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                raw[i + j] += a * b;
            }
        }
        let mut out = vec![BigRational::zero(); deg];
        for (k, c) in raw.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if k < deg {
                out[k] += c;
                continue;
            }
            let row = &field.powers[k % level];
            for (o, &r) in out.iter_mut().zip(row) {
                if r != 0 {
                    *o += c * BigInt::from(r);
                }
            }
        }
        CycloNum {
            field: field.clone(),
            coeffs: out,
        }
    }

    /// Multiplies by `ζ_L^k` (cheaper than a general product).
    pub fn mul_root(&self, k: i64) -> CycloNum {
        let field = &self.field;
        let level = field.level as i64;
        let shift = k.rem_euclid(level);
        if shift == 0 {
            return self.clone();
        }
        let mut out = vec![BigRational::zero(); field.degree];
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = ((i as i64 + shift) % level) as usize;
            let row = &field.powers[e];
            for (o, &r) in out.iter_mut().zip(row) {
                if r != 0 {
                    *o += c * BigInt::from(r);
                }
            }
        }
        CycloNum {
            field: field.clone(),
            coeffs: out,
        }
    }

    pub fn scale(&self, r: &BigRational) -> CycloNum {
        CycloNum {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm in `Q[x]`.
    pub fn inv(&self) -> Result<CycloNum, CycloError> {
        if self.is_zero() {
            return Err(CycloError::DivisionByZero {
                level: self.level(),
            });
        }
        let modulus: Vec<BigRational> = self
            .field
            .phi
            .iter()
            .map(|&c| BigRational::from_integer(BigInt::from(c)))
            .collect();
        let a = trim(self.coeffs.clone());
        // invariant: s * a ≡ r (mod Φ)
        let (mut r0, mut r1) = (modulus, a);
        let (mut s0, mut s1) = (vec![], vec![BigRational::one()]);
        while r1.len() != 1 {
            let (q, r) = poly_divrem(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s2;
            debug_assert!(!r1.is_empty(), "Φ_L is irreducible");
        }
        let c = r1[0].clone();
        let inv_c = c.recip();
        let coeffs: Vec<BigRational> = s1.iter().map(|x| x * &inv_c).collect();
        Ok(CycloNum::from_power_coeffs(self.level(), &coeffs))
    }

    pub fn pow(&self, exp: i64) -> Result<CycloNum, CycloError> {
        let base = if exp < 0 { self.inv()? } else { self.clone() };
        let mut e = exp.unsigned_abs();
        let mut result = CycloNum::one(self.level());
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul_same(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul_same(&b);
            }
        }
        Ok(result)
    }

    /// If this element equals `ζ_L^k` for some `k`, returns the least such
    /// `k` in `0..L`.
    pub fn root_exponent(&self) -> Option<u32> {
        let level = self.level();
        (0..level).find(|&k| {
            let row = &self.field.powers[k as usize];
            self.coeffs
                .iter()
                .zip(row)
                .all(|(c, &r)| *c == BigRational::from_integer(BigInt::from(r)))
        })
    }

    /// Multiplicative order, if this element is a root of unity.
    pub fn root_order(&self) -> Option<u32> {
        let k = self.root_exponent()?;
        let level = self.level();
        Some(level / (k as u64).gcd(&(level as u64)) as u32)
    }

    /// Coefficients rendered as `"p/q"` strings, for serialization.
    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }

    pub fn from_strings(level: u32, items: &[String]) -> Result<CycloNum, CycloError> {
        let coeffs = items
            .iter()
            .map(|s| parse_rational(s))
            .collect::<Result<Vec<_>, _>>()?;
        CycloNum::from_reduced(level, coeffs)
    }
}

pub(crate) fn parse_rational(s: &str) -> Result<BigRational, CycloError> {
    let s = s.trim();
    let bad = || CycloError::BadCoefficient(s.to_string());
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().map_err(|_| bad())?;
            Ok(BigRational::from_integer(n))
        }
    }
}

fn trim(mut p: Vec<BigRational>) -> Vec<BigRational> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let mut out = vec![BigRational::zero(); n];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(out)
}

fn poly_divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut rem = a.to_vec();
    let db = b.len() - 1;
    let lead_inv = b[db].recip();
    if rem.len() < b.len() {
        return (vec![], trim(rem));
    }
    let mut quot = vec![BigRational::zero(); rem.len() - db];
    for i in (0..quot.len()).rev() {
        let c = &rem[i + db] * &lead_inv;
        if !c.is_zero() {
            for (j, bj) in b.iter().enumerate() {
                rem[i + j] -= &c * bj;
            }
        }
        quot[i] = c;
    }
    rem.truncate(db);
    (trim(quot), trim(rem))
}

impl PartialEq for CycloNum {
    fn eq(&self, other: &CycloNum) -> bool {
        if self.level() == other.level() {
            self.coeffs == other.coeffs
        } else {
            let (a, b) = CycloNum::aligned(self, other);
            a.coeffs == b.coeffs
        }
    }
}

impl Eq for CycloNum {}

impl fmt::Debug for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycloNum[L={}]({})", self.level(), self)
    }
}

impl fmt::Display for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match (i, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (_, true) => write!(f, "z{}^{}", self.level(), i)?,
                (_, false) => write!(f, "{mag}*z{}^{}", self.level(), i)?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Add<&CycloNum> for &CycloNum {
    type Output = CycloNum;
    fn add(self, rhs: &CycloNum) -> CycloNum {
        if self.level() != rhs.level() {
            let (a, b) = CycloNum::aligned(self, rhs);
            return &a + &b;
        }
        CycloNum {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub<&CycloNum> for &CycloNum {
    type Output = CycloNum;
    fn sub(self, rhs: &CycloNum) -> CycloNum {
        if self.level() != rhs.level() {
            let (a, b) = CycloNum::aligned(self, rhs);
            return &a - &b;
        }
        CycloNum {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul<&CycloNum> for &CycloNum {
    type Output = CycloNum;
    fn mul(self, rhs: &CycloNum) -> CycloNum {
        if self.level() != rhs.level() {
            let (a, b) = CycloNum::aligned(self, rhs);
            return a.mul_same(&b);
        }
        self.mul_same(rhs)
    }
}

/// Panics on division by zero; use [`CycloNum::inv`] for a fallible form.
impl Div<&CycloNum> for &CycloNum {
    type Output = CycloNum;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &CycloNum) -> CycloNum {
        self * &rhs.inv().expect("division by zero CycloNum")
    }
}

impl Neg for &CycloNum {
    type Output = CycloNum;
    fn neg(self) -> CycloNum {
        CycloNum {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for CycloNum {
    type Output = CycloNum;
    fn neg(mut self) -> CycloNum {
        for c in &mut self.coeffs {
            *c = -std::mem::take(c);
        }
        self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<CycloNum> for CycloNum {
            type Output = CycloNum;
            fn $m(self, rhs: CycloNum) -> CycloNum {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&CycloNum> for CycloNum {
            type Output = CycloNum;
            fn $m(self, rhs: &CycloNum) -> CycloNum {
                (&self).$m(rhs)
            }
        }
        impl $tr<CycloNum> for &CycloNum {
            type Output = CycloNum;
            fn $m(self, rhs: CycloNum) -> CycloNum {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl AddAssign<&CycloNum> for CycloNum {
    fn add_assign(&mut self, rhs: &CycloNum) {
        if self.level() == rhs.level() {
            for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
                *a += b;
            }
        } else {
            *self = &*self + rhs;
        }
    }
}

impl SubAssign<&CycloNum> for CycloNum {
    fn sub_assign(&mut self, rhs: &CycloNum) {
        if self.level() == rhs.level() {
            for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
                *a -= b;
            }
        } else {
            *self = &*self - rhs;
        }
    }
}

impl MulAssign<&CycloNum> for CycloNum {
    fn mul_assign(&mut self, rhs: &CycloNum) {
        *self = &*self * rhs;
    }
}

// ---------------------------------------------------------------------------
// q-combinatorics

/// `[c]_e = (e^c - e^{-c}) / (e - e^{-1})`.
pub fn q_int(c: i64, e: &CycloNum) -> Result<CycloNum, CycloError> {
    check_q_parameter(e)?;
    let level = e.level();
    let n = c.unsigned_abs() as i64;
    let mut sum = CycloNum::zero(level);
    // e^{n-1} + e^{n-3} + ... + e^{-(n-1)}
    let mut exp = n - 1;
    while exp >= -(n - 1) && n > 0 {
        sum += &e.pow(exp)?;
        exp -= 2;
    }
    Ok(if c < 0 { -sum } else { sum })
}

fn check_q_parameter(e: &CycloNum) -> Result<(), CycloError> {
    if e.is_zero() {
        return Err(CycloError::DivisionByZero { level: e.level() });
    }
    if (e * e).is_one() {
        return Err(CycloError::DegenerateParameter);
    }
    Ok(())
}

/// `[c]_e! = [c]_e [c-1]_e ... [1]_e`.
pub fn q_factorial(c: u32, e: &CycloNum) -> Result<CycloNum, CycloError> {
    let mut acc = CycloNum::one(e.level());
    for k in 1..=c as i64 {
        acc = &acc * &q_int(k, e)?;
    }
    Ok(acc)
}

/// Symmetric Gaussian binomial `[c choose d]_v` as a Laurent polynomial in a
/// generic `v` (exponent → integer coefficient).
///
/// Built with the recursion
/// `[c, d] = v^{-d} [c-1, d] + v^{c-d} [c-1, d-1]`.
pub fn gaussian_binomial(c: u32, d: u32) -> BTreeMap<i64, BigInt> {
    let mut rows: Vec<Vec<BTreeMap<i64, BigInt>>> = Vec::with_capacity(c as usize + 1);
    let unit = BTreeMap::from([(0i64, BigInt::one())]);
    for n in 0..=c {
        let mut row = Vec::with_capacity(n as usize + 1);
        for k in 0..=n {
            if k == 0 || k == n {
                row.push(unit.clone());
                continue;
            }
            let prev: &Vec<BTreeMap<i64, BigInt>> = &rows[n as usize - 1];
            let mut acc: BTreeMap<i64, BigInt> = BTreeMap::new();
            for (e, coef) in &prev[k as usize] {
                *acc.entry(e - k as i64).or_default() += coef;
            }
            for (e, coef) in &prev[k as usize - 1] {
                *acc.entry(e + (n - k) as i64).or_default() += coef;
            }
            acc.retain(|_, v| !v.is_zero());
            row.push(acc);
        }
        rows.push(row);
    }
    rows[c as usize][d as usize].clone()
}

/// `[c choose d]_e`, evaluated as a polynomial identity and specialized at
/// `e` last, so it is defined even where the factorial quotient is `0/0`.
pub fn q_binomial(c: i64, d: i64, e: &CycloNum) -> Result<CycloNum, CycloError> {
    if d < 0 || d > c {
        return Err(CycloError::InvalidBinomial { c, d });
    }
    if e.is_zero() {
        return Err(CycloError::DivisionByZero { level: e.level() });
    }
    let poly = gaussian_binomial(c as u32, d as u32);
    let mut acc = CycloNum::zero(e.level());
    for (exp, coef) in poly {
        let term = e.pow(exp)?.scale(&BigRational::from_integer(coef));
        acc += &term;
    }
    Ok(acc)
}
