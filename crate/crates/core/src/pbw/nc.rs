//! Elements of the free algebra on the generators `E_γ`, `F_γ`, `K_j`,
//! `K_j^{-1}` with cyclotomic coefficients.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::cyclo::CycloNum;

/// A generator letter.
///
/// `E(r)`/`F(r)` refer to the positive root with index `r` in
/// [`RootDatum::positive_roots`](crate::rootdata::RootDatum::positive_roots),
/// so `r < rank` are the Chevalley generators. `K(j)`/`KInv(j)` refer to the
/// `j`-th basis vector of the lattice `M`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Gen {
    E(usize),
    F(usize),
    K(usize),
    KInv(usize),
}

impl fmt::Display for Gen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gen::E(r) => write!(f, "E{}", r + 1),
            Gen::F(r) => write!(f, "F{}", r + 1),
            Gen::K(j) => write!(f, "K{}", j + 1),
            Gen::KInv(j) => write!(f, "K{}^-1", j + 1),
        }
    }
}

/// A finite linear combination of words. Zero coefficients are never
/// stored and adjacent `K_j K_j^{-1}` pairs are cancelled.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct NcElement {
    terms: BTreeMap<Vec<Gen>, CycloNum>,
}

fn cancel_k(word: Vec<Gen>) -> Vec<Gen> {
    let mut out: Vec<Gen> = Vec::with_capacity(word.len());
    for g in word {
        match (out.last(), g) {
            (Some(Gen::K(a)), Gen::KInv(b)) | (Some(Gen::KInv(a)), Gen::K(b)) if *a == b => {
                out.pop();
            }
            _ => out.push(g),
        }
    }
    out
}

impl NcElement {
    pub fn zero() -> NcElement {
        NcElement::default()
    }

    pub fn scalar(c: CycloNum) -> NcElement {
        NcElement::monomial(Vec::new(), c)
    }

    pub fn one(level: u32) -> NcElement {
        NcElement::scalar(CycloNum::one(level))
    }

    pub fn monomial(word: Vec<Gen>, c: CycloNum) -> NcElement {
        let mut out = NcElement::zero();
        out.add_term(word, c);
        out
    }

    pub fn generator(g: Gen, level: u32) -> NcElement {
        NcElement::monomial(vec![g], CycloNum::one(level))
    }

    /// `K^b = K_1^{b_1} ⋯ K_n^{b_n}` as a word.
    pub fn k_power(b: &[i64], level: u32) -> NcElement {
        let mut word = Vec::new();
        for (j, &e) in b.iter().enumerate() {
            let g = if e >= 0 { Gen::K(j) } else { Gen::KInv(j) };
            word.extend(std::iter::repeat_n(g, e.unsigned_abs() as usize));
        }
        NcElement::monomial(word, CycloNum::one(level))
    }

    pub fn add_term(&mut self, word: Vec<Gen>, c: CycloNum) {
        if c.is_zero() {
            return;
        }
        let word = cancel_k(word);
        match self.terms.get_mut(&word) {
            Some(v) => {
                *v += &c;
                if v.is_zero() {
                    self.terms.remove(&word);
                }
            }
            None => {
                self.terms.insert(word, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Gen>, &CycloNum)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &CycloNum) -> NcElement {
        let mut out = NcElement::zero();
        for (w, v) in &self.terms {
            out.add_term(w.clone(), v * c);
        }
        out
    }

    pub fn pow(&self, n: u32, level: u32) -> NcElement {
        let mut out = NcElement::one(level);
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    /// `[a, b] = ab - ba`.
    pub fn commutator(a: &NcElement, b: &NcElement) -> NcElement {
        &(a * b) - &(b * a)
    }

    /// Applies a letter substitution `g ↦ image(g)`.
    pub fn substitute(&self, image: &dyn Fn(Gen) -> NcElement) -> NcElement {
        let mut out = NcElement::zero();
        for (w, c) in &self.terms {
            let mut acc = NcElement::scalar(c.clone());
            for &g in w {
                acc = &acc * &image(g);
            }
            out = &out + &acc;
        }
        out
    }

    /// The largest coefficient level appearing (1 for the zero element).
    pub fn level(&self) -> u32 {
        self.terms.values().map(CycloNum::level).max().unwrap_or(1)
    }
}

impl fmt::Display for NcElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (w, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            for g in w {
                write!(f, " {g}")?;
            }
        }
        Ok(())
    }
}

impl Add<&NcElement> for &NcElement {
    type Output = NcElement;
    fn add(self, rhs: &NcElement) -> NcElement {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }
}

impl Sub<&NcElement> for &NcElement {
    type Output = NcElement;
    fn sub(self, rhs: &NcElement) -> NcElement {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), -c);
        }
        out
    }
}

impl Neg for &NcElement {
    type Output = NcElement;
    fn neg(self) -> NcElement {
        let mut out = NcElement::zero();
        for (w, c) in &self.terms {
            out.add_term(w.clone(), -c);
        }
        out
    }
}

impl Mul<&NcElement> for &NcElement {
    type Output = NcElement;
    fn mul(self, rhs: &NcElement) -> NcElement {
        let mut out = NcElement::zero();
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                let mut w = a.clone();
                w.extend_from_slice(b);
                out.add_term(w, x * y);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_cancellation() {
        let e = NcElement::generator(Gen::E(0), 3);
        let k = NcElement::generator(Gen::K(0), 3);
        let kinv = NcElement::generator(Gen::KInv(0), 3);
        assert_eq!(&k * &kinv, NcElement::one(3));
        assert_eq!(&(&e * &k) * &kinv, e);
        assert!((&e - &e).is_zero());
        let c = NcElement::commutator(&e, &e);
        assert!(c.is_zero());
        assert_eq!(NcElement::k_power(&[2, -1], 3).terms().next().unwrap().0.len(), 3);
        assert_eq!(e.pow(3, 3).len(), 1);
        assert_eq!(format!("{}", &e * &k), "(1) E1 K1");
    }
}
