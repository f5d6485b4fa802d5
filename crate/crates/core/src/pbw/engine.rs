//! Rewriting engine for algebras spanned by `word · K^b`, where words are
//! over root-vector letters and `K^b` is a monomial in a commuting torus that
//! skew-commutes with every letter.
//!
//! Torus monomials are kept at the right end of every term: moving `K^b`
//! past a word `y` costs the scalar `ε^{(μ_b | wt y)}`. Rules rewrite a word
//! to a combination of strictly smaller terms in the order
//! (total height, lexicographic letter codes); completion runs the
//! noncommutative Buchberger procedure on critical pairs in order of
//! increasing height.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};

use num_bigint::BigUint;
use num_traits::One;

use crate::cyclo::CycloNum;

use super::PbwError;

pub type Code = u8;

/// A term shape: `word · K^k`. The derived order compares the total height
/// first, then the word lexicographically, then the torus exponent.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mono {
    pub weight: u32,
    pub word: Vec<Code>,
    pub k: Vec<i64>,
}

pub type Poly = BTreeMap<Mono, CycloNum>;

/// The letter alphabet: for `N` positive roots in convex order
/// `γ_1 < … < γ_N`, `F_{γ_p}` has code `N-1-p` and `E_{γ_p}` has code `N+p`.
/// Sorted words therefore read `F_{γ_N}^{a_N} ⋯ F_{γ_1}^{a_1} E_{γ_1}^{c_1} ⋯ E_{γ_N}^{c_N}`.
#[derive(Clone, Debug)]
pub struct Letters {
    pub n: usize,
    pub heights: Vec<u32>,
    /// `pair[j][code] = (μ_j | wt(letter))`.
    pub pair: Vec<Vec<i64>>,
    pub ell: u64,
    pub level: u32,
}

impl Letters {
    pub fn e(&self, p: usize) -> Code {
        (self.n + p) as Code
    }

    pub fn f(&self, p: usize) -> Code {
        (self.n - 1 - p) as Code
    }

    pub fn is_e(&self, c: Code) -> bool {
        c as usize >= self.n
    }

    /// Convex position of the root underlying a letter.
    pub fn position(&self, c: Code) -> usize {
        let c = c as usize;
        if c < self.n {
            self.n - 1 - c
        } else {
            c - self.n
        }
    }

    pub fn num_letters(&self) -> usize {
        2 * self.n
    }

    pub fn torus_rank(&self) -> usize {
        self.pair.len()
    }

    pub fn word_weight(&self, w: &[Code]) -> u32 {
        w.iter().map(|&c| self.heights[self.position(c)]).sum()
    }

    /// Exponent `e` such that `K^k · y = ε^e · y · K^k`.
    pub fn commute_exponent(&self, k: &[i64], y: &[Code]) -> i64 {
        let mut e = 0;
        for (j, &kj) in k.iter().enumerate() {
            if kj == 0 {
                continue;
            }
            let row = &self.pair[j];
            let s: i64 = y.iter().map(|&c| row[c as usize]).sum();
            e += kj * s;
        }
        e
    }

    /// `ε^e` as a power of `ζ_L`.
    pub fn eps_root(&self, e: i64) -> i64 {
        e * (self.level as i64 / self.ell as i64)
    }

    pub fn eps(&self, e: i64) -> CycloNum {
        CycloNum::root_of_unity(self.level, self.eps_root(e))
    }

    pub fn mono(&self, word: Vec<Code>, k: Vec<i64>) -> Mono {
        Mono {
            weight: self.word_weight(&word),
            word,
            k,
        }
    }
}

/// Specialization of the torus: `K_j^ℓ ↦ values[j]`.
#[derive(Clone, Debug)]
pub struct Fold {
    pub ell: i64,
    pub values: Vec<CycloNum>,
}

impl Fold {
    fn apply(&self, k: &mut [i64], coeff: &mut CycloNum) {
        for (j, kj) in k.iter_mut().enumerate() {
            let q = kj.div_euclid(self.ell);
            if q != 0 {
                *coeff = &*coeff * &self.values[j].pow(q).expect("torus values are units");
                *kj = kj.rem_euclid(self.ell);
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct Rule {
    pub lhs: Vec<Code>,
    pub rhs: Poly,
}

#[derive(Clone, Copy, Debug)]
pub struct CompletionLimits {
    pub max_rules: usize,
    pub max_pairs: usize,
}

impl Default for CompletionLimits {
    fn default() -> CompletionLimits {
        CompletionLimits {
            max_rules: 20_000,
            max_pairs: 2_000_000,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CompletionStats {
    pub rules: usize,
    pub pairs_checked: usize,
    pub rules_added: usize,
}

/// An overlap ambiguity `lhs_a · tail = head · lhs_b`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct CriticalPair {
    weight: u32,
    word: Vec<Code>,
    a: usize,
    b: usize,
    overlap: usize,
}

#[derive(Clone, Debug)]
pub struct RewriteSystem {
    letters: Letters,
    rules: Vec<Option<Rule>>,
    index: HashMap<Vec<Code>, usize>,
    lengths: BTreeMap<usize, usize>,
    fold: Option<Fold>,
}

impl RewriteSystem {
    pub fn new(letters: Letters) -> RewriteSystem {
        RewriteSystem {
            letters,
            rules: Vec::new(),
            index: HashMap::new(),
            lengths: BTreeMap::new(),
            fold: None,
        }
    }

    pub fn letters(&self) -> &Letters {
        &self.letters
    }

    pub fn fold(&self) -> Option<&Fold> {
        self.fold.as_ref()
    }

    pub fn set_fold(&mut self, fold: Fold) {
        self.fold = Some(fold);
    }

    pub fn rules(&self) -> impl Iterator<Item = &Rule> {
        self.rules.iter().flatten()
    }

    pub fn num_rules(&self) -> usize {
        self.index.len()
    }

    pub fn zero_k(&self) -> Vec<i64> {
        vec![0; self.letters.torus_rank()]
    }

    /// Adds `coeff · word · K^k` to `p`, applying the torus specialization.
    pub fn push(&self, p: &mut Poly, word: Vec<Code>, mut k: Vec<i64>, mut coeff: CycloNum) {
        if coeff.is_zero() {
            return;
        }
        if let Some(f) = &self.fold {
            f.apply(&mut k, &mut coeff);
        }
        let m = self.letters.mono(word, k);
        match p.get_mut(&m) {
            Some(v) => {
                *v += &coeff;
                if v.is_zero() {
                    p.remove(&m);
                }
            }
            None => {
                p.insert(m, coeff);
            }
        }
    }

    pub fn add_poly(&self, p: &mut Poly, q: &Poly, scale: &CycloNum) {
        for (m, c) in q {
            self.push(p, m.word.clone(), m.k.clone(), c * scale);
        }
    }

    /// First rule occurrence in `word`, as (position, rule id).
    pub fn find_rule(&self, word: &[Code]) -> Option<(usize, usize)> {
        for start in 0..word.len() {
            for &len in self.lengths.keys() {
                if start + len > word.len() {
                    break;
                }
                if let Some(&id) = self.index.get(&word[start..start + len]) {
                    return Some((start, id));
                }
            }
        }
        None
    }

    fn rewrite_into(
        &self,
        target: &mut Poly,
        word: &[Code],
        k: &[i64],
        coeff: &CycloNum,
        pos: usize,
        rule: &Rule,
    ) {
        let x = &word[..pos];
        let y = &word[pos + rule.lhs.len()..];
        for (m, c) in &rule.rhs {
            let mut w = Vec::with_capacity(x.len() + m.word.len() + y.len());
            w.extend_from_slice(x);
            w.extend_from_slice(&m.word);
            w.extend_from_slice(y);
            let e = self.letters.commute_exponent(&m.k, y);
            let scalar = (c * coeff).mul_root(self.letters.eps_root(e));
            let nk: Vec<i64> = m.k.iter().zip(k).map(|(a, b)| a + b).collect();
            self.push(target, w, nk, scalar);
        }
    }

    /// Normal form with respect to the current rules.
    pub fn reduce(&self, p: Poly) -> Poly {
        let mut work = p;
        let mut done = Poly::new();
        while let Some((m, c)) = work.pop_last() {
            match self.find_rule(&m.word) {
                None => {
                    done.insert(m, c);
                }
                Some((pos, id)) => {
                    let rule = self.rules[id].as_ref().expect("indexed rule is live");
                    self.rewrite_into(&mut work, &m.word, &m.k, &c, pos, rule);
                }
            }
        }
        done
    }

    /// Unreduced product in the free algebra with skew-commuting torus.
    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        let mut out = Poly::new();
        for (ma, ca) in a {
            for (mb, cb) in b {
                let mut w = ma.word.clone();
                w.extend_from_slice(&mb.word);
                let e = self.letters.commute_exponent(&ma.k, &mb.word);
                let coeff = (ca * cb).mul_root(self.letters.eps_root(e));
                let k: Vec<i64> = ma.k.iter().zip(&mb.k).map(|(x, y)| x + y).collect();
                self.push(&mut out, w, k, coeff);
            }
        }
        out
    }

    pub fn mul_reduced(&self, a: &Poly, b: &Poly) -> Poly {
        self.reduce(self.mul(a, b))
    }

    fn remove_rule(&mut self, id: usize) -> Rule {
        let rule = self.rules[id].take().expect("rule is live");
        self.index.remove(&rule.lhs);
        let len = rule.lhs.len();
        let count = self.lengths.get_mut(&len).expect("length tracked");
        *count -= 1;
        if *count == 0 {
            self.lengths.remove(&len);
        }
        rule
    }

    fn insert_rule(&mut self, rule: Rule) -> usize {
        let id = self.rules.len();
        *self.lengths.entry(rule.lhs.len()).or_default() += 1;
        self.index.insert(rule.lhs.clone(), id);
        self.rules.push(Some(rule));
        id
    }

    /// `lhs - rhs` as an element.
    fn rule_relation(&self, rule: &Rule) -> Poly {
        let mut p = Poly::new();
        self.push(&mut p, rule.lhs.clone(), self.zero_k(), CycloNum::one(self.letters.level));
        self.add_poly(&mut p, &rule.rhs, &-CycloNum::one(self.letters.level));
        p
    }

    /// Orients a reduced nonzero relation into a rule with a unit leading
    /// coefficient.
    fn orient(&self, r: Poly) -> Result<Rule, PbwError> {
        let (lead, c) = r.last_key_value().expect("nonzero relation");
        if lead.word.is_empty() {
            return Err(PbwError::Inconsistent);
        }
        if let Some((second, _)) = r.iter().rev().nth(1) {
            if second.word == lead.word {
                return Err(PbwError::NonUnitLeading {
                    word: lead.word.clone(),
                });
            }
        }
        let inv = c.inv().expect("nonzero coefficient");
        let minus_inv = -inv;
        let shift = lead.k.clone();
        let mut rhs = Poly::new();
        for (m, d) in r.iter().rev().skip(1) {
            let k: Vec<i64> = m.k.iter().zip(&shift).map(|(a, b)| a - b).collect();
            self.push(&mut rhs, m.word.clone(), k, d * &minus_inv);
        }
        Ok(Rule {
            lhs: lead.word.clone(),
            rhs,
        })
    }

    fn overlaps(&self, a: usize, b: usize) -> Vec<CriticalPair> {
        let la = &self.rules[a].as_ref().expect("live").lhs;
        let lb = &self.rules[b].as_ref().expect("live").lhs;
        let mut out = Vec::new();
        for k in 1..la.len().min(lb.len()) {
            if la[la.len() - k..] == lb[..k] {
                let mut word = la.clone();
                word.extend_from_slice(&lb[k..]);
                out.push(CriticalPair {
                    weight: self.letters.word_weight(&word),
                    word,
                    a,
                    b,
                    overlap: k,
                });
            }
        }
        out
    }

    fn s_poly(&self, cp: &CriticalPair) -> Poly {
        let ra = self.rules[cp.a].as_ref().expect("live");
        let rb = self.rules[cp.b].as_ref().expect("live");
        let one = CycloNum::one(self.letters.level);
        let zk = self.zero_k();
        let mut p = Poly::new();
        self.rewrite_into(&mut p, &cp.word, &zk, &one, 0, ra);
        let pos = ra.lhs.len() - cp.overlap;
        self.rewrite_into(&mut p, &cp.word, &zk, &-one, pos, rb);
        p
    }

    /// Knuth–Bendix/Buchberger completion starting from the current rules
    /// plus `relations` (processed in the given order before any critical
    /// pair).
    pub fn complete(
        &mut self,
        relations: Vec<Poly>,
        limits: CompletionLimits,
    ) -> Result<CompletionStats, PbwError> {
        let mut stats = CompletionStats::default();
        let mut pending: VecDeque<Poly> = relations.into();
        let mut pairs: BTreeSet<CriticalPair> = BTreeSet::new();
        let live: Vec<usize> = (0..self.rules.len()).filter(|&i| self.rules[i].is_some()).collect();
        for &a in &live {
            for &b in &live {
                pairs.extend(self.overlaps(a, b));
            }
        }
        loop {
            let relation = match pending.pop_front() {
                Some(r) => r,
                None => {
                    let Some(cp) = pairs.pop_first() else {
                        break;
                    };
                    if self.rules[cp.a].is_none() || self.rules[cp.b].is_none() {
                        continue;
                    }
                    stats.pairs_checked += 1;
                    if stats.pairs_checked > limits.max_pairs {
                        return Err(PbwError::CompletionLimit {
                            detail: format!("more than {} critical pairs", limits.max_pairs),
                        });
                    }
                    self.s_poly(&cp)
                }
            };
            let reduced = self.reduce(relation);
            if reduced.is_empty() {
                continue;
            }
            let rule = self.orient(reduced)?;
            // rules whose left side contains the new one become relations again
            let stale: Vec<usize> = self
                .index
                .iter()
                .filter(|(l, _)| contains_subword(l, &rule.lhs))
                .map(|(_, &id)| id)
                .collect();
            for id in stale {
                let old = self.remove_rule(id);
                pending.push_back(self.rule_relation(&old));
            }
            let id = self.insert_rule(rule);
            stats.rules_added += 1;
            if self.num_rules() > limits.max_rules {
                return Err(PbwError::CompletionLimit {
                    detail: format!("more than {} rules", limits.max_rules),
                });
            }
            let live: Vec<usize> = self.index.values().copied().collect();
            for other in live {
                pairs.extend(self.overlaps(id, other));
                if other != id {
                    pairs.extend(self.overlaps(other, id));
                }
            }
        }
        self.interreduce();
        stats.rules = self.num_rules();
        Ok(stats)
    }

    /// Brings every right-hand side to normal form.
    pub fn interreduce(&mut self) {
        let ids: Vec<usize> = self.index.values().copied().collect();
        for id in ids {
            let rhs = self.rules[id].as_ref().expect("live").rhs.clone();
            let reduced = self.reduce(rhs);
            self.rules[id].as_mut().expect("live").rhs = reduced;
        }
    }

    /// Verifies that every overlap ambiguity resolves; returns the number of
    /// critical pairs checked.
    pub fn check_confluence(&self) -> Result<usize, PbwError> {
        let mut ids: Vec<usize> = self.index.values().copied().collect();
        ids.sort_unstable();
        let mut checked = 0;
        for &a in &ids {
            let la = &self.rules[a].as_ref().expect("live").lhs;
            for &b in &ids {
                let lb = &self.rules[b].as_ref().expect("live").lhs;
                if a != b && contains_subword(la, lb) {
                    return Err(PbwError::NonConfluent {
                        pair: format!("rule {la:?} contains rule {lb:?}"),
                    });
                }
                for cp in self.overlaps(a, b) {
                    checked += 1;
                    let s = self.reduce(self.s_poly(&cp));
                    if !s.is_empty() {
                        return Err(PbwError::NonConfluent {
                            pair: format!("overlap {:?} of rules {la:?} and {lb:?}", cp.word),
                        });
                    }
                }
            }
        }
        Ok(checked)
    }

    /// Inserts rules verbatim (used when loading a saved system).
    pub fn load_rules(&mut self, rules: Vec<Rule>) -> Result<(), PbwError> {
        for rule in rules {
            if self.index.contains_key(&rule.lhs) {
                return Err(PbwError::Artifact(format!("duplicate rule {:?}", rule.lhs)));
            }
            let lw = self.letters.word_weight(&rule.lhs);
            for m in rule.rhs.keys() {
                let smaller = (m.weight, &m.word) < (lw, &rule.lhs);
                if !smaller {
                    return Err(PbwError::Artifact(format!(
                        "rule {:?} is not decreasing",
                        rule.lhs
                    )));
                }
            }
            self.insert_rule(rule);
        }
        Ok(())
    }

    /// Longest left-hand side.
    fn max_lhs(&self) -> usize {
        self.lengths.keys().next_back().copied().unwrap_or(1)
    }

    fn extends_irreducibly(&self, word: &[Code]) -> bool {
        let n = word.len();
        self.lengths
            .keys()
            .all(|&len| len > n || !self.index.contains_key(&word[n - len..]))
    }

    /// Number of irreducible words, or an error if there are infinitely many.
    pub fn count_irreducible_words(&self) -> Result<BigUint, PbwError> {
        let keep = self.max_lhs().saturating_sub(1);
        let mut memo: HashMap<Vec<Code>, BigUint> = HashMap::new();
        let mut on_stack: BTreeSet<Vec<Code>> = BTreeSet::new();
        self.count_from(&[], keep, &mut memo, &mut on_stack)
    }

    fn count_from(
        &self,
        suffix: &[Code],
        keep: usize,
        memo: &mut HashMap<Vec<Code>, BigUint>,
        on_stack: &mut BTreeSet<Vec<Code>>,
    ) -> Result<BigUint, PbwError> {
        if let Some(v) = memo.get(suffix) {
            return Ok(v.clone());
        }
        if !on_stack.insert(suffix.to_vec()) {
            return Err(PbwError::InfiniteBasis);
        }
        let mut total = BigUint::one();
        for c in 0..self.letters.num_letters() as Code {
            let mut w = suffix.to_vec();
            w.push(c);
            if !self.extends_irreducibly(&w) {
                continue;
            }
            let start = w.len().saturating_sub(keep);
            let next = w[start..].to_vec();
            total += self.count_from(&next, keep, memo, on_stack)?;
        }
        on_stack.remove(suffix);
        memo.insert(suffix.to_vec(), total.clone());
        Ok(total)
    }

    /// All irreducible words, in lexicographic order; fails when more than
    /// `cap` exist.
    pub fn irreducible_words(&self, cap: usize) -> Result<Vec<Vec<Code>>, PbwError> {
        let count = self.count_irreducible_words()?;
        if count > BigUint::from(cap) {
            return Err(PbwError::TooLarge {
                count: count.to_string(),
            });
        }
        let mut out = Vec::new();
        let mut stack: Vec<Vec<Code>> = vec![Vec::new()];
        while let Some(w) = stack.pop() {
            for c in (0..self.letters.num_letters() as Code).rev() {
                let mut next = w.clone();
                next.push(c);
                if self.extends_irreducibly(&next) {
                    stack.push(next);
                }
            }
            out.push(w);
        }
        out.sort();
        Ok(out)
    }
}

fn contains_subword(hay: &[Code], needle: &[Code]) -> bool {
    needle.len() <= hay.len() && hay.windows(needle.len()).any(|w| w == needle)
}
