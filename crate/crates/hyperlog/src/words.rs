//! Words in an alphabet of logarithmic 1-forms, the shuffle product, and
//! (anti)symmetrization, with exact rational coefficients.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

pub type Word = Vec<u8>;

/// Finite rational combination of words. Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WordCombination {
    terms: BTreeMap<Word, BigRational>,
}

impl WordCombination {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn word(w: &[u8]) -> Self {
        Self::term(w, BigRational::one())
    }

    pub fn term(w: &[u8], c: BigRational) -> Self {
        let mut out = Self::zero();
        out.add_term(w.to_vec(), c);
        out
    }

    pub fn add_term(&mut self, w: Word, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, w: &[u8]) -> BigRational {
        self.terms.get(w).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &BigRational)> {
        self.terms.iter()
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(w, v)| (w.clone(), v * c)).collect() }
    }

    /// Sum of all coefficients.
    pub fn mass(&self) -> BigRational {
        self.terms.values().fold(BigRational::zero(), |a, b| a + b)
    }

    /// Every term has the same length `n`.
    pub fn is_homogeneous(&self, n: usize) -> bool {
        self.terms.keys().all(|w| w.len() == n)
    }

    /// Applies a letter substitution to every word.
    pub fn relabel(&self, f: impl Fn(u8) -> u8) -> Self {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            out.add_term(w.iter().map(|&a| f(a)).collect(), c.clone());
        }
        out
    }

    /// Shuffle product extended bilinearly.
    pub fn shuffle(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                let ab = a * b;
                for (w, n) in shuffle(u, v).terms {
                    out.add_term(w, &ab * n);
                }
            }
        }
        out
    }

    /// Antisymmetrization extended linearly.
    pub fn asym(&self) -> Self {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            out = out + asym(w).scale(c);
        }
        out
    }
}

impl Add for WordCombination {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for (w, c) in rhs.terms {
            self.add_term(w, c);
        }
        self
    }
}

impl Neg for WordCombination {
    type Output = Self;
    fn neg(self) -> Self {
        Self { terms: self.terms.into_iter().map(|(w, c)| (w, -c)).collect() }
    }
}

impl Sub for WordCombination {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul<&WordCombination> for &WordCombination {
    type Output = WordCombination;
    fn mul(self, rhs: &WordCombination) -> WordCombination {
        self.shuffle(rhs)
    }
}

impl fmt::Display for WordCombination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| {
                let letters: String = w.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(".");
                format!("{c}*[{letters}]")
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Shuffle product of two words, with multiplicities.
pub fn shuffle(u: &[u8], v: &[u8]) -> WordCombination {
    let mut out = WordCombination::zero();
    let n = u.len() + v.len();
    // Choose which positions of the result carry the letters of `u`.
    for positions in (0..n).combinations(u.len()) {
        let mut w = Vec::with_capacity(n);
        let (mut i, mut j, mut p) = (0, 0, 0);
        for slot in 0..n {
            if p < positions.len() && positions[p] == slot {
                w.push(u[i]);
                i += 1;
                p += 1;
            } else {
                w.push(v[j]);
                j += 1;
            }
        }
        out.add_term(w, BigRational::one());
    }
    out
}

/// Sign of a permutation given as images of `0..n`.
pub fn permutation_sign(p: &[usize]) -> i64 {
    let mut inversions = 0usize;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inversions += 1;
            }
        }
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

fn symmetrize(w: &[u8], signed: bool) -> WordCombination {
    let n = w.len();
    let weight = BigRational::new(BigInt::one(), factorial(n));
    let mut out = WordCombination::zero();
    for p in (0..n).permutations(n) {
        let s = if signed { permutation_sign(&p) } else { 1 };
        out.add_term(p.iter().map(|&i| w[i]).collect(), &weight * BigInt::from(s));
    }
    out
}

/// `(1/n!) sum_sigma sign(sigma) w_sigma`.
pub fn asym(w: &[u8]) -> WordCombination {
    symmetrize(w, true)
}

/// `(1/n!) sum_sigma w_sigma`.
pub fn sym(w: &[u8]) -> WordCombination {
    symmetrize(w, false)
}

fn r2(a: u8, b: u8) -> WordCombination {
    asym(&[a, b])
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Outcome of one exact identity check.
#[derive(Clone, Debug, Serialize)]
pub struct IdentityCheck {
    pub weight: usize,
    pub holds: bool,
    /// Number of nonzero terms in `lhs - rhs`.
    pub difference_terms: usize,
    #[serde(skip)]
    pub difference: WordCombination,
}

#[derive(Clone, Debug, Serialize)]
pub struct AsymReport {
    pub checks: Vec<IdentityCheck>,
}

impl AsymReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

fn check(weight: usize, lhs: WordCombination, rhs: WordCombination) -> IdentityCheck {
    let difference = lhs - rhs;
    IdentityCheck { weight, holds: difference.is_zero(), difference_terms: difference.len(), difference }
}

/// Right-hand side of the weight-3 decomposition of `Asym^3(a1 a2 a3)`.
pub fn asym3_rhs(a: [u8; 3]) -> WordCombination {
    let w = WordCombination::word;
    (w(&[a[0]]).shuffle(&r2(a[1], a[2])) - w(&[a[1]]).shuffle(&r2(a[0], a[2]))
        + w(&[a[2]]).shuffle(&r2(a[0], a[1])))
    .scale(&q(1, 3))
}

pub fn asym4_rhs(a: [u8; 4]) -> WordCombination {
    (r2(a[0], a[1]).shuffle(&r2(a[2], a[3])) - r2(a[0], a[2]).shuffle(&r2(a[1], a[3]))
        + r2(a[0], a[3]).shuffle(&r2(a[1], a[2])))
    .scale(&q(1, 6))
}

pub fn asym5_rhs(a: [u8; 5]) -> WordCombination {
    let first = WordCombination::word(&[a[0]]).shuffle(&asym(&a[1..])).scale(&q(1, 5));
    let mut rest = WordCombination::zero();
    // permutations of 0..5 fixing 0
    for tail in (1..5usize).permutations(4) {
        let sigma: Vec<usize> = std::iter::once(0).chain(tail).collect();
        let s = permutation_sign(&sigma);
        let u: Vec<u8> = sigma[..2].iter().map(|&i| a[i]).collect();
        let v: Vec<u8> = sigma[2..].iter().map(|&i| a[i]).collect();
        rest = rest + shuffle(&u, &v).scale(&q(2 * s, 120));
    }
    first + rest
}

/// Checks the three decompositions of `Asym^s` (s = 3, 4, 5) into shuffles of
/// lower-weight antisymmetrizations on the alphabet `0..5`.
pub fn verify_asym_shuffle_identities() -> AsymReport {
    let a = [0u8, 1, 2, 3, 4];
    AsymReport {
        checks: vec![
            check(3, asym(&a[..3]), asym3_rhs([a[0], a[1], a[2]])),
            check(4, asym(&a[..4]), asym4_rhs([a[0], a[1], a[2], a[3]])),
            check(5, asym(&a), asym5_rhs(a)),
        ],
    }
}

/// Element of the tensor square of the word algebra.
pub type WordTensor = BTreeMap<(Word, Word), BigRational>;

fn add_tensor_term(t: &mut WordTensor, key: (Word, Word), c: BigRational) {
    if c.is_zero() {
        return;
    }
    match t.entry(key) {
        Entry::Vacant(e) => {
            e.insert(c);
        }
        Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

/// Deconcatenation coproduct `w -> sum_i w[..i] (x) w[i..]`.
pub fn deconcatenate(c: &WordCombination) -> WordTensor {
    let mut out = WordTensor::new();
    for (w, q) in c.terms() {
        for i in 0..=w.len() {
            add_tensor_term(&mut out, (w[..i].to_vec(), w[i..].to_vec()), q.clone());
        }
    }
    out
}

/// Componentwise shuffle product on the tensor square.
pub fn tensor_shuffle(a: &WordTensor, b: &WordTensor) -> WordTensor {
    let mut out = WordTensor::new();
    for ((a1, a2), p) in a {
        for ((b1, b2), q) in b {
            let left = shuffle(a1, b1);
            let right = shuffle(a2, b2);
            for (l, x) in left.terms() {
                for (r, y) in right.terms() {
                    add_tensor_term(&mut out, (l.clone(), r.clone()), p * q * x * y);
                }
            }
        }
    }
    out
}

/// Exact algebraic laws of the shuffle product on one triple of words.
#[derive(Clone, Debug, Serialize)]
pub struct ShuffleLawCheck {
    pub u: Word,
    pub v: Word,
    pub w: Word,
    pub commutative: bool,
    pub associative: bool,
    pub unital: bool,
    /// Total coefficient of `u sh v` is `binom(|u| + |v|, |u|)`.
    pub mass: bool,
    /// Letter substitution commutes with the product.
    pub relabel: bool,
    /// Deconcatenation is multiplicative.
    pub coproduct: bool,
}

impl ShuffleLawCheck {
    pub fn all_hold(&self) -> bool {
        self.commutative && self.associative && self.unital && self.mass && self.relabel && self.coproduct
    }
}

fn binomial(n: usize, k: usize) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

pub fn check_shuffle_laws(u: &[u8], v: &[u8], w: &[u8], letter_map: &[u8]) -> ShuffleLawCheck {
    let (cu, cv, cw) = (WordCombination::word(u), WordCombination::word(v), WordCombination::word(w));
    let uv = shuffle(u, v);
    let f = |a: u8| letter_map[a as usize];
    let mapped = |x: &[u8]| -> Vec<u8> { x.iter().map(|&a| f(a)).collect() };
    ShuffleLawCheck {
        u: u.to_vec(),
        v: v.to_vec(),
        w: w.to_vec(),
        commutative: uv == shuffle(v, u),
        associative: uv.shuffle(&cw) == cu.shuffle(&shuffle(v, w)),
        unital: shuffle(u, &[]) == cu && shuffle(&[], u) == cu,
        mass: uv.mass() == BigRational::from_integer(binomial(u.len() + v.len(), u.len())),
        relabel: uv.relabel(f) == shuffle(&mapped(u), &mapped(v)),
        coproduct: deconcatenate(&uv) == tensor_shuffle(&deconcatenate(&cu), &deconcatenate(&cv)),
    }
}

/// Shuffle laws on `count` seeded random triples of words of length at most 4
/// over five letters.
pub fn random_shuffle_laws(count: usize, seed: u64) -> Vec<ShuffleLawCheck> {
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut word = |max: usize| -> Word {
                let len = rng.gen_range(0..=max);
                (0..len).map(|_| rng.gen_range(0..5u8)).collect()
            };
            let (u, v, w) = (word(4), word(4), word(2));
            let mut letter_map: Vec<u8> = (0..5).collect();
            letter_map.shuffle(&mut rng);
            check_shuffle_laws(&u, &v, &w, &letter_map)
        })
        .collect()
}
