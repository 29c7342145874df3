//! The Weyl group `W(E_r)` acting on the lines of `X_r` by permutations.
//!
//! Group elements are stored as permutations of line indices. An element is
//! determined by the images of `l_1, ..., l_r` and `h - l_1 - l_2` (these
//! span `Pic` over `Q`), so those `r + 1` images serve as the hash key during
//! enumeration.

use std::collections::HashSet;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::incidence::{Incidence, LineTable};
use crate::picard::{check_rank, DelPezzoLattice, DivisorClass};

/// `|W(E_r)|` for r = 3..=8.
pub const GROUP_ORDERS: [u64; 6] = [12, 120, 1920, 51840, 2903040, 696729600];

pub fn group_order(r: usize) -> u64 {
    GROUP_ORDERS[r - 3]
}

/// Largest rank whose Weyl group is enumerated element by element.
pub const MAX_ENUMERABLE_RANK: usize = 7;

/// A permutation of the line set together with its determinant sign and a
/// word in the fundamental reflections (1-based, `s_1 .. s_r`). The word
/// `[i_1, ..., i_m]` stands for `s_{i_1} o ... o s_{i_m}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylElement {
    pub perm: Vec<u8>,
    pub sign: i8,
    pub word: Vec<u8>,
}

impl WeylElement {
    pub fn identity(n: usize) -> Self {
        Self { perm: (0..n as u16).map(|i| i as u8).collect(), sign: 1, word: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    /// `self o other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        let perm = other.perm.iter().map(|&i| self.perm[i as usize]).collect();
        let mut word = self.word.clone();
        word.extend_from_slice(&other.word);
        Self { perm, sign: self.sign * other.sign, word }
    }

    pub fn inverse(&self) -> Self {
        let mut perm = vec![0u8; self.perm.len()];
        for (i, &j) in self.perm.iter().enumerate() {
            perm[j as usize] = i as u8;
        }
        let word = self.word.iter().rev().copied().collect();
        Self { perm, sign: self.sign, word }
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &j)| i == j as usize)
    }

    pub fn apply(&self, line: usize) -> usize {
        self.perm[line] as usize
    }
}

/// Sorted cycle lengths of a permutation.
pub fn cycle_type(perm: &[u8]) -> Vec<usize> {
    let mut seen = vec![false; perm.len()];
    let mut lengths = Vec::new();
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i] as usize;
            len += 1;
        }
        lengths.push(len);
    }
    lengths.sort_unstable();
    lengths
}

/// The fundamental reflections `s_1, ..., s_r` as line permutations.
pub fn generators(r: usize, lt: &LineTable) -> Result<Vec<WeylElement>> {
    check_rank(r)?;
    if lt.r != r {
        return Err(Error::RankMismatch(r, lt.r));
    }
    let lattice = DelPezzoLattice::new(r)?;
    lattice
        .roots
        .iter()
        .enumerate()
        .map(|(k, rho)| {
            let perm = lt
                .lines
                .iter()
                .map(|l| {
                    let image = lattice.reflect(rho, l)?;
                    let j = lt.index_of(&image).ok_or_else(|| {
                        Error::InternalError(format!("reflection of {l} is not a line"))
                    })?;
                    Ok(j as u8)
                })
                .collect::<Result<Vec<u8>>>()?;
            Ok(WeylElement { perm, sign: -1, word: vec![k as u8 + 1] })
        })
        .collect()
}

fn key_lines(lt: &LineTable) -> Vec<usize> {
    let r = lt.r;
    let find = |c: &[i64]| (0..lt.len()).find(|&i| lt.coeffs(i) == c).expect("basis lines are lines");
    let mut keys: Vec<usize> = (1..=r)
        .map(|i| {
            let mut c = vec![0i64; r + 1];
            c[i] = 1;
            find(&c)
        })
        .collect();
    let mut c = vec![0i64; r + 1];
    c[0] = 1;
    c[1] = -1;
    c[2] = -1;
    keys.push(find(&c));
    keys
}

/// Matrix of the element on `Pic(X_r)` in the basis `(h, l_1, ..., l_r)`,
/// reconstructed from the line permutation. Column `k` is the image of
/// basis vector `k`.
pub fn pic_matrix(perm: &[u8], lt: &LineTable) -> Vec<Vec<i64>> {
    let r = lt.r;
    let keys = key_lines(lt);
    let mut cols: Vec<Vec<i64>> = Vec::with_capacity(r + 1);
    let image = |line: usize| lt.coeffs(perm[line] as usize).to_vec();
    // h = (h - l1 - l2) + l1 + l2
    let mut h = image(keys[r]);
    for (a, b) in h.iter_mut().zip(image(keys[0]).iter().zip(image(keys[1]))) {
        *a += b.0 + b.1;
    }
    cols.push(h);
    for &k in &keys[..r] {
        cols.push(image(k));
    }
    // transpose so that entry [i][k] is row i, column k
    (0..=r).map(|i| (0..=r).map(|k| cols[k][i]).collect()).collect()
}

/// Trace on `Pic(X_r)`, the diagonal of [`pic_matrix`].
pub fn pic_trace(perm: &[u8], lt: &LineTable) -> i64 {
    pic_trace_with_keys(perm, lt, &key_lines(lt))
}

fn pic_trace_with_keys(perm: &[u8], lt: &LineTable, keys: &[usize]) -> i64 {
    let r = lt.r;
    let image = |line: usize| lt.coeffs(perm[line] as usize);
    let h = image(keys[r])[0] + image(keys[0])[0] + image(keys[1])[0];
    h + (1..=r).map(|k| image(keys[k - 1])[k]).sum::<i64>()
}

/// Evaluates [`pic_trace`] on many elements with the basis lines looked up once.
pub struct PicTracer<'a> {
    lt: &'a LineTable,
    keys: Vec<usize>,
}

impl<'a> PicTracer<'a> {
    pub fn new(lt: &'a LineTable) -> Self {
        Self { lt, keys: key_lines(lt) }
    }

    pub fn trace(&self, perm: &[u8]) -> i64 {
        pic_trace_with_keys(perm, self.lt, &self.keys)
    }
}

/// Exact integer determinant (Bareiss).
pub fn determinant(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    let mut a: Vec<Vec<i128>> = m.iter().map(|row| row.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if a[k][k] == 0 {
            match (k + 1..n).find(|&i| a[i][k] != 0) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    (sign * a[n - 1][n - 1]) as i64
}

/// All of `W(E_r)` as a flat table of line permutations, with the BFS tree
/// kept so that every element has a word witness.
pub struct WeylGroup {
    pub r: usize,
    n: usize,
    perms: Vec<u8>,
    signs: Vec<i8>,
    parent: Vec<u32>,
    last_gen: Vec<u8>,
    pub generators: Vec<WeylElement>,
}

impl std::fmt::Debug for WeylGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("WeylGroup").field("r", &self.r).field("order", &self.order()).finish()
    }
}

pub fn enumerate_group(r: usize, lt: &LineTable) -> Result<WeylGroup> {
    check_rank(r)?;
    if r > MAX_ENUMERABLE_RANK {
        return Err(Error::GroupTooLarge(r));
    }
    let gens = generators(r, lt)?;
    let n = lt.len();
    let keys = key_lines(lt);
    let key_of = |img: &dyn Fn(usize) -> u8| -> u64 {
        keys.iter().fold(0u64, |acc, &k| (acc << 8) | img(k) as u64)
    };

    let capacity = group_order(r) as usize;
    let mut perms: Vec<u8> = Vec::with_capacity(capacity * n);
    let mut signs: Vec<i8> = Vec::with_capacity(capacity);
    let mut parent: Vec<u32> = Vec::with_capacity(capacity);
    let mut last_gen: Vec<u8> = Vec::with_capacity(capacity);
    let mut seen: HashSet<u64> = HashSet::with_capacity(capacity);

    let id = WeylElement::identity(n);
    seen.insert(key_of(&|k| id.perm[k]));
    perms.extend_from_slice(&id.perm);
    signs.push(1);
    parent.push(u32::MAX);
    last_gen.push(u8::MAX);

    let mut head = 0usize;
    let mut scratch = vec![0u8; n];
    while head < signs.len() {
        for (gi, g) in gens.iter().enumerate() {
            let base = head * n;
            let key = key_of(&|k| g.perm[perms[base + k] as usize]);
            if !seen.insert(key) {
                continue;
            }
            for i in 0..n {
                scratch[i] = g.perm[perms[base + i] as usize];
            }
            perms.extend_from_slice(&scratch);
            signs.push(-signs[head]);
            parent.push(head as u32);
            last_gen.push(gi as u8);
        }
        head += 1;
    }
    if signs.len() as u64 != group_order(r) {
        return Err(Error::InternalError(format!(
            "enumerated {} elements, expected {}",
            signs.len(),
            group_order(r)
        )));
    }
    Ok(WeylGroup { r, n, perms, signs, parent, last_gen, generators: gens })
}

impl WeylGroup {
    pub fn order(&self) -> usize {
        self.signs.len()
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn perm(&self, i: usize) -> &[u8] {
        &self.perms[i * self.n..(i + 1) * self.n]
    }

    pub fn sign(&self, i: usize) -> i8 {
        self.signs[i]
    }

    pub fn word(&self, mut i: usize) -> Vec<u8> {
        let mut word = Vec::new();
        while self.parent[i] != u32::MAX {
            word.push(self.last_gen[i] + 1);
            i = self.parent[i] as usize;
        }
        word
    }

    pub fn element(&self, i: usize) -> WeylElement {
        WeylElement { perm: self.perm(i).to_vec(), sign: self.sign(i), word: self.word(i) }
    }

    pub fn iter(&self) -> impl Iterator<Item = WeylElement> + '_ {
        (0..self.order()).map(move |i| self.element(i))
    }

    /// `(perm, sign)` pairs, cheap enough for full-group sums.
    pub fn perms(&self) -> impl Iterator<Item = (&[u8], i8)> + '_ {
        self.perms.chunks_exact(self.n).zip(self.signs.iter().copied())
    }

    /// Position of a permutation in the table, by linear search on the key.
    pub fn position(&self, perm: &[u8]) -> Option<usize> {
        (0..self.order()).find(|&i| self.perm(i) == perm)
    }

    /// Evaluates the element spelled by a word in the fundamental reflections.
    pub fn from_word(&self, word: &[u8]) -> WeylElement {
        word_to_element(&self.generators, self.n, word)
    }
}

pub fn word_to_element(gens: &[WeylElement], n: usize, word: &[u8]) -> WeylElement {
    let mut acc = WeylElement::identity(n);
    for &w in word {
        acc = acc.compose(&gens[w as usize - 1]);
    }
    acc
}

/// Number of group elements fixing `target`, which must be a line or a conic
/// class.
pub fn stabilizer_order(group: &WeylGroup, inc: &Incidence, target: &DivisorClass) -> Result<u64> {
    if group.r != inc.r() {
        return Err(Error::RankMismatch(group.r, inc.r()));
    }
    if let Some(idx) = inc.lines.index_of(target) {
        return Ok(group.perms().filter(|(p, _)| p[idx] as usize == idx).count() as u64);
    }
    if let Some(k) = inc.conic_index_of(target) {
        let (i, j) = inc.conics[k].fibers[0];
        let mut count = 0u64;
        for (p, _) in group.perms() {
            if inc.conic_of_pair(p[i] as usize, p[j] as usize) == Some(k) {
                count += 1;
            }
        }
        return Ok(count);
    }
    Err(Error::InternalError(format!("{target} is neither a line nor a conic class")))
}

/// Orbit of a class under the whole group, as a sorted list.
pub fn group_orbit(group: &WeylGroup, lattice: &DelPezzoLattice, target: &DivisorClass, lt: &LineTable) -> Result<Vec<DivisorClass>> {
    let mut out: HashSet<DivisorClass> = HashSet::new();
    for (p, _) in group.perms() {
        let m = pic_matrix(p, lt);
        let t = target.coeffs();
        let image: Vec<BigInt> = (0..=lattice.r)
            .map(|i| (0..=lattice.r).map(|k| BigInt::from(m[i][k]) * &t[k]).sum())
            .collect();
        out.insert(DivisorClass::new(image)?);
    }
    let mut v: Vec<_> = out.into_iter().collect();
    v.sort();
    Ok(v)
}

/// GAP's labelling of the `D_5` diagram, `zeta_i = s_{sigma(i)}`.
pub const D5_GAP_TO_S: [u8; 5] = [4, 5, 3, 2, 1];

/// Conjugacy class representatives of `W(D_5)` as printed by GAP, in GAP's
/// generator numbering.
pub const D5_CLASS_WORDS: [&[u8]; 18] = [
    &[],
    &[1, 2],
    &[1, 2, 3, 1, 2, 3, 4, 3, 1, 2, 3, 4],
    &[1],
    &[1, 2, 3],
    &[1, 2, 4],
    &[1, 2, 3, 1, 2, 3, 4, 3, 1, 2, 3, 4, 5],
    &[1, 4],
    &[1, 3, 1, 2, 3, 4],
    &[1, 2, 3, 5],
    &[1, 3],
    &[1, 2, 3, 4],
    &[1, 2, 4, 5],
    &[1, 3, 5],
    &[1, 3, 1, 2, 3, 4, 5],
    &[1, 4, 3],
    &[1, 2, 3, 4, 5],
    &[1, 4, 3, 5],
];

/// The 18 class representatives of `W(D_5) = W(E_5)`, one per column of the
/// `D_5` character table.
pub fn d5_class_representatives(lt: &LineTable) -> Result<Vec<WeylElement>> {
    if lt.r != 5 {
        return Err(Error::UnsupportedRank(lt.r, "5"));
    }
    let gens = generators(5, lt)?;
    Ok(D5_CLASS_WORDS
        .iter()
        .map(|w| {
            let word: Vec<u8> = w.iter().map(|&z| D5_GAP_TO_S[z as usize - 1]).collect();
            word_to_element(&gens, lt.len(), &word)
        })
        .collect())
}
