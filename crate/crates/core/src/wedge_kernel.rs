//! Fiber-difference vectors, their `(r-2)`-fold wedge products, and the
//! one-dimensional kernel `sum_k eps_k w_k = 0` with `eps_k = +-1`.
//!
//! For a conic class with reducible fibers `F_1, ..., F_{r-1}` (each the
//! indicator vector of a line pair in `Z^lines`) and a chosen base fiber `b`,
//! the rows `C_s = F_s - F_b` (`s != b`) span the degree-zero part of the
//! fiber module. Their wedge `w_k` is stored sparsely as the vector of
//! `(r-2) x (r-2)` minors indexed by sorted column tuples.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::incidence::{ConicFibration, Incidence, LineTable};

/// Rows `C_s = F_s - F_base` over the line coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiberDifferenceMatrix {
    pub conic: usize,
    pub rows: Vec<Vec<i8>>,
    /// Sorted columns where some row is nonzero.
    pub support: Vec<usize>,
}

impl FiberDifferenceMatrix {
    pub fn ncols(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    /// Same matrix with the exceptional-line columns removed, i.e. the image
    /// in `Z^lines / span(l_1, ..., l_r)`.
    pub fn quotient_by_exceptional(&self, lt: &LineTable) -> Self {
        let rows: Vec<Vec<i8>> = self.rows.iter().map(|v| quotient_by_exceptional(v, lt)).collect();
        Self { conic: self.conic, support: support_of(&rows), rows }
    }
}

fn support_of(rows: &[Vec<i8>]) -> Vec<usize> {
    let n = rows.first().map_or(0, Vec::len);
    (0..n).filter(|&c| rows.iter().any(|row| row[c] != 0)).collect()
}

/// Drops the coordinates at exceptional lines.
pub fn quotient_by_exceptional(v: &[i8], lt: &LineTable) -> Vec<i8> {
    v.iter().enumerate().filter(|(i, _)| !lt.is_exceptional(*i)).map(|(_, &x)| x).collect()
}

/// Difference matrix for fibers taken in the given order with `base` as the
/// subtracted fiber.
pub fn fiber_differences(
    conic: usize,
    fibers: &[(usize, usize)],
    base: usize,
    n_lines: usize,
) -> Result<FiberDifferenceMatrix> {
    if base >= fibers.len() {
        return Err(Error::IndexError { index: base, len: fibers.len() });
    }
    for &(i, j) in fibers {
        for x in [i, j] {
            if x >= n_lines {
                return Err(Error::IndexError { index: x, len: n_lines });
            }
        }
    }
    let (bi, bj) = fibers[base];
    let rows: Vec<Vec<i8>> = fibers
        .iter()
        .enumerate()
        .filter(|(s, _)| *s != base)
        .map(|(_, &(i, j))| {
            let mut row = vec![0i8; n_lines];
            row[i] += 1;
            row[j] += 1;
            row[bi] -= 1;
            row[bj] -= 1;
            row
        })
        .collect();
    Ok(FiberDifferenceMatrix { conic, support: support_of(&rows), rows })
}

/// Convenience wrapper for a fibration in its stored fiber order.
pub fn fibration_differences(
    conic: usize,
    f: &ConicFibration,
    base: usize,
    n_lines: usize,
) -> Result<FiberDifferenceMatrix> {
    fiber_differences(conic, &f.fibers, base, n_lines)
}

/// Sorted index tuple packed big-endian into a `u64`, one byte per index, so
/// that integer order is lexicographic order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TupleKey(pub u64);

impl TupleKey {
    pub fn pack(indices: &[usize]) -> Self {
        debug_assert!(indices.len() <= 8 && indices.iter().all(|&i| i < 256));
        Self(indices.iter().fold(0u64, |acc, &i| (acc << 8) | i as u64))
    }

    pub fn unpack(self, arity: usize) -> Vec<usize> {
        (0..arity).rev().map(|j| ((self.0 >> (8 * j)) & 0xff) as usize).collect()
    }
}

/// Sparse element of `wedge^{arity} Z^ncols`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WedgeVector {
    pub arity: usize,
    pub entries: BTreeMap<TupleKey, BigInt>,
}

impl WedgeVector {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, tuple: &[usize]) -> BigInt {
        self.entries.get(&TupleKey::pack(tuple)).cloned().unwrap_or_default()
    }

    pub fn neg(&self) -> Self {
        Self { arity: self.arity, entries: self.entries.iter().map(|(k, v)| (*k, -v)).collect() }
    }

    pub fn tuples(&self) -> impl Iterator<Item = (Vec<usize>, &BigInt)> + '_ {
        self.entries.iter().map(|(k, v)| (k.unpack(self.arity), v))
    }
}

fn small_determinant(m: &mut [Vec<i64>]) -> i64 {
    // Bareiss on a tiny matrix; entries stay bounded by the minors.
    let n = m.len();
    let mut sign = 1;
    let mut prev = 1i64;
    for k in 0..n {
        if m[k][k] == 0 {
            match (k + 1..n).find(|&i| m[i][k] != 0) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return 0,
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

fn for_each_combination(n: usize, k: usize, mut f: impl FnMut(&[usize])) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let Some(pos) = (0..k).rev().find(|&i| idx[i] != i + n - k) else { return };
        idx[pos] += 1;
        for i in pos + 1..k {
            idx[i] = idx[i - 1] + 1;
        }
    }
}

/// All nonzero maximal minors of the matrix, restricted to its support.
pub fn wedge_vector(m: &FiberDifferenceMatrix) -> WedgeVector {
    let arity = m.rows.len();
    let mut entries = BTreeMap::new();
    if arity == 0 {
        entries.insert(TupleKey::pack(&[]), BigInt::one());
        return WedgeVector { arity, entries };
    }
    let mut cols = vec![0usize; arity];
    for_each_combination(m.support.len(), arity, |pick| {
        for (c, &p) in cols.iter_mut().zip(pick) {
            *c = m.support[p];
        }
        let mut sub: Vec<Vec<i64>> =
            m.rows.iter().map(|row| cols.iter().map(|&c| row[c] as i64).collect()).collect();
        let d = small_determinant(&mut sub);
        if d != 0 {
            entries.insert(TupleKey::pack(&cols), BigInt::from(d));
        }
    });
    WedgeVector { arity, entries }
}

/// Upper bound `C(2(r-1), r-2)` on the number of nonzero entries of `w_k`.
pub fn sparsity_bound(r: usize) -> usize {
    let (n, k) = (2 * (r - 1), r - 2);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Fiber order and base choice for one conic.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiberOrdering {
    pub fibers: Vec<[usize; 2]>,
    pub base: usize,
}

impl FiberOrdering {
    fn pairs(&self) -> Vec<(usize, usize)> {
        self.fibers.iter().map(|f| (f[0], f[1])).collect()
    }
}

/// How fibers are ordered before wedging.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrderingChoice {
    /// Stored fiber order, last fiber as base.
    Canonical,
    /// Fiber order and base drawn from a seeded generator.
    Randomized(u64),
}

#[derive(Clone, Copy, Debug)]
pub struct KernelOptions {
    pub ordering: OrderingChoice,
    pub quotient: bool,
    /// Upper bound on the number of stored nonzero entries during elimination.
    pub entry_budget: Option<usize>,
}

impl Default for KernelOptions {
    fn default() -> Self {
        Self { ordering: OrderingChoice::Canonical, quotient: false, entry_budget: None }
    }
}

pub fn orderings(inc: &Incidence, choice: OrderingChoice) -> Vec<FiberOrdering> {
    match choice {
        OrderingChoice::Canonical => inc
            .conics
            .iter()
            .map(|c| FiberOrdering {
                fibers: c.fibers.iter().map(|&(i, j)| [i, j]).collect(),
                base: c.fibers.len() - 1,
            })
            .collect(),
        OrderingChoice::Randomized(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            inc.conics
                .iter()
                .map(|c| {
                    let mut fibers: Vec<[usize; 2]> = c.fibers.iter().map(|&(i, j)| [i, j]).collect();
                    fibers.shuffle(&mut rng);
                    let base = rng.gen_range(0..fibers.len());
                    FiberOrdering { fibers, base }
                })
                .collect()
        }
    }
}

fn wedge_vectors(inc: &Incidence, ords: &[FiberOrdering], quotient: bool) -> Result<Vec<WedgeVector>> {
    let n = inc.lines.len();
    ords.par_iter()
        .enumerate()
        .map(|(k, o)| {
            let mut m = fiber_differences(k, &o.pairs(), o.base, n)?;
            if quotient {
                m = m.quotient_by_exceptional(&inc.lines);
            }
            Ok(wedge_vector(&m))
        })
        .collect()
}

type SparseRow = Vec<(u32, BigInt)>;

/// `a * x - b * y` on sorted sparse rows, zeros dropped.
fn combine(a: &BigInt, x: &SparseRow, b: &BigInt, y: &SparseRow) -> SparseRow {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take_x = j >= y.len() || (i < x.len() && x[i].0 < y[j].0);
        let take_y = i >= x.len() || (j < y.len() && y[j].0 < x[i].0);
        if take_x {
            out.push((x[i].0, a * &x[i].1));
            i += 1;
        } else if take_y {
            out.push((y[j].0, -(b * &y[j].1)));
            j += 1;
        } else {
            let v = a * &x[i].1 - b * &y[j].1;
            if !v.is_zero() {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn remove_content(row: &mut SparseRow) {
    let mut g = BigInt::zero();
    for (_, v) in row.iter() {
        g = g.gcd(v);
        if g.is_one() {
            return;
        }
    }
    if g > BigInt::one() {
        for (_, v) in row.iter_mut() {
            *v /= &g;
        }
    }
}

/// Integer basis of `{x : sum_k x_k v_k = 0}` by fraction-free elimination
/// on the vectors augmented with the identity. Rows are reduced against
/// pivots keyed by leading column, and the shorter of two competing rows is
/// kept as the pivot.
pub fn integer_left_kernel(vectors: &[WedgeVector], entry_budget: Option<usize>) -> Result<Vec<Vec<BigInt>>> {
    let mut keys: Vec<TupleKey> = vectors.iter().flat_map(|v| v.entries.keys().copied()).collect();
    keys.sort_unstable();
    keys.dedup();
    let col_of: HashMap<TupleKey, u32> = keys.iter().enumerate().map(|(i, k)| (*k, i as u32)).collect();
    let ncols = keys.len() as u32;
    let nrows = vectors.len();

    let mut rows: Vec<SparseRow> = vectors
        .iter()
        .enumerate()
        .map(|(k, v)| {
            let mut row: SparseRow = v.entries.iter().map(|(key, x)| (col_of[key], x.clone())).collect();
            row.sort_unstable_by_key(|e| e.0);
            row.push((ncols + k as u32, BigInt::one()));
            row
        })
        .collect();
    rows.sort_by_key(|r| r.len());

    let mut pivots: HashMap<u32, SparseRow> = HashMap::new();
    let mut stored: usize = 0;
    let mut kernel = Vec::new();
    for mut row in rows {
        loop {
            let lead = row[0].0;
            if lead >= ncols {
                let mut v = vec![BigInt::zero(); nrows];
                for (c, x) in row {
                    v[(c - ncols) as usize] = x;
                }
                kernel.push(v);
                break;
            }
            let Some(pivot) = pivots.get_mut(&lead) else {
                stored += row.len();
                pivots.insert(lead, row);
                break;
            };
            if row.len() < pivot.len() {
                stored = stored + row.len() - pivot.len();
                std::mem::swap(&mut row, pivot);
            }
            let g = row[0].1.gcd(&pivot[0].1);
            let a = &pivot[0].1 / &g;
            let b = &row[0].1 / &g;
            row = combine(&a, &row, &b, pivot);
            remove_content(&mut row);
            if let Some(limit) = entry_budget {
                if stored + row.len() > limit {
                    return Err(Error::BudgetExceeded(format!(
                        "{} stored entries exceed the budget of {limit}",
                        stored + row.len()
                    )));
                }
            }
        }
    }
    Ok(kernel)
}

/// `sum_k eps_k w_k`, zero entries dropped.
pub fn signed_sum(vectors: &[WedgeVector], eps: &[i8]) -> BTreeMap<TupleKey, BigInt> {
    let mut acc: BTreeMap<TupleKey, BigInt> = BTreeMap::new();
    for (v, &e) in vectors.iter().zip(eps) {
        for (k, x) in &v.entries {
            *acc.entry(*k).or_default() += x * BigInt::from(e);
        }
    }
    acc.retain(|_, x| !x.is_zero());
    acc
}

/// Data needed to re-verify the relation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateBody {
    pub r: usize,
    pub lines: Vec<Vec<i64>>,
    pub conics: Vec<Vec<i64>>,
    pub quotient_by_exceptional: bool,
    pub orderings: Vec<FiberOrdering>,
    pub signs: Vec<i8>,
    pub kernel_dimension: usize,
    pub wedge_entries: usize,
}

impl CertificateBody {
    pub fn content_hash(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("certificate serializes");
        hex::encode(Sha256::digest(&bytes))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HlogCertificate {
    #[serde(flatten)]
    pub body: CertificateBody,
    pub content_hash: String,
}

impl HlogCertificate {
    pub fn r(&self) -> usize {
        self.body.r
    }

    pub fn signs(&self) -> &[i8] {
        &self.body.signs
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Certificate(e.to_string()))
    }
}

/// Computes the relation for rank `r` with canonical orderings.
pub fn kernel_signs(r: usize) -> Result<HlogCertificate> {
    let inc = Incidence::new(r)?;
    kernel_signs_with(&inc, &KernelOptions::default())
}

pub fn kernel_signs_with(inc: &Incidence, opts: &KernelOptions) -> Result<HlogCertificate> {
    let r = inc.r();
    if r < 4 {
        return Err(Error::UnsupportedRank(r, "4..=8"));
    }
    let ords = orderings(inc, opts.ordering);
    let vectors = wedge_vectors(inc, &ords, opts.quotient)?;
    let kernel = integer_left_kernel(&vectors, opts.entry_budget)?;
    if kernel.len() != 1 {
        return Err(Error::KernelDimensionViolation(kernel.len()));
    }
    let signs = normalize_signs(&kernel[0])?;
    let residual = signed_sum(&vectors, &signs);
    if !residual.is_empty() {
        return Err(Error::InternalError(format!("{} nonzero entries in the signed sum", residual.len())));
    }
    let body = CertificateBody {
        r,
        lines: (0..inc.lines.len()).map(|i| inc.lines.coeffs(i).to_vec()).collect(),
        conics: inc.conics.iter().map(|c| c.cls.to_i64()).collect(),
        quotient_by_exceptional: opts.quotient,
        orderings: ords,
        signs,
        kernel_dimension: kernel.len(),
        wedge_entries: vectors.iter().map(WedgeVector::len).sum(),
    };
    let content_hash = body.content_hash();
    Ok(HlogCertificate { body, content_hash })
}

/// Scales a primitive integer kernel vector so its first entry is `+1` and
/// checks that every entry is `+-1`.
pub fn normalize_signs(v: &[BigInt]) -> Result<Vec<i8>> {
    let flip = match v.first() {
        Some(x) if x.is_negative() => -1,
        _ => 1,
    };
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    v.iter()
        .enumerate()
        .map(|(index, x)| {
            let y = if g.is_zero() { x.clone() } else { x / &g * flip };
            match y.to_i8() {
                Some(s @ (1 | -1)) => Ok(s),
                _ => Err(Error::SignViolation { index, value: y.to_string() }),
            }
        })
        .collect()
}

/// Outcome of re-verifying a certificate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReplayReport {
    pub r: usize,
    pub conics: usize,
    pub hash_matches: bool,
    pub signed_sum_vanishes: bool,
}

/// Recomputes the wedge vectors from the stored orderings and checks that the
/// stored signs annihilate them exactly.
pub fn replay(cert: &HlogCertificate) -> Result<ReplayReport> {
    let body = &cert.body;
    let inc = Incidence::new(body.r)?;
    let bad = |msg: String| Err(Error::Certificate(msg));
    if body.conics.len() != inc.conics.len()
        || body.orderings.len() != inc.conics.len()
        || body.signs.len() != inc.conics.len()
    {
        return bad("conic count does not match the enumeration".into());
    }
    if body.lines.len() != inc.lines.len()
        || body.lines.iter().enumerate().any(|(i, l)| l.as_slice() != inc.lines.coeffs(i))
    {
        return bad("line table does not match the enumeration".into());
    }
    for (k, (c, o)) in body.conics.iter().zip(&body.orderings).enumerate() {
        let known = &inc.conics[k];
        if *c != known.cls.to_i64() {
            return bad(format!("conic {k} does not match the canonical ordering"));
        }
        let mut stored: Vec<(usize, usize)> = o.fibers.iter().map(|f| (f[0].min(f[1]), f[0].max(f[1]))).collect();
        stored.sort_unstable();
        if stored != known.fibers {
            return bad(format!("fibers of conic {k} are not its reducible fibers"));
        }
    }
    if let Some(index) = body.signs.iter().position(|s| s.abs() != 1) {
        return Err(Error::SignViolation { index, value: body.signs[index].to_string() });
    }
    let vectors = wedge_vectors(&inc, &body.orderings, body.quotient_by_exceptional)?;
    Ok(ReplayReport {
        r: body.r,
        conics: inc.conics.len(),
        hash_matches: body.content_hash() == cert.content_hash,
        signed_sum_vanishes: signed_sum(&vectors, &body.signs).is_empty(),
    })
}

/// Sign of the permutation taking `from` to `to` (both listings of the same
/// fibers). Used to compare signs obtained from different orderings.
pub fn ordering_sign(from: &FiberOrdering, to: &FiberOrdering) -> i8 {
    // Rows are F_s - F_base for s != base in order; moving the base to the end
    // and then permuting is an orientation change of the sign of the
    // permutation of the full fiber list with base last.
    let with_base_last = |o: &FiberOrdering| -> Vec<[usize; 2]> {
        let mut v: Vec<[usize; 2]> =
            o.fibers.iter().enumerate().filter(|(s, _)| *s != o.base).map(|(_, f)| *f).collect();
        v.push(o.fibers[o.base]);
        v
    };
    let (a, b) = (with_base_last(from), with_base_last(to));
    let norm = |f: &[usize; 2]| (f[0].min(f[1]), f[0].max(f[1]));
    let perm: Vec<usize> =
        a.iter().map(|f| b.iter().position(|g| norm(g) == norm(f)).expect("same fibers")).collect();
    permutation_sign(&perm)
}

pub fn permutation_sign(perm: &[usize]) -> i8 {
    let mut seen = vec![false; perm.len()];
    let mut sign = 1i8;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = perm[i];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

/// Number of stored elimination entries allowed for the rank-8 attempt by
/// default; roughly a gigabyte of small integers.
pub const DEFAULT_STRETCH_BUDGET: usize = 20_000_000;

/// Attempts the rank-8 relation under a memory budget. Never required to
/// succeed.
pub fn stretch_r8(budget: usize) -> Result<HlogCertificate> {
    let inc = Incidence::new(8)?;
    kernel_signs_with(&inc, &KernelOptions { entry_budget: Some(budget), ..KernelOptions::default() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::Rng;

    #[test]
    fn difference_rows_shape() {
        let inc = Incidence::new(4).unwrap();
        let k = inc
            .conic_index_of(&crate::picard::DivisorClass::from_i64(&[1, -1, 0, 0, 0]).unwrap())
            .unwrap();
        let m = fibration_differences(k, &inc.conics[k], 2, inc.lines.len()).unwrap();
        assert_eq!(m.rows.len(), 2);
        for row in &m.rows {
            assert_eq!(row.iter().filter(|&&x| x == 1).count(), 2);
            assert_eq!(row.iter().filter(|&&x| x == -1).count(), 2);
            assert_eq!(row.iter().map(|&x| x as i32).sum::<i32>(), 0);
        }
        assert_eq!(m.support.len(), 6);
        assert!(wedge_vector(&m).len() <= 15);
    }

    #[test]
    fn base_index_out_of_range() {
        let inc = Incidence::new(5).unwrap();
        let err = fibration_differences(0, &inc.conics[0], 4, inc.lines.len()).unwrap_err();
        assert_eq!(err, Error::IndexError { index: 4, len: 4 });
    }

    #[test]
    fn support_sizes() {
        for r in 4..=7 {
            let inc = Incidence::new(r).unwrap();
            for (k, c) in inc.conics.iter().enumerate() {
                let m = fibration_differences(k, c, r - 2, inc.lines.len()).unwrap();
                assert_eq!(m.rows.len(), r - 2);
                assert_eq!(m.support.len(), 2 * (r - 1));
                assert!(wedge_vector(&m).len() <= sparsity_bound(r));
            }
        }
    }

    #[test]
    fn tuple_keys_round_trip_and_order() {
        let a = TupleKey::pack(&[1, 5, 200]);
        assert_eq!(a.unpack(3), vec![1, 5, 200]);
        assert!(TupleKey::pack(&[1, 5, 200]) < TupleKey::pack(&[1, 6, 0]));
        assert!(TupleKey::pack(&[0, 255]) < TupleKey::pack(&[1, 0]));
    }

    /// Minor by cofactor expansion, independent of the elimination routine.
    fn cofactor_det(m: &[Vec<i64>]) -> i64 {
        if m.is_empty() {
            return 1;
        }
        (0..m.len())
            .map(|j| {
                let minor: Vec<Vec<i64>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, &x)| x).collect())
                    .collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * m[0][j] * cofactor_det(&minor)
            })
            .sum()
    }

    #[test]
    fn minors_match_cofactor_expansion() {
        let inc = Incidence::new(6).unwrap();
        for (k, c) in inc.conics.iter().enumerate().take(5) {
            let m = fibration_differences(k, c, 1, inc.lines.len()).unwrap();
            let w = wedge_vector(&m);
            for_each_combination(m.support.len(), 4, |pick| {
                let cols: Vec<usize> = pick.iter().map(|&p| m.support[p]).collect();
                let sub: Vec<Vec<i64>> =
                    m.rows.iter().map(|row| cols.iter().map(|&c| row[c] as i64).collect()).collect();
                assert_eq!(w.get(&cols), BigInt::from(cofactor_det(&sub)));
            });
        }
    }

    #[test]
    fn repeated_row_gives_zero() {
        let mut m = fiber_differences(0, &[(0, 1), (2, 3), (4, 5)], 2, 6).unwrap();
        m.rows[1] = m.rows[0].clone();
        assert!(wedge_vector(&m).is_empty());
    }

    #[test]
    fn swapping_rows_negates() {
        let inc = Incidence::new(5).unwrap();
        let m = fibration_differences(3, &inc.conics[3], 3, inc.lines.len()).unwrap();
        let mut swapped = m.clone();
        swapped.rows.swap(0, 2);
        assert_eq!(wedge_vector(&swapped), wedge_vector(&m).neg());
    }

    #[test]
    fn quotient_dimension_and_zero() {
        let lt = crate::incidence::enumerate_lines(5).unwrap();
        let v = vec![0i8; 16];
        let q = quotient_by_exceptional(&v, &lt);
        assert_eq!(q.len(), 11);
        assert!(q.iter().all(|&x| x == 0));
    }

    #[test]
    fn rank4_signs() {
        let cert = kernel_signs(4).unwrap();
        assert_eq!(cert.signs().len(), 5);
        assert_eq!(cert.body.kernel_dimension, 1);
        assert_eq!(cert.signs()[0], 1);
        assert!(cert.signs().iter().all(|s| s.abs() == 1));
    }

    #[test]
    fn rank5_and_6_signs_and_replay() {
        for r in [5, 6] {
            let cert = kernel_signs(r).unwrap();
            assert_eq!(cert.signs().len(), crate::incidence::expected_conic_count(r));
            let json = cert.to_json();
            let back = HlogCertificate::from_json(&json).unwrap();
            assert_eq!(back, cert);
            let report = replay(&back).unwrap();
            assert!(report.hash_matches && report.signed_sum_vanishes);
        }
    }

    #[test]
    fn tampered_certificate_fails_replay() {
        let mut cert = kernel_signs(5).unwrap();
        cert.body.signs[3] = -cert.body.signs[3];
        let report = replay(&cert).unwrap();
        assert!(!report.hash_matches);
        assert!(!report.signed_sum_vanishes);
    }

    #[test]
    fn brute_force_rank4_kernel() {
        // Independent oracle: try all 2^5 sign vectors.
        let inc = Incidence::new(4).unwrap();
        let ords = orderings(&inc, OrderingChoice::Canonical);
        let vectors = wedge_vectors(&inc, &ords, false).unwrap();
        let solutions: Vec<Vec<i8>> = (0..32u32)
            .map(|mask| (0..5).map(|k| if mask >> k & 1 == 1 { -1 } else { 1 }).collect::<Vec<i8>>())
            .filter(|eps| signed_sum(&vectors, eps).is_empty())
            .collect();
        assert_eq!(solutions.len(), 2);
        let cert = kernel_signs(4).unwrap();
        assert!(solutions.contains(&cert.body.signs));
    }

    #[test]
    fn no_proper_subset_relation_rank5() {
        // Dropping any conic leaves an independent family.
        let inc = Incidence::new(5).unwrap();
        let ords = orderings(&inc, OrderingChoice::Canonical);
        let vectors = wedge_vectors(&inc, &ords, false).unwrap();
        for skip in 0..vectors.len() {
            let rest: Vec<WedgeVector> =
                vectors.iter().enumerate().filter(|(k, _)| *k != skip).map(|(_, v)| v.clone()).collect();
            assert!(integer_left_kernel(&rest, None).unwrap().is_empty());
        }
    }

    #[test]
    fn quotient_agrees_up_to_global_sign() {
        for r in 4..=6 {
            let inc = Incidence::new(r).unwrap();
            let full = kernel_signs_with(&inc, &KernelOptions::default()).unwrap();
            let reduced =
                kernel_signs_with(&inc, &KernelOptions { quotient: true, ..KernelOptions::default() }).unwrap();
            let same = full.signs() == reduced.signs();
            let flipped = full.signs().iter().zip(reduced.signs()).all(|(a, b)| *a == -*b);
            assert!(same || flipped, "r={r}");
        }
    }

    #[test]
    fn randomized_orderings_relate_by_permutation_signs() {
        let inc = Incidence::new(6).unwrap();
        let base = kernel_signs_with(&inc, &KernelOptions::default()).unwrap();
        for seed in 0..3 {
            let opts = KernelOptions { ordering: OrderingChoice::Randomized(seed), ..KernelOptions::default() };
            let cert = kernel_signs_with(&inc, &opts).unwrap();
            let predicted: Vec<i8> = base
                .body
                .orderings
                .iter()
                .zip(&cert.body.orderings)
                .zip(base.signs())
                .map(|((a, b), &s)| s * ordering_sign(a, b))
                .collect();
            let g = predicted[0] * cert.signs()[0];
            assert!(predicted.iter().zip(cert.signs()).all(|(p, s)| p * g == *s), "seed {seed}");
        }
    }

    #[test]
    fn budget_is_enforced() {
        let inc = Incidence::new(6).unwrap();
        let opts = KernelOptions { entry_budget: Some(10), ..KernelOptions::default() };
        assert!(matches!(kernel_signs_with(&inc, &opts), Err(Error::BudgetExceeded(_))));
    }

    proptest! {
        #[test]
        fn combination_count(n in 0usize..10, k in 0usize..6) {
            let mut count = 0usize;
            for_each_combination(n, k, |c| {
                assert!(c.windows(2).all(|w| w[0] < w[1]));
                count += 1;
            });
            let expected = if k > n { 0 } else { (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1)) };
            prop_assert_eq!(count, expected);
        }

        #[test]
        fn permutation_of_fibers_scales_by_sign(seed in 0u64..1000) {
            let inc = Incidence::new(5).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let k = rng.gen_range(0..inc.conics.len());
            let a = FiberOrdering {
                fibers: inc.conics[k].fibers.iter().map(|&(i, j)| [i, j]).collect(),
                base: 3,
            };
            let mut fibers = a.fibers.clone();
            fibers.shuffle(&mut rng);
            let b = FiberOrdering { fibers, base: rng.gen_range(0..4) };
            let wa = wedge_vector(&fiber_differences(k, &a.pairs(), a.base, 16).unwrap());
            let wb = wedge_vector(&fiber_differences(k, &b.pairs(), b.base, 16).unwrap());
            let expected = if ordering_sign(&a, &b) == 1 { wa } else { wa.neg() };
            prop_assert_eq!(wb, expected);
        }
    }
}
