//! Lines and conic fibrations as Weyl-group orbits.
//!
//! Lines are the orbit of `l_r` and conic classes the orbit of `h - l_1`
//! under the fundamental reflections. Both sets are sorted by coefficient
//! tuple so that line and conic indices do not depend on the order in which
//! the breadth-first search happens to visit them.

use std::collections::{HashMap, HashSet, VecDeque};

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::picard::{check_rank, DelPezzoLattice, DivisorClass};

/// `l_r` for r = 3..=8.
pub const LINE_COUNTS: [usize; 6] = [6, 10, 16, 27, 56, 240];
/// `kappa_r` for r = 3..=8.
pub const CONIC_COUNTS: [usize; 6] = [3, 5, 10, 27, 126, 2160];

pub fn expected_line_count(r: usize) -> usize {
    LINE_COUNTS[r - 3]
}

pub fn expected_conic_count(r: usize) -> usize {
    CONIC_COUNTS[r - 3]
}

/// Breadth-first closure of `start` under the given reflections, applied in
/// the given order.
pub fn orbit(
    lattice: &DelPezzoLattice,
    start: &DivisorClass,
    roots: &[DivisorClass],
) -> Result<Vec<DivisorClass>> {
    let mut seen: HashSet<DivisorClass> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(start.clone());
    queue.push_back(start.clone());
    let mut out = Vec::new();
    while let Some(d) = queue.pop_front() {
        for rho in roots {
            let image = lattice.reflect(rho, &d)?;
            if seen.insert(image.clone()) {
                queue.push_back(image);
            }
        }
        out.push(d);
    }
    Ok(out)
}

/// The lines of `X_r` in canonical (lexicographic) order.
#[derive(Clone, Debug)]
pub struct LineTable {
    pub r: usize,
    pub lines: Vec<DivisorClass>,
    index: HashMap<DivisorClass, usize>,
    small: Vec<Vec<i64>>,
}

impl LineTable {
    pub fn from_lines(r: usize, mut lines: Vec<DivisorClass>) -> Result<Self> {
        check_rank(r)?;
        lines.sort();
        lines.dedup();
        let index = lines.iter().cloned().enumerate().map(|(i, d)| (d, i)).collect();
        let small = lines.iter().map(DivisorClass::to_i64).collect();
        Ok(Self { r, lines, index, small })
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    pub fn index_of(&self, d: &DivisorClass) -> Option<usize> {
        self.index.get(d).copied()
    }

    /// Coefficient tuple of line `i` as machine integers.
    pub fn coeffs(&self, i: usize) -> &[i64] {
        &self.small[i]
    }

    /// Index of the exceptional line `l_i`, `i` in `1..=r`.
    pub fn exceptional_index(&self, i: usize) -> usize {
        let d = DivisorClass::exceptional(self.r, i).expect("valid exceptional index");
        self.index_of(&d).expect("exceptional curves are lines")
    }

    pub fn is_exceptional(&self, i: usize) -> bool {
        let c = &self.small[i];
        c[0] == 0 && c[1..].iter().filter(|&&x| x == 1).count() == 1
    }
}

pub fn enumerate_lines(r: usize) -> Result<LineTable> {
    let lattice = DelPezzoLattice::new(r)?;
    let start = DivisorClass::exceptional(r, r)?;
    let lines = orbit(&lattice, &start, &lattice.roots)?;
    let table = LineTable::from_lines(r, lines)?;
    if table.len() != expected_line_count(r) {
        return Err(Error::InternalError(format!(
            "found {} lines for r={r}, expected {}",
            table.len(),
            expected_line_count(r)
        )));
    }
    Ok(table)
}

/// A conic class with its reducible fibers, each an unordered pair of line
/// indices `(i, j)`, `i < j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConicFibration {
    #[serde(rename = "class")]
    pub cls: DivisorClass,
    pub fibers: Vec<(usize, usize)>,
}

/// All pairs of lines summing to `c`, sorted.
pub fn reducible_fibers(c: &DivisorClass, lt: &LineTable) -> Result<Vec<(usize, usize)>> {
    let lattice = DelPezzoLattice::new(lt.r)?;
    if !lattice.is_conic_class(c)? {
        return Err(Error::InternalError(format!("{c} is not a conic class")));
    }
    let mut fibers = Vec::new();
    for (i, line) in lt.lines.iter().enumerate() {
        let rest = c.sub(line)?;
        if let Some(j) = lt.index_of(&rest) {
            if i < j {
                fibers.push((i, j));
            }
        }
    }
    fibers.sort_unstable();
    if fibers.len() != lt.r - 1 {
        return Err(Error::FiberCountViolation { expected: lt.r - 1, found: fibers.len() });
    }
    Ok(fibers)
}

pub fn enumerate_conics(r: usize, lt: &LineTable) -> Result<Vec<ConicFibration>> {
    if lt.r != r {
        return Err(Error::RankMismatch(r, lt.r));
    }
    let lattice = DelPezzoLattice::new(r)?;
    let mut start = DivisorClass::hyperplane(r)?;
    start = start.sub(&DivisorClass::exceptional(r, 1)?)?;
    let mut classes = orbit(&lattice, &start, &lattice.roots)?;
    classes.sort();
    if classes.len() != expected_conic_count(r) {
        return Err(Error::InternalError(format!(
            "found {} conic classes for r={r}, expected {}",
            classes.len(),
            expected_conic_count(r)
        )));
    }
    classes
        .into_iter()
        .map(|cls| {
            let fibers = reducible_fibers(&cls, lt)?;
            Ok(ConicFibration { cls, fibers })
        })
        .collect()
}

/// Lines and conic fibrations of one rank, enumerated together.
#[derive(Clone, Debug)]
pub struct Incidence {
    pub lattice: DelPezzoLattice,
    pub lines: LineTable,
    pub conics: Vec<ConicFibration>,
    conic_index: HashMap<DivisorClass, usize>,
    /// `pair_conic[i * n + j]`: conic having `{i, j}` as a fiber, or `u32::MAX`.
    pair_conic: Vec<u32>,
}

impl Incidence {
    pub fn new(r: usize) -> Result<Self> {
        let lattice = DelPezzoLattice::new(r)?;
        let lines = enumerate_lines(r)?;
        let conics = enumerate_conics(r, &lines)?;
        let conic_index = conics.iter().enumerate().map(|(k, c)| (c.cls.clone(), k)).collect();
        let n = lines.len();
        let mut pair_conic = vec![u32::MAX; n * n];
        for (k, c) in conics.iter().enumerate() {
            for &(i, j) in &c.fibers {
                pair_conic[i * n + j] = k as u32;
                pair_conic[j * n + i] = k as u32;
            }
        }
        Ok(Self { lattice, lines, conics, conic_index, pair_conic })
    }

    pub fn r(&self) -> usize {
        self.lattice.r
    }

    pub fn conic_index_of(&self, c: &DivisorClass) -> Option<usize> {
        self.conic_index.get(c).copied()
    }

    /// The conic class containing the transverse pair `(i, j)` as a fiber.
    pub fn conic_of_pair(&self, i: usize, j: usize) -> Option<usize> {
        let n = self.lines.len();
        if i >= n || j >= n {
            return None;
        }
        match self.pair_conic[i * n + j] {
            u32::MAX => None,
            k => Some(k as usize),
        }
    }
}

/// Intersection number of two lines, via machine integers.
pub fn line_pairing(lt: &LineTable, i: usize, j: usize) -> i64 {
    let (a, b) = (lt.coeffs(i), lt.coeffs(j));
    a[0] * b[0] - a[1..].iter().zip(&b[1..]).map(|(x, y)| x * y).sum::<i64>()
}

/// `true` iff `d` is `l_i` for some `i`.
pub fn is_exceptional_class(d: &DivisorClass) -> bool {
    let c = d.coeffs();
    c[0] == BigInt::from(0) && c[1..].iter().filter(|x| x.is_one()).count() == 1
        && c[1..].iter().filter(|x| **x == BigInt::from(0)).count() == c.len() - 2
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cls(v: &[i64]) -> DivisorClass {
        DivisorClass::from_i64(v).unwrap()
    }

    #[test]
    fn line_counts_match_table() {
        for r in 3..=8 {
            let lt = enumerate_lines(r).unwrap();
            assert_eq!(lt.len(), expected_line_count(r));
            let lat = DelPezzoLattice::new(r).unwrap();
            assert!(lt.lines.iter().all(|l| lat.is_line(l).unwrap()));
            assert!(lt.lines.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn unsupported_rank() {
        assert!(matches!(enumerate_lines(9), Err(Error::UnsupportedRank(9, _))));
        assert!(matches!(enumerate_lines(2), Err(Error::UnsupportedRank(2, _))));
    }

    #[test]
    fn r7_line_shapes() {
        let lt = enumerate_lines(7).unwrap();
        let mut by_degree = [0usize; 4];
        for l in &lt.lines {
            let c = l.to_i64();
            let deg = c[0] as usize;
            by_degree[deg] += 1;
            let mut tail: Vec<i64> = c[1..].to_vec();
            tail.sort();
            let expected: Vec<i64> = match deg {
                0 => vec![0, 0, 0, 0, 0, 0, 1],
                1 => vec![-1, -1, 0, 0, 0, 0, 0],
                2 => vec![-1, -1, -1, -1, -1, 0, 0],
                3 => vec![-2, -1, -1, -1, -1, -1, -1],
                _ => unreachable!(),
            };
            assert_eq!(tail, expected, "{l}");
        }
        assert_eq!(by_degree, [7, 21, 21, 7]);
    }

    #[test]
    fn conic_counts_and_r7_degrees() {
        for r in [3, 5] {
            let lt = enumerate_lines(r).unwrap();
            assert_eq!(enumerate_conics(r, &lt).unwrap().len(), expected_conic_count(r));
        }
        let lt = enumerate_lines(7).unwrap();
        let conics = enumerate_conics(7, &lt).unwrap();
        assert_eq!(conics.len(), 126);
        let mut by_degree = [0usize; 6];
        for c in &conics {
            by_degree[c.cls.to_i64()[0] as usize] += 1;
        }
        assert_eq!(by_degree, [0, 7, 35, 42, 35, 7]);
        // Table 3 shape 5h - 2 sum l + l_i is present.
        assert!(conics.iter().any(|c| c.cls == cls(&[5, -1, -2, -2, -2, -2, -2, -2])));
    }

    fn brute_force_fibers(c: &DivisorClass, lt: &LineTable) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..lt.len() {
            for j in i + 1..lt.len() {
                if lt.lines[i].add(&lt.lines[j]).unwrap() == *c {
                    out.push((i, j));
                }
            }
        }
        out
    }

    #[test]
    fn fibers_of_h_minus_l1() {
        let lt = enumerate_lines(4).unwrap();
        let c = cls(&[1, -1, 0, 0, 0]);
        let fibers = reducible_fibers(&c, &lt).unwrap();
        assert_eq!(fibers, brute_force_fibers(&c, &lt));
        assert_eq!(fibers.len(), 3);
        for j in 2..=4 {
            let mut a = vec![1, -1, 0, 0, 0];
            a[j] = -1;
            let mut b = vec![0; 5];
            b[j] = 1;
            let (ia, ib) = (lt.index_of(&cls(&a)).unwrap(), lt.index_of(&cls(&b)).unwrap());
            assert!(fibers.contains(&(ia.min(ib), ia.max(ib))));
        }

        let lt7 = enumerate_lines(7).unwrap();
        let c7 = cls(&[1, -1, 0, 0, 0, 0, 0, 0]);
        let fibers7 = reducible_fibers(&c7, &lt7).unwrap();
        assert_eq!(fibers7.len(), 6);
        for &(i, j) in &fibers7 {
            let (a, b) = (&lt7.lines[i], &lt7.lines[j]);
            let (lo, hi) = if a.degree() < b.degree() { (a, b) } else { (b, a) };
            assert_eq!(lo.degree(), &BigInt::from(0));
            assert_eq!(hi.add(lo).unwrap(), c7);
        }
    }

    #[test]
    fn r7_degree_two_conic_has_both_fiber_shapes() {
        let lt = enumerate_lines(7).unwrap();
        let c = cls(&[2, -1, -1, -1, -1, 0, 0, 0]);
        let fibers = reducible_fibers(&c, &lt).unwrap();
        assert_eq!(fibers, brute_force_fibers(&c, &lt));
        let degrees: Vec<(i64, i64)> = fibers
            .iter()
            .map(|&(i, j)| {
                let (a, b) = (lt.coeffs(i)[0], lt.coeffs(j)[0]);
                (a.min(b), a.max(b))
            })
            .collect();
        // l_{i1 i2} + l_{i3 i4}: three of them; l_k + C_{..}: three of them.
        assert_eq!(degrees.iter().filter(|d| **d == (1, 1)).count(), 3);
        assert_eq!(degrees.iter().filter(|d| **d == (0, 2)).count(), 3);
    }

    #[test]
    fn fibers_are_transverse_and_disjoint() {
        for r in 3..=7 {
            let inc = Incidence::new(r).unwrap();
            let mut covered = vec![false; inc.lines.len()];
            for c in &inc.conics {
                assert_eq!(c.fibers.len(), r - 1);
                let mut used = HashSet::new();
                for &(i, j) in &c.fibers {
                    assert_eq!(line_pairing(&inc.lines, i, j), 1);
                    assert!(used.insert(i) && used.insert(j));
                    covered[i] = true;
                    covered[j] = true;
                }
            }
            assert!(covered.iter().all(|&b| b));
        }
    }

    #[test]
    fn reflections_permute_lines_and_conics() {
        let inc = Incidence::new(6).unwrap();
        for rho in &inc.lattice.roots {
            let mut images: Vec<_> = inc
                .lines
                .lines
                .iter()
                .map(|l| inc.lattice.reflect(rho, l).unwrap())
                .collect();
            images.sort();
            assert_eq!(images, inc.lines.lines);
            let mut conic_images: Vec<_> = inc
                .conics
                .iter()
                .map(|c| inc.lattice.reflect(rho, &c.cls).unwrap())
                .collect();
            conic_images.sort();
            let originals: Vec<_> = inc.conics.iter().map(|c| c.cls.clone()).collect();
            assert_eq!(conic_images, originals);
        }
    }

    #[test]
    fn orbit_independent_of_generator_order() {
        let lat = DelPezzoLattice::new(6).unwrap();
        let start = DivisorClass::exceptional(6, 6).unwrap();
        let mut reference = orbit(&lat, &start, &lat.roots).unwrap();
        reference.sort();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..5 {
            let mut roots = lat.roots.clone();
            roots.shuffle(&mut rng);
            let mut o = orbit(&lat, &start, &roots).unwrap();
            o.sort();
            assert_eq!(o, reference);
        }
    }

    #[test]
    fn wrong_conic_input() {
        let lt = enumerate_lines(5).unwrap();
        assert!(reducible_fibers(&DivisorClass::hyperplane(5).unwrap(), &lt).is_err());
        assert!(is_exceptional_class(&DivisorClass::exceptional(5, 2).unwrap()));
        assert!(!is_exceptional_class(&DivisorClass::hyperplane(5).unwrap()));
    }
}
