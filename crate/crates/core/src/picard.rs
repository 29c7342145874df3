//! The Picard lattice of the blow-up of the plane at `r` general points.
//!
//! Classes are written in the basis `(h, l_1, ..., l_r)` where `h` is the
//! pull-back of a line and the `l_i` are the exceptional curves. The
//! intersection form is `diag(1, -1, ..., -1)`.
//!
//! Conic classes are recognised by `c.c = 0` together with `K.c = -2`. Some
//! references state the second condition as `K.c = 0`, which no conic class
//! satisfies: every conic class has anticanonical degree 2.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub const MIN_RANK: usize = 3;
pub const MAX_RANK: usize = 8;

pub(crate) fn check_rank(r: usize) -> Result<()> {
    if (MIN_RANK..=MAX_RANK).contains(&r) {
        Ok(())
    } else {
        Err(Error::UnsupportedRank(r, "3..=8"))
    }
}

/// A divisor class `a_0 h + a_1 l_1 + ... + a_r l_r`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DivisorClass {
    coeffs: Vec<BigInt>,
}

impl DivisorClass {
    pub fn new(coeffs: Vec<BigInt>) -> Result<Self> {
        let r = coeffs.len().saturating_sub(1);
        check_rank(r)?;
        Ok(Self { coeffs })
    }

    pub fn from_i64(coeffs: &[i64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero(r: usize) -> Result<Self> {
        check_rank(r)?;
        Ok(Self { coeffs: vec![BigInt::zero(); r + 1] })
    }

    /// `h`.
    pub fn hyperplane(r: usize) -> Result<Self> {
        let mut d = Self::zero(r)?;
        d.coeffs[0] = BigInt::one();
        Ok(d)
    }

    /// The exceptional class `l_i`, with `i` in `1..=r`.
    pub fn exceptional(r: usize, i: usize) -> Result<Self> {
        if i == 0 || i > r {
            return Err(Error::IndexError { index: i, len: r + 1 });
        }
        let mut d = Self::zero(r)?;
        d.coeffs[i] = BigInt::one();
        Ok(d)
    }

    pub fn rank(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn degree(&self) -> &BigInt {
        &self.coeffs[0]
    }

    /// Coefficients as machine integers; classes met in practice are tiny.
    pub fn to_i64(&self) -> Vec<i64> {
        self.coeffs
            .iter()
            .map(|c| i64::try_from(c).expect("divisor coefficient exceeds i64"))
            .collect()
    }

    fn check_same_rank(&self, other: &Self) -> Result<()> {
        if self.rank() == other.rank() {
            Ok(())
        } else {
            Err(Error::RankMismatch(self.rank(), other.rank()))
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_rank(other)?;
        Ok(Self {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_rank(other)?;
        Ok(Self {
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self { coeffs: self.coeffs.iter().map(|a| a * k).collect() }
    }

    pub fn neg(&self) -> Self {
        Self { coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }
}

impl fmt::Debug for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let name = if i == 0 { "h".to_string() } else { format!("l{i}") };
            let sign = if c.is_negative() { "-" } else if first { "" } else { "+" };
            let mag = c.abs();
            if mag.is_one() {
                write!(f, "{sign}{name}")?;
            } else {
                write!(f, "{sign}{mag}{name}")?;
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl Serialize for DivisorClass {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let strings: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        strings.serialize(s)
    }
}

impl<'de> Deserialize<'de> for DivisorClass {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let strings = Vec::<String>::deserialize(d)?;
        let coeffs = strings
            .iter()
            .map(|s| s.parse::<BigInt>().map_err(serde::de::Error::custom))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        DivisorClass::new(coeffs).map_err(serde::de::Error::custom)
    }
}

/// Intersection pairing `a_0 b_0 - sum a_i b_i`.
pub fn pair(a: &DivisorClass, b: &DivisorClass) -> Result<BigInt> {
    a.check_same_rank(b)?;
    let mut acc = &a.coeffs[0] * &b.coeffs[0];
    for (x, y) in a.coeffs[1..].iter().zip(&b.coeffs[1..]) {
        acc -= x * y;
    }
    Ok(acc)
}

/// `Pic(X_r)` with its canonical class and the fundamental roots.
#[derive(Clone, Debug)]
pub struct DelPezzoLattice {
    pub r: usize,
    pub d: usize,
    pub canonical: DivisorClass,
    pub roots: Vec<DivisorClass>,
}

impl DelPezzoLattice {
    pub fn new(r: usize) -> Result<Self> {
        check_rank(r)?;
        let mut k = vec![1i64; r + 1];
        k[0] = -3;
        let canonical = DivisorClass::from_i64(&k)?;
        let mut roots = Vec::with_capacity(r);
        // rho_i = l_i - l_{i+1}
        for i in 1..r {
            let mut c = vec![0i64; r + 1];
            c[i] = 1;
            c[i + 1] = -1;
            roots.push(DivisorClass::from_i64(&c)?);
        }
        // rho_r = h - l_1 - l_2 - l_3
        let mut c = vec![0i64; r + 1];
        c[0] = 1;
        c[1] = -1;
        c[2] = -1;
        c[3] = -1;
        roots.push(DivisorClass::from_i64(&c)?);
        Ok(Self { r, d: 9 - r, canonical, roots })
    }

    fn check(&self, d: &DivisorClass) -> Result<()> {
        if d.rank() == self.r {
            Ok(())
        } else {
            Err(Error::RankMismatch(self.r, d.rank()))
        }
    }

    pub fn is_root(&self, rho: &DivisorClass) -> Result<bool> {
        self.check(rho)?;
        Ok(pair(rho, rho)? == BigInt::from(-2) && pair(rho, &self.canonical)?.is_zero())
    }

    /// The reflection `d -> d + (d, rho) rho`.
    pub fn reflect(&self, rho: &DivisorClass, d: &DivisorClass) -> Result<DivisorClass> {
        self.check(d)?;
        if !self.is_root(rho)? {
            return Err(Error::NotARoot);
        }
        let k = pair(d, rho)?;
        d.add(&rho.scale(&k))
    }

    pub fn is_line(&self, d: &DivisorClass) -> Result<bool> {
        self.check(d)?;
        let minus_one = BigInt::from(-1);
        Ok(pair(d, d)? == minus_one && pair(&self.canonical, d)? == minus_one)
    }

    pub fn is_conic_class(&self, d: &DivisorClass) -> Result<bool> {
        self.check(d)?;
        Ok(pair(d, d)?.is_zero() && pair(&self.canonical, d)? == BigInt::from(-2))
    }

    /// `-(rho_i, rho_j)` for the fundamental roots.
    pub fn cartan_matrix(&self) -> Vec<Vec<i64>> {
        self.roots
            .iter()
            .map(|a| {
                self.roots
                    .iter()
                    .map(|b| i64::try_from(-pair(a, b).expect("same rank")).expect("small"))
                    .collect()
            })
            .collect()
    }
}
