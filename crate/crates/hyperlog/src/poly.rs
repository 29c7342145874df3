//! Sparse multivariate polynomials over `Q` in a fixed number of variables,
//! just enough for plane curves: arithmetic, partial derivatives, exact
//! evaluation, exact division, homogenization and local multiplicities.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rational_to_f64(q: &Rational) -> f64 {
    // Ratio of big integers may overflow f64 individually; rationals here
    // are small, so the direct route is exact enough.
    q.numer().to_f64().unwrap_or(f64::NAN) / q.denom().to_f64().unwrap_or(f64::NAN)
}

/// Polynomial in `N` variables; monomials are exponent vectors ordered
/// lexicographically (variable 0 largest).
#[derive(Clone, PartialEq, Eq, Default)]
pub struct Poly<const N: usize> {
    terms: BTreeMap<[u32; N], Rational>,
}

pub type Poly2 = Poly<2>;
pub type Poly3 = Poly<3>;

impl<const N: usize> Poly<N> {
    pub fn zero() -> Self {
        Self { terms: BTreeMap::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial([0; N], c)
    }

    pub fn monomial(exps: [u32; N], c: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(exps, c);
        p
    }

    /// The variable `x_i`.
    pub fn var(i: usize) -> Self {
        let mut e = [0; N];
        e[i] = 1;
        Self::monomial(e, Rational::one())
    }

    fn add_term(&mut self, exps: [u32; N], c: Rational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(exps).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&exps);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32; N], &Rational)> {
        self.terms.iter()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).min()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&k| k == 0))
    }

    pub fn is_homogeneous(&self) -> bool {
        self.total_degree() == self.min_degree()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect() }
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::constant(Rational::one()), |acc, _| &acc * self)
    }

    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut f = *e;
                f[i] -= 1;
                out.add_term(f, c * BigInt::from(e[i]));
            }
        }
        out
    }

    pub fn eval(&self, x: &[Rational; N]) -> Rational {
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &k) in x.iter().zip(e) {
                for _ in 0..k {
                    t *= xi;
                }
            }
            acc += t;
        }
        acc
    }

    pub fn eval_complex(&self, x: &[Complex64; N]) -> Complex64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                x.iter().zip(e).fold(Complex64::new(rational_to_f64(c), 0.0), |t, (xi, &k)| t * xi.powu(k))
            })
            .sum()
    }

    /// Substitutes a polynomial for every variable.
    pub fn compose<const M: usize>(&self, subs: &[Poly<M>; N]) -> Poly<M> {
        let mut out = Poly::<M>::zero();
        for (e, c) in &self.terms {
            let mut t = Poly::<M>::constant(c.clone());
            for (s, &k) in subs.iter().zip(e) {
                t = &t * &s.pow(k);
            }
            out = out + t;
        }
        out
    }

    fn leading(&self) -> Option<(&[u32; N], &Rational)> {
        self.terms.iter().next_back()
    }

    /// `Some(q)` with `self = q * d`, or `None` if `d` does not divide.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (lead_exp, lead_c) = d.leading()?;
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while let Some((e, c)) = rem.leading().map(|(e, c)| (*e, c.clone())) {
            let mut f = [0u32; N];
            for i in 0..N {
                if e[i] < lead_exp[i] {
                    return None;
                }
                f[i] = e[i] - lead_exp[i];
            }
            let t = Self::monomial(f, c / lead_c);
            rem = rem - &t * d;
            quot = quot + t;
        }
        Some(quot)
    }

    /// Largest `k` with `d^k | self`, and the cofactor.
    pub fn divide_out(&self, d: &Self) -> (u32, Self) {
        let mut k = 0;
        let mut cur = self.clone();
        if d.is_constant() || self.is_zero() {
            return (0, cur);
        }
        while let Some(q) = cur.div_exact(d) {
            cur = q;
            k += 1;
        }
        (k, cur)
    }
}

impl Poly2 {
    pub fn x() -> Self {
        Self::var(0)
    }

    pub fn y() -> Self {
        Self::var(1)
    }

    pub fn c(q: Rational) -> Self {
        Self::constant(q)
    }

    /// Degree-`d` homogenization with `z` as the third variable.
    pub fn homogenize(&self, d: u32) -> Poly3 {
        let mut out = Poly3::zero();
        for (e, c) in &self.terms {
            let s = e[0] + e[1];
            assert!(s <= d, "homogenization degree below total degree");
            out.add_term([e[0], e[1], d - s], c.clone());
        }
        out
    }

    /// Order of vanishing at `(a, b)`.
    pub fn multiplicity_at(&self, a: &Rational, b: &Rational) -> u32 {
        let shifted = self.compose(&[Poly2::x() + Poly2::c(a.clone()), Poly2::y() + Poly2::c(b.clone())]);
        shifted.min_degree().unwrap_or(u32::MAX)
    }
}

impl Poly3 {
    /// Multiplicity of the projective curve `{self = 0}` at the point with
    /// homogeneous coordinates `p`.
    pub fn multiplicity_at(&self, p: &[Rational; 3]) -> u32 {
        let k = p.iter().position(|c| !c.is_zero()).expect("projective point has a nonzero coordinate");
        let others: Vec<usize> = (0..3).filter(|&i| i != k).collect();
        // Affine chart x_k = 1, remaining coordinates as (u, v).
        let mut subs: [Poly2; 3] = [Poly2::zero(), Poly2::zero(), Poly2::zero()];
        subs[k] = Poly2::c(Rational::one());
        subs[others[0]] = Poly2::x();
        subs[others[1]] = Poly2::y();
        let affine = self.compose(&subs);
        affine.multiplicity_at(&(&p[others[0]] / &p[k]), &(&p[others[1]] / &p[k]))
    }

    pub fn z() -> Self {
        Self::var(2)
    }
}

impl<const N: usize> Add for Poly<N> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for (e, c) in rhs.terms {
            self.add_term(e, c);
        }
        self
    }
}

impl<const N: usize> Sub for Poly<N> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<const N: usize> Neg for Poly<N> {
    type Output = Self;
    fn neg(self) -> Self {
        Self { terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect() }
    }
}

impl<const N: usize> Mul for &Poly<N> {
    type Output = Poly<N>;
    fn mul(self, rhs: &Poly<N>) -> Poly<N> {
        let mut out = Poly::zero();
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                let mut e = [0u32; N];
                for i in 0..N {
                    e[i] = a[i] + b[i];
                }
                out.add_term(e, x * y);
            }
        }
        out
    }
}

impl<const N: usize> Mul for Poly<N> {
    type Output = Poly<N>;
    fn mul(self, rhs: Poly<N>) -> Poly<N> {
        &self * &rhs
    }
}

impl<const N: usize> fmt::Debug for Poly<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<const N: usize> fmt::Display for Poly<N> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        const NAMES: [&str; 3] = ["x", "y", "z"];
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let sign = if c.is_negative() { "-" } else if first { "" } else { "+" };
            write!(f, "{sign}")?;
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    let name = NAMES.get(i).copied().unwrap_or("t");
                    if k == 1 { name.to_string() } else { format!("{name}^{k}") }
                })
                .collect();
            let a = c.abs();
            if mono.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{a}*{}", mono.join("*"))?;
            }
            first = false;
        }
        Ok(())
    }
}
