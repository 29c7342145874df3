//! Plane models of del Pezzo surfaces of degree 5 and 4: first integrals
//! `U_i = N_i / D_i` of the conic fibrations, the line arrangement their
//! fibers live on, and the logarithmic residues `d log(U_i - c)` over the
//! forms `h_j = d log L_j`.
//!
//! Everything is exact over `Q`. The residues are both embedded (degree 4)
//! and re-derived by exact division; the link between first integrals and
//! conic classes is computed from multiplicities of the fiber curves at the
//! blown-up points.

use std::collections::BTreeMap;

use dp_hlog_core::incidence::Incidence;
use dp_hlog_core::picard::DivisorClass;
use dp_hlog_core::wedge_kernel::{ordering_sign, FiberOrdering, HlogCertificate};
use num_traits::{One, Zero};
use rand::Rng;
use serde::Serialize;

use crate::error::{HyperlogError, Result};
use crate::poly::{int, Poly2, Poly3, Rational};
use crate::words::{asym, WordCombination};

/// `j -> m` meaning `sum_j m h_j`, indices 0-based.
pub type ResidueVector = BTreeMap<usize, i64>;

/// A rational function `num / den` together with its finite spectral values;
/// infinity is always the last spectral point.
#[derive(Clone, Debug)]
pub struct FirstIntegral {
    pub num: Poly2,
    pub den: Poly2,
    pub spectrum: Vec<Rational>,
}

impl FirstIntegral {
    pub fn degree(&self) -> u32 {
        self.num.total_degree().unwrap_or(0).max(self.den.total_degree().unwrap_or(0))
    }

    /// `N - c D`, the numerator of `U - c`.
    pub fn level(&self, c: &Rational) -> Poly2 {
        self.num.clone() - self.den.scale(c)
    }

    pub fn eval(&self, p: &[Rational; 2]) -> Option<Rational> {
        let d = self.den.eval(p);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(p) / d)
        }
    }
}

/// First integrals on the blow-up of `P^2` at `points`, with fibers supported
/// on the affine curves `factors` and the line at infinity.
#[derive(Clone, Debug)]
pub struct PlaneModel {
    pub r: usize,
    pub points: Vec<[Rational; 3]>,
    pub factors: Vec<Poly2>,
    pub integrals: Vec<FirstIntegral>,
}

/// Conic class of one first integral and its reducible fibers, listed in
/// spectral order with the fiber over infinity last.
#[derive(Clone, Debug, Serialize)]
pub struct IntegralFibers {
    pub conic: usize,
    #[serde(rename = "class")]
    pub cls: DivisorClass,
    pub fibers: Vec<[usize; 2]>,
}

impl IntegralFibers {
    /// Ordering matching the letters `d log(U - c)`, `c` finite: every fiber
    /// minus the fiber over infinity.
    pub fn ordering(&self) -> FiberOrdering {
        FiberOrdering { fibers: self.fibers.clone(), base: self.fibers.len() - 1 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ResidueReport {
    pub trials: usize,
    pub comparisons: usize,
    pub resampled: usize,
}

fn x() -> Poly2 {
    Poly2::x()
}

fn y() -> Poly2 {
    Poly2::y()
}

fn k(q: &Rational) -> Poly2 {
    Poly2::c(q.clone())
}

fn one() -> Poly2 {
    Poly2::c(Rational::one())
}

fn point(a: Rational, b: Rational, c: Rational) -> [Rational; 3] {
    [a, b, c]
}

fn random_rational<R: Rng>(rng: &mut R) -> Rational {
    Rational::new(rng.gen_range(-60i64..=60).into(), rng.gen_range(1i64..=40).into())
}

impl PlaneModel {
    fn homogeneous(f: &Poly2) -> Poly3 {
        f.homogenize(f.total_degree().unwrap_or(0))
    }

    /// `[deg, -m_1, ..., -m_r]` for the strict transform of `{f = 0}`.
    fn curve_class(&self, f: &Poly3, deg: u32) -> Vec<i64> {
        std::iter::once(deg as i64)
            .chain(self.points.iter().map(|p| -(f.multiplicity_at(p) as i64)))
            .collect()
    }

    /// Multiplicities of the factors in `N - cD` minus those in `D`.
    pub fn derive_residues(&self) -> Result<Vec<Vec<ResidueVector>>> {
        self.integrals
            .iter()
            .enumerate()
            .map(|(i, u)| {
                let den = self.factor_exponents(&u.den, i)?;
                u.spectrum
                    .iter()
                    .map(|c| {
                        let mut v = self.factor_exponents(&u.level(c), i)?;
                        for (j, m) in &den {
                            *v.entry(*j).or_insert(0) -= m;
                        }
                        v.retain(|_, m| *m != 0);
                        Ok(v)
                    })
                    .collect()
            })
            .collect()
    }

    fn factor_exponents(&self, f: &Poly2, integral: usize) -> Result<ResidueVector> {
        let mut rest = f.clone();
        let mut out = ResidueVector::new();
        for (j, l) in self.factors.iter().enumerate() {
            let (m, q) = rest.divide_out(l);
            if m > 0 {
                out.insert(j, m as i64);
            }
            rest = q;
        }
        if !rest.is_constant() || rest.is_zero() {
            return Err(HyperlogError::Factorization(format!(
                "first integral {}: leftover factor {rest}",
                integral + 1
            )));
        }
        Ok(out)
    }

    /// Probabilistic identity test of `d log(U_i - c) = sum_j m_j d log L_j`
    /// with exact evaluation of both partial derivatives at random rational
    /// points. In the affine chart the line at infinity contributes nothing.
    pub fn residue_check<R: Rng>(
        &self,
        residues: &[Vec<ResidueVector>],
        trials: usize,
        rng: &mut R,
    ) -> Result<ResidueReport> {
        let grads: Vec<[Poly2; 2]> = self.factors.iter().map(|l| [l.derivative(0), l.derivative(1)]).collect();
        let mut comparisons = 0;
        let mut resampled = 0;
        for (i, u) in self.integrals.iter().enumerate() {
            let (dn, dd) = ([u.num.derivative(0), u.num.derivative(1)], [u.den.derivative(0), u.den.derivative(1)]);
            for (s, c) in u.spectrum.iter().enumerate() {
                let level = u.level(c);
                let mut done = 0;
                while done < trials {
                    let p = [random_rational(rng), random_rational(rng)];
                    let lv: Vec<Rational> = self.factors.iter().map(|l| l.eval(&p)).collect();
                    let (nv, dv, levv) = (u.num.eval(&p), u.den.eval(&p), level.eval(&p));
                    if lv.iter().any(Zero::is_zero) || dv.is_zero() || levv.is_zero() {
                        resampled += 1;
                        continue;
                    }
                    for v in 0..2 {
                        // d/dv log(N/D - c) = (N_v D - N D_v) / (D (N - cD))
                        let lhs = (dn[v].eval(&p) * &dv - &nv * dd[v].eval(&p)) / (&dv * &levv);
                        let rhs = residues[i][s]
                            .iter()
                            .fold(Rational::zero(), |acc, (&j, &m)| acc + grads[j][v].eval(&p) / &lv[j] * int(m));
                        if lhs != rhs {
                            return Err(HyperlogError::ResidueMismatch { integral: i + 1, spectral: s + 1 });
                        }
                        comparisons += 1;
                    }
                    done += 1;
                }
            }
        }
        Ok(ResidueReport { trials, comparisons, resampled })
    }

    /// Conic class and reducible fibers of every first integral, as indices
    /// into the enumerated lines and conics of rank `r`.
    pub fn fiber_dictionary(&self, inc: &Incidence) -> Result<Vec<IntegralFibers>> {
        if inc.r() != self.r {
            return Err(dp_hlog_core::Error::RankMismatch(inc.r(), self.r).into());
        }
        let components: Vec<(Poly3, Vec<i64>)> = self
            .factors
            .iter()
            .map(|l| {
                let h = Self::homogeneous(l);
                let cls = self.curve_class(&h, l.total_degree().unwrap_or(0));
                (h, cls)
            })
            .chain(std::iter::once({
                let z = Poly3::z();
                let cls = self.curve_class(&z, 1);
                (z, cls)
            }))
            .collect();
        self.integrals
            .iter()
            .enumerate()
            .map(|(i, u)| {
                let e = u.degree();
                let (nh, dh) = (u.num.homogenize(e), u.den.homogenize(e));
                let base: Vec<u32> =
                    self.points.iter().map(|p| nh.multiplicity_at(p).min(dh.multiplicity_at(p))).collect();
                let mut conic = vec![e as i64];
                conic.extend(base.iter().map(|&m| -(m as i64)));
                let cls = DivisorClass::from_i64(&conic)?;
                let conic_index = inc.conic_index_of(&cls).ok_or_else(|| {
                    HyperlogError::Factorization(format!("first integral {} has non-conic class {cls}", i + 1))
                })?;
                let mut curves: Vec<Poly3> = u.spectrum.iter().map(|c| u.level(c).homogenize(e)).collect();
                curves.push(dh.clone());
                let fibers = curves
                    .iter()
                    .map(|f| self.split_fiber(f, &base, &components, inc, i))
                    .collect::<Result<Vec<_>>>()?;
                Ok(IntegralFibers { conic: conic_index, cls, fibers })
            })
            .collect()
    }

    fn split_fiber(
        &self,
        f: &Poly3,
        base: &[u32],
        components: &[(Poly3, Vec<i64>)],
        inc: &Incidence,
        integral: usize,
    ) -> Result<[usize; 2]> {
        let mut classes: Vec<Vec<i64>> = Vec::new();
        let mut rest = f.clone();
        for (h, cls) in components {
            let (m, q) = rest.divide_out(h);
            for _ in 0..m {
                classes.push(cls.clone());
            }
            rest = q;
        }
        if !rest.is_constant() {
            return Err(HyperlogError::Factorization(format!(
                "first integral {}: leftover factor {rest}",
                integral + 1
            )));
        }
        for (k, p) in self.points.iter().enumerate() {
            let excess = f.multiplicity_at(p) - base[k];
            for _ in 0..excess {
                let mut e = vec![0i64; self.r + 1];
                e[k + 1] = 1;
                classes.push(e);
            }
        }
        let lines: Vec<usize> = classes
            .iter()
            .map(|c| {
                let d = DivisorClass::from_i64(c)?;
                inc.lines.index_of(&d).ok_or_else(|| {
                    HyperlogError::Factorization(format!("component {d} of integral {} is not a line", integral + 1))
                })
            })
            .collect::<Result<_>>()?;
        match lines.as_slice() {
            [a, b] if a != b => Ok([*a.min(b), *a.max(b)]),
            _ => Err(HyperlogError::Factorization(format!(
                "a fiber of integral {} has {} components",
                integral + 1,
                lines.len()
            ))),
        }
    }

    /// Signs `eps_i` for the terms `AI_i(U_i)` with letters in spectral order,
    /// read off the certificate and corrected by the sign of the permutation
    /// between the certificate's fiber order and the spectral order.
    pub fn translate_signs(&self, inc: &Incidence, cert: &HlogCertificate) -> Result<Vec<i8>> {
        if cert.r() != self.r {
            return Err(dp_hlog_core::Error::RankMismatch(cert.r(), self.r).into());
        }
        let dict = self.fiber_dictionary(inc)?;
        let mut used = vec![false; inc.conics.len()];
        let mut signs = Vec::with_capacity(dict.len());
        for f in &dict {
            if std::mem::replace(&mut used[f.conic], true) {
                return Err(HyperlogError::Factorization("two first integrals share a conic class".into()));
            }
            let k = f.conic;
            signs.push(cert.signs()[k] * ordering_sign(&cert.body.orderings[k], &f.ordering()));
        }
        if used.iter().any(|u| !u) {
            return Err(HyperlogError::Factorization("some conic class has no first integral".into()));
        }
        Ok(signs)
    }
}

/// `Asym(R_{i,1} (x) ... (x) R_{i,n})` over the letters `h_j`.
pub fn symbol_term(residues: &[ResidueVector]) -> WordCombination {
    let mut tensor: Vec<(Vec<u8>, i64)> = vec![(Vec::new(), 1)];
    for r in residues {
        tensor = tensor
            .iter()
            .flat_map(|(w, c)| {
                r.iter().map(move |(&j, &m)| {
                    let mut w = w.clone();
                    w.push(j as u8);
                    (w, c * m)
                })
            })
            .collect();
    }
    let mut out = WordCombination::zero();
    for (w, c) in tensor {
        out = out + asym(&w).scale(&int(c));
    }
    out
}

/// `sum_i eps_i Asym(R_i)`.
pub fn symbolic_sum(residues: &[Vec<ResidueVector>], signs: &[i8]) -> WordCombination {
    residues
        .iter()
        .zip(signs)
        .fold(WordCombination::zero(), |acc, (r, &s)| acc + symbol_term(r).scale(&int(s as i64)))
}

#[derive(Clone, Debug, Serialize)]
pub struct SymbolicReport {
    pub terms: usize,
    pub nonzero_coefficients: usize,
    pub vanishes: bool,
}

/// Checks that the signed sum of antisymmetrized symbols is exactly zero.
pub fn symbolic_identity(residues: &[Vec<ResidueVector>], signs: &[i8]) -> Result<SymbolicReport> {
    let sum = symbolic_sum(residues, signs);
    if !sum.is_zero() {
        return Err(HyperlogError::SymbolicIdentityViolation(sum.len()));
    }
    Ok(SymbolicReport { terms: residues.len(), nonzero_coefficients: 0, vanishes: true })
}

/// Degree-5 model (`r = 4`): four points in general position, the five lines
/// through pairs of them, and the five classical first integrals.
pub fn abel_model() -> PlaneModel {
    let (o, l) = (int(0), int(1));
    let points = vec![
        point(l.clone(), o.clone(), o.clone()),
        point(o.clone(), l.clone(), o.clone()),
        point(o.clone(), o.clone(), l.clone()),
        point(l.clone(), l.clone(), l.clone()),
    ];
    let factors = vec![x(), y(), x() - one(), y() - one(), x() - y()];
    let spectrum = vec![int(0), int(1)];
    let fi = |num: Poly2, den: Poly2| FirstIntegral { num, den, spectrum: spectrum.clone() };
    let integrals = vec![
        fi(x(), one()),
        fi(y(), one()),
        fi(x(), y()),
        fi(one() - x(), one() - y()),
        fi(x() * (one() - y()), y() * (one() - x())),
    ];
    PlaneModel { r: 4, points, factors, integrals }
}

/// Residues `R_{i,s}` of the degree-4 model as printed, 1-based indices
/// `(j, m)` meaning `m h_j`.
#[rustfmt::skip]
pub const DP4_RESIDUES: [[&[(u8, i8)]; 3]; 10] = [
    [&[(1, 1)], &[(4, 1)], &[(5, 1)]],
    [&[(2, -1)], &[(7, 1), (2, -1)], &[(3, 1), (2, -1)]],
    [&[(1, -1), (2, 1)], &[(1, -1), (6, 1)], &[(1, -1), (10, 1)]],
    [&[(4, -1), (6, 1)], &[(7, 1), (4, -1)], &[(9, 1), (4, -1)]],
    [&[(10, -1), (5, 1)], &[(3, 1), (10, -1)], &[(9, 1), (10, -1)]],
    [&[(3, -1), (9, 1), (4, -1)], &[(7, 1), (3, -1), (4, -1), (5, 1)], &[(3, -1), (4, -1), (8, 1)]],
    [&[(3, 1), (9, -1), (6, 1), (2, -1)], &[(7, 1), (9, -1), (10, 1), (2, -1)], &[(9, -1), (2, -1), (8, 1)]],
    [&[(9, 1), (1, 1), (5, -1), (6, -1)], &[(4, 1), (5, -1), (6, -1), (10, 1)], &[(5, -1), (6, -1), (8, 1)]],
    [&[(3, -1), (1, -1), (5, 1), (2, 1)], &[(3, -1), (1, -1), (10, 1)], &[(3, -1), (1, -1), (8, 1)]],
    [&[(7, 1), (1, 1), (4, -1), (2, -1)], &[(4, -1), (6, 1), (2, -1)], &[(4, -1), (2, -1), (8, 1)]],
];

pub fn embedded_dp4_residues() -> Vec<Vec<ResidueVector>> {
    DP4_RESIDUES
        .iter()
        .map(|row| {
            row.iter()
                .map(|entries| entries.iter().map(|&(j, m)| (j as usize - 1, m as i64)).collect())
                .collect()
        })
        .collect()
}

/// The degree-4 data for parameters `(gamma, pi)`: blow-up of
/// `[1:0:0], [0:1:0], [0:0:1], [1:1:1], [pi:gamma:1]`.
#[derive(Clone, Debug)]
pub struct DP4Data {
    pub gamma: Rational,
    pub pi: Rational,
    pub model: PlaneModel,
    pub residues: Vec<Vec<ResidueVector>>,
}

/// `pi gamma (pi - 1)(gamma - 1)(pi - gamma) != 0`.
pub fn is_generic(gamma: &Rational, pi: &Rational) -> bool {
    let l = Rational::one();
    !(pi * gamma * (pi - &l) * (gamma - &l) * (pi - gamma)).is_zero()
}

impl DP4Data {
    pub fn new(gamma: Rational, pi: Rational) -> Result<Self> {
        if !is_generic(&gamma, &pi) {
            return Err(HyperlogError::NonGeneric(format!("gamma = {gamma}, pi = {pi}")));
        }
        let (g, p) = (&gamma, &pi);
        let (o, l) = (int(0), int(1));
        let points = vec![
            point(l.clone(), o.clone(), o.clone()),
            point(o.clone(), l.clone(), o.clone()),
            point(o.clone(), o.clone(), l.clone()),
            point(l.clone(), l.clone(), l.clone()),
            point(p.clone(), g.clone(), l.clone()),
        ];
        let factors = vec![
            x(),
            y(),
            y() - k(g),
            x() - one(),
            x() - k(p),
            x() - y(),
            y() - one(),
            k(g) * ((x() - y()) * k(p) + x() * (y() - one())) - k(p) * y() * (x() - one()),
            k(g) * (x() - one()) - k(p) * (y() - one()) + y() - x(),
            k(g) * x() - k(p) * y(),
        ];
        let fi = |num: Poly2, den: Poly2, r: Rational| FirstIntegral { num, den, spectrum: vec![int(0), int(1), r] };
        let integrals = vec![
            fi(x(), one(), p.clone()),
            fi(one(), y(), &l / g),
            fi(y(), x(), g / p),
            fi(x() - y(), x() - one(), (p - g) / (p - &l)),
            fi(k(g) * (k(p) - x()), k(p) * y() - k(g) * x(), g * (p - &l) / (p - g)),
            fi(
                (one() - x()) * k(g) + x() + k(&(p - &l)) * y() - k(p),
                (x() - one()) * (y() - k(g)),
                (g - p) / g,
            ),
            fi(
                (x() - y()) * (y() - k(g)),
                y() * (k(p) * y() - k(g) * x() - k(p) + k(g) + x() - y()),
                &l / (&l - p),
            ),
            fi(
                -(x() * (x() * k(&(g - &l)) + (one() - y()) * k(p) - k(g) + y())),
                (x() - y()) * (x() - k(p)),
                &l - g,
            ),
            fi(y() * (x() - k(p)), x() * (y() - k(g)), (p - &l) / (g - &l)),
            fi(x() * (y() - one()), y() * (x() - one()), p * (g - &l) / (g * (p - &l))),
        ];
        let model = PlaneModel { r: 5, points, factors, integrals };
        for (i, u) in model.integrals.iter().enumerate() {
            let c = &u.spectrum[2];
            if c.is_zero() || c.is_one() {
                return Err(HyperlogError::NonGeneric(format!("spectral value r_{} = {c}", i + 1)));
            }
        }
        Ok(Self { gamma, pi, model, residues: embedded_dp4_residues() })
    }
}

/// Draws an admissible `(gamma, pi)` with small numerators and denominators.
pub fn random_parameters<R: Rng>(rng: &mut R) -> (Rational, Rational) {
    loop {
        let g = Rational::new(rng.gen_range(-9i64..=9).into(), rng.gen_range(1i64..=7).into());
        let p = Rational::new(rng.gen_range(-9i64..=9).into(), rng.gen_range(1i64..=7).into());
        if is_generic(&g, &p) {
            return (g, p);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::rat;
    use dp_hlog_core::wedge_kernel::kernel_signs;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn example() -> DP4Data {
        DP4Data::new(rat(1, 3), rat(5, 2)).unwrap()
    }

    #[test]
    fn genericity() {
        assert!(DP4Data::new(rat(1, 3), rat(1, 3)).is_err());
        assert!(DP4Data::new(int(1), rat(5, 2)).is_err());
        assert!(DP4Data::new(int(0), rat(5, 2)).is_err());
        assert!(is_generic(&rat(1, 3), &rat(5, 2)));
    }

    #[test]
    fn derived_residues_match_embedded() {
        for (g, p) in [(rat(1, 3), rat(5, 2)), (rat(-2, 7), rat(3, 4)), (int(3), int(-5))] {
            let data = DP4Data::new(g, p).unwrap();
            assert_eq!(data.model.derive_residues().unwrap(), data.residues);
        }
    }

    #[test]
    fn residue_examples() {
        let r = embedded_dp4_residues();
        assert_eq!(r[0][0], ResidueVector::from([(0, 1)]));
        assert_eq!(r[5][2], ResidueVector::from([(2, -1), (3, -1), (7, 1)]));
        assert_eq!(r[9][1], ResidueVector::from([(3, -1), (5, 1), (1, -1)]));
    }

    #[test]
    fn residue_check_passes_and_catches_typos() {
        let data = example();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let report = data.model.residue_check(&data.residues, 20, &mut rng).unwrap();
        assert_eq!(report.comparisons, 10 * 3 * 20 * 2);
        let mut bad = data.residues.clone();
        *bad[6][1].get_mut(&9).unwrap() = -1;
        let err = data.model.residue_check(&bad, 20, &mut rng).unwrap_err();
        assert_eq!(err, HyperlogError::ResidueMismatch { integral: 7, spectral: 2 });
    }

    #[test]
    fn fiber_dictionary_is_a_bijection_onto_conics() {
        let inc = Incidence::new(5).unwrap();
        let dict = example().model.fiber_dictionary(&inc).unwrap();
        let mut conics: Vec<usize> = dict.iter().map(|f| f.conic).collect();
        conics.sort_unstable();
        assert_eq!(conics, (0..10).collect::<Vec<_>>());
        for f in &dict {
            let mut fibers: Vec<(usize, usize)> = f.fibers.iter().map(|p| (p[0], p[1])).collect();
            fibers.sort_unstable();
            assert_eq!(fibers, inc.conics[f.conic].fibers);
        }
        // U_1 = x: pencil of lines through [0:1:0]
        assert_eq!(dict[0].cls, DivisorClass::from_i64(&[1, 0, -1, 0, 0, 0]).unwrap());
    }

    #[test]
    fn certificate_signs_are_uniform_for_dp4() {
        let inc = Incidence::new(5).unwrap();
        let cert = kernel_signs(5).unwrap();
        let signs = example().model.translate_signs(&inc, &cert).unwrap();
        assert!(signs.iter().all(|&s| s == signs[0]), "{signs:?}");
    }

    #[test]
    fn symbolic_identity_and_non_vacuity() {
        let r = embedded_dp4_residues();
        let plus = vec![1i8; 10];
        assert!(symbolic_identity(&r, &plus).unwrap().vanishes);
        for i in 0..10 {
            let mut flipped = plus.clone();
            flipped[i] = -1;
            assert!(!symbolic_sum(&r, &flipped).is_zero());
            let dropped: Vec<Vec<ResidueVector>> =
                r.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, v)| v.clone()).collect();
            assert!(!symbolic_sum(&dropped, &plus[..9]).is_zero());
            assert!(!symbol_term(&r[i]).is_zero());
        }
    }

    #[test]
    fn symbolic_identity_relabel_invariance() {
        let r = embedded_dp4_residues();
        let perm = [3usize, 7, 0, 9, 1, 5, 2, 8, 6, 4];
        let relabeled: Vec<Vec<ResidueVector>> = r
            .iter()
            .map(|row| row.iter().map(|v| v.iter().map(|(&j, &m)| (perm[j], m)).collect()).collect())
            .collect();
        assert!(symbolic_sum(&relabeled, &[1; 10]).is_zero());
        assert_eq!(symbolic_sum(&r, &[1; 10]).relabel(|a| perm[a as usize] as u8), WordCombination::zero());
    }

    #[test]
    fn abel_model_end_to_end() {
        let model = abel_model();
        let inc = Incidence::new(4).unwrap();
        let residues = model.derive_residues().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        model.residue_check(&residues, 20, &mut rng).unwrap();
        let cert = kernel_signs(4).unwrap();
        let signs = model.translate_signs(&inc, &cert).unwrap();
        assert!(symbolic_identity(&residues, &signs).unwrap().vanishes);
        assert!(!symbolic_sum(&residues, &[1; 5]).is_zero() || signs.iter().all(|&s| s == signs[0]));
    }
}
