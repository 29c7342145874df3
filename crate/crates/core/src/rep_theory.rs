//! Permutation characters of `W(E_r)` on lines and conics, exterior powers,
//! and inner products computed by summing over the whole group.
//!
//! Power sums `chi(g^k)` are read off the cycle type of the line permutation
//! and the exterior powers follow from Newton's identities
//! `m e_m = sum_{k=1}^m (-1)^{k-1} p_k e_{m-k}`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::d5_table;
use crate::error::{Error, Result};
use crate::incidence::{Incidence, LineTable};
use crate::weyl::{self, WeylElement, WeylGroup};

/// Number of points fixed by `g^power`: cycles whose length divides `power`,
/// weighted by their length.
pub fn fixed_points(perm: &[u8], power: usize) -> usize {
    assert!(power >= 1, "power must be positive");
    weyl::cycle_type(perm).into_iter().filter(|len| power % len == 0).sum()
}

/// `(chi(g), chi(g^2), ..., chi(g^m))` for the permutation character.
pub fn power_sums(perm: &[u8], m: usize) -> Vec<i64> {
    let cycles = weyl::cycle_type(perm);
    (1..=m)
        .map(|k| cycles.iter().filter(|&&len| k % len == 0).sum::<usize>() as i64)
        .collect()
}

/// `e_m` from the power sums `p_1..p_m` by Newton's recurrence.
pub fn exterior_power_value(powersums: &[i64], m: usize) -> Result<i64> {
    if powersums.len() < m {
        return Err(Error::InternalError(format!(
            "need {m} power sums, got {}",
            powersums.len()
        )));
    }
    let mut e: Vec<i128> = vec![1];
    for j in 1..=m {
        let mut acc: i128 = 0;
        for k in 1..=j {
            let term = powersums[k - 1] as i128 * e[j - k];
            if k % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        if acc % j as i128 != 0 {
            return Err(Error::InternalError(format!("Newton recurrence not integral at e_{j}")));
        }
        e.push(acc / j as i128);
    }
    i64::try_from(e[m]).map_err(|_| Error::InternalError("e_m overflows i64".into()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Action {
    Lines,
    Conics,
    ExteriorLines(usize),
    Reflection,
    Sign,
    Trivial,
}

/// A class function sampled on every element of the group, in the group's
/// enumeration order.
#[derive(Clone, Debug)]
pub struct ClassFunctionSample {
    pub r: usize,
    pub action: Action,
    pub values: Vec<i64>,
}

impl ClassFunctionSample {
    fn from_fn<F>(group: &WeylGroup, action: Action, f: F) -> Self
    where
        F: Fn(&[u8], i8) -> i64 + Sync,
    {
        let values = (0..group.order())
            .into_par_iter()
            .map(|i| f(group.perm(i), group.sign(i)))
            .collect();
        Self { r: group.r, action, values }
    }

    pub fn degree(&self) -> i64 {
        self.values[0]
    }
}

pub fn line_character(group: &WeylGroup) -> ClassFunctionSample {
    ClassFunctionSample::from_fn(group, Action::Lines, |p, _| fixed_points(p, 1) as i64)
}

pub fn exterior_line_character(group: &WeylGroup, m: usize) -> Result<ClassFunctionSample> {
    let values: Result<Vec<i64>> = (0..group.order())
        .into_par_iter()
        .map(|i| exterior_power_value(&power_sums(group.perm(i), m), m))
        .collect();
    Ok(ClassFunctionSample { r: group.r, action: Action::ExteriorLines(m), values: values? })
}

pub fn sign_character(group: &WeylGroup) -> ClassFunctionSample {
    ClassFunctionSample::from_fn(group, Action::Sign, |_, s| s as i64)
}

pub fn trivial_character(group: &WeylGroup) -> ClassFunctionSample {
    ClassFunctionSample::from_fn(group, Action::Trivial, |_, _| 1)
}

/// Trace on `Pic` minus one: `K_r` is fixed, so this is the character of the
/// root space.
pub fn reflection_character_value(g: &[u8], lt: &LineTable) -> i64 {
    weyl::pic_trace(g, lt) - 1
}

pub fn reflection_character(group: &WeylGroup, lt: &LineTable) -> ClassFunctionSample {
    let tracer = weyl::PicTracer::new(lt);
    ClassFunctionSample::from_fn(group, Action::Reflection, |p, _| tracer.trace(p) - 1)
}

/// Permutation of conic indices induced by a line permutation.
pub fn conic_permutation(perm: &[u8], inc: &Incidence) -> Vec<usize> {
    inc.conics
        .iter()
        .map(|c| {
            let (i, j) = c.fibers[0];
            inc.conic_of_pair(perm[i] as usize, perm[j] as usize)
                .expect("image of a fiber is a fiber")
        })
        .collect()
}

pub fn conic_fixed_points(perm: &[u8], inc: &Incidence) -> i64 {
    inc.conics
        .iter()
        .enumerate()
        .filter(|(k, c)| {
            let (i, j) = c.fibers[0];
            inc.conic_of_pair(perm[i] as usize, perm[j] as usize) == Some(*k)
        })
        .count() as i64
}

pub fn conic_character(group: &WeylGroup, inc: &Incidence) -> Result<ClassFunctionSample> {
    if group.r != inc.r() {
        return Err(Error::RankMismatch(group.r, inc.r()));
    }
    Ok(ClassFunctionSample::from_fn(group, Action::Conics, |p, _| conic_fixed_points(p, inc)))
}

/// `(1/|W|) sum_g chi(g) psi(g)`. Characters here are real, so no
/// conjugation is needed.
pub fn inner_product(chi: &ClassFunctionSample, psi: &ClassFunctionSample) -> Result<BigRational> {
    if chi.r != psi.r {
        return Err(Error::RankMismatch(chi.r, psi.r));
    }
    if chi.values.len() != psi.values.len() {
        return Err(Error::InternalError("class functions sampled on different groups".into()));
    }
    let sum: i128 = chi
        .values
        .par_iter()
        .zip(psi.values.par_iter())
        .map(|(&a, &b)| a as i128 * b as i128)
        .sum();
    Ok(BigRational::new(BigInt::from(sum), BigInt::from(chi.values.len())))
}

/// Inner product that must come out integral.
pub fn multiplicity(chi: &ClassFunctionSample, psi: &ClassFunctionSample) -> Result<i64> {
    let q = inner_product(chi, psi)?;
    if !q.is_integer() {
        return Err(Error::NotACharacter(q.to_string()));
    }
    q.to_integer().to_i64().ok_or_else(|| Error::InternalError("multiplicity overflow".into()))
}

/// Multiplicity of the sign representation in the `(r-2)`-th exterior power
/// of the permutation module on lines, by summation over the whole group.
pub fn signature_multiplicity(group: &WeylGroup) -> Result<i64> {
    let m = group.r - 2;
    let sum: i128 = (0..group.order())
        .into_par_iter()
        .map(|i| {
            let e = exterior_power_value(&power_sums(group.perm(i), m), m)?;
            Ok(group.sign(i) as i128 * e as i128)
        })
        .try_reduce(|| 0i128, |a, b| Ok(a + b))?;
    let order = group.order() as i128;
    if sum % order != 0 {
        return Err(Error::NotACharacter(format!("{sum}/{order}")));
    }
    Ok((sum / order) as i64)
}

/// Expected `<chi, chi>` for the line character, r = 4..=7.
pub const LINE_CHARACTER_NORMS: [i64; 4] = [3, 3, 3, 4];
/// Expected `<chi, chi>` for the conic character, r = 4..=7.
pub const CONIC_CHARACTER_NORMS: [i64; 4] = [2, 3, 3, 5];

/// Inner products of the line and conic characters computed over the whole
/// group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProjectionReport {
    pub r: usize,
    pub group_order: usize,
    pub line_norm: i64,
    pub conic_norm: i64,
    pub line_trivial: i64,
    pub line_reflection: i64,
    pub signature_multiplicity: i64,
}

impl ProjectionReport {
    /// Compares against the expected values; only defined for r = 4..=7.
    pub fn matches_expected(&self) -> bool {
        (4..=7).contains(&self.r)
            && self.line_norm == LINE_CHARACTER_NORMS[self.r - 4]
            && self.conic_norm == CONIC_CHARACTER_NORMS[self.r - 4]
            && self.line_trivial == 1
            && self.line_reflection == 1
            && self.signature_multiplicity == 0
    }
}

pub fn projection_report(group: &WeylGroup, inc: &Incidence) -> Result<ProjectionReport> {
    let chi = line_character(group);
    let conic = conic_character(group, inc)?;
    let report = ProjectionReport {
        r: group.r,
        group_order: group.order(),
        line_norm: multiplicity(&chi, &chi)?,
        conic_norm: multiplicity(&conic, &conic)?,
        line_trivial: multiplicity(&chi, &trivial_character(group))?,
        line_reflection: multiplicity(&chi, &reflection_character(group, &inc.lines))?,
        signature_multiplicity: signature_multiplicity(group)?,
    };
    Ok(report)
}

/// `chi(h g h^{-1}) == chi(g)` for the given pairs of elements.
pub fn is_class_function_on(
    chi: &ClassFunctionSample,
    group: &WeylGroup,
    pairs: &[(usize, usize)],
) -> bool {
    pairs.iter().all(|&(g, h)| {
        let (g, h) = (group.element(g), group.element(h));
        let conj = h.compose(&g).compose(&h.inverse());
        match group.position(&conj.perm) {
            Some(j) => chi.values[j] == chi.values[group.position(&g.perm).expect("in group")],
            None => false,
        }
    })
}

/// Multiplicities of the 18 irreducible characters of `W(D_5)` in a class
/// function given by its values on the classes (GAP column order).
pub fn d5_decompose(values18: &[i64; 18]) -> Result<[i64; 18]> {
    let sizes = d5_table::class_sizes();
    let mut out = [0i64; 18];
    for (row, slot) in d5_table::TABLE.iter().zip(out.iter_mut()) {
        let s: i64 = (0..18).map(|c| sizes[c] * row[c] * values18[c]).sum();
        if s % d5_table::GROUP_ORDER != 0 {
            return Err(Error::NotACharacter(format!("{s}/{}", d5_table::GROUP_ORDER)));
        }
        *slot = s / d5_table::GROUP_ORDER;
    }
    Ok(out)
}

/// Inverse of [`d5_decompose`].
pub fn d5_reconstruct(multiplicities: &[i64; 18]) -> [i64; 18] {
    let mut out = [0i64; 18];
    for (m, row) in multiplicities.iter().zip(d5_table::TABLE.iter()) {
        for (slot, v) in out.iter_mut().zip(row) {
            *slot += m * v;
        }
    }
    out
}

/// Values of the line character, its third exterior power and the conic
/// character on the 18 class representatives of `W(D_5)`.
#[derive(Clone, Debug, Serialize)]
pub struct D5Characters {
    pub chi: [i64; 18],
    pub wedge3: [i64; 18],
    pub conic: [i64; 18],
}

pub fn d5_characters(inc: &Incidence) -> Result<D5Characters> {
    let reps: Vec<WeylElement> = weyl::d5_class_representatives(&inc.lines)?;
    let mut out = D5Characters { chi: [0; 18], wedge3: [0; 18], conic: [0; 18] };
    for (k, g) in reps.iter().enumerate() {
        let p = power_sums(&g.perm, 3);
        out.chi[k] = p[0];
        out.wedge3[k] = exterior_power_value(&p, 3)?;
        out.conic[k] = conic_fixed_points(&g.perm, inc);
    }
    Ok(out)
}

/// Labels of the irreducible constituents with their multiplicities.
pub fn d5_labelled(multiplicities: &[i64; 18]) -> Vec<(String, i64)> {
    multiplicities
        .iter()
        .enumerate()
        .filter(|(_, &m)| m != 0)
        .map(|(i, &m)| (d5_table::CHARACTER_LABELS[i].to_string(), m))
        .collect()
}

pub fn is_zero_or_positive(q: &BigRational) -> bool {
    q.is_integer() && *q >= BigRational::zero()
}
