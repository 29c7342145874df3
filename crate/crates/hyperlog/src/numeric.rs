//! Numerical check of `sum_i eps_i AI_i(U_i) = 0` by pulling the letters
//! `d log(U_i - c)` back to a straight segment in the plane.
//!
//! Every term is integrated along the same planar segment from a base point
//! `xi` to the sample point, so all branch choices are made coherently and
//! each term vanishes at `xi`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{HyperlogError, Result};
use crate::model::{FirstIntegral, PlaneModel};
use crate::poly::{int, rational_to_f64, Poly2};
use crate::quadrature::{evaluate_path, evaluate_words, LogFormBasis, PathLetters, QuadratureOptions};
use crate::words::{asym, shuffle};

/// Complex evaluation data for one first integral.
struct CompiledIntegral {
    num: Poly2,
    den: Poly2,
    num_grad: [Poly2; 2],
    den_grad: [Poly2; 2],
    spectrum: Vec<Complex64>,
}

impl CompiledIntegral {
    fn new(u: &FirstIntegral) -> Self {
        Self {
            num: u.num.clone(),
            den: u.den.clone(),
            num_grad: [u.num.derivative(0), u.num.derivative(1)],
            den_grad: [u.den.derivative(0), u.den.derivative(1)],
            spectrum: u.spectrum.iter().map(|c| Complex64::new(rational_to_f64(c), 0.0)).collect(),
        }
    }
}

/// Letters `d/dt log(U(gamma(t)) - c_s)` along `gamma(t) = base + t (end - base)`.
struct PulledBackLetters<'a> {
    u: &'a CompiledIntegral,
    base: [Complex64; 2],
    dir: [Complex64; 2],
}

impl PulledBackLetters<'_> {
    fn point(&self, t: f64) -> [Complex64; 2] {
        [self.base[0] + self.dir[0] * t, self.base[1] + self.dir[1] * t]
    }
}

impl PathLetters for PulledBackLetters<'_> {
    fn alphabet(&self) -> usize {
        self.u.spectrum.len()
    }

    fn eval(&self, t: f64, out: &mut [Complex64]) {
        let p = self.point(t);
        let n = self.u.num.eval_complex(&p);
        let d = self.u.den.eval_complex(&p);
        let dn = self.u.num_grad[0].eval_complex(&p) * self.dir[0] + self.u.num_grad[1].eval_complex(&p) * self.dir[1];
        let dd = self.u.den_grad[0].eval_complex(&p) * self.dir[0] + self.u.den_grad[1].eval_complex(&p) * self.dir[1];
        let wronskian = dn * d - n * dd;
        for (o, c) in out.iter_mut().zip(&self.u.spectrum) {
            *o = wronskian / (d * (n - c * d));
        }
    }

    fn clearance_at(&self, t: f64) -> f64 {
        let p = self.point(t);
        let n = self.u.num.eval_complex(&p);
        let d = self.u.den.eval_complex(&p);
        self.u.spectrum.iter().map(|c| (n - c * d).norm()).fold(d.norm(), f64::min)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SampleResult {
    pub endpoint: [[f64; 2]; 2],
    pub residual: f64,
    pub max_term: f64,
    pub error_budget: f64,
    /// Smallest `|sum without term i| / |term i|`; close to 1 when the check
    /// is sensitive to every term.
    pub drop_one_ratio: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct NumericReport {
    pub rank: usize,
    pub weight: usize,
    pub gamma: Option<String>,
    pub pi: Option<String>,
    pub seed: u64,
    pub tol: f64,
    pub signs: Vec<i8>,
    pub base_point: [[f64; 2]; 2],
    pub samples: Vec<SampleResult>,
    pub max_residual: f64,
    pub pass: bool,
}

/// Sampling and integration settings.
#[derive(Clone, Copy, Debug)]
pub struct NumericOptions {
    pub samples: usize,
    pub tol: f64,
    pub seed: u64,
    pub radius: f64,
    pub quadrature: QuadratureOptions,
}

impl Default for NumericOptions {
    fn default() -> Self {
        Self { samples: 20, tol: 1e-8, seed: 0, radius: 0.35, quadrature: QuadratureOptions::default() }
    }
}

fn pairs(p: [Complex64; 2]) -> [[f64; 2]; 2] {
    [[p[0].re, p[0].im], [p[1].re, p[1].im]]
}

/// `AI_i(U_i)` at `end` along the segment from `base`, with its error estimate.
pub fn antisymmetric_term(
    u: &FirstIntegral,
    base: [Complex64; 2],
    end: [Complex64; 2],
    opts: &QuadratureOptions,
) -> Result<(Complex64, f64)> {
    let compiled = CompiledIntegral::new(u);
    term(&compiled, base, end, opts)
}

fn term(u: &CompiledIntegral, base: [Complex64; 2], end: [Complex64; 2], opts: &QuadratureOptions) -> Result<(Complex64, f64)> {
    let letters = PulledBackLetters { u, base, dir: [end[0] - base[0], end[1] - base[1]] };
    let weight = u.spectrum.len();
    let ev = evaluate_path(&letters, &base, &end, weight, opts)?;
    let word: Vec<u8> = (0..weight as u8).collect();
    let value = ev.value_of(&asym(&word)).expect("all words of this weight are evaluated");
    Ok((value, ev.error_estimate))
}

fn random_disk_point<R: Rng>(rng: &mut R, center: [Complex64; 2], radius: f64) -> [Complex64; 2] {
    let mut p = center;
    for c in p.iter_mut() {
        let r = radius * rng.gen::<f64>().sqrt();
        let theta = rng.gen_range(0.0..std::f64::consts::TAU);
        *c += Complex64::from_polar(r, theta);
    }
    p
}

const MAX_ATTEMPTS: usize = 1000;

/// Residuals of `sum_i eps_i AI_i(U_i)` relative to the largest term, at
/// seeded random points in a complex ball around a seeded base point.
pub fn verify_identity_numeric(model: &PlaneModel, signs: &[i8], opts: &NumericOptions) -> Result<NumericReport> {
    if signs.len() != model.integrals.len() {
        return Err(dp_hlog_core::Error::RankMismatch(signs.len(), model.integrals.len()).into());
    }
    let compiled: Vec<CompiledIntegral> = model.integrals.iter().map(CompiledIntegral::new).collect();
    let q = &opts.quadrature;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let clear = |a: [Complex64; 2], b: [Complex64; 2]| {
        compiled.iter().all(|u| {
            let letters = PulledBackLetters { u, base: a, dir: [b[0] - a[0], b[1] - a[1]] };
            letters.clearance() >= 10.0 * q.delta
        })
    };
    let mut base = None;
    for _ in 0..MAX_ATTEMPTS {
        let xi = [
            Complex64::new(rng.gen_range(-1.5..1.5), rng.gen_range(0.2..1.2)),
            Complex64::new(rng.gen_range(-1.5..1.5), rng.gen_range(-1.2..-0.2)),
        ];
        if clear(xi, xi) {
            base = Some(xi);
            break;
        }
    }
    let base = base.ok_or(HyperlogError::SamplingFailure(MAX_ATTEMPTS))?;
    let mut endpoints = Vec::with_capacity(opts.samples);
    let mut attempts = 0;
    while endpoints.len() < opts.samples {
        attempts += 1;
        if attempts > MAX_ATTEMPTS * opts.samples.max(1) {
            return Err(HyperlogError::SamplingFailure(attempts));
        }
        let p = random_disk_point(&mut rng, base, opts.radius);
        if clear(base, p) {
            endpoints.push(p);
        }
    }
    let samples = endpoints
        .par_iter()
        .map(|&p| {
            let terms = compiled.iter().map(|u| term(u, base, p, q)).collect::<Result<Vec<_>>>()?;
            let signed: Vec<Complex64> = terms.iter().zip(signs).map(|((v, _), &s)| v * s as f64).collect();
            let total: Complex64 = signed.iter().sum();
            let max_term = terms.iter().map(|(v, _)| v.norm()).fold(0.0, f64::max);
            let drop_one_ratio = signed
                .iter()
                .map(|v| (total - v).norm() / v.norm())
                .fold(f64::INFINITY, f64::min);
            Ok(SampleResult {
                endpoint: pairs(p),
                residual: total.norm() / max_term,
                max_term,
                error_budget: terms.iter().map(|(_, e)| e).sum::<f64>() / max_term,
                drop_one_ratio,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let max_residual = samples.iter().map(|s| s.residual).fold(0.0, f64::max);
    Ok(NumericReport {
        rank: model.r,
        weight: model.r - 2,
        gamma: None,
        pi: None,
        seed: opts.seed,
        tol: opts.tol,
        signs: signs.to_vec(),
        base_point: pairs(base),
        samples,
        max_residual,
        pass: max_residual < opts.tol,
    })
}

/// One product-versus-shuffle comparison.
#[derive(Clone, Debug, Serialize)]
pub struct ShufflePair {
    pub u: Vec<u8>,
    pub v: Vec<u8>,
    pub endpoint: [f64; 2],
    pub discrepancy: f64,
    pub error_budget: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ShuffleReport {
    pub seed: u64,
    pub branch_points: Vec<String>,
    pub pairs: Vec<ShufflePair>,
    pub pass: bool,
}

/// Compares `L_u L_v` with `L_{u sh v}` for seeded random words of length 1 or
/// 2 over the forms `dz/z`, `dz/(z-1)`, `dz/(z+2)`, at seeded endpoints of
/// segments starting at `(1 + i)/2`.
pub fn shuffle_consistency(count: usize, seed: u64, opts: &QuadratureOptions) -> Result<ShuffleReport> {
    let basis = LogFormBasis::new(vec![int(0), int(1), int(-2)])?;
    let base = Complex64::new(0.5, 0.5);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut jobs = Vec::with_capacity(count);
    for _ in 0..count {
        let word = |rng: &mut ChaCha8Rng| -> Vec<u8> {
            let len = rng.gen_range(1..=2);
            (0..len).map(|_| rng.gen_range(0..3u8)).collect()
        };
        let u = word(&mut rng);
        let v = word(&mut rng);
        let end = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(0.2..1.0));
        jobs.push((u, v, end));
    }
    let pairs = jobs
        .into_par_iter()
        .map(|(u, v, end)| {
            let ev = evaluate_words(&basis, base, end, u.len() + v.len(), opts)?;
            let lhs = ev.value(&u).expect("word evaluated") * ev.value(&v).expect("word evaluated");
            let rhs = ev.value_of(&shuffle(&u, &v)).expect("words evaluated");
            let discrepancy = (lhs - rhs).norm();
            let error_budget = 10.0 * (ev.error_estimate + 1e-13);
            Ok(ShufflePair { u, v, endpoint: [end.re, end.im], discrepancy, error_budget, pass: discrepancy <= error_budget })
        })
        .collect::<Result<Vec<_>>>()?;
    let pass = pairs.iter().all(|p| p.pass);
    Ok(ShuffleReport {
        seed,
        branch_points: basis.branch_points.iter().map(ToString::to_string).collect(),
        pairs,
        pass,
    })
}
