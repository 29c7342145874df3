//! Iterated integrals of logarithmic 1-forms along straight segments.
//!
//! All words up to a given weight are transported together: with the
//! convention `d L_{a w} = f_a L_w`, where `f_a(t) dt` is the pull-back of the
//! letter `a` to the parameter interval `[0, 1]`, every word's values on a
//! panel are obtained from the values of its suffix by one application of a
//! Gauss-Legendre spectral integration matrix. Panels are doubled until two
//! successive refinements agree.

use std::collections::HashMap;
use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{HyperlogError, Result};
use crate::poly::{rational_to_f64, Rational};
use crate::words::{Word, WordCombination};

/// Letters along a path parametrized by `t in [0, 1]`.
pub trait PathLetters: Sync {
    fn alphabet(&self) -> usize;

    /// Writes `f_a(t)` for every letter `a`.
    fn eval(&self, t: f64, out: &mut [Complex64]);

    /// Smallest distance-like quantity to a singularity along the path.
    fn clearance(&self) -> f64 {
        (0..=CLEARANCE_GRID).map(|k| self.clearance_at(k as f64 / CLEARANCE_GRID as f64)).fold(f64::INFINITY, f64::min)
    }

    fn clearance_at(&self, t: f64) -> f64;
}

const CLEARANCE_GRID: usize = 2048;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct QuadratureOptions {
    /// Gauss-Legendre nodes per panel.
    pub nodes: usize,
    /// Target for the step-halving discrepancy, relative to `max(1, |value|)`.
    pub tol: f64,
    pub max_panels: usize,
    /// Minimal clearance from singular points.
    pub delta: f64,
}

impl Default for QuadratureOptions {
    fn default() -> Self {
        Self { nodes: 16, tol: 1e-13, max_panels: 1 << 12, delta: 1e-3 }
    }
}

/// Gauss-Legendre nodes on `[-1, 1]` with the matrix `S[i][j]` such that
/// `int_{-1}^{x_i} g = sum_j S[i][j] g(x_j)` for polynomials of degree `< n`.
#[derive(Clone, Debug)]
pub struct PanelRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub integration: Vec<Vec<f64>>,
}

fn legendre_values(x: f64, n: usize) -> Vec<f64> {
    let mut p = vec![1.0, x];
    for k in 1..n {
        let next = ((2 * k + 1) as f64 * x * p[k] - k as f64 * p[k - 1]) / (k + 1) as f64;
        p.push(next);
    }
    p.truncate(n + 1);
    p
}

impl PanelRule {
    pub fn new(n: usize) -> Self {
        let rule = GaussLegendre::new(NonZeroUsize::new(n).expect("at least one node"));
        let mut pairs: Vec<(f64, f64)> = rule.as_node_weight_pairs().to_vec();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let nodes: Vec<f64> = pairs.iter().map(|p| p.0).collect();
        let weights: Vec<f64> = pairs.iter().map(|p| p.1).collect();
        // Lagrange basis l_j = w_j sum_k (2k+1)/2 P_k(x_j) P_k, and
        // int_{-1}^x P_k = (P_{k+1} - P_{k-1}) / (2k+1), int_{-1}^x P_0 = x + 1.
        let at_nodes: Vec<Vec<f64>> = nodes.iter().map(|&x| legendre_values(x, n)).collect();
        let integration = nodes
            .iter()
            .enumerate()
            .map(|(i, &xi)| {
                let p = &at_nodes[i];
                (0..n)
                    .map(|j| {
                        let pj = &at_nodes[j];
                        let mut s = 0.5 * (xi + 1.0);
                        for k in 1..n {
                            s += pj[k] * 0.5 * (p[k + 1] - p[k - 1]);
                        }
                        weights[j] * s
                    })
                    .collect()
            })
            .collect();
        Self { nodes, weights, integration }
    }
}

/// All words of length `1..=max_weight` over `alphabet` letters, shortest
/// first, each with the index of its suffix.
#[derive(Clone, Debug)]
pub struct WordIndex {
    pub words: Vec<Word>,
    suffix: Vec<Option<usize>>,
    position: HashMap<Word, usize>,
}

impl WordIndex {
    pub fn new(alphabet: usize, max_weight: usize) -> Self {
        let mut words: Vec<Word> = Vec::new();
        let mut suffix = Vec::new();
        let mut position = HashMap::new();
        let mut layer: Vec<Word> = vec![Vec::new()];
        for _ in 0..max_weight {
            let mut next = Vec::new();
            for w in &layer {
                for a in 0..alphabet as u8 {
                    let mut v = vec![a];
                    v.extend_from_slice(w);
                    suffix.push(if w.is_empty() { None } else { Some(position[w]) });
                    position.insert(v.clone(), words.len());
                    words.push(v.clone());
                    next.push(v);
                }
            }
            layer = next;
        }
        Self { words, suffix, position }
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn index_of(&self, w: &[u8]) -> Option<usize> {
        self.position.get(w).copied()
    }
}

/// Values of all words at the end of the path from a fixed number of panels.
fn transport(letters: &dyn PathLetters, index: &WordIndex, rule: &PanelRule, panels: usize) -> Vec<Complex64> {
    let n = rule.nodes.len();
    let s = letters.alphabet();
    let mut start = vec![Complex64::zero(); index.len()];
    let mut f = vec![vec![Complex64::zero(); s]; n];
    let mut at_nodes = vec![vec![Complex64::zero(); n]; index.len()];
    let h = 1.0 / panels as f64;
    for p in 0..panels {
        let t0 = p as f64 * h;
        for (j, &x) in rule.nodes.iter().enumerate() {
            letters.eval(t0 + 0.5 * h * (x + 1.0), &mut f[j]);
        }
        let mut end = start.clone();
        for (w, word) in index.words.iter().enumerate() {
            let a = word[0] as usize;
            // integrand f_a * L_suffix at the nodes
            let g: Vec<Complex64> = (0..n)
                .map(|j| match index.suffix[w] {
                    Some(u) => f[j][a] * at_nodes[u][j],
                    None => f[j][a],
                })
                .collect();
            for i in 0..n {
                let acc: Complex64 = rule.integration[i].iter().zip(&g).map(|(sij, gj)| gj * *sij).sum();
                at_nodes[w][i] = start[w] + acc * (0.5 * h);
            }
            let total: Complex64 = rule.weights.iter().zip(&g).map(|(wj, gj)| gj * *wj).sum();
            end[w] = start[w] + total * (0.5 * h);
        }
        start = end;
    }
    start
}

/// Word values at the end of a path, with the step-halving error estimate.
#[derive(Clone, Debug, Serialize)]
pub struct PathEvaluation {
    pub base: Vec<[f64; 2]>,
    pub end: Vec<[f64; 2]>,
    #[serde(skip)]
    pub index: WordIndex,
    #[serde(skip)]
    pub values: Vec<Complex64>,
    pub error_estimate: f64,
    pub panels: usize,
}

impl PathEvaluation {
    /// Value of a word; the empty word has value 1.
    pub fn value(&self, w: &[u8]) -> Option<Complex64> {
        if w.is_empty() {
            return Some(Complex64::one());
        }
        self.index.index_of(w).map(|i| self.values[i])
    }

    pub fn value_of(&self, c: &WordCombination) -> Option<Complex64> {
        c.terms().map(|(w, q)| self.value(w).map(|v| v * rational_to_f64(q))).sum()
    }
}

fn complex_pairs(z: &[Complex64]) -> Vec<[f64; 2]> {
    z.iter().map(|c| [c.re, c.im]).collect()
}

/// Adaptive transport of all words up to `max_weight`.
pub fn evaluate_path(
    letters: &dyn PathLetters,
    base: &[Complex64],
    end: &[Complex64],
    max_weight: usize,
    opts: &QuadratureOptions,
) -> Result<PathEvaluation> {
    let clearance = letters.clearance();
    if !(clearance >= opts.delta) {
        return Err(HyperlogError::PathTooClose(opts.delta));
    }
    let index = WordIndex::new(letters.alphabet(), max_weight);
    let rule = PanelRule::new(opts.nodes);
    let mut panels = 1;
    let mut coarse = transport(letters, &index, &rule, panels);
    while panels < opts.max_panels {
        let fine = transport(letters, &index, &rule, 2 * panels);
        panels *= 2;
        let mut err: f64 = 0.0;
        let mut ok = true;
        for (a, b) in coarse.iter().zip(&fine) {
            let d = (a - b).norm();
            err = err.max(d);
            ok &= d <= opts.tol * b.norm().max(1.0);
        }
        if !err.is_finite() {
            return Err(HyperlogError::QuadratureFailure("non-finite values".into()));
        }
        if ok {
            return Ok(PathEvaluation {
                base: complex_pairs(base),
                end: complex_pairs(end),
                index,
                values: fine,
                error_estimate: err,
                panels,
            });
        }
        coarse = fine;
    }
    Err(HyperlogError::QuadratureFailure(format!("no agreement with {} panels", opts.max_panels)))
}

/// Forms `dz / (z - b_k)` on the line, `k = 1..s`, infinity implicit.
#[derive(Clone, Debug)]
pub struct LogFormBasis {
    pub branch_points: Vec<Rational>,
}

impl LogFormBasis {
    pub fn new(branch_points: Vec<Rational>) -> Result<Self> {
        for (i, a) in branch_points.iter().enumerate() {
            if branch_points[..i].contains(a) {
                return Err(HyperlogError::NonGeneric(format!("repeated branch point {a}")));
            }
        }
        Ok(Self { branch_points })
    }
}

/// Letters of a [`LogFormBasis`] along the segment `[base, end]`.
pub struct SegmentLetters {
    points: Vec<Complex64>,
    base: Complex64,
    end: Complex64,
}

impl SegmentLetters {
    pub fn new(basis: &LogFormBasis, base: Complex64, end: Complex64) -> Self {
        let points = basis.branch_points.iter().map(|b| Complex64::new(rational_to_f64(b), 0.0)).collect();
        Self { points, base, end }
    }
}

impl PathLetters for SegmentLetters {
    fn alphabet(&self) -> usize {
        self.points.len()
    }

    fn eval(&self, t: f64, out: &mut [Complex64]) {
        let v = self.end - self.base;
        let z = self.base + v * t;
        for (o, b) in out.iter_mut().zip(&self.points) {
            *o = v / (z - b);
        }
    }

    fn clearance(&self) -> f64 {
        // exact distance from each branch point to the segment
        let v = self.end - self.base;
        self.points
            .iter()
            .map(|b| {
                let t = if v.norm_sqr() == 0.0 { 0.0 } else { ((b - self.base) * v.conj()).re / v.norm_sqr() };
                (self.base + v * t.clamp(0.0, 1.0) - b).norm()
            })
            .fold(f64::INFINITY, f64::min)
    }

    fn clearance_at(&self, t: f64) -> f64 {
        let z = self.base + (self.end - self.base) * t;
        self.points.iter().map(|b| (z - b).norm()).fold(f64::INFINITY, f64::min)
    }
}

/// Word values along the segment from `base` to `end` for the forms of `basis`.
pub fn evaluate_words(
    basis: &LogFormBasis,
    base: Complex64,
    end: Complex64,
    max_weight: usize,
    opts: &QuadratureOptions,
) -> Result<PathEvaluation> {
    if max_weight > 5 {
        return Err(HyperlogError::QuadratureFailure(format!("weight {max_weight} exceeds 5")));
    }
    evaluate_path(&SegmentLetters::new(basis, base, end), &[base], &[end], max_weight, opts)
}
