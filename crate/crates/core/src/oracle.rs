//! Floating-point local search for low-rank sum-of-squares factors.
//!
//! A factor matrix `C` has one row per square and one column per grid cell.
//! Its Gram matrix `G = CᵀC` expands to a biquadratic form: the coefficient of
//! a canonical monomial is the sum of `G[a][b]` over all ordered cell pairs
//! `(a, b)` whose product lands on it. The residual is the squared distance
//! of that expansion from the target. Nothing here is a proof; a failed
//! search is numeric evidence only.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::algebra::{BilinearForm, BiquadForm, Monomial, Rational, Scalar, SosDecomposition};
use crate::error::{Error, Result};

/// `rank × (m·n)` real matrix; entry `(t, i·n + j)` is the coefficient of
/// `x_i y_j` in the `t`-th square.
#[derive(Clone, Debug, PartialEq)]
pub struct FactorMatrix {
    rank: usize,
    m: usize,
    n: usize,
    data: Vec<f64>,
}

impl FactorMatrix {
    pub fn zeros(rank: usize, m: usize, n: usize) -> Self {
        Self {
            rank,
            m,
            n,
            data: vec![0.0; rank * m * n],
        }
    }

    /// Row-major `rank × (m·n)` data.
    pub fn from_data(rank: usize, m: usize, n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rank * m * n {
            return Err(Error::InvalidParameter(alloc::format!(
                "factor data has {} entries, expected {}",
                data.len(),
                rank * m * n
            )));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(
                "factor entries must be finite".into(),
            ));
        }
        Ok(Self { rank, m, n, data })
    }

    pub fn from_decomposition(d: &SosDecomposition) -> Self {
        let (m, n) = d.target_dims();
        let mut out = Self::zeros(d.len(), m, n);
        for (t, sq) in d.squares().iter().enumerate() {
            for ((i, j), c) in sq.entries() {
                out.set(t, i, j, c.to_f64());
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.m, self.n)
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn get(&self, t: usize, i: usize, j: usize) -> f64 {
        self.data[t * self.m * self.n + i * self.n + j]
    }

    pub fn set(&mut self, t: usize, i: usize, j: usize, v: f64) {
        let w = self.m * self.n;
        self.data[t * w + i * self.n + j] = v;
    }

    pub fn row(&self, t: usize) -> &[f64] {
        let w = self.m * self.n;
        &self.data[t * w..(t + 1) * w]
    }

    /// Appends an all-zero square; the expansion is unchanged.
    pub fn with_zero_row(&self) -> Self {
        let mut data = self.data.clone();
        data.extend(core::iter::repeat_n(0.0, self.m * self.n));
        Self {
            rank: self.rank + 1,
            data,
            ..*self
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        libm::sqrt(self.data.iter().map(|v| v * v).sum())
    }

    /// Rounds every entry to `q·√d` (small square-free `d`, small
    /// denominators) when one lies within `1e-9`; `None` if some entry is
    /// not recognizable.
    pub fn to_exact(&self) -> Option<SosDecomposition> {
        let mut d = SosDecomposition::new(self.m, self.n);
        for t in 0..self.rank {
            let mut sq = BilinearForm::zero(self.m, self.n);
            for i in 0..self.m {
                for j in 0..self.n {
                    let c = recognize(self.get(t, i, j))?;
                    if !c.is_zero() {
                        sq.add((i, j), c).ok()?;
                    }
                }
            }
            d.push(sq).ok()?;
        }
        Some(d)
    }
}

const RECOGNIZE_TOL: f64 = 1e-9;
const MAX_RADICAND: u64 = 30;
const MAX_DENOMINATOR: i64 = 1000;

fn recognize(x: f64) -> Option<Scalar> {
    if x.abs() < RECOGNIZE_TOL {
        return Some(Scalar::zero());
    }
    for d in (1..=MAX_RADICAND).filter(|&d| is_square_free(d)) {
        let q = x / libm::sqrt(d as f64);
        if let Some(r) = small_rational(q) {
            let back = r.to_f64().unwrap_or(f64::NAN) * libm::sqrt(d as f64);
            if (back - x).abs() < RECOGNIZE_TOL {
                return Some(Scalar::radical(r, d));
            }
        }
    }
    None
}

fn is_square_free(d: u64) -> bool {
    (2..)
        .take_while(|p| p * p <= d)
        .all(|p| !d.is_multiple_of(p * p))
}

/// Best approximation with denominator at most `MAX_DENOMINATOR`, by
/// continued fractions.
fn small_rational(x: f64) -> Option<Rational> {
    let (mut h0, mut h1) = (0i64, 1i64);
    let (mut k0, mut k1) = (1i64, 0i64);
    let mut v = x;
    for _ in 0..40 {
        let a = libm::floor(v);
        if a.abs() > 1e12 {
            return None;
        }
        let a = a as i64;
        let h2 = a.checked_mul(h1)?.checked_add(h0)?;
        let k2 = a.checked_mul(k1)?.checked_add(k0)?;
        if k2 > MAX_DENOMINATOR {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = v - a as f64;
        if frac.abs() < 1e-12 {
            break;
        }
        v = 1.0 / frac;
    }
    (k1 != 0).then(|| Rational::new(h1.into(), k1.into()))
}

/// Target coefficients laid out for fast residual evaluation.
#[derive(Clone, Debug)]
pub struct Target {
    m: usize,
    n: usize,
    /// Monomial index of the ordered cell pair `(a, b)`, row-major.
    pair_key: Vec<usize>,
    values: Vec<f64>,
    trace: f64,
}

impl Target {
    pub fn new(f: &BiquadForm) -> Self {
        let (m, n) = f.dims();
        let w = m * n;
        let mut index = BTreeMap::new();
        let mut pair_key = Vec::with_capacity(w * w);
        for a in 0..w {
            for b in 0..w {
                let mono = Monomial::from_cells((a / n, a % n), (b / n, b % n));
                let next = index.len();
                pair_key.push(*index.entry(mono).or_insert(next));
            }
        }
        let mut values = vec![0.0; index.len()];
        for (mono, c) in f.monomials() {
            values[index[mono]] = c.to_f64();
        }
        let trace = (0..w)
            .filter_map(|a| f.square_coeff((a / n, a % n)))
            .map(Scalar::to_f64)
            .sum();
        Self {
            m,
            n,
            pair_key,
            values,
            trace,
        }
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.m, self.n)
    }

    fn check(&self, c: &FactorMatrix) -> Result<()> {
        if c.dims() != self.dims() {
            return Err(Error::DimensionMismatch {
                expected: self.dims(),
                found: c.dims(),
            });
        }
        Ok(())
    }

    /// Expanded-minus-target coefficient per monomial.
    fn differences(&self, c: &FactorMatrix) -> Vec<f64> {
        let w = self.m * self.n;
        let mut diff: Vec<f64> = self.values.iter().map(|v| -v).collect();
        for a in 0..w {
            for b in 0..w {
                let g: f64 = (0..c.rank)
                    .map(|t| c.data[t * w + a] * c.data[t * w + b])
                    .sum();
                diff[self.pair_key[a * w + b]] += g;
            }
        }
        diff
    }

    pub fn residual(&self, c: &FactorMatrix) -> Result<f64> {
        self.check(c)?;
        Ok(self.residual_unchecked(c))
    }

    fn residual_unchecked(&self, c: &FactorMatrix) -> f64 {
        self.differences(c).iter().map(|d| d * d).sum()
    }

    /// `∂r/∂C[t][a] = 4 Σ_b D[a][b] C[t][b]`, with `D[a][b]` the difference
    /// on the monomial of `(a, b)`.
    pub fn gradient(&self, c: &FactorMatrix) -> Result<FactorMatrix> {
        self.check(c)?;
        Ok(self.value_and_gradient(c).1)
    }

    fn value_and_gradient(&self, c: &FactorMatrix) -> (f64, FactorMatrix) {
        let w = self.m * self.n;
        let diff = self.differences(c);
        let mut g = FactorMatrix::zeros(c.rank, self.m, self.n);
        for t in 0..c.rank {
            let row = &c.data[t * w..(t + 1) * w];
            for a in 0..w {
                let s: f64 = (0..w)
                    .map(|b| diff[self.pair_key[a * w + b]] * row[b])
                    .sum();
                g.data[t * w + a] = 4.0 * s;
            }
        }
        (diff.iter().map(|d| d * d).sum(), g)
    }
}

/// Squared coefficient distance between `f` and the expansion of `c`.
pub fn residual(f: &BiquadForm, c: &FactorMatrix) -> Result<f64> {
    Target::new(f).residual(c)
}

/// Largest entrywise `|analytic − central| / max(|analytic|, |central|, 1)`.
pub fn gradient_check(f: &BiquadForm, c: &FactorMatrix, h: f64) -> Result<f64> {
    if h.is_nan() || h <= 0.0 {
        return Err(Error::InvalidParameter("step h must be positive".into()));
    }
    let target = Target::new(f);
    let analytic = target.gradient(c)?;
    let mut probe = c.clone();
    let mut worst = 0.0f64;
    for idx in 0..c.data.len() {
        let x = c.data[idx];
        probe.data[idx] = x + h;
        let up = target.residual_unchecked(&probe);
        probe.data[idx] = x - h;
        let down = target.residual_unchecked(&probe);
        probe.data[idx] = x;
        let fd = (up - down) / (2.0 * h);
        let a = analytic.data[idx];
        worst = worst.max((a - fd).abs() / a.abs().max(fd.abs()).max(1.0));
    }
    Ok(worst)
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchConfig {
    pub rank: usize,
    pub restarts: usize,
    pub max_iters: usize,
    pub tol: f64,
    pub seed: u64,
}

impl SearchConfig {
    pub const DEFAULT_RESTARTS: usize = 50;
    pub const DEFAULT_MAX_ITERS: usize = 5000;
    pub const DEFAULT_TOL: f64 = 1e-8;
    pub const DEFAULT_SEED: u64 = 0x5eed;

    pub fn new(rank: usize) -> Self {
        Self {
            rank,
            restarts: Self::DEFAULT_RESTARTS,
            max_iters: Self::DEFAULT_MAX_ITERS,
            tol: Self::DEFAULT_TOL,
            seed: Self::DEFAULT_SEED,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchResult {
    pub best_residual: f64,
    pub success: bool,
    pub factor: Option<FactorMatrix>,
    /// Restarts actually run; the search stops at the first success.
    pub restarts_run: usize,
}

const GRAD_STOP: f64 = 1e-10;
const ARMIJO: f64 = 1e-4;
const MIN_STEP: f64 = 1e-18;

/// Outcome of one local descent.
#[derive(Clone, Debug, PartialEq)]
pub struct Descent {
    pub factor: FactorMatrix,
    pub residual: f64,
    pub iterations: usize,
}

/// Gradient descent with Armijo backtracking from `start`.
pub fn descend(f: &BiquadForm, start: FactorMatrix, max_iters: usize, tol: f64) -> Result<Descent> {
    let target = Target::new(f);
    target.check(&start)?;
    Ok(descend_on(&target, start, max_iters, tol))
}

fn descend_on(target: &Target, mut c: FactorMatrix, max_iters: usize, tol: f64) -> Descent {
    let (mut r, mut g) = target.value_and_gradient(&c);
    let mut step = 1e-2;
    let mut trial = c.clone();
    let mut iterations = 0;
    while iterations < max_iters && r >= tol {
        let g2: f64 = g.data.iter().map(|v| v * v).sum();
        if libm::sqrt(g2) < GRAD_STOP {
            break;
        }
        let mut eta = step;
        let accepted = loop {
            for ((t, &x), &gx) in trial.data.iter_mut().zip(&c.data).zip(&g.data) {
                *t = x - eta * gx;
            }
            let rt = target.residual_unchecked(&trial);
            if rt <= r - ARMIJO * eta * g2 {
                break true;
            }
            eta *= 0.5;
            if eta < MIN_STEP {
                break false;
            }
        };
        if !accepted {
            break;
        }
        core::mem::swap(&mut c, &mut trial);
        let (r_new, g_new) = target.value_and_gradient(&c);
        // Barzilai-Borwein trial step for the next line search
        let (mut sy, mut ss) = (0.0, 0.0);
        for idx in 0..c.data.len() {
            let s = c.data[idx] - trial.data[idx];
            sy += s * (g_new.data[idx] - g.data[idx]);
            ss += s * s;
        }
        step = if sy > 0.0 { ss / sy } else { eta * 2.0 };
        (r, g) = (r_new, g_new);
        iterations += 1;
    }
    Descent {
        factor: c,
        residual: r,
        iterations,
    }
}

/// Gaussian start with entries `N(0, trace/R)`; restart `k` uses stream `k`
/// of the seeded generator.
pub fn random_start(target: &Target, rank: usize, seed: u64, restart: u64) -> FactorMatrix {
    let (m, n) = target.dims();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(restart);
    let scale = libm::sqrt(target.trace.max(f64::MIN_POSITIVE) / rank.max(1) as f64);
    let data = (0..rank * m * n)
        .map(|_| scale * rng.sample::<f64, _>(StandardNormal))
        .collect();
    FactorMatrix { rank, m, n, data }
}

/// Multi-start local search for a `config.rank`-square factor of `f`.
pub fn search(f: &BiquadForm, config: &SearchConfig) -> Result<SearchResult> {
    if config.rank == 0 {
        return Err(Error::InvalidParameter("rank must be at least 1".into()));
    }
    if config.tol.is_nan() || config.tol <= 0.0 {
        return Err(Error::InvalidParameter("tolerance must be positive".into()));
    }
    let target = Target::new(f);
    let mut best: Option<Descent> = None;
    let mut restarts_run = 0;
    for k in 0..config.restarts {
        restarts_run += 1;
        let start = random_start(&target, config.rank, config.seed, k as u64);
        let d = descend_on(&target, start, config.max_iters, config.tol);
        let done = d.residual < config.tol;
        if best.as_ref().is_none_or(|b| d.residual < b.residual) {
            best = Some(d);
        }
        if done {
            break;
        }
    }
    Ok(match best {
        Some(d) => SearchResult {
            best_residual: d.residual,
            success: d.residual < config.tol,
            factor: Some(d.factor),
            restarts_run,
        },
        None => SearchResult {
            best_residual: f64::INFINITY,
            success: false,
            factor: None,
            restarts_run,
        },
    })
}
