//! Seven-square decompositions of nonnegative `3 × 3` diagonal forms.

use alloc::format;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use super::{decompose_singles, decompose_w, diagonal_coeffs, orient_rectangle, verified};
use crate::algebra::{BiquadForm, Cell, Rational, Rectangle, SosDecomposition};
use crate::error::{Error, Result};
use crate::families::RectangleWeights;

const PERMUTATIONS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

/// How a diagonal form was decomposed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DiagonalCase {
    /// At most seven positive coefficients, one square each.
    Singles { positive: usize },
    /// Exactly one zero coefficient; the rectangle opposite it is peeled off.
    OneZero { zero: Cell, rectangle: Rectangle },
    /// All nine positive. `rows`/`cols` relabel the grid so that the split
    /// `α = a_12·a_21/a_11 ≤ a_22` holds in the relabelled coordinates.
    FullSplit {
        rows: [usize; 3],
        cols: [usize; 3],
        beta_zero: bool,
        feasible: usize,
        tried: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalTrace {
    pub case: DiagonalCase,
    pub decomposition: SosDecomposition,
}

/// [`decompose_diagonal_3x3_traced`] without the trace.
pub fn decompose_diagonal_3x3(f: &BiquadForm) -> Result<SosDecomposition> {
    decompose_diagonal_3x3_traced(f).map(|t| t.decomposition)
}

/// Decomposes a `3 × 3` diagonal form with nonnegative rational
/// coefficients into at most seven squares.
pub fn decompose_diagonal_3x3_traced(f: &BiquadForm) -> Result<DiagonalTrace> {
    if f.dims() != (3, 3) {
        return Err(Error::DimensionMismatch {
            expected: (3, 3),
            found: f.dims(),
        });
    }
    let mut a: [[Rational; 3]; 3] = Default::default();
    for ((i, j), q) in diagonal_coeffs(f)? {
        a[i][j] = q;
    }
    let positive = f.len();
    match positive {
        0..=7 => Ok(DiagonalTrace {
            case: DiagonalCase::Singles { positive },
            decomposition: decompose_singles(f)?,
        }),
        8 => one_zero(f, &a),
        _ => full_split(f, &a),
    }
}

fn peel(f: &BiquadForm, mut d: SosDecomposition, what: &str) -> Result<SosDecomposition> {
    let rest = f.checked_sub(&d.expand()?)?;
    d.extend(decompose_singles(&rest)?)?;
    verified(f, d, what)
}

fn one_zero(f: &BiquadForm, a: &[[Rational; 3]; 3]) -> Result<DiagonalTrace> {
    let zero = (0..3)
        .flat_map(|i| (0..3).map(move |j| (i, j)))
        .find(|&(i, j)| a[i][j].is_zero())
        .expect("exactly one zero coefficient");
    let rows: Vec<usize> = (0..3).filter(|&i| i != zero.0).collect();
    let cols: Vec<usize> = (0..3).filter(|&j| j != zero.1).collect();
    let rect = Rectangle::new(rows[0], rows[1], cols[0], cols[1])?;
    let weights = weights_on(a, rect);
    let (weights, rect) = orient_rectangle(&weights, rect);
    let block = decompose_w(3, 3, &weights, rect)?;
    Ok(DiagonalTrace {
        case: DiagonalCase::OneZero {
            zero,
            rectangle: rect,
        },
        decomposition: peel(f, block, "one-zero diagonal decomposer")?,
    })
}

fn weights_on(a: &[[Rational; 3]; 3], rect: Rectangle) -> RectangleWeights {
    RectangleWeights::new(
        a[rect.i][rect.k].clone(),
        a[rect.j][rect.l].clone(),
        a[rect.i][rect.l].clone(),
        a[rect.j][rect.k].clone(),
    )
}

/// Tries one relabelling `(rows, cols)`: split `a_22 = α + β` so the
/// leading block has zero determinant (two squares), then handle the block
/// `(β, a_33, a_23, a_32)` with at most three squares, and the two corner
/// terms `a_13`, `a_31` as singles.
fn split_under(
    f: &BiquadForm,
    a: &[[Rational; 3]; 3],
    rows: [usize; 3],
    cols: [usize; 3],
) -> Result<Option<(SosDecomposition, bool)>> {
    let at = |r: usize, c: usize| &a[rows[r]][cols[c]];
    let alpha = at(0, 1) * at(1, 0) / at(0, 0);
    let beta = at(1, 1) - &alpha;
    if beta.is_negative() {
        return Ok(None);
    }
    let lead_rect = Rectangle::new(rows[0], rows[1], cols[0], cols[1])?;
    let lead = RectangleWeights::new(at(0, 0).clone(), alpha, at(0, 1).clone(), at(1, 0).clone());
    let mut d = decompose_w(3, 3, &lead, lead_rect)?;
    debug_assert_eq!(d.len(), 2);

    let beta_zero = beta.is_zero();
    if !beta_zero {
        let tail_rect = Rectangle::new(rows[1], rows[2], cols[1], cols[2])?;
        let tail =
            RectangleWeights::new(beta, at(2, 2).clone(), at(1, 2).clone(), at(2, 1).clone());
        let (tail, tail_rect) = orient_rectangle(&tail, tail_rect);
        d.extend(decompose_w(3, 3, &tail, tail_rect)?)?;
    }
    Ok(Some((peel(f, d, "split diagonal decomposer")?, beta_zero)))
}

fn full_split(f: &BiquadForm, a: &[[Rational; 3]; 3]) -> Result<DiagonalTrace> {
    let mut best: Option<(SosDecomposition, [usize; 3], [usize; 3], bool)> = None;
    let mut feasible = 0usize;
    let mut tried = 0usize;
    for rows in PERMUTATIONS {
        for cols in PERMUTATIONS {
            tried += 1;
            let Some((d, beta_zero)) = split_under(f, a, rows, cols)? else {
                continue;
            };
            feasible += 1;
            if best.as_ref().is_none_or(|b| d.len() < b.0.len()) {
                best = Some((d, rows, cols, beta_zero));
            }
        }
    }
    let (decomposition, rows, cols, beta_zero) = best.ok_or(Error::PermutationSearchExhausted)?;
    if decomposition.len() > 7 {
        return Err(Error::Internal(format!(
            "split produced {} squares",
            decomposition.len()
        )));
    }
    Ok(DiagonalTrace {
        case: DiagonalCase::FullSplit {
            rows,
            cols,
            beta_zero,
            feasible,
            tried,
        },
        decomposition,
    })
}
