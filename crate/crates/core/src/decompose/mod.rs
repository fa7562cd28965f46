//! Constructive sum-of-squares decomposers.
//!
//! Each decomposer checks its own output with exact expansion before
//! returning it; a mismatch surfaces as [`Error::Internal`] and is never
//! handed back to the caller.

mod diagonal;

pub use diagonal::{
    decompose_diagonal_3x3, decompose_diagonal_3x3_traced, DiagonalCase, DiagonalTrace,
};

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::algebra::{
    is_perfect_square, support, BilinearForm, BiquadForm, Cell, Rational, Rectangle, Scalar,
    SosDecomposition,
};
use crate::error::{Error, Result};
use crate::families::{self, RectangleWeights};

pub(crate) fn verified(
    target: &BiquadForm,
    d: SosDecomposition,
    what: &str,
) -> Result<SosDecomposition> {
    if d.verify(target)? {
        Ok(d)
    } else {
        Err(Error::Internal(format!(
            "{what} produced a decomposition that does not expand to its target"
        )))
    }
}

fn lin(m: usize, n: usize, entries: &[(Cell, Scalar)]) -> BilinearForm {
    BilinearForm::from_entries(m, n, entries.iter().cloned()).expect("indices checked by caller")
}

/// Nonnegative rational coefficient of every square term, or the reason why
/// the form has none.
pub(crate) fn diagonal_coeffs(f: &BiquadForm) -> Result<Vec<(Cell, Rational)>> {
    if !f.is_diagonal() {
        return Err(Error::NotDiagonal);
    }
    f.monomials()
        .map(|(mo, c)| {
            let cell = (mo.i, mo.j);
            let q = c
                .to_rational()
                .ok_or(Error::IrrationalCoefficient(cell.0, cell.1))?;
            if q.is_negative() {
                return Err(Error::NotPsdDiagonal(cell.0, cell.1));
            }
            Ok((cell, q))
        })
        .collect()
}

/// One square `(√a_ij x_i y_j)²` per support cell.
pub fn decompose_singles(f: &BiquadForm) -> Result<SosDecomposition> {
    let (m, n) = f.dims();
    let mut d = SosDecomposition::new(m, n);
    for (cell, q) in diagonal_coeffs(f)? {
        d.push(BilinearForm::term(m, n, cell, Scalar::sqrt_of(&q)?)?)?;
    }
    verified(f, d, "singles")
}

/// `T = (x_i y_k + x_j y_l)² + (x_i y_l − x_j y_k)²`.
pub fn decompose_t(
    m: usize,
    n: usize,
    i: usize,
    j: usize,
    k: usize,
    l: usize,
) -> Result<SosDecomposition> {
    let target = families::gen_t(m, n, i, j, k, l)?;
    let one = Scalar::one;
    let d = SosDecomposition::from_squares(
        m,
        n,
        vec![
            lin(m, n, &[((i, k), one()), ((j, l), one())]),
            lin(m, n, &[((i, l), one()), ((j, k), -one())]),
        ],
    )?;
    verified(&target, d, "rectangle decomposer")
}

/// Swaps the two columns of a weighted rectangle when that makes
/// `c = a_ik·a_jl − a_il·a_jk` nonnegative. The form is unchanged.
pub fn orient_rectangle(
    weights: &RectangleWeights,
    rect: Rectangle,
) -> (RectangleWeights, Rectangle) {
    if weights.determinant().is_negative() {
        let swapped = RectangleWeights::new(
            weights.il.clone(),
            weights.jk.clone(),
            weights.ik.clone(),
            weights.jl.clone(),
        );
        let rect = Rectangle {
            k: rect.l,
            l: rect.k,
            ..rect
        };
        (swapped, rect)
    } else {
        (weights.clone(), rect)
    }
}

/// Weighted rectangle with `c ≥ 0`: with `α = a_il·a_jk / a_ik`,
///
/// `(√a_ik x_i y_k + √α x_j y_l)² + (√a_il x_i y_l − √a_jk x_j y_k)²`
///
/// covers everything except `(a_jl − α) x_j² y_l²`, which becomes a third
/// square when nonzero. Since `a_jl − α = c / a_ik`, the count is 2 exactly
/// when `c = 0`.
pub fn decompose_w(
    m: usize,
    n: usize,
    weights: &RectangleWeights,
    rect: Rectangle,
) -> Result<SosDecomposition> {
    let target = families::gen_w(m, n, weights, rect)?;
    if weights.determinant().is_negative() {
        return Err(Error::IndefiniteSplit);
    }
    let RectangleWeights { ik, jl, il, jk } = weights;
    let alpha = il * jk / ik;
    let leftover = jl - &alpha;
    let Rectangle { i, j, k, l } = rect;
    let root = |q: &Rational| Scalar::sqrt_of(q);
    let mut squares = vec![
        lin(m, n, &[((i, k), root(ik)?), ((j, l), root(&alpha)?)]),
        lin(m, n, &[((i, l), root(il)?), ((j, k), -root(jk)?)]),
    ];
    if !leftover.is_zero() {
        squares.push(lin(m, n, &[((j, l), root(&leftover)?)]));
    }
    let d = SosDecomposition::from_squares(m, n, squares)?;
    verified(&target, d, "weighted rectangle decomposer")
}

/// The four-square identity for the all-ones `3 × 3` form.
pub fn decompose_full9() -> SosDecomposition {
    let one = Scalar::one;
    let squares = vec![
        lin(3, 3, &[((0, 0), one()), ((1, 1), one()), ((2, 2), one())]),
        lin(3, 3, &[((1, 2), one()), ((2, 1), -one())]),
        lin(3, 3, &[((2, 0), one()), ((0, 2), -one())]),
        lin(3, 3, &[((0, 1), one()), ((1, 0), -one())]),
    ];
    let d = SosDecomposition::from_squares(3, 3, squares).expect("3x3 squares");
    let target = families::gen_full(3, 3).expect("3x3 form");
    verified(&target, d, "four-square identity").expect("identity verified in tests")
}

/// Lagrange's identity for the all-ones `m × m` form:
/// `(Σ x_i y_i)² + Σ_{i<j} (x_i y_j − x_j y_i)²`.
pub fn decompose_lagrange(m: usize) -> Result<SosDecomposition> {
    let target = families::gen_full(m, m)?;
    let one = Scalar::one;
    let mut d = SosDecomposition::new(m, m);
    d.push(lin(
        m,
        m,
        &(0..m).map(|i| ((i, i), one())).collect::<Vec<_>>(),
    ))?;
    for i in 0..m {
        for j in i + 1..m {
            d.push(lin(m, m, &[((i, j), one()), ((j, i), -one())]))?;
        }
    }
    verified(&target, d, "Lagrange identity")
}

/// The six-square decomposition of `P_{3,3,6} + (x_1 y_3 + x_2 y_1)²`.
pub fn decompose_p_plus() -> SosDecomposition {
    let half = || Scalar::from_ratio(1, 2);
    let root3_half = || Scalar::radical(Rational::new(1.into(), 2.into()), 3);
    let one = Scalar::one;
    let squares = vec![
        lin(
            3,
            3,
            &[((0, 0), half()), ((1, 2), one()), ((0, 1), root3_half())],
        ),
        lin(
            3,
            3,
            &[((1, 0), half()), ((0, 2), one()), ((1, 1), -root3_half())],
        ),
        lin(3, 3, &[((0, 0), root3_half()), ((0, 1), -half())]),
        lin(3, 3, &[((1, 1), half()), ((1, 0), root3_half())]),
        lin(3, 3, &[((2, 0), one())]),
        lin(3, 3, &[((2, 2), one())]),
    ];
    let d = SosDecomposition::from_squares(3, 3, squares).expect("3x3 squares");
    verified(&families::gen_p_plus(), d, "six-square decomposition")
        .expect("identity verified in tests")
}

fn check_simple_3x3(f: &BiquadForm) -> Result<()> {
    if f.dims() != (3, 3) {
        return Err(Error::NotSimple(format!(
            "expected a 3x3 form, got {}x{}",
            f.dims().0,
            f.dims().1
        )));
    }
    if !f.is_simple() {
        return Err(Error::NotSimple(
            "every monomial must be some x_i^2 y_j^2 with coefficient 1".into(),
        ));
    }
    Ok(())
}

/// Simple `3 × 3` forms in at most six squares: the four-square identity on
/// the full grid, one rectangle plus singles on seven or eight cells, and
/// singles otherwise.
pub fn decompose_simple_3x3(f: &BiquadForm) -> Result<SosDecomposition> {
    check_simple_3x3(f)?;
    let s = support(f)?;
    match s.len() {
        9 => Ok(decompose_full9()),
        7 | 8 => {
            let rect = s.first_rectangle().ok_or_else(|| {
                Error::Internal(format!("no rectangle inside a {}-cell support", s.len()))
            })?;
            let mut d = decompose_t(3, 3, rect.i, rect.j, rect.k, rect.l)?;
            let rest = f.checked_sub(&d.expand()?)?;
            d.extend(decompose_singles(&rest)?)?;
            verified(f, d, "rectangle peeling")
        }
        _ => decompose_singles(f),
    }
}

/// Which decomposer [`decompose_auto`] picked.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Zero,
    PerfectSquare,
    PPlus,
    Simple3x3,
    Diagonal3x3,
    Rectangle,
    WeightedRectangle,
    Lagrange,
    Singles,
}

impl Strategy {
    pub fn name(self) -> &'static str {
        match self {
            Strategy::Zero => "zero",
            Strategy::PerfectSquare => "perfect-square",
            Strategy::PPlus => "p-plus",
            Strategy::Simple3x3 => "simple-3x3",
            Strategy::Diagonal3x3 => "diagonal-3x3",
            Strategy::Rectangle => "rectangle",
            Strategy::WeightedRectangle => "weighted-rectangle",
            Strategy::Lagrange => "lagrange",
            Strategy::Singles => "singles",
        }
    }
}

/// Rectangle and weights when the support is exactly one rectangle.
fn as_rectangle(f: &BiquadForm) -> Option<(Rectangle, RectangleWeights)> {
    let s = support(f).ok()?;
    if s.len() != 4 {
        return None;
    }
    let rect = s.first_rectangle()?;
    let w = |c: Cell| f.square_coeff(c).and_then(Scalar::to_rational);
    let weights = RectangleWeights::new(
        w((rect.i, rect.k))?,
        w((rect.j, rect.l))?,
        w((rect.i, rect.l))?,
        w((rect.j, rect.k))?,
    );
    weights
        .in_cell_order()
        .iter()
        .all(|q| q.is_positive())
        .then_some((rect, weights))
}

/// Picks the applicable decomposer for `f`.
pub fn decompose_auto(f: &BiquadForm) -> Result<(SosDecomposition, Strategy)> {
    let (m, n) = f.dims();
    if f.is_zero() {
        return Ok((SosDecomposition::new(m, n), Strategy::Zero));
    }
    if (m, n) == (3, 3) && *f == families::gen_p_plus() {
        return Ok((decompose_p_plus(), Strategy::PPlus));
    }
    if let Some(l) = is_perfect_square(f) {
        let d = SosDecomposition::from_squares(m, n, vec![l])?;
        return Ok((verified(f, d, "perfect square")?, Strategy::PerfectSquare));
    }
    if (m, n) == (3, 3) && f.is_simple() {
        return Ok((decompose_simple_3x3(f)?, Strategy::Simple3x3));
    }
    if (m, n) == (3, 3) && f.is_diagonal() {
        return Ok((decompose_diagonal_3x3(f)?, Strategy::Diagonal3x3));
    }
    if let Some((rect, weights)) = as_rectangle(f) {
        if f.is_simple() {
            let d = decompose_t(m, n, rect.i, rect.j, rect.k, rect.l)?;
            return Ok((d, Strategy::Rectangle));
        }
        let (weights, rect) = orient_rectangle(&weights, rect);
        return Ok((
            decompose_w(m, n, &weights, rect)?,
            Strategy::WeightedRectangle,
        ));
    }
    if m == n && *f == families::gen_full(m, n)? {
        return Ok((decompose_lagrange(m)?, Strategy::Lagrange));
    }
    if f.is_diagonal() {
        return Ok((decompose_singles(f)?, Strategy::Singles));
    }
    Err(Error::InvalidParameter(
        "no decomposer applies: expected a diagonal form, P_+, or a perfect square".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{expand_squares, Monomial};

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn singles() {
        let p336 = families::gen_p(3, 3, 6).unwrap();
        assert_eq!(decompose_singles(&p336).unwrap().len(), 6);

        let mut f = BiquadForm::zero(3, 3).unwrap();
        f.add_term(Monomial::square((0, 1)), Scalar::from_integer(3))
            .unwrap();
        let d = decompose_singles(&f).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(
            d.squares()[0].coeff((0, 1)),
            Some(&Scalar::radical(r(1, 1), 3))
        );

        assert_eq!(
            decompose_singles(&families::gen_full(3, 3).unwrap())
                .unwrap()
                .len(),
            9
        );

        let mut neg = BiquadForm::zero(2, 2).unwrap();
        neg.add_term(Monomial::square((1, 0)), Scalar::from_integer(-1))
            .unwrap();
        assert_eq!(decompose_singles(&neg), Err(Error::NotPsdDiagonal(1, 0)));
        assert_eq!(
            decompose_singles(&families::gen_p_plus()),
            Err(Error::NotDiagonal)
        );
    }

    #[test]
    fn rectangle() {
        let d = decompose_t(2, 2, 0, 1, 0, 1).unwrap();
        assert_eq!(d.len(), 2);
        let d = decompose_t(3, 3, 1, 2, 0, 2).unwrap();
        let expected0 = lin(3, 3, &[((1, 0), Scalar::one()), ((2, 2), Scalar::one())]);
        let expected1 = lin(3, 3, &[((1, 2), Scalar::one()), ((2, 0), -Scalar::one())]);
        assert_eq!(d.squares(), &[expected0, expected1]);
        assert!(is_perfect_square(&families::gen_t(3, 3, 1, 2, 0, 2).unwrap()).is_none());
        assert_eq!(decompose_t(3, 3, 1, 1, 0, 2), Err(Error::DegenerateIndices));
    }

    #[test]
    fn weighted_rectangle() {
        let rect = Rectangle::new(0, 1, 0, 1).unwrap();
        let ones = RectangleWeights::from_integers(1, 1, 1, 1);
        assert_eq!(decompose_w(2, 2, &ones, rect).unwrap().len(), 2);

        // alpha = 1·1/2, leftover 3 − 1/2 = 5/2
        let w = RectangleWeights::from_integers(2, 3, 1, 1);
        let d = decompose_w(2, 2, &w, rect).unwrap();
        assert_eq!(d.len(), 3);
        let third = &d.squares()[2];
        assert_eq!(
            third.coeff((1, 1)),
            Some(&Scalar::sqrt_of(&r(5, 2)).unwrap())
        );

        let bad = RectangleWeights::from_integers(1, 1, 2, 3);
        assert_eq!(decompose_w(2, 2, &bad, rect), Err(Error::IndefiniteSplit));
        let (w2, rect2) = orient_rectangle(&bad, rect);
        assert_eq!(
            families::gen_w(2, 2, &w2, rect2).unwrap(),
            families::gen_w(2, 2, &bad, rect).unwrap()
        );
        assert_eq!(decompose_w(2, 2, &w2, rect2).unwrap().len(), 3);
    }

    #[test]
    fn four_square_identity() {
        let d = decompose_full9();
        assert_eq!(d.len(), 4);
        assert_eq!(
            expand_squares(&d).unwrap(),
            families::gen_p(3, 3, 9).unwrap()
        );
        let first = &d.squares()[0];
        assert_eq!(first.eval_f64(&[1.0, 0.0, 0.0], &[1.0, 0.0, 0.0]), 1.0);
    }

    #[test]
    fn lagrange_identity() {
        assert_eq!(decompose_lagrange(2).unwrap().len(), 2);
        assert_eq!(decompose_lagrange(4).unwrap().len(), 7);
        let l3 = decompose_lagrange(3).unwrap();
        let canon = |d: &SosDecomposition| {
            let mut v: Vec<BilinearForm> = d
                .squares()
                .iter()
                .map(|s| {
                    // fix sign by the first coefficient
                    let first_neg = s.entries().next().is_some_and(|(_, c)| c.is_negative());
                    if first_neg {
                        -s
                    } else {
                        s.clone()
                    }
                })
                .collect();
            v.sort_by_key(|s| alloc::format!("{s}"));
            v
        };
        assert_eq!(canon(&l3), canon(&decompose_full9()));
    }

    #[test]
    fn p_plus() {
        let d = decompose_p_plus();
        assert_eq!(d.len(), 6);
        assert_eq!(expand_squares(&d).unwrap(), families::gen_p_plus());
        let third = lin(
            3,
            3,
            &[
                ((0, 0), Scalar::radical(r(1, 2), 3)),
                ((0, 1), Scalar::from_ratio(-1, 2)),
            ],
        );
        assert_eq!(d.squares()[2], third);
    }

    #[test]
    fn simple_3x3_strategies() {
        assert_eq!(
            decompose_simple_3x3(&families::gen_p(3, 3, 9).unwrap())
                .unwrap()
                .len(),
            4
        );
        let eight = families::gen_p(3, 3, 8).unwrap();
        assert_eq!(decompose_simple_3x3(&eight).unwrap().len(), 6);
        let seven = families::gen_p(3, 3, 7).unwrap();
        assert_eq!(decompose_simple_3x3(&seven).unwrap().len(), 5);
        assert_eq!(
            decompose_simple_3x3(&families::gen_p(3, 3, 6).unwrap())
                .unwrap()
                .len(),
            6
        );
        assert!(matches!(
            decompose_simple_3x3(&families::gen_p_plus()),
            Err(Error::NotSimple(_))
        ));
        assert!(matches!(
            decompose_simple_3x3(&families::gen_cyclic(4).unwrap()),
            Err(Error::NotSimple(_))
        ));
    }

    #[test]
    fn auto_dispatch() {
        let cases = [
            (families::gen_p_plus(), Strategy::PPlus, 6),
            (families::gen_p(3, 3, 9).unwrap(), Strategy::Simple3x3, 4),
            (
                families::gen_p(3, 3, 1).unwrap(),
                Strategy::PerfectSquare,
                1,
            ),
            (
                families::gen_t(4, 4, 0, 3, 1, 2).unwrap(),
                Strategy::Rectangle,
                2,
            ),
            (families::gen_full(4, 4).unwrap(), Strategy::Lagrange, 7),
            (families::gen_cyclic(5).unwrap(), Strategy::Singles, 10),
        ];
        for (f, strategy, count) in cases {
            let (d, s) = decompose_auto(&f).unwrap();
            assert_eq!(s, strategy);
            assert_eq!(d.len(), count);
            assert!(d.verify(&f).unwrap());
        }
        let w = families::gen_w(
            3,
            4,
            &RectangleWeights::from_integers(1, 1, 2, 3),
            Rectangle::new(0, 2, 1, 3).unwrap(),
        )
        .unwrap();
        let (d, s) = decompose_auto(&w).unwrap();
        assert_eq!(s, Strategy::WeightedRectangle);
        assert_eq!(d.len(), 3);
        let (d, s) = decompose_auto(&BiquadForm::zero(3, 3).unwrap()).unwrap();
        assert_eq!((d.len(), s), (0, Strategy::Zero));
    }
}
