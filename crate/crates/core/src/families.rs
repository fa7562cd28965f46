//! Generators for the named biquadratic forms.
//!
//! All indices are 0-based; `x` indices are rows of the support grid and
//! `y` indices are columns.

use alloc::vec::Vec;

pub use crate::algebra::Rectangle;
use crate::algebra::{BiquadForm, Cell, Monomial, Rational, Scalar, SupportPattern};
use crate::error::{Error, Result};
use num_traits::Signed;

fn check_dims(m: usize, n: usize) -> Result<()> {
    if m < 2 || n < 2 {
        return Err(Error::DimensionTooSmall(m, n));
    }
    Ok(())
}

/// All `m·n` cells in the order used by [`gen_p`]: the main diagonal first,
/// then the diagonals shifted right by 1, 2, ... (columns modulo `n`), each
/// walked by increasing row.
pub fn p_family_order(m: usize, n: usize) -> Vec<Cell> {
    let mut cells: Vec<Cell> = (0..m).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    cells.sort_by_key(|&(i, j)| ((j + n - i % n) % n, i));
    cells
}

/// Simple form `P_{m,n,s}` on the first `s` cells of [`p_family_order`].
pub fn gen_p(m: usize, n: usize, s: usize) -> Result<BiquadForm> {
    check_dims(m, n)?;
    if s == 0 || s > m * n {
        return Err(Error::InvalidParameter(alloc::format!(
            "s = {s} outside 1..={}",
            m * n
        )));
    }
    let cells = p_family_order(m, n).into_iter().take(s);
    BiquadForm::simple(&SupportPattern::from_cells(m, n, cells)?)
}

/// All-ones `m × n` simple form `Σ_{i,j} x_i² y_j²`.
pub fn gen_full(m: usize, n: usize) -> Result<BiquadForm> {
    gen_p(m, n, m * n)
}

/// `Σ_i x_i² y_i² + Σ_i x_i² y_{i+1}²` with the column index taken mod `m`.
pub fn gen_cyclic(m: usize) -> Result<BiquadForm> {
    if m < 3 {
        return Err(Error::InvalidParameter(alloc::format!(
            "cyclic family needs m >= 3, got {m}"
        )));
    }
    let cells = (0..m).flat_map(|i| [(i, i), (i, (i + 1) % m)]);
    BiquadForm::simple(&SupportPattern::from_cells(m, m, cells)?)
}

/// The `m + n` term family: the cyclic-style band on the first `m` columns
/// (wrapping only when `m = n`) plus `x_1² y_j²` for every extra column.
pub fn gen_q(m: usize, n: usize) -> Result<BiquadForm> {
    if m < 3 || n < 3 {
        return Err(Error::InvalidParameter(alloc::format!(
            "Q family needs m, n >= 3, got {m}x{n}"
        )));
    }
    if n < m {
        return Err(Error::InvalidParameter(alloc::format!(
            "Q family needs n >= m, got {m}x{n}; transpose gen_q({n}, {m}) instead"
        )));
    }
    let band = (0..m).flat_map(|i| [(i, i), (i, (i + 1) % n)]);
    let tail = (m..n).map(|j| (0, j));
    BiquadForm::simple(&SupportPattern::from_cells(m, n, band.chain(tail))?)
}

/// Unit rectangle `x_i² y_k² + x_j² y_l² + x_i² y_l² + x_j² y_k²`.
pub fn gen_t(m: usize, n: usize, i: usize, j: usize, k: usize, l: usize) -> Result<BiquadForm> {
    check_dims(m, n)?;
    let rect = Rectangle::new(i, j, k, l)?;
    rect.check_dims(m, n)?;
    BiquadForm::simple(&SupportPattern::from_cells(m, n, rect.cells())?)
}

/// Positive weights of a rectangle form, named after the cells they sit on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RectangleWeights {
    pub ik: Rational,
    pub jl: Rational,
    pub il: Rational,
    pub jk: Rational,
}

impl RectangleWeights {
    pub fn new(ik: Rational, jl: Rational, il: Rational, jk: Rational) -> Self {
        Self { ik, jl, il, jk }
    }

    pub fn from_integers(ik: i64, jl: i64, il: i64, jk: i64) -> Self {
        let r = |v: i64| Rational::from_integer(v.into());
        Self::new(r(ik), r(jl), r(il), r(jk))
    }

    /// `c = a_ik·a_jl − a_il·a_jk`.
    pub fn determinant(&self) -> Rational {
        &self.ik * &self.jl - &self.il * &self.jk
    }

    /// Weights in the cell order of [`Rectangle::cells`].
    pub fn in_cell_order(&self) -> [&Rational; 4] {
        [&self.ik, &self.jl, &self.il, &self.jk]
    }
}

/// Weighted rectangle `a_ik x_i² y_k² + a_jl x_j² y_l² + a_il x_i² y_l² + a_jk x_j² y_k²`.
pub fn gen_w(
    m: usize,
    n: usize,
    weights: &RectangleWeights,
    rect: Rectangle,
) -> Result<BiquadForm> {
    check_dims(m, n)?;
    rect.check_dims(m, n)?;
    let mut form = BiquadForm::zero(m, n)?;
    for (cell, a) in rect.cells().into_iter().zip(weights.in_cell_order()) {
        if !a.is_positive() {
            return Err(Error::NonPositiveCoefficient(cell.0, cell.1));
        }
        form.add_term(Monomial::square(cell), Scalar::from_rational(a.clone()))?;
    }
    Ok(form)
}

/// `P_{3,3,6} + (x_1 y_3 + x_2 y_1)²`.
pub fn gen_p_plus() -> BiquadForm {
    let mut form = gen_p(3, 3, 6).expect("P_{3,3,6} is well formed");
    form.add_unchecked(Monomial::square((0, 2)), Scalar::one());
    form.add_unchecked(Monomial::square((1, 0)), Scalar::one());
    form.add_unchecked(Monomial::new(0, 1, 0, 2), Scalar::from_integer(2));
    form
}

/// Diagonal `m × n` form from a row-major table of rational coefficients.
pub fn gen_diagonal(rows: &[Vec<Rational>]) -> Result<BiquadForm> {
    let scalars: Vec<Vec<Scalar>> = rows
        .iter()
        .map(|r| r.iter().cloned().map(Scalar::from_rational).collect())
        .collect();
    BiquadForm::diagonal(&scalars)
}

/// Embeds `f` into `m × (n+1)` and adds `x_row² y_{n+1}²`.
pub fn extend_form(f: &BiquadForm, row: usize) -> Result<BiquadForm> {
    let (m, n) = f.dims();
    if row >= m {
        return Err(Error::IndexOutOfRange(row, n));
    }
    let mut out = BiquadForm::zero(m, n + 1)?;
    for (mono, c) in f.monomials() {
        out.add_unchecked(*mono, c.clone());
    }
    out.add_unchecked(Monomial::square((row, n)), Scalar::one());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{support, BilinearForm};
    use alloc::vec;

    fn cells(f: &BiquadForm) -> Vec<Cell> {
        support(f).unwrap().cells().iter().copied().collect()
    }

    fn sorted(mut v: Vec<Cell>) -> Vec<Cell> {
        v.sort();
        v
    }

    #[test]
    fn displayed_p33_family() {
        // P_{3,3,s}, s = 1..6, each adding one cell (1-based in the display).
        let added = [(0, 0), (1, 1), (2, 2), (0, 1), (1, 2), (2, 0)];
        for s in 1..=6 {
            let expected = sorted(added[..s].to_vec());
            assert_eq!(cells(&gen_p(3, 3, s).unwrap()), expected, "s = {s}");
        }
        assert_eq!(gen_p(3, 3, 9).unwrap().len(), 9);
        assert_eq!(
            p_family_order(3, 3)[6..].to_vec(),
            vec![(0, 2), (1, 0), (2, 1)]
        );
        assert!(gen_p(3, 3, 0).is_err());
        assert!(gen_p(3, 3, 10).is_err());
    }

    #[test]
    fn p_order_covers_grid_diagonal_first() {
        for (m, n) in [(2, 2), (3, 5), (5, 3), (4, 4)] {
            let order = p_family_order(m, n);
            assert_eq!(order.len(), m * n);
            let mut dedup = order.clone();
            dedup.sort();
            dedup.dedup();
            assert_eq!(dedup.len(), m * n);
            let k = m.min(n);
            for (idx, &c) in order.iter().take(k).enumerate() {
                assert_eq!(c, (idx, idx));
            }
        }
    }

    #[test]
    fn cyclic_family() {
        assert_eq!(gen_cyclic(3).unwrap(), gen_p(3, 3, 6).unwrap());
        let c4 = cells(&gen_cyclic(4).unwrap());
        assert_eq!(
            c4,
            sorted(vec![
                (0, 0),
                (1, 1),
                (2, 2),
                (3, 3),
                (0, 1),
                (1, 2),
                (2, 3),
                (3, 0)
            ])
        );
        assert_eq!(gen_cyclic(5).unwrap().len(), 10);
        assert!(gen_cyclic(2).is_err());
    }

    #[test]
    fn q_family() {
        assert_eq!(gen_q(3, 3).unwrap(), gen_p(3, 3, 6).unwrap());
        assert_eq!(
            cells(&gen_q(3, 4).unwrap()),
            sorted(vec![(0, 0), (1, 1), (2, 2), (0, 1), (1, 2), (2, 3), (0, 3)])
        );
        assert_eq!(gen_q(3, 5).unwrap().len(), 8);
        assert!(gen_q(4, 3).is_err());
        assert!(gen_q(2, 3).is_err());
    }

    #[test]
    fn t_family() {
        let t = gen_t(2, 2, 0, 1, 0, 1).unwrap();
        assert_eq!(cells(&t), vec![(0, 0), (0, 1), (1, 0), (1, 1)]);
        let t = gen_t(3, 3, 0, 2, 1, 2).unwrap();
        assert_eq!(cells(&t), vec![(0, 1), (0, 2), (2, 1), (2, 2)]);
        assert_eq!(gen_t(3, 3, 1, 1, 0, 2), Err(Error::DegenerateIndices));
        assert_eq!(gen_t(3, 3, 0, 1, 2, 2), Err(Error::DegenerateIndices));
        assert!(gen_t(2, 2, 0, 2, 0, 1).is_err());
    }

    #[test]
    fn w_family() {
        let rect = Rectangle::new(0, 1, 0, 1).unwrap();
        let ones = RectangleWeights::from_integers(1, 1, 1, 1);
        assert_eq!(
            gen_w(2, 2, &ones, rect).unwrap(),
            gen_t(2, 2, 0, 1, 0, 1).unwrap()
        );
        assert_eq!(ones.determinant(), Rational::from_integer(0.into()));
        let w = RectangleWeights::from_integers(2, 3, 1, 1);
        assert_eq!(w.determinant(), Rational::from_integer(5.into()));
        let f = gen_w(3, 3, &w, rect).unwrap();
        assert_eq!(f.square_coeff((1, 1)), Some(&Scalar::from_integer(3)));
        assert!(gen_w(2, 2, &RectangleWeights::from_integers(1, 0, 1, 1), rect).is_err());
        assert!(gen_w(2, 2, &RectangleWeights::from_integers(1, -2, 1, 1), rect).is_err());
    }

    #[test]
    fn p_plus_family() {
        let p = gen_p_plus();
        assert_eq!(
            p.coeff(&Monomial::new(0, 1, 0, 2)),
            Some(&Scalar::from_integer(2))
        );
        assert_eq!(p.square_coeff((0, 2)), Some(&Scalar::one()));
        assert_eq!(p.square_coeff((2, 1)), None);
        let added =
            BilinearForm::from_entries(3, 3, [((0, 2), Scalar::one()), ((1, 0), Scalar::one())])
                .unwrap()
                .square();
        assert_eq!(p.checked_sub(&added).unwrap(), gen_p(3, 3, 6).unwrap());
    }

    #[test]
    fn extension() {
        let e = extend_form(&gen_p(3, 3, 6).unwrap(), 0).unwrap();
        assert_eq!(e.dims(), (3, 4));
        assert!(e.is_simple());
        assert_eq!(e.len(), 7);
        assert_eq!(e.square_coeff((0, 3)), Some(&Scalar::one()));

        let z = extend_form(&BiquadForm::zero(3, 3).unwrap(), 1).unwrap();
        assert_eq!(cells(&z), vec![(1, 3)]);
        assert!(extend_form(&BiquadForm::zero(3, 3).unwrap(), 3).is_err());
    }
}
