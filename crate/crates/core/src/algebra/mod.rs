//! Exact scalars, biquadratic and bilinear forms, and the symbolic
//! expansion used to verify every decomposition.

mod bilinear;
mod form;
mod scalar;
mod support;

pub use bilinear::{BilinearForm, SosDecomposition};
pub use form::{BiquadForm, Monomial};
pub use scalar::{Rational, Scalar};
pub use support::{Cell, Rectangle, SupportPattern};

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Exact `√q` for a nonnegative rational `q`.
pub fn scalar_sqrt(q: &Rational) -> Result<Scalar> {
    Scalar::sqrt_of(q)
}

/// `Σ_t L_t²` with symmetric placements merged.
pub fn expand_squares(d: &SosDecomposition) -> Result<BiquadForm> {
    d.expand()
}

/// True iff `d` expands to exactly `target`.
pub fn verify_decomposition(target: &BiquadForm, d: &SosDecomposition) -> Result<bool> {
    d.verify(target)
}

/// Cells with a nonzero `x_i² y_j²` coefficient. Fails on forms that carry
/// any cross monomial.
pub fn support(f: &BiquadForm) -> Result<SupportPattern> {
    if !f.is_diagonal() {
        return Err(Error::NotDiagonal);
    }
    let (m, n) = f.dims();
    SupportPattern::from_cells(m, n, f.monomials().map(|(mo, _)| (mo.i, mo.j)))
}

/// Finds `L` with `L² = f`, if one exists over the scalar ring.
///
/// The pivot is a cell whose square coefficient is a positive rational, so
/// its root `q√d` is invertible in closed form. Row and column of the pivot
/// are read off the `x_{i0}² y_{j0} y_j` and `x_{i0} x_i y_{j0}²` monomials;
/// every other coefficient then follows from the mixed monomial
/// `x_{i0} x_i y_{j0} y_j`, whose coefficient is
/// `2(c_{i0 j0} c_{ij} + c_{i0 j} c_{i j0})`. The candidate is accepted only if
/// its square reproduces `f` exactly. Forms whose square coefficients are all
/// irrational are not handled and yield `None`.
pub fn is_perfect_square(f: &BiquadForm) -> Option<BilinearForm> {
    let (m, n) = f.dims();
    if f.is_zero() {
        return Some(BilinearForm::zero(m, n));
    }
    let (pivot, pivot_sq) = f.monomials().find_map(|(mo, c)| {
        let q = c.to_rational()?;
        (mo.is_square_term() && q > Rational::from_integer(0.into())).then_some(((mo.i, mo.j), q))
    })?;
    let (i0, j0) = pivot;
    let c0 = Scalar::sqrt_of(&pivot_sq).ok()?;
    let half_inv_c0 = &c0.recip_monomial()? / &Rational::from_integer(2.into());
    let zero = Scalar::zero();

    let mut c = vec_grid(m, n);
    c[i0][j0] = c0.clone();
    for j in (0..n).filter(|&j| j != j0) {
        let mono = Monomial::new(i0, i0, j0, j);
        c[i0][j] = f.coeff(&mono).unwrap_or(&zero) * &half_inv_c0;
    }
    for i in (0..m).filter(|&i| i != i0) {
        let mono = Monomial::new(i0, i, j0, j0);
        c[i][j0] = f.coeff(&mono).unwrap_or(&zero) * &half_inv_c0;
    }
    let half = Rational::new(1.into(), 2.into());
    let inv_c0 = c0.recip_monomial()?;
    for i in (0..m).filter(|&i| i != i0) {
        for j in (0..n).filter(|&j| j != j0) {
            let mixed = f.coeff(&Monomial::new(i0, i, j0, j)).unwrap_or(&zero);
            let rest = &(mixed * &half) - &(&c[i0][j] * &c[i][j0]);
            c[i][j] = &rest * &inv_c0;
        }
    }

    let mut l = BilinearForm::zero(m, n);
    for (i, row) in c.into_iter().enumerate() {
        for (j, v) in row.into_iter().enumerate() {
            l.add((i, j), v).ok()?;
        }
    }
    (&l.square() == f).then_some(l)
}

fn vec_grid(m: usize, n: usize) -> Vec<Vec<Scalar>> {
    (0..m)
        .map(|_| (0..n).map(|_| Scalar::zero()).collect())
        .collect()
}
