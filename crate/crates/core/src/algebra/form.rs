use alloc::collections::BTreeMap;
use core::fmt;

use super::scalar::Scalar;
use super::support::{Cell, SupportPattern};
use crate::error::{Error, Result};

/// Canonical monomial `x_i x_k y_j y_l` with `i ≤ k` and `j ≤ l` (0-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub i: usize,
    pub k: usize,
    pub j: usize,
    pub l: usize,
}

impl Monomial {
    /// Canonicalizes any placement of `x_i x_k y_j y_l`.
    pub fn new(i: usize, k: usize, j: usize, l: usize) -> Self {
        Self {
            i: i.min(k),
            k: i.max(k),
            j: j.min(l),
            l: j.max(l),
        }
    }

    /// The monomial produced by multiplying `x_a y_b` with `x_c y_d`.
    pub fn from_cells(a: Cell, b: Cell) -> Self {
        Self::new(a.0, b.0, a.1, b.1)
    }

    /// `x_i² y_j²`.
    pub fn square(cell: Cell) -> Self {
        Self::new(cell.0, cell.0, cell.1, cell.1)
    }

    pub fn is_square_term(&self) -> bool {
        self.i == self.k && self.j == self.l
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "x{}x{}y{}y{}",
            self.i + 1,
            self.k + 1,
            self.j + 1,
            self.l + 1
        )
    }
}

/// Biquadratic form `Σ a_{ijkl} x_i x_k y_j y_l`, stored as merged
/// coefficients on canonical monomials. Zero coefficients are never stored,
/// so two forms are equal iff their maps are equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BiquadForm {
    m: usize,
    n: usize,
    coeffs: BTreeMap<Monomial, Scalar>,
}

impl BiquadForm {
    pub fn zero(m: usize, n: usize) -> Result<Self> {
        if m < 2 || n < 2 {
            return Err(Error::DimensionTooSmall(m, n));
        }
        Ok(Self {
            m,
            n,
            coeffs: BTreeMap::new(),
        })
    }

    /// Diagonal form `Σ a_{ij} x_i² y_j²` from a row-major coefficient table.
    pub fn diagonal<R: AsRef<[Scalar]>>(rows: &[R]) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, |r| r.as_ref().len());
        let mut form = Self::zero(m, n)?;
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n {
                return Err(Error::InvalidParameter("ragged coefficient table".into()));
            }
            for (j, a) in row.iter().enumerate() {
                form.add_term(Monomial::square((i, j)), a.clone())?;
            }
        }
        Ok(form)
    }

    /// Simple form with unit coefficients on `support`.
    pub fn simple(support: &SupportPattern) -> Result<Self> {
        let (m, n) = support.dims();
        let mut form = Self::zero(m, n)?;
        for &cell in support.cells() {
            form.add_term(Monomial::square(cell), Scalar::one())?;
        }
        Ok(form)
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.m, self.n)
    }

    fn check(&self, mono: &Monomial) -> Result<()> {
        if mono.k >= self.m || mono.l >= self.n {
            return Err(Error::IndexOutOfRange(mono.k, mono.l));
        }
        Ok(())
    }

    /// Adds `c` to the merged coefficient of `mono`, pruning zeros.
    pub fn add_term(&mut self, mono: Monomial, c: Scalar) -> Result<()> {
        self.check(&mono)?;
        self.add_unchecked(mono, c);
        Ok(())
    }

    pub(crate) fn add_unchecked(&mut self, mono: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.get_mut(&mono) {
            Some(existing) => {
                *existing += c;
                if existing.is_zero() {
                    self.coeffs.remove(&mono);
                }
            }
            None => {
                self.coeffs.insert(mono, c);
            }
        }
    }

    pub fn coeff(&self, mono: &Monomial) -> Option<&Scalar> {
        self.coeffs.get(mono)
    }

    /// Coefficient of `x_i² y_j²`.
    pub fn square_coeff(&self, cell: Cell) -> Option<&Scalar> {
        self.coeffs.get(&Monomial::square(cell))
    }

    pub fn monomials(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.coeffs.iter()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    /// Same as `is_zero`.
    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// True when only `x_i² y_j²` monomials occur (covers simple forms).
    pub fn is_diagonal(&self) -> bool {
        self.coeffs.keys().all(Monomial::is_square_term)
    }

    /// Diagonal with every coefficient exactly 1.
    pub fn is_simple(&self) -> bool {
        self.is_diagonal() && self.coeffs.values().all(Scalar::is_one)
    }

    /// Swaps the roles of `x` and `y`.
    pub fn transpose(&self) -> Self {
        Self {
            m: self.n,
            n: self.m,
            coeffs: self
                .coeffs
                .iter()
                .map(|(mo, c)| (Monomial::new(mo.j, mo.l, mo.i, mo.k), c.clone()))
                .collect(),
        }
    }

    fn same_dims(&self, other: &Self) -> Result<()> {
        if self.dims() != other.dims() {
            return Err(Error::DimensionMismatch {
                expected: self.dims(),
                found: other.dims(),
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        self.same_dims(other)?;
        let mut out = self.clone();
        for (mono, c) in &other.coeffs {
            out.add_unchecked(*mono, c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self> {
        self.same_dims(other)?;
        let mut out = self.clone();
        for (mono, c) in &other.coeffs {
            out.add_unchecked(*mono, -c);
        }
        Ok(out)
    }

    /// Evaluates the form at real points.
    pub fn eval_f64(&self, x: &[f64], y: &[f64]) -> f64 {
        self.coeffs
            .iter()
            .map(|(mo, c)| c.to_f64() * x[mo.i] * x[mo.k] * y[mo.j] * y[mo.l])
            .sum()
    }
}

impl fmt::Display for BiquadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (idx, (mo, c)) in self.coeffs.iter().enumerate() {
            if idx > 0 {
                f.write_str(" + ")?;
            }
            if !c.is_one() {
                write!(f, "({c})*")?;
            }
            write!(f, "{mo}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_canonical_order() {
        assert_eq!(Monomial::new(2, 0, 1, 1), Monomial::new(0, 2, 1, 1));
        assert_eq!(
            Monomial::from_cells((1, 0), (0, 2)),
            Monomial::new(0, 1, 0, 2)
        );
        assert!(Monomial::square((1, 2)).is_square_term());
        assert!(!Monomial::new(0, 1, 0, 0).is_square_term());
    }

    #[test]
    fn zero_coefficients_are_pruned() {
        let mut f = BiquadForm::zero(3, 3).unwrap();
        let mono = Monomial::square((0, 0));
        f.add_term(mono, Scalar::one()).unwrap();
        f.add_term(mono, -Scalar::one()).unwrap();
        assert!(f.is_zero());
        assert_eq!(f, BiquadForm::zero(3, 3).unwrap());
    }

    #[test]
    fn rejects_bad_dimensions_and_indices() {
        assert!(BiquadForm::zero(1, 3).is_err());
        let mut f = BiquadForm::zero(2, 2).unwrap();
        assert_eq!(
            f.add_term(Monomial::square((2, 0)), Scalar::one()),
            Err(Error::IndexOutOfRange(2, 0))
        );
    }

    #[test]
    fn transpose_is_involution() {
        let mut f = BiquadForm::zero(2, 3).unwrap();
        f.add_term(Monomial::new(0, 1, 0, 2), Scalar::from_integer(5))
            .unwrap();
        let t = f.transpose();
        assert_eq!(t.dims(), (3, 2));
        assert_eq!(
            t.coeff(&Monomial::new(0, 2, 0, 1)),
            Some(&Scalar::from_integer(5))
        );
        assert_eq!(t.transpose(), f);
    }
}
