use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use super::form::{BiquadForm, Monomial};
use super::scalar::Scalar;
use super::support::Cell;
use crate::error::{Error, Result};

/// Bilinear form `L = Σ c_{ij} x_i y_j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BilinearForm {
    m: usize,
    n: usize,
    coeffs: BTreeMap<Cell, Scalar>,
}

impl BilinearForm {
    pub fn zero(m: usize, n: usize) -> Self {
        Self {
            m,
            n,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn from_entries<I>(m: usize, n: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Cell, Scalar)>,
    {
        let mut out = Self::zero(m, n);
        for (cell, c) in entries {
            out.add(cell, c)?;
        }
        Ok(out)
    }

    /// `c · x_i y_j`.
    pub fn term(m: usize, n: usize, cell: Cell, c: Scalar) -> Result<Self> {
        Self::from_entries(m, n, [(cell, c)])
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.m, self.n)
    }

    /// Adds `c` to the coefficient of `x_i y_j`.
    pub fn add(&mut self, cell: Cell, c: Scalar) -> Result<()> {
        if cell.0 >= self.m || cell.1 >= self.n {
            return Err(Error::IndexOutOfRange(cell.0, cell.1));
        }
        if c.is_zero() {
            return Ok(());
        }
        let slot = self.coeffs.entry(cell).or_default();
        *slot += c;
        if slot.is_zero() {
            self.coeffs.remove(&cell);
        }
        Ok(())
    }

    pub fn coeff(&self, cell: Cell) -> Option<&Scalar> {
        self.coeffs.get(&cell)
    }

    pub fn entries(&self) -> impl Iterator<Item = (Cell, &Scalar)> {
        self.coeffs.iter().map(|(c, s)| (*c, s))
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

    /// Expands `L²` into canonical monomials.
    pub fn square(&self) -> BiquadForm {
        let mut out = BiquadForm::zero(self.m.max(2), self.n.max(2))
            .expect("dimensions clamped to at least 2");
        self.accumulate_square(&mut out);
        out
    }

    pub(crate) fn accumulate_square(&self, out: &mut BiquadForm) {
        let entries: Vec<(Cell, &Scalar)> = self.entries().collect();
        let two = Scalar::from_integer(2);
        for (a, &(ca, va)) in entries.iter().enumerate() {
            out.add_unchecked(Monomial::square(ca), va * va);
            for &(cb, vb) in &entries[a + 1..] {
                out.add_unchecked(Monomial::from_cells(ca, cb), &two * &(va * vb));
            }
        }
    }

    pub fn eval_f64(&self, x: &[f64], y: &[f64]) -> f64 {
        self.coeffs
            .iter()
            .map(|(&(i, j), c)| c.to_f64() * x[i] * y[j])
            .sum()
    }
}

impl core::ops::Neg for &BilinearForm {
    type Output = BilinearForm;
    fn neg(self) -> BilinearForm {
        BilinearForm {
            m: self.m,
            n: self.n,
            coeffs: self.coeffs.iter().map(|(c, s)| (*c, -s)).collect(),
        }
    }
}

impl fmt::Display for BilinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (idx, (&(i, j), c)) in self.coeffs.iter().enumerate() {
            if idx > 0 {
                f.write_str(" + ")?;
            }
            if !c.is_one() {
                write!(f, "({c})*")?;
            }
            write!(f, "x{}y{}", i + 1, j + 1)?;
        }
        Ok(())
    }
}

/// An ordered list of bilinear forms whose squares are claimed to sum to a
/// target biquadratic form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SosDecomposition {
    m: usize,
    n: usize,
    squares: Vec<BilinearForm>,
}

impl SosDecomposition {
    pub fn new(m: usize, n: usize) -> Self {
        Self {
            m,
            n,
            squares: Vec::new(),
        }
    }

    pub fn from_squares(m: usize, n: usize, squares: Vec<BilinearForm>) -> Result<Self> {
        let mut out = Self::new(m, n);
        for sq in squares {
            out.push(sq)?;
        }
        Ok(out)
    }

    pub fn push(&mut self, square: BilinearForm) -> Result<()> {
        if square.dims() != (self.m, self.n) {
            return Err(Error::DimensionMismatch {
                expected: (self.m, self.n),
                found: square.dims(),
            });
        }
        self.squares.push(square);
        Ok(())
    }

    /// Appends every square of `other`.
    pub fn extend(&mut self, other: SosDecomposition) -> Result<()> {
        for sq in other.squares {
            self.push(sq)?;
        }
        Ok(())
    }

    pub fn target_dims(&self) -> (usize, usize) {
        (self.m, self.n)
    }

    pub fn squares(&self) -> &[BilinearForm] {
        &self.squares
    }

    pub fn into_squares(self) -> Vec<BilinearForm> {
        self.squares
    }

    /// Number of squares `R`.
    pub fn len(&self) -> usize {
        self.squares.len()
    }

    pub fn is_empty(&self) -> bool {
        self.squares.is_empty()
    }

    /// `Σ_t L_t²` as a canonical form.
    pub fn expand(&self) -> Result<BiquadForm> {
        let mut out = BiquadForm::zero(self.m, self.n)?;
        for sq in &self.squares {
            sq.accumulate_square(&mut out);
        }
        Ok(out)
    }

    /// Exact check `Σ_t L_t² == target`.
    pub fn verify(&self, target: &BiquadForm) -> Result<bool> {
        if target.dims() != (self.m, self.n) {
            return Err(Error::DimensionMismatch {
                expected: target.dims(),
                found: (self.m, self.n),
            });
        }
        Ok(&self.expand()? == target)
    }
}

impl fmt::Display for SosDecomposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (t, sq) in self.squares.iter().enumerate() {
            if t > 0 {
                f.write_str("\n")?;
            }
            write!(f, "({sq})^2")?;
        }
        Ok(())
    }
}
