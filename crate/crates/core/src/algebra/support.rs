use alloc::collections::BTreeSet;
use core::fmt;

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// A cell `(i, j)` of the `m × n` grid, 0-based; it stands for the
/// monomial `x_i² y_j²` and for the bilinear term `x_i y_j`.
pub type Cell = (usize, usize);

/// Four cells `(i,k), (i,l), (j,k), (j,l)` with `i ≠ j` and `k ≠ l`.
/// Ordering is lexicographic in `(i, j, k, l)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rectangle {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub l: usize,
}

impl Rectangle {
    pub fn new(i: usize, j: usize, k: usize, l: usize) -> Result<Self> {
        if i == j || k == l {
            return Err(Error::DegenerateIndices);
        }
        Ok(Self { i, j, k, l })
    }

    /// Cells in the order `(i,k), (j,l), (i,l), (j,k)`.
    pub fn cells(&self) -> [Cell; 4] {
        [
            (self.i, self.k),
            (self.j, self.l),
            (self.i, self.l),
            (self.j, self.k),
        ]
    }

    pub(crate) fn check_dims(&self, m: usize, n: usize) -> Result<()> {
        for (r, c) in self.cells() {
            if r >= m || c >= n {
                return Err(Error::IndexOutOfRange(r, c));
            }
        }
        Ok(())
    }
}

/// Set of grid cells carrying a nonzero square-term coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SupportPattern {
    m: usize,
    n: usize,
    cells: BTreeSet<Cell>,
}

impl SupportPattern {
    pub fn empty(m: usize, n: usize) -> Self {
        Self {
            m,
            n,
            cells: BTreeSet::new(),
        }
    }

    pub fn from_cells<I: IntoIterator<Item = Cell>>(m: usize, n: usize, cells: I) -> Result<Self> {
        let mut out = Self::empty(m, n);
        for cell in cells {
            out.insert(cell)?;
        }
        Ok(out)
    }

    /// Cell `(i, j)` is bit `i·n + j`.
    pub fn from_bitmask(m: usize, n: usize, mask: u64) -> Self {
        assert!(m * n <= 64, "bitmask supports at most 64 cells");
        let cells = (0..m * n)
            .filter(|b| mask >> b & 1 == 1)
            .map(|b| (b / n, b % n))
            .collect();
        Self { m, n, cells }
    }

    pub fn to_bitmask(&self) -> u64 {
        assert!(self.m * self.n <= 64, "bitmask supports at most 64 cells");
        self.cells
            .iter()
            .fold(0u64, |acc, &(i, j)| acc | 1 << (i * self.n + j))
    }

    pub fn insert(&mut self, cell: Cell) -> Result<bool> {
        if cell.0 >= self.m || cell.1 >= self.n {
            return Err(Error::IndexOutOfRange(cell.0, cell.1));
        }
        Ok(self.cells.insert(cell))
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.m, self.n)
    }

    pub fn cells(&self) -> &BTreeSet<Cell> {
        &self.cells
    }

    pub fn contains(&self, cell: Cell) -> bool {
        self.cells.contains(&cell)
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Every fully contained rectangle with `i < j` and `k < l`, in
    /// lexicographic order.
    pub fn rectangles(&self) -> Vec<Rectangle> {
        let mut out = Vec::new();
        for i in 0..self.m {
            for j in i + 1..self.m {
                for k in 0..self.n {
                    for l in k + 1..self.n {
                        let rect = Rectangle { i, j, k, l };
                        if rect.cells().iter().all(|&c| self.contains(c)) {
                            out.push(rect);
                        }
                    }
                }
            }
        }
        out
    }

    /// Lexicographically smallest fully contained rectangle.
    pub fn first_rectangle(&self) -> Option<Rectangle> {
        self.rectangles().into_iter().next()
    }

    pub fn transpose(&self) -> Self {
        Self {
            m: self.n,
            n: self.m,
            cells: self.cells.iter().map(|&(i, j)| (j, i)).collect(),
        }
    }
}

impl fmt::Display for SupportPattern {
    /// One row per `x` index, `#` for a support cell.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.m {
            for j in 0..self.n {
                f.write_str(if self.contains((i, j)) { "#" } else { "." })?;
            }
            if i + 1 < self.m {
                f.write_str("\n")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn bitmask_layout() {
        let s = SupportPattern::from_cells(3, 3, [(0, 0), (1, 2), (2, 1)]).unwrap();
        assert_eq!(s.to_bitmask(), 1 | 1 << 5 | 1 << 7);
        assert_eq!(SupportPattern::from_bitmask(3, 3, s.to_bitmask()), s);
        assert_eq!(s.to_string(), "#..\n..#\n.#.");
    }

    #[test]
    fn rectangle_enumeration() {
        let full = SupportPattern::from_bitmask(3, 3, 0x1ff);
        assert_eq!(full.rectangles().len(), 9);
        assert_eq!(
            full.first_rectangle(),
            Some(Rectangle {
                i: 0,
                j: 1,
                k: 0,
                l: 1
            })
        );
        let diag = SupportPattern::from_cells(3, 3, [(0, 0), (1, 1), (2, 2)]).unwrap();
        assert!(diag.first_rectangle().is_none());
    }

    #[test]
    fn out_of_range_cell() {
        assert!(SupportPattern::from_cells(2, 3, [(2, 0)]).is_err());
        assert!(SupportPattern::from_cells(2, 3, [(1, 2)]).is_ok());
    }
}
