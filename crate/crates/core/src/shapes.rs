//! Partitions, compositions and cell statistics on diagrams.
//!
//! The diagram `dg(λ)` has bottom-justified columns, column `i` holding
//! `λ_i` cells. Cells are addressed `(row, col)`, both 1-based, rows counted
//! from the bottom.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qtalg::QTPoly;

/// Weakly decreasing sequence of positive integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Partition(Vec<u32>);

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::Invalid("partition parts must be positive".into()));
        }
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Invalid("partition parts must be weakly decreasing".into()));
        }
        Ok(Partition(parts))
    }

    /// Sorts and drops zeros.
    pub fn from_weak(parts: &[u32]) -> Self {
        let mut v: Vec<u32> = parts.iter().copied().filter(|&p| p > 0).collect();
        v.sort_unstable_by(|a, b| b.cmp(a));
        Partition(v)
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    /// Number of parts, `ℓ(λ)`.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Height of column `col` (1-based); zero past the last column.
    pub fn column(&self, col: usize) -> u32 {
        if col == 0 {
            return 0;
        }
        self.0.get(col - 1).copied().unwrap_or(0)
    }

    pub fn largest(&self) -> u32 {
        self.0.first().copied().unwrap_or(0)
    }

    pub fn contains(&self, cell: Cell) -> bool {
        cell.row >= 1 && cell.col >= 1 && cell.row as u32 <= self.column(cell.col)
    }

    /// `m_i(λ)` for `i = 1..=λ_1`, index 0 unused.
    pub fn multiplicities(&self) -> Vec<u32> {
        let mut m = vec![0; self.largest() as usize + 1];
        for &p in &self.0 {
            m[p as usize] += 1;
        }
        m
    }

    pub fn is_strict(&self) -> bool {
        self.0.windows(2).all(|w| w[0] > w[1])
    }

    /// Cells of the diagram in row-major order, bottom row first, left to
    /// right.
    pub fn cells(&self) -> Vec<Cell> {
        let conj = conjugate(self);
        let mut out = Vec::with_capacity(self.size() as usize);
        for (r, &len) in conj.0.iter().enumerate() {
            for c in 1..=len as usize {
                out.push(Cell::new(r + 1, c));
            }
        }
        out
    }

    /// All partitions of `size`, in reverse lexicographic order.
    pub fn all_of_size(size: u32) -> Vec<Partition> {
        fn go(rem: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
            if rem == 0 {
                out.push(Partition(cur.clone()));
                return;
            }
            for p in (1..=rem.min(max)).rev() {
                cur.push(p);
                go(rem - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        go(size, size, &mut Vec::new(), &mut out);
        out
    }
}

impl TryFrom<Vec<u32>> for Partition {
    type Error = Error;
    fn try_from(v: Vec<u32>) -> Result<Self> {
        Partition::new(v)
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Self {
        p.0
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", s.join(","))
    }
}

/// Sequence of nonnegative integers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Composition(pub Vec<u32>);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SortOrder {
    Decreasing,
    Increasing,
}

impl Composition {
    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    /// Number of nonzero parts.
    pub fn length(&self) -> usize {
        self.0.iter().filter(|&&p| p > 0).count()
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    /// `λ(α)` or `inc(α)`; the multiset of parts (zeros included) is kept.
    pub fn rearrange(&self, order: SortOrder) -> Composition {
        let mut v = self.0.clone();
        match order {
            SortOrder::Increasing => v.sort_unstable(),
            SortOrder::Decreasing => v.sort_unstable_by(|a, b| b.cmp(a)),
        }
        Composition(v)
    }

    pub fn to_partition(&self) -> Partition {
        Partition::from_weak(&self.0)
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", s.join(","))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cell {
    pub row: usize,
    pub col: usize,
}

impl Cell {
    pub fn new(row: usize, col: usize) -> Self {
        Cell { row, col }
    }

    /// The cell directly below, or `None` for row 1.
    pub fn south(self) -> Option<Cell> {
        (self.row > 1).then(|| Cell::new(self.row - 1, self.col))
    }
}

/// `λ'_r = #{i : λ_i ≥ r}`.
pub fn conjugate(lambda: &Partition) -> Partition {
    let top = lambda.largest();
    Partition((1..=top).map(|r| lambda.0.iter().filter(|&&p| p >= r).count() as u32).collect())
}

fn check(lambda: &Partition, u: Cell) -> Result<()> {
    if lambda.contains(u) {
        Ok(())
    } else {
        Err(Error::CellOutOfShape { row: u.row, col: u.col })
    }
}

/// Number of cells above `u` in its column.
pub fn leg(lambda: &Partition, u: Cell) -> Result<u32> {
    check(lambda, u)?;
    Ok(lambda.column(u.col) - u.row as u32)
}

/// Number of cells strictly right of `u` in the row below.
pub fn rarm(lambda: &Partition, u: Cell) -> Result<u32> {
    check(lambda, u)?;
    if u.row == 1 {
        return Err(Error::RowOneHasNoRarm);
    }
    let below = u.row as u32 - 1;
    Ok(lambda.0.iter().skip(u.col).filter(|&&p| p >= below).count() as u32)
}

/// `n(λ) = Σ_i C(λ'_i, 2)`.
pub fn n_stat(lambda: &Partition) -> u32 {
    conjugate(lambda).0.iter().map(|&c| c * c.saturating_sub(1) / 2).sum()
}

/// t-multinomial `[Σm]_t! / Π [m_i]_t!`.
pub fn t_multinomial(m: &[u32]) -> QTPoly {
    let total: u32 = m.iter().sum();
    let den = m.iter().fold(QTPoly::one(), |acc, &k| &acc * &QTPoly::t_factorial(k));
    QTPoly::t_factorial(total)
        .div_exact(&den)
        .expect("t-multinomial coefficients are polynomials")
}

/// `perm(λ) = Π_i [m_i(λ)]_t!`.
pub fn perm_lambda(lambda: &Partition) -> QTPoly {
    lambda
        .multiplicities()
        .iter()
        .fold(QTPoly::one(), |acc, &m| &acc * &QTPoly::t_factorial(m))
}
