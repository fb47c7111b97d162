//! Fillings and super-fillings of `dg(λ)` with their statistics.

mod sorting;
mod stats;

pub use sorting::{compare_columns_quinv, is_coquinv_sorted, is_quinv_sorted, perm_sigma, tau};
pub use stats::{
    coquinv, inv, inv_by_triples, is_quinv_nonattacking, is_quinv_triple, maj, quinv, super_stats,
    SuperStats,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::processes::TazrpState;
use crate::shapes::{conjugate, Cell, Partition};

/// Assignment of a value in `1..=n` to every cell of `dg(λ)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Filling {
    shape: Partition,
    n: u32,
    /// `columns[j][r]` is the entry at row `r + 1`, column `j + 1`.
    columns: Vec<Vec<u32>>,
}

impl Filling {
    pub fn from_columns(shape: Partition, n: u32, columns: Vec<Vec<u32>>) -> Result<Self> {
        if columns.len() != shape.len() {
            return Err(Error::Invalid(format!(
                "{} columns for a shape with {} columns",
                columns.len(),
                shape.len()
            )));
        }
        for (j, col) in columns.iter().enumerate() {
            if col.len() as u32 != shape.parts()[j] {
                return Err(Error::Invalid(format!("column {} has the wrong height", j + 1)));
            }
            if col.iter().any(|&v| v == 0 || v > n) {
                return Err(Error::Invalid(format!("entry out of range 1..={n}")));
            }
        }
        Ok(Filling { shape, n, columns })
    }

    /// Builds a filling from rows listed bottom to top.
    pub fn from_rows(n: u32, rows: &[Vec<u32>]) -> Result<Self> {
        let shape = shape_from_rows(rows.iter().map(Vec::len))?;
        let mut columns: Vec<Vec<u32>> = shape.parts().iter().map(|&h| Vec::with_capacity(h as usize)).collect();
        for row in rows {
            for (j, &v) in row.iter().enumerate() {
                columns[j].push(v);
            }
        }
        Filling::from_columns(shape, n, columns)
    }

    pub fn shape(&self) -> &Partition {
        &self.shape
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn columns(&self) -> &[Vec<u32>] {
        &self.columns
    }

    pub fn column(&self, col: usize) -> &[u32] {
        &self.columns[col - 1]
    }

    pub fn get(&self, cell: Cell) -> u32 {
        self.columns[cell.col - 1][cell.row - 1]
    }

    pub fn get_checked(&self, cell: Cell) -> Option<u32> {
        self.columns.get(cell.col.checked_sub(1)?)?.get(cell.row.checked_sub(1)?).copied()
    }

    /// Rows bottom to top.
    pub fn rows(&self) -> Vec<Vec<u32>> {
        let conj = conjugate(&self.shape);
        conj.parts()
            .iter()
            .enumerate()
            .map(|(r, &len)| (0..len as usize).map(|j| self.columns[j][r]).collect())
            .collect()
    }

    /// Entry-count histogram `x^σ` as an exponent vector of length `n`.
    pub fn content(&self) -> Vec<u32> {
        let mut c = vec![0; self.n as usize];
        for col in &self.columns {
            for &v in col {
                c[v as usize - 1] += 1;
            }
        }
        c
    }

    pub(crate) fn swap_entries(&mut self, row: usize, col_a: usize, col_b: usize) {
        let a = self.columns[col_a - 1][row - 1];
        let b = self.columns[col_b - 1][row - 1];
        self.columns[col_a - 1][row - 1] = b;
        self.columns[col_b - 1][row - 1] = a;
    }

    /// Site-multiset projection onto a TAZRP state: site `j` receives the
    /// heights of the columns whose row-1 entry is `j`.
    pub fn proj_tazrp(&self) -> TazrpState {
        let mut sites = vec![Vec::new(); self.n as usize];
        for (j, col) in self.columns.iter().enumerate() {
            sites[col[0] as usize - 1].push(self.shape.parts()[j]);
        }
        TazrpState::new(sites)
    }
}

fn shape_from_rows(lengths: impl Iterator<Item = usize>) -> Result<Partition> {
    let lens: Vec<u32> = lengths.map(|l| l as u32).collect();
    let conj = Partition::new(lens).map_err(|_| {
        Error::Invalid("row lengths must be positive and weakly decreasing upward".into())
    })?;
    Ok(conjugate(&conj))
}

impl Serialize for Filling {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Filling {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<u32>> = Vec::deserialize(d)?;
        let n = rows.iter().flatten().copied().max().unwrap_or(1);
        Filling::from_rows(n, &rows).map_err(serde::de::Error::custom)
    }
}

/// Entry of a super-filling: a value in `1..=n`, possibly barred.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SuperEntry {
    pub value: u32,
    pub barred: bool,
}

impl SuperEntry {
    pub fn plain(value: u32) -> Self {
        SuperEntry { value, barred: false }
    }

    pub fn barred(value: u32) -> Self {
        SuperEntry { value, barred: true }
    }

    /// Position in the total order `0 < 1 < 1̄ < 2 < 2̄ < ...`.
    pub(crate) fn key(self) -> u32 {
        2 * self.value + self.barred as u32
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SuperFilling {
    shape: Partition,
    n: u32,
    columns: Vec<Vec<SuperEntry>>,
}

impl SuperFilling {
    pub fn from_columns(shape: Partition, n: u32, columns: Vec<Vec<SuperEntry>>) -> Result<Self> {
        let plain: Vec<Vec<u32>> =
            columns.iter().map(|c| c.iter().map(|e| e.value).collect()).collect();
        Filling::from_columns(shape.clone(), n, plain)?;
        Ok(SuperFilling { shape, n, columns })
    }

    /// Rows bottom to top, barred entries as negative integers.
    pub fn from_signed_rows(n: u32, rows: &[Vec<i64>]) -> Result<Self> {
        let shape = shape_from_rows(rows.iter().map(Vec::len))?;
        let mut columns: Vec<Vec<SuperEntry>> = vec![Vec::new(); shape.len()];
        for row in rows {
            for (j, &v) in row.iter().enumerate() {
                let value = u32::try_from(v.unsigned_abs())
                    .map_err(|_| Error::Invalid("entry out of range".into()))?;
                columns[j].push(SuperEntry { value, barred: v < 0 });
            }
        }
        SuperFilling::from_columns(shape, n, columns)
    }

    pub fn unbarred(f: &Filling) -> Self {
        SuperFilling {
            shape: f.shape.clone(),
            n: f.n,
            columns: f.columns.iter().map(|c| c.iter().map(|&v| SuperEntry::plain(v)).collect()).collect(),
        }
    }

    pub fn shape(&self) -> &Partition {
        &self.shape
    }

    pub fn get(&self, cell: Cell) -> SuperEntry {
        self.columns[cell.col - 1][cell.row - 1]
    }

    pub fn columns(&self) -> &[Vec<SuperEntry>] {
        &self.columns
    }

    /// `|σ|`: forget the bars.
    pub fn abs(&self) -> Filling {
        Filling {
            shape: self.shape.clone(),
            n: self.n,
            columns: self.columns.iter().map(|c| c.iter().map(|e| e.value).collect()).collect(),
        }
    }

    pub fn signed_rows(&self) -> Vec<Vec<i64>> {
        self.abs()
            .rows()
            .iter()
            .enumerate()
            .map(|(r, row)| {
                (0..row.len())
                    .map(|j| {
                        let e = self.columns[j][r];
                        if e.barred { -(e.value as i64) } else { e.value as i64 }
                    })
                    .collect()
            })
            .collect()
    }
}

impl Serialize for SuperFilling {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.signed_rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for SuperFilling {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<i64>> = Vec::deserialize(d)?;
        let n = rows.iter().flatten().map(|v| v.unsigned_abs()).max().unwrap_or(1);
        let n = u32::try_from(n).map_err(serde::de::Error::custom)?;
        SuperFilling::from_signed_rows(n, &rows).map_err(serde::de::Error::custom)
    }
}

/// Streams every filling of `dg(λ)` with entries in `1..=n`.
///
/// Order is lexicographic in the row-major reading (bottom row first, left
/// to right), the first cell most significant.
pub struct FillingIter {
    shape: Partition,
    n: u32,
    cells: Vec<Cell>,
    values: Vec<u32>,
    first: Option<u32>,
    done: bool,
}

impl FillingIter {
    pub fn new(shape: &Partition, n: u32) -> Self {
        let cells = shape.cells();
        let done = n == 0 && !cells.is_empty();
        FillingIter {
            shape: shape.clone(),
            n,
            values: vec![1; cells.len()],
            cells,
            first: None,
            done,
        }
    }

    /// Restricts the first cell (bottom-left) to `value`.
    pub fn with_first(mut self, value: u32) -> Self {
        if !self.values.is_empty() {
            self.values[0] = value;
            self.first = Some(value);
        }
        self
    }

    fn build(&self) -> Filling {
        let mut columns: Vec<Vec<u32>> =
            self.shape.parts().iter().map(|&h| vec![0; h as usize]).collect();
        for (cell, &v) in self.cells.iter().zip(&self.values) {
            columns[cell.col - 1][cell.row - 1] = v;
        }
        Filling { shape: self.shape.clone(), n: self.n, columns }
    }
}

impl Iterator for FillingIter {
    type Item = Filling;

    fn next(&mut self) -> Option<Filling> {
        if self.done {
            return None;
        }
        let out = self.build();
        let lowest = usize::from(self.first.is_some());
        let mut i = self.values.len();
        loop {
            if i == lowest {
                self.done = true;
                break;
            }
            i -= 1;
            if self.values[i] < self.n {
                self.values[i] += 1;
                break;
            }
            self.values[i] = 1;
        }
        Some(out)
    }
}

pub fn enumerate_fillings(shape: &Partition, n: u32) -> FillingIter {
    FillingIter::new(shape, n)
}

/// Quinv-non-attacking fillings, found by backtracking over the reading
/// order so attacked cells are rejected as soon as both are filled.
pub fn nonattacking_fillings(shape: &Partition, n: u32) -> Vec<Filling> {
    let cells = shape.cells();
    let mut values = vec![0u32; cells.len()];
    let mut index = std::collections::HashMap::new();
    for (i, c) in cells.iter().enumerate() {
        index.insert(*c, i);
    }
    // For each cell, earlier cells it attacks: same row to the left, and
    // row below strictly to the right.
    let attackers: Vec<Vec<usize>> = cells
        .iter()
        .map(|c| {
            let mut v: Vec<usize> = (1..c.col).filter_map(|j| index.get(&Cell::new(c.row, j)).copied()).collect();
            if c.row > 1 {
                let mut j = c.col + 1;
                while let Some(&k) = index.get(&Cell::new(c.row - 1, j)) {
                    v.push(k);
                    j += 1;
                }
            }
            v
        })
        .collect();
    let mut out = Vec::new();
    fn go(
        i: usize,
        n: u32,
        values: &mut Vec<u32>,
        attackers: &[Vec<usize>],
        emit: &mut dyn FnMut(&[u32]),
    ) {
        if i == values.len() {
            emit(values);
            return;
        }
        for v in 1..=n {
            if attackers[i].iter().all(|&k| values[k] != v) {
                values[i] = v;
                go(i + 1, n, values, attackers, emit);
            }
        }
        values[i] = 0;
    }
    let mut emit = |vals: &[u32]| {
        let mut columns: Vec<Vec<u32>> = shape.parts().iter().map(|&h| vec![0; h as usize]).collect();
        for (cell, &v) in cells.iter().zip(vals) {
            columns[cell.col - 1][cell.row - 1] = v;
        }
        out.push(Filling { shape: shape.clone(), n, columns });
    };
    go(0, n, &mut values, &attackers, &mut emit);
    out
}

/// Every super-filling `σ` with `|σ| = base`.
pub fn superizations(base: &Filling) -> impl Iterator<Item = SuperFilling> + '_ {
    let cells = base.shape.cells();
    let k = cells.len();
    (0u64..(1u64 << k)).map(move |mask| {
        let columns = base
            .columns
            .iter()
            .enumerate()
            .map(|(j, col)| {
                col.iter()
                    .enumerate()
                    .map(|(r, &v)| {
                        let idx = cells.iter().position(|c| *c == Cell::new(r + 1, j + 1)).unwrap();
                        SuperEntry { value: v, barred: mask >> idx & 1 == 1 }
                    })
                    .collect()
            })
            .collect();
        SuperFilling { shape: base.shape.clone(), n: base.n, columns }
    })
}
