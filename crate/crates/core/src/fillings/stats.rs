use super::{Filling, SuperEntry, SuperFilling};
use crate::error::{Error, Result};
use crate::shapes::n_stat;

/// Queue-inversion test for an L-triple with top entry `a` (0 for a
/// degenerate triple), bottom-left `b` and bottom-right `c`.
pub fn is_quinv_triple(a: u32, b: u32, c: u32) -> bool {
    (a <= b && b < c) || (b < c && c < a) || (c < a && a <= b)
}

pub fn maj(sigma: &Filling) -> u32 {
    let mut total = 0;
    for col in sigma.columns() {
        let h = col.len() as u32;
        for r in 1..col.len() {
            if col[r] > col[r - 1] {
                // leg + 1 of the cell at row r + 1
                total += h - r as u32;
            }
        }
    }
    total
}

pub fn quinv(sigma: &Filling) -> u32 {
    let cols = sigma.columns();
    let mut total = 0;
    for (i, ci) in cols.iter().enumerate() {
        for (r, &b) in ci.iter().enumerate() {
            let a = ci.get(r + 1).copied().unwrap_or(0);
            for cj in &cols[i + 1..] {
                // columns are weakly decreasing in height
                let Some(&c) = cj.get(r) else { break };
                if is_quinv_triple(a, b, c) {
                    total += 1;
                }
            }
        }
    }
    total
}

pub fn coquinv(sigma: &Filling) -> Result<u32> {
    let q = quinv(sigma);
    let n = n_stat(sigma.shape());
    n.checked_sub(q).ok_or(Error::NegativeCoquinv { quinv: q as usize, n_lambda: n as usize })
}

/// Inversion statistic: attacking inversion pairs minus the arms of descents.
/// Attacking pairs are cells in one row, or an upper cell strictly right of
/// a lower cell in the next row; reading order is top row first, left to
/// right.
pub fn inv(sigma: &Filling) -> u32 {
    let rows = sigma.rows();
    let mut pairs = 0u32;
    for (r, row) in rows.iter().enumerate() {
        for i in 0..row.len() {
            for j in i + 1..row.len() {
                if row[i] > row[j] {
                    pairs += 1;
                }
            }
            if r > 0 {
                let below = &rows[r - 1];
                for &w in &below[..i] {
                    if row[i] > w {
                        pairs += 1;
                    }
                }
            }
        }
    }
    let mut arms = 0u32;
    for (r, row) in rows.iter().enumerate().skip(1) {
        for (i, &v) in row.iter().enumerate() {
            if v > rows[r - 1][i] {
                arms += (row.len() - i - 1) as u32;
            }
        }
    }
    pairs - arms
}

/// The same statistic counted triple by triple: for `u` left of `v` in a
/// row above the first, with `w` below `u`, entries `a, b, c` form an
/// inversion triple when `a > b > c`, `c >= a > b` or `b > c >= a`; pairs in
/// the bottom row count when `a > b`.
pub fn inv_by_triples(sigma: &Filling) -> u32 {
    let rows = sigma.rows();
    let mut total = 0;
    for (r, row) in rows.iter().enumerate() {
        for i in 0..row.len() {
            for j in i + 1..row.len() {
                let (a, b) = (row[i], row[j]);
                let hit = if r == 0 {
                    a > b
                } else {
                    let c = rows[r - 1][i];
                    (a > b && b > c) || (c >= a && a > b) || (b > c && c >= a)
                };
                if hit {
                    total += 1;
                }
            }
        }
    }
    total
}

/// No equal entries in one row, nor in an upper cell and a lower cell
/// strictly to its right in the row below.
pub fn is_quinv_nonattacking(sigma: &Filling) -> bool {
    let rows = sigma.rows();
    for (r, row) in rows.iter().enumerate() {
        for i in 0..row.len() {
            if row[i + 1..].contains(&row[i]) {
                return false;
            }
            if r > 0 && rows[r - 1].get(i + 1..).is_some_and(|rest| rest.contains(&row[i])) {
                return false;
            }
        }
    }
    true
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SuperStats {
    pub maj: u32,
    pub quinv: u32,
    /// unbarred entries
    pub p: u32,
    /// barred entries
    pub m: u32,
}

/// `I(a, b)`: strict comparison in `0 < 1 < 1̄ < 2 < ...`, with equal
/// entries counting as 1 exactly when barred. `None` is the phantom 0.
fn big_i(a: Option<SuperEntry>, b: Option<SuperEntry>) -> bool {
    let ka = a.map_or(0, SuperEntry::key);
    let kb = b.map_or(0, SuperEntry::key);
    if ka != kb {
        ka > kb
    } else {
        a.is_some_and(|e| e.barred)
    }
}

pub fn super_stats(sigma: &SuperFilling) -> SuperStats {
    let cols = sigma.columns();
    let mut s = SuperStats { maj: 0, quinv: 0, p: 0, m: 0 };
    for col in cols {
        let h = col.len() as u32;
        for (r, e) in col.iter().enumerate() {
            if e.barred {
                s.m += 1;
            } else {
                s.p += 1;
            }
            if r > 0 && big_i(Some(*e), Some(col[r - 1])) {
                s.maj += h - r as u32;
            }
        }
    }
    for (i, ci) in cols.iter().enumerate() {
        for (r, &y) in ci.iter().enumerate() {
            let x = ci.get(r + 1).copied();
            for cj in &cols[i + 1..] {
                let Some(&z) = cj.get(r) else { break };
                let conds = [big_i(x, Some(y)), !big_i(Some(z), Some(y)), !big_i(x, Some(z))];
                if conds.iter().filter(|&&c| c).count() == 1 {
                    s.quinv += 1;
                }
            }
        }
    }
    s
}
