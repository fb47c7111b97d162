use std::cmp::Ordering;
use std::collections::BTreeMap;

use super::stats::is_quinv_triple;
use super::Filling;
use crate::error::{Error, Result};
use crate::qtalg::QTPoly;
use crate::shapes::t_multinomial;

/// Queue-inversion order on two columns of equal height, each given bottom
/// to top. Looks at the topmost row `r` where they differ; `A > B` when the
/// entry above `a_r` (0 past the top), `a_r` and `b_r` form a quinv triple.
pub fn compare_columns_quinv(a: &[u32], b: &[u32]) -> Result<Ordering> {
    if a.len() != b.len() {
        return Err(Error::HeightMismatch(a.len(), b.len()));
    }
    let Some(r) = (0..a.len()).rev().find(|&r| a[r] != b[r]) else {
        return Ok(Ordering::Equal);
    };
    let above = a.get(r + 1).copied().unwrap_or(0);
    Ok(if is_quinv_triple(above, a[r], b[r]) { Ordering::Greater } else { Ordering::Less })
}

/// Column index ranges (0-based, half open) of equal-height blocks.
fn blocks(sigma: &Filling) -> Vec<(usize, usize)> {
    let parts = sigma.shape().parts();
    let mut out = Vec::new();
    let mut start = 0;
    for j in 1..=parts.len() {
        if j == parts.len() || parts[j] != parts[start] {
            out.push((start, j));
            start = j;
        }
    }
    out
}

fn sorted_against(sigma: &Filling, forbidden: Ordering) -> bool {
    let cols = sigma.columns();
    blocks(sigma).into_iter().all(|(s, e)| {
        (s..e).all(|i| (i + 1..e).all(|j| compare_columns_quinv(&cols[i], &cols[j]) != Ok(forbidden)))
    })
}

/// Equal-height columns increase left to right in the queue-inversion order.
pub fn is_quinv_sorted(sigma: &Filling) -> bool {
    sorted_against(sigma, Ordering::Greater)
}

/// Equal-height columns decrease left to right, the representative of each
/// column arrangement with the largest `quinv` (smallest `coquinv`).
pub fn is_coquinv_sorted(sigma: &Filling) -> bool {
    sorted_against(sigma, Ordering::Less)
}

/// Swaps entries between columns `j` and `j + 1` (1-based) from the topmost
/// differing row downward, continuing while each swap flips the quinv status
/// of the triple it sits on.
pub fn tau(sigma: &Filling, j: usize) -> Result<Filling> {
    let parts = sigma.shape().parts();
    if j == 0 || j >= parts.len() {
        return Err(Error::Invalid(format!("no column pair ({j}, {}) in the shape", j + 1)));
    }
    if parts[j - 1] != parts[j] {
        return Err(Error::UnequalColumnHeights(j, j + 1));
    }
    let (a, b) = (sigma.column(j), sigma.column(j + 1));
    let Some(top) = (0..a.len()).rev().find(|&r| a[r] != b[r]) else {
        return Ok(sigma.clone());
    };
    let mut out = sigma.clone();
    out.swap_entries(top + 1, j, j + 1);
    let mut i = top;
    while i > 0 {
        let (lo_a, lo_b) = (a[i - 1], b[i - 1]);
        let before = is_quinv_triple(a[i], lo_a, lo_b);
        let after = is_quinv_triple(b[i], lo_a, lo_b);
        if before == after {
            break;
        }
        out.swap_entries(i, j, j + 1);
        i -= 1;
    }
    Ok(out)
}

/// Product over equal-height blocks of the t-multinomial of column
/// multiplicities.
pub fn perm_sigma(sigma: &Filling) -> QTPoly {
    let cols = sigma.columns();
    let mut out = QTPoly::one();
    for (s, e) in blocks(sigma) {
        let mut counts: BTreeMap<&[u32], u32> = BTreeMap::new();
        for c in &cols[s..e] {
            *counts.entry(c.as_slice()).or_default() += 1;
        }
        let m: Vec<u32> = counts.into_values().collect();
        out = &out * &t_multinomial(&m);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::super::tests::fig_tab;
    use super::super::{enumerate_fillings, maj, quinv};
    use super::*;
    use crate::shapes::Partition;

    /// Columns given top to bottom, as printed.
    fn col(top_down: &[u32]) -> Vec<u32> {
        top_down.iter().rev().copied().collect()
    }

    #[test]
    fn printed_column_order() {
        let chain: Vec<Vec<u32>> =
            [[4, 2, 3], [4, 1, 2], [4, 1, 1], [3, 2, 3], [2, 2, 3], [1, 3, 2]].iter().map(|c| col(c)).collect();
        for i in 0..chain.len() {
            for j in 0..chain.len() {
                let expect = i.cmp(&j);
                assert_eq!(compare_columns_quinv(&chain[i], &chain[j]).unwrap(), expect, "{i} {j}");
            }
        }
        assert_eq!(compare_columns_quinv(&[1, 2], &[1]), Err(Error::HeightMismatch(2, 1)));
    }

    #[test]
    fn column_order_is_antisymmetric() {
        for h in 1..=3usize {
            let columns: Vec<Vec<u32>> = (0..3u32.pow(h as u32))
                .map(|mut k| {
                    (0..h)
                        .map(|_| {
                            let d = k % 3 + 1;
                            k /= 3;
                            d
                        })
                        .collect()
                })
                .collect();
            for a in &columns {
                for b in &columns {
                    let ab = compare_columns_quinv(a, b).unwrap();
                    let ba = compare_columns_quinv(b, a).unwrap();
                    assert_eq!(ab, ba.reverse(), "{a:?} {b:?}");
                    assert_eq!(ab == Ordering::Equal, a == b);
                }
            }
        }
    }

    #[test]
    fn printed_tau_example() {
        let shape = Partition::new(vec![6, 6]).unwrap();
        let sigma = Filling::from_columns(shape.clone(), 4, vec![col(&[2, 3, 2, 2, 3, 1]), col(&[2, 4, 3, 3, 4, 3])]).unwrap();
        let out = tau(&sigma, 1).unwrap();
        assert_eq!(out.column(1), col(&[2, 4, 3, 3, 3, 1]).as_slice());
        assert_eq!(out.column(2), col(&[2, 3, 2, 2, 4, 3]).as_slice());
    }

    #[test]
    fn printed_sorting_chain() {
        let s0 = Filling::from_rows(4, &[vec![2, 1, 4, 1, 2], vec![2, 3, 3, 3, 4], vec![1, 3, 2, 1]]).unwrap();
        let s1 = tau(&s0, 1).unwrap();
        assert_eq!(s1.rows(), vec![vec![1, 2, 4, 1, 2], vec![3, 2, 3, 3, 4], vec![3, 1, 2, 1]]);
        let s2 = tau(&s1, 2).unwrap();
        assert_eq!(s2.rows(), vec![vec![1, 2, 4, 1, 2], vec![3, 2, 3, 3, 4], vec![3, 2, 1, 1]]);
        let s3 = tau(&s2, 3).unwrap();
        assert_eq!(s3.rows(), vec![vec![1, 2, 1, 4, 2], vec![3, 2, 3, 3, 4], vec![3, 2, 1, 1]]);
        assert!(is_quinv_sorted(&s3));
        assert!(!is_quinv_sorted(&s0));
    }

    #[test]
    fn tau_on_equal_columns_and_bad_heights() {
        let f = Filling::from_rows(2, &[vec![1, 1, 2], vec![2, 2]]).unwrap();
        assert_eq!(tau(&f, 1).unwrap(), f);
        assert_eq!(tau(&f, 2), Err(Error::UnequalColumnHeights(2, 3)));
    }

    #[test]
    fn figure_filling_perm() {
        let t = QTPoly::t();
        let one_t = &QTPoly::one() + &t;
        let expect = &(&(&QTPoly::one() + &t) + &t.pow(2)) * &one_t.pow(2);
        assert_eq!(perm_sigma(&fig_tab()), expect);
        let twins = Filling::from_rows(2, &[vec![1, 1]]).unwrap();
        assert!(perm_sigma(&twins).is_one());
        let distinct = Filling::from_rows(3, &[vec![1, 2, 3]]).unwrap();
        assert_eq!(perm_sigma(&distinct), QTPoly::t_factorial(3));
    }

    #[test]
    fn sorted_fillings_of_printed_coefficient() {
        let lam = Partition::new(vec![2, 2, 1]).unwrap();
        let all: Vec<Filling> = enumerate_fillings(&lam, 2).filter(|f| f.content() == vec![3, 2]).collect();
        assert_eq!(all.len(), 10);
        let sorted: Vec<&Filling> = all.iter().filter(|f| is_quinv_sorted(f)).collect();
        assert_eq!(sorted.len(), 6);
    }

    #[test]
    fn tau_preserves_content_and_maj() {
        let lam = Partition::new(vec![2, 2, 1]).unwrap();
        for f in enumerate_fillings(&lam, 3) {
            let g = tau(&f, 1).unwrap();
            assert_eq!(g.content(), f.content());
            assert_eq!(maj(&g), maj(&f));
            if f.column(1) != f.column(2) {
                assert_eq!(quinv(&g).abs_diff(quinv(&f)), 1);
            }
        }
    }
}
