use std::collections::HashMap;
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use super::{asep_states, asep_transitions, tazrp_states, tazrp_transitions, AsepState, TazrpState};
use crate::error::{Error, Result};
use crate::shapes::Partition;

/// Continuous-time generator with exact rates. Only positive off-diagonal
/// rates are stored; the diagonal is minus the row sum.
#[derive(Clone, Debug)]
pub struct Generator<S> {
    states: Vec<S>,
    index: HashMap<S, usize>,
    rates: Vec<Vec<(usize, BigRational)>>,
}

impl<S: Clone + Eq + Hash + Send + Sync> Generator<S> {
    /// Builds the generator from a state list and a transition function.
    /// Parallel transitions into one target are merged.
    pub fn build<F>(states: Vec<S>, transitions: F) -> Result<Self>
    where
        F: Fn(&S) -> Result<Vec<(S, BigRational)>> + Sync,
    {
        let index: HashMap<S, usize> = states.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
        let rows: Vec<Result<Vec<(usize, BigRational)>>> = states
            .par_iter()
            .enumerate()
            .map(|(i, s)| {
                let mut merged: Vec<(usize, BigRational)> = Vec::new();
                for (target, rate) in transitions(s)? {
                    let j = *index
                        .get(&target)
                        .ok_or_else(|| Error::Invalid("transition leaves the state space".into()))?;
                    if j == i || rate.is_zero() {
                        continue;
                    }
                    match merged.iter_mut().find(|(k, _)| *k == j) {
                        Some((_, r)) => *r += rate,
                        None => merged.push((j, rate)),
                    }
                }
                merged.sort_by_key(|(j, _)| *j);
                Ok(merged)
            })
            .collect();
        let rates = rows.into_iter().collect::<Result<Vec<_>>>()?;
        Ok(Generator { states, index, rates })
    }

    pub fn states(&self) -> &[S] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn index_of(&self, s: &S) -> Option<usize> {
        self.index.get(s).copied()
    }

    /// Off-diagonal rates out of state `i`.
    pub fn row(&self, i: usize) -> &[(usize, BigRational)] {
        &self.rates[i]
    }

    pub fn exit_rate(&self, i: usize) -> BigRational {
        self.rates[i].iter().fold(BigRational::zero(), |acc, (_, r)| acc + r)
    }

    /// Entry `G[i][j]`, diagonal included.
    pub fn entry(&self, i: usize, j: usize) -> BigRational {
        if i == j {
            -self.exit_rate(i)
        } else {
            self.rates[i].iter().find(|(k, _)| *k == j).map(|(_, r)| r.clone()).unwrap_or_default()
        }
    }

    /// Every state reaches every other along positive rates.
    pub fn is_irreducible(&self) -> bool {
        let n = self.len();
        if n == 0 {
            return false;
        }
        let mut reverse = vec![Vec::new(); n];
        for (i, row) in self.rates.iter().enumerate() {
            for (j, _) in row {
                reverse[*j].push(i);
            }
        }
        let forward: Vec<Vec<usize>> =
            self.rates.iter().map(|row| row.iter().map(|(j, _)| *j).collect()).collect();
        reaches_all(&forward) && reaches_all(&reverse)
    }

    /// `π G` for a row vector `π`.
    pub fn left_apply(&self, pi: &[BigRational]) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); self.len()];
        for (i, row) in self.rates.iter().enumerate() {
            for (j, r) in row {
                out[*j] += &pi[i] * r;
                out[i] -= &pi[i] * r;
            }
        }
        out
    }

    /// The unique probability vector with `π G = 0`, by fraction-free
    /// elimination over the integers.
    pub fn stationary_exact(&self) -> Result<Vec<BigRational>> {
        if !self.is_irreducible() {
            return Err(Error::Reducible);
        }
        let n = self.len();
        // Row k of the system is column k of G; the last equation is
        // replaced by the normalization.
        let mut sys: Vec<Vec<BigRational>> = vec![vec![BigRational::zero(); n + 1]; n];
        for (i, row) in self.rates.iter().enumerate() {
            for (j, r) in row {
                sys[*j][i] += r;
                sys[i][i] -= r;
            }
        }
        for v in sys[n - 1].iter_mut().take(n) {
            *v = BigRational::one();
        }
        sys[n - 1][n] = BigRational::one();
        let ints = sys.into_iter().map(clear_denominators).collect();
        bareiss_solve(ints)
    }
}

fn reaches_all(adj: &[Vec<usize>]) -> bool {
    let mut seen = vec![false; adj.len()];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(i) = stack.pop() {
        for &j in &adj[i] {
            if !seen[j] {
                seen[j] = true;
                stack.push(j);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

fn clear_denominators(row: Vec<BigRational>) -> Vec<BigInt> {
    let l = row.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
    row.into_iter().map(|v| (v * BigRational::from_integer(l.clone())).to_integer()).collect()
}

/// Solves the augmented integer system `[A | b]`.
fn bareiss_solve(mut m: Vec<Vec<BigInt>>) -> Result<Vec<BigRational>> {
    let n = m.len();
    let mut prev = BigInt::one();
    for k in 0..n {
        let p = (k..n).find(|&i| !m[i][k].is_zero()).ok_or(Error::Singular)?;
        m.swap(k, p);
        for i in k + 1..n {
            for j in k + 1..=n {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let mut x = vec![BigRational::zero(); n];
    for k in (0..n).rev() {
        let mut acc = BigRational::from_integer(m[k][n].clone());
        for j in k + 1..n {
            acc -= BigRational::from_integer(m[k][j].clone()) * &x[j];
        }
        x[k] = acc / BigRational::from_integer(m[k][k].clone());
    }
    debug_assert!(x.iter().all(|v| !v.is_negative()));
    Ok(x)
}

impl Generator<AsepState> {
    pub fn asep(lambda: &Partition, n: usize, t: &BigRational) -> Result<Self> {
        if t.is_negative() {
            return Err(Error::Invalid("t must be nonnegative".into()));
        }
        Generator::build(asep_states(lambda, n)?, |s| Ok(asep_transitions(s, t)))
    }
}

impl Generator<TazrpState> {
    pub fn tazrp(lambda: &Partition, n: usize, x: &[BigRational], t: &BigRational) -> Result<Self> {
        if t.is_negative() {
            return Err(Error::Invalid("t must be nonnegative".into()));
        }
        Generator::build(tazrp_states(lambda, n)?, |s| tazrp_transitions(s, x, t))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn two_state_chain() {
        let (a, b) = (r(2, 3), r(5, 7));
        let g = Generator::build(vec![0u8, 1u8], |s| {
            Ok(vec![(1 - s, if *s == 0 { a.clone() } else { b.clone() })])
        })
        .unwrap();
        let pi = g.stationary_exact().unwrap();
        assert_eq!(pi, vec![&b / (&a + &b), &a / (&a + &b)]);
    }

    #[test]
    fn symmetric_asep_is_uniform() {
        let lam = Partition::new(vec![2, 1]).unwrap();
        let g = Generator::asep(&lam, 3, &r(1, 1)).unwrap();
        let pi = g.stationary_exact().unwrap();
        assert!(pi.iter().all(|p| *p == r(1, 6)));
    }

    #[test]
    fn residual_vanishes_exactly() {
        let lam = Partition::new(vec![3, 3, 1]).unwrap();
        let g = Generator::asep(&lam, 4, &r(1, 3)).unwrap();
        let pi = g.stationary_exact().unwrap();
        assert!(g.left_apply(&pi).iter().all(Zero::is_zero));
        let total: BigRational = pi.iter().sum();
        assert!(total.is_one());
    }

    #[test]
    fn rows_sum_to_zero() {
        let lam = Partition::new(vec![2, 1, 1]).unwrap();
        let x = vec![r(2, 3), r(1, 1), r(5, 4)];
        let g = Generator::tazrp(&lam, 3, &x, &r(1, 3)).unwrap();
        for i in 0..g.len() {
            let s: BigRational = (0..g.len()).map(|j| g.entry(i, j)).sum();
            assert!(s.is_zero());
        }
        assert!(g.is_irreducible());
    }

    #[test]
    fn rate_scaling_leaves_stationary_law() {
        let lam = Partition::new(vec![2, 1]).unwrap();
        let t = r(2, 5);
        let g = Generator::asep(&lam, 3, &t).unwrap();
        let c = r(7, 3);
        let scaled = Generator::build(g.states().to_vec(), |s| {
            Ok(asep_transitions(s, &t).into_iter().map(|(u, v)| (u, v * &c)).collect())
        })
        .unwrap();
        assert_eq!(g.stationary_exact().unwrap(), scaled.stationary_exact().unwrap());
    }

    #[test]
    fn reducible_chain_is_rejected() {
        let g = Generator::build(vec![0u8, 1u8], |s| {
            Ok(if *s == 0 { vec![(1, r(1, 1))] } else { vec![] })
        })
        .unwrap();
        assert_eq!(g.stationary_exact(), Err(Error::Reducible));
    }
}
