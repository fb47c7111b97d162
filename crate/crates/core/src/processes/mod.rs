//! Multispecies ASEP and TAZRP on a ring of `n` sites.

mod markov;
mod simulate;
mod verify;

pub use markov::Generator;
pub use simulate::{simulate, total_variation, Clock, Simulation};
pub use verify::{
    tazrp_weight_symbolic, verify_asep_stationarity, verify_tazrp_stationarity, StateCheck,
    StationarityReport,
};

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qtalg::distinct_permutations;
use crate::shapes::Partition;

/// ASEP configuration: species at each site, 0 for a vacancy.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AsepState(pub Vec<u32>);

impl AsepState {
    pub fn sites(&self) -> &[u32] {
        &self.0
    }

    pub fn species(&self) -> Partition {
        Partition::from_weak(&self.0)
    }
}

impl fmt::Display for AsepState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// TAZRP configuration: the multiset of species at each site, each stored
/// in decreasing order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TazrpState(Vec<Vec<u32>>);

impl TazrpState {
    pub fn new(mut sites: Vec<Vec<u32>>) -> Self {
        for s in &mut sites {
            s.sort_unstable_by(|a, b| b.cmp(a));
        }
        TazrpState(sites)
    }

    pub fn sites(&self) -> &[Vec<u32>] {
        &self.0
    }

    pub fn species(&self) -> Partition {
        let all: Vec<u32> = self.0.iter().flatten().copied().collect();
        Partition::from_weak(&all)
    }
}

/// Sites separated by `|`, `-` for an empty site. Species are written as
/// digits, or bracketed comma lists when any exceeds 9.
impl fmt::Display for TazrpState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wide = self.0.iter().flatten().any(|&s| s > 9);
        let sites: Vec<String> = self
            .0
            .iter()
            .map(|s| {
                if s.is_empty() {
                    "-".to_string()
                } else if wide {
                    format!("[{}]", s.iter().map(u32::to_string).collect::<Vec<_>>().join(","))
                } else {
                    s.iter().map(u32::to_string).collect()
                }
            })
            .collect();
        f.write_str(&sites.join("|"))
    }
}

impl Serialize for TazrpState {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_string().serialize(s)
    }
}

impl<'de> Deserialize<'de> for TazrpState {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        crate::parse::tazrp_state(&s).map_err(serde::de::Error::custom)
    }
}

/// `A(λ, n)`: all arrangements of the parts of `λ` padded with vacancies.
pub fn asep_states(lambda: &Partition, n: usize) -> Result<Vec<AsepState>> {
    if lambda.len() > n {
        return Err(Error::ShapeTooWide { len: lambda.len(), n });
    }
    let mut base = lambda.parts().to_vec();
    base.resize(n, 0);
    Ok(distinct_permutations(&base).into_iter().map(AsepState).collect())
}

/// Swaps across each bond `(j, j+1 mod n)`: rate 1 when the left species is
/// smaller, `t` when it is larger. Zero rates are dropped.
pub fn asep_transitions(s: &AsepState, t: &BigRational) -> Vec<(AsepState, BigRational)> {
    let n = s.0.len();
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    for j in 0..n {
        let k = (j + 1) % n;
        let (a, b) = (s.0[j], s.0[k]);
        if a == b {
            continue;
        }
        let rate = if a < b { BigRational::one() } else { t.clone() };
        if rate.is_zero() {
            continue;
        }
        let mut next = s.0.clone();
        next.swap(j, k);
        out.push((AsepState(next), rate));
    }
    out
}

/// `T(λ, n)`: all ways to place the multiset `λ` on `n` sites.
pub fn tazrp_states(lambda: &Partition, n: usize) -> Result<Vec<TazrpState>> {
    if n == 0 {
        return Err(Error::Invalid("a ring needs at least one site".into()));
    }
    let mult = lambda.multiplicities();
    let mut species: Vec<(u32, u32)> = Vec::new();
    for (size, &m) in mult.iter().enumerate().rev() {
        if m > 0 {
            species.push((size as u32, m));
        }
    }
    let mut states = vec![vec![Vec::new(); n]];
    for (size, m) in species {
        let mut next = Vec::new();
        for st in &states {
            for comp in weak_compositions(m, n) {
                let mut s = st.clone();
                for (site, &k) in comp.iter().enumerate() {
                    s[site].extend(std::iter::repeat_n(size, k as usize));
                }
                next.push(s);
            }
        }
        states = next;
    }
    Ok(states.into_iter().map(TazrpState::new).collect())
}

/// Weak compositions of `m` into `k` parts, lexicographically decreasing.
fn weak_compositions(m: u32, k: usize) -> Vec<Vec<u32>> {
    if k == 1 {
        return vec![vec![m]];
    }
    let mut out = Vec::new();
    for first in (0..=m).rev() {
        for mut rest in weak_compositions(m - first, k - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// One aggregated move per (site, species): a species-`r` particle leaves
/// site `j` for `j + 1` at total rate `x_j^{-1} t^{d} [c]_t`, where `c`
/// counts species-`r` particles at `j` and `d` the larger ones there.
pub fn tazrp_transitions(
    s: &TazrpState,
    x: &[BigRational],
    t: &BigRational,
) -> Result<Vec<(TazrpState, BigRational)>> {
    let n = s.0.len();
    if x.len() != n {
        return Err(Error::LengthMismatch { expected: n, got: x.len() });
    }
    let mut out = Vec::new();
    for (j, site) in s.0.iter().enumerate() {
        if site.is_empty() {
            continue;
        }
        if x[j] <= BigRational::zero() {
            return Err(Error::Invalid("site rates x_j must be positive".into()));
        }
        let mut species: Vec<u32> = site.clone();
        species.dedup();
        for r in species {
            let c = site.iter().filter(|&&v| v == r).count();
            let d = site.iter().filter(|&&v| v > r).count();
            let mut bracket = BigRational::zero();
            let mut power = num_traits::pow(t.clone(), d);
            for _ in 0..c {
                bracket += &power;
                power *= t;
            }
            let rate = bracket / &x[j];
            if rate.is_zero() {
                continue;
            }
            let mut next = s.0.clone();
            let pos = next[j].iter().position(|&v| v == r).unwrap();
            next[j].remove(pos);
            next[(j + 1) % n].push(r);
            out.push((TazrpState::new(next), rate));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::tazrp_state;

    fn p(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn asep_state_space() {
        let states = asep_states(&p(&[3, 3, 1]), 4).unwrap();
        assert_eq!(states.len(), 12);
        let printed = [
            [3, 3, 1, 0], [3, 3, 0, 1], [3, 1, 3, 0], [3, 0, 3, 1], [3, 1, 0, 3], [3, 0, 1, 3],
            [1, 3, 3, 0], [0, 3, 3, 1], [1, 3, 0, 3], [0, 3, 1, 3], [1, 0, 3, 3], [0, 1, 3, 3],
        ];
        for s in printed {
            assert!(states.contains(&AsepState(s.to_vec())));
        }
        assert_eq!(asep_states(&p(&[1]), 1).unwrap().len(), 1);
        assert!(matches!(asep_states(&p(&[1, 1]), 1), Err(Error::ShapeTooWide { .. })));
    }

    #[test]
    fn asep_count_is_multinomial() {
        for n in 1..=6usize {
            for size in 1..=n as u32 {
                for lam in Partition::all_of_size(size).into_iter().filter(|l| l.len() <= n) {
                    let mut mult = lam.multiplicities();
                    mult[0] = (n - lam.len()) as u32;
                    let mut expect: u64 = (1..=n as u64).product();
                    for &m in &mult {
                        expect /= (1..=m as u64).product::<u64>();
                    }
                    assert_eq!(asep_states(&lam, n).unwrap().len() as u64, expect);
                }
            }
        }
    }

    #[test]
    fn asep_printed_jumps() {
        let t = r(1, 3);
        let from = AsepState(vec![3, 1, 3, 0]);
        let mut got = asep_transitions(&from, &t);
        got.sort();
        let mut expect = vec![
            (AsepState(vec![1, 3, 3, 0]), t.clone()),
            (AsepState(vec![3, 1, 0, 3]), t.clone()),
            (AsepState(vec![0, 1, 3, 3]), r(1, 1)),
            (AsepState(vec![3, 3, 1, 0]), r(1, 1)),
        ];
        expect.sort();
        assert_eq!(got, expect);

        let from = AsepState(vec![0, 3, 3, 1]);
        let mut got = asep_transitions(&from, &t);
        got.sort();
        let mut expect = vec![
            (AsepState(vec![1, 3, 3, 0]), t.clone()),
            (AsepState(vec![3, 0, 3, 1]), r(1, 1)),
            // printed with rate 1, but 3 > 1 swaps at rate t as in the first list
            (AsepState(vec![0, 3, 1, 3]), t.clone()),
        ];
        expect.sort();
        assert_eq!(got, expect);
        assert!(asep_transitions(&AsepState(vec![2, 2, 2]), &t).is_empty());
    }

    #[test]
    fn tazrp_state_space() {
        let states = tazrp_states(&p(&[3, 1, 1]), 3).unwrap();
        assert_eq!(states.len(), 18);
        let printed = [
            "311|·|·", "31|1|·", "31|·|1", "3|11|·", "3|1|1", "3|·|11", "11|3|·", "11|·|3", "1|31|·",
            "1|1|3", "1|3|1", "1|·|31", "·|311|·", "·|31|1", "·|3|11", "·|11|3", "·|1|31", "·|·|311",
        ];
        for s in printed {
            assert!(states.contains(&tazrp_state(s).unwrap()), "{s}");
        }
        assert_eq!(tazrp_states(&p(&[1]), 2).unwrap().len(), 2);
    }

    /// Product over species of multisets of size m_i on n sites.
    #[test]
    fn tazrp_count_oracle() {
        fn binom(a: u64, b: u64) -> u64 {
            (0..b).fold(1, |acc, i| acc * (a - i) / (i + 1))
        }
        for size in 1..=5 {
            for lam in Partition::all_of_size(size) {
                for n in 1..=4u64 {
                    let expect: u64 = lam
                        .multiplicities()
                        .iter()
                        .filter(|&&m| m > 0)
                        .map(|&m| binom(m as u64 + n - 1, m as u64))
                        .product();
                    assert_eq!(tazrp_states(&lam, n as usize).unwrap().len() as u64, expect);
                }
            }
        }
    }

    #[test]
    fn tazrp_printed_jumps() {
        let x = vec![r(2, 3), r(1, 1), r(5, 4)];
        let t = r(1, 3);
        let from = tazrp_state("-|311|-").unwrap();
        let got = tazrp_transitions(&from, &x, &t).unwrap();
        let inv2 = r(1, 1) / &x[1];
        assert!(got.contains(&(tazrp_state("-|11|3").unwrap(), inv2.clone())));
        assert!(got.contains(&(tazrp_state("-|31|1").unwrap(), &inv2 * (&t + &t * &t))));
        assert_eq!(got.len(), 2);

        let from = tazrp_state("-|1|31").unwrap();
        let got = tazrp_transitions(&from, &x, &t).unwrap();
        let inv3 = r(1, 1) / &x[2];
        assert!(got.contains(&(tazrp_state("3|1|1").unwrap(), inv3.clone())));
        assert!(got.contains(&(tazrp_state("1|1|3").unwrap(), &inv3 * &t)));
        assert!(got.contains(&(tazrp_state("-|-|311").unwrap(), inv2)));
        assert_eq!(got.len(), 3);
    }

    #[test]
    fn transitions_conserve_particles() {
        let t = r(2, 5);
        let x = vec![r(2, 3), r(1, 1), r(5, 4)];
        for lam in [p(&[2, 1, 1]), p(&[3, 1, 1]), p(&[2, 2])] {
            for s in tazrp_states(&lam, 3).unwrap() {
                for (u, _) in tazrp_transitions(&s, &x, &t).unwrap() {
                    assert_eq!(u.species(), lam);
                }
            }
            if lam.len() <= 4 {
                for s in asep_states(&lam, 4).unwrap() {
                    for (u, _) in asep_transitions(&s, &t) {
                        assert_eq!(u.species(), lam);
                    }
                }
            }
        }
    }

    #[test]
    fn display_forms() {
        let s = TazrpState::new(vec![vec![], vec![1, 2], vec![1]]);
        assert_eq!(s.to_string(), "-|21|1");
        let w = TazrpState::new(vec![vec![10, 2], vec![]]);
        assert_eq!(w.to_string(), "[10,2]|-");
        assert_eq!(tazrp_state(&w.to_string()).unwrap(), w);
        assert_eq!(AsepState(vec![4, 1, 0]).to_string(), "(4,1,0)");
    }
}
