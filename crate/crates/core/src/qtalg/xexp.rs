use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{QTPoly, QTRational};
use crate::error::{Error, Result};
use crate::shapes::Partition;

/// Monomial expansion of a polynomial in `x_1..x_n` with coefficients in
/// `Q(q, t)`. Zero coefficients are never stored.
#[derive(Clone, Debug, Default)]
pub struct XExpansion {
    n: usize,
    terms: BTreeMap<Vec<u32>, QTRational>,
}

impl XExpansion {
    pub fn new(n: usize) -> Self {
        XExpansion { n, terms: BTreeMap::new() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &QTRational)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, exponent: Vec<u32>, coeff: &QTRational) {
        assert_eq!(exponent.len(), self.n, "exponent vector length");
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&exponent) {
            Some(c) => {
                let s = &*c + coeff;
                if s.is_zero() {
                    self.terms.remove(&exponent);
                } else {
                    *c = s;
                }
            }
            None => {
                self.terms.insert(exponent, coeff.clone());
            }
        }
    }

    /// Adds every term of `other` into `self`.
    pub fn merge(&mut self, other: &XExpansion) {
        assert_eq!(self.n, other.n);
        for (e, c) in &other.terms {
            self.add_term(e.clone(), c);
        }
    }

    pub fn coefficient(&self, exponent: &[u32]) -> Result<QTRational> {
        if exponent.len() != self.n {
            return Err(Error::LengthMismatch { expected: self.n, got: exponent.len() });
        }
        Ok(self.terms.get(exponent).cloned().unwrap_or_default())
    }

    pub fn scale(&self, c: &QTRational) -> XExpansion {
        let mut out = XExpansion::new(self.n);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), &(v * c));
        }
        out
    }

    pub fn is_polynomial_in_qt(&self) -> bool {
        self.terms.values().all(QTRational::is_polynomial)
    }

    /// Applies the variable permutation `x_i -> x_{perm[i]}`.
    pub fn permute_variables(&self, perm: &[usize]) -> XExpansion {
        assert_eq!(perm.len(), self.n);
        let mut out = XExpansion::new(self.n);
        for (e, c) in &self.terms {
            let mut f = vec![0; self.n];
            for (i, &p) in perm.iter().enumerate() {
                f[p] = e[i];
            }
            out.add_term(f, c);
        }
        out
    }

    /// First exponent vector (in sorted order) whose coefficients differ,
    /// with both coefficients.
    pub fn first_difference(
        &self,
        other: &XExpansion,
    ) -> Result<Option<(Vec<u32>, QTRational, QTRational)>> {
        if self.n != other.n {
            return Err(Error::ArityMismatch(self.n, other.n));
        }
        let mut keys: Vec<&Vec<u32>> = self.terms.keys().chain(other.terms.keys()).collect();
        keys.sort();
        keys.dedup();
        for k in keys {
            let a = self.terms.get(k).cloned().unwrap_or_default();
            let b = other.terms.get(k).cloned().unwrap_or_default();
            if a != b {
                return Ok(Some((k.clone(), a, b)));
            }
        }
        Ok(None)
    }

    /// Coefficients in the monomial symmetric basis. Fails unless every
    /// exponent vector carries the same coefficient as its decreasing
    /// rearrangement.
    pub fn monomial_basis(&self) -> Result<BTreeMap<Partition, QTRational>> {
        let mut out = BTreeMap::new();
        let mut orbit_sizes: BTreeMap<Vec<u32>, usize> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut sorted = e.clone();
            sorted.sort_unstable_by(|a, b| b.cmp(a));
            match self.terms.get(&sorted) {
                Some(d) if d == c => {}
                _ => return Err(Error::NotSymmetric(e.clone())),
            }
            *orbit_sizes.entry(sorted.clone()).or_default() += 1;
            if &sorted == e {
                out.insert(Partition::from_weak(&sorted), c.clone());
            }
        }
        for (sorted, seen) in orbit_sizes {
            if seen != distinct_permutations(&sorted).len() {
                let missing = distinct_permutations(&sorted).into_iter().find(|p| !self.terms.contains_key(p));
                return Err(Error::NotSymmetric(missing.unwrap_or(sorted)));
            }
        }
        Ok(out)
    }

    pub fn is_symmetric(&self) -> bool {
        self.monomial_basis().is_ok()
    }

    /// Rebuilds an expansion from monomial-basis coefficients.
    pub fn from_monomial_basis(n: usize, basis: &BTreeMap<Partition, QTRational>) -> XExpansion {
        let mut out = XExpansion::new(n);
        for (mu, c) in basis {
            if mu.len() > n {
                continue;
            }
            let mut base: Vec<u32> = mu.parts().to_vec();
            base.resize(n, 0);
            for perm in distinct_permutations(&base) {
                out.add_term(perm, c);
            }
        }
        out
    }

    /// Sum of all coefficients (every `x_i = 1`).
    pub fn at_x_ones(&self) -> QTRational {
        self.terms.values().fold(QTRational::zero(), |acc, c| &acc + c)
    }

    /// Exact value at rational `x`, `q`, `t`.
    pub fn eval(&self, x: &[BigRational], q: &BigRational, t: &BigRational) -> Result<BigRational> {
        if x.len() != self.n {
            return Err(Error::LengthMismatch { expected: self.n, got: x.len() });
        }
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut mono = BigRational::one();
            for (xi, &k) in x.iter().zip(e) {
                mono *= num_traits::pow(xi.clone(), k as usize);
            }
            acc += mono * c.eval(q, t)?;
        }
        Ok(acc)
    }

    /// Polynomial with a `QTPoly` coefficient per monomial, when every
    /// coefficient is denominator-free.
    pub fn polynomial_terms(&self) -> Option<BTreeMap<Vec<u32>, QTPoly>> {
        self.terms
            .iter()
            .map(|(e, c)| c.as_poly().map(|p| (e.clone(), p.clone())))
            .collect()
    }
}

impl PartialEq for XExpansion {
    fn eq(&self, other: &Self) -> bool {
        matches!(self.first_difference(other), Ok(None))
    }
}

/// All distinct rearrangements of `v`, in lexicographic order.
pub fn distinct_permutations(v: &[u32]) -> Vec<Vec<u32>> {
    let mut cur = v.to_vec();
    cur.sort_unstable();
    let mut out = vec![cur.clone()];
    // next_permutation over a multiset
    loop {
        let Some(i) = (0..cur.len().saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            break;
        };
        let j = (i + 1..cur.len()).rev().find(|&j| cur[j] > cur[i]).unwrap();
        cur.swap(i, j);
        cur[i + 1..].reverse();
        out.push(cur.clone());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_expansion_coefficients() {
        let z = XExpansion::new(3);
        assert!(z.coefficient(&[1, 0, 2]).unwrap().is_zero());
        assert!(matches!(z.coefficient(&[1, 0]), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn cancellation_removes_entries() {
        let mut f = XExpansion::new(2);
        let c = QTRational::with_factors(QTPoly::one(), &[(1, 1)]);
        f.add_term(vec![1, 0], &c);
        f.add_term(vec![1, 0], &(-&c));
        assert!(f.is_empty());
    }

    #[test]
    fn monomial_basis_detects_asymmetry() {
        let mut f = XExpansion::new(2);
        f.add_term(vec![1, 0], &QTRational::one());
        assert!(matches!(f.monomial_basis(), Err(Error::NotSymmetric(_))));
        f.add_term(vec![0, 1], &QTRational::one());
        let m = f.monomial_basis().unwrap();
        assert_eq!(m.len(), 1);
        assert_eq!(XExpansion::from_monomial_basis(2, &m), f);
    }

    #[test]
    fn multiset_permutations() {
        assert_eq!(distinct_permutations(&[1, 0, 1]).len(), 3);
        assert_eq!(distinct_permutations(&[2, 1, 0, 0]).len(), 12);
        assert_eq!(distinct_permutations(&[]).len(), 1);
    }
}
