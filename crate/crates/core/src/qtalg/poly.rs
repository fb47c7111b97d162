//! Sparse polynomials in `q` and `t` with arbitrary-precision integer
//! coefficients.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// The monomial `q^q t^t`.
///
/// Ordered graded-lexicographically (total degree first, then the power of
/// `q`), which is the order used by [`QTPoly::div_exact`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Mono {
    pub q: u32,
    pub t: u32,
}

impl Mono {
    pub const ONE: Mono = Mono { q: 0, t: 0 };

    pub fn new(q: u32, t: u32) -> Self {
        Mono { q, t }
    }

    pub fn degree(self) -> u32 {
        self.q + self.t
    }

    fn divides(self, other: Mono) -> bool {
        self.q <= other.q && self.t <= other.t
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.degree(), self.q).cmp(&(other.degree(), other.q))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Mul for Mono {
    type Output = Mono;
    fn mul(self, rhs: Mono) -> Mono {
        Mono::new(self.q + rhs.q, self.t + rhs.t)
    }
}

/// Integer-coefficient polynomial in `q, t`. Zero coefficients are never
/// stored, so structural equality is polynomial equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct QTPoly {
    terms: BTreeMap<Mono, BigInt>,
}

impl QTPoly {
    pub fn zero() -> Self {
        QTPoly::default()
    }

    pub fn one() -> Self {
        QTPoly::constant(1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        QTPoly::monomial(c, 0, 0)
    }

    pub fn monomial(c: impl Into<BigInt>, q: u32, t: u32) -> Self {
        let mut p = QTPoly::zero();
        p.add_term(Mono::new(q, t), c.into());
        p
    }

    pub fn q() -> Self {
        QTPoly::monomial(1, 1, 0)
    }

    pub fn t() -> Self {
        QTPoly::monomial(1, 0, 1)
    }

    /// `1 - q^a t^b`.
    pub fn one_minus(a: u32, b: u32) -> Self {
        QTPoly::one() - QTPoly::monomial(1, a, b)
    }

    /// The t-integer `[k]_t = 1 + t + ... + t^(k-1)`.
    pub fn t_integer(k: u32) -> Self {
        let mut p = QTPoly::zero();
        for i in 0..k {
            p.add_term(Mono::new(0, i), BigInt::one());
        }
        p
    }

    /// The t-factorial `[k]_t!`.
    pub fn t_factorial(k: u32) -> Self {
        (2..=k).fold(QTPoly::one(), |acc, i| &acc * &QTPoly::t_integer(i))
    }

    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (u32, u32, C)>,
        C: Into<BigInt>,
    {
        let mut p = QTPoly::zero();
        for (a, b, c) in terms {
            p.add_term(Mono::new(a, b), c.into());
        }
        p
    }

    pub fn add_term(&mut self, m: Mono, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.coeff(Mono::ONE).is_one()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: Mono) -> BigInt {
        self.terms.get(&m).cloned().unwrap_or_default()
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (Mono, &BigInt)> + '_ {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    pub fn leading(&self) -> Option<(Mono, &BigInt)> {
        self.terms.iter().next_back().map(|(m, c)| (*m, c))
    }

    pub fn max_degree_q(&self) -> u32 {
        self.terms.keys().map(|m| m.q).max().unwrap_or(0)
    }

    pub fn max_degree_t(&self) -> u32 {
        self.terms.keys().map(|m| m.t).max().unwrap_or(0)
    }

    pub fn scale(&self, c: &BigInt) -> QTPoly {
        if c.is_zero() {
            return QTPoly::zero();
        }
        QTPoly {
            terms: self.terms.iter().map(|(m, x)| (*m, x * c)).collect(),
        }
    }

    pub fn shift(&self, by: Mono) -> QTPoly {
        QTPoly {
            terms: self.terms.iter().map(|(m, x)| (*m * by, x.clone())).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> QTPoly {
        (0..e).fold(QTPoly::one(), |acc, _| &acc * self)
    }

    /// Exact quotient `self / divisor`, or `None` when the division leaves a
    /// remainder. A single divisor is a Gröbner basis of the ideal it
    /// generates, so a nonzero normal form means non-divisibility.
    pub fn div_exact(&self, divisor: &QTPoly) -> Option<QTPoly> {
        let (lm, lc) = divisor.leading()?;
        let lc = lc.clone();
        let mut rem = self.clone();
        let mut quot = QTPoly::zero();
        while let Some((m, c)) = rem.leading() {
            if !lm.divides(m) {
                return None;
            }
            let (qc, r) = c.div_rem(&lc);
            if !r.is_zero() {
                return None;
            }
            let shift = Mono::new(m.q - lm.q, m.t - lm.t);
            for (dm, dc) in divisor.terms.iter() {
                rem.add_term(*dm * shift, -(dc * &qc));
            }
            quot.add_term(shift, qc);
        }
        Some(quot)
    }

    pub fn eval(&self, q: &BigRational, t: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for (m, c) in self.terms.iter() {
            acc += BigRational::from_integer(c.clone())
                * num_traits::pow(q.clone(), m.q as usize)
                * num_traits::pow(t.clone(), m.t as usize);
        }
        acc
    }

    /// Substitute `q = 1`, leaving a polynomial in `t` alone.
    pub fn at_q_one(&self) -> QTPoly {
        let mut p = QTPoly::zero();
        for (m, c) in self.terms.iter() {
            p.add_term(Mono::new(0, m.t), c.clone());
        }
        p
    }

    /// Substitute `q -> q^a t^b`-style monomial for the single variable `x`
    /// of a univariate integer polynomial given by its coefficient list.
    pub fn from_univariate_in(coeffs: &[BigInt], var: Mono) -> QTPoly {
        let mut p = QTPoly::zero();
        for (k, c) in coeffs.iter().enumerate() {
            let k = k as u32;
            p.add_term(Mono::new(var.q * k, var.t * k), c.clone());
        }
        p
    }

    /// Human-readable form, terms ascending by degree: `1 + q + 2qt^2`.
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = mono_text(*m);
            if mono.is_empty() {
                out.push_str(&abs.to_string());
            } else {
                if !abs.is_one() {
                    out.push_str(&abs.to_string());
                }
                out.push_str(&mono);
            }
        }
        out
    }
}

pub(crate) fn mono_text(m: Mono) -> String {
    let mut s = String::new();
    for (name, e) in [("q", m.q), ("t", m.t)] {
        match e {
            0 => {}
            1 => s.push_str(name),
            _ => s.push_str(&format!("{name}^{e}")),
        }
    }
    s
}

impl fmt::Display for QTPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl AddAssign<&QTPoly> for QTPoly {
    fn add_assign(&mut self, rhs: &QTPoly) {
        for (m, c) in rhs.terms.iter() {
            self.add_term(*m, c.clone());
        }
    }
}

impl Add<&QTPoly> for &QTPoly {
    type Output = QTPoly;
    fn add(self, rhs: &QTPoly) -> QTPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for QTPoly {
    type Output = QTPoly;
    fn add(mut self, rhs: QTPoly) -> QTPoly {
        self += &rhs;
        self
    }
}

impl Neg for QTPoly {
    type Output = QTPoly;
    fn neg(self) -> QTPoly {
        QTPoly {
            terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect(),
        }
    }
}

impl Neg for &QTPoly {
    type Output = QTPoly;
    fn neg(self) -> QTPoly {
        self.clone().neg()
    }
}

impl Sub<&QTPoly> for &QTPoly {
    type Output = QTPoly;
    fn sub(self, rhs: &QTPoly) -> QTPoly {
        let mut out = self.clone();
        for (m, c) in rhs.terms.iter() {
            out.add_term(*m, -c.clone());
        }
        out
    }
}

impl Sub for QTPoly {
    type Output = QTPoly;
    fn sub(self, rhs: QTPoly) -> QTPoly {
        &self - &rhs
    }
}

impl Mul<&QTPoly> for &QTPoly {
    type Output = QTPoly;
    fn mul(self, rhs: &QTPoly) -> QTPoly {
        let mut out = QTPoly::zero();
        for (ma, ca) in self.terms.iter() {
            for (mb, cb) in rhs.terms.iter() {
                out.add_term(*ma * *mb, ca * cb);
            }
        }
        out
    }
}

impl Mul for QTPoly {
    type Output = QTPoly;
    fn mul(self, rhs: QTPoly) -> QTPoly {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(terms: &[(u32, u32, i64)]) -> QTPoly {
        QTPoly::from_terms(terms.iter().copied())
    }

    #[test]
    fn no_zero_coefficients_are_stored() {
        let p = poly(&[(1, 0, 2), (1, 0, -2), (0, 0, 1)]);
        assert_eq!(p.len(), 1);
        assert!((&p - &p).is_zero());
    }

    #[test]
    fn exact_division_recovers_factor() {
        let a = QTPoly::one_minus(1, 2);
        let b = poly(&[(0, 0, 2), (1, 1, 3), (0, 3, -1)]);
        let prod = &a * &b;
        assert_eq!(prod.div_exact(&a), Some(b.clone()));
        assert_eq!(prod.div_exact(&b), Some(a));
        assert_eq!(b.div_exact(&QTPoly::one_minus(1, 1)), None);
    }

    #[test]
    fn one_minus_t_squared_over_one_minus_t() {
        let num = QTPoly::one_minus(0, 2);
        assert_eq!(num.div_exact(&QTPoly::one_minus(0, 1)), Some(poly(&[(0, 0, 1), (0, 1, 1)])));
    }

    #[test]
    fn t_factorial_values() {
        assert_eq!(QTPoly::t_factorial(1), QTPoly::one());
        assert_eq!(QTPoly::t_factorial(3), poly(&[(0, 0, 1), (0, 1, 2), (0, 2, 2), (0, 3, 1)]));
    }

    #[test]
    fn text_rendering() {
        assert_eq!(poly(&[(0, 0, 1), (1, 1, 2), (0, 2, -1)]).to_text(), "1 - t^2 + 2qt");
        assert_eq!(QTPoly::zero().to_text(), "0");
    }
}
