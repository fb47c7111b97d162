//! Rational functions in `q, t` whose denominators are products of factors
//! `(1 - q^a t^b)`.
//!
//! Every denominator appearing in the Macdonald formulas has this shape, so
//! no general multivariate gcd is needed. Normalization splits each factor
//! into the pieces `psi_d(q^a' t^b')` (with `psi_1(x) = 1 - x` and
//! `psi_d = Phi_d` otherwise, `gcd(a', b') = 1`), cancels every piece that
//! divides the numerator, and regroups the survivors into `(1 - q^a t^b)`
//! factors. The result is a canonical form: equal functions normalize to
//! identical numerators and factor multisets.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::{Mono, QTPoly};
use crate::error::{Error, Result};

/// Denominator multiset: factor `(1 - q^a t^b)` keyed by `(a, b)`.
pub type Denominator = BTreeMap<(u32, u32), u32>;

#[derive(Clone, Debug, Default)]
pub struct QTRational {
    num: QTPoly,
    den: Denominator,
}

fn cyclotomic_cache() -> &'static Mutex<HashMap<u32, Vec<BigInt>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Vec<BigInt>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Coefficients (ascending) of `psi_d(x)`: `1 - x` for `d = 1`, the
/// cyclotomic polynomial `Phi_d(x)` otherwise. Then
/// `1 - x^g = prod_{d | g} psi_d(x)`.
fn psi_coeffs(d: u32) -> Vec<BigInt> {
    if let Some(c) = cyclotomic_cache().lock().unwrap().get(&d) {
        return c.clone();
    }
    let coeffs = if d == 1 {
        vec![BigInt::one(), -BigInt::one()]
    } else {
        // x^d - 1 = prod_{e | d} Phi_e(x); divide out the proper divisors.
        let mut p = vec![BigInt::zero(); d as usize + 1];
        p[0] = -BigInt::one();
        p[d as usize] = BigInt::one();
        for e in divisors(d).into_iter().filter(|&e| e < d) {
            let mut f = psi_coeffs(e);
            if e == 1 {
                f = vec![-BigInt::one(), BigInt::one()];
            }
            p = univariate_div_exact(&p, &f);
        }
        p
    };
    cyclotomic_cache().lock().unwrap().insert(d, coeffs.clone());
    coeffs
}

fn univariate_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let lead = den[dd].clone();
    let mut quot = vec![BigInt::zero(); rem.len().saturating_sub(dd)];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dd].clone() / &lead;
        for (i, dc) in den.iter().enumerate() {
            rem[k + i] -= &c * dc;
        }
        quot[k] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero));
    quot
}

pub(crate) fn divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

/// Splits the factor key `(a, b)` into its primitive monomial and `gcd`.
fn primitive(a: u32, b: u32) -> (Mono, u32) {
    let g = a.gcd(&b);
    (Mono::new(a / g, b / g), g)
}

fn psi_poly(m: Mono, d: u32) -> QTPoly {
    QTPoly::from_univariate_in(&psi_coeffs(d), m)
}

/// Piece multiset of a denominator: `(primitive monomial, d) -> count`.
fn pieces(den: &Denominator) -> BTreeMap<(Mono, u32), u32> {
    let mut out = BTreeMap::new();
    for (&(a, b), &mult) in den {
        let (m, g) = primitive(a, b);
        for d in divisors(g) {
            *out.entry((m, d)).or_insert(0) += mult;
        }
    }
    out
}

/// Cancels every piece that divides `num`, returning the reduced numerator
/// and the surviving pieces.
fn cancel(mut num: QTPoly, den: &Denominator) -> (QTPoly, BTreeMap<(Mono, u32), u32>) {
    let mut ps = pieces(den);
    for ((m, d), count) in ps.iter_mut() {
        if *count == 0 {
            continue;
        }
        let p = psi_poly(*m, *d);
        while *count > 0 {
            match num.div_exact(&p) {
                Some(q) => {
                    num = q;
                    *count -= 1;
                }
                None => break,
            }
        }
    }
    ps.retain(|_, c| *c > 0);
    (num, ps)
}

impl QTRational {
    pub fn zero() -> Self {
        QTRational::default()
    }

    pub fn one() -> Self {
        QTRational::from_poly(QTPoly::one())
    }

    pub fn from_poly(num: QTPoly) -> Self {
        QTRational { num, den: Denominator::new() }
    }

    pub fn from_int(c: i64) -> Self {
        QTRational::from_poly(QTPoly::constant(c))
    }

    /// Builds `num / prod (1 - q^a t^b)^mult` and normalizes it.
    pub fn new(num: QTPoly, den: Denominator) -> Result<Self> {
        if den.contains_key(&(0, 0)) {
            return Err(Error::Invalid("denominator factor (1 - q^0 t^0) is zero".into()));
        }
        Ok(QTRational::normalized(num, den))
    }

    /// `num / prod_i (1 - q^{a_i} t^{b_i})`.
    pub fn with_factors(num: QTPoly, factors: &[(u32, u32)]) -> Self {
        let mut den = Denominator::new();
        for &f in factors {
            assert!(f != (0, 0), "zero denominator factor");
            *den.entry(f).or_insert(0) += 1;
        }
        QTRational::normalized(num, den)
    }

    fn normalized(num: QTPoly, den: Denominator) -> Self {
        if num.is_zero() {
            return QTRational::zero();
        }
        let den: Denominator = den.into_iter().filter(|&(_, m)| m > 0).collect();
        if den.is_empty() {
            return QTRational::from_poly(num);
        }
        let (mut num, mut ps) = cancel(num, &den);
        // Regroup surviving pieces: per primitive monomial, repeatedly emit
        // `1 - m^d` for the largest surviving d and multiply the numerator by
        // whichever pieces of that factor were not present.
        let mut out = Denominator::new();
        let monos: Vec<Mono> = {
            let mut v: Vec<Mono> = ps.keys().map(|(m, _)| *m).collect();
            v.dedup();
            v
        };
        for m in monos {
            loop {
                let largest = ps.keys().filter(|(pm, _)| *pm == m).map(|(_, d)| *d).max();
                let Some(d) = largest else { break };
                *out.entry((m.q * d, m.t * d)).or_insert(0) += 1;
                for e in divisors(d) {
                    match ps.get_mut(&(m, e)) {
                        Some(c) => {
                            *c -= 1;
                            if *c == 0 {
                                ps.remove(&(m, e));
                            }
                        }
                        None => num = &num * &psi_poly(m, e),
                    }
                }
            }
        }
        QTRational { num, den: out }
    }

    pub fn numerator(&self) -> &QTPoly {
        &self.num
    }

    pub fn denominator(&self) -> &Denominator {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// True when the denominator multiset is empty.
    pub fn is_polynomial(&self) -> bool {
        self.den.is_empty()
    }

    pub fn as_poly(&self) -> Option<&QTPoly> {
        self.is_polynomial().then_some(&self.num)
    }

    pub fn denominator_poly(&self) -> QTPoly {
        let mut p = QTPoly::one();
        for (&(a, b), &m) in &self.den {
            p = &p * &QTPoly::one_minus(a, b).pow(m);
        }
        p
    }

    /// Re-runs normalization; idempotent on normalized values.
    pub fn renormalize(&self) -> Self {
        QTRational::normalized(self.num.clone(), self.den.clone())
    }

    fn lcm_den(a: &Denominator, b: &Denominator) -> Denominator {
        let mut out = a.clone();
        for (&k, &m) in b {
            let e = out.entry(k).or_insert(0);
            *e = (*e).max(m);
        }
        out
    }

    /// Numerator scaled up to the common denominator `target`.
    fn lift(&self, target: &Denominator) -> QTPoly {
        let mut p = self.num.clone();
        for (&(a, b), &m) in target {
            let have = self.den.get(&(a, b)).copied().unwrap_or(0);
            if m > have {
                p = &p * &QTPoly::one_minus(a, b).pow(m - have);
            }
        }
        p
    }

    /// Equality decided by cross-multiplication over the common factor
    /// product.
    pub fn equals(&self, other: &QTRational) -> bool {
        let l = QTRational::lcm_den(&self.den, &other.den);
        self.lift(&l) == other.lift(&l)
    }

    pub fn mul_poly(&self, p: &QTPoly) -> QTRational {
        QTRational::normalized(&self.num * p, self.den.clone())
    }

    /// Exact division of the numerator by a polynomial.
    pub fn div_poly_exact(&self, p: &QTPoly) -> Option<QTRational> {
        let num = self.num.div_exact(p)?;
        Some(QTRational::normalized(num, self.den.clone()))
    }

    pub fn pow(&self, e: u32) -> QTRational {
        (0..e).fold(QTRational::one(), |acc, _| &acc * self)
    }

    /// Value at rational `(q, t)`. Fails only at a genuine pole: pieces that
    /// cancel against the numerator are removed before evaluating.
    pub fn eval(&self, q: &BigRational, t: &BigRational) -> Result<BigRational> {
        let (num, ps) = cancel(self.num.clone(), &self.den);
        let mut den = BigRational::one();
        for ((m, d), c) in ps {
            let v = psi_poly(m, d).eval(q, t);
            if v.is_zero() {
                return Err(Error::Pole { a: m.q * d, b: m.t * d });
            }
            den *= num_traits::pow(v, c as usize);
        }
        Ok(num.eval(q, t) / den)
    }

    /// Specializes `q = 1`, leaving a rational function of `t` alone.
    pub fn at_q_one(&self) -> Result<QTRational> {
        let mut den = Denominator::new();
        let (num, ps) = cancel(self.num.clone(), &self.den);
        let mut num = num.at_q_one();
        for ((m, d), c) in ps {
            if m.t == 0 {
                return Err(Error::Pole { a: m.q * d, b: 0 });
            }
            // psi_d(q^a t^b) at q = 1 is psi_d(t^b): fold back as a factor
            // (1 - t^{b d}) with the complementary pieces in the numerator.
            let factor = (0, m.t * d);
            *den.entry(factor).or_insert(0) += c;
            let rest = QTPoly::one_minus(0, m.t * d)
                .div_exact(&psi_poly(Mono::new(0, m.t), d))
                .expect("psi_d divides 1 - x^d");
            num = &num * &rest.pow(c);
        }
        Ok(QTRational::normalized(num, den))
    }

    pub fn to_text(&self) -> String {
        self.render(false)
    }

    /// Renders as `(numerator)/((1-qt)(1-qt^2))`.
    pub fn to_latexish(&self) -> String {
        self.render(true)
    }

    fn render(&self, compact: bool) -> String {
        let num = self.num.to_text();
        let num = if compact { num.replace(' ', "") } else { num };
        if self.den.is_empty() {
            return num;
        }
        let mut den = String::new();
        for (&(a, b), &m) in &self.den {
            let f = format!("(1-{})", super::poly::mono_text(Mono::new(a, b)));
            den.push_str(&f);
            if m > 1 {
                den.push_str(&format!("^{m}"));
            }
        }
        let num = if self.num.len() > 1 { format!("({num})") } else { num };
        if self.den.len() == 1 && *self.den.values().next().unwrap() == 1 {
            format!("{num}/{den}")
        } else {
            format!("{num}/({den})")
        }
    }
}

impl PartialEq for QTRational {
    fn eq(&self, other: &Self) -> bool {
        self.equals(other)
    }
}

impl Eq for QTRational {}

impl From<QTPoly> for QTRational {
    fn from(p: QTPoly) -> Self {
        QTRational::from_poly(p)
    }
}

impl fmt::Display for QTRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl Add<&QTRational> for &QTRational {
    type Output = QTRational;
    fn add(self, rhs: &QTRational) -> QTRational {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let l = QTRational::lcm_den(&self.den, &rhs.den);
        let num = &self.lift(&l) + &rhs.lift(&l);
        QTRational::normalized(num, l)
    }
}

impl Add for QTRational {
    type Output = QTRational;
    fn add(self, rhs: QTRational) -> QTRational {
        &self + &rhs
    }
}

impl Neg for &QTRational {
    type Output = QTRational;
    fn neg(self) -> QTRational {
        QTRational { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for QTRational {
    type Output = QTRational;
    fn neg(self) -> QTRational {
        -&self
    }
}

impl Sub<&QTRational> for &QTRational {
    type Output = QTRational;
    fn sub(self, rhs: &QTRational) -> QTRational {
        self + &(-rhs)
    }
}

impl Mul<&QTRational> for &QTRational {
    type Output = QTRational;
    fn mul(self, rhs: &QTRational) -> QTRational {
        if self.is_zero() || rhs.is_zero() {
            return QTRational::zero();
        }
        let mut den = self.den.clone();
        for (&k, &m) in &rhs.den {
            *den.entry(k).or_insert(0) += m;
        }
        QTRational::normalized(&self.num * &rhs.num, den)
    }
}

impl Mul for QTRational {
    type Output = QTRational;
    fn mul(self, rhs: QTRational) -> QTRational {
        &self * &rhs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(terms: &[(u32, u32, i64)]) -> QTPoly {
        QTPoly::from_terms(terms.iter().copied())
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn psi_products_reassemble() {
        for g in 1..=12u32 {
            let prod = divisors(g)
                .into_iter()
                .fold(QTPoly::one(), |acc, d| &acc * &psi_poly(Mono::new(0, 1), d));
            assert_eq!(prod, QTPoly::one_minus(0, g), "g = {g}");
        }
    }

    #[test]
    fn additive_inverse_is_zero() {
        let r = QTRational::with_factors(QTPoly::one(), &[(1, 1)]);
        let s = &r + &(-&r);
        assert!(s.is_zero());
        assert!(s.denominator().is_empty());
    }

    #[test]
    fn multiplicative_identity() {
        let r = QTRational::with_factors(poly(&[(0, 0, 1), (1, 0, 1)]), &[(1, 1), (1, 2)]);
        assert_eq!(&QTRational::one() * &r, r);
        assert_eq!(format!("{}", &QTRational::one() * &r), format!("{r}"));
    }

    #[test]
    fn factorization_equality() {
        let lhs = QTRational::with_factors(QTPoly::one_minus(0, 2), &[(0, 1)]);
        assert_eq!(lhs, QTRational::from_poly(poly(&[(0, 0, 1), (0, 1, 1)])));
        assert!(lhs.is_polynomial());
        let a = QTRational::with_factors(QTPoly::q(), &[(1, 1)]);
        let b = QTRational::with_factors(QTPoly::q(), &[(1, 2)]);
        assert_ne!(a, b);
    }

    #[test]
    fn partial_piece_cancellation() {
        // (1 + t) / (1 - t^2) = 1 / (1 - t)
        let r = QTRational::with_factors(poly(&[(0, 0, 1), (0, 1, 1)]), &[(0, 2)]);
        assert_eq!(r.numerator(), &QTPoly::one());
        assert_eq!(r.denominator(), &Denominator::from([((0, 1), 1)]));
        // 1 / (1 + t) has no factor of the allowed shape; it becomes
        // (1 - t) / (1 - t^2).
        let s = QTRational::with_factors(QTPoly::one_minus(0, 1), &[(0, 2)]);
        assert_eq!(s.numerator(), &QTPoly::one_minus(0, 1));
    }

    #[test]
    fn add_against_brute_cross_multiplication() {
        // (1-t)/(1-qt) + t(1-t)/(1-qt^2)
        let a = QTRational::with_factors(QTPoly::one_minus(0, 1), &[(1, 1)]);
        let b = QTRational::with_factors(&QTPoly::t() * &QTPoly::one_minus(0, 1), &[(1, 2)]);
        let sum = &a + &b;
        let d1 = QTPoly::one_minus(1, 1);
        let d2 = QTPoly::one_minus(1, 2);
        let brute_num =
            &(&QTPoly::one_minus(0, 1) * &d2) + &(&(&QTPoly::t() * &QTPoly::one_minus(0, 1)) * &d1);
        let brute = QTRational::with_factors(brute_num, &[(1, 1), (1, 2)]);
        assert_eq!(sum, brute);
        assert_eq!(
            sum.numerator() * &(&d1 * &d2),
            brute.numerator() * &sum.denominator_poly()
        );
    }

    #[test]
    fn evaluation() {
        let r = QTRational::with_factors(QTPoly::one(), &[(1, 1)]);
        assert!(matches!(r.eval(&rat(1, 1), &rat(1, 1)), Err(Error::Pole { .. })));
        let s = QTRational::with_factors(QTPoly::one_minus(0, 1), &[(1, 1)]);
        assert_eq!(s.eval(&rat(0, 1), &rat(1, 2)).unwrap(), rat(1, 2));
        // removable singularity: (1-t)/(1-t^2) at t = 1
        let u = QTRational::with_factors(QTPoly::one_minus(0, 1), &[(0, 2)]);
        assert_eq!(u.eval(&rat(3, 1), &rat(1, 1)).unwrap(), rat(1, 2));
    }

    #[test]
    fn q_one_specialization() {
        // (1-t)/(1-qt^2) at q = 1 is 1/(1+t)
        let r = QTRational::with_factors(QTPoly::one_minus(0, 1), &[(1, 2)]);
        let s = r.at_q_one().unwrap();
        assert_eq!(s.eval(&rat(1, 1), &rat(1, 1)).unwrap(), rat(1, 2));
        assert_eq!(s.eval(&rat(1, 1), &rat(1, 3)).unwrap(), rat(3, 4));
        let pure_q = QTRational::with_factors(QTPoly::one(), &[(2, 0)]);
        assert!(pure_q.at_q_one().is_err());
    }

    #[test]
    fn rendering() {
        let r = QTRational::with_factors(
            &poly(&[(0, 0, 1), (1, 0, 1)]) * &QTPoly::one_minus(0, 1),
            &[(1, 1)],
        );
        assert_eq!(r.to_latexish(), "(1-t+q-qt)/(1-qt)");
        let s = QTRational::with_factors(QTPoly::one(), &[(1, 1), (1, 2)]);
        assert_eq!(s.to_latexish(), "1/((1-qt)(1-qt^2))");
    }
}
