//! Combinatorial formulas for `P_λ`, `J_λ`, `H̃_λ`, `F_α` and `Z_λ`, each
//! producing an [`XExpansion`].

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fillings::{
    coquinv, inv, is_coquinv_sorted, is_quinv_sorted, maj, nonattacking_fillings, perm_sigma, quinv, super_stats, superizations,
    Filling, FillingIter,
};
use crate::mlq::{enumerate_ball_systems, enumerate_ball_systems_with_base, visit_mlqs, MultilineQueue};
use crate::qtalg::{Mono, QTPoly, QTRational, XExpansion};
use crate::shapes::{leg, n_stat, perm_lambda, rarm, Cell, Composition, Partition};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FormulaId {
    PMlq,
    PNonatt,
    PCompact,
    JNonatt,
    JSuper,
    HQuinv,
    HInv,
    HCompact,
    FAlpha,
    ZLambda,
}

impl FormulaId {
    pub const ALL: [FormulaId; 10] = [
        FormulaId::PMlq,
        FormulaId::PNonatt,
        FormulaId::PCompact,
        FormulaId::JNonatt,
        FormulaId::JSuper,
        FormulaId::HQuinv,
        FormulaId::HInv,
        FormulaId::HCompact,
        FormulaId::FAlpha,
        FormulaId::ZLambda,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FormulaId::PMlq => "p-mlq",
            FormulaId::PNonatt => "p-nonatt",
            FormulaId::PCompact => "p-compact",
            FormulaId::JNonatt => "j-nonatt",
            FormulaId::JSuper => "j-super",
            FormulaId::HQuinv => "h-quinv",
            FormulaId::HInv => "h-inv",
            FormulaId::HCompact => "h-compact",
            FormulaId::FAlpha => "f-alpha",
            FormulaId::ZLambda => "z-lambda",
        }
    }

    /// `H̃` formulas default `n` to `ℓ(λ)`; the rest need it explicitly.
    pub fn is_modified(self) -> bool {
        matches!(self, FormulaId::HQuinv | FormulaId::HInv | FormulaId::HCompact)
    }
}

impl fmt::Display for FormulaId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FormulaId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FormulaId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::Parse(format!("unknown formula id {s:?}")))
    }
}

impl Serialize for FormulaId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

/// Sums terms `x^e · num / Π(1 - q^a t^b)` grouped by their raw factor
/// lists, so normalization runs once per group instead of once per term.
#[derive(Clone, Debug)]
struct Accumulator {
    n: usize,
    map: BTreeMap<Vec<u32>, BTreeMap<Vec<(u32, u32)>, QTPoly>>,
}

impl Accumulator {
    fn new(n: usize) -> Self {
        Accumulator { n, map: BTreeMap::new() }
    }

    fn add(&mut self, exponent: Vec<u32>, num: QTPoly, mut factors: Vec<(u32, u32)>) {
        factors.sort_unstable();
        let slot = self.map.entry(exponent).or_default().entry(factors).or_insert_with(QTPoly::zero);
        *slot += &num;
    }

    fn merge(mut self, other: Accumulator) -> Accumulator {
        for (e, groups) in other.map {
            let mine = self.map.entry(e).or_default();
            for (f, p) in groups {
                *mine.entry(f).or_insert_with(QTPoly::zero) += &p;
            }
        }
        self
    }

    fn finish(self) -> XExpansion {
        let mut out = XExpansion::new(self.n);
        for (e, groups) in self.map {
            let mut total = QTRational::zero();
            for (f, p) in groups {
                if !p.is_zero() {
                    total = &total + &QTRational::with_factors(p, &f);
                }
            }
            out.add_term(e, &total);
        }
        out
    }
}

fn content_of(sigma: &Filling) -> Vec<u32> {
    sigma.content()
}

fn one_minus_t_pow(k: u32) -> QTPoly {
    QTPoly::one_minus(0, 1).pow(k)
}

/// Folds `f` over every filling of `λ` with entries in `1..=n`, split by
/// the bottom-left entry across worker threads.
fn fold_fillings<F>(lambda: &Partition, n: usize, f: F) -> Accumulator
where
    F: Fn(&Filling, &mut Accumulator) + Sync,
{
    if lambda.is_empty() {
        let mut acc = Accumulator::new(n);
        if let Ok(empty) = Filling::from_columns(lambda.clone(), n as u32, Vec::new()) {
            f(&empty, &mut acc);
        }
        return acc;
    }
    (1..=n as u32)
        .into_par_iter()
        .map(|v| {
            let mut acc = Accumulator::new(n);
            for sigma in FillingIter::new(lambda, n as u32).with_first(v) {
                f(&sigma, &mut acc);
            }
            acc
        })
        .reduce(|| Accumulator::new(n), Accumulator::merge)
}

fn fold_list<F>(list: &[Filling], n: usize, f: F) -> Accumulator
where
    F: Fn(&Filling, &mut Accumulator) + Sync,
{
    list.par_chunks(64)
        .map(|chunk| {
            let mut acc = Accumulator::new(n);
            for sigma in chunk {
                f(sigma, &mut acc);
            }
            acc
        })
        .reduce(|| Accumulator::new(n), Accumulator::merge)
}

fn mono(q: u32, t: u32) -> QTPoly {
    QTPoly::monomial(1, q, t)
}

/// Cells of rows `≥ 2` with `(leg + 1, rarm + 1)`.
fn upper_cells(lambda: &Partition) -> Vec<(Cell, (u32, u32))> {
    lambda
        .cells()
        .into_iter()
        .filter(|c| c.row >= 2)
        .map(|c| {
            let l = leg(lambda, c).expect("cell in shape");
            let a = rarm(lambda, c).expect("upper cell has an arm");
            (c, (l + 1, a + 1))
        })
        .collect()
}

fn check_width(lambda: &Partition, n: usize) -> Result<()> {
    if lambda.len() > n {
        return Err(Error::ShapeTooWide { len: lambda.len(), n });
    }
    Ok(())
}

/// `Σ_σ x^σ q^{maj} t^{quinv}` over all fillings.
pub fn h_via_quinv(lambda: &Partition, n: usize) -> XExpansion {
    fold_fillings(lambda, n, |s, acc| acc.add(content_of(s), mono(maj(s), quinv(s)), Vec::new())).finish()
}

/// `Σ_σ x^σ q^{maj} t^{inv}` over all fillings.
pub fn h_via_inv(lambda: &Partition, n: usize) -> XExpansion {
    fold_fillings(lambda, n, |s, acc| acc.add(content_of(s), mono(maj(s), inv(s)), Vec::new())).finish()
}

/// `Σ perm(σ) x^σ q^{maj} t^{quinv}` over quinv-sorted fillings.
pub fn h_compact(lambda: &Partition, n: usize) -> XExpansion {
    fold_fillings(lambda, n, |s, acc| {
        if is_quinv_sorted(s) {
            acc.add(content_of(s), &perm_sigma(s) * &mono(maj(s), quinv(s)), Vec::new());
        }
    })
    .finish()
}

/// Numerator and denominator factors of the non-attacking `P` weight of `τ`.
fn p_weight(tau: &Filling, cells: &[(Cell, (u32, u32))]) -> Result<(QTPoly, Vec<(u32, u32)>)> {
    let mut factors = Vec::new();
    for &(c, f) in cells {
        if tau.get(c) != tau.get(c.south().expect("upper cell")) {
            factors.push(f);
        }
    }
    let num = &mono(maj(tau), coquinv(tau)?) * &one_minus_t_pow(factors.len() as u32);
    Ok((num, factors))
}

fn fold_p(list: &[Filling], lambda: &Partition, n: usize) -> Result<Accumulator> {
    let cells = upper_cells(lambda);
    let failed = std::sync::atomic::AtomicBool::new(false);
    let acc = fold_list(list, n, |tau, acc| match p_weight(tau, &cells) {
        Ok((num, f)) => acc.add(content_of(tau), num, f),
        Err(_) => failed.store(true, std::sync::atomic::Ordering::Relaxed),
    });
    if failed.into_inner() {
        return Err(Error::Invalid("coquinv out of range".into()));
    }
    Ok(acc)
}

/// `(1/perm(λ)) Σ x^τ q^{maj} t^{coquinv} Π (1-t)/(1 - q^{leg+1} t^{rarm+1})`
/// over quinv-non-attacking `τ`, the product over cells of rows `≥ 2`
/// differing from the cell below.
pub fn p_via_nonattacking(lambda: &Partition, n: usize) -> Result<XExpansion> {
    let list = nonattacking_fillings(lambda, n as u32);
    let sum = fold_p(&list, lambda, n)?.finish();
    let perm = perm_lambda(lambda);
    let mut out = XExpansion::new(n);
    for (e, c) in sum.terms() {
        let q = c.div_poly_exact(&perm).ok_or(Error::InexactPermDivision)?;
        out.add_term(e.clone(), &q);
    }
    Ok(out)
}

/// The same weights over non-attacking, quinv-sorted `τ`, with no `perm(λ)`
/// prefactor.
pub fn p_compact(lambda: &Partition, n: usize) -> Result<XExpansion> {
    let list: Vec<Filling> = nonattacking_fillings(lambda, n as u32).into_iter().filter(is_coquinv_sorted).collect();
    Ok(fold_p(&list, lambda, n)?.finish())
}

/// `Σ x^τ q^{maj} t^{coquinv} (1-t)^{a} Π (1 - q^{leg+1} t^{rarm+1})` over
/// non-attacking `τ`; `a` counts row-1 cells and upper cells differing from
/// the cell below, the product runs over the remaining upper cells.
pub fn j_via_nonattacking(lambda: &Partition, n: usize) -> Result<XExpansion> {
    let cells = upper_cells(lambda);
    let list = nonattacking_fillings(lambda, n as u32);
    let row_one = lambda.len() as u32;
    let mut acc = Accumulator::new(n);
    for tau in &list {
        let mut k = row_one;
        let mut num = mono(maj(tau), coquinv(tau)?);
        for &(c, (a, b)) in &cells {
            if tau.get(c) != tau.get(c.south().unwrap()) {
                k += 1;
            } else {
                num = &num * &QTPoly::one_minus(a, b);
            }
        }
        acc.add(content_of(tau), &num * &one_minus_t_pow(k), Vec::new());
    }
    Ok(acc.finish())
}

/// `t^{n(λ)+|λ|} Σ (-1)^{m} x^{|σ|} q^{maj} t^{-p-quinv}` over super-fillings
/// whose absolute value is quinv-non-attacking.
pub fn j_via_superfillings(lambda: &Partition, n: usize) -> Result<XExpansion> {
    let shift = (n_stat(lambda) + lambda.size()) as i64;
    // exponent vector -> (q power, t power) -> coefficient
    let mut laurent: BTreeMap<Vec<u32>, BTreeMap<(u32, i64), BigInt>> = BTreeMap::new();
    for base in nonattacking_fillings(lambda, n as u32) {
        let e = base.content();
        let slot = laurent.entry(e).or_default();
        for sigma in superizations(&base) {
            let s = super_stats(&sigma);
            let tp = shift - s.p as i64 - s.quinv as i64;
            let sign = if s.m.is_multiple_of(2) { 1 } else { -1 };
            *slot.entry((s.maj, tp)).or_default() += sign;
        }
    }
    let mut out = XExpansion::new(n);
    for (e, terms) in laurent {
        let mut p = QTPoly::zero();
        for ((qe, te), c) in terms {
            if c == BigInt::default() {
                continue;
            }
            if te < 0 {
                return Err(Error::NegativePowerResidue);
            }
            p.add_term(Mono::new(qe, te as u32), c);
        }
        out.add_term(e, &QTRational::from_poly(p));
    }
    Ok(out)
}

/// `(1-t)^{ℓ(λ)} perm(λ) Π_{rows ≥ 2} (1 - q^{leg+1} t^{rarm+1})`, the
/// constant with `J_λ = Π(λ) P_λ`.
pub fn pi_lambda(lambda: &Partition) -> QTPoly {
    let mut p = &one_minus_t_pow(lambda.len() as u32) * &perm_lambda(lambda);
    for (_, (a, b)) in upper_cells(lambda) {
        p = &p * &QTPoly::one_minus(a, b);
    }
    p
}

fn mlq_term(m: &MultilineQueue, acc: &mut Accumulator) {
    let mut q_exp = 0;
    let mut t_exp = 0;
    let mut factors = Vec::new();
    for s in m.canonical_order().iter().filter(|s| !s.trivial) {
        if s.xi {
            q_exp += s.leg + 1;
        }
        t_exp += s.skip;
        factors.push((s.leg + 1, s.free));
    }
    let num = &mono(q_exp, t_exp) * &one_minus_t_pow(factors.len() as u32);
    acc.add(m.content(), num, factors);
}

/// `Σ_M x^M wt(M)` over all multiline queues.
pub fn p_via_mlq(lambda: &Partition, n: usize) -> Result<XExpansion> {
    let systems = enumerate_ball_systems(lambda, n)?;
    let acc = systems
        .par_iter()
        .map(|sys| {
            let mut acc = Accumulator::new(n);
            visit_mlqs(sys, |m| mlq_term(m, &mut acc));
            acc
        })
        .reduce(|| Accumulator::new(n), Accumulator::merge);
    Ok(acc.finish())
}

/// Multiline queues whose bottom row projects to `α`.
pub fn f_alpha(alpha: &Composition) -> Result<XExpansion> {
    let n = alpha.parts().len();
    let lambda = alpha.to_partition();
    let base: Vec<usize> = (1..=n).filter(|&j| alpha.parts()[j - 1] > 0).collect();
    let systems = enumerate_ball_systems_with_base(&lambda, n, Some(base))?;
    let acc = systems
        .par_iter()
        .map(|sys| {
            let mut acc = Accumulator::new(n);
            visit_mlqs(sys, |m| {
                if m.proj_asep() == *alpha {
                    mlq_term(m, &mut acc);
                }
            });
            acc
        })
        .reduce(|| Accumulator::new(n), Accumulator::merge);
    Ok(acc.finish())
}

/// `F_α` for every state `α` of `A(λ, n)` from one pass over the queues.
pub fn f_alpha_all(lambda: &Partition, n: usize) -> Result<BTreeMap<Composition, XExpansion>> {
    let systems = enumerate_ball_systems(lambda, n)?;
    let parts: Vec<BTreeMap<Composition, Accumulator>> = systems
        .par_iter()
        .map(|sys| {
            let mut by: BTreeMap<Composition, Accumulator> = BTreeMap::new();
            visit_mlqs(sys, |m| mlq_term(m, by.entry(m.proj_asep()).or_insert_with(|| Accumulator::new(n))));
            by
        })
        .collect();
    let mut merged: BTreeMap<Composition, Accumulator> = BTreeMap::new();
    for part in parts {
        for (alpha, acc) in part {
            let slot = merged.remove(&alpha).unwrap_or_else(|| Accumulator::new(n));
            merged.insert(alpha, slot.merge(acc));
        }
    }
    Ok(merged.into_iter().map(|(a, acc)| (a, acc.finish())).collect())
}

/// `Z_λ = Σ_α F_α`.
pub fn z_lambda(lambda: &Partition, n: usize) -> Result<XExpansion> {
    let mut out = XExpansion::new(n);
    for f in f_alpha_all(lambda, n)?.values() {
        out.merge(f);
    }
    Ok(out)
}

/// Arguments of one formula evaluation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FormulaArgs {
    Shape { lambda: Partition, n: usize },
    Composition(Composition),
}

/// Evaluates a formula by id.
pub fn compute(id: FormulaId, args: &FormulaArgs) -> Result<XExpansion> {
    let (lambda, n) = match (id, args) {
        (FormulaId::FAlpha, FormulaArgs::Composition(alpha)) => return f_alpha(alpha),
        (FormulaId::FAlpha, FormulaArgs::Shape { .. }) => {
            return Err(Error::Invalid("f-alpha takes a composition".into()));
        }
        (_, FormulaArgs::Shape { lambda, n }) => (lambda, *n),
        (_, FormulaArgs::Composition(_)) => return Err(Error::Invalid(format!("{id} takes a partition"))),
    };
    if n == 0 {
        return Err(Error::Invalid("n must be at least 1".into()));
    }
    match id {
        FormulaId::HQuinv => Ok(h_via_quinv(lambda, n)),
        FormulaId::HInv => Ok(h_via_inv(lambda, n)),
        FormulaId::HCompact => Ok(h_compact(lambda, n)),
        FormulaId::PMlq => p_via_mlq(lambda, n),
        FormulaId::ZLambda => z_lambda(lambda, n),
        FormulaId::PNonatt | FormulaId::PCompact | FormulaId::JNonatt | FormulaId::JSuper => {
            check_width(lambda, n)?;
            match id {
                FormulaId::PNonatt => p_via_nonattacking(lambda, n),
                FormulaId::PCompact => p_compact(lambda, n),
                FormulaId::JNonatt => j_via_nonattacking(lambda, n),
                _ => j_via_superfillings(lambda, n),
            }
        }
        FormulaId::FAlpha => unreachable!(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FormulaReport {
    pub formula: FormulaId,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<Partition>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Composition>,
    pub n: usize,
    pub output: XExpansion,
    pub term_count: usize,
    #[serde(skip)]
    pub elapsed: Duration,
}

pub fn run_formula(id: FormulaId, args: &FormulaArgs) -> Result<FormulaReport> {
    let start = Instant::now();
    let output = compute(id, args)?;
    let (lambda, alpha, n) = match args {
        FormulaArgs::Shape { lambda, n } => (Some(lambda.clone()), None, *n),
        FormulaArgs::Composition(a) => (None, Some(a.clone()), a.parts().len()),
    };
    Ok(FormulaReport { formula: id, lambda, alpha, n, term_count: output.len(), output, elapsed: start.elapsed() })
}

#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub exponent: Vec<u32>,
    pub lhs: QTRational,
    pub rhs: QTRational,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub lhs: String,
    pub rhs: String,
    pub equal: bool,
    pub terms: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

/// Exact comparison of two expansions over the same variables.
pub fn compare_expansions(lhs: &XExpansion, rhs: &XExpansion) -> Result<(bool, Option<Witness>)> {
    Ok(match lhs.first_difference(rhs)? {
        None => (true, None),
        Some((exponent, a, b)) => (false, Some(Witness { exponent, lhs: a, rhs: b })),
    })
}

pub fn verify_identity(lhs: (FormulaId, &FormulaArgs), rhs: (FormulaId, &FormulaArgs)) -> Result<IdentityReport> {
    let a = compute(lhs.0, lhs.1)?;
    let b = compute(rhs.0, rhs.1)?;
    let (equal, witness) = compare_expansions(&a, &b)?;
    Ok(IdentityReport {
        lhs: describe(lhs.0, lhs.1),
        rhs: describe(rhs.0, rhs.1),
        equal,
        terms: a.len().max(b.len()),
        witness,
    })
}

fn describe(id: FormulaId, args: &FormulaArgs) -> String {
    match args {
        FormulaArgs::Shape { lambda, n } => format!("{id} {lambda} n={n}"),
        FormulaArgs::Composition(a) => format!("{id} {a}"),
    }
}
