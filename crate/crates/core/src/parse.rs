//! Text forms accepted on the command line.

use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::processes::TazrpState;
use crate::shapes::{Composition, Partition};

fn bad(what: &str, s: &str) -> Error {
    Error::Parse(format!("malformed {what}: {s:?}"))
}

fn strip_parens(s: &str) -> &str {
    let s = s.trim();
    s.strip_prefix('(').and_then(|r| r.strip_suffix(')')).unwrap_or(s)
}

fn nat(tok: &str, what: &str, whole: &str) -> Result<u32> {
    let tok = tok.trim();
    if tok.is_empty() || !tok.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad(what, whole));
    }
    tok.parse().map_err(|_| bad(what, whole))
}

/// Comma-separated list of naturals; empty input is the empty list.
pub fn nat_list(s: &str) -> Result<Vec<u32>> {
    let inner = strip_parens(s);
    if inner.is_empty() {
        return Ok(Vec::new());
    }
    inner.split(',').map(|tok| nat(tok, "list", s)).collect()
}

/// `"2,2,1"`, `"(2,2,1)"` or frequency notation `"1^1 2^2"`.
pub fn partition(s: &str) -> Result<Partition> {
    let inner = strip_parens(s);
    if inner.contains('^') {
        let mut parts = Vec::new();
        for tok in inner.split_whitespace() {
            let (part, mult) = tok.split_once('^').ok_or_else(|| bad("partition", s))?;
            let part = nat(part, "partition", s)?;
            let mult = nat(mult, "partition", s)?;
            if part == 0 || parts.len() + mult as usize > 1 << 16 {
                return Err(bad("partition", s));
            }
            parts.extend(std::iter::repeat_n(part, mult as usize));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        return Partition::new(parts);
    }
    Partition::new(nat_list(s)?)
}

/// `"4,1,0,1,4,3"`.
pub fn composition(s: &str) -> Result<Composition> {
    Ok(Composition(nat_list(s)?))
}

/// `"-|21|1"`: sites split by `|`, `-` or `·` for an empty site, species as
/// single digits, comma separated, or as a bracketed list `[10,2]`.
pub fn tazrp_state(s: &str) -> Result<TazrpState> {
    let inner = strip_parens(s);
    if inner.is_empty() {
        return Err(bad("TAZRP state", s));
    }
    let mut sites = Vec::new();
    for site in inner.split('|') {
        let site = site.trim();
        let (site, bracketed) = match site.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
            Some(r) => (r.trim(), true),
            None => (site, false),
        };
        let species: Vec<u32> = if !bracketed && (site == "-" || site == "·") {
            Vec::new()
        } else if bracketed || site.contains(',') {
            site.split(',').map(|t| nat(t, "TAZRP state", s)).collect::<Result<_>>()?
        } else if !site.is_empty() && site.bytes().all(|b| b.is_ascii_digit()) {
            site.bytes().map(|b| (b - b'0') as u32).collect()
        } else {
            return Err(bad("TAZRP state", s));
        };
        if species.contains(&0) {
            return Err(bad("TAZRP state", s));
        }
        sites.push(species);
    }
    Ok(TazrpState::new(sites))
}

/// `"2/3"`, `"-1"`, `"0.25"`.
pub fn rational(s: &str) -> Result<BigRational> {
    let tok = s.trim();
    if let Some((a, b)) = tok.split_once('/') {
        let a = BigInt::from_str(a.trim()).map_err(|_| bad("rational", s))?;
        let b = BigInt::from_str(b.trim()).map_err(|_| bad("rational", s))?;
        if b.is_zero() {
            return Err(bad("rational", s));
        }
        return Ok(BigRational::new(a, b));
    }
    if let Some((int, frac)) = tok.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) || frac.len() > 64 {
            return Err(bad("rational", s));
        }
        let neg = int.starts_with('-');
        let digits = format!("{}{frac}", int.trim_start_matches(['-', '+']));
        let num = BigInt::from_str(&digits).map_err(|_| bad("rational", s))?;
        let den = num_traits::pow(BigInt::from(10), frac.len());
        let v = BigRational::new(num, den);
        return Ok(if neg { -v } else { v });
    }
    Ok(BigRational::from_integer(BigInt::from_str(tok).map_err(|_| bad("rational", s))?))
}

/// Comma-separated rationals.
pub fn rationals(s: &str) -> Result<Vec<BigRational>> {
    let inner = strip_parens(s);
    if inner.is_empty() {
        return Ok(Vec::new());
    }
    inner.split(',').map(rational).collect()
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        partition(s)
    }
}

impl FromStr for Composition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        composition(s)
    }
}

impl FromStr for TazrpState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        tazrp_state(s)
    }
}
