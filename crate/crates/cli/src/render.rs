//! Output formatting shared by the subcommands.

use std::collections::BTreeMap;

use clap::ValueEnum;
use macq_core::qtalg::{QTRational, XExpansion};
use macq_core::shapes::Partition;
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
    #[value(name = "latex-ish", alias = "latex")]
    Latexish,
}

/// Pretty JSON with object keys sorted at every level.
pub fn json<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("reports serialize");
    let mut s = serde_json::to_string_pretty(&sorted(v)).expect("value serializes");
    s.push('\n');
    s
}

fn sorted(v: Value) -> Value {
    match v {
        Value::Object(map) => {
            let entries: BTreeMap<String, Value> = map.into_iter().map(|(k, v)| (k, sorted(v))).collect();
            Value::Object(entries.into_iter().collect())
        }
        Value::Array(items) => Value::Array(items.into_iter().map(sorted).collect()),
        other => other,
    }
}

pub fn coeff(c: &QTRational, fmt: Format) -> String {
    match fmt {
        Format::Latexish => c.to_latexish(),
        _ => c.to_text(),
    }
}

fn x_monomial(e: &[u32], fmt: Format) -> String {
    let mut parts = Vec::new();
    for (i, &k) in e.iter().enumerate() {
        let v = i + 1;
        match (k, fmt) {
            (0, _) => {}
            (1, Format::Latexish) => parts.push(format!("x_{{{v}}}")),
            (_, Format::Latexish) => parts.push(format!("x_{{{v}}}^{{{k}}}")),
            (1, _) => parts.push(format!("x{v}")),
            _ => parts.push(format!("x{v}^{k}")),
        }
    }
    let sep = if fmt == Format::Latexish { "" } else { " " };
    parts.join(sep)
}

fn needs_parens(s: &str) -> bool {
    s.trim_start_matches('-').contains([' ', '+', '-', '/'])
}

/// Joins `(coefficient, monomial)` pairs into `c1 m1 + c2 m2`.
fn join_terms(terms: Vec<(String, String)>) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (c, m)) in terms.into_iter().enumerate() {
        let (neg, c) = match c.strip_prefix('-') {
            Some(rest) if !needs_parens(rest) => (true, rest.to_string()),
            _ => (false, c),
        };
        if i > 0 {
            out.push_str(if neg { " - " } else { " + " });
        } else if neg {
            out.push('-');
        }
        let c = if needs_parens(&c) { format!("({c})") } else { c };
        match (c.as_str(), m.is_empty()) {
            (_, true) => out.push_str(&c),
            ("1", false) => out.push_str(&m),
            _ => {
                out.push_str(&c);
                out.push(' ');
                out.push_str(&m);
            }
        }
    }
    out
}

/// An expansion as a sum of x-monomials, lexicographically largest first.
pub fn expansion(e: &XExpansion, fmt: Format) -> String {
    let mut terms: Vec<(String, String)> = e.terms().map(|(x, c)| (coeff(c, fmt), x_monomial(x, fmt))).collect();
    terms.reverse();
    join_terms(terms)
}

/// An expansion specialized at numeric `q, t`.
pub fn numeric_expansion(terms: &[(Vec<u32>, BigRational)], fmt: Format) -> String {
    join_terms(
        terms
            .iter()
            .rev()
            .filter(|(_, c)| *c != BigRational::from_integer(0.into()))
            .map(|(x, c)| {
                let s = if c.is_one() { "1".into() } else { c.to_string() };
                (s, x_monomial(x, fmt))
            })
            .collect(),
    )
}

pub fn m_label(p: &Partition, fmt: Format) -> String {
    let parts: Vec<String> = p.parts().iter().map(u32::to_string).collect();
    match fmt {
        Format::Latexish => {
            let sep = if p.parts().iter().any(|&k| k > 9) { "," } else { "" };
            format!("m_{{{}}}", parts.join(sep))
        }
        _ => format!("m({})", parts.join(",")),
    }
}

/// Left-aligned columns separated by two spaces.
pub fn table(rows: &[Vec<String>]) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for r in rows {
        let mut line = String::new();
        for (c, cell) in r.iter().enumerate() {
            if c + 1 < r.len() {
                line.push_str(&format!("{cell:<w$}  ", w = widths[c]));
            } else {
                line.push_str(cell);
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use macq_core::qtalg::QTPoly;

    #[test]
    fn empty_expansion_is_zero() {
        assert_eq!(expansion(&XExpansion::new(3), Format::Text), "0");
        assert_eq!(expansion(&XExpansion::new(3), Format::Latexish), "0");
    }

    #[test]
    fn linear_terms() {
        let mut e = XExpansion::new(3);
        for i in 0..3 {
            let mut x = vec![0; 3];
            x[i] = 1;
            e.add_term(x, &QTRational::one());
        }
        assert_eq!(expansion(&e, Format::Text), "x1 + x2 + x3");
        assert_eq!(expansion(&e, Format::Latexish), "x_{1} + x_{2} + x_{3}");
    }

    #[test]
    fn coefficients_are_grouped() {
        let mut e = XExpansion::new(2);
        e.add_term(vec![2, 0], &QTRational::from_poly(QTPoly::from_terms([(0, 0, 1), (1, 0, 1)])));
        e.add_term(vec![1, 1], &QTRational::from_int(-2));
        e.add_term(vec![0, 2], &QTRational::with_factors(QTPoly::one(), &[(1, 1)]));
        assert_eq!(expansion(&e, Format::Text), "(1 + q) x1^2 - 2 x1 x2 + (1/(1-qt)) x2^2");
    }

    #[test]
    fn keys_are_sorted() {
        #[derive(Serialize)]
        struct R {
            zeta: u8,
            alpha: u8,
        }
        assert_eq!(json(&R { zeta: 1, alpha: 2 }), "{\n  \"alpha\": 2,\n  \"zeta\": 1\n}\n");
    }

    #[test]
    fn table_aligns() {
        let t = table(&[vec!["a".into(), "1".into()], vec!["bbb".into(), "2".into()]]);
        assert_eq!(t, "a    1\nbbb  2\n");
    }
}
