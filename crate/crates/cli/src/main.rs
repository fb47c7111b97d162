mod render;

use std::collections::BTreeMap;
use std::fmt::Display;
use std::hash::Hash;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use macq_core::engines::{compare_expansions, pi_lambda, run_formula, FormulaArgs, FormulaId, IdentityReport};
use macq_core::fillings::{
    coquinv, enumerate_fillings, inv, is_coquinv_sorted, is_quinv_sorted, maj, nonattacking_fillings, quinv,
    Filling,
};
use macq_core::mlq::{enumerate_ball_systems, enumerate_mlqs, BallSystem, MultilineQueue};
use macq_core::processes::{
    asep_states, simulate, tazrp_states, tazrp_weight_symbolic, total_variation, verify_asep_stationarity,
    verify_tazrp_stationarity, Clock, Generator, StationarityReport,
};
use macq_core::qtalg::{QTRational, XExpansion};
use macq_core::shapes::{Composition, Partition};
use macq_core::{engines, parse};
use num_rational::BigRational;
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use render::Format;

#[derive(Parser)]
#[command(name = "macq", version, about = "Exact Macdonald polynomials, multiline queues and ring processes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute a polynomial by formula id
    Poly(PolyArgs),
    /// List fillings, queues or process states, or describe one given object
    Enumerate(EnumerateArgs),
    /// Check that two formulas give the same expansion
    Verify(VerifyArgs),
    /// Exact stationary law of a ring process checked against its formula
    Process(ProcessArgs),
    /// Monte Carlo estimate of a stationary law
    Simulate(SimulateArgs),
}

#[derive(Clone, Debug)]
struct Exponent(Vec<u32>);

#[derive(Clone, Debug)]
struct Point(Vec<BigRational>);

fn formula_id(s: &str) -> Result<FormulaId, String> {
    s.parse::<FormulaId>().map_err(|e| e.to_string())
}

fn partition(s: &str) -> Result<Partition, String> {
    parse::partition(s).map_err(|e| e.to_string())
}

fn composition(s: &str) -> Result<Composition, String> {
    parse::composition(s).map_err(|e| e.to_string())
}

fn exponent(s: &str) -> Result<Exponent, String> {
    parse::nat_list(s).map(Exponent).map_err(|e| e.to_string())
}

fn rational(s: &str) -> Result<BigRational, String> {
    parse::rational(s).map_err(|e| e.to_string())
}

fn point(s: &str) -> Result<Point, String> {
    parse::rationals(s).map(Point).map_err(|e| e.to_string())
}

#[derive(Args)]
struct ShapeOpts {
    /// Partition, e.g. 2,2,1 or "1^1 2^2"
    #[arg(long, value_parser = partition)]
    lambda: Option<Partition>,
    /// Number of variables / sites
    #[arg(long)]
    n: Option<usize>,
    /// Weak composition for f-alpha, e.g. 4,1,0,1,4,3
    #[arg(long, value_parser = composition)]
    alpha: Option<Composition>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Basis {
    X,
    M,
}

#[derive(Args)]
struct PolyArgs {
    #[arg(value_parser = formula_id)]
    formula: FormulaId,
    #[command(flatten)]
    shape: ShapeOpts,
    /// Print only the coefficient of this x-exponent vector
    #[arg(long, value_parser = exponent)]
    coeff: Option<Exponent>,
    #[arg(long, value_enum, default_value_t = Basis::X)]
    basis: Basis,
    #[arg(long, value_parser = rational)]
    q: Option<BigRational>,
    #[arg(long, value_parser = rational)]
    t: Option<BigRational>,
    /// Comma-separated rationals x1,...,xn
    #[arg(long, value_parser = point)]
    x: Option<Point>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Fillings,
    Nonattacking,
    QuinvSorted,
    CoquinvSorted,
    BallSystems,
    Mlqs,
    AsepStates,
    TazrpStates,
}

impl Kind {
    fn name(self) -> &'static str {
        match self {
            Kind::Fillings => "fillings",
            Kind::Nonattacking => "nonattacking",
            Kind::QuinvSorted => "quinv-sorted",
            Kind::CoquinvSorted => "coquinv-sorted",
            Kind::BallSystems => "ball-systems",
            Kind::Mlqs => "mlqs",
            Kind::AsepStates => "asep-states",
            Kind::TazrpStates => "tazrp-states",
        }
    }
}

#[derive(Args)]
struct EnumerateArgs {
    #[arg(value_enum)]
    kind: Kind,
    #[arg(long, value_parser = partition)]
    lambda: Option<Partition>,
    #[arg(long)]
    n: Option<usize>,
    /// Describe one object given as JSON instead of enumerating (fillings, mlqs)
    #[arg(long)]
    input: Option<String>,
    /// Print only the number of objects
    #[arg(long)]
    count: bool,
    #[arg(long)]
    limit: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_parser = formula_id)]
    lhs: FormulaId,
    #[arg(long, value_parser = formula_id)]
    rhs: FormulaId,
    #[command(flatten)]
    shape: ShapeOpts,
    /// Shape for the right side when it differs from --lambda
    #[arg(long, value_parser = partition)]
    rhs_lambda: Option<Partition>,
    #[arg(long)]
    rhs_n: Option<usize>,
    #[arg(long, value_parser = composition)]
    rhs_alpha: Option<Composition>,
    /// Multiply the right side by Pi(lambda) before comparing
    #[arg(long)]
    rhs_times_pi: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ProcessKind {
    Asep,
    Tazrp,
}

impl ProcessKind {
    fn name(self) -> &'static str {
        match self {
            ProcessKind::Asep => "asep",
            ProcessKind::Tazrp => "tazrp",
        }
    }
}

#[derive(Args)]
struct ProcessArgs {
    #[arg(value_enum)]
    kind: ProcessKind,
    #[arg(long, value_parser = partition)]
    lambda: Partition,
    #[arg(long)]
    n: usize,
    #[arg(long, value_parser = rational)]
    t: Option<BigRational>,
    /// Site rates x1,...,xn (tazrp)
    #[arg(long, value_parser = point)]
    x: Option<Point>,
    /// Print the symbolic weight of one state, e.g. 0,1,2 or "-|21|1"
    #[arg(long, allow_hyphen_values = true)]
    state: Option<String>,
    /// List the generator's transitions instead of solving
    #[arg(long)]
    transitions: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ClockArg {
    Continuous,
    Discrete,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(value_enum)]
    kind: ProcessKind,
    #[arg(long, value_parser = partition)]
    lambda: Partition,
    #[arg(long)]
    n: usize,
    #[arg(long, value_parser = rational)]
    t: BigRational,
    #[arg(long, value_parser = point)]
    x: Option<Point>,
    #[arg(long, default_value_t = 1_000_000)]
    events: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Independent runs with seeds seed, seed+1, ...; estimates are averaged
    #[arg(long, default_value_t = 1)]
    runs: u64,
    #[arg(long, value_enum, default_value_t = ClockArg::Continuous)]
    clock: ClockArg,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

enum Fail {
    Usage(String),
    /// Verification failed; the payload is the report to print.
    Mismatch(String),
}

impl From<macq_core::Error> for Fail {
    fn from(e: macq_core::Error) -> Self {
        Fail::Usage(e.to_string())
    }
}

type Out = Result<String, Fail>;

fn usage<T>(msg: impl Into<String>) -> Result<T, Fail> {
    Err(Fail::Usage(msg.into()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Ok(v) = std::env::var("MACQ_THREADS") {
        match v.trim().parse::<usize>() {
            Ok(k) if k > 0 => {
                // only fails if a pool already exists
                let _ = rayon::ThreadPoolBuilder::new().num_threads(k).build_global();
            }
            _ => {
                eprintln!("macq: MACQ_THREADS must be a positive integer, got {v:?}");
                return ExitCode::from(2);
            }
        }
    }
    let result = match cli.command {
        Command::Poly(a) => poly(a),
        Command::Enumerate(a) => enumerate(a),
        Command::Verify(a) => verify(a),
        Command::Process(a) => process(a),
        Command::Simulate(a) => simulate_cmd(a),
    };
    match result {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(Fail::Mismatch(out)) => {
            print!("{out}");
            ExitCode::from(1)
        }
        Err(Fail::Usage(msg)) => {
            eprintln!("macq: {msg}");
            ExitCode::from(2)
        }
    }
}

fn formula_args(id: FormulaId, shape: &ShapeOpts) -> Result<FormulaArgs, Fail> {
    if id == FormulaId::FAlpha {
        let Some(alpha) = shape.alpha.clone() else {
            return usage("f-alpha needs --alpha");
        };
        if let Some(n) = shape.n {
            if n != alpha.parts().len() {
                return usage(format!("--n {n} disagrees with the {} sites of --alpha", alpha.parts().len()));
            }
        }
        return Ok(FormulaArgs::Composition(alpha));
    }
    if shape.alpha.is_some() {
        return usage(format!("--alpha only applies to f-alpha, not {id}"));
    }
    let Some(lambda) = shape.lambda.clone() else {
        return usage(format!("{id} needs --lambda"));
    };
    let n = match shape.n {
        Some(n) => n,
        None if id.is_modified() => lambda.len(),
        None => return usage(format!("{id} needs --n")),
    };
    if n == 0 {
        return usage("--n must be at least 1");
    }
    // H-tilde fillings need not be non-attacking, so fewer variables than parts is fine
    if !id.is_modified() && lambda.len() > n {
        return usage(format!("partition {lambda} has {} parts but only {n} variables", lambda.len()));
    }
    Ok(FormulaArgs::Shape { lambda, n })
}

fn header(id: FormulaId, args: &FormulaArgs) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("formula".into(), json!(id.as_str()));
    match args {
        FormulaArgs::Shape { lambda, n } => {
            m.insert("lambda".into(), json!(lambda.parts()));
            m.insert("n".into(), json!(n));
        }
        FormulaArgs::Composition(a) => {
            m.insert("alpha".into(), json!(a.parts()));
            m.insert("n".into(), json!(a.parts().len()));
        }
    }
    m
}

fn describe(id: FormulaId, args: &FormulaArgs) -> String {
    match args {
        FormulaArgs::Shape { lambda, n } => format!("{id} {lambda} n={n}"),
        FormulaArgs::Composition(a) => format!("{id} {a}"),
    }
}

fn poly(a: PolyArgs) -> Out {
    let id = a.formula;
    let args = formula_args(id, &a.shape)?;
    let report = run_formula(id, &args)?;
    let e = &report.output;
    let mut head = header(id, &args);
    let at = match (&a.q, &a.t) {
        (Some(q), Some(t)) => {
            head.insert("q".into(), json!(q.to_string()));
            head.insert("t".into(), json!(t.to_string()));
            Some((q, t))
        }
        (None, None) => None,
        _ => return usage("--q and --t must be given together"),
    };
    if a.x.is_some() && at.is_none() {
        return usage("--x needs --q and --t");
    }
    let json_out = |mut head: Map<String, Value>, key: &str, v: Value| {
        head.insert(key.into(), v);
        render::json(&Value::Object(head))
    };

    if let Some(Exponent(exp)) = &a.coeff {
        if exp.len() != e.n() {
            return usage(format!("--coeff has {} entries, expected {}", exp.len(), e.n()));
        }
        let c = e.coefficient(exp)?;
        head.insert("exponent".into(), json!(exp));
        return Ok(match (at, a.format) {
            (Some((q, t)), Format::Json) => json_out(head, "value", json!(c.eval(q, t)?.to_string())),
            (Some((q, t)), _) => format!("{}\n", c.eval(q, t)?),
            (None, Format::Json) => json_out(head, "coefficient", serde_json::to_value(&c).unwrap()),
            (None, f) => format!("{}\n", render::coeff(&c, f)),
        });
    }
    if let Some(Point(xs)) = &a.x {
        if xs.len() != e.n() {
            return usage(format!("--x has {} entries, expected {}", xs.len(), e.n()));
        }
        let (q, t) = at.expect("checked above");
        let v = e.eval(xs, q, t)?;
        head.insert("x".into(), json!(xs.iter().map(ToString::to_string).collect::<Vec<_>>()));
        return Ok(match a.format {
            Format::Json => json_out(head, "value", json!(v.to_string())),
            _ => format!("{v}\n"),
        });
    }
    if a.basis == Basis::M {
        let basis = match e.monomial_basis() {
            Ok(b) => b,
            Err(err) => return usage(format!("{id} output has no monomial expansion: {err}")),
        };
        return monomial_output(head, &basis, at, a.format);
    }
    if let Some((q, t)) = at {
        let mut terms = Vec::new();
        for (x, c) in e.terms() {
            terms.push((x.clone(), c.eval(q, t)?));
        }
        return Ok(match a.format {
            Format::Json => {
                let list: Vec<Value> = terms.iter().map(|(x, c)| json!([x, c.to_string()])).collect();
                json_out(head, "terms", Value::Array(list))
            }
            f => format!("{}\n", render::numeric_expansion(&terms, f)),
        });
    }
    Ok(match a.format {
        Format::Json => {
            head.insert("term_count".into(), json!(report.term_count));
            json_out(head, "output", serde_json::to_value(e).unwrap())
        }
        f => format!("{}\n", render::expansion(e, f)),
    })
}

fn monomial_output(
    mut head: Map<String, Value>,
    basis: &BTreeMap<Partition, QTRational>,
    at: Option<(&BigRational, &BigRational)>,
    fmt: Format,
) -> Out {
    // largest partition in dominance-compatible lex order first
    let mut rows: Vec<(&Partition, String, Value)> = Vec::new();
    for (p, c) in basis.iter().rev() {
        let (s, v) = match at {
            Some((q, t)) => {
                let r = c.eval(q, t)?;
                (r.to_string(), json!(r.to_string()))
            }
            None => (render::coeff(c, fmt), serde_json::to_value(c).unwrap()),
        };
        rows.push((p, s, v));
    }
    Ok(match fmt {
        Format::Json => {
            let list: Vec<Value> = rows.iter().map(|(p, _, v)| json!({"partition": p.parts(), "coefficient": v})).collect();
            head.insert("basis".into(), Value::Array(list));
            render::json(&Value::Object(head))
        }
        Format::Text => {
            if rows.is_empty() {
                return Ok("0\n".into());
            }
            let table: Vec<Vec<String>> = rows.iter().map(|(p, s, _)| vec![render::m_label(p, fmt), s.clone()]).collect();
            render::table(&table)
        }
        Format::Latexish => {
            let terms: Vec<String> = rows
                .iter()
                .map(|(p, s, _)| {
                    let m = render::m_label(p, fmt);
                    if s == "1" {
                        m
                    } else if s.contains(['+', '-', '/', ' ']) {
                        format!("({s}) {m}")
                    } else {
                        format!("{s} {m}")
                    }
                })
                .collect();
            if terms.is_empty() {
                "0\n".into()
            } else {
                format!("{}\n", terms.join(" + "))
            }
        }
    })
}

fn need_shape(kind: &str, lambda: &Option<Partition>, n: Option<usize>) -> Result<(Partition, usize), Fail> {
    match (lambda, n) {
        (Some(l), Some(n)) => Ok((l.clone(), n)),
        _ => usage(format!("enumerate {kind} needs --lambda and --n (or --input)")),
    }
}

fn filling_item(f: &Filling) -> Result<(Vec<String>, Value), Fail> {
    let rows = f.rows();
    let shown: Vec<String> = rows
        .iter()
        .rev()
        .map(|r| r.iter().map(u32::to_string).collect::<Vec<_>>().join(" "))
        .collect();
    let (m, qi, iv, cq) = (maj(f), quinv(f), inv(f), coquinv(f)?);
    let content = f.content();
    let text = vec![
        shown.join(" / "),
        format!("maj={m}"),
        format!("quinv={qi}"),
        format!("coquinv={cq}"),
        format!("inv={iv}"),
        format!("content={content:?}"),
    ];
    let v = json!({"filling": rows, "maj": m, "quinv": qi, "coquinv": cq, "inv": iv, "content": content});
    Ok((text, v))
}

fn mlq_item(m: &MultilineQueue, fmt: Format) -> (Vec<String>, Value) {
    let w = m.weight();
    let rows: Vec<String> = m
        .system()
        .rows()
        .iter()
        .map(|r| r.iter().map(usize::to_string).collect::<Vec<_>>().join(","))
        .collect();
    let text = vec![
        format!("balls={}", rows.join("|")),
        format!("proj={}", m.proj_asep()),
        format!("content={:?}", m.content()),
        format!("maj={}", m.maj()),
        format!("wt={}", render::coeff(&w, fmt)),
    ];
    let v = json!({
        "mlq": m,
        "dep": m.dep(),
        "content": m.content(),
        "proj": m.proj_asep().parts(),
        "maj": m.maj(),
        "weight": w,
    });
    (text, v)
}

fn ball_item(s: &BallSystem) -> (Vec<String>, Value) {
    let count = enumerate_mlqs(s).len();
    let rows: Vec<String> = s.rows().iter().map(|r| r.iter().map(usize::to_string).collect::<Vec<_>>().join(",")).collect();
    (vec![rows.join("|"), format!("mlqs={count}")], json!({"rows": s.rows(), "mlqs": count}))
}

fn enumerate(a: EnumerateArgs) -> Out {
    let kind = a.kind.name();
    if let Some(input) = &a.input {
        let (text, v) = match a.kind {
            Kind::Fillings => {
                let f: Filling = serde_json::from_str(input).map_err(|e| Fail::Usage(format!("bad filling: {e}")))?;
                filling_item(&f)?
            }
            Kind::Mlqs => {
                let m: MultilineQueue =
                    serde_json::from_str(input).map_err(|e| Fail::Usage(format!("bad multiline queue: {e}")))?;
                let (text, mut v) = mlq_item(&m, a.format);
                let mut text = text;
                text.insert(1, format!("dep={:?}", m.dep()));
                v["kind"] = json!(kind);
                (text, v)
            }
            _ => return usage("--input is supported for fillings and mlqs"),
        };
        return Ok(match a.format {
            Format::Json => render::json(&v),
            _ => {
                let lines: Vec<Vec<String>> = text
                    .into_iter()
                    .map(|s| match s.split_once('=') {
                        Some((k, v)) => vec![k.to_string(), v.to_string()],
                        None => vec!["rows".into(), s],
                    })
                    .collect();
                render::table(&lines)
            }
        });
    }

    let (lambda, n) = need_shape(kind, &a.lambda, a.n)?;
    if n == 0 {
        return usage("--n must be at least 1");
    }
    let limit = a.limit.unwrap_or(usize::MAX);
    let mut items: Vec<(Vec<String>, Value)> = Vec::new();
    let count;
    match a.kind {
        Kind::Fillings | Kind::QuinvSorted | Kind::CoquinvSorted => {
            let keep = |f: &Filling| match a.kind {
                Kind::QuinvSorted => is_quinv_sorted(f),
                Kind::CoquinvSorted => is_coquinv_sorted(f),
                _ => true,
            };
            let mut c = 0usize;
            for f in enumerate_fillings(&lambda, n as u32).filter(|f| keep(f)) {
                c += 1;
                if !a.count && items.len() < limit {
                    items.push(filling_item(&f)?);
                }
            }
            count = c;
        }
        Kind::Nonattacking => {
            if lambda.len() > n {
                return Err(macq_core::Error::ShapeTooWide { len: lambda.len(), n }.into());
            }
            let all = nonattacking_fillings(&lambda, n as u32);
            count = all.len();
            if !a.count {
                for f in all.iter().take(limit) {
                    items.push(filling_item(f)?);
                }
            }
        }
        Kind::BallSystems => {
            let all = enumerate_ball_systems(&lambda, n)?;
            count = all.len();
            if !a.count {
                items = all.iter().take(limit).map(ball_item).collect();
            }
        }
        Kind::Mlqs => {
            let systems = enumerate_ball_systems(&lambda, n)?;
            let all: Vec<MultilineQueue> = systems.par_iter().flat_map_iter(enumerate_mlqs).collect();
            count = all.len();
            if !a.count {
                items = all.iter().take(limit).map(|m| mlq_item(m, a.format)).collect();
            }
        }
        Kind::AsepStates => {
            let all = asep_states(&lambda, n)?;
            count = all.len();
            items = all.iter().take(limit).map(|s| (vec![s.to_string()], json!(s.to_string()))).collect();
        }
        Kind::TazrpStates => {
            let all = tazrp_states(&lambda, n)?;
            count = all.len();
            items = all.iter().take(limit).map(|s| (vec![s.to_string()], json!(s.to_string()))).collect();
        }
    }
    Ok(match a.format {
        Format::Json => {
            let mut v = json!({"kind": kind, "lambda": lambda.parts(), "n": n, "count": count});
            if !a.count {
                v["items"] = Value::Array(items.into_iter().map(|(_, v)| v).collect());
            }
            render::json(&v)
        }
        _ if a.count => format!("{count}\n"),
        _ => {
            let rows: Vec<Vec<String>> = items.into_iter().map(|(t, _)| t).collect();
            format!("{}count  {count}\n", render::table(&rows))
        }
    })
}

fn verify(a: VerifyArgs) -> Out {
    let largs = formula_args(a.lhs, &a.shape)?;
    let rshape = ShapeOpts {
        lambda: a.rhs_lambda.clone().or_else(|| a.shape.lambda.clone()),
        n: a.rhs_n.or(a.shape.n),
        alpha: a.rhs_alpha.clone().or_else(|| a.shape.alpha.clone()),
    };
    let rargs = formula_args(a.rhs, &rshape)?;
    let lhs = engines::compute(a.lhs, &largs)?;
    let mut rhs = engines::compute(a.rhs, &rargs)?;
    let mut rdesc = describe(a.rhs, &rargs);
    if a.rhs_times_pi {
        let FormulaArgs::Shape { lambda, .. } = &rargs else {
            return usage("--rhs-times-pi needs a partition on the right side");
        };
        rhs = rhs.scale(&QTRational::from_poly(pi_lambda(lambda)));
        rdesc = format!("Pi{lambda} * {rdesc}");
    }
    let (equal, witness) = compare_expansions(&lhs, &rhs)?;
    let report = IdentityReport {
        lhs: describe(a.lhs, &largs),
        rhs: rdesc,
        equal,
        terms: lhs.len().max(rhs.len()),
        witness,
    };
    let out = match a.format {
        Format::Json => render::json(&report),
        f => {
            let mut s = format!("{} = {}: ", report.lhs, report.rhs);
            match &report.witness {
                None => s.push_str(&format!("equal ({} terms)\n", report.terms)),
                Some(w) => {
                    let x: Vec<String> = w.exponent.iter().map(u32::to_string).collect();
                    s.push_str(&format!(
                        "differ at x^({})\n  lhs: {}\n  rhs: {}\n",
                        x.join(","),
                        render::coeff(&w.lhs, f),
                        render::coeff(&w.rhs, f)
                    ));
                }
            }
            s
        }
    };
    if report.equal {
        Ok(out)
    } else {
        Err(Fail::Mismatch(out))
    }
}

fn need_t(t: &Option<BigRational>) -> Result<BigRational, Fail> {
    t.clone().map_or_else(|| usage("--t is required"), Ok)
}

fn need_x(kind: ProcessKind, x: &Option<Point>, n: usize) -> Result<Vec<BigRational>, Fail> {
    if kind == ProcessKind::Asep {
        if x.is_some() {
            return usage("--x only applies to tazrp");
        }
        return Ok(Vec::new());
    }
    match x {
        Some(Point(v)) if v.len() == n => Ok(v.clone()),
        Some(Point(v)) => usage(format!("--x has {} entries, expected {n}", v.len())),
        None => usage("tazrp needs --x"),
    }
}

fn process(a: ProcessArgs) -> Out {
    if a.n == 0 {
        return usage("--n must be at least 1");
    }
    if a.lambda.len() > a.n {
        return usage(format!("partition {} has {} parts but only {} sites", a.lambda, a.lambda.len(), a.n));
    }
    let head = json!({"process": a.kind.name(), "lambda": a.lambda.parts(), "n": a.n});
    if let Some(state) = &a.state {
        let (label, weight): (String, XExpansion) = match a.kind {
            ProcessKind::Asep => {
                let alpha = parse::composition(state)?;
                if alpha.parts().len() != a.n || alpha.to_partition() != a.lambda {
                    return usage(format!("state {alpha} is not in A({}, {})", a.lambda, a.n));
                }
                (alpha.to_string(), engines::f_alpha(&alpha)?)
            }
            ProcessKind::Tazrp => {
                let s = parse::tazrp_state(state)?;
                if s.sites().len() != a.n || s.species() != a.lambda {
                    return usage(format!("state {s} is not in T({}, {})", a.lambda, a.n));
                }
                (s.to_string(), tazrp_weight_symbolic(&a.lambda, a.n, &s))
            }
        };
        return Ok(match a.format {
            Format::Json => {
                let mut v = head;
                v["state"] = json!(label);
                v["weight"] = serde_json::to_value(&weight).unwrap();
                render::json(&v)
            }
            f => format!("{}\n", render::expansion(&weight, f)),
        });
    }
    let t = need_t(&a.t)?;
    let x = need_x(a.kind, &a.x, a.n)?;
    if a.transitions {
        return match a.kind {
            ProcessKind::Asep => transitions(Generator::asep(&a.lambda, a.n, &t)?, head, a.format),
            ProcessKind::Tazrp => transitions(Generator::tazrp(&a.lambda, a.n, &x, &t)?, head, a.format),
        };
    }
    let report = match a.kind {
        ProcessKind::Asep => verify_asep_stationarity(&a.lambda, a.n, &t)?,
        ProcessKind::Tazrp => verify_tazrp_stationarity(&a.lambda, a.n, &x, &t)?,
    };
    let out = stationarity_output(&report, a.format);
    if report.all_equal {
        Ok(out)
    } else {
        Err(Fail::Mismatch(out))
    }
}

fn stationarity_output(r: &StationarityReport, fmt: Format) -> String {
    if fmt == Format::Json {
        return render::json(r);
    }
    let mut rows = vec![vec!["state".to_string(), "exact".into(), "formula".into(), "equal".into()]];
    for c in &r.states {
        rows.push(vec![c.state.clone(), c.exact.clone(), c.formula.clone(), c.equal.to_string()]);
    }
    let verdict = if r.all_equal { "all states agree" } else { "MISMATCH" };
    format!("{}{} states, {verdict}\n", render::table(&rows), r.states.len())
}

fn transitions<S: Clone + Eq + Hash + Send + Sync + Display>(g: Generator<S>, mut head: Value, fmt: Format) -> Out {
    let mut list = Vec::new();
    let mut rows = Vec::new();
    for (i, s) in g.states().iter().enumerate() {
        for (j, rate) in g.row(i) {
            let to = g.states()[*j].to_string();
            rows.push(vec![s.to_string(), "->".into(), to.clone(), rate.to_string()]);
            list.push(json!({"from": s.to_string(), "to": to, "rate": rate.to_string()}));
        }
    }
    Ok(match fmt {
        Format::Json => {
            head["transitions"] = Value::Array(list);
            render::json(&head)
        }
        _ => render::table(&rows),
    })
}

fn simulate_cmd(a: SimulateArgs) -> Out {
    if a.n == 0 {
        return usage("--n must be at least 1");
    }
    if a.lambda.len() > a.n {
        return usage(format!("partition {} has {} parts but only {} sites", a.lambda, a.lambda.len(), a.n));
    }
    if a.runs == 0 {
        return usage("--runs must be at least 1");
    }
    let x = need_x(a.kind, &a.x, a.n)?;
    let mut head = json!({
        "process": a.kind.name(),
        "lambda": a.lambda.parts(),
        "n": a.n,
        "t": a.t.to_string(),
        "events": a.events,
        "seed": a.seed,
        "runs": a.runs,
        "clock": match a.clock { ClockArg::Continuous => "continuous", ClockArg::Discrete => "discrete" },
    });
    if a.kind == ProcessKind::Tazrp {
        head["x"] = json!(x.iter().map(ToString::to_string).collect::<Vec<_>>());
    }
    match a.kind {
        ProcessKind::Asep => run_sim(Generator::asep(&a.lambda, a.n, &a.t)?, &a, head),
        ProcessKind::Tazrp => run_sim(Generator::tazrp(&a.lambda, a.n, &x, &a.t)?, &a, head),
    }
}

fn run_sim<S: Clone + Eq + Hash + Send + Sync + Display>(g: Generator<S>, a: &SimulateArgs, mut head: Value) -> Out {
    let exact = g.stationary_exact()?;
    let clock = match a.clock {
        ClockArg::Continuous => Clock::Continuous,
        ClockArg::Discrete => Clock::Discrete,
    };
    let runs: Vec<Vec<f64>> = (0..a.runs)
        .into_par_iter()
        .map(|k| simulate(&g, 0, a.events, a.seed.wrapping_add(k), clock).distribution)
        .collect();
    let mut est = vec![0.0; g.len()];
    for r in &runs {
        for (e, v) in est.iter_mut().zip(r) {
            *e += v / a.runs as f64;
        }
    }
    let tv = total_variation(&est, &exact);
    Ok(match a.format {
        Format::Json => {
            let states: Vec<Value> = g
                .states()
                .iter()
                .zip(est.iter().zip(&exact))
                .map(|(s, (e, x))| json!({"state": s.to_string(), "estimate": e, "exact": x.to_string()}))
                .collect();
            head["states"] = Value::Array(states);
            head["tv"] = json!(tv);
            render::json(&head)
        }
        _ => {
            let mut rows = vec![vec!["state".to_string(), "estimate".into(), "exact".into()]];
            for (s, (e, x)) in g.states().iter().zip(est.iter().zip(&exact)) {
                rows.push(vec![s.to_string(), format!("{e:.6}"), x.to_string()]);
            }
            format!("{}total variation  {tv:.6}\n", render::table(&rows))
        }
    })
}
