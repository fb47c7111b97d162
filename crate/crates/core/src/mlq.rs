//! Ball systems, multiline queues, pairing orders and queue weights.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fillings::Filling;
use crate::qtalg::{QTPoly, QTRational};
use crate::shapes::{conjugate, Composition, Partition};

/// One subset of sites per row; row `r` holds `λ'_r` balls.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BallSystem {
    lambda: Partition,
    n: usize,
    /// `rows[r - 1]`: sorted 1-based columns of the balls in row `r`.
    rows: Vec<Vec<usize>>,
}

impl BallSystem {
    pub fn new(lambda: Partition, n: usize, rows: Vec<Vec<usize>>) -> Result<Self> {
        if lambda.len() > n {
            return Err(Error::ShapeTooWide { len: lambda.len(), n });
        }
        if lambda.is_empty() {
            return Err(Error::Invalid("a ball system needs a nonempty shape".into()));
        }
        let conj = conjugate(&lambda);
        if rows.len() != conj.len() {
            return Err(Error::Invalid(format!("expected {} rows, got {}", conj.len(), rows.len())));
        }
        let mut rows = rows;
        for (r, row) in rows.iter_mut().enumerate() {
            row.sort_unstable();
            row.dedup();
            if row.len() as u32 != conj.parts()[r] || row.iter().any(|&c| c == 0 || c > n) {
                return Err(Error::Invalid(format!("row {} must hold {} distinct sites in 1..={n}", r + 1, conj.parts()[r])));
            }
        }
        Ok(BallSystem { lambda, n, rows })
    }

    pub fn lambda(&self) -> &Partition {
        &self.lambda
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Vec<usize>] {
        &self.rows
    }

    pub fn height(&self) -> usize {
        self.rows.len()
    }
}

/// k-subsets of `1..=n` in lexicographic order.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for c in start..=n {
            if n - c + 1 < k - cur.len() {
                break;
            }
            cur.push(c);
            go(c + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(1, n, k, &mut Vec::new(), &mut out);
    out
}

/// All ball systems, row 1 varying slowest, each row's subsets in
/// lexicographic order.
pub fn enumerate_ball_systems(lambda: &Partition, n: usize) -> Result<Vec<BallSystem>> {
    enumerate_ball_systems_with_base(lambda, n, None)
}

/// Ball systems whose bottom row is `base` when given.
pub(crate) fn enumerate_ball_systems_with_base(
    lambda: &Partition,
    n: usize,
    base: Option<Vec<usize>>,
) -> Result<Vec<BallSystem>> {
    if lambda.len() > n {
        return Err(Error::ShapeTooWide { len: lambda.len(), n });
    }
    if lambda.is_empty() {
        return Err(Error::Invalid("a ball system needs a nonempty shape".into()));
    }
    let conj = conjugate(lambda);
    let mut systems: Vec<Vec<Vec<usize>>> = vec![Vec::new()];
    for (r, &size) in conj.parts().iter().enumerate() {
        let choices = match (&base, r) {
            (Some(b), 0) => vec![b.clone()],
            _ => subsets(n, size as usize),
        };
        let mut next = Vec::with_capacity(systems.len() * choices.len());
        for s in &systems {
            for c in &choices {
                let mut s = s.clone();
                s.push(c.clone());
                next.push(s);
            }
        }
        systems = next;
    }
    Ok(systems.into_iter().map(|rows| BallSystem { lambda: lambda.clone(), n, rows }).collect())
}

/// A pairing of a ball system.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultilineQueue {
    system: BallSystem,
    /// `partner[r - 1][k]`: arrival column in row `r - 1` of the `k`-th ball
    /// of row `r` (empty for row 1).
    partner: Vec<Vec<usize>>,
    /// `labels[r - 1][k]`: label of the `k`-th ball of row `r`.
    labels: Vec<Vec<u32>>,
}

/// One strand segment from `(row, from)` down to `(row - 1, to)`, with its
/// statistics under some pairing order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairingStep {
    pub row: usize,
    pub from: usize,
    pub to: usize,
    pub label: u32,
    pub trivial: bool,
    /// wraps around the cylinder
    pub xi: bool,
    pub leg: u32,
    pub skip: u32,
    pub free: u32,
    /// 1-based position in the pairing order
    pub position: usize,
}

impl MultilineQueue {
    /// Validates a pairing given as `(r, i, j)` triples: the ball at column
    /// `i` of row `r` is matched to column `j` of row `r - 1`.
    pub fn from_matching(system: BallSystem, matching: &[(usize, usize, usize)]) -> Result<Self> {
        let l = system.height();
        let mut partner: Vec<Vec<usize>> = system.rows.iter().map(|row| vec![0; row.len()]).collect();
        partner[0].clear();
        for &(r, i, j) in matching {
            if r < 2 || r > l {
                return Err(Error::Invalid(format!("no pairing departs from row {r}")));
            }
            let k = system.rows[r - 1].binary_search(&i).map_err(|_| Error::Invalid(format!("no ball at ({r}, {i})")))?;
            if !system.rows[r - 2].contains(&j) {
                return Err(Error::Invalid(format!("no ball at ({}, {j})", r - 1)));
            }
            partner[r - 1][k] = j;
        }
        for r in 2..=l {
            let p = &partner[r - 1];
            if p.contains(&0) {
                return Err(Error::Invalid(format!("unmatched ball in row {r}")));
            }
            let mut seen = p.clone();
            seen.sort_unstable();
            seen.dedup();
            if seen.len() != p.len() {
                return Err(Error::Invalid(format!("row {r} pairing is not injective")));
            }
        }
        let labels = derive_labels(&system, &partner);
        for r in 2..=l {
            if !row_pair_ok(&system, &partner, &labels, r) {
                return Err(Error::Invalid(format!("labels between rows {r} and {} violate the pairing rules", r - 1)));
            }
        }
        Ok(MultilineQueue { system, partner, labels })
    }

    pub fn system(&self) -> &BallSystem {
        &self.system
    }

    pub fn lambda(&self) -> &Partition {
        &self.system.lambda
    }

    pub fn n(&self) -> usize {
        self.system.n
    }

    pub fn labels(&self) -> &[Vec<u32>] {
        &self.labels
    }

    /// Pairings as `(r, i, j)` triples, rows top to bottom, left to right.
    pub fn matching(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for r in (2..=self.system.height()).rev() {
            for (k, &i) in self.system.rows[r - 1].iter().enumerate() {
                out.push((r, i, self.partner[r - 1][k]));
            }
        }
        out
    }

    /// Pairing order: rows top to bottom, labels high to low, trivial
    /// pairings first, then by `priority(row, column)` of the departure.
    pub fn order_by<F: Fn(usize, usize) -> u64>(&self, priority: F) -> Vec<PairingStep> {
        let sys = &self.system;
        let n = sys.n;
        let mut steps: Vec<PairingStep> = Vec::new();
        for r in (2..=sys.height()).rev() {
            let mut row_steps: Vec<PairingStep> = sys.rows[r - 1]
                .iter()
                .enumerate()
                .map(|(k, &i)| {
                    let j = self.partner[r - 1][k];
                    let label = self.labels[r - 1][k];
                    PairingStep {
                        row: r,
                        from: i,
                        to: j,
                        label,
                        trivial: i == j,
                        xi: i > j,
                        leg: label - r as u32,
                        skip: 0,
                        free: 0,
                        position: 0,
                    }
                })
                .collect();
            row_steps.sort_by_key(|s| (std::cmp::Reverse(s.label), !s.trivial, priority(s.row, s.from)));
            steps.extend(row_steps);
        }
        for (p, s) in steps.iter_mut().enumerate() {
            s.position = p + 1;
        }
        // arrival time per (row, column); balls never arrived at stay free
        let mut arrival: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for s in &steps {
            arrival.insert((s.row - 1, s.to), s.position);
        }
        for s in steps.iter_mut() {
            if s.trivial {
                continue;
            }
            let below = &sys.rows[s.row - 2];
            let later = |c: usize, strict: bool| {
                let a = arrival.get(&(s.row - 1, c)).copied().unwrap_or(usize::MAX);
                if strict { a > s.position } else { a >= s.position }
            };
            s.free = below.iter().filter(|&&c| later(c, false)).count() as u32;
            let span = (s.to + n - s.from) % n;
            s.skip = below
                .iter()
                .filter(|&&c| {
                    let off = (c + n - s.from) % n;
                    off > 0 && off < span && later(c, true)
                })
                .count() as u32;
        }
        steps
    }

    /// Ties broken by departure column.
    pub fn canonical_order(&self) -> Vec<PairingStep> {
        self.order_by(|_, col| col as u64)
    }

    /// Departure positions, rows top to bottom, left to right.
    pub fn dep(&self) -> Vec<usize> {
        let steps = self.canonical_order();
        let mut out = Vec::new();
        for r in (2..=self.system.height()).rev() {
            for &i in &self.system.rows[r - 1] {
                out.push(steps.iter().find(|s| s.row == r && s.from == i).unwrap().position);
            }
        }
        out
    }

    /// `Σ (leg + 1)` over strands wrapping around the cylinder.
    pub fn maj(&self) -> u32 {
        self.canonical_order().iter().filter(|s| s.xi).map(|s| s.leg + 1).sum()
    }

    pub fn weight(&self) -> QTRational {
        weight_of_steps(&self.canonical_order())
    }

    pub fn content(&self) -> Vec<u32> {
        let mut c = vec![0; self.system.n];
        for row in &self.system.rows {
            for &col in row {
                c[col - 1] += 1;
            }
        }
        c
    }

    /// Bottom-row labels, vacancies as 0.
    pub fn proj_asep(&self) -> Composition {
        let mut out = vec![0; self.system.n];
        for (k, &c) in self.system.rows[0].iter().enumerate() {
            out[c - 1] = self.labels[0][k];
        }
        Composition(out)
    }

    /// Each strand of length `ℓ` becomes a column of height `ℓ` holding its
    /// sites bottom to top; equal heights are ordered by row-1 site.
    pub fn queue_tableau_map(&self) -> Filling {
        let sys = &self.system;
        let mut columns: Vec<Vec<u32>> = Vec::new();
        for (k, &c) in sys.rows[0].iter().enumerate() {
            let label = self.labels[0][k] as usize;
            let mut col = vec![c as u32];
            let mut cur = c;
            for r in 2..=label {
                let idx = self.partner[r - 1].iter().position(|&p| p == cur).expect("strand continues");
                cur = sys.rows[r - 1][idx];
                col.push(cur as u32);
            }
            columns.push(col);
        }
        columns.sort_by(|a, b| b.len().cmp(&a.len()).then(a[0].cmp(&b[0])));
        Filling::from_columns(sys.lambda.clone(), sys.n as u32, columns).expect("strands tile the diagram")
    }
}

/// `q^{maj} t^{Skip} Π (1 - t) / (1 - q^{leg+1} t^{Free})` over non-trivial
/// steps.
pub fn weight_of_steps(steps: &[PairingStep]) -> QTRational {
    let mut q_exp = 0;
    let mut t_exp = 0;
    let mut num = QTPoly::one();
    let mut factors = Vec::new();
    for s in steps.iter().filter(|s| !s.trivial) {
        if s.xi {
            q_exp += s.leg + 1;
        }
        t_exp += s.skip;
        num = &num * &QTPoly::one_minus(0, 1);
        factors.push((s.leg + 1, s.free));
    }
    QTRational::with_factors(num.shift(crate::qtalg::Mono::new(q_exp, t_exp)), &factors)
}

fn derive_labels(sys: &BallSystem, partner: &[Vec<usize>]) -> Vec<Vec<u32>> {
    let l = sys.height();
    let mut labels: Vec<Vec<u32>> = sys.rows.iter().enumerate().map(|(r, row)| vec![r as u32 + 1; row.len()]).collect();
    for r in (2..=l).rev() {
        for k in 0..sys.rows[r - 1].len() {
            let j = partner[r - 1][k];
            let idx = sys.rows[r - 2].binary_search(&j).unwrap();
            labels[r - 2][idx] = labels[r - 1][k];
        }
    }
    labels
}

/// Checks vertical neighbours between rows `r` and `r - 1`: equal labels
/// must be paired to each other, unequal ones must increase downward.
fn row_pair_ok(sys: &BallSystem, partner: &[Vec<usize>], labels: &[Vec<u32>], r: usize) -> bool {
    for (k, &c) in sys.rows[r - 1].iter().enumerate() {
        if let Ok(idx) = sys.rows[r - 2].binary_search(&c) {
            let (top, bottom) = (labels[r - 1][k], labels[r - 2][idx]);
            if top == bottom {
                if partner[r - 1][k] != c {
                    return false;
                }
            } else if top > bottom {
                return false;
            }
        }
    }
    true
}

/// Calls `visit` on every pairing of `sys`, row by row from the top, with
/// label constraints checked as soon as a row pair is complete.
pub fn visit_mlqs<F: FnMut(&MultilineQueue)>(sys: &BallSystem, mut visit: F) {
    let l = sys.height();
    let mut partner: Vec<Vec<usize>> = sys.rows.iter().map(|row| vec![0; row.len()]).collect();
    partner[0].clear();
    let mut labels: Vec<Vec<u32>> = sys.rows.iter().enumerate().map(|(r, row)| vec![r as u32 + 1; row.len()]).collect();

    #[allow(clippy::too_many_arguments)]
    fn row_step<F: FnMut(&MultilineQueue)>(
        sys: &BallSystem,
        r: usize,
        k: usize,
        used: &mut Vec<bool>,
        partner: &mut Vec<Vec<usize>>,
        labels: &mut Vec<Vec<u32>>,
        visit: &mut F,
    ) {
        if r < 2 {
            let m = MultilineQueue { system: sys.clone(), partner: partner.clone(), labels: labels.clone() };
            visit(&m);
            return;
        }
        let top = &sys.rows[r - 1];
        let below = &sys.rows[r - 2];
        if k == top.len() {
            // finish labels of row r - 1 and check the row pair
            for (idx, lab) in labels[r - 2].iter_mut().enumerate() {
                if !used[idx] {
                    *lab = r as u32 - 1;
                }
            }
            for (kk, &j) in partner[r - 1].iter().enumerate() {
                let idx = below.binary_search(&j).unwrap();
                labels[r - 2][idx] = labels[r - 1][kk];
            }
            if row_pair_ok(sys, partner, labels, r) {
                let mut next_used = vec![false; if r >= 3 { sys.rows[r - 3].len() } else { 0 }];
                row_step(sys, r - 1, 0, &mut next_used, partner, labels, visit);
            }
            return;
        }
        for idx in 0..below.len() {
            if used[idx] {
                continue;
            }
            used[idx] = true;
            partner[r - 1][k] = below[idx];
            row_step(sys, r, k + 1, used, partner, labels, visit);
            used[idx] = false;
        }
    }

    let mut used = vec![false; if l >= 2 { sys.rows[l - 2].len() } else { 0 }];
    row_step(sys, l, 0, &mut used, &mut partner, &mut labels, &mut visit);
}

pub fn enumerate_mlqs(sys: &BallSystem) -> Vec<MultilineQueue> {
    let mut out = Vec::new();
    visit_mlqs(sys, |m| out.push(m.clone()));
    out
}

#[derive(Serialize, Deserialize)]
struct MlqJson {
    lambda: Vec<u32>,
    n: usize,
    rows: Vec<Vec<usize>>,
    #[serde(rename = "match")]
    matching: Vec<(usize, usize, usize)>,
}

impl Serialize for MultilineQueue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MlqJson {
            lambda: self.system.lambda.parts().to_vec(),
            n: self.system.n,
            rows: self.system.rows.clone(),
            matching: self.matching(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for MultilineQueue {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = MlqJson::deserialize(d)?;
        // the largest part is the number of rows; check before building the conjugate
        if j.lambda.iter().any(|&p| p as usize > j.rows.len()) {
            return Err(serde::de::Error::custom(format!("expected {} rows", j.lambda.iter().max().unwrap())));
        }
        let lambda = Partition::new(j.lambda).map_err(serde::de::Error::custom)?;
        let sys = BallSystem::new(lambda, j.n, j.rows).map_err(serde::de::Error::custom)?;
        MultilineQueue::from_matching(sys, &j.matching).map_err(serde::de::Error::custom)
    }
}
