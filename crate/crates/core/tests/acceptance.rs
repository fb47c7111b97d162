//! Acceptance suite: one line per criterion, `PASS` or `FAIL`, with the
//! elapsed time checked against its limit.

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use num_rational::BigRational;
use num_traits::One;
use rand::seq::SliceRandom;
use rand::SeedableRng;

use macq_core::engines::{
    h_compact, h_via_inv, h_via_quinv, j_via_nonattacking, j_via_superfillings, p_compact, p_via_mlq,
    p_via_nonattacking, pi_lambda,
};
use macq_core::fillings::{enumerate_fillings, is_quinv_sorted, maj, quinv, tau, Filling};
use macq_core::mlq::{enumerate_ball_systems, visit_mlqs, weight_of_steps, BallSystem, MultilineQueue};
use macq_core::processes::{
    asep_states, asep_transitions, simulate, tazrp_states, tazrp_transitions, tazrp_weight_symbolic,
    total_variation, verify_asep_stationarity, verify_tazrp_stationarity, AsepState, Clock, Generator,
    TazrpState,
};
use macq_core::qtalg::{Mono, QTPoly, QTRational, XExpansion};
use macq_core::shapes::Partition;

type Check = Result<(), String>;

fn p(v: &[u32]) -> Partition {
    Partition::new(v.to_vec()).unwrap()
}

fn r(a: i64, b: i64) -> BigRational {
    BigRational::new(a.into(), b.into())
}

fn poly(terms: &[(i64, u32, u32)]) -> QTPoly {
    QTPoly::from_terms(terms.iter().map(|&(c, a, b)| (a, b, c)))
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn criterion_1() -> Check {
    let sys = BallSystem::new(
        p(&[4, 4, 3, 1, 1]),
        6,
        vec![vec![1, 2, 4, 5, 6], vec![1, 3, 5], vec![2, 3, 6], vec![1, 3]],
    )
    .map_err(|e| e.to_string())?;
    let matching = [(4, 1, 6), (4, 3, 3), (3, 2, 5), (3, 3, 3), (3, 6, 1), (2, 1, 1), (2, 3, 5), (2, 5, 6)];
    let m = MultilineQueue::from_matching(sys, &matching).map_err(|e| e.to_string())?;
    let num = &QTPoly::monomial(1, 2, 2) * &QTPoly::one_minus(0, 1).pow(5);
    let expect = QTRational::with_factors(num, &[(3, 4), (2, 3), (2, 2), (1, 2), (1, 1)]);
    ensure(m.weight() == expect, || format!("weight {}", m.weight()))?;
    ensure(m.dep() == vec![2, 1, 5, 3, 4, 6, 7, 8], || format!("dep {:?}", m.dep()))?;
    ensure(m.content() == vec![3, 2, 3, 1, 2, 2], || format!("content {:?}", m.content()))
}

fn criterion_2() -> Check {
    let lam = p(&[2, 2, 1]);
    let expect = QTRational::from_poly(poly(&[
        (1, 0, 0),
        (1, 0, 1),
        (1, 1, 0),
        (2, 0, 2),
        (2, 1, 1),
        (1, 2, 0),
        (1, 0, 3),
        (1, 1, 2),
    ]));
    let fillings: Vec<Filling> = enumerate_fillings(&lam, 2).filter(|f| f.content() == vec![3, 2]).collect();
    ensure(fillings.len() == 10, || format!("{} fillings", fillings.len()))?;
    let sorted = fillings.iter().filter(|f| is_quinv_sorted(f)).count();
    ensure(sorted == 6, || format!("{sorted} sorted fillings"))?;
    for (name, h) in [("h-quinv", h_via_quinv(&lam, 2)), ("h-compact", h_compact(&lam, 2)), ("h-inv", h_via_inv(&lam, 2))] {
        let c = h.coefficient(&[3, 2]).map_err(|e| e.to_string())?;
        ensure(c == expect, || format!("{name}: {c}"))?;
    }
    Ok(())
}

fn criterion_3() -> Check {
    let lam = p(&[2, 2]);
    let m211 = QTRational::with_factors(&poly(&[(1, 0, 0), (1, 1, 0)]) * &QTPoly::one_minus(0, 1), &[(1, 1)]);
    let m1111 = QTRational::with_factors(
        &poly(&[(2, 0, 0), (1, 0, 1), (3, 1, 0), (1, 2, 0), (3, 1, 1), (2, 2, 1)]) * &QTPoly::one_minus(0, 1).pow(2),
        &[(1, 1), (1, 2)],
    );
    let engines = [
        ("p-nonatt", p_via_nonattacking(&lam, 4)),
        ("p-compact", p_compact(&lam, 4)),
        ("p-mlq", p_via_mlq(&lam, 4)),
    ];
    for (name, e) in engines {
        let basis = e.map_err(|e| e.to_string())?.monomial_basis().map_err(|e| format!("{name}: {e}"))?;
        let get = |mu: &[u32]| basis.get(&p(mu)).cloned().unwrap_or_default();
        ensure(get(&[2, 2]) == QTRational::one(), || format!("{name} m22 {}", get(&[2, 2])))?;
        ensure(get(&[2, 1, 1]) == m211, || format!("{name} m211 {}", get(&[2, 1, 1])))?;
        ensure(get(&[1, 1, 1, 1]) == m1111, || format!("{name} m1111 {}", get(&[1, 1, 1, 1])))?;
        ensure(basis.len() == 3, || format!("{name}: {} basis terms", basis.len()))?;
    }
    Ok(())
}

fn partitions_up_to(size: u32) -> Vec<Partition> {
    (1..=size).flat_map(Partition::all_of_size).collect()
}

fn same(a: &XExpansion, b: &XExpansion, what: &str) -> Check {
    match a.first_difference(b).map_err(|e| e.to_string())? {
        None => Ok(()),
        Some((e, x, y)) => Err(format!("{what}: x^{e:?} {x} vs {y}")),
    }
}

fn criterion_4() -> Check {
    let mut cases = 0;
    for lam in partitions_up_to(6) {
        for n in 1..=3 {
            cases += 1;
            let q = h_via_quinv(&lam, n);
            same(&q, &h_via_inv(&lam, n), &format!("h-inv {lam} n={n}"))?;
            same(&q, &h_compact(&lam, n), &format!("h-compact {lam} n={n}"))?;
        }
    }
    for lam in partitions_up_to(5) {
        for n in lam.len().max(1)..=4 {
            cases += 1;
            let m = p_via_mlq(&lam, n).map_err(|e| e.to_string())?;
            same(&m, &p_via_nonattacking(&lam, n).map_err(|e| e.to_string())?, &format!("p-nonatt {lam} n={n}"))?;
            same(&m, &p_compact(&lam, n).map_err(|e| e.to_string())?, &format!("p-compact {lam} n={n}"))?;
        }
    }
    for lam in partitions_up_to(4) {
        for n in lam.len()..=2 {
            cases += 1;
            let j = j_via_nonattacking(&lam, n).map_err(|e| e.to_string())?;
            same(&j, &j_via_superfillings(&lam, n).map_err(|e| e.to_string())?, &format!("j-super {lam} n={n}"))?;
            let pp = p_via_nonattacking(&lam, n).map_err(|e| e.to_string())?;
            same(&j, &pp.scale(&QTRational::from_poly(pi_lambda(&lam))), &format!("Π·p {lam} n={n}"))?;
        }
    }
    ensure(cases == 87 + 48 + 12, || format!("{cases} (λ, n) cases"))
}

fn criterion_5() -> Check {
    for lam in partitions_up_to(6) {
        let parts = lam.parts();
        for n in 1..=3u32 {
            for sigma in enumerate_fillings(&lam, n) {
                for j in 1..parts.len() {
                    if parts[j - 1] != parts[j] || sigma.column(j) == sigma.column(j + 1) {
                        continue;
                    }
                    let image = tau(&sigma, j).map_err(|e| e.to_string())?;
                    ensure(maj(&image) == maj(&sigma), || format!("maj changed by tau_{j} on {:?}", sigma.rows()))?;
                    ensure(quinv(&image).abs_diff(quinv(&sigma)) == 1, || {
                        format!("quinv moved by {} under tau_{j} on {:?}", quinv(&image) as i64 - quinv(&sigma) as i64, sigma.rows())
                    })?;
                }
            }
        }
    }
    for sys in enumerate_ball_systems(&p(&[3, 2, 1]), 3).map_err(|e| e.to_string())? {
        let mut bad = None;
        visit_mlqs(&sys, |m| {
            if bad.is_none() && m.maj() != maj(&m.queue_tableau_map()) {
                bad = Some(m.matching());
            }
        });
        if let Some(b) = bad {
            return Err(format!("maj(M) != maj(q(M)) for {b:?}"));
        }
    }
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
    for lam in [p(&[2, 1]), p(&[2, 2]), p(&[3, 1])] {
        for n in lam.len()..=4 {
            for sys in enumerate_ball_systems(&lam, n).map_err(|e| e.to_string())? {
                let mut classes: BTreeMap<Vec<Vec<u32>>, Vec<MultilineQueue>> = BTreeMap::new();
                visit_mlqs(&sys, |m| classes.entry(m.labels().to_vec()).or_default().push(m.clone()));
                for class in classes.values() {
                    let canonical = class.iter().fold(QTRational::zero(), |acc, m| &acc + &m.weight());
                    for _ in 0..4 {
                        let mut prio: Vec<u64> = (0..(sys.height() * n) as u64).collect();
                        prio.shuffle(&mut rng);
                        let other = class.iter().fold(QTRational::zero(), |acc, m| {
                            &acc + &weight_of_steps(&m.order_by(|row, col| prio[(row - 1) * n + col - 1]))
                        });
                        ensure(other == canonical, || format!("order-dependent sum on {lam} n={n} {:?}", sys.rows()))?;
                    }
                }
            }
        }
    }
    Ok(())
}

fn criterion_6() -> Check {
    for (lam, n) in [(p(&[2, 1]), 3), (p(&[3, 3, 1]), 4), (p(&[2, 2, 1]), 4)] {
        for t in [r(0, 1), r(1, 3), r(3, 7), r(1, 1)] {
            let rep = verify_asep_stationarity(&lam, n, &t).map_err(|e| format!("{lam} n={n} t={t}: {e}"))?;
            ensure(rep.all_equal, || format!("{lam} n={n} t={t}: mismatch"))?;
        }
    }
    Ok(())
}

fn criterion_7() -> Check {
    let w: TazrpState = "-|21|1".parse().map_err(|e: macq_core::Error| e.to_string())?;
    let got = tazrp_weight_symbolic(&p(&[2, 1, 1]), 3, &w);
    let one_t = poly(&[(1, 0, 0), (1, 0, 1)]);
    let mut expect = XExpansion::new(3);
    expect.add_term(vec![1, 2, 1], &QTRational::from_poly(one_t.shift(Mono::new(0, 1))));
    expect.add_term(vec![0, 3, 1], &QTRational::from_poly(one_t.shift(Mono::new(0, 1))));
    expect.add_term(vec![0, 2, 2], &QTRational::from_poly(one_t));
    same(&got, &expect, "weight of (·|21|1)")?;
    let x = [r(2, 3), r(1, 1), r(5, 4)];
    for lam in [p(&[2, 1, 1]), p(&[3, 1, 1])] {
        for t in [r(1, 3), r(2, 5)] {
            let rep = verify_tazrp_stationarity(&lam, 3, &x, &t).map_err(|e| e.to_string())?;
            ensure(rep.all_equal, || format!("{lam} t={t}: mismatch"))?;
        }
    }
    Ok(())
}

fn criterion_8() -> Check {
    let printed_asep = [
        [3, 3, 1, 0],
        [3, 3, 0, 1],
        [3, 1, 3, 0],
        [3, 0, 3, 1],
        [3, 1, 0, 3],
        [3, 0, 1, 3],
        [1, 3, 3, 0],
        [0, 3, 3, 1],
        [1, 3, 0, 3],
        [0, 3, 1, 3],
        [1, 0, 3, 3],
        [0, 1, 3, 3],
    ];
    let got: BTreeSet<Vec<u32>> = asep_states(&p(&[3, 3, 1]), 4).map_err(|e| e.to_string())?.into_iter().map(|s| s.0).collect();
    let want: BTreeSet<Vec<u32>> = printed_asep.iter().map(|s| s.to_vec()).collect();
    ensure(got.len() == 12 && got == want, || format!("ASEP states {got:?}"))?;
    let printed_tazrp = [
        "311|-|-", "-|311|-", "-|-|311", "31|1|-", "31|-|1", "1|31|-", "-|31|1", "1|-|31", "-|1|31",
        "11|3|-", "11|-|3", "3|11|-", "-|11|3", "3|-|11", "-|3|11", "3|1|1", "1|3|1", "1|1|3",
    ];
    let got: BTreeSet<String> =
        tazrp_states(&p(&[3, 1, 1]), 3).map_err(|e| e.to_string())?.iter().map(ToString::to_string).collect();
    let want: BTreeSet<String> = printed_tazrp.iter().map(|s| s.to_string()).collect();
    ensure(got.len() == 18 && got == want, || format!("TAZRP states {got:?}"))
}

fn symmetric(e: &XExpansion, what: &str) -> Check {
    let n = e.n();
    for i in 0..n.saturating_sub(1) {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.swap(i, i + 1);
        same(e, &e.permute_variables(&perm), &format!("{what} under swap {i}"))?;
    }
    Ok(())
}

fn criterion_9() -> Check {
    for lam in partitions_up_to(4) {
        for n in lam.len()..=3 {
            let h = h_via_quinv(&lam, n);
            symmetric(&h, &format!("h-quinv {lam} n={n}"))?;
            ensure(h.is_polynomial_in_qt(), || format!("h-quinv {lam} n={n} has a denominator"))?;
            symmetric(&p_via_mlq(&lam, n).map_err(|e| e.to_string())?, &format!("p-mlq {lam} n={n}"))?;
            symmetric(&p_via_nonattacking(&lam, n).map_err(|e| e.to_string())?, &format!("p-nonatt {lam} n={n}"))?;
        }
    }
    let t = r(2, 5);
    let x = [r(2, 3), r(1, 1), r(5, 4)];
    for lam in [p(&[2, 1]), p(&[3, 3, 1]), p(&[2, 2, 1]), p(&[3, 1, 1])] {
        for n in [3, 4] {
            if lam.len() <= n {
                for s in asep_states(&lam, n).map_err(|e| e.to_string())? {
                    for (u, _) in asep_transitions(&s, &t) {
                        ensure(u.species() == lam, || format!("ASEP {s} -> {u}"))?;
                    }
                }
            }
        }
        for s in tazrp_states(&lam, 3).map_err(|e| e.to_string())? {
            for (u, _) in tazrp_transitions(&s, &x, &t).map_err(|e| e.to_string())? {
                ensure(u.species() == lam, || format!("TAZRP {s} -> {u}"))?;
            }
        }
    }
    let g: Generator<AsepState> = Generator::asep(&p(&[2, 1]), 3, &r(1, 2)).map_err(|e| e.to_string())?;
    let exact = g.stationary_exact().map_err(|e| e.to_string())?;
    let sim = simulate(&g, 0, 1_000_000, 7, Clock::Continuous);
    let tv = total_variation(&sim.distribution, &exact);
    ensure(tv < 0.01, || format!("TV distance {tv}"))?;
    let total: BigRational = exact.iter().sum();
    ensure(total.is_one(), || "stationary law does not sum to 1".into())
}

fn main() {
    let criteria: [(&str, fn() -> Check, Duration); 9] = [
        ("1 golden MLQ weight", criterion_1, Duration::from_secs(1)),
        ("2 golden H coefficient", criterion_2, Duration::from_secs(1)),
        ("3 golden P(2,2) expansion", criterion_3, Duration::from_secs(5)),
        ("4 identity suites", criterion_4, Duration::from_secs(600)),
        ("5 statistic lemmas", criterion_5, Duration::from_secs(600)),
        ("6 ASEP stationarity", criterion_6, Duration::from_secs(120)),
        ("7 TAZRP stationarity", criterion_7, Duration::from_secs(120)),
        ("8 state-space counts", criterion_8, Duration::from_secs(60)),
        ("9 property suite", criterion_9, Duration::from_secs(600)),
    ];
    let mut failed = 0;
    for (name, run, limit) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let verdict = match (&outcome, elapsed <= limit) {
            (Ok(()), true) => "PASS".to_string(),
            (Ok(()), false) => format!("FAIL (over the {limit:?} limit)"),
            (Err(e), _) => format!("FAIL ({e})"),
        };
        if !verdict.starts_with("PASS") {
            failed += 1;
        }
        println!("criterion {name}: {verdict} [{:.3}s]", elapsed.as_secs_f64());
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
