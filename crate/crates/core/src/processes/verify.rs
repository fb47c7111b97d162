use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::{AsepState, Generator, TazrpState};
use crate::engines::f_alpha_all;
use crate::error::{Error, Result};
use crate::fillings::{quinv, FillingIter};
use crate::qtalg::{QTPoly, QTRational, XExpansion};
use crate::shapes::{Composition, Partition};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StateCheck {
    pub state: String,
    /// stationary probability from the generator
    pub exact: String,
    /// normalized combinatorial weight
    pub formula: String,
    pub equal: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StationarityReport {
    pub process: String,
    pub lambda: Partition,
    pub n: usize,
    pub t: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<Vec<String>>,
    pub states: Vec<StateCheck>,
    pub all_equal: bool,
}

fn normalize(weights: &[BigRational]) -> Result<Vec<BigRational>> {
    let total: BigRational = weights.iter().sum();
    if total.is_zero() {
        return Err(Error::Invalid("formula weights sum to zero".into()));
    }
    Ok(weights.iter().map(|w| w / &total).collect())
}

fn checks<S: ToString>(states: &[S], exact: &[BigRational], formula: &[BigRational]) -> (Vec<StateCheck>, bool) {
    let rows: Vec<StateCheck> = states
        .iter()
        .zip(exact.iter().zip(formula))
        .map(|(s, (e, f))| StateCheck { state: s.to_string(), exact: e.to_string(), formula: f.to_string(), equal: e == f })
        .collect();
    let ok = rows.iter().all(|c| c.equal);
    (rows, ok)
}

/// Compares the generator's stationary law with `F_α(1, …, 1; 1, t)`
/// normalized over all states.
pub fn verify_asep_stationarity(lambda: &Partition, n: usize, t: &BigRational) -> Result<StationarityReport> {
    let g = Generator::asep(lambda, n, t)?;
    let exact = g.stationary_exact()?;
    let f = f_alpha_all(lambda, n)?;
    let q = BigRational::one();
    let mut weights = Vec::with_capacity(g.len());
    for s in g.states() {
        let w = match f.get(&Composition(s.0.clone())) {
            Some(e) => e.at_x_ones().at_q_one()?.eval(&q, t)?,
            None => BigRational::zero(),
        };
        weights.push(w);
    }
    let formula = normalize(&weights)?;
    let (states, all_equal) = checks::<AsepState>(g.states(), &exact, &formula);
    Ok(StationarityReport { process: "asep".into(), lambda: lambda.clone(), n, t: t.to_string(), x: None, states, all_equal })
}

/// `Σ x^σ t^{quinv(σ)}` over fillings of `λ` projecting to `w`.
pub fn tazrp_weight_symbolic(lambda: &Partition, n: usize, w: &TazrpState) -> XExpansion {
    let mut out = XExpansion::new(n);
    for sigma in FillingIter::new(lambda, n as u32) {
        if sigma.proj_tazrp() == *w {
            out.add_term(sigma.content(), &QTRational::from_poly(QTPoly::monomial(1, 0, quinv(&sigma))));
        }
    }
    out
}

/// Compares the generator's stationary law with the tableau sums
/// `Σ_{proj(σ) = w} x^σ t^{quinv}` evaluated at `(x, t)`.
pub fn verify_tazrp_stationarity(
    lambda: &Partition,
    n: usize,
    x: &[BigRational],
    t: &BigRational,
) -> Result<StationarityReport> {
    let g = Generator::tazrp(lambda, n, x, t)?;
    let exact = g.stationary_exact()?;
    let mut by_state: BTreeMap<String, BigRational> = BTreeMap::new();
    for sigma in FillingIter::new(lambda, n as u32) {
        let mut v = num_traits::pow(t.clone(), quinv(&sigma) as usize);
        for (xi, k) in x.iter().zip(sigma.content()) {
            v *= num_traits::pow(xi.clone(), k as usize);
        }
        *by_state.entry(sigma.proj_tazrp().to_string()).or_insert_with(BigRational::zero) += v;
    }
    let weights: Vec<BigRational> =
        g.states().iter().map(|s| by_state.get(&s.to_string()).cloned().unwrap_or_else(BigRational::zero)).collect();
    let formula = normalize(&weights)?;
    let (states, all_equal) = checks::<TazrpState>(g.states(), &exact, &formula);
    Ok(StationarityReport {
        process: "tazrp".into(),
        lambda: lambda.clone(),
        n,
        t: t.to_string(),
        x: Some(x.iter().map(ToString::to_string).collect()),
        states,
        all_equal,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qtalg::Mono;

    fn r(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    fn p(v: &[u32]) -> Partition {
        Partition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn asep_small_cases() {
        for t in [r(0, 1), r(1, 3), r(1, 1)] {
            let rep = verify_asep_stationarity(&p(&[2, 1]), 3, &t).unwrap();
            assert!(rep.all_equal, "{t}: {rep:?}");
        }
    }

    #[test]
    fn tazrp_printed_state_weight() {
        let w: TazrpState = "-|21|1".parse().unwrap();
        let got = tazrp_weight_symbolic(&p(&[2, 1, 1]), 3, &w);
        // x2^2 x3 (1+t)(x1 t + x2 t + x3)
        let mut expect = XExpansion::new(3);
        let one_t = QTPoly::from_terms([(0, 0, 1), (0, 1, 1)]);
        let t_one_t = one_t.shift(Mono::new(0, 1));
        expect.add_term(vec![1, 2, 1], &QTRational::from_poly(t_one_t.clone()));
        expect.add_term(vec![0, 3, 1], &QTRational::from_poly(t_one_t));
        expect.add_term(vec![0, 2, 2], &QTRational::from_poly(one_t));
        assert_eq!(got, expect);
    }

    #[test]
    fn tazrp_symmetric_point() {
        let rep = verify_tazrp_stationarity(&p(&[1]), 2, &[r(1, 1), r(1, 1)], &r(1, 2)).unwrap();
        assert!(rep.all_equal);
        assert!(rep.states.iter().all(|s| s.exact == "1/2"));
    }

    #[test]
    fn tazrp_mixed_rates() {
        let x = [r(2, 3), r(1, 1), r(5, 4)];
        let rep = verify_tazrp_stationarity(&p(&[2, 1, 1]), 3, &x, &r(1, 3)).unwrap();
        assert!(rep.all_equal, "{rep:?}");
    }
}
