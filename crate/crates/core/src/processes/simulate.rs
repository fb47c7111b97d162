use std::hash::Hash;

use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::Generator;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Clock {
    /// Jump chain with each visit weighted by its mean holding time.
    Continuous,
    /// Uniformized discrete-time chain: at each step a jump is attempted
    /// with probability rate / (max exit rate), otherwise the state stays.
    Discrete,
}

#[derive(Clone, Debug, Serialize)]
pub struct Simulation {
    pub events: u64,
    pub seed: u64,
    /// Occupation-time estimate per state index, summing to 1.
    pub distribution: Vec<f64>,
}

/// Runs `events` steps from state `start`. Deterministic for a given seed.
///
/// Occupation is recorded for the state entered at each step, so one event
/// puts all mass on the first sampled target.
pub fn simulate<S: Clone + Eq + Hash + Send + Sync>(
    g: &Generator<S>,
    start: usize,
    events: u64,
    seed: u64,
    clock: Clock,
) -> Simulation {
    let n = g.len();
    let rows: Vec<Vec<(usize, f64)>> = (0..n)
        .map(|i| g.row(i).iter().map(|(j, r)| (*j, to_f64(r))).collect())
        .collect();
    let exit: Vec<f64> = rows.iter().map(|r| r.iter().map(|(_, v)| v).sum()).collect();
    let max_exit = exit.iter().copied().fold(0.0, f64::max);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut weight = vec![0.0f64; n];
    let mut state = start;
    for _ in 0..events {
        match clock {
            Clock::Continuous => {
                if exit[state] == 0.0 {
                    weight[state] += 1.0;
                    continue;
                }
                state = pick(&rows[state], exit[state], &mut rng);
                weight[state] += if exit[state] > 0.0 { 1.0 / exit[state] } else { 1.0 };
            }
            Clock::Discrete => {
                let u: f64 = rng.gen::<f64>() * max_exit;
                if u < exit[state] {
                    state = pick(&rows[state], exit[state], &mut rng);
                }
                weight[state] += 1.0;
            }
        }
    }
    let total: f64 = weight.iter().sum();
    if total > 0.0 {
        for w in &mut weight {
            *w /= total;
        }
    }
    Simulation { events, seed, distribution: weight }
}

fn pick(row: &[(usize, f64)], exit: f64, rng: &mut ChaCha8Rng) -> usize {
    let mut u = rng.gen::<f64>() * exit;
    for &(j, r) in row {
        if u < r {
            return j;
        }
        u -= r;
    }
    row.last().map(|&(j, _)| j).expect("nonempty row")
}

fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Total variation distance between an estimate and an exact law.
pub fn total_variation(estimate: &[f64], exact: &[BigRational]) -> f64 {
    estimate.iter().zip(exact).map(|(a, b)| (a - to_f64(b)).abs()).sum::<f64>() / 2.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapes::Partition;

    fn chain() -> Generator<crate::processes::AsepState> {
        let lam = Partition::new(vec![2, 1]).unwrap();
        Generator::asep(&lam, 3, &BigRational::new(1.into(), 2.into())).unwrap()
    }

    #[test]
    fn same_seed_same_output() {
        let g = chain();
        let a = simulate(&g, 0, 5000, 7, Clock::Continuous);
        let b = simulate(&g, 0, 5000, 7, Clock::Continuous);
        assert_eq!(a.distribution, b.distribution);
    }

    #[test]
    fn one_event_is_a_point_mass() {
        let g = chain();
        let s = simulate(&g, 0, 1, 3, Clock::Continuous);
        assert_eq!(s.distribution.iter().filter(|&&w| w == 1.0).count(), 1);
        assert_eq!(s.distribution.iter().filter(|&&w| w == 0.0).count(), g.len() - 1);
    }

    #[test]
    fn discrete_clock_converges() {
        let g = chain();
        let exact = g.stationary_exact().unwrap();
        let s = simulate(&g, 0, 200_000, 11, Clock::Discrete);
        assert!(total_variation(&s.distribution, &exact) < 0.02);
    }
}
