//! Ground truth for the samplers: exhaustive enumeration of independent
//! sets, exact hard-core distributions, total variation, and the
//! birth-and-death chain the oracle sampler follows on star graphs.

use std::collections::HashMap;

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hardcore::{Fugacities, Graph, ENUMERATION_LIMIT};
use crate::rng::{replication, SimRng};
use crate::vertex_set::VertexSet;

/// All independent sets of `graph`, `∅` first, each exactly once.
pub fn enumerate_independent_sets(graph: &Graph) -> Result<Vec<VertexSet>> {
    let n = graph.vertex_count();
    if n > ENUMERATION_LIMIT {
        return Err(Error::EnumerationGuard {
            vertices: n,
            limit: ENUMERATION_LIMIT,
        });
    }
    let masks: Vec<u32> = (0..n)
        .map(|v| graph.neighbors(v).iter().fold(0u32, |m, &u| m | (1 << u)))
        .collect();
    let mut out = Vec::new();
    // vertices are decided in increasing order; `blocked` holds the
    // neighbours of chosen vertices
    fn walk(v: usize, n: usize, chosen: u32, blocked: u32, masks: &[u32], out: &mut Vec<u32>) {
        if v == n {
            out.push(chosen);
            return;
        }
        walk(v + 1, n, chosen, blocked, masks, out);
        if blocked & (1 << v) == 0 {
            walk(v + 1, n, chosen | (1 << v), blocked | masks[v], masks, out);
        }
    }
    walk(0, n, 0, 0, &masks, &mut out);
    out.sort_by_key(|m| m.count_ones());
    Ok(out
        .into_iter()
        .map(|m| VertexSet::from_iter_with_capacity(n, (0..n).filter(|&v| m & (1 << v) != 0)))
        .collect())
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
struct CompensatedSum {
    sum: f64,
    correction: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.correction += (self.sum - t) + x;
        } else {
            self.correction += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(self) -> f64 {
        self.sum + self.correction
    }
}

/// Probability table over independent sets.
///
/// For an exact table `normalizer` is `Z_Λ`; for an empirical one it is the
/// number of samples.
#[derive(Debug, Clone, PartialEq)]
pub struct DistributionTable {
    probabilities: HashMap<VertexSet, f64>,
    normalizer: f64,
}

impl DistributionTable {
    /// Normalizes nonnegative weights.
    pub fn from_weights(weights: impl IntoIterator<Item = (VertexSet, f64)>) -> Self {
        let mut entries: Vec<(VertexSet, f64)> = weights.into_iter().collect();
        entries.sort_by(|a, b| a.0.len().cmp(&b.0.len()).then(a.1.total_cmp(&b.1)));
        let mut total = CompensatedSum::default();
        let mut probabilities = HashMap::with_capacity(entries.len());
        for (_, w) in &entries {
            total.add(*w);
        }
        let normalizer = total.value();
        for (set, w) in entries {
            *probabilities.entry(set).or_insert(0.0) += w / normalizer;
        }
        Self {
            probabilities,
            normalizer,
        }
    }

    pub fn probability(&self, set: &VertexSet) -> f64 {
        self.probabilities.get(set).copied().unwrap_or(0.0)
    }

    pub fn normalizer(&self) -> f64 {
        self.normalizer
    }

    /// Number of outcomes with positive probability.
    pub fn support_len(&self) -> usize {
        self.probabilities.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&VertexSet, f64)> {
        self.probabilities.iter().map(|(s, &p)| (s, p))
    }

    pub fn total(&self) -> f64 {
        let mut sum = CompensatedSum::default();
        for &p in self.probabilities.values() {
            sum.add(p);
        }
        sum.value()
    }
}

/// Exact `P_Λ(I) = Π_{v∈I} λ(v) / Z_Λ` by enumeration.
pub fn stationary_distribution(graph: &Graph, fugacities: &Fugacities) -> Result<DistributionTable> {
    if fugacities.len() != graph.vertex_count() {
        return Err(Error::InvalidParameter(format!(
            "{} fugacities for {} vertices",
            fugacities.len(),
            graph.vertex_count()
        )));
    }
    let sets = enumerate_independent_sets(graph)?;
    Ok(DistributionTable::from_weights(sets.into_iter().map(|s| {
        let w = s.iter().map(|v| fugacities.get(v)).product();
        (s, w)
    })))
}

/// Frequency table of `reps` sampler calls. Replication `i` runs on its own
/// substream of `seed`, so the result does not depend on thread scheduling.
pub fn empirical_distribution<F>(reps: usize, seed: u64, sampler: F) -> Result<DistributionTable>
where
    F: Fn(&mut SimRng) -> Result<VertexSet> + Sync,
{
    if reps == 0 {
        return Err(Error::InvalidParameter("at least one replication is required".into()));
    }
    let counts = (0..reps)
        .into_par_iter()
        .map(|i| sampler(&mut replication(seed, i as u64)))
        .try_fold(HashMap::new, |mut acc: HashMap<VertexSet, u64>, sample| {
            *acc.entry(sample?).or_insert(0) += 1;
            Ok::<_, Error>(acc)
        })
        .try_reduce(HashMap::new, |mut a, b| {
            for (k, c) in b {
                *a.entry(k).or_insert(0) += c;
            }
            Ok(a)
        })?;
    Ok(DistributionTable::from_weights(
        counts.into_iter().map(|(s, c)| (s, c as f64)),
    ))
}

/// Half the L1 distance over the union of both supports.
pub fn tv_distance(p: &DistributionTable, q: &DistributionTable) -> f64 {
    let mut sum = CompensatedSum::default();
    for (s, ps) in p.iter() {
        sum.add((ps - q.probability(s)).abs());
    }
    for (s, qs) in q.iter() {
        if !p.probabilities.contains_key(s) {
            sum.add(qs);
        }
    }
    sum.value() / 2.0
}

/// Acceptance threshold for an empirical TV distance: four times the
/// binomial error scale `√(k/reps)/2`, never below `0.02`.
pub fn tv_threshold(support: usize, reps: usize) -> f64 {
    (2.0 * (support as f64 / reps as f64).sqrt()).max(0.02)
}

/// Birth-and-death chain on `{0, …, n}` followed by the oracle sampler on
/// `star(n)` with uniform fugacity `λ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BirthDeathStar {
    n: usize,
    lambda: f64,
}

pub fn birth_death_star(n: usize, lambda: f64) -> Result<BirthDeathStar> {
    if n == 0 {
        return Err(Error::InvalidParameter("the star needs at least one leaf".into()));
    }
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "fugacity must be positive, got {lambda}"
        )));
    }
    Ok(BirthDeathStar { n, lambda })
}

impl BirthDeathStar {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// `p_{i,i+1} = (n−i)/(n−i+iλ)`.
    pub fn up(&self, i: usize) -> f64 {
        assert!(i <= self.n);
        let (n, i) = (self.n as f64, i as f64);
        (n - i) / (n - i + i * self.lambda)
    }

    /// `p_{i,i−1} = iλ/(n−i+iλ)`.
    pub fn down(&self, i: usize) -> f64 {
        assert!(i <= self.n);
        let (n, i) = (self.n as f64, i as f64);
        i * self.lambda / (n - i + i * self.lambda)
    }

    /// Stationary law by detailed balance.
    pub fn stationary(&self) -> Vec<f64> {
        let mut pi = vec![1.0; self.n + 1];
        for i in 0..self.n {
            pi[i + 1] = pi[i] * self.up(i) / self.down(i + 1);
        }
        normalize(pi)
    }

    /// `π(i) ∝ C(n−1,i−1)λ^{−(i−1)} + C(n−1,i)λ^{−i}`, normalized.
    pub fn stationary_closed_form(&self) -> Vec<f64> {
        // t[i] = C(n−1, i) λ^{−i}
        let mut t = vec![0.0; self.n];
        t[0] = 1.0;
        for i in 1..self.n {
            t[i] = t[i - 1] * (self.n - i) as f64 / (i as f64 * self.lambda);
        }
        let term = |i: isize| {
            if i < 0 || i as usize >= self.n {
                0.0
            } else {
                t[i as usize]
            }
        };
        normalize((0..=self.n as isize).map(|i| term(i - 1) + term(i)).collect())
    }

    /// Lower bound `½(1+1/λ)^{−n}` on `π(0)`.
    pub fn empty_state_lower_bound(&self) -> f64 {
        0.5 * (1.0 + 1.0 / self.lambda).powi(-(self.n as i32))
    }

    /// Expected number of steps to reach `0` from every state.
    pub fn hitting_times_to_zero(&self) -> Vec<f64> {
        // step[j] = E[time to go from j to j−1]
        let mut step = vec![0.0; self.n + 1];
        step[self.n] = 1.0 / self.down(self.n);
        for j in (1..self.n).rev() {
            step[j] = (1.0 + self.up(j) * step[j + 1]) / self.down(j);
        }
        let mut times = vec![0.0; self.n + 1];
        for j in 1..=self.n {
            times[j] = times[j - 1] + step[j];
        }
        times
    }

    /// Expected hitting time of `0` from `n`.
    pub fn expected_hitting_time(&self) -> f64 {
        self.hitting_times_to_zero()[self.n]
    }

    /// Published bound `2e(n+1)` on the time until the hub leaves `D`.
    pub fn first_phase_bound(&self) -> f64 {
        2.0 * std::f64::consts::E * (self.n as f64 + 1.0)
    }

    /// Published bound `n + e^{n/λ}` on the hitting time of `0`.
    pub fn second_phase_bound(&self) -> f64 {
        self.n as f64 + (self.n as f64 / self.lambda).exp()
    }

    /// One simulated hitting time of `0` from `n`.
    pub fn simulate_hitting_time<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        let mut state = self.n;
        let mut steps = 0;
        while state > 0 {
            steps += 1;
            if rng.random::<f64>() < self.down(state) {
                state -= 1;
            } else {
                state += 1;
            }
        }
        steps
    }

    /// Mean of `reps` simulated hitting times on replication substreams.
    pub fn monte_carlo_hitting_time(&self, reps: usize, seed: u64) -> f64 {
        let total: u64 = (0..reps)
            .into_par_iter()
            .map(|i| self.simulate_hitting_time(&mut replication(seed, i as u64)))
            .sum();
        total as f64 / reps as f64
    }
}

fn normalize(mut values: Vec<f64>) -> Vec<f64> {
    let mut total = CompensatedSum::default();
    for &v in &values {
        total.add(v);
    }
    let z = total.value();
    for v in &mut values {
        *v /= z;
    }
    values
}
