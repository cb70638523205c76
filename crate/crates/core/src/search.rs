//! Simulated-annealing search for large acute (or nearly acute) point sets.

use std::f64::consts::FRAC_PI_2;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::point::PointSet;
use crate::predicates::{all_angles_acute, max_angle};
use crate::tolerance::Tolerance;

/// `min over angles (pi/2 - angle)`; positive iff the set is pairwise acute.
pub fn acute_margin(p: &PointSet) -> Result<f64> {
    if p.len() < 3 {
        return Err(Error::TooFewPoints {
            needed: 3,
            found: p.len(),
        });
    }
    let mut coords = Vec::with_capacity(p.len() * p.dim());
    for x in p.iter() {
        coords.extend_from_slice(x);
    }
    let m = raw_margin(&coords, p.dim());
    if m.is_nan() {
        Err(Error::DegenerateAngle)
    } else {
        Ok(m)
    }
}

/// Margin over a flat coordinate buffer; NaN if two points coincide.
fn raw_margin(coords: &[f64], dim: usize) -> f64 {
    let n = coords.len() / dim;
    let pt = |i: usize| &coords[i * dim..(i + 1) * dim];
    let mut worst = f64::INFINITY;
    let mut arms = vec![0.0; n * dim];
    let mut lens = vec![0.0; n];
    for b in 0..n {
        let vb = pt(b);
        for a in 0..n {
            let mut l2 = 0.0;
            for k in 0..dim {
                let x = coords[a * dim + k] - vb[k];
                arms[a * dim + k] = x;
                l2 += x * x;
            }
            lens[a] = l2.sqrt();
            if a != b && lens[a] == 0.0 {
                return f64::NAN;
            }
        }
        for a in 0..n {
            if a == b {
                continue;
            }
            for c in a + 1..n {
                if c == b {
                    continue;
                }
                let mut d = 0.0;
                for k in 0..dim {
                    d += arms[a * dim + k] * arms[c * dim + k];
                }
                let cos = (d / (lens[a] * lens[c])).clamp(-1.0, 1.0);
                worst = worst.min(FRAC_PI_2 - cos.acos());
            }
        }
    }
    worst
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitKind {
    /// i.i.d. uniform coordinates in the unit cube.
    UnitCube,
    /// Distinct random vertices of `{0,1}^dim`, when there are enough.
    CubeVertices,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub dim: usize,
    pub target_size: usize,
    pub restarts: usize,
    pub steps_per_restart: usize,
    pub init_temperature: f64,
    /// Per-step temperature multiplier in `(0, 1)`.
    pub cooling: f64,
    pub seed: u64,
    /// Allowed excess over `pi/2`; 0 asks for a strictly acute set.
    pub delta: f64,
    pub init: InitKind,
}

impl SearchConfig {
    pub fn new(dim: usize, target_size: usize) -> Self {
        Self {
            dim,
            target_size,
            restarts: 32,
            steps_per_restart: 20_000,
            init_temperature: 0.05,
            cooling: 0.9995,
            seed: 0,
            delta: 0.0,
            init: InitKind::UnitCube,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::OutOfRange(msg.to_string()));
        if self.dim == 0 {
            return bad("dim must be positive");
        }
        if self.target_size < 3 {
            return bad("target size must be at least 3");
        }
        if self.restarts == 0 || self.steps_per_restart == 0 {
            return bad("restarts and steps must be positive");
        }
        if !(self.cooling > 0.0 && self.cooling < 1.0) {
            return bad("cooling must lie in (0, 1)");
        }
        if !(self.init_temperature > 0.0) {
            return bad("initial temperature must be positive");
        }
        if !(self.delta >= 0.0) {
            return bad("delta must be non-negative");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub best_points: PointSet,
    pub best_margin: f64,
    pub verified: bool,
    /// Best margin reached by each restart, in restart order.
    pub history: Vec<f64>,
}

/// Whether `p` meets the target under the library predicates: pairwise acute
/// for `delta = 0`, otherwise every angle at most `pi/2 + delta`.
pub fn meets_target(p: &PointSet, delta: f64, tol: &Tolerance) -> Result<bool> {
    if delta == 0.0 {
        all_angles_acute(p, tol)
    } else {
        Ok(tol.le(max_angle(p, tol)?, FRAC_PI_2 + delta))
    }
}

fn initial_points(cfg: &SearchConfig, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let (n, d) = (cfg.target_size, cfg.dim);
    if cfg.init == InitKind::CubeVertices && d < 63 && n as u64 <= 1u64 << d {
        let mut seen = std::collections::BTreeSet::new();
        let mut out = Vec::with_capacity(n * d);
        while seen.len() < n {
            let v = rng.random::<u64>() & ((1u64 << d) - 1);
            if seen.insert(v) {
                out.extend((0..d).map(|k| ((v >> k) & 1) as f64));
            }
        }
        return out;
    }
    (0..n * d).map(|_| rng.random::<f64>()).collect()
}

/// Root-mean-square distance from the centroid.
fn spread(coords: &[f64], dim: usize) -> f64 {
    let n = coords.len() / dim;
    let mut centroid = vec![0.0; dim];
    for i in 0..n {
        for k in 0..dim {
            centroid[k] += coords[i * dim + k] / n as f64;
        }
    }
    let ss: f64 = (0..n)
        .flat_map(|i| (0..dim).map(move |k| (i, k)))
        .map(|(i, k)| (coords[i * dim + k] - centroid[k]).powi(2))
        .sum();
    (ss / n as f64).sqrt()
}

fn score(coords: &[f64], dim: usize) -> f64 {
    let m = raw_margin(coords, dim);
    if m.is_nan() {
        -f64::INFINITY
    } else {
        m
    }
}

/// One annealing chain. Proposals move a single point by a Gaussian step
/// whose size shrinks with the temperature, relative to the current spread.
fn anneal(cfg: &SearchConfig, restart: u64, start: Option<&[f64]>) -> (Vec<f64>, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(restart);
    let d = cfg.dim;
    let mut cur = match start {
        Some(s) => s.to_vec(),
        None => initial_points(cfg, &mut rng),
    };
    let n = cur.len() / d;
    let mut cur_score = score(&cur, d);
    let mut best = cur.clone();
    let mut best_score = cur_score;
    let mut temp = cfg.init_temperature;
    let mut saved = vec![0.0; d];
    for _ in 0..cfg.steps_per_restart {
        let k = rng.random_range(0..n);
        let step = 0.15 * (temp / cfg.init_temperature).sqrt() * spread(&cur, d).max(1e-12);
        saved.copy_from_slice(&cur[k * d..(k + 1) * d]);
        for x in &mut cur[k * d..(k + 1) * d] {
            let z: f64 = StandardNormal.sample(&mut rng);
            *x += step * z;
        }
        let cand = score(&cur, d);
        let accept = cand >= cur_score || rng.random::<f64>() < ((cand - cur_score) / temp).exp();
        if accept {
            cur_score = cand;
            if cand > best_score {
                best_score = cand;
                best.copy_from_slice(&cur);
            }
        } else {
            cur[k * d..(k + 1) * d].copy_from_slice(&saved);
        }
        temp *= cfg.cooling;
    }
    (best, best_score)
}

/// Runs `restarts` independent chains and keeps the best margin, ties to the
/// lowest restart index. Deterministic in the configuration.
pub fn search(cfg: &SearchConfig) -> Result<SearchResult> {
    run(cfg, None)
}

/// Like [`search`], but every chain starts from `start`, which must have
/// `target_size` points in dimension `dim`.
pub fn search_from(cfg: &SearchConfig, start: &PointSet) -> Result<SearchResult> {
    if start.len() != cfg.target_size || start.dim() != cfg.dim {
        return Err(Error::OutOfRange(format!(
            "start has {} points in dimension {}, expected {} in {}",
            start.len(),
            start.dim(),
            cfg.target_size,
            cfg.dim
        )));
    }
    let coords: Vec<f64> = start.iter().flatten().copied().collect();
    run(cfg, Some(&coords))
}

fn run(cfg: &SearchConfig, start: Option<&[f64]>) -> Result<SearchResult> {
    cfg.validate()?;
    let chains: Vec<(Vec<f64>, f64)> = (0..cfg.restarts as u64)
        .into_par_iter()
        .map(|r| anneal(cfg, r, start))
        .collect();
    let history: Vec<f64> = chains.iter().map(|c| c.1).collect();
    let mut winner = 0;
    for (r, &m) in history.iter().enumerate() {
        if m > history[winner] {
            winner = r;
        }
    }
    let coords = &chains[winner].0;
    let rows: Vec<Vec<f64>> = coords.chunks_exact(cfg.dim).map(<[f64]>::to_vec).collect();
    let tol = Tolerance::default();
    let (best_points, verified) = match PointSet::new(cfg.dim, rows.clone()) {
        Ok(p) => {
            let ok = meets_target(&p, cfg.delta, &tol)?;
            (p, ok)
        }
        Err(_) => (PointSet::with_duplicates(cfg.dim, rows)?, false),
    };
    Ok(SearchResult {
        best_points,
        best_margin: history[winner],
        verified,
        history,
    })
}

/// Annealing budget for [`probe_relaxed_bound`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub restarts: usize,
    pub steps: usize,
    pub seed: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self {
            restarts: 32,
            steps: 20_000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub dim: usize,
    pub delta: f64,
    /// Points sought: one more than the number of cube vertices.
    pub size: usize,
    pub best_max_angle: f64,
    pub angle_limit: f64,
    pub satisfied: bool,
    pub verdict: String,
    pub best_points: PointSet,
}

pub const NO_COUNTEREXAMPLE: &str = "no counterexample found (not a proof)";

/// Looks for `2^dim + 1` points whose angles all stay below `pi/2 + delta`.
/// A failure is evidence only.
pub fn probe_relaxed_bound(dim: usize, delta: f64, budget: &SearchBudget) -> Result<ProbeReport> {
    if !(2..=3).contains(&dim) {
        return Err(Error::OutOfRange(format!(
            "probe dimension {dim} not in 2..=3"
        )));
    }
    if !(delta > 0.0) {
        return Err(Error::OutOfRange("probe delta must be positive".into()));
    }
    let size = (1usize << dim) + 1;
    let cfg = SearchConfig {
        restarts: budget.restarts,
        steps_per_restart: budget.steps,
        seed: budget.seed,
        delta,
        ..SearchConfig::new(dim, size)
    };
    let result = search(&cfg)?;
    let tol = Tolerance::default();
    let best_max_angle = max_angle(&result.best_points, &tol)?;
    let verdict = if result.verified {
        format!("found {size} points with every angle <= pi/2 + {delta}")
    } else {
        NO_COUNTEREXAMPLE.to_string()
    };
    Ok(ProbeReport {
        dim,
        delta,
        size,
        best_max_angle,
        angle_limit: FRAC_PI_2 + delta,
        satisfied: result.verified,
        verdict,
        best_points: result.best_points,
    })
}
