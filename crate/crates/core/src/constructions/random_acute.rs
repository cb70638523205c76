//! Random acute subsets of the cube `{0,1}^d`.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::regular_simplex;
use crate::error::{Error, Result};
use crate::point::PointSet;
use crate::predicates::all_angles_acute;
use crate::tolerance::Tolerance;

/// Largest cube dimension whose vertices can be indexed by a `u64`.
const MAX_DIM: usize = 62;

#[derive(Debug, Clone, Serialize)]
pub struct RandomAcuteReport {
    pub points: PointSet,
    /// Candidates drawn per round.
    pub sample_size: usize,
    /// Round that produced the kept set; `None` for the simplex fallback.
    pub best_round: Option<usize>,
    pub rounds: usize,
}

/// Angle at `y` in the triangle `x y z` of cube vertices is right iff no
/// coordinate has `x_k = z_k != y_k`; cube vertices never form obtuse angles.
#[inline]
fn right_at(y: u64, x: u64, z: u64) -> bool {
    (!(x ^ z) & (x ^ y)) == 0
}

fn as_point(v: u64, d: usize) -> Vec<f64> {
    (0..d).map(|k| ((v >> k) & 1) as f64).collect()
}

/// Draws `2 * ceil((2/sqrt 3)^d / 2)` distinct cube vertices per round,
/// deletes one vertex of every right-angled triple, and keeps the largest
/// survivor set over `max_rounds` rounds. Falls back to an equilateral
/// triangle when no round keeps three points.
pub fn random_acute_set(d: usize, seed: u64, max_rounds: usize) -> Result<RandomAcuteReport> {
    if d < 2 {
        return Err(Error::OutOfRange(format!("dimension {d} < 2")));
    }
    if d > MAX_DIM {
        return Err(Error::DimensionTooLarge(d, MAX_DIM));
    }
    let target = ((2.0 / 3f64.sqrt()).powi(d as i32) / 2.0).ceil() as usize;
    let total = 1u64 << d;
    let sample_size = (2 * target).min(total as usize);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(usize, Vec<u64>)> = None;
    for round in 0..max_rounds {
        let mut alive: Vec<u64> = if d < 32 {
            sample(&mut rng, total as usize, sample_size)
                .into_iter()
                .map(|v| v as u64)
                .collect()
        } else {
            // sparse draw with rejection of repeats
            use rand::Rng;
            let mut seen = std::collections::BTreeSet::new();
            let mut out = Vec::with_capacity(sample_size);
            while out.len() < sample_size {
                let v = rng.random::<u64>() & (total - 1);
                if seen.insert(v) {
                    out.push(v);
                }
            }
            out
        };
        let mut removed = vec![false; alive.len()];
        let n = alive.len();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    if removed[i] || removed[j] || removed[k] {
                        continue;
                    }
                    let (x, y, z) = (alive[i], alive[j], alive[k]);
                    if right_at(x, y, z) || right_at(y, x, z) || right_at(z, x, y) {
                        removed[k] = true;
                    }
                }
            }
        }
        let mut idx = 0;
        alive.retain(|_| {
            idx += 1;
            !removed[idx - 1]
        });
        if alive.len() >= 3 && best.as_ref().is_none_or(|(_, b)| alive.len() > b.len()) {
            best = Some((round, alive));
        }
    }

    let tol = Tolerance::default();
    let (best_round, points) = match best {
        Some((round, verts)) => {
            let rows = verts.iter().map(|&v| as_point(v, d)).collect();
            (Some(round), PointSet::new(d, rows)?)
        }
        None => (None, regular_simplex(3)?.embed(d)?),
    };
    if !all_angles_acute(&points, &tol)? {
        return Err(Error::NumericalFailure(
            "random acute set failed verification".into(),
        ));
    }
    Ok(RandomAcuteReport {
        points,
        sample_size,
        best_round,
        rounds: max_rounds,
    })
}
