//! Strict double-normal supergraphs of `K_m(N)` from `m` acute points.
//!
//! Each input point `p_i` in `R^d` gets a circle in the plane spanned by its
//! inward support normal `u_i` and a fresh coordinate axis `v_i` of
//! `R^{d+m}`. The circle passes through `p_i` and holds the projections of
//! all other points strictly inside; part `i` is a run of `N` points on the
//! circle approaching `p_i`, placed so that every point of the axis segment
//! `[a, b]` sees any two of them under acute base angles. The output is
//! always re-checked pair by pair before it is returned.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;

use super::support::support_direction;
use crate::error::{Error, Result};
use crate::graph::{Certificate, PartitionedConfig};
use crate::point::{dot, sub, PointSet};
use crate::predicates::{all_angles_acute, is_pair, PairMode};
use crate::tolerance::Tolerance;

/// How the circle radius of each part is chosen.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RadiusPolicy {
    /// `R = max_j t_j`, the largest projected parameter.
    Auto,
    /// One radius per part.
    Explicit(Vec<f64>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingParams {
    /// Points per part.
    pub parts_size: usize,
    /// `None` selects `min(margin, R, min_j t_j) / 8` per part.
    pub epsilon: Option<f64>,
    pub radius: RadiusPolicy,
    /// Halvings allowed between two consecutive circle angles.
    pub max_halvings: u32,
    /// Recorded for replay; the construction itself draws no randomness.
    pub seed: u64,
}

impl EmbeddingParams {
    pub fn new(parts_size: usize) -> Self {
        Self {
            parts_size,
            epsilon: None,
            radius: RadiusPolicy::Auto,
            max_halvings: 60,
            seed: 0,
        }
    }
}

/// Everything chosen while building one part.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartTrace {
    /// Inward unit normal in the input space.
    pub normal: Vec<f64>,
    pub margin: f64,
    /// Coordinate index of the fresh axis `v_i` in the output space.
    pub axis: usize,
    pub center: Vec<f64>,
    pub antipode: Vec<f64>,
    pub radius: f64,
    pub epsilon: f64,
    /// Axis parameters of the other input points.
    pub projections: Vec<f64>,
    /// Endpoints of the axis segment, as parameters measured from `p_i`.
    pub segment: [f64; 2],
    /// Central angles of the part's points, strictly decreasing.
    pub angles: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingTrace {
    pub input_dim: usize,
    pub output_dim: usize,
    pub seed: u64,
    pub parts: Vec<PartTrace>,
    pub certificate: Certificate,
}

/// Point on the circle at central angle `theta` from `p`, in the local
/// frame `(along u, along v)` with `p` at the origin.
#[inline]
fn local_point(radius: f64, theta: f64) -> [f64; 2] {
    let s = (theta / 2.0).sin();
    [2.0 * radius * s * s, radius * theta.sin()]
}

/// `pi/2` minus the angle at `vertex` between `a` and `b`, in the plane.
fn acute_slack(vertex: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    let u = [a[0] - vertex[0], a[1] - vertex[1]];
    let w = [b[0] - vertex[0], b[1] - vertex[1]];
    let cos = (u[0] * w[0] + u[1] * w[1]) / (u[0].hypot(u[1]) * w[0].hypot(w[1]));
    FRAC_PI_2 - cos.clamp(-1.0, 1.0).acos()
}

fn build_part(
    i: usize,
    p: &PointSet,
    params: &EmbeddingParams,
    tol: &Tolerance,
) -> Result<(Vec<Vec<f64>>, PartTrace)> {
    let (d, m) = (p.dim(), p.len());
    let fail = |step: u8, reason: String| Error::FeasibilityFailure {
        part: i,
        step,
        reason,
    };

    // step 1: supporting normal and the fresh axis
    let support = support_direction(i, p, tol)?;
    let u = support.normal;
    let axis = d + i;

    // step 2: circle, antipode and the axis segment
    let projections: Vec<f64> = (0..m)
        .filter(|&j| j != i)
        .map(|j| dot(&sub(p.point(j), p.point(i)), &u))
        .collect();
    let t_min = projections.iter().copied().fold(f64::INFINITY, f64::min);
    let t_max = projections.iter().copied().fold(0.0, f64::max);
    let radius = match &params.radius {
        RadiusPolicy::Auto => t_max,
        RadiusPolicy::Explicit(rs) => *rs
            .get(i)
            .ok_or_else(|| fail(2, format!("no explicit radius for part {i}")))?,
    };
    if !(radius > 0.0) || !tol.lt(t_max, 2.0 * radius) {
        return Err(fail(
            2,
            format!("radius {radius} does not hold projections up to {t_max} strictly inside"),
        ));
    }
    let epsilon = params
        .epsilon
        .unwrap_or_else(|| support.margin.min(radius).min(t_min) / 8.0);
    let (a, b) = (t_min - epsilon, t_max + epsilon);
    // [a - eps, b + eps] must clear the eps-neighbourhoods of p and q
    if !(epsilon > 0.0) || !(a - epsilon > epsilon) || !(b + epsilon < 2.0 * radius - epsilon) {
        return Err(fail(
            2,
            format!("epsilon {epsilon} leaves no admissible segment"),
        ));
    }

    // step 3: angles theta_1 > .. > theta_N, halving until both
    // constraints hold with room to spare
    let need = 10.0 * tol.threshold_at(FRAC_PI_2);
    let ends = ([a, 0.0], [b, 0.0]);
    let mut angles = vec![2.0 * (epsilon / (2.0 * radius)).min(1.0).asin()];
    while angles.len() < params.parts_size {
        let prev = *angles.last().unwrap();
        let xs = local_point(radius, prev);
        let mut theta = prev;
        let mut accepted = None;
        for _ in 0..params.max_halvings {
            theta /= 2.0;
            let xn = local_point(radius, theta);
            if acute_slack(xs, xn, ends.1) > need && acute_slack(xn, xs, ends.0) > need {
                accepted = Some(theta);
                break;
            }
        }
        match accepted {
            Some(t) => angles.push(t),
            None => {
                return Err(fail(
                    3,
                    format!(
                        "no admissible angle for point {} within {} halvings",
                        angles.len() + 1,
                        params.max_halvings
                    ),
                ))
            }
        }
    }

    let dim_out = d + m;
    let mut base = p.point(i).to_vec();
    base.resize(dim_out, 0.0);
    let lift = |along_u: f64, along_v: f64| -> Vec<f64> {
        let mut x = base.clone();
        for (xk, uk) in x.iter_mut().zip(&u) {
            *xk += along_u * uk;
        }
        x[axis] += along_v;
        x
    };
    let points = angles
        .iter()
        .map(|&t| {
            let [cu, cv] = local_point(radius, t);
            lift(cu, cv)
        })
        .collect();
    let trace = PartTrace {
        center: lift(radius, 0.0),
        antipode: lift(2.0 * radius, 0.0),
        normal: u,
        margin: support.margin,
        axis,
        radius,
        epsilon,
        projections,
        segment: [a, b],
        angles,
    };
    Ok((points, trace))
}

/// Strict pair check of every cross-part pair.
pub(crate) fn cross_pair_certificate(
    v: &PointSet,
    parts: &[usize],
    tol: &Tolerance,
) -> Result<Certificate> {
    let n = v.len();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .filter(|&(i, j)| parts[i] != parts[j])
        .collect();
    let verdicts = pairs
        .par_iter()
        .map(|&(i, j)| is_pair(PairMode::Strict, i, j, v, tol))
        .collect::<Result<Vec<_>>>()?;
    let violations = pairs
        .into_iter()
        .zip(verdicts)
        .filter(|&(_, ok)| !ok)
        .map(|(pair, _)| pair)
        .collect();
    Ok(Certificate::from_violations(violations))
}

/// Builds `m * N` points in `R^{d+m}` whose strict double-normal graph
/// contains `K_m(N)` with the returned partition.
///
/// Never returns unverified output: a failed cross-pair check surfaces as
/// [`Error::VerificationFailure`].
pub fn km_embedding(
    p: &PointSet,
    params: &EmbeddingParams,
    tol: &Tolerance,
) -> Result<(PartitionedConfig, EmbeddingTrace)> {
    let m = p.len();
    if m < 2 {
        return Err(Error::TooFewPoints {
            needed: 2,
            found: m,
        });
    }
    if params.parts_size == 0 {
        return Err(Error::OutOfRange("parts size must be at least 1".into()));
    }
    if params.max_halvings == 0 {
        return Err(Error::OutOfRange("max_halvings must be at least 1".into()));
    }
    if !all_angles_acute(p, tol)? {
        return Err(Error::NotAcute);
    }

    let built = (0..m)
        .into_par_iter()
        .map(|i| build_part(i, p, params, tol))
        .collect::<Result<Vec<_>>>()?;

    let mut rows = Vec::with_capacity(m * params.parts_size);
    let mut labels = Vec::with_capacity(m * params.parts_size);
    let mut traces = Vec::with_capacity(m);
    for (i, (points, trace)) in built.into_iter().enumerate() {
        labels.extend(std::iter::repeat_n(i + 1, points.len()));
        rows.extend(points);
        traces.push(trace);
    }
    let dim_out = p.dim() + m;
    let v = PointSet::with_tolerance(dim_out, rows, tol)?;

    // step 4
    let certificate = cross_pair_certificate(&v, &labels, tol)?;
    if !certificate.pass {
        return Err(Error::VerificationFailure(certificate));
    }
    let trace = EmbeddingTrace {
        input_dim: p.dim(),
        output_dim: dim_out,
        seed: params.seed,
        parts: traces,
        certificate,
    };
    Ok((PartitionedConfig::new(v, labels)?, trace))
}
