//! Angle computation and the double-normal pair predicates.
//!
//! Two independent routes decide the standard relation: the slab route
//! (`slab_parameter` in `[0, 1]` for every point) and the angle route
//! (no point sees the pair under an obtuse base angle). They must agree;
//! the test suites check it on random inputs.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::point::{dot_rel, norm, sub, PointSet};
use crate::tolerance::Tolerance;

/// Angle at `vertex` between the rays towards `arm1` and `arm2`, in `[0, pi]`.
pub fn angle_at(vertex: &[f64], arm1: &[f64], arm2: &[f64]) -> Result<f64> {
    angle_at_tol(vertex, arm1, arm2, &Tolerance::default())
}

pub fn angle_at_tol(vertex: &[f64], arm1: &[f64], arm2: &[f64], tol: &Tolerance) -> Result<f64> {
    let a = sub(arm1, vertex);
    let b = sub(arm2, vertex);
    let (na, nb) = (norm(&a), norm(&b));
    if tol.le(na, 0.0) || tol.le(nb, 0.0) {
        return Err(Error::DegenerateAngle);
    }
    let cos = crate::point::dot(&a, &b) / (na * nb);
    Ok(cos.clamp(-1.0, 1.0).acos())
}

/// Classification of an angle against `pi/2`, carrying the measure in radians.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AngleClass {
    Acute(f64),
    Right(f64),
    Obtuse(f64),
}

impl AngleClass {
    pub fn from_measure(measure: f64, tol: &Tolerance) -> Self {
        if tol.lt(measure, FRAC_PI_2) {
            AngleClass::Acute(measure)
        } else if tol.lt(FRAC_PI_2, measure) {
            AngleClass::Obtuse(measure)
        } else {
            AngleClass::Right(measure)
        }
    }

    pub fn measure(&self) -> f64 {
        match *self {
            AngleClass::Acute(m) | AngleClass::Right(m) | AngleClass::Obtuse(m) => m,
        }
    }

    pub fn is_acute(&self) -> bool {
        matches!(self, AngleClass::Acute(_))
    }

    pub fn is_obtuse(&self) -> bool {
        matches!(self, AngleClass::Obtuse(_))
    }
}

pub fn classify_angle(
    vertex: &[f64],
    arm1: &[f64],
    arm2: &[f64],
    tol: &Tolerance,
) -> Result<AngleClass> {
    let measure = angle_at_tol(vertex, arm1, arm2, tol)?;
    Ok(AngleClass::from_measure(measure, tol))
}

/// Normalized projection `t = <r - p, q - p> / |q - p|^2`.
///
/// `r` lies in the closed slab bounded by the hyperplanes through `p` and `q`
/// orthogonal to `pq` iff `0 <= t <= 1`.
pub fn slab_parameter(p: &[f64], q: &[f64], r: &[f64]) -> Result<f64> {
    slab_parameter_tol(p, q, r, &Tolerance::default())
}

pub fn slab_parameter_tol(p: &[f64], q: &[f64], r: &[f64], tol: &Tolerance) -> Result<f64> {
    let len2 = dot_rel(p, q, q);
    if tol.le(len2.sqrt(), 0.0) {
        return Err(Error::DegeneratePair);
    }
    Ok(dot_rel(p, q, r) / len2)
}

/// Which double-normal relation to test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum PairMode {
    Standard,
    Strict,
    /// Base angles may exceed `pi/2` by at most `delta` radians.
    Almost {
        delta: f64,
    },
}

impl PairMode {
    pub fn name(&self) -> &'static str {
        match self {
            PairMode::Standard => "standard",
            PairMode::Strict => "strict",
            PairMode::Almost { .. } => "almost",
        }
    }

    pub fn delta(&self) -> Option<f64> {
        match *self {
            PairMode::Almost { delta } => Some(delta),
            _ => None,
        }
    }
}

fn pair_points(i: usize, j: usize, v: &PointSet) -> Result<(&[f64], &[f64])> {
    v.check_index(i)?;
    v.check_index(j)?;
    if i == j {
        return Err(Error::DegeneratePair);
    }
    Ok((v.point(i), v.point(j)))
}

/// Decides whether points `i` and `j` of `v` form a pair under `mode`.
///
/// `Strict` is `Standard` plus strict interiority of every other point, and
/// a point passing the closed-slab test is always accepted by `Almost`, so
/// `Strict => Standard => Almost(delta)` holds for every input.
pub fn is_pair(mode: PairMode, i: usize, j: usize, v: &PointSet, tol: &Tolerance) -> Result<bool> {
    let (p, q) = pair_points(i, j, v)?;
    let len2 = dot_rel(p, q, q);
    if tol.le(len2.sqrt(), 0.0) {
        return Err(Error::DegeneratePair);
    }
    for (k, r) in v.iter().enumerate() {
        if k == i || k == j {
            continue;
        }
        let t = dot_rel(p, q, r) / len2;
        let in_slab = tol.le(0.0, t) && tol.le(t, 1.0);
        let ok = match mode {
            PairMode::Standard => in_slab,
            PairMode::Strict => tol.lt(0.0, t) && tol.lt(t, 1.0),
            PairMode::Almost { delta } => {
                in_slab || {
                    let limit = FRAC_PI_2 + delta;
                    tol.le(angle_at_tol(p, r, q, tol)?, limit)
                        && tol.le(angle_at_tol(q, r, p, tol)?, limit)
                }
            }
        };
        if !ok {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The angle formulation of the standard relation: no other point `r`
/// makes an obtuse angle `rpq` or `rqp`.
pub fn is_pair_by_angles(i: usize, j: usize, v: &PointSet, tol: &Tolerance) -> Result<bool> {
    let (p, q) = pair_points(i, j, v)?;
    for (k, r) in v.iter().enumerate() {
        if k == i || k == j {
            continue;
        }
        if classify_angle(p, r, q, tol)?.is_obtuse() || classify_angle(q, r, p, tol)?.is_obtuse() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Calls `f` with every angle `(a, b, c)` at `b` formed by distinct points,
/// each unordered arm pair once. Stops early when `f` returns false.
fn for_each_angle(
    v: &PointSet,
    tol: &Tolerance,
    mut f: impl FnMut(AngleClass) -> bool,
) -> Result<bool> {
    let n = v.len();
    for b in 0..n {
        for a in 0..n {
            if a == b {
                continue;
            }
            for c in a + 1..n {
                if c == b {
                    continue;
                }
                if !f(classify_angle(v.point(b), v.point(a), v.point(c), tol)?) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// True when no three points form an obtuse angle.
pub fn all_angles_nonobtuse(v: &PointSet, tol: &Tolerance) -> Result<bool> {
    for_each_angle(v, tol, |c| !c.is_obtuse())
}

/// True when every angle formed by three points is acute.
pub fn all_angles_acute(v: &PointSet, tol: &Tolerance) -> Result<bool> {
    for_each_angle(v, tol, |c| c.is_acute())
}

/// Largest angle formed by three distinct points; 0 for fewer than three.
pub fn max_angle(v: &PointSet, tol: &Tolerance) -> Result<f64> {
    let mut best = 0.0f64;
    for_each_angle(v, tol, |c| {
        best = best.max(c.measure());
        true
    })?;
    Ok(best)
}
