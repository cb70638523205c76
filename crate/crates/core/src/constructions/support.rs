//! Supporting directions through the minimum-norm point of a convex hull.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::point::{dot, norm, sub, PointSet};
use crate::predicates::all_angles_acute;
use crate::tolerance::Tolerance;

const MAX_MAJOR: usize = 1000;
const MAX_MINOR: usize = 1000;

/// Minimum-norm point of the convex hull of `points` by Wolfe's method.
///
/// Returns the point and its barycentric weights over `points`.
pub fn min_norm_point(points: &[Vec<f64>]) -> Result<(Vec<f64>, Vec<f64>)> {
    let k = points.len();
    if k == 0 {
        return Err(Error::TooFewPoints {
            needed: 1,
            found: 0,
        });
    }
    let scale = points.iter().map(|p| dot(p, p)).fold(0.0, f64::max);
    let eps = 1e-12 * scale.max(f64::MIN_POSITIVE);
    let combine = |corral: &[usize], lambda: &[f64]| -> Vec<f64> {
        let mut x = vec![0.0; points[0].len()];
        for (&s, &l) in corral.iter().zip(lambda) {
            for (xi, pi) in x.iter_mut().zip(&points[s]) {
                *xi += l * pi;
            }
        }
        x
    };

    let start = (0..k)
        .min_by(|&a, &b| dot(&points[a], &points[a]).total_cmp(&dot(&points[b], &points[b])))
        .unwrap();
    let mut corral = vec![start];
    let mut lambda = vec![1.0];
    let mut x = points[start].clone();

    for _ in 0..MAX_MAJOR {
        let xx = dot(&x, &x);
        let (j, xj) = (0..k)
            .map(|j| (j, dot(&x, &points[j])))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        if xx - xj <= eps || corral.contains(&j) {
            return Ok((x, expand_weights(k, &corral, &lambda)));
        }
        corral.push(j);
        lambda.push(0.0);

        let mut minor = 0;
        loop {
            minor += 1;
            if minor > MAX_MINOR {
                return Err(Error::NumericalFailure(
                    "min-norm minor cycle did not terminate".into(),
                ));
            }
            let alpha = affine_minimizer(points, &corral)?;
            if alpha.iter().all(|&a| a > 1e-14) {
                lambda = alpha;
                x = combine(&corral, &lambda);
                break;
            }
            // step from lambda towards alpha until a weight hits zero
            let theta = lambda
                .iter()
                .zip(&alpha)
                .filter(|(_, &a)| a <= 1e-14)
                .map(|(&l, &a)| if l - a > 0.0 { l / (l - a) } else { 0.0 })
                .fold(1.0, f64::min);
            for (l, a) in lambda.iter_mut().zip(&alpha) {
                *l = theta * a + (1.0 - theta) * *l;
            }
            let mut keep_c = Vec::new();
            let mut keep_l = Vec::new();
            for (&s, &l) in corral.iter().zip(&lambda) {
                if l > 1e-14 {
                    keep_c.push(s);
                    keep_l.push(l);
                }
            }
            if keep_c.is_empty() {
                return Err(Error::NumericalFailure("min-norm corral collapsed".into()));
            }
            let total: f64 = keep_l.iter().sum();
            keep_l.iter_mut().for_each(|l| *l /= total);
            corral = keep_c;
            lambda = keep_l;
        }
    }
    Err(Error::NumericalFailure(
        "min-norm major cycle did not converge".into(),
    ))
}

fn expand_weights(k: usize, corral: &[usize], lambda: &[f64]) -> Vec<f64> {
    let mut w = vec![0.0; k];
    for (&s, &l) in corral.iter().zip(lambda) {
        w[s] = l;
    }
    w
}

/// Weights `alpha` summing to one that minimise `|sum alpha_s y_s|` over the
/// affine hull of the corral (KKT system with one multiplier).
fn affine_minimizer(points: &[Vec<f64>], corral: &[usize]) -> Result<Vec<f64>> {
    let c = corral.len();
    let mut m = DMatrix::<f64>::zeros(c + 1, c + 1);
    for a in 0..c {
        for b in 0..c {
            m[(a, b)] = dot(&points[corral[a]], &points[corral[b]]);
        }
        m[(a, c)] = 1.0;
        m[(c, a)] = 1.0;
    }
    let mut rhs = DVector::<f64>::zeros(c + 1);
    rhs[c] = 1.0;
    let sol = m
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::NumericalFailure("affinely dependent corral".into()))?;
    Ok(sol.iter().take(c).copied().collect())
}

/// A unit normal `u` at point `i` with `<u, p_j - p_i> >= margin > 0` for
/// every other point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupportDirection {
    pub normal: Vec<f64>,
    pub margin: f64,
}

/// Inward normal of a hyperplane through `p_i` touching the hull of `p`
/// only at `p_i`: the direction of the minimum-norm point of the hull of
/// the difference vectors `p_j - p_i`.
pub fn support_direction(i: usize, p: &PointSet, tol: &Tolerance) -> Result<SupportDirection> {
    p.check_index(i)?;
    if p.len() < 2 {
        return Err(Error::TooFewPoints {
            needed: 2,
            found: p.len(),
        });
    }
    if !all_angles_acute(p, tol)? {
        return Err(Error::NotAcute);
    }
    let base = p.point(i);
    let diffs: Vec<Vec<f64>> = p
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != i)
        .map(|(_, q)| sub(q, base))
        .collect();
    let (w, _) = min_norm_point(&diffs)?;
    let len = norm(&w);
    if !(len > 0.0) {
        return Err(Error::NumericalFailure(
            "hull of difference vectors contains the origin".into(),
        ));
    }
    let normal: Vec<f64> = w.iter().map(|x| x / len).collect();
    let margin = diffs
        .iter()
        .map(|d| dot(&normal, d))
        .fold(f64::INFINITY, f64::min);
    if margin <= 10.0 * tol.abs {
        return Err(Error::NumericalFailure(format!(
            "support margin {margin:e} not certified above 10*tol"
        )));
    }
    Ok(SupportDirection { normal, margin })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::regular_simplex;

    #[test]
    fn segment_endpoints() {
        let p = PointSet::new(1, vec![vec![0.0], vec![1.0]]).unwrap();
        let tol = Tolerance::default();
        let s = support_direction(0, &p, &tol).unwrap();
        assert_eq!(s.normal, vec![1.0]);
        assert_eq!(s.margin, 1.0);
        let s = support_direction(1, &p, &tol).unwrap();
        assert_eq!(s.normal, vec![-1.0]);
    }

    #[test]
    fn equilateral_closed_form() {
        let h = 3f64.sqrt() / 2.0;
        let p = PointSet::new(2, vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.5, h]]).unwrap();
        let s = support_direction(0, &p, &Tolerance::default()).unwrap();
        // two-point problem: the minimum-norm point is the midpoint (0.75, sqrt(3)/4)
        let mid = [0.75, 3f64.sqrt() / 4.0];
        let len = norm(&mid);
        assert!((s.normal[0] - mid[0] / len).abs() < 1e-12);
        assert!((s.normal[1] - mid[1] / len).abs() < 1e-12);
        assert!((s.margin - len).abs() < 1e-12);
        assert!((dot(&s.normal, &[1.0, 0.0]) - dot(&s.normal, &[0.5, h])).abs() < 1e-12);
    }

    #[test]
    fn tetrahedron_points_at_opposite_face() {
        let tet = regular_simplex(4).unwrap();
        let tol = Tolerance::default();
        for i in 0..4 {
            let s = support_direction(i, &tet, &tol).unwrap();
            let mut centroid = vec![0.0; 3];
            for j in (0..4).filter(|&j| j != i) {
                for (c, x) in centroid.iter_mut().zip(tet.point(j)) {
                    *c += x / 3.0;
                }
            }
            let dir = sub(&centroid, tet.point(i));
            let dn = norm(&dir);
            for k in 0..3 {
                assert!((s.normal[k] - dir[k] / dn).abs() < 1e-10);
            }
            let ms: Vec<f64> = (0..4)
                .filter(|&j| j != i)
                .map(|j| dot(&s.normal, &sub(tet.point(j), tet.point(i))))
                .collect();
            assert!(ms.iter().all(|m| (m - s.margin).abs() < 1e-10));
        }
    }

    #[test]
    fn rejects_non_acute_input() {
        let p = PointSet::new(2, vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert!(matches!(
            support_direction(0, &p, &Tolerance::default()),
            Err(Error::NotAcute)
        ));
    }

    #[test]
    fn min_norm_with_interior_and_redundant_points() {
        // hull of a square around (2, 0) plus interior points: closest is (1, 0)
        let pts = vec![
            vec![1.0, -1.0],
            vec![3.0, -1.0],
            vec![3.0, 1.0],
            vec![1.0, 1.0],
            vec![2.0, 0.0],
            vec![2.5, 0.5],
        ];
        let (x, w) = min_norm_point(&pts).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-12 && x[1].abs() < 1e-12);
        assert!((w.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!(w.iter().all(|&l| l >= 0.0));
    }
}
