//! Named configurations: hypercube vertices, regular simplices, random acute
//! subsets of the cube, supporting directions and the multipartite embedding.

mod embedding;
mod random_acute;
mod support;

pub use embedding::{km_embedding, EmbeddingParams, EmbeddingTrace, PartTrace, RadiusPolicy};
pub use random_acute::{random_acute_set, RandomAcuteReport};
pub use support::{min_norm_point, support_direction, SupportDirection};

use crate::error::{Error, Result};
use crate::point::PointSet;

pub const MAX_CUBE_DIM: usize = 20;

/// All `2^d` vertices of `{0,1}^d`, in binary counting order.
pub fn hypercube_vertices(d: usize) -> Result<PointSet> {
    if d == 0 {
        return Err(Error::ZeroDimension);
    }
    if d > MAX_CUBE_DIM {
        return Err(Error::DimensionTooLarge(d, MAX_CUBE_DIM));
    }
    let rows = (0u32..1 << d)
        .map(|mask| (0..d).map(|k| f64::from((mask >> k) & 1)).collect())
        .collect();
    PointSet::new(d, rows)
}

/// `m` pairwise equidistant points (edge length 1) in dimension `m - 1`,
/// centred at the origin.
pub fn regular_simplex(m: usize) -> Result<PointSet> {
    if m < 2 {
        return Err(Error::TooFewPoints {
            needed: 2,
            found: m,
        });
    }
    let d = m - 1;
    // e_1..e_d plus alpha*(1,..,1) has all edges sqrt(2)
    let alpha = (1.0 - (m as f64).sqrt()) / d as f64;
    let mut rows: Vec<Vec<f64>> = (0..d)
        .map(|k| {
            let mut v = vec![0.0; d];
            v[k] = 1.0;
            v
        })
        .collect();
    rows.push(vec![alpha; d]);
    let centroid: Vec<f64> = (0..d)
        .map(|k| rows.iter().map(|r| r[k]).sum::<f64>() / m as f64)
        .collect();
    let scale = std::f64::consts::SQRT_2;
    for r in &mut rows {
        for (x, c) in r.iter_mut().zip(&centroid) {
            *x = (*x - c) / scale;
        }
    }
    PointSet::new(d, rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::point::dist;
    use crate::predicates::{all_angles_acute, all_angles_nonobtuse, angle_at};
    use crate::tolerance::Tolerance;

    #[test]
    fn cube_sizes() {
        assert_eq!(
            hypercube_vertices(1).unwrap().to_rows(),
            vec![vec![0.0], vec![1.0]]
        );
        assert_eq!(hypercube_vertices(2).unwrap().len(), 4);
        let c3 = hypercube_vertices(3).unwrap();
        let tol = Tolerance::default();
        assert_eq!(c3.len(), 8);
        assert!(all_angles_nonobtuse(&c3, &tol).unwrap());
        assert!(!all_angles_acute(&c3, &tol).unwrap());
        assert!(matches!(
            hypercube_vertices(21),
            Err(Error::DimensionTooLarge(21, 20))
        ));
        assert!(hypercube_vertices(0).is_err());
    }

    #[test]
    fn simplex_is_regular() {
        for m in 2..=9 {
            let s = regular_simplex(m).unwrap();
            assert_eq!((s.len(), s.dim()), (m, m - 1));
            for i in 0..m {
                for j in i + 1..m {
                    assert!((dist(s.point(i), s.point(j)) - 1.0).abs() < 1e-12);
                }
            }
        }
        let tet = regular_simplex(4).unwrap();
        assert!(all_angles_acute(&tet, &Tolerance::default()).unwrap());
        let tri = regular_simplex(3).unwrap();
        let a = angle_at(tri.point(0), tri.point(1), tri.point(2)).unwrap();
        assert!((a - std::f64::consts::FRAC_PI_3).abs() < 1e-12);
        assert!(regular_simplex(1).is_err());
    }
}
