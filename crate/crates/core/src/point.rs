//! Point sets and the handful of vector operations the predicates need.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tolerance::Tolerance;

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

#[inline]
pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

#[inline]
pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// `<r - p, q - p>` without allocating.
#[inline]
pub fn dot_rel(p: &[f64], q: &[f64], r: &[f64]) -> f64 {
    p.iter()
        .zip(q)
        .zip(r)
        .map(|((p, q), r)| (r - p) * (q - p))
        .sum()
}

/// A finite list of points in a fixed dimension.
///
/// Coordinates are stored row-major in one buffer. Unless built with
/// [`PointSet::with_duplicates`], no two points coincide within the
/// construction tolerance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPointSet", into = "RawPointSet")]
pub struct PointSet {
    dim: usize,
    coords: Vec<f64>,
    allow_duplicates: bool,
}

#[derive(Serialize, Deserialize)]
struct RawPointSet {
    dim: usize,
    points: Vec<Vec<f64>>,
}

impl TryFrom<RawPointSet> for PointSet {
    type Error = Error;

    fn try_from(raw: RawPointSet) -> Result<Self> {
        PointSet::new(raw.dim, raw.points)
    }
}

impl From<PointSet> for RawPointSet {
    fn from(ps: PointSet) -> Self {
        RawPointSet {
            dim: ps.dim,
            points: ps.to_rows(),
        }
    }
}

impl PointSet {
    /// Validates and builds a point set, rejecting duplicates under the
    /// default tolerance.
    pub fn new(dim: usize, points: Vec<Vec<f64>>) -> Result<Self> {
        Self::with_tolerance(dim, points, &Tolerance::default())
    }

    pub fn with_tolerance(dim: usize, points: Vec<Vec<f64>>, tol: &Tolerance) -> Result<Self> {
        let ps = Self::build(dim, points, false)?;
        ps.check_distinct(tol)?;
        Ok(ps)
    }

    /// Skips the duplicate check. Predicates on coinciding points report
    /// `DegeneratePair` / `DegenerateAngle`.
    pub fn with_duplicates(dim: usize, points: Vec<Vec<f64>>) -> Result<Self> {
        Self::build(dim, points, true)
    }

    fn build(dim: usize, points: Vec<Vec<f64>>, allow_duplicates: bool) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        let mut coords = Vec::with_capacity(dim * points.len());
        for (index, p) in points.into_iter().enumerate() {
            if p.len() != dim {
                return Err(Error::DimensionMismatch {
                    index,
                    expected: dim,
                    found: p.len(),
                });
            }
            if p.iter().any(|x| !x.is_finite()) {
                return Err(Error::NonFinite { index });
            }
            coords.extend(p);
        }
        Ok(Self {
            dim,
            coords,
            allow_duplicates,
        })
    }

    fn check_distinct(&self, tol: &Tolerance) -> Result<()> {
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                if tol.le(dist(self.point(i), self.point(j)), 0.0) {
                    return Err(Error::DuplicatePoint(i, j));
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn allows_duplicates(&self) -> bool {
        self.allow_duplicates
    }

    #[inline]
    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.iter().map(<[f64]>::to_vec).collect()
    }

    pub(crate) fn check_index(&self, i: usize) -> Result<()> {
        if i < self.len() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: i,
                len: self.len(),
            })
        }
    }

    /// Pads every point with zeros up to `dim`.
    pub fn embed(&self, dim: usize) -> Result<Self> {
        if dim < self.dim {
            return Err(Error::OutOfRange(format!(
                "cannot embed dimension {} into {dim}",
                self.dim
            )));
        }
        let rows = self
            .iter()
            .map(|p| {
                let mut v = p.to_vec();
                v.resize(dim, 0.0);
                v
            })
            .collect();
        Self::build(dim, rows, self.allow_duplicates)
    }

    /// The sub-configuration keeping the listed indices, in order.
    pub fn select(&self, indices: &[usize]) -> Result<Self> {
        let mut rows = Vec::with_capacity(indices.len());
        for &i in indices {
            self.check_index(i)?;
            rows.push(self.point(i).to_vec());
        }
        Self::build(self.dim, rows, self.allow_duplicates)
    }

    /// Applies `f` to every point, keeping the dimension.
    pub fn map_points(&self, mut f: impl FnMut(&[f64]) -> Vec<f64>) -> Result<Self> {
        let rows = self.iter().map(&mut f).collect();
        Self::build(self.dim, rows, self.allow_duplicates)
    }

    /// Largest pairwise distance; 0 for fewer than two points.
    pub fn diameter(&self) -> f64 {
        let mut best = 0.0f64;
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                best = best.max(dist(self.point(i), self.point(j)));
            }
        }
        best
    }
}
