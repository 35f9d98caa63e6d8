//! l_p point distances and region-to-region distance matrices.

use serde::{Deserialize, Serialize};

use crate::region::{Point, RasterRegion, RegionMap};
use crate::rep_point::{representative_point, ObjectiveMode};
use crate::{Error, Result};

/// `(|dx|^p + |dy|^p)^(1/p)` for `p >= 1`.
pub fn lp_distance(q: Point, r: Point, p: f64) -> Result<f64> {
    if !(p >= 1.0) {
        return Err(Error::InvalidNormExponent(p));
    }
    let (dx, dy) = ((q.x - r.x).abs(), (q.y - r.y).abs());
    Ok(if p == 1.0 {
        dx + dy
    } else if p == 2.0 {
        dx.hypot(dy)
    } else if p.is_infinite() {
        dx.max(dy)
    } else {
        (dx.powf(p) + dy.powf(p)).powf(1.0 / p)
    })
}

pub fn euclidean(q: Point, r: Point) -> f64 {
    (q.x - r.x).hypot(q.y - r.y)
}

/// Distance between the representative points of two regions, always
/// euclidean.
pub fn region_distance(s1: &RasterRegion, s2: &RasterRegion, mode: ObjectiveMode) -> Result<f64> {
    let a = representative_point(s1, mode)?;
    let b = representative_point(s2, mode)?;
    Ok(euclidean(a.point, b.point))
}

/// Full symmetric `n x n` matrix, row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceMatrix {
    n: usize,
    entries: Vec<f64>,
    mode: ObjectiveMode,
    p: f64,
}

impl DistanceMatrix {
    /// Pairwise l_p distances between `points`. Each unordered pair is
    /// computed once and mirrored, so the matrix is exactly symmetric.
    pub fn from_points(points: &[Point], mode: ObjectiveMode, p: f64) -> Result<Self> {
        let n = points.len();
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let d = lp_distance(points[i], points[j], p)?;
                entries[i * n + j] = d;
                entries[j * n + i] = d;
            }
        }
        Ok(Self { n, entries, mode, p })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn mode(&self) -> ObjectiveMode {
        self.mode
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn max_entry(&self) -> f64 {
        self.entries.iter().copied().fold(0.0, f64::max)
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| self.get(i, j) == self.get(j, i)))
    }

    /// Reorder rows and columns: entry `(i, j)` of the result is entry
    /// `(perm[i], perm[j])` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let n = self.n;
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                entries[i * n + j] = self.get(perm[i], perm[j]);
            }
        }
        Self {
            n,
            entries,
            mode: self.mode,
            p: self.p,
        }
    }
}

/// Representative point of every region, in region-id order.
pub fn representative_points(map: &RegionMap, mode: ObjectiveMode) -> Result<Vec<Point>> {
    map.regions()
        .iter()
        .map(|r| representative_point(r, mode).map(|res| res.point))
        .collect()
}

/// Euclidean distances between representative points, each computed once
/// per region.
pub fn distance_matrix(map: &RegionMap, mode: ObjectiveMode) -> Result<DistanceMatrix> {
    let points = representative_points(map, mode)?;
    DistanceMatrix::from_points(&points, mode, 2.0)
}

/// Euclidean distances between exact region centroids. The `mode` field of
/// the result is meaningless here and left at its default.
pub fn centroid_distance_matrix(map: &RegionMap) -> Result<DistanceMatrix> {
    if map.regions().iter().any(RasterRegion::is_empty) {
        return Err(Error::EmptyRegion);
    }
    let points: Vec<Point> = map.regions().iter().map(RasterRegion::centroid).collect();
    DistanceMatrix::from_points(&points, ObjectiveMode::default(), 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lp_examples() {
        let (o, r) = (Point::new(0.0, 0.0), Point::new(3.0, 4.0));
        assert_eq!(lp_distance(o, r, 2.0).unwrap(), 5.0);
        assert_eq!(lp_distance(o, r, 1.0).unwrap(), 7.0);
        assert_eq!(lp_distance(o, r, f64::INFINITY).unwrap(), 4.0);
        for p in [1.0, 1.5, 2.0, 3.0, 10.0] {
            assert_eq!(lp_distance(r, r, p).unwrap(), 0.0);
        }
    }

    #[test]
    fn lp_rejects_small_exponent() {
        let o = Point::new(0.0, 0.0);
        assert_eq!(lp_distance(o, o, 0.5), Err(Error::InvalidNormExponent(0.5)));
        assert!(lp_distance(o, o, f64::NAN).is_err());
    }

    #[test]
    fn region_distance_examples() {
        let a = RasterRegion::new(1, [(0, 0)]);
        let b = RasterRegion::new(2, [(3, 4)]);
        for mode in ObjectiveMode::ALL {
            assert_eq!(region_distance(&a, &a, mode).unwrap(), 0.0);
            assert_eq!(region_distance(&a, &b, mode).unwrap(), 5.0);
        }
    }

    #[test]
    fn matrix_examples() {
        let one = RegionMap::new(2, 2, vec![RasterRegion::new(1, [(1, 1)])]);
        let m = distance_matrix(&one, ObjectiveMode::Squared).unwrap();
        assert_eq!((m.len(), m.get(0, 0)), (1, 0.0));

        let two = RegionMap::new(
            4,
            4,
            vec![RasterRegion::new(1, [(0, 0)]), RasterRegion::new(2, [(0, 3)])],
        );
        let m = distance_matrix(&two, ObjectiveMode::Euclidean).unwrap();
        assert_eq!(m.get(0, 1), 3.0);
        assert_eq!(m.get(1, 0), 3.0);
        assert!(m.is_symmetric());
    }
}
