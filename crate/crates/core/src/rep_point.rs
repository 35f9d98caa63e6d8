//! In-region representative points.
//!
//! The representative point of a region is the in-region cell center that
//! minimizes the summed distance (or squared distance) to every cell center
//! of the region, each cell weighted by its unit area.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::region::{Cell, Point, RasterRegion};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ObjectiveMode {
    /// Sum of euclidean distances (a discrete constrained 1-median).
    Euclidean,
    /// Sum of squared euclidean distances; minimized by the centroid when it
    /// is reachable.
    #[default]
    Squared,
}

impl ObjectiveMode {
    pub const ALL: [ObjectiveMode; 2] = [ObjectiveMode::Euclidean, ObjectiveMode::Squared];

    pub fn as_str(&self) -> &'static str {
        match self {
            ObjectiveMode::Euclidean => "euclidean",
            ObjectiveMode::Squared => "squared",
        }
    }
}

impl fmt::Display for ObjectiveMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ObjectiveMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "euclidean" => Ok(ObjectiveMode::Euclidean),
            "squared" => Ok(ObjectiveMode::Squared),
            other => Err(Error::Parse(format!("unknown objective mode '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RepPointResult {
    pub point: Point,
    pub cell: Cell,
    pub objective_value: f64,
    pub mode: ObjectiveMode,
    pub used_centroid_shortcut: bool,
}

/// Riemann-sum objective: sum over all cell centers of the distance (or
/// squared distance) to `p`. Cells are visited in sorted order, so the
/// floating-point result is a pure function of `(region, p, mode)`.
pub fn objective(region: &RasterRegion, p: Point, mode: ObjectiveMode) -> f64 {
    let mut total = 0.0;
    for c in region.cells() {
        let q = c.center();
        let (dx, dy) = (p.x - q.x, p.y - q.y);
        let sq = dx * dx + dy * dy;
        total += match mode {
            ObjectiveMode::Euclidean => sq.sqrt(),
            ObjectiveMode::Squared => sq,
        };
    }
    total
}

fn improves(value: f64, cell: Cell, best: &Option<(f64, Cell)>) -> bool {
    match best {
        None => true,
        Some((bv, bc)) => value < *bv || (value == *bv && cell < *bc),
    }
}

fn finish(
    region: &RasterRegion,
    best: Option<(f64, Cell)>,
    mode: ObjectiveMode,
    shortcut: bool,
) -> Result<RepPointResult> {
    let (objective_value, cell) = best.ok_or(Error::EmptyRegion)?;
    debug_assert!(region.contains_cell(cell));
    Ok(RepPointResult {
        point: cell.center(),
        cell,
        objective_value,
        mode,
        used_centroid_shortcut: shortcut,
    })
}

/// Evaluate the objective at every cell center and return the argmin,
/// ties going to the smallest x, then the smallest y.
pub fn brute_force_representative_point(
    region: &RasterRegion,
    mode: ObjectiveMode,
) -> Result<RepPointResult> {
    let mut best = None;
    for &cell in region.cells() {
        let v = objective(region, cell.center(), mode);
        if improves(v, cell, &best) {
            best = Some((v, cell));
        }
    }
    finish(region, best, mode, false)
}

/// Squared distance from a cell center to the centroid, scaled by n^2 so it
/// is an exact integer: `(col*n - sum_col)^2 + (row*n - sum_row)^2`.
fn centroid_key(cell: Cell, n: i128, sums: (i128, i128)) -> i128 {
    let dx = cell.col as i128 * n - sums.0;
    let dy = cell.row as i128 * n - sums.1;
    dx * dx + dy * dy
}

/// Minimizer of [`objective`] over the region's cell centers.
///
/// In squared mode with the centroid inside the region the answer is read
/// off the centroid directly: the squared objective equals
/// `n * |p - centroid|^2` plus a constant, so the nearest cell center to the
/// centroid wins. When the centroid sits on a cell edge several centers are
/// equally near and the usual tie-break applies.
///
/// Otherwise candidates are visited in order of distance to the centroid.
/// For the euclidean sum, `n * |p - centroid|` is a lower bound on the
/// objective, which stops the scan early.
pub fn representative_point(region: &RasterRegion, mode: ObjectiveMode) -> Result<RepPointResult> {
    let centroid_cell = region.centroid_cell().ok_or(Error::EmptyRegion)?;
    let n = region.len() as i128;
    let (sc, sr) = region.index_sums();
    let sums = (sc as i128, sr as i128);

    if mode == ObjectiveMode::Squared && region.contains_cell(centroid_cell) {
        let mut near: Vec<(i128, Cell)> = [(0, 0), (1, 0), (0, 1), (1, 1)]
            .iter()
            .filter(|&&(dc, dr)| centroid_cell.col >= dc && centroid_cell.row >= dr)
            .map(|&(dc, dr)| Cell::new(centroid_cell.col - dc, centroid_cell.row - dr))
            .filter(|&c| region.contains_cell(c))
            .map(|c| (centroid_key(c, n, sums), c))
            .collect();
        near.sort_unstable();
        let cell = near[0].1;
        let best = Some((objective(region, cell.center(), mode), cell));
        return finish(region, best, mode, true);
    }

    let mut order: Vec<(i128, Cell)> = region
        .cells()
        .iter()
        .map(|&c| (centroid_key(c, n, sums), c))
        .collect();
    order.sort_unstable();

    let mut best: Option<(f64, Cell)> = None;
    let mut best_key = None;
    for (key, cell) in order {
        match mode {
            ObjectiveMode::Squared => {
                // objective is strictly increasing in key
                if best_key.is_some_and(|bk| key > bk) {
                    break;
                }
            }
            ObjectiveMode::Euclidean => {
                if let Some((bv, _)) = best {
                    let lower = (key as f64).sqrt();
                    if lower > bv * (1.0 + 1e-9) + 1e-9 {
                        break;
                    }
                }
            }
        }
        let v = objective(region, cell.center(), mode);
        if improves(v, cell, &best) {
            best = Some((v, cell));
            best_key = Some(key);
        }
    }
    finish(region, best, mode, false)
}
