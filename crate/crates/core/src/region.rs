//! Raster regions on a unit-cell grid.
//!
//! Coordinates: x grows to the right (columns), y grows upward (rows), the
//! origin is the lower-left corner of the map. Cell `(col, row)` is the unit
//! square `[col, col + 1) x [row, row + 1)` with its center at
//! `(col + 0.5, row + 0.5)`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// The cell this point falls in, or `None` for negative or non-finite
    /// coordinates.
    pub fn cell(&self) -> Option<Cell> {
        if !self.is_finite() || self.x < 0.0 || self.y < 0.0 {
            return None;
        }
        let (col, row) = (self.x.floor(), self.y.floor());
        if col > u32::MAX as f64 || row > u32::MAX as f64 {
            return None;
        }
        Some(Cell::new(col as u32, row as u32))
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Integer grid cell. Ordering is by column, then row, which is the
/// "smallest x, then smallest y" order used for every tie-break.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Cell {
    pub col: u32,
    pub row: u32,
}

impl Cell {
    pub const fn new(col: u32, row: u32) -> Self {
        Self { col, row }
    }

    pub fn center(&self) -> Point {
        Point::new(self.col as f64 + 0.5, self.row as f64 + 0.5)
    }
}

impl From<(u32, u32)> for Cell {
    fn from((col, row): (u32, u32)) -> Self {
        Self::new(col, row)
    }
}

/// A labeled set of unit cells. Cells are kept sorted and free of duplicates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RasterRegion {
    id: u32,
    cells: Vec<Cell>,
}

impl RasterRegion {
    pub fn new<I, C>(id: u32, cells: I) -> Self
    where
        I: IntoIterator<Item = C>,
        C: Into<Cell>,
    {
        let mut cells: Vec<Cell> = cells.into_iter().map(Into::into).collect();
        cells.sort_unstable();
        cells.dedup();
        Self { id, cells }
    }

    /// Axis-aligned block of `width x height` cells with its lower-left cell
    /// at `(col, row)`.
    pub fn block(id: u32, col: u32, row: u32, width: u32, height: u32) -> Self {
        Self::new(
            id,
            (col..col + width).flat_map(|c| (row..row + height).map(move |r| Cell::new(c, r))),
        )
    }

    pub fn id(&self) -> u32 {
        self.id
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn contains_cell(&self, cell: Cell) -> bool {
        self.cells.binary_search(&cell).is_ok()
    }

    /// True iff the cell `(floor(x), floor(y))` belongs to the region.
    pub fn contains(&self, p: Point) -> bool {
        p.cell().is_some_and(|c| self.contains_cell(c))
    }

    pub fn area(&self) -> f64 {
        self.cells.len() as f64
    }

    /// Sums of column and row indices. The centroid is
    /// `(sum_col / n + 0.5, sum_row / n + 0.5)` exactly.
    pub fn index_sums(&self) -> (u64, u64) {
        self.cells.iter().fold((0, 0), |(sc, sr), c| {
            (sc + c.col as u64, sr + c.row as u64)
        })
    }

    /// Mean of all cell centers. May lie outside the region.
    pub fn centroid(&self) -> Point {
        let n = self.cells.len() as u64;
        let (sc, sr) = self.index_sums();
        // (2 * sum + n) / 2n is a single rounding of an exact rational
        Point::new(
            (2 * sc + n) as f64 / (2 * n) as f64,
            (2 * sr + n) as f64 / (2 * n) as f64,
        )
    }

    /// The cell containing the centroid, computed in exact integer arithmetic
    /// (a centroid on a shared cell edge belongs to the upper/right cell, the
    /// same convention as [`Point::cell`]).
    pub fn centroid_cell(&self) -> Option<Cell> {
        if self.cells.is_empty() {
            return None;
        }
        let n = self.cells.len() as u64;
        let (sc, sr) = self.index_sums();
        let col = (2 * sc + n) / (2 * n);
        let row = (2 * sr + n) / (2 * n);
        Some(Cell::new(col as u32, row as u32))
    }

    /// Every cell whose closed square holds the centroid, sorted. One cell
    /// for an interior centroid, two on an edge, four on a corner.
    pub fn centroid_cells(&self) -> Vec<Cell> {
        let Some(cc) = self.centroid_cell() else {
            return Vec::new();
        };
        let n = self.cells.len() as u64;
        let (sc, sr) = self.index_sums();
        let on_edge = |s: u64, i: u32| (2 * s + n) % (2 * n) == 0 && i > 0;
        let cols = if on_edge(sc, cc.col) { vec![cc.col - 1, cc.col] } else { vec![cc.col] };
        let rows = if on_edge(sr, cc.row) { vec![cc.row - 1, cc.row] } else { vec![cc.row] };
        cols.iter()
            .flat_map(|&c| rows.iter().map(move |&r| Cell::new(c, r)))
            .collect()
    }

    pub fn bounding_box(&self) -> Option<(Cell, Cell)> {
        let first = self.cells.first()?;
        let init = (first.col, first.row, first.col, first.row);
        let (c0, r0, c1, r1) = self.cells.iter().fold(init, |(c0, r0, c1, r1), c| {
            (c0.min(c.col), r0.min(c.row), c1.max(c.col), r1.max(c.row))
        });
        Some((Cell::new(c0, r0), Cell::new(c1, r1)))
    }

    /// Translate by a non-negative integer offset.
    pub fn translated(&self, dx: u32, dy: u32) -> Self {
        Self {
            id: self.id,
            cells: self
                .cells
                .iter()
                .map(|c| Cell::new(c.col + dx, c.row + dy))
                .collect(),
        }
    }

    pub fn with_id(mut self, id: u32) -> Self {
        self.id = id;
        self
    }

    /// Cells whose centers lie in the closed convex hull of this region's
    /// cell centers.
    pub fn hull_cells(&self) -> Vec<Cell> {
        let Some((lo, hi)) = self.bounding_box() else {
            return Vec::new();
        };
        let pts: Vec<(i64, i64)> = self
            .cells
            .iter()
            .map(|c| (c.col as i64, c.row as i64))
            .collect();
        let hull = convex_hull(&pts);
        let mut out = Vec::new();
        for col in lo.col..=hi.col {
            for row in lo.row..=hi.row {
                if in_closed_hull(&hull, (col as i64, row as i64)) {
                    out.push(Cell::new(col, row));
                }
            }
        }
        out
    }

    /// A cell set is convex when it equals the rasterization of its own
    /// convex hull.
    pub fn is_convex(&self) -> bool {
        self.hull_cells().len() == self.cells.len()
    }
}

fn cross(o: (i64, i64), a: (i64, i64), b: (i64, i64)) -> i64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Andrew's monotone chain; counter-clockwise, collinear points dropped.
pub(crate) fn convex_hull(points: &[(i64, i64)]) -> Vec<(i64, i64)> {
    let mut pts = points.to_vec();
    pts.sort_unstable();
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<(i64, i64)> = Vec::with_capacity(2 * pts.len());
    for &p in &pts {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
            hull.pop();
        }
        hull.push(p);
    }
    let lower_len = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower_len && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    hull
}

fn in_closed_hull(hull: &[(i64, i64)], p: (i64, i64)) -> bool {
    match hull.len() {
        0 => false,
        1 => hull[0] == p,
        2 => {
            let (a, b) = (hull[0], hull[1]);
            cross(a, b, p) == 0
                && p.0 >= a.0.min(b.0)
                && p.0 <= a.0.max(b.0)
                && p.1 >= a.1.min(b.1)
                && p.1 <= a.1.max(b.1)
        }
        n => (0..n).all(|i| cross(hull[i], hull[(i + 1) % n], p) >= 0),
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    ZeroDimension { width: u32, height: u32 },
    EmptyRegion { id: u32 },
    OutOfBounds { id: u32, cell: Cell },
    Overlap { cell: Cell, first: u32, second: u32 },
    DuplicateId { id: u32 },
    NonContiguousIds { expected: u32, found: u32 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::ZeroDimension { width, height } => {
                write!(f, "map dimensions {width}x{height} must be positive")
            }
            Violation::EmptyRegion { id } => write!(f, "region {id} has no cells"),
            Violation::OutOfBounds { id, cell } => write!(
                f,
                "region {id} has cell ({}, {}) outside the map",
                cell.col, cell.row
            ),
            Violation::Overlap { cell, first, second } => write!(
                f,
                "regions {first} and {second} both claim cell ({}, {})",
                cell.col, cell.row
            ),
            Violation::DuplicateId { id } => write!(f, "region id {id} is used more than once"),
            Violation::NonContiguousIds { expected, found } => {
                write!(f, "region ids must run 1..n: expected {expected}, found {found}")
            }
        }
    }
}

/// A `width x height` grid partitioned into disjoint regions plus empty
/// space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegionMap {
    width: u32,
    height: u32,
    regions: Vec<RasterRegion>,
}

impl RegionMap {
    /// Regions are stored sorted by id. No validation happens here; see
    /// [`RegionMap::validate`].
    pub fn new(width: u32, height: u32, mut regions: Vec<RasterRegion>) -> Self {
        regions.sort_by_key(|r| r.id);
        Self {
            width,
            height,
            regions,
        }
    }

    /// Like [`RegionMap::new`] but rejects maps with violations.
    pub fn checked(width: u32, height: u32, regions: Vec<RasterRegion>) -> crate::Result<Self> {
        let map = Self::new(width, height, regions);
        let violations = map.validate();
        if violations.is_empty() {
            Ok(map)
        } else {
            let msg: Vec<String> = violations.iter().map(ToString::to_string).collect();
            Err(crate::Error::InvalidMap(msg.join("; ")))
        }
    }

    /// Build from a row-major label grid, `labels[row * width + col]`, row 0
    /// at the bottom. Label 0 is empty space.
    pub fn from_labels(width: u32, height: u32, labels: &[u32]) -> crate::Result<Self> {
        if labels.len() != width as usize * height as usize {
            return Err(crate::Error::InvalidMap(format!(
                "expected {} labels, got {}",
                width as usize * height as usize,
                labels.len()
            )));
        }
        let mut by_id: BTreeMap<u32, Vec<Cell>> = BTreeMap::new();
        for row in 0..height {
            for col in 0..width {
                let label = labels[(row * width + col) as usize];
                if label != 0 {
                    by_id.entry(label).or_default().push(Cell::new(col, row));
                }
            }
        }
        let regions = by_id
            .into_iter()
            .map(|(id, cells)| RasterRegion::new(id, cells))
            .collect();
        Self::checked(width, height, regions)
    }

    /// Row-major label grid with row 0 at the bottom.
    pub fn labels(&self) -> Vec<u32> {
        let mut out = vec![0; self.width as usize * self.height as usize];
        for region in &self.regions {
            for c in region.cells() {
                if c.col < self.width && c.row < self.height {
                    out[(c.row * self.width + c.col) as usize] = region.id;
                }
            }
        }
        out
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn regions(&self) -> &[RasterRegion] {
        &self.regions
    }

    pub fn region(&self, id: u32) -> Option<&RasterRegion> {
        self.regions.iter().find(|r| r.id == id)
    }

    pub fn len(&self) -> usize {
        self.regions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.regions.is_empty()
    }

    pub fn labeled_cell_count(&self) -> usize {
        self.labels().iter().filter(|&&l| l != 0).count()
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.width == 0 || self.height == 0 {
            out.push(Violation::ZeroDimension {
                width: self.width,
                height: self.height,
            });
        }
        let mut seen_ids: HashMap<u32, usize> = HashMap::new();
        for r in &self.regions {
            *seen_ids.entry(r.id).or_default() += 1;
        }
        let mut dup: Vec<u32> = seen_ids
            .iter()
            .filter(|(_, &n)| n > 1)
            .map(|(&id, _)| id)
            .collect();
        dup.sort_unstable();
        out.extend(dup.into_iter().map(|id| Violation::DuplicateId { id }));

        let mut ids: Vec<u32> = seen_ids.keys().copied().collect();
        ids.sort_unstable();
        if let Some((i, &id)) = ids
            .iter()
            .enumerate()
            .find(|&(i, &id)| id != i as u32 + 1)
        {
            out.push(Violation::NonContiguousIds {
                expected: i as u32 + 1,
                found: id,
            });
        }

        let mut owner: HashMap<Cell, u32> = HashMap::new();
        for r in &self.regions {
            if r.is_empty() {
                out.push(Violation::EmptyRegion { id: r.id });
            }
            for &c in r.cells() {
                if c.col >= self.width || c.row >= self.height {
                    out.push(Violation::OutOfBounds { id: r.id, cell: c });
                }
                if let Some(&first) = owner.get(&c) {
                    if first != r.id {
                        out.push(Violation::Overlap {
                            cell: c,
                            first,
                            second: r.id,
                        });
                    }
                } else {
                    owner.insert(c, r.id);
                }
            }
        }
        out
    }
}
