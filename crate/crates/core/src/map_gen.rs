//! Random raster maps and the three canonical special-case fixtures.
//!
//! Generation grows every region from a seed cell into unclaimed space.
//! Regions meant to stay convex grow as rectangles, one edge strip at a
//! time. The others grow organically, one random frontier cell at a time,
//! and then get a slot carved from their centroid outward so that they are
//! guaranteed non-convex.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::region::{convex_hull, Cell, RasterRegion, RegionMap};
use crate::{Error, Result};

const MAX_ATTEMPTS: usize = 16;
const FILL_FRACTION: f64 = 0.8;
/// Smallest organic region that is carved; smaller ones are retried.
const MIN_CONCAVE_CELLS: usize = 6;

#[derive(Debug, Clone, PartialEq)]
pub struct GenConfig {
    pub width: u32,
    pub height: u32,
    pub region_count: u32,
    /// Fraction of regions that are grown organically and carved.
    pub concavity_bias: f64,
    /// Inclusive demand range.
    pub demand_range: (u32, u32),
    pub seed: u64,
}

impl Default for GenConfig {
    fn default() -> Self {
        Self {
            width: 200,
            height: 200,
            region_count: 29,
            concavity_bias: 0.5,
            demand_range: (1, 10),
            seed: 0,
        }
    }
}

impl GenConfig {
    pub fn validate(&self) -> Result<()> {
        if self.width < 8 || self.height < 8 {
            return Err(Error::InvalidConfig(format!(
                "map must be at least 8x8, got {}x{}",
                self.width, self.height
            )));
        }
        if self.region_count < 1 {
            return Err(Error::InvalidConfig("region_count must be at least 1".into()));
        }
        if !(0.0..=1.0).contains(&self.concavity_bias) {
            return Err(Error::InvalidConfig(format!(
                "concavity_bias must be in [0, 1], got {}",
                self.concavity_bias
            )));
        }
        let (lo, hi) = self.demand_range;
        if lo < 1 || lo > hi {
            return Err(Error::InvalidConfig(format!("bad demand range [{lo}, {hi}]")));
        }
        Ok(())
    }

    /// Number of regions that are forced to be non-convex.
    pub fn concave_count(&self) -> u32 {
        (self.concavity_bias * self.region_count as f64).ceil() as u32
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Shape {
    Rect { c0: u32, r0: u32, c1: u32, r1: u32 },
    Organic,
}

struct Grower {
    shape: Shape,
    cells: Vec<Cell>,
    frontier: Vec<Cell>,
    target: usize,
    active: bool,
}

struct Grid {
    width: u32,
    height: u32,
    owner: Vec<u32>,
}

impl Grid {
    fn idx(&self, c: Cell) -> usize {
        (c.row * self.width + c.col) as usize
    }

    fn free(&self, c: Cell) -> bool {
        self.owner[self.idx(c)] == 0
    }

    fn claim(&mut self, c: Cell, id: u32) {
        let i = self.idx(c);
        self.owner[i] = id;
    }

    fn neighbours(&self, c: Cell) -> impl Iterator<Item = Cell> + '_ {
        let (w, h) = (self.width as i64, self.height as i64);
        [(-1i64, 0i64), (1, 0), (0, -1), (0, 1)]
            .into_iter()
            .map(move |(dc, dr)| (c.col as i64 + dc, c.row as i64 + dr))
            .filter(move |&(col, row)| col >= 0 && row >= 0 && col < w && row < h)
            .map(|(col, row)| Cell::new(col as u32, row as u32))
    }
}

/// A random map plus one demand per region, deterministic in `config.seed`.
pub fn generate(config: &GenConfig) -> Result<(RegionMap, Vec<u32>)> {
    config.validate()?;
    let cells = config.width as u64 * config.height as u64;
    if config.region_count as u64 > cells {
        return Err(Error::PlacementFailed(format!(
            "{} regions do not fit on {} cells",
            config.region_count, cells
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    for _ in 0..MAX_ATTEMPTS {
        if let Some(map) = attempt(config, &mut rng) {
            let (lo, hi) = config.demand_range;
            let demands = (0..map.len()).map(|_| rng.gen_range(lo..=hi)).collect();
            return Ok((map, demands));
        }
    }
    Err(Error::PlacementFailed(format!(
        "no valid layout after {MAX_ATTEMPTS} attempts"
    )))
}

fn attempt(config: &GenConfig, rng: &mut ChaCha8Rng) -> Option<RegionMap> {
    let n = config.region_count as usize;
    let mut grid = Grid {
        width: config.width,
        height: config.height,
        owner: vec![0; config.width as usize * config.height as usize],
    };

    let mut concave = vec![false; n];
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    for &i in order.iter().take(config.concave_count() as usize) {
        concave[i] = true;
    }

    let mean_size = FILL_FRACTION * (config.width * config.height) as f64 / n as f64;
    let mut growers = Vec::with_capacity(n);
    for (i, &is_concave) in concave.iter().enumerate() {
        let id = i as u32 + 1;
        let seed = loop {
            let c = Cell::new(rng.gen_range(0..config.width), rng.gen_range(0..config.height));
            if grid.free(c) {
                break c;
            }
        };
        grid.claim(seed, id);
        let shape = if is_concave {
            Shape::Organic
        } else {
            Shape::Rect {
                c0: seed.col,
                r0: seed.row,
                c1: seed.col,
                r1: seed.row,
            }
        };
        let target = ((mean_size * rng.gen_range(0.6..1.4)).round() as usize).max(1);
        growers.push(Grower {
            shape,
            cells: vec![seed],
            frontier: vec![seed],
            target,
            active: true,
        });
    }

    let mut turn: Vec<usize> = (0..n).collect();
    while growers.iter().any(|g| g.active) {
        turn.shuffle(rng);
        for &i in &turn {
            if growers[i].active {
                grow_step(&mut grid, &mut growers[i], i as u32 + 1, rng);
            }
        }
    }

    let mut regions = Vec::with_capacity(n);
    for (i, g) in growers.iter().enumerate() {
        let id = i as u32 + 1;
        let mut region = RasterRegion::new(id, g.cells.iter().copied());
        if concave[i] {
            region = carve(&region, rng)?;
        }
        regions.push(region);
    }
    let map = RegionMap::new(config.width, config.height, regions);
    debug_assert!(map.validate().is_empty());
    Some(map)
}

fn grow_step(grid: &mut Grid, g: &mut Grower, id: u32, rng: &mut ChaCha8Rng) {
    if g.cells.len() >= g.target {
        g.active = false;
        return;
    }
    match g.shape {
        Shape::Rect { c0, r0, c1, r1 } => {
            let mut sides = [0u8, 1, 2, 3];
            sides.shuffle(rng);
            for side in sides {
                let strip: Vec<Cell> = match side {
                    0 if c0 > 0 => (r0..=r1).map(|r| Cell::new(c0 - 1, r)).collect(),
                    1 if c1 + 1 < grid.width => (r0..=r1).map(|r| Cell::new(c1 + 1, r)).collect(),
                    2 if r0 > 0 => (c0..=c1).map(|c| Cell::new(c, r0 - 1)).collect(),
                    3 if r1 + 1 < grid.height => (c0..=c1).map(|c| Cell::new(c, r1 + 1)).collect(),
                    _ => continue,
                };
                if strip.iter().all(|&c| grid.free(c)) {
                    for &c in &strip {
                        grid.claim(c, id);
                    }
                    g.cells.extend(strip);
                    g.shape = match side {
                        0 => Shape::Rect { c0: c0 - 1, r0, c1, r1 },
                        1 => Shape::Rect { c0, r0, c1: c1 + 1, r1 },
                        2 => Shape::Rect { c0, r0: r0 - 1, c1, r1 },
                        _ => Shape::Rect { c0, r0, c1, r1: r1 + 1 },
                    };
                    return;
                }
            }
            g.active = false;
        }
        Shape::Organic => {
            // frontier holds claimed cells that may still have free neighbours
            while !g.frontier.is_empty() {
                let k = rng.gen_range(0..g.frontier.len());
                let from = g.frontier[k];
                let free: Vec<Cell> = grid.neighbours(from).filter(|&c| grid.free(c)).collect();
                if free.is_empty() {
                    g.frontier.swap_remove(k);
                    continue;
                }
                let c = free[rng.gen_range(0..free.len())];
                grid.claim(c, id);
                g.cells.push(c);
                g.frontier.push(c);
                return;
            }
            g.active = false;
        }
    }
}

/// Cut a one-cell slot from the centroid toward a random edge of the
/// bounding box, then make sure the result is non-convex. Returns `None`
/// when the region is too small to carve.
fn carve(region: &RasterRegion, rng: &mut ChaCha8Rng) -> Option<RasterRegion> {
    if region.len() < MIN_CONCAVE_CELLS {
        return None;
    }
    let (lo, hi) = region.bounding_box()?;
    let start = region.centroid_cell()?;
    let dirs = [(1i64, 0i64), (-1, 0), (0, 1), (0, -1)];
    let (dc, dr) = dirs[rng.gen_range(0..dirs.len())];
    let mut slot = Vec::new();
    let (mut col, mut row) = (start.col as i64, start.row as i64);
    while col >= lo.col as i64 && col <= hi.col as i64 && row >= lo.row as i64 && row <= hi.row as i64 {
        slot.push(Cell::new(col as u32, row as u32));
        col += dc;
        row += dr;
    }
    let kept: Vec<Cell> = region
        .cells()
        .iter()
        .copied()
        .filter(|c| !slot.contains(c))
        .collect();
    let mut carved = if kept.len() >= MIN_CONCAVE_CELLS / 2 {
        RasterRegion::new(region.id(), kept)
    } else {
        region.clone()
    };
    if carved.is_convex() {
        // dropping a cell that is not a hull vertex leaves the hull intact
        let pts: Vec<(i64, i64)> = carved
            .cells()
            .iter()
            .map(|c| (c.col as i64, c.row as i64))
            .collect();
        let hull = convex_hull(&pts);
        let inner: Vec<Cell> = carved
            .cells()
            .iter()
            .copied()
            .filter(|c| !hull.contains(&(c.col as i64, c.row as i64)))
            .collect();
        let victim = *inner.get(rng.gen_range(0..inner.len().max(1)))?;
        carved = RasterRegion::new(
            region.id(),
            carved.cells().iter().copied().filter(|&c| c != victim),
        );
    }
    (!carved.is_convex()).then_some(carved)
}

/// The three hand-built special cases.
///
/// 1. A square ring around a small block: both centroids coincide, while
///    the ring's representative point lies on the ring.
/// 2. A convex block sitting in the mouth of a C-shaped region, and a
///    second block behind the C's back. By centroid the C is closer to the
///    first block; by representative point it is closer to the second.
/// 3. Two interlocking, centrally symmetric hooks sharing a center: equal
///    centroids and representative points on neighbouring cells.
pub fn fixture(case: u8) -> Result<RegionMap> {
    match case {
        1 => {
            let outer = RasterRegion::block(1, 1, 1, 11, 11);
            let ring = outer
                .cells()
                .iter()
                .copied()
                .filter(|c| !(3..=9).contains(&c.col) || !(3..=9).contains(&c.row));
            RegionMap::checked(
                13,
                13,
                vec![RasterRegion::new(1, ring), RasterRegion::block(2, 5, 5, 3, 3)],
            )
        }
        2 => {
            let block = |id, col, row| RasterRegion::block(id, col, row, 5, 5);
            let hook = [
                RasterRegion::block(0, 21, 1, 3, 21),
                RasterRegion::block(0, 9, 19, 12, 3),
                RasterRegion::block(0, 9, 1, 12, 3),
            ]
            .iter()
            .flat_map(|r| r.cells().to_vec())
            .collect::<Vec<_>>();
            RegionMap::checked(
                32,
                23,
                vec![block(1, 11, 9), RasterRegion::new(2, hook), block(3, 26, 9)],
            )
        }
        3 => {
            let mut first: Vec<(u32, u32)> = (1..=7).map(|x| (x, 4)).collect();
            first.extend([(1, 5), (1, 6), (7, 3), (7, 2)]);
            let mut second: Vec<(u32, u32)> = (5..=7).chain(1..=3).map(|y| (4, y)).collect();
            second.extend([(5, 7), (6, 7), (3, 1), (2, 1)]);
            RegionMap::checked(
                9,
                9,
                vec![RasterRegion::new(1, first), RasterRegion::new(2, second)],
            )
        }
        other => Err(Error::InvalidMap(format!("no fixture {other}; expected 1, 2 or 3"))),
    }
}
