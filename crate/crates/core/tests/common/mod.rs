#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use regionloc::{generate, Cell, FacilityInstance, GenConfig, ObjectiveMode, Point, RasterRegion};

/// All regions of generated maps for `seeds`, in seed then id order.
pub fn generated_regions(width: u32, height: u32, count: u32, bias: f64, seeds: std::ops::Range<u64>) -> Vec<RasterRegion> {
    let mut out = Vec::new();
    for seed in seeds {
        let cfg = GenConfig {
            width,
            height,
            region_count: count,
            concavity_bias: bias,
            seed,
            ..GenConfig::default()
        };
        let (map, _) = generate(&cfg).expect("generation succeeds");
        out.extend(map.regions().iter().cloned());
    }
    out
}

/// Random cell set inside a `w` x `h` box: a random walk blob when
/// `connected`, otherwise independent cells.
pub fn random_blob(rng: &mut ChaCha8Rng, w: u32, h: u32, connected: bool) -> RasterRegion {
    let size = rng.gen_range(1..=(w * h / 2).max(1)) as usize;
    let mut cells = vec![Cell::new(rng.gen_range(0..w), rng.gen_range(0..h))];
    while cells.len() < size {
        let c = if connected {
            let from = cells[rng.gen_range(0..cells.len())];
            let (dc, dr) = [(1i64, 0i64), (-1, 0), (0, 1), (0, -1)][rng.gen_range(0..4)];
            let (col, row) = (from.col as i64 + dc, from.row as i64 + dr);
            if col < 0 || row < 0 || col >= w as i64 || row >= h as i64 {
                continue;
            }
            Cell::new(col as u32, row as u32)
        } else {
            Cell::new(rng.gen_range(0..w), rng.gen_range(0..h))
        };
        if !cells.contains(&c) {
            cells.push(c);
        }
    }
    RasterRegion::new(1, cells)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Instance with up to `n` sites. `grid` bounds integer coordinates; a small
/// grid produces many equal distances.
pub fn random_instance(rng: &mut ChaCha8Rng, n: usize, grid: u32) -> FacilityInstance {
    let capacity = rng.gen_range(10..=50) as f64;
    let sites: Vec<Point> = (0..n)
        .map(|_| Point::new(rng.gen_range(0..=grid) as f64, rng.gen_range(0..=grid) as f64))
        .collect();
    let demand: Vec<u32> = (0..n).map(|_| rng.gen_range(1..=capacity as u32)).collect();
    FacilityInstance::from_sites(sites, demand, 200.0, capacity, 10_000.0, ObjectiveMode::Squared)
        .expect("valid instance")
}

/// Writes a criterion line past the test harness output capture.
pub fn report(criterion: u32, ok: bool, detail: &str) {
    use std::io::Write;
    let status = if ok { "PASS" } else { "FAIL" };
    let _ = writeln!(std::io::stderr(), "criterion {criterion:>2}: {status}: {detail}");
}
