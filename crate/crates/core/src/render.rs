//! SVG rendering of maps with center markers and facility assignments.

use std::fmt::Write as _;

use crate::facility::FacilitySolution;
use crate::io::CenterRow;
use crate::region::{Point, RegionMap};
use crate::{Error, Result};

/// Pixels per map cell.
pub const CELL_PX: f64 = 4.0;

#[derive(Debug, Clone, Default)]
pub struct Overlay {
    pub centers: Vec<CenterRow>,
    pub solution: Option<SolutionOverlay>,
}

#[derive(Debug, Clone)]
pub struct SolutionOverlay {
    /// Site position of every region, in region-id order.
    pub sites: Vec<Point>,
    pub solution: FacilitySolution,
    pub demands: Option<Vec<u32>>,
}

fn fill(id: u32) -> String {
    let hue = (id as f64 * 137.508) % 360.0;
    let light = if id % 2 == 0 { 72 } else { 62 };
    format!("hsl({hue:.1},55%,{light}%)")
}

struct Frame {
    height: f64,
}

impl Frame {
    fn px(&self, p: Point) -> (f64, f64) {
        (p.x * CELL_PX, (self.height - p.y) * CELL_PX)
    }
}

fn check_overlay(map: &RegionMap, overlay: &Overlay) -> Result<()> {
    let mut seen = Vec::new();
    for row in &overlay.centers {
        if map.region(row.region_id).is_none() {
            return Err(Error::InvalidMap(format!("overlay names unknown region {}", row.region_id)));
        }
        if seen.contains(&row.region_id) {
            return Err(Error::InvalidMap(format!("overlay repeats region {}", row.region_id)));
        }
        seen.push(row.region_id);
    }
    if let Some(s) = &overlay.solution {
        let n = map.len();
        if s.sites.len() != n || s.solution.open.len() != n || s.demands.as_ref().is_some_and(|d| d.len() != n) {
            return Err(Error::InvalidMap(format!(
                "solution covers {} sites but the map has {n} regions",
                s.solution.open.len()
            )));
        }
    }
    Ok(())
}

/// Region fills as horizontal runs, geometric centers as hollow circles,
/// representative points as crosses, facilities as squares and assignment
/// arrows from each site to the facility serving it.
pub fn render_svg(map: &RegionMap, overlay: &Overlay) -> Result<String> {
    check_overlay(map, overlay)?;
    let frame = Frame {
        height: map.height() as f64,
    };
    let (w, h) = (map.width() as f64 * CELL_PX, map.height() as f64 * CELL_PX);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    s.push_str(concat!(
        "<defs><marker id=\"arrow\" viewBox=\"0 0 10 10\" refX=\"9\" refY=\"5\" markerWidth=\"6\" markerHeight=\"6\" orient=\"auto-start-reverse\">",
        "<path d=\"M 0 0 L 10 5 L 0 10 z\" fill=\"#333\"/></marker></defs>\n"
    ));
    let _ = writeln!(s, r##"<rect x="0" y="0" width="{w}" height="{h}" fill="#fff" stroke="#000"/>"##);

    let labels = map.labels();
    let width = map.width() as usize;
    for region in map.regions() {
        let _ = writeln!(s, r#"<g class="region" data-id="{}" fill="{}">"#, region.id(), fill(region.id()));
        for (row, line) in labels.chunks(width).enumerate() {
            let mut col = 0;
            while col < width {
                if line[col] != region.id() {
                    col += 1;
                    continue;
                }
                let start = col;
                while col < width && line[col] == region.id() {
                    col += 1;
                }
                let (x, y) = frame.px(Point::new(start as f64, row as f64 + 1.0));
                let _ = writeln!(
                    s,
                    r#"<rect x="{x}" y="{y}" width="{}" height="{CELL_PX}"/>"#,
                    (col - start) as f64 * CELL_PX
                );
            }
        }
        s.push_str("</g>\n");
    }

    if let Some(sol) = &overlay.solution {
        for (x, &site) in sol.sites.iter().enumerate() {
            let Some(y) = sol.solution.facility_of(x) else {
                continue;
            };
            if y == x {
                continue;
            }
            let (x0, y0) = frame.px(site);
            let (x1, y1) = frame.px(sol.sites[y]);
            let _ = writeln!(
                s,
                r##"<line class="assignment" x1="{x0}" y1="{y0}" x2="{x1}" y2="{y1}" stroke="#333" stroke-width="1" marker-end="url(#arrow)"/>"##
            );
        }
        for y in sol.solution.open_sites() {
            let (cx, cy) = frame.px(sol.sites[y]);
            let half = CELL_PX * 1.5;
            let _ = writeln!(
                s,
                r##"<rect class="facility" x="{}" y="{}" width="{}" height="{}" fill="none" stroke="#000" stroke-width="1.5"/>"##,
                cx - half,
                cy - half,
                2.0 * half,
                2.0 * half
            );
        }
    }

    let r = CELL_PX;
    for row in &overlay.centers {
        let (gx, gy) = frame.px(row.geo);
        let _ = writeln!(
            s,
            r##"<circle class="geo-center" data-id="{}" cx="{gx}" cy="{gy}" r="{r}" fill="none" stroke="#00f" stroke-width="1"/>"##,
            row.region_id
        );
        let (ax, ay) = frame.px(row.alg);
        let _ = writeln!(
            s,
            r##"<path class="alg-center" data-id="{}" d="M {} {} L {} {} M {} {} L {} {}" stroke="#d00" stroke-width="1.5"/>"##,
            row.region_id,
            ax - r,
            ay - r,
            ax + r,
            ay + r,
            ax - r,
            ay + r,
            ax + r,
            ay - r
        );
    }

    let mut labelled = Vec::new();
    if let Some(sol) = &overlay.solution {
        if let Some(d) = &sol.demands {
            for (i, site) in sol.sites.iter().enumerate() {
                labelled.push((*site, d[i]));
            }
        }
    }
    if labelled.is_empty() {
        for row in &overlay.centers {
            if let Some(d) = row.demand {
                labelled.push((row.alg, d));
            }
        }
    }
    for (p, d) in labelled {
        let (x, y) = frame.px(p);
        let _ = writeln!(
            s,
            r#"<text class="demand" x="{}" y="{}" font-size="{}" font-family="sans-serif">{d}</text>"#,
            x + CELL_PX,
            y - CELL_PX,
            CELL_PX * 2.5
        );
    }
    s.push_str("</svg>\n");
    Ok(s)
}
