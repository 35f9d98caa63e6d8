//! File formats.
//!
//! * Labeled grid CSV: `height` lines of `width` comma-separated integers,
//!   0 for empty space and `k >= 1` for region `k`. The first line is the
//!   TOP map row (`y = height - 1`).
//! * Polygon JSON: `{ "width", "height", "regions": [{ "id", "rings": [[[x, y], ...], ...] }] }`,
//!   rasterized by testing each cell center against all rings of a region
//!   with the even-odd rule.
//! * Demands JSON: a plain array of positive integers, one per region.
//! * Center table CSV: `region_id,geo_x,geo_y,alg_x,alg_y,demand,differs`.
//! * Distance matrix CSV: header `region,<id>,<id>,...`, then one row per
//!   region led by its id.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::distance::DistanceMatrix;
use crate::region::{Cell, Point, RasterRegion, RegionMap};
use crate::rep_point::{representative_point, ObjectiveMode};
use crate::{Error, Result};

fn csv_reader(text: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes())
}

pub fn parse_grid(text: &str) -> Result<RegionMap> {
    let mut rows: Vec<Vec<u32>> = Vec::new();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(text.as_bytes());
    for (line, record) in reader.records().enumerate() {
        let record = record.map_err(|e| Error::Parse(e.to_string()))?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        let row = record
            .iter()
            .enumerate()
            .map(|(col, v)| {
                v.parse::<u32>().map_err(|_| {
                    Error::Parse(format!("line {}, column {}: '{v}' is not a label", line + 1, col + 1))
                })
            })
            .collect::<Result<Vec<u32>>>()?;
        rows.push(row);
    }
    let height = rows.len();
    let width = rows.first().map_or(0, Vec::len);
    if height == 0 || width == 0 {
        return Err(Error::Parse("empty grid".into()));
    }
    if let Some(i) = rows.iter().position(|r| r.len() != width) {
        return Err(Error::Parse(format!(
            "line {} has {} columns, expected {width}",
            i + 1,
            rows[i].len()
        )));
    }
    let labels: Vec<u32> = rows.into_iter().rev().flatten().collect();
    RegionMap::from_labels(width as u32, height as u32, &labels)
}

pub fn write_grid(map: &RegionMap) -> String {
    let labels = map.labels();
    let w = map.width() as usize;
    let mut out = String::with_capacity(labels.len() * 3);
    for row in labels.chunks(w).rev() {
        let line: Vec<String> = row.iter().map(u32::to_string).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolygonRegionDoc {
    pub id: u32,
    pub rings: Vec<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolygonMapDoc {
    pub width: u32,
    pub height: u32,
    pub regions: Vec<PolygonRegionDoc>,
}

/// Even-odd crossing test of `p` against all rings.
fn inside_even_odd(rings: &[Vec<[f64; 2]>], p: Point) -> bool {
    let mut inside = false;
    for ring in rings {
        let n = ring.len();
        for i in 0..n {
            let [x0, y0] = ring[i];
            let [x1, y1] = ring[(i + 1) % n];
            if (y0 > p.y) != (y1 > p.y) {
                let x = x0 + (p.y - y0) / (y1 - y0) * (x1 - x0);
                if p.x < x {
                    inside = !inside;
                }
            }
        }
    }
    inside
}

pub fn rasterize_polygons(doc: &PolygonMapDoc) -> Result<RegionMap> {
    let mut regions = Vec::with_capacity(doc.regions.len());
    for r in &doc.regions {
        let mut cells = Vec::new();
        for row in 0..doc.height {
            for col in 0..doc.width {
                let cell = Cell::new(col, row);
                if inside_even_odd(&r.rings, cell.center()) {
                    cells.push(cell);
                }
            }
        }
        regions.push(RasterRegion::new(r.id, cells));
    }
    RegionMap::checked(doc.width, doc.height, regions)
}

pub fn parse_polygons(text: &str) -> Result<RegionMap> {
    let doc: PolygonMapDoc = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    rasterize_polygons(&doc)
}

/// Grid CSV, or polygon JSON when the text starts with `{`.
pub fn parse_map(text: &str) -> Result<RegionMap> {
    if text.trim_start().starts_with('{') {
        parse_polygons(text)
    } else {
        parse_grid(text)
    }
}

pub fn parse_demands(text: &str) -> Result<Vec<u32>> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("demands: {e}")))
}

pub fn write_demands(demands: &[u32]) -> String {
    let mut s = serde_json::to_string(demands).expect("integers serialize");
    s.push('\n');
    s
}

#[derive(Debug, Clone, PartialEq)]
pub struct CenterRow {
    pub region_id: u32,
    pub geo: Point,
    pub alg: Point,
    pub demand: Option<u32>,
    pub differs: bool,
}

/// One row per region: the center of the centroid's cell and the
/// representative point. `differs` compares the two cells.
pub fn center_table(map: &RegionMap, mode: ObjectiveMode, demands: Option<&[u32]>) -> Result<Vec<CenterRow>> {
    if let Some(d) = demands {
        if d.len() != map.len() {
            return Err(Error::InvalidInstance(format!(
                "{} regions but {} demands",
                map.len(),
                d.len()
            )));
        }
    }
    map.regions()
        .iter()
        .enumerate()
        .map(|(i, r)| {
            // on a shared edge the centroid's cell is the smallest one touching it
            let geo_cell = *r.centroid_cells().first().ok_or(Error::EmptyRegion)?;
            let alg = representative_point(r, mode)?;
            Ok(CenterRow {
                region_id: r.id(),
                geo: geo_cell.center(),
                alg: alg.point,
                demand: demands.map(|d| d[i]),
                differs: geo_cell != alg.cell,
            })
        })
        .collect()
}

fn coord(v: f64, integer: bool) -> String {
    if integer {
        format!("{}", v.round())
    } else {
        format!("{v}")
    }
}

pub const CENTER_HEADER: &str = "region_id,geo_x,geo_y,alg_x,alg_y,demand,differs";

/// `integer_centers` rounds every coordinate to the nearest integer (halves
/// away from zero).
pub fn write_center_table(rows: &[CenterRow], integer_centers: bool) -> String {
    let mut out = String::new();
    out.push_str(CENTER_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.region_id,
            coord(r.geo.x, integer_centers),
            coord(r.geo.y, integer_centers),
            coord(r.alg.x, integer_centers),
            coord(r.alg.y, integer_centers),
            r.demand.map(|d| d.to_string()).unwrap_or_default(),
            r.differs
        );
    }
    out
}

pub fn parse_center_table(text: &str) -> Result<Vec<CenterRow>> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let headers = reader.headers().map_err(|e| Error::Parse(e.to_string()))?.clone();
    let expected: Vec<&str> = CENTER_HEADER.split(',').collect();
    if headers.iter().collect::<Vec<_>>() != expected {
        return Err(Error::Parse(format!("center table header must be '{CENTER_HEADER}'")));
    }
    let num = |s: &str| s.parse::<f64>().map_err(|_| Error::Parse(format!("bad number '{s}'")));
    let mut rows = Vec::new();
    for record in reader.records() {
        let rec = record.map_err(|e| Error::Parse(e.to_string()))?;
        rows.push(CenterRow {
            region_id: rec[0].parse().map_err(|_| Error::Parse(format!("bad region id '{}'", &rec[0])))?,
            geo: Point::new(num(&rec[1])?, num(&rec[2])?),
            alg: Point::new(num(&rec[3])?, num(&rec[4])?),
            demand: if rec[5].is_empty() {
                None
            } else {
                Some(rec[5].parse().map_err(|_| Error::Parse(format!("bad demand '{}'", &rec[5])))?)
            },
            differs: rec[6].parse().map_err(|_| Error::Parse(format!("bad flag '{}'", &rec[6])))?,
        });
    }
    Ok(rows)
}

pub fn write_distance_matrix(ids: &[u32], m: &DistanceMatrix) -> String {
    let mut out = String::from("region");
    for id in ids {
        let _ = write!(out, ",{id}");
    }
    out.push('\n');
    for (i, id) in ids.iter().enumerate() {
        let _ = write!(out, "{id}");
        for v in m.row(i) {
            let _ = write!(out, ",{v}");
        }
        out.push('\n');
    }
    out
}

/// Returns region ids and the row-major entries.
pub fn parse_distance_matrix(text: &str) -> Result<(Vec<u32>, Vec<Vec<f64>>)> {
    let mut reader = csv_reader(text);
    let mut records = reader.records();
    let header = records
        .next()
        .ok_or_else(|| Error::Parse("empty matrix".into()))?
        .map_err(|e| Error::Parse(e.to_string()))?;
    let ids = header
        .iter()
        .skip(1)
        .map(|s| s.parse::<u32>().map_err(|_| Error::Parse(format!("bad id '{s}'"))))
        .collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::new();
    for rec in records {
        let rec = rec.map_err(|e| Error::Parse(e.to_string()))?;
        rows.push(
            rec.iter()
                .skip(1)
                .map(|s| s.parse::<f64>().map_err(|_| Error::Parse(format!("bad entry '{s}'"))))
                .collect::<Result<Vec<_>>>()?,
        );
    }
    Ok((ids, rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distance::distance_matrix;
    use crate::map_gen::fixture;

    #[test]
    fn grid_top_row_first() {
        let map = parse_grid("0,2\n1,1\n").unwrap();
        assert_eq!(map.region(1).unwrap().cells(), &[Cell::new(0, 0), Cell::new(1, 0)]);
        assert_eq!(map.region(2).unwrap().cells(), &[Cell::new(1, 1)]);
        assert_eq!(write_grid(&map), "0,2\n1,1\n");
    }

    #[test]
    fn grid_errors() {
        assert!(parse_grid("").is_err());
        assert!(parse_grid("1,2\n1\n").is_err());
        assert!(parse_grid("1,x\n").is_err());
        assert!(parse_grid("1,-1\n").is_err());
        // id 2 missing
        assert!(parse_grid("1,3\n").is_err());
    }

    #[test]
    fn grid_round_trip_fixtures() {
        for case in 1..=3 {
            let map = fixture(case).unwrap();
            assert_eq!(parse_grid(&write_grid(&map)).unwrap(), map);
        }
    }

    #[test]
    fn polygon_even_odd() {
        // square with a square hole, as two rings of one region
        let doc = PolygonMapDoc {
            width: 5,
            height: 5,
            regions: vec![PolygonRegionDoc {
                id: 1,
                rings: vec![
                    vec![[0.0, 0.0], [3.0, 0.0], [3.0, 3.0], [0.0, 3.0]],
                    vec![[1.0, 1.0], [2.0, 1.0], [2.0, 2.0], [1.0, 2.0]],
                ],
            }],
        };
        let map = rasterize_polygons(&doc).unwrap();
        let r = map.region(1).unwrap();
        assert_eq!(r.len(), 8);
        assert!(!r.contains_cell(Cell::new(1, 1)));
        let json = serde_json::to_string(&doc).unwrap();
        assert_eq!(parse_map(&json).unwrap(), map);
    }

    #[test]
    fn polygon_missing_region_fails() {
        let doc = r#"{"width":4,"height":4,"regions":[{"id":1,"rings":[[[0.1,0.1],[0.2,0.1],[0.2,0.2]]]}]}"#;
        assert!(parse_polygons(doc).is_err());
    }

    #[test]
    fn center_rows() {
        let map = RegionMap::new(3, 3, vec![RasterRegion::block(1, 0, 0, 3, 3)]);
        let rows = center_table(&map, ObjectiveMode::Squared, Some(&[4])).unwrap();
        assert_eq!(rows[0].geo, Point::new(1.5, 1.5));
        assert_eq!(rows[0].alg, Point::new(1.5, 1.5));
        assert!(!rows[0].differs);
        let text = write_center_table(&rows, false);
        assert_eq!(text, format!("{CENTER_HEADER}\n1,1.5,1.5,1.5,1.5,4,false\n"));
        assert_eq!(parse_center_table(&text).unwrap(), rows);
        assert_eq!(
            write_center_table(&rows, true),
            format!("{CENTER_HEADER}\n1,2,2,2,2,4,false\n")
        );
        assert!(center_table(&map, ObjectiveMode::Squared, Some(&[1, 2])).is_err());
    }

    #[test]
    fn distance_csv() {
        let map = RegionMap::new(
            4,
            4,
            vec![RasterRegion::new(1, [(0, 0)]), RasterRegion::new(2, [(0, 3)])],
        );
        let m = distance_matrix(&map, ObjectiveMode::Squared).unwrap();
        let text = write_distance_matrix(&[1, 2], &m);
        assert_eq!(text, "region,1,2\n1,0,3\n2,3,0\n");
        let (ids, rows) = parse_distance_matrix(&text).unwrap();
        assert_eq!(ids, vec![1, 2]);
        assert_eq!(rows, vec![vec![0.0, 3.0], vec![3.0, 0.0]]);
    }

    #[test]
    fn demands_json() {
        assert_eq!(write_demands(&[1, 10]), "[1,10]\n");
        assert_eq!(parse_demands("[1, 10]").unwrap(), vec![1, 10]);
        assert!(parse_demands("[-1]").is_err());
    }
}
