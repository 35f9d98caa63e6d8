//! Distance-sensitive capacitated facility location.
//!
//! Minimize `c * (number of open sites)` such that
//! * a site may only be served by an open facility,
//! * every site is served by exactly one facility,
//! * the demand served by one facility does not exceed `L`,
//! * every site is served by one of its nearest open facilities.
//!
//! The last rule is the closest-assignment constraint. In MILP form it reads
//! `d[x][m] * g[x][m] <= d[x][y] + M * (1 - open[y])` for all `x, m, y`;
//! here it is checked directly, with distances equal up to `tie_eps()`
//! counted as ties.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::distance::{representative_points, DistanceMatrix};
use crate::region::{Point, RegionMap};
use crate::rep_point::ObjectiveMode;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct FacilityInstance {
    sites: Vec<Point>,
    demand: Vec<u32>,
    fixed_cost: f64,
    capacity: f64,
    big_m: f64,
    mode: ObjectiveMode,
    distances: DistanceMatrix,
}

impl FacilityInstance {
    /// Sites are given directly; distances between them are euclidean.
    pub fn from_sites(
        sites: Vec<Point>,
        demand: Vec<u32>,
        fixed_cost: f64,
        capacity: f64,
        big_m: f64,
        mode: ObjectiveMode,
    ) -> Result<Self> {
        let inst = Self::from_sites_relaxed(sites, demand, fixed_cost, capacity, big_m, mode)?;
        if let Some(site) = inst.demand.iter().position(|&a| a as f64 > capacity) {
            return Err(Error::UnservableDemand {
                site,
                demand: inst.demand[site],
                capacity,
            });
        }
        let max_distance = inst.distances.max_entry();
        if big_m <= max_distance {
            return Err(Error::BigMTooSmall {
                big_m,
                max_distance,
            });
        }
        Ok(inst)
    }

    /// Like [`FacilityInstance::from_sites`] but accepts demands above `L`
    /// and an undersized `M`. The solvers report such instances as
    /// infeasible instead of refusing them.
    pub fn from_sites_relaxed(
        sites: Vec<Point>,
        demand: Vec<u32>,
        fixed_cost: f64,
        capacity: f64,
        big_m: f64,
        mode: ObjectiveMode,
    ) -> Result<Self> {
        if sites.is_empty() {
            return Err(Error::InvalidInstance("no sites".into()));
        }
        if sites.len() != demand.len() {
            return Err(Error::InvalidInstance(format!(
                "{} sites but {} demands",
                sites.len(),
                demand.len()
            )));
        }
        if let Some(i) = sites.iter().position(|p| !p.is_finite()) {
            return Err(Error::InvalidInstance(format!("site {i} is not finite")));
        }
        for (name, v) in [("c", fixed_cost), ("L", capacity), ("M", big_m)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidInstance(format!("{name} must be positive, got {v}")));
            }
        }
        if let Some(site) = demand.iter().position(|&a| a == 0) {
            return Err(Error::InvalidInstance(format!("site {site} has zero demand")));
        }
        let distances = DistanceMatrix::from_points(&sites, mode, 2.0)?;
        Ok(Self {
            sites,
            demand,
            fixed_cost,
            capacity,
            big_m,
            mode,
            distances,
        })
    }

    /// One site per region, placed at the region's representative point.
    pub fn from_map(
        map: &RegionMap,
        mode: ObjectiveMode,
        demand: Vec<u32>,
        fixed_cost: f64,
        capacity: f64,
        big_m: f64,
    ) -> Result<Self> {
        if demand.len() != map.len() {
            return Err(Error::InvalidInstance(format!(
                "{} regions but {} demands",
                map.len(),
                demand.len()
            )));
        }
        let sites = representative_points(map, mode)?;
        Self::from_sites(sites, demand, fixed_cost, capacity, big_m, mode)
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn sites(&self) -> &[Point] {
        &self.sites
    }

    pub fn demand(&self) -> &[u32] {
        &self.demand
    }

    pub fn total_demand(&self) -> u64 {
        self.demand.iter().map(|&a| a as u64).sum()
    }

    pub fn fixed_cost(&self) -> f64 {
        self.fixed_cost
    }

    pub fn capacity(&self) -> f64 {
        self.capacity
    }

    pub fn big_m(&self) -> f64 {
        self.big_m
    }

    pub fn mode(&self) -> ObjectiveMode {
        self.mode
    }

    pub fn distances(&self) -> &DistanceMatrix {
        &self.distances
    }

    pub fn distance(&self, x: usize, y: usize) -> f64 {
        self.distances.get(x, y)
    }

    pub fn tie_eps(&self) -> f64 {
        1e-9 * self.distances.max_entry()
    }

    /// `ceil(total demand / L)`: no fewer facilities can carry the demand.
    pub fn facility_lower_bound(&self) -> usize {
        ((self.total_demand() as f64 / self.capacity).ceil() as usize).max(1)
    }

    /// Open facilities at minimal distance from `x`, within `tie_eps()`.
    /// `open` must be non-empty.
    pub fn nearest_open(&self, x: usize, open: &[usize]) -> Vec<usize> {
        let row = self.distances.row(x);
        let best = open.iter().map(|&y| row[y]).fold(f64::INFINITY, f64::min);
        let eps = self.tie_eps();
        open.iter().copied().filter(|&y| row[y] <= best + eps).collect()
    }

    pub fn to_doc(&self) -> InstanceDoc {
        InstanceDoc {
            sites: self.sites.iter().map(|p| [p.x, p.y]).collect(),
            demands: self.demand.clone(),
            c: self.fixed_cost,
            capacity: self.capacity,
            big_m: self.big_m,
            mode: self.mode,
        }
    }

    pub fn from_doc(doc: &InstanceDoc) -> Result<Self> {
        Self::from_sites(
            doc.sites.iter().map(|&[x, y]| Point::new(x, y)).collect(),
            doc.demands.clone(),
            doc.c,
            doc.capacity,
            doc.big_m,
            doc.mode,
        )
    }
}

/// JSON form of an instance: `{ sites, demands, c, L, M, mode }`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceDoc {
    pub sites: Vec<[f64; 2]>,
    pub demands: Vec<u32>,
    pub c: f64,
    #[serde(rename = "L")]
    pub capacity: f64,
    #[serde(rename = "M")]
    pub big_m: f64,
    #[serde(default)]
    pub mode: ObjectiveMode,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum SolveStatus {
    Optimal,
    Infeasible,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FacilitySolution {
    pub open: Vec<bool>,
    pub assign: Vec<Vec<bool>>,
    pub total_cost: f64,
    pub status: SolveStatus,
}

impl FacilitySolution {
    pub fn infeasible(n: usize) -> Self {
        Self {
            open: vec![false; n],
            assign: vec![vec![false; n]; n],
            total_cost: 0.0,
            status: SolveStatus::Infeasible,
        }
    }

    /// `facility_of[x]` is the facility serving site `x`.
    pub fn from_assignment(instance: &FacilityInstance, open_set: &[usize], facility_of: &[usize]) -> Self {
        let n = instance.len();
        let mut open = vec![false; n];
        for &y in open_set {
            open[y] = true;
        }
        let mut assign = vec![vec![false; n]; n];
        for (x, &y) in facility_of.iter().enumerate() {
            assign[x][y] = true;
        }
        Self {
            open,
            assign,
            total_cost: open_set.len() as f64 * instance.fixed_cost(),
            status: SolveStatus::Optimal,
        }
    }

    pub fn open_sites(&self) -> Vec<usize> {
        (0..self.open.len()).filter(|&y| self.open[y]).collect()
    }

    pub fn open_count(&self) -> usize {
        self.open.iter().filter(|&&o| o).count()
    }

    /// The first facility assigned to `x`, if any.
    pub fn facility_of(&self, x: usize) -> Option<usize> {
        self.assign.get(x)?.iter().position(|&g| g)
    }

    pub fn to_doc(&self) -> SolutionDoc {
        let mut assign = Vec::new();
        for (x, row) in self.assign.iter().enumerate() {
            for (y, &g) in row.iter().enumerate() {
                if g {
                    assign.push([x, y]);
                }
            }
        }
        SolutionDoc {
            open: self.open.clone(),
            assign,
            cost: self.total_cost,
            status: self.status,
        }
    }

    pub fn from_doc(doc: &SolutionDoc) -> Result<Self> {
        let n = doc.open.len();
        let mut assign = vec![vec![false; n]; n];
        for &[x, y] in &doc.assign {
            if x >= n || y >= n {
                return Err(Error::Parse(format!("assignment [{x}, {y}] out of range for {n} sites")));
            }
            assign[x][y] = true;
        }
        Ok(Self {
            open: doc.open.clone(),
            assign,
            total_cost: doc.cost,
            status: doc.status,
        })
    }
}

/// JSON form of a solution: `{ open, assign: [[x, y], ...], cost, status }`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionDoc {
    pub open: Vec<bool>,
    pub assign: Vec<[usize; 2]>,
    pub cost: f64,
    pub status: SolveStatus,
}

#[derive(Debug, Clone, PartialEq)]
pub enum SolutionViolation {
    Dimensions { expected: usize },
    /// total cost differs from open count times c
    Cost { expected: f64, found: f64 },
    /// assigned to a closed site
    ClosedFacility { site: usize, facility: usize },
    /// an open facility is strictly nearer than the assigned one
    NotNearest { site: usize, assigned: usize, nearer: usize, assigned_distance: f64, nearer_distance: f64 },
    OverCapacity { facility: usize, load: u64, capacity: f64 },
    /// a site is not assigned exactly once
    AssignmentCount { site: usize, count: usize },
}

impl fmt::Display for SolutionViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use SolutionViolation::*;
        match self {
            Dimensions { expected } => write!(f, "solution dimensions do not match {expected} sites"),
            Cost { expected, found } => write!(f, "total cost {found} != {expected}"),
            ClosedFacility { site, facility } => {
                write!(f, "site {site} assigned to closed facility {facility}")
            }
            NotNearest { site, assigned, nearer, assigned_distance, nearer_distance } => write!(
                f,
                "site {site} served by {assigned} at {assigned_distance} but open {nearer} is at {nearer_distance}"
            ),
            OverCapacity { facility, load, capacity } => {
                write!(f, "facility {facility} serves {load} > capacity {capacity}")
            }
            AssignmentCount { site, count } => {
                write!(f, "site {site} assigned {count} times")
            }
        }
    }
}

/// All constraint violations of an OPTIMAL solution. Infeasible solutions
/// carry no assignment and are only checked for shape.
pub fn check_solution(instance: &FacilityInstance, sol: &FacilitySolution) -> Vec<SolutionViolation> {
    let n = instance.len();
    if sol.open.len() != n || sol.assign.len() != n || sol.assign.iter().any(|r| r.len() != n) {
        return vec![SolutionViolation::Dimensions { expected: n }];
    }
    if sol.status == SolveStatus::Infeasible {
        return Vec::new();
    }
    let mut out = Vec::new();
    let expected = sol.open_count() as f64 * instance.fixed_cost();
    if (sol.total_cost - expected).abs() > 1e-9 * expected.abs().max(1.0) {
        out.push(SolutionViolation::Cost {
            expected,
            found: sol.total_cost,
        });
    }
    let open = sol.open_sites();
    let eps = instance.tie_eps();
    let mut load = vec![0u64; n];
    for x in 0..n {
        let assigned: Vec<usize> = (0..n).filter(|&y| sol.assign[x][y]).collect();
        if assigned.len() != 1 {
            out.push(SolutionViolation::AssignmentCount {
                site: x,
                count: assigned.len(),
            });
        }
        for &m in &assigned {
            load[m] += instance.demand()[x] as u64;
            if !sol.open[m] {
                out.push(SolutionViolation::ClosedFacility { site: x, facility: m });
            }
            let dm = instance.distance(x, m);
            for &y in &open {
                let dy = instance.distance(x, y);
                if dm > dy + eps {
                    out.push(SolutionViolation::NotNearest {
                        site: x,
                        assigned: m,
                        nearer: y,
                        assigned_distance: dm,
                        nearer_distance: dy,
                    });
                }
            }
        }
    }
    for (y, &l) in load.iter().enumerate() {
        if l as f64 > instance.capacity() {
            out.push(SolutionViolation::OverCapacity {
                facility: y,
                load: l,
                capacity: instance.capacity(),
            });
        }
    }
    out
}
