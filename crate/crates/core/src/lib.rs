//! Representative points for irregular raster regions, region distance
//! matrices, and an exact solver for a capacitated facility-location model
//! in which every demand must be served by its nearest open facility.
//!
//! The pipeline is: [`region`] maps → [`rep_point`] in-region centers →
//! [`distance`] matrices → [`facility`] instances → [`solver`].

pub mod distance;
mod error;
pub mod facility;
pub mod io;
pub mod map_gen;
pub mod region;
pub mod render;
pub mod rep_point;
pub mod solver;

pub use distance::{distance_matrix, lp_distance, region_distance, DistanceMatrix};
pub use error::{Error, Result};
pub use facility::{check_solution, FacilityInstance, FacilitySolution, SolveStatus};
pub use map_gen::{fixture, generate, GenConfig};
pub use region::{Cell, Point, RasterRegion, RegionMap, Violation};
pub use rep_point::{brute_force_representative_point, objective, representative_point, ObjectiveMode, RepPointResult};
pub use solver::{assign_feasible, exhaustive_solve, solve, SolveReport};
