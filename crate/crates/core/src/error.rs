use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("empty region")]
    EmptyRegion,
    #[error("invalid norm exponent: {0}")]
    InvalidNormExponent(f64),
    #[error("big-M too small: M = {big_m} but the largest distance is {max_distance}")]
    BigMTooSmall { big_m: f64, max_distance: f64 },
    #[error("unservable demand: site {site} has demand {demand} > capacity {capacity}")]
    UnservableDemand { site: usize, demand: u32, capacity: f64 },
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("invalid map: {0}")]
    InvalidMap(String),
    #[error("invalid generator config: {0}")]
    InvalidConfig(String),
    #[error("placement failed: {0}")]
    PlacementFailed(String),
    #[error("oracle cap exceeded: {n} sites > cap {cap}")]
    OracleCapExceeded { n: usize, cap: usize },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
