use alloc::string::String;

use crate::loewner::Geometry;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid driving path: {0}")]
    InvalidDriving(&'static str),
    #[error("time {t} is not a grid time in [0, {horizon}]")]
    InvalidTime { t: f64, horizon: f64 },
    #[error("expected {expected:?} geometry, got {found:?}")]
    GeometryMismatch { expected: Geometry, found: Geometry },
    #[error("point lies on the removed slit")]
    OnSlit,
    #[error("time step {dt} exceeds the 1e-2 limit for drift integration")]
    StepTooLarge { dt: f64 },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("hull is empty at t = {t}")]
    DegenerateHull { t: f64 },
    #[error("need at least {needed} points, got {found}")]
    TooFewPoints { needed: usize, found: usize },
    #[error("fewer than 3 usable box scales")]
    TooFewScales,
    #[error("curve endpoint is {distance} away from the boundary line")]
    EndpointOffBoundary { distance: f64 },
    #[error("empty sample")]
    EmptySample,
    #[error("invalid argument: {0}")]
    InvalidArgument(&'static str),
}
