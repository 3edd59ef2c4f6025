//! Inner approximation of the region `{x + iy : y > -Q(L, x)}` by the
//! area above a certified step function.

mod polygon;
mod step;

pub use polygon::{polygon_from_step, segments_intersect, GeneralizedPolygon, Vertex};
pub use step::{
    build_step, default_half_width, truncate_down, StepFunction, DEFAULT_SAMPLES_PER_BRANCH,
    DEFAULT_TAIL_THRESHOLD, MERGE_TOLERANCE,
};
