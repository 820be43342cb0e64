//! Ensemble summaries of blocking footprints: contour boxplots from relaxed
//! band depth, frequency heatmaps and day-by-day stacks.

mod depth;
mod ensemble;
mod frequency;
mod stack;
mod trace;

pub use depth::{
    band, contour_boxplot, default_epsilon_grid, depth_profile, mismatch, pair_count, relaxed_depth, select_epsilon,
    ContourBoxplot, MemberDepth, MismatchMatrix,
};
pub use ensemble::{ContourEnsemble, EnsembleKind, EnsembleSelector, Member};
pub use frequency::{frequency_map, frequency_map_over, FrequencyMap};
pub use stack::{build_stacks, seasonal_stack, StackSlice, TemporalStack};
pub use trace::{trace_rings, Ring};
