#![allow(dead_code)]

use hierapprox::oracle::{random_simple_spec, SpecParams};
use hierapprox::HierSpec;

/// Frozen after measuring 2000 collision-free random specs (max 1).
pub const SIMPLIFY_SIZE_C: u64 = 1;
/// Frozen after measuring 2000 random formulas (max 2.68).
pub const TFORM_SIZE_C: u64 = 3;
/// Frozen after measuring 800 random doubling circuits (max 3.25).
pub const MTG_SIZE_C: u64 = 4;
/// Frozen on TOWER_20: peak stream depth 20 against size 174.
pub const STREAM_DEPTH_PER_SIZE: (u64, u64) = (1, 8);

pub fn small_params() -> SpecParams {
    SpecParams {
        max_cells: 4,
        max_pins: 2,
        max_explicit: 4,
        max_calls: 2,
        vertex_limit: 24,
        ..SpecParams::default()
    }
}

/// 200 simple specs, expansions at most 500 vertices; odd seeds are drawn
/// small enough for the exact solvers.
pub fn spec_corpus() -> Vec<HierSpec> {
    (0..200).map(spec_corpus_entry).collect()
}

pub fn spec_corpus_entry(seed: u64) -> HierSpec {
    if seed.is_multiple_of(2) {
        random_simple_spec(seed, &SpecParams::default())
    } else {
        random_simple_spec(seed, &small_params())
    }
}
