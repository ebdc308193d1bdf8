//! Matchings in edge-colored complete uniform hypergraphs.
//!
//! The crate provides, over t-edge-colorings of the complete r-uniform
//! hypergraph on n vertices:
//!
//! - ranked edge representation and a bit-exact coloring file format
//!   ([`combinatorics`], [`coloring`]);
//! - exact maximum matchings under color filters, perfect-matching
//!   enumeration, and the two closed-form vertex-count bounds
//!   ([`matching`]);
//! - detectors for the structures arising in the 3-uniform, 3-color setting
//!   (B-sets, A-sets, monochromatic K6s, rainbow K5s, disks) and the
//!   balanced-partition witness extraction ([`structures`]);
//! - constructive extraction of 2-colored matchings at the three certified
//!   sizes (n = 12, 16, 19) with verifiable traces, plus seeded coloring
//!   generators ([`pipelines`]);
//! - exhaustive symmetry-reduced search for avoiding colorings with
//!   re-checkable certificates ([`search`]).

pub mod combinatorics;
pub mod coloring;
pub mod error;
pub mod matching;
pub mod pipelines;
pub mod search;
pub mod structures;

pub use coloring::{ColorSet, Coloring};
pub use combinatorics::{binomial, disjoint, rank_edge, unrank_edge, Edge, EdgeId, VertexSet};
pub use error::{Error, Result};
pub use matching::{
    afl_bound, conjecture_bound, enumerate_perfect_matchings, find_mono_matching,
    find_s_colored_matching, max_matching, BoundParams, Matching,
};
pub use pipelines::{
    extraction_certificate, generate_coloring, thm1_extract, thm2_extract, thm3_extract,
    ExtractionTrace, GeneratorSpec, TraceStep,
};
pub use search::{
    certify, check_certificate, search_avoiding, search_avoiding_parallel, Budget, Certificate,
    SearchOutcome, SearchProblem, SymmetryOptions,
};
pub use structures::{
    analyze, balanced_partition_report, find_disk, find_mono_k6, find_rainbow_k5, is_a_set,
    is_b_plus_set, is_b_set, pair_color_profile, Disk, PartitionSide, PartitionWitness,
    StructureReport,
};
