use thiserror::Error;

/// Errors produced by graph construction and analysis.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("arc ({u}, {v}) is a loop")]
    LoopArc { u: u32, v: u32 },

    #[error("arc ({u}, {v}) references a vertex outside 0..{n}")]
    ArcOutOfRange { u: u32, v: u32, n: usize },

    #[error("arc ({u}, {v}) violates the level rule: level({v}) = {head_level} but level({u}) + 1 = {expected}")]
    LevelMismatch {
        u: u32,
        v: u32,
        head_level: i64,
        expected: i64,
    },

    #[error("tile index {index} has no {direction}-arcs; the represented digraph would not be two-ended")]
    TileDegreeZero { index: u32, direction: &'static str },

    #[error("tile arc set is empty")]
    EmptyTile,

    #[error("window bounds lo={lo} > hi={hi}")]
    WindowBounds { lo: i64, hi: i64 },

    #[error("template invalid: {0}")]
    InvalidTemplate(String),

    #[error("template has colours; use the coloured product")]
    ColouredTemplate,

    #[error("template arc {index} has no colour")]
    MissingColour { index: usize },

    #[error("no directed through-path in the template for coordinate {coordinate}")]
    NoThroughPath { coordinate: usize },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("subspace rank {d} outside 1..={n}")]
    RankOutOfRange { d: usize, n: usize },

    #[error("arc ({u}, {v}) is not in the digraph")]
    NoSuchArc { u: u32, v: u32 },

    #[error("digraph has no arcs")]
    EmptyArcSet,

    #[error("digraph has no core vertices")]
    EmptyCore,

    #[error("vertex {vertex} has both in- and out-arcs; not bipartitely oriented")]
    NotBipartitelyOriented { vertex: u32 },

    #[error("malformed partition: {0}")]
    MalformedPartition(String),

    #[error("partial map is not injective: {a} and {b} share the image {image}")]
    NotInjective { a: u32, b: u32, image: u32 },

    #[error("permutation image array is not a bijection")]
    NotBijective,

    #[error("cannot parse cycle notation {input:?}: {reason}")]
    BadCycleNotation { input: String, reason: String },

    #[error("generators act on different point counts: {a} vs {b}")]
    DegreeMismatch { a: usize, b: usize },

    #[error("group closure exceeded the cap of {cap} elements")]
    GroupTooLarge { cap: usize },

    #[error("element set is not a subgroup: {0}")]
    NotASubgroup(String),

    #[error("connection set not saturated: lambda * a * lambda' lands outside the set (witness elements {lambda}, {a}, {lambda_prime})")]
    NotSaturated { lambda: usize, a: usize, lambda_prime: usize },

    #[error("subgroup is not contained in the designated overgroup")]
    NotASubgroupOf,

    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),

    #[error("json failure: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
