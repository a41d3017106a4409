use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("self-edge at vertex {0}")]
    SelfEdge(usize),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(usize, usize),
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("{0} vertices exceed the supported maximum of 64")]
    TooManyVertices(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Graph6Error {
    #[error("empty graph6 string")]
    Empty,
    #[error("byte {byte:#04x} at offset {offset} is outside the graph6 range 63..=126")]
    BadByte { byte: u8, offset: usize },
    #[error("long-form graph6 headers (more than 62 vertices) are not supported")]
    Unsupported,
    #[error("expected {expected} data bytes for {n} vertices, found {found}")]
    Length { n: usize, expected: usize, found: usize },
    #[error("padding bits must be zero")]
    Padding,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConnectivityError {
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph has {0} vertices; at least 3 are required")]
    TooSmall(usize),
    #[error("graph is not biconnected")]
    NotBiconnected,
    #[error("graph is triconnected; its SPQR tree has a single node")]
    Triconnected,
    #[error("edge {0} is not a real edge of the tree")]
    UnknownEdge(usize),
    #[error("malformed SPQR tree: {0}")]
    Malformed(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("no basis for loop order {g}, {r} vertices")]
    MissingBasis { g: i64, r: usize },
    #[error("image class {key} of a contraction is not in the target basis (g={g}, r={r})")]
    ImageOutsideBasis { key: String, g: i64, r: usize },
    #[error("d^2 != 0 at g={g}, r={r} -> {target} ({variant})")]
    NonzeroSquare { g: i64, r: usize, target: usize, variant: String },
    #[error("loop order {0} is outside the supported range")]
    LoopOrder(i64),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomotopyError {
    #[error(transparent)]
    Connectivity(#[from] ConnectivityError),
    #[error("expected {expected} leaf labels, got {found}")]
    LabelCount { expected: usize, found: usize },
    #[error("leaf label refers to node {0}, which is not an R leaf")]
    NotALeaf(usize),
    #[error("labels were not transported: no R leaf with the expected real edges")]
    LostLeaf,
    #[error("split vertex has valence {valence} in {graph6}")]
    LowValence { valence: usize, graph6: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ImportError {
    #[error("line {line}: {source}")]
    Graph6 { line: usize, source: Graph6Error },
    #[error("line {line}: {reason}")]
    Constraint { line: usize, reason: String },
}
