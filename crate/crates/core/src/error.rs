use thiserror::Error;

/// Errors produced by the engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("flip-graph is empty for this surface: {0}")]
    EmptyFlipGraph(String),
    #[error("genus {0} is not supported (genus 0 only)")]
    UnsupportedGenus(u32),
    #[error("boundary curve {0} has no marked point")]
    NonPositiveBoundaryCount(usize),
    #[error("surface cannot be triangulated: {0}")]
    NotTriangulable(String),
    #[error("arc is not flippable")]
    NotFlippable,
    #[error("unknown marked point {0}")]
    UnknownMarkedPoint(u32),
    #[error("triangulations are not adjacent in the flip-graph")]
    NotAdjacent,
    #[error("cannot contract a boundary loop")]
    LoopContraction,
    #[error("triangulation lives on a different surface or frame")]
    WrongSurface,
    #[error("invalid arc: {0}")]
    InvalidArc(String),
    #[error("invalid triangulation: {0}")]
    InvalidTriangulation(String),
    #[error("budget exceeded after radius {reached_radius} with {states} states")]
    BudgetExceeded { reached_radius: u32, states: usize },
    #[error("surface does not qualify for a product witness: {0}")]
    NotQualifying(String),
    #[error("argument out of domain: {0}")]
    DomainError(String),
    #[error("unknown verification suite {0}")]
    UnknownSuite(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
