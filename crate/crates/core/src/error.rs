use thiserror::Error;

/// Errors raised by the simulator.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// The scenario itself is unphysical or incomplete.
    #[error("configuration error: {0}")]
    Config(String),

    /// An argument is outside the domain of the requested quantity.
    #[error("domain error: {0}")]
    Domain(String),

    /// A numerical procedure failed to reach its accuracy target.
    #[error("numerical error: {0}")]
    Numerical(String),

    /// The generator does not have a unique stationary state.
    #[error("degenerate steady state: kernel dimension {0}")]
    DegenerateSteadyState(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
