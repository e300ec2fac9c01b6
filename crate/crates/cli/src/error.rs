use thiserror::Error;

use tsys::graph::GraphError;
use tsys::matching::MatchingError;
use tsys::network::NetworkError;
use tsys::solve::SolveError;
use tsys::specialize::SpecializeError;
use tsys::surface::SurfaceError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Scope(#[from] SurfaceError),
    #[error("cannot access {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("specialization needs --surface fund")]
    NotFund,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Matching(#[from] MatchingError),
    #[error(transparent)]
    Network(#[from] NetworkError),
    #[error(transparent)]
    Specialize(#[from] SpecializeError),
    #[error("cross-check failed: {0} disagree with the oracle")]
    Disagreement(String),
}

impl CliError {
    /// 2 for requests the user can fix, 3 for broken invariants.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Scope(_) | CliError::Io { .. } | CliError::NotFund => 2,
            CliError::Graph(GraphError::Scope(_) | GraphError::DegenerateShadow(_)) => 2,
            CliError::Network(NetworkError::Graph(GraphError::Scope(_) | GraphError::DegenerateShadow(_))) => 2,
            CliError::Specialize(
                SpecializeError::NotFund | SpecializeError::InvalidKappa { .. } | SpecializeError::SiteNotLocated { .. },
            ) => 2,
            _ => 3,
        }
    }
}
