//! One entry point over the five solvers, and the cross-check between them.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::laurent::LaurentPoly;
use crate::matching::{solve_edge, solve_matching, MatchingError};
use crate::network::{solve_network, NetworkError};
use crate::oracle::{solve_oracle, Instance, OracleError};
use crate::path::{solve_path, PathError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    Oracle,
    Matching,
    Edge,
    Path,
    Network,
}

impl Method {
    pub const ALL: [Method; 5] = [Method::Oracle, Method::Matching, Method::Edge, Method::Path, Method::Network];

    pub fn name(self) -> &'static str {
        match self {
            Method::Oracle => "oracle",
            Method::Matching => "matching",
            Method::Edge => "edge",
            Method::Path => "path",
            Method::Network => "network",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Method::ALL.into_iter().find(|m| m.name() == s).ok_or_else(|| format!("unknown method {s:?}"))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Matching(#[from] MatchingError),
    #[error(transparent)]
    Path(#[from] PathError),
    #[error(transparent)]
    Network(#[from] NetworkError),
}

pub fn solve(inst: &Instance, method: Method) -> Result<LaurentPoly, SolveError> {
    Ok(match method {
        Method::Oracle => solve_oracle(inst)?,
        Method::Matching => solve_matching(inst)?,
        Method::Edge => solve_edge(inst)?,
        Method::Path => solve_path(inst)?,
        Method::Network => solve_network(inst)?,
    })
}

/// Every solver's answer on one instance.
#[derive(Clone, Debug)]
pub struct Agreement {
    pub values: Vec<(Method, LaurentPoly)>,
}

impl Agreement {
    /// Solvers whose answer differs from the oracle's.
    pub fn dissenters(&self) -> Vec<Method> {
        let reference = &self.values[0].1;
        self.values.iter().filter(|(_, v)| v != reference).map(|(m, _)| *m).collect()
    }

    pub fn agreeing(&self) -> usize {
        self.values.len() - self.dissenters().len()
    }

    pub fn value(&self) -> &LaurentPoly {
        &self.values[0].1
    }
}

pub fn solve_all(inst: &Instance) -> Result<Agreement, SolveError> {
    let values = Method::ALL.into_iter().map(|m| Ok((m, solve(inst, m)?))).collect::<Result<_, SolveError>>()?;
    Ok(Agreement { values })
}
