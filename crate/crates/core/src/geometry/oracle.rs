//! Support oracles: interchangeable ways to compute the minimizer of a linear
//! functional over a convex range, selected by name at runtime.

use serde::{Deserialize, Serialize};

use super::direction::Direction;
use super::support::support;
use crate::error::Result;
use crate::linalg::hermitian::MatrixTriple;
use crate::settings::Settings;

/// Minimum value and one minimizing point for a direction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OracleAnswer {
    pub value: f64,
    pub point: [f64; 3],
}

pub trait SupportOracle: Send + Sync {
    fn name(&self) -> &'static str;

    /// `stream` identifies the query so randomized oracles can derive an
    /// independent, reproducible RNG stream per direction.
    fn query(
        &self,
        triple: &MatrixTriple,
        u: &Direction,
        settings: &Settings,
        stream: u64,
    ) -> Result<OracleAnswer>;
}

/// Exact support of the full joint numerical range.
pub struct WOracle;

impl SupportOracle for WOracle {
    fn name(&self) -> &'static str {
        "jnr"
    }

    fn query(&self, triple: &MatrixTriple, u: &Direction, settings: &Settings, _: u64) -> Result<OracleAnswer> {
        let r = support(triple, u, settings);
        Ok(OracleAnswer {
            value: r.support_value,
            point: r.point,
        })
    }
}

type Factory = fn() -> Box<dyn SupportOracle>;

const REGISTRY: &[(&str, Factory)] = &[
    ("jnr", || Box::new(WOracle)),
    ("ppt", || Box::new(crate::separable::PptOracle)),
    ("seesaw", || Box::new(crate::separable::SeesawOracle)),
];

/// Names accepted by [`oracle_by_name`].
pub fn oracle_names() -> Vec<&'static str> {
    REGISTRY.iter().map(|(n, _)| *n).collect()
}

pub fn oracle_by_name(name: &str) -> Option<Box<dyn SupportOracle>> {
    REGISTRY.iter().find(|(n, _)| *n == name).map(|(_, f)| f())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_round_trip() {
        for n in oracle_names() {
            assert_eq!(oracle_by_name(n).unwrap().name(), n);
        }
        assert!(oracle_by_name("nope").is_none());
    }
}
