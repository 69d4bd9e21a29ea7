use serde::Serialize;

use super::ppt::ppt_support;
use super::seesaw::{seesaw_min, ProductState};
use crate::error::{JnrError, Result};
use crate::geometry::direction::Direction;
use crate::geometry::mesh::{sample_with, BoundaryMesh};
use crate::geometry::oracle::{OracleAnswer, SupportOracle};
use crate::geometry::support::{measure, measure_vector};
use crate::linalg::hermitian::{DensityMatrix, MatrixTriple};
use crate::settings::Settings;

/// Both separable support estimates in one direction.
#[derive(Debug, Clone, Serialize)]
pub struct SepSupportResult {
    pub direction: Direction,
    pub seesaw_value: f64,
    pub ppt_value: f64,
    pub optimizer: ProductState,
    pub ppt_state: DensityMatrix,
}

/// See-saw and PPT support values; `stream` selects the see-saw RNG stream.
pub fn sep_support(
    triple: &MatrixTriple,
    u: &Direction,
    settings: &Settings,
    stream: u64,
) -> Result<SepSupportResult> {
    if triple.n() != 4 {
        return Err(JnrError::UnsupportedSize(triple.n(), "4"));
    }
    let h = triple.pencil(u.u());
    let run = seesaw_min(
        h.matrix(),
        settings.seesaw_restarts,
        settings.seed,
        stream,
        settings.seesaw_tol,
        settings.seesaw_max_iter,
    );
    let (ppt_value, ppt_state) = ppt_support(triple, u, settings)?;
    Ok(SepSupportResult {
        direction: *u,
        seesaw_value: run.value,
        ppt_value,
        optimizer: run.state,
        ppt_state,
    })
}

/// PPT barrier solver as a support oracle.
pub struct PptOracle;

impl SupportOracle for PptOracle {
    fn name(&self) -> &'static str {
        "ppt"
    }

    fn query(&self, triple: &MatrixTriple, u: &Direction, settings: &Settings, _: u64) -> Result<OracleAnswer> {
        let (value, rho) = ppt_support(triple, u, settings)?;
        Ok(OracleAnswer {
            value,
            point: measure(triple, &rho)?,
        })
    }
}

/// See-saw product-state optimizer as a support oracle.
pub struct SeesawOracle;

impl SupportOracle for SeesawOracle {
    fn name(&self) -> &'static str {
        "seesaw"
    }

    fn query(&self, triple: &MatrixTriple, u: &Direction, settings: &Settings, stream: u64) -> Result<OracleAnswer> {
        if triple.n() != 4 {
            return Err(JnrError::UnsupportedSize(triple.n(), "4"));
        }
        let h = triple.pencil(u.u());
        let run = seesaw_min(
            h.matrix(),
            settings.seesaw_restarts,
            settings.seed,
            stream,
            settings.seesaw_tol,
            settings.seesaw_max_iter,
        );
        Ok(OracleAnswer {
            value: run.value,
            point: measure_vector(triple, &run.state.vector()),
        })
    }
}

/// Mesh of the separable range from PPT support points.
pub fn sample_sep_boundary(
    triple: &MatrixTriple,
    num_dirs: usize,
    seed: u64,
    settings: &Settings,
) -> Result<BoundaryMesh> {
    if triple.n() != 4 {
        return Err(JnrError::UnsupportedSize(triple.n(), "4"));
    }
    sample_with(&PptOracle, triple, num_dirs, seed, settings).map(|(m, _)| m)
}
