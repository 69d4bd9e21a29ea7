//! The fifteen admissible counts of oval, loaf, droplet and triangle faces.

use serde::Serialize;

use crate::error::{JnrError, Result};
use crate::faces::census::{rank3_census, FaceCensus};
use crate::geometry::support::face_dimension;
use crate::linalg::hermitian::{CMatrix, MatrixTriple};
use crate::settings::Settings;

/// Column `k` holds `(a0, a1, a2, a3)` of class `k`.
pub const TABLE: [[usize; 4]; 15] = [
    [0, 0, 0, 0],
    [1, 0, 0, 0],
    [0, 1, 0, 0],
    [0, 2, 0, 0],
    [0, 1, 1, 0],
    [0, 1, 0, 1],
    [0, 0, 1, 0],
    [0, 0, 2, 0],
    [0, 0, 3, 0],
    [0, 0, 1, 1],
    [0, 0, 1, 2],
    [0, 0, 2, 1],
    [0, 0, 0, 1],
    [0, 0, 0, 2],
    [0, 0, 0, 4],
];

/// Classes whose members always have a corner point.
pub const CORNER_CLASSES: [usize; 6] = [8, 9, 10, 11, 13, 14];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct ClassSignature {
    pub a0: usize,
    pub a1: usize,
    pub a2: usize,
    pub a3: usize,
    pub class_index: usize,
}

impl ClassSignature {
    pub fn from_counts(counts: [usize; 4]) -> Result<Self> {
        let k = TABLE
            .iter()
            .position(|c| *c == counts)
            .ok_or(JnrError::CountsNotInTable(counts))?;
        Ok(Self::from_index(k))
    }

    pub fn from_index(k: usize) -> Self {
        let [a0, a1, a2, a3] = TABLE[k];
        Self {
            a0,
            a1,
            a2,
            a3,
            class_index: k,
        }
    }

    pub fn counts(&self) -> [usize; 4] {
        [self.a0, self.a1, self.a2, self.a3]
    }

    pub fn implies_corner(&self) -> bool {
        CORNER_CLASSES.contains(&self.class_index)
    }
}

/// Counts of non-elliptic faces by type in a census.
pub fn count_types(census: &FaceCensus) -> [usize; 4] {
    let mut counts = [0; 4];
    for f in census.non_elliptic() {
        if let Some(k) = f.shape.type_index() {
            counts[k] += 1;
        }
    }
    counts
}

/// Affine dimension of W, read off the span of the traceless parts.
pub fn range_dimension(triple: &MatrixTriple, settings: &Settings) -> usize {
    let n = triple.n();
    face_dimension(triple, &CMatrix::identity(n, n), settings.face_dim_tol).unwrap_or(0)
}

/// Signature of a 4×4 triple together with the census it came from.
pub fn classify_with_census(triple: &MatrixTriple, settings: &Settings) -> Result<(ClassSignature, FaceCensus)> {
    if triple.n() != 4 {
        return Err(JnrError::UnsupportedSize(triple.n(), "4"));
    }
    let d = range_dimension(triple, settings);
    if d < 3 {
        return Err(JnrError::Degenerate(format!("joint numerical range has dimension {d}")));
    }
    let census = rank3_census(triple, settings)?;
    let sig = ClassSignature::from_counts(count_types(&census))?;
    Ok((sig, census))
}

pub fn classify_jnr(triple: &MatrixTriple, settings: &Settings) -> Result<ClassSignature> {
    classify_with_census(triple, settings).map(|(s, _)| s)
}
