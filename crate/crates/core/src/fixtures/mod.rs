//! Example triples with their documented verdicts, embedded at compile time,
//! and the JSON triple format shared with the command line.

pub mod scalar;

use serde::{Deserialize, Serialize};

use crate::classify::shape::ShapeClass;
use crate::error::{JnrError, Result};
use crate::linalg::hermitian::{CMatrix, HermitianMatrix, MatrixTriple};
use num_complex::Complex64;
pub use scalar::{parse_scalar, Real};

type RawMatrix = Vec<Vec<[Real; 2]>>;

/// `{ "n": int, "matrices": [M1, M2, M3] }` with every entry an `[re, im]`
/// pair; entries may be symbolic (see [`parse_scalar`]).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TripleFile {
    pub n: usize,
    pub matrices: Vec<RawMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

impl TripleFile {
    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data")
    }

    pub fn from_triple(t: &MatrixTriple) -> Self {
        let n = t.n();
        let matrices = t
            .mats()
            .iter()
            .map(|m| {
                (0..n)
                    .map(|i| (0..n).map(|j| [Real(m.get(i, j).re), Real(m.get(i, j).im)]).collect())
                    .collect()
            })
            .collect();
        Self {
            n,
            matrices,
            labels: None,
        }
    }

    /// Validated triple; rejects wrong shapes and asymmetry above 1e-9.
    pub fn to_triple(&self) -> Result<MatrixTriple> {
        if self.matrices.len() != 3 {
            return Err(JnrError::Parse(format!("expected 3 matrices, found {}", self.matrices.len())));
        }
        let mut mats = Vec::with_capacity(3);
        for (k, m) in self.matrices.iter().enumerate() {
            let cm = raw_to_matrix(m, self.n).map_err(|e| JnrError::Parse(format!("matrix {}: {e}", k + 1)))?;
            mats.push(HermitianMatrix::new(cm).map_err(|e| JnrError::Parse(format!("matrix {}: {e}", k + 1)))?);
        }
        let a3 = mats.pop().expect("three");
        let a2 = mats.pop().expect("three");
        let a1 = mats.pop().expect("three");
        MatrixTriple::new(a1, a2, a3)
    }
}

fn raw_to_matrix(m: &RawMatrix, n: usize) -> Result<CMatrix> {
    if m.len() != n || m.iter().any(|r| r.len() != n) {
        return Err(JnrError::DimensionMismatch {
            expected: n,
            found: m.iter().map(|r| r.len()).find(|&l| l != n).unwrap_or(m.len()),
        });
    }
    Ok(CMatrix::from_fn(n, n, |i, j| Complex64::new(m[i][j][0].0, m[i][j][1].0)))
}

/// Verdicts documented for an example; absent fields are not claimed.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expected {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub signature: Option<[usize; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class_index: Option<usize>,
    /// Rank-one tuples `(u0, u1, u2, u3)` up to nonzero scaling.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tuples: Option<Vec<[Real; 4]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub corners: Option<Vec<[f64; 3]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub non_corners: Option<Vec<[f64; 3]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shape: Option<ShapeClass>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elliptic_rank2: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elliptic_rank3: Option<usize>,
    /// Number of pairs of elliptic faces that meet.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub intersecting_pairs: Option<usize>,
    /// Segment shared by two faces.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shared_segment: Option<[[f64; 3]; 2]>,
    /// Single point shared by two faces.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meeting_point: Option<[f64; 3]>,
    /// Boundary segments meeting at a common point.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub segments: Option<Vec<[[f64; 3]; 2]>>,
    /// The separable range is strictly smaller than W somewhere.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sep_strictly_inside: Option<bool>,
}

impl Expected {
    pub fn tuple_values(&self) -> Option<Vec<[f64; 4]>> {
        self.tuples.as_ref().map(|v| v.iter().map(|t| t.map(|x| x.0)).collect())
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FixtureFile {
    id: String,
    description: String,
    n: usize,
    matrices: Vec<RawMatrix>,
    #[serde(default)]
    labels: Option<Vec<String>>,
    #[serde(default)]
    operator: Option<RawMatrix>,
    expected: Expected,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PaperExample {
    pub id: String,
    pub description: String,
    pub triple: MatrixTriple,
    /// The 3×3 operator `B` whose hermitian parts form the first two matrices,
    /// for the shape exemplars.
    pub operator: Option<CMatrix>,
    pub expected: Expected,
    /// The stored input, exactly as parsed.
    pub input: TripleFile,
}

impl PaperExample {
    /// `(A1, A2)` for the 3×3 pair fixtures.
    pub fn pair(&self) -> (HermitianMatrix, HermitianMatrix) {
        (self.triple.get(0).clone(), self.triple.get(1).clone())
    }
}

const DATA: &[(&str, &str)] = &[
    ("E0", include_str!("data/E0.json")),
    ("E1", include_str!("data/E1.json")),
    ("E2", include_str!("data/E2.json")),
    ("E3", include_str!("data/E3.json")),
    ("E4", include_str!("data/E4.json")),
    ("E5", include_str!("data/E5.json")),
    ("E6", include_str!("data/E6.json")),
    ("E7a", include_str!("data/E7a.json")),
    ("E7b", include_str!("data/E7b.json")),
    ("E8", include_str!("data/E8.json")),
    ("E9", include_str!("data/E9.json")),
    ("E10", include_str!("data/E10.json")),
    ("E11", include_str!("data/E11.json")),
    ("E12", include_str!("data/E12.json")),
    ("E13", include_str!("data/E13.json")),
    ("E14", include_str!("data/E14.json")),
    ("six-dice", include_str!("data/six-dice.json")),
    ("five-ellipse", include_str!("data/five-ellipse.json")),
    ("ring", include_str!("data/ring.json")),
    ("random-gue", include_str!("data/random-gue.json")),
    ("ex5-1-n5", include_str!("data/ex5-1-n5.json")),
    ("ex3-1-2ellipses", include_str!("data/ex3-1-2ellipses.json")),
    ("bordered-3x3", include_str!("data/bordered-3x3.json")),
    ("type-exemplar-0", include_str!("data/type-exemplar-0.json")),
    ("type-exemplar-1", include_str!("data/type-exemplar-1.json")),
    ("type-exemplar-2", include_str!("data/type-exemplar-2.json")),
    ("type-exemplar-3", include_str!("data/type-exemplar-3.json")),
];

/// All example ids in corpus order.
pub fn ids() -> Vec<&'static str> {
    DATA.iter().map(|(id, _)| *id).collect()
}

/// The fifteen class examples, E0 through E14 (with E7a and E7b).
pub fn class_example_ids() -> Vec<&'static str> {
    DATA.iter().map(|(id, _)| *id).filter(|id| id.starts_with('E')).collect()
}

pub fn load(id: &str) -> Result<PaperExample> {
    let (_, text) = DATA
        .iter()
        .find(|(k, _)| *k == id)
        .ok_or_else(|| JnrError::UnknownExample(id.to_string()))?;
    let raw: FixtureFile = serde_json::from_str(text)?;
    if raw.id != id {
        return Err(JnrError::Parse(format!("fixture {id} carries id {}", raw.id)));
    }
    let input = TripleFile {
        n: raw.n,
        matrices: raw.matrices,
        labels: raw.labels,
    };
    let triple = input.to_triple()?;
    let operator = raw.operator.as_ref().map(|m| raw_to_matrix(m, raw.n)).transpose()?;
    Ok(PaperExample {
        id: raw.id,
        description: raw.description,
        triple,
        operator,
        expected: raw.expected,
        input,
    })
}

pub fn load_all() -> Result<Vec<PaperExample>> {
    ids().into_iter().map(load).collect()
}

/// Triple of real symmetric matrices with entries uniform in [-1, 1].
pub fn random_real_symmetric(n: usize, seed: u64) -> MatrixTriple {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut mats = Vec::with_capacity(3);
    for _ in 0..3 {
        let mut m = CMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let x = Complex64::new(rng.gen_range(-1.0..=1.0), 0.0);
                m[(i, j)] = x;
                m[(j, i)] = x;
            }
        }
        mats.push(HermitianMatrix::new(m).expect("symmetric by construction"));
    }
    let a3 = mats.pop().expect("three");
    let a2 = mats.pop().expect("three");
    let a1 = mats.pop().expect("three");
    MatrixTriple::new(a1, a2, a3).expect("same size")
}
