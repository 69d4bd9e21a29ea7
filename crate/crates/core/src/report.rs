//! JSON reports for the command-line pipelines.
//!
//! A report carries a digest of its input, the full settings record and every
//! warning raised along the way, so two runs with the same input, flags and
//! seed produce byte-identical files.

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::classify::signature::{count_types, range_dimension, ClassSignature};
use crate::corners::{check_three_segment_corner, is_corner_point, joint_spectrum, segments_through, verify_corner_block_structure};
use crate::error::{JnrError, Result};
use crate::faces::census::{detect_faces, EllipseParams, FaceCensus, Segment};
use crate::fixtures::TripleFile;
use crate::geometry::direction::{jittered_sphere, Direction};
use crate::geometry::mesh::BoundaryMesh;
use crate::geometry::support::{measure, support_value};
use crate::linalg::hermitian::MatrixTriple;
use crate::separable::sweep::sep_support;
use crate::separable::tangency::{segment_probe, tangency_check, FlatRegion, ProbeThresholds, TangencyReport};
use crate::settings::Settings;

pub const SCHEMA_VERSION: u32 = 1;

/// Identifiers of the claims an event refers to.
pub mod claims {
    /// Non-elliptic face counts form one of the fifteen admissible columns.
    pub const COUNTS_IN_TABLE: &str = "face-counts-in-table";
    /// Classes 8, 9, 10, 11, 13 and 14 force a corner point.
    pub const CLASS_FORCES_CORNER: &str = "class-forces-corner";
    /// Three distinct boundary segments through a point of a 4×4 range meet
    /// at a corner.
    pub const THREE_SEGMENTS_CORNER: &str = "three-segments-meet-at-corner";
    /// Every flat face of a two-qubit range holds a product-state image.
    pub const PRODUCT_STATE_ON_FACE: &str = "flat-face-holds-product-state";
    /// PPT and separable supports agree for two qubits.
    pub const PPT_EQUALS_SEPARABLE: &str = "ppt-equals-separable";
    /// The separable range lies inside W.
    pub const SEPARABLE_INSIDE: &str = "separable-inside-range";
    /// Generic real symmetric triples have an even number of at most ten
    /// rank-2 elliptic faces.
    pub const ELLIPTIC_PARITY: &str = "elliptic-faces-even-at-most-ten";
    /// Rank-one tuples of a generic triple are isolated.
    pub const ISOLATED_TUPLES: &str = "rank-one-tuples-isolated";
    /// The range spans three dimensions.
    pub const FULL_DIMENSION: &str = "range-is-three-dimensional";
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    Warning,
    /// A computed result contradicts a claim that should hold.
    Falsification,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Event {
    pub kind: EventKind,
    pub claim: &'static str,
    pub message: String,
}

impl Event {
    pub fn warning(claim: &'static str, message: impl Into<String>) -> Self {
        Self {
            kind: EventKind::Warning,
            claim,
            message: message.into(),
        }
    }

    pub fn falsification(claim: &'static str, message: impl Into<String>) -> Self {
        Self {
            kind: EventKind::Falsification,
            claim,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    /// Face counts outside the table, or a falsification event.
    Anomaly,
    Degenerate,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Anomaly => 2,
            Status::Degenerate => 3,
        }
    }
}

/// Hex SHA-256 of the canonical JSON form of the input.
pub fn input_digest(file: &TripleFile) -> String {
    let canon = serde_json::to_string(file).expect("plain data");
    let d = Sha256::digest(canon.as_bytes());
    d.iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FaceSummary {
    pub direction: Direction,
    pub support_value: f64,
    pub rank: usize,
    pub dim: usize,
    pub shape: &'static str,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub segments: Vec<Segment>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ellipse: Option<EllipseParams>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumEntry {
    pub lambda: [f64; 3],
    pub eigenspace_dim: usize,
    pub residual: f64,
    pub is_corner: bool,
    pub normal_cone_dim: usize,
    pub supporting_directions: usize,
    /// Present for corners: whether the matrices split off the eigenspace.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub block_structure: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeparableEntry {
    pub direction: Direction,
    pub w_support: f64,
    pub seesaw: f64,
    pub ppt: f64,
    /// Image of the PPT optimizer.
    pub ppt_point: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeparableSummary {
    pub directions: Vec<SeparableEntry>,
    pub failed_directions: Vec<usize>,
    /// Largest `ppt − w_support`.
    pub max_gap: f64,
    pub max_seesaw_ppt_difference: f64,
    pub tangency: TangencyReport,
    /// Diagnostic flat or ruled patches of the separable boundary mesh.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flat_regions: Option<Vec<FlatRegion>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub input_digest: String,
    pub n: usize,
    pub settings: Settings,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub range_dimension: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank1_tuples: Option<Vec<[f64; 4]>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub faces: Option<Vec<FaceSummary>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counts: Option<[usize; 4]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub signature: Option<ClassSignature>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub joint_spectrum: Option<Vec<SpectrumEntry>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub separable: Option<SeparableSummary>,
    pub events: Vec<Event>,
}

impl Report {
    pub fn new(command: &str, file: &TripleFile, settings: &Settings) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            input_digest: input_digest(file),
            n: file.n,
            settings: settings.clone(),
            status: Status::Ok,
            range_dimension: None,
            rank1_tuples: None,
            faces: None,
            counts: None,
            signature: None,
            joint_spectrum: None,
            separable: None,
            events: Vec::new(),
        }
    }

    pub fn push(&mut self, e: Event) {
        if e.kind == EventKind::Falsification {
            self.status = Status::Anomaly;
        }
        log::debug!("[{}] {}", e.claim, e.message);
        self.events.push(e);
    }

    /// Pretty JSON with a trailing newline.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data");
        s.push('\n');
        s
    }

    /// Marks the report degenerate when the range is flat. Returns whether
    /// it was.
    fn check_dimension(&mut self, triple: &MatrixTriple, settings: &Settings) -> bool {
        let dim = range_dimension(triple, settings);
        self.range_dimension = Some(dim);
        if dim < 3 {
            self.status = Status::Degenerate;
            self.push(Event::warning(claims::FULL_DIMENSION, format!("the range has dimension {dim}")));
            return true;
        }
        false
    }
}

fn face_summaries(census: &FaceCensus) -> Vec<FaceSummary> {
    census
        .faces
        .iter()
        .map(|f| FaceSummary {
            direction: f.direction,
            support_value: f.support_value,
            rank: f.rank,
            dim: f.dim,
            shape: f.shape.name(),
            segments: f.segments.clone(),
            ellipse: f.ellipse,
        })
        .collect()
}

fn spectrum_entries(triple: &MatrixTriple, settings: &Settings) -> Result<Vec<SpectrumEntry>> {
    let mut out = Vec::new();
    for p in joint_spectrum(triple, settings) {
        let v = is_corner_point(triple, &p.lambda, settings.corner_probes, settings.seed, settings)?;
        let block_structure = if v.is_corner {
            Some(verify_corner_block_structure(triple, &p, settings)?)
        } else {
            None
        };
        out.push(SpectrumEntry {
            lambda: p.lambda,
            eigenspace_dim: p.eigenspace_dim,
            residual: p.residual(triple),
            is_corner: v.is_corner,
            normal_cone_dim: v.normal_cone_dim,
            supporting_directions: v.supporting_directions.len(),
            block_structure,
        });
    }
    Ok(out)
}

/// Faces, class signature and corner points of a 4×4 triple.
pub fn classify_report(file: &TripleFile, settings: &Settings) -> Result<Report> {
    let triple = file.to_triple()?;
    if triple.n() != 4 {
        return Err(JnrError::UnsupportedSize(triple.n(), "4"));
    }
    let mut r = Report::new("classify", file, settings);
    if r.check_dimension(&triple, settings) {
        return Ok(r);
    }
    let census = detect_faces(&triple, settings)?;
    r.rank1_tuples = Some(census.tuples.iter().map(|t| t.normalized()).collect());
    r.faces = Some(face_summaries(&census));
    if census.continuum_suspected {
        r.push(Event::warning(claims::ISOLATED_TUPLES, format!("{} rank-one tuples accepted", census.tuples.len())));
    }
    if census.rejected_candidates > 0 {
        r.push(Event::warning(
            claims::ISOLATED_TUPLES,
            format!("{} coalescence candidates failed the minor test", census.rejected_candidates),
        ));
    }
    let counts = count_types(&census);
    r.counts = Some(counts);
    match ClassSignature::from_counts(counts) {
        Ok(sig) => r.signature = Some(sig),
        Err(_) => r.push(Event::falsification(
            claims::COUNTS_IN_TABLE,
            format!("counts {counts:?} match no column of the table"),
        )),
    }
    if file_is_real(&triple) {
        let k = census.elliptic().filter(|f| f.rank == 2).count();
        if k % 2 == 1 || k > 10 {
            r.push(Event::warning(claims::ELLIPTIC_PARITY, format!("{k} rank-2 elliptic faces on a real symmetric triple")));
        }
    }
    let spectrum = spectrum_entries(&triple, settings)?;
    if r.signature.is_some_and(|s| s.implies_corner()) && !spectrum.iter().any(|e| e.is_corner) {
        r.push(Event::falsification(
            claims::CLASS_FORCES_CORNER,
            format!("class {} has no detected corner point", r.signature.map_or(0, |s| s.class_index)),
        ));
    }
    check_segment_junctions(&triple, &census, settings, &mut r);
    r.joint_spectrum = Some(spectrum);
    Ok(r)
}

fn file_is_real(t: &MatrixTriple) -> bool {
    t.mats().iter().all(|m| m.matrix().iter().all(|z| z.im == 0.0))
}

/// Runs the three-segment corner check wherever three face segments share an
/// endpoint.
fn check_segment_junctions(triple: &MatrixTriple, census: &FaceCensus, settings: &Settings, r: &mut Report) {
    let tol = 1e-6 * triple.scale();
    let all: Vec<Segment> = census.non_elliptic().flat_map(|f| f.segments.clone()).collect();
    let mut seen: Vec<[f64; 3]> = Vec::new();
    for s in &all {
        for p in [s.a, s.b] {
            if seen.iter().any(|q| crate::geometry::direction::dist(q, &p) <= tol) {
                continue;
            }
            seen.push(p);
            let through = segments_through(&all, &p, tol);
            if through.len() < 3 {
                continue;
            }
            match check_three_segment_corner(triple, &[through[0], through[1], through[2]], settings) {
                Ok(c) if c.falsified => r.push(Event::falsification(
                    claims::THREE_SEGMENTS_CORNER,
                    format!("three segments meet at {:?} but no corner was detected", c.point),
                )),
                Ok(_) => {}
                Err(e) => log::info!("segment junction at {p:?} skipped: {e}"),
            }
        }
    }
}

/// Joint spectrum with corner verdicts; any size.
pub fn spectrum_report(file: &TripleFile, settings: &Settings) -> Result<Report> {
    let triple = file.to_triple()?;
    let mut r = Report::new("spectrum", file, settings);
    if r.check_dimension(&triple, settings) {
        return Ok(r);
    }
    r.joint_spectrum = Some(spectrum_entries(&triple, settings)?);
    Ok(r)
}

/// Separable and full supports over `num_dirs` directions, tangency of the
/// flat faces, and optionally the flat-patch probe of the separable mesh.
pub fn separable_report(file: &TripleFile, num_dirs: usize, probe: bool, settings: &Settings) -> Result<Report> {
    let triple = file.to_triple()?;
    if triple.n() != 4 {
        return Err(JnrError::UnsupportedSize(triple.n(), "4"));
    }
    let mut r = Report::new("separable", file, settings);
    if r.check_dimension(&triple, settings) {
        return Ok(r);
    }
    let dirs = jittered_sphere(num_dirs, settings.seed);
    let (directions, failed_directions) = separable_sweep(&triple, &dirs, settings);
    let scale = triple.scale();
    let mut max_gap = f64::NEG_INFINITY;
    let mut max_diff = 0.0f64;
    for e in &directions {
        max_gap = max_gap.max(e.ppt - e.w_support);
        max_diff = max_diff.max((e.seesaw - e.ppt).abs());
        if e.ppt < e.w_support - 1e-8 * scale.max(1.0) {
            r.push(Event::falsification(
                claims::SEPARABLE_INSIDE,
                format!("PPT support {:.3e} below the range support {:.3e} at {:?}", e.ppt, e.w_support, e.direction.u()),
            ));
        }
    }
    if max_diff >= 1e-6 {
        r.push(Event::falsification(
            claims::PPT_EQUALS_SEPARABLE,
            format!("see-saw and PPT supports differ by up to {max_diff:.3e}"),
        ));
    }
    let census = detect_faces(&triple, settings)?;
    let tangency = tangency_check(&triple, &census, 1e-6, settings)?;
    for f in tangency.faces.iter().filter(|f| !f.pass) {
        r.push(Event::falsification(
            claims::PRODUCT_STATE_ON_FACE,
            format!("face exposed by {:?} has no product state (excess {:.3e})", f.direction.u(), f.excess),
        ));
    }
    let flat_regions = probe.then(|| {
        let pts: Vec<[f64; 3]> = directions.iter().map(|e| e.ppt_point).collect();
        segment_probe(&BoundaryMesh::from_points(&pts, settings), &ProbeThresholds::default())
    });
    r.separable = Some(SeparableSummary {
        directions,
        failed_directions,
        max_gap: if max_gap.is_finite() { max_gap } else { 0.0 },
        max_seesaw_ppt_difference: max_diff,
        tangency,
        flat_regions,
    });
    Ok(r)
}

/// Per-direction supports; failed solves are listed by index.
pub fn separable_sweep(triple: &MatrixTriple, dirs: &[Direction], settings: &Settings) -> (Vec<SeparableEntry>, Vec<usize>) {
    use rayon::prelude::*;
    let rows: Vec<Result<SeparableEntry>> = dirs
        .par_iter()
        .enumerate()
        .map(|(i, u)| {
            let s = sep_support(triple, u, settings, i as u64)?;
            Ok(SeparableEntry {
                direction: *u,
                w_support: support_value(triple, u),
                seesaw: s.seesaw_value,
                ppt: s.ppt_value,
                ppt_point: measure(triple, &s.ppt_state)?,
            })
        })
        .collect();
    let mut ok = Vec::new();
    let mut failed = Vec::new();
    for (i, row) in rows.into_iter().enumerate() {
        match row {
            Ok(e) => ok.push(e),
            Err(e) => {
                log::warn!("separable support failed at direction {i}: {e}");
                failed.push(i);
            }
        }
    }
    (ok, failed)
}
