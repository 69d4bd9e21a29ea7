//! Tolerances, budgets and seeds used across the toolkit.
//!
//! Every numerical threshold lives here so that a report can echo the exact
//! configuration that produced it.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Settings {
    /// Asymmetry allowed before a matrix is rejected as non-hermitian,
    /// relative to its Frobenius norm.
    pub hermitian_tol: f64,
    /// Relative eigenvalue threshold for `numerical_rank`.
    pub rank_tol: f64,
    /// Orthonormality defect accepted for compression bases.
    pub orthonormal_tol: f64,
    /// Eigenvalues within `cluster_tol * max(1, |pencil|)` of the smallest one
    /// belong to the minimal cluster.
    pub cluster_tol: f64,
    /// Relative singular-value threshold for affine face dimensions.
    pub face_dim_tol: f64,
    /// Coplanarity tolerance of the hull, relative to the point-cloud diameter.
    pub hull_tol: f64,

    /// Number of Fibonacci starts for the multi-start face searches.
    pub search_grid: usize,
    /// Nelder–Mead iteration cap per start.
    pub nelder_mead_iters: usize,
    /// Accept a coalescence point when the cluster spread is below
    /// `accept_gap * |pencil|`.
    pub accept_gap: f64,
    /// Tolerance for the rank-one and principal-minor checks.
    pub minor_tol: f64,
    /// Angular distance below which two face directions are merged.
    pub dedup_angle: f64,
    /// More than this many distinct minima triggers a continuum warning.
    pub continuum_limit: usize,
    /// Ellipse-fit acceptance, relative to the axis scale.
    pub ellipse_fit_tol: f64,

    /// Leading-minor threshold for the irreducibility Gram matrix.
    pub irreducible_tol: f64,
    /// Eigenvalue coincidence tolerance in the ellipse criterion, relative to
    /// the spectral diameter.
    pub ellipse_coincide_tol: f64,
    /// Area threshold (relative to squared diameter) for a proper triangle.
    pub triangle_area_tol: f64,
    /// Residual threshold for a common eigenvector.
    pub common_eigvec_tol: f64,
    /// Boundary band for the droplet/ellipse decision.
    pub droplet_tol: f64,
    /// Angular samples of the loaf scan.
    pub loaf_scan: usize,

    /// Probe directions for corner detection.
    pub corner_probes: usize,
    /// Distance within which a probe's support point is identified with the
    /// queried point.
    pub corner_point_tol: f64,
    /// Relative singular-value threshold for the normal-cone rank.
    pub cone_rank_tol: f64,
    /// Tolerance for joint-eigenvector residuals and block structure.
    pub joint_tol: f64,

    /// Random restarts of the see-saw optimizer.
    pub seesaw_restarts: usize,
    /// See-saw stopping threshold on the value decrease.
    pub seesaw_tol: f64,
    /// See-saw iteration cap per restart.
    pub seesaw_max_iter: usize,
    /// Initial barrier weight.
    pub barrier_mu0: f64,
    /// Final barrier weight.
    pub barrier_mu_min: f64,
    /// Barrier weight reduction factor.
    pub barrier_shrink: f64,

    /// Base seed for every randomized procedure.
    pub seed: u64,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            hermitian_tol: 1e-9,
            rank_tol: 1e-8,
            orthonormal_tol: 1e-10,
            cluster_tol: 1e-7,
            face_dim_tol: 1e-7,
            hull_tol: 1e-9,
            search_grid: 512,
            nelder_mead_iters: 200,
            accept_gap: 1e-8,
            minor_tol: 1e-6,
            dedup_angle: 1e-4,
            continuum_limit: 20,
            ellipse_fit_tol: 1e-6,
            irreducible_tol: 1e-10,
            ellipse_coincide_tol: 1e-7,
            triangle_area_tol: 1e-9,
            common_eigvec_tol: 1e-8,
            droplet_tol: 1e-8,
            loaf_scan: 720,
            corner_probes: 2000,
            corner_point_tol: 1e-6,
            cone_rank_tol: 1e-4,
            joint_tol: 1e-8,
            seesaw_restarts: 32,
            seesaw_tol: 1e-12,
            seesaw_max_iter: 2000,
            barrier_mu0: 1.0,
            barrier_mu_min: 1e-10,
            barrier_shrink: 4.0,
            seed: 2137,
        }
    }
}

impl Settings {
    /// Overrides the detection tolerances with a single value. Used by the
    /// CLI `--tol` flag.
    pub fn with_detection_tol(mut self, tol: f64) -> Self {
        self.cluster_tol = tol;
        self.face_dim_tol = tol;
        self.accept_gap = tol;
        self.minor_tol = tol;
        self.rank_tol = tol;
        self
    }
}
