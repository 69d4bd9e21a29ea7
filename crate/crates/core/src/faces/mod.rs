//! Flat faces of W for 4×4 triples.

pub mod census;
pub mod intersect;
pub mod search;
pub mod tuples;

pub use census::{detect_faces, elliptic_census, rank3_census, EllipseParams, FaceCensus, FaceRecord, Segment};
pub use intersect::{face_distance, intersect_faces, subspace_intersection, FaceDistance, FaceIntersection, IntersectionKind};
pub use tuples::{compress_to_pair, face_pair, find_rank1_tuples, FacePair, RankOneTuple, TupleSearch};
