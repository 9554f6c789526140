//! Green-tensor scattering formalism: TE/TM projectors, their trace
//! contractions, the plane-wave coefficient integrals for on-axis atoms and
//! the position-space oracle for arbitrary geometries.

pub mod plane_wave;
pub mod position;
pub mod projector;
pub mod trace;

pub use plane_wave::{
    collinear_system, three_body_axial_coefficient, three_body_collinear_coefficient, two_body_coefficient,
    ThreeBodyTerm,
};
pub use position::{position_space_green, three_body_total_general, two_body_total_oracle};
pub use projector::{unit_vectors, EuclideanWaveVector, Polarization, ProjectorPair, WaveVector};
pub use trace::{pair_trace, triple_trace, PairTrace, TripleTerm};
