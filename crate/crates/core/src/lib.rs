//! Invariant calculators for symplectic instanton homology of closed 3-manifolds.

pub mod error;
pub mod fieldtheory;
pub mod gradedab;
pub mod hsicalc;
pub mod grpres;
pub mod linkdiag;
pub mod repvar;
pub mod su2;

pub use error::{Error, Result};
pub use gradedab::{GradedAbelianGroup, Grading};
pub use grpres::{h1, h1_order, pi1, quotient_by_square, Family, ManifoldDesc, Presentation, Word, H1};
pub use linkdiag::{determinant, PDDiagram};
pub use su2::{exp_su2, log_su2, orbit_signature, SU2Element, Su2Vector};
pub use hsicalc::{certify_minimal, euler_check, hsi, HSIResult, Minimality};
pub use fieldtheory::{
    compose_check, correspondence_of, generalized_intersections, lens_chain, member, CobordismChain, CorrespondenceExpr,
    HolonomyTuple, Piece,
};
