//! Exact-arithmetic computation of the square-root Euler multiplicity of
//! an isotropic polynomial section of a trivial SO(2n, C) bundle over C^n,
//! together with its refinement (d1, d2) when n = 2.
//!
//! The invariant is computed by several independent routes (ideal
//! colengths, Clifford complex cohomology, torus localisation, normal-cone
//! cycle classes, signed deformation counts, winding numbers) which are
//! cross-validated against each other.

pub mod cone;
pub mod ideal;
pub mod linalg;
pub mod numeric;
pub mod poly;
pub mod quad;
pub mod rng;
pub mod routes;
pub mod section;
pub mod winding;

pub use ideal::{PolyIdeal, PolyModule};
pub use poly::{gcd_poly, parse_poly, resultant, MonomialOrder, MultiPoly};
pub use quad::{QuadSpace, Subspace};
pub use routes::{RefinedIndex, RouteError};
pub use section::{IsoSection, TorusWeights};
