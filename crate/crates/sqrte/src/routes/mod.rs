//! Computation routes for the square-root Euler multiplicity and its n = 2
//! refinement. Each route is independent; the cross-validator compares
//! their outputs.

mod clifford;
mod deform;
mod incidence;
mod torus;

pub use clifford::route_rh7_clifford;
pub use deform::route_rh4_deform;
pub use incidence::route_oh5_incidence;
pub use torus::{route_oh8_torus, route_rh8_spin, SpinModel};

use crate::ideal::{IdealError, PolyIdeal};
use crate::poly::{gcd_poly, Homogeneity, MonomialOrder, MultiPoly};
use crate::quad::{QuadError, Subspace};
use crate::section::{IsoSection, SectionError};
use num_rational::BigRational;
use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum RouteError {
    #[error(transparent)]
    Section(#[from] SectionError),
    #[error(transparent)]
    Ideal(#[from] IdealError),
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error("section is not homogeneous of a single degree")]
    NotHomogeneous,
    #[error("internal consistency check failed: {0}")]
    ConsistencyFailure(String),
    #[error("Clifford composites are nonzero; the complex is not 2-periodic")]
    ComplexNotExact2Periodic,
    #[error("section does not factor through the given subspace")]
    SectionNotInSubspace,
    #[error("no torus-invariant coordinate maximal isotropic of positive sign")]
    NoInvariantIsotropic,
    #[error("equivariant Euler ratio is not an integer: {0}")]
    NonIntegerRatio(String),
    #[error("spin model weight constraint violated: {0}")]
    WeightConstraintViolated(String),
    #[error("torus weights are missing on the section")]
    MissingWeights,
    #[error("roots too close to separate at working precision")]
    CloseRoots,
    #[error("rank decision ambiguous at working precision")]
    RankAmbiguous,
    #[error("winding residual {0} exceeds 0.25; increase the sample budget")]
    ResidualTooLarge(f64),
    #[error("winding numbers of the real and imaginary parts disagree: {0} vs {1}")]
    WindingMismatch(i64, i64),
    #[error("{0}")]
    Unsupported(String),
}

/// The output record of a refined route.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefinedIndex {
    pub sqrt_e: i64,
    pub d1: Option<u64>,
    pub d2: Option<u64>,
    pub route: &'static str,
    pub diagnostics: Vec<String>,
}

impl RefinedIndex {
    pub fn refined(route: &'static str, d1: u64, d2: u64) -> Self {
        RefinedIndex {
            sqrt_e: d1 as i64 - d2 as i64,
            d1: Some(d1),
            d2: Some(d2),
            route,
            diagnostics: Vec::new(),
        }
    }

    pub fn plain(route: &'static str, sqrt_e: i64) -> Self {
        RefinedIndex { sqrt_e, d1: None, d2: None, route, diagnostics: Vec::new() }
    }

    pub fn with_note(mut self, note: String) -> Self {
        self.diagnostics.push(note);
        self
    }

    pub fn pair(&self) -> Option<(u64, u64)> {
        Some((self.d1?, self.d2?))
    }
}

/// Classical multiplicity baseline: the colength of (s₁,…,sₙ).
pub fn classical_hopf_length(vars: &[String], components: &[MultiPoly]) -> Result<usize, RouteError> {
    let ideal = PolyIdeal::new(vars, components.to_vec());
    Ok(ideal.colength(MonomialOrder::GrevLex)?)
}

/// d₁ = length Z(σ₀), d₂ = length Z(f, g), √e = d₁ − d₂.
pub fn route_rh3(section: &IsoSection, seed: u64) -> Result<RefinedIndex, RouteError> {
    let fac = section.factorize_n2(seed)?;
    let vars = section.base_vars().to_vec();
    let d1 = PolyIdeal::new(&vars, fac.sigma0.clone()).colength(MonomialOrder::GrevLex)?;
    let d2 =
        PolyIdeal::new(&vars, vec![fac.f.clone(), fac.g.clone()]).colength(MonomialOrder::GrevLex)?;
    Ok(RefinedIndex::refined("rh3", d1 as u64, d2 as u64)
        .with_note(format!("f = {}, g = {}", fac.f, fac.g))
        .with_note(format!("sigma0 = ({}, {})", fac.sigma0[0], fac.sigma0[1])))
}

/// √e = sign(Λ)·length Z(s) for a section lying in one constant maximal
/// isotropic subspace Λ.
pub fn route_oh3_factored(section: &IsoSection, lambda: &Subspace) -> Result<RefinedIndex, RouteError> {
    let space = section.space();
    if !space.is_maximal_isotropic(lambda)? {
        return Err(RouteError::Quad(QuadError::NotMaximalIsotropic));
    }
    // membership: every coefficient vector of s must solve against Λ's basis
    let vars = section.base_vars().to_vec();
    let n = space.n();
    let mut coords = vec![MultiPoly::zero(&vars); n];
    let mut seen: std::collections::BTreeSet<Vec<u32>> = Default::default();
    for comp in section.components() {
        for (mono, _) in comp.terms() {
            seen.insert(mono.clone());
        }
    }
    for mono in seen {
        let coeff_vec: Vec<BigRational> = section
            .components()
            .iter()
            .map(|c| {
                c.terms()
                    .find(|(m, _)| **m == mono)
                    .map(|(_, q)| q.clone())
                    .unwrap_or_else(|| BigRational::new(0.into(), 1.into()))
            })
            .collect();
        let Some(solution) = lambda.basis().solve(&coeff_vec) else {
            return Err(RouteError::SectionNotInSubspace);
        };
        for (k, c) in solution.iter().enumerate() {
            coords[k] = coords[k].add(&MultiPoly::monomial(&vars, mono.clone(), c.clone()));
        }
    }
    let length = PolyIdeal::new(&vars, coords).colength(MonomialOrder::GrevLex)?;
    let sign = space.isotropic_sign(lambda)?;
    Ok(RefinedIndex::plain("oh3", sign * length as i64)
        .with_note(format!("length Z(s) = {length}, sign = {sign:+}")))
}

/// Common homogeneous degree of the nonzero components.
pub fn section_degree(section: &IsoSection) -> Option<u32> {
    let mut degree = None;
    for c in section.components() {
        match c.homogeneity() {
            Homogeneity::ZeroPoly => {}
            Homogeneity::Degree(d) => match degree {
                None => degree = Some(d),
                Some(d0) if d0 == d => {}
                _ => return None,
            },
            Homogeneity::Inhomogeneous => return None,
        }
    }
    degree
}

/// Degree of a projective-line map given by a coprime-stripped pair of
/// binary forms; 0 when the stripped map is constant.
fn map_degree(pair: [&MultiPoly; 2]) -> Option<u32> {
    if pair[0].is_zero() && pair[1].is_zero() {
        return None;
    }
    if pair[0].is_zero() || pair[1].is_zero() {
        // [p : 0] or [0 : q]: constant map
        return Some(0);
    }
    let g = gcd_poly(pair[0], pair[1]);
    let a = pair[0].exact_div(&g).expect("gcd divides");
    a.total_degree()
}

/// Homogeneous n = 2 route: the two projective component maps have
/// degrees (d₋, d₊) and (d₁, d₂) = (d₋², d₊²).
pub fn route_rh5_homogeneous(
    section: &IsoSection,
) -> Result<(RefinedIndex, (u32, u32)), RouteError> {
    assert_eq!(section.n(), 2);
    let d = section_degree(section).ok_or(RouteError::NotHomogeneous)?;
    let splitting = section.space().hyperbolic_splitting()?;
    let (sigma, tau) = section.split_components(&splitting);
    // coordinates (X, W, Y, Z) = (σ₁, σ₂, τ₁, τ₂) on the split space
    // map to P(Λ₊): [X : W] = [−Z : Y]
    let m_plus = map_degree([&sigma[0], &sigma[1]])
        .or_else(|| map_degree([&tau[1].neg(), &tau[0]]))
        .ok_or_else(|| RouteError::ConsistencyFailure("both projections undefined".into()))?;
    // map to P(Λ₋): [X : Z] = [−W : Y]
    let m_minus = map_degree([&sigma[0], &tau[1]])
        .or_else(|| map_degree([&sigma[1].neg(), &tau[0]]))
        .ok_or_else(|| RouteError::ConsistencyFailure("both projections undefined".into()))?;
    let (d_minus, d_plus) = (m_plus, m_minus);
    if d_plus + d_minus != d {
        return Err(RouteError::ConsistencyFailure(format!(
            "d+ + d- = {} differs from the homogeneous degree {}",
            d_plus + d_minus,
            d
        )));
    }
    let idx = RefinedIndex::refined("rh5", (d_minus as u64).pow(2), (d_plus as u64).pow(2))
        .with_note(format!("(d-, d+) = ({d_minus}, {d_plus})"));
    Ok((idx, (d_minus, d_plus)))
}
