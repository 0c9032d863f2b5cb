//! Validated isotropic polynomial sections and the n = 2 structural
//! factorization σ = f·σ₀, τ = g·τ₀ with τ₀ = σ₀⌟ω.

use crate::ideal::{IdealError, PolyIdeal};
use crate::poly::{gcd_poly, MultiPoly};
use crate::quad::{HyperbolicSplitting, QuadError, QuadSpace};
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum SectionError {
    #[error("section is not isotropic: q(s,s) = {0}")]
    NotIsotropic(String),
    #[error("zero locus is not supported at the origin only: {0}")]
    ZeroLocusNotOriginOnly(String),
    #[error("bad torus weights: {0}")]
    BadWeights(String),
    #[error("component count {found} does not match the bundle rank {expected}")]
    WrongRank { expected: usize, found: usize },
    #[error("perturbation of the splitting plane failed after {0} retries")]
    PerturbationFailed(usize),
    #[error(transparent)]
    Quad(#[from] QuadError),
    #[error(transparent)]
    Ideal(#[from] IdealError),
}

/// Torus weight data: one nonzero weight per base variable and one fiber
/// weight per bundle coordinate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusWeights {
    pub base: Vec<i64>,
    pub fiber: Vec<i64>,
}

/// An isotropy-checked polynomial section with zero locus {0}.
#[derive(Debug, Clone)]
pub struct IsoSection {
    base_vars: Vec<String>,
    space: QuadSpace,
    components: Vec<MultiPoly>,
    torus: Option<TorusWeights>,
}

impl IsoSection {
    /// Validate and construct. Checks, in order: rank, the polynomial
    /// identity q(s,s) = 0, zero-dimensionality of (s₁,…,s_{2n}) with
    /// support exactly at the origin, and the torus weight conditions
    /// when weights are supplied.
    pub fn validate(
        base_vars: &[String],
        space: QuadSpace,
        components: Vec<MultiPoly>,
        torus: Option<TorusWeights>,
    ) -> Result<Self, SectionError> {
        let rank = space.dim();
        if components.len() != rank {
            return Err(SectionError::WrongRank { expected: rank, found: components.len() });
        }
        for c in &components {
            assert_eq!(c.vars(), base_vars, "component over wrong variable list");
        }
        // isotropy: Σ s_i B_ij s_j = 0 identically
        let qss = q_of_section(&space, &components);
        if !qss.is_zero() {
            return Err(SectionError::NotIsotropic(qss.to_string()));
        }
        // zero locus: finite colength and every base variable nilpotent in
        // the quotient
        let ideal = PolyIdeal::new(base_vars, components.clone());
        let colength = ideal
            .colength(crate::poly::MonomialOrder::GrevLex)
            .map_err(|e| match e {
                IdealError::NotZeroDimensional(v) => SectionError::ZeroLocusNotOriginOnly(
                    format!("the zero scheme is positive-dimensional (unbounded in {v})"),
                ),
                other => SectionError::Ideal(other),
            })?;
        if colength == 0 {
            return Err(SectionError::ZeroLocusNotOriginOnly(
                "the zero scheme is empty; a section must vanish at the origin".into(),
            ));
        }
        for (k, var) in base_vars.iter().enumerate() {
            let power = MultiPoly::var_idx(base_vars, k).pow(colength as u32);
            if !ideal.contains(&power)? {
                return Err(SectionError::ZeroLocusNotOriginOnly(format!(
                    "the zero scheme has a point off the origin ({var}^{colength} is not in the component ideal)"
                )));
            }
        }
        if let Some(w) = &torus {
            validate_weights(base_vars, &space, &components, w)?;
        }
        Ok(IsoSection { base_vars: base_vars.to_vec(), space, components, torus })
    }

    pub fn base_vars(&self) -> &[String] {
        &self.base_vars
    }

    pub fn n(&self) -> usize {
        self.base_vars.len()
    }

    pub fn space(&self) -> &QuadSpace {
        &self.space
    }

    pub fn components(&self) -> &[MultiPoly] {
        &self.components
    }

    pub fn torus(&self) -> Option<&TorusWeights> {
        self.torus.as_ref()
    }

    /// Same section over the orientation-reversed space.
    pub fn flipped(&self) -> Self {
        IsoSection { space: self.space.flipped(), ..self.clone() }
    }

    /// Scale every component by a nonzero rational.
    pub fn scaled(&self, c: &BigRational) -> Result<Self, SectionError> {
        assert!(!c.is_zero());
        Self::validate(
            &self.base_vars,
            self.space.clone(),
            self.components.iter().map(|p| p.scale(c)).collect(),
            self.torus.clone(),
        )
    }

    /// Colength of the component ideal (the classical length of Z(s)).
    pub fn zero_locus_length(&self) -> Result<usize, SectionError> {
        let ideal = PolyIdeal::new(&self.base_vars, self.components.clone());
        Ok(ideal.colength(crate::poly::MonomialOrder::GrevLex)?)
    }

    /// Components in splitting coordinates: (σ₁..σₙ, τ₁..τₙ) with the
    /// polynomial identity q(s,s) = Σ σᵢτᵢ.
    pub fn split_components(
        &self,
        splitting: &HyperbolicSplitting,
    ) -> (Vec<MultiPoly>, Vec<MultiPoly>) {
        let change = splitting.change_matrix();
        let inv = change.inverse().expect("splitting basis is invertible");
        let n = self.space.n();
        let mut sigma = Vec::with_capacity(n);
        let mut tau = Vec::with_capacity(n);
        for row in 0..2 * n {
            let mut acc = MultiPoly::zero(&self.base_vars);
            for col in 0..2 * n {
                if inv[(row, col)].is_zero() {
                    continue;
                }
                acc = acc.add(&self.components[col].scale(&inv[(row, col)]));
            }
            if row < n {
                sigma.push(acc);
            } else {
                tau.push(acc);
            }
        }
        (sigma, tau)
    }

    /// (σ, τ) for the canonical positive splitting.
    pub fn split_sigma_tau(&self) -> Result<(Vec<MultiPoly>, Vec<MultiPoly>), SectionError> {
        let splitting = self.space.hyperbolic_splitting()?;
        Ok(self.split_components(&splitting))
    }

    /// The n = 2 factorization; perturbs the splitting plane by seeded
    /// special-orthogonal conjugation when σ or τ is identically zero.
    pub fn factorize_n2(&self, seed: u64) -> Result<N2Factorization, SectionError> {
        assert_eq!(self.n(), 2, "the refinement is defined for n = 2");
        let base = self.space.hyperbolic_splitting()?;
        const RETRIES: usize = 8;
        for attempt in 0..=RETRIES {
            let splitting = if attempt == 0 {
                base.clone()
            } else {
                let g = self
                    .space
                    .random_special_orthogonal(seed.wrapping_add(attempt as u64))?;
                HyperbolicSplitting { lambda: g.mul(&base.lambda), mu: g.mul(&base.mu) }
            };
            let (sigma, tau) = self.split_components(&splitting);
            if sigma.iter().all(|p| p.is_zero()) || tau.iter().all(|p| p.is_zero()) {
                continue;
            }
            return Ok(factorize_split(&self.base_vars, &sigma, &tau, splitting));
        }
        Err(SectionError::PerturbationFailed(RETRIES))
    }
}

/// q(s,s) as a polynomial.
pub fn q_of_section(space: &QuadSpace, components: &[MultiPoly]) -> MultiPoly {
    let vars = components[0].vars().to_vec();
    let dim = space.dim();
    let mut acc = MultiPoly::zero(&vars);
    for i in 0..dim {
        for j in 0..dim {
            let b = &space.gram()[(i, j)];
            if b.is_zero() {
                continue;
            }
            acc = acc.add(&components[i].mul(&components[j]).scale(b));
        }
    }
    acc
}

fn validate_weights(
    base_vars: &[String],
    space: &QuadSpace,
    components: &[MultiPoly],
    w: &TorusWeights,
) -> Result<(), SectionError> {
    if w.base.len() != base_vars.len() {
        return Err(SectionError::BadWeights(format!(
            "expected {} base weights, found {}",
            base_vars.len(),
            w.base.len()
        )));
    }
    if w.fiber.len() != space.dim() {
        return Err(SectionError::BadWeights(format!(
            "expected {} fiber weights, found {}",
            space.dim(),
            w.fiber.len()
        )));
    }
    if w.base.iter().any(|&b| b == 0) {
        return Err(SectionError::BadWeights(
            "base weights must be nonzero so the fixed locus is the origin".into(),
        ));
    }
    for (i, s) in components.iter().enumerate() {
        if !s.is_weight_homogeneous(&w.base, w.fiber[i]) {
            return Err(SectionError::BadWeights(format!(
                "component {} is not weight-homogeneous of weight {}",
                i + 1,
                w.fiber[i]
            )));
        }
    }
    // equivariance of q: the form pairs only coordinates of opposite weight
    for i in 0..space.dim() {
        for j in 0..space.dim() {
            if !space.gram()[(i, j)].is_zero() && w.fiber[i] + w.fiber[j] != 0 {
                return Err(SectionError::BadWeights(format!(
                    "Gram entry ({},{}) pairs fiber weights {} and {} which do not cancel",
                    i + 1,
                    j + 1,
                    w.fiber[i],
                    w.fiber[j]
                )));
            }
        }
    }
    Ok(())
}

/// Contraction with the standard volume form on the splitting plane:
/// σ₀⌟ω = (−σ₀₂, σ₀₁) in the dual coordinates.
pub fn contract_omega(sigma: &[MultiPoly]) -> Vec<MultiPoly> {
    assert_eq!(sigma.len(), 2);
    vec![sigma[1].neg(), sigma[0].clone()]
}

/// The n = 2 factorization data.
#[derive(Debug, Clone)]
pub struct N2Factorization {
    pub f: MultiPoly,
    pub g: MultiPoly,
    pub sigma0: Vec<MultiPoly>,
    pub tau0: Vec<MultiPoly>,
    pub splitting: HyperbolicSplitting,
}

fn factorize_split(
    base_vars: &[String],
    sigma: &[MultiPoly],
    tau: &[MultiPoly],
    splitting: HyperbolicSplitting,
) -> N2Factorization {
    let f = gcd_poly(&sigma[0], &sigma[1]);
    let sigma0: Vec<MultiPoly> = sigma
        .iter()
        .map(|p| p.exact_div(&f).expect("gcd divides"))
        .collect();
    let rho = contract_omega(&sigma0);
    // τ is proportional to σ₀⌟ω (forced by isotropy); the scalar is g.
    // σ₀ is nonzero so some component of ρ is nonzero.
    let k = if rho[0].is_zero() { 1 } else { 0 };
    let g = if tau.iter().all(|p| p.is_zero()) {
        MultiPoly::zero(base_vars)
    } else {
        tau[k].exact_div(&rho[k]).expect("isotropy forces proportionality")
    };
    debug_assert_eq!(tau[0], g.mul(&rho[0]));
    debug_assert_eq!(tau[1], g.mul(&rho[1]));
    N2Factorization { f, g, sigma0, tau0: rho, splitting }
}

impl N2Factorization {
    /// Reconstruct (σ, τ) = (f·σ₀, g·τ₀).
    pub fn reconstruct(&self) -> (Vec<MultiPoly>, Vec<MultiPoly>) {
        (
            self.sigma0.iter().map(|p| p.mul(&self.f)).collect(),
            self.tau0.iter().map(|p| p.mul(&self.g)).collect(),
        )
    }
}

/// Standard variable names for the rank-4 bundle coordinates.
pub fn standard_fiber_names() -> Vec<String> {
    ["X", "Y", "Z", "W"].iter().map(|s| s.to_string()).collect()
}

/// The running family (x^d, y^d, x^i y^j, −x^{d−i} y^{d−j}) over the
/// standard rank-4 space, optionally with its torus weights
/// base (1, −1), fiber (d, −d, i−j, j−i). Fails validation exactly when a
/// component is a nonzero constant ((i,j) = (0,0) or (d,d)), so the zero
/// locus is empty.
pub fn try_running_example(
    d: u32,
    i: u32,
    j: u32,
    with_weights: bool,
) -> Result<IsoSection, SectionError> {
    assert!(d >= 1 && i <= d && j <= d);
    let vars: Vec<String> = vec!["x".into(), "y".into()];
    let x = MultiPoly::var(&vars, "x").unwrap();
    let y = MultiPoly::var(&vars, "y").unwrap();
    let components = vec![
        x.pow(d),
        y.pow(d),
        x.pow(i).mul(&y.pow(j)),
        x.pow(d - i).mul(&y.pow(d - j)).neg(),
    ];
    let torus = with_weights.then(|| TorusWeights {
        base: vec![1, -1],
        fiber: vec![d as i64, -(d as i64), i as i64 - j as i64, j as i64 - i as i64],
    });
    IsoSection::validate(&vars, QuadSpace::hyperbolic(2), components, torus)
}

/// `try_running_example` for triples known to be valid.
pub fn running_example(d: u32, i: u32, j: u32, with_weights: bool) -> IsoSection {
    try_running_example(d, i, j, with_weights).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    fn vars2() -> Vec<String> {
        vec!["x".into(), "y".into()]
    }

    fn section(comps: &[&str]) -> Result<IsoSection, SectionError> {
        let v = vars2();
        IsoSection::validate(
            &v,
            QuadSpace::hyperbolic(2),
            comps.iter().map(|s| parse_poly(&v, s).unwrap()).collect(),
            None,
        )
    }

    #[test]
    fn flagship_example_is_valid() {
        let s = section(&["x^2", "y^2", "x*y", "-x*y"]).unwrap();
        assert_eq!(s.zero_locus_length().unwrap(), 3);
    }

    #[test]
    fn sign_flipped_component_rejected() {
        match section(&["x^2", "y^2", "x*y", "x*y"]) {
            Err(SectionError::NotIsotropic(q)) => assert!(q.contains("x^2*y^2")),
            other => panic!("expected NotIsotropic, got {other:?}"),
        }
    }

    #[test]
    fn positive_dimensional_zero_locus_rejected() {
        assert!(matches!(
            section(&["x", "0", "0", "0"]),
            Err(SectionError::ZeroLocusNotOriginOnly(_))
        ));
    }

    #[test]
    fn off_origin_zero_rejected() {
        // (x(x-1), y, 0, 0)-style: shift the flagship so a zero moves off 0
        let r = section(&["x^2 - x", "y^2", "x*y - y", "-x*y"]);
        assert!(r.is_err());
    }

    #[test]
    fn split_flagship() {
        // (eg) with Λ = span(∂X, ∂W): σ = (x², −xy), τ = (y², xy)
        let s = section(&["x^2", "y^2", "x*y", "-x*y"]).unwrap();
        let (sigma, tau) = s.split_sigma_tau().unwrap();
        let v = vars2();
        assert_eq!(sigma[0], parse_poly(&v, "x^2").unwrap());
        assert_eq!(sigma[1], parse_poly(&v, "-x*y").unwrap());
        assert_eq!(tau[0], parse_poly(&v, "y^2").unwrap());
        assert_eq!(tau[1], parse_poly(&v, "x*y").unwrap());
        // ⟨σ, τ⟩ = 0 as polynomials
        let pairing = sigma[0].mul(&tau[0]).add(&sigma[1].mul(&tau[1]));
        assert!(pairing.is_zero());
    }

    #[test]
    fn factorize_running_example() {
        // f = x^{d−i}, g = y^j, σ₀ = (x^i, −y^{d−j}), τ₀ = (y^{d−j}, x^i)
        let v = vars2();
        for (d, i, j) in [(2u32, 1u32, 1u32), (3, 2, 1), (4, 1, 3), (3, 0, 2)] {
            let s = running_example(d, i, j, false);
            let f = s.factorize_n2(1).unwrap();
            let xs = |k: u32| MultiPoly::var(&v, "x").unwrap().pow(k);
            let ys = |k: u32| MultiPoly::var(&v, "y").unwrap().pow(k);
            assert_eq!(f.f, xs(d - i), "f for ({d},{i},{j})");
            assert_eq!(f.g, ys(j), "g for ({d},{i},{j})");
            assert_eq!(f.sigma0[0], xs(i));
            assert_eq!(f.sigma0[1], ys(d - j).neg());
            assert_eq!(f.tau0[0], ys(d - j));
            assert_eq!(f.tau0[1], xs(i));
            let (sigma, tau) = f.reconstruct();
            let (s_sigma, s_tau) = s.split_sigma_tau().unwrap();
            assert_eq!(sigma, s_sigma);
            assert_eq!(tau, s_tau);
        }
    }

    #[test]
    fn factorize_linear_case() {
        // s = (x, 0, y, 0): f = x, g = y, σ₀ = (1, 0), τ₀ = (0, 1)
        let s = section(&["x", "0", "y", "0"]).unwrap();
        let f = s.factorize_n2(1).unwrap();
        let v = vars2();
        assert_eq!(f.f, parse_poly(&v, "x").unwrap());
        assert_eq!(f.g, parse_poly(&v, "y").unwrap());
        assert_eq!(f.sigma0, vec![parse_poly(&v, "1").unwrap(), parse_poly(&v, "0").unwrap()]);
        assert_eq!(f.tau0, vec![parse_poly(&v, "0").unwrap(), parse_poly(&v, "1").unwrap()]);
    }

    #[test]
    fn factorize_needs_perturbation() {
        // s = (x, 0, 0, y) factors through the reference plane: τ ≡ 0, so
        // the splitting must be perturbed.
        let s = section(&["x", "0", "0", "y"]).unwrap();
        let f = s.factorize_n2(5).unwrap();
        let (sigma, tau) = f.reconstruct();
        assert!(sigma.iter().any(|p| !p.is_zero()));
        assert!(tau.iter().any(|p| !p.is_zero()));
        // lengths must be what the factored route predicts: d1 = 1, d2 = 0
        let d1 = PolyIdeal::new(&vars2(), f.sigma0.clone())
            .colength(crate::poly::MonomialOrder::GrevLex)
            .unwrap();
        let d2 = PolyIdeal::new(&vars2(), vec![f.f.clone(), f.g.clone()])
            .colength(crate::poly::MonomialOrder::GrevLex)
            .unwrap();
        assert_eq!((d1, d2), (1, 0));
    }

    #[test]
    fn weights_validated() {
        let s = running_example(3, 2, 1, true);
        assert!(s.torus().is_some());
        // wrong fiber weight is rejected
        let v = vars2();
        let comps: Vec<MultiPoly> = ["x^2", "y^2", "x*y", "-x*y"]
            .iter()
            .map(|p| parse_poly(&v, p).unwrap())
            .collect();
        let bad = IsoSection::validate(
            &v,
            QuadSpace::hyperbolic(2),
            comps,
            Some(TorusWeights { base: vec![1, -1], fiber: vec![2, -2, 1, -1] }),
        );
        assert!(matches!(bad, Err(SectionError::BadWeights(_))));
    }
}
