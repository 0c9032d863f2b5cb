//! Normal-cone geometry: the flat-limit ideal of lim_{t→∞} Γ_{ts}, the
//! bidegree of the projectivized cone on the rank-4 quadric, and Segre
//! numbers.

use crate::ideal::{fresh_var, IdealError, PolyIdeal};
use crate::poly::{MonomialOrder, MultiPoly};
use crate::rng::SeededRng;
use crate::section::{IsoSection, SectionError};
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum ConeError {
    #[error(transparent)]
    Ideal(#[from] IdealError),
    #[error(transparent)]
    Section(#[from] SectionError),
    #[error(transparent)]
    Quad(#[from] crate::quad::QuadError),
    #[error("projectivized cone is not a curve (affine cone dimension {0})")]
    WrongDimension(usize),
    #[error("generic ruling slices disagree across seeds")]
    DegenerateSlice,
}

/// The ideal of the normal cone C_{Z(s)/C^n} inside base × fiber space.
#[derive(Debug, Clone)]
pub struct ConeData {
    /// base variables then fiber variables
    pub vars: Vec<String>,
    pub base_count: usize,
    pub ideal: PolyIdeal,
}

impl ConeData {
    pub fn fiber_indices(&self) -> Vec<usize> {
        (self.base_count..self.vars.len()).collect()
    }
}

/// Fiber coordinate names: X, Y, Z, W for rank 4, E1..E2n otherwise,
/// renamed when they collide with base variables.
fn fiber_names(base: &[String], rank: usize) -> Vec<String> {
    let candidates: Vec<String> = if rank == 4 {
        ["X", "Y", "Z", "W"].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=rank).map(|i| format!("E{i}")).collect()
    };
    candidates
        .into_iter()
        .map(|name| {
            if base.contains(&name) {
                format!("_{name}")
            } else {
                name
            }
        })
        .collect()
}

/// Flat limit by saturation: adjoin u, impose u·Eᵢ = sᵢ(x), saturate by u
/// and set u = 0.
pub fn normal_cone_ideal(section: &IsoSection) -> Result<ConeData, ConeError> {
    let base = section.base_vars().to_vec();
    let rank = section.space().dim();
    let fiber = fiber_names(&base, rank);
    let mut vars = base.clone();
    vars.extend(fiber.iter().cloned());
    let aux = fresh_var(&vars, "_u");
    let mut ext = vars.clone();
    ext.push(aux.clone());
    let u_idx = ext.len() - 1;
    let u = MultiPoly::var_idx(&ext, u_idx);
    let mut gens = Vec::with_capacity(rank);
    for (i, fiber_name) in fiber.iter().enumerate() {
        let e = MultiPoly::var(&ext, fiber_name).unwrap();
        let s = section.components()[i].extend_vars(&ext);
        gens.push(u.mul(&e).sub(&s));
    }
    let graph = PolyIdeal::new(&ext, gens);
    let saturated = graph.saturate(&u)?;
    let zero = MultiPoly::constant(&ext, BigRational::zero());
    let limit_gens: Vec<MultiPoly> = saturated
        .gens()
        .iter()
        .map(|g| {
            g.extend_vars(&ext)
                .substitute(
                    &(0..ext.len())
                        .map(|k| {
                            if k == u_idx {
                                zero.clone()
                            } else {
                                MultiPoly::var_idx(&ext, k)
                            }
                        })
                        .collect::<Vec<_>>(),
                )
                .restrict_vars(&vars)
                .expect("u eliminated")
        })
        .filter(|g| !g.is_zero())
        .collect();
    Ok(ConeData {
        vars: vars.clone(),
        base_count: base.len(),
        ideal: PolyIdeal::new(&vars, limit_gens),
    })
}

/// q written in the fiber variables of the cone ring.
pub fn fiber_quadric(section: &IsoSection, cone: &ConeData) -> MultiPoly {
    let gram = section.space().gram();
    let mut q = MultiPoly::zero(&cone.vars);
    let base = cone.base_count;
    for i in 0..section.space().dim() {
        for j in 0..section.space().dim() {
            if gram[(i, j)].is_zero() {
                continue;
            }
            let ei = MultiPoly::var_idx(&cone.vars, base + i);
            let ej = MultiPoly::var_idx(&cone.vars, base + j);
            q = q.add(&ei.mul(&ej).scale(&gram[(i, j)]));
        }
    }
    q
}

/// Segre number ∫_{P(C)} H^{n−1}: the relative degree of the cone over
/// the fat base point.
pub fn segre_class(section: &IsoSection, seed: u64) -> Result<usize, ConeError> {
    let cone = normal_cone_ideal(section)?;
    Ok(cone.ideal.relative_degree(&cone.fiber_indices(), seed)?)
}

/// Bidegree (α, β) of [P(C)] = α[P(Λ₊)] + β[P(Λ₋)] on the rank-4 quadric,
/// and √e = α − β. Generic ruling members with 3-seed agreement.
pub fn cone_bidegree_n2(
    section: &IsoSection,
    cone: &ConeData,
    seed: u64,
) -> Result<((usize, usize), i64), ConeError> {
    assert_eq!(section.space().n(), 2);
    let dim = cone.ideal.affine_dimension()?;
    if dim != 2 {
        return Err(ConeError::WrongDimension(dim));
    }
    let splitting = section.space().hyperbolic_splitting()?;
    let change = splitting.change_matrix();
    let inv = change.inverse().expect("splitting invertible");
    // a split-coordinate linear form with row r becomes the ambient form
    // r · change⁻¹ on the fiber variables
    let split_row_to_poly = |row: [BigRational; 4]| -> MultiPoly {
        let mut p = MultiPoly::zero(&cone.vars);
        for amb in 0..4 {
            let mut coeff = BigRational::zero();
            for (s, r) in row.iter().enumerate() {
                coeff += r * &inv[(s, amb)];
            }
            if !coeff.is_zero() {
                p = p.add(&MultiPoly::var_idx(&cone.vars, cone.base_count + amb).scale(&coeff));
            }
        }
        p
    };
    let count_with = |alpha_side: bool, rng: &mut SeededRng| -> Result<usize, ConeError> {
        let c1 = rng.nonzero_rational(9);
        let c2 = rng.nonzero_rational(9);
        // split layout (σ1, σ2, τ1, τ2) = (X, W, Y, Z)
        let (row_a, row_b) = if alpha_side {
            // ruling {p₊ = [c1:c2]}: c2·X − c1·W and c2·Z + c1·Y
            (
                [c2.clone(), -c1.clone(), BigRational::zero(), BigRational::zero()],
                [BigRational::zero(), BigRational::zero(), c1.clone(), c2.clone()],
            )
        } else {
            // ruling {p₋ = [c1:c2]}: c2·X − c1·Z and c2·W + c1·Y
            (
                [c2.clone(), BigRational::zero(), BigRational::zero(), -c1.clone()],
                [BigRational::zero(), c2.clone(), c1.clone(), BigRational::zero()],
            )
        };
        let mut gens = cone.ideal.gens().to_vec();
        gens.push(split_row_to_poly(row_a));
        gens.push(split_row_to_poly(row_b));
        // generic affine chart on the fiber
        let chart = crate::ideal::random_linear_form_in(
            &cone.vars,
            &cone.fiber_indices(),
            rng,
            true,
        );
        gens.push(chart.sub(&MultiPoly::one(&cone.vars)));
        let sliced = PolyIdeal::new(&cone.vars, gens);
        match sliced.colength(MonomialOrder::GrevLex) {
            Ok(v) => Ok(v),
            Err(IdealError::NotZeroDimensional(_)) => Err(ConeError::DegenerateSlice),
            Err(e) => Err(ConeError::Ideal(e)),
        }
    };
    for batch in 0..4u64 {
        let mut alphas = Vec::new();
        let mut betas = Vec::new();
        let mut degenerate = false;
        for attempt in 0..3u64 {
            let mut rng = SeededRng::derive(seed, 0xB1DE6 + 31 * batch + attempt);
            match (count_with(true, &mut rng), count_with(false, &mut rng)) {
                (Ok(a), Ok(b)) => {
                    alphas.push(a);
                    betas.push(b);
                }
                (Err(ConeError::DegenerateSlice), _) | (_, Err(ConeError::DegenerateSlice)) => {
                    degenerate = true;
                    break;
                }
                (Err(e), _) | (_, Err(e)) => return Err(e),
            }
        }
        if !degenerate
            && alphas.windows(2).all(|w| w[0] == w[1])
            && betas.windows(2).all(|w| w[0] == w[1])
        {
            let (alpha, beta) = (alphas[0], betas[0]);
            return Ok(((alpha, beta), alpha as i64 - beta as i64));
        }
    }
    Err(ConeError::DegenerateSlice)
}
