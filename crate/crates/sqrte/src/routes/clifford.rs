//! K-theoretic route: the 2-periodic Clifford complex on ⋀Λ* with
//! differential s₂∧ + s₁⌟, and the lengths of its even and odd cohomology.

use super::{RefinedIndex, RouteError};
use crate::ideal::{matrix_apply, module_kernel, subquotient_length, PolyModule, VecPoly};
use crate::poly::MultiPoly;
use crate::section::IsoSection;

/// Subsets of {0..n−1} by parity, each sorted ascending; the basis of
/// ⋀^even Λ* and ⋀^odd Λ*.
fn parity_bases(n: usize) -> (Vec<u32>, Vec<u32>) {
    let mut even = Vec::new();
    let mut odd = Vec::new();
    for mask in 0u32..(1 << n) {
        if mask.count_ones() % 2 == 0 {
            even.push(mask);
        } else {
            odd.push(mask);
        }
    }
    (even, odd)
}

/// Sign of wedging μ̂_j onto the sorted subset `mask` (None if j ∈ mask).
fn wedge_sign(mask: u32, j: u32) -> Option<i64> {
    if mask & (1 << j) != 0 {
        return None;
    }
    let below = (mask & ((1 << j) - 1)).count_ones();
    Some(if below % 2 == 0 { 1 } else { -1 })
}

/// Sign of contracting λ_j into the sorted subset `mask` (None if j ∉ mask).
fn contract_sign(mask: u32, j: u32) -> Option<i64> {
    if mask & (1 << j) == 0 {
        return None;
    }
    let below = (mask & ((1 << j) - 1)).count_ones();
    Some(if below % 2 == 0 { 1 } else { -1 })
}

/// Matrix of Clifford multiplication by (σ, τ) from the span of `from`
/// subsets to the span of `to` subsets.
fn clifford_matrix(
    vars: &[String],
    sigma: &[MultiPoly],
    tau: &[MultiPoly],
    from: &[u32],
    to: &[u32],
) -> Vec<Vec<MultiPoly>> {
    let index_of = |mask: u32| to.iter().position(|&m| m == mask);
    let mut matrix = vec![vec![MultiPoly::zero(vars); from.len()]; to.len()];
    for (col, &mask) in from.iter().enumerate() {
        for j in 0..sigma.len() as u32 {
            // τ_j μ̂_j ∧ e_mask
            if let Some(sign) = wedge_sign(mask, j) {
                let target = mask | (1 << j);
                if let Some(row) = index_of(target) {
                    let term = if sign > 0 {
                        tau[j as usize].clone()
                    } else {
                        tau[j as usize].neg()
                    };
                    matrix[row][col] = matrix[row][col].add(&term);
                }
            }
            // σ_j λ_j ⌟ e_mask
            if let Some(sign) = contract_sign(mask, j) {
                let target = mask & !(1 << j);
                if let Some(row) = index_of(target) {
                    let term = if sign > 0 {
                        sigma[j as usize].clone()
                    } else {
                        sigma[j as usize].neg()
                    };
                    matrix[row][col] = matrix[row][col].add(&term);
                }
            }
        }
    }
    matrix
}

fn compose_is_zero(
    vars: &[String],
    a: &[Vec<MultiPoly>],
    b: &[Vec<MultiPoly>],
) -> bool {
    // a ∘ b: apply b's columns then a
    let cols = b.first().map_or(0, |r| r.len());
    for j in 0..cols {
        let col = VecPoly { comps: b.iter().map(|row| row[j].clone()).collect() };
        let image = matrix_apply(a, &col);
        if !image.is_zero() {
            return false;
        }
    }
    let _ = vars;
    true
}

fn cohomology_length(
    vars: &[String],
    outgoing: &[Vec<MultiPoly>],
    incoming: &[Vec<MultiPoly>],
    budget: usize,
) -> Result<usize, RouteError> {
    let kernel = module_kernel(vars, outgoing, budget)?;
    let rank = outgoing.first().map_or(0, |r| r.len());
    let image_gens: Vec<VecPoly> = (0..incoming.first().map_or(0, |r| r.len()))
        .map(|j| VecPoly { comps: incoming.iter().map(|row| row[j].clone()).collect() })
        .collect();
    let image = PolyModule::new(vars, rank, image_gens);
    Ok(subquotient_length(&kernel, &image, budget)?)
}

/// Lengths of H⁺ and H⁻ of the Clifford complex. For n = 2 these are the
/// refined pair (d₁, d₂); for larger n only the difference is meaningful
/// and the refined fields stay empty.
pub fn route_rh7_clifford(section: &IsoSection, budget: usize) -> Result<RefinedIndex, RouteError> {
    let n = section.n();
    let splitting = section.space().hyperbolic_splitting()?;
    let (sigma, tau) = section.split_components(&splitting);
    let vars = section.base_vars().to_vec();
    let (even, odd) = parity_bases(n);
    let even_to_odd = clifford_matrix(&vars, &sigma, &tau, &even, &odd);
    let odd_to_even = clifford_matrix(&vars, &sigma, &tau, &odd, &even);
    if !compose_is_zero(&vars, &even_to_odd, &odd_to_even)
        || !compose_is_zero(&vars, &odd_to_even, &even_to_odd)
    {
        return Err(RouteError::ComplexNotExact2Periodic);
    }
    let h_plus = cohomology_length(&vars, &even_to_odd, &odd_to_even, budget)?;
    let h_minus = cohomology_length(&vars, &odd_to_even, &even_to_odd, budget)?;
    let idx = if n == 2 {
        RefinedIndex::refined("rh7", h_plus as u64, h_minus as u64)
    } else {
        RefinedIndex::plain("rh7", h_plus as i64 - h_minus as i64)
    };
    Ok(idx.with_note(format!("length H+ = {h_plus}, length H- = {h_minus}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideal::DEFAULT_STEP_BUDGET;
    use crate::poly::parse_poly;
    use crate::quad::QuadSpace;
    use crate::routes::route_rh3;
    use crate::section::{running_example, IsoSection};

    #[test]
    fn signs_and_bases() {
        assert_eq!(parity_bases(2), (vec![0b00, 0b11], vec![0b01, 0b10]));
        assert_eq!(wedge_sign(0b01, 1), Some(-1));
        assert_eq!(wedge_sign(0b10, 0), Some(1));
        assert_eq!(contract_sign(0b11, 0), Some(1));
        assert_eq!(contract_sign(0b11, 1), Some(-1));
    }

    #[test]
    fn matrices_match_running_example() {
        // the two 2×2 matrices of the (d,i,j) family in the standard basis
        let s = running_example(3, 2, 1, false);
        let splitting = s.space().hyperbolic_splitting().unwrap();
        let (sigma, tau) = s.split_components(&splitting);
        let v = s.base_vars().to_vec();
        let (even, odd) = parity_bases(2);
        let fwd = clifford_matrix(&v, &sigma, &tau, &even, &odd);
        let p = |t: &str| parse_poly(&v, t).unwrap();
        // columns e_∅, e_{12}; rows e_1, e_2: [[τ₁, −σ₂], [τ₂, σ₁]]
        assert_eq!(fwd[0][0], p("y^3"));
        assert_eq!(fwd[0][1], p("x*y^2"));
        assert_eq!(fwd[1][0], p("x^2*y"));
        assert_eq!(fwd[1][1], p("x^3"));
        let bwd = clifford_matrix(&v, &sigma, &tau, &odd, &even);
        // [[σ₁, σ₂], [−τ₂, τ₁]]
        assert_eq!(bwd[0][0], p("x^3"));
        assert_eq!(bwd[0][1], p("-x*y^2"));
        assert_eq!(bwd[1][0], p("-x^2*y"));
        assert_eq!(bwd[1][1], p("y^3"));
    }

    #[test]
    fn rh7_running_examples() {
        for (d, i, j) in [(2u32, 1u32, 1u32), (3, 2, 1), (2, 1, 0), (3, 0, 2)] {
            let s = running_example(d, i, j, false);
            let idx = route_rh7_clifford(&s, DEFAULT_STEP_BUDGET).unwrap();
            let expect = ((i * (d - j)) as u64, (j * (d - i)) as u64);
            assert_eq!(idx.pair(), Some(expect), "(d,i,j) = ({d},{i},{j})");
        }
    }

    #[test]
    fn rh7_orientation_flip_swaps_pair() {
        let s = running_example(3, 2, 1, false);
        assert_eq!(route_rh7_clifford(&s, DEFAULT_STEP_BUDGET).unwrap().pair(), Some((4, 1)));
        assert_eq!(
            route_rh7_clifford(&s.flipped(), DEFAULT_STEP_BUDGET).unwrap().pair(),
            Some((1, 4))
        );
    }

    #[test]
    fn rh7_agrees_with_rh3_on_linear() {
        let v: Vec<String> = vec!["x".into(), "y".into()];
        let s = IsoSection::validate(
            &v,
            QuadSpace::hyperbolic(2),
            ["x", "0", "y", "0"].iter().map(|t| parse_poly(&v, t).unwrap()).collect(),
            None,
        )
        .unwrap();
        let idx = route_rh7_clifford(&s, DEFAULT_STEP_BUDGET).unwrap();
        assert_eq!(idx.pair(), Some((0, 1)));
        assert_eq!(idx.sqrt_e, route_rh3(&s, 1).unwrap().sqrt_e);
    }
}
