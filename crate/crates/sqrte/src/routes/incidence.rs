//! Homogeneous incidence route: d± counts the points of P^{n−1} carried
//! into a generic maximal isotropic plane of each sign, and
//! √e = (−1)^{n−1}·d·(d₊ − d₋) with the check d₊ + d₋ = d^{n−1}.
//!
//! When the form has no rational splitting the planes live over Q(i); the
//! computation then adjoins a variable t with t² + 1 to the ideal, which
//! realizes Q(i)[x] as Q[x, t]/(t² + 1), and halves the final count.

use super::{section_degree, RefinedIndex, RouteError};
use crate::ideal::{IdealError, PolyIdeal};
use crate::linalg::QMatrix;
use crate::poly::MultiPoly;
use crate::quad::{GaussQ, QuadError};
use crate::section::IsoSection;
use num_rational::BigRational;
use num_traits::Zero;

pub fn route_oh5_incidence(
    section: &IsoSection,
    seed: u64,
) -> Result<(RefinedIndex, (u64, u64)), RouteError> {
    let d = section_degree(section).ok_or(RouteError::NotHomogeneous)? as u64;
    let n = section.n() as u32;
    let space = section.space();
    match space.hyperbolic_splitting() {
        Ok(splitting) => {
            let lambda_cols = splitting.lambda.columns();
            let mu_cols = splitting.mu.columns();
            let d_plus = incidence_count_rational(section, &lambda_cols, &mu_cols, false, seed)?;
            let d_minus = incidence_count_rational(section, &lambda_cols, &mu_cols, true, seed)?;
            finish(section, d, n, d_plus, d_minus, "rational splitting")
        }
        Err(QuadError::NoRationalSplitting(_)) | Err(QuadError::RefRequired) => {
            let (lambdas, mus) = space.gaussian_splitting()?;
            let d_plus = incidence_count_gauss(section, &lambdas, &mus, false, seed)?;
            let d_minus = incidence_count_gauss(section, &lambdas, &mus, true, seed)?;
            finish(section, d, n, d_plus, d_minus, "Gaussian splitting (sign fixed by convention)")
        }
        Err(e) => Err(RouteError::Quad(e)),
    }
}

fn finish(
    _section: &IsoSection,
    d: u64,
    n: u32,
    d_plus: u64,
    d_minus: u64,
    note: &str,
) -> Result<(RefinedIndex, (u64, u64)), RouteError> {
    let expected = d.pow(n - 1);
    if d_plus + d_minus != expected {
        return Err(RouteError::ConsistencyFailure(format!(
            "d+ + d- = {} differs from d^(n-1) = {expected}",
            d_plus + d_minus
        )));
    }
    let sign = if (n - 1) % 2 == 0 { 1i64 } else { -1i64 };
    let sqrt_e = sign * d as i64 * (d_plus as i64 - d_minus as i64);
    let idx = RefinedIndex::plain("oh5", sqrt_e)
        .with_note(format!("(d+, d-) = ({d_plus}, {d_minus}), {note}"));
    Ok((idx, (d_plus, d_minus)))
}

/// Swap the last hyperbolic pair: switches the family of the plane.
fn swapped<T: Clone>(lambda: &[T], mu: &[T]) -> Vec<T> {
    let mut cols = lambda.to_vec();
    let k = cols.len() - 1;
    cols[k] = mu[k].clone();
    cols
}

fn incidence_count_rational(
    section: &IsoSection,
    lambda_cols: &[Vec<BigRational>],
    mu_cols: &[Vec<BigRational>],
    negative: bool,
    seed: u64,
) -> Result<u64, RouteError> {
    // an unlucky rotation can align the plane with the section image;
    // retry a bounded number of fresh seed batches before giving up
    for batch in 0..3u64 {
        match incidence_batch_rational(
            section,
            lambda_cols,
            mu_cols,
            negative,
            seed.wrapping_add(1000 * batch),
        ) {
            Ok(v) => return Ok(v),
            Err(RouteError::Ideal(IdealError::DegenerateSlice)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(RouteError::Ideal(IdealError::DegenerateSlice))
}

fn incidence_batch_rational(
    section: &IsoSection,
    lambda_cols: &[Vec<BigRational>],
    mu_cols: &[Vec<BigRational>],
    negative: bool,
    seed: u64,
) -> Result<u64, RouteError> {
    let space = section.space();
    let base_plane = if negative {
        QMatrix::from_columns(swapped(lambda_cols, mu_cols))
    } else {
        QMatrix::from_columns(lambda_cols.to_vec())
    };
    let mut counts = Vec::new();
    for attempt in 0..3u64 {
        let g = space.random_special_orthogonal(seed.wrapping_add(41 * attempt + 1))?;
        let plane = g.mul(&base_plane);
        // membership conditions: rows of planeᵀ·B applied to s
        let conditions = plane.transpose().mul(space.gram());
        let vars = section.base_vars().to_vec();
        let mut gens = Vec::new();
        for r in 0..conditions.rows() {
            let mut poly = MultiPoly::zero(&vars);
            for c in 0..conditions.cols() {
                if conditions[(r, c)].is_zero() {
                    continue;
                }
                poly = poly.add(&section.components()[c].scale(&conditions[(r, c)]));
            }
            gens.push(poly);
        }
        let ideal = PolyIdeal::new(&vars, gens);
        let count = match ideal.projective_degree(seed.wrapping_add(7 * attempt)) {
            Ok(v) => v as u64,
            Err(IdealError::EmptyScheme) => 0,
            Err(IdealError::DegenerateSlice) => {
                return Err(RouteError::Ideal(IdealError::DegenerateSlice))
            }
            Err(e) => return Err(RouteError::Ideal(e)),
        };
        counts.push(count);
    }
    if counts[0] == counts[1] && counts[1] == counts[2] {
        Ok(counts[0])
    } else {
        Err(RouteError::Ideal(IdealError::DegenerateSlice))
    }
}

fn incidence_count_gauss(
    section: &IsoSection,
    lambdas: &[Vec<GaussQ>],
    mus: &[Vec<GaussQ>],
    negative: bool,
    seed: u64,
) -> Result<u64, RouteError> {
    for batch in 0..3u64 {
        match incidence_batch_gauss(section, lambdas, mus, negative, seed.wrapping_add(1000 * batch))
        {
            Ok(v) => return Ok(v),
            Err(RouteError::Ideal(IdealError::DegenerateSlice)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(RouteError::Ideal(IdealError::DegenerateSlice))
}

fn incidence_batch_gauss(
    section: &IsoSection,
    lambdas: &[Vec<GaussQ>],
    mus: &[Vec<GaussQ>],
    negative: bool,
    seed: u64,
) -> Result<u64, RouteError> {
    let space = section.space();
    let dim = space.dim();
    let plane_cols: Vec<Vec<GaussQ>> =
        if negative { swapped(lambdas, mus) } else { lambdas.to_vec() };
    let mut counts = Vec::new();
    for attempt in 0..3u64 {
        let g = space.random_special_orthogonal(seed.wrapping_add(41 * attempt + 1))?;
        // rotated plane columns: G · λ over Q(i)
        let rotated: Vec<Vec<GaussQ>> = plane_cols
            .iter()
            .map(|col| {
                (0..dim)
                    .map(|r| {
                        let mut acc = GaussQ::zero();
                        for (k, entry) in col.iter().enumerate() {
                            if g[(r, k)].is_zero() {
                                continue;
                            }
                            acc = acc.add(&GaussQ::new(
                                &entry.re * &g[(r, k)],
                                &entry.im * &g[(r, k)],
                            ));
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        // conditions over Q(i): for each plane column p, row = pᵀ B, and
        // the polynomial Σ row_c · s_c splits as re + t·im
        let mut ext_vars = section.base_vars().to_vec();
        ext_vars.push(crate::ideal::fresh_var(&ext_vars, "_t"));
        let t_idx = ext_vars.len() - 1;
        let t = MultiPoly::var_idx(&ext_vars, t_idx);
        let mut gens = Vec::new();
        for p in &rotated {
            let brow: Vec<GaussQ> = (0..dim)
                .map(|c| {
                    let mut acc = GaussQ::zero();
                    for (k, entry) in p.iter().enumerate() {
                        if space.gram()[(k, c)].is_zero() {
                            continue;
                        }
                        acc = acc.add(&GaussQ::new(
                            &entry.re * &space.gram()[(k, c)],
                            &entry.im * &space.gram()[(k, c)],
                        ));
                    }
                    acc
                })
                .collect();
            let mut re = MultiPoly::zero(&ext_vars);
            let mut im = MultiPoly::zero(&ext_vars);
            for (c, coeff) in brow.iter().enumerate() {
                let comp = section.components()[c].extend_vars(&ext_vars);
                if !coeff.re.is_zero() {
                    re = re.add(&comp.scale(&coeff.re));
                }
                if !coeff.im.is_zero() {
                    im = im.add(&comp.scale(&coeff.im));
                }
            }
            gens.push(re.add(&t.mul(&im)));
        }
        let t2p1 = t.mul(&t).add(&MultiPoly::one(&ext_vars));
        gens.push(t2p1);
        let ideal = PolyIdeal::new(&ext_vars, gens);
        let proj: Vec<usize> = (0..section.base_vars().len()).collect();
        let doubled = match ideal.relative_degree(&proj, seed.wrapping_add(7 * attempt)) {
            Ok(v) => v as u64,
            Err(IdealError::EmptyScheme) => 0,
            Err(e) => return Err(RouteError::Ideal(e)),
        };
        if doubled % 2 != 0 {
            return Err(RouteError::ConsistencyFailure(format!(
                "Q(i) count {doubled} is odd"
            )));
        }
        counts.push(doubled / 2);
    }
    if counts[0] == counts[1] && counts[1] == counts[2] {
        Ok(counts[0])
    } else {
        Err(RouteError::Ideal(IdealError::DegenerateSlice))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;
    use crate::quad::QuadSpace;
    use crate::routes::route_rh5_homogeneous;
    use crate::section::{running_example, IsoSection};

    #[test]
    fn oh5_matches_rh5_on_homogeneous_grid() {
        for (d, i, j) in [(2u32, 1u32, 1u32), (3, 2, 1), (2, 2, 0)] {
            let s = running_example(d, i, j, false);
            let (_, (rh5_minus, rh5_plus)) = route_rh5_homogeneous(&s).unwrap();
            let (idx, (d_plus, d_minus)) = route_oh5_incidence(&s, 3).unwrap();
            assert_eq!(
                (d_plus, d_minus),
                (rh5_plus as u64, rh5_minus as u64),
                "(d,i,j) = ({d},{i},{j})"
            );
            // n = 2: √e = −d·(d₊ − d₋) = d·(d₋ − d₊) = d(i − j)
            assert_eq!(idx.sqrt_e, d as i64 * (i as i64 - j as i64));
        }
    }

    #[test]
    fn oh5_linear_generic() {
        // degree 1: d₊ + d₋ = 1
        let v: Vec<String> = vec!["x".into(), "y".into()];
        let s = IsoSection::validate(
            &v,
            QuadSpace::hyperbolic(2),
            ["x", "0", "y", "0"].iter().map(|t| parse_poly(&v, t).unwrap()).collect(),
            None,
        )
        .unwrap();
        let (idx, (dp, dm)) = route_oh5_incidence(&s, 5).unwrap();
        assert_eq!(dp + dm, 1);
        assert_eq!(idx.sqrt_e, -1);
    }

    #[test]
    fn oh5_eg2_over_c3() {
        let v: Vec<String> = vec!["x".into(), "y".into(), "z".into()];
        let comps: Vec<MultiPoly> = ["x^2", "y^2", "z^2", "x*y", "x*z", "y*z"]
            .iter()
            .map(|t| parse_poly(&v, t).unwrap())
            .collect();
        let s = IsoSection::validate(&v, QuadSpace::eg2_form(), comps, None).unwrap();
        let (idx, (dp, dm)) = route_oh5_incidence(&s, 11).unwrap();
        let mut pair = [dp, dm];
        pair.sort();
        assert_eq!(pair, [1, 3]);
        assert_eq!(idx.sqrt_e.abs(), 4);
    }
}
