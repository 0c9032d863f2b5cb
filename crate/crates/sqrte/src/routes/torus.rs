//! Torus localisation: the equivariant Euler ratio at the origin, and the
//! spin-model refinement for n = 2.

use super::{RefinedIndex, RouteError};
use crate::ideal::PolyIdeal;
use crate::poly::{MonomialOrder, MultiPoly};
use crate::quad::Subspace;
use crate::section::IsoSection;
use num_rational::BigRational;
use num_traits::Zero;

/// √e as a ratio of equivariant Euler classes: the product of the fiber
/// weights of a T-invariant positive maximal isotropic over the product
/// of the tangent weights (−w_k for the base weight w_k of x_k).
pub fn route_oh8_torus(section: &IsoSection) -> Result<RefinedIndex, RouteError> {
    let weights = section.torus().ok_or(RouteError::MissingWeights)?;
    let space = section.space();
    let n = space.n();
    let dim = space.dim();
    // tangent weights are the negatives of the coordinate-function weights
    let denominator: i64 = weights.base.iter().map(|w| -w).product();
    if denominator == 0 {
        return Err(RouteError::NonIntegerRatio("a base weight is zero".into()));
    }
    // search coordinate n-subsets spanning a positive maximal isotropic
    let mut results: Vec<(Vec<usize>, i64)> = Vec::new();
    let mut subset = vec![0usize; n];
    search_subsets(dim, n, &mut subset, 0, 0, &mut |chosen| {
        let cols: Vec<Vec<BigRational>> = chosen
            .iter()
            .map(|&i| {
                let mut v = vec![BigRational::zero(); dim];
                v[i] = BigRational::new(1.into(), 1.into());
                v
            })
            .collect();
        let plane = Subspace::from_columns(cols);
        if space.is_maximal_isotropic(&plane).unwrap_or(false)
            && space.isotropic_sign(&plane) == Ok(1)
        {
            let numerator: i64 = chosen.iter().map(|&i| weights.fiber[i]).product();
            results.push((chosen.to_vec(), numerator));
        }
    });
    if results.is_empty() {
        return Err(RouteError::NoInvariantIsotropic);
    }
    let mut values = Vec::new();
    for (chosen, numerator) in &results {
        if numerator % denominator != 0 {
            return Err(RouteError::NonIntegerRatio(format!(
                "weights {numerator} over tangent product {denominator} for coordinates {chosen:?}"
            )));
        }
        values.push(numerator / denominator);
    }
    if values.windows(2).any(|w| w[0] != w[1]) {
        return Err(RouteError::ConsistencyFailure(format!(
            "invariant isotropic subsets disagree: {values:?}"
        )));
    }
    Ok(RefinedIndex::plain("oh8", values[0]).with_note(format!(
        "invariant plane coordinates {:?}, weight ratio {}/{}",
        results[0].0, results[0].1, denominator
    )))
}

fn search_subsets(
    dim: usize,
    n: usize,
    subset: &mut Vec<usize>,
    depth: usize,
    start: usize,
    visit: &mut impl FnMut(&[usize]),
) {
    if depth == n {
        visit(subset);
        return;
    }
    for i in start..dim {
        subset[depth] = i;
        search_subsets(dim, n, subset, depth + 1, i + 1, visit);
    }
}

/// Spin-model data over C²: E = Hom(M⁺, M⁻) with the determinant form and
/// the rank-one section F ⊗ v.
#[derive(Debug, Clone)]
pub struct SpinModel {
    pub base_vars: Vec<String>,
    pub base_weights: Vec<i64>,
    /// weights of M⁺ = t^a ⊕ t^b
    pub m_plus: (i64, i64),
    /// weights of M⁻ = t^{i'} ⊕ t^{j'}
    pub m_minus: (i64, i64),
    /// section of (M⁺)*
    pub f: [MultiPoly; 2],
    /// section of M⁻
    pub v: [MultiPoly; 2],
}

impl SpinModel {
    /// The rank-4 section F ⊗ v on the standard XY + ZW space:
    /// (X, Y, Z, W) = (v₁F₁, v₂F₂, v₁F₂, −v₂F₁).
    pub fn assembled_components(&self) -> Vec<MultiPoly> {
        vec![
            self.v[0].mul(&self.f[0]),
            self.v[1].mul(&self.f[1]),
            self.v[0].mul(&self.f[1]),
            self.v[1].mul(&self.f[0]).neg(),
        ]
    }
}

/// d₁ = e^T(M⁻)/e^T(N), d₂ = e^T((M⁺)*)/e^T(N), cross-checked against the
/// colengths of Z(v) and Z(F) and against route_rh3 on the assembled
/// rank-4 section.
pub fn route_rh8_spin(model: &SpinModel, seed: u64) -> Result<RefinedIndex, RouteError> {
    let (a, b) = model.m_plus;
    let (ip, jp) = model.m_minus;
    if a + b != ip + jp {
        return Err(RouteError::WeightConstraintViolated(format!(
            "det constraint needs {a} + {b} = {ip} + {jp}"
        )));
    }
    let vars = &model.base_vars;
    if model.base_weights.iter().any(|&w| w == 0) {
        return Err(RouteError::WeightConstraintViolated("zero base weight".into()));
    }
    for (k, poly) in model.v.iter().enumerate() {
        let target = if k == 0 { ip } else { jp };
        if !poly.is_weight_homogeneous(&model.base_weights, target) {
            return Err(RouteError::WeightConstraintViolated(format!(
                "v{} is not weight-homogeneous of weight {target}",
                k + 1
            )));
        }
    }
    for (k, poly) in model.f.iter().enumerate() {
        let target = if k == 0 { -a } else { -b };
        if !poly.is_weight_homogeneous(&model.base_weights, target) {
            return Err(RouteError::WeightConstraintViolated(format!(
                "F{} is not weight-homogeneous of weight {target}",
                k + 1
            )));
        }
    }
    let denominator: i64 = model.base_weights.iter().map(|w| -w).product();
    let num1 = ip * jp;
    let num2 = a * b; // (−a)(−b)
    if num1 % denominator != 0 || num2 % denominator != 0 {
        return Err(RouteError::NonIntegerRatio(format!(
            "{num1} or {num2} over {denominator}"
        )));
    }
    let d1 = num1 / denominator;
    let d2 = num2 / denominator;
    if d1 < 0 || d2 < 0 {
        return Err(RouteError::NonIntegerRatio(format!(
            "negative refined count ({d1}, {d2}); weight data is inconsistent"
        )));
    }
    // cross-checks: lengths of the zero schemes
    let len_v = PolyIdeal::new(vars, model.v.to_vec()).colength(MonomialOrder::GrevLex)?;
    let len_f = PolyIdeal::new(vars, model.f.to_vec()).colength(MonomialOrder::GrevLex)?;
    if (len_v as i64, len_f as i64) != (d1, d2) {
        return Err(RouteError::ConsistencyFailure(format!(
            "weight ratios ({d1}, {d2}) disagree with colengths ({len_v}, {len_f})"
        )));
    }
    let mut idx = RefinedIndex::refined("rh8", d1 as u64, d2 as u64)
        .with_note(format!("e(M-) ratio {num1}/{denominator}, e((M+)*) ratio {num2}/{denominator}"));
    // assemble the rank-4 section and compare with rh3 when it is a valid
    // section (it fails validation exactly when Z(F) and Z(v) are both empty)
    let comps = model.assembled_components();
    if let Ok(section) = crate::section::IsoSection::validate(
        vars,
        crate::quad::QuadSpace::hyperbolic(2),
        comps,
        None,
    ) {
        let rh3 = super::route_rh3(&section, seed)?;
        if rh3.pair() != Some((d1 as u64, d2 as u64)) {
            return Err(RouteError::ConsistencyFailure(format!(
                "assembled section gives {:?}, spin weights give ({d1}, {d2})",
                rh3.pair()
            )));
        }
        idx = idx.with_note("assembled rank-4 section agrees with rh3".into());
    }
    Ok(idx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;
    use crate::section::running_example;

    #[test]
    fn oh8_running_grid() {
        for (d, i, j) in [(2i64, 1i64, 1i64), (3, 2, 1), (2, 1, 0), (4, 0, 3)] {
            let s = running_example(d as u32, i as u32, j as u32, true);
            let idx = route_oh8_torus(&s).unwrap();
            assert_eq!(idx.sqrt_e, d * (i - j), "(d,i,j) = ({d},{i},{j})");
        }
    }

    #[test]
    fn oh8_zero_weight_factor() {
        // d = 2, i = j = 1: the invariant plane has a zero weight, so the
        // localised class vanishes
        let s = running_example(2, 1, 1, true);
        assert_eq!(route_oh8_torus(&s).unwrap().sqrt_e, 0);
    }

    #[test]
    fn oh8_orientation_flip_negates() {
        let s = running_example(3, 2, 1, true);
        assert_eq!(route_oh8_torus(&s).unwrap().sqrt_e, 3);
        assert_eq!(route_oh8_torus(&s.flipped()).unwrap().sqrt_e, -3);
    }

    #[test]
    fn oh8_requires_weights() {
        let s = running_example(2, 1, 0, false);
        assert!(matches!(route_oh8_torus(&s), Err(RouteError::MissingWeights)));
    }

    fn running_spin(d: i64, i: i64, j: i64) -> SpinModel {
        // (M⁺)* = t^{−j} ⊕ t^{d−i}, M⁻ = t^{j−d} ⊕ t^i,
        // F = (y^j, x^{d−i}), v = (y^{d−j}, x^i)
        let vars: Vec<String> = vec!["x".into(), "y".into()];
        let vp = vars.clone();
        let p = move |s: &str| parse_poly(&vp, s).unwrap();
        let xs = |k: i64| if k == 0 { p("1") } else { p(&format!("x^{k}")) };
        let ys = |k: i64| if k == 0 { p("1") } else { p(&format!("y^{k}")) };
        SpinModel {
            base_vars: vars,
            base_weights: vec![1, -1],
            m_plus: (j, i - d),
            m_minus: (j - d, i),
            f: [ys(j), xs(d - i)],
            v: [ys(d - j), xs(i)],
        }
    }

    #[test]
    fn rh8_running_example() {
        for (d, i, j) in [(2i64, 1i64, 1i64), (3, 2, 1), (3, 1, 2)] {
            let model = running_spin(d, i, j);
            let idx = route_rh8_spin(&model, 1).unwrap();
            assert_eq!(
                idx.pair(),
                Some((((d - j) * i) as u64, ((d - i) * j) as u64)),
                "(d,i,j) = ({d},{i},{j})"
            );
        }
    }

    #[test]
    fn rh8_constant_f() {
        // F = (1, 0) constant: Z(F) empty so d2 = 0
        let vars: Vec<String> = vec!["x".into(), "y".into()];
        let vp = vars.clone();
        let p = move |s: &str| parse_poly(&vp, s).unwrap();
        let model = SpinModel {
            base_vars: vars,
            base_weights: vec![1, -1],
            m_plus: (0, 0),
            m_minus: (-1, 1),
            f: [p("1"), p("0")],
            v: [p("y"), p("x")],
        };
        let idx = route_rh8_spin(&model, 1).unwrap();
        assert_eq!(idx.pair(), Some((1, 0)));
    }

    #[test]
    fn rh8_simple_point() {
        // v = (x, y), F = (y, x), M⁻ = t^1 ⊕ t^{−1}: d1 = 1
        let vars: Vec<String> = vec!["x".into(), "y".into()];
        let vp = vars.clone();
        let p = move |s: &str| parse_poly(&vp, s).unwrap();
        let model = SpinModel {
            base_vars: vars,
            base_weights: vec![1, -1],
            m_plus: (1, -1),
            m_minus: (1, -1),
            f: [p("y"), p("x")],
            v: [p("x"), p("y")],
        };
        let idx = route_rh8_spin(&model, 1).unwrap();
        assert_eq!(idx.pair(), Some((1, 1)));
    }

    #[test]
    fn rh8_rejects_bad_det_constraint() {
        let vars: Vec<String> = vec!["x".into(), "y".into()];
        let vp = vars.clone();
        let p = move |s: &str| parse_poly(&vp, s).unwrap();
        let model = SpinModel {
            base_vars: vars,
            base_weights: vec![1, -1],
            m_plus: (0, 1),
            m_minus: (-1, 1),
            f: [p("1"), p("0")],
            v: [p("y"), p("x")],
        };
        assert!(matches!(
            route_rh8_spin(&model, 1),
            Err(RouteError::WeightConstraintViolated(_))
        ));
    }
}
