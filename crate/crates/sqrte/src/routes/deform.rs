//! Deformation route for n = 2: perturb the factorized section to one
//! with simple zeros, solve the two 2×2 systems by exact resultant
//! elimination plus complex root-finding, and count zeros by the sign of
//! the maximal isotropic plane spanned by the Jacobian.
//!
//! The route is a verifier: the perturbed systems keep exact rational
//! coefficients (so resultants are exact), only root extraction and the
//! rank decisions are floating point, and every ambiguity retries with a
//! fresh seed before erroring out.

use super::{RefinedIndex, RouteError};
use crate::ideal::PolyIdeal;
use crate::numeric::{
    eval_complex, newton_polish_2d, plane_intersection_dim, rational_to_f64, univariate_coeffs,
    univariate_roots,
};
use crate::poly::{qrat, MonomialOrder, MultiPoly};
use crate::rng::SeededRng;
use crate::section::{contract_omega, IsoSection};
use num_complex::Complex64;
use num_traits::Zero;

const BALL_RADIUS: f64 = 0.8;
const RESIDUAL_TOL: f64 = 1e-10;
const SEPARATION: f64 = 1e-7;
const RETRIES: u64 = 5;

pub fn route_rh4_deform(section: &IsoSection, seed: u64) -> Result<RefinedIndex, RouteError> {
    assert_eq!(section.n(), 2);
    let fac = section.factorize_n2(seed)?;
    let vars = section.base_vars().to_vec();
    // expected total count, used only to detect lost or spurious roots
    let expected_sigma =
        PolyIdeal::new(&vars, fac.sigma0.clone()).colength(MonomialOrder::GrevLex)?;
    let expected_fg = PolyIdeal::new(&vars, vec![fac.f.clone(), fac.g.clone()])
        .colength(MonomialOrder::GrevLex)?;
    let mut last_error = RouteError::CloseRoots;
    for attempt in 0..RETRIES {
        let mut rng = SeededRng::derive(seed, 0xDEF0 + attempt);
        match deform_once(section, &fac, &mut rng, expected_sigma, expected_fg) {
            Ok((p, n)) => {
                return Ok(RefinedIndex::refined("rh4", p as u64, n as u64).with_note(format!(
                    "{p} positive and {n} negative simple zeros (attempt {attempt})"
                )));
            }
            Err(e @ (RouteError::CloseRoots | RouteError::RankAmbiguous)) => last_error = e,
            Err(e) => return Err(e),
        }
    }
    Err(last_error)
}

fn deform_once(
    section: &IsoSection,
    fac: &crate::section::N2Factorization,
    rng: &mut SeededRng,
    expected_sigma: usize,
    expected_fg: usize,
) -> Result<(usize, usize), RouteError> {
    let vars = section.base_vars().to_vec();
    let eps = qrat(1, 64);
    let perturb = |p: &MultiPoly, rng: &mut SeededRng| {
        p.add(&MultiPoly::constant(&vars, rng.nonzero_rational(5) * &eps))
    };
    let sigma_t = [perturb(&fac.sigma0[0], rng), perturb(&fac.sigma0[1], rng)];
    let tau_t = contract_omega(&sigma_t);
    let f_t = perturb(&fac.f, rng);
    let g_t = perturb(&fac.g, rng);

    let sigma_zeros = stable_zeros(&sigma_t[0], &sigma_t[1], &vars)?;
    if sigma_zeros.len() != expected_sigma {
        return Err(RouteError::CloseRoots);
    }
    let fg_zeros = stable_zeros(&f_t, &g_t, &vars)?;
    if fg_zeros.len() != expected_fg {
        return Err(RouteError::CloseRoots);
    }
    // zeros of the two subsystems must stay disjoint
    for a in &sigma_zeros {
        for b in &fg_zeros {
            if dist(a, b) < SEPARATION {
                return Err(RouteError::CloseRoots);
            }
        }
    }
    // ambient components of the deformed section
    let split_comps = [
        f_t.mul(&sigma_t[0]),
        f_t.mul(&sigma_t[1]),
        g_t.mul(&tau_t[0]),
        g_t.mul(&tau_t[1]),
    ];
    let change = fac.splitting.change_matrix();
    let mut ambient = Vec::with_capacity(4);
    for r in 0..4 {
        let mut acc = MultiPoly::zero(&vars);
        for c in 0..4 {
            if change[(r, c)].is_zero() {
                continue;
            }
            acc = acc.add(&split_comps[c].scale(&change[(r, c)]));
        }
        ambient.push(acc);
    }
    let jac: Vec<[MultiPoly; 2]> = ambient
        .iter()
        .map(|p| [p.derivative(0), p.derivative(1)])
        .collect();
    let reference = section.space().reference()?;
    let ref_cols: Vec<Vec<Complex64>> = reference
        .basis()
        .columns()
        .iter()
        .map(|col| col.iter().map(|q| Complex64::new(rational_to_f64(q), 0.0)).collect())
        .collect();
    let unit = section.space().orientation_unit() as i64;
    let mut positive = 0usize;
    let mut negative = 0usize;
    for zero in sigma_zeros.iter().chain(fg_zeros.iter()) {
        // the plane spanned by the Jacobian columns is the maximal
        // isotropic im(ds) at the simple zero; its sign is read off from
        // the intersection parity with the reference plane
        let jac_cols: Vec<Vec<Complex64>> = (0..2)
            .map(|v| (0..4).map(|r| eval_complex(&jac[r][v], zero)).collect())
            .collect();
        let meet =
            plane_intersection_dim(&jac_cols, &ref_cols).ok_or(RouteError::RankAmbiguous)?;
        let sign = if meet % 2 == 0 { unit } else { -unit };
        if sign > 0 {
            positive += 1;
        } else {
            negative += 1;
        }
    }
    Ok((positive, negative))
}

fn dist(a: &[Complex64; 2], b: &[Complex64; 2]) -> f64 {
    ((a[0] - b[0]).norm_sqr() + (a[1] - b[1]).norm_sqr()).sqrt()
}

/// Zeros inside the counting ball. Each must be simple (nonsingular 2x2
/// Jacobian) and pairwise separated; zeros outside the ball are the ones
/// escaping to infinity as the perturbation shrinks and are not counted.
fn stable_zeros(
    p: &MultiPoly,
    q: &MultiPoly,
    vars: &[String],
) -> Result<Vec<[Complex64; 2]>, RouteError> {
    let zeros = solve_2x2(p, q, vars)?;
    let inside: Vec<[Complex64; 2]> = zeros
        .into_iter()
        .filter(|z| (z[0].norm_sqr() + z[1].norm_sqr()).sqrt() < BALL_RADIUS)
        .collect();
    for i in 0..inside.len() {
        for j in i + 1..inside.len() {
            if dist(&inside[i], &inside[j]) < SEPARATION {
                return Err(RouteError::CloseRoots);
            }
        }
    }
    // simplicity: the 2×2 Jacobian must be nonsingular at each zero
    let jp = [p.derivative(0), p.derivative(1)];
    let jq = [q.derivative(0), q.derivative(1)];
    for z in &inside {
        let det = eval_complex(&jp[0], z) * eval_complex(&jq[1], z)
            - eval_complex(&jp[1], z) * eval_complex(&jq[0], z);
        if det.norm() < 1e-8 {
            return Err(RouteError::CloseRoots);
        }
    }
    Ok(inside)
}

/// All isolated solutions of a 2×2 rational polynomial system, by exact
/// resultant elimination and complex univariate root extraction.
fn solve_2x2(
    p: &MultiPoly,
    q: &MultiPoly,
    vars: &[String],
) -> Result<Vec<[Complex64; 2]>, RouteError> {
    if p.is_zero() || q.is_zero() {
        return Err(RouteError::CloseRoots);
    }
    if (p.is_constant() && !p.is_zero()) || (q.is_constant() && !q.is_zero()) {
        return Ok(Vec::new());
    }
    let py = p.degree_in(1).unwrap_or(0);
    let qy = q.degree_in(1).unwrap_or(0);
    let x_roots: Vec<Complex64> = if py == 0 {
        // p depends on x only
        univariate_roots(&univariate_coeffs(p, 0))
    } else if qy == 0 {
        univariate_roots(&univariate_coeffs(q, 0))
    } else {
        let res = crate::poly::resultant(p, q, 1).map_err(|_| RouteError::CloseRoots)?;
        if res.is_zero() {
            return Err(RouteError::CloseRoots);
        }
        if res.is_constant() {
            return Ok(Vec::new());
        }
        univariate_roots(&univariate_coeffs(&res, 0))
    };
    let jac = [
        [p.derivative(0), p.derivative(1)],
        [q.derivative(0), q.derivative(1)],
    ];
    let mut found: Vec<[Complex64; 2]> = Vec::new();
    for x0 in x_roots {
        // candidate y-values from both equations specialized at x0
        let mut candidates = Vec::new();
        for poly in [p, q] {
            let spec = specialize_x(poly, x0, vars);
            if spec.iter().skip(1).any(|c| c.norm() > 1e-12) {
                candidates.extend(univariate_roots(&spec));
            }
        }
        if candidates.is_empty() {
            // both equations y-free at x0: cannot isolate
            continue;
        }
        for y0 in candidates {
            if let Some(z) = newton_polish_2d(&[p, q], &jac, [x0, y0], RESIDUAL_TOL) {
                if !found.iter().any(|w| dist(w, &z) < SEPARATION) {
                    found.push(z);
                }
            }
        }
    }
    Ok(found)
}

/// Coefficients in y of p(x0, y).
fn specialize_x(p: &MultiPoly, x0: Complex64, _vars: &[String]) -> Vec<Complex64> {
    let deg = p.degree_in(1).unwrap_or(0) as usize;
    let mut coeffs = vec![Complex64::new(0.0, 0.0); deg + 1];
    for (exps, coeff) in p.terms() {
        let c = Complex64::new(rational_to_f64(coeff), 0.0) * x0.powu(exps[0]);
        coeffs[exps[1] as usize] += c;
    }
    coeffs
}
