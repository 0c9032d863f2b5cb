//! Floating-point helpers shared by the deformation route and the winding
//! verifier: complex evaluation of exact polynomials, univariate complex
//! root-finding, Newton polishing of 2×2 systems, a Halton sequence, and
//! numerical rank with a gap test.

use crate::poly::MultiPoly;
use num_complex::Complex64;
use num_rational::BigRational;

pub fn rational_to_f64(q: &BigRational) -> f64 {
    let n = q.numer().to_string().parse::<f64>().unwrap_or(f64::NAN);
    let d = q.denom().to_string().parse::<f64>().unwrap_or(f64::NAN);
    n / d
}

/// Evaluate an exact polynomial at a complex point.
pub fn eval_complex(p: &MultiPoly, point: &[Complex64]) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (exps, coeff) in p.terms() {
        let mut term = Complex64::new(rational_to_f64(coeff), 0.0);
        for (i, &e) in exps.iter().enumerate() {
            term *= point[i].powu(e);
        }
        acc += term;
    }
    acc
}

/// Coefficients (ascending) of a univariate polynomial in `var` evaluated
/// at nothing else: the input must involve only `var`.
pub fn univariate_coeffs(p: &MultiPoly, var: usize) -> Vec<Complex64> {
    let deg = p.degree_in(var).unwrap_or(0) as usize;
    let mut coeffs = vec![Complex64::new(0.0, 0.0); deg + 1];
    for (exps, coeff) in p.terms() {
        for (i, &e) in exps.iter().enumerate() {
            assert!(i == var || e == 0, "polynomial is not univariate");
        }
        coeffs[exps[var] as usize] += Complex64::new(rational_to_f64(coeff), 0.0);
    }
    coeffs
}

/// All complex roots of a univariate polynomial (ascending coefficients)
/// by the Durand–Kerner iteration with Newton polish.
pub fn univariate_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut c = coeffs.to_vec();
    while let Some(last) = c.last() {
        if last.norm() < 1e-14 && c.len() > 1 {
            c.pop();
        } else {
            break;
        }
    }
    let deg = c.len() - 1;
    if deg == 0 {
        return Vec::new();
    }
    let lead = c[deg];
    let monic: Vec<Complex64> = c.iter().map(|a| a / lead).collect();
    let eval = |z: Complex64| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &a in monic.iter().rev() {
            acc = acc * z + a;
        }
        acc
    };
    let deriv = |z: Complex64| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, &a) in monic.iter().enumerate().skip(1).rev() {
            acc = acc * z + a * k as f64;
        }
        acc
    };
    // starting points on a slightly irrational spiral
    let mut roots: Vec<Complex64> = (0..deg)
        .map(|k| Complex64::from_polar(0.4 + 0.9 * k as f64 / deg as f64, 0.7 + 2.3 * k as f64))
        .collect();
    for _ in 0..200 {
        let mut delta_max = 0.0f64;
        for i in 0..deg {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..deg {
                if i != j {
                    denom *= roots[i] - roots[j];
                }
            }
            if denom.norm() < 1e-280 {
                continue;
            }
            let step = eval(roots[i]) / denom;
            roots[i] -= step;
            delta_max = delta_max.max(step.norm());
        }
        if delta_max < 1e-14 {
            break;
        }
    }
    // Newton polish
    for r in roots.iter_mut() {
        for _ in 0..40 {
            let f = eval(*r);
            let df = deriv(*r);
            if df.norm() < 1e-200 {
                break;
            }
            let step = f / df;
            *r -= step;
            if step.norm() < 1e-15 {
                break;
            }
        }
    }
    roots
}

/// Newton iteration on a 2×2 complex polynomial system.
pub fn newton_polish_2d(
    system: &[&MultiPoly; 2],
    jac: &[[MultiPoly; 2]; 2],
    start: [Complex64; 2],
    tolerance: f64,
) -> Option<[Complex64; 2]> {
    let mut z = start;
    for _ in 0..60 {
        let f0 = eval_complex(system[0], &z);
        let f1 = eval_complex(system[1], &z);
        if f0.norm() < tolerance && f1.norm() < tolerance {
            return Some(z);
        }
        let a = eval_complex(&jac[0][0], &z);
        let b = eval_complex(&jac[0][1], &z);
        let c = eval_complex(&jac[1][0], &z);
        let d = eval_complex(&jac[1][1], &z);
        let det = a * d - b * c;
        if det.norm() < 1e-250 {
            return None;
        }
        let dx = (f0 * d - f1 * b) / det;
        let dy = (a * f1 - c * f0) / det;
        z[0] -= dx;
        z[1] -= dy;
        if !z[0].is_finite() || !z[1].is_finite() {
            return None;
        }
    }
    let f0 = eval_complex(system[0], &z);
    let f1 = eval_complex(system[1], &z);
    (f0.norm() < tolerance && f1.norm() < tolerance).then_some(z)
}

/// Halton low-discrepancy sequence in the given prime bases.
pub struct Halton {
    bases: Vec<u64>,
    index: u64,
}

impl Halton {
    pub fn new(bases: &[u64]) -> Self {
        Halton { bases: bases.to_vec(), index: 0 }
    }

    pub fn next_point(&mut self) -> Vec<f64> {
        self.index += 1;
        self.bases.iter().map(|&b| radical_inverse(self.index, b)).collect()
    }
}

fn radical_inverse(mut n: u64, base: u64) -> f64 {
    let mut inv = 0.0;
    let mut denom = 1.0;
    while n > 0 {
        denom *= base as f64;
        inv += (n % base) as f64 / denom;
        n /= base;
    }
    inv
}

/// Orthonormalize a set of columns by modified Gram–Schmidt; None when a
/// column is not clearly independent of the earlier ones (relative
/// residual below the floor).
pub fn orthonormalize(columns: &[Vec<Complex64>]) -> Option<Vec<Vec<Complex64>>> {
    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(columns.len());
    for col in columns {
        let mut work = col.clone();
        let original = vec_norm(&work).max(1e-300);
        for q in &basis {
            let proj = dot_conj(q, &work);
            for (t, u) in work.iter_mut().zip(q) {
                *t -= proj * u;
            }
        }
        let residual = vec_norm(&work);
        if residual / original < 1e-6 {
            return None;
        }
        basis.push(work.iter().map(|z| z / residual).collect());
    }
    Some(basis)
}

/// Singular values of a 2×2 complex matrix, descending, by the closed
/// form for the eigenvalues of MᴴM.
fn singular_values_2x2(m: &[[Complex64; 2]; 2]) -> [f64; 2] {
    // G = MᴴM is Hermitian positive semidefinite
    let g00 = (m[0][0].conj() * m[0][0] + m[1][0].conj() * m[1][0]).re;
    let g11 = (m[0][1].conj() * m[0][1] + m[1][1].conj() * m[1][1]).re;
    let g01 = m[0][0].conj() * m[0][1] + m[1][0].conj() * m[1][1];
    let trace = g00 + g11;
    let half_gap = ((g00 - g11) * (g00 - g11) / 4.0 + g01.norm_sqr()).sqrt();
    let hi = (trace / 2.0 + half_gap).max(0.0);
    let lo = (trace / 2.0 - half_gap).max(0.0);
    [hi.sqrt(), lo.sqrt()]
}

/// Intersection dimension of two 2-planes in C⁴ by principal angles:
/// the planes are orthonormalized and the singular values of Q_Aᴴ·Q_B
/// (the cosines of the principal angles) are classified against two
/// bands — a cosine above 1 − 10⁻⁸ is an intersection direction, one
/// below 1 − 10⁻⁴ is not, and anything between is ambiguous (None).
pub fn plane_intersection_dim(
    a_cols: &[Vec<Complex64>],
    b_cols: &[Vec<Complex64>],
) -> Option<usize> {
    assert_eq!(a_cols.len(), 2);
    assert_eq!(b_cols.len(), 2);
    let qa = orthonormalize(a_cols)?;
    let qb = orthonormalize(b_cols)?;
    let mut m = [[Complex64::new(0.0, 0.0); 2]; 2];
    for (i, qi) in qa.iter().enumerate() {
        for (j, qj) in qb.iter().enumerate() {
            m[i][j] = dot_conj(qi, qj);
        }
    }
    let cosines = singular_values_2x2(&m);
    let mut meet = 0;
    for c in cosines {
        if c >= 1.0 - 1e-8 {
            meet += 1;
        } else if c > 1.0 - 1e-4 {
            return None; // neither clearly touching nor clearly apart
        }
    }
    Some(meet)
}

fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn dot_conj(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    #[test]
    fn roots_of_cubic() {
        // z^3 - 1: cube roots of unity
        let coeffs = vec![
            Complex64::new(-1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
        ];
        let mut roots = univariate_roots(&coeffs);
        roots.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        assert_eq!(roots.len(), 3);
        for r in &roots {
            assert!((r.powu(3) - Complex64::new(1.0, 0.0)).norm() < 1e-10);
        }
    }

    #[test]
    fn newton_on_system() {
        let v: Vec<String> = vec!["x".into(), "y".into()];
        let p1 = parse_poly(&v, "x^2 - 1").unwrap();
        let p2 = parse_poly(&v, "y - x").unwrap();
        let jac = [
            [p1.derivative(0), p1.derivative(1)],
            [p2.derivative(0), p2.derivative(1)],
        ];
        let z = newton_polish_2d(
            &[&p1, &p2],
            &jac,
            [Complex64::new(1.2, 0.1), Complex64::new(0.8, -0.2)],
            1e-12,
        )
        .unwrap();
        assert!((z[0] - Complex64::new(1.0, 0.0)).norm() < 1e-8);
        assert!((z[1] - Complex64::new(1.0, 0.0)).norm() < 1e-8);
    }

    #[test]
    fn halton_is_low_discrepancy_ish() {
        let mut h = Halton::new(&[2, 3]);
        let pts: Vec<Vec<f64>> = (0..100).map(|_| h.next_point()).collect();
        let mean_x: f64 = pts.iter().map(|p| p[0]).sum::<f64>() / 100.0;
        assert!((mean_x - 0.5).abs() < 0.05);
    }

    #[test]
    fn principal_angle_intersections() {
        let c = |re: f64| Complex64::new(re, 0.0);
        let e = |i: usize| {
            let mut v = vec![c(0.0); 4];
            v[i] = c(1.0);
            v
        };
        // disjoint planes
        let a = vec![e(0), e(1)];
        let b = vec![e(2), e(3)];
        assert_eq!(plane_intersection_dim(&a, &b), Some(0));
        // shared line
        let b1 = vec![e(0), e(2)];
        assert_eq!(plane_intersection_dim(&a, &b1), Some(1));
        // equal planes presented in a skewed basis
        let skew = vec![
            vec![c(1.0), c(2.0), c(0.0), c(0.0)],
            vec![c(3.0), c(-1.0), c(0.0), c(0.0)],
        ];
        assert_eq!(plane_intersection_dim(&a, &skew), Some(2));
        // nearly touching: ambiguous band (angle about 10^-3)
        let near = vec![e(3), vec![c(1.0), c(0.0), c(1e-3), c(0.0)]];
        assert_eq!(plane_intersection_dim(&a, &near), None);
        // degenerate input plane
        let dep = vec![e(0), vec![c(1.0), c(1e-9), c(0.0), c(0.0)]];
        assert_eq!(plane_intersection_dim(&dep, &b), None);
    }
}
