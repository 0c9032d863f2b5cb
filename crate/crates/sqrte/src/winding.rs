//! Winding-number verifier: the degree of the real (and imaginary) part
//! of the section as a map S³ → S³, by quasi-Monte-Carlo quadrature of
//! the pullback volume form. Floating point throughout; the exact routes
//! remain authoritative.

use crate::numeric::{eval_complex, Halton};
use crate::poly::MultiPoly;
use crate::routes::RouteError;
use crate::section::IsoSection;
use num_complex::Complex64;

pub const DEFAULT_SAMPLES: usize = 200_000;
const BATCH: usize = 4096;
const RESIDUAL_LIMIT: f64 = 0.25;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Winding {
    pub estimate: f64,
    pub degree: i64,
    pub residual: f64,
}

fn round_checked(estimate: f64) -> Result<Winding, RouteError> {
    let degree = estimate.round();
    let residual = (estimate - degree).abs();
    if residual > RESIDUAL_LIMIT || !estimate.is_finite() {
        return Err(RouteError::ResidualTooLarge(residual));
    }
    Ok(Winding { estimate, degree: degree as i64, residual })
}

/// Uniform point on S³ from a Halton triple, plus the quaternion frame
/// (i·u, j·u, k·u); the frame is positively oriented for the orientation
/// induced by contracting the outward normal into the standard R⁴ form.
fn sphere_point(h: &mut Halton) -> ([f64; 4], [[f64; 4]; 3]) {
    let p = h.next_point();
    let (r, t1, t2) = (p[0], std::f64::consts::TAU * p[1], std::f64::consts::TAU * p[2]);
    let (s1, c1) = t1.sin_cos();
    let (s2, c2) = t2.sin_cos();
    let a = (1.0 - r).sqrt();
    let b = r.sqrt();
    let u = [a * s1, a * c1, b * s2, b * c2];
    let frame = [
        [-u[1], u[0], -u[3], u[2]],
        [-u[2], u[3], u[0], -u[1]],
        [-u[3], -u[2], u[1], u[0]],
    ];
    (u, frame)
}

fn det4(m: &[[f64; 4]; 4]) -> f64 {
    let mut a = *m;
    let mut det = 1.0;
    for k in 0..4 {
        let mut piv = k;
        for r in k + 1..4 {
            if a[r][k].abs() > a[piv][k].abs() {
                piv = r;
            }
        }
        if a[piv][k] == 0.0 {
            return 0.0;
        }
        if piv != k {
            a.swap(piv, k);
            det = -det;
        }
        det *= a[k][k];
        for r in k + 1..4 {
            let f = a[r][k] / a[k][k];
            for c in k..4 {
                a[r][c] -= f * a[k][c];
            }
        }
    }
    det
}

fn integrand(value: &[f64; 4], derivs: &[[f64; 4]; 3]) -> f64 {
    let norm_sq: f64 = value.iter().map(|v| v * v).sum();
    if norm_sq < 1e-18 {
        return f64::NAN;
    }
    let m = [*value, derivs[0], derivs[1], derivs[2]];
    det4(&m) / (norm_sq * norm_sq)
}

/// Degree of a map S³ → S³ given by an evaluator returning the
/// (unnormalized) value and its three frame derivatives. Accumulation is
/// batched in a fixed order, so the result depends only on (seed, samples).
pub fn sphere_map_degree<F>(eval: F, samples: usize, seed: u64) -> Result<Winding, RouteError>
where
    F: Fn(&[f64; 4], &[[f64; 4]; 3]) -> ([f64; 4], [[f64; 4]; 3]),
{
    let mut halton = Halton::new(&[2, 3, 5]);
    for _ in 0..(seed % 8192) {
        halton.next_point();
    }
    let mut total = 0.0f64;
    let mut batch_sum = 0.0f64;
    for k in 0..samples {
        let (u, frame) = sphere_point(&mut halton);
        let (value, derivs) = eval(&u, &frame);
        batch_sum += integrand(&value, &derivs);
        if (k + 1) % BATCH == 0 {
            total += batch_sum;
            batch_sum = 0.0;
        }
    }
    total += batch_sum;
    round_checked(total / samples as f64)
}

struct SectionEvaluator {
    components: Vec<MultiPoly>,
    jacobian: Vec<[MultiPoly; 2]>,
    inv_rows: Vec<Vec<Complex64>>,
}

impl SectionEvaluator {
    fn new(section: &IsoSection) -> Result<Self, RouteError> {
        let c = section.space().real_form_coordinates().map_err(RouteError::Quad)?;
        let cinv = c.inverse_from_congruence(section.space().gram());
        let dim = section.space().dim();
        let inv_rows = (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|j| {
                        let (re, im) = cinv.entry(i, j).to_f64_pair();
                        Complex64::new(re, im)
                    })
                    .collect()
            })
            .collect();
        let jacobian = section
            .components()
            .iter()
            .map(|p| [p.derivative(0), p.derivative(1)])
            .collect();
        Ok(SectionEvaluator { components: section.components().to_vec(), jacobian, inv_rows })
    }

    /// Real and imaginary evaluations at the sphere point: returns
    /// ((a, da(frame)), (b, db(frame))).
    #[allow(clippy::type_complexity)]
    fn eval(
        &self,
        u: &[f64; 4],
        frame: &[[f64; 4]; 3],
    ) -> (([f64; 4], [[f64; 4]; 3]), ([f64; 4], [[f64; 4]; 3])) {
        let z = [Complex64::new(u[0], u[1]), Complex64::new(u[2], u[3])];
        let s_val: Vec<Complex64> =
            self.components.iter().map(|p| eval_complex(p, &z)).collect();
        let jac_val: Vec<[Complex64; 2]> = self
            .jacobian
            .iter()
            .map(|row| [eval_complex(&row[0], &z), eval_complex(&row[1], &z)])
            .collect();
        let to_w = |vec: &[Complex64]| -> Vec<Complex64> {
            self.inv_rows
                .iter()
                .map(|row| row.iter().zip(vec).map(|(m, v)| m * v).sum())
                .collect()
        };
        let w = to_w(&s_val);
        let mut a = [0.0; 4];
        let mut b = [0.0; 4];
        for k in 0..4 {
            a[k] = w[k].re;
            b[k] = w[k].im;
        }
        let mut da = [[0.0; 4]; 3];
        let mut db = [[0.0; 4]; 3];
        for (t, tangent) in frame.iter().enumerate() {
            let dz = [
                Complex64::new(tangent[0], tangent[1]),
                Complex64::new(tangent[2], tangent[3]),
            ];
            let ds: Vec<Complex64> = jac_val
                .iter()
                .map(|row| row[0] * dz[0] + row[1] * dz[1])
                .collect();
            let dw = to_w(&ds);
            for k in 0..4 {
                da[t][k] = dw[k].re;
                db[t][k] = dw[k].im;
            }
        }
        ((a, da), (b, db))
    }
}

/// The real splitting s = s₊ + i·s₋ of a section in orthonormal fiber
/// coordinates, evaluated at points of S³ ⊂ C².
pub struct RealSplitMap {
    evaluator: SectionEvaluator,
}

impl RealSplitMap {
    pub fn new(section: &IsoSection) -> Result<Self, RouteError> {
        if section.n() != 2 {
            return Err(RouteError::Unsupported(
                "the real splitting evaluator supports n = 2 only".into(),
            ));
        }
        Ok(RealSplitMap { evaluator: SectionEvaluator::new(section)? })
    }

    /// (a, b) parts of the section value at a unit vector of R⁴ ≅ C².
    pub fn eval(&self, u: &[f64; 4]) -> ([f64; 4], [f64; 4]) {
        let frame = [[0.0; 4]; 3];
        let ((a, _), (b, _)) = self.evaluator.eval(u, &frame);
        (a, b)
    }
}

/// deg s₊ and deg s₋ in one sampling pass.
pub fn winding_pair(
    section: &IsoSection,
    samples: usize,
    seed: u64,
) -> Result<(Winding, Winding), RouteError> {
    if section.n() != 2 {
        return Err(RouteError::Unsupported(
            "the winding verifier integrates over S³ and supports n = 2 only".into(),
        ));
    }
    let evaluator = SectionEvaluator::new(section)?;
    let mut halton = Halton::new(&[2, 3, 5]);
    for _ in 0..(seed % 8192) {
        halton.next_point();
    }
    let mut totals = [0.0f64; 2];
    let mut batch = [0.0f64; 2];
    for k in 0..samples {
        let (u, frame) = sphere_point(&mut halton);
        let ((a, da), (b, db)) = evaluator.eval(&u, &frame);
        batch[0] += integrand(&a, &da);
        batch[1] += integrand(&b, &db);
        if (k + 1) % BATCH == 0 {
            totals[0] += batch[0];
            totals[1] += batch[1];
            batch = [0.0; 2];
        }
    }
    totals[0] += batch[0];
    totals[1] += batch[1];
    Ok((
        round_checked(totals[0] / samples as f64)?,
        round_checked(totals[1] / samples as f64)?,
    ))
}

/// Computes deg s₊ and deg s₋ independently, demands they agree, and
/// returns the common value.
pub fn oh1_check(section: &IsoSection, samples: usize, seed: u64) -> Result<Winding, RouteError> {
    let (plus, minus) = winding_pair(section, samples, seed)?;
    if plus.degree != minus.degree {
        return Err(RouteError::WindingMismatch(plus.degree, minus.degree));
    }
    Ok(Winding {
        estimate: plus.estimate,
        degree: plus.degree,
        residual: plus.residual.max(minus.residual),
    })
}
