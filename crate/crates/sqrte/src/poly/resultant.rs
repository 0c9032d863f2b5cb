//! Resultants via fraction-free (Bareiss) elimination of the Sylvester
//! matrix. Convention: rows are the shifted coefficients of `p` (deg n of
//! q rows... see below) — concretely res(x-1, x+1, x) = 2, matching
//! res(p,q) = lc(p)^{deg q} · ∏ q(αᵢ) over the roots αᵢ of p.

use super::{MultiPoly, PolyError};

/// Sylvester-matrix resultant of `p` and `q` with respect to `var`.
/// Both inputs must have positive degree in `var`.
pub fn resultant(p: &MultiPoly, q: &MultiPoly, var: usize) -> Result<MultiPoly, PolyError> {
    assert_eq!(p.vars(), q.vars(), "variable lists must agree");
    let vars = p.vars().to_vec();
    let m = p.degree_in(var).unwrap_or(0) as usize;
    let n = q.degree_in(var).unwrap_or(0) as usize;
    if m == 0 || n == 0 {
        return Err(PolyError::DegreeZeroInVar(vars[var].clone()));
    }
    let pc = p.coeffs_in(var); // pc[k] = coefficient of var^k
    let qc = q.coeffs_in(var);
    let size = m + n;
    let zero = MultiPoly::zero(&vars);
    let mut mat = vec![vec![zero.clone(); size]; size];
    // n rows of p coefficients (descending), then m rows of q.
    for i in 0..n {
        for k in 0..=m {
            mat[i][i + k] = pc[m - k].clone();
        }
    }
    for i in 0..m {
        for k in 0..=n {
            mat[n + i][i + k] = qc[n - k].clone();
        }
    }
    Ok(bareiss_det(mat, &vars))
}

/// Fraction-free determinant of a matrix of polynomials.
fn bareiss_det(mut m: Vec<Vec<MultiPoly>>, vars: &[String]) -> MultiPoly {
    let n = m.len();
    let mut sign_flip = false;
    let mut prev = MultiPoly::one(vars);
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign_flip = !sign_flip;
                }
                None => return MultiPoly::zero(vars),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[k][k].mul(&m[i][j]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = num.exact_div(&prev).expect("Bareiss division is exact");
            }
            m[i][k] = MultiPoly::zero(vars);
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign_flip {
        det.neg()
    } else {
        det
    }
}
