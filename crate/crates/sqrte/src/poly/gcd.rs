//! Multivariate GCD by primitive-part recursion with a subresultant
//! polynomial remainder sequence for the univariate core.

use super::{MonomialOrder, MultiPoly};
use num_rational::BigRational;
use num_traits::One;

/// View of a polynomial as univariate in one variable, coefficients in the
/// same ambient ring with degree zero in that variable.
struct UniView {
    var: usize,
    coeffs: Vec<MultiPoly>,
}

impl UniView {
    fn of(p: &MultiPoly, var: usize) -> Self {
        UniView { var, coeffs: p.coeffs_in(var) }
    }

    fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    fn lead(&self) -> &MultiPoly {
        self.coeffs.last().unwrap()
    }

    fn to_poly(&self, vars: &[String]) -> MultiPoly {
        MultiPoly::from_coeffs_in(vars, self.var, &self.coeffs)
    }

    fn normalize(mut self) -> Self {
        while self.coeffs.len() > 1 && self.coeffs.last().unwrap().is_zero() {
            self.coeffs.pop();
        }
        self
    }

    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn scale_poly(&self, c: &MultiPoly) -> Self {
        UniView {
            var: self.var,
            coeffs: self.coeffs.iter().map(|a| a.mul(c)).collect(),
        }
    }

    fn div_exact(&self, c: &MultiPoly) -> Self {
        UniView {
            var: self.var,
            coeffs: self
                .coeffs
                .iter()
                .map(|a| a.exact_div(c).expect("PRS division must be exact"))
                .collect(),
        }
    }

    /// Pseudo-remainder: lc(b)^{δ+1}·a reduced modulo b.
    fn prem(&self, b: &UniView) -> UniView {
        let delta = self.degree() as i64 - b.degree() as i64;
        assert!(delta >= 0);
        let lb = b.lead().clone();
        let mut r = self.scale_poly(&lb.pow(delta as u32 + 1));
        while !r.is_zero() && r.degree() >= b.degree() && !(r.degree() == 0 && b.degree() == 0) {
            let shift = r.degree() - b.degree();
            let factor = r
                .lead()
                .exact_div(&lb)
                .expect("pseudo-remainder leading division must be exact");
            for (i, bc) in b.coeffs.iter().enumerate() {
                let sub = bc.mul(&factor);
                r.coeffs[i + shift] = r.coeffs[i + shift].sub(&sub);
            }
            r = r.normalize();
            if r.degree() < b.degree() {
                break;
            }
            if r.coeffs.len() == 1 && b.degree() == 0 {
                break;
            }
        }
        r.normalize()
    }
}

fn gcd_list(polys: &[MultiPoly], vars: &[String]) -> MultiPoly {
    let mut acc = MultiPoly::zero(vars);
    for p in polys {
        acc = gcd_rec(&acc, p);
        if acc.is_constant() && !acc.is_zero() {
            return MultiPoly::one(vars);
        }
    }
    acc
}

fn first_active_var(p: &MultiPoly, q: &MultiPoly) -> Option<usize> {
    (0..p.num_vars()).find(|&v| p.involves(v) || q.involves(v))
}

/// GCD up to a unit; callers normalize.
fn gcd_rec(p: &MultiPoly, q: &MultiPoly) -> MultiPoly {
    let vars = p.vars().to_vec();
    if p.is_zero() {
        return q.clone();
    }
    if q.is_zero() {
        return p.clone();
    }
    let var = match first_active_var(p, q) {
        None => return MultiPoly::one(&vars),
        Some(v) => v,
    };
    let dp = p.degree_in(var).unwrap_or(0);
    let dq = q.degree_in(var).unwrap_or(0);
    if dp == 0 {
        // gcd divides p, hence is free of `var`: recurse against the
        // var-content of q.
        let cont_q = gcd_list(&q.coeffs_in(var), &vars);
        return gcd_rec(p, &cont_q);
    }
    if dq == 0 {
        let cont_p = gcd_list(&p.coeffs_in(var), &vars);
        return gcd_rec(&cont_p, q);
    }

    let cont_p = gcd_list(&p.coeffs_in(var), &vars);
    let cont_q = gcd_list(&q.coeffs_in(var), &vars);
    let pp_p = p.exact_div(&cont_p).expect("content divides");
    let pp_q = q.exact_div(&cont_q).expect("content divides");
    let cont_gcd = gcd_rec(&cont_p, &cont_q);

    // Subresultant PRS on the primitive parts.
    let (mut a, mut b) = if dp >= dq {
        (UniView::of(&pp_p, var), UniView::of(&pp_q, var))
    } else {
        (UniView::of(&pp_q, var), UniView::of(&pp_p, var))
    };
    let one = MultiPoly::one(&vars);
    let mut g = one.clone();
    let mut h = one.clone();
    loop {
        let delta = a.degree() - b.degree();
        let r = a.prem(&b);
        if r.is_zero() {
            break;
        }
        if r.degree() == 0 && !r.coeffs[0].is_zero() && b.degree() > 0 {
            // A nonzero constant (in `var`) remainder: primitive parts coprime.
            return cont_gcd;
        }
        a = b;
        let divisor = g.mul(&h.pow(delta as u32));
        b = r.div_exact(&divisor);
        g = a.lead().clone();
        h = if delta == 0 {
            h
        } else {
            let gd = g.pow(delta as u32);
            if delta == 1 {
                gd
            } else {
                gd.exact_div(&h.pow(delta as u32 - 1))
                    .expect("subresultant h update is exact")
            }
        };
        if b.degree() == 0 {
            if b.is_zero() {
                break;
            }
            return cont_gcd;
        }
    }
    // b is the last nonzero remainder: take its primitive part in `var`.
    let b_poly = b.to_poly(&vars);
    let cont_b = gcd_list(&b_poly.coeffs_in(var), &vars);
    let pp_b = b_poly.exact_div(&cont_b).expect("content divides");
    cont_gcd.mul(&pp_b)
}

/// Greatest common divisor, normalized to have grevlex leading
/// coefficient 1; gcd of two zero polynomials is zero.
pub fn gcd_poly(p: &MultiPoly, q: &MultiPoly) -> MultiPoly {
    assert_eq!(p.vars(), q.vars(), "variable lists must agree");
    if p.is_zero() && q.is_zero() {
        return MultiPoly::zero(p.vars());
    }
    let g = gcd_rec(p, q);
    if g.is_constant() {
        return MultiPoly::constant(p.vars(), BigRational::one());
    }
    g.primitive_integer().monic(MonomialOrder::GrevLex)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::parse_poly;

    fn vs() -> Vec<String> {
        vec!["x".to_string(), "y".to_string()]
    }

    fn p(s: &str) -> MultiPoly {
        parse_poly(&vs(), s).unwrap()
    }

    #[test]
    fn monomial_case() {
        assert_eq!(gcd_poly(&p("x^2*y"), &p("x*y^2")), p("x*y"));
    }

    #[test]
    fn running_example_factor() {
        // gcd(x^d, -x^{d-i}y^{d-j}) = x^{d-i}: the scalar factor f.
        assert_eq!(gcd_poly(&p("x^3"), &p("-x^2*y^2")), p("x^2"));
        assert_eq!(gcd_poly(&p("x^2"), &p("-x*y")), p("x"));
    }

    #[test]
    fn division_oracle_case() {
        // (x^2 + x*y) = x * (x + y), so gcd with (x + y) is x + y;
        // verified by exact division of both inputs.
        let g = gcd_poly(&p("x^2 + x*y"), &p("x + y"));
        assert_eq!(g, p("x + y"));
        assert!(g.divides(&p("x^2 + x*y")));
        assert!(g.divides(&p("x + y")));
    }

    #[test]
    fn gcd_with_zero() {
        assert_eq!(gcd_poly(&MultiPoly::zero(&vs()), &p("2*x + 2*y")), p("x + y"));
    }

    #[test]
    fn coprime_inputs() {
        assert_eq!(gcd_poly(&p("x^2 + 1"), &p("y")), p("1"));
        assert_eq!(gcd_poly(&p("x + y"), &p("x - y")), p("1"));
    }

    #[test]
    fn common_multivariate_factor() {
        let r = p("x^2 + y");
        let a = p("x + y").mul(&r);
        let b = p("y^2").mul(&r);
        let g = gcd_poly(&a, &b);
        assert_eq!(g, r.monic(MonomialOrder::GrevLex));
    }

    #[test]
    fn cofactors_are_coprime() {
        let a = p("x^3*y - x*y^3");
        let b = p("x^2*y^2");
        let g = gcd_poly(&a, &b);
        let ca = a.exact_div(&g).unwrap();
        let cb = b.exact_div(&g).unwrap();
        assert!(gcd_poly(&ca, &cb).is_constant());
    }
}
