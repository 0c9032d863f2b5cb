//! Sparse multivariate polynomials over arbitrary-precision rationals.
//!
//! Terms are stored in a `BTreeMap` keyed by exponent vector, so every
//! polynomial has one canonical representation and equality is structural.
//! No operation in this module ever rounds: all arithmetic is exact.

mod gcd;
mod parse;
mod resultant;

pub use gcd::gcd_poly;
pub use parse::parse_poly;
pub use resultant::resultant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("variable lists differ: {0:?} vs {1:?}")]
    VarMismatch(Vec<String>, Vec<String>),
    #[error("resultant requires positive degree in `{0}` for both inputs")]
    DegreeZeroInVar(String),
    #[error("division is not exact")]
    InexactDivision,
}

/// Total order on monomials (exponent vectors).
///
/// `Block { split }` is an elimination order for the first `split`
/// variables: it compares the leading block by graded reverse
/// lexicographic order first, then the tail block the same way.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MonomialOrder {
    Lex,
    GrevLex,
    Block { split: usize },
}

fn grevlex_cmp(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    match da.cmp(&db) {
        Ordering::Equal => {
            for i in (0..a.len()).rev() {
                match a[i].cmp(&b[i]) {
                    Ordering::Equal => continue,
                    // smaller exponent in the last differing position wins
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                }
            }
            Ordering::Equal
        }
        other => other,
    }
}

impl MonomialOrder {
    pub fn cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        debug_assert_eq!(a.len(), b.len());
        match *self {
            MonomialOrder::Lex => {
                for i in 0..a.len() {
                    match a[i].cmp(&b[i]) {
                        Ordering::Equal => continue,
                        other => return other,
                    }
                }
                Ordering::Equal
            }
            MonomialOrder::GrevLex => grevlex_cmp(a, b),
            MonomialOrder::Block { split } => {
                let head = grevlex_cmp(&a[..split], &b[..split]);
                if head != Ordering::Equal {
                    return head;
                }
                grevlex_cmp(&a[split..], &b[split..])
            }
        }
    }
}

pub fn monomial_divides(d: &[u32], m: &[u32]) -> bool {
    d.iter().zip(m).all(|(a, b)| a <= b)
}

pub fn monomial_lcm(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

pub fn monomial_mul(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn monomial_div(m: &[u32], d: &[u32]) -> Vec<u32> {
    m.iter().zip(d).map(|(x, y)| x - y).collect()
}

/// Result of a homogeneity test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Homogeneity {
    Inhomogeneous,
    /// The zero polynomial is homogeneous of undefined degree.
    ZeroPoly,
    Degree(u32),
}

impl Homogeneity {
    pub fn is_homogeneous(&self) -> bool {
        !matches!(self, Homogeneity::Inhomogeneous)
    }
}

/// Sparse multivariate polynomial with rational coefficients.
///
/// Invariants: no stored coefficient is zero and every exponent vector has
/// length equal to the number of variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPoly {
    vars: Vec<String>,
    terms: BTreeMap<Vec<u32>, BigRational>,
}

pub fn qint(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn qrat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

impl MultiPoly {
    pub fn zero(vars: &[String]) -> Self {
        MultiPoly { vars: vars.to_vec(), terms: BTreeMap::new() }
    }

    pub fn constant(vars: &[String], c: BigRational) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(vec![0; vars.len()], c);
        }
        p
    }

    pub fn one(vars: &[String]) -> Self {
        Self::constant(vars, BigRational::one())
    }

    pub fn var(vars: &[String], name: &str) -> Result<Self, PolyError> {
        let idx = vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| PolyError::UnknownVariable(name.to_string()))?;
        Ok(Self::var_idx(vars, idx))
    }

    pub fn var_idx(vars: &[String], idx: usize) -> Self {
        let mut exps = vec![0; vars.len()];
        exps[idx] = 1;
        let mut p = Self::zero(vars);
        p.terms.insert(exps, BigRational::one());
        p
    }

    pub fn monomial(vars: &[String], exps: Vec<u32>, coeff: BigRational) -> Self {
        assert_eq!(exps.len(), vars.len());
        let mut p = Self::zero(vars);
        if !coeff.is_zero() {
            p.terms.insert(exps, coeff);
        }
        p
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x == 0))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn constant_term(&self) -> BigRational {
        self.terms
            .get(&vec![0; self.vars.len()])
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    fn same_vars(&self, other: &Self) -> Result<(), PolyError> {
        if self.vars != other.vars {
            return Err(PolyError::VarMismatch(self.vars.clone(), other.vars.clone()));
        }
        Ok(())
    }

    fn insert_term(&mut self, exps: Vec<u32>, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get() + &c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.same_vars(other).expect("variable lists must agree");
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.insert_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -c.clone();
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.same_vars(other).expect("variable lists must agree");
        let mut out = Self::zero(&self.vars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.insert_term(monomial_mul(ea, eb), ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = &*v * c;
        }
        out
    }

    pub fn mul_monomial(&self, exps: &[u32], c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        let mut out = Self::zero(&self.vars);
        for (e, v) in &self.terms {
            out.terms.insert(monomial_mul(e, exps), v * c);
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(&self.vars);
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>())
            .max()
    }

    pub fn degree_in(&self, var: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[var]).max()
    }

    pub fn homogeneity(&self) -> Homogeneity {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        match degs.next() {
            None => Homogeneity::ZeroPoly,
            Some(d0) => {
                if degs.all(|d| d == d0) {
                    Homogeneity::Degree(d0)
                } else {
                    Homogeneity::Inhomogeneous
                }
            }
        }
    }

    /// Weighted degree check: every term must satisfy Σ wᵢ·eᵢ = target.
    pub fn is_weight_homogeneous(&self, weights: &[i64], target: i64) -> bool {
        self.terms.keys().all(|e| {
            e.iter()
                .zip(weights)
                .map(|(&x, &w)| x as i64 * w)
                .sum::<i64>()
                == target
        })
    }

    pub fn leading_monomial(&self, order: MonomialOrder) -> Option<&Vec<u32>> {
        self.terms.keys().max_by(|a, b| order.cmp(a, b))
    }

    pub fn leading_term(&self, order: MonomialOrder) -> Option<(&Vec<u32>, &BigRational)> {
        self.leading_monomial(order).map(|m| (m, &self.terms[m]))
    }

    pub fn leading_coeff(&self, order: MonomialOrder) -> BigRational {
        self.leading_term(order)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(BigRational::zero)
    }

    /// Divide by the grevlex leading coefficient, the canonical rescaling.
    pub fn monic(&self, order: MonomialOrder) -> Self {
        match self.leading_term(order) {
            None => self.clone(),
            Some((_, c)) => {
                let inv = BigRational::one() / c.clone();
                self.scale(&inv)
            }
        }
    }

    /// Clear denominators and divide by the integer content; the sign is
    /// normalized so the grevlex leading coefficient is positive.
    pub fn primitive_integer(&self) -> Self {
        use num_integer::Integer;
        if self.is_zero() {
            return self.clone();
        }
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            den_lcm = den_lcm.lcm(c.denom());
        }
        let mut num_gcd = BigInt::zero();
        for c in self.terms.values() {
            let scaled = c.numer() * (&den_lcm / c.denom());
            num_gcd = num_gcd.gcd(&scaled);
        }
        if num_gcd.is_zero() {
            return self.clone();
        }
        let factor = BigRational::new(den_lcm, num_gcd);
        let out = self.scale(&factor);
        if out.leading_coeff(MonomialOrder::GrevLex).is_negative() {
            out.neg()
        } else {
            out
        }
    }

    /// Exact division: returns `self / d` when the remainder is zero.
    pub fn exact_div(&self, d: &Self) -> Result<Self, PolyError> {
        self.same_vars(d).expect("variable lists must agree");
        assert!(!d.is_zero(), "division by zero polynomial");
        let order = MonomialOrder::GrevLex;
        let (dm, dc) = d.leading_term(order).unwrap();
        let dm = dm.clone();
        let dc = dc.clone();
        let mut rem = self.clone();
        let mut quot = Self::zero(&self.vars);
        while let Some((rm, rc)) = rem.leading_term(order) {
            if !monomial_divides(&dm, rm) {
                return Err(PolyError::InexactDivision);
            }
            let qm = monomial_div(rm, &dm);
            let qc = rc / &dc;
            quot.insert_term(qm.clone(), qc.clone());
            rem = rem.sub(&d.mul_monomial(&qm, &qc));
        }
        Ok(quot)
    }

    pub fn divides(&self, other: &Self) -> bool {
        other.exact_div(self).is_ok()
    }

    pub fn derivative(&self, var: usize) -> Self {
        let mut out = Self::zero(&self.vars);
        for (e, c) in &self.terms {
            if e[var] == 0 {
                continue;
            }
            let mut ne = e.clone();
            ne[var] -= 1;
            out.insert_term(ne, c * BigRational::from_integer(BigInt::from(e[var])));
        }
        out
    }

    /// Substitute each variable by the polynomial `images[i]` (all over a
    /// common target variable list).
    pub fn substitute(&self, images: &[MultiPoly]) -> Self {
        assert_eq!(images.len(), self.vars.len());
        let target_vars = images
            .first()
            .map(|p| p.vars.clone())
            .unwrap_or_else(|| self.vars.clone());
        let mut out = MultiPoly::zero(&target_vars);
        for (e, c) in &self.terms {
            let mut term = MultiPoly::constant(&target_vars, c.clone());
            for (i, &exp) in e.iter().enumerate() {
                if exp > 0 {
                    term = term.mul(&images[i].pow(exp));
                }
            }
            out = out.add(&term);
        }
        out
    }

    /// Evaluate at a rational point.
    pub fn eval_rational(&self, point: &[BigRational]) -> BigRational {
        assert_eq!(point.len(), self.vars.len());
        let mut acc = BigRational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &exp) in e.iter().enumerate() {
                for _ in 0..exp {
                    t = t * &point[i];
                }
            }
            acc += t;
        }
        acc
    }

    /// Rebuild over a reordered variable list given by `perm`, where
    /// `perm[new_index] = old_index`.
    pub fn permute_vars(&self, perm: &[usize], new_vars: &[String]) -> Self {
        assert_eq!(perm.len(), self.vars.len());
        let mut out = MultiPoly::zero(new_vars);
        for (e, c) in &self.terms {
            let ne: Vec<u32> = perm.iter().map(|&old| e[old]).collect();
            out.terms.insert(ne, c.clone());
        }
        out
    }

    /// Re-express over a superset variable list; every variable of `self`
    /// must occur in `new_vars`.
    pub fn extend_vars(&self, new_vars: &[String]) -> Self {
        let map: Vec<usize> = self
            .vars
            .iter()
            .map(|v| {
                new_vars
                    .iter()
                    .position(|w| w == v)
                    .expect("extend_vars: missing variable")
            })
            .collect();
        let mut out = MultiPoly::zero(new_vars);
        for (e, c) in &self.terms {
            let mut ne = vec![0u32; new_vars.len()];
            for (i, &exp) in e.iter().enumerate() {
                ne[map[i]] = exp;
            }
            out.terms.insert(ne, c.clone());
        }
        out
    }

    /// Drop variables that do not occur; fails if a dropped variable has a
    /// positive exponent somewhere.
    pub fn restrict_vars(&self, new_vars: &[String]) -> Result<Self, PolyError> {
        let map: Vec<Option<usize>> = self
            .vars
            .iter()
            .map(|v| new_vars.iter().position(|w| w == v))
            .collect();
        let mut out = MultiPoly::zero(new_vars);
        for (e, c) in &self.terms {
            let mut ne = vec![0u32; new_vars.len()];
            for (i, &exp) in e.iter().enumerate() {
                match map[i] {
                    Some(j) => ne[j] = exp,
                    None if exp == 0 => {}
                    None => {
                        return Err(PolyError::UnknownVariable(self.vars[i].clone()));
                    }
                }
            }
            out.terms.insert(ne, c.clone());
        }
        Ok(out)
    }

    /// True when the variable occurs with positive exponent.
    pub fn involves(&self, var: usize) -> bool {
        self.terms.keys().any(|e| e[var] > 0)
    }

    /// Substitute a single variable by a constant.
    pub fn eval_var(&self, var: usize, value: &BigRational) -> Self {
        let mut out = Self::zero(&self.vars);
        for (e, c) in &self.terms {
            let mut ne = e.clone();
            let exp = ne[var];
            ne[var] = 0;
            let mut factor = c.clone();
            for _ in 0..exp {
                factor = factor * value;
            }
            out.insert_term(ne, factor);
        }
        out
    }

    /// Coefficients as univariate in `var`, index = exponent. The entries
    /// are polynomials in the same ambient ring with `var`-degree zero.
    pub fn coeffs_in(&self, var: usize) -> Vec<MultiPoly> {
        let deg = self.degree_in(var).unwrap_or(0) as usize;
        let mut coeffs = vec![Self::zero(&self.vars); deg + 1];
        for (e, c) in &self.terms {
            let k = e[var] as usize;
            let mut ne = e.clone();
            ne[var] = 0;
            coeffs[k].insert_term(ne, c.clone());
        }
        coeffs
    }

    /// Rebuild from univariate coefficients in `var`.
    pub fn from_coeffs_in(vars: &[String], var: usize, coeffs: &[MultiPoly]) -> Self {
        let mut out = Self::zero(vars);
        for (k, c) in coeffs.iter().enumerate() {
            let mut shift = vec![0u32; vars.len()];
            shift[var] = k as u32;
            out = out.add(&c.mul_monomial(&shift, &BigRational::one()));
        }
        out
    }
}

fn fmt_coeff(c: &BigRational) -> String {
    if c.denom().is_one() {
        format!("{}", c.numer())
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for MultiPoly {
    /// Canonical text form: terms in descending grevlex, `*` between
    /// factors, `^` for powers; round-trips through `parse_poly`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut monos: Vec<&Vec<u32>> = self.terms.keys().collect();
        monos.sort_by(|a, b| MonomialOrder::GrevLex.cmp(b, a));
        for (i, m) in monos.iter().enumerate() {
            let c = &self.terms[*m];
            let neg = c.is_negative();
            let abs = if neg { -c.clone() } else { c.clone() };
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || m.iter().all(|&e| e == 0) {
                factors.push(fmt_coeff(&abs));
            }
            for (v, &e) in self.vars.iter().zip(m.iter()) {
                match e {
                    0 => {}
                    1 => factors.push(v.clone()),
                    _ => factors.push(format!("{}^{}", v, e)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vs(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    fn p(vars: &[String], s: &str) -> MultiPoly {
        parse_poly(vars, s).unwrap()
    }

    #[test]
    fn arithmetic_basics() {
        let v = vs(&["x", "y"]);
        let a = p(&v, "x^2 + y");
        let b = p(&v, "x^2 - y");
        assert_eq!(a.add(&b), p(&v, "2*x^2"));
        assert_eq!(a.mul(&b), p(&v, "x^4 - y^2"));
        assert_eq!(a.sub(&a), MultiPoly::zero(&v));
    }

    #[test]
    fn homogeneity_cases() {
        let v = vs(&["x", "y"]);
        assert_eq!(p(&v, "x^2 + x*y").homogeneity(), Homogeneity::Degree(2));
        assert_eq!(p(&v, "x^2 + x").homogeneity(), Homogeneity::Inhomogeneous);
        assert_eq!(p(&v, "x^3").homogeneity(), Homogeneity::Degree(3));
        assert_eq!(MultiPoly::zero(&v).homogeneity(), Homogeneity::ZeroPoly);
    }

    #[test]
    fn exact_division() {
        let v = vs(&["x", "y"]);
        let a = p(&v, "x^2 + x*y");
        let d = p(&v, "x + y");
        assert_eq!(a.exact_div(&d).unwrap(), p(&v, "x"));
        assert!(p(&v, "x^2 + 1").exact_div(&d).is_err());
    }

    #[test]
    fn grevlex_leading_term() {
        let v = vs(&["x", "y"]);
        // x^2 y and x y^2 have equal degree; grevlex prefers x^2 y.
        let a = p(&v, "x*y^2 + x^2*y");
        assert_eq!(a.leading_monomial(MonomialOrder::GrevLex).unwrap(), &vec![2, 1]);
        assert_eq!(
            MonomialOrder::Lex.cmp(&[1, 0], &[0, 5]),
            Ordering::Greater
        );
    }

    #[test]
    fn derivative_and_eval() {
        let v = vs(&["x", "y"]);
        let a = p(&v, "x^3*y - 2*y^2");
        assert_eq!(a.derivative(0), p(&v, "3*x^2*y"));
        assert_eq!(a.derivative(1), p(&v, "x^3 - 4*y"));
        let val = a.eval_rational(&[qint(2), qint(3)]);
        assert_eq!(val, qint(24 - 18));
    }

    #[test]
    fn display_round_trip() {
        let v = vs(&["x", "y"]);
        for s in ["x^2*y - 3/2*y^3", "-x + 1", "0", "5", "x*y + x + y + 1"] {
            let a = p(&v, s);
            let back = p(&v, &a.to_string());
            assert_eq!(a, back, "round trip failed for {s}");
        }
    }

    #[test]
    fn weight_homogeneous() {
        let v = vs(&["x", "y"]);
        // weights (1, -1): x^2 y has weight 1
        assert!(p(&v, "x^2*y").is_weight_homogeneous(&[1, -1], 1));
        assert!(!p(&v, "x^2*y + y").is_weight_homogeneous(&[1, -1], 1));
    }
}
