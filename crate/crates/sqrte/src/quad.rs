//! Exact linear algebra of complex quadratic vector spaces with rational
//! Gram matrices: isotropy tests, the two families of maximal isotropic
//! subspaces and their signs, hyperbolic and orthonormal coordinate
//! changes, random special-orthogonal isometries.
//!
//! Sign convention: the stored reference plane is positive and a maximal
//! isotropic L has sign +1 exactly when dim(L ∩ ref) ≡ n (mod 2),
//! multiplied by the stored orientation unit. This is calibrated so that
//! span(∂X, ∂W) is positive for q = XY + ZW with the standard
//! orientation. If the convention of the ambient literature differs by a
//! global sign, flipping the stored unit restores agreement; no route
//! output depends on anything finer.

use crate::linalg::{intersection_dim, QMatrix};
use crate::rng::SeededRng;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum QuadError {
    #[error("Gram matrix must be symmetric and nondegenerate")]
    BadGram,
    #[error("subspace has wrong ambient dimension")]
    DimensionMismatch,
    #[error("subspace is not maximal isotropic")]
    NotMaximalIsotropic,
    #[error("no rational isotropic vector found: {0}")]
    NoRationalSplitting(String),
    #[error("vector is not isotropic")]
    NotIsotropic,
    #[error("zero vector")]
    ZeroVector,
    #[error("space carries no reference isotropic plane (form may be anisotropic over Q)")]
    RefRequired,
    #[error("Cayley transform stayed singular after {0} retries")]
    SingularCayley(usize),
}

/// Subspace given by a basis matrix whose columns are the basis vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    basis: QMatrix,
}

impl Subspace {
    pub fn new(basis: QMatrix) -> Self {
        assert_eq!(basis.rank(), basis.cols(), "basis columns must be independent");
        Subspace { basis }
    }

    pub fn from_columns(cols: Vec<Vec<BigRational>>) -> Self {
        Self::new(QMatrix::from_columns(cols))
    }

    pub fn basis(&self) -> &QMatrix {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn contains_vector(&self, v: &[BigRational]) -> bool {
        self.basis.solve(v).is_some()
    }
}

/// Hyperbolic coordinates: columns of `lambda` span the positive maximal
/// isotropic, columns of `mu` its dual complement, normalized so that the
/// quadratic form reads Σ xᵢyᵢ on (Σxᵢλᵢ + Σyᵢμᵢ).
#[derive(Debug, Clone)]
pub struct HyperbolicSplitting {
    pub lambda: QMatrix,
    pub mu: QMatrix,
}

impl HyperbolicSplitting {
    /// Full change-of-basis matrix [λ₁…λₙ μ₁…μₙ].
    pub fn change_matrix(&self) -> QMatrix {
        self.lambda.hstack(&self.mu)
    }
}

#[derive(Debug, Clone)]
pub struct QuadSpace {
    n: usize,
    gram: QMatrix,
    reference: Option<QMatrix>,
    unit: i8,
}

impl QuadSpace {
    pub fn new(gram: QMatrix, reference: Option<QMatrix>, unit: i8) -> Result<Self, QuadError> {
        let dim = gram.rows();
        if gram.cols() != dim || dim % 2 != 0 || dim == 0 {
            return Err(QuadError::BadGram);
        }
        if gram.transpose() != gram || gram.det().is_zero() {
            return Err(QuadError::BadGram);
        }
        assert!(unit == 1 || unit == -1);
        let n = dim / 2;
        let space = QuadSpace { n, gram, reference: None, unit };
        if let Some(r) = reference {
            if r.rows() != dim || r.cols() != n {
                return Err(QuadError::DimensionMismatch);
            }
            if !space.is_isotropic_subspace(&r) {
                return Err(QuadError::NotMaximalIsotropic);
            }
            return Ok(QuadSpace { reference: Some(r), ..space });
        }
        Ok(space)
    }

    /// Build from a Gram matrix alone; the canonical rational splitting is
    /// computed and its lambda half declared positive. Spaces anisotropic
    /// over Q come out with no reference plane and support only the
    /// numeric routes.
    pub fn from_gram(gram: QMatrix) -> Result<Self, QuadError> {
        let mut space = QuadSpace::new(gram, None, 1)?;
        if let Ok((lambda_cols, _)) = space.raw_splitting() {
            space.reference = Some(QMatrix::from_columns(lambda_cols));
        }
        Ok(space)
    }

    /// Standard form Σ XₖYₖ on variables ordered (X₁, Y₁, …, Xₙ, Yₙ). The
    /// reference positive plane is span(∂X₁, …, ∂X_{n−1}, ∂Yₙ); for n = 2
    /// (coordinates X, Y, Z, W and q = XY + ZW) this is span(∂X, ∂W).
    pub fn hyperbolic(n: usize) -> Self {
        let dim = 2 * n;
        let half = BigRational::new(1.into(), 2.into());
        let mut gram = QMatrix::zero(dim, dim);
        for k in 0..n {
            gram[(2 * k, 2 * k + 1)] = half.clone();
            gram[(2 * k + 1, 2 * k)] = half.clone();
        }
        let mut cols = Vec::new();
        for k in 0..n - 1 {
            let mut c = vec![BigRational::zero(); dim];
            c[2 * k] = BigRational::one();
            cols.push(c);
        }
        let mut last = vec![BigRational::zero(); dim];
        last[dim - 1] = BigRational::one();
        cols.push(last);
        QuadSpace::new(gram, Some(QMatrix::from_columns(cols)), 1).unwrap()
    }

    /// Sum of squares Σ Xᵢ²; anisotropic over Q, numeric routes only.
    pub fn sum_of_squares(dim: usize) -> Self {
        assert!(dim % 2 == 0);
        QuadSpace::new(QMatrix::identity(dim), None, 1).unwrap()
    }

    /// The rank-6 form X₁X₂ + X₁X₃ + X₂X₃ − X₄² − X₅² − X₆².
    pub fn eg2_form() -> Self {
        let half = BigRational::new(1.into(), 2.into());
        let mut gram = QMatrix::zero(6, 6);
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            gram[(i, j)] = half.clone();
            gram[(j, i)] = half.clone();
        }
        for i in 3..6 {
            gram[(i, i)] = -BigRational::one();
        }
        QuadSpace::from_gram(gram).unwrap()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        2 * self.n
    }

    pub fn gram(&self) -> &QMatrix {
        &self.gram
    }

    pub fn orientation_unit(&self) -> i8 {
        self.unit
    }

    /// Same space with the orientation unit reversed.
    pub fn flipped(&self) -> Self {
        QuadSpace { unit: -self.unit, ..self.clone() }
    }

    pub fn reference(&self) -> Result<Subspace, QuadError> {
        self.reference
            .clone()
            .map(Subspace::new)
            .ok_or(QuadError::RefRequired)
    }

    pub fn bilinear(&self, v: &[BigRational], w: &[BigRational]) -> BigRational {
        let bw = self.gram.mul_vec(w);
        v.iter()
            .zip(&bw)
            .map(|(a, b)| a * b)
            .fold(BigRational::zero(), |a, b| a + b)
    }

    pub fn q(&self, v: &[BigRational]) -> BigRational {
        self.bilinear(v, v)
    }

    fn is_isotropic_subspace(&self, basis: &QMatrix) -> bool {
        basis
            .transpose()
            .mul(&self.gram)
            .mul(basis)
            .is_zero_matrix()
    }

    pub fn is_maximal_isotropic(&self, l: &Subspace) -> Result<bool, QuadError> {
        if l.ambient_dim() != self.dim() {
            return Err(QuadError::DimensionMismatch);
        }
        Ok(l.dim() == self.n && self.is_isotropic_subspace(l.basis()))
    }

    /// Sign (±1) of a maximal isotropic subspace under the intersection
    /// parity rule, multiplied by the orientation unit.
    pub fn isotropic_sign(&self, l: &Subspace) -> Result<i64, QuadError> {
        if !self.is_maximal_isotropic(l)? {
            return Err(QuadError::NotMaximalIsotropic);
        }
        let reference = self.reference()?;
        let meet = intersection_dim(l.basis(), reference.basis());
        let parity = (self.n + meet) % 2;
        let base = if parity == 0 { 1 } else { -1 };
        Ok(base * self.unit as i64)
    }

    /// Rational hyperbolic splitting with the lambda half positive.
    pub fn hyperbolic_splitting(&self) -> Result<HyperbolicSplitting, QuadError> {
        let (mut lambda_cols, mut mu_cols) = self.raw_splitting()?;
        if self.reference.is_some() {
            let lambda = Subspace::new(QMatrix::from_columns(lambda_cols.clone()));
            if self.isotropic_sign(&lambda)? < 0 {
                // exchanging one hyperbolic partner switches the family
                let k = self.n - 1;
                std::mem::swap(&mut lambda_cols[k], &mut mu_cols[k]);
            }
        }
        let splitting = HyperbolicSplitting {
            lambda: QMatrix::from_columns(lambda_cols),
            mu: QMatrix::from_columns(mu_cols),
        };
        debug_assert!(self.verify_splitting(&splitting));
        Ok(splitting)
    }

    fn verify_splitting(&self, s: &HyperbolicSplitting) -> bool {
        let lt_b_l = s.lambda.transpose().mul(&self.gram).mul(&s.lambda);
        let mt_b_m = s.mu.transpose().mul(&self.gram).mul(&s.mu);
        let lt_b_m = s.lambda.transpose().mul(&self.gram).mul(&s.mu);
        let mut half_id = QMatrix::zero(self.n, self.n);
        for i in 0..self.n {
            half_id[(i, i)] = BigRational::new(1.into(), 2.into());
        }
        lt_b_l.is_zero_matrix() && mt_b_m.is_zero_matrix() && lt_b_m == half_id
    }

    /// Hyperbolic pairs without any sign adjustment.
    #[allow(clippy::type_complexity)]
    fn raw_splitting(&self) -> Result<(Vec<Vec<BigRational>>, Vec<Vec<BigRational>>), QuadError> {
        if self.is_definite() {
            return Err(QuadError::NoRationalSplitting(
                "the form is definite, hence anisotropic over Q; supply a field extension or a pre-split Gram matrix".into(),
            ));
        }
        let dim = self.dim();
        let mut lambdas = Vec::new();
        let mut mus = Vec::new();
        let mut span = QMatrix::identity(dim);
        for _ in 0..self.n {
            let (v, w) = self.hyperbolic_pair_in(&span)?;
            lambdas.push(v.clone());
            mus.push(w.clone());
            // orthogonal complement of (v, w) inside the current span
            let vb = self.gram.mul_vec(&v);
            let wb = self.gram.mul_vec(&w);
            let rows = vec![
                span.transpose().mul_vec(&vb),
                span.transpose().mul_vec(&wb),
            ];
            let constraints = QMatrix::from_rows(rows);
            let kernel = constraints.kernel();
            if kernel.is_empty() && lambdas.len() < self.n {
                return Err(QuadError::NoRationalSplitting(
                    "complement collapsed before the splitting was complete".into(),
                ));
            }
            let new_cols: Vec<Vec<BigRational>> =
                kernel.iter().map(|c| span.mul_vec(c)).collect();
            if !new_cols.is_empty() {
                span = QMatrix::from_columns(new_cols);
            }
        }
        Ok((lambdas, mus))
    }

    fn is_definite(&self) -> bool {
        // leading principal minors: all positive, or alternating starting
        // negative; a zero minor already rules definiteness out
        let dim = self.dim();
        let mut signs = Vec::new();
        for k in 1..=dim {
            let mut m = QMatrix::zero(k, k);
            for i in 0..k {
                for j in 0..k {
                    m[(i, j)] = self.gram[(i, j)].clone();
                }
            }
            let d = m.det();
            if d.is_zero() {
                return false;
            }
            signs.push(d.is_positive());
        }
        let positive = signs.iter().all(|&s| s);
        let negative = signs.iter().enumerate().all(|(i, &s)| s == (i % 2 == 1));
        positive || negative
    }

    /// One hyperbolic pair (v, w) with q(v) = 0 = q(w), <v, w> = 1/2,
    /// inside the column span of `span`.
    fn hyperbolic_pair_in(
        &self,
        span: &QMatrix,
    ) -> Result<(Vec<BigRational>, Vec<BigRational>), QuadError> {
        let k = span.cols();
        let restricted = span.transpose().mul(&self.gram).mul(span);
        let coeffs = find_isotropic_coeffs(&restricted).ok_or_else(|| {
            QuadError::NoRationalSplitting(
                "bounded search found no rational isotropic vector; supply a field extension or a pre-split Gram matrix".into(),
            )
        })?;
        let v = span.mul_vec(&coeffs);
        // partner with nonzero pairing
        let mut partner = None;
        for j in 0..k {
            let cand = span.column(j);
            if !self.bilinear(&v, &cand).is_zero() {
                partner = Some(cand);
                break;
            }
        }
        let w0 = partner.ok_or(QuadError::BadGram)?;
        let a = self.bilinear(&v, &w0);
        let two_a = &a + &a;
        let w1: Vec<BigRational> = w0.iter().map(|c| c / &two_a).collect();
        // subtract q(w1)·v to make the partner isotropic
        let qw = self.q(&w1);
        let w: Vec<BigRational> = w1
            .iter()
            .zip(&v)
            .map(|(wi, vi)| wi - &(&qw * vi))
            .collect();
        debug_assert!(self.q(&v).is_zero());
        debug_assert!(self.q(&w).is_zero());
        debug_assert_eq!(self.bilinear(&v, &w), BigRational::new(1.into(), 2.into()));
        Ok((v, w))
    }

    /// Complex-orthonormal coordinates: a Gaussian-rational matrix C with
    /// CᵀBC = I, built from the hyperbolic splitting via uₖ = λₖ + μₖ,
    /// vₖ = i(λₖ − μₖ). The identity Gram matrix returns the identity.
    pub fn real_form_coordinates(&self) -> Result<CMatrixQ, QuadError> {
        if self.gram == QMatrix::identity(self.dim()) {
            return Ok(CMatrixQ::identity(self.dim()));
        }
        let s = self.hyperbolic_splitting()?;
        let dim = self.dim();
        let mut cols = Vec::new();
        for kk in 0..self.n {
            let lam = s.lambda.column(kk);
            let mu = s.mu.column(kk);
            let u: Vec<GaussQ> = lam
                .iter()
                .zip(&mu)
                .map(|(l, m)| GaussQ::new(l + m, BigRational::zero()))
                .collect();
            let v: Vec<GaussQ> = lam
                .iter()
                .zip(&mu)
                .map(|(l, m)| GaussQ::new(BigRational::zero(), l - m))
                .collect();
            cols.push(u);
            cols.push(v);
        }
        let c = CMatrixQ::from_columns(dim, cols);
        debug_assert!(c.congruence_is_identity(&self.gram));
        Ok(c)
    }

    /// Rational matrix G with GᵀBG = B and det G = 1, from the Cayley
    /// transform of a seeded random B-skew matrix. Deterministic per seed.
    pub fn random_special_orthogonal(&self, seed: u64) -> Result<QMatrix, QuadError> {
        let dim = self.dim();
        let b_inv = self.gram.inverse().expect("nondegenerate Gram");
        const RETRIES: usize = 16;
        for attempt in 0..RETRIES {
            let mut rng = SeededRng::derive(seed, 0x50EC1A1 + attempt as u64);
            let mut k = QMatrix::zero(dim, dim);
            for i in 0..dim {
                for j in i + 1..dim {
                    let c = rng.small_rational(3);
                    k[(i, j)] = c.clone();
                    k[(j, i)] = -c;
                }
            }
            let s = b_inv.mul(&k);
            let i_plus = QMatrix::identity(dim).add(&s);
            let Some(inv) = i_plus.inverse() else { continue };
            let g = QMatrix::identity(dim).sub(&s).mul(&inv);
            debug_assert_eq!(g.transpose().mul(&self.gram).mul(&g), self.gram);
            debug_assert_eq!(g.det(), BigRational::one());
            return Ok(g);
        }
        Err(QuadError::SingularCayley(RETRIES))
    }

    /// For n = 2: the unique positive and negative maximal isotropic
    /// planes containing an isotropic vector v.
    pub fn isotropic_envelopes_n2(
        &self,
        v: &[BigRational],
    ) -> Result<(Subspace, Subspace), QuadError> {
        assert_eq!(self.n, 2, "envelopes are defined for rank 4");
        if v.len() != 4 {
            return Err(QuadError::DimensionMismatch);
        }
        if v.iter().all(|c| c.is_zero()) {
            return Err(QuadError::ZeroVector);
        }
        if !self.q(v).is_zero() {
            return Err(QuadError::NotIsotropic);
        }
        let s = self.hyperbolic_splitting()?;
        let change = s.change_matrix();
        let inv = change.inverse().expect("splitting basis is invertible");
        let c = inv.mul_vec(v); // (σ1, σ2, τ1, τ2)
        let (s1, s2, t1, t2) = (c[0].clone(), c[1].clone(), c[2].clone(), c[3].clone());
        // projective parameter of the positive envelope: [c:d] = [σ1:τ2] = [−σ2:τ1]
        let (pc, pd) = if !s1.is_zero() || !t2.is_zero() {
            (s1.clone(), t2.clone())
        } else {
            (-s2.clone(), t1.clone())
        };
        // parameter of the negative envelope: [a:b] = [σ1:σ2] = [−τ2:τ1]
        let (na, nb) = if !s1.is_zero() || !s2.is_zero() {
            (s1, s2)
        } else {
            (-t2, t1)
        };
        let zero = BigRational::zero;
        let pos_split = vec![
            vec![pc.clone(), zero(), zero(), pd.clone()],
            vec![zero(), pc, -pd, zero()],
        ];
        let neg_split = vec![
            vec![na.clone(), nb.clone(), zero(), zero()],
            vec![zero(), zero(), -nb, na],
        ];
        let to_ambient = |cols: Vec<Vec<BigRational>>| {
            Subspace::new(QMatrix::from_columns(
                cols.into_iter().map(|col| change.mul_vec(&col)).collect(),
            ))
        };
        Ok((to_ambient(pos_split), to_ambient(neg_split)))
    }
}

/// Deterministic search for an isotropic vector of a small rational
/// quadratic form: diagonal zeros, then two-variable discriminants, then
/// bounded enumeration.
fn find_isotropic_coeffs(gram: &QMatrix) -> Option<Vec<BigRational>> {
    let k = gram.rows();
    let q = |c: &[BigRational]| -> BigRational {
        let gc = gram.mul_vec(c);
        c.iter()
            .zip(&gc)
            .map(|(a, b)| a * b)
            .fold(BigRational::zero(), |a, b| a + b)
    };
    for i in 0..k {
        if gram[(i, i)].is_zero() {
            let mut c = vec![BigRational::zero(); k];
            c[i] = BigRational::one();
            return Some(c);
        }
    }
    // two-variable quadratic: q(a·eᵢ + eⱼ) = Gᵢᵢa² + 2Gᵢⱼa + Gⱼⱼ
    for i in 0..k {
        for j in 0..k {
            if i == j {
                continue;
            }
            let gii = gram[(i, i)].clone();
            let gij = gram[(i, j)].clone();
            let gjj = gram[(j, j)].clone();
            let disc = &gij * &gij - &gii * &gjj;
            if let Some(root) = rational_sqrt(&disc) {
                let a = (-&gij + root) / gii;
                let mut c = vec![BigRational::zero(); k];
                c[i] = a;
                c[j] = BigRational::one();
                if q(&c).is_zero() && c.iter().any(|x| !x.is_zero()) {
                    return Some(c);
                }
            }
        }
    }
    // bounded enumeration over small integer coefficient vectors
    let bound = 3i64;
    let radix = (2 * bound + 1) as u64;
    let total = radix.pow(k as u32);
    for code in 1..total {
        let mut c = Vec::with_capacity(k);
        let mut rest = code;
        for _ in 0..k {
            let digit = (rest % radix) as i64 - bound;
            rest /= radix;
            c.push(BigRational::from_integer(digit.into()));
        }
        if c.iter().all(|x| x.is_zero()) {
            continue;
        }
        if q(&c).is_zero() {
            return Some(c);
        }
    }
    None
}

/// Gaussian-rational hyperbolic splitting. Exists for every nondegenerate
/// rational Gram matrix because −1 is a square in Q(i). Used when no
/// rational splitting exists (definite or otherwise Q-anisotropic forms);
/// the lambda half is the declared positive family, a convention fixed
/// only up to a global sign.
impl QuadSpace {
    pub fn gaussian_splitting(&self) -> Result<(Vec<Vec<GaussQ>>, Vec<Vec<GaussQ>>), QuadError> {
        let dim = self.dim();
        let mut lambdas = Vec::new();
        let mut mus = Vec::new();
        let mut span: Vec<Vec<GaussQ>> = (0..dim)
            .map(|j| {
                (0..dim)
                    .map(|i| if i == j { GaussQ::one() } else { GaussQ::zero() })
                    .collect()
            })
            .collect();
        let bil = |v: &[GaussQ], w: &[GaussQ]| -> GaussQ {
            let mut acc = GaussQ::zero();
            for i in 0..dim {
                for j in 0..dim {
                    if self.gram[(i, j)].is_zero() {
                        continue;
                    }
                    let term = v[i].mul(&w[j]);
                    acc = acc.add(&GaussQ::new(&term.re * &self.gram[(i, j)], &term.im * &self.gram[(i, j)]));
                }
            }
            acc
        };
        for _ in 0..self.n {
            let k = span.len();
            let restricted: Vec<Vec<GaussQ>> = (0..k)
                .map(|i| (0..k).map(|j| bil(&span[i], &span[j])).collect())
                .collect();
            let coeffs = find_isotropic_gauss(&restricted).ok_or_else(|| {
                QuadError::NoRationalSplitting(
                    "no isotropic vector found even over Q(i)".into(),
                )
            })?;
            let v: Vec<GaussQ> = (0..dim)
                .map(|r| {
                    let mut acc = GaussQ::zero();
                    for (c, col) in coeffs.iter().zip(&span) {
                        acc = acc.add(&c.mul(&col[r]));
                    }
                    acc
                })
                .collect();
            let w0 = span
                .iter()
                .find(|col| !bil(&v, col).is_zero())
                .cloned()
                .ok_or(QuadError::BadGram)?;
            let a = bil(&v, &w0);
            let two = GaussQ::new(BigRational::from_integer(2.into()), BigRational::zero());
            let inv2a = two.mul(&a).inv().expect("nonzero pairing");
            let w1: Vec<GaussQ> = w0.iter().map(|c| c.mul(&inv2a)).collect();
            let qw = bil(&w1, &w1);
            let w: Vec<GaussQ> = w1
                .iter()
                .zip(&v)
                .map(|(wi, vi)| wi.add(&qw.mul(vi).neg()))
                .collect();
            debug_assert!(bil(&v, &v).is_zero());
            debug_assert!(bil(&w, &w).is_zero());
            lambdas.push(v.clone());
            mus.push(w.clone());
            // complement inside the current span
            let rows: Vec<Vec<GaussQ>> = vec![
                span.iter().map(|col| bil(&v, col)).collect(),
                span.iter().map(|col| bil(&w, col)).collect(),
            ];
            let kernel = gauss_kernel(&rows, k);
            span = kernel
                .iter()
                .map(|coef| {
                    (0..dim)
                        .map(|r| {
                            let mut acc = GaussQ::zero();
                            for (c, col) in coef.iter().zip(&span) {
                                acc = acc.add(&c.mul(&col[r]));
                            }
                            acc
                        })
                        .collect()
                })
                .collect();
        }
        Ok((lambdas, mus))
    }
}

/// Kernel of a small matrix over the Gaussian rationals (rows given).
fn gauss_kernel(rows: &[Vec<GaussQ>], cols: usize) -> Vec<Vec<GaussQ>> {
    let mut m: Vec<Vec<GaussQ>> = rows.to_vec();
    let nrows = m.len();
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0usize;
    for c in 0..cols {
        if r >= nrows {
            break;
        }
        let Some(pr) = (r..nrows).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, pr);
        let inv = m[r][c].inv().unwrap();
        for j in 0..cols {
            m[r][j] = m[r][j].mul(&inv);
        }
        for i in 0..nrows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let sub = f.mul(&m[r][j]);
                    m[i][j] = m[i][j].add(&sub.neg());
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let mut basis = Vec::new();
    for f in 0..cols {
        if pivots.contains(&f) {
            continue;
        }
        let mut v = vec![GaussQ::zero(); cols];
        v[f] = GaussQ::one();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = m[row][f].clone().neg();
        }
        basis.push(v);
    }
    basis
}

/// Isotropic vector search over Q(i): diagonal zeros, two-variable
/// discriminants with Gaussian square roots, then bounded enumeration
/// over small Gaussian integers.
fn find_isotropic_gauss(gram: &[Vec<GaussQ>]) -> Option<Vec<GaussQ>> {
    let k = gram.len();
    let q = |c: &[GaussQ]| -> GaussQ {
        let mut acc = GaussQ::zero();
        for i in 0..k {
            for j in 0..k {
                acc = acc.add(&c[i].mul(&gram[i][j]).mul(&c[j]));
            }
        }
        acc
    };
    for i in 0..k {
        if gram[i][i].is_zero() {
            let mut c = vec![GaussQ::zero(); k];
            c[i] = GaussQ::one();
            return Some(c);
        }
    }
    for i in 0..k {
        for j in 0..k {
            if i == j {
                continue;
            }
            let gii = &gram[i][i];
            let gij = &gram[i][j];
            let gjj = &gram[j][j];
            let disc = gij.mul(gij).add(&gii.mul(gjj).neg());
            if let Some(root) = gauss_sqrt(&disc) {
                let a = gij.neg().add(&root).mul(&gii.inv().unwrap());
                let mut c = vec![GaussQ::zero(); k];
                c[i] = a;
                c[j] = GaussQ::one();
                if q(&c).is_zero() {
                    return Some(c);
                }
            }
        }
    }
    // enumeration over Gaussian integers with coordinates (a + bi),
    // a, b in [-2, 2]
    let vals: Vec<GaussQ> = {
        let mut v = Vec::new();
        for a in -2i64..=2 {
            for b in -2i64..=2 {
                v.push(GaussQ::new(
                    BigRational::from_integer(a.into()),
                    BigRational::from_integer(b.into()),
                ));
            }
        }
        v
    };
    let radix = vals.len() as u64;
    let total = radix.pow(k.min(4) as u32);
    for code in 1..total {
        let mut c = vec![GaussQ::zero(); k];
        let mut rest = code;
        for slot in c.iter_mut().take(k.min(4)) {
            *slot = vals[(rest % radix) as usize].clone();
            rest /= radix;
        }
        if c.iter().all(|x| x.is_zero()) {
            continue;
        }
        if q(&c).is_zero() {
            return Some(c);
        }
    }
    None
}

/// Square root in Q(i), when it exists.
fn gauss_sqrt(x: &GaussQ) -> Option<GaussQ> {
    if x.is_zero() {
        return Some(GaussQ::zero());
    }
    if x.im.is_zero() {
        if x.re.is_positive() {
            return rational_sqrt(&x.re).map(|r| GaussQ::new(r, BigRational::zero()));
        }
        let neg = -x.re.clone();
        return rational_sqrt(&neg).map(|r| GaussQ::new(BigRational::zero(), r));
    }
    // (u + vi)^2 = (u^2 - v^2) + 2uv·i: need norm a² + b² to be a square r²,
    // then u² = (a + r)/2.
    let norm = &x.re * &x.re + &x.im * &x.im;
    let r = rational_sqrt(&norm)?;
    let two = BigRational::from_integer(2.into());
    let u2 = (&x.re + &r) / &two;
    let u = rational_sqrt(&u2)?;
    if u.is_zero() {
        return None;
    }
    let v = &x.im / &(&two * &u);
    Some(GaussQ::new(u, v))
}

/// Exact square root of a nonnegative rational, when it exists.
fn rational_sqrt(x: &BigRational) -> Option<BigRational> {
    use num_bigint::BigInt;
    if x.is_negative() {
        return None;
    }
    let sqrt_int = |n: &BigInt| -> Option<BigInt> {
        let r = n.sqrt();
        if &(&r * &r) == n {
            Some(r)
        } else {
            None
        }
    };
    let num = sqrt_int(x.numer())?;
    let den = sqrt_int(x.denom())?;
    Some(BigRational::new(num, den))
}

/// Gaussian rational a + bi.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GaussQ {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussQ {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussQ { re, im }
    }

    pub fn zero() -> Self {
        GaussQ::new(BigRational::zero(), BigRational::zero())
    }

    pub fn one() -> Self {
        GaussQ::new(BigRational::one(), BigRational::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        GaussQ::new(&self.re + &o.re, &self.im + &o.im)
    }

    pub fn mul(&self, o: &Self) -> Self {
        GaussQ::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }

    pub fn neg(&self) -> Self {
        GaussQ::new(-self.re.clone(), -self.im.clone())
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let norm = &self.re * &self.re + &self.im * &self.im;
        Some(GaussQ::new(&self.re / &norm, -(&self.im / &norm)))
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        let f = |q: &BigRational| {
            let n = q.numer().to_string().parse::<f64>().unwrap_or(f64::NAN);
            let d = q.denom().to_string().parse::<f64>().unwrap_or(f64::NAN);
            n / d
        };
        (f(&self.re), f(&self.im))
    }
}

/// Dense matrix of Gaussian rationals (column-major storage of columns).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CMatrixQ {
    rows: usize,
    cols: Vec<Vec<GaussQ>>,
}

impl CMatrixQ {
    pub fn identity(n: usize) -> Self {
        let cols = (0..n)
            .map(|j| {
                (0..n)
                    .map(|i| if i == j { GaussQ::one() } else { GaussQ::zero() })
                    .collect()
            })
            .collect();
        CMatrixQ { rows: n, cols }
    }

    pub fn from_columns(rows: usize, cols: Vec<Vec<GaussQ>>) -> Self {
        assert!(cols.iter().all(|c| c.len() == rows));
        CMatrixQ { rows, cols }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> &GaussQ {
        &self.cols[j][i]
    }

    /// Check CᵀBC = I over the Gaussian rationals.
    pub fn congruence_is_identity(&self, b: &QMatrix) -> bool {
        let n = self.ncols();
        for p in 0..n {
            for r in 0..n {
                // (Cᵀ B C)[p][r] = Σ_{i,j} C[i][p] B[i][j] C[j][r]
                let mut acc = GaussQ::zero();
                for i in 0..self.rows {
                    for j in 0..self.rows {
                        if b[(i, j)].is_zero() {
                            continue;
                        }
                        let scaled = GaussQ::new(
                            &self.entry(i, p).re * &b[(i, j)],
                            &self.entry(i, p).im * &b[(i, j)],
                        );
                        acc = acc.add(&scaled.mul(self.entry(j, r)));
                    }
                }
                let expect = if p == r { GaussQ::one() } else { GaussQ::zero() };
                if acc != expect {
                    return false;
                }
            }
        }
        true
    }

    /// With CᵀBC = I the inverse is simply CᵀB.
    pub fn inverse_from_congruence(&self, b: &QMatrix) -> CMatrixQ {
        let n = self.rows;
        let mut cols = vec![vec![GaussQ::zero(); n]; n];
        for j in 0..n {
            for i in 0..n {
                // (CᵀB)[i][j] = Σ_k C[k][i] B[k][j]
                let mut acc = GaussQ::zero();
                for k in 0..n {
                    if b[(k, j)].is_zero() {
                        continue;
                    }
                    acc = acc.add(&GaussQ::new(
                        &self.entry(k, i).re * &b[(k, j)],
                        &self.entry(k, i).im * &b[(k, j)],
                    ));
                }
                cols[j][i] = acc;
            }
        }
        CMatrixQ { rows: n, cols }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::qint;

    fn e(dim: usize, i: usize) -> Vec<BigRational> {
        let mut v = vec![BigRational::zero(); dim];
        v[i] = BigRational::one();
        v
    }

    fn std4() -> QuadSpace {
        QuadSpace::hyperbolic(2)
    }

    #[test]
    fn standard_space_isotropy() {
        let sp = std4();
        // span(∂X, ∂W) is maximal isotropic
        let l = Subspace::from_columns(vec![e(4, 0), e(4, 3)]);
        assert!(sp.is_maximal_isotropic(&l).unwrap());
        // span(∂X, ∂Y) is not isotropic
        let m = Subspace::from_columns(vec![e(4, 0), e(4, 1)]);
        assert!(!sp.is_maximal_isotropic(&m).unwrap());
        // a line is not maximal
        let line = Subspace::from_columns(vec![e(4, 0)]);
        assert!(!sp.is_maximal_isotropic(&line).unwrap());
    }

    #[test]
    fn sign_calibration() {
        let sp = std4();
        let ref_plane = Subspace::from_columns(vec![e(4, 0), e(4, 3)]);
        assert_eq!(sp.isotropic_sign(&ref_plane).unwrap(), 1);
        let neg = Subspace::from_columns(vec![e(4, 0), e(4, 2)]);
        assert_eq!(sp.isotropic_sign(&neg).unwrap(), -1);
        // orientation reversal flips every sign
        let flipped = sp.flipped();
        assert_eq!(flipped.isotropic_sign(&ref_plane).unwrap(), -1);
        assert_eq!(flipped.isotropic_sign(&neg).unwrap(), 1);
    }

    #[test]
    fn standard_splitting_is_coordinate() {
        let sp = std4();
        let s = sp.hyperbolic_splitting().unwrap();
        assert_eq!(s.lambda.column(0), e(4, 0));
        assert_eq!(s.lambda.column(1), e(4, 3));
        assert_eq!(s.mu.column(0), e(4, 1));
        assert_eq!(s.mu.column(1), e(4, 2));
    }

    #[test]
    fn eg2_has_no_rational_splitting() {
        // The real signature of the (eg2) form is (1,5): no rational
        // 3-plane of isotropic vectors can exist.
        let sp = QuadSpace::eg2_form();
        assert!(matches!(
            sp.hyperbolic_splitting(),
            Err(QuadError::NoRationalSplitting(_)) | Err(QuadError::RefRequired)
        ));
    }

    #[test]
    fn eg2_gaussian_splitting() {
        let sp = QuadSpace::eg2_form();
        let (lambdas, mus) = sp.gaussian_splitting().unwrap();
        assert_eq!(lambdas.len(), 3);
        let dim = 6;
        let bil = |v: &[GaussQ], w: &[GaussQ]| -> GaussQ {
            let mut acc = GaussQ::zero();
            for i in 0..dim {
                for j in 0..dim {
                    if sp.gram()[(i, j)].is_zero() {
                        continue;
                    }
                    let t = v[i].mul(&w[j]);
                    acc = acc.add(&GaussQ::new(
                        &t.re * &sp.gram()[(i, j)],
                        &t.im * &sp.gram()[(i, j)],
                    ));
                }
            }
            acc
        };
        let half = GaussQ::new(BigRational::new(1.into(), 2.into()), BigRational::zero());
        for i in 0..3 {
            for j in 0..3 {
                assert!(bil(&lambdas[i], &lambdas[j]).is_zero());
                assert!(bil(&mus[i], &mus[j]).is_zero());
                let pairing = bil(&lambdas[i], &mus[j]);
                if i == j {
                    assert_eq!(pairing, half);
                } else {
                    assert!(pairing.is_zero());
                }
            }
        }
    }

    #[test]
    fn gaussian_sqrt_cases() {
        use num_bigint::BigInt;
        let g = |a: i64, b: i64| {
            GaussQ::new(
                BigRational::from_integer(BigInt::from(a)),
                BigRational::from_integer(BigInt::from(b)),
            )
        };
        // sqrt(-1) = i
        assert_eq!(gauss_sqrt(&g(-1, 0)).unwrap(), g(0, 1));
        // sqrt(2i) = 1 + i
        assert_eq!(gauss_sqrt(&g(0, 2)).unwrap(), g(1, 1));
        // sqrt(3 + 4i) = 2 + i
        assert_eq!(gauss_sqrt(&g(3, 4)).unwrap(), g(2, 1));
        // no sqrt of i in Q(i)
        assert!(gauss_sqrt(&g(0, 1)).is_none());
    }

    #[test]
    fn definite_form_rejected() {
        let sp = QuadSpace::sum_of_squares(4);
        assert!(matches!(
            sp.hyperbolic_splitting(),
            Err(QuadError::NoRationalSplitting(_)) | Err(QuadError::RefRequired)
        ));
    }

    #[test]
    fn real_form_congruence() {
        let sp = std4();
        let c = sp.real_form_coordinates().unwrap();
        assert!(c.congruence_is_identity(sp.gram()));
        // identity form: identity change
        let id = QuadSpace::sum_of_squares(4);
        assert_eq!(id.real_form_coordinates().unwrap(), CMatrixQ::identity(4));
        // rank 2 block
        let r2 = QuadSpace::hyperbolic(1);
        let c2 = r2.real_form_coordinates().unwrap();
        assert!(c2.congruence_is_identity(r2.gram()));
    }

    #[test]
    fn special_orthogonal_defining_identity() {
        let sp = std4();
        let g = sp.random_special_orthogonal(7).unwrap();
        assert_eq!(g.transpose().mul(sp.gram()).mul(&g), *sp.gram());
        assert_eq!(g.det(), qint(1));
        let g2 = sp.random_special_orthogonal(8).unwrap();
        assert_ne!(g, g2);
    }

    #[test]
    fn so_action_preserves_sign() {
        let sp = std4();
        let g = sp.random_special_orthogonal(42).unwrap();
        let ref_plane = Subspace::from_columns(vec![e(4, 0), e(4, 3)]);
        let neg = Subspace::from_columns(vec![e(4, 0), e(4, 2)]);
        for (plane, expected) in [(&ref_plane, 1), (&neg, -1)] {
            let moved = Subspace::new(g.mul(plane.basis()));
            assert_eq!(sp.isotropic_sign(&moved).unwrap(), expected);
        }
    }

    #[test]
    fn sign_matches_intersection_parity() {
        let sp = std4();
        let ref_plane = Subspace::from_columns(vec![e(4, 0), e(4, 3)]);
        let neg = Subspace::from_columns(vec![e(4, 0), e(4, 2)]);
        for seed in 0..6u64 {
            let g = sp.random_special_orthogonal(seed).unwrap();
            for base in [&ref_plane, &neg] {
                let l = Subspace::new(g.mul(base.basis()));
                let meet = intersection_dim(l.basis(), ref_plane.basis());
                let parity_sign = if (2 + meet) % 2 == 0 { 1 } else { -1 };
                assert_eq!(sp.isotropic_sign(&l).unwrap(), parity_sign);
            }
        }
    }

    #[test]
    fn envelopes_coordinate_points() {
        let sp = std4();
        // v = ∂X: positive envelope span(∂X, ∂W), negative span(∂X, ∂Z)
        let (pos, neg) = sp.isotropic_envelopes_n2(&e(4, 0)).unwrap();
        assert_eq!(sp.isotropic_sign(&pos).unwrap(), 1);
        assert_eq!(sp.isotropic_sign(&neg).unwrap(), -1);
        assert!(pos.contains_vector(&e(4, 0)));
        assert!(neg.contains_vector(&e(4, 0)));
        assert_eq!(intersection_dim(pos.basis(), neg.basis()), 1);
        // (Qq) inverse with (a,b,c,d) = (1,0,1,0): v = (1,0,0,0)
        let w = vec![qint(1), qint(0), qint(0), qint(0)];
        let (p2, n2) = sp.isotropic_envelopes_n2(&w).unwrap();
        assert_eq!(p2.basis(), pos.basis());
        assert_eq!(n2.basis(), neg.basis());
    }

    #[test]
    fn envelopes_generic_vector() {
        let sp = std4();
        // v = (ac, -bd, ad, bc) for (a,b,c,d) = (2,1,3,5)
        let v = vec![qint(6), qint(-5), qint(10), qint(3)];
        assert!(sp.q(&v).is_zero());
        let (pos, neg) = sp.isotropic_envelopes_n2(&v).unwrap();
        assert_eq!(sp.isotropic_sign(&pos).unwrap(), 1);
        assert_eq!(sp.isotropic_sign(&neg).unwrap(), -1);
        assert!(pos.contains_vector(&v));
        assert!(neg.contains_vector(&v));
        assert_eq!(intersection_dim(pos.basis(), neg.basis()), 1);
        let bad = vec![qint(1), qint(1), qint(0), qint(0)];
        assert!(matches!(
            sp.isotropic_envelopes_n2(&bad),
            Err(QuadError::NotIsotropic)
        ));
    }
}
