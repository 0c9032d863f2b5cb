//! Groebner-basis machinery for polynomial ideals: reduced bases
//! (Buchberger with the sugar strategy and both criteria), normal forms,
//! colength of zero-dimensional quotients, saturation, elimination and
//! projective degree.

mod module;

pub use module::{matrix_apply, module_kernel, subquotient_length, PolyModule, VecPoly};

use crate::poly::{
    monomial_div, monomial_divides, monomial_lcm, monomial_mul, MonomialOrder, MultiPoly,
};
use crate::rng::SeededRng;
use num_rational::BigRational;
use num_traits::One;
use std::cell::RefCell;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum IdealError {
    #[error("step budget of {0} S-pair reductions exhausted")]
    BudgetExhausted(usize),
    #[error("quotient ring is not finite-dimensional (variable `{0}` has no pure power among the leading terms)")]
    NotZeroDimensional(String),
    #[error("projective scheme is empty")]
    EmptyScheme,
    #[error("generic slices disagree across seeds; the input looks degenerate")]
    DegenerateSlice,
    #[error("submodule is not contained in the ambient module")]
    NotContained,
    #[error("module quotient does not have finite length")]
    NotFiniteLength,
    #[error("ideal is not homogeneous")]
    NotHomogeneous,
}

pub const DEFAULT_STEP_BUDGET: usize = 1_000_000;

static STEP_BUDGET: std::sync::atomic::AtomicUsize =
    std::sync::atomic::AtomicUsize::new(DEFAULT_STEP_BUDGET);

/// Process-wide default S-pair budget picked up by every new ideal;
/// individual ideals can still override with `with_budget`.
pub fn set_default_step_budget(budget: usize) {
    STEP_BUDGET.store(budget.max(1), std::sync::atomic::Ordering::Relaxed);
}

pub fn default_step_budget() -> usize {
    STEP_BUDGET.load(std::sync::atomic::Ordering::Relaxed)
}

/// Finitely generated ideal with a per-order cache of reduced Groebner
/// bases. The cache is write-once per order; values are immutable.
#[derive(Debug, Clone)]
pub struct PolyIdeal {
    vars: Vec<String>,
    gens: Vec<MultiPoly>,
    step_budget: usize,
    cache: RefCell<BTreeMap<MonomialOrder, Vec<MultiPoly>>>,
}

impl PolyIdeal {
    pub fn new(vars: &[String], gens: Vec<MultiPoly>) -> Self {
        for g in &gens {
            assert_eq!(g.vars(), vars, "generator over wrong variable list");
        }
        PolyIdeal {
            vars: vars.to_vec(),
            gens: gens.into_iter().filter(|g| !g.is_zero()).collect(),
            step_budget: default_step_budget(),
            cache: RefCell::new(BTreeMap::new()),
        }
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.step_budget = budget;
        self
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn gens(&self) -> &[MultiPoly] {
        &self.gens
    }

    pub fn groebner_basis(&self, order: MonomialOrder) -> Result<Vec<MultiPoly>, IdealError> {
        if let Some(b) = self.cache.borrow().get(&order) {
            return Ok(b.clone());
        }
        let basis = buchberger(&self.gens, order, self.step_budget)?;
        self.cache.borrow_mut().insert(order, basis.clone());
        Ok(basis)
    }

    pub fn normal_form(&self, p: &MultiPoly, order: MonomialOrder) -> Result<MultiPoly, IdealError> {
        let basis = self.groebner_basis(order)?;
        Ok(reduce(p, &basis, order))
    }

    pub fn contains(&self, p: &MultiPoly) -> Result<bool, IdealError> {
        Ok(self.normal_form(p, MonomialOrder::GrevLex)?.is_zero())
    }

    /// Two ideals are equal iff each one's generators reduce to zero
    /// modulo the other.
    pub fn equals(&self, other: &PolyIdeal) -> Result<bool, IdealError> {
        for g in &other.gens {
            if !self.contains(g)? {
                return Ok(false);
            }
        }
        for g in &self.gens {
            if !other.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_unit_ideal(&self) -> Result<bool, IdealError> {
        let basis = self.groebner_basis(MonomialOrder::GrevLex)?;
        Ok(basis.iter().any(|b| b.is_constant() && !b.is_zero()))
    }

    /// Vector-space dimension of the quotient ring, counted as the number
    /// of standard monomials outside the leading-term staircase. The unit
    /// ideal has colength zero.
    pub fn colength(&self, order: MonomialOrder) -> Result<usize, IdealError> {
        let basis = self.groebner_basis(order)?;
        let lead: Vec<Vec<u32>> = basis
            .iter()
            .map(|b| b.leading_monomial(order).unwrap().clone())
            .collect();
        count_standard_monomials(&self.vars, &lead)
    }

    /// Saturation (I : f^∞) by the extra-variable trick.
    pub fn saturate(&self, f: &MultiPoly) -> Result<PolyIdeal, IdealError> {
        assert!(!f.is_zero(), "cannot saturate by the zero polynomial");
        let aux = fresh_var(&self.vars, "_w");
        let mut ext_vars = vec![aux.clone()];
        ext_vars.extend(self.vars.iter().cloned());
        let mut gens: Vec<MultiPoly> = self.gens.iter().map(|g| g.extend_vars(&ext_vars)).collect();
        let w = MultiPoly::var(&ext_vars, &aux).unwrap();
        let wf = w.mul(&f.extend_vars(&ext_vars));
        gens.push(wf.sub(&MultiPoly::one(&ext_vars)));
        let extended = PolyIdeal::new(&ext_vars, gens).with_budget(self.step_budget);
        let eliminated = extended.eliminate_leading_block(1)?;
        Ok(PolyIdeal::new(
            &self.vars,
            eliminated
                .iter()
                .map(|g| g.restrict_vars(&self.vars).expect("eliminated variable survived"))
                .collect(),
        )
        .with_budget(self.step_budget))
    }

    /// Generators of I ∩ k[vars without the leading `block` variables],
    /// still expressed over the extended variable list.
    fn eliminate_leading_block(&self, block: usize) -> Result<Vec<MultiPoly>, IdealError> {
        let basis = self.groebner_basis(MonomialOrder::Block { split: block })?;
        Ok(basis
            .into_iter()
            .filter(|g| (0..block).all(|v| !g.involves(v)))
            .collect())
    }

    /// Generators of the elimination ideal I ∩ k[remaining variables].
    pub fn eliminate(&self, drop: &[String]) -> Result<PolyIdeal, IdealError> {
        let keep: Vec<String> = self.vars.iter().filter(|v| !drop.contains(v)).cloned().collect();
        let mut reordered: Vec<String> =
            self.vars.iter().filter(|v| drop.contains(v)).cloned().collect();
        let split = reordered.len();
        reordered.extend(keep.iter().cloned());
        let gens: Vec<MultiPoly> = self.gens.iter().map(|g| g.extend_vars(&reordered)).collect();
        let extended = PolyIdeal::new(&reordered, gens).with_budget(self.step_budget);
        let surviving = extended.eliminate_leading_block(split)?;
        Ok(PolyIdeal::new(
            &keep,
            surviving
                .iter()
                .map(|g| g.restrict_vars(&keep).expect("eliminated variable survived"))
                .collect(),
        )
        .with_budget(self.step_budget))
    }

    pub fn is_homogeneous(&self) -> bool {
        self.gens.iter().all(|g| g.homogeneity().is_homogeneous())
    }

    /// Krull dimension of the affine scheme cut out by the ideal, via the
    /// standard combinatorial rule on the leading-term staircase: the
    /// largest set S of variables such that no leading monomial is
    /// supported inside S.
    pub fn affine_dimension(&self) -> Result<usize, IdealError> {
        if self.gens.is_empty() {
            return Ok(self.vars.len());
        }
        let basis = self.groebner_basis(MonomialOrder::GrevLex)?;
        if basis.iter().any(|b| b.is_constant() && !b.is_zero()) {
            // Unit ideal: empty scheme. Report dimension 0; callers that
            // care about emptiness test is_unit_ideal.
            return Ok(0);
        }
        let leads: Vec<Vec<u32>> = basis
            .iter()
            .map(|b| b.leading_monomial(MonomialOrder::GrevLex).unwrap().clone())
            .collect();
        let n = self.vars.len();
        let mut best = 0usize;
        for mask in 0u32..(1 << n) {
            let size = mask.count_ones() as usize;
            if size <= best {
                continue;
            }
            let independent = leads.iter().all(|m| {
                // monomial supported inside S?
                !(0..n).all(|v| m[v] == 0 || mask & (1 << v) != 0)
            });
            if independent {
                best = size;
            }
        }
        Ok(best)
    }

    /// Degree of the projective scheme cut out by a homogeneous ideal:
    /// slice with generic hyperplanes down to projective dimension zero,
    /// then count the quotient dimension on a generic affine chart.
    /// Repeats with three seeds and demands agreement.
    pub fn projective_degree(&self, seed: u64) -> Result<usize, IdealError> {
        if !self.is_homogeneous() {
            return Err(IdealError::NotHomogeneous);
        }
        let all: Vec<usize> = (0..self.vars.len()).collect();
        self.certified_degree(&all, seed)
    }

    /// Triple-agreement slicing certificate with a bounded number of
    /// fresh seed batches: a batch whose three generic slice counts
    /// disagree (or degenerate) is discarded and retried.
    fn certified_degree(&self, proj: &[usize], seed: u64) -> Result<usize, IdealError> {
        if self.is_unit_ideal()? {
            return Err(IdealError::EmptyScheme);
        }
        let dim = self.affine_dimension()?;
        if dim == 0 {
            // supported at the cone vertex only
            return Err(IdealError::EmptyScheme);
        }
        let slices = dim - 1;
        for batch in 0..4u64 {
            let mut values = Vec::new();
            for attempt in 0..3u64 {
                let mut rng = SeededRng::derive(seed, 0xF1BE5 + 31 * batch + attempt);
                match self.sliced_degree_in(proj, slices, &mut rng) {
                    Ok(v) => values.push(v),
                    Err(IdealError::NotZeroDimensional(_)) => break,
                    Err(e) => return Err(e),
                }
            }
            if values.len() == 3 && values[0] == values[1] && values[1] == values[2] {
                return Ok(values[0]);
            }
        }
        Err(IdealError::DegenerateSlice)
    }

    fn sliced_degree_in(
        &self,
        proj: &[usize],
        slices: usize,
        rng: &mut SeededRng,
    ) -> Result<usize, IdealError> {
        let mut gens = self.gens.clone();
        for _ in 0..slices {
            gens.push(random_linear_form_in(&self.vars, proj, rng, false));
        }
        // Generic affine chart: a generic linear form set to 1 misses
        // every irrelevant (vertex-supported) component.
        let chart = random_linear_form_in(&self.vars, proj, rng, true);
        gens.push(chart.sub(&MultiPoly::one(&self.vars)));
        let sliced = PolyIdeal::new(&self.vars, gens).with_budget(self.step_budget);
        sliced.colength(MonomialOrder::GrevLex)
    }

    /// Degree of a scheme that is a cone in the `proj` block of variables
    /// and finite in the remaining ones: slice the cone down to affine
    /// dimension 1 with generic linear forms in the projective block, pass
    /// to the chart where a generic projective form equals 1, and count
    /// the colength. Genericity is certified by 3-seed agreement.
    pub fn relative_degree(&self, proj: &[usize], seed: u64) -> Result<usize, IdealError> {
        for g in &self.gens {
            let proj_homogeneous = {
                let mut degs = g.terms().map(|(e, _)| {
                    proj.iter().map(|&v| e[v] as u64).sum::<u64>()
                });
                match degs.next() {
                    None => true,
                    Some(d0) => degs.all(|d| d == d0),
                }
            };
            if !proj_homogeneous {
                return Err(IdealError::NotHomogeneous);
            }
        }
        self.certified_degree(proj, seed)
    }
}

pub fn fresh_var(vars: &[String], base: &str) -> String {
    let mut k = 0;
    loop {
        let candidate = format!("{base}{k}");
        if !vars.contains(&candidate) {
            return candidate;
        }
        k += 1;
    }
}

pub fn random_linear_form_in(
    vars: &[String],
    support: &[usize],
    rng: &mut SeededRng,
    all_nonzero: bool,
) -> MultiPoly {
    let mut p = MultiPoly::zero(vars);
    loop {
        for &i in support {
            let c = if all_nonzero { rng.nonzero_int(49) } else { rng.int_in(-49, 49) };
            if c != 0 {
                p = p.add(&MultiPoly::var_idx(vars, i).scale(&BigRational::from_integer(c.into())));
            }
        }
        if !p.is_zero() {
            return p;
        }
    }
}

/// Count monomials outside the staircase generated by `lead`; errors when
/// the count is infinite.
fn count_standard_monomials(vars: &[String], lead: &[Vec<u32>]) -> Result<usize, IdealError> {
    let n = vars.len();
    if lead.iter().any(|m| m.iter().all(|&e| e == 0)) {
        return Ok(0); // unit ideal
    }
    if n == 0 {
        return Ok(1);
    }
    // Pure-power bound per variable: finiteness requires one for each.
    let mut bound = vec![0u32; n];
    for v in 0..n {
        let pure = lead
            .iter()
            .filter(|m| (0..n).all(|w| w == v || m[w] == 0))
            .map(|m| m[v])
            .min();
        match pure {
            Some(b) => bound[v] = b,
            None => return Err(IdealError::NotZeroDimensional(vars[v].clone())),
        }
    }
    // Enumerate the box below the pure-power corners, reject multiples of
    // any leading monomial.
    let mut count = 0usize;
    let mut exps = vec![0u32; n];
    'outer: loop {
        if !lead.iter().any(|m| monomial_divides(m, &exps)) {
            count += 1;
        }
        let mut i = 0;
        loop {
            if i == n {
                break 'outer;
            }
            exps[i] += 1;
            if exps[i] < bound[i] {
                break;
            }
            exps[i] = 0;
            i += 1;
        }
    }
    Ok(count)
}

pub(crate) fn count_standard_monomials_export(
    vars: &[String],
    lead: &[Vec<u32>],
) -> Result<usize, IdealError> {
    count_standard_monomials(vars, lead)
}

/// Multivariate division: the normal form of `p` against `basis`.
pub fn reduce(p: &MultiPoly, basis: &[MultiPoly], order: MonomialOrder) -> MultiPoly {
    let vars = p.vars().to_vec();
    let leads: Vec<(Vec<u32>, BigRational)> = basis
        .iter()
        .map(|b| {
            let (m, c) = b.leading_term(order).expect("basis elements are nonzero");
            (m.clone(), c.clone())
        })
        .collect();
    let mut rem = MultiPoly::zero(&vars);
    let mut work = p.clone();
    'outer: while let Some((wm, wc)) = work.leading_term(order) {
        let wm = wm.clone();
        let wc = wc.clone();
        for (i, (lm, lc)) in leads.iter().enumerate() {
            if monomial_divides(lm, &wm) {
                let qm = monomial_div(&wm, lm);
                let qc = &wc / lc;
                work = work.sub(&basis[i].mul_monomial(&qm, &qc));
                continue 'outer;
            }
        }
        // leading term irreducible: move it to the remainder
        rem = rem.add(&MultiPoly::monomial(&vars, wm.clone(), wc.clone()));
        work = work.sub(&MultiPoly::monomial(&vars, wm, wc));
    }
    rem
}

struct SPair {
    i: usize,
    j: usize,
    lcm: Vec<u32>,
    sugar: u32,
}

/// Buchberger's algorithm with the sugar selection strategy and both the
/// coprimality and chain criteria, returning the reduced basis.
pub fn buchberger(
    gens: &[MultiPoly],
    order: MonomialOrder,
    budget: usize,
) -> Result<Vec<MultiPoly>, IdealError> {
    let mut basis: Vec<MultiPoly> = Vec::new();
    let mut sugars: Vec<u32> = Vec::new();
    for g in gens {
        if !g.is_zero() {
            let red = reduce(g, &basis, order);
            if !red.is_zero() {
                sugars.push(red.total_degree().unwrap_or(0));
                basis.push(red.primitive_integer());
            }
        }
    }
    let mut pairs: Vec<SPair> = Vec::new();
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            pairs.push(make_pair(&basis, &sugars, i, j, order));
        }
    }
    let mut steps = 0usize;
    while !pairs.is_empty() {
        // sugar strategy: smallest sugar first, ties by smallest lcm
        let best = pairs
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| {
                a.sugar
                    .cmp(&b.sugar)
                    .then_with(|| order.cmp(&a.lcm, &b.lcm))
            })
            .map(|(k, _)| k)
            .unwrap();
        let pair = pairs.swap_remove(best);
        let (i, j) = (pair.i, pair.j);
        let li = basis[i].leading_monomial(order).unwrap().clone();
        let lj = basis[j].leading_monomial(order).unwrap().clone();
        // first Buchberger criterion: coprime leading monomials
        if monomial_mul(&li, &lj) == pair.lcm {
            continue;
        }
        // chain criterion: an element k with LT(k) | lcm(i,j) whose pairs
        // with both i and j are no longer queued
        let chained = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && monomial_divides(basis[k].leading_monomial(order).unwrap(), &pair.lcm)
                && !pairs.iter().any(|p| is_pair(p, i, k) || is_pair(p, j, k))
        });
        if chained {
            continue;
        }
        steps += 1;
        if steps > budget {
            return Err(IdealError::BudgetExhausted(budget));
        }
        let spoly = s_poly(&basis[i], &basis[j], &pair.lcm, order);
        let red = reduce(&spoly, &basis, order);
        if red.is_zero() {
            continue;
        }
        let new_sugar = pair.sugar.max(red.total_degree().unwrap_or(0));
        let new_idx = basis.len();
        basis.push(red.primitive_integer());
        sugars.push(new_sugar);
        for k in 0..new_idx {
            pairs.push(make_pair(&basis, &sugars, k, new_idx, order));
        }
    }
    Ok(reduce_basis(basis, order))
}

fn is_pair(p: &SPair, a: usize, b: usize) -> bool {
    (p.i == a && p.j == b) || (p.i == b && p.j == a)
}

fn make_pair(basis: &[MultiPoly], sugars: &[u32], i: usize, j: usize, order: MonomialOrder) -> SPair {
    let li = basis[i].leading_monomial(order).unwrap();
    let lj = basis[j].leading_monomial(order).unwrap();
    let lcm = monomial_lcm(li, lj);
    let deg: u32 = lcm.iter().sum();
    let di: u32 = li.iter().sum();
    let dj: u32 = lj.iter().sum();
    let sugar = (sugars[i] + deg - di).max(sugars[j] + deg - dj);
    SPair { i, j, lcm, sugar }
}

fn s_poly(f: &MultiPoly, g: &MultiPoly, lcm: &[u32], order: MonomialOrder) -> MultiPoly {
    let (fm, fc) = f.leading_term(order).unwrap();
    let (gm, gc) = g.leading_term(order).unwrap();
    let mf = monomial_div(lcm, fm);
    let mg = monomial_div(lcm, gm);
    let a = f.mul_monomial(&mf, &(BigRational::one() / fc.clone()));
    let b = g.mul_monomial(&mg, &(BigRational::one() / gc.clone()));
    a.sub(&b)
}

/// Interreduce to the unique reduced (monic, auto-reduced) basis.
fn reduce_basis(mut basis: Vec<MultiPoly>, order: MonomialOrder) -> Vec<MultiPoly> {
    // drop elements whose leading monomial is divisible by another's
    let mut keep: Vec<MultiPoly> = Vec::new();
    basis.sort_by(|a, b| {
        order.cmp(
            a.leading_monomial(order).unwrap(),
            b.leading_monomial(order).unwrap(),
        )
    });
    for (i, b) in basis.iter().enumerate() {
        let lb = b.leading_monomial(order).unwrap();
        let redundant = basis.iter().enumerate().any(|(j, o)| {
            j != i && {
                let lo = o.leading_monomial(order).unwrap();
                monomial_divides(lo, lb) && (lo != lb || j < i)
            }
        });
        if !redundant {
            keep.push(b.clone());
        }
    }
    // fully reduce each survivor against the others
    let mut out: Vec<MultiPoly> = Vec::new();
    for i in 0..keep.len() {
        let others: Vec<MultiPoly> = keep
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, p)| p.clone())
            .collect();
        let red = reduce(&keep[i], &others, order);
        if !red.is_zero() {
            out.push(red.monic(order));
        }
    }
    out.sort_by(|a, b| {
        order.cmp(
            b.leading_monomial(order).unwrap(),
            a.leading_monomial(order).unwrap(),
        )
    });
    out
}

/// Intersection of two ideals via the t-trick: I ∩ J = (t·I + (1−t)·J) ∩ k[x].
pub fn intersect(a: &PolyIdeal, b: &PolyIdeal) -> Result<PolyIdeal, IdealError> {
    assert_eq!(a.vars(), b.vars());
    let vars = a.vars().to_vec();
    let aux = fresh_var(&vars, "_t");
    let mut ext = vec![aux.clone()];
    ext.extend(vars.iter().cloned());
    let t = MultiPoly::var(&ext, &aux).unwrap();
    let one_minus_t = MultiPoly::one(&ext).sub(&t);
    let mut gens = Vec::new();
    for g in a.gens() {
        gens.push(t.mul(&g.extend_vars(&ext)));
    }
    for g in b.gens() {
        gens.push(one_minus_t.mul(&g.extend_vars(&ext)));
    }
    let ext_ideal = PolyIdeal::new(&ext, gens);
    let surviving = ext_ideal.eliminate_leading_block(1)?;
    Ok(PolyIdeal::new(
        &vars,
        surviving
            .iter()
            .map(|g| g.restrict_vars(&vars).expect("t survived elimination"))
            .collect(),
    ))
}
