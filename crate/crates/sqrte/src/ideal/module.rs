//! Submodules of free modules: Groebner bases with a position-over-term
//! order, syzygy computation by block elimination on positions, and
//! lengths of finite subquotients.

use super::{count_standard_monomials_export, IdealError};
use crate::poly::{monomial_div, monomial_divides, monomial_lcm, MonomialOrder, MultiPoly};
use num_rational::BigRational;
use num_traits::One;
use std::cmp::Ordering;

/// Element of a free module R^r: a vector of polynomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VecPoly {
    pub comps: Vec<MultiPoly>,
}

impl VecPoly {
    pub fn zero(vars: &[String], rank: usize) -> Self {
        VecPoly { comps: vec![MultiPoly::zero(vars); rank] }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_zero())
    }

    pub fn rank(&self) -> usize {
        self.comps.len()
    }

    pub fn sub(&self, other: &Self) -> Self {
        VecPoly {
            comps: self
                .comps
                .iter()
                .zip(&other.comps)
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    pub fn mul_term(&self, exps: &[u32], c: &BigRational) -> Self {
        VecPoly { comps: self.comps.iter().map(|p| p.mul_monomial(exps, c)).collect() }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        VecPoly { comps: self.comps.iter().map(|p| p.scale(c)).collect() }
    }

}

/// Position-over-term order: positions dominate, monomials compared by
/// grevlex within a position.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PositionPriority {
    /// Position 0 is the largest (used for block elimination of the
    /// leading components when computing syzygies).
    TopDown,
    /// The last position is the largest (the default layered order).
    BottomUp,
}

#[derive(Debug, Clone, Copy)]
pub struct ModuleOrder {
    pub priority: PositionPriority,
    pub base: MonomialOrder,
}

impl ModuleOrder {
    pub fn standard() -> Self {
        ModuleOrder { priority: PositionPriority::BottomUp, base: MonomialOrder::GrevLex }
    }

    pub fn elimination() -> Self {
        ModuleOrder { priority: PositionPriority::TopDown, base: MonomialOrder::GrevLex }
    }

    fn cmp_pos(&self, a: usize, b: usize) -> Ordering {
        match self.priority {
            PositionPriority::TopDown => b.cmp(&a),
            PositionPriority::BottomUp => a.cmp(&b),
        }
    }

    fn cmp(&self, a: (usize, &[u32]), b: (usize, &[u32])) -> Ordering {
        self.cmp_pos(a.0, b.0).then_with(|| self.base.cmp(a.1, b.1))
    }
}

fn leading_term<'a>(
    v: &'a VecPoly,
    order: &ModuleOrder,
) -> Option<(usize, &'a Vec<u32>, &'a BigRational)> {
    let mut best: Option<(usize, &Vec<u32>, &BigRational)> = None;
    for (pos, p) in v.comps.iter().enumerate() {
        if let Some((m, c)) = p.leading_term(order.base) {
            best = match best {
                None => Some((pos, m, c)),
                Some(cur) => {
                    if order.cmp((pos, m), (cur.0, cur.1)) == Ordering::Greater {
                        Some((pos, m, c))
                    } else {
                        Some(cur)
                    }
                }
            };
        }
    }
    best
}

/// Normal form of `v` against `basis` under the module order.
pub fn module_reduce(v: &VecPoly, basis: &[VecPoly], order: &ModuleOrder) -> VecPoly {
    let vars = v.comps[0].vars().to_vec();
    let rank = v.rank();
    let leads: Vec<(usize, Vec<u32>, BigRational)> = basis
        .iter()
        .map(|b| {
            let (p, m, c) = leading_term(b, order).expect("basis vectors are nonzero");
            (p, m.clone(), c.clone())
        })
        .collect();
    let mut rem = VecPoly::zero(&vars, rank);
    let mut work = v.clone();
    'outer: while let Some((wp, wm, wc)) = leading_term(&work, order) {
        let (wp, wm, wc) = (wp, wm.clone(), wc.clone());
        for (i, (lp, lm, lc)) in leads.iter().enumerate() {
            if *lp == wp && monomial_divides(lm, &wm) {
                let qm = monomial_div(&wm, lm);
                let qc = &wc / lc;
                work = work.sub(&basis[i].mul_term(&qm, &qc));
                continue 'outer;
            }
        }
        let t = MultiPoly::monomial(&vars, wm, wc);
        rem.comps[wp] = rem.comps[wp].add(&t);
        work.comps[wp] = work.comps[wp].sub(&t);
    }
    rem
}

/// Buchberger for submodules of a free module. S-pairs only form between
/// vectors whose leading terms sit in the same position.
pub fn module_groebner(
    gens: &[VecPoly],
    order: &ModuleOrder,
    budget: usize,
) -> Result<Vec<VecPoly>, IdealError> {
    let mut basis: Vec<VecPoly> = Vec::new();
    for g in gens {
        if !g.is_zero() {
            let red = module_reduce(g, &basis, order);
            if !red.is_zero() {
                basis.push(red);
            }
        }
    }
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            pairs.push((i, j));
        }
    }
    let mut steps = 0usize;
    while let Some((i, j)) = pairs.pop() {
        let (pi, mi, ci) = {
            let (p, m, c) = leading_term(&basis[i], order).unwrap();
            (p, m.clone(), c.clone())
        };
        let (pj, mj, cj) = {
            let (p, m, c) = leading_term(&basis[j], order).unwrap();
            (p, m.clone(), c.clone())
        };
        if pi != pj {
            continue;
        }
        steps += 1;
        if steps > budget {
            return Err(IdealError::BudgetExhausted(budget));
        }
        let lcm = monomial_lcm(&mi, &mj);
        let a = basis[i].mul_term(&monomial_div(&lcm, &mi), &(BigRational::one() / ci));
        let b = basis[j].mul_term(&monomial_div(&lcm, &mj), &(BigRational::one() / cj));
        let s = a.sub(&b);
        let red = module_reduce(&s, &basis, order);
        if red.is_zero() {
            continue;
        }
        let new_idx = basis.len();
        basis.push(red);
        for k in 0..new_idx {
            pairs.push((k, new_idx));
        }
    }
    Ok(basis)
}

/// Finitely generated submodule of a free module R^rank.
#[derive(Debug, Clone)]
pub struct PolyModule {
    vars: Vec<String>,
    rank: usize,
    gens: Vec<VecPoly>,
}

impl PolyModule {
    pub fn new(vars: &[String], rank: usize, gens: Vec<VecPoly>) -> Self {
        for g in &gens {
            assert_eq!(g.rank(), rank, "generator of wrong rank");
        }
        PolyModule {
            vars: vars.to_vec(),
            rank,
            gens: gens.into_iter().filter(|g| !g.is_zero()).collect(),
        }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn gens(&self) -> &[VecPoly] {
        &self.gens
    }

    pub fn groebner(&self, order: &ModuleOrder, budget: usize) -> Result<Vec<VecPoly>, IdealError> {
        module_groebner(&self.gens, order, budget)
    }

    pub fn contains(&self, v: &VecPoly, budget: usize) -> Result<bool, IdealError> {
        let basis = self.groebner(&ModuleOrder::standard(), budget)?;
        Ok(module_reduce(v, &basis, &ModuleOrder::standard()).is_zero())
    }
}

/// Apply a matrix (rows of polynomials) to a vector.
pub fn matrix_apply(matrix: &[Vec<MultiPoly>], v: &VecPoly) -> VecPoly {
    let vars = v.comps[0].vars().to_vec();
    let comps = matrix
        .iter()
        .map(|row| {
            let mut acc = MultiPoly::zero(&vars);
            for (a, x) in row.iter().zip(&v.comps) {
                acc = acc.add(&a.mul(x));
            }
            acc
        })
        .collect();
    VecPoly { comps }
}

/// Kernel of a polynomial matrix A (given by rows): the module of column
/// vectors v with A·v = 0. Computed by a Groebner basis of the graph
/// module {(A·e_j, e_j)} under an order eliminating the first block of
/// positions; lifted relations appear in the trailing block.
pub fn module_kernel(
    vars: &[String],
    matrix: &[Vec<MultiPoly>],
    budget: usize,
) -> Result<PolyModule, IdealError> {
    let rows = matrix.len();
    let cols = matrix.first().map_or(0, |r| r.len());
    for r in matrix {
        assert_eq!(r.len(), cols, "ragged matrix");
    }
    let mut gens = Vec::new();
    for j in 0..cols {
        let mut comps = Vec::with_capacity(rows + cols);
        for row in matrix {
            comps.push(row[j].clone());
        }
        for k in 0..cols {
            comps.push(if k == j { MultiPoly::one(vars) } else { MultiPoly::zero(vars) });
        }
        gens.push(VecPoly { comps });
    }
    let basis = module_groebner(&gens, &ModuleOrder::elimination(), budget)?;
    let mut kernel_gens = Vec::new();
    for b in basis {
        if b.comps[..rows].iter().all(|c| c.is_zero()) {
            kernel_gens.push(VecPoly { comps: b.comps[rows..].to_vec() });
        }
    }
    Ok(PolyModule::new(vars, cols, kernel_gens))
}

/// Length of ker/im for submodules im ⊆ ker of a common free module.
/// Presents the quotient on the generators of ker and counts standard
/// module monomials of the relation submodule.
pub fn subquotient_length(
    ker: &PolyModule,
    im: &PolyModule,
    budget: usize,
) -> Result<usize, IdealError> {
    assert_eq!(ker.rank(), im.rank(), "ambient ranks differ");
    assert_eq!(ker.vars(), im.vars());
    let vars = ker.vars().to_vec();
    for g in im.gens() {
        if !ker.contains(g, budget)? {
            return Err(IdealError::NotContained);
        }
    }
    let k = ker.gens().len();
    if k == 0 {
        return Ok(0);
    }
    // Relations among [ker gens | im gens]; their first k coordinates
    // present ker/im as R^k / N.
    let rank = ker.rank();
    let mut matrix = vec![Vec::with_capacity(k + im.gens().len()); rank];
    for row in 0..rank {
        for g in ker.gens() {
            matrix[row].push(g.comps[row].clone());
        }
        for g in im.gens() {
            matrix[row].push(g.comps[row].clone());
        }
    }
    let syz = module_kernel(&vars, &matrix, budget)?;
    let relations: Vec<VecPoly> = syz
        .gens()
        .iter()
        .map(|g| VecPoly { comps: g.comps[..k].to_vec() })
        .collect();
    let presented = PolyModule::new(&vars, k, relations);
    module_colength(&presented, budget)
}

/// Vector-space dimension of R^rank / M.
pub fn module_colength(m: &PolyModule, budget: usize) -> Result<usize, IdealError> {
    let order = ModuleOrder::standard();
    let basis = m.groebner(&order, budget)?;
    let mut total = 0usize;
    for pos in 0..m.rank() {
        let leads: Vec<Vec<u32>> = basis
            .iter()
            .filter_map(|b| {
                let (p, mm, _) = leading_term(b, &order)?;
                if p == pos {
                    Some(mm.clone())
                } else {
                    None
                }
            })
            .collect();
        match count_standard_monomials_export(m.vars(), &leads) {
            Ok(c) => total += c,
            Err(_) => return Err(IdealError::NotFiniteLength),
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ideal::DEFAULT_STEP_BUDGET;
    use crate::poly::parse_poly;

    fn vs() -> Vec<String> {
        vec!["x".to_string(), "y".to_string()]
    }

    fn p(s: &str) -> MultiPoly {
        parse_poly(&vs(), s).unwrap()
    }

    #[test]
    fn koszul_kernel() {
        let v = vs();
        let kernel = module_kernel(&v, &[vec![p("x"), p("y")]], DEFAULT_STEP_BUDGET).unwrap();
        assert_eq!(kernel.gens().len(), 1);
        let g = &kernel.gens()[0];
        // generated by (y, -x) up to a unit
        let prod = p("x").mul(&g.comps[0]).add(&p("y").mul(&g.comps[1]));
        assert!(prod.is_zero());
        assert!(!g.comps[0].is_zero() && !g.comps[1].is_zero());
    }

    #[test]
    fn identity_kernel_is_zero() {
        let v = vs();
        let kernel = module_kernel(
            &v,
            &[vec![p("1"), p("0")], vec![p("0"), p("1")]],
            DEFAULT_STEP_BUDGET,
        )
        .unwrap();
        assert!(kernel.gens().is_empty());
    }

    #[test]
    fn backward_matrix_kernel() {
        // rows from the d=3, i=2, j=1 instance: [[y^3, x*y^2], [x^2*y, x^3]]
        // kernel generated by (x^{d-i}, -y^j) = (x, -y)
        let v = vs();
        let a = vec![vec![p("y^3"), p("x*y^2")], vec![p("x^2*y"), p("x^3")]];
        let kernel = module_kernel(&v, &a, DEFAULT_STEP_BUDGET).unwrap();
        for g in kernel.gens() {
            let img = matrix_apply(&a, g);
            assert!(img.is_zero());
        }
        let expected = VecPoly { comps: vec![p("x"), p("-y")] };
        assert!(PolyModule::new(&v, 2, kernel.gens().to_vec())
            .contains(&expected, DEFAULT_STEP_BUDGET)
            .unwrap());
        // and conversely every kernel generator is a multiple of it
        let single = PolyModule::new(&v, 2, vec![expected]);
        for g in kernel.gens() {
            assert!(single.contains(g, DEFAULT_STEP_BUDGET).unwrap());
        }
    }

    #[test]
    fn subquotient_simple_point() {
        let v = vs();
        // ker = free line <(1,0)>, im = (x, y)·ker: quotient is k
        let ker = PolyModule::new(&v, 2, vec![VecPoly { comps: vec![p("1"), p("0")] }]);
        let im = PolyModule::new(
            &v,
            2,
            vec![
                VecPoly { comps: vec![p("x"), p("0")] },
                VecPoly { comps: vec![p("y"), p("0")] },
            ],
        );
        assert_eq!(subquotient_length(&ker, &im, DEFAULT_STEP_BUDGET).unwrap(), 1);
    }

    #[test]
    fn subquotient_equal_modules() {
        let v = vs();
        let ker = PolyModule::new(&v, 2, vec![VecPoly { comps: vec![p("x"), p("y")] }]);
        let im = ker.clone();
        assert_eq!(subquotient_length(&ker, &im, DEFAULT_STEP_BUDGET).unwrap(), 0);
    }

    #[test]
    fn subquotient_not_contained() {
        let v = vs();
        let ker = PolyModule::new(&v, 2, vec![VecPoly { comps: vec![p("x"), p("0")] }]);
        let im = PolyModule::new(&v, 2, vec![VecPoly { comps: vec![p("0"), p("y")] }]);
        assert!(matches!(
            subquotient_length(&ker, &im, DEFAULT_STEP_BUDGET),
            Err(IdealError::NotContained)
        ));
    }

    #[test]
    fn running_example_cohomology_lengths() {
        // (d, i, j) = (2, 1, 1): both cohomology lengths are 1.
        let v = vs();
        // forward matrix (even -> odd) and backward matrix (odd -> even)
        let fwd = vec![vec![p("y^2"), p("x*y")], vec![p("x*y"), p("x^2")]];
        let bwd = vec![vec![p("x^2"), p("-x*y")], vec![p("-x*y"), p("y^2")]];
        let ker = module_kernel(&v, &fwd, DEFAULT_STEP_BUDGET).unwrap();
        let im_gens: Vec<VecPoly> = (0..2)
            .map(|j| VecPoly { comps: bwd.iter().map(|row| row[j].clone()).collect() })
            .collect();
        let im = PolyModule::new(&v, 2, im_gens);
        assert_eq!(subquotient_length(&ker, &im, DEFAULT_STEP_BUDGET).unwrap(), 1);
    }
}
