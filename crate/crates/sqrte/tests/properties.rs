//! Randomized invariants for the algebra layers: gcd and resultant laws,
//! order independence of colengths, saturation laws, syzygy exactness,
//! length additivity, the sign parity law and the envelope reconstruction.

use proptest::prelude::*;
use sqrte::ideal::{
    matrix_apply, module_kernel, subquotient_length, PolyModule, VecPoly, DEFAULT_STEP_BUDGET,
};
use sqrte::linalg::intersection_dim;
use sqrte::poly::{gcd_poly, parse_poly, qint, resultant, MonomialOrder, MultiPoly};
use sqrte::quad::{QuadSpace, Subspace};
use sqrte::PolyIdeal;

mod transported {
    //! Cross-route agreement on a space presented in scrambled
    //! coordinates: the sign convention is fixed per space, so all exact
    //! routes must agree among themselves, and the absolute value must
    //! match the standard presentation.

    use sqrte::cone::{cone_bidegree_n2, normal_cone_ideal};
    use sqrte::ideal::DEFAULT_STEP_BUDGET;
    use sqrte::linalg::QMatrix;
    use sqrte::poly::qint;
    use sqrte::quad::QuadSpace;
    use sqrte::routes::{route_rh3, route_rh4_deform, route_rh7_clifford};
    use sqrte::rng::SeededRng;
    use sqrte::section::{running_example, IsoSection};

    fn random_invertible(rng: &mut SeededRng) -> QMatrix {
        loop {
            let mut g = QMatrix::zero(4, 4);
            for i in 0..4 {
                for j in 0..4 {
                    g[(i, j)] = qint(rng.int_in(-2, 2));
                }
            }
            if !num_traits::Zero::is_zero(&g.det()) {
                return g;
            }
        }
    }

    #[test]
    fn routes_agree_in_scrambled_coordinates() {
        let mut rng = SeededRng::new(99);
        for (d, i, j) in [(2u32, 1u32, 1u32), (2, 1, 0), (3, 2, 1)] {
            let s = running_example(d, i, j, false);
            let expect_abs = (d as i64 * (i as i64 - j as i64)).abs();
            let g = random_invertible(&mut rng);
            let g_inv = g.inverse().unwrap();
            // B' = GᵀBG and s' = G⁻¹s present the same geometry
            let gram2 = g.transpose().mul(s.space().gram()).mul(&g);
            let space2 = QuadSpace::from_gram(gram2).unwrap();
            let comps2: Vec<_> = (0..4)
                .map(|r| {
                    let mut acc = sqrte::MultiPoly::zero(s.base_vars());
                    for c in 0..4 {
                        if num_traits::Zero::is_zero(&g_inv[(r, c)]) {
                            continue;
                        }
                        acc = acc.add(&s.components()[c].scale(&g_inv[(r, c)]));
                    }
                    acc
                })
                .collect();
            let s2 = IsoSection::validate(s.base_vars(), space2, comps2, None).unwrap();
            let rh3 = route_rh3(&s2, 1).unwrap();
            let rh7 = route_rh7_clifford(&s2, DEFAULT_STEP_BUDGET).unwrap();
            let rh4 = route_rh4_deform(&s2, 1).unwrap();
            let cone = normal_cone_ideal(&s2).unwrap();
            let (_, oh6_e) = cone_bidegree_n2(&s2, &cone, 1).unwrap();
            assert_eq!(rh3.pair(), rh7.pair(), "(d,i,j)=({d},{i},{j})");
            assert_eq!(rh3.pair(), rh4.pair(), "(d,i,j)=({d},{i},{j})");
            assert_eq!(rh3.sqrt_e, oh6_e, "(d,i,j)=({d},{i},{j})");
            assert_eq!(rh3.sqrt_e.abs(), expect_abs, "(d,i,j)=({d},{i},{j})");
        }
    }
}

fn vars2() -> Vec<String> {
    vec!["x".into(), "y".into()]
}

fn poly_from_terms(terms: &[(u32, u32, i8)]) -> MultiPoly {
    let v = vars2();
    let mut p = MultiPoly::zero(&v);
    for &(a, b, c) in terms {
        if c != 0 {
            p = p.add(&MultiPoly::monomial(&v, vec![a, b], qint(c as i64)));
        }
    }
    p
}

fn arb_poly(max_deg: u32, max_terms: usize) -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec(
        (0..=max_deg, 0..=max_deg, -4i8..=4),
        1..=max_terms,
    )
    .prop_map(|ts| poly_from_terms(&ts))
}

fn nonzero_poly(max_deg: u32, max_terms: usize) -> impl Strategy<Value = MultiPoly> {
    arb_poly(max_deg, max_terms).prop_filter("nonzero", |p| !p.is_zero())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 32, ..ProptestConfig::default() })]

    #[test]
    fn gcd_respects_common_factors(
        p in nonzero_poly(2, 3),
        q in nonzero_poly(2, 3),
        r in nonzero_poly(2, 2),
    ) {
        let g_plain = gcd_poly(&p, &q);
        let g_scaled = gcd_poly(&p.mul(&r), &q.mul(&r));
        let expected = r.mul(&g_plain).monic(MonomialOrder::GrevLex);
        prop_assert_eq!(g_scaled, expected);
    }

    #[test]
    fn gcd_divides_and_cofactors_coprime(
        p in nonzero_poly(3, 4),
        q in nonzero_poly(3, 4),
    ) {
        let g = gcd_poly(&p, &q);
        let cp = p.exact_div(&g).expect("gcd divides p");
        let cq = q.exact_div(&g).expect("gcd divides q");
        prop_assert!(gcd_poly(&cp, &cq).is_constant());
    }

    #[test]
    fn resultant_vanishes_iff_common_factor(
        p in nonzero_poly(2, 3),
        q in nonzero_poly(2, 3),
    ) {
        prop_assume!(p.degree_in(0).unwrap_or(0) > 0 && q.degree_in(0).unwrap_or(0) > 0);
        let res = resultant(&p, &q, 0).unwrap();
        let g = gcd_poly(&p, &q);
        let shares_x = g.degree_in(0).unwrap_or(0) > 0;
        prop_assert_eq!(res.is_zero(), shares_x);
    }

    #[test]
    fn print_parse_round_trip(p in arb_poly(4, 5)) {
        let text = p.to_string();
        let back = parse_poly(&vars2(), &text).unwrap();
        prop_assert_eq!(p, back);
    }

    #[test]
    fn colength_is_order_independent(
        extra in prop::collection::vec((0..=3u32, 0..=3u32, -3i8..=3), 0..3),
        a in 1..=3u32,
        b in 1..=3u32,
    ) {
        // force zero-dimensionality with pure powers, then add noise
        let v = vars2();
        let mut gens = vec![
            MultiPoly::monomial(&v, vec![a, 0], qint(1)),
            MultiPoly::monomial(&v, vec![0, b], qint(1)),
        ];
        gens.push(poly_from_terms(&extra));
        let ideal = PolyIdeal::new(&v, gens);
        let grevlex = ideal.colength(MonomialOrder::GrevLex).unwrap();
        let lex = ideal.colength(MonomialOrder::Lex).unwrap();
        prop_assert_eq!(grevlex, lex);
    }

    #[test]
    fn saturation_is_idempotent_and_monotone(
        gens in prop::collection::vec(
            prop::collection::vec((0..=2u32, 0..=2u32, -3i8..=3), 1..3),
            1..3,
        ),
        f in nonzero_poly(2, 2),
    ) {
        let v = vars2();
        let ideal = PolyIdeal::new(&v, gens.iter().map(|t| poly_from_terms(t)).collect());
        let s1 = ideal.saturate(&f).unwrap();
        let s2 = s1.saturate(&f).unwrap();
        prop_assert!(s1.equals(&s2).unwrap());
        for g in ideal.gens() {
            prop_assert!(s1.contains(g).unwrap());
        }
    }

    #[test]
    fn syzygies_annihilate_the_matrix(
        a in arb_poly(2, 2),
        b in arb_poly(2, 2),
        c in arb_poly(2, 2),
        d in arb_poly(2, 2),
    ) {
        let matrix = vec![vec![a, b], vec![c, d]];
        let kernel = module_kernel(&vars2(), &matrix, DEFAULT_STEP_BUDGET).unwrap();
        for g in kernel.gens() {
            prop_assert!(matrix_apply(&matrix, g).is_zero());
        }
    }

    #[test]
    fn length_is_additive_on_chains(j in 1..=3u32, extra in 1..=2u32) {
        // Z = m^k ⊆ I = m^j ⊆ K = R as submodule chains of R¹
        let v = vars2();
        let k_pow = j + extra;
        let monomials = |deg: u32| -> Vec<VecPoly> {
            (0..=deg)
                .map(|i| VecPoly {
                    comps: vec![MultiPoly::monomial(&v, vec![i, deg - i], qint(1))],
                })
                .collect()
        };
        let full = PolyModule::new(&v, 1, vec![VecPoly { comps: vec![MultiPoly::one(&v)] }]);
        let mid = PolyModule::new(&v, 1, monomials(j));
        let small = PolyModule::new(&v, 1, monomials(k_pow));
        let total = subquotient_length(&full, &small, DEFAULT_STEP_BUDGET).unwrap();
        let upper = subquotient_length(&full, &mid, DEFAULT_STEP_BUDGET).unwrap();
        let lower = subquotient_length(&mid, &small, DEFAULT_STEP_BUDGET).unwrap();
        prop_assert_eq!(total, upper + lower);
    }

    #[test]
    fn parity_law_for_isotropic_planes(seed_a in 0u64..64, seed_b in 0u64..64) {
        let sp = QuadSpace::hyperbolic(2);
        let e = |i: usize| {
            let mut v = vec![qint(0); 4];
            v[i] = qint(1);
            v
        };
        let ref_plane = Subspace::from_columns(vec![e(0), e(3)]);
        let neg_plane = Subspace::from_columns(vec![e(0), e(2)]);
        let ga = sp.random_special_orthogonal(seed_a).unwrap();
        let gb = sp.random_special_orthogonal(seed_b).unwrap();
        for base_a in [&ref_plane, &neg_plane] {
            for base_b in [&ref_plane, &neg_plane] {
                let la = Subspace::new(ga.mul(base_a.basis()));
                let lb = Subspace::new(gb.mul(base_b.basis()));
                let sa = sp.isotropic_sign(&la).unwrap();
                let sb = sp.isotropic_sign(&lb).unwrap();
                let meet = intersection_dim(la.basis(), lb.basis());
                let parity = if (2 - meet as i64) % 2 == 0 { 1 } else { -1 };
                prop_assert_eq!(sa * sb, parity);
            }
        }
    }

    #[test]
    fn envelopes_reconstruct_the_line(
        a in -3i64..=3, b in -3i64..=3, c in -3i64..=3, d in -3i64..=3,
    ) {
        prop_assume!((a != 0 || b != 0) && (c != 0 || d != 0));
        let sp = QuadSpace::hyperbolic(2);
        // (Qq) inverse: v = (ac, -bd, ad, bc)
        let v = vec![qint(a * c), qint(-b * d), qint(a * d), qint(b * c)];
        prop_assume!(v.iter().any(|x| !num_traits::Zero::is_zero(x)));
        let (pos, neg) = sp.isotropic_envelopes_n2(&v).unwrap();
        prop_assert_eq!(sp.isotropic_sign(&pos).unwrap(), 1);
        prop_assert_eq!(sp.isotropic_sign(&neg).unwrap(), -1);
        prop_assert!(pos.contains_vector(&v));
        prop_assert!(neg.contains_vector(&v));
        prop_assert_eq!(intersection_dim(pos.basis(), neg.basis()), 1);
    }
}
