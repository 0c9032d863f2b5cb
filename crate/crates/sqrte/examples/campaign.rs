//! Randomized cross-validation sweep: builds seeded random isotropic
//! sections (f·σ₀, g·(σ₀⌟ω)) with coprime homogeneous pieces and checks
//! that every n = 2 route returns the predicted refined pair, that the
//! cone route and the Segre bound agree, and (on a subsample) that the
//! winding verifier matches.
//!
//! Run with: cargo run --release -p sqrte --example campaign
use sqrte::cone::{cone_bidegree_n2, normal_cone_ideal, segre_class};
use sqrte::ideal::DEFAULT_STEP_BUDGET;
use sqrte::poly::{qint, MultiPoly};
use sqrte::quad::QuadSpace;
use sqrte::rng::SeededRng;
use sqrte::routes::{route_rh3, route_rh4_deform, route_rh7_clifford};
use sqrte::section::{contract_omega, IsoSection};
use sqrte::winding::oh1_check;

fn random_binary_form(rng: &mut SeededRng, vars: &[String], degree: u32) -> MultiPoly {
    loop {
        let mut p = MultiPoly::zero(vars);
        for k in 0..=degree {
            let c = rng.int_in(-3, 3);
            if c != 0 {
                p = p.add(&MultiPoly::monomial(vars, vec![k, degree - k], qint(c)));
            }
        }
        if !p.is_zero() {
            return p;
        }
    }
}

fn main() {
    let v: Vec<String> = vec!["x".into(), "y".into()];
    let mut rng = SeededRng::new(0xCAFE);
    let mut done = 0;
    let mut winding_checked = 0;
    while done < 120 {
        let a1 = rng.int_in(1, 3) as u32;
        let a2 = rng.int_in(1, 2) as u32;
        let m = rng.int_in(1, 2) as u32;
        let k = rng.int_in(1, 2) as u32;
        let s0 = [random_binary_form(&mut rng, &v, a1), random_binary_form(&mut rng, &v, a2)];
        if !sqrte::gcd_poly(&s0[0], &s0[1]).is_constant() { continue; }
        let f = random_binary_form(&mut rng, &v, m);
        let g = random_binary_form(&mut rng, &v, k);
        if !sqrte::gcd_poly(&f, &g).is_constant() { continue; }
        let tau0 = contract_omega(&s0);
        let comps = vec![f.mul(&s0[0]), g.mul(&tau0[0]), g.mul(&tau0[1]), f.mul(&s0[1])];
        let Ok(s) = IsoSection::validate(&v, QuadSpace::hyperbolic(2), comps, None) else { continue; };
        done += 1;
        let expect = ((a1 * a2) as u64, (m * k) as u64);
        let rh3 = route_rh3(&s, 1).unwrap();
        assert_eq!(rh3.pair(), Some(expect), "case {done} rh3");
        let rh7 = route_rh7_clifford(&s, DEFAULT_STEP_BUDGET).unwrap();
        assert_eq!(rh7.pair(), Some(expect), "case {done} rh7");
        let rh4 = route_rh4_deform(&s, done as u64).unwrap();
        assert_eq!(rh4.pair(), Some(expect), "case {done} rh4");
        let cone = normal_cone_ideal(&s).unwrap();
        let ((_, _), oh6_e) = cone_bidegree_n2(&s, &cone, 1).unwrap();
        assert_eq!(oh6_e, rh3.sqrt_e, "case {done} oh6");
        let seg = segre_class(&s, 1).unwrap();
        assert!(rh3.sqrt_e.abs() <= seg as i64, "case {done} segre bound");
        // winding on every 6th case (the slow verifier)
        if done % 6 == 0 {
            let w = oh1_check(&s, 120_000, 1).unwrap();
            assert_eq!(w.degree, rh3.sqrt_e, "case {done} winding");
            winding_checked += 1;
        }
        if done % 30 == 0 {
            println!("{done} cases checked...");
        }
    }
    println!("campaign complete: 120 sections, every route agrees ({winding_checked} winding checks)");
}
