//! The regression suite over the worked examples: the (d, i, j) family on
//! the standard rank-4 space, the flagship length-3 example, the rank-6
//! example over C³, the normal-cone hand computation, and winding spot
//! checks.

use sqrte::cone::{cone_bidegree_n2, normal_cone_ideal, segre_class};
use sqrte::poly::parse_poly;
use sqrte::quad::QuadSpace;
use sqrte::routes::{
    route_oh5_incidence, route_oh8_torus, route_rh3, route_rh4_deform, route_rh5_homogeneous,
    route_rh7_clifford,
};
use sqrte::section::{running_example, try_running_example, IsoSection};
use sqrte::winding::oh1_check;
use sqrte::PolyIdeal;

pub struct SuiteOutcome {
    pub lines: Vec<String>,
    pub failures: usize,
    pub checks: usize,
}

impl SuiteOutcome {
    fn record(&mut self, label: &str, ok: bool, detail: String) {
        self.checks += 1;
        if !ok {
            self.failures += 1;
        }
        let tag = if ok { "pass" } else { "FAIL" };
        self.lines.push(format!("[{tag}] {label}: {detail}"));
    }
}

pub fn paper_suite(max_d: u32, seed: u64, samples: usize, budget: usize) -> SuiteOutcome {
    let mut out = SuiteOutcome { lines: Vec::new(), failures: 0, checks: 0 };

    // refined grid: rh3, rh7, rh4 and oh8 against the closed form
    for d in 1..=max_d {
        for i in 0..=d {
            for j in 0..=d {
                let label = format!("grid d={d} i={i} j={j}");
                let s = match try_running_example(d, i, j, true) {
                    Ok(s) => s,
                    Err(_) => {
                        out.lines.push(format!(
                            "[skip] {label}: empty zero locus, rejected by the validator"
                        ));
                        continue;
                    }
                };
                let expect = ((i * (d - j)) as u64, (j * (d - i)) as u64);
                let expect_e = d as i64 * (i as i64 - j as i64);
                let rh3 = route_rh3(&s, seed);
                let rh7 = route_rh7_clifford(&s, budget);
                let rh4 = route_rh4_deform(&s, seed);
                let oh8 = route_oh8_torus(&s);
                let got = (
                    rh3.as_ref().map(|r| r.pair()).unwrap_or(None),
                    rh7.as_ref().map(|r| r.pair()).unwrap_or(None),
                    rh4.as_ref().map(|r| r.pair()).unwrap_or(None),
                    oh8.as_ref().map(|r| r.sqrt_e).ok(),
                );
                let ok = got.0 == Some(expect)
                    && got.1 == Some(expect)
                    && got.2 == Some(expect)
                    && got.3 == Some(expect_e);
                out.record(
                    &label,
                    ok,
                    format!(
                        "expected (d1,d2)={expect:?}, sqrt_e={expect_e}; rh3={:?} rh7={:?} rh4={:?} oh8={:?}",
                        got.0, got.1, got.2, got.3
                    ),
                );
            }
        }
    }

    // flagship: sqrt_e = 0 with (1,1) while the zero locus has length 3
    {
        let s = running_example(2, 1, 1, true);
        let length = s.zero_locus_length().unwrap_or(0);
        let rh3 = route_rh3(&s, seed).map(|r| r.pair()).unwrap_or(None);
        out.record(
            "flagship (x^2, y^2, xy, -xy)",
            rh3 == Some((1, 1)) && length == 3,
            format!("rh3 pair {rh3:?}, length Z(s) = {length}"),
        );
    }

    // homogeneous subgrid: rh5 and oh5 with the (homd) degree identity
    for d in 1..=max_d {
        for i in 0..=d {
            let j = d - i;
            let label = format!("homogeneous d={d} i={i} j={j}");
            let s = running_example(d, i, j, false);
            let rh5 = route_rh5_homogeneous(&s);
            let oh5 = route_oh5_incidence(&s, seed);
            let ok = match (&rh5, &oh5) {
                (Ok((idx5, (dm, dp))), Ok((_, (odp, odm)))) => {
                    (*dm, *dp) == (i, j)
                        && idx5.pair() == Some(((i as u64).pow(2), (j as u64).pow(2)))
                        && (*odp, *odm) == (j as u64, i as u64)
                        && odp + odm == d as u64
                }
                _ => false,
            };
            out.record(
                &label,
                ok,
                format!("rh5 {:?}, oh5 {:?}", rh5.map(|r| r.1), oh5.map(|r| r.1)),
            );
        }
    }

    // rank-6 example over C³
    {
        let vars: Vec<String> = vec!["x".into(), "y".into(), "z".into()];
        let comps = ["x^2", "y^2", "z^2", "x*y", "x*z", "y*z"]
            .iter()
            .map(|t| parse_poly(&vars, t).unwrap())
            .collect();
        let s = IsoSection::validate(&vars, QuadSpace::eg2_form(), comps, None).unwrap();
        let oh5 = route_oh5_incidence(&s, seed);
        let segre = segre_class(&s, seed);
        let ok = match (&oh5, &segre) {
            (Ok((idx, (dp, dm))), Ok(sg)) => {
                let mut pair = [*dp, *dm];
                pair.sort();
                pair == [1, 3] && idx.sqrt_e.abs() == 4 && *sg == 8 && idx.sqrt_e.abs() < *sg as i64
            }
            _ => false,
        };
        out.record(
            "rank-6 example over C^3",
            ok,
            format!("oh5 {:?}, segre {:?}", oh5.map(|r| (r.0.sqrt_e, r.1)), segre),
        );
    }

    // normal-cone regression for the flagship
    {
        let s = running_example(2, 1, 1, false);
        let cone = normal_cone_ideal(&s).unwrap();
        let expect_gens =
            ["Z + W", "X*Y - Z^2", "y*X - x*Z", "x*Y - y*Z", "x^2", "x*y", "y^2"];
        let expected = PolyIdeal::new(
            &cone.vars,
            expect_gens.iter().map(|g| parse_poly(&cone.vars, g).unwrap()).collect(),
        );
        let ideal_ok = cone.ideal.equals(&expected).unwrap_or(false);
        let bidegree = cone_bidegree_n2(&s, &cone, seed);
        let segre = segre_class(&s, seed);
        let ok = ideal_ok
            && matches!(bidegree, Ok(((2, 2), 0)))
            && matches!(segre, Ok(4));
        out.record(
            "normal cone of the flagship",
            ok,
            format!("ideal match = {ideal_ok}, bidegree {bidegree:?}, segre {segre:?}"),
        );
    }

    // winding spot checks
    for (d, i, j, expect) in [(2u32, 1u32, 1u32, 0i64), (2, 1, 0, 2), (3, 2, 1, 3)] {
        let label = format!("winding d={d} i={i} j={j}");
        let s = running_example(d, i, j, false);
        match oh1_check(&s, samples, seed) {
            Ok(w) => out.record(
                &label,
                w.degree == expect && w.residual < 0.25,
                format!("degree {} (expected {expect}), residual {:.4}", w.degree, w.residual),
            ),
            Err(e) => out.record(&label, false, format!("error: {e}")),
        }
    }

    out
}
