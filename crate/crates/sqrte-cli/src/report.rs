//! Route dispatch, cross-validation and report rendering.

use serde::Serialize;
use sqrte::cone::{cone_bidegree_n2, normal_cone_ideal, segre_class};
use sqrte::routes::{
    route_oh5_incidence, route_oh8_torus, route_rh3, route_rh4_deform, route_rh5_homogeneous,
    route_rh7_clifford, route_rh8_spin, section_degree, RefinedIndex, SpinModel,
};
use sqrte::section::IsoSection;
use sqrte::winding::{oh1_check, DEFAULT_SAMPLES};

pub const EXACT_ROUTES: [&str; 8] = ["rh3", "rh5", "oh5", "rh7", "rh4", "oh8", "rh8", "oh6"];
pub const KNOWN_ROUTES: [&str; 10] =
    ["rh3", "rh5", "oh5", "rh7", "rh4", "oh8", "rh8", "oh6", "segre", "oh1"];

#[derive(Debug, Clone, Serialize)]
pub struct RouteReport {
    pub route: String,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sqrt_e: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d1: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d2: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub estimate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl RouteReport {
    fn ok_index(route: &str, idx: &RefinedIndex) -> Self {
        RouteReport {
            route: route.to_string(),
            status: "ok".into(),
            sqrt_e: Some(idx.sqrt_e),
            d1: idx.d1,
            d2: idx.d2,
            value: None,
            estimate: None,
            residual: None,
            notes: idx.diagnostics.clone(),
            error: None,
        }
    }

    fn errored(route: &str, message: String) -> Self {
        RouteReport {
            route: route.to_string(),
            status: "error".into(),
            sqrt_e: None,
            d1: None,
            d2: None,
            value: None,
            estimate: None,
            residual: None,
            notes: Vec::new(),
            error: Some(message),
        }
    }

    fn skipped(route: &str, why: &str) -> Self {
        RouteReport {
            route: route.to_string(),
            status: "skipped".into(),
            sqrt_e: None,
            d1: None,
            d2: None,
            value: None,
            estimate: None,
            residual: None,
            notes: vec![why.to_string()],
            error: None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct IndexReport {
    pub seed: u64,
    pub samples: usize,
    pub zero_locus_length: usize,
    pub routes: Vec<RouteReport>,
    pub verdict: String,
    pub verdict_notes: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub seed: u64,
    pub samples: usize,
    pub step_budget: usize,
    pub routes: Option<Vec<String>>,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            seed: 1,
            samples: DEFAULT_SAMPLES,
            step_budget: sqrte::ideal::DEFAULT_STEP_BUDGET,
            routes: None,
        }
    }
}

fn requested<'a>(options: &'a RunOptions, route: &str) -> bool {
    match &options.routes {
        None => true,
        Some(list) => list.iter().any(|r| r == route),
    }
}

/// Run every applicable requested route, concurrently, in a fixed report
/// order.
pub fn cross_validate(
    section: &IsoSection,
    spin: Option<&SpinModel>,
    options: &RunOptions,
) -> IndexReport {
    let n = section.n();
    let homogeneous = section_degree(section).is_some();
    let rational_split = section.space().hyperbolic_splitting().is_ok();
    let seed = options.seed;
    let budget = options.step_budget;
    let samples = options.samples;

    type Job<'a> = Box<dyn FnOnce() -> RouteReport + Send + 'a>;
    let mut jobs: Vec<(usize, Job)> = Vec::new();
    let mut reports: Vec<Option<RouteReport>> = Vec::new();
    let mut slot = |r: Option<RouteReport>| -> usize {
        reports.push(r);
        reports.len() - 1
    };

    macro_rules! route {
        ($name:literal, $applicable:expr, $why:literal, $body:expr) => {
            if requested(options, $name) {
                if $applicable {
                    let idx = slot(None);
                    jobs.push((idx, Box::new($body)));
                } else {
                    slot(Some(RouteReport::skipped($name, $why)));
                }
            }
        };
    }

    route!("rh3", n == 2 && rational_split, "needs n = 2 and a rational splitting", move || {
        match route_rh3(section, seed) {
            Ok(idx) => RouteReport::ok_index("rh3", &idx),
            Err(e) => RouteReport::errored("rh3", e.to_string()),
        }
    });
    route!("rh5", n == 2 && homogeneous && rational_split, "needs n = 2 and a homogeneous section", move || {
        match route_rh5_homogeneous(section) {
            Ok((idx, _)) => RouteReport::ok_index("rh5", &idx),
            Err(e) => RouteReport::errored("rh5", e.to_string()),
        }
    });
    route!("oh5", homogeneous, "needs a homogeneous section", move || {
        match route_oh5_incidence(section, seed) {
            Ok((idx, (dp, dm))) => {
                let mut r = RouteReport::ok_index("oh5", &idx);
                r.notes.push(format!("d+ = {dp}, d- = {dm}"));
                r
            }
            Err(e) => RouteReport::errored("oh5", e.to_string()),
        }
    });
    route!("rh7", rational_split, "needs a rational splitting", move || {
        match route_rh7_clifford(section, budget) {
            Ok(idx) => RouteReport::ok_index("rh7", &idx),
            Err(e) => RouteReport::errored("rh7", e.to_string()),
        }
    });
    route!("rh4", n == 2 && rational_split, "needs n = 2 and a rational splitting", move || {
        match route_rh4_deform(section, seed) {
            Ok(idx) => RouteReport::ok_index("rh4", &idx),
            Err(e) => RouteReport::errored("rh4", e.to_string()),
        }
    });
    route!("oh8", section.torus().is_some(), "needs torus weights", move || {
        match route_oh8_torus(section) {
            Ok(idx) => RouteReport::ok_index("oh8", &idx),
            Err(e) => RouteReport::errored("oh8", e.to_string()),
        }
    });
    route!("rh8", spin.is_some(), "needs a spin-model block", move || {
        match route_rh8_spin(spin.unwrap(), seed) {
            Ok(idx) => RouteReport::ok_index("rh8", &idx),
            Err(e) => RouteReport::errored("rh8", e.to_string()),
        }
    });
    route!("oh6", n == 2 && rational_split, "needs n = 2 and a rational splitting", move || {
        let cone = match normal_cone_ideal(section) {
            Ok(c) => c,
            Err(e) => return RouteReport::errored("oh6", e.to_string()),
        };
        match cone_bidegree_n2(section, &cone, seed) {
            Ok(((alpha, beta), sqrt_e)) => {
                let mut r = RouteReport::ok_index(
                    "oh6",
                    &RefinedIndex::plain("oh6", sqrt_e),
                );
                r.notes.push(format!("bidegree (alpha, beta) = ({alpha}, {beta})"));
                r
            }
            Err(e) => RouteReport::errored("oh6", e.to_string()),
        }
    });
    route!("segre", true, "", move || match segre_class(section, seed) {
        Ok(v) => {
            let mut r = RouteReport::skipped("segre", "");
            r.status = "ok".into();
            r.notes.clear();
            r.value = Some(v as i64);
            r
        }
        Err(e) => RouteReport::errored("segre", e.to_string()),
    });
    route!("oh1", n == 2, "winding integrates over S^3 (n = 2 only)", move || {
        match oh1_check(section, samples, seed) {
            Ok(w) => RouteReport {
                route: "oh1".into(),
                status: "ok".into(),
                sqrt_e: Some(w.degree),
                d1: None,
                d2: None,
                value: None,
                estimate: Some(w.estimate),
                residual: Some(w.residual),
                notes: Vec::new(),
                error: None,
            },
            Err(e) => RouteReport::errored("oh1", e.to_string()),
        }
    });

    // dispatch concurrently, fill the fixed slots
    let computed: Vec<(usize, RouteReport)> = std::thread::scope(|scope| {
        let handles: Vec<_> = jobs
            .into_iter()
            .map(|(idx, job)| scope.spawn(move || (idx, job())))
            .collect();
        handles.into_iter().map(|h| h.join().expect("route thread panicked")).collect()
    });
    for (idx, report) in computed {
        reports[idx] = Some(report);
    }
    let routes: Vec<RouteReport> = reports.into_iter().map(|r| r.expect("slot filled")).collect();

    let zero_locus_length = section.zero_locus_length().unwrap_or(0);
    let (verdict, verdict_notes) = judge(&routes);
    IndexReport {
        seed: options.seed,
        samples: options.samples,
        zero_locus_length,
        routes,
        verdict,
        verdict_notes,
    }
}

/// Agreement verdict: all successful exact routes must report one √e (and
/// one refined pair where defined); a successful winding integer must
/// match; the Segre number must bound |√e|.
fn judge(routes: &[RouteReport]) -> (String, Vec<String>) {
    let mut notes = Vec::new();
    let mut pass = true;
    if !routes.is_empty() && !routes.iter().any(|r| r.status == "ok") {
        pass = false;
        notes.push("no requested route succeeded".into());
    }
    let exact: Vec<&RouteReport> = routes
        .iter()
        .filter(|r| EXACT_ROUTES.contains(&r.route.as_str()) && r.status == "ok")
        .collect();
    let sqrt_es: Vec<i64> = exact.iter().filter_map(|r| r.sqrt_e).collect();
    if let Some((&first, rest)) = sqrt_es.split_first() {
        if rest.iter().any(|&v| v != first) {
            pass = false;
            let detail: Vec<String> = exact
                .iter()
                .filter_map(|r| r.sqrt_e.map(|v| format!("{} = {v}", r.route)))
                .collect();
            notes.push(format!("exact routes disagree on sqrt_e: {}", detail.join(", ")));
        }
    }
    let pairs: Vec<(&str, u64, u64)> = exact
        .iter()
        .filter_map(|r| Some((r.route.as_str(), r.d1?, r.d2?)))
        .collect();
    if let Some((first, rest)) = pairs.split_first() {
        if rest.iter().any(|p| (p.1, p.2) != (first.1, first.2)) {
            pass = false;
            let detail: Vec<String> =
                pairs.iter().map(|p| format!("{} = ({}, {})", p.0, p.1, p.2)).collect();
            notes.push(format!("refined pairs disagree: {}", detail.join(", ")));
        }
    }
    if let (Some(&reference), Some(w)) = (
        sqrt_es.first(),
        routes.iter().find(|r| r.route == "oh1" && r.status == "ok"),
    ) {
        if w.sqrt_e != Some(reference) {
            pass = false;
            notes.push(format!(
                "verifier-mismatch: winding degree {:?} differs from exact sqrt_e {reference}",
                w.sqrt_e
            ));
        }
    }
    if let (Some(&reference), Some(s)) = (
        sqrt_es.first(),
        routes.iter().find(|r| r.route == "segre" && r.status == "ok"),
    ) {
        if let Some(bound) = s.value {
            if reference.abs() > bound {
                pass = false;
                notes.push(format!(
                    "Segre bound violated: |{reference}| > {bound}"
                ));
            } else {
                notes.push(format!("Segre bound holds: |{reference}| <= {bound}"));
            }
        }
    }
    (if pass { "pass" } else { "fail" }.to_string(), notes)
}

pub fn render_table(report: &IndexReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "length Z(s) = {}   seed = {}   samples = {}\n",
        report.zero_locus_length, report.seed, report.samples
    ));
    out.push_str(&format!(
        "{:<7} {:<8} {:>8} {:>6} {:>6}  notes\n",
        "route", "status", "sqrt_e", "d1", "d2"
    ));
    for r in &report.routes {
        let fmt_opt = |v: Option<i64>| v.map_or("-".to_string(), |x| x.to_string());
        let fmt_u = |v: Option<u64>| v.map_or("-".to_string(), |x| x.to_string());
        let mut notes = r.notes.join("; ");
        if let Some(e) = &r.error {
            notes = e.clone();
        }
        if let Some(v) = r.value {
            notes = format!("value = {v}; {notes}");
        }
        if let (Some(est), Some(res)) = (r.estimate, r.residual) {
            notes = format!("estimate {est:.4}, residual {res:.4}; {notes}");
        }
        out.push_str(&format!(
            "{:<7} {:<8} {:>8} {:>6} {:>6}  {}\n",
            r.route,
            r.status,
            fmt_opt(r.sqrt_e),
            fmt_u(r.d1),
            fmt_u(r.d2),
            notes
        ));
    }
    for note in &report.verdict_notes {
        out.push_str(&format!("note: {note}\n"));
    }
    out.push_str(&format!("verdict: {}\n", report.verdict));
    out
}
