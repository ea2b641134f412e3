//! Acceptance run: one PASS/FAIL line per criterion, with its runtime budget.

use std::time::{Duration, Instant};
use sublinear_bodies::cli::{run_experiment, run_suite, Params, Report};
use sublinear_bodies::error::Result;

struct Criterion {
    id: u32,
    what: &'static str,
    budget: Duration,
    run: fn() -> Result<Report>,
}

fn suite(name: &str) -> Result<Report> {
    run_suite(name, &Params::default())
}

fn experiment(name: &str) -> Result<Report> {
    run_experiment(name, &Params::default()).map(|(r, _)| r)
}

const fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

const CRITERIA: &[Criterion] = &[
    Criterion { id: 1, what: "closed forms and non-monotone floating body", budget: secs(1), run: || experiment("nonmonotone") },
    Criterion { id: 2, what: "dual representations vs LP", budget: secs(30), run: || suite("duals") },
    Criterion { id: 3, what: "expectation axioms", budget: secs(30), run: || suite("axioms") },
    Criterion { id: 4, what: "exact sweep vs support sandwich", budget: secs(60), run: || suite("sweep") },
    Criterion { id: 5, what: "inclusion chains", budget: secs(300), run: || suite("inclusion") },
    Criterion { id: 6, what: "depth regions vs quantile bodies", budget: secs(120), run: || suite("bob") },
    Criterion { id: 7, what: "centroid bodies", budget: secs(120), run: || suite("centroid") },
    Criterion { id: 8, what: "expected polytope vs Monte Carlo", budget: secs(180), run: || experiment("expected-polytope") },
    Criterion { id: 9, what: "concentration of sample bodies", budget: secs(300), run: || experiment("concentration") },
    Criterion { id: 10, what: "maximum extensions", budget: secs(30), run: || suite("max-extension") },
    Criterion { id: 11, what: "continuity in the body", budget: secs(120), run: || suite("continuity") },
];

fn main() {
    let mut failed = 0;
    for c in CRITERIA {
        let start = Instant::now();
        let outcome = (c.run)();
        let took = start.elapsed();
        let detail = match &outcome {
            Ok(r) if r.passed() => format!("{} checks", r.checks.len()),
            Ok(r) => {
                let f: Vec<String> = r.failures().take(3).map(|k| format!("{}={:.3e}>{:.3e}", k.name, k.value, k.tolerance)).collect();
                format!("{} of {} checks failed: {}", r.failures().count(), r.checks.len(), f.join(", "))
            }
            Err(e) => format!("error: {e}"),
        };
        let ok = matches!(&outcome, Ok(r) if r.passed()) && took <= c.budget;
        let timing = if took > c.budget { format!(" over budget {:?}", c.budget) } else { String::new() };
        println!("{} criterion {:>2} {} ({:.2}s{}) {}", if ok { "PASS" } else { "FAIL" }, c.id, c.what, took.as_secs_f64(), timing, detail);
        failed += usize::from(!ok);
    }
    println!("{} of {} criteria passed", CRITERIA.len() - failed, CRITERIA.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
