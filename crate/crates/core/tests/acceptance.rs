//! Full verification suite at default quadrature: calibrate, run every
//! pipeline, print one verdict per acceptance criterion.

use std::io::Write;

use intgeo::report::{Report, ReportRow};
use intgeo::suite::{self, SuiteContext};
use intgeo::QuadratureSpec;

struct Criterion {
    number: usize,
    title: &'static str,
    prefixes: &'static [&'static str],
    /// Per-row runtime budget in milliseconds, for rows matching the prefix.
    budget: Option<(&'static str, u64)>,
}

const CRITERIA: [Criterion; 10] = [
    Criterion {
        number: 1,
        title: "Euclidean X-ray inversion on R2 and R3",
        prefixes: &["euclid.r2.", "euclid.r3.xray"],
        budget: Some(("euclid.r", 60_000)),
    },
    Criterion {
        number: 2,
        title: "2-plane inversion in R3 and c(2) consistency",
        prefixes: &["euclid.r3.planes", "calibrate.c_d_3_2."],
        budget: None,
    },
    Criterion {
        number: 3,
        title: "hyperbolic X-ray and plane inversion on H2 and H3",
        prefixes: &["hyp.", "calibrate.C_d_3_2."],
        budget: None,
    },
    Criterion {
        number: 4,
        title: "rank-two X-ray inversion on H2xH2",
        prefixes: &["product."],
        budget: Some(("product.", 300_000)),
    },
    Criterion {
        number: 5,
        title: "horocycle duality, Lambda round trip, Plancherel",
        prefixes: &["horocycle.", "calibrate.horocycle_mu_exponent", "calibrate.kappa.cross_module"],
        budget: None,
    },
    Criterion {
        number: 6,
        title: "range law with negative control",
        prefixes: &["range.", "calibrate.range."],
        budget: None,
    },
    Criterion {
        number: 7,
        title: "support theorem harness",
        prefixes: &["support."],
        budget: None,
    },
    Criterion {
        number: 8,
        title: "Abel transform identities",
        prefixes: &["abel."],
        budget: None,
    },
    Criterion {
        number: 9,
        title: "Fourier transform on the disk and Riemann-Lebesgue scan",
        prefixes: &["fourier.", "rl.", "calibrate.kappa.nominal"],
        budget: None,
    },
    Criterion {
        number: 10,
        title: "oracle hygiene",
        prefixes: &["oracle."],
        budget: None,
    },
];

fn verdict(c: &Criterion, rows: &[&ReportRow]) -> (bool, String) {
    let mut notes = Vec::new();
    let mut ok = !rows.is_empty();
    for r in rows {
        if !r.pass {
            ok = false;
            notes.push(format!("{} value={:.3e} tol={:.1e}", r.check_id, r.value, r.tolerance));
        }
    }
    if let Some((prefix, ms)) = c.budget {
        for r in rows.iter().filter(|r| r.check_id.starts_with(prefix)) {
            if r.runtime_ms > ms {
                ok = false;
                notes.push(format!("{} took {} ms > {} ms", r.check_id, r.runtime_ms, ms));
            }
        }
    }
    let worst = rows
        .iter()
        .filter(|r| r.tolerance > 0.0 && r.criterion != intgeo::report::Criterion::ExpectedFail)
        .map(|r| {
            let err = if r.reference != 0.0 && r.rel_err < r.abs_err { r.rel_err } else { r.abs_err };
            err / r.tolerance
        })
        .fold(0.0f64, f64::max);
    let mut detail = format!("{} rows, worst err/tol {:.1e}", rows.len(), worst);
    if !notes.is_empty() {
        detail.push_str("; ");
        detail.push_str(&notes.join("; "));
    }
    (ok, detail)
}

#[test]
fn acceptance_criteria() {
    let mut ctx = SuiteContext::new(QuadratureSpec::default());
    let (mut report, constants) = suite::calibrate(&ctx).expect("calibration runs");
    println!("frozen constants: {constants:?}");
    ctx.constants = Some(constants);
    for name in suite::PIPELINES {
        let r: Report = suite::run_pipeline(name, &ctx).unwrap_or_else(|e| panic!("{name}: {e}"));
        report.extend(r);
    }
    for r in &report.rows {
        println!("  {}", r.csv_line());
    }

    let mut failed = Vec::new();
    for c in &CRITERIA {
        let rows: Vec<&ReportRow> = report
            .rows
            .iter()
            .filter(|r| c.prefixes.iter().any(|p| r.check_id.starts_with(p)))
            .collect();
        let (ok, detail) = verdict(c, &rows);
        // the raw handle is not captured, so verdicts show without --nocapture
        let line = format!("criterion {:>2} {}: {} ({detail})", c.number, if ok { "PASS" } else { "FAIL" }, c.title);
        writeln!(std::io::stdout(), "{line}").unwrap();
        if !ok {
            failed.push(c.number);
        }
    }
    let unassigned: Vec<&str> = report
        .rows
        .iter()
        .filter(|r| !CRITERIA.iter().any(|c| c.prefixes.iter().any(|p| r.check_id.starts_with(p))))
        .map(|r| r.check_id.as_str())
        .collect();
    println!("{} report rows, unassigned: {unassigned:?}", report.rows.len());
    assert!(failed.is_empty(), "criteria failed: {failed:?}");
}
