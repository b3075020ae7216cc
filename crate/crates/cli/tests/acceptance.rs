//! One PASS/FAIL line per acceptance criterion.
//!
//! Criterion 9 includes the span equality between the 30 printed vectors and
//! the annihilator of the 7-generator relations. The printed data disagree in
//! one term of the third relation, so that part fails; every other part of
//! criterion 9 must still pass.

use quadalg_cli::verify::{run_verify, Status};

const KNOWN_FAILING_PARTS: &[(u32, &str)] = &[(9, "g30 = M^perp(ex7-19)")];

fn main() {
    let report = run_verify(None);
    let mut unexpected = Vec::new();
    for criterion in 1..=17u32 {
        let rows: Vec<_> = report
            .rows
            .iter()
            .filter(|r| r.criterion == criterion && r.status != Status::Informational)
            .collect();
        assert_eq!(rows.len(), 1, "criterion {criterion} must have exactly one scored row");
        let row = rows[0];
        let label = if row.status == Status::Pass { "PASS" } else { "FAIL" };
        println!("{label} criterion {criterion:>2} {}: {}", row.id, row.computed);
        for part in row.parts.iter().filter(|p| !p.ok) {
            let known = KNOWN_FAILING_PARTS.contains(&(criterion, part.name.as_str()));
            println!("     failed part{}: {} ({})", if known { " (known data conflict)" } else { "" }, part.name, part.detail);
            if !known {
                unexpected.push(format!("{}: {}", row.id, part.name));
            }
        }
    }
    for row in report.rows.iter().filter(|r| r.status == Status::Informational) {
        println!("INFO {}: {}", row.id, row.computed);
    }
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
