//! Runs a few seeded suites and prints the report table and JSON.

use nilbracket::harness::{run_all, SuiteConfig, SuiteName};

fn main() -> nilbracket::Result<()> {
    let plan = vec![
        SuiteConfig::new(SuiteName::GeneralJacobi).dim(2).trials(20),
        SuiteConfig::new(SuiteName::IconAntisymmetry).trials(5),
        SuiteConfig::new(SuiteName::IconAntisymmetry).trials(5).realign(false),
        SuiteConfig::new(SuiteName::FnGradedAntisymmetry).degrees(&[1, 2]).trials(3),
    ];
    let report = run_all(&plan)?;
    print!("{}", report.to_text());
    println!("{}", serde_json::to_string_pretty(&report.to_json()).expect("json"));
    Ok(())
}
