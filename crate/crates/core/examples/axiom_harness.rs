//! Metamorphic property harness for every rule. Pass a trial count as the
//! first argument (default 200).

use attrvote::axioms::{revalidate, run_axiom_suite};
use attrvote::{Election, RuleId, SelectOptions};

fn main() {
    let trials = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(200);
    let opts = SelectOptions::default();
    println!("{:<5} {:>12} {:>12} {:>12} {:>12}", "rule", "homogeneity", "consistency", "monotonic", "committee-mono");
    for rule in RuleId::ALL {
        let report = run_axiom_suite(rule, trials, 2024, 4, &opts).unwrap();
        let cells: Vec<String> = report.properties.iter().map(|t| format!("{}/{}", t.violations, t.checked - t.vacuous)).collect();
        println!("{:<5} {:>12} {:>12} {:>12} {:>12}", rule.name(), cells[0], cells[1], cells[2], cells[3]);
        for t in &report.properties {
            if let Some(c) = &t.counterexample {
                let e = Election::from_file(&c.election).unwrap();
                assert!(revalidate(rule, &e, &c.witness, &opts).unwrap());
            }
        }
    }
    println!("(violations / non-vacuous checks; every reported witness was replayed)");
}
