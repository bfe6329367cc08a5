// JSON state documents in, reports out: what `witness run` does.

use modewit::report::{run_document, ReportDocument, RunOptions};
use modewit::witness::{BatteryConfig, CriterionSet};

const DOCS: [&str; 4] = [
    r#"{"constructor": "ghz", "cutoff": [2, 2, 2]}"#,
    r#"{"constructor": "product", "cutoff": [8, 3, 3],
        "factors": [{"constructor": "coherent", "cutoff": [8], "amplitudes": [[0.3, 0.1]]},
                    {"constructor": "ghz", "cutoff": [3, 3]}]}"#,
    r#"{"constructor": "random_mixture", "cutoff": [3, 3, 3], "components": 5,
        "partition": [[0, 1], [2]], "seed": 11}"#,
    r#"{"constructor": "fock", "cutoff": [2, 2], "occupations": [0, 2]}"#,
];

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let opts = RunOptions {
        battery: BatteryConfig {
            max_degree: 2,
            criteria: CriterionSet::parse("pair_variance,moment,phase_variance")?,
            ..Default::default()
        },
        oracle: true,
        ..Default::default()
    };
    for doc in DOCS {
        println!("{}", doc.split_whitespace().collect::<Vec<_>>().join(" "));
        match run_document(doc, &opts) {
            Ok((report, fired)) => {
                println!(
                    "  exit {}  cuts {:?}  phase-variance full {}  touching cutoff {}",
                    if fired { 2 } else { 0 },
                    report.flags.entangled_cuts,
                    report.flags.fully_entangled_via_phase_variance,
                    report.truncation.flagged_results
                );
                let json = report.to_json();
                assert_eq!(ReportDocument::from_json(&json)?, report);
            }
            Err(e) => println!("  exit 1  {e}"),
        }
    }
    let (report, _) = run_document(DOCS[0], &opts)?;
    println!("\n{}", report.to_text());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
