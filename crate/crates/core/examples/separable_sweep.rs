// No criterion fires on separable input.
//
// Seeded random mixtures of products, fully separable and separable
// across each cut, are pushed through the whole battery. Criteria that
// concern a cut the mixture is separable across must stay silent.

use modewit::fock::{CutoffSpec, State};
use modewit::states::{random_separable_mixture, Partition};
use modewit::witness::{run_battery, BatteryConfig, Scope};
use modewit::Bipartition;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let cutoff = CutoffSpec::uniform(3, 4)?;
    let config = BatteryConfig { max_degree: 2, ..Default::default() };
    let classes = [
        ("A|B|C", Partition::singletons(3)),
        ("A|BC", Partition::bipartite(3, &[0])?),
        ("B|AC", Partition::bipartite(3, &[1])?),
        ("AB|C", Partition::bipartite(3, &[0, 1])?),
    ];
    let samples = 40;
    for (name, partition) in &classes {
        let mut violations = 0;
        let mut worst = f64::NEG_INFINITY;
        for seed in 0..samples {
            let k = 1 + (seed as usize % 6);
            let rho = random_separable_mixture(&cutoff, k, partition, seed)?.flatten();
            let report = run_battery(&State::Mixed(rho), &config)?;
            for r in report.results() {
                let applies = match (&r.scope, partition.groups().len()) {
                    (_, 3) => true,
                    (Scope::Cut(c), _) => {
                        let sep = Bipartition::new(3, &partition.groups()[0])?;
                        c.same_cut(&sep)
                    }
                    (Scope::Full, _) => true,
                };
                if applies {
                    worst = worst.max(r.margin);
                    violations += r.fired() as usize;
                }
            }
        }
        println!("{name:<6} {samples} mixtures: {violations} violations, largest margin {worst:+.3e}");
        assert_eq!(violations, 0);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
