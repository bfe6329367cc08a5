// Four-mode states: phase variance and the `n`-mode moment family.

use modewit::fock::{CutoffSpec, State};
use modewit::states::{make_fock, make_ghz, superposition};
use modewit::witness::{nmode_moment_criterion, phase_variance_criterion, DEFAULT_TOLERANCE};
use modewit::Bipartition;
use num_complex::Complex64 as C64;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let c4 = CutoffSpec::uniform(4, 2)?;
    let ghz = State::Pure(make_ghz(&c4)?);
    let vac = State::Pure(make_fock(&c4, &[0; 4])?);
    for (name, s) in [("GHZ", &ghz), ("vacuum", &vac)] {
        let r = phase_variance_criterion(s, DEFAULT_TOLERANCE)?;
        println!("{name:<7} min Var K = {:.12}  {}", r.lhs, if r.fired() { "fully entangled" } else { "-" });
    }

    // 0.6|0011> + 0.8|1100>: the AB block is correlated with the CD block
    let pair = State::Pure(superposition(
        &c4,
        &[(vec![0, 0, 1, 1], C64::new(0.6, 0.0)), (vec![1, 1, 0, 0], C64::new(0.8, 0.0))],
    )?);
    println!("\n0.6|0011> + 0.8|1100>, degrees (1,1,1,1):");
    for cut in Bipartition::all_oriented(4) {
        let r = nmode_moment_criterion(&pair, &cut, &[1, 1, 1, 1], true, DEFAULT_TOLERANCE)?;
        println!(
            "  lowered {:<5} lhs {:.4} rhs {:.4}  {}",
            cut.label(),
            r.lhs,
            r.rhs,
            if r.fired() { format!("{} entangled", r.scope) } else { "-".into() }
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
