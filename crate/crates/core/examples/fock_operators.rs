// Ladder monomials on a truncated three-mode space.
//
// Applies `a b c^dag` to the superposition `(|000> + |111> + |110> + |001>)/2`,
// takes expectations and reduces to a single mode.

use modewit::fock::{apply_monomial, expectation, partial_trace, CutoffSpec, ModeMonomial, QuantumState};
use modewit::states::make_psi;
use num_complex::Complex64 as C64;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let cutoff = CutoffSpec::uniform(3, 3)?;
    let psi = make_psi(&cutoff)?;

    // (raise, lower) per mode
    let abc_dag = ModeMonomial::new(vec![(0, 1), (0, 1), (1, 0)]);
    let out = apply_monomial(&abc_dag, &psi)?;
    println!("a b c^dag |psi>:");
    for (rank, amp) in out.iter().enumerate().filter(|(_, a)| a.norm() > 0.0) {
        println!("  {:?}  {amp:.4}", cutoff.unrank(rank));
    }

    let mean = expectation(&abc_dag, &psi)?;
    println!("<a b c^dag>         = {mean:.4}");
    assert!((mean - C64::new(0.25, 0.0)).norm() < 1e-12);

    let n_total = ModeMonomial::number_power(&[1, 1, 1]);
    println!("<N_a N_b N_c>       = {:.4}", expectation(&n_total, &psi)?.re);
    let n_a = ModeMonomial::number_power(&[1, 0, 0]);
    println!("<N_a>               = {:.4}", expectation(&n_a, &psi)?.re);

    let rho_a = partial_trace(&psi, &[0])?;
    println!("reduced state of A  = diag {:?}", (0..rho_a.cutoff().total_dim())
        .map(|i| format!("{:.3}", rho_a.matrix()[(i, i)].re))
        .collect::<Vec<_>>());
    println!("purity of A         = {:.4}", rho_a.purity());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
