// Variance-pair criterion on `(|000> + |111> + |110> + |001>)/2`.
//
// The pair `abc^dag + h.c.`, `i(abc^dag - h.c.)` has total variance 1.75
// against a separable bound of 2, so the state is entangled across AB|C.
// The same numbers are recomputed from dense matrices.

use modewit::fock::{CutoffSpec, ModeMonomial, State};
use modewit::oracle::{dense_monomial, DEFAULT_CAPACITY};
use modewit::states::make_psi;
use modewit::witness::{pair_variance_criterion, DEFAULT_TOLERANCE};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let cutoff = CutoffSpec::uniform(3, 3)?;
    let psi = State::Pure(make_psi(&cutoff)?);

    for (mode, name) in ["A", "B", "C"].iter().enumerate() {
        let r = pair_variance_criterion(&psi, mode, DEFAULT_TOLERANCE)?;
        println!(
            "distinguished {name}: cut {:<5} lhs {:.6} rhs {:.6} margin {:+.6} {}",
            r.scope.to_string(),
            r.lhs,
            r.rhs,
            r.margin,
            if r.fired() { "fired" } else { "-" }
        );
    }

    // dense cross-check of the AB|C numbers
    let m = ModeMonomial::new(vec![(0, 1), (0, 1), (1, 0)]);
    let dm = dense_monomial(&cutoff, &m, DEFAULT_CAPACITY)?;
    let dmd = dm.adjoint();
    let l1 = dm.matrix.clone() + dmd.matrix.clone();
    let l2 = (dm.matrix.clone() - dmd.matrix.clone()) * num_complex::Complex64::i();
    let var = |op: &nalgebra::DMatrix<num_complex::Complex64>| {
        let p = psi.as_pure().unwrap();
        let v = nalgebra::DVector::from_column_slice(p.amplitudes());
        let mean = v.dotc(&(op * &v)).re;
        let sq = v.dotc(&(op * op * &v)).re;
        sq - mean * mean
    };
    let lhs = var(&l1) + var(&l2);
    println!("dense oracle: Var(L1) + Var(L2) = {lhs:.6}");
    let r = pair_variance_criterion(&psi, 2, DEFAULT_TOLERANCE)?;
    assert!((lhs - r.lhs).abs() < 1e-12);
    assert!(r.fired());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
