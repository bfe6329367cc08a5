mod fock_operators {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/fock_operators.rs"));
}

mod psi_pair_variance {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/psi_pair_variance.rs"));
}

mod ghz_phase_variance {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/ghz_phase_variance.rs"));
}

mod cat_state {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/cat_state.rs"));
}

mod separable_sweep {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/separable_sweep.rs"));
}

mod nmode_ghz {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/nmode_ghz.rs"));
}

mod schmidt_oracle {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/schmidt_oracle.rs"));
}

mod state_documents {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/state_documents.rs"));
}

#[test]
fn fock_operators_example_runs() {
    fock_operators::run_example().expect("fock_operators example should run");
}

#[test]
fn psi_pair_variance_example_runs() {
    psi_pair_variance::run_example().expect("psi_pair_variance example should run");
}

#[test]
fn ghz_phase_variance_example_runs() {
    ghz_phase_variance::run_example().expect("ghz_phase_variance example should run");
}

#[test]
fn cat_state_example_runs() {
    cat_state::run_example().expect("cat_state example should run");
}

#[test]
fn separable_sweep_example_runs() {
    separable_sweep::run_example().expect("separable_sweep example should run");
}

#[test]
fn nmode_ghz_example_runs() {
    nmode_ghz::run_example().expect("nmode_ghz example should run");
}

#[test]
fn schmidt_oracle_example_runs() {
    schmidt_oracle::run_example().expect("schmidt_oracle example should run");
}

#[test]
fn state_documents_example_runs() {
    state_documents::run_example().expect("state_documents example should run");
}
