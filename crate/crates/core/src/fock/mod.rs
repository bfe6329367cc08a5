//! Truncated multi-mode Fock space: basis indexing, ladder monomials,
//! expectation values, variances and partial traces.
//!
//! Raising past the cutoff drops the component, which makes the truncated
//! `a^dag` the exact adjoint of the truncated `a`. Every [`BalancedForm`] is
//! therefore Hermitian on the truncated space. Infinite-dimensional operator
//! identities such as `[a, a^dag] = 1` only hold on states that leave room
//! below the cutoff for the raising degree involved.

mod cutoff;
mod operator;
mod state;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

pub use cutoff::{Basis, CutoffSpec, FockIndex};
pub use operator::{BalancedForm, LadderProduct, ModeMonomial};
pub use state::{DensityMatrix, Ensemble, PureState, QuantumState, State};

pub(crate) use state::{inner, norm2};

use crate::error::{Error, Result};

/// Normalization tolerance at construction time.
pub const NORM_TOL: f64 = 1e-12;
/// Hermiticity, trace and operator-identity tolerance.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Smallest eigenvalue accepted by [`DensityMatrix::check_positive`].
pub const PSD_TOL: f64 = 1e-9;

/// `M |s>` without renormalization.
pub fn apply_monomial(m: &ModeMonomial, s: &PureState) -> Result<Vec<C64>> {
    let op = LadderProduct::compile(s.cutoff(), m)?;
    Ok(op.apply(s.amplitudes()))
}

/// `<M>`.
pub fn expectation<S: QuantumState + ?Sized>(m: &ModeMonomial, s: &S) -> Result<C64> {
    let op = LadderProduct::compile(s.cutoff(), m)?;
    Ok(s.expect_product(&op))
}

/// `<ops[0] ops[1] ... >` for a product that need not be normal ordered.
pub fn expectation_of_product<S: QuantumState + ?Sized>(ops: &[&ModeMonomial], s: &S) -> Result<C64> {
    let op = LadderProduct::product(s.cutoff(), ops)?;
    Ok(s.expect_product(&op))
}

/// `<F>` for the Hermitian operator denoted by `f`; real by construction.
pub fn form_expectation<S: QuantumState + ?Sized>(f: &BalancedForm, s: &S) -> Result<f64> {
    let m = expectation(&f.base, s)?;
    Ok(2.0 * (f.base_weight() * m).re)
}

/// `F |s>`.
pub fn apply_form(f: &BalancedForm, s: &PureState) -> Result<Vec<C64>> {
    let op = LadderProduct::compile(s.cutoff(), &f.base)?;
    let adj = LadderProduct::compile(s.cutoff(), &f.base.adjoint())?;
    let mut out = vec![C64::new(0.0, 0.0); s.amplitudes().len()];
    op.apply_into(s.amplitudes(), f.base_weight(), &mut out);
    adj.apply_into(s.amplitudes(), f.adjoint_weight(), &mut out);
    Ok(out)
}

/// `<F^2> - <F>^2`.
///
/// Pure states use `<F^2> = ||F s||^2`; density matrices expand `F^2` into
/// its four ladder products.
pub fn variance(f: &BalancedForm, s: &State) -> Result<f64> {
    match s {
        State::Pure(p) => variance_pure(f, p),
        State::Mixed(rho) => variance_mixed(f, rho),
    }
}

pub fn variance_pure(f: &BalancedForm, s: &PureState) -> Result<f64> {
    let fs = apply_form(f, s)?;
    let mean = inner(s.amplitudes(), &fs).re;
    Ok(norm2(&fs) - mean * mean)
}

pub fn variance_mixed(f: &BalancedForm, rho: &DensityMatrix) -> Result<f64> {
    let m = &f.base;
    let md = m.adjoint();
    let (wa, wb) = (f.adjoint_weight(), f.base_weight());
    let sq = wa * wa * expectation_of_product(&[&md, &md], rho)?
        + wb * wb * expectation_of_product(&[m, m], rho)?
        + expectation_of_product(&[&md, m], rho)?
        + expectation_of_product(&[m, &md], rho)?;
    let mean = form_expectation(f, rho)?;
    Ok(sq.re - mean * mean)
}

/// Reduced density matrix on `keep` (sorted ascending in the output).
pub fn partial_trace<S: QuantumState + ?Sized>(s: &S, keep: &[usize]) -> Result<DensityMatrix>
where
    S: AsStateRef,
{
    let cutoff = s.cutoff();
    let keep = normalize_subset(cutoff.n_modes(), keep)?;
    let rest: Vec<usize> = (0..cutoff.n_modes()).filter(|m| !keep.contains(m)).collect();
    let kc = cutoff.select(&keep)?;
    let rc = cutoff.select(&rest)?;
    let split = |rank: usize| -> (usize, usize) {
        let occ = cutoff.unrank(rank);
        let k: Vec<usize> = keep.iter().map(|&m| occ[m]).collect();
        let r: Vec<usize> = rest.iter().map(|&m| occ[m]).collect();
        (kc.rank(&k).unwrap(), rc.rank(&r).unwrap())
    };
    let (kd, rd) = (kc.total_dim(), rc.total_dim());
    let mut out = DMatrix::<C64>::zeros(kd, kd);
    match s.as_state_ref() {
        StateRef::Pure(p) => {
            // psi as a (kept x rest) matrix; rho_keep = M M^dag
            let mut m = DMatrix::<C64>::zeros(kd, rd);
            for (r, a) in p.amplitudes().iter().enumerate() {
                let (i, j) = split(r);
                m[(i, j)] = *a;
            }
            out = &m * m.adjoint();
        }
        StateRef::Mixed(rho) => {
            let n = cutoff.total_dim();
            let parts: Vec<(usize, usize)> = (0..n).map(split).collect();
            for r in 0..n {
                for c in 0..n {
                    let ((ki, ri), (kj, rj)) = (parts[r], parts[c]);
                    if ri == rj {
                        out[(ki, kj)] += rho.matrix()[(r, c)];
                    }
                }
            }
        }
    }
    DensityMatrix::new(kc, out)
}

/// Borrowed view used by operations that need the concrete representation.
pub enum StateRef<'a> {
    Pure(&'a PureState),
    Mixed(&'a DensityMatrix),
}

pub trait AsStateRef {
    fn as_state_ref(&self) -> StateRef<'_>;
}

impl AsStateRef for PureState {
    fn as_state_ref(&self) -> StateRef<'_> {
        StateRef::Pure(self)
    }
}

impl AsStateRef for DensityMatrix {
    fn as_state_ref(&self) -> StateRef<'_> {
        StateRef::Mixed(self)
    }
}

impl AsStateRef for State {
    fn as_state_ref(&self) -> StateRef<'_> {
        match self {
            State::Pure(p) => StateRef::Pure(p),
            State::Mixed(m) => StateRef::Mixed(m),
        }
    }
}

/// Sorted, deduplicated, nonempty proper subset of `0..n`.
pub(crate) fn normalize_subset(n: usize, modes: &[usize]) -> Result<Vec<usize>> {
    let mut v = modes.to_vec();
    v.sort_unstable();
    v.dedup();
    if v.is_empty() || v.len() >= n {
        return Err(Error::arg(format!(
            "mode subset {modes:?} must be a nonempty proper subset of 0..{n}"
        )));
    }
    if let Some(&bad) = v.iter().find(|&&m| m >= n) {
        return Err(Error::arg(format!("mode {bad} does not exist")));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn ghz(d: usize) -> PureState {
        let c = CutoffSpec::uniform(3, d).unwrap();
        let mut a = vec![C64::new(0.0, 0.0); c.total_dim()];
        a[0] = C64::new(1.0, 0.0);
        a[c.rank(&[1, 1, 1]).unwrap()] = C64::new(1.0, 0.0);
        PureState::new(c, a).unwrap()
    }

    fn psi(d: usize) -> PureState {
        let c = CutoffSpec::uniform(3, d).unwrap();
        let mut a = vec![C64::new(0.0, 0.0); c.total_dim()];
        for k in [[0, 0, 1], [0, 1, 0], [1, 0, 1], [1, 1, 0]] {
            a[c.rank(&k).unwrap()] = C64::new(0.5, 0.0);
        }
        PureState::new(c, a).unwrap()
    }

    fn k_form(n: usize, phase: f64) -> BalancedForm {
        BalancedForm::new(ModeMonomial::lowering(&vec![1; n]), phase)
    }

    #[test]
    fn apply_examples() {
        let one = PureState::basis(CutoffSpec::uniform(1, 3).unwrap(), &[1]).unwrap();
        let n = apply_monomial(&ModeMonomial::number_power(&[1]), &one).unwrap();
        assert_eq!(n, one.amplitudes());

        let vac = PureState::basis(CutoffSpec::uniform(1, 3).unwrap(), &[0]).unwrap();
        let out = apply_monomial(&ModeMonomial::lowering(&[1]), &vac).unwrap();
        assert!(out.iter().all(|z| z.norm() == 0.0));

        let raise = ModeMonomial::new(vec![(1, 0)]);
        let one2 = PureState::basis(CutoffSpec::uniform(1, 2).unwrap(), &[1]).unwrap();
        assert!(apply_monomial(&raise, &one2).unwrap().iter().all(|z| z.norm() == 0.0));
        let out = apply_monomial(&raise, &one).unwrap();
        assert!((out[2].re - 2f64.sqrt()).abs() < 1e-15);

        let two_mode = ModeMonomial::identity(2);
        assert!(matches!(apply_monomial(&two_mode, &one), Err(Error::ModeCount { .. })));
    }

    #[test]
    fn expectation_examples() {
        let s = PureState::basis(CutoffSpec::uniform(2, 2).unwrap(), &[1, 0]).unwrap();
        let na = ModeMonomial::new(vec![(1, 1), (0, 0)]);
        assert!((expectation(&na, &s).unwrap() - C64::new(1.0, 0.0)).norm() < 1e-15);
        // <a b c^dag> on the four-term state
        let abcd = ModeMonomial::new(vec![(0, 1), (0, 1), (1, 0)]);
        let v = expectation(&abcd, &psi(2)).unwrap();
        assert!((v - C64::new(0.25, 0.0)).norm() < 1e-15);
        let v = expectation(&abcd, &psi(2).to_density()).unwrap();
        assert!((v - C64::new(0.25, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn phase_variance_on_ghz_depends_on_cutoff() {
        let v2 = variance(&k_form(3, 0.0), &State::Pure(ghz(2))).unwrap();
        assert!(v2.abs() < 1e-14);
        for d in [3, 4, 5] {
            let v = variance(&k_form(3, 0.0), &State::Pure(ghz(d))).unwrap();
            assert!((v - 4.0).abs() < 1e-12, "d = {d}: {v}");
            let vm = variance(&k_form(3, 0.0), &State::Mixed(ghz(d).to_density())).unwrap();
            assert!((vm - 4.0).abs() < 1e-12);
        }
        let vac = State::Pure(PureState::basis(CutoffSpec::uniform(3, 4).unwrap(), &[0, 0, 0]).unwrap());
        assert!((variance(&k_form(3, 0.7), &vac).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn variance_pair_on_psi() {
        let x = ModeMonomial::new(vec![(0, 1), (0, 1), (1, 0)]);
        let s = State::Pure(psi(3));
        let sum = variance(&BalancedForm::new(x.clone(), 0.0), &s).unwrap()
            + variance(&BalancedForm::new(x, -FRAC_PI_2), &s).unwrap();
        assert!((sum - 1.75).abs() < 1e-12);
    }

    #[test]
    fn partial_traces() {
        let rho = partial_trace(&ghz(2), &[0]).unwrap();
        assert!((rho.matrix()[(0, 0)].re - 0.5).abs() < 1e-15);
        assert!((rho.matrix()[(1, 1)].re - 0.5).abs() < 1e-15);
        assert!(rho.matrix()[(0, 1)].norm() < 1e-15);

        let rho = partial_trace(&psi(2), &[0, 1]).unwrap();
        let ev = rho.eigenvalues();
        assert!(ev[0].abs() < 1e-12 && ev[1].abs() < 1e-12);
        assert!((ev[2] - 0.5).abs() < 1e-12 && (ev[3] - 0.5).abs() < 1e-12);

        // mixed path agrees with pure path
        let a = partial_trace(&psi(3), &[2, 0]).unwrap();
        let b = partial_trace(&psi(3).to_density(), &[0, 2]).unwrap();
        assert!((a.matrix() - b.matrix()).norm() < 1e-14);

        assert!(partial_trace(&ghz(2), &[]).is_err());
        assert!(partial_trace(&ghz(2), &[0, 1, 2]).is_err());
        assert!(partial_trace(&ghz(2), &[5]).is_err());
    }
}
