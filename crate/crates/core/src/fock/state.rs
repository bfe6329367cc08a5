use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use super::cutoff::CutoffSpec;
use super::operator::LadderProduct;
use super::{HERMITIAN_TOL, NORM_TOL, PSD_TOL};
use crate::error::{Error, Result};

/// Anything that can produce `tr(rho O)` for a compiled ladder product.
pub trait QuantumState {
    fn cutoff(&self) -> &CutoffSpec;

    fn expect_product(&self, op: &LadderProduct) -> C64;

    /// Probability of finding `mode` at occupation `level`.
    fn level_population(&self, mode: usize, level: usize) -> f64;

    fn n_modes(&self) -> usize {
        self.cutoff().n_modes()
    }
}

/// Unit-norm amplitude vector over the truncated basis.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    cutoff: CutoffSpec,
    amplitudes: Vec<C64>,
}

impl PureState {
    /// Normalizes `amplitudes`. Fails on a length mismatch or a zero vector.
    pub fn new(cutoff: CutoffSpec, amplitudes: Vec<C64>) -> Result<Self> {
        if amplitudes.len() != cutoff.total_dim() {
            return Err(Error::Dimension(format!(
                "{} amplitudes for total dimension {}",
                amplitudes.len(),
                cutoff.total_dim()
            )));
        }
        if amplitudes.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::arg("amplitudes must be finite"));
        }
        let norm = norm2(&amplitudes).sqrt();
        if norm < 1e-150 {
            return Err(Error::Degenerate("zero vector cannot be normalized".into()));
        }
        let amplitudes = amplitudes.into_iter().map(|a| a / norm).collect();
        Ok(Self { cutoff, amplitudes })
    }

    pub fn basis(cutoff: CutoffSpec, occupations: &[usize]) -> Result<Self> {
        let rank = cutoff.rank(occupations)?;
        let mut amplitudes = vec![C64::new(0.0, 0.0); cutoff.total_dim()];
        amplitudes[rank] = C64::new(1.0, 0.0);
        Ok(Self { cutoff, amplitudes })
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, occupations: &[usize]) -> Result<C64> {
        Ok(self.amplitudes[self.cutoff.rank(occupations)?])
    }

    pub fn norm(&self) -> f64 {
        norm2(&self.amplitudes).sqrt()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &PureState) -> Result<C64> {
        self.cutoff.check_same(&other.cutoff)?;
        Ok(inner(&self.amplitudes, &other.amplitudes))
    }

    pub fn to_density(&self) -> DensityMatrix {
        let n = self.amplitudes.len();
        let matrix = DMatrix::from_fn(n, n, |i, j| self.amplitudes[i] * self.amplitudes[j].conj());
        DensityMatrix {
            cutoff: self.cutoff.clone(),
            matrix,
        }
    }

    /// Largest population of the top level `d_i - 1` over `modes`.
    pub fn boundary_population(&self, modes: &[usize]) -> f64 {
        boundary_population(self, modes)
    }
}

impl QuantumState for PureState {
    fn cutoff(&self) -> &CutoffSpec {
        &self.cutoff
    }

    fn expect_product(&self, op: &LadderProduct) -> C64 {
        let mut acc = C64::new(0.0, 0.0);
        let a = &self.amplitudes;
        op.for_each_nonzero(|src, dst, c| {
            acc += a[dst].conj() * a[src] * c;
        });
        acc
    }

    fn level_population(&self, mode: usize, level: usize) -> f64 {
        let s = self.cutoff.strides()[mode];
        let d = self.cutoff.dim(mode);
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(r, _)| (r / s) % d == level)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }
}

/// Hermitian, unit-trace matrix over the truncated basis.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    cutoff: CutoffSpec,
    matrix: DMatrix<C64>,
}

impl DensityMatrix {
    /// Validates Hermiticity and unit trace (both to 1e-10). Positivity is
    /// checked separately by [`check_positive`](Self::check_positive).
    pub fn new(cutoff: CutoffSpec, matrix: DMatrix<C64>) -> Result<Self> {
        let n = cutoff.total_dim();
        if matrix.nrows() != n || matrix.ncols() != n {
            return Err(Error::Dimension(format!(
                "{}x{} matrix for total dimension {n}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((matrix[(i, j)] - matrix[(j, i)].conj()).norm());
            }
        }
        if !(worst <= HERMITIAN_TOL) {
            return Err(Error::arg(format!("matrix is not Hermitian (max deviation {worst:e})")));
        }
        let tr = matrix.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > HERMITIAN_TOL {
            return Err(Error::arg(format!("trace is {tr}, expected 1")));
        }
        Ok(Self { cutoff, matrix })
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self.matrix.clone().symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    pub fn check_positive(&self) -> Result<()> {
        let min = self.eigenvalues().first().copied().unwrap_or(0.0);
        if min < -PSD_TOL {
            Err(Error::arg(format!("matrix has negative eigenvalue {min:e}")))
        } else {
            Ok(())
        }
    }

    /// `tr(rho^2)`.
    pub fn purity(&self) -> f64 {
        self.matrix.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn boundary_population(&self, modes: &[usize]) -> f64 {
        boundary_population(self, modes)
    }
}

impl QuantumState for DensityMatrix {
    fn cutoff(&self) -> &CutoffSpec {
        &self.cutoff
    }

    fn expect_product(&self, op: &LadderProduct) -> C64 {
        // O|k> = c_k |f(k)>  =>  tr(rho O) = sum_k c_k rho[k, f(k)]
        let mut acc = C64::new(0.0, 0.0);
        op.for_each_nonzero(|src, dst, c| {
            acc += self.matrix[(src, dst)] * c;
        });
        acc
    }

    fn level_population(&self, mode: usize, level: usize) -> f64 {
        let s = self.cutoff.strides()[mode];
        let d = self.cutoff.dim(mode);
        (0..self.cutoff.total_dim())
            .filter(|r| (r / s) % d == level)
            .map(|r| self.matrix[(r, r)].re)
            .sum()
    }
}

/// Either representation; what the criteria accept.
#[derive(Clone, Debug, PartialEq)]
pub enum State {
    Pure(PureState),
    Mixed(DensityMatrix),
}

impl State {
    pub fn is_pure(&self) -> bool {
        matches!(self, State::Pure(_))
    }

    pub fn as_pure(&self) -> Option<&PureState> {
        match self {
            State::Pure(p) => Some(p),
            State::Mixed(_) => None,
        }
    }

    pub fn to_density(&self) -> DensityMatrix {
        match self {
            State::Pure(p) => p.to_density(),
            State::Mixed(m) => m.clone(),
        }
    }

    pub fn boundary_population(&self, modes: &[usize]) -> f64 {
        boundary_population(self, modes)
    }
}

impl QuantumState for State {
    fn cutoff(&self) -> &CutoffSpec {
        match self {
            State::Pure(p) => p.cutoff(),
            State::Mixed(m) => m.cutoff(),
        }
    }

    fn expect_product(&self, op: &LadderProduct) -> C64 {
        match self {
            State::Pure(p) => p.expect_product(op),
            State::Mixed(m) => m.expect_product(op),
        }
    }

    fn level_population(&self, mode: usize, level: usize) -> f64 {
        match self {
            State::Pure(p) => p.level_population(mode, level),
            State::Mixed(m) => m.level_population(mode, level),
        }
    }
}

impl From<PureState> for State {
    fn from(p: PureState) -> Self {
        State::Pure(p)
    }
}

impl From<DensityMatrix> for State {
    fn from(m: DensityMatrix) -> Self {
        State::Mixed(m)
    }
}

/// Convex combination `sum_k p_k rho_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct Ensemble {
    components: Vec<(f64, State)>,
}

impl Ensemble {
    pub fn new(components: Vec<(f64, State)>) -> Result<Self> {
        let first = components
            .first()
            .ok_or_else(|| Error::arg("ensemble needs at least one component"))?;
        let cutoff = first.1.cutoff().clone();
        let mut total = 0.0;
        for (k, (p, s)) in components.iter().enumerate() {
            if !(*p > 0.0 && *p <= 1.0) {
                return Err(Error::arg(format!("weight {p} of component {k} is outside (0, 1]")));
            }
            cutoff.check_same(s.cutoff())?;
            total += p;
        }
        if (total - 1.0).abs() > NORM_TOL {
            return Err(Error::arg(format!("weights sum to {total}, expected 1")));
        }
        Ok(Self { components })
    }

    pub fn components(&self) -> &[(f64, State)] {
        &self.components
    }

    pub fn cutoff(&self) -> &CutoffSpec {
        self.components[0].1.cutoff()
    }

    pub fn flatten(&self) -> DensityMatrix {
        let n = self.cutoff().total_dim();
        let mut matrix = DMatrix::<C64>::zeros(n, n);
        for (p, s) in &self.components {
            match s {
                State::Pure(psi) => {
                    let a = psi.amplitudes();
                    for j in 0..n {
                        let cj = a[j].conj() * *p;
                        if cj == C64::new(0.0, 0.0) {
                            continue;
                        }
                        for i in 0..n {
                            matrix[(i, j)] += a[i] * cj;
                        }
                    }
                }
                State::Mixed(rho) => matrix += rho.matrix() * C64::new(*p, 0.0),
            }
        }
        DensityMatrix {
            cutoff: self.cutoff().clone(),
            matrix,
        }
    }
}

fn boundary_population<S: QuantumState + ?Sized>(s: &S, modes: &[usize]) -> f64 {
    modes
        .iter()
        .map(|&m| s.level_population(m, s.cutoff().dim(m) - 1))
        .fold(0.0, f64::max)
}

pub(crate) fn norm2(v: &[C64]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum()
}

/// `<u|v>`.
pub(crate) fn inner(u: &[C64], v: &[C64]) -> C64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cut(d: &[usize]) -> CutoffSpec {
        CutoffSpec::new(d.to_vec()).unwrap()
    }

    #[test]
    fn pure_state_normalizes() {
        let s = PureState::new(cut(&[2]), vec![C64::new(3.0, 0.0), C64::new(0.0, 4.0)]).unwrap();
        assert!((s.norm() - 1.0).abs() < 1e-12);
        assert!((s.amplitudes()[0].re - 0.6).abs() < 1e-15);
    }

    #[test]
    fn pure_state_rejects_zero_and_bad_length() {
        assert!(matches!(
            PureState::new(cut(&[2]), vec![C64::new(0.0, 0.0); 2]),
            Err(Error::Degenerate(_))
        ));
        assert!(PureState::new(cut(&[2]), vec![C64::new(1.0, 0.0); 3]).is_err());
    }

    #[test]
    fn density_matrix_validation() {
        let c = cut(&[2]);
        let good = DMatrix::from_row_slice(2, 2, &[
            C64::new(0.5, 0.0), C64::new(0.0, 0.25),
            C64::new(0.0, -0.25), C64::new(0.5, 0.0),
        ]);
        let rho = DensityMatrix::new(c.clone(), good).unwrap();
        rho.check_positive().unwrap();
        let ev = rho.eigenvalues();
        assert!((ev[0] - 0.25).abs() < 1e-12 && (ev[1] - 0.75).abs() < 1e-12);

        let non_herm = DMatrix::from_row_slice(2, 2, &[
            C64::new(0.5, 0.0), C64::new(0.1, 0.0),
            C64::new(0.2, 0.0), C64::new(0.5, 0.0),
        ]);
        assert!(DensityMatrix::new(c.clone(), non_herm).is_err());
        let bad_trace = DMatrix::from_diagonal_element(2, 2, C64::new(0.6, 0.0));
        assert!(DensityMatrix::new(c.clone(), bad_trace).is_err());
        let negative = DMatrix::from_row_slice(2, 2, &[
            C64::new(1.2, 0.0), C64::new(0.0, 0.0),
            C64::new(0.0, 0.0), C64::new(-0.2, 0.0),
        ]);
        assert!(DensityMatrix::new(c, negative).unwrap().check_positive().is_err());
    }

    #[test]
    fn ensemble_weights_and_flatten() {
        let c = cut(&[2]);
        let zero = State::Pure(PureState::basis(c.clone(), &[0]).unwrap());
        let one = State::Pure(PureState::basis(c.clone(), &[1]).unwrap());
        assert!(Ensemble::new(vec![(0.5, zero.clone()), (0.6, one.clone())]).is_err());
        assert!(Ensemble::new(vec![(0.0, zero.clone()), (1.0, one.clone())]).is_err());
        let e = Ensemble::new(vec![(0.25, zero), (0.75, one.clone())]).unwrap();
        let rho = e.flatten();
        assert!((rho.matrix()[(0, 0)].re - 0.25).abs() < 1e-15);
        assert!((rho.matrix()[(1, 1)].re - 0.75).abs() < 1e-15);
        // nested mixed component
        let e2 = Ensemble::new(vec![(0.5, State::Mixed(rho.clone())), (0.5, one)]).unwrap();
        let rho2 = e2.flatten();
        assert!((rho2.matrix()[(1, 1)].re - 0.875).abs() < 1e-15);
        DensityMatrix::new(rho2.cutoff().clone(), rho2.matrix().clone()).unwrap();
    }

    #[test]
    fn level_populations() {
        let c = cut(&[2, 3]);
        let s = PureState::new(
            c,
            vec![
                C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(1.0, 0.0),
                C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0),
            ],
        )
        .unwrap();
        assert!((s.level_population(1, 2) - 0.5).abs() < 1e-15);
        assert!((s.level_population(0, 0) - 1.0).abs() < 1e-15);
        assert!((s.boundary_population(&[0, 1]) - 0.5).abs() < 1e-15);
        let rho = s.to_density();
        assert!((rho.level_population(1, 2) - 0.5).abs() < 1e-15);
    }
}
