//! Reference machinery that shares no code with the sparse ladder path:
//! explicit operator matrices assembled from single-mode ladder matrices,
//! Schmidt ranks from a singular value decomposition, and a phase grid
//! search for the `K(phi)` variance.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::bipartition::Bipartition;
use crate::error::{Error, Result};
use crate::fock::{CutoffSpec, DensityMatrix, ModeMonomial, PureState, QuantumState, State};

pub const DEFAULT_CAPACITY: usize = 4096;
pub const DEFAULT_SCHMIDT_TOL: f64 = 1e-8;

/// Dense matrix of an operator on the truncated space.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseOperator {
    pub cutoff: CutoffSpec,
    pub matrix: DMatrix<C64>,
}

impl DenseOperator {
    pub fn adjoint(&self) -> Self {
        Self {
            cutoff: self.cutoff.clone(),
            matrix: self.matrix.adjoint(),
        }
    }

    /// `self * rhs`.
    pub fn compose(&self, rhs: &DenseOperator) -> Self {
        Self {
            cutoff: self.cutoff.clone(),
            matrix: &self.matrix * &rhs.matrix,
        }
    }

    pub fn apply(&self, s: &PureState) -> Vec<C64> {
        let v = nalgebra::DVector::from_column_slice(s.amplitudes());
        (&self.matrix * v).iter().copied().collect()
    }

    /// `<psi|M|psi>` or `tr(rho M)`.
    pub fn expectation(&self, s: &State) -> C64 {
        match s {
            State::Pure(p) => {
                let v = nalgebra::DVector::from_column_slice(p.amplitudes());
                (v.adjoint() * &self.matrix * &v)[(0, 0)]
            }
            State::Mixed(rho) => (rho.matrix() * &self.matrix).trace(),
        }
    }
}

/// `d x d` annihilation matrix: `<n-1| a |n> = sqrt(n)`.
pub fn annihilator(d: usize) -> DMatrix<C64> {
    let mut a = DMatrix::<C64>::zeros(d, d);
    for n in 1..d {
        a[(n - 1, n)] = C64::new((n as f64).sqrt(), 0.0);
    }
    a
}

/// `d x d` matrix of `(a^dag)^u a^v`, entry by entry:
/// `<n - v + u| (a^dag)^u a^v |n> = sqrt(n! / (n - v)!) sqrt((n - v + u)! / (n - v)!)`.
fn local_monomial(d: usize, u: u32, v: u32) -> DMatrix<C64> {
    let (u, v) = (u as usize, v as usize);
    let mut m = DMatrix::<C64>::zeros(d, d);
    for n in v..d {
        let mid = n - v;
        let out = mid + u;
        if out >= d {
            continue;
        }
        let down: f64 = (mid + 1..=n).map(|k| k as f64).product();
        let up: f64 = (mid + 1..=out).map(|k| k as f64).product();
        m[(out, n)] = C64::new((down * up).sqrt(), 0.0);
    }
    m
}

/// Explicit matrix of `prod_i (a_i^dag)^u_i a_i^v_i`, built as a Kronecker
/// product of per-mode matrix powers.
pub fn dense_monomial(cutoff: &CutoffSpec, m: &ModeMonomial, cap: usize) -> Result<DenseOperator> {
    if cutoff.total_dim() > cap {
        return Err(Error::Capacity {
            dim: cutoff.total_dim(),
            cap,
        });
    }
    if m.n_modes() != cutoff.n_modes() {
        return Err(Error::ModeCount {
            expected: cutoff.n_modes(),
            found: m.n_modes(),
        });
    }
    let mut acc = DMatrix::<C64>::identity(1, 1);
    for (&d, &(u, v)) in cutoff.dims().iter().zip(m.powers()) {
        acc = acc.kronecker(&local_monomial(d, u, v));
    }
    Ok(DenseOperator {
        cutoff: cutoff.clone(),
        matrix: acc,
    })
}

/// Singular values of the amplitude matrix reshaped along a cut.
#[derive(Clone, Debug, PartialEq)]
pub struct SchmidtDecomposition {
    pub cut: Bipartition,
    pub rank: usize,
    /// Descending.
    pub singular_values: Vec<f64>,
}

impl SchmidtDecomposition {
    pub fn is_entangled(&self) -> bool {
        self.rank >= 2
    }
}

/// Rank counts singular values above `tol` times the largest one.
pub fn schmidt_rank(s: &PureState, cut: &Bipartition, tol: f64, cap: usize) -> Result<SchmidtDecomposition> {
    let c = s.cutoff();
    if c.total_dim() > cap {
        return Err(Error::Capacity {
            dim: c.total_dim(),
            cap,
        });
    }
    if cut.n_modes() != c.n_modes() {
        return Err(Error::ModeCount {
            expected: c.n_modes(),
            found: cut.n_modes(),
        });
    }
    let left = cut.group().to_vec();
    let right = cut.complement();
    let lc = c.select(&left)?;
    let rc = c.select(&right)?;
    let mut m = DMatrix::<C64>::zeros(lc.total_dim(), rc.total_dim());
    for (occ, a) in c.basis().zip(s.amplitudes()) {
        let i: usize = left.iter().zip(lc.strides()).map(|(&k, &st)| occ[k] * st).sum();
        let j: usize = right.iter().zip(rc.strides()).map(|(&k, &st)| occ[k] * st).sum();
        m[(i, j)] = *a;
    }
    let mut sv: Vec<f64> = m.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    let top = sv.first().copied().unwrap_or(0.0);
    let rank = sv.iter().filter(|&&x| x > tol * top).count();
    Ok(SchmidtDecomposition {
        cut: cut.clone(),
        rank,
        singular_values: sv,
    })
}

/// Dense `a_1 a_2 ... a_n`.
fn dense_total_lowering(cutoff: &CutoffSpec, cap: usize) -> Result<DenseOperator> {
    dense_monomial(cutoff, &ModeMonomial::lowering(&vec![1; cutoff.n_modes()]), cap)
}

/// Minimum of `Var K(phi)` with `K(phi) = e^{i phi} P^dag + e^{-i phi} P`,
/// `P = a_1 ... a_n`, over `n_phi` equally spaced phases in `[0, 2 pi)`.
/// Returns `(phi_best, min)`.
pub fn grid_min_variance(s: &State, n_phi: usize, cap: usize) -> Result<(f64, f64)> {
    if n_phi < 4 {
        return Err(Error::arg("phase grid needs at least 4 points"));
    }
    let curve = variance_curve(s, cap)?;
    let mut best = (0.0, f64::INFINITY);
    for k in 0..n_phi {
        let phi = 2.0 * std::f64::consts::PI * k as f64 / n_phi as f64;
        let v = curve(phi);
        if v < best.1 {
            best = (phi, v);
        }
    }
    Ok(best)
}

/// Grid search followed by golden-section refinement on the bracket around
/// the best grid point. `Var K` is a sinusoid in `2 phi`, so that bracket
/// holds a single minimum whenever `n_phi >= 4`.
pub fn refined_min_variance(s: &State, n_phi: usize, cap: usize) -> Result<(f64, f64)> {
    let (phi0, _) = grid_min_variance(s, n_phi, cap)?;
    let curve = variance_curve(s, cap)?;
    let step = 2.0 * std::f64::consts::PI / n_phi as f64;
    let (mut lo, mut hi) = (phi0 - step, phi0 + step);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (curve(x1), curve(x2));
    while hi - lo > 1e-10 {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = curve(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = curve(x2);
        }
    }
    let phi = 0.5 * (lo + hi);
    Ok((phi.rem_euclid(2.0 * std::f64::consts::PI), curve(phi)))
}

/// `phi -> Var K(phi)` evaluated with dense matrices.
pub fn variance_curve(s: &State, cap: usize) -> Result<Box<dyn Fn(f64) -> f64>> {
    let cutoff = s.cutoff();
    if cutoff.n_modes() < 2 {
        return Err(Error::Unsupported("phase variance needs at least two modes".into()));
    }
    let p = dense_total_lowering(cutoff, cap)?;
    match s {
        State::Pure(psi) => {
            let v = nalgebra::DVector::from_column_slice(psi.amplitudes());
            let lo = &p.matrix * &v;
            let hi = p.matrix.adjoint() * &v;
            Ok(Box::new(move |phi| {
                let k = &hi * C64::from_polar(1.0, phi) + &lo * C64::from_polar(1.0, -phi);
                let mean = v.dotc(&k).re;
                k.norm_squared() - mean * mean
            }))
        }
        State::Mixed(rho) => {
            let pd = p.adjoint();
            let tr = |x: &DenseOperator, y: &DenseOperator| (rho.matrix() * &x.matrix * &y.matrix).trace();
            let (dd, ll, dl, ld) = (tr(&pd, &pd), tr(&p, &p), tr(&pd, &p), tr(&p, &pd));
            let m_lo = (rho.matrix() * &p.matrix).trace();
            let m_hi = (rho.matrix() * &pd.matrix).trace();
            Ok(Box::new(move |phi| {
                let e = C64::from_polar(1.0, phi);
                let ei = e.conj();
                let sq = e * e * dd + ei * ei * ll + dl + ld;
                let mean = (e * m_hi + ei * m_lo).re;
                sq.re - mean * mean
            }))
        }
    }
}

/// Reduced state via dense index arithmetic; used to cross-check
/// [`crate::fock::partial_trace`].
pub fn dense_partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DMatrix<C64>> {
    let c = rho.cutoff();
    let rest: Vec<usize> = (0..c.n_modes()).filter(|m| !keep.contains(m)).collect();
    let kc = c.select(keep)?;
    let n = c.total_dim();
    let mut out = DMatrix::<C64>::zeros(kc.total_dim(), kc.total_dim());
    for i in 0..n {
        let oi = c.unrank(i);
        for j in 0..n {
            let oj = c.unrank(j);
            if rest.iter().all(|&m| oi[m] == oj[m]) {
                let ki = kc.rank(&keep.iter().map(|&m| oi[m]).collect::<Vec<_>>())?;
                let kj = kc.rank(&keep.iter().map(|&m| oj[m]).collect::<Vec<_>>())?;
                out[(ki, kj)] += rho.matrix()[(i, j)];
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{make_ghz, make_product, make_psi};

    fn cut(d: &[usize]) -> CutoffSpec {
        CutoffSpec::new(d.to_vec()).unwrap()
    }

    #[test]
    fn single_mode_matrices() {
        let a = dense_monomial(&cut(&[3]), &ModeMonomial::lowering(&[1]), DEFAULT_CAPACITY).unwrap();
        assert_eq!(a.matrix[(0, 1)], C64::new(1.0, 0.0));
        assert!((a.matrix[(1, 2)].re - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(a.matrix.iter().filter(|z| z.norm() != 0.0).count(), 2);
        let n = dense_monomial(&cut(&[3]), &ModeMonomial::number_power(&[1]), DEFAULT_CAPACITY).unwrap();
        for i in 0..3 {
            assert!((n.matrix[(i, i)].re - i as f64).abs() < 1e-15);
        }
    }

    #[test]
    fn entries_match_annihilator_powers() {
        let a = annihilator(6);
        let ad = a.adjoint();
        for u in 0..4u32 {
            for v in 0..4u32 {
                let mut want = DMatrix::<C64>::identity(6, 6);
                for _ in 0..u {
                    want = &want * &ad;
                }
                for _ in 0..v {
                    want = &want * &a;
                }
                assert!((local_monomial(6, u, v) - want).norm() < 1e-12, "u={u} v={v}");
            }
        }
    }

    #[test]
    fn adjoint_of_matrix_is_matrix_of_adjoint() {
        let c = cut(&[3, 2, 4]);
        let m = ModeMonomial::new(vec![(2, 1), (0, 1), (1, 3)]);
        let a = dense_monomial(&c, &m, DEFAULT_CAPACITY).unwrap();
        let b = dense_monomial(&c, &m.adjoint(), DEFAULT_CAPACITY).unwrap();
        assert_eq!(a.adjoint().matrix, b.matrix);
    }

    #[test]
    fn capacity_cap() {
        let c = cut(&[17, 17, 17]);
        assert!(matches!(
            dense_monomial(&c, &ModeMonomial::identity(3), DEFAULT_CAPACITY),
            Err(Error::Capacity { .. })
        ));
    }

    #[test]
    fn schmidt_examples() {
        let g = make_ghz(&cut(&[2, 2, 2])).unwrap();
        for c in Bipartition::all(3) {
            let sd = schmidt_rank(&g, &c, DEFAULT_SCHMIDT_TOL, DEFAULT_CAPACITY).unwrap();
            assert_eq!(sd.rank, 2);
            let h = std::f64::consts::FRAC_1_SQRT_2;
            assert!((sd.singular_values[0] - h).abs() < 1e-12 && (sd.singular_values[1] - h).abs() < 1e-12);
        }
        let p = make_psi(&cut(&[2, 2, 2])).unwrap();
        assert_eq!(schmidt_rank(&p, &Bipartition::ab_c(), 1e-8, DEFAULT_CAPACITY).unwrap().rank, 2);
        assert_eq!(schmidt_rank(&p, &Bipartition::a_bc(), 1e-8, DEFAULT_CAPACITY).unwrap().rank, 1);

        let one = PureState::basis(cut(&[3]), &[1]).unwrap();
        let plus = PureState::new(cut(&[3]), vec![C64::new(1.0, 0.0); 3]).unwrap();
        let prod = make_product(&[one, plus.clone(), plus]).unwrap();
        for c in Bipartition::all(3) {
            let sd = schmidt_rank(&prod, &c, 1e-8, DEFAULT_CAPACITY).unwrap();
            assert_eq!(sd.rank, 1);
            let total: f64 = sd.singular_values.iter().map(|x| x * x).sum();
            assert!((total - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn refinement_reaches_the_sinusoid_minimum() {
        let s = State::Pure(crate::states::random_pure(&cut(&[3, 3]), 4));
        let curve = variance_curve(&s, DEFAULT_CAPACITY).unwrap();
        let (phi, v) = refined_min_variance(&s, 16, DEFAULT_CAPACITY).unwrap();
        let (_, coarse) = grid_min_variance(&s, 16, DEFAULT_CAPACITY).unwrap();
        assert!(v <= coarse);
        assert!(v <= curve(phi + 1e-4) && v <= curve(phi - 1e-4));
    }

    #[test]
    fn grid_on_ghz_and_vacuum() {
        let g = State::Pure(make_ghz(&cut(&[2, 2, 2])).unwrap());
        let (phi, v) = grid_min_variance(&g, 720, DEFAULT_CAPACITY).unwrap();
        assert!(v.abs() < 1e-12 && phi.abs() < 1e-12);
        let vac = State::Pure(PureState::basis(cut(&[3, 3, 3]), &[0, 0, 0]).unwrap());
        let curve = variance_curve(&vac, DEFAULT_CAPACITY).unwrap();
        for k in 0..16 {
            assert!((curve(k as f64 * 0.4) - 1.0).abs() < 1e-14);
        }
        let mixed = State::Mixed(make_ghz(&cut(&[2, 2, 2])).unwrap().to_density());
        let (_, v) = grid_min_variance(&mixed, 720, DEFAULT_CAPACITY).unwrap();
        assert!(v.abs() < 1e-12);
        assert!(grid_min_variance(&g, 3, DEFAULT_CAPACITY).is_err());
    }
}
