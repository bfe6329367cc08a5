//! Constructors for the named states and seeded random generators.

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::fock::{CutoffSpec, Ensemble, PureState, QuantumState, State};

/// Deficit above which a truncated coherent-type state is flagged.
pub const DEFICIT_WARN: f64 = 1e-8;

/// Default number of product components in a random separable mixture.
pub const DEFAULT_MIXTURE_COMPONENTS: usize = 4;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
const ONE: C64 = C64 { re: 1.0, im: 0.0 };

/// A state built from an infinite Fock-space series, renormalized after
/// truncation. `deficit` is the probability weight the cutoff discarded.
#[derive(Clone, Debug, PartialEq)]
pub struct Truncated {
    pub state: PureState,
    pub deficit: f64,
}

impl Truncated {
    pub fn warns(&self) -> bool {
        self.deficit > DEFICIT_WARN
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoherentParams {
    pub amplitudes: Vec<C64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CatParams {
    pub amplitudes: Vec<C64>,
    /// `+1` for `|alpha> + |-alpha>`, `-1` for `|alpha> - |-alpha>`.
    pub sign: i8,
}

/// Disjoint groups of modes covering `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    groups: Vec<Vec<usize>>,
}

impl Partition {
    pub fn new(n_modes: usize, groups: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; n_modes];
        for g in &groups {
            if g.is_empty() {
                return Err(Error::arg("partition contains an empty group"));
            }
            for &m in g {
                if m >= n_modes {
                    return Err(Error::arg(format!("partition names mode {m} of {n_modes}")));
                }
                if seen[m] {
                    return Err(Error::arg(format!("mode {m} appears twice in the partition")));
                }
                seen[m] = true;
            }
        }
        if let Some(m) = seen.iter().position(|s| !s) {
            return Err(Error::arg(format!("partition does not cover mode {m}")));
        }
        Ok(Self { groups })
    }

    /// Every mode in its own group.
    pub fn singletons(n_modes: usize) -> Self {
        Self {
            groups: (0..n_modes).map(|m| vec![m]).collect(),
        }
    }

    /// `group | rest`.
    pub fn bipartite(n_modes: usize, group: &[usize]) -> Result<Self> {
        let rest: Vec<usize> = (0..n_modes).filter(|m| !group.contains(m)).collect();
        Self::new(n_modes, vec![group.to_vec(), rest])
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }
}

pub fn make_fock(cutoff: &CutoffSpec, occupations: &[usize]) -> Result<PureState> {
    PureState::basis(cutoff.clone(), occupations)
}

/// `(|0...0> + |1...1>)/sqrt2` on `n >= 2` modes.
pub fn make_ghz(cutoff: &CutoffSpec) -> Result<PureState> {
    if cutoff.n_modes() < 2 {
        return Err(Error::arg("GHZ state needs at least two modes"));
    }
    require_two_levels(cutoff)?;
    let n = cutoff.n_modes();
    superposition(cutoff, &[(vec![0; n], ONE), (vec![1; n], ONE)])
}

/// `(|001> + |010> + |101> + |110>)/2`: a `+` state on mode A times a
/// two-term pair on B, C.
pub fn make_psi(cutoff: &CutoffSpec) -> Result<PureState> {
    cutoff.check_modes(3).map_err(|_| Error::arg("the four-term state has exactly three modes"))?;
    require_two_levels(cutoff)?;
    let kets = [[0, 0, 1], [0, 1, 0], [1, 0, 1], [1, 1, 0]];
    let terms: Vec<_> = kets.iter().map(|k| (k.to_vec(), ONE)).collect();
    superposition(cutoff, &terms)
}

/// Normalized sum of weighted basis kets.
pub fn superposition(cutoff: &CutoffSpec, terms: &[(Vec<usize>, C64)]) -> Result<PureState> {
    let mut amps = vec![ZERO; cutoff.total_dim()];
    for (occ, w) in terms {
        amps[cutoff.rank(occ)?] += *w;
    }
    PureState::new(cutoff.clone(), amps)
}

fn require_two_levels(cutoff: &CutoffSpec) -> Result<()> {
    match cutoff.dims().iter().position(|&d| d < 2) {
        Some(i) => Err(Error::arg(format!("mode {i} has cutoff {} < 2", cutoff.dim(i)))),
        None => Ok(()),
    }
}

/// `e^{-|alpha|^2/2} alpha^n / sqrt(n!)` for `n < d`, built term by term.
fn coherent_series(alpha: C64, d: usize) -> Vec<C64> {
    let mut out = Vec::with_capacity(d);
    let mut c = C64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0);
    for n in 0..d {
        if n > 0 {
            c *= alpha / (n as f64).sqrt();
        }
        out.push(c);
    }
    out
}

/// Kronecker product of per-mode vectors, last mode fastest.
fn kron_modes(factors: &[Vec<C64>]) -> Vec<C64> {
    factors.iter().fold(vec![ONE], |acc, f| {
        let mut out = Vec::with_capacity(acc.len() * f.len());
        for a in &acc {
            for b in f {
                out.push(a * b);
            }
        }
        out
    })
}

pub fn make_coherent(cutoff: &CutoffSpec, p: &CoherentParams) -> Result<Truncated> {
    cutoff.check_modes(p.amplitudes.len())?;
    let factors: Vec<_> = p
        .amplitudes
        .iter()
        .zip(cutoff.dims())
        .map(|(&a, &d)| coherent_series(a, d))
        .collect();
    let amps = kron_modes(&factors);
    let kept: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
    let state = PureState::new(cutoff.clone(), amps)?;
    Ok(Truncated {
        state,
        deficit: (1.0 - kept).max(0.0),
    })
}

/// `N (|alpha, beta, ...> + sign |-alpha, -beta, ...>)`.
pub fn make_cat(cutoff: &CutoffSpec, p: &CatParams) -> Result<Truncated> {
    cutoff.check_modes(p.amplitudes.len())?;
    if p.sign != 1 && p.sign != -1 {
        return Err(Error::arg(format!("cat sign must be +1 or -1, got {}", p.sign)));
    }
    let total: f64 = p.amplitudes.iter().map(|a| a.norm_sqr()).sum();
    if p.sign == -1 && total == 0.0 {
        return Err(Error::Degenerate(
            "odd cat state with all amplitudes zero is the zero vector".into(),
        ));
    }
    let plus: Vec<_> = p
        .amplitudes
        .iter()
        .zip(cutoff.dims())
        .map(|(&a, &d)| coherent_series(a, d))
        .collect();
    let minus: Vec<_> = p
        .amplitudes
        .iter()
        .zip(cutoff.dims())
        .map(|(&a, &d)| coherent_series(-a, d))
        .collect();
    let s = p.sign as f64;
    let amps: Vec<C64> = kron_modes(&plus)
        .into_iter()
        .zip(kron_modes(&minus))
        .map(|(x, y)| x + y * s)
        .collect();
    let kept: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
    let full = 2.0 * (1.0 + s * (-2.0 * total).exp());
    let state = PureState::new(cutoff.clone(), amps)?;
    Ok(Truncated {
        state,
        deficit: (1.0 - kept / full).max(0.0),
    })
}

/// Closed-form `N_± = [2 (1 ± e^{-2 sum |alpha_i|^2})]^{-1/2}`.
pub fn cat_normalization(amplitudes: &[C64], sign: i8) -> f64 {
    let total: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
    (2.0 * (1.0 + sign as f64 * (-2.0 * total).exp())).powf(-0.5)
}

/// Tensor product; modes are concatenated in factor order.
pub fn make_product(factors: &[PureState]) -> Result<PureState> {
    if factors.len() < 2 {
        return Err(Error::arg("a product needs at least two factors"));
    }
    let dims: Vec<usize> = factors.iter().flat_map(|f| f.cutoff().dims().to_vec()).collect();
    let cutoff = CutoffSpec::new(dims)?;
    let vecs: Vec<Vec<C64>> = factors.iter().map(|f| f.amplitudes().to_vec()).collect();
    PureState::new(cutoff, kron_modes(&vecs))
}

/// Product over arbitrary (possibly interleaved) mode groups: `factors[g]`
/// lives on the modes `partition.groups()[g]`, in that order.
pub fn product_over_groups(
    cutoff: &CutoffSpec,
    partition: &Partition,
    factors: &[PureState],
) -> Result<PureState> {
    if factors.len() != partition.groups().len() {
        return Err(Error::arg(format!(
            "{} factors for {} groups",
            factors.len(),
            partition.groups().len()
        )));
    }
    let subs: Vec<CutoffSpec> = partition
        .groups()
        .iter()
        .map(|g| cutoff.select(g))
        .collect::<Result<_>>()?;
    for (s, f) in subs.iter().zip(factors) {
        if s != f.cutoff() {
            return Err(Error::Dimension(format!(
                "factor cutoff {:?} does not match group cutoff {:?}",
                f.cutoff().dims(),
                s.dims()
            )));
        }
    }
    let mut amps = Vec::with_capacity(cutoff.total_dim());
    for occ in cutoff.basis() {
        let mut a = ONE;
        for ((g, s), f) in partition.groups().iter().zip(&subs).zip(factors) {
            let sub: usize = g.iter().zip(s.strides()).map(|(&m, &st)| occ[m] * st).sum();
            a *= f.amplitudes()[sub];
            if a == ZERO {
                break;
            }
        }
        amps.push(a);
    }
    PureState::new(cutoff.clone(), amps)
}

/// Complex-Gaussian amplitudes, normalized: uniform on the unit sphere.
pub fn random_pure_with<R: Rng + ?Sized>(cutoff: &CutoffSpec, rng: &mut R) -> PureState {
    let amps = (0..cutoff.total_dim())
        .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    PureState::new(cutoff.clone(), amps).expect("gaussian vector is nonzero")
}

pub fn random_pure(cutoff: &CutoffSpec, seed: u64) -> PureState {
    random_pure_with(cutoff, &mut ChaCha8Rng::seed_from_u64(seed))
}

pub fn random_partitioned_product_with<R: Rng + ?Sized>(
    cutoff: &CutoffSpec,
    partition: &Partition,
    rng: &mut R,
) -> Result<PureState> {
    let factors: Vec<PureState> = partition
        .groups()
        .iter()
        .map(|g| Ok(random_pure_with(&cutoff.select(g)?, rng)))
        .collect::<Result<_>>()?;
    product_over_groups(cutoff, partition, &factors)
}

/// Independent random pure state on every single mode.
pub fn random_product(cutoff: &CutoffSpec, seed: u64) -> PureState {
    let p = Partition::singletons(cutoff.n_modes());
    random_partitioned_product_with(cutoff, &p, &mut ChaCha8Rng::seed_from_u64(seed))
        .expect("singleton partition is valid")
}

pub fn random_partitioned_product(
    cutoff: &CutoffSpec,
    partition: &Partition,
    seed: u64,
) -> Result<PureState> {
    random_partitioned_product_with(cutoff, partition, &mut ChaCha8Rng::seed_from_u64(seed))
}

pub fn random_separable_mixture_with<R: Rng + ?Sized>(
    cutoff: &CutoffSpec,
    k: usize,
    partition: &Partition,
    rng: &mut R,
) -> Result<Ensemble> {
    if k == 0 {
        return Err(Error::arg("a mixture needs at least one component"));
    }
    let states: Vec<PureState> = (0..k)
        .map(|_| random_partitioned_product_with(cutoff, partition, rng))
        .collect::<Result<_>>()?;
    // (0, 1] draws so no weight is exactly zero
    let raw: Vec<f64> = (0..k).map(|_| 1.0 - rng.random::<f64>()).collect();
    let total: f64 = raw.iter().sum();
    let mut weights: Vec<f64> = raw.iter().map(|w| w / total).collect();
    // absorb rounding so the weights sum to 1 to machine precision
    let drift: f64 = 1.0 - weights.iter().sum::<f64>();
    weights[0] += drift;
    Ensemble::new(
        weights
            .into_iter()
            .zip(states)
            .map(|(w, s)| (w, State::Pure(s)))
            .collect(),
    )
}

/// `k` random products over `partition`, mixed with normalized uniform
/// weights. Singleton groups give fully separable mixtures, two groups give
/// bi-separable ones.
pub fn random_separable_mixture(
    cutoff: &CutoffSpec,
    k: usize,
    partition: &Partition,
    seed: u64,
) -> Result<Ensemble> {
    random_separable_mixture_with(cutoff, k, partition, &mut ChaCha8Rng::seed_from_u64(seed))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{expectation, ModeMonomial};

    fn cut(d: &[usize]) -> CutoffSpec {
        CutoffSpec::new(d.to_vec()).unwrap()
    }

    #[test]
    fn fock_examples() {
        let c = cut(&[2, 2, 2]);
        let s = make_fock(&c, &[0, 0, 0]).unwrap();
        assert_eq!(s.amplitudes()[0], ONE);
        let s = make_fock(&c, &[1, 1, 0]).unwrap();
        assert_eq!(s.amplitudes()[6], ONE);
        assert!(make_fock(&c, &[0, 0, 2]).is_err());
    }

    #[test]
    fn ghz_examples() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let s = make_ghz(&cut(&[2, 2, 2])).unwrap();
        assert!((s.amplitudes()[0].re - h).abs() < 1e-15 && (s.amplitudes()[7].re - h).abs() < 1e-15);
        let s = make_ghz(&cut(&[2, 2, 2, 2])).unwrap();
        assert!((s.amplitudes()[0].re - h).abs() < 1e-15 && (s.amplitudes()[15].re - h).abs() < 1e-15);
        assert!(make_ghz(&cut(&[2, 1, 2])).is_err());
        assert!(make_ghz(&cut(&[2])).is_err());
    }

    #[test]
    fn psi_examples() {
        let s = make_psi(&cut(&[2, 2, 2])).unwrap();
        for (r, a) in s.amplitudes().iter().enumerate() {
            let want = if [1, 2, 5, 6].contains(&r) { 0.5 } else { 0.0 };
            assert!((a.re - want).abs() < 1e-15 && a.im == 0.0);
        }
        let s3 = make_psi(&cut(&[3, 3, 3])).unwrap();
        assert!((s3.norm() - 1.0).abs() < 1e-12);
        assert!((s3.amplitude(&[1, 1, 0]).unwrap().re - 0.5).abs() < 1e-15);
        assert!(make_psi(&cut(&[2, 2])).is_err());
        assert!(make_psi(&cut(&[2, 1, 2])).is_err());
    }

    #[test]
    fn coherent_examples() {
        let c = cut(&[16]);
        let vac = make_coherent(&c, &CoherentParams { amplitudes: vec![ZERO] }).unwrap();
        assert!((vac.state.amplitudes()[0] - ONE).norm() < 1e-15);
        assert!(vac.deficit < 1e-15);

        let s = make_coherent(&c, &CoherentParams { amplitudes: vec![C64::new(0.8, 0.0)] }).unwrap();
        let n = expectation(&ModeMonomial::number_power(&[1]), &s.state).unwrap();
        assert!((n.re - 0.64).abs() < 1e-9);
        let a = expectation(&ModeMonomial::lowering(&[1]), &s.state).unwrap();
        assert!((a - C64::new(0.8, 0.0)).norm() < 1e-9);
        assert!(!s.warns());

        let s2 = make_coherent(&cut(&[2]), &CoherentParams { amplitudes: vec![C64::new(0.8, 0.0)] }).unwrap();
        let want = 1.0 - (1.0 + 0.64) * (-0.64f64).exp();
        assert!((s2.deficit - want).abs() < 1e-14);
        assert!(s2.warns());

        assert!(make_coherent(&cut(&[4, 4]), &CoherentParams { amplitudes: vec![ONE] }).is_err());
    }

    #[test]
    fn cat_normalization_and_parity() {
        let amps = vec![C64::new(0.8, 0.0); 3];
        let c = cut(&[16, 16, 16]);
        let t = make_cat(&c, &CatParams { amplitudes: amps.clone(), sign: -1 }).unwrap();
        assert!((t.state.norm() - 1.0).abs() < 1e-12);
        assert!(t.deficit < 1e-8, "deficit {}", t.deficit);
        for (occ, a) in c.basis().zip(t.state.amplitudes()) {
            if occ.iter().sum::<usize>() % 2 == 0 {
                assert!(a.norm() < 1e-14);
            }
        }
        // amplitude of |100> against the closed form N_- * 2 * e^{-sum/2} * alpha
        let nm = cat_normalization(&amps, -1);
        let want = nm * 2.0 * (-1.92f64 / 2.0).exp() * 0.8;
        assert!((t.state.amplitude(&[1, 0, 0]).unwrap().re - want).abs() < 1e-8);
    }

    #[test]
    fn cat_errors() {
        let c = cut(&[4, 4]);
        let zero = vec![ZERO; 2];
        assert!(matches!(
            make_cat(&c, &CatParams { amplitudes: zero.clone(), sign: -1 }),
            Err(Error::Degenerate(_))
        ));
        let even = make_cat(&c, &CatParams { amplitudes: zero, sign: 1 }).unwrap();
        assert!((even.state.amplitudes()[0] - ONE).norm() < 1e-15);
        assert!(make_cat(&c, &CatParams { amplitudes: vec![ONE; 2], sign: 0 }).is_err());
    }

    #[test]
    fn product_examples() {
        let one = PureState::basis(cut(&[2]), &[1]).unwrap();
        let zero = PureState::basis(cut(&[2]), &[0]).unwrap();
        let p = make_product(&[one, zero.clone()]).unwrap();
        assert_eq!(p.amplitude(&[1, 0]).unwrap(), ONE);
        let plus = PureState::new(cut(&[2]), vec![ONE, ONE]).unwrap();
        let p = make_product(&[plus, zero.clone()]).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((p.amplitudes()[0].re - h).abs() < 1e-15 && (p.amplitudes()[2].re - h).abs() < 1e-15);
        assert!(make_product(&[zero]).is_err());
    }

    #[test]
    fn interleaved_groups() {
        // B | AC with B = |1>, AC = |0 1>
        let c = cut(&[2, 3, 2]);
        let part = Partition::new(3, vec![vec![1], vec![0, 2]]).unwrap();
        let b = PureState::basis(cut(&[3]), &[2]).unwrap();
        let ac = PureState::basis(cut(&[2, 2]), &[0, 1]).unwrap();
        let s = product_over_groups(&c, &part, &[b, ac]).unwrap();
        assert_eq!(s.amplitude(&[0, 2, 1]).unwrap(), ONE);
    }

    #[test]
    fn partition_validation() {
        assert!(Partition::new(3, vec![vec![0], vec![1]]).is_err());
        assert!(Partition::new(3, vec![vec![0, 1], vec![1, 2]]).is_err());
        assert!(Partition::new(3, vec![vec![0, 1, 2], vec![]]).is_err());
        assert!(Partition::new(3, vec![vec![0, 3], vec![1, 2]]).is_err());
        assert!(Partition::bipartite(3, &[1]).is_ok());
    }

    #[test]
    fn generators_are_deterministic() {
        let c = cut(&[3, 3, 3]);
        assert_eq!(random_pure(&c, 7), random_pure(&c, 7));
        assert_ne!(random_pure(&c, 7), random_pure(&c, 8));
        assert_eq!(random_product(&c, 3), random_product(&c, 3));
        let p = Partition::singletons(3);
        let e1 = random_separable_mixture(&c, 5, &p, 11).unwrap();
        let e2 = random_separable_mixture(&c, 5, &p, 11).unwrap();
        assert_eq!(e1, e2);
        let total: f64 = e1.components().iter().map(|(w, _)| w).sum();
        assert!((total - 1.0).abs() < 1e-12);
        assert!(random_separable_mixture(&c, 0, &p, 1).is_err());
    }
}
