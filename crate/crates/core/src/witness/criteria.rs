use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64 as C64;

use super::{Companion, CriterionId, CriterionResult, Params, Scope};
use crate::bipartition::Bipartition;
use crate::error::{Error, Result};
use crate::fock::{
    expectation, expectation_of_product, variance, BalancedForm, ModeMonomial, QuantumState, State,
};

fn require_modes(s: &State, n: usize, what: &str) -> Result<()> {
    if s.n_modes() == n {
        Ok(())
    } else {
        Err(Error::Unsupported(format!(
            "{what} is defined for {n}-mode states, got {} modes",
            s.n_modes()
        )))
    }
}

fn check_degrees(s: &State, degrees: &[u32]) -> Result<bool> {
    if degrees.len() != s.n_modes() {
        return Err(Error::ModeCount {
            expected: s.n_modes(),
            found: degrees.len(),
        });
    }
    if degrees.iter().any(|&k| k == 0) {
        return Err(Error::arg(format!("degrees must be positive, got {degrees:?}")));
    }
    // a^k annihilates the whole truncated mode once k >= d
    Ok(degrees
        .iter()
        .zip(s.cutoff().dims())
        .any(|(&k, &d)| k as usize >= d))
}

/// Base monomial of the variance pair for a distinguished mode: the
/// distinguished mode is raised, the other two lowered.
fn pair_base(distinguished: usize) -> ModeMonomial {
    let mut p = vec![(0, 1); 3];
    p[distinguished] = (1, 0);
    ModeMonomial::new(p)
}

fn cut_isolating(mode: usize, n: usize) -> Bipartition {
    Bipartition::new(n, &[mode]).expect("single mode is a proper subset").canonical()
}

/// Sum of the variances of `M + M^dag` and `i(M - M^dag)`, with `M` the
/// monomial that raises the distinguished mode and lowers the other two.
///
/// Distinguished C tests `AB|C`, A tests `A|BC`, B tests `B|AC`.
///
/// The separable bound is evaluated as
/// `2<M M^dag> + 2<M^dag M> - 4<N_a N_b N_c>`, which is what the
/// infinite-space bound `2(<N_a N_b> + <N_b N_c> + <N_a N_c> + <N_x>)`
/// becomes once `[a, a^dag] = 1` is not assumed. The two agree whenever the
/// state has no population on any mode's top level; otherwise the
/// infinite-space form is reported in `rhs_untruncated` and the result
/// carries a truncation warning.
pub fn pair_variance_criterion(s: &State, distinguished: usize, tol: f64) -> Result<CriterionResult> {
    require_modes(s, 3, "the variance pair criterion")?;
    if distinguished > 2 {
        return Err(Error::arg(format!("distinguished mode {distinguished} is not one of 0, 1, 2")));
    }
    let m = pair_base(distinguished);
    let md = m.adjoint();
    let lhs = variance(&BalancedForm::new(m.clone(), 0.0), s)?
        + variance(&BalancedForm::new(m.clone(), -FRAC_PI_2), s)?;

    let e = |mono: &ModeMonomial| -> Result<f64> { Ok(expectation(mono, s)?.re) };
    let nn = |i: usize, j: usize| {
        let mut k = [0u32; 3];
        k[i] = 1;
        k[j] = 1;
        ModeMonomial::number_power(&k)
    };
    let nnn = e(&ModeMonomial::number_power(&[1, 1, 1]))?;
    let rhs = 2.0 * expectation_of_product(&[&m, &md], s)?.re
        + 2.0 * expectation_of_product(&[&md, &m], s)?.re
        - 4.0 * nnn;
    let mut single = [0u32; 3];
    single[distinguished] = 1;
    let rhs_untruncated = 2.0
        * (e(&nn(0, 1))? + e(&nn(1, 2))? + e(&nn(0, 2))? + e(&ModeMonomial::number_power(&single))?);

    let warn = s.boundary_population(&[0, 1, 2]) > tol;
    let margin = rhs - lhs;
    Ok(CriterionResult {
        criterion: CriterionId::PairVariance,
        scope: Scope::Cut(cut_isolating(distinguished, 3)),
        params: Params {
            daggered: Some(vec![distinguished]),
            ..Params::default()
        },
        lhs,
        rhs,
        margin,
        verdict: CriterionResult::decide(margin, tol),
        truncation_warning: warn,
        rhs_untruncated: Some(rhs_untruncated),
        companions: Vec::new(),
    })
}

/// `|<prod_{i in lowered} a_i^k_i prod_{j not in lowered} (a_j^dag)^k_j>|^2`
/// against `<prod_i (a_i^dag)^k_i a_i^k_i>`.
fn conjugated_moment(
    s: &State,
    lowered: &Bipartition,
    degrees: &[u32],
    tol: f64,
    criterion: CriterionId,
) -> Result<CriterionResult> {
    let warn = check_degrees(s, degrees)?;
    let daggered = lowered.complement();
    let mono = ModeMonomial::lowering(degrees).conjugate_modes(&daggered);
    let lhs = expectation(&mono, s)?.norm_sqr();
    let rhs = expectation(&ModeMonomial::number_power(degrees), s)?.re;
    let margin = lhs - rhs;
    Ok(CriterionResult {
        criterion,
        scope: Scope::Cut(lowered.canonical()),
        params: Params {
            degrees: Some(degrees.to_vec()),
            daggered: Some(daggered),
            conjugate_complement: (criterion == CriterionId::NmodeMoment).then_some(true),
            ..Params::default()
        },
        lhs,
        rhs,
        margin,
        verdict: CriterionResult::decide(margin, tol),
        truncation_warning: warn,
        rhs_untruncated: None,
        companions: Vec::new(),
    })
}

/// Three-mode moment criterion with one mode conjugated:
/// `|<a^m b^n (c^dag)^l>|^2 > <(a^dag)^m a^m (b^dag)^n b^n (c^dag)^l c^l>`
/// for `daggered = 2`, and the analogous forms for `daggered = 0, 1`. A
/// violation means the daggered mode is entangled with the other two.
pub fn moment_criterion(s: &State, daggered: usize, degrees: [u32; 3], tol: f64) -> Result<CriterionResult> {
    require_modes(s, 3, "the three-mode moment criterion")?;
    if daggered > 2 {
        return Err(Error::arg(format!("daggered mode {daggered} is not one of 0, 1, 2")));
    }
    let lowered: Vec<usize> = (0..3).filter(|&i| i != daggered).collect();
    let cut = Bipartition::new(3, &lowered)?;
    conjugated_moment(s, &cut, &degrees, tol, CriterionId::Moment)
}

/// `|<a^m b^n c^l>|` against `sqrt(<side moment> <complement moment>)` for
/// the given cut.
pub fn sqrt_criterion(s: &State, cut: &Bipartition, degrees: [u32; 3], tol: f64) -> Result<CriterionResult> {
    require_modes(s, 3, "the square-root moment criterion")?;
    let (lhs2, rhs2, warn) = factorized_moment(s, cut, &degrees)?;
    let (lhs, rhs) = (lhs2.sqrt(), rhs2.max(0.0).sqrt());
    let margin = lhs - rhs;
    Ok(CriterionResult {
        criterion: CriterionId::MomentSqrt,
        scope: Scope::Cut(cut.canonical()),
        params: Params {
            degrees: Some(degrees.to_vec()),
            ..Params::default()
        },
        lhs,
        rhs,
        margin,
        verdict: CriterionResult::decide(margin, tol),
        truncation_warning: warn,
        rhs_untruncated: None,
        companions: Vec::new(),
    })
}

/// `(|<prod a^k>|^2, <side number power> <complement number power>, warn)`.
fn factorized_moment(s: &State, cut: &Bipartition, degrees: &[u32]) -> Result<(f64, f64, bool)> {
    let warn = check_degrees(s, degrees)?;
    if cut.n_modes() != s.n_modes() {
        return Err(Error::ModeCount {
            expected: s.n_modes(),
            found: cut.n_modes(),
        });
    }
    let n = s.n_modes();
    let lhs = expectation(&ModeMonomial::lowering(degrees), s)?.norm_sqr();
    let left = expectation(&ModeMonomial::number_power_on(n, cut.group(), degrees), s)?.re;
    let right = expectation(&ModeMonomial::number_power_on(n, &cut.complement(), degrees), s)?.re;
    Ok((lhs, left * right, warn))
}

/// Closed-form optimum of `Var K(phi)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseOptimum {
    /// `<P^dag P> + <P P^dag> - 2 |<P>|^2`.
    pub a: f64,
    /// `<(P^dag)^2> - <P^dag>^2`.
    pub b: C64,
    pub min: f64,
    pub phase: f64,
}

impl PhaseOptimum {
    /// `Var K(phi) = a + 2 Re(e^{2 i phi} b)`.
    pub fn at(&self, phi: f64) -> f64 {
        self.a + 2.0 * (C64::from_polar(1.0, 2.0 * phi) * self.b).re
    }

    pub fn of(s: &State) -> Result<Self> {
        let n = s.n_modes();
        if n < 2 {
            return Err(Error::Unsupported("phase variance needs at least two modes".into()));
        }
        let p = ModeMonomial::lowering(&vec![1; n]);
        let pd = p.adjoint();
        let mean_p = expectation(&p, s)?;
        let a = expectation_of_product(&[&pd, &p], s)?.re + expectation_of_product(&[&p, &pd], s)?.re
            - 2.0 * mean_p.norm_sqr();
        let mean_pd = mean_p.conj();
        let b = expectation_of_product(&[&pd, &pd], s)? - mean_pd * mean_pd;
        let phase = if b.norm() == 0.0 {
            0.0
        } else {
            (PI - b.arg()).rem_euclid(2.0 * PI) / 2.0
        };
        Ok(Self {
            a,
            b,
            min: a - 2.0 * b.norm(),
            phase,
        })
    }
}

/// `min_phi Var(e^{i phi} P^dag + e^{-i phi} P) < 1`, `P = a_1 ... a_n`,
/// certifies full entanglement. The minimum is taken in closed form.
///
/// With hard truncation the bound of 1 is only guaranteed for states with no
/// population on any mode's top level; such cases carry a truncation
/// warning. At cutoff 2 the three-mode GHZ state gives 0, at any cutoff of
/// 3 or more it gives 4.
pub fn phase_variance_criterion(s: &State, tol: f64) -> Result<CriterionResult> {
    let opt = PhaseOptimum::of(s)?;
    let all: Vec<usize> = (0..s.n_modes()).collect();
    let warn = s.boundary_population(&all) > tol;
    let margin = 1.0 - opt.min;
    Ok(CriterionResult {
        criterion: CriterionId::PhaseVariance,
        scope: Scope::Full,
        params: Params {
            phase: Some(opt.phase),
            ..Params::default()
        },
        lhs: opt.min,
        rhs: 1.0,
        margin,
        verdict: CriterionResult::decide(margin, tol),
        truncation_warning: warn,
        rhs_untruncated: None,
        companions: Vec::new(),
    })
}

/// Pure three-mode states only: fires when
/// `|<a^m b^n c^l>| > sqrt(<A> <B> <C>)` with `<A> = <(a^dag)^m a^m>` etc.,
/// while the three factorized products `|<a^m b^n><c^l>|^2`,
/// `|<a^m><b^n c^l>|^2`, `|<a^m c^l><b^n>|^2` all stay below `<A><B><C>`.
///
/// If a companion fails, the margin is the most negative companion slack.
pub fn pure_full_criterion(s: &State, degrees: [u32; 3], tol: f64) -> Result<CriterionResult> {
    require_modes(s, 3, "the pure-state full criterion")?;
    if !s.is_pure() {
        return Err(Error::Precondition(
            "the pure-state full criterion only holds for pure states".into(),
        ));
    }
    let warn = check_degrees(s, &degrees)?;
    let [m, n, l] = degrees;
    let low = |k: [u32; 3]| -> Result<C64> { expectation(&ModeMonomial::lowering(&k), s) };
    let num = |k: [u32; 3]| -> Result<f64> { Ok(expectation(&ModeMonomial::number_power(&k), s)?.re) };
    let (xa, xb, xc) = (num([m, 0, 0])?, num([0, n, 0])?, num([0, 0, l])?);
    let triple = xa * xb * xc;
    let (ea, eb, ec) = (low([m, 0, 0])?, low([0, n, 0])?, low([0, 0, l])?);
    let (eab, ebc, eac) = (low([m, n, 0])?, low([0, n, l])?, low([m, 0, l])?);
    let lhs = low(degrees)?.norm();
    let rhs = triple.max(0.0).sqrt();
    let companions = vec![
        Companion {
            label: "AB|C".into(),
            lhs: (eab * ec).norm_sqr(),
            rhs: triple,
        },
        Companion {
            label: "A|BC".into(),
            lhs: (ea * ebc).norm_sqr(),
            rhs: triple,
        },
        Companion {
            label: "B|AC".into(),
            lhs: (eac * eb).norm_sqr(),
            rhs: triple,
        },
    ];
    let worst = companions
        .iter()
        .map(|c| c.rhs - c.lhs)
        .fold(f64::INFINITY, f64::min);
    let margin = if worst >= -tol { lhs - rhs } else { worst };
    Ok(CriterionResult {
        criterion: CriterionId::PureFull,
        scope: Scope::Full,
        params: Params {
            degrees: Some(degrees.to_vec()),
            ..Params::default()
        },
        lhs,
        rhs,
        margin,
        verdict: CriterionResult::decide(margin, tol),
        truncation_warning: warn,
        rhs_untruncated: None,
        companions,
    })
}

/// `n`-mode moment inequalities across `cut`.
///
/// With `conjugate_complement`, the modes of `cut.group()` are lowered and
/// the complement is raised:
/// `|<prod_S a^l prod_{not S} (a^dag)^l>|^2 <= <prod_all (a^dag)^l a^l>`.
/// Without it, `|<prod a^l>|^2 <= <side number power> <complement number
/// power>`. Either violation means the two sides are entangled.
pub fn nmode_moment_criterion(
    s: &State,
    cut: &Bipartition,
    degrees: &[u32],
    conjugate_complement: bool,
    tol: f64,
) -> Result<CriterionResult> {
    if cut.n_modes() != s.n_modes() {
        return Err(Error::ModeCount {
            expected: s.n_modes(),
            found: cut.n_modes(),
        });
    }
    if conjugate_complement {
        return conjugated_moment(s, cut, degrees, tol, CriterionId::NmodeMoment);
    }
    let (lhs, rhs, warn) = factorized_moment(s, cut, degrees)?;
    let margin = lhs - rhs;
    Ok(CriterionResult {
        criterion: CriterionId::NmodeMoment,
        scope: Scope::Cut(cut.canonical()),
        params: Params {
            degrees: Some(degrees.to_vec()),
            conjugate_complement: Some(false),
            ..Params::default()
        },
        lhs,
        rhs,
        margin,
        verdict: CriterionResult::decide(margin, tol),
        truncation_warning: warn,
        rhs_untruncated: None,
        companions: Vec::new(),
    })
}
