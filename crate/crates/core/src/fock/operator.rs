//! Normal-ordered ladder monomials and their action on the truncated basis.
//!
//! Every operator used by the criteria is a product of per-mode ladder
//! operators. Such a product sends each basis ket to a multiple of a single
//! basis ket, so it is stored as one lookup table per mode: occupation `n`
//! maps to `(n', coefficient)` or to nothing when the ket is annihilated or
//! pushed past the cutoff.

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use super::cutoff::CutoffSpec;
use crate::error::{Error, Result};

/// `prod_i (a_i^dag)^raise_i (a_i)^lower_i`, with lowering applied first on
/// each mode.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModeMonomial {
    powers: Vec<(u32, u32)>,
}

impl ModeMonomial {
    /// `powers[i] = (raise, lower)` for mode `i`.
    pub fn new(powers: Vec<(u32, u32)>) -> Self {
        Self { powers }
    }

    pub fn identity(n_modes: usize) -> Self {
        Self::new(vec![(0, 0); n_modes])
    }

    /// `prod_i a_i^lower_i`.
    pub fn lowering(lower: &[u32]) -> Self {
        Self::new(lower.iter().map(|&v| (0, v)).collect())
    }

    /// `prod_i (a_i^dag)^k_i a_i^k_i`, the normal-ordered number power.
    pub fn number_power(k: &[u32]) -> Self {
        Self::new(k.iter().map(|&k| (k, k)).collect())
    }

    /// Number power restricted to `modes`; identity elsewhere.
    pub fn number_power_on(n_modes: usize, modes: &[usize], k: &[u32]) -> Self {
        let mut m = Self::identity(n_modes);
        for &i in modes {
            m.powers[i] = (k[i], k[i]);
        }
        m
    }

    pub fn n_modes(&self) -> usize {
        self.powers.len()
    }

    pub fn powers(&self) -> &[(u32, u32)] {
        &self.powers
    }

    pub fn raise(&self, mode: usize) -> u32 {
        self.powers[mode].0
    }

    pub fn lower(&self, mode: usize) -> u32 {
        self.powers[mode].1
    }

    pub fn total_degree(&self) -> u32 {
        self.powers.iter().map(|&(u, v)| u + v).sum()
    }

    pub fn adjoint(&self) -> Self {
        Self::new(self.powers.iter().map(|&(u, v)| (v, u)).collect())
    }

    /// Same monomial with the raise/lower roles swapped on `modes` only.
    pub fn conjugate_modes(&self, modes: &[usize]) -> Self {
        let mut out = self.clone();
        for &i in modes {
            let (u, v) = out.powers[i];
            out.powers[i] = (v, u);
        }
        out
    }

    /// Keeps the factors on `modes`, identity elsewhere.
    pub fn restrict(&self, modes: &[usize]) -> Self {
        let mut out = Self::identity(self.n_modes());
        for &i in modes {
            out.powers[i] = self.powers[i];
        }
        out
    }
}

/// The Hermitian operator `e^{i phase} M^dag + e^{-i phase} M`.
///
/// With `phase = 0` and `phase = -pi/2` this gives the pair
/// `M + M^dag`, `i (M - M^dag)` used by the variance-sum criteria.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BalancedForm {
    pub base: ModeMonomial,
    pub phase: f64,
}

impl BalancedForm {
    pub fn new(base: ModeMonomial, phase: f64) -> Self {
        Self { base, phase }
    }

    /// Coefficient on `M^dag`.
    pub(crate) fn adjoint_weight(&self) -> C64 {
        C64::from_polar(1.0, self.phase)
    }

    /// Coefficient on `M`.
    pub(crate) fn base_weight(&self) -> C64 {
        C64::from_polar(1.0, -self.phase)
    }
}

/// One mode's action: `table[n] = Some((n', c))` means `|n> -> c |n'>`.
#[derive(Clone, Debug, PartialEq)]
struct ModeTable {
    table: Vec<Option<(usize, f64)>>,
    identity: bool,
}

impl ModeTable {
    fn new(d: usize, raise: u32, lower: u32) -> Self {
        let table = (0..d).map(|n| ladder_step(n, raise, lower, d)).collect();
        Self {
            table,
            identity: raise == 0 && lower == 0,
        }
    }

    /// `self` applied after `first`.
    fn after(&self, first: &ModeTable) -> ModeTable {
        let table = first
            .table
            .iter()
            .map(|step| {
                let (mid, c1) = (*step)?;
                let (out, c2) = self.table[mid]?;
                Some((out, c1 * c2))
            })
            .collect();
        ModeTable {
            table,
            identity: self.identity && first.identity,
        }
    }
}

/// `(a^dag)^raise a^lower |n>` under hard truncation at `d`.
///
/// Coefficients are built as running products of square roots so that no
/// factorial is ever formed.
pub(crate) fn ladder_step(n: usize, raise: u32, lower: u32, d: usize) -> Option<(usize, f64)> {
    let lower = lower as usize;
    let raise = raise as usize;
    if lower > n {
        return None;
    }
    let mut coeff = 1.0f64;
    for k in 0..lower {
        coeff *= ((n - k) as f64).sqrt();
    }
    let m = n - lower;
    if m + raise >= d {
        return None;
    }
    for k in 1..=raise {
        coeff *= ((m + k) as f64).sqrt();
    }
    Some((m + raise, coeff))
}

/// A product of ladder monomials compiled against a fixed cutoff.
///
/// Composition is exact on the truncated space: the table of `A.after(B)` is
/// the matrix product `A B` of the truncated operators.
#[derive(Clone, Debug, PartialEq)]
pub struct LadderProduct {
    cutoff: CutoffSpec,
    modes: Vec<ModeTable>,
}

impl LadderProduct {
    pub fn compile(cutoff: &CutoffSpec, m: &ModeMonomial) -> Result<Self> {
        cutoff.check_modes(m.n_modes())?;
        let modes = cutoff
            .dims()
            .iter()
            .zip(m.powers())
            .map(|(&d, &(u, v))| ModeTable::new(d, u, v))
            .collect();
        Ok(Self {
            cutoff: cutoff.clone(),
            modes,
        })
    }

    /// Compiles `ops[0] ops[1] ... ops[k-1]` (rightmost acts first).
    pub fn product(cutoff: &CutoffSpec, ops: &[&ModeMonomial]) -> Result<Self> {
        let mut iter = ops.iter().rev();
        let first = iter
            .next()
            .ok_or_else(|| Error::arg("empty operator product"))?;
        let mut acc = Self::compile(cutoff, first)?;
        for op in iter {
            acc = Self::compile(cutoff, op)?.after(&acc);
        }
        Ok(acc)
    }

    pub fn cutoff(&self) -> &CutoffSpec {
        &self.cutoff
    }

    /// `self * first`.
    pub fn after(&self, first: &LadderProduct) -> LadderProduct {
        let modes = self
            .modes
            .iter()
            .zip(&first.modes)
            .map(|(s, f)| s.after(f))
            .collect();
        LadderProduct {
            cutoff: self.cutoff.clone(),
            modes,
        }
    }

    /// Image of basis ket `rank`: `Some((target rank, coefficient))`.
    pub fn map_rank(&self, rank: usize) -> Option<(usize, f64)> {
        let mut coeff = 1.0;
        let mut target = 0;
        for ((table, &d), &s) in self
            .modes
            .iter()
            .zip(self.cutoff.dims())
            .zip(self.cutoff.strides())
        {
            let n = (rank / s) % d;
            let (m, c) = table.table[n]?;
            coeff *= c;
            target += m * s;
        }
        Some((target, coeff))
    }

    /// Calls `f(source, target, coefficient)` for every basis ket that
    /// survives. Walks the basis with an odometer instead of dividing.
    pub fn for_each_nonzero(&self, mut f: impl FnMut(usize, usize, f64)) {
        let n = self.modes.len();
        let dims = self.cutoff.dims();
        let strides = self.cutoff.strides();
        let mut occ = vec![0usize; n];
        // Running per-mode contributions; recomputed only for modes that tick.
        let mut part_target = vec![0usize; n];
        let mut part_coeff = vec![1.0f64; n];
        let mut part_alive = vec![true; n];
        let refresh = |i: usize, occ: &[usize], t: &mut [usize], c: &mut [f64], a: &mut [bool]| {
            match self.modes[i].table[occ[i]] {
                Some((m, cc)) => {
                    t[i] = m * strides[i];
                    c[i] = cc;
                    a[i] = true;
                }
                None => a[i] = false,
            }
        };
        for i in 0..n {
            refresh(i, &occ, &mut part_target, &mut part_coeff, &mut part_alive);
        }
        for rank in 0..self.cutoff.total_dim() {
            if part_alive.iter().all(|&a| a) {
                let target: usize = part_target.iter().sum();
                let coeff: f64 = part_coeff.iter().product();
                f(rank, target, coeff);
            }
            let mut i = n;
            while i > 0 {
                i -= 1;
                occ[i] += 1;
                if occ[i] < dims[i] {
                    refresh(i, &occ, &mut part_target, &mut part_coeff, &mut part_alive);
                    break;
                }
                occ[i] = 0;
                refresh(i, &occ, &mut part_target, &mut part_coeff, &mut part_alive);
            }
        }
    }

    /// `out += weight * (self |v>)`.
    pub fn apply_into(&self, v: &[C64], weight: C64, out: &mut [C64]) {
        self.for_each_nonzero(|src, dst, c| {
            let a = v[src];
            if a != C64::new(0.0, 0.0) {
                out[dst] += weight * a * c;
            }
        });
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        let mut out = vec![C64::new(0.0, 0.0); v.len()];
        self.apply_into(v, C64::new(1.0, 0.0), &mut out);
        out
    }

    /// Whether every mode table is the identity.
    pub fn is_identity(&self) -> bool {
        self.modes.iter().all(|m| m.identity)
    }
}
