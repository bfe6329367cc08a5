use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Per-mode Fock truncation.
///
/// Mode `i` keeps the occupations `0..dims[i]`. Basis states are laid out
/// row-major with the last mode varying fastest, so for cutoff `(2, 2, 2)` the
/// ket `|1 1 0>` sits at rank 6.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct CutoffSpec {
    dims: Vec<usize>,
    strides: Vec<usize>,
    total: usize,
}

impl CutoffSpec {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::arg("cutoff needs at least one mode"));
        }
        if let Some(i) = dims.iter().position(|&d| d == 0) {
            return Err(Error::arg(format!("mode {i} has cutoff 0; every mode needs d >= 1")));
        }
        let mut strides = vec![1usize; dims.len()];
        for i in (0..dims.len() - 1).rev() {
            strides[i] = strides[i + 1]
                .checked_mul(dims[i + 1])
                .ok_or_else(|| Error::arg("total dimension overflows usize"))?;
        }
        let total = strides[0]
            .checked_mul(dims[0])
            .ok_or_else(|| Error::arg("total dimension overflows usize"))?;
        Ok(Self { dims, strides, total })
    }

    /// `n` modes, each truncated at `d`.
    pub fn uniform(n: usize, d: usize) -> Result<Self> {
        Self::new(vec![d; n])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, mode: usize) -> usize {
        self.dims[mode]
    }

    pub fn strides(&self) -> &[usize] {
        &self.strides
    }

    pub fn n_modes(&self) -> usize {
        self.dims.len()
    }

    pub fn total_dim(&self) -> usize {
        self.total
    }

    pub fn rank(&self, occupations: &[usize]) -> Result<usize> {
        if occupations.len() != self.dims.len() {
            return Err(Error::ModeCount {
                expected: self.dims.len(),
                found: occupations.len(),
            });
        }
        let mut rank = 0;
        for (i, (&n, &d)) in occupations.iter().zip(&self.dims).enumerate() {
            if n >= d {
                return Err(Error::arg(format!(
                    "occupation {n} of mode {i} is outside the cutoff {d}"
                )));
            }
            rank += n * self.strides[i];
        }
        Ok(rank)
    }

    /// Inverse of [`rank`](Self::rank). Panics if `rank >= total_dim`.
    pub fn unrank(&self, rank: usize) -> Vec<usize> {
        assert!(rank < self.total, "rank {rank} out of range 0..{}", self.total);
        self.dims
            .iter()
            .zip(&self.strides)
            .map(|(&d, &s)| (rank / s) % d)
            .collect()
    }

    pub fn index(&self, rank: usize) -> FockIndex {
        FockIndex {
            occupations: self.unrank(rank),
            rank,
        }
    }

    /// Cutoff restricted to `modes`, in the order given.
    pub fn select(&self, modes: &[usize]) -> Result<Self> {
        for &m in modes {
            if m >= self.dims.len() {
                return Err(Error::arg(format!("mode {m} does not exist")));
            }
        }
        Self::new(modes.iter().map(|&m| self.dims[m]).collect())
    }

    pub(crate) fn check_modes(&self, found: usize) -> Result<()> {
        if found == self.dims.len() {
            Ok(())
        } else {
            Err(Error::ModeCount {
                expected: self.dims.len(),
                found,
            })
        }
    }

    pub(crate) fn check_same(&self, other: &CutoffSpec) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::Dimension(format!(
                "cutoff {:?} does not match {:?}",
                other.dims, self.dims
            )))
        }
    }

    /// Iterates occupations of every basis state in rank order.
    pub fn basis(&self) -> Basis<'_> {
        Basis {
            cutoff: self,
            next: Some(vec![0; self.dims.len()]),
        }
    }
}

impl TryFrom<Vec<usize>> for CutoffSpec {
    type Error = Error;

    fn try_from(dims: Vec<usize>) -> Result<Self> {
        Self::new(dims)
    }
}

impl From<CutoffSpec> for Vec<usize> {
    fn from(c: CutoffSpec) -> Self {
        c.dims
    }
}

/// A basis ket given both as occupations and as its linear rank.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FockIndex {
    pub occupations: Vec<usize>,
    pub rank: usize,
}

/// Odometer over the basis, last mode fastest.
pub struct Basis<'a> {
    cutoff: &'a CutoffSpec,
    next: Option<Vec<usize>>,
}

impl Iterator for Basis<'_> {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        let mut i = succ.len();
        loop {
            if i == 0 {
                break;
            }
            i -= 1;
            succ[i] += 1;
            if succ[i] < self.cutoff.dims[i] {
                self.next = Some(succ);
                break;
            }
            succ[i] = 0;
        }
        Some(current)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rank_is_row_major_last_fastest() {
        let c = CutoffSpec::uniform(3, 2).unwrap();
        assert_eq!(c.rank(&[1, 1, 0]).unwrap(), 6);
        assert_eq!(c.rank(&[0, 0, 1]).unwrap(), 1);
        assert_eq!(c.rank(&[1, 1, 1]).unwrap(), 7);
        let c = CutoffSpec::new(vec![2, 3, 4]).unwrap();
        assert_eq!(c.strides(), &[12, 4, 1]);
        assert_eq!(c.total_dim(), 24);
    }

    #[test]
    fn rejects_bad_dims() {
        assert!(CutoffSpec::new(vec![]).is_err());
        assert!(CutoffSpec::new(vec![2, 0]).is_err());
        let c = CutoffSpec::uniform(2, 2).unwrap();
        assert!(c.rank(&[0, 2]).is_err());
        assert!(c.rank(&[0]).is_err());
    }

    #[test]
    fn basis_iterates_in_rank_order() {
        let c = CutoffSpec::new(vec![2, 1, 3]).unwrap();
        let all: Vec<_> = c.basis().collect();
        assert_eq!(all.len(), c.total_dim());
        for (r, occ) in all.iter().enumerate() {
            assert_eq!(c.rank(occ).unwrap(), r);
        }
    }

    proptest! {
        #[test]
        fn rank_unrank_round_trip(dims in prop::collection::vec(1usize..6, 1..5), seed in 0usize..10_000) {
            let c = CutoffSpec::new(dims).unwrap();
            let r = seed % c.total_dim();
            let occ = c.unrank(r);
            prop_assert_eq!(c.rank(&occ).unwrap(), r);
            prop_assert_eq!(c.index(r).occupations, occ);
        }
    }
}
