use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::fock::normalize_subset;

/// A split of the modes into `group` and its complement.
///
/// `group` keeps the orientation it was built with, which matters for the
/// criteria that conjugate one side. Two values describe the same cut when
/// [`canonical`](Self::canonical) agrees; the canonical side is the one that
/// does not contain the last mode, so for three modes `A|BC = {0}`,
/// `B|AC = {1}` and `AB|C = {0, 1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Bipartition {
    n_modes: usize,
    group: Vec<usize>,
}

impl Bipartition {
    pub fn new(n_modes: usize, group: &[usize]) -> Result<Self> {
        Ok(Self {
            n_modes,
            group: normalize_subset(n_modes, group)?,
        })
    }

    pub fn a_bc() -> Self {
        Self { n_modes: 3, group: vec![0] }
    }

    pub fn b_ac() -> Self {
        Self { n_modes: 3, group: vec![1] }
    }

    pub fn ab_c() -> Self {
        Self { n_modes: 3, group: vec![0, 1] }
    }

    /// Every cut of `n` modes once, in canonical form, ordered by the bitmask
    /// of the canonical side.
    pub fn all(n_modes: usize) -> Vec<Self> {
        if n_modes < 2 {
            return Vec::new();
        }
        (1u64..(1u64 << (n_modes - 1)))
            .map(|mask| Self {
                n_modes,
                group: (0..n_modes - 1).filter(|i| mask >> i & 1 == 1).collect(),
            })
            .collect()
    }

    /// Every oriented cut (both sides as `group`).
    pub fn all_oriented(n_modes: usize) -> Vec<Self> {
        let mut out = Vec::new();
        for c in Self::all(n_modes) {
            out.push(c.flipped());
            out.push(c);
        }
        out.sort_by_key(|c| c.mask());
        out
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn group(&self) -> &[usize] {
        &self.group
    }

    pub fn complement(&self) -> Vec<usize> {
        (0..self.n_modes).filter(|m| !self.group.contains(m)).collect()
    }

    pub fn flipped(&self) -> Self {
        Self {
            n_modes: self.n_modes,
            group: self.complement(),
        }
    }

    pub fn canonical(&self) -> Self {
        if self.group.contains(&(self.n_modes - 1)) {
            self.flipped()
        } else {
            self.clone()
        }
    }

    pub fn same_cut(&self, other: &Self) -> bool {
        self.canonical() == other.canonical()
    }

    fn mask(&self) -> u64 {
        self.group.iter().map(|&m| 1u64 << m).sum()
    }

    /// `A|BC`-style label of the cut as oriented; numeric when more than 26
    /// modes.
    pub fn label(&self) -> String {
        let name = |m: usize| {
            if self.n_modes <= 26 {
                ((b'A' + m as u8) as char).to_string()
            } else {
                format!("{m},")
            }
        };
        let side = |modes: &[usize]| {
            let s: String = modes.iter().map(|&m| name(m)).collect();
            s.trim_end_matches(',').to_string()
        };
        format!("{}|{}", side(&self.group), side(&self.complement()))
    }
}

impl std::fmt::Display for Bipartition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.canonical().label())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn named_three_mode_cuts() {
        let all = Bipartition::all(3);
        assert_eq!(all, vec![Bipartition::a_bc(), Bipartition::b_ac(), Bipartition::ab_c()]);
        let labels: Vec<_> = all.iter().map(|c| c.to_string()).collect();
        assert_eq!(labels, ["A|BC", "B|AC", "AB|C"]);
    }

    #[test]
    fn canonical_form() {
        let c = Bipartition::new(3, &[2]).unwrap();
        assert_eq!(c.canonical(), Bipartition::ab_c());
        assert!(c.same_cut(&Bipartition::ab_c()));
        assert_eq!(c.label(), "C|AB");
        assert_eq!(Bipartition::new(3, &[2, 0]).unwrap().canonical(), Bipartition::b_ac());
    }

    #[test]
    fn counts() {
        assert_eq!(Bipartition::all(4).len(), 7);
        assert_eq!(Bipartition::all_oriented(4).len(), 14);
        assert!(Bipartition::all(1).is_empty());
        assert!(Bipartition::new(3, &[]).is_err());
        assert!(Bipartition::new(3, &[0, 1, 2]).is_err());
    }
}
