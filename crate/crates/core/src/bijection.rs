//! The recursive bijection between two-stack sortable permutations and
//! fighting fish, routed through the shared decomposition tree.

use serde::Serialize;

use crate::construct::{fish_of_tree, tree_of_fish};
use crate::decomp::{perm_of_tree, tree_of_perm};
use crate::error::{Error, Result};
use crate::fish::{Fish, FishStats};
use crate::perm::{Permutation, StatVector};

/// `φ`; the empty permutation maps to the empty fish.
pub fn phi(p: &Permutation) -> Result<Fish> {
    fish_of_tree(&tree_of_perm(p)?)
}

/// `φ⁻¹` on a valid fish.
pub fn phi_inverse(f: &Fish) -> Result<Permutation> {
    f.validate().map_err(Error::InvalidFish)?;
    perm_of_tree(&tree_of_fish(f)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TransferReport {
    pub perm: StatVector,
    pub fish: FishStats,
    /// `size = len + 1`
    pub size: bool,
    /// `lsize = asc + 1`
    pub lsize: bool,
    /// `rsize = des + 1`
    pub rsize: bool,
    /// `fin = slmax + 1`
    pub fin: bool,
    /// `tails = sldes + 1`
    pub tails: bool,
}

impl TransferReport {
    pub fn from_stats(perm: StatVector, fish: FishStats) -> Self {
        TransferReport {
            perm,
            fish,
            size: fish.size == perm.len + 1,
            lsize: fish.lsize == perm.asc + 1,
            rsize: fish.rsize == perm.des + 1,
            fin: fish.fin == perm.slmax + 1,
            tails: fish.tails == perm.sldes + 1,
        }
    }

    pub fn passed(&self) -> bool {
        self.size && self.lsize && self.rsize && self.fin && self.tails
    }
}

/// Compares the statistics of `p` with those of `φ(p)`, each computed from
/// its own definition.
pub fn check_transfer(p: &Permutation) -> Result<TransferReport> {
    let fish = phi(p)?;
    fish.validate().map_err(Error::InvalidFish)?;
    Ok(TransferReport::from_stats(p.stats(), fish.stats()?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fish::GrowthRule;

    fn perm(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn small_images() {
        assert!(phi(&Permutation::empty()).unwrap().is_empty());
        assert!(phi(&perm("1")).unwrap().is_isomorphic(&Fish::head_only()));
        let a = Fish::head_only().add_cell(GrowthRule::A(0)).unwrap();
        assert!(phi(&perm("2,1")).unwrap().is_isomorphic(&a));
        let b = Fish::head_only().add_cell(GrowthRule::B(0)).unwrap();
        assert_eq!(phi_inverse(&b).unwrap(), perm("1,2"));
        assert_eq!(phi_inverse(&Fish::head_only()).unwrap(), perm("1"));
    }

    #[test]
    fn worked_example() {
        let p = perm("2,4,3,1");
        let f = phi(&p).unwrap();
        assert_eq!(f.len(), 4);
        assert_eq!(
            f.stats().unwrap(),
            FishStats { size: 5, lsize: 2, rsize: 3, fin: 4, tails: 2 }
        );
        assert_eq!(phi_inverse(&f).unwrap(), p);
        let r = check_transfer(&p).unwrap();
        assert!(r.passed());
        assert_eq!((r.perm.len, r.perm.asc, r.perm.des, r.perm.slmax, r.perm.sldes), (4, 1, 2, 3, 1));
    }

    #[test]
    fn single_point() {
        let r = check_transfer(&perm("1")).unwrap();
        assert!(r.passed());
        assert_eq!(r.fish, FishStats { size: 2, lsize: 1, rsize: 1, fin: 2, tails: 1 });
    }

    #[test]
    fn rejects_non_sortable() {
        assert!(phi(&perm("2,3,4,1")).is_err());
    }
}
