//! Wasp-waist constructions on fighting fish and their inverse.
//!
//! Both constructions first *line* a prefix of the right fish's fin: every
//! lower-left fin edge receives a new cell glued by its upper-right slot, and
//! that cell's upper-left slot is glued to the lower-right slot left exposed
//! just before it (a lower-right fin edge, or the previous lining cell's
//! lower-right slot). The left fish, when present, then hangs by its head's
//! upper-left slot from whatever lower-right slot is exposed at the end.

use crate::decomp::{DecompKind, DecompTree};
use crate::error::{Error, Result};
use crate::fish::{BoundaryEdge, CellId, Fish, Slot};

/// Progress of a lining pass over a fin prefix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiningState {
    pub processed: usize,
    /// Lower-right slot available for the next gluing.
    pub exposed: Option<BoundaryEdge>,
    /// Lining cells in fin order; the first one is the new head.
    pub new_cells: Vec<CellId>,
}

/// Lines the first `j` fin edges of `p2`. Cell ids of `p2` are preserved and
/// lining cells are appended after them.
pub fn line_fin(p2: &Fish, j: usize) -> Result<(Fish, LiningState)> {
    let fin = p2.fin()?;
    if j == 0 || j > fin.len() {
        return Err(Error::InvalidInput(format!(
            "lining length {j} outside 1..={}",
            fin.len()
        )));
    }
    let mut fish = p2.clone();
    let mut state = LiningState {
        processed: 0,
        exposed: None,
        new_cells: Vec::new(),
    };
    for e in &fin[..j] {
        match e.slot {
            Slot::LL => {
                let cell = fish.push_cell();
                fish.glue(cell, Slot::UR, e.cell, Slot::LL);
                if let Some(x) = state.exposed {
                    fish.glue(cell, Slot::UL, x.cell, Slot::LR);
                }
                state.exposed = Some(BoundaryEdge {
                    cell,
                    slot: Slot::LR,
                });
                state.new_cells.push(cell);
            }
            Slot::LR => state.exposed = Some(*e),
            _ => unreachable!("fin edges are lower slots"),
        }
        state.processed += 1;
    }
    let head = *state
        .new_cells
        .first()
        .expect("the first fin edge is the head's lower-left slot");
    fish.set_head(head);
    Ok((fish, state))
}

fn require_valid(f: &Fish) -> Result<()> {
    f.validate().map_err(Error::InvalidFish)
}

/// Hangs `p1` (by its head's upper-left slot) from the exposed slot.
fn attach_left(mut fish: Fish, p1: &Fish, exposed: BoundaryEdge) -> Fish {
    let offset = fish.absorb(p1);
    let head1 = p1.head().expect("nonempty") + offset;
    fish.glue(head1, Slot::UL, exposed.cell, exposed.slot);
    fish
}

/// `C1•(p1, p2)`; either argument may be ε•.
pub fn c1_bullet(p1: &Fish, p2: &Fish) -> Result<Fish> {
    require_valid(p1)?;
    require_valid(p2)?;
    c1_raw(p1, p2)
}

pub(crate) fn c1_raw(p1: &Fish, p2: &Fish) -> Result<Fish> {
    let fish = match (p1.is_empty(), p2.is_empty()) {
        (true, true) => Fish::head_only(),
        (false, true) => {
            let mut fish = p1.clone();
            let cell = fish.push_cell();
            fish.glue(cell, Slot::LR, p1.head().expect("nonempty"), Slot::UL);
            fish.set_head(cell);
            fish
        }
        (true, false) => line_fin(p2, p2.fin()?.len())?.0,
        (false, false) => {
            let (fish, state) = line_fin(p2, p2.fin()?.len())?;
            attach_left(fish, p1, state.exposed.expect("lining sets an exposed slot"))
        }
    };
    Ok(fish.canonical())
}

/// `C2•(p1, p2, i)` for `1 ≤ i ≤ fin(p2) − 1`.
pub fn c2_bullet(p1: &Fish, p2: &Fish, i: usize) -> Result<Fish> {
    require_valid(p1)?;
    require_valid(p2)?;
    c2_raw(p1, p2, i)
}

pub(crate) fn c2_raw(p1: &Fish, p2: &Fish, i: usize) -> Result<Fish> {
    if p1.is_empty() || p2.is_empty() {
        return Err(Error::InvalidInput("C2• needs two nonempty fish".into()));
    }
    let k = p2.fin()?.len() - 1;
    if i == 0 || i > k {
        return Err(Error::InvalidInput(format!("C2• index {i} outside 1..={k}")));
    }
    let (fish, state) = line_fin(p2, k - i + 1)?;
    let fish = attach_left(fish, p1, state.exposed.expect("lining sets an exposed slot"));
    Ok(fish.canonical())
}

/// Result of undoing one construction step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WaspwaistDecomposition {
    pub kind: DecompKind,
    pub p1: Fish,
    pub p2: Fish,
}

impl WaspwaistDecomposition {
    /// Re-applies the construction.
    pub fn rebuild(&self) -> Result<Fish> {
        match self.kind {
            DecompKind::C1 => c1_raw(&self.p1, &self.p2),
            DecompKind::C2(i) => c2_raw(&self.p1, &self.p2, i),
        }
    }
}

/// Recovers the unique `(kind, p1, p2)` that builds `f`.
///
/// If the head's upper-right slot is free, `f` is `C1•(p1, ε•)` and `p1` is
/// what remains after removing the head. Otherwise the head is the first
/// lining cell. Along the fin of `f`, the lining part is followed by the fin
/// of `p1`; the switch happens at the first lower-left fin edge whose cell
/// hangs by its upper-left slot from a bridge gluing, and that cell is the
/// head of `p1`. The lining cells are the owners of the lower-left fin edges
/// before it. On the fin of what remains (`p2`), the lined prefix ends at the
/// last lower-left edge carrying a lining cell, or at the lower-right edge
/// holding `p1` if that comes later.
pub fn waspwaist_decompose(f: &Fish) -> Result<WaspwaistDecomposition> {
    let head = f
        .head()
        .ok_or_else(|| Error::InvalidInput("the empty fish has no decomposition".into()))?;
    if f.len() == 1 {
        return Ok(WaspwaistDecomposition {
            kind: DecompKind::C1,
            p1: Fish::empty(),
            p2: Fish::empty(),
        });
    }
    let found = if f.is_free(head, Slot::UR) {
        let below = f.gluing(head, Slot::LR).ok_or_else(|| {
            Error::Inconsistent("head has no right neighbour".into())
        })?;
        let mut keep = vec![true; f.len()];
        keep[head] = false;
        WaspwaistDecomposition {
            kind: DecompKind::C1,
            p1: f.restrict(&keep, below.cell).canonical(),
            p2: Fish::empty(),
        }
    } else {
        decompose_lined(f, head)?
    };
    let rebuilt = found.rebuild()?;
    if !rebuilt.is_isomorphic(f) {
        return Err(Error::Inconsistent(format!(
            "recovered {} does not rebuild the fish",
            found.kind
        )));
    }
    Ok(found)
}

fn decompose_lined(f: &Fish, head: CellId) -> Result<WaspwaistDecomposition> {
    let fin = f.fin()?;
    let split = fin.iter().enumerate().find_map(|(q, e)| {
        if e.slot != Slot::LL || f.is_free(e.cell, Slot::UL) {
            return None;
        }
        let side = f.component_without(e.cell, (e.cell, Slot::UL));
        (!side[head]).then_some((q, e.cell, side))
    });
    let (p1_head, p1_cells) = match split {
        Some((q, p1_head, side)) => (Some((q, p1_head)), side),
        None => (None, vec![false; f.len()]),
    };
    let before = p1_head.map_or(fin.len(), |(q, _)| q);
    let mut keep = p1_cells.iter().map(|&in_p1| !in_p1).collect::<Vec<_>>();
    for e in &fin[..before] {
        if e.slot == Slot::LL {
            keep[e.cell] = false;
        }
    }
    let p2_head = f
        .gluing(head, Slot::UR)
        .expect("caller checked the head's upper-right slot")
        .cell;
    if !keep[p2_head] {
        return Err(Error::Inconsistent(
            "the head's upper-right neighbour is not part of the lined fish".into(),
        ));
    }
    let kept: Vec<CellId> = (0..f.len()).filter(|&c| keep[c]).collect();
    let p2_raw = f.restrict(&keep, p2_head);
    let fin2 = p2_raw.fin()?;
    let mut lined = 0;
    for (idx, e) in fin2.iter().enumerate() {
        let glued = f.gluing(kept[e.cell], e.slot);
        let covered = match (e.slot, glued) {
            (Slot::LL, Some(_)) => true,
            (Slot::LR, Some(g)) => p1_head.is_some_and(|(_, h)| g.cell == h),
            _ => false,
        };
        if covered {
            lined = idx + 1;
        }
    }
    let p1 = match p1_head {
        Some((_, h)) => f.restrict(&p1_cells, h).canonical(),
        None => Fish::empty(),
    };
    let p2 = p2_raw.canonical();
    let kind = if p1.is_empty() || lined == fin2.len() {
        DecompKind::C1
    } else if !p1.is_empty() && (1..fin2.len()).contains(&lined) {
        DecompKind::C2(fin2.len() - lined)
    } else {
        return Err(Error::Inconsistent(format!(
            "{lined} lined edges against a fin of length {}",
            fin2.len()
        )));
    };
    Ok(WaspwaistDecomposition { kind, p1, p2 })
}

/// Folds `C1•`/`C2•` over `t`, checking C2 indices against fin lengths.
pub fn fish_of_tree(t: &DecompTree) -> Result<Fish> {
    match t {
        DecompTree::Empty => Ok(Fish::empty()),
        DecompTree::Node { kind, left, right } => {
            let p1 = fish_of_tree(left)?;
            let p2 = fish_of_tree(right)?;
            match *kind {
                DecompKind::C1 => c1_raw(&p1, &p2),
                DecompKind::C2(i) => {
                    if p1.is_empty() || p2.is_empty() {
                        return Err(Error::InvalidTree("C2 node with an empty child".into()));
                    }
                    let k = p2.fin()?.len() - 1;
                    if i == 0 || i > k {
                        return Err(Error::InvalidTree(format!(
                            "C2 index {i} outside 1..={k}"
                        )));
                    }
                    c2_raw(&p1, &p2, i)
                }
            }
        }
    }
}

/// Iterates [`waspwaist_decompose`] down to ε•.
pub fn tree_of_fish(f: &Fish) -> Result<DecompTree> {
    if f.is_empty() {
        return Ok(DecompTree::Empty);
    }
    let d = waspwaist_decompose(f)?;
    Ok(DecompTree::node(d.kind, tree_of_fish(&d.p1)?, tree_of_fish(&d.p2)?))
}
