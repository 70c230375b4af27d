//! Fighting fish as a purely combinatorial cell complex.
//!
//! Every cell is a unit diamond with four edge slots. Two cells share an edge
//! by gluing an upper-right slot to a lower-left one, or a lower-right slot to
//! an upper-left one. Geometry is derived (see [`Fish::embed`]) and may
//! self-overlap, so nothing here depends on coordinates.
//!
//! The head is recovered structurally as the unique cell whose two left slots
//! are free; the stored head is checked against it by [`Fish::validate`].

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::{Error, Result};

pub type CellId = usize;

/// One of the four edges of a cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Slot {
    UL,
    UR,
    LL,
    LR,
}

impl Slot {
    pub const ALL: [Slot; 4] = [Slot::UL, Slot::UR, Slot::LL, Slot::LR];

    fn index(self) -> usize {
        self as usize
    }

    /// The only slot type this one may be glued to.
    pub fn partner(self) -> Slot {
        match self {
            Slot::UR => Slot::LL,
            Slot::LL => Slot::UR,
            Slot::LR => Slot::UL,
            Slot::UL => Slot::LR,
        }
    }

    /// Counter-clockwise successor around a cell: LL → LR → UR → UL → LL.
    pub fn next_ccw(self) -> Slot {
        match self {
            Slot::LL => Slot::LR,
            Slot::LR => Slot::UR,
            Slot::UR => Slot::UL,
            Slot::UL => Slot::LL,
        }
    }

    pub fn is_lower(self) -> bool {
        matches!(self, Slot::LL | Slot::LR)
    }

    /// Offset of the partner cell's left vertex across this slot.
    fn neighbor_offset(self) -> (i64, i64) {
        match self {
            Slot::UR => (1, 1),
            Slot::LR => (1, -1),
            Slot::LL => (-1, -1),
            Slot::UL => (-1, 1),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Slot::UL => "UL",
            Slot::UR => "UR",
            Slot::LL => "LL",
            Slot::LR => "LR",
        }
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The far side of a glued slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gluing {
    pub cell: CellId,
    pub slot: Slot,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Cell {
    slots: [Option<Gluing>; 4],
}

impl Cell {
    pub fn get(&self, slot: Slot) -> Option<Gluing> {
        self.slots[slot.index()]
    }

    pub fn set(&mut self, slot: Slot, gluing: Option<Gluing>) {
        self.slots[slot.index()] = gluing;
    }

    pub fn is_free(&self, slot: Slot) -> bool {
        self.get(slot).is_none()
    }
}

/// A free slot met while walking the boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BoundaryEdge {
    pub cell: CellId,
    pub slot: Slot,
}

impl fmt::Display for BoundaryEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.cell, self.slot)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FishStats {
    pub size: usize,
    pub lsize: usize,
    pub rsize: usize,
    pub fin: usize,
    pub tails: usize,
}

impl FishStats {
    /// Values assigned to the empty fish so that the construction recursions
    /// hold without case splits.
    pub const EMPTY: FishStats = FishStats {
        size: 1,
        lsize: 1,
        rsize: 1,
        fin: 1,
        tails: 1,
    };
}

/// Ways to attach a new cell.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GrowthRule {
    /// Onto a free upper-right slot.
    A(CellId),
    /// Onto a free lower-right slot.
    B(CellId),
    /// Onto `b.LR` and `c.UR` where `b` and `c` hang off the upper-right and
    /// lower-right slots of a common cell.
    C(CellId, CellId),
}

/// First violated invariant found by [`Fish::validate`] and friends.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Defect {
    #[error("cell {cell} slot {slot} refers to missing cell {target}")]
    DanglingGluing { cell: CellId, slot: Slot, target: CellId },
    #[error("cell {cell} slot {slot} is glued to a {found} slot")]
    IllTyped { cell: CellId, slot: Slot, found: Slot },
    #[error("gluing at cell {cell} slot {slot} is not reciprocated")]
    NotInvolution { cell: CellId, slot: Slot },
    #[error("cell {cell} is not connected to cell 0")]
    Disconnected { cell: CellId },
    #[error("no cell has both left slots free")]
    NoHead,
    #[error("cells {first} and {second} both have both left slots free")]
    SeveralHeads { first: CellId, second: CellId },
    #[error("stored head {stored:?} differs from structural head {structural:?}")]
    HeadMismatch {
        stored: Option<CellId>,
        structural: Option<CellId>,
    },
    #[error("no growth order: {remaining} cells remain after peeling")]
    NotConstructible { remaining: usize },
    #[error("boundary pivot around cell {cell} slot {slot} never reaches a free slot")]
    PivotLoop { cell: CellId, slot: Slot },
    #[error("fin reaches upper slot {cell}.{slot} before any tail")]
    NoTail { cell: CellId, slot: Slot },
    #[error("cell {cell} gets two positions, {first:?} and {second:?}")]
    InconsistentEmbedding {
        cell: CellId,
        first: (i64, i64),
        second: (i64, i64),
    },
    #[error("empty fish operation")]
    Empty,
}

/// A fighting fish, or the empty fish ε• when it has no cells.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Fish {
    cells: Vec<Cell>,
    head: Option<CellId>,
}

impl Fish {
    /// ε•.
    pub fn empty() -> Self {
        Self::default()
    }

    /// The single-cell fish.
    pub fn head_only() -> Self {
        Self {
            cells: vec![Cell::default()],
            head: Some(0),
        }
    }

    /// Assembles a complex without checking anything; see [`Fish::validate`].
    pub fn from_parts(cells: Vec<Cell>, head: Option<CellId>) -> Self {
        Self { cells, head }
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn head(&self) -> Option<CellId> {
        self.head
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn gluing(&self, cell: CellId, slot: Slot) -> Option<Gluing> {
        self.cells[cell].get(slot)
    }

    pub fn is_free(&self, cell: CellId, slot: Slot) -> bool {
        self.cells[cell].is_free(slot)
    }

    fn head_or_err(&self) -> Result<CellId, Defect> {
        self.head.ok_or(Defect::Empty)
    }

    pub(crate) fn push_cell(&mut self) -> CellId {
        self.cells.push(Cell::default());
        self.cells.len() - 1
    }

    pub(crate) fn set_head(&mut self, head: CellId) {
        self.head = Some(head);
    }

    /// Glues `a.sa` to `b.sb`. Both slots must be free and type-compatible.
    pub(crate) fn glue(&mut self, a: CellId, sa: Slot, b: CellId, sb: Slot) {
        assert_eq!(sa.partner(), sb, "cannot glue {sa} to {sb}");
        assert!(self.cells[a].is_free(sa), "{a}.{sa} already glued");
        assert!(self.cells[b].is_free(sb), "{b}.{sb} already glued");
        self.cells[a].set(sa, Some(Gluing { cell: b, slot: sb }));
        self.cells[b].set(sb, Some(Gluing { cell: a, slot: sa }));
    }

    pub(crate) fn unglue(&mut self, a: CellId, sa: Slot) {
        if let Some(g) = self.cells[a].get(sa) {
            self.cells[a].set(sa, None);
            self.cells[g.cell].set(g.slot, None);
        }
    }

    /// Copies `other` into `self` with ids shifted; returns the offset.
    pub(crate) fn absorb(&mut self, other: &Fish) -> CellId {
        let offset = self.cells.len();
        self.cells.extend(other.cells.iter().map(|c| {
            let mut c = c.clone();
            for s in c.slots.iter_mut().flatten() {
                s.cell += offset;
            }
            c
        }));
        offset
    }

    /// Attaches one new cell by a growth rule.
    pub fn add_cell(&self, rule: GrowthRule) -> Result<Fish> {
        if self.is_empty() {
            return Err(Error::InvalidGrowth("cannot grow the empty fish".into()));
        }
        let n = self.len();
        let check_free = |c: CellId, s: Slot| -> Result<()> {
            if c >= n {
                return Err(Error::InvalidGrowth(format!("no cell {c}")));
            }
            if !self.is_free(c, s) {
                return Err(Error::InvalidGrowth(format!("{c}.{s} is not free")));
            }
            Ok(())
        };
        let mut out = self.clone();
        match rule {
            GrowthRule::A(t) => {
                check_free(t, Slot::UR)?;
                let new = out.push_cell();
                out.glue(new, Slot::LL, t, Slot::UR);
            }
            GrowthRule::B(t) => {
                check_free(t, Slot::LR)?;
                let new = out.push_cell();
                out.glue(new, Slot::UL, t, Slot::LR);
            }
            GrowthRule::C(b, c) => {
                check_free(b, Slot::LR)?;
                check_free(c, Slot::UR)?;
                if !self.hangs_off_common_cell(b, c) {
                    return Err(Error::InvalidGrowth(format!(
                        "cells {b} and {c} do not hang off a common cell"
                    )));
                }
                let new = out.push_cell();
                out.glue(new, Slot::UL, b, Slot::LR);
                out.glue(new, Slot::LL, c, Slot::UR);
            }
        }
        Ok(out)
    }

    /// Whether some `a` has `a.UR ↔ b.LL` and `a.LR ↔ c.UL`.
    fn hangs_off_common_cell(&self, b: CellId, c: CellId) -> bool {
        match (self.gluing(b, Slot::LL), self.gluing(c, Slot::UL)) {
            (Some(x), Some(y)) => x.cell == y.cell && x.slot == Slot::UR && y.slot == Slot::LR,
            _ => false,
        }
    }

    /// Successor of the free slot `(cell, slot)` on the boundary.
    fn boundary_successor(&self, cell: CellId, slot: Slot) -> Result<BoundaryEdge, Defect> {
        let (mut c, mut t) = (cell, slot.next_ccw());
        for _ in 0..=4 * self.cells.len() {
            match self.cells[c].get(t) {
                None => return Ok(BoundaryEdge { cell: c, slot: t }),
                Some(g) => {
                    c = g.cell;
                    t = g.slot.next_ccw();
                }
            }
        }
        Err(Defect::PivotLoop { cell, slot })
    }

    /// The cyclic sequence of free slots, counter-clockwise from the head's
    /// lower-left slot.
    pub fn boundary(&self) -> Result<Vec<BoundaryEdge>, Defect> {
        let head = self.head_or_err()?;
        let start = BoundaryEdge {
            cell: head,
            slot: Slot::LL,
        };
        let mut out = vec![start];
        let mut cur = start;
        loop {
            cur = self.boundary_successor(cur.cell, cur.slot)?;
            if cur == start {
                return Ok(out);
            }
            if out.len() > 4 * self.cells.len() {
                return Err(Defect::PivotLoop {
                    cell: cur.cell,
                    slot: cur.slot,
                });
            }
            out.push(cur);
        }
    }

    /// Boundary path from the nose to the first tail.
    pub fn fin(&self) -> Result<Vec<BoundaryEdge>, Defect> {
        let head = self.head_or_err()?;
        let mut cur = BoundaryEdge {
            cell: head,
            slot: Slot::LL,
        };
        let mut out = Vec::new();
        loop {
            if !cur.slot.is_lower() {
                return Err(Defect::NoTail {
                    cell: cur.cell,
                    slot: cur.slot,
                });
            }
            out.push(cur);
            if cur.slot == Slot::LR && self.is_free(cur.cell, Slot::UR) {
                return Ok(out);
            }
            cur = self.boundary_successor(cur.cell, cur.slot)?;
        }
    }

    /// Cells whose two right slots are free.
    pub fn tail_cells(&self) -> Vec<CellId> {
        (0..self.len())
            .filter(|&c| self.is_free(c, Slot::UR) && self.is_free(c, Slot::LR))
            .collect()
    }

    /// Statistics by slot census and fin walk; ε• gets [`FishStats::EMPTY`].
    pub fn stats(&self) -> Result<FishStats, Defect> {
        if self.is_empty() {
            return Ok(FishStats::EMPTY);
        }
        let count = |s: Slot| self.cells.iter().filter(|c| c.is_free(s)).count();
        let lsize = count(Slot::LL);
        let rsize = count(Slot::LR);
        Ok(FishStats {
            size: lsize + rsize,
            lsize,
            rsize,
            fin: self.fin()?.len(),
            tails: self.tail_cells().len(),
        })
    }

    /// The unique cell with both left slots free.
    pub fn structural_head(&self) -> Result<CellId, Defect> {
        let mut heads = (0..self.len())
            .filter(|&c| self.is_free(c, Slot::UL) && self.is_free(c, Slot::LL));
        let first = heads.next().ok_or(Defect::NoHead)?;
        match heads.next() {
            Some(second) => Err(Defect::SeveralHeads { first, second }),
            None => Ok(first),
        }
    }

    fn check_gluings(&self) -> Result<(), Defect> {
        for (id, cell) in self.cells.iter().enumerate() {
            for slot in Slot::ALL {
                let Some(g) = cell.get(slot) else { continue };
                if g.cell >= self.len() {
                    return Err(Defect::DanglingGluing {
                        cell: id,
                        slot,
                        target: g.cell,
                    });
                }
                if g.slot != slot.partner() {
                    return Err(Defect::IllTyped {
                        cell: id,
                        slot,
                        found: g.slot,
                    });
                }
                let back = self.cells[g.cell].get(g.slot);
                if back != Some(Gluing { cell: id, slot }) {
                    return Err(Defect::NotInvolution { cell: id, slot });
                }
            }
        }
        Ok(())
    }

    fn component_of(&self, start: CellId) -> Vec<bool> {
        let mut seen = vec![false; self.len()];
        let mut queue = VecDeque::from([start]);
        seen[start] = true;
        while let Some(c) = queue.pop_front() {
            for g in self.cells[c].slots.iter().flatten() {
                if !std::mem::replace(&mut seen[g.cell], true) {
                    queue.push_back(g.cell);
                }
            }
        }
        seen
    }

    fn check_connected(&self) -> Result<(), Defect> {
        let seen = self.component_of(0);
        match seen.iter().position(|&s| !s) {
            Some(cell) => Err(Defect::Disconnected { cell }),
            None => Ok(()),
        }
    }

    /// Checks gluing typing and symmetry, connectivity, head uniqueness, and
    /// that the complex can be grown from its head by the three growth rules.
    pub fn validate(&self) -> Result<(), Defect> {
        self.check_gluings()?;
        if self.is_empty() {
            return match self.head {
                None => Ok(()),
                Some(_) => Err(Defect::HeadMismatch {
                    stored: self.head,
                    structural: None,
                }),
            };
        }
        self.check_connected()?;
        let head = self.structural_head()?;
        if self.head != Some(head) {
            return Err(Defect::HeadMismatch {
                stored: self.head,
                structural: Some(head),
            });
        }
        self.check_peelable()
    }

    /// Reverse growth: repeatedly strip a cell whose right slots are free and
    /// whose left gluings are exactly what rule (a), (b) or (c) leaves behind.
    ///
    /// Peelability is monotone (stripping one cell never blocks another), so
    /// the first maximal peeling sequence decides constructibility.
    fn check_peelable(&self) -> Result<(), Defect> {
        let mut work = self.clone();
        let mut alive = vec![true; self.len()];
        let mut remaining = self.len();
        let mut progress = true;
        while remaining > 1 && progress {
            progress = false;
            for z in 0..work.len() {
                if alive[z] && work.peel_rule(z).is_some() {
                    work.unglue(z, Slot::UL);
                    work.unglue(z, Slot::LL);
                    alive[z] = false;
                    remaining -= 1;
                    progress = true;
                }
            }
        }
        if remaining == 1 {
            Ok(())
        } else {
            Err(Defect::NotConstructible { remaining })
        }
    }

    /// The growth rule whose post-state `z` matches, if any.
    pub(crate) fn peel_rule(&self, z: CellId) -> Option<GrowthRule> {
        if !self.is_free(z, Slot::UR) || !self.is_free(z, Slot::LR) {
            return None;
        }
        match (self.gluing(z, Slot::UL), self.gluing(z, Slot::LL)) {
            (None, Some(c)) => Some(GrowthRule::A(c.cell)),
            (Some(b), None) => Some(GrowthRule::B(b.cell)),
            (Some(b), Some(c)) if self.hangs_off_common_cell(b.cell, c.cell) => {
                Some(GrowthRule::C(b.cell, c.cell))
            }
            _ => None,
        }
    }

    /// Left-vertex coordinates of every cell, with the nose at the origin.
    /// Distinct cells may share a position.
    pub fn embed(&self) -> Result<Vec<(i64, i64)>, Defect> {
        let head = self.head_or_err()?;
        let mut pos: Vec<Option<(i64, i64)>> = vec![None; self.len()];
        pos[head] = Some((0, 0));
        let mut queue = VecDeque::from([head]);
        while let Some(c) = queue.pop_front() {
            let (x, y) = pos[c].expect("queued cells are placed");
            for slot in Slot::ALL {
                let Some(g) = self.gluing(c, slot) else { continue };
                let (dx, dy) = slot.neighbor_offset();
                let p = (x + dx, y + dy);
                match pos[g.cell] {
                    None => {
                        pos[g.cell] = Some(p);
                        queue.push_back(g.cell);
                    }
                    Some(q) if q != p => {
                        return Err(Defect::InconsistentEmbedding {
                            cell: g.cell,
                            first: q,
                            second: p,
                        })
                    }
                    Some(_) => {}
                }
            }
        }
        pos.into_iter()
            .enumerate()
            .map(|(cell, p)| p.ok_or(Defect::Disconnected { cell }))
            .collect()
    }

    /// Relabels cells breadth-first from the head, visiting slots in the
    /// order UL, UR, LL, LR. Slot-preserving isomorphic fish get identical
    /// canonical forms.
    pub fn canonical(&self) -> Fish {
        let Some(head) = self.head else {
            return self.clone();
        };
        let n = self.len();
        let mut new_id = vec![usize::MAX; n];
        let mut order = Vec::with_capacity(n);
        let mut queue = VecDeque::from([head]);
        new_id[head] = 0;
        order.push(head);
        while let Some(c) = queue.pop_front() {
            for g in self.cells[c].slots.iter().flatten() {
                if new_id[g.cell] == usize::MAX {
                    new_id[g.cell] = order.len();
                    order.push(g.cell);
                    queue.push_back(g.cell);
                }
            }
        }
        for c in 0..n {
            if new_id[c] == usize::MAX {
                new_id[c] = order.len();
                order.push(c);
            }
        }
        let cells = order
            .iter()
            .map(|&old| {
                let mut cell = self.cells[old].clone();
                for g in cell.slots.iter_mut().flatten() {
                    g.cell = new_id[g.cell];
                }
                cell
            })
            .collect();
        Fish {
            cells,
            head: Some(0),
        }
    }

    pub fn is_isomorphic(&self, other: &Fish) -> bool {
        self.len() == other.len() && self.canonical() == other.canonical()
    }

    /// Sub-complex on the cells flagged in `keep`, with gluings to dropped
    /// cells removed and ids compacted; `head` must be kept.
    pub(crate) fn restrict(&self, keep: &[bool], head: CellId) -> Fish {
        let mut new_id = vec![usize::MAX; self.len()];
        let mut next = 0;
        for (c, &k) in keep.iter().enumerate() {
            if k {
                new_id[c] = next;
                next += 1;
            }
        }
        let cells = (0..self.len())
            .filter(|&c| keep[c])
            .map(|c| {
                let mut cell = self.cells[c].clone();
                for s in cell.slots.iter_mut() {
                    *s = s.and_then(|g| {
                        keep[g.cell].then_some(Gluing {
                            cell: new_id[g.cell],
                            slot: g.slot,
                        })
                    });
                }
                cell
            })
            .collect();
        Fish {
            cells,
            head: Some(new_id[head]),
        }
    }

    /// Cells reachable from `start` when the gluing at `(cell, slot)` is
    /// ignored.
    pub(crate) fn component_without(&self, start: CellId, cut: (CellId, Slot)) -> Vec<bool> {
        let mut work = self.clone();
        work.unglue(cut.0, cut.1);
        work.component_of(start)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn edge(cell: CellId, slot: Slot) -> BoundaryEdge {
        BoundaryEdge { cell, slot }
    }

    fn stats(size: usize, lsize: usize, rsize: usize, fin: usize, tails: usize) -> FishStats {
        FishStats {
            size,
            lsize,
            rsize,
            fin,
            tails,
        }
    }

    fn rule_a_fish() -> Fish {
        Fish::head_only().add_cell(GrowthRule::A(0)).unwrap()
    }

    fn rule_b_fish() -> Fish {
        Fish::head_only().add_cell(GrowthRule::B(0)).unwrap()
    }

    #[test]
    fn slot_algebra() {
        for s in Slot::ALL {
            assert_eq!(s.partner().partner(), s);
            assert_ne!(s.partner(), s);
            let mut t = s;
            for _ in 0..4 {
                t = t.next_ccw();
            }
            assert_eq!(t, s);
        }
    }

    #[test]
    fn head_only_basics() {
        let f = Fish::head_only();
        assert_eq!(f.stats().unwrap(), stats(2, 1, 1, 2, 1));
        assert_eq!(
            f.boundary().unwrap(),
            vec![edge(0, Slot::LL), edge(0, Slot::LR), edge(0, Slot::UR), edge(0, Slot::UL)]
        );
        assert_eq!(f.fin().unwrap(), vec![edge(0, Slot::LL), edge(0, Slot::LR)]);
        assert_eq!(f.embed().unwrap(), vec![(0, 0)]);
        f.validate().unwrap();
    }

    #[test]
    fn rule_a_fish_traces() {
        let f = rule_a_fish();
        f.validate().unwrap();
        assert_eq!(f.stats().unwrap(), stats(3, 1, 2, 3, 1));
        assert_eq!(
            f.boundary().unwrap(),
            vec![
                edge(0, Slot::LL),
                edge(0, Slot::LR),
                edge(1, Slot::LR),
                edge(1, Slot::UR),
                edge(1, Slot::UL),
                edge(0, Slot::UL)
            ]
        );
        assert_eq!(
            f.fin().unwrap(),
            vec![edge(0, Slot::LL), edge(0, Slot::LR), edge(1, Slot::LR)]
        );
        assert_eq!(f.embed().unwrap(), vec![(0, 0), (1, 1)]);
    }

    #[test]
    fn rule_b_fish_traces() {
        let f = rule_b_fish();
        f.validate().unwrap();
        assert_eq!(f.stats().unwrap(), stats(3, 2, 1, 3, 1));
        assert_eq!(
            f.boundary().unwrap(),
            vec![
                edge(0, Slot::LL),
                edge(1, Slot::LL),
                edge(1, Slot::LR),
                edge(1, Slot::UR),
                edge(0, Slot::UR),
                edge(0, Slot::UL)
            ]
        );
        assert_eq!(
            f.fin().unwrap(),
            vec![edge(0, Slot::LL), edge(1, Slot::LL), edge(1, Slot::LR)]
        );
        assert_eq!(f.embed().unwrap(), vec![(0, 0), (1, -1)]);
    }

    #[test]
    fn rule_c_on_a_fork() {
        let fork = rule_a_fish().add_cell(GrowthRule::B(0)).unwrap();
        let f = fork.add_cell(GrowthRule::C(1, 2)).unwrap();
        assert_eq!(f.len(), 4);
        f.validate().unwrap();
        assert_eq!(f.embed().unwrap()[3], (2, 0));
        assert_eq!(f.peel_rule(3), Some(GrowthRule::C(1, 2)));
        // 2.UR is taken now
        assert!(f.add_cell(GrowthRule::A(2)).is_err());
        assert!(fork.add_cell(GrowthRule::C(2, 1)).is_err());
    }

    #[test]
    fn growth_preconditions() {
        let f = rule_a_fish();
        assert!(matches!(f.add_cell(GrowthRule::A(0)), Err(Error::InvalidGrowth(_))));
        assert!(f.add_cell(GrowthRule::B(7)).is_err());
        assert!(Fish::empty().add_cell(GrowthRule::A(0)).is_err());
    }

    #[test]
    fn empty_fish_conventions() {
        let e = Fish::empty();
        assert_eq!(e.stats().unwrap(), FishStats::EMPTY);
        e.validate().unwrap();
        assert_eq!(e.boundary(), Err(Defect::Empty));
    }

    #[test]
    fn disconnected_complex_rejected() {
        let mut f = rule_a_fish();
        f.push_cell();
        assert_eq!(f.validate(), Err(Defect::Disconnected { cell: 2 }));
    }

    #[test]
    fn asymmetric_gluing_rejected() {
        let mut f = rule_a_fish();
        f.cells[1].set(Slot::LL, None);
        assert!(matches!(f.validate(), Err(Defect::NotInvolution { .. })));
        let mut f = rule_a_fish();
        f.cells[0].set(Slot::UR, None);
        f.cells[1].set(Slot::LL, Some(Gluing { cell: 0, slot: Slot::LR }));
        assert!(matches!(f.validate(), Err(Defect::IllTyped { .. })));
    }

    #[test]
    fn wrong_stored_head_rejected() {
        let f = Fish::from_parts(rule_a_fish().cells, Some(1));
        assert!(matches!(f.validate(), Err(Defect::HeadMismatch { .. })));
    }

    #[test]
    fn unpeelable_complex_rejected() {
        // Four cells glued UR→LL into a cycle, hung off a head by H.LR ↔ A.UL.
        // Every cycle cell has its upper-right slot glued, so none peels.
        let mut f = Fish::head_only();
        let ring: Vec<CellId> = (0..4).map(|_| f.push_cell()).collect();
        for k in 0..4 {
            f.glue(ring[k], Slot::UR, ring[(k + 1) % 4], Slot::LL);
        }
        f.glue(0, Slot::LR, ring[0], Slot::UL);
        assert_eq!(f.structural_head(), Ok(0));
        assert_eq!(f.validate(), Err(Defect::NotConstructible { remaining: 5 }));
        assert!(matches!(f.embed(), Err(Defect::InconsistentEmbedding { .. })));
    }

    #[test]
    fn canonical_forms_ignore_labels() {
        let f = rule_a_fish().add_cell(GrowthRule::B(0)).unwrap();
        // relabel by reversing ids
        let n = f.len();
        let cells = (0..n)
            .rev()
            .map(|old| {
                let mut c = f.cells[old].clone();
                for g in c.slots.iter_mut().flatten() {
                    g.cell = n - 1 - g.cell;
                }
                c
            })
            .collect();
        let g = Fish::from_parts(cells, Some(n - 1));
        g.validate().unwrap();
        assert_ne!(f, g);
        assert!(f.is_isomorphic(&g));
        assert!(!f.is_isomorphic(&rule_b_fish()));
    }
}
