//! Independent oracles shared by the integration tests. Everything here is
//! written from the definitions and uses only the public API.

#![allow(dead_code)]

use std::collections::{HashMap, HashSet, VecDeque};

use stackfish::fish::{Cell, CellId, Fish, GrowthRule, Slot};

/// All permutations of `1..=n` in lexicographic order, built by inserting
/// the largest entry everywhere.
pub fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = vec![vec![]];
    for k in 1..=n {
        let mut next = Vec::with_capacity(out.len() * k);
        for p in &out {
            for pos in 0..=p.len() {
                let mut q = p.clone();
                q.insert(pos, k);
                next.push(q);
            }
        }
        out = next;
    }
    out.sort();
    out
}

/// `S(L·n·R) = S(L)·S(R)·n`, straight from the definition.
pub fn naive_stack_sort(a: &[i64]) -> Vec<i64> {
    let Some((m, &max)) = a.iter().enumerate().max_by_key(|&(_, x)| *x) else {
        return vec![];
    };
    let mut out = naive_stack_sort(&a[..m]);
    out.extend(naive_stack_sort(&a[m + 1..]));
    out.push(max);
    out
}

pub fn naive_avoids_231(a: &[i64]) -> bool {
    let n = a.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if a[k] < a[i] && a[i] < a[j] {
                    return false;
                }
            }
        }
    }
    true
}

pub fn naive_is_2ssp(p: &[usize]) -> bool {
    let a: Vec<i64> = p.iter().map(|&x| x as i64).collect();
    let s = naive_stack_sort(&naive_stack_sort(&a));
    s.iter().enumerate().all(|(i, &x)| x == i as i64 + 1)
}

pub fn lower_free(f: &Fish) -> usize {
    (0..f.len())
        .map(|c| f.is_free(c, Slot::LL) as usize + f.is_free(c, Slot::LR) as usize)
        .sum()
}

/// Every growth-rule application on `f`.
pub fn grow_all(f: &Fish) -> Vec<Fish> {
    let n = f.len();
    let mut out = Vec::new();
    for t in 0..n {
        out.extend(f.add_cell(GrowthRule::A(t)).ok());
        out.extend(f.add_cell(GrowthRule::B(t)).ok());
        for c in 0..n {
            out.extend(f.add_cell(GrowthRule::C(t, c)).ok());
        }
    }
    out
}

/// Canonical fish with at most `max_size` lower free edges, obtained from the
/// head cell by growth alone, grouped by number of lower free edges. Growth
/// never decreases that number, so pruning is exact.
pub fn growth_census(max_size: usize) -> Vec<Vec<Fish>> {
    let mut seen: HashSet<Fish> = HashSet::new();
    let mut queue = VecDeque::from([Fish::head_only().canonical()]);
    seen.insert(queue[0].clone());
    while let Some(f) = queue.pop_front() {
        for g in grow_all(&f) {
            if lower_free(&g) > max_size {
                continue;
            }
            let g = g.canonical();
            if seen.insert(g.clone()) {
                queue.push_back(g);
            }
        }
    }
    let mut by_size = vec![Vec::new(); max_size + 1];
    for f in seen {
        by_size[lower_free(&f)].push(f);
    }
    for row in &mut by_size {
        row.sort_by_key(|f| format!("{f:?}"));
    }
    by_size
}

fn gluing_structure_ok(f: &Fish) -> bool {
    let n = f.len();
    for c in 0..n {
        for s in Slot::ALL {
            if let Some(g) = f.gluing(c, s) {
                if g.cell >= n || g.slot != s.partner() {
                    return false;
                }
                match f.gluing(g.cell, g.slot) {
                    Some(back) if back.cell == c && back.slot == s => {}
                    _ => return false,
                }
            }
        }
    }
    true
}

fn connected(f: &Fish) -> bool {
    let n = f.len();
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(c) = stack.pop() {
        for s in Slot::ALL {
            if let Some(g) = f.gluing(c, s) {
                if !seen[g.cell] {
                    seen[g.cell] = true;
                    stack.push(g.cell);
                }
            }
        }
    }
    seen.into_iter().all(|b| b)
}

fn left_free(f: &Fish, c: CellId) -> bool {
    f.is_free(c, Slot::UL) && f.is_free(c, Slot::LL)
}

/// Whether `z` could have been the last cell added to the cells in `alive`.
fn last_added(f: &Fish, alive: u64, z: CellId) -> bool {
    let glued = |c: CellId, s: Slot| f.gluing(c, s).filter(|g| alive >> g.cell & 1 == 1);
    if glued(z, Slot::UR).is_some() || glued(z, Slot::LR).is_some() {
        return false;
    }
    match (glued(z, Slot::UL), glued(z, Slot::LL)) {
        (None, None) => false,
        (Some(_), None) | (None, Some(_)) => true,
        (Some(b), Some(c)) => (0..f.len()).any(|a| {
            alive >> a & 1 == 1
                && a != z
                && glued(a, Slot::UR).is_some_and(|g| g.cell == b.cell)
                && glued(a, Slot::LR).is_some_and(|g| g.cell == c.cell)
        }),
    }
}

/// Backtracking search for a growth order: tries every removable cell and
/// memoizes on the set of remaining cells.
pub fn backtracking_constructible(f: &Fish) -> bool {
    if f.is_empty() {
        return f.head().is_none();
    }
    assert!(f.len() < 64);
    if !gluing_structure_ok(f) || !connected(f) {
        return false;
    }
    let heads: Vec<CellId> = (0..f.len()).filter(|&c| left_free(f, c)).collect();
    if heads.len() != 1 || f.head() != Some(heads[0]) {
        return false;
    }
    let head = heads[0];
    let full = if f.len() == 64 { u64::MAX } else { (1u64 << f.len()) - 1 };
    let mut memo: HashMap<u64, bool> = HashMap::new();
    search(f, head, full, &mut memo)
}

fn search(f: &Fish, head: CellId, alive: u64, memo: &mut HashMap<u64, bool>) -> bool {
    if alive == 1 << head {
        return true;
    }
    if let Some(&r) = memo.get(&alive) {
        return r;
    }
    let r = (0..f.len()).any(|z| {
        z != head
            && alive >> z & 1 == 1
            && last_added(f, alive, z)
            && search(f, head, alive & !(1 << z), memo)
    });
    memo.insert(alive, r);
    r
}

/// Copy of `f` with one gluing changed, built through the public API.
pub fn with_gluing(f: &Fish, cell: CellId, slot: Slot, g: Option<stackfish::fish::Gluing>) -> Fish {
    let mut cells: Vec<Cell> = f.cells().to_vec();
    cells[cell].set(slot, g);
    Fish::from_parts(cells, f.head())
}

use stackfish::construct::{c1_bullet, c2_bullet};
use stackfish::decomp::{DecompKind, DecompTree};
use stackfish::fish::FishStats;

/// Fish built by the two constructions, by number of tree nodes; row 0 is ε•.
/// The last row is not needed as an argument later, so `visit` sees it
/// without it being stored.
pub fn construction_rows(
    nmax: usize,
    mut visit: impl FnMut(&Construction<'_>, &Fish),
) -> Vec<Vec<(DecompTree, Fish)>> {
    let mut rows: Vec<Vec<(DecompTree, Fish)>> = vec![vec![(DecompTree::Empty, Fish::empty())]];
    for n in 1..=nmax {
        let mut row = Vec::new();
        for k in 0..n {
            for (t1, f1) in &rows[k] {
                for (t2, f2) in &rows[n - 1 - k] {
                    let mut kinds = vec![DecompKind::C1];
                    if !f1.is_empty() && !f2.is_empty() {
                        let fin2 = f2.fin().unwrap().len();
                        kinds.extend((1..fin2).map(DecompKind::C2));
                    }
                    for kind in kinds {
                        let f = match kind {
                            DecompKind::C1 => c1_bullet(f1, f2).unwrap(),
                            DecompKind::C2(i) => c2_bullet(f1, f2, i).unwrap(),
                        };
                        visit(&Construction { kind, p1: f1, p2: f2 }, &f);
                        if n < nmax {
                            row.push((DecompTree::node(kind, t1.clone(), t2.clone()), f));
                        }
                    }
                }
            }
        }
        rows.push(row);
    }
    rows
}

pub struct Construction<'a> {
    pub kind: DecompKind,
    pub p1: &'a Fish,
    pub p2: &'a Fish,
}

/// The statistics a construction must produce, from those of its arguments.
pub fn expected_fish_stats(c: &Construction<'_>) -> FishStats {
    let a = c.p1.stats().unwrap();
    let b = c.p2.stats().unwrap();
    let additive = FishStats {
        size: a.size + b.size,
        lsize: a.lsize + b.lsize,
        rsize: a.rsize + b.rsize,
        fin: a.fin + b.fin,
        tails: a.tails + b.tails,
    };
    match c.kind {
        DecompKind::C1 => FishStats {
            lsize: if c.p1.is_empty() { b.lsize } else { additive.lsize },
            rsize: if c.p2.is_empty() { a.rsize } else { additive.rsize },
            tails: additive.tails - 1,
            ..additive
        },
        DecompKind::C2(i) => FishStats {
            fin: additive.fin - i,
            ..additive
        },
    }
}

/// Matches every grown fish with at most `max_size` lower free edges against
/// all constructions from smaller grown fish, and compares the unique match
/// with [`stackfish::construct::waspwaist_decompose`]. Returns descriptions
/// of the disagreements.
pub fn matching_oracle_failures(max_size: usize) -> Vec<String> {
    let census = growth_census(max_size);
    let mut by_size = census.clone();
    by_size[1] = vec![Fish::empty()];
    let mut matches: HashMap<Fish, Vec<(DecompKind, Fish, Fish)>> = HashMap::new();
    for size in 2..=max_size {
        for s1 in 1..size {
            for p1 in &by_size[s1] {
                for p2 in &by_size[size - s1] {
                    let f = c1_bullet(p1, p2).unwrap();
                    matches.entry(f).or_default().push((DecompKind::C1, p1.clone(), p2.clone()));
                    if p1.is_empty() || p2.is_empty() {
                        continue;
                    }
                    for i in 1..p2.fin().unwrap().len() {
                        let f = c2_bullet(p1, p2, i).unwrap();
                        matches.entry(f).or_default().push((DecompKind::C2(i), p1.clone(), p2.clone()));
                    }
                }
            }
        }
    }
    let mut failures = Vec::new();
    for f in census.iter().flatten() {
        let found = matches.get(f).map_or(&[][..], |v| &v[..]);
        if found.len() != 1 {
            failures.push(format!("{f:?} has {} constructions", found.len()));
            continue;
        }
        let (kind, p1, p2) = &found[0];
        match stackfish::construct::waspwaist_decompose(f) {
            Ok(d) if d.kind == *kind && d.p1.is_isomorphic(p1) && d.p2.is_isomorphic(p2) => {}
            Ok(d) => failures.push(format!("{f:?}: decomposed as {}, expected {kind}", d.kind)),
            Err(e) => failures.push(format!("{f:?}: {e}")),
        }
    }
    failures
}
