//! Sequences of distinct integers, the stack-sorting operator, and the
//! permutation statistics carried through the bijection.
//!
//! Text form is comma-separated integers (`"2,4,3,1"`); the empty string is ε.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite sequence of pairwise distinct integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IntSequence {
    items: Vec<i64>,
}

/// A permutation of `1..=n`, viewed as a sequence. Length 0 is ε.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Permutation {
    items: Vec<usize>,
}

/// The seven permutation statistics. `slmax` and `sldes` are measured on the
/// stack-sorted image, the others on the permutation itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct StatVector {
    pub len: usize,
    pub lmax: usize,
    pub rmax: usize,
    pub asc: usize,
    pub des: usize,
    pub slmax: usize,
    pub sldes: usize,
}

fn check_distinct<T: Copy + Eq + std::hash::Hash + fmt::Display>(items: &[T]) -> Result<()> {
    let mut seen = HashSet::with_capacity(items.len());
    for &x in items {
        if !seen.insert(x) {
            return Err(Error::InvalidInput(format!("duplicate item {x}")));
        }
    }
    Ok(())
}

/// Stack sort by the max-splitting recursion `S(L·n·R) = S(L)·S(R)·n`,
/// unrolled onto an explicit work stack.
pub fn stack_sort_recursive<T: Ord + Copy>(items: &[T]) -> Vec<T> {
    enum Task<T> {
        Sort(usize, usize),
        Emit(T),
    }
    let mut out = Vec::with_capacity(items.len());
    let mut work = vec![Task::Sort(0, items.len())];
    while let Some(task) = work.pop() {
        match task {
            Task::Emit(x) => out.push(x),
            Task::Sort(lo, hi) if lo >= hi => {}
            Task::Sort(lo, hi) => {
                let (m, &max) = items[lo..hi]
                    .iter()
                    .enumerate()
                    .max_by_key(|&(_, x)| *x)
                    .expect("nonempty range");
                let m = lo + m;
                work.push(Task::Emit(max));
                work.push(Task::Sort(m + 1, hi));
                work.push(Task::Sort(lo, m));
            }
        }
    }
    out
}

/// Stack sort as a single pass through a stack kept increasing from top to
/// bottom: an incoming element first pops every smaller element.
pub fn stack_sort_lazy<T: Ord + Copy>(items: &[T]) -> Vec<T> {
    let mut out = Vec::with_capacity(items.len());
    let mut stack: Vec<T> = Vec::with_capacity(items.len());
    for &x in items {
        while let Some(&top) = stack.last() {
            if top < x {
                out.push(top);
                stack.pop();
            } else {
                break;
            }
        }
        stack.push(x);
    }
    while let Some(top) = stack.pop() {
        out.push(top);
    }
    out
}

fn avoids_231_slice<T: Ord + Copy>(items: &[T]) -> bool {
    let n = items.len();
    if n < 3 {
        return true;
    }
    // suffix_min[j] = min of items[j..]
    let mut suffix_min = items.to_vec();
    for j in (0..n - 1).rev() {
        suffix_min[j] = suffix_min[j].min(suffix_min[j + 1]);
    }
    for j in 1..n - 1 {
        // largest earlier element below the middle one plays the role of "2"
        let two = items[..j].iter().copied().filter(|&x| x < items[j]).max();
        if let Some(two) = two {
            if suffix_min[j + 1] < two {
                return false;
            }
        }
    }
    true
}

fn left_to_right_maxima<T: Ord + Copy>(items: &[T]) -> Vec<T> {
    let mut out = Vec::new();
    for &x in items {
        if out.last().is_none_or(|&m| x > m) {
            out.push(x);
        }
    }
    out
}

fn parse_list<T: FromStr>(s: &str) -> Result<Vec<T>>
where
    T::Err: fmt::Display,
{
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .enumerate()
        .map(|(i, tok)| {
            tok.trim().parse::<T>().map_err(|e| {
                Error::InvalidInput(format!("item {} ({:?}): {e}", i + 1, tok.trim()))
            })
        })
        .collect()
}

fn write_list<T: fmt::Display>(f: &mut fmt::Formatter<'_>, items: &[T]) -> fmt::Result {
    for (i, x) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{x}")?;
    }
    Ok(())
}

impl IntSequence {
    pub fn new(items: Vec<i64>) -> Result<Self> {
        check_distinct(&items)?;
        Ok(Self { items })
    }

    pub fn items(&self) -> &[i64] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// The stack-sorting operator `S`.
    pub fn stack_sort(&self) -> IntSequence {
        IntSequence {
            items: stack_sort_recursive(&self.items),
        }
    }

    /// Order-isomorphic permutation of `1..=len`.
    pub fn standardize(&self) -> Permutation {
        let mut order: Vec<usize> = (0..self.items.len()).collect();
        order.sort_by_key(|&i| self.items[i]);
        let mut items = vec![0; self.items.len()];
        for (rank, &i) in order.iter().enumerate() {
            items[i] = rank + 1;
        }
        Permutation { items }
    }

    pub fn avoids_231(&self) -> bool {
        avoids_231_slice(&self.items)
    }
}

impl FromStr for IntSequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        IntSequence::new(parse_list(s)?)
    }
}

impl fmt::Display for IntSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_list(f, &self.items)
    }
}

impl Permutation {
    /// Builds a permutation, checking that `items` is exactly `{1, …, n}`.
    pub fn new(items: Vec<usize>) -> Result<Self> {
        let n = items.len();
        let mut seen = vec![false; n + 1];
        for &x in &items {
            if x == 0 || x > n {
                return Err(Error::InvalidInput(format!(
                    "item {x} outside 1..={n}"
                )));
            }
            if std::mem::replace(&mut seen[x], true) {
                return Err(Error::InvalidInput(format!("duplicate item {x}")));
            }
        }
        Ok(Self { items })
    }

    pub(crate) fn from_vec_unchecked(items: Vec<usize>) -> Self {
        debug_assert!(Permutation::new(items.clone()).is_ok());
        Self { items }
    }

    /// The empty permutation ε.
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn identity(n: usize) -> Self {
        Self {
            items: (1..=n).collect(),
        }
    }

    pub fn items(&self) -> &[usize] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn to_sequence(&self) -> IntSequence {
        IntSequence {
            items: self.items.iter().map(|&x| x as i64).collect(),
        }
    }

    /// `S(self)`, which is again a permutation of the same size.
    pub fn stack_sort(&self) -> Permutation {
        Permutation {
            items: stack_sort_recursive(&self.items),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.items.iter().enumerate().all(|(i, &x)| x == i + 1)
    }

    pub fn avoids_231(&self) -> bool {
        avoids_231_slice(&self.items)
    }

    /// `S(S(p)) = id`. ε is rejected rather than answered: it serves as the
    /// decomposition atom but is not itself counted as two-stack sortable.
    pub fn is_two_stack_sortable(&self) -> Result<bool> {
        if self.is_empty() {
            return Err(Error::InvalidInput(
                "the empty permutation has no two-stack sortability".into(),
            ));
        }
        Ok(self.is_two_stack_sortable_or_empty())
    }

    /// Membership in `{ε} ∪ T`, the domain of the decomposition.
    pub(crate) fn is_two_stack_sortable_or_empty(&self) -> bool {
        let once = stack_sort_recursive(&self.items);
        let twice = stack_sort_recursive(&once);
        twice.iter().enumerate().all(|(i, &x)| x == i + 1)
    }

    /// Adds `k` to every item.
    pub fn shift_uniform(&self, k: i64) -> Result<IntSequence> {
        self.shift_with(|_| k)
    }

    /// Adds `k1` to items below `m` and `k2` to the rest; requires `k1 < k2`.
    pub fn shift_split(&self, k1: i64, m: i64, k2: i64) -> Result<IntSequence> {
        if k1 >= k2 {
            return Err(Error::InvalidInput(format!(
                "split shift needs k1 < k2, got k1={k1}, k2={k2}"
            )));
        }
        self.shift_with(|x| if x < m { k1 } else { k2 })
    }

    fn shift_with(&self, offset: impl Fn(i64) -> i64) -> Result<IntSequence> {
        let items = self
            .items
            .iter()
            .map(|&x| {
                let x = x as i64;
                x.checked_add(offset(x))
                    .ok_or_else(|| Error::InvalidInput("shift overflows i64".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(IntSequence { items })
    }

    /// Left-to-right maxima of `S(self)`, in order.
    pub fn sorted_left_to_right_maxima(&self) -> Vec<usize> {
        left_to_right_maxima(&stack_sort_recursive(&self.items))
    }

    pub fn stats(&self) -> StatVector {
        let p = &self.items;
        let n = p.len();
        if n == 0 {
            return StatVector::default();
        }
        let sorted = stack_sort_recursive(p);
        let mut pos = vec![0; n + 1];
        for (i, &x) in sorted.iter().enumerate() {
            pos[x] = i;
        }
        let asc = p.windows(2).filter(|w| w[0] < w[1]).count();
        let rmax = {
            let mut count = 0;
            let mut best = 0;
            for &x in p.iter().rev() {
                if x > best {
                    best = x;
                    count += 1;
                }
            }
            count
        };
        StatVector {
            len: n,
            lmax: left_to_right_maxima(p).len(),
            rmax,
            asc,
            des: n - 1 - asc,
            slmax: left_to_right_maxima(&sorted).len(),
            sldes: (2..=n).filter(|&a| pos[a] < pos[a - 1]).count(),
        }
    }
}

impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Permutation::new(parse_list(s)?)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_list(f, &self.items)
    }
}

impl TryFrom<&IntSequence> for Permutation {
    type Error = Error;

    fn try_from(s: &IntSequence) -> Result<Self> {
        let items = s
            .items
            .iter()
            .map(|&x| {
                usize::try_from(x)
                    .map_err(|_| Error::InvalidInput(format!("item {x} is not a positive index")))
            })
            .collect::<Result<Vec<_>>>()?;
        Permutation::new(items)
    }
}
