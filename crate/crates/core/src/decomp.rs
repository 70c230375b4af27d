//! Recursive decomposition of two-stack sortable permutations around their
//! maximum, the two inverse constructions, and the decomposition tree that
//! records a full recursion.
//!
//! A permutation `π = π_ℓ · n · π_r` decomposes into the standardizations of
//! `π_ℓ` and `π_r`. Reassembly is either [`construct_c1`], which stacks the
//! right part above the left one, or [`construct_c2`], which lifts the largest
//! left element into the right part just above its `i`-th left-to-right
//! maximum after sorting.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// Which construction produced a permutation (or fish).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DecompKind {
    C1,
    /// Carries the 1-based rank of the left-to-right maximum used.
    C2(usize),
}

/// Recursion certificate shared by permutations and fighting fish.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DecompTree {
    Empty,
    Node {
        kind: DecompKind,
        left: Box<DecompTree>,
        right: Box<DecompTree>,
    },
}

fn require_tssp_or_empty(p: &Permutation, what: &str) -> Result<()> {
    if p.is_two_stack_sortable_or_empty() {
        Ok(())
    } else {
        Err(Error::NotTwoStackSortable(format!("{what} ({p})")))
    }
}

fn require_tssp(p: &Permutation) -> Result<()> {
    if p.is_empty() {
        return Err(Error::InvalidInput("expected a nonempty permutation".into()));
    }
    require_tssp_or_empty(p, "argument")
}

fn split_at_max(p: &Permutation) -> (&[usize], &[usize]) {
    let n = p.len();
    let items = p.items();
    let at = items.iter().position(|&x| x == n).expect("n occurs in a permutation");
    (&items[..at], &items[at + 1..])
}

fn standardize_slice(items: &[usize]) -> Permutation {
    let mut order: Vec<usize> = (0..items.len()).collect();
    order.sort_by_key(|&i| items[i]);
    let mut out = vec![0; items.len()];
    for (rank, &i) in order.iter().enumerate() {
        out[i] = rank + 1;
    }
    Permutation::from_vec_unchecked(out)
}

/// `D(p) = (P(π_ℓ), P(π_r))` for a nonempty two-stack sortable `p`.
pub fn decompose(p: &Permutation) -> Result<(Permutation, Permutation)> {
    require_tssp(p)?;
    Ok(decompose_unchecked(p))
}

pub(crate) fn decompose_unchecked(p: &Permutation) -> (Permutation, Permutation) {
    let (left, right) = split_at_max(p);
    (standardize_slice(left), standardize_slice(right))
}

/// Decides which construction rebuilds `p` from `decompose(p)`.
pub fn classify(p: &Permutation) -> Result<DecompKind> {
    require_tssp(p)?;
    let (left, right) = split_at_max(p);
    let Some(&min_right) = right.iter().min() else {
        return Ok(DecompKind::C1);
    };
    let mut above = left.iter().copied().filter(|&x| x > min_right);
    let Some(m) = above.next() else {
        return Ok(DecompKind::C1);
    };
    if let Some(m2) = above.next() {
        return Err(Error::Inconsistent(format!(
            "{m} and {m2} both precede {} and exceed it after the maximum of {p}",
            min_right
        )));
    }
    // m' is the largest right element below m; its standardized value must be
    // a left-to-right maximum of S(π2), and its rank among those is i.
    let m_prime = right
        .iter()
        .copied()
        .filter(|&x| x < m)
        .max()
        .expect("min_right < m");
    let image = right.iter().filter(|&&x| x <= m_prime).count();
    let p2 = standardize_slice(right);
    let maxima = p2.sorted_left_to_right_maxima();
    match maxima.iter().position(|&a| a == image) {
        Some(idx) => Ok(DecompKind::C2(idx + 1)),
        None => Err(Error::Inconsistent(format!(
            "{image} is not a left-to-right maximum of S({p2}) in {p}"
        ))),
    }
}

/// `π1 · (k+ℓ+1) · π2^{+k}`; either argument may be ε.
pub fn construct_c1(p1: &Permutation, p2: &Permutation) -> Result<Permutation> {
    require_tssp_or_empty(p1, "left part")?;
    require_tssp_or_empty(p2, "right part")?;
    Ok(c1_unchecked(p1, p2))
}

pub(crate) fn c1_unchecked(p1: &Permutation, p2: &Permutation) -> Permutation {
    let k = p1.len();
    let n = k + p2.len() + 1;
    let mut items = Vec::with_capacity(n);
    items.extend_from_slice(p1.items());
    items.push(n);
    items.extend(p2.items().iter().map(|&x| x + k));
    Permutation::from_vec_unchecked(items)
}

/// `π1^{+(0,k,a_i)} · (k+ℓ+1) · π2^{+(k−1,a_i+1,k)}` with `a_i` the `i`-th
/// left-to-right maximum of `S(π2)`.
pub fn construct_c2(p1: &Permutation, p2: &Permutation, i: usize) -> Result<Permutation> {
    if p1.is_empty() || p2.is_empty() {
        return Err(Error::InvalidInput("C2 needs two nonempty parts".into()));
    }
    require_tssp_or_empty(p1, "left part")?;
    require_tssp_or_empty(p2, "right part")?;
    let maxima = p2.sorted_left_to_right_maxima();
    if i == 0 || i > maxima.len() {
        return Err(Error::InvalidInput(format!(
            "C2 index {i} outside 1..={}",
            maxima.len()
        )));
    }
    Ok(c2_with_maximum(p1, p2, maxima[i - 1]))
}

pub(crate) fn c2_unchecked(p1: &Permutation, p2: &Permutation, i: usize) -> Permutation {
    c2_with_maximum(p1, p2, p2.sorted_left_to_right_maxima()[i - 1])
}

fn c2_with_maximum(p1: &Permutation, p2: &Permutation, a_i: usize) -> Permutation {
    let k = p1.len();
    let n = k + p2.len() + 1;
    let mut items = Vec::with_capacity(n);
    items.extend(p1.items().iter().map(|&x| if x < k { x } else { x + a_i }));
    items.push(n);
    items.extend(
        p2.items()
            .iter()
            .map(|&x| if x < a_i + 1 { x + k - 1 } else { x + k }),
    );
    Permutation::from_vec_unchecked(items)
}

/// Full decomposition tree of `p` (ε gives [`DecompTree::Empty`]).
pub fn tree_of_perm(p: &Permutation) -> Result<DecompTree> {
    if p.is_empty() {
        return Ok(DecompTree::Empty);
    }
    let kind = classify(p)?;
    let (p1, p2) = decompose_unchecked(p);
    Ok(DecompTree::node(kind, tree_of_perm(&p1)?, tree_of_perm(&p2)?))
}

/// Folds the constructions over `t`, checking every C2 index against the
/// `slmax` of the permutation built for its right child.
pub fn perm_of_tree(t: &DecompTree) -> Result<Permutation> {
    match t {
        DecompTree::Empty => Ok(Permutation::empty()),
        DecompTree::Node { kind, left, right } => {
            let p1 = perm_of_tree(left)?;
            let p2 = perm_of_tree(right)?;
            match *kind {
                DecompKind::C1 => Ok(c1_unchecked(&p1, &p2)),
                DecompKind::C2(i) => {
                    if p1.is_empty() || p2.is_empty() {
                        return Err(Error::InvalidTree(
                            "C2 node with an empty child".into(),
                        ));
                    }
                    let slmax = p2.stats().slmax;
                    if i == 0 || i > slmax {
                        return Err(Error::InvalidTree(format!(
                            "C2 index {i} outside 1..={slmax}"
                        )));
                    }
                    Ok(c2_unchecked(&p1, &p2, i))
                }
            }
        }
    }
}

impl DecompTree {
    pub fn leaf() -> Self {
        Self::node(DecompKind::C1, DecompTree::Empty, DecompTree::Empty)
    }

    pub fn node(kind: DecompKind, left: DecompTree, right: DecompTree) -> Self {
        DecompTree::Node {
            kind,
            left: Box::new(left),
            right: Box::new(right),
        }
    }

    /// Number of construction nodes, equal to the permutation length.
    pub fn size(&self) -> usize {
        match self {
            DecompTree::Empty => 0,
            DecompTree::Node { left, right, .. } => 1 + left.size() + right.size(),
        }
    }

    pub fn is_empty(&self) -> bool {
        matches!(self, DecompTree::Empty)
    }
}

impl fmt::Display for DecompKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecompKind::C1 => f.write_str("C1"),
            DecompKind::C2(i) => write!(f, "C2:{i}"),
        }
    }
}

impl fmt::Display for DecompTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecompTree::Empty => f.write_str("E"),
            DecompTree::Node { kind, left, right } => write!(f, "({kind} {left} {right})"),
        }
    }
}

impl FromStr for DecompTree {
    type Err = Error;

    /// Parses `E`, `(C1 l r)` and `(C2:i l r)`.
    fn from_str(s: &str) -> Result<Self> {
        let tokens = tokenize(s);
        let mut pos = 0;
        let tree = parse_tree(&tokens, &mut pos)?;
        if pos != tokens.len() {
            return Err(Error::InvalidInput(format!(
                "trailing input after tree at token {pos}"
            )));
        }
        Ok(tree)
    }
}

fn tokenize(s: &str) -> Vec<String> {
    s.replace('(', " ( ")
        .replace(')', " ) ")
        .split_whitespace()
        .map(str::to_owned)
        .collect()
}

fn parse_tree(tokens: &[String], pos: &mut usize) -> Result<DecompTree> {
    let tok = tokens
        .get(*pos)
        .ok_or_else(|| Error::InvalidInput("unexpected end of tree".into()))?;
    *pos += 1;
    match tok.as_str() {
        "E" => Ok(DecompTree::Empty),
        "(" => {
            let head = tokens
                .get(*pos)
                .ok_or_else(|| Error::InvalidInput("unexpected end of tree".into()))?;
            *pos += 1;
            let kind = match head.as_str() {
                "C1" => DecompKind::C1,
                h => {
                    let i = h
                        .strip_prefix("C2:")
                        .and_then(|i| i.parse::<usize>().ok())
                        .ok_or_else(|| {
                            Error::InvalidInput(format!("bad node label {h:?}"))
                        })?;
                    DecompKind::C2(i)
                }
            };
            let left = parse_tree(tokens, pos)?;
            let right = parse_tree(tokens, pos)?;
            match tokens.get(*pos).map(String::as_str) {
                Some(")") => {
                    *pos += 1;
                    Ok(DecompTree::node(kind, left, right))
                }
                _ => Err(Error::InvalidInput(format!("expected ')' at token {pos}"))),
            }
        }
        other => Err(Error::InvalidInput(format!("unexpected token {other:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn perm(s: &str) -> Permutation {
        s.parse().unwrap()
    }

    #[test]
    fn decompose_examples() {
        assert_eq!(decompose(&perm("1,2")).unwrap(), (perm("1"), perm("")));
        assert_eq!(decompose(&perm("2,4,3,1")).unwrap(), (perm("1"), perm("2,1")));
        assert_eq!(decompose(&perm("1")).unwrap(), (perm(""), perm("")));
        assert!(matches!(
            decompose(&perm("2,3,4,1")),
            Err(Error::NotTwoStackSortable(_))
        ));
        assert!(decompose(&perm("")).is_err());
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(&perm("1,2")).unwrap(), DecompKind::C1);
        assert_eq!(classify(&perm("2,4,3,1")).unwrap(), DecompKind::C2(1));
        assert_eq!(classify(&perm("2,3,1")).unwrap(), DecompKind::C2(1));
        assert!(classify(&perm("2,3,4,1")).is_err());
    }

    #[test]
    fn construct_examples() {
        assert_eq!(construct_c1(&perm(""), &perm("")).unwrap(), perm("1"));
        assert_eq!(construct_c1(&perm("1"), &perm("1")).unwrap(), perm("1,3,2"));
        assert_eq!(construct_c1(&perm(""), &perm("1")).unwrap(), perm("2,1"));
        assert_eq!(
            construct_c2(&perm("1"), &perm("2,1"), 1).unwrap(),
            perm("2,4,3,1")
        );
        assert_eq!(construct_c2(&perm("1"), &perm("1"), 1).unwrap(), perm("2,3,1"));
        assert_eq!(perm("2,3,1").stats().slmax, 2);
        assert!(construct_c2(&perm("1"), &perm("1"), 2).is_err());
        assert!(construct_c2(&perm("1"), &perm("1"), 0).is_err());
        assert!(construct_c2(&perm(""), &perm("1"), 1).is_err());
        assert!(matches!(
            construct_c1(&perm("2,3,4,1"), &perm("")),
            Err(Error::NotTwoStackSortable(_))
        ));
    }

    #[test]
    fn c2_is_a_tssp_for_every_index() {
        // (2,1) has S = (1,2): two left-to-right maxima.
        for i in 1..=2 {
            let p = construct_c2(&perm("1,2"), &perm("2,1"), i).unwrap();
            assert!(p.is_two_stack_sortable().unwrap(), "{p}");
            assert_eq!(classify(&p).unwrap(), DecompKind::C2(i));
        }
    }

    #[test]
    fn tree_examples() {
        assert_eq!(tree_of_perm(&perm("")).unwrap(), DecompTree::Empty);
        assert_eq!(tree_of_perm(&perm("1")).unwrap(), DecompTree::leaf());
        let t = tree_of_perm(&perm("2,4,3,1")).unwrap();
        assert_eq!(t.to_string(), "(C2:1 (C1 E E) (C1 E (C1 E E)))");
        assert_eq!(perm_of_tree(&t).unwrap(), perm("2,4,3,1"));
        assert_eq!(perm_of_tree(&DecompTree::Empty).unwrap(), perm(""));
        assert_eq!(perm_of_tree(&DecompTree::leaf()).unwrap(), perm("1"));
    }

    #[test]
    fn tree_text_round_trip() {
        let src = "(C2:2 (C1 E E) (C1 (C1 E E) E))";
        let t: DecompTree = src.parse().unwrap();
        assert_eq!(t.to_string(), src);
        assert_eq!(t.size(), 4);
        assert!("(C3 E E)".parse::<DecompTree>().is_err());
        assert!("(C1 E".parse::<DecompTree>().is_err());
        assert!("E E".parse::<DecompTree>().is_err());
    }

    #[test]
    fn invalid_trees_rejected() {
        let bad: DecompTree = "(C2:3 (C1 E E) (C1 E E))".parse().unwrap();
        assert!(matches!(perm_of_tree(&bad), Err(Error::InvalidTree(_))));
        let bad: DecompTree = "(C2:1 E (C1 E E))".parse().unwrap();
        assert!(matches!(perm_of_tree(&bad), Err(Error::InvalidTree(_))));
    }
}
