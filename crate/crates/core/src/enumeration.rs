//! Generators for two-stack sortable permutations, closed-form counts, and the
//! exhaustive cross-check harness.

use std::collections::{BTreeMap, HashSet};

use serde::Serialize;
use serde_json::{json, Value};

use crate::bijection::{phi, phi_inverse, TransferReport};
use crate::decomp::{classify, decompose_unchecked, perm_of_tree, DecompKind, DecompTree};
use crate::decomp::{c1_unchecked, c2_unchecked};
use crate::error::{Error, Result};
use crate::perm::{stack_sort_lazy, Permutation, StatVector};

/// Largest size accepted by the brute-force generator.
pub const BRUTE_FORCE_LIMIT: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Filter all of `S_n` through two stack passes.
    Brute,
    /// Apply the two constructions to every pair of smaller permutations.
    Grammar,
}

/// All two-stack sortable permutations of size `n`, in lexicographic order.
pub fn enumerate_2ssp(n: usize, method: Method) -> Result<Vec<Permutation>> {
    if n == 0 {
        return Err(Error::InvalidInput("size must be at least 1".into()));
    }
    match method {
        Method::Brute => brute_force(n, 1),
        Method::Grammar => {
            let mut perms: Vec<_> = grammar_table(n)?
                .pop()
                .expect("table has n + 1 rows")
                .into_iter()
                .map(|e| e.perm)
                .collect();
            perms.sort();
            Ok(perms)
        }
    }
}

fn next_permutation(a: &mut [usize]) -> bool {
    let Some(i) = a.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = a.iter().rposition(|&x| x > a[i]).expect("a[i+1] > a[i]");
    a.swap(i, j);
    a[i + 1..].reverse();
    true
}

fn sorts_twice(items: &[usize]) -> bool {
    stack_sort_lazy(&stack_sort_lazy(items))
        .iter()
        .enumerate()
        .all(|(idx, &x)| x == idx + 1)
}

/// Scans the permutations of size `n` starting with `first`.
fn scan_first(n: usize, first: usize) -> Vec<Permutation> {
    let mut rest: Vec<usize> = (1..=n).filter(|&x| x != first).collect();
    let mut buf = Vec::with_capacity(n);
    let mut found = Vec::new();
    loop {
        buf.clear();
        buf.push(first);
        buf.extend_from_slice(&rest);
        if sorts_twice(&buf) {
            found.push(Permutation::from_vec_unchecked(buf.clone()));
        }
        if !next_permutation(&mut rest) {
            return found;
        }
    }
}

/// Brute force over `S_n`; the first entries are dealt out round-robin to
/// `workers` threads.
pub fn brute_force(n: usize, workers: usize) -> Result<Vec<Permutation>> {
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::Resource(format!(
            "brute force is limited to n <= {BRUTE_FORCE_LIMIT}, got {n}"
        )));
    }
    if n == 0 {
        return Ok(vec![Permutation::empty()]);
    }
    let workers = workers.clamp(1, n);
    let mut buckets: Vec<Vec<Permutation>> = vec![Vec::new(); n];
    if workers == 1 {
        for first in 1..=n {
            buckets[first - 1] = scan_first(n, first);
        }
    } else {
        std::thread::scope(|scope| {
            let handles: Vec<_> = (0..workers)
                .map(|w| {
                    scope.spawn(move || {
                        (1..=n)
                            .filter(|f| (f - 1) % workers == w)
                            .map(|f| (f, scan_first(n, f)))
                            .collect::<Vec<_>>()
                    })
                })
                .collect();
            for h in handles {
                for (f, found) in h.join().expect("worker panicked") {
                    buckets[f - 1] = found;
                }
            }
        });
    }
    Ok(buckets.into_iter().flatten().collect())
}

/// A permutation produced by the grammar together with its construction tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrammarEntry {
    pub tree: DecompTree,
    pub perm: Permutation,
    pub slmax: usize,
}

/// Rows `0..=nmax`; row `n` holds every construction of size `n` (row 0 is ε).
pub fn grammar_table(nmax: usize) -> Result<Vec<Vec<GrammarEntry>>> {
    if nmax > 12 {
        return Err(Error::Resource(format!(
            "grammar generation is limited to n <= 12, got {nmax}"
        )));
    }
    let mut rows: Vec<Vec<GrammarEntry>> = vec![vec![GrammarEntry {
        tree: DecompTree::Empty,
        perm: Permutation::empty(),
        slmax: 0,
    }]];
    for n in 1..=nmax {
        let mut row = Vec::new();
        for k in 0..n {
            for a in &rows[k] {
                for b in &rows[n - 1 - k] {
                    row.push(GrammarEntry {
                        tree: DecompTree::node(DecompKind::C1, a.tree.clone(), b.tree.clone()),
                        perm: c1_unchecked(&a.perm, &b.perm),
                        slmax: a.slmax + b.slmax + 1,
                    });
                    if a.perm.is_empty() || b.perm.is_empty() {
                        continue;
                    }
                    for i in 1..=b.slmax {
                        row.push(GrammarEntry {
                            tree: DecompTree::node(
                                DecompKind::C2(i),
                                a.tree.clone(),
                                b.tree.clone(),
                            ),
                            perm: c2_unchecked(&a.perm, &b.perm, i),
                            slmax: a.slmax + b.slmax + 1 - i,
                        });
                    }
                }
            }
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Binomial coefficient with overflow detection.
pub fn binomial(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for j in 0..k {
        acc = acc.checked_mul(u128::from(n - j))? / u128::from(j + 1);
    }
    Some(acc)
}

fn exact_div(num: u128, den: u128) -> u128 {
    assert!(num.is_multiple_of(den), "{num} is not divisible by {den}");
    num / den
}

/// `2/((n+1)(3n+1)) · C(3n+1, n)`.
pub fn count_formula(n: usize) -> u128 {
    let n = n as u64;
    let c = binomial(3 * n + 1, n).expect("binomial overflow");
    let den = u128::from((n + 1) * (3 * n + 1));
    exact_div(c.checked_mul(2).expect("overflow"), den)
}

/// `1/((i+1)(j+1)) · C(2i+j+1, j) · C(i+2j+1, i)`.
pub fn refined_count(i: usize, j: usize) -> u128 {
    let (i, j) = (i as u64, j as u64);
    let a = binomial(2 * i + j + 1, j).expect("binomial overflow");
    let b = binomial(i + 2 * j + 1, i).expect("binomial overflow");
    let den = u128::from((i + 1) * (j + 1));
    exact_div(a.checked_mul(b).expect("overflow"), den)
}

/// Histograms of a family of permutations.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CountTable {
    pub by_n: BTreeMap<usize, u128>,
    pub by_asc_des: BTreeMap<(usize, usize), u128>,
    pub by_full_stats: BTreeMap<StatVector, u128>,
}

impl CountTable {
    pub fn add(&mut self, p: &Permutation) {
        let st = p.stats();
        *self.by_n.entry(st.len).or_default() += 1;
        *self.by_asc_des.entry((st.asc, st.des)).or_default() += 1;
        *self.by_full_stats.entry(st).or_default() += 1;
    }

    pub fn merge(&mut self, other: &CountTable) {
        for (k, v) in &other.by_n {
            *self.by_n.entry(*k).or_default() += v;
        }
        for (k, v) in &other.by_asc_des {
            *self.by_asc_des.entry(*k).or_default() += v;
        }
        for (k, v) in &other.by_full_stats {
            *self.by_full_stats.entry(*k).or_default() += v;
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "by_n": self.by_n.iter().map(|(n, c)| json!({"n": n, "count": c.to_string()})).collect::<Vec<_>>(),
            "by_asc_des": self.by_asc_des.iter()
                .map(|((a, d), c)| json!({"asc": a, "des": d, "count": c.to_string()}))
                .collect::<Vec<_>>(),
        })
    }
}

impl<'a> FromIterator<&'a Permutation> for CountTable {
    fn from_iter<I: IntoIterator<Item = &'a Permutation>>(iter: I) -> Self {
        let mut t = CountTable::default();
        for p in iter {
            t.add(p);
        }
        t
    }
}

pub type ClassifyFn = fn(&Permutation) -> Result<DecompKind>;

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub workers: usize,
    /// Replaceable so that the harness itself can be mutation-tested.
    pub classify: ClassifyFn,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            workers: 1,
            classify,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub checked: usize,
    pub counterexample: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub nmax: usize,
    pub permutations_checked: usize,
    pub checks: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| !c.passed)
    }
}

impl std::fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(
            f,
            "verify up to n = {}: {} permutations",
            self.nmax, self.permutations_checked
        )?;
        for c in &self.checks {
            write!(
                f,
                "{:<28} {} ({} checked)",
                c.name,
                if c.passed { "pass" } else { "FAIL" },
                c.checked
            )?;
            if let Some(ce) = &c.counterexample {
                write!(f, " first counterexample: {ce}")?;
            }
            writeln!(f)?;
        }
        write!(f, "overall: {}", if self.passed() { "pass" } else { "FAIL" })
    }
}

struct Check {
    name: &'static str,
    checked: usize,
    counterexample: Option<String>,
}

impl Check {
    fn new(name: &'static str) -> Self {
        Check {
            name,
            checked: 0,
            counterexample: None,
        }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok && self.counterexample.is_none() {
            self.counterexample = Some(what());
        }
    }

    fn finish(self) -> CheckOutcome {
        CheckOutcome {
            name: self.name,
            passed: self.counterexample.is_none(),
            checked: self.checked,
            counterexample: self.counterexample,
        }
    }
}

fn tree_with(p: &Permutation, classify: ClassifyFn) -> Result<DecompTree> {
    if p.is_empty() {
        return Ok(DecompTree::Empty);
    }
    let kind = classify(p)?;
    let (p1, p2) = decompose_unchecked(p);
    Ok(DecompTree::node(
        kind,
        tree_with(&p1, classify)?,
        tree_with(&p2, classify)?,
    ))
}

/// Checks the stack-sort, counting, decomposition and bijection claims on
/// every two-stack sortable permutation of size `1..=nmax`.
pub fn verify_all(nmax: usize) -> Result<VerifyReport> {
    verify_with(nmax, &VerifyOptions::default())
}

pub fn verify_with(nmax: usize, opts: &VerifyOptions) -> Result<VerifyReport> {
    if nmax == 0 || nmax > BRUTE_FORCE_LIMIT {
        return Err(Error::Resource(format!(
            "verify needs 1 <= nmax <= {BRUTE_FORCE_LIMIT}, got {nmax}"
        )));
    }
    let grammar = grammar_table(nmax)?;
    let mut sort_twice = Check::new("stack-sort-twice");
    let mut counts = Check::new("count-formula");
    let mut refined = Check::new("refined-count");
    let mut grammar_eq = Check::new("grammar-equals-brute-force");
    let mut round_trip = Check::new("decomposition-round-trip");
    let mut slmax_rec = Check::new("slmax-recursion");
    let mut transfer = Check::new("statistic-transfer");
    let mut inverse = Check::new("phi-inverse-round-trip");
    let mut distinct = Check::new("phi-injective");
    let mut total = 0;

    for n in 1..=nmax {
        let perms = brute_force(n, opts.workers)?;
        total += perms.len();

        counts.record(perms.len() as u128 == count_formula(n), || {
            format!("n = {n}: {} found, formula {}", perms.len(), count_formula(n))
        });

        let table: CountTable = perms.iter().collect();
        for i in 0..n {
            let j = n - 1 - i;
            let got = table.by_asc_des.get(&(i, j)).copied().unwrap_or(0);
            let mirror = table.by_asc_des.get(&(j, i)).copied().unwrap_or(0);
            refined.record(got == refined_count(i, j) && got == mirror, || {
                format!("asc {i}, des {j}: {got} found, formula {}", refined_count(i, j))
            });
        }

        let mut from_grammar: Vec<Permutation> =
            grammar[n].iter().map(|e| e.perm.clone()).collect();
        from_grammar.sort();
        let same = from_grammar == perms;
        grammar_eq.record(same, || {
            let missing = perms.iter().find(|p| from_grammar.binary_search(p).is_err());
            let extra = from_grammar.iter().find(|p| perms.binary_search(p).is_err());
            match (missing, extra) {
                (Some(p), _) => format!("{p} missing from the grammar"),
                (None, Some(p)) => format!("{p} produced by the grammar only"),
                _ => format!("n = {n}: duplicate grammar output"),
            }
        });

        let mut images = HashSet::with_capacity(perms.len());
        for p in &perms {
            let ok = sorts_twice(p.items());
            sort_twice.record(ok, || p.to_string());

            let rebuilt = tree_with(p, opts.classify).and_then(|t| Ok((perm_of_tree(&t)?, t)));
            let tree = match &rebuilt {
                Ok((q, t)) if q == p => {
                    round_trip.record(true, String::new);
                    Some(t)
                }
                Ok((q, _)) => {
                    round_trip.record(false, || format!("{p} rebuilds as {q}"));
                    None
                }
                Err(e) => {
                    round_trip.record(false, || format!("{p}: {e}"));
                    None
                }
            };
            if let Some(DecompTree::Node { kind, .. }) = tree {
                let (p1, p2) = decompose_unchecked(p);
                let (s, s1, s2) = (p.stats().slmax, p1.stats().slmax, p2.stats().slmax);
                let expected = match *kind {
                    DecompKind::C1 => Some(s1 + s2 + 1),
                    DecompKind::C2(i) => (s1 + s2 + 1).checked_sub(i),
                };
                slmax_rec.record(expected == Some(s), || {
                    format!("{p}: slmax {s}, recursion gives {expected:?}")
                });
            }

            match phi(p) {
                Ok(f) => {
                    let report = f
                        .validate()
                        .map_err(Error::from)
                        .and_then(|()| Ok(TransferReport::from_stats(p.stats(), f.stats()?)));
                    match report {
                        Ok(r) => transfer.record(r.passed(), || format!("{p}: {r:?}")),
                        Err(e) => transfer.record(false, || format!("{p}: {e}")),
                    }
                    match phi_inverse(&f) {
                        Ok(q) => inverse.record(&q == p, || format!("{p} comes back as {q}")),
                        Err(e) => inverse.record(false, || format!("{p}: {e}")),
                    }
                    let fresh = images.insert(f.canonical());
                    distinct.record(fresh, || format!("{p} shares its image"));
                }
                Err(e) => {
                    transfer.record(false, || format!("{p}: {e}"));
                    inverse.record(false, || format!("{p}: {e}"));
                }
            }
        }
    }

    Ok(VerifyReport {
        nmax,
        permutations_checked: total,
        checks: vec![
            sort_twice.finish(),
            counts.finish(),
            refined.finish(),
            grammar_eq.finish(),
            round_trip.finish(),
            slmax_rec.finish(),
            transfer.finish(),
            inverse.finish(),
            distinct.finish(),
        ],
    })
}
