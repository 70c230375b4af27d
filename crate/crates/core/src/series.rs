//! Exact truncated power series in `t` with integer polynomial coefficients in
//! `x, u, v, p, q, s`, and the fixed-point solution of the functional
//! equation for the refined generating function of two-stack sortable
//! permutations.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::Serialize;

use crate::enumeration::{brute_force, BRUTE_FORCE_LIMIT};
use crate::error::{Error, Result};

/// Series variables, in exponent-vector order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    T = 0,
    X,
    U,
    V,
    P,
    Q,
    S,
}

impl Var {
    pub const ALL: [Var; 7] = [Var::T, Var::X, Var::U, Var::V, Var::P, Var::Q, Var::S];

    pub fn name(self) -> &'static str {
        ["t", "x", "u", "v", "p", "q", "s"][self as usize]
    }
}

/// Exponents of `(t, x, u, v, p, q, s)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize)]
pub struct Monomial(pub [u8; 7]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0; 7]);

    pub fn var(v: Var) -> Monomial {
        let mut e = [0; 7];
        e[v as usize] = 1;
        Monomial(e)
    }

    pub fn exp(&self, v: Var) -> u8 {
        self.0[v as usize]
    }

    pub fn degree_t(&self) -> usize {
        self.0[0] as usize
    }

    fn mul(&self, other: &Monomial) -> Result<Monomial> {
        let mut e = [0u8; 7];
        for k in 0..7 {
            e[k] = self.0[k]
                .checked_add(other.0[k])
                .ok_or_else(|| Error::Resource("exponent overflow".into()))?;
        }
        Ok(Monomial(e))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in Var::ALL.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}^{}", v.name(), self.0[k])?;
        }
        Ok(())
    }
}

/// A power series in `t` known exactly up to `t^order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedSeries {
    order: usize,
    terms: BTreeMap<Monomial, i128>,
}

fn overflow() -> Error {
    Error::Resource("coefficient overflow".into())
}

impl TruncatedSeries {
    pub fn zero(order: usize) -> Self {
        TruncatedSeries {
            order,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(order: usize) -> Self {
        Self::term(order, Monomial::ONE, 1)
    }

    pub fn term(order: usize, m: Monomial, coef: i128) -> Self {
        let mut s = Self::zero(order);
        if coef != 0 && m.degree_t() <= order {
            s.terms.insert(m, coef);
        }
        s
    }

    pub fn var(order: usize, v: Var) -> Self {
        Self::term(order, Monomial::var(v), 1)
    }

    /// Product of variables, e.g. `monomial(N, &[T, X, U, V])` for `txuv`.
    pub fn monomial(order: usize, vars: &[Var]) -> Self {
        let mut e = [0u8; 7];
        for &v in vars {
            e[v as usize] += 1;
        }
        Self::term(order, Monomial(e), 1)
    }

    pub fn from_terms(order: usize, terms: impl IntoIterator<Item = (Monomial, i128)>) -> Result<Self> {
        let mut s = Self::zero(order);
        for (m, c) in terms {
            s.add_term(m, c)?;
        }
        Ok(s)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, i128> {
        &self.terms
    }

    pub fn coefficient(&self, m: &Monomial) -> i128 {
        self.terms.get(m).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Monomial, c: i128) -> Result<()> {
        if m.degree_t() > self.order || c == 0 {
            return Ok(());
        }
        let slot = self.terms.entry(m).or_insert(0);
        *slot = slot.checked_add(c).ok_or_else(overflow)?;
        if *slot == 0 {
            self.terms.remove(&m);
        }
        Ok(())
    }

    fn same_order(&self, other: &Self) -> Result<()> {
        if self.order != other.order {
            return Err(Error::InvalidInput(format!(
                "series orders differ: {} and {}",
                self.order, other.order
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_order(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, *c)?;
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_order(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.checked_neg().ok_or_else(overflow)?)?;
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_order(other)?;
        let n = self.order;
        let mut by_t: Vec<Vec<(&Monomial, &i128)>> = vec![Vec::new(); n + 1];
        for (m, c) in &other.terms {
            by_t[m.degree_t()].push((m, c));
        }
        let mut acc: HashMap<Monomial, i128> = HashMap::new();
        for (ma, ca) in &self.terms {
            let room = n - ma.degree_t();
            for bucket in &by_t[..=room] {
                for (mb, cb) in bucket {
                    let c = ca.checked_mul(**cb).ok_or_else(overflow)?;
                    let slot = acc.entry(ma.mul(mb)?).or_insert(0);
                    *slot = slot.checked_add(c).ok_or_else(overflow)?;
                }
            }
        }
        Ok(TruncatedSeries {
            order: n,
            terms: acc.into_iter().filter(|&(_, c)| c != 0).collect(),
        })
    }

    /// Product of several series (the empty product is 1).
    pub fn product(order: usize, factors: &[&Self]) -> Result<Self> {
        factors
            .iter()
            .try_fold(Self::one(order), |acc, f| acc.mul(f))
    }

    pub fn scale(&self, k: i128) -> Result<Self> {
        let mut out = Self::zero(self.order);
        for (m, c) in &self.terms {
            out.add_term(*m, c.checked_mul(k).ok_or_else(overflow)?)?;
        }
        Ok(out)
    }

    /// Sets `v` to 1 by summing coefficients over its exponent.
    pub fn specialize(&self, v: Var) -> Result<Self> {
        if v == Var::T {
            return Err(Error::InvalidInput("t cannot be specialized".into()));
        }
        let mut out = Self::zero(self.order);
        for (m, c) in &self.terms {
            let mut e = m.0;
            e[v as usize] = 0;
            out.add_term(Monomial(e), *c)?;
        }
        Ok(out)
    }

    pub fn specialize_all(&self, vars: &[Var]) -> Result<Self> {
        vars.iter().try_fold(self.clone(), |acc, &v| acc.specialize(v))
    }

    /// Coefficients of `t^0..=t^order` with every other variable set to 1.
    pub fn counts(&self) -> Result<Vec<i128>> {
        let mut out = vec![0i128; self.order + 1];
        for (m, c) in &self.terms {
            let slot = &mut out[m.degree_t()];
            *slot = slot.checked_add(*c).ok_or_else(overflow)?;
        }
        Ok(out)
    }

    /// `(a(x) − a(1)) / (x − 1)`, computed term by term as
    /// `x^k ↦ x^{k−1} + … + 1` and checked by multiplying back.
    pub fn divided_difference_x(&self) -> Result<Self> {
        let mut out = Self::zero(self.order);
        for (m, c) in &self.terms {
            let k = m.exp(Var::X);
            for j in 0..k {
                let mut e = m.0;
                e[Var::X as usize] = j;
                out.add_term(Monomial(e), *c)?;
            }
        }
        let x_minus_one = Self::var(self.order, Var::X).sub(&Self::one(self.order))?;
        let back = x_minus_one.mul(&out)?.add(&self.specialize(Var::X)?)?;
        if &back != self {
            return Err(Error::Internal("divided difference does not multiply back".into()));
        }
        Ok(out)
    }

    /// Sorted `coef t^a x^b u^c v^d p^e q^f s^g` lines, by increasing `t`.
    pub fn to_lines(&self) -> Vec<String> {
        let mut items: Vec<_> = self.terms.iter().collect();
        items.sort_by_key(|(m, _)| (m.degree_t(), **m));
        items.into_iter().map(|(m, c)| format!("{c} {m}")).collect()
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return writeln!(f, "0");
        }
        for line in self.to_lines() {
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
struct TermJson {
    coef: i128,
    t: u8,
    x: u8,
    u: u8,
    v: u8,
    p: u8,
    q: u8,
    s: u8,
}

impl Serialize for TruncatedSeries {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut items: Vec<_> = self.terms.iter().collect();
        items.sort_by_key(|(m, _)| (m.degree_t(), **m));
        let terms: Vec<TermJson> = items
            .into_iter()
            .map(|(m, &coef)| {
                let [t, x, u, v, p, q, s] = m.0;
                TermJson { coef, t, x, u, v, p, q, s }
            })
            .collect();
        let mut st = serializer.serialize_struct("TruncatedSeries", 2)?;
        st.serialize_field("order", &self.order)?;
        st.serialize_field("terms", &terms)?;
        st.end()
    }
}

/// Largest order accepted by [`iterate_t`].
pub const ITERATION_LIMIT: usize = 10;

/// Right-hand side of the functional equation evaluated at `t_cur`:
/// `txuv[(1 + p·T(x,u,1))(1 + q·T(x,1,v)) + pqs·T(x,u,1)·Δ_x T(x,1,v)]`
/// where `Δ_x F = (F(x) − F(1))/(x − 1)`.
pub fn functional_rhs(t_cur: &TruncatedSeries) -> Result<TruncatedSeries> {
    let n = t_cur.order();
    let left = t_cur.specialize(Var::V)?;
    let right = t_cur.specialize(Var::U)?;
    equation_rhs(n, &[Var::T, Var::X, Var::U, Var::V], &left, &right)
}

/// `prefix · [(1 + p·left)(1 + q·right) + pqs·left·Δ_x right]`.
fn equation_rhs(
    n: usize,
    prefix: &[Var],
    left: &TruncatedSeries,
    right: &TruncatedSeries,
) -> Result<TruncatedSeries> {
    let one = TruncatedSeries::one(n);
    let p = TruncatedSeries::var(n, Var::P);
    let q = TruncatedSeries::var(n, Var::Q);
    let pqs = TruncatedSeries::monomial(n, &[Var::P, Var::Q, Var::S]);
    let a = one.add(&p.mul(left)?)?;
    let b = one.add(&q.mul(right)?)?;
    let dd = right.divided_difference_x()?;
    let inner = a.mul(&b)?.add(&TruncatedSeries::product(n, &[&pqs, left, &dd])?)?;
    TruncatedSeries::monomial(n, prefix).mul(&inner)
}

/// Solves the functional equation by fixed-point iteration from `T = 0`.
pub fn iterate_t(order: usize) -> Result<TruncatedSeries> {
    if order > ITERATION_LIMIT {
        return Err(Error::Resource(format!(
            "series order is limited to {ITERATION_LIMIT}, got {order}"
        )));
    }
    let mut t = TruncatedSeries::zero(order);
    for _ in 0..order {
        t = functional_rhs(&t)?;
    }
    if functional_rhs(&t)? != t {
        return Err(Error::Internal(format!(
            "iteration has not settled after {order} steps"
        )));
    }
    Ok(t)
}

/// Sums `t^n x^slmax u^lmax v^rmax p^asc q^des s^sldes` over every two-stack
/// sortable permutation of size `1..=order`.
pub fn series_from_enumeration(order: usize) -> Result<TruncatedSeries> {
    if order > BRUTE_FORCE_LIMIT {
        return Err(Error::Resource(format!(
            "enumeration is limited to order {BRUTE_FORCE_LIMIT}, got {order}"
        )));
    }
    let mut out = TruncatedSeries::zero(order);
    for n in 1..=order {
        for p in brute_force(n, 1)? {
            let st = p.stats();
            let e = [st.len, st.slmax, st.lmax, st.rmax, st.asc, st.des, st.sldes]
                .map(|x| x as u8);
            out.add_term(Monomial(e), 1)?;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquationResidual {
    /// Which specialization the equation determines, e.g. `T011`.
    pub name: &'static str,
    pub vanishes: bool,
    /// Smallest monomial with a nonzero residual, and that residual.
    pub first_offending: Option<(String, i128)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SystemReport {
    pub order: usize,
    pub residuals: Vec<EquationResidual>,
}

impl SystemReport {
    pub fn passed(&self) -> bool {
        self.residuals.iter().all(|r| r.vanishes)
    }
}

impl fmt::Display for SystemReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.residuals {
            write!(f, "{} residual up to t^{}: ", r.name, self.order)?;
            match &r.first_offending {
                None => writeln!(f, "0")?,
                Some((m, c)) => writeln!(f, "nonzero, first at {m} (coefficient {c})")?,
            }
        }
        Ok(())
    }
}

fn residual(name: &'static str, lhs: &TruncatedSeries, rhs: &TruncatedSeries) -> Result<EquationResidual> {
    let diff = lhs.sub(rhs)?;
    let first = diff
        .terms()
        .iter()
        .min_by_key(|(m, _)| (m.degree_t(), **m))
        .map(|(m, c)| (m.to_string(), *c));
    Ok(EquationResidual {
        name,
        vanishes: first.is_none(),
        first_offending: first,
    })
}

/// Checks the four equations obtained by specializing `u` and/or `v` to 1
/// in the functional equation, for the series `t`:
///
/// ```text
/// T000 = txuv(1+pT001)(1+qT010) + txuvpqs·T001·(T010−T110)/(x−1)
/// T010 = txv (1+pT011)(1+qT010) + txvpqs ·T011·(T010−T110)/(x−1)
/// T001 = txu (1+pT001)(1+qT011) + txupqs ·T001·(T011−T111)/(x−1)
/// T011 = tx  (1+pT011)(1+qT011) + txpqs  ·T011·(T011−T111)/(x−1)
/// ```
///
/// `Tabc` has `x`, `u`, `v` set to 1 where `a`, `b`, `c` is 1.
pub fn check_system_on(t: &TruncatedSeries) -> Result<SystemReport> {
    use Var::{T, U, V, X};
    let n = t.order();
    let t000 = t.clone();
    let t010 = t.specialize(U)?;
    let t001 = t.specialize(V)?;
    let t011 = t010.specialize(V)?;
    let residuals = vec![
        residual("T000", &t000, &equation_rhs(n, &[T, X, U, V], &t001, &t010)?)?,
        residual("T010", &t010, &equation_rhs(n, &[T, X, V], &t011, &t010)?)?,
        residual("T001", &t001, &equation_rhs(n, &[T, X, U], &t001, &t011)?)?,
        residual("T011", &t011, &equation_rhs(n, &[T, X], &t011, &t011)?)?,
    ];
    Ok(SystemReport { order: n, residuals })
}

/// [`check_system_on`] applied to the iterated solution.
pub fn check_system(order: usize) -> Result<SystemReport> {
    check_system_on(&iterate_t(order)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use Var::*;

    fn mono(order: usize, vars: &[Var]) -> TruncatedSeries {
        TruncatedSeries::monomial(order, vars)
    }

    #[test]
    fn ring_basics() {
        let a = mono(3, &[T, X, U]).add(&mono(3, &[P])).unwrap();
        assert_eq!(a.add(&TruncatedSeries::zero(3)).unwrap(), a);
        assert_eq!(a.mul(&TruncatedSeries::one(3)).unwrap(), a);
        let txuv = mono(1, &[T, X, U, V]);
        assert!(txuv.mul(&txuv).unwrap().is_zero());
        let one_t = TruncatedSeries::one(2).add(&mono(2, &[T])).unwrap();
        let sq = one_t.mul(&one_t).unwrap();
        let expected = TruncatedSeries::from_terms(
            2,
            [(Monomial::ONE, 1), (Monomial::var(T), 2), (Monomial([2, 0, 0, 0, 0, 0, 0]), 1)],
        )
        .unwrap();
        assert_eq!(sq, expected);
        assert!(mono(2, &[T]).add(&mono(3, &[T])).is_err());
        assert!(a.sub(&a).unwrap().is_zero());
    }

    #[test]
    fn specialization() {
        assert_eq!(mono(2, &[T, X, U, V]).specialize(X).unwrap(), mono(2, &[T, U, V]));
        let s = iterate_t(4).unwrap();
        let once = s.specialize(X).unwrap();
        assert_eq!(once.specialize(X).unwrap(), once);
        assert!(s.specialize(T).is_err());
    }

    #[test]
    fn divided_difference() {
        assert_eq!(
            mono(2, &[X]).divided_difference_x().unwrap(),
            TruncatedSeries::one(2)
        );
        let x2_plus_x = mono(2, &[X, X]).add(&mono(2, &[X])).unwrap();
        let expected = mono(2, &[X]).add(&TruncatedSeries::one(2).scale(2).unwrap()).unwrap();
        assert_eq!(x2_plus_x.divided_difference_x().unwrap(), expected);
        assert!(TruncatedSeries::one(2).divided_difference_x().unwrap().is_zero());
    }

    #[test]
    fn first_coefficients() {
        let s = iterate_t(2).unwrap();
        let up = mono(2, &[T, T, X, X, U, U, V, P]);
        let vq = mono(2, &[T, T, X, X, U, V, V, Q]);
        let expected = mono(2, &[T, X, U, V]).add(&up).unwrap().add(&vq).unwrap();
        assert_eq!(s, expected);
        assert_eq!(series_from_enumeration(2).unwrap(), expected);
        assert_eq!(series_from_enumeration(1).unwrap(), mono(1, &[T, X, U, V]));
        assert_eq!(series_from_enumeration(3).unwrap().counts().unwrap(), vec![0, 1, 2, 6]);
        let all = s.specialize_all(&[X, U, V, P, Q, S]).unwrap();
        assert_eq!(all.counts().unwrap(), vec![0, 1, 2]);
    }

    #[test]
    fn iteration_matches_enumeration() {
        assert_eq!(iterate_t(5).unwrap(), series_from_enumeration(5).unwrap());
        assert!(iterate_t(11).is_err());
    }

    #[test]
    fn system_residuals() {
        let r = check_system(5).unwrap();
        assert!(r.passed(), "{r}");
        let mut bad = iterate_t(5).unwrap();
        let m = *bad.terms().keys().last().unwrap();
        bad.add_term(m, 1).unwrap();
        let r = check_system_on(&bad).unwrap();
        assert!(!r.passed());
        assert!(r.residuals[0].first_offending.is_some());
    }

    /// With `p` attached to `T(x,1,v)` and `q` to `T(x,u,1)`, the equation
    /// pairs ascents with right-to-left maxima, which enumeration refutes.
    #[test]
    fn swapped_pairing_disagrees_with_enumeration() {
        let n = 3;
        let mut swapped = TruncatedSeries::zero(n);
        for _ in 0..n {
            let left = swapped.specialize(U).unwrap();
            let right = swapped.specialize(V).unwrap();
            swapped = equation_rhs_swapped(n, &left, &right);
        }
        assert_ne!(swapped, series_from_enumeration(n).unwrap());
    }

    fn equation_rhs_swapped(
        n: usize,
        with_p: &TruncatedSeries,
        with_q: &TruncatedSeries,
    ) -> TruncatedSeries {
        let one = TruncatedSeries::one(n);
        let a = one.add(&mono(n, &[P]).mul(with_p).unwrap()).unwrap();
        let b = one.add(&mono(n, &[Q]).mul(with_q).unwrap()).unwrap();
        let dd = with_p.divided_difference_x().unwrap();
        let inner = a
            .mul(&b)
            .unwrap()
            .add(&TruncatedSeries::product(n, &[&mono(n, &[P, Q, S]), with_q, &dd]).unwrap())
            .unwrap();
        mono(n, &[T, X, U, V]).mul(&inner).unwrap()
    }
}
