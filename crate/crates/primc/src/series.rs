//! Exact truncated formal series in q, the colour variables b_0..b_{n-1}
//! and an auxiliary constant-term variable x.
//!
//! A `Series` stores f = sum_m c_m * q^{m.q} * b^{m.b} * x^{m.x} + O(q^{N+1})
//! sparsely, with arbitrary-precision integer coefficients. Monomials with
//! q-exponent above the truncation order are discarded by every operation;
//! b- and x-exponents are unrestricted Laurent exponents.
//!
//! Invariants:
//! - no stored coefficient is zero,
//! - no stored monomial has q-exponent above `trunc`,
//! - addition and multiplication are exact on the retained range whenever
//!   both operands are power series in q (no negative q-exponents). Callers
//!   that introduce negative q-exponents mid-computation (the character
//!   evaluators do) are responsible for widening the working truncation so
//!   that the final restriction to q^0..q^N is exact.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A single monomial q^{q_exp} * b_0^{b_exps[0]} ... b_{n-1}^{b_exps[n-1]} * x^{x_exp}.
///
/// The derived ordering is lexicographic on (q_exp, b_exps, x_exp), which is
/// the canonical output order of the crate.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub q_exp: i64,
    pub b_exps: Vec<i64>,
    pub x_exp: i64,
}

impl Monomial {
    pub fn new(q_exp: i64, b_exps: Vec<i64>, x_exp: i64) -> Self {
        Monomial {
            q_exp,
            b_exps,
            x_exp,
        }
    }

    /// The unit monomial for a given colour count.
    pub fn unit(n: usize) -> Self {
        Monomial::new(0, vec![0; n], 0)
    }

    /// q^k with no b or x part.
    pub fn q_power(n: usize, k: i64) -> Self {
        Monomial::new(k, vec![0; n], 0)
    }

    /// Product of two monomials (exponents add).
    pub fn times(&self, other: &Monomial) -> Monomial {
        Monomial {
            q_exp: self.q_exp + other.q_exp,
            b_exps: self
                .b_exps
                .iter()
                .zip(&other.b_exps)
                .map(|(a, b)| a + b)
                .collect(),
            x_exp: self.x_exp + other.x_exp,
        }
    }

    /// Applies q -> q^d, then b_i -> b_i q^{shifts[i]}, then optionally
    /// b_i -> q^{scalars[i]} (eliminating b_i). This is the per-monomial part
    /// of [`Series::subst`].
    pub fn substituted(&self, d: u32, shifts: &[i64], scalars: Option<&[i64]>) -> Monomial {
        let mut q = self.q_exp * i64::from(d);
        let mut b = self.b_exps.clone();
        for (i, e) in self.b_exps.iter().enumerate() {
            q += shifts[i] * e;
        }
        if let Some(t) = scalars {
            for (i, e) in self.b_exps.iter().enumerate() {
                q += t[i] * e;
            }
            b.iter_mut().for_each(|e| *e = 0);
        }
        Monomial {
            q_exp: q,
            b_exps: b,
            x_exp: self.x_exp,
        }
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "q^{}", self.q_exp)?;
        for (i, e) in self.b_exps.iter().enumerate() {
            if *e != 0 {
                write!(f, " b{}^{}", i, e)?;
            }
        }
        if self.x_exp != 0 {
            write!(f, " x^{}", self.x_exp)?;
        }
        Ok(())
    }
}

/// A monomial in the variables e^{-alpha_0}, ..., e^{-alpha_{n-1}}.
///
/// Exponents are checked non-negative on construction; the conversion from
/// (q, b) monomials reports would-be negative exponents as positivity
/// violations instead of building an invalid value.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct AlphaMonomial {
    c_exps: Vec<i64>,
}

impl AlphaMonomial {
    pub fn new(c_exps: Vec<i64>) -> Result<Self> {
        if let Some(bad) = c_exps.iter().find(|c| **c < 0) {
            return Err(Error::NotAlphaConvertible(format!(
                "negative alpha exponent {bad} in {c_exps:?}"
            )));
        }
        Ok(AlphaMonomial { c_exps })
    }

    pub fn exponents(&self) -> &[i64] {
        &self.c_exps
    }

    /// Maps back through e^{-alpha_0} = q b_0 b_{n-1}^{-1} and
    /// e^{-alpha_i} = b_{i-1}^{-1} b_i (i >= 1).
    pub fn to_qb(&self) -> Monomial {
        let n = self.c_exps.len();
        let c = &self.c_exps;
        let mut b = vec![0i64; n];
        for j in 0..n {
            b[j] = c[j] - c[(j + 1) % n];
        }
        Monomial::new(c[0], b, 0)
    }
}

/// Result of rewriting a series in the alpha basis: converted terms plus any
/// monomials whose exponent vector left the non-negative monoid.
#[derive(Clone, Debug, Default)]
pub struct AlphaConversion {
    pub terms: BTreeMap<AlphaMonomial, BigInt>,
    pub violations: Vec<AlphaViolation>,
}

#[derive(Clone, Debug)]
pub struct AlphaViolation {
    pub monomial: Monomial,
    pub c_exps: Vec<i64>,
    pub coef: BigInt,
}

impl AlphaConversion {
    /// Character positivity: every exponent vector non-negative and every
    /// coefficient strictly positive.
    pub fn is_positive(&self) -> bool {
        self.violations.is_empty() && self.terms.values().all(|c| c.is_positive())
    }
}

/// Sparse truncated series. See the module documentation for the exactness
/// contract.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    n: usize,
    trunc: i64,
    terms: BTreeMap<Monomial, BigInt>,
}

impl Series {
    pub fn zero(n: usize, trunc: i64) -> Self {
        Series {
            n,
            trunc,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(n: usize, trunc: i64) -> Self {
        let mut s = Series::zero(n, trunc);
        if trunc >= 0 {
            s.terms.insert(Monomial::unit(n), BigInt::one());
        }
        s
    }

    /// Single-term series c * m, dropping it if above truncation.
    pub fn monomial(n: usize, trunc: i64, m: Monomial, coef: BigInt) -> Self {
        let mut s = Series::zero(n, trunc);
        s.insert(m, coef);
        s
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn trunc(&self) -> i64 {
        self.trunc
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, BigInt> {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Smallest stored q-exponent, if any term is present.
    pub fn min_q_exp(&self) -> Option<i64> {
        self.terms.keys().map(|m| m.q_exp).min()
    }

    /// True when no stored monomial has a negative q-exponent.
    pub fn is_power_series(&self) -> bool {
        self.min_q_exp().is_none_or(|m| m >= 0)
    }

    /// Adds a single term in place. The workhorse of bulk accumulation:
    /// unlike [`Series::add`] it does not clone the receiver.
    pub fn add_monomial(&mut self, m: Monomial, coef: BigInt) {
        self.insert(m, coef);
    }

    pub(crate) fn insert(&mut self, m: Monomial, coef: BigInt) {
        if m.q_exp > self.trunc || coef.is_zero() {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coef);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coef;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_context(&self, other: &Series) -> Result<()> {
        if self.n != other.n || self.trunc != other.trunc {
            return Err(Error::MismatchedContext {
                left_n: self.n,
                left_trunc: self.trunc,
                right_n: other.n,
                right_trunc: other.trunc,
            });
        }
        Ok(())
    }

    /// Coefficient-wise sum.
    pub fn add(&self, other: &Series) -> Result<Series> {
        self.check_context(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Series) -> Result<Series> {
        self.check_context(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert(m.clone(), -c.clone());
        }
        Ok(out)
    }

    pub fn negate(&self) -> Series {
        let mut out = Series::zero(self.n, self.trunc);
        for (m, c) in &self.terms {
            out.terms.insert(m.clone(), -c.clone());
        }
        out
    }

    /// Cauchy product, monomials above truncation dropped.
    pub fn mul(&self, other: &Series) -> Result<Series> {
        self.check_context(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Series) -> Series {
        let mut out = Series::zero(self.n, self.trunc);
        // Iterating the smaller operand outside keeps the inner early-exit
        // effective when one side is a short Pochhammer factor.
        let (small, large) = if self.terms.len() <= other.terms.len() {
            (self, other)
        } else {
            (other, self)
        };
        let large_min_q = large.min_q_exp().unwrap_or(0);
        for (ma, ca) in &small.terms {
            if ma.q_exp + large_min_q > self.trunc {
                continue;
            }
            for (mb, cb) in &large.terms {
                let q = ma.q_exp + mb.q_exp;
                if q > self.trunc {
                    if mb.q_exp >= 0 && large_min_q >= 0 {
                        break; // ascending in q from here on
                    }
                    continue;
                }
                out.insert(ma.times(mb), ca * cb);
            }
        }
        out
    }

    /// Multiply by a single monomial with integer coefficient.
    pub fn mul_monomial(&self, m: &Monomial, coef: &BigInt) -> Series {
        let mut out = Series::zero(self.n, self.trunc);
        for (ma, ca) in &self.terms {
            out.insert(ma.times(m), ca * coef);
        }
        out
    }

    /// Restriction to monomials with x-exponent 0 (the [x^0] operator).
    pub fn const_term_x(&self) -> Series {
        let mut out = Series::zero(self.n, self.trunc);
        for (m, c) in &self.terms {
            if m.x_exp == 0 {
                out.terms.insert(m.clone(), c.clone());
            }
        }
        out
    }

    /// Drops all monomials with q-exponent above `new_trunc` and lowers the
    /// truncation order. Exact: the retained range was already exact.
    pub fn truncated(&self, new_trunc: i64) -> Series {
        let mut out = Series::zero(self.n, new_trunc.min(self.trunc));
        for (m, c) in &self.terms {
            if m.q_exp <= out.trunc {
                out.terms.insert(m.clone(), c.clone());
            }
        }
        out
    }

    /// Truncated expansion of prod_{j>=0} (1 + sign * m * q^{step*j}), i.e.
    /// of (-m; q^step)_inf for sign = +1 and (m; q^step)_inf for sign = -1.
    ///
    /// Factors whose non-unit term exceeds the truncation contribute only 1,
    /// so the product is finite. A term selecting k distinct factors carries
    /// q-exponent at least step*k(k-1)/2 + k*m.q_exp, which also bounds the
    /// x-degree implicitly.
    pub fn poch_expand(m: &Monomial, sign: i64, step: u32, n: usize, trunc: i64) -> Result<Series> {
        if m.q_exp < 0 {
            return Err(Error::DivergentProduct(m.q_exp));
        }
        if step == 0 {
            return Err(Error::InvalidParameter(
                "poch_expand step must be >= 1".into(),
            ));
        }
        if !(sign == 1 || sign == -1) {
            return Err(Error::InvalidParameter(
                "poch_expand sign must be +1 or -1".into(),
            ));
        }
        Ok(Self::poch_expand_laurent(m, sign, step, n, trunc))
    }

    /// Same expansion without the non-negativity guard on m.q_exp.
    ///
    /// With a negative argument exponent the result is a Laurent series in q
    /// (finitely many negative powers: only factors with m.q_exp + step*j < 0
    /// dip below zero). The character evaluators rely on this and widen their
    /// working truncation by the total negative depth, so that the final
    /// restriction to q^0..q^N stays exact.
    pub(crate) fn poch_expand_laurent(
        m: &Monomial,
        sign: i64,
        step: u32,
        n: usize,
        trunc: i64,
    ) -> Series {
        let step = i64::from(step);
        let mut out = Series::one(n, trunc);
        let mut j = 0i64;
        while m.q_exp + step * j <= trunc {
            let mut factor = Series::one(n, trunc);
            let mut fm = m.clone();
            fm.q_exp += step * j;
            factor.insert(fm, BigInt::from(sign));
            out = out.mul_unchecked(&factor);
            j += 1;
        }
        out
    }

    /// Total negative depth of the Laurent expansion of
    /// prod_{j>=0}(1 + sign*m*q^{step*j}): sum over factors of the amount by
    /// which their non-unit term dips below q^0. Widening a working
    /// truncation by this amount preserves exactness through multiplication.
    pub(crate) fn poch_negative_depth(q_exp: i64, step: u32) -> i64 {
        let step = i64::from(step);
        let mut d = 0;
        let mut j = 0;
        while q_exp + step * j < 0 {
            d += -(q_exp + step * j);
            j += 1;
        }
        d
    }

    /// 1/(q;q)_inf: the coefficient of q^m is the number of partitions of m,
    /// computed by Euler's pentagonal-number recurrence.
    pub fn euler_inverse(n: usize, trunc: i64) -> Series {
        let nn = trunc.max(0) as usize;
        let mut p = vec![BigInt::zero(); nn + 1];
        p[0] = BigInt::one();
        for m in 1..=nn {
            let mut total = BigInt::zero();
            let mut k = 1i64;
            loop {
                let g1 = k * (3 * k - 1) / 2;
                let g2 = k * (3 * k + 1) / 2;
                if g1 as usize > m && g2 as usize > m {
                    break;
                }
                let sign = if k % 2 == 1 { 1 } else { -1 };
                if g1 as usize <= m {
                    let t = &p[m - g1 as usize] * sign;
                    total += t;
                }
                if g2 as usize <= m {
                    let t = &p[m - g2 as usize] * sign;
                    total += t;
                }
                k += 1;
            }
            p[m] = total;
        }
        let mut out = Series::zero(n, trunc);
        for (m, c) in p.into_iter().enumerate() {
            out.insert(Monomial::q_power(n, m as i64), c);
        }
        out
    }

    /// (q;q)_inf truncated.
    pub fn euler(n: usize, trunc: i64) -> Series {
        Series::poch_expand(&Monomial::q_power(n, 1), -1, 1, n, trunc)
            .expect("q has non-negative exponent")
    }

    /// Applies q -> q^d, then b_i -> b_i q^{shifts[i]}, then optionally
    /// b_i -> q^{scalars[i]}, producing a series exact to `out_trunc`.
    ///
    /// Exactness requires knowing that no *discarded* input monomial can land
    /// at or below `out_trunc`. Writing W for the largest combined q-weight
    /// attached to a b-variable, a monomial at q^m maps no lower than
    /// q^{(d-W)m} provided its negative b-exponents total at most m (true of
    /// every partition generating function this crate produces, where each
    /// inverse colour unit is paid for by at least one unit of weight). The
    /// operation therefore demands d > W together with
    /// out_trunc <= (d-W)(trunc+1) - 1, verifies the support bound on every
    /// retained monomial, and rejects anything else as InsufficientTruncation.
    pub fn subst(
        &self,
        d: u32,
        shifts: &[i64],
        scalars: Option<&[i64]>,
        out_trunc: i64,
    ) -> Result<Series> {
        if d == 0 {
            return Err(Error::InvalidParameter("subst q-power must be >= 1".into()));
        }
        if shifts.len() != self.n || scalars.is_some_and(|t| t.len() != self.n) {
            return Err(Error::InvalidParameter(
                "subst shift/scalar vectors must have length n".into(),
            ));
        }
        if shifts.iter().any(|s| *s < 0) || scalars.is_some_and(|t| t.iter().any(|s| *s < 0)) {
            return Err(Error::InvalidParameter(
                "subst only supports non-negative shifts and scalars".into(),
            ));
        }
        let weight = |i: usize| shifts[i] + scalars.map_or(0, |t| t[i]);
        let w_max = (0..self.n).map(weight).max().unwrap_or(0);
        let d_i = i64::from(d);
        if d_i <= w_max {
            return Err(Error::InsufficientTruncation(format!(
                "q-dilation {d_i} must exceed the largest b-weight {w_max}"
            )));
        }
        if out_trunc > (d_i - w_max) * (self.trunc + 1) - 1 {
            return Err(Error::InsufficientTruncation(format!(
                "input truncation {} cannot certify output order {out_trunc}",
                self.trunc
            )));
        }
        if w_max > 0 {
            for m in self.terms.keys() {
                let neg: i64 = m.b_exps.iter().map(|e| (-e).max(0)).sum();
                if neg > m.q_exp {
                    return Err(Error::InsufficientTruncation(format!(
                        "monomial {m} violates the weight-support bound required for exact substitution"
                    )));
                }
            }
        }
        let mut out = Series::zero(self.n, out_trunc);
        for (m, c) in &self.terms {
            out.insert(m.substituted(d, shifts, scalars), c.clone());
        }
        Ok(out)
    }

    /// Rewrites the series in the alpha basis via e^{-delta} = q and
    /// e^{alpha_i} = b_{i-1} b_i^{-1}: solve c_0 = q_exp and
    /// c_{i+1} = c_i - b_exps[i]. Monomials with a negative c_i are reported
    /// as positivity violations rather than converted.
    pub fn to_alpha(&self) -> Result<AlphaConversion> {
        let mut out = AlphaConversion::default();
        for (m, coef) in &self.terms {
            if m.x_exp != 0 {
                return Err(Error::NotAlphaConvertible(format!(
                    "{m} carries x^{}",
                    m.x_exp
                )));
            }
            if m.b_exps.iter().sum::<i64>() != 0 {
                return Err(Error::NotAlphaConvertible(format!(
                    "{m} has b-exponents not summing to 0"
                )));
            }
            let mut c = vec![0i64; self.n];
            c[0] = m.q_exp;
            for i in 0..self.n.saturating_sub(1) {
                c[i + 1] = c[i] - m.b_exps[i];
            }
            if c.iter().any(|v| *v < 0) {
                out.violations.push(AlphaViolation {
                    monomial: m.clone(),
                    c_exps: c,
                    coef: coef.clone(),
                });
            } else {
                out.terms.insert(AlphaMonomial { c_exps: c }, coef.clone());
            }
        }
        Ok(out)
    }

    /// Sets every b_i to 1, collapsing to a series in q alone (n stays the
    /// same so the context still composes with other series).
    pub fn collapse_b(&self) -> Series {
        let mut out = Series::zero(self.n, self.trunc);
        for (m, c) in &self.terms {
            out.insert(
                Monomial {
                    q_exp: m.q_exp,
                    b_exps: vec![0; self.n],
                    x_exp: m.x_exp,
                },
                c.clone(),
            );
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(SeriesRepr::from(self)).expect("series serialisation cannot fail")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Series> {
        let repr: SeriesRepr = serde_json::from_value(v.clone())
            .map_err(|e| Error::InvalidParameter(format!("bad series JSON: {e}")))?;
        repr.try_into()
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0 + O(q^{})", self.trunc + 1);
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}*{m}")?;
        }
        write!(f, " + O(q^{})", self.trunc + 1)
    }
}

/// Wire format: terms sorted canonically, coefficients as decimal strings.
#[derive(Serialize, Deserialize)]
struct SeriesRepr {
    n: usize,
    trunc: i64,
    terms: Vec<TermRepr>,
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    q: i64,
    b: Vec<i64>,
    x: i64,
    coef: String,
}

impl From<&Series> for SeriesRepr {
    fn from(s: &Series) -> Self {
        SeriesRepr {
            n: s.n,
            trunc: s.trunc,
            terms: s
                .terms
                .iter()
                .map(|(m, c)| TermRepr {
                    q: m.q_exp,
                    b: m.b_exps.clone(),
                    x: m.x_exp,
                    coef: c.to_string(),
                })
                .collect(),
        }
    }
}

impl TryFrom<SeriesRepr> for Series {
    type Error = Error;

    fn try_from(r: SeriesRepr) -> Result<Series> {
        let mut s = Series::zero(r.n, r.trunc);
        for t in r.terms {
            if t.b.len() != r.n {
                return Err(Error::InvalidParameter(format!(
                    "term has {} b-exponents, expected {}",
                    t.b.len(),
                    r.n
                )));
            }
            let coef: BigInt = t
                .coef
                .parse()
                .map_err(|e| Error::InvalidParameter(format!("bad coefficient: {e}")))?;
            s.insert(Monomial::new(t.q, t.b, t.x), coef);
        }
        Ok(s)
    }
}
