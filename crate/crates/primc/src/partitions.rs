//! Grounded partitions, generalised Primc and Capparelli partitions, and the
//! bijections that relate them.
//!
//! A grounded partition with ground colour a_l b_l is a sequence
//! (pi_0, ..., pi_{s-1}, 0_{a_l b_l}) of coloured parts whose consecutive
//! differences are bounded below by (relation >=) or equal to (relation =)
//! the energy of the corresponding box-vertex pair, and whose last proper
//! part differs from the terminal ground part. Part sizes then decrease
//! weakly from left to right and are non-negative; a zero part is possible
//! only for ground index l >= 1 and only with a bound colour a_a b_b
//! satisfying a < l <= b, and runs of zero parts shrink that window strictly,
//! so enumeration by weight terminates.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::crystal::{BoxCrystal, BoxVertex};
use crate::energy::{delta, energy_table, Colour, EnergyTable};
use crate::error::{Error, Result};
use crate::series::{Monomial, Series};

/// A coloured integer part.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct ColouredPart {
    pub size: i64,
    pub colour: Colour,
}

impl ColouredPart {
    pub fn new(size: i64, colour: Colour) -> Self {
        ColouredPart { size, colour }
    }
}

impl std::fmt::Display for ColouredPart {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}_{}", self.size, self.colour)
    }
}

/// A generalised Primc partition: coloured parts with consecutive
/// differences at least the minimal difference, last part at least 1.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct PrimcPartition {
    pub parts: Vec<ColouredPart>,
}

impl PrimcPartition {
    pub fn weight(&self) -> i64 {
        self.parts.iter().map(|p| p.size).sum()
    }
}

/// True iff all consecutive differences meet the minimal difference and the
/// final part has size at least 1 (the ground-index-0 convention).
pub fn primc_ok(n: usize, p: &PrimcPartition) -> bool {
    if let Some(last) = p.parts.last() {
        if last.size < 1 {
            return false;
        }
    }
    p.parts
        .windows(2)
        .all(|w| w[0].size - w[1].size >= delta(n, w[0].colour, w[1].colour))
}

/// A grounded partition: proper parts followed by an implicit terminal part
/// 0 at the ground colour a_ground b_ground.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct GroundedPartition {
    pub ground: usize,
    pub parts: Vec<ColouredPart>,
}

impl GroundedPartition {
    pub fn trivial(ground: usize) -> Self {
        GroundedPartition {
            ground,
            parts: Vec::new(),
        }
    }

    pub fn ground_colour(&self) -> Colour {
        Colour {
            a: self.ground,
            b: self.ground,
        }
    }

    pub fn weight(&self) -> i64 {
        self.parts.iter().map(|p| p.size).sum()
    }

    pub fn colour_sequence(&self) -> Vec<Colour> {
        self.parts.iter().map(|p| p.colour).collect()
    }

    /// The b-monomial of the partition: colour a_k b_l contributes
    /// b_l * b_k^{-1}; the terminal ground part contributes 1.
    pub fn monomial(&self, n: usize) -> Monomial {
        let mut b = vec![0i64; n];
        for p in &self.parts {
            b[p.colour.b] += 1;
            b[p.colour.a] -= 1;
        }
        Monomial::new(self.weight(), b, 0)
    }

    /// All parts including the terminal ground part, for display and
    /// serialisation.
    pub fn full_parts(&self) -> Vec<ColouredPart> {
        let mut out = self.parts.clone();
        out.push(ColouredPart::new(0, self.ground_colour()));
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(
            self.full_parts()
                .iter()
                .map(|p| PartRepr {
                    size: p.size,
                    colour: p.colour.to_string(),
                })
                .collect::<Vec<_>>(),
        )
        .expect("partition serialisation cannot fail")
    }
}

impl std::fmt::Display for GroundedPartition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "(")?;
        for p in &self.parts {
            write!(f, "{p}, ")?;
        }
        write!(f, "0_{})", self.ground_colour())
    }
}

#[derive(Serialize, Deserialize)]
struct PartRepr {
    size: i64,
    colour: String,
}

/// Relation mode between consecutive parts.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Differences at least the energy (the relation >>).
    AtLeast,
    /// Differences exactly the energy (the relation > with a dot; the
    /// minimal partitions, images of the path bijection).
    Exact,
}

impl Mode {
    pub fn minimal(self) -> bool {
        matches!(self, Mode::Exact)
    }

    pub fn from_minimal(minimal: bool) -> Self {
        if minimal {
            Mode::Exact
        } else {
            Mode::AtLeast
        }
    }
}

/// Checks the grounded-partition conditions for the given relation mode.
pub fn is_grounded(table: &EnergyTable, ell: usize, p: &GroundedPartition, mode: Mode) -> bool {
    if p.ground != ell {
        return false;
    }
    let ground = BoxCrystal::ground(ell);
    let gc = p.ground_colour();
    // terminal: last proper part differs from 0_{c_g} and relates to it
    if let Some(last) = p.parts.last() {
        if last.size == 0 && last.colour == gc {
            return false;
        }
        let h = table.h(ground, last.colour.box_vertex());
        let ok = match mode {
            Mode::AtLeast => last.size >= h,
            Mode::Exact => last.size == h,
        };
        if !ok {
            return false;
        }
    }
    p.parts.windows(2).all(|w| {
        let h = table.h(w[1].colour.box_vertex(), w[0].colour.box_vertex());
        match mode {
            Mode::AtLeast => w[0].size - w[1].size >= h,
            Mode::Exact => w[0].size - w[1].size == h,
        }
    })
}

/// Complete, duplicate-free enumeration of grounded partitions of weight at
/// most `max_weight`, in canonical order (weight, then colour sequence, then
/// part sizes).
pub fn enumerate_grounded(
    n: usize,
    ell: usize,
    max_weight: i64,
    minimal: bool,
) -> Result<Vec<GroundedPartition>> {
    let table = if n == 1 {
        EnergyTable::rank_one()
    } else {
        energy_table(n)?
    };
    enumerate_grounded_with_table(&table, ell, max_weight, minimal)
}

pub fn enumerate_grounded_with_table(
    table: &EnergyTable,
    ell: usize,
    max_weight: i64,
    minimal: bool,
) -> Result<Vec<GroundedPartition>> {
    let n = table.n();
    if ell >= n {
        return Err(Error::IndexOutOfRange { n, label: ell });
    }
    if max_weight < 0 {
        return Err(Error::InvalidParameter(
            "max weight must be non-negative".into(),
        ));
    }
    let mode = Mode::from_minimal(minimal);
    let ground = BoxCrystal::ground(ell);
    let gc = Colour { a: ell, b: ell };
    let colours: Vec<Colour> = Colour::all(n).collect();
    let mut out = vec![GroundedPartition::trivial(ell)];
    // Suffix stack: parts listed rightmost-first, extended leftward; sizes
    // weakly increase along each suffix so the weight prune is monotone.
    let mut stack: Vec<(Vec<ColouredPart>, i64)> = Vec::new();
    for &c in &colours {
        let h = table.h(ground, c.box_vertex());
        match mode {
            Mode::Exact => {
                if !(h == 0 && c == gc) && h <= max_weight {
                    stack.push((vec![ColouredPart::new(h, c)], h));
                }
            }
            Mode::AtLeast => {
                let lo = if c == gc { h.max(1) } else { h };
                for size in lo..=max_weight {
                    stack.push((vec![ColouredPart::new(size, c)], size));
                }
            }
        }
    }
    while let Some((suffix, weight)) = stack.pop() {
        let mut parts: Vec<ColouredPart> = suffix.iter().rev().copied().collect();
        out.push(GroundedPartition {
            ground: ell,
            parts: std::mem::take(&mut parts),
        });
        let leftmost = *suffix.last().expect("suffix never empty");
        for &c in &colours {
            let h = table.h(leftmost.colour.box_vertex(), c.box_vertex());
            match mode {
                Mode::Exact => {
                    let size = leftmost.size + h;
                    if weight + size <= max_weight {
                        let mut next = suffix.clone();
                        next.push(ColouredPart::new(size, c));
                        stack.push((next, weight + size));
                    }
                }
                Mode::AtLeast => {
                    for size in (leftmost.size + h)..=(max_weight - weight) {
                        let mut next = suffix.clone();
                        next.push(ColouredPart::new(size, c));
                        stack.push((next, weight + size));
                    }
                }
            }
        }
    }
    out.sort_by_cached_key(|p| (p.weight(), p.colour_sequence(), p.parts.clone()));
    Ok(out)
}

/// Generating function of the enumerated grounded partitions:
/// sum over partitions of q^{weight} times the colour monomial.
pub fn gf_grounded(n: usize, ell: usize, max_weight: i64, minimal: bool) -> Result<Series> {
    let parts = enumerate_grounded(n, ell, max_weight, minimal)?;
    let mut s = Series::zero(n, max_weight);
    for p in &parts {
        s.add_monomial(p.monomial(n), BigInt::one());
    }
    Ok(s)
}

/// Image of a finite path under the bijection to grounded partitions: part k
/// takes the colour of the k-th path element and size
/// sum_{l >= k} H(p_{l+1} (x) p_l), with the ground appended at p_s.
pub fn path_to_partition(
    table: &EnergyTable,
    ell: usize,
    path: &[BoxVertex],
) -> Result<GroundedPartition> {
    let n = table.n();
    if ell >= n {
        return Err(Error::IndexOutOfRange { n, label: ell });
    }
    let ground = BoxCrystal::ground(ell);
    if path.last() == Some(&ground) {
        return Err(Error::BadPath(
            "path must not end with the ground element".into(),
        ));
    }
    for v in path {
        if v.l >= n || v.k >= n {
            return Err(Error::IndexOutOfRange {
                n,
                label: v.l.max(v.k),
            });
        }
    }
    let s = path.len();
    let mut parts = Vec::with_capacity(s);
    let mut size = 0i64;
    let mut sizes = vec![0i64; s];
    for k in (0..s).rev() {
        let next = if k + 1 < s { path[k + 1] } else { ground };
        size += table.h(next, path[k]);
        sizes[k] = size;
    }
    for k in 0..s {
        parts.push(ColouredPart::new(sizes[k], Colour::of_box(path[k])));
    }
    Ok(GroundedPartition { ground: ell, parts })
}

/// Inverse of [`path_to_partition`]: defined on minimal grounded partitions,
/// reading the path off the colour sequence.
pub fn partition_to_path(
    table: &EnergyTable,
    ell: usize,
    p: &GroundedPartition,
) -> Result<Vec<BoxVertex>> {
    if !is_grounded(table, ell, p, Mode::Exact) {
        return Err(Error::NotGrounded(format!(
            "{p} is not a minimal grounded partition at ground {ell}"
        )));
    }
    Ok(p.parts
        .iter()
        .map(|part| part.colour.box_vertex())
        .collect())
}

/// Splits a grounded partition into its minimal core and an ordinary
/// partition: pi = mu + nu with |pi| = |mu| + |nu|, colour sequences equal
/// after setting the ground colour to 1.
pub fn split_phi(
    table: &EnergyTable,
    ell: usize,
    p: &GroundedPartition,
) -> Result<(GroundedPartition, Vec<i64>)> {
    if !is_grounded(table, ell, p, Mode::AtLeast) {
        return Err(Error::NotGrounded(format!(
            "{p} is not a grounded partition at ground {ell}"
        )));
    }
    let ground = BoxCrystal::ground(ell);
    let s = p.parts.len();
    if s == 0 {
        return Ok((GroundedPartition::trivial(ell), Vec::new()));
    }
    let path: Vec<BoxVertex> = p.parts.iter().map(|q| q.colour.box_vertex()).collect();
    // r: index one past the last non-ground path element (0 if all ground)
    let r = (0..s)
        .rev()
        .find(|&k| path[k] != ground)
        .map_or(0, |k| k + 1);
    let mu = path_to_partition(table, ell, &path[..r])?;
    let pi_sizes: Vec<i64> = p.parts.iter().map(|q| q.size).collect();
    let nu: Vec<i64> = if r < s {
        let mut v: Vec<i64> = (0..r).map(|k| pi_sizes[k] - mu.parts[k].size).collect();
        v.extend_from_slice(&pi_sizes[r..s]);
        v
    } else {
        let t = (0..s)
            .find(|&k| pi_sizes[k] == mu.parts[k].size)
            .unwrap_or(s);
        (0..t).map(|k| pi_sizes[k] - mu.parts[k].size).collect()
    };
    debug_assert!(nu.windows(2).all(|w| w[0] >= w[1]) && nu.iter().all(|x| *x > 0));
    Ok((mu, nu))
}

/// Inverse of [`split_phi`]: adds the staircase `nu` back onto the minimal
/// partition `mu`, extending with ground-coloured parts when nu is longer.
pub fn merge_phi(
    table: &EnergyTable,
    ell: usize,
    mu: &GroundedPartition,
    nu: &[i64],
) -> Result<GroundedPartition> {
    if !is_grounded(table, ell, mu, Mode::Exact) {
        return Err(Error::NotGrounded(format!(
            "{mu} is not a minimal grounded partition at ground {ell}"
        )));
    }
    if !(nu.windows(2).all(|w| w[0] >= w[1]) && nu.iter().all(|x| *x > 0)) {
        return Err(Error::InvalidParameter(
            "nu must be a non-increasing sequence of positive parts".into(),
        ));
    }
    let gc = Colour { a: ell, b: ell };
    let r = mu.parts.len();
    let t = nu.len();
    let mut parts = Vec::with_capacity(r.max(t));
    for k in 0..r.max(t) {
        if k < r {
            let add = nu.get(k).copied().unwrap_or(0);
            parts.push(ColouredPart::new(
                mu.parts[k].size + add,
                mu.parts[k].colour,
            ));
        } else {
            parts.push(ColouredPart::new(nu[k], gc));
        }
    }
    Ok(GroundedPartition { ground: ell, parts })
}

/// A (delta, gamma) parameter pair for the generalised Capparelli class.
///
/// delta is total on bound colours; gamma is a finite table over exactly
/// those ordered pairs of bound colours where one of the three constraint
/// clauses applies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CapparelliSpec {
    pub n: usize,
    pub delta_fn: BTreeMap<Colour, i64>,
    pub gamma_fn: BTreeMap<(Colour, Colour), i64>,
}

#[derive(Serialize, Deserialize)]
struct CapparelliSpecRepr {
    n: usize,
    delta: BTreeMap<String, i64>,
    gamma: Vec<GammaEntry>,
}

#[derive(Serialize, Deserialize)]
struct GammaEntry {
    first: String,
    second: String,
    value: i64,
}

/// The three Condition-2 clause domains; mutually exclusive.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum GammaClause {
    /// max{k1,l2} < min{k2,l1}: admissible values (max{k1,l2}, min{k2,l1}].
    Separated,
    /// k1 > l1, k2 > l2, difference set non-empty.
    BothAscending,
    /// k1 < l1, k2 < l2, difference set non-empty.
    BothDescending,
}

fn range_set(lo: usize, hi: usize) -> Vec<i64> {
    // {lo+1, ..., hi} as plain integers (not cyclic)
    ((lo + 1)..=hi).map(|x| x as i64).collect()
}

fn gamma_clause(c1: Colour, c2: Colour) -> Option<(GammaClause, Vec<i64>)> {
    let (k1, l1) = (c1.a, c1.b);
    let (k2, l2) = (c2.a, c2.b);
    if k1 == l1 || k2 == l2 {
        return None;
    }
    if k1.max(l2) < k2.min(l1) {
        return Some((GammaClause::Separated, range_set(k1.max(l2), k2.min(l1))));
    }
    if k1 > l1 && k2 > l2 {
        let s: Vec<i64> = range_set(l2, k2)
            .into_iter()
            .filter(|x| !range_set(l1, k1).contains(x))
            .collect();
        if !s.is_empty() {
            return Some((GammaClause::BothAscending, s));
        }
    }
    if k1 < l1 && k2 < l2 {
        let s: Vec<i64> = range_set(k1, l1)
            .into_iter()
            .filter(|x| !range_set(k2, l2).contains(x))
            .collect();
        if !s.is_empty() {
            return Some((GammaClause::BothDescending, s));
        }
    }
    None
}

impl CapparelliSpec {
    /// delta(a_k b_l) = max{k, l}.
    pub fn delta_max(n: usize) -> BTreeMap<Colour, i64> {
        Colour::all(n)
            .filter(|c| !c.is_free())
            .map(|c| (c, c.a.max(c.b) as i64))
            .collect()
    }

    /// delta(a_k b_l) = min{k, l} + 1; the other admissible extreme.
    pub fn delta_min_plus_one(n: usize) -> BTreeMap<Colour, i64> {
        Colour::all(n)
            .filter(|c| !c.is_free())
            .map(|c| (c, c.a.min(c.b) as i64 + 1))
            .collect()
    }

    /// gamma choosing the largest (or smallest) admissible element in each
    /// clause.
    pub fn gamma_canonical(n: usize, largest: bool) -> BTreeMap<(Colour, Colour), i64> {
        let mut out = BTreeMap::new();
        for c1 in Colour::all(n) {
            for c2 in Colour::all(n) {
                if let Some((_, set)) = gamma_clause(c1, c2) {
                    let v = if largest {
                        *set.iter().max().unwrap()
                    } else {
                        *set.iter().min().unwrap()
                    };
                    out.insert((c1, c2), v);
                }
            }
        }
        out
    }

    pub fn new(
        n: usize,
        delta_fn: BTreeMap<Colour, i64>,
        gamma_fn: BTreeMap<(Colour, Colour), i64>,
    ) -> Result<Self> {
        let spec = CapparelliSpec {
            n,
            delta_fn,
            gamma_fn,
        };
        let r1 = validate_cond1(&spec);
        if !r1.valid {
            return Err(Error::InvalidSpec(r1.first_violation.unwrap_or_default()));
        }
        let r2 = validate_cond2(&spec);
        if !r2.valid {
            return Err(Error::InvalidSpec(r2.first_violation.unwrap_or_default()));
        }
        Ok(spec)
    }

    /// The standard spec: delta = max, gamma largest-admissible.
    pub fn canonical(n: usize) -> Result<Self> {
        Self::new(n, Self::delta_max(n), Self::gamma_canonical(n, true))
    }

    /// A second admissible spec: delta = min + 1, gamma smallest-admissible.
    /// For n = 2 both deltas coincide (the admissible window is a single
    /// point), so distinctness there rests on the gamma table alone.
    pub fn alternate(n: usize) -> Result<Self> {
        Self::new(
            n,
            Self::delta_min_plus_one(n),
            Self::gamma_canonical(n, false),
        )
    }

    fn delta_of(&self, c: Colour) -> Option<i64> {
        self.delta_fn.get(&c).copied()
    }

    fn gamma_of(&self, c1: Colour, c2: Colour) -> Option<i64> {
        self.gamma_fn.get(&(c1, c2)).copied()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let repr = CapparelliSpecRepr {
            n: self.n,
            delta: self
                .delta_fn
                .iter()
                .map(|(c, v)| (c.to_string(), *v))
                .collect(),
            gamma: self
                .gamma_fn
                .iter()
                .map(|((c1, c2), v)| GammaEntry {
                    first: c1.to_string(),
                    second: c2.to_string(),
                    value: *v,
                })
                .collect(),
        };
        serde_json::to_value(repr).expect("spec serialisation cannot fail")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let repr: CapparelliSpecRepr = serde_json::from_value(v.clone())
            .map_err(|e| Error::InvalidSpec(format!("bad spec JSON: {e}")))?;
        let mut delta_fn = BTreeMap::new();
        for (name, value) in repr.delta {
            delta_fn.insert(Colour::parse(repr.n, &name)?, value);
        }
        let mut gamma_fn = BTreeMap::new();
        for e in repr.gamma {
            gamma_fn.insert(
                (
                    Colour::parse(repr.n, &e.first)?,
                    Colour::parse(repr.n, &e.second)?,
                ),
                e.value,
            );
        }
        Self::new(repr.n, delta_fn, gamma_fn)
    }
}

/// Validation outcome with the first violating instance, if any.
#[derive(Clone, Debug)]
pub struct ValidationReport {
    pub valid: bool,
    pub checks: usize,
    pub first_violation: Option<String>,
}

/// Condition 1: delta is defined on every bound colour and satisfies
/// min{k,l} < delta(a_k b_l) <= max{k,l}.
pub fn validate_cond1(spec: &CapparelliSpec) -> ValidationReport {
    let mut checks = 0;
    for c in Colour::all(spec.n).filter(|c| !c.is_free()) {
        checks += 1;
        match spec.delta_of(c) {
            None => {
                return ValidationReport {
                    valid: false,
                    checks,
                    first_violation: Some(format!("delta undefined on {c}")),
                }
            }
            Some(d) => {
                let lo = c.a.min(c.b) as i64;
                let hi = c.a.max(c.b) as i64;
                if !(lo < d && d <= hi) {
                    return ValidationReport {
                        valid: false,
                        checks,
                        first_violation: Some(format!("delta({c}) = {d} outside ({lo}, {hi}]")),
                    };
                }
            }
        }
    }
    ValidationReport {
        valid: true,
        checks,
        first_violation: None,
    }
}

/// Condition 2: gamma is defined wherever one of the three clause
/// hypotheses applies and its value lies in the admissible set.
pub fn validate_cond2(spec: &CapparelliSpec) -> ValidationReport {
    let mut checks = 0;
    for c1 in Colour::all(spec.n) {
        for c2 in Colour::all(spec.n) {
            if let Some((_, set)) = gamma_clause(c1, c2) {
                checks += 1;
                match spec.gamma_of(c1, c2) {
                    None => {
                        return ValidationReport {
                            valid: false,
                            checks,
                            first_violation: Some(format!("gamma undefined on ({c1}, {c2})")),
                        }
                    }
                    Some(g) => {
                        if !set.contains(&g) {
                            return ValidationReport {
                                valid: false,
                                checks,
                                first_violation: Some(format!(
                                    "gamma({c1}, {c2}) = {g} outside {set:?}"
                                )),
                            };
                        }
                    }
                }
            }
        }
    }
    ValidationReport {
        valid: true,
        checks,
        first_violation: None,
    }
}

/// Forbidden-window scan shared by the membership test and the enumerator.
///
/// Returns true when the three parts (or two at a boundary, with the third
/// size treated as infinitely far) match one of the forbidden patterns. The
/// parts are (x, c1), (y, mid), (z, c2) in partition order and `mid` must be
/// a free colour for any pattern to apply.
fn window_forbidden(
    spec: &CapparelliSpec,
    first: Option<ColouredPart>,
    mid: ColouredPart,
    last: Option<ColouredPart>,
) -> bool {
    let i = mid.colour.a as i64;
    if !mid.colour.is_free() {
        return false;
    }
    let y = mid.size;
    // patterns anchored on (mid, last) with k2 > l2 and equal sizes
    if let Some(lastp) = last {
        let c2 = lastp.colour;
        if c2.a > c2.b && lastp.size == y {
            match first {
                None => {
                    // start of partition: u = infinity
                    if spec.delta_of(c2) == Some(i) {
                        return true;
                    }
                }
                Some(firstp) => {
                    let c1 = firstp.colour;
                    let gap = firstp.size - y;
                    if spec.delta_of(c2) == Some(i) && (gap >= 2 || (gap == 1 && c1.a <= c1.b)) {
                        return true;
                    }
                    // the clause requires the difference set non-empty,
                    // which is exactly when gamma_clause reports this shape
                    if gap == 1
                        && c1.a > c1.b
                        && spec.gamma_of(c1, c2) == Some(i)
                        && matches!(gamma_clause(c1, c2), Some((GammaClause::BothAscending, _)))
                    {
                        return true;
                    }
                }
            }
        }
    }
    // patterns anchored on (first, mid) with k1 < l1 and equal sizes
    if let Some(firstp) = first {
        let c1 = firstp.colour;
        if c1.a < c1.b && firstp.size == y {
            match last {
                None => {
                    // end of partition: u = infinity
                    if spec.delta_of(c1) == Some(i) {
                        return true;
                    }
                }
                Some(lastp) => {
                    let c2 = lastp.colour;
                    let gap = y - lastp.size;
                    if spec.delta_of(c1) == Some(i) && (gap >= 2 || (gap == 1 && c2.a >= c2.b)) {
                        return true;
                    }
                    if gap == 1
                        && c2.a < c2.b
                        && spec.gamma_of(c1, c2) == Some(i)
                        && matches!(gamma_clause(c1, c2), Some((GammaClause::BothDescending, _)))
                    {
                        return true;
                    }
                }
            }
        }
    }
    // equal-size triple with separated colours
    if let (Some(firstp), Some(lastp)) = (first, last) {
        let (c1, c2) = (firstp.colour, lastp.colour);
        if firstp.size == y
            && lastp.size == y
            && c1.a.max(c2.b) < c2.a.min(c1.b)
            && spec.gamma_of(c1, c2) == Some(i)
        {
            return true;
        }
    }
    false
}

/// Membership in the generalised Capparelli class: the Primc difference
/// conditions, no part coloured a_0 b_0, free colours never repeating at the
/// same size, and avoidance of every (delta, gamma)-indexed pattern with the
/// boundary conventions at the two ends.
pub fn capparelli_ok(spec: &CapparelliSpec, p: &PrimcPartition) -> bool {
    let n = spec.n;
    let parts = &p.parts;
    if !primc_ok(n, p) {
        return false;
    }
    if parts
        .iter()
        .any(|q| q.colour == Colour { a: 0, b: 0 } || q.size < 1)
    {
        return false;
    }
    // free colours cannot repeat
    for w in parts.windows(2) {
        if w[0].colour.is_free() && w[0].colour == w[1].colour && w[0].size == w[1].size {
            return false;
        }
    }
    let s = parts.len();
    for j in 0..s {
        let first = if j > 0 { Some(parts[j - 1]) } else { None };
        let last = if j + 1 < s { Some(parts[j + 1]) } else { None };
        if window_forbidden(spec, first, parts[j], last) {
            return false;
        }
    }
    true
}

/// Complete enumeration of generalised Capparelli partitions of weight at
/// most `max_weight`, in canonical order.
pub fn enumerate_capparelli(spec: &CapparelliSpec, max_weight: i64) -> Result<Vec<PrimcPartition>> {
    let r1 = validate_cond1(spec);
    let r2 = validate_cond2(spec);
    if !r1.valid || !r2.valid {
        return Err(Error::InvalidSpec(
            r1.first_violation
                .or(r2.first_violation)
                .unwrap_or_default(),
        ));
    }
    let n = spec.n;
    let colours: Vec<Colour> = Colour::all(n)
        .filter(|c| *c != Colour { a: 0, b: 0 })
        .collect();
    let mut out = vec![PrimcPartition { parts: Vec::new() }];
    // DFS over prefixes, largest part first. Interior windows and the start
    // boundary are monotone under extension, so they are checked as parts
    // are appended; the end boundary is re-checked on emission.
    let mut stack: Vec<(Vec<ColouredPart>, i64)> = Vec::new();
    for &c in &colours {
        for size in 1..=max_weight {
            stack.push((vec![ColouredPart::new(size, c)], size));
        }
    }
    while let Some((prefix, weight)) = stack.pop() {
        let s = prefix.len();
        // emit if the end boundary admits this prefix as a full partition
        let end_ok = if s >= 2 {
            !window_forbidden(spec, Some(prefix[s - 2]), prefix[s - 1], None)
        } else {
            true
        };
        if end_ok {
            out.push(PrimcPartition {
                parts: prefix.clone(),
            });
        }
        let lastp = prefix[s - 1];
        for &c in &colours {
            let hi = lastp.size - delta(n, lastp.colour, c);
            for size in 1..=hi.min(max_weight - weight) {
                let cand = ColouredPart::new(size, c);
                if lastp.colour.is_free() && lastp.colour == c && lastp.size == size {
                    continue;
                }
                // interior window ending at the new part, and the start
                // boundary once the second part arrives
                let interior_ok = if s >= 2 {
                    !window_forbidden(spec, Some(prefix[s - 2]), lastp, Some(cand))
                } else {
                    !window_forbidden(spec, None, lastp, Some(cand))
                };
                if interior_ok {
                    let mut next = prefix.clone();
                    next.push(cand);
                    stack.push((next, weight + size));
                }
            }
        }
    }
    out.sort_by_cached_key(|p| {
        (
            p.weight(),
            p.parts.iter().map(|q| q.colour).collect::<Vec<_>>(),
            p.parts.clone(),
        )
    });
    Ok(out)
}

/// Generating function of the Capparelli class, weighted like
/// [`gf_grounded`].
pub fn gf_capparelli(spec: &CapparelliSpec, max_weight: i64) -> Result<Series> {
    let list = enumerate_capparelli(spec, max_weight)?;
    let n = spec.n;
    let mut s = Series::zero(n, max_weight);
    for p in &list {
        let mut b = vec![0i64; n];
        for q in &p.parts {
            b[q.colour.b] += 1;
            b[q.colour.a] -= 1;
        }
        s.add_monomial(Monomial::new(p.weight(), b, 0), BigInt::one());
    }
    Ok(s)
}

/// Ordinary partition counts via grounded enumeration at n = 1: every part
/// carries the single colour a_0 b_0 and the difference condition is
/// vacuous, so weights reproduce classical partitions.
pub fn classical_partition_counts(max_weight: i64) -> Vec<u64> {
    // Delta(a_0 b_0, a_0 b_0) = 0 at n = 1, so grounded parts are simply
    // non-increasing positive integers.
    let nn = max_weight.max(0) as usize;
    let mut counts = vec![0u64; nn + 1];
    fn rec(remaining: i64, largest: i64, weight: i64, counts: &mut [u64]) {
        counts[weight as usize] += 1;
        for k in 1..=remaining.min(largest) {
            rec(remaining - k, k, weight + k, counts);
        }
    }
    rec(max_weight, max_weight, 0, &mut counts);
    counts
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::energy::min_last_part;

    fn c(a: usize, b: usize) -> Colour {
        Colour { a, b }
    }

    fn part(size: i64, a: usize, b: usize) -> ColouredPart {
        ColouredPart::new(size, c(a, b))
    }

    #[test]
    fn primc_ok_examples() {
        // (3_{a1b1}, 3_{a1b0}, 1_{a0b1}): diffs 0 and 2 against the n=2 matrix
        let p = PrimcPartition {
            parts: vec![part(3, 1, 1), part(3, 1, 0), part(1, 0, 1)],
        };
        assert!(primc_ok(2, &p));
        let bad = PrimcPartition {
            parts: vec![part(1, 1, 0), part(1, 1, 0)],
        };
        assert!(!primc_ok(2, &bad));
        assert!(primc_ok(2, &PrimcPartition { parts: vec![] }));
    }

    #[test]
    fn grounded_weight_zero() {
        for minimal in [false, true] {
            let list = enumerate_grounded(2, 0, 0, minimal).unwrap();
            assert_eq!(list.len(), 1);
            assert_eq!(list[0], GroundedPartition::trivial(0));
        }
    }

    #[test]
    fn grounded_contains_worked_example() {
        let list = enumerate_grounded(2, 0, 7, true).unwrap();
        let target = GroundedPartition {
            ground: 0,
            parts: vec![part(3, 1, 1), part(3, 1, 0), part(1, 0, 1)],
        };
        assert!(list.contains(&target));
    }

    #[test]
    fn minimal_counts_match_series_oracle() {
        // counts by weight of minimal grounded partitions at n=2, ell=0,
        // frozen from the coefficient sums of (q;q)_inf * G^P at b = 1
        let list = enumerate_grounded(2, 0, 6, true).unwrap();
        let mut counts = [0i64; 7];
        for p in &list {
            counts[p.weight() as usize] += 1;
        }
        assert_eq!(counts, [1, 3, 4, 7, 13, 19, 29]);
    }

    #[test]
    fn grounded_minimum_size_matches_min_last_part() {
        // the effective minimum of a single-part grounded partition equals
        // the closed-form minimal last part
        for n in 2..=4 {
            let table = energy_table(n).unwrap();
            for ell in 0..n {
                let list = enumerate_grounded_with_table(&table, ell, 2, false).unwrap();
                for colour in Colour::all(n) {
                    let observed = list
                        .iter()
                        .filter(|p| p.parts.len() == 1 && p.parts[0].colour == colour)
                        .map(|p| p.parts[0].size)
                        .min();
                    let expected = min_last_part(n, ell, colour).unwrap();
                    assert_eq!(observed, Some(expected), "n={n} ell={ell} {colour}");
                }
            }
        }
    }

    #[test]
    fn zero_parts_only_for_positive_ground() {
        // n=4, ell=2 admits a two-step zero tail: 0_{a0b3}, 0_{a1b2}
        let table = energy_table(4).unwrap();
        let p = GroundedPartition {
            ground: 2,
            parts: vec![part(0, 0, 3), part(0, 1, 2)],
        };
        assert!(is_grounded(&table, 2, &p, Mode::AtLeast));
        let list = enumerate_grounded_with_table(&table, 2, 0, false).unwrap();
        assert!(list.contains(&p));
        // but never at ell = 0
        let l0 = enumerate_grounded_with_table(&table, 0, 0, false).unwrap();
        assert_eq!(l0.len(), 1);
    }

    #[test]
    fn gf_weight_zero_is_one() {
        for minimal in [false, true] {
            let s = gf_grounded(2, 0, 0, minimal).unwrap();
            assert_eq!(s, Series::one(2, 0));
        }
    }

    #[test]
    fn gf_weight_one_coefficient() {
        let s = gf_grounded(2, 0, 1, false).unwrap();
        use num_bigint::BigInt;
        assert_eq!(s.coeff(&Monomial::new(0, vec![0, 0], 0)), BigInt::from(1));
        assert_eq!(s.coeff(&Monomial::new(1, vec![0, 0], 0)), BigInt::from(2));
        assert_eq!(s.coeff(&Monomial::new(1, vec![1, -1], 0)), BigInt::from(1));
        assert_eq!(s.coeff(&Monomial::new(1, vec![-1, 1], 0)), BigInt::from(1));
    }

    #[test]
    fn path_bijection_worked_example() {
        let table = energy_table(2).unwrap();
        let path = [
            BoxVertex { l: 1, k: 1 },
            BoxVertex { l: 0, k: 1 },
            BoxVertex { l: 1, k: 0 },
        ];
        let p = path_to_partition(&table, 0, &path).unwrap();
        assert_eq!(p.parts, vec![part(3, 1, 1), part(3, 1, 0), part(1, 0, 1)]);
        let empty = path_to_partition(&table, 0, &[]).unwrap();
        assert_eq!(empty, GroundedPartition::trivial(0));
        let back = partition_to_path(&table, 0, &p).unwrap();
        assert_eq!(back, path);
        // BadPath when the path ends at the ground
        let bad = [BoxVertex { l: 1, k: 1 }, BoxVertex { l: 0, k: 0 }];
        assert!(matches!(
            path_to_partition(&table, 0, &bad),
            Err(Error::BadPath(_))
        ));
    }

    #[test]
    fn path_round_trip_short_paths_n3() {
        let table = energy_table(3).unwrap();
        let boxes: Vec<BoxVertex> = BoxCrystal::new(3).unwrap().vertices().collect();
        let ground = BoxCrystal::ground(0);
        let mut paths: Vec<Vec<BoxVertex>> = vec![vec![]];
        for len in 1..=5 {
            let mut next: Vec<Vec<BoxVertex>> = Vec::new();
            for p in paths.iter().filter(|p| p.len() == len - 1) {
                for b in &boxes {
                    let mut q = p.clone();
                    q.push(*b);
                    next.push(q);
                }
            }
            paths.extend(next);
        }
        for path in paths.iter().filter(|p| p.last() != Some(&ground)) {
            let part = path_to_partition(&table, 0, path).unwrap();
            let back = partition_to_path(&table, 0, &part).unwrap();
            assert_eq!(&back, path);
        }
    }

    #[test]
    fn split_phi_worked_examples() {
        let table = energy_table(2).unwrap();
        // case t < r
        let pi = GroundedPartition {
            ground: 0,
            parts: vec![
                part(10, 0, 0),
                part(7, 1, 0),
                part(5, 0, 1),
                part(3, 1, 1),
                part(2, 0, 0),
                part(1, 1, 0),
            ],
        };
        let (mu, nu) = split_phi(&table, 0, &pi).unwrap();
        assert_eq!(
            mu.parts.iter().map(|p| p.size).collect::<Vec<_>>(),
            vec![6, 5, 3, 3, 2, 1]
        );
        assert_eq!(nu, vec![4, 2, 2]);
        assert_eq!(merge_phi(&table, 0, &mu, &nu).unwrap(), pi);

        // case t = r
        let pi = GroundedPartition {
            ground: 0,
            parts: vec![
                part(10, 0, 0),
                part(7, 1, 0),
                part(5, 0, 1),
                part(4, 1, 1),
                part(3, 0, 0),
                part(2, 1, 0),
            ],
        };
        let (mu, nu) = split_phi(&table, 0, &pi).unwrap();
        assert_eq!(
            mu.parts.iter().map(|p| p.size).collect::<Vec<_>>(),
            vec![6, 5, 3, 3, 2, 1]
        );
        assert_eq!(nu, vec![4, 2, 2, 1, 1, 1]);
        assert_eq!(merge_phi(&table, 0, &mu, &nu).unwrap(), pi);

        // case t > r
        let pi = GroundedPartition {
            ground: 0,
            parts: vec![
                part(8, 0, 0),
                part(5, 1, 0),
                part(3, 0, 1),
                part(2, 1, 1),
                part(1, 0, 0),
                part(1, 0, 0),
            ],
        };
        let (mu, nu) = split_phi(&table, 0, &pi).unwrap();
        assert_eq!(
            mu.parts.iter().map(|p| p.size).collect::<Vec<_>>(),
            vec![4, 3, 1, 1]
        );
        assert_eq!(nu, vec![4, 2, 2, 1, 1, 1]);
        assert_eq!(merge_phi(&table, 0, &mu, &nu).unwrap(), pi);

        // trivial partition maps to (trivial, empty)
        let (mu, nu) = split_phi(&table, 0, &GroundedPartition::trivial(0)).unwrap();
        assert_eq!(mu, GroundedPartition::trivial(0));
        assert!(nu.is_empty());
    }

    #[test]
    fn split_phi_rejects_non_grounded() {
        let table = energy_table(2).unwrap();
        let bad = GroundedPartition {
            ground: 0,
            parts: vec![part(1, 1, 0), part(1, 1, 0)],
        };
        assert!(matches!(
            split_phi(&table, 0, &bad),
            Err(Error::NotGrounded(_))
        ));
    }

    #[test]
    fn cond1_validators() {
        let n = 3;
        let good = CapparelliSpec {
            n,
            delta_fn: CapparelliSpec::delta_max(n),
            gamma_fn: CapparelliSpec::gamma_canonical(n, true),
        };
        assert!(validate_cond1(&good).valid);
        assert!(validate_cond2(&good).valid);

        let bad = CapparelliSpec {
            n,
            delta_fn: Colour::all(n)
                .filter(|c| !c.is_free())
                .map(|c| (c, c.a.min(c.b) as i64))
                .collect(),
            gamma_fn: CapparelliSpec::gamma_canonical(n, true),
        };
        let r = validate_cond1(&bad);
        assert!(!r.valid);
        assert!(r.first_violation.is_some());
    }

    #[test]
    fn cond2_all_clause_domains_n3_n4() {
        for n in [3, 4] {
            for largest in [true, false] {
                let spec = CapparelliSpec {
                    n,
                    delta_fn: CapparelliSpec::delta_max(n),
                    gamma_fn: CapparelliSpec::gamma_canonical(n, largest),
                };
                let r = validate_cond2(&spec);
                assert!(r.valid, "n={n} largest={largest}: {:?}", r.first_violation);
                assert!(r.checks > 0);
            }
        }
    }

    #[test]
    fn capparelli_free_colours_cannot_repeat() {
        let spec = CapparelliSpec::canonical(2).unwrap();
        let p = PrimcPartition {
            parts: vec![part(1, 1, 1), part(1, 1, 1)],
        };
        assert!(!capparelli_ok(&spec, &p));
        let q = PrimcPartition {
            parts: vec![part(1, 0, 0)],
        };
        assert!(!capparelli_ok(&spec, &q));
    }

    #[test]
    fn capparelli_weight_zero_enumeration() {
        let spec = CapparelliSpec::canonical(2).unwrap();
        let list = enumerate_capparelli(&spec, 0).unwrap();
        assert_eq!(list.len(), 1);
        assert!(list[0].parts.is_empty());
    }

    #[test]
    fn capparelli_enumeration_matches_membership_filter() {
        // enumerator with incremental checks vs brute-force filter of all
        // Primc-style sequences
        let spec = CapparelliSpec::canonical(3).unwrap();
        let max = 4i64;
        let fast = enumerate_capparelli(&spec, max).unwrap();
        let mut brute: Vec<PrimcPartition> = Vec::new();
        // enumerate every coloured sequence with sizes in 1..=max and total
        // weight <= max (sequences have at most `max` parts)
        fn rec(
            spec: &CapparelliSpec,
            max: i64,
            cur: &mut Vec<ColouredPart>,
            acc: &mut Vec<PrimcPartition>,
        ) {
            let weight: i64 = cur.iter().map(|p| p.size).sum();
            let p = PrimcPartition { parts: cur.clone() };
            if capparelli_ok(spec, &p) && !acc.contains(&p) {
                acc.push(p);
            }
            if weight >= max {
                return;
            }
            for colour in Colour::all(spec.n) {
                for size in 1..=(max - weight) {
                    cur.push(ColouredPart::new(size, colour));
                    rec(spec, max, cur, acc);
                    cur.pop();
                }
            }
        }
        rec(&spec, max, &mut Vec::new(), &mut brute);
        brute.sort_by(|a, b| {
            (
                a.weight(),
                a.parts.iter().map(|p| p.colour).collect::<Vec<_>>(),
                &a.parts,
            )
                .cmp(&(
                    b.weight(),
                    b.parts.iter().map(|p| p.colour).collect::<Vec<_>>(),
                    &b.parts,
                ))
        });
        assert_eq!(fast, brute);
    }

    #[test]
    fn capparelli_spec_json_round_trip() {
        let spec = CapparelliSpec::canonical(3).unwrap();
        let v = spec.to_json();
        let back = CapparelliSpec::from_json(&v).unwrap();
        assert_eq!(spec, back);
    }

    #[test]
    fn classical_counts_match_grounded_n1() {
        // n = 1 grounded enumeration is the classical partition class
        let counts = classical_partition_counts(8);
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15, 22]);
        let list = enumerate_grounded(1, 0, 8, false).unwrap();
        let mut by_weight = vec![0u64; 9];
        for p in &list {
            by_weight[p.weight() as usize] += 1;
        }
        assert_eq!(by_weight, counts);
        // minimal mode at n = 1 admits only the trivial partition
        let minimal = enumerate_grounded(1, 0, 8, true).unwrap();
        assert_eq!(minimal, vec![GroundedPartition::trivial(0)]);
    }

    #[test]
    fn canonical_order_is_deterministic() {
        let a = enumerate_grounded(2, 0, 4, false).unwrap();
        let b = enumerate_grounded(2, 0, 4, false).unwrap();
        assert_eq!(a, b);
        let mut sorted = a.clone();
        sorted.sort_by(|x, y| {
            (x.weight(), x.colour_sequence(), &x.parts).cmp(&(
                y.weight(),
                y.colour_sequence(),
                &y.parts,
            ))
        });
        assert_eq!(a, sorted);
    }
}
