//! Upper bounds for `T(g, n)`, the number of points needed to complete a
//! point of `M̄_{g,n}` to a tautological sum.
//!
//! Base cases come from the rationally connected range `n <= n_max(g)`,
//! where `T = 1`. Beyond it bounds are propagated with
//! `T(g, n + m) <= (g m + 1) T(g, n)`.
//!
//! The recursion rests on trading points on `C^m`: given `Q_1 = (x_1, ...,
//! x_m)` one finds `Q_2, ..., Q_{gm+1}` summing to `(gm + 1)` times the
//! anchor tuple `(p, ..., p)`. [`trade_points`] carries this out on an
//! elliptic curve, modelled by a finite abelian group under the isomorphism
//! `x ↦ [x] - [O]` from points to degree-0 classes. On such a curve every
//! degree-1 class `Σ n_i [y_i]` is the class of the single point `Σ n_i y_i`.

use std::collections::BTreeMap;

use serde::{Serialize, Serializer};

use crate::{Error, Result};

/// Largest number of markings for which `M̄_{g,n}` is known to be
/// rationally connected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum NMax {
    Unbounded,
    Finite(u32),
}

impl NMax {
    pub fn admits(self, n: u32) -> bool {
        match self {
            NMax::Unbounded => true,
            NMax::Finite(m) => n <= m,
        }
    }
}

impl Serialize for NMax {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            NMax::Unbounded => s.serialize_str("inf"),
            NMax::Finite(m) => s.serialize_u32(*m),
        }
    }
}

/// Rational connectedness range by genus, `g = 0, ..., 15`.
pub const RATIONALLY_CONNECTED: [NMax; 16] = [
    NMax::Unbounded,
    NMax::Finite(10),
    NMax::Finite(12),
    NMax::Finite(14),
    NMax::Finite(15),
    NMax::Finite(12),
    NMax::Finite(15),
    NMax::Finite(11),
    NMax::Finite(8),
    NMax::Finite(9),
    NMax::Finite(3),
    NMax::Finite(10),
    NMax::Finite(1),
    NMax::Finite(0),
    NMax::Finite(2),
    NMax::Finite(0),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BaseKind {
    /// `M̄_{g,n}` rationally connected, so `T = 1`.
    RationallyConnected,
    /// Degree of `M̄_{g,n}` under a very ample class.
    DegreeBound,
    /// A Hurwitz number with matching ramification data.
    HurwitzBound,
    /// No numerical bound known; the result is relative to `T(g, n0)`.
    Unresolved,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BaseCell {
    pub genus: u32,
    pub markings: u32,
    /// Known bound on `T(genus, markings)`; `None` for unresolved cells.
    pub value: Option<u64>,
    pub kind: BaseKind,
}

/// One application of `T(g, n + m) <= (g m + 1) T(g, n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RecursionStep {
    pub from_markings: u32,
    pub added: u32,
    pub factor: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub base: BaseCell,
    pub steps: Vec<RecursionStep>,
}

impl Provenance {
    /// Recomputes the multiplier from the recorded steps, checking that they
    /// chain from the base cell.
    pub fn replay_multiplier(&self) -> Result<u64> {
        let g = self.base.genus as u64;
        let mut at = self.base.markings;
        let mut mult: u64 = 1;
        for step in &self.steps {
            if step.from_markings != at {
                return Err(Error::DomainError {
                    op: "replay",
                    detail: format!("step starts at {} but chain is at {at}", step.from_markings),
                });
            }
            let factor = recursion_factor(g, step.added as u64)?;
            if factor != step.factor {
                return Err(Error::DomainError {
                    op: "replay",
                    detail: format!("recorded factor {} != {factor}", step.factor),
                });
            }
            mult = mult.checked_mul(factor).ok_or(Error::Overflow("replay"))?;
            at += step.added;
        }
        Ok(mult)
    }

    /// The bound the chain proves, when the base value is known.
    pub fn replay(&self) -> Result<Option<u64>> {
        let mult = self.replay_multiplier()?;
        self.base
            .value
            .map(|v| v.checked_mul(mult).ok_or(Error::Overflow("replay")))
            .transpose()
    }

    pub fn end_markings(&self) -> u32 {
        self.base.markings + self.steps.iter().map(|s| s.added).sum::<u32>()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TBound {
    pub genus: u32,
    pub markings: u32,
    /// `T(g, n) <= bound`, or `None` when the base is unresolved and only
    /// `T(g, n) <= multiplier · T(g, n0)` is known.
    pub bound: Option<u64>,
    pub multiplier: u64,
    pub provenance: Provenance,
}

/// `g m + 1`.
pub fn recursion_factor(g: u64, m: u64) -> Result<u64> {
    g.checked_mul(m)
        .and_then(|x| x.checked_add(1))
        .ok_or(Error::Overflow("recursion factor"))
}

/// `(g m1 + 1)(g m2 + 1) >= g (m1 + m2) + 1`: splitting a recursion into two
/// applications never improves on a single one.
pub fn single_application_dominates(g: u64, m1: u64, m2: u64) -> Result<bool> {
    let two_steps = recursion_factor(g, m1)?
        .checked_mul(recursion_factor(g, m2)?)
        .ok_or(Error::Overflow("dominance"))?;
    let one_step = recursion_factor(g, m1.checked_add(m2).ok_or(Error::Overflow("dominance"))?)?;
    Ok(two_steps >= one_step)
}

fn stable(g: u32, n: u32) -> bool {
    2 * g as i64 - 2 + n as i64 > 0
}

/// Base cases by genus plus any extra cells registered with
/// [`TBoundTable::add_base`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TBoundTable {
    pub base: BTreeMap<u32, NMax>,
    pub extra: Vec<BaseCell>,
}

impl Default for TBoundTable {
    fn default() -> Self {
        Self::rationally_connected()
    }
}

impl TBoundTable {
    /// The table of rationally connected ranges for genus 0 to 15.
    pub fn rationally_connected() -> Self {
        TBoundTable {
            base: (0u32..).zip(RATIONALLY_CONNECTED).collect(),
            extra: Vec::new(),
        }
    }

    pub fn add_base(&mut self, cell: BaseCell) -> Result<()> {
        if !stable(cell.genus, cell.markings) {
            return Err(Error::UnstablePair {
                g: cell.genus,
                n: cell.markings,
            });
        }
        if cell.value.is_none() || cell.value == Some(0) {
            return Err(Error::DomainError {
                op: "add_base",
                detail: "base cells need a positive value".into(),
            });
        }
        self.extra.push(cell);
        Ok(())
    }

    fn candidates(&self, g: u32, n: u32) -> Vec<BaseCell> {
        let mut out = Vec::new();
        match self.base.get(&g) {
            Some(&nmax) if nmax.admits(n) => out.push(BaseCell {
                genus: g,
                markings: n,
                value: Some(1),
                kind: BaseKind::RationallyConnected,
            }),
            Some(&NMax::Finite(m)) => {
                if let Some(n0) = (0..=m).rev().find(|&n0| stable(g, n0)) {
                    out.push(BaseCell {
                        genus: g,
                        markings: n0,
                        value: Some(1),
                        kind: BaseKind::RationallyConnected,
                    });
                }
            }
            _ => {}
        }
        out.extend(
            self.extra
                .iter()
                .filter(|c| c.genus == g && c.markings <= n)
                .copied(),
        );
        out
    }

    /// Smallest bound reachable from a single base cell with at most one
    /// recursion step.
    pub fn bound(&self, g: u32, n: u32) -> Result<TBound> {
        if !stable(g, n) {
            return Err(Error::UnstablePair { g, n });
        }
        let mut best: Option<TBound> = None;
        for base in self.candidates(g, n) {
            let candidate = self.apply(g, n, base)?;
            let better = match &best {
                None => true,
                Some(b) => candidate.bound < b.bound,
            };
            if better {
                best = Some(candidate);
            }
        }
        if let Some(b) = best {
            return Ok(b);
        }
        if 2 * g < 3 {
            return Err(Error::NoBaseCase(g));
        }
        let base = BaseCell {
            genus: g,
            markings: 0,
            value: None,
            kind: BaseKind::Unresolved,
        };
        self.apply(g, n, base)
    }

    fn apply(&self, g: u32, n: u32, base: BaseCell) -> Result<TBound> {
        let added = n - base.markings;
        let steps = if added == 0 {
            Vec::new()
        } else {
            vec![RecursionStep {
                from_markings: base.markings,
                added,
                factor: recursion_factor(g as u64, added as u64)?,
            }]
        };
        let provenance = Provenance { base, steps };
        let multiplier = provenance.replay_multiplier()?;
        Ok(TBound {
            genus: g,
            markings: n,
            bound: provenance.replay()?,
            multiplier,
            provenance,
        })
    }
}

/// Best bound on `T(g, n)` from the rationally connected table.
pub fn t_upper_bound(g: u32, n: u32) -> Result<TBound> {
    TBoundTable::rationally_connected().bound(g, n)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConsistencyFailure {
    pub genus: u32,
    pub markings: u32,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConsistencyReport {
    pub genus_max: u32,
    pub markings_max: u32,
    pub checked: usize,
    pub failures: Vec<ConsistencyFailure>,
}

impl ConsistencyReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// For every stable `(g, n)` with `g <= genus_max`, `n <= markings_max`:
/// provenance replays to the stored bound, ends at `(g, n)`, and
/// `T(g, n + 1) <= (g + 1) T(g, n)` holds between neighbouring cells.
pub fn verify_recursion_consistency(
    table: &TBoundTable,
    genus_max: u32,
    markings_max: u32,
) -> Result<ConsistencyReport> {
    let mut report = ConsistencyReport {
        genus_max,
        markings_max,
        checked: 0,
        failures: Vec::new(),
    };
    for g in 0..=genus_max {
        for n in 0..=markings_max {
            if !stable(g, n) {
                continue;
            }
            report.checked += 1;
            let here = table.bound(g, n)?;
            let next = table.bound(g, n + 1)?;
            let mut fail = |detail: String| {
                report.failures.push(ConsistencyFailure {
                    genus: g,
                    markings: n,
                    detail,
                })
            };
            if here.provenance.replay()? != here.bound
                || here.provenance.replay_multiplier()? != here.multiplier
            {
                fail("provenance does not replay to the stored bound".into());
            }
            if here.provenance.end_markings() != n || here.provenance.base.genus != g {
                fail("provenance does not end at the cell".into());
            }
            let step = recursion_factor(g as u64, 1)?;
            match (here.bound, next.bound) {
                (Some(a), Some(b)) => {
                    if b > a.saturating_mul(step) {
                        fail(format!("T({g},{}) <= {b} exceeds {step} * {a}", n + 1));
                    }
                }
                (None, None) if here.provenance.base == next.provenance.base => {
                    if next.multiplier > here.multiplier.saturating_mul(step) {
                        fail(format!(
                            "relative multiplier {} exceeds {step} * {}",
                            next.multiplier, here.multiplier
                        ));
                    }
                }
                _ => fail("neighbouring bounds are not comparable".into()),
            }
        }
    }
    Ok(report)
}

/// `Z/o_1 × ... × Z/o_r`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiniteAbelianGroup {
    orders: Vec<u64>,
}

pub type GroupElement = Vec<u64>;

impl FiniteAbelianGroup {
    pub fn new(orders: Vec<u64>) -> Result<Self> {
        if orders.is_empty() || orders.contains(&0) {
            return Err(Error::InvalidGroup(format!("cyclic orders {orders:?}")));
        }
        let order = orders
            .iter()
            .try_fold(1u64, |acc, &o| acc.checked_mul(o))
            .ok_or(Error::Overflow("group order"))?;
        if order < 2 {
            return Err(Error::InvalidGroup("group order must be at least 2".into()));
        }
        Ok(FiniteAbelianGroup { orders })
    }

    /// Parses cyclic orders separated by `x` or `,`, e.g. `7` or `2x3`.
    pub fn parse(text: &str) -> Result<Self> {
        let orders = text
            .split(['x', ','])
            .map(|t| {
                t.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::InvalidGroup(format!("bad cyclic order {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(orders)
    }

    /// Parses an element with components separated by `:`, e.g. `1:2`.
    pub fn parse_element(&self, s: &str) -> Result<GroupElement> {
        let x = s
            .split(':')
            .map(|t| {
                t.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::InvalidGroup(format!("bad element component {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        self.check(&x)?;
        Ok(x)
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn order(&self) -> u64 {
        self.orders.iter().product()
    }

    pub fn zero(&self) -> GroupElement {
        vec![0; self.orders.len()]
    }

    pub fn check(&self, x: &[u64]) -> Result<()> {
        if x.len() != self.orders.len() || x.iter().zip(&self.orders).any(|(a, o)| a >= o) {
            return Err(Error::InvalidGroup(format!(
                "{x:?} is not an element of Z/{}",
                self.orders
                    .iter()
                    .map(u64::to_string)
                    .collect::<Vec<_>>()
                    .join(" x Z/")
            )));
        }
        Ok(())
    }

    pub fn add(&self, x: &[u64], y: &[u64]) -> GroupElement {
        x.iter()
            .zip(y)
            .zip(&self.orders)
            .map(|((a, b), o)| ((*a as u128 + *b as u128) % *o as u128) as u64)
            .collect()
    }

    pub fn neg(&self, x: &[u64]) -> GroupElement {
        x.iter()
            .zip(&self.orders)
            .map(|(a, o)| (o - a) % o)
            .collect()
    }

    /// `k · x` for a signed multiplier.
    pub fn scale(&self, k: i64, x: &[u64]) -> GroupElement {
        x.iter()
            .zip(&self.orders)
            .map(|(a, o)| {
                let o = *o as i128;
                ((k as i128).rem_euclid(o) * *a as i128 % o) as u64
            })
            .collect()
    }

    pub fn sum<'a>(&self, xs: impl IntoIterator<Item = &'a GroupElement>) -> GroupElement {
        xs.into_iter().fold(self.zero(), |acc, x| self.add(&acc, x))
    }
}

/// The solve at one stage: `[solution] = (w + 1)[anchor] - w[replaced]` in
/// the Chow group of the curve, i.e. `solution + w·replaced = (w+1)·anchor`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StageIdentity {
    /// 1-based coordinate traded at this stage.
    pub coordinate: usize,
    pub weight: u64,
    pub replaced: GroupElement,
    pub solution: GroupElement,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TradeTrace {
    pub group: FiniteAbelianGroup,
    pub anchor: GroupElement,
    pub m: usize,
    /// `Q_1, ..., Q_{m+1}`.
    pub tuples: Vec<Vec<GroupElement>>,
    /// `(anchor, ..., anchor)`.
    pub target: Vec<GroupElement>,
    pub stages: Vec<StageIdentity>,
}

impl TradeTrace {
    /// In every coordinate the `m + 1` entries sum to `(m + 1)·anchor`.
    pub fn coordinate_sums_hold(&self) -> bool {
        let expected = self.group.scale(self.m as i64 + 1, &self.anchor);
        self.tuples.len() == self.m + 1
            && (0..self.m).all(|i| {
                let column: Vec<GroupElement> = self.tuples.iter().map(|q| q[i].clone()).collect();
                self.group.sum(&column) == expected
            })
    }

    pub fn stages_hold(&self) -> bool {
        self.stages.len() == self.m
            && self.stages.iter().enumerate().all(|(i, s)| {
                let w = s.weight as i64;
                s.coordinate == i + 1
                    && s.weight == (i + 1) as u64
                    && self
                        .group
                        .add(&s.solution, &self.group.scale(w, &s.replaced))
                        == self.group.scale(w + 1, &self.anchor)
            })
    }
}

/// Trades `Q_1 = start` for `m + 1` tuples whose classes sum to `(m + 1)`
/// times the anchor tuple. Stage `i` replaces coordinate `i` of the running
/// tuple by the unique point `(i + 1)·anchor - i·x_i`, then fixes it at the
/// anchor for later tuples.
pub fn trade_points(
    group: &FiniteAbelianGroup,
    anchor: &[u64],
    start: &[GroupElement],
) -> Result<TradeTrace> {
    group.check(anchor)?;
    if start.is_empty() {
        return Err(Error::DomainError {
            op: "trade_points",
            detail: "need at least one coordinate".into(),
        });
    }
    for x in start {
        group.check(x)?;
    }
    let m = start.len();
    let mut tuples = vec![start.to_vec()];
    let mut stages = Vec::with_capacity(m);
    let mut running = start.to_vec();
    for i in 0..m {
        let w = (i + 1) as i64;
        let replaced = running[i].clone();
        let solution = group.add(
            &group.scale(w + 1, anchor),
            &group.neg(&group.scale(w, &replaced)),
        );
        let mut next = running.clone();
        next[i] = solution.clone();
        tuples.push(next);
        stages.push(StageIdentity {
            coordinate: i + 1,
            weight: w as u64,
            replaced,
            solution,
        });
        running[i] = anchor.to_vec();
    }
    Ok(TradeTrace {
        group: group.clone(),
        anchor: anchor.to_vec(),
        m,
        tuples,
        target: vec![anchor.to_vec(); m],
        stages,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bound_examples() {
        let b = t_upper_bound(1, 10).unwrap();
        assert_eq!(b.bound, Some(1));
        assert!(b.provenance.steps.is_empty());

        let b = t_upper_bound(1, 11).unwrap();
        assert_eq!(b.bound, Some(2));
        assert_eq!(b.provenance.base.markings, 10);
        assert_eq!(b.provenance.steps[0].added, 1);

        let b = t_upper_bound(13, 5).unwrap();
        assert_eq!(b.bound, Some(66));
        assert_eq!(b.provenance.base.markings, 0);
        assert_eq!(b.provenance.steps[0].added, 5);
    }

    #[test]
    fn genus_zero_is_always_one() {
        for n in 3..200 {
            assert_eq!(t_upper_bound(0, n).unwrap().bound, Some(1));
        }
    }

    #[test]
    fn unstable_and_beyond_table() {
        assert!(matches!(t_upper_bound(0, 2), Err(Error::UnstablePair { .. })));
        assert!(matches!(t_upper_bound(1, 0), Err(Error::UnstablePair { .. })));
        let b = t_upper_bound(20, 3).unwrap();
        assert_eq!(b.bound, None);
        assert_eq!(b.multiplier, 61);
        assert_eq!(b.provenance.base.kind, BaseKind::Unresolved);
    }

    #[test]
    fn extra_base_cells_take_part() {
        let mut table = TBoundTable::rationally_connected();
        table
            .add_base(BaseCell {
                genus: 13,
                markings: 4,
                value: Some(3),
                kind: BaseKind::DegreeBound,
            })
            .unwrap();
        // From (13, 4): (13 + 1) * 3 = 42 beats 66.
        let b = table.bound(13, 5).unwrap();
        assert_eq!(b.bound, Some(42));
        assert_eq!(b.provenance.base.kind, BaseKind::DegreeBound);
        assert_eq!(table.bound(13, 1).unwrap().bound, Some(14));
        assert!(table
            .add_base(BaseCell {
                genus: 1,
                markings: 0,
                value: Some(1),
                kind: BaseKind::HurwitzBound
            })
            .is_err());
    }

    #[test]
    fn replay_rejects_tampering() {
        let mut b = t_upper_bound(13, 5).unwrap();
        b.provenance.steps[0].factor = 65;
        assert!(b.provenance.replay().is_err());
    }

    #[test]
    fn consistency_examples() {
        let table = TBoundTable::rationally_connected();
        assert!(verify_recursion_consistency(&table, 1, 20).unwrap().passed());
        assert!(verify_recursion_consistency(&table, 20, 12).unwrap().passed());
    }

    #[test]
    fn trade_z7_example() {
        let g = FiniteAbelianGroup::new(vec![7]).unwrap();
        let t = trade_points(&g, &[0], &[vec![3], vec![5]]).unwrap();
        assert_eq!(
            t.tuples,
            vec![
                vec![vec![3], vec![5]],
                vec![vec![4], vec![5]],
                vec![vec![0], vec![4]]
            ]
        );
        assert!(t.coordinate_sums_hold());
        assert!(t.stages_hold());
    }

    #[test]
    fn trade_m1_is_negation() {
        let g = FiniteAbelianGroup::parse("2x3").unwrap();
        for a in 0..2 {
            for b in 0..3 {
                let x = vec![a, b];
                let t = trade_points(&g, &g.zero(), std::slice::from_ref(&x)).unwrap();
                assert_eq!(t.tuples[1][0], g.neg(&x));
                assert!(t.coordinate_sums_hold());
            }
        }
    }

    #[test]
    fn trade_anchor_constant_is_fixed() {
        let g = FiniteAbelianGroup::parse("4,6").unwrap();
        let p = vec![3, 5];
        let t = trade_points(&g, &p, &vec![p.clone(); 4]).unwrap();
        assert!(t.tuples.iter().all(|q| *q == t.target));
    }

    #[test]
    fn group_parsing() {
        let g = FiniteAbelianGroup::parse("2x3").unwrap();
        assert_eq!(g.order(), 6);
        assert_eq!(g.parse_element("1:2").unwrap(), vec![1, 2]);
        assert!(g.parse_element("2:0").is_err());
        assert!(g.parse_element("1").is_err());
        assert!(FiniteAbelianGroup::parse("1").is_err());
        assert!(FiniteAbelianGroup::parse("0x5").is_err());
        assert!(FiniteAbelianGroup::parse("a").is_err());
    }

    #[test]
    fn dominance_small() {
        for g in 0..16 {
            for m1 in 0..10 {
                for m2 in 0..10 {
                    assert!(single_application_dominates(g, m1, m2).unwrap());
                }
            }
        }
    }
}
