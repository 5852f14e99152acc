//! Resolution of `z1^e = z2^f` by iterated point blowups, and the decision
//! procedure for cyclic covers that rests on it.
//!
//! Blowing up the singular point of `z1^e = z2^f` (with `e >= f`) leaves the
//! strict transform `z1^(e - f) = z2^f` and costs multiplicity `min(e, f)`.
//! The process is the subtractive Euclidean algorithm and stops once the
//! smaller exponent is 0 or 1. [`ms`] is the total multiplicity.
//!
//! For a normalized cover `(k; 1, b, c)` the curve `y^k = x (x-1)^b (x-2)^c`
//! sits in `P(O(1) + O)` with `c1 . C = 3k`; resolving its singular points
//! brings this down to `3k - ms(k, b) - ms(k, c)`.

use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use crate::covers::{CoverData, Normalization};
use crate::scalar::{self, Int};
use crate::{Error, Result};

/// Largest trace [`ms_trace`] will materialize.
pub const MAX_TRACE_STEPS: usize = 1 << 20;

/// One blowup of the singular point of `z1^e = z2^f`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlowupStep<T> {
    pub e: T,
    pub f: T,
    pub multiplicity: T,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlowupTrace<T> {
    /// One entry per blowup, in order; each has multiplicity at least 2.
    pub steps: Vec<BlowupStep<T>>,
    /// The smooth exponent pair the process ends at (its minimum is 0 or 1).
    pub terminal: (T, T),
    pub ms_total: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    TautologicalCertified,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TautDecision<T> {
    pub c1: T,
    pub genus: T,
    pub vdim: T,
    pub n_ram: T,
    pub verdict: Verdict,
    /// The datum the certificate was computed on, when one exists.
    pub witness: Option<CoverData<T>>,
    /// Whether the input admits a totally ramified normalization.
    pub normalized: bool,
    /// `c1` of each unit-orbit representative, reported when the input could
    /// not be normalized and the orbit had to be searched.
    pub orbit_c1: Vec<(CoverData<T>, T)>,
}

fn check_nonneg<T: Int>(v: &T, op: &'static str) -> Result<()> {
    if v.is_negative() {
        return Err(Error::DomainError {
            op,
            detail: format!("negative argument {v}"),
        });
    }
    Ok(())
}

/// Total multiplicity of the singular points met while resolving
/// `z1^e = z2^f`.
///
/// Runs of subtractions are collapsed with division: `q` blowups of
/// multiplicity `f` take `(e, f)` to `(e mod f, f)`.
pub fn ms<T: Int>(e: &T, f: &T) -> Result<T> {
    check_nonneg(e, "ms")?;
    check_nonneg(f, "ms")?;
    let two = T::one() + T::one();
    let (mut big, mut small) = if e >= f {
        (e.clone(), f.clone())
    } else {
        (f.clone(), e.clone())
    };
    let mut total = T::zero();
    while small >= two {
        let (q, r) = big.div_rem(&small);
        let run = scalar::mul(&q, &small, "ms")?;
        total = scalar::add(&total, &run, "ms")?;
        big = small;
        small = r;
    }
    Ok(total)
}

/// Blowup-by-blowup record of the resolution of `z1^e = z2^f`.
///
/// Exponents keep their positions: each step subtracts the smaller one from
/// the larger. Fails with `LimitExceeded` beyond [`MAX_TRACE_STEPS`] steps.
pub fn ms_trace<T: Int>(e: &T, f: &T) -> Result<BlowupTrace<T>> {
    check_nonneg(e, "ms_trace")?;
    check_nonneg(f, "ms_trace")?;
    let two = T::one() + T::one();
    let (mut e, mut f) = (e.clone(), f.clone());
    let mut steps = Vec::new();
    let mut total = T::zero();
    loop {
        let m = if e <= f { e.clone() } else { f.clone() };
        if m < two {
            break;
        }
        if steps.len() == MAX_TRACE_STEPS {
            return Err(Error::LimitExceeded {
                size: MAX_TRACE_STEPS + 1,
                limit: MAX_TRACE_STEPS,
            });
        }
        total = scalar::add(&total, &m, "ms_trace")?;
        steps.push(BlowupStep {
            e: e.clone(),
            f: f.clone(),
            multiplicity: m.clone(),
        });
        if e >= f {
            e = e - m;
        } else {
            f = f - m;
        }
    }
    Ok(BlowupTrace {
        steps,
        terminal: (e, f),
        ms_total: total,
    })
}

/// `R(e, f)`: `gcd(e, f)` when that exceeds 1, otherwise 3. Together with
/// `ms(e, f) <= e + f - R(e, f)` it bounds the multiplicity loss.
pub fn r_bound<T: Int>(e: &T, f: &T) -> Result<T> {
    if !e.is_positive() || !f.is_positive() || (e.is_one() && f.is_one()) {
        return Err(Error::DomainError {
            op: "r_bound",
            detail: format!("({e}, {f})"),
        });
    }
    let g = e.gcd(f);
    if g > T::one() {
        Ok(g)
    } else {
        scalar::from_i64(3, "r_bound")
    }
}

/// `3k - ms(k, a) - ms(k, b) - ms(k, c)`: the degree of `c1` of the blown-up
/// surface on the resolved curve. For `a = 1` the first correction vanishes.
pub fn c1_after_desingularization<T: Int>(cover: &CoverData<T>) -> Result<T> {
    let k = cover.k();
    let three: T = scalar::from_i64(3, "c1")?;
    let mut c1 = scalar::mul(&three, k, "c1")?;
    for m in cover.mono() {
        c1 = scalar::sub(&c1, &ms(k, m)?, "c1")?;
    }
    Ok(c1)
}

struct Numbers<T> {
    c1: T,
    genus: T,
    vdim: T,
    n_ram: T,
}

impl<T: Int> Numbers<T> {
    fn of(cover: &CoverData<T>) -> Result<Self> {
        let inv = cover.invariants()?;
        let c1 = c1_after_desingularization(cover)?;
        let vdim = scalar::sub(&scalar::add(&c1, &inv.genus, "vdim")?, &T::one(), "vdim")?;
        Ok(Numbers {
            c1,
            genus: inv.genus,
            vdim,
            n_ram: inv.n_ram,
        })
    }

    fn certifies(&self) -> Result<bool> {
        let two = T::one() + T::one();
        let chi = scalar::mul(&two, &self.genus, "stability")? - two;
        let stable = scalar::add(&chi, &self.n_ram, "stability")?.is_positive();
        Ok(self.c1.is_positive() && self.n_ram <= self.vdim && stable)
    }

    fn into_decision(
        self,
        verdict: Verdict,
        witness: Option<CoverData<T>>,
        normalized: bool,
        orbit_c1: Vec<(CoverData<T>, T)>,
    ) -> TautDecision<T> {
        TautDecision {
            c1: self.c1,
            genus: self.genus,
            vdim: self.vdim,
            n_ram: self.n_ram,
            verdict,
            witness,
            normalized,
            orbit_c1,
        }
    }
}

/// Decides whether the ramification-marked cover curve is certified to be a
/// tautological point: positive `c1` on the resolved curve and no more
/// ramification points than the virtual dimension `c1 + g - 1`.
///
/// Without a totally ramified branch point the whole unit orbit is searched
/// for a representative that passes; if none does, the answer is
/// `Inconclusive` and the numbers reported are those of the input.
pub fn decide_tautological<T: Int>(cover: &CoverData<T>) -> Result<TautDecision<T>> {
    match cover.normalize_total_ramification()? {
        Normalization::Normalized(datum) => {
            let nums = Numbers::of(&datum)?;
            let verdict = if nums.certifies()? {
                Verdict::TautologicalCertified
            } else {
                Verdict::Inconclusive
            };
            Ok(nums.into_decision(verdict, Some(datum), true, Vec::new()))
        }
        Normalization::NotNormalizable => {
            let mut orbit_c1 = Vec::new();
            let mut witness = None;
            for rep in cover.unit_orbit()? {
                let nums = Numbers::of(&rep)?;
                if witness.is_none() && nums.certifies()? {
                    witness = Some(rep.clone());
                }
                orbit_c1.push((rep, nums.c1));
            }
            match witness {
                Some(w) => {
                    let nums = Numbers::of(&w)?;
                    Ok(nums.into_decision(
                        Verdict::TautologicalCertified,
                        Some(w),
                        false,
                        orbit_c1,
                    ))
                }
                None => Ok(Numbers::of(cover)?.into_decision(
                    Verdict::Inconclusive,
                    None,
                    false,
                    orbit_c1,
                )),
            }
        }
    }
}

/// A normalized datum at which the chain of inequalities behind the decision
/// fails.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InequalityViolation {
    pub k: i64,
    pub b: i64,
    pub c: i64,
    pub c1: i64,
    pub vdim: i64,
    pub n_ram: i64,
    pub lower_bound: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InequalityReport {
    pub k_max: i64,
    pub checked: usize,
    pub violations: Vec<InequalityViolation>,
}

impl InequalityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn inequality_at(k: i64, b: i64) -> Result<Option<InequalityViolation>> {
    let c = k - 1 - b;
    let cover = CoverData::validate(k, [1, b, c])?;
    let nums = Numbers::of(&cover)?;
    let slack = |m: i64| -> Result<i64> { Ok(r_bound(&k, &m)? - k.gcd(&m)) };
    let lower_bound = nums.genus - 1 + slack(b)? + slack(c)?;
    let holds = nums.vdim - nums.n_ram >= lower_bound && nums.c1 >= 1;
    Ok((!holds).then_some(InequalityViolation {
        k,
        b,
        c,
        c1: nums.c1,
        vdim: nums.vdim,
        n_ram: nums.n_ram,
        lower_bound,
    }))
}

/// Checks, for every normalized `(k; 1, b, c)` with `k <= k_max`, that
/// `vdim - n >= g - 1 + (R(k,b) - gcd(k,b)) + (R(k,c) - gcd(k,c))` and
/// `c1 >= 1`. Runs on the current rayon pool.
pub fn verify_decision_inequality(k_max: i64) -> Result<InequalityReport> {
    if k_max < 2 {
        return Err(Error::DomainError {
            op: "verify_decision_inequality",
            detail: format!("k_max = {k_max} < 2"),
        });
    }
    let pairs: Vec<(i64, i64)> = (3..=k_max)
        .flat_map(|k| (1..=k - 2).map(move |b| (k, b)))
        .collect();
    let results: Vec<Option<InequalityViolation>> = pairs
        .par_iter()
        .map(|&(k, b)| inequality_at(k, b))
        .collect::<Result<_>>()?;
    Ok(InequalityReport {
        k_max,
        checked: pairs.len(),
        violations: results.into_iter().flatten().collect(),
    })
}

/// Failures of the `ms` axioms or of the bound `ms <= e + f - R`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MsSuiteReport {
    pub max: i64,
    pub pairs_checked: usize,
    pub symmetry_failures: Vec<(i64, i64)>,
    pub base_failures: Vec<(i64, i64)>,
    pub recursion_failures: Vec<(i64, i64)>,
    pub bound_failures: Vec<(i64, i64)>,
}

impl MsSuiteReport {
    pub fn passed(&self) -> bool {
        self.symmetry_failures.is_empty()
            && self.base_failures.is_empty()
            && self.recursion_failures.is_empty()
            && self.bound_failures.is_empty()
    }
}

/// Checks symmetry, the vanishing on `f in {0, 1}`, the subtractive
/// recursion and the `R` bound for all `0 <= f <= e <= max`.
pub fn verify_ms_suite(max: i64) -> Result<MsSuiteReport> {
    if max < 0 {
        return Err(Error::DomainError {
            op: "verify_ms_suite",
            detail: format!("max = {max}"),
        });
    }
    let rows: Vec<[Vec<(i64, i64)>; 4]> = (0..=max)
        .into_par_iter()
        .map(|e| -> Result<[Vec<(i64, i64)>; 4]> {
            let mut out: [Vec<(i64, i64)>; 4] = Default::default();
            for f in 0..=e {
                let v = ms(&e, &f)?;
                if v != ms(&f, &e)? {
                    out[0].push((e, f));
                }
                if f <= 1 && v != 0 {
                    out[1].push((e, f));
                }
                if f >= 2 && v != f + ms(&(e - f), &f)? {
                    out[2].push((e, f));
                }
                if f >= 1 && (e, f) != (1, 1) && v > e + f - r_bound(&e, &f)? {
                    out[3].push((e, f));
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let mut report = MsSuiteReport {
        max,
        pairs_checked: 0,
        symmetry_failures: Vec::new(),
        base_failures: Vec::new(),
        recursion_failures: Vec::new(),
        bound_failures: Vec::new(),
    };
    for (e, [sym, base, rec, bound]) in rows.into_iter().enumerate() {
        report.pairs_checked += e + 1;
        report.symmetry_failures.extend(sym);
        report.base_failures.extend(base);
        report.recursion_failures.extend(rec);
        report.bound_failures.extend(bound);
    }
    Ok(report)
}
