//! Formal 0-cycles on a product `S^n`.
//!
//! A [`FormalCycle`] is an integer combination of `n`-tuples of point
//! symbols. The module provides diagonal push-forwards indexed by set
//! partitions and the inclusion-exclusion expansion writing the symmetrized
//! cycle `Σ_σ [σ.p]` in terms of `θ = [p_1] + ... + [p_n]` alone:
//!
//! ```text
//! Σ_σ [σ.p] = Σ_P  Π_{B ∈ P} (-1)^{|B|-1} (|B|-1)!  ·  (Δ_P)_*(θ^{×|P|})
//! ```

use std::collections::BTreeMap;

use serde::Serialize;

use crate::scalar::{self, Int};
use crate::{Error, Result};

/// Largest `n` [`verify_blockwise_identity`] expands by default.
pub const DEFAULT_BRUTE_FORCE_LIMIT: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FormalCycle<S: Ord, T> {
    arity: usize,
    terms: BTreeMap<Vec<S>, T>,
}

impl<S: Ord + Clone, T: Int> FormalCycle<S, T> {
    pub fn zero(arity: usize) -> Self {
        FormalCycle {
            arity,
            terms: BTreeMap::new(),
        }
    }

    /// The class `[(s_1, ..., s_n)]`.
    pub fn point(tuple: Vec<S>) -> Self {
        let mut c = Self::zero(tuple.len());
        c.terms.insert(tuple, T::one());
        c
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> &BTreeMap<Vec<S>, T> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, tuple: &[S]) -> T {
        self.terms.get(tuple).cloned().unwrap_or_else(T::zero)
    }

    /// Adds `coeff · [tuple]`, dropping the term if it cancels.
    pub fn add_term(&mut self, tuple: Vec<S>, coeff: T) -> Result<()> {
        if tuple.len() != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: tuple.len(),
            });
        }
        if coeff.is_zero() {
            return Ok(());
        }
        match self.terms.get_mut(&tuple) {
            Some(c) => {
                *c = scalar::add(c, &coeff, "cycle addition")?;
                if c.is_zero() {
                    self.terms.remove(&tuple);
                }
            }
            None => {
                self.terms.insert(tuple, coeff);
            }
        }
        Ok(())
    }

    /// `self + scale · other`.
    pub fn add_scaled(&mut self, other: &Self, scale: &T) -> Result<()> {
        if other.arity != self.arity {
            return Err(Error::ArityMismatch {
                expected: self.arity,
                found: other.arity,
            });
        }
        for (tuple, c) in &other.terms {
            self.add_term(tuple.clone(), scalar::mul(c, scale, "cycle scaling")?)?;
        }
        Ok(())
    }

    /// Exterior product on `S^a × S^b = S^(a+b)`.
    pub fn product(&self, other: &Self) -> Result<Self> {
        let mut out = Self::zero(self.arity + other.arity);
        for (x, a) in &self.terms {
            for (y, b) in &other.terms {
                let mut t = x.clone();
                t.extend(y.iter().cloned());
                out.add_term(t, scalar::mul(a, b, "cycle product")?)?;
            }
        }
        Ok(out)
    }

    /// `l`-fold exterior power; the zeroth power is the unit `[()]`.
    pub fn power(&self, l: usize) -> Result<Self> {
        let mut out = Self::point(Vec::new());
        for _ in 0..l {
            out = out.product(self)?;
        }
        Ok(out)
    }
}

/// A set partition of `{1, ..., n}`, blocks sorted internally and ordered by
/// least element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct SetPartition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl SetPartition {
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut blocks: Vec<Vec<usize>> = blocks
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b
            })
            .collect();
        if blocks.iter().any(|b| b.is_empty()) {
            return Err(Error::InvalidPartition("empty block".into()));
        }
        blocks.sort_unstable_by_key(|b| b[0]);
        let mut all: Vec<usize> = blocks.iter().flatten().copied().collect();
        all.sort_unstable();
        if all != (1..=n).collect::<Vec<_>>() {
            return Err(Error::InvalidPartition(format!(
                "blocks {blocks:?} do not partition 1..={n}"
            )));
        }
        Ok(SetPartition { n, blocks })
    }

    /// From a restricted growth string: element `i + 1` lies in block `rgs[i]`.
    fn from_rgs(rgs: &[usize]) -> Self {
        let nblocks = rgs.iter().max().map_or(0, |m| m + 1);
        let mut blocks = vec![Vec::new(); nblocks];
        for (i, &b) in rgs.iter().enumerate() {
            blocks[b].push(i + 1);
        }
        SetPartition {
            n: rgs.len(),
            blocks,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Block index of each element, 0-based by element.
    pub fn block_of(&self) -> Vec<usize> {
        let mut of = vec![0; self.n];
        for (i, b) in self.blocks.iter().enumerate() {
            for &x in b {
                of[x - 1] = i;
            }
        }
        of
    }
}

/// All set partitions of `{1, ..., n}` in restricted-growth-string order.
pub fn set_partitions(n: usize) -> Vec<SetPartition> {
    let mut out = Vec::new();
    let mut rgs = vec![0usize; n];
    fn rec(i: usize, max: usize, rgs: &mut Vec<usize>, out: &mut Vec<SetPartition>) {
        if i == rgs.len() {
            out.push(SetPartition::from_rgs(rgs));
            return;
        }
        let limit = if i == 0 { 0 } else { max + 1 };
        for b in 0..=limit {
            rgs[i] = b;
            rec(i + 1, max.max(b), rgs, out);
        }
    }
    rec(0, 0, &mut rgs, &mut out);
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SetPartitionCoefficient<T> {
    pub partition: SetPartition,
    pub coefficient: T,
}

/// `Π_{B} (-1)^{|B|-1} (|B|-1)!`.
pub fn partition_coefficient<T: Int>(partition: &SetPartition) -> Result<T> {
    let mut c = T::one();
    for block in partition.blocks() {
        for j in 1..block.len() {
            let j: T = scalar::from_i64(j as i64, "partition coefficient")?;
            c = -scalar::mul(&c, &j, "partition coefficient")?;
        }
    }
    Ok(c)
}

/// One coefficient per set partition of `{1, ..., n}` (Bell(n) entries).
pub fn partition_coefficients<T: Int>(n: usize) -> Result<Vec<SetPartitionCoefficient<T>>> {
    if n == 0 {
        return Err(Error::DomainError {
            op: "partition_coefficients",
            detail: "n must be positive".into(),
        });
    }
    set_partitions(n)
        .into_iter()
        .map(|partition| {
            Ok(SetPartitionCoefficient {
                coefficient: partition_coefficient(&partition)?,
                partition,
            })
        })
        .collect()
}

/// `(Δ_P)_*`: sends `(y_1, ..., y_|P|)` to the `n`-tuple carrying `y_i` in
/// every position of the `i`-th block.
pub fn diagonal_pushforward<S: Ord + Clone, T: Int>(
    partition: &SetPartition,
    x: &FormalCycle<S, T>,
) -> Result<FormalCycle<S, T>> {
    if x.arity() != partition.len() {
        return Err(Error::ArityMismatch {
            expected: partition.len(),
            found: x.arity(),
        });
    }
    let block_of = partition.block_of();
    let mut out = FormalCycle::zero(partition.n());
    for (tuple, c) in x.terms() {
        let image: Vec<S> = block_of.iter().map(|&b| tuple[b].clone()).collect();
        out.add_term(image, c.clone())?;
    }
    Ok(out)
}

/// `θ = Σ_i [p_i]` as a cycle on `S`.
pub fn theta<S: Ord + Clone, T: Int>(points: &[S]) -> Result<FormalCycle<S, T>> {
    let mut t = FormalCycle::zero(1);
    for p in points {
        t.add_term(vec![p.clone()], T::one())?;
    }
    Ok(t)
}

fn check_distinct<S: Ord>(points: &[S]) -> Result<()> {
    let mut sorted: Vec<&S> = points.iter().collect();
    sorted.sort();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::DuplicateSymbols);
    }
    Ok(())
}

/// `Σ(p) = Σ_{σ ∈ S_n} [σ.p]` for pairwise distinct symbols.
pub fn symmetrize<S: Ord + Clone, T: Int>(points: &[S]) -> Result<FormalCycle<S, T>> {
    check_distinct(points)?;
    let mut out = FormalCycle::zero(points.len());
    let mut perm = points.to_vec();
    fn rec<S: Ord + Clone, T: Int>(
        k: usize,
        perm: &mut Vec<S>,
        out: &mut FormalCycle<S, T>,
    ) -> Result<()> {
        if k == perm.len() {
            return out.add_term(perm.clone(), T::one());
        }
        for i in k..perm.len() {
            perm.swap(k, i);
            rec(k + 1, perm, out)?;
            perm.swap(k, i);
        }
        Ok(())
    }
    rec(0, &mut perm, &mut out)?;
    Ok(out)
}

/// `Σ_P coeff(P) · (Δ_P)_*(θ^{×|P|})` over the set partitions of
/// `{1, ..., n}`. Depends on the points only through `θ`.
pub fn expand_from_theta<S: Ord + Clone, T: Int>(
    theta: &FormalCycle<S, T>,
    n: usize,
) -> Result<FormalCycle<S, T>> {
    if theta.arity() != 1 {
        return Err(Error::ArityMismatch {
            expected: 1,
            found: theta.arity(),
        });
    }
    let powers: Vec<FormalCycle<S, T>> = (0..=n)
        .map(|l| theta.power(l))
        .collect::<Result<_>>()?;
    let mut out = FormalCycle::zero(n);
    for entry in partition_coefficients::<T>(n)? {
        let pushed = diagonal_pushforward(&entry.partition, &powers[entry.partition.len()])?;
        out.add_scaled(&pushed, &entry.coefficient)?;
    }
    Ok(out)
}

/// Checks `symmetrize(p) == expand_from_theta(θ(p), n)` term by term.
pub fn verify_blockwise_identity<S: Ord + Clone>(points: &[S], limit: usize) -> Result<bool> {
    if points.len() > limit {
        return Err(Error::LimitExceeded {
            size: points.len(),
            limit,
        });
    }
    if points.is_empty() {
        return Err(Error::DomainError {
            op: "verify_blockwise_identity",
            detail: "need at least one point".into(),
        });
    }
    let lhs = symmetrize::<S, i64>(points)?;
    let rhs = expand_from_theta(&theta::<S, i64>(points)?, points.len())?;
    Ok(lhs == rhs)
}

/// Symbols `p1, ..., pn`.
pub fn generic_symbols(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("p{i}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    type C = FormalCycle<char, i64>;

    fn part(n: usize, blocks: &[&[usize]]) -> SetPartition {
        SetPartition::new(n, blocks.iter().map(|b| b.to_vec()).collect()).unwrap()
    }

    #[test]
    fn pushforward_examples() {
        let x = C::point(vec!['a', 'b']);
        let y = diagonal_pushforward(&part(3, &[&[1, 2], &[3]]), &x).unwrap();
        assert_eq!(y, C::point(vec!['a', 'a', 'b']));
        let y = diagonal_pushforward(&part(3, &[&[1, 2, 3]]), &C::point(vec!['a'])).unwrap();
        assert_eq!(y, C::point(vec!['a', 'a', 'a']));
        let y = diagonal_pushforward(&part(2, &[&[1], &[2]]), &x).unwrap();
        assert_eq!(y, x);
        // Blocks are ordered by least element: {1,3},{2}.
        let y = diagonal_pushforward(&part(3, &[&[2], &[3, 1]]), &x).unwrap();
        assert_eq!(y, C::point(vec!['a', 'b', 'a']));
    }

    #[test]
    fn pushforward_arity_mismatch() {
        let x = C::point(vec!['a']);
        assert_eq!(
            diagonal_pushforward(&part(2, &[&[1], &[2]]), &x),
            Err(Error::ArityMismatch {
                expected: 2,
                found: 1
            })
        );
    }

    #[test]
    fn invalid_partitions() {
        assert!(SetPartition::new(3, vec![vec![1, 2]]).is_err());
        assert!(SetPartition::new(2, vec![vec![1, 2], vec![]]).is_err());
        assert!(SetPartition::new(2, vec![vec![1, 2], vec![2]]).is_err());
    }

    #[test]
    fn bell_numbers() {
        let bell = [1, 1, 2, 5, 15, 52, 203, 877];
        for (n, &b) in bell.iter().enumerate() {
            assert_eq!(set_partitions(n).len(), b);
        }
    }

    #[test]
    fn coefficient_examples() {
        let c1 = partition_coefficients::<i64>(1).unwrap();
        assert_eq!(c1.len(), 1);
        assert_eq!(c1[0].coefficient, 1);

        let c3 = partition_coefficients::<i64>(3).unwrap();
        let by_shape: Vec<(usize, i64)> = c3
            .iter()
            .map(|e| (e.partition.len(), e.coefficient))
            .collect();
        assert_eq!(by_shape.iter().filter(|&&x| x == (3, 1)).count(), 1);
        assert_eq!(by_shape.iter().filter(|&&x| x == (2, -1)).count(), 3);
        assert_eq!(by_shape.iter().filter(|&&x| x == (1, 2)).count(), 1);
        assert_eq!(c3.len(), 5);

        let c4 = partition_coefficients::<i64>(4).unwrap();
        for e in &c4 {
            let sizes: Vec<usize> = e.partition.blocks().iter().map(Vec::len).collect();
            if sizes == [4] {
                assert_eq!(e.coefficient, -6);
            }
            if sizes == [2, 2] {
                assert_eq!(e.coefficient, 1);
            }
        }
        assert!(partition_coefficients::<i64>(0).is_err());
    }

    #[test]
    fn coefficient_overflow() {
        let single = part(7, &[&[1, 2, 3, 4, 5, 6, 7]]);
        assert_eq!(partition_coefficient::<i8>(&single), Err(Error::Overflow("partition coefficient")));
        assert_eq!(partition_coefficient::<i64>(&single), Ok(720));
    }

    #[test]
    fn symmetrize_examples() {
        assert_eq!(symmetrize::<_, i64>(&['a']).unwrap(), C::point(vec!['a']));
        let s = symmetrize::<_, i64>(&['a', 'b']).unwrap();
        let mut expect = C::point(vec!['a', 'b']);
        expect.add_term(vec!['b', 'a'], 1).unwrap();
        assert_eq!(s, expect);
        let s = symmetrize::<_, i64>(&['a', 'b', 'c']).unwrap();
        assert_eq!(s.len(), 6);
        assert!(s.terms().values().all(|&c| c == 1));
        assert_eq!(
            symmetrize::<_, i64>(&['a', 'a']),
            Err(Error::DuplicateSymbols)
        );
    }

    #[test]
    fn blockwise_identity_small() {
        assert!(verify_blockwise_identity(&['a'], 6).unwrap());
        assert!(verify_blockwise_identity(&['a', 'b', 'c'], 6).unwrap());
        assert!(verify_blockwise_identity(&generic_symbols(5), 6).unwrap());
        assert!(matches!(
            verify_blockwise_identity(&generic_symbols(7), 6),
            Err(Error::LimitExceeded { size: 7, limit: 6 })
        ));
    }

    #[test]
    fn cycle_arithmetic() {
        let mut a = C::point(vec!['x']);
        a.add_term(vec!['x'], -1).unwrap();
        assert!(a.is_zero());
        assert!(a.add_term(vec!['x', 'y'], 1).is_err());
        let t = theta::<char, i64>(&['a', 'b']).unwrap();
        let t2 = t.power(2).unwrap();
        assert_eq!(t2.len(), 4);
        assert_eq!(t2.coefficient(&['a', 'b']), 1);
        assert_eq!(t.power(0).unwrap().arity(), 0);
    }
}
