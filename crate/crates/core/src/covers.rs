//! Cyclic covers `C -> P^1` branched over exactly three points.
//!
//! A cover of degree `k` is described by its monodromies `(a, b, c)` in
//! `Z/kZ` at the three branch points. The data is stored with every residue
//! in `{1, ..., k - 1}`.

use serde::Serialize;

use crate::scalar::{self, mod_inverse, Int};
use crate::{Error, Result};

/// Degree and monodromy triple of a cyclic triple-branched cover.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct CoverData<T> {
    k: T,
    mono: [T; 3],
}

/// Genus and ramification counts of a cover.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverInvariants<T> {
    pub genus: T,
    /// `gcd(k, m)` for each monodromy `m`: the number of points over each
    /// branch point.
    pub ram_counts: [T; 3],
    pub n_ram: T,
    pub totally_ramified: bool,
}

/// Outcome of [`CoverData::normalize_total_ramification`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "datum")]
pub enum Normalization<T> {
    Normalized(CoverData<T>),
    NotNormalizable,
}

impl<T> Normalization<T> {
    pub fn into_option(self) -> Option<CoverData<T>> {
        match self {
            Normalization::Normalized(c) => Some(c),
            Normalization::NotNormalizable => None,
        }
    }
}

impl<T: Int> CoverData<T> {
    /// Checks `k >= 2`, that no monodromy vanishes mod `k` and that the
    /// monodromies sum to zero, then reduces them into `{1, ..., k - 1}`.
    pub fn validate(k: T, mono: [T; 3]) -> Result<Self> {
        let two = T::one() + T::one();
        if k < two {
            return Err(Error::InvalidDegree(k.to_string()));
        }
        let mono = mono.map(|m| m.mod_floor(&k));
        if let Some(index) = mono.iter().position(|m| m.is_zero()) {
            return Err(Error::ZeroMonodromy {
                index,
                k: k.to_string(),
            });
        }
        // Each residue is below k, so summing the reduced values cannot
        // overflow unless 3k does.
        let sum = mono
            .iter()
            .try_fold(T::zero(), |acc, m| scalar::add(&acc, m, "monodromy sum"))?
            .mod_floor(&k);
        if !sum.is_zero() {
            return Err(Error::SumNotZero {
                sum: sum.to_string(),
                k: k.to_string(),
            });
        }
        Ok(CoverData { k, mono })
    }

    pub fn k(&self) -> &T {
        &self.k
    }

    pub fn mono(&self) -> &[T; 3] {
        &self.mono
    }

    pub fn ram_counts(&self) -> [T; 3] {
        self.mono.clone().map(|m| self.k.gcd(&m))
    }

    /// Genus from Riemann-Hurwitz, `2g - 2 = k - sum gcd(k, m_i)`, together
    /// with the ramification counts.
    pub fn invariants(&self) -> Result<CoverInvariants<T>> {
        let ram_counts = self.ram_counts();
        let n_ram = ram_counts
            .iter()
            .try_fold(T::zero(), |acc, r| scalar::add(&acc, r, "ramification count"))?;
        let two = T::one() + T::one();
        let excess = scalar::sub(&self.k, &n_ram, "Riemann-Hurwitz")?;
        let (half, rem) = excess.div_rem(&two);
        if !rem.is_zero() {
            return Err(Error::DomainError {
                op: "invariants",
                detail: format!("k - n_ram = {excess} is odd"),
            });
        }
        let genus = scalar::add(&half, &T::one(), "genus")?;
        if genus.is_negative() {
            return Err(Error::DomainError {
                op: "invariants",
                detail: format!("negative genus {genus}"),
            });
        }
        let totally_ramified = ram_counts.iter().any(|r| r.is_one());
        Ok(CoverInvariants {
            genus,
            ram_counts,
            n_ram,
            totally_ramified,
        })
    }

    /// Moves a totally ramified branch point to the front and scales by a
    /// unit so the datum reads `(1, b, c)` with `1 + b + c = k`.
    ///
    /// Every coprime entry and both orderings of the remaining pair are
    /// tried; the lexicographically least triple wins.
    pub fn normalize_total_ramification(&self) -> Result<Normalization<T>> {
        let mut best: Option<[T; 3]> = None;
        for (i, m) in self.mono.iter().enumerate() {
            let Some(u) = mod_inverse(m, &self.k) else {
                continue;
            };
            let rest: Vec<T> = (0..3)
                .filter(|&j| j != i)
                .map(|j| self.scale(&self.mono[j], &u))
                .collect::<Result<_>>()?;
            for (b, c) in [(&rest[0], &rest[1]), (&rest[1], &rest[0])] {
                let cand = [T::one(), b.clone(), c.clone()];
                if best.as_ref().is_none_or(|cur| cand < *cur) {
                    best = Some(cand);
                }
            }
        }
        Ok(match best {
            Some(mono) => {
                debug_assert!(
                    mono[0].clone() + mono[1].clone() + mono[2].clone() == self.k,
                    "normalized representatives must sum to k"
                );
                Normalization::Normalized(CoverData {
                    k: self.k.clone(),
                    mono,
                })
            }
            None => Normalization::NotNormalizable,
        })
    }

    /// `(u a, u b, u c)` for every unit `u` of `Z/kZ`, in increasing order
    /// of `u`. The list has one entry per unit, so its length is `phi(k)`;
    /// distinct units may give the same triple.
    pub fn unit_orbit(&self) -> Result<Vec<CoverData<T>>> {
        let mut out = Vec::new();
        let mut u = T::one();
        while u < self.k {
            if self.k.gcd(&u).is_one() {
                out.push(self.scaled_by(&u)?);
            }
            u = u + T::one();
        }
        Ok(out)
    }

    /// The datum with every monodromy multiplied by the unit `u`.
    pub fn scaled_by(&self, u: &T) -> Result<CoverData<T>> {
        if !self.k.gcd(u).is_one() {
            return Err(Error::DomainError {
                op: "scaled_by",
                detail: format!("{u} is not a unit mod {}", self.k),
            });
        }
        let mono = [
            self.scale(&self.mono[0], u)?,
            self.scale(&self.mono[1], u)?,
            self.scale(&self.mono[2], u)?,
        ];
        Ok(CoverData {
            k: self.k.clone(),
            mono,
        })
    }

    /// Whether the datum has the form `(1, b, c)` with `1 + b + c = k`.
    pub fn is_normalized(&self) -> bool {
        self.mono[0].is_one()
            && self.mono[0].clone() + self.mono[1].clone() + self.mono[2].clone() == self.k
    }

    fn scale(&self, m: &T, u: &T) -> Result<T> {
        let u = u.mod_floor(&self.k);
        Ok(scalar::mul(m, &u, "unit scaling")?.mod_floor(&self.k))
    }
}
