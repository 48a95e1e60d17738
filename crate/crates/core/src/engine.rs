//! Blow-ups, blow-downs, projective bundles, and the checks that follow
//! from the blow-up formula
//!
//! ```text
//! h^{p,q}(Bl_Z X, pi^* W) = h^{p,q}(X, W) + sum_{i=1}^{r-1} h^{p-i,q-i}(Z, W|_Z)
//! ```
//!
//! Everything here works on dimensions only. Restriction ranks, which the
//! tables cannot know, are supplied by the caller as a
//! [`RestrictionRankProfile`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tables::{alternating_sum, CohomologyTable};

/// Base `X` with bundle `W`, center `Z` with `W|_Z`, and codimension `r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlowUpSpec {
    base: CohomologyTable,
    center: CohomologyTable,
    codim: usize,
}

impl BlowUpSpec {
    pub fn new(base: CohomologyTable, center: CohomologyTable, codim: i64) -> Result<Self> {
        let codim = check_codim(codim)?;
        if center.n() + codim != base.n() {
            return Err(Error::DimensionMismatch {
                expected: base.n().saturating_sub(codim),
                found: center.n(),
            });
        }
        Ok(Self {
            base,
            center,
            codim,
        })
    }

    pub fn base(&self) -> &CohomologyTable {
        &self.base
    }

    pub fn center(&self) -> &CohomologyTable {
        &self.center
    }

    pub fn codim(&self) -> usize {
        self.codim
    }
}

fn check_codim(codim: i64) -> Result<usize> {
    if codim < 2 {
        return Err(Error::CodimTooSmall(codim));
    }
    Ok(codim as usize)
}

/// `sum_{i in range} h^{p-i,q-i}(Z)` as a table of dimension `ambient_n`.
fn shifted_copies(
    center: &CohomologyTable,
    range: std::ops::Range<usize>,
    ambient_n: usize,
) -> Result<CohomologyTable> {
    range
        .into_iter()
        .try_fold(CohomologyTable::zero(ambient_n), |acc, i| {
            acc.add(&center.shift(i, ambient_n)?)
        })
}

pub fn blow_up(spec: &BlowUpSpec) -> Result<CohomologyTable> {
    let n = spec.base.n();
    let exceptional = shifted_copies(&spec.center, 1..spec.codim, n)?;
    let label = format!("Bl[{}]({})", spec.center.label(), spec.base.label());
    Ok(spec.base.add(&exceptional)?.with_label(label))
}

/// Inverse of [`blow_up`]: subtracts the exceptional contributions, refusing
/// if any cell would go negative.
pub fn blow_down(
    blown: &CohomologyTable,
    center: &CohomologyTable,
    codim: i64,
) -> Result<CohomologyTable> {
    let codim = check_codim(codim)?;
    let n = blown.n();
    if center.n() + codim != n {
        return Err(Error::DimensionMismatch {
            expected: n.saturating_sub(codim),
            found: center.n(),
        });
    }
    let exceptional = shifted_copies(center, 1..codim, n)?;
    let label = format!("Bd[{}]({})", center.label(), blown.label());
    CohomologyTable::from_fn(n, label, |p, q| {
        blown
            .at(p, q)
            .checked_sub(exceptional.at(p, q))
            .ok_or(Error::NotABlowUp { p, q })
    })
}

/// Total space of a `P^{r-1}`-bundle: free over the base on `1, t, ..., t^{r-1}`
/// with `t` of type `(1, 1)`.
pub fn projective_bundle(base: &CohomologyTable, rank: usize) -> Result<CohomologyTable> {
    if rank == 0 {
        return Err(Error::ZeroRank);
    }
    let n = base.n() + rank - 1;
    let label = format!("P{}({})", rank - 1, base.label());
    Ok(shifted_copies(base, 0..rank, n)?.with_label(label))
}

/// Outcome of a cellwise comparison; empty `mismatches` means the identity holds.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellCheck {
    pub mismatches: Vec<(i64, i64)>,
}

impl CellCheck {
    pub fn holds(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// Compares `Bl(X) - X` with `P(N) - Z` embedded along the exceptional
/// divisor. Both sides are computed independently from their own formulas.
pub fn coker_identity_check(spec: &BlowUpSpec) -> Result<CellCheck> {
    let n = spec.base.n();
    let blown = blow_up(spec)?;
    let exceptional = projective_bundle(&spec.center, spec.codim)?;
    let mut mismatches = Vec::new();
    for p in 0..=n {
        for q in 0..=n {
            let left = blown.at(p, q) as i128 - spec.base.at(p, q) as i128;
            let right = exceptional.at(p, q) as i128 - spec.center.at(p, q) as i128;
            if left != right {
                mismatches.push((p as i64, q as i64));
            }
        }
    }
    Ok(CellCheck { mismatches })
}

/// `HH_k(Bl X) = HH_k(X) + (r - 1) HH_k(Z)` for every `k`.
pub fn hochschild_blowup_check(spec: &BlowUpSpec) -> Result<CellCheck> {
    let n = spec.base.n() as i64;
    let blown = blow_up(spec)?.hochschild()?;
    let base = spec.base.hochschild()?;
    let center = spec.center.hochschild()?;
    let copies = spec.codim as u128 - 1;
    let mismatches = (-n..=n)
        .filter(|&k| blown.get(k) as u128 != base.get(k) as u128 + copies * center.get(k) as u128)
        .map(|k| (k, 0))
        .collect();
    Ok(CellCheck { mismatches })
}

/// Boundary rows and column that a blow-up must leave unchanged.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvarianceReport {
    /// Row `p = 0`: `h^{0,q}`, the Euler characteristic, `h^0`.
    pub row_zero: CellCheck,
    /// Row `p = n`.
    pub row_top: CellCheck,
    /// Column `q = 0`: holomorphic `p`-forms.
    pub column_zero: CellCheck,
}

impl InvarianceReport {
    pub fn holds(&self) -> bool {
        self.row_zero.holds() && self.row_top.holds() && self.column_zero.holds()
    }
}

pub fn invariance_report(spec: &BlowUpSpec) -> Result<InvarianceReport> {
    let n = spec.base.n();
    let blown = blow_up(spec)?;
    let compare = |cells: &mut dyn Iterator<Item = (usize, usize)>| CellCheck {
        mismatches: cells
            .filter(|&(p, q)| blown.at(p, q) != spec.base.at(p, q))
            .map(|(p, q)| (p as i64, q as i64))
            .collect(),
    };
    Ok(InvarianceReport {
        row_zero: compare(&mut (0..=n).map(|q| (0, q))),
        row_top: compare(&mut (0..=n).map(|q| (n, q))),
        column_zero: compare(&mut (0..=n).map(|p| (p, 0))),
    })
}

/// Ranks of the restriction `H^{p,q}(X, W) -> H^{p,q}(Z, W|_Z)` on a fixed row `p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RestrictionRankProfile {
    pub p: usize,
    pub ranks: Vec<u64>,
}

impl RestrictionRankProfile {
    pub fn new(p: usize, ranks: Vec<u64>) -> Self {
        Self { p, ranks }
    }

    pub fn zero(p: usize) -> Self {
        Self { p, ranks: vec![] }
    }

    pub fn rank(&self, q: isize) -> u64 {
        if q < 0 {
            return 0;
        }
        self.ranks.get(q as usize).copied().unwrap_or(0)
    }

    /// Every rank must fit inside both source and target.
    pub fn validate(&self, x_row: &[u64], z_row: &[u64]) -> Result<()> {
        for (q, &rank) in self.ranks.iter().enumerate() {
            let bound = x_row
                .get(q)
                .copied()
                .unwrap_or(0)
                .min(z_row.get(q).copied().unwrap_or(0));
            if rank > bound {
                return Err(Error::RankExceedsDimension { q, rank, bound });
            }
        }
        Ok(())
    }
}

/// `dim H^q(X, K^p_{X,Z}(W))` for `q` ascending.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelativeCohomologyVector {
    pub p: usize,
    pub values: Vec<u64>,
}

impl RelativeCohomologyVector {
    pub fn alternating_sum(&self) -> i128 {
        alternating_sum(&self.values)
    }
}

/// Reads off the kernel-sheaf cohomology from the long exact sequence of
/// `0 -> K^p -> Omega^p(W) -> Omega^p_Z(W|_Z) -> 0`:
/// `dim H^q(K^p) = (z[q-1] - rank[q-1]) + (x[q] - rank[q])`.
pub fn relative_cohomology(
    x_row: &[u64],
    z_row: &[u64],
    profile: &RestrictionRankProfile,
) -> Result<RelativeCohomologyVector> {
    profile.validate(x_row, z_row)?;
    let len = x_row.len().max(z_row.len() + 1);
    let at = |row: &[u64], q: isize| -> u64 {
        if q < 0 {
            0
        } else {
            row.get(q as usize).copied().unwrap_or(0)
        }
    };
    let values = (0..len as isize)
        .map(|q| {
            let coker = at(z_row, q - 1) - profile.rank(q - 1);
            let kernel = at(x_row, q) - profile.rank(q);
            coker
                .checked_add(kernel)
                .ok_or(Error::ArithmeticOverflow("relative cohomology"))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RelativeCohomologyVector {
        p: profile.p,
        values,
    })
}

/// Transports a rank profile to the blow-up side: the pullback to the
/// exceptional divisor picks up every shifted center class, so
/// `rank~_q = rank_q + sum_{i=1}^{r-1} h^{p-i,q-i}(Z)`.
pub fn lift_rank_profile(
    profile: &RestrictionRankProfile,
    center: &CohomologyTable,
    codim: i64,
) -> Result<RestrictionRankProfile> {
    let codim = check_codim(codim)?;
    let p = profile.p as isize;
    let len = profile.ranks.len().max(center.n() + codim + 1);
    let ranks = (0..len as isize)
        .map(|q| {
            (1..codim as isize).try_fold(profile.rank(q), |acc, i| {
                acc.checked_add(center.get(p - i, q - i))
                    .ok_or(Error::ArithmeticOverflow("lifted rank"))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RestrictionRankProfile {
        p: profile.p,
        ranks,
    })
}

/// Relative cohomology on the base side and on the blow-up side (blown-up
/// row against the exceptional-divisor row, with the lifted profile).
pub fn relative_pair(
    spec: &BlowUpSpec,
    profile: &RestrictionRankProfile,
) -> Result<(RelativeCohomologyVector, RelativeCohomologyVector)> {
    let p = profile.p;
    let base_side = relative_cohomology(&spec.base.row(p), &spec.center.row(p), profile)?;
    let lifted = lift_rank_profile(profile, &spec.center, spec.codim as i64)?;
    let blown = blow_up(spec)?;
    let exceptional = projective_bundle(&spec.center, spec.codim)?;
    let blown_side = relative_cohomology(&blown.row(p), &exceptional.row(p), &lifted)?;
    Ok((base_side, blown_side))
}

/// Dimension of the type-`(p, q)` part of the Borel E2 page for a
/// `P^{r-1}`-bundle over `base`, summed over `s + t = p + q`:
/// `^{p,q}E_2^{s,t} = sum_i H^{i,s-i}(B) ⊗ H^{p-i,q-s+i}(P^{r-1})`.
pub fn borel_e2_dimension(base: &CohomologyTable, rank: usize, p: usize, q: usize) -> Result<u64> {
    let fiber = |c: isize, d: isize| -> u64 { u64::from(c == d && c >= 0 && (c as usize) < rank) };
    let (p, q) = (p as isize, q as isize);
    let mut total: u64 = 0;
    for s in 0..=(p + q) {
        for i in 0..=s {
            let term = base
                .get(i, s - i)
                .checked_mul(fiber(p - i, q - s + i))
                .ok_or(Error::ArithmeticOverflow("E2 page"))?;
            total = total
                .checked_add(term)
                .ok_or(Error::ArithmeticOverflow("E2 page"))?;
        }
    }
    Ok(total)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TowerStep {
    BlowUp { center: CohomologyTable, codim: i64 },
    BlowDown { center: CohomologyTable, codim: i64 },
}

/// Applies the steps in order; an error names the failing step.
pub fn tower_evaluate(start: &CohomologyTable, steps: &[TowerStep]) -> Result<CohomologyTable> {
    steps
        .iter()
        .enumerate()
        .try_fold(start.clone(), |current, (index, step)| {
            match step {
                TowerStep::BlowUp { center, codim } => {
                    BlowUpSpec::new(current, center.clone(), *codim).and_then(|s| blow_up(&s))
                }
                TowerStep::BlowDown { center, codim } => blow_down(&current, center, *codim),
            }
            .map_err(|e| e.at_step(index))
        })
}
