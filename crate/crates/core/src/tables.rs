//! Bigraded dimension tables `h^{p,q}` and the algebra on them.
//!
//! A [`CohomologyTable`] stores the dimensions of `H^{p,q}(X, W)` for a
//! compact complex manifold `X` of dimension `n` and a holomorphic bundle
//! `W`. Tables are immutable; every operation returns a fresh value.
//! Reads outside `[0, n]^2` return zero.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "RawTable", into = "RawTable")]
pub struct CohomologyTable {
    n: usize,
    label: String,
    dims: Vec<u64>,
}

/// Wire form of a table: `n`, `label`, and nonzero `[p, q, value]` cells
/// sorted by `(p, q)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct RawTable {
    n: i64,
    #[serde(default)]
    label: String,
    cells: Vec<[i128; 3]>,
}

impl TryFrom<RawTable> for CohomologyTable {
    type Error = Error;

    fn try_from(raw: RawTable) -> Result<Self> {
        let n = usize::try_from(raw.n)
            .map_err(|_| Error::Parse(format!("dimension n = {} is negative", raw.n)))?;
        let mut entries = Vec::with_capacity(raw.cells.len());
        for [p, q, value] in raw.cells {
            let p = i64::try_from(p).map_err(|_| Error::OutOfRangeCell {
                p: i64::MAX,
                q: 0,
                n,
            })?;
            let q = i64::try_from(q).map_err(|_| Error::OutOfRangeCell { p, q: i64::MAX, n })?;
            entries.push((p, q, value));
        }
        CohomologyTable::new(n, raw.label, entries)
    }
}

impl From<CohomologyTable> for RawTable {
    fn from(table: CohomologyTable) -> Self {
        let cells = table
            .cells()
            .map(|(p, q, v)| [p as i128, q as i128, v as i128])
            .collect();
        RawTable {
            n: table.n as i64,
            label: table.label,
            cells,
        }
    }
}

impl CohomologyTable {
    /// Builds a table from `(p, q, value)` entries; unlisted cells are zero.
    pub fn new<I>(n: usize, label: impl Into<String>, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (i64, i64, i128)>,
    {
        let side = n + 1;
        let mut dims = vec![0u64; side * side];
        let mut seen = BTreeSet::new();
        for (p, q, value) in entries {
            if p < 0 || q < 0 || p as u64 > n as u64 || q as u64 > n as u64 {
                return Err(Error::OutOfRangeCell { p, q, n });
            }
            let (p, q) = (p as usize, q as usize);
            if !seen.insert((p, q)) {
                return Err(Error::DuplicateCell { p, q });
            }
            if value < 0 {
                return Err(Error::NegativeValue { p, q, value });
            }
            dims[p * side + q] =
                u64::try_from(value).map_err(|_| Error::ArithmeticOverflow("table entry"))?;
        }
        Ok(Self {
            n,
            label: label.into(),
            dims,
        })
    }

    pub fn zero(n: usize) -> Self {
        Self {
            n,
            label: format!("0_{n}"),
            dims: vec![0; (n + 1) * (n + 1)],
        }
    }

    /// Builds from a closure over the full square; internal constructors
    /// that cannot produce invalid cells use this.
    pub(crate) fn from_fn<F>(n: usize, label: impl Into<String>, mut f: F) -> Result<Self>
    where
        F: FnMut(usize, usize) -> Result<u64>,
    {
        let side = n + 1;
        let mut dims = Vec::with_capacity(side * side);
        for p in 0..side {
            for q in 0..side {
                dims.push(f(p, q)?);
            }
        }
        Ok(Self {
            n,
            label: label.into(),
            dims,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// `h^{p,q}`, zero off the square.
    pub fn get(&self, p: isize, q: isize) -> u64 {
        if p < 0 || q < 0 || p as usize > self.n || q as usize > self.n {
            return 0;
        }
        self.dims[p as usize * (self.n + 1) + q as usize]
    }

    pub fn at(&self, p: usize, q: usize) -> u64 {
        self.get(p as isize, q as isize)
    }

    pub fn row(&self, p: usize) -> Vec<u64> {
        (0..=self.n).map(|q| self.at(p, q)).collect()
    }

    pub fn column(&self, q: usize) -> Vec<u64> {
        (0..=self.n).map(|p| self.at(p, q)).collect()
    }

    /// Nonzero cells in `(p, q)` order.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        let side = self.n + 1;
        self.dims
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0)
            .map(move |(i, &v)| (i / side, i % side, v))
    }

    pub fn total(&self) -> Result<u64> {
        self.dims
            .iter()
            .try_fold(0u64, |acc, &v| acc.checked_add(v))
            .ok_or(Error::ArithmeticOverflow("total dimension"))
    }

    pub fn is_zero(&self) -> bool {
        self.dims.iter().all(|&v| v == 0)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        let dims = self
            .dims
            .iter()
            .zip(&other.dims)
            .map(|(a, b)| {
                a.checked_add(*b)
                    .ok_or(Error::ArithmeticOverflow("table sum"))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            n: self.n,
            label: format!("({} + {})", self.label, other.label),
            dims,
        })
    }

    /// Re-embeds `self` into dimension `ambient_n`, moving entry `(p, q)` to
    /// `(p + shift, q + shift)`.
    pub fn shift(&self, shift: usize, ambient_n: usize) -> Result<Self> {
        if self.n + shift > ambient_n && !self.is_zero() {
            let top = self.cells().map(|(p, q, _)| p.max(q)).max().unwrap_or(0);
            if top + shift > ambient_n {
                return Err(Error::ShiftOverflow {
                    n: self.n,
                    shift,
                    ambient: ambient_n,
                });
            }
        }
        let s = shift as isize;
        Self::from_fn(ambient_n, format!("{}[{shift}]", self.label), |p, q| {
            Ok(self.get(p as isize - s, q as isize - s))
        })
    }

    /// Künneth product: `h^{p,q}(X x Y) = sum h^{a,b}(X) h^{p-a,q-b}(Y)`.
    pub fn kunneth(&self, other: &Self) -> Result<Self> {
        let n = self.n + other.n;
        let mut dims = vec![0u64; (n + 1) * (n + 1)];
        for (a, b, x) in self.cells() {
            for (c, d, y) in other.cells() {
                let term = x
                    .checked_mul(y)
                    .ok_or(Error::ArithmeticOverflow("Künneth product"))?;
                let slot = &mut dims[(a + c) * (n + 1) + (b + d)];
                *slot = slot
                    .checked_add(term)
                    .ok_or(Error::ArithmeticOverflow("Künneth product"))?;
            }
        }
        Ok(Self {
            n,
            label: format!("({} x {})", self.label, other.label),
            dims,
        })
    }

    /// Antidiagonal sums `HH_k = sum_{p - q = k} h^{p,q}`.
    pub fn hochschild(&self) -> Result<HochschildVector> {
        let n = self.n;
        let mut values = vec![0u64; 2 * n + 1];
        for (p, q, v) in self.cells() {
            let slot = &mut values[p + n - q];
            *slot = slot
                .checked_add(v)
                .ok_or(Error::ArithmeticOverflow("Hochschild sum"))?;
        }
        Ok(HochschildVector { n, values })
    }

    /// `sum_q (-1)^q h^{p,q}`; row `p = 0` is the bundle Euler characteristic.
    pub fn euler_characteristic(&self, p: i64) -> Result<i128> {
        if p < 0 || p as u64 > self.n as u64 {
            return Err(Error::RowOutOfRange { p, n: self.n });
        }
        Ok(alternating_sum(&self.row(p as usize)))
    }

    /// Reflection `(p, q) -> (n - p, n - q)`. Twisting by the dual bundle and
    /// canonical bundle is left to the caller.
    pub fn serre_flip(&self) -> Self {
        let n = self.n;
        let mut dims = self.dims.clone();
        dims.reverse();
        Self {
            n,
            label: format!("{}^*", self.label),
            dims,
        }
    }
}

pub(crate) fn alternating_sum(values: &[u64]) -> i128 {
    values
        .iter()
        .enumerate()
        .map(|(q, &v)| if q % 2 == 0 { v as i128 } else { -(v as i128) })
        .sum()
}

impl PartialEq for CohomologyTable {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.dims == other.dims
    }
}

impl Eq for CohomologyTable {}

impl fmt::Display for CohomologyTable {
    /// Aligned grid, `p` rows ascending, `q` columns ascending.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self
            .dims
            .iter()
            .map(|v| v.to_string().len())
            .max()
            .unwrap_or(1);
        for p in 0..=self.n {
            let line = (0..=self.n)
                .map(|q| format!("{:>width$}", self.at(p, q)))
                .collect::<Vec<_>>()
                .join(" ");
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

/// `HH_k` for `-n <= k <= n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HochschildVector {
    n: usize,
    values: Vec<u64>,
}

impl HochschildVector {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, k: i64) -> u64 {
        let idx = k + self.n as i64;
        if idx < 0 || idx as usize >= self.values.len() {
            return 0;
        }
        self.values[idx as usize]
    }

    /// `(k, HH_k)` pairs for `k` ascending.
    pub fn iter(&self) -> impl Iterator<Item = (i64, u64)> + '_ {
        let n = self.n as i64;
        self.values
            .iter()
            .enumerate()
            .map(move |(i, &v)| (i as i64 - n, v))
    }

    pub fn total(&self) -> u64 {
        self.values.iter().sum()
    }
}

impl fmt::Display for HochschildVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in self.iter() {
            writeln!(f, "HH_{k:<3} {v}")?;
        }
        Ok(())
    }
}
