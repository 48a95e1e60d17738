//! Constructors for the concrete geometries: points, twisted forms on
//! projective space, line bundles on curves, abelian varieties, and tables
//! read from documents.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tables::{CohomologyTable, RawTable};

/// `C(a, b)` on exact integers; zero when `b < 0` or `a < b`.
pub fn binomial(a: i64, b: i64) -> Result<u64> {
    if b < 0 || a < b {
        return Ok(0);
    }
    if a < 0 {
        // Only reachable with a < 0 <= b, excluded above.
        return Ok(0);
    }
    let b = b.min(a - b) as u128;
    let a = a as u128;
    let mut acc: u128 = 1;
    for i in 0..b {
        acc = acc
            .checked_mul(a - i)
            .ok_or(Error::ArithmeticOverflow("binomial"))?
            / (i + 1);
    }
    u64::try_from(acc).map_err(|_| Error::ArithmeticOverflow("binomial"))
}

/// Fiber of a rank-`rank` bundle over a point.
pub fn point_table(rank: u64) -> Result<CohomologyTable> {
    if rank == 0 {
        return Err(Error::ZeroRank);
    }
    CohomologyTable::new(0, format!("pt^{rank}"), [(0, 0, rank as i128)])
}

/// The line bundle `O(k)` on `P^n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProjectiveTwistSpec {
    pub n: usize,
    #[serde(default)]
    pub k: i64,
}

/// Bott's formula for `h^q(P^n, Omega^p(k))`.
pub fn bott(n: usize, k: i64, p: usize, q: usize) -> Result<u64> {
    let (ni, pi) = (n as i64, p as i64);
    if q == 0 && k > pi {
        let a = binomial(k + ni - pi, k)?;
        let b = binomial(k - 1, pi)?;
        return a
            .checked_mul(b)
            .ok_or(Error::ArithmeticOverflow("Bott formula"));
    }
    if k == 0 && p == q {
        return Ok(1);
    }
    if q == n && k < pi - ni {
        let a = binomial(-k + pi, -k)?;
        let b = binomial(-k - 1, ni - pi)?;
        return a
            .checked_mul(b)
            .ok_or(Error::ArithmeticOverflow("Bott formula"));
    }
    Ok(0)
}

pub fn projective_space_table(spec: ProjectiveTwistSpec) -> Result<CohomologyTable> {
    if spec.n == 0 {
        return Err(Error::InvalidModel("projective space needs n >= 1".into()));
    }
    let label = format!("P{}(O({}))", spec.n, spec.k);
    CohomologyTable::from_fn(spec.n, label, |p, q| bott(spec.n, spec.k, p, q))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum CurveBundleKind {
    /// Cohomology pinned by the caller where Riemann–Roch leaves it open.
    /// `h0` is `h^0(L)`, `h0_twisted` is `h^0(K ⊗ L)`.
    Explicit {
        #[serde(default)]
        h0: Option<u64>,
        #[serde(default)]
        h0_twisted: Option<u64>,
    },
    GenericNontrivialDegreeZero,
    Trivial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveBundleSpec {
    pub genus: u64,
    pub degree: i64,
    #[serde(flatten)]
    pub kind: CurveBundleKind,
}

impl CurveBundleSpec {
    pub fn explicit(genus: u64, degree: i64) -> Self {
        Self {
            genus,
            degree,
            kind: CurveBundleKind::Explicit {
                h0: None,
                h0_twisted: None,
            },
        }
    }

    pub fn generic_degree_zero(genus: u64) -> Self {
        Self {
            genus,
            degree: 0,
            kind: CurveBundleKind::GenericNontrivialDegreeZero,
        }
    }

    pub fn trivial(genus: u64) -> Self {
        Self {
            genus,
            degree: 0,
            kind: CurveBundleKind::Trivial,
        }
    }

    fn validate(&self) -> Result<()> {
        let d = self.degree;
        match self.kind {
            CurveBundleKind::GenericNontrivialDegreeZero | CurveBundleKind::Trivial if d != 0 => {
                Err(Error::InvalidModel(format!(
                    "{:?} line bundle must have degree 0, got {d}",
                    self.kind
                )))
            }
            CurveBundleKind::GenericNontrivialDegreeZero if self.genus == 0 => Err(
                Error::InvalidModel("P^1 carries no nontrivial degree-0 line bundle".into()),
            ),
            CurveBundleKind::Explicit { h0, h0_twisted } => {
                if let Some(h0) = h0 {
                    check_h0(self.genus, d, h0)?;
                }
                if let Some(h0) = h0_twisted {
                    check_h0(self.genus, self.twisted_degree(), h0)?;
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    fn twisted_degree(&self) -> i64 {
        2 * self.genus as i64 - 2 + self.degree
    }
}

/// Bounds on `h^0` of a degree-`d` bundle; in the special range the
/// sanity window `max(0, d + 1 - g) <= h0 <= d + 1`, outside it the exact value.
fn check_h0(genus: u64, d: i64, h0: u64) -> Result<()> {
    let g = genus as i64;
    let ok = match resolve_by_degree(genus, d) {
        Some(forced) => h0 == forced,
        None => (h0 as i64) >= (d + 1 - g).max(0) && (h0 as i64) <= d + 1,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidModel(format!(
            "h0 = {h0} is impossible for degree {d} on genus {g}"
        )))
    }
}

/// `h^0` when the degree alone determines it.
fn resolve_by_degree(genus: u64, d: i64) -> Option<u64> {
    let g = genus as i64;
    if d < 0 {
        Some(0)
    } else if d > 2 * g - 2 {
        Some((d + 1 - g) as u64)
    } else {
        None
    }
}

/// Four cells `h^0(L), h^1(L), h^0(K ⊗ L), h^1(K ⊗ L)` on a smooth curve.
pub fn curve_table(spec: CurveBundleSpec) -> Result<CohomologyTable> {
    spec.validate()?;
    let g = spec.genus as i64;
    let d = spec.degree;
    let dk = spec.twisted_degree();
    let ambiguous = |which| Error::AmbiguousSpecialBundle {
        genus: spec.genus,
        degree: d,
        which,
    };
    let (h0, h0k) = match spec.kind {
        CurveBundleKind::Trivial => (1, spec.genus),
        // h^0(K ⊗ L) = h^1(L^{-1}) = g - 1 by Serre duality, L^{-1} generic too.
        CurveBundleKind::GenericNontrivialDegreeZero => (0, spec.genus - 1),
        CurveBundleKind::Explicit { h0, h0_twisted } => {
            let h0 = resolve_by_degree(spec.genus, d)
                .or(h0)
                .ok_or_else(|| ambiguous("h0"))?;
            let h0k = resolve_by_degree(spec.genus, dk)
                .or(h0_twisted)
                .ok_or_else(|| ambiguous("h0_twisted"))?;
            (h0, h0k)
        }
    };
    // Riemann–Roch fixes h^1 on both rows.
    let h1 = h0 as i64 - (d + 1 - g);
    let h1k = h0k as i64 - (dk + 1 - g);
    if h1 < 0 || h1k < 0 {
        return Err(Error::InvalidModel(format!(
            "inconsistent h0 data for degree {d} on genus {g}"
        )));
    }
    let label = format!("C_g{g}(deg {d})");
    CohomologyTable::new(
        1,
        label,
        [
            (0, 0, h0 as i128),
            (0, 1, h1 as i128),
            (1, 0, h0k as i128),
            (1, 1, h1k as i128),
        ],
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AbelianTwist {
    Trivial,
    GenericFlat,
}

/// `Omega^p` is trivial of rank `C(n, p)`; a generic flat line bundle kills
/// all cohomology.
pub fn abelian_variety_table(n: usize, twist: AbelianTwist) -> Result<CohomologyTable> {
    if n == 0 {
        return Err(Error::InvalidModel("abelian variety needs n >= 1".into()));
    }
    match twist {
        AbelianTwist::GenericFlat => Ok(CohomologyTable::zero(n).with_label(format!("A{n}(L)"))),
        AbelianTwist::Trivial => CohomologyTable::from_fn(n, format!("A{n}"), |p, q| {
            let a = binomial(n as i64, p as i64)?;
            let b = binomial(n as i64, q as i64)?;
            a.checked_mul(b)
                .ok_or(Error::ArithmeticOverflow("abelian table"))
        }),
    }
}

/// Reads a table from its structured text form.
pub fn custom_table(document: &str) -> Result<CohomologyTable> {
    let value: serde_json::Value =
        serde_json::from_str(document).map_err(|e| Error::Parse(e.to_string()))?;
    table_from_value(value)
}

/// Deserializes a table, surfacing the cell-validation errors unchanged.
pub(crate) fn table_from_value(value: serde_json::Value) -> Result<CohomologyTable> {
    let raw: RawTable = serde_json::from_value(value).map_err(|e| Error::Parse(e.to_string()))?;
    CohomologyTable::try_from(raw)
}
