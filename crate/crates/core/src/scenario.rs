//! Declarative scenario documents: named model constructions, an ordered
//! list of operations binding results to names, checks, and outputs.
//!
//! ```json
//! {
//!   "spaces":     [{"name": "X", "model": "projective_space", "params": {"n": 3, "k": 1}},
//!                  {"name": "pt", "model": "point"}],
//!   "operations": [{"name": "Xt", "op": "blow_up", "args": {"base": "X", "center": "pt", "codim": 3}}],
//!   "checks":     [{"name": "vanishing", "check": "off_diagonal_zero", "args": {"table": "Xt"}}],
//!   "outputs":    [{"name": "Xt"}]
//! }
//! ```
//!
//! Names are bound sequentially, so a scenario can only refer to what has
//! already been defined. There are no loops or conditionals.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value as Json};

use crate::engine::{
    blow_down, blow_up, borel_e2_dimension, coker_identity_check, hochschild_blowup_check,
    invariance_report, projective_bundle, relative_cohomology, relative_pair, tower_evaluate,
    BlowUpSpec, RelativeCohomologyVector, RestrictionRankProfile, TowerStep,
};
use crate::error::{Error, Result};
use crate::models::{
    abelian_variety_table, curve_table, point_table, projective_space_table, table_from_value,
    AbelianTwist, CurveBundleKind, CurveBundleSpec, ProjectiveTwistSpec,
};
use crate::tables::{CohomologyTable, HochschildVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum OutputFormat {
    #[serde(rename = "aligned-table")]
    AlignedTable,
    #[serde(rename = "structured")]
    Structured,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "aligned-table" => Ok(Self::AlignedTable),
            "structured" => Ok(Self::Structured),
            other => Err(Error::BadParameter(format!("unknown format `{other}`"))),
        }
    }
}

// ---------------------------------------------------------------------------
// Raw document shape

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    #[serde(default)]
    spaces: Vec<RawSpace>,
    #[serde(default)]
    operations: Vec<RawOperation>,
    #[serde(default)]
    checks: Vec<RawCheck>,
    #[serde(default)]
    outputs: Vec<RawOutput>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpace {
    name: String,
    model: String,
    #[serde(default)]
    params: Map<String, Json>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOperation {
    name: String,
    op: String,
    #[serde(default)]
    args: Map<String, Json>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCheck {
    name: String,
    check: String,
    #[serde(default)]
    args: Map<String, Json>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    name: String,
    #[serde(default)]
    format: Option<OutputFormat>,
}

// ---------------------------------------------------------------------------
// Validated scenario

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Model {
    Point { rank: u64 },
    ProjectiveSpace(ProjectiveTwistSpec),
    Curve(CurveBundleSpec),
    AbelianVariety { n: usize, twist: AbelianTwist },
    Zero { n: usize },
    Custom(Json),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kind {
    Table,
    Hochschild,
    Relative,
}

impl Kind {
    fn describe(self) -> &'static str {
        match self {
            Kind::Table => "table",
            Kind::Hochschild => "Hochschild vector",
            Kind::Relative => "relative cohomology vector",
        }
    }
}

/// A blow-up given by names bound earlier in the scenario.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlowUpArgs {
    pub base: String,
    pub center: String,
    pub codim: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RelativeArgs {
    pub base: String,
    pub center: String,
    pub codim: i64,
    pub p: usize,
    #[serde(default)]
    pub ranks: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepArgs {
    pub kind: StepKind,
    pub center: String,
    pub codim: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepKind {
    BlowUp,
    BlowDown,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Operation {
    BlowUp(BlowUpArgs),
    BlowDown {
        blown: String,
        center: String,
        codim: i64,
    },
    ProjectiveBundle {
        base: String,
        rank: usize,
    },
    Kunneth {
        left: String,
        right: String,
    },
    Add {
        left: String,
        right: String,
    },
    Shift {
        table: String,
        by: usize,
        ambient: usize,
    },
    SerreFlip {
        table: String,
    },
    Hochschild {
        table: String,
    },
    Tower {
        start: String,
        steps: Vec<StepArgs>,
    },
    RelativeCohomology {
        base: String,
        center: String,
        p: usize,
        ranks: Vec<u64>,
    },
    RelativeBlownUp(RelativeArgs),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Check {
    OffDiagonalZero {
        table: String,
    },
    Entries {
        table: String,
        cells: Vec<(usize, usize, u64)>,
    },
    TablesEqual {
        left: String,
        right: String,
    },
    HochschildValues {
        vector: String,
        values: Vec<(i64, u64)>,
    },
    HochschildBlowUp(BlowUpArgs),
    Invariance(BlowUpArgs),
    CokerIdentity(BlowUpArgs),
    Roundtrip(BlowUpArgs),
    RelativeInvariance(RelativeArgs),
    RelativeValues {
        vector: String,
        values: Vec<u64>,
    },
    BorelConsistency {
        base: String,
        rank: usize,
    },
    Euler {
        table: String,
        p: i64,
        equals: i128,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Named<T> {
    pub name: String,
    pub item: T,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutputSpec {
    pub name: String,
    pub format: Option<OutputFormat>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scenario {
    pub spaces: Vec<Named<Model>>,
    pub operations: Vec<Named<Operation>>,
    pub checks: Vec<Named<Check>>,
    pub outputs: Vec<OutputSpec>,
}

fn params<T: DeserializeOwned>(what: &str, map: Map<String, Json>) -> Result<T> {
    serde_json::from_value(Json::Object(map))
        .map_err(|e| Error::BadParameter(format!("{what}: {e}")))
}

fn check_codim_param(what: &str, codim: i64) -> Result<()> {
    if codim < 2 {
        return Err(Error::BadParameter(format!(
            "{what}: codimension {codim} is below 2"
        )));
    }
    Ok(())
}

/// Builds a model from its name and keyword parameters.
pub fn parse_model(model: &str, map: Map<String, Json>) -> Result<Model> {
    let what = format!("model `{model}`");
    Ok(match model {
        "point" => {
            #[derive(Deserialize)]
            #[serde(deny_unknown_fields)]
            struct P {
                #[serde(default = "one")]
                rank: u64,
            }
            fn one() -> u64 {
                1
            }
            Model::Point {
                rank: params::<P>(&what, map)?.rank,
            }
        }
        "projective_space" => Model::ProjectiveSpace(params(&what, map)?),
        "curve" => {
            #[derive(Deserialize)]
            #[serde(deny_unknown_fields)]
            struct P {
                genus: u64,
                #[serde(default)]
                degree: i64,
                #[serde(default = "explicit")]
                kind: String,
                #[serde(default)]
                h0: Option<u64>,
                #[serde(default)]
                h0_twisted: Option<u64>,
            }
            fn explicit() -> String {
                "explicit".into()
            }
            let p: P = params(&what, map)?;
            let kind = match p.kind.as_str() {
                "explicit" => CurveBundleKind::Explicit {
                    h0: p.h0,
                    h0_twisted: p.h0_twisted,
                },
                "generic_nontrivial_degree_zero" => CurveBundleKind::GenericNontrivialDegreeZero,
                "trivial" => CurveBundleKind::Trivial,
                other => {
                    return Err(Error::BadParameter(format!(
                        "{what}: unknown bundle kind `{other}`"
                    )))
                }
            };
            Model::Curve(CurveBundleSpec {
                genus: p.genus,
                degree: p.degree,
                kind,
            })
        }
        "abelian_variety" => {
            #[derive(Deserialize)]
            #[serde(deny_unknown_fields)]
            struct P {
                n: usize,
                #[serde(default = "trivial")]
                twist: AbelianTwist,
            }
            fn trivial() -> AbelianTwist {
                AbelianTwist::Trivial
            }
            let p: P = params(&what, map)?;
            Model::AbelianVariety {
                n: p.n,
                twist: p.twist,
            }
        }
        "zero" => {
            #[derive(Deserialize)]
            #[serde(deny_unknown_fields)]
            struct P {
                n: usize,
            }
            Model::Zero {
                n: params::<P>(&what, map)?.n,
            }
        }
        "custom" => {
            let mut map = map;
            let table = map
                .remove("table")
                .ok_or_else(|| Error::BadParameter(format!("{what}: missing `table`")))?;
            if let Some(extra) = map.keys().next() {
                return Err(Error::BadParameter(format!(
                    "{what}: unknown parameter `{extra}`"
                )));
            }
            Model::Custom(table)
        }
        other => return Err(Error::UnknownModel(other.to_string())),
    })
}

impl Model {
    pub fn build(&self) -> Result<CohomologyTable> {
        match self {
            Model::Point { rank } => point_table(*rank),
            Model::ProjectiveSpace(spec) => projective_space_table(*spec),
            Model::Curve(spec) => curve_table(*spec),
            Model::AbelianVariety { n, twist } => abelian_variety_table(*n, *twist),
            Model::Zero { n } => Ok(CohomologyTable::zero(*n)),
            Model::Custom(doc) => table_from_value(doc.clone()),
        }
    }
}

fn parse_operation(op: &str, map: Map<String, Json>) -> Result<Operation> {
    let what = format!("operation `{op}`");
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct Pair {
        left: String,
        right: String,
    }
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct One {
        table: String,
    }
    Ok(match op {
        "blow_up" => {
            let args: BlowUpArgs = params(&what, map)?;
            check_codim_param(&what, args.codim)?;
            Operation::BlowUp(args)
        }
        "blow_down" => {
            #[derive(Deserialize)]
            #[serde(deny_unknown_fields)]
            struct P {
                blown: String,
                center: String,
                codim: i64,
            }
            let p: P = params(&what, map)?;
            check_codim_param(&what, p.codim)?;
            Operation::BlowDown {
                blown: p.blown,
                center: p.center,
                codim: p.codim,
            }
        }
        "projective_bundle" => {
            #[derive(Deserialize)]
            #[serde(deny_unknown_fields)]
            struct P {
                base: String,
                rank: usize,
            }
            let p: P = params(&what, map)?;
            if p.rank == 0 {
                return Err(Error::BadParameter(format!(
                    "{what}: rank must be positive"
                )));
            }
            Operation::ProjectiveBundle {
                base: p.base,
                rank: p.rank,
            }
        }
        "kunneth" => {
            let p: Pair = params(&what, map)?;
            Operation::Kunneth {
                left: p.left,
                right: p.right,
            }
        }
        "add" => {
            let p: Pair = params(&what, map)?;
            Operation::Add {
                left: p.left,
                right: p.right,
            }
        }
        "shift" => {
            #[derive(Deserialize)]
            #[serde(deny_unknown_fields)]
            struct P {
                table: String,
                by: usize,
                ambient: usize,
            }
            let p: P = params(&what, map)?;
            Operation::Shift {
                table: p.table,
                by: p.by,
                ambient: p.ambient,
            }
        }
        "serre_flip" => Operation::SerreFlip {
            table: params::<One>(&what, map)?.table,
        },
        "hochschild" => Operation::Hochschild {
            table: params::<One>(&what, map)?.table,
        },
        "tower" => {
            #[derive(Deserialize)]
            #[serde(deny_unknown_fields)]
            struct P {
                start: String,
                steps: Vec<StepArgs>,
            }
            let p: P = params(&what, map)?;
            for step in &p.steps {
                check_codim_param(&what, step.codim)?;
            }
            Operation::Tower {
                start: p.start,
                steps: p.steps,
            }
        }
        "relative_cohomology" => {
            #[derive(Deserialize)]
            #[serde(deny_unknown_fields)]
            struct P {
                base: String,
                center: String,
                p: usize,
                #[serde(default)]
                ranks: Vec<u64>,
            }
            let p: P = params(&what, map)?;
            Operation::RelativeCohomology {
                base: p.base,
                center: p.center,
                p: p.p,
                ranks: p.ranks,
            }
        }
        "relative_blown_up" => {
            let args: RelativeArgs = params(&what, map)?;
            check_codim_param(&what, args.codim)?;
            Operation::RelativeBlownUp(args)
        }
        other => return Err(Error::UnknownOperation(other.to_string())),
    })
}

fn parse_check(check: &str, map: Map<String, Json>) -> Result<Check> {
    let what = format!("check `{check}`");
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    struct One {
        table: String,
    }
    let blow_up_args = |map| -> Result<BlowUpArgs> {
        let args: BlowUpArgs = params(&what, map)?;
        check_codim_param(&what, args.codim)?;
        Ok(args)
    };
    Ok(match check {
        "off_diagonal_zero" => Check::OffDiagonalZero {
            table: params::<One>(&what, map)?.table,
        },
        "entries" => {
            #[derive(Deserialize)]
            #[serde(deny_unknown_fields)]
            struct P {
                table: String,
                cells: Vec<(usize, usize, u64)>,
            }
            let p: P = params(&what, map)?;
            Check::Entries {
                table: p.table,
                cells: p.cells,
            }
        }
        "tables_equal" => {
            #[derive(Deserialize)]
            #[serde(deny_unknown_fields)]
            struct P {
                left: String,
                right: String,
            }
            let p: P = params(&what, map)?;
            Check::TablesEqual {
                left: p.left,
                right: p.right,
            }
        }
        "hochschild_values" => {
            #[derive(Deserialize)]
            #[serde(deny_unknown_fields)]
            struct P {
                vector: String,
                values: Vec<(i64, u64)>,
            }
            let p: P = params(&what, map)?;
            Check::HochschildValues {
                vector: p.vector,
                values: p.values,
            }
        }
        "hochschild_blowup" => Check::HochschildBlowUp(blow_up_args(map)?),
        "invariance" => Check::Invariance(blow_up_args(map)?),
        "coker_identity" => Check::CokerIdentity(blow_up_args(map)?),
        "roundtrip" => Check::Roundtrip(blow_up_args(map)?),
        "relative_invariance" => {
            let args: RelativeArgs = params(&what, map)?;
            check_codim_param(&what, args.codim)?;
            Check::RelativeInvariance(args)
        }
        "relative_values" => {
            #[derive(Deserialize)]
            #[serde(deny_unknown_fields)]
            struct P {
                vector: String,
                values: Vec<u64>,
            }
            let p: P = params(&what, map)?;
            Check::RelativeValues {
                vector: p.vector,
                values: p.values,
            }
        }
        "borel_consistency" => {
            #[derive(Deserialize)]
            #[serde(deny_unknown_fields)]
            struct P {
                base: String,
                rank: usize,
            }
            let p: P = params(&what, map)?;
            if p.rank == 0 {
                return Err(Error::BadParameter(format!(
                    "{what}: rank must be positive"
                )));
            }
            Check::BorelConsistency {
                base: p.base,
                rank: p.rank,
            }
        }
        "euler" => {
            #[derive(Deserialize)]
            #[serde(deny_unknown_fields)]
            struct P {
                table: String,
                p: i64,
                equals: i128,
            }
            let p: P = params(&what, map)?;
            Check::Euler {
                table: p.table,
                p: p.p,
                equals: p.equals,
            }
        }
        other => return Err(Error::UnknownOperation(other.to_string())),
    })
}

impl Operation {
    /// Referenced names with the kind each must have, and the kind produced.
    fn signature(&self) -> (Vec<(&str, Kind)>, Kind) {
        use Kind::*;
        match self {
            Operation::BlowUp(a) => (vec![(&a.base, Table), (&a.center, Table)], Table),
            Operation::BlowDown { blown, center, .. } => {
                (vec![(blown, Table), (center, Table)], Table)
            }
            Operation::ProjectiveBundle { base, .. } => (vec![(base, Table)], Table),
            Operation::Kunneth { left, right } | Operation::Add { left, right } => {
                (vec![(left, Table), (right, Table)], Table)
            }
            Operation::Shift { table, .. } | Operation::SerreFlip { table } => {
                (vec![(table, Table)], Table)
            }
            Operation::Hochschild { table } => (vec![(table, Table)], Hochschild),
            Operation::Tower { start, steps } => {
                let mut refs = vec![(start.as_str(), Table)];
                refs.extend(steps.iter().map(|s| (s.center.as_str(), Table)));
                (refs, Table)
            }
            Operation::RelativeCohomology { base, center, .. } => {
                (vec![(base, Table), (center, Table)], Relative)
            }
            Operation::RelativeBlownUp(a) => (vec![(&a.base, Table), (&a.center, Table)], Relative),
        }
    }
}

impl Check {
    fn references(&self) -> Vec<(&str, Kind)> {
        use Kind::*;
        match self {
            Check::OffDiagonalZero { table }
            | Check::Entries { table, .. }
            | Check::Euler { table, .. } => vec![(table, Table)],
            Check::TablesEqual { left, right } => vec![(left, Table), (right, Table)],
            Check::HochschildValues { vector, .. } => vec![(vector, Hochschild)],
            Check::HochschildBlowUp(a)
            | Check::Invariance(a)
            | Check::CokerIdentity(a)
            | Check::Roundtrip(a) => vec![(&a.base, Table), (&a.center, Table)],
            Check::RelativeInvariance(a) => vec![(&a.base, Table), (&a.center, Table)],
            Check::RelativeValues { vector, .. } => vec![(vector, Relative)],
            Check::BorelConsistency { base, .. } => vec![(base, Table)],
        }
    }
}

fn resolve(scope: &BTreeMap<String, Kind>, name: &str, want: Kind, user: &str) -> Result<()> {
    match scope.get(name) {
        None => Err(Error::UndefinedName(name.to_string())),
        Some(&kind) if kind != want => Err(Error::BadParameter(format!(
            "{user}: `{name}` is a {}, expected a {}",
            kind.describe(),
            want.describe()
        ))),
        Some(_) => Ok(()),
    }
}

fn bind(scope: &mut BTreeMap<String, Kind>, name: &str, kind: Kind) -> Result<()> {
    if scope.insert(name.to_string(), kind).is_some() {
        return Err(Error::BadParameter(format!("name `{name}` bound twice")));
    }
    Ok(())
}

pub fn parse_scenario(document: &str) -> Result<Scenario> {
    let raw: RawScenario =
        serde_json::from_str(document).map_err(|e| Error::Parse(e.to_string()))?;
    let mut scope = BTreeMap::new();

    let mut spaces = Vec::with_capacity(raw.spaces.len());
    for space in raw.spaces {
        let item = parse_model(&space.model, space.params)?;
        bind(&mut scope, &space.name, Kind::Table)?;
        spaces.push(Named {
            name: space.name,
            item,
        });
    }

    let mut operations = Vec::with_capacity(raw.operations.len());
    for op in raw.operations {
        let item = parse_operation(&op.op, op.args)?;
        let (refs, produces) = item.signature();
        for (name, kind) in refs {
            resolve(&scope, name, kind, &op.name)?;
        }
        bind(&mut scope, &op.name, produces)?;
        operations.push(Named {
            name: op.name,
            item,
        });
    }

    let mut checks = Vec::with_capacity(raw.checks.len());
    for check in raw.checks {
        let item = parse_check(&check.check, check.args)?;
        for (name, kind) in item.references() {
            resolve(&scope, name, kind, &check.name)?;
        }
        checks.push(Named {
            name: check.name,
            item,
        });
    }

    let outputs = raw
        .outputs
        .into_iter()
        .map(|out| {
            if !scope.contains_key(&out.name) {
                return Err(Error::UndefinedName(out.name));
            }
            Ok(OutputSpec {
                name: out.name,
                format: out.format,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(Scenario {
        spaces,
        operations,
        checks,
        outputs,
    })
}

// ---------------------------------------------------------------------------
// Execution

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Value {
    Table(CohomologyTable),
    Hochschild(HochschildVector),
    Relative(RelativeCohomologyVector),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RenderedOutput {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<OutputFormat>,
    pub value: Value,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub diagnostics: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExecutionError {
    pub phase: String,
    pub index: usize,
    pub name: String,
    pub message: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Success,
    CheckFailure,
    EngineError,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Success => 0,
            Status::CheckFailure => 1,
            Status::EngineError => 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub status: Status,
    pub outputs: Vec<RenderedOutput>,
    pub checks: Vec<CheckOutcome>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<ExecutionError>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.status == Status::Success
    }
}

struct Env {
    values: BTreeMap<String, Value>,
}

impl Env {
    // Parse-time resolution guarantees presence and kind.
    fn table(&self, name: &str) -> &CohomologyTable {
        match self.values.get(name) {
            Some(Value::Table(t)) => t,
            _ => unreachable!("`{name}` resolved as a table at parse time"),
        }
    }

    fn spec(&self, args: &BlowUpArgs) -> Result<BlowUpSpec> {
        BlowUpSpec::new(
            self.table(&args.base).clone(),
            self.table(&args.center).clone(),
            args.codim,
        )
    }
}

fn run_operation(env: &Env, op: &Operation) -> Result<Value> {
    Ok(match op {
        Operation::BlowUp(args) => Value::Table(blow_up(&env.spec(args)?)?),
        Operation::BlowDown {
            blown,
            center,
            codim,
        } => Value::Table(blow_down(env.table(blown), env.table(center), *codim)?),
        Operation::ProjectiveBundle { base, rank } => {
            Value::Table(projective_bundle(env.table(base), *rank)?)
        }
        Operation::Kunneth { left, right } => {
            Value::Table(env.table(left).kunneth(env.table(right))?)
        }
        Operation::Add { left, right } => Value::Table(env.table(left).add(env.table(right))?),
        Operation::Shift { table, by, ambient } => {
            Value::Table(env.table(table).shift(*by, *ambient)?)
        }
        Operation::SerreFlip { table } => Value::Table(env.table(table).serre_flip()),
        Operation::Hochschild { table } => Value::Hochschild(env.table(table).hochschild()?),
        Operation::Tower { start, steps } => {
            let steps: Vec<TowerStep> = steps
                .iter()
                .map(|s| {
                    let center = env.table(&s.center).clone();
                    match s.kind {
                        StepKind::BlowUp => TowerStep::BlowUp {
                            center,
                            codim: s.codim,
                        },
                        StepKind::BlowDown => TowerStep::BlowDown {
                            center,
                            codim: s.codim,
                        },
                    }
                })
                .collect();
            Value::Table(tower_evaluate(env.table(start), &steps)?)
        }
        Operation::RelativeCohomology {
            base,
            center,
            p,
            ranks,
        } => {
            let profile = RestrictionRankProfile::new(*p, ranks.clone());
            Value::Relative(relative_cohomology(
                &env.table(base).row(*p),
                &env.table(center).row(*p),
                &profile,
            )?)
        }
        Operation::RelativeBlownUp(args) => {
            let spec = env.spec(&BlowUpArgs {
                base: args.base.clone(),
                center: args.center.clone(),
                codim: args.codim,
            })?;
            let profile = RestrictionRankProfile::new(args.p, args.ranks.clone());
            Value::Relative(relative_pair(&spec, &profile)?.1)
        }
    })
}

fn cell_list(cells: &[(i64, i64)]) -> String {
    cells
        .iter()
        .map(|(p, q)| format!("({p},{q})"))
        .collect::<Vec<_>>()
        .join(" ")
}

/// Returns diagnostics; empty means the check passed.
fn run_check(env: &Env, check: &Check) -> Result<Vec<String>> {
    let mut diag = Vec::new();
    match check {
        Check::OffDiagonalZero { table } => {
            for (p, q, v) in env.table(table).cells() {
                if p != q {
                    diag.push(format!("h^{{{p},{q}}} = {v}, expected 0"));
                }
            }
        }
        Check::Entries { table, cells } => {
            let t = env.table(table);
            for &(p, q, want) in cells {
                let got = t.at(p, q);
                if got != want {
                    diag.push(format!("h^{{{p},{q}}} = {got}, expected {want}"));
                }
            }
        }
        Check::TablesEqual { left, right } => {
            let (a, b) = (env.table(left), env.table(right));
            if a != b {
                diag.push(format!("`{left}` and `{right}` differ"));
            }
        }
        Check::HochschildValues { vector, values } => {
            let Some(Value::Hochschild(hh)) = env.values.get(vector.as_str()) else {
                unreachable!("`{vector}` resolved as a Hochschild vector at parse time")
            };
            for &(k, want) in values {
                let got = hh.get(k);
                if got != want {
                    diag.push(format!("HH_{k} = {got}, expected {want}"));
                }
            }
        }
        Check::HochschildBlowUp(args) => {
            let result = hochschild_blowup_check(&env.spec(args)?)?;
            for (k, _) in result.mismatches {
                diag.push(format!("HH_{k} is not additive"));
            }
        }
        Check::Invariance(args) => {
            let report = invariance_report(&env.spec(args)?)?;
            for (clause, result) in [
                ("row p=0", &report.row_zero),
                ("row p=n", &report.row_top),
                ("column q=0", &report.column_zero),
            ] {
                if !result.holds() {
                    diag.push(format!(
                        "{clause} changed at {}",
                        cell_list(&result.mismatches)
                    ));
                }
            }
        }
        Check::CokerIdentity(args) => {
            let result = coker_identity_check(&env.spec(args)?)?;
            if !result.holds() {
                diag.push(format!(
                    "cokernels differ at {}",
                    cell_list(&result.mismatches)
                ));
            }
        }
        Check::Roundtrip(args) => {
            let spec = env.spec(args)?;
            let back = blow_down(&blow_up(&spec)?, spec.center(), args.codim)?;
            if &back != spec.base() {
                diag.push("blow-down does not recover the base".into());
            }
        }
        Check::RelativeInvariance(args) => {
            let spec = env.spec(&BlowUpArgs {
                base: args.base.clone(),
                center: args.center.clone(),
                codim: args.codim,
            })?;
            let profile = RestrictionRankProfile::new(args.p, args.ranks.clone());
            let (base_side, blown_side) = relative_pair(&spec, &profile)?;
            if base_side.values != blown_side.values {
                diag.push(format!(
                    "base side {:?} != blow-up side {:?}",
                    base_side.values, blown_side.values
                ));
            }
        }
        Check::RelativeValues { vector, values } => {
            let Some(Value::Relative(v)) = env.values.get(vector.as_str()) else {
                unreachable!("`{vector}` resolved as a relative vector at parse time")
            };
            if &v.values != values {
                diag.push(format!("{:?}, expected {:?}", v.values, values));
            }
        }
        Check::BorelConsistency { base, rank } => {
            let b = env.table(base);
            let total = projective_bundle(b, *rank)?;
            for p in 0..=total.n() {
                for q in 0..=total.n() {
                    let e2 = borel_e2_dimension(b, *rank, p, q)?;
                    if e2 != total.at(p, q) {
                        diag.push(format!(
                            "E2 ({p},{q}) = {e2}, bundle has {}",
                            total.at(p, q)
                        ));
                    }
                }
            }
        }
        Check::Euler { table, p, equals } => {
            let chi = env.table(table).euler_characteristic(*p)?;
            if chi != *equals {
                diag.push(format!("chi_{p} = {chi}, expected {equals}"));
            }
        }
    }
    Ok(diag)
}

/// Runs a scenario. Engine errors stop execution and are recorded in the
/// report rather than returned.
pub fn execute(scenario: &Scenario) -> Report {
    let mut env = Env {
        values: BTreeMap::new(),
    };
    let mut error = None;

    for (index, space) in scenario.spaces.iter().enumerate() {
        match space.item.build() {
            Ok(t) => {
                let t = t.with_label(space.name.clone());
                env.values.insert(space.name.clone(), Value::Table(t));
            }
            Err(e) => {
                error = Some(ExecutionError {
                    phase: "space".into(),
                    index,
                    name: space.name.clone(),
                    message: e.to_string(),
                });
                break;
            }
        }
    }

    if error.is_none() {
        for (index, op) in scenario.operations.iter().enumerate() {
            match run_operation(&env, &op.item) {
                Ok(value) => {
                    env.values.insert(op.name.clone(), value);
                }
                Err(e) => {
                    error = Some(ExecutionError {
                        phase: "operation".into(),
                        index,
                        name: op.name.clone(),
                        message: e.to_string(),
                    });
                    break;
                }
            }
        }
    }

    let mut checks = Vec::new();
    if error.is_none() {
        for (index, check) in scenario.checks.iter().enumerate() {
            match run_check(&env, &check.item) {
                Ok(diagnostics) => checks.push(CheckOutcome {
                    name: check.name.clone(),
                    passed: diagnostics.is_empty(),
                    diagnostics,
                }),
                Err(e) => {
                    error = Some(ExecutionError {
                        phase: "check".into(),
                        index,
                        name: check.name.clone(),
                        message: e.to_string(),
                    });
                    break;
                }
            }
        }
    }

    let outputs = if error.is_none() {
        scenario
            .outputs
            .iter()
            .filter_map(|out| {
                env.values.get(&out.name).map(|v| RenderedOutput {
                    name: out.name.clone(),
                    format: out.format,
                    value: v.clone(),
                })
            })
            .collect()
    } else {
        Vec::new()
    };

    let status = if error.is_some() {
        Status::EngineError
    } else if checks.iter().all(|c| c.passed) {
        Status::Success
    } else {
        Status::CheckFailure
    };
    Report {
        status,
        outputs,
        checks,
        error,
    }
}

/// Renders a single value; `Structured` emits the table serialization format.
pub fn render_value(value: &Value, format: OutputFormat) -> String {
    match format {
        OutputFormat::Structured => {
            let json = match value {
                Value::Table(t) => serde_json::to_string_pretty(t),
                Value::Hochschild(h) => serde_json::to_string_pretty(h),
                Value::Relative(r) => serde_json::to_string_pretty(r),
            };
            json.expect("report values serialize") + "\n"
        }
        OutputFormat::AlignedTable => match value {
            Value::Table(t) => t.to_string(),
            Value::Hochschild(h) => h.to_string(),
            Value::Relative(r) => {
                let mut s = String::new();
                for (q, v) in r.values.iter().enumerate() {
                    let _ = writeln!(s, "H^{q}(K^{}) {v}", r.p);
                }
                s
            }
        },
    }
}

pub fn render_report(report: &Report, format: OutputFormat) -> String {
    if format == OutputFormat::Structured {
        return serde_json::to_string_pretty(report).expect("report serializes") + "\n";
    }
    let mut s = String::new();
    for out in &report.outputs {
        let _ = writeln!(s, "# {}", out.name);
        s.push_str(&render_value(&out.value, out.format.unwrap_or(format)));
        s.push('\n');
    }
    for check in &report.checks {
        let mark = if check.passed { "PASS" } else { "FAIL" };
        let _ = writeln!(s, "[{mark}] {}", check.name);
        for d in &check.diagnostics {
            let _ = writeln!(s, "       {d}");
        }
    }
    if let Some(err) = &report.error {
        let _ = writeln!(
            s,
            "[ERROR] {} {} (`{}`): {}",
            err.phase, err.index, err.name, err.message
        );
    }
    s
}
