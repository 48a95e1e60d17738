//! The bundled example scenarios, shipped as data under `scenarios/paper/`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scenario::{execute, parse_scenario, render_report, OutputFormat, Report, Status};

pub struct BundledScenario {
    pub id: u32,
    pub key: &'static str,
    pub title: &'static str,
    pub document: &'static str,
}

macro_rules! bundled {
    ($id:expr, $key:expr, $title:expr, $file:expr) => {
        BundledScenario {
            id: $id,
            key: $key,
            title: $title,
            document: include_str!(concat!("../scenarios/paper/", $file)),
        }
    };
}

pub const SCENARIOS: &[BundledScenario] = &[
    bundled!(
        1,
        "new-positive",
        "pointed blow-up of P^n with O(1): off-diagonal vanishing",
        "01_new_positive.json"
    ),
    bundled!(
        2,
        "ramanujam",
        "pointed blow-up of P^n with O(m): h^{p,p} = 1",
        "02_ramanujam.json"
    ),
    bundled!(
        3,
        "curve-center",
        "P^3 blown up along a line with O(1): h^{1,1} = 2",
        "03_curve_center.json"
    ),
    bundled!(
        4,
        "generic-vanishing",
        "abelian fourfold blown up along a curve: h^{1,2} = g - 1",
        "04_generic_vanishing.json"
    ),
    bundled!(
        5,
        "hochschild",
        "Hochschild homology of the pointed blow-up of P^3",
        "05_hochschild.json"
    ),
    bundled!(
        6,
        "invariance",
        "rows p = 0, p = n and column q = 0 are blow-up invariant",
        "06_invariance.json"
    ),
    bundled!(
        7,
        "relative",
        "relative Dolbeault cohomology agrees on both sides",
        "07_relative.json"
    ),
];

#[derive(Debug, Clone, Serialize)]
pub struct SuiteItem {
    pub id: u32,
    pub key: &'static str,
    pub title: &'static str,
    pub report: Report,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub items: Vec<SuiteItem>,
}

impl SuiteReport {
    pub fn status(&self) -> Status {
        let statuses = self.items.iter().map(|i| i.report.status);
        if statuses.clone().any(|s| s == Status::EngineError) {
            Status::EngineError
        } else if statuses.clone().any(|s| s == Status::CheckFailure) {
            Status::CheckFailure
        } else {
            Status::Success
        }
    }

    pub fn render(&self, format: OutputFormat) -> String {
        if format == OutputFormat::Structured {
            return serde_json::to_string_pretty(self).expect("suite report serializes") + "\n";
        }
        let mut out = String::new();
        for item in &self.items {
            let mark = if item.report.passed() { "PASS" } else { "FAIL" };
            out.push_str(&format!(
                "== ({}) {} [{mark}] {}\n",
                item.id, item.key, item.title
            ));
            out.push_str(&render_report(&item.report, format));
        }
        out
    }
}

/// Looks up a bundled scenario by number or key.
pub fn find(selector: &str) -> Option<&'static BundledScenario> {
    SCENARIOS
        .iter()
        .find(|s| s.key == selector || s.id.to_string() == selector)
}

/// Runs every bundled scenario, or just the one named by `only`.
pub fn verify_paper_suite(only: Option<&str>) -> Result<SuiteReport> {
    let selected: Vec<&BundledScenario> = match only {
        None => SCENARIOS.iter().collect(),
        Some(sel) => {
            vec![find(sel).ok_or_else(|| Error::BadParameter(format!("no suite item `{sel}`")))?]
        }
    };
    let items = selected
        .into_iter()
        .map(|s| {
            let scenario = parse_scenario(s.document)?;
            Ok(SuiteItem {
                id: s.id,
                key: s.key,
                title: s.title,
                report: execute(&scenario),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SuiteReport { items })
}
