//! Report document shared by the human and JSON output paths. Exact scalars
//! are serialized losslessly as `±p/q · pi^k · h1^e` strings; floats never
//! round-trip into exact fields.

use omega3_core::engine::{CaseEval, OmegaReport};
use omega3_core::Rat;
use serde::Serialize;

#[derive(Serialize)]
pub struct ReportDocument {
    pub tool: &'static str,
    pub version: &'static str,
    pub suite: String,
    pub results: Vec<SuiteResult>,
    pub omega: Option<OmegaJson>,
}

#[derive(Serialize, Clone)]
pub struct SuiteResult {
    pub name: String,
    pub status: String,
    pub exact: String,
    pub float: Option<f64>,
    pub rel_err: Option<f64>,
}

impl SuiteResult {
    pub fn pass(name: &str, exact: String) -> SuiteResult {
        SuiteResult {
            name: name.to_string(),
            status: "pass".into(),
            exact,
            float: None,
            rel_err: None,
        }
    }

    pub fn fail(name: &str, exact: String) -> SuiteResult {
        SuiteResult {
            name: name.to_string(),
            status: "fail".into(),
            exact,
            float: None,
            rel_err: None,
        }
    }

    pub fn ok(&self) -> bool {
        self.status == "pass"
    }
}

#[derive(Serialize)]
pub struct OmegaJson {
    pub cases: Vec<CaseJson>,
    pub total: Vec<Vec<String>>,
    pub isotropy: Option<String>,
    pub conjecture: Vec<Vec<String>>,
    pub conjecture_isotropy: Option<String>,
    pub flags: FlagsJson,
    pub h1: Option<String>,
}

#[derive(Serialize)]
pub struct CaseJson {
    pub id: String,
    pub index: String,
    pub matrix: Vec<Vec<String>>,
    pub aux: Vec<AuxJson>,
}

#[derive(Serialize)]
pub struct AuxJson {
    pub label: String,
    pub ok: bool,
    pub value: String,
}

#[derive(Serialize)]
pub struct FlagsJson {
    pub h1_linear: bool,
    pub pi_pow_two: bool,
    pub isotropic: bool,
    pub symmetric: bool,
}

pub fn matrix_strings(m: &omega3_core::engine::CoeffMatrix, h1: Option<Rat>) -> Vec<Vec<String>> {
    let m = match h1 {
        Some(r) => m.eval_h1(r),
        None => m.clone(),
    };
    (0..3)
        .map(|i| (0..3).map(|j| m.get(i, j).to_string()).collect())
        .collect()
}

pub fn case_json(case: &CaseEval, h1: Option<Rat>) -> CaseJson {
    CaseJson {
        id: case
            .index
            .label
            .map(|l| l.id().to_string())
            .unwrap_or_else(|| "general".into()),
        index: case.index.to_string(),
        matrix: matrix_strings(&case.matrix, h1),
        aux: case
            .aux
            .iter()
            .map(|a| AuxJson {
                label: a.label.clone(),
                ok: a.is_zero,
                value: a.value.clone(),
            })
            .collect(),
    }
}

pub fn omega_json(report: &OmegaReport, h1: Option<Rat>) -> OmegaJson {
    OmegaJson {
        cases: report.cases.iter().map(|c| case_json(c, h1)).collect(),
        total: matrix_strings(&report.total, h1),
        isotropy: report.isotropy.map(|s| s.to_string()),
        conjecture: matrix_strings(&report.conjecture, h1),
        conjecture_isotropy: report.conjecture_isotropy.map(|s| s.to_string()),
        flags: FlagsJson {
            h1_linear: report.flags.h1_linear,
            pi_pow_two: report.flags.pi_pow_two,
            isotropic: report.flags.isotropic,
            symmetric: report.flags.symmetric,
        },
        h1: h1.map(|r| r.to_string()),
    }
}
