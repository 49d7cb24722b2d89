use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use capclass::equivalence::canonical_form_with_basis;
use capclass::gf2::bit_string;
use capclass::report::{map_json, verify_paper_with, ReportOptions, Status};
use capclass::{
    classify, find_isomorphism, find_quad, instantiate, is_complete, quad_closure_1, type_census, verify_map, Cap,
    PointSet, TemplateId, TemplateTable,
};
use serde_json::{json, Value};
use thiserror::Error;

use crate::capfile::{self, CapFileError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CLAIM: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PARSE: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: CapFileError },
    #[error("{path}: {source}")]
    Invalid { path: PathBuf, source: capclass::Error },
    #[error("{path}: {source}")]
    Json { path: PathBuf, source: serde_json::Error },
    #[error(transparent)]
    Lib(#[from] capclass::Error),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Lib(capclass::Error::UnknownLabel(_)) => EXIT_USAGE,
            CliError::Lib(capclass::Error::Overflow(_) | capclass::Error::TooLarge { .. }) => EXIT_USAGE,
            CliError::Write { .. } => EXIT_CLAIM,
            _ => EXIT_PARSE,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub stdout: String,
    pub code: i32,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Output { stdout, code: EXIT_OK }
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn read_set(path: &Path) -> Result<PointSet, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Read { path: path.into(), source })?;
    capfile::parse(&text).map_err(|source| CliError::Parse { path: path.into(), source })
}

fn read_cap(path: &Path) -> Result<Cap, CliError> {
    Cap::new(read_set(path)?).map_err(|source| CliError::Invalid { path: path.into(), source })
}

fn census_json(cap: &Cap) -> Result<Value, CliError> {
    if cap.len() > capclass::decomp::CENSUS_LIMIT {
        return Ok(Value::Null);
    }
    Ok(json!(type_census(cap)?.iter().map(|t| t.to_string()).collect::<Vec<_>>()))
}

pub fn template(label: &str) -> Result<Output, CliError> {
    let id: TemplateId = label.parse()?;
    Ok(Output::ok(capfile::render(instantiate(id).points())))
}

pub fn check(path: &Path) -> Result<Output, CliError> {
    let set = read_set(path)?;
    let dim = capclass::affine_dim(&set).map_err(|source| CliError::Invalid { path: path.into(), source })?;
    let value = match find_quad(&set) {
        Some(q) => json!({
            "is_cap": false,
            "dim": dim,
            "size": set.len(),
            "quad": q.iter().map(|p| bit_string(p.mask(), set.n())).collect::<Vec<_>>(),
        }),
        None => {
            let cap = Cap::new(set)?;
            json!({
                "is_cap": true,
                "dim": dim,
                "size": cap.len(),
                "complete": is_complete(&cap),
                "census": census_json(&cap)?,
            })
        }
    };
    Ok(Output::ok(pretty(&value)))
}

pub fn equiv(a: &Path, b: &Path) -> Result<Output, CliError> {
    let (ca, cb) = (read_cap(a)?, read_cap(b)?);
    if ca.n() != cb.n() {
        return Err(CliError::Usage(format!("ambient dimensions differ ({} and {})", ca.n(), cb.n())));
    }
    let value = match find_isomorphism(&ca, &cb)? {
        Some(map) => {
            debug_assert!(verify_map(&map, &ca, &cb));
            json!({"equivalent": true, "map": map_json(&map)})
        }
        None => json!({"equivalent": false}),
    };
    Ok(Output::ok(pretty(&value)))
}

pub fn closure(path: &Path) -> Result<Output, CliError> {
    let set = read_set(path)?;
    let qc = quad_closure_1(&set).map_err(|source| CliError::Invalid { path: path.into(), source })?;
    Ok(Output::ok(capfile::render(&qc)))
}

pub fn classify_cmd(dim: usize, max_size: usize, out: Option<&Path>) -> Result<Output, CliError> {
    let table = classify(dim, max_size)?;
    if let Some(dir) = out {
        fs::create_dir_all(dir).map_err(|source| CliError::Write { path: dir.into(), source })?;
    }
    let mut rows = BTreeMap::new();
    for (&size, row) in &table.rows {
        let mut entries = Vec::new();
        for (i, e) in row.iter().enumerate() {
            let mut entry = json!({
                "points": e.rep.masks().iter().map(|&m| bit_string(m, dim)).collect::<Vec<_>>(),
                "canonical_form": e.form.dep_masks,
                "complete": e.complete,
                "census": e.census.as_ref().map(|c| c.iter().map(|t| t.to_string()).collect::<Vec<_>>()),
            });
            if let Some(dir) = out {
                let path = dir.join(format!("dim{dim}_size{size}_{i}.cap"));
                fs::write(&path, capfile::render(e.rep.points()))
                    .map_err(|source| CliError::Write { path: path.clone(), source })?;
                entry["file"] = json!(path.file_name().and_then(|f| f.to_str()));
            }
            entries.push(entry);
        }
        rows.insert(size.to_string(), entries);
    }
    let counts: BTreeMap<String, usize> = table.counts().into_iter().map(|(k, v)| (k.to_string(), v)).collect();
    let value = json!({"dim": dim, "max_size": table.max_size(), "counts": counts, "rows": rows});
    Ok(Output::ok(pretty(&value)))
}

pub fn verify_paper(json_out: bool, templates: Option<&Path>, opts: &ReportOptions) -> Result<Output, CliError> {
    let table = match templates {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|source| CliError::Read { path: path.into(), source })?;
            serde_json::from_str::<TemplateTable>(&text)
                .map_err(|source| CliError::Json { path: path.into(), source })?
        }
        None => TemplateTable::standard(),
    };
    let report = verify_paper_with(&table, opts);
    let stdout = if json_out {
        pretty(&serde_json::to_value(&report).expect("report serializes"))
    } else {
        let mut s = String::new();
        for c in &report.claims {
            let status = if c.status == Status::Pass { "PASS" } else { "FAIL" };
            s.push_str(&format!("{status} [{:>2}] {}\n", c.criterion, c.id));
        }
        s
    };
    Ok(Output { stdout, code: if report.all_pass() { EXIT_OK } else { EXIT_CLAIM } })
}

/// Canonical form of a cap file, for scripting.
pub fn form(path: &Path) -> Result<Output, CliError> {
    let cap = read_cap(path)?;
    let (form, basis) = canonical_form_with_basis(&cap)?;
    let value = json!({
        "dim": form.dim,
        "size": form.size,
        "dep_masks": form.dep_masks,
        "basis": basis.iter().map(|p| bit_string(p.mask(), cap.n())).collect::<Vec<_>>(),
    });
    Ok(Output::ok(pretty(&value)))
}
