//! Headless replay of scripted sessions, producing an output tree of event
//! files and frame dumps that can be compared byte-for-byte.
//!
//! Layout of an output directory:
//!
//! ```text
//! manifest.json            files in emission order plus the exit code
//! events/0000-dataset.json one file per emitted event
//! frames/p00-s00.json      sample point 0 of the first plan
//! ```

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::animation::sample;
use crate::geometry::Rect;
use crate::graph::{validate_document, ViewSpec, Violation};
use crate::layout::{DEFAULT_ITERATIONS, DEFAULT_SEED};
use crate::protocol::{Event, Request};
use crate::session::{Session, SessionConfig};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Scenario {
    /// Dataset path, relative to the scenario file.
    pub dataset: String,
    pub views: Vec<ViewSpec>,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_iterations")]
    pub iterations: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub duration_ms: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub viewports: Option<Vec<Rect>>,
    pub steps: Vec<Request>,
    #[serde(default)]
    pub sample_points: Vec<f64>,
}

fn default_seed() -> u64 {
    DEFAULT_SEED
}

fn default_iterations() -> u32 {
    DEFAULT_ITERATIONS
}

#[derive(Debug, Error)]
pub enum ScenarioError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("scenario schema: {0}")]
    Schema(String),
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> ScenarioError + '_ {
    move |source| ScenarioError::Io {
        path: path.to_path_buf(),
        source,
    }
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self, ScenarioError> {
        let s: Scenario = serde_json::from_str(text).map_err(|e| ScenarioError::Schema(e.to_string()))?;
        s.check()?;
        Ok(s)
    }

    pub fn load(path: &Path) -> Result<Self, ScenarioError> {
        Self::from_json(&fs::read_to_string(path).map_err(io_err(path))?)
    }

    fn check(&self) -> Result<(), ScenarioError> {
        if self.steps.is_empty() {
            return Err(ScenarioError::Schema("steps must not be empty".into()));
        }
        if self.sample_points.iter().any(|t| !(0.0..=1.0).contains(t)) {
            return Err(ScenarioError::Schema("sample points must lie in [0, 1]".into()));
        }
        if self.sample_points.windows(2).any(|w| w[0] > w[1]) {
            return Err(ScenarioError::Schema("sample points must be sorted ascending".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RunReport {
    pub exit_code: i32,
    /// Paths relative to the output directory, in emission order.
    pub files: Vec<String>,
}

struct Writer<'a> {
    root: &'a Path,
    files: Vec<String>,
}

impl Writer<'_> {
    fn write(&mut self, rel: String, contents: &str) -> Result<(), ScenarioError> {
        let path = self.root.join(&rel);
        fs::write(&path, contents).map_err(io_err(&path))?;
        self.files.push(rel);
        Ok(())
    }
}

fn pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

/// Replays `scenario` in a fresh session. `base_dir` anchors the dataset
/// path. Replay stops at the first error event, which makes the exit code 1.
pub fn run_scenario(scenario: &Scenario, base_dir: &Path, out_dir: &Path) -> Result<RunReport, ScenarioError> {
    scenario.check()?;
    for sub in ["events", "frames"] {
        let dir = out_dir.join(sub);
        if dir.exists() {
            fs::remove_dir_all(&dir).map_err(io_err(&dir))?;
        }
        fs::create_dir_all(&dir).map_err(io_err(&dir))?;
    }

    let mut session = Session::new(SessionConfig {
        seed: scenario.seed,
        iterations: scenario.iterations,
        base_dir: Some(base_dir.to_path_buf()),
        ..SessionConfig::default()
    });
    let preamble = [
        Request::LoadDataset {
            path: Some(scenario.dataset.clone()),
            inline: None,
        },
        Request::DefineViews {
            specs: scenario.views.clone(),
            seed: Some(scenario.seed),
            iterations: Some(scenario.iterations),
            duration_ms: scenario.duration_ms,
            viewports: scenario.viewports.clone(),
        },
    ];

    let mut out = Writer {
        root: out_dir,
        files: Vec::new(),
    };
    let mut event_no = 0;
    let mut plan_no = 0;
    let mut exit_code = 0;
    'replay: for request in preamble.into_iter().chain(scenario.steps.iter().cloned()) {
        for event in session.handle(request) {
            out.write(format!("events/{event_no:04}-{}.json", event.kind()), &pretty(&event))?;
            event_no += 1;
            match &event {
                Event::Plan { plan } => {
                    for (i, &t) in scenario.sample_points.iter().enumerate() {
                        let frame = sample(plan, t).expect("sample points checked");
                        out.write(format!("frames/p{plan_no:02}-s{i:02}.json"), &frame.to_dump_json())?;
                    }
                    plan_no += 1;
                }
                Event::Error { .. } => {
                    exit_code = 1;
                    break 'replay;
                }
                _ => {}
            }
        }
    }

    let report = RunReport {
        exit_code,
        files: out.files,
    };
    let manifest = out_dir.join("manifest.json");
    fs::write(&manifest, pretty(&report)).map_err(io_err(&manifest))?;
    Ok(report)
}

/// Loads the scenario at `path` and replays it with the dataset resolved
/// next to the scenario file.
pub fn run_scenario_file(path: &Path, out_dir: &Path) -> Result<RunReport, ScenarioError> {
    let scenario = Scenario::load(path)?;
    let base = path.parent().unwrap_or(Path::new("."));
    run_scenario(&scenario, base, out_dir)
}

/// Result of checking one dataset document.
#[derive(Debug)]
pub enum ValidationReport {
    Malformed(String),
    Checked(Vec<Violation>),
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        matches!(self, ValidationReport::Checked(v) if v.is_empty())
    }

    pub fn exit_code(&self) -> i32 {
        if self.is_valid() {
            0
        } else {
            1
        }
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ValidationReport::Malformed(e) => writeln!(f, "malformed dataset document: {e}"),
            ValidationReport::Checked(violations) => {
                for v in violations {
                    writeln!(f, "violation: {v}")?;
                }
                writeln!(f, "{} violations", violations.len())
            }
        }
    }
}

pub fn validate(path: &Path) -> Result<ValidationReport, ScenarioError> {
    let file = fs::File::open(path).map_err(io_err(path))?;
    Ok(match validate_document(io::BufReader::new(file)) {
        Ok(v) => ValidationReport::Checked(v),
        Err(e) => ValidationReport::Malformed(e.to_string()),
    })
}
