//! Dataset orchestration: plans, manifests, splits, statistics and
//! external-set ingestion.
//!
//! On disk a dataset is `<root>/plan.json` (plan, fingerprint, tool
//! version), `<root>/manifest.jsonl` (one [`RecordEntry`] per line) and
//! `<root>/images/<subset>/<id>.png`.

mod build;
mod external;
mod stats;

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{CorpusError, CorpusFormat};
use crate::labelgen::{
    ChemGenConfig, EnglishGenConfig, LabelGenError, LabelKind, NumericGenConfig,
};
use crate::seed::{sha256_hex, unit_interval, StableHasher};
use crate::texlayout::{ImageIoError, ParseError, RenderError, RenderStyle};
use crate::transforms::{AppliedTransform, TransformConfig, TransformError};

pub use self::build::{build_dataset, build_dataset_with, generate_record, GeneratedRecord};
pub use self::external::{load_external, ExternalOptions};
pub use self::stats::{compute_stats, DatasetStats, SubsetStats};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const MANIFEST_FILE: &str = "manifest.jsonl";
pub const PLAN_FILE: &str = "plan.json";

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("invalid plan: {0}")]
    Plan(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("record {subset} #{index}: no renderable label after {attempts} attempts")]
    RetriesExhausted {
        subset: LabelKind,
        index: u64,
        attempts: u32,
    },
    #[error("record {subset} #{index}: generated label does not parse: {source}")]
    Grammar {
        subset: LabelKind,
        index: u64,
        #[source]
        source: ParseError,
    },
    #[error(transparent)]
    Label(#[from] LabelGenError),
    #[error(transparent)]
    Corpus(#[from] CorpusError),
    #[error(transparent)]
    Render(#[from] RenderError),
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error(transparent)]
    Image(#[from] ImageIoError),
    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },
    #[error("{labels} labels but {images} images")]
    CountMismatch { labels: usize, images: usize },
    #[error("missing images for records: {}", ids.join(", "))]
    MissingImages { ids: Vec<String> },
}

pub(crate) fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> DatasetError + '_ {
    move |source| DatasetError::Io {
        path: path.to_path_buf(),
        source,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Dev,
    Test,
}

impl Split {
    pub fn as_str(self) -> &'static str {
        match self {
            Split::Train => "train",
            Split::Dev => "dev",
            Split::Test => "test",
        }
    }
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SplitRatios {
    pub train: f64,
    pub dev: f64,
    pub test: f64,
}

impl Default for SplitRatios {
    fn default() -> Self {
        Self {
            train: 0.9,
            dev: 0.05,
            test: 0.05,
        }
    }
}

impl SplitRatios {
    pub fn new(train: f64, dev: f64, test: f64) -> Self {
        Self { train, dev, test }
    }

    pub fn validate(&self) -> Result<(), DatasetError> {
        let parts = [self.train, self.dev, self.test];
        if parts.iter().any(|r| !(0.0..=1.0).contains(r)) {
            return Err(DatasetError::Plan("split ratios must be in [0, 1]".into()));
        }
        if (parts.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
            return Err(DatasetError::Plan("split ratios must sum to 1".into()));
        }
        Ok(())
    }
}

/// Hash-based split: depends only on the id, the ratios and the seed.
pub fn assign_split(record_id: &str, ratios: &SplitRatios, master_seed: u64) -> Split {
    let u = unit_interval(
        StableHasher::new("split")
            .u64(master_seed)
            .str(record_id)
            .finish_u64(),
    );
    if u < ratios.train {
        Split::Train
    } else if u < ratios.train + ratios.dev {
        Split::Dev
    } else {
        Split::Test
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SubsetCounts {
    pub english: u64,
    pub chem: u64,
    pub numeric: u64,
}

impl Default for SubsetCounts {
    fn default() -> Self {
        Self {
            english: 1_000_000,
            chem: 100_000,
            numeric: 100_000,
        }
    }
}

impl SubsetCounts {
    pub fn new(english: u64, chem: u64, numeric: u64) -> Self {
        Self {
            english,
            chem,
            numeric,
        }
    }

    pub fn get(&self, kind: LabelKind) -> u64 {
        match kind {
            LabelKind::English => self.english,
            LabelKind::Chem => self.chem,
            LabelKind::Numeric => self.numeric,
            LabelKind::External => 0,
        }
    }

    pub fn total(&self) -> u64 {
        self.english + self.chem + self.numeric
    }
}

/// Which splits receive scan-artifact transforms.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TransformScope {
    #[default]
    TrainOnly,
    AllSplits,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusSource {
    pub path: PathBuf,
    pub format: CorpusFormat,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DatasetPlan {
    pub counts: SubsetCounts,
    pub splits: SplitRatios,
    pub master_seed: u64,
    pub english: EnglishGenConfig,
    pub chem: ChemGenConfig,
    pub numeric: NumericGenConfig,
    /// Font ids drawn uniformly per record.
    pub font_ids: Vec<usize>,
    /// Size ids drawn uniformly per record.
    pub size_ids: Vec<usize>,
    /// Canvas and script geometry; its font and size ids are ignored.
    pub render: RenderStyle,
    pub transforms: TransformConfig,
    pub transforms_enabled: bool,
    pub transform_scope: TransformScope,
    pub corpus: Option<CorpusSource>,
    pub output_root: PathBuf,
    /// Extra attempts allowed when a label overflows the canvas.
    pub max_retries: u32,
}

impl Default for DatasetPlan {
    fn default() -> Self {
        Self {
            counts: SubsetCounts::default(),
            splits: SplitRatios::default(),
            master_seed: 0,
            english: EnglishGenConfig::default(),
            chem: ChemGenConfig::default(),
            numeric: NumericGenConfig::default(),
            font_ids: (0..8).collect(),
            size_ids: (0..6).collect(),
            render: RenderStyle::default(),
            transforms: TransformConfig::default(),
            transforms_enabled: true,
            transform_scope: TransformScope::TrainOnly,
            corpus: None,
            output_root: PathBuf::from("dataset"),
            max_retries: 64,
        }
    }
}

impl DatasetPlan {
    pub fn validate(&self) -> Result<(), DatasetError> {
        self.splits.validate()?;
        self.english.validate()?;
        self.chem.validate()?;
        self.numeric.validate()?;
        self.render.validate()?;
        self.transforms.validate()?;
        if self.font_ids.is_empty() || self.size_ids.is_empty() {
            return Err(DatasetError::Plan(
                "font_ids and size_ids must be non-empty".into(),
            ));
        }
        Ok(())
    }

    /// SHA-256 of the plan's canonical JSON, ignoring the output location.
    pub fn fingerprint(&self) -> String {
        let mut plan = self.clone();
        plan.output_root = PathBuf::new();
        sha256_hex(&serde_json::to_vec(&plan).expect("plan serializes"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecordEntry {
    pub id: String,
    pub subset: LabelKind,
    pub split: Split,
    /// Relative to the dataset root for generated records.
    pub image_path: String,
    pub label: String,
    pub record_seed: u64,
    /// Overflow retries used; the attempt seed is derived from it.
    #[serde(default)]
    pub attempt: u32,
    #[serde(default)]
    pub font_id: Option<usize>,
    #[serde(default)]
    pub size_id: Option<usize>,
    #[serde(default)]
    pub transforms_applied: Vec<AppliedTransform>,
    #[serde(default)]
    pub excluded_from_eval: bool,
}

pub fn record_id(subset: LabelKind, index: u64) -> String {
    format!("{subset}_{index:07}")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestHeader {
    pub fingerprint: String,
    pub tool_version: String,
    /// Tag used when ids are prefixed during a merge.
    pub source: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Manifest {
    pub header: ManifestHeader,
    pub entries: Vec<RecordEntry>,
}

impl Manifest {
    pub fn new(fingerprint: String, source: impl Into<String>) -> Self {
        Self {
            header: ManifestHeader {
                fingerprint,
                tool_version: TOOL_VERSION.to_owned(),
                source: source.into(),
            },
            entries: Vec::new(),
        }
    }

    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            out.push_str(&serde_json::to_string(e).expect("entry serializes"));
            out.push('\n');
        }
        out
    }

    /// SHA-256 of the JSONL body.
    pub fn hash(&self) -> String {
        sha256_hex(self.to_jsonl().as_bytes())
    }

    pub fn parse_jsonl(path: &Path, text: &str) -> Result<Vec<RecordEntry>, DatasetError> {
        text.lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
            .map(|(i, l)| {
                serde_json::from_str(l).map_err(|e| DatasetError::Format {
                    path: path.to_path_buf(),
                    message: format!("line {}: {e}", i + 1),
                })
            })
            .collect()
    }

    /// Reads `manifest.jsonl` and the header in `plan.json` from a dataset root.
    pub fn read(root: &Path) -> Result<Self, DatasetError> {
        let mpath = root.join(MANIFEST_FILE);
        let text = fs::read_to_string(&mpath).map_err(io_err(&mpath))?;
        let entries = Self::parse_jsonl(&mpath, &text)?;
        let ppath = root.join(PLAN_FILE);
        let header = match fs::read_to_string(&ppath) {
            Ok(t) => {
                let doc: PlanFile = serde_json::from_str(&t).map_err(|e| DatasetError::Format {
                    path: ppath.clone(),
                    message: e.to_string(),
                })?;
                doc.header
            }
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => ManifestHeader {
                fingerprint: String::new(),
                tool_version: TOOL_VERSION.to_owned(),
                source: "dataset".into(),
            },
            Err(e) => return Err(io_err(&ppath)(e)),
        };
        Ok(Self { header, entries })
    }

    /// Writes `manifest.jsonl` atomically.
    pub fn write_jsonl(&self, root: &Path) -> Result<(), DatasetError> {
        write_atomic(&root.join(MANIFEST_FILE), self.to_jsonl().as_bytes())
    }
}

/// Contents of `plan.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanFile {
    #[serde(flatten)]
    pub header: ManifestHeader,
    pub plan: Option<DatasetPlan>,
}

pub(crate) fn write_atomic(path: &Path, bytes: &[u8]) -> Result<(), DatasetError> {
    let tmp = path.with_extension(format!(
        "{}.tmp",
        path.extension().and_then(|e| e.to_str()).unwrap_or("")
    ));
    let mut f = fs::File::create(&tmp).map_err(io_err(&tmp))?;
    f.write_all(bytes).map_err(io_err(&tmp))?;
    f.sync_all().map_err(io_err(&tmp))?;
    drop(f);
    fs::rename(&tmp, path).map_err(io_err(path))
}

/// Union of two manifests. Ids are prefixed with each side's source tag
/// (suffixed when the tags coincide); splits and paths are kept.
pub fn merge_manifests(a: &Manifest, b: &Manifest) -> Manifest {
    let (mut ta, mut tb) = (a.header.source.clone(), b.header.source.clone());
    if ta == tb {
        ta.push_str("-a");
        tb.push_str("-b");
    }
    let fingerprint =
        sha256_hex(format!("{}\n{}", a.header.fingerprint, b.header.fingerprint).as_bytes());
    let mut out = Manifest::new(fingerprint, format!("{ta}+{tb}"));
    for (tag, m) in [(&ta, a), (&tb, b)] {
        out.entries.extend(m.entries.iter().map(|e| RecordEntry {
            id: format!("{tag}:{}", e.id),
            ..e.clone()
        }));
    }
    out
}
