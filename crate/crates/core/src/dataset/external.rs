use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{io_err, DatasetError, Manifest, RecordEntry, Split};
use crate::labelgen::LabelKind;
use crate::seed::sha256_hex;
use crate::texlayout::image_dimensions;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExternalOptions {
    /// Wider images are kept but flagged as excluded from evaluation.
    pub max_width: u32,
    pub split: Split,
}

impl Default for ExternalOptions {
    fn default() -> Self {
        Self {
            max_width: 700,
            split: Split::Test,
        }
    }
}

#[derive(Deserialize)]
struct MappingLine {
    image: String,
    label: String,
}

/// Reads an external (image, label) set.
///
/// `labels_file` is either plain text, one label per line with line `i`
/// (0-based) naming `<i>.png`, or a `.jsonl` file of
/// `{"image": ..., "label": ...}` objects. Image paths in the result are
/// `images_dir` joined with the file name.
pub fn load_external(
    images_dir: &Path,
    labels_file: &Path,
    subset_tag: &str,
    opts: &ExternalOptions,
) -> Result<Manifest, DatasetError> {
    let text = fs::read_to_string(labels_file).map_err(io_err(labels_file))?;
    let is_jsonl = labels_file.extension().is_some_and(|e| e == "jsonl");
    let mut pairs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if is_jsonl {
            if line.trim().is_empty() {
                continue;
            }
            let m: MappingLine = serde_json::from_str(line).map_err(|e| DatasetError::Format {
                path: labels_file.to_path_buf(),
                message: format!("line {}: {e}", i + 1),
            })?;
            pairs.push((m.image, m.label));
        } else {
            pairs.push((format!("{i}.png"), line.to_owned()));
        }
    }
    if let Some(i) = pairs.iter().position(|(_, l)| l.trim().is_empty()) {
        return Err(DatasetError::Format {
            path: labels_file.to_path_buf(),
            message: format!("empty label on record {i}"),
        });
    }
    if !is_jsonl {
        let images = fs::read_dir(images_dir)
            .map_err(io_err(images_dir))?
            .filter_map(Result::ok)
            .filter(|e| e.path().extension().is_some_and(|x| x == "png"))
            .count();
        if images != pairs.len() {
            return Err(DatasetError::CountMismatch {
                labels: pairs.len(),
                images,
            });
        }
    }
    let id = |i: usize| format!("{subset_tag}_{i:07}");
    let missing: Vec<String> = pairs
        .iter()
        .enumerate()
        .filter(|(_, (img, _))| !images_dir.join(img).is_file())
        .map(|(i, _)| id(i))
        .collect();
    if !missing.is_empty() {
        return Err(DatasetError::MissingImages { ids: missing });
    }
    let mut manifest = Manifest::new(sha256_hex(text.as_bytes()), subset_tag);
    for (i, (img, label)) in pairs.into_iter().enumerate() {
        let path = images_dir.join(&img);
        let (width, _) = image_dimensions(&path)?;
        manifest.entries.push(RecordEntry {
            id: id(i),
            subset: LabelKind::External,
            split: opts.split,
            image_path: path.to_string_lossy().into_owned(),
            label,
            record_seed: 0,
            attempt: 0,
            font_id: None,
            size_id: None,
            transforms_applied: Vec::new(),
            excluded_from_eval: width > opts.max_width,
        });
    }
    Ok(manifest)
}
