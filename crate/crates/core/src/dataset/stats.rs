use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::Manifest;
use crate::labelgen::LabelKind;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SubsetStats {
    pub total_characters: u64,
    pub unique_characters: u64,
    pub avg_characters_per_record: f64,
    pub record_count: u64,
}

/// Per-subset label statistics. The three generated subsets are always
/// present; `external` only when the manifest has such records.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct DatasetStats {
    pub subsets: BTreeMap<LabelKind, SubsetStats>,
}

pub fn compute_stats(manifest: &Manifest) -> DatasetStats {
    let mut acc: BTreeMap<LabelKind, (u64, u64, BTreeSet<char>)> = BTreeMap::new();
    for kind in [LabelKind::English, LabelKind::Chem, LabelKind::Numeric] {
        acc.entry(kind).or_default();
    }
    for e in &manifest.entries {
        let (total, count, chars) = acc.entry(e.subset).or_default();
        *count += 1;
        for c in e.label.chars() {
            *total += 1;
            chars.insert(c);
        }
    }
    let subsets = acc
        .into_iter()
        .map(|(kind, (total, count, chars))| {
            let avg = if count == 0 {
                0.0
            } else {
                total as f64 / count as f64
            };
            (
                kind,
                SubsetStats {
                    total_characters: total,
                    unique_characters: chars.len() as u64,
                    avg_characters_per_record: avg,
                    record_count: count,
                },
            )
        })
        .collect();
    DatasetStats { subsets }
}

impl fmt::Display for DatasetStats {
    /// A plain-text table with one column per subset.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cols: Vec<_> = self.subsets.iter().collect();
        write!(f, "{:<28}", "")?;
        for (k, _) in &cols {
            write!(f, "{:>14}", k.as_str())?;
        }
        writeln!(f)?;
        type Row = (&'static str, fn(&SubsetStats) -> String);
        let rows: [Row; 4] = [
            ("Total # Characters", |s| s.total_characters.to_string()),
            ("Unique # Characters", |s| s.unique_characters.to_string()),
            ("Avg # Characters / Record", |s| {
                format!("{:.2}", s.avg_characters_per_record)
            }),
            ("# Records", |s| s.record_count.to_string()),
        ];
        for (name, get) in rows {
            write!(f, "{name:<28}")?;
            for (_, s) in &cols {
                write!(f, "{:>14}", get(s))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}
