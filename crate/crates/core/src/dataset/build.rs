use std::fs;

use rand::Rng;

use super::{
    assign_split, io_err, record_id, write_atomic, DatasetError, DatasetPlan, Manifest, PlanFile,
    RecordEntry, Split, TransformScope, PLAN_FILE,
};
use crate::corpus::{load_corpus, Corpus};
use crate::labelgen::{gen_chem_label, gen_english_label_with, gen_numeric_label, LabelKind};
use crate::par;
use crate::seed::{attempt_seed, record_seed, rng_from_seed};
use crate::texlayout::{RasterImage, RenderError, RenderStyle, Renderer};
use crate::transforms::apply_pipeline;

/// A record before it is written to disk.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedRecord {
    pub entry: RecordEntry,
    pub image: RasterImage,
}

/// Generates one record from its derived seed, resampling on overflow.
pub fn generate_record(
    plan: &DatasetPlan,
    corpus: Option<&Corpus>,
    renderer: &Renderer,
    subset: LabelKind,
    index: u64,
) -> Result<GeneratedRecord, DatasetError> {
    let id = record_id(subset, index);
    let split = assign_split(&id, &plan.splits, plan.master_seed);
    let renderable = |c: char| renderer.fonts().supports(c);
    for attempt in 0..=plan.max_retries {
        let mut rng = rng_from_seed(attempt_seed(
            plan.master_seed,
            subset.as_str(),
            index,
            attempt,
        ));
        let label = match subset {
            LabelKind::English => {
                let corpus = corpus
                    .ok_or_else(|| DatasetError::Plan("english records need a corpus".into()))?;
                gen_english_label_with(corpus, &plan.english, &mut rng, &renderable)?
            }
            LabelKind::Chem => gen_chem_label(&plan.chem, &mut rng)?,
            LabelKind::Numeric => gen_numeric_label(&plan.numeric, &mut rng)?,
            LabelKind::External => {
                return Err(DatasetError::Plan(
                    "external records are loaded, not generated".into(),
                ))
            }
        };
        let font_id = plan.font_ids[rng.gen_range(0..plan.font_ids.len())];
        let size_id = plan.size_ids[rng.gen_range(0..plan.size_ids.len())];
        let ast = label.parse().map_err(|source| DatasetError::Grammar {
            subset,
            index,
            source,
        })?;
        let style = RenderStyle {
            font_id,
            size_id,
            ..plan.render
        };
        let image = match renderer.rasterize(&ast, &style) {
            Ok(img) => img,
            Err(RenderError::Overflow { .. }) => {
                log::debug!("{id}: overflow on attempt {attempt}, resampling");
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        let transform = plan.transforms_enabled
            && (plan.transform_scope == TransformScope::AllSplits || split == Split::Train);
        let (image, transforms_applied) = if transform {
            apply_pipeline(&image, &plan.transforms, &mut rng)?
        } else {
            (image, Vec::new())
        };
        let entry = RecordEntry {
            image_path: format!("images/{subset}/{id}.png"),
            id,
            subset,
            split,
            label: label.text,
            record_seed: record_seed(plan.master_seed, subset.as_str(), index),
            attempt,
            font_id: Some(font_id),
            size_id: Some(size_id),
            transforms_applied,
            excluded_from_eval: false,
        };
        return Ok(GeneratedRecord { entry, image });
    }
    Err(DatasetError::RetriesExhausted {
        subset,
        index,
        attempts: plan.max_retries + 1,
    })
}

/// Loads the plan's corpus (when english records are requested) and builds
/// with the bundled renderer.
pub fn build_dataset(plan: &DatasetPlan) -> Result<Manifest, DatasetError> {
    plan.validate()?;
    let corpus = match (&plan.corpus, plan.counts.english) {
        (_, 0) => None,
        (Some(src), _) => Some(load_corpus(&src.path, src.format)?),
        (None, _) => return Err(DatasetError::Plan("english records need a corpus".into())),
    };
    build_dataset_with(plan, corpus.as_ref(), &Renderer::bundled())
}

/// Generates every record, writes images, then `plan.json` and finally
/// `manifest.jsonl`. Records are produced in parallel and assembled in
/// index order, so the output does not depend on the thread count.
pub fn build_dataset_with(
    plan: &DatasetPlan,
    corpus: Option<&Corpus>,
    renderer: &Renderer,
) -> Result<Manifest, DatasetError> {
    plan.validate()?;
    if plan.counts.english > 0 && corpus.is_none() {
        return Err(DatasetError::Plan("english records need a corpus".into()));
    }
    if let Some(&f) = plan.font_ids.iter().find(|&&f| f >= renderer.font_count()) {
        return Err(DatasetError::Plan(format!(
            "font id {f} out of range (renderer has {})",
            renderer.font_count()
        )));
    }
    if let Some(&s) = plan.size_ids.iter().find(|&&s| s >= renderer.size_count()) {
        return Err(DatasetError::Plan(format!(
            "size id {s} out of range (renderer has {})",
            renderer.size_count()
        )));
    }
    let root = &plan.output_root;
    fs::create_dir_all(root).map_err(io_err(root))?;
    let mut tasks = Vec::new();
    for subset in [LabelKind::English, LabelKind::Chem, LabelKind::Numeric] {
        let n = plan.counts.get(subset);
        if n > 0 {
            let dir = root.join("images").join(subset.as_str());
            fs::create_dir_all(&dir).map_err(io_err(&dir))?;
        }
        tasks.extend((0..n).map(|i| (subset, i)));
    }
    let results = par::map_slice(&tasks, |&(subset, index)| {
        let rec = generate_record(plan, corpus, renderer, subset, index)?;
        let path = root.join(&rec.entry.image_path);
        fs::write(&path, rec.image.to_png()?).map_err(io_err(&path))?;
        Ok::<_, DatasetError>(rec.entry)
    });
    let mut manifest = Manifest::new(plan.fingerprint(), "synthetic");
    manifest.entries = results.into_iter().collect::<Result<_, _>>()?;
    let plan_file = PlanFile {
        header: manifest.header.clone(),
        plan: Some(plan.clone()),
    };
    let json = serde_json::to_vec_pretty(&plan_file).expect("plan serializes");
    write_atomic(&root.join(PLAN_FILE), &json)?;
    manifest.write_jsonl(root)?;
    log::info!(
        "wrote {} records to {}",
        manifest.entries.len(),
        root.display()
    );
    Ok(manifest)
}
