//! `ocrgen`: generate, render, transform, evaluate and inspect records.
//!
//! Exit status is 0 on success, 1 on usage errors and 2 on data errors.
//! Errors are reported on stderr as a single JSON line.

mod config;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::OnceLock;

use clap::{CommandFactory, FromArgMatches, Parser, Subcommand};
use ocrgen_core::dataset::{build_dataset, compute_stats, Manifest};
use ocrgen_core::labelgen::{LabelKind, LatexLabel};
use ocrgen_core::metrics::{evaluate, EvalInput, TokenizerMode};
use ocrgen_core::par;
use ocrgen_core::seed::{rng_from_seed, StableHasher};
use ocrgen_core::texlayout::{RasterImage, RenderStyle, Renderer};
use ocrgen_core::transforms::apply_pipeline;
use serde_json::json;

use crate::config::Config;

#[derive(Debug)]
pub struct CliError {
    usage: bool,
    kind: &'static str,
    message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            usage: true,
            kind: "usage",
            message: message.into(),
        }
    }

    pub fn data(kind: &'static str, message: impl Into<String>) -> Self {
        Self {
            usage: false,
            kind,
            message: message.into(),
        }
    }
}

fn data_err<E: std::fmt::Display>(kind: &'static str) -> impl Fn(E) -> CliError {
    move |e| CliError::data(kind, e.to_string())
}

#[derive(Parser)]
#[command(
    name = "ocrgen",
    version,
    about = "Synthetic LaTeX-labelled OCR corpus toolkit"
)]
struct Cli {
    /// JSON config file; every key is optional.
    #[arg(short, long, global = true)]
    config: Option<PathBuf>,
    /// Override a config key, e.g. `--set plan.counts.chem=500`. Repeatable.
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    overrides: Vec<String>,
    /// Master seed; wins over the config file.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// More log output (-v info, -vv debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a dataset (images, manifest.jsonl, plan.json) and print its manifest hash.
    Generate {
        /// Output root; overrides plan.output_root.
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// Worker threads (default: all cores).
        #[arg(short, long)]
        jobs: Option<usize>,
    },
    /// Render one label to a PNG.
    Render {
        #[arg(short, long)]
        label: String,
        #[arg(short, long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        font_id: usize,
        #[arg(long, default_value_t = 0)]
        size_id: usize,
        /// Size the canvas to the ink instead of using the configured canvas.
        #[arg(long)]
        fit: bool,
    },
    /// Apply the transform pipeline to every PNG in a directory.
    Transform {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
        #[arg(short, long)]
        jobs: Option<usize>,
    },
    /// Score hypotheses against references (text, one per line, or JSONL).
    Evaluate {
        #[arg(long)]
        refs: PathBuf,
        #[arg(long)]
        hyps: PathBuf,
        /// Also write the report here.
        #[arg(short, long)]
        out: Option<PathBuf>,
        /// Overrides metrics.tokenizer.
        #[arg(long)]
        tokenizer: Option<TokenizerMode>,
    },
    /// Print per-subset label statistics for a dataset.
    Stats {
        /// Dataset root or manifest.jsonl.
        manifest: PathBuf,
        /// Print JSON instead of a table.
        #[arg(long)]
        json: bool,
    },
    /// Print the parse tree of a label or of a manifest record.
    Inspect {
        #[arg(short, long, conflicts_with_all = ["manifest", "id"])]
        label: Option<String>,
        /// Dataset root or manifest.jsonl.
        #[arg(long, requires = "id")]
        manifest: Option<PathBuf>,
        #[arg(long, requires = "manifest")]
        id: Option<String>,
    },
}

fn help_footer() -> &'static str {
    static TEXT: OnceLock<String> = OnceLock::new();
    TEXT.get_or_init(|| format!("Config keys and defaults:\n{}", config::key_listing()))
}

fn main() -> ExitCode {
    let cmd = Cli::command().after_long_help(help_footer());
    let cli = match cmd
        .try_get_matches()
        .and_then(|m| Cli::from_arg_matches(&m))
    {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            report(&CliError::usage(
                text.lines()
                    .next()
                    .unwrap_or("")
                    .trim_start_matches("error: "),
            ));
            return ExitCode::from(1);
        }
    };
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    env_logger::Builder::new().filter_level(level).init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            report(&e);
            ExitCode::from(if e.usage { 1 } else { 2 })
        }
    }
}

fn report(e: &CliError) {
    let line = json!({ "error": e.kind, "message": e.message });
    let _ = writeln!(std::io::stderr(), "{line}");
}

fn run(cli: Cli) -> Result<(), CliError> {
    let mut cfg = Config::load(cli.config.as_deref(), &cli.overrides, cli.seed)?;
    match cli.command {
        Command::Generate { out, jobs } => {
            if let Some(out) = out {
                cfg.plan.output_root = out;
            }
            let manifest =
                par::with_jobs(jobs, || build_dataset(&cfg.plan)).map_err(data_err("dataset"))?;
            println!(
                "{}",
                json!({
                    "records": manifest.entries.len(),
                    "output": cfg.plan.output_root,
                    "manifest_hash": manifest.hash(),
                })
            );
        }
        Command::Render {
            label,
            out,
            font_id,
            size_id,
            fit,
        } => {
            let label = LatexLabel::from_delimited(&label, LabelKind::External);
            let ast = label.parse().map_err(data_err("parse"))?;
            let style = RenderStyle {
                font_id,
                size_id,
                ..cfg.plan.render
            };
            let renderer = Renderer::bundled();
            let img = if fit {
                renderer.rasterize_fit(&ast, &style)
            } else {
                renderer.rasterize(&ast, &style)
            }
            .map_err(data_err("render"))?;
            write_png(&out, &img)?;
        }
        Command::Transform { input, out, jobs } => {
            cfg.plan.transforms.validate().map_err(data_err("config"))?;
            fs::create_dir_all(&out).map_err(data_err("io"))?;
            let mut names: Vec<String> = fs::read_dir(&input)
                .map_err(|e| CliError::data("io", format!("{}: {e}", input.display())))?
                .filter_map(Result::ok)
                .map(|e| e.file_name().to_string_lossy().into_owned())
                .filter(|n| n.ends_with(".png"))
                .collect();
            names.sort();
            let seed = cfg.plan.master_seed;
            let results = par::with_jobs(jobs, || {
                par::map_slice(&names, |name| {
                    let img =
                        RasterImage::read_png(&input.join(name)).map_err(data_err("image"))?;
                    let mut rng = rng_from_seed(
                        StableHasher::new("transform")
                            .u64(seed)
                            .str(name)
                            .finish_u64(),
                    );
                    let (img, applied) = apply_pipeline(&img, &cfg.plan.transforms, &mut rng)
                        .map_err(data_err("transform"))?;
                    write_png(&out.join(name), &img)?;
                    Ok::<_, CliError>(json!({ "image": name, "transforms_applied": applied }))
                })
            });
            for r in results {
                println!("{}", r?);
            }
        }
        Command::Evaluate {
            refs,
            hyps,
            out,
            tokenizer,
        } => {
            let mut bleu = cfg.metrics;
            if let Some(t) = tokenizer {
                bleu.tokenizer = t;
            }
            let input = EvalInput::new(&read_strings(&refs)?, &read_strings(&hyps)?)
                .map_err(data_err("metrics"))?;
            let report =
                serde_json::to_string_pretty(&evaluate(&input, &bleu)).expect("report serializes");
            println!("{report}");
            if let Some(out) = out {
                fs::write(&out, format!("{report}\n"))
                    .map_err(|e| CliError::data("io", format!("{}: {e}", out.display())))?;
            }
        }
        Command::Stats { manifest, json } => {
            let m = read_manifest(&manifest)?;
            let stats = compute_stats(&m);
            if json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&stats).expect("stats serialize")
                );
            } else {
                print!("{stats}");
            }
        }
        Command::Inspect {
            label,
            manifest,
            id,
        } => {
            let text = match (label, manifest, id) {
                (Some(l), _, _) => LatexLabel::from_delimited(&l, LabelKind::External).text,
                (None, Some(m), Some(id)) => {
                    read_manifest(&m)?
                        .entries
                        .into_iter()
                        .find(|e| e.id == id)
                        .ok_or_else(|| {
                            CliError::data("not-found", format!("no record with id {id}"))
                        })?
                        .label
                }
                _ => {
                    return Err(CliError::usage(
                        "inspect needs --label or --manifest with --id",
                    ))
                }
            };
            let ast = LatexLabel::new(text, LabelKind::External)
                .parse()
                .map_err(data_err("parse"))?;
            print!("{}", ast.pretty());
        }
    }
    Ok(())
}

fn write_png(path: &Path, img: &RasterImage) -> Result<(), CliError> {
    let bytes = img.to_png().map_err(data_err("image"))?;
    fs::write(path, bytes).map_err(|e| CliError::data("io", format!("{}: {e}", path.display())))
}

fn read_manifest(path: &Path) -> Result<Manifest, CliError> {
    if path.is_dir() {
        return Manifest::read(path).map_err(data_err("manifest"));
    }
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::data("io", format!("{}: {e}", path.display())))?;
    let entries = Manifest::parse_jsonl(path, &text).map_err(data_err("manifest"))?;
    let mut m = Manifest::new(String::new(), "dataset");
    m.entries = entries;
    Ok(m)
}

/// Text files hold one string per line. JSONL lines are JSON strings or
/// objects with a `label` (or `text`) field, so a manifest can serve as
/// references.
fn read_strings(path: &Path) -> Result<Vec<String>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::data("io", format!("{}: {e}", path.display())))?;
    if path.extension().is_none_or(|e| e != "jsonl") {
        return Ok(text
            .lines()
            .map(|l| l.trim_end_matches('\r').to_owned())
            .collect());
    }
    let bad = |i: usize, msg: &str| {
        CliError::data(
            "format",
            format!("{}: line {}: {msg}", path.display(), i + 1),
        )
    };
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            let v: serde_json::Value =
                serde_json::from_str(l).map_err(|e| bad(i, &e.to_string()))?;
            match &v {
                serde_json::Value::String(s) => Ok(s.clone()),
                serde_json::Value::Object(o) => o
                    .get("label")
                    .or_else(|| o.get("text"))
                    .and_then(|s| s.as_str())
                    .map(str::to_owned)
                    .ok_or_else(|| bad(i, "object without a string `label` or `text` field")),
                _ => Err(bad(i, "expected a string or an object")),
            }
        })
        .collect()
}
