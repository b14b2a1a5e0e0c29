//! Acceptance criteria. Each test writes one `PASS`/`FAIL` line to stderr
//! (bypassing libtest capture) and then asserts.

mod common;

use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::time::{Duration, Instant};

use ocrgen_core::dataset::{
    assign_split, build_dataset_with, load_external, record_id, DatasetPlan, ExternalOptions,
    Split, SplitRatios, SubsetCounts,
};
use ocrgen_core::labelgen::{
    break_count_law, gen_chem_label, gen_english_label, gen_numeric_label, ChemGenConfig,
    EnglishGenConfig, LabelKind, NumericGenConfig,
};
use ocrgen_core::metrics::{bleu4, edit_score, levenshtein, BleuConfig, EvalInput, TokenizerMode};
use ocrgen_core::par;
use ocrgen_core::seed::rng_from_seed;
use ocrgen_core::texlayout::{parse_label, serialize, RasterImage, RenderStyle, Renderer};
use ocrgen_core::transforms::{bold, pad, pixelate};
use rand::Rng;

/// Two-sided 99% normal quantile.
const Z99: f64 = 2.5758293035489004;

fn report(criterion: u32, name: &str, pass: bool, detail: &str) {
    let status = if pass { "PASS" } else { "FAIL" };
    let line = format!("[acceptance] {status} criterion {criterion} ({name}): {detail}\n");
    let _ = std::io::stderr().lock().write_all(line.as_bytes());
}

fn within_ci(hits: usize, n: usize, p: f64) -> (bool, f64) {
    let rate = hits as f64 / n as f64;
    let half = Z99 * (p * (1.0 - p) / n as f64).sqrt();
    ((rate - p).abs() <= half, rate)
}

fn full_dp(a: &[char], b: &[char]) -> usize {
    let mut t = vec![vec![0usize; b.len() + 1]; a.len() + 1];
    for (i, row) in t.iter_mut().enumerate() {
        row[0] = i;
    }
    for (j, cell) in t[0].iter_mut().enumerate() {
        *cell = j;
    }
    for i in 1..=a.len() {
        for j in 1..=b.len() {
            let sub = t[i - 1][j - 1] + usize::from(a[i - 1] != b[j - 1]);
            t[i][j] = sub.min(t[i - 1][j] + 1).min(t[i][j - 1] + 1);
        }
    }
    t[a.len()][b.len()]
}

fn random_unicode(rng: &mut impl Rng) -> Vec<char> {
    let len = rng.gen_range(0..=30);
    (0..len)
        .map(|_| loop {
            // Small alphabets make edits interesting; the wide range covers
            // multi-byte scalars.
            let c = match rng.gen_range(0..3) {
                0 => rng.gen_range('a'..='e'),
                1 => rng.gen_range('α'..='ε'),
                _ => match char::from_u32(rng.gen_range(0x20..0x2_FFFF)) {
                    Some(c) => c,
                    None => continue,
                },
            };
            break c;
        })
        .collect()
}

#[test]
fn criterion_1_metric_oracle_equivalence() {
    let start = Instant::now();
    let mut rng = rng_from_seed(1);
    let mut mismatches = 0;
    for _ in 0..1000 {
        let a = random_unicode(&mut rng);
        let b = random_unicode(&mut rng);
        let (sa, sb): (String, String) = (a.iter().collect(), b.iter().collect());
        if levenshtein(&sa, &sb) != full_dp(&a, &b) {
            mismatches += 1;
        }
    }
    let e1 = edit_score(&EvalInput::new(&["abc"], &["abd"]).unwrap());
    let e2 = edit_score(&EvalInput::new(&["ab", "cd"], &["ab", "ce"]).unwrap());
    let elapsed = start.elapsed();
    let pass = mismatches == 0
        && format!("{e1:.2}") == "66.67"
        && format!("{e2:.2}") == "75.00"
        && elapsed < Duration::from_secs(10);
    report(
        1,
        "metric oracle equivalence",
        pass,
        &format!("{mismatches}/1000 DP mismatches, edit {e1:.2} and {e2:.2}, {elapsed:.2?}"),
    );
    assert!(pass);
}

#[test]
fn criterion_2_bleu4() {
    let ws = BleuConfig {
        tokenizer: TokenizerMode::Whitespace,
        ..BleuConfig::default()
    };
    let refs = ["a b c d e f", "x y z w v"];
    let identical = bleu4(
        &EvalInput::new(&refs, &refs).unwrap(),
        &BleuConfig::default(),
    );
    let empty = bleu4(
        &EvalInput::new(&refs, &["", ""]).unwrap(),
        &BleuConfig::default(),
    );
    let five = bleu4(
        &EvalInput::new(&["a b c d e"], &["a b c d x"]).unwrap(),
        &ws,
    );
    let five_expected = 100.0 * (4.0 / 5.0 * 3.0 / 4.0 * 2.0 / 3.0 * 1.0 / 2.0f64).powf(0.25);
    // Prefix hypothesis: every precision is 1, so only the brevity penalty remains.
    let (r, c) = (8.0, 6.0);
    let short = bleu4(
        &EvalInput::new(&["a b c d e f g h"], &["a b c d e f"]).unwrap(),
        &ws,
    );
    let bp = 100.0 * (1.0f64 - r / c).exp();
    let pass = (identical - 100.0).abs() < 1e-9
        && empty == 0.0
        && (five - 66.87).abs() <= 0.01
        && (five - five_expected).abs() < 1e-9
        && (short - bp).abs() < 1e-9;
    report(
        2,
        "BLEU-4",
        pass,
        &format!("identical {identical:.2}, empty {empty:.2}, five-token {five:.4}, short {short:.4} vs {bp:.4}"),
    );
    assert!(pass);
}

#[test]
fn criterion_3_generator_statistics() {
    let start = Instant::now();
    let n = 10_000;
    let chem_cfg = ChemGenConfig::default();
    let num_cfg = NumericGenConfig::default();
    let mut rng = rng_from_seed(3);
    let chem_total: usize = (0..n)
        .map(|_| gen_chem_label(&chem_cfg, &mut rng).unwrap().char_count())
        .sum();
    let mut rng = rng_from_seed(4);
    let mut num_total = 0;
    let mut num_chars = BTreeSet::new();
    for _ in 0..n {
        let label = gen_numeric_label(&num_cfg, &mut rng).unwrap();
        num_total += label.char_count();
        num_chars.extend(label.text.chars());
    }
    let chem_mean = chem_total as f64 / n as f64;
    let num_mean = num_total as f64 / n as f64;
    let elapsed = start.elapsed();
    let chem_ok = (chem_mean - 78.72).abs() <= 0.15 * 78.72;
    let num_ok = (num_mean - 18.83).abs() <= 0.20 * 18.83;
    let unique_ok = num_chars.len() <= 60;
    let pass = chem_ok && num_ok && unique_ok && elapsed < Duration::from_secs(60);
    report(
        3,
        "generator statistics",
        pass,
        &format!(
            "chem mean {chem_mean:.2} (target 78.72 +/-15%: {}), numeric mean {num_mean:.2} (18.83 +/-20%: {}), \
             numeric unique {} (<=60: {}), {elapsed:.2?}",
            ok(chem_ok),
            ok(num_ok),
            num_chars.len(),
            ok(unique_ok)
        ),
    );
    assert!(pass);
}

fn ok(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "out of range"
    }
}

#[test]
fn criterion_4_stochastic_laws() {
    let corpus = common::synthetic_corpus(200, 1000, 3000, 40);
    let cfg = EnglishGenConfig::default();
    let n = 100_000;
    let labels: Vec<String> = par::map_indexed(n, |i| {
        let mut rng = rng_from_seed(0x4_0000 + i as u64);
        gen_english_label(&corpus, &cfg, &mut rng).unwrap().text
    });
    let (mut sup, mut sub, mut sym, mut brk) = (0, 0, 0, 0);
    let mut counts = [0usize; 4];
    for l in &labels {
        sup += usize::from(l.contains("^{"));
        sub += usize::from(l.contains("_{"));
        let breaks = l.matches(" \\\\ ").count();
        sym += usize::from(l.replace(" \\\\ ", " ").contains('\\'));
        if breaks > 0 {
            brk += 1;
            counts[breaks - 1] += 1;
        }
    }
    // Normalized 1/i^2 weights, computed independently of the generator.
    let z: f64 = (1..=4).map(|i| 1.0 / (i * i) as f64).sum();
    let oracle: Vec<f64> = (1..=4).map(|i| 1.0 / (i * i) as f64 / z).collect();
    // The reference values are printed to four decimals (0.70244 appears
    // as 0.7025), so they agree with the exact law only to ~1e-4.
    let frozen = [0.7025, 0.1756, 0.0780, 0.0439];
    let law = break_count_law(cfg.max_breaks);
    let law_ok = law.iter().zip(&oracle).all(|(a, b)| (a - b).abs() < 1e-12)
        && oracle.iter().zip(frozen).all(|(a, b)| (a - b).abs() < 1e-4);
    let dist: Vec<f64> = counts.iter().map(|&c| c as f64 / brk as f64).collect();
    let dist_ok = dist.iter().zip(frozen).all(|(e, p)| (e - p).abs() <= 0.02)
        && dist.iter().zip(&oracle).all(|(e, p)| (e - p).abs() <= 0.02);
    let (sup_ok, sup_rate) = within_ci(sup, n, cfg.superscript_prob);
    let (sub_ok, sub_rate) = within_ci(sub, n, cfg.subscript_prob);
    let (sym_ok, sym_rate) = within_ci(sym, n, cfg.symbol_prob);
    let (brk_ok, brk_rate) = within_ci(brk, n, cfg.line_break_prob);
    let pass = law_ok && dist_ok && sup_ok && sub_ok && sym_ok && brk_ok;
    report(
        4,
        "stochastic-law conformance",
        pass,
        &format!(
            "break rate {brk_rate:.4}, counts {:?}, sup {sup_rate:.4}, sub {sub_rate:.4}, symbol {sym_rate:.4}",
            dist.iter().map(|d| format!("{d:.4}")).collect::<Vec<_>>()
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_5_grammar_totality() {
    let corpus = common::synthetic_corpus(200, 1000, 3000, 50);
    let renderer = Renderer::bundled();
    let per = 10_000;
    let results: Vec<(bool, bool, bool)> = par::map_indexed(3 * per, |i| {
        let mut rng = rng_from_seed(0x5_0000 + i as u64);
        let label = match i / per {
            0 => gen_english_label(&corpus, &EnglishGenConfig::default(), &mut rng),
            1 => gen_chem_label(&ChemGenConfig::default(), &mut rng),
            _ => gen_numeric_label(&NumericGenConfig::default(), &mut rng),
        }
        .unwrap();
        let Ok(ast) = parse_label(&label.text) else {
            return (false, false, false);
        };
        let round_trip = parse_label(&serialize(&ast)).is_ok_and(|again| again == ast);
        let style = RenderStyle {
            font_id: i % renderer.font_count(),
            size_id: (i / 7) % renderer.size_count(),
            ..RenderStyle::default()
        };
        let rendered = renderer
            .rasterize_fit(&ast, &style)
            .is_ok_and(|img| img.ink_count() > 0);
        (true, rendered, round_trip)
    });
    let parse_fail = results.iter().filter(|r| !r.0).count();
    let render_fail = results.iter().filter(|r| !r.1).count();
    let rt_fail = results.iter().filter(|r| !r.2).count();
    let pass = parse_fail == 0 && render_fail == 0 && rt_fail == 0;
    report(
        5,
        "grammar totality and round-trip",
        pass,
        &format!(
            "{} labels: {parse_fail} parse, {render_fail} render, {rt_fail} round-trip failures",
            results.len()
        ),
    );
    assert!(pass);
}

fn literal_bold(img: &RasterImage, n: u32) -> RasterImage {
    let r = n as i64;
    let (w, h) = (img.width() as i64, img.height() as i64);
    let mut out = img.clone();
    for y in 0..h {
        for x in 0..w {
            if img.get(x as u32, y as u32) == 0 {
                continue;
            }
            let mut hot = 0;
            for ny in (y - r).max(0)..=(y + r).min(h - 1) {
                for nx in (x - r).max(0)..=(x + r).min(w - 1) {
                    hot += u32::from(img.get(nx as u32, ny as u32) == 0);
                }
            }
            if hot >= n {
                out.set(x as u32, y as u32, 0);
            }
        }
    }
    out
}

#[test]
fn criterion_6_transforms() {
    let mut rng = rng_from_seed(6);
    let (mut oracle_fail, mut mono_fail, mut pix_fail, mut pad_fail) = (0, 0, 0, 0);
    for i in 0..100 {
        let density = [0.02, 0.1, 0.3, 0.5][i % 4];
        let px: Vec<u8> = (0..64 * 64)
            .map(|_| if rng.gen_bool(density) { 0 } else { 255 })
            .collect();
        let img = RasterImage::from_pixels(64, 64, px).unwrap();
        for n in 1..=3 {
            let fast = bold(&img, n).unwrap();
            if fast != literal_bold(&img, n) {
                oracle_fail += 1;
            }
            if img
                .pixels()
                .iter()
                .zip(fast.pixels())
                .any(|(a, b)| *a == 0 && *b != 0)
            {
                mono_fail += 1;
            }
        }
        let gray: Vec<u8> = (0..64 * 64).map(|_| rng.gen()).collect();
        let gray = RasterImage::from_pixels(64, 64, gray).unwrap();
        if pixelate(&gray, 1.0).unwrap() != gray {
            pix_fail += 1;
        }
        if pad(&gray, &mut rng, 40).ink_count() != gray.ink_count() {
            pad_fail += 1;
        }
    }
    let pass = oracle_fail == 0 && mono_fail == 0 && pix_fail == 0 && pad_fail == 0;
    report(
        6,
        "transform oracle and properties",
        pass,
        &format!(
            "300 bold cases: {oracle_fail} oracle, {mono_fail} monotonicity failures; \
             {pix_fail} pixelate identity, {pad_fail} pad ink failures"
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_7_end_to_end_determinism() {
    let start = Instant::now();
    let corpus = common::synthetic_corpus(100, 200, 2000, 70);
    let renderer = Renderer::bundled();
    let dir = tempfile::tempdir().unwrap();
    let build = |name: &str, jobs: usize| {
        let plan = DatasetPlan {
            counts: SubsetCounts::new(1000, 500, 500),
            master_seed: 2024,
            output_root: dir.path().join(name),
            ..DatasetPlan::default()
        };
        let m = par::with_jobs(Some(jobs), || {
            build_dataset_with(&plan, Some(&corpus), &renderer)
        })
        .unwrap();
        let images: Vec<Vec<u8>> = m
            .entries
            .iter()
            .map(|e| fs::read(plan.output_root.join(&e.image_path)).unwrap())
            .collect();
        (m.hash(), images)
    };
    let (h1, i1) = build("jobs1", 1);
    let (h4, i4) = build("jobs4", 4);
    let elapsed = start.elapsed();
    let same_images = i1 == i4;
    let pass = h1 == h4 && same_images && i1.len() == 2000 && elapsed < Duration::from_secs(600);
    report(
        7,
        "end-to-end determinism",
        pass,
        &format!(
            "{} records, hashes {} ({}..), images identical: {same_images}, {elapsed:.2?}",
            i1.len(),
            if h1 == h4 { "equal" } else { "differ" },
            &h1[..12]
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_8_split_integrity() {
    let ratios = SplitRatios::default();
    let n = 100_000;
    let mut counts = [0usize; 3];
    let mut seen = BTreeSet::new();
    for i in 0..n {
        let id = record_id(LabelKind::English, i);
        let split = assign_split(&id, &ratios, 8);
        // Same id, same split: disjointness by construction, checked anyway.
        assert_eq!(split, assign_split(&id, &ratios, 8));
        seen.insert(id);
        counts[match split {
            Split::Train => 0,
            Split::Dev => 1,
            Split::Test => 2,
        }] += 1;
    }
    let props: Vec<f64> = counts.iter().map(|&c| c as f64 / n as f64).collect();
    let targets = [ratios.train, ratios.dev, ratios.test];
    let pass = seen.len() == n as usize
        && counts.iter().sum::<usize>() == n as usize
        && props
            .iter()
            .zip(targets)
            .all(|(p, t)| (p - t).abs() <= 0.005);
    report(
        8,
        "split integrity",
        pass,
        &format!(
            "train {:.4}, dev {:.4}, test {:.4}",
            props[0], props[1], props[2]
        ),
    );
    assert!(pass);
}

#[test]
fn criterion_9_external_ingestion() {
    let dir = tempfile::tempdir().unwrap();
    let images = dir.path().join("images");
    fs::create_dir(&images).unwrap();
    let mut labels = String::new();
    for i in 0..20 {
        let width = if i == 13 { 800 } else { 150 + 25 * i };
        let img = RasterImage::white(width, 40);
        fs::write(images.join(format!("{i}.png")), img.to_png().unwrap()).unwrap();
        labels.push_str(&format!("x_{{{i}}} + \\alpha\n"));
    }
    let labels_file = dir.path().join("labels.txt");
    fs::write(&labels_file, labels).unwrap();
    let m = load_external(&images, &labels_file, "real", &ExternalOptions::default()).unwrap();
    let excluded: Vec<_> = m
        .entries
        .iter()
        .filter(|e| e.excluded_from_eval)
        .map(|e| e.id.clone())
        .collect();
    let pass = m.entries.len() == 20 && excluded == ["real_0000013"];
    report(
        9,
        "external ingestion",
        pass,
        &format!("{} records loaded, excluded {excluded:?}", m.entries.len()),
    );
    assert!(pass);
}
