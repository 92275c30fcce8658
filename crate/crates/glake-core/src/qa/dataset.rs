//! Dataset generation: masks in, JSON-lines records and a manifest out.
//!
//! Each record's RNG is seeded from (global seed, image id), so output is
//! byte-identical regardless of worker count or enumeration order. Records
//! are sorted by image id before writing.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::{label_components, AnalysisConfig, LakeInstance};
use crate::qa::render::render_pair;
use crate::qa::templates::{TemplateFamily, TemplateSet};
use crate::raster::load_mask;
use crate::seed::{assign_split, record_seed, sha256_hex, Split};

/// One dataset row. Serializes with exactly these keys, in this order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QaRecord {
    pub image_id: String,
    pub question: String,
    pub answer: String,
    pub lakes: Vec<LakeInstance>,
    pub template_id: String,
    pub family: TemplateFamily,
    pub seed: u64,
    pub config_echo: AnalysisConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenerationConfig {
    pub analysis: AnalysisConfig,
    /// Train fraction for the optional hash-based split.
    pub split_ratio: Option<f64>,
    /// Threshold applied when loading masks; 0 means any nonzero pixel is lake.
    pub binarize_threshold: u8,
}

impl Default for GenerationConfig {
    fn default() -> Self {
        Self {
            analysis: AnalysisConfig::default(),
            split_ratio: None,
            binarize_threshold: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitSummary {
    pub ratio: f64,
    pub train: usize,
    pub test: usize,
}

/// Sidecar describing one generation run: full config echo, template
/// provenance, and branch/skip counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub family: TemplateFamily,
    pub template_version: String,
    pub template_digest: String,
    pub global_seed: u64,
    pub config: GenerationConfig,
    pub masks_seen: usize,
    pub records: usize,
    pub branch_counts: BTreeMap<String, usize>,
    pub skipped_empty: usize,
    pub skipped_family_mismatch: usize,
    pub split: Option<SplitSummary>,
}

/// Lists the mask files (`.png`/`.pgm`) in a directory, sorted by stem.
pub fn enumerate_masks(dir: &Path) -> Result<Vec<PathBuf>> {
    let entries = fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| {
            matches!(
                p.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase).as_deref(),
                Some("png") | Some("pgm")
            )
        })
        .collect();
    paths.sort_by_key(|p| p.file_stem().map(|s| s.to_os_string()));
    Ok(paths)
}

enum Outcome {
    Record(Box<QaRecord>),
    SkipEmpty,
    SkipFamilyMismatch,
}

/// Generates one record per mask with at least one instance. Masks with no
/// instances are skipped and counted; so are multi-lake masks when the
/// family is position_only (it has no templates for them).
pub fn generate_dataset(
    mask_dir: &Path,
    templates: &TemplateSet,
    config: &GenerationConfig,
    global_seed: u64,
) -> Result<(Vec<QaRecord>, DatasetManifest)> {
    let paths = enumerate_masks(mask_dir)?;
    if paths.is_empty() {
        return Err(Error::EmptyInput(format!(
            "no .png or .pgm masks in {}",
            mask_dir.display()
        )));
    }

    let outcomes: Vec<Outcome> = paths
        .par_iter()
        .map(|path| -> Result<Outcome> {
            let mask = load_mask(path, config.binarize_threshold)?;
            let instances = label_components(&mask, &config.analysis);
            if instances.is_empty() {
                return Ok(Outcome::SkipEmpty);
            }
            if templates.family == TemplateFamily::PositionOnly && instances.len() != 1 {
                return Ok(Outcome::SkipFamilyMismatch);
            }
            let seed = record_seed(global_seed, mask.image_id());
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let pair = render_pair(&instances, templates, &mut rng)?;
            Ok(Outcome::Record(Box::new(QaRecord {
                image_id: mask.image_id().to_owned(),
                question: pair.question,
                answer: pair.answer,
                lakes: instances,
                template_id: pair.template_id,
                family: templates.family,
                seed,
                config_echo: config.analysis,
            })))
        })
        .collect::<Result<_>>()?;

    let mut records = Vec::new();
    let mut skipped_empty = 0;
    let mut skipped_family_mismatch = 0;
    for outcome in outcomes {
        match outcome {
            Outcome::Record(r) => records.push(*r),
            Outcome::SkipEmpty => skipped_empty += 1,
            Outcome::SkipFamilyMismatch => skipped_family_mismatch += 1,
        }
    }
    records.sort_by(|a, b| a.image_id.cmp(&b.image_id));

    let mut branch_counts = BTreeMap::new();
    for record in &records {
        let branch = match record.lakes.len() {
            1 => "single",
            2 => "dual",
            _ => "multi",
        };
        *branch_counts.entry(branch.to_owned()).or_insert(0) += 1;
    }

    let split = config.split_ratio.map(|ratio| {
        let train = records
            .iter()
            .filter(|r| assign_split(&r.image_id, ratio) == Split::Train)
            .count();
        SplitSummary {
            ratio,
            train,
            test: records.len() - train,
        }
    });

    let manifest = DatasetManifest {
        family: templates.family,
        template_version: templates.version.clone(),
        template_digest: sha256_hex(templates.canonical_json().as_bytes()),
        global_seed,
        config: *config,
        masks_seen: paths.len(),
        records: records.len(),
        branch_counts,
        skipped_empty,
        skipped_family_mismatch,
        split,
    };
    Ok((records, manifest))
}

/// Serializes records as JSON lines.
pub fn records_to_jsonl(records: &[QaRecord]) -> String {
    let mut out = String::new();
    for record in records {
        out.push_str(&serde_json::to_string(record).expect("record serializes"));
        out.push('\n');
    }
    out
}

/// Writes the dataset file, its manifest sibling (`<stem>.manifest.json`),
/// and — when the manifest carries a split — `<stem>.train.jsonl` and
/// `<stem>.test.jsonl` partitions.
pub fn write_dataset(records: &[QaRecord], manifest: &DatasetManifest, out: &Path) -> Result<()> {
    write_atomic(out, records_to_jsonl(records).as_bytes())?;

    let manifest_path = sibling(out, "manifest.json");
    let mut manifest_json = serde_json::to_string_pretty(manifest).expect("manifest serializes");
    manifest_json.push('\n');
    write_atomic(&manifest_path, manifest_json.as_bytes())?;

    if let Some(split) = &manifest.split {
        let (mut train, mut test) = (Vec::new(), Vec::new());
        for record in records {
            match assign_split(&record.image_id, split.ratio) {
                Split::Train => train.push(record.clone()),
                Split::Test => test.push(record.clone()),
            }
        }
        write_atomic(&sibling(out, "train.jsonl"), records_to_jsonl(&train).as_bytes())?;
        write_atomic(&sibling(out, "test.jsonl"), records_to_jsonl(&test).as_bytes())?;
    }
    Ok(())
}

/// Reads a dataset back; any line that fails to parse is an error naming
/// the file.
pub fn read_dataset(path: &Path) -> Result<Vec<QaRecord>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|line| serde_json::from_str(line).map_err(|e| Error::Json { path: path.into(), source: e }))
        .collect()
}

fn sibling(out: &Path, suffix: &str) -> PathBuf {
    let stem = out.file_stem().and_then(|s| s.to_str()).unwrap_or("dataset");
    out.with_file_name(format!("{stem}.{suffix}"))
}

fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let mut file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    file.write_all(bytes).map_err(|e| Error::io(path, e))
}
