//! Seeded synthetic mask corpora with known instance layouts.
//!
//! Blobs are placed by rejection sampling with a one-pixel margin, so they
//! are pairwise non-adjacent even under eight-connectivity and the planted
//! instance count is exactly what component labeling must recover.

use std::collections::VecDeque;
use std::ops::RangeInclusive;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::BoundingBox;
use crate::raster::{save_mask, BinaryMask};
use crate::seed::record_seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MaskFormat {
    Png,
    Pgm,
}

impl MaskFormat {
    pub fn extension(&self) -> &'static str {
        match self {
            MaskFormat::Png => "png",
            MaskFormat::Pgm => "pgm",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusSpec {
    pub count: usize,
    pub width: u32,
    pub height: u32,
    /// Lakes per image, sampled uniformly from this range.
    pub lakes: RangeInclusive<u32>,
    /// Blob side length range in pixels.
    pub blob: RangeInclusive<u32>,
    pub seed: u64,
    /// Grow random polyominoes instead of rectangles, so bounding-box and
    /// pixel-mass centers diverge.
    pub irregular: bool,
    pub format: MaskFormat,
}

impl CorpusSpec {
    pub fn image_id(&self, index: usize) -> String {
        format!("synth_{index:05}")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlantedInstance {
    pub bbox: BoundingBox,
    pub area: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlantedImage {
    pub image_id: String,
    pub instances: Vec<PlantedInstance>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusManifest {
    pub spec: CorpusSpec,
    pub images: Vec<PlantedImage>,
}

const ATTEMPTS_PER_BLOB: u32 = 1000;

/// Builds one mask in memory together with its planted instances (in
/// raster-scan order of first pixel, matching component labeling).
pub fn build_mask(spec: &CorpusSpec, index: usize) -> Result<(BinaryMask, Vec<PlantedInstance>)> {
    let image_id = spec.image_id(index);
    let mut rng = ChaCha8Rng::seed_from_u64(record_seed(spec.seed, &image_id));
    let (w, h) = (spec.width, spec.height);
    let mut grid = vec![0u8; w as usize * h as usize];
    let lake_count = rng.gen_range(spec.lakes.clone());

    let mut planted = Vec::with_capacity(lake_count as usize);
    for _ in 0..lake_count {
        let mut placed = false;
        for _ in 0..ATTEMPTS_PER_BLOB {
            let bw = rng.gen_range(spec.blob.clone()).min(w);
            let bh = rng.gen_range(spec.blob.clone()).min(h);
            let x = rng.gen_range(0..=w - bw);
            let y = rng.gen_range(0..=h - bh);
            if !region_is_clear(&grid, w, h, x, y, bw, bh) {
                continue;
            }
            let cells = if spec.irregular {
                grow_polyomino(&mut rng, x, y, bw, bh)
            } else {
                (y..y + bh)
                    .flat_map(|py| (x..x + bw).map(move |px| (px, py)))
                    .collect()
            };
            let (mut min_x, mut min_y, mut max_x, mut max_y) = (u32::MAX, u32::MAX, 0, 0);
            for &(px, py) in &cells {
                grid[py as usize * w as usize + px as usize] = 1;
                min_x = min_x.min(px);
                min_y = min_y.min(py);
                max_x = max_x.max(px);
                max_y = max_y.max(py);
            }
            planted.push(PlantedInstance {
                bbox: BoundingBox {
                    x: min_x,
                    y: min_y,
                    w: max_x - min_x + 1,
                    h: max_y - min_y + 1,
                },
                area: cells.len() as u64,
            });
            placed = true;
            break;
        }
        if !placed {
            return Err(Error::InfeasibleSpec(format!(
                "could not place blob {} of {lake_count} in {image_id} after {ATTEMPTS_PER_BLOB} attempts",
                planted.len() + 1
            )));
        }
    }

    // Raster-scan order of each blob's first pixel, so planted order equals
    // labeling order.
    planted.sort_by_key(|inst| (inst.bbox.y, inst.bbox.x));
    let mask = BinaryMask::new(w, h, grid, image_id)?;
    Ok((mask, planted))
}

/// Expanded-by-one-pixel occupancy check; keeping a clear margin guarantees
/// blob separation under eight-connectivity.
fn region_is_clear(grid: &[u8], w: u32, h: u32, x: u32, y: u32, bw: u32, bh: u32) -> bool {
    let x0 = x.saturating_sub(1);
    let y0 = y.saturating_sub(1);
    let x1 = (x + bw + 1).min(w);
    let y1 = (y + bh + 1).min(h);
    for py in y0..y1 {
        for px in x0..x1 {
            if grid[py as usize * w as usize + px as usize] == 1 {
                return false;
            }
        }
    }
    true
}

/// Random connected blob inside the `bw x bh` box anchored at (x, y): a
/// BFS-order growth over 4-neighbors to roughly half the box area.
fn grow_polyomino(rng: &mut ChaCha8Rng, x: u32, y: u32, bw: u32, bh: u32) -> Vec<(u32, u32)> {
    let target = ((bw as usize * bh as usize) / 2).max(1);
    let inside = |px: i64, py: i64| {
        px >= x as i64 && px < (x + bw) as i64 && py >= y as i64 && py < (y + bh) as i64
    };
    let start = (
        rng.gen_range(x..x + bw) as i64,
        rng.gen_range(y..y + bh) as i64,
    );
    let mut cells = std::collections::BTreeSet::new();
    cells.insert(start);
    let mut frontier = VecDeque::from([start]);
    while cells.len() < target {
        let Some(&(cx, cy)) = frontier.front() else {
            break;
        };
        let mut neighbors: Vec<(i64, i64)> = [(1, 0), (-1, 0), (0, 1), (0, -1)]
            .iter()
            .map(|(dx, dy)| (cx + dx, cy + dy))
            .filter(|&(nx, ny)| inside(nx, ny) && !cells.contains(&(nx, ny)))
            .collect();
        if neighbors.is_empty() {
            frontier.pop_front();
            continue;
        }
        let pick = neighbors.swap_remove(rng.gen_range(0..neighbors.len()));
        cells.insert(pick);
        frontier.push_back(pick);
    }
    cells.into_iter().map(|(px, py)| (px as u32, py as u32)).collect()
}

/// Writes `spec.count` masks plus a `manifest.json` into `out`, returning
/// the manifest. Deterministic for a given spec.
pub fn generate_corpus(spec: &CorpusSpec, out: &Path) -> Result<CorpusManifest> {
    std::fs::create_dir_all(out).map_err(|e| Error::io(out, e))?;
    let images: Vec<PlantedImage> = (0..spec.count)
        .into_par_iter()
        .map(|index| -> Result<PlantedImage> {
            let (mask, instances) = build_mask(spec, index)?;
            let path = out.join(format!("{}.{}", mask.image_id(), spec.format.extension()));
            save_mask(&mask, &path)?;
            Ok(PlantedImage {
                image_id: mask.image_id().to_owned(),
                instances,
            })
        })
        .collect::<Result<_>>()?;
    let manifest = CorpusManifest {
        spec: spec.clone(),
        images,
    };
    let path = out.join("manifest.json");
    let mut json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
    json.push('\n');
    std::fs::write(&path, json).map_err(|e| Error::io(&path, e))?;
    Ok(manifest)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{label_components, AnalysisConfig};

    fn base_spec() -> CorpusSpec {
        CorpusSpec {
            count: 4,
            width: 64,
            height: 64,
            lakes: 1..=1,
            blob: 8..=8,
            seed: 7,
            irregular: false,
            format: MaskFormat::Pgm,
        }
    }

    #[test]
    fn single_planted_blob_is_recovered() {
        let (mask, planted) = build_mask(&base_spec(), 0).unwrap();
        let found = label_components(&mask, &AnalysisConfig::default());
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].bbox, planted[0].bbox);
        assert_eq!(found[0].area, planted[0].area);
        assert_eq!(planted[0].area, 64);
    }

    #[test]
    fn three_lakes_yield_three_components() {
        let spec = CorpusSpec {
            lakes: 3..=3,
            blob: 4..=9,
            ..base_spec()
        };
        for index in 0..6 {
            let (mask, planted) = build_mask(&spec, index).unwrap();
            let found = label_components(&mask, &AnalysisConfig::default());
            assert_eq!(found.len(), 3, "image {index}");
            for (f, p) in found.iter().zip(&planted) {
                assert_eq!(f.bbox, p.bbox, "image {index}");
                assert_eq!(f.area, p.area, "image {index}");
            }
        }
    }

    #[test]
    fn irregular_blobs_stay_connected_and_separate() {
        let spec = CorpusSpec {
            lakes: 2..=4,
            blob: 5..=10,
            irregular: true,
            ..base_spec()
        };
        for index in 0..6 {
            let (mask, planted) = build_mask(&spec, index).unwrap();
            let found = label_components(&mask, &AnalysisConfig::default());
            assert_eq!(found.len(), planted.len(), "image {index}");
            for (f, p) in found.iter().zip(&planted) {
                assert_eq!(f.bbox, p.bbox, "image {index}");
                assert_eq!(f.area, p.area, "image {index}");
            }
        }
    }

    #[test]
    fn same_spec_writes_identical_files() {
        let spec = CorpusSpec {
            count: 3,
            lakes: 1..=3,
            blob: 3..=6,
            ..base_spec()
        };
        let dir_a = tempfile::tempdir().unwrap();
        let dir_b = tempfile::tempdir().unwrap();
        let manifest_a = generate_corpus(&spec, dir_a.path()).unwrap();
        let manifest_b = generate_corpus(&spec, dir_b.path()).unwrap();
        assert_eq!(manifest_a, manifest_b);
        for image in &manifest_a.images {
            let name = format!("{}.pgm", image.image_id);
            let a = std::fs::read(dir_a.path().join(&name)).unwrap();
            let b = std::fs::read(dir_b.path().join(&name)).unwrap();
            assert_eq!(a, b, "{name}");
        }
    }

    #[test]
    fn infeasible_spec_errors_out() {
        let spec = CorpusSpec {
            count: 1,
            width: 16,
            height: 16,
            lakes: 30..=30,
            blob: 4..=4,
            seed: 1,
            irregular: false,
            format: MaskFormat::Pgm,
        };
        assert!(build_mask(&spec, 0).is_err());
    }
}
