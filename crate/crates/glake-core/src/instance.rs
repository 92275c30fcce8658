//! Per-lake instance extraction: connected components, bounding boxes,
//! center points, and positional labels.
//!
//! The position of a lake is described by the quadrant its center falls in
//! (the image is split at the midlines) plus a near/far flag: near when the
//! Euclidean distance from the center point to the image center is within
//! `near_fraction * min(width, height)`. A center exactly on the image
//! center gets the dedicated `center` quadrant.

use serde::{Deserialize, Serialize};

use crate::num::{from_count, Real};
use crate::raster::BinaryMask;
use crate::Scalar;

/// Tight axis-aligned box around one component, `{x, y, w, h}` in pixels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundingBox {
    pub x: u32,
    pub y: u32,
    pub w: u32,
    pub h: u32,
}

impl BoundingBox {
    /// Box center `(x + w/2, y + h/2)`; exact in double precision for any
    /// pixel-range input.
    pub fn center(&self) -> CenterPoint {
        CenterPoint {
            cx: Scalar::from(self.x) + Scalar::from(self.w) / 2.0,
            cy: Scalar::from(self.y) + Scalar::from(self.h) / 2.0,
        }
    }
}

/// Fractional pixel coordinates of an instance center.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CenterPoint<F = Scalar> {
    pub cx: F,
    pub cy: F,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quadrant {
    TopLeft,
    TopRight,
    BottomLeft,
    BottomRight,
    Center,
}

impl Quadrant {
    /// The phrase used in rendered text: "top left", ..., "center".
    pub fn phrase(&self) -> &'static str {
        match self {
            Quadrant::TopLeft => "top left",
            Quadrant::TopRight => "top right",
            Quadrant::BottomLeft => "bottom left",
            Quadrant::BottomRight => "bottom right",
            Quadrant::Center => "center",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Proximity {
    Near,
    Far,
}

/// Quadrant plus center proximity. Invariant: `quadrant == Center` implies
/// `proximity == Near` (the center is at distance zero by definition).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PositionLabel {
    pub quadrant: Quadrant,
    pub proximity: Proximity,
}

/// Pixel-adjacency rule for component labeling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Connectivity {
    Four,
    Eight,
}

/// Which center point definition to use for positional labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CenterMode {
    /// Bounding-box center `(x + w/2, y + h/2)`. Default.
    Bbox,
    /// Mean of member pixel centers (pixel (x, y) counts as (x+0.5, y+0.5)).
    Mass,
}

/// Knobs for instance extraction; echoed verbatim into every generated
/// record so outputs are self-describing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalysisConfig {
    pub connectivity: Connectivity,
    pub near_fraction: Scalar,
    pub center_mode: CenterMode,
    pub min_area: u64,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self {
            connectivity: Connectivity::Eight,
            near_fraction: 0.25,
            center_mode: CenterMode::Bbox,
            min_area: 1,
        }
    }
}

/// One detected lake. Ordinals run 1..N in raster-scan order of each
/// component's first-encountered pixel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LakeInstance {
    pub ordinal: u32,
    pub bbox: BoundingBox,
    pub center: CenterPoint,
    #[serde(flatten)]
    pub position: PositionLabel,
    pub area: u64,
}

/// Extracts one [`LakeInstance`] per connected foreground component with
/// area >= `config.min_area`, ordered by the raster-scan position of each
/// component's first pixel. Returns an empty list for all-background masks.
pub fn label_components(mask: &BinaryMask, config: &AnalysisConfig) -> Vec<LakeInstance> {
    let mut instances = Vec::new();
    let mut ordinal = 0u32;
    for component in find_components(mask, config.connectivity) {
        if component.area < config.min_area {
            continue;
        }
        ordinal += 1;
        let bbox = component.bbox();
        let center = match config.center_mode {
            CenterMode::Bbox => bbox.center(),
            CenterMode::Mass => component.mass_center(),
        };
        let position = assign_position(
            center.cx,
            center.cy,
            Scalar::from(mask.width()),
            Scalar::from(mask.height()),
            config.near_fraction,
        );
        instances.push(LakeInstance {
            ordinal,
            bbox,
            center,
            position,
            area: component.area,
        });
    }
    instances
}

/// Assigns the quadrant/proximity label for a center point in a
/// `width` x `height` image.
///
/// Quadrants split at the midlines with ties going right/bottom; the exact
/// image center gets the `center` quadrant. Proximity is near when the
/// distance to the image center is within `near_fraction * min(width,
/// height)`. The label is invariant under uniform scaling of all arguments.
pub fn assign_position<F: Real>(cx: F, cy: F, width: F, height: F, near_fraction: F) -> PositionLabel {
    let two = F::from_u8(2).unwrap();
    let mx = width / two;
    let my = height / two;
    let dx = cx - mx;
    let dy = cy - my;
    if dx == F::zero() && dy == F::zero() {
        return PositionLabel {
            quadrant: Quadrant::Center,
            proximity: Proximity::Near,
        };
    }
    let quadrant = match (cx < mx, cy < my) {
        (true, true) => Quadrant::TopLeft,
        (false, true) => Quadrant::TopRight,
        (true, false) => Quadrant::BottomLeft,
        (false, false) => Quadrant::BottomRight,
    };
    let distance = (dx * dx + dy * dy).sqrt();
    let threshold = near_fraction * width.min(height);
    let proximity = if distance <= threshold {
        Proximity::Near
    } else {
        Proximity::Far
    };
    PositionLabel { quadrant, proximity }
}

/// Renders a label the way answers phrase it: "bottom right, near the
/// center", "top left, far from the center", or plain "center".
pub fn describe_position(label: &PositionLabel) -> String {
    match label.quadrant {
        Quadrant::Center => "center".to_owned(),
        quadrant => {
            let proximity = match label.proximity {
                Proximity::Near => "near the center",
                Proximity::Far => "far from the center",
            };
            format!("{}, {}", quadrant.phrase(), proximity)
        }
    }
}

struct Component {
    min_x: u32,
    min_y: u32,
    max_x: u32,
    max_y: u32,
    area: u64,
    sum_x: u64,
    sum_y: u64,
}

impl Component {
    fn bbox(&self) -> BoundingBox {
        BoundingBox {
            x: self.min_x,
            y: self.min_y,
            w: self.max_x - self.min_x + 1,
            h: self.max_y - self.min_y + 1,
        }
    }

    fn mass_center(&self) -> CenterPoint {
        let n = self.area as Scalar;
        CenterPoint {
            cx: self.sum_x as Scalar / n + 0.5,
            cy: self.sum_y as Scalar / n + 0.5,
        }
    }
}

/// Breadth-first flood fill over foreground pixels, scanning in raster
/// order so component order matches first-pixel order.
fn find_components(mask: &BinaryMask, connectivity: Connectivity) -> Vec<Component> {
    let (w, h) = (mask.width() as i64, mask.height() as i64);
    let mut visited = vec![false; (w * h) as usize];
    let mut components = Vec::new();
    let mut queue = std::collections::VecDeque::new();

    let offsets: &[(i64, i64)] = match connectivity {
        Connectivity::Four => &[(1, 0), (-1, 0), (0, 1), (0, -1)],
        Connectivity::Eight => &[
            (1, 0),
            (-1, 0),
            (0, 1),
            (0, -1),
            (1, 1),
            (1, -1),
            (-1, 1),
            (-1, -1),
        ],
    };

    for y in 0..h {
        for x in 0..w {
            let idx = (y * w + x) as usize;
            if visited[idx] || !mask.get(x as u32, y as u32) {
                continue;
            }
            visited[idx] = true;
            let mut comp = Component {
                min_x: x as u32,
                min_y: y as u32,
                max_x: x as u32,
                max_y: y as u32,
                area: 0,
                sum_x: 0,
                sum_y: 0,
            };
            queue.push_back((x, y));
            while let Some((px, py)) = queue.pop_front() {
                comp.area += 1;
                comp.sum_x += px as u64;
                comp.sum_y += py as u64;
                comp.min_x = comp.min_x.min(px as u32);
                comp.min_y = comp.min_y.min(py as u32);
                comp.max_x = comp.max_x.max(px as u32);
                comp.max_y = comp.max_y.max(py as u32);
                for (dx, dy) in offsets {
                    let (nx, ny) = (px + dx, py + dy);
                    if nx < 0 || ny < 0 || nx >= w || ny >= h {
                        continue;
                    }
                    let nidx = (ny * w + nx) as usize;
                    if !visited[nidx] && mask.get(nx as u32, ny as u32) {
                        visited[nidx] = true;
                        queue.push_back((nx, ny));
                    }
                }
            }
            components.push(comp);
        }
    }
    components
}
