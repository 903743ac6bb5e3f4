//! Camera presets and view selection.
//!
//! Angles are in degrees. Azimuth is measured in the xy plane from +x towards
//! +y, elevation from the xy plane towards +z. A view's direction points from
//! the scene towards the camera.

use crate::geometry::{Cell, FaceId, Polycube, TexturedCube};
use crate::seed::{stream_rng, Stream};
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Elevation of a cube-corner direction, atan(1/√2).
pub const ISO_ELEVATION: f64 = 35.264_389_682_754_654;
pub const MAX_JITTER_DEG: f64 = 8.0;
const JITTER_REDRAWS: u32 = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViewKind {
    Isometric,
    Orthographic,
    FaceNormal,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ViewPreset {
    pub kind: ViewKind,
    pub azimuth: f64,
    pub elevation: f64,
    #[serde(default)]
    pub ortho_dir: Option<FaceId>,
    #[serde(default)]
    pub jitter: (f64, f64),
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ViewError {
    #[error("need at least two presets to choose a different one")]
    SingletonPresets,
    #[error("no {n} presets are pairwise at least {min_sep}° apart")]
    Infeasible { n: usize, min_sep: f64 },
    #[error("view is not an isometric preset")]
    NotIsometric,
}

impl ViewPreset {
    pub fn isometric(azimuth: f64, elevation: f64) -> Self {
        ViewPreset {
            kind: ViewKind::Isometric,
            azimuth,
            elevation,
            ortho_dir: None,
            jitter: (0.0, 0.0),
        }
    }

    /// Camera on the `dir` side looking back at the scene.
    pub fn orthographic(dir: FaceId) -> Self {
        let (azimuth, elevation) = match dir {
            FaceId::Top => (0.0, 90.0),
            FaceId::Bottom => (0.0, -90.0),
            FaceId::Right => (0.0, 0.0),
            FaceId::Back => (90.0, 0.0),
            FaceId::Left => (180.0, 0.0),
            FaceId::Front => (270.0, 0.0),
        };
        ViewPreset {
            kind: ViewKind::Orthographic,
            azimuth,
            elevation,
            ortho_dir: Some(dir),
            jitter: (0.0, 0.0),
        }
    }

    /// Same preset with the jitter removed.
    pub fn base(&self) -> ViewPreset {
        ViewPreset {
            jitter: (0.0, 0.0),
            ..*self
        }
    }

    pub fn same_preset(&self, other: &ViewPreset) -> bool {
        self.base() == other.base()
    }

    pub fn effective_angles(&self) -> (f64, f64) {
        (self.azimuth + self.jitter.0, self.elevation + self.jitter.1)
    }

    /// Unit vector from the scene towards the camera.
    pub fn direction(&self) -> [f64; 3] {
        if let Some(d) = self.ortho_dir {
            let n = d.normal();
            return [f64::from(n.x), f64::from(n.y), f64::from(n.z)];
        }
        let (az, el) = self.effective_angles();
        let (az, el) = (az.to_radians(), el.to_radians());
        [el.cos() * az.cos(), el.cos() * az.sin(), el.sin()]
    }

    /// Direction used for exact lattice ray casting: the unnormalized corner
    /// vector for an unjittered corner preset, the unit direction otherwise.
    pub fn ray_direction(&self) -> [f64; 3] {
        let d = self.direction();
        if self.kind == ViewKind::Isometric && self.jitter == (0.0, 0.0) && self.is_corner() {
            return d.map(|c| c.signum());
        }
        d
    }

    fn is_corner(&self) -> bool {
        let az = self.azimuth.rem_euclid(360.0);
        [45.0, 135.0, 225.0, 315.0].iter().any(|a| (az - a).abs() < 1e-9)
            && (self.elevation.abs() - ISO_ELEVATION).abs() < 1e-9
    }

    /// Screen basis `(right, up)`. Axis views use the frame of the face the
    /// camera looks at, so `top` has +x right and +y up.
    pub fn basis(&self) -> ([f64; 3], [f64; 3]) {
        if let Some(d) = self.ortho_dir {
            let (u, v) = d.frame();
            let f = |c: Cell| [f64::from(c.x), f64::from(c.y), f64::from(c.z)];
            return (f(u), f(v));
        }
        let d = self.direction();
        // right = z × d, up = d × right
        let right = normalize([-d[1], d[0], 0.0]);
        let up = cross(d, right);
        (right, up)
    }

    /// Cube faces turned towards the camera.
    pub fn facing(&self) -> Vec<FaceId> {
        let d = self.direction();
        FaceId::ALL
            .into_iter()
            .filter(|f| {
                let n = f.normal();
                f64::from(n.x) * d[0] + f64::from(n.y) * d[1] + f64::from(n.z) * d[2] > 1e-9
            })
            .collect()
    }
}

fn normalize(v: [f64; 3]) -> [f64; 3] {
    let len = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    v.map(|c| c / len)
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// The eight cube-corner presets: upper ring first, azimuth ascending.
pub fn iso_presets() -> Vec<ViewPreset> {
    let mut out = Vec::with_capacity(8);
    for el in [ISO_ELEVATION, -ISO_ELEVATION] {
        for az in [45.0, 135.0, 225.0, 315.0] {
            out.push(ViewPreset::isometric(az, el));
        }
    }
    out
}

pub fn ortho_views() -> Vec<ViewPreset> {
    [
        FaceId::Top,
        FaceId::Front,
        FaceId::Right,
        FaceId::Left,
        FaceId::Bottom,
        FaceId::Back,
    ]
    .into_iter()
    .map(ViewPreset::orthographic)
    .collect()
}

/// Faces of a cube whose outward normals point towards the camera.
pub fn visible_faces(_cube: &TexturedCube, v: &ViewPreset) -> Vec<FaceId> {
    v.facing()
}

/// True when the segment from `origin` along `dir` (t > 0) passes through the
/// open interior of unit cell `c`.
fn ray_hits_cell(origin: [f64; 3], dir: [f64; 3], c: Cell) -> bool {
    let lo = [f64::from(c.x), f64::from(c.y), f64::from(c.z)];
    let mut t_enter = 0.0_f64;
    let mut t_exit = f64::INFINITY;
    for i in 0..3 {
        if dir[i] == 0.0 {
            if origin[i] <= lo[i] || origin[i] >= lo[i] + 1.0 {
                return false;
            }
        } else {
            let a = (lo[i] - origin[i]) / dir[i];
            let b = (lo[i] + 1.0 - origin[i]) / dir[i];
            t_enter = t_enter.max(a.min(b));
            t_exit = t_exit.min(a.max(b));
        }
    }
    t_enter < t_exit && t_exit > 0.0
}

/// Sample points on a face in its `(u, v)` frame. The grid is nudged off the
/// diagonals so that no sample sits on a crack between two cells sharing an
/// edge, where a corner view would see through a zero-width gap.
pub(crate) fn face_samples() -> impl Iterator<Item = (f64, f64)> {
    const N: usize = 5;
    (0..N * N).map(|k| {
        let (i, j) = ((k % N) as f64, (k / N) as f64);
        ((i + 0.5) / N as f64 + 0.013, (j + 0.5) / N as f64 - 0.007)
    })
}

/// Sample points of face `f` of cell `c` that see the camera unobstructed.
pub(crate) fn visible_samples(p: &Polycube, v: &ViewPreset, c: Cell, f: FaceId) -> Vec<[f64; 3]> {
    let dir = v.ray_direction();
    let (n, u, w) = (f.normal().to_array(), f.frame().0.to_array(), f.frame().1.to_array());
    let cc = c.center();
    face_samples()
        .map(|(a, b)| {
            [0, 1, 2].map(|i| cc[i] + 0.5 * f64::from(n[i]) + (a - 0.5) * f64::from(u[i]) + (b - 0.5) * f64::from(w[i]))
        })
        .filter(|&origin| !p.cells().iter().any(|&o| o != c && ray_hits_cell(origin, dir, o)))
        .collect()
}

/// Exposed faces of `p` with some sample point in unobstructed line of sight
/// of the camera.
pub fn unoccluded_faces(p: &Polycube, v: &ViewPreset) -> Vec<(Cell, FaceId)> {
    let facing = v.facing();
    let mut out = Vec::new();
    for &c in p.cells() {
        for &f in &facing {
            if !p.contains(c + f.normal()) && !visible_samples(p, v, c, f).is_empty() {
                out.push((c, f));
            }
        }
    }
    out
}

/// Number of cells showing at least one unoccluded face.
pub fn visible_cell_count(p: &Polycube, v: &ViewPreset) -> usize {
    let mut cells: Vec<Cell> = unoccluded_faces(p, v).into_iter().map(|(c, _)| c).collect();
    cells.dedup();
    cells.len()
}

/// Preset showing the most cells; ties go to the lowest index.
pub fn find_best_view(p: &Polycube, presets: &[ViewPreset]) -> ViewPreset {
    let mut best = presets[0];
    let mut best_score = visible_cell_count(p, &best);
    for v in &presets[1..] {
        let s = visible_cell_count(p, v);
        if s > best_score {
            best = *v;
            best_score = s;
        }
    }
    best
}

/// Uniform choice among presets other than `exclude`.
pub fn choose_different_view(presets: &[ViewPreset], exclude: &ViewPreset, seed: u64) -> Result<ViewPreset, ViewError> {
    let pool: Vec<&ViewPreset> = presets.iter().filter(|v| !v.same_preset(exclude)).collect();
    if presets.len() < 2 || pool.is_empty() {
        return Err(ViewError::SingletonPresets);
    }
    let mut rng = stream_rng(seed, Stream::Views);
    Ok(*pool[rng.gen_range(0..pool.len())])
}

pub fn opposite_view(v: &ViewPreset) -> ViewPreset {
    match v.ortho_dir {
        Some(d) => ViewPreset {
            kind: v.kind,
            ortho_dir: Some(d.opposite()),
            ..ViewPreset::orthographic(d.opposite())
        },
        None => ViewPreset {
            azimuth: (v.azimuth + 180.0).rem_euclid(360.0),
            elevation: -v.elevation,
            ..*v
        },
    }
}

/// Adds a uniform ±8° jitter to azimuth and elevation, redrawn whenever it
/// would change which cube faces are visible.
pub fn apply_jitter(v: &ViewPreset, seed: u64) -> ViewPreset {
    if v.kind != ViewKind::Isometric {
        return *v;
    }
    let base = v.base();
    let faces = base.facing();
    let mut rng = stream_rng(seed, Stream::Jitter);
    for _ in 0..JITTER_REDRAWS {
        let j = (
            rng.gen_range(-MAX_JITTER_DEG..=MAX_JITTER_DEG),
            rng.gen_range(-MAX_JITTER_DEG..=MAX_JITTER_DEG),
        );
        let candidate = ViewPreset { jitter: j, ..base };
        if candidate.facing() == faces {
            return candidate;
        }
    }
    base
}

/// Angle in degrees between two view directions.
pub fn separation_deg(a: &ViewPreset, b: &ViewPreset) -> f64 {
    dot(a.direction(), b.direction()).clamp(-1.0, 1.0).acos().to_degrees()
}

/// `n` isometric presets pairwise at least `min_sep` degrees apart (angle
/// between direction vectors). The subset is drawn uniformly from all
/// feasible ones and returned in random order.
pub fn choose_distinct_views(
    _cube: &TexturedCube,
    n: usize,
    min_sep: f64,
    seed: u64,
) -> Result<Vec<ViewPreset>, ViewError> {
    let presets = iso_presets();
    let feasible: Vec<Vec<usize>> = subsets(presets.len(), n)
        .into_iter()
        .filter(|s| {
            s.iter().enumerate().all(|(i, &a)| {
                s[i + 1..]
                    .iter()
                    .all(|&b| separation_deg(&presets[a], &presets[b]) >= min_sep - 1e-9)
            })
        })
        .collect();
    if n == 0 || feasible.is_empty() {
        return Err(ViewError::Infeasible { n, min_sep });
    }
    let mut rng = stream_rng(seed, Stream::Views);
    let mut chosen = feasible[rng.gen_range(0..feasible.len())].clone();
    rand::seq::SliceRandom::shuffle(chosen.as_mut_slice(), &mut rng);
    Ok(chosen.into_iter().map(|i| presets[i]).collect())
}

fn subsets(len: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, len: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..len {
            cur.push(i);
            rec(i + 1, len, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, len, k, &mut Vec::new(), &mut out);
    out
}

/// Orthographic view straight at face `f`; the face appears in its own frame.
pub fn face_normal_view(f: FaceId) -> ViewPreset {
    ViewPreset {
        kind: ViewKind::FaceNormal,
        ..ViewPreset::orthographic(f)
    }
}
