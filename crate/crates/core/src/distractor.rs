//! Near-miss options: edited shapes and components, tampered cubes and
//! wrong silhouettes.

use crate::geometry::{FaceId, GeometryError, Polycube, TexturedCube};
use crate::render::{project_ortho, Silhouette};
use crate::seed::{stream_rng, Stream};
use crate::view::ViewPreset;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const MAX_SHAPE_RETRIES: u32 = 32;
pub const MAX_CUBE_RETRIES: u32 = 32;
pub const MAX_PROJECTION_RETRIES: u32 = 8;
const MAX_BRANCH_DRAWS: u32 = 16;
/// Probability of the edited-shape branch for projection distractors.
pub const SHAPE_BRANCH_P: f64 = 0.7;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DistractorError {
    #[error("shape has {0} cells; distractors need at least {1}")]
    TooSmall(usize, usize),
    #[error("difficulty {0} is outside (0, 1]")]
    BadDifficulty(f64),
    #[error("no valid variant after {0} attempts")]
    Exhausted(u32),
    #[error("cube needs at least two distinct textures")]
    Uniform,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Distractor difficulty in (0, 1]; higher is harder.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Difficulty(f64);

impl Difficulty {
    pub fn new(value: f64) -> Result<Self, DistractorError> {
        if value > 0.0 && value <= 1.0 {
            Ok(Difficulty(value))
        } else {
            Err(DistractorError::BadDifficulty(value))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Schedule for shape-edit distractors: `i / n`, `i` from 1.
    pub fn linear(i: usize, n: usize) -> Self {
        Difficulty(i as f64 / n as f64)
    }

    /// Schedule for projection distractors: `0.3 + 0.7 · i / n`.
    pub fn projection(i: usize, n: usize) -> Self {
        Difficulty(0.3 + 0.7 * i as f64 / n as f64)
    }

    /// Number of edits: `max(1, round((1 − d) · 3))`.
    pub fn edit_count(self) -> usize {
        (((1.0 - self.0) * 3.0).round() as usize).max(1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tier {
    Easy,
    Medium,
    Hard,
}

impl Tier {
    /// Thirds of `1..=n`: the first third easy, the middle medium, the last hard.
    pub fn select(i: usize, n: usize) -> Tier {
        assert!(i >= 1 && i <= n, "tier index {i} outside 1..={n}");
        match 3 * (i - 1) / n {
            0 => Tier::Easy,
            1 => Tier::Medium,
            _ => Tier::Hard,
        }
    }
}

/// Independent 64-bit seed for a sub-task, drawn from `stream` of `seed`.
pub fn sub_seed(seed: u64, stream: Stream) -> u64 {
    stream_rng(seed, stream).gen()
}

fn attempt_rng(seed: u64, attempt: u32) -> ChaCha8Rng {
    stream_rng(seed, Stream::Retry(attempt))
}

/// One growth step redone: drop a cell whose removal keeps the shape
/// connected, then grow into a different empty neighbour.
fn move_one_cell<R: Rng>(p: &Polycube, rng: &mut R) -> Option<Polycube> {
    let removable = p.removable_cells();
    let gone = *removable.choose(rng)?;
    let rest = p.without(gone).ok()?;
    let frontier: Vec<_> = rest.frontier().into_iter().filter(|&c| c != gone).collect();
    let added = *frontier.choose(rng)?;
    rest.with(added).ok()
}

/// Shape variant that diverges from `orig`'s growth in `d.edit_count()`
/// steps. Keeps the cell count and never matches `orig` under rotation.
pub fn distractor_shape(orig: &Polycube, d: Difficulty, seed: u64) -> Result<Polycube, DistractorError> {
    if orig.len() < 2 {
        return Err(DistractorError::TooSmall(orig.len(), 2));
    }
    let key = orig.canonical_key();
    for attempt in 0..MAX_SHAPE_RETRIES {
        let mut rng = attempt_rng(seed, attempt);
        let mut cur = orig.clone();
        let mut ok = true;
        for _ in 0..d.edit_count() {
            match move_one_cell(&cur, &mut rng) {
                Some(next) => cur = next,
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok && cur.canonical_key() != key {
            return Ok(cur);
        }
    }
    Err(DistractorError::Exhausted(MAX_SHAPE_RETRIES))
}

/// Component variant with `round(1 + 2v)` cells added or removed.
pub fn distractor_component(comp: &Polycube, variation: f64, seed: u64) -> Result<Polycube, DistractorError> {
    let m = (1.0 + 2.0 * variation.clamp(0.0, 1.0)).round() as usize;
    for attempt in 0..MAX_SHAPE_RETRIES {
        let mut rng = attempt_rng(seed, attempt);
        let remove = comp.len() > m && rng.gen_bool(0.5);
        let mut cur = comp.clone();
        let mut ok = true;
        for _ in 0..m {
            let next = if remove {
                cur.removable_cells()
                    .choose(&mut rng)
                    .and_then(|&c| cur.without(c).ok())
            } else {
                cur.frontier().choose(&mut rng).and_then(|&c| cur.with(c).ok())
            };
            match next {
                Some(n) => cur = n,
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok && !cur.is_rotation_of(comp) {
            return Ok(cur);
        }
    }
    Err(DistractorError::Exhausted(MAX_SHAPE_RETRIES))
}

/// True when some whole-cube turn of `c` shows exactly the same faces as
/// `other` on the sides facing the camera of `view`.
pub fn visibly_matches_some_turn(c: &TexturedCube, other: &TexturedCube, view: &ViewPreset) -> bool {
    let facing = view.facing();
    c.all_reorientations()
        .iter()
        .any(|r| facing.iter().all(|&f| r.face(f).looks_like(&other.face(f))))
}

/// Tampered copy of `c`, edited only on faces visible from `view`:
/// easy swaps two faces and turns one, medium swaps two faces and may mirror
/// one of them, hard turns a single face. Rejected while any whole-cube turn
/// of `c` looks the same from `view`.
pub fn cube_distractor(c: &TexturedCube, tier: Tier, seed: u64, view: &ViewPreset) -> Result<TexturedCube, DistractorError> {
    if c.distinct_textures() < 2 {
        return Err(DistractorError::Uniform);
    }
    let visible = view.facing();
    for attempt in 0..MAX_CUBE_RETRIES {
        let mut rng = attempt_rng(seed, attempt);
        let mut out = *c;
        let pair: Vec<FaceId> = visible.choose_multiple(&mut rng, 2).copied().collect();
        let swap = |out: &mut TexturedCube| {
            let (a, b) = (out.face(pair[0]), out.face(pair[1]));
            out.set_face(pair[0], b);
            out.set_face(pair[1], a);
        };
        match tier {
            Tier::Easy => {
                swap(&mut out);
                let f = *visible.choose(&mut rng).expect("a view faces some side");
                out.set_face(f, out.face(f).rotated(rng.gen_range(1..4)));
            }
            Tier::Medium => {
                swap(&mut out);
                if rng.gen_bool(0.5) {
                    let f = pair[rng.gen_range(0..2)];
                    let mut t = out.face(f);
                    t.mirrored = !t.mirrored;
                    out.set_face(f, t);
                }
            }
            Tier::Hard => {
                let f = *visible.choose(&mut rng).expect("a view faces some side");
                out.set_face(f, out.face(f).rotated(rng.gen_range(1..4)));
            }
        }
        if !visibly_matches_some_turn(c, &out, view) {
            return Ok(out);
        }
    }
    Err(DistractorError::Exhausted(MAX_CUBE_RETRIES))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "branch", rename_all = "snake_case")]
pub enum Provenance {
    EditedShape { edits: usize },
    WrongView { dir: FaceId },
}

/// Wrong silhouette for `shape` seen from `target`: with probability 0.7 an
/// edited shape from the right side, otherwise the true shape from another
/// side. The result always differs from the true silhouette.
pub fn projection_distractor(
    shape: &Polycube,
    target: FaceId,
    d: Difficulty,
    seed: u64,
) -> Result<(Silhouette, Provenance), DistractorError> {
    let truth = project_ortho(shape, target);
    let mut branch_rng = stream_rng(seed, Stream::Layout);
    for draw in 0..MAX_BRANCH_DRAWS {
        let edit = branch_rng.gen::<f64>() < SHAPE_BRANCH_P;
        for attempt in 0..MAX_PROJECTION_RETRIES {
            let sub = sub_seed(seed, Stream::Distractor(draw * MAX_PROJECTION_RETRIES + attempt));
            if edit {
                let Ok(variant) = distractor_shape(shape, d, sub) else { continue };
                let s = project_ortho(&variant, target);
                if s != truth {
                    return Ok((s, Provenance::EditedShape { edits: d.edit_count() }));
                }
            } else {
                let others: Vec<FaceId> = FaceId::ALL.into_iter().filter(|&f| f != target).collect();
                let dir = others[stream_rng(sub, Stream::Views).gen_range(0..others.len())];
                let s = project_ortho(shape, dir);
                if s != truth {
                    return Ok((s, Provenance::WrongView { dir }));
                }
            }
        }
    }
    Err(DistractorError::Exhausted(MAX_BRANCH_DRAWS * MAX_PROJECTION_RETRIES))
}

/// Face to hide. Easy prefers faces shown in both earlier views, hard faces
/// shown in neither, each falling back to the next group; medium is uniform.
pub fn sample_face(visible: &[FaceId], strategy: Tier, seed: u64, history: (&[FaceId], &[FaceId])) -> FaceId {
    assert!(!visible.is_empty(), "no visible face to sample");
    let mut rng = stream_rng(seed, Stream::Layout);
    let seen = |f: &FaceId| usize::from(history.0.contains(f)) + usize::from(history.1.contains(f));
    let order: &[usize] = match strategy {
        Tier::Easy => &[2, 1, 0],
        Tier::Hard => &[0, 1, 2],
        Tier::Medium => return *visible.choose(&mut rng).expect("non-empty"),
    };
    for &times in order {
        let group: Vec<FaceId> = visible.iter().copied().filter(|f| seen(f) == times).collect();
        if let Some(&f) = group.choose(&mut rng) {
            return f;
        }
    }
    unreachable!("every face is seen 0, 1 or 2 times")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{all_orientations, create_combination_shape, create_cube_with_textures, Cell};
    use crate::view::iso_presets;
    use std::collections::BTreeSet;

    #[test]
    fn edit_count_schedule() {
        assert_eq!(Difficulty::new(1.0).unwrap().edit_count(), 1);
        assert_eq!(Difficulty::linear(1, 3).edit_count(), 2);
        assert_eq!(Difficulty::new(0.01).unwrap().edit_count(), 3);
        assert!(Difficulty::new(0.0).is_err());
        let mut last = usize::MAX;
        for i in 1..=100 {
            let k = Difficulty::new(i as f64 / 100.0).unwrap().edit_count();
            assert!(k <= last);
            last = k;
        }
        assert!((Difficulty::projection(3, 3).value() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tier_thirds() {
        assert_eq!((1..=3).map(|i| Tier::select(i, 3)).collect::<Vec<_>>(), vec![Tier::Easy, Tier::Medium, Tier::Hard]);
        let six: Vec<Tier> = (1..=6).map(|i| Tier::select(i, 6)).collect();
        assert_eq!(six, vec![Tier::Easy, Tier::Easy, Tier::Medium, Tier::Medium, Tier::Hard, Tier::Hard]);
    }

    #[test]
    fn hardest_shape_edit_moves_one_cell() {
        for seed in 0..200 {
            let p = create_combination_shape(seed, (10, 10)).unwrap();
            let q = distractor_shape(&p, Difficulty::new(1.0).unwrap(), seed).unwrap();
            let diff: BTreeSet<Cell> = p.cells().symmetric_difference(q.cells()).copied().collect();
            assert_eq!(diff.len(), 2, "seed {seed}");
            assert!(q.is_connected());
            assert_ne!(q.canonical_key(), p.canonical_key());
            assert_eq!(q, distractor_shape(&p, Difficulty::new(1.0).unwrap(), seed).unwrap());
        }
    }

    #[test]
    fn shape_distractors_never_match_under_rotation() {
        for seed in 0..300 {
            let p = create_combination_shape(seed, (5, 15)).unwrap();
            for i in 1..=3 {
                let q = distractor_shape(&p, Difficulty::linear(i, 3), seed * 7 + i as u64).unwrap();
                assert!(all_orientations().iter().all(|o| p.rotate(o) != q.normalized()));
                assert!(q.len().abs_diff(p.len()) <= 1);
            }
        }
    }

    #[test]
    fn single_cube_component_grows() {
        let d = distractor_component(&Polycube::single(), 0.0, 3).unwrap();
        assert_eq!(d.len(), 2);
        for seed in 0..200 {
            let comp = create_combination_shape(seed, (1, 6)).unwrap();
            let v = (seed % 3) as f64 / 2.0;
            let d = distractor_component(&comp, v, seed).unwrap();
            let delta = d.len() as i64 - comp.len() as i64;
            assert!([1, 2, 3].contains(&delta.abs()));
            assert!(d.is_connected());
            assert!(all_orientations().iter().all(|o| comp.rotate(o) != d.normalized()));
        }
    }

    #[test]
    fn cube_distractor_tiers() {
        let v = iso_presets()[0];
        for seed in 0..200 {
            let c = create_cube_with_textures(seed).unwrap();
            let hard = cube_distractor(&c, Tier::Hard, seed, &v).unwrap();
            let changed: Vec<FaceId> = FaceId::ALL.into_iter().filter(|&f| hard.face(f) != c.face(f)).collect();
            assert_eq!(changed.len(), 1);
            assert_eq!(hard.face(changed[0]).texture, c.face(changed[0]).texture);
            let medium = cube_distractor(&c, Tier::Medium, seed, &v).unwrap();
            let mut a = c.textures().to_vec();
            let mut b = medium.textures().to_vec();
            assert_ne!(a, b);
            a.sort();
            b.sort();
            assert_eq!(a, b);
            let easy = cube_distractor(&c, Tier::Easy, seed, &v).unwrap();
            for d in [hard, medium, easy] {
                for r in c.all_reorientations() {
                    assert!(!r.looks_like(&d));
                }
                assert!(!visibly_matches_some_turn(&c, &d, &v));
                for f in FaceId::ALL.into_iter().filter(|f| !v.facing().contains(f)) {
                    assert_eq!(d.face(f), c.face(f));
                }
            }
        }
    }

    #[test]
    fn projection_branch_frequency() {
        let p = create_combination_shape(77, (8, 12)).unwrap();
        let truth = project_ortho(&p, FaceId::Top);
        let mut edits = 0;
        let n = 10_000;
        for seed in 0..n {
            let (s, prov) = projection_distractor(&p, FaceId::Top, Difficulty::projection(1, 3), seed).unwrap();
            assert_ne!(s, truth);
            if matches!(prov, Provenance::EditedShape { .. }) {
                edits += 1;
            }
        }
        let f = f64::from(edits) / f64::from(n as u32);
        assert!((f - 0.7).abs() <= 0.02, "{f}");
    }

    #[test]
    fn wrong_view_of_a_bar_differs() {
        let bar = Polycube::from_cells([Cell::new(0, 0, 0), Cell::new(0, 0, 1)]).unwrap();
        assert_ne!(project_ortho(&bar, FaceId::Top), project_ortho(&bar, FaceId::Front));
        for seed in 0..50 {
            let (s, _) = projection_distractor(&bar, FaceId::Top, Difficulty::projection(2, 3), seed).unwrap();
            assert_ne!(s, project_ortho(&bar, FaceId::Top));
        }
    }

    #[test]
    fn sample_face_preferences_exhaustive() {
        let all = FaceId::ALL;
        for vis_mask in 1u32..64 {
            let visible: Vec<FaceId> = all.iter().copied().filter(|f| vis_mask >> f.index() & 1 == 1).collect();
            for h0 in [0u32, 7, 21, 42, 63] {
                for h1 in [0u32, 9, 38, 63] {
                    let v0: Vec<FaceId> = all.iter().copied().filter(|f| h0 >> f.index() & 1 == 1).collect();
                    let v1: Vec<FaceId> = all.iter().copied().filter(|f| h1 >> f.index() & 1 == 1).collect();
                    let seen = |f: &FaceId| usize::from(v0.contains(f)) + usize::from(v1.contains(f));
                    for seed in 0..4 {
                        let hard = sample_face(&visible, Tier::Hard, seed, (&v0, &v1));
                        assert!(visible.contains(&hard));
                        let min_seen = visible.iter().map(seen).min().unwrap();
                        assert_eq!(seen(&hard), min_seen);
                        let easy = sample_face(&visible, Tier::Easy, seed, (&v0, &v1));
                        let max_seen = visible.iter().map(seen).max().unwrap();
                        assert_eq!(seen(&easy), max_seen);
                        assert!(visible.contains(&sample_face(&visible, Tier::Medium, seed, (&v0, &v1))));
                    }
                }
            }
        }
        assert_eq!(sample_face(&[FaceId::Left], Tier::Hard, 0, (&[], &[])), FaceId::Left);
        assert_eq!(
            sample_face(&[FaceId::Top, FaceId::Left], Tier::Easy, 0, (&[FaceId::Top], &[FaceId::Top])),
            FaceId::Top
        );
    }
}
