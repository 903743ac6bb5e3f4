use super::{emit_prompt, GenConfig, PipelineError, Task, ViewRecord, VqaItem};
use crate::distractor::{
    cube_distractor, distractor_component, distractor_shape, projection_distractor, sample_face, sub_seed,
    visibly_matches_some_turn, Difficulty, Tier,
};
use crate::geometry::{
    create_combination_shape, create_cube_with_textures, deconstruct_shape, fold_net, unfold_cube, FaceId,
    FaceTexture, NetLayout, Polycube, TexturedCube,
};
use crate::render::{
    arrange_in_slots, project_ortho, render_cube, render_isometric, render_net, render_shapes, render_silhouette,
    render_view_indicator, slot_size, Image, Silhouette,
};
use crate::seed::{derive_seed, stream_rng, Stream};
use crate::view::{
    apply_jitter, choose_different_view, choose_distinct_views, face_normal_view, find_best_view, iso_presets,
    opposite_view, ortho_views, visible_faces, ViewPreset,
};
use rand::seq::SliceRandom;
use rand::Rng;
use serde_json::{json, Value};
use std::collections::BTreeMap;

/// Minimum angle between the three shape-finding views: the widest spread
/// three cube-corner directions allow (a regular tetrahedron, acos(−1/3)).
pub const SHAPEFIND_MIN_SEPARATION: f64 = 109.471_220_634_490_7;

const SLOT_ATTEMPTS: u32 = 32;
const SHEET_GAP: i32 = 2;

const AUX_ANSWER_VIEW: u32 = 0;
const AUX_ANSWER_JITTER: u32 = 1;
const AUX_SPLIT: u32 = 2;
const AUX_TARGET: u32 = 3;
const AUX_SLOTS: u32 = 4;
const AUX_TIER: u32 = 5;
const AUX_FACE: u32 = 6;
const AUX_VIEWS: u32 = 7;
const AUX_VIEW_JITTER: u32 = 16;
const AUX_DISTRACTOR_VIEW: u32 = 64;
const AUX_DISTRACTOR_JITTER: u32 = 128;

fn aux(seed: u64, k: u32) -> u64 {
    sub_seed(seed, Stream::Aux(k))
}

fn distractor_seed(seed: u64, i: usize, attempt: u32) -> u64 {
    sub_seed(seed, Stream::Distractor(i as u32 + 1024 * attempt))
}

/// What an option depicts, compared per task to decide answer equivalence.
#[derive(Debug, Clone, PartialEq)]
pub enum Answer {
    /// Equivalent under rotation.
    Shape(Polycube),
    /// Equivalent as an exact grid.
    Silhouette(Silhouette),
    /// Components in place; equivalent as a multiset up to translation.
    Sheet(Vec<Polycube>),
    /// Equivalent when some whole-cube turn looks the same from the view.
    Cube(TexturedCube),
    /// Equivalent when the glyph is the same.
    Face(FaceTexture),
}

impl Answer {
    fn equivalent(&self, other: &Answer, view: Option<&ViewPreset>) -> bool {
        match (self, other) {
            (Answer::Shape(a), Answer::Shape(b)) => a.is_rotation_of(b),
            (Answer::Silhouette(a), Answer::Silhouette(b)) => a == b,
            (Answer::Sheet(a), Answer::Sheet(b)) => sheet_key(a) == sheet_key(b),
            (Answer::Cube(a), Answer::Cube(b)) => match view {
                Some(v) => visibly_matches_some_turn(a, b, v),
                None => b.is_reorientation_of(a),
            },
            (Answer::Face(a), Answer::Face(b)) => a.texture == b.texture,
            _ => false,
        }
    }
}

fn sheet_key(parts: &[Polycube]) -> Vec<Polycube> {
    let mut v: Vec<Polycube> = parts.iter().map(Polycube::normalized).collect();
    v.sort_by(|a, b| a.cells().iter().cmp(b.cells().iter()));
    v
}

/// Ground truth derived independently of the option list, plus the options
/// in displayed order.
#[derive(Debug, Clone)]
pub struct GroundTruth {
    pub key: Answer,
    pub options: Vec<Answer>,
    pub view: Option<ViewPreset>,
}

impl GroundTruth {
    /// Displayed positions whose content is answer-equivalent to the key.
    pub fn equivalent_options(&self) -> Vec<usize> {
        self.options
            .iter()
            .enumerate()
            .filter(|(_, o)| self.key.equivalent(o, self.view.as_ref()))
            .map(|(i, _)| i)
            .collect()
    }
}

/// An item with its rendered images (same order as `item.images()`) and
/// the ground truth used by quality control.
#[derive(Debug, Clone)]
pub struct GeneratedItem {
    pub item: VqaItem,
    pub images: Vec<(String, Image)>,
    pub truth: GroundTruth,
}

impl GeneratedItem {
    pub fn image(&self, name: &str) -> Option<&Image> {
        self.images.iter().find(|(n, _)| n == name).map(|(_, i)| i)
    }
}

pub fn gen_item(q_id: &str, cfg: &GenConfig) -> Result<GeneratedItem, PipelineError> {
    match cfg.task {
        Task::Rotation3d => gen_rotation(q_id, cfg),
        Task::Projection3d => gen_projection(q_id, cfg),
        Task::Combination3d => gen_combination(q_id, cfg),
        Task::Folding3d => gen_folding(q_id, cfg),
        Task::Shapefind3d => gen_shapefind(q_id, cfg),
    }
}

/// Displayed position → generation index (0 is the correct option).
fn shuffle_order(seed: u64, m: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..m).collect();
    order.shuffle(&mut stream_rng(seed, Stream::Shuffle));
    order
}

struct Draft {
    task: Task,
    question: Vec<(&'static str, Image)>,
    /// Generation order, correct option first.
    options: Vec<(Answer, Image)>,
    option_prefix: &'static str,
    key: Answer,
    view: Option<ViewPreset>,
    views: Vec<(String, ViewPreset)>,
    details: BTreeMap<String, Value>,
}

fn finish(q_id: &str, cfg: &GenConfig, seed: u64, draft: Draft) -> Result<GeneratedItem, PipelineError> {
    let order = shuffle_order(seed, draft.options.len());
    let mut images = Vec::new();
    let mut question_images = Vec::new();
    for (role, img) in draft.question {
        let name = format!("{q_id}_{role}.png");
        question_images.push(name.clone());
        images.push((name, img));
    }
    let mut slots: Vec<Option<(Answer, Image)>> = draft.options.into_iter().map(Some).collect();
    let mut option_images = Vec::new();
    let mut answers = Vec::new();
    for (pos, &g) in order.iter().enumerate() {
        let (answer, img) = slots[g].take().expect("a permutation visits each option once");
        let name = format!("{q_id}_{}{pos}.png", draft.option_prefix);
        option_images.push(name.clone());
        images.push((name, img));
        answers.push(answer);
    }
    let correct_index = order.iter().position(|&g| g == 0).expect("the correct option is present");
    let mut details = draft.details;
    details.insert("option_order".into(), json!(order));
    let mut item = VqaItem {
        question_id: q_id.to_string(),
        task: draft.task,
        dise_category: draft.task.dise(),
        spatial_abilities: draft.task.abilities(),
        seed,
        question_images,
        option_images,
        correct_index,
        views: draft.views.iter().map(|(k, v)| (k.clone(), ViewRecord::from(v))).collect(),
        prompt_text: String::new(),
        details,
    };
    item.prompt_text = emit_prompt(&item);
    let _ = cfg;
    Ok(GeneratedItem {
        item,
        images,
        truth: GroundTruth {
            key: draft.key,
            options: answers,
            view: draft.view,
        },
    })
}

macro_rules! fail {
    ($id:expr) => {
        |e| PipelineError::generation($id, e)
    };
}

/// Same shape from another corner; distractors are growth edits of it, each
/// from a random other corner.
pub fn gen_rotation(q_id: &str, cfg: &GenConfig) -> Result<GeneratedItem, PipelineError> {
    cfg.validate()?;
    let seed = derive_seed(q_id);
    let presets = iso_presets();
    let shape = create_combination_shape(seed, cfg.cell_range).map_err(fail!(q_id))?;
    let q_base = find_best_view(&shape, &presets);
    let q_view = apply_jitter(&q_base, seed);
    let ans_base = choose_different_view(&presets, &q_base, aux(seed, AUX_ANSWER_VIEW)).map_err(fail!(q_id))?;
    let ans_view = apply_jitter(&ans_base, aux(seed, AUX_ANSWER_JITTER));
    let n = cfg.n_distractors;
    let mut views = vec![("qView".to_string(), q_view), ("ansView".to_string(), ans_view)];
    let mut options = vec![(Answer::Shape(shape.clone()), render_isometric(&shape, &ans_view)?)];
    let mut keys = vec![shape.canonical_key()];
    for i in 1..=n {
        let d = Difficulty::linear(i, n);
        let variant = (0..SLOT_ATTEMPTS)
            .filter_map(|a| distractor_shape(&shape, d, distractor_seed(seed, i, a)).ok())
            .find(|s| !keys.contains(&s.canonical_key()))
            .ok_or_else(|| PipelineError::generation(q_id, format!("no distinct distractor {i}")))?;
        keys.push(variant.canonical_key());
        let base = choose_different_view(&presets, &q_base, aux(seed, AUX_DISTRACTOR_VIEW + i as u32))
            .map_err(fail!(q_id))?;
        let v = apply_jitter(&base, aux(seed, AUX_DISTRACTOR_JITTER + i as u32));
        views.push((format!("dView{i}"), v));
        let img = render_isometric(&variant, &v)?;
        options.push((Answer::Shape(variant), img));
    }
    let mut details = BTreeMap::new();
    details.insert("cell_range".into(), json!(cfg.cell_range));
    details.insert("cells".into(), json!(shape.len()));
    finish(
        q_id,
        cfg,
        seed,
        Draft {
            task: Task::Rotation3d,
            question: vec![("Q", render_isometric(&shape, &q_view)?)],
            options,
            option_prefix: "A",
            key: Answer::Shape(shape),
            view: None,
            views,
            details,
        },
    )
}

/// Shape with an arrow from one of the six axis sides; options are
/// silhouettes, the true one along the arrow.
pub fn gen_projection(q_id: &str, cfg: &GenConfig) -> Result<GeneratedItem, PipelineError> {
    cfg.validate()?;
    let seed = derive_seed(q_id);
    let shape = create_combination_shape(seed, cfg.cell_range).map_err(fail!(q_id))?;
    let q_view = apply_jitter(&find_best_view(&shape, &iso_presets()), seed);
    let ortho = ortho_views();
    let target_view = ortho[stream_rng(aux(seed, AUX_TARGET), Stream::Views).gen_range(0..ortho.len())];
    let target = target_view.ortho_dir.expect("axis views carry a direction");
    let truth = project_ortho(&shape, target);
    let n = cfg.n_distractors;
    let mut grids = vec![truth.clone()];
    let mut provenance = Vec::new();
    let mut options = vec![(Answer::Silhouette(truth.clone()), render_silhouette(&truth)?)];
    for i in 1..=n {
        let d = Difficulty::projection(i, n);
        let (grid, prov) = (0..SLOT_ATTEMPTS)
            .filter_map(|a| projection_distractor(&shape, target, d, distractor_seed(seed, i, a)).ok())
            .find(|(g, _)| !grids.contains(g))
            .ok_or_else(|| PipelineError::generation(q_id, format!("no distinct silhouette {i}")))?;
        grids.push(grid.clone());
        provenance.push(prov);
        let img = render_silhouette(&grid)?;
        options.push((Answer::Silhouette(grid), img));
    }
    let mut details = BTreeMap::new();
    details.insert("cell_range".into(), json!(cfg.cell_range));
    details.insert("target".into(), json!(target));
    details.insert("provenance".into(), json!(provenance));
    finish(
        q_id,
        cfg,
        seed,
        Draft {
            task: Task::Projection3d,
            question: vec![("Q", render_view_indicator(&shape, &q_view, target)?)],
            options,
            option_prefix: "A",
            key: Answer::Silhouette(truth),
            view: None,
            views: vec![("qView".into(), q_view), ("targetView".into(), target_view)],
            details,
        },
    )
}

/// Shape from two opposite corners; options are sheets of components, the
/// true split or one with a single component altered.
pub fn gen_combination(q_id: &str, cfg: &GenConfig) -> Result<GeneratedItem, PipelineError> {
    cfg.validate()?;
    let seed = derive_seed(q_id);
    let k: usize = if stream_rng(seed, Stream::Layout).gen_bool(0.5) { 3 } else { 4 };
    let (lo, hi) = cfg.cell_range;
    let range = (lo.max((2 * k).min(hi)), hi);
    let master = create_combination_shape(seed, range).map_err(fail!(q_id))?;
    let main_view = apply_jitter(&find_best_view(&master, &iso_presets()), seed);
    let opp_view = opposite_view(&main_view);
    let parts = deconstruct_shape(&master, k, aux(seed, AUX_SPLIT)).map_err(fail!(q_id))?;
    let n = cfg.n_distractors;
    let mut slot_order: Vec<usize> = (0..k).collect();
    slot_order.shuffle(&mut stream_rng(aux(seed, AUX_SLOTS), Stream::Shuffle));
    let mut sheets: Vec<Vec<Polycube>> = vec![parts.clone()];
    let mut replaced = Vec::new();
    for i in 1..=n {
        let slot = slot_order[(i - 1) % k];
        let variation = i as f64 / n as f64;
        let sheet = (0..SLOT_ATTEMPTS)
            .filter_map(|a| distractor_component(&parts[slot], variation, distractor_seed(seed, i, a)).ok())
            .map(|c| {
                let mut s = parts.clone();
                s[slot] = c;
                s
            })
            .find(|s| sheets.iter().all(|t| sheet_key(t) != sheet_key(s)))
            .ok_or_else(|| PipelineError::generation(q_id, format!("no distinct sheet {i}")))?;
        sheets.push(sheet);
        replaced.push(slot);
    }
    let all: Vec<Polycube> = sheets.iter().flatten().cloned().collect();
    let slot = slot_size(&all);
    let mut options = Vec::new();
    for sheet in &sheets {
        let laid = arrange_in_slots(sheet, SHEET_GAP, slot);
        options.push((Answer::Sheet(sheet.clone()), render_shapes(&laid, &main_view)?));
    }
    let mut details = BTreeMap::new();
    details.insert("cell_range".into(), json!(cfg.cell_range));
    details.insert("k".into(), json!(k));
    details.insert("replaced_slots".into(), json!(replaced));
    finish(
        q_id,
        cfg,
        seed,
        Draft {
            task: Task::Combination3d,
            question: vec![
                ("Q", render_isometric(&master, &main_view)?),
                ("Q_opp", render_isometric(&master, &opp_view)?),
            ],
            options,
            option_prefix: "A",
            key: Answer::Sheet(parts),
            view: None,
            views: vec![("mainView".into(), main_view), ("oppView".into(), opp_view)],
            details,
        },
    )
}

/// A cube net; options are cubes seen from one corner, the folded net or a
/// tampered copy of it.
pub fn gen_folding(q_id: &str, cfg: &GenConfig) -> Result<GeneratedItem, PipelineError> {
    cfg.validate()?;
    let seed = derive_seed(q_id);
    let cube = create_cube_with_textures(seed).map_err(fail!(q_id))?;
    let layout = if stream_rng(seed, Stream::Layout).gen_bool(0.5) {
        NetLayout::Cross
    } else {
        NetLayout::T
    };
    let net = unfold_cube(&cube, layout);
    let folded = fold_net(&net).map_err(fail!(q_id))?;
    let best = apply_jitter(&find_best_view(&Polycube::single(), &iso_presets()), seed);
    let n = cfg.n_distractors;
    let facing = best.facing();
    let mut cubes = vec![cube];
    let mut tiers = Vec::new();
    for i in 1..=n {
        let tier = Tier::select(i, n);
        let d = (0..SLOT_ATTEMPTS)
            .filter_map(|a| cube_distractor(&cube, tier, distractor_seed(seed, i, a), &best).ok())
            .find(|d| {
                cubes
                    .iter()
                    .all(|c| !facing.iter().all(|&f| c.face(f).looks_like(&d.face(f))))
            })
            .ok_or_else(|| PipelineError::generation(q_id, format!("no distinct cube {i}")))?;
        cubes.push(d);
        tiers.push(tier);
    }
    let options = cubes
        .iter()
        .map(|c| (Answer::Cube(*c), render_cube(c, &best, None)))
        .collect();
    let face_map: BTreeMap<String, Value> = net
        .placements
        .iter()
        .map(|p| {
            (
                p.face.name().to_string(),
                json!({"pos": p.pos, "texture": p.texture, "rotation": p.rotation}),
            )
        })
        .collect();
    let mut details = BTreeMap::new();
    details.insert("layout".into(), json!(layout));
    details.insert("faceMap".into(), json!(face_map));
    details.insert("tiers".into(), json!(tiers));
    finish(
        q_id,
        cfg,
        seed,
        Draft {
            task: Task::Folding3d,
            question: vec![("Q", render_net(&net))],
            options,
            option_prefix: "A",
            key: Answer::Cube(folded),
            view: Some(best),
            views: vec![("bestView".into(), best)],
            details,
        },
    )
}

/// A cube from three well-separated corners, one face painted blue in the
/// last view; options are face glyphs, the true one from under the paint.
pub fn gen_shapefind(q_id: &str, cfg: &GenConfig) -> Result<GeneratedItem, PipelineError> {
    cfg.validate()?;
    let seed = derive_seed(q_id);
    let cube = create_cube_with_textures(seed).map_err(fail!(q_id))?;
    let bases = choose_distinct_views(&cube, 3, SHAPEFIND_MIN_SEPARATION, aux(seed, AUX_VIEWS)).map_err(fail!(q_id))?;
    let views: Vec<ViewPreset> = bases
        .iter()
        .enumerate()
        .map(|(k, v)| apply_jitter(v, aux(seed, AUX_VIEW_JITTER + k as u32)))
        .collect();
    let tier = [Tier::Easy, Tier::Medium, Tier::Hard][stream_rng(seed, Stream::Layout).gen_range(0..3)];
    let visible = visible_faces(&cube, &views[2]);
    let hidden = sample_face(
        &visible,
        tier,
        aux(seed, AUX_FACE),
        (&visible_faces(&cube, &views[0]), &visible_faces(&cube, &views[1])),
    );
    let others: Vec<FaceId> = FaceId::ALL.into_iter().filter(|&f| f != hidden).collect();
    let mut faces = vec![hidden];
    faces.extend(
        others
            .choose_multiple(&mut stream_rng(aux(seed, AUX_TIER), Stream::Views), cfg.n_distractors)
            .copied(),
    );
    let options = faces
        .iter()
        .map(|&f| (Answer::Face(cube.face(f)), render_cube(&cube, &face_normal_view(f), None)))
        .collect();
    let mut details = BTreeMap::new();
    details.insert("replaced_face".into(), json!(hidden));
    details.insert("tier".into(), json!(tier));
    details.insert("option_faces".into(), json!(faces));
    finish(
        q_id,
        cfg,
        seed,
        Draft {
            task: Task::Shapefind3d,
            question: vec![
                ("V0", render_cube(&cube, &views[0], None)),
                ("V1", render_cube(&cube, &views[1], None)),
                ("V2", render_cube(&cube, &views[2], Some(hidden))),
            ],
            options,
            option_prefix: "O",
            key: Answer::Face(cube.face(hidden)),
            view: None,
            views: views
                .iter()
                .enumerate()
                .map(|(k, v)| (format!("V{k}"), *v))
                .collect(),
            details,
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::fold_net;

    fn cfg(task: Task) -> GenConfig {
        GenConfig::new(task)
    }

    #[test]
    fn every_task_generates_a_unique_answer() {
        for task in Task::ALL {
            for i in 0..12 {
                let id = format!("t_{task}_{i}");
                let g = gen_item(&id, &cfg(task)).unwrap();
                assert_eq!(g.truth.equivalent_options(), vec![g.item.correct_index], "{id}");
                assert_eq!(g.images.len(), g.item.images().count());
                assert_eq!(g.item.option_count(), 4);
                assert!(g.images.iter().all(|(_, img)| !img.is_blank()));
            }
        }
    }

    #[test]
    fn generation_is_deterministic() {
        for task in Task::ALL {
            let a = gen_item("det_1", &cfg(task)).unwrap();
            let b = gen_item("det_1", &cfg(task)).unwrap();
            assert_eq!(a.item, b.item);
            assert_eq!(a.images, b.images);
        }
    }

    #[test]
    fn rotation_views_differ_and_answer_matches() {
        for i in 0..20 {
            let g = gen_rotation(&format!("rot_{i}"), &cfg(Task::Rotation3d)).unwrap();
            let (q, a) = (g.item.views["qView"], g.item.views["ansView"]);
            assert!((q.azimuth - a.azimuth).abs() > 20.0 || (q.elevation - a.elevation).abs() > 20.0);
            let Answer::Shape(key) = &g.truth.key else { panic!() };
            for (k, o) in g.truth.options.iter().enumerate() {
                let Answer::Shape(s) = o else { panic!() };
                assert_eq!(s.canonical_key() == key.canonical_key(), k == g.item.correct_index);
            }
        }
    }

    #[test]
    fn projection_target_and_distinct_grids() {
        for i in 0..20 {
            let g = gen_projection(&format!("proj_{i}"), &cfg(Task::Projection3d)).unwrap();
            assert!(g.item.views["targetView"].ortho_dir.is_some());
            let grids: Vec<&Silhouette> = g
                .truth
                .options
                .iter()
                .map(|o| match o {
                    Answer::Silhouette(s) => s,
                    _ => panic!(),
                })
                .collect();
            for (a, x) in grids.iter().enumerate() {
                for y in &grids[a + 1..] {
                    assert_ne!(x, y);
                }
            }
        }
    }

    #[test]
    fn combination_sheets() {
        for i in 0..20 {
            let g = gen_combination(&format!("comb_{i}"), &cfg(Task::Combination3d)).unwrap();
            let (m, o) = (g.item.views["mainView"], g.item.views["oppView"]);
            assert!((m.elevation + o.elevation).abs() < 16.0 + 1e-9);
            let Answer::Sheet(parts) = &g.truth.options[g.item.correct_index] else { panic!() };
            let mut union = std::collections::BTreeSet::new();
            for p in parts {
                union.extend(p.cells().iter().copied());
            }
            let master = Polycube::from_cells(union).unwrap();
            assert!(master.len() >= 5);
            for (k, opt) in g.truth.options.iter().enumerate() {
                if k == g.item.correct_index {
                    continue;
                }
                let Answer::Sheet(other) = opt else { panic!() };
                let differing = parts.iter().zip(other).filter(|(a, b)| a.normalized() != b.normalized()).count();
                assert_eq!(differing, 1);
            }
        }
    }

    #[test]
    fn folding_options_share_one_view_and_net_folds_to_answer() {
        for i in 0..20 {
            let g = gen_folding(&format!("fold_{i}"), &cfg(Task::Folding3d)).unwrap();
            assert_eq!(g.item.views.len(), 1);
            let layout: NetLayout = serde_json::from_value(g.item.details["layout"].clone()).unwrap();
            let cube = create_cube_with_textures(g.item.seed).unwrap();
            assert_eq!(fold_net(&unfold_cube(&cube, layout)).unwrap(), cube);
            let Answer::Cube(correct) = &g.truth.options[g.item.correct_index] else { panic!() };
            assert_eq!(*correct, cube);
        }
    }

    #[test]
    fn shapefind_hidden_face_is_visible_in_last_view() {
        for i in 0..30 {
            let g = gen_shapefind(&format!("sf_{i}"), &cfg(Task::Shapefind3d)).unwrap();
            let hidden: FaceId = serde_json::from_value(g.item.details["replaced_face"].clone()).unwrap();
            let v2 = g.item.views["V2"];
            let preset = ViewPreset::isometric(v2.azimuth, v2.elevation);
            assert!(preset.facing().contains(&hidden));
            let textures: Vec<_> = g
                .truth
                .options
                .iter()
                .map(|o| match o {
                    Answer::Face(t) => t.texture,
                    _ => panic!(),
                })
                .collect();
            let mut dedup = textures.clone();
            dedup.sort();
            dedup.dedup();
            assert_eq!(dedup.len(), textures.len());
            let cube = create_cube_with_textures(g.item.seed).unwrap();
            assert_eq!(textures[g.item.correct_index], cube.face(hidden).texture);
            assert!(g.item.option_images.iter().all(|n| n.contains("_O")));
        }
    }

    #[test]
    fn answer_position_is_uniform() {
        let mut counts = [0usize; 4];
        let n = 4000;
        for i in 0..n {
            let seed = derive_seed(&format!("pos_{i}"));
            let order = shuffle_order(seed, 4);
            counts[order.iter().position(|&g| g == 0).unwrap()] += 1;
        }
        for c in counts {
            assert!((c as f64 / n as f64 - 0.25).abs() <= 0.02, "{counts:?}");
        }
    }
}
