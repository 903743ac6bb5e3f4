//! Cube nets and the edge-rolling fold/unfold between a net and a cube.
//!
//! Grid positions are `(col, row)` with rows growing downward. The tile at
//! `(1, 1)` is the anchor and is always the top face seen from above, so its
//! tile frame is the cube frame `u = +x`, `v = +y`. Stepping right in the grid
//! rolls over the tile's `u` edge, stepping up rolls over its `v` edge.

use super::cube::TexturedCube;
use super::lattice::{quarter_turns, Cell, FaceId};
use super::texture::{FaceTexture, Quarter, TextureId};
use super::GeometryError;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, VecDeque};

pub const ANCHOR: (i32, i32) = (1, 1);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NetLayout {
    Cross,
    T,
}

impl NetLayout {
    pub const ALL: [NetLayout; 2] = [NetLayout::Cross, NetLayout::T];

    pub fn template(self) -> [(i32, i32); 6] {
        match self {
            NetLayout::Cross => [(1, 0), (0, 1), (1, 1), (2, 1), (1, 2), (1, 3)],
            NetLayout::T => [(0, 0), (1, 0), (2, 0), (1, 1), (1, 2), (1, 3)],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            NetLayout::Cross => "cross",
            NetLayout::T => "T",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NetPlacement {
    pub pos: (i32, i32),
    /// The cube face this tile folds onto.
    pub face: FaceId,
    pub texture: TextureId,
    /// Rotation of the glyph in the tile (net-plane) frame.
    pub rotation: Quarter,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub mirrored: bool,
}

impl NetPlacement {
    pub fn face_texture(&self) -> FaceTexture {
        FaceTexture {
            texture: self.texture,
            rotation: self.rotation,
            mirrored: self.mirrored,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CubeNet {
    pub layout: NetLayout,
    pub placements: Vec<NetPlacement>,
}

impl CubeNet {
    pub fn at(&self, pos: (i32, i32)) -> Option<&NetPlacement> {
        self.placements.iter().find(|p| p.pos == pos)
    }
}

/// Orientation of a tile on the cube: outward normal plus where the tile's
/// right (`u`) and up (`v`) directions point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct TileFrame {
    n: Cell,
    u: Cell,
    v: Cell,
}

impl TileFrame {
    fn anchor() -> Self {
        let (u, v) = FaceId::Top.frame();
        TileFrame { n: FaceId::Top.normal(), u, v }
    }

    fn step(self, d: (i32, i32)) -> Self {
        let TileFrame { n, u, v } = self;
        match d {
            (1, 0) => TileFrame { n: u, u: -n, v },
            (-1, 0) => TileFrame { n: -u, u: n, v },
            (0, -1) => TileFrame { n: v, u, v: -n },
            (0, 1) => TileFrame { n: -v, u, v: n },
            _ => unreachable!("grid steps are unit moves"),
        }
    }

    fn face(&self) -> FaceId {
        FaceId::from_normal(self.n).expect("tile normals are axis vectors")
    }

    /// Quarter turns from the tile frame to the cube face's own frame.
    fn offset(&self) -> u8 {
        quarter_turns(self.u, self.face().frame().0, self.n)
    }
}

const STEPS: [(i32, i32); 4] = [(1, 0), (-1, 0), (0, -1), (0, 1)];

type Placed = ((i32, i32), TileFrame);

/// Rolls out from the anchor over grid edges; positions in BFS order.
fn roll(positions: &[(i32, i32)]) -> Result<Vec<Placed>, GeometryError> {
    if !positions.contains(&ANCHOR) {
        return Err(GeometryError::NonFoldable("no tile at the anchor position".into()));
    }
    let mut frames: BTreeMap<(i32, i32), TileFrame> = BTreeMap::new();
    let mut order = vec![(ANCHOR, TileFrame::anchor())];
    frames.insert(ANCHOR, TileFrame::anchor());
    let mut queue = VecDeque::from([ANCHOR]);
    while let Some(p) = queue.pop_front() {
        let frame = frames[&p];
        for d in STEPS {
            let q = (p.0 + d.0, p.1 + d.1);
            if positions.contains(&q) && !frames.contains_key(&q) {
                let f = frame.step(d);
                frames.insert(q, f);
                order.push((q, f));
                queue.push_back(q);
            }
        }
    }
    if order.len() != positions.len() {
        return Err(GeometryError::NonFoldable("tiles are not edge-connected".into()));
    }
    let mut faces: Vec<FaceId> = order.iter().map(|(_, f)| f.face()).collect();
    faces.sort();
    faces.dedup();
    if faces.len() != order.len() {
        return Err(GeometryError::NonFoldable("two tiles fold onto the same face".into()));
    }
    Ok(order)
}

/// Lays the cube out on the layout template, tile rotations chosen so that
/// [`fold_net`] gives the cube back exactly.
pub fn unfold_cube(cube: &TexturedCube, layout: NetLayout) -> CubeNet {
    let template = layout.template();
    let rolled = roll(&template).expect("built-in templates fold");
    let placements = template
        .iter()
        .map(|&pos| {
            let frame = rolled.iter().find(|(p, _)| *p == pos).expect("rolled every tile").1;
            let face = frame.face();
            let tex = cube.face(face);
            NetPlacement {
                pos,
                face,
                texture: tex.texture,
                rotation: tex.rotation.plus(frame.offset()),
                mirrored: tex.mirrored,
            }
        })
        .collect();
    CubeNet { layout, placements }
}

/// Folds a net by edge-rolling from the anchor tile.
pub fn fold_net(net: &CubeNet) -> Result<TexturedCube, GeometryError> {
    if net.placements.len() != 6 {
        return Err(GeometryError::NonFoldable(format!(
            "a cube net has 6 tiles, got {}",
            net.placements.len()
        )));
    }
    let mut positions: Vec<(i32, i32)> = net.placements.iter().map(|p| p.pos).collect();
    positions.sort();
    let mut template = net.layout.template().to_vec();
    template.sort();
    if positions != template {
        return Err(GeometryError::NonFoldable(format!(
            "tiles do not form the {} layout",
            net.layout.name()
        )));
    }
    let rolled = roll(&positions)?;
    let mut faces = [FaceTexture::new(TextureId(0), Quarter::ZERO); 6];
    for (pos, frame) in rolled {
        let tile = net.at(pos).expect("position came from the placements");
        let face = frame.face();
        if tile.face != face {
            return Err(GeometryError::NonFoldable(format!(
                "tile at {pos:?} is labelled {} but folds onto {face}",
                tile.face
            )));
        }
        faces[face.index()] = FaceTexture {
            texture: tile.texture,
            rotation: tile.rotation.minus(frame.offset()),
            mirrored: tile.mirrored,
        };
    }
    Ok(TexturedCube::new(faces))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::create_cube_with_textures;

    fn labelled_cube() -> TexturedCube {
        TexturedCube::new(FaceId::ALL.map(|f| FaceTexture::new(TextureId(f.index() as u8), Quarter::ZERO)))
    }

    #[test]
    fn cross_adjacency_matches_hand_rolled_paper_model() {
        // Paper model: top in the middle, back above, left/right at the
        // sides, front below, bottom at the foot of the cross.
        let net = unfold_cube(&labelled_cube(), NetLayout::Cross);
        let face_at = |p| net.at(p).unwrap().face;
        assert_eq!(face_at((1, 1)), FaceId::Top);
        assert_eq!(face_at((1, 0)), FaceId::Back);
        assert_eq!(face_at((0, 1)), FaceId::Left);
        assert_eq!(face_at((2, 1)), FaceId::Right);
        assert_eq!(face_at((1, 2)), FaceId::Front);
        assert_eq!(face_at((1, 3)), FaceId::Bottom);
        // Tile orientations from the same model: the back tile is seen
        // upside down, left/right turned a quarter, front and bottom upright.
        let rot = |p| net.at(p).unwrap().rotation.turns();
        assert_eq!(rot((1, 1)), 0);
        assert_eq!(rot((1, 0)), 2);
        assert_eq!(rot((0, 1)), 3);
        assert_eq!(rot((2, 1)), 1);
        assert_eq!(rot((1, 2)), 0);
        assert_eq!(rot((1, 3)), 0);
    }

    #[test]
    fn t_layout_puts_left_back_right_on_the_bar() {
        let net = unfold_cube(&labelled_cube(), NetLayout::T);
        assert_eq!(net.at((0, 0)).unwrap().face, FaceId::Left);
        assert_eq!(net.at((1, 0)).unwrap().face, FaceId::Back);
        assert_eq!(net.at((2, 0)).unwrap().face, FaceId::Right);
    }

    #[test]
    fn fold_inverts_unfold() {
        for seed in 0..100 {
            let c = create_cube_with_textures(seed).unwrap();
            for layout in NetLayout::ALL {
                let net = unfold_cube(&c, layout);
                assert_eq!(fold_net(&net).unwrap(), c);
            }
        }
    }

    #[test]
    fn canonical_cross_with_identity_rotations_folds_to_reference() {
        let net = CubeNet {
            layout: NetLayout::Cross,
            placements: vec![
                NetPlacement { pos: (1, 1), face: FaceId::Top, texture: TextureId(0), rotation: Quarter::ZERO, mirrored: false },
                NetPlacement { pos: (1, 0), face: FaceId::Back, texture: TextureId(1), rotation: Quarter::ZERO, mirrored: false },
                NetPlacement { pos: (0, 1), face: FaceId::Left, texture: TextureId(2), rotation: Quarter::ZERO, mirrored: false },
                NetPlacement { pos: (2, 1), face: FaceId::Right, texture: TextureId(3), rotation: Quarter::ZERO, mirrored: false },
                NetPlacement { pos: (1, 2), face: FaceId::Front, texture: TextureId(4), rotation: Quarter::ZERO, mirrored: false },
                NetPlacement { pos: (1, 3), face: FaceId::Bottom, texture: TextureId(5), rotation: Quarter::ZERO, mirrored: false },
            ],
        };
        let cube = fold_net(&net).unwrap();
        assert_eq!(cube.face(FaceId::Top).rotation.turns(), 0);
        assert_eq!(cube.face(FaceId::Back).rotation.turns(), 2);
        assert_eq!(cube.face(FaceId::Left).rotation.turns(), 1);
        assert_eq!(cube.face(FaceId::Right).rotation.turns(), 3);
        assert_eq!(cube.face(FaceId::Front).rotation.turns(), 0);
        assert_eq!(cube.face(FaceId::Bottom).rotation.turns(), 0);
        assert_eq!(cube.face(FaceId::Front).texture, TextureId(4));
    }

    #[test]
    fn unfold_preserves_textures() {
        let c = create_cube_with_textures(77).unwrap();
        let net = unfold_cube(&c, NetLayout::T);
        let mut a: Vec<_> = net.placements.iter().map(|p| p.texture).collect();
        let mut b = c.textures().to_vec();
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }

    #[test]
    fn swapping_two_tiles_changes_the_cube() {
        let c = create_cube_with_textures(5).unwrap();
        let mut net = unfold_cube(&c, NetLayout::Cross);
        let (a, b) = (net.placements[0], net.placements[1]);
        net.placements[0] = NetPlacement { pos: a.pos, face: a.face, ..b };
        net.placements[1] = NetPlacement { pos: b.pos, face: b.face, ..a };
        assert_ne!(fold_net(&net).unwrap(), c);
    }

    #[test]
    fn overlapping_or_misplaced_tiles_are_rejected() {
        let c = create_cube_with_textures(5).unwrap();
        let mut net = unfold_cube(&c, NetLayout::Cross);
        net.placements[0].pos = (3, 3);
        assert!(matches!(fold_net(&net), Err(GeometryError::NonFoldable(_))));

        // a straight strip of four plus two caps wraps onto itself
        let strip = [(1, 0), (1, 1), (1, 2), (1, 3), (1, 4), (1, 5)];
        assert!(matches!(roll(&strip), Err(GeometryError::NonFoldable(_))));

        let mut wrong_label = unfold_cube(&c, NetLayout::T);
        wrong_label.placements[0].face = wrong_label.placements[0].face.opposite();
        assert!(fold_net(&wrong_label).is_err());
    }
}
