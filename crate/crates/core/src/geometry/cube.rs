use super::lattice::{quarter_turns, FaceId};
use super::orientation::{all_orientations, Orientation};
use super::texture::{asymmetric_glyphs, palette, FaceTexture, Quarter, TextureId};
use super::GeometryError;
use crate::seed::{stream_rng, Stream};
use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// A unit cube with a texture on each face.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "BTreeMap<FaceId, FaceTexture>", into = "BTreeMap<FaceId, FaceTexture>")]
pub struct TexturedCube {
    faces: [FaceTexture; 6],
}

impl TryFrom<BTreeMap<FaceId, FaceTexture>> for TexturedCube {
    type Error = String;
    fn try_from(map: BTreeMap<FaceId, FaceTexture>) -> Result<Self, Self::Error> {
        if map.len() != 6 {
            return Err(format!("a cube needs 6 faces, got {}", map.len()));
        }
        Ok(TexturedCube {
            faces: FaceId::ALL.map(|f| map[&f]),
        })
    }
}

impl From<TexturedCube> for BTreeMap<FaceId, FaceTexture> {
    fn from(c: TexturedCube) -> Self {
        FaceId::ALL.into_iter().map(|f| (f, c.faces[f.index()])).collect()
    }
}

impl TexturedCube {
    pub fn new(faces: [FaceTexture; 6]) -> Self {
        TexturedCube { faces }
    }

    pub fn face(&self, f: FaceId) -> FaceTexture {
        self.faces[f.index()]
    }

    pub fn set_face(&mut self, f: FaceId, t: FaceTexture) {
        self.faces[f.index()] = t;
    }

    pub fn textures(&self) -> [TextureId; 6] {
        self.faces.map(|f| f.texture)
    }

    pub fn distinct_textures(&self) -> usize {
        let mut ids = self.textures().to_vec();
        ids.sort();
        ids.dedup();
        ids.len()
    }

    /// The same physical cube turned by `o`. Each face's glyph keeps its
    /// appearance; its stored rotation is re-expressed in the frame of the
    /// face it lands on.
    pub fn reorient(&self, o: &Orientation) -> TexturedCube {
        let mut out = *self;
        for f in FaceId::ALL {
            let n = o.apply(f.normal());
            let target = FaceId::from_normal(n).expect("rotations map axes to axes");
            let carried_u = o.apply(f.frame().0);
            let k = quarter_turns(target.frame().0, carried_u, n);
            out.faces[target.index()] = self.faces[f.index()].rotated(k);
        }
        out
    }

    /// All 24 reorientations, identity first.
    pub fn all_reorientations(&self) -> Vec<TexturedCube> {
        all_orientations().iter().map(|o| self.reorient(o)).collect()
    }

    /// Face-by-face visual equality.
    pub fn looks_like(&self, other: &TexturedCube) -> bool {
        FaceId::ALL
            .iter()
            .all(|&f| self.face(f).looks_like(&other.face(f)))
    }

    /// True when some whole-cube turn of `self` looks exactly like `other`.
    pub fn is_reorientation_of(&self, other: &TexturedCube) -> bool {
        self.all_reorientations().iter().any(|r| r.looks_like(other))
    }
}

/// Six distinct asymmetric glyphs sampled without replacement, each with a
/// uniformly drawn in-plane rotation.
pub fn create_cube_with_textures(seed: u64) -> Result<TexturedCube, GeometryError> {
    let mut pool = asymmetric_glyphs();
    if pool.len() < 6 {
        return Err(GeometryError::PaletteTooSmall {
            asymmetric: pool.len(),
            total: palette().len(),
        });
    }
    let mut rng = stream_rng(seed, Stream::Shape);
    pool.shuffle(&mut rng);
    let mut faces = [FaceTexture::new(TextureId(0), Quarter::ZERO); 6];
    for (slot, id) in faces.iter_mut().zip(pool) {
        *slot = FaceTexture::new(id, Quarter::new(rng.gen_range(0..4)));
    }
    Ok(TexturedCube { faces })
}
