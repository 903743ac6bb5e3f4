//! Procedural 8×8 glyph textures for cube faces.
//!
//! Rows run top to bottom, columns left to right, in the face frame
//! (`u` right, `v` up). Symmetry and chirality are computed when the palette
//! is first built, not declared.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::OnceLock;

pub const GLYPH_SIZE: usize = 8;

pub type GlyphRaster = [[bool; GLYPH_SIZE]; GLYPH_SIZE];

#[rustfmt::skip]
const GLYPH_SOURCE: [(char, [&str; GLYPH_SIZE]); 20] = [
    ('F', ["########", "##......", "##......", "######..", "##......", "##......", "##......", "##......"]),
    ('G', [".######.", "##....##", "##......", "##......", "##..####", "##....##", "##....##", ".######."]),
    ('J', ["...#####", "......##", "......##", "......##", "......##", "##....##", "##....##", ".#####.."]),
    ('L', ["##......", "##......", "##......", "##......", "##......", "##......", "#######.", "#######."]),
    ('P', ["######..", "##...##.", "##...##.", "######..", "##......", "##......", "##......", "##......"]),
    ('R', ["######..", "##...##.", "##...##.", "######..", "##.##...", "##..##..", "##...##.", "##....##"]),
    ('4', ["....##..", "...###..", "..#.##..", ".#..##..", "########", "....##..", "....##..", "....##.."]),
    ('7', ["########", "......##", ".....##.", "....##..", "...##...", "...##...", "...##...", "...##..."]),
    ('Q', [".#####..", "##...##.", "##...##.", "##...##.", "##.#.##.", "##..##..", ".####.#.", "......##"]),
    ('k', ["##......", "##......", "##...##.", "##..##..", "#####...", "##..##..", "##...##.", "##....##"]),
    ('b', ["##......", "##......", "##......", "######..", "##...##.", "##...##.", "##...##.", "######.."]),
    ('?', [".#####..", "##...##.", ".....##.", "....##..", "...##...", "...##...", "........", "...##..."]),
    ('2', [".#####..", "##...##.", ".....##.", "....##..", "...##...", "..##....", ".##.....", "#######."]),
    ('r', ["........", "##.###..", "###..##.", "##......", "##......", "##......", "##......", "##......"]),
    ('t', ["..##....", "..##....", "######..", "..##....", "..##....", "..##....", "..##..#.", "...###.."]),
    ('h', ["##......", "##......", "##......", "######..", "##...##.", "##...##.", "##...##.", "##...##."]),
    ('O', ["..####..", ".##..##.", "##....##", "##....##", "##....##", "##....##", ".##..##.", "..####.."]),
    ('+', ["...##...", "...##...", "...##...", "########", "########", "...##...", "...##...", "...##..."]),
    ('X', ["##....##", ".##..##.", "..####..", "...##...", "...##...", "..####..", ".##..##.", "##....##"]),
    ('S', [".######.", "##......", "##......", ".#####..", "..#####.", "......##", "......##", ".######."]),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TextureId(pub u8);

impl fmt::Display for TextureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T{}", self.0)
    }
}

/// Counter-clockwise in-plane rotation in quarter turns.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u16", into = "u16")]
pub struct Quarter(u8);

impl Quarter {
    pub const ZERO: Quarter = Quarter(0);

    pub fn new(turns: u8) -> Self {
        Quarter(turns % 4)
    }

    pub fn turns(self) -> u8 {
        self.0
    }

    pub fn degrees(self) -> u16 {
        u16::from(self.0) * 90
    }

    pub fn plus(self, turns: u8) -> Self {
        Quarter::new(self.0 + turns % 4)
    }

    pub fn minus(self, turns: u8) -> Self {
        Quarter::new(self.0 + 4 - turns % 4)
    }
}

impl TryFrom<u16> for Quarter {
    type Error = String;
    fn try_from(deg: u16) -> Result<Self, Self::Error> {
        match deg {
            0 | 90 | 180 | 270 => Ok(Quarter((deg / 90) as u8)),
            other => Err(format!("rotation must be 0, 90, 180 or 270 degrees, got {other}")),
        }
    }
}

impl From<Quarter> for u16 {
    fn from(q: Quarter) -> u16 {
        q.degrees()
    }
}

#[derive(Debug, Clone)]
pub struct Glyph {
    pub id: TextureId,
    pub label: char,
    pub raster: GlyphRaster,
    /// Invariant under a non-trivial in-plane rotation.
    pub symmetric: bool,
    /// No mirror image of the glyph equals any of its rotations.
    pub chiral: bool,
}

pub fn rotate_ccw(g: &GlyphRaster) -> GlyphRaster {
    let mut out = [[false; GLYPH_SIZE]; GLYPH_SIZE];
    for (r, row) in out.iter_mut().enumerate() {
        for (c, px) in row.iter_mut().enumerate() {
            *px = g[c][GLYPH_SIZE - 1 - r];
        }
    }
    out
}

pub fn mirror(g: &GlyphRaster) -> GlyphRaster {
    let mut out = *g;
    for row in out.iter_mut() {
        row.reverse();
    }
    out
}

fn rotations(g: &GlyphRaster) -> [GlyphRaster; 4] {
    let r1 = rotate_ccw(g);
    let r2 = rotate_ccw(&r1);
    let r3 = rotate_ccw(&r2);
    [*g, r1, r2, r3]
}

fn parse(rows: &[&str; GLYPH_SIZE]) -> GlyphRaster {
    let mut g = [[false; GLYPH_SIZE]; GLYPH_SIZE];
    for (r, line) in rows.iter().enumerate() {
        for (c, ch) in line.chars().enumerate() {
            g[r][c] = ch == '#';
        }
    }
    g
}

/// The built-in glyph palette, ids in table order.
pub fn palette() -> &'static [Glyph] {
    static PALETTE: OnceLock<Vec<Glyph>> = OnceLock::new();
    PALETTE.get_or_init(|| {
        GLYPH_SOURCE
            .iter()
            .enumerate()
            .map(|(i, (label, rows))| {
                let raster = parse(rows);
                let rots = rotations(&raster);
                let mirrored = rotations(&mirror(&raster));
                Glyph {
                    id: TextureId(i as u8),
                    label: *label,
                    raster,
                    symmetric: rots[1..].contains(&raster),
                    chiral: !mirrored.contains(&raster),
                }
            })
            .collect()
    })
}

pub fn glyph(id: TextureId) -> &'static Glyph {
    &palette()[id.0 as usize]
}

/// Glyphs usable on generated cubes: no rotational symmetry.
pub fn asymmetric_glyphs() -> Vec<TextureId> {
    palette().iter().filter(|g| !g.symmetric).map(|g| g.id).collect()
}

/// How one face is textured: a glyph, optionally mirrored left-right, then
/// rotated counter-clockwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FaceTexture {
    pub texture: TextureId,
    pub rotation: Quarter,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub mirrored: bool,
}

impl FaceTexture {
    pub fn new(texture: TextureId, rotation: Quarter) -> Self {
        FaceTexture {
            texture,
            rotation,
            mirrored: false,
        }
    }

    /// The glyph as it appears in the face frame.
    pub fn raster(&self) -> GlyphRaster {
        let base = glyph(self.texture).raster;
        let start = if self.mirrored { mirror(&base) } else { base };
        rotations(&start)[self.rotation.turns() as usize]
    }

    pub fn rotated(self, turns: u8) -> Self {
        FaceTexture {
            rotation: self.rotation.plus(turns),
            ..self
        }
    }

    /// Visual identity: same glyph id showing the same pixels.
    pub fn looks_like(&self, other: &FaceTexture) -> bool {
        self.texture == other.texture && self.raster() == other.raster()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn palette_meets_size_contract() {
        let p = palette();
        assert!(p.len() >= 12);
        assert!(asymmetric_glyphs().len() >= 6);
        assert!(p.iter().any(|g| g.symmetric));
    }

    #[test]
    fn glyphs_are_distinct_under_all_symmetries() {
        let p = palette();
        for a in p {
            let mut family = rotations(&a.raster).to_vec();
            family.extend(rotations(&mirror(&a.raster)));
            for b in p.iter().filter(|b| b.id != a.id) {
                assert!(!family.contains(&b.raster), "{} vs {}", a.label, b.label);
            }
        }
    }

    #[test]
    fn asymmetric_glyphs_are_also_chiral() {
        for g in palette().iter().filter(|g| !g.symmetric) {
            assert!(g.chiral, "{}", g.label);
        }
    }

    #[test]
    fn four_quarter_turns_is_identity() {
        let g = glyph(TextureId(0)).raster;
        assert_eq!(rotations(&rotate_ccw(&g))[3], g);
        assert_eq!(mirror(&mirror(&g)), g);
    }

    #[test]
    fn quarter_arithmetic() {
        assert_eq!(Quarter::new(3).plus(2), Quarter::new(1));
        assert_eq!(Quarter::new(1).minus(2), Quarter::new(3));
        assert_eq!(Quarter::try_from(270).unwrap().turns(), 3);
        assert!(Quarter::try_from(45).is_err());
    }

    #[test]
    fn rotated_faces_of_asymmetric_glyphs_look_different() {
        for id in asymmetric_glyphs() {
            let f = FaceTexture::new(id, Quarter::ZERO);
            for t in 1..4 {
                assert!(!f.looks_like(&f.rotated(t)));
            }
        }
    }
}
