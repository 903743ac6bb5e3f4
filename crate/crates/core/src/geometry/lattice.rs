use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Neg, Sub};

/// Per-axis bound on generated coordinates.
pub const ARENA: i32 = 32;

/// A unit cell of the integer lattice, addressed by its minimum corner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Cell {
    pub x: i32,
    pub y: i32,
    pub z: i32,
}

impl Cell {
    pub const ORIGIN: Cell = Cell { x: 0, y: 0, z: 0 };

    pub const fn new(x: i32, y: i32, z: i32) -> Self {
        Cell { x, y, z }
    }

    pub fn from_array(v: [i32; 3]) -> Self {
        Cell::new(v[0], v[1], v[2])
    }

    pub fn to_array(self) -> [i32; 3] {
        [self.x, self.y, self.z]
    }

    pub fn in_arena(self) -> bool {
        self.x.abs() <= ARENA && self.y.abs() <= ARENA && self.z.abs() <= ARENA
    }

    /// The six face-adjacent cells, in `FaceId::ALL` order.
    pub fn neighbors(self) -> [Cell; 6] {
        FaceId::ALL.map(|f| self + f.normal())
    }

    pub fn center(self) -> [f64; 3] {
        [
            f64::from(self.x) + 0.5,
            f64::from(self.y) + 0.5,
            f64::from(self.z) + 0.5,
        ]
    }
}

impl Add for Cell {
    type Output = Cell;
    fn add(self, o: Cell) -> Cell {
        Cell::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Cell {
    type Output = Cell;
    fn sub(self, o: Cell) -> Cell {
        Cell::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Cell {
    type Output = Cell;
    fn neg(self) -> Cell {
        Cell::new(-self.x, -self.y, -self.z)
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.x, self.y, self.z)
    }
}

/// A cube face, or equivalently one of the six axis directions.
///
/// Axis convention (z up): `right` = +x, `left` = −x, `back` = +y,
/// `front` = −y, `top` = +z, `bottom` = −z.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FaceId {
    Top,
    Bottom,
    Front,
    Back,
    Left,
    Right,
}

impl FaceId {
    pub const ALL: [FaceId; 6] = [
        FaceId::Top,
        FaceId::Bottom,
        FaceId::Front,
        FaceId::Back,
        FaceId::Left,
        FaceId::Right,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Outward unit normal.
    pub fn normal(self) -> Cell {
        match self {
            FaceId::Top => Cell::new(0, 0, 1),
            FaceId::Bottom => Cell::new(0, 0, -1),
            FaceId::Front => Cell::new(0, -1, 0),
            FaceId::Back => Cell::new(0, 1, 0),
            FaceId::Left => Cell::new(-1, 0, 0),
            FaceId::Right => Cell::new(1, 0, 0),
        }
    }

    pub fn from_normal(n: Cell) -> Option<FaceId> {
        FaceId::ALL.into_iter().find(|f| f.normal() == n)
    }

    pub fn opposite(self) -> FaceId {
        match self {
            FaceId::Top => FaceId::Bottom,
            FaceId::Bottom => FaceId::Top,
            FaceId::Front => FaceId::Back,
            FaceId::Back => FaceId::Front,
            FaceId::Left => FaceId::Right,
            FaceId::Right => FaceId::Left,
        }
    }

    /// 0 for x, 1 for y, 2 for z.
    pub fn axis(self) -> usize {
        match self {
            FaceId::Left | FaceId::Right => 0,
            FaceId::Front | FaceId::Back => 1,
            FaceId::Top | FaceId::Bottom => 2,
        }
    }

    /// In-plane frame `(u, v)` of the face seen from outside: `u` points to
    /// the viewer's right, `v` up, and `u × v` is the outward normal.
    ///
    /// The same frame is the screen basis of the orthographic camera that
    /// looks at this face.
    pub fn frame(self) -> (Cell, Cell) {
        let x = Cell::new(1, 0, 0);
        let y = Cell::new(0, 1, 0);
        let z = Cell::new(0, 0, 1);
        match self {
            FaceId::Top => (x, y),
            FaceId::Bottom => (x, -y),
            FaceId::Front => (x, z),
            FaceId::Back => (-x, z),
            FaceId::Right => (y, z),
            FaceId::Left => (-y, z),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            FaceId::Top => "top",
            FaceId::Bottom => "bottom",
            FaceId::Front => "front",
            FaceId::Back => "back",
            FaceId::Left => "left",
            FaceId::Right => "right",
        }
    }
}

impl fmt::Display for FaceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub(crate) fn cross(a: Cell, b: Cell) -> Cell {
    Cell::new(
        a.y * b.z - a.z * b.y,
        a.z * b.x - a.x * b.z,
        a.x * b.y - a.y * b.x,
    )
}

/// Number of counter-clockwise quarter turns about `normal` taking `from` to `to`.
/// Both vectors must be unit axis vectors perpendicular to `normal`.
pub(crate) fn quarter_turns(from: Cell, to: Cell, normal: Cell) -> u8 {
    let mut w = from;
    for k in 0..4 {
        if w == to {
            return k;
        }
        w = cross(normal, w);
    }
    panic!("{to} is not a quarter turn of {from} about {normal}");
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn frames_are_right_handed() {
        for f in FaceId::ALL {
            let (u, v) = f.frame();
            assert_eq!(cross(u, v), f.normal(), "{f}");
        }
    }

    #[test]
    fn opposite_normals_cancel() {
        for f in FaceId::ALL {
            assert_eq!(f.normal() + f.opposite().normal(), Cell::ORIGIN);
            assert_eq!(FaceId::from_normal(f.normal()), Some(f));
        }
    }

    #[test]
    fn quarter_turn_counts() {
        let n = FaceId::Top.normal();
        let x = Cell::new(1, 0, 0);
        let y = Cell::new(0, 1, 0);
        assert_eq!(quarter_turns(x, x, n), 0);
        assert_eq!(quarter_turns(x, y, n), 1);
        assert_eq!(quarter_turns(x, -x, n), 2);
        assert_eq!(quarter_turns(x, -y, n), 3);
    }
}
