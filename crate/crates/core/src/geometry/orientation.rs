use super::lattice::Cell;
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;
use std::sync::OnceLock;

/// A proper rotation of the cube stored as a signed axis permutation:
/// component `i` of the image is `sign[i] * v[perm[i]]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Orientation {
    perm: [u8; 3],
    sign: [i8; 3],
}

impl Orientation {
    pub const IDENTITY: Orientation = Orientation {
        perm: [0, 1, 2],
        sign: [1, 1, 1],
    };

    /// Quarter turn about +x: (x, y, z) → (x, −z, y).
    pub const QUARTER_X: Orientation = Orientation {
        perm: [0, 2, 1],
        sign: [1, -1, 1],
    };

    /// Quarter turn about +y: (x, y, z) → (z, y, −x).
    pub const QUARTER_Y: Orientation = Orientation {
        perm: [2, 1, 0],
        sign: [1, 1, -1],
    };

    /// Quarter turn about +z: (x, y, z) → (−y, x, z).
    pub const QUARTER_Z: Orientation = Orientation {
        perm: [1, 0, 2],
        sign: [-1, 1, 1],
    };

    pub fn apply(&self, c: Cell) -> Cell {
        let v = c.to_array();
        let mut out = [0; 3];
        for i in 0..3 {
            out[i] = i32::from(self.sign[i]) * v[self.perm[i] as usize];
        }
        Cell::from_array(out)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Orientation) -> Orientation {
        let mut perm = [0; 3];
        let mut sign = [0; 3];
        for i in 0..3 {
            let j = self.perm[i] as usize;
            perm[i] = other.perm[j];
            sign[i] = self.sign[i] * other.sign[j];
        }
        Orientation { perm, sign }
    }

    pub fn inverse(&self) -> Orientation {
        let mut perm = [0; 3];
        let mut sign = [0; 3];
        for i in 0..3 {
            let j = self.perm[i] as usize;
            perm[j] = i as u8;
            sign[j] = self.sign[i];
        }
        Orientation { perm, sign }
    }

    pub fn determinant(&self) -> i32 {
        let [a, b, c] = self.perm;
        // parity of the permutation: count inversions
        let inversions = [(a, b), (a, c), (b, c)]
            .iter()
            .filter(|(p, q)| p > q)
            .count();
        let parity = if inversions % 2 == 0 { 1 } else { -1 };
        parity * self.sign.iter().map(|&s| i32::from(s)).product::<i32>()
    }

    /// Column images of the unit axes, as a matrix row-major `m[i][j]`.
    pub fn matrix(&self) -> [[i32; 3]; 3] {
        let mut m = [[0; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            row[self.perm[i] as usize] = i32::from(self.sign[i]);
        }
        m
    }
}

/// The 24 proper rotations of the cube: the closure of the x and y quarter
/// turns, in breadth-first order from the identity.
pub fn all_orientations() -> &'static [Orientation] {
    static GROUP: OnceLock<Vec<Orientation>> = OnceLock::new();
    GROUP.get_or_init(|| {
        let generators = [Orientation::QUARTER_X, Orientation::QUARTER_Y];
        let mut seen = vec![Orientation::IDENTITY];
        let mut queue = VecDeque::from([Orientation::IDENTITY]);
        while let Some(o) = queue.pop_front() {
            for g in &generators {
                let next = g.compose(&o);
                if !seen.contains(&next) {
                    seen.push(next);
                    queue.push_back(next);
                }
            }
        }
        seen
    })
}
