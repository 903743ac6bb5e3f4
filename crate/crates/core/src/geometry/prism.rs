use super::lattice::Cell;
use super::polycube::Polycube;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// Axis-aligned box of cells: `min` corner and extent per axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prism {
    pub min: Cell,
    pub size: [i32; 3],
}

impl Prism {
    pub fn volume(&self) -> i32 {
        self.size.iter().product()
    }

    pub fn contains(&self, c: Cell) -> bool {
        let (m, v) = (self.min.to_array(), c.to_array());
        (0..3).all(|i| v[i] >= m[i] && v[i] < m[i] + self.size[i])
    }

    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        let m = self.min;
        (0..self.size[2]).flat_map(move |dz| {
            (0..self.size[1]).flat_map(move |dy| {
                (0..self.size[0]).map(move |dx| Cell::new(m.x + dx, m.y + dy, m.z + dz))
            })
        })
    }
}

/// Greedy box cover: scanning cells in (z, y, x) order, each unassigned cell
/// starts a box that is extended along x, then y, then z while the whole
/// next row/slab is free and occupied.
pub fn merge_prisms(p: &Polycube) -> Vec<Prism> {
    let mut free: BTreeSet<Cell> = p.cells().clone();
    let mut order: Vec<Cell> = free.iter().copied().collect();
    order.sort_by_key(|c| (c.z, c.y, c.x));
    let mut prisms = Vec::new();
    for start in order {
        if !free.contains(&start) {
            continue;
        }
        let mut size = [1, 1, 1];
        for axis in 0..3 {
            loop {
                let mut grown = size;
                grown[axis] += 1;
                let slab = Prism { min: start, size: grown };
                let ok = slab
                    .cells()
                    .filter(|c| c.to_array()[axis] == start.to_array()[axis] + grown[axis] - 1)
                    .all(|c| free.contains(&c));
                if !ok {
                    break;
                }
                size = grown;
            }
        }
        let prism = Prism { min: start, size };
        for c in prism.cells() {
            free.remove(&c);
        }
        prisms.push(prism);
    }
    prisms
}
