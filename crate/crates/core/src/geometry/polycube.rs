use super::lattice::Cell;
use super::orientation::{all_orientations, Orientation};
use super::GeometryError;
use crate::seed::{stream_rng, Stream};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, VecDeque};

/// Generation restarts allowed when growth runs out of room in the arena.
pub const MAX_GROWTH_RETRIES: u32 = 64;

/// A face-connected set of unit cells together with the order in which the
/// cells were added.
///
/// Equality compares cell sets only; two polycubes grown in different orders
/// are the same solid.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "Vec<Cell>", into = "Vec<Cell>")]
pub struct Polycube {
    cells: BTreeSet<Cell>,
    growth: Vec<Cell>,
}

impl PartialEq for Polycube {
    fn eq(&self, other: &Self) -> bool {
        self.cells == other.cells
    }
}

impl Eq for Polycube {}

impl TryFrom<Vec<Cell>> for Polycube {
    type Error = GeometryError;
    fn try_from(growth: Vec<Cell>) -> Result<Self, Self::Error> {
        Polycube::from_growth(growth)
    }
}

impl From<Polycube> for Vec<Cell> {
    fn from(p: Polycube) -> Vec<Cell> {
        p.growth
    }
}

impl Polycube {
    pub fn single() -> Self {
        Polycube {
            cells: BTreeSet::from([Cell::ORIGIN]),
            growth: vec![Cell::ORIGIN],
        }
    }

    /// Builds from a growth order; every cell after the first must touch an
    /// earlier one.
    pub fn from_growth(growth: Vec<Cell>) -> Result<Self, GeometryError> {
        if growth.is_empty() {
            return Err(GeometryError::Empty);
        }
        let mut cells = BTreeSet::new();
        for (i, &c) in growth.iter().enumerate() {
            if i > 0 && !c.neighbors().iter().any(|n| cells.contains(n)) {
                return Err(GeometryError::Disconnected(c));
            }
            if !cells.insert(c) {
                return Err(GeometryError::DuplicateCell(c));
            }
        }
        Ok(Polycube { cells, growth })
    }

    /// Builds from an unordered cell set, deriving a breadth-first growth
    /// order from the smallest cell.
    pub fn from_cells<I: IntoIterator<Item = Cell>>(cells: I) -> Result<Self, GeometryError> {
        let cells: BTreeSet<Cell> = cells.into_iter().collect();
        let first = *cells.iter().next().ok_or(GeometryError::Empty)?;
        let growth = connected_order(&cells, &[first]);
        if growth.len() != cells.len() {
            let stray = cells.iter().find(|c| !growth.contains(c)).copied();
            return Err(GeometryError::Disconnected(stray.unwrap_or(first)));
        }
        Ok(Polycube { cells, growth })
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cells(&self) -> &BTreeSet<Cell> {
        &self.cells
    }

    pub fn growth(&self) -> &[Cell] {
        &self.growth
    }

    pub fn contains(&self, c: Cell) -> bool {
        self.cells.contains(&c)
    }

    /// Inclusive bounds `(min, max)` of the occupied cells.
    pub fn bounds(&self) -> (Cell, Cell) {
        let mut lo = [i32::MAX; 3];
        let mut hi = [i32::MIN; 3];
        for c in &self.cells {
            for (i, v) in c.to_array().into_iter().enumerate() {
                lo[i] = lo[i].min(v);
                hi[i] = hi[i].max(v);
            }
        }
        (Cell::from_array(lo), Cell::from_array(hi))
    }

    /// Extent in cells along each axis.
    pub fn size(&self) -> [i32; 3] {
        let (lo, hi) = self.bounds();
        [hi.x - lo.x + 1, hi.y - lo.y + 1, hi.z - lo.z + 1]
    }

    pub fn translated(&self, offset: Cell) -> Polycube {
        Polycube {
            cells: self.cells.iter().map(|&c| c + offset).collect(),
            growth: self.growth.iter().map(|&c| c + offset).collect(),
        }
    }

    /// Translated so the minimum corner sits at the origin.
    pub fn normalized(&self) -> Polycube {
        let (lo, _) = self.bounds();
        self.translated(-lo)
    }

    /// Image under `o`, normalized to the origin. Growth order is carried
    /// cell by cell.
    pub fn rotate(&self, o: &Orientation) -> Polycube {
        let growth: Vec<Cell> = self.growth.iter().map(|&c| o.apply(c)).collect();
        Polycube {
            cells: growth.iter().copied().collect(),
            growth,
        }
        .normalized()
    }

    /// Lexicographically smallest sorted cell list over all 24 orientations.
    pub fn canonical_form(&self) -> Polycube {
        let mut best: Option<(Vec<Cell>, Polycube)> = None;
        for o in all_orientations() {
            let r = self.rotate(o);
            let key: Vec<Cell> = r.cells.iter().copied().collect();
            if best.as_ref().is_none_or(|(k, _)| key < *k) {
                best = Some((key, r));
            }
        }
        best.expect("rotation group is non-empty").1
    }

    /// Sorted cells of the canonical form; equal keys mean rotation-equivalent.
    pub fn canonical_key(&self) -> Vec<Cell> {
        self.canonical_form().cells.into_iter().collect()
    }

    pub fn is_rotation_of(&self, other: &Polycube) -> bool {
        self.len() == other.len() && self.canonical_key() == other.canonical_key()
    }

    /// Empty cells sharing a face with the shape, sorted.
    pub fn frontier(&self) -> Vec<Cell> {
        let set: BTreeSet<Cell> = self
            .cells
            .iter()
            .flat_map(|c| c.neighbors())
            .filter(|n| !self.cells.contains(n))
            .collect();
        set.into_iter().collect()
    }

    pub fn is_connected(&self) -> bool {
        is_connected(&self.cells)
    }

    /// Cells whose removal keeps the remainder non-empty and connected.
    pub fn removable_cells(&self) -> Vec<Cell> {
        if self.len() < 2 {
            return Vec::new();
        }
        self.cells
            .iter()
            .copied()
            .filter(|c| {
                let mut rest = self.cells.clone();
                rest.remove(c);
                is_connected(&rest)
            })
            .collect()
    }

    /// Shape with `c` removed; the growth order keeps the original relative
    /// order as far as connectivity allows.
    pub fn without(&self, c: Cell) -> Result<Polycube, GeometryError> {
        let rest: Vec<Cell> = self.growth.iter().copied().filter(|&g| g != c).collect();
        let set: BTreeSet<Cell> = rest.iter().copied().collect();
        if set.is_empty() {
            return Err(GeometryError::Empty);
        }
        let order = reorder_growth(&rest);
        if order.len() != set.len() {
            return Err(GeometryError::Disconnected(c));
        }
        Ok(Polycube {
            cells: set,
            growth: order,
        })
    }

    /// Shape with `c` appended to the growth.
    pub fn with(&self, c: Cell) -> Result<Polycube, GeometryError> {
        let mut growth = self.growth.clone();
        growth.push(c);
        Polycube::from_growth(growth)
    }
}

pub(crate) fn is_connected(cells: &BTreeSet<Cell>) -> bool {
    match cells.iter().next() {
        None => false,
        Some(&first) => connected_order(cells, &[first]).len() == cells.len(),
    }
}

/// Breadth-first order of the cells reachable from `starts`.
fn connected_order(cells: &BTreeSet<Cell>, starts: &[Cell]) -> Vec<Cell> {
    let mut seen: BTreeSet<Cell> = starts.iter().copied().collect();
    let mut order: Vec<Cell> = starts.to_vec();
    let mut queue: VecDeque<Cell> = starts.iter().copied().collect();
    while let Some(c) = queue.pop_front() {
        for n in c.neighbors() {
            if cells.contains(&n) && seen.insert(n) {
                order.push(n);
                queue.push_back(n);
            }
        }
    }
    order
}

/// Stable re-sequencing: repeatedly takes the earliest listed cell that
/// touches what has been placed so far.
pub(crate) fn reorder_growth(list: &[Cell]) -> Vec<Cell> {
    let mut pending: Vec<Cell> = list.to_vec();
    let mut placed: BTreeSet<Cell> = BTreeSet::new();
    let mut order = Vec::with_capacity(list.len());
    if pending.is_empty() {
        return order;
    }
    let first = pending.remove(0);
    placed.insert(first);
    order.push(first);
    while let Some(pos) = pending
        .iter()
        .position(|c| c.neighbors().iter().any(|n| placed.contains(n)))
    {
        let c = pending.remove(pos);
        placed.insert(c);
        order.push(c);
    }
    order
}

/// Grows a random face-connected shape: the cell count is uniform in
/// `[lo, hi]` and each new cell is uniform among the empty face-neighbours
/// of the current shape (restricted to the arena). Normalized to the origin.
pub fn create_combination_shape(seed: u64, cell_range: (usize, usize)) -> Result<Polycube, GeometryError> {
    let (lo, hi) = cell_range;
    if lo == 0 || lo > hi {
        return Err(GeometryError::DegenerateRange { lo, hi });
    }
    let mut rng = stream_rng(seed, Stream::Shape);
    let target = rng.gen_range(lo..=hi);
    for attempt in 0..MAX_GROWTH_RETRIES {
        if attempt > 0 {
            rng = stream_rng(seed, Stream::Retry(attempt));
        }
        if let Some(p) = grow(&mut rng, target) {
            return Ok(p.normalized());
        }
    }
    Err(GeometryError::ArenaOverflow)
}

fn grow(rng: &mut ChaCha8Rng, target: usize) -> Option<Polycube> {
    let mut shape = Polycube::single();
    while shape.len() < target {
        let frontier: Vec<Cell> = shape.frontier().into_iter().filter(|c| c.in_arena()).collect();
        if frontier.is_empty() {
            return None;
        }
        let next = frontier[rng.gen_range(0..frontier.len())];
        shape.cells.insert(next);
        shape.growth.push(next);
    }
    Some(shape)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cells(v: &[(i32, i32, i32)]) -> Polycube {
        Polycube::from_cells(v.iter().map(|&(x, y, z)| Cell::new(x, y, z))).unwrap()
    }

    #[test]
    fn single_cube_rotates_to_origin() {
        let p = Polycube::single().translated(Cell::new(4, -2, 7));
        for o in all_orientations() {
            assert_eq!(p.rotate(o), Polycube::single());
        }
        assert_eq!(p.canonical_form(), Polycube::single());
    }

    #[test]
    fn identity_rotation_normalizes() {
        let p = cells(&[(3, 3, 3), (4, 3, 3), (4, 4, 3)]);
        assert_eq!(p.rotate(&Orientation::IDENTITY), p.normalized());
    }

    #[test]
    fn domino_has_three_images() {
        let p = cells(&[(0, 0, 0), (0, 0, 1)]);
        let mut images: Vec<Vec<Cell>> = all_orientations()
            .iter()
            .map(|o| p.rotate(o).cells().iter().copied().collect())
            .collect();
        images.sort();
        images.dedup();
        assert_eq!(images.len(), 3);
    }

    #[test]
    fn l_tromino_rotations_share_canonical_form() {
        let l = cells(&[(0, 0, 0), (1, 0, 0), (1, 1, 0)]);
        let key = l.canonical_key();
        for o in all_orientations() {
            assert_eq!(l.rotate(o).canonical_key(), key);
        }
    }

    #[test]
    fn one_cell_difference_changes_canonical_form() {
        let a = cells(&[(0, 0, 0), (1, 0, 0), (2, 0, 0), (2, 1, 0), (2, 1, 1)]);
        let b = cells(&[(0, 0, 0), (1, 0, 0), (2, 0, 0), (2, 1, 0), (3, 1, 0)]);
        // brute force: no rotation of b equals a
        let a_norm = a.normalized();
        assert!(all_orientations().iter().all(|o| b.rotate(o) != a_norm));
        assert_ne!(a.canonical_key(), b.canonical_key());
    }

    #[test]
    fn growth_validation() {
        assert!(matches!(Polycube::from_growth(vec![]), Err(GeometryError::Empty)));
        let gap = vec![Cell::new(0, 0, 0), Cell::new(2, 0, 0)];
        assert!(matches!(Polycube::from_growth(gap), Err(GeometryError::Disconnected(_))));
        let dup = vec![Cell::new(0, 0, 0), Cell::new(1, 0, 0), Cell::new(0, 0, 0)];
        assert!(matches!(Polycube::from_growth(dup), Err(GeometryError::DuplicateCell(_))));
    }

    #[test]
    fn combination_shape_contract() {
        for seed in 0..200u64 {
            let p = create_combination_shape(seed, (5, 15)).unwrap();
            assert!((5..=15).contains(&p.len()));
            assert!(p.is_connected());
            assert_eq!(p.growth().len(), p.len());
            assert!(Polycube::from_growth(p.growth().to_vec()).is_ok());
            assert_eq!(p.bounds().0, Cell::ORIGIN);
        }
        assert_eq!(create_combination_shape(9, (1, 1)).unwrap(), Polycube::single());
        assert!(matches!(
            create_combination_shape(9, (6, 5)),
            Err(GeometryError::DegenerateRange { lo: 6, hi: 5 })
        ));
    }

    #[test]
    fn combination_shape_is_deterministic() {
        let a = create_combination_shape(1234, (5, 15)).unwrap();
        let b = create_combination_shape(1234, (5, 15)).unwrap();
        assert_eq!(a.growth(), b.growth());
    }

    #[test]
    fn without_keeps_growth_valid() {
        let p = cells(&[(0, 0, 0), (1, 0, 0), (2, 0, 0), (2, 1, 0)]);
        for c in p.removable_cells() {
            let q = p.without(c).unwrap();
            assert_eq!(q.len(), 3);
            assert!(Polycube::from_growth(q.growth().to_vec()).is_ok());
        }
        // middle of a bar is an articulation cell
        assert!(!p.removable_cells().contains(&Cell::new(1, 0, 0)));
    }

    #[test]
    fn serde_round_trips_growth() {
        let p = create_combination_shape(5, (5, 9)).unwrap();
        let json = serde_json::to_string(&p).unwrap();
        let back: Polycube = serde_json::from_str(&json).unwrap();
        assert_eq!(back.growth(), p.growth());
    }
}
