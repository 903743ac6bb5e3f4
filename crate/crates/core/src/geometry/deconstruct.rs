use super::lattice::Cell;
use super::polycube::Polycube;
use super::GeometryError;
use crate::seed::{stream_rng, Stream};
use rand::seq::SliceRandom;
use rand::Rng;
use std::collections::{BTreeMap, BTreeSet};

const MAX_SPLIT_ATTEMPTS: u32 = 16;

/// Splits `p` into `k` face-connected, disjoint pieces covering every cell.
///
/// Pieces are grown from `k` random seed cells, one frontier cell at a time in
/// round-robin. Attempts that leave a single-cell piece are redrawn while the
/// shape has at least two cells per piece; the last attempt is kept anyway.
pub fn deconstruct_shape(p: &Polycube, k: usize, seed: u64) -> Result<Vec<Polycube>, GeometryError> {
    if k < 2 || p.len() < k {
        return Err(GeometryError::CannotSplit { cells: p.len(), parts: k });
    }
    let want_pairs = p.len() >= 2 * k;
    let mut last = None;
    for attempt in 0..MAX_SPLIT_ATTEMPTS {
        let stream = if attempt == 0 { Stream::Shape } else { Stream::Retry(attempt) };
        let parts = grow_regions(p, k, &mut stream_rng(seed, stream));
        let balanced = parts.iter().all(|c| c.len() >= 2);
        last = Some(parts);
        if balanced || !want_pairs {
            break;
        }
    }
    let parts = last.expect("at least one attempt");
    parts
        .into_iter()
        .map(Polycube::from_cells)
        .collect()
}

fn grow_regions<R: Rng>(p: &Polycube, k: usize, rng: &mut R) -> Vec<BTreeSet<Cell>> {
    let all: Vec<Cell> = p.cells().iter().copied().collect();
    let seeds: Vec<Cell> = all.choose_multiple(rng, k).copied().collect();
    let mut owner: BTreeMap<Cell, usize> = BTreeMap::new();
    let mut regions: Vec<BTreeSet<Cell>> = vec![BTreeSet::new(); k];
    for (i, &s) in seeds.iter().enumerate() {
        owner.insert(s, i);
        regions[i].insert(s);
    }
    while owner.len() < all.len() {
        for (i, region) in regions.iter_mut().enumerate() {
            let frontier: BTreeSet<Cell> = region
                .iter()
                .flat_map(|c| c.neighbors())
                .filter(|n| p.contains(*n) && !owner.contains_key(n))
                .collect();
            if frontier.is_empty() {
                continue;
            }
            let frontier: Vec<Cell> = frontier.into_iter().collect();
            let c = frontier[rng.gen_range(0..frontier.len())];
            owner.insert(c, i);
            region.insert(c);
        }
    }
    regions
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::create_combination_shape;

    // Independent flood fill over a plain cell set.
    fn flood_connected(cells: &BTreeSet<Cell>) -> bool {
        let Some(&start) = cells.iter().next() else { return false };
        let mut seen = BTreeSet::from([start]);
        let mut stack = vec![start];
        while let Some(c) = stack.pop() {
            for d in [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)] {
                let n = Cell::new(c.x + d.0, c.y + d.1, c.z + d.2);
                if cells.contains(&n) && seen.insert(n) {
                    stack.push(n);
                }
            }
        }
        seen.len() == cells.len()
    }

    #[test]
    fn domino_splits_into_two_cubes() {
        let d = Polycube::from_cells([Cell::new(0, 0, 0), Cell::new(1, 0, 0)]).unwrap();
        let parts = deconstruct_shape(&d, 2, 1).unwrap();
        assert_eq!(parts.len(), 2);
        assert!(parts.iter().all(|p| p.len() == 1));
    }

    #[test]
    fn partitions_are_exact_and_connected() {
        for seed in 0..200 {
            let p = create_combination_shape(seed, (6, 15)).unwrap();
            let k = 2 + (seed as usize % 3);
            let parts = deconstruct_shape(&p, k, seed).unwrap();
            assert_eq!(parts.len(), k);
            let mut union = BTreeSet::new();
            for part in &parts {
                assert!(flood_connected(part.cells()));
                for c in part.cells() {
                    assert!(union.insert(*c), "pieces overlap");
                }
            }
            assert_eq!(&union, p.cells());
        }
    }

    #[test]
    fn ten_cells_three_parts() {
        let p = create_combination_shape(17, (10, 10)).unwrap();
        let parts = deconstruct_shape(&p, 3, 17).unwrap();
        assert!(parts.iter().all(|c| flood_connected(c.cells())));
        assert_eq!(deconstruct_shape(&p, 3, 17).unwrap(), parts);
    }

    #[test]
    fn too_small_is_rejected() {
        assert!(matches!(
            deconstruct_shape(&Polycube::single(), 2, 0),
            Err(GeometryError::CannotSplit { cells: 1, parts: 2 })
        ));
    }
}
