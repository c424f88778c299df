//! Initialization sweep run before the cluster decoder.
//!
//! The sweep visits every defect in `(t, x, y)` order and searches the
//! 1-connected plaquette paths leaving it, level by level. Levels are
//! ordered by path length and, within equal length, by descending path
//! degeneracy (the number of monotone step orderings realizing the same
//! displacement). The first path whose total charge vanishes mod d is
//! annihilated by fusing along it; spatial moves emit corrections, time
//! moves do not, and nothing ever fuses to a physical or time boundary
//! here. Breaking long neutral defect strings this way disrupts syndrome
//! percolation before clustering begins.

use thiserror::Error;

use crate::history::{ChangesHistory, CorrectionHistory, Defect, GridDims};
use crate::lattice::{transport_into, Charge, CodeGeometry, QuditDim};

/// Deepest supported initialization level.
pub const MAX_INIT_DEPTH: u32 = 4;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum InitError {
    #[error("initialization level must be in 1..=4, got {0}")]
    UnsupportedLevel(u32),
    #[error("displacement must have at least one step")]
    EmptyDisplacement,
}

/// Unsigned per-axis step counts of a path displacement, with the number of
/// distinct monotone paths realizing it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DisplacementClass {
    pub steps_t: u32,
    pub steps_x: u32,
    pub steps_y: u32,
    pub degeneracy: u64,
}

/// Number of monotone lattice paths with the given per-axis step counts:
/// the multinomial `(a+b+c)! / (a! b! c!)`.
pub fn degeneracy(steps_t: u32, steps_x: u32, steps_y: u32) -> Result<u64, InitError> {
    if steps_t == 0 && steps_x == 0 && steps_y == 0 {
        return Err(InitError::EmptyDisplacement);
    }
    let factorial = |n: u32| -> u64 { (1..=n as u64).product::<u64>().max(1) };
    Ok(factorial(steps_t + steps_x + steps_y)
        / (factorial(steps_t) * factorial(steps_x) * factorial(steps_y)))
}

/// One initialization level: its displacement classes and the worst-case
/// number of paths searched per bulk defect.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InitLevel {
    pub index: u32,
    pub classes: Vec<DisplacementClass>,
    pub paths_per_bulk_defect: u32,
}

/// The four levels, ordered by ascending path distance and descending
/// degeneracy within equal distance. Bulk path counts are 6, 24, 6, 48.
pub fn level_catalog(index: u32) -> Result<InitLevel, InitError> {
    let make = |steps: [(u32, u32, u32); 3]| -> Vec<DisplacementClass> {
        steps
            .iter()
            .map(|&(t, x, y)| DisplacementClass {
                steps_t: t,
                steps_x: x,
                steps_y: y,
                degeneracy: degeneracy(t, x, y).unwrap(),
            })
            .collect()
    };
    let level = match index {
        1 => InitLevel {
            index,
            classes: make([(1, 0, 0), (0, 1, 0), (0, 0, 1)]),
            paths_per_bulk_defect: 6,
        },
        2 => InitLevel {
            index,
            classes: make([(1, 1, 0), (1, 0, 1), (0, 1, 1)]),
            paths_per_bulk_defect: 24,
        },
        3 => InitLevel {
            index,
            classes: make([(2, 0, 0), (0, 2, 0), (0, 0, 2)]),
            paths_per_bulk_defect: 6,
        },
        4 => InitLevel {
            index,
            classes: vec![DisplacementClass {
                steps_t: 1,
                steps_x: 1,
                steps_y: 1,
                degeneracy: 6,
            }],
            paths_per_bulk_defect: 48,
        },
        other => return Err(InitError::UnsupportedLevel(other)),
    };
    Ok(level)
}

/// A path of plaquette cells, starting at the central defect.
pub type Path = Vec<(u32, u32, u32)>;

fn signed_step(cell: (i64, i64, i64), axis: usize, sign: i64) -> (i64, i64, i64) {
    match axis {
        0 => (cell.0 + sign, cell.1, cell.2),
        1 => (cell.0, cell.1 + sign, cell.2),
        _ => (cell.0, cell.1, cell.2 + sign),
    }
}

fn extend_paths(
    paths: &mut Vec<Path>,
    current: &mut Vec<(i64, i64, i64)>,
    remaining: [u32; 3],
    signs: [i64; 3],
    dims: &GridDims,
) {
    if remaining == [0, 0, 0] {
        paths.push(
            current
                .iter()
                .map(|&(t, x, y)| (t as u32, x as u32, y as u32))
                .collect(),
        );
        return;
    }
    // Axis order t, x, y gives the documented deterministic search order.
    for axis in 0..3 {
        if remaining[axis] == 0 {
            continue;
        }
        let next = signed_step(*current.last().unwrap(), axis, signs[axis]);
        if !dims.contains(next.0, next.1, next.2) {
            continue;
        }
        let mut rest = remaining;
        rest[axis] -= 1;
        current.push(next);
        extend_paths(paths, current, rest, signs, dims);
        current.pop();
    }
}

/// All monotone unit-step paths leaving `defect` that realize the level's
/// displacement classes, clipped to the grid. Classes are scanned in catalog
/// order; signs enumerate `+` before `-` per axis in `t, x, y` order; step
/// orderings follow the same axis order. A bulk defect sees exactly
/// `paths_per_bulk_defect` paths.
pub fn enumerate_paths(defect: (u32, u32, u32), level: &InitLevel, dims: &GridDims) -> Vec<Path> {
    let mut paths = Vec::new();
    let start = (defect.0 as i64, defect.1 as i64, defect.2 as i64);
    for class in &level.classes {
        let counts = [class.steps_t, class.steps_x, class.steps_y];
        let mut sign_options: Vec<[i64; 3]> = vec![[1, 1, 1]];
        for axis in 0..3 {
            if counts[axis] == 0 {
                continue;
            }
            sign_options = sign_options
                .into_iter()
                .flat_map(|signs| {
                    let mut neg = signs;
                    neg[axis] = -1;
                    [signs, neg]
                })
                .collect();
        }
        for signs in sign_options {
            // Skip sign choices whose endpoint leaves the grid; monotone
            // paths to an in-grid endpoint never leave the grid box.
            let endpoint = (
                start.0 + signs[0] * counts[0] as i64,
                start.1 + signs[1] * counts[1] as i64,
                start.2 + signs[2] * counts[2] as i64,
            );
            if !dims.contains(endpoint.0, endpoint.1, endpoint.2) {
                continue;
            }
            let mut current = vec![start];
            extend_paths(&mut paths, &mut current, counts, signs, dims);
        }
    }
    paths
}

/// Total charge along a path, central defect included, interior cells
/// counted whether or not they are trivial.
pub fn path_charge(path: &[(u32, u32, u32)], changes: &ChangesHistory) -> Charge {
    let dim = changes.qudit_dim();
    let mut total = 0;
    for &(t, x, y) in path {
        total = dim.add(total, changes.charge_at(t, x, y));
    }
    total
}

/// Outcome of the initialization sweep.
#[derive(Debug, Clone)]
pub struct InitOutcome {
    pub corrections: CorrectionHistory,
    pub reduced: ChangesHistory,
    /// Neutral paths annihilated, per level run.
    pub annihilated: Vec<usize>,
}

/// Run initialization levels `1..=depth` over the changes history. Depth 0
/// is the identity.
pub fn initialize(changes: &ChangesHistory, depth: u32, geometry: &CodeGeometry) -> InitOutcome {
    assert!(
        depth <= MAX_INIT_DEPTH,
        "initialization depth must be in 0..=4, got {depth}"
    );
    let dims = changes.dims();
    let dim = changes.qudit_dim();
    let mut corrections = CorrectionHistory::zeros(geometry, dims.steps);
    let mut annihilated = Vec::new();

    // Dense working copy of S'; fused cells are zeroed in place.
    let mut grid = vec![0u32; dims.cell_count()];
    for defect in changes.defects() {
        grid[dims.cell_index(defect.t, defect.x, defect.y)] = defect.charge;
    }

    for level_index in 1..=depth {
        let level = level_catalog(level_index).unwrap();
        let mut fused_this_level = 0usize;
        // Snapshot of the live defects, swept once in (t, x, y) order.
        let sweep: Vec<(u32, u32, u32)> = collect_cells(&grid, &dims);
        for cell in sweep {
            let center_charge = grid[dims.cell_index(cell.0, cell.1, cell.2)];
            if center_charge == 0 {
                continue; // annihilated earlier in this sweep
            }
            let paths = enumerate_paths(cell, &level, &dims);
            for path in &paths {
                let endpoint = *path.last().unwrap();
                if grid[dims.cell_index(endpoint.0, endpoint.1, endpoint.2)] == 0 {
                    continue; // vacuous match, the far end must be a defect
                }
                let total = path.iter().fold(0, |acc, &(t, x, y)| {
                    dim.add(acc, grid[dims.cell_index(t, x, y)])
                });
                if total != 0 {
                    continue;
                }
                annihilate_path(path, &mut grid, &dims, dim, geometry, &mut corrections);
                fused_this_level += 1;
                break; // first neutral path wins; continue with next defect
            }
        }
        annihilated.push(fused_this_level);
    }

    let reduced = ChangesHistory::from_defects(
        dims,
        dim,
        collect_cells(&grid, &dims)
            .into_iter()
            .map(|(t, x, y)| Defect {
                t,
                x,
                y,
                charge: grid[dims.cell_index(t, x, y)],
            })
            .collect(),
    );
    InitOutcome {
        corrections,
        reduced,
        annihilated,
    }
}

fn collect_cells(grid: &[u32], dims: &GridDims) -> Vec<(u32, u32, u32)> {
    let mut cells = Vec::new();
    for t in 0..dims.steps {
        for x in 0..dims.cols {
            for y in 0..dims.rows {
                if grid[dims.cell_index(t, x, y)] != 0 {
                    cells.push((t, x, y));
                }
            }
        }
    }
    cells.sort_unstable();
    cells
}

/// Fuse the whole path: carry the accumulating charge cell to cell, emitting
/// a transport operator for each spatial step, then zero every visited cell.
fn annihilate_path(
    path: &[(u32, u32, u32)],
    grid: &mut [u32],
    dims: &GridDims,
    dim: QuditDim,
    geometry: &CodeGeometry,
    corrections: &mut CorrectionHistory,
) {
    let mut carried = grid[dims.cell_index(path[0].0, path[0].1, path[0].2)];
    for pair in path.windows(2) {
        let (from, to) = (pair[0], pair[1]);
        if from.0 == to.0 {
            transport_into(
                corrections.layer_mut(from.0),
                geometry,
                dim,
                (from.1, from.2),
                (to.1, to.2),
                carried,
            );
        }
        carried = dim.add(carried, grid[dims.cell_index(to.0, to.1, to.2)]);
    }
    debug_assert_eq!(carried, 0, "annihilated path must be neutral");
    for &(t, x, y) in path {
        grid[dims.cell_index(t, x, y)] = 0;
    }
}
