//! Hard-decision renormalization-group decoder over the syndrome-changes
//! history.
//!
//! Levels run with connectivity `delta = 2^level` starting at level 0. At
//! each level the defects are partitioned into maximal `delta`-connected
//! clusters under the Manhattan metric; neutral clusters fuse locally,
//! clusters within `delta` of a smooth boundary (south, north, or the future
//! time boundary) fuse into that boundary, and charged clusters survive to
//! the next level. Corrections committed at one level are never revisited.

use serde::Serialize;

use crate::history::{ChangesHistory, CorrectionHistory, Defect, GridDims};
use crate::lattice::{
    transport_into, transport_to_boundary_into, Charge, CodeGeometry, QuditDim, SpatialBoundary,
};

/// Manhattan distance in spacetime, `|dt| + |dx| + |dy|`.
#[inline]
pub fn manhattan(a: &Defect, b: &Defect) -> u32 {
    a.t.abs_diff(b.t) + a.x.abs_diff(b.x) + a.y.abs_diff(b.y)
}

/// The three smooth boundaries a cluster can fuse into.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BoundaryKind {
    South,
    North,
    /// The open future end of the time axis; fusing here emits no operator.
    Time,
}

/// Decoder options. The metric (Manhattan) and the level schedule
/// (`delta = 2^level`) are fixed.
#[derive(Debug, Clone, Copy)]
pub struct DecoderConfig {
    /// Whether the future time boundary may absorb charge. True for the
    /// fault-tolerant 3D decode; false for the final noise-free 2D round,
    /// which must fix every residual error physically.
    pub time_boundary_open: bool,
    /// Cap on the number of levels; `None` derives `ceil(log2(L + T))`.
    pub max_level: Option<u32>,
}

impl DecoderConfig {
    pub fn fault_tolerant() -> Self {
        DecoderConfig {
            time_boundary_open: true,
            max_level: None,
        }
    }

    pub fn noise_free_2d() -> Self {
        DecoderConfig {
            time_boundary_open: false,
            max_level: None,
        }
    }

    fn level_cap(&self, dims: &GridDims) -> u32 {
        self.max_level.unwrap_or_else(|| {
            (dims.cols + dims.rows + dims.steps)
                .next_power_of_two()
                .ilog2()
                + 1
        })
    }
}

impl Default for DecoderConfig {
    fn default() -> Self {
        DecoderConfig::fault_tolerant()
    }
}

/// A maximal `delta`-connected set of defects, with its total charge and the
/// closest smooth boundary any member can reach.
#[derive(Debug, Clone)]
pub struct Cluster {
    /// Indices into the defect slice, sorted by `(t, x, y)`.
    pub members: Vec<usize>,
    pub charge: Charge,
    pub nearest_boundary: (BoundaryKind, u32),
}

/// Classification of a cluster at a given connectivity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClusterClass {
    Neutral,
    BoundaryNeutral(BoundaryKind),
    Charged,
}

/// Distance from a defect to each smooth boundary. Rows are 0-based, so a
/// defect on plaquette row `y` is `y + 1` steps from the south boundary and
/// `rows - y` from the north; the future time boundary is `steps - t` away
/// and the past boundary is closed.
fn boundary_distances(
    defect: &Defect,
    dims: &GridDims,
    time_open: bool,
) -> [(BoundaryKind, u32); 3] {
    [
        (BoundaryKind::South, defect.y + 1),
        (BoundaryKind::North, dims.rows - defect.y),
        (
            BoundaryKind::Time,
            if time_open {
                dims.steps - defect.t
            } else {
                u32::MAX
            },
        ),
    ]
}

struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n as u32).collect(),
        }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            // Path halving.
            let grandparent = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = grandparent;
            x = grandparent;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra != rb {
            // Deterministic: smaller root wins.
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi as usize] = lo;
        }
    }
}

/// Occupancy grid mapping cells to defect indices, used to probe the
/// Manhattan ball around each defect instead of scanning all pairs.
struct DefectGrid {
    dims: GridDims,
    cells: Vec<i32>,
}

impl DefectGrid {
    fn build(defects: &[Defect], alive: &[bool], dims: GridDims) -> Self {
        let mut cells = vec![-1i32; dims.cell_count()];
        for (idx, defect) in defects.iter().enumerate() {
            if alive[idx] {
                cells[dims.cell_index(defect.t, defect.x, defect.y)] = idx as i32;
            }
        }
        DefectGrid { dims, cells }
    }

    fn clear(&mut self, defect: &Defect) {
        self.cells[self.dims.cell_index(defect.t, defect.x, defect.y)] = -1;
    }

    #[inline]
    fn get(&self, t: i64, x: i64, y: i64) -> Option<usize> {
        if !self.dims.contains(t, x, y) {
            return None;
        }
        let idx = self.cells[self.dims.cell_index(t as u32, x as u32, y as u32)];
        (idx >= 0).then_some(idx as usize)
    }
}

/// Union every pair of live defects within `delta`, probing only the
/// lexicographically forward half of each Manhattan ball.
fn link_neighbors(
    defects: &[Defect],
    alive: &[bool],
    grid: &DefectGrid,
    delta: u32,
    uf: &mut UnionFind,
) {
    let delta = delta as i64;
    for (idx, defect) in defects.iter().enumerate() {
        if !alive[idx] {
            continue;
        }
        let (t, x, y) = (defect.t as i64, defect.x as i64, defect.y as i64);
        for dt in 0..=delta {
            let rem_t = delta - dt;
            let dx_lo = if dt == 0 { 0 } else { -rem_t };
            for dx in dx_lo..=rem_t {
                let rem_x = rem_t - dx.abs();
                let dy_lo = if dt == 0 && dx == 0 { 1 } else { -rem_x };
                for dy in dy_lo..=rem_x {
                    if let Some(other) = grid.get(t + dt, x + dx, y + dy) {
                        uf.union(idx as u32, other as u32);
                    }
                }
            }
        }
    }
}

fn collect_clusters(
    defects: &[Defect],
    alive: &[bool],
    dims: &GridDims,
    dim: QuditDim,
    time_open: bool,
    uf: &mut UnionFind,
) -> Vec<Cluster> {
    let mut by_root: Vec<(u32, usize)> = (0..defects.len())
        .filter(|&i| alive[i])
        .map(|i| (uf.find(i as u32), i))
        .collect();
    by_root.sort_unstable();
    let mut clusters: Vec<Cluster> = Vec::new();
    let mut current_root = u32::MAX;
    for (root, idx) in by_root {
        if root != current_root {
            clusters.push(Cluster {
                members: Vec::new(),
                charge: 0,
                nearest_boundary: (BoundaryKind::South, u32::MAX),
            });
            current_root = root;
        }
        let cluster = clusters.last_mut().unwrap();
        let defect = &defects[idx];
        cluster.members.push(idx);
        cluster.charge = dim.add(cluster.charge, defect.charge);
        for (kind, distance) in boundary_distances(defect, dims, time_open) {
            // Strict `<` keeps the south > north > time tie order.
            if distance < cluster.nearest_boundary.1 {
                cluster.nearest_boundary = (kind, distance);
            }
        }
    }
    // Deterministic fusion order: clusters by their smallest member.
    clusters.sort_by_key(|c| {
        c.members
            .iter()
            .map(|&i| (defects[i].t, defects[i].x, defects[i].y))
            .min()
            .unwrap()
    });
    clusters
}

/// Partition `defects` into maximal `delta`-connected clusters.
pub fn cluster_defects(
    defects: &[Defect],
    delta: u32,
    dims: &GridDims,
    dim: QuditDim,
) -> Vec<Cluster> {
    assert!(delta >= 1);
    let alive = vec![true; defects.len()];
    let grid = DefectGrid::build(defects, &alive, *dims);
    let mut uf = UnionFind::new(defects.len());
    link_neighbors(defects, &alive, &grid, delta, &mut uf);
    collect_clusters(defects, &alive, dims, dim, true, &mut uf)
}

/// Neutral if the total charge vanishes mod d; otherwise boundary-neutral if
/// some member is within `delta` of a smooth boundary; otherwise charged.
pub fn classify_cluster(cluster: &Cluster, delta: u32) -> ClusterClass {
    if cluster.charge == 0 {
        ClusterClass::Neutral
    } else if cluster.nearest_boundary.1 <= delta {
        ClusterClass::BoundaryNeutral(cluster.nearest_boundary.0)
    } else {
        ClusterClass::Charged
    }
}

/// Fuse a neutral or boundary-neutral cluster, accumulating the emitted
/// spatial corrections.
///
/// Every member is transported to the cluster's lexicographically smallest
/// defect coordinate (time moves first and emit nothing, then x, then y);
/// for a boundary-neutral cluster the residual charge is then routed from
/// the meeting point into the recorded boundary. Calling this on a charged
/// cluster is a contract violation.
pub fn fuse_cluster(
    cluster: &Cluster,
    class: ClusterClass,
    defects: &[Defect],
    geometry: &CodeGeometry,
    dim: QuditDim,
    corrections: &mut CorrectionHistory,
) {
    assert!(
        class != ClusterClass::Charged,
        "cannot fuse a charged cluster"
    );
    let meeting_idx = *cluster
        .members
        .iter()
        .min_by_key(|&&i| (defects[i].t, defects[i].x, defects[i].y))
        .expect("cluster has at least one member");
    let meeting = &defects[meeting_idx];
    let layer = corrections.layer_mut(meeting.t);
    for &idx in &cluster.members {
        if idx == meeting_idx {
            continue;
        }
        let defect = &defects[idx];
        transport_into(
            layer,
            geometry,
            dim,
            (defect.x, defect.y),
            (meeting.x, meeting.y),
            defect.charge,
        );
    }
    if let ClusterClass::BoundaryNeutral(kind) = class {
        match kind {
            BoundaryKind::South => transport_to_boundary_into(
                layer,
                geometry,
                dim,
                (meeting.x, meeting.y),
                SpatialBoundary::South,
                cluster.charge,
            ),
            BoundaryKind::North => transport_to_boundary_into(
                layer,
                geometry,
                dim,
                (meeting.x, meeting.y),
                SpatialBoundary::North,
                cluster.charge,
            ),
            // Absorbed by the future time boundary: no physical operator.
            BoundaryKind::Time => {}
        }
    }
}

/// Per-level decoding statistics, one JSON line each when traced.
#[derive(Debug, Clone, Serialize)]
pub struct LevelTrace {
    pub level: u32,
    pub delta: u32,
    pub clusters: usize,
    pub fused: usize,
    pub defects_before: usize,
    pub defects_after: usize,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct DecodeTrace {
    pub levels: Vec<LevelTrace>,
}

impl DecodeTrace {
    pub fn levels_used(&self) -> u32 {
        self.levels.len() as u32
    }

    /// One JSON object per level, newline separated.
    pub fn to_json_lines(&self) -> String {
        self.levels
            .iter()
            .map(|level| serde_json::to_string(level).expect("level trace serializes"))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

/// Run the full level schedule until every defect has been annihilated.
pub fn decode_with_trace(
    changes: &ChangesHistory,
    geometry: &CodeGeometry,
    config: &DecoderConfig,
) -> (CorrectionHistory, DecodeTrace) {
    let dims = changes.dims();
    let dim = changes.qudit_dim();
    let defects = changes.defects();
    let mut corrections = CorrectionHistory::zeros(geometry, dims.steps);
    let mut trace = DecodeTrace::default();

    let mut alive = vec![true; defects.len()];
    let mut alive_count = defects.len();
    let mut grid = DefectGrid::build(defects, &alive, dims);
    let level_cap = config.level_cap(&dims);

    let mut level = 0u32;
    while alive_count > 0 {
        assert!(
            level <= level_cap,
            "decoder failed to terminate by level {level_cap}"
        );
        let delta = 1u32 << level;
        let mut uf = UnionFind::new(defects.len());
        link_neighbors(defects, &alive, &grid, delta, &mut uf);
        let clusters = collect_clusters(
            defects,
            &alive,
            &dims,
            dim,
            config.time_boundary_open,
            &mut uf,
        );
        let defects_before = alive_count;
        let mut fused = 0usize;
        // Classify everything first; fusing one cluster cannot change the
        // class of another since clusters are disjoint.
        let classified: Vec<(usize, ClusterClass)> = clusters
            .iter()
            .enumerate()
            .map(|(i, c)| (i, classify_cluster(c, delta)))
            .collect();
        for (i, class) in classified {
            if class == ClusterClass::Charged {
                continue;
            }
            let cluster = &clusters[i];
            fuse_cluster(cluster, class, defects, geometry, dim, &mut corrections);
            for &idx in &cluster.members {
                alive[idx] = false;
                grid.clear(&defects[idx]);
            }
            alive_count -= cluster.members.len();
            fused += 1;
        }
        trace.levels.push(LevelTrace {
            level,
            delta,
            clusters: clusters.len(),
            fused,
            defects_before,
            defects_after: alive_count,
        });
        level += 1;
    }
    (corrections, trace)
}

/// Decode the syndrome-changes history into a correction history.
pub fn decode(
    changes: &ChangesHistory,
    geometry: &CodeGeometry,
    config: &DecoderConfig,
) -> CorrectionHistory {
    decode_with_trace(changes, geometry, config).0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::history::single_layer_changes;
    use crate::lattice::{compute_syndrome, Edge, ErrorLayer};

    fn dim(d: u32) -> QuditDim {
        QuditDim::new(d).unwrap()
    }

    fn history(dims: GridDims, d: QuditDim, defects: Vec<Defect>) -> ChangesHistory {
        ChangesHistory::from_defects(dims, d, defects)
    }

    fn dims(steps: u32, l: u32) -> GridDims {
        GridDims {
            steps,
            cols: l,
            rows: l - 1,
        }
    }

    #[test]
    fn manhattan_examples() {
        let a = Defect {
            t: 0,
            x: 0,
            y: 0,
            charge: 1,
        };
        assert_eq!(manhattan(&a, &a), 0);
        let b = Defect {
            t: 1,
            x: 2,
            y: 3,
            charge: 1,
        };
        assert_eq!(manhattan(&a, &b), 6);
        assert_eq!(manhattan(&b, &a), 6);
    }

    #[test]
    fn clustering_by_distance() {
        let d5 = dim(5);
        let grid = dims(5, 6);
        let a = Defect {
            t: 2,
            x: 1,
            y: 2,
            charge: 1,
        };
        let b = Defect {
            t: 2,
            x: 4,
            y: 2,
            charge: 2,
        }; // distance 3 from a
        let clusters = cluster_defects(&[a, b], 2, &grid, d5);
        assert_eq!(clusters.len(), 2);
        let clusters = cluster_defects(&[a, b], 4, &grid, d5);
        assert_eq!(clusters.len(), 1);
        assert_eq!(clusters[0].charge, 3);
    }

    #[test]
    fn clustering_is_transitive() {
        let d2 = dim(2);
        let grid = dims(4, 5);
        let a = Defect {
            t: 1,
            x: 1,
            y: 1,
            charge: 1,
        };
        let b = Defect {
            t: 1,
            x: 2,
            y: 1,
            charge: 1,
        };
        let c = Defect {
            t: 1,
            x: 3,
            y: 1,
            charge: 1,
        };
        // a-b and b-c are 1-connected, a-c is not, yet one cluster forms.
        let clusters = cluster_defects(&[a, b, c], 1, &grid, d2);
        assert_eq!(clusters.len(), 1);
        assert_eq!(clusters[0].members.len(), 3);
    }

    #[test]
    fn classification_rules() {
        let d5 = dim(5);
        let grid = dims(9, 9);
        // Charges 2 + 3 = 5 = 0 mod 5: neutral.
        let pair = vec![
            Defect {
                t: 4,
                x: 4,
                y: 4,
                charge: 2,
            },
            Defect {
                t: 4,
                x: 4,
                y: 5,
                charge: 3,
            },
        ];
        let clusters = cluster_defects(&pair, 1, &grid, d5);
        assert_eq!(classify_cluster(&clusters[0], 1), ClusterClass::Neutral);

        // A lone charge on the southmost row is boundary-neutral at delta 1.
        let south = vec![Defect {
            t: 4,
            x: 4,
            y: 0,
            charge: 1,
        }];
        let clusters = cluster_defects(&south, 1, &grid, d5);
        assert_eq!(
            classify_cluster(&clusters[0], 1),
            ClusterClass::BoundaryNeutral(BoundaryKind::South)
        );

        // A lone bulk charge far from every boundary stays charged.
        let bulk = vec![Defect {
            t: 4,
            x: 4,
            y: 4,
            charge: 1,
        }];
        let clusters = cluster_defects(&bulk, 1, &grid, d5);
        assert_eq!(classify_cluster(&clusters[0], 1), ClusterClass::Charged);
    }

    #[test]
    fn empty_history_decodes_to_empty_correction() {
        let g = CodeGeometry::new(5).unwrap();
        let d = dim(5);
        let changes = history(dims(5, 5), d, Vec::new());
        let (f, trace) = decode_with_trace(&changes, &g, &DecoderConfig::fault_tolerant());
        assert_eq!(f.total_weight(), 0);
        assert_eq!(trace.levels_used(), 0);
    }

    #[test]
    fn neutral_pair_fuses_with_single_edge() {
        // An actual single-edge error in 2D: decode must invert it exactly.
        let g = CodeGeometry::new(5).unwrap();
        let d = dim(5);
        let mut e = ErrorLayer::zeros(&g);
        e.set(&g, Edge::Vertical { x: 2, y: 2 }, 3);
        let syndrome = compute_syndrome(&e, &g, d);
        let changes = single_layer_changes(&syndrome, &g, d);
        assert_eq!(changes.defect_count(), 2);
        let f = decode(&changes, &g, &DecoderConfig::noise_free_2d());
        let projected = crate::history::project_correction(&f, &g, d);
        assert_eq!(projected.weight(), 1);
        assert!(compute_syndrome(&e.compose(&projected, d), &g, d).is_zero());
    }

    #[test]
    fn measurement_error_pair_fuses_in_time_with_no_correction() {
        let g = CodeGeometry::new(5).unwrap();
        let d = dim(5);
        let defects = vec![
            Defect {
                t: 1,
                x: 2,
                y: 2,
                charge: 4,
            },
            Defect {
                t: 2,
                x: 2,
                y: 2,
                charge: 1,
            },
        ];
        let changes = history(dims(5, 5), d, defects);
        let (f, trace) = decode_with_trace(&changes, &g, &DecoderConfig::fault_tolerant());
        assert_eq!(f.total_weight(), 0);
        assert_eq!(trace.levels_used(), 1);
    }

    #[test]
    fn boundary_singleton_gets_one_boundary_edge() {
        let g = CodeGeometry::new(5).unwrap();
        let d = dim(5);
        let defects = vec![Defect {
            t: 0,
            x: 3,
            y: 0,
            charge: 2,
        }];
        let changes = history(dims(1, 5), d, defects);
        let f = decode(&changes, &g, &DecoderConfig::noise_free_2d());
        let projected = crate::history::project_correction(&f, &g, d);
        assert_eq!(projected.weight(), 1);
        // The emitted operator must cancel the defect.
        let s = compute_syndrome(&projected, &g, d);
        assert_eq!(s.get(&g, 3, 0), d.neg(2));
    }

    #[test]
    fn distant_pair_waits_for_level_two() {
        // Complementary charges at Manhattan distance 3 in the bulk: not
        // connected at delta 1 or 2, fused at delta 4 (level 2).
        let g = CodeGeometry::new(9).unwrap();
        let d = dim(5);
        let defects = vec![
            Defect {
                t: 4,
                x: 3,
                y: 4,
                charge: 2,
            },
            Defect {
                t: 4,
                x: 6,
                y: 4,
                charge: 3,
            },
        ];
        let changes = history(dims(9, 9), d, defects);
        let (_, trace) = decode_with_trace(&changes, &g, &DecoderConfig::fault_tolerant());
        assert_eq!(trace.levels_used(), 3, "fused at level 2, delta 4");
        assert_eq!(trace.levels[0].fused, 0);
        assert_eq!(trace.levels[1].fused, 0);
        assert_eq!(trace.levels[2].fused, 1);
    }

    #[test]
    fn defect_count_is_monotone_across_levels() {
        use rand::{Rng, SeedableRng};
        let g = CodeGeometry::new(6).unwrap();
        let d = dim(3);
        let grid = dims(6, 6);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for _ in 0..50 {
            let mut defects = Vec::new();
            for t in 0..grid.steps {
                for x in 0..grid.cols {
                    for y in 0..grid.rows {
                        if rng.random::<f64>() < 0.05 {
                            defects.push(Defect {
                                t,
                                x,
                                y,
                                charge: rng.random_range(1..3),
                            });
                        }
                    }
                }
            }
            let changes = history(grid, d, defects);
            let (_, trace) = decode_with_trace(&changes, &g, &DecoderConfig::fault_tolerant());
            let mut last = usize::MAX;
            for level in &trace.levels {
                assert!(level.defects_after <= level.defects_before);
                assert!(level.defects_before <= last);
                if level.fused > 0 {
                    assert!(level.defects_after < level.defects_before);
                }
                last = level.defects_after;
            }
            assert_eq!(trace.levels.last().unwrap().defects_after, 0);
        }
    }

    #[test]
    fn neutral_cluster_corrections_stay_in_bounding_box() {
        let g = CodeGeometry::new(9).unwrap();
        let d = dim(7);
        let defects = vec![
            Defect {
                t: 3,
                x: 2,
                y: 3,
                charge: 2,
            },
            Defect {
                t: 3,
                x: 3,
                y: 4,
                charge: 5,
            },
            Defect {
                t: 4,
                x: 3,
                y: 3,
                charge: 0,
            },
        ];
        let changes = history(dims(9, 9), d, defects);
        let f = decode(&changes, &g, &DecoderConfig::fault_tolerant());
        let projected = crate::history::project_correction(&f, &g, d);
        for idx in 0..g.edge_count() {
            if projected.charges()[idx] == 0 {
                continue;
            }
            let (x, y) = match g.edge_at(idx) {
                Edge::Vertical { x, y } => (x, y),
                Edge::Horizontal { x, y } => (x, y),
            };
            assert!((2..=3).contains(&x), "edge column {x} outside box");
            assert!((3..=4).contains(&y), "edge row {y} outside box");
        }
    }

    #[test]
    fn decode_is_deterministic() {
        use rand::{Rng, SeedableRng};
        let g = CodeGeometry::new(7).unwrap();
        let d = dim(5);
        let grid = dims(7, 7);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(41);
        let mut defects = Vec::new();
        for t in 0..grid.steps {
            for x in 0..grid.cols {
                for y in 0..grid.rows {
                    if rng.random::<f64>() < 0.08 {
                        defects.push(Defect {
                            t,
                            x,
                            y,
                            charge: rng.random_range(1..5),
                        });
                    }
                }
            }
        }
        let changes = history(grid, d, defects);
        let f1 = decode(&changes, &g, &DecoderConfig::fault_tolerant());
        let f2 = decode(&changes, &g, &DecoderConfig::fault_tolerant());
        assert_eq!(f1, f2);
    }

    #[test]
    fn mixed_cluster_types_clear_in_two_levels() {
        // Neutral pair, boundary-neutral singleton, and a complementary
        // charged pair that only becomes 2-connected at the second level.
        let g = CodeGeometry::new(5).unwrap();
        let d = dim(5);
        let defects = vec![
            // neutral pair in the bulk
            Defect {
                t: 1,
                x: 1,
                y: 2,
                charge: 1,
            },
            Defect {
                t: 1,
                x: 1,
                y: 3,
                charge: 4,
            },
            // boundary-neutral singleton on the south row
            Defect {
                t: 2,
                x: 3,
                y: 0,
                charge: 2,
            },
            // charged singletons at distance 2, complementary charges
            Defect {
                t: 3,
                x: 2,
                y: 2,
                charge: 2,
            },
            Defect {
                t: 3,
                x: 4,
                y: 2,
                charge: 3,
            },
        ];
        let changes = history(dims(5, 5), d, defects);
        let (_, trace) = decode_with_trace(&changes, &g, &DecoderConfig::fault_tolerant());
        assert_eq!(trace.levels_used(), 2);
        assert_eq!(trace.levels[0].fused, 2);
        assert_eq!(trace.levels[1].fused, 1);
        assert_eq!(trace.levels[1].defects_after, 0);
    }
}
