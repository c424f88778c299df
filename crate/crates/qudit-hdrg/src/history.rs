//! The 3D syndrome-changes history `S'` and the projection of 3D correction
//! histories down to a single 2D operator.
//!
//! `S'` converts measurement errors into localized defect pairs in
//! spacetime: layer 0 is the first measured syndrome and layer `t` is the
//! elementwise difference (mod d) of consecutive measurements. It is stored
//! sparsely as a defect list, since below threshold almost all entries are
//! trivial.

use serde::Serialize;

use crate::lattice::{Charge, CodeGeometry, ErrorLayer, QuditDim, SyndromeLayer};

/// Shape of the spacetime grid: `steps` time layers of a `cols x rows`
/// plaquette grid (`L` columns by `L-1` rows).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridDims {
    pub steps: u32,
    pub cols: u32,
    pub rows: u32,
}

impl GridDims {
    pub fn new(geometry: &CodeGeometry, steps: u32) -> Self {
        GridDims {
            steps,
            cols: geometry.plaquette_cols(),
            rows: geometry.plaquette_rows(),
        }
    }

    #[inline]
    pub fn cell_count(&self) -> usize {
        self.steps as usize * self.cols as usize * self.rows as usize
    }

    #[inline]
    pub fn cell_index(&self, t: u32, x: u32, y: u32) -> usize {
        debug_assert!(t < self.steps && x < self.cols && y < self.rows);
        (t as usize * self.rows as usize + y as usize) * self.cols as usize + x as usize
    }

    #[inline]
    pub fn contains(&self, t: i64, x: i64, y: i64) -> bool {
        (0..self.steps as i64).contains(&t)
            && (0..self.cols as i64).contains(&x)
            && (0..self.rows as i64).contains(&y)
    }
}

/// A non-trivial entry of `S'`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Defect {
    pub t: u32,
    pub x: u32,
    pub y: u32,
    pub charge: Charge,
}

/// The syndrome-changes history `S'`: grid dimensions plus the sparse list
/// of defects, sorted lexicographically by `(t, x, y)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChangesHistory {
    dims: GridDims,
    dim: QuditDim,
    defects: Vec<Defect>,
}

impl ChangesHistory {
    pub fn from_defects(dims: GridDims, dim: QuditDim, mut defects: Vec<Defect>) -> Self {
        defects.retain(|d| d.charge != 0);
        defects.sort_by_key(|d| (d.t, d.x, d.y));
        for d in &defects {
            assert!(dims.contains(d.t as i64, d.x as i64, d.y as i64));
            assert!(d.charge < dim.get());
        }
        ChangesHistory { dims, dim, defects }
    }

    pub fn dims(&self) -> GridDims {
        self.dims
    }

    pub fn qudit_dim(&self) -> QuditDim {
        self.dim
    }

    pub fn defects(&self) -> &[Defect] {
        &self.defects
    }

    pub fn defect_count(&self) -> usize {
        self.defects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.defects.is_empty()
    }

    /// Charge at a cell, zero when no defect sits there.
    pub fn charge_at(&self, t: u32, x: u32, y: u32) -> Charge {
        self.defects
            .binary_search_by_key(&(t, x, y), |d| (d.t, d.x, d.y))
            .map(|i| self.defects[i].charge)
            .unwrap_or(0)
    }

    /// Debug dump of the defect list as a JSON array of
    /// `{"t":..,"x":..,"y":..,"charge":..}` records.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.defects).expect("defect list serializes")
    }
}

/// Layer-wise differences of the measured syndromes: `s'_0 = s_0` and
/// `s'_t = s_t - s_{t-1}` elementwise mod d.
pub fn syndrome_changes(
    measured: &[SyndromeLayer],
    geometry: &CodeGeometry,
    dim: QuditDim,
) -> ChangesHistory {
    assert!(!measured.is_empty(), "need at least one measured layer");
    for layer in measured {
        assert_eq!(layer.charges().len(), geometry.plaquette_count());
    }
    let dims = GridDims::new(geometry, measured.len() as u32);
    let mut defects = Vec::new();
    for t in 0..measured.len() {
        for y in 0..dims.rows {
            for x in 0..dims.cols {
                let current = measured[t].get(geometry, x, y);
                let previous = if t == 0 {
                    0
                } else {
                    measured[t - 1].get(geometry, x, y)
                };
                let change = dim.sub(current, previous);
                if change != 0 {
                    defects.push(Defect {
                        t: t as u32,
                        x,
                        y,
                        charge: change,
                    });
                }
            }
        }
    }
    ChangesHistory { dims, dim, defects }
}

/// Wrap a single 2D syndrome as a one-layer changes history, for the final
/// noise-free decoding round.
pub fn single_layer_changes(
    syndrome: &SyndromeLayer,
    geometry: &CodeGeometry,
    dim: QuditDim,
) -> ChangesHistory {
    let dims = GridDims::new(geometry, 1);
    let mut defects = Vec::new();
    for y in 0..dims.rows {
        for x in 0..dims.cols {
            let charge = syndrome.get(geometry, x, y);
            if charge != 0 {
                defects.push(Defect { t: 0, x, y, charge });
            }
        }
    }
    ChangesHistory { dims, dim, defects }
}

/// Per-time-step edge corrections returned by the decoder. Time-like moves
/// carry no operator, so every layer lives on spatial edges only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrectionHistory {
    layers: Vec<ErrorLayer>,
}

impl CorrectionHistory {
    pub fn zeros(geometry: &CodeGeometry, steps: u32) -> Self {
        CorrectionHistory {
            layers: (0..steps).map(|_| ErrorLayer::zeros(geometry)).collect(),
        }
    }

    pub fn steps(&self) -> u32 {
        self.layers.len() as u32
    }

    pub fn layer(&self, t: u32) -> &ErrorLayer {
        &self.layers[t as usize]
    }

    pub fn layer_mut(&mut self, t: u32) -> &mut ErrorLayer {
        &mut self.layers[t as usize]
    }

    /// Layer-wise composition of two correction histories.
    pub fn compose(&self, other: &CorrectionHistory, dim: QuditDim) -> CorrectionHistory {
        assert_eq!(self.layers.len(), other.layers.len());
        CorrectionHistory {
            layers: self
                .layers
                .iter()
                .zip(&other.layers)
                .map(|(a, b)| a.compose(b, dim))
                .collect(),
        }
    }

    pub fn total_weight(&self) -> usize {
        self.layers.iter().map(ErrorLayer::weight).sum()
    }
}

/// Collapse a 3D correction to the 2D operator applied at the final time
/// step: the per-edge sum of exponents modulo `d` across all layers.
pub fn project_correction(
    correction: &CorrectionHistory,
    geometry: &CodeGeometry,
    dim: QuditDim,
) -> ErrorLayer {
    let mut projected = ErrorLayer::zeros(geometry);
    for layer in &correction.layers {
        projected.compose_in_place(layer, dim);
    }
    projected
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Edge;

    fn dim(d: u32) -> QuditDim {
        QuditDim::new(d).unwrap()
    }

    #[test]
    fn trivial_syndromes_give_empty_changes() {
        let g = CodeGeometry::new(4).unwrap();
        let layers: Vec<SyndromeLayer> = (0..4).map(|_| SyndromeLayer::zeros(&g)).collect();
        let changes = syndrome_changes(&layers, &g, dim(5));
        assert!(changes.is_empty());
    }

    #[test]
    fn static_error_appears_only_in_first_layer() {
        // A syndrome present identically from t=0 under perfect measurement
        // differences away for t >= 1.
        let g = CodeGeometry::new(4).unwrap();
        let d = dim(5);
        let mut s = SyndromeLayer::zeros(&g);
        s.set(&g, 1, 1, 3);
        s.set(&g, 2, 1, 2);
        let layers = vec![s.clone(), s.clone(), s.clone()];
        let changes = syndrome_changes(&layers, &g, d);
        assert_eq!(changes.defect_count(), 2);
        assert!(changes.defects().iter().all(|defect| defect.t == 0));
    }

    #[test]
    fn measurement_error_gives_defect_pair() {
        let g = CodeGeometry::new(4).unwrap();
        let d = dim(5);
        let t_steps = 4usize;
        for fault_t in 0..t_steps {
            let mut layers: Vec<SyndromeLayer> =
                (0..t_steps).map(|_| SyndromeLayer::zeros(&g)).collect();
            layers[fault_t].set(&g, 2, 1, 4);
            let changes = syndrome_changes(&layers, &g, d);
            if fault_t == t_steps - 1 {
                assert_eq!(changes.defect_count(), 1);
                let defect = changes.defects()[0];
                assert_eq!((defect.t, defect.charge), (fault_t as u32, 4));
            } else {
                assert_eq!(changes.defect_count(), 2);
                let (a, b) = (changes.defects()[0], changes.defects()[1]);
                assert_eq!((a.t, a.charge), (fault_t as u32, 4));
                assert_eq!((b.t, b.charge), (fault_t as u32 + 1, d.neg(4)));
                assert_eq!((a.x, a.y), (b.x, b.y));
            }
        }
    }

    #[test]
    fn partial_sums_recover_measured_syndromes() {
        use rand::{Rng, SeedableRng};
        let g = CodeGeometry::new(4).unwrap();
        let d = dim(7);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        let layers: Vec<SyndromeLayer> = (0..5)
            .map(|_| {
                let mut s = SyndromeLayer::zeros(&g);
                for y in 0..g.plaquette_rows() {
                    for x in 0..g.plaquette_cols() {
                        s.set(&g, x, y, rng.random_range(0..7));
                    }
                }
                s
            })
            .collect();
        let changes = syndrome_changes(&layers, &g, d);
        // Rebuild by accumulating the change layers.
        let mut running = SyndromeLayer::zeros(&g);
        let mut by_layer: Vec<Vec<&Defect>> = vec![Vec::new(); 5];
        for defect in changes.defects() {
            by_layer[defect.t as usize].push(defect);
        }
        for (t, defs) in by_layer.iter().enumerate() {
            for defect in defs {
                let prev = running.get(&g, defect.x, defect.y);
                running.set(&g, defect.x, defect.y, d.add(prev, defect.charge));
            }
            assert_eq!(&running, &layers[t], "mismatch at t={t}");
        }
    }

    #[test]
    fn projection_sums_layers() {
        let g = CodeGeometry::new(3).unwrap();
        let d = dim(5);
        let mut f = CorrectionHistory::zeros(&g, 3);
        let edge = Edge::Vertical { x: 1, y: 1 };
        f.layer_mut(0).set(&g, edge, 2);
        f.layer_mut(2).set(&g, edge, 4);
        let projected = project_correction(&f, &g, d);
        assert_eq!(projected.get(&g, edge), 1);
    }

    #[test]
    fn inverse_layers_cancel_in_projection() {
        let g = CodeGeometry::new(3).unwrap();
        let d = dim(5);
        let mut f = CorrectionHistory::zeros(&g, 2);
        let edge = Edge::Horizontal { x: 0, y: 1 };
        f.layer_mut(0).set(&g, edge, 3);
        f.layer_mut(1).set(&g, edge, d.neg(3));
        assert!(project_correction(&f, &g, d).is_zero());
    }

    #[test]
    fn projection_is_homomorphic_under_composition() {
        use rand::{Rng, SeedableRng};
        let g = CodeGeometry::new(4).unwrap();
        let d = dim(3);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let mut random_history = || {
            let mut f = CorrectionHistory::zeros(&g, 3);
            for t in 0..3 {
                for idx in 0..g.edge_count() {
                    let edge = g.edge_at(idx);
                    f.layer_mut(t).set(&g, edge, rng.random_range(0..3));
                }
            }
            f
        };
        let a = random_history();
        let b = random_history();
        let left = project_correction(&a.compose(&b, d), &g, d);
        let right = project_correction(&a, &g, d).compose(&project_correction(&b, &g, d), d);
        assert_eq!(left, right);
    }

    #[test]
    fn json_dump_lists_defects() {
        let g = CodeGeometry::new(3).unwrap();
        let d = dim(5);
        let mut s = SyndromeLayer::zeros(&g);
        s.set(&g, 0, 1, 2);
        let changes = single_layer_changes(&s, &g, d);
        assert_eq!(changes.to_json(), r#"[{"t":0,"x":0,"y":1,"charge":2}]"#);
    }
}
