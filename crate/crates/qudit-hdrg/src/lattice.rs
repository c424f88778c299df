//! Planar qudit surface code geometry for the X-error/plaquette sector.
//!
//! Qudits live on the edges of a distance-`L` planar lattice with two rough
//! boundaries (left/right, `x` direction) and two smooth boundaries (below
//! row 0 and above row `L-1`, `y` direction). All coordinates are 0-based:
//!
//! - vertical edges `v(x, y)` with `x in [0, L)`, `y in [0, L)`;
//! - horizontal edges `h(x, y)` with `x in [0, L-1)`, `y in [0, L-1)`;
//! - plaquettes `P(x, y)` with `x in [0, L)`, `y in [0, L-1)`.
//!
//! A plaquette measures `Z` on its bottom vertical edge `v(x, y)` and left
//! horizontal edge `h(x-1, y)`, and `Z^{-1}` on its top vertical edge
//! `v(x, y+1)` and right horizontal edge `h(x, y)`. Edges missing at a rough
//! boundary are simply absent, which produces the 3-body boundary plaquettes.
//! Under this convention an `X^k` error on a bulk edge creates the defect
//! pair `(+k, -k)` on its two neighbouring plaquettes, and an `X^k` on a
//! smooth-boundary edge is seen by exactly one plaquette.
//!
//! The Z-error/vertex sector is the same engine on the transposed geometry
//! and is not modelled separately.

use thiserror::Error;

/// An element of `Z_d`: a Pauli exponent or a syndrome measurement outcome.
pub type Charge = u32;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GeometryError {
    #[error("code distance must be at least 2, got {0}")]
    InvalidDistance(u32),
    #[error("qudit dimension must be at least 2, got {0}")]
    InvalidDimension(u32),
}

/// Qudit dimension `d >= 2`. All charge arithmetic is modulo `d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuditDim(u32);

impl QuditDim {
    pub fn new(d: u32) -> Result<Self, GeometryError> {
        if d < 2 {
            return Err(GeometryError::InvalidDimension(d));
        }
        Ok(QuditDim(d))
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn add(self, a: Charge, b: Charge) -> Charge {
        debug_assert!(a < self.0 && b < self.0);
        let s = a as u64 + b as u64;
        let d = self.0 as u64;
        (if s >= d { s - d } else { s }) as Charge
    }

    #[inline]
    pub fn sub(self, a: Charge, b: Charge) -> Charge {
        debug_assert!(a < self.0 && b < self.0);
        if a >= b {
            a - b
        } else {
            a + self.0 - b
        }
    }

    /// Additive inverse, `d - a` for non-zero `a`.
    #[inline]
    pub fn neg(self, a: Charge) -> Charge {
        debug_assert!(a < self.0);
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    /// Reduce an arbitrary signed sum into `[0, d)`.
    #[inline]
    pub fn reduce(self, v: i64) -> Charge {
        v.rem_euclid(self.0 as i64) as Charge
    }
}

/// An edge of the lattice, in lattice coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Edge {
    /// `v(x, y)`: sits between plaquettes `P(x, y-1)` and `P(x, y)`.
    Vertical { x: u32, y: u32 },
    /// `h(x, y)`: sits between plaquettes `P(x, y)` and `P(x+1, y)`.
    Horizontal { x: u32, y: u32 },
}

/// Distance-`L` planar surface code layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CodeGeometry {
    distance: u32,
}

/// One spatial smooth boundary of the plaquette grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpatialBoundary {
    /// Below plaquette row `y = 0`.
    South,
    /// Above plaquette row `y = L-2`.
    North,
}

/// Endpoint of a charge transport: a plaquette or a smooth boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Endpoint {
    Plaquette { x: u32, y: u32 },
    Boundary(SpatialBoundary),
}

impl CodeGeometry {
    pub fn new(distance: u32) -> Result<Self, GeometryError> {
        if distance < 2 {
            return Err(GeometryError::InvalidDistance(distance));
        }
        Ok(CodeGeometry { distance })
    }

    #[inline]
    pub fn distance(&self) -> u32 {
        self.distance
    }

    /// `L^2` vertical plus `(L-1)^2` horizontal edges.
    #[inline]
    pub fn edge_count(&self) -> usize {
        let l = self.distance as usize;
        l * l + (l - 1) * (l - 1)
    }

    /// Plaquette grid is `L` columns by `L-1` rows.
    #[inline]
    pub fn plaquette_count(&self) -> usize {
        let l = self.distance as usize;
        l * (l - 1)
    }

    #[inline]
    pub fn plaquette_cols(&self) -> u32 {
        self.distance
    }

    #[inline]
    pub fn plaquette_rows(&self) -> u32 {
        self.distance - 1
    }

    #[inline]
    pub fn edge_index(&self, edge: Edge) -> usize {
        let l = self.distance as usize;
        match edge {
            Edge::Vertical { x, y } => {
                debug_assert!((x as usize) < l && (y as usize) < l);
                y as usize * l + x as usize
            }
            Edge::Horizontal { x, y } => {
                debug_assert!((x as usize) < l - 1 && (y as usize) < l - 1);
                l * l + y as usize * (l - 1) + x as usize
            }
        }
    }

    pub fn edge_at(&self, index: usize) -> Edge {
        let l = self.distance as usize;
        if index < l * l {
            Edge::Vertical {
                x: (index % l) as u32,
                y: (index / l) as u32,
            }
        } else {
            let i = index - l * l;
            Edge::Horizontal {
                x: (i % (l - 1)) as u32,
                y: (i / (l - 1)) as u32,
            }
        }
    }

    #[inline]
    pub fn plaquette_index(&self, x: u32, y: u32) -> usize {
        debug_assert!(x < self.plaquette_cols() && y < self.plaquette_rows());
        y as usize * self.distance as usize + x as usize
    }

    /// The up-to-two plaquettes seeing an `X^k` on `edge`, with the sign of
    /// the syndrome contribution (`+1` means the plaquette reads `+k`).
    pub fn edge_plaquettes(&self, edge: Edge) -> [Option<(u32, u32, i8)>; 2] {
        let l = self.distance;
        match edge {
            Edge::Vertical { x, y } => {
                let above = (y < l - 1).then_some((x, y, 1));
                // Lazy: `y - 1` must not be evaluated on the south row.
                let below = (y > 0).then(|| (x, y - 1, -1));
                [above, below]
            }
            // Horizontal edges never touch a smooth boundary.
            Edge::Horizontal { x, y } => [Some((x + 1, y, 1)), Some((x, y, -1))],
        }
    }

    pub fn all_edges(&self) -> impl Iterator<Item = Edge> + '_ {
        (0..self.edge_count()).map(|i| self.edge_at(i))
    }

    /// Generators of the vertex-operator group, as `X`-exponent layers.
    ///
    /// Vertex `Q(x, y)` with `x in [0, L-1)`, `y in [0, L)` applies `X^k` on
    /// `v(x, y)` and `h(x, y)`, and `X^{-k}` on `v(x+1, y)` and `h(x, y-1)`,
    /// with the horizontal edges absent at the smooth boundaries. Every
    /// generator commutes with every plaquette operator, so these layers have
    /// trivial syndrome and trivial logical class by construction.
    pub fn vertex_operator(&self, x: u32, y: u32, k: Charge, dim: QuditDim) -> ErrorLayer {
        let l = self.distance;
        assert!(x < l - 1 && y < l, "vertex ({x},{y}) outside grid");
        let mut layer = ErrorLayer::zeros(self);
        let k = k % dim.get();
        layer.set(self, Edge::Vertical { x, y }, k);
        layer.set(self, Edge::Vertical { x: x + 1, y }, dim.neg(k));
        if y < l - 1 {
            layer.set(self, Edge::Horizontal { x, y }, k);
        }
        if y > 0 {
            layer.set(self, Edge::Horizontal { x, y: y - 1 }, dim.neg(k));
        }
        layer
    }

    pub fn vertex_grid(&self) -> (u32, u32) {
        (self.distance - 1, self.distance)
    }
}

/// One sector's physical error state: an `X`-exponent per edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ErrorLayer {
    charges: Vec<Charge>,
}

impl ErrorLayer {
    pub fn zeros(geometry: &CodeGeometry) -> Self {
        ErrorLayer {
            charges: vec![0; geometry.edge_count()],
        }
    }

    #[inline]
    pub fn get(&self, geometry: &CodeGeometry, edge: Edge) -> Charge {
        self.charges[geometry.edge_index(edge)]
    }

    #[inline]
    pub fn set(&mut self, geometry: &CodeGeometry, edge: Edge, charge: Charge) {
        self.charges[geometry.edge_index(edge)] = charge;
    }

    #[inline]
    pub fn add_at(&mut self, geometry: &CodeGeometry, edge: Edge, charge: Charge, dim: QuditDim) {
        let idx = geometry.edge_index(edge);
        self.charges[idx] = dim.add(self.charges[idx], charge % dim.get());
    }

    /// Elementwise composition, addition modulo `d`.
    pub fn compose(&self, other: &ErrorLayer, dim: QuditDim) -> ErrorLayer {
        assert_eq!(self.charges.len(), other.charges.len());
        ErrorLayer {
            charges: self
                .charges
                .iter()
                .zip(&other.charges)
                .map(|(&a, &b)| dim.add(a, b))
                .collect(),
        }
    }

    pub fn compose_in_place(&mut self, other: &ErrorLayer, dim: QuditDim) {
        assert_eq!(self.charges.len(), other.charges.len());
        for (a, &b) in self.charges.iter_mut().zip(&other.charges) {
            *a = dim.add(*a, b);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.charges.iter().all(|&c| c == 0)
    }

    /// Number of edges carrying a non-trivial exponent.
    pub fn weight(&self) -> usize {
        self.charges.iter().filter(|&&c| c != 0).count()
    }

    pub fn charges(&self) -> &[Charge] {
        &self.charges
    }
}

/// Plaquette measurement outcomes for one time step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyndromeLayer {
    charges: Vec<Charge>,
}

impl SyndromeLayer {
    pub fn zeros(geometry: &CodeGeometry) -> Self {
        SyndromeLayer {
            charges: vec![0; geometry.plaquette_count()],
        }
    }

    #[inline]
    pub fn get(&self, geometry: &CodeGeometry, x: u32, y: u32) -> Charge {
        self.charges[geometry.plaquette_index(x, y)]
    }

    #[inline]
    pub fn set(&mut self, geometry: &CodeGeometry, x: u32, y: u32, charge: Charge) {
        self.charges[geometry.plaquette_index(x, y)] = charge;
    }

    pub fn compose(&self, other: &SyndromeLayer, dim: QuditDim) -> SyndromeLayer {
        assert_eq!(self.charges.len(), other.charges.len());
        SyndromeLayer {
            charges: self
                .charges
                .iter()
                .zip(&other.charges)
                .map(|(&a, &b)| dim.add(a, b))
                .collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.charges.iter().all(|&c| c == 0)
    }

    pub fn charges(&self) -> &[Charge] {
        &self.charges
    }

    pub fn charges_mut(&mut self) -> &mut [Charge] {
        &mut self.charges
    }
}

/// Plaquette syndrome of an error layer: the signed sum modulo `d` of edge
/// exponents around each plaquette. Linear in the error layer.
pub fn compute_syndrome(e: &ErrorLayer, geometry: &CodeGeometry, dim: QuditDim) -> SyndromeLayer {
    let mut syndrome = SyndromeLayer::zeros(geometry);
    for (idx, &charge) in e.charges.iter().enumerate() {
        if charge == 0 {
            continue;
        }
        let edge = geometry.edge_at(idx);
        for (px, py, sign) in geometry.edge_plaquettes(edge).into_iter().flatten() {
            let p = geometry.plaquette_index(px, py);
            let contribution = if sign > 0 { charge } else { dim.neg(charge) };
            syndrome.charges[p] = dim.add(syndrome.charges[p], contribution);
        }
    }
    syndrome
}

/// Accumulate into `layer` the edge operator that moves charge `a` one step
/// between `from` and the adjacent plaquette/boundary `to`.
///
/// The emitted exponent is chosen so the syndrome changes by `-a` at `from`
/// and `+a` at `to` (boundaries absorb the charge with no syndrome change).
fn transport_step(
    layer: &mut ErrorLayer,
    geometry: &CodeGeometry,
    dim: QuditDim,
    from: (u32, u32),
    to: Endpoint,
    a: Charge,
) {
    let l = geometry.distance();
    let (x, y) = from;
    let (edge, exponent) = match to {
        Endpoint::Plaquette { x: tx, y: ty } => {
            if tx == x && ty == y + 1 {
                (Edge::Vertical { x, y: y + 1 }, a)
            } else if tx == x && ty + 1 == y {
                (Edge::Vertical { x, y }, dim.neg(a))
            } else if tx == x + 1 && ty == y {
                (Edge::Horizontal { x, y }, a)
            } else if tx + 1 == x && ty == y {
                (Edge::Horizontal { x: x - 1, y }, dim.neg(a))
            } else {
                panic!("transport step between non-adjacent plaquettes");
            }
        }
        Endpoint::Boundary(SpatialBoundary::South) => {
            assert_eq!(y, 0, "south exit only from row 0");
            (Edge::Vertical { x, y: 0 }, dim.neg(a))
        }
        Endpoint::Boundary(SpatialBoundary::North) => {
            assert_eq!(y, l - 2, "north exit only from row L-2");
            (Edge::Vertical { x, y: l - 1 }, a)
        }
    };
    layer.add_at(geometry, edge, exponent, dim);
}

/// Accumulate into `layer` the operator transporting charge `a` from one
/// plaquette to another along a monotone Manhattan path (x moves first,
/// then y moves).
pub fn transport_into(
    layer: &mut ErrorLayer,
    geometry: &CodeGeometry,
    dim: QuditDim,
    from: (u32, u32),
    to: (u32, u32),
    a: Charge,
) {
    let a = a % dim.get();
    if a == 0 {
        return;
    }
    let (mut x, mut y) = from;
    while x != to.0 {
        let nx = if to.0 > x { x + 1 } else { x - 1 };
        transport_step(
            layer,
            geometry,
            dim,
            (x, y),
            Endpoint::Plaquette { x: nx, y },
            a,
        );
        x = nx;
    }
    while y != to.1 {
        let ny = if to.1 > y { y + 1 } else { y - 1 };
        transport_step(
            layer,
            geometry,
            dim,
            (x, y),
            Endpoint::Plaquette { x, y: ny },
            a,
        );
        y = ny;
    }
}

/// Accumulate the operator routing charge `a` from a plaquette straight out
/// of the named smooth boundary (vertical moves only, then the exit edge).
pub fn transport_to_boundary_into(
    layer: &mut ErrorLayer,
    geometry: &CodeGeometry,
    dim: QuditDim,
    from: (u32, u32),
    boundary: SpatialBoundary,
    a: Charge,
) {
    let a = a % dim.get();
    if a == 0 {
        return;
    }
    let (x, y) = from;
    match boundary {
        SpatialBoundary::South => {
            transport_into(layer, geometry, dim, (x, y), (x, 0), a);
            transport_step(
                layer,
                geometry,
                dim,
                (x, 0),
                Endpoint::Boundary(boundary),
                a,
            );
        }
        SpatialBoundary::North => {
            let top = geometry.plaquette_rows() - 1;
            transport_into(layer, geometry, dim, (x, y), (x, top), a);
            transport_step(
                layer,
                geometry,
                dim,
                (x, top),
                Endpoint::Boundary(boundary),
                a,
            );
        }
    }
}

/// Edge operator transporting charge `a` between two endpoints, at most one
/// of which may be a boundary. Applying the result changes the syndrome by
/// `-a` at `from` and `+a` at `to`.
pub fn transport_correction(
    from: Endpoint,
    to: Endpoint,
    a: Charge,
    geometry: &CodeGeometry,
    dim: QuditDim,
) -> ErrorLayer {
    let mut layer = ErrorLayer::zeros(geometry);
    match (from, to) {
        (Endpoint::Plaquette { x, y }, Endpoint::Plaquette { x: tx, y: ty }) => {
            assert!((x, y) != (tx, ty), "transport endpoints must be distinct");
            transport_into(&mut layer, geometry, dim, (x, y), (tx, ty), a);
        }
        (Endpoint::Plaquette { x, y }, Endpoint::Boundary(b)) => {
            transport_to_boundary_into(&mut layer, geometry, dim, (x, y), b, a);
        }
        (Endpoint::Boundary(b), Endpoint::Plaquette { x, y }) => {
            // Sourcing `a` from a boundary is absorbing `-a` into it.
            transport_to_boundary_into(
                &mut layer,
                geometry,
                dim,
                (x, y),
                b,
                dim.neg(a % dim.get()),
            );
        }
        (Endpoint::Boundary(_), Endpoint::Boundary(_)) => {
            panic!("at most one transport endpoint may be a boundary");
        }
    }
    layer
}

/// Logical class of a trivial-syndrome layer: the sum modulo `d` of the
/// exponents on the cut row of vertical edges `v(x, 0)`, `x in [0, L)`.
///
/// Vertex-operator products map to 0 and the logical `X`-string raised to
/// the `k`-th power maps to `k`. For layers with non-trivial syndrome the
/// value depends on the cut row and is not meaningful.
pub fn logical_class(e: &ErrorLayer, geometry: &CodeGeometry, dim: QuditDim) -> Charge {
    let mut sum = 0i64;
    for x in 0..geometry.distance() {
        sum += e.get(geometry, Edge::Vertical { x, y: 0 }) as i64;
    }
    dim.reduce(sum)
}

/// True iff the layer is a stabilizer: trivial syndrome and logical class 0.
pub fn is_stabilizer(e: &ErrorLayer, geometry: &CodeGeometry, dim: QuditDim) -> bool {
    compute_syndrome(e, geometry, dim).is_zero() && logical_class(e, geometry, dim) == 0
}
