//! Cubical chain complex over GF(2) in doubled coordinates.
//!
//! A cell of the cubic lattice is addressed by an integer triple where each
//! coordinate is twice the cell's center position. The parity pattern encodes
//! the cell type: a coordinate is odd exactly when the cell extends along that
//! axis, so the dimension of a cell is its number of odd coordinates.
//!
//! * vertices  — (even, even, even)
//! * edges     — one odd coordinate
//! * faces     — two odd coordinates
//! * cubes     — (odd, odd, odd)
//!
//! The boundary of a cell toggles each odd coordinate by ±1; the coboundary
//! toggles each even coordinate by ±1. Chains are GF(2) sums of cells, so
//! repeated cells cancel. On periodic axes coordinates live modulo twice the
//! extent; on open axes the coboundary simply omits neighbours that would
//! leave the lattice (boundaries never do).
//!
//! The dual map is the point reflection through (1,1,1): it is an involution,
//! swaps dimension k with 3−k, and intertwines boundary and coboundary
//! (`∂ = dual ∘ δ ∘ dual`). It is defined on fully periodic lattices, where
//! the reflection is a bijection of the cell set.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A lattice cell in doubled coordinates. Ordering is lexicographic, which
/// fixes the iteration order of chains everywhere downstream.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Cell(pub [i32; 3]);

impl Cell {
    /// Cell dimension: the number of odd coordinates.
    pub fn dim(&self) -> u8 {
        self.0.iter().filter(|&&c| c.rem_euclid(2) == 1).count() as u8
    }

    /// Axes along which the cell extends (odd coordinates).
    pub fn odd_axes(&self) -> impl Iterator<Item = usize> + '_ {
        (0..3).filter(|&a| self.0[a].rem_euclid(2) == 1)
    }

    /// Axes transverse to the cell (even coordinates).
    pub fn even_axes(&self) -> impl Iterator<Item = usize> + '_ {
        (0..3).filter(|&a| self.0[a].rem_euclid(2) == 0)
    }
}

impl fmt::Debug for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.0[0], self.0[1], self.0[2])
    }
}

/// A GF(2) chain: a finite set of cells of a common dimension.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Chain {
    pub dim: u8,
    pub cells: BTreeSet<Cell>,
}

impl Chain {
    pub fn empty(dim: u8) -> Self {
        Chain { dim, cells: BTreeSet::new() }
    }

    pub fn from_cells(dim: u8, cells: impl IntoIterator<Item = Cell>) -> Result<Self, LatticeError> {
        let mut chain = Chain::empty(dim);
        for c in cells {
            if c.dim() != dim {
                return Err(LatticeError::WrongDimension { expected: dim, got: c.dim() });
            }
            chain.toggle(c);
        }
        Ok(chain)
    }

    /// GF(2) insertion: adding a cell twice removes it.
    pub fn toggle(&mut self, c: Cell) {
        if !self.cells.remove(&c) {
            self.cells.insert(c);
        }
    }

    pub fn contains(&self, c: &Cell) -> bool {
        self.cells.contains(c)
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    /// GF(2) sum (symmetric difference) of two chains of equal dimension.
    pub fn sum(&self, other: &Chain) -> Result<Chain, LatticeError> {
        if self.dim != other.dim {
            return Err(LatticeError::WrongDimension { expected: self.dim, got: other.dim });
        }
        let mut out = self.clone();
        for &c in &other.cells {
            out.toggle(c);
        }
        Ok(out)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LatticeError {
    #[error("cell {0:?} lies outside the lattice")]
    OutOfRange(Cell),
    #[error("expected a {expected}-dimensional cell/chain, got dimension {got}")]
    WrongDimension { expected: u8, got: u8 },
    #[error("the dual map requires a fully periodic lattice")]
    DualRequiresPeriodic,
}

/// A finite cubic lattice. `extent[a]` counts unit cells along axis `a`;
/// doubled coordinates on that axis span `0..2*extent[a]` when periodic and
/// `0..=2*extent[a]` when open.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Lattice {
    pub extent: [usize; 3],
    pub periodic: [bool; 3],
}

impl Lattice {
    pub fn new(extent: [usize; 3], periodic: [bool; 3]) -> Self {
        assert!(extent.iter().all(|&l| l >= 1), "extent must be positive");
        Lattice { extent, periodic }
    }

    /// Fully periodic cube of side `l`.
    pub fn torus(l: usize) -> Self {
        Lattice::new([l, l, l], [true, true, true])
    }

    fn span(&self, axis: usize) -> i32 {
        2 * self.extent[axis] as i32
    }

    /// Wrap a raw coordinate triple into the lattice, or report that it lies
    /// outside an open axis.
    pub fn canonicalize(&self, raw: [i32; 3]) -> Result<Cell, LatticeError> {
        let mut out = raw;
        for a in 0..3 {
            if self.periodic[a] {
                out[a] = raw[a].rem_euclid(self.span(a));
            } else if raw[a] < 0 || raw[a] > self.span(a) {
                return Err(LatticeError::OutOfRange(Cell(raw)));
            }
        }
        Ok(Cell(out))
    }

    pub fn contains(&self, c: &Cell) -> bool {
        (0..3).all(|a| {
            if self.periodic[a] {
                (0..self.span(a)).contains(&c.0[a])
            } else {
                (0..=self.span(a)).contains(&c.0[a])
            }
        })
    }

    /// Every cell of the given dimension, in lexicographic order.
    pub fn cells(&self, dim: u8) -> Vec<Cell> {
        let mut out = Vec::new();
        let ranges: Vec<Vec<i32>> = (0..3)
            .map(|a| {
                let top = if self.periodic[a] { self.span(a) - 1 } else { self.span(a) };
                (0..=top).collect()
            })
            .collect();
        for &x in &ranges[0] {
            for &y in &ranges[1] {
                for &z in &ranges[2] {
                    let c = Cell([x, y, z]);
                    if c.dim() == dim {
                        out.push(c);
                    }
                }
            }
        }
        out
    }

    /// The boundary of a single cell as a chain (facets, GF(2)-reduced).
    pub fn boundary_cell(&self, c: &Cell) -> Result<Chain, LatticeError> {
        if !self.contains(c) {
            return Err(LatticeError::OutOfRange(*c));
        }
        let mut out = Chain::empty(c.dim().saturating_sub(1));
        for a in c.odd_axes() {
            for s in [-1, 1] {
                let mut raw = c.0;
                raw[a] += s;
                // Odd coordinates sit strictly inside open axes, so both
                // facets always exist; only wrapping can merge them.
                let facet = self.canonicalize(raw)?;
                out.toggle(facet);
            }
        }
        Ok(out)
    }

    /// The coboundary of a single cell as a chain (cofacets, GF(2)-reduced).
    /// On open axes, cofacets beyond the lattice edge are omitted.
    pub fn coboundary_cell(&self, c: &Cell) -> Result<Chain, LatticeError> {
        if !self.contains(c) {
            return Err(LatticeError::OutOfRange(*c));
        }
        let mut out = Chain::empty(c.dim() + 1);
        for a in c.even_axes() {
            for s in [-1, 1] {
                let mut raw = c.0;
                raw[a] += s;
                if let Ok(cofacet) = self.canonicalize(raw) {
                    out.toggle(cofacet);
                }
            }
        }
        Ok(out)
    }

    /// Boundary operator on chains: GF(2) sum of cell boundaries.
    pub fn boundary(&self, chain: &Chain) -> Result<Chain, LatticeError> {
        let mut out = Chain::empty(chain.dim.saturating_sub(1));
        for c in &chain.cells {
            out = out.sum(&self.boundary_cell(c)?)?;
        }
        Ok(out)
    }

    /// Coboundary operator on chains.
    pub fn coboundary(&self, chain: &Chain) -> Result<Chain, LatticeError> {
        let mut out = Chain::empty((chain.dim + 1).min(3));
        for c in &chain.cells {
            out = out.sum(&self.coboundary_cell(c)?)?;
        }
        Ok(out)
    }

    /// The dual of a cell: point reflection through (1,1,1), wrapped. Swaps
    /// dimension k ↔ 3−k; e.g. the cube at (1,1,1) maps to the vertex at the
    /// origin. Only defined on fully periodic lattices.
    pub fn dual_cell(&self, c: &Cell) -> Result<Cell, LatticeError> {
        if self.periodic != [true, true, true] {
            return Err(LatticeError::DualRequiresPeriodic);
        }
        if !self.contains(c) {
            return Err(LatticeError::OutOfRange(*c));
        }
        self.canonicalize([1 - c.0[0], 1 - c.0[1], 1 - c.0[2]])
    }

    /// Cell-wise dual of a chain.
    pub fn dual_chain(&self, chain: &Chain) -> Result<Chain, LatticeError> {
        let mut out = Chain::empty(3 - chain.dim.min(3));
        for c in &chain.cells {
            out.toggle(self.dual_cell(c)?);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn edge(l: &Lattice, raw: [i32; 3]) -> Chain {
        Chain::from_cells(1, [l.canonicalize(raw).unwrap()]).unwrap()
    }

    #[test]
    fn dimensions_by_parity() {
        assert_eq!(Cell([0, 0, 0]).dim(), 0);
        assert_eq!(Cell([1, 0, 0]).dim(), 1);
        assert_eq!(Cell([0, 1, 1]).dim(), 2);
        assert_eq!(Cell([1, 1, 1]).dim(), 3);
    }

    #[test]
    fn cell_counts_on_torus() {
        // Per dimension k there are (3 choose k) parity patterns, each with
        // extent^3 placements.
        let l = Lattice::torus(3);
        let n = 27;
        assert_eq!(l.cells(0).len(), n);
        assert_eq!(l.cells(1).len(), 3 * n);
        assert_eq!(l.cells(2).len(), 3 * n);
        assert_eq!(l.cells(3).len(), n);
    }

    #[test]
    fn cell_counts_open_axis() {
        // Open axis of extent L has L+1 even coordinates and L odd ones.
        let l = Lattice::new([2, 2, 2], [true, true, false]);
        assert_eq!(l.cells(0).len(), 2 * 2 * 3);
        // Edges along z: 2·2·2. Edges along x or y: 2·2·3 each.
        assert_eq!(l.cells(1).len(), 8 + 12 + 12);
        assert_eq!(l.cells(3).len(), 8);
    }

    #[test]
    fn boundary_of_edge_and_face() {
        let l = Lattice::torus(3);
        let e = edge(&l, [1, 0, 0]);
        let b = l.boundary(&e).unwrap();
        assert_eq!(b.dim, 0);
        assert_eq!(
            b.cells.iter().copied().collect::<Vec<_>>(),
            vec![Cell([0, 0, 0]), Cell([2, 0, 0])]
        );

        let f = Chain::from_cells(2, [Cell([1, 1, 0])]).unwrap();
        let b = l.boundary(&f).unwrap();
        let want: BTreeSet<Cell> =
            [[0, 1, 0], [2, 1, 0], [1, 0, 0], [1, 2, 0]].map(Cell).into();
        assert_eq!(b.cells, want);
    }

    #[test]
    fn coboundary_truncates_on_open_axis() {
        let l = Lattice::new([2, 2, 2], [true, true, false]);
        // A face at the z = 0 wall of the open axis has only the inward cube.
        let f = l.canonicalize([1, 1, 0]).unwrap();
        let cb = l.coboundary_cell(&f).unwrap();
        assert_eq!(cb.cells.iter().copied().collect::<Vec<_>>(), vec![Cell([1, 1, 1])]);
        // The same face in the bulk has two.
        let f = l.canonicalize([1, 1, 2]).unwrap();
        assert_eq!(l.coboundary_cell(&f).unwrap().len(), 2);
    }

    #[test]
    fn small_extent_wraps_cancel() {
        // On a circle of one unit cell the two endpoints of the edge coincide,
        // so its GF(2) boundary is empty.
        let l = Lattice::new([1, 2, 2], [true, true, true]);
        let e = edge(&l, [1, 0, 0]);
        assert!(l.boundary(&e).unwrap().is_empty());
    }

    #[test]
    fn dual_anchors_and_involution() {
        let l = Lattice::torus(3);
        assert_eq!(l.dual_cell(&Cell([1, 1, 1])).unwrap(), Cell([0, 0, 0]));
        assert_eq!(l.dual_cell(&Cell([0, 0, 0])).unwrap(), Cell([1, 1, 1]));
        // The dual of an edge is a face whose corners map back to the four
        // cubes containing the edge.
        let e = Cell([1, 0, 0]);
        let f = l.dual_cell(&e).unwrap();
        assert_eq!(f, Cell([0, 1, 1]));
        let mut incident = BTreeSet::new();
        for s in [-1, 1] {
            for t in [-1, 1] {
                incident.insert(l.canonicalize([1, s, t]).unwrap());
            }
        }
        let corners: BTreeSet<Cell> = [[0, 0, 0], [0, 2, 0], [0, 0, 2], [0, 2, 2]]
            .iter()
            .map(|&v| l.dual_cell(&Cell(v)).unwrap())
            .collect();
        assert_eq!(corners, incident);
    }

    #[test]
    fn dual_requires_torus() {
        let l = Lattice::new([2, 2, 2], [true, true, false]);
        assert_eq!(
            l.dual_cell(&Cell([0, 0, 0])),
            Err(LatticeError::DualRequiresPeriodic)
        );
    }

    #[test]
    fn serde_round_trip() {
        let l = Lattice::torus(2);
        let c = Chain::from_cells(2, [Cell([1, 1, 0]), Cell([1, 0, 1])]).unwrap();
        let json = serde_json::to_string(&c).unwrap();
        let back: Chain = serde_json::from_str(&json).unwrap();
        assert_eq!(c, back);
        let json = serde_json::to_string(&l).unwrap();
        let back: Lattice = serde_json::from_str(&json).unwrap();
        assert_eq!(l, back);
    }

    /// Strategy: an arbitrary small lattice and a chain of cells on it.
    fn lattice_and_chain(dim: u8) -> impl Strategy<Value = (Lattice, Chain)> {
        (
            prop::array::uniform3(1usize..4),
            prop::array::uniform3(any::<bool>()),
        )
            .prop_flat_map(move |(extent, periodic)| {
                let lat = Lattice::new(extent, periodic);
                let cells = lat.cells(dim);
                let n = cells.len();
                (Just(lat), prop::collection::vec(0..n, 0..6).prop_map(move |idx| {
                    let mut ch = Chain::empty(dim);
                    for i in idx {
                        ch.toggle(cells[i]);
                    }
                    ch
                }))
            })
    }

    proptest! {
        #[test]
        fn boundary_squares_to_zero((lat, ch) in lattice_and_chain(2)) {
            let b = lat.boundary(&ch).unwrap();
            prop_assert!(lat.boundary(&b).unwrap().is_empty());
        }

        #[test]
        fn boundary_of_cubes_squares_to_zero((lat, ch) in lattice_and_chain(3)) {
            let b = lat.boundary(&ch).unwrap();
            prop_assert!(lat.boundary(&b).unwrap().is_empty());
        }

        #[test]
        fn coboundary_squares_to_zero((lat, ch) in lattice_and_chain(0)) {
            let cb = lat.coboundary(&ch).unwrap();
            prop_assert!(lat.coboundary(&cb).unwrap().is_empty());
        }

        #[test]
        fn coboundary_of_edges_squares_to_zero((lat, ch) in lattice_and_chain(1)) {
            let cb = lat.coboundary(&ch).unwrap();
            prop_assert!(lat.coboundary(&cb).unwrap().is_empty());
        }

        #[test]
        fn boundary_is_linear((lat, a) in lattice_and_chain(2), bidx in prop::collection::vec(0..100usize, 0..6)) {
            let faces = lat.cells(2);
            let mut b = Chain::empty(2);
            for i in bidx {
                b.toggle(faces[i % faces.len()]);
            }
            let lhs = lat.boundary(&a.sum(&b).unwrap()).unwrap();
            let rhs = lat.boundary(&a).unwrap().sum(&lat.boundary(&b).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }

    proptest! {
        /// Duality on a torus: involution, dimension flip, and the
        /// boundary/coboundary intertwining ∂ = dual ∘ δ ∘ dual.
        #[test]
        fn duality_invariants(l in 1usize..4, dim in 0u8..4, picks in prop::collection::vec(0..200usize, 1..6)) {
            let lat = Lattice::torus(l);
            let cells = lat.cells(dim);
            let mut ch = Chain::empty(dim);
            for i in picks {
                ch.toggle(cells[i % cells.len()]);
            }
            let d = lat.dual_chain(&ch).unwrap();
            prop_assert_eq!(d.dim, 3 - dim);
            prop_assert_eq!(&lat.dual_chain(&d).unwrap(), &ch);
            if dim >= 1 {
                let via_dual = lat.dual_chain(&lat.coboundary(&d).unwrap()).unwrap();
                prop_assert_eq!(lat.boundary(&ch).unwrap(), via_dual);
            }
        }
    }
}
