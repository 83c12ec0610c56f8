//! Defect geometry on the 3D cluster lattice.
//!
//! Qubits live on the faces and edges of a cubic lattice whose third axis is
//! time. Bulk qubits are measured in the X basis (vacuum) or the Z basis
//! (defect); qubits on the two time-boundary slices are the input and output
//! of the encoded channel, and injection sites are single unmeasured bulk
//! qubits.
//!
//! Defects come in two species. A primal defect is a worldline of edge cells
//! (a column of time-edges at an even/even site is the minimal hole); a dual
//! defect is a worldline of face cells (a column of in-plane plaquettes at an
//! odd/odd site). A pair of parallel defect worldlines of either species
//! carries one logical qubit; braiding a dual worldline around a primal one
//! implements entangling gates.
//!
//! This module defines layouts, classifies cells into regions, and produces
//! the standard logical operators and boundary-code checks used by the gate
//! verifier and the simulators.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::chain_complex::{Cell, Chain, Lattice, LatticeError};
use crate::pauli::PauliOperator;

/// Measurement role of a cell in a defect layout.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Region {
    /// Not a qubit (vertices and cubes).
    NotAQubit,
    /// Unmeasured injection qubit (carries an arbitrary input state).
    Injection,
    /// Edge qubit inside a primal defect: measured in Z.
    PrimalDefect,
    /// Face qubit inside a dual defect: measured in Z.
    DualDefect,
    /// Unmeasured qubit on the input time-boundary slice.
    Input,
    /// Unmeasured qubit on the output time-boundary slice.
    Output,
    /// Bulk vacuum qubit: measured in X.
    Vacuum,
}

/// A cluster block with defect worldlines, the object gates are built from.
///
/// The lattice must be open along the time axis (axis 2); the space axes are
/// periodic here, which keeps every fixture free of space-boundary bookkeeping.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DefectLayout {
    pub lattice: Lattice,
    /// Edge cells measured in Z (primal defect worldlines).
    pub primal_defect: Chain,
    /// Face cells measured in Z (dual defect worldlines).
    pub dual_defect: Chain,
    /// Unmeasured bulk qubits holding injected states.
    pub injection: BTreeSet<Cell>,
}

impl DefectLayout {
    /// An empty (vacuum-only) block: `l × l` periodic in space, `t` deep in
    /// time with open input/output slices.
    pub fn memory_block(l: usize, t: usize) -> Self {
        assert!(l >= 1 && t >= 1);
        DefectLayout {
            lattice: Lattice::new([l, l, t], [true, true, false]),
            primal_defect: Chain::empty(1),
            dual_defect: Chain::empty(2),
            injection: BTreeSet::new(),
        }
    }

    /// Doubled z-coordinate of the output slice.
    pub fn top(&self) -> i32 {
        2 * self.lattice.extent[2] as i32
    }

    pub fn region(&self, c: &Cell) -> Region {
        if !self.lattice.contains(c) || !matches!(c.dim(), 1 | 2) {
            return Region::NotAQubit;
        }
        if self.injection.contains(c) {
            return Region::Injection;
        }
        if self.primal_defect.contains(c) {
            return Region::PrimalDefect;
        }
        if self.dual_defect.contains(c) {
            return Region::DualDefect;
        }
        match c.0[2] {
            0 => Region::Input,
            z if z == self.top() => Region::Output,
            _ => Region::Vacuum,
        }
    }

    /// All qubit cells in a region, in lexicographic order.
    pub fn cells_in_region(&self, want: Region) -> Vec<Cell> {
        let mut out = Vec::new();
        for dim in [1, 2] {
            for c in self.lattice.cells(dim) {
                if self.region(&c) == want {
                    out.push(c);
                }
            }
        }
        out.sort();
        out
    }

    /// Is the qubit left unmeasured (input, output, or injection)?
    pub fn is_unmeasured(&self, c: &Cell) -> bool {
        matches!(
            self.region(c),
            Region::Input | Region::Output | Region::Injection
        )
    }

    /// Add a pair of primal defect worldlines: columns of time-edges at two
    /// even/even sites, spanning the full time extent.
    pub fn add_primal_pair(&mut self, a: [i32; 2], b: [i32; 2]) -> Result<HolePair, LatticeError> {
        for site in [a, b] {
            assert!(site[0] % 2 == 0 && site[1] % 2 == 0, "primal holes sit at even/even sites");
            for z in (1..self.top()).step_by(2) {
                self.primal_defect.toggle(self.lattice.canonicalize([site[0], site[1], z])?);
            }
        }
        Ok(HolePair { species: DefectSpecies::Primal, a, b })
    }

    /// Add a pair of dual defect worldlines: columns of in-plane face cells at
    /// two odd/odd sites, spanning the full time extent (including the
    /// boundary slices, where they punch holes in the boundary code).
    pub fn add_dual_pair(&mut self, a: [i32; 2], b: [i32; 2]) -> Result<HolePair, LatticeError> {
        for site in [a, b] {
            assert!(site[0] % 2 == 1 && site[1] % 2 == 1, "dual holes sit at odd/odd sites");
            for z in (0..=self.top()).step_by(2) {
                self.dual_defect.toggle(self.lattice.canonicalize([site[0], site[1], z])?);
            }
        }
        Ok(HolePair { species: DefectSpecies::Dual, a, b })
    }

    /// Reroute a dual defect worldline so it braids once around a primal
    /// worldline. Between time-slabs `z` and `z + 2` (`z` odd) the straight
    /// column at `from` is interrupted — its segment face at `(from, z+1)` is
    /// removed — and the worldline instead travels out to the primal column
    /// at `around`, winds around it within slab `z`, rises one period on the
    /// far side, and returns at slab `z + 2`.
    ///
    /// Mod 2 the layout changes by one closed loop of dual edges (the detour
    /// plus the removed segment) that links the primal worldline exactly
    /// once. The interruption is essential: merely adding a disjoint closed
    /// loop would leave every straight correlation surface compatible and
    /// realize no entangling gate.
    ///
    /// `from` must be odd/odd, `around` even/even, with
    /// `from[1] == around[1] + 1` (the out-and-back sticks run along x in the
    /// row just above the target) and `from[0] < around[0]`.
    pub fn add_braid(&mut self, from: [i32; 2], around: [i32; 2], z: i32) -> Result<(), LatticeError> {
        assert!(z % 2 == 1, "braid spans the odd slabs z and z+2");
        assert!(from[0] % 2 == 1 && from[1] % 2 == 1);
        assert!(around[0] % 2 == 0 && around[1] % 2 == 0);
        assert_eq!(from[1], around[1] + 1, "sticks run along the row just above the target");
        assert!(from[0] < around[0], "sticks run in +x");
        let (ax, ay) = (around[0], around[1]);
        let mut cells: Vec<[i32; 3]> = Vec::new();
        // Interrupt the straight column between the two slabs.
        cells.push([from[0], from[1], z + 1]);
        // Out along y = from[1] at slab z, back along the same row at z + 2.
        let mut x = from[0] + 1;
        while x < ax {
            cells.push([x, from[1], z]);
            cells.push([x, from[1], z + 2]);
            x += 2;
        }
        // Wind around the primal column: down the near side, under, and up
        // the far side at slab z ...
        cells.push([ax - 1, ay, z]);
        cells.push([ax, ay - 1, z]);
        cells.push([ax + 1, ay, z]);
        // ... rise one period on the far side, close back over the top.
        cells.push([ax + 1, ay + 1, z + 1]);
        cells.push([ax, ay + 1, z + 2]);
        for raw in cells {
            let c = self.lattice.canonicalize(raw)?;
            debug_assert_eq!(c.dim(), 2);
            self.dual_defect.toggle(c);
        }
        Ok(())
    }
}

/// Species of a defect worldline.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum DefectSpecies {
    Primal,
    Dual,
}

/// Two parallel defect worldlines holding one logical qubit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HolePair {
    pub species: DefectSpecies,
    pub a: [i32; 2],
    pub b: [i32; 2],
}

/// The logical operator pair of a hole pair, expressed on the qubits of one
/// time-boundary slice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogicalOps {
    pub z_op: PauliOperator<Cell>,
    pub x_op: PauliOperator<Cell>,
}

/// L1 edge path between two even/even sites at a given slice, routed first
/// along x then along y (deterministic).
fn slice_edge_path(lat: &Lattice, a: [i32; 2], b: [i32; 2], z: i32) -> Result<Vec<Cell>, LatticeError> {
    let mut cells = Vec::new();
    let mut x = a[0];
    let step_x = if b[0] >= a[0] { 2 } else { -2 };
    while x != b[0] {
        cells.push(lat.canonicalize([x + step_x / 2, a[1], z])?);
        x += step_x;
    }
    let mut y = a[1];
    let step_y = if b[1] >= a[1] { 2 } else { -2 };
    while y != b[1] {
        cells.push(lat.canonicalize([b[0], y + step_y / 2, z])?);
        y += step_y;
    }
    Ok(cells)
}

impl HolePair {
    /// Logical operators at the slice with doubled z-coordinate `z`.
    ///
    /// Primal pair (holes at star sites): Z̄ is a Z-string of edges joining
    /// the two sites; X̄ is the retired star check, X on the four edges around
    /// one site. Dual pair (holes at plaquette sites): Z̄ is the retired
    /// plaquette check, Z on the four boundary edges of one hole face; X̄ is
    /// an X-string of edges crossing plaquette-to-plaquette between the holes.
    pub fn logical_ops(&self, lat: &Lattice, z: i32) -> Result<LogicalOps, LatticeError> {
        match self.species {
            DefectSpecies::Primal => {
                let path = slice_edge_path(lat, self.a, self.b, z)?;
                let star = star_edges(lat, [self.a[0], self.a[1], z])?;
                Ok(LogicalOps {
                    z_op: PauliOperator::z_on(path),
                    x_op: PauliOperator::x_on(star),
                })
            }
            DefectSpecies::Dual => {
                let face = lat.canonicalize([self.a[0], self.a[1], z])?;
                let ring = lat.boundary_cell(&face)?;
                // Plaquette-to-plaquette string: from an odd/odd site, step
                // through even coordinates; the crossed edges are the cells
                // between consecutive plaquettes.
                let mut cells = Vec::new();
                let (mut x, mut y) = (self.a[0], self.a[1]);
                let step_x = if self.b[0] >= x { 2 } else { -2 };
                while x != self.b[0] {
                    cells.push(lat.canonicalize([x + step_x / 2, y, z])?);
                    x += step_x;
                }
                let step_y = if self.b[1] >= y { 2 } else { -2 };
                while y != self.b[1] {
                    cells.push(lat.canonicalize([x, y + step_y / 2, z])?);
                    y += step_y;
                }
                Ok(LogicalOps {
                    z_op: PauliOperator::z_on(ring.cells.iter().copied()),
                    x_op: PauliOperator::x_on(cells),
                })
            }
        }
    }
}

/// The four in-plane edges incident to an even/even site at a slice.
fn star_edges(lat: &Lattice, v: [i32; 3]) -> Result<Vec<Cell>, LatticeError> {
    debug_assert!(v.iter().all(|c| c % 2 == 0));
    let mut out = Vec::new();
    for (dx, dy) in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
        out.push(lat.canonicalize([v[0] + dx, v[1] + dy, v[2]])?);
    }
    Ok(out)
}

/// A boundary-code check operator with its anchor site.
#[derive(Clone, Debug)]
pub struct Check {
    /// Anchor cell: the star's vertex or the plaquette's face.
    pub anchor: Cell,
    pub op: PauliOperator<Cell>,
}

/// The star and plaquette checks of the boundary code at slice `z`, holes
/// removed: a star is dropped when its site hosts a primal defect, a
/// plaquette when its face cell lies in a dual defect.
///
/// On an l×l periodic slice with no holes this yields 2l² checks whose GF(2)
/// products obey exactly two relations (all stars multiply to identity, and
/// likewise all plaquettes).
pub fn boundary_checks(layout: &DefectLayout, z: i32) -> Result<Vec<Check>, LatticeError> {
    let lat = &layout.lattice;
    let mut out = Vec::new();
    let span = |axis: usize| 2 * lat.extent[axis] as i32;
    // A star is retired when a primal worldline reaches this slice, i.e. when
    // the site's time-edge in the adjacent slab is a defect cell. (Worldlines
    // born mid-bulk retire checks only at the boundary they actually reach.)
    let probe_z = if z == 0 { 1 } else { z - 1 };
    // Stars at even/even sites.
    for x in (0..span(0)).step_by(2) {
        for y in (0..span(1)).step_by(2) {
            let probe = lat.canonicalize([x, y, probe_z])?;
            if layout.primal_defect.contains(&probe) {
                continue;
            }
            let anchor = lat.canonicalize([x, y, z])?;
            out.push(Check {
                anchor,
                op: PauliOperator::x_on(star_edges(lat, [x, y, z])?),
            });
        }
    }
    // Plaquettes at odd/odd sites.
    for x in (1..span(0)).step_by(2) {
        for y in (1..span(1)).step_by(2) {
            let face = lat.canonicalize([x, y, z])?;
            if layout.dual_defect.contains(&face) {
                continue;
            }
            let ring = lat.boundary_cell(&face)?;
            out.push(Check {
                anchor: face,
                op: PauliOperator::z_on(ring.cells.iter().copied()),
            });
        }
    }
    Ok(out)
}

/// Logical wrap operators of the bare torus boundary code at slice `z`:
/// (Z̄, X̄) pairs for the two homology classes. Z̄ of class 0 is a Z-string
/// of x-edges wrapping the x axis; its partner X̄ is an X-string of x-edges
/// wrapping y. Class 1 swaps the roles of the axes.
pub fn torus_logicals(lat: &Lattice, z: i32) -> Result<[LogicalOps; 2], LatticeError> {
    let span_x = 2 * lat.extent[0] as i32;
    let span_y = 2 * lat.extent[1] as i32;
    let mut z0 = Vec::new(); // x-edges along y = 0
    let mut x0 = Vec::new(); // x-edges along x = 1 column
    for x in (1..span_x).step_by(2) {
        z0.push(lat.canonicalize([x, 0, z])?);
    }
    for y in (0..span_y).step_by(2) {
        x0.push(lat.canonicalize([1, y, z])?);
    }
    let mut z1 = Vec::new(); // y-edges along x = 0
    let mut x1 = Vec::new(); // y-edges along y = 1 row
    for y in (1..span_y).step_by(2) {
        z1.push(lat.canonicalize([0, y, z])?);
    }
    for x in (0..span_x).step_by(2) {
        x1.push(lat.canonicalize([x, 1, z])?);
    }
    Ok([
        LogicalOps { z_op: PauliOperator::z_on(z0), x_op: PauliOperator::x_on(x0) },
        LogicalOps { z_op: PauliOperator::z_on(z1), x_op: PauliOperator::x_on(x1) },
    ])
}

/// The cluster-interaction graph of a block: one node per qubit cell, one
/// edge per incident face/edge cell pair. Preparing |+⟩ everywhere and
/// applying CZ along every graph edge yields the cluster state whose
/// stabilizer at face f is X(f)·Z(∂f).
pub fn cluster_graph(lat: &Lattice) -> (Vec<Cell>, Vec<(Cell, Cell)>) {
    let mut nodes = lat.cells(1);
    nodes.extend(lat.cells(2));
    nodes.sort();
    let mut edges = Vec::new();
    for f in lat.cells(2) {
        let ring = lat.boundary_cell(&f).expect("face in lattice");
        for e in ring.cells {
            edges.push((f.min(e), f.max(e)));
        }
    }
    edges.sort();
    edges.dedup();
    (nodes, edges)
}
