//! Built-in gate fixtures: defect layouts with verified stabilizer flows.
//!
//! Each builder constructs a layout and finds every witness surface with the
//! exact GF(2) solver — nothing is hand-drawn. The results are frozen as JSON
//! under `fixtures/v1/` so the shipped artifacts cannot drift from the
//! builders silently: a test regenerates each fixture and compares it
//! byte-for-byte against the frozen file, and another re-verifies every
//! frozen flow from scratch.
//!
//! The five fixtures:
//!
//! * `identity` — bare memory block; the four torus wrap generators flow
//!   through unchanged.
//! * `cnot` — a dual-species hole pair (control) braided once around a
//!   primal-species hole pair (target): X̄c → X̄c X̄t and Z̄t → Z̄c Z̄t while
//!   the conjugate generators pass straight through.
//! * `prep_z` — a primal hole pair born in the bulk as a ∪-shaped worldline;
//!   the new logical qubit comes out in the +1 eigenstate of Z̄.
//! * `prep_x` — a primal hole pair born as two free strand ends (with a
//!   small dual reference ring marking one birth); the qubit comes out in
//!   the +1 eigenstate of X̄.
//! * `injection` — a primal hole pair born around a single unmeasured bulk
//!   qubit; both Paulis of that qubit flow onto the logical qubit, i.e. the
//!   arbitrary injected state is encoded.

use crate::chain_complex::Cell;
use crate::gate_verify::{solve_surface, GateFixture, StabilizerFlow, SurfaceKind};
use crate::geometry::{DefectLayout, DefectSpecies, HolePair};
use crate::pauli::PauliOperator;

/// Names of the built-in fixtures, in presentation order.
pub const FIXTURE_NAMES: [&str; 5] = ["identity", "cnot", "prep_z", "prep_x", "injection"];

/// Parse a frozen built-in fixture.
pub fn load_fixture(name: &str) -> Option<GateFixture> {
    let json = match name {
        "identity" => include_str!("../fixtures/v1/identity.json"),
        "cnot" => include_str!("../fixtures/v1/cnot.json"),
        "prep_z" => include_str!("../fixtures/v1/prep_z.json"),
        "prep_x" => include_str!("../fixtures/v1/prep_x.json"),
        "injection" => include_str!("../fixtures/v1/injection.json"),
        _ => return None,
    };
    Some(serde_json::from_str(json).expect("frozen fixture parses"))
}

/// Rebuild a fixture from its layout definition (used by tests to guard the
/// frozen files; prefer [`load_fixture`] everywhere else).
pub fn build_fixture(name: &str) -> Option<GateFixture> {
    match name {
        "identity" => Some(identity_fixture()),
        "cnot" => Some(cnot_fixture()),
        "prep_z" => Some(prep_z_fixture()),
        "prep_x" => Some(prep_x_fixture()),
        "injection" => Some(injection_fixture()),
        _ => None,
    }
}

fn solved_flow(
    layout: &DefectLayout,
    name: &str,
    kind: SurfaceKind,
    input: PauliOperator<Cell>,
    output: PauliOperator<Cell>,
) -> StabilizerFlow {
    let claimed = input.times(&output);
    let surface = solve_surface(layout, kind, &claimed)
        .expect("claim is well-formed")
        .unwrap_or_else(|| panic!("no witness surface for {name}"));
    StabilizerFlow { name: name.to_string(), input, output, surface }
}

/// Bare memory block: all four torus wrap generators pass through.
pub fn identity_fixture() -> GateFixture {
    let layout = DefectLayout::memory_block(3, 2);
    let ins = crate::geometry::torus_logicals(&layout.lattice, 0).unwrap();
    let outs = crate::geometry::torus_logicals(&layout.lattice, layout.top()).unwrap();
    let flows = vec![
        solved_flow(&layout, "Z0 -> Z0", SurfaceKind::Primal, ins[0].z_op.clone(), outs[0].z_op.clone()),
        solved_flow(&layout, "X0 -> X0", SurfaceKind::Dual, ins[0].x_op.clone(), outs[0].x_op.clone()),
        solved_flow(&layout, "Z1 -> Z1", SurfaceKind::Primal, ins[1].z_op.clone(), outs[1].z_op.clone()),
        solved_flow(&layout, "X1 -> X1", SurfaceKind::Dual, ins[1].x_op.clone(), outs[1].x_op.clone()),
    ];
    GateFixture { gate: "identity".into(), layout, flows }
}

/// The braided-hole entangling gate layout: control and target hole pairs
/// plus one braid. Returns the layout and the two pairs. The block keeps one
/// clear slab above the braid — correlation surfaces must wrap over the
/// detour, which needs room before the output slice.
fn cnot_layout() -> (DefectLayout, HolePair, HolePair) {
    let mut layout = DefectLayout::memory_block(6, 4);
    let control = layout.add_dual_pair([1, 1], [1, 5]).unwrap();
    let target = layout.add_primal_pair([6, 0], [6, 4]).unwrap();
    layout.add_braid([1, 1], [6, 0], 3).unwrap();
    (layout, control, target)
}

pub fn cnot_fixture() -> GateFixture {
    let (layout, control, target) = cnot_layout();
    let c_in = control.logical_ops(&layout.lattice, 0).unwrap();
    let t_in = target.logical_ops(&layout.lattice, 0).unwrap();
    let c_out = control.logical_ops(&layout.lattice, layout.top()).unwrap();
    let t_out = target.logical_ops(&layout.lattice, layout.top()).unwrap();
    let flows = vec![
        solved_flow(&layout, "Zc -> Zc", SurfaceKind::Primal, c_in.z_op.clone(), c_out.z_op.clone()),
        solved_flow(
            &layout,
            "Xc -> Xc Xt",
            SurfaceKind::Dual,
            c_in.x_op.clone(),
            c_out.x_op.times(&t_out.x_op),
        ),
        solved_flow(
            &layout,
            "Zt -> Zc Zt",
            SurfaceKind::Primal,
            t_in.z_op.clone(),
            c_out.z_op.times(&t_out.z_op),
        ),
        solved_flow(&layout, "Xt -> Xt", SurfaceKind::Dual, t_in.x_op.clone(), t_out.x_op.clone()),
    ];
    GateFixture { gate: "cnot".into(), layout, flows }
}

/// A primal hole pair born in the bulk as one connected ∪-shaped worldline:
/// two columns joined by an arc at the birth slab. Returns the layout and
/// the pair; the worldline reaches only the output boundary.
fn born_pair_layout(arc: bool) -> (DefectLayout, HolePair) {
    let mut layout = DefectLayout::memory_block(4, 3);
    let (a, b) = ([0, 0], [0, 4]);
    let birth = if arc { 2 } else { 4 };
    for site in [a, b] {
        let mut z = birth + 1;
        while z < layout.top() {
            let c = layout.lattice.canonicalize([site[0], site[1], z]).unwrap();
            layout.primal_defect.toggle(c);
            z += 2;
        }
    }
    if arc {
        // The arc joining the two birth points, closing the ∪.
        for raw in [[0, 1, birth], [0, 3, birth]] {
            let c = layout.lattice.canonicalize(raw).unwrap();
            layout.primal_defect.toggle(c);
        }
    } else {
        // Free birth: mark one strand's birth with a dual reference ring —
        // the four vertical faces just below the first column edge, a
        // homologically trivial dual loop for X̄'s surface to end on.
        for raw in [[1, 0, birth - 1], [-1, 0, birth - 1], [0, 1, birth - 1], [0, -1, birth - 1]] {
            let c = layout.lattice.canonicalize(raw).unwrap();
            layout.dual_defect.toggle(c);
        }
    }
    (layout, HolePair { species: DefectSpecies::Primal, a, b })
}

pub fn prep_z_fixture() -> GateFixture {
    let (layout, pair) = born_pair_layout(true);
    let out = pair.logical_ops(&layout.lattice, layout.top()).unwrap();
    let flows = vec![solved_flow(
        &layout,
        "1 -> Zq",
        SurfaceKind::Primal,
        PauliOperator::identity(),
        out.z_op,
    )];
    GateFixture { gate: "prep_z".into(), layout, flows }
}

pub fn prep_x_fixture() -> GateFixture {
    let (layout, pair) = born_pair_layout(false);
    let out = pair.logical_ops(&layout.lattice, layout.top()).unwrap();
    let flows = vec![solved_flow(
        &layout,
        "1 -> Xq",
        SurfaceKind::Dual,
        PauliOperator::identity(),
        out.x_op,
    )];
    GateFixture { gate: "prep_x".into(), layout, flows }
}

/// A primal hole pair born around one unmeasured bulk qubit: the edge between
/// the two birth points is left unmeasured and its state is encoded.
fn injection_layout() -> (DefectLayout, Cell, HolePair) {
    let mut layout = DefectLayout::memory_block(4, 3);
    let (a, b) = ([0, 0], [0, 2]);
    let birth = 2;
    for site in [a, b] {
        let mut z = birth + 1;
        while z < layout.top() {
            let c = layout.lattice.canonicalize([site[0], site[1], z]).unwrap();
            layout.primal_defect.toggle(c);
            z += 2;
        }
    }
    let s = layout.lattice.canonicalize([0, 1, birth]).unwrap();
    layout.injection.insert(s);
    (layout, s, HolePair { species: DefectSpecies::Primal, a, b })
}

pub fn injection_fixture() -> GateFixture {
    let (layout, s, pair) = injection_layout();
    let out = pair.logical_ops(&layout.lattice, layout.top()).unwrap();
    let flows = vec![
        solved_flow(&layout, "Zs -> Zq", SurfaceKind::Primal, PauliOperator::z_on([s]), out.z_op),
        solved_flow(&layout, "Xs -> Xq", SurfaceKind::Dual, PauliOperator::x_on([s]), out.x_op),
    ];
    GateFixture { gate: "injection".into(), layout, flows }
}
