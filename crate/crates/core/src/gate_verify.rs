//! Correlation surfaces and logical-gate verification for defect layouts.
//!
//! A correlation surface is a GF(2) chain whose cluster-stabilizer product
//! survives the measurement pattern of a layout. A primal surface is a
//! 2-chain c of face cells, acting as X(c)·Z(∂c); a dual surface is a set of
//! dual faces — addressed by the primal edge cells sharing their centers —
//! acting as X(c)·Z(δc), where the primal coboundary δ is exactly the
//! dual-complex boundary under this addressing.
//!
//! Compatibility with the measurement pattern is local: X factors may sit on
//! X-measured vacuum or unmeasured qubits, never on Z-measured defect cells;
//! Z factors may sit on Z-measured defect cells or unmeasured qubits, never
//! on vacuum. The surviving restriction to unmeasured qubits (input, output,
//! injection) is the induced logical operator, taken in the reference frame
//! where every measurement returned +1.
//!
//! A gate fixture bundles a layout with claimed stabilizer flows
//! (input generator → output generator) and one witness surface per flow;
//! [`verify_gate`] re-checks every witness from scratch. The witnesses
//! themselves can be found by [`solve_surface`], which reduces "does a
//! compatible surface with this induced operator exist?" to a GF(2) linear
//! system over the vacuum cells.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chain_complex::{Cell, Chain, LatticeError};
use crate::geometry::{DefectLayout, Region};
use crate::gf2::{solve, BitMatrix};
use crate::pauli::{PauliOperator, Phase};

/// Which chain complex a correlation surface lives in.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum SurfaceKind {
    /// Face cells; operator X(c)·Z(∂c).
    Primal,
    /// Dual faces at primal edge addresses; operator X(c)·Z(δc).
    Dual,
}

/// A correlation surface: the kind plus its support chain.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorrelationSurface {
    pub kind: SurfaceKind,
    pub chain: Chain,
}

impl CorrelationSurface {
    pub fn primal(chain: Chain) -> Self {
        assert_eq!(chain.dim, 2);
        CorrelationSurface { kind: SurfaceKind::Primal, chain }
    }

    pub fn dual(chain: Chain) -> Self {
        assert_eq!(chain.dim, 1);
        CorrelationSurface { kind: SurfaceKind::Dual, chain }
    }

    /// The Z-carrying partner chain: ∂c for primal, δc for dual.
    pub fn partner(&self, layout: &DefectLayout) -> Result<Chain, LatticeError> {
        match self.kind {
            SurfaceKind::Primal => layout.lattice.boundary(&self.chain),
            SurfaceKind::Dual => layout.lattice.coboundary(&self.chain),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum VerifyError {
    #[error("surface has wrong chain dimension: {0}")]
    WrongSurfaceDimension(u8),
    #[error("X factor on Z-measured defect cell {0:?}")]
    XOnDefect(Cell),
    #[error("Z factor on X-measured vacuum cell {0:?}")]
    ZOnVacuum(Cell),
    #[error("operator touches non-qubit cell {0:?}")]
    NotAQubit(Cell),
    #[error("lattice error: {0}")]
    Lattice(#[from] LatticeError),
    #[error("claimed flow references cell {0:?} outside the unmeasured regions")]
    ClaimOutsideBoundary(Cell),
    #[error("induced operator {got} does not match the claimed flow {want}")]
    FlowMismatch { want: String, got: String },
}

/// Check a surface against the measurement pattern and return the induced
/// logical operator on the unmeasured qubits.
pub fn induced_operator(
    layout: &DefectLayout,
    surface: &CorrelationSurface,
) -> Result<PauliOperator<Cell>, VerifyError> {
    let expected_dim = match surface.kind {
        SurfaceKind::Primal => 2,
        SurfaceKind::Dual => 1,
    };
    if surface.chain.dim != expected_dim {
        return Err(VerifyError::WrongSurfaceDimension(surface.chain.dim));
    }
    let partner = surface.partner(layout)?;
    let mut op = PauliOperator::identity();
    for c in &surface.chain.cells {
        match layout.region(c) {
            Region::Vacuum => {} // X-measured: absorbed into the outcome frame
            Region::Input | Region::Output | Region::Injection => {
                op.xs.insert(*c);
            }
            Region::PrimalDefect | Region::DualDefect => {
                return Err(VerifyError::XOnDefect(*c));
            }
            Region::NotAQubit => return Err(VerifyError::NotAQubit(*c)),
        }
    }
    for c in &partner.cells {
        match layout.region(c) {
            Region::PrimalDefect | Region::DualDefect => {} // Z-measured
            Region::Input | Region::Output | Region::Injection => {
                op.zs.insert(*c);
            }
            Region::Vacuum => return Err(VerifyError::ZOnVacuum(*c)),
            Region::NotAQubit => return Err(VerifyError::NotAQubit(*c)),
        }
    }
    Ok(op)
}

/// One claimed stabilizer flow of a gate, with its witness surface.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StabilizerFlow {
    /// Human-readable label, e.g. `"Zt -> Zc Zt"`.
    pub name: String,
    /// Generator on input and injection qubits (identity for preparations).
    pub input: PauliOperator<Cell>,
    /// Generator on output and injection qubits.
    pub output: PauliOperator<Cell>,
    pub surface: CorrelationSurface,
}

/// A verified logical-gate description: layout plus one flow per generator.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GateFixture {
    /// Name of the realized logical operation, e.g. `"cnot"`.
    pub gate: String,
    pub layout: DefectLayout,
    pub flows: Vec<StabilizerFlow>,
}

/// Verification result for one flow.
#[derive(Clone, Debug, Serialize)]
pub struct FlowReport {
    pub name: String,
    pub passed: bool,
    pub detail: Option<String>,
}

/// Verification result for a whole fixture.
#[derive(Clone, Debug, Serialize)]
pub struct GateReport {
    pub gate: String,
    pub flows: Vec<FlowReport>,
    /// Input and output commutation patterns agree pairwise (flows describe
    /// an automorphism of the logical Pauli group).
    pub commutation_consistent: bool,
}

impl GateReport {
    pub fn passed(&self) -> bool {
        self.commutation_consistent && self.flows.iter().all(|f| f.passed)
    }
}

fn check_claim_support(
    layout: &DefectLayout,
    op: &PauliOperator<Cell>,
    output_side: bool,
) -> Result<(), VerifyError> {
    for c in op.support() {
        let ok = match layout.region(&c) {
            Region::Injection => true,
            Region::Input => !output_side,
            Region::Output => output_side,
            _ => false,
        };
        if !ok {
            return Err(VerifyError::ClaimOutsideBoundary(c));
        }
    }
    Ok(())
}

/// Verify one flow: the witness surface must be compatible and its induced
/// operator must equal input·output exactly (phase +1 in the all-plus frame).
pub fn verify_flow(layout: &DefectLayout, flow: &StabilizerFlow) -> Result<(), VerifyError> {
    check_claim_support(layout, &flow.input, false)?;
    check_claim_support(layout, &flow.output, true)?;
    let induced = induced_operator(layout, &flow.surface)?;
    let want = flow.input.times(&flow.output);
    if induced != want || want.phase != Phase::ONE {
        return Err(VerifyError::FlowMismatch {
            want: format!("{want}"),
            got: format!("{induced}"),
        });
    }
    Ok(())
}

/// Re-verify every flow of a fixture from scratch.
pub fn verify_gate(fixture: &GateFixture) -> GateReport {
    let flows = fixture
        .flows
        .iter()
        .map(|flow| match verify_flow(&fixture.layout, flow) {
            Ok(()) => FlowReport { name: flow.name.clone(), passed: true, detail: None },
            Err(e) => FlowReport {
                name: flow.name.clone(),
                passed: false,
                detail: Some(e.to_string()),
            },
        })
        .collect();
    // The flow map must preserve commutation: inputs commute exactly when
    // outputs do. (Injection cells appear on both sides; the products
    // input·output of two flows must commute pairwise for a well-defined
    // Clifford action.)
    let mut commutation_consistent = true;
    for (i, a) in fixture.flows.iter().enumerate() {
        for b in fixture.flows.iter().skip(i + 1) {
            let in_comm = a.input.commutes_with(&b.input);
            let out_comm = a.output.commutes_with(&b.output);
            let total_comm = a.input.times(&a.output).commutes_with(&b.input.times(&b.output));
            if in_comm != out_comm || !total_comm {
                commutation_consistent = false;
            }
        }
    }
    GateReport { gate: fixture.gate.clone(), flows, commutation_consistent }
}

/// Find a compatible correlation surface with the given induced operator, or
/// prove none exists.
///
/// The search is exact: cells in vacuum are unknowns, unmeasured cells are
/// pinned to the claimed X support, and every non-defect cell of the partner
/// dimension contributes one GF(2) parity equation (zero in the bulk, the
/// claimed Z support on the boundary). Defect cells of the partner dimension
/// are unconstrained — surfaces may end there. The solution with the
/// lexicographically-first free-variable assignment is returned, so rebuilds
/// are deterministic.
pub fn solve_surface(
    layout: &DefectLayout,
    kind: SurfaceKind,
    claimed: &PauliOperator<Cell>,
) -> Result<Option<CorrelationSurface>, VerifyError> {
    let (chain_dim, partner_dim) = match kind {
        SurfaceKind::Primal => (2u8, 1u8),
        SurfaceKind::Dual => (1u8, 2u8),
    };
    // Claimed X cells must be unmeasured cells of the surface dimension, and
    // claimed Z cells unmeasured cells of the partner dimension.
    for c in &claimed.xs {
        if c.dim() != chain_dim || !layout.is_unmeasured(c) {
            return Err(VerifyError::ClaimOutsideBoundary(*c));
        }
    }
    for c in &claimed.zs {
        if c.dim() != partner_dim || !layout.is_unmeasured(c) {
            return Err(VerifyError::ClaimOutsideBoundary(*c));
        }
    }

    let mut vars: Vec<Cell> = Vec::new();
    let mut var_index: BTreeMap<Cell, usize> = BTreeMap::new();
    for c in layout.lattice.cells(chain_dim) {
        if layout.region(&c) == Region::Vacuum {
            var_index.insert(c, vars.len());
            vars.push(c);
        }
    }

    // Incidence: partner cell → (variable columns, fixed parity).
    let mut rows: BTreeMap<Cell, (Vec<usize>, bool)> = BTreeMap::new();
    let touch = |rows: &mut BTreeMap<Cell, (Vec<usize>, bool)>,
                 partner_cell: Cell,
                 var: Option<usize>| {
        let entry = rows.entry(partner_cell).or_insert_with(|| (Vec::new(), false));
        match var {
            Some(j) => entry.0.push(j),
            None => entry.1 ^= true,
        }
    };
    let partner_cells_of = |c: &Cell| -> Result<Chain, LatticeError> {
        match kind {
            SurfaceKind::Primal => layout.lattice.boundary_cell(c),
            SurfaceKind::Dual => layout.lattice.coboundary_cell(c),
        }
    };
    for (j, c) in vars.iter().enumerate() {
        for p in partner_cells_of(c)?.cells {
            touch(&mut rows, p, Some(j));
        }
    }
    for c in &claimed.xs {
        for p in partner_cells_of(c)?.cells {
            touch(&mut rows, p, None);
        }
    }
    // Every non-defect partner cell in the lattice constrains the system,
    // including cells no candidate surface touches (their equation is 0 = b).
    let mut equations: Vec<(Vec<usize>, bool)> = Vec::new();
    for p in layout.lattice.cells(partner_dim) {
        match layout.region(&p) {
            Region::PrimalDefect | Region::DualDefect => continue,
            Region::NotAQubit => continue,
            _ => {}
        }
        let (cols, fixed_parity) = rows.remove(&p).unwrap_or_default();
        let want = claimed.zs.contains(&p);
        equations.push((cols, want ^ fixed_parity));
    }

    let mut a = BitMatrix::zero(equations.len(), vars.len());
    let mut b = vec![false; equations.len()];
    for (r, (cols, rhs)) in equations.iter().enumerate() {
        for &j in cols {
            // GF(2): double incidence cancels (possible only on tiny wraps).
            let cur = a.get(r, j);
            a.set(r, j, !cur);
        }
        b[r] = *rhs;
    }
    let Some(x) = solve(&a, &b) else {
        return Ok(None);
    };
    let mut chain = Chain::empty(chain_dim);
    for (j, &on) in x.iter().enumerate() {
        if on {
            chain.toggle(vars[j]);
        }
    }
    for c in &claimed.xs {
        chain.toggle(*c);
    }
    Ok(Some(CorrelationSurface { kind, chain }))
}

/// Does any compatible surface induce the claimed operator?
pub fn surface_exists(
    layout: &DefectLayout,
    kind: SurfaceKind,
    claimed: &PauliOperator<Cell>,
) -> bool {
    matches!(solve_surface(layout, kind, claimed), Ok(Some(_)))
}
