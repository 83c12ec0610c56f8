//! Noise models and Pauli-frame simulation of the measurement schedule.
//!
//! The circuit-level model follows the array through every elementary step:
//! each preparation and Hadamard is followed by a uniform single-qubit Pauli
//! fault with probability p (p/3 each), each CZ by one of the fifteen
//! non-identity two-qubit Paulis (p/15 each), and each measurement outcome is
//! classically flipped with probability p. Because the ideal circuit is a
//! stabilizer circuit with stationary syndromes, only the *difference* from
//! the noiseless run matters, and that difference is a Pauli frame — two bits
//! per qubit — propagated through the Clifford steps.
//!
//! A trial runs a block of noisy periods followed by [`FLUSH_PERIODS`]
//! noiseless ones, so every transient fault finishes writing its syndrome
//! signature inside the record (time boundaries are treated as perfect).
//! Syndrome flips are time-differenced into defects; each sector — star
//! ancillas and plaquette ancillas — yields an independent matching problem.
//! At the end of the run the star sector reads the persistent X frame of the
//! code qubits and the plaquette sector the persistent Z frame; these
//! residuals, combined with the decoder's correction, decide whether the
//! trial preserved the logical state.
//!
//! The phenomenological model skips the circuit: per round, every code qubit
//! flips with probability p and every check measurement is wrong with
//! probability p, followed by one perfect round. Both models produce the same
//! [`SectorRecord`] shape for the decoder.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::schedule::{gates_at, role_of, Array2d, Gate, Role, PERIOD};

/// Noiseless periods appended after the noisy block. Two are enough: a fault
/// injected right after its last read in one period is read in the next, so
/// every syndrome signature completes within two extra periods.
pub const FLUSH_PERIODS: usize = 2;

/// Which ancilla species produced a record.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum SectorKind {
    /// Checks at even/even sites.
    Star,
    /// Checks at odd/odd sites.
    Plaquette,
}

impl SectorKind {
    /// Grid coordinates of a check site: the node (a, b) with a, b in 0..l.
    pub fn node_of(self, site: [i32; 2]) -> [usize; 2] {
        match self {
            SectorKind::Star => [(site[0] / 2) as usize, (site[1] / 2) as usize],
            SectorKind::Plaquette => [((site[0] - 1) / 2) as usize, ((site[1] - 1) / 2) as usize],
        }
    }

    /// Check site of a grid node.
    pub fn site_of(self, node: [usize; 2]) -> [i32; 2] {
        match self {
            SectorKind::Star => [2 * node[0] as i32, 2 * node[1] as i32],
            SectorKind::Plaquette => [2 * node[0] as i32 + 1, 2 * node[1] as i32 + 1],
        }
    }
}

/// One sector's decoding problem: defects on an l×l×layers grid (periodic in
/// space, open in time) plus the persistent data error left on the code
/// qubits at the end of the run.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SectorRecord {
    pub l: usize,
    pub layers: usize,
    pub sector: SectorKind,
    /// Defect nodes (a, b, layer): check sites whose outcome differs from
    /// the previous round's.
    pub defects: Vec<[usize; 3]>,
    /// Code-qubit sites carrying a persistent flip visible to this sector.
    pub residual: BTreeSet<[i32; 2]>,
}

/// The two sectors of one memory trial.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TrialRecord {
    pub star: SectorRecord,
    pub plaquette: SectorRecord,
}

/// A single-qubit Pauli fault.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SinglePauli {
    X,
    Y,
    Z,
}

pub const SINGLE_PAULIS: [SinglePauli; 3] = [SinglePauli::X, SinglePauli::Y, SinglePauli::Z];

/// The `i`-th of the fifteen non-identity two-qubit Paulis, as the optional
/// single-qubit faults on each leg (i in 0..15; i+1 = 4·a + b over I,X,Y,Z).
pub fn two_qubit_pauli(i: usize) -> (Option<SinglePauli>, Option<SinglePauli>) {
    assert!(i < 15);
    let leg = |c: usize| match c {
        0 => None,
        1 => Some(SinglePauli::X),
        2 => Some(SinglePauli::Y),
        3 => Some(SinglePauli::Z),
        _ => unreachable!(),
    };
    ((leg((i + 1) / 4)), leg((i + 1) % 4))
}

/// The Pauli frame of the array: the difference from the noiseless run.
#[derive(Clone, Debug)]
pub struct Frame {
    array: Array2d,
    x: Vec<bool>,
    z: Vec<bool>,
}

impl Frame {
    pub fn new(array: Array2d) -> Self {
        let n = array.sites().len();
        Frame { array, x: vec![false; n], z: vec![false; n] }
    }

    pub fn x_bit(&self, site: [i32; 2]) -> bool {
        self.x[self.array.index_of(site)]
    }

    pub fn z_bit(&self, site: [i32; 2]) -> bool {
        self.z[self.array.index_of(site)]
    }

    /// Inject a Pauli fault.
    pub fn fault(&mut self, site: [i32; 2], pauli: SinglePauli) {
        let q = self.array.index_of(site);
        match pauli {
            SinglePauli::X => self.x[q] ^= true,
            SinglePauli::Z => self.z[q] ^= true,
            SinglePauli::Y => {
                self.x[q] ^= true;
                self.z[q] ^= true;
            }
        }
    }

    /// Propagate the frame through one ideal gate. Measurements leave the
    /// frame untouched (the ancilla is re-prepared before its next use).
    fn step(&mut self, gate: &Gate) {
        match *gate {
            Gate::Prep(s) => {
                let q = self.array.index_of(s);
                self.x[q] = false;
                self.z[q] = false;
            }
            Gate::Hadamard(s) => {
                let q = self.array.index_of(s);
                let (xb, zb) = (self.x[q], self.z[q]);
                self.x[q] = zb;
                self.z[q] = xb;
            }
            Gate::Cz(a, b) => {
                let (qa, qb) = (self.array.index_of(a), self.array.index_of(b));
                self.z[qa] ^= self.x[qb];
                self.z[qb] ^= self.x[qa];
            }
            Gate::MeasureX(_) => {}
        }
    }
}

/// Run the schedule for `periods` periods, calling `inject` after every gate
/// is applied to the frame. For `MeasureX` gates, `inject`'s return value
/// says whether the recorded outcome is classically flipped; it is ignored
/// for all other gates.
pub fn run_circuit<F>(array: &Array2d, periods: usize, mut inject: F) -> TrialRecord
where
    F: FnMut(usize, &Gate, &mut Frame) -> bool,
{
    let mut frame = Frame::new(*array);
    let mut flips: BTreeMap<[i32; 2], Vec<bool>> = array
        .sites()
        .into_iter()
        .filter(|s| matches!(role_of(*s), Role::Star | Role::Plaquette))
        .map(|s| (s, vec![false; periods]))
        .collect();
    for t in 0..PERIOD * periods {
        for gate in gates_at(array, t) {
            if let Gate::MeasureX(s) = &gate {
                let mut flipped = frame.z_bit(*s);
                if inject(t, &gate, &mut frame) {
                    flipped = !flipped;
                }
                flips.get_mut(s).unwrap()[t / PERIOD] = flipped;
            } else {
                frame.step(&gate);
                inject(t, &gate, &mut frame);
            }
        }
    }
    extract_record(array, &flips, &frame, periods)
}

fn extract_record(
    array: &Array2d,
    flips: &BTreeMap<[i32; 2], Vec<bool>>,
    frame: &Frame,
    periods: usize,
) -> TrialRecord {
    let blank = |sector| SectorRecord {
        l: array.l,
        layers: periods,
        sector,
        defects: Vec::new(),
        residual: BTreeSet::new(),
    };
    let mut star = blank(SectorKind::Star);
    let mut plaquette = blank(SectorKind::Plaquette);
    for (site, hist) in flips {
        let record = match role_of(*site) {
            Role::Star => &mut star,
            Role::Plaquette => &mut plaquette,
            _ => unreachable!(),
        };
        let node = record.sector.node_of(*site);
        let mut prev = false;
        for (k, &f) in hist.iter().enumerate() {
            if f != prev {
                record.defects.push([node[0], node[1], k]);
            }
            prev = f;
        }
    }
    for site in array.sites() {
        if matches!(role_of(site), Role::CodeX | Role::CodeY) {
            if frame.x_bit(site) {
                star.residual.insert(site);
            }
            if frame.z_bit(site) {
                plaquette.residual.insert(site);
            }
        }
    }
    debug_assert_eq!(star.defects.len() % 2, 0, "star defects must pair up");
    debug_assert_eq!(plaquette.defects.len() % 2, 0, "plaquette defects must pair up");
    TrialRecord { star, plaquette }
}

/// One memory trial of the circuit-level model: `noisy_periods` periods with
/// faults at strength `p`, then the noiseless flush.
pub fn run_trial_circuit(
    array: &Array2d,
    noisy_periods: usize,
    p: f64,
    rng: &mut impl Rng,
) -> TrialRecord {
    let horizon = PERIOD * noisy_periods;
    run_circuit(array, noisy_periods + FLUSH_PERIODS, |t, gate, frame| {
        if t >= horizon {
            return false;
        }
        match *gate {
            Gate::Prep(s) | Gate::Hadamard(s) => {
                if rng.gen::<f64>() < p {
                    frame.fault(s, SINGLE_PAULIS[rng.gen_range(0..3)]);
                }
                false
            }
            Gate::Cz(a, b) => {
                if rng.gen::<f64>() < p {
                    let (fa, fb) = two_qubit_pauli(rng.gen_range(0..15));
                    if let Some(f) = fa {
                        frame.fault(a, f);
                    }
                    if let Some(f) = fb {
                        frame.fault(b, f);
                    }
                }
                false
            }
            Gate::MeasureX(_) => rng.gen::<f64>() < p,
        }
    })
}

/// Where a deterministic fault strikes: after the gate at the given absolute
/// step that matches `gate` exactly.
#[derive(Clone, Debug)]
pub enum FaultChoice {
    Single(SinglePauli),
    /// Index into [`two_qubit_pauli`]; the gate must be a CZ.
    Pair(usize),
    /// Classical flip; the gate must be a measurement.
    MeasFlip,
}

/// Run with exactly one injected fault (plus the flush) — the workhorse of
/// the exhaustive fault-propagation tests.
pub fn run_single_fault(
    array: &Array2d,
    noisy_periods: usize,
    step: usize,
    target: &Gate,
    choice: &FaultChoice,
) -> TrialRecord {
    run_circuit(array, noisy_periods + FLUSH_PERIODS, |t, gate, frame| {
        if t != step || gate != target {
            return false;
        }
        match (choice, gate) {
            (FaultChoice::Single(pauli), Gate::Prep(s) | Gate::Hadamard(s)) => {
                frame.fault(*s, *pauli);
                false
            }
            (FaultChoice::Pair(i), Gate::Cz(a, b)) => {
                let (fa, fb) = two_qubit_pauli(*i);
                if let Some(f) = fa {
                    frame.fault(*a, f);
                }
                if let Some(f) = fb {
                    frame.fault(*b, f);
                }
                false
            }
            (FaultChoice::MeasFlip, Gate::MeasureX(_)) => true,
            _ => panic!("fault choice does not fit gate {gate:?}"),
        }
    })
}

/// One phenomenological sector: an l×l toric-code sector measured for
/// `rounds` noisy rounds (data flips and measurement flips both at p) plus a
/// final perfect round.
pub fn run_sector_phenomenological(
    l: usize,
    rounds: usize,
    p: f64,
    sector: SectorKind,
    rng: &mut impl Rng,
) -> SectorRecord {
    let array = Array2d::new(l);
    let code_sites: Vec<[i32; 2]> = array
        .sites()
        .into_iter()
        .filter(|s| matches!(role_of(*s), Role::CodeX | Role::CodeY))
        .collect();
    let checks: Vec<[i32; 2]> = array
        .sites()
        .into_iter()
        .filter(|s| match sector {
            SectorKind::Star => role_of(*s) == Role::Star,
            SectorKind::Plaquette => role_of(*s) == Role::Plaquette,
        })
        .collect();
    let syndrome = |error: &BTreeSet<[i32; 2]>, check: [i32; 2]| -> bool {
        let mut parity = false;
        for d in [[1, 0], [-1, 0], [0, 1], [0, -1]] {
            let q = array.canonical([check[0] + d[0], check[1] + d[1]]);
            parity ^= error.contains(&q);
        }
        parity
    };
    let mut error: BTreeSet<[i32; 2]> = BTreeSet::new();
    let mut record = SectorRecord {
        l,
        layers: rounds + 1,
        sector,
        defects: Vec::new(),
        residual: BTreeSet::new(),
    };
    let mut prev: BTreeMap<[i32; 2], bool> = checks.iter().map(|c| (*c, false)).collect();
    for k in 0..=rounds {
        if k < rounds {
            for q in &code_sites {
                if rng.gen::<f64>() < p {
                    if !error.remove(q) {
                        error.insert(*q);
                    }
                }
            }
        }
        for check in &checks {
            let mut m = syndrome(&error, *check);
            if k < rounds && rng.gen::<f64>() < p {
                m = !m; // measurement error; the last round is perfect
            }
            if m != prev[check] {
                let node = sector.node_of(*check);
                record.defects.push([node[0], node[1], k]);
            }
            prev.insert(*check, m);
        }
    }
    record.residual = error;
    debug_assert_eq!(record.defects.len() % 2, 0);
    record
}

/// One memory trial of the phenomenological model: the two sectors are
/// independent copies of the same process.
pub fn run_trial_phenomenological(
    l: usize,
    rounds: usize,
    p: f64,
    rng: &mut impl Rng,
) -> TrialRecord {
    TrialRecord {
        star: run_sector_phenomenological(l, rounds, p, SectorKind::Star, rng),
        plaquette: run_sector_phenomenological(l, rounds, p, SectorKind::Plaquette, rng),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn defect_set(r: &SectorRecord) -> BTreeSet<[usize; 3]> {
        r.defects.iter().copied().collect()
    }

    #[test]
    fn two_qubit_pauli_enumeration_and_marginal() {
        let mut seen = BTreeSet::new();
        let mut first_counts = BTreeMap::new();
        let mut nontrivial_first = 0;
        for i in 0..15 {
            let (a, b) = two_qubit_pauli(i);
            assert!(a.is_some() || b.is_some(), "identity pair at {i}");
            assert!(seen.insert(format!("{a:?}{b:?}")), "duplicate at {i}");
            if let Some(pa) = a {
                *first_counts.entry(format!("{pa:?}")).or_insert(0) += 1;
                nontrivial_first += 1;
            }
        }
        // Marginal on one leg: each Pauli 4/15, any fault 12/15 = 4p/5 at
        // channel strength p — the depolarizing marginal.
        assert_eq!(nontrivial_first, 12);
        for (_, count) in first_counts {
            assert_eq!(count, 4);
        }
    }

    #[test]
    fn noiseless_run_is_silent() {
        let array = Array2d::new(3);
        let record = run_circuit(&array, 4, |_, _, _| false);
        assert!(record.star.defects.is_empty());
        assert!(record.plaquette.defects.is_empty());
        assert!(record.star.residual.is_empty());
        assert!(record.plaquette.residual.is_empty());
    }

    #[test]
    fn measurement_flip_makes_a_time_pair() {
        let array = Array2d::new(3);
        // Star ancilla (2,2) measures at step 2 of each period; flip period 1.
        let record = run_single_fault(
            &array,
            2,
            PERIOD + 2,
            &Gate::MeasureX([2, 2]),
            &FaultChoice::MeasFlip,
        );
        assert_eq!(defect_set(&record.star), BTreeSet::from([[1, 1, 1], [1, 1, 2]]));
        assert!(record.plaquette.defects.is_empty());
        assert!(record.star.residual.is_empty());
    }

    #[test]
    fn data_fault_makes_a_space_pair_and_a_residual() {
        let array = Array2d::new(3);
        // X on the code qubit at (1,0) right after its second Hadamard
        // (step 3 of period 0): both adjacent star checks flip from the next
        // period on, and the flip persists as a residual.
        let record = run_single_fault(
            &array,
            1,
            3,
            &Gate::Hadamard([1, 0]),
            &FaultChoice::Single(SinglePauli::X),
        );
        assert_eq!(defect_set(&record.star), BTreeSet::from([[0, 0, 1], [1, 0, 1]]));
        assert!(record.plaquette.defects.is_empty());
        assert_eq!(record.star.residual, BTreeSet::from([[1, 0]]));
        assert!(record.plaquette.residual.is_empty());
    }

    #[test]
    fn y_fault_equals_x_fault_xor_z_fault() {
        let array = Array2d::new(3);
        let gate = Gate::Hadamard([2, 1]);
        let at = |pauli| run_single_fault(&array, 1, 2, &gate, &FaultChoice::Single(pauli));
        let (rx, rz, ry) = (at(SinglePauli::X), at(SinglePauli::Z), at(SinglePauli::Y));
        for pick in [
            |r: &TrialRecord| defect_set(&r.star),
            |r: &TrialRecord| defect_set(&r.plaquette),
        ] {
            let sym: BTreeSet<_> = pick(&rx).symmetric_difference(&pick(&rz)).copied().collect();
            assert_eq!(pick(&ry), sym);
        }
        let sym_res: BTreeSet<_> = rx
            .star
            .residual
            .symmetric_difference(&rz.star.residual)
            .copied()
            .collect();
        assert_eq!(ry.star.residual, sym_res);
    }

    /// Every possible single fault in one period: defects come in even
    /// numbers per sector, land within the flush window, and the final
    /// syndrome round agrees with the recorded residual — confirming that
    /// the star sector reads end-of-run X frames and the plaquette sector Z
    /// frames.
    #[test]
    fn exhaustive_single_fault_bookkeeping() {
        let array = Array2d::new(3);
        let noisy = 2;
        let mut cases = 0;
        for t in PERIOD..2 * PERIOD {
            for gate in gates_at(&array, t) {
                let choices: Vec<FaultChoice> = match gate {
                    Gate::Prep(_) | Gate::Hadamard(_) => {
                        SINGLE_PAULIS.iter().map(|p| FaultChoice::Single(*p)).collect()
                    }
                    Gate::Cz(..) => (0..15).map(FaultChoice::Pair).collect(),
                    Gate::MeasureX(_) => vec![FaultChoice::MeasFlip],
                };
                for choice in choices {
                    cases += 1;
                    let record = run_single_fault(&array, noisy, t, &gate, &choice);
                    for sector in [&record.star, &record.plaquette] {
                        assert_eq!(
                            sector.defects.len() % 2,
                            0,
                            "odd defects for {gate:?} {choice:?}"
                        );
                        assert!(sector.defects.len() <= 4, "{gate:?} {choice:?}");
                        for d in &sector.defects {
                            assert!(d[2] < noisy + FLUSH_PERIODS, "{gate:?} {choice:?}");
                        }
                        // Final-round flips must equal the syndrome of the
                        // residual pattern.
                        let verify = Array2d::new(3);
                        for check in verify.sites() {
                            let is_sector_check = match sector.sector {
                                SectorKind::Star => role_of(check) == Role::Star,
                                SectorKind::Plaquette => role_of(check) == Role::Plaquette,
                            };
                            if !is_sector_check {
                                continue;
                            }
                            let mut parity = false;
                            for d in [[1, 0], [-1, 0], [0, 1], [0, -1]] {
                                let q = verify.canonical([check[0] + d[0], check[1] + d[1]]);
                                parity ^= sector.residual.contains(&q);
                            }
                            let node = sector.sector.node_of(check);
                            let flipped_at_end = sector
                                .defects
                                .iter()
                                .filter(|d| [d[0], d[1]] == node)
                                .count()
                                % 2
                                == 1;
                            assert_eq!(
                                parity, flipped_at_end,
                                "residual mismatch at {check:?} for {gate:?} {choice:?}"
                            );
                        }
                    }
                }
            }
        }
        assert!(cases > 400, "expected full coverage, got {cases}");
    }

    #[test]
    fn phenomenological_single_data_flip_signature() {
        let l = 3;
        // Plant one data error by running at p=0 and injecting by hand via
        // a tiny wrapper: easiest is p=0 rounds then checking the generator
        // behaves; instead drive the full generator with a seeded RNG at a
        // p high enough to act but verify invariants instead of exact sets.
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let record = run_trial_phenomenological(l, 4, 0.1, &mut rng);
            for sector in [&record.star, &record.plaquette] {
                assert_eq!(sector.defects.len() % 2, 0);
                for d in &sector.defects {
                    assert!(d[0] < l && d[1] < l && d[2] < sector.layers);
                }
                // The perfect final round pins the last defect layer to the
                // true syndrome of the residual: recompute it.
                let array = Array2d::new(l);
                for check in array.sites() {
                    let want = match sector.sector {
                        SectorKind::Star => Role::Star,
                        SectorKind::Plaquette => Role::Plaquette,
                    };
                    if role_of(check) != want {
                        continue;
                    }
                    let mut parity = false;
                    for d in [[1, 0], [-1, 0], [0, 1], [0, -1]] {
                        let q = array.canonical([check[0] + d[0], check[1] + d[1]]);
                        parity ^= sector.residual.contains(&q);
                    }
                    let node = sector.sector.node_of(check);
                    let net_flips = sector
                        .defects
                        .iter()
                        .filter(|d| [d[0], d[1]] == node)
                        .count()
                        % 2
                        == 1;
                    assert_eq!(parity, net_flips);
                }
            }
        }
    }

    #[test]
    fn phenomenological_zero_noise_is_silent() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let record = run_trial_phenomenological(4, 5, 0.0, &mut rng);
        assert!(record.star.defects.is_empty());
        assert!(record.plaquette.residual.is_empty());
    }

    #[test]
    fn circuit_trials_keep_even_defect_parity() {
        let array = Array2d::new(3);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..25 {
            let record = run_trial_circuit(&array, 3, 0.02, &mut rng);
            assert_eq!(record.star.defects.len() % 2, 0);
            assert_eq!(record.plaquette.defects.len() % 2, 0);
            for d in &record.star.defects {
                assert!(d[2] < 3 + FLUSH_PERIODS);
            }
        }
    }
}
