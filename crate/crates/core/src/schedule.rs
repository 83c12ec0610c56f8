//! The period-6 measurement schedule of the 2D qubit array.
//!
//! One physical qubit sits at every site of a doubled 2D torus grid. Site
//! parity fixes the role:
//!
//! * odd/odd — plaquette syndrome ancilla (one cluster face qubit per period),
//! * even/even — star syndrome ancilla (one cluster time-edge qubit per period),
//! * odd/even and even/odd — code qubits, which carry the protected state and
//!   impersonate two cluster qubits per period (an in-plane edge, then — after
//!   a Hadamard — a vertical face in the next time slab).
//!
//! Every qubit performs exactly one elementary operation per time step — |+⟩
//! preparation, Hadamard, CZ with one nearest neighbour, or X measurement —
//! and the whole pattern repeats with period 6. The two ancilla species are
//! measured three steps apart. Interleaved this way, the array builds and
//! consumes the 3D cluster one slab at a time with no idle steps at all.

use serde::{Deserialize, Serialize};

use crate::pauli::PauliOperator;
use crate::tableau::Tableau;

/// Number of time steps after which the schedule repeats.
pub const PERIOD: usize = 6;

/// What a site does at one time step.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Action {
    /// Prepare |+⟩ (ancillas only).
    Prep,
    /// Hadamard (code qubits only; switches the impersonated cluster cell).
    Hadamard,
    /// CZ with the nearest neighbour in the given direction.
    Cz(Direction),
    /// Measure in the X basis (ancillas only).
    MeasureX,
}

/// Nearest-neighbour direction on the 2D grid (N = +y, E = +x).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Direction {
    North,
    South,
    East,
    West,
}

impl Direction {
    pub fn offset(self) -> [i32; 2] {
        match self {
            Direction::North => [0, 1],
            Direction::South => [0, -1],
            Direction::East => [1, 0],
            Direction::West => [-1, 0],
        }
    }
}

/// Role of a 2D site, fixed by coordinate parity.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum Role {
    /// Odd/odd: plaquette syndrome ancilla.
    Plaquette,
    /// Even/even: star syndrome ancilla.
    Star,
    /// Odd/even: code qubit on a horizontal edge of the 2D lattice.
    CodeX,
    /// Even/odd: code qubit on a vertical edge of the 2D lattice.
    CodeY,
}

pub fn role_of(site: [i32; 2]) -> Role {
    match (site[0].rem_euclid(2), site[1].rem_euclid(2)) {
        (1, 1) => Role::Plaquette,
        (0, 0) => Role::Star,
        (1, 0) => Role::CodeX,
        (0, 1) => Role::CodeY,
        _ => unreachable!(),
    }
}

/// The schedule table: what `site` does at time step `t` (taken mod 6).
///
/// Plaquette ancillas collect their four in-plane cluster links between a
/// fresh preparation and their measurement; star ancillas do the same shifted
/// by three steps, so the two measurement species interleave. Code qubits
/// serve their plaquette links while in the in-plane-edge role, apply a
/// Hadamard, and serve their star links in the vertical-face role — the
/// Hadamard doubling as the teleportation that advances their cluster column.
pub fn action_at(site: [i32; 2], t: usize) -> Action {
    use Action::*;
    use Direction::*;
    let t = t % PERIOD;
    match role_of(site) {
        Role::Plaquette => [Prep, Cz(South), Cz(North), Cz(West), Cz(East), MeasureX][t],
        Role::Star => [Cz(North), Cz(South), MeasureX, Prep, Cz(East), Cz(West)][t],
        Role::CodeX => [Hadamard, Cz(North), Cz(South), Hadamard, Cz(West), Cz(East)][t],
        Role::CodeY => [Cz(South), Cz(North), Hadamard, Cz(East), Cz(West), Hadamard][t],
    }
}

/// A 2D torus array of (2l)² qubits, l ≥ 2, running the period-6 schedule.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Array2d {
    pub l: usize,
}

impl Array2d {
    pub fn new(l: usize) -> Self {
        assert!(l >= 2, "the schedule needs an array of at least 2×2 cells");
        Array2d { l }
    }

    pub fn span(&self) -> i32 {
        2 * self.l as i32
    }

    pub fn canonical(&self, site: [i32; 2]) -> [i32; 2] {
        [site[0].rem_euclid(self.span()), site[1].rem_euclid(self.span())]
    }

    pub fn neighbour(&self, site: [i32; 2], dir: Direction) -> [i32; 2] {
        let d = dir.offset();
        self.canonical([site[0] + d[0], site[1] + d[1]])
    }

    /// All sites in lexicographic order; the position in this list is the
    /// site's qubit index in simulations.
    pub fn sites(&self) -> Vec<[i32; 2]> {
        let mut out = Vec::new();
        for x in 0..self.span() {
            for y in 0..self.span() {
                out.push([x, y]);
            }
        }
        out
    }

    pub fn index_of(&self, site: [i32; 2]) -> usize {
        let s = self.canonical(site);
        (s[0] * self.span() + s[1]) as usize
    }
}

/// One gate of the flattened circuit, acting on site coordinates.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Gate {
    Prep([i32; 2]),
    Hadamard([i32; 2]),
    /// CZ emitted once per pair, from the ancilla side.
    Cz([i32; 2], [i32; 2]),
    MeasureX([i32; 2]),
}

/// The gates of absolute time step `t`, in deterministic order. Each CZ is
/// emitted once, from its ancilla endpoint.
pub fn gates_at(array: &Array2d, t: usize) -> Vec<Gate> {
    let mut out = Vec::new();
    for site in array.sites() {
        match action_at(site, t) {
            Action::Prep => out.push(Gate::Prep(site)),
            Action::Hadamard => out.push(Gate::Hadamard(site)),
            Action::MeasureX => out.push(Gate::MeasureX(site)),
            Action::Cz(dir) => {
                if matches!(role_of(site), Role::Plaquette | Role::Star) {
                    out.push(Gate::Cz(site, array.neighbour(site, dir)));
                }
            }
        }
    }
    out
}

/// Render `rounds` periods of the schedule as text: a `period 6` header, then
/// one line per gate, `<step> <OP> <x>,<y>[ <x>,<y>]`.
pub fn render(array: &Array2d, rounds: usize) -> String {
    let mut out = format!("period {PERIOD}\n");
    for t in 0..PERIOD * rounds {
        for gate in gates_at(array, t) {
            match gate {
                Gate::Prep(s) => out.push_str(&format!("{t} PREP {},{}\n", s[0], s[1])),
                Gate::Hadamard(s) => out.push_str(&format!("{t} H {},{}\n", s[0], s[1])),
                Gate::Cz(a, b) => {
                    out.push_str(&format!("{t} CZ {},{} {},{}\n", a[0], a[1], b[0], b[1]))
                }
                Gate::MeasureX(s) => out.push_str(&format!("{t} MEAS {},{}\n", s[0], s[1])),
            }
        }
    }
    out
}

/// One recorded ancilla measurement.
#[derive(Clone, Copy, Debug)]
pub struct SyndromeSample {
    pub site: [i32; 2],
    pub period: usize,
    pub value: bool,
    pub deterministic: bool,
}

/// Run the schedule on a stabilizer tableau for `rounds` periods and record
/// every ancilla outcome (`value` = true for the −1 result). Noiseless; used
/// to certify the schedule itself.
pub fn run_noiseless(array: &Array2d, rounds: usize, rng: &mut impl rand::Rng) -> Vec<SyndromeSample> {
    let mut tab = Tableau::zero_state(array.sites().len());
    let mut samples = Vec::new();
    for t in 0..PERIOD * rounds {
        for gate in gates_at(array, t) {
            match gate {
                Gate::Prep(s) => tab.prep_plus(array.index_of(s), rng),
                Gate::Hadamard(s) => tab.h(array.index_of(s)),
                Gate::Cz(a, b) => tab.cz(array.index_of(a), array.index_of(b)),
                Gate::MeasureX(s) => {
                    let op = PauliOperator::x_on([array.index_of(s)]);
                    let outcome = tab.measure_pauli(&op, rng);
                    samples.push(SyndromeSample {
                        site: s,
                        period: t / PERIOD,
                        value: outcome.minus,
                        deterministic: outcome.deterministic,
                    });
                }
            }
        }
    }
    samples
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::BTreeMap;

    #[test]
    fn every_site_acts_every_step() {
        // One operation per qubit per step, and CZ partners agree.
        let array = Array2d::new(3);
        for t in 0..PERIOD {
            for site in array.sites() {
                match action_at(site, t) {
                    Action::Cz(dir) => {
                        let partner = array.neighbour(site, dir);
                        let Action::Cz(back) = action_at(partner, t) else {
                            panic!("{partner:?} is not doing a CZ at step {t}");
                        };
                        assert_eq!(
                            array.neighbour(partner, back),
                            site,
                            "CZ mismatch at {site:?} step {t}"
                        );
                    }
                    Action::Prep | Action::MeasureX => {
                        assert!(matches!(role_of(site), Role::Plaquette | Role::Star));
                    }
                    Action::Hadamard => {
                        assert!(matches!(role_of(site), Role::CodeX | Role::CodeY));
                    }
                }
            }
        }
    }

    #[test]
    fn ancillas_touch_all_four_neighbours_each_period() {
        let array = Array2d::new(2);
        for site in array.sites() {
            if matches!(role_of(site), Role::CodeX | Role::CodeY) {
                continue;
            }
            let mut partners: Vec<[i32; 2]> = (0..PERIOD)
                .filter_map(|t| match action_at(site, t) {
                    Action::Cz(d) => Some(array.neighbour(site, d)),
                    _ => None,
                })
                .collect();
            partners.sort();
            partners.dedup();
            assert_eq!(partners.len(), 4, "{site:?}");
        }
    }

    #[test]
    fn measurement_species_are_three_steps_apart() {
        let star = (0..PERIOD).find(|&t| action_at([0, 0], t) == Action::MeasureX).unwrap();
        let plaq = (0..PERIOD).find(|&t| action_at([1, 1], t) == Action::MeasureX).unwrap();
        assert_eq!((plaq + PERIOD - star) % PERIOD, 3);
    }

    #[test]
    fn render_format() {
        let array = Array2d::new(2);
        let text = render(&array, 1);
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("period 6"));
        // 16 qubits, one op each per step; CZs pair up two qubits per line.
        for t in 0..PERIOD {
            let ops: Vec<&str> = text
                .lines()
                .skip(1)
                .filter(|l| l.starts_with(&format!("{t} ")))
                .collect();
            let qubits: usize = ops
                .iter()
                .map(|l| if l.contains("CZ") { 2 } else { 1 })
                .sum();
            assert_eq!(qubits, 16, "step {t}: {ops:?}");
        }
        assert!(text.contains("0 PREP 1,1"));
        assert!(text.contains("2 MEAS 0,0"));
        assert!(text.contains("5 MEAS 1,1"));
    }

    /// The schedule's core guarantee: run noiselessly, every syndrome
    /// measurement from the second period on is deterministic and repeats
    /// the previous period's value — the extracted checks are stabilizers of
    /// the code the schedule itself builds.
    #[test]
    fn noiseless_syndromes_become_deterministic_and_stationary() {
        let array = Array2d::new(2);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let rounds = 5;
        let samples = run_noiseless(&array, rounds, &mut rng);
        // 8 ancillas, measured once per period each.
        assert_eq!(samples.len(), 8 * rounds);
        let mut history: BTreeMap<[i32; 2], Vec<&SyndromeSample>> = BTreeMap::new();
        for s in &samples {
            history.entry(s.site).or_default().push(s);
        }
        for (site, hist) in &history {
            assert_eq!(hist.len(), rounds);
            for k in 2..rounds {
                assert!(hist[k].deterministic, "{site:?} period {k} should be deterministic");
                assert_eq!(hist[k].value, hist[k - 1].value, "{site:?} period {k}");
            }
        }
        // On the torus the product of all same-species checks is the
        // identity, so the joint outcome parity is even in every full period.
        for k in 1..rounds {
            for role in [Role::Star, Role::Plaquette] {
                let parity = samples
                    .iter()
                    .filter(|s| s.period == k && role_of(s.site) == role)
                    .fold(false, |acc, s| acc ^ s.value);
                assert!(!parity, "{role:?} outcome parity at period {k}");
            }
        }
    }

    /// Different seeds explore different random first-round projections, but
    /// stationarity holds regardless.
    #[test]
    fn stationarity_is_seed_independent() {
        let array = Array2d::new(3);
        for seed in 0..5u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let samples = run_noiseless(&array, 4, &mut rng);
            let mut last: BTreeMap<[i32; 2], bool> = BTreeMap::new();
            for s in &samples {
                if s.period >= 2 {
                    assert!(s.deterministic, "seed {seed} site {:?}", s.site);
                    assert_eq!(s.value, last[&s.site], "seed {seed} site {:?}", s.site);
                }
                last.insert(s.site, s.value);
            }
        }
    }
}
