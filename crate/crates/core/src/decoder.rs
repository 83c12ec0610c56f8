//! Minimum-weight matching decoder for syndrome defect records.
//!
//! Defects live on an l×l×layers grid: periodic in both space directions
//! (the memory is a torus) and open in time (the record starts and ends on
//! perfect boundaries). The decoder pairs defects by minimum total weight
//! under an L1 metric, reconstructs an explicit correction chain on the code
//! qubits, and classifies the combined (residual ⊕ correction) cycle by its
//! crossing parity with one seam per wrap direction. A non-trivial class is
//! a logical failure: the correction differs from the actual error by an
//! operator that wraps the torus.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::matching::min_weight_perfect_matching;
use crate::noise::{SectorKind, SectorRecord, TrialRecord};

/// Edge weights of the matching metric, per unit step.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Metric {
    pub space: i64,
    pub time: i64,
}

impl Default for Metric {
    fn default() -> Self {
        Metric { space: 1, time: 1 }
    }
}

/// Decoding result for one sector.
#[derive(Clone, Debug)]
pub struct SectorOutcome {
    /// Matched defect pairs.
    pub pairs: Vec<([usize; 3], [usize; 3])>,
    /// Space projection of the correction, as code-qubit sites.
    pub correction: BTreeSet<[i32; 2]>,
    /// Wrap parity of residual ⊕ correction in x and y: `true` means the
    /// trial left a logical operator on the memory.
    pub wraps: [bool; 2],
}

impl SectorOutcome {
    pub fn failed(&self) -> bool {
        self.wraps[0] || self.wraps[1]
    }
}

/// Both sectors of a trial, decoded.
#[derive(Clone, Debug)]
pub struct TrialOutcome {
    pub star: SectorOutcome,
    pub plaquette: SectorOutcome,
}

impl TrialOutcome {
    /// The memory trial failed if either sector ends in a non-trivial class.
    pub fn failed(&self) -> bool {
        self.star.failed() || self.plaquette.failed()
    }
}

fn torus_steps(from: usize, to: usize, l: usize) -> (i64, i32) {
    // Shortest signed arc from `from` to `to` on a ring of length l; ties
    // resolve to the positive direction so rebuilds are identical.
    let fwd = (to + l - from) % l;
    if fwd <= l - fwd {
        (fwd as i64, 1)
    } else {
        ((l - fwd) as i64, -1)
    }
}

/// Matching weight between two defects `[x, y, t]`: shortest torus arcs in
/// space plus the plain time separation, each scaled by the metric.
pub fn distance(metric: Metric, l: usize, u: [usize; 3], v: [usize; 3]) -> i64 {
    let (dx, _) = torus_steps(u[0], v[0], l);
    let (dy, _) = torus_steps(u[1], v[1], l);
    let dt = (u[2] as i64 - v[2] as i64).abs();
    metric.space * (dx + dy) + metric.time * dt
}

/// XOR the code sites of the canonical path between two defects into the
/// correction chain: x-arc first, then y-arc (time steps touch no qubits).
fn walk_pair(
    sector: SectorKind,
    l: usize,
    u: [usize; 3],
    v: [usize; 3],
    chain: &mut BTreeSet<[i32; 2]>,
) {
    let span = 2 * l as i32;
    let mut toggle = |site: [i32; 2]| {
        let s = [site[0].rem_euclid(span), site[1].rem_euclid(span)];
        if !chain.remove(&s) {
            chain.insert(s);
        }
    };
    let mut node = [u[0], u[1]];
    for axis in 0..2 {
        let (steps, dir) = torus_steps(node[axis], v[axis], l);
        for _ in 0..steps {
            let site = sector.site_of(node);
            let mut mid = site;
            mid[axis] += dir;
            toggle(mid);
            node[axis] = (node[axis] as i32 + dir).rem_euclid(l as i32) as usize;
        }
    }
}

/// Seam coordinate for wrap counting: the code-qubit column sitting between
/// the last check column and the first one.
fn seam_coordinate(sector: SectorKind, l: usize) -> i32 {
    match sector {
        SectorKind::Star => 2 * l as i32 - 1,
        SectorKind::Plaquette => 0,
    }
}

fn wrap_parities(sector: SectorKind, l: usize, chain: &BTreeSet<[i32; 2]>) -> [bool; 2] {
    let seam = seam_coordinate(sector, l);
    let mut wraps = [false; 2];
    for axis in 0..2 {
        let crossings = chain.iter().filter(|s| s[axis] == seam).count();
        wraps[axis] = crossings % 2 == 1;
    }
    wraps
}

/// Every check must see even parity of the combined chain — the decoded
/// correction must return the code to the stabilizer group.
fn assert_cycle(record: &SectorRecord, chain: &BTreeSet<[i32; 2]>) {
    let span = 2 * record.l as i32;
    for a in 0..record.l {
        for b in 0..record.l {
            let check = record.sector.site_of([a, b]);
            let mut parity = false;
            for d in [[1, 0], [-1, 0], [0, 1], [0, -1]] {
                let q = [
                    (check[0] + d[0]).rem_euclid(span),
                    (check[1] + d[1]).rem_euclid(span),
                ];
                parity ^= chain.contains(&q);
            }
            assert!(!parity, "combined chain has residual syndrome at {check:?}");
        }
    }
}

/// Decode one sector: match the defects, build the correction, classify the
/// combined chain.
pub fn decode_sector(record: &SectorRecord, metric: Metric) -> SectorOutcome {
    assert_eq!(record.defects.len() % 2, 0, "defects must pair up");
    let n = record.defects.len();
    let mut pairs = Vec::new();
    let mut correction = BTreeSet::new();
    if n > 0 {
        let mut edges = Vec::with_capacity(n * (n - 1) / 2);
        for i in 0..n {
            for j in i + 1..n {
                edges.push((
                    i,
                    j,
                    distance(metric, record.l, record.defects[i], record.defects[j]),
                ));
            }
        }
        let mate = min_weight_perfect_matching(n, &edges)
            .expect("complete graph on an even set always has a perfect matching");
        for (i, &m) in mate.iter().enumerate() {
            if i < m {
                let (u, v) = (record.defects[i], record.defects[m]);
                walk_pair(record.sector, record.l, u, v, &mut correction);
                pairs.push((u, v));
            }
        }
    }
    let mut combined = correction.clone();
    for site in &record.residual {
        if !combined.remove(site) {
            combined.insert(*site);
        }
    }
    if cfg!(debug_assertions) {
        assert_cycle(record, &combined);
    }
    let wraps = wrap_parities(record.sector, record.l, &combined);
    SectorOutcome { pairs, correction, wraps }
}

/// Decode both sectors of a trial.
pub fn decode_trial(trial: &TrialRecord, metric: Metric) -> TrialOutcome {
    TrialOutcome {
        star: decode_sector(&trial.star, metric),
        plaquette: decode_sector(&trial.plaquette, metric),
    }
}
