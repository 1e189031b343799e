//! Tabulated one-step maps and the functional graph of the lifted system.
//!
//! A period-`T` system is analysed on the product space `phase × {0,1}^V`,
//! where `(p, x)` steps to `((p + 1) mod T, φ(p + 1, p, x))`. Lifted states are
//! indexed as `p * 2^n + x`.

use serde::Serialize;

use crate::config::Configuration;
use crate::dynamics::{PhaseMap, System};
use crate::error::{Error, Result};
use crate::game::{PayoffParams, UtilityKind};
use crate::dynamics::{Game, UpdateOrder, UpdateRule};
use crate::graph::{bits, Graph};
use crate::parallel::{self, Execution};

/// Default vertex cap for full tabulation.
pub const DEFAULT_MAX_N: usize = 20;
/// Absolute vertex cap for full tabulation.
pub const HARD_MAX_N: usize = 26;
/// Largest lifted state space that will be enumerated.
pub const MAX_LIFTED_STATES: usize = 1 << 28;

/// One-step map tabulated for every configuration. Stores what each vertex
/// would become if updated; phase `p` applies it to the vertices of block `p`.
#[derive(Clone, Debug)]
pub struct StateSpaceMap {
    n: usize,
    proposal: Vec<u32>,
    masks: Vec<u64>,
}

impl StateSpaceMap {
    pub fn build(system: &System, max_n: usize) -> Result<Self> {
        Self::build_with(system, max_n, Execution::default())
    }

    pub fn build_with(system: &System, max_n: usize, exec: Execution) -> Result<Self> {
        let n = system.order();
        check_capacity(n, system.period(), max_n)?;
        let game = system.game();
        let mut proposal = vec![0u32; 1 << n];
        parallel::fill(exec, &mut proposal, |x| game.step_bits(x as u64) as u32);
        Ok(StateSpaceMap {
            n,
            proposal,
            masks: system.masks().to_vec(),
        })
    }

    /// Number of configurations, `2^n`.
    pub fn configurations(&self) -> usize {
        self.proposal.len()
    }

    pub fn lifted_len(&self) -> usize {
        self.configurations() * self.masks.len()
    }

    /// Successor table of one phase.
    pub fn table(&self, phase: usize) -> Vec<u32> {
        let m = self.masks[phase] as u32;
        self.proposal
            .iter()
            .enumerate()
            .map(|(x, &p)| (x as u32 & !m) | (p & m))
            .collect()
    }
}

impl PhaseMap for StateSpaceMap {
    #[inline]
    fn order(&self) -> usize {
        self.n
    }

    #[inline]
    fn period(&self) -> usize {
        self.masks.len()
    }

    #[inline]
    fn next(&self, phase: usize, x: u64) -> u64 {
        let m = self.masks[phase];
        (x & !m) | (self.proposal[x as usize] as u64 & m)
    }
}

fn check_capacity(n: usize, period: usize, max_n: usize) -> Result<()> {
    let cap = max_n.min(HARD_MAX_N);
    if n > cap {
        return Err(Error::capacity(format!(
            "state table for n = {n} exceeds the vertex cap {cap}"
        )));
    }
    if period.saturating_mul(1 << n) > MAX_LIFTED_STATES {
        return Err(Error::capacity(format!(
            "lifted state space {period} x 2^{n} is too large"
        )));
    }
    Ok(())
}

/// Tabulates the game `(g, p, kind, rule)` under `order`.
pub fn build_state_map(
    g: &Graph,
    p: &PayoffParams,
    kind: UtilityKind,
    rule: UpdateRule,
    order: &UpdateOrder,
    max_n: usize,
) -> Result<StateSpaceMap> {
    let system = System::new(Game::new(g.clone(), *p, kind, rule)?, order.clone())?;
    StateSpaceMap::build(&system, max_n)
}

/// A state of the lifted system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct LiftedState {
    pub phase: usize,
    pub bits: u64,
}

impl LiftedState {
    pub fn config(&self, n: usize) -> Configuration {
        Configuration::raw(n, self.bits)
    }
}

#[inline]
pub(crate) fn lifted_index(n: usize, phase: usize, x: u64) -> usize {
    (phase << n) | x as usize
}

#[inline]
pub(crate) fn lifted_successor<M: PhaseMap + ?Sized>(map: &M, idx: usize) -> usize {
    let n = map.order();
    let phase = idx >> n;
    let x = (idx & ((1 << n) - 1)) as u64;
    let next_phase = (phase + 1) % map.period();
    lifted_index(n, next_phase, map.next(phase, x))
}

#[inline]
pub(crate) fn unpack(n: usize, idx: usize) -> LiftedState {
    LiftedState {
        phase: idx >> n,
        bits: (idx & ((1 << n) - 1)) as u64,
    }
}

/// A periodic orbit of the lifted system, starting at its smallest index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cycle {
    pub states: Vec<LiftedState>,
}

impl Cycle {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Distinct configurations on the orbit, sorted.
    pub fn configurations(&self) -> Vec<u64> {
        let mut v: Vec<u64> = self.states.iter().map(|s| s.bits).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn contains(&self, phase: usize, bits: u64) -> bool {
        self.states.iter().any(|s| s.phase == phase && s.bits == bits)
    }
}

const UNSEEN: u32 = u32::MAX;
const ON_PATH: u32 = u32::MAX - 1;

/// Periodic orbits of the lifted system and, for every lifted state, the orbit
/// its trajectory ends on.
#[derive(Clone, Debug)]
pub struct OrbitStructure {
    n: usize,
    period: usize,
    cycles: Vec<Cycle>,
    label: Vec<u32>,
}

impl OrbitStructure {
    pub fn analyze<M: PhaseMap + ?Sized>(map: &M) -> Result<Self> {
        let n = map.order();
        let period = map.period();
        check_capacity(n, period, HARD_MAX_N)?;
        let total = period << n;
        let mut label = vec![UNSEEN; total];
        let mut cycles: Vec<Cycle> = Vec::new();
        let mut path: Vec<usize> = Vec::new();
        for start in 0..total {
            if label[start] != UNSEEN {
                continue;
            }
            path.clear();
            let mut cur = start;
            while label[cur] == UNSEEN {
                label[cur] = ON_PATH;
                path.push(cur);
                cur = lifted_successor(map, cur);
            }
            let id = if label[cur] == ON_PATH {
                let pos = path.iter().rposition(|&s| s == cur).expect("state is on the path");
                let id = cycles.len() as u32;
                let mut members = path[pos..].to_vec();
                let min_at = members
                    .iter()
                    .enumerate()
                    .min_by_key(|&(_, s)| *s)
                    .map(|(k, _)| k)
                    .unwrap_or(0);
                members.rotate_left(min_at);
                cycles.push(Cycle {
                    states: members.into_iter().map(|s| unpack(n, s)).collect(),
                });
                id
            } else {
                label[cur]
            };
            for &s in &path {
                label[s] = id;
            }
        }
        Ok(OrbitStructure {
            n,
            period,
            cycles,
            label,
        })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn period(&self) -> usize {
        self.period
    }

    pub fn cycles(&self) -> &[Cycle] {
        &self.cycles
    }

    /// Index of the cycle that `(phase, x)` eventually reaches.
    pub fn cycle_of(&self, phase: usize, x: u64) -> usize {
        self.label[lifted_index(self.n, phase, x)] as usize
    }

    /// Number of lifted states draining into each cycle.
    pub fn basin_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.cycles.len()];
        for &l in &self.label {
            sizes[l as usize] += 1;
        }
        sizes
    }

    /// For each cycle, the cycles reached from states at Hamming distance at
    /// most one (same phase) of its members. Sorted, includes the cycle itself.
    pub fn flip_successors(&self) -> Vec<Vec<usize>> {
        self.cycles
            .iter()
            .enumerate()
            .map(|(c, cycle)| {
                let mut out = vec![c];
                for s in &cycle.states {
                    for j in 0..self.n {
                        out.push(self.cycle_of(s.phase, s.bits ^ 1 << j));
                    }
                }
                out.sort_unstable();
                out.dedup();
                out
            })
            .collect()
    }
}

/// Periodic orbits of the lifted system.
pub fn periodic_orbits<M: PhaseMap + ?Sized>(map: &M) -> Result<Vec<Cycle>> {
    Ok(OrbitStructure::analyze(map)?.cycles)
}

/// Configurations left unchanged by the step at every phase.
pub fn fixed_points<M: PhaseMap + ?Sized>(map: &M) -> Result<Vec<Configuration>> {
    fixed_points_with(map, Execution::default())
}

pub fn fixed_points_with<M: PhaseMap + ?Sized>(map: &M, exec: Execution) -> Result<Vec<Configuration>> {
    let n = map.order();
    check_capacity(n, 1, HARD_MAX_N)?;
    let period = map.period();
    let flags = parallel::map_range(exec, 1 << n, |x| {
        (0..period).all(|p| map.next(p, x as u64) == x as u64)
    });
    Ok(flags
        .into_iter()
        .enumerate()
        .filter(|&(_, f)| f)
        .map(|(x, _)| Configuration::raw(n, x as u64))
        .collect())
}

/// Configurations with exactly `m` cooperators among `n` vertices, ascending.
pub fn configurations_with_count(n: usize, m: usize) -> Vec<u64> {
    (0..1u64 << n).filter(|x| x.count_ones() as usize == m).collect()
}

/// Vertices (1-based) that differ between two bitsets.
pub fn changed_vertices(x: u64, y: u64) -> Vec<usize> {
    bits(x ^ y).map(|v| v + 1).collect()
}
