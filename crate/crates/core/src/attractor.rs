//! Invariant sets, attractor checks, basins and attractor enumeration.
//!
//! Everything works on the lifted system of a [`PhaseMap`]: a set is a family
//! of sections `A(0), ..., A(T-1)`, one per phase. An autonomous system has a
//! single phase.

use std::collections::BTreeSet;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::Serialize;

use crate::config::Configuration;
use crate::dynamics::PhaseMap;
use crate::error::{Error, Result};
use crate::graph::mask_of;
use crate::parallel::{self, Execution};
use crate::statespace::{lifted_index, lifted_successor, LiftedState, OrbitStructure};

/// Hamming distance of two bitsets.
#[inline]
pub fn hamming(x: u64, y: u64) -> u32 {
    (x ^ y).count_ones()
}

/// Hamming distance from `x` to the closest element of `set`.
pub fn distance_to(x: u64, set: &[u64]) -> Option<u32> {
    set.iter().map(|&y| hamming(x, y)).min()
}

/// A phase-indexed family of configuration sets.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantSet {
    n: usize,
    sections: Vec<Vec<u64>>,
}

impl InvariantSet {
    /// A set with the same configurations at every phase.
    pub fn time_independent<I>(n: usize, period: usize, configs: I) -> Result<Self>
    where
        I: IntoIterator<Item = u64>,
    {
        let section: Vec<u64> = configs.into_iter().collect();
        Self::from_sections(n, vec![section; period.max(1)])
    }

    pub fn from_sections(n: usize, mut sections: Vec<Vec<u64>>) -> Result<Self> {
        if sections.is_empty() {
            return Err(Error::domain("a set needs at least one phase"));
        }
        let full = mask_of(n);
        for s in &mut sections {
            s.sort_unstable();
            s.dedup();
            if let Some(&x) = s.iter().find(|&&x| x & !full != 0) {
                return Err(Error::domain(format!("state {x:#x} has bits beyond vertex {n}")));
            }
        }
        Ok(InvariantSet { n, sections })
    }

    pub fn from_configurations(period: usize, configs: &[Configuration]) -> Result<Self> {
        let n = configs
            .first()
            .map(Configuration::len)
            .ok_or_else(|| Error::domain("empty configuration list"))?;
        if configs.iter().any(|c| c.len() != n) {
            return Err(Error::domain("configurations of different lengths"));
        }
        Self::time_independent(n, period, configs.iter().map(Configuration::bits))
    }

    /// `{all-C}` or `{all-D}` at every phase.
    pub fn homogeneous(n: usize, period: usize, cooperate: bool) -> Self {
        let x = if cooperate { mask_of(n) } else { 0 };
        InvariantSet {
            n,
            sections: vec![vec![x]; period.max(1)],
        }
    }

    pub(crate) fn from_lifted<I>(n: usize, period: usize, states: I) -> Self
    where
        I: IntoIterator<Item = LiftedState>,
    {
        let mut sections = vec![Vec::new(); period];
        for s in states {
            sections[s.phase].push(s.bits);
        }
        for s in &mut sections {
            s.sort_unstable();
            s.dedup();
        }
        InvariantSet { n, sections }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn period(&self) -> usize {
        self.sections.len()
    }

    pub fn sections(&self) -> &[Vec<u64>] {
        &self.sections
    }

    pub fn section(&self, phase: usize) -> &[u64] {
        &self.sections[phase]
    }

    #[inline]
    pub fn contains(&self, phase: usize, x: u64) -> bool {
        self.sections[phase].binary_search(&x).is_ok()
    }

    pub fn is_empty(&self) -> bool {
        self.sections.iter().all(Vec::is_empty)
    }

    /// Number of `(phase, configuration)` pairs.
    pub fn lifted_len(&self) -> usize {
        self.sections.iter().map(Vec::len).sum()
    }

    pub fn is_time_independent(&self) -> bool {
        self.sections.windows(2).all(|w| w[0] == w[1])
    }

    /// Union of all sections, sorted.
    pub fn configurations(&self) -> Vec<u64> {
        let all: BTreeSet<u64> = self.sections.iter().flatten().copied().collect();
        all.into_iter().collect()
    }

    /// Whether the step at each phase maps `A(p)` onto `A(p + 1)`.
    pub fn is_invariant<M: PhaseMap + ?Sized>(&self, map: &M) -> bool {
        if map.period() != self.period() || map.order() != self.n {
            return false;
        }
        let t = self.period();
        (0..t).all(|p| {
            let mut image: Vec<u64> = self.sections[p].iter().map(|&x| map.next(p, x)).collect();
            image.sort_unstable();
            image.dedup();
            image == self.sections[(p + 1) % t]
        })
    }

    /// States at Hamming distance exactly one from the section of each phase.
    pub fn boundary(&self) -> Vec<LiftedState> {
        let mut out = Vec::new();
        for (phase, section) in self.sections.iter().enumerate() {
            let mut near = BTreeSet::new();
            for &x in section {
                for j in 0..self.n {
                    let y = x ^ (1 << j);
                    if !self.contains(phase, y) {
                        near.insert(y);
                    }
                }
            }
            out.extend(near.into_iter().map(|bits| LiftedState { phase, bits }));
        }
        out
    }
}

/// What happened to the orbit of a state next to the set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WitnessOutcome {
    /// Entered the set after this many steps.
    Enters { steps: usize },
    /// Returned to this state without entering the set.
    Cycles { repeated: LiftedState },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub start: LiftedState,
    pub outcome: WitnessOutcome,
}

impl Witness {
    pub fn hitting_time(&self) -> Option<usize> {
        match self.outcome {
            WitnessOutcome::Enters { steps } => Some(steps),
            WitnessOutcome::Cycles { .. } => None,
        }
    }
}

/// Verdict for one candidate set.
#[derive(Clone, Debug, Serialize)]
pub struct AttractorReport {
    pub set: InvariantSet,
    pub invariant: bool,
    pub is_attractor: bool,
    /// Set equals the union of all periodic orbits.
    pub trivial: bool,
    /// No proper sub-union of orbits is an attractor. Only known after
    /// enumeration.
    pub minimal: bool,
    /// Indices into the enumerated cycle list, when the set came from one.
    pub cycles: Vec<usize>,
    /// Number of lifted states whose orbit enters the set.
    pub basin_size: Option<usize>,
    /// Largest hitting time over states at distance at most one. Members of the
    /// set count as zero.
    pub max_hitting_time: Option<usize>,
    /// One entry per state at distance exactly one, in phase then state order.
    pub witnesses: Vec<Witness>,
}

impl AttractorReport {
    /// The first failing witness, if any.
    pub fn counterexample(&self) -> Option<&Witness> {
        self.witnesses.iter().find(|w| w.hitting_time().is_none())
    }
}

fn follow<M: PhaseMap + ?Sized>(map: &M, set: &InvariantSet, start: LiftedState) -> WitnessOutcome {
    let t = map.period();
    let (mut p, mut y) = (start.phase, start.bits);
    let mut tortoise = (p, y);
    let (mut power, mut lam) = (1usize, 0usize);
    let mut steps = 0;
    loop {
        if set.contains(p, y) {
            return WitnessOutcome::Enters { steps };
        }
        y = map.next(p, y);
        p = (p + 1) % t;
        steps += 1;
        lam += 1;
        if (p, y) == tortoise {
            return WitnessOutcome::Cycles {
                repeated: LiftedState { phase: p, bits: y },
            };
        }
        if lam == power {
            tortoise = (p, y);
            power *= 2;
            lam = 0;
        }
    }
}

fn check_shape<M: PhaseMap + ?Sized>(map: &M, set: &InvariantSet) -> Result<()> {
    if set.is_empty() {
        return Err(Error::domain("attractor candidates must be nonempty"));
    }
    if set.order() != map.order() {
        return Err(Error::domain(format!(
            "set has {} vertices, system has {}",
            set.order(),
            map.order()
        )));
    }
    if set.period() != map.period() {
        return Err(Error::domain(format!(
            "set has {} phase sections, system has period {}",
            set.period(),
            map.period()
        )));
    }
    Ok(())
}

/// Checks invariance and attraction of `set` by following the orbit of every
/// state at distance one, at every phase. Needs no state table.
pub fn is_attractor<M: PhaseMap + ?Sized>(map: &M, set: &InvariantSet) -> Result<AttractorReport> {
    is_attractor_with(map, set, Execution::default())
}

pub fn is_attractor_with<M: PhaseMap + ?Sized>(
    map: &M,
    set: &InvariantSet,
    exec: Execution,
) -> Result<AttractorReport> {
    check_shape(map, set)?;
    let full = set.lifted_len() == map.period() << map.order();
    if !set.is_invariant(map) {
        return Ok(AttractorReport {
            set: set.clone(),
            invariant: false,
            is_attractor: false,
            trivial: false,
            minimal: false,
            cycles: Vec::new(),
            basin_size: None,
            max_hitting_time: None,
            witnesses: Vec::new(),
        });
    }
    let boundary = set.boundary();
    let witnesses: Vec<Witness> = parallel::map_slice(exec, &boundary, |&start| Witness {
        start,
        outcome: follow(map, set, start),
    });
    let is_attractor = witnesses.iter().all(|w| w.hitting_time().is_some());
    let max_hitting_time = if is_attractor {
        Some(witnesses.iter().filter_map(Witness::hitting_time).max().unwrap_or(0))
    } else {
        None
    };
    Ok(AttractorReport {
        set: set.clone(),
        invariant: true,
        is_attractor,
        trivial: full,
        minimal: false,
        cycles: Vec::new(),
        basin_size: None,
        max_hitting_time,
        witnesses,
    })
}

/// Lifted states whose orbit enters an invariant set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Basin {
    n: usize,
    sections: Vec<Vec<u64>>,
}

impl Basin {
    pub fn sections(&self) -> &[Vec<u64>] {
        &self.sections
    }

    pub fn size(&self) -> usize {
        self.sections.iter().map(Vec::len).sum()
    }

    pub fn contains(&self, phase: usize, x: u64) -> bool {
        self.sections[phase].binary_search(&x).is_ok()
    }

    /// The basin as a plain configuration set when it is the same at every
    /// phase.
    pub fn configurations(&self) -> Option<&[u64]> {
        if self.sections.windows(2).all(|w| w[0] == w[1]) {
            Some(&self.sections[0])
        } else {
            None
        }
    }

    pub fn order(&self) -> usize {
        self.n
    }
}

/// All `(phase, x)` whose orbit enters the invariant set `set`.
pub fn basin<M: PhaseMap + ?Sized>(map: &M, set: &InvariantSet) -> Result<Basin> {
    check_shape(map, set)?;
    if !set.is_invariant(map) {
        return Err(Error::domain("basins are defined for invariant sets only"));
    }
    let n = map.order();
    let t = map.period();
    if n > crate::statespace::HARD_MAX_N || t.saturating_mul(1 << n) > crate::statespace::MAX_LIFTED_STATES {
        return Err(Error::capacity(format!("basin over {t} x 2^{n} states is too large")));
    }
    const UNKNOWN: u8 = 0;
    const PENDING: u8 = 1;
    const IN: u8 = 2;
    const OUT: u8 = 3;
    let total = t << n;
    let mut status = vec![UNKNOWN; total];
    for (p, section) in set.sections().iter().enumerate() {
        for &x in section {
            status[lifted_index(n, p, x)] = IN;
        }
    }
    let mut path = Vec::new();
    for start in 0..total {
        if status[start] != UNKNOWN {
            continue;
        }
        path.clear();
        let mut cur = start;
        while status[cur] == UNKNOWN {
            status[cur] = PENDING;
            path.push(cur);
            cur = lifted_successor(map, cur);
        }
        // reaching a pending state closes a cycle that avoids the set
        let verdict = if status[cur] == IN { IN } else { OUT };
        for &s in &path {
            status[s] = verdict;
        }
    }
    let mut sections = vec![Vec::new(); t];
    let states = 1usize << n;
    for (idx, &s) in status.iter().enumerate() {
        if s == IN {
            sections[idx / states].push((idx % states) as u64);
        }
    }
    Ok(Basin { n, sections })
}

/// Periodic orbits together with the orbit-to-orbit reachability induced by
/// single flips. Closed unions of orbits are exactly the attractors; the
/// minimal ones are the bottom strongly connected components.
#[derive(Clone, Debug)]
pub struct Landscape {
    structure: OrbitStructure,
    successors: Vec<Vec<usize>>,
    minimal: Vec<Vec<usize>>,
}

impl Landscape {
    pub fn analyze<M: PhaseMap + ?Sized>(map: &M) -> Result<Self> {
        let structure = OrbitStructure::analyze(map)?;
        let successors = structure.flip_successors();
        let mut graph = DiGraph::<(), ()>::with_capacity(successors.len(), 0);
        let nodes: Vec<_> = (0..successors.len()).map(|_| graph.add_node(())).collect();
        for (c, out) in successors.iter().enumerate() {
            for &d in out {
                if d != c {
                    graph.add_edge(nodes[c], nodes[d], ());
                }
            }
        }
        let mut minimal: Vec<Vec<usize>> = tarjan_scc(&graph)
            .into_iter()
            .map(|comp| {
                let mut ids: Vec<usize> = comp.into_iter().map(|v| v.index()).collect();
                ids.sort_unstable();
                ids
            })
            .filter(|ids| {
                ids.iter()
                    .all(|&c| successors[c].iter().all(|d| ids.binary_search(d).is_ok()))
            })
            .collect();
        minimal.sort();
        Ok(Landscape {
            structure,
            successors,
            minimal,
        })
    }

    pub fn structure(&self) -> &OrbitStructure {
        &self.structure
    }

    pub fn cycle_count(&self) -> usize {
        self.successors.len()
    }

    /// Orbits reached from within distance one of each orbit.
    pub fn successors(&self) -> &[Vec<usize>] {
        &self.successors
    }

    /// Minimal attractors as sorted lists of orbit indices.
    pub fn minimal_attractors(&self) -> &[Vec<usize>] {
        &self.minimal
    }

    /// Whether some attractor is smaller than the union of all orbits.
    pub fn has_nontrivial_attractor(&self) -> bool {
        self.minimal.iter().any(|m| m.len() < self.cycle_count())
    }

    /// Whether a union of orbits attracts.
    pub fn is_closed(&self, cycles: &[usize]) -> bool {
        let mut inside = vec![false; self.cycle_count()];
        for &c in cycles {
            inside[c] = true;
        }
        cycles.iter().all(|&c| self.successors[c].iter().all(|&d| inside[d]))
    }

    /// The orbits making up an invariant set, or `None` if the set is not a
    /// union of orbits.
    pub fn decompose(&self, set: &InvariantSet) -> Option<Vec<usize>> {
        let mut ids = BTreeSet::new();
        for (p, section) in set.sections().iter().enumerate() {
            for &x in section {
                let c = self.structure.cycle_of(p, x);
                if !self.structure.cycles()[c].contains(p, x) {
                    return None;
                }
                ids.insert(c);
            }
        }
        let ids: Vec<usize> = ids.into_iter().collect();
        let total: usize = ids.iter().map(|&c| self.structure.cycles()[c].len()).sum();
        (total == set.lifted_len()).then_some(ids)
    }

    pub fn set_of(&self, cycles: &[usize]) -> InvariantSet {
        InvariantSet::from_lifted(
            self.structure.order(),
            self.structure.period(),
            cycles
                .iter()
                .flat_map(|&c| self.structure.cycles()[c].states.iter().copied()),
        )
    }

    pub fn basin_size(&self, cycles: &[usize]) -> usize {
        let sizes = self.structure.basin_sizes();
        cycles.iter().map(|&c| sizes[c]).sum()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct EnumerationOptions {
    /// Fail with a capacity error instead of falling back when there are more
    /// orbits than `max_cycles`.
    pub exhaustive: bool,
    /// Largest orbit count for which every union of orbits is tried.
    pub max_cycles: usize,
    /// Follow orbits from every distance-one state of each reported set.
    pub witnesses: bool,
    pub execution: Execution,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        EnumerationOptions {
            exhaustive: false,
            max_cycles: 16,
            witnesses: true,
            execution: Execution::default(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Enumeration {
    pub cycles: Vec<crate::statespace::Cycle>,
    /// Attractors found, smallest first; the maximal invariant set is last.
    pub attractors: Vec<AttractorReport>,
    /// Whether every union of orbits was examined.
    pub complete: bool,
}

impl Enumeration {
    pub fn minimal(&self) -> impl Iterator<Item = &AttractorReport> {
        self.attractors.iter().filter(|r| r.minimal)
    }

    pub fn nontrivial(&self) -> impl Iterator<Item = &AttractorReport> {
        self.attractors.iter().filter(|r| !r.trivial)
    }

    pub fn maximal(&self) -> &AttractorReport {
        self.attractors.last().expect("the maximal invariant set is always reported")
    }
}

/// Finds attractors among unions of periodic orbits.
///
/// With at most `max_cycles` orbits every closed union is reported. Otherwise
/// only the minimal attractors and the maximal invariant set are, unless
/// `exhaustive` is set, in which case this is a capacity error.
pub fn enumerate_attractors<M: PhaseMap + ?Sized>(map: &M, options: &EnumerationOptions) -> Result<Enumeration> {
    let landscape = Landscape::analyze(map)?;
    let k = landscape.cycle_count();
    let complete = k <= options.max_cycles && k < 64;
    if !complete && options.exhaustive {
        return Err(Error::capacity(format!(
            "{k} periodic orbits exceed the subset enumeration cap {}",
            options.max_cycles
        )));
    }
    let minimal = landscape.minimal_attractors();
    let all: Vec<usize> = (0..k).collect();
    let mut families: Vec<Vec<usize>> = if complete {
        let out_masks: Vec<u64> = landscape
            .successors()
            .iter()
            .map(|out| out.iter().fold(0u64, |m, &d| m | 1 << d))
            .collect();
        (1u64..1 << k)
            .filter(|&m| crate::graph::bits(m).all(|c| out_masks[c] & !m == 0))
            .map(|m| crate::graph::bits(m).collect())
            .collect()
    } else {
        let mut f = minimal.to_vec();
        if !f.contains(&all) {
            f.push(all.clone());
        }
        f
    };
    families.sort_by(|a, b| {
        let trivial = |s: &Vec<usize>| s.len() == k;
        trivial(a)
            .cmp(&trivial(b))
            .then(a.len().cmp(&b.len()))
            .then(a.cmp(b))
    });
    let attractors = parallel::map_slice(options.execution, &families, |ids| {
        let set = landscape.set_of(ids);
        let mut report = if options.witnesses {
            is_attractor_with(map, &set, Execution::Sequential).expect("orbit unions are well-formed")
        } else {
            AttractorReport {
                set,
                invariant: true,
                is_attractor: true,
                trivial: false,
                minimal: false,
                cycles: Vec::new(),
                basin_size: None,
                max_hitting_time: None,
                witnesses: Vec::new(),
            }
        };
        debug_assert!(report.is_attractor);
        report.trivial = ids.len() == k;
        report.minimal = minimal.binary_search(ids).is_ok();
        report.basin_size = Some(landscape.basin_size(ids));
        report.cycles = ids.clone();
        report
    });
    Ok(Enumeration {
        cycles: landscape.structure().cycles().to_vec(),
        attractors,
        complete,
    })
}
