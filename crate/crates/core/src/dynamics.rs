//! Update rules, update orders and the evolution of configurations.
//!
//! Every rule reads utilities of the pre-step configuration only; vertices
//! outside the active block of the update order keep their state.
//!
//! Utilities are compared on an integer scale: payoffs are multiplied by the
//! common denominator of `a, b, c, d`, and for mean utility every vertex value
//! is further multiplied by `lcm(degrees) / degree`. The ordering of vertex
//! utilities is then exactly that of the rational values.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::config::Configuration;
use crate::error::{Error, Result};
use crate::game::{utility, PayoffParams, UtilityKind};
use crate::graph::{bits, mask_of, Graph};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum UpdateRule {
    /// Every vertex copies the unique best state in its closed neighbourhood.
    #[default]
    Imitation,
    /// Only vertices at the global minimum utility imitate.
    DeathBirth,
    /// Only vertices with a neighbour at the global maximum utility imitate.
    BirthDeath,
}

impl FromStr for UpdateRule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "imitation" => Ok(UpdateRule::Imitation),
            "death-birth" => Ok(UpdateRule::DeathBirth),
            "birth-death" => Ok(UpdateRule::BirthDeath),
            other => Err(Error::parse(0, format!("unknown update rule {other:?}"))),
        }
    }
}

impl fmt::Display for UpdateRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            UpdateRule::Imitation => "imitation",
            UpdateRule::DeathBirth => "death-birth",
            UpdateRule::BirthDeath => "birth-death",
        })
    }
}

/// Schedule of vertex blocks allowed to update at each time step. All orders
/// are periodic.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum UpdateOrder {
    /// Every vertex, every step.
    Synchronous,
    /// Vertex `(t mod n) + 1` at time `t`.
    Sequential,
    /// `blocks[t mod blocks.len()]`, 1-based labels.
    Blocks(Vec<Vec<usize>>),
}

impl UpdateOrder {
    /// `{1, 2}` at even times, `{3, ..., n}` at odd times.
    pub fn pair_then_rest(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::domain("pair-then-rest order needs n >= 3"));
        }
        Ok(UpdateOrder::Blocks(vec![vec![1, 2], (3..=n).collect()]))
    }

    pub fn period(&self, n: usize) -> usize {
        match self {
            UpdateOrder::Synchronous => 1,
            UpdateOrder::Sequential => n,
            UpdateOrder::Blocks(b) => b.len(),
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if let UpdateOrder::Blocks(blocks) = self {
            if blocks.is_empty() {
                return Err(Error::domain("update order needs at least one block"));
            }
            for &v in blocks.iter().flatten() {
                if v == 0 || v > n {
                    return Err(Error::InvalidVertex { vertex: v, n });
                }
            }
        }
        Ok(())
    }

    /// Bitset of vertices updated at phase `phase` (`0 <= phase < period`).
    pub fn phase_mask(&self, phase: usize, n: usize) -> u64 {
        match self {
            UpdateOrder::Synchronous => mask_of(n),
            UpdateOrder::Sequential => 1 << (phase % n),
            UpdateOrder::Blocks(b) => b[phase % b.len()]
                .iter()
                .fold(0u64, |m, &v| m | 1 << (v - 1)),
        }
    }

    /// Updated vertices at time `t`, sorted labels.
    pub fn active(&self, t: usize, n: usize) -> Vec<usize> {
        let p = t % self.period(n);
        bits(self.phase_mask(p, n)).map(|v| v + 1).collect()
    }

    /// Every vertex appears in some block.
    pub fn is_non_omitting(&self, n: usize) -> bool {
        let all = (0..self.period(n)).fold(0u64, |m, p| m | self.phase_mask(p, n));
        all == mask_of(n)
    }
}

impl FromStr for UpdateOrder {
    type Err = Error;

    /// `sync`, `seq`, or `blocks:1,2;3,4,5`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sync" | "synchronous" => Ok(UpdateOrder::Synchronous),
            "seq" | "sequential" => Ok(UpdateOrder::Sequential),
            _ => {
                let body = s.strip_prefix("blocks:").ok_or_else(|| {
                    Error::parse(0, format!("unknown update order {s:?}"))
                })?;
                let mut offset = "blocks:".len();
                let mut blocks = Vec::new();
                for part in body.split(';') {
                    let mut block = Vec::new();
                    for label in part.split(',') {
                        let v: usize = label.trim().parse().map_err(|_| {
                            Error::parse(offset, format!("invalid vertex label {label:?}"))
                        })?;
                        block.push(v);
                        offset += label.len() + 1;
                    }
                    blocks.push(block);
                }
                Ok(UpdateOrder::Blocks(blocks))
            }
        }
    }
}

impl fmt::Display for UpdateOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UpdateOrder::Synchronous => f.write_str("sync"),
            UpdateOrder::Sequential => f.write_str("seq"),
            UpdateOrder::Blocks(b) => {
                let parts: Vec<String> = b
                    .iter()
                    .map(|blk| {
                        blk.iter()
                            .map(|v| v.to_string())
                            .collect::<Vec<_>>()
                            .join(",")
                    })
                    .collect();
                write!(f, "blocks:{}", parts.join(";"))
            }
        }
    }
}

/// States attained by the utility maximisers of a closed neighbourhood.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CandidateSet {
    pub defect: bool,
    pub cooperate: bool,
}

impl CandidateSet {
    pub fn len(&self) -> usize {
        self.defect as usize + self.cooperate as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, state: bool) -> bool {
        if state {
            self.cooperate
        } else {
            self.defect
        }
    }

    /// The single state when the set is a singleton.
    pub fn unique(&self) -> Option<bool> {
        match (self.defect, self.cooperate) {
            (true, false) => Some(false),
            (false, true) => Some(true),
            _ => None,
        }
    }
}

/// A game on a graph: payoffs, utility kind and update rule.
#[derive(Clone, Debug)]
pub struct Game {
    graph: Graph,
    params: PayoffParams,
    kind: UtilityKind,
    rule: UpdateRule,
    closed: Vec<u64>,
    payoffs: [i128; 4],
    scale: Vec<i128>,
}

const MAX_N: usize = crate::graph::MAX_VERTICES;

impl Game {
    pub fn new(graph: Graph, params: PayoffParams, kind: UtilityKind, rule: UpdateRule) -> Result<Self> {
        let n = graph.order();
        if n < 2 {
            return Err(Error::domain("games need at least two vertices"));
        }
        if let Some(v) = (0..n).find(|&v| graph.nbr_mask(v) == 0) {
            return Err(Error::domain(format!("vertex {} is isolated", v + 1)));
        }
        let overflow = || Error::Overflow("payoffs too large for exact integer comparison".into());

        let den = params
            .as_array()
            .iter()
            .try_fold(1i128, |l, r| checked_lcm(l, *r.denom()))
            .ok_or_else(overflow)?;
        let mut payoffs = [0i128; 4];
        for (slot, r) in payoffs.iter_mut().zip(params.as_array()) {
            *slot = r.numer().checked_mul(den / r.denom()).ok_or_else(overflow)?;
        }

        let degrees = graph.degrees();
        let scale = match kind {
            UtilityKind::Aggregate => vec![1; n],
            UtilityKind::Mean => {
                let l = degrees
                    .iter()
                    .try_fold(1i128, |l, &d| checked_lcm(l, d as i128))
                    .ok_or_else(overflow)?;
                degrees.iter().map(|&d| l / d as i128).collect()
            }
        };
        let max_pay = payoffs.iter().map(|p| p.checked_abs().unwrap_or(i128::MAX)).max().unwrap_or(0);
        let max_scale = scale.iter().copied().max().unwrap_or(1);
        max_pay
            .checked_mul(max_scale)
            .and_then(|v| v.checked_mul(MAX_N as i128 * 2))
            .ok_or_else(overflow)?;

        let closed = (0..n).map(|v| graph.nbr_mask(v) | 1 << v).collect();
        Ok(Game {
            graph,
            params,
            kind,
            rule,
            closed,
            payoffs,
            scale,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn params(&self) -> &PayoffParams {
        &self.params
    }

    pub fn utility_kind(&self) -> UtilityKind {
        self.kind
    }

    pub fn rule(&self) -> UpdateRule {
        self.rule
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.graph.order()
    }

    /// Same game with another update rule.
    pub fn with_rule(&self, rule: UpdateRule) -> Game {
        Game { rule, ..self.clone() }
    }

    /// Exact rational utilities of all vertices.
    pub fn utilities(&self, x: &Configuration) -> Result<Vec<Rational>> {
        utility(&self.graph, &self.params, self.kind, x)
    }

    /// Utilities on the common integer scale.
    pub fn scaled_utilities(&self, x: u64) -> Vec<i128> {
        let mut u = [0i128; MAX_N];
        self.fill_utilities(x, &mut u);
        u[..self.order()].to_vec()
    }

    #[inline]
    fn fill_utilities(&self, x: u64, u: &mut [i128; MAX_N]) {
        let [a, b, c, d] = self.payoffs;
        for (v, slot) in u.iter_mut().enumerate().take(self.order()) {
            let nbrs = self.graph.nbr_mask(v);
            let coop = (nbrs & x).count_ones() as i128;
            let def = nbrs.count_ones() as i128 - coop;
            let raw = if x >> v & 1 == 1 {
                a * coop + b * def
            } else {
                c * coop + d * def
            };
            *slot = raw * self.scale[v];
        }
    }

    #[inline]
    fn candidates_from(&self, u: &[i128; MAX_N], x: u64, v: usize) -> CandidateSet {
        let mut best = i128::MIN;
        let mut set = CandidateSet {
            defect: false,
            cooperate: false,
        };
        for w in bits(self.closed[v]) {
            let uw = u[w];
            let coop = x >> w & 1 == 1;
            if uw > best {
                best = uw;
                set = CandidateSet {
                    defect: !coop,
                    cooperate: coop,
                };
            } else if uw == best {
                if coop {
                    set.cooperate = true;
                } else {
                    set.defect = true;
                }
            }
        }
        set
    }

    /// `A_i(x)` for vertex `i` (1-based).
    pub fn candidate_set(&self, x: &Configuration, i: usize) -> Result<CandidateSet> {
        self.check_config(x)?;
        self.graph.check_vertex(i)?;
        let mut u = [0i128; MAX_N];
        self.fill_utilities(x.bits(), &mut u);
        Ok(self.candidates_from(&u, x.bits(), i - 1))
    }

    /// The value every vertex would take if it were updated now.
    pub(crate) fn proposal(&self, x: u64) -> u64 {
        let n = self.order();
        let mut u = [0i128; MAX_N];
        self.fill_utilities(x, &mut u);
        let us = &u[..n];
        let mut out = x;
        let adopt = |out: &mut u64, v: usize, s: bool| {
            if s {
                *out |= 1 << v;
            } else {
                *out &= !(1 << v);
            }
        };
        match self.rule {
            UpdateRule::Imitation => {
                for v in 0..n {
                    if let Some(s) = self.candidates_from(&u, x, v).unique() {
                        adopt(&mut out, v, s);
                    }
                }
            }
            UpdateRule::DeathBirth => {
                let min = us.iter().copied().min().unwrap_or(0);
                for v in (0..n).filter(|&v| us[v] == min) {
                    if let Some(s) = self.candidates_from(&u, x, v).unique() {
                        adopt(&mut out, v, s);
                    }
                }
            }
            UpdateRule::BirthDeath => {
                let max = us.iter().copied().max().unwrap_or(0);
                for v in 0..n {
                    let near = bits(self.graph.nbr_mask(v)).map(|w| u[w]).max();
                    if near != Some(max) {
                        continue;
                    }
                    if let Some(s) = self.candidates_from(&u, x, v).unique() {
                        adopt(&mut out, v, s);
                    }
                }
            }
        }
        out
    }

    /// Synchronous step on raw bits.
    #[inline]
    pub fn step_bits(&self, x: u64) -> u64 {
        self.proposal(x)
    }

    /// Step updating only the vertices in `block`.
    #[inline]
    pub fn step_block_bits(&self, x: u64, block: u64) -> u64 {
        (x & !block) | (self.proposal(x) & block)
    }

    pub fn step(&self, x: &Configuration) -> Result<Configuration> {
        self.check_config(x)?;
        Ok(Configuration::raw(self.order(), self.step_bits(x.bits())))
    }

    pub(crate) fn check_config(&self, x: &Configuration) -> Result<()> {
        if x.len() != self.order() {
            return Err(Error::domain(format!(
                "configuration has length {}, graph has {} vertices",
                x.len(),
                self.order()
            )));
        }
        Ok(())
    }
}

fn checked_lcm(a: i128, b: i128) -> Option<i128> {
    let g = a.gcd(&b);
    (a / g).checked_mul(b)
}

/// A finite system whose step depends on a phase `t mod period`.
pub trait PhaseMap: Sync {
    /// Vertex count.
    fn order(&self) -> usize;
    fn period(&self) -> usize;
    /// Successor of `x` for a step taken at a time with the given phase.
    fn next(&self, phase: usize, x: u64) -> u64;
}

/// A game together with an update order: the two-parameter process
/// `φ(t, t0, x)`.
#[derive(Clone, Debug)]
pub struct System {
    game: Game,
    order: UpdateOrder,
    masks: Vec<u64>,
}

impl System {
    pub fn new(game: Game, order: UpdateOrder) -> Result<Self> {
        let n = game.order();
        order.validate(n)?;
        let masks = (0..order.period(n)).map(|p| order.phase_mask(p, n)).collect();
        Ok(System { game, order, masks })
    }

    pub fn autonomous(game: Game) -> Self {
        System::new(game, UpdateOrder::Synchronous).expect("synchronous order is always valid")
    }

    pub fn game(&self) -> &Game {
        &self.game
    }

    pub fn update_order(&self) -> &UpdateOrder {
        &self.order
    }

    pub(crate) fn masks(&self) -> &[u64] {
        &self.masks
    }

    /// `φ(t + 1, t, x)`.
    pub fn step_at(&self, t: usize, x: &Configuration) -> Result<Configuration> {
        self.game.check_config(x)?;
        Ok(Configuration::raw(self.order(), self.next(t % self.period(), x.bits())))
    }

    /// `φ(t, t0, x)`.
    pub fn evolve(&self, t0: usize, x: &Configuration, t: usize) -> Result<Configuration> {
        if t < t0 {
            return Err(Error::domain(format!("end time {t} precedes start time {t0}")));
        }
        self.game.check_config(x)?;
        let period = self.period();
        let mut bits = x.bits();
        for s in t0..t {
            bits = self.next(s % period, bits);
        }
        Ok(Configuration::raw(self.order(), bits))
    }

    /// `x(t0), x(t0 + 1), ..., x(t0 + steps)`.
    pub fn trajectory(&self, t0: usize, x: &Configuration, steps: usize) -> Result<Trajectory> {
        self.game.check_config(x)?;
        let period = self.period();
        let mut states = Vec::with_capacity(steps + 1);
        let mut bits = x.bits();
        states.push(*x);
        for s in t0..t0 + steps {
            bits = self.next(s % period, bits);
            states.push(Configuration::raw(self.order(), bits));
        }
        Ok(Trajectory { start: t0, states })
    }

    /// Whether `x` is left unchanged by the step at every phase.
    pub fn is_fixed(&self, x: u64) -> bool {
        (0..self.period()).all(|p| self.next(p, x) == x)
    }

    /// Runs from `(t0, x)` for at most `horizon` steps, stopping at the first
    /// fixed configuration or the first repeated `(state, phase)` pair.
    pub fn simulate(&self, t0: usize, x: &Configuration, horizon: usize) -> Result<Simulation> {
        self.game.check_config(x)?;
        let period = self.period();
        let n = self.order();
        let mut seen: HashMap<(u64, usize), usize> = HashMap::new();
        let mut states = Vec::new();
        let mut bits = x.bits();
        for step in 0..=horizon {
            let phase = (t0 + step) % period;
            if let Some(&first) = seen.get(&(bits, phase)) {
                return Ok(Simulation {
                    start: t0,
                    states,
                    outcome: Outcome::Cycle {
                        entered: first,
                        period: step - first,
                    },
                });
            }
            seen.insert((bits, phase), step);
            states.push(Configuration::raw(n, bits));
            if self.is_fixed(bits) {
                return Ok(Simulation {
                    start: t0,
                    states,
                    outcome: Outcome::Fixed { step },
                });
            }
            if step == horizon {
                break;
            }
            bits = self.next(phase, bits);
        }
        Ok(Simulation {
            start: t0,
            states,
            outcome: Outcome::Horizon,
        })
    }
}

impl PhaseMap for System {
    #[inline]
    fn order(&self) -> usize {
        self.game.order()
    }

    #[inline]
    fn period(&self) -> usize {
        self.masks.len()
    }

    #[inline]
    fn next(&self, phase: usize, x: u64) -> u64 {
        self.game.step_block_bits(x, self.masks[phase])
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trajectory {
    pub start: usize,
    pub states: Vec<Configuration>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    /// The state at `step` is fixed under every phase.
    Fixed { step: usize },
    /// The `(state, phase)` pair first seen at `entered` recurs after `period` steps.
    Cycle { entered: usize, period: usize },
    Horizon,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Simulation {
    pub start: usize,
    pub states: Vec<Configuration>,
    pub outcome: Outcome,
}

/// `A_i(x)`.
pub fn candidate_set(
    g: &Graph,
    p: &PayoffParams,
    kind: UtilityKind,
    x: &Configuration,
    i: usize,
) -> Result<CandidateSet> {
    Game::new(g.clone(), *p, kind, UpdateRule::Imitation)?.candidate_set(x, i)
}

/// One synchronous application of the rule.
pub fn step_autonomous(
    g: &Graph,
    p: &PayoffParams,
    kind: UtilityKind,
    rule: UpdateRule,
    x: &Configuration,
) -> Result<Configuration> {
    Game::new(g.clone(), *p, kind, rule)?.step(x)
}

/// `φ(t + 1, t, x)` under `order`.
pub fn step_nonautonomous(
    g: &Graph,
    p: &PayoffParams,
    kind: UtilityKind,
    rule: UpdateRule,
    order: &UpdateOrder,
    t: usize,
    x: &Configuration,
) -> Result<Configuration> {
    System::new(Game::new(g.clone(), *p, kind, rule)?, order.clone())?.step_at(t, x)
}

/// `φ(t, t0, x)` under `order`.
#[allow(clippy::too_many_arguments)]
pub fn evolve(
    g: &Graph,
    p: &PayoffParams,
    kind: UtilityKind,
    rule: UpdateRule,
    order: &UpdateOrder,
    t0: usize,
    x: &Configuration,
    t: usize,
) -> Result<Configuration> {
    System::new(Game::new(g.clone(), *p, kind, rule)?, order.clone())?.evolve(t0, x, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::Scenario;

    fn paper() -> PayoffParams {
        "1,0.88,1.74,0".parse().unwrap()
    }

    fn cfg(s: &str) -> Configuration {
        Configuration::parse_bits(s).unwrap()
    }

    #[test]
    fn candidate_sets() {
        let k3 = Graph::complete(3).unwrap();
        let a = candidate_set(&k3, &paper(), UtilityKind::Aggregate, &cfg("100"), 2).unwrap();
        assert_eq!(a.unique(), Some(true));
        let a = candidate_set(&k3, &paper(), UtilityKind::Aggregate, &cfg("000"), 1).unwrap();
        assert_eq!(a.unique(), Some(false));
        // n = 1 + (c-d)/(b-d) = 3 makes the lone cooperator tie with the defectors
        let tie: PayoffParams = "1,0.3,0.6,0".parse().unwrap();
        let a = candidate_set(&k3, &tie, UtilityKind::Aggregate, &cfg("100"), 2).unwrap();
        assert_eq!(a.len(), 2);
        assert!(a.contains(true) && a.contains(false));
    }

    #[test]
    fn imitation_on_triangle() {
        let k3 = Graph::complete(3).unwrap();
        let y = step_autonomous(&k3, &paper(), UtilityKind::Aggregate, UpdateRule::Imitation, &cfg("100")).unwrap();
        assert_eq!(y, cfg("111"));
    }

    #[test]
    fn tie_keeps_every_state() {
        let k3 = Graph::complete(3).unwrap();
        let tie: PayoffParams = "1,0.3,0.6,0".parse().unwrap();
        let x = cfg("100");
        let y = step_autonomous(&k3, &tie, UtilityKind::Aggregate, UpdateRule::Imitation, &x).unwrap();
        assert_eq!(y, x);
    }

    #[test]
    fn homogeneous_states_are_fixed_for_all_rules() {
        let graphs = [Graph::cycle(5).unwrap(), Graph::wheel(6).unwrap()];
        for g in &graphs {
            let n = g.order();
            for rule in [UpdateRule::Imitation, UpdateRule::DeathBirth, UpdateRule::BirthDeath] {
                for x in [Configuration::all_cooperate(n), Configuration::all_defect(n)] {
                    let y = step_autonomous(g, &paper(), UtilityKind::Mean, rule, &x).unwrap();
                    assert_eq!(y, x);
                }
            }
        }
    }

    #[test]
    fn sequential_order_updates_one_vertex() {
        let k5 = Graph::complete(5).unwrap();
        let p: PayoffParams = "1,0.8,1.5,0".parse().unwrap();
        assert_eq!(UpdateOrder::Sequential.active(0, 5), vec![1]);
        assert_eq!(UpdateOrder::Sequential.active(7, 5), vec![3]);
        for bits in 0..32u64 {
            let x = Configuration::from_bits(5, bits).unwrap();
            let y = step_nonautonomous(&k5, &p, UtilityKind::Aggregate, UpdateRule::Imitation, &UpdateOrder::Sequential, 0, &x).unwrap();
            assert_eq!((x.bits() ^ y.bits()) & !1, 0);
        }
    }

    #[test]
    fn sequential_cycle_on_k5() {
        let k5 = Graph::complete(5).unwrap();
        let p: PayoffParams = "1,0.8,1.5,0".parse().unwrap();
        let game = Game::new(k5, p, UtilityKind::Aggregate, UpdateRule::Imitation).unwrap();
        let sys = System::new(game, UpdateOrder::Sequential).unwrap();
        let x = cfg("11000");
        let traj = sys.trajectory(0, &x, 30).unwrap();
        assert_eq!(traj.states[30], x);
        // shifted block of cooperators after every n + 1 steps
        assert_eq!(traj.states[6], cfg("01100"));
        assert_eq!(traj.states[12], cfg("00110"));
        assert!(traj.states.iter().all(|s| (2..=3).contains(&s.cooperators())));
        let sim = sys.simulate(0, &x, 31).unwrap();
        assert_eq!(sim.outcome, Outcome::Cycle { entered: 0, period: 30 });
    }

    #[test]
    fn pair_then_rest_trajectory() {
        let k5 = Graph::complete(5).unwrap();
        let p: PayoffParams = "1,0.9,2,0".parse().unwrap();
        let order = UpdateOrder::pair_then_rest(5).unwrap();
        assert!(order.is_non_omitting(5));
        let x = cfg("10000");
        let run = |t| evolve(&k5, &p, UtilityKind::Aggregate, UpdateRule::Imitation, &order, 0, &x, t).unwrap();
        assert_eq!(run(1), cfg("11000"));
        assert_eq!(run(2), cfg("11000"));
        assert_eq!(run(3), cfg("00000"));
    }

    #[test]
    fn evolve_identities() {
        let g = Graph::cycle(4).unwrap();
        let p: PayoffParams = "1,0.2,1.3,0".parse().unwrap();
        let x = cfg("1010");
        let ev = |t0, x: &Configuration, t| evolve(&g, &p, UtilityKind::Aggregate, UpdateRule::Imitation, &UpdateOrder::Sequential, t0, x, t);
        assert_eq!(ev(3, &x, 3).unwrap(), x);
        assert!(matches!(ev(4, &x, 2), Err(Error::Domain(_))));
        let mid = ev(0, &x, 3).unwrap();
        assert_eq!(ev(3, &mid, 5).unwrap(), ev(0, &x, 5).unwrap());
    }

    #[test]
    fn synchronous_order_matches_autonomous_step() {
        let g = Graph::wheel(6).unwrap();
        for rule in [UpdateRule::Imitation, UpdateRule::DeathBirth, UpdateRule::BirthDeath] {
            let game = Game::new(g.clone(), paper(), UtilityKind::Mean, rule).unwrap();
            let sys = System::autonomous(game.clone());
            for bits in 0..64u64 {
                let x = Configuration::from_bits(6, bits).unwrap();
                for t in [0, 3] {
                    assert_eq!(sys.step_at(t, &x).unwrap(), game.step(&x).unwrap());
                }
            }
        }
    }

    #[test]
    fn death_birth_updates_only_minimisers() {
        let g = Graph::wheel(5).unwrap();
        let game = Game::new(g, paper(), UtilityKind::Aggregate, UpdateRule::DeathBirth).unwrap();
        for bits in 0..32u64 {
            let x = Configuration::from_bits(5, bits).unwrap();
            let u = game.utilities(&x).unwrap();
            let min = u.iter().min().unwrap();
            let y = game.step(&x).unwrap();
            for v in 1..=5 {
                if &u[v - 1] != min {
                    assert_eq!(y.get(v), x.get(v));
                }
            }
        }
    }

    #[test]
    fn birth_death_requires_a_neighbour_at_global_max() {
        let g = Graph::cycle(6).unwrap();
        let p: PayoffParams = "1,-0.5,1.5,0".parse().unwrap();
        assert_eq!(p.scenario(), Some(Scenario::PrisonersDilemma));
        let game = Game::new(g, p, UtilityKind::Aggregate, UpdateRule::BirthDeath).unwrap();
        // u = (0.5, 0.5, 1.5, 0, 0, 1.5); vertices 3 and 6 have no neighbour at
        // the global maximum and keep their state
        let x = cfg("110000");
        let y = game.step(&x).unwrap();
        assert_eq!(y, cfg("000000"));
        let imitation = game.with_rule(UpdateRule::Imitation).step(&x).unwrap();
        assert_eq!(imitation, cfg("000000"));
    }

    #[test]
    fn isolated_vertices_rejected() {
        let g = Graph::from_edges(3, &[(1, 2)]).unwrap();
        assert!(Game::new(g, paper(), UtilityKind::Aggregate, UpdateRule::Imitation).is_err());
    }

    #[test]
    fn order_parsing() {
        assert_eq!("sync".parse::<UpdateOrder>().unwrap(), UpdateOrder::Synchronous);
        assert_eq!("seq".parse::<UpdateOrder>().unwrap(), UpdateOrder::Sequential);
        let o: UpdateOrder = "blocks:1,2;3,4,5".parse().unwrap();
        assert_eq!(o, UpdateOrder::pair_then_rest(5).unwrap());
        assert_eq!(o.to_string(), "blocks:1,2;3,4,5");
        assert!("blocks:1,x".parse::<UpdateOrder>().is_err());
        let bad: UpdateOrder = "blocks:1;7".parse().unwrap();
        assert!(bad.validate(5).is_err());
        let omit: UpdateOrder = "blocks:1,2;3".parse().unwrap();
        assert!(!omit.is_non_omitting(4));
    }

    #[test]
    fn scaled_utilities_follow_exact_order() {
        let g = Graph::wheel(7).unwrap();
        let p: PayoffParams = "3/7,-1/3,5/11,-2/5".parse().unwrap();
        for kind in [UtilityKind::Aggregate, UtilityKind::Mean] {
            let game = Game::new(g.clone(), p, kind, UpdateRule::Imitation).unwrap();
            for bits in 0..128u64 {
                let x = Configuration::from_bits(7, bits).unwrap();
                let exact = game.utilities(&x).unwrap();
                let scaled = game.scaled_utilities(bits);
                for i in 0..7 {
                    for j in 0..7 {
                        assert_eq!(exact[i].cmp(&exact[j]), scaled[i].cmp(&scaled[j]));
                    }
                }
            }
        }
    }
}
