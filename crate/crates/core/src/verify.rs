//! Cross-checks of the closed-form conditions against brute force, and the
//! `(b, c)` outcome sweeps.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::Serialize;

use crate::attractor::{basin, is_attractor, InvariantSet, Landscape};
use crate::config::Configuration;
use crate::dynamics::{Game, PhaseMap, System, UpdateOrder, UpdateRule};
use crate::error::{Error, Result};
use crate::game::{interior_threshold, PayoffParams, Scenario, UtilityKind};
use crate::graph::Graph;
use crate::parallel::{self, Execution};
use crate::predicates::{self as pr};
use crate::rational::{frac, int, Rational};
use crate::statespace::{configurations_with_count, StateSpaceMap, DEFAULT_MAX_N};

/// The statements that can be checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Claim {
    /// All-D on `K_n` iff `b < d` or `n < 1 + (c-d)/(b-d)`.
    CompleteDefection,
    /// All-C on `K_n` iff `a > c` and `n > 1 + (a-b)/(a-c)`.
    CompleteCooperation,
    /// Sufficient conditions on `k`-regular graphs.
    RegularSufficient,
    /// The `K_n` conditions under non-omitting orders, iff for sequential.
    UpdateOrders,
    /// Nontrivial attractors on synchronous `K_n`.
    SynchronousAttractors,
    /// Nontrivial attractors on sequential `K_n`.
    SequentialAttractors,
    /// All-C on wheels.
    WheelCooperation,
    /// All-D on wheels.
    WheelDefection,
}

impl Claim {
    pub const ALL: [Claim; 8] = [
        Claim::CompleteDefection,
        Claim::CompleteCooperation,
        Claim::RegularSufficient,
        Claim::UpdateOrders,
        Claim::SynchronousAttractors,
        Claim::SequentialAttractors,
        Claim::WheelCooperation,
        Claim::WheelDefection,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Claim::CompleteDefection => "complete-defection",
            Claim::CompleteCooperation => "complete-cooperation",
            Claim::RegularSufficient => "regular-sufficient",
            Claim::UpdateOrders => "update-orders",
            Claim::SynchronousAttractors => "sync-attractors",
            Claim::SequentialAttractors => "seq-attractors",
            Claim::WheelCooperation => "wheel-cooperation",
            Claim::WheelDefection => "wheel-defection",
        }
    }

    /// Numeric alias accepted on the command line.
    pub fn number(self) -> &'static str {
        match self {
            Claim::CompleteDefection => "4.1",
            Claim::CompleteCooperation => "4.2",
            Claim::RegularSufficient => "4.3",
            Claim::UpdateOrders => "6.1",
            Claim::SynchronousAttractors => "7.1",
            Claim::SequentialAttractors => "7.2",
            Claim::WheelCooperation => "8.1",
            Claim::WheelDefection => "8.2",
        }
    }

    /// Whether only the forward implication is asserted.
    pub fn is_sufficient_only(self) -> bool {
        matches!(self, Claim::RegularSufficient)
    }

    /// Sizes used when none are given.
    pub fn default_sizes(self) -> Vec<usize> {
        match self {
            Claim::RegularSufficient => Vec::new(),
            Claim::SequentialAttractors => (4..=7).collect(),
            Claim::WheelCooperation | Claim::WheelDefection => (4..=10).collect(),
            _ => (3..=8).collect(),
        }
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Claim {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        Claim::ALL
            .into_iter()
            .find(|c| c.name() == s || c.number() == s)
            .ok_or_else(|| Error::parse(0, format!("unknown claim {s:?}")))
    }
}

/// What a check runs over.
#[derive(Clone, Debug)]
pub struct SweepSpec {
    /// `n` for complete graphs, `l` for wheels; ignored for regular graphs.
    pub sizes: Vec<usize>,
    pub points: Vec<PayoffParams>,
    /// Utility kinds tried where the graph is irregular.
    pub kinds: Vec<UtilityKind>,
    /// Graph for the regular-graph check; the 24-vertex Cayley graph if unset.
    pub graph: Option<Graph>,
    pub execution: Execution,
}

impl SweepSpec {
    pub fn new(sizes: Vec<usize>, points: Vec<PayoffParams>) -> Self {
        SweepSpec {
            sizes,
            points,
            kinds: vec![UtilityKind::Aggregate, UtilityKind::Mean],
            graph: None,
            execution: Execution::default(),
        }
    }

    /// Defaults for `claim`: its standard sizes and, where the check needs a
    /// grid, a 20 x 20 one; otherwise the claim's reference point.
    pub fn default_for(claim: Claim) -> Self {
        let points = match claim {
            Claim::RegularSufficient => vec![reference_point(claim)],
            _ => grid_points(20, 20),
        };
        SweepSpec::new(claim.default_sizes(), points)
    }
}

/// Reference parameters tied to each claim.
pub fn reference_point(claim: Claim) -> PayoffParams {
    match claim {
        Claim::RegularSufficient => PayoffParams::from_ratios([(1, 1), (22, 25), (87, 50), (0, 1)]),
        Claim::UpdateOrders => PayoffParams::from_ratios([(1, 1), (9, 10), (2, 1), (0, 1)]),
        _ => PayoffParams::from_ratios([(1, 1), (4, 5), (3, 2), (0, 1)]),
    }
}

/// Admissible cell centres `b = b0 + (2i+1)(b1-b0)/(2g)`,
/// `c = c0 + (2j+1)(c1-c0)/(2h)` with `a = 1`, `d = 0`, row-major in `b`.
pub fn grid_in(b: (Rational, Rational), c: (Rational, Rational), g: usize, h: usize) -> Vec<PayoffParams> {
    grid_cells(b, c, g, h)
        .into_iter()
        .filter(PayoffParams::is_admissible)
        .collect()
}

/// Every cell centre, admissible or not.
pub fn grid_cells(b: (Rational, Rational), c: (Rational, Rational), g: usize, h: usize) -> Vec<PayoffParams> {
    let centre = |(lo, hi): (Rational, Rational), k: usize, m: usize| {
        lo + (hi - lo) * frac(2 * k as i128 + 1, 2 * m as i128)
    };
    let mut out = Vec::with_capacity(g * h);
    for i in 0..g {
        for j in 0..h {
            out.push(PayoffParams::new(int(1), centre(b, i, g), centre(c, j, h), int(0)));
        }
    }
    out
}

/// Admissible grid over `b ∈ (-1, 1)`, `c ∈ (0, 2)`, which covers all four
/// scenarios.
pub fn grid_points(g: usize, h: usize) -> Vec<PayoffParams> {
    grid_in((int(-1), int(1)), (int(0), int(2)), g, h)
}

/// A failed or noteworthy check: parameters, size and, where there is one, the
/// state that shows it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Finding {
    pub params: PayoffParams,
    pub size: usize,
    pub kind: UtilityKind,
    pub state: Option<Configuration>,
    pub detail: String,
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(({}), {}, ", self.params, self.size)?;
        match &self.state {
            Some(x) => write!(f, "{x})")?,
            None => f.write_str("-)")?,
        }
        if self.kind == UtilityKind::Mean {
            f.write_str(" [mean]")?;
        }
        write!(f, ": {}", self.detail)
    }
}

#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub claim: Claim,
    /// Individual predicate-versus-brute-force comparisons made.
    pub checked: usize,
    pub agreements: usize,
    pub disagreements: Vec<Finding>,
    /// Brute force attractive where a sufficient condition fails.
    pub converse_violations: Vec<Finding>,
    pub notes: Vec<String>,
}

impl VerificationReport {
    fn new(claim: Claim) -> Self {
        VerificationReport {
            claim,
            checked: 0,
            agreements: 0,
            disagreements: Vec::new(),
            converse_violations: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.disagreements.is_empty()
    }

    fn absorb(&mut self, outcome: CheckOutcome) {
        self.checked += outcome.checked;
        self.agreements += outcome.agreements;
        self.disagreements.extend(outcome.disagreements);
        self.converse_violations.extend(outcome.converse_violations);
    }
}

#[derive(Default)]
struct CheckOutcome {
    checked: usize,
    agreements: usize,
    disagreements: Vec<Finding>,
    converse_violations: Vec<Finding>,
}

impl CheckOutcome {
    /// Records an iff comparison.
    fn iff(&mut self, predicted: bool, actual: bool, finding: impl FnOnce() -> Finding) {
        self.checked += 1;
        if predicted == actual {
            self.agreements += 1;
        } else {
            self.disagreements.push(finding());
        }
    }

    /// Records a `predicted => actual` comparison.
    fn implies(&mut self, predicted: bool, actual: bool, finding: impl FnOnce() -> Finding) {
        self.checked += 1;
        match (predicted, actual) {
            (true, false) => self.disagreements.push(finding()),
            (false, true) => {
                self.agreements += 1;
                self.converse_violations.push(finding());
            }
            _ => self.agreements += 1,
        }
    }

    fn merge(mut self, other: CheckOutcome) -> Self {
        self.checked += other.checked;
        self.agreements += other.agreements;
        self.disagreements.extend(other.disagreements);
        self.converse_violations.extend(other.converse_violations);
        self
    }
}

fn system(g: &Graph, p: &PayoffParams, kind: UtilityKind, order: UpdateOrder) -> Result<System> {
    System::new(Game::new(g.clone(), *p, kind, UpdateRule::Imitation)?, order)
}

/// Attractivity of all-C or all-D, with the first state that fails to reach it.
pub fn homogeneous_attracts<M: PhaseMap + ?Sized>(map: &M, cooperate: bool) -> Result<(bool, Option<Configuration>)> {
    let set = InvariantSet::homogeneous(map.order(), map.period(), cooperate);
    let report = is_attractor(map, &set)?;
    let witness = report
        .counterexample()
        .map(|w| w.start.config(map.order()));
    Ok((report.is_attractor, witness))
}

fn finding(p: &PayoffParams, size: usize, kind: UtilityKind, state: Option<Configuration>, detail: String) -> Finding {
    Finding {
        params: *p,
        size,
        kind,
        state,
        detail,
    }
}

fn for_each_case<F>(spec: &SweepSpec, sizes: &[usize], f: F) -> Result<CheckOutcome>
where
    F: Fn(&PayoffParams, usize) -> Result<CheckOutcome> + Sync + Send,
{
    let cases: Vec<(usize, PayoffParams)> = sizes
        .iter()
        .flat_map(|&n| spec.points.iter().map(move |p| (n, *p)))
        .collect();
    let results = parallel::map_slice(spec.execution, &cases, |(n, p)| f(p, *n));
    results
        .into_iter()
        .try_fold(CheckOutcome::default(), |acc, r| Ok(acc.merge(r?)))
}

fn check_points(spec: &SweepSpec) -> Result<()> {
    if let Some(p) = spec.points.iter().find(|p| !p.is_admissible()) {
        return Err(Error::domain(format!("payoffs ({p}) are not admissible")));
    }
    Ok(())
}

/// Runs one claim over a sweep.
pub fn verify_theorem(claim: Claim, spec: &SweepSpec) -> Result<VerificationReport> {
    check_points(spec)?;
    let mut report = VerificationReport::new(claim);
    match claim {
        Claim::CompleteDefection | Claim::CompleteCooperation => {
            let cooperate = claim == Claim::CompleteCooperation;
            report.absorb(for_each_case(spec, &spec.sizes, |p, n| {
                complete_homogeneous(p, n, UpdateOrder::Synchronous, cooperate)
            })?);
        }
        Claim::RegularSufficient => regular_sufficient(spec, &mut report)?,
        Claim::UpdateOrders => update_orders(spec, &mut report)?,
        Claim::SynchronousAttractors => {
            report.absorb(for_each_case(spec, &spec.sizes, synchronous_attractors)?);
        }
        Claim::SequentialAttractors => sequential_attractors(spec, &mut report)?,
        Claim::WheelCooperation | Claim::WheelDefection => wheels(claim, spec, &mut report)?,
    }
    if matches!(claim, Claim::SynchronousAttractors | Claim::SequentialAttractors) {
        summarize_by_threshold(&mut report);
    }
    Ok(report)
}

/// Where `m*` sits relative to the integers `1, 2, n - 2, n - 1`.
pub fn threshold_region(p: &PayoffParams, n: usize) -> &'static str {
    let Some(m) = interior_threshold(p, n) else {
        return "m* undefined";
    };
    let nn = int(n as i128);
    if (p.c - p.a) + (p.b - p.d) <= Rational::zero() {
        "c - a + b - d <= 0"
    } else if m < int(1) || m > nn - int(1) {
        "m* outside [1, n-1]"
    } else if m < int(2) {
        "m* in [1, 2)"
    } else if m > nn - int(2) {
        "m* in (n-2, n-1]"
    } else if m.is_integer() {
        "integer m* in [2, n-2]"
    } else {
        "non-integer m* in (2, n-2)"
    }
}

fn summarize_by_threshold(report: &mut VerificationReport) {
    let mut counts: std::collections::BTreeMap<(&str, bool), usize> = Default::default();
    for f in &report.disagreements {
        let integer = interior_threshold(&f.params, f.size).is_some_and(|m| m.is_integer());
        *counts.entry((threshold_region(&f.params, f.size), integer)).or_default() += 1;
    }
    for ((region, integer), count) in counts {
        let kind = if integer { "integer" } else { "non-integer" };
        report
            .notes
            .push(format!("{count} disagreements with {region} ({kind} m*)"));
    }
}

fn complete_homogeneous(p: &PayoffParams, n: usize, order: UpdateOrder, cooperate: bool) -> Result<CheckOutcome> {
    let sys = system(&Graph::complete(n)?, p, UtilityKind::Aggregate, order)?;
    let predicted = if cooperate {
        pr::full_cooperation_kn(p, n)?
    } else {
        pr::full_defection_kn(p, n)?
    };
    let (actual, witness) = homogeneous_attracts(&sys, cooperate)?;
    let mut out = CheckOutcome::default();
    let target = if cooperate { "all-C" } else { "all-D" };
    out.iff(predicted, actual, || {
        finding(
            p,
            n,
            UtilityKind::Aggregate,
            witness,
            format!("predicted {target} attractive = {predicted}, brute force = {actual}"),
        )
    });
    Ok(out)
}

fn regular_sufficient(spec: &SweepSpec, report: &mut VerificationReport) -> Result<()> {
    let g = match &spec.graph {
        Some(g) => g.clone(),
        None => crate::graph6::decode_graph6(crate::CAYLEY_D24_G6)?,
    };
    let k = g
        .is_k_regular()
        .ok_or_else(|| Error::domain("the regular-graph check needs a regular graph"))?;
    let n = g.order();
    let outcome = parallel::map_slice(spec.execution, &spec.points, |p| -> Result<CheckOutcome> {
        let sys = system(&g, p, UtilityKind::Aggregate, UpdateOrder::Synchronous)?;
        let mut out = CheckOutcome::default();
        for cooperate in [false, true] {
            let predicted = if cooperate {
                pr::full_cooperation_kreg_sufficient(p, k)?
            } else {
                pr::full_defection_kreg_sufficient(p, k)?
            };
            let (actual, witness) = homogeneous_attracts(&sys, cooperate)?;
            let target = if cooperate { "all-C" } else { "all-D" };
            let start = if cooperate {
                Configuration::single_defector(n, 1)?
            } else {
                Configuration::single_cooperator(n, 1)?
            };
            out.implies(predicted, actual, || {
                finding(
                    p,
                    n,
                    UtilityKind::Aggregate,
                    witness.or(Some(start)),
                    format!("{target} attractive on this {k}-regular graph = {actual}, sufficient condition = {predicted}"),
                )
            });
        }
        Ok(out)
    });
    for o in outcome {
        report.absorb(o?);
    }
    Ok(())
}

fn update_orders(spec: &SweepSpec, report: &mut VerificationReport) -> Result<()> {
    // sequential order: iff
    report.absorb(for_each_case(spec, &spec.sizes, |p, n| {
        Ok(complete_homogeneous(p, n, UpdateOrder::Sequential, false)?
            .merge(complete_homogeneous(p, n, UpdateOrder::Sequential, true)?))
    })?);

    // pair-then-rest order: sufficient only
    let sizes: Vec<usize> = spec.sizes.iter().copied().filter(|&n| n >= 4).collect();
    report.absorb(for_each_case(spec, &sizes, pair_then_rest)?);

    // the three-inequality instance
    let p = reference_point(Claim::UpdateOrders);
    let n = 5;
    let ineq = pr::pair_then_rest_conditions(&p, n)?;
    let sys = system(&Graph::complete(n)?, &p, UtilityKind::Aggregate, UpdateOrder::pair_then_rest(n)?)?;
    let (attracts, witness) = homogeneous_attracts(&sys, false)?;
    let condition = pr::full_defection_kn(&p, n)?;
    report.notes.push(format!(
        "pair-then-rest order, ({p}), n = {n}: inequalities hold = {ineq:?}, all-D attractive = {attracts}, K_n condition = {condition}"
    ));
    let mut out = CheckOutcome::default();
    out.iff(ineq.iter().all(|&b| b), attracts, || {
        finding(
            &p,
            n,
            UtilityKind::Aggregate,
            witness,
            "the three inequalities hold but all-D is not attractive under the pair-then-rest order".into(),
        )
    });
    if attracts && !condition && !spec.points.contains(&p) {
        out.converse_violations.push(finding(
            &p,
            n,
            UtilityKind::Aggregate,
            Some(Configuration::single_cooperator(n, 1)?),
            "all-D attractive under the pair-then-rest order while the K_n condition fails".into(),
        ));
    }
    report.absorb(out);
    Ok(())
}

fn pair_then_rest(p: &PayoffParams, n: usize) -> Result<CheckOutcome> {
    let sys = system(&Graph::complete(n)?, p, UtilityKind::Aggregate, UpdateOrder::pair_then_rest(n)?)?;
    let mut out = CheckOutcome::default();
    for cooperate in [false, true] {
        let predicted = if cooperate {
            pr::full_cooperation_kn(p, n)?
        } else {
            pr::full_defection_kn(p, n)?
        };
        let (actual, witness) = homogeneous_attracts(&sys, cooperate)?;
        let target = if cooperate { "all-C" } else { "all-D" };
        out.implies(predicted, actual, || {
            finding(
                p,
                n,
                UtilityKind::Aggregate,
                witness,
                format!("pair-then-rest order: {target} attractive = {actual}, K_n condition = {predicted}"),
            )
        });
    }
    Ok(out)
}

fn with_count(n: usize, pred: impl Fn(Rational) -> bool) -> Vec<u64> {
    (0..1u64 << n)
        .filter(|x| pred(int(x.count_ones() as i128)))
        .collect()
}

fn synchronous_attractors(p: &PayoffParams, n: usize) -> Result<CheckOutcome> {
    let sys = system(&Graph::complete(n)?, p, UtilityKind::Aggregate, UpdateOrder::Synchronous)?;
    let map = StateSpaceMap::build(&sys, DEFAULT_MAX_N)?;
    let land = Landscape::analyze(&map)?;
    let predicted = pr::nontrivial_sync_kn(p, n)?;
    let actual = land.has_nontrivial_attractor();
    let mut out = CheckOutcome::default();
    out.iff(predicted, actual, || {
        finding(
            p,
            n,
            UtilityKind::Aggregate,
            None,
            format!("nontrivial attractor predicted = {predicted}, found = {actual}"),
        )
    });
    let Some(m) = interior_threshold(p, n).filter(|_| !predicted) else {
        return Ok(out);
    };
    let nn = int(n as i128);
    let zero = Rational::zero();
    let full = (1u64 << n) - 1;
    let mut cases: Vec<(&str, u64, Vec<u64>)> = vec![
        ("all-D", 0, with_count(n, |k| k == zero || (m < k && k < nn))),
        ("all-C", full, with_count(n, |k| k == nn || (zero < k && k < m))),
    ];
    if m.is_integer() {
        let count = m.to_integer() as usize;
        let states = configurations_with_count(n, count);
        cases.push(("M*", states[0], states));
    }
    for (name, _, expected) in cases {
        let set = if name == "M*" {
            InvariantSet::time_independent(n, 1, expected.iter().copied())?
        } else {
            InvariantSet::homogeneous(n, 1, name == "all-C")
        };
        let b = basin(&map, &set)?;
        let actual = b.configurations().map(<[u64]>::to_vec).unwrap_or_default();
        out.iff(true, actual == expected, || {
            let first = actual
                .iter()
                .find(|x| expected.binary_search(x).is_err())
                .or_else(|| expected.iter().find(|x| actual.binary_search(x).is_err()))
                .map(|&x| Configuration::raw(n, x));
            finding(
                p,
                n,
                UtilityKind::Aggregate,
                first,
                format!("basin of {name} differs from the formula (m* = {m})"),
            )
        });
    }
    Ok(out)
}

/// The mixed attractor expected on sequential `K_n` when the coexistence
/// condition holds: `{x : Σx = m*}` for integer `m*`, otherwise
/// `{x : Σx ∈ {⌊m*⌋, ⌈m*⌉}}`, at every phase.
pub fn coexistence_set(p: &PayoffParams, n: usize) -> Result<Option<InvariantSet>> {
    if !pr::coexistence_kn(p, n)? {
        return Ok(None);
    }
    let m = interior_threshold(p, n).expect("coexistence needs m*");
    let lo = m.floor().to_integer() as usize;
    let hi = m.ceil().to_integer() as usize;
    let mut states = configurations_with_count(n, lo);
    if hi != lo {
        states.extend(configurations_with_count(n, hi));
    }
    Ok(Some(InvariantSet::time_independent(n, n, states)?))
}

fn sequential_attractors(spec: &SweepSpec, report: &mut VerificationReport) -> Result<()> {
    report.absorb(for_each_case(spec, &spec.sizes, |p, n| {
        let sys = system(&Graph::complete(n)?, p, UtilityKind::Aggregate, UpdateOrder::Sequential)?;
        let map = StateSpaceMap::build(&sys, DEFAULT_MAX_N)?;
        let land = Landscape::analyze(&map)?;
        let predicted = pr::nontrivial_seq_kn(p, n)?;
        let actual = land.has_nontrivial_attractor();
        let mut out = CheckOutcome::default();
        out.iff(predicted, actual, || {
            finding(
                p,
                n,
                UtilityKind::Aggregate,
                None,
                format!("nontrivial attractor predicted = {predicted}, found = {actual}"),
            )
        });
        if let Some(set) = coexistence_set(p, n)? {
            let r = is_attractor(&map, &set)?;
            let decomposed = land.decompose(&set);
            out.iff(true, r.is_attractor && decomposed.is_some(), || {
                finding(
                    p,
                    n,
                    UtilityKind::Aggregate,
                    r.counterexample().map(|w| w.start.config(n)),
                    format!(
                        "mixed set is invariant = {}, attractive = {}, union of cycles = {}",
                        r.invariant,
                        r.is_attractor,
                        decomposed.is_some()
                    ),
                )
            });
        }
        Ok(out)
    })?);

    let p = reference_point(Claim::SequentialAttractors);
    let n = 5;
    let example = cycle_example(&p, n)?;
    report.notes.push(format!(
        "({p}), n = {n}: m* = {}, mixed set attractive = {}, cycle lengths = {:?}, cycle through 11000 has length {}",
        crate::rational::format_rational(&interior_threshold(&p, n).expect("defined")),
        example.attractive,
        example.cycle_lengths,
        example.cycle_through_start
    ));
    let mut out = CheckOutcome::default();
    out.iff(true, example.attractive && example.cycle_through_start == n * (n + 1), || {
        finding(
            &p,
            n,
            UtilityKind::Aggregate,
            Configuration::parse_bits("11000").ok(),
            format!(
                "expected an attractive mixed set containing a cycle of length {}",
                n * (n + 1)
            ),
        )
    });
    report.absorb(out);
    Ok(())
}

/// Structure of the mixed attractor on sequential `K_n`.
#[derive(Clone, Debug, Serialize)]
pub struct CycleExample {
    pub attractive: bool,
    /// Lengths of the lifted cycles making up the set, or empty if it is not
    /// a union of cycles.
    pub cycle_lengths: Vec<usize>,
    /// Length of the lifted cycle through the state with `⌊m*⌋` leading
    /// cooperators at phase 0.
    pub cycle_through_start: usize,
}

pub fn cycle_example(p: &PayoffParams, n: usize) -> Result<CycleExample> {
    let set = coexistence_set(p, n)?
        .ok_or_else(|| Error::domain(format!("({p}) has no mixed attractor on K_{n}")))?;
    let sys = system(&Graph::complete(n)?, p, UtilityKind::Aggregate, UpdateOrder::Sequential)?;
    let attractive = is_attractor(&sys, &set)?.is_attractor;
    let land = Landscape::analyze(&sys)?;
    let cycles = land.structure().cycles();
    let mut lengths: Vec<usize> = land
        .decompose(&set)
        .map(|ids| ids.iter().map(|&c| cycles[c].len()).collect())
        .unwrap_or_default();
    lengths.sort_unstable();
    let lo = interior_threshold(p, n).expect("defined").floor().to_integer() as u32;
    let start = (1u64 << lo) - 1;
    let through = land.structure().cycle_of(0, start);
    let cycle_through_start = if cycles[through].contains(0, start) {
        cycles[through].len()
    } else {
        0
    };
    Ok(CycleExample {
        attractive,
        cycle_lengths: lengths,
        cycle_through_start,
    })
}

fn wheels(claim: Claim, spec: &SweepSpec, report: &mut VerificationReport) -> Result<()> {
    let cooperate = claim == Claim::WheelCooperation;
    let mut scenarios = std::collections::BTreeSet::new();
    let mut printed_mismatches = 0usize;
    for &kind in &spec.kinds {
        let cases: Vec<(usize, PayoffParams)> = spec
            .sizes
            .iter()
            .flat_map(|&l| spec.points.iter().map(move |p| (l, *p)))
            .collect();
        let results = parallel::map_slice(spec.execution, &cases, |(l, p)| -> Result<_> {
            let sys = system(&Graph::wheel(*l)?, p, kind, UpdateOrder::Synchronous)?;
            let predicted = if cooperate {
                pr::full_cooperation_wheel(p, *l, kind)?
            } else {
                pr::full_defection_wheel(p, *l, kind)?
            };
            let (actual, witness) = homogeneous_attracts(&sys, cooperate)?;
            let printed = if cooperate {
                predicted
            } else {
                pr::full_defection_wheel_with_a(p, *l, kind)?
            };
            let mut out = CheckOutcome::default();
            let target = if cooperate { "all-C" } else { "all-D" };
            out.iff(predicted, actual, || {
                finding(
                    p,
                    *l,
                    kind,
                    witness,
                    format!("{target} attractive on W_{l}: predicted = {predicted}, brute force = {actual}"),
                )
            });
            Ok((out, actual.then(|| p.scenario()).flatten(), printed != actual))
        });
        for r in results {
            let (out, scenario, mismatch) = r?;
            report.absorb(out);
            scenarios.extend(scenario);
            printed_mismatches += mismatch as usize;
        }
    }
    let observed: Vec<&str> = scenarios.iter().map(|s: &Scenario| s.code()).collect();
    let target = if cooperate { "all-C" } else { "all-D" };
    report
        .notes
        .push(format!("scenarios with {target} attractive on some wheel: {observed:?}"));
    if !cooperate {
        report.notes.push(format!(
            "the variant with a in place of b disagrees with brute force in {printed_mismatches} cases"
        ));
    }
    Ok(())
}

/// Which update order a sweep uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SweepOrder {
    Synchronous,
    Sequential,
}

impl FromStr for SweepOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sync" | "synchronous" => Ok(SweepOrder::Synchronous),
            "seq" | "sequential" => Ok(SweepOrder::Sequential),
            other => Err(Error::parse(0, format!("unknown sweep order {other:?}"))),
        }
    }
}

/// Outcome codes of a sweep cell.
pub mod code {
    pub const NOT_ADMISSIBLE: i32 = -1;
    pub const NONE: i32 = 0;
    pub const DEFECTION_ONLY: i32 = 1;
    pub const COOPERATION_ONLY: i32 = 2;
    pub const BOTH: i32 = 3;
    pub const COEXISTENCE_SET: i32 = 4;
    pub const ATTRACTIVE_CYCLE: i32 = 5;

    pub const LEGEND: [(i32, &str); 7] = [
        (NOT_ADMISSIBLE, "parameters not admissible"),
        (NONE, "no nontrivial attractor"),
        (DEFECTION_ONLY, "only all-D attractive"),
        (COOPERATION_ONLY, "only all-C attractive"),
        (BOTH, "all-D and all-C attractive"),
        (COEXISTENCE_SET, "attractive set of mixed fixed states (integer m*)"),
        (ATTRACTIVE_CYCLE, "attractive mixed cycles (non-integer m*)"),
    ];
}

fn homogeneous_code(defection: bool, cooperation: bool) -> i32 {
    match (defection, cooperation) {
        (true, true) => code::BOTH,
        (true, false) => code::DEFECTION_ONLY,
        (false, true) => code::COOPERATION_ONLY,
        (false, false) => code::NONE,
    }
}

/// Outcome code from the closed-form conditions.
pub fn predicted_code(p: &PayoffParams, n: usize, order: SweepOrder) -> Result<i32> {
    if !p.is_admissible() {
        return Ok(code::NOT_ADMISSIBLE);
    }
    let c = homogeneous_code(pr::full_defection_kn(p, n)?, pr::full_cooperation_kn(p, n)?);
    if c != code::NONE || order == SweepOrder::Synchronous || !pr::coexistence_kn(p, n)? {
        return Ok(c);
    }
    let m = interior_threshold(p, n).expect("coexistence needs m*");
    Ok(if m.is_integer() {
        code::COEXISTENCE_SET
    } else {
        code::ATTRACTIVE_CYCLE
    })
}

/// Outcome code from the enumerated state space.
pub fn brute_force_code(p: &PayoffParams, n: usize, order: SweepOrder) -> Result<i32> {
    if !p.is_admissible() {
        return Ok(code::NOT_ADMISSIBLE);
    }
    let update = match order {
        SweepOrder::Synchronous => UpdateOrder::Synchronous,
        SweepOrder::Sequential => UpdateOrder::Sequential,
    };
    let sys = system(&Graph::complete(n)?, p, UtilityKind::Aggregate, update)?;
    let c = homogeneous_code(homogeneous_attracts(&sys, false)?.0, homogeneous_attracts(&sys, true)?.0);
    if c != code::NONE {
        return Ok(c);
    }
    let land = Landscape::analyze(&sys)?;
    let all = land.cycle_count();
    let mixed = land.minimal_attractors().iter().find(|m| m.len() < all);
    Ok(match mixed {
        None => code::NONE,
        Some(ids) => {
            let set = land.set_of(ids);
            if set.configurations().iter().all(|&x| sys.is_fixed(x)) {
                code::COEXISTENCE_SET
            } else {
                code::ATTRACTIVE_CYCLE
            }
        }
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepCell {
    pub b: Rational,
    pub c: Rational,
    pub code: i32,
    /// Brute-force code, when requested.
    pub exact: Option<i32>,
}

#[derive(Clone, Debug)]
pub struct SweepRequest {
    pub n: usize,
    pub order: SweepOrder,
    pub b_range: (Rational, Rational),
    pub c_range: (Rational, Rational),
    pub resolution: (usize, usize),
    pub exact: bool,
    pub execution: Execution,
}

impl SweepRequest {
    pub fn new(n: usize, order: SweepOrder, resolution: (usize, usize)) -> Self {
        SweepRequest {
            n,
            order,
            b_range: (int(-1), int(1)),
            c_range: (int(0), int(2)),
            resolution,
            exact: false,
            execution: Execution::default(),
        }
    }
}

/// Outcome codes over a `(b, c)` grid at `a = 1`, `d = 0`, row-major with `b`
/// outermost.
pub fn sweep(req: &SweepRequest) -> Result<Vec<SweepCell>> {
    let (g, h) = req.resolution;
    if g == 0 || h == 0 {
        return Err(Error::domain("sweep resolution must be positive"));
    }
    if req.b_range.0 >= req.b_range.1 || req.c_range.0 >= req.c_range.1 {
        return Err(Error::domain("sweep ranges must be increasing"));
    }
    if req.n < 3 {
        return Err(Error::domain("sweeps need n >= 3"));
    }
    if req.exact && req.n > DEFAULT_MAX_N {
        return Err(Error::capacity(format!("exact sweep for n = {} exceeds the cap", req.n)));
    }
    let cells = grid_cells(req.b_range, req.c_range, g, h);
    parallel::map_slice(req.execution, &cells, |p| -> Result<SweepCell> {
        let code = predicted_code(p, req.n, req.order)?;
        let exact = if req.exact {
            Some(brute_force_code(p, req.n, req.order)?)
        } else {
            None
        };
        Ok(SweepCell {
            b: p.b,
            c: p.c,
            code,
            exact,
        })
    })
    .into_iter()
    .collect()
}

/// `m*` as text, or `undefined`.
pub fn describe_threshold(p: &PayoffParams, n: usize) -> String {
    match interior_threshold(p, n) {
        Some(m) => crate::rational::format_rational(&m),
        None => "undefined".into(),
    }
}

impl Default for SweepSpec {
    fn default() -> Self {
        SweepSpec::new(Vec::new(), Vec::new())
    }
}
