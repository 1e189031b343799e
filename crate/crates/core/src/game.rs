//! Payoff parameters of the symmetric 2×2 game, their admissibility and
//! scenario, and the two vertex utility functions.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::config::Configuration;
use crate::error::{Error, Result};
use crate::graph::{bits, Graph};
use crate::rational::{format_rational, int, parse_rational, Rational};

/// Row-player payoffs: `a` for C vs C, `b` for C vs D, `c` for D vs C,
/// `d` for D vs D.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PayoffParams {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
    pub d: Rational,
}

/// The four orderings an admissible quadruple can take.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Scenario {
    /// `a > c > b > d`
    FullCooperation,
    /// `c > a > b > d`
    HawkDove,
    /// `a > c > d > b`
    StagHunt,
    /// `c > a > d > b`
    PrisonersDilemma,
}

impl Scenario {
    pub const ALL: [Scenario; 4] = [
        Scenario::FullCooperation,
        Scenario::HawkDove,
        Scenario::StagHunt,
        Scenario::PrisonersDilemma,
    ];

    pub fn code(self) -> &'static str {
        match self {
            Scenario::FullCooperation => "FC",
            Scenario::HawkDove => "HD",
            Scenario::StagHunt => "SH",
            Scenario::PrisonersDilemma => "PD",
        }
    }

    /// Whether `p` has this scenario's strict ordering.
    pub fn holds(self, p: &PayoffParams) -> bool {
        let PayoffParams { a, b, c, d } = p;
        match self {
            Scenario::FullCooperation => a > c && c > b && b > d,
            Scenario::HawkDove => c > a && a > b && b > d,
            Scenario::StagHunt => a > c && c > d && d > b,
            Scenario::PrisonersDilemma => c > a && a > d && d > b,
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// The first admissibility condition a quadruple fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NotDistinct(&'static str, &'static str),
    MutualDefectionNotWorse,
    LoneCooperatorNotWorse,
    PartnerDefectionNotWorse(&'static str),
    NonPositiveReward(&'static str),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotDistinct(x, y) => write!(f, "payoffs not distinct: {x} = {y}"),
            Violation::MutualDefectionNotWorse => f.write_str("requires a > d"),
            Violation::LoneCooperatorNotWorse => f.write_str("requires c > b"),
            Violation::PartnerDefectionNotWorse(rel) => write!(f, "requires {rel}"),
            Violation::NonPositiveReward(rel) => write!(f, "requires {rel}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Classification {
    Admissible(Scenario),
    NotAdmissible(Violation),
}

impl PayoffParams {
    pub fn new(a: Rational, b: Rational, c: Rational, d: Rational) -> Self {
        PayoffParams { a, b, c, d }
    }

    /// Convenience for tests and examples: `from_ratios([(1,1), (22,25), ...])`.
    pub fn from_ratios(v: [(i128, i128); 4]) -> Self {
        let r = |(n, d): (i128, i128)| Rational::new(n, d);
        PayoffParams::new(r(v[0]), r(v[1]), r(v[2]), r(v[3]))
    }

    pub fn as_array(&self) -> [Rational; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn admissibility(&self) -> std::result::Result<(), Violation> {
        let vals = [("a", self.a), ("b", self.b), ("c", self.c), ("d", self.d)];
        for i in 0..4 {
            for j in i + 1..4 {
                if vals[i].1 == vals[j].1 {
                    return Err(Violation::NotDistinct(vals[i].0, vals[j].0));
                }
            }
        }
        if self.a <= self.d {
            return Err(Violation::MutualDefectionNotWorse);
        }
        if self.c <= self.b {
            return Err(Violation::LoneCooperatorNotWorse);
        }
        if self.a <= self.b {
            return Err(Violation::PartnerDefectionNotWorse("a > b"));
        }
        if self.c <= self.d {
            return Err(Violation::PartnerDefectionNotWorse("c > d"));
        }
        if !self.a.is_positive() {
            return Err(Violation::NonPositiveReward("a > 0"));
        }
        if !self.c.is_positive() {
            return Err(Violation::NonPositiveReward("c > 0"));
        }
        Ok(())
    }

    pub fn is_admissible(&self) -> bool {
        self.admissibility().is_ok()
    }

    pub fn classify(&self) -> Classification {
        match self.admissibility() {
            Err(v) => Classification::NotAdmissible(v),
            Ok(()) => {
                let s = Scenario::ALL
                    .into_iter()
                    .find(|s| s.holds(self))
                    .expect("admissible payoffs fall in exactly one scenario");
                Classification::Admissible(s)
            }
        }
    }

    pub fn scenario(&self) -> Option<Scenario> {
        match self.classify() {
            Classification::Admissible(s) => Some(s),
            Classification::NotAdmissible(_) => None,
        }
    }

    /// Affine rescaling `x -> (x - d) / (a - d)`, giving `a = 1`, `d = 0`.
    pub fn normalize(&self) -> Result<PayoffParams> {
        let span = self.a - self.d;
        if span.is_zero() {
            return Err(Error::domain("cannot normalise payoffs with a = d"));
        }
        let f = |x: Rational| (x - self.d) / span;
        Ok(PayoffParams::new(f(self.a), f(self.b), f(self.c), f(self.d)))
    }

    /// Inverse of [`normalize`](Self::normalize) for target `a > d`.
    pub fn denormalize(&self, a: Rational, d: Rational) -> Result<PayoffParams> {
        if a <= d {
            return Err(Error::domain("denormalisation needs a > d"));
        }
        let f = |x: Rational| d + (a - d) * x;
        Ok(PayoffParams::new(f(self.a), f(self.b), f(self.c), f(self.d)))
    }

    pub fn is_normalized(&self) -> bool {
        self.a.is_one() && self.d.is_zero()
    }

    /// Payoff to a player in `own` state against a partner in `other` state.
    pub fn payoff(&self, own: bool, other: bool) -> Rational {
        match (own, other) {
            (true, true) => self.a,
            (true, false) => self.b,
            (false, true) => self.c,
            (false, false) => self.d,
        }
    }
}

impl FromStr for PayoffParams {
    type Err = Error;

    /// `"a,b,c,d"` with decimal or fractional entries.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').collect();
        if parts.len() != 4 {
            return Err(Error::parse(
                0,
                format!("expected four comma-separated payoffs, found {}", parts.len()),
            ));
        }
        let mut vals = [Rational::zero(); 4];
        let mut offset = 0;
        for (k, part) in parts.iter().enumerate() {
            vals[k] = parse_rational(part).map_err(|e| match e {
                Error::Parse { offset: o, message } => Error::Parse {
                    offset: offset + o,
                    message,
                },
                other => other,
            })?;
            offset += part.len() + 1;
        }
        Ok(PayoffParams::new(vals[0], vals[1], vals[2], vals[3]))
    }
}

impl fmt::Display for PayoffParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{},{},{},{}",
            format_rational(&self.a),
            format_rational(&self.b),
            format_rational(&self.c),
            format_rational(&self.d)
        )
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum UtilityKind {
    /// Sum of payoffs over all neighbours.
    #[default]
    Aggregate,
    /// Aggregate divided by degree.
    Mean,
}

impl FromStr for UtilityKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "aggregate" => Ok(UtilityKind::Aggregate),
            "mean" => Ok(UtilityKind::Mean),
            other => Err(Error::parse(0, format!("unknown utility kind {other:?}"))),
        }
    }
}

impl fmt::Display for UtilityKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            UtilityKind::Aggregate => "aggregate",
            UtilityKind::Mean => "mean",
        })
    }
}

/// Exact utility of every vertex (index `i - 1` for vertex `i`).
pub fn utility(
    g: &Graph,
    p: &PayoffParams,
    kind: UtilityKind,
    x: &Configuration,
) -> Result<Vec<Rational>> {
    if x.len() != g.order() {
        return Err(Error::domain(format!(
            "configuration has length {}, graph has {} vertices",
            x.len(),
            g.order()
        )));
    }
    (0..g.order())
        .map(|v| {
            let nbrs = g.nbr_mask(v);
            if nbrs == 0 {
                return Err(Error::domain(format!("vertex {} is isolated", v + 1)));
            }
            let own = x.bits() >> v & 1 == 1;
            let total: Rational = bits(nbrs)
                .map(|w| p.payoff(own, x.bits() >> w & 1 == 1))
                .sum();
            Ok(match kind {
                UtilityKind::Aggregate => total,
                UtilityKind::Mean => total / int(nbrs.count_ones() as i128),
            })
        })
        .collect()
}

/// The cooperator count on `K_n` at which cooperators and defectors earn the
/// same aggregate utility, `(n(b-d) - (a-d)) / ((c-a) + (b-d))`.
pub fn interior_threshold(p: &PayoffParams, n: usize) -> Option<Rational> {
    let den = (p.c - p.a) + (p.b - p.d);
    if den.is_zero() {
        return None;
    }
    Some((int(n as i128) * (p.b - p.d) - (p.a - p.d)) / den)
}

/// Aggregate utility of a cooperator minus that of a defector on `K_n` when
/// `m` vertices cooperate, `1 <= m <= n - 1`.
pub fn cooperator_advantage(p: &PayoffParams, n: usize, m: usize) -> Rational {
    let (n, m) = (int(n as i128), int(m as i128));
    let one = Rational::one();
    (m - one) * p.a + (n - m) * p.b - m * p.c - (n - m - one) * p.d
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::frac;
    use proptest::prelude::*;

    fn paper() -> PayoffParams {
        "1,0.88,1.74,0".parse().unwrap()
    }

    #[test]
    fn scenario_examples() {
        assert_eq!(paper().classify(), Classification::Admissible(Scenario::HawkDove));
        let fc: PayoffParams = "1,0.5,0.8,0".parse().unwrap();
        assert_eq!(fc.scenario(), Some(Scenario::FullCooperation));
        let pd: PayoffParams = "1,-0.5,1.5,0".parse().unwrap();
        assert_eq!(pd.scenario(), Some(Scenario::PrisonersDilemma));
        let sh: PayoffParams = "1,-0.5,0.5,0".parse().unwrap();
        assert_eq!(sh.scenario(), Some(Scenario::StagHunt));
    }

    #[test]
    fn inadmissible_reasons() {
        let tie: PayoffParams = "1,0.5,0.5,0".parse().unwrap();
        assert_eq!(
            tie.classify(),
            Classification::NotAdmissible(Violation::NotDistinct("b", "c"))
        );
        let p: PayoffParams = "0,0.5,1,1/3".parse().unwrap();
        assert_eq!(p.admissibility(), Err(Violation::MutualDefectionNotWorse));
        let p: PayoffParams = "-1,-3,-0.5,-2".parse().unwrap();
        assert_eq!(p.admissibility(), Err(Violation::NonPositiveReward("a > 0")));
    }

    #[test]
    fn normalization() {
        let p: PayoffParams = "3,1,2,-1".parse().unwrap();
        let q = p.normalize().unwrap();
        assert_eq!(q, PayoffParams::from_ratios([(1, 1), (1, 2), (3, 4), (0, 1)]));
        assert_eq!(q.scenario(), Some(Scenario::FullCooperation));
        assert_eq!(paper().normalize().unwrap(), paper());
        assert_eq!(q.denormalize(int(3), int(-1)).unwrap(), p);
        let flat: PayoffParams = "1,2,3,1".parse().unwrap();
        assert!(flat.normalize().is_err());
    }

    #[test]
    fn utilities_on_triangle() {
        let k3 = Graph::complete(3).unwrap();
        let x = Configuration::parse_bits("100").unwrap();
        let u = utility(&k3, &paper(), UtilityKind::Aggregate, &x).unwrap();
        assert_eq!(u, vec![frac(176, 100), frac(174, 100), frac(174, 100)]);
        let m = utility(&k3, &paper(), UtilityKind::Mean, &x).unwrap();
        assert_eq!(m, vec![frac(88, 100), frac(87, 100), frac(87, 100)]);
    }

    #[test]
    fn all_cooperators_earn_a_times_degree() {
        let w = Graph::wheel(7).unwrap();
        let x = Configuration::all_cooperate(7);
        let u = utility(&w, &paper(), UtilityKind::Aggregate, &x).unwrap();
        for (v, deg) in w.degrees().into_iter().enumerate() {
            assert_eq!(u[v], int(deg as i128));
        }
    }

    #[test]
    fn defector_among_three_cooperators_on_cubic_graph() {
        // K_4 is 3-regular
        let g = Graph::complete(4).unwrap();
        let x = Configuration::single_defector(4, 2).unwrap();
        let u = utility(&g, &paper(), UtilityKind::Aggregate, &x).unwrap();
        assert_eq!(u[1], frac(522, 100));
    }

    #[test]
    fn isolated_vertices_rejected() {
        let g = Graph::from_edges(3, &[(1, 2)]).unwrap();
        let x = Configuration::all_defect(3);
        for kind in [UtilityKind::Aggregate, UtilityKind::Mean] {
            assert!(matches!(utility(&g, &paper(), kind, &x), Err(Error::Domain(_))));
        }
    }

    #[test]
    fn threshold_values() {
        let p: PayoffParams = "1,0.8,1.5,0".parse().unwrap();
        assert_eq!(interior_threshold(&p, 5), Some(frac(30, 13)));
        // n = 1 + (c-d)/(b-d) gives m* = 1
        let q: PayoffParams = "1,0.3,0.6,0".parse().unwrap();
        assert_eq!(interior_threshold(&q, 3), Some(int(1)));
        let degenerate: PayoffParams = "1,0.5,1,0.5".parse().unwrap();
        assert_eq!(interior_threshold(&degenerate, 4), None);
    }

    fn arb_rational() -> impl Strategy<Value = Rational> {
        (-40i128..=40, 1i128..=12).prop_map(|(n, d)| frac(n, d))
    }

    fn arb_params() -> impl Strategy<Value = PayoffParams> {
        (arb_rational(), arb_rational(), arb_rational(), arb_rational())
            .prop_map(|(a, b, c, d)| PayoffParams::new(a, b, c, d))
    }

    /// Admissible quadruples: a normalised `(1, b, c, 0)` mapped to `a > d`.
    fn arb_admissible() -> impl Strategy<Value = PayoffParams> {
        (arb_rational(), 1i128..=30, 1i128..=6, -23i128..=23, 1i128..=47)
            .prop_map(|(d, span, den, b, c)| {
                let norm = PayoffParams::new(int(1), frac(b, 24), frac(c, 24), int(0));
                norm.denormalize(d + frac(span, den), d).unwrap()
            })
            .prop_filter("admissible", PayoffParams::is_admissible)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]
        #[test]
        fn admissible_points_have_one_scenario(p in arb_params()) {
            let count = Scenario::ALL.iter().filter(|s| s.holds(&p)).count();
            if p.is_admissible() {
                prop_assert_eq!(count, 1);
            }
        }
    }

    proptest! {
        #[test]
        fn normalization_keeps_scenario(p in arb_admissible()) {
            let q = p.normalize().unwrap();
            prop_assert!(q.is_normalized());
            prop_assert_eq!(q.classify(), p.classify());
            prop_assert_eq!(q.denormalize(p.a, p.d).unwrap(), p);
        }

        #[test]
        fn advantage_is_affine_in_m(p in arb_params(), n in 3usize..20, m in 1usize..19) {
            prop_assume!(m < n);
            let v1 = cooperator_advantage(&p, n, 1);
            let v2 = cooperator_advantage(&p, n, 2);
            let slope = v2 - v1;
            let extrapolated = v1 + slope * int(m as i128 - 1);
            prop_assert_eq!(cooperator_advantage(&p, n, m), extrapolated);
            // slope is -((c-a)+(b-d)) and the zero sits at the interior threshold
            if let Some(ms) = interior_threshold(&p, n) {
                prop_assert_eq!(v1 + slope * (ms - int(1)), Rational::zero());
            }
        }

        #[test]
        fn threshold_share_tends_to_mixed_equilibrium(p in arb_admissible()) {
            let den = (p.a - p.c) + (p.d - p.b);
            prop_assume!(!den.is_zero());
            let limit = (p.d - p.b) / den;
            let at = |n: usize| interior_threshold(&p, n).unwrap() / int(n as i128);
            // |m*/n - limit| = |(a-d)/den| / n shrinks like 1/n
            let e1 = (at(1_000) - limit).abs();
            let e2 = (at(1_000_000) - limit).abs();
            prop_assert!(e2 * int(999) <= e1 || e1.is_zero());
        }
    }

    #[test]
    fn parse_errors_report_offsets() {
        let err = "1,0.88,x,0".parse::<PayoffParams>().unwrap_err();
        assert!(matches!(err, Error::Parse { offset: 7, .. }));
        assert!("1,2,3".parse::<PayoffParams>().is_err());
    }
}
