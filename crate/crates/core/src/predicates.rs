//! Closed-form attractivity conditions for complete graphs, regular graphs and
//! wheels, evaluated exactly.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::game::{interior_threshold, PayoffParams, Scenario, UtilityKind};
use crate::rational::{int, Rational};

fn admissible(p: &PayoffParams) -> Result<()> {
    p.admissibility()
        .map_err(|v| Error::domain(format!("payoffs ({p}) are not admissible: {v}")))
}

fn at_least(what: &str, value: usize, min: usize) -> Result<Rational> {
    if value < min {
        return Err(Error::domain(format!("{what} must be at least {min}, got {value}")));
    }
    Ok(int(value as i128))
}

/// All-D attracts on `K_n`: `b < d` or `n < 1 + (c - d)/(b - d)`.
pub fn full_defection_kn(p: &PayoffParams, n: usize) -> Result<bool> {
    admissible(p)?;
    let n = at_least("n", n, 3)?;
    Ok(p.b < p.d || n < Rational::one() + (p.c - p.d) / (p.b - p.d))
}

/// All-C attracts on `K_n`: `a > c` and `n > 1 + (a - b)/(a - c)`.
pub fn full_cooperation_kn(p: &PayoffParams, n: usize) -> Result<bool> {
    admissible(p)?;
    let n = at_least("n", n, 3)?;
    Ok(p.a > p.c && n > Rational::one() + (p.a - p.b) / (p.a - p.c))
}

/// Sufficient condition for all-D on a `k`-regular graph: `k(b - d) < c - d`.
pub fn full_defection_kreg_sufficient(p: &PayoffParams, k: usize) -> Result<bool> {
    admissible(p)?;
    let k = at_least("k", k, 2)?;
    Ok(k * (p.b - p.d) < p.c - p.d)
}

/// Sufficient condition for all-C on a `k`-regular graph: `k(a - c) > a - b`.
pub fn full_cooperation_kreg_sufficient(p: &PayoffParams, k: usize) -> Result<bool> {
    admissible(p)?;
    let k = at_least("k", k, 2)?;
    Ok(k * (p.a - p.c) > p.a - p.b)
}

/// Synchronous `K_n` has an attractor other than the maximal invariant set.
pub fn nontrivial_sync_kn(p: &PayoffParams, n: usize) -> Result<bool> {
    Ok(full_defection_kn(p, n)? || full_cooperation_kn(p, n)?)
}

/// Mixed attractor condition on sequential `K_n`: `m* ∈ [2, n - 2]` and
/// `c - a + b - d > 0`.
pub fn coexistence_kn(p: &PayoffParams, n: usize) -> Result<bool> {
    admissible(p)?;
    let size = at_least("n", n, 3)?;
    if (p.c - p.a) + (p.b - p.d) <= Rational::zero() {
        return Ok(false);
    }
    let m = interior_threshold(p, n).expect("denominator is positive");
    Ok(m >= int(2) && m <= size - int(2))
}

/// Sequential `K_n` has an attractor other than the maximal invariant set.
pub fn nontrivial_seq_kn(p: &PayoffParams, n: usize) -> Result<bool> {
    Ok(full_defection_kn(p, n)? || full_cooperation_kn(p, n)? || coexistence_kn(p, n)?)
}

/// All-C attracts on the wheel `W_l`.
pub fn full_cooperation_wheel(p: &PayoffParams, l: usize, kind: UtilityKind) -> Result<bool> {
    admissible(p)?;
    let l = at_least("l", l, 4)?;
    let bound = match kind {
        UtilityKind::Aggregate => (int(2) * p.a + p.b) / (l - Rational::one()),
        UtilityKind::Mean => (int(2) * p.a + p.b) / int(3),
    };
    Ok(p.c < bound)
}

/// All-D attracts on the wheel `W_l`: `b < (2d + c)/(l - 1)` for aggregate
/// utility, `b < (2d + c)/3` for mean utility.
pub fn full_defection_wheel(p: &PayoffParams, l: usize, kind: UtilityKind) -> Result<bool> {
    admissible(p)?;
    let l = at_least("l", l, 4)?;
    Ok(p.b < wheel_defection_bound(p, l, kind))
}

/// The all-D wheel inequality with `a` on the left-hand side instead of `b`,
/// kept for comparison with the corrected form.
pub fn full_defection_wheel_with_a(p: &PayoffParams, l: usize, kind: UtilityKind) -> Result<bool> {
    admissible(p)?;
    let l = at_least("l", l, 4)?;
    Ok(p.a < wheel_defection_bound(p, l, kind))
}

fn wheel_defection_bound(p: &PayoffParams, l: Rational, kind: UtilityKind) -> Rational {
    match kind {
        UtilityKind::Aggregate => (int(2) * p.d + p.c) / (l - Rational::one()),
        UtilityKind::Mean => (int(2) * p.d + p.c) / int(3),
    }
}

/// The three inequalities under which all-D attracts on `K_n` with the
/// pair-then-rest order although the `K_n` condition fails:
/// `(n-1)b > c + (n-2)d`, `a + (n-2)b < 2c + (n-3)d`,
/// `2a + (n-3)b < 3c + (n-4)d`.
pub fn pair_then_rest_conditions(p: &PayoffParams, n: usize) -> Result<[bool; 3]> {
    admissible(p)?;
    let n = at_least("n", n, 4)?;
    let (a, b, c, d) = (p.a, p.b, p.c, p.d);
    let one = Rational::one();
    Ok([
        (n - one) * b > c + (n - int(2)) * d,
        a + (n - int(2)) * b < int(2) * c + (n - int(3)) * d,
        int(2) * a + (n - int(3)) * b < int(3) * c + (n - int(4)) * d,
    ])
}

/// Attractivity pattern of one homogeneous state on `K_n` as tabulated per
/// scenario.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TableCell {
    Always,
    Never,
    /// `n < 1 + (c - d)/(b - d)`.
    BelowDefectionSize,
    /// `n > 1 + (a - b)/(a - c)`.
    AboveCooperationSize,
}

impl TableCell {
    pub fn holds(self, p: &PayoffParams, n: usize) -> bool {
        let n = int(n as i128);
        match self {
            TableCell::Always => true,
            TableCell::Never => false,
            TableCell::BelowDefectionSize => n < Rational::one() + (p.c - p.d) / (p.b - p.d),
            TableCell::AboveCooperationSize => n > Rational::one() + (p.a - p.b) / (p.a - p.c),
        }
    }
}

/// `(all-D cell, all-C cell)` of the `K_n` scenario table.
pub fn table_row(s: Scenario) -> (TableCell, TableCell) {
    match s {
        Scenario::PrisonersDilemma => (TableCell::Always, TableCell::Never),
        Scenario::HawkDove => (TableCell::BelowDefectionSize, TableCell::Never),
        Scenario::StagHunt => (TableCell::Always, TableCell::AboveCooperationSize),
        Scenario::FullCooperation => (TableCell::BelowDefectionSize, TableCell::AboveCooperationSize),
    }
}

/// Named predicates, for command-line and report use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Prediction {
    FullDefectionKn,
    FullCooperationKn,
    FullDefectionKregSufficient,
    FullCooperationKregSufficient,
    NontrivialSyncKn,
    NontrivialSeqKn,
    FullCooperationWheel(UtilityKind),
    FullDefectionWheel(UtilityKind),
}

impl Prediction {
    pub const ALL: [Prediction; 10] = [
        Prediction::FullDefectionKn,
        Prediction::FullCooperationKn,
        Prediction::FullDefectionKregSufficient,
        Prediction::FullCooperationKregSufficient,
        Prediction::NontrivialSyncKn,
        Prediction::NontrivialSeqKn,
        Prediction::FullCooperationWheel(UtilityKind::Aggregate),
        Prediction::FullCooperationWheel(UtilityKind::Mean),
        Prediction::FullDefectionWheel(UtilityKind::Aggregate),
        Prediction::FullDefectionWheel(UtilityKind::Mean),
    ];

    pub fn name(self) -> &'static str {
        match self {
            Prediction::FullDefectionKn => "fullD_Kn",
            Prediction::FullCooperationKn => "fullC_Kn",
            Prediction::FullDefectionKregSufficient => "fullD_kreg_sufficient",
            Prediction::FullCooperationKregSufficient => "fullC_kreg_sufficient",
            Prediction::NontrivialSyncKn => "nontrivial_sync_Kn",
            Prediction::NontrivialSeqKn => "nontrivial_seq_Kn",
            Prediction::FullCooperationWheel(UtilityKind::Aggregate) => "fullC_wheel_aggregate",
            Prediction::FullCooperationWheel(UtilityKind::Mean) => "fullC_wheel_mean",
            Prediction::FullDefectionWheel(UtilityKind::Aggregate) => "fullD_wheel_aggregate",
            Prediction::FullDefectionWheel(UtilityKind::Mean) => "fullD_wheel_mean",
        }
    }

    /// Evaluates the predicate; `size` is `n`, `k` or `l` as appropriate.
    pub fn evaluate(self, p: &PayoffParams, size: usize) -> Result<bool> {
        match self {
            Prediction::FullDefectionKn => full_defection_kn(p, size),
            Prediction::FullCooperationKn => full_cooperation_kn(p, size),
            Prediction::FullDefectionKregSufficient => full_defection_kreg_sufficient(p, size),
            Prediction::FullCooperationKregSufficient => full_cooperation_kreg_sufficient(p, size),
            Prediction::NontrivialSyncKn => nontrivial_sync_kn(p, size),
            Prediction::NontrivialSeqKn => nontrivial_seq_kn(p, size),
            Prediction::FullCooperationWheel(kind) => full_cooperation_wheel(p, size, kind),
            Prediction::FullDefectionWheel(kind) => full_defection_wheel(p, size, kind),
        }
    }
}

impl fmt::Display for Prediction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Prediction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Prediction::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::parse(0, format!("unknown predicate {s:?}")))
    }
}

/// `predict(name, p, size)`.
pub fn predict(name: Prediction, p: &PayoffParams, size: usize) -> Result<bool> {
    name.evaluate(p, size)
}
