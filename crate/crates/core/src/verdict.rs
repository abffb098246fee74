//! Three-valued verdicts with certificates, budgets, and re-verification of
//! positive certificates by direct evaluation.

use std::fmt;

use crate::error::Result;
use crate::group::Element;
use crate::lattice::IntVector;
use crate::problem::{ProblemInstance, ProblemKind};

/// Resource limits shared by all solvers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Budget {
    /// Largest `|k|` tried by orbit searches.
    pub max_exponent: u64,
    /// Largest ball radius enumerated for conjugators.
    pub max_radius: usize,
    /// Largest finite quotient built by the separability engine.
    pub max_quotient_size: u64,
    /// Overall work limit; orbit steps are charged by element size.
    pub max_steps: u64,
    /// Also try small finite groups by multiplication table when
    /// congruence quotients do not separate.
    pub generic_quotients: bool,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_exponent: 1000,
            max_radius: 6,
            max_quotient_size: 20_000,
            max_steps: 1_000_000,
            generic_quotients: false,
        }
    }
}

/// Finite quotient used in a refutation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum QuotientSpec {
    /// `(Z/m)^n x| Z/d`, or for orbit arguments the residues mod `m` with
    /// orbit period `d`.
    Congruence { modulus: u64, period: u64 },
    /// A finite group from the small-group library.
    Explicit { name: String, order: usize },
}

impl fmt::Display for QuotientSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QuotientSpec::Congruence { modulus, period } => write!(f, "m={modulus},d={period}"),
            QuotientSpec::Explicit { name, order } => write!(f, "{name}(order {order})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub conjugator: Option<Element>,
    pub exponent: Option<i64>,
    /// The element of the target that the equation produces.
    pub member: Element,
    pub detail: Option<String>,
}

impl Witness {
    pub fn conjugator(x: Element, member: Element) -> Self {
        Witness {
            conjugator: Some(x),
            exponent: None,
            member,
            detail: None,
        }
    }

    pub fn exponent(k: i64, member: Element) -> Self {
        Witness {
            conjugator: None,
            exponent: Some(k),
            member,
            detail: None,
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Refutation {
    /// Every candidate of a finite search space failed.
    ExhaustedFinite { candidates: u64 },
    /// The orbit closed up after `preperiod + period` steps without a hit.
    OrbitCycle { preperiod: u64, period: u64 },
    /// The required difference is not in the lattice with this basis.
    LatticeObstruction { basis: Vec<IntVector>, residue: IntVector },
    /// No candidate survives in these finite quotients.
    QuotientObstruction { quotients: Vec<QuotientSpec> },
    /// Every state and rotation of an automaton was tried.
    AutomatonSweep { states: usize, rotations: usize },
    /// The image in a finite quotient never reaches the target class.
    FiniteOrbit { orbit: Vec<usize> },
    /// Every instance of a reduction plan was refuted.
    Combined(Vec<Refutation>),
}

impl Refutation {
    pub fn method(&self) -> &'static str {
        match self {
            Refutation::ExhaustedFinite { .. } => "exhausted-finite",
            Refutation::OrbitCycle { .. } => "orbit-cycle",
            Refutation::LatticeObstruction { .. } => "lattice-obstruction",
            Refutation::QuotientObstruction { .. } => "quotient-obstruction",
            Refutation::AutomatonSweep { .. } => "automaton-sweep",
            Refutation::FiniteOrbit { .. } => "finite-orbit",
            Refutation::Combined(_) => "combined",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BudgetReport {
    pub steps: u64,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Yes(Witness),
    No(Refutation),
    Unknown(BudgetReport),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    pub steps: u64,
    pub quotients: usize,
    pub radius: usize,
}

impl Stats {
    pub fn absorb(&mut self, other: &Stats) {
        self.steps += other.steps;
        self.quotients += other.quotients;
        self.radius = self.radius.max(other.radius);
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub outcome: Outcome,
    pub stats: Stats,
}

impl Verdict {
    pub fn yes(w: Witness) -> Self {
        Verdict {
            outcome: Outcome::Yes(w),
            stats: Stats::default(),
        }
    }

    pub fn no(r: Refutation) -> Self {
        Verdict {
            outcome: Outcome::No(r),
            stats: Stats::default(),
        }
    }

    pub fn unknown(steps: u64, reason: impl Into<String>) -> Self {
        Verdict {
            outcome: Outcome::Unknown(BudgetReport {
                steps,
                reason: reason.into(),
            }),
            stats: Stats {
                steps,
                ..Stats::default()
            },
        }
    }

    pub fn with_steps(mut self, steps: u64) -> Self {
        self.stats.steps = steps;
        self
    }

    pub fn is_yes(&self) -> bool {
        matches!(self.outcome, Outcome::Yes(_))
    }

    pub fn is_no(&self) -> bool {
        matches!(self.outcome, Outcome::No(_))
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self.outcome, Outcome::Unknown(_))
    }

    pub fn witness(&self) -> Option<&Witness> {
        match &self.outcome {
            Outcome::Yes(w) => Some(w),
            _ => None,
        }
    }

    pub fn refutation(&self) -> Option<&Refutation> {
        match &self.outcome {
            Outcome::No(r) => Some(r),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self.outcome {
            Outcome::Yes(_) => "yes",
            Outcome::No(_) => "no",
            Outcome::Unknown(_) => "unknown",
        }
    }

    /// Three-valued answer: `Some(true)`, `Some(false)` or `None`.
    pub fn answer(&self) -> Option<bool> {
        match self.outcome {
            Outcome::Yes(_) => Some(true),
            Outcome::No(_) => Some(false),
            Outcome::Unknown(_) => None,
        }
    }
}

/// Evaluates the defining equation of `inst` at the witness and checks that
/// it produces `witness.member`, which must lie in the target.
pub fn certify(inst: &ProblemInstance, w: &Witness) -> Result<bool> {
    let g = &inst.group;
    let identity = g.identity();
    let x = w.conjugator.as_ref().unwrap_or(&identity);
    let k = w.exponent.unwrap_or(0);
    if w.exponent.is_some() && !inst.kind.has_exponent() {
        return Ok(false);
    }
    if k < 0 && !inst.two_sided() {
        return Ok(false);
    }
    let value = match inst.kind {
        ProblemKind::Cp | ProblemKind::Gcp => g.conj(&inst.subject, x)?,
        ProblemKind::Tcp | ProblemKind::Gtcp => {
            let phi = inst.morphism()?;
            let twisted = phi.apply(&g.inv(x)?)?;
            g.mul(&g.mul(&twisted, &inst.subject)?, x)?
        }
        ProblemKind::Brp | ProblemKind::Gbrp => {
            if w.conjugator.is_some() {
                return Ok(false);
            }
            inst.morphism()?.apply_power(&inst.subject, k)?
        }
        ProblemKind::Brcp | ProblemKind::Gbrcp => {
            let moved = inst.morphism()?.apply_power(&inst.subject, k)?;
            g.conj(&moved, x)?
        }
    };
    Ok(value == w.member && inst.target.member(g, &value)?)
}
