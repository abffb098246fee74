//! Problem instances: the eight conjugacy, twisted conjugacy and orbit
//! questions, with single-element kinds stored as singleton targets.

use std::fmt;
use std::str::FromStr;

use crate::error::{input, Error, Result};
use crate::group::{Element, Group};
use crate::morphism::Morphism;
use crate::target::{Subgroup, Target};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum ProblemKind {
    /// `x^-1 g x = h`
    Cp,
    /// `(x^-1.phi) g x = h`
    Tcp,
    /// `g.phi^k = h`
    Brp,
    /// `x^-1 (g.phi^k) x = h`
    Brcp,
    Gcp,
    Gtcp,
    Gbrp,
    Gbrcp,
}

impl ProblemKind {
    pub const ALL: [ProblemKind; 8] = [
        ProblemKind::Cp,
        ProblemKind::Tcp,
        ProblemKind::Brp,
        ProblemKind::Brcp,
        ProblemKind::Gcp,
        ProblemKind::Gtcp,
        ProblemKind::Gbrp,
        ProblemKind::Gbrcp,
    ];

    pub fn needs_morphism(self) -> bool {
        !matches!(self, ProblemKind::Cp | ProblemKind::Gcp)
    }

    pub fn is_generalized(self) -> bool {
        matches!(self, ProblemKind::Gcp | ProblemKind::Gtcp | ProblemKind::Gbrp | ProblemKind::Gbrcp)
    }

    /// The generalized kind asking the same question.
    pub fn generalized(self) -> ProblemKind {
        match self {
            ProblemKind::Cp => ProblemKind::Gcp,
            ProblemKind::Tcp => ProblemKind::Gtcp,
            ProblemKind::Brp => ProblemKind::Gbrp,
            ProblemKind::Brcp => ProblemKind::Gbrcp,
            k => k,
        }
    }

    pub fn has_conjugator(self) -> bool {
        !matches!(self, ProblemKind::Brp | ProblemKind::Gbrp)
    }

    pub fn has_exponent(self) -> bool {
        matches!(self, ProblemKind::Brp | ProblemKind::Brcp | ProblemKind::Gbrp | ProblemKind::Gbrcp)
    }

    pub fn name(self) -> &'static str {
        match self {
            ProblemKind::Cp => "cp",
            ProblemKind::Tcp => "tcp",
            ProblemKind::Brp => "brp",
            ProblemKind::Brcp => "brcp",
            ProblemKind::Gcp => "gcp",
            ProblemKind::Gtcp => "gtcp",
            ProblemKind::Gbrp => "gbrp",
            ProblemKind::Gbrcp => "gbrcp",
        }
    }
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProblemKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ProblemKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::Input(format!("unknown problem kind `{s}`")))
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ProblemInstance {
    pub kind: ProblemKind,
    pub group: Group,
    pub morphism: Option<Morphism>,
    pub subject: Element,
    pub target: Target,
}

impl ProblemInstance {
    pub fn new(
        kind: ProblemKind,
        group: Group,
        morphism: Option<Morphism>,
        subject: Element,
        target: Target,
    ) -> Result<Self> {
        match (&morphism, kind.needs_morphism()) {
            (None, true) => return input(format!("{kind} needs a morphism")),
            (Some(_), false) => return input(format!("{kind} takes no morphism")),
            (Some(phi), true) if phi.domain() != &group || phi.codomain() != &group => {
                return input("morphism must be an endomorphism of the ambient group")
            }
            _ => {}
        }
        group.check(&subject)?;
        match &target {
            Target::Finite(elems) => {
                for e in elems {
                    group.check(e)?;
                }
                if !kind.is_generalized() && elems.len() != 1 {
                    return input(format!("{kind} needs exactly one other element"));
                }
            }
            Target::Coset { rep, .. } => {
                group.check(rep)?;
            }
            Target::Subgroup(_) => {}
        }
        if !kind.is_generalized() && !matches!(target, Target::Finite(_)) {
            return input(format!("{kind} compares with a single element"));
        }
        Ok(ProblemInstance {
            kind,
            group,
            morphism,
            subject,
            target,
        })
    }

    pub fn cp(group: &Group, g: Element, h: Element) -> Result<Self> {
        Self::new(ProblemKind::Cp, group.clone(), None, g, Target::Finite(vec![h]))
    }

    pub fn tcp(group: &Group, phi: &Morphism, g: Element, h: Element) -> Result<Self> {
        Self::new(ProblemKind::Tcp, group.clone(), Some(phi.clone()), g, Target::Finite(vec![h]))
    }

    pub fn brp(group: &Group, phi: &Morphism, g: Element, h: Element) -> Result<Self> {
        Self::new(ProblemKind::Brp, group.clone(), Some(phi.clone()), g, Target::Finite(vec![h]))
    }

    pub fn brcp(group: &Group, phi: &Morphism, g: Element, h: Element) -> Result<Self> {
        Self::new(ProblemKind::Brcp, group.clone(), Some(phi.clone()), g, Target::Finite(vec![h]))
    }

    pub fn gcp(group: &Group, g: Element, k: Target) -> Result<Self> {
        Self::new(ProblemKind::Gcp, group.clone(), None, g, k)
    }

    pub fn gtcp(group: &Group, phi: &Morphism, g: Element, k: Target) -> Result<Self> {
        Self::new(ProblemKind::Gtcp, group.clone(), Some(phi.clone()), g, k)
    }

    pub fn gbrp(group: &Group, phi: &Morphism, g: Element, k: Target) -> Result<Self> {
        Self::new(ProblemKind::Gbrp, group.clone(), Some(phi.clone()), g, k)
    }

    pub fn gbrcp(group: &Group, phi: &Morphism, g: Element, k: Target) -> Result<Self> {
        Self::new(ProblemKind::Gbrcp, group.clone(), Some(phi.clone()), g, k)
    }

    /// The same question phrased with a target set.
    pub fn generalized(&self) -> ProblemInstance {
        ProblemInstance {
            kind: self.kind.generalized(),
            ..self.clone()
        }
    }

    /// Splits a finite target into one instance per element.
    pub fn split_finite(&self) -> Option<Vec<ProblemInstance>> {
        match &self.target {
            Target::Finite(elems) => Some(
                elems
                    .iter()
                    .map(|h| ProblemInstance {
                        target: Target::Finite(vec![h.clone()]),
                        ..self.clone()
                    })
                    .collect(),
            ),
            _ => None,
        }
    }

    /// Subgroup target as a coset with identity representative.
    pub fn target_as_coset(&self) -> Option<(Element, &Subgroup)> {
        match &self.target {
            Target::Subgroup(h) => Some((self.group.identity(), h)),
            Target::Coset { rep, subgroup } => Some((rep.clone(), subgroup)),
            Target::Finite(_) => None,
        }
    }

    pub fn morphism(&self) -> Result<&Morphism> {
        self.morphism
            .as_ref()
            .ok_or_else(|| Error::Input(format!("{} has no morphism", self.kind)))
    }

    /// Whether negative exponents are allowed (the morphism is invertible).
    pub fn two_sided(&self) -> bool {
        self.morphism.as_ref().is_some_and(Morphism::is_invertible)
    }
}
