//! Exhaustive decisions over finite groups.

use crate::error::{input, Result};
use crate::problem::{ProblemInstance, ProblemKind};
use crate::solvers::orbit::orbit_search;
use crate::verdict::{Budget, Refutation, Verdict, Witness};

pub fn exhaustive(inst: &ProblemInstance) -> Result<Verdict> {
    let g = &inst.group;
    let Some(elems) = g.elements() else {
        return input("exhaustive search needs a finite group");
    };
    let n = elems.len() as u64;
    let orbit_budget = Budget {
        max_exponent: n + 1,
        max_steps: u64::MAX,
        ..Budget::default()
    };
    let mut steps = 0u64;
    match inst.kind.generalized() {
        ProblemKind::Gcp => {
            for x in &elems {
                steps += 1;
                let y = g.conj(&inst.subject, x)?;
                if inst.target.member(g, &y)? {
                    return Ok(Verdict::yes(Witness::conjugator(x.clone(), y)).with_steps(steps));
                }
            }
            Ok(Verdict::no(Refutation::ExhaustedFinite { candidates: n }).with_steps(steps))
        }
        ProblemKind::Gtcp => {
            let phi = inst.morphism()?;
            for x in &elems {
                steps += 1;
                let y = g.mul(&g.mul(&phi.apply(&g.inv(x)?)?, &inst.subject)?, x)?;
                if inst.target.member(g, &y)? {
                    return Ok(Verdict::yes(Witness::conjugator(x.clone(), y)).with_steps(steps));
                }
            }
            Ok(Verdict::no(Refutation::ExhaustedFinite { candidates: n }).with_steps(steps))
        }
        ProblemKind::Gbrp => orbit_search(inst.morphism()?, &inst.subject, inst.two_sided(), &orbit_budget, |k, y| {
            Ok(inst.target.member(g, y)?.then(|| Witness::exponent(k, y.clone())))
        }),
        ProblemKind::Gbrcp => orbit_search(inst.morphism()?, &inst.subject, inst.two_sided(), &orbit_budget, |k, y| {
            for x in &elems {
                let z = g.conj(y, x)?;
                if inst.target.member(g, &z)? {
                    return Ok(Some(Witness {
                        conjugator: Some(x.clone()),
                        exponent: Some(k),
                        member: z,
                        detail: None,
                    }));
                }
            }
            Ok(None)
        }),
        _ => unreachable!("generalized kinds only"),
    }
}
