//! Decision procedures by family, and the dispatcher routing an instance to
//! them. Every positive verdict leaving [`solve`] has been re-verified with
//! [`certify`].

pub mod abelian;
pub mod finite;
pub mod free;
pub mod orbit;
pub mod virtually_free;

use crate::error::{unsupported, Error, Result};
use crate::group::{Element, Family, Group};
use crate::lattice::Lattice;
use crate::problem::{ProblemInstance, ProblemKind};
use crate::reduction::{inner_tcp_to_gcp, lower_gcp, ReductionPlan};
use crate::separability;
use crate::target::{Subgroup, Target};
use crate::verdict::{certify, Budget, BudgetReport, Outcome, Refutation, Stats, Verdict, Witness};

/// Decides `inst` within `budget`.
pub fn solve(inst: &ProblemInstance, budget: &Budget) -> Result<Verdict> {
    let v = dispatch(inst, budget)?;
    if let Some(w) = v.witness() {
        if !certify(inst, w)? {
            return Err(Error::Capability(format!("{} witness failed re-verification", inst.kind)));
        }
    }
    Ok(v)
}

/// OR of lazily produced verdicts: the first `Yes` wins, all `No` give a
/// combined refutation, anything else is `Unknown`.
pub fn any_of<I>(verdicts: I) -> Result<Verdict>
where
    I: IntoIterator<Item = Result<Verdict>>,
{
    let mut stats = Stats::default();
    let mut refutations = Vec::new();
    let mut unknown: Option<String> = None;
    for v in verdicts {
        let v = v?;
        stats.absorb(&v.stats);
        match v.outcome {
            Outcome::Yes(w) => {
                return Ok(Verdict {
                    outcome: Outcome::Yes(w),
                    stats,
                })
            }
            Outcome::No(r) => refutations.push(r),
            Outcome::Unknown(b) => {
                unknown.get_or_insert(b.reason);
            }
        }
    }
    let outcome = match unknown {
        Some(reason) => Outcome::Unknown(BudgetReport {
            steps: stats.steps,
            reason,
        }),
        None if refutations.len() == 1 => Outcome::No(refutations.pop().unwrap()),
        None => Outcome::No(Refutation::Combined(refutations)),
    };
    Ok(Verdict { outcome, stats })
}

fn dispatch(inst: &ProblemInstance, budget: &Budget) -> Result<Verdict> {
    if inst.target.is_empty_set() {
        return Ok(Verdict::no(Refutation::ExhaustedFinite { candidates: 0 }));
    }
    match inst.group.family() {
        Family::Finite => finite::exhaustive(inst),
        Family::Free => solve_free(inst, budget),
        Family::Abelian => solve_abelian(inst, budget),
        Family::Semidirect => solve_semidirect(inst, budget),
        Family::VirtuallyFree => solve_virtually_free(inst, budget),
    }
}

fn member_search(inst: &ProblemInstance, budget: &Budget) -> Result<Verdict> {
    let g = &inst.group;
    orbit::orbit_search(inst.morphism()?, &inst.subject, inst.two_sided(), budget, |k, y| {
        Ok(inst.target.member(g, y)?.then(|| Witness::exponent(k, y.clone())))
    })
}

fn solve_free(inst: &ProblemInstance, budget: &Budget) -> Result<Verdict> {
    let g = &inst.group;
    let u = &inst.subject;
    match inst.kind.generalized() {
        ProblemKind::Gcp => match &inst.target {
            Target::Finite(elems) => any_of(elems.iter().map(|h| free::cp_free(u, h))),
            k => match free::as_subgroup(g, k)? {
                Some(h) => free::conj_into_subgroup_free(u, &h),
                None => unsupported("conjugacy into a proper coset of a free group"),
            },
        },
        ProblemKind::Gtcp => {
            let phi = inst.morphism()?;
            let Some(iw) = phi.witness().filter(|w| w.power == 1) else {
                return unsupported("twisted conjugacy in a free group needs an inner automorphism");
            };
            let w = &iw.conjugator;
            let sub = inner_tcp_to_gcp(g, &inst.target, w, u)?;
            let mut v = dispatch(&sub, budget)?;
            if let Outcome::Yes(wit) = &mut v.outcome {
                wit.member = g.mul(&g.inv(w)?, &wit.member)?;
            }
            Ok(v)
        }
        kind => {
            let phi = inst.morphism()?;
            let conj = kind == ProblemKind::Gbrcp;
            if let Some(iw) = phi.witness() {
                if conj || phi.is_invertible() {
                    if let Some(h) = free::as_subgroup(g, &inst.target)? {
                        return free::gbrcp_via_free(g, phi, u, &h, conj);
                    }
                }
                if let (true, Target::Finite(elems)) = (conj, &inst.target) {
                    let r = iw.power as i64;
                    let mut items = Vec::new();
                    for q in 0..r {
                        let uq = phi.apply_power(u, q)?;
                        for h in elems {
                            items.push((q, uq.clone(), h));
                        }
                    }
                    return any_of(items.into_iter().map(|(q, uq, h)| {
                        let mut v = free::cp_free(&uq, h)?;
                        if let Outcome::Yes(w) = &mut v.outcome {
                            w.exponent = Some(q);
                        }
                        Ok(v)
                    }));
                }
            }
            if conj {
                free::gbrcp_orbit(g, phi, u, &inst.target, inst.two_sided(), budget)
            } else {
                member_search(inst, budget)
            }
        }
    }
}

/// The target as cosets `v + L` of lattices.
fn lattice_cosets(g: &Group, target: &Target) -> Result<Vec<(Element, Lattice)>> {
    let n = g.rank().unwrap_or(0);
    let lattice = |h: &Subgroup| match h {
        Subgroup::Lattice(l) => Ok(l.clone()),
        _ => Err(Error::Input("expected a lattice subgroup".into())),
    };
    Ok(match target {
        Target::Finite(elems) => elems.iter().map(|e| (e.clone(), Lattice::zero(n))).collect(),
        Target::Subgroup(h) => vec![(g.identity(), lattice(h)?)],
        Target::Coset { rep, subgroup } => vec![(rep.clone(), lattice(subgroup)?)],
    })
}

fn solve_abelian(inst: &ProblemInstance, budget: &Budget) -> Result<Verdict> {
    let g = &inst.group;
    let u = &inst.subject;
    let cosets = lattice_cosets(g, &inst.target)?;
    match inst.kind.generalized() {
        ProblemKind::Gcp => Ok(if inst.target.member(g, u)? {
            Verdict::yes(Witness::conjugator(g.identity(), u.clone()))
        } else {
            Verdict::no(Refutation::ExhaustedFinite { candidates: 1 })
        }),
        ProblemKind::Gtcp => {
            let phi = inst.morphism()?;
            any_of(cosets.iter().map(|(v, l)| abelian::gtcp_coset_abelian(phi, u, v, l)))
        }
        _ => {
            let phi = inst.morphism()?;
            let two_sided = inst.two_sided();
            any_of(cosets.iter().map(|(v, l)| abelian::gbrp_coset_abelian(phi, u, v, l, two_sided, budget)))
        }
    }
}

fn solve_plan(inst: &ProblemInstance, plan: &ReductionPlan, budget: &Budget) -> Result<Verdict> {
    any_of(plan.items.iter().enumerate().map(|(i, item)| {
        let v = solve(&item.instance, budget)?;
        Ok(match &v.outcome {
            Outcome::Yes(w) => Verdict {
                outcome: Outcome::Yes(plan.lift_witness(&inst.group, i, w)?),
                stats: v.stats,
            },
            _ => v,
        })
    }))
}

fn solve_semidirect(inst: &ProblemInstance, budget: &Budget) -> Result<Verdict> {
    match inst.kind.generalized() {
        ProblemKind::Gcp => {
            let lowered = lower_gcp(inst).and_then(|plan| solve_plan(inst, &plan, budget));
            let pending = match lowered {
                Ok(v) if !v.is_unknown() => return Ok(v),
                Err(Error::Capability(_)) | Ok(_) => lowered,
                Err(e) => return Err(e),
            };
            if inst.group.base()?.family() == Family::Abelian {
                let v = separability::decide_gcp_coset(inst, budget)?;
                if !v.is_unknown() || pending.is_err() {
                    return Ok(v);
                }
            }
            pending
        }
        ProblemKind::Gbrp => member_search(inst, budget),
        kind => unsupported(format!("{kind} in a semidirect product")),
    }
}

fn solve_virtually_free(inst: &ProblemInstance, budget: &Budget) -> Result<Verdict> {
    match (inst.kind.generalized(), &inst.target) {
        (ProblemKind::Gbrp, Target::Finite(elems)) => {
            let phi = inst.morphism()?;
            any_of(elems.iter().map(|h| virtually_free::brp_virtually_free(&inst.group, phi, &inst.subject, h, budget)))
        }
        (kind, _) => unsupported(format!("{kind} with this target in a virtually free group")),
    }
}
