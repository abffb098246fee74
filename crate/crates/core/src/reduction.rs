//! Reductions between conjugacy problems in `G x|_phi Z` and twisted or
//! orbit problems in `G`, and back.
//!
//! For `a = t^r g` and a conjugator `z = t^j x`,
//! `z^-1 a z = t^r (x^-1.phi^r)(g.phi^j) x`. With `r = 0` this is the orbit
//! conjugacy question for `g`; otherwise `j` only matters modulo `r`, since
//! conjugating `t^r h` by `t^r` is the same as conjugating it by `h^-1`.

use crate::error::{input, Error, Result};
use crate::group::{Element, Group};
use crate::morphism::Morphism;
use crate::problem::{ProblemInstance, ProblemKind};
use crate::target::{SlicedTarget, Subgroup, Target};
use crate::verdict::Witness;

/// How a witness of a lowered instance becomes a conjugator upstairs.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Lift {
    /// Orbit-conjugacy witness `(k, x)` gives `z = t^k x`.
    Exponent,
    /// Twisted witness `x` of the `j`-th instance gives `z = t^j x`.
    Shift(i64),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PlanItem {
    pub instance: ProblemInstance,
    pub lift: Lift,
}

/// Instances joined by OR: the original question has answer yes iff some
/// member does.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ReductionPlan {
    pub items: Vec<PlanItem>,
    /// The `t`-exponent of the lowered subject.
    pub exponent: i64,
    pub note: String,
}

impl ReductionPlan {
    pub fn instances(&self) -> impl Iterator<Item = &ProblemInstance> {
        self.items.iter().map(|i| &i.instance)
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Turns a witness of item `index` into a conjugator for the original
    /// GCP instance over `group`.
    pub fn lift_witness(&self, group: &Group, index: usize, w: &Witness) -> Result<Witness> {
        let item = &self.items[index];
        let base = group.base()?;
        let x = w.conjugator.clone().unwrap_or_else(|| base.identity());
        let j = match item.lift {
            Lift::Exponent => w.exponent.unwrap_or(0),
            Lift::Shift(j) => j,
        };
        Ok(Witness {
            conjugator: Some(Element::semidirect(j, x)),
            exponent: None,
            member: Element::semidirect(self.exponent, w.member.clone()),
            detail: w.detail.clone(),
        })
    }
}

fn normalized(sliced: SlicedTarget, base: &Group) -> Result<Target> {
    match sliced.into_target()? {
        Target::Coset { rep, subgroup } if base.is_identity(&rep) => Ok(Target::Subgroup(subgroup)),
        t => Ok(t),
    }
}

/// Lowers `GCP(K, t^r g)` over `G x|_phi Z` to problems over `G`:
/// `GBrCP(K_0, phi, g)` when `r = 0`, otherwise
/// `GTCP(K_r, phi^r, g.phi^j)` for `j = 0..|r|-1`.
pub fn lower_gcp(inst: &ProblemInstance) -> Result<ReductionPlan> {
    if !matches!(inst.kind, ProblemKind::Cp | ProblemKind::Gcp) {
        return input("only conjugacy instances can be lowered");
    }
    let sd = inst
        .group
        .as_semidirect()
        .ok_or_else(|| Error::Input("lowering needs a semidirect ambient group".into()))?;
    let (r, g) = inst.subject.as_semidirect().unwrap();
    let base = &sd.base;
    let k_r = normalized(inst.target.slice(&inst.group, r)?, base)?;
    if r == 0 {
        let instance = ProblemInstance::gbrcp(base, &sd.phi, g.clone(), k_r)?;
        return Ok(ReductionPlan {
            items: vec![PlanItem {
                instance,
                lift: Lift::Exponent,
            }],
            exponent: 0,
            note: "zero t-exponent: orbit conjugacy in the base".into(),
        });
    }
    let phi_r = sd.phi.power(r)?;
    let mut items = Vec::new();
    for j in 0..r.unsigned_abs() as i64 {
        let gj = sd.phi.apply_power(g, j)?;
        items.push(PlanItem {
            instance: ProblemInstance::gtcp(base, &phi_r, gj, k_r.clone())?,
            lift: Lift::Shift(j),
        });
    }
    Ok(ReductionPlan {
        items,
        exponent: r,
        note: format!("t-exponent {r}: {} twisted instances in the base", r.unsigned_abs()),
    })
}

/// `K` placed at `t`-exponent `e` inside `G x| Z`: `t^e K`.
pub fn embed_target(group: &Group, k: &Target, e: i64) -> Result<Target> {
    let base = group.base()?;
    let lift = |x: &Element| Element::semidirect(0, x.clone());
    let embed_subgroup = |h: &Subgroup| -> Result<Subgroup> {
        let gens: Vec<Element> = h.generators(base).iter().map(lift).collect();
        Subgroup::from_generators(group, &gens)
    };
    Ok(match k {
        Target::Finite(elems) => Target::Finite(elems.iter().map(|x| Element::semidirect(e, x.clone())).collect()),
        Target::Subgroup(h) if e == 0 => Target::Subgroup(embed_subgroup(h)?),
        Target::Subgroup(h) => Target::Coset {
            rep: Element::semidirect(e, base.identity()),
            subgroup: embed_subgroup(h)?,
        },
        Target::Coset { rep, subgroup } => Target::Coset {
            rep: Element::semidirect(e, rep.clone()),
            subgroup: embed_subgroup(subgroup)?,
        },
    })
}

fn suspension(phi: &Morphism) -> Result<Group> {
    if !phi.is_endomorphism() {
        return input("the morphism must be an endomorphism");
    }
    Group::semidirect(phi.domain().clone(), phi.clone())
}

/// `GBrCP(K, phi, g)` in `G` as `GCP(K, t^0 g)` in `G x|_phi Z`.
pub fn lift_brcp(k: &Target, phi: &Morphism, g: &Element) -> Result<ProblemInstance> {
    let group = suspension(phi)?;
    let target = embed_target(&group, k, 0)?;
    ProblemInstance::gcp(&group, Element::semidirect(0, g.clone()), target)
}

/// `GTCP(K, phi, g)` in `G` as `GCP(t K, t g)` in `G x|_phi Z`.
pub fn lift_tcp(k: &Target, phi: &Morphism, g: &Element) -> Result<ProblemInstance> {
    let group = suspension(phi)?;
    let target = embed_target(&group, k, 1)?;
    ProblemInstance::gcp(&group, Element::semidirect(1, g.clone()), target)
}

/// For `phi` conjugation by `w`: `(x^-1.phi) g x = w^-1 x^-1 w g x`, so the
/// twisted question for `(K, g)` is the plain question for `(w K, w g)`.
pub fn inner_tcp_to_gcp(group: &Group, k: &Target, w: &Element, g: &Element) -> Result<ProblemInstance> {
    let target = k.translate_left(group, w)?;
    ProblemInstance::gcp(group, group.mul(w, g)?, target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verdict::certify;

    fn z3_squaring() -> Morphism {
        let z3 = Group::cyclic(3);
        Morphism::endomorphism(&z3, vec![Element::Table(2)])
            .unwrap()
            .with_inverse(vec![Element::Table(2)])
            .unwrap()
    }

    #[test]
    fn lowering_a_single_t() {
        let phi = z3_squaring();
        let g = Group::semidirect(phi.domain().clone(), phi.clone()).unwrap();
        let k = Target::Finite(vec![Element::semidirect(1, Element::Table(1))]);
        let inst = ProblemInstance::gcp(&g, Element::semidirect(1, Element::Table(0)), k).unwrap();
        let plan = lower_gcp(&inst).unwrap();
        assert_eq!(plan.len(), 1);
        let sub = &plan.items[0].instance;
        assert_eq!(sub.kind, ProblemKind::Gtcp);
        assert_eq!(sub.target, Target::Finite(vec![Element::Table(1)]));
        // x = a^2: (a.phi) * 1 * a^2 = a^2 a^2 = a
        let w = Witness::conjugator(Element::Table(2), Element::Table(1));
        assert!(certify(sub, &w).unwrap());
        let up = plan.lift_witness(&g, 0, &w).unwrap();
        assert!(certify(&inst, &up).unwrap());
    }

    #[test]
    fn arity_follows_the_exponent() {
        let phi = z3_squaring();
        let g = Group::semidirect(phi.domain().clone(), phi.clone()).unwrap();
        for r in -2i64..=2 {
            let inst = ProblemInstance::gcp(&g, Element::semidirect(r, Element::Table(1)), Target::Finite(vec![])).unwrap();
            let plan = lower_gcp(&inst).unwrap();
            let expected = if r == 0 { 1 } else { r.unsigned_abs() as usize };
            assert_eq!(plan.len(), expected);
            let kind = if r == 0 { ProblemKind::Gbrcp } else { ProblemKind::Gtcp };
            assert!(plan.instances().all(|i| i.kind == kind));
        }
    }

    #[test]
    fn lift_then_lower_round_trips() {
        let phi = z3_squaring();
        let z3 = phi.domain().clone();
        let targets = [
            Target::Finite(vec![Element::Table(1), Element::Table(2)]),
            Target::subgroup(&z3, &[Element::Table(1)]).unwrap(),
            Target::coset(&z3, Element::Table(2), &[]).unwrap(),
        ];
        for k in targets {
            let up = lift_tcp(&k, &phi, &Element::Table(1)).unwrap();
            let plan = lower_gcp(&up).unwrap();
            assert_eq!(plan.len(), 1);
            assert_eq!(plan.items[0].instance, ProblemInstance::gtcp(&z3, &phi, Element::Table(1), k.clone()).unwrap());
            let up = lift_brcp(&k, &phi, &Element::Table(1)).unwrap();
            let plan = lower_gcp(&up).unwrap();
            assert_eq!(plan.items[0].instance, ProblemInstance::gbrcp(&z3, &phi, Element::Table(1), k).unwrap());
        }
    }

    #[test]
    fn inner_rewrite_with_identity() {
        let f = Group::free_rank(2);
        let k = Target::Finite(vec![Element::word(&[2, 1])]);
        let inst = inner_tcp_to_gcp(&f, &k, &f.identity(), &Element::word(&[1])).unwrap();
        assert_eq!(inst, ProblemInstance::gcp(&f, Element::word(&[1]), k).unwrap());
        let inst = inner_tcp_to_gcp(&f, &Target::Finite(vec![Element::word(&[2, 1])]), &Element::word(&[2]), &Element::word(&[1])).unwrap();
        assert_eq!(inst.subject, Element::word(&[2, 1]));
        assert_eq!(inst.target, Target::Finite(vec![Element::word(&[2, 2, 1])]));
    }
}
