//! Free groups: conjugacy by cyclic rotation, conjugacy into a subgroup by
//! sweeping rotations over the Stallings core, and orbit questions for
//! virtually inner automorphisms.

use std::collections::HashMap;

use crate::error::{unsupported, Error, Result};
use crate::group::{Element, Group};
use crate::morphism::Morphism;
use crate::stallings::StallingsAutomaton;
use crate::target::{Subgroup, Target};
use crate::verdict::{Budget, Refutation, Verdict, Witness};
use crate::word::Word;

fn word(g: &Element) -> Result<&Word> {
    g.as_word().ok_or_else(|| Error::Input("expected a free group element".into()))
}

fn automaton(h: &Subgroup) -> Result<&StallingsAutomaton> {
    match h {
        Subgroup::Free(a) => Ok(a),
        _ => Err(Error::Input("expected a subgroup of a free group".into())),
    }
}

/// `x^-1 u x = v` by comparing rotations of the cyclic reductions.
pub fn cp_free(u: &Element, v: &Element) -> Result<Verdict> {
    let (cu, c) = word(u)?.cyclically_reduce();
    let (cv, d) = word(v)?.cyclically_reduce();
    let n = cu.len();
    if n == cv.len() {
        for i in 0..n.max(1) {
            if cu.rotate(i) == cv {
                // u = c^-1 U c and V = P^-1 U P with P the first i letters
                let x = c.inverse().mul(&cu.prefix(i)).mul(&d);
                return Ok(Verdict::yes(Witness::conjugator(Element::Word(x), v.clone())).with_steps(i as u64 + 1));
            }
        }
    }
    Ok(Verdict::no(Refutation::AutomatonSweep { states: 0, rotations: n }).with_steps(n as u64))
}

/// Some conjugate of `g` lies in `H` iff a rotation of its cyclic
/// reduction labels a closed path at some vertex of the core of `H`.
pub fn conj_into_subgroup_free(g: &Element, h: &Subgroup) -> Result<Verdict> {
    let aut = automaton(h)?;
    let (cg, c) = word(g)?.cyclically_reduce();
    if cg.is_empty() {
        return Ok(Verdict::yes(Witness::conjugator(Element::Word(Word::identity()), g.clone())));
    }
    let paths = aut.graph().tree_paths();
    let n = cg.len();
    let mut steps = 0u64;
    for i in 0..n {
        let p = cg.prefix(i);
        let rot = cg.rotate(i);
        for (s, path) in paths.iter().enumerate() {
            steps += 1;
            if aut.read(s, &rot) == Some(s) {
                let x = c.inverse().mul(&p).mul(&path.inverse());
                let member = word(g)?.conjugate_by(&x);
                return Ok(Verdict::yes(Witness::conjugator(Element::Word(x), Element::Word(member))).with_steps(steps));
            }
        }
    }
    Ok(Verdict::no(Refutation::AutomatonSweep {
        states: aut.state_count(),
        rotations: n,
    })
    .with_steps(steps))
}

enum Sweep {
    Found(u64),
    Periodic { preperiod: u64, period: u64 },
    FellOff { checked: u64 },
}

/// Smallest `p >= 0` with `x^-p u x^p` in `H`.
///
/// With `x = c^-1 X c`, `X` cyclically reduced, the question becomes
/// `X^-p u' X^p in H'` for `u' = c u c^-1` and `H' = c H c^-1`. While
/// `X^-p` can be read from the base of `H'` to a state `s_p`, this holds iff
/// `u'` labels a loop at `s_p`, and the states `s_p` are eventually
/// periodic. Once the path leaves the core, the reduced conjugate starts
/// with a long power of `X^-1` after a bounded number of further steps, so
/// only finitely many `p` remain.
fn sweep_powers(u: &Word, x: &Word, h: &StallingsAutomaton) -> Sweep {
    let (cx, c) = x.cyclically_reduce();
    let ci = c.inverse();
    let u2 = u.conjugate_by(&ci);
    let h2 = h.conjugate(&ci);
    let xi = cx.inverse();
    let mut seen: HashMap<usize, u64> = HashMap::new();
    let mut state = Some(0usize);
    let mut p = 0u64;
    loop {
        match state {
            Some(s) => {
                if h2.read(s, &u2) == Some(s) {
                    return Sweep::Found(p);
                }
                if let Some(&q) = seen.get(&s) {
                    return Sweep::Periodic {
                        preperiod: q,
                        period: p - q,
                    };
                }
                seen.insert(s, p);
                state = h2.read(s, &xi);
                p += 1;
            }
            None => {
                let bound = p + (u2.len() / cx.len().max(1)) as u64 + 3;
                for q in p..=bound {
                    let xq = cx.pow(q as i64);
                    if h2.accepts(&u2.conjugate_by(&xq)) {
                        return Sweep::Found(q);
                    }
                }
                return Sweep::FellOff { checked: bound };
            }
        }
    }
}

fn sweep_refutation(s: Sweep, states: usize) -> Refutation {
    match s {
        Sweep::Periodic { preperiod, period } => Refutation::OrbitCycle { preperiod, period },
        Sweep::FellOff { checked } => Refutation::AutomatonSweep {
            states,
            rotations: checked as usize,
        },
        Sweep::Found(_) => unreachable!(),
    }
}

/// `x^-p u x^p in H` for some `p >= 0`, or any integer `p` when `two_sided`.
/// The witness carries `p` as its exponent and `x^p` as its conjugator.
pub fn conj_power_into_subgroup(u: &Element, x: &Element, h: &Subgroup, two_sided: bool) -> Result<Verdict> {
    let aut = automaton(h)?;
    let (uw, xw) = (word(u)?, word(x)?);
    let witness = |p: i64| {
        let xp = xw.pow(p);
        Witness {
            conjugator: Some(Element::Word(xp.clone())),
            exponent: Some(p),
            member: Element::Word(uw.conjugate_by(&xp)),
            detail: None,
        }
    };
    let fwd = sweep_powers(uw, xw, aut);
    let fwd_hit = match fwd {
        Sweep::Found(p) => Some(p as i64),
        _ => None,
    };
    if !two_sided {
        return Ok(match fwd_hit {
            Some(p) => Verdict::yes(witness(p)),
            None => Verdict::no(sweep_refutation(fwd, aut.state_count())),
        });
    }
    let bwd = sweep_powers(uw, &xw.inverse(), aut);
    let bwd_hit = match bwd {
        Sweep::Found(p) => Some(-(p as i64)),
        _ => None,
    };
    Ok(match (fwd_hit, bwd_hit) {
        (Some(a), Some(b)) => Verdict::yes(witness(if b.abs() < a { b } else { a })),
        (Some(a), None) => Verdict::yes(witness(a)),
        (None, Some(b)) => Verdict::yes(witness(b)),
        (None, None) => Verdict::no(Refutation::Combined(vec![
            sweep_refutation(fwd, aut.state_count()),
            sweep_refutation(bwd, aut.state_count()),
        ])),
    })
}

/// Orbit questions for `phi` with `phi^r` conjugation by `x`.
///
/// Writing `k = p r + q` with `0 <= q < r`, `u.phi^k = (x^-p u x^p).phi^q`.
/// For the orbit conjugacy variant only `q` matters. For the plain orbit
/// variant, `u.phi^k in K` iff `x^-p u x^p in K.phi^-q`.
pub fn gbrcp_via_free(
    group: &Group,
    phi: &Morphism,
    u: &Element,
    k: &Subgroup,
    conjugate_too: bool,
) -> Result<Verdict> {
    let Some(iw) = phi.witness() else {
        return unsupported("the automorphism has no virtually inner witness");
    };
    let r = iw.power as i64;
    let mut refutations = Vec::new();
    if conjugate_too {
        for q in 0..r {
            let uq = phi.apply_power(u, q)?;
            let v = conj_into_subgroup_free(&uq, k)?;
            match v.witness() {
                Some(w) => {
                    return Ok(Verdict::yes(Witness {
                        conjugator: w.conjugator.clone(),
                        exponent: Some(q),
                        member: w.member.clone(),
                        detail: Some(format!("phi^{r} is inner")),
                    }))
                }
                None => refutations.extend(v.refutation().cloned()),
            }
        }
        return Ok(Verdict::no(Refutation::Combined(refutations)));
    }
    let Some(inv) = phi.inverse() else {
        return unsupported("the plain orbit variant needs an invertible automorphism");
    };
    let mut best: Option<i64> = None;
    for q in 0..r {
        let kq = k.image(group, &inv.power(q)?)?;
        let v = conj_power_into_subgroup(u, &iw.conjugator, &kq, true)?;
        match v.witness() {
            Some(w) => {
                let cand = w.exponent.unwrap() * r + q;
                if best.is_none_or(|b| cand.abs() < b.abs() || (cand.abs() == b.abs() && cand > b)) {
                    best = Some(cand);
                }
            }
            None => refutations.extend(v.refutation().cloned()),
        }
    }
    Ok(match best {
        Some(kk) => Verdict::yes(Witness::exponent(kk, phi.apply_power(u, kk)?).with_detail(format!("phi^{r} is inner"))),
        None => Verdict::no(Refutation::Combined(refutations)),
    })
}

/// A coset target `w H` with `w in H` is the subgroup itself.
pub(crate) fn as_subgroup(group: &Group, target: &Target) -> Result<Option<Subgroup>> {
    Ok(match target {
        Target::Subgroup(h) => Some(h.clone()),
        Target::Coset { rep, subgroup } if subgroup.member(group, rep)? => Some(subgroup.clone()),
        _ => None,
    })
}

/// Generic orbit conjugacy: for each `u.phi^k`, an exact conjugacy test.
pub(crate) fn gbrcp_orbit(group: &Group, phi: &Morphism, u: &Element, target: &Target, two_sided: bool, budget: &Budget) -> Result<Verdict> {
    crate::solvers::orbit::orbit_search(phi, u, two_sided, budget, |k, y| {
        let v = match target {
            Target::Finite(elems) => {
                let mut found = None;
                for h in elems {
                    if let Some(w) = cp_free(y, h)?.witness() {
                        found = Some(w.clone());
                        break;
                    }
                }
                found
            }
            _ => match as_subgroup(group, target)? {
                Some(h) => conj_into_subgroup_free(y, &h)?.witness().cloned(),
                None => return unsupported("conjugacy into a proper coset of a free group"),
            },
        };
        Ok(v.map(|w| Witness {
            exponent: Some(k),
            ..w
        }))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::ProblemInstance;
    use crate::verdict::certify;

    fn f2() -> Group {
        Group::free_rank(2)
    }

    #[test]
    fn conjugate_rotations() {
        let f = f2();
        let u = Element::word(&[2, 1, 1, -2]);
        let v = Element::word(&[2, 1, 1]);
        let ans = cp_free(&u, &Element::word(&[1, 1])).unwrap();
        assert!(ans.is_yes());
        let inst = ProblemInstance::cp(&f, u.clone(), Element::word(&[1, 1])).unwrap();
        assert!(certify(&inst, ans.witness().unwrap()).unwrap());
        assert!(cp_free(&u, &v).unwrap().is_no());
        let w = Element::word(&[1, 2, -1, -2]);
        let rot = Element::word(&[-2, 1, 2, -1]);
        let ans = cp_free(&w, &rot).unwrap();
        let inst = ProblemInstance::cp(&f, w, rot).unwrap();
        assert!(certify(&inst, ans.witness().unwrap()).unwrap());
    }

    #[test]
    fn conjugates_into_cyclic_subgroup() {
        let f = f2();
        let h = Subgroup::from_generators(&f, &[Element::word(&[1, 2])]).unwrap();
        let g = Element::word(&[-1, 2, 1, -1, 1]);
        // g = a^-1 b a, conjugate to b, not in <ab>
        assert!(conj_into_subgroup_free(&g, &h).unwrap().is_no());
        let g = Element::word(&[2, 2, 1, -2]);
        let ans = conj_into_subgroup_free(&g, &h).unwrap();
        let inst = ProblemInstance::gcp(&f, g, Target::Subgroup(h)).unwrap();
        assert!(certify(&inst, ans.witness().unwrap()).unwrap());
    }

    #[test]
    fn powers_of_a_conjugator() {
        let f = f2();
        // a^-p b a^p in <a^-3 b a^3> exactly for p = 3
        let h = Subgroup::from_generators(&f, &[Element::word(&[-1, -1, -1, 2, 1, 1, 1])]).unwrap();
        let ans = conj_power_into_subgroup(&Element::word(&[2]), &Element::word(&[1]), &h, true).unwrap();
        assert_eq!(ans.witness().unwrap().exponent, Some(3));
        let ans = conj_power_into_subgroup(&Element::word(&[2]), &Element::word(&[-1]), &h, false).unwrap();
        assert!(ans.is_no());
        let ans = conj_power_into_subgroup(&Element::word(&[2]), &Element::word(&[-1]), &h, true).unwrap();
        assert_eq!(ans.witness().unwrap().exponent, Some(-3));
    }

    #[test]
    fn inner_orbit_conjugacy() {
        let f = f2();
        let x = Element::word(&[1]);
        let phi = Morphism::inner(&f, &x).unwrap();
        let h = Subgroup::from_generators(&f, &[Element::word(&[-1, -1, 2, 1, 1])]).unwrap();
        let u = Element::word(&[2]);
        let v = gbrcp_via_free(&f, &phi, &u, &h, false).unwrap();
        let inst = ProblemInstance::gbrp(&f, &phi, u.clone(), Target::Subgroup(h.clone())).unwrap();
        let w = v.witness().unwrap();
        assert_eq!(w.exponent, Some(2));
        assert!(certify(&inst, w).unwrap());
        let v = gbrcp_via_free(&f, &phi, &u, &h, true).unwrap();
        let inst = ProblemInstance::gbrcp(&f, &phi, u, Target::Subgroup(h)).unwrap();
        assert!(certify(&inst, v.witness().unwrap()).unwrap());
    }
}
