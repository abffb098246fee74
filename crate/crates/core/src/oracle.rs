//! Brute-force semi-oracles for testing: word-metric balls and direct
//! enumeration of conjugators and exponents. Nothing here is used by the
//! solvers.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::group::{Element, Group};
use crate::problem::{ProblemInstance, ProblemKind};
use crate::verdict::{Refutation, Verdict, Witness};

/// Largest ball we are willing to build.
pub const MAX_BALL: usize = 2_000_000;

/// All elements of word length at most `radius`, in breadth-first order
/// with generators tried as `a, a^-1, b, b^-1, ...`.
#[derive(Clone, Debug)]
pub struct Ball {
    pub radius: usize,
    pub elements: Vec<Element>,
    /// Every element of the group is in the ball.
    pub complete: bool,
}

impl Ball {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, g: &Element) -> bool {
        self.elements.contains(g)
    }
}

pub fn ball(group: &Group, radius: usize) -> Result<Ball> {
    let mut letters = Vec::new();
    for g in group.generators() {
        let inv = group.inv(&g)?;
        letters.push(g);
        letters.push(inv);
    }
    let id = group.identity();
    let mut seen = HashSet::from([id.clone()]);
    let mut elements = vec![id.clone()];
    let mut frontier = vec![id];
    let mut complete = false;
    for _ in 0..radius {
        let mut next = Vec::new();
        for x in &frontier {
            for l in &letters {
                let y = group.mul(x, l)?;
                if seen.insert(y.clone()) {
                    next.push(y);
                }
            }
        }
        if next.is_empty() {
            complete = true;
            break;
        }
        elements.extend(next.iter().cloned());
        if elements.len() > MAX_BALL {
            return Err(Error::Budget(format!("ball of radius {radius} exceeds {MAX_BALL} elements")));
        }
        frontier = next;
    }
    if group.order().is_some_and(|n| n == elements.len()) {
        complete = true;
    }
    Ok(Ball {
        radius,
        elements,
        complete,
    })
}

/// Direct search over conjugators in `ball(radius)` and exponents
/// `|k| <= kmax`. Answers `No` only when the search space was complete.
pub fn brute_solve(inst: &ProblemInstance, radius: usize, kmax: u64) -> Result<Verdict> {
    let g = &inst.group;
    let kind = inst.kind.generalized();
    let conjugators = match g.elements() {
        Some(all) => Ball {
            radius,
            elements: all,
            complete: true,
        },
        None => ball(g, radius)?,
    };
    let in_target = |y: &Element| inst.target.member(g, y);
    match kind {
        ProblemKind::Gcp | ProblemKind::Gtcp => {
            for x in &conjugators.elements {
                let y = if kind == ProblemKind::Gcp {
                    g.conj(&inst.subject, x)?
                } else {
                    let phi = inst.morphism()?;
                    g.mul(&g.mul(&phi.apply(&g.inv(x)?)?, &inst.subject)?, x)?
                };
                if in_target(&y)? {
                    return Ok(Verdict::yes(Witness::conjugator(x.clone(), y)));
                }
            }
            Ok(if conjugators.complete {
                Verdict::no(Refutation::ExhaustedFinite {
                    candidates: conjugators.len() as u64,
                })
            } else {
                Verdict::unknown(conjugators.len() as u64, format!("no conjugator within radius {radius}"))
            })
        }
        _ => {
            let phi = inst.morphism()?;
            let two_sided = inst.two_sided();
            let conj = kind == ProblemKind::Gbrcp;
            let test = |k: i64, y: &Element| -> Result<Option<Witness>> {
                if !conj {
                    return Ok(in_target(y)?.then(|| Witness::exponent(k, y.clone())));
                }
                for x in &conjugators.elements {
                    let z = g.conj(y, x)?;
                    if in_target(&z)? {
                        return Ok(Some(Witness {
                            conjugator: Some(x.clone()),
                            exponent: Some(k),
                            member: z,
                            detail: None,
                        }));
                    }
                }
                Ok(None)
            };
            let kmax = match g.order() {
                Some(n) => kmax.max(n as u64 + 1),
                None => kmax,
            };
            let mut forward = vec![inst.subject.clone()];
            if let Some(w) = test(0, &inst.subject)? {
                return Ok(Verdict::yes(w));
            }
            let mut back = inst.subject.clone();
            let mut closed = None;
            for k in 1..=kmax {
                let y = phi.apply(forward.last().unwrap())?;
                if let Some(j) = forward.iter().position(|z| z == &y) {
                    closed = Some((j as u64, k - j as u64));
                    break;
                }
                if let Some(w) = test(k as i64, &y)? {
                    return Ok(Verdict::yes(w));
                }
                forward.push(y);
                if two_sided {
                    back = phi.apply_inverse(&back)?;
                    if let Some(w) = test(-(k as i64), &back)? {
                        return Ok(Verdict::yes(w));
                    }
                }
            }
            match closed {
                Some((preperiod, period)) if conjugators.complete || !conj => {
                    Ok(Verdict::no(Refutation::OrbitCycle { preperiod, period }))
                }
                _ => Ok(Verdict::unknown(kmax, format!("no hit with |k| <= {kmax}"))),
            }
        }
    }
}
