//! Orbit search `g, g.phi, g.phi^-1, g.phi^2, ...` with cycle detection.

use std::collections::HashMap;

use crate::error::Result;
use crate::group::Element;
use crate::morphism::Morphism;
use crate::verdict::{Budget, Refutation, Verdict, Witness};

/// Walks the orbit of `start`, interleaving negative exponents when
/// `two_sided`, and stops at the first exponent where `hit` returns a
/// witness. A repeated forward element proves the orbit finite, and since
/// every element was tested this gives a `No`.
pub fn orbit_search<F>(phi: &Morphism, start: &Element, two_sided: bool, budget: &Budget, mut hit: F) -> Result<Verdict>
where
    F: FnMut(i64, &Element) -> Result<Option<Witness>>,
{
    let two_sided = two_sided && phi.is_invertible();
    let mut steps = start.size() as u64;
    if let Some(w) = hit(0, start)? {
        return Ok(Verdict::yes(w).with_steps(steps));
    }
    let mut seen: HashMap<Element, u64> = HashMap::from([(start.clone(), 0)]);
    let mut fwd = start.clone();
    let mut bwd = start.clone();
    for k in 1..=budget.max_exponent {
        fwd = phi.apply(&fwd)?;
        steps += fwd.size() as u64;
        if let Some(&j) = seen.get(&fwd) {
            return Ok(Verdict::no(Refutation::OrbitCycle {
                preperiod: j,
                period: k - j,
            })
            .with_steps(steps));
        }
        seen.insert(fwd.clone(), k);
        if let Some(w) = hit(k as i64, &fwd)? {
            return Ok(Verdict::yes(w).with_steps(steps));
        }
        if two_sided {
            bwd = phi.apply_inverse(&bwd)?;
            steps += bwd.size() as u64;
            if bwd == *start {
                return Ok(Verdict::no(Refutation::OrbitCycle { preperiod: 0, period: k }).with_steps(steps));
            }
            if let Some(w) = hit(-(k as i64), &bwd)? {
                return Ok(Verdict::yes(w).with_steps(steps));
            }
        }
        if steps > budget.max_steps {
            return Ok(Verdict::unknown(steps, format!("step budget exhausted at |k| = {k}")));
        }
    }
    Ok(Verdict::unknown(
        steps,
        format!("no hit with |k| <= {}", budget.max_exponent),
    ))
}

/// `u.phi^k = v` for some `k`.
pub fn brp_orbit(phi: &Morphism, u: &Element, v: &Element, two_sided: bool, budget: &Budget) -> Result<Verdict> {
    orbit_search(phi, u, two_sided, budget, |k, x| {
        Ok((x == v).then(|| Witness::exponent(k, x.clone())))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Group;
    use crate::lattice::IntMatrix;

    #[test]
    fn cat_map_orbit_hits_at_two() {
        let z2 = Group::abelian(2);
        let phi = Morphism::automorphism_from_matrix(&z2, &IntMatrix::from_i64(&[&[2, 1], &[1, 1]])).unwrap();
        let v = brp_orbit(&phi, &Element::vector(&[1, 0]), &Element::vector(&[5, 3]), true, &Budget::default()).unwrap();
        assert_eq!(v.witness().unwrap().exponent, Some(2));
        let v = brp_orbit(&phi, &Element::vector(&[1, 0]), &Element::vector(&[1, 0]), true, &Budget::default()).unwrap();
        assert_eq!(v.witness().unwrap().exponent, Some(0));
    }

    #[test]
    fn finite_orbit_closes() {
        let z5 = Group::cyclic(5);
        // a -> a^2 has orbit 1 -> 2 -> 4 -> 3 -> 1 on nonzero residues
        let phi = Morphism::endomorphism(&z5, vec![Element::Table(2)]).unwrap();
        let v = brp_orbit(&phi, &Element::Table(1), &Element::Table(0), false, &Budget::default()).unwrap();
        assert_eq!(v.refutation(), Some(&Refutation::OrbitCycle { preperiod: 0, period: 4 }));
    }

    #[test]
    fn infinite_orbit_is_unknown() {
        let z = Group::abelian(1);
        let phi = Morphism::from_matrix(&z, &IntMatrix::from_i64(&[&[2]])).unwrap();
        let budget = Budget {
            max_exponent: 20,
            ..Budget::default()
        };
        let v = brp_orbit(&phi, &Element::vector(&[1]), &Element::vector(&[3]), false, &budget).unwrap();
        assert!(v.is_unknown());
    }
}
