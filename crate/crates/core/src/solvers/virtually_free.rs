//! Orbit problem for endomorphisms of `F b_1 u ... u F b_m` that leave the
//! free part `F` invariant.
//!
//! On `G/F` the morphism induces a map `theta` of a finite set, so
//! `(u b_i).phi^k` can only be in the coset of `b_j` for `k = s + p d`. Past
//! `s`, the subsequence `k = s + p d` is the orbit of `y c` under the
//! endomorphism `psi : a -> a.phi^p, c -> z c` of `F * <c>`, where
//! `(u b_i).phi^s = y b_j` and `b_j.phi^p = z b_j`.

use crate::error::{input, unsupported, Result};
use crate::group::{Element, Group};
use crate::morphism::Morphism;
use crate::solvers::orbit::orbit_search;
use crate::verdict::{Budget, Outcome, Refutation, Verdict, Witness};
use crate::word::{Letter, Word};

fn split(e: &Element) -> Result<(&Word, usize)> {
    match e.as_coset() {
        Some(p) => Ok(p),
        None => input("expected an element of a virtually free group"),
    }
}

/// `g.phi^k = h` for some `k >= 0`.
pub fn brp_virtually_free(group: &Group, phi: &Morphism, g: &Element, h: &Element, budget: &Budget) -> Result<Verdict> {
    let Some(vf) = group.as_virtually_free() else {
        return input("expected a virtually free group");
    };
    let n = vf.free.generator_count();
    let coset = |i: usize| Element::Coset {
        word: Word::identity(),
        coset: i,
    };
    for a in 0..n {
        let img = phi.apply(&Element::Coset {
            word: Word::letter(Letter::gen(a)),
            coset: vf.identity,
        })?;
        if split(&img)?.1 != vf.identity {
            return unsupported("the endomorphism does not leave the free part invariant");
        }
    }
    let m = vf.coset_count();
    let theta = (0..m)
        .map(|i| phi.apply(&coset(i)).and_then(|e| Ok(split(&e)?.1)))
        .collect::<Result<Vec<_>>>()?;
    let (_, i) = split(g)?;
    let (hw, j) = split(h)?;
    let mut orbit = vec![i];
    while !orbit[..orbit.len() - 1].contains(orbit.last().unwrap()) {
        let next = theta[*orbit.last().unwrap()];
        orbit.push(next);
    }
    orbit.pop();
    let Some(s) = orbit.iter().position(|&c| c == j) else {
        return Ok(Verdict::no(Refutation::FiniteOrbit { orbit }));
    };
    let gs = phi.apply_power(g, s as i64)?;
    if &gs == h {
        return Ok(Verdict::yes(Witness::exponent(s as i64, h.clone())));
    }
    let mut p = 0usize;
    let mut c = j;
    for step in 1..=m {
        c = theta[c];
        if c == j {
            p = step;
            break;
        }
    }
    if p == 0 {
        return Ok(Verdict::no(Refutation::FiniteOrbit { orbit }));
    }
    let (y, _) = split(&gs)?;
    let bj = phi.apply_power(&coset(j), p as i64)?;
    let (z, _) = split(&bj)?;
    let mut names = vf.free.generator_names();
    names.push("c".into());
    let fstar = Group::free(names);
    let cw = Word::letter(Letter::gen(n));
    let mut images = Vec::with_capacity(n + 1);
    for a in 0..n {
        let img = phi.apply_power(
            &Element::Coset {
                word: Word::letter(Letter::gen(a)),
                coset: vf.identity,
            },
            p as i64,
        )?;
        images.push(Element::Word(split(&img)?.0.clone()));
    }
    images.push(Element::Word(z.mul(&cw)));
    let psi = Morphism::endomorphism(&fstar, images)?;
    let start = Element::Word(y.mul(&cw));
    let goal = Element::Word(hw.mul(&cw));
    let v = orbit_search(&psi, &start, false, budget, |d, x| {
        Ok((x == &goal).then(|| Witness::exponent(d, x.clone())))
    })?;
    let stats = v.stats.clone();
    let outcome = match v.outcome {
        Outcome::Yes(w) => {
            let k = s as i64 + p as i64 * w.exponent.unwrap();
            Outcome::Yes(Witness::exponent(k, h.clone()).with_detail(format!("k = {s} + {p}d in the coset orbit")))
        }
        other => other,
    };
    Ok(Verdict { outcome, stats })
}
