//! Free abelian bases: twisted conjugacy by lattice membership and orbit
//! questions by residues modulo the exponent of `Z^n / L`.

use std::collections::HashMap;

use num_traits::ToPrimitive;

use crate::error::{input, Error, Result};
use crate::group::Element;
use crate::lattice::{self, hermite, int, solve_left, IntMatrix, IntVector, Lattice};
use crate::morphism::Morphism;
use crate::solvers::orbit::orbit_search;
use crate::verdict::{Budget, QuotientSpec, Refutation, Verdict, Witness};

fn matrix(phi: &Morphism) -> Result<&IntMatrix> {
    phi.matrix()
        .ok_or_else(|| Error::Input("expected an endomorphism of a free abelian group".into()))
}

fn vector(g: &Element) -> Result<&IntVector> {
    g.as_vector()
        .ok_or_else(|| Error::Input("expected a free abelian element".into()))
}

/// `(x^-1.phi) g x = g - x(A - I)` lands in `rep + L`.
pub fn gtcp_coset_abelian(phi: &Morphism, g: &Element, rep: &Element, l: &Lattice) -> Result<Verdict> {
    let a = matrix(phi)?;
    let n = a.rows();
    let g = vector(g)?;
    let rep = vector(rep)?;
    let shifted = a.sub(&IntMatrix::identity(n));
    let mut rows = shifted.row_vectors();
    rows.extend(l.basis().iter().cloned());
    match solve_left(&rows, n, &lattice::sub(g, rep)) {
        Ok(coeffs) => {
            let x: IntVector = coeffs[..n].to_vec();
            let member = lattice::sub(g, &shifted.apply(&x));
            Ok(Verdict::yes(Witness::conjugator(Element::Vector(x), Element::Vector(member))))
        }
        Err(residue) => Ok(Verdict::no(Refutation::LatticeObstruction {
            basis: hermite(&rows, n).basis,
            residue,
        })),
    }
}

/// Single-element twisted conjugacy `(x^-1.phi) u x = v`.
pub fn tcp_abelian(phi: &Morphism, u: &Element, v: &Element) -> Result<Verdict> {
    let n = matrix(phi)?.rows();
    gtcp_coset_abelian(phi, u, v, &Lattice::zero(n))
}

/// Residues of `Z^n` modulo `m`, packed into a key.
fn residue(v: &[lattice::Int], m: u64) -> Vec<u64> {
    let mb = int(m as i64);
    v.iter()
        .map(|c| {
            let r = ((c % &mb) + &mb) % &mb;
            r.to_u64().unwrap()
        })
        .collect()
}

fn step(r: &[u64], a: &[Vec<u64>], m: u64) -> Vec<u64> {
    let n = r.len();
    (0..n)
        .map(|j| {
            (0..n).fold(0u128, |acc, i| (acc + r[i] as u128 * a[i][j] as u128) % m as u128) as u64
        })
        .collect()
}

/// `u.phi^k in v + L`. When `L` has finite index with exponent `m`, the
/// question only depends on `u A^k mod m`, whose orbit is eventually
/// periodic; otherwise falls back to orbit search.
pub fn gbrp_coset_abelian(
    phi: &Morphism,
    u: &Element,
    v: &Element,
    l: &Lattice,
    two_sided: bool,
    budget: &Budget,
) -> Result<Verdict> {
    let a = matrix(phi)?;
    let n = a.rows();
    let uv = vector(u)?;
    let vv = vector(v)?;
    if uv.len() != n || vv.len() != n || l.dim() != n {
        return input("dimension mismatch");
    }
    let two_sided = two_sided && phi.is_invertible();
    let m = l.exponent().and_then(|m| m.to_u64()).filter(|m| *m <= u32::MAX as u64);
    let Some(m) = m else {
        let target = vv.clone();
        return orbit_search(phi, u, two_sided, budget, |k, x| {
            let d = lattice::sub(vector(x)?, &target);
            Ok(l.contains(&d).then(|| Witness::exponent(k, x.clone())))
        });
    };
    if m == 1 {
        return Ok(Verdict::yes(Witness::exponent(0, u.clone())));
    }
    let am: Vec<Vec<u64>> = (0..n)
        .map(|i| (0..n).map(|j| residue(&[a.get(i, j).clone()], m)[0]).collect())
        .collect();
    let mut seen: HashMap<Vec<u64>, u64> = HashMap::new();
    let mut hits: Vec<u64> = Vec::new();
    let mut r = residue(uv, m);
    let mut k = 0u64;
    let (pre, period) = loop {
        if let Some(&j) = seen.get(&r) {
            break (j, k - j);
        }
        if k >= budget.max_steps {
            return Ok(Verdict::unknown(k, format!("residue orbit mod {m} longer than the step budget")));
        }
        let d: IntVector = r.iter().zip(vv).map(|(x, y)| int(*x as i64) - y).collect();
        if l.contains(&d) {
            hits.push(k);
        }
        seen.insert(r.clone(), k);
        r = step(&r, &am, m);
        k += 1;
    };
    let steps = k;
    let quotient = QuotientSpec::Congruence { modulus: m, period };
    if hits.is_empty() {
        return Ok(Verdict::no(Refutation::QuotientObstruction {
            quotients: vec![quotient],
        })
        .with_steps(steps));
    }
    let mut best: i64 = hits[0] as i64;
    if two_sided && pre == 0 {
        for &h in &hits {
            for c in [h as i64, h as i64 - period as i64] {
                if c.abs() < best.abs() || (c.abs() == best.abs() && c > best) {
                    best = c;
                }
            }
        }
    }
    let member = phi.apply_power(u, best)?;
    let mut w = Witness::exponent(best, member);
    if best.unsigned_abs() >= pre {
        let class = (best - pre as i64).rem_euclid(period as i64) + pre as i64;
        w = w.with_detail(format!("k = {class} mod {period} (residues mod {m})"));
    }
    Ok(Verdict::yes(w).with_steps(steps))
}

/// `u.phi^k = v`, which is an orbit search since `{v}` has infinite index.
pub fn brp_abelian(phi: &Morphism, u: &Element, v: &Element, two_sided: bool, budget: &Budget) -> Result<Verdict> {
    let n = matrix(phi)?.rows();
    gbrp_coset_abelian(phi, u, v, &Lattice::zero(n), two_sided, budget)
}
