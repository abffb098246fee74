//! Target sets `K`: finite sets, finitely generated subgroups and their left
//! cosets, with membership, slicing along the `t`-exponent and coset
//! intersection.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use crate::error::{unsupported, Error, Result};
use crate::group::{Element, Group, GroupData};
use crate::lattice::{self, ext_gcd_list, solve_left, Lattice};
use crate::stallings::{self, StallingsAutomaton};

/// Subgroup of a semidirect product `G x| Z` given by generators
/// `t^k_i g_i`, with its base part `H n G` computed on demand.
#[derive(Clone, Debug)]
pub struct SemidirectSubgroup {
    generators: Vec<Element>,
    base: OnceLock<Result<Box<Subgroup>>>,
}

impl PartialEq for SemidirectSubgroup {
    fn eq(&self, other: &Self) -> bool {
        self.generators == other.generators
    }
}

impl Eq for SemidirectSubgroup {}

impl SemidirectSubgroup {
    pub fn generators(&self) -> &[Element] {
        &self.generators
    }

    /// `H n G`, cached.
    pub fn base_part(&self, group: &Group) -> Result<&Subgroup> {
        self.base
            .get_or_init(|| base_intersection(group, &self.generators).map(Box::new))
            .as_ref()
            .map(|b| &**b)
            .map_err(Clone::clone)
    }
}

/// A finitely generated subgroup in the representation native to its family.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Subgroup {
    Free(StallingsAutomaton),
    Lattice(Lattice),
    /// Sorted element indices of a subgroup of a finite group.
    Table(Vec<usize>),
    Semidirect(SemidirectSubgroup),
}

impl Subgroup {
    pub fn from_generators(group: &Group, gens: &[Element]) -> Result<Subgroup> {
        for g in gens {
            group.check(g)?;
        }
        Ok(match group.data() {
            GroupData::Free(f) => Subgroup::Free(StallingsAutomaton::new(
                f.names.len(),
                &gens.iter().map(|g| g.as_word().unwrap().clone()).collect::<Vec<_>>(),
            )),
            GroupData::Abelian(a) => Subgroup::Lattice(Lattice::from_generators(
                a.names.len(),
                &gens.iter().map(|g| g.as_vector().unwrap().clone()).collect::<Vec<_>>(),
            )),
            GroupData::Finite(_) => Subgroup::Table(table_closure(group, gens)?),
            GroupData::Semidirect(_) => Subgroup::Semidirect(SemidirectSubgroup {
                generators: gens.to_vec(),
                base: OnceLock::new(),
            }),
            GroupData::VirtuallyFree(_) => return unsupported("subgroups of virtually free groups"),
        })
    }

    pub fn trivial(group: &Group) -> Result<Subgroup> {
        Self::from_generators(group, &[])
    }

    pub fn whole(group: &Group) -> Result<Subgroup> {
        Self::from_generators(group, &group.generators())
    }

    /// A generating set, in the group's element form.
    pub fn generators(&self, group: &Group) -> Vec<Element> {
        match self {
            Subgroup::Free(a) => a.generators().into_iter().map(Element::Word).collect(),
            Subgroup::Lattice(l) => l.basis().iter().cloned().map(Element::Vector).collect(),
            Subgroup::Table(elems) => {
                let id = group.identity();
                elems.iter().map(|&i| Element::Table(i)).filter(|e| *e != id).collect()
            }
            Subgroup::Semidirect(s) => s.generators.clone(),
        }
    }

    pub fn member(&self, group: &Group, g: &Element) -> Result<bool> {
        group.check(g)?;
        match (self, g) {
            (Subgroup::Free(a), Element::Word(w)) => Ok(a.accepts(w)),
            (Subgroup::Lattice(l), Element::Vector(v)) => Ok(l.contains(v)),
            (Subgroup::Table(elems), Element::Table(i)) => Ok(elems.binary_search(i).is_ok()),
            (Subgroup::Semidirect(s), Element::Semidirect { t, base }) => {
                match slice_generated(group, &group.identity(), s, *t)? {
                    SlicedTarget::Empty => Ok(false),
                    sliced => sliced.member(group.base()?, base),
                }
            }
            _ => unsupported("subgroup representation does not match the element"),
        }
    }

    /// `x^-1 H x`.
    pub fn conjugate(&self, group: &Group, x: &Element) -> Result<Subgroup> {
        match self {
            Subgroup::Free(a) => Ok(Subgroup::Free(a.conjugate(x.as_word().unwrap()))),
            Subgroup::Lattice(_) => Ok(self.clone()),
            _ => {
                let gens = self
                    .generators(group)
                    .iter()
                    .map(|g| group.conj(g, x))
                    .collect::<Result<Vec<_>>>()?;
                Subgroup::from_generators(group, &gens)
            }
        }
    }

    /// Image under a morphism, as a subgroup of the codomain.
    pub fn image(&self, group: &Group, phi: &crate::morphism::Morphism) -> Result<Subgroup> {
        let gens = self
            .generators(group)
            .iter()
            .map(|g| phi.apply(g))
            .collect::<Result<Vec<_>>>()?;
        Subgroup::from_generators(phi.codomain(), &gens)
    }

    pub fn intersect(&self, group: &Group, other: &Subgroup) -> Result<Subgroup> {
        let _ = group;
        match (self, other) {
            (Subgroup::Free(a), Subgroup::Free(b)) => Ok(Subgroup::Free(a.intersect(b))),
            (Subgroup::Lattice(a), Subgroup::Lattice(b)) => Ok(Subgroup::Lattice(a.intersect(b))),
            (Subgroup::Table(a), Subgroup::Table(b)) => {
                Ok(Subgroup::Table(a.iter().filter(|x| b.binary_search(x).is_ok()).copied().collect()))
            }
            _ => unsupported("intersection for this subgroup representation"),
        }
    }
}

/// Sorted closure of `gens` in a finite group.
pub(crate) fn table_closure(group: &Group, gens: &[Element]) -> Result<Vec<usize>> {
    let f = group
        .as_finite()
        .ok_or_else(|| Error::Input("table closure needs a finite group".into()))?;
    let gens: Vec<usize> = gens.iter().map(|g| g.as_table().unwrap()).collect();
    let mut seen = BTreeSet::from([f.identity()]);
    let mut frontier = vec![f.identity()];
    while let Some(x) = frontier.pop() {
        for &g in &gens {
            let y = f.mul(x, g);
            if seen.insert(y) {
                frontier.push(y);
            }
        }
    }
    Ok(seen.into_iter().collect())
}

/// A target subset `K` of an ambient group.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Target {
    Finite(Vec<Element>),
    Subgroup(Subgroup),
    /// Left coset `rep * subgroup`.
    Coset { rep: Element, subgroup: Subgroup },
}

impl Target {
    /// Finite target with elements checked and deduplicated (order kept).
    pub fn finite(group: &Group, elems: Vec<Element>) -> Result<Target> {
        let mut out: Vec<Element> = Vec::new();
        for e in elems {
            group.check(&e)?;
            if !out.contains(&e) {
                out.push(e);
            }
        }
        Ok(Target::Finite(out))
    }

    pub fn subgroup(group: &Group, gens: &[Element]) -> Result<Target> {
        Ok(Target::Subgroup(Subgroup::from_generators(group, gens)?))
    }

    pub fn coset(group: &Group, rep: Element, gens: &[Element]) -> Result<Target> {
        group.check(&rep)?;
        Ok(Target::Coset {
            rep,
            subgroup: Subgroup::from_generators(group, gens)?,
        })
    }

    pub fn is_empty_set(&self) -> bool {
        matches!(self, Target::Finite(v) if v.is_empty())
    }

    pub fn member(&self, group: &Group, g: &Element) -> Result<bool> {
        match self {
            Target::Finite(elems) => {
                group.check(g)?;
                Ok(elems.contains(g))
            }
            Target::Subgroup(h) => h.member(group, g),
            Target::Coset { rep, subgroup } => {
                let x = group.mul(&group.inv(rep)?, g)?;
                subgroup.member(group, &x)
            }
        }
    }

    /// `w K`.
    pub fn translate_left(&self, group: &Group, w: &Element) -> Result<Target> {
        Ok(match self {
            Target::Finite(elems) => {
                Target::Finite(elems.iter().map(|k| group.mul(w, k)).collect::<Result<_>>()?)
            }
            Target::Subgroup(h) => Target::Coset {
                rep: w.clone(),
                subgroup: h.clone(),
            },
            Target::Coset { rep, subgroup } => Target::Coset {
                rep: group.mul(w, rep)?,
                subgroup: subgroup.clone(),
            },
        })
    }

    /// Every element, when the target is a finite set or lives in a finite group.
    pub fn elements(&self, group: &Group) -> Option<Vec<Element>> {
        match self {
            Target::Finite(elems) => Some(elems.clone()),
            Target::Subgroup(Subgroup::Table(s)) => Some(s.iter().map(|&i| Element::Table(i)).collect()),
            Target::Coset {
                rep,
                subgroup: Subgroup::Table(s),
            } => s
                .iter()
                .map(|&i| group.mul(rep, &Element::Table(i)).ok())
                .collect(),
            _ => None,
        }
    }

    /// `K_r = { x in G : t^r x in K }` for a target in `G x| Z`.
    pub fn slice(&self, group: &Group, r: i64) -> Result<SlicedTarget> {
        group.base()?;
        match self {
            Target::Finite(elems) => Ok(SlicedTarget::Finite(
                elems
                    .iter()
                    .filter_map(|e| match e.as_semidirect() {
                        Some((t, b)) if t == r => Some(b.clone()),
                        _ => None,
                    })
                    .collect(),
            )),
            Target::Subgroup(Subgroup::Semidirect(s)) => slice_generated(group, &group.identity(), s, r),
            Target::Coset {
                rep,
                subgroup: Subgroup::Semidirect(s),
            } => slice_generated(group, rep, s, r),
            _ => unsupported("slicing needs a target in a semidirect product"),
        }
    }
}

/// The slice `K_r` of a target, living in the base group.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SlicedTarget {
    Empty,
    /// `rep * subgroup`; the subgroup part is `None` when `H n G` could not
    /// be computed for this base family.
    Coset { rep: Element, subgroup: Option<Subgroup> },
    Finite(Vec<Element>),
}

impl SlicedTarget {
    pub fn member(&self, base: &Group, x: &Element) -> Result<bool> {
        match self {
            SlicedTarget::Empty => Ok(false),
            SlicedTarget::Finite(elems) => Ok(elems.contains(x)),
            SlicedTarget::Coset { rep, subgroup } => match subgroup {
                Some(h) => h.member(base, &base.mul(&base.inv(rep)?, x)?),
                None => {
                    if x == rep {
                        Ok(true)
                    } else {
                        unsupported("base intersection unavailable for this family")
                    }
                }
            },
        }
    }

    /// The slice as a target of the base group.
    pub fn into_target(self) -> Result<Target> {
        match self {
            SlicedTarget::Empty => Ok(Target::Finite(Vec::new())),
            SlicedTarget::Finite(elems) => Ok(Target::Finite(elems)),
            SlicedTarget::Coset {
                rep,
                subgroup: Some(subgroup),
            } => Ok(Target::Coset { rep, subgroup }),
            SlicedTarget::Coset { subgroup: None, .. } => {
                unsupported("slice needs the base intersection, which is unavailable for this base family")
            }
        }
    }
}

fn t_parts(gens: &[Element]) -> Result<Vec<(i64, Element)>> {
    gens.iter()
        .map(|g| {
            g.as_semidirect()
                .map(|(t, b)| (t, b.clone()))
                .ok_or_else(|| Error::Input("expected a semidirect element".into()))
        })
        .collect()
}

/// Slice of `(t^s g) H` at exponent `r`: empty unless `r - s` is a multiple
/// of `gcd(k_i)`, otherwise `h (H n G)` where `t^r h` is an explicit element
/// of the coset.
fn slice_generated(group: &Group, rep: &Element, h: &SemidirectSubgroup, r: i64) -> Result<SlicedTarget> {
    let (s, _) = rep
        .as_semidirect()
        .ok_or_else(|| Error::Input("coset representative must be a semidirect element".into()))?;
    let parts = t_parts(&h.generators)?;
    let ks: Vec<i64> = parts.iter().map(|(k, _)| *k).collect();
    let (d, mu) = ext_gcd_list(&ks);
    let diff = r.checked_sub(s).ok_or_else(|| Error::Overflow("t-exponent".into()))?;
    if d == 0 {
        if diff != 0 {
            return Ok(SlicedTarget::Empty);
        }
    } else if diff % d != 0 {
        return Ok(SlicedTarget::Empty);
    }
    let q = if d == 0 { 0 } else { diff / d };
    let mut y = rep.clone();
    for (gamma, m) in h.generators.iter().zip(&mu) {
        let lambda = m.checked_mul(q).ok_or_else(|| Error::Overflow("slice exponent".into()))?;
        if lambda != 0 {
            y = group.mul(&y, &group.pow(gamma, lambda)?)?;
        }
    }
    let (ty, hbase) = y.as_semidirect().unwrap();
    debug_assert_eq!(ty, r);
    let subgroup = match h.base_part(group) {
        Ok(b) => Some(b.clone()),
        Err(Error::Capability(_)) => None,
        Err(e) => return Err(e),
    };
    Ok(SlicedTarget::Coset {
        rep: hbase.clone(),
        subgroup,
    })
}

/// `H n G` for `H = <t^k_i g_i>` in `G x| Z`.
///
/// With `d = gcd(k_i)` and `tau = prod gamma_i^mu_i` of exponent `d`, the
/// elements `n_i = tau^(-k_i/d) gamma_i` lie in `G`, `H = <tau, n_i>`, and
/// `H n G` is the closure of the `n_i` under conjugation by `tau^(+-1)`.
pub fn base_intersection(group: &Group, gens: &[Element]) -> Result<Subgroup> {
    let sd = group
        .as_semidirect()
        .ok_or_else(|| Error::Input("base intersection needs a semidirect product".into()))?;
    let base = &sd.base;
    let parts = t_parts(gens)?;
    for g in gens {
        group.check(g)?;
    }
    let ks: Vec<i64> = parts.iter().map(|(k, _)| *k).collect();
    let (d, mu) = ext_gcd_list(&ks);
    if d == 0 {
        let base_gens: Vec<Element> = parts.into_iter().map(|(_, b)| b).collect();
        return Subgroup::from_generators(base, &base_gens);
    }
    let mut tau = group.identity();
    for (gamma, m) in gens.iter().zip(&mu) {
        if *m != 0 {
            tau = group.mul(&tau, &group.pow(gamma, *m)?)?;
        }
    }
    let mut seeds = Vec::new();
    for (gamma, k) in gens.iter().zip(&ks) {
        let n = group.mul(&group.pow(&tau, -(k / d))?, gamma)?;
        let (tn, b) = n.as_semidirect().unwrap();
        debug_assert_eq!(tn, 0);
        seeds.push(b.clone());
    }
    match base.data() {
        GroupData::Abelian(a) => {
            let dim = a.names.len();
            // conjugation by tau acts on an abelian base as phi^d
            let fwd = sd.phi.power(d)?;
            let bwd = sd.phi.power(-d)?;
            let (m, mi) = (fwd.matrix().unwrap().clone(), bwd.matrix().unwrap().clone());
            let vecs: Vec<_> = seeds.iter().map(|s| s.as_vector().unwrap().clone()).collect();
            let mut l = Lattice::from_generators(dim, &vecs);
            loop {
                let next = l.sum(&l.image(&m)).sum(&l.image(&mi));
                if next == l {
                    return Ok(Subgroup::Lattice(l));
                }
                l = next;
            }
        }
        GroupData::Finite(_) => {
            let tau_inv = group.inv(&tau)?;
            let mut gens = seeds;
            loop {
                let closure = table_closure(base, &gens)?;
                let mut grew = false;
                for x in closure.clone() {
                    let xe = Element::semidirect(0, Element::Table(x));
                    for c in [&tau, &tau_inv] {
                        let y = group.conj(&xe, c)?;
                        let yi = y.as_semidirect().unwrap().1.as_table().unwrap();
                        if closure.binary_search(&yi).is_err() {
                            gens.push(Element::Table(yi));
                            grew = true;
                        }
                    }
                }
                if !grew {
                    return Ok(Subgroup::Table(closure));
                }
            }
        }
        _ => unsupported(format!(
            "base intersection of a subgroup with nonzero t-exponents over a {} base",
            base.family()
        )),
    }
}

/// `c1 n c2`: empty or a coset of the intersection of the subgroups.
pub fn coset_intersect(
    group: &Group,
    (u, h): (&Element, &Subgroup),
    (v, k): (&Element, &Subgroup),
) -> Result<SlicedTarget> {
    group.check(u)?;
    group.check(v)?;
    match (h, k, u, v) {
        (Subgroup::Free(a), Subgroup::Free(b), Element::Word(uw), Element::Word(vw)) => {
            Ok(match stallings::coset_intersection(uw, a, vw, b) {
                Some((y, sub)) => SlicedTarget::Coset {
                    rep: Element::Word(y),
                    subgroup: Some(Subgroup::Free(sub)),
                },
                None => SlicedTarget::Empty,
            })
        }
        (Subgroup::Lattice(a), Subgroup::Lattice(b), Element::Vector(uv), Element::Vector(vv)) => {
            // u + l = v + m  iff  v - u = l - m in a + b
            let mut rows: Vec<_> = a.basis().to_vec();
            rows.extend(b.basis().iter().cloned());
            match solve_left(&rows, a.dim(), &lattice::sub(vv, uv)) {
                Err(_) => Ok(SlicedTarget::Empty),
                Ok(coeffs) => {
                    let mut x = uv.clone();
                    for (c, row) in coeffs.iter().zip(a.basis()) {
                        x = lattice::add(&x, &lattice::scale(row, c));
                    }
                    Ok(SlicedTarget::Coset {
                        rep: Element::Vector(x),
                        subgroup: Some(Subgroup::Lattice(a.intersect(b))),
                    })
                }
            }
        }
        (Subgroup::Table(_), Subgroup::Table(_), _, _) => {
            let c1 = Target::Coset {
                rep: u.clone(),
                subgroup: h.clone(),
            };
            let c2 = Target::Coset {
                rep: v.clone(),
                subgroup: k.clone(),
            };
            let e1 = c1.elements(group).unwrap();
            let mut common: Vec<Element> = Vec::new();
            for x in e1 {
                if c2.member(group, &x)? {
                    common.push(x);
                }
            }
            common.sort();
            match common.first() {
                None => Ok(SlicedTarget::Empty),
                Some(rep) => Ok(SlicedTarget::Coset {
                    rep: rep.clone(),
                    subgroup: Some(h.intersect(group, k)?),
                }),
            }
        }
        _ => unsupported("coset intersection for this representation"),
    }
}
