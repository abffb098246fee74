//! Homomorphisms given by generator images, acting on the right.

use std::sync::Arc;

use crate::error::{input, unsupported, Error, Result};
use crate::group::{Element, Family, Group, GroupData};
use crate::lattice::IntMatrix;
use crate::word::{Letter, Word};

/// `phi^power` is conjugation by `conjugator`: `a.phi^power = x^-1 a x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InnerWitness {
    pub power: u32,
    pub conjugator: Element,
}

#[derive(Debug, PartialEq, Eq)]
struct MorphismData {
    domain: Group,
    codomain: Group,
    images: Vec<Element>,
    image_inverses: Vec<Element>,
    /// Rows are the images of the basis vectors (abelian to abelian).
    matrix: Option<IntMatrix>,
    /// Image of every element of a finite domain.
    table: Option<Vec<Element>>,
}

impl MorphismData {
    fn build(domain: Group, codomain: Group, images: Vec<Element>) -> Result<Self> {
        if images.len() != domain.generator_count() {
            return input(format!(
                "expected {} generator images, got {}",
                domain.generator_count(),
                images.len()
            ));
        }
        for img in &images {
            codomain.check(img)?;
        }
        let image_inverses = images.iter().map(|x| codomain.inv(x)).collect::<Result<_>>()?;
        let matrix = match (domain.data(), codomain.data()) {
            (GroupData::Abelian(_), GroupData::Abelian(_)) => Some(IntMatrix::from_rows(
                &images.iter().map(|x| x.as_vector().unwrap().clone()).collect::<Vec<_>>(),
            )),
            _ => None,
        };
        let mut data = MorphismData {
            domain,
            codomain,
            images,
            image_inverses,
            matrix,
            table: None,
        };
        if let Some(f) = data.domain.as_finite() {
            let mut table = Vec::with_capacity(f.order());
            for x in 0..f.order() {
                table.push(data.apply_generic(&Element::Table(x))?);
            }
            for a in 0..f.order() {
                for b in 0..f.order() {
                    if table[f.mul(a, b)] != data.codomain.mul(&table[a], &table[b])? {
                        return input("generator images do not respect the multiplication table");
                    }
                }
            }
            data.table = Some(table);
        }
        data.check_relations()?;
        Ok(data)
    }

    fn check_relations(&self) -> Result<()> {
        let cod = &self.codomain;
        match self.domain.data() {
            GroupData::Abelian(_) if !matches!(cod.data(), GroupData::Abelian(_)) => {
                for (i, x) in self.images.iter().enumerate() {
                    for y in &self.images[i + 1..] {
                        if cod.mul(x, y)? != cod.mul(y, x)? {
                            return input("images of free abelian generators must commute");
                        }
                    }
                }
            }
            GroupData::Semidirect(s) => {
                let n = s.base.generator_count();
                MorphismData::build(s.base.clone(), cod.clone(), self.images[..n].to_vec())?;
                let t = &self.images[n];
                for (i, a) in s.base.generators().iter().enumerate() {
                    let moved = Element::semidirect(0, s.phi.apply(a)?);
                    if cod.conj(&self.images[i], t)? != self.apply(&moved)? {
                        return input("images do not satisfy t^-1 a t = a.phi");
                    }
                }
            }
            GroupData::VirtuallyFree(v) => {
                let b = |i: usize| Element::Coset {
                    word: Word::identity(),
                    coset: i,
                };
                let f = |w: &Word, i: usize| Element::Coset {
                    word: w.clone(),
                    coset: i,
                };
                for i in 0..v.coset_count() {
                    let bi = self.apply(&b(i))?;
                    for a in 0..v.action[i].len() {
                        let lhs = cod.mul(&bi, &self.apply(&f(&Word::letter(crate::word::Letter::gen(a)), v.identity))?)?;
                        let rhs = cod.mul(&self.apply(&f(&v.action[i][a], v.identity))?, &bi)?;
                        if lhs != rhs {
                            return input("images do not respect the coset action relations");
                        }
                    }
                    for j in 0..v.coset_count() {
                        let (vij, r) = &v.products[i][j];
                        let lhs = cod.mul(&bi, &self.apply(&b(j))?)?;
                        let rhs = cod.mul(&self.apply(&f(vij, v.identity))?, &self.apply(&b(*r))?)?;
                        if lhs != rhs {
                            return input("images do not respect the coset product relations");
                        }
                    }
                }
            }
            _ => {}
        }
        Ok(())
    }

    fn apply(&self, g: &Element) -> Result<Element> {
        self.domain.check(g)?;
        if let (Some(table), Element::Table(i)) = (&self.table, g) {
            return Ok(table[*i].clone());
        }
        if let (Some(m), Element::Vector(v)) = (&self.matrix, g) {
            return Ok(Element::Vector(m.apply(v)));
        }
        if let Element::Word(w) = g {
            let image = |l: &Letter| {
                if l.is_inverse() {
                    &self.image_inverses[l.generator()]
                } else {
                    &self.images[l.generator()]
                }
            };
            if self.codomain.family() == Family::Free {
                let letters = w.letters().iter().flat_map(|l| image(l).as_word().unwrap().letters().iter().copied());
                return Ok(Element::Word(Word::new(letters)));
            }
            return self.product(w.letters().iter().map(|l| image(l).clone()).collect());
        }
        self.apply_generic(g)
    }

    fn apply_generic(&self, g: &Element) -> Result<Element> {
        let factors = self
            .domain
            .syllables(g)?
            .into_iter()
            .map(|(i, e)| self.codomain.pow_big(&self.images[i], &e))
            .collect::<Result<Vec<_>>>()?;
        self.product(factors)
    }

    /// Pairwise product, so long words cost `n log n` rather than `n^2`.
    fn product(&self, mut factors: Vec<Element>) -> Result<Element> {
        while factors.len() > 1 {
            let mut next = Vec::with_capacity(factors.len().div_ceil(2));
            for pair in factors.chunks(2) {
                next.push(match pair {
                    [a, b] => self.codomain.mul(a, b)?,
                    [a] => a.clone(),
                    _ => unreachable!(),
                });
            }
            factors = next;
        }
        Ok(factors.pop().unwrap_or_else(|| self.codomain.identity()))
    }
}

/// A homomorphism given by the images of the domain generators, with
/// optional inverse images and an optional virtually inner witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    fwd: Arc<MorphismData>,
    bwd: Option<Arc<MorphismData>>,
    witness: Option<InnerWitness>,
}

impl Morphism {
    pub fn new(domain: &Group, codomain: &Group, images: Vec<Element>) -> Result<Morphism> {
        Ok(Morphism {
            fwd: Arc::new(MorphismData::build(domain.clone(), codomain.clone(), images)?),
            bwd: None,
            witness: None,
        })
    }

    pub fn endomorphism(group: &Group, images: Vec<Element>) -> Result<Morphism> {
        Self::new(group, group, images)
    }

    pub fn identity(group: &Group) -> Morphism {
        let gens = group.generators();
        Self::new(group, group, gens.clone())
            .and_then(|m| m.with_inverse(gens))
            .and_then(|m| m.with_witness(1, group.identity()))
            .expect("identity is an automorphism")
    }

    /// Conjugation `g -> x^-1 g x`.
    pub fn inner(group: &Group, x: &Element) -> Result<Morphism> {
        let xi = group.inv(x)?;
        let gens = group.generators();
        let images = gens.iter().map(|a| group.conj(a, x)).collect::<Result<_>>()?;
        let inverse = gens.iter().map(|a| group.conj(a, &xi)).collect::<Result<_>>()?;
        Self::new(group, group, images)?
            .with_inverse(inverse)?
            .with_witness(1, x.clone())
    }

    /// Endomorphism of `Z^n` whose matrix rows are the generator images.
    pub fn from_matrix(group: &Group, m: &IntMatrix) -> Result<Morphism> {
        let n = group
            .rank()
            .filter(|_| matches!(group.data(), GroupData::Abelian(_)))
            .ok_or_else(|| Error::Input("matrix morphisms need a free abelian group".into()))?;
        if m.rows() != n || m.cols() != n {
            return input(format!("expected a {n}x{n} matrix"));
        }
        Self::endomorphism(group, m.row_vectors().into_iter().map(Element::Vector).collect())
    }

    /// Like [`Morphism::from_matrix`] but also attaches the integer inverse;
    /// fails unless the matrix is unimodular.
    pub fn automorphism_from_matrix(group: &Group, m: &IntMatrix) -> Result<Morphism> {
        let inv = m
            .inverse()
            .ok_or_else(|| Error::Input("matrix is not invertible over the integers".into()))?;
        Self::from_matrix(group, m)?.with_inverse(inv.row_vectors().into_iter().map(Element::Vector).collect())
    }

    /// Attaches inverse images, checking that both compositions fix every
    /// generator.
    pub fn with_inverse(mut self, inverse_images: Vec<Element>) -> Result<Morphism> {
        let bwd = MorphismData::build(self.fwd.codomain.clone(), self.fwd.domain.clone(), inverse_images)?;
        if !compositions_fix_generators(&self.fwd, &bwd)? {
            return input("inverse images do not invert the morphism");
        }
        self.bwd = Some(Arc::new(bwd));
        Ok(self)
    }

    /// Attaches a virtually inner witness after checking
    /// `a.phi^power = x^-1 a x` on every generator.
    pub fn with_witness(mut self, power: u32, conjugator: Element) -> Result<Morphism> {
        if power == 0 {
            return input("witness power must be positive");
        }
        let g = self.domain().clone();
        g.check(&conjugator)?;
        for a in g.generators() {
            if self.apply_power(&a, power as i64)? != g.conj(&a, &conjugator)? {
                return input("virtually inner witness does not hold on the generators");
            }
        }
        self.witness = Some(InnerWitness { power, conjugator });
        Ok(self)
    }

    pub fn domain(&self) -> &Group {
        &self.fwd.domain
    }

    pub fn codomain(&self) -> &Group {
        &self.fwd.codomain
    }

    pub fn is_endomorphism(&self) -> bool {
        self.fwd.domain == self.fwd.codomain
    }

    pub fn images(&self) -> &[Element] {
        &self.fwd.images
    }

    pub fn inverse_images(&self) -> Option<&[Element]> {
        self.bwd.as_ref().map(|b| b.images.as_slice())
    }

    pub fn witness(&self) -> Option<&InnerWitness> {
        self.witness.as_ref()
    }

    pub fn matrix(&self) -> Option<&IntMatrix> {
        self.fwd.matrix.as_ref()
    }

    pub fn is_invertible(&self) -> bool {
        self.bwd.is_some()
    }

    pub fn inverse(&self) -> Option<Morphism> {
        let bwd = self.bwd.clone()?;
        let witness = self.witness.as_ref().map(|w| InnerWitness {
            power: w.power,
            conjugator: self.domain().inv(&w.conjugator).expect("witness lies in the domain"),
        });
        Some(Morphism {
            fwd: bwd,
            bwd: Some(self.fwd.clone()),
            witness,
        })
    }

    pub fn apply(&self, g: &Element) -> Result<Element> {
        self.fwd.apply(g)
    }

    pub fn apply_inverse(&self, g: &Element) -> Result<Element> {
        match &self.bwd {
            Some(b) => b.apply(g),
            None => unsupported("morphism has no inverse images"),
        }
    }

    /// `g.phi^k`; negative `k` needs inverse images.
    pub fn apply_power(&self, g: &Element, k: i64) -> Result<Element> {
        if !self.is_endomorphism() && k != 1 {
            return input("powers need an endomorphism");
        }
        let data = if k >= 0 {
            &self.fwd
        } else {
            match &self.bwd {
                Some(b) => b,
                None => return unsupported("negative power of a morphism without inverse images"),
            }
        };
        let steps = k.unsigned_abs();
        if let (Some(m), Element::Vector(v)) = (&data.matrix, g) {
            if steps > 8 {
                self.domain().check(g)?;
                return Ok(Element::Vector(m.pow(steps).apply(v)));
            }
        }
        let mut x = g.clone();
        for _ in 0..steps {
            x = data.apply(&x)?;
        }
        Ok(x)
    }

    /// `phi^k` as a morphism, carrying inverse images and witness along.
    pub fn power(&self, k: i64) -> Result<Morphism> {
        if !self.is_endomorphism() {
            return input("powers need an endomorphism");
        }
        if k < 0 && self.bwd.is_none() {
            return unsupported("negative power of a morphism without inverse images");
        }
        let g = self.domain();
        let images = g.generators().iter().map(|a| self.apply_power(a, k)).collect::<Result<Vec<_>>>()?;
        let mut out = Morphism::new(g, g, images)?;
        if self.bwd.is_some() {
            let inv = g.generators().iter().map(|a| self.apply_power(a, -k)).collect::<Result<Vec<_>>>()?;
            out = out.with_inverse(inv)?;
        }
        if let Some(w) = &self.witness {
            // (phi^k)^r = (phi^r)^k = conjugation by x^k
            out.witness = Some(InnerWitness {
                power: w.power,
                conjugator: g.pow(&w.conjugator, k)?,
            });
        }
        Ok(out)
    }

    /// `self` followed by `other`: `g -> (g.self).other`.
    pub fn compose(&self, other: &Morphism) -> Result<Morphism> {
        if self.codomain() != other.domain() {
            return input("cannot compose: codomain and domain differ");
        }
        let images = self.images().iter().map(|x| other.apply(x)).collect::<Result<_>>()?;
        let out = Morphism::new(self.domain(), other.codomain(), images)?;
        match (&self.bwd, &other.bwd) {
            (Some(_), Some(ob)) => {
                let inv = ob.images.iter().map(|x| self.apply_inverse(x)).collect::<Result<_>>()?;
                out.with_inverse(inv)
            }
            _ => Ok(out),
        }
    }

    /// True iff `phi` and `psi` are mutually inverse on the generators.
    pub fn verify_automorphism(phi: &Morphism, psi: &Morphism) -> Result<bool> {
        if phi.domain() != psi.codomain() || phi.codomain() != psi.domain() {
            return Ok(false);
        }
        compositions_fix_generators(&phi.fwd, &psi.fwd)
    }

    /// Every automorphism of a finite group, with inverse images attached.
    pub fn finite_automorphisms(group: &Group) -> Result<Vec<Morphism>> {
        let f = group
            .as_finite()
            .ok_or_else(|| Error::Input("automorphism search needs a finite group".into()))?;
        let n = f.order();
        let k = f.generators().len();
        let mut out = Vec::new();
        let mut choice = vec![0usize; k];
        loop {
            let images: Vec<Element> = choice.iter().map(|&c| Element::Table(c)).collect();
            if let Ok(m) = Morphism::new(group, group, images) {
                let table = m.fwd.table.as_ref().unwrap();
                let mut preimage = vec![usize::MAX; n];
                for (x, y) in table.iter().enumerate() {
                    preimage[y.as_table().unwrap()] = x;
                }
                if preimage.iter().all(|&p| p != usize::MAX) {
                    let inv = f.generators().iter().map(|&g| Element::Table(preimage[g])).collect();
                    out.push(m.with_inverse(inv)?);
                }
            }
            let mut i = 0;
            while i < k {
                choice[i] += 1;
                if choice[i] < n {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
            if i == k {
                break;
            }
        }
        Ok(out)
    }

    /// Smallest `s > 0` with `phi^s = id`, searching up to `limit`.
    pub fn order(&self, limit: u64) -> Result<Option<u64>> {
        let g = self.domain();
        let gens = g.generators();
        let mut current = gens.clone();
        for s in 1..=limit {
            current = current.iter().map(|x| self.apply(x)).collect::<Result<_>>()?;
            if current == gens {
                return Ok(Some(s));
            }
        }
        Ok(None)
    }
}

fn compositions_fix_generators(f: &MorphismData, b: &MorphismData) -> Result<bool> {
    for a in f.domain.generators() {
        if b.apply(&f.apply(&a)?)? != a {
            return Ok(false);
        }
    }
    for a in f.codomain.generators() {
        if f.apply(&b.apply(&a)?)? != a {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn swap() -> Morphism {
        let f = Group::free_rank(2);
        let imgs = vec![Element::word(&[2]), Element::word(&[1])];
        Morphism::endomorphism(&f, imgs.clone()).unwrap().with_inverse(imgs).unwrap()
    }

    #[test]
    fn swap_applies_letterwise() {
        assert_eq!(swap().apply(&Element::word(&[1, -2])).unwrap(), Element::word(&[2, -1]));
        assert!(Morphism::verify_automorphism(&swap(), &swap()).unwrap());
        let sq = swap().power(2).unwrap();
        assert_eq!(sq.images(), Group::free_rank(2).generators().as_slice());
    }

    #[test]
    fn matrix_powers() {
        let z2 = Group::abelian(2);
        let a = IntMatrix::from_i64(&[&[2, 1], &[1, 1]]);
        let phi = Morphism::automorphism_from_matrix(&z2, &a).unwrap();
        assert_eq!(phi.apply(&Element::vector(&[1, 0])).unwrap(), Element::vector(&[2, 1]));
        let sq = phi.power(2).unwrap();
        assert_eq!(sq.matrix().unwrap(), &IntMatrix::from_i64(&[&[5, 3], &[3, 2]]));
        assert_eq!(phi.power(0).unwrap().images(), z2.generators().as_slice());
        let inv = Morphism::from_matrix(&z2, &IntMatrix::from_i64(&[&[1, -1], &[-1, 2]])).unwrap();
        assert!(Morphism::verify_automorphism(&phi, &inv).unwrap());
    }

    #[test]
    fn doubling_is_not_an_automorphism() {
        let z = Group::abelian(1);
        let double = Morphism::from_matrix(&z, &IntMatrix::from_i64(&[&[2]])).unwrap();
        assert!(double.power(-1).is_err());
        for c in -3..=3 {
            let cand = Morphism::from_matrix(&z, &IntMatrix::from_i64(&[&[c]])).unwrap();
            assert!(!Morphism::verify_automorphism(&double, &cand).unwrap());
        }
        assert!(Morphism::automorphism_from_matrix(&z, &IntMatrix::from_i64(&[&[2]])).is_err());
    }

    #[test]
    fn finite_table_relations_are_checked() {
        let z3 = Group::cyclic(3);
        // a -> a^2 is an automorphism, a -> 1 a valid endomorphism
        assert_eq!(Morphism::finite_automorphisms(&z3).unwrap().len(), 2);
        assert!(Morphism::endomorphism(&z3, vec![Element::Table(0)]).is_ok());
        // Z/2 -> Z/3 sending the generator to a^1 breaks a^2 = 1
        let z2 = Group::cyclic(2);
        assert!(Morphism::new(&z2, &z3, vec![Element::Table(1)]).is_err());
    }

    #[test]
    fn automorphism_counts() {
        let s3 = Group::from_permutations(&[vec![1, 0, 2], vec![1, 2, 0]]).unwrap();
        assert_eq!(Morphism::finite_automorphisms(&s3).unwrap().len(), 6);
        assert_eq!(Morphism::finite_automorphisms(&Group::cyclic(6)).unwrap().len(), 2);
    }

    #[test]
    fn inner_witness() {
        let f = Group::free_rank(2);
        let b = Element::word(&[2]);
        let lam = Morphism::inner(&f, &b).unwrap();
        assert_eq!(lam.apply(&Element::word(&[1])).unwrap(), Element::word(&[-2, 1, 2]));
        assert!(lam.clone().with_witness(1, Element::word(&[1])).is_err());
        let cube = lam.power(3).unwrap();
        assert_eq!(cube.witness().unwrap().conjugator, Element::word(&[2, 2, 2]));
    }

    fn word_strategy() -> impl Strategy<Value = Word> {
        proptest::collection::vec(prop_oneof![Just(1), Just(-1), Just(2), Just(-2)], 0..=3)
            .prop_map(|s| Word::from_signed(&s))
    }

    proptest! {
        #[test]
        fn power_law(j in -2i64..=2, k in -2i64..=2, w in word_strategy()) {
            let f = Group::free_rank(2);
            // a -> a b, b -> b is invertible with inverse a -> a b^-1
            let phi = Morphism::endomorphism(&f, vec![Element::word(&[1, 2]), Element::word(&[2])])
                .unwrap()
                .with_inverse(vec![Element::word(&[1, -2]), Element::word(&[2])])
                .unwrap();
            let g = Element::Word(w);
            let lhs = phi.power(j).unwrap().apply(&phi.power(k).unwrap().apply(&g).unwrap()).unwrap();
            prop_assert_eq!(lhs, phi.power(j + k).unwrap().apply(&g).unwrap());
        }

        #[test]
        fn apply_is_homomorphic(u in word_strategy(), v in word_strategy()) {
            let f = Group::free_rank(2);
            let phi = Morphism::endomorphism(&f, vec![Element::word(&[1, 2, 2]), Element::word(&[-1])]).unwrap();
            let (u, v) = (Element::Word(u), Element::Word(v));
            let lhs = phi.apply(&f.mul(&u, &v).unwrap()).unwrap();
            let rhs = f.mul(&phi.apply(&u).unwrap(), &phi.apply(&v).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
