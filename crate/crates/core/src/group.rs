//! Group handles, element normal forms and the multiplication law of every
//! supported family.
//!
//! Morphisms act on the right throughout: `g.phi`, written `apply(phi, g)`.
//! In a semidirect product `G x|_phi Z` the defining relation is
//! `t^-1 a t = a.phi`, so `(t^a g)(t^b h) = t^(a+b) (g.phi^b) h`.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{input, unsupported, Error, Result};
use crate::lattice::{self, Int, IntVector};
use crate::morphism::Morphism;
use crate::word::{parse_word, Letter, Word};

/// Normal form of a group element. The owning [`Group`] decides which
/// variant is valid; [`Group::check`] rejects mismatches.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Element {
    /// Reduced word in a free group.
    Word(Word),
    /// Coordinate vector in `Z^n`.
    Vector(IntVector),
    /// Index into a multiplication table.
    Table(usize),
    /// `t^t * base` in a semidirect product with `Z`.
    Semidirect { t: i64, base: Box<Element> },
    /// `word * b_coset` in a virtually free group.
    Coset { word: Word, coset: usize },
}

impl Element {
    pub fn semidirect(t: i64, base: Element) -> Self {
        Element::Semidirect {
            t,
            base: Box::new(base),
        }
    }

    pub fn vector(entries: &[i64]) -> Self {
        Element::Vector(lattice::vector(entries))
    }

    pub fn word(signed: &[i32]) -> Self {
        Element::Word(Word::from_signed(signed))
    }

    pub fn as_word(&self) -> Option<&Word> {
        match self {
            Element::Word(w) => Some(w),
            _ => None,
        }
    }

    pub fn as_vector(&self) -> Option<&IntVector> {
        match self {
            Element::Vector(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_table(&self) -> Option<usize> {
        match self {
            Element::Table(i) => Some(*i),
            _ => None,
        }
    }

    /// `(t-exponent, base part)` of a semidirect element.
    pub fn as_semidirect(&self) -> Option<(i64, &Element)> {
        match self {
            Element::Semidirect { t, base } => Some((*t, base)),
            _ => None,
        }
    }

    pub fn as_coset(&self) -> Option<(&Word, usize)> {
        match self {
            Element::Coset { word, coset } => Some((word, *coset)),
            _ => None,
        }
    }

    /// Rough size used for budgets: word length, bit length, and so on.
    pub fn size(&self) -> usize {
        match self {
            Element::Word(w) => w.len(),
            Element::Vector(v) => v.iter().map(|x| x.bits() as usize).sum::<usize>().max(1),
            Element::Table(_) => 1,
            Element::Semidirect { base, .. } => 1 + base.size(),
            Element::Coset { word, .. } => 1 + word.len(),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Family {
    Free,
    Abelian,
    Finite,
    Semidirect,
    VirtuallyFree,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Free => "free",
            Family::Abelian => "abelian",
            Family::Finite => "finite",
            Family::Semidirect => "semidirect",
            Family::VirtuallyFree => "virtually-free",
        })
    }
}

#[derive(Debug, PartialEq, Eq)]
pub struct FreeGroup {
    pub names: Vec<String>,
}

#[derive(Debug, PartialEq, Eq)]
pub struct AbelianGroup {
    pub names: Vec<String>,
}

/// A finite group given by a validated multiplication table.
#[derive(Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<usize>,
    inverse: Vec<usize>,
    identity: usize,
    generators: Vec<usize>,
    /// Shortest word in the generators for every element (BFS order).
    words: Vec<Vec<Letter>>,
}

impl FiniteGroup {
    pub fn new(table: Vec<Vec<usize>>, generators: Vec<usize>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return input("empty multiplication table");
        }
        if table.iter().any(|row| row.len() != n || row.iter().any(|&x| x >= n)) {
            return input("multiplication table must be square with entries below the order");
        }
        let flat: Vec<usize> = table.into_iter().flatten().collect();
        let at = |a: usize, b: usize| flat[a * n + b];
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| at(e, x) == x && at(x, e) == x))
            .ok_or_else(|| Error::Input("table has no identity".into()))?;
        let mut inverse = vec![usize::MAX; n];
        for x in 0..n {
            let y = (0..n)
                .find(|&y| at(x, y) == identity && at(y, x) == identity)
                .ok_or_else(|| Error::Input(format!("element {x} has no inverse")))?;
            inverse[x] = y;
        }
        for a in 0..n {
            for b in 0..n {
                let ab = at(a, b);
                for c in 0..n {
                    if at(ab, c) != at(a, at(b, c)) {
                        return input(format!("table is not associative at ({a},{b},{c})"));
                    }
                }
            }
        }
        if generators.iter().any(|&g| g >= n) {
            return input("generator index out of range");
        }
        let mut words: Vec<Option<Vec<Letter>>> = vec![None; n];
        words[identity] = Some(Vec::new());
        let mut queue = VecDeque::from([identity]);
        while let Some(x) = queue.pop_front() {
            for (gi, &g) in generators.iter().enumerate() {
                for (y, letter) in [(at(x, g), Letter::gen(gi)), (at(x, inverse[g]), Letter::gen_inv(gi))] {
                    if words[y].is_none() {
                        let mut w = words[x].clone().unwrap();
                        w.push(letter);
                        words[y] = Some(w);
                        queue.push_back(y);
                    }
                }
            }
        }
        if words.iter().any(Option::is_none) {
            return input("generators do not generate the table group");
        }
        Ok(FiniteGroup {
            order: n,
            table: flat,
            inverse,
            identity,
            generators,
            words: words.into_iter().map(Option::unwrap).collect(),
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn word_of(&self, a: usize) -> &[Letter] {
        &self.words[a]
    }

    pub fn table_rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order).map(<[usize]>::to_vec).collect()
    }
}

#[derive(Debug, PartialEq, Eq)]
pub struct SemidirectGroup {
    pub base: Group,
    /// Defining automorphism; always carries inverse images.
    pub phi: Morphism,
}

/// `G = F b_1 u ... u F b_m` with relations `b_i a = u_ia b_i` and
/// `b_i b_j = v_ij b_(r_ij)`.
#[derive(Debug, PartialEq, Eq)]
pub struct VirtuallyFreeGroup {
    pub free: Group,
    pub coset_names: Vec<String>,
    pub identity: usize,
    /// `action[i][a] = u_ia`.
    pub action: Vec<Vec<Word>>,
    /// `products[i][j] = (v_ij, r_ij)`.
    pub products: Vec<Vec<(Word, usize)>>,
    inverse: Vec<usize>,
}

impl VirtuallyFreeGroup {
    pub fn coset_count(&self) -> usize {
        self.coset_names.len()
    }

    fn rank(&self) -> usize {
        self.action.first().map_or(0, Vec::len)
    }

    /// Conjugation by the coset letter: `b_i w = act(i, w) b_i`.
    pub fn act(&self, i: usize, w: &Word) -> Word {
        let mut out = Word::identity();
        for l in w.letters() {
            let img = &self.action[i][l.generator()];
            out = if l.is_inverse() {
                out.mul(&img.inverse())
            } else {
                out.mul(img)
            };
        }
        out
    }

    fn mul(&self, (u, i): (&Word, usize), (v, j): (&Word, usize)) -> Element {
        let (vij, r) = &self.products[i][j];
        Element::Coset {
            word: u.mul(&self.act(i, v)).mul(vij),
            coset: *r,
        }
    }

    fn inv(&self, (w, i): (&Word, usize)) -> Element {
        let k = self.inverse[i];
        let v = &self.products[i][k].0;
        Element::Coset {
            word: self.act(k, &v.inverse().mul(&w.inverse())),
            coset: k,
        }
    }

    /// Coset quotient `G/F` as a multiplication table on coset indices.
    pub fn quotient_product(&self, i: usize, j: usize) -> usize {
        self.products[i][j].1
    }
}

#[derive(Debug, PartialEq, Eq)]
pub enum GroupData {
    Free(FreeGroup),
    Abelian(AbelianGroup),
    Finite(FiniteGroup),
    Semidirect(SemidirectGroup),
    VirtuallyFree(VirtuallyFreeGroup),
}

/// Shared, immutable handle to a concrete group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Group(Arc<GroupData>);

fn default_names(n: usize) -> Vec<String> {
    if n <= 26 {
        (0..n).map(|i| ((b'a' + i as u8) as char).to_string()).collect()
    } else {
        (0..n).map(|i| format!("x{}", i + 1)).collect()
    }
}

impl Group {
    pub fn free(names: Vec<String>) -> Group {
        Group(Arc::new(GroupData::Free(FreeGroup { names })))
    }

    /// Free group on `a, b, c, ...`.
    pub fn free_rank(n: usize) -> Group {
        Self::free(default_names(n))
    }

    pub fn abelian(rank: usize) -> Group {
        Self::abelian_named((1..=rank).map(|i| format!("x{i}")).collect())
    }

    pub fn abelian_named(names: Vec<String>) -> Group {
        Group(Arc::new(GroupData::Abelian(AbelianGroup { names })))
    }

    pub fn finite(table: Vec<Vec<usize>>, generators: Vec<usize>) -> Result<Group> {
        Ok(Group(Arc::new(GroupData::Finite(FiniteGroup::new(table, generators)?))))
    }

    /// `Z/n` with element `i` standing for `a^i`.
    pub fn cyclic(n: usize) -> Group {
        let table = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        Self::finite(table, if n > 1 { vec![1] } else { vec![] }).expect("cyclic table is a group")
    }

    /// The permutation group generated by `perms` (images of `0..degree`).
    /// Element 0 is the identity; generator `i` is the element for `perms[i]`.
    pub fn from_permutations(perms: &[Vec<usize>]) -> Result<Group> {
        let degree = perms.first().map_or(0, Vec::len);
        let id: Vec<usize> = (0..degree).collect();
        let mut elements = vec![id.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(id, 0)]);
        let mut i = 0;
        // closure under right multiplication by generators
        while i < elements.len() {
            for p in perms {
                if p.len() != degree {
                    return input("permutations of different degrees");
                }
                let q: Vec<usize> = elements[i].iter().map(|&x| p[x]).collect();
                if !index.contains_key(&q) {
                    index.insert(q.clone(), elements.len());
                    elements.push(q);
                }
            }
            i += 1;
        }
        let table = elements
            .iter()
            .map(|a| {
                elements
                    .iter()
                    .map(|b| index[&a.iter().map(|&x| b[x]).collect::<Vec<_>>()])
                    .collect()
            })
            .collect();
        let gens = perms.iter().map(|p| index[p]).collect();
        Self::finite(table, gens)
    }

    /// `base x|_phi Z`. The defining morphism must be a verified automorphism.
    pub fn semidirect(base: Group, phi: Morphism) -> Result<Group> {
        if phi.domain() != &base || phi.codomain() != &base {
            return input("defining morphism must be an endomorphism of the base");
        }
        if phi.inverse().is_none() {
            return input("defining morphism of a semidirect product must be an automorphism");
        }
        Ok(Group(Arc::new(GroupData::Semidirect(SemidirectGroup { base, phi }))))
    }

    pub fn virtually_free(
        free: Group,
        coset_names: Vec<String>,
        identity: usize,
        action: Vec<Vec<Word>>,
        products: Vec<Vec<(Word, usize)>>,
    ) -> Result<Group> {
        let rank = match free.data() {
            GroupData::Free(f) => f.names.len(),
            _ => return input("virtually free base must be a free group"),
        };
        let m = coset_names.len();
        if m == 0 || identity >= m {
            return input("need at least one coset and a valid identity coset");
        }
        if action.len() != m || action.iter().any(|row| row.len() != rank) {
            return input("action table must be cosets x generators");
        }
        if products.len() != m || products.iter().any(|row| row.len() != m || row.iter().any(|(_, r)| *r >= m)) {
            return input("product table must be cosets x cosets with valid coset indices");
        }
        let words_ok = action
            .iter()
            .flatten()
            .chain(products.iter().flatten().map(|(w, _)| w))
            .all(|w| w.max_generator().is_none_or(|g| g < rank));
        if !words_ok {
            return input("relation word uses an unknown generator");
        }
        if (0..rank).any(|a| action[identity][a] != Word::letter(Letter::gen(a))) {
            return input("identity coset must act trivially");
        }
        for j in 0..m {
            if products[identity][j] != (Word::identity(), j) || products[j][identity] != (Word::identity(), j) {
                return input("identity coset must be neutral in the product table");
            }
        }
        let quotient = FiniteGroup::new(
            products.iter().map(|row| row.iter().map(|(_, r)| *r).collect()).collect(),
            (0..m).collect(),
        )
        .map_err(|e| Error::Input(format!("coset products do not form a group: {e}")))?;
        let inverse = (0..m).map(|i| quotient.inv(i)).collect();
        let vf = VirtuallyFreeGroup {
            free,
            coset_names,
            identity,
            action,
            products,
            inverse,
        };
        vf.validate(rank)?;
        Ok(Group(Arc::new(GroupData::VirtuallyFree(vf))))
    }

    pub fn data(&self) -> &GroupData {
        &self.0
    }

    pub fn family(&self) -> Family {
        match self.data() {
            GroupData::Free(_) => Family::Free,
            GroupData::Abelian(_) => Family::Abelian,
            GroupData::Finite(_) => Family::Finite,
            GroupData::Semidirect(_) => Family::Semidirect,
            GroupData::VirtuallyFree(_) => Family::VirtuallyFree,
        }
    }

    pub fn as_finite(&self) -> Option<&FiniteGroup> {
        match self.data() {
            GroupData::Finite(f) => Some(f),
            _ => None,
        }
    }

    pub fn as_semidirect(&self) -> Option<&SemidirectGroup> {
        match self.data() {
            GroupData::Semidirect(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_virtually_free(&self) -> Option<&VirtuallyFreeGroup> {
        match self.data() {
            GroupData::VirtuallyFree(v) => Some(v),
            _ => None,
        }
    }

    /// Rank of a free or free abelian group.
    pub fn rank(&self) -> Option<usize> {
        match self.data() {
            GroupData::Free(f) => Some(f.names.len()),
            GroupData::Abelian(a) => Some(a.names.len()),
            _ => None,
        }
    }

    pub fn order(&self) -> Option<usize> {
        self.as_finite().map(FiniteGroup::order)
    }

    pub fn generator_names(&self) -> Vec<String> {
        match self.data() {
            GroupData::Free(f) => f.names.clone(),
            GroupData::Abelian(a) => a.names.clone(),
            GroupData::Finite(f) => f.generators.iter().map(|g| g.to_string()).collect(),
            GroupData::Semidirect(s) => {
                let mut names = s.base.generator_names();
                names.push("t".into());
                names
            }
            GroupData::VirtuallyFree(v) => {
                let mut names = v.free.generator_names();
                names.extend(
                    (0..v.coset_count())
                        .filter(|&i| i != v.identity)
                        .map(|i| v.coset_names[i].clone()),
                );
                names
            }
        }
    }

    pub fn generator_count(&self) -> usize {
        match self.data() {
            GroupData::Free(f) => f.names.len(),
            GroupData::Abelian(a) => a.names.len(),
            GroupData::Finite(f) => f.generators.len(),
            GroupData::Semidirect(s) => s.base.generator_count() + 1,
            GroupData::VirtuallyFree(v) => v.rank() + v.coset_count() - 1,
        }
    }

    /// Generators in a fixed order. Semidirect products list the base
    /// generators first and `t` last; virtually free groups list the free
    /// generators followed by the non-identity coset letters.
    pub fn generators(&self) -> Vec<Element> {
        match self.data() {
            GroupData::Free(f) => (0..f.names.len())
                .map(|i| Element::Word(Word::letter(Letter::gen(i))))
                .collect(),
            GroupData::Abelian(a) => {
                let n = a.names.len();
                (0..n)
                    .map(|i| Element::Vector((0..n).map(|j| if i == j { Int::one() } else { Int::zero() }).collect()))
                    .collect()
            }
            GroupData::Finite(f) => f.generators.iter().map(|&g| Element::Table(g)).collect(),
            GroupData::Semidirect(s) => {
                let mut gens: Vec<Element> = s
                    .base
                    .generators()
                    .into_iter()
                    .map(|g| Element::semidirect(0, g))
                    .collect();
                gens.push(Element::semidirect(1, s.base.identity()));
                gens
            }
            GroupData::VirtuallyFree(v) => {
                let mut gens: Vec<Element> = (0..v.rank())
                    .map(|i| Element::Coset {
                        word: Word::letter(Letter::gen(i)),
                        coset: v.identity,
                    })
                    .collect();
                gens.extend((0..v.coset_count()).filter(|&i| i != v.identity).map(|i| Element::Coset {
                    word: Word::identity(),
                    coset: i,
                }));
                gens
            }
        }
    }

    pub fn identity(&self) -> Element {
        match self.data() {
            GroupData::Free(_) => Element::Word(Word::identity()),
            GroupData::Abelian(a) => Element::Vector(vec![Int::zero(); a.names.len()]),
            GroupData::Finite(f) => Element::Table(f.identity),
            GroupData::Semidirect(s) => Element::semidirect(0, s.base.identity()),
            GroupData::VirtuallyFree(v) => Element::Coset {
                word: Word::identity(),
                coset: v.identity,
            },
        }
    }

    pub fn is_identity(&self, g: &Element) -> bool {
        *g == self.identity()
    }

    /// Rejects elements whose payload does not belong to this group.
    pub fn check(&self, g: &Element) -> Result<()> {
        let ok = match (self.data(), g) {
            (GroupData::Free(f), Element::Word(w)) => w.max_generator().is_none_or(|m| m < f.names.len()),
            (GroupData::Abelian(a), Element::Vector(v)) => v.len() == a.names.len(),
            (GroupData::Finite(f), Element::Table(i)) => *i < f.order,
            (GroupData::Semidirect(s), Element::Semidirect { base, .. }) => return s.base.check(base),
            (GroupData::VirtuallyFree(v), Element::Coset { word, coset }) => {
                *coset < v.coset_count() && word.max_generator().is_none_or(|m| m < v.rank())
            }
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            input(format!("element {g:?} does not belong to this {} group", self.family()))
        }
    }

    pub fn mul(&self, a: &Element, b: &Element) -> Result<Element> {
        match (self.data(), a, b) {
            (GroupData::Free(_), Element::Word(x), Element::Word(y)) => {
                self.check(a)?;
                self.check(b)?;
                Ok(Element::Word(x.mul(y)))
            }
            (GroupData::Abelian(g), Element::Vector(x), Element::Vector(y)) => {
                if x.len() != g.names.len() || y.len() != g.names.len() {
                    return input("vector length does not match the rank");
                }
                Ok(Element::Vector(lattice::add(x, y)))
            }
            (GroupData::Finite(f), Element::Table(x), Element::Table(y)) => {
                if *x >= f.order || *y >= f.order {
                    return input("table index out of range");
                }
                Ok(Element::Table(f.mul(*x, *y)))
            }
            (GroupData::Semidirect(s), Element::Semidirect { t: r1, base: g }, Element::Semidirect { t: r2, base: h }) => {
                let t = r1
                    .checked_add(*r2)
                    .ok_or_else(|| Error::Overflow("t-exponent".into()))?;
                let moved = s.phi.apply_power(g, *r2)?;
                Ok(Element::semidirect(t, s.base.mul(&moved, h)?))
            }
            (GroupData::VirtuallyFree(v), Element::Coset { word: u, coset: i }, Element::Coset { word: w, coset: j }) => {
                self.check(a)?;
                self.check(b)?;
                Ok(v.mul((u, *i), (w, *j)))
            }
            _ => input(format!("cannot multiply {a:?} and {b:?} in a {} group", self.family())),
        }
    }

    pub fn inv(&self, a: &Element) -> Result<Element> {
        self.check(a)?;
        Ok(match (self.data(), a) {
            (GroupData::Free(_), Element::Word(w)) => Element::Word(w.inverse()),
            (GroupData::Abelian(_), Element::Vector(v)) => Element::Vector(lattice::neg(v)),
            (GroupData::Finite(f), Element::Table(x)) => Element::Table(f.inv(*x)),
            (GroupData::Semidirect(s), Element::Semidirect { t, base }) => {
                let nt = t.checked_neg().ok_or_else(|| Error::Overflow("t-exponent".into()))?;
                let gi = s.base.inv(base)?;
                Element::semidirect(nt, s.phi.apply_power(&gi, nt)?)
            }
            (GroupData::VirtuallyFree(v), Element::Coset { word, coset }) => v.inv((word, *coset)),
            _ => unreachable!("checked above"),
        })
    }

    pub fn mul_all<'a, I: IntoIterator<Item = &'a Element>>(&self, items: I) -> Result<Element> {
        let mut acc = self.identity();
        for x in items {
            acc = self.mul(&acc, x)?;
        }
        Ok(acc)
    }

    pub fn pow(&self, a: &Element, n: i64) -> Result<Element> {
        self.pow_big(a, &BigInt::from(n))
    }

    pub fn pow_big(&self, a: &Element, n: &BigInt) -> Result<Element> {
        if let (GroupData::Abelian(_), Element::Vector(v)) = (self.data(), a) {
            self.check(a)?;
            return Ok(Element::Vector(lattice::scale(v, n)));
        }
        if let (GroupData::Finite(f), Element::Table(_)) = (self.data(), a) {
            let reduced = n.mod_floor(&BigInt::from(f.order));
            return self.pow_big_raw(a, &reduced);
        }
        if n.is_negative() {
            let ai = self.inv(a)?;
            return self.pow_big_raw(&ai, &-n);
        }
        self.pow_big_raw(a, n)
    }

    fn pow_big_raw(&self, a: &Element, n: &BigInt) -> Result<Element> {
        let mut result = self.identity();
        let mut base = a.clone();
        let bits = n.bits();
        for i in 0..bits {
            if n.bit(i) {
                result = self.mul(&result, &base)?;
            }
            if i + 1 < bits {
                base = self.mul(&base, &base)?;
            }
        }
        Ok(result)
    }

    /// `x^-1 g x`.
    pub fn conj(&self, g: &Element, x: &Element) -> Result<Element> {
        let xi = self.inv(x)?;
        self.mul(&self.mul(&xi, g)?, x)
    }

    /// Writes `g` as a product of generator powers `(generator index, exponent)`.
    pub fn syllables(&self, g: &Element) -> Result<Vec<(usize, BigInt)>> {
        self.check(g)?;
        Ok(match (self.data(), g) {
            (GroupData::Free(_), Element::Word(w)) => letters_to_syllables(w.letters(), 0),
            (GroupData::Abelian(_), Element::Vector(v)) => v
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (i, c.clone()))
                .collect(),
            (GroupData::Finite(f), Element::Table(x)) => letters_to_syllables(f.word_of(*x), 0),
            (GroupData::Semidirect(s), Element::Semidirect { t, base }) => {
                let tgen = s.base.generator_count();
                let mut out = Vec::new();
                if *t != 0 {
                    out.push((tgen, BigInt::from(*t)));
                }
                out.extend(s.base.syllables(base)?);
                out
            }
            (GroupData::VirtuallyFree(v), Element::Coset { word, coset }) => {
                let mut out = letters_to_syllables(word.letters(), 0);
                if *coset != v.identity {
                    let pos = (0..v.coset_count())
                        .filter(|&i| i != v.identity)
                        .position(|i| i == *coset)
                        .unwrap();
                    out.push((v.rank() + pos, BigInt::one()));
                }
                out
            }
            _ => unreachable!("checked above"),
        })
    }

    /// All elements of a finite group, in table order.
    pub fn elements(&self) -> Option<Vec<Element>> {
        self.as_finite().map(|f| (0..f.order).map(Element::Table).collect())
    }

    pub fn format(&self, g: &Element) -> String {
        match (self.data(), g) {
            (GroupData::Free(f), Element::Word(w)) => w.display(&f.names).to_string(),
            (GroupData::Abelian(_), Element::Vector(v)) => {
                let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
                format!("({})", parts.join(","))
            }
            (GroupData::Finite(_), Element::Table(i)) => i.to_string(),
            (GroupData::Semidirect(s), Element::Semidirect { t, base }) => {
                format!("t^{t} : {}", s.base.format(base))
            }
            (GroupData::VirtuallyFree(v), Element::Coset { word, coset }) => {
                let names = v.free.generator_names();
                format!("{} @ {}", word.display(&names), v.coset_names[*coset])
            }
            _ => format!("{g:?}"),
        }
    }

    /// Inverse of [`Group::format`].
    pub fn parse_element(&self, text: &str) -> Result<Element> {
        let text = text.trim();
        let g = match self.data() {
            GroupData::Free(f) => Element::Word(parse_word(text, &f.names).map_err(Error::Input)?),
            GroupData::Abelian(a) => {
                let inner = text
                    .strip_prefix('(')
                    .and_then(|s| s.strip_suffix(')'))
                    .ok_or_else(|| Error::Input(format!("expected a vector like (1,0), got `{text}`")))?;
                let entries: Vec<BigInt> = inner
                    .split(',')
                    .filter(|s| !s.trim().is_empty())
                    .map(|s| s.trim().parse::<BigInt>().map_err(|_| Error::Input(format!("bad integer `{s}`"))))
                    .collect::<Result<_>>()?;
                if entries.len() != a.names.len() {
                    return input(format!("vector `{text}` has the wrong length"));
                }
                Element::Vector(entries)
            }
            GroupData::Finite(_) => Element::Table(
                text.parse()
                    .map_err(|_| Error::Input(format!("expected a table index, got `{text}`")))?,
            ),
            GroupData::Semidirect(s) => {
                let (tpart, rest) = match text.split_once(':') {
                    Some((l, r)) => (l.trim(), Some(r)),
                    None => (text, None),
                };
                let t = tpart
                    .strip_prefix("t^")
                    .and_then(|e| e.trim().parse::<i64>().ok())
                    .or_else(|| (tpart == "t").then_some(1))
                    .ok_or_else(|| Error::Input(format!("expected `t^R : BASE`, got `{text}`")))?;
                let base = match rest {
                    Some(r) => s.base.parse_element(r)?,
                    None => s.base.identity(),
                };
                Element::semidirect(t, base)
            }
            GroupData::VirtuallyFree(v) => {
                let (w, c) = match text.split_once('@') {
                    Some((l, r)) => (l.trim(), r.trim()),
                    None => (text, v.coset_names[v.identity].as_str()),
                };
                let names = v.free.generator_names();
                let word = parse_word(w, &names).map_err(Error::Input)?;
                let coset = v
                    .coset_names
                    .iter()
                    .position(|n| n == c)
                    .ok_or_else(|| Error::Input(format!("unknown coset `{c}`")))?;
                Element::Coset { word, coset }
            }
        };
        self.check(&g)?;
        Ok(g)
    }

    /// Base group of a semidirect product.
    pub fn base(&self) -> Result<&Group> {
        match self.as_semidirect() {
            Some(s) => Ok(&s.base),
            None => unsupported("not a semidirect product"),
        }
    }
}

fn letters_to_syllables(letters: &[Letter], offset: usize) -> Vec<(usize, BigInt)> {
    letters
        .iter()
        .map(|l| (offset + l.generator(), if l.is_inverse() { -BigInt::one() } else { BigInt::one() }))
        .collect()
}

impl VirtuallyFreeGroup {
    fn validate(&self, rank: usize) -> Result<()> {
        let m = self.coset_count();
        let b = |i: usize| (Word::identity(), i);
        let el = |x: Element| match x {
            Element::Coset { word, coset } => (word, coset),
            _ => unreachable!(),
        };
        for i in 0..m {
            for j in 0..m {
                let bij = el(self.mul((&b(i).0, i), (&b(j).0, j)));
                for k in 0..m {
                    let left = self.mul((&bij.0, bij.1), (&Word::identity(), k));
                    let bjk = el(self.mul((&Word::identity(), j), (&Word::identity(), k)));
                    let right = self.mul((&Word::identity(), i), (&bjk.0, bjk.1));
                    if left != right {
                        return input(format!("coset relations are not associative at ({i},{j},{k})"));
                    }
                }
                for a in 0..rank {
                    let aw = Word::letter(Letter::gen(a));
                    let left = self.mul((&bij.0, bij.1), (&aw, self.identity));
                    let bja = el(self.mul((&Word::identity(), j), (&aw, self.identity)));
                    let right = self.mul((&Word::identity(), i), (&bja.0, bja.1));
                    if left != right {
                        return input(format!("coset action is inconsistent at ({i},{j},{a})"));
                    }
                }
            }
            for a in 0..=rank {
                let w = if a == rank { Word::identity() } else { Word::letter(Letter::gen(a)) };
                let x = el(self.mul((&Word::identity(), i), (&w, self.identity)));
                let xi = el(self.inv((&x.0, x.1)));
                let one = (Word::identity(), self.identity);
                if el(self.mul((&x.0, x.1), (&xi.0, xi.1))) != one || el(self.mul((&xi.0, xi.1), (&x.0, x.1))) != one {
                    return input(format!("coset letter {i} does not act invertibly"));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::IntMatrix;

    pub(crate) fn cat_map_semidirect() -> Group {
        let z2 = Group::abelian(2);
        let a = IntMatrix::from_i64(&[&[2, 1], &[1, 1]]);
        let phi = Morphism::automorphism_from_matrix(&z2, &a).unwrap();
        Group::semidirect(z2, phi).unwrap()
    }

    #[test]
    fn free_product_cancels() {
        let f = Group::free_rank(2);
        let p = f.mul(&Element::word(&[1, 2]), &Element::word(&[-2, 1])).unwrap();
        assert_eq!(p, Element::word(&[1, 1]));
        assert_eq!(f.inv(&Element::word(&[1, 2, -1])).unwrap(), Element::word(&[1, -2, -1]));
    }

    #[test]
    fn abelian_inverse() {
        let z = Group::abelian(2);
        assert_eq!(z.inv(&Element::vector(&[3, -2])).unwrap(), Element::vector(&[-3, 2]));
    }

    #[test]
    fn semidirect_law_pushes_t_through_the_base() {
        let g = cat_map_semidirect();
        let x = Element::semidirect(0, Element::vector(&[1, 0]));
        let t = Element::semidirect(1, Element::vector(&[0, 0]));
        // (t^0,(1,0))(t^1,(0,0)) = (t^1,(1,0)A) = (t^1,(2,1))
        assert_eq!(g.mul(&x, &t).unwrap(), Element::semidirect(1, Element::vector(&[2, 1])));
        assert_eq!(g.inv(&t).unwrap(), Element::semidirect(-1, Element::vector(&[0, 0])));
        // t^-1 a t = a.phi
        for a in g.generators().into_iter().take(2) {
            let conj = g.conj(&a, &t).unwrap();
            let (_, base) = a.as_semidirect().unwrap();
            let s = g.as_semidirect().unwrap();
            assert_eq!(conj, Element::semidirect(0, s.phi.apply(base).unwrap()));
        }
    }

    #[test]
    fn identity_is_neutral_in_every_family() {
        let groups = [
            (Group::free_rank(2), Element::word(&[1, -2])),
            (Group::abelian(2), Element::vector(&[4, -1])),
            (Group::cyclic(5), Element::Table(3)),
            (cat_map_semidirect(), Element::semidirect(-2, Element::vector(&[1, 1]))),
        ];
        for (g, x) in groups {
            assert_eq!(g.mul(&g.identity(), &x).unwrap(), x);
            assert_eq!(g.mul(&x, &g.identity()).unwrap(), x);
            assert!(g.is_identity(&g.mul(&x, &g.inv(&x).unwrap()).unwrap()));
        }
    }

    #[test]
    fn mismatched_payload_is_rejected() {
        let f = Group::free_rank(2);
        assert!(matches!(f.mul(&Element::word(&[1]), &Element::vector(&[1, 0])), Err(Error::Input(_))));
        assert!(f.check(&Element::word(&[3])).is_err());
    }

    #[test]
    fn bad_tables_are_rejected() {
        // not associative: a Latin square that is not a group
        let table = vec![vec![0, 1, 2], vec![1, 0, 2], vec![2, 2, 0]];
        assert!(Group::finite(table, vec![1, 2]).is_err());
        assert!(Group::finite(vec![vec![0, 1], vec![1, 0]], vec![]).is_err());
    }

    #[test]
    fn symmetric_group_from_permutations() {
        let s3 = Group::from_permutations(&[vec![1, 0, 2], vec![1, 2, 0]]).unwrap();
        assert_eq!(s3.order(), Some(6));
        let f = s3.as_finite().unwrap();
        let (a, b) = (f.generators()[0], f.generators()[1]);
        assert_ne!(f.mul(a, b), f.mul(b, a));
    }

    #[test]
    fn format_and_parse_round_trip() {
        let g = cat_map_semidirect();
        let x = Element::semidirect(-3, Element::vector(&[2, -1]));
        assert_eq!(g.format(&x), "t^-3 : (2,-1)");
        assert_eq!(g.parse_element(&g.format(&x)).unwrap(), x);
    }
}

