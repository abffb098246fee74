//! Seeded fixtures shared by the benchmarks.

use genconj::lattice::{vector, IntVector};
use genconj::{Element, Group, IntMatrix, Letter, Morphism, Target, Word};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_word(rng: &mut impl Rng, rank: usize, len: usize) -> Word {
    Word::new((0..len).map(|_| Letter::new(rng.gen_range(0..rank), rng.gen_bool(0.5))))
}

/// `count` random generators of length `len` in `F_rank`.
pub fn subgroup_generators(seed: u64, rank: usize, count: usize, len: usize) -> Vec<Word> {
    let mut r = rng(seed);
    (0..count).map(|_| random_word(&mut r, rank, len)).collect()
}

/// A word and a conjugate of it by a word of length `len / 2`.
pub fn conjugate_pair(seed: u64, len: usize) -> (Element, Element) {
    let mut r = rng(seed);
    let u = random_word(&mut r, 2, len);
    let x = random_word(&mut r, 2, len / 2);
    let v = u.rotate(len / 3).conjugate_by(&x);
    (Element::Word(u), Element::Word(v))
}

pub fn cat_map() -> Morphism {
    let z2 = Group::abelian(2);
    Morphism::automorphism_from_matrix(&z2, &IntMatrix::from_i64(&[&[2, 1], &[1, 1]])).unwrap()
}

/// Integer matrix rows with entries in `-bound..=bound`.
pub fn random_rows(seed: u64, rows: usize, cols: usize, bound: i64) -> Vec<IntVector> {
    let mut r = rng(seed);
    (0..rows)
        .map(|_| vector(&(0..cols).map(|_| r.gen_range(-bound..=bound)).collect::<Vec<_>>()))
        .collect()
}

/// `Z^2 x| Z` for the shear `[[1,1],[0,1]]`.
pub fn heisenberg() -> Group {
    let z2 = Group::abelian(2);
    let phi = Morphism::automorphism_from_matrix(&z2, &IntMatrix::from_i64(&[&[1, 1], &[0, 1]])).unwrap();
    Group::semidirect(z2, phi).unwrap()
}

/// `t` against the coset `t(1,0) <(2,0), (0,1)>`, refuted mod 2.
pub fn parity_obstruction(g: &Group) -> (Element, Target) {
    let el = |t, a, b| Element::semidirect(t, Element::vector(&[a, b]));
    let target = Target::coset(g, el(1, 1, 0), &[el(0, 2, 0), el(0, 0, 1)]).unwrap();
    (el(1, 0, 0), target)
}
