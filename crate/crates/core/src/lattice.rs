//! Integer matrices, row Hermite normal form and subgroups of `Z^n`.
//!
//! Vectors are row vectors and matrices act on the right (`x -> xA`), which
//! matches how morphisms act on elements everywhere in this crate.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Int = BigInt;
pub type IntVector = Vec<BigInt>;

pub fn int(v: i64) -> Int {
    BigInt::from(v)
}

pub fn vector(entries: &[i64]) -> IntVector {
    entries.iter().map(|&e| BigInt::from(e)).collect()
}

pub fn add(a: &[Int], b: &[Int]) -> IntVector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Int], b: &[Int]) -> IntVector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn neg(a: &[Int]) -> IntVector {
    a.iter().map(|x| -x).collect()
}

pub fn scale(a: &[Int], c: &Int) -> IntVector {
    a.iter().map(|x| x * c).collect()
}

pub fn is_zero(a: &[Int]) -> bool {
    a.iter().all(Zero::is_zero)
}

/// Extended gcd: returns `(g, x, y)` with `g = ax + by >= 0`.
pub fn ext_gcd(a: &Int, b: &Int) -> (Int, Int, Int) {
    let e = a.extended_gcd(b);
    if e.gcd.is_negative() {
        (-e.gcd, -e.x, -e.y)
    } else {
        (e.gcd, e.x, e.y)
    }
}

/// Bezout coefficients for a list: `(g, c)` with `sum c_i k_i = g = gcd(k)`.
pub fn ext_gcd_list(ks: &[i64]) -> (i64, Vec<i64>) {
    let mut g = 0i64;
    let mut coeffs = vec![0i64; ks.len()];
    for (i, &k) in ks.iter().enumerate() {
        if k == 0 {
            continue;
        }
        let e = (g as i128).extended_gcd(&(k as i128));
        let (mut ng, mut x, mut y) = (e.gcd, e.x, e.y);
        if ng < 0 {
            ng = -ng;
            x = -x;
            y = -y;
        }
        for c in coeffs.iter_mut().take(i) {
            *c = (*c as i128 * x) as i64;
        }
        coeffs[i] = y as i64;
        g = ng as i64;
    }
    (g, coeffs)
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Int>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![Int::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Int::one();
        }
        m
    }

    pub fn from_rows(rows: &[IntVector]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix");
        IntMatrix {
            rows: rows.len(),
            cols,
            data: rows.iter().flatten().cloned().collect(),
        }
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let rows: Vec<IntVector> = rows.iter().map(|r| vector(r)).collect();
        Self::from_rows(&rows)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Int {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Int) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> IntVector {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn row_vectors(&self) -> Vec<IntVector> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        IntMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    /// Row vector times matrix.
    pub fn apply(&self, v: &[Int]) -> IntVector {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![Int::zero(); self.cols];
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o += vi * self.get(i, j);
            }
        }
        out
    }

    pub fn pow(&self, k: u64) -> IntMatrix {
        assert!(self.is_square());
        let mut result = Self::identity(self.rows);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    pub fn determinant(&self) -> Int {
        assert!(self.is_square());
        let n = self.rows;
        let mut m: Vec<Vec<BigRational>> = (0..n)
            .map(|i| (0..n).map(|j| BigRational::from(self.get(i, j).clone())).collect())
            .collect();
        let mut det = BigRational::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
                return Int::zero();
            };
            if p != c {
                m.swap(p, c);
                det = -det;
            }
            det *= m[c][c].clone();
            for r in c + 1..n {
                if m[r][c].is_zero() {
                    continue;
                }
                let f = m[r][c].clone() / m[c][c].clone();
                for j in c..n {
                    let v = m[c][j].clone() * f.clone();
                    m[r][j] -= v;
                }
            }
        }
        det.to_integer()
    }

    /// Inverse over the integers, if the matrix is unimodular.
    pub fn inverse(&self) -> Option<IntMatrix> {
        if !self.is_square() || !self.determinant().abs().is_one() {
            return None;
        }
        let n = self.rows;
        let mut m: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                (0..2 * n)
                    .map(|j| {
                        if j < n {
                            BigRational::from(self.get(i, j).clone())
                        } else if j - n == i {
                            BigRational::one()
                        } else {
                            BigRational::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        for c in 0..n {
            let p = (c..n).find(|&r| !m[r][c].is_zero())?;
            m.swap(p, c);
            let pivot = m[c][c].clone();
            for v in m[c].iter_mut() {
                *v /= pivot.clone();
            }
            for r in 0..n {
                if r != c && !m[r][c].is_zero() {
                    let f = m[r][c].clone();
                    for j in 0..2 * n {
                        let v = m[c][j].clone() * f.clone();
                        m[r][j] -= v;
                    }
                }
            }
        }
        let mut out = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let v = &m[i][n + j];
                if !v.is_integer() {
                    return None;
                }
                out.set(i, j, v.to_integer());
            }
        }
        Some(out)
    }

    /// Entries reduced into `0..m`.
    pub fn modulo(&self, m: u32) -> Vec<Vec<u32>> {
        let mm = BigInt::from(m);
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| u32::try_from(self.get(i, j).mod_floor(&mm)).unwrap())
                    .collect()
            })
            .collect()
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

/// Result of a row-style Hermite reduction with the transform recorded.
pub struct HermiteForm {
    /// Nonzero rows of the echelon form.
    pub basis: Vec<IntVector>,
    /// Unimodular `U` with `U * input = [basis; 0]`.
    pub transform: Vec<IntVector>,
    pub pivots: Vec<usize>,
}

/// Row Hermite normal form: pivots move right row by row, are positive, and
/// entries above each pivot lie in `0..pivot`.
pub fn hermite(rows: &[IntVector], dim: usize) -> HermiteForm {
    let k = rows.len();
    let mut m: Vec<IntVector> = rows.to_vec();
    let mut u: Vec<IntVector> = (0..k)
        .map(|i| (0..k).map(|j| if i == j { Int::one() } else { Int::zero() }).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..dim {
        if r == k {
            break;
        }
        let Some(first) = (r..k).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, first);
        u.swap(r, first);
        for i in r + 1..k {
            if m[i][c].is_zero() {
                continue;
            }
            let a = m[r][c].clone();
            let b = m[i][c].clone();
            let (g, x, y) = ext_gcd(&a, &b);
            let (ag, bg) = (&a / &g, &b / &g);
            combine_rows(&mut m, r, i, &x, &y, &bg, &ag);
            combine_rows(&mut u, r, i, &x, &y, &bg, &ag);
        }
        if m[r][c].is_negative() {
            m[r] = neg(&m[r]);
            u[r] = neg(&u[r]);
        }
        let p = m[r][c].clone();
        for i in 0..r {
            let q = m[i][c].div_floor(&p);
            if !q.is_zero() {
                m[i] = sub(&m[i], &scale(&m[r], &q));
                u[i] = sub(&u[i], &scale(&u[r], &q));
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    HermiteForm {
        basis: m,
        transform: u,
        pivots,
    }
}

// rows (r, i) <- (x*row_r + y*row_i, -b'*row_r + a'*row_i)
fn combine_rows(m: &mut [IntVector], r: usize, i: usize, x: &Int, y: &Int, bg: &Int, ag: &Int) {
    let row_r = m[r].clone();
    let row_i = m[i].clone();
    m[r] = add(&scale(&row_r, x), &scale(&row_i, y));
    m[i] = sub(&scale(&row_i, ag), &scale(&row_r, bg));
}

/// Solves `x * M = target` over the integers, where `M` is given by rows.
/// Returns `Err(residue)` with the canonical residue of `target` modulo the
/// row lattice when no solution exists.
pub fn solve_left(rows: &[IntVector], dim: usize, target: &[Int]) -> Result<IntVector, IntVector> {
    let h = hermite(rows, dim);
    let lattice = Lattice {
        dim,
        basis: h.basis.clone(),
        pivots: h.pivots.clone(),
    };
    let (coords, residue) = lattice.decompose(target);
    if !is_zero(&residue) {
        return Err(residue);
    }
    let mut x = vec![Int::zero(); rows.len()];
    for (c, urow) in coords.iter().zip(&h.transform) {
        if c.is_zero() {
            continue;
        }
        x = add(&x, &scale(urow, c));
    }
    Ok(x)
}

/// A subgroup of `Z^n`, stored by its canonical row Hermite basis.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Lattice {
    dim: usize,
    basis: Vec<IntVector>,
    pivots: Vec<usize>,
}

impl Lattice {
    pub fn from_generators(dim: usize, gens: &[IntVector]) -> Self {
        let h = hermite(gens, dim);
        Lattice {
            dim,
            basis: h.basis,
            pivots: h.pivots,
        }
    }

    pub fn zero(dim: usize) -> Self {
        Lattice {
            dim,
            basis: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(dim: usize) -> Self {
        let gens: Vec<IntVector> = (0..dim)
            .map(|i| (0..dim).map(|j| if i == j { Int::one() } else { Int::zero() }).collect())
            .collect();
        Self::from_generators(dim, &gens)
    }

    /// `m Z^n`.
    pub fn scaled(dim: usize, m: i64) -> Self {
        let gens: Vec<IntVector> = (0..dim)
            .map(|i| (0..dim).map(|j| if i == j { int(m) } else { Int::zero() }).collect())
            .collect();
        Self::from_generators(dim, &gens)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[IntVector] {
        &self.basis
    }

    /// Coordinates along the basis and the canonical residue of `v`.
    pub fn decompose(&self, v: &[Int]) -> (IntVector, IntVector) {
        let mut v = v.to_vec();
        let mut coords = Vec::with_capacity(self.basis.len());
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            let q = v[p].div_floor(&row[p]);
            if !q.is_zero() {
                v = sub(&v, &scale(row, &q));
            }
            coords.push(q);
        }
        (coords, v)
    }

    /// Canonical representative of `v + L`.
    pub fn reduce(&self, v: &[Int]) -> IntVector {
        self.decompose(v).1
    }

    pub fn contains(&self, v: &[Int]) -> bool {
        is_zero(&self.reduce(v))
    }

    pub fn contains_lattice(&self, other: &Lattice) -> bool {
        other.basis.iter().all(|b| self.contains(b))
    }

    pub fn sum(&self, other: &Lattice) -> Lattice {
        let mut gens = self.basis.clone();
        gens.extend(other.basis.iter().cloned());
        Self::from_generators(self.dim, &gens)
    }

    pub fn intersect(&self, other: &Lattice) -> Lattice {
        // Kernel vectors (a, b) of [B1; -B2] give a*B1 = b*B2 in both lattices.
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().map(|b| neg(b)));
        let h = hermite(&rows, self.dim);
        let r1 = self.basis.len();
        let gens: Vec<IntVector> = h.transform[h.basis.len()..]
            .iter()
            .map(|u| {
                let mut acc = vec![Int::zero(); self.dim];
                for (c, b) in u[..r1].iter().zip(&self.basis) {
                    if !c.is_zero() {
                        acc = add(&acc, &scale(b, c));
                    }
                }
                acc
            })
            .collect();
        Self::from_generators(self.dim, &gens)
    }

    /// Image under `x -> xA`.
    pub fn image(&self, a: &IntMatrix) -> Lattice {
        let gens: Vec<IntVector> = self.basis.iter().map(|b| a.apply(b)).collect();
        Self::from_generators(a.cols(), &gens)
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank() == self.dim
    }

    /// `[Z^n : L]`, if finite.
    pub fn index(&self) -> Option<Int> {
        if !self.is_full_rank() {
            return None;
        }
        Some(
            self.basis
                .iter()
                .zip(&self.pivots)
                .map(|(row, &p)| row[p].clone())
                .product(),
        )
    }

    /// Exponent of `Z^n / L`: the least `m > 0` with `m Z^n` inside `L`.
    pub fn exponent(&self) -> Option<Int> {
        if !self.is_full_rank() {
            return None;
        }
        let n = self.dim;
        let mut m = Int::one();
        for i in 0..n {
            // Solve c * B = e_i over Q; the order of e_i is the lcm of the
            // denominators of c.
            let mut target: Vec<BigRational> = (0..n)
                .map(|j| if i == j { BigRational::one() } else { BigRational::zero() })
                .collect();
            let mut order = Int::one();
            for (row, &p) in self.basis.iter().zip(&self.pivots) {
                let c = target[p].clone() / BigRational::from(row[p].clone());
                order = order.lcm(c.denom());
                for (t, r) in target.iter_mut().zip(row) {
                    *t -= c.clone() * BigRational::from(r.clone());
                }
            }
            m = m.lcm(&order);
        }
        Some(m)
    }
}

impl fmt::Debug for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Lattice{:?}", IntMatrix::from_rows(&self.basis))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_square() {
        let a = IntMatrix::from_i64(&[&[2, 1], &[1, 1]]);
        assert_eq!(a.pow(2), IntMatrix::from_i64(&[&[5, 3], &[3, 2]]));
        assert_eq!(a.apply(&vector(&[1, 0])), vector(&[2, 1]));
    }

    #[test]
    fn unimodular_inverse() {
        let a = IntMatrix::from_i64(&[&[2, 1], &[1, 1]]);
        assert_eq!(a.inverse().unwrap(), IntMatrix::from_i64(&[&[1, -1], &[-1, 2]]));
        assert!(IntMatrix::from_i64(&[&[2]]).inverse().is_none());
        assert_eq!(a.determinant(), int(1));
    }

    #[test]
    fn hermite_is_canonical() {
        let l1 = Lattice::from_generators(2, &[vector(&[1, 2]), vector(&[0, 3])]);
        // unimodular transform of the same generators
        let l2 = Lattice::from_generators(2, &[vector(&[1, 5]), vector(&[2, 7])]);
        assert_eq!(l1, l2);
        assert_eq!(l1.basis(), &[vector(&[1, 2]), vector(&[0, 3])]);
    }

    #[test]
    fn membership() {
        let l = Lattice::from_generators(2, &[vector(&[1, 2])]);
        assert!(l.contains(&vector(&[2, 4])));
        assert!(!l.contains(&vector(&[2, 3])));
    }

    #[test]
    fn solve_with_transform() {
        // x (A - I) = (0, 3) for A = [[1,1],[0,1]]
        let rows = vec![vector(&[0, 1]), vector(&[0, 0])];
        let x = solve_left(&rows, 2, &vector(&[0, 3])).unwrap();
        assert_eq!(IntMatrix::from_rows(&rows).apply(&x), vector(&[0, 3]));
        assert!(solve_left(&rows, 2, &vector(&[1, 0])).is_err());
    }

    #[test]
    fn intersection_and_exponent() {
        let a = Lattice::from_generators(2, &[vector(&[2, 0]), vector(&[0, 1])]);
        let b = Lattice::from_generators(2, &[vector(&[3, 0]), vector(&[0, 2])]);
        let c = a.intersect(&b);
        assert_eq!(c, Lattice::from_generators(2, &[vector(&[6, 0]), vector(&[0, 2])]));
        assert_eq!(c.index(), Some(int(12)));
        assert_eq!(c.exponent(), Some(int(6)));
        let skew = Lattice::from_generators(2, &[vector(&[1, 1]), vector(&[0, 4])]);
        assert_eq!(skew.exponent(), Some(int(4)));
    }

    #[test]
    fn bezout_list() {
        let (g, c) = ext_gcd_list(&[4, 6, 9]);
        assert_eq!(g, 1);
        assert_eq!(c[0] * 4 + c[1] * 6 + c[2] * 9, 1);
        assert_eq!(ext_gcd_list(&[0, 0]).0, 0);
        let (g, c) = ext_gcd_list(&[-2, 0]);
        assert_eq!((g, c[0] * -2), (2, 2));
    }
}
