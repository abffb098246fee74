//! Conjugacy into a coset for `Z^n x|_A Z` by racing two semi-decisions:
//! conjugators from growing balls on one side, finite quotients on the
//! other. In a quotient `pi`, if no element of `(bH)pi` is conjugate to
//! `a pi` then no element of `bH` is conjugate to `a`.
//!
//! Quotients are the congruence images `(Z/m)^n x| Z/d` with `A^d = I mod m`
//! and, optionally, homomorphisms onto a few small permutation groups.

use std::collections::{HashSet, VecDeque};

use num_traits::ToPrimitive;

use crate::error::{input, Error, Result};
use crate::group::{Element, Family, Group};
use crate::lattice::{Int, IntMatrix};
use crate::problem::ProblemInstance;
use crate::solvers::finite;
use crate::target::{Subgroup, Target};
use crate::verdict::{Budget, Outcome, QuotientSpec, Refutation, Stats, Verdict, Witness};

fn semidirect_parts(g: &Element) -> Result<(i64, &[Int])> {
    match g.as_semidirect() {
        Some((t, b)) => match b.as_vector() {
            Some(v) => Ok((t, v)),
            None => input("expected an element of Z^n x| Z"),
        },
        None => input("expected an element of Z^n x| Z"),
    }
}

fn residue(c: &Int, m: u64) -> u64 {
    let m = Int::from(m);
    (((c % &m) + &m) % &m).to_u64().unwrap()
}

/// `(Z/m)^n x|_A Z/d`, elements encoded as `s * m^n + sum v_i m^i`.
#[derive(Clone, Debug)]
pub struct Congruence {
    modulus: u64,
    period: u64,
    n: usize,
    /// `A^s mod m` for `s < d`.
    powers: Vec<Vec<Vec<u64>>>,
}

impl Congruence {
    /// `None` unless `A^d = I mod m`.
    pub fn new(a: &IntMatrix, modulus: u64, period: u64) -> Option<Congruence> {
        let n = a.rows();
        let am: Vec<Vec<u64>> = (0..n).map(|i| (0..n).map(|j| residue(a.get(i, j), modulus)).collect()).collect();
        let identity: Vec<Vec<u64>> = (0..n).map(|i| (0..n).map(|j| u64::from(i == j) % modulus).collect()).collect();
        let mut powers = vec![identity.clone()];
        for _ in 1..=period {
            let last = powers.last().unwrap();
            let next = (0..n)
                .map(|i| (0..n).map(|j| (0..n).map(|k| last[i][k] * am[k][j]).sum::<u64>() % modulus).collect())
                .collect();
            powers.push(next);
        }
        if powers.pop().unwrap() != identity {
            return None;
        }
        Some(Congruence {
            modulus,
            period,
            n,
            powers,
        })
    }

    fn block(&self) -> usize {
        (self.modulus as usize).pow(self.n as u32)
    }

    pub fn size(&self) -> usize {
        self.block() * self.period as usize
    }

    fn decode(&self, x: usize) -> (u64, Vec<u64>) {
        let block = self.block();
        let mut rest = x % block;
        let v = (0..self.n)
            .map(|_| {
                let c = rest as u64 % self.modulus;
                rest /= self.modulus as usize;
                c
            })
            .collect();
        ((x / block) as u64, v)
    }

    fn encode(&self, s: u64, v: &[u64]) -> usize {
        let mut code = 0usize;
        for c in v.iter().rev() {
            code = code * self.modulus as usize + *c as usize;
        }
        (s as usize) * self.block() + code
    }

    fn act(&self, v: &[u64], s: u64) -> Vec<u64> {
        let p = &self.powers[s as usize];
        (0..self.n)
            .map(|j| (0..self.n).map(|i| v[i] * p[i][j]).sum::<u64>() % self.modulus)
            .collect()
    }

    fn mul(&self, x: usize, y: usize) -> usize {
        let (s1, v1) = self.decode(x);
        let (s2, v2) = self.decode(y);
        let w: Vec<u64> = self.act(&v1, s2).iter().zip(&v2).map(|(a, b)| (a + b) % self.modulus).collect();
        self.encode((s1 + s2) % self.period, &w)
    }

    fn inv(&self, x: usize) -> usize {
        let (s, v) = self.decode(x);
        let back = (self.period - s) % self.period;
        let w: Vec<u64> = self.act(&v, back).iter().map(|c| (self.modulus - c) % self.modulus).collect();
        self.encode(back, &w)
    }

    fn image(&self, g: &Element) -> Result<usize> {
        let (t, v) = semidirect_parts(g)?;
        let s = t.rem_euclid(self.period as i64) as u64;
        let v: Vec<u64> = v.iter().map(|c| residue(c, self.modulus)).collect();
        Ok(self.encode(s, &v))
    }
}

/// A homomorphism onto a finite group given by its table and the images of
/// the base generators and `t`.
#[derive(Clone, Debug)]
pub struct Explicit {
    name: String,
    table: Vec<Vec<usize>>,
    inverse: Vec<usize>,
    identity: usize,
    images: Vec<usize>,
}

impl Explicit {
    fn pow(&self, x: usize, e: &Int) -> usize {
        let mut k = 0usize;
        let mut y = self.identity;
        // order of x
        loop {
            y = self.table[y][x];
            k += 1;
            if y == self.identity {
                break;
            }
        }
        let r = residue(e, k as u64) as usize;
        (0..r).fold(self.identity, |acc, _| self.table[acc][x])
    }

    fn image(&self, g: &Element) -> Result<usize> {
        let (t, v) = semidirect_parts(g)?;
        let n = v.len();
        let mut x = self.pow(self.images[n], &Int::from(t));
        for (i, c) in v.iter().enumerate() {
            x = self.table[x][self.pow(self.images[i], c)];
        }
        Ok(x)
    }
}

#[derive(Clone, Debug)]
pub enum Quotient {
    Congruence(Congruence),
    Explicit(Explicit),
}

impl Quotient {
    pub fn spec(&self) -> QuotientSpec {
        match self {
            Quotient::Congruence(c) => QuotientSpec::Congruence {
                modulus: c.modulus,
                period: c.period,
            },
            Quotient::Explicit(e) => QuotientSpec::Explicit {
                name: e.name.clone(),
                order: e.table.len(),
            },
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Quotient::Congruence(c) => c.size(),
            Quotient::Explicit(e) => e.table.len(),
        }
    }

    fn identity(&self) -> usize {
        match self {
            Quotient::Congruence(_) => 0,
            Quotient::Explicit(e) => e.identity,
        }
    }

    fn mul(&self, x: usize, y: usize) -> usize {
        match self {
            Quotient::Congruence(c) => c.mul(x, y),
            Quotient::Explicit(e) => e.table[x][y],
        }
    }

    fn inv(&self, x: usize) -> usize {
        match self {
            Quotient::Congruence(c) => c.inv(x),
            Quotient::Explicit(e) => e.inverse[x],
        }
    }

    fn image(&self, g: &Element) -> Result<usize> {
        match self {
            Quotient::Congruence(c) => c.image(g),
            Quotient::Explicit(e) => e.image(g),
        }
    }
}

fn matrix_of(group: &Group) -> Result<&IntMatrix> {
    group
        .as_semidirect()
        .filter(|s| s.base.family() == Family::Abelian)
        .and_then(|s| s.phi.matrix())
        .ok_or_else(|| Error::Input("expected a group Z^n x|_A Z".into()))
}

/// Congruence quotients `(m, d)` in increasing size `m^n d`, with `d` the
/// order of `A mod m` and its double and triple, up to the size budget.
pub fn enumerate_quotients(group: &Group, budget: &Budget) -> Result<Vec<Quotient>> {
    let a = matrix_of(group)?;
    let n = a.rows() as u32;
    let cap = budget.max_quotient_size;
    let mut out = Vec::new();
    let mut m = 2u64;
    while m.checked_pow(n).is_some_and(|b| b <= cap) {
        let block = m.pow(n);
        let mut found = None;
        for d in 1..=cap / block {
            if let Some(c) = Congruence::new(a, m, d) {
                found = Some(c);
                break;
            }
        }
        if let Some(c) = found {
            let d = c.period;
            out.push(c);
            for mult in [2, 3] {
                if block * d * mult <= cap {
                    out.push(Congruence::new(a, m, d * mult).unwrap());
                }
            }
        }
        m += 1;
    }
    out.sort_by_key(|c| (c.size(), c.modulus, c.period));
    Ok(out.into_iter().map(Quotient::Congruence).collect())
}

/// Small permutation groups used by the generic fallback.
fn library() -> Vec<(&'static str, Vec<Vec<usize>>)> {
    let cyc = |n: usize| (0..n).map(|i| (i + 1) % n).collect::<Vec<_>>();
    vec![
        ("C2", vec![cyc(2)]),
        ("C3", vec![cyc(3)]),
        ("C4", vec![cyc(4)]),
        ("C5", vec![cyc(5)]),
        ("V4", vec![vec![1, 0, 3, 2], vec![2, 3, 0, 1]]),
        ("S3", vec![vec![1, 0, 2], cyc(3)]),
        ("D4", vec![cyc(4), vec![0, 3, 2, 1]]),
        ("A4", vec![vec![1, 2, 0, 3], vec![0, 2, 3, 1]]),
        ("S4", vec![vec![1, 0, 2, 3], cyc(4)]),
    ]
}

/// All homomorphisms from `Z^n x|_A Z` to the library groups.
pub fn generic_quotients(group: &Group) -> Result<Vec<Quotient>> {
    let a = matrix_of(group)?;
    let n = a.rows();
    let mut out = Vec::new();
    for (name, perms) in library() {
        let g = Group::from_permutations(&perms)?;
        let f = g.as_finite().unwrap();
        let order = f.order();
        let table = f.table_rows();
        let inverse: Vec<usize> = (0..order).map(|x| f.inv(x)).collect();
        let mut images = vec![0usize; n + 1];
        let total = order.pow(n as u32 + 1);
        for code in 0..total {
            let mut c = code;
            for slot in images.iter_mut() {
                *slot = c % order;
                c /= order;
            }
            let probe = Explicit {
                name: String::new(),
                table: table.clone(),
                inverse: inverse.clone(),
                identity: f.identity(),
                images: images.clone(),
            };
            if !respects_relations(&probe, a) {
                continue;
            }
            let label = images.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
            out.push(Quotient::Explicit(Explicit {
                name: format!("{name}[{label}]"),
                ..probe
            }));
        }
    }
    Ok(out)
}

fn respects_relations(e: &Explicit, a: &IntMatrix) -> bool {
    let n = a.rows();
    let t = e.images[n];
    for i in 0..n {
        for j in 0..n {
            if e.table[e.images[i]][e.images[j]] != e.table[e.images[j]][e.images[i]] {
                return false;
            }
        }
        // t^-1 e_i t = e_i A
        let lhs = e.table[e.table[e.inverse[t]][e.images[i]]][t];
        let mut rhs = e.identity;
        for j in 0..n {
            rhs = e.table[rhs][e.pow(e.images[j], a.get(i, j))];
        }
        if lhs != rhs {
            return false;
        }
    }
    true
}

/// Rebuilds a quotient from its spec, for replaying refutations.
pub fn quotient_from_spec(group: &Group, spec: &QuotientSpec) -> Result<Quotient> {
    match spec {
        QuotientSpec::Congruence { modulus, period } => Congruence::new(matrix_of(group)?, *modulus, *period)
            .map(Quotient::Congruence)
            .ok_or_else(|| Error::Input(format!("A^{period} is not the identity mod {modulus}"))),
        QuotientSpec::Explicit { name, .. } => generic_quotients(group)?
            .into_iter()
            .find(|q| matches!(q, Quotient::Explicit(e) if &e.name == name))
            .ok_or_else(|| Error::Input(format!("unknown quotient {name}"))),
    }
}

/// The combined quotient so far and the number of surviving candidates.
#[derive(Clone, Debug, Default)]
pub struct CandidateState {
    pub factors: Vec<Quotient>,
    /// Order of the image of the group in the product of the factors.
    pub order: usize,
    /// Elements of the image of `bH` conjugate to the image of `a`.
    pub candidates: usize,
}

impl CandidateState {
    pub fn specs(&self) -> Vec<QuotientSpec> {
        self.factors.iter().map(Quotient::spec).collect()
    }

    pub fn is_refuted(&self) -> bool {
        !self.factors.is_empty() && self.candidates == 0
    }

    /// `|S| / |Q|`; 1 before any refinement.
    pub fn density(&self) -> f64 {
        if self.factors.is_empty() {
            1.0
        } else {
            self.candidates as f64 / self.order as f64
        }
    }
}

/// A GCP instance `a ~ bH` (or a union of such cosets) in `Z^n x|_A Z`.
#[derive(Clone, Debug)]
pub struct CosetProblem {
    group: Group,
    subject: Element,
    cosets: Vec<(Element, Vec<Element>)>,
    target: Target,
}

type Tuple = Vec<usize>;

impl CosetProblem {
    pub fn new(group: &Group, subject: &Element, target: &Target) -> Result<CosetProblem> {
        matrix_of(group)?;
        group.check(subject)?;
        let gens = |h: &Subgroup| match h {
            Subgroup::Semidirect(s) => Ok(s.generators().to_vec()),
            _ => input("expected a subgroup of the semidirect product"),
        };
        let cosets = match target {
            Target::Finite(elems) => elems.iter().map(|e| (e.clone(), Vec::new())).collect(),
            Target::Subgroup(h) => vec![(group.identity(), gens(h)?)],
            Target::Coset { rep, subgroup } => vec![(rep.clone(), gens(subgroup)?)],
        };
        Ok(CosetProblem {
            group: group.clone(),
            subject: subject.clone(),
            cosets,
            target: target.clone(),
        })
    }

    fn tuple(&self, factors: &[Quotient], g: &Element) -> Result<Tuple> {
        factors.iter().map(|q| q.image(g)).collect()
    }

    fn closure(factors: &[Quotient], gens: &[Tuple], cap: usize) -> Option<HashSet<Tuple>> {
        let id: Tuple = factors.iter().map(Quotient::identity).collect();
        let mut seen = HashSet::from([id.clone()]);
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for g in gens {
                let y: Tuple = factors.iter().enumerate().map(|(i, q)| q.mul(x[i], g[i])).collect();
                if seen.insert(y.clone()) {
                    if seen.len() > cap {
                        return None;
                    }
                    queue.push_back(y);
                }
            }
        }
        Some(seen)
    }

    /// `(|Q|, |S|)` for the given factors, `None` when over `cap`.
    fn evaluate(&self, factors: &[Quotient], cap: usize) -> Result<Option<(usize, usize)>> {
        let gens: Vec<Tuple> = self
            .group
            .generators()
            .iter()
            .map(|g| self.tuple(factors, g))
            .collect::<Result<_>>()?;
        let Some(q) = Self::closure(factors, &gens, cap) else {
            return Ok(None);
        };
        let inv = |x: &Tuple| -> Tuple { factors.iter().enumerate().map(|(i, f)| f.inv(x[i])).collect() };
        let mul = |x: &Tuple, y: &Tuple| -> Tuple { factors.iter().enumerate().map(|(i, f)| f.mul(x[i], y[i])).collect() };
        // conjugacy class of the image of a
        let a = self.tuple(factors, &self.subject)?;
        let mut class = HashSet::from([a.clone()]);
        let mut queue = VecDeque::from([a]);
        while let Some(x) = queue.pop_front() {
            for g in &gens {
                let y = mul(&mul(&inv(g), &x), g);
                if class.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
        let mut cosets = Vec::new();
        for (rep, hgens) in &self.cosets {
            let hs: Vec<Tuple> = hgens.iter().map(|h| self.tuple(factors, h)).collect::<Result<_>>()?;
            let p = Self::closure(factors, &hs, cap).expect("a subgroup of Q is no larger than Q");
            cosets.push((inv(&self.tuple(factors, rep)?), p));
        }
        let survivors = class
            .iter()
            .filter(|x| cosets.iter().any(|(bi, p)| p.contains(&mul(bi, x))))
            .count();
        Ok(Some((q.len(), survivors)))
    }

    /// Refines `state` by `q`: first `q` alone, then combined with the
    /// earlier factors, dropping the oldest while the product is too large.
    pub fn no_side_refine(&self, state: &CandidateState, q: Quotient, cap: usize) -> Result<CandidateState> {
        if let Some((order, 0)) = self.evaluate(std::slice::from_ref(&q), cap)? {
            return Ok(CandidateState {
                factors: vec![q],
                order,
                candidates: 0,
            });
        }
        let mut factors = state.factors.clone();
        factors.push(q);
        loop {
            if let Some((order, candidates)) = self.evaluate(&factors, cap)? {
                return Ok(CandidateState {
                    factors,
                    order,
                    candidates,
                });
            }
            if factors.len() == 1 {
                return Ok(state.clone());
            }
            factors.remove(0);
        }
    }

    /// Tests every conjugator in `layer`.
    fn test_layer(&self, layer: &[Element]) -> Result<Option<Witness>> {
        for x in layer {
            let y = self.group.conj(&self.subject, x)?;
            if self.target.member(&self.group, &y)? {
                return Ok(Some(Witness::conjugator(x.clone(), y)));
            }
        }
        Ok(None)
    }

    /// Tests `x^-1 a x` for every `x` of word length at most `radius`.
    pub fn yes_side_step(&self, radius: usize) -> Result<Option<Witness>> {
        let mut ball = Ball::new(&self.group)?;
        if let Some(w) = self.test_layer(&ball.frontier.clone())? {
            return Ok(Some(w));
        }
        for _ in 0..radius {
            let layer = ball.grow()?;
            if let Some(w) = self.test_layer(&layer)? {
                return Ok(Some(w));
            }
        }
        Ok(None)
    }

    /// Whether the recorded quotients still leave no candidate.
    pub fn replay(&self, specs: &[QuotientSpec], cap: usize) -> Result<bool> {
        let factors = specs
            .iter()
            .map(|s| quotient_from_spec(&self.group, s))
            .collect::<Result<Vec<_>>>()?;
        Ok(matches!(self.evaluate(&factors, cap)?, Some((_, 0))))
    }
}

/// Word-metric ball grown one layer at a time.
struct Ball {
    group: Group,
    generators: Vec<Element>,
    seen: HashSet<Element>,
    frontier: Vec<Element>,
}

impl Ball {
    fn new(group: &Group) -> Result<Ball> {
        let mut generators = group.generators();
        for g in group.generators() {
            generators.push(group.inv(&g)?);
        }
        let id = group.identity();
        Ok(Ball {
            group: group.clone(),
            generators,
            seen: HashSet::from([id.clone()]),
            frontier: vec![id],
        })
    }

    fn grow(&mut self) -> Result<Vec<Element>> {
        let mut next = Vec::new();
        for x in &self.frontier {
            for g in &self.generators {
                let y = self.group.mul(x, g)?;
                if self.seen.insert(y.clone()) {
                    next.push(y);
                }
            }
        }
        self.frontier = next.clone();
        Ok(next)
    }
}

/// Races conjugator search against quotient refinement, one ball layer and
/// one quotient per round.
pub fn decide_gcp_coset(inst: &ProblemInstance, budget: &Budget) -> Result<Verdict> {
    if inst.group.family() == Family::Finite {
        return finite::exhaustive(&inst.generalized());
    }
    let problem = CosetProblem::new(&inst.group, &inst.subject, &inst.target)?;
    let cap = budget.max_quotient_size as usize;
    let mut quotients: VecDeque<Quotient> = enumerate_quotients(&inst.group, budget)?.into();
    let mut fallback = budget.generic_quotients;
    let mut state = CandidateState::default();
    let mut ball = Ball::new(&inst.group)?;
    let mut stats = Stats::default();
    let finish = |outcome, stats: &Stats| Ok(Verdict { outcome, stats: stats.clone() });
    if let Some(w) = problem.test_layer(&ball.frontier.clone())? {
        stats.steps += 1;
        return finish(Outcome::Yes(w), &stats);
    }
    let mut radius = 0;
    loop {
        let mut progressed = false;
        if radius < budget.max_radius {
            radius += 1;
            stats.radius = radius;
            let layer = ball.grow()?;
            stats.steps += layer.len() as u64;
            progressed = true;
            if let Some(w) = problem.test_layer(&layer)? {
                return finish(Outcome::Yes(w), &stats);
            }
        }
        if quotients.is_empty() && fallback {
            quotients.extend(generic_quotients(&inst.group)?);
            fallback = false;
        }
        if let Some(q) = quotients.pop_front() {
            stats.steps += q.size() as u64;
            stats.quotients += 1;
            progressed = true;
            state = problem.no_side_refine(&state, q, cap)?;
            if state.is_refuted() {
                return finish(
                    Outcome::No(Refutation::QuotientObstruction {
                        quotients: state.specs(),
                    }),
                    &stats,
                );
            }
        }
        if !progressed || stats.steps > budget.max_steps {
            let reason = format!(
                "no conjugator within radius {radius} and no obstruction in {} quotients",
                stats.quotients
            );
            let steps = stats.steps;
            let mut v = Verdict::unknown(steps, reason);
            v.stats = stats;
            return Ok(v);
        }
    }
}
