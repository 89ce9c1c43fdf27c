//! Permutation groups on `{0, …, n-1}`: orbits, 2-transitivity, transposition
//! search and a Schreier–Sims order computation.
//!
//! A 2-transitive group containing a transposition is the full symmetric
//! group; [`certify_symmetric`] checks exactly these three properties.

use std::collections::VecDeque;
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use rand::Rng;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Convention: `(a * b)(x) = b(a(x))`, i.e. apply `a` first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::Domain(format!("{images:?} is not a permutation of 0..{n}")));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(n: usize) -> Self {
        Permutation { images: (0..n).collect() }
    }

    /// Builds a permutation of degree `n` from disjoint cycles.
    pub fn from_cycles(n: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut images: Vec<usize> = (0..n).collect();
        let mut touched = vec![false; n];
        for cycle in cycles {
            for (k, &a) in cycle.iter().enumerate() {
                if a >= n || touched[a] {
                    return Err(Error::Domain(format!("invalid cycle {cycle:?} on {n} points")));
                }
                touched[a] = true;
                images[a] = cycle[(k + 1) % cycle.len()];
            }
        }
        Self::new(images)
    }

    /// The transposition `(a b)`.
    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut images: Vec<usize> = (0..n).collect();
        images.swap(a, b);
        Permutation { images }
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation { images: self.images.iter().map(|&i| other.images[i]).collect() }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.degree()];
        for (i, &j) in self.images.iter().enumerate() {
            inv[j] = i;
        }
        Permutation { images: inv }
    }

    pub fn pow(&self, mut k: u64) -> Permutation {
        let mut base = self.clone();
        let mut acc = Permutation::identity(self.degree());
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.then(&base);
            }
            base = base.then(&base);
            k >>= 1;
        }
        acc
    }

    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.degree()];
        let mut out = Vec::new();
        for start in 0..self.degree() {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut j = self.images[start];
            while j != start {
                seen[j] = true;
                cycle.push(j);
                j = self.images[j];
            }
            out.push(cycle);
        }
        out
    }

    /// Cycle lengths in decreasing order, fixed points included.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        t.sort_unstable_by(|a, b| b.cmp(a));
        t
    }

    /// Cycle type `(2, 1^{n-2})`.
    pub fn is_transposition(&self) -> bool {
        self.moved_points().len() == 2
    }

    pub fn moved_points(&self) -> Vec<usize> {
        (0..self.degree()).filter(|&i| self.images[i] != i).collect()
    }

    pub fn order(&self) -> BigUint {
        self.cycles().iter().fold(BigUint::one(), |acc, c| acc.lcm(&BigUint::from(c.len())))
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles: Vec<_> = self.cycles().into_iter().filter(|c| c.len() > 1).collect();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            let items: Vec<String> = c.iter().map(usize::to_string).collect();
            write!(f, "({})", items.join(" "))?;
        }
        Ok(())
    }
}

impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.images.serialize(s)
    }
}

fn check_degrees(n: usize, gens: &[Permutation]) -> Result<()> {
    match gens.iter().find(|g| g.degree() != n) {
        Some(g) => Err(Error::Usage(format!("generator of degree {} in a group on {n} points", g.degree()))),
        None => Ok(()),
    }
}

/// Orbit partition of `{0..n-1}` under the generated group, each orbit sorted
/// and orbits ordered by their least element.
pub fn orbits(n: usize, gens: &[Permutation]) -> Result<Vec<Vec<usize>>> {
    check_degrees(n, gens)?;
    let mut label = vec![usize::MAX; n];
    let mut out = Vec::new();
    for start in 0..n {
        if label[start] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut orbit = vec![start];
        label[start] = id;
        let mut queue = VecDeque::from([start]);
        while let Some(a) = queue.pop_front() {
            for g in gens {
                let b = g.apply(a);
                if label[b] == usize::MAX {
                    label[b] = id;
                    orbit.push(b);
                    queue.push_back(b);
                }
            }
        }
        orbit.sort_unstable();
        out.push(orbit);
    }
    Ok(out)
}

pub fn is_transitive(n: usize, gens: &[Permutation]) -> Result<bool> {
    Ok(orbits(n, gens)?.len() <= 1)
}

/// Single orbit on ordered pairs of distinct points.
pub fn two_transitive(n: usize, gens: &[Permutation]) -> Result<bool> {
    check_degrees(n, gens)?;
    if n < 2 {
        return Ok(true);
    }
    let idx = |a: usize, b: usize| a * n + b;
    let mut seen = vec![false; n * n];
    seen[idx(0, 1)] = true;
    let mut count = 1usize;
    let mut queue = VecDeque::from([(0usize, 1usize)]);
    while let Some((a, b)) = queue.pop_front() {
        for g in gens {
            let (c, d) = (g.apply(a), g.apply(b));
            if !seen[idx(c, d)] {
                seen[idx(c, d)] = true;
                count += 1;
                queue.push_back((c, d));
            }
        }
    }
    Ok(count == n * (n - 1))
}

/// A power of `g` that is a transposition, if any exists.
pub fn transposition_power(g: &Permutation) -> Option<Permutation> {
    let lens: Vec<usize> = g.cycles().iter().map(Vec::len).filter(|&l| l > 1).collect();
    for (i, &l) in lens.iter().enumerate() {
        if l % 2 != 0 {
            continue;
        }
        // g^k isolates this cycle as a transposition iff k is an odd multiple
        // of l/2 and every other cycle length divides k.
        let k = lens
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .fold(l / 2, |acc, (_, &m)| acc.lcm(&m));
        if (k / (l / 2)) % 2 == 1 {
            let p = g.pow(k as u64);
            if p.is_transposition() {
                return Some(p);
            }
        }
    }
    None
}

/// Searches the generators, their powers and `word_budget` random words.
/// `None` is not a proof that no transposition exists.
pub fn find_transposition<R: Rng + ?Sized>(
    n: usize,
    gens: &[Permutation],
    word_budget: usize,
    rng: &mut R,
) -> Result<Option<Permutation>> {
    check_degrees(n, gens)?;
    if let Some(t) = gens.iter().find_map(transposition_power) {
        return Ok(Some(t));
    }
    if gens.is_empty() {
        return Ok(None);
    }
    for _ in 0..word_budget {
        let len = rng.gen_range(2..=12);
        let mut w = Permutation::identity(n);
        for _ in 0..len {
            let g = &gens[rng.gen_range(0..gens.len())];
            w = if rng.gen_bool(0.5) { w.then(g) } else { w.then(&g.inverse()) };
        }
        if let Some(t) = transposition_power(&w) {
            return Ok(Some(t));
        }
    }
    Ok(None)
}

pub const SCHREIER_SIMS_MAX_DEGREE: usize = 64;

/// Stabilizer chain built with Knuth's variant of Schreier–Sims.
struct StabChain {
    n: usize,
    // reps[k][j]: element fixing 0..k-1 and sending k to j.
    reps: Vec<Vec<Option<Permutation>>>,
    gens: Vec<Vec<Permutation>>,
}

impl StabChain {
    fn new(n: usize) -> Self {
        let mut reps = vec![vec![None; n]; n];
        for (k, level) in reps.iter_mut().enumerate() {
            level[k] = Some(Permutation::identity(n));
        }
        StabChain { n, reps, gens: vec![Vec::new(); n] }
    }

    fn contains_from(&self, k: usize, p: &Permutation) -> bool {
        let mut p = p.clone();
        for level in k..self.n {
            let j = p.apply(level);
            match &self.reps[level][j] {
                Some(r) => p = p.then(&r.inverse()),
                None => return false,
            }
        }
        p.is_identity()
    }

    fn add_generator(&mut self, k: usize, p: Permutation) {
        if k >= self.n {
            return;
        }
        self.gens[k].push(p.clone());
        let reps: Vec<Permutation> = self.reps[k].iter().flatten().cloned().collect();
        for r in reps {
            self.sift_insert(k, r.then(&p));
        }
    }

    fn sift_insert(&mut self, k: usize, p: Permutation) {
        let j = p.apply(k);
        match self.reps[k][j].clone() {
            Some(r) => {
                let q = p.then(&r.inverse());
                if !self.contains_from(k + 1, &q) {
                    self.add_generator(k + 1, q);
                }
            }
            None => {
                self.reps[k][j] = Some(p.clone());
                let gens = self.gens[k].clone();
                for g in gens {
                    self.sift_insert(k, p.then(&g));
                }
            }
        }
    }

    fn order(&self) -> BigUint {
        self.reps
            .iter()
            .map(|level| BigUint::from(level.iter().filter(|r| r.is_some()).count()))
            .product()
    }
}

/// Exact order of the generated group (degree at most 64).
pub fn schreier_sims_order(n: usize, gens: &[Permutation]) -> Result<BigUint> {
    check_degrees(n, gens)?;
    if n > SCHREIER_SIMS_MAX_DEGREE {
        return Err(Error::Unsupported(format!(
            "group order on {n} > {SCHREIER_SIMS_MAX_DEGREE} points"
        )));
    }
    let mut chain = StabChain::new(n);
    for g in gens {
        if !chain.contains_from(0, g) {
            chain.add_generator(0, g.clone());
        }
    }
    Ok(chain.order())
}

/// Certification summary for a set of generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupReport {
    pub n: usize,
    pub generators: usize,
    pub transitive: bool,
    pub two_transitive: bool,
    pub has_transposition: bool,
    pub certified_symmetric: bool,
    #[serde(serialize_with = "serialize_big")]
    pub order: Option<BigUint>,
}

/// Integers up to 2^53 as JSON numbers, larger ones as decimal strings.
pub fn serialize_big<S: Serializer>(v: &Option<BigUint>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        None => s.serialize_none(),
        Some(x) if x.bits() <= 53 => s.serialize_u64(x.try_into().unwrap()),
        Some(x) => s.serialize_str(&x.to_string()),
    }
}

pub const DEFAULT_WORD_BUDGET: usize = 2000;

/// Runs the transitive → 2-transitive → transposition chain.
pub fn certify_symmetric<R: Rng + ?Sized>(
    n: usize,
    gens: &[Permutation],
    word_budget: usize,
    rng: &mut R,
) -> Result<GroupReport> {
    let transitive = is_transitive(n, gens)?;
    let two_transitive = transitive && two_transitive(n, gens)?;
    let has_transposition = find_transposition(n, gens, word_budget, rng)?.is_some();
    let order = if n <= SCHREIER_SIMS_MAX_DEGREE { Some(schreier_sims_order(n, gens)?) } else { None };
    Ok(GroupReport {
        n,
        generators: gens.len(),
        transitive,
        two_transitive,
        has_transposition,
        certified_symmetric: transitive && two_transitive && has_transposition,
        order,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SeedTree;

    fn cyc(n: usize, cycles: &[&[usize]]) -> Permutation {
        Permutation::from_cycles(n, cycles).unwrap()
    }

    fn factorial(n: u32) -> BigUint {
        (1..=n).map(BigUint::from).product()
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(Permutation::new(vec![0, 0, 1]).is_err());
        assert!(Permutation::new(vec![0, 3]).is_err());
    }

    #[test]
    fn orbit_examples() {
        let gens = [cyc(3, &[&[0, 1]]), cyc(3, &[&[1, 2]])];
        assert_eq!(orbits(3, &gens).unwrap(), vec![vec![0, 1, 2]]);
        assert_eq!(orbits(3, &[]).unwrap().len(), 3);
        assert!(orbits(4, &gens).is_err());
    }

    #[test]
    fn two_transitivity_examples() {
        let s5 = [cyc(5, &[&[0, 1, 2, 3, 4]]), cyc(5, &[&[0, 1]])];
        assert!(two_transitive(5, &s5).unwrap());
        assert!(!two_transitive(4, &[cyc(4, &[&[0, 1, 2, 3]])]).unwrap());
    }

    #[test]
    fn transposition_search() {
        let mut rng = SeedTree::new(0).stream("t");
        let t = find_transposition(4, &[cyc(4, &[&[0, 1]])], 10, &mut rng).unwrap();
        assert_eq!(t, Some(cyc(4, &[&[0, 1]])));
        assert_eq!(find_transposition(3, &[cyc(3, &[&[0, 1, 2]])], 100, &mut rng).unwrap(), None);
        // (0 1)(2 3 4) cubed is (0 1).
        let g = cyc(5, &[&[0, 1], &[2, 3, 4]]);
        assert_eq!(transposition_power(&g), Some(cyc(5, &[&[0, 1]])));
        // (0 1 2 3) squared is a double transposition: no transposition power.
        assert_eq!(transposition_power(&cyc(4, &[&[0, 1, 2, 3]])), None);
    }

    #[test]
    fn certify_examples() {
        let mut rng = SeedTree::new(0).stream("c");
        let r = certify_symmetric(5, &[cyc(5, &[&[0, 1, 2, 3, 4]]), cyc(5, &[&[0, 1]])], 100, &mut rng).unwrap();
        assert!(r.certified_symmetric);
        assert_eq!(r.order, Some(BigUint::from(120u32)));
        let r = certify_symmetric(5, &[cyc(5, &[&[0, 1, 2, 3, 4]])], 100, &mut rng).unwrap();
        assert!(!r.certified_symmetric);
        assert!(r.transitive);
        let r = certify_symmetric(6, &[], 100, &mut rng).unwrap();
        assert!(!r.transitive && !r.two_transitive && !r.has_transposition);
        assert_eq!(r.order, Some(BigUint::one()));
    }

    #[test]
    fn schreier_sims_examples() {
        assert_eq!(schreier_sims_order(4, &[cyc(4, &[&[0, 1]]), cyc(4, &[&[0, 1, 2, 3]])]).unwrap(), BigUint::from(24u32));
        assert_eq!(schreier_sims_order(7, &[cyc(7, &[&[0, 1, 2, 3, 4, 5, 6]])]).unwrap(), BigUint::from(7u32));
        assert!(schreier_sims_order(65, &[]).is_err());
    }

    #[test]
    fn schreier_sims_larger_groups() {
        let n = 12;
        let long: Vec<usize> = (0..n).collect();
        let s12 = [cyc(n, &[&long]), cyc(n, &[&[0, 1]])];
        assert_eq!(schreier_sims_order(n, &s12).unwrap(), factorial(12));
        // A_8 from 3-cycles.
        let a8: Vec<Permutation> = (0..6).map(|i| cyc(8, &[&[i, i + 1, i + 2]])).collect();
        assert_eq!(schreier_sims_order(8, &a8).unwrap(), factorial(8) / BigUint::from(2u32));
        // PSL(2,7) on 8 points has order 168: x -> x+1, x -> 2x, x -> -1/x on P^1(F_7).
        let inf = 7;
        let mk = |f: &dyn Fn(usize) -> usize| Permutation::new((0..8).map(f).collect()).unwrap();
        let shift = mk(&|x| if x == inf { inf } else { (x + 1) % 7 });
        let dbl = mk(&|x| if x == inf { inf } else { (2 * x) % 7 });
        let inv = mk(&|x| match x {
            7 => 0,
            0 => 7,
            x => (7 - (1..7).find(|y| (x * y) % 7 == 1).unwrap()) % 7,
        });
        assert_eq!(schreier_sims_order(8, &[shift, dbl, inv]).unwrap(), BigUint::from(168u32));
    }

    #[test]
    fn report_serializes_small_orders_as_numbers() {
        let mut rng = SeedTree::new(0).stream("s");
        let long: Vec<usize> = (0..30).collect();
        let r = certify_symmetric(30, &[cyc(30, &[&long]), cyc(30, &[&[0, 1]])], 10, &mut rng).unwrap();
        assert!(r.certified_symmetric);
        assert_eq!(r.order, Some(factorial(30)));
    }
}
