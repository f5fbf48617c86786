//! Finite commutative rings with 1 and their Zariski spectra.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::bitset::BitSet;
use crate::error::{Caps, Error, Result};
use crate::interp::Spectrum;
use crate::lattice::{FiniteSpace, Frame};
use crate::properties::{is_connected, Connectedness};

/// A commutative ring with 1 given by its addition and multiplication tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteRing {
    names: Vec<String>,
    add: Vec<usize>,
    mul: Vec<usize>,
    zero: usize,
    one: usize,
}

impl FiniteRing {
    /// Validates the ring axioms exhaustively. Tables are row-major `n × n`.
    pub fn new(names: Vec<String>, add: Vec<usize>, mul: Vec<usize>, caps: &Caps) -> Result<FiniteRing> {
        let n = names.len();
        let bad = |m: String| Err(Error::InvalidRing(m));
        if n == 0 {
            return bad("a ring needs at least one element".into());
        }
        if n > caps.ring_elements {
            return Err(Error::cap("ring elements", n, caps.ring_elements));
        }
        if add.len() != n * n || mul.len() != n * n {
            return bad("tables must be n × n".into());
        }
        if add.iter().chain(&mul).any(|&x| x >= n) {
            return bad("table entry out of range".into());
        }
        let op = |t: &[usize], a: usize, b: usize| t[a * n + b];
        let Some(zero) = (0..n).find(|&z| (0..n).all(|a| op(&add, z, a) == a && op(&add, a, z) == a)) else {
            return bad("no additive identity".into());
        };
        let Some(one) = (0..n).find(|&u| (0..n).all(|a| op(&mul, u, a) == a && op(&mul, a, u) == a)) else {
            return bad("no multiplicative identity".into());
        };
        for a in 0..n {
            if !(0..n).any(|b| op(&add, a, b) == zero) {
                return bad(format!("{} has no additive inverse", names[a]));
            }
            for b in 0..n {
                if op(&add, a, b) != op(&add, b, a) {
                    return bad(format!("addition of {} and {} is not commutative", names[a], names[b]));
                }
                if op(&mul, a, b) != op(&mul, b, a) {
                    return bad(format!("multiplication of {} and {} is not commutative", names[a], names[b]));
                }
                for c in 0..n {
                    let (x, y, z) = (&names[a], &names[b], &names[c]);
                    if op(&add, op(&add, a, b), c) != op(&add, a, op(&add, b, c)) {
                        return bad(format!("addition is not associative on {x}, {y}, {z}"));
                    }
                    if op(&mul, op(&mul, a, b), c) != op(&mul, a, op(&mul, b, c)) {
                        return bad(format!("multiplication is not associative on {x}, {y}, {z}"));
                    }
                    if op(&mul, a, op(&add, b, c)) != op(&add, op(&mul, a, b), op(&mul, a, c)) {
                        return bad(format!("{x}·({y}+{z}) does not distribute"));
                    }
                }
            }
        }
        Ok(FiniteRing { names, add, mul, zero, one })
    }

    /// `ℤ/n` with elements named `0 … n−1`.
    pub fn cyclic(n: usize, caps: &Caps) -> Result<FiniteRing> {
        if n == 0 {
            return Err(Error::InvalidRing("Z/0 is not finite".into()));
        }
        if n > caps.ring_elements {
            return Err(Error::cap("ring elements", n, caps.ring_elements));
        }
        let names = (0..n).map(|i| i.to_string()).collect();
        let add = (0..n * n).map(|i| (i / n + i % n) % n).collect();
        let mul = (0..n * n).map(|i| (i / n) * (i % n) % n).collect();
        FiniteRing::new(names, add, mul, caps)
    }

    /// Componentwise ring on pairs, indexed `a * |S| + b`.
    pub fn product(&self, other: &FiniteRing, caps: &Caps) -> Result<FiniteRing> {
        let (n, m) = (self.len(), other.len());
        let size = n * m;
        if size > caps.ring_elements {
            return Err(Error::cap("ring elements", size, caps.ring_elements));
        }
        let names = (0..size)
            .map(|i| format!("{}_{}", self.names[i / m], other.names[i % m]))
            .collect();
        let table = |f: &dyn Fn(usize, usize) -> usize, g: &dyn Fn(usize, usize) -> usize| -> Vec<usize> {
            (0..size * size)
                .map(|k| {
                    let (x, y) = (k / size, k % size);
                    f(x / m, y / m) * m + g(x % m, y % m)
                })
                .collect()
        };
        let add = table(&|a, b| self.add(a, b), &|a, b| other.add(a, b));
        let mul = table(&|a, b| self.mul(a, b), &|a, b| other.mul(a, b));
        FiniteRing::new(names, add, mul, caps)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, a: usize) -> &str {
        &self.names[a]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn zero(&self) -> usize {
        self.zero
    }

    pub fn one(&self) -> usize {
        self.one
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.len() + b]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.len() + b]
    }

    pub fn pow(&self, a: usize, k: usize) -> usize {
        (0..k).fold(self.one, |acc, _| self.mul(acc, a))
    }

    pub fn with_names(mut self, names: Vec<String>) -> FiniteRing {
        assert_eq!(names.len(), self.len());
        self.names = names;
        self
    }

    /// Smallest additive subgroup containing `s`.
    fn subgroup_closure(&self, s: &BitSet) -> BitSet {
        let mut out = s.clone();
        out.insert(self.zero);
        loop {
            let cur: Vec<usize> = out.iter().collect();
            let mut changed = false;
            for &a in &cur {
                for &b in &cur {
                    changed |= out.insert(self.add(a, b));
                }
            }
            if !changed {
                return out;
            }
        }
    }

    /// The ideal generated by `gens`.
    pub fn ideal_generated(&self, gens: &BitSet) -> BitSet {
        let n = self.len();
        let mut seed = BitSet::new(n);
        for g in gens.iter() {
            for r in 0..n {
                seed.insert(self.mul(r, g));
            }
        }
        self.subgroup_closure(&seed)
    }

    pub fn is_ideal(&self, s: &BitSet) -> bool {
        let n = self.len();
        s.contains(self.zero)
            && s.iter().all(|a| s.iter().all(|b| s.contains(self.add(a, b))))
            && s.iter().all(|a| (0..n).all(|r| s.contains(self.mul(r, a))))
    }

    fn is_prime_ideal(&self, s: &BitSet) -> bool {
        let n = self.len();
        !s.contains(self.one)
            && (0..n).all(|a| (0..n).all(|b| !s.contains(self.mul(a, b)) || s.contains(a) || s.contains(b)))
    }

    /// All ideals, found by walking the additive subgroup lattice and keeping
    /// the subgroups that absorb multiplication. Sorted.
    pub fn ideals(&self) -> Vec<Ideal> {
        let n = self.len();
        let mut seen: BTreeSet<BitSet> = BTreeSet::new();
        let start = self.subgroup_closure(&BitSet::new(n));
        seen.insert(start.clone());
        let mut work = vec![start];
        while let Some(g) = work.pop() {
            for a in 0..n {
                if g.contains(a) {
                    continue;
                }
                let mut s = g.clone();
                s.insert(a);
                let h = self.subgroup_closure(&s);
                if seen.insert(h.clone()) {
                    work.push(h);
                }
            }
        }
        let ideals: Vec<BitSet> = seen.into_iter().filter(|s| self.is_ideal(s)).collect();
        ideals
            .iter()
            .map(|s| {
                let proper = !s.contains(self.one);
                let maximal = proper
                    && !ideals
                        .iter()
                        .any(|t| t != s && s.is_subset(t) && !t.contains(self.one));
                Ideal {
                    members: s.clone(),
                    prime: self.is_prime_ideal(s),
                    maximal,
                }
            })
            .collect()
    }

    pub fn prime_ideals(&self) -> Vec<Ideal> {
        self.ideals().into_iter().filter(|i| i.prime).collect()
    }

    /// `√⟨gens⟩` by the power scan `aᵏ ∈ ⟨gens⟩`, `k ≤ |R|`, checked against
    /// the intersection of the primes containing `gens`.
    pub fn radical(&self, gens: &BitSet) -> Result<BitSet> {
        let n = self.len();
        let ideal = self.ideal_generated(gens);
        let scan = BitSet::from_indices(n, (0..n).filter(|&a| (1..=n).any(|k| ideal.contains(self.pow(a, k)))));
        let mut meet = BitSet::full(n);
        for p in self.prime_ideals() {
            if ideal.is_subset(&p.members) {
                meet.intersect_with(&p.members);
            }
        }
        if scan != meet {
            return Err(Error::ShadowMismatch(format!(
                "radical of {}: power scan {} but prime intersection {}",
                self.set_text(gens),
                self.set_text(&scan),
                self.set_text(&meet)
            )));
        }
        Ok(scan)
    }

    pub fn idempotents(&self) -> Vec<usize> {
        (0..self.len()).filter(|&a| self.mul(a, a) == a).collect()
    }

    pub fn set_text(&self, s: &BitSet) -> String {
        let names: Vec<&str> = s.iter().map(|a| self.name(a)).collect();
        format!("{{{}}}", names.join(", "))
    }

    /// A short name for an ideal: `(g)` when principal, else its members.
    pub fn ideal_text(&self, s: &BitSet) -> String {
        let n = self.len();
        match (0..n).find(|&g| self.ideal_generated(&BitSet::from_indices(n, [g])) == *s) {
            Some(g) => format!("({})", self.name(g)),
            None => self.set_text(s),
        }
    }
}

/// A ring isomorphism `r → s`, if one exists.
pub fn find_ring_isomorphism(r: &FiniteRing, s: &FiniteRing) -> Option<Vec<usize>> {
    let n = r.len();
    if n != s.len() {
        return None;
    }
    let mut f = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn go(k: usize, r: &FiniteRing, s: &FiniteRing, f: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
        let n = r.len();
        if k == n {
            return true;
        }
        for c in 0..n {
            if used[c] || (k == r.zero) != (c == s.zero) || (k == r.one) != (c == s.one) {
                continue;
            }
            f[k] = c;
            let ok = (0..=k).all(|a| {
                (0..=k).all(|b| {
                    let (x, y) = (r.add(a, b), r.mul(a, b));
                    (x > k || f[x] == s.add(f[a], f[b])) && (y > k || f[y] == s.mul(f[a], f[b]))
                })
            });
            if ok {
                used[c] = true;
                if go(k + 1, r, s, f, used) {
                    return true;
                }
                used[c] = false;
            }
        }
        f[k] = usize::MAX;
        false
    }
    go(0, r, s, &mut f, &mut used).then_some(f)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ideal {
    pub members: BitSet,
    pub prime: bool,
    pub maximal: bool,
}

/// `Spec R` on the prime ideals, with basic opens `O_a = { P | a ∉ P }`.
#[derive(Clone, Debug)]
pub struct Zariski {
    pub primes: Vec<BitSet>,
    pub basic: Vec<BitSet>,
    pub space: FiniteSpace,
}

pub fn zariski_space(r: &FiniteRing) -> Zariski {
    let primes: Vec<BitSet> = r.prime_ideals().into_iter().map(|i| i.members).collect();
    let k = primes.len();
    let basic: Vec<BitSet> = (0..r.len())
        .map(|a| BitSet::from_indices(k, (0..k).filter(|&p| !primes[p].contains(a))))
        .collect();
    let names = primes.iter().map(|p| r.ideal_text(p)).collect();
    let space = FiniteSpace::from_basis(names, &basic);
    Zariski { primes, basic, space }
}

/// The mutually inverse maps between points of `L = Ω(Spec R)` and primes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Correspondence {
    /// `filter_to_prime[i]` is the prime `P_F` for the `i`-th point of `L`.
    pub filter_to_prime: Vec<usize>,
    /// `prime_to_filter[j]` is the point `F_P` for the `j`-th prime.
    pub prime_to_filter: Vec<usize>,
}

/// Builds `F ↦ P_F = { a | O_a ∉ F }` and `P ↦ F_P = ↑{ O_a | a ∉ P }` and
/// certifies them as inverse homeomorphisms.
pub fn prime_filter_correspondence(r: &FiniteRing, z: &Zariski) -> Result<Correspondence> {
    let l = Frame::opens(&z.space);
    let sp = Spectrum::classical(&l);
    let o: Vec<usize> = z
        .basic
        .iter()
        .map(|b| z.space.open_index(b).expect("basic opens are open"))
        .collect();
    let n = r.len();
    let filter_to_prime = sp
        .points()
        .iter()
        .map(|f| {
            let p = BitSet::from_indices(n, (0..n).filter(|&a| !f.contains(o[a])));
            z.primes
                .iter()
                .position(|q| *q == p)
                .ok_or_else(|| Error::ShadowMismatch(format!("P_F = {} is not prime", r.set_text(&p))))
        })
        .collect::<Result<Vec<_>>>()?;
    let prime_to_filter = z
        .primes
        .iter()
        .map(|p| {
            let mut f = BitSet::new(l.len());
            for a in (0..n).filter(|&a| !p.contains(a)) {
                f.union_with(l.up(o[a]));
            }
            sp.index_of(&f).ok_or_else(|| {
                Error::ShadowMismatch(format!("F_P for {} is not completely prime", r.ideal_text(p)))
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let inverse = (0..filter_to_prime.len()).all(|i| prime_to_filter[filter_to_prime[i]] == i)
        && (0..prime_to_filter.len()).all(|j| filter_to_prime[prime_to_filter[j]] == j);
    if !inverse
        || !sp.space().is_homeomorphism(&filter_to_prime, &z.space)
        || !z.space.is_homeomorphism(&prime_to_filter, sp.space())
    {
        return Err(Error::ShadowMismatch("prime/filter maps are not inverse homeomorphisms".into()));
    }
    Ok(Correspondence {
        filter_to_prime,
        prime_to_filter,
    })
}

/// What the `spec` command reports about a ring.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingReport {
    pub elements: usize,
    pub primes: Vec<String>,
    pub maximal: Vec<String>,
    pub nilradical: String,
    pub opens: usize,
    pub discrete: bool,
    pub sober: bool,
    pub correspondence: Correspondence,
    pub idempotents: Vec<String>,
    pub connected: Connectedness,
}

pub fn ring_report(r: &FiniteRing) -> Result<RingReport> {
    let ideals = r.ideals();
    let z = zariski_space(r);
    let correspondence = prime_filter_correspondence(r, &z)?;
    let nil = r.radical(&BitSet::from_indices(r.len(), [r.zero()]))?;
    Ok(RingReport {
        elements: r.len(),
        primes: ideals.iter().filter(|i| i.prime).map(|i| r.ideal_text(&i.members)).collect(),
        maximal: ideals.iter().filter(|i| i.maximal).map(|i| r.ideal_text(&i.members)).collect(),
        nilradical: r.set_text(&nil),
        opens: z.space.opens().len(),
        discrete: z.space.opens().len() == 1 << z.space.len(),
        sober: crate::interp::soberify(&z.space).sober,
        correspondence,
        idempotents: r.idempotents().into_iter().map(|a| r.name(a).to_string()).collect(),
        connected: is_connected(&Frame::opens(&z.space)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn caps() -> Caps {
        Caps::default()
    }
    fn z(n: usize) -> FiniteRing {
        FiniteRing::cyclic(n, &caps()).unwrap()
    }
    fn set(n: usize, xs: &[usize]) -> BitSet {
        BitSet::from_indices(n, xs.iter().copied())
    }

    #[test]
    fn cyclic_and_products() {
        assert_eq!(z(1).len(), 1);
        assert_eq!(z(1).zero(), z(1).one());
        assert_eq!(z(6).len(), 6);
        assert_eq!(z(4).mul(2, 2), 0);
        let r = z(3).product(&z(1), &caps()).unwrap();
        assert!(find_ring_isomorphism(&r, &z(3)).is_some());
        let r = z(2).product(&z(3), &caps()).unwrap();
        assert!(find_ring_isomorphism(&r, &z(6)).is_some());
        let r = z(2).product(&z(2), &caps()).unwrap();
        assert_eq!(r.len(), 4);
        assert_eq!(r.idempotents().len(), 4);
        assert!(find_ring_isomorphism(&r, &z(4)).is_none());
        assert!(matches!(FiniteRing::cyclic(65, &caps()), Err(Error::ResourceCap { .. })));
    }

    #[test]
    fn rejects_bad_tables() {
        let names = vec!["0".to_string(), "1".to_string()];
        // multiplication table of Z/2 with 1·1 = 0
        let r = FiniteRing::new(names, vec![0, 1, 1, 0], vec![0, 0, 0, 0], &caps());
        assert!(matches!(r, Err(Error::InvalidRing(_))));
    }

    #[test]
    fn prime_ideal_examples() {
        let p: Vec<BitSet> = z(7).prime_ideals().into_iter().map(|i| i.members).collect();
        assert_eq!(p, vec![set(7, &[0])]);
        let p: Vec<BitSet> = z(12).prime_ideals().into_iter().map(|i| i.members).collect();
        assert_eq!(p.len(), 2);
        assert!(p.contains(&set(12, &[0, 2, 4, 6, 8, 10])));
        assert!(p.contains(&set(12, &[0, 3, 6, 9])));
        let p: Vec<BitSet> = z(4).prime_ideals().into_iter().map(|i| i.members).collect();
        assert_eq!(p, vec![set(4, &[0, 2])]);
        assert!(z(1).prime_ideals().is_empty());
    }

    #[test]
    fn radical_examples() {
        assert_eq!(z(4).radical(&set(4, &[0])).unwrap(), set(4, &[0, 2]));
        assert!(z(6).radical(&set(6, &[1])).unwrap().is_full());
        assert_eq!(z(12).radical(&set(12, &[4])).unwrap(), set(12, &[0, 2, 4, 6, 8, 10]));
    }

    #[test]
    fn zariski_examples() {
        assert_eq!(zariski_space(&z(5)).space.len(), 1);
        let s = zariski_space(&z(12)).space;
        assert_eq!(s.len(), 2);
        assert_eq!(s.opens().len(), 4);
        assert_eq!(zariski_space(&z(4)).space.len(), 1);
    }

    #[test]
    fn basic_open_laws_and_correspondence() {
        let mut rings: Vec<FiniteRing> = (1..=30).map(z).collect();
        rings.push(z(2).product(&z(2), &caps()).unwrap());
        rings.push(z(4).product(&z(6), &caps()).unwrap());
        for r in &rings {
            let zs = zariski_space(r);
            assert!(zs.basic[r.one()].is_full() && zs.basic[r.zero()].is_empty());
            for a in 0..r.len() {
                for b in 0..r.len() {
                    assert_eq!(zs.basic[r.mul(a, b)], zs.basic[a].intersection(&zs.basic[b]));
                }
            }
            let c = prime_filter_correspondence(r, &zs).unwrap();
            assert_eq!(c.filter_to_prime.len(), zs.primes.len());
            let report = ring_report(r).unwrap();
            assert!(report.sober);
            let two_idempotents = r.idempotents().len() <= 2;
            match report.connected {
                Connectedness::Connected => assert!(two_idempotents && r.len() > 1),
                Connectedness::Degenerate => assert_eq!(r.len(), 1),
                Connectedness::Disconnected { .. } => assert!(!two_idempotents),
            }
        }
    }

    #[test]
    fn radical_agreement_small_generators() {
        for n in 1..=30 {
            let r = z(n);
            for a in 0..n {
                for b in a..n {
                    r.radical(&set(n, &[a, b])).unwrap();
                }
            }
        }
    }

    #[test]
    fn spec_of_product_is_disjoint_union() {
        for (a, b) in [(2, 3), (4, 6), (2, 2), (1, 5), (6, 6)] {
            let (r, s) = (z(a), z(b));
            let rs = r.product(&s, &caps()).unwrap();
            let lhs = zariski_space(&rs).space;
            let rhs = zariski_space(&r).space.disjoint_union(&zariski_space(&s).space);
            assert!(lhs.find_homeomorphism(&rhs).is_some());
        }
    }
}
