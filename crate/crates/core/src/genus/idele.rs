use serde::{Deserialize, Serialize};

use super::bad_primes;
use crate::form::TernaryForm;
use crate::local::{spinor_norm_group, SquareClass, SquareClassGroup};

/// Finite model of `J_Q / P_D·J_Q^L`: the F₂-space `⊕_{p∈S} Q_p^×/(Q_p^×)²` over the primes
/// `S` dividing `2·4dL`, modulo the local spinor norm groups and the positive rationals
/// supported on `S`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct IdeleClassGroup {
    pub primes: Vec<i64>,
    pub local_groups: Vec<SquareClassGroup>,
    /// Echelon basis of the relation subspace.
    relations: Vec<u64>,
    dimension: u32,
}

fn reduce_vec(basis: &[u64], mut v: u64) -> u64 {
    for b in basis {
        let top = 63 - b.leading_zeros();
        if v >> top & 1 == 1 {
            v ^= b;
        }
    }
    v
}

impl IdeleClassGroup {
    fn offsets(&self) -> Vec<u32> {
        let mut off = Vec::with_capacity(self.primes.len());
        let mut o = 0;
        for &p in &self.primes {
            off.push(o);
            o += SquareClass::bits(p);
        }
        off
    }

    /// The diagonal embedding of a positive rational `num/den` (coprime to nothing in particular).
    pub fn diagonal(&self, num: i64, den: i64) -> u64 {
        let x = crate::local::Q::new(num as i128, den as i128);
        self.offsets()
            .iter()
            .zip(&self.primes)
            .map(|(&o, &p)| (SquareClass::of_rational(p, &x).code as u64) << o)
            .fold(0, |a, b| a | b)
    }

    /// Canonical representative of the class of `v`.
    pub fn reduce(&self, v: u64) -> u64 {
        reduce_vec(&self.relations, v)
    }

    /// Class of the idele `j(ℓ)` (ℓ at ℓ, 1 elsewhere) for a prime `ℓ` outside `S`.
    pub fn class_of_prime(&self, l: i64) -> u64 {
        self.reduce(self.diagonal(l, 1))
    }

    /// Class of `j(ℓ)` for any prime `ℓ`, including the primes of `S` where the idele is
    /// supported on a single coordinate.
    pub fn class_of_local_prime(&self, l: i64) -> u64 {
        match self.primes.iter().position(|&p| p == l) {
            Some(k) => {
                self.reduce((SquareClass::of_integer(l, l).code as u64) << self.offsets()[k])
            }
            None => self.class_of_prime(l),
        }
    }

    pub fn is_trivial(&self, l: i64) -> bool {
        self.class_of_prime(l) == 0
    }

    pub fn order(&self) -> u64 {
        1 << (self.dimension - self.relations.len() as u32)
    }
}

pub fn idele_class_group(f: &TernaryForm) -> IdeleClassGroup {
    let primes = bad_primes(f.four_d());
    let local_groups: Vec<SquareClassGroup> =
        primes.iter().map(|&p| spinor_norm_group(f, p)).collect();
    let dimension = primes.iter().map(|&p| SquareClass::bits(p)).sum();
    let mut g = IdeleClassGroup {
        primes,
        local_groups,
        relations: Vec::new(),
        dimension,
    };
    let offsets = g.offsets();
    let mut gens: Vec<u64> = Vec::new();
    for (k, grp) in g.local_groups.iter().enumerate() {
        for c in grp.generators() {
            gens.push((c.code as u64) << offsets[k]);
        }
    }
    for &q in &g.primes {
        gens.push(g.diagonal(q, 1));
    }
    let mut basis: Vec<u64> = Vec::new();
    for v in gens {
        let r = reduce_vec(&basis, v);
        if r != 0 {
            let top = 63 - r.leading_zeros();
            for b in basis.iter_mut() {
                if *b >> top & 1 == 1 {
                    *b ^= r;
                }
            }
            basis.push(r);
            basis.sort_by_key(|b| std::cmp::Reverse(63 - b.leading_zeros()));
        }
    }
    g.relations = basis;
    g
}
