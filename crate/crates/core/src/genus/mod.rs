//! Genera: enumeration of classes, neighbors, spinor genera and the idele class group model.

mod enumerate;
mod idele;
mod neighbors;
mod spinor;

pub use enumerate::{
    enumerate_genus, forms_in_range, forms_up_to, genera_in_range, genera_up_to, reduced_forms_with,
};
pub use idele::{idele_class_group, IdeleClassGroup};
pub use neighbors::{neighbor, p_neighbors, smallest_good_prime};
pub use spinor::{
    complete_exceptional_system_check, spinor_partition, spn_represents, SpinorPartition,
};

use serde::{Deserialize, Serialize};

use crate::form::TernaryForm;
use crate::local::{local_symbol, LocalSymbol};
use crate::reduce::reduce;
use crate::sublattice::prime_factors;

/// All classes of one genus, as sorted canonical representatives.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct GenusTable {
    pub four_d: i64,
    pub classes: Vec<TernaryForm>,
    /// Local symbols at the primes dividing `2·4dL`, in increasing order of p.
    pub symbols: Vec<LocalSymbol>,
}

impl GenusTable {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Index of the class of `f`, if it belongs to this genus.
    pub fn index_of(&self, f: &TernaryForm) -> Option<usize> {
        if f.four_d() != self.four_d {
            return None;
        }
        self.classes.binary_search(&reduce(f)).ok()
    }

    pub fn index_of_reduced(&self, f: &TernaryForm) -> Option<usize> {
        self.classes.binary_search(f).ok()
    }

    pub fn primes(&self) -> Vec<i64> {
        self.symbols.iter().map(|s| s.p).collect()
    }

    /// Whether `f` has the same discriminant and local symbols.
    pub fn admits(&self, f: &TernaryForm) -> bool {
        f.four_d() == self.four_d && self.symbols.iter().all(|s| local_symbol(f, s.p) == *s)
    }
}

/// The primes dividing `2·4dL`.
pub fn bad_primes(four_d: i64) -> Vec<i64> {
    let mut ps: Vec<i64> = prime_factors(2 * four_d)
        .into_iter()
        .map(|(p, _)| p)
        .collect();
    ps.sort();
    ps
}

pub fn genus_symbols(f: &TernaryForm) -> Vec<LocalSymbol> {
    bad_primes(f.four_d())
        .into_iter()
        .map(|p| local_symbol(f, p))
        .collect()
}
