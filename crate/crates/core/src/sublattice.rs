//! Sublattices given by integral bases.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::form::TernaryForm;
use crate::linalg::{self, Mat3};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Sublattice {
    pub parent: TernaryForm,
    /// Basis vectors as columns, in coordinates of `parent`.
    pub basis: Mat3,
}

impl Sublattice {
    pub fn index(&self) -> i64 {
        linalg::det(&self.basis).unsigned_abs() as i64
    }

    pub fn form(&self) -> TernaryForm {
        self.parent
            .transform(&self.basis)
            .expect("sublattice of a positive definite lattice")
    }
}

pub fn prime_factors(mut n: i64) -> Vec<(i64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_square_free(n: i64) -> bool {
    n >= 1 && prime_factors(n).iter().all(|&(_, e)| e == 1)
}

pub fn is_prime(n: i64) -> bool {
    n >= 2 && prime_factors(n) == vec![(n, 1)]
}

pub fn ord(p: i64, mut n: i64) -> u32 {
    if n == 0 {
        return u32::MAX;
    }
    let mut e = 0;
    while n % p == 0 {
        n /= p;
        e += 1;
    }
    e
}

fn divisors(n: i64) -> Vec<i64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

/// All sublattices of index `n`, as lower triangular Hermite normal forms
/// `[[d₁,0,0],[x,d₂,0],[y,z,d₃]]` with `0 ≤ x < d₂`, `0 ≤ y, z < d₃`, in lexicographic order
/// of `(d₁, d₂, d₃, x, y, z)`.
pub fn sublattices_of_index(f: &TernaryForm, n: i64) -> Result<Vec<Sublattice>> {
    if !is_square_free(n) {
        return Err(Error::NotSquareFree(n));
    }
    let mut out = Vec::new();
    for d1 in divisors(n) {
        for d2 in divisors(n / d1) {
            let d3 = n / d1 / d2;
            for x in 0..d2 {
                for y in 0..d3 {
                    for z in 0..d3 {
                        out.push(Sublattice {
                            parent: *f,
                            basis: [[d1, 0, 0], [x, d2, 0], [y, z, d3]],
                        });
                    }
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        let f = TernaryForm::diagonal(1, 1, 1).unwrap();
        assert_eq!(
            sublattices_of_index(&f, 1).unwrap()[0].basis,
            linalg::IDENTITY
        );
        assert_eq!(sublattices_of_index(&f, 5).unwrap().len(), 31);
        assert_eq!(sublattices_of_index(&f, 15).unwrap().len(), 403);
        assert_eq!(sublattices_of_index(&f, 12), Err(Error::NotSquareFree(12)));
    }

    #[test]
    fn distinct_and_of_right_index() {
        let f = TernaryForm::diagonal(1, 1, 1).unwrap();
        let subs = sublattices_of_index(&f, 6).unwrap();
        let mut bases: Vec<Mat3> = subs
            .iter()
            .map(|s| linalg::hnf(&[0, 1, 2].map(|j| linalg::column(&s.basis, j))))
            .collect();
        assert!(subs.iter().all(|s| s.index() == 6));
        let total = bases.len();
        bases.sort();
        bases.dedup();
        assert_eq!(bases.len(), total);
    }
}
