use crate::error::{Error, Result};
use crate::form::TernaryForm;
use crate::linalg::{self, Vec3};
use crate::reduce::reduce;
use crate::sublattice::is_prime;

/// Smallest odd prime not dividing `4dL`.
pub fn smallest_good_prime(four_d: i64) -> i64 {
    (3..).find(|&p| is_prime(p) && four_d % p != 0).unwrap()
}

fn isotropic_lines(a: &linalg::Mat3, p: i64) -> Vec<Vec3> {
    let mut out = Vec::new();
    let mut check = |v: Vec3| {
        if linalg::bilinear(a, &v, &v).rem_euclid(p as i128) == 0 {
            out.push(v);
        }
    };
    for y in 0..p {
        for z in 0..p {
            check([1, y, z]);
        }
    }
    for z in 0..p {
        check([0, 1, z]);
    }
    check([0, 0, 1]);
    out
}

/// The p-neighbor `L' = L_v + Z·v/p` through the isotropic line `v mod p`, as an unreduced form.
pub fn neighbor(f: &TernaryForm, p: i64, v: &Vec3) -> Result<TernaryForm> {
    let a = f.doubled_gram();
    let qv = linalg::bilinear(&a, v, v);
    if qv.rem_euclid(p as i128) != 0 {
        return Err(Error::HypothesisFailure("line is not isotropic".into()));
    }
    let av = linalg::mat_vec(&a, v);
    let i = (0..3)
        .find(|&i| av[i].rem_euclid(p) != 0)
        .ok_or(Error::BadPrime(p))?;
    let inv = linalg::mod_inverse((2 * av[i]).rem_euclid(p), p);
    let t = ((-(qv / p as i128)).rem_euclid(p as i128) as i64 * inv).rem_euclid(p);
    let mut w = *v;
    w[i] += p * t;
    let aw = linalg::mat_vec(&a, &w);
    let kernel = linalg::kernel_mod(&linalg::IDENTITY, &aw, p);
    let mut gens = vec![w];
    for j in 0..3 {
        gens.push(linalg::column(&kernel, j).map(|x| x * p));
    }
    let b = linalg::hnf(&gens);
    let m = linalg::congruent(&a, &b).ok_or(Error::Overflow)?;
    let pp = p * p;
    if m.iter().flatten().any(|x| x % pp != 0) {
        return Err(Error::NonIntegralResult);
    }
    TernaryForm::from_doubled(&m.map(|r| r.map(|x| x / pp)))
}

/// All p-neighbors of `f`, reduced, one per isotropic line mod p.
pub fn p_neighbors(f: &TernaryForm, p: i64) -> Result<Vec<TernaryForm>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p == 2 || (2 * f.four_d()) % p == 0 {
        return Err(Error::BadPrime(p));
    }
    isotropic_lines(&f.doubled_gram(), p)
        .iter()
        .map(|v| neighbor(f, p, v).map(|g| reduce(&g)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sum_of_three_squares() {
        let f = TernaryForm::diagonal(1, 1, 1).unwrap();
        let n = p_neighbors(&f, 3).unwrap();
        assert_eq!(n.len(), 4);
        assert!(n.iter().all(|g| *g == f));
        assert_eq!(p_neighbors(&f, 2), Err(Error::BadPrime(2)));
    }

    #[test]
    fn neighbor_count_is_conic_size() {
        let f: TernaryForm = "gram:12,15,135,5,0,0".parse().unwrap();
        for p in [7, 11, 13] {
            let n = p_neighbors(&f, p).unwrap();
            assert_eq!(n.len() as i64, p + 1);
            assert!(n.iter().all(|g| g.four_d() == f.four_d()));
        }
    }
}
