//! Watson transformations `Λ_p`, `λ_p` and the Γ_p-descendant families.

mod gamma;
mod graph;

pub use gamma::{
    exchange_check, family_slice, gamma_descendants, hyperbolic_level, FamilySlice, GammaPair,
};
pub use graph::{cspn, slice_kind, watson_graph, SliceKind, WatsonEdge, WatsonMultigraph};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::form::TernaryForm;
use crate::genus::{enumerate_genus, spinor_partition, SpinorPartition};
use crate::linalg::{column, hnf, kernel_mod, Mat3, IDENTITY};
use crate::reduce::reduce;
use crate::sublattice::{is_prime, Sublattice};

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct WatsonResult {
    pub input: TernaryForm,
    pub p: i64,
    /// `Λ_p(L)` as a sublattice of the input.
    pub sublattice: Sublattice,
    /// Generator of the norm ideal of `Λ_p(L)`.
    pub scale: i64,
    /// Reduced form of `λ_p(L)`.
    pub lambda: TernaryForm,
}

/// `Λ_p(L) = {x : Q(x + z) ≡ Q(z) mod p for all z}`, i.e. `Ax ≡ 0` and `Q(x) ≡ 0 mod p`.
pub fn lambda_sublattice(f: &TernaryForm, p: i64) -> Result<Sublattice> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let a = f.doubled_gram();
    let mut basis = IDENTITY;
    for row in &a {
        basis = kernel_mod(&basis, row, p);
    }
    if p == 2 {
        basis = kernel_of_norm_mod_2(f, &basis);
    }
    Ok(Sublattice { parent: *f, basis })
}

/// On a lattice where `xᵀAy` is even, `Q mod 2` is linear; returns its kernel.
fn kernel_of_norm_mod_2(f: &TernaryForm, basis: &Mat3) -> Mat3 {
    let cols: Vec<_> = (0..3).map(|j| column(basis, j)).collect();
    let Some(pivot) = cols.iter().position(|c| f.eval(c) % 2 != 0) else {
        return *basis;
    };
    let bp = cols[pivot];
    let mut gens = vec![bp.map(|x| 2 * x)];
    for (j, c) in cols.iter().enumerate() {
        if j != pivot {
            let k = f.eval(c).rem_euclid(2);
            gens.push([0, 1, 2].map(|i| c[i] - k * bp[i]));
        }
    }
    hnf(&gens)
}

pub fn watson(f: &TernaryForm, p: i64) -> Result<WatsonResult> {
    let sublattice = lambda_sublattice(f, p)?;
    let big = sublattice.form();
    let scale = big.content();
    let lambda = reduce(&big.primitive_part());
    Ok(WatsonResult {
        input: *f,
        p,
        sublattice,
        scale,
        lambda,
    })
}

/// `λ_p` as a map on forms, returning the reduced representative.
pub fn lambda(f: &TernaryForm, p: i64) -> Result<TernaryForm> {
    Ok(watson(f, p)?.lambda)
}

/// The number of proper spinor genera in the genus of `f`.
pub fn spinor_genus_count(f: &TernaryForm) -> Result<usize> {
    Ok(spinor_partition(&enumerate_genus(f))?.g())
}

pub fn is_h_type(f: &TernaryForm, p: i64) -> Result<bool> {
    Ok(spinor_genus_count(f)? == spinor_genus_count(&lambda(f, p)?)?)
}

/// `a` such that `λ_p` is `2^a`-to-one on spinor genera.
pub fn lambda_fiber_exponent(f: &TernaryForm, p: i64) -> Result<u32> {
    let src = spinor_partition(&enumerate_genus(f))?;
    let dst = spinor_partition(&enumerate_genus(&lambda(f, p)?))?;
    let fibers = lambda_fibers(&src, &dst, p)?;
    fiber_exponent(&fibers)
}

/// Size of every fiber, or an error when the fibers are not uniform or not a power of two
/// up to 4.
pub fn fiber_exponent(fibers: &[usize]) -> Result<u32> {
    let n = fibers[0];
    if fibers.iter().any(|&k| k != n) || !matches!(n, 1 | 2 | 4) {
        return Err(Error::HypothesisFailure(format!("fiber sizes {fibers:?}")));
    }
    Ok(n.trailing_zeros())
}

/// The map induced by `λ_p` from spinor genera of `src` to spinor genera of `dst`.
/// Fails if some spinor genus is not sent into a single spinor genus.
pub fn lambda_part_map(src: &SpinorPartition, dst: &SpinorPartition, p: i64) -> Result<Vec<usize>> {
    let mut image: Vec<Option<usize>> = vec![None; src.g()];
    for (i, f) in src.table.classes.iter().enumerate() {
        let l = lambda(f, p)?;
        let j = dst
            .table
            .index_of_reduced(&l)
            .ok_or(Error::IncompleteGenus)?;
        let (ps, pd) = (src.part_of(i), dst.part_of(j));
        match image[ps] {
            Some(x) if x != pd => {
                return Err(Error::HypothesisFailure(format!(
                    "spinor genus {ps} splits under λ_{p}"
                )))
            }
            _ => image[ps] = Some(pd),
        }
    }
    Ok(image
        .into_iter()
        .map(|x| x.expect("every part is nonempty"))
        .collect())
}

/// Number of spinor genera of `src` over each spinor genus of `dst`. Fails if the induced
/// map is not surjective.
pub fn lambda_fibers(src: &SpinorPartition, dst: &SpinorPartition, p: i64) -> Result<Vec<usize>> {
    let map = lambda_part_map(src, dst, p)?;
    let mut counts = vec![0; dst.g()];
    for j in map {
        counts[j] += 1;
    }
    if counts.contains(&0) {
        return Err(Error::HypothesisFailure(format!(
            "λ_{p} is not surjective on spinor genera"
        )));
    }
    Ok(counts)
}
