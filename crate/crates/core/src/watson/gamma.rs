use serde::{Deserialize, Serialize};

use super::lambda;
use crate::error::{Error, Result};
use crate::form::TernaryForm;
use crate::genus::{enumerate_genus, GenusTable};
use crate::linalg::{congruent, hnf, Mat3};
use crate::local::{local_symbol, local_symbol_of_matrix};
use crate::reduce::reduce;
use crate::sublattice::{is_prime, ord, sublattices_of_index, Sublattice};

/// The `m` with `L_p ≅ [[0,½],[½,0]] ⊥ ⟨ε p^m⟩`, if `L_p` has this shape.
pub fn hyperbolic_level(f: &TernaryForm, p: i64) -> Option<u32> {
    let model: Mat3 = [[0, 1, 0], [1, 0, 0], [0, 0, -2 * f.four_d()]];
    (local_symbol(f, p) == local_symbol_of_matrix(&model, p)).then(|| ord(p, f.four_d()))
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct GammaPair {
    pub parent: TernaryForm,
    pub p: i64,
    /// The two index-p sublattices with norm ideal `pZ`.
    pub sublattices: [Sublattice; 2],
    /// Their rescalings by `1/p`, reduced.
    pub descendants: [TernaryForm; 2],
}

impl GammaPair {
    pub fn is_loop(&self) -> bool {
        self.descendants[0] == self.descendants[1]
    }
}

fn check_prime(p: i64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

pub fn gamma_descendants(f: &TernaryForm, p: i64) -> Result<GammaPair> {
    check_prime(p)?;
    if !matches!(hyperbolic_level(f, p), Some(m) if m >= 1) {
        return Err(Error::NotHyperbolicAtP(p));
    }
    let found: Vec<Sublattice> = sublattices_of_index(f, p)?
        .into_iter()
        .filter(|s| s.form().content() % p == 0)
        .collect();
    let [s1, s2] = found[..] else {
        return Err(Error::HypothesisFailure(format!(
            "{} sublattices of index {p} with norm in {p}Z",
            found.len()
        )));
    };
    let descend = |s: &Sublattice| -> Result<TernaryForm> {
        let c = s.form().coefficients().map(|x| x / p);
        Ok(reduce(&TernaryForm::new(
            c[0], c[1], c[2], c[3], c[4], c[5],
        )?))
    };
    Ok(GammaPair {
        parent: *f,
        p,
        sublattices: [s1, s2],
        descendants: [descend(&s1)?, descend(&s2)?],
    })
}

/// The lattice `M^p + Z(v/p)` for `v ∈ M`, or `None` if it is not integral.
fn superlattice(f: &TernaryForm, p: i64, v: [i64; 3]) -> Option<TernaryForm> {
    let b = hnf(&[v, [p, 0, 0], [0, p, 0], [0, 0, p]]);
    let a = congruent(&f.doubled_gram(), &b)?;
    if a.iter().flatten().any(|x| x % p != 0) || (0..3).any(|i| (a[i][i] / p) % 2 != 0) {
        return None;
    }
    TernaryForm::from_doubled(&a.map(|row| row.map(|x| x / p))).ok()
}

/// A lattice of level `m + 1` having `f` (of level `m`) as a Γ_p-descendant.
pub(crate) fn ascend(f: &TernaryForm, p: i64) -> Result<TernaryForm> {
    let m = hyperbolic_level(f, p).ok_or(Error::NotHyperbolicAtP(p))?;
    let target = reduce(f);
    let mut lines = Vec::new();
    for y in 0..p {
        for z in 0..p {
            lines.push([1, y, z]);
        }
    }
    for z in 0..p {
        lines.push([0, 1, z]);
    }
    lines.push([0, 0, 1]);
    for v in lines {
        if f.eval(&v) % p != 0 {
            continue;
        }
        let Some(n) = superlattice(f, p, v) else {
            continue;
        };
        if !n.is_primitive() || hyperbolic_level(&n, p) != Some(m + 1) {
            continue;
        }
        if gamma_descendants(&n, p)?.descendants.contains(&target) {
            return Ok(reduce(&n));
        }
    }
    Err(Error::HypothesisFailure(format!(
        "no level {} lattice above {f} at {p}",
        m + 1
    )))
}

/// A member of `𝒢_{L,p}(m)`.
pub(crate) fn slice_seed(l: &TernaryForm, p: i64, m: u32) -> Result<TernaryForm> {
    check_prime(p)?;
    if hyperbolic_level(l, p) != Some(0) {
        return Err(Error::NotHyperbolicAtP(p));
    }
    let mut f = reduce(l);
    for _ in 0..m {
        f = ascend(&f, p)?;
    }
    Ok(f)
}

/// The genus `𝒢_{L,p}(m)`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct FamilySlice {
    pub base: TernaryForm,
    pub p: i64,
    pub m: u32,
    pub table: GenusTable,
}

pub fn family_slice(l: &TernaryForm, p: i64, m: u32) -> Result<FamilySlice> {
    let seed = slice_seed(l, p, m)?;
    Ok(FamilySlice {
        base: *l,
        p,
        m,
        table: enumerate_genus(&seed),
    })
}

/// Checks both exchange statements for Γ_p and λ_q on `n`: `λ_q` of a Γ_p-descendant is a
/// Γ_p-descendant of `λ_q(N)`, and every Γ_q-descendant of a Γ_p-descendant of `N` is a
/// Γ_p-descendant of a Γ_q-descendant of `N`.
pub fn exchange_check(n: &TernaryForm, p: i64, q: i64) -> Result<bool> {
    check_prime(q)?;
    if p == q {
        return Err(Error::BadPrime(q));
    }
    let gp = gamma_descendants(n, p)?;
    let gq = gamma_descendants(n, q)?;
    let below_lambda = gamma_descendants(&lambda(n, q)?, p)?;
    for m in &gp.descendants {
        if !below_lambda.descendants.contains(&lambda(m, q)?) {
            return Ok(false);
        }
    }
    let mut targets = Vec::new();
    for k in &gq.descendants {
        targets.extend(gamma_descendants(k, p)?.descendants);
    }
    for m in &gp.descendants {
        for m2 in gamma_descendants(m, q)?.descendants {
            if !targets.contains(&m2) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
