use serde::{Deserialize, Serialize};

use super::{build_graph, hall_matching, representable_pair, Component, CorrespondenceGraph};
use crate::error::{Error, Result};
use crate::form::TernaryForm;
use crate::genus::{enumerate_genus, spinor_partition};
use crate::linalg::{mul, smith, Mat3};
use crate::local::{jordan, legendre, pieces, unit_residue, JordanBlock, Piece};
use crate::reduce::reduce;
use crate::sublattice::{ord, prime_factors};

/// Which discriminant decides the parity split of the primes in `n₂`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub enum Convention {
    /// Parity of `ord_q(4·dM)`.
    #[serde(rename = "dM")]
    DM,
    /// Parity of `ord_q(4·dN)`.
    #[serde(rename = "dN")]
    #[default]
    DN,
}

impl std::str::FromStr for Convention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dM" => Ok(Convention::DM),
            "dN" => Ok(Convention::DN),
            _ => Err(Error::Parse(format!("unknown convention {s:?}"))),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct PrimeRecord {
    pub p: i64,
    pub jordan: Vec<JordanBlock>,
    /// `N_p` has a ½Z_p-modular constituent of rank 2.
    pub half_modular_plane: bool,
    /// Whether that constituent is isotropic.
    pub isotropic: Option<bool>,
    pub ord_4dm: u32,
    pub ord_4dn: u32,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct ScalingSplit {
    pub n: i64,
    pub n1: i64,
    pub n2: i64,
    pub n2e: i64,
    pub n2o: i64,
    pub convention: Convention,
    pub records: Vec<PrimeRecord>,
}

/// `Some(isotropic)` if `f_p` has a ½Z_p-modular constituent of rank 2.
pub fn half_modular_plane(f: &TernaryForm, p: i64) -> Option<bool> {
    let scale = if p == 2 { -1 } else { 0 };
    jordan(f, p)
        .iter()
        .find(|b| b.scale == scale && b.rank == 2)?;
    let pi = p as i128;
    let unimodular: Vec<Piece> = pieces(&f.doubled_gram(), p)
        .into_iter()
        .filter(|x| x.val() == 0)
        .collect();
    let minus_det = match &unimodular[..] {
        [Piece::One { unit: u1, .. }, Piece::One { unit: u2, .. }] => -(u1 * u2),
        [Piece::Two { m, .. }] => -(m[0][0] * m[1][1] - m[0][1] * m[1][0]),
        _ => return Some(false),
    };
    Some(if p == 2 {
        unit_residue(2, &minus_det, 8) == 1
    } else {
        legendre(unit_residue(pi, &minus_det, pi), pi) == 1
    })
}

pub fn scaling_split(
    n_form: &TernaryForm,
    m_form: &TernaryForm,
    n: i64,
    convention: Convention,
) -> Result<ScalingSplit> {
    representable_pair(n_form, m_form, n)?.ok_or(Error::NotRepresentable(n))?;
    let mut s = ScalingSplit {
        n,
        n1: 1,
        n2: 1,
        n2e: 1,
        n2o: 1,
        convention,
        records: Vec::new(),
    };
    for (p, _) in prime_factors(n) {
        let plane = half_modular_plane(n_form, p);
        let rec = PrimeRecord {
            p,
            jordan: jordan(n_form, p),
            half_modular_plane: plane.is_some(),
            isotropic: plane,
            ord_4dm: ord(p, m_form.four_d()),
            ord_4dn: ord(p, n_form.four_d()),
        };
        if rec.half_modular_plane {
            s.n2 *= p;
            let o = match convention {
                Convention::DM => rec.ord_4dm,
                Convention::DN => rec.ord_4dn,
            };
            if o % 2 == 0 {
                s.n2e *= p;
            } else {
                s.n2o *= p;
            }
        } else {
            s.n1 *= p;
        }
        s.records.push(rec);
    }
    Ok(s)
}

/// A basis `x₁, x₂, x₃` of `N` with `M^n ≅ Zx₁ + Zx₂ + Z(n·x₃)`.
fn adapted_basis(n_form: &TernaryForm, m_form: &TernaryForm, n: i64) -> Result<Mat3> {
    let pair = representable_pair(n_form, m_form, n)?.ok_or(Error::NotRepresentable(n))?;
    let (u, d, _) = smith(&pair.witness.basis);
    debug_assert_eq!((d[0][0].abs(), d[1][1].abs(), d[2][2].abs()), (1, 1, n));
    Ok(u)
}

/// `(Zx₁ + Zx₂ + Z(k·x₃))^{1/k}` for an adapted basis.
fn shrink(n_form: &TernaryForm, u: &Mat3, k: i64) -> Result<TernaryForm> {
    let b = mul(u, &[[1, 0, 0], [0, 1, 0], [0, 0, k]]);
    let g = n_form.transform(&b)?;
    if g.content() % k != 0 {
        return Err(Error::NonIntegralResult);
    }
    let c = g.coefficients().map(|x| x / k);
    Ok(reduce(&TernaryForm::new(
        c[0], c[1], c[2], c[3], c[4], c[5],
    )?))
}

/// The intermediate lattices `N(p)` for the primes `p | n`.
pub fn chain_decompose(
    n_form: &TernaryForm,
    m_form: &TernaryForm,
    n: i64,
) -> Result<Vec<(i64, TernaryForm)>> {
    let u = adapted_basis(n_form, m_form, n)?;
    prime_factors(n)
        .into_iter()
        .map(|(p, _)| Ok((p, shrink(n_form, &u, p)?)))
        .collect()
}

/// `L_{N,M} = (Zx₁ + Zx₂ + Z(n₁n₂(e)·x₃))^{1/n₁n₂(e)}`.
pub fn l_nm(
    n_form: &TernaryForm,
    m_form: &TernaryForm,
    n: i64,
    convention: Convention,
) -> Result<TernaryForm> {
    let split = scaling_split(n_form, m_form, n, convention)?;
    let u = adapted_basis(n_form, m_form, n)?;
    shrink(n_form, &u, split.n1 * split.n2e)
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CorrespondenceReport {
    pub n: i64,
    pub split: ScalingSplit,
    #[serde(rename = "gN")]
    pub g_n: usize,
    #[serde(rename = "gM")]
    pub g_m: usize,
    #[serde(rename = "L_NM")]
    pub l_nm: TernaryForm,
    #[serde(rename = "g_NM")]
    pub g_nm: usize,
    pub alpha: usize,
    pub beta: usize,
    pub components: Vec<Component>,
    /// Every component is complete bipartite.
    pub complete: bool,
    /// Every component is `K_{α,β}` with `α·g_{N,M} = g(M)` and `β·g_{N,M} = g(N)`.
    pub shape_matches: bool,
    pub respects: bool,
    pub matching: Option<Vec<(usize, usize)>>,
}

pub fn analyze(
    n_form: &TernaryForm,
    m_form: &TernaryForm,
    n: i64,
    convention: Convention,
) -> Result<CorrespondenceReport> {
    let graph = build_graph(n_form, m_form, n)?;
    analyze_graph(&graph, n_form, m_form, convention)
}

/// [`analyze`] on an already built graph.
pub fn analyze_graph(
    graph: &CorrespondenceGraph,
    n_form: &TernaryForm,
    m_form: &TernaryForm,
    convention: Convention,
) -> Result<CorrespondenceReport> {
    let n = graph.n;
    let split = scaling_split(n_form, m_form, n, convention)?;
    let l = l_nm(n_form, m_form, n, convention)?;
    let g_nm = spinor_partition(&enumerate_genus(&l))?.g();
    let (g_n, g_m) = (graph.n_side.g(), graph.m_side.g());
    let divides = g_n % g_nm == 0 && g_m % g_nm == 0;
    let (alpha, beta) = (g_m / g_nm, g_n / g_nm);
    let components = graph.components();
    let complete = graph.components_complete();
    let shape_matches = divides
        && complete
        && components
            .iter()
            .all(|c| c.m_parts.len() == alpha && c.n_parts.len() == beta);
    let matching = if g_n == g_m {
        hall_matching(graph).ok()
    } else {
        None
    };
    Ok(CorrespondenceReport {
        n,
        split,
        g_n,
        g_m,
        l_nm: l,
        g_nm,
        alpha,
        beta,
        components,
        complete,
        shape_matches,
        respects: graph.respects_spinor_genus(),
        matching,
    })
}
