//! Representable pairs and the bipartite spinor-genus graphs between two genera.

mod analyze;
mod hall;

pub use analyze::{
    analyze, analyze_graph, chain_decompose, half_modular_plane, l_nm, scaling_split, Convention,
    CorrespondenceReport, PrimeRecord, ScalingSplit,
};
pub use hall::{exceptional_transfer, hall_matching, transfer_holds};

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::form::TernaryForm;
use crate::genus::{enumerate_genus, spinor_partition, SpinorPartition};
use crate::linalg::{adjugate, det};
use crate::par;
use crate::reduce::reduce;
use crate::sublattice::{is_square_free, sublattices_of_index, Sublattice};
use crate::watson::{gamma_descendants, lambda_sublattice};

/// `([N],[M])` with `M^n` embedded in `N` with index `n`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct RepresentablePair {
    pub n_form: TernaryForm,
    pub m_form: TernaryForm,
    pub n: i64,
    /// The first sublattice of `N` (in Hermite normal form order) isometric to `M^n`.
    pub witness: Sublattice,
}

fn check_scaling(n_form: &TernaryForm, m_form: &TernaryForm, n: i64) -> Result<()> {
    if !is_square_free(n) {
        return Err(Error::NotSquareFree(n));
    }
    if m_form.four_d().checked_mul(n) != Some(n_form.four_d()) {
        return Err(Error::DiscriminantMismatch);
    }
    Ok(())
}

pub fn representable_pair(
    n_form: &TernaryForm,
    m_form: &TernaryForm,
    n: i64,
) -> Result<Option<RepresentablePair>> {
    check_scaling(n_form, m_form, n)?;
    let target = reduce(&m_form.scale_by(n)?);
    for s in sublattices_of_index(n_form, n)? {
        if reduce(&s.form()) == target {
            // nN ⊆ S, so N^n is represented by M as well.
            let adj = adjugate(&s.basis);
            let d = det(&s.basis) as i64;
            if adj.iter().flatten().any(|&x| (x * n) % d != 0) {
                return Err(Error::HypothesisFailure(
                    "nN is not contained in the witness".into(),
                ));
            }
            return Ok(Some(RepresentablePair {
                n_form: *n_form,
                m_form: *m_form,
                n,
                witness: s,
            }));
        }
    }
    Ok(None)
}

/// The classes `M'` with `M'^n` an index-`n` sublattice of `f`, reduced and deduplicated.
pub fn scaled_sublattice_classes(f: &TernaryForm, n: i64) -> Result<Vec<TernaryForm>> {
    let mut out = BTreeSet::new();
    for s in sublattices_of_index(f, n)? {
        let g = s.form();
        if g.content() % n == 0 {
            let c = g.coefficients().map(|x| x / n);
            out.insert(reduce(&TernaryForm::new(
                c[0], c[1], c[2], c[3], c[4], c[5],
            )?));
        }
    }
    Ok(out.into_iter().collect())
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum ScalingClass {
    Lambda,
    Gamma,
    /// Both constructions produce `M`.
    Both,
}

/// Whether a scaling-p pair comes from `Λ_p` or from a Γ_p-descendant.
pub fn scaling_p_classify(
    n_form: &TernaryForm,
    m_form: &TernaryForm,
    p: i64,
) -> Result<ScalingClass> {
    if representable_pair(n_form, m_form, p)?.is_none() {
        return Err(Error::HypothesisFailure(format!(
            "not a representable pair by scaling {p}"
        )));
    }
    if !n_form.is_primitive() || !m_form.is_primitive() {
        return Err(Error::NotPrimitive);
    }
    let target = reduce(m_form);
    let lam = reduce(&lambda_sublattice(n_form, p)?.form()) == reduce(&m_form.scale_by(p)?);
    let gam = match gamma_descendants(n_form, p) {
        Ok(g) => g.descendants.contains(&target),
        Err(Error::NotHyperbolicAtP(_)) => false,
        Err(e) => return Err(e),
    };
    match (lam, gam) {
        (true, false) => Ok(ScalingClass::Lambda),
        (false, true) => Ok(ScalingClass::Gamma),
        (true, true) => Ok(ScalingClass::Both),
        (false, false) => Err(Error::HypothesisFailure(format!(
            "scaling-{p} pair is neither Λ nor Γ"
        ))),
    }
}

/// A connected component of a correspondence graph.
#[derive(Clone, PartialEq, Eq, Debug, Default, Serialize, Deserialize)]
pub struct Component {
    pub n_parts: Vec<usize>,
    pub m_parts: Vec<usize>,
}

/// The bipartite graph on spinor genera of `gen(N)` and `gen(M)`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CorrespondenceGraph {
    pub n: i64,
    pub n_side: SpinorPartition,
    pub m_side: SpinorPartition,
    /// Representable class pairs `(i, j)`: class `i` of `gen(N)`, class `j` of `gen(M)`.
    pub pairs: Vec<(usize, usize)>,
    /// `(N-part, M-part, number of class pairs)`.
    pub edges: Vec<(usize, usize, usize)>,
}

pub fn build_graph(
    n_form: &TernaryForm,
    m_form: &TernaryForm,
    n: i64,
) -> Result<CorrespondenceGraph> {
    check_scaling(n_form, m_form, n)?;
    let n_side = spinor_partition(&enumerate_genus(n_form))?;
    let m_side = spinor_partition(&enumerate_genus(m_form))?;
    build_graph_from(n_side, m_side, n)
}

pub fn build_graph_from(
    n_side: SpinorPartition,
    m_side: SpinorPartition,
    n: i64,
) -> Result<CorrespondenceGraph> {
    let per_class: Vec<Vec<(usize, usize)>> = par::map(
        n_side.table.classes.iter().copied().enumerate().collect(),
        |(i, f)| {
            scaled_sublattice_classes(&f, n).map(|ms| {
                ms.iter()
                    .filter_map(|g| m_side.table.index_of_reduced(g))
                    .map(|j| (i, j))
                    .collect()
            })
        },
    )
    .into_iter()
    .collect::<Result<_>>()?;
    let pairs: Vec<(usize, usize)> = per_class.into_iter().flatten().collect();
    let mut edges: Vec<(usize, usize, usize)> = Vec::new();
    for &(i, j) in &pairs {
        let key = (n_side.part_of(i), m_side.part_of(j));
        match edges.iter_mut().find(|e| (e.0, e.1) == key) {
            Some(e) => e.2 += 1,
            None => edges.push((key.0, key.1, 1)),
        }
    }
    edges.sort();
    Ok(CorrespondenceGraph {
        n,
        n_side,
        m_side,
        pairs,
        edges,
    })
}

impl CorrespondenceGraph {
    pub fn adjacency(&self) -> BTreeSet<(usize, usize)> {
        self.edges.iter().map(|e| (e.0, e.1)).collect()
    }

    /// Degrees of the N-side and M-side spinor genera.
    pub fn degrees(&self) -> (Vec<usize>, Vec<usize>) {
        let mut dn = vec![0; self.n_side.g()];
        let mut dm = vec![0; self.m_side.g()];
        for &(a, b, _) in &self.edges {
            dn[a] += 1;
            dm[b] += 1;
        }
        (dn, dm)
    }

    /// `(u, v)` if every N-side vertex has degree `u` and every M-side vertex degree `v`.
    pub fn regularity(&self) -> Option<(usize, usize)> {
        let (dn, dm) = self.degrees();
        let u = dn[0];
        let v = dm[0];
        (dn.iter().all(|&x| x == u) && dm.iter().all(|&x| x == v)).then_some((u, v))
    }

    /// Whether every class of both genera occurs in some pair.
    pub fn covers(&self) -> bool {
        let mut a = vec![false; self.n_side.table.len()];
        let mut b = vec![false; self.m_side.table.len()];
        for &(i, j) in &self.pairs {
            a[i] = true;
            b[j] = true;
        }
        a.iter().chain(&b).all(|&x| x)
    }

    /// Connected components as (N-parts, M-parts), ordered by smallest N-part.
    pub fn components(&self) -> Vec<Component> {
        let gn = self.n_side.g();
        let gm = self.m_side.g();
        let mut root: Vec<usize> = (0..gn + gm).collect();
        fn find(r: &mut [usize], mut x: usize) -> usize {
            while r[x] != x {
                r[x] = r[r[x]];
                x = r[x];
            }
            x
        }
        for &(a, b, _) in &self.edges {
            let (x, y) = (find(&mut root, a), find(&mut root, gn + b));
            root[x.max(y)] = x.min(y);
        }
        let mut comps: Vec<(usize, Component)> = Vec::new();
        for v in 0..gn + gm {
            let r = find(&mut root, v);
            let k = match comps.iter().position(|c| c.0 == r) {
                Some(k) => k,
                None => {
                    comps.push((r, Component::default()));
                    comps.len() - 1
                }
            };
            if v < gn {
                comps[k].1.n_parts.push(v);
            } else {
                comps[k].1.m_parts.push(v - gn);
            }
        }
        comps.into_iter().map(|c| c.1).collect()
    }

    /// Whether every component is complete bipartite.
    pub fn components_complete(&self) -> bool {
        let adj = self.adjacency();
        self.components().iter().all(|c| {
            c.n_parts
                .iter()
                .all(|&a| c.m_parts.iter().all(|&b| adj.contains(&(a, b))))
        })
    }

    /// The correspondence respects spinor genus iff each spinor genus on either side is
    /// adjacent to exactly one on the other.
    pub fn respects_spinor_genus(&self) -> bool {
        let (dn, dm) = self.degrees();
        dn.iter().chain(&dm).all(|&d| d == 1)
    }

    pub fn to_dot(&self) -> String {
        let mut s = format!("graph correspondence_n{} {{\n", self.n);
        for k in 0..self.n_side.g() {
            let rep = self.n_side.table.classes[self.n_side.parts[k][0]];
            let _ = writeln!(s, "  N{k} [label=\"spn {rep}\"];");
        }
        for k in 0..self.m_side.g() {
            let rep = self.m_side.table.classes[self.m_side.parts[k][0]];
            let _ = writeln!(s, "  M{k} [label=\"spn {rep}\"];");
        }
        for &(a, b, w) in &self.edges {
            let _ = writeln!(s, "  N{a} -- M{b} [label=\"{w}\"];");
        }
        s.push_str("}\n");
        s
    }
}

/// Spinor-part adjacency of the composite correspondence through a middle genus.
pub fn juxtapose(
    first: &CorrespondenceGraph,
    second: &CorrespondenceGraph,
) -> BTreeSet<(usize, usize)> {
    let a = first.adjacency();
    let b = second.adjacency();
    let mut out = BTreeSet::new();
    for &(x, y) in &a {
        for &(y2, z) in &b {
            if y == y2 {
                out.insert((x, z));
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_pair() {
        let l: TernaryForm = "2,3,5,1,1,1".parse().unwrap();
        let w = representable_pair(&l, &l, 1).unwrap().unwrap();
        assert_eq!(w.witness.index(), 1);
        assert!(matches!(
            representable_pair(&l, &l, 4),
            Err(Error::NotSquareFree(4))
        ));
        assert!(matches!(
            representable_pair(&l, &l, 3),
            Err(Error::DiscriminantMismatch)
        ));
    }

    #[test]
    fn lambda_and_gamma_pairs() {
        let n = TernaryForm::diagonal(1, 1, 80).unwrap();
        let m = TernaryForm::diagonal(1, 1, 16).unwrap();
        assert_eq!(scaling_p_classify(&n, &m, 5).unwrap(), ScalingClass::Gamma);
        let m8 = TernaryForm::diagonal(1, 1, 8).unwrap();
        assert_eq!(
            scaling_p_classify(&m, &m8, 2).unwrap(),
            ScalingClass::Lambda
        );
    }
}
