use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::gamma::{ascend, gamma_descendants, hyperbolic_level, slice_seed};
use super::lambda;
use crate::error::{Error, Result};
use crate::form::TernaryForm;
use crate::genus::{
    enumerate_genus, idele_class_group, spinor_partition, GenusTable, SpinorPartition,
};
use crate::par;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum SliceKind {
    O,
    E,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct WatsonEdge {
    pub class: TernaryForm,
    pub v1: usize,
    pub v2: usize,
}

/// Vertices are the classes of `𝒢_{L,p}(m)`, edges the classes of `𝒢_{L,p}(m+1)` joining
/// their two Γ_p-descendants.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct WatsonMultigraph {
    pub p: i64,
    pub m: u32,
    #[serde(rename = "type")]
    pub kind: SliceKind,
    pub vertices: Vec<TernaryForm>,
    pub edges: Vec<WatsonEdge>,
}

impl WatsonMultigraph {
    /// Vertex sets of the connected components, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.vertices.len();
        let mut root: Vec<usize> = (0..n).collect();
        fn find(r: &mut [usize], mut x: usize) -> usize {
            while r[x] != x {
                r[x] = r[r[x]];
                x = r[x];
            }
            x
        }
        for e in &self.edges {
            let (a, b) = (find(&mut root, e.v1), find(&mut root, e.v2));
            root[a.max(b)] = a.min(b);
        }
        let mut comps: Vec<Vec<usize>> = Vec::new();
        let mut reps: Vec<usize> = Vec::new();
        for v in 0..n {
            let r = find(&mut root, v);
            match reps.iter().position(|&x| x == r) {
                Some(k) => comps[k].push(v),
                None => {
                    reps.push(r);
                    comps.push(vec![v]);
                }
            }
        }
        comps
    }

    /// Edge indices of the component containing vertex `v`.
    pub fn component_edges(&self, v: usize) -> Vec<usize> {
        let comp = self
            .components()
            .into_iter()
            .find(|c| c.contains(&v))
            .unwrap_or_default();
        (0..self.edges.len())
            .filter(|&i| comp.contains(&self.edges[i].v1))
            .collect()
    }

    /// The type read off from component contents: `O` if every component is one spinor
    /// genus, `E` if every component is two, `None` otherwise.
    pub fn kind_from_components(&self, vertices: &SpinorPartition) -> Option<SliceKind> {
        let mut counts = Vec::new();
        for comp in self.components() {
            let mut parts: Vec<usize> = comp.iter().map(|&v| vertices.part_of(v)).collect();
            parts.sort_unstable();
            parts.dedup();
            let full = parts
                .iter()
                .all(|&k| vertices.parts[k].iter().all(|v| comp.contains(v)));
            if !full {
                return None;
            }
            counts.push(parts.len());
        }
        match counts.iter().max() {
            Some(1) => Some(SliceKind::O),
            Some(2) if counts.iter().all(|&c| c == 2) => Some(SliceKind::E),
            _ => None,
        }
    }

    pub fn to_dot(&self) -> String {
        let mut s = format!("graph watson_p{}_m{} {{\n", self.p, self.m);
        for (i, v) in self.vertices.iter().enumerate() {
            let _ = writeln!(s, "  v{i} [label=\"{v}\"];");
        }
        for e in &self.edges {
            let _ = writeln!(s, "  v{} -- v{} [label=\"{}\"];", e.v1, e.v2, e.class);
        }
        s.push_str("}\n");
        s
    }
}

fn graph_from_tables(
    p: i64,
    m: u32,
    kind: SliceKind,
    vertices: &GenusTable,
    edges: &GenusTable,
) -> Result<WatsonMultigraph> {
    let edges: Vec<WatsonEdge> = par::map(edges.classes.clone(), |class| -> Result<WatsonEdge> {
        let pair = gamma_descendants(&class, p)?;
        let mut ends = pair.descendants.map(|d| vertices.index_of_reduced(&d));
        ends.sort();
        match ends {
            [Some(v1), Some(v2)] => Ok(WatsonEdge { class, v1, v2 }),
            _ => Err(Error::IncompleteGenus),
        }
    })
    .into_iter()
    .collect::<Result<_>>()?;
    Ok(WatsonMultigraph {
        p,
        m,
        kind,
        vertices: vertices.classes.clone(),
        edges,
    })
}

/// O/E type of `𝒢_{L,p}(m)` for `L` of level 0: E-type iff `m` is even and `j(p)` is not in
/// `P_D J^L`.
pub fn slice_kind(l: &TernaryForm, p: i64, m: u32) -> Result<SliceKind> {
    if hyperbolic_level(l, p) != Some(0) {
        return Err(Error::NotHyperbolicAtP(p));
    }
    if m % 2 == 1 || idele_class_group(l).class_of_local_prime(p) == 0 {
        Ok(SliceKind::O)
    } else {
        Ok(SliceKind::E)
    }
}

pub fn watson_graph(l: &TernaryForm, p: i64, m: u32) -> Result<WatsonMultigraph> {
    let seed = slice_seed(l, p, m)?;
    let kind = slice_kind(l, p, m)?;
    let vertices = enumerate_genus(&seed);
    let edges = enumerate_genus(&ascend(&seed, p)?);
    graph_from_tables(p, m, kind, &vertices, &edges)
}

/// The classes of `Cspn(F)` for `F` in `𝒢_{L,p}(m)`.
pub fn cspn(f: &TernaryForm, p: i64, m: u32) -> Result<Vec<TernaryForm>> {
    if hyperbolic_level(f, p) != Some(m) {
        return Err(Error::NotHyperbolicAtP(p));
    }
    let mut base = *f;
    for _ in 0..m / 2 {
        base = lambda(&base, p)?;
    }
    let kind = if m % 2 == 1 {
        SliceKind::O
    } else {
        slice_kind(&base, p, 0)?
    };
    let table = enumerate_genus(f);
    let part = spinor_partition(&table)?;
    let own = part.part_of_form(f).ok_or(Error::IncompleteGenus)?;
    if kind == SliceKind::O {
        return Ok(part.part_forms(own));
    }
    let jp = idele_class_group(f).class_of_local_prime(p);
    let partner = part.labels.as_ref().and_then(|labels| {
        (jp != 0)
            .then(|| labels.iter().position(|&x| x == labels[own] ^ jp))
            .flatten()
    });
    let mut out = match partner {
        Some(k) => [part.part_forms(own), part.part_forms(k)].concat(),
        None => {
            let edges = enumerate_genus(&ascend(f, p)?);
            let graph = graph_from_tables(p, m, kind, &table, &edges)?;
            let v = table.index_of(f).ok_or(Error::IncompleteGenus)?;
            let comp = graph
                .components()
                .into_iter()
                .find(|c| c.contains(&v))
                .unwrap_or_default();
            comp.iter().map(|&i| table.classes[i]).collect()
        }
    };
    out.sort();
    Ok(out)
}
