use super::analyze::analyze_graph;
use super::{build_graph, Convention, CorrespondenceGraph};
use crate::error::{Error, Result};
use crate::form::TernaryForm;
use crate::genus::{complete_exceptional_system_check, spn_represents};

/// A perfect matching of N-side and M-side spinor genera (augmenting paths, trying partners in
/// increasing order).
pub fn hall_matching(g: &CorrespondenceGraph) -> Result<Vec<(usize, usize)>> {
    let (gn, gm) = (g.n_side.g(), g.m_side.g());
    if gn != gm {
        return Err(Error::NoMatching);
    }
    let mut adj = vec![Vec::new(); gn];
    for &(a, b, _) in &g.edges {
        adj[a].push(b);
    }
    let mut owner: Vec<Option<usize>> = vec![None; gm];
    fn augment(
        a: usize,
        adj: &[Vec<usize>],
        owner: &mut [Option<usize>],
        seen: &mut [bool],
    ) -> bool {
        for &b in &adj[a] {
            if !seen[b] {
                seen[b] = true;
                if owner[b].is_none_or(|c| augment(c, adj, owner, seen)) {
                    owner[b] = Some(a);
                    return true;
                }
            }
        }
        false
    }
    for a in 0..gn {
        if !augment(a, &adj, &mut owner, &mut vec![false; gm]) {
            return Err(Error::NoMatching);
        }
    }
    let mut out: Vec<(usize, usize)> = owner
        .iter()
        .enumerate()
        .map(|(b, a)| (a.expect("perfect"), b))
        .collect();
    out.sort();
    Ok(out)
}

/// Whether, for each matched pair of spinor genera, every class on either side has a
/// representable partner in the other.
pub fn transfer_holds(g: &CorrespondenceGraph, matching: &[(usize, usize)]) -> bool {
    matching.iter().all(|&(a, b)| {
        let na = &g.n_side.parts[a];
        let mb = &g.m_side.parts[b];
        let linked = |i: usize, j: usize| g.pairs.contains(&(i, j));
        na.iter().all(|&i| mb.iter().any(|&j| linked(i, j)))
            && mb.iter().all(|&j| na.iter().any(|&i| linked(i, j)))
    })
}

/// Transfers a complete system of spinor exceptional integers from `gen(M)` to `gen(N)`.
pub fn exceptional_transfer(
    n_form: &TernaryForm,
    m_form: &TernaryForm,
    n: i64,
    s: &[i64],
    convention: Convention,
) -> Result<Vec<i64>> {
    let graph = build_graph(n_form, m_form, n)?;
    let report = analyze_graph(&graph, n_form, m_form, convention)?;
    if !report.respects || report.g_n != report.g_nm || report.g_m != report.g_nm {
        return Err(Error::HypothesisFailure(
            "the correspondence does not respect spinor genus".into(),
        ));
    }
    if !complete_exceptional_system_check(&graph.m_side, s) {
        return Err(Error::HypothesisFailure(format!(
            "{s:?} is not complete for gen(M)"
        )));
    }
    let scaled: Vec<i64> = s.iter().map(|k| k * n).collect();
    for &(a, b, _) in &graph.edges {
        for &k in s {
            if spn_represents(&graph.n_side, a, n * k, false)
                != spn_represents(&graph.m_side, b, k, false)
            {
                return Err(Error::HypothesisFailure(format!(
                    "spinor genus {a} disagrees on {}",
                    n * k
                )));
            }
        }
    }
    if !complete_exceptional_system_check(&graph.n_side, &scaled) {
        return Err(Error::HypothesisFailure(format!(
            "{scaled:?} is not complete for gen(N)"
        )));
    }
    Ok(scaled)
}
