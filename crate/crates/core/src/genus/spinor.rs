use serde::{Deserialize, Serialize};

use super::{idele_class_group, neighbors::p_neighbors, smallest_good_prime, GenusTable};
use crate::error::{Error, Result};
use crate::form::TernaryForm;
use crate::par;
use crate::sublattice::is_prime;
use crate::vectors::represents;

/// Partition of a genus into proper spinor genera.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SpinorPartition {
    pub table: GenusTable,
    /// Disjoint sorted index sets into `table.classes`, ordered by smallest member.
    pub parts: Vec<Vec<usize>>,
    /// Prime used for the neighbor walk.
    pub prime: i64,
    /// Idele class of each part relative to the first, when the idele model agrees with the walk.
    pub labels: Option<Vec<u64>>,
}

impl SpinorPartition {
    pub fn g(&self) -> usize {
        self.parts.len()
    }

    pub fn part_of(&self, class: usize) -> usize {
        self.parts
            .iter()
            .position(|p| p.contains(&class))
            .expect("partition covers the genus")
    }

    pub fn part_of_form(&self, f: &TernaryForm) -> Option<usize> {
        self.table.index_of(f).map(|i| self.part_of(i))
    }

    pub fn part_forms(&self, part: usize) -> Vec<TernaryForm> {
        self.parts[part]
            .iter()
            .map(|&i| self.table.classes[i])
            .collect()
    }
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

fn neighbor_indices(t: &GenusTable, f: &TernaryForm, l: i64) -> Result<Vec<usize>> {
    p_neighbors(f, l)?
        .iter()
        .map(|g| t.index_of_reduced(g).ok_or(Error::IncompleteGenus))
        .collect()
}

/// Proper spinor genera via the parity of ℓ-neighbor walks for the smallest admissible ℓ:
/// the spinor genus of a class consists of the classes reached by walks of even length.
pub fn spinor_partition(t: &GenusTable) -> Result<SpinorPartition> {
    let h = t.len();
    let l = smallest_good_prime(t.four_d);
    if h == 1 {
        let group = idele_class_group(&t.classes[0]);
        let labels = (group.order() == 1).then(|| vec![0]);
        return Ok(SpinorPartition {
            table: t.clone(),
            parts: vec![vec![0]],
            prime: l,
            labels,
        });
    }
    let adjacency: Vec<Vec<usize>> = par::map(t.classes.clone(), |f| neighbor_indices(t, &f, l))
        .into_iter()
        .collect::<Result<_>>()?;
    let mut dsu = Dsu((0..2 * h).collect());
    for (i, adj) in adjacency.iter().enumerate() {
        for &j in adj {
            dsu.union(2 * i, 2 * j + 1);
            dsu.union(2 * i + 1, 2 * j);
        }
    }
    let mut parts: Vec<Vec<usize>> = Vec::new();
    let mut roots: Vec<usize> = Vec::new();
    for i in 0..h {
        let r = dsu.find(2 * i);
        match roots.iter().position(|&x| x == r) {
            Some(k) => parts[k].push(i),
            None => {
                roots.push(r);
                parts.push(vec![i]);
            }
        }
    }
    let mut p = SpinorPartition {
        table: t.clone(),
        parts,
        prime: l,
        labels: None,
    };
    p.labels = idele_labels(&p, &adjacency);
    Ok(p)
}

/// Labels parts by idele classes, walking with several primes; `None` on any disagreement.
fn idele_labels(p: &SpinorPartition, adjacency: &[Vec<usize>]) -> Option<Vec<u64>> {
    let group = idele_class_group(&p.table.classes[0]);
    if group.order() != p.g() as u64 {
        return None;
    }
    let g = p.g();
    let mut labels: Vec<Option<u64>> = vec![None; g];
    labels[0] = Some(0);
    let walk = |labels: &mut Vec<Option<u64>>, from: usize, to: usize, step: u64| -> bool {
        let (pf, pt) = (p.part_of(from), p.part_of(to));
        let want = labels[pf].map(|x| x ^ step);
        match (labels[pt], want) {
            (Some(a), Some(b)) => a == b,
            (None, b) => {
                labels[pt] = b;
                true
            }
            _ => true,
        }
    };
    let jl = group.class_of_prime(p.prime);
    for _ in 0..g {
        for (i, adj) in adjacency.iter().enumerate() {
            for &j in adj {
                if labels[p.part_of(i)].is_some() && !walk(&mut labels, i, j, jl) {
                    return None;
                }
            }
        }
    }
    let mut l = p.prime;
    let mut tries = 0;
    while labels.iter().any(Option::is_none) && tries < 8 {
        l = (l + 1..)
            .find(|&q| is_prime(q) && p.table.four_d % q != 0)
            .unwrap();
        tries += 1;
        let step = group.class_of_prime(l);
        if step == 0 {
            continue;
        }
        for k in 0..g {
            if labels[k].is_none() {
                continue;
            }
            let rep = p.parts[k][0];
            let adj = neighbor_indices(&p.table, &p.table.classes[rep], l).ok()?;
            for j in adj {
                if !walk(&mut labels, rep, j, step) {
                    return None;
                }
            }
        }
    }
    let labels: Vec<u64> = labels.into_iter().collect::<Option<_>>()?;
    let mut sorted = labels.clone();
    sorted.sort();
    sorted.dedup();
    (sorted.len() == g).then_some(labels)
}

/// Whether some class in part `i` represents `k` (primitively if `primitive`).
pub fn spn_represents(p: &SpinorPartition, i: usize, k: i64, primitive: bool) -> bool {
    p.parts[i]
        .iter()
        .any(|&c| represents(&p.table.classes[c], k, primitive))
}

/// Whether the representation patterns of `s` over the spinor genera realise every subset of `s`
/// exactly once.
pub fn complete_exceptional_system_check(p: &SpinorPartition, s: &[i64]) -> bool {
    complete_exceptional_system_check_with(p, s, false)
}

pub fn complete_exceptional_system_check_with(
    p: &SpinorPartition,
    s: &[i64],
    primitive: bool,
) -> bool {
    if s.len() >= 16 || 1usize << s.len() != p.g() {
        return false;
    }
    let mut seen: Vec<u32> = (0..p.g())
        .map(|i| {
            s.iter()
                .enumerate()
                .filter(|(_, &k)| spn_represents(p, i, k, primitive))
                .map(|(b, _)| 1u32 << b)
                .sum()
        })
        .collect();
    seen.sort();
    seen.dedup();
    seen.len() == p.g()
}
