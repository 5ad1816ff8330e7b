use serde::{Deserialize, Serialize};

use super::{jordan, local_symbol, local_symbol_of_matrix, UnitClass};
use crate::error::{Error, Result};
use crate::form::TernaryForm;
use crate::sublattice::ord;

/// A matched row of the necessary conditions for failing H-type at `p`.
/// Units are residues mod 8 at p = 2 and 1 (square) or −1 (nonsquare) at odd p.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct TableRow {
    pub p: i64,
    pub alpha: u32,
    pub beta: u32,
    pub eps1: i64,
    pub eps2: i64,
    /// Unit rescaling used at p = 2.
    pub eta: i64,
    pub row: String,
}

/// The first table row matched by a presentation `L_p ≅ ⟨1, p^α ε₁, p^β ε₂⟩` (after a unit
/// rescaling), or `None` when no row applies, which certifies `g(L) = g(λ_p(L))`.
pub fn h_type_table_match(f: &TernaryForm, p: i64) -> Result<Option<TableRow>> {
    if !f.is_primitive() {
        return Err(Error::NotPrimitive);
    }
    Ok(if p == 2 { dyadic(f) } else { odd(f, p) })
}

fn odd(f: &TernaryForm, p: i64) -> Option<TableRow> {
    let blocks = jordan(f, p);
    if blocks.len() != 3 {
        return None;
    }
    let sq = |i: usize| match blocks[i].unit {
        UnitClass::Odd { square } => square,
        UnitClass::Dyadic { .. } => unreachable!(),
    };
    let (alpha, beta) = (blocks[1].scale as u32, blocks[2].scale as u32);
    let e1 = if sq(1) == sq(0) { 1 } else { -1 };
    let e2 = if sq(2) == sq(0) { 1 } else { -1 };
    let row = match (alpha, beta) {
        (1, 2) if e2 == 1 => {
            if e1 == 1 {
                "(1,2) (1,1)"
            } else {
                "(1,2) (D,1)"
            }
        }
        (2, k) if k >= 3 && e1 == 1 && e2 == 1 => "(2,k), k>=3 (1,1)",
        (2, k) if k >= 3 && k % 2 == 1 && e1 == 1 && e2 == -1 => "(2,2k+1), k>=1 (1,D)",
        _ => return None,
    };
    Some(TableRow {
        p,
        alpha,
        beta,
        eps1: e1,
        eps2: e2,
        eta: 1,
        row: row.into(),
    })
}

fn in_q(a: i64, b: i64, u: i64) -> bool {
    // units represented by <a, 2b>
    let u = u.rem_euclid(8);
    u == a.rem_euclid(8) || u == (a + 2 * b).rem_euclid(8)
}

pub(crate) fn dyadic_row(alpha: u32, beta: u32, e1: i64, e2: i64) -> Option<&'static str> {
    let m8 = |x: i64| x.rem_euclid(8);
    let m4 = |x: i64| x.rem_euclid(4);
    let hit = |c: bool, s: &'static str| c.then_some(s);
    match (alpha, beta) {
        (0, 4) => hit(m4(e1) == 1 && m4(e2) == 1, "(0,4) e1=e2=1 (4)"),
        (1, 6) => hit(in_q(1, e1, e2), "(1,6) e2 in Q<1,2e1>"),
        (2, 2) => hit(m8(e1) == 1 && m4(e2) == 3, "(2,2) e1=1, e2=3 (4)"),
        (2, 4) => hit(m4(e1) == 1, "(2,4) e1=1 (4)"),
        (2, 6) => hit(m4(e1) == 1, "(2,6) e1=1 (4)"),
        (2, b) if b >= 7 && b % 2 == 1 => {
            hit(m8(e1) == m8(2 * e2 + 3), "(2,2k-1), k>=4 e1=2e2+3 (8)")
        }
        (2, b) if b >= 8 && b % 2 == 0 => hit(m4(e1) == 1, "(2,2k), k>=4 e1=1 (4)"),
        (3, 6) => hit(m8(e2) == 1, "(3,6) e2=1 (8)"),
        (4, 4) => hit(m4(e1) == 1 && m4(e2) == 1, "(4,4) e1=e2=1 (4)"),
        (5, 5) => hit(m8(e2) == m8(3 * e1 + 6), "(5,5) e2=3e1+6 (8)"),
        (5, 6) => hit(in_q(1, e1, 2 * e1 + e2), "(5,6) 2e1+e2 in Q<1,2e1>"),
        (5, 7) => hit(m4(e1 * e2) == 1, "(5,7) e1e2=1 (4)"),
        (5, 8) => hit(m8(e2) == m8(2 * e1 + 5), "(5,8) e2=2e1+5 (8)"),
        (5, 9) => hit(m4(e1 * e2) == 1, "(5,9) e1e2=1 (4)"),
        (5, b) if b >= 10 && b % 2 == 0 => {
            hit(m8(1 + 2 * e1) != m8(e2), "(5,2k), k>=5 1+2e1!=e2 (8)")
        }
        (5, b) if b >= 11 && b % 2 == 1 => hit(
            m8(1 + 2 * e1) != m8(e1 * e2),
            "(5,2k+1), k>=5 1+2e1!=e1e2 (8)",
        ),
        (6, 7) => hit(!in_q(e1, e2, 5), "(6,7) 5 not in Q<e1,2e2>"),
        (6, 9) => hit(!in_q(e1, e2, 5), "(6,9) 5 not in Q<e1,2e2>"),
        (6, b) if b >= 11 && b % 2 == 1 => hit(m8(e1) != 5, "(6,2k-1), k>=6 e1!=5 (8)"),
        (6, b) if b >= 12 && b % 2 == 0 => hit(
            m8(e1) != 5 && m8(e2) != 5 && (m8(e1) == m8(e2) || m8(e1) == 1 || m8(e2) == 1),
            "(6,2k), k>=6 e1,e2!=5 (8), e1!=e2 => e1 or e2=1 (8)",
        ),
        _ => None,
    }
}

fn dyadic(f: &TernaryForm) -> Option<TableRow> {
    let target = local_symbol(f, 2);
    let total = ord(2, f.four_d()).checked_sub(2)?;
    for alpha in 0..=total / 2 {
        let beta = total - alpha;
        for eta in [1i64, 3, 5, 7] {
            for e1 in [1i64, 3, 5, 7] {
                for e2 in [1i64, 3, 5, 7] {
                    let Some(row) = dyadic_row(alpha, beta, e1, e2) else {
                        continue;
                    };
                    let m = [
                        [2 * eta, 0, 0],
                        [0, (2i64 << alpha) * (eta * e1 % 8), 0],
                        [0, 0, (2i64 << beta) * (eta * e2 % 8)],
                    ];
                    if local_symbol_of_matrix(&m, 2) == target {
                        return Some(TableRow {
                            p: 2,
                            alpha,
                            beta,
                            eps1: e1,
                            eps2: e2,
                            eta,
                            row: row.into(),
                        });
                    }
                }
            }
        }
    }
    None
}
