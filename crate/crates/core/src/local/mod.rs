//! p-adic invariants: Jordan decompositions, canonical local symbols, spinor norm groups
//! and the H-type tables.

mod htype;
mod spinor;
mod symbol;

pub use htype::{h_type_table_match, TableRow};
pub use spinor::{spinor_norm_group, SquareClass, SquareClassGroup};
pub use symbol::{local_symbol, local_symbol_of_matrix, LocalSymbol};

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::form::TernaryForm;
use crate::linalg::Mat3;

pub type Q = Ratio<i128>;

/// One summand of a Jordan splitting of `A = 2·Gram` over `Z_(p)`.
#[derive(Clone, Debug)]
pub(crate) enum Piece {
    /// `⟨p^val·unit⟩`
    One { val: i32, unit: Q },
    /// `p^val·[[2α,β],[β,2γ]]` with `β` a unit (only at p = 2); `m` holds the full block.
    Two { val: i32, m: [[Q; 2]; 2] },
}

impl Piece {
    pub(crate) fn val(&self) -> i32 {
        match self {
            Piece::One { val, .. } | Piece::Two { val, .. } => *val,
        }
    }
}

pub(crate) fn ord_i(p: i128, mut n: i128) -> i32 {
    debug_assert!(n != 0);
    let mut e = 0;
    while n % p == 0 {
        n /= p;
        e += 1;
    }
    e
}

pub(crate) fn ord_q(p: i128, x: &Q) -> i32 {
    ord_i(p, *x.numer()) - ord_i(p, *x.denom())
}

/// The unit part of `x` reduced modulo `m` (m a power of p, p ∤ denominator after removal).
pub(crate) fn unit_residue(p: i128, x: &Q, m: i128) -> i128 {
    let mut n = *x.numer();
    let mut d = *x.denom();
    while n % p == 0 {
        n /= p;
    }
    while d % p == 0 {
        d /= p;
    }
    let inv = crate::linalg::mod_inverse(d.rem_euclid(m) as i64, m as i64) as i128;
    (n.rem_euclid(m) * inv).rem_euclid(m)
}

pub(crate) fn legendre(a: i128, p: i128) -> i32 {
    let a = a.rem_euclid(p);
    if a == 0 {
        return 0;
    }
    let mut result = 1i128;
    let mut base = a;
    let mut e = (p - 1) / 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    if result == 1 {
        1
    } else {
        -1
    }
}

/// Jordan splitting of a nonsingular symmetric integer matrix over `Z_(p)`, pieces sorted by valuation.
pub(crate) fn pieces(a: &Mat3, p: i64) -> Vec<Piece> {
    let p = p as i128;
    let mut m: Vec<Vec<Q>> = a
        .iter()
        .map(|row| row.iter().map(|&x| Q::from_integer(x as i128)).collect())
        .collect();
    let mut out = Vec::new();
    while !m.is_empty() {
        let k = m.len();
        let mut vmin = i32::MAX;
        for row in &m {
            for x in row {
                if *x.numer() != 0 {
                    vmin = vmin.min(ord_q(p, x));
                }
            }
        }
        let diag = (0..k).find(|&i| *m[i][i].numer() != 0 && ord_q(p, &m[i][i]) == vmin);
        let pivot = match diag {
            Some(i) => Some(i),
            None if p != 2 => {
                let (i, j) = off_diagonal_min(&m, p, vmin);
                for c in 0..k {
                    let add = m[j][c];
                    m[i][c] += add;
                }
                for r in 0..k {
                    let add = m[r][j];
                    m[r][i] += add;
                }
                Some(i)
            }
            None => None,
        };
        if let Some(i) = pivot {
            let piv = m[i][i];
            let mut next = Vec::with_capacity(k - 1);
            for r in (0..k).filter(|&r| r != i) {
                next.push(
                    (0..k)
                        .filter(|&c| c != i)
                        .map(|c| m[r][c] - m[r][i] * m[i][c] / piv)
                        .collect(),
                );
            }
            out.push(Piece::One {
                val: ord_q(p, &piv),
                unit: piv / Q::from_integer(p.pow(ord_q(p, &piv) as u32)),
            });
            m = next;
        } else {
            let (i, j) = off_diagonal_min(&m, p, vmin);
            let (x, y, z) = (m[i][i], m[i][j], m[j][j]);
            let det = x * z - y * y;
            let inv = [[z / det, -y / det], [-y / det, x / det]];
            let mut next = Vec::with_capacity(k - 2);
            for r in (0..k).filter(|&r| r != i && r != j) {
                next.push(
                    (0..k)
                        .filter(|&c| c != i && c != j)
                        .map(|c| {
                            let u = [m[r][i], m[r][j]];
                            let w = [m[i][c], m[j][c]];
                            let mut s = m[r][c];
                            for a in 0..2 {
                                for b in 0..2 {
                                    s -= u[a] * inv[a][b] * w[b];
                                }
                            }
                            s
                        })
                        .collect(),
                );
            }
            out.push(Piece::Two {
                val: vmin,
                m: [[x, y], [y, z]],
            });
            m = next;
        }
    }
    out.sort_by_key(Piece::val);
    out
}

fn off_diagonal_min(m: &[Vec<Q>], p: i128, vmin: i32) -> (usize, usize) {
    let k = m.len();
    for i in 0..k {
        for j in i + 1..k {
            if *m[i][j].numer() != 0 && ord_q(p, &m[i][j]) == vmin {
                return (i, j);
            }
        }
    }
    unreachable!("minimal valuation is attained")
}

/// Square class data of a Jordan constituent.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub enum UnitClass {
    /// Odd p: whether the unit part of the determinant is a square.
    Odd { square: bool },
    /// p = 2: determinant residue mod 8, parity type and oddity.
    Dyadic { det: u8, odd: bool, oddity: u8 },
}

/// Constituent `p^scale`-modular of the given rank (scale relative to the Gram matrix, so the
/// ½Z₂-modular constituent has scale −1).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct JordanBlock {
    pub scale: i32,
    pub rank: u8,
    pub unit: UnitClass,
}

pub(crate) fn blocks_of_matrix(a: &Mat3, p: i64) -> Vec<JordanBlock> {
    let pcs = pieces(a, p);
    let pi = p as i128;
    let mut out: Vec<JordanBlock> = Vec::new();
    for piece in &pcs {
        let v = piece.val();
        let (rank, det_res, odd_unit) = match piece {
            Piece::One { unit, .. } => {
                let m = if p == 2 { 8 } else { pi };
                let r = unit_residue(pi, unit, m);
                (1u8, r, Some(r))
            }
            Piece::Two { m, .. } => {
                let det = m[0][0] * m[1][1] - m[0][1] * m[0][1];
                (2u8, unit_residue(pi, &det, 8), None)
            }
        };
        let (scale, unit) = if p == 2 {
            (
                v - 1,
                UnitClass::Dyadic {
                    det: det_res as u8,
                    odd: odd_unit.is_some(),
                    oddity: odd_unit.unwrap_or(0) as u8,
                },
            )
        } else {
            // A = 2·Gram: each one-dimensional unit carries an extra factor 2.
            let r = (det_res * odd_unit.map_or(1, |_| 2)).rem_euclid(pi);
            (
                v,
                UnitClass::Odd {
                    square: legendre(r, pi) == 1,
                },
            )
        };
        match out.last_mut() {
            Some(last) if last.scale == scale => {
                last.rank += rank;
                last.unit = merge(last.unit, unit, p);
            }
            _ => out.push(JordanBlock { scale, rank, unit }),
        }
    }
    out
}

fn merge(a: UnitClass, b: UnitClass, _p: i64) -> UnitClass {
    match (a, b) {
        (UnitClass::Odd { square: x }, UnitClass::Odd { square: y }) => {
            UnitClass::Odd { square: x == y }
        }
        (
            UnitClass::Dyadic {
                det: d1,
                odd: o1,
                oddity: t1,
            },
            UnitClass::Dyadic {
                det: d2,
                odd: o2,
                oddity: t2,
            },
        ) => UnitClass::Dyadic {
            det: (d1 * d2) % 8,
            odd: o1 || o2,
            oddity: (t1 + t2) % 8,
        },
        _ => unreachable!("one prime per decomposition"),
    }
}

/// A Jordan decomposition of `f` over `Z_p`, one block per scale.
pub fn jordan(f: &TernaryForm, p: i64) -> Vec<JordanBlock> {
    blocks_of_matrix(&f.doubled_gram(), p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn form(s: &str) -> TernaryForm {
        s.parse().unwrap()
    }

    #[test]
    fn diagonal_dyadic() {
        let b = jordan(&form("1,20,80,0,0,0"), 2);
        assert_eq!(b.iter().map(|x| x.scale).collect::<Vec<_>>(), vec![0, 2, 4]);
        let units: Vec<u8> = b
            .iter()
            .map(|x| match x.unit {
                UnitClass::Dyadic { det, .. } => det,
                _ => 0,
            })
            .collect();
        assert_eq!(units, vec![1, 5, 5]);
    }

    #[test]
    fn n1_at_five_and_three() {
        let n1 = form("gram:12,15,135,5,0,0");
        let b5 = jordan(&n1, 5);
        assert_eq!(
            b5.iter().map(|x| (x.scale, x.rank)).collect::<Vec<_>>(),
            vec![(0, 1), (1, 1), (2, 1)]
        );
        let b3 = jordan(&n1, 3);
        assert_eq!(
            b3.iter().map(|x| (x.scale, x.rank)).collect::<Vec<_>>(),
            vec![(0, 2), (1, 1)]
        );
    }

    #[test]
    fn even_block_at_two() {
        let f = form("1,1,1,1,1,1");
        let b = jordan(&f, 2);
        assert_eq!(b[0].scale, -1);
        assert_eq!(b[0].rank, 2);
        assert!(matches!(b[0].unit, UnitClass::Dyadic { odd: false, .. }));
    }

    #[test]
    fn scale_bookkeeping() {
        for s in [
            "gram:12,15,135,5,0,0",
            "1,20,80,0,0,0",
            "1,1,1,1,1,1",
            "3,5,7,1,-2,3",
        ] {
            let f = form(s);
            for p in [2i64, 3, 5, 7] {
                let total: i32 = jordan(&f, p).iter().map(|b| b.scale * b.rank as i32).sum();
                let four_d = f.four_d();
                let expect = crate::sublattice::ord(p, four_d) as i32 - if p == 2 { 2 } else { 0 };
                assert_eq!(total, expect, "{s} at {p}");
            }
        }
    }
}
