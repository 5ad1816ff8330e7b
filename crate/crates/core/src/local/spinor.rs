use std::fmt;

use serde::{Deserialize, Serialize};

use super::{ord_q, pieces, unit_residue, Piece, Q};
use crate::form::TernaryForm;
use crate::linalg::Mat3;

/// An element of `Q_p^× / (Q_p^×)²` encoded as F₂-bits: bit 0 is the parity of the valuation;
/// for odd p bit 1 marks a nonsquare unit part; for p = 2 bit 1 marks `u ≡ 3 (4)` and
/// bit 2 marks `u ≡ ±3 (8)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct SquareClass {
    pub p: i64,
    pub code: u8,
}

impl SquareClass {
    pub fn of_rational(p: i64, x: &Q) -> SquareClass {
        let parity = (ord_q(p as i128, x).rem_euclid(2)) as u8;
        let code = if p == 2 {
            let u = unit_residue(2, x, 8);
            parity | (((u % 4 == 3) as u8) << 1) | ((((u == 3) || (u == 5)) as u8) << 2)
        } else {
            let u = unit_residue(p as i128, x, p as i128);
            parity | (((super::legendre(u, p as i128) == -1) as u8) << 1)
        };
        SquareClass { p, code }
    }

    pub fn of_integer(p: i64, n: i64) -> SquareClass {
        Self::of_rational(p, &Q::from_integer(n as i128))
    }

    pub fn bits(p: i64) -> u32 {
        if p == 2 {
            3
        } else {
            2
        }
    }
}

#[allow(clippy::suspicious_arithmetic_impl)]
impl std::ops::Mul for SquareClass {
    type Output = SquareClass;

    fn mul(self, other: SquareClass) -> SquareClass {
        SquareClass {
            p: self.p,
            code: self.code ^ other.code,
        }
    }
}

/// A subgroup of `Q_p^× / (Q_p^×)²`, stored as the set of its members.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct SquareClassGroup {
    pub p: i64,
    /// Bit `c` set iff the class with code `c` is a member.
    pub members: u8,
}

impl SquareClassGroup {
    pub fn trivial(p: i64) -> Self {
        SquareClassGroup { p, members: 1 }
    }

    pub fn generated_by(p: i64, gens: impl IntoIterator<Item = u8>) -> Self {
        let mut g = Self::trivial(p);
        for x in gens {
            g.insert(x);
        }
        g
    }

    fn insert(&mut self, x: u8) {
        if self.members >> x & 1 == 1 {
            return;
        }
        let mut m = self.members;
        for c in 0..8u8 {
            if self.members >> c & 1 == 1 {
                m |= 1 << (c ^ x);
            }
        }
        self.members = m;
    }

    pub fn contains(&self, x: SquareClass) -> bool {
        self.members >> x.code & 1 == 1
    }

    pub fn order(&self) -> u32 {
        self.members.count_ones()
    }

    pub fn elements(&self) -> Vec<SquareClass> {
        (0..8u8)
            .filter(|c| self.members >> c & 1 == 1)
            .map(|code| SquareClass { p: self.p, code })
            .collect()
    }

    /// An F₂-basis of the subgroup.
    pub fn generators(&self) -> Vec<SquareClass> {
        let mut span = Self::trivial(self.p);
        let mut out = Vec::new();
        for c in self.elements() {
            if !span.contains(c) {
                span.insert(c.code);
                out.push(c);
            }
        }
        out
    }

    pub fn is_full(&self) -> bool {
        self.order() == 1 << SquareClass::bits(self.p)
    }
}

impl fmt::Display for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pw = if self.code & 1 == 1 {
            format!("{}", self.p)
        } else {
            String::new()
        };
        let unit = if self.p == 2 {
            ["1", "7", "5", "3"][(self.code >> 1) as usize].to_string()
        } else if self.code & 2 == 2 {
            "D".into()
        } else {
            "1".into()
        };
        match (pw.is_empty(), unit.as_str()) {
            (true, u) => write!(f, "{u}"),
            (false, "1") => write!(f, "{pw}"),
            (false, u) => write!(f, "{pw}*{u}"),
        }
    }
}

/// `θ(O⁺(L_p))`: the group generated by products of two symmetry norms.
pub fn spinor_norm_group(f: &TernaryForm, p: i64) -> SquareClassGroup {
    spinor_norm_group_of_matrix(&f.doubled_gram(), p)
}

pub(crate) fn spinor_norm_group_of_matrix(a: &Mat3, p: i64) -> SquareClassGroup {
    let pcs = pieces(a, p);
    let norms = if p == 2 {
        dyadic_symmetry_norms(&pcs)
    } else {
        odd_symmetry_norms(&pcs, p)
    };
    let codes: Vec<u8> = (0..8u8).filter(|c| norms >> c & 1 == 1).collect();
    let mut products = Vec::new();
    for &x in &codes {
        for &y in &codes {
            products.push(x ^ y);
        }
    }
    SquareClassGroup::generated_by(p, products)
}

fn odd_symmetry_norms(pcs: &[Piece], p: i64) -> u8 {
    let mut set = 0u8;
    let mut i = 0;
    while i < pcs.len() {
        let v = pcs[i].val();
        let same: Vec<&Piece> = pcs[i..].iter().take_while(|x| x.val() == v).collect();
        let parity = (v.rem_euclid(2)) as u8;
        if same.len() >= 2 {
            set |= 1 << parity;
            set |= 1 << (parity | 2);
        } else if let Piece::One { unit, .. } = same[0] {
            set |= 1 << (SquareClass::of_rational(p, unit).code | parity);
        }
        i += same.len();
    }
    set
}

fn inv_mod_2_128(d: u128) -> u128 {
    let mut x = d;
    for _ in 0..7 {
        x = x.wrapping_mul(2u128.wrapping_sub(d.wrapping_mul(x)));
    }
    x
}

fn to_2adic(x: &Q) -> u128 {
    let n = *x.numer();
    let d = *x.denom();
    (n as u128).wrapping_mul(inv_mod_2_128(d as u128))
}

enum DyPiece {
    One { val: u32, g: u128 },
    Two { val: u32, g: [[u128; 2]; 2] },
}

/// Square classes `Q(x)` of vectors with `τ_x ∈ O(L₂)`, as a bitmask over class codes.
fn dyadic_symmetry_norms(pcs: &[Piece]) -> u8 {
    let vmin = pcs.iter().map(Piece::val).min().unwrap();
    let vmax = pcs.iter().map(Piece::val).max().unwrap();
    // shift valuations to be nonnegative; square classes only see the parity of the shift
    let shift = vmin.min(0);
    let dp: Vec<DyPiece> = pcs
        .iter()
        .map(|pc| match pc {
            Piece::One { val, unit } => {
                let v = (val - shift) as u32;
                DyPiece::One {
                    val: v,
                    g: to_2adic(unit) << v,
                }
            }
            Piece::Two { val, m } => {
                let v = (val - shift) as u32;
                DyPiece::Two {
                    val: v,
                    g: m.map(|r| r.map(|x| to_2adic(&(x / Q::from_integer(1i128 << val))) << v)),
                }
            }
        })
        .collect();
    let smax = (vmax - vmin + 4) as u32;
    // candidate coordinate blocks for each piece: (s, contribution to Q)
    let options: Vec<Vec<Option<(u32, u128)>>> = dp
        .iter()
        .map(|pc| {
            let mut o = vec![None];
            for s in 0..=smax {
                match pc {
                    DyPiece::One { g, .. } => {
                        for w in [1u128, 3] {
                            o.push(Some((s, g.wrapping_mul(w * w) << (2 * s))));
                        }
                    }
                    DyPiece::Two { g, .. } => {
                        for w1 in 0..8u128 {
                            for w2 in 0..8u128 {
                                if w1 % 2 == 0 && w2 % 2 == 0 {
                                    continue;
                                }
                                let q = g[0][0]
                                    .wrapping_mul(w1 * w1)
                                    .wrapping_add(g[0][1].wrapping_mul(2 * w1 * w2))
                                    .wrapping_add(g[1][1].wrapping_mul(w2 * w2));
                                o.push(Some((s, q << (2 * s))));
                            }
                        }
                    }
                }
            }
            o
        })
        .collect();
    let vals: Vec<u32> = dp
        .iter()
        .map(|pc| match pc {
            DyPiece::One { val, .. } | DyPiece::Two { val, .. } => *val,
        })
        .collect();
    let mut found = 0u8;
    let mut choice = vec![0usize; dp.len()];
    loop {
        let mut q = 0u128;
        let mut m = u32::MAX;
        let mut smin = u32::MAX;
        for (k, &c) in choice.iter().enumerate() {
            if let Some((s, contrib)) = options[k][c] {
                q = q.wrapping_add(contrib);
                m = m.min(vals[k] + s);
                smin = smin.min(s);
            }
        }
        if smin == 0 && q != 0 {
            let ordq = q.trailing_zeros();
            if ordq <= m + 1 && ordq + 3 < 128 {
                let u = (q >> ordq) % 8;
                let parity = ((ordq as i32 + shift).rem_euclid(2)) as u8;
                let code =
                    parity | (((u % 4 == 3) as u8) << 1) | ((((u == 3) || (u == 5)) as u8) << 2);
                found |= 1 << code;
                if found == 0xff {
                    return found;
                }
            }
        }
        let mut k = 0;
        loop {
            if k == choice.len() {
                return found;
            }
            choice[k] += 1;
            if choice[k] < options[k].len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn form(s: &str) -> TernaryForm {
        s.parse().unwrap()
    }

    #[test]
    fn unimodular_odd() {
        let g = spinor_norm_group(&form("1,1,1,0,0,0"), 5);
        assert!(g.contains(SquareClass::of_integer(5, 1)));
        assert!(g.contains(SquareClass::of_integer(5, 2)));
        assert_eq!(g.order(), 2);
    }

    #[test]
    fn sum_of_three_squares_at_two() {
        // O(Z³) contains all signed permutations; the symmetries give norms 1, 2 and 3.
        let g = spinor_norm_group(&form("1,1,1,0,0,0"), 2);
        for n in [1, 2, 3, 6] {
            assert!(g.contains(SquareClass::of_integer(2, n)));
        }
    }

    #[test]
    fn class_codes() {
        assert_eq!(SquareClass::of_integer(2, 7).code, 2);
        assert_eq!(SquareClass::of_integer(2, 5).code, 4);
        assert_eq!(SquareClass::of_integer(2, 3).code, 6);
        assert_eq!(SquareClass::of_integer(2, 12).code, 6);
        assert_eq!(SquareClass::of_integer(3, 2).code, 2);
        assert_eq!(SquareClass::of_integer(3, 6).code, 3);
    }
}
