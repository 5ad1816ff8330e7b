use std::fmt;

use serde::{Deserialize, Serialize};

use super::{blocks_of_matrix, JordanBlock, UnitClass};
use crate::form::TernaryForm;
use crate::linalg::Mat3;

/// Canonical local genus symbol at `p`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct LocalSymbol {
    pub p: i64,
    pub blocks: Vec<JordanBlock>,
}

pub fn local_symbol(f: &TernaryForm, p: i64) -> LocalSymbol {
    local_symbol_of_matrix(&f.doubled_gram(), p)
}

/// Symbol of the lattice whose doubled Gram matrix is `a` (any nonsingular even symmetric matrix).
pub fn local_symbol_of_matrix(a: &Mat3, p: i64) -> LocalSymbol {
    let mut blocks = blocks_of_matrix(a, p);
    if p == 2 {
        canonicalize_dyadic(&mut blocks);
    }
    LocalSymbol { p, blocks }
}

struct Dy {
    scale: i32,
    sign: bool,
    odd: bool,
    oddity: u8,
}

/// Oddity fusion and sign walking: compartment oddities move to the first block of the
/// compartment; within each train every sign except the first is made positive.
fn canonicalize_dyadic(blocks: &mut [JordanBlock]) {
    let mut d: Vec<Dy> = blocks
        .iter()
        .map(|b| match b.unit {
            UnitClass::Dyadic { det, odd, oddity } => Dy {
                scale: b.scale,
                sign: det == 1 || det == 7,
                odd,
                oddity,
            },
            UnitClass::Odd { .. } => unreachable!("dyadic symbol"),
        })
        .collect();
    let n = d.len();

    let mut compartments: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        if !d[i].odd {
            continue;
        }
        match compartments.last_mut() {
            Some(c) if *c.last().unwrap() + 1 == i && d[i - 1].scale + 1 == d[i].scale => c.push(i),
            _ => compartments.push(vec![i]),
        }
    }
    for c in &compartments {
        let total: u32 = c.iter().map(|&i| d[i].oddity as u32).sum();
        for &i in c {
            d[i].oddity = 0;
        }
        d[c[0]].oddity = (total % 8) as u8;
    }

    let mut trains: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        let joined = i > 0 && {
            let gap = d[i].scale - d[i - 1].scale;
            match gap {
                1 => d[i].odd || d[i - 1].odd,
                2 => d[i].odd && d[i - 1].odd,
                _ => false,
            }
        };
        if joined {
            trains.last_mut().unwrap().push(i);
        } else {
            trains.push(vec![i]);
        }
    }
    let compartment_of = |i: usize| compartments.iter().position(|c| c.contains(&i));
    for t in &trains {
        for k in (1..t.len()).rev() {
            let (i, j) = (t[k - 1], t[k]);
            if !d[j].sign {
                d[j].sign = true;
                d[i].sign = !d[i].sign;
                let mut touched = vec![compartment_of(i), compartment_of(j)];
                touched.dedup();
                for c in touched.into_iter().flatten() {
                    let first = compartments[c][0];
                    d[first].oddity = (d[first].oddity + 4) % 8;
                }
            }
        }
    }
    for (b, x) in blocks.iter_mut().zip(d) {
        b.unit = UnitClass::Dyadic {
            det: if x.sign { 1 } else { 3 },
            odd: x.odd,
            oddity: x.oddity,
        };
    }
}

impl fmt::Display for LocalSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tokens: Vec<String> = self
            .blocks
            .iter()
            .map(|b| {
                let unit = match b.unit {
                    UnitClass::Odd { square } => (if square { "+" } else { "-" }).to_string(),
                    UnitClass::Dyadic { det, odd, oddity } => {
                        let s = if det == 1 || det == 7 { "+" } else { "-" };
                        if odd {
                            format!("{s}I{oddity}")
                        } else {
                            format!("{s}II")
                        }
                    }
                };
                format!("{}:{}:{}", b.scale, b.rank, unit)
            })
            .collect();
        write!(f, "{}", tokens.join(" "))
    }
}
