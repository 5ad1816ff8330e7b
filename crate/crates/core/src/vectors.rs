//! Exact enumeration of lattice vectors of bounded norm (Fincke–Pohst with integer bounds).

use num_integer::Roots;

use crate::form::TernaryForm;
use crate::linalg::{self, Mat3, Vec3};
use crate::reduce;

/// Calls `f(x, xᵀGx)` for every `x ≠ 0` with `xᵀGx ≤ m` (or `= m` when `exact`).
/// `G` must be positive definite.
pub(crate) fn for_each(g: &Mat3, m: i128, exact: bool, mut f: impl FnMut(Vec3, i128) -> bool) {
    if m <= 0 {
        return;
    }
    let e = |i: usize, j: usize| g[i][j] as i128;
    let (g00, g01, g02, g11, g12, g22) = (e(0, 0), e(0, 1), e(0, 2), e(1, 1), e(1, 2), e(2, 2));
    let r11 = g00 * g11 - g01 * g01;
    let r12 = g00 * g12 - g01 * g02;
    let r22 = g00 * g22 - g02 * g02;
    let d = linalg::det(g);
    let x3max = (m * r11 / d).sqrt() + 1;
    for x3 in -x3max..=x3max {
        // R11·x2² + 2·R12·x3·x2 + R22·x3² ≤ m·G00
        let Some((lo2, hi2)) = range(r11, r12 * x3, r22 * x3 * x3 - m * g00) else {
            continue;
        };
        for x2 in lo2..=hi2 {
            let l = g01 * x2 + g02 * x3;
            let q2 = g11 * x2 * x2 + 2 * g12 * x2 * x3 + g22 * x3 * x3;
            if exact {
                let disc = l * l - g00 * (q2 - m);
                if disc < 0 {
                    continue;
                }
                let s = disc.sqrt();
                if s * s != disc {
                    continue;
                }
                let roots = if s == 0 {
                    vec![-l]
                } else {
                    vec![-l - s, -l + s]
                };
                for num in roots {
                    if num % g00 == 0 {
                        let x1 = num / g00;
                        if (x1, x2, x3) != (0, 0, 0) && !f([x1 as i64, x2 as i64, x3 as i64], m) {
                            return;
                        }
                    }
                }
            } else {
                let Some((lo1, hi1)) = range(g00, l, q2 - m) else {
                    continue;
                };
                for x1 in lo1..=hi1 {
                    if (x1, x2, x3) == (0, 0, 0) {
                        continue;
                    }
                    let v = g00 * x1 * x1 + 2 * l * x1 + q2;
                    if v <= m && !f([x1 as i64, x2 as i64, x3 as i64], v) {
                        return;
                    }
                }
            }
        }
    }
}

/// Integer range containing all real `t` with `αt² + 2βt + γ ≤ 0` (α > 0), slightly widened.
fn range(alpha: i128, beta: i128, gamma: i128) -> Option<(i128, i128)> {
    let disc = beta * beta - alpha * gamma;
    if disc < 0 {
        return None;
    }
    let s = disc.sqrt() + 1;
    Some((
        (-beta - s).div_euclid(alpha),
        (-beta + s).div_euclid(alpha) + 1,
    ))
}

fn normalize_sign(v: Vec3) -> Vec3 {
    match v.iter().find(|&&x| x != 0) {
        Some(&x) if x < 0 => v.map(|y| -y),
        _ => v,
    }
}

/// All ±-pairs with `0 < Q(v) ≤ bound`, one representative each (first nonzero entry positive),
/// sorted by value, then by vector in descending lexicographic order.
pub fn short_vectors(f: &TernaryForm, bound: i64) -> Vec<(Vec3, i64)> {
    let (g, t) = reduce::reduced_gram(f);
    let mut out = Vec::new();
    for_each(&g, 2 * bound as i128, false, |x, v| {
        let y = linalg::mat_vec(&t, &x);
        if normalize_sign(y) == y {
            out.push((y, (v / 2) as i64));
        }
        true
    });
    out.sort_by(|(x, a), (y, b)| a.cmp(b).then(y.cmp(x)));
    out
}

/// Whether `Q(x) = k` has an integer solution (a primitive one if `primitive`).
pub fn represents(f: &TernaryForm, k: i64, primitive: bool) -> bool {
    if k < 0 {
        return false;
    }
    if k == 0 {
        return !primitive;
    }
    let (g, _) = reduce::reduced_gram(f);
    let mut found = false;
    for_each(&g, 2 * k as i128, true, |x, _| {
        if !primitive || linalg::vec_gcd(&x) == 1 {
            found = true;
        }
        !found
    });
    found
}

pub fn represents_integer(f: &TernaryForm, k: i64) -> bool {
    represents(f, k, false)
}
