//! Small exact integer linear algebra on 3×3 matrices.

use num_integer::Integer;

pub type Mat3 = [[i64; 3]; 3];
pub type Vec3 = [i64; 3];

pub const IDENTITY: Mat3 = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];

pub fn det(m: &Mat3) -> i128 {
    let e = |i: usize, j: usize| m[i][j] as i128;
    e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1))
        - e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0))
        + e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0))
}

pub fn mul(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut out = [[0i64; 3]; 3];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            *cell = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

pub fn transpose(m: &Mat3) -> Mat3 {
    let mut t = [[0i64; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            t[j][i] = m[i][j];
        }
    }
    t
}

pub fn column(m: &Mat3, j: usize) -> Vec3 {
    [m[0][j], m[1][j], m[2][j]]
}

pub fn from_columns(cols: [Vec3; 3]) -> Mat3 {
    let mut m = [[0i64; 3]; 3];
    for (j, c) in cols.iter().enumerate() {
        for i in 0..3 {
            m[i][j] = c[i];
        }
    }
    m
}

pub fn mat_vec(m: &Mat3, v: &Vec3) -> Vec3 {
    [0, 1, 2].map(|i| (0..3).map(|k| m[i][k] * v[k]).sum())
}

pub fn adjugate(m: &Mat3) -> Mat3 {
    let mut adj = [[0i64; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let (r0, r1) = others(j);
            let (c0, c1) = others(i);
            let minor = m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
            adj[i][j] = if (i + j) % 2 == 0 { minor } else { -minor };
        }
    }
    adj
}

fn others(i: usize) -> (usize, usize) {
    match i {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    }
}

/// Inverse of a matrix with determinant ±1.
pub fn unimodular_inverse(m: &Mat3) -> Mat3 {
    let d = det(m);
    debug_assert!(d == 1 || d == -1);
    let adj = adjugate(m);
    adj.map(|row| row.map(|x| x * d as i64))
}

/// `Bᵀ·A·B` with an overflow check.
pub fn congruent(a: &Mat3, b: &Mat3) -> Option<Mat3> {
    let mut out = [[0i64; 3]; 3];
    for i in 0..3 {
        for j in i..3 {
            let mut s: i128 = 0;
            for k in 0..3 {
                for l in 0..3 {
                    s += b[k][i] as i128 * a[k][l] as i128 * b[l][j] as i128;
                }
            }
            let v = i64::try_from(s).ok()?;
            out[i][j] = v;
            out[j][i] = v;
        }
    }
    Some(out)
}

pub fn bilinear(a: &Mat3, x: &Vec3, y: &Vec3) -> i128 {
    let mut s = 0i128;
    for i in 0..3 {
        for j in 0..3 {
            s += x[i] as i128 * a[i][j] as i128 * y[j] as i128;
        }
    }
    s
}

pub fn vec_gcd(v: &Vec3) -> i64 {
    v.iter().fold(0i64, |g, &x| g.gcd(&x))
}

/// Hermite normal form of the lattice spanned by `gens` (full rank assumed).
/// Basis vectors are the columns of the result, which is lower triangular with positive
/// diagonal and entries left of each pivot reduced modulo that pivot.
pub fn hnf(gens: &[Vec3]) -> Mat3 {
    let mut rows: Vec<Vec3> = gens.to_vec();
    let mut basis = [[0i64; 3]; 3];
    for col in 0..3 {
        loop {
            let mut pivot: Option<usize> = None;
            for (i, r) in rows.iter().enumerate() {
                if r[col] != 0 && pivot.is_none_or(|p| r[col].abs() < rows[p][col].abs()) {
                    pivot = Some(i);
                }
            }
            let p = pivot.expect("generators do not span a full rank lattice");
            let pr = rows[p];
            let mut done = true;
            for (i, r) in rows.iter_mut().enumerate() {
                if i != p && r[col] != 0 {
                    let q = Integer::div_floor(&r[col], &pr[col]);
                    for k in 0..3 {
                        r[k] -= q * pr[k];
                    }
                    if r[col] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                let mut v = rows.swap_remove(p);
                if v[col] < 0 {
                    v = v.map(|x| -x);
                }
                basis[col] = v;
                rows.retain(|r| r.iter().any(|&x| x != 0));
                break;
            }
        }
    }
    for col in 1..3 {
        let piv = basis[col][col];
        for earlier in 0..col {
            let q = Integer::div_floor(&basis[earlier][col], &piv);
            if q != 0 {
                let src = basis[col];
                for k in 0..3 {
                    basis[earlier][k] -= q * src[k];
                }
            }
        }
    }
    from_columns(basis)
}

/// Smith normal form `B = U·D·V` with `U`, `V` unimodular and `D` diagonal, d₁ | d₂ | d₃.
pub fn smith(b: &Mat3) -> (Mat3, Mat3, Mat3) {
    // Work on D with U⁻¹·B·V⁻¹ = D, tracking U and V directly.
    let mut d = *b;
    let mut u = IDENTITY;
    let mut v = IDENTITY;
    for t in 0..3 {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..3 {
                for j in t..3 {
                    if d[i][j] != 0 && best.is_none_or(|(bi, bj)| d[i][j].abs() < d[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { break };
            swap_rows(&mut d, &mut u, t, pi);
            swap_cols(&mut d, &mut v, t, pj);
            let piv = d[t][t];
            let mut clean = true;
            for i in t + 1..3 {
                let q = Integer::div_floor(&d[i][t], &piv);
                if q != 0 {
                    add_row(&mut d, &mut u, i, t, -q);
                }
                if d[i][t] != 0 {
                    clean = false;
                }
            }
            for j in t + 1..3 {
                let q = Integer::div_floor(&d[t][j], &piv);
                if q != 0 {
                    add_col(&mut d, &mut v, j, t, -q);
                }
                if d[t][j] != 0 {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            let mut divides = true;
            'outer: for i in t + 1..3 {
                for j in t + 1..3 {
                    if d[i][j] % piv != 0 {
                        add_row(&mut d, &mut u, t, i, 1);
                        divides = false;
                        break 'outer;
                    }
                }
            }
            if divides {
                break;
            }
        }
        if d[t][t] < 0 {
            for j in 0..3 {
                d[t][j] = -d[t][j];
            }
            for i in 0..3 {
                u[i][t] = -u[i][t];
            }
        }
    }
    (u, d, v)
}

// Row op on D: row_i += k·row_j, compensated in U so that U·D stays invariant.
fn add_row(d: &mut Mat3, u: &mut Mat3, i: usize, j: usize, k: i64) {
    for c in 0..3 {
        d[i][c] += k * d[j][c];
    }
    for r in 0..3 {
        u[r][j] -= k * u[r][i];
    }
}

fn add_col(d: &mut Mat3, v: &mut Mat3, i: usize, j: usize, k: i64) {
    for r in 0..3 {
        d[r][i] += k * d[r][j];
    }
    for c in 0..3 {
        v[j][c] -= k * v[i][c];
    }
}

fn swap_rows(d: &mut Mat3, u: &mut Mat3, i: usize, j: usize) {
    if i != j {
        d.swap(i, j);
        for r in 0..3 {
            u[r].swap(i, j);
        }
    }
}

fn swap_cols(d: &mut Mat3, v: &mut Mat3, i: usize, j: usize) {
    if i != j {
        for r in 0..3 {
            d[r].swap(i, j);
        }
        v.swap(i, j);
    }
}

/// Basis of the kernel of `x ↦ f·x mod p` intersected with any lattice given by `basis`
/// columns: returns generators (as a basis matrix) of `{x ∈ basis·Z³ : f·x ≡ 0 mod p}`.
pub fn kernel_mod(basis: &Mat3, f: &Vec3, p: i64) -> Mat3 {
    let vals: Vec<i64> = (0..3)
        .map(|j| {
            let c = column(basis, j);
            (0..3).map(|i| f[i] * c[i]).sum::<i64>().rem_euclid(p)
        })
        .collect();
    let Some(pivot) = vals.iter().position(|&x| x != 0) else {
        return *basis;
    };
    let inv = mod_inverse(vals[pivot], p);
    let bp = column(basis, pivot);
    let mut gens = Vec::with_capacity(3);
    gens.push(bp.map(|x| x * p));
    for j in 0..3 {
        if j != pivot {
            let k = (vals[j] * inv).rem_euclid(p);
            let c = column(basis, j);
            gens.push([0, 1, 2].map(|i| c[i] - k * bp[i]));
        }
    }
    hnf(&gens)
}

pub fn mod_inverse(a: i64, m: i64) -> i64 {
    let e = a.rem_euclid(m).extended_gcd(&m);
    debug_assert_eq!(e.gcd, 1);
    e.x.rem_euclid(m)
}
