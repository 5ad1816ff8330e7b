//! Greedy reduction, canonical class representatives, isometries and automorphisms.

use crate::form::TernaryForm;
use crate::linalg::{self, Mat3, Vec3};
use crate::vectors;

struct Basis<'a> {
    a: &'a Mat3,
    b: [Vec3; 3],
}

impl Basis<'_> {
    fn ip(&self, i: usize, j: usize) -> i128 {
        linalg::bilinear(self.a, &self.b[i], &self.b[j])
    }

    fn sub(&mut self, target: usize, src: usize, k: i128) {
        if k != 0 {
            let s = self.b[src];
            for (x, y) in self.b[target].iter_mut().zip(s) {
                *x -= k as i64 * y;
            }
        }
    }

    fn sort(&mut self) {
        let mut idx = [0usize, 1, 2];
        idx.sort_by_key(|&i| self.ip(i, i));
        self.b = idx.map(|i| self.b[i]);
    }

    fn lagrange(&mut self) {
        loop {
            if self.ip(1, 1) < self.ip(0, 0) {
                self.b.swap(0, 1);
            }
            let n0 = self.ip(0, 0);
            let mu = (2 * self.ip(0, 1) + n0).div_euclid(2 * n0);
            if mu == 0 {
                break;
            }
            self.sub(1, 0, mu);
        }
    }

    // Closest vector to b₂ in Zb₀ + Zb₁ (b₀, b₁ Lagrange reduced).
    fn closest(&mut self) {
        let (n0, n1, b01) = (self.ip(0, 0), self.ip(1, 1), self.ip(0, 1));
        let (b02, b12, n2) = (self.ip(0, 2), self.ip(1, 2), self.ip(2, 2));
        let delta = n0 * n1 - b01 * b01;
        let y0 = (n0 * b12 - b01 * b02).div_euclid(delta);
        let norm = |x: i128, y: i128| {
            n2 - 2 * x * b02 - 2 * y * b12 + x * x * n0 + 2 * x * y * b01 + y * y * n1
        };
        let mut best = (norm(0, 0), 0i128, 0i128);
        for y in y0 - 1..=y0 + 2 {
            let x0 = (b02 - y * b01).div_euclid(n0);
            for x in x0 - 1..=x0 + 2 {
                let v = norm(x, y);
                if v < best.0 {
                    best = (v, x, y);
                }
            }
        }
        self.sub(2, 0, best.1);
        self.sub(2, 1, best.2);
    }
}

/// A basis (columns) realising the successive minima of the lattice with Gram `a`.
pub(crate) fn greedy(a: &Mat3) -> Mat3 {
    let mut basis = Basis {
        a,
        b: [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
    };
    loop {
        basis.sort();
        basis.lagrange();
        let before = basis.ip(2, 2);
        basis.closest();
        let after = basis.ip(2, 2);
        if after >= basis.ip(1, 1) {
            break;
        }
        debug_assert!(after < before || after < basis.ip(1, 1));
    }
    basis.sort();
    linalg::from_columns(basis.b)
}

/// `(G, T)` with `G = Tᵀ·A·T` greedy reduced, `A` the doubled Gram of `f`.
pub(crate) fn reduced_gram(f: &TernaryForm) -> (Mat3, Mat3) {
    let a = f.doubled_gram();
    let t = greedy(&a);
    (
        linalg::congruent(&a, &t).expect("reduction does not grow entries"),
        t,
    )
}

struct Canonical {
    form: TernaryForm,
    /// Every basis (in coordinates of the input) on which the input takes the canonical form.
    bases: Vec<Mat3>,
}

fn canonical(f: &TernaryForm, all: bool) -> Canonical {
    let (g, t) = reduced_gram(f);
    let minima = [g[0][0], g[1][1], g[2][2]];
    let mut sets: Vec<Vec<Vec3>> = Vec::with_capacity(3);
    for (i, &m) in minima.iter().enumerate() {
        if i > 0 && m == minima[i - 1] {
            let prev = sets[i - 1].clone();
            sets.push(prev);
            continue;
        }
        let mut s = Vec::new();
        vectors::for_each(&g, m as i128, true, |x, _| {
            s.push(x);
            true
        });
        s.sort();
        sets.push(s);
    }
    let mut best: Option<[i128; 3]> = None;
    let mut bases = Vec::new();
    for v1 in &sets[0] {
        let gv1 = linalg::mat_vec(&g, v1);
        for v2 in &sets[1] {
            let r = dot(&gv1, v2);
            let gv2 = linalg::mat_vec(&g, v2);
            for v3 in &sets[2] {
                let key = [dot(&gv2, v3), dot(&gv1, v3), r];
                if best.is_some_and(|b| key > b) {
                    continue;
                }
                let m = linalg::from_columns([*v1, *v2, *v3]);
                let d = linalg::det(&m);
                if d != 1 && d != -1 {
                    continue;
                }
                if best != Some(key) {
                    best = Some(key);
                    bases.clear();
                }
                if all || bases.is_empty() {
                    bases.push(linalg::mul(&t, &m));
                }
            }
        }
    }
    let k = best.expect("a reduced basis always exists");
    let form = TernaryForm::new(
        minima[0] / 2,
        minima[1] / 2,
        minima[2] / 2,
        k[0] as i64,
        k[1] as i64,
        k[2] as i64,
    )
    .expect("isometric to a positive definite form");
    Canonical { form, bases }
}

fn dot(x: &Vec3, y: &Vec3) -> i128 {
    x.iter().zip(y).map(|(a, b)| *a as i128 * *b as i128).sum()
}

/// Canonical representative of the isometry class: the lexicographically smallest
/// `(a,b,c,p,q,r)` over all bases whose vectors realise the successive minima.
pub fn reduce(f: &TernaryForm) -> TernaryForm {
    canonical(f, false).form
}

/// Canonical form together with a basis of `f` on which `f` takes that form.
pub fn reduce_with_basis(f: &TernaryForm) -> (TernaryForm, Mat3) {
    let c = canonical(f, false);
    (c.form, c.bases[0])
}

pub fn isometric(f: &TernaryForm, g: &TernaryForm) -> bool {
    f.four_d() == g.four_d() && reduce(f) == reduce(g)
}

/// An integral `U` with `det U = ±1` and `Uᵀ·Gram(f)·U = Gram(g)`.
pub fn find_isometry(f: &TernaryForm, g: &TernaryForm) -> Option<Mat3> {
    let (cf, bf) = reduce_with_basis(f);
    let (cg, bg) = reduce_with_basis(g);
    (cf == cg).then(|| linalg::mul(&bf, &linalg::unimodular_inverse(&bg)))
}

/// The full orthogonal group `O(L)` as matrices acting on coordinates, sorted.
pub fn automorphisms(f: &TernaryForm) -> Vec<Mat3> {
    let c = canonical(f, true);
    let inv = linalg::unimodular_inverse(&c.bases[0]);
    let mut out: Vec<Mat3> = c.bases.iter().map(|b| linalg::mul(b, &inv)).collect();
    out.sort();
    out.dedup();
    out
}
