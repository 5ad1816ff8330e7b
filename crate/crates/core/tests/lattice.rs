use proptest::prelude::*;
use ternary_core::genus::forms_up_to;
use ternary_core::linalg::Mat3;
use ternary_core::{
    automorphisms, find_isometry, isometric, reduce, sublattices_of_index, Error, TernaryForm,
};

/// Integer vectors with `Q(x) ≤ bound`, found by scanning a box large enough to contain them.
fn brute_vectors(f: &TernaryForm, bound: i64) -> Vec<([i64; 3], i64)> {
    let a = f.doubled_gram();
    let trace = (a[0][0] + a[1][1] + a[2][2]) as f64 / 2.0;
    let det = f.four_d() as f64 / 4.0;
    // λ_min ≥ det / λ_max² ≥ det / trace².
    let r = ((bound as f64) * trace * trace / det).sqrt().ceil() as i64 + 1;
    let mut out = Vec::new();
    for x in -r..=r {
        for y in -r..=r {
            for z in -r..=r {
                let v = [x, y, z];
                let q = f.eval(&v);
                if q <= bound {
                    out.push((v, q));
                }
            }
        }
    }
    out
}

/// Isometry test by searching images of the standard basis among vectors of matching norm.
fn brute_isometric(f: &TernaryForm, g: &TernaryForm) -> bool {
    if f.four_d() != g.four_d() {
        return false;
    }
    let [a, b, c, p, q, r] = f.coefficients();
    let vs = brute_vectors(g, a.max(b).max(c));
    let with = |n: i64| vs.iter().filter(move |(_, q)| *q == n).map(|(v, _)| *v);
    let bil = |x: &[i64; 3], y: &[i64; 3]| {
        let s = [x[0] + y[0], x[1] + y[1], x[2] + y[2]];
        g.eval(&s) - g.eval(x) - g.eval(y)
    };
    for x in with(a) {
        for y in with(b) {
            if bil(&x, &y) != r {
                continue;
            }
            for z in with(c) {
                if bil(&x, &z) == q && bil(&y, &z) == p {
                    let det = x[0] * (y[1] * z[2] - y[2] * z[1])
                        - x[1] * (y[0] * z[2] - y[2] * z[0])
                        + x[2] * (y[0] * z[1] - y[1] * z[0]);
                    if det.abs() == 1 {
                        return true;
                    }
                }
            }
        }
    }
    false
}

/// Representation numbers `r(k)` for `k ≤ bound`.
fn theta(f: &TernaryForm, bound: i64) -> Vec<usize> {
    let mut t = vec![0; bound as usize + 1];
    for (_, q) in brute_vectors(f, bound) {
        t[q as usize] += 1;
    }
    t
}

fn arb_form() -> impl Strategy<Value = TernaryForm> {
    (1i64..12, 1i64..12, 1i64..12, -6i64..7, -6i64..7, -6i64..7)
        .prop_filter_map("positive definite", |(a, b, c, p, q, r)| {
            TernaryForm::new(a, b, c, p, q, r).ok()
        })
}

fn arb_unimodular() -> impl Strategy<Value = Mat3> {
    let elementary =
        (0usize..3, 0usize..3, -2i64..3).prop_filter("off diagonal", |(i, j, _)| i != j);
    proptest::collection::vec(elementary, 0..6).prop_map(|ops| {
        let mut m: Mat3 = [[1, 0, 0], [0, 1, 0], [0, 0, 1]];
        for (i, j, k) in ops {
            for row in m.iter_mut() {
                row[j] += k * row[i];
            }
        }
        m
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn reduction_is_a_class_invariant(f in arb_form(), u in arb_unimodular()) {
        let g = f.transform(&u).unwrap();
        prop_assert_eq!(g.four_d(), f.four_d());
        prop_assert_eq!(reduce(&g), reduce(&f));
        prop_assert_eq!(reduce(&reduce(&f)), reduce(&f));
        prop_assert!(isometric(&f, &g));
        let m = find_isometry(&f, &g).unwrap();
        prop_assert_eq!(f.transform(&m).unwrap(), g);
    }

    #[test]
    fn gram_syntax_round_trips(f in arb_form()) {
        let back: TernaryForm = f.gram_string().parse().unwrap();
        prop_assert_eq!(back, f);
        let plain: TernaryForm = f.to_string().parse().unwrap();
        prop_assert_eq!(plain, f);
    }

    #[test]
    fn automorphisms_preserve_the_form(f in arb_form()) {
        let auts = automorphisms(&f);
        prop_assert!(auts.len() >= 2 && 48 % auts.len() == 0);
        for u in &auts {
            prop_assert_eq!(f.transform(u).unwrap(), f);
        }
    }

    #[test]
    fn reduced_form_has_the_same_theta_series(f in arb_form()) {
        prop_assert_eq!(theta(&f, 12), theta(&reduce(&f), 12));
    }
}

#[test]
fn classes_are_pairwise_distinct_by_brute_force() {
    let forms = forms_up_to(120, false);
    for (i, f) in forms.iter().enumerate() {
        for g in &forms[i + 1..] {
            if g.four_d() != f.four_d() {
                break;
            }
            if theta(f, 20) == theta(g, 20) {
                assert!(
                    !brute_isometric(f, g),
                    "{f} and {g} are listed separately but isometric"
                );
            }
        }
    }
}

#[test]
fn every_small_form_is_listed() {
    let forms = forms_up_to(60, false);
    for a in 1..6 {
        for b in a..6 {
            for c in b..8 {
                for p in -b..=b {
                    for q in -a..=a {
                        for r in -a..=a {
                            let Ok(f) = TernaryForm::new(a, b, c, p, q, r) else {
                                continue;
                            };
                            if f.four_d() > 60 {
                                continue;
                            }
                            let hits: Vec<_> =
                                forms.iter().filter(|g| brute_isometric(&f, g)).collect();
                            assert_eq!(hits.len(), 1, "{f}: {hits:?}");
                            assert_eq!(*hits[0], reduce(&f));
                        }
                    }
                }
            }
        }
    }
}

/// Sublattices of index `n` in Hermite normal form (upper triangular, `0 ≤ off-diagonal < pivot`).
fn brute_sublattice_count(n: i64) -> usize {
    let mut count = 0;
    for d1 in 1..=n {
        for d2 in 1..=n {
            if n % (d1 * d2) != 0 {
                continue;
            }
            let d3 = n / (d1 * d2);
            count += (d2 * d3 * d3) as usize;
        }
    }
    count
}

#[test]
fn sublattice_counts() {
    let f = TernaryForm::diagonal(1, 2, 3).unwrap();
    for n in 1..=12 {
        if [4, 8, 9, 12].contains(&n) {
            assert!(matches!(sublattices_of_index(&f, n), Err(Error::NotSquareFree(m)) if m == n));
            continue;
        }
        let subs = sublattices_of_index(&f, n).unwrap();
        assert_eq!(subs.len(), brute_sublattice_count(n), "index {n}");
        assert!(subs.iter().all(|s| s.index() == n));
        assert!(subs.iter().all(|s| s.form().four_d() == n * n * f.four_d()));
    }
}

#[test]
fn gram_notation() {
    let n1: TernaryForm = "gram:12,15,135,5,0,0".parse().unwrap();
    assert_eq!(n1.coefficients(), [12, 15, 135, 10, 0, 0]);
    let m1: TernaryForm = "1,20,80,0,0,0".parse().unwrap();
    assert_eq!(m1.four_d(), 6400);
    assert_eq!(n1.four_d(), 15 * m1.four_d());
    assert!("1,1,0,0,0,0".parse::<TernaryForm>().is_err());
    assert!("gram:1,1,1,0.25,0,0".parse::<TernaryForm>().is_err());
}
