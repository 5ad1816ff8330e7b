use std::collections::BTreeMap;

use num_integer::Roots;

use super::{bad_primes, genus_symbols, GenusTable};
use crate::form::TernaryForm;
use crate::local::local_symbol;
use crate::par;
use crate::reduce::reduce;

/// Calls `f` on every form `(a,b,c,p,q,r)` satisfying the reduction inequalities
/// `0 ≤ r ≤ a`, `0 ≤ q ≤ a`, `|p| ≤ b`, `a ≤ b ≤ c`, `Q(e₃ ± e₁ ± e₂) ≥ c`, with
/// `lo ≤ 4dL ≤ hi` and the given first coefficient `a`.
fn for_each_reduced(a: i64, lo: i64, hi: i64, mut f: impl FnMut(TernaryForm)) {
    let mut b = a;
    while 2 * a * b * b <= hi {
        for r in 0..=a {
            let den = 4 * a * b - r * r;
            for q in 0..=a {
                for p in -b..=b {
                    if (0..4).any(|s| {
                        let (s1, s2) = (
                            if s & 1 == 0 { 1 } else { -1 },
                            if s & 2 == 0 { 1 } else { -1 },
                        );
                        a + b + s1 * s2 * r + s2 * p + s1 * q < 0
                    }) {
                        continue;
                    }
                    // 4dL = c·den − a·p² − b·q² + p·q·r
                    let rest = a * p * p + b * q * q - p * q * r;
                    let cmin = b.max((lo + rest + den - 1).div_euclid(den));
                    let cmax = (hi + rest).div_euclid(den);
                    for c in cmin..=cmax {
                        if let Ok(form) = TernaryForm::new(a, b, c, p, q, r) {
                            f(form);
                        }
                    }
                }
            }
        }
        b += 1;
    }
}

fn max_a(hi: i64) -> i64 {
    (hi / 2).cbrt() + 1
}

/// All reduced forms with `4dL = four_d` that `keep` accepts, canonicalized and deduplicated.
pub fn reduced_forms_with<F>(four_d: i64, keep: F) -> Vec<TernaryForm>
where
    F: Fn(&TernaryForm) -> bool + Sync + Send,
{
    let aa: Vec<i64> = (1..=max_a(four_d)).collect();
    let mut all = par::flat_map(aa, |a| {
        let mut out = Vec::new();
        for_each_reduced(a, four_d, four_d, |f| {
            if keep(&f) {
                out.push(reduce(&f));
            }
        });
        out
    });
    all.sort();
    all.dedup();
    all
}

/// The genus of `f`: every class with the same discriminant and local symbols.
pub fn enumerate_genus(f: &TernaryForm) -> GenusTable {
    let four_d = f.four_d();
    let symbols = genus_symbols(f);
    let content = f.content();
    let classes = reduced_forms_with(four_d, |g| {
        g.content() == content && symbols.iter().all(|s| local_symbol(g, s.p) == *s)
    });
    debug_assert!(classes.contains(&reduce(f)));
    GenusTable {
        four_d,
        classes,
        symbols,
    }
}

/// Every class with `4dL ≤ max_four_d` (primitive ones only if `primitive`), sorted by
/// discriminant and then by form.
pub fn forms_up_to(max_four_d: i64, primitive: bool) -> Vec<TernaryForm> {
    forms_in_range(1, max_four_d, primitive)
}

/// Every class with `lo ≤ 4dL ≤ hi`, in the order of [`forms_up_to`].
pub fn forms_in_range(lo: i64, hi: i64, primitive: bool) -> Vec<TernaryForm> {
    let aa: Vec<i64> = (1..=max_a(hi)).collect();
    let mut all = par::flat_map(aa, |a| {
        let mut out = Vec::new();
        for_each_reduced(a, lo, hi, |f| {
            if !primitive || f.is_primitive() {
                out.push(reduce(&f));
            }
        });
        out
    });
    all.sort_by_key(|f| (f.four_d(), *f));
    all.dedup();
    all
}

/// All genera with `4dL ≤ max_four_d`, ordered by discriminant and then by first class.
pub fn genera_up_to(max_four_d: i64, primitive: bool) -> Vec<GenusTable> {
    genera_in_range(1, max_four_d, primitive)
}

/// All genera with `lo ≤ 4dL ≤ hi`, in the order of [`genera_up_to`].
pub fn genera_in_range(lo: i64, hi: i64, primitive: bool) -> Vec<GenusTable> {
    let forms = forms_in_range(lo, hi, primitive);
    let mut by_d: BTreeMap<i64, Vec<TernaryForm>> = BTreeMap::new();
    for f in forms {
        by_d.entry(f.four_d()).or_default().push(f);
    }
    let groups: Vec<(i64, Vec<TernaryForm>)> = by_d.into_iter().collect();
    let mut out = par::flat_map(groups, |(four_d, forms)| {
        let primes = bad_primes(four_d);
        let mut genera: BTreeMap<Vec<crate::local::LocalSymbol>, Vec<TernaryForm>> =
            BTreeMap::new();
        for f in forms {
            let key: Vec<_> = primes.iter().map(|&p| local_symbol(&f, p)).collect();
            genera.entry(key).or_default().push(f);
        }
        let mut v: Vec<GenusTable> = genera
            .into_iter()
            .map(|(symbols, mut classes)| {
                classes.sort();
                GenusTable {
                    four_d,
                    classes,
                    symbols,
                }
            })
            .collect();
        v.sort_by(|x, y| x.classes[0].cmp(&y.classes[0]));
        v
    });
    out.sort_by(|x, y| (x.four_d, x.classes[0]).cmp(&(y.four_d, y.classes[0])));
    out
}
