use std::fmt::Write as _;

use serde_json::{json, Value};
use ternary_core::correspondence::{
    analyze_graph, build_graph_from, chain_decompose, exceptional_transfer, hall_matching, l_nm,
    representable_pair, scaling_split, transfer_holds, Convention, CorrespondenceGraph,
};
use ternary_core::genus::SpinorPartition;
use ternary_core::linalg::Mat3;
use ternary_core::local::h_type_table_match;
use ternary_core::reduce::reduce_with_basis;
use ternary_core::vectors::represents;
use ternary_core::watson::{
    fiber_exponent, gamma_descendants, hyperbolic_level, lambda_fibers, watson, watson_graph,
};
use ternary_core::{automorphisms, find_isometry, Result, TernaryForm};

use crate::cache::GenusCache;
use crate::Command;

pub struct Rendered {
    pub payload: Value,
    pub text: String,
    pub dot: Option<String>,
}

pub type Outcome = Result<Rendered>;

fn plain(payload: Value, text: String) -> Outcome {
    Ok(Rendered {
        payload,
        text,
        dot: None,
    })
}

fn parse(s: &str) -> Result<TernaryForm> {
    s.parse()
}

fn matrix_text(m: &Mat3) -> String {
    m.iter()
        .map(|r| format!("{} {} {}", r[0], r[1], r[2]))
        .collect::<Vec<_>>()
        .join("; ")
}

fn partition_json(p: &SpinorPartition) -> Value {
    json!({
        "four_d": p.table.four_d,
        "classes": p.table.classes,
        "parts": p.parts,
        "labels": p.labels,
    })
}

pub fn run(cmd: &Command, convention: Convention, cache: &GenusCache) -> Outcome {
    match cmd {
        Command::Reduce { form } => {
            let f = parse(form)?;
            let (r, basis) = reduce_with_basis(&f);
            plain(
                json!({ "input": f, "reduced": r, "basis": basis }),
                format!("{r}\n"),
            )
        }
        Command::Isom { first, second } => {
            let (f, g) = (parse(first)?, parse(second)?);
            let u = find_isometry(&f, &g);
            let text = match &u {
                Some(m) => format!("isometric\n{}\n", matrix_text(m)),
                None => "not isometric\n".into(),
            };
            plain(
                json!({ "first": f, "second": g, "isometric": u.is_some(), "isometry": u }),
                text,
            )
        }
        Command::Aut { form } => {
            let f = parse(form)?;
            let auts = automorphisms(&f);
            let mut text = format!("order {}\n", auts.len());
            for a in &auts {
                let _ = writeln!(text, "{}", matrix_text(a));
            }
            plain(
                json!({ "form": f, "order": auts.len(), "automorphisms": auts }),
                text,
            )
        }
        Command::Disc { form } => {
            let f = parse(form)?;
            let d = f.discriminant().value();
            let d = if *d.denom() == 1 {
                d.numer().to_string()
            } else {
                format!("{}/{}", d.numer(), d.denom())
            };
            plain(
                json!({ "form": f, "d": d, "four_d": f.four_d() }),
                format!("{d}\n"),
            )
        }
        Command::GenusEnum { form } => {
            let p = cache.partition(&parse(form)?)?;
            let t = &p.table;
            let mut text = format!("{} classes, 4d = {}\n", t.len(), t.four_d);
            for c in &t.classes {
                let _ = writeln!(text, "{c}");
            }
            plain(
                json!({ "four_d": t.four_d, "count": t.len(), "classes": t.classes }),
                text,
            )
        }
        Command::Spinor { form } => {
            let p = cache.partition(&parse(form)?)?;
            let mut text = format!("{} classes, g = {}\n", p.table.len(), p.g());
            for k in 0..p.g() {
                let forms: Vec<String> = p.part_forms(k).iter().map(|f| f.to_string()).collect();
                let _ = writeln!(text, "spn {k}: {}", forms.join("  "));
            }
            let mut payload = partition_json(&p);
            payload["count"] = json!(p.table.len());
            payload["g"] = json!(p.g());
            plain(payload, text)
        }
        Command::WatsonLambda { form, p } => {
            let f = parse(form)?;
            let w = watson(&f, *p)?;
            let src = cache.partition(&f)?;
            let dst = cache.partition(&w.lambda)?;
            let a = fiber_exponent(&lambda_fibers(&src, &dst, *p)?)?;
            let row = if f.is_primitive() {
                h_type_table_match(&f, *p)?
            } else {
                None
            };
            let mut text = format!(
                "{}\nscale {}, g(L) = {}, g(λ) = {}, a = {a}\n",
                w.lambda,
                w.scale,
                src.g(),
                dst.g()
            );
            if let Some(r) = &row {
                let _ = writeln!(text, "table row {}", r.row);
            }
            plain(
                json!({
                    "input": f,
                    "p": p,
                    "sublattice": w.sublattice.basis,
                    "scale": w.scale,
                    "lambda": w.lambda,
                    "g": src.g(),
                    "g_lambda": dst.g(),
                    "fiber_exponent": a,
                    "table_row": row,
                }),
                text,
            )
        }
        Command::WatsonGamma { form, p } => {
            let f = parse(form)?;
            let g = gamma_descendants(&f, *p)?;
            let level = hyperbolic_level(&f, *p);
            let text = format!(
                "level {}\n{}\n{}\n",
                level.unwrap_or(0),
                g.descendants[0],
                g.descendants[1]
            );
            plain(
                json!({
                    "parent": f,
                    "p": p,
                    "level": level,
                    "sublattices": [g.sublattices[0].basis, g.sublattices[1].basis],
                    "descendants": g.descendants,
                    "loop": g.is_loop(),
                }),
                text,
            )
        }
        Command::WatsonGraph { form, p, m } => {
            let g = watson_graph(&parse(form)?, *p, *m)?;
            let comps = g.components();
            let mut text = format!(
                "type {:?}, {} vertices, {} edges, {} components\n",
                g.kind,
                g.vertices.len(),
                g.edges.len(),
                comps.len()
            );
            for e in &g.edges {
                let _ = writeln!(text, "{} -- {}  [{}]", e.v1, e.v2, e.class);
            }
            let mut payload = serde_json::to_value(&g).expect("serializable");
            payload["components"] = json!(comps);
            Ok(Rendered {
                payload,
                text,
                dot: Some(g.to_dot()),
            })
        }
        Command::CorrPairs { n_form, m_form, n } => {
            let (nf, mf) = (parse(n_form)?, parse(m_form)?);
            let witness = representable_pair(&nf, &mf, *n)?;
            let g = graph(cache, &nf, &mf, *n)?;
            let pairs: Vec<Value> = g
                .pairs
                .iter()
                .map(|&(i, j)| json!([g.n_side.table.classes[i], g.m_side.table.classes[j]]))
                .collect();
            let mut text = format!("representable: {}\n", witness.is_some());
            for &(i, j) in &g.pairs {
                let _ = writeln!(
                    text,
                    "{}  {}",
                    g.n_side.table.classes[i], g.m_side.table.classes[j]
                );
            }
            plain(
                json!({
                    "n": n,
                    "representable": witness.is_some(),
                    "witness": witness.map(|w| w.witness.basis),
                    "pairs": pairs,
                }),
                text,
            )
        }
        Command::CorrGraph { n_form, m_form, n } => {
            let g = graph(cache, &parse(n_form)?, &parse(m_form)?, *n)?;
            let comps = g.components();
            let mut text = format!("g(N) = {}, g(M) = {}\n", g.n_side.g(), g.m_side.g());
            for &(a, b, w) in &g.edges {
                let _ = writeln!(text, "N{a} -- M{b}  x{w}");
            }
            let _ = writeln!(
                text,
                "{} components, complete: {}, respects spinor genus: {}",
                comps.len(),
                g.components_complete(),
                g.respects_spinor_genus()
            );
            let payload = json!({
                "n": n,
                "n_side": partition_json(&g.n_side),
                "m_side": partition_json(&g.m_side),
                "edges": g.edges,
                "regularity": g.regularity(),
                "covers": g.covers(),
                "components": comps,
                "complete": g.components_complete(),
                "respects": g.respects_spinor_genus(),
            });
            Ok(Rendered {
                payload,
                text,
                dot: Some(g.to_dot()),
            })
        }
        Command::CorrSplit { n_form, m_form, n } => {
            let (nf, mf) = (parse(n_form)?, parse(m_form)?);
            let split = scaling_split(&nf, &mf, *n, convention)?;
            let chain = chain_decompose(&nf, &mf, *n)?;
            let l = l_nm(&nf, &mf, *n, convention)?;
            let mut text = format!(
                "n1 = {}, n2(e) = {}, n2(o) = {}\n",
                split.n1, split.n2e, split.n2o
            );
            for (p, f) in &chain {
                let _ = writeln!(text, "N({p}) = {f}");
            }
            let _ = writeln!(text, "L_NM = {l}");
            plain(json!({ "split": split, "chain": chain, "L_NM": l }), text)
        }
        Command::CorrAnalyze { n_form, m_form, n } => {
            let (nf, mf) = (parse(n_form)?, parse(m_form)?);
            let g = graph(cache, &nf, &mf, *n)?;
            let r = analyze_graph(&g, &nf, &mf, convention)?;
            let text = format!(
                "g(N) = {}, g(M) = {}, L_NM = {}, g_NM = {}\npredicted K_{},{}; {} components; shape matches: {}\nrespects spinor genus: {}\n",
                r.g_n,
                r.g_m,
                r.l_nm,
                r.g_nm,
                r.alpha,
                r.beta,
                r.components.len(),
                r.shape_matches,
                r.respects
            );
            plain(serde_json::to_value(&r).expect("serializable"), text)
        }
        Command::CorrMatch { n_form, m_form, n } => {
            let g = graph(cache, &parse(n_form)?, &parse(m_form)?, *n)?;
            let m = hall_matching(&g)?;
            let holds = transfer_holds(&g, &m);
            let mut text = String::new();
            for &(a, b) in &m {
                let _ = writeln!(text, "N{a} <-> M{b}");
            }
            let _ = writeln!(text, "transfer holds: {holds}");
            plain(
                json!({ "n": n, "matching": m, "transfer_holds": holds }),
                text,
            )
        }
        Command::Represents { form, k, primitive } => {
            let f = parse(form)?;
            let r = *k > 0 && represents(&f, *k, *primitive);
            plain(
                json!({ "form": f, "k": k, "primitive": primitive, "represents": r }),
                format!("{r}\n"),
            )
        }
        Command::Exceptional {
            n_form,
            m_form,
            n,
            system,
        } => {
            let (nf, mf) = (parse(n_form)?, parse(m_form)?);
            let out = exceptional_transfer(&nf, &mf, *n, system, convention)?;
            let text = format!(
                "{}\n",
                out.iter()
                    .map(|k| k.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            );
            plain(
                json!({ "n": n, "system": system, "transferred": out }),
                text,
            )
        }
    }
}

fn graph(
    cache: &GenusCache,
    nf: &TernaryForm,
    mf: &TernaryForm,
    n: i64,
) -> Result<CorrespondenceGraph> {
    representable_pair(nf, mf, n)?;
    build_graph_from(cache.partition(nf)?, cache.partition(mf)?, n)
}
