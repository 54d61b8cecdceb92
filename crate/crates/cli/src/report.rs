//! Text and JSON renderings of the reports.

use std::fmt::Write;
use std::path::Path;

use serde_json::{json, Value};

use autsub::autgroup::{Analysis, AutPresentation, Reduction};
use autsub::sofic::Admissibility;
use autsub::{BlockCode, ConjReport, RAdic, Substitution};

fn kappa_text(k: &RAdic) -> String {
    format!("{k} = {}", k.expand().render())
}

fn kappa_json(k: &RAdic) -> Value {
    let digits = k.expand();
    json!({
        "value": k.to_string(),
        "base": k.base(),
        "digits": digits.render(),
        "preperiod": digits.preperiod,
        "period": digits.period,
    })
}

fn code_json(code: &BlockCode, src: &Substitution, dst: &Substitution) -> Value {
    let table: Vec<Value> = code
        .describe(src, dst)
        .into_iter()
        .map(|(w, v)| json!([w, v]))
        .collect();
    json!({
        "left": code.left(),
        "right": code.right(),
        "kappa": code.kappa().map(kappa_json),
        "table": table,
    })
}

fn code_text(out: &mut String, name: &str, code: &BlockCode, src: &Substitution, dst: &Substitution) {
    let _ = write!(out, "{name}: radius ({}, {})", code.left(), code.right());
    if let Some(k) = code.kappa() {
        let _ = write!(out, ", κ = {}", kappa_text(k));
    }
    out.push('\n');
    for (w, v) in code.describe(src, dst) {
        let _ = writeln!(out, "    {w} -> {v}");
    }
}

fn rules_inline(sub: &Substitution) -> String {
    (0..sub.size())
        .map(|a| format!("{}->{}", sub.name(a), sub.format_word(sub.image(a))))
        .collect::<Vec<_>>()
        .join(", ")
}

pub fn analysis_text(sub: &Substitution, a: &Analysis) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "substitution: {}", rules_inline(sub));
    let _ = writeln!(out, "letters: {}, length r = {}", a.letters, a.length);
    let _ = writeln!(out, "primitive: {}", a.primitive);
    if let Some(inf) = &a.infiniteness {
        let _ = writeln!(out, "infinite: {}", inf.infinite);
        if let Some(w) = &inf.warning {
            let _ = writeln!(out, "warning: {w}");
        }
    }
    if let Some(h) = &a.height {
        let _ = writeln!(out, "height: {}", h.h);
    }
    if let (Some(base), Some(k)) = (&a.pure_base, a.base_power) {
        let _ = writeln!(out, "pure base (from θ^{k}): {}", base.replace('\n', ", "));
    }
    if let Some(inj) = a.injective {
        let _ = writeln!(out, "pure base injective: {inj}");
    }
    if let (Some(false), Some(t)) = (a.injective, &a.injectivized) {
        let _ = writeln!(out, "injectivized: {}", t.replace('\n', ", "));
    }
    if let Some(c) = a.column_number {
        let tag = if c == 1 { " (coincidence)" } else { "" };
        let _ = writeln!(out, "column number: {c}{tag}");
    }
    if let Some(j) = a.shortest_forbidden {
        let _ = writeln!(out, "shortest forbidden word: {j}");
    }
    if let Some(p) = a.periodic_points {
        let _ = writeln!(out, "periodic points |P|: {p}");
    }
    if let Some(e) = a.sigma_empty {
        let _ = writeln!(out, "Σ empty: {e}");
    }
    if let Some(g) = a.augment {
        let _ = writeln!(out, "Σ̂ augmented by constant points: {g}");
    }
    if let Some(b) = &a.denominator_bound {
        let _ = writeln!(out, "denominator bound r^j - 1: {b}");
    }
    if let Some(o) = &a.one_sided {
        let _ = writeln!(out, "one-sided automorphism group: {o}");
    }
    out
}

pub fn analysis_json(file: &Path, a: &Analysis) -> Value {
    json!({
        "command": "analyze",
        "input": file.display().to_string(),
        "analysis": serde_json::to_value(a).expect("serializable analysis"),
    })
}

fn kernel_name(i: usize) -> String {
    if i == 0 {
        "id".into()
    } else {
        format!("K{i}")
    }
}

/// One-line description such as `Aut ≅ Z, generator G with G^2 = σ^-1`.
pub fn headline(p: &AutPresentation) -> String {
    let h = p.height();
    let mut s = format!("Aut ≅ {}", p.iso_type);
    match &p.root {
        None if p.kernel.len() == 1 => s.push_str(", generated by the shift"),
        None => {
            let ks: Vec<String> = (1..p.kernel.len()).map(kernel_name).collect();
            let _ = write!(s, ", generated by the shift and {}", ks.join(", "));
        }
        Some(_) if p.k0 == 0 => {
            let _ = write!(s, ", generator G with G^{} = σ^-{h}", p.d);
        }
        Some(_) => {
            let _ = write!(s, ", generator G with G^{} ∘ σ^{h} = {}", p.d, kernel_name(p.k0));
        }
    }
    s
}

fn verdict_text(v: &Admissibility) -> String {
    match v {
        Admissibility::Accept { points_tested } => format!("accepted ({points_tested} periodic points tested)"),
        Admissibility::Reject { witness } => format!(
            "rejected: x = {} has x {} t = {} outside Σ̃",
            kappa_text(&witness.x),
            if witness.sign > 0 { "+" } else { "-" },
            kappa_text(&witness.image)
        ),
    }
}

pub fn aut_text(p: &AutPresentation) -> String {
    let red = &p.reduction;
    let sub = p.substitution();
    let g = &red.graph;
    let mut out = String::new();
    let _ = writeln!(out, "substitution: {}", rules_inline(sub));
    let _ = writeln!(out, "height: {}", p.height());
    if !red.inj.is_trivial() || red.tower.h > 1 {
        let _ = writeln!(out, "working substitution: {}", rules_inline(red.work.substitution()));
    }
    let tag = if g.c == 1 { " (coincidence)" } else { "" };
    let _ = writeln!(out, "column number: {}{tag}", g.c);
    let _ = writeln!(out, "shortest forbidden word: {}", g.j);
    let _ = writeln!(
        out,
        "Σ empty: {}, |P| = {}, Σ̂ augmented: {}",
        g.sigma_empty, g.periodic_count, g.augment
    );
    if p.candidates.is_empty() {
        out.push_str("fingerprint candidates: none\n");
    } else {
        out.push_str("fingerprint candidates:\n");
        for c in &p.candidates {
            let _ = write!(
                out,
                "  d = {}: κ = {}, {}",
                c.candidate.d,
                kappa_text(&c.candidate.kappa),
                verdict_text(&c.admissibility)
            );
            if c.searched {
                let _ = write!(out, ", {} solution(s)", c.solutions);
            }
            out.push('\n');
        }
    }
    let _ = writeln!(out, "kernel of κ: {} element(s)", p.kernel.len());
    let _ = writeln!(out, "{}", headline(p));
    let _ = writeln!(out, "|Aut / ⟨σ⟩| = {}", p.quotient_order());
    if let Some(root) = &p.root {
        code_text(&mut out, "G", root, sub, sub);
        if let Some(k) = root.kappa() {
            let _ = writeln!(out, "κ(G^-1) = {}", kappa_text(&k.neg()));
        }
    }
    for (i, k) in p.kernel.iter().enumerate().skip(1) {
        code_text(&mut out, &kernel_name(i), k, sub, sub);
    }
    if !p.relations.is_empty() {
        out.push_str("relations (verified):\n");
        for r in &p.relations {
            let _ = writeln!(out, "  {r}");
        }
    }
    if let Some(hl) = &p.height_lift {
        let _ = writeln!(out, "height lift: h = {}, gcd(d, h) = {}", hl.h, hl.gcd);
        if let Some(t) = &hl.torsion {
            let _ = writeln!(out, "torsion element G^(d/e) ∘ σ^(h/e) of order {}", t.order);
        }
    }
    let _ = writeln!(out, "one-sided automorphism group: {}", p.one_sided);
    out
}

pub fn aut_json(file: &Path, p: &AutPresentation) -> Value {
    let sub = p.substitution();
    let g = &p.reduction.graph;
    let candidates: Vec<Value> = p
        .candidates
        .iter()
        .map(|c| {
            json!({
                "d": c.candidate.d,
                "p": c.candidate.p,
                "k": c.candidate.k.to_string(),
                "n_offset": c.candidate.n_offset,
                "kappa": kappa_json(&c.candidate.kappa),
                "admissibility": serde_json::to_value(&c.admissibility).expect("serializable verdict"),
                "searched": c.searched,
                "solutions": c.solutions,
            })
        })
        .collect();
    let height_lift = p.height_lift.as_ref().map(|hl| {
        json!({
            "h": hl.h,
            "gcd": hl.gcd,
            "cyclic": hl.cyclic,
            "torsion": hl.torsion.as_ref().map(|t| json!({
                "order": t.order,
                "code": code_json(&t.code, sub, sub),
            })),
        })
    });
    json!({
        "command": "aut",
        "input": file.display().to_string(),
        "height": p.height(),
        "column_number": g.c,
        "shortest_forbidden": g.j,
        "sigma_empty": g.sigma_empty,
        "periodic_points": g.periodic_count,
        "augment": g.augment,
        "candidates": candidates,
        "kernel": p.kernel.iter().map(|k| code_json(k, sub, sub)).collect::<Vec<_>>(),
        "table": p.table,
        "root": p.root.as_ref().map(|r| code_json(r, sub, sub)),
        "d": p.d,
        "k0": p.k0,
        "power_order": p.power_order,
        "action": p.action,
        "generators": p.generators,
        "relations": p.relations,
        "abelian": p.abelian,
        "iso_type": p.iso_type,
        "summary": headline(p),
        "quotient_order": p.quotient_order(),
        "height_lift": height_lift,
        "one_sided": serde_json::to_value(&p.one_sided).expect("serializable status"),
    })
}

pub fn conj_text(s1: &Substitution, s2: &Substitution, rep: &ConjReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "first: {}", rules_inline(s1));
    let _ = writeln!(out, "second: {}", rules_inline(s2));
    let _ = writeln!(out, "decision: {}", rep.decision);
    if let Some(o) = &rep.obstruction {
        let _ = writeln!(out, "obstruction: {o}");
    }
    if let Some((m, n)) = rep.powers {
        let _ = writeln!(out, "compared as θ1^{m} and θ2^{n}");
    }
    for c in &rep.classes {
        let _ = write!(
            out,
            "  class κ ≡ {}: {} solution(s), {} invertible",
            kappa_text(&c.kappa),
            c.solutions,
            c.invertible
        );
        if let Some(e) = &c.error {
            let _ = write!(out, " ({e})");
        }
        out.push('\n');
    }
    if let Some(w) = &rep.witness {
        code_text(&mut out, "W", w, s1, s2);
    }
    if let Some(w) = &rep.inverse {
        code_text(&mut out, "W^-1", w, s2, s1);
    }
    out
}

pub fn conj_json(files: [&Path; 2], s1: &Substitution, s2: &Substitution, rep: &ConjReport) -> Value {
    let classes: Vec<Value> = rep
        .classes
        .iter()
        .map(|c| {
            json!({
                "kappa": kappa_json(&c.kappa),
                "solutions": c.solutions,
                "invertible": c.invertible,
                "error": c.error,
            })
        })
        .collect();
    json!({
        "command": "conj",
        "inputs": files.iter().map(|f| f.display().to_string()).collect::<Vec<_>>(),
        "decision": serde_json::to_value(rep.decision).expect("serializable decision"),
        "exit_code": rep.decision.exit_code(),
        "obstruction": rep.obstruction,
        "powers": rep.powers.map(|(m, n)| vec![m, n]),
        "classes": classes,
        "witness": rep.witness.as_ref().map(|w| code_json(w, s1, s2)),
        "inverse": rep.inverse.as_ref().map(|w| code_json(w, s2, s1)),
    })
}

pub fn graph_text(red: &Reduction) -> String {
    let g = &red.graph;
    let sub = red.work.substitution();
    let mut out = String::new();
    out.push_str("vertices:\n");
    for v in 0..g.vertices.len() {
        let _ = writeln!(out, "  {}", g.vertex_label(v, sub));
    }
    out.push_str("edges:\n");
    for ((from, to), labels) in g.grouped_edges() {
        let labels: Vec<String> = labels.iter().map(usize::to_string).collect();
        let _ = writeln!(
            out,
            "  {} -> {} [{}]",
            g.vertex_label(from, sub),
            g.vertex_label(to, sub),
            labels.join(",")
        );
    }
    let _ = writeln!(out, "column number: {}, shortest forbidden word: {}", g.c, g.j);
    out
}

pub fn graph_json(file: &Path, red: &Reduction) -> Value {
    let g = &red.graph;
    let sub = red.work.substitution();
    let edges: Vec<Value> = g
        .grouped_edges()
        .into_iter()
        .map(|((from, to), labels)| {
            json!({
                "from": g.vertex_label(from, sub),
                "to": g.vertex_label(to, sub),
                "labels": labels,
            })
        })
        .collect();
    json!({
        "command": "graph",
        "input": file.display().to_string(),
        "vertices": (0..g.vertices.len()).map(|v| g.vertex_label(v, sub)).collect::<Vec<_>>(),
        "edges": edges,
        "column_number": g.c,
        "shortest_forbidden": g.j,
        "sigma_empty": g.sigma_empty,
        "augment": g.augment,
        "periodic_points": g.periodic_count,
    })
}
