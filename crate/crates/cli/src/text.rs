//! Plain-text renderings for `--format text`.

use std::fmt::Write;

use cosetperm::census::CountReport;
use cosetperm::format::{CertificateDoc, VerifyDoc};
use cosetperm::{ClassVerdict, FieldCtx};

pub fn certificate(ctx: &FieldCtx, doc: &CertificateDoc) -> String {
    let mut s = String::new();
    writeln!(s, "q = {}, r = {}, d = {}", ctx.q(), doc.r, doc.d).unwrap();
    writeln!(s, "matrix [a_ij]:").unwrap();
    for row in &doc.matrix {
        writeln!(s, "  {}", row.join(" ")).unwrap();
    }
    writeln!(s, "profile:").unwrap();
    for p in &doc.profile {
        writeln!(s, "  k={} s={} t={} tau={} pi={} lambda={} e={}", p.k, p.s, p.t, p.tau, p.pi, p.lambda, p.e).unwrap();
    }
    writeln!(s, "h = {}", doc.h_poly(ctx).to_text()).unwrap();
    writeln!(s, "f = {}", doc.f_poly(ctx).to_text()).unwrap();
    s
}

pub fn verify(doc: &VerifyDoc) -> String {
    let mut s = String::new();
    let rep = &doc.report;
    match &rep.first_collision {
        None => writeln!(s, "permutation: yes ({} evaluations)", rep.evaluations).unwrap(),
        Some(c) => writeln!(s, "permutation: no, f({}) = f({}) = {}", c.x, c.y, c.value).unwrap(),
    }
    if let Some(prof) = &doc.coset_profile {
        for e in prof {
            writeln!(s, "  A_{}: lambda = {} (in A_{}), e = {} mod B", e.k, e.lambda, e.pi, e.e).unwrap();
        }
    }
    if let Some(c) = &doc.criterion {
        writeln!(s, "coset map {:?}: {}", c.map_values, if c.holds { "criterion holds" } else { "criterion fails" })
            .unwrap();
    }
    s
}

pub fn classify(v: &ClassVerdict, oracle: bool) -> String {
    let mut s = String::new();
    let tags: Vec<String> =
        v.tags.iter().map(|t| serde_json::to_value(t).unwrap().as_str().unwrap_or_default().to_string()).collect();
    writeln!(s, "tags: {}", tags.join(", ")).unwrap();
    for c in &v.conditions {
        writeln!(s, "  [{}] {}", if c.passed { "ok" } else { "no" }, c.name).unwrap();
    }
    for (k, w) in &v.witnesses {
        writeln!(s, "  {k} = {w}").unwrap();
    }
    let pp = match v.pp {
        Some(true) => "PP",
        Some(false) => "not a PP",
        None => "undecided",
    };
    writeln!(s, "verdict: {pp}; oracle: {}", if oracle { "PP" } else { "not a PP" }).unwrap();
    s
}

fn show<T: std::fmt::Display>(x: &Option<T>) -> String {
    x.as_ref().map_or("-".to_string(), |v| v.to_string())
}

pub fn census(rows: &[CountReport]) -> String {
    let mut s = String::new();
    for r in rows {
        let params: Vec<String> = r.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        writeln!(
            s,
            "{:<7} {:<28} closed {:>12} brute {:>12} {}",
            r.quantity,
            params.join(" "),
            show(&r.closed),
            show(&r.brute),
            if r.agree { "" } else { "MISMATCH" }
        )
        .unwrap();
    }
    s
}
