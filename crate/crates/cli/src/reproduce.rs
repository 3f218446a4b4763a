//! Worked results recomputed and compared line by line with checked-in copies.

use std::collections::BTreeSet;

use anyhow::Context;
use clap::ValueEnum;
use cosetperm::arith::gcd;
use cosetperm::census::set_a;
use cosetperm::classes::{class4_admissible, class4_generate, class4_normal_form, class_n_check, Shape};
use cosetperm::construction::assemble;
use cosetperm::format::{CertificateDoc, InputDoc};
use cosetperm::oracle::is_permutation;
use cosetperm::{coset_system, FieldCtx, Gf, SparseSpec};
use serde::Serialize;

use crate::Opts;

const EXAMPLE_54_INPUT: &str = include_str!("../../../data/example54.json");
const EXAMPLE_54_MATRIX: &str = include_str!("../golden/example54.matrix.txt");
const CLASS4_TABLE: &str = include_str!("../golden/table-class4.txt");
const WORKED_CLASSES: &str = include_str!("../golden/section-4.3-examples.txt");

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Target {
    #[value(name = "example-5.4")]
    Example54,
    #[value(name = "table-class4")]
    TableClass4,
    #[value(name = "section-4.3-examples")]
    WorkedClasses,
    #[value(name = "lemma-LL4.3")]
    SetA,
}

#[derive(Debug, Serialize)]
pub struct Reproduction {
    pub target: String,
    pub pass: bool,
    pub summary: String,
    /// The recomputed lines.
    pub lines: Vec<String>,
    /// `-expected` / `+got` pairs for lines that differ.
    pub diff: Vec<String>,
}

impl Reproduction {
    pub fn to_text(&self) -> String {
        let mut s = format!("{}: {} ({})\n", self.target, if self.pass { "PASS" } else { "FAIL" }, self.summary);
        for l in &self.lines {
            s += &format!("  {l}\n");
        }
        for l in &self.diff {
            s += &format!("{l}\n");
        }
        s
    }
}

fn line_diff(want: &str, got: &[String]) -> Vec<String> {
    let want: Vec<&str> = want.lines().collect();
    let mut out = Vec::new();
    for i in 0..want.len().max(got.len()) {
        let (w, g) = (want.get(i).copied(), got.get(i).map(String::as_str));
        if w != g {
            out.push(format!("line {}:", i + 1));
            if let Some(w) = w {
                out.push(format!("-{w}"));
            }
            if let Some(g) = g {
                out.push(format!("+{g}"));
            }
        }
    }
    out
}

fn field(p: u64, m: u32) -> anyhow::Result<FieldCtx> {
    Ok(FieldCtx::new(p, m)?)
}

pub fn run(target: Target, opts: &Opts) -> anyhow::Result<Reproduction> {
    match target {
        Target::Example54 => example_54(),
        Target::TableClass4 => golden("table-class4", class4_table()?, CLASS4_TABLE, "Class 4 rows"),
        Target::WorkedClasses => golden("section-4.3-examples", worked_classes()?, WORKED_CLASSES, "worked instances"),
        Target::SetA => set_a_sizes(opts),
    }
}

fn golden(target: &str, lines: Vec<String>, want: &str, what: &str) -> anyhow::Result<Reproduction> {
    let diff = line_diff(want, &lines);
    let summary = format!("{} {what}, {} differing lines", lines.len(), diff.iter().filter(|l| l.starts_with("line")).count());
    Ok(Reproduction { target: target.into(), pass: diff.is_empty(), summary, lines, diff })
}

fn example_54() -> anyhow::Result<Reproduction> {
    let doc: InputDoc = serde_json::from_str(EXAMPLE_54_INPUT)?;
    let ctx = doc.field.as_ref().context("example input carries its field")?.build()?;
    let sys = coset_system(&ctx, doc.d)?;
    let cert = assemble(&ctx, &sys, &doc.to_input(&ctx)?)?;
    let matrix = CertificateDoc::of(&ctx, &cert).matrix;
    let lines: Vec<String> = matrix.iter().map(|r| r.join(" ")).collect();
    let want: Vec<&str> = EXAMPLE_54_MATRIX.split_whitespace().collect();
    let equal = matrix.iter().flatten().zip(&want).filter(|(a, b)| a == b).count();
    let rep = is_permutation(&ctx, &cert.f);
    let diff = line_diff(EXAMPLE_54_MATRIX, &lines);
    let summary = format!(
        "{equal} of {} matrix entries equal; f {} ({} evaluations)",
        want.len(),
        if rep.is_permutation { "permutes F_{47^2}" } else { "is not a permutation" },
        rep.evaluations
    );
    Ok(Reproduction { target: "example-5.4".into(), pass: diff.is_empty() && rep.is_permutation, summary, lines, diff })
}

/// Coefficient shapes used by the table, as functions of the row's root and
/// sign choice.
fn coeff_shapes(ctx: &FieldCtx, x: Gf, sign: i8) -> [Option<Gf>; 3] {
    let sq = ctx.mul(x, x);
    [
        Some(x),
        (sign != 0).then(|| if sign > 0 { sq } else { ctx.neg(sq) }),
        Some(ctx.neg(ctx.inv(x).unwrap())),
    ]
}

fn class4_table() -> anyhow::Result<Vec<String>> {
    let mut out = Vec::new();
    for q in [5u64, 23, 11, 29, 47] {
        let f = field(q, 1)?;
        let l = (q + 1) / 6;
        let block = 3;
        for residue in 0..3 {
            let r = (1..=3 * q).find(|&r| r % 3 == residue && class4_admissible(q, r)).context("admissible r")?;
            let members = class4_generate(&f, r)?;
            let var = if residue == 2 { "b" } else { "a" };
            let names = [format!("+{var}"), format!("±{var}^2"), format!("-{var}^-1")];
            let mut exps = BTreeSet::new();
            // per term position, the shapes that fit every member
            let mut fits = [[true; 3]; 2];
            let (mut pps, mut residues) = (0, BTreeSet::new());
            let mut cube_minus_one = true;
            for m in &members {
                let Shape::Trinomial { i1, j1, i2, j2, a, b } = m.spec.shape else { unreachable!() };
                let mut terms = [(i1 + j1 * block, a), (i2 + j2 * block, b)];
                terms.sort_by_key(|t| t.0);
                exps.insert(terms.map(|t| t.0 as u64 / l));
                let shapes = coeff_shapes(&f, m.root, m.sign);
                for (pos, &(_, c)) in terms.iter().enumerate() {
                    for (i, sh) in shapes.iter().enumerate() {
                        fits[pos][i] &= *sh == Some(c);
                    }
                }
                cube_minus_one &= f.pow(m.root, 3) == f.neg(Gf::ONE);
                let g = m.spec.pp(&f);
                pps += is_permutation(&f, &g).is_permutation as usize;
                if let Some((_, s, _)) = class4_normal_form(&f, &g) {
                    residues.insert(s % 3);
                }
            }
            let exps: Vec<[u64; 2]> = exps.into_iter().collect();
            let h = match exps.as_slice() {
                [e] => (0..2)
                    .map(|pos| {
                        let name = fits[pos].iter().position(|&ok| ok).map_or("?", |i| names[i].as_str());
                        format!("{name} X^{}l", e[pos])
                    })
                    .collect::<Vec<_>>()
                    .join(" "),
                _ => format!("exponents vary: {exps:?}"),
            };
            out.push(format!(
                "q={q} (q mod 18 = {}) r={r} (r mod 3 = {residue}): h = 1 {h}; {}; {} members, {pps} PP, s mod 3 in {:?}",
                q % 18,
                if cube_minus_one { format!("{var}^3 = -1") } else { format!("{var}^6 = 1") },
                members.len(),
                residues
            ));
        }
    }
    Ok(out)
}

fn worked_classes() -> anyhow::Result<Vec<String>> {
    let mut out = Vec::new();
    let f = field(5, 1)?;
    let sys = coset_system(&f, 2)?;
    let minus_one = f.neg(Gf::ONE);
    let mut report = |class: u8, ctx: &FieldCtx, sys: &cosetperm::CosetSystem, spec: SparseSpec| -> anyhow::Result<()> {
        let v = class_n_check(ctx, sys, &spec, class)?;
        let green = v.conditions.iter().filter(|c| c.passed).count();
        let Shape::Trinomial { i1, j1, i2, j2, a, b } = spec.shape else { unreachable!() };
        let pp = is_permutation(ctx, &spec.pp(ctx)).is_permutation;
        out.push(format!(
            "class {class}: q={} d={} r={} (i1,j1)=({i1},{j1}) (i2,j2)=({i2},{j2}) a={} b={}: {green}/{} conditions, verdict {}, oracle {}",
            ctx.q(),
            spec.d,
            spec.r,
            ctx.format_basis(a),
            ctx.format_basis(b),
            v.conditions.len(),
            match v.pp {
                Some(true) => "PP",
                Some(false) => "not PP",
                None => "undecided",
            },
            if pp { "PP" } else { "not PP" }
        ));
        Ok(())
    };
    // a^{q-1} = -1, ((1+a)/(1-a))^{(q+1)/2} = -1, b = a - 1
    for a in f.elements().skip(1) {
        if a != Gf::ONE
            && f.pow(a, 4) == minus_one
            && f.pow(f.div(f.add(Gf::ONE, a), f.sub(Gf::ONE, a)), 3) == minus_one
        {
            report(1, &f, &sys, SparseSpec::trinomial(3, 2, (0, 1), (1, 0), a, f.sub(a, Gf::ONE)))?;
        }
    }
    // a = -1, (2/b)^{(q+1)/2} = 1
    let two = f.from_int(2);
    for b in f.elements().skip(1) {
        if f.pow(f.div(two, b), 3) == Gf::ONE {
            report(2, &f, &sys, SparseSpec::trinomial(3, 2, (0, 1), (2, 0), minus_one, b))?;
        }
    }
    // q = 8, a = -1, ((1 - eps)/b)^{(q+1)/3} = 1
    let f8 = field(2, 3)?;
    let sys8 = coset_system(&f8, 3)?;
    let w = f8.sub(Gf::ONE, sys8.epsilon);
    for b in f8.elements().skip(1) {
        if f8.pow(f8.div(w, b), 3) == Gf::ONE {
            report(3, &f8, &sys8, SparseSpec::trinomial(3, 3, (0, 1), (1, 0), f8.neg(Gf::ONE), b))?;
        }
    }
    Ok(out)
}

fn set_a_sizes(opts: &Opts) -> anyhow::Result<Reproduction> {
    let fields: Vec<(u64, u32)> = match opts.p {
        Some(p) => vec![(p, opts.m.unwrap_or(1))],
        None => vec![(5, 1), (7, 1), (3, 2), (11, 1), (13, 1)],
    };
    let mut lines = Vec::new();
    let mut diff = Vec::new();
    for (p, m) in fields {
        let f = field(p, m)?;
        let q = f.q();
        let brute = set_a(&f)?.len() as u64;
        let formula = (q * q - 1) / 4;
        let rel = if brute == formula { "=" } else { "!=" };
        lines.push(format!("q={q}: brute {brute} {rel} formula {formula}"));
        if brute != formula {
            diff.push(format!("q={q}: brute count {brute}, (q^2-1)/4 = {formula}, gcd(q-1, 4) = {}", gcd(q as i64 - 1, 4)));
        }
    }
    let summary = format!("{} of {} fields match (q^2-1)/4", lines.len() - diff.len(), lines.len());
    Ok(Reproduction { target: "lemma-LL4.3".into(), pass: diff.is_empty(), summary, lines, diff })
}
