//! File formats. Elements travel as `"0"` / `"g^e"` strings, polynomials as
//! arrays of discrete logs with `null` for zero coefficients (or as text
//! `c0 + c1*X^1 + ...`), and every document may carry its own field.

use serde::{Deserialize, Serialize};

use crate::classes::{Shape, SparseSpec};
use crate::construction::{AlgoInput, InputRow, PPCertificate, ProfileEntry};
use crate::coset::CosetSystem;
use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldOptions};
use crate::oracle::{extract_coset_monomial, CriterionReport, VerifyReport};
use crate::poly::Poly;

fn parse_err(e: impl std::fmt::Display) -> Error {
    Error::Parse(e.to_string())
}

/// `{p, m, modulus2: [c0, c1, 1], gamma: "u+vx"}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldDef {
    pub p: u64,
    #[serde(default = "one")]
    pub m: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus2: Option<Vec<u32>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<String>,
}

fn one() -> u32 {
    1
}

impl FieldDef {
    pub fn of(ctx: &FieldCtx) -> Self {
        let [c0, c1] = ctx.modulus2();
        let [u, v] = ctx.gamma_basis();
        FieldDef { p: ctx.p(), m: ctx.m(), modulus2: Some(vec![c0, c1, 1]), gamma: Some(format!("{u}+{v}x")) }
    }

    pub fn options(&self) -> Result<FieldOptions> {
        let modulus2 = match &self.modulus2 {
            None => None,
            Some(v) if v.len() == 3 && v[2] == 1 => Some([v[0], v[1]]),
            Some(v) => return Err(Error::Parse(format!("modulus2 must be [c0, c1, 1], got {v:?}"))),
        };
        let gamma = self.gamma.as_deref().map(parse_basis_pair).transpose()?;
        Ok(FieldOptions { modulus2, gamma, ..FieldOptions::default() })
    }

    pub fn build(&self) -> Result<FieldCtx> {
        FieldCtx::with_options(self.p, self.m, &self.options()?)
    }
}

/// `u+vx`, `vx`, `x` or `u` (base-`p` encoded coordinates).
pub fn parse_basis_pair(s: &str) -> Result<[u32; 2]> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Parse(format!("bad basis element {s:?}"));
    let num = |x: &str, dflt: u32| if x.is_empty() { Ok(dflt) } else { x.parse::<u32>().map_err(|_| bad()) };
    match t.strip_suffix('x').or_else(|| t.strip_suffix('g')) {
        None => Ok([num(&t, 0)?, 0]),
        Some(rest) => match rest.rfind('+') {
            Some(pos) => Ok([num(&rest[..pos], 0)?, num(&rest[pos + 1..], 1)?]),
            None => Ok([0, num(rest, 1)?]),
        },
    }
}

pub fn poly_to_json(f: &Poly) -> Vec<Option<u32>> {
    f.to_logs()
}

pub fn poly_from_json(ctx: &FieldCtx, v: &[Option<i64>]) -> Poly {
    Poly::from_logs(ctx, v)
}

/// A polynomial given either as a log array or as text.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PolyRepr {
    Logs(Vec<Option<i64>>),
    Text(String),
}

impl PolyRepr {
    pub fn to_poly(&self, ctx: &FieldCtx) -> Result<Poly> {
        match self {
            PolyRepr::Logs(v) => Ok(Poly::from_logs(ctx, v)),
            PolyRepr::Text(s) => Poly::parse_text(ctx, s),
        }
    }
}

/// `{field?, f}` where `f` is a log array or text.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolyDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldDef>,
    pub f: PolyRepr,
}

/// Reads a polynomial file: a JSON object, a bare JSON array, or text.
pub fn read_poly_doc(src: &str) -> Result<PolyDoc> {
    let t = src.trim_start();
    if t.starts_with('{') {
        serde_json::from_str(t).map_err(parse_err)
    } else if t.starts_with('[') {
        Ok(PolyDoc { field: None, f: PolyRepr::Logs(serde_json::from_str(t).map_err(parse_err)?) })
    } else {
        Ok(PolyDoc { field: None, f: PolyRepr::Text(src.trim().to_string()) })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowDoc {
    pub k: usize,
    pub s: usize,
    pub t: usize,
    pub tau: usize,
    pub pi: u64,
    pub lambda: String,
    #[serde(rename = "L")]
    pub l: Vec<Option<i64>>,
}

/// `{field?, r, d, rows: [{k, s, t, tau, pi, lambda, L}]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldDef>,
    pub r: u64,
    pub d: u64,
    pub rows: Vec<RowDoc>,
}

impl InputDoc {
    pub fn of(ctx: &FieldCtx, input: &AlgoInput) -> Self {
        let rows = input
            .rows
            .iter()
            .enumerate()
            .map(|(k, row)| RowDoc {
                k,
                s: row.s,
                t: row.t,
                tau: row.tau,
                pi: row.pi,
                lambda: row.lambda.to_string(),
                l: row.l.to_logs().into_iter().map(|e| e.map(i64::from)).collect(),
            })
            .collect();
        InputDoc { field: Some(FieldDef::of(ctx)), r: input.r, d: input.d, rows }
    }

    /// Rows are placed by their `k`; each `k < d` must appear once.
    pub fn to_input(&self, ctx: &FieldCtx) -> Result<AlgoInput> {
        let d = self.d as usize;
        let mut rows: Vec<Option<InputRow>> = vec![None; d];
        for row in &self.rows {
            if row.k >= d || rows[row.k].is_some() {
                return Err(Error::Parse(format!("row index k = {} is out of range or repeated", row.k)));
            }
            rows[row.k] = Some(InputRow {
                s: row.s,
                t: row.t,
                tau: row.tau,
                pi: row.pi,
                lambda: ctx.parse_elem(&row.lambda)?,
                l: Poly::from_logs(ctx, &row.l),
            });
        }
        let rows = rows
            .into_iter()
            .enumerate()
            .map(|(k, r)| r.ok_or_else(|| Error::Parse(format!("missing row k = {k}"))))
            .collect::<Result<_>>()?;
        Ok(AlgoInput { r: self.r, d: self.d, rows })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileDoc {
    pub k: usize,
    pub s: usize,
    pub t: usize,
    pub tau: usize,
    pub pi: u64,
    pub lambda: String,
    pub e: i64,
}

impl From<&ProfileEntry> for ProfileDoc {
    fn from(p: &ProfileEntry) -> Self {
        ProfileDoc { k: p.k, s: p.s, t: p.t, tau: p.tau, pi: p.pi, lambda: p.lambda.to_string(), e: p.e }
    }
}

/// `{field, r, d, h, f, profile, matrix}`; `matrix` holds `[a_ij]` in basis
/// form, row `i` by column `j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateDoc {
    pub field: FieldDef,
    pub r: u64,
    pub d: u64,
    pub h: Vec<Option<u32>>,
    pub f: Vec<Option<u32>>,
    pub profile: Vec<ProfileDoc>,
    pub matrix: Vec<Vec<String>>,
}

impl CertificateDoc {
    pub fn of(ctx: &FieldCtx, cert: &PPCertificate) -> Self {
        let a = &cert.a;
        let matrix = (0..a.rows).map(|i| (0..a.cols).map(|j| ctx.format_basis(a.get(i, j))).collect()).collect();
        CertificateDoc {
            field: FieldDef::of(ctx),
            r: cert.r,
            d: cert.d,
            h: cert.h.to_logs(),
            f: cert.f.to_logs(),
            profile: cert.profile.iter().map(ProfileDoc::from).collect(),
            matrix,
        }
    }

    pub fn h_poly(&self, ctx: &FieldCtx) -> Poly {
        Poly::from_logs(ctx, &self.h.iter().map(|e| e.map(i64::from)).collect::<Vec<_>>())
    }

    pub fn f_poly(&self, ctx: &FieldCtx) -> Poly {
        Poly::from_logs(ctx, &self.f.iter().map(|e| e.map(i64::from)).collect::<Vec<_>>())
    }
}

/// `{field?, shape, r, d, i1, j1, i2, j2, a, b}` or `{field?, shape:
/// "binomial", r, d, u, v, a}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub field: Option<FieldDef>,
    pub shape: String,
    pub r: u64,
    pub d: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub i1: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j1: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub i2: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j2: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v: Option<usize>,
    pub a: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<String>,
}

impl SpecDoc {
    pub fn of(spec: &SparseSpec) -> Self {
        let mut doc = SpecDoc {
            field: None,
            shape: String::new(),
            r: spec.r,
            d: spec.d,
            i1: None,
            j1: None,
            i2: None,
            j2: None,
            u: None,
            v: None,
            a: String::new(),
            b: None,
        };
        match spec.shape {
            Shape::Binomial { u, v, a } => {
                doc.shape = "binomial".into();
                (doc.u, doc.v, doc.a) = (Some(u), Some(v), a.to_string());
            }
            Shape::Trinomial { i1, j1, i2, j2, a, b } => {
                doc.shape = "trinomial".into();
                (doc.i1, doc.j1, doc.i2, doc.j2) = (Some(i1), Some(j1), Some(i2), Some(j2));
                (doc.a, doc.b) = (a.to_string(), Some(b.to_string()));
            }
        }
        doc
    }

    pub fn to_spec(&self, ctx: &FieldCtx) -> Result<SparseSpec> {
        let need = |x: Option<usize>, name: &str| {
            x.ok_or_else(|| Error::ShapeMismatch(format!("{} spec is missing {name}", self.shape)))
        };
        let a = ctx.parse_elem(&self.a)?;
        let shape = match self.shape.as_str() {
            "binomial" => Shape::Binomial { u: need(self.u, "u")?, v: need(self.v, "v")?, a },
            "trinomial" => {
                let b = self.b.as_deref().ok_or_else(|| Error::ShapeMismatch("trinomial spec is missing b".into()))?;
                Shape::Trinomial {
                    i1: need(self.i1, "i1")?,
                    j1: need(self.j1, "j1")?,
                    i2: need(self.i2, "i2")?,
                    j2: need(self.j2, "j2")?,
                    a,
                    b: ctx.parse_elem(b)?,
                }
            }
            other => return Err(Error::ShapeMismatch(format!("unknown shape {other:?}"))),
        };
        Ok(SparseSpec { r: self.r, d: self.d, shape })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtractedDoc {
    pub k: usize,
    pub lambda: String,
    pub pi: u64,
    /// Residue mod `(q+1)/d`.
    pub e: u64,
}

/// The oracle's report, plus the per-coset data when `h` and `r` are known.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyDoc {
    #[serde(flatten)]
    pub report: VerifyReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coset_profile: Option<Vec<ExtractedDoc>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub criterion: Option<CriterionReport>,
}

impl VerifyDoc {
    pub fn plain(report: VerifyReport) -> Self {
        VerifyDoc { report, coset_profile: None, criterion: None }
    }

    /// Adds the coset data of `h` for the given cosets, if `h` is monomial
    /// on each of them.
    pub fn with_cosets(mut self, ctx: &FieldCtx, sys: &CosetSystem, h: &Poly, r: u64) -> Self {
        if let Some(ext) = extract_coset_monomial(ctx, sys, h, r) {
            self.criterion = Some(crate::oracle::criterion_for_extracted(sys, &ext));
            self.coset_profile = Some(
                ext.iter()
                    .enumerate()
                    .map(|(k, &(lam, e))| ExtractedDoc {
                        k,
                        lambda: lam.to_string(),
                        pi: sys.index_of(lam).map(|i| i as u64).unwrap_or(u64::MAX),
                        e,
                    })
                    .collect(),
            );
        }
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::assemble;
    use crate::coset::coset_system;
    use crate::field::Gf;

    #[test]
    fn field_def_round_trip() {
        let f = FieldCtx::new(5, 1).unwrap();
        let def = FieldDef::of(&f);
        let g = def.build().unwrap();
        assert_eq!(g.modulus2(), f.modulus2());
        assert_eq!(g.gamma_basis(), f.gamma_basis());
        let json = serde_json::to_string(&def).unwrap();
        assert_eq!(serde_json::from_str::<FieldDef>(&json).unwrap(), def);
        let ex: FieldDef = serde_json::from_str(r#"{"p": 47, "modulus2": [13, 1, 1], "gamma": "x"}"#).unwrap();
        assert_eq!(ex.build().unwrap().q(), 47);
        assert_eq!(parse_basis_pair("11+37x").unwrap(), [11, 37]);
        assert_eq!(parse_basis_pair("3").unwrap(), [3, 0]);
        assert!(serde_json::from_str::<FieldDef>(r#"{"p": 5, "modulus2": [1, 1]}"#).unwrap().build().is_err());
    }

    #[test]
    fn poly_docs() {
        let f = FieldCtx::new(3, 1).unwrap();
        let doc = read_poly_doc("[null, 0]").unwrap();
        assert_eq!(doc.f.to_poly(&f).unwrap(), Poly::monomial(Gf::ONE, 1));
        let doc = read_poly_doc("g^0*X^2").unwrap();
        assert_eq!(doc.f.to_poly(&f).unwrap(), Poly::monomial(Gf::ONE, 2));
        let doc = read_poly_doc(r#"{"field": {"p": 3}, "f": [null, 0]}"#).unwrap();
        assert_eq!(doc.field.unwrap().p, 3);
    }

    #[test]
    fn input_and_certificate_round_trip() {
        let f = FieldCtx::new(5, 1).unwrap();
        let sys = coset_system(&f, 2).unwrap();
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let input = crate::construction::sample_input(&f, &sys, 3, &mut rng).unwrap();
        let doc = InputDoc::of(&f, &input);
        let back: InputDoc = serde_json::from_str(&serde_json::to_string(&doc).unwrap()).unwrap();
        assert_eq!(back.to_input(&f).unwrap(), input);
        let cert = assemble(&f, &sys, &input).unwrap();
        let cd = CertificateDoc::of(&f, &cert);
        assert_eq!(cd.h_poly(&f), cert.h);
        assert_eq!(cd.f_poly(&f), cert.f);
        assert_eq!(cd.matrix.len(), 3);
        let mut dup = doc.clone();
        dup.rows[1].k = 0;
        assert!(matches!(dup.to_input(&f), Err(Error::Parse(_))));
    }

    #[test]
    fn spec_docs() {
        let f = FieldCtx::new(5, 1).unwrap();
        let json = r#"{"shape": "trinomial", "r": 3, "d": 2, "i1": 0, "j1": 1, "i2": 2, "j2": 0, "a": "g^12", "b": "g^3"}"#;
        let doc: SpecDoc = serde_json::from_str(json).unwrap();
        let spec = doc.to_spec(&f).unwrap();
        assert_eq!(spec.shape, Shape::Trinomial { i1: 0, j1: 1, i2: 2, j2: 0, a: f.elem(12), b: f.elem(3) });
        assert_eq!(SpecDoc::of(&spec).to_spec(&f).unwrap(), spec);
        let mut bad = doc.clone();
        bad.b = None;
        assert!(matches!(bad.to_spec(&f), Err(Error::ShapeMismatch(_))));
    }
}
