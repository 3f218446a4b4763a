//! Browser bindings for the demo page. Each export takes plain numbers or
//! strings and returns a JSON string; the same functions are called natively
//! in the tests.

use cosetperm::census::census_rows;
use cosetperm::construction::{assemble, sample_input};
use cosetperm::format::{read_poly_doc, ProfileDoc};
use cosetperm::oracle::{coset_map_value, extract_coset_monomial, criterion_for_extracted, is_permutation};
use cosetperm::{coset_system, FieldCtx, Gf};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Keeps every request fast enough for a page.
const MAX_Q: u64 = 256;

fn field(p: u32, m: u32) -> Result<FieldCtx, String> {
    let ctx = FieldCtx::new(p as u64, m).map_err(|e| e.to_string())?;
    if ctx.q() > MAX_Q {
        return Err(format!("q = {} is above the demo limit {MAX_Q}", ctx.q()));
    }
    Ok(ctx)
}

fn to_json<T: Serialize>(v: &T) -> Result<String, String> {
    serde_json::to_string(v).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct CirclePoint {
    /// `x = g^{(q-1) j}`; the page places it at angle `2 pi j / (q+1)`.
    j: u64,
    coset: u64,
    /// `j` of `x^r h(x)^{q-1}`.
    image: u64,
}

#[derive(Serialize)]
struct CircleDoc {
    q: u64,
    r: u64,
    d: u64,
    h: String,
    f: String,
    is_permutation: bool,
    coset_map: Vec<u64>,
    profile: Vec<ProfileDoc>,
    points: Vec<CirclePoint>,
}

fn index_on_circle(ctx: &FieldCtx, x: Gf) -> u64 {
    x.log().expect("points of mu_(q+1) are nonzero") as u64 / (ctx.q() - 1)
}

/// A random construction for `(q, r, d)` and the induced map on `mu_{q+1}`.
pub fn circle_map_json(p: u32, m: u32, d: u32, r: u32, seed: u32) -> Result<String, String> {
    let ctx = field(p, m)?;
    let sys = coset_system(&ctx, d as u64).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed as u64);
    let input = sample_input(&ctx, &sys, r as u64, &mut rng).map_err(|e| e.to_string())?;
    let cert = assemble(&ctx, &sys, &input).map_err(|e| e.to_string())?;
    let q = ctx.q();
    let mut points = Vec::with_capacity(q as usize + 1);
    for j in 0..=q {
        let x = ctx.elem(((q - 1) * j) as i64);
        let y = coset_map_value(&ctx, &cert.h, cert.r, x).map_err(|e| e.to_string())?;
        points.push(CirclePoint { j, coset: j % sys.d, image: index_on_circle(&ctx, y) });
    }
    let profile = cert.profile.iter().map(ProfileDoc::from).collect();
    to_json(&CircleDoc {
        q,
        r: cert.r,
        d: cert.d,
        h: cert.h.to_text(),
        f: cert.f.to_text(),
        is_permutation: is_permutation(&ctx, &cert.f).is_permutation,
        coset_map: input.coset_map(),
        profile,
        points,
    })
}

#[derive(Serialize)]
struct VerifyOut {
    #[serde(flatten)]
    report: cosetperm::VerifyReport,
    /// Criterion on the cosets for `d`, when `f = X^r h(X^{q-1})` is given as `h`.
    criterion: Option<cosetperm::oracle::CriterionReport>,
}

/// Checks `f` given as text (`c0 + c1*X^1 + ...`) or as a JSON log array.
/// With `r > 0` the input is read as `h` and `f = X^r h(X^{q-1})` is tested.
pub fn verify_json(p: u32, m: u32, poly: &str, r: u32, d: u32) -> Result<String, String> {
    let ctx = field(p, m)?;
    let doc = read_poly_doc(poly).map_err(|e| e.to_string())?;
    let g = doc.f.to_poly(&ctx).map_err(|e| e.to_string())?;
    if r == 0 {
        return to_json(&VerifyOut { report: is_permutation(&ctx, &g), criterion: None });
    }
    let f = cosetperm::construction::pp_from_h(&ctx, &g, r as u64);
    let sys = coset_system(&ctx, d.max(1) as u64).map_err(|e| e.to_string())?;
    let criterion = extract_coset_monomial(&ctx, &sys, &g, r as u64).map(|e| criterion_for_extracted(&sys, &e));
    to_json(&VerifyOut { report: is_permutation(&ctx, &f), criterion })
}

/// Closed-form counts next to enumeration for `(q, d, r)`.
pub fn counts_json(p: u32, m: u32, d: u32, r: u32) -> Result<String, String> {
    let ctx = field(p, m)?;
    if ctx.q() > 16 {
        return Err("counts enumerate families; keep q <= 16 here".into());
    }
    let sys = coset_system(&ctx, d as u64).map_err(|e| e.to_string())?;
    to_json(&census_rows(&ctx, &sys, r as u64).map_err(|e| e.to_string())?)
}

#[wasm_bindgen]
pub fn circle_map(p: u32, m: u32, d: u32, r: u32, seed: u32) -> Result<String, JsValue> {
    circle_map_json(p, m, d, r, seed).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn verify(p: u32, m: u32, poly: &str, r: u32, d: u32) -> Result<String, JsValue> {
    verify_json(p, m, poly, r, d).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn counts(p: u32, m: u32, d: u32, r: u32) -> Result<String, JsValue> {
    counts_json(p, m, d, r).map_err(|e| JsValue::from_str(&e))
}
