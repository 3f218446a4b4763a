//! Exhaustive checks: permutation of F_{q^2}, permutation of mu_n, and the
//! per-coset monomial behaviour with the criterion it implies.

use serde::Serialize;

use crate::arith::{gcd, is_permutation_of_residues, modulo};
use crate::coset::CosetSystem;
use crate::error::{Error, Result};
use crate::field::{FieldCtx, Gf};
use crate::poly::Poly;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Collision {
    pub x: String,
    pub y: String,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub is_permutation: bool,
    /// Present exactly when `is_permutation` is false.
    pub first_collision: Option<Collision>,
    pub evaluations: u64,
}

// term-wise in log form: cost is the number of nonzero terms, not the degree
fn sparse_eval(ctx: &FieldCtx, terms: &[(i64, Gf)], x: Gf) -> Gf {
    terms.iter().fold(Gf::ZERO, |acc, &(i, c)| ctx.add(acc, ctx.mul(c, ctx.pow(x, i))))
}

fn values_of(ctx: &FieldCtx, f: &Poly) -> Vec<Gf> {
    let points: Vec<Gf> = ctx.elements().collect();
    let terms: Vec<(i64, Gf)> = f.support().into_iter().map(|i| (i as i64, f.coeff(i))).collect();
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        if points.len() >= 4096 {
            return points.par_iter().map(|&x| sparse_eval(ctx, &terms, x)).collect();
        }
    }
    points.iter().map(|&x| sparse_eval(ctx, &terms, x)).collect()
}

fn slot(x: Gf) -> usize {
    x.log().map_or(0, |e| e as usize + 1)
}

/// Evaluates `f` on every element and looks for a repeated value.
pub fn is_permutation(ctx: &FieldCtx, f: &Poly) -> VerifyReport {
    let values = values_of(ctx, f);
    let mut seen: Vec<Option<Gf>> = vec![None; values.len()];
    for (x, &v) in ctx.elements().zip(&values) {
        if let Some(y) = seen[slot(v)] {
            return VerifyReport {
                is_permutation: false,
                first_collision: Some(Collision { x: y.to_string(), y: x.to_string(), value: v.to_string() }),
                evaluations: values.len() as u64,
            };
        }
        seen[slot(v)] = Some(x);
    }
    VerifyReport { is_permutation: true, first_collision: None, evaluations: values.len() as u64 }
}

/// `x -> x^r h(x)^{q-1}`, failing where `h` vanishes.
pub fn coset_map_value(ctx: &FieldCtx, h: &Poly, r: u64, x: Gf) -> Result<Gf> {
    let hx = h.eval(ctx, x);
    if hx.is_zero() {
        return Err(Error::UndefinedValue(x.to_string()));
    }
    Ok(ctx.mul(ctx.pow(x, r as i64), ctx.pow(hx, ctx.q() as i64 - 1)))
}

/// Whether `map` sends `mu_n` bijectively onto itself.
pub fn permutes_mu<F>(ctx: &FieldCtx, map: F, n: u64) -> Result<bool>
where
    F: Fn(Gf) -> Result<Gf>,
{
    let mu = ctx.mu_subgroup(n)?;
    let step = ctx.order() / n;
    let mut seen = vec![false; n as usize];
    let mut ok = true;
    for x in mu {
        let y = map(x)?;
        match y.log() {
            Some(e) if (e as u64).is_multiple_of(step) => {
                let i = (e as u64 / step) as usize;
                ok &= !seen[i];
                seen[i] = true;
            }
            _ => ok = false,
        }
    }
    Ok(ok)
}

/// `(lambda_k, e_k)` per coset with `e_k in [0, B)`, or `None` when `h`
/// vanishes on `mu_{q+1}` or is not monomial on some coset.
///
/// Only `e_k mod B` is observable, since `lambda x^{e+B} = (lambda eps^k) x^e`
/// on `A_k`.
pub fn extract_coset_monomial(ctx: &FieldCtx, sys: &CosetSystem, h: &Poly, r: u64) -> Option<Vec<(Gf, u64)>> {
    let q = ctx.q();
    let block = sys.block;
    // generator of mu_B
    let zeta = ctx.elem(((q - 1) * sys.d) as i64);
    let mut out = Vec::with_capacity(sys.d as usize);
    for k in 0..sys.d as usize {
        let x0 = sys.base_point(ctx, k);
        let y0 = coset_map_value(ctx, h, r, x0).ok()?;
        let e = if block == 1 {
            0
        } else {
            let y1 = coset_map_value(ctx, h, r, ctx.mul(x0, zeta)).ok()?;
            let ratio = ctx.div(y1, y0);
            (0..block).find(|&e| ctx.pow(zeta, e as i64) == ratio)?
        };
        let lambda = ctx.div(y0, ctx.pow(x0, e as i64));
        for &x in &sys.cosets[k] {
            let y = coset_map_value(ctx, h, r, x).ok()?;
            if y != ctx.mul(lambda, ctx.pow(x, e as i64)) {
                return None;
            }
        }
        out.push((lambda, e));
    }
    Some(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CriterionReport {
    /// `gcd(e_k, B) = 1`, per `k`.
    pub exponent_coprime: Vec<bool>,
    /// `pi(k) + e_k k mod d`, per `k`.
    pub map_values: Vec<u64>,
    pub map_is_permutation: bool,
    pub holds: bool,
}

/// The coset criterion: `x^r h(x)^{q-1}` permutes `mu_{q+1}` iff every
/// `gcd(e_k, B) = 1` and `k -> pi(k) + e_k k` permutes `Z/d`.
pub fn theorem_1_1_check(sys: &CosetSystem, profile: &[(u64, i64)]) -> CriterionReport {
    let exponent_coprime: Vec<bool> = profile.iter().map(|&(_, e)| gcd(e, sys.block as i64) == 1).collect();
    let map_values: Vec<u64> = profile
        .iter()
        .enumerate()
        .map(|(k, &(pi, e))| modulo(pi as i64 + e * k as i64, sys.d))
        .collect();
    let map_is_permutation = is_permutation_of_residues(&map_values, sys.d);
    let holds = map_is_permutation && exponent_coprime.iter().all(|&b| b);
    CriterionReport { exponent_coprime, map_values, map_is_permutation, holds }
}

/// Criterion applied to an extracted profile, `pi(k)` read off from `lambda_k`.
pub fn criterion_for_extracted(sys: &CosetSystem, extracted: &[(Gf, u64)]) -> CriterionReport {
    let prof: Vec<(u64, i64)> = extracted
        .iter()
        .map(|&(lam, e)| (sys.index_of(lam).expect("lambda lies in mu_{q+1}") as u64, e as i64))
        .collect();
    theorem_1_1_check(sys, &prof)
}
