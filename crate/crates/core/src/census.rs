//! How many outputs the forward construction has, in closed form where one
//! is known and by enumeration everywhere.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::{BigInt, BigUint};
use serde::{Serialize, Serializer};

use crate::arith::gcd;
use crate::construction::{
    assemble, m_count, membership, omega_set, tau_admissible, taus_for, AlgoInput, InputRow, LFamily,
};
use crate::coset::CosetSystem;
use crate::error::{Error, Result};
use crate::field::{FieldCtx, Gf};
use crate::poly::Poly;

/// One counted quantity, with the closed form when there is one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountReport {
    pub quantity: String,
    #[serde(flatten)]
    pub params: BTreeMap<String, u64>,
    #[serde(serialize_with = "opt_big")]
    pub closed: Option<BigInt>,
    #[serde(serialize_with = "opt_big")]
    pub brute: Option<BigInt>,
    /// `closed == brute` when both exist, true otherwise.
    pub agree: bool,
}

impl CountReport {
    pub fn new(quantity: &str, params: &[(&str, u64)], closed: Option<BigInt>, brute: Option<BigInt>) -> Self {
        let agree = match (&closed, &brute) {
            (Some(c), Some(b)) => c == b,
            _ => true,
        };
        CountReport {
            quantity: quantity.to_string(),
            params: params.iter().map(|&(k, v)| (k.to_string(), v)).collect(),
            closed,
            brute,
            agree,
        }
    }
}

// JSON numbers while they fit in 64 bits, decimal strings beyond
fn opt_big<S: Serializer>(v: &Option<BigInt>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        None => s.serialize_none(),
        Some(x) => match i64::try_from(x) {
            Ok(small) => s.serialize_i64(small),
            Err(_) => s.collect_str(x),
        },
    }
}

/// Monic self-dual polynomials of degree `t`: 1 if `t = 0`, else `(q+1) q^{t-1}`.
pub fn lambda_count(q: u64, t: u32) -> BigUint {
    if t == 0 {
        BigUint::from(1u32)
    } else {
        BigUint::from(q + 1) * BigUint::from(q).pow(t - 1)
    }
}

/// Monic self-dual polynomials of degree `t`, by scanning all `q^{2t}`
/// monic candidates.
pub fn lambda_brute(ctx: &FieldCtx, t: usize) -> u64 {
    let n = ctx.order() as usize + 1;
    let mut coeffs = vec![Gf::ZERO; t + 1];
    coeffs[t] = Gf::ONE;
    let mut digits = vec![0usize; t];
    let mut count = 0;
    loop {
        for (i, &dg) in digits.iter().enumerate() {
            coeffs[i] = if dg == 0 { Gf::ZERO } else { Gf::from_log(dg as u32 - 1) };
        }
        let f = Poly::new(coeffs.clone());
        if matches!(f.self_dual_factor(ctx), Ok(Some(_))) {
            count += 1;
        }
        if !odometer(&mut digits, n) {
            return count;
        }
    }
}

// base-n increment; false once it wraps to all zeros
fn odometer(digits: &mut [usize], n: usize) -> bool {
    for dg in digits.iter_mut() {
        *dg += 1;
        if *dg < n {
            return true;
        }
        *dg = 0;
    }
    false
}

fn binom(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    let mut acc = BigInt::from(1);
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// `l(t, 0) = (q^2-1) sum_{i<t} (-1)^i C(B,i) q^{t-i-1} + (-1)^t (q-1) C(B,t)`.
pub fn l_closed(q: u64, d: u64, t: u64) -> Result<BigInt> {
    if d == 0 || !(q + 1).is_multiple_of(d) {
        return Err(Error::NotDivisor { n: d, of: q + 1 });
    }
    let block = (q + 1) / d;
    if t >= block {
        return Err(Error::RangeError(format!("t = {t} needs t < (q+1)/d = {block}")));
    }
    let sign = |i: u64| if i.is_multiple_of(2) { BigInt::from(1) } else { BigInt::from(-1) };
    let qq = BigInt::from(q);
    let mut sum = BigInt::from(0);
    for i in 0..t {
        sum += sign(i) * binom(block, i) * qq.pow((t - i - 1) as u32);
    }
    Ok(BigInt::from(q * q - 1) * sum + sign(t) * BigInt::from(q - 1) * binom(block, t))
}

/// `|L_0(t, tau; 1)|` by enumeration.
pub fn l_brute(ctx: &FieldCtx, sys: &CosetSystem, t: usize, tau: usize) -> Result<u64> {
    l_brute_at(ctx, sys, 0, t, tau, Gf::ONE)
}

/// `|L_k(t, tau; lambda)|` by enumeration.
pub fn l_brute_at(ctx: &FieldCtx, sys: &CosetSystem, k: usize, t: usize, tau: usize, lambda: Gf) -> Result<u64> {
    let block = sys.block as usize;
    if t >= block || !tau_admissible(block, t, tau) {
        return Err(Error::RangeError(format!("(t, tau) = ({t}, {tau}) is not admissible for block {block}")));
    }
    Ok(LFamily::new(ctx, sys, k, t, tau, lambda)?.iter(ctx).count() as u64)
}

/// `sum over (t, tau) of m(t, tau) l(t, tau)`, the number of admissible rows
/// for one coset once `lambda` is fixed.
pub fn row_sum(ctx: &FieldCtx, sys: &CosetSystem, r: u64) -> Result<BigInt> {
    let (q, d) = (ctx.q(), sys.d);
    let mut sum = BigInt::from(0);
    for t in 0..sys.block as usize {
        for tau in taus_for(sys.block as usize, t) {
            let m = m_count(q, d, r, t, tau);
            if m == 0 {
                continue;
            }
            let l = if tau == 0 {
                l_closed(q, d, t as u64)?
            } else {
                BigInt::from(l_brute(ctx, sys, t, tau)?)
            };
            sum += BigInt::from(m) * l;
        }
    }
    Ok(sum)
}

/// `d! B^d (sum m(t,tau) l(t,tau))^d`, the number of valid input tuples.
pub fn total_count(ctx: &FieldCtx, sys: &CosetSystem, r: u64) -> Result<BigUint> {
    let q = ctx.q();
    if gcd(r as i64, q as i64 - 1) != 1 {
        return Err(Error::BadR { r, q });
    }
    let d = sys.d as u32;
    let fact: BigUint = (1..=sys.d).map(BigUint::from).product();
    let inner = row_sum(ctx, sys, r)?.to_biguint().expect("counts are nonnegative");
    Ok(fact * BigUint::from(sys.block).pow(d) * inner.pow(d))
}

/// Outcome of enumerating every valid input tuple.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExhaustiveCount {
    pub tuples: u64,
    /// Distinct `h` among the assembled outputs.
    pub distinct_h: u64,
}

/// All valid inputs for `(r, d)`, with every `L` found by scanning all
/// polynomials of its degree against the membership test. Small `q` only.
pub fn exhaustive_inputs(ctx: &FieldCtx, sys: &CosetSystem, r: u64) -> Result<ExhaustiveCount> {
    let q = ctx.q();
    if gcd(r as i64, q as i64 - 1) != 1 {
        return Err(Error::BadR { r, q });
    }
    let d = sys.d as usize;
    let omega = omega_set(q, sys.d, r);
    let mu: Vec<Gf> = ctx.mu_subgroup(q + 1)?;
    let mut per_k: Vec<Vec<InputRow>> = vec![Vec::new(); d];
    for (k, rows) in per_k.iter_mut().enumerate() {
        for &(s, t, tau) in &omega {
            let candidates = all_polys_of_degree(ctx, t);
            for &lambda in &mu {
                let pi = sys.index_of(lambda)? as u64;
                for l in &candidates {
                    if membership(ctx, sys, k, t, tau, lambda, l)? {
                        rows.push(InputRow { s, t, tau, pi, lambda, l: l.clone() });
                    }
                }
            }
        }
    }
    let mut tuples = 0u64;
    let mut hs = BTreeSet::new();
    let mut pick = vec![0usize; d];
    loop {
        let rows: Vec<InputRow> = pick.iter().enumerate().map(|(k, &i)| per_k[k][i].clone()).collect();
        let input = AlgoInput { r, d: sys.d, rows };
        let map = input.coset_map();
        let mut seen = vec![false; d];
        if map.iter().all(|&v| !std::mem::replace(&mut seen[v as usize], true)) {
            tuples += 1;
            let cert = assemble(ctx, sys, &input)?;
            hs.insert(cert.h.to_logs());
        }
        // mixed-radix step over the per-coset row lists
        let mut k = 0;
        while k < d {
            pick[k] += 1;
            if pick[k] < per_k[k].len() {
                break;
            }
            pick[k] = 0;
            k += 1;
        }
        if k == d || per_k.iter().any(|v| v.is_empty()) {
            break;
        }
    }
    Ok(ExhaustiveCount { tuples, distinct_h: hs.len() as u64 })
}

fn all_polys_of_degree(ctx: &FieldCtx, t: usize) -> Vec<Poly> {
    let n = ctx.order() as usize + 1;
    let mut out = Vec::new();
    let mut digits = vec![0usize; t + 1];
    loop {
        if digits[0] != 0 && digits[t] != 0 {
            out.push(Poly::new(
                digits.iter().map(|&dg| if dg == 0 { Gf::ZERO } else { Gf::from_log(dg as u32 - 1) }).collect(),
            ));
        }
        if !odometer(&mut digits, n) {
            return out;
        }
    }
}

/// The `a != 0` with `(1+a)^{(q^2-1)/2} = (1-a)^{(q^2-1)/2} = (-1)^{(q-1)/2}`,
/// in increasing log order.
pub fn set_a(ctx: &FieldCtx) -> Result<Vec<Gf>> {
    let q = ctx.q();
    if q.is_multiple_of(2) {
        return Err(Error::EvenQ(q));
    }
    let half = (ctx.order() / 2) as i64;
    let target = ctx.pow(ctx.neg(Gf::ONE), ((q - 1) / 2) as i64);
    Ok((0..ctx.order() as i64)
        .map(|e| ctx.elem(e))
        .filter(|&a| {
            ctx.pow(ctx.add(Gf::ONE, a), half) == target && ctx.pow(ctx.sub(Gf::ONE, a), half) == target
        })
        .collect())
}

/// Brute size of [`set_a`] against `(q^2-1)/4`.
pub fn set_a_count(ctx: &FieldCtx) -> Result<CountReport> {
    let q = ctx.q();
    let brute = set_a(ctx)?.len() as u64;
    Ok(CountReport::new("set-a", &[("q", q)], Some(BigInt::from((q * q - 1) / 4)), Some(BigInt::from(brute))))
}

/// Every count the census command prints for one `(q, d, r)`.
pub fn census_rows(ctx: &FieldCtx, sys: &CosetSystem, r: u64) -> Result<Vec<CountReport>> {
    let (q, d) = (ctx.q(), sys.d);
    let block = sys.block as usize;
    let mut out = Vec::new();
    for t in 0..block {
        for tau in taus_for(block, t) {
            let brute = BigInt::from(l_brute(ctx, sys, t, tau)?);
            let closed = (tau == 0).then(|| l_closed(q, d, t as u64)).transpose()?;
            let params = [("q", q), ("d", d), ("t", t as u64), ("tau", tau as u64), ("m", m_count(q, d, r, t, tau) as u64)];
            out.push(CountReport::new("l", &params, closed, Some(brute)));
        }
    }
    for t in 0..=3usize {
        let brute = (ctx.order() <= 1024).then(|| BigInt::from(lambda_brute(ctx, t)));
        out.push(CountReport::new("lambda", &[("q", q), ("t", t as u64)], Some(lambda_count(q, t as u32).into()), brute));
    }
    let total = total_count(ctx, sys, r)?;
    out.push(CountReport::new("total", &[("q", q), ("d", d), ("r", r)], Some(total.into()), None));
    if q % 2 == 1 {
        out.push(set_a_count(ctx)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coset::coset_system;

    #[test]
    fn closed_form_values() {
        assert_eq!(l_closed(3, 2, 0).unwrap(), BigInt::from(2));
        assert_eq!(l_closed(3, 2, 1).unwrap(), BigInt::from(4));
        assert_eq!(l_closed(5, 3, 1).unwrap(), BigInt::from(16));
        assert!(matches!(l_closed(5, 3, 2), Err(Error::RangeError(_))));
    }

    #[test]
    fn lambda_values() {
        assert_eq!(lambda_count(3, 0), BigUint::from(1u32));
        assert_eq!(lambda_count(3, 2), BigUint::from(12u32));
        let f = FieldCtx::new(3, 1).unwrap();
        assert_eq!(lambda_brute(&f, 2), 12);
    }

    #[test]
    fn brute_matches_closed_small() {
        let f = FieldCtx::new(3, 1).unwrap();
        let sys = coset_system(&f, 2).unwrap();
        assert_eq!(l_brute(&f, &sys, 1, 0).unwrap(), 4);
        assert!(matches!(l_brute(&f, &sys, 1, 3), Err(Error::RangeError(_))));
        let f5 = FieldCtx::new(5, 1).unwrap();
        let s1 = coset_system(&f5, 1).unwrap();
        assert!(l_brute(&f5, &s1, 3, 3).unwrap() > 0);
    }

    #[test]
    fn total_count_specializations() {
        let f = FieldCtx::new(3, 1).unwrap();
        let full = coset_system(&f, 4).unwrap();
        // B = 1: (q+1)! (q-1)^{q+1}
        assert_eq!(total_count(&f, &full, 1).unwrap(), BigUint::from(24u32 * 16));
        let sys = coset_system(&f, 2).unwrap();
        assert_eq!(total_count(&f, &sys, 2).unwrap_err(), Error::BadR { r: 2, q: 3 });
    }

    #[test]
    fn set_a_small() {
        let f = FieldCtx::new(5, 1).unwrap();
        let rep = set_a_count(&f).unwrap();
        // (q^2-1)/4 = 6, but a = +-1 never qualify: the set has (q^2-9)/4
        // elements when q = 1 mod 4
        assert_eq!(rep.brute, Some(BigInt::from(4)));
        assert!(!rep.agree);
        let f7 = FieldCtx::new(7, 1).unwrap();
        assert!(set_a_count(&f7).unwrap().agree);
        let f4 = FieldCtx::new(2, 2).unwrap();
        assert_eq!(set_a_count(&f4).unwrap_err(), Error::EvenQ(4));
    }

    #[test]
    fn report_json_shape() {
        let rep = CountReport::new("l", &[("q", 3), ("t", 1)], Some(BigInt::from(4)), Some(BigInt::from(4)));
        let v = serde_json::to_value(&rep).unwrap();
        assert_eq!(v["q"], 3);
        assert_eq!(v["closed"], 4);
        assert_eq!(v["agree"], true);
        let big = CountReport::new("total", &[], Some(BigInt::from(u64::MAX) * 4), None);
        assert!(serde_json::to_value(&big).unwrap()["closed"].is_string());
    }
}
