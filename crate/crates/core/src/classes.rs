//! Sparse `h`: binomials `1 + a X^{u + vB}` and trinomials
//! `1 + a X^{i1 + j1 B} + b X^{i2 + j2 B}`, with `B = (q+1)/d`.
//!
//! Every verdict routes through the column structure of `[a_ij]`: on the
//! coset `A_k` the trinomial restricts to `1 + a eps^{j1 k} X^{i1} + b eps^{j2 k}
//! X^{i2}`, and which twist (if any) makes that column self-dual decides the
//! family. Where a family is recognized the verdict carries the exact
//! permutation conditions for it; otherwise `pp` is `None`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::arith::{gcd, is_permutation_of_residues, modulo};
use crate::construction::{monomial_profile, pp_from_h, split, taus_for};
use crate::coset::CosetSystem;
use crate::error::{Error, Result};
use crate::field::{FieldCtx, Gf};
use crate::oracle::theorem_1_1_check;
use crate::poly::{binomial_modulus, gcd as poly_gcd, Poly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "shape", rename_all = "lowercase")]
pub enum Shape {
    Binomial { u: usize, v: usize, a: Gf },
    Trinomial { i1: usize, j1: usize, i2: usize, j2: usize, a: Gf, b: Gf },
}

/// `X^r h(X^{q-1})` with a sparse `h` laid out over `d` columns.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SparseSpec {
    pub r: u64,
    pub d: u64,
    pub shape: Shape,
}

impl SparseSpec {
    pub fn trinomial(r: u64, d: u64, (i1, j1): (usize, usize), (i2, j2): (usize, usize), a: Gf, b: Gf) -> Self {
        SparseSpec { r, d, shape: Shape::Trinomial { i1, j1, i2, j2, a, b } }
    }

    pub fn binomial(r: u64, d: u64, u: usize, v: usize, a: Gf) -> Self {
        SparseSpec { r, d, shape: Shape::Binomial { u, v, a } }
    }

    /// Checks index ranges, nonzero coefficients and distinct positions.
    pub fn validate(&self, sys: &CosetSystem) -> Result<()> {
        let (block, d) = (sys.block as usize, sys.d as usize);
        if self.d != sys.d {
            return Err(Error::ShapeMismatch(format!("spec has d = {}, cosets have d = {}", self.d, sys.d)));
        }
        let bad = |m: &str| Err(Error::ShapeMismatch(m.to_string()));
        match self.shape {
            Shape::Binomial { u, v, a } => {
                if u >= block || v >= d {
                    return bad("binomial position out of range");
                }
                if (u, v) == (0, 0) {
                    return bad("binomial needs (u, v) != (0, 0)");
                }
                if a.is_zero() {
                    return bad("binomial coefficient is zero");
                }
            }
            Shape::Trinomial { i1, j1, i2, j2, a, b } => {
                if i1 > i2 || i2 >= block || j1 >= d || j2 >= d {
                    return bad("trinomial positions need i1 <= i2 < (q+1)/d and j < d");
                }
                if (i1, j1) == (0, 0) || (i2, j2) == (0, 0) || (i1, j1) == (i2, j2) {
                    return bad("trinomial positions must be distinct and differ from (0, 0)");
                }
                if a.is_zero() || b.is_zero() {
                    return bad("trinomial coefficient is zero");
                }
            }
        }
        Ok(())
    }

    pub fn h(&self, ctx: &FieldCtx) -> Poly {
        let block = ((ctx.q() + 1) / self.d) as usize;
        match self.shape {
            Shape::Binomial { u, v, a } => Poly::from_terms(ctx, &[(0, Gf::ONE), (u + v * block, a)]),
            Shape::Trinomial { i1, j1, i2, j2, a, b } => {
                Poly::from_terms(ctx, &[(0, Gf::ONE), (i1 + j1 * block, a), (i2 + j2 * block, b)])
            }
        }
    }

    /// `X^r h(X^{q-1})` reduced modulo `X^{q^2-1} - 1`.
    pub fn pp(&self, ctx: &FieldCtx) -> Poly {
        pp_from_h(ctx, &self.h(ctx), self.r)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClassTag {
    BinomialCase1,
    BinomialCase2SelfDual,
    BinomialCase2Half,
    TrinomialCase1,
    #[serde(rename = "trinomial-case-2.1")]
    TrinomialCase21,
    #[serde(rename = "trinomial-case-2.2")]
    TrinomialCase22,
    TrinomialCase3,
    /// `i1 = i2 > 0`: both terms share a row of `[a_ij]`.
    SameRow,
    /// A column with twist `tau = t = B/2`; decided on `mu_{2d}`.
    Half,
    Class1,
    Class2,
    Class3,
    Class4,
    /// Columns of all three twist kinds at once.
    Case3Mixed,
    /// Equivalent to `X^{r'} h1(X^{q-1})` with a self-dual `h1`.
    PreviouslyKnown,
    NotApplicable,
}

/// How the column on one coset is self-dual in the two-shifted-rows case.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ColumnKind {
    /// `tau = 0`
    Untwisted,
    /// `tau = t`, `P = 1`
    FullTwist,
    /// `tau = t - 1`, `Q` constant
    ShortTwist,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Condition {
    pub name: String,
    pub passed: bool,
    /// Structural conditions place the spec in the class; the rest decide
    /// the permutation property inside it.
    pub structural: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassVerdict {
    pub tags: Vec<ClassTag>,
    /// `None` when no recognized family contains the spec.
    pub pp: Option<bool>,
    pub conditions: Vec<Condition>,
    pub witnesses: BTreeMap<String, i64>,
    pub partition: Option<Vec<ColumnKind>>,
}

impl ClassVerdict {
    fn new(tag: ClassTag) -> Self {
        ClassVerdict { tags: vec![tag], pp: None, conditions: Vec::new(), witnesses: BTreeMap::new(), partition: None }
    }

    fn check(&mut self, name: &str, passed: bool, structural: bool) -> bool {
        self.conditions.push(Condition { name: name.to_string(), passed, structural });
        passed
    }

    fn settle(&mut self) {
        let structural = self.conditions.iter().filter(|c| c.structural).all(|c| c.passed);
        self.pp = structural.then(|| self.conditions.iter().all(|c| c.passed));
    }

    pub fn has(&self, tag: ClassTag) -> bool {
        self.tags.contains(&tag)
    }

    fn absorb(&mut self, other: ClassVerdict) {
        for t in other.tags {
            if !self.tags.contains(&t) {
                self.tags.push(t);
            }
        }
        self.pp = other.pp;
        self.conditions = other.conditions;
        self.witnesses.extend(other.witnesses);
        if other.partition.is_some() {
            self.partition = other.partition;
        }
    }
}

/// Whether `X^r H(X^s)` permutes F_{q^2}, for `s | q^2 - 1`: `gcd(r, s) = 1`
/// and `x -> x^r H(x)^s` permutes `mu_{(q^2-1)/s}`.
pub fn power_form_pp(ctx: &FieldCtx, r: u64, s: u64, big_h: &Poly) -> bool {
    let n = ctx.order();
    if !n.is_multiple_of(s) || gcd(r as i64, s as i64) != 1 {
        return false;
    }
    let m = n / s;
    let mut seen = vec![false; m as usize];
    for i in 0..m {
        let x = ctx.elem((i * s) as i64);
        let hx = big_h.eval(ctx, x);
        let Some(e) = ctx.mul(ctx.pow(x, r as i64), ctx.pow(hx, s as i64)).log() else {
            return false;
        };
        let e = e as u64;
        if !e.is_multiple_of(s) || std::mem::replace(&mut seen[(e / s) as usize], true) {
            return false;
        }
    }
    true
}

/// The criterion for `X^r (1 + a X^{l(q-1)})` with `a in mu_{q+1}`:
/// `gcd(r, q-1) = 1`, `gcd(r - l, q+1) = 1` and `(-a)^{(q+1)/gcd(q+1, l)} != 1`.
pub fn unit_binomial_criterion(ctx: &FieldCtx, r: u64, l: u64, a: Gf) -> bool {
    let q = ctx.q() as i64;
    let expo = (q + 1) as u64 / gcd(q + 1, l as i64);
    gcd(r as i64, q - 1) == 1
        && gcd(r as i64 - l as i64, q + 1) == 1
        && ctx.pow(ctx.neg(a), expo as i64) != Gf::ONE
}

/// Whether some `X^e h mod (X^{q+1} - 1)` is, after removing its lowest
/// power, self-dual; returns the least such `e`.
pub fn self_dual_rotation(ctx: &FieldCtx, h: &Poly) -> Option<usize> {
    let n = ctx.q() as usize + 1;
    let base = h.reduce_cyclic(ctx, n);
    (0..n).find(|&e| {
        let (_, l) = base.shift(e).reduce_cyclic(ctx, n).strip_low();
        !l.is_zero() && matches!(l.self_dual_factor(ctx), Ok(Some(_)))
    })
}

/// Exact permutation verdict from the per-coset data when `h` has it: the
/// two necessary conditions first, then the coset criterion.
pub fn coset_verdict(ctx: &FieldCtx, sys: &CosetSystem, h: &Poly, r: u64) -> Option<bool> {
    let q = ctx.q();
    if gcd(r as i64, q as i64 - 1) != 1 || !coprime_to_circle(ctx, h) {
        return Some(false);
    }
    let prof = monomial_profile(ctx, sys, h, r)?;
    let pe: Vec<(u64, i64)> = prof.iter().map(|p| (p.pi, p.e)).collect();
    Some(theorem_1_1_check(sys, &pe).holds)
}

/// `gcd(h, X^{q+1} - 1) = 1`, by Euclid.
pub fn coprime_to_circle(ctx: &FieldCtx, h: &Poly) -> bool {
    let m = binomial_modulus(ctx, ctx.q() as usize + 1, Gf::ONE);
    poly_gcd(ctx, h, &m).map(|g| g == Poly::one()).unwrap_or(false)
}

/// Discrete log base `eps` of `x^B`, if `x^B` is a power of `eps`.
fn eps_log_of_block_power(ctx: &FieldCtx, sys: &CosetSystem, x: Gf) -> Option<u64> {
    if x.is_zero() {
        return None;
    }
    sys.log_eps(ctx.pow(x, sys.block as i64))
}

fn mark_known(ctx: &FieldCtx, v: &mut ClassVerdict, h: &Poly) {
    if let Some(e) = self_dual_rotation(ctx, h) {
        if !v.has(ClassTag::PreviouslyKnown) {
            v.tags.push(ClassTag::PreviouslyKnown);
        }
        v.witnesses.insert("rotation".into(), e as i64);
    }
}

pub fn binomial_check(ctx: &FieldCtx, sys: &CosetSystem, spec: &SparseSpec) -> Result<ClassVerdict> {
    spec.validate(sys)?;
    let Shape::Binomial { u, v, a } = spec.shape else {
        return Err(Error::ShapeMismatch("binomial check needs a binomial".into()));
    };
    let (q, n, d, block) = (ctx.q(), ctx.order(), sys.d, sys.block as usize);
    let r = spec.r;
    let mut out = if u == 0 {
        let mut out = ClassVerdict::new(ClassTag::BinomialCase1);
        let big_h = Poly::from_terms(ctx, &[(0, Gf::ONE), (v, a)]);
        out.pp = Some(power_form_pp(ctx, r, n / d, &big_h));
        out
    } else if ctx.in_mu(a, q + 1) {
        let mut out = ClassVerdict::new(ClassTag::BinomialCase2SelfDual);
        let l = (u + v * block) as u64;
        out.witnesses.insert("l".into(), l as i64);
        out.check("gcd(r, q-1) = 1", gcd(r as i64, q as i64 - 1) == 1, false);
        out.check("gcd(r - l, q+1) = 1", gcd(r as i64 - l as i64, q as i64 + 1) == 1, false);
        let expo = (q + 1) / gcd(q as i64 + 1, l as i64);
        out.check("(-a)^((q+1)/gcd(q+1, l)) != 1", ctx.pow(ctx.neg(a), expo as i64) != Gf::ONE, false);
        out.settle();
        out
    } else if 2 * u == block {
        let mut out = ClassVerdict::new(ClassTag::BinomialCase2Half);
        let big_h = Poly::from_terms(ctx, &[(0, Gf::ONE), (1 + 2 * v, a)]);
        out.pp = Some(power_form_pp(ctx, r, n / (2 * d), &big_h));
        out
    } else {
        ClassVerdict::new(ClassTag::NotApplicable)
    };
    mark_known(ctx, &mut out, &spec.h(ctx));
    Ok(out)
}

/// Runs the full decision tree for a trinomial.
pub fn trinomial_classify(ctx: &FieldCtx, sys: &CosetSystem, spec: &SparseSpec) -> Result<ClassVerdict> {
    spec.validate(sys)?;
    let Shape::Trinomial { i1, j1, i2, j2, a, b } = spec.shape else {
        return Err(Error::ShapeMismatch("trinomial classification needs a trinomial".into()));
    };
    let (n, d, block) = (ctx.order(), sys.d as usize, sys.block as usize);
    let r = spec.r;
    let h = spec.h(ctx);
    let mut out;
    if i2 == 0 {
        out = ClassVerdict::new(ClassTag::TrinomialCase1);
        let big_h = Poly::from_terms(ctx, &[(0, Gf::ONE), (j1, a), (j2, b)]);
        out.pp = Some(power_form_pp(ctx, r, n / d as u64, &big_h));
    } else if i1 == 0 {
        let vanishing = (0..d).find(|&k| ctx.add(Gf::ONE, ctx.mul(a, sys.eps_pow(ctx, (j1 * k) as i64))).is_zero());
        match vanishing {
            None => {
                out = ClassVerdict::new(ClassTag::TrinomialCase21);
                let all_untwisted = (0..d).all(|k| {
                    let c = ctx.add(Gf::ONE, ctx.mul(a, sys.eps_pow(ctx, (j1 * k) as i64)));
                    let l = Poly::from_terms(ctx, &[(0, c), (i2, ctx.mul(b, sys.eps_pow(ctx, (j2 * k) as i64)))]);
                    matches!(l.self_dual_factor(ctx), Ok(Some(_)))
                });
                if all_untwisted {
                    out.absorb(class_n_check(ctx, sys, spec, 1)?);
                } else {
                    half_or_none(ctx, sys, spec, &mut out);
                }
            }
            Some(k0) => {
                out = ClassVerdict::new(ClassTag::TrinomialCase22);
                let lam0 = sys.base_point(ctx, k0);
                let b_norm = ctx.mul(b, ctx.pow(lam0, (i2 + j2 * block) as i64));
                let norm = SparseSpec::trinomial(r, spec.d, (0, j1), (i2, j2), ctx.neg(Gf::ONE), b_norm);
                out.witnesses.insert("normalizing-coset".into(), k0 as i64);
                let all_untwisted = (0..d).all(|k| {
                    let c = ctx.sub(Gf::ONE, sys.eps_pow(ctx, (j1 * k) as i64));
                    let bk = ctx.mul(b_norm, sys.eps_pow(ctx, (j2 * k) as i64));
                    let l = Poly::from_terms(ctx, &[(0, c), (i2, bk)]).strip_low().1;
                    matches!(l.self_dual_factor(ctx), Ok(Some(_)))
                });
                let order = ctx.mult_order(sys.eps_pow(ctx, j1 as i64)).unwrap_or(0);
                if all_untwisted && order == 2 {
                    out.absorb(class_n_check(ctx, sys, &norm, 2)?);
                } else if all_untwisted && order == 3 {
                    out.absorb(class_n_check(ctx, sys, &norm, 3)?);
                } else {
                    half_or_none(ctx, sys, spec, &mut out);
                }
            }
        }
    } else if i1 < i2 {
        out = ClassVerdict::new(ClassTag::TrinomialCase3);
        match column_kinds(ctx, sys, spec) {
            None => out.tags.push(ClassTag::NotApplicable),
            Some(kinds) => {
                let present: Vec<ColumnKind> = [ColumnKind::Untwisted, ColumnKind::FullTwist, ColumnKind::ShortTwist]
                    .into_iter()
                    .filter(|k| kinds.contains(k))
                    .collect();
                out.partition = Some(kinds);
                match present.len() {
                    1 => {
                        out.tags.push(ClassTag::PreviouslyKnown);
                        out.pp = coset_verdict(ctx, sys, &h, r);
                    }
                    2 => out.absorb(class4_check(ctx, sys, spec)?),
                    _ => {
                        out.tags.push(ClassTag::Case3Mixed);
                        out.pp = coset_verdict(ctx, sys, &h, r);
                    }
                }
            }
        }
    } else {
        out = ClassVerdict::new(ClassTag::SameRow);
        out.pp = coset_verdict(ctx, sys, &h, r);
    }
    mark_known(ctx, &mut out, &h);
    Ok(out)
}

fn half_or_none(ctx: &FieldCtx, sys: &CosetSystem, spec: &SparseSpec, out: &mut ClassVerdict) {
    let Shape::Trinomial { j1, i2, j2, a, b, .. } = spec.shape else { unreachable!() };
    if 2 * i2 == sys.block as usize {
        out.tags.push(ClassTag::Half);
        let big_h = Poly::from_terms(ctx, &[(0, Gf::ONE), (2 * j1, a), (2 * j2 + 1, b)]);
        out.pp = Some(power_form_pp(ctx, spec.r, ctx.order() / (2 * sys.d), &big_h));
    } else {
        out.tags.push(ClassTag::NotApplicable);
    }
}

/// Per-coset twist kind of `1 + a eps^{j1 k} X^{i1} + b eps^{j2 k} X^{i2}`,
/// ignoring roots; `None` if some column fits no twist.
pub fn column_kinds(ctx: &FieldCtx, sys: &CosetSystem, spec: &SparseSpec) -> Option<Vec<ColumnKind>> {
    let Shape::Trinomial { i1, j1, i2, j2, a, b } = spec.shape else { return None };
    let block = sys.block as usize;
    (0..sys.d as usize)
        .map(|k| {
            let l = Poly::from_terms(
                ctx,
                &[
                    (0, Gf::ONE),
                    (i1, ctx.mul(a, sys.eps_pow(ctx, (j1 * k) as i64))),
                    (i2, ctx.mul(b, sys.eps_pow(ctx, (j2 * k) as i64))),
                ],
            );
            let t = l.degree()?;
            let eps_k = sys.eps_pow(ctx, k as i64);
            let tau = taus_for(block, t).into_iter().find(|&tau| twist_fits(ctx, &l, block, tau, eps_k))?;
            match tau {
                0 => Some(ColumnKind::Untwisted),
                x if x == t => Some(ColumnKind::FullTwist),
                x if x + 1 == t => Some(ColumnKind::ShortTwist),
                _ => None,
            }
        })
        .collect()
}

fn twist_fits(ctx: &FieldCtx, l: &Poly, block: usize, tau: usize, eps_k: Gf) -> bool {
    let Some((p, q_part)) = split(l, block, tau) else { return false };
    let Ok(Some(lp)) = p.self_dual_factor(ctx) else { return false };
    match q_part {
        None => true,
        Some(qq) => qq.self_dual_factor(ctx) == Ok(Some(ctx.mul(lp, eps_k))),
    }
}

/// The condition list of Class 1, 2 or 3 (`i1 = 0` trinomials).
pub fn class_n_check(ctx: &FieldCtx, sys: &CosetSystem, spec: &SparseSpec, class: u8) -> Result<ClassVerdict> {
    spec.validate(sys)?;
    let Shape::Trinomial { i1, j1, i2, j2, a, b } = spec.shape else {
        return Err(Error::ShapeMismatch("class check needs a trinomial".into()));
    };
    let (q, d, block) = (ctx.q() as i64, sys.d as i64, sys.block as i64);
    let r = spec.r as i64;
    let (i2i, j1i, j2i) = (i2 as i64, j1 as i64, j2 as i64);
    let tag = match class {
        1 => ClassTag::Class1,
        2 => ClassTag::Class2,
        3 => ClassTag::Class3,
        _ => return Err(Error::RangeError(format!("no class {class} among the i1 = 0 classes"))),
    };
    let mut v = ClassVerdict::new(tag);
    let one = Gf::ONE;
    let minus_one = ctx.neg(one);
    v.check("i1 = 0 < i2 < (q+1)/d", i1 == 0 && i2 > 0 && (i2 as i64) < block, true);
    // map offsets per residue class of k
    let map: Option<Box<dyn Fn(i64) -> i64>> = match class {
        1 => {
            let ok_j = v.check("j1 = d/2", d % 2 == 0 && 2 * j1i == d, true);
            let ok_a = v.check("a^(q-1) = -1", ctx.pow(a, q - 1) == minus_one, true);
            let ratio = ctx.div(ctx.sub(one, a), b);
            let ok_r = v.check("(1-a)/b in mu_(q+1)", ctx.in_mu(ratio, q as u64 + 1), true);
            if ok_j && ok_a && ok_r {
                let uu = eps_log_of_block_power(ctx, sys, ratio).unwrap() as i64;
                let vv = eps_log_of_block_power(ctx, sys, ctx.div(ctx.add(one, a), ctx.sub(one, a))).unwrap() as i64;
                v.witnesses.insert("u".into(), uu);
                v.witnesses.insert("v".into(), vv);
                let slope = -j2i * block + r - i2i;
                Some(Box::new(move |k| slope * k + (k % 2) * vv + uu))
            } else {
                None
            }
        }
        2 => {
            let ok_j = v.check("j1 = d/2", d % 2 == 0 && 2 * j1i == d, true);
            let ok_a = v.check("a = -1", a == minus_one, true);
            let two = ctx.from_int(2);
            let theta = if two.is_zero() { None } else { eps_log_of_block_power(ctx, sys, ctx.div(two, b)) };
            let ok_t = v.check("(2/b)^((q+1)/d) = eps^theta", theta.is_some(), true);
            if ok_j && ok_a && ok_t {
                let th = theta.unwrap() as i64;
                v.witnesses.insert("theta".into(), th);
                let (s0, s1) = (-2 * j2i * block + r - 2 * i2i, -j2i * block + r - i2i);
                Some(Box::new(move |k| if k % 2 == 0 { s0 * k + 2 * th } else { s1 * k + th }))
            } else {
                None
            }
        }
        _ => {
            let ok_j = v.check("j1 = d/3 or 2d/3", d % 3 == 0 && (3 * j1i == d || 3 * j1i == 2 * d), true);
            let ok_a = v.check("a = -1", a == minus_one, true);
            let w = ctx.sub(one, sys.eps_pow(ctx, j1i));
            let eta = if w.is_zero() { None } else { eps_log_of_block_power(ctx, sys, ctx.div(w, b)) };
            let ok_e = v.check("((1-eps^j1)/b)^((q+1)/d) = eps^eta", eta.is_some(), true);
            if ok_j && ok_a && ok_e {
                let et = eta.unwrap() as i64;
                v.witnesses.insert("eta".into(), et);
                let c = -j1i * block + (q + 1) / gcd(2, d) as i64;
                let (s0, s1) = (-2 * j2i * block + r - 2 * i2i, -j2i * block + r - i2i);
                Some(Box::new(move |k| if k % 3 == 0 { s0 * k + c + 2 * et } else { s1 * k + c + et }))
            } else {
                None
            }
        }
    };
    v.check("gcd(h, X^(q+1) - 1) = 1", coprime_to_circle(ctx, &spec.h(ctx)), false);
    v.check("gcd(r, q-1) = 1", gcd(r, q - 1) == 1, false);
    v.check("gcd(r - i2, (q+1)/d) = 1", gcd(r - i2i, block) == 1, false);
    if class != 1 {
        v.check("gcd(r - 2 i2, (q+1)/d) = 1", gcd(r - 2 * i2i, block) == 1, false);
    }
    let perm = map.is_some_and(|m| {
        let vals: Vec<u64> = (0..d).map(|k| modulo(m(k), d as u64)).collect();
        is_permutation_of_residues(&vals, d as u64)
    });
    v.check("coset map permutes Z/d", perm, false);
    v.settle();
    Ok(v)
}

/// Conditions for two-shifted-rows trinomials whose columns mix two twist
/// kinds. These force `(q+1)/d = 3`, `i1 = 1`, `i2 = 2`, `d` even with the
/// kinds alternating, and `pi(k) + e_k k = r k`.
pub fn class4_check(ctx: &FieldCtx, sys: &CosetSystem, spec: &SparseSpec) -> Result<ClassVerdict> {
    spec.validate(sys)?;
    let Shape::Trinomial { i1, i2, .. } = spec.shape else {
        return Err(Error::ShapeMismatch("class check needs a trinomial".into()));
    };
    let (q, d) = (ctx.q() as i64, sys.d as i64);
    let r = spec.r as i64;
    let h = spec.h(ctx);
    let mut v = ClassVerdict::new(ClassTag::Class4);
    v.check("(q+1)/d = 3, i1 = 1, i2 = 2", sys.block == 3 && i1 == 1 && i2 == 2, true);
    let kinds = column_kinds(ctx, sys, spec);
    let alternating = kinds.as_ref().is_some_and(|ks| {
        d % 2 == 0 && ks[0] != ks[1] && ks.iter().enumerate().all(|(k, &x)| x == ks[k % 2])
    });
    v.check("column kinds alternate over the two cosets of 2Z/d", alternating, true);
    if let Some(ks) = &kinds {
        v.partition = Some(ks.clone());
    }
    v.check("gcd(r, q-1) = 1", gcd(r, q - 1) == 1, false);
    let e_of = |kind: ColumnKind| match kind {
        ColumnKind::Untwisted => r - 2,
        ColumnKind::FullTwist => r,
        ColumnKind::ShortTwist => r - 1,
    };
    let coprime = kinds.as_ref().is_some_and(|ks| ks.iter().all(|&x| gcd(e_of(x), 3) == 1));
    v.check("gcd(e_k, 3) = 1 for all k", coprime, false);
    v.check("gcd(h, X^(q+1) - 1) = 1", coprime_to_circle(ctx, &h), false);
    v.check("k -> r k permutes Z/d", gcd(r, d) == 1, false);
    // cross-check against the per-coset data
    if let Some(prof) = monomial_profile(ctx, sys, &h, spec.r) {
        let rk = prof.iter().all(|p| modulo(p.pi as i64 + p.e * p.k as i64 - r * p.k as i64, d as u64) == 0);
        v.witnesses.insert("map-is-rk".into(), rk as i64);
    }
    v.settle();
    Ok(v)
}

/// One row of the explicit table of two-shifted-rows permutation trinomials.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Class4Member {
    pub spec: SparseSpec,
    /// `r mod 3`.
    pub residue: u64,
    /// The root `a` (or `b`) the row is parameterized by.
    pub root: Gf,
    /// `+1` or `-1` for rows with a sign choice, `0` otherwise.
    pub sign: i8,
}

impl Serialize for SparseSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("SparseSpec", 3)?;
        st.serialize_field("r", &self.r)?;
        st.serialize_field("d", &self.d)?;
        st.serialize_field("shape", &self.shape)?;
        st.end()
    }
}

/// All members of the table row for `r mod 3`, roots in increasing
/// discrete-log order, `+` before `-`.
pub fn class4_generate(ctx: &FieldCtx, r: u64) -> Result<Vec<Class4Member>> {
    let q = ctx.q();
    let five = match q % 18 {
        5 => true,
        11 => false,
        _ => return Err(Error::BadResidue(q)),
    };
    let d = (q + 1) / 3;
    let l = ((q + 1) / 6) as usize;
    let minus_one = ctx.neg(Gf::ONE);
    let roots = |target: &[Gf]| -> Vec<Gf> {
        (0..ctx.order() as i64).map(|e| ctx.elem(e)).filter(|&x| target.contains(&ctx.pow(x, 3))).collect()
    };
    let residue = r % 3;
    let mut out = Vec::new();
    let mut push = |terms: [(usize, Gf); 2], root: Gf, sign: i8| {
        let mut t = terms.map(|(e, c)| (e % 3, e / 3, c));
        t.sort_by_key(|&(i, j, _)| (i, j));
        let spec = SparseSpec::trinomial(r, d, (t[0].0, t[0].1), (t[1].0, t[1].1), t[0].2, t[1].2);
        out.push(Class4Member { spec, residue, root, sign });
    };
    let signs = [(1i8, Gf::ONE), (-1i8, minus_one)];
    match residue {
        0 => {
            for a in roots(&[Gf::ONE, minus_one]) {
                let ainv = ctx.neg(ctx.inv(a).unwrap());
                let (ea, eb) = if five { (l, 5 * l) } else { (5 * l, l) };
                push([(ea, a), (eb, ainv)], a, 0);
            }
        }
        1 => {
            for a in roots(&[minus_one]) {
                for (sg, s) in signs {
                    let (ea, eb) = if five { (4 * l, 5 * l) } else { (2 * l, l) };
                    push([(ea, a), (eb, ctx.mul(s, ctx.mul(a, a)))], a, sg);
                }
            }
        }
        _ => {
            for b in roots(&[minus_one]) {
                for (sg, s) in signs {
                    let (ea, eb) = if five { (l, 2 * l) } else { (5 * l, 4 * l) };
                    push([(ea, ctx.mul(s, ctx.mul(b, b))), (eb, b)], b, sg);
                }
            }
        }
    }
    Ok(out)
}

/// `r` admissible for the table: `gcd(r, q-1) = 1` and `gcd(r, d) = 1`, the
/// latter being the coset map `k -> r k` permuting `Z/d`.
pub fn class4_admissible(q: u64, r: u64) -> bool {
    gcd(r as i64, q as i64 - 1) == 1 && gcd(r as i64, (q as i64 + 1) / 3) == 1
}

/// `(u, s, c)` with `f = u X^s (1 + c X^m - c^2 X^{2m})`, `m = (q^2-1)/6`,
/// `c^6 = 1`, if `f` has that shape.
pub fn class4_normal_form(ctx: &FieldCtx, f: &Poly) -> Option<(Gf, u64, Gf)> {
    let n = ctx.order();
    let m = n / 6;
    let sup: Vec<u64> = f.support().into_iter().map(|e| e as u64).collect();
    if sup.len() != 3 || !n.is_multiple_of(6) {
        return None;
    }
    let s = *sup.iter().find(|&&s| sup.contains(&((s + m) % n)) && sup.contains(&((s + 2 * m) % n)))?;
    let u = f.coeff(s as usize);
    let c = ctx.div(f.coeff(((s + m) % n) as usize), u);
    let c2 = ctx.div(f.coeff(((s + 2 * m) % n) as usize), u);
    (ctx.in_mu(c, 6) && c2 == ctx.neg(ctx.mul(c, c))).then_some((u, s, c))
}

/// `X^r (1 + X^{2(q-1)} + a^q X^{(q^2-1)/2} + a X^{(q+5)(q-1)})`, from
/// `h = P + X^{(q+1)/2} Q` with `P = 1 + X^2` and `Q = a^q + a X^2`.
pub fn split_quadrinomial(ctx: &FieldCtx, r: u64, a: Gf) -> Poly {
    let q = ctx.q() as usize;
    let h = Poly::from_terms(ctx, &[(0, Gf::ONE), (2, Gf::ONE), (q.div_ceil(2), ctx.frobenius(a)), ((q + 5) / 2, a)]);
    pp_from_h(ctx, &h, r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coset::coset_system;
    use crate::oracle::is_permutation;

    fn oracle(ctx: &FieldCtx, f: &Poly) -> bool {
        is_permutation(ctx, f).is_permutation
    }

    #[test]
    fn binomial_q5_l2_minus_one() {
        let f = FieldCtx::new(5, 1).unwrap();
        let sys = coset_system(&f, 1).unwrap();
        let a = f.neg(Gf::ONE);
        for r in [1u64, 3] {
            let v = binomial_check(&f, &sys, &SparseSpec::binomial(r, 1, 2, 0, a)).unwrap();
            assert!(v.has(ClassTag::BinomialCase2SelfDual));
            assert_eq!(v.pp, Some(false));
            assert!(!oracle(&f, &SparseSpec::binomial(r, 1, 2, 0, a).pp(&f)));
        }
        assert!(matches!(
            binomial_check(&f, &sys, &SparseSpec::binomial(1, 1, 0, 0, a)),
            Err(Error::ShapeMismatch(_))
        ));
    }

    #[test]
    fn binomial_criterion_q7_exhaustive() {
        let f = FieldCtx::new(7, 1).unwrap();
        for a in f.mu_subgroup(8).unwrap() {
            for l in 1..=7u64 {
                for r in [1u64, 5] {
                    let h = Poly::from_terms(&f, &[(0, Gf::ONE), (l as usize, a)]);
                    let g = pp_from_h(&f, &h, r);
                    assert_eq!(unit_binomial_criterion(&f, r, l, a), oracle(&f, &g), "a={a} l={l} r={r}");
                }
            }
        }
    }

    #[test]
    fn binomial_routes_agree_with_oracle() {
        let f = FieldCtx::new(5, 1).unwrap();
        for d in [1u64, 2, 3, 6] {
            let sys = coset_system(&f, d).unwrap();
            for u in 0..sys.block as usize {
                for v in 0..d as usize {
                    if (u, v) == (0, 0) {
                        continue;
                    }
                    for e in (0..24).step_by(5) {
                        for r in [1u64, 3, 5] {
                            let spec = SparseSpec::binomial(r, d, u, v, f.elem(e));
                            let ver = binomial_check(&f, &sys, &spec).unwrap();
                            if let Some(pp) = ver.pp {
                                assert_eq!(pp, oracle(&f, &spec.pp(&f)), "{spec:?} {ver:?}");
                            }
                        }
                    }
                }
            }
        }
    }

    fn class1_instances(f: &FieldCtx) -> Vec<Gf> {
        let minus_one = f.neg(Gf::ONE);
        f.elements()
            .skip(1)
            .filter(|&a| {
                f.pow(a, 4) == minus_one
                    && f.pow(f.div(f.add(Gf::ONE, a), f.sub(Gf::ONE, a)), 3) == minus_one
            })
            .collect()
    }

    #[test]
    fn class1_worked_example() {
        let f = FieldCtx::new(5, 1).unwrap();
        let sys = coset_system(&f, 2).unwrap();
        let found = class1_instances(&f);
        assert!(!found.is_empty());
        for a in found {
            let b = f.neg(f.sub(Gf::ONE, a));
            let spec = SparseSpec::trinomial(3, 2, (0, 1), (1, 0), a, b);
            let v = class_n_check(&f, &sys, &spec, 1).unwrap();
            assert!(v.conditions.iter().all(|c| c.passed), "{v:?}");
            assert_eq!(v.pp, Some(true));
            assert!(oracle(&f, &spec.pp(&f)));
            let t = trinomial_classify(&f, &sys, &spec).unwrap();
            assert!(t.has(ClassTag::TrinomialCase21) && t.has(ClassTag::Class1));
            assert_eq!(t.pp, Some(true));
        }
        // a in F_q fails a^(q-1) = -1
        let spec = SparseSpec::trinomial(3, 2, (0, 1), (1, 0), f.from_int(2), Gf::ONE);
        let v = class_n_check(&f, &sys, &spec, 1).unwrap();
        assert!(!v.conditions.iter().find(|c| c.name == "a^(q-1) = -1").unwrap().passed);
        assert_eq!(v.pp, None);
    }

    #[test]
    fn class2_worked_example() {
        let f = FieldCtx::new(5, 1).unwrap();
        let sys = coset_system(&f, 2).unwrap();
        let two = f.from_int(2);
        let bs: Vec<Gf> = f.elements().skip(1).filter(|&b| f.pow(f.div(two, b), 3) == Gf::ONE).collect();
        assert_eq!(bs.len(), 3);
        for b in bs {
            let spec = SparseSpec::trinomial(3, 2, (0, 1), (2, 0), f.neg(Gf::ONE), b);
            let v = class_n_check(&f, &sys, &spec, 2).unwrap();
            assert!(v.conditions.iter().all(|c| c.passed), "{v:?}");
            assert!(oracle(&f, &spec.pp(&f)));
            // the PP is X^3 (1 - X^12 + b X^8)
            let expect = Poly::from_terms(&f, &[(3, Gf::ONE), (15, f.neg(Gf::ONE)), (11, b)]);
            assert_eq!(spec.pp(&f), expect);
            let t = trinomial_classify(&f, &sys, &spec).unwrap();
            assert!(t.has(ClassTag::Class2), "{t:?}");
            // e_k = r - 2 i2 on even k, r - i2 on odd k
            let prof = monomial_profile(&f, &sys, &spec.h(&f), 3).unwrap();
            assert_eq!(prof[0].e, 3 - 4);
            assert_eq!(prof[1].e, 3 - 2);
        }
    }

    #[test]
    fn class3_worked_example() {
        let f = FieldCtx::new(2, 3).unwrap();
        let sys = coset_system(&f, 3).unwrap();
        let w = f.sub(Gf::ONE, sys.epsilon);
        let bs: Vec<Gf> = f.elements().skip(1).filter(|&b| f.pow(f.div(w, b), 3) == Gf::ONE).collect();
        assert!(!bs.is_empty());
        for b in bs {
            let spec = SparseSpec::trinomial(3, 3, (0, 1), (1, 0), Gf::ONE, b);
            let v = class_n_check(&f, &sys, &spec, 3).unwrap();
            assert!(v.conditions.iter().all(|c| c.passed), "{v:?}");
            assert!(oracle(&f, &spec.pp(&f)));
            // the coset map is k -> (r - i2) k - j1 (q+1)/3
            let eta = v.witnesses["eta"];
            assert_eq!(modulo(eta, 3), 0);
            let vals: Vec<u64> = (0..3).map(|k| modulo(2 * k - 3, 3)).collect();
            assert!(is_permutation_of_residues(&vals, 3));
        }
    }

    #[test]
    fn self_dual_trinomial_is_known() {
        let f = FieldCtx::new(7, 1).unwrap();
        let sys = coset_system(&f, 2).unwrap();
        // i1 = 1, i2 = 2, j2 = 2 j1 mod d, b = a^(1-q)
        let a = f.elem(5);
        let b = f.pow(a, 1 - 7);
        let spec = SparseSpec::trinomial(5, 2, (1, 1), (2, 0), a, b);
        let v = trinomial_classify(&f, &sys, &spec).unwrap();
        assert!(v.has(ClassTag::PreviouslyKnown), "{v:?}");
        assert_eq!(v.pp, Some(oracle(&f, &spec.pp(&f))));
    }

    #[test]
    fn classify_agrees_with_oracle_q5() {
        let f = FieldCtx::new(5, 1).unwrap();
        let mut decided = 0;
        for d in [2u64, 3, 6] {
            let sys = coset_system(&f, d).unwrap();
            let block = sys.block as usize;
            for i1 in 0..block {
                for i2 in i1..block {
                    for j1 in 0..d as usize {
                        for j2 in 0..d as usize {
                            for (ea, eb) in [(0, 12), (3, 7), (12, 12), (6, 18), (1, 20)] {
                                let spec = SparseSpec::trinomial(3, d, (i1, j1), (i2, j2), f.elem(ea), f.elem(eb));
                                if spec.validate(&sys).is_err() {
                                    continue;
                                }
                                let v = trinomial_classify(&f, &sys, &spec).unwrap();
                                if let Some(pp) = v.pp {
                                    decided += 1;
                                    assert_eq!(pp, oracle(&f, &spec.pp(&f)), "{spec:?} {v:?}");
                                }
                            }
                        }
                    }
                }
            }
        }
        assert!(decided > 50);
    }

    #[test]
    fn class4_rows_q5_and_q11() {
        for p in [5u64, 11] {
            let f = FieldCtx::new(p, 1).unwrap();
            let sys = coset_system(&f, (p + 1) / 3).unwrap();
            for r in 1..=3 * p {
                if !class4_admissible(p, r) {
                    continue;
                }
                let members = class4_generate(&f, r).unwrap();
                assert_eq!(members.len(), 6);
                for mbr in members {
                    let g = mbr.spec.pp(&f);
                    assert!(oracle(&f, &g), "q={p} r={r} {mbr:?}");
                    let (_, s, _) = class4_normal_form(&f, &g).unwrap();
                    assert_eq!(s % 3, if p % 18 == 5 { 2 } else { 1 });
                    let v = trinomial_classify(&f, &sys, &mbr.spec).unwrap();
                    assert!(v.has(ClassTag::Class4), "{v:?}");
                    assert_eq!(v.pp, Some(true));
                    assert_eq!(v.witnesses.get("map-is-rk"), Some(&1));
                }
            }
        }
        let f7 = FieldCtx::new(7, 1).unwrap();
        assert_eq!(class4_generate(&f7, 1).unwrap_err(), Error::BadResidue(7));
    }

    #[test]
    fn remark_example_coprime() {
        let f = FieldCtx::new(11, 1).unwrap();
        for m in class4_generate(&f, 7).unwrap() {
            assert!(coprime_to_circle(&f, &m.spec.h(&f)));
        }
    }

    #[test]
    fn power_form_matches_oracle() {
        let f = FieldCtx::new(5, 1).unwrap();
        for r in 1..8u64 {
            for e in [0i64, 5, 13] {
                let big_h = Poly::from_terms(&f, &[(0, Gf::ONE), (1, f.elem(e))]);
                // X^r (1 + c X^12) is X^r H(X^12)
                let g = Poly::from_terms(&f, &[(r as usize, Gf::ONE), (r as usize + 12, f.elem(e))]).reduce_cyclic(&f, 24);
                assert_eq!(power_form_pp(&f, r, 12, &big_h), oracle(&f, &g));
            }
        }
    }
}
