//! Forward assembly of permutation polynomials `X^r h(X^{q-1})` from per-coset
//! data, and the backward extraction of that data from `h`.
//!
//! Write `B = (q+1)/d`. For each coset index `k` the input supplies a shift
//! `s`, a degree `t`, a twist `tau` and a polynomial `L` of degree `t` with
//! `dual(L)(x) = lambda x^tau L(x)` on `A_k`. Then `x^r h(x)^{q-1} =
//! lambda x^{r - 2s - t + tau}` on `A_k`, and `h` is recovered from the
//! columns `X^s L` by an inverse discrete Fourier transform over `<eps>`.

use std::collections::BTreeSet;
use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{gcd, is_permutation_of_residues, modulo};
use crate::coset::CosetSystem;
use crate::error::{Error, Result};
use crate::field::{FieldCtx, Gf};
use crate::poly::Poly;

/// Families at most this large are sampled by exact enumeration.
const EXACT_SAMPLE_LIMIT: u128 = 4096;
const REJECTION_ATTEMPTS: usize = 20_000;

/// `(s, t, tau)`.
pub type Triple = (usize, usize, usize);

/// Whether `tau` is admissible for degree `t` and block size `block`.
pub fn tau_admissible(block: usize, t: usize, tau: usize) -> bool {
    tau == 0 || (block <= t + tau && tau <= t)
}

/// All admissible twists for degree `t`, zero first.
pub fn taus_for(block: usize, t: usize) -> Vec<usize> {
    let mut v = vec![0];
    v.extend((block.saturating_sub(t).max(1))..=t);
    v.retain(|&tau| tau_admissible(block, t, tau));
    v
}

/// `r - 2s - t + tau`.
pub fn exponent(r: u64, s: usize, t: usize, tau: usize) -> i64 {
    r as i64 - 2 * s as i64 - t as i64 + tau as i64
}

/// The admissible triples: `s + t < B`, `tau` admissible and
/// `gcd(r - 2s - t + tau, B) = 1`.
pub fn omega_set(q: u64, d: u64, r: u64) -> Vec<Triple> {
    let block = ((q + 1) / d) as usize;
    let mut out = Vec::new();
    for t in 0..block {
        for tau in taus_for(block, t) {
            for s in 0..block - t {
                if gcd(exponent(r, s, t, tau), block as i64) == 1 {
                    out.push((s, t, tau));
                }
            }
        }
    }
    out.sort_unstable();
    out
}

/// Number of shifts `s < B - t` with `gcd(r - 2s - t + tau, B) = 1`.
pub fn m_count(q: u64, d: u64, r: u64, t: usize, tau: usize) -> usize {
    let block = ((q + 1) / d) as usize;
    if t >= block {
        return 0;
    }
    (0..block - t)
        .filter(|&s| gcd(exponent(r, s, t, tau), block as i64) == 1)
        .count()
}

#[derive(Clone, Copy, Debug)]
enum Slot {
    /// nonzero, anything
    Lead,
    /// anything
    Free,
    /// solutions of `conj(a) = c a`, zero included
    Mid(u64),
    /// nonzero solutions of `conj(a) = c a`
    Const(u64),
}

#[derive(Clone, Debug)]
struct Part {
    offset: usize,
    deg: usize,
    factor: Gf,
}

/// The parameterized family behind `L_k(t, tau; lambda)`, before the
/// no-root-on-`A_k` filter.
///
/// For `tau = 0` it is `{ P : deg P = t, dual(P) = lambda P }`; otherwise
/// `P + X^{B - tau} Q` with `deg P = t - tau`, `dual(P) = lambda P`,
/// `deg Q = tau + t - B` and `dual(Q) = lambda eps^k Q`. A self-dual `P` of
/// degree `n` is fixed by its coefficients `a_i` for `i <= n/2`, since
/// `a_{n-i} = conj(c a_i)`.
#[derive(Clone, Debug)]
pub struct LFamily {
    pub k: usize,
    pub t: usize,
    pub tau: usize,
    pub lambda: Gf,
    parts: Vec<Part>,
    slots: Vec<(usize, usize, Slot)>,
    coset: Vec<Gf>,
    q: u64,
    empty: bool,
}

impl LFamily {
    pub fn new(ctx: &FieldCtx, sys: &CosetSystem, k: usize, t: usize, tau: usize, lambda: Gf) -> Result<Self> {
        let block = sys.block as usize;
        if t >= block || !tau_admissible(block, t, tau) || k >= sys.d as usize {
            return Err(Error::InvalidTau { t, tau, block });
        }
        let q = ctx.q();
        let parts = if tau == 0 {
            vec![Part { offset: 0, deg: t, factor: lambda }]
        } else {
            vec![
                Part { offset: 0, deg: t - tau, factor: lambda },
                Part {
                    offset: block - tau,
                    deg: tau + t - block,
                    factor: ctx.mul(lambda, sys.eps_pow(ctx, k as i64)),
                },
            ]
        };
        let empty = !ctx.in_mu(lambda, q + 1);
        let mut slots = Vec::new();
        for (pi, part) in parts.iter().enumerate() {
            let j = part.factor.log().map_or(0, |e| (e as u64 / (q - 1)) % (q + 1));
            if part.deg == 0 {
                slots.push((pi, 0, Slot::Const(j)));
                continue;
            }
            slots.push((pi, 0, Slot::Lead));
            for i in 1..part.deg.div_ceil(2) {
                slots.push((pi, i, Slot::Free));
            }
            if part.deg % 2 == 0 {
                slots.push((pi, part.deg / 2, Slot::Mid(j)));
            }
        }
        Ok(LFamily { k, t, tau, lambda, parts, slots, coset: sys.cosets[k].clone(), q, empty })
    }

    fn radix(&self, slot: Slot) -> u128 {
        let q = self.q as u128;
        match slot {
            Slot::Lead => q * q - 1,
            Slot::Free => q * q,
            Slot::Mid(_) => q,
            Slot::Const(_) => q - 1,
        }
    }

    fn slot_value(&self, ctx: &FieldCtx, slot: Slot, idx: u128) -> Gf {
        let q = self.q as i64;
        let idx = idx as i64;
        match slot {
            Slot::Lead => ctx.elem(idx),
            Slot::Free | Slot::Mid(_) if idx == 0 => Gf::ZERO,
            Slot::Free => ctx.elem(idx - 1),
            Slot::Mid(j) => ctx.elem(j as i64 + (q + 1) * (idx - 1)),
            Slot::Const(j) => ctx.elem(j as i64 + (q + 1) * idx),
        }
    }

    fn slot_index(&self, slot: Slot, x: Gf) -> Option<u128> {
        let q = self.q;
        match (slot, x.log()) {
            (Slot::Lead, e) => e.map(u128::from),
            (Slot::Free, None) | (Slot::Mid(_), None) => Some(0),
            (Slot::Free, Some(e)) => Some(e as u128 + 1),
            (Slot::Mid(j), Some(e)) => ((e as u64) % (q + 1) == j).then(|| (e as u64 / (q + 1)) as u128 + 1),
            (Slot::Const(j), Some(e)) => ((e as u64) % (q + 1) == j).then(|| (e as u64 / (q + 1)) as u128),
            (Slot::Const(_), None) => None,
        }
    }

    /// Size of the parameterization, `None` on overflow.
    pub fn raw_size(&self) -> Option<u128> {
        if self.empty {
            return Some(0);
        }
        self.slots.iter().try_fold(1u128, |acc, &(_, _, s)| acc.checked_mul(self.radix(s)))
    }

    fn build(&self, ctx: &FieldCtx, choice: &[Gf]) -> Poly {
        let mut v = vec![Gf::ZERO; self.t + 1];
        for (&(pi, i, _), &a) in self.slots.iter().zip(choice) {
            let part = &self.parts[pi];
            v[part.offset + i] = a;
            let mirror = part.deg - i;
            if mirror != i {
                v[part.offset + mirror] = ctx.frobenius(ctx.mul(part.factor, a));
            }
        }
        Poly::new(v)
    }

    /// The member of the parameterization with mixed-radix index `idx`.
    pub fn member_at(&self, ctx: &FieldCtx, mut idx: u128) -> Poly {
        let mut choice = Vec::with_capacity(self.slots.len());
        for &(_, _, s) in &self.slots {
            let r = self.radix(s);
            choice.push(self.slot_value(ctx, s, idx % r));
            idx /= r;
        }
        self.build(ctx, &choice)
    }

    /// Index of `l` in the parameterization, if it lies there.
    pub fn position(&self, ctx: &FieldCtx, l: &Poly) -> Option<u128> {
        if self.empty || l.degree() != Some(self.t) {
            return None;
        }
        let mut idx = 0u128;
        let mut scale = 1u128;
        let mut choice = Vec::with_capacity(self.slots.len());
        for &(pi, i, s) in &self.slots {
            let a = l.coeff(self.parts[pi].offset + i);
            idx += scale * self.slot_index(s, a)?;
            scale = scale.saturating_mul(self.radix(s));
            choice.push(a);
        }
        (self.build(ctx, &choice) == *l).then_some(idx)
    }

    /// Whether `l` has no root on the coset `A_k`.
    pub fn root_free(&self, ctx: &FieldCtx, l: &Poly) -> bool {
        self.coset.iter().all(|&x| !l.eval(ctx, x).is_zero())
    }

    pub fn contains(&self, ctx: &FieldCtx, l: &Poly) -> bool {
        self.position(ctx, l).is_some() && self.root_free(ctx, l)
    }

    /// Members in index order. Panics if the family is too large to index.
    pub fn iter<'a>(&'a self, ctx: &'a FieldCtx) -> impl Iterator<Item = Poly> + 'a {
        let size = self.raw_size().expect("family too large to enumerate");
        Odometer::new(self, ctx, size).filter(move |l| self.root_free(ctx, l))
    }

    /// A uniform random member.
    pub fn sample<R: Rng + ?Sized>(&self, ctx: &FieldCtx, rng: &mut R) -> Result<Poly> {
        let err = Error::EmptyFamily { k: self.k, t: self.t, tau: self.tau };
        match self.raw_size() {
            Some(0) => return Err(err),
            Some(n) if n <= EXACT_SAMPLE_LIMIT => {
                let all: Vec<Poly> = self.iter(ctx).collect();
                return all.choose(rng).cloned().ok_or(err);
            }
            _ => {}
        }
        for _ in 0..REJECTION_ATTEMPTS {
            let choice: Vec<Gf> = self
                .slots
                .iter()
                .map(|&(_, _, s)| self.slot_value(ctx, s, rng.gen_range(0..self.radix(s))))
                .collect();
            let l = self.build(ctx, &choice);
            if self.root_free(ctx, &l) {
                return Ok(l);
            }
        }
        Err(err)
    }
}

struct Odometer<'a> {
    fam: &'a LFamily,
    ctx: &'a FieldCtx,
    digits: Vec<u128>,
    choice: Vec<Gf>,
    remaining: u128,
}

impl<'a> Odometer<'a> {
    fn new(fam: &'a LFamily, ctx: &'a FieldCtx, size: u128) -> Self {
        let digits = vec![0u128; fam.slots.len()];
        let choice = fam.slots.iter().map(|&(_, _, s)| fam.slot_value(ctx, s, 0)).collect();
        Odometer { fam, ctx, digits, choice, remaining: size }
    }
}

impl Iterator for Odometer<'_> {
    type Item = Poly;

    fn next(&mut self) -> Option<Poly> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        let out = self.fam.build(self.ctx, &self.choice);
        for (i, &(_, _, s)) in self.fam.slots.iter().enumerate() {
            self.digits[i] += 1;
            if self.digits[i] < self.fam.radix(s) {
                self.choice[i] = self.fam.slot_value(self.ctx, s, self.digits[i]);
                break;
            }
            self.digits[i] = 0;
            self.choice[i] = self.fam.slot_value(self.ctx, s, 0);
        }
        Some(out)
    }
}

/// Membership in `L_k(t, tau; lambda)` straight from the definition: the
/// self-dual factors of the pieces, and no root on `A_k`.
pub fn membership(
    ctx: &FieldCtx,
    sys: &CosetSystem,
    k: usize,
    t: usize,
    tau: usize,
    lambda: Gf,
    l: &Poly,
) -> Result<bool> {
    if l.degree() != Some(t) || l.coeff(0).is_zero() {
        return Err(Error::DegreeMismatch { expected: t, found: l.degree() });
    }
    let block = sys.block as usize;
    if !tau_admissible(block, t, tau) || t >= block {
        return Ok(false);
    }
    let Some((p_part, q_part)) = split(l, block, tau) else {
        return Ok(false);
    };
    if p_part.self_dual_factor(ctx)? != Some(lambda) {
        return Ok(false);
    }
    if let Some(qp) = q_part {
        if qp.self_dual_factor(ctx)? != Some(ctx.mul(lambda, sys.eps_pow(ctx, k as i64))) {
            return Ok(false);
        }
    }
    Ok(sys.cosets[k].iter().all(|&x| !l.eval(ctx, x).is_zero()))
}

/// Positional split `L = P + X^{B - tau} Q` with `deg P = t - tau` and
/// `Q(0) != 0`; `tau = 0` gives `(L, None)`.
pub(crate) fn split(l: &Poly, block: usize, tau: usize) -> Option<(Poly, Option<Poly>)> {
    if tau == 0 {
        return Some((l.clone(), None));
    }
    let t = l.degree()?;
    let c = l.coeffs();
    let p_deg = t - tau;
    let q_lo = block - tau;
    if c[p_deg].is_zero() || c[q_lo].is_zero() || c[p_deg + 1..q_lo].iter().any(|x| !x.is_zero()) {
        return None;
    }
    Some((Poly::new(c[..=p_deg].to_vec()), Some(Poly::new(c[q_lo..].to_vec()))))
}

/// Collects the members of `L_k(t, tau; lambda)`.
pub fn enumerate_l(
    ctx: &FieldCtx,
    sys: &CosetSystem,
    k: usize,
    t: usize,
    tau: usize,
    lambda: Gf,
) -> Result<Vec<Poly>> {
    let fam = LFamily::new(ctx, sys, k, t, tau, lambda)?;
    Ok(fam.iter(ctx).collect())
}

pub fn sample_l<R: Rng + ?Sized>(
    ctx: &FieldCtx,
    sys: &CosetSystem,
    k: usize,
    t: usize,
    tau: usize,
    lambda: Gf,
    rng: &mut R,
) -> Result<Poly> {
    LFamily::new(ctx, sys, k, t, tau, lambda)?.sample(ctx, rng)
}

/// Per-coset input data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InputRow {
    pub s: usize,
    pub t: usize,
    pub tau: usize,
    pub pi: u64,
    pub lambda: Gf,
    pub l: Poly,
}

impl InputRow {
    pub fn exponent(&self, r: u64) -> i64 {
        exponent(r, self.s, self.t, self.tau)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgoInput {
    pub r: u64,
    pub d: u64,
    pub rows: Vec<InputRow>,
}

impl AlgoInput {
    /// `k -> pi(k) + e_k k mod d`.
    pub fn coset_map(&self) -> Vec<u64> {
        self.rows
            .iter()
            .enumerate()
            .map(|(k, row)| modulo(row.pi as i64 + row.exponent(self.r) * k as i64, self.d))
            .collect()
    }
}

/// One failed condition of an [`AlgoInput`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    RNotCoprime { r: u64, q: u64 },
    DNotDivisor { d: u64 },
    RowCount { expected: u64, found: usize },
    ShiftTooLarge { k: usize, s: usize, t: usize },
    BadTau { k: usize, t: usize, tau: usize },
    ExponentNotCoprime { k: usize, e: i64 },
    PiOutOfRange { k: usize, pi: u64 },
    LambdaNotInCoset { k: usize, pi: u64 },
    DegreeMismatch { k: usize, t: usize },
    NotInFamily { k: usize },
    NotPermutation { values: Vec<u64> },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::RNotCoprime { r, q } => write!(f, "gcd(r, q-1) != 1 for r = {r}, q = {q}"),
            Violation::DNotDivisor { d } => write!(f, "d = {d} does not divide q + 1"),
            Violation::RowCount { expected, found } => write!(f, "expected {expected} rows, found {found}"),
            Violation::ShiftTooLarge { k, s, t } => write!(f, "row {k}: s + t = {} is not below (q+1)/d", s + t),
            Violation::BadTau { k, t, tau } => write!(f, "row {k}: tau = {tau} not admissible for t = {t}"),
            Violation::ExponentNotCoprime { k, e } => write!(f, "row {k}: e = {e} not coprime to (q+1)/d"),
            Violation::PiOutOfRange { k, pi } => write!(f, "row {k}: pi = {pi} not below d"),
            Violation::LambdaNotInCoset { k, pi } => write!(f, "row {k}: lambda not in A_{pi}"),
            Violation::DegreeMismatch { k, t } => write!(f, "row {k}: L is not of degree {t} with L(0) != 0"),
            Violation::NotInFamily { k } => write!(f, "row {k}: L is not in its family"),
            Violation::NotPermutation { values } => write!(f, "k -> pi(k) + e_k k takes values {values:?}"),
        }
    }
}

/// Every violated condition, empty when the input is valid.
pub fn violations(ctx: &FieldCtx, sys: &CosetSystem, input: &AlgoInput) -> Vec<Violation> {
    let mut out = Vec::new();
    let q = ctx.q();
    if gcd(input.r as i64, q as i64 - 1) != 1 {
        out.push(Violation::RNotCoprime { r: input.r, q });
    }
    if input.d != sys.d {
        out.push(Violation::DNotDivisor { d: input.d });
        return out;
    }
    if input.rows.len() as u64 != sys.d {
        out.push(Violation::RowCount { expected: sys.d, found: input.rows.len() });
        return out;
    }
    let block = sys.block as usize;
    for (k, row) in input.rows.iter().enumerate() {
        if row.s + row.t >= block {
            out.push(Violation::ShiftTooLarge { k, s: row.s, t: row.t });
        }
        if !tau_admissible(block, row.t, row.tau) {
            out.push(Violation::BadTau { k, t: row.t, tau: row.tau });
        }
        let e = row.exponent(input.r);
        if gcd(e, block as i64) != 1 {
            out.push(Violation::ExponentNotCoprime { k, e });
        }
        if row.pi >= sys.d {
            out.push(Violation::PiOutOfRange { k, pi: row.pi });
        } else if !ctx.in_mu(row.lambda, q + 1) || sys.index_of(row.lambda).ok() != Some(row.pi as usize) {
            out.push(Violation::LambdaNotInCoset { k, pi: row.pi });
        }
        if row.l.degree() != Some(row.t) || row.l.coeff(0).is_zero() {
            out.push(Violation::DegreeMismatch { k, t: row.t });
        } else if row.t < block
            && tau_admissible(block, row.t, row.tau)
            && !membership(ctx, sys, k, row.t, row.tau, row.lambda, &row.l).unwrap_or(false)
        {
            out.push(Violation::NotInFamily { k });
        }
    }
    let values = input.coset_map();
    if !is_permutation_of_residues(&values, sys.d) {
        out.push(Violation::NotPermutation { values });
    }
    out
}

pub fn validate_input(ctx: &FieldCtx, sys: &CosetSystem, input: &AlgoInput) -> Result<()> {
    let v = violations(ctx, sys, input);
    if v.is_empty() {
        Ok(())
    } else {
        Err(Error::InvalidInput(v))
    }
}

/// A `B x d` matrix over F_{q^2}, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoeffMatrix {
    pub rows: usize,
    pub cols: usize,
    data: Vec<Gf>,
}

impl CoeffMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CoeffMatrix { rows, cols, data: vec![Gf::ZERO; rows * cols] }
    }

    pub fn get(&self, i: usize, j: usize) -> Gf {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Gf) {
        self.data[i * self.cols + j] = v;
    }

    /// `M` with column `k` the coefficients of `cols[k]`.
    pub fn from_columns(rows: usize, cols: &[Poly]) -> Self {
        let mut m = CoeffMatrix::zeros(rows, cols.len());
        for (k, c) in cols.iter().enumerate() {
            for i in 0..rows {
                m.set(i, k, c.coeff(i));
            }
        }
        m
    }

    pub fn column(&self, k: usize) -> Poly {
        Poly::new((0..self.rows).map(|i| self.get(i, k)).collect())
    }

    /// `a_{ij}` = coefficient of `X^{i + jB}` in `h`.
    pub fn from_h(sys: &CosetSystem, h: &Poly) -> Self {
        let (b, d) = (sys.block as usize, sys.d as usize);
        let mut a = CoeffMatrix::zeros(b, d);
        for i in 0..b {
            for j in 0..d {
                a.set(i, j, h.coeff(i + j * b));
            }
        }
        a
    }

    /// `h = sum a_{ij} X^{i + jB}`.
    pub fn to_h(&self) -> Poly {
        let b = self.rows;
        let mut v = vec![Gf::ZERO; self.rows * self.cols];
        for i in 0..self.rows {
            for j in 0..self.cols {
                v[i + j * b] = self.get(i, j);
            }
        }
        Poly::new(v)
    }

    /// `M_{ik} = sum_j a_{ij} eps^{jk}`.
    pub fn a_to_m(&self, ctx: &FieldCtx, sys: &CosetSystem) -> Self {
        self.transform(ctx, sys, 1, Gf::ONE)
    }

    /// `a_{ij} = d^{-1} sum_k M_{ik} eps^{-kj}`.
    pub fn m_to_a(&self, ctx: &FieldCtx, sys: &CosetSystem) -> Self {
        let d_inv = ctx.inv(ctx.from_int(sys.d as i64)).expect("d is prime to the characteristic");
        self.transform(ctx, sys, -1, d_inv)
    }

    fn transform(&self, ctx: &FieldCtx, sys: &CosetSystem, sign: i64, scale: Gf) -> Self {
        let d = self.cols;
        let mut out = CoeffMatrix::zeros(self.rows, d);
        for i in 0..self.rows {
            for k in 0..d {
                let mut acc = Gf::ZERO;
                for j in 0..d {
                    let w = sys.eps_pow(ctx, sign * (j * k) as i64);
                    acc = ctx.add(acc, ctx.mul(self.get(i, j), w));
                }
                out.set(i, k, ctx.mul(acc, scale));
            }
        }
        out
    }
}

/// The monomial behaviour `x^r h(x)^{q-1} = lambda x^e` on `A_k`, together
/// with the data `(s, t, tau)` that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProfileEntry {
    pub k: usize,
    pub s: usize,
    pub t: usize,
    pub tau: usize,
    pub lambda: Gf,
    pub pi: u64,
    pub e: i64,
}

/// The output of [`assemble`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PPCertificate {
    pub r: u64,
    pub d: u64,
    pub a: CoeffMatrix,
    pub h: Poly,
    /// `X^r h(X^{q-1})` reduced modulo `X^{q^2-1} - 1`.
    pub f: Poly,
    pub profile: Vec<ProfileEntry>,
}

/// `X^r h(X^{q-1}) mod (X^{q^2-1} - 1)`.
pub fn pp_from_h(ctx: &FieldCtx, h: &Poly, r: u64) -> Poly {
    h.compose_monomial_cyclic(ctx, r, ctx.q() - 1, ctx.order())
}

pub fn assemble(ctx: &FieldCtx, sys: &CosetSystem, input: &AlgoInput) -> Result<PPCertificate> {
    validate_input(ctx, sys, input)?;
    let block = sys.block as usize;
    let cols: Vec<Poly> = input.rows.iter().map(|row| row.l.shift(row.s)).collect();
    let m = CoeffMatrix::from_columns(block, &cols);
    let a = m.m_to_a(ctx, sys);
    let h = a.to_h();
    let f = pp_from_h(ctx, &h, input.r);
    let profile = input
        .rows
        .iter()
        .enumerate()
        .map(|(k, row)| ProfileEntry {
            k,
            s: row.s,
            t: row.t,
            tau: row.tau,
            lambda: row.lambda,
            pi: row.pi,
            e: row.exponent(input.r),
        })
        .collect();
    Ok(PPCertificate { r: input.r, d: input.d, a, h, f, profile })
}

/// Recovers the per-coset data of `h`, or `None` when `h` is not monomial on
/// some coset in the structured way (or vanishes on `mu_{q+1}`).
///
/// Twists are tried in the order `0, B - t, ..., t`; the first hit is kept.
pub fn monomial_profile(ctx: &FieldCtx, sys: &CosetSystem, h: &Poly, r: u64) -> Option<Vec<ProfileEntry>> {
    let q = ctx.q() as usize;
    let h = if h.degree().is_some_and(|deg| deg > q) { h.reduce_cyclic(ctx, q + 1) } else { h.clone() };
    let block = sys.block as usize;
    let m = CoeffMatrix::from_h(sys, &h).a_to_m(ctx, sys);
    let mut out = Vec::with_capacity(sys.d as usize);
    for k in 0..sys.d as usize {
        let (s, l) = m.column(k).strip_low();
        let t = l.degree()?;
        let hit = taus_for(block, t).into_iter().find_map(|tau| {
            let (p_part, q_part) = split(&l, block, tau)?;
            let lambda = p_part.self_dual_factor(ctx).ok()??;
            if let Some(qp) = q_part {
                if qp.self_dual_factor(ctx).ok()?? != ctx.mul(lambda, sys.eps_pow(ctx, k as i64)) {
                    return None;
                }
            }
            Some((tau, lambda))
        });
        let (tau, lambda) = hit?;
        if sys.cosets[k].iter().any(|&x| l.eval(ctx, x).is_zero()) {
            return None;
        }
        let pi = sys.index_of(lambda).ok()? as u64;
        out.push(ProfileEntry { k, s, t, tau, lambda, pi, e: exponent(r, s, t, tau) });
    }
    Some(out)
}

/// A random valid input for `(r, d)`: triples uniform over the admissible
/// set, `pi` built from a uniform permutation of `Z/d`, `lambda` uniform in
/// its coset and `L` uniform in its family.
pub fn sample_input<R: Rng + ?Sized>(ctx: &FieldCtx, sys: &CosetSystem, r: u64, rng: &mut R) -> Result<AlgoInput> {
    let q = ctx.q();
    if gcd(r as i64, q as i64 - 1) != 1 {
        return Err(Error::BadR { r, q });
    }
    let mut omega = omega_set(q, sys.d, r);
    let d = sys.d as usize;
    let mut dead: BTreeSet<(usize, usize)> = BTreeSet::new();
    'restart: loop {
        omega.retain(|&(_, t, tau)| !dead.contains(&(t, tau)));
        if omega.is_empty() {
            return Err(Error::EmptyOmega { r });
        }
        let triples: Vec<Triple> = (0..d).map(|_| *omega.choose(rng).unwrap()).collect();
        let mut sigma: Vec<u64> = (0..sys.d).collect();
        sigma.shuffle(rng);
        let mut rows = Vec::with_capacity(d);
        for (k, &(s, t, tau)) in triples.iter().enumerate() {
            let e = exponent(r, s, t, tau);
            let pi = modulo(sigma[k] as i64 - e * k as i64, sys.d);
            let lambda = *sys.cosets[pi as usize].choose(rng).unwrap();
            match sample_l(ctx, sys, k, t, tau, lambda, rng) {
                Ok(l) => rows.push(InputRow { s, t, tau, pi, lambda, l }),
                Err(Error::EmptyFamily { .. }) => {
                    dead.insert((t, tau));
                    continue 'restart;
                }
                Err(e) => return Err(e),
            }
        }
        return Ok(AlgoInput { r, d: sys.d, rows });
    }
}
