//! Arithmetic in F_{q^2}, with F_q = F_{p^m} realized as the fixed field of
//! the Frobenius map.
//!
//! Every nonzero element is stored as its discrete logarithm with respect to
//! a fixed primitive element `g`. Products and powers are exponent arithmetic
//! modulo `q^2 - 1`; sums go through a Zech logarithm table
//! `zech[e] = log(1 + g^e)`.
//!
//! Concretely F_q is `F_p[y]/(c(y))` for the least monic irreducible `c` of
//! degree `m` (ordered by base-`p` integer encoding of its lower
//! coefficients), and F_{q^2} is `F_q[x]/(x^2 + c1 x + c0)`. An element
//! `u + v x` has basis index `u + q v`, where `u, v` are the base-`p`
//! encodings of the F_q coordinates.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{is_prime, prime_factors};
use crate::error::{Error, Result};

/// Default upper bound on `q^2`, the number of elements of the big field.
pub const DEFAULT_CAP: u64 = 1 << 22;

const NONE: u32 = u32::MAX;

/// An element of F_{q^2}: zero, or `g^e` with `0 <= e < q^2 - 1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gf(u32);

impl Gf {
    pub const ZERO: Gf = Gf(NONE);
    pub const ONE: Gf = Gf(0);

    /// Raw constructor; `e` must already be reduced modulo `q^2 - 1`.
    pub const fn from_log(e: u32) -> Gf {
        Gf(e)
    }

    pub fn is_zero(self) -> bool {
        self.0 == NONE
    }

    /// Discrete logarithm, `None` for zero.
    pub fn log(self) -> Option<u32> {
        if self.is_zero() {
            None
        } else {
            Some(self.0)
        }
    }
}

impl serde::Serialize for Gf {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl Default for Gf {
    fn default() -> Self {
        Gf::ZERO
    }
}

impl fmt::Debug for Gf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Gf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.log() {
            None => write!(f, "0"),
            Some(e) => write!(f, "g^{e}"),
        }
    }
}

/// F_q = F_p[y]/(c(y)), elements encoded as base-`p` integers.
#[derive(Clone, Debug)]
struct BaseField {
    p: u32,
    m: u32,
    q: u32,
    /// Monic modulus, low to high, length `m + 1`. Unused when `m == 1`.
    modulus: Vec<u32>,
}

impl BaseField {
    fn new(p: u32, m: u32) -> Self {
        let q = p.pow(m);
        let modulus = if m == 1 {
            vec![0, 1]
        } else {
            least_irreducible(p, m as usize)
        };
        BaseField { p, m, q, modulus }
    }

    fn digits(&self, mut x: u32) -> Vec<u32> {
        let mut d = Vec::with_capacity(self.m as usize);
        for _ in 0..self.m {
            d.push(x % self.p);
            x /= self.p;
        }
        d
    }

    fn encode(&self, d: &[u32]) -> u32 {
        d.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    fn add(&self, a: u32, b: u32) -> u32 {
        if self.m == 1 {
            return (a + b) % self.p;
        }
        let (da, db) = (self.digits(a), self.digits(b));
        let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
        self.encode(&s)
    }

    fn neg(&self, a: u32) -> u32 {
        if self.m == 1 {
            return (self.p - a % self.p) % self.p;
        }
        let d: Vec<u32> = self.digits(a).iter().map(|&x| (self.p - x) % self.p).collect();
        self.encode(&d)
    }

    fn mul(&self, a: u32, b: u32) -> u32 {
        let p = self.p as u64;
        if self.m == 1 {
            return ((a as u64 * b as u64) % p) as u32;
        }
        let m = self.m as usize;
        let (da, db) = (self.digits(a), self.digits(b));
        let mut prod = vec![0u64; 2 * m - 1];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p;
            }
        }
        for top in (m..prod.len()).rev() {
            let c = prod[top];
            if c == 0 {
                continue;
            }
            prod[top] = 0;
            for (i, &mc) in self.modulus[..m].iter().enumerate() {
                let idx = top - m + i;
                prod[idx] = (prod[idx] + c * (p - mc as u64)) % p;
            }
        }
        let low: Vec<u32> = prod[..m].iter().map(|&x| x as u32).collect();
        self.encode(&low)
    }
}

/// Remainder of `a` modulo the monic `b` over F_p (coefficients low to high).
fn fp_poly_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u64> = a.iter().map(|&x| x as u64).collect();
    let db = b.len() - 1;
    let p64 = p as u64;
    while r.len() > db {
        let c = r.pop().unwrap() % p64;
        if c != 0 {
            let shift = r.len() - db;
            for (i, &bc) in b[..db].iter().enumerate() {
                r[shift + i] = (r[shift + i] + c * (p64 - bc as u64)) % p64;
            }
        }
    }
    while r.last() == Some(&0) {
        r.pop();
    }
    r.into_iter().map(|x| x as u32).collect()
}

fn least_irreducible(p: u32, m: usize) -> Vec<u32> {
    let count = (p as u64).pow(m as u32);
    'candidate: for code in 0..count {
        let mut poly = Vec::with_capacity(m + 1);
        let mut c = code;
        for _ in 0..m {
            poly.push((c % p as u64) as u32);
            c /= p as u64;
        }
        poly.push(1);
        for deg in 1..=m / 2 {
            for dcode in 0..(p as u64).pow(deg as u32) {
                let mut div = Vec::with_capacity(deg + 1);
                let mut c = dcode;
                for _ in 0..deg {
                    div.push((c % p as u64) as u32);
                    c /= p as u64;
                }
                div.push(1);
                if fp_poly_rem(&poly, &div, p).is_empty() {
                    continue 'candidate;
                }
            }
        }
        return poly;
    }
    unreachable!("irreducible polynomials exist in every degree")
}

/// Construction options for [`FieldCtx`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FieldOptions {
    /// `[c0, c1]` for the modulus `x^2 + c1 x + c0` over F_q.
    pub modulus2: Option<[u32; 2]>,
    /// Basis coordinates `[u, v]` of the generator `u + v x`.
    pub gamma: Option<[u32; 2]>,
    pub cap: u64,
}

impl Default for FieldOptions {
    fn default() -> Self {
        FieldOptions { modulus2: None, gamma: None, cap: DEFAULT_CAP }
    }
}

/// Immutable arithmetic context for F_p within F_q within F_{q^2}.
#[derive(Clone, Debug)]
pub struct FieldCtx {
    base: BaseField,
    q: u32,
    order: u32,
    modulus2: [u32; 2],
    gamma: [u32; 2],
    /// exponent -> basis index
    exp: Vec<u32>,
    /// basis index -> exponent (index 0 holds NONE)
    log: Vec<u32>,
    zech: Vec<u32>,
    neg_one: u32,
}

impl FieldCtx {
    /// F_{q^2} with q = p^m, default modulus and generator.
    pub fn new(p: u64, m: u32) -> Result<Self> {
        Self::with_options(p, m, &FieldOptions::default())
    }

    pub fn with_options(p: u64, m: u32, opts: &FieldOptions) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if m == 0 {
            return Err(Error::ZeroDegree);
        }
        let size = (p as u128).checked_pow(2 * m).unwrap_or(u128::MAX);
        if size > opts.cap as u128 || size > u32::MAX as u128 / 2 {
            return Err(Error::CapExceeded { size: size.min(u64::MAX as u128) as u64, cap: opts.cap });
        }
        let base = BaseField::new(p as u32, m);
        let q = base.q;
        let order = q * q - 1;

        let (modulus2, gamma) = match opts.modulus2 {
            Some(md) => {
                if md[0] >= q || md[1] >= q || !quadratic_irreducible(&base, md) {
                    return Err(Error::ReducibleModulus(fmt_quadratic(md)));
                }
                let g = opts.gamma.unwrap_or([0, 1]);
                if g[0] >= q || g[1] >= q || !is_generator(&base, md, g, order) {
                    return Err(Error::NotPrimitive(format!("{}+{}x", g[0], g[1])));
                }
                (md, g)
            }
            None => {
                let md = default_modulus(&base, order);
                let g = opts.gamma.unwrap_or([0, 1]);
                if g[0] >= q || g[1] >= q || !is_generator(&base, md, g, order) {
                    return Err(Error::NotPrimitive(format!("{}+{}x", g[0], g[1])));
                }
                (md, g)
            }
        };

        let n = order as usize;
        let size = (q as usize) * (q as usize);
        let mut exp = vec![0u32; n];
        let mut log = vec![NONE; size];
        let mut cur = [1u32, 0u32];
        for (e, slot) in exp.iter_mut().enumerate() {
            let idx = cur[0] + q * cur[1];
            debug_assert_eq!(log[idx as usize], NONE);
            *slot = idx;
            log[idx as usize] = e as u32;
            cur = quad_mul(&base, modulus2, cur, gamma);
        }
        debug_assert_eq!(cur, [1, 0]);

        let one = 1 % base.p;
        let zech = exp
            .iter()
            .map(|&idx| {
                let (u, v) = (idx % q, idx / q);
                let w = base.add(u, one) + q * v;
                if w == 0 {
                    NONE
                } else {
                    log[w as usize]
                }
            })
            .collect();
        let neg_one = if p == 2 { 0 } else { order / 2 };

        Ok(FieldCtx { base, q, order, modulus2, gamma, exp, log, zech, neg_one })
    }

    pub fn p(&self) -> u64 {
        self.base.p as u64
    }

    pub fn m(&self) -> u32 {
        self.base.m
    }

    pub fn q(&self) -> u64 {
        self.q as u64
    }

    /// `q^2 - 1`, the order of the multiplicative group.
    pub fn order(&self) -> u64 {
        self.order as u64
    }

    /// `[c0, c1]` of the defining quadratic `x^2 + c1 x + c0`.
    pub fn modulus2(&self) -> [u32; 2] {
        self.modulus2
    }

    /// Basis coordinates of the generator `g`.
    pub fn gamma_basis(&self) -> [u32; 2] {
        self.gamma
    }

    /// Modulus of F_q over F_p, low to high.
    pub fn base_modulus(&self) -> &[u32] {
        &self.base.modulus
    }

    pub fn zero(&self) -> Gf {
        Gf::ZERO
    }

    pub fn one(&self) -> Gf {
        Gf::ONE
    }

    pub fn gamma(&self) -> Gf {
        Gf(1 % self.order)
    }

    /// `g^e` for any integer `e`.
    pub fn elem(&self, e: i64) -> Gf {
        Gf(e.rem_euclid(self.order as i64) as u32)
    }

    /// Image of an integer under Z -> F_p.
    pub fn from_int(&self, k: i64) -> Gf {
        let r = k.rem_euclid(self.base.p as i64) as u32;
        self.elem_at_index(r)
    }

    fn elem_at_index(&self, idx: u32) -> Gf {
        Gf(self.log[idx as usize])
    }

    /// `u + v x` from base-`p` encoded F_q coordinates.
    pub fn from_basis(&self, u: u32, v: u32) -> Result<Gf> {
        if u >= self.q || v >= self.q {
            return Err(Error::RangeError(format!("basis coordinates ({u}, {v}) exceed q = {}", self.q)));
        }
        Ok(self.elem_at_index(u + self.q * v))
    }

    pub fn to_basis(&self, x: Gf) -> (u32, u32) {
        match x.log() {
            None => (0, 0),
            Some(e) => {
                let idx = self.exp[e as usize];
                (idx % self.q, idx / self.q)
            }
        }
    }

    pub fn add(&self, a: Gf, b: Gf) -> Gf {
        if a.is_zero() {
            return b;
        }
        if b.is_zero() {
            return a;
        }
        let n = self.order;
        let diff = if b.0 >= a.0 { b.0 - a.0 } else { b.0 + n - a.0 };
        let z = self.zech[diff as usize];
        if z == NONE {
            Gf::ZERO
        } else {
            Gf(((a.0 as u64 + z as u64) % n as u64) as u32)
        }
    }

    pub fn neg(&self, a: Gf) -> Gf {
        self.mul(a, Gf(self.neg_one))
    }

    pub fn sub(&self, a: Gf, b: Gf) -> Gf {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Gf, b: Gf) -> Gf {
        if a.is_zero() || b.is_zero() {
            return Gf::ZERO;
        }
        Gf(((a.0 as u64 + b.0 as u64) % self.order as u64) as u32)
    }

    pub fn inv(&self, a: Gf) -> Option<Gf> {
        a.log().map(|e| Gf((self.order - e) % self.order))
    }

    /// `a / b`.
    ///
    /// # Panics
    ///
    /// Panics if `b` is zero.
    pub fn div(&self, a: Gf, b: Gf) -> Gf {
        let binv = self.inv(b).expect("division by zero in F_{q^2}");
        self.mul(a, binv)
    }

    /// `a^k` for signed `k`; `0^0 = 1`.
    ///
    /// # Panics
    ///
    /// Panics on a negative power of zero.
    pub fn pow(&self, a: Gf, k: i64) -> Gf {
        match a.log() {
            None => {
                assert!(k >= 0, "negative power of zero");
                if k == 0 {
                    Gf::ONE
                } else {
                    Gf::ZERO
                }
            }
            Some(e) => {
                let n = self.order as i128;
                Gf(((e as i128 * k as i128).rem_euclid(n)) as u32)
            }
        }
    }

    /// `a^q`.
    pub fn frobenius(&self, a: Gf) -> Gf {
        self.pow(a, self.q as i64)
    }

    pub fn is_in_base(&self, a: Gf) -> bool {
        match a.log() {
            None => true,
            Some(e) => e % (self.q + 1) == 0,
        }
    }

    /// Whether `a^n = 1`.
    pub fn in_mu(&self, a: Gf, n: u64) -> bool {
        !a.is_zero() && self.pow(a, n as i64) == Gf::ONE
    }

    /// Multiplicative order of a nonzero element.
    pub fn mult_order(&self, a: Gf) -> Option<u64> {
        let e = a.log()? as u64;
        Some(self.order() / crate::arith::gcd(e as i64, self.order() as i64))
    }

    /// The subgroup of order `n`, listed as `g^{0}, g^{N/n}, g^{2N/n}, ...`.
    pub fn mu_subgroup(&self, n: u64) -> Result<Vec<Gf>> {
        if n == 0 || !self.order().is_multiple_of(n) {
            return Err(Error::NotDivisor { n, of: self.order() });
        }
        let step = self.order() / n;
        Ok((0..n).map(|i| Gf((i * step) as u32)).collect())
    }

    /// All elements, zero first, then `g^0, g^1, ...`.
    pub fn elements(&self) -> impl Iterator<Item = Gf> + '_ {
        std::iter::once(Gf::ZERO).chain((0..self.order).map(Gf))
    }

    /// Basis form `u+vg` with base-`p` encoded coordinates, `g` standing for
    /// the root `x` of the modulus (the generator unless overridden).
    pub fn format_basis(&self, x: Gf) -> String {
        let (u, v) = self.to_basis(x);
        format!("{u}+{v}g")
    }

    /// Parses `0`, `1`, `g`, `g^e` (any integer `e`), or basis forms such as
    /// `11+37g`, `3g`, `16`.
    pub fn parse_elem(&self, s: &str) -> Result<Gf> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::Parse(format!("bad element {s:?}"));
        if t.is_empty() {
            return Err(bad());
        }
        if let Some(rest) = t.strip_prefix("g^") {
            let rest = rest.trim_start_matches('(').trim_end_matches(')');
            let e: i64 = rest.parse().map_err(|_| bad())?;
            return Ok(self.elem(e));
        }
        if t == "g" {
            return Ok(self.gamma());
        }
        // basis form: [u][+][v g]
        let (u_part, v_part) = if let Some(stripped) = t.strip_suffix('g') {
            match stripped.rfind('+') {
                Some(pos) => (&stripped[..pos], &stripped[pos + 1..]),
                None => ("", stripped),
            }
        } else {
            (t.as_str(), "")
        };
        let u: u32 = if u_part.is_empty() { 0 } else { u_part.parse().map_err(|_| bad())? };
        let v: u32 = if t.ends_with('g') {
            if v_part.is_empty() {
                1
            } else {
                v_part.parse().map_err(|_| bad())?
            }
        } else {
            0
        };
        self.from_basis(u, v)
    }
}

fn fmt_quadratic(md: [u32; 2]) -> String {
    format!("x^2+{}x+{}", md[1], md[0])
}

fn quad_mul(base: &BaseField, md: [u32; 2], a: [u32; 2], b: [u32; 2]) -> [u32; 2] {
    // (a0 + a1 x)(b0 + b1 x) with x^2 = -c1 x - c0
    let a0b0 = base.mul(a[0], b[0]);
    let cross = base.add(base.mul(a[0], b[1]), base.mul(a[1], b[0]));
    let a1b1 = base.mul(a[1], b[1]);
    let c0 = base.add(a0b0, base.neg(base.mul(a1b1, md[0])));
    let c1 = base.add(cross, base.neg(base.mul(a1b1, md[1])));
    [c0, c1]
}

fn quad_pow(base: &BaseField, md: [u32; 2], mut a: [u32; 2], mut k: u64) -> [u32; 2] {
    let mut acc = [1 % base.p, 0];
    while k > 0 {
        if k & 1 == 1 {
            acc = quad_mul(base, md, acc, a);
        }
        a = quad_mul(base, md, a, a);
        k >>= 1;
    }
    acc
}

fn quadratic_irreducible(base: &BaseField, md: [u32; 2]) -> bool {
    (0..base.q).all(|x| {
        let v = base.add(base.add(base.mul(x, x), base.mul(md[1], x)), md[0]);
        v != 0
    })
}

fn is_generator(base: &BaseField, md: [u32; 2], g: [u32; 2], order: u32) -> bool {
    let one = [1 % base.p, 0];
    if g == [0, 0] || quad_pow(base, md, g, order as u64) != one {
        return false;
    }
    prime_factors(order as u64)
        .into_iter()
        .all(|l| quad_pow(base, md, g, order as u64 / l) != one)
}

fn default_modulus(base: &BaseField, order: u32) -> [u32; 2] {
    for c1 in 0..base.q {
        for c0 in 0..base.q {
            let md = [c0, c1];
            if quadratic_irreducible(base, md) && is_generator(base, md, [0, 1], order) {
                return md;
            }
        }
    }
    unreachable!("a primitive quadratic exists over every finite field")
}
