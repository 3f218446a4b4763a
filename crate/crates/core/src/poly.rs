//! Dense univariate polynomials over F_{q^2}.

use crate::error::{Error, Result};
use crate::field::{FieldCtx, Gf};

/// Coefficients low to high, never with a trailing zero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Gf>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly { coeffs: vec![Gf::ONE] }
    }

    pub fn constant(c: Gf) -> Poly {
        Poly::new(vec![c])
    }

    /// `c X^n`.
    pub fn monomial(c: Gf, n: usize) -> Poly {
        let mut v = vec![Gf::ZERO; n + 1];
        v[n] = c;
        Poly::new(v)
    }

    pub fn new(mut coeffs: Vec<Gf>) -> Poly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    /// Builds from `(exponent, coefficient)` pairs, summing repeated exponents.
    pub fn from_terms(ctx: &FieldCtx, terms: &[(usize, Gf)]) -> Poly {
        let n = terms.iter().map(|t| t.0 + 1).max().unwrap_or(0);
        let mut v = vec![Gf::ZERO; n];
        for &(e, c) in terms {
            v[e] = ctx.add(v[e], c);
        }
        Poly::new(v)
    }

    pub fn coeffs(&self) -> &[Gf] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> Gf {
        self.coeffs.get(i).copied().unwrap_or(Gf::ZERO)
    }

    pub fn leading(&self) -> Gf {
        self.coeffs.last().copied().unwrap_or(Gf::ZERO)
    }

    /// Exponents with nonzero coefficient, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.coeffs.len()).filter(|&i| !self.coeffs[i].is_zero()).collect()
    }

    /// Smallest exponent with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// `self / X^v` where `v` is the valuation.
    pub fn strip_low(&self) -> (usize, Poly) {
        match self.valuation() {
            None => (0, Poly::zero()),
            Some(v) => (v, Poly { coeffs: self.coeffs[v..].to_vec() }),
        }
    }

    pub fn add(&self, ctx: &FieldCtx, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|i| ctx.add(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn sub(&self, ctx: &FieldCtx, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|i| ctx.sub(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn scale(&self, ctx: &FieldCtx, c: Gf) -> Poly {
        Poly::new(self.coeffs.iter().map(|&a| ctx.mul(a, c)).collect())
    }

    /// `X^n * self`.
    pub fn shift(&self, n: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![Gf::ZERO; n];
        v.extend_from_slice(&self.coeffs);
        Poly { coeffs: v }
    }

    pub fn mul(&self, ctx: &FieldCtx, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![Gf::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                v[i + j] = ctx.add(v[i + j], ctx.mul(a, b));
            }
        }
        Poly::new(v)
    }

    /// Quotient and remainder.
    pub fn div_rem(&self, ctx: &FieldCtx, divisor: &Poly) -> Result<(Poly, Poly)> {
        let db = divisor.degree().ok_or(Error::DivisionByZero)?;
        let lead_inv = ctx.inv(divisor.leading()).unwrap();
        let mut rem = self.coeffs.clone();
        if rem.len() <= db {
            return Ok((Poly::zero(), self.clone()));
        }
        let mut quo = vec![Gf::ZERO; rem.len() - db];
        for top in (db..rem.len()).rev() {
            let c = rem[top];
            if c.is_zero() {
                continue;
            }
            let f = ctx.mul(c, lead_inv);
            quo[top - db] = f;
            for (i, &b) in divisor.coeffs.iter().enumerate() {
                let idx = top - db + i;
                rem[idx] = ctx.sub(rem[idx], ctx.mul(f, b));
            }
        }
        rem.truncate(db);
        Ok((Poly::new(quo), Poly::new(rem)))
    }

    pub fn monic(&self, ctx: &FieldCtx) -> Poly {
        match ctx.inv(self.leading()) {
            None => Poly::zero(),
            Some(li) => self.scale(ctx, li),
        }
    }

    /// Horner evaluation.
    pub fn eval(&self, ctx: &FieldCtx, x: Gf) -> Gf {
        self.coeffs.iter().rev().fold(Gf::ZERO, |acc, &c| ctx.add(ctx.mul(acc, x), c))
    }

    /// Coefficient-wise Frobenius.
    pub fn conj(&self, ctx: &FieldCtx) -> Poly {
        Poly { coeffs: self.coeffs.iter().map(|&c| ctx.frobenius(c)).collect() }
    }

    /// `X^{deg f} * conj(f)(1/X)`.
    pub fn dual(&self, ctx: &FieldCtx) -> Result<Poly> {
        if self.is_zero() {
            return Err(Error::ZeroPoly);
        }
        Ok(Poly::new(self.coeffs.iter().rev().map(|&c| ctx.frobenius(c)).collect()))
    }

    /// The `c` with `dual(f) = c f`, if any.
    pub fn self_dual_factor(&self, ctx: &FieldCtx) -> Result<Option<Gf>> {
        let dual = self.dual(ctx)?;
        // equal degree needs f(0) != 0
        if dual.degree() != self.degree() {
            return Ok(None);
        }
        let c = ctx.div(dual.leading(), self.leading());
        Ok((self.scale(ctx, c) == dual).then_some(c))
    }

    /// `self mod (X^n - 1)`.
    pub fn reduce_cyclic(&self, ctx: &FieldCtx, n: usize) -> Poly {
        assert!(n >= 1, "cyclic reduction needs n >= 1");
        let mut v = vec![Gf::ZERO; n.min(self.coeffs.len())];
        for (i, &c) in self.coeffs.iter().enumerate() {
            let j = i % n;
            v[j] = ctx.add(v[j], c);
        }
        Poly::new(v)
    }

    /// `sum_i a_i X^{(i*step + offset) mod n}`, i.e. `X^offset * self(X^step)` reduced
    /// modulo `X^n - 1`.
    pub fn compose_monomial_cyclic(&self, ctx: &FieldCtx, offset: u64, step: u64, n: u64) -> Poly {
        let mut v = vec![Gf::ZERO; n as usize];
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = ((offset as u128 + i as u128 * step as u128) % n as u128) as usize;
            v[e] = ctx.add(v[e], c);
        }
        Poly::new(v)
    }

    /// Readable form `g^e + g^e*X^1 + ...`, skipping zero terms.
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if i == 0 {
                parts.push(c.to_string());
            } else {
                parts.push(format!("{c}*X^{i}"));
            }
        }
        parts.join(" + ")
    }

    /// Inverse of [`Poly::to_text`]; terms may appear in any order and may
    /// omit the coefficient (`X^3`) or the power (`g^2*X`, `g^5`).
    pub fn parse_text(ctx: &FieldCtx, s: &str) -> Result<Poly> {
        let t = s.trim();
        if t == "0" {
            return Ok(Poly::zero());
        }
        let mut terms = Vec::new();
        for raw in t.split(" + ") {
            let term = raw.trim();
            let bad = || Error::Parse(format!("bad term {term:?}"));
            let (coef, pow) = match term.find('X') {
                None => (term, 0usize),
                Some(pos) => {
                    let coef = term[..pos].trim_end_matches('*');
                    let rest = &term[pos + 1..];
                    let pow = if rest.is_empty() {
                        1
                    } else {
                        rest.strip_prefix('^').ok_or_else(bad)?.parse().map_err(|_| bad())?
                    };
                    (coef, pow)
                }
            };
            let c = if coef.is_empty() { Gf::ONE } else { ctx.parse_elem(coef)? };
            terms.push((pow, c));
        }
        Ok(Poly::from_terms(ctx, &terms))
    }

    /// `[e0, e1, ...]` exponent form, `None` for zero coefficients.
    pub fn to_logs(&self) -> Vec<Option<u32>> {
        self.coeffs.iter().map(|c| c.log()).collect()
    }

    pub fn from_logs(ctx: &FieldCtx, logs: &[Option<i64>]) -> Poly {
        Poly::new(logs.iter().map(|e| e.map_or(Gf::ZERO, |e| ctx.elem(e))).collect())
    }
}

/// Monic gcd by Euclid's algorithm.
pub fn gcd(ctx: &FieldCtx, f: &Poly, g: &Poly) -> Result<Poly> {
    if f.is_zero() && g.is_zero() {
        return Err(Error::BothZero);
    }
    let (mut a, mut b) = (f.clone(), g.clone());
    while !b.is_zero() {
        let (_, r) = a.div_rem(ctx, &b)?;
        a = b;
        b = r;
    }
    Ok(a.monic(ctx))
}

/// `X^n - c`.
pub fn binomial_modulus(ctx: &FieldCtx, n: usize, c: Gf) -> Poly {
    Poly::from_terms(ctx, &[(0, ctx.neg(c)), (n, Gf::ONE)])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f25() -> FieldCtx {
        FieldCtx::new(5, 1).unwrap()
    }

    #[test]
    fn conj_examples() {
        let f = f25();
        // g X + g^5  ->  g^5 X + g^25 = g^5 X + g
        let p = Poly::new(vec![f.elem(5), f.elem(1)]);
        assert_eq!(p.conj(&f), Poly::new(vec![f.elem(1), f.elem(5)]));
        assert!(Poly::zero().conj(&f).is_zero());
        let base = Poly::new(vec![f.from_int(2), f.from_int(3)]);
        assert_eq!(base.conj(&f), base);
    }

    #[test]
    fn dual_examples() {
        let f = f25();
        let a = f.elem(7);
        assert_eq!(Poly::constant(a).dual(&f).unwrap(), Poly::constant(f.frobenius(a)));
        let p = Poly::new(vec![f.elem(3), f.elem(11)]);
        assert_eq!(p.dual(&f).unwrap(), Poly::new(vec![f.elem(55 % 24), f.elem(15)]));
        assert_eq!(Poly::zero().dual(&f), Err(Error::ZeroPoly));
    }

    #[test]
    fn self_dual_linear() {
        let f = f25();
        assert_eq!(Poly::one().self_dual_factor(&f).unwrap(), Some(Gf::ONE));
        for u in f.elements().skip(1) {
            let p = Poly::new(vec![u, Gf::ONE]);
            let c = p.self_dual_factor(&f).unwrap();
            assert_eq!(c.is_some(), f.in_mu(u, 6));
            if let Some(c) = c {
                assert!(f.in_mu(c, 6));
            }
        }
    }

    #[test]
    fn gcd_examples() {
        let f = f25();
        let one = Gf::ONE;
        let m1 = f.neg(one);
        let x2m1 = Poly::new(vec![m1, Gf::ZERO, one]);
        let xm1 = Poly::new(vec![m1, one]);
        assert_eq!(gcd(&f, &x2m1, &xm1).unwrap(), xm1);
        let g3 = Poly::new(vec![f.elem(4), f.elem(9)]);
        assert_eq!(gcd(&f, &g3, &Poly::zero()).unwrap(), g3.monic(&f));
        assert_eq!(gcd(&f, &Poly::zero(), &Poly::zero()), Err(Error::BothZero));
    }

    #[test]
    fn class4_instance_is_coprime() {
        // q = 11: 1 + a X^4 + a^2 X^2 with a^3 = -1
        let f = FieldCtx::new(11, 1).unwrap();
        let xq1 = binomial_modulus(&f, 12, Gf::ONE);
        let mut checked = 0;
        for a in f.elements().skip(1) {
            if f.pow(a, 3) != f.neg(Gf::ONE) {
                continue;
            }
            for sign in [Gf::ONE, f.neg(Gf::ONE)] {
                let h = Poly::from_terms(&f, &[(0, Gf::ONE), (4, a), (2, f.mul(sign, f.mul(a, a)))]);
                assert_eq!(gcd(&f, &h, &xq1).unwrap(), Poly::one());
                checked += 1;
            }
        }
        assert_eq!(checked, 6);
    }

    #[test]
    fn cyclic_reduction() {
        let f = f25();
        assert_eq!(Poly::monomial(Gf::ONE, 6).reduce_cyclic(&f, 6), Poly::one());
        // X^{2(q-1)} and X^{8(q-1)} agree mod X^{q^2-1} - 1 since 2 = 8 mod 6
        let a = Poly::monomial(Gf::ONE, 8).reduce_cyclic(&f, 24);
        let b = Poly::monomial(Gf::ONE, 32).reduce_cyclic(&f, 24);
        assert_eq!(a, b);
        let p = Poly::new(vec![f.elem(1), f.elem(2), f.elem(3)]);
        let sum = p.coeffs().iter().fold(Gf::ZERO, |s, &c| f.add(s, c));
        assert_eq!(p.eval(&f, Gf::ONE), sum);
    }

    #[test]
    fn division_identity() {
        let f = f25();
        let a = Poly::new((0..7).map(|i| f.elem(i * 5 + 1)).collect());
        let b = Poly::new(vec![f.elem(3), Gf::ZERO, f.elem(2)]);
        let (qq, r) = a.div_rem(&f, &b).unwrap();
        assert_eq!(qq.mul(&f, &b).add(&f, &r), a);
        assert!(r.degree().unwrap_or(0) < 2);
    }

    #[test]
    fn text_round_trip() {
        let f = f25();
        let p = Poly::new(vec![f.elem(3), Gf::ZERO, Gf::ONE, f.elem(20)]);
        let s = p.to_text();
        assert_eq!(s, "g^3 + g^0*X^2 + g^20*X^3");
        assert_eq!(Poly::parse_text(&f, &s).unwrap(), p);
        assert_eq!(Poly::parse_text(&f, "X^2 + g^3 + g^20*X^3").unwrap(), p);
        assert_eq!(Poly::parse_text(&f, "0").unwrap(), Poly::zero());
        let logs: Vec<Option<i64>> = p.to_logs().iter().map(|e| e.map(i64::from)).collect();
        assert_eq!(Poly::from_logs(&f, &logs), p);
    }
}
