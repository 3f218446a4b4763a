//! The decomposition of mu_{q+1} into the cosets of mu_{(q+1)/d}.

use crate::error::{Error, Result};
use crate::field::{FieldCtx, Gf};

/// `A_k = { x in mu_{q+1} : x^{(q+1)/d} = eps^k }` for `k < d`.
#[derive(Clone, Debug)]
pub struct CosetSystem {
    pub q: u64,
    pub d: u64,
    /// `(q+1)/d`, the common size of the cosets.
    pub block: u64,
    /// `g^{(q^2-1)/d}`, of order exactly `d`.
    pub epsilon: Gf,
    pub cosets: Vec<Vec<Gf>>,
}

impl CosetSystem {
    pub fn new(ctx: &FieldCtx, d: u64) -> Result<Self> {
        let q = ctx.q();
        if d == 0 || !(q + 1).is_multiple_of(d) {
            return Err(Error::NotDivisor { n: d, of: q + 1 });
        }
        let block = (q + 1) / d;
        let epsilon = ctx.elem((ctx.order() / d) as i64);
        // g^{(q-1)j} lies in A_{j mod d}
        let mut cosets = vec![Vec::with_capacity(block as usize); d as usize];
        for j in 0..=q {
            cosets[(j % d) as usize].push(ctx.elem(((q - 1) * j) as i64));
        }
        Ok(CosetSystem { q, d, block, epsilon, cosets })
    }

    /// `eps^k` for any integer `k`.
    pub fn eps_pow(&self, ctx: &FieldCtx, k: i64) -> Gf {
        ctx.pow(self.epsilon, k)
    }

    /// The `k` with `x in A_k`.
    pub fn index_of(&self, x: Gf) -> Result<usize> {
        let e = x.log().ok_or_else(|| Error::NotInMu("0".into()))? as u64;
        if !e.is_multiple_of(self.q - 1) {
            return Err(Error::NotInMu(x.to_string()));
        }
        Ok(((e / (self.q - 1)) % self.d) as usize)
    }

    /// The representative `g^{(q-1)k}` of `A_k`.
    pub fn base_point(&self, ctx: &FieldCtx, k: usize) -> Gf {
        ctx.elem(((self.q - 1) * k as u64) as i64)
    }

    /// The `j in [0, d)` with `x = eps^j`, if `x` is a power of `eps`.
    pub fn log_eps(&self, x: Gf) -> Option<u64> {
        let e = x.log()? as u64;
        let step = (self.q * self.q - 1) / self.d;
        e.is_multiple_of(step).then_some(e / step)
    }
}

/// Shorthand for [`CosetSystem::new`].
pub fn coset_system(ctx: &FieldCtx, d: u64) -> Result<CosetSystem> {
    CosetSystem::new(ctx, d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_decomposition() {
        let f = FieldCtx::new(5, 1).unwrap();
        let s = coset_system(&f, 1).unwrap();
        assert_eq!(s.cosets.len(), 1);
        let mut a0 = s.cosets[0].clone();
        a0.sort();
        assert_eq!(a0, f.mu_subgroup(6).unwrap());
        assert_eq!(s.epsilon, Gf::ONE);
    }

    #[test]
    fn definition_by_power_map() {
        for (p, m) in [(5u64, 1u32), (7, 1), (2, 3), (3, 2)] {
            let f = FieldCtx::new(p, m).unwrap();
            let q = f.q();
            for d in crate::arith::divisors(q + 1) {
                let s = coset_system(&f, d).unwrap();
                assert_eq!(f.mult_order(s.epsilon), Some(d));
                let mut total = 0;
                for (k, ak) in s.cosets.iter().enumerate() {
                    assert_eq!(ak.len() as u64, s.block);
                    for &x in ak {
                        assert_eq!(f.pow(x, s.block as i64), s.eps_pow(&f, k as i64));
                        assert_eq!(s.index_of(x).unwrap(), k);
                        total += 1;
                    }
                }
                assert_eq!(total, q + 1);
                let mut a0 = s.cosets[0].clone();
                a0.sort();
                assert_eq!(a0, f.mu_subgroup(s.block).unwrap());
            }
        }
    }

    #[test]
    fn example_field_cosets() {
        let opts = crate::field::FieldOptions { modulus2: Some([13, 1]), ..Default::default() };
        let f = FieldCtx::with_options(47, 1, &opts).unwrap();
        let s = coset_system(&f, 6).unwrap();
        assert_eq!(s.epsilon, f.elem(46 * 8));
        assert!(s.cosets.iter().all(|a| a.len() == 8));
    }

    #[test]
    fn q5_d3_split_and_errors() {
        let f = FieldCtx::new(5, 1).unwrap();
        let s = coset_system(&f, 3).unwrap();
        let mut counts = [0; 3];
        for x in f.mu_subgroup(6).unwrap() {
            counts[s.index_of(x).unwrap()] += 1;
        }
        assert_eq!(counts, [2, 2, 2]);
        assert_eq!(s.index_of(Gf::ONE).unwrap(), 0);
        assert!(matches!(s.index_of(f.gamma()), Err(Error::NotInMu(_))));
        assert!(matches!(coset_system(&f, 4), Err(Error::NotDivisor { .. })));
        // any x with x^{(q+1)/d} = eps is in A_1
        for x in f.mu_subgroup(6).unwrap() {
            if f.pow(x, 2) == s.epsilon {
                assert_eq!(s.index_of(x).unwrap(), 1);
            }
        }
    }
}
