//! Integer helpers shared by the field, coset and counting code.

pub fn gcd(a: i64, b: i64) -> u64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors in increasing order.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn divisors(n: u64) -> Vec<u64> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

/// Least non-negative residue of `a` modulo `m`.
pub fn modulo(a: i64, m: u64) -> u64 {
    a.rem_euclid(m as i64) as u64
}

/// Whether `values` (already reduced mod `n`) hit every residue exactly once.
pub fn is_permutation_of_residues(values: &[u64], n: u64) -> bool {
    if values.len() as u64 != n {
        return false;
    }
    let mut seen = vec![false; n as usize];
    for &v in values {
        let v = v as usize;
        if v >= seen.len() || seen[v] {
            return false;
        }
        seen[v] = true;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gcd_handles_signs_and_zero() {
        assert_eq!(gcd(-3, 6), 3);
        assert_eq!(gcd(0, 8), 8);
        assert_eq!(gcd(5, 1), 1);
    }

    #[test]
    fn primes_and_factors() {
        assert!(is_prime(47));
        assert!(!is_prime(49));
        assert_eq!(prime_factors(2208), vec![2, 3, 23]);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
    }

    #[test]
    fn residue_permutation() {
        assert!(is_permutation_of_residues(&[0, 3, 1, 4, 2, 5], 6));
        assert!(!is_permutation_of_residues(&[0, 3, 3, 4, 2, 5], 6));
    }
}
