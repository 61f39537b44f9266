use malachite::num::arithmetic::traits::{DivExact, DivisibleBy};
use malachite::Natural;

use crate::error::{Error, Result};

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &SMALL {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Pollard rho (Brent variant) on an odd composite.
fn rho(n: u64) -> u64 {
    let mut c = 1u64;
    loop {
        let f = |x: u64| (mul_mod(x, x, n) + c) % n;
        let (mut x, mut y, mut g) = (2u64, 2u64, 1u64);
        while g == 1 {
            x = f(x);
            y = f(f(y));
            g = gcd(x.abs_diff(y), n);
        }
        if g != n {
            return g;
        }
        c += 1;
    }
}

/// Distinct prime factors of `n`, ascending.
pub fn prime_factors_u64(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut stack = vec![n];
    while let Some(mut m) = stack.pop() {
        if m <= 1 {
            continue;
        }
        for p in [2u64, 3, 5, 7, 11, 13] {
            if m % p == 0 {
                out.push(p);
                while m % p == 0 {
                    m /= p;
                }
            }
        }
        if m == 1 {
            continue;
        }
        if is_prime(m) {
            out.push(m);
            continue;
        }
        let f = rho(m);
        stack.push(f);
        stack.push(m / f);
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Distinct prime factors of an arbitrary natural number. Cofactors that
/// exceed 64 bits after trial division are reported as undecided.
pub fn prime_factors(n: &Natural) -> Result<Vec<u64>> {
    if let Ok(small) = u64::try_from(n) {
        return Ok(prime_factors_u64(small));
    }
    let mut m = n.clone();
    let mut out = Vec::new();
    let mut p = 2u64;
    while p < 100_000 {
        let pn = Natural::from(p);
        if (&m).divisible_by(&pn) {
            out.push(p);
            while (&m).divisible_by(&pn) {
                m = m.div_exact(&pn);
            }
            if let Ok(small) = u64::try_from(&m) {
                out.extend(prime_factors_u64(small));
                out.sort_unstable();
                out.dedup();
                return Ok(out);
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    Err(Error::Undecided(format!(
        "cannot factor {}-digit cofactor",
        m.to_string().len()
    )))
}

/// The first `k` primes at or above `start`.
pub fn primes_from(start: u64, k: usize) -> Vec<u64> {
    (start..).filter(|&n| is_prime(n)).take(k).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        assert!(is_prime(2));
        assert!(is_prime(1_000_000_007));
        assert!(!is_prime(1));
        assert!(!is_prime(561));
        assert!(is_prime(18_446_744_073_709_551_557));
    }

    #[test]
    fn factorisation() {
        assert_eq!(prime_factors_u64(360), vec![2, 3, 5]);
        assert_eq!(
            prime_factors_u64(1_000_000_007 * 998_244_353),
            vec![998_244_353, 1_000_000_007]
        );
        let big = Natural::from(1u64 << 40) * Natural::from(1u64 << 40) * Natural::from(3u32);
        assert_eq!(prime_factors(&big).unwrap(), vec![2, 3]);
    }
}
