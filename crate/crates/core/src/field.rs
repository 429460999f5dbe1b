//! Prime fields F_l and the small number-theory helpers shared by every module.

use crate::error::{Error, Result};

/// Largest supported modulus (exclusive).
pub const MAX_MODULUS: u64 = 1 << 16;

/// Below this modulus squares are detected by Euler's criterion, at or above it
/// by a precomputed table. Both paths agree.
const SQUARE_TABLE_THRESHOLD: u32 = 64;

/// Trial-division primality test.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 || n % 3 == 0 {
        return false;
    }
    let mut d = 5u64;
    while d * d <= n {
        if n % d == 0 || n % (d + 2) == 0 {
            return false;
        }
        d += 6;
    }
    true
}

/// All primes `<= n` (sieve of Eratosthenes).
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut k = i * i;
            while k <= n {
                composite[k] = true;
                k += i;
            }
        }
    }
    out
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = (acc as u128 * base as u128 % m as u128) as u64;
        }
        base = (base as u128 * base as u128 % m as u128) as u64;
        exp >>= 1;
    }
    acc
}

/// Legendre symbol of `a` modulo the odd prime `ell` via Euler's criterion.
pub fn legendre(a: i64, ell: u64) -> i8 {
    let r = a.rem_euclid(ell as i64) as u64;
    if r == 0 {
        return 0;
    }
    if pow_mod(r, (ell - 1) / 2, ell) == 1 {
        1
    } else {
        -1
    }
}

/// Kronecker symbol (a / p) for a prime p, including p = 2.
pub fn kronecker_prime(a: i64, p: u64) -> i8 {
    if p != 2 {
        return legendre(a, p);
    }
    if a % 2 == 0 {
        return 0;
    }
    match a.rem_euclid(8) {
        1 | 7 => 1,
        _ => -1,
    }
}

/// Square root modulo an odd prime (Tonelli-Shanks). `None` for non-residues.
pub fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    if a == 0 {
        return Some(0);
    }
    if p == 2 {
        return Some(a);
    }
    if pow_mod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        return Some(pow_mod(a, (p + 1) / 4, p));
    }
    let mut q = p - 1;
    let mut s = 0u32;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z = 2u64;
    while pow_mod(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mulm = |x: u64, y: u64| (x as u128 * y as u128 % p as u128) as u64;
    let mut m = s;
    let mut c = pow_mod(z, q, p);
    let mut t = pow_mod(a, q, p);
    let mut r = pow_mod(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0u32;
        let mut tt = t;
        while tt != 1 {
            tt = mulm(tt, tt);
            i += 1;
        }
        let b = pow_mod(c, 1u64 << (m - i - 1), p);
        m = i;
        c = mulm(b, b);
        t = mulm(t, c);
        r = mulm(r, b);
    }
    Some(r)
}

/// The field F_l for a prime l < 2^16. Elements are plain `u32` values in `[0, l)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeField {
    ell: u32,
    squares: Option<Vec<bool>>,
}

impl PrimeField {
    pub fn new(ell: u64) -> Result<Self> {
        if ell >= MAX_MODULUS {
            return Err(Error::ModulusOutOfRange(ell));
        }
        if !is_prime(ell) {
            return Err(Error::NotPrime(ell));
        }
        let ell = ell as u32;
        let squares = (ell >= SQUARE_TABLE_THRESHOLD).then(|| {
            let mut table = vec![false; ell as usize];
            for x in 0..ell as u64 {
                table[(x * x % ell as u64) as usize] = true;
            }
            table
        });
        Ok(Self { ell, squares })
    }

    #[inline]
    pub fn ell(&self) -> u32 {
        self.ell
    }

    #[inline]
    pub fn reduce(&self, x: i64) -> u32 {
        x.rem_euclid(self.ell as i64) as u32
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        ((a + b) % self.ell) as u32
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        ((a + self.ell - b) % self.ell) as u32
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        (self.ell - a) % self.ell
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        (a as u64 * b as u64 % self.ell as u64) as u32
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        pow_mod(a as u64, e, self.ell as u64) as u32
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: u32) -> Option<u32> {
        if a % self.ell == 0 {
            None
        } else {
            Some(self.pow(a, self.ell as u64 - 2))
        }
    }

    /// True for 0 and the nonzero squares.
    pub fn is_square(&self, a: u32) -> bool {
        let a = a % self.ell;
        if a == 0 || self.ell == 2 {
            return true;
        }
        match &self.squares {
            Some(table) => table[a as usize],
            None => self.pow(a, (self.ell as u64 - 1) / 2) == 1,
        }
    }

    pub fn legendre(&self, a: i64) -> i8 {
        if self.ell == 2 {
            return (a.rem_euclid(2) != 0) as i8;
        }
        let r = self.reduce(a);
        if r == 0 {
            0
        } else if self.is_square(r) {
            1
        } else {
            -1
        }
    }

    /// Smallest generator of the cyclic group F_l^*.
    pub fn generator(&self) -> u32 {
        let n = self.ell as u64 - 1;
        if n == 1 {
            return 1;
        }
        let factors = prime_factors(n);
        (2..self.ell)
            .find(|&g| factors.iter().all(|&f| self.pow(g, n / f) != 1))
            .expect("F_l^* is cyclic")
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: u32) -> u64 {
        let n = self.ell as u64 - 1;
        let mut ord = n;
        for f in prime_factors(n) {
            while ord % f == 0 && self.pow(a, ord / f) == 1 {
                ord /= f;
            }
        }
        ord
    }
}

/// Distinct prime factors, ascending.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
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

pub fn is_squarefree(n: i64) -> bool {
    if n == 0 {
        return false;
    }
    let mut m = n.unsigned_abs();
    let mut d = 2u64;
    while d * d <= m {
        if m % (d * d) == 0 {
            return false;
        }
        if m % d == 0 {
            m /= d;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality() {
        let small: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert_eq!(primes_up_to(30), small);
        assert_eq!(primes_up_to(10_000).len(), 1229);
        assert!(PrimeField::new(15).is_err());
        assert!(PrimeField::new(65_537).is_err());
    }

    #[test]
    fn legendre_examples() {
        assert_eq!(legendre(1, 5), 1);
        assert_eq!(legendre(0, 5), 0);
        assert_eq!(legendre(-3, 11), -1);
        let f = PrimeField::new(11).unwrap();
        let squares: Vec<u32> = (1..11).filter(|&x| f.is_square(x)).collect();
        assert_eq!(squares, vec![1, 3, 4, 5, 9]);
    }

    #[test]
    fn table_and_euler_agree() {
        for ell in primes_up_to(200).into_iter().skip(1) {
            let f = PrimeField::new(ell).unwrap();
            for a in 1..ell as u32 {
                assert_eq!(
                    f.is_square(a),
                    legendre(a as i64, ell) == 1,
                    "l={ell} a={a}"
                );
            }
        }
    }

    #[test]
    fn kronecker_at_two() {
        assert_eq!(kronecker_prime(-7, 2), 1);
        assert_eq!(kronecker_prime(-3, 2), -1);
        assert_eq!(kronecker_prime(-4, 2), 0);
    }

    #[test]
    fn tonelli_shanks() {
        for p in primes_up_to(300).into_iter().skip(1) {
            for a in 0..p {
                match sqrt_mod(a, p) {
                    Some(r) => assert_eq!(r * r % p, a),
                    None => assert_eq!(legendre(a as i64, p), -1),
                }
            }
        }
    }

    #[test]
    fn generators() {
        let f = PrimeField::new(13).unwrap();
        assert_eq!(f.order(f.generator()), 12);
        assert_eq!(f.order(3), 3);
    }

    proptest::proptest! {
        #[test]
        fn legendre_is_multiplicative(a in 1i64..10_000, b in 1i64..10_000) {
            for ell in [3u64, 5, 7, 11, 13, 101] {
                if a % ell as i64 != 0 && b % ell as i64 != 0 {
                    proptest::prop_assert_eq!(legendre(a, ell) * legendre(b, ell), legendre(a * b, ell));
                }
            }
        }
    }
}
