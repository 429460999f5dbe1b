//! 2x2 invertible matrices over F_l and their action on the projective line.
//!
//! Matrices act on column vectors: `g . (x, y) = (a x + b y, c x + d y)`.
//! Points of P^1(F_l) are stored canonically with the first nonzero coordinate
//! equal to 1, so the `l + 1` points are `(1 : t)` for `t` in F_l and `(0 : 1)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::pow_mod;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Gl2Matrix {
    ell: u32,
    entries: [u32; 4],
}

impl Gl2Matrix {
    /// Builds `[[a, b], [c, d]]` mod `ell`, rejecting singular matrices.
    pub fn new(a: i64, b: i64, c: i64, d: i64, ell: u32) -> Result<Self> {
        let r = |x: i64| x.rem_euclid(ell as i64) as u32;
        let m = Self {
            ell,
            entries: [r(a), r(b), r(c), r(d)],
        };
        if m.det() == 0 {
            Err(Error::Singular(ell))
        } else {
            Ok(m)
        }
    }

    pub(crate) fn from_raw(entries: [u32; 4], ell: u32) -> Self {
        Self { ell, entries }
    }

    pub fn identity(ell: u32) -> Self {
        Self::from_raw([1, 0, 0, 1], ell)
    }

    pub fn scalar(lambda: u32, ell: u32) -> Self {
        Self::from_raw([lambda % ell, 0, 0, lambda % ell], ell)
    }

    pub fn diag(x: u32, y: u32, ell: u32) -> Self {
        Self::from_raw([x % ell, 0, 0, y % ell], ell)
    }

    #[inline]
    pub fn ell(&self) -> u32 {
        self.ell
    }

    #[inline]
    pub fn entries(&self) -> [u32; 4] {
        self.entries
    }

    #[inline]
    fn m(&self) -> u64 {
        self.ell as u64
    }

    pub fn det(&self) -> u32 {
        let [a, b, c, d] = self.entries.map(|x| x as u64);
        let m = self.m();
        ((a * d % m + m - b * c % m) % m) as u32
    }

    pub fn trace(&self) -> u32 {
        (self.entries[0] + self.entries[3]) % self.ell
    }

    /// Product without the modulus check; callers guarantee equal moduli.
    #[inline]
    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let m = self.m();
        let [a, b, c, d] = self.entries.map(|x| x as u64);
        let [e, f, g, h] = other.entries.map(|x| x as u64);
        Self {
            ell: self.ell,
            entries: [
                ((a * e + b * g) % m) as u32,
                ((a * f + b * h) % m) as u32,
                ((c * e + d * g) % m) as u32,
                ((c * f + d * h) % m) as u32,
            ],
        }
    }

    pub fn inverse(&self) -> Self {
        let m = self.m();
        let det_inv = pow_mod(self.det() as u64, m - 2, m);
        let [a, b, c, d] = self.entries.map(|x| x as u64);
        let s = |x: u64| (x * det_inv % m) as u32;
        Self {
            ell: self.ell,
            entries: [s(d), s((m - b) % m), s((m - c) % m), s(a)],
        }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut acc = Self::identity(self.ell);
        let mut base = *self;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            base = base.mul_unchecked(&base);
            e >>= 1;
        }
        acc
    }

    pub fn is_scalar(&self) -> bool {
        let [a, b, c, d] = self.entries;
        b == 0 && c == 0 && a == d
    }

    /// Representative of the class in PGL_2: scaled so the first nonzero entry
    /// (in the order a, b, c, d) is 1.
    pub fn projective_normal_form(&self) -> Self {
        let lead = *self.entries.iter().find(|&&x| x != 0).expect("invertible");
        if lead == 1 {
            return *self;
        }
        let m = self.m();
        let inv = pow_mod(lead as u64, m - 2, m);
        Self {
            ell: self.ell,
            entries: self.entries.map(|x| (x as u64 * inv % m) as u32),
        }
    }

    /// Compact key for hashing and sorting (entries fit in 16 bits).
    #[inline]
    pub fn pack(&self) -> u64 {
        let [a, b, c, d] = self.entries.map(|x| x as u64);
        (a << 48) | (b << 32) | (c << 16) | d
    }

    pub fn unpack(key: u64, ell: u32) -> Self {
        Self::from_raw(
            [
                (key >> 48) as u32 & 0xffff,
                (key >> 32) as u32 & 0xffff,
                (key >> 16) as u32 & 0xffff,
                key as u32 & 0xffff,
            ],
            ell,
        )
    }

    pub fn act(&self, p: ProjPoint) -> ProjPoint {
        let m = self.m();
        let [a, b, c, d] = self.entries.map(|x| x as u64);
        let (x, y) = (p.x as u64, p.y as u64);
        ProjPoint::canonical(
            ((a * x + b * y) % m) as u32,
            ((c * x + d * y) % m) as u32,
            self.ell,
        )
    }
}

impl fmt::Display for Gl2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.entries;
        write!(f, "[[{a},{b}],[{c},{d}]] mod {}", self.ell)
    }
}

/// Product of two matrices with a modulus check.
pub fn mat_mul(a: &Gl2Matrix, b: &Gl2Matrix) -> Result<Gl2Matrix> {
    if a.ell != b.ell {
        return Err(Error::ModulusMismatch(a.ell, b.ell));
    }
    Ok(a.mul_unchecked(b))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ProjPoint {
    x: u32,
    y: u32,
}

impl ProjPoint {
    /// Canonical form of `(x : y)`; panics on `(0, 0)`.
    pub fn new(x: i64, y: i64, ell: u32) -> Self {
        let r = |v: i64| v.rem_euclid(ell as i64) as u32;
        Self::canonical(r(x), r(y), ell)
    }

    fn canonical(x: u32, y: u32, ell: u32) -> Self {
        assert!(x != 0 || y != 0, "(0 : 0) is not a projective point");
        if x == 0 {
            return Self { x: 0, y: 1 };
        }
        let m = ell as u64;
        let inv = pow_mod(x as u64, m - 2, m);
        Self {
            x: 1,
            y: (y as u64 * inv % m) as u32,
        }
    }

    pub fn coords(&self) -> (u32, u32) {
        (self.x, self.y)
    }

    /// Position in the enumeration `(1:0), (1:1), ..., (1:l-1), (0:1)`.
    pub fn index(&self, ell: u32) -> usize {
        if self.x == 0 {
            ell as usize
        } else {
            self.y as usize
        }
    }

    pub fn from_index(i: usize, ell: u32) -> Self {
        if i == ell as usize {
            Self { x: 0, y: 1 }
        } else {
            Self { x: 1, y: i as u32 }
        }
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}:{})", self.x, self.y)
    }
}

/// All `l + 1` points of P^1(F_l) in canonical order.
pub fn projective_line(ell: u32) -> Vec<ProjPoint> {
    (0..=ell as usize)
        .map(|i| ProjPoint::from_index(i, ell))
        .collect()
}

/// The points of P^1(F_l) fixed by `g`.
pub fn fixed_points(g: &Gl2Matrix) -> Vec<ProjPoint> {
    projective_line(g.ell)
        .into_iter()
        .filter(|&p| g.act(p) == p)
        .collect()
}

/// Whether the characteristic polynomial `x^2 - tr x + det` has a root in F_l.
pub fn char_poly_reducible(g: &Gl2Matrix) -> bool {
    poly_reducible(g.trace(), g.det(), g.ell)
}

/// Reducibility of `x^2 - t x + n` over F_l.
pub(crate) fn poly_reducible(t: u32, n: u32, ell: u32) -> bool {
    let m = ell as u64;
    if ell == 2 {
        // roots in F_2: x = 0 needs n = 0, x = 1 needs 1 - t + n = 0
        return n == 0 || (1 + m - t as u64 + n as u64) % 2 == 0;
    }
    let disc = ((t as u64 * t as u64) % m + m * 4 - 4 * n as u64 % m) % m;
    disc == 0 || pow_mod(disc, (m - 1) / 2, m) == 1
}

/// Least `k >= 1` with `g^k` scalar.
pub fn proj_order(g: &Gl2Matrix) -> u64 {
    let ell = g.ell;
    let bound = ell as u64 * ell as u64;
    let mut acc = *g;
    let mut k = 1;
    while !acc.is_scalar() {
        acc = acc.mul_unchecked(g);
        k += 1;
        debug_assert!(k <= bound);
    }
    k
}

/// Cardinality of GL_2(F_l).
pub fn gl2_order(ell: u64) -> u64 {
    (ell * ell - 1) * (ell * ell - ell)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn rot(ell: u32) -> Gl2Matrix {
        Gl2Matrix::new(0, -1, 1, 0, ell).unwrap()
    }

    fn random_matrix(rng: &mut ChaCha8Rng, ell: u32) -> Gl2Matrix {
        loop {
            let e: [i64; 4] = std::array::from_fn(|_| rng.gen_range(0..ell as i64));
            if let Ok(m) = Gl2Matrix::new(e[0], e[1], e[2], e[3], ell) {
                return m;
            }
        }
    }

    #[test]
    fn identity_and_rotation() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let a = random_matrix(&mut rng, 7);
        assert_eq!(mat_mul(&Gl2Matrix::identity(7), &a).unwrap(), a);
        let s = rot(5);
        assert_eq!(
            mat_mul(&s, &s).unwrap(),
            Gl2Matrix::new(4, 0, 0, 4, 5).unwrap()
        );
        assert!(mat_mul(&s, &rot(7)).is_err());
        assert!(Gl2Matrix::new(1, 2, 2, 4, 7).is_err());
    }

    #[test]
    fn determinant_is_multiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..1000 {
            let a = random_matrix(&mut rng, 13);
            let b = random_matrix(&mut rng, 13);
            let ab = mat_mul(&a, &b).unwrap();
            assert_eq!(ab.det() as u64, a.det() as u64 * b.det() as u64 % 13);
        }
    }

    #[test]
    fn fixed_point_examples() {
        assert_eq!(fixed_points(&Gl2Matrix::identity(7)).len(), 8);
        let u = Gl2Matrix::new(1, 1, 0, 1, 7).unwrap();
        assert_eq!(fixed_points(&u), vec![ProjPoint::new(1, 0, 7)]);
        let mut fp = fixed_points(&rot(5));
        fp.sort();
        let mut expected = vec![ProjPoint::new(2, 1, 5), ProjPoint::new(3, 1, 5)];
        expected.sort();
        assert_eq!(fp, expected);
    }

    #[test]
    fn char_poly_examples() {
        assert!(char_poly_reducible(&Gl2Matrix::identity(11)));
        assert!(!char_poly_reducible(&rot(7)));
        assert!(char_poly_reducible(&rot(5)));
    }

    #[test]
    fn projective_orders() {
        assert_eq!(proj_order(&Gl2Matrix::identity(5)), 1);
        assert_eq!(proj_order(&rot(5)), 2);
        let f = PrimeField::new(13).unwrap();
        let g = Gl2Matrix::diag(f.generator(), 1, 13);
        assert_eq!(proj_order(&g), 12);
    }

    #[test]
    fn canonical_points() {
        for ell in [2u32, 3, 5, 7, 13] {
            let line = projective_line(ell);
            assert_eq!(line.len(), ell as usize + 1);
            for (i, p) in line.iter().enumerate() {
                assert_eq!(p.index(ell), i);
                let (x, y) = p.coords();
                for s in 1..ell as i64 {
                    assert_eq!(ProjPoint::new(x as i64 * s, y as i64 * s, ell), *p);
                }
            }
        }
    }

    #[test]
    fn all_of_gl2_small() {
        // exhaustive over GL_2(F_l) for small l: the two fixed-point characterizations agree
        for ell in [2u32, 3, 5, 7] {
            let mut count = 0;
            for e in 0..(ell as i64).pow(4) {
                let d = |k: u32| (e / (ell as i64).pow(k)) % ell as i64;
                let Ok(g) = Gl2Matrix::new(d(0), d(1), d(2), d(3), ell) else {
                    continue;
                };
                count += 1;
                let fp = fixed_points(&g).len();
                assert_eq!(fp > 0, char_poly_reducible(&g), "{g}");
                assert_eq!(fp == ell as usize + 1, g.is_scalar(), "{g}");
                assert!([0, 1, 2, ell as usize + 1].contains(&fp));
            }
            assert_eq!(count, gl2_order(ell as u64));
        }
    }

    proptest::proptest! {
        #[test]
        fn action_is_a_permutation(e in proptest::array::uniform4(0i64..31)) {
            let ell = 31;
            if let Ok(g) = Gl2Matrix::new(e[0], e[1], e[2], e[3], ell) {
                let mut image: Vec<_> = projective_line(ell).into_iter().map(|p| g.act(p)).collect();
                image.sort();
                image.dedup();
                proptest::prop_assert_eq!(image.len(), 32);
                let fp = fixed_points(&g).len();
                proptest::prop_assert_eq!(fp > 0, char_poly_reducible(&g));
                proptest::prop_assert_eq!(fp == 32, g.is_scalar());
            }
        }
    }
}
