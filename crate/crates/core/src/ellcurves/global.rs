//! Exact global l-isogeny test: K-rational roots and quadratic factors of
//! Phi_l(j, Y), located p-adically and confirmed by exact arithmetic.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::modpoly::ModularPolynomial;
use super::poly::{self, KPoly};
use super::quadfield::{check_field, QuadFieldElem};
use crate::error::{Error, Result};
use crate::field::{is_prime, kronecker_prime, sqrt_mod};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum GlobalWitness {
    /// A root of Phi_l(j, Y) in K.
    Root { y: QuadFieldElem },
    /// Y^2 - s Y + t dividing Phi_l(j, Y) over K, split by K(sqrt ext).
    QuadraticFactor {
        s: QuadFieldElem,
        t: QuadFieldElem,
        disc: QuadFieldElem,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GlobalTestResult {
    pub ell: u32,
    pub j: QuadFieldElem,
    /// K = Q(sqrt field); 1 for Q.
    pub field: i64,
    /// The extension is K(sqrt ext).
    pub ext: i64,
    pub has_isogeny_over_k: bool,
    pub has_isogeny_over_ext: bool,
    pub witness: Option<GlobalWitness>,
}

/// Decides whether Phi_l(j, Y) has a root over K = Q(sqrt field) and over
/// K(sqrt(-l)).
pub fn global_isogeny_test(
    j: &QuadFieldElem,
    field: i64,
    phi: &ModularPolynomial,
) -> Result<GlobalTestResult> {
    let ell = phi.ell() as i64;
    global_isogeny_test_ext(j, field, phi, -ell)
}

pub fn global_isogeny_test_ext(
    j: &QuadFieldElem,
    field: i64,
    phi: &ModularPolynomial,
    ext: i64,
) -> Result<GlobalTestResult> {
    check_field(field)?;
    check_field(ext)?;
    if ext == 1 {
        return Err(Error::InvalidArgument("extension by sqrt 1".into()));
    }
    if !j.is_rational() && j.d() != field {
        return Err(Error::InvalidArgument(format!(
            "j is not in Q(sqrt {field})"
        )));
    }
    if j.is_zero() || *j == QuadFieldElem::from_int(1728) {
        return Err(Error::ExcludedJ(j.to_string()));
    }
    let j = j.in_field(field);
    let f = poly::trim(phi.specialize(&j));
    if f.is_empty() {
        return Err(Error::DegeneratePolynomial);
    }
    let f = if squarefree_mod_some_prime(&f, field) {
        poly::monic(&f)
    } else {
        poly::squarefree_part(&f)
    };
    let search = PadicSearch::new(&f, field, ext)?;

    let mut res = GlobalTestResult {
        ell: phi.ell(),
        j: j.clone(),
        field,
        ext,
        has_isogeny_over_k: false,
        has_isogeny_over_ext: false,
        witness: None,
    };
    if let Some(y) = search.root_in_k() {
        res.has_isogeny_over_k = true;
        res.has_isogeny_over_ext = true;
        res.witness = Some(GlobalWitness::Root { y });
        return Ok(res);
    }
    // sqrt(ext) in K: the extension is K itself
    if QuadFieldElem::from_int(ext).in_field(field).is_square() {
        return Ok(res);
    }
    let e = QuadFieldElem::from_int(ext);
    for (s, t) in search.quadratic_factors() {
        let disc = &(&s * &s) - &(&QuadFieldElem::from_int(4) * &t);
        if (&disc / &e).is_square() {
            res.has_isogeny_over_ext = true;
            res.witness = Some(GlobalWitness::QuadraticFactor { s, t, disc });
            break;
        }
    }
    Ok(res)
}

fn modinv(x: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = x.mod_floor(m).extended_gcd(m);
    e.gcd.is_one().then(|| e.x.mod_floor(m))
}

/// Representative in (-m/2, m/2].
fn symmetric(x: &BigInt, m: &BigInt) -> BigInt {
    let r = x.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

fn ceil_rat(x: &BigRational) -> BigInt {
    x.ceil().to_integer()
}

struct PadicSearch {
    f: KPoly,
    field: i64,
    modulus: BigInt,
    /// Image of sqrt(field) under the first embedding.
    delta: BigInt,
    /// Every root of f has c * root integral.
    c: BigInt,
    r: BigInt,
    roots1: Vec<BigInt>,
    roots2: Vec<BigInt>,
}

impl PadicSearch {
    fn new(f: &KPoly, field: i64, ext: i64) -> Result<Self> {
        // N = f * conj(f) in Q[Y]; c clears its denominators, R bounds its roots
        let fbar: KPoly = f.iter().map(|x| x.conj()).collect();
        let norm = if field == 1 {
            f.clone()
        } else {
            poly::mul(f, &fbar)
        };
        let mut c = BigInt::one();
        let mut maxc = BigRational::zero();
        for x in &norm {
            c = c.lcm(x.a().denom());
            maxc = maxc.max(x.a().abs());
        }
        let r = ceil_rat(&maxc) + 1;
        let den = c.lcm(
            &f.iter()
                .fold(BigInt::one(), |acc, x| acc.lcm(&x.denominator())),
        );
        // components of roots, sums and products have numerators at most 4 c^2 R^2
        let bound: BigInt = BigInt::from(16) * &c * &c * &r * &r + 1;
        let bad = BigInt::from(2 * field.abs() * ext.abs()) * &den;
        let mut p: u64 = 1009;
        loop {
            p += 2;
            if !is_prime(p) || (&bad % p).is_zero() {
                continue;
            }
            if field != 1 && kronecker_prime(field, p) != 1 {
                continue;
            }
            if kronecker_prime(ext, p) != 1 {
                continue;
            }
            let delta0 = if field == 1 {
                0
            } else {
                sqrt_mod(field.rem_euclid(p as i64) as u64, p).unwrap()
            };
            let pb = BigInt::from(p);
            let mut deltas = vec![BigInt::from(delta0)];
            if field != 1 {
                deltas.push(BigInt::from(p - delta0));
            }
            let reduced: Vec<Vec<BigInt>> = deltas
                .iter()
                .map(|d| reduce_poly(f, d, &pb).unwrap())
                .collect();
            let roots_mod_p: Vec<Vec<u64>> = reduced.iter().map(|g| roots_fp(g, p)).collect();
            let simple = reduced.iter().zip(&roots_mod_p).all(|(g, rs)| {
                let dg = deriv_mod(g, &pb);
                rs.iter()
                    .all(|&x| !eval_mod(&dg, &BigInt::from(x), &pb).is_zero())
            });
            if !simple {
                continue;
            }
            let mut modulus = pb.clone();
            while modulus <= bound {
                modulus *= &pb;
            }
            let delta = if field == 1 {
                BigInt::zero()
            } else {
                hensel_sqrt(field, delta0, &modulus)
            };
            let full: Vec<Vec<BigInt>> = if field == 1 {
                vec![reduce_poly(f, &delta, &modulus).unwrap()]
            } else {
                vec![
                    reduce_poly(f, &delta, &modulus).unwrap(),
                    reduce_poly(f, &(-&delta), &modulus).unwrap(),
                ]
            };
            let lift = |g: &Vec<BigInt>, rs: &Vec<u64>| -> Vec<BigInt> {
                rs.iter()
                    .map(|&x| hensel_root(g, BigInt::from(x), &modulus))
                    .collect()
            };
            let roots1 = lift(&full[0], &roots_mod_p[0]);
            let roots2 = if field == 1 {
                roots1.clone()
            } else {
                lift(&full[1], &roots_mod_p[1])
            };
            return Ok(Self {
                f: f.clone(),
                field,
                modulus,
                delta,
                c,
                r,
                roots1,
                roots2,
            });
        }
    }

    /// Recovers x = u + v sqrt D from its two images, knowing `den * u` and
    /// `den * v` are integers of size at most `lim`.
    fn recover(
        &self,
        x1: &BigInt,
        x2: &BigInt,
        den: &BigInt,
        lim: &BigInt,
    ) -> Option<QuadFieldElem> {
        let m = &self.modulus;
        let inv2 = modinv(&BigInt::from(2), m)?;
        let comp = |v: BigInt| -> Option<BigRational> {
            let n = symmetric(&(v * den), m);
            (n.abs() <= *lim).then(|| BigRational::new(n, den.clone()))
        };
        if self.field == 1 {
            return Some(QuadFieldElem::rational(comp(x1.clone())?));
        }
        let u = comp((x1 + x2) * &inv2)?;
        let inv2d = modinv(&(&self.delta * 2), m)?;
        let v = comp((x1 - x2) * inv2d)?;
        QuadFieldElem::new(u, v, self.field).ok()
    }

    fn pairs2(&self) -> Vec<(usize, usize)> {
        if self.field == 1 {
            (0..self.roots1.len()).map(|i| (i, i)).collect()
        } else {
            (0..self.roots1.len())
                .flat_map(|i| (0..self.roots2.len()).map(move |k| (i, k)))
                .collect()
        }
    }

    fn root_in_k(&self) -> Option<QuadFieldElem> {
        let den = &self.c * 2;
        let lim = &den * &self.r;
        self.pairs2().into_iter().find_map(|(i, k)| {
            let y = self.recover(&self.roots1[i], &self.roots2[k], &den, &lim)?;
            poly::eval(&self.f, &y).is_zero().then_some(y)
        })
    }

    /// Monic quadratic divisors Y^2 - s Y + t of f over K, as (s, t).
    fn quadratic_factors(&self) -> Vec<(QuadFieldElem, QuadFieldElem)> {
        let m = &self.modulus;
        let pairs = |rs: &[BigInt]| -> Vec<(BigInt, BigInt)> {
            let mut out = vec![];
            for a in 0..rs.len() {
                for b in a + 1..rs.len() {
                    out.push(((&rs[a] + &rs[b]) % m, (&rs[a] * &rs[b]) % m));
                }
            }
            out
        };
        let p1 = pairs(&self.roots1);
        let p2 = if self.field == 1 {
            vec![]
        } else {
            pairs(&self.roots2)
        };
        let den_s = &self.c * 2;
        let lim_s = &den_s * &self.r * 2;
        let den_t = &self.c * &self.c * 2;
        let lim_t = &den_t * &self.r * &self.r;
        let mut out = vec![];
        let combos: Vec<(&(BigInt, BigInt), &(BigInt, BigInt))> = if self.field == 1 {
            p1.iter().map(|x| (x, x)).collect()
        } else {
            p1.iter()
                .flat_map(|x| p2.iter().map(move |y| (x, y)))
                .collect()
        };
        for (x, y) in combos {
            let Some(s) = self.recover(&x.0, &y.0, &den_s, &lim_s) else {
                continue;
            };
            let Some(t) = self.recover(&x.1, &y.1, &den_t, &lim_t) else {
                continue;
            };
            let q = vec![t.clone(), -&s, QuadFieldElem::from_int(1)];
            if poly::divrem(&self.f, &q).1.is_empty() {
                out.push((s, t));
            }
        }
        out
    }
}

fn gcd_degree_fp(mut a: Vec<u64>, mut b: Vec<u64>, p: u64) -> usize {
    let trim = |v: &mut Vec<u64>| {
        while v.last() == Some(&0) {
            v.pop();
        }
    };
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let inv = crate::field::pow_mod(*b.last().unwrap(), p - 2, p);
        while a.len() >= b.len() {
            let c = a.last().unwrap() * inv % p;
            let shift = a.len() - b.len();
            for (i, x) in b.iter().enumerate() {
                a[shift + i] = (a[shift + i] + p - c * x % p) % p;
            }
            trim(&mut a);
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len().saturating_sub(1)
}

/// gcd(f, f') = 1 modulo a prime of degree one proves f squarefree over K.
fn squarefree_mod_some_prime(f: &[QuadFieldElem], field: i64) -> bool {
    let mut tried = 0;
    let mut p = 1_000_003u64;
    while tried < 8 {
        p += 2;
        if !is_prime(p) || (field != 1 && kronecker_prime(field, p) != 1) {
            continue;
        }
        tried += 1;
        let pb = BigInt::from(p);
        let delta = if field == 1 {
            BigInt::zero()
        } else {
            BigInt::from(sqrt_mod(field.rem_euclid(p as i64) as u64, p).unwrap())
        };
        let Some(g) = reduce_poly(f, &delta, &pb) else {
            continue;
        };
        let g: Vec<u64> = g.iter().map(|c| c.to_u64().unwrap()).collect();
        if g.last() == Some(&0) {
            continue;
        }
        let dg: Vec<u64> = g
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| i as u64 % p * c % p)
            .collect();
        if gcd_degree_fp(g, dg, p) == 0 {
            return true;
        }
    }
    false
}

fn rat_mod(x: &BigRational, m: &BigInt) -> Option<BigInt> {
    let inv = modinv(x.denom(), m)?;
    Some((x.numer() * inv).mod_floor(m))
}

/// Coefficients of f mod m with sqrt D -> delta.
fn reduce_poly(f: &[QuadFieldElem], delta: &BigInt, m: &BigInt) -> Option<Vec<BigInt>> {
    f.iter()
        .map(|c| Some((rat_mod(c.a(), m)? + rat_mod(c.b(), m)? * delta).mod_floor(m)))
        .collect()
}

fn eval_mod(g: &[BigInt], x: &BigInt, m: &BigInt) -> BigInt {
    g.iter()
        .rev()
        .fold(BigInt::zero(), |acc, c| (acc * x + c).mod_floor(m))
}

fn deriv_mod(g: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    g.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| (c * i).mod_floor(m))
        .collect()
}

fn roots_fp(g: &[BigInt], p: u64) -> Vec<u64> {
    let gs: Vec<u64> = g.iter().map(|c| c.to_u64().unwrap()).collect();
    (0..p)
        .filter(|&x| gs.iter().rev().fold(0u64, |acc, &c| (acc * x % p + c) % p) == 0)
        .collect()
}

/// Newton iteration from a simple root mod p.
fn hensel_root(g: &[BigInt], x0: BigInt, m: &BigInt) -> BigInt {
    let dg = deriv_mod(g, m);
    let mut x = x0;
    loop {
        let v = eval_mod(g, &x, m);
        if v.is_zero() {
            return x;
        }
        let d = modinv(&eval_mod(&dg, &x, m), m).expect("simple root");
        x = (x - v * d).mod_floor(m);
    }
}

fn hensel_sqrt(d: i64, r0: u64, m: &BigInt) -> BigInt {
    let g = vec![BigInt::from(-d).mod_floor(m), BigInt::zero(), BigInt::one()];
    hensel_root(&g, BigInt::from(r0), m)
}
