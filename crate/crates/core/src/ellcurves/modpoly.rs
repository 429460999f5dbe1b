//! Classical modular polynomials Phi_l(X, Y).

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::quadfield::QuadFieldElem;
use crate::error::{ModPolyError, Result};
use crate::field::is_prime;

pub const SUPPORTED_ELLS: [u32; 6] = [2, 3, 5, 7, 11, 13];

/// Truncated Laurent series in q with integer coefficients, exact for
/// exponents below `prec`.
#[derive(Debug, Clone)]
struct Series {
    val: i64,
    prec: i64,
    c: Vec<BigInt>,
}

impl Series {
    fn from_coeffs(val: i64, c: Vec<BigInt>) -> Self {
        let prec = val + c.len() as i64;
        let mut s = Self { val, prec, c };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        let lead = self.c.iter().take_while(|x| x.is_zero()).count();
        if lead > 0 {
            self.c.drain(..lead);
            self.val += lead as i64;
        }
    }

    fn coeff(&self, n: i64) -> BigInt {
        debug_assert!(n < self.prec);
        if n < self.val {
            BigInt::zero()
        } else {
            self.c[(n - self.val) as usize].clone()
        }
    }

    fn mul(&self, other: &Self) -> Self {
        let val = self.val + other.val;
        let prec = (self.prec + other.val).min(other.prec + self.val);
        let len = (prec - val).max(0) as usize;
        let mut c = vec![BigInt::zero(); len];
        for (i, x) in self.c.iter().enumerate().take(len) {
            if x.is_zero() {
                continue;
            }
            for (k, y) in other.c.iter().enumerate().take(len - i) {
                c[i + k] += x * y;
            }
        }
        let mut s = Self { val, prec, c };
        s.normalize();
        s
    }

    fn add_signed(&self, other: &Self, sign: i32) -> Self {
        let val = self.val.min(other.val);
        let prec = self.prec.min(other.prec);
        let c = (val..prec)
            .map(|n| {
                let b = other.coeff(n);
                self.coeff(n) + if sign < 0 { -b } else { b }
            })
            .collect();
        let mut s = Self { val, prec, c };
        s.normalize();
        s
    }

    fn scale(&self, k: &BigInt) -> Self {
        let mut s = Self {
            val: self.val,
            prec: self.prec,
            c: self.c.iter().map(|x| x * k).collect(),
        };
        s.normalize();
        s
    }

    fn div_exact(&self, k: i64) -> Self {
        let k = BigInt::from(k);
        Self {
            val: self.val,
            prec: self.prec,
            c: self
                .c
                .iter()
                .map(|x| {
                    let (q, r) = x.div_rem(&k);
                    assert!(r.is_zero(), "inexact division in Newton identities");
                    q
                })
                .collect(),
        }
    }

    /// sum_n c_{l n} q^n
    fn u_op(&self, ell: i64) -> Self {
        let val = Integer::div_ceil(&self.val, &ell);
        let prec = Integer::div_ceil(&self.prec, &ell);
        let c = (val..prec).map(|n| self.coeff(n * ell)).collect();
        let mut s = Self { val, prec, c };
        s.normalize();
        s
    }

    /// q -> q^l
    fn v_op(&self, ell: i64) -> Self {
        let val = self.val * ell;
        let prec = self.prec * ell;
        let mut c = vec![BigInt::zero(); (prec - val) as usize];
        for (i, x) in self.c.iter().enumerate() {
            c[i * ell as usize] = x.clone();
        }
        Self { val, prec, c }
    }
}

fn unit_inverse(a: &[BigInt]) -> Vec<BigInt> {
    debug_assert!(a[0].is_one());
    let n = a.len();
    let mut b = vec![BigInt::zero(); n];
    b[0] = BigInt::one();
    for k in 1..n {
        let mut s = BigInt::zero();
        for i in 1..=k {
            s += &a[i] * &b[k - i];
        }
        b[k] = -s;
    }
    b
}

/// j(q) known for exponents below `n`.
fn j_series(n: usize) -> Series {
    let m = n + 1;
    let mut e4 = vec![BigInt::zero(); m];
    e4[0] = BigInt::one();
    for k in 1..m {
        let sigma: u64 = (1..=k as u64)
            .filter(|d| k as u64 % d == 0)
            .map(|d| d * d * d)
            .sum();
        e4[k] = BigInt::from(240u64 * sigma);
    }
    // prod (1 - q^n) by the pentagonal number theorem
    let mut eta = vec![BigInt::zero(); m];
    eta[0] = BigInt::one();
    for k in 1i64.. {
        let p1 = (k * (3 * k - 1) / 2) as usize;
        if p1 >= m {
            break;
        }
        let s = if k % 2 == 1 { -1 } else { 1 };
        eta[p1] += s;
        let p2 = (k * (3 * k + 1) / 2) as usize;
        if p2 < m {
            eta[p2] += s;
        }
    }
    let e4 = Series::from_coeffs(0, e4);
    let eta = Series::from_coeffs(0, eta);
    let eta2 = eta.mul(&eta);
    let eta4 = eta2.mul(&eta2);
    let eta8 = eta4.mul(&eta4);
    let eta24 = eta8.mul(&eta8).mul(&eta8);
    let inv = Series::from_coeffs(0, unit_inverse(&eta24.c));
    let num = e4.mul(&e4).mul(&e4).mul(&inv);
    Series {
        val: num.val - 1,
        prec: num.prec - 1,
        c: num.c,
    }
}

/// Coefficients (constant term first) of the polynomial P with s = P(j),
/// checked on `check` positive exponents.
fn as_poly_in_j(s: &Series, jpow: &[Series], check: i64) -> Option<Vec<BigInt>> {
    let deg = jpow.len() - 1;
    let mut rem = s.clone();
    let mut out = vec![BigInt::zero(); deg + 1];
    for d in (1..=deg).rev() {
        let c = rem.coeff(-(d as i64));
        if !c.is_zero() {
            rem = rem.add_signed(&jpow[d].scale(&c), -1);
        }
        out[d] = c;
    }
    if rem.prec <= check {
        return None;
    }
    out[0] = rem.coeff(0);
    if rem.val < 0 || (1..=check).any(|n| !rem.coeff(n).is_zero()) {
        return None;
    }
    Some(out)
}

/// Phi_l(X, Y) = c[i][j] X^i Y^j, symmetric, of degree l + 1 in each variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModularPolynomial {
    ell: u32,
    coeffs: Vec<Vec<BigInt>>,
}

impl ModularPolynomial {
    /// From the q-expansion of j: Phi_l(X, j(q)) = prod over the l + 1
    /// isogenous j-values.
    pub fn compute(ell: u32) -> Result<Self> {
        if !is_prime(ell as u64) || ell > 31 {
            return Err(ModPolyError::Unsupported(ell).into());
        }
        let l = ell as i64;
        let check = 4;
        let mut n = (l * (l + check + 4)) as usize;
        loop {
            if let Some(p) = Self::compute_with(ell, n, check) {
                return Ok(p);
            }
            n *= 2;
        }
    }

    fn compute_with(ell: u32, n: usize, check: i64) -> Option<Self> {
        let l = ell as i64;
        let deg = ell as usize + 1;
        let j = j_series(n);
        let mut jpow = vec![Series::from_coeffs(0, {
            let mut v = vec![BigInt::zero(); n + deg];
            v[0] = BigInt::one();
            v
        })];
        for m in 1..=deg {
            let next = jpow[m - 1].mul(&j);
            jpow.push(next);
        }
        // power sums of j((tau + t)/l), t = 0..l-1
        let lb = BigInt::from(l);
        let s: Vec<Series> = (1..deg).map(|m| jpow[m].u_op(l).scale(&lb)).collect();
        // elementary symmetric functions e_0..e_l of those l values
        let mut e: Vec<Series> = vec![jpow[0].clone()];
        for k in 1..deg {
            let mut acc: Option<Series> = None;
            for i in 1..=k {
                let term = e[k - i].mul(&s[i - 1]);
                acc = Some(match acc {
                    None => term,
                    Some(a) => a.add_signed(&term, if i % 2 == 1 { 1 } else { -1 }),
                });
            }
            e.push(acc.unwrap().div_exact(k as i64));
        }
        // adjoin j(l tau)
        let jl = j.v_op(l);
        let mut big_e = vec![e[0].clone()];
        for k in 1..=deg {
            let prev = jl.mul(&e[k - 1]);
            big_e.push(if k < deg {
                e[k].add_signed(&prev, 1)
            } else {
                prev
            });
        }
        let mut coeffs = vec![vec![BigInt::zero(); deg + 1]; deg + 1];
        for (k, ek) in big_e.iter().enumerate() {
            let poly = as_poly_in_j(ek, &jpow, check)?;
            let i = deg - k;
            for (d, c) in poly.into_iter().enumerate() {
                coeffs[i][d] = if k % 2 == 1 { -c } else { c };
            }
        }
        let p = Self { ell, coeffs };
        p.validate().ok()?;
        Some(p)
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn coeff(&self, i: usize, j: usize) -> BigInt {
        self.coeffs
            .get(i)
            .and_then(|r| r.get(j))
            .cloned()
            .unwrap_or_default()
    }

    pub fn coeffs(&self) -> &[Vec<BigInt>] {
        &self.coeffs
    }

    /// Symmetry, then degree, then the Kronecker congruence
    /// Phi_l = (X^l - Y)(X - Y^l) mod l.
    pub fn validate(&self) -> Result<(), ModPolyError> {
        let n = self.coeffs.len();
        for i in 0..n {
            for j in 0..i {
                if self.coeffs[i][j] != self.coeffs[j][i] {
                    return Err(ModPolyError::Symmetry { i: j, j: i });
                }
            }
        }
        let top = self.ell as usize + 1;
        for i in 0..n {
            for j in 0..n {
                if (i > top || j > top) && !self.coeffs[i][j].is_zero() {
                    return Err(ModPolyError::Degree(format!(
                        "nonzero coefficient at X^{i} Y^{j} beyond degree {top}"
                    )));
                }
            }
        }
        if !self.coeff(top, 0).is_one() {
            return Err(ModPolyError::Degree(format!(
                "coefficient of X^{top} is {}, expected 1",
                self.coeff(top, 0)
            )));
        }
        if let Some(j) = (1..=top).find(|&j| !self.coeff(top, j).is_zero()) {
            return Err(ModPolyError::Degree(format!(
                "X^{top} Y^{j} has a nonzero coefficient"
            )));
        }
        let l = BigInt::from(self.ell);
        let ell = self.ell as usize;
        for i in 0..=top {
            for j in 0..=top {
                let expected: i64 = match (i, j) {
                    (a, 0) | (0, a) if a == top => 1,
                    (a, b) if a == ell && b == ell => -1,
                    (1, 1) => -1,
                    _ => 0,
                };
                if !(self.coeff(i, j) - expected).is_multiple_of(&l) {
                    return Err(ModPolyError::Kronecker { i, j });
                }
            }
        }
        Ok(())
    }

    pub fn parse(text: &str, expected_ell: u32) -> Result<Self, ModPolyError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(k, l)| (k + 1, l.split('#').next().unwrap().trim()))
            .filter(|(_, l)| !l.is_empty());
        let (lno, header) = lines.next().ok_or(ModPolyError::Parse {
            line: 0,
            message: "empty file".into(),
        })?;
        let found = match header.split_whitespace().collect::<Vec<_>>()[..] {
            ["ell", p] => p.parse::<u32>().map_err(|_| ModPolyError::Parse {
                line: lno,
                message: format!("bad prime {p:?}"),
            })?,
            _ => {
                return Err(ModPolyError::Parse {
                    line: lno,
                    message: "expected header `ell <p>`".into(),
                })
            }
        };
        if found != expected_ell {
            return Err(ModPolyError::EllMismatch {
                expected: expected_ell,
                found,
            });
        }
        let mut entries: BTreeMap<(usize, usize), BigInt> = BTreeMap::new();
        for (lno, line) in lines {
            let parts: Vec<&str> = line.split_whitespace().collect();
            let bad = |m: &str| ModPolyError::Parse {
                line: lno,
                message: m.to_string(),
            };
            if parts.len() != 3 {
                return Err(bad("expected `i j coefficient`"));
            }
            let i: usize = parts[0].parse().map_err(|_| bad("bad exponent"))?;
            let j: usize = parts[1].parse().map_err(|_| bad("bad exponent"))?;
            let c = BigInt::from_str(parts[2]).map_err(|_| bad("bad coefficient"))?;
            if i > 4096 || j > 4096 {
                return Err(bad("exponent too large"));
            }
            if entries.insert((i, j), c).is_some() {
                return Err(bad("duplicate entry"));
            }
        }
        let n = entries
            .keys()
            .map(|&(i, j)| i.max(j) + 1)
            .max()
            .unwrap_or(0)
            .max(found as usize + 2);
        let mut coeffs = vec![vec![BigInt::zero(); n]; n];
        for (&(i, j), c) in &entries {
            coeffs[i][j] = c.clone();
            if !entries.contains_key(&(j, i)) {
                coeffs[j][i] = c.clone();
            }
        }
        let p = Self { ell: found, coeffs };
        p.validate()?;
        Ok(p)
    }

    pub fn to_file_string(&self) -> String {
        let mut out = format!("ell {}\n", self.ell);
        for (i, row) in self.coeffs.iter().enumerate() {
            for (j, c) in row.iter().enumerate().take(i + 1) {
                if !c.is_zero() {
                    writeln!(out, "{i} {j} {c}").unwrap();
                }
            }
        }
        out
    }

    pub fn load(ell: u32, path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| ModPolyError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Ok(Self::parse(&text, ell)?)
    }

    pub fn write_file(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_file_string()).map_err(|e| {
            ModPolyError::Io {
                path: path.display().to_string(),
                message: e.to_string(),
            }
            .into()
        })
    }

    /// Phi_l(x, Y) as coefficients in Y, constant first.
    pub fn specialize(&self, x: &QuadFieldElem) -> Vec<QuadFieldElem> {
        let top = self.ell as usize + 1;
        let mut xp = vec![QuadFieldElem::from_int(1)];
        for i in 1..=top {
            xp.push(&xp[i - 1] * x);
        }
        (0..=top)
            .map(|j| {
                let mut acc = QuadFieldElem::from_int(0);
                for (i, p) in xp.iter().enumerate() {
                    let c = self.coeff(i, j);
                    if !c.is_zero() {
                        acc = &acc
                            + &(p * &QuadFieldElem::rational(
                                num_rational::BigRational::from_integer(c),
                            ));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn eval(&self, x: &QuadFieldElem, y: &QuadFieldElem) -> QuadFieldElem {
        let f = self.specialize(x);
        let mut acc = QuadFieldElem::from_int(0);
        for c in f.iter().rev() {
            acc = &(&acc * y) + c;
        }
        acc
    }

    /// Largest coefficient size in decimal digits.
    pub fn max_digits(&self) -> usize {
        self.coeffs
            .iter()
            .flatten()
            .map(|c| c.abs().to_string().len())
            .max()
            .unwrap_or(0)
    }
}

/// `phi_<l>.txt` inside `dir`.
pub fn modpoly_path(dir: &Path, ell: u32) -> PathBuf {
    dir.join(format!("phi_{ell}.txt"))
}

/// Data shipped with the crate.
pub fn default_modpoly_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join("modpoly")
}

/// Reads and validates `phi_<l>.txt` from `dir`.
pub fn load_modular_polynomial(ell: u32, dir: &Path) -> Result<ModularPolynomial> {
    if !SUPPORTED_ELLS.contains(&ell) {
        return Err(ModPolyError::Unsupported(ell).into());
    }
    ModularPolynomial::load(ell, &modpoly_path(dir, ell))
}
