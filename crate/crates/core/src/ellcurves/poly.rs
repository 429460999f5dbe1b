//! Dense univariate polynomials over Q(sqrt D), constant term first.

use super::quadfield::QuadFieldElem;

pub type KPoly = Vec<QuadFieldElem>;

fn zero() -> QuadFieldElem {
    QuadFieldElem::from_int(0)
}

pub fn trim(mut f: KPoly) -> KPoly {
    while f.last().is_some_and(|c| c.is_zero()) {
        f.pop();
    }
    f
}

/// None for the zero polynomial.
pub fn degree(f: &[QuadFieldElem]) -> Option<usize> {
    f.iter().rposition(|c| !c.is_zero())
}

pub fn eval(f: &[QuadFieldElem], x: &QuadFieldElem) -> QuadFieldElem {
    f.iter().rev().fold(zero(), |acc, c| &(&acc * x) + c)
}

pub fn derivative(f: &[QuadFieldElem]) -> KPoly {
    trim(
        f.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| &QuadFieldElem::from_int(i as i64) * c)
            .collect(),
    )
}

pub fn monic(f: &[QuadFieldElem]) -> KPoly {
    let f = trim(f.to_vec());
    match f.last() {
        None => f,
        Some(lc) => {
            let inv = lc.inv().unwrap();
            f.iter().map(|c| c * &inv).collect()
        }
    }
}

/// Quotient and remainder; panics on division by zero.
pub fn divrem(f: &[QuadFieldElem], g: &[QuadFieldElem]) -> (KPoly, KPoly) {
    let g = trim(g.to_vec());
    let dg = degree(&g).expect("division by the zero polynomial");
    let mut r = trim(f.to_vec());
    if r.len() <= dg {
        return (vec![], r);
    }
    let inv = g[dg].inv().unwrap();
    let mut q = vec![zero(); r.len() - dg];
    while let Some(dr) = degree(&r) {
        if dr < dg {
            break;
        }
        let c = &r[dr] * &inv;
        for (i, gc) in g.iter().enumerate() {
            r[dr - dg + i] = &r[dr - dg + i] - &(&c * gc);
        }
        r[dr] = zero();
        q[dr - dg] = c;
    }
    (trim(q), trim(r))
}

/// Monic gcd.
pub fn gcd(f: &[QuadFieldElem], g: &[QuadFieldElem]) -> KPoly {
    let mut a = monic(f);
    let mut b = monic(g);
    while !b.is_empty() {
        let (_, r) = divrem(&a, &b);
        a = b;
        b = monic(&r);
    }
    a
}

/// f / gcd(f, f'), monic.
pub fn squarefree_part(f: &[QuadFieldElem]) -> KPoly {
    let g = gcd(f, &derivative(f));
    if g.len() <= 1 {
        monic(f)
    } else {
        monic(&divrem(f, &g).0)
    }
}

pub fn mul(f: &[QuadFieldElem], g: &[QuadFieldElem]) -> KPoly {
    if f.is_empty() || g.is_empty() {
        return vec![];
    }
    let mut out = vec![zero(); f.len() + g.len() - 1];
    for (i, a) in f.iter().enumerate() {
        for (j, b) in g.iter().enumerate() {
            out[i + j] = &out[i + j] + &(a * b);
        }
    }
    trim(out)
}
