//! Dense univariate arithmetic over F_p for a small odd prime p.
//! Coefficients constant-term first, always trimmed.

use alloc::vec;
use alloc::vec::Vec;

pub type PolyP = Vec<u64>;

pub fn trim(mut p: PolyP) -> PolyP {
    while p.len() > 1 && *p.last().unwrap() == 0 {
        p.pop();
    }
    p
}

pub fn is_zero(p: &[u64]) -> bool {
    p.iter().all(|&c| c == 0)
}

pub fn deg(p: &[u64]) -> usize {
    debug_assert!(p.len() == 1 || *p.last().unwrap() != 0);
    p.len() - 1
}

pub fn addm(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

pub fn subm(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

pub fn mulm(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn powm(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulm(acc, a, p);
        }
        a = mulm(a, a, p);
        e >>= 1;
    }
    acc
}

pub fn invm(a: u64, p: u64) -> u64 {
    powm(a, p - 2, p)
}

#[cfg(test)]
pub fn poly_add(a: &[u64], b: &[u64], p: u64) -> PolyP {
    let mut out = vec![0u64; a.len().max(b.len())];
    for (i, &c) in a.iter().enumerate() {
        out[i] = c;
    }
    for (i, &c) in b.iter().enumerate() {
        out[i] = addm(out[i], c, p);
    }
    trim(out)
}

pub fn poly_sub(a: &[u64], b: &[u64], p: u64) -> PolyP {
    let mut out = vec![0u64; a.len().max(b.len())];
    for (i, &c) in a.iter().enumerate() {
        out[i] = c;
    }
    for (i, &c) in b.iter().enumerate() {
        out[i] = subm(out[i], c, p);
    }
    trim(out)
}

pub fn poly_mul(a: &[u64], b: &[u64], p: u64) -> PolyP {
    if is_zero(a) || is_zero(b) {
        return vec![0];
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &ac) in a.iter().enumerate() {
        if ac == 0 {
            continue;
        }
        for (j, &bc) in b.iter().enumerate() {
            out[i + j] = addm(out[i + j], mulm(ac, bc, p), p);
        }
    }
    trim(out)
}

pub fn poly_scale(a: &[u64], k: u64, p: u64) -> PolyP {
    trim(a.iter().map(|&c| mulm(c, k, p)).collect())
}

/// (quotient, remainder) with b nonzero.
pub fn poly_divmod(a: &[u64], b: &[u64], p: u64) -> (PolyP, PolyP) {
    let db = deg(b);
    let mut rem: PolyP = trim(a.to_vec());
    if is_zero(&rem) || deg(&rem) < db {
        return (vec![0], rem);
    }
    let lead_inv = invm(*b.last().unwrap(), p);
    let mut quot = vec![0u64; deg(&rem) - db + 1];
    while !is_zero(&rem) && deg(&rem) >= db {
        let shift = deg(&rem) - db;
        let factor = mulm(*rem.last().unwrap(), lead_inv, p);
        quot[shift] = factor;
        for (i, &bc) in b.iter().enumerate() {
            rem[i + shift] = subm(rem[i + shift], mulm(factor, bc, p), p);
        }
        rem = trim(rem);
        if rem.len() == 1 && rem[0] == 0 {
            break;
        }
    }
    (trim(quot), rem)
}

pub fn poly_rem(a: &[u64], b: &[u64], p: u64) -> PolyP {
    poly_divmod(a, b, p).1
}

pub fn make_monic(a: &[u64], p: u64) -> PolyP {
    if is_zero(a) {
        return vec![0];
    }
    let inv = invm(*a.last().unwrap(), p);
    poly_scale(a, inv, p)
}

/// Monic gcd.
pub fn poly_gcd(a: &[u64], b: &[u64], p: u64) -> PolyP {
    let mut x = trim(a.to_vec());
    let mut y = trim(b.to_vec());
    while !is_zero(&y) {
        let r = poly_rem(&x, &y, p);
        x = y;
        y = r;
    }
    make_monic(&x, p)
}

/// Extended gcd: returns (g, s, t) monic g with s*a + t*b = g.
pub fn poly_ext_gcd(a: &[u64], b: &[u64], p: u64) -> (PolyP, PolyP, PolyP) {
    let mut r0 = trim(a.to_vec());
    let mut r1 = trim(b.to_vec());
    let mut s0: PolyP = vec![1];
    let mut s1: PolyP = vec![0];
    let mut t0: PolyP = vec![0];
    let mut t1: PolyP = vec![1];
    while !is_zero(&r1) {
        let (q, rem) = poly_divmod(&r0, &r1, p);
        let s2 = poly_sub(&s0, &poly_mul(&q, &s1, p), p);
        let t2 = poly_sub(&t0, &poly_mul(&q, &t1, p), p);
        r0 = r1;
        r1 = rem;
        s0 = s1;
        s1 = s2;
        t0 = t1;
        t1 = t2;
    }
    if is_zero(&r0) {
        return (r0, s0, t0);
    }
    let lead_inv = invm(*r0.last().unwrap(), p);
    (
        poly_scale(&r0, lead_inv, p),
        poly_scale(&s0, lead_inv, p),
        poly_scale(&t0, lead_inv, p),
    )
}

pub fn derivative(a: &[u64], p: u64) -> PolyP {
    if a.len() <= 1 {
        return vec![0];
    }
    trim(
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| mulm(c, (i as u64) % p, p))
            .collect(),
    )
}

/// a^e mod m.
pub fn poly_pow_mod(a: &[u64], mut e: u64, m: &[u64], p: u64) -> PolyP {
    let mut acc: PolyP = vec![1];
    let mut base = poly_rem(a, m, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = poly_rem(&poly_mul(&acc, &base, p), m, p);
        }
        base = poly_rem(&poly_mul(&base, &base, p), m, p);
        e >>= 1;
    }
    acc
}
