//! Factorization of squarefree primitive integer polynomials: Berlekamp
//! modulo a deterministically chosen small prime, quadratic Hensel lifting
//! over a balanced factor tree, then subset recombination against a
//! Mignotte coefficient bound.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::modp::{self, PolyP};

/// Irreducible primitive integer factors of a squarefree primitive `f`
/// (positive leading coefficients, deg >= 1).
pub fn factor_squarefree_primitive(f: &[BigInt]) -> Vec<Vec<BigInt>> {
    let d = f.len() - 1;
    if d == 0 {
        return vec![];
    }
    if d == 1 {
        return vec![f.to_vec()];
    }
    let p = choose_prime(f);
    let fp = reduce_mod(f, p);
    let monic_fp = modp::make_monic(&fp, p);
    let factors_p = berlekamp(&monic_fp, p);
    if factors_p.len() == 1 {
        return vec![f.to_vec()];
    }
    // Lift target: p^e > 2 * coefficient bound for factors of f.
    let bound = mignotte_bound(f);
    let two_bound = &bound * 2;
    let mut e = 1u32;
    let mut modulus = BigInt::from(p);
    while modulus <= two_bound {
        modulus *= p;
        e += 1;
    }
    let lifted = hensel_lift_tree(f, &factors_p, p, &modulus);
    let _ = e;
    recombine(f, lifted, &modulus)
}

/// Smallest odd prime p with p not dividing lc(f) and f squarefree mod p.
fn choose_prime(f: &[BigInt]) -> u64 {
    let lc = f.last().unwrap();
    let mut p = 3u64;
    loop {
        if is_small_prime(p) && !(lc % BigInt::from(p)).is_zero() {
            let fp = reduce_mod(f, p);
            if modp::deg(&fp) == f.len() - 1 {
                let der = modp::derivative(&fp, p);
                if !modp::is_zero(&der) {
                    let g = modp::poly_gcd(&fp, &der, p);
                    if modp::deg(&g) == 0 {
                        return p;
                    }
                }
            }
        }
        p += 2;
    }
}

fn is_small_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn reduce_mod(f: &[BigInt], p: u64) -> PolyP {
    let pp = BigInt::from(p);
    modp::trim(
        f.iter()
            .map(|c| {
                let r = c.mod_floor(&pp);
                r.to_u64_digits().1.first().copied().unwrap_or(0)
            })
            .collect(),
    )
}

/// Mignotte-style bound on the absolute value of any coefficient of any
/// factor of f over Z (scaled by lc). Uses ||f||_2 <= sqrt(d+1) * H(f).
fn mignotte_bound(f: &[BigInt]) -> BigInt {
    let d = f.len() - 1;
    let height = f.iter().map(|c| c.abs()).max().unwrap();
    let sqrt_term = BigInt::from(d as u64 + 1).sqrt() + 1;
    let lc = f.last().unwrap().abs();
    (BigInt::one() << d) * sqrt_term * height * lc
}

/// Deterministic Berlekamp over F_p: monic squarefree input, monic
/// irreducible outputs.
fn berlekamp(f: &PolyP, p: u64) -> Vec<PolyP> {
    let d = modp::deg(f);
    // Rows of Q: x^{p*i} mod f, i = 0..d.
    let x = vec![0u64, 1];
    let xp = modp::poly_pow_mod(&x, p, f, p);
    let mut rows: Vec<PolyP> = Vec::with_capacity(d);
    let mut current: PolyP = vec![1];
    for _ in 0..d {
        rows.push(current.clone());
        current = modp::poly_rem(&modp::poly_mul(&current, &xp, p), f, p);
    }
    // Kernel of (Q - I)^T: vectors v with v(x)^p = v(x) mod f.
    let mut m = vec![vec![0u64; d]; d];
    for (i, row) in rows.iter().enumerate() {
        for (j, &c) in row.iter().enumerate() {
            m[j][i] = c; // transpose: columns are x^{p i} images
        }
    }
    for i in 0..d {
        m[i][i] = modp::subm(m[i][i], 1, p);
    }
    let kernel = nullspace(m, p);
    let k = kernel.len();
    if k == 1 {
        return vec![f.clone()];
    }
    // Split using the non-constant kernel vectors.
    let mut factors: Vec<PolyP> = vec![f.clone()];
    for v in kernel {
        if factors.len() == k {
            break;
        }
        let vp = modp::trim(v);
        if modp::deg(&vp) == 0 {
            continue;
        }
        let mut next: Vec<PolyP> = Vec::new();
        for u in factors {
            if factors_done(&next, k) || modp::deg(&u) <= 1 {
                next.push(u);
                continue;
            }
            let mut remaining = u.clone();
            for c in 0..p {
                if modp::deg(&remaining) == 0 {
                    break;
                }
                let shifted = modp::poly_sub(&vp, &vec![c], p);
                let g = modp::poly_gcd(&remaining, &shifted, p);
                if modp::deg(&g) > 0 && modp::deg(&g) < modp::deg(&remaining) {
                    next.push(g.clone());
                    remaining = modp::poly_divmod(&remaining, &g, p).0;
                } else if modp::deg(&g) > 0 && modp::deg(&g) == modp::deg(&remaining) {
                    // whole remaining part matched this residue; keep going
                }
            }
            if modp::deg(&remaining) > 0 {
                next.push(remaining);
            }
        }
        factors = next;
    }
    factors
}

fn factors_done(acc: &[PolyP], k: usize) -> bool {
    acc.len() >= k
}

/// Nullspace basis over F_p by Gaussian elimination.
fn nullspace(mut m: Vec<Vec<u64>>, p: u64) -> Vec<Vec<u64>> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut pivot_col_of_row = vec![usize::MAX; rows];
    let mut pivot_cols = Vec::new();
    let mut r = 0usize;
    for c in 0..cols {
        let pivot = (r..rows).find(|&i| m[i][c] != 0);
        let Some(pr) = pivot else { continue };
        m.swap(r, pr);
        let inv = modp::invm(m[r][c], p);
        for j in 0..cols {
            m[r][j] = modp::mulm(m[r][j], inv, p);
        }
        for i in 0..rows {
            if i != r && m[i][c] != 0 {
                let factor = m[i][c];
                for j in 0..cols {
                    let t = modp::mulm(factor, m[r][j], p);
                    m[i][j] = modp::subm(m[i][j], t, p);
                }
            }
        }
        pivot_col_of_row[r] = c;
        pivot_cols.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    let mut basis = Vec::new();
    for free in 0..cols {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = vec![0u64; cols];
        v[free] = 1;
        for (row, &pc) in pivot_col_of_row.iter().enumerate() {
            if pc == usize::MAX {
                continue;
            }
            // pivot var = -sum of free contributions
            let coeff = m[row][free];
            if coeff != 0 {
                v[pc] = modp::subm(0, coeff, p);
            }
        }
        basis.push(v);
    }
    basis
}

// --- Hensel lifting over Z/m ---

fn mod_reduce(f: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let mut out: Vec<BigInt> = f.iter().map(|c| c.mod_floor(m)).collect();
    while out.len() > 1 && out.last().unwrap().is_zero() {
        out.pop();
    }
    out
}

fn zpoly_mul(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, ac) in a.iter().enumerate() {
        if ac.is_zero() {
            continue;
        }
        for (j, bc) in b.iter().enumerate() {
            out[i + j] = (&out[i + j] + ac * bc).mod_floor(m);
        }
    }
    mod_reduce(&out, m)
}

fn zpoly_add(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] = c.clone();
    }
    for (i, c) in b.iter().enumerate() {
        out[i] = (&out[i] + c).mod_floor(m);
    }
    mod_reduce(&out, m)
}

fn zpoly_sub(a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] = c.clone();
    }
    for (i, c) in b.iter().enumerate() {
        out[i] = (&out[i] - c).mod_floor(m);
    }
    mod_reduce(&out, m)
}

/// Division by a monic divisor over Z/m.
fn zpoly_divmod_monic(a: &[BigInt], b: &[BigInt], m: &BigInt) -> (Vec<BigInt>, Vec<BigInt>) {
    let db = b.len() - 1;
    debug_assert!(b.last().unwrap().is_one());
    let mut rem = a.to_vec();
    if rem.len() <= db {
        return (vec![BigInt::zero()], mod_reduce(&rem, m));
    }
    let mut quot = vec![BigInt::zero(); rem.len() - db];
    for shift in (0..=rem.len() - db - 1).rev() {
        let factor = rem[shift + db].mod_floor(m);
        if !factor.is_zero() {
            quot[shift] = factor.clone();
            for (i, bc) in b.iter().enumerate() {
                rem[i + shift] = (&rem[i + shift] - &factor * bc).mod_floor(m);
            }
        }
    }
    (mod_reduce(&quot, m), mod_reduce(&rem, m))
}

fn lift_from_p(f: &PolyP) -> Vec<BigInt> {
    f.iter().map(|&c| BigInt::from(c)).collect()
}

/// One quadratic Hensel step: from f = g h (mod m), s g + t h = 1 (mod m),
/// g monic, to the same data modulo m^2 (g stays monic).
#[allow(clippy::too_many_arguments)]
fn hensel_step(
    f: &[BigInt],
    g: &[BigInt],
    h: &[BigInt],
    s: &[BigInt],
    t: &[BigInt],
    m: &BigInt,
) -> (Vec<BigInt>, Vec<BigInt>, Vec<BigInt>, Vec<BigInt>) {
    let m2 = m * m;
    let fh = mod_reduce(f, &m2);
    let gg = mod_reduce(g, &m2);
    let hh = mod_reduce(h, &m2);
    let ss = mod_reduce(s, &m2);
    let tt = mod_reduce(t, &m2);

    // With s g + t h = 1: (q, r) = divmod(t e, g) gives
    // (g + r)(h + s e + q h) = g h + e (s g + t h) = f mod m^2.
    let e = zpoly_sub(&fh, &zpoly_mul(&gg, &hh, &m2), &m2);
    let te = zpoly_mul(&tt, &e, &m2);
    let (q, r) = zpoly_divmod_monic(&te, &gg, &m2);
    let g_star = zpoly_add(&gg, &r, &m2);
    let h_star = zpoly_add(&hh, &zpoly_add(&zpoly_mul(&ss, &e, &m2), &zpoly_mul(&q, &hh, &m2), &m2), &m2);

    // Bezout update, g* monic: with tb = c g* + d,
    // (s - sb - c h*) g* + (t - d) h* - 1 = -b^2 = 0 mod m^2.
    let one = vec![BigInt::one()];
    let b = zpoly_sub(
        &zpoly_add(
            &zpoly_mul(&ss, &g_star, &m2),
            &zpoly_mul(&tt, &h_star, &m2),
            &m2,
        ),
        &one,
        &m2,
    );
    let tb = zpoly_mul(&tt, &b, &m2);
    let (c, d) = zpoly_divmod_monic(&tb, &g_star, &m2);
    let t_star = zpoly_sub(&tt, &d, &m2);
    let s_star = zpoly_sub(
        &ss,
        &zpoly_add(&zpoly_mul(&ss, &b, &m2), &zpoly_mul(&c, &h_star, &m2), &m2),
        &m2,
    );
    (g_star, h_star, s_star, t_star)
}

/// Lifts the factorization f = lc * prod(factors_p) (mod p) to
/// (mod target), returning monic factors over Z/target. Balanced two-way
/// splits, each lifted quadratically.
fn hensel_lift_tree(
    f: &[BigInt],
    factors_p: &[PolyP],
    p: u64,
    target: &BigInt,
) -> Vec<Vec<BigInt>> {
    if factors_p.len() == 1 {
        // Monicize f modulo target.
        let fm = mod_reduce(f, target);
        let lc = fm.last().unwrap().clone();
        let lc_inv = mod_inverse(&lc, target);
        let scaled: Vec<BigInt> = fm.iter().map(|c| (c * &lc_inv).mod_floor(target)).collect();
        return vec![mod_reduce(&scaled, target)];
    }
    let mid = factors_p.len() / 2;
    let (left, right) = factors_p.split_at(mid);
    // g0 = prod left (monic), h0 = lc * prod right (mod p)
    let mut g0: PolyP = vec![1];
    for fac in left {
        g0 = modp::poly_mul(&g0, fac, p);
    }
    let mut h0: PolyP = vec![1];
    for fac in right {
        h0 = modp::poly_mul(&h0, fac, p);
    }
    let lc_p = {
        let pm = BigInt::from(p);
        let r = f.last().unwrap().mod_floor(&pm);
        r.to_u64_digits().1.first().copied().unwrap_or(0)
    };
    h0 = modp::poly_scale(&h0, lc_p, p);
    let (gcd, s0, t0) = modp::poly_ext_gcd(&g0, &h0, p);
    debug_assert_eq!(gcd, vec![1], "tree halves are coprime mod p");

    let mut g = lift_from_p(&g0);
    let mut h = lift_from_p(&h0);
    let mut s = lift_from_p(&s0);
    let mut t = lift_from_p(&t0);
    let mut m = BigInt::from(p);
    while &m < target {
        let (g2, h2, s2, t2) = hensel_step(f, &g, &h, &s, &t, &m);
        g = g2;
        h = h2;
        s = s2;
        t = t2;
        m = &m * &m;
    }
    let g = mod_reduce(&g, target);
    let h = mod_reduce(&h, target);
    let mut out = hensel_lift_tree(&g, left, p, target);
    out.extend(hensel_lift_tree(&h, right, p, target));
    out
}

/// Inverse of a unit modulo m (m is a prime power here).
fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.extended_gcd(m);
    debug_assert!(e.gcd.is_one(), "unit expected");
    e.x.mod_floor(m)
}

/// Symmetric representative in (-m/2, m/2].
fn symmetric(c: &BigInt, m: &BigInt) -> BigInt {
    let r = c.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

fn content(f: &[BigInt]) -> BigInt {
    let mut g = BigInt::zero();
    for c in f {
        g = g.gcd(c);
    }
    if g.is_zero() {
        BigInt::one()
    } else {
        g
    }
}

fn primitive_positive(f: &[BigInt]) -> Vec<BigInt> {
    let mut c = content(f);
    if f.last().unwrap().is_negative() {
        c = -c;
    }
    f.iter().map(|x| x / &c).collect()
}

/// Exact division test over Z via rational division: for primitive g and
/// integer f, remainder zero means g | f in Z[x].
fn divides_exactly(f: &[BigInt], g: &[BigInt]) -> Option<Vec<BigInt>> {
    if g.len() > f.len() {
        return None;
    }
    use crate::densepoly::{divmod_univar, DensePoly};
    use crate::field::Rational;
    let fd = DensePoly::univar_from_coeffs(
        &f.iter().map(|c| Rational::from_bigint(c.clone())).collect::<Vec<_>>(),
    );
    let gd = DensePoly::univar_from_coeffs(
        &g.iter().map(|c| Rational::from_bigint(c.clone())).collect::<Vec<_>>(),
    );
    let (q, r) = divmod_univar(&fd, &gd).ok()?;
    if !r.is_zero() {
        return None;
    }
    let qc = q.univar_coeffs();
    let mut out = Vec::with_capacity(qc.len());
    for c in qc {
        if !c.is_integer() {
            return None;
        }
        out.push(c.numer().clone());
    }
    Some(out)
}

/// Subset recombination of lifted factors into true integer factors.
fn recombine(f: &[BigInt], lifted: Vec<Vec<BigInt>>, modulus: &BigInt) -> Vec<Vec<BigInt>> {
    let mut pool: Vec<Vec<BigInt>> = lifted;
    let mut remaining = f.to_vec();
    let mut out = Vec::new();
    let mut subset_size = 1usize;
    'outer: while 2 * subset_size <= pool.len() {
        let indices: Vec<usize> = (0..pool.len()).collect();
        for combo in combinations(&indices, subset_size) {
            let lc = remaining.last().unwrap().clone();
            let mut prod = vec![lc.mod_floor(modulus)];
            for &i in &combo {
                prod = zpoly_mul(&prod, &pool[i], modulus);
            }
            let sym: Vec<BigInt> = prod.iter().map(|c| symmetric(c, modulus)).collect();
            let candidate = primitive_positive(&sym);
            if let Some(quotient) = divides_exactly(&remaining, &candidate) {
                out.push(candidate);
                remaining = primitive_positive(&quotient);
                let keep: Vec<Vec<BigInt>> = pool
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| !combo.contains(i))
                    .map(|(_, v)| v.clone())
                    .collect();
                pool = keep;
                continue 'outer;
            }
        }
        subset_size += 1;
    }
    if remaining.len() > 1 {
        out.push(primitive_positive(&remaining));
    }
    out
}

/// Size-k index subsets of `items` in lexicographic order.
fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let n = items.len();
    if k > n {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.iter().map(|&i| items[i]).collect());
        // Rightmost index that can still advance.
        let mut i = k as isize - 1;
        while i >= 0 && idx[i as usize] == i as usize + n - k {
            i -= 1;
        }
        if i < 0 {
            return out;
        }
        let i = i as usize;
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}
