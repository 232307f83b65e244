use crate::error::{Error, Result};
use crate::set::IntSet;
use crate::tuples::is_sidon;

pub fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// `Some((p, k))` when `q = pᵏ` with `p` prime and `k ≥ 1`.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let (mut rest, mut k) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

/// `{2pk + (k² mod p) : 0 ≤ k < p}`, shifted into `[1, 2p²]`.
pub fn erdos_turan_set(p: u32) -> Result<IntSet> {
    if !is_prime(p) {
        return Err(Error::Argument(format!("{p} is not prime")));
    }
    let (p64, elems): (u64, Vec<u64>) = (p as u64, (0..p as u64).collect());
    let values = elems.iter().map(|&k| 2 * p64 * k + (k * k) % p64 + 1).map(|x| x as u32).collect();
    let set = IntSet::new(values)?;
    if !is_sidon(&set) {
        return Err(Error::Domain(format!("construction for p = {p} is not Sidon")));
    }
    Ok(set)
}

/// Largest `q³` the field tables are built for.
const SINGER_FIELD_CAP: u64 = 1 << 27;

/// A Singer perfect difference set modulo `q² + q + 1`, shifted into
/// `[1, q² + q + 1]`. Supports every prime power `q` with `q³ ≤ 2²⁷`.
///
/// Built in `GF(q³) = GF(p)[x]/(f)` for a primitive `f` of degree `3k`:
/// with `θ = x`, the exponents `i < q² + q + 1` where
/// `θ^i + θ^{iq} + θ^{iq²} = 0` form the set.
pub fn singer_set(q: u32) -> Result<IntSet> {
    let (p, k) = prime_power(q).ok_or_else(|| Error::Argument(format!("{q} is not a prime power")))?;
    let size = (q as u64).pow(3);
    if size > SINGER_FIELD_CAP {
        return Err(Error::Argument(format!("q = {q} is too large for the field tables")));
    }
    let field = Field::new(p, 3 * k as usize);
    let order = (size - 1) as usize;
    let modulus = q as usize * q as usize + q as usize + 1;
    let qq = q as usize;
    let elems = (0..modulus)
        .filter(|&i| {
            let a = field.exp[i];
            let b = field.exp[(i * qq) % order];
            let c = field.exp[(i * qq % order) * qq % order];
            field.add(field.add(a, b), c) == 0
        })
        .map(|i| i as u32 + 1)
        .collect();
    let set = IntSet::new(elems)?;
    if set.len() != qq + 1 || !is_sidon(&set) {
        return Err(Error::Domain(format!("Singer construction failed for q = {q}")));
    }
    Ok(set)
}

/// `GF(p^d)` with elements encoded as base-`p` integers (coefficient of
/// `x^j` is digit `j`) and a table `exp[i] = x^i`.
struct Field {
    p: u32,
    d: usize,
    exp: Vec<u32>,
}

impl Field {
    fn new(p: u32, d: usize) -> Self {
        let size = (p as u64).pow(d as u32);
        let poly = primitive_poly(p, d, size - 1);
        let mut exp = Vec::with_capacity(size as usize - 1);
        let mut cur = vec![0u32; d];
        cur[0] = 1;
        for _ in 0..size - 1 {
            exp.push(encode(&cur, p));
            cur = mul_x(&cur, &poly, p);
        }
        Field { p, d, exp }
    }

    fn add(&self, a: u32, b: u32) -> u32 {
        let (mut a, mut b) = (a, b);
        let (mut out, mut scale) = (0, 1);
        for _ in 0..self.d {
            out += ((a % self.p + b % self.p) % self.p) * scale;
            a /= self.p;
            b /= self.p;
            scale *= self.p;
        }
        out
    }
}

fn encode(c: &[u32], p: u32) -> u32 {
    c.iter().rev().fold(0, |acc, &x| acc * p + x)
}

/// `c·x mod f`, where `f = x^d + Σ f_j x^j` is given by its low coefficients.
fn mul_x(c: &[u32], f: &[u32], p: u32) -> Vec<u32> {
    let d = c.len();
    let top = c[d - 1];
    let mut out = vec![0u32; d];
    for j in (1..d).rev() {
        out[j] = c[j - 1];
    }
    for j in 0..d {
        out[j] = (out[j] + (p - f[j]) * top) % p;
    }
    out
}

fn mul_mod(a: &[u32], b: &[u32], f: &[u32], p: u32) -> Vec<u32> {
    let d = a.len();
    let mut acc = vec![0u32; d];
    // Horner over the coefficients of b, highest first.
    for j in (0..d).rev() {
        acc = mul_x(&acc, f, p);
        for i in 0..d {
            acc[i] = (acc[i] + a[i] * b[j]) % p;
        }
    }
    acc
}

fn pow_x(e: u64, f: &[u32], p: u32) -> Vec<u32> {
    let d = f.len();
    let mut result = vec![0u32; d];
    result[0] = 1;
    let mut base = vec![0u32; d];
    if d == 1 {
        base[0] = (p - f[0]) % p;
    } else {
        base[1] = 1;
    }
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            result = mul_mod(&result, &base, f, p);
        }
        base = mul_mod(&base, &base, f, p);
        e >>= 1;
    }
    result
}

fn prime_factors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= m {
        if m.is_multiple_of(d) {
            out.push(d);
            while m.is_multiple_of(d) {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

/// First monic `f` of degree `d` (in base-`p` order of its low
/// coefficients) for which `x` has multiplicative order `order`.
fn primitive_poly(p: u32, d: usize, order: u64) -> Vec<u32> {
    let factors = prime_factors(order);
    let mut one = vec![0u32; d];
    one[0] = 1;
    let total = (p as u64).pow(d as u32);
    for code in 0..total {
        let mut f = vec![0u32; d];
        let mut c = code;
        for slot in f.iter_mut() {
            *slot = (c % p as u64) as u32;
            c /= p as u64;
        }
        if f[0] == 0 {
            continue;
        }
        if pow_x(order, &f, p) == one && factors.iter().all(|&r| pow_x(order / r, &f, p) != one) {
            return f;
        }
    }
    unreachable!("GF({p}^{d}) always has a primitive polynomial")
}
