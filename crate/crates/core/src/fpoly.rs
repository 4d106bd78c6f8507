//! Dense polynomials over a prime field `F_p`, little-endian coefficient
//! vectors. Only what ring construction needs: irreducibility testing and
//! a deterministic search for irreducible moduli.

pub(crate) fn trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

fn degree(a: &[u64]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
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

/// Remainder of `a` modulo `f` (any nonzero `f`).
fn rem(a: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    let mut r: Vec<u64> = a.iter().map(|c| c % p).collect();
    trim(&mut r);
    let df = degree(f).expect("division by zero polynomial");
    let lead_inv = inv_mod(f[df], p);
    while let Some(dr) = degree(&r) {
        if dr < df {
            break;
        }
        let c = r[dr] * lead_inv % p;
        let shift = dr - df;
        for (j, &fj) in f.iter().enumerate().take(df + 1) {
            r[shift + j] = (r[shift + j] + p - c * fj % p) % p;
        }
        trim(&mut r);
    }
    r
}

fn mul_mod(a: &[u64], b: &[u64], f: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    rem(&out, f, p)
}

fn pow_poly_mod(base: &[u64], mut exp: u64, f: &[u64], p: u64) -> Vec<u64> {
    let mut acc = rem(&[1], f, p);
    let mut b = rem(base, f, p);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(&acc, &b, f, p);
        }
        b = mul_mod(&b, &b, f, p);
        exp >>= 1;
    }
    acc
}

fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x: Vec<u64> = a.to_vec();
    let mut y: Vec<u64> = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    x
}

fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out: Vec<u64> = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y % p) % p
        })
        .collect();
    trim(&mut out);
    out
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
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

pub(crate) fn is_prime(n: u64) -> bool {
    n >= 2 && prime_factors(n) == [n]
}

/// x^(p^e) mod f by repeated p-th powering.
fn frobenius_x(e: usize, f: &[u64], p: u64) -> Vec<u64> {
    let mut x = rem(&[0, 1], f, p);
    for _ in 0..e {
        x = pow_poly_mod(&x, p, f, p);
    }
    x
}

/// Rabin's test: `f` (degree `s >= 1`, coefficients reduced mod p) is
/// irreducible iff x^(p^s) = x mod f and gcd(x^(p^(s/d)) - x, f) = 1 for
/// every prime d | s.
pub(crate) fn is_irreducible(f: &[u64], p: u64) -> bool {
    let mut f: Vec<u64> = f.iter().map(|c| c % p).collect();
    trim(&mut f);
    let Some(s) = degree(&f) else { return false };
    if s == 0 {
        return false;
    }
    if s == 1 {
        return true;
    }
    let x = rem(&[0, 1], &f, p);
    if sub(&frobenius_x(s, &f, p), &x, p) != Vec::<u64>::new() {
        return false;
    }
    for d in prime_factors(s as u64) {
        let h = sub(&frobenius_x(s / d as usize, &f, p), &x, p);
        let g = gcd(&h, &f, p);
        if degree(&g) != Some(0) {
            return false;
        }
    }
    true
}

/// Smallest monic irreducible polynomial of degree `s` over `F_p`, ordering
/// candidates by the integer whose base-p digits are the low coefficients.
pub(crate) fn smallest_irreducible(p: u64, s: usize) -> Vec<u64> {
    let count = p.pow(s as u32);
    for idx in 0..count {
        let mut f = Vec::with_capacity(s + 1);
        let mut t = idx;
        for _ in 0..s {
            f.push(t % p);
            t /= p;
        }
        f.push(1);
        if is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}
