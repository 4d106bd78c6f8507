//! Brute-force oracles built only from ring arithmetic and the
//! representative set. Nothing here calls the reduction machinery.
#![allow(dead_code)]

use std::collections::HashSet;

use chainmdp::conv::PolyMatrix;
use chainmdp::{ChainRing, Elem, RingMatrix};
use rand::Rng;

pub fn zmod(p: u64, r: u32) -> ChainRing {
    ChainRing::integers_mod(p, r).unwrap()
}

pub fn field(p: u64) -> ChainRing {
    ChainRing::prime_field(p).unwrap()
}

/// Every tuple of `m` indices below `base`, as digit vectors.
pub fn tuples(base: usize, m: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = base.pow(m as u32);
    (0..total).map(move |mut x| {
        (0..m)
            .map(|_| {
                let d = x % base;
                x /= base;
                d
            })
            .collect()
    })
}

fn combo(ring: &ChainRing, rows: &[Vec<Elem>], coeffs: &[Elem], width: usize) -> Vec<Elem> {
    let mut out = vec![ring.zero(); width];
    for (c, row) in coeffs.iter().zip(rows) {
        for (o, x) in out.iter_mut().zip(row) {
            *o = ring.add(o, &ring.mul(c, x));
        }
    }
    out
}

/// All T-linear combinations of the rows.
pub fn t_span(a: &RingMatrix) -> HashSet<Vec<Elem>> {
    let ring = a.ring();
    let t = ring.representatives();
    let rows = a.row_vectors();
    tuples(t.len(), rows.len())
        .map(|d| {
            let c: Vec<Elem> = d.iter().map(|&i| t[i]).collect();
            combo(ring, &rows, &c, a.cols())
        })
        .collect()
}

/// No nonzero T-combination vanishes.
pub fn brute_independent(a: &RingMatrix) -> bool {
    let ring = a.ring();
    let t = ring.representatives();
    let rows = a.row_vectors();
    tuples(t.len(), rows.len()).skip(1).all(|d| {
        let c: Vec<Elem> = d.iter().map(|&i| t[i]).collect();
        combo(ring, &rows, &c, a.cols()).iter().any(|x| !x.is_zero())
    })
}

/// gamma * row i is a T-combination of the later rows, for every i.
pub fn brute_generator_sequence(a: &RingMatrix) -> bool {
    let ring = a.ring();
    let rows = a.row_vectors();
    (0..rows.len()).all(|i| {
        let target: Vec<Elem> = rows[i].iter().map(|x| ring.mul(&ring.gamma(), x)).collect();
        let tail = RingMatrix::from_rows(ring, a.cols(), &rows[i + 1..]).unwrap();
        if tail.rows() == 0 {
            return target.iter().all(Elem::is_zero);
        }
        t_span(&tail).contains(&target)
    })
}

/// Cofactor expansion along the first row.
pub fn laplace_det(a: &RingMatrix) -> Elem {
    let ring = a.ring();
    let n = a.rows();
    fn rec(ring: &ChainRing, m: &[Vec<Elem>]) -> Elem {
        let n = m.len();
        if n == 0 {
            return ring.one();
        }
        let mut acc = ring.zero();
        for j in 0..n {
            let minor: Vec<Vec<Elem>> = m[1..]
                .iter()
                .map(|r| r.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| *x).collect())
                .collect();
            let term = ring.mul(&m[0][j], &rec(ring, &minor));
            acc = if j % 2 == 0 { ring.add(&acc, &term) } else { ring.sub(&acc, &term) };
        }
        acc
    }
    assert_eq!(n, a.cols());
    rec(ring, &a.row_vectors())
}

pub fn weight(v: &[Elem]) -> usize {
    v.iter().filter(|x| !x.is_zero()).count()
}

/// Minimum weight over nonzero words of the T-span.
pub fn brute_min_distance(a: &RingMatrix) -> usize {
    t_span(a).iter().filter(|v| weight(v) > 0).map(|v| weight(v)).min().unwrap_or(a.cols())
}

/// Column distance from its general definition: the minimum weight of
/// `v_[0,j]` over codewords `v = u G` with `v_0 != 0`, where `u` ranges
/// over all of `R[z]^k` truncated at degree `j`.
pub fn brute_column_distance(g: &PolyMatrix, j: usize) -> usize {
    let ring = g.ring();
    let elems: Vec<Elem> = ring.elements().collect();
    let (k, n) = (g.rows(), g.cols());
    let gc = g.sliding_matrix(j);
    let rows = gc.row_vectors();
    let mut best = usize::MAX;
    for d in tuples(elems.len(), (j + 1) * k) {
        let u: Vec<Elem> = d.iter().map(|&i| elems[i]).collect();
        let v = combo(ring, &rows, &u, (j + 1) * n);
        if v[..n].iter().all(Elem::is_zero) {
            continue;
        }
        best = best.min(weight(&v));
    }
    best
}

/// Unit minors of every proper square submatrix, by cofactor expansion.
pub fn brute_superregular(a: &RingMatrix) -> bool {
    let ring = a.ring();
    let l = a.rows();
    for s in 1..=l {
        let sets: Vec<Vec<usize>> = (0u32..1 << l)
            .filter(|m| m.count_ones() as usize == s)
            .map(|m| (0..l).filter(|i| m >> i & 1 == 1).collect())
            .collect();
        for i in &sets {
            for j in &sets {
                if i.iter().zip(j).all(|(a, b)| a <= b) && !ring.is_unit(&laplace_det(&a.submatrix(i, j))) {
                    return false;
                }
            }
        }
    }
    true
}

pub fn toeplitz(ring: &ChainRing, row: &[Elem]) -> RingMatrix {
    let l = row.len();
    let mut m = RingMatrix::zeros(ring, l, l);
    for i in 0..l {
        for j in i..l {
            m.set(i, j, row[j - i]);
        }
    }
    m
}

pub fn random_matrix<G: Rng>(ring: &ChainRing, rows: usize, cols: usize, rng: &mut G) -> RingMatrix {
    let v: Vec<Vec<Elem>> = (0..rows)
        .map(|_| (0..cols).map(|_| ring.random_element(rng)).collect())
        .collect();
    RingMatrix::from_rows(ring, cols, &v).unwrap()
}

/// Random gamma-generator sequence: random rows followed by their gamma
/// multiples, in the layered order of a gamma-basis.
pub fn random_generator_sequence<G: Rng>(ring: &ChainRing, rows: usize, cols: usize, rng: &mut G) -> RingMatrix {
    let base = random_matrix(ring, rows, cols, rng);
    let mut out: Vec<Vec<Elem>> = Vec::new();
    for e in 0..ring.nu() {
        out.extend(base.mul_gamma_pow(e).row_vectors());
    }
    // keep a random-length suffix-closed tail so shapes vary
    let skip = rng.gen_range(0..=rows.min(out.len().saturating_sub(1)));
    let kept: Vec<Vec<Elem>> = out.into_iter().skip(skip).filter(|r| r.iter().any(|x| !x.is_zero())).collect();
    RingMatrix::from_rows(ring, cols, &kept).unwrap()
}

/// Delay-free code over a ring with nu = 2 and k = 2: rows `g` and
/// `gamma g`, `g(0)` and the leading coefficient each having a unit entry.
pub fn random_delay_free_code<G: Rng>(ring: &ChainRing, n: usize, max_deg: usize, rng: &mut G) -> PolyMatrix {
    loop {
        let deg = rng.gen_range(0..=max_deg);
        let g: Vec<Vec<Elem>> = (0..=deg)
            .map(|_| (0..n).map(|_| ring.random_element(rng)).collect())
            .collect();
        let has_unit = |v: &Vec<Elem>| v.iter().any(|x| ring.is_unit(x));
        if !has_unit(&g[0]) || !has_unit(&g[deg]) {
            continue;
        }
        let coeffs: Vec<RingMatrix> = g
            .iter()
            .map(|c| {
                let gc: Vec<Elem> = c.iter().map(|x| ring.mul(&ring.gamma(), x)).collect();
                RingMatrix::from_rows(ring, n, &[c.clone(), gc]).unwrap()
            })
            .collect();
        return PolyMatrix::new(ring, 2, n, coeffs).unwrap();
    }
}

/// Random reduced encoder over a field: `k` rows of degrees drawn up to
/// `max_deg`, retried until reduced and delay-free.
pub fn random_field_encoder<G: Rng>(f: &ChainRing, k: usize, n: usize, max_deg: usize, equal_degrees: bool, rng: &mut G) -> PolyMatrix {
    loop {
        let d0 = rng.gen_range(0..=max_deg);
        let degs: Vec<usize> = (0..k).map(|_| if equal_degrees { d0 } else { rng.gen_range(0..=max_deg) }).collect();
        let top = *degs.iter().max().unwrap();
        let coeffs: Vec<RingMatrix> = (0..=top)
            .map(|t| {
                let rows: Vec<Vec<Elem>> = degs
                    .iter()
                    .map(|&d| (0..n).map(|_| if t <= d { f.random_element(rng) } else { f.zero() }).collect())
                    .collect();
                RingMatrix::from_rows(f, n, &rows).unwrap()
            })
            .collect();
        let p = PolyMatrix::new(f, k, n, coeffs).unwrap();
        if p.row_degrees().map(|d| d == degs).unwrap_or(false) && p.is_reduced().unwrap() && p.is_delay_free().unwrap() {
            return p;
        }
    }
}
