//! Gamma-linear algebra: diagonal reduction, module shapes, generator
//! sequences, gamma-independence, gamma-bases and the standard forms.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::RingMatrix;
use crate::ring::{ChainRing, Elem};

/// Default cap on enumeration work (kernel members, messages, ...).
pub const DEFAULT_BUDGET: u128 = 10_000_000;

/// `L * A * R = diag(gamma^e_1, ..., gamma^e_t, 0, ...)`.
#[derive(Clone, Debug)]
pub struct DiagonalReduction {
    pub exponents: Vec<usize>,
    pub left: RingMatrix,
    pub right: RingMatrix,
    pub right_inv: RingMatrix,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NuShape {
    /// `(mu_1, ..., mu_nu)`
    pub mu: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BlockParameters {
    /// `(k_0, ..., k_{nu-1})`
    pub k_list: Vec<usize>,
}

impl BlockParameters {
    pub fn nu(&self) -> usize {
        self.k_list.len()
    }

    /// `sum k_i (nu - i)`
    pub fn gamma_dimension(&self) -> usize {
        let nu = self.nu();
        self.k_list.iter().enumerate().map(|(i, k)| k * (nu - i)).sum()
    }

    pub fn total(&self) -> usize {
        self.k_list.iter().sum()
    }

    /// `k_i`, zero outside `0..nu`.
    pub fn get(&self, i: usize) -> usize {
        self.k_list.get(i).copied().unwrap_or(0)
    }

    /// `(k/nu, 0, ..., 0)`, the parameters of a free rank-`k/nu` code.
    pub fn is_free_with_rank(&self, rank: usize) -> bool {
        self.get(0) == rank && self.k_list.iter().skip(1).all(|&x| x == 0)
    }
}

impl NuShape {
    pub fn parameters(&self) -> BlockParameters {
        let mut prev = 0;
        let k_list = self
            .mu
            .iter()
            .map(|&m| {
                let k = m - prev;
                prev = m;
                k
            })
            .collect();
        BlockParameters { k_list }
    }
}

pub fn diagonal_reduction(a: &RingMatrix) -> DiagonalReduction {
    let ring = a.ring().clone();
    let nu = ring.nu();
    let (m, n) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut left = RingMatrix::identity(&ring, m);
    let mut right = RingMatrix::identity(&ring, n);
    let mut right_inv = RingMatrix::identity(&ring, n);
    let mut exponents = Vec::new();
    for t in 0..m.min(n) {
        let mut best: Option<(usize, usize, usize)> = None;
        'scan: for j in t..n {
            for i in t..m {
                let v = ring.valuation(&d.get(i, j));
                if v < best.map_or(nu, |b| b.0) {
                    best = Some((v, i, j));
                    if v == 0 {
                        break 'scan;
                    }
                }
            }
        }
        let Some((e, pi, pj)) = best else { break };
        d.swap_rows(t, pi);
        left.swap_rows(t, pi);
        d.swap_cols(t, pj);
        right.swap_cols(t, pj);
        right_inv.swap_rows(t, pj);

        let unit = ring.div_gamma_pow(&d.get(t, t), e);
        let uinv = ring.invert_unit(&unit).expect("unit part of a pivot");
        d.scale_row(t, &uinv);
        left.scale_row(t, &uinv);

        for i in t + 1..m {
            let x = d.get(i, t);
            if x.is_zero() {
                continue;
            }
            let c = ring.neg(&ring.div_gamma_pow(&x, e));
            d.add_row_multiple(i, t, &c);
            left.add_row_multiple(i, t, &c);
        }
        for j in t + 1..n {
            let x = d.get(t, j);
            if x.is_zero() {
                continue;
            }
            let c = ring.div_gamma_pow(&x, e);
            let neg = ring.neg(&c);
            d.add_col_multiple(j, t, &neg);
            right.add_col_multiple(j, t, &neg);
            right_inv.add_row_multiple(t, j, &c);
        }
        exponents.push(e);
    }
    DiagonalReduction {
        exponents,
        left,
        right,
        right_inv,
    }
}

pub fn shape_of(a: &RingMatrix) -> NuShape {
    shape_from_exponents(&diagonal_reduction(a).exponents, a.ring().nu())
}

fn shape_from_exponents(exps: &[usize], nu: usize) -> NuShape {
    NuShape {
        mu: (1..=nu).map(|i| exps.iter().filter(|&&e| e < i).count()).collect(),
    }
}

pub fn gamma_dimension(a: &RingMatrix) -> usize {
    let nu = a.ring().nu();
    diagonal_reduction(a).exponents.iter().map(|e| nu - e).sum()
}

pub fn parameters_of(a: &RingMatrix) -> BlockParameters {
    shape_of(a).parameters()
}

/// The row module of a matrix, prepared for repeated membership queries.
pub struct RowModule {
    red: DiagonalReduction,
    ring: ChainRing,
}

impl RowModule {
    pub fn new(a: &RingMatrix) -> Self {
        RowModule {
            red: diagonal_reduction(a),
            ring: a.ring().clone(),
        }
    }

    /// `w` lies in the row module iff `(w R)_j` is divisible by
    /// `gamma^e_j` for `j < t` and vanishes beyond.
    pub fn contains(&self, w: &[Elem]) -> bool {
        let wr = self.red.right.left_mul_vec(w);
        wr.iter().enumerate().all(|(j, x)| match self.red.exponents.get(j) {
            Some(&e) => self.ring.valuation(x) >= e,
            None => x.is_zero(),
        })
    }
}

pub fn in_row_module(w: &[Elem], a: &RingMatrix) -> bool {
    RowModule::new(a).contains(w)
}

fn gamma_times(ring: &ChainRing, v: &[Elem]) -> Vec<Elem> {
    v.iter().map(|x| ring.mul_gamma_pow(x, 1)).collect()
}

/// Decided from the last row backwards: once a tail is known to be a
/// generator sequence its gamma-span is its row module, so each step is a
/// module membership test.
pub fn is_gamma_generator_sequence(a: &RingMatrix) -> bool {
    let ring = a.ring();
    let m = a.rows();
    if m == 0 {
        return true;
    }
    if !gamma_times(ring, a.row(m - 1)).iter().all(Elem::is_zero) {
        return false;
    }
    for i in (0..m - 1).rev() {
        let tail: Vec<usize> = (i + 1..m).collect();
        let module = RowModule::new(&a.select_rows(&tail));
        if !module.contains(&gamma_times(ring, a.row(i))) {
            return false;
        }
    }
    true
}

/// Same predicate, with each span membership decided by enumerating the
/// lifted solutions of the projected system.
pub fn is_gamma_generator_sequence_by_enumeration(a: &RingMatrix, budget: u128) -> Result<bool> {
    let ring = a.ring();
    let m = a.rows();
    if m == 0 {
        return Ok(true);
    }
    if !gamma_times(ring, a.row(m - 1)).iter().all(Elem::is_zero) {
        return Ok(false);
    }
    for i in (0..m - 1).rev() {
        let tail: Vec<usize> = (i + 1..m).collect();
        if !in_gamma_span_by_enumeration(&gamma_times(ring, a.row(i)), &a.select_rows(&tail), budget)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether `w = sum tau(c_i) v_i` for some `c` in `F_q^m`. Every such `c`
/// solves `c pi(V) = pi(w)`, so it suffices to walk that affine space.
pub fn in_gamma_span_by_enumeration(w: &[Elem], v: &RingMatrix, budget: u128) -> Result<bool> {
    let ring = v.ring();
    let pv = v.project();
    let field = pv.ring().clone();
    let pw: Vec<Elem> = w.iter().map(|x| ring.project(x)).collect();
    let Some(particular) = field_solve_left(&pv, &pw) else {
        return Ok(false);
    };
    let kernel = field_left_kernel(&pv);
    let total = checked_count(field.q(), kernel.len(), budget)?;
    let hit = (0..total as u64).into_par_iter().any(|idx| {
        let c = combine(&field, &particular, &kernel, idx);
        let lifted: Vec<Elem> = c.iter().map(|x| ring.lift(x)).collect();
        v.left_mul_vec(&lifted) == w
    });
    Ok(hit)
}

fn checked_count(q: u64, dim: usize, budget: u128) -> Result<u128> {
    let total = (q as u128)
        .checked_pow(dim as u32)
        .unwrap_or(u128::MAX);
    if total > budget {
        return Err(Error::BudgetExceeded {
            attempted: total,
            budget,
        });
    }
    Ok(total)
}

/// `base + sum_i digit_i(idx) * basis_i`, digits in base q.
fn combine(field: &ChainRing, base: &[Elem], basis: &[Vec<Elem>], mut idx: u64) -> Vec<Elem> {
    let q = field.q();
    let mut out = base.to_vec();
    for b in basis {
        let c = field.residue_from_index(idx % q);
        idx /= q;
        if c.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(b) {
            *o = field.add(o, &field.mul(&c, x));
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IndependenceMethod {
    /// Enumerate the projected left kernel and test every lift.
    Oracle,
    /// Compare the gamma-dimension with the row count; generator sequences only.
    ShapeFast,
    /// ShapeFast when the rows form a generator sequence, Oracle otherwise.
    Auto,
}

pub fn is_gamma_linearly_independent(
    a: &RingMatrix,
    method: IndependenceMethod,
    budget: u128,
) -> Result<bool> {
    match method {
        IndependenceMethod::Oracle => independence_oracle(a, budget),
        IndependenceMethod::ShapeFast => {
            if !is_gamma_generator_sequence(a) {
                return Err(Error::MethodPreconditionViolated(
                    "ShapeFast needs rows that form a gamma-generator sequence".into(),
                ));
            }
            Ok(full_gamma_dimension(a))
        }
        IndependenceMethod::Auto => {
            if is_gamma_generator_sequence(a) {
                Ok(full_gamma_dimension(a))
            } else {
                independence_oracle(a, budget)
            }
        }
    }
}

/// `gamma_dimension(a) == rows`, without checking that the rows form a
/// generator sequence. Callers must establish that themselves.
pub fn full_gamma_dimension(a: &RingMatrix) -> bool {
    gamma_dimension(a) == a.rows()
}

fn independence_oracle(a: &RingMatrix, budget: u128) -> Result<bool> {
    let ring = a.ring();
    let pa = a.project();
    let field = pa.ring().clone();
    let kernel = field_left_kernel(&pa);
    if kernel.is_empty() {
        return Ok(true);
    }
    let total = checked_count(field.q(), kernel.len(), budget)?;
    let zero = vec![Elem::ZERO; a.rows()];
    let dependent = (1..total as u64).into_par_iter().any(|idx| {
        let c = combine(&field, &zero, &kernel, idx);
        let lifted: Vec<Elem> = c.iter().map(|x| ring.lift(x)).collect();
        a.left_mul_vec(&lifted).iter().all(Elem::is_zero)
    });
    Ok(!dependent)
}

/// Rows `gamma^a w_j` for `a = 0..nu-1-e_j`, grouped by `j`, where
/// `gamma^e_j w_j` are the diagonal generators of the row module.
pub fn gamma_basis(a: &RingMatrix) -> RingMatrix {
    let ring = a.ring();
    let nu = ring.nu();
    let red = diagonal_reduction(a);
    let mut rows = Vec::new();
    for (j, &e) in red.exponents.iter().enumerate() {
        let w: Vec<Elem> = red.right_inv.row(j).iter().map(|x| ring.mul_gamma_pow(x, e)).collect();
        for p in 0..nu - e {
            rows.push(w.iter().map(|x| ring.mul_gamma_pow(x, p)).collect::<Vec<_>>());
        }
    }
    RingMatrix::from_rows(ring, a.cols(), &rows).expect("basis rows have matrix width")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StandardForm {
    pub matrix: RingMatrix,
    /// Column `c` of the output is column `perm[c]` of the input.
    pub perm: Vec<usize>,
    pub params: BlockParameters,
}

/// Row-reduced form with diagonal blocks `gamma^i I_{k_i}` after a column
/// permutation. Entries above a pivot are cleared within its own block.
pub fn standard_form(a: &RingMatrix) -> Result<StandardForm> {
    if a.is_zero() {
        return Err(Error::ZeroMatrix);
    }
    let ring = a.ring().clone();
    let nu = ring.nu();
    let (m, n) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut exps: Vec<usize> = Vec::new();
    for t in 0..m.min(n) {
        let mut best: Option<(usize, usize, usize)> = None;
        'scan: for j in t..n {
            for i in t..m {
                let v = ring.valuation(&d.get(i, j));
                if v < best.map_or(nu, |b| b.0) {
                    best = Some((v, i, j));
                    if v == exps.last().copied().unwrap_or(0) {
                        break 'scan;
                    }
                }
            }
        }
        let Some((e, pi, pj)) = best else { break };
        d.swap_rows(t, pi);
        d.swap_cols(t, pj);
        perm.swap(t, pj);
        let unit = ring.div_gamma_pow(&d.get(t, t), e);
        d.scale_row(t, &ring.invert_unit(&unit).expect("unit part of a pivot"));
        for i in 0..m {
            if i == t || (i < t && exps[i] != e) {
                continue;
            }
            let x = d.get(i, t);
            if x.is_zero() {
                continue;
            }
            let c = ring.neg(&ring.div_gamma_pow(&x, e));
            d.add_row_multiple(i, t, &c);
        }
        exps.push(e);
    }
    let t = exps.len();
    let matrix = d.select_rows(&(0..t).collect::<Vec<_>>());
    let params = shape_from_exponents(&exps, nu).parameters();
    Ok(StandardForm { matrix, perm, params })
}

/// Layered gamma-encoder: layer `l` holds `gamma^(l-i)` times the level-`i`
/// rows of the standard form for every `i <= l`, with the pivot blocks of
/// levels `i+1..=l` cleared. Coordinates are those of the standard form.
pub fn gamma_standard_form(a: &RingMatrix) -> Result<(RingMatrix, Vec<usize>)> {
    let sf = standard_form(a)?;
    let ring = a.ring();
    let nu = ring.nu();
    let ks = &sf.params.k_list;
    let offsets: Vec<usize> = ks
        .iter()
        .scan(0, |acc, &k| {
            let o = *acc;
            *acc += k;
            Some(o)
        })
        .collect();
    let mut out: Vec<Vec<Elem>> = Vec::new();
    for l in 0..nu {
        // layer[i] = rows of level i scaled into layer l
        let mut layer: Vec<Vec<Vec<Elem>>> = vec![Vec::new(); l + 1];
        for i in (0..=l).rev() {
            for r in 0..ks[i] {
                let src = sf.matrix.row(offsets[i] + r);
                let mut row: Vec<Elem> = src.iter().map(|x| ring.mul_gamma_pow(x, l - i)).collect();
                for (j, rows_j) in layer.iter().enumerate().take(l + 1).skip(i + 1) {
                    for (c, pivot_row) in rows_j.iter().enumerate() {
                        let col = offsets[j] + c;
                        let x = row[col];
                        if x.is_zero() {
                            continue;
                        }
                        let f = ring.div_gamma_pow(&x, l);
                        for (y, p) in row.iter_mut().zip(pivot_row) {
                            *y = ring.sub(y, &ring.mul(&f, p));
                        }
                    }
                }
                layer[i].push(row);
            }
        }
        for rows in layer {
            out.extend(rows);
        }
    }
    let m = RingMatrix::from_rows(ring, a.cols(), &out)?;
    Ok((m, sf.perm))
}

/// Determinant by elimination, pivoting on a minimal-valuation entry of
/// each column so that every elimination factor exists in the ring.
pub fn determinant(a: &RingMatrix) -> Result<Elem> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let ring = a.ring();
    let n = a.rows();
    let mut d = a.clone();
    let mut det = ring.one();
    for c in 0..n {
        let Some(p) = (c..n).filter(|&i| !d.get(i, c).is_zero()).min_by_key(|&i| (ring.valuation(&d.get(i, c)), i)) else {
            return Ok(Elem::ZERO);
        };
        if p != c {
            d.swap_rows(p, c);
            det = ring.neg(&det);
        }
        let piv = d.get(c, c);
        let e = ring.valuation(&piv);
        let uinv = ring.invert_unit(&ring.div_gamma_pow(&piv, e)).expect("unit part of a pivot");
        for i in c + 1..n {
            let x = d.get(i, c);
            if x.is_zero() {
                continue;
            }
            let f = ring.neg(&ring.mul(&uinv, &ring.div_gamma_pow(&x, e)));
            d.add_row_multiple(i, c, &f);
        }
        det = ring.mul(&det, &piv);
    }
    Ok(det)
}

/// Unit test on the determinant, computed over the ring and over the
/// residue field; the two answers must coincide.
pub fn is_unit_determinant(a: &RingMatrix) -> Result<bool> {
    let over_ring = a.ring().is_unit(&determinant(a)?);
    let over_field = !determinant(&a.project())?.is_zero();
    assert_eq!(over_ring, over_field, "determinant paths disagree");
    Ok(over_ring)
}

/// Inverse of a square matrix with unit determinant.
pub fn inverse(a: &RingMatrix) -> Result<RingMatrix> {
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let ring = a.ring();
    let n = a.rows();
    let mut d = a.clone();
    let mut inv = RingMatrix::identity(ring, n);
    for c in 0..n {
        let p = (c..n)
            .find(|&i| ring.is_unit(&d.get(i, c)))
            .ok_or(Error::NotAUnit)?;
        d.swap_rows(p, c);
        inv.swap_rows(p, c);
        let u = ring.invert_unit(&d.get(c, c))?;
        d.scale_row(c, &u);
        inv.scale_row(c, &u);
        for i in 0..n {
            if i == c {
                continue;
            }
            let f = ring.neg(&d.get(i, c));
            d.add_row_multiple(i, c, &f);
            inv.add_row_multiple(i, c, &f);
        }
    }
    Ok(inv)
}

/// Reduced row echelon form over a field (`nu = 1`); returns pivot columns.
pub fn field_rref(a: &mut RingMatrix) -> Vec<usize> {
    let ring = a.ring().clone();
    debug_assert!(ring.is_field());
    let (m, n) = (a.rows(), a.cols());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        if r == m {
            break;
        }
        let Some(p) = (r..m).find(|&i| !a.get(i, c).is_zero()) else {
            continue;
        };
        a.swap_rows(p, r);
        let inv = ring.invert_unit(&a.get(r, c)).expect("nonzero field element");
        a.scale_row(r, &inv);
        for i in 0..m {
            if i != r {
                let f = ring.neg(&a.get(i, c));
                a.add_row_multiple(i, r, &f);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn field_rank(a: &RingMatrix) -> usize {
    field_rref(&mut a.clone()).len()
}

/// Basis of `{x : x A = 0}` over the field.
pub fn field_left_kernel(a: &RingMatrix) -> Vec<Vec<Elem>> {
    let ring = a.ring();
    let mut t = a.transpose();
    let pivots = field_rref(&mut t);
    let m = a.rows();
    let free: Vec<usize> = (0..m).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![Elem::ZERO; m];
            x[f] = ring.one();
            for (r, &pc) in pivots.iter().enumerate() {
                x[pc] = ring.neg(&t.get(r, f));
            }
            x
        })
        .collect()
}

/// Some `x` with `x A = b` over the field.
pub fn field_solve_left(a: &RingMatrix, b: &[Elem]) -> Option<Vec<Elem>> {
    let ring = a.ring();
    let (m, n) = (a.rows(), a.cols());
    let mut aug = RingMatrix::zeros(ring, n, m + 1);
    for i in 0..m {
        for j in 0..n {
            aug.set(j, i, a.get(i, j));
        }
    }
    for (j, x) in b.iter().enumerate() {
        aug.set(j, m, *x);
    }
    let pivots = field_rref(&mut aug);
    if pivots.contains(&m) {
        return None;
    }
    let mut x = vec![Elem::ZERO; m];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = aug.get(r, m);
    }
    Some(x)
}
