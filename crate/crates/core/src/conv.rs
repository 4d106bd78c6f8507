//! Convolutional codes over `R[z]`: polynomial gamma-encoders, sliding
//! matrices, column distances, the distance bounds and the MDP criteria.

use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gamma::{self, BlockParameters, IndependenceMethod, RowModule};
use crate::matrix::RingMatrix;
use crate::ring::{ChainRing, Elem};

/// `G(z) = sum_i G_i z^i` with trailing zero coefficients removed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyMatrix {
    ring: ChainRing,
    k: usize,
    n: usize,
    coeffs: Vec<RingMatrix>,
}

impl PolyMatrix {
    pub fn new(ring: &ChainRing, k: usize, n: usize, coeffs: Vec<RingMatrix>) -> Result<Self> {
        for c in &coeffs {
            if c.rows() != k || c.cols() != n {
                return Err(Error::SizeMismatch(format!(
                    "coefficient of size {}x{} in a {k}x{n} polynomial matrix",
                    c.rows(),
                    c.cols()
                )));
            }
            if c.ring() != ring {
                return Err(Error::MixedRings);
            }
        }
        let mut coeffs = coeffs;
        while coeffs.last().is_some_and(RingMatrix::is_zero) {
            coeffs.pop();
        }
        Ok(PolyMatrix {
            ring: ring.clone(),
            k,
            n,
            coeffs,
        })
    }

    /// Polynomial matrix from integer coefficient matrices.
    pub fn from_int_coeffs(ring: &ChainRing, coeffs: &[Vec<Vec<i64>>]) -> Result<Self> {
        let mats: Vec<RingMatrix> = coeffs.iter().map(|c| RingMatrix::from_ints(ring, c)).collect();
        let k = mats.first().map_or(0, RingMatrix::rows);
        let n = mats.first().map_or(0, RingMatrix::cols);
        Self::new(ring, k, n, mats)
    }

    pub fn ring(&self) -> &ChainRing {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.k
    }

    pub fn cols(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[RingMatrix] {
        &self.coeffs
    }

    /// `None` for the zero matrix.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// `G_i`, zero beyond the degree.
    pub fn coeff(&self, i: usize) -> RingMatrix {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| RingMatrix::zeros(&self.ring, self.k, self.n))
    }

    pub fn row_degree(&self, i: usize) -> Option<usize> {
        (0..self.coeffs.len()).rev().find(|&d| !self.coeffs[d].zero_row(i))
    }

    pub fn row_degrees(&self) -> Result<Vec<usize>> {
        (0..self.k)
            .map(|i| self.row_degree(i).ok_or(Error::ZeroRow(i)))
            .collect()
    }

    /// Row `i` holds the coefficient of `z^(deg row i)` of row `i`.
    pub fn leading_coefficient_matrix(&self) -> Result<RingMatrix> {
        let degs = self.row_degrees()?;
        let mut out = RingMatrix::zeros(&self.ring, self.k, self.n);
        for (i, &d) in degs.iter().enumerate() {
            for j in 0..self.n {
                out.set(i, j, self.coeffs[d].get(i, j));
            }
        }
        Ok(out)
    }

    /// Leading-coefficient rows are gamma-linearly independent.
    pub fn is_reduced(&self) -> Result<bool> {
        let lc = self.leading_coefficient_matrix()?;
        gamma::is_gamma_linearly_independent(&lc, IndependenceMethod::Auto, gamma::DEFAULT_BUDGET)
    }

    /// `G(0)` has gamma-linearly independent rows.
    pub fn is_delay_free(&self) -> Result<bool> {
        gamma::is_gamma_linearly_independent(&self.coeff(0), IndependenceMethod::Auto, gamma::DEFAULT_BUDGET)
    }

    pub fn gamma_degree(&self) -> Result<usize> {
        if !self.is_reduced()? {
            return Err(Error::NotReduced);
        }
        Ok(self.row_degrees()?.iter().sum())
    }

    /// Block upper-triangular Toeplitz matrix `G_j^c`.
    pub fn sliding_matrix(&self, j: usize) -> RingMatrix {
        let (k, n) = (self.k, self.n);
        let mut out = RingMatrix::zeros(&self.ring, (j + 1) * k, (j + 1) * n);
        for br in 0..=j {
            for bc in br..=j {
                let Some(g) = self.coeffs.get(bc - br) else { continue };
                for r in 0..k {
                    for c in 0..n {
                        out.set(br * k + r, bc * n + c, g.get(r, c));
                    }
                }
            }
        }
        out
    }

    /// `G_mu + G_{mu-1} z + ... + G_0 z^mu`.
    pub fn coefficient_reversal(&self) -> PolyMatrix {
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        PolyMatrix::new(&self.ring, self.k, self.n, coeffs).expect("same shapes")
    }

    /// Rows `z^s g_j` for `s = 0..=shifts` (shift-major), as constant
    /// vectors of length `n (deg + shifts + 1)`.
    pub fn shift_expansion(&self, rows: &[usize], shifts: usize) -> RingMatrix {
        let d = self.degree().unwrap_or(0);
        let width = self.n * (d + shifts + 1);
        let mut out = Vec::new();
        for s in 0..=shifts {
            for &i in rows {
                let mut v = vec![Elem::ZERO; width];
                for (t, g) in self.coeffs.iter().enumerate() {
                    for c in 0..self.n {
                        v[(s + t) * self.n + c] = g.get(i, c);
                    }
                }
                out.push(v);
            }
        }
        RingMatrix::from_rows(&self.ring, width, &out).expect("expansion rows share width")
    }

    /// `gamma g_i` lies in the `R[z]`-span of the later rows for every `i`,
    /// and `gamma g_last = 0`. Multipliers are searched up to the encoder
    /// degree.
    pub fn is_gamma_generator_sequence(&self) -> bool {
        let k = self.k;
        if k == 0 {
            return true;
        }
        let d = self.degree().unwrap_or(0);
        let target = |i: usize| -> Vec<Elem> {
            let row = self.shift_expansion(&[i], d);
            row.row(0).iter().map(|x| self.ring.mul_gamma_pow(x, 1)).collect()
        };
        if !target(k - 1).iter().all(Elem::is_zero) {
            return false;
        }
        for i in (0..k - 1).rev() {
            let tail: Vec<usize> = (i + 1..k).collect();
            let module = RowModule::new(&self.shift_expansion(&tail, d));
            if !module.contains(&target(i)) {
                return false;
            }
        }
        true
    }

    /// No nontrivial `T[z]`-combination of the rows vanishes. Delay-free or
    /// reduced encoders pass by their lowest or highest coefficients;
    /// otherwise the rows are expanded over `2 deg + 2` shifts and tested
    /// as constant vectors.
    pub fn is_gamma_independent(&self, budget: u128) -> Result<bool> {
        if self.row_degrees().is_err() {
            return Ok(false);
        }
        if self.is_delay_free()? || self.is_reduced()? {
            return Ok(true);
        }
        let d = self.degree().unwrap_or(0);
        let rows: Vec<usize> = (0..self.k).collect();
        let expanded = self.shift_expansion(&rows, 2 * d + 1);
        gamma::is_gamma_linearly_independent(&expanded, IndependenceMethod::Auto, budget)
    }

    pub fn project(&self) -> PolyMatrix {
        let field = self.ring.residue_field();
        PolyMatrix::new(&field, self.k, self.n, self.coeffs.iter().map(RingMatrix::project).collect())
            .expect("same shapes")
    }

    /// Rows linearly independent over `R[z]`, i.e. the generated code is
    /// free. Equivalent to `pi(G)` having full row rank over `F_q(z)`.
    pub fn is_free(&self) -> bool {
        let p = self.project();
        poly_rank(&p) == self.k
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "coeffs": self.coeffs.iter().map(|c| c.to_json(false)).collect::<Vec<_>>()
        })
    }

    pub fn from_json(v: &serde_json::Value, ring: &ChainRing, k: Option<usize>, n: usize) -> Result<Self> {
        let coeffs = v
            .get("coeffs")
            .and_then(|c| c.as_array())
            .ok_or_else(|| Error::Format("encoder needs a 'coeffs' array".into()))?;
        let mats = coeffs
            .iter()
            .map(|c| RingMatrix::from_json(c, Some(ring)))
            .collect::<Result<Vec<_>>>()?;
        let k = match (mats.first(), k) {
            (Some(m), _) => m.rows(),
            (None, Some(k)) => k,
            (None, None) => return Err(Error::Format("empty encoder".into())),
        };
        Self::new(ring, k, n, mats)
    }
}

type Poly = Vec<Elem>;

fn poly_trim(p: &mut Poly) {
    while p.last().is_some_and(Elem::is_zero) {
        p.pop();
    }
}

fn poly_mul(f: &ChainRing, a: &Poly, b: &Poly) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Elem::ZERO; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = f.add(&out[i + j], &f.mul(x, y));
        }
    }
    poly_trim(&mut out);
    out
}

fn poly_sub(f: &ChainRing, a: &Poly, b: &Poly) -> Poly {
    let mut out: Poly = (0..a.len().max(b.len()))
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(Elem::ZERO);
            let y = b.get(i).copied().unwrap_or(Elem::ZERO);
            f.sub(&x, &y)
        })
        .collect();
    poly_trim(&mut out);
    out
}

/// Rank over `F_q(z)` by fraction-free elimination in `F_q[z]`.
fn poly_rank(p: &PolyMatrix) -> usize {
    let f = p.ring();
    let mut m: Vec<Vec<Poly>> = (0..p.rows())
        .map(|i| {
            (0..p.cols())
                .map(|j| {
                    let mut e: Poly = p.coeffs().iter().map(|c| c.get(i, j)).collect();
                    poly_trim(&mut e);
                    e
                })
                .collect()
        })
        .collect();
    let mut rank = 0;
    for c in 0..p.cols() {
        let Some(piv) = (rank..m.len()).find(|&i| !m[i][c].is_empty()) else {
            continue;
        };
        m.swap(rank, piv);
        for i in rank + 1..m.len() {
            if m[i][c].is_empty() {
                continue;
            }
            let a = m[rank][c].clone();
            let b = m[i][c].clone();
            for j in 0..p.cols() {
                let lhs = poly_mul(f, &a, &m[i][j]);
                let rhs = poly_mul(f, &b, &m[rank][j]);
                m[i][j] = poly_sub(f, &lhs, &rhs);
            }
        }
        rank += 1;
    }
    rank
}

/// Column distances `d_0^c, ..., d_J^c`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceProfile {
    pub values: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceBounds {
    /// `None` when nu does not divide k.
    pub l: Option<usize>,
    pub n_index: usize,
    pub per_j: Vec<i64>,
    pub generalized_singleton: usize,
}

/// A convolutional code given by a reduced gamma-encoder.
#[derive(Clone, Debug)]
pub struct ConvCode {
    encoder: PolyMatrix,
    row_degrees: Vec<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MdpMethod {
    Distances,
    Minors,
}

impl ConvCode {
    /// Validates that the rows form a gamma-basis and that the encoder is
    /// reduced, so that `delta` is the sum of the row degrees.
    pub fn new(encoder: PolyMatrix) -> Result<Self> {
        if encoder.rows() == 0 {
            return Err(Error::InvalidParams("encoder has no rows".into()));
        }
        let row_degrees = encoder.row_degrees()?;
        if !encoder.is_gamma_generator_sequence() {
            return Err(Error::NotGammaEncoder("rows are not a gamma-generator sequence".into()));
        }
        if !encoder.is_reduced()? {
            return Err(Error::NotReduced);
        }
        if !encoder.is_gamma_independent(gamma::DEFAULT_BUDGET)? {
            return Err(Error::NotGammaEncoder("rows are gamma-linearly dependent".into()));
        }
        Ok(ConvCode { encoder, row_degrees })
    }

    pub fn ring(&self) -> &ChainRing {
        self.encoder.ring()
    }

    pub fn encoder(&self) -> &PolyMatrix {
        &self.encoder
    }

    pub fn n(&self) -> usize {
        self.encoder.cols()
    }

    /// gamma-dimension
    pub fn k(&self) -> usize {
        self.encoder.rows()
    }

    /// gamma-degree
    pub fn delta(&self) -> usize {
        self.row_degrees.iter().sum()
    }

    pub fn nu(&self) -> usize {
        self.ring().nu()
    }

    pub fn row_degrees(&self) -> &[usize] {
        &self.row_degrees
    }

    pub fn is_delay_free(&self) -> Result<bool> {
        self.encoder.is_delay_free()
    }

    /// Parameters of the block code generated by `G_0`.
    pub fn params_g0(&self) -> BlockParameters {
        gamma::parameters_of(&self.encoder.coeff(0))
    }

    pub fn sliding_matrix(&self, j: usize) -> RingMatrix {
        self.encoder.sliding_matrix(j)
    }

    pub fn column_distance(&self, j: usize, budget: u128) -> Result<usize> {
        if !self.is_delay_free()? {
            return Err(Error::NotDelayFree);
        }
        column_distance_search(&self.encoder, j, budget)
    }

    pub fn column_distances(&self, max_j: usize, budget: u128) -> Result<DistanceProfile> {
        let values = (0..=max_j)
            .map(|j| self.column_distance(j, budget))
            .collect::<Result<Vec<_>>>()?;
        Ok(DistanceProfile { values })
    }

    pub fn bounds(&self, max_j: usize) -> Result<DistanceBounds> {
        distance_bounds(self.n(), self.k(), self.delta(), self.nu(), max_j)
    }

    pub fn l_index(&self) -> Result<usize> {
        l_index(self.n(), self.k(), self.delta(), self.nu())
    }

    /// Hypotheses of the MDP characterization; returns `(k/nu, L)`.
    pub fn mdp_preconditions(&self) -> Result<(usize, usize)> {
        let (nu, k) = (self.nu(), self.k());
        if !self.is_delay_free()? {
            return Err(Error::NotDelayFree);
        }
        if k % nu != 0 {
            return Err(Error::NuNotDividingK { nu, k });
        }
        let k0 = k / nu;
        let params = self.params_g0();
        if !params.is_free_with_rank(k0) {
            return Err(Error::PreconditionViolated(format!(
                "G_0 has parameters {:?}, expected ({k0}, 0, ..., 0)",
                params.k_list
            )));
        }
        Ok((k0, self.l_index()?))
    }

    pub fn is_mdp(&self, method: MdpMethod, budget: u128) -> Result<bool> {
        let (k0, l) = self.mdp_preconditions()?;
        match method {
            MdpMethod::Distances => distances_meet_bound(self, k0, l, budget),
            MdpMethod::Minors => minors_condition(&self.sliding_matrix(l), self.n(), k0, l, budget),
        }
    }

    /// `G_mu + ... + G_0 z^mu`; needs all row degrees equal to `delta/k`.
    pub fn reverse_encoder(&self) -> Result<PolyMatrix> {
        let first = self.row_degrees[0];
        if self.row_degrees.iter().any(|&d| d != first) {
            return Err(Error::UnequalRowDegrees(self.row_degrees.clone()));
        }
        Ok(self.encoder.coefficient_reversal())
    }

    pub fn reverse(&self) -> Result<ConvCode> {
        ConvCode::new(self.reverse_encoder()?)
    }

    /// MDP, and the reversed code meets the same column-distance targets.
    /// The Minors variant tests the minor condition on the reversed
    /// sliding matrix; the Distances variant enumerates the reversed code.
    pub fn is_reverse_mdp(&self, method: MdpMethod, budget: u128) -> Result<bool> {
        let (k0, l) = self.mdp_preconditions()?;
        let rev = self.reverse_encoder()?;
        if !self.is_mdp(method, budget)? {
            return Ok(false);
        }
        match method {
            MdpMethod::Minors => minors_condition(&rev.sliding_matrix(l), self.n(), k0, l, budget),
            MdpMethod::Distances => {
                let rc = ConvCode::new(rev)?;
                distances_meet_bound(&rc, k0, l, budget)
            }
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "ring": self.ring().spec(),
            "n": self.n(),
            "encoder": self.encoder.to_json(),
            "claimed": {"k": self.k(), "delta": self.delta()},
        })
    }

    /// Loads a code document; `claimed` values, when present, must match.
    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let enc = encoder_from_json(v)?;
        let code = ConvCode::new(enc)?;
        let claim = |f: &str| v.get("claimed").and_then(|c| c.get(f)).and_then(|x| x.as_u64()).map(|x| x as usize);
        if let Some(k) = claim("k") {
            if k != code.k() {
                return Err(Error::ClaimMismatch {
                    field: "k",
                    claimed: k,
                    computed: code.k(),
                });
            }
        }
        if let Some(d) = claim("delta") {
            if d != code.delta() {
                return Err(Error::ClaimMismatch {
                    field: "delta",
                    claimed: d,
                    computed: code.delta(),
                });
            }
        }
        Ok(code)
    }
}

/// Encoder of a code document, without validation.
pub fn encoder_from_json(v: &serde_json::Value) -> Result<PolyMatrix> {
    let ring = crate::format::ring_from_json(v.get("ring").ok_or_else(|| Error::Format("code needs a 'ring'".into()))?)?;
    let n = v
        .get("n")
        .and_then(|x| x.as_u64())
        .ok_or_else(|| Error::Format("code needs an integer 'n'".into()))? as usize;
    let k = v
        .get("claimed")
        .and_then(|c| c.get("k"))
        .and_then(|x| x.as_u64())
        .map(|x| x as usize);
    PolyMatrix::from_json(
        v.get("encoder").ok_or_else(|| Error::Format("code needs an 'encoder'".into()))?,
        &ring,
        k,
        n,
    )
}

fn distances_meet_bound(code: &ConvCode, k0: usize, l: usize, budget: u128) -> Result<bool> {
    let n = code.n();
    for j in 0..=l {
        let d = column_distance_search(code.encoder(), j, budget)?;
        if d != (n - k0) * (j + 1) + 1 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Minimum weight of `(u_0, ..., u_j) G_j^c` over `u_i` in `T^k`,
/// `u_0 != 0`. Depth-first over message blocks; after block `b` is fixed
/// the first `b + 1` column blocks are final, so their weight prunes.
fn column_distance_search(enc: &PolyMatrix, j: usize, budget: u128) -> Result<usize> {
    let ring = enc.ring();
    let (k, n) = (enc.rows(), enc.cols());
    let q = ring.q();
    let total = (q as u128).checked_pow(((j + 1) * k) as u32).unwrap_or(u128::MAX);
    if total > budget {
        return Err(Error::BudgetExceeded {
            attempted: total,
            budget,
        });
    }
    let per_block = q.pow(k as u32);
    let width = (j + 1) * n;
    // row x of `table` is message x times [G_0 G_1 ... G_j]
    let top = enc.sliding_matrix(j).select_rows(&(0..k).collect::<Vec<_>>());
    let reps = ring.representatives();
    let message_row = |mut x: u64| -> Vec<Elem> {
        let mut u = Vec::with_capacity(k);
        for _ in 0..k {
            u.push(reps[(x % q) as usize]);
            x /= q;
        }
        top.left_mul_vec(&u)
    };
    let table: Vec<Vec<Elem>> = (0..per_block).map(message_row).collect();
    let best = AtomicUsize::new(width + 1);

    fn dfs(
        ring: &ChainRing,
        table: &[Vec<Elem>],
        acc: &[Elem],
        weight: usize,
        b: usize,
        j: usize,
        n: usize,
        best: &AtomicUsize,
    ) {
        let width = (j + 1) * n;
        let mut next = acc.to_vec();
        for row in table {
            for c in b * n..width {
                next[c] = ring.add(&acc[c], &row[c - b * n]);
            }
            let w = weight + next[b * n..(b + 1) * n].iter().filter(|x| !x.is_zero()).count();
            if w >= best.load(Ordering::Relaxed) {
                continue;
            }
            if b == j {
                best.fetch_min(w, Ordering::Relaxed);
            } else {
                dfs(ring, table, &next, w, b + 1, j, n, best);
            }
        }
    }

    (1..per_block as usize).into_par_iter().for_each(|x| {
        let row = &table[x];
        let w = row[..n].iter().filter(|e| !e.is_zero()).count();
        if w >= best.load(Ordering::Relaxed) {
            return;
        }
        if j == 0 {
            best.fetch_min(w, Ordering::Relaxed);
        } else {
            // the message block for column block 0 is x; later blocks start
            // from its full contribution
            dfs(ring, &table, row, w, 1, j, n, &best);
        }
    });
    Ok(best.into_inner())
}

/// Column index sets `t_1 < ... < t_{(L+1)k0}` of `0..(L+1)n` with
/// `t_{s k0 + 1} > s n` (one-based) for `s = 1..=L`, in lexicographic order.
pub fn admissible_column_sets(n: usize, k0: usize, l: usize, budget: u128) -> Result<Vec<Vec<usize>>> {
    let size = (l + 1) * k0;
    let width = (l + 1) * n;
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(size);
    fn rec(
        cur: &mut Vec<usize>,
        start: usize,
        size: usize,
        width: usize,
        n: usize,
        k0: usize,
        out: &mut Vec<Vec<usize>>,
        budget: u128,
    ) -> Result<()> {
        let p = cur.len();
        if p == size {
            if out.len() as u128 >= budget {
                return Err(Error::BudgetExceeded {
                    attempted: out.len() as u128 + 1,
                    budget,
                });
            }
            out.push(cur.clone());
            return Ok(());
        }
        let lower = if k0 > 0 && p % k0 == 0 { start.max((p / k0) * n) } else { start };
        for c in lower..width {
            if width - c < size - p {
                break;
            }
            cur.push(c);
            rec(cur, c + 1, size, width, n, k0, out, budget)?;
            cur.pop();
        }
        Ok(())
    }
    rec(&mut cur, 0, size, width, n, k0, &mut out, budget)?;
    Ok(out)
}

/// Every admissible column selection of the sliding matrix has
/// gamma-linearly independent rows. Selections of a generator sequence
/// are generator sequences, so the shape comparison decides each one.
pub fn minors_condition(gc: &RingMatrix, n: usize, k0: usize, l: usize, budget: u128) -> Result<bool> {
    assert!(
        gamma::is_gamma_generator_sequence(gc),
        "sliding matrix rows must form a gamma-generator sequence"
    );
    let sets = admissible_column_sets(n, k0, l, budget)?;
    if let Some(first) = sets.first() {
        assert!(
            gamma::is_gamma_generator_sequence(&gc.select_cols(first)),
            "column selection broke the generator sequence"
        );
    }
    Ok(sets
        .par_iter()
        .all(|cols| gamma::full_gamma_dimension(&gc.select_cols(cols))))
}

/// `n (floor(delta/k) + 1) - ceil((k/nu)(floor(delta/k) + 1) - delta/nu) + 1`
pub fn generalized_singleton_bound(n: usize, k: usize, delta: usize, nu: usize) -> Result<usize> {
    if k == 0 || nu == 0 {
        return Err(Error::InvalidParams("need k >= 1 and nu >= 1".into()));
    }
    let a = delta / k + 1;
    let loss = (k * a - delta).div_ceil(nu);
    (n * a + 1)
        .checked_sub(loss)
        .ok_or_else(|| Error::InvalidParams("bound is negative".into()))
}

/// Bound on `d_j^c` for a delay-free code whose `G_0` has parameters
/// `params` (indices past `nu - 1` count as zero).
pub fn column_distance_bound(j: usize, n: usize, params: &BlockParameters, k: usize) -> Result<i64> {
    let nu = params.nu();
    if nu == 0 || params.gamma_dimension() > k {
        return Err(Error::InvalidParams(format!(
            "parameters {:?} do not fit gamma-dimension {k}",
            params.k_list
        )));
    }
    let (j_, n_, k_) = (j as i64, n as i64, k as i64);
    let kk = |i: usize| params.get(i) as i64;
    Ok(if j <= nu {
        let head: i64 = (0..=nu - j).map(kk).sum();
        let tail: i64 = (2..=j).map(|s| s as i64 * kk(nu - (s - 1))).sum();
        (j_ + 1) * (n_ - head) - tail + 1
    } else {
        let all: i64 = (0..nu).map(kk).sum();
        (j_ + 1) * n_ - all - k_ - (j_ - nu as i64) * kk(0) + 1
    })
}

/// Largest admissible bound on `d_j^c` over all parameter choices.
pub fn optimal_cd_bound(j: usize, n: usize, k: usize, nu: usize) -> Result<i64> {
    if nu == 0 || k == 0 {
        return Err(Error::InvalidParams("need k >= 1 and nu >= 1".into()));
    }
    let (fl, cl) = ((k / nu) as i64, k.div_ceil(nu) as i64);
    let big_n = k - (k / nu) * nu;
    let base = (n as i64 - cl) * (j as i64 + 1) + 1;
    Ok(if j <= big_n {
        base
    } else {
        base - (cl - fl) * (big_n as i64 + 1)
    })
}

/// `N = k - floor(k/nu) nu`
pub fn n_index(k: usize, nu: usize) -> usize {
    k - (k / nu) * nu
}

/// `floor(delta/k) + floor(floor(delta/nu) / (n - k/nu))`, for `nu | k`.
pub fn l_index(n: usize, k: usize, delta: usize, nu: usize) -> Result<usize> {
    if k == 0 || nu == 0 {
        return Err(Error::InvalidParams("need k >= 1 and nu >= 1".into()));
    }
    if k % nu != 0 {
        return Err(Error::NuNotDividingK { nu, k });
    }
    let free = n
        .checked_sub(k / nu)
        .filter(|&f| f > 0)
        .ok_or_else(|| Error::InvalidParams(format!("need n > k/nu, got n = {n}, k/nu = {}", k / nu)))?;
    Ok(delta / k + (delta / nu) / free)
}

/// The field version `floor(delta/k) + floor(delta/(n-k))`.
pub fn l_index_field(n: usize, k: usize, delta: usize) -> Result<usize> {
    l_index(n, k, delta, 1)
}

/// Both indices for the same `(n, k, delta)` read over `Z_{p^r}` and over
/// `F_p`, and whether `delta < n - k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbedComparison {
    pub l_ring: usize,
    pub l_field: usize,
    pub delta_below_n_minus_k: bool,
}

pub fn embed_comparison(n: usize, k: usize, delta: usize, r: usize) -> Result<EmbedComparison> {
    Ok(EmbedComparison {
        l_ring: l_index(n, k, delta, r)?,
        l_field: l_index_field(n, k, delta)?,
        delta_below_n_minus_k: delta < n.saturating_sub(k),
    })
}

pub fn distance_bounds(n: usize, k: usize, delta: usize, nu: usize, max_j: usize) -> Result<DistanceBounds> {
    let l = match l_index(n, k, delta, nu) {
        Ok(l) => Some(l),
        Err(Error::NuNotDividingK { .. }) => None,
        Err(e) => return Err(e),
    };
    let per_j = (0..=max_j)
        .map(|j| optimal_cd_bound(j, n, k, nu))
        .collect::<Result<Vec<_>>>()?;
    Ok(DistanceBounds {
        l,
        n_index: n_index(k, nu),
        per_j,
        generalized_singleton: generalized_singleton_bound(n, k, delta, nu)?,
    })
}
