//! Code constructions: gamma-layer stacking, lifting residue-field codes,
//! the binomial encoder, and block extraction from superregular Toeplitz
//! matrices.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::conv::{admissible_column_sets, ConvCode, PolyMatrix};
use crate::error::{Error, Result};
use crate::gamma::{self, IndependenceMethod};
use crate::matrix::RingMatrix;
use crate::ring::{ChainRing, Elem};

/// `(A_0; gamma A_1; ...; gamma^(nu-1) A_(nu-1))` where `A_i` is the first
/// `counts[i]` rows of the square matrix `a`.
pub fn stack_gamma_layers(a: &RingMatrix, counts: &[usize]) -> Result<RingMatrix> {
    let ring = a.ring();
    let n = a.rows();
    if !a.is_square() {
        return Err(Error::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    if counts.len() != ring.nu() {
        return Err(Error::BadCounts(format!("expected {} counts, got {}", ring.nu(), counts.len())));
    }
    if counts.first().is_some_and(|&c| c == 0)
        || counts.windows(2).any(|w| w[0] > w[1])
        || counts.last().is_some_and(|&c| c > n)
    {
        return Err(Error::BadCounts(format!("counts {counts:?} must satisfy 1 <= n_0 <= ... <= {n}")));
    }
    if !gamma::is_unit_determinant(a)? {
        return Err(Error::DependentRows);
    }
    let layers: Vec<RingMatrix> = counts
        .iter()
        .enumerate()
        .map(|(i, &c)| a.select_rows(&(0..c).collect::<Vec<_>>()).mul_gamma_pow(i))
        .collect();
    let refs: Vec<&RingMatrix> = layers.iter().collect();
    let out = RingMatrix::vstack(&refs)?;
    let small = (ring.q() as u128).checked_pow(out.rows() as u32).is_some_and(|t| t <= 1 << 16);
    if small {
        debug_assert!(gamma::is_gamma_linearly_independent(&out, IndependenceMethod::Oracle, 1 << 16).unwrap_or(true));
    }
    Ok(out)
}

/// Lifts a reduced encoder over the residue field: each coefficient
/// becomes `(tau(Gt_i); gamma tau(Gt_i); ...; gamma^(nu-1) tau(Gt_i))`.
pub fn lift_encoder(gt: &PolyMatrix, ring: &ChainRing) -> Result<PolyMatrix> {
    if gt.ring() != &ring.residue_field() {
        return Err(Error::MixedRings);
    }
    if !gt.is_reduced()? {
        return Err(Error::NotReduced);
    }
    let nu = ring.nu();
    let coeffs = gt
        .coeffs()
        .iter()
        .map(|c| {
            let t = c.lift_into(ring)?;
            let layers: Vec<RingMatrix> = (0..nu).map(|i| t.mul_gamma_pow(i)).collect();
            RingMatrix::vstack(&layers.iter().collect::<Vec<_>>())
        })
        .collect::<Result<Vec<_>>>()?;
    PolyMatrix::new(ring, nu * gt.rows(), gt.cols(), coeffs)
}

pub fn lift_from_residue_field(gt: &PolyMatrix, ring: &ChainRing) -> Result<ConvCode> {
    ConvCode::new(lift_encoder(gt, ring)?)
}

/// Field code of a reduced encoder over `F_q`.
pub fn field_code(gt: &PolyMatrix) -> Result<ConvCode> {
    if !gt.ring().is_field() {
        return Err(Error::InvalidRing(format!("{} is not a field", gt.ring().name())));
    }
    ConvCode::new(gt.clone())
}

fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

fn check_binomial_params(n: usize, k: usize, delta: usize) -> Result<usize> {
    if k == 0 || k >= n {
        return Err(Error::InvalidParams(format!("need 0 < k < n, got n = {n}, k = {k}")));
    }
    if delta % k != 0 {
        return Err(Error::InvalidParams(format!("k = {k} must divide delta = {delta}")));
    }
    Ok(delta / k)
}

/// Coefficients `G_0..G_m` (`m = delta/k`) with
/// `G_i[r][c] = C(mn + n - k, (i+1)n - k + r - c)`, reduced mod `p`.
pub fn binomial_encoder(n: usize, k: usize, delta: usize, p: u64) -> Result<PolyMatrix> {
    let m = check_binomial_params(n, k, delta)?;
    let field = ChainRing::prime_field(p)?;
    let big_n = (m * n + n - k) as i64;
    let pb = BigUint::from(p);
    let coeffs = (0..=m)
        .map(|i| {
            let rows: Vec<Vec<i64>> = (0..k)
                .map(|r| {
                    (0..n)
                        .map(|c| {
                            let idx = ((i + 1) * n) as i64 - k as i64 + r as i64 - c as i64;
                            if idx < 0 || idx > big_n {
                                0
                            } else {
                                (binomial(big_n as u64, idx as u64) % &pb).to_i64().expect("reduced mod p")
                            }
                        })
                        .collect()
                })
                .collect();
            RingMatrix::from_ints(&field, &rows)
        })
        .collect();
    PolyMatrix::new(&field, k, n, coeffs)
}

/// `C(N, floor(N/2))^a * a^(a/2)` with `N = mn + n - k`, `a = k(L+1)`,
/// rounded down when `a` is odd.
pub fn binomial_bound(n: usize, k: usize, delta: usize) -> Result<BigUint> {
    let m = check_binomial_params(n, k, delta)?;
    let big_n = (m * n + n - k) as u64;
    let l = m + delta / (n - k);
    let a = (k * (l + 1)) as u32;
    let b = binomial(big_n, big_n / 2);
    let ab = BigUint::from(a);
    if a % 2 == 0 {
        Ok(b.pow(a) * ab.pow(a / 2))
    } else {
        Ok((b.pow(2 * a) * ab.pow(a)).sqrt())
    }
}

/// Warning text when `p` does not exceed the sufficient bound.
pub fn binomial_warning(n: usize, k: usize, delta: usize, p: u64) -> Result<Option<String>> {
    let bound = binomial_bound(n, k, delta)?;
    Ok((BigUint::from(p) <= bound).then(|| {
        format!("p = {p} is at most the sufficient bound {bound}; the reverse MDP property is not guaranteed and must be checked")
    }))
}

/// Upper-triangular Toeplitz matrix given by its first row.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ToeplitzSpec {
    pub ring: ChainRing,
    pub first_row: Vec<Elem>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RowConvention {
    /// rows `J_j = {(j+1)n + j(k-1), ..., (j+1)(n+k-1)}`
    Formula,
    /// rows `{j(n+k-1)+1, ..., j(n+k-1)+k}`
    Example,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinorRecord {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub valuation: usize,
}

impl ToeplitzSpec {
    pub fn new(ring: &ChainRing, first_row: Vec<Elem>) -> Self {
        ToeplitzSpec {
            ring: ring.clone(),
            first_row,
        }
    }

    pub fn from_ints(ring: &ChainRing, first_row: &[i64]) -> Self {
        Self::new(ring, first_row.iter().map(|&x| ring.from_int(x)).collect())
    }

    pub fn size(&self) -> usize {
        self.first_row.len()
    }

    pub fn matrix(&self) -> RingMatrix {
        let l = self.size();
        let mut m = RingMatrix::zeros(&self.ring, l, l);
        for i in 0..l {
            for j in i..l {
                m.set(i, j, self.first_row[j - i]);
            }
        }
        m
    }

    /// First row `(a_l, ..., a_1)`.
    pub fn reversed(&self) -> ToeplitzSpec {
        let mut r = self.first_row.clone();
        r.reverse();
        ToeplitzSpec::new(&self.ring, r)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "ring": self.ring.spec(),
            "first_row": self.first_row.iter().map(|x| self.ring.element_json(x)).collect::<Vec<_>>(),
        })
    }

    /// Accepts `{"ring", "first_row"}` or a matrix document, from which the
    /// first row is read and the Toeplitz shape is checked.
    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let ring = crate::format::ring_from_json(
            v.get("ring").ok_or_else(|| Error::Format("Toeplitz spec needs a 'ring'".into()))?,
        )?;
        if let Some(row) = v.get("first_row").and_then(|r| r.as_array()) {
            let first_row = row.iter().map(|x| ring.element_from_json(x)).collect::<Result<Vec<_>>>()?;
            return Ok(ToeplitzSpec::new(&ring, first_row));
        }
        let m = RingMatrix::from_json(v, Some(&ring))?;
        if !m.is_square() {
            return Err(Error::NotSquare {
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        let spec = ToeplitzSpec::new(&ring, m.row(0).to_vec());
        if spec.matrix() != m {
            return Err(Error::Format("matrix is not upper-triangular Toeplitz".into()));
        }
        Ok(spec)
    }
}

/// `|I| = |J|` and `i_m <= j_m` for all `m`.
pub fn is_proper(rows: &[usize], cols: &[usize]) -> Result<bool> {
    if rows.len() != cols.len() {
        return Err(Error::SizeMismatch(format!("|I| = {}, |J| = {}", rows.len(), cols.len())));
    }
    Ok(rows.iter().zip(cols).all(|(i, j)| i <= j))
}

fn combinations(n: usize, s: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(s);
    fn rec(start: usize, n: usize, s: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == s {
            out.push(cur.clone());
            return;
        }
        for i in start..=n - (s - cur.len()) {
            cur.push(i);
            rec(i + 1, n, s, cur, out);
            cur.pop();
        }
    }
    rec(0, n, s, &mut cur, &mut out);
    out
}

/// All proper pairs `(I, J)` of an `l x l` matrix, smallest first.
pub fn proper_pairs(l: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    let mut out = Vec::new();
    for s in 1..=l {
        let sets = combinations(l, s);
        for i in &sets {
            for j in &sets {
                if i.iter().zip(j).all(|(a, b)| a <= b) {
                    out.push((i.clone(), j.clone()));
                }
            }
        }
    }
    out
}

/// Every proper square submatrix has a unit determinant. The determinant
/// is taken over `R` and over the residue field, and the two verdicts are
/// required to agree.
pub fn is_gamma_superregular(t: &ToeplitzSpec) -> bool {
    let a = t.matrix();
    let l = t.size();
    for s in 1..=l {
        let sets = combinations(l, s);
        for i in &sets {
            for j in &sets {
                if !i.iter().zip(j).all(|(x, y)| x <= y) {
                    continue;
                }
                if !gamma::is_unit_determinant(&a.submatrix(i, j)).expect("square submatrix") {
                    return false;
                }
            }
        }
    }
    true
}

pub fn is_reverse_gamma_superregular(t: &ToeplitzSpec) -> bool {
    is_gamma_superregular(t) && is_gamma_superregular(&t.reversed())
}

/// Valuation of every proper minor.
pub fn superregular_certificate(t: &ToeplitzSpec) -> Vec<MinorRecord> {
    let a = t.matrix();
    proper_pairs(t.size())
        .into_iter()
        .map(|(rows, cols)| {
            let d = gamma::determinant(&a.submatrix(&rows, &cols)).expect("square submatrix");
            MinorRecord {
                valuation: t.ring.valuation(&d),
                rows,
                cols,
            }
        })
        .collect()
}

/// Zero-based row indices picked from an `(L+1)(n+k-1)` Toeplitz matrix.
pub fn extraction_rows(n: usize, k: usize, l: usize, conv: RowConvention) -> Vec<usize> {
    (0..=l)
        .flat_map(|j| {
            let start = match conv {
                RowConvention::Formula => (j + 1) * n + j * (k - 1) - 1,
                RowConvention::Example => j * (n + k - 1),
            };
            start..start + k
        })
        .collect()
}

/// Zero-based column indices `I_0 ∪ ... ∪ I_L`.
pub fn extraction_cols(n: usize, k: usize, l: usize) -> Vec<usize> {
    (0..=l)
        .flat_map(|j| {
            let start = j * n + j * (k - 1);
            start..start + n
        })
        .collect()
}

/// Reads `Gt_0..Gt_L` off the block-Toeplitz submatrix of a superregular
/// matrix, checking that the blocks below the diagonal vanish and that each
/// block diagonal repeats.
pub fn extract_blocks(a: &ToeplitzSpec, n: usize, k: usize, l: usize, conv: RowConvention) -> Result<PolyMatrix> {
    Ok(extract_with_submatrix(a, n, k, l, conv)?.0)
}

fn extract_with_submatrix(
    a: &ToeplitzSpec,
    n: usize,
    k: usize,
    l: usize,
    conv: RowConvention,
) -> Result<(PolyMatrix, RingMatrix)> {
    if n == 0 || k == 0 {
        return Err(Error::InvalidParams("need n, k >= 1".into()));
    }
    let ell = (l + 1) * (n + k - 1);
    if a.size() != ell {
        return Err(Error::SizeMismatch(format!(
            "Toeplitz size {} but (L+1)(n+k-1) = {ell}",
            a.size()
        )));
    }
    if !is_gamma_superregular(a) {
        return Err(Error::NotSuperregular);
    }
    let sub = a
        .matrix()
        .submatrix(&extraction_rows(n, k, l, conv), &extraction_cols(n, k, l));
    let block = |br: usize, bc: usize| -> RingMatrix {
        let rows: Vec<usize> = (br * k..(br + 1) * k).collect();
        let cols: Vec<usize> = (bc * n..(bc + 1) * n).collect();
        sub.submatrix(&rows, &cols)
    };
    for br in 0..=l {
        for bc in 0..=l {
            let b = block(br, bc);
            if bc < br {
                if !b.is_zero() {
                    return Err(Error::InconsistentBlocks(format!("block ({br},{bc}) below the diagonal is nonzero")));
                }
            } else if b != block(0, bc - br) {
                return Err(Error::InconsistentBlocks(format!("block ({br},{bc}) differs from block (0,{})", bc - br)));
            }
        }
    }
    let g = PolyMatrix::new(&a.ring, k, n, (0..=l).map(|i| block(0, i)).collect())?;
    Ok((g, sub))
}

/// [`extract_blocks`], additionally requiring every full-size minor of the
/// extracted matrix on columns with `t_(sk+1) > sn` to be a unit.
pub fn extract_mdp_blocks(a: &ToeplitzSpec, n: usize, k: usize, l: usize, conv: RowConvention) -> Result<PolyMatrix> {
    let (g, sub) = extract_with_submatrix(a, n, k, l, conv)?;
    let sets = admissible_column_sets(n, k, l, gamma::DEFAULT_BUDGET)?;
    let all_units = sets
        .par_iter()
        .all(|cols| gamma::is_unit_determinant(&sub.select_cols(cols)).expect("square selection"));
    if !all_units {
        return Err(Error::PreconditionViolated(format!(
            "rows chosen by the {conv:?} convention give a non-unit full-size minor"
        )));
    }
    Ok(g)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchStrategy {
    Exhaustive { budget: u128 },
    Random { seed: u64, budget: u128 },
}

/// Toeplitz matrices with `a_1 = 1` and `a_2..a_l` in `T` that are
/// superregular (and reverse superregular when asked), without repeats,
/// in enumeration or draw order.
pub fn search_superregular(
    ell: usize,
    ring: &ChainRing,
    strategy: SearchStrategy,
    require_reverse: bool,
) -> Result<Vec<ToeplitzSpec>> {
    if ell == 0 {
        return Ok(Vec::new());
    }
    let q = ring.q();
    let reps = ring.representatives();
    let spec_of = |digits: &[u64]| {
        let mut row = vec![ring.one()];
        row.extend(digits.iter().map(|&d| reps[d as usize]));
        ToeplitzSpec::new(ring, row)
    };
    let accept = |t: &ToeplitzSpec| {
        if require_reverse {
            is_reverse_gamma_superregular(t)
        } else {
            is_gamma_superregular(t)
        }
    };
    let free = (ell - 1) as u32;
    let candidates: Vec<Vec<u64>> = match strategy {
        SearchStrategy::Exhaustive { budget } => {
            let total = (q as u128).checked_pow(free).unwrap_or(u128::MAX);
            if total > budget {
                return Err(Error::BudgetExceeded { attempted: total, budget });
            }
            (0..total as u64)
                .map(|mut x| {
                    (0..free)
                        .map(|_| {
                            let d = x % q;
                            x /= q;
                            d
                        })
                        .collect()
                })
                .collect()
        }
        SearchStrategy::Random { seed, budget } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..budget)
                .map(|_| (0..free).map(|_| rng.gen_range(0..q)).collect())
                .collect()
        }
    };
    let hits: Vec<bool> = candidates.par_iter().map(|d| accept(&spec_of(d))).collect();
    let mut out: Vec<ToeplitzSpec> = Vec::new();
    for (d, hit) in candidates.iter().zip(hits) {
        if hit {
            let t = spec_of(d);
            if !out.contains(&t) {
                out.push(t);
            }
        }
    }
    Ok(out)
}
