//! Dense matrices over a chain ring.

use std::fmt;

use crate::error::{Error, Result};
use crate::ring::{ChainRing, Elem};

#[derive(Clone, PartialEq, Eq)]
pub struct RingMatrix {
    ring: ChainRing,
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl fmt::Debug for RingMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}x{} over {}", self.rows, self.cols, self.ring.name())?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|e| self.ring.format(e)).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl RingMatrix {
    pub fn zeros(ring: &ChainRing, rows: usize, cols: usize) -> Self {
        RingMatrix {
            ring: ring.clone(),
            rows,
            cols,
            data: vec![Elem::ZERO; rows * cols],
        }
    }

    pub fn identity(ring: &ChainRing, n: usize) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.set(i, i, ring.one());
        }
        m
    }

    pub fn from_elems(ring: &ChainRing, rows: usize, cols: usize, data: Vec<Elem>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::SizeMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if data.iter().any(|e| !ring.contains(e)) {
            return Err(Error::MixedRings);
        }
        Ok(RingMatrix {
            ring: ring.clone(),
            rows,
            cols,
            data,
        })
    }

    /// Matrix from integer rows, mapped through `Z -> R`.
    pub fn from_ints(ring: &ChainRing, rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged integer matrix");
        let data = rows.iter().flatten().map(|&v| ring.from_int(v)).collect();
        RingMatrix {
            ring: ring.clone(),
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn from_rows(ring: &ChainRing, cols: usize, rows: &[Vec<Elem>]) -> Result<Self> {
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::SizeMismatch("row length differs from column count".into()));
        }
        Self::from_elems(ring, rows.len(), cols, rows.concat())
    }

    pub fn ring(&self) -> &ChainRing {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Elem] {
        &self.data
    }

    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vectors(&self) -> Vec<Vec<Elem>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Elem::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += c * row[src]
    pub fn add_row_multiple(&mut self, dst: usize, src: usize, c: &Elem) {
        if c.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let s = self.get(src, j);
            if s.is_zero() {
                continue;
            }
            let v = self.ring.add(&self.get(dst, j), &self.ring.mul(c, &s));
            self.set(dst, j, v);
        }
    }

    /// col[dst] += c * col[src]
    pub fn add_col_multiple(&mut self, dst: usize, src: usize, c: &Elem) {
        if c.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let s = self.get(i, src);
            if s.is_zero() {
                continue;
            }
            let v = self.ring.add(&self.get(i, dst), &self.ring.mul(c, &s));
            self.set(i, dst, v);
        }
    }

    pub fn scale_row(&mut self, i: usize, c: &Elem) {
        for j in 0..self.cols {
            let v = self.ring.mul(c, &self.get(i, j));
            self.set(i, j, v);
        }
    }

    pub fn scale_col(&mut self, j: usize, c: &Elem) {
        for i in 0..self.rows {
            let v = self.ring.mul(c, &self.get(i, j));
            self.set(i, j, v);
        }
    }

    pub fn mul(&self, other: &RingMatrix) -> Result<RingMatrix> {
        if self.ring != other.ring {
            return Err(Error::MixedRings);
        }
        if self.cols != other.rows {
            return Err(Error::SizeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let r = &self.ring;
        let mut out = RingMatrix::zeros(r, self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(l, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = r.add(&out.get(i, j), &r.mul(&a, &b));
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix.
    pub fn left_mul_vec(&self, v: &[Elem]) -> Vec<Elem> {
        assert_eq!(v.len(), self.rows);
        let r = &self.ring;
        let mut out = vec![Elem::ZERO; self.cols];
        for (i, a) in v.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                let b = self.get(i, j);
                if !b.is_zero() {
                    *o = r.add(o, &r.mul(a, &b));
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> RingMatrix {
        let mut out = RingMatrix::zeros(&self.ring, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> RingMatrix {
        let mut data = Vec::with_capacity(rows.len() * cols.len());
        for &i in rows {
            for &j in cols {
                data.push(self.get(i, j));
            }
        }
        RingMatrix {
            ring: self.ring.clone(),
            rows: rows.len(),
            cols: cols.len(),
            data,
        }
    }

    pub fn select_cols(&self, cols: &[usize]) -> RingMatrix {
        let rows: Vec<usize> = (0..self.rows).collect();
        self.submatrix(&rows, cols)
    }

    pub fn select_rows(&self, rows: &[usize]) -> RingMatrix {
        let cols: Vec<usize> = (0..self.cols).collect();
        self.submatrix(rows, &cols)
    }

    pub fn vstack(parts: &[&RingMatrix]) -> Result<RingMatrix> {
        let first = parts
            .first()
            .ok_or_else(|| Error::SizeMismatch("nothing to stack".into()))?;
        let mut data = Vec::new();
        let mut rows = 0;
        for p in parts {
            if p.cols != first.cols {
                return Err(Error::SizeMismatch("column counts differ".into()));
            }
            if p.ring != first.ring {
                return Err(Error::MixedRings);
            }
            data.extend_from_slice(&p.data);
            rows += p.rows;
        }
        Ok(RingMatrix {
            ring: first.ring.clone(),
            rows,
            cols: first.cols,
            data,
        })
    }

    /// Entry-wise `gamma^e * a`.
    pub fn mul_gamma_pow(&self, e: usize) -> RingMatrix {
        self.map(|a| self.ring.mul_gamma_pow(a, e))
    }

    pub fn map(&self, f: impl Fn(&Elem) -> Elem) -> RingMatrix {
        RingMatrix {
            ring: self.ring.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    /// Entry-wise projection onto the residue field.
    pub fn project(&self) -> RingMatrix {
        let field = self.ring.residue_field();
        RingMatrix {
            ring: field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| self.ring.project(a)).collect(),
        }
    }

    /// Entry-wise representative lift of a residue-field matrix into `ring`.
    pub fn lift_into(&self, ring: &ChainRing) -> Result<RingMatrix> {
        if ring.residue_field() != self.ring {
            return Err(Error::MixedRings);
        }
        Ok(RingMatrix {
            ring: ring.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|c| ring.lift(c)).collect(),
        })
    }

    pub fn zero_row(&self, i: usize) -> bool {
        self.row(i).iter().all(Elem::is_zero)
    }

    pub fn to_json(&self, with_ring: bool) -> serde_json::Value {
        let mut obj = serde_json::Map::new();
        if with_ring {
            obj.insert(
                "ring".into(),
                serde_json::to_value(self.ring.spec()).expect("ring spec serializes"),
            );
        }
        obj.insert("rows".into(), self.rows.into());
        obj.insert("cols".into(), self.cols.into());
        obj.insert(
            "entries".into(),
            serde_json::Value::Array(self.data.iter().map(|e| self.ring.element_json(e)).collect()),
        );
        serde_json::Value::Object(obj)
    }

    /// Parses `{"rows","cols","entries"}`; the ring comes from the document
    /// if present, else from `ring`. Entries may be flat or nested per row.
    /// A bare array of rows is accepted when `ring` is given.
    pub fn from_json(v: &serde_json::Value, ring: Option<&ChainRing>) -> Result<RingMatrix> {
        if let (Some(rows), Some(ring)) = (v.as_array(), ring) {
            let parsed = rows
                .iter()
                .map(|r| {
                    r.as_array()
                        .ok_or_else(|| Error::Format("matrix rows must be arrays".into()))?
                        .iter()
                        .map(|e| ring.element_from_json(e))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            let cols = parsed.first().map_or(0, Vec::len);
            return RingMatrix::from_rows(ring, cols, &parsed);
        }
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Format("matrix must be a JSON object".into()))?;
        let ring = match (obj.get("ring"), ring) {
            (Some(r), _) => crate::format::ring_from_json(r)?,
            (None, Some(r)) => r.clone(),
            (None, None) => return Err(Error::Format("matrix has no ring".into())),
        };
        let field = |k: &str| {
            obj.get(k)
                .and_then(|x| x.as_u64())
                .map(|x| x as usize)
                .ok_or_else(|| Error::Format(format!("matrix field '{k}' missing or not an integer")))
        };
        let rows = field("rows")?;
        let cols = field("cols")?;
        let entries = obj
            .get("entries")
            .and_then(|e| e.as_array())
            .ok_or_else(|| Error::Format("matrix field 'entries' missing".into()))?;
        let parse_flat = |items: Vec<&serde_json::Value>| -> Result<Vec<Elem>> {
            if items.len() != rows * cols {
                return Err(Error::SizeMismatch(format!(
                    "{} entries for a {rows}x{cols} matrix",
                    items.len()
                )));
            }
            items.into_iter().map(|e| ring.element_from_json(e)).collect()
        };
        let data = match parse_flat(entries.iter().collect()) {
            Ok(d) => d,
            Err(flat_err) => {
                // one array per row
                let mut items = Vec::new();
                for r in entries {
                    match r.as_array() {
                        Some(r) if r.len() == cols => items.extend(r.iter()),
                        _ => return Err(flat_err),
                    }
                }
                parse_flat(items)?
            }
        };
        Ok(RingMatrix {
            ring,
            rows,
            cols,
            data,
        })
    }
}
