//! Exact arithmetic in finite commutative chain rings.
//!
//! Two families are constructible: Galois rings `GR(p^r, s) = Z_{p^r}[x]/(f)`
//! with maximal ideal generated by `p`, and truncated polynomial rings
//! `F_q[u]/(u^nu)` with maximal ideal generated by `u`. Every element is a
//! fixed-width coordinate vector ([`Elem`]); all operations go through the
//! [`ChainRing`] handle.

use std::fmt;
use std::sync::{Arc, OnceLock};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fpoly;

/// Maximum number of coordinates stored per element.
pub const MAX_COORDS: usize = 8;

/// Largest residue field for which the representative set is tabulated.
const TABLE_LIMIT: u64 = 1 << 20;

/// A ring element as raw coordinates.
///
/// Galois rings store `s` coefficients in `[0, p^r)` for the basis
/// `1, x, ..., x^(s-1)`. Truncated rings store `nu` blocks of `h` base-field
/// digits, block `i` being the coefficient of `u^i`. Unused slots are zero,
/// so equality of coordinates is equality of elements.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Elem(pub(crate) [u32; MAX_COORDS]);

impl Elem {
    pub const ZERO: Elem = Elem([0; MAX_COORDS]);

    pub fn coords(&self) -> &[u32; MAX_COORDS] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0 == [0; MAX_COORDS]
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let last = self.0.iter().rposition(|&c| c != 0).map_or(1, |i| i + 1);
        write!(f, "{:?}", &self.0[..last])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    /// Multiplicatively closed set `{0, 1, xi, ..., xi^(q-2)}`.
    Teichmuller,
    /// The digits `{0, ..., p-1}`; only for `Z_{p^r}`.
    Canonical,
}

/// User-facing ring description; also the JSON ring descriptor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum ChainRingSpec {
    Galois {
        p: u64,
        r: u32,
        #[serde(default = "default_s")]
        s: usize,
        /// `s + 1` little-endian coefficients, monic. Defaults to the
        /// smallest polynomial irreducible mod p.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        modulus: Option<Vec<u64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        convention: Option<Convention>,
    },
    Truncated {
        q: u64,
        nu: u32,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        field_modulus: Option<Vec<u64>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        convention: Option<Convention>,
    },
}

fn default_s() -> usize {
    1
}

impl ChainRingSpec {
    pub fn galois(p: u64, r: u32, s: usize, modulus: Option<Vec<u64>>) -> Self {
        ChainRingSpec::Galois {
            p,
            r,
            s,
            modulus,
            convention: None,
        }
    }

    pub fn truncated(q: u64, nu: u32) -> Self {
        ChainRingSpec::Truncated {
            q,
            nu,
            field_modulus: None,
            convention: None,
        }
    }

    pub fn with_convention(mut self, c: Convention) -> Self {
        match &mut self {
            ChainRingSpec::Galois { convention, .. } | ChainRingSpec::Truncated { convention, .. } => {
                *convention = Some(c)
            }
        }
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

#[derive(Debug)]
enum Kind {
    Galois {
        r: u32,
        s: usize,
        /// p^r
        m: u64,
        modulus: Vec<u64>,
    },
    Truncated {
        h: usize,
        field: ChainRing,
    },
}

#[derive(Debug)]
struct Inner {
    spec: ChainRingSpec,
    kind: Kind,
    p: u64,
    nu: u32,
    /// residue degree: q = p^h
    h: usize,
    q: u64,
    ncoords: usize,
    convention: Convention,
    residue: Option<ChainRing>,
    table: OnceLock<Vec<Elem>>,
}

/// Shared handle to a finite chain ring.
#[derive(Clone)]
pub struct ChainRing(Arc<Inner>);

impl fmt::Debug for ChainRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ChainRing({})", self.name())
    }
}

impl PartialEq for ChainRing {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.spec == other.0.spec
    }
}

impl Eq for ChainRing {}

fn checked_pow(p: u64, e: u32) -> Option<u64> {
    p.checked_pow(e)
}

impl ChainRing {
    pub fn new(spec: ChainRingSpec) -> Result<ChainRing> {
        match spec {
            ChainRingSpec::Galois {
                p,
                r,
                s,
                modulus,
                convention,
            } => Self::build_galois(p, r, s, modulus, convention),
            ChainRingSpec::Truncated {
                q,
                nu,
                field_modulus,
                convention,
            } => Self::build_truncated(q, nu, field_modulus, convention),
        }
    }

    /// `Z_{p^r}` with the default (canonical digit) representatives.
    pub fn integers_mod(p: u64, r: u32) -> Result<ChainRing> {
        Self::new(ChainRingSpec::galois(p, r, 1, None))
    }

    pub fn prime_field(p: u64) -> Result<ChainRing> {
        Self::integers_mod(p, 1)
    }

    pub fn truncated(q: u64, nu: u32) -> Result<ChainRing> {
        Self::new(ChainRingSpec::truncated(q, nu))
    }

    fn build_galois(
        p: u64,
        r: u32,
        s: usize,
        modulus: Option<Vec<u64>>,
        convention: Option<Convention>,
    ) -> Result<ChainRing> {
        if !fpoly::is_prime(p) {
            return Err(Error::InvalidRing(format!("p = {p} is not prime")));
        }
        if r == 0 || s == 0 {
            return Err(Error::InvalidRing("r and s must be positive".into()));
        }
        if s > MAX_COORDS {
            return Err(Error::InvalidRing(format!("s = {s} exceeds {MAX_COORDS}")));
        }
        let m = checked_pow(p, r)
            .filter(|&m| m < (1 << 31))
            .ok_or_else(|| Error::InvalidRing(format!("p^r = {p}^{r} is too large")))?;
        let q = checked_pow(p, s as u32)
            .filter(|&q| q < (1 << 40))
            .ok_or_else(|| Error::InvalidRing("residue field too large".into()))?;
        let modulus = match modulus {
            Some(f) => {
                if f.len() != s + 1 || f[s] != 1 {
                    return Err(Error::InvalidRing(format!(
                        "modulus must be monic with {} coefficients",
                        s + 1
                    )));
                }
                if f.iter().any(|&c| c >= m) {
                    return Err(Error::InvalidRing(format!("modulus coefficients must lie in [0, {m})")));
                }
                if !fpoly::is_irreducible(&f, p) {
                    return Err(Error::RejectedModulus { p, s });
                }
                f
            }
            None => fpoly::smallest_irreducible(p, s),
        };
        let convention = match convention {
            Some(Convention::Canonical) if s > 1 => return Err(Error::InvalidConvention),
            Some(c) => c,
            None if s == 1 => Convention::Canonical,
            None => Convention::Teichmuller,
        };
        let residue = if r == 1 {
            None
        } else {
            let fm: Vec<u64> = modulus.iter().map(|c| c % p).collect();
            Some(Self::build_galois(p, 1, s, Some(fm), None)?)
        };
        let spec = ChainRingSpec::Galois {
            p,
            r,
            s,
            modulus: Some(modulus.clone()),
            convention: Some(convention),
        };
        Ok(ChainRing(Arc::new(Inner {
            spec,
            kind: Kind::Galois { r, s, m, modulus },
            p,
            nu: r,
            h: s,
            q,
            ncoords: s,
            convention,
            residue,
            table: OnceLock::new(),
        })))
    }

    fn build_truncated(
        q: u64,
        nu: u32,
        field_modulus: Option<Vec<u64>>,
        convention: Option<Convention>,
    ) -> Result<ChainRing> {
        let factors = fpoly::prime_factors(q);
        if factors.len() != 1 {
            return Err(Error::InvalidRing(format!("q = {q} is not a prime power")));
        }
        let p = factors[0];
        let mut h = 0usize;
        let mut t = q;
        while t > 1 {
            t /= p;
            h += 1;
        }
        if nu == 0 {
            return Err(Error::InvalidRing("nu must be positive".into()));
        }
        if nu as usize * h > MAX_COORDS {
            return Err(Error::InvalidRing(format!(
                "nu * log_p(q) = {} exceeds {MAX_COORDS}",
                nu as usize * h
            )));
        }
        if convention == Some(Convention::Canonical) {
            return Err(Error::InvalidConvention);
        }
        let field = Self::build_galois(p, 1, h, field_modulus.clone(), None)?;
        let fm = match &field.0.spec {
            ChainRingSpec::Galois { modulus, .. } => modulus.clone(),
            _ => unreachable!(),
        };
        let spec = ChainRingSpec::Truncated {
            q,
            nu,
            field_modulus: fm,
            convention: Some(Convention::Teichmuller),
        };
        Ok(ChainRing(Arc::new(Inner {
            spec,
            kind: Kind::Truncated {
                h,
                field: field.clone(),
            },
            p,
            nu,
            h,
            q,
            ncoords: nu as usize * h,
            convention: Convention::Teichmuller,
            residue: Some(field),
            table: OnceLock::new(),
        })))
    }

    /// Fully resolved descriptor (modulus and convention filled in).
    pub fn spec(&self) -> &ChainRingSpec {
        &self.0.spec
    }

    pub fn name(&self) -> String {
        match &self.0.kind {
            Kind::Galois { r, s: 1, .. } if *r == 1 => format!("F_{}", self.0.p),
            Kind::Galois { m, s: 1, .. } => format!("Z_{m}"),
            Kind::Galois { m, s, .. } => format!("GR({m},{s})"),
            Kind::Truncated { .. } => format!("F_{}[u]/(u^{})", self.0.q, self.0.nu),
        }
    }

    pub fn p(&self) -> u64 {
        self.0.p
    }

    /// Nilpotency index of gamma.
    pub fn nu(&self) -> usize {
        self.0.nu as usize
    }

    /// Residue field size.
    pub fn q(&self) -> u64 {
        self.0.q
    }

    pub fn residue_degree(&self) -> usize {
        self.0.h
    }

    pub fn convention(&self) -> Convention {
        self.0.convention
    }

    pub fn ncoords(&self) -> usize {
        self.0.ncoords
    }

    pub fn is_field(&self) -> bool {
        self.0.nu == 1
    }

    /// |R| = q^nu, if it fits.
    pub fn size(&self) -> Option<u128> {
        (self.0.q as u128).checked_pow(self.0.nu)
    }

    /// The residue field `R / <gamma>` as a ring with `nu = 1`.
    pub fn residue_field(&self) -> ChainRing {
        self.0.residue.clone().unwrap_or_else(|| self.clone())
    }

    /// Coordinate modulus of slot `i`.
    fn coord_base(&self) -> u64 {
        match &self.0.kind {
            Kind::Galois { m, .. } => *m,
            Kind::Truncated { .. } => self.0.p,
        }
    }

    pub fn zero(&self) -> Elem {
        Elem::ZERO
    }

    pub fn one(&self) -> Elem {
        let mut e = Elem::ZERO;
        e.0[0] = 1;
        e
    }

    pub fn gamma(&self) -> Elem {
        self.mul_gamma_pow(&self.one(), 1)
    }

    /// Image of an integer under Z -> R.
    pub fn from_int(&self, v: i64) -> Elem {
        let c = self.characteristic() as i64;
        let mut e = Elem::ZERO;
        e.0[0] = v.rem_euclid(c) as u32;
        e
    }

    pub fn characteristic(&self) -> u64 {
        match &self.0.kind {
            Kind::Galois { m, .. } => *m,
            Kind::Truncated { .. } => self.0.p,
        }
    }

    /// Element with the given coordinates, validated.
    pub fn from_coords(&self, coords: &[u64]) -> Result<Elem> {
        if coords.len() > self.0.ncoords {
            return Err(Error::Format(format!(
                "{} coordinates given, ring {} has {}",
                coords.len(),
                self.name(),
                self.0.ncoords
            )));
        }
        let base = self.coord_base();
        let mut e = Elem::ZERO;
        for (i, &c) in coords.iter().enumerate() {
            if c >= base {
                return Err(Error::Format(format!("coordinate {c} out of range [0, {base})")));
            }
            e.0[i] = c as u32;
        }
        Ok(e)
    }

    pub fn contains(&self, a: &Elem) -> bool {
        let base = self.coord_base();
        a.0.iter()
            .enumerate()
            .all(|(i, &c)| if i < self.0.ncoords { (c as u64) < base } else { c == 0 })
    }

    pub fn add(&self, a: &Elem, b: &Elem) -> Elem {
        let base = self.coord_base() as u32;
        let mut out = Elem::ZERO;
        for i in 0..self.0.ncoords {
            let s = a.0[i] as u64 + b.0[i] as u64;
            out.0[i] = (s % base as u64) as u32;
        }
        out
    }

    pub fn neg(&self, a: &Elem) -> Elem {
        let base = self.coord_base() as u32;
        let mut out = Elem::ZERO;
        for i in 0..self.0.ncoords {
            out.0[i] = if a.0[i] == 0 { 0 } else { base - a.0[i] };
        }
        out
    }

    pub fn sub(&self, a: &Elem, b: &Elem) -> Elem {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        match &self.0.kind {
            Kind::Galois { s: 1, m, .. } => {
                let mut out = Elem::ZERO;
                out.0[0] = (a.0[0] as u64 * b.0[0] as u64 % m) as u32;
                out
            }
            Kind::Galois { s, m, modulus, .. } => galois_mul(a, b, *s, *m, modulus),
            Kind::Truncated { h, field } => {
                let nu = self.0.nu as usize;
                let mut out = Elem::ZERO;
                for i in 0..nu {
                    let ai = block(a, i, *h);
                    if ai.is_zero() {
                        continue;
                    }
                    for j in 0..nu - i {
                        let bj = block(b, j, *h);
                        if bj.is_zero() {
                            continue;
                        }
                        let prod = field.mul(&ai, &bj);
                        let cur = block(&out, i + j, *h);
                        set_block(&mut out, i + j, *h, &field.add(&cur, &prod));
                    }
                }
                out
            }
        }
    }

    /// Checked binary operation: both operands must be elements of this ring.
    pub fn arithmetic(&self, a: &Elem, b: &Elem, op: ArithOp) -> Result<Elem> {
        if !self.contains(a) || !self.contains(b) {
            return Err(Error::MixedRings);
        }
        Ok(match op {
            ArithOp::Add => self.add(a, b),
            ArithOp::Sub => self.sub(a, b),
            ArithOp::Mul => self.mul(a, b),
        })
    }

    pub fn pow(&self, a: &Elem, mut e: u128) -> Elem {
        let mut acc = self.one();
        let mut b = *a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            e >>= 1;
            if e > 0 {
                b = self.mul(&b, &b);
            }
        }
        acc
    }

    /// Largest `i` with `a` in `<gamma^i>`; `nu` for zero.
    pub fn valuation(&self, a: &Elem) -> usize {
        match &self.0.kind {
            Kind::Galois { r, s, .. } => {
                let p = self.0.p as u32;
                let mut v = *r as usize;
                for &c in &a.0[..*s] {
                    if c == 0 {
                        continue;
                    }
                    let mut c = c;
                    let mut k = 0;
                    while c % p == 0 {
                        c /= p;
                        k += 1;
                    }
                    v = v.min(k);
                }
                v
            }
            Kind::Truncated { h, .. } => {
                let nu = self.0.nu as usize;
                (0..nu).find(|&i| !block(a, i, *h).is_zero()).unwrap_or(nu)
            }
        }
    }

    pub fn is_unit(&self, a: &Elem) -> bool {
        self.valuation(a) == 0
    }

    /// `gamma^e * a`.
    pub fn mul_gamma_pow(&self, a: &Elem, e: usize) -> Elem {
        if e == 0 {
            return *a;
        }
        if e >= self.nu() {
            return Elem::ZERO;
        }
        match &self.0.kind {
            Kind::Galois { s, m, .. } => {
                let f = self.0.p.pow(e as u32);
                let mut out = Elem::ZERO;
                for i in 0..*s {
                    out.0[i] = (a.0[i] as u64 * f % m) as u32;
                }
                out
            }
            Kind::Truncated { h, .. } => {
                let nu = self.nu();
                let mut out = Elem::ZERO;
                for i in 0..nu - e {
                    set_block(&mut out, i + e, *h, &block(a, i, *h));
                }
                out
            }
        }
    }

    /// Some `b` with `gamma^e * b = a`; requires `valuation(a) >= e`.
    /// The canonical choice divides coordinates exactly.
    pub fn div_gamma_pow(&self, a: &Elem, e: usize) -> Elem {
        debug_assert!(self.valuation(a) >= e);
        if e == 0 {
            return *a;
        }
        match &self.0.kind {
            Kind::Galois { s, .. } => {
                let f = self.0.p.pow(e as u32) as u32;
                let mut out = Elem::ZERO;
                for i in 0..*s {
                    out.0[i] = a.0[i] / f;
                }
                out
            }
            Kind::Truncated { h, .. } => {
                let nu = self.nu();
                let mut out = Elem::ZERO;
                for i in e..nu {
                    set_block(&mut out, i - e, *h, &block(a, i, *h));
                }
                out
            }
        }
    }

    /// Multiplicative inverse of a unit.
    pub fn invert_unit(&self, a: &Elem) -> Result<Elem> {
        if !self.is_unit(a) {
            return Err(Error::NotAUnit);
        }
        let field = self.residue_field();
        let c = self.project(a);
        let cinv = if self.0.q == 2 {
            c
        } else {
            field.pow(&c, (self.0.q - 2) as u128)
        };
        let mut x = self.embed_residue(&cinv);
        if self.is_field() {
            return Ok(x);
        }
        // Newton iteration x <- x (2 - a x) doubles the gamma-adic precision.
        let two = self.from_int(2);
        for _ in 0..=8 {
            let ax = self.mul(a, &x);
            if ax == self.one() {
                return Ok(x);
            }
            x = self.mul(&x, &self.sub(&two, &ax));
        }
        unreachable!("Newton iteration for a unit inverse failed to converge")
    }

    /// Canonical projection onto the residue field.
    pub fn project(&self, a: &Elem) -> Elem {
        match &self.0.kind {
            Kind::Galois { s, .. } => {
                if self.is_field() {
                    return *a;
                }
                let p = self.0.p as u32;
                let mut out = Elem::ZERO;
                for i in 0..*s {
                    out.0[i] = a.0[i] % p;
                }
                out
            }
            Kind::Truncated { h, .. } => block(a, 0, *h),
        }
    }

    /// Residue coordinates reinterpreted as ring coordinates (a set-theoretic
    /// section of `project`, not in general the representative set).
    fn embed_residue(&self, c: &Elem) -> Elem {
        *c
    }

    /// Representative `tau(c)` of a residue class, per the ring's convention.
    pub fn lift(&self, c: &Elem) -> Elem {
        let x = self.embed_residue(c);
        if self.0.convention == Convention::Canonical || self.is_field() || c.is_zero() {
            return x;
        }
        let q = self.0.q as u128;
        let mut x = x;
        for _ in 0..=self.nu() + 1 {
            let y = self.pow(&x, q);
            if y == x {
                return x;
            }
            x = y;
        }
        unreachable!("Teichmuller iteration did not stabilise")
    }

    /// Index of a residue field element in `[0, q)` (base-p digits).
    pub fn residue_index(&self, c: &Elem) -> u64 {
        let p = self.0.p;
        c.0[..self.0.h]
            .iter()
            .rev()
            .fold(0u64, |acc, &d| acc * p + d as u64)
    }

    pub fn residue_from_index(&self, mut idx: u64) -> Elem {
        let p = self.0.p;
        let mut out = Elem::ZERO;
        for i in 0..self.0.h {
            out.0[i] = (idx % p) as u32;
            idx /= p;
        }
        out
    }

    /// The representative set `T`, ordered by residue index (so `T[0] = 0`
    /// and `T[1] = 1`). Cached; panics beyond 2^20 residue classes.
    pub fn representatives(&self) -> &[Elem] {
        self.0.table.get_or_init(|| {
            assert!(self.0.q <= TABLE_LIMIT, "representative table too large");
            (0..self.0.q)
                .map(|i| self.lift(&self.residue_from_index(i)))
                .collect()
        })
    }

    /// Representative of residue index `i` without forcing the full table.
    pub fn representative(&self, i: u64) -> Elem {
        if self.0.q <= TABLE_LIMIT {
            self.representatives()[i as usize]
        } else {
            self.lift(&self.residue_from_index(i))
        }
    }

    pub fn is_representative(&self, t: &Elem) -> bool {
        self.contains(t) && self.lift(&self.project(t)) == *t
    }

    /// Digits `(t_0, ..., t_{nu-1})` in `T` with `a = sum t_i gamma^i`.
    pub fn gamma_adic_decompose(&self, a: &Elem) -> Vec<Elem> {
        let nu = self.nu();
        let mut digits = Vec::with_capacity(nu);
        let mut rest = *a;
        for i in 0..nu {
            let t = self.lift(&self.project(&rest));
            digits.push(t);
            if i + 1 < nu {
                rest = self.div_gamma_pow(&self.sub(&rest, &t), 1);
            }
        }
        digits
    }

    pub fn gamma_adic_compose(&self, digits: &[Elem]) -> Result<Elem> {
        if digits.len() != self.nu() {
            return Err(Error::SizeMismatch(format!(
                "expected {} digits, got {}",
                self.nu(),
                digits.len()
            )));
        }
        let mut acc = Elem::ZERO;
        for (i, t) in digits.iter().enumerate() {
            if !self.is_representative(t) {
                return Err(Error::DigitNotInT { index: i });
            }
            acc = self.add(&acc, &self.mul_gamma_pow(t, i));
        }
        Ok(acc)
    }

    /// Enumeration index of an element in `[0, |R|)`.
    pub fn index_of(&self, a: &Elem) -> u128 {
        let base = self.coord_base() as u128;
        a.0[..self.0.ncoords]
            .iter()
            .rev()
            .fold(0u128, |acc, &c| acc * base + c as u128)
    }

    pub fn element_from_index(&self, mut idx: u128) -> Elem {
        let base = self.coord_base() as u128;
        let mut out = Elem::ZERO;
        for i in 0..self.0.ncoords {
            out.0[i] = (idx % base) as u32;
            idx /= base;
        }
        out
    }

    /// All elements; intended for small rings.
    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        let n = self.size().expect("ring too large to enumerate");
        (0..n).map(move |i| self.element_from_index(i))
    }

    pub fn random_element<G: Rng + ?Sized>(&self, rng: &mut G) -> Elem {
        let base = self.coord_base();
        let mut out = Elem::ZERO;
        for i in 0..self.0.ncoords {
            out.0[i] = rng.gen_range(0..base) as u32;
        }
        out
    }

    pub fn random_unit<G: Rng + ?Sized>(&self, rng: &mut G) -> Elem {
        loop {
            let a = self.random_element(rng);
            if self.is_unit(&a) {
                return a;
            }
        }
    }

    pub fn random_representative<G: Rng + ?Sized>(&self, rng: &mut G) -> Elem {
        self.representative(rng.gen_range(0..self.0.q))
    }

    /// Order of a unit in the multiplicative group.
    pub fn multiplicative_order(&self, a: &Elem) -> Option<u128> {
        if !self.is_unit(a) {
            return None;
        }
        let q = self.0.q as u128;
        let group = (q - 1) * q.pow(self.0.nu - 1);
        let mut primes = fpoly::prime_factors(self.0.q - 1);
        if self.0.nu > 1 && !primes.contains(&self.0.p) {
            primes.push(self.0.p);
        }
        let mut ord = group;
        for l in primes {
            let l = l as u128;
            while ord % l == 0 && self.pow(a, ord / l) == self.one() {
                ord /= l;
            }
        }
        Some(ord)
    }

    /// The basis element `x` of a Galois ring (a root of the modulus).
    pub fn modulus_root(&self) -> Option<Elem> {
        match &self.0.kind {
            Kind::Galois { s, .. } if *s > 1 => {
                let mut e = Elem::ZERO;
                e.0[1] = 1;
                Some(e)
            }
            _ => None,
        }
    }

    /// A generator `xi` of the cyclic group `T \ {0}` of order `q - 1`,
    /// found by search over representatives. Only meaningful under the
    /// Teichmuller convention.
    pub fn teichmuller_generator(&self) -> Option<Elem> {
        if self.0.convention != Convention::Teichmuller && self.0.q > 2 && !self.is_field() {
            return None;
        }
        (1..self.0.q)
            .map(|i| self.lift(&self.residue_from_index(i)))
            .find(|t| self.multiplicative_order(t) == Some((self.0.q - 1) as u128))
    }

    /// Human-readable element.
    pub fn format(&self, a: &Elem) -> String {
        match self.element_json(a) {
            serde_json::Value::Number(n) => n.to_string(),
            v => v.to_string(),
        }
    }

    /// JSON encoding: a bare integer when one coordinate suffices, else a
    /// little-endian coordinate array. Truncated rings over a non-prime
    /// field use one nested array per power of `u`.
    pub fn element_json(&self, a: &Elem) -> serde_json::Value {
        use serde_json::Value;
        match &self.0.kind {
            Kind::Galois { s: 1, .. } => Value::from(a.0[0]),
            Kind::Galois { s, .. } => Value::from(a.0[..*s].to_vec()),
            Kind::Truncated { h: 1, .. } => Value::from(a.0[..self.nu()].to_vec()),
            Kind::Truncated { h, .. } => Value::Array(
                (0..self.nu())
                    .map(|i| Value::from(block(a, i, *h).0[..*h].to_vec()))
                    .collect(),
            ),
        }
    }

    pub fn element_from_json(&self, v: &serde_json::Value) -> Result<Elem> {
        use serde_json::Value;
        let as_u64 = |v: &Value| {
            v.as_u64()
                .ok_or_else(|| Error::Format(format!("expected a nonnegative integer, got {v}")))
        };
        match (&self.0.kind, v) {
            (_, Value::Number(_)) => {
                if self.0.ncoords != 1 && !matches!(self.0.kind, Kind::Galois { .. }) {
                    // bare integers embed through Z -> R
                    return Ok(self.from_int(as_u64(v)? as i64));
                }
                self.from_coords(&[as_u64(v)?])
            }
            (Kind::Truncated { h, .. }, Value::Array(items)) if *h > 1 => {
                if items.len() > self.nu() {
                    return Err(Error::Format("too many u-coefficients".into()));
                }
                let mut out = Elem::ZERO;
                for (i, item) in items.iter().enumerate() {
                    let digits = match item {
                        Value::Array(ds) => ds.iter().map(as_u64).collect::<Result<Vec<_>>>()?,
                        other => vec![as_u64(other)?],
                    };
                    if digits.len() > *h || digits.iter().any(|&d| d >= self.0.p) {
                        return Err(Error::Format(format!("bad residue digits {item}")));
                    }
                    for (j, d) in digits.into_iter().enumerate() {
                        out.0[i * h + j] = d as u32;
                    }
                }
                Ok(out)
            }
            (_, Value::Array(items)) => {
                let cs = items.iter().map(as_u64).collect::<Result<Vec<_>>>()?;
                self.from_coords(&cs)
            }
            _ => Err(Error::Format(format!("cannot parse ring element from {v}"))),
        }
    }
}

fn block(a: &Elem, i: usize, h: usize) -> Elem {
    let mut out = Elem::ZERO;
    out.0[..h].copy_from_slice(&a.0[i * h..(i + 1) * h]);
    out
}

fn set_block(a: &mut Elem, i: usize, h: usize, v: &Elem) {
    a.0[i * h..(i + 1) * h].copy_from_slice(&v.0[..h]);
}

fn galois_mul(a: &Elem, b: &Elem, s: usize, m: u64, modulus: &[u64]) -> Elem {
    let mut t = [0u64; 2 * MAX_COORDS - 1];
    for i in 0..s {
        let ai = a.0[i] as u64;
        if ai == 0 {
            continue;
        }
        for j in 0..s {
            t[i + j] += ai * b.0[j] as u64 % m;
        }
    }
    for x in t.iter_mut().take(2 * s - 1) {
        *x %= m;
    }
    for d in (s..2 * s - 1).rev() {
        let c = t[d];
        if c == 0 {
            continue;
        }
        t[d] = 0;
        for j in 0..s {
            let f = modulus[j];
            if f != 0 {
                t[d - s + j] = (t[d - s + j] + c * (m - f) % m) % m;
            }
        }
    }
    let mut out = Elem::ZERO;
    for i in 0..s {
        out.0[i] = t[i] as u32;
    }
    out
}
