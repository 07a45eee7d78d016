//! Homogeneous forms: binary forms in `x, y` (sections of line bundles on the
//! projective line) and sparse multivariate homogeneous polynomials.
//!
//! A binary form of degree `d` is stored as `d + 1` coefficients, index `i`
//! holding the coefficient of `x^(d-i) y^i`. The degree is part of the data:
//! a vanishing leading coefficient is fine, only the identically-zero form is
//! degreeless. Gcds are computed by dehomogenizing at `y = 1`, which is
//! faithful once the visible power of `y` has been split off, and are
//! normalized so the first nonzero coefficient (the highest power of `x`) is 1.

use crate::error::{Error, Result};
use crate::field::{FieldKind, Scalar};
use crate::ktpoly::KtPoly;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryForm {
    field: FieldKind,
    /// `None` is the zero form; otherwise nonempty and not all zero.
    coeffs: Option<Vec<Scalar>>,
}

impl BinaryForm {
    pub fn zero(field: FieldKind) -> Self {
        BinaryForm { field, coeffs: None }
    }

    /// Builds a form of degree `coeffs.len() - 1`; an all-zero coefficient
    /// vector collapses to the zero form.
    pub fn new(field: FieldKind, coeffs: Vec<Scalar>) -> Result<Self> {
        for c in &coeffs {
            if c.field() != field {
                return Err(Error::FieldMismatch(field, c.field()));
            }
        }
        if coeffs.is_empty() || coeffs.iter().all(Scalar::is_zero) {
            return Ok(BinaryForm::zero(field));
        }
        Ok(BinaryForm { field, coeffs: Some(coeffs) })
    }

    pub fn from_i64_coeffs(field: FieldKind, coeffs: &[i64]) -> Self {
        let cs = coeffs.iter().map(|&n| Scalar::from_i64(field, n)).collect();
        BinaryForm::new(field, cs).expect("coefficients built in-field")
    }

    pub fn constant(c: Scalar) -> Self {
        let field = c.field();
        BinaryForm::new(field, vec![c]).expect("single coefficient is in-field")
    }

    pub fn field(&self) -> FieldKind {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_none()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.as_ref().map(|c| c.len() - 1)
    }

    pub fn coeffs(&self) -> &[Scalar] {
        self.coeffs.as_deref().unwrap_or(&[])
    }

    /// Coefficient of `x^(d-i) y^i`.
    pub fn coeff(&self, i: usize) -> Scalar {
        self.coeffs
            .as_ref()
            .and_then(|c| c.get(i).cloned())
            .unwrap_or_else(|| Scalar::zero(self.field))
    }

    /// Addition requires equal degrees unless one side is zero.
    pub fn add(&self, other: &BinaryForm) -> Result<BinaryForm> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field, other.field));
        }
        match (&self.coeffs, &other.coeffs) {
            (None, _) => Ok(other.clone()),
            (_, None) => Ok(self.clone()),
            (Some(a), Some(b)) => {
                if a.len() != b.len() {
                    return Err(Error::Degree(format!(
                        "cannot add forms of degree {} and {}",
                        a.len() - 1,
                        b.len() - 1
                    )));
                }
                let sum = a.iter().zip(b).map(|(x, y)| x.add(y)).collect();
                BinaryForm::new(self.field, sum)
            }
        }
    }

    pub fn neg(&self) -> BinaryForm {
        BinaryForm {
            field: self.field,
            coeffs: self
                .coeffs
                .as_ref()
                .map(|c| c.iter().map(Scalar::neg).collect()),
        }
    }

    pub fn sub(&self, other: &BinaryForm) -> Result<BinaryForm> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Scalar) -> BinaryForm {
        if c.is_zero() {
            return BinaryForm::zero(self.field);
        }
        BinaryForm {
            field: self.field,
            coeffs: self
                .coeffs
                .as_ref()
                .map(|cs| cs.iter().map(|a| a.mul(c)).collect()),
        }
    }

    /// Product of forms; degrees add.
    pub fn mul(&self, other: &BinaryForm) -> BinaryForm {
        let (Some(a), Some(b)) = (&self.coeffs, &other.coeffs) else {
            return BinaryForm::zero(self.field);
        };
        let mut out = vec![Scalar::zero(self.field); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] = out[i + j].add(&x.mul(y));
            }
        }
        BinaryForm::new(self.field, out).expect("product coefficients in-field")
    }

    pub fn pow(&self, e: usize) -> BinaryForm {
        let mut acc = BinaryForm::constant(Scalar::one(self.field));
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn evaluate(&self, x0: &Scalar, y0: &Scalar) -> Scalar {
        let Some(cs) = &self.coeffs else {
            return Scalar::zero(self.field);
        };
        let d = cs.len() - 1;
        let mut acc = Scalar::zero(self.field);
        for (i, c) in cs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = c
                .mul(&x0.pow((d - i) as u64))
                .mul(&y0.pow(i as u64));
            acc = acc.add(&term);
        }
        acc
    }

    /// Largest `k` with `y^k` dividing the form; 0 for the zero form.
    fn y_valuation(&self) -> usize {
        match &self.coeffs {
            None => 0,
            Some(cs) => cs.iter().position(|c| !c.is_zero()).unwrap_or(0),
        }
    }

    /// Substitutes `y = 1`, mapping `x^(d-i) y^i` to `t^(d-i)`. For a form
    /// not divisible by `y` this preserves the degree.
    pub fn dehomogenize(&self) -> KtPoly {
        let Some(cs) = &self.coeffs else {
            return KtPoly::zero(self.field);
        };
        let d = cs.len() - 1;
        let mut coeffs = vec![Scalar::zero(self.field); d + 1];
        for (i, c) in cs.iter().enumerate() {
            coeffs[d - i] = c.clone();
        }
        KtPoly::from_coeffs(self.field, coeffs).expect("coefficients in-field")
    }

    /// Homogenizes `p(t)` to a form of degree `deg`, mapping `t^k` to
    /// `x^k y^(deg-k)`. Fails if `p` has degree above `deg`.
    pub fn homogenize(p: &KtPoly, deg: usize) -> Result<BinaryForm> {
        if p.is_zero() {
            return Ok(BinaryForm::zero(p.field()));
        }
        let pd = p.degree().expect("nonzero polynomial");
        if pd > deg {
            return Err(Error::Degree(format!(
                "cannot homogenize degree-{pd} polynomial to degree {deg}"
            )));
        }
        let coeffs = (0..=deg).map(|i| p.coeff(deg - i)).collect();
        BinaryForm::new(p.field(), coeffs)
    }

    /// Gcd of two forms, normalized so the leading (highest power of `x`)
    /// coefficient is 1; `gcd(0, 0) = 0`.
    ///
    /// The visible powers of `y` are split off first; what remains
    /// dehomogenizes faithfully, so the polynomial gcd lifts back.
    pub fn gcd(&self, other: &BinaryForm) -> Result<BinaryForm> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field, other.field));
        }
        match (&self.coeffs, &other.coeffs) {
            (None, None) => Ok(BinaryForm::zero(self.field)),
            (None, Some(_)) => Ok(other.normalize()),
            (Some(_), None) => Ok(self.normalize()),
            (Some(_), Some(_)) => {
                let (ka, kb) = (self.y_valuation(), other.y_valuation());
                let a = self.strip_y(ka);
                let b = other.strip_y(kb);
                let g = a.dehomogenize().gcd(&b.dehomogenize());
                let gd = g.degree().expect("gcd of nonzero forms is nonzero");
                let core = BinaryForm::homogenize(&g, gd)?;
                let y = BinaryForm::from_i64_coeffs(self.field, &[0, 1]);
                Ok(core.mul(&y.pow(ka.min(kb))).normalize())
            }
        }
    }

    /// Divides out `y^k`; the caller guarantees divisibility.
    fn strip_y(&self, k: usize) -> BinaryForm {
        let Some(cs) = &self.coeffs else {
            return self.clone();
        };
        BinaryForm::new(self.field, cs[k..].to_vec()).expect("coefficients in-field")
    }

    /// Scales so the first nonzero coefficient is 1.
    pub fn normalize(&self) -> BinaryForm {
        let Some(cs) = &self.coeffs else {
            return self.clone();
        };
        let first = cs
            .iter()
            .find(|c| !c.is_zero())
            .expect("nonzero form has a nonzero coefficient");
        self.scale(&first.inv().expect("nonzero coefficient"))
    }

    pub fn divides(&self, other: &BinaryForm) -> bool {
        match (&self.coeffs, &other.coeffs) {
            (None, _) => other.is_zero(),
            (_, None) => true,
            (Some(_), Some(_)) => {
                let (ka, kb) = (self.y_valuation(), other.y_valuation());
                if ka > kb {
                    return false;
                }
                self.strip_y(ka)
                    .dehomogenize()
                    .divides(&other.strip_y(kb).dehomogenize())
            }
        }
    }

    pub fn from_json(field: FieldKind, v: &serde_json::Value) -> Result<BinaryForm> {
        let arr = v
            .as_array()
            .ok_or_else(|| Error::Invalid(format!("expected coefficient array, found {v}")))?;
        let coeffs = arr
            .iter()
            .map(|c| Scalar::from_json(field, c))
            .collect::<Result<Vec<_>>>()?;
        BinaryForm::new(field, coeffs)
    }

    /// The zero form serializes as `[]`; degree information for zero entries
    /// must come from context.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(self.coeffs().iter().map(Scalar::to_json).collect())
    }
}

impl fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let Some(cs) = &self.coeffs else {
            return write!(f, "0");
        };
        let d = cs.len() - 1;
        let mut first = true;
        for (i, c) in cs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let (xe, ye) = (d - i, i);
            if xe == 0 && ye == 0 {
                write!(f, "{c}")?;
                continue;
            }
            if !c.is_one() {
                write!(f, "{c}*")?;
            }
            match (xe, ye) {
                (0, 1) => write!(f, "y")?,
                (0, e) => write!(f, "y^{e}")?,
                (1, 0) => write!(f, "x")?,
                (e, 0) => write!(f, "x^{e}")?,
                (1, 1) => write!(f, "x*y")?,
                (1, e) => write!(f, "x*y^{e}")?,
                (e, 1) => write!(f, "x^{e}*y")?,
                (a, b) => write!(f, "x^{a}*y^{b}")?,
            }
        }
        Ok(())
    }
}

/// Sparse multivariate polynomial keyed by exponent vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPoly {
    field: FieldKind,
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Scalar>,
}

impl MultiPoly {
    pub fn zero(field: FieldKind, nvars: usize) -> Self {
        MultiPoly { field, nvars, terms: BTreeMap::new() }
    }

    pub fn field(&self) -> FieldKind {
        self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Scalar)> {
        self.terms.iter()
    }

    /// Adds `c * x^exps` into the polynomial, dropping cancelled terms.
    pub fn add_term(&mut self, exps: Vec<u32>, c: Scalar) -> Result<()> {
        if exps.len() != self.nvars {
            return Err(Error::Shape(format!(
                "exponent vector of length {} in {} variables",
                exps.len(),
                self.nvars
            )));
        }
        if c.field() != self.field {
            return Err(Error::FieldMismatch(self.field, c.field()));
        }
        if c.is_zero() {
            return Ok(());
        }
        let entry = self.terms.entry(exps);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let sum = o.get().add(&c);
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
        Ok(())
    }

    /// Sum of all exponents if every term agrees; the zero polynomial is
    /// homogeneous of any degree and reports `None`.
    pub fn homogeneous_degree(&self) -> Result<Option<usize>> {
        let mut deg = None;
        for exps in self.terms.keys() {
            let d: u32 = exps.iter().sum();
            match deg {
                None => deg = Some(d),
                Some(e) if e == d => {}
                Some(e) => {
                    return Err(Error::Inhomogeneous(format!(
                        "terms of degree {e} and {d}"
                    )))
                }
            }
        }
        Ok(deg.map(|d| d as usize))
    }

    /// Formal partial derivative in variable `i`.
    pub fn partial(&self, i: usize) -> Result<MultiPoly> {
        if i >= self.nvars {
            return Err(Error::Shape(format!(
                "variable index {i} out of range for {} variables",
                self.nvars
            )));
        }
        let mut out = MultiPoly::zero(self.field, self.nvars);
        for (exps, c) in &self.terms {
            if exps[i] == 0 {
                continue;
            }
            let mut e = exps.clone();
            e[i] -= 1;
            let factor = Scalar::from_i64(self.field, exps[i] as i64);
            out.add_term(e, c.mul(&factor))?;
        }
        Ok(out)
    }

    pub fn mul(&self, other: &MultiPoly) -> Result<MultiPoly> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field, other.field));
        }
        if self.nvars != other.nvars {
            return Err(Error::Shape("variable count mismatch".into()));
        }
        let mut out = MultiPoly::zero(self.field, self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let exps = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(exps, ca.mul(cb))?;
            }
        }
        Ok(out)
    }

    pub fn evaluate(&self, point: &[Scalar]) -> Result<Scalar> {
        if point.len() != self.nvars {
            return Err(Error::Shape("evaluation point has wrong arity".into()));
        }
        let mut acc = Scalar::zero(self.field);
        for (exps, c) in &self.terms {
            let mut term = c.clone();
            for (e, v) in exps.iter().zip(point) {
                term = term.mul(&v.pow(*e as u64));
            }
            acc = acc.add(&term);
        }
        Ok(acc)
    }

    /// Substitutes binary forms for the variables. Every nonzero `g[i]` must
    /// have degree `d`; a polynomial homogeneous of degree `e` then lands in
    /// degree `d * e` (or vanishes).
    pub fn substitute(&self, g: &[BinaryForm], d: usize) -> Result<BinaryForm> {
        if g.len() != self.nvars {
            return Err(Error::Shape(format!(
                "{} substitution forms for {} variables",
                g.len(),
                self.nvars
            )));
        }
        for gi in g {
            if gi.field() != self.field {
                return Err(Error::FieldMismatch(self.field, gi.field()));
            }
            if let Some(gd) = gi.degree() {
                if gd != d {
                    return Err(Error::Degree(format!(
                        "substitution form of degree {gd}, expected {d}"
                    )));
                }
            }
        }
        let e = self
            .homogeneous_degree()?
            .unwrap_or(0);
        let mut acc = BinaryForm::zero(self.field);
        for (exps, c) in &self.terms {
            let mut term = BinaryForm::constant(c.clone());
            for (gi, &ei) in g.iter().zip(exps) {
                if ei == 0 {
                    continue;
                }
                term = term.mul(&gi.pow(ei as usize));
            }
            if term.is_zero() {
                continue;
            }
            // pad the constant-degree bookkeeping: a nonzero product of
            // degree-d forms against exponent sum e has degree d*e
            let want = d * e;
            let got = term.degree().expect("nonzero term");
            debug_assert_eq!(got, want, "substitution degree drifted");
            acc = acc.add(&term)?;
        }
        Ok(acc)
    }

    pub fn from_json(field: FieldKind, v: &serde_json::Value) -> Result<MultiPoly> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Invalid("polynomial must be an object".into()))?;
        let nvars = obj
            .get("nvars")
            .and_then(|n| n.as_u64())
            .ok_or_else(|| Error::Invalid("polynomial needs integer `nvars`".into()))?
            as usize;
        let mut poly = MultiPoly::zero(field, nvars);
        let terms = obj
            .get("terms")
            .and_then(|t| t.as_array())
            .ok_or_else(|| Error::Invalid("polynomial needs `terms` array".into()))?;
        for t in terms {
            let exps = t
                .get("exps")
                .and_then(|e| e.as_array())
                .ok_or_else(|| Error::Invalid("term needs `exps` array".into()))?
                .iter()
                .map(|e| {
                    e.as_u64()
                        .map(|n| n as u32)
                        .ok_or_else(|| Error::Invalid("exponents must be nonnegative".into()))
                })
                .collect::<Result<Vec<_>>>()?;
            let coeff = t
                .get("coeff")
                .ok_or_else(|| Error::Invalid("term needs `coeff`".into()))?;
            poly.add_term(exps, Scalar::from_json(field, coeff)?)?;
        }
        Ok(poly)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "nvars": self.nvars,
            "terms": self
                .terms
                .iter()
                .map(|(e, c)| serde_json::json!({ "exps": e, "coeff": c.to_json() }))
                .collect::<Vec<_>>(),
        })
    }
}
