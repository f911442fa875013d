//! Homogeneous polynomials over `F_p`.
//!
//! [`MultiPoly`] is a sparse form of fixed degree in `n + 1` variables (the
//! hypersurface equation and its partials). [`BinaryForm`] is a dense form in
//! `(s, t)`; index `k` holds the coefficient of `s^(deg-k) t^k`. [`MapParam`]
//! is the coefficient array of a parametrized curve `P^1 -> P^n`, one binary
//! form of degree `e` per target coordinate.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::linalg::Matrix;

/// Exponent vector of a monomial.
pub type Exponents = Vec<u32>;

/// All exponent vectors of total degree `degree` in `n_vars` variables,
/// lexicographically descending (`x0^d` first, `x_n^d` last).
pub fn monomials(n_vars: usize, degree: u32) -> Vec<Exponents> {
    fn rec(rest: usize, left: u32, cur: &mut Exponents, out: &mut Vec<Exponents>) {
        if rest == 1 {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for k in (0..=left).rev() {
            cur.push(k);
            rec(rest - 1, left - k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n_vars == 0 {
        return out;
    }
    rec(n_vars, degree, &mut Vec::with_capacity(n_vars), &mut out);
    out
}

/// A homogeneous polynomial of fixed degree, stored sparsely.
///
/// Zero coefficients are never stored, so `terms` iterates exactly the support.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiPoly {
    field: PrimeField,
    n_vars: usize,
    degree: u32,
    terms: BTreeMap<Exponents, u64>,
}

impl MultiPoly {
    pub fn zero(field: PrimeField, n_vars: usize, degree: u32) -> Self {
        Self {
            field,
            n_vars,
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// Builds a form from `(exponents, coefficient)` pairs; repeated
    /// exponents accumulate.
    pub fn from_terms<I>(field: PrimeField, n_vars: usize, degree: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Exponents, i64)>,
    {
        let mut poly = Self::zero(field, n_vars, degree);
        for (exps, c) in terms {
            if exps.len() != n_vars {
                return Err(Error::Malformed(format!(
                    "exponent vector {exps:?} has {} entries, expected {n_vars}",
                    exps.len()
                )));
            }
            if exps.iter().sum::<u32>() != degree {
                return Err(Error::Malformed(format!(
                    "monomial {exps:?} is not of degree {degree}"
                )));
            }
            poly.add_term(exps, field.from_i64(c));
        }
        Ok(poly)
    }

    /// Builds a form from a dense coefficient list in [`monomials`] order.
    pub fn from_dense(field: PrimeField, n_vars: usize, degree: u32, coeffs: &[u64]) -> Result<Self> {
        let monos = monomials(n_vars, degree);
        if coeffs.len() != monos.len() {
            return Err(Error::Malformed(format!(
                "{} coefficients for {} monomials",
                coeffs.len(),
                monos.len()
            )));
        }
        let mut poly = Self::zero(field, n_vars, degree);
        for (m, &c) in monos.into_iter().zip(coeffs) {
            poly.add_term(m, c % field.modulus());
        }
        Ok(poly)
    }

    /// A form with every one of the `C(n+d, d)` coefficients drawn uniformly
    /// from `F_p`.
    pub fn random_homogeneous(n: usize, d: u32, field: PrimeField, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self::random_with(n, d, field, &mut rng)
    }

    pub fn random_with<R: Rng + ?Sized>(n: usize, d: u32, field: PrimeField, rng: &mut R) -> Self {
        let mut poly = Self::zero(field, n + 1, d);
        for m in monomials(n + 1, d) {
            let c = rng.gen_range(0..field.modulus());
            poly.add_term(m, c);
        }
        poly
    }

    fn add_term(&mut self, exps: Exponents, c: u64) {
        if c == 0 {
            return;
        }
        let f = self.field;
        match self.terms.entry(exps) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = f.add(*o.get(), c);
                if sum == 0 {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, u64)> {
        self.terms.iter().map(|(e, &c)| (e, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exps: &[u32]) -> u64 {
        self.terms.get(exps).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Dense coefficients in [`monomials`] order.
    pub fn to_dense(&self) -> Vec<u64> {
        monomials(self.n_vars, self.degree)
            .iter()
            .map(|m| self.coeff(m))
            .collect()
    }

    fn check_compatible(&self, other: &MultiPoly) -> Result<()> {
        if self.field != other.field || self.n_vars != other.n_vars || self.degree != other.degree {
            return Err(Error::Malformed(
                "forms differ in field, variable count or degree".into(),
            ));
        }
        Ok(())
    }

    pub fn add(&self, other: &MultiPoly) -> Result<MultiPoly> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (e, c) in other.terms() {
            out.add_term(e.clone(), c);
        }
        Ok(out)
    }

    pub fn scale(&self, c: u64) -> MultiPoly {
        let f = self.field;
        let mut out = Self::zero(f, self.n_vars, self.degree);
        for (e, v) in self.terms() {
            out.add_term(e.clone(), f.mul(v, c % f.modulus()));
        }
        out
    }

    pub fn mul(&self, other: &MultiPoly) -> Result<MultiPoly> {
        if self.field != other.field || self.n_vars != other.n_vars {
            return Err(Error::Malformed("product of incompatible forms".into()));
        }
        let f = self.field;
        let mut out = Self::zero(f, self.n_vars, self.degree + other.degree);
        for (ea, ca) in self.terms() {
            for (eb, cb) in other.terms() {
                let e: Exponents = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, f.mul(ca, cb));
            }
        }
        Ok(out)
    }

    /// `dF/dx_i`. A degree-0 input yields the zero form of degree 0.
    pub fn partial_derivative(&self, i: usize) -> Result<MultiPoly> {
        if i >= self.n_vars {
            return Err(Error::Malformed(format!(
                "variable index {i} out of range for {} variables",
                self.n_vars
            )));
        }
        let f = self.field;
        let mut out = Self::zero(f, self.n_vars, self.degree.saturating_sub(1));
        if self.degree == 0 {
            return Ok(out);
        }
        for (e, c) in self.terms() {
            if e[i] == 0 {
                continue;
            }
            let mut de = e.clone();
            de[i] -= 1;
            out.add_term(de, f.mul(c, u64::from(e[i]) % f.modulus()));
        }
        Ok(out)
    }

    pub fn gradient(&self) -> Result<Vec<MultiPoly>> {
        (0..self.n_vars).map(|i| self.partial_derivative(i)).collect()
    }

    pub fn evaluate(&self, point: &[u64]) -> Result<u64> {
        if point.len() != self.n_vars {
            return Err(Error::Malformed(format!(
                "point has {} coordinates, form has {} variables",
                point.len(),
                self.n_vars
            )));
        }
        let f = self.field;
        Ok(self.terms().fold(0, |acc, (e, c)| {
            let m = e
                .iter()
                .zip(point)
                .fold(c, |m, (&k, &x)| f.mul(m, f.pow(x, u64::from(k))));
            f.add(acc, m)
        }))
    }

    /// `F(f_0, ..., f_n)` as a binary form of degree `d*e`, computed by
    /// multiplying dense powers of the coordinate forms.
    pub fn compose_with_map(&self, map: &MapParam) -> Result<BinaryForm> {
        if map.field() != self.field {
            return Err(Error::Malformed("form and map use different primes".into()));
        }
        if map.n() + 1 != self.n_vars {
            return Err(Error::Malformed(format!(
                "form in {} variables composed with a map into P^{}",
                self.n_vars,
                map.n()
            )));
        }
        let powers = map.power_table(self.degree);
        let f = self.field;
        let mut out = BinaryForm::zero(f, self.degree as usize * map.e());
        for (exps, c) in self.terms() {
            let term = monomial_of_powers(&powers, exps, f);
            out.add_scaled(&term, c);
        }
        Ok(out)
    }

    /// `G(x) = F(B x)` where row `i` of `B` is the linear form substituted
    /// for `x_i`.
    pub fn linear_substitution(&self, b: &Matrix) -> Result<MultiPoly> {
        if b.rows() != self.n_vars || b.cols() != self.n_vars || b.field() != self.field {
            return Err(Error::Malformed("substitution matrix has the wrong shape".into()));
        }
        let f = self.field;
        let lin: Vec<MultiPoly> = (0..self.n_vars)
            .map(|i| {
                let terms = (0..self.n_vars).map(|j| {
                    let mut e = vec![0; self.n_vars];
                    e[j] = 1;
                    (e, b.get(i, j) as i64)
                });
                MultiPoly::from_terms(f, self.n_vars, 1, terms)
            })
            .collect::<Result<_>>()?;
        let one = MultiPoly::from_terms(f, self.n_vars, 0, [(vec![0; self.n_vars], 1)])?;
        let pow_cache: Vec<Vec<MultiPoly>> = lin
            .iter()
            .map(|l| {
                let mut v = vec![one.clone()];
                for _ in 0..self.degree {
                    let next = v.last().unwrap().mul(l).expect("compatible");
                    v.push(next);
                }
                v
            })
            .collect();
        let mut out = MultiPoly::zero(f, self.n_vars, self.degree);
        for (e, c) in self.terms() {
            let mut term = one.clone();
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    term = term.mul(&pow_cache[i][k as usize])?;
                }
            }
            for (te, tc) in term.terms() {
                out.add_term(te.clone(), f.mul(tc, c));
            }
        }
        Ok(out)
    }

    /// Parses a form such as `x0*x2 - x1^2` or `3*x0^2 + x1*x3`. Integer
    /// coefficients are reduced mod p; every term must have the same degree.
    pub fn parse(text: &str, field: PrimeField, n_vars: usize) -> Result<MultiPoly> {
        let bad = |msg: String| Error::Malformed(format!("cannot parse form {text:?}: {msg}"));
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(bad("empty".into()));
        }
        let mut terms: Vec<(Exponents, i64)> = Vec::new();
        let mut degree: Option<u32> = None;
        let mut rest = compact.as_str();
        while !rest.is_empty() {
            let (sign, body_start) = match rest.as_bytes()[0] {
                b'+' => (1i64, 1),
                b'-' => (-1i64, 1),
                _ => (1i64, 0),
            };
            let body_len = rest[body_start..]
                .find(['+', '-'])
                .unwrap_or(rest.len() - body_start);
            let body = &rest[body_start..body_start + body_len];
            rest = &rest[body_start + body_len..];
            if body.is_empty() {
                return Err(bad("dangling sign".into()));
            }
            let mut coeff = sign;
            let mut exps = vec![0u32; n_vars];
            for factor in body.split('*') {
                if let Some(var) = factor.strip_prefix('x') {
                    let (idx, pow) = match var.split_once('^') {
                        Some((i, k)) => (i, k.parse::<u32>().map_err(|e| bad(e.to_string()))?),
                        None => (var, 1),
                    };
                    let idx: usize = idx.parse().map_err(|_| bad(format!("bad variable {factor:?}")))?;
                    if idx >= n_vars {
                        return Err(bad(format!("x{idx} out of range for {n_vars} variables")));
                    }
                    exps[idx] += pow;
                } else {
                    let c: i64 = factor
                        .parse()
                        .map_err(|_| bad(format!("bad factor {factor:?}")))?;
                    coeff = coeff
                        .checked_mul(c)
                        .ok_or_else(|| bad("coefficient overflow".into()))?;
                }
            }
            let deg: u32 = exps.iter().sum();
            match degree {
                None => degree = Some(deg),
                Some(d) if d != deg => return Err(bad("form is not homogeneous".into())),
                _ => {}
            }
            terms.push((exps, coeff));
        }
        MultiPoly::from_terms(field, n_vars, degree.unwrap_or(0), terms)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { format!("x{i}") } else { format!("x{i}^{k}") })
                .collect();
            match (*c, vars.is_empty()) {
                (c, true) => write!(f, "{c}")?,
                (1, false) => write!(f, "{}", vars.join("*"))?,
                (c, false) => write!(f, "{c}*{}", vars.join("*"))?,
            }
        }
        Ok(())
    }
}

fn monomial_of_powers(powers: &[Vec<BinaryForm>], exps: &[u32], field: PrimeField) -> BinaryForm {
    let mut acc: Option<BinaryForm> = None;
    for (i, &k) in exps.iter().enumerate() {
        if k == 0 {
            continue;
        }
        let p = &powers[i][k as usize];
        acc = Some(match acc {
            None => p.clone(),
            Some(a) => a.mul(p),
        });
    }
    // degree-0 form
    acc.unwrap_or_else(|| BinaryForm::constant(field, 1))
}

/// A dense binary form; `coeffs[k]` multiplies `s^(degree-k) t^k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryForm {
    field: PrimeField,
    coeffs: Vec<u64>,
}

impl BinaryForm {
    pub fn zero(field: PrimeField, degree: usize) -> Self {
        Self {
            field,
            coeffs: vec![0; degree + 1],
        }
    }

    pub fn constant(field: PrimeField, c: u64) -> Self {
        Self {
            field,
            coeffs: vec![c % field.modulus()],
        }
    }

    pub fn from_coeffs(field: PrimeField, coeffs: Vec<u64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Malformed("binary form needs at least one coefficient".into()));
        }
        let coeffs = coeffs.into_iter().map(|c| c % field.modulus()).collect();
        Ok(Self { field, coeffs })
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    #[inline]
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Dense product (coefficient convolution).
    pub fn mul(&self, other: &BinaryForm) -> BinaryForm {
        let f = self.field;
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = f.mul_add(out[i + j], a, b);
            }
        }
        BinaryForm { field: f, coeffs: out }
    }

    /// `self += c * other`; degrees must match.
    pub fn add_scaled(&mut self, other: &BinaryForm, c: u64) {
        assert_eq!(self.coeffs.len(), other.coeffs.len(), "binary form degree mismatch");
        let f = self.field;
        for (a, &b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a = f.mul_add(*a, b, c);
        }
    }

    pub fn add(&self, other: &BinaryForm) -> BinaryForm {
        let mut out = self.clone();
        out.add_scaled(other, 1);
        out
    }

    pub fn pow(&self, k: u32) -> BinaryForm {
        let mut acc = BinaryForm::constant(self.field, 1);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Value at the point `(s, t)`.
    pub fn evaluate(&self, s: u64, t: u64) -> u64 {
        let f = self.field;
        let deg = self.degree() as u64;
        self.coeffs.iter().enumerate().fold(0, |acc, (k, &c)| {
            let m = f.mul(f.pow(s, deg - k as u64), f.pow(t, k as u64));
            f.mul_add(acc, c, m)
        })
    }

    /// Value and `t`-derivative in the chart `s = 1`.
    pub fn evaluate_affine(&self, t: u64) -> (u64, u64) {
        let f = self.field;
        let mut val = 0;
        let mut der = 0;
        // Horner on value and derivative together.
        for &c in self.coeffs.iter().rev() {
            der = f.mul_add(val, der, t);
            val = f.mul_add(c, val, t);
        }
        (val, der)
    }

    /// The form `B(a s + b t, c s + d t)` for `gamma = [a, b, c, d]`.
    pub fn substitute(&self, gamma: [u64; 4]) -> BinaryForm {
        let f = self.field;
        let [a, b, c, d] = gamma;
        let s_img = BinaryForm { field: f, coeffs: vec![a % f.modulus(), b % f.modulus()] };
        let t_img = BinaryForm { field: f, coeffs: vec![c % f.modulus(), d % f.modulus()] };
        let deg = self.degree();
        let mut out = BinaryForm::zero(f, deg);
        for (k, &coef) in self.coeffs.iter().enumerate() {
            if coef == 0 {
                continue;
            }
            let term = s_img.pow((deg - k) as u32).mul(&t_img.pow(k as u32));
            out.add_scaled(&term, coef);
        }
        out
    }

    /// Univariate polynomial in `t` after setting `s = 1`, trailing zeros trimmed.
    fn dehomogenize(&self) -> Vec<u64> {
        trim(self.coeffs.clone())
    }
}

fn trim(mut v: Vec<u64>) -> Vec<u64> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

/// Remainder of `a` modulo `b` for low-to-high coefficient vectors; `b` is trimmed and nonzero.
fn poly_rem(field: PrimeField, mut a: Vec<u64>, b: &[u64]) -> Vec<u64> {
    let lead_inv = field.inv(*b.last().expect("nonzero divisor")).expect("trimmed lead");
    while a.len() >= b.len() {
        let top = *a.last().unwrap();
        if top != 0 {
            let q = field.mul(top, lead_inv);
            let shift = a.len() - b.len();
            for (i, &bc) in b.iter().enumerate() {
                a[shift + i] = field.sub(a[shift + i], field.mul(q, bc));
            }
        }
        a.pop();
        a = trim(a);
    }
    a
}

fn poly_gcd(field: PrimeField, a: Vec<u64>, b: Vec<u64>) -> Vec<u64> {
    let (mut a, mut b) = (trim(a), trim(b));
    while !b.is_empty() {
        let r = poly_rem(field, a, &b);
        a = b;
        b = r;
    }
    a
}

/// Coefficient array of a degree-`e` map `P^1 -> P^n`.
///
/// Row `i` holds the binary form `f_i`; unknowns are flattened row-major as
/// index `i * (e + 1) + j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapParam {
    field: PrimeField,
    n: usize,
    e: usize,
    a: Vec<Vec<u64>>,
}

impl MapParam {
    pub fn new(field: PrimeField, rows: Vec<Vec<u64>>) -> Result<Self> {
        if rows.len() < 2 {
            return Err(Error::Malformed("a map into P^n needs at least two coordinates".into()));
        }
        let width = rows[0].len();
        if width < 2 || rows.iter().any(|r| r.len() != width) {
            return Err(Error::Malformed(
                "every coordinate needs the same number (>= 2) of coefficients".into(),
            ));
        }
        let a: Vec<Vec<u64>> = rows
            .into_iter()
            .map(|r| r.into_iter().map(|c| c % field.modulus()).collect())
            .collect();
        if a.iter().flatten().all(|&c| c == 0) {
            return Err(Error::Malformed("map coefficients are all zero".into()));
        }
        Ok(Self {
            field,
            n: a.len() - 1,
            e: width - 1,
            a,
        })
    }

    /// Uniform coefficients, resampled until nonzero. May be degenerate.
    pub fn random_with<R: Rng + ?Sized>(n: usize, e: usize, field: PrimeField, rng: &mut R) -> Self {
        loop {
            let rows = (0..=n)
                .map(|_| (0..=e).map(|_| rng.gen_range(0..field.modulus())).collect())
                .collect();
            if let Ok(m) = Self::new(field, rows) {
                return m;
            }
        }
    }

    /// Uniform coefficients, resampled until the coordinate forms have no common factor.
    pub fn random_nondegenerate<R: Rng + ?Sized>(
        n: usize,
        e: usize,
        field: PrimeField,
        rng: &mut R,
    ) -> Self {
        loop {
            let m = Self::random_with(n, e, field, rng);
            if !m.is_degenerate() {
                return m;
            }
        }
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn e(&self) -> usize {
        self.e
    }

    pub fn rows(&self) -> &[Vec<u64>] {
        &self.a
    }

    pub fn num_unknowns(&self) -> usize {
        (self.n + 1) * (self.e + 1)
    }

    pub fn flat(&self) -> Vec<u64> {
        self.a.iter().flatten().copied().collect()
    }

    pub fn from_flat(field: PrimeField, n: usize, e: usize, flat: &[u64]) -> Result<Self> {
        if flat.len() != (n + 1) * (e + 1) {
            return Err(Error::Malformed("flat coefficient vector has the wrong length".into()));
        }
        Self::new(field, flat.chunks(e + 1).map(<[u64]>::to_vec).collect())
    }

    pub fn forms(&self) -> Vec<BinaryForm> {
        self.a
            .iter()
            .map(|r| BinaryForm { field: self.field, coeffs: r.clone() })
            .collect()
    }

    /// `powers[i][k] = f_i^k` for `k <= max_power`.
    pub(crate) fn power_table(&self, max_power: u32) -> Vec<Vec<BinaryForm>> {
        self.forms()
            .into_iter()
            .map(|fi| {
                let mut v = vec![BinaryForm::constant(self.field, 1)];
                for _ in 0..max_power {
                    let next = v.last().unwrap().mul(&fi);
                    v.push(next);
                }
                v
            })
            .collect()
    }

    /// True when the coordinate forms share a nonconstant factor (including
    /// a common factor of `s`).
    pub fn is_degenerate(&self) -> bool {
        let forms = self.forms();
        let nonzero: Vec<&BinaryForm> = forms.iter().filter(|f| !f.is_zero()).collect();
        if nonzero.is_empty() {
            return true;
        }
        let s_mult = nonzero
            .iter()
            .map(|f| f.degree() - (f.dehomogenize().len() - 1))
            .min()
            .unwrap();
        if s_mult > 0 {
            return true;
        }
        let g = nonzero
            .iter()
            .fold(Vec::new(), |g, f| poly_gcd(self.field, g, f.dehomogenize()));
        g.len() > 1
    }

    pub fn ensure_nondegenerate(&self) -> Result<()> {
        if self.is_degenerate() {
            Err(Error::DegenerateMap)
        } else {
            Ok(())
        }
    }

    /// The point `f(1, t)` as a vector in `F_p^(n+1)`.
    pub fn point_at(&self, t: u64) -> Vec<u64> {
        self.forms().iter().map(|f| f.evaluate_affine(t).0).collect()
    }

    /// Precomposition with `(s, t) -> (a s + b t, c s + d t)`.
    pub fn reparametrize(&self, gamma: [u64; 4]) -> MapParam {
        let rows = self.forms().iter().map(|f| f.substitute(gamma).coeffs).collect();
        MapParam { a: rows, ..self.clone() }
    }

    pub fn scale(&self, lambda: u64) -> MapParam {
        let f = self.field;
        let rows = self
            .a
            .iter()
            .map(|r| r.iter().map(|&c| f.mul(c, lambda % f.modulus())).collect())
            .collect();
        MapParam { a: rows, ..self.clone() }
    }

    /// The map `A . f` for an `(n+1) x (n+1)` matrix `A`.
    pub fn apply_linear(&self, m: &Matrix) -> Result<MapParam> {
        if m.rows() != self.n + 1 || m.cols() != self.n + 1 || m.field() != self.field {
            return Err(Error::Malformed("coordinate change has the wrong shape".into()));
        }
        let f = self.field;
        let rows = (0..=self.n)
            .map(|i| {
                (0..=self.e)
                    .map(|j| (0..=self.n).fold(0, |acc, k| f.mul_add(acc, m.get(i, k), self.a[k][j])))
                    .collect()
            })
            .collect();
        MapParam::new(f, rows)
    }
}
