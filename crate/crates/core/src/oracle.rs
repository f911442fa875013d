//! Brute-force checks over small prime fields.
//!
//! Nothing here shares code with the closed-form Jacobian or with the dense
//! composition in [`crate::poly`] beyond field arithmetic: compositions are
//! expanded factor by factor, derivatives come from dual numbers, and the
//! second enumeration route tests vanishing by evaluation on `P^1(F_q)`.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::curvespace::{jacobian_matrix, IncidencePoint};
use crate::error::{Error, Result};
use crate::field::PrimeField;
use crate::poly::{BinaryForm, MapParam, MultiPoly};
use crate::seed::rng;

/// Default cap on `q^((n+1)(e+1))`.
pub const DEFAULT_BUDGET: u64 = 1 << 26;

/// Number of coefficient arrays a full enumeration visits.
pub fn required_evaluations(n_vars: usize, e: usize, q: u64) -> u128 {
    let exp = (n_vars * (e + 1)) as u32;
    u128::from(q).checked_pow(exp).unwrap_or(u128::MAX)
}

fn check_budget(form: &MultiPoly, e: usize, budget: u64) -> Result<()> {
    let required = required_evaluations(form.n_vars(), e, form.field().modulus());
    if required > u128::from(budget) {
        return Err(Error::BudgetExceeded { required, budget });
    }
    Ok(())
}

/// All vectors of `F_q^len` in mixed-radix order.
fn all_vectors(q: u64, len: usize) -> impl Iterator<Item = Vec<u64>> {
    let total = q.pow(len as u32);
    (0..total).map(move |mut idx| {
        let mut v = vec![0u64; len];
        for slot in v.iter_mut().rev() {
            *slot = idx % q;
            idx /= q;
        }
        v
    })
}

fn rows_from_columns(columns: &[&[u64]], n_vars: usize) -> Vec<Vec<u64>> {
    (0..n_vars)
        .map(|i| columns.iter().map(|c| c[i]).collect())
        .collect()
}

/// Counts coefficient arrays `a in F_q^((n+1)(e+1))` with `F o f_a = 0`,
/// the zero array included.
///
/// The leading and trailing coefficients of `F o f` are `F` evaluated on the
/// first and last coefficient columns, so those columns range only over
/// zeros of `F`; the interior columns are enumerated in full.
pub fn enumerate_solutions(form: &MultiPoly, e: usize, budget: u64) -> Result<u64> {
    check_budget(form, e, budget)?;
    if e == 0 {
        return Err(Error::Malformed("curve degree must be at least 1".into()));
    }
    let field = form.field();
    let q = field.modulus();
    let n_vars = form.n_vars();
    let zeros: Vec<Vec<u64>> = all_vectors(q, n_vars)
        .filter(|v| form.evaluate(v).map(|x| x == 0).unwrap_or(false))
        .collect();
    let interior_len = n_vars * (e - 1);
    let count = zeros
        .par_iter()
        .map(|first| {
            let mut local = 0u64;
            for last in &zeros {
                for interior in all_vectors(q, interior_len) {
                    let mut cols: Vec<&[u64]> = Vec::with_capacity(e + 1);
                    cols.push(first);
                    cols.extend(interior.chunks(n_vars));
                    cols.push(last);
                    let rows = rows_from_columns(&cols, n_vars);
                    let vanishes = match MapParam::new(field, rows) {
                        Ok(map) => form
                            .compose_with_map(&map)
                            .map(|b| b.is_zero())
                            .unwrap_or(false),
                        // all-zero array
                        Err(_) => true,
                    };
                    if vanishes {
                        local += 1;
                    }
                }
            }
            local
        })
        .sum();
    Ok(count)
}

/// Independent count by nested loops over every coefficient array, testing
/// `F(f(s, t)) = 0` at all `q + 1` points of `P^1(F_q)`. Valid when
/// `q + 1 > de`, so a vanishing degree-`de` form must be zero.
pub fn enumerate_solutions_direct(form: &MultiPoly, e: usize, budget: u64) -> Result<u64> {
    check_budget(form, e, budget)?;
    let field = form.field();
    let q = field.modulus();
    let de = form.degree() as u64 * e as u64;
    if q < de {
        return Err(Error::Malformed(format!(
            "evaluation test needs q + 1 > de (q = {q}, de = {de})"
        )));
    }
    let n_vars = form.n_vars();
    let mut points: Vec<(u64, u64)> = (0..q).map(|t| (1, t)).collect();
    points.push((0, 1));
    // monomial values s^(e-j) t^j at every point
    let basis: Vec<Vec<u64>> = points
        .iter()
        .map(|&(s, t)| {
            (0..=e as u64)
                .map(|j| field.mul(field.pow(s, e as u64 - j), field.pow(t, j)))
                .collect()
        })
        .collect();
    let width = n_vars * (e + 1);
    let total = q.pow(width as u32);
    let count = (0..total)
        .into_par_iter()
        .filter(|&idx| {
            let mut digits = vec![0u64; width];
            let mut rest = idx;
            for slot in digits.iter_mut().rev() {
                *slot = rest % q;
                rest /= q;
            }
            basis.iter().all(|vals| {
                let image: Vec<u64> = digits
                    .chunks(e + 1)
                    .map(|row| row.iter().zip(vals).fold(0, |acc, (&a, &v)| field.mul_add(acc, a, v)))
                    .collect();
                form.evaluate(&image).map(|x| x == 0).unwrap_or(false)
            })
        })
        .count();
    Ok(count as u64)
}

/// How the oracle picks the hypersurface for each prime.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "value")]
pub enum FormSource {
    /// A fixed form, parsed once per prime with coefficients reduced mod q.
    Explicit(String),
    /// Uniformly random coefficients.
    Uniform,
    /// A random nondegenerate curve first, then a random form through it.
    ThroughCurve,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountEntry {
    pub prime: u64,
    pub count: u64,
    pub form: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountProfile {
    pub n: usize,
    pub d: u32,
    pub e: usize,
    pub entries: Vec<CountEntry>,
}

impl CountProfile {
    /// `(n+1)(e+1) - (ed+1)`, the dimension of the affine cone of maps at
    /// expected behavior.
    pub fn expected_cone_dim(&self) -> i64 {
        ((self.n + 1) * (self.e + 1)) as i64 - (self.e as i64 * i64::from(self.d) + 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DimensionEstimate {
    pub slope: f64,
    /// Some prime produced only the zero array.
    pub low_signal: bool,
}

/// Least-squares slope of `log(count)` against `log(q)`.
pub fn dimension_estimate(profile: &CountProfile) -> Result<DimensionEstimate> {
    let m = profile.entries.len();
    if m < 2 {
        return Err(Error::InsufficientPrimes(m));
    }
    let xs: Vec<f64> = profile.entries.iter().map(|c| (c.prime as f64).ln()).collect();
    let ys: Vec<f64> = profile.entries.iter().map(|c| (c.count.max(1) as f64).ln()).collect();
    let mx = xs.iter().sum::<f64>() / m as f64;
    let my = ys.iter().sum::<f64>() / m as f64;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        return Err(Error::Malformed("profile repeats a single prime".into()));
    }
    Ok(DimensionEstimate {
        slope: sxy / sxx,
        low_signal: profile.entries.iter().any(|c| c.count <= 1),
    })
}

/// Builds the form for one prime according to `source`.
pub fn form_for_prime(
    source: &FormSource,
    n: usize,
    d: u32,
    e: usize,
    q: u64,
    seed: u64,
) -> Result<MultiPoly> {
    let field = PrimeField::new(q)?;
    let mut rng = rng(seed);
    match source {
        FormSource::Explicit(text) => {
            let form = MultiPoly::parse(text, field, n + 1)?;
            if form.degree() != d {
                return Err(Error::Usage(format!(
                    "form {text:?} has degree {}, expected {d}",
                    form.degree()
                )));
            }
            Ok(form)
        }
        FormSource::Uniform => loop {
            let form = MultiPoly::random_with(n, d, field, &mut rng);
            if !form.is_zero() {
                return Ok(form);
            }
        },
        FormSource::ThroughCurve => {
            let map = MapParam::random_nondegenerate(n, e, field, &mut rng);
            crate::curvespace::random_form_through(&map, d, &mut rng)
        }
    }
}

/// Counts solutions for each prime. Fails before any enumeration if some
/// prime is over budget.
pub fn count_profile(
    source: &FormSource,
    n: usize,
    d: u32,
    e: usize,
    primes: &[u64],
    seed: u64,
    budget: u64,
) -> Result<CountProfile> {
    for &q in primes {
        let required = required_evaluations(n + 1, e, q);
        if required > u128::from(budget) {
            return Err(Error::BudgetExceeded { required, budget });
        }
    }
    let mut entries = Vec::with_capacity(primes.len());
    for &q in primes {
        let form = form_for_prime(source, n, d, e, q, crate::seed::derive_seed(seed, q))?;
        let count = enumerate_solutions(&form, e, budget)?;
        entries.push(CountEntry {
            prime: q,
            count,
            form: form.to_string(),
        });
    }
    Ok(CountProfile { n, d, e, entries })
}

/// Element `re + eps * ε` of `F_p[ε]/(ε^2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Dual {
    re: u64,
    eps: u64,
}

impl Dual {
    const ZERO: Dual = Dual { re: 0, eps: 0 };

    fn add(self, o: Dual, f: PrimeField) -> Dual {
        Dual {
            re: f.add(self.re, o.re),
            eps: f.add(self.eps, o.eps),
        }
    }

    fn mul(self, o: Dual, f: PrimeField) -> Dual {
        Dual {
            re: f.mul(self.re, o.re),
            eps: f.add(f.mul(self.re, o.eps), f.mul(self.eps, o.re)),
        }
    }
}

/// Binary form with dual-number coefficients, multiplied naively term by term.
fn dual_form_mul(a: &[Dual], b: &[Dual], f: PrimeField) -> Vec<Dual> {
    let mut out = vec![Dual::ZERO; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(x.mul(*y, f), f);
        }
    }
    out
}

/// `F(f + ε δ)` expanded monomial by monomial, one factor at a time.
fn expand_dual(form: &MultiPoly, forms: &[Vec<Dual>], e: usize) -> Vec<Dual> {
    let f = form.field();
    let deg = form.degree() as usize * e;
    let mut total = vec![Dual::ZERO; deg + 1];
    for (exps, c) in form.terms() {
        let mut acc = vec![Dual { re: c, eps: 0 }];
        for (i, &k) in exps.iter().enumerate() {
            for _ in 0..k {
                acc = dual_form_mul(&acc, &forms[i], f);
            }
        }
        for (slot, v) in total.iter_mut().zip(acc) {
            *slot = slot.add(v, f);
        }
    }
    total
}

/// Term-by-term expansion of `F(f_0, ..., f_n)`.
pub fn expand_composition(form: &MultiPoly, map: &MapParam) -> Result<BinaryForm> {
    if form.n_vars() != map.n() + 1 || form.field() != map.field() {
        return Err(Error::Malformed("form and map do not match".into()));
    }
    let forms: Vec<Vec<Dual>> = map
        .rows()
        .iter()
        .map(|r| r.iter().map(|&re| Dual { re, eps: 0 }).collect())
        .collect();
    let expanded = expand_dual(form, &forms, map.e());
    BinaryForm::from_coeffs(form.field(), expanded.into_iter().map(|d| d.re).collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JacobianCheck {
    pub trials: usize,
    pub agreed: usize,
    pub verdict: bool,
}

/// Compares the first-order term of `F(f + ε δ)` with `J δ` for random
/// directions `δ`, and confirms the constant term is zero.
pub fn symbolic_jacobian_check(pt: &IncidencePoint, trials: usize, seed: u64) -> Result<JacobianCheck> {
    let jac = jacobian_matrix(pt)?;
    let f = pt.field();
    let mut rng = rng(seed);
    let mut agreed = 0;
    for _ in 0..trials {
        let delta: Vec<u64> = (0..jac.cols()).map(|_| rng.gen_range(0..f.modulus())).collect();
        if direction_agrees(pt, &jac, &delta)? {
            agreed += 1;
        }
    }
    Ok(JacobianCheck {
        trials,
        agreed,
        verdict: agreed == trials,
    })
}

/// One direction of [`symbolic_jacobian_check`].
pub fn direction_agrees(pt: &IncidencePoint, jac: &crate::linalg::Matrix, delta: &[u64]) -> Result<bool> {
    let map = pt.map();
    let e = map.e();
    if delta.len() != map.num_unknowns() {
        return Err(Error::Malformed("direction has the wrong length".into()));
    }
    let forms: Vec<Vec<Dual>> = map
        .rows()
        .iter()
        .enumerate()
        .map(|(i, r)| {
            r.iter()
                .enumerate()
                .map(|(j, &re)| Dual { re, eps: delta[i * (e + 1) + j] })
                .collect()
        })
        .collect();
    let expanded = expand_dual(pt.form(), &forms, e);
    let linear = jac.mul_vec(delta)?;
    Ok(expanded.iter().all(|d| d.re == 0)
        && expanded.iter().map(|d| d.eps).eq(linear))
}
