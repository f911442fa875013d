//! Incidence systems for a rational curve lying on a hypersurface, and local
//! dimension certificates computed from exact Jacobian ranks.
//!
//! A degree-`e` map `f: P^1 -> P^n` lies on `V(F)` exactly when the `ed + 1`
//! coefficients of `F o f` vanish. Linear in the coefficients of `F`, this is
//! the [`containment_matrix`]; linearized in the coefficients of `f` at a
//! point of the incidence variety, it is the [`jacobian_matrix`]. Local
//! dimensions of the map spaces come from these ranks minus the four
//! dimensions of reparametrization and scaling.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::{next_prime, PrimeField};
use crate::formulas::{self, ProblemInstance};
use crate::linalg::Matrix;
use crate::poly::{monomials, MapParam, MultiPoly};
use crate::seed::{derive_seed, rng};

/// Dimension of the group acting on parametrized maps: automorphisms of
/// `P^1` plus scaling of the coordinate tuple.
pub const GROUP_DIM: i64 = 4;

const MAX_RESAMPLES: usize = 64;

/// Marked parameter `t0` (in the chart `s = 1`) with its image point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Marking {
    pub t0: u64,
    pub point: Vec<u64>,
    /// Target coordinate used to dehomogenize `point`.
    pub chart: usize,
}

/// A hypersurface `V(F)` together with a curve `f` on it, optionally marked.
#[derive(Debug, Clone)]
pub struct IncidencePoint {
    form: MultiPoly,
    map: MapParam,
    marking: Option<Marking>,
}

impl IncidencePoint {
    /// Checks that `F o f` vanishes identically before accepting the pair.
    pub fn new(form: MultiPoly, map: MapParam) -> Result<Self> {
        if !form.compose_with_map(&map)?.is_zero() {
            return Err(Error::Malformed("the curve does not lie on the hypersurface".into()));
        }
        Ok(Self {
            form,
            map,
            marking: None,
        })
    }

    /// Attaches a marked parameter `t0` and target point `p`, checking
    /// `F(p) = 0` and `f(1, t0)` proportional to `p`.
    pub fn with_marking(mut self, t0: u64, point: Vec<u64>) -> Result<Self> {
        let f = self.form.field();
        let t0 = t0 % f.modulus();
        let point: Vec<u64> = point.into_iter().map(|x| x % f.modulus()).collect();
        if point.len() != self.map.n() + 1 {
            return Err(Error::InconsistentMarking(format!(
                "point has {} coordinates, expected {}",
                point.len(),
                self.map.n() + 1
            )));
        }
        let Some(chart) = point.iter().position(|&x| x != 0) else {
            return Err(Error::InconsistentMarking("marked point is the zero vector".into()));
        };
        if self.form.evaluate(&point)? != 0 {
            return Err(Error::InconsistentMarking("marked point does not lie on the hypersurface".into()));
        }
        let image = self.map.point_at(t0);
        // image ∝ point  <=>  all 2x2 minors vanish and image is nonzero
        let proportional = image.iter().any(|&x| x != 0)
            && (0..point.len()).all(|i| f.mul(image[i], point[chart]) == f.mul(image[chart], point[i]));
        if !proportional {
            return Err(Error::InconsistentMarking(format!(
                "f(t0) at t0 = {t0} is not the marked point"
            )));
        }
        self.marking = Some(Marking { t0, point, chart });
        Ok(self)
    }

    pub fn form(&self) -> &MultiPoly {
        &self.form
    }

    pub fn map(&self) -> &MapParam {
        &self.map
    }

    pub fn marking(&self) -> Option<&Marking> {
        self.marking.as_ref()
    }

    pub fn field(&self) -> PrimeField {
        self.form.field()
    }
}

/// The `(ed+1) x C(n+d, d)` matrix sending the coefficients of `F` (in
/// [`monomials`] order) to the coefficients of `F o f`.
pub fn containment_matrix(map: &MapParam, d: u32) -> Result<Matrix> {
    map.ensure_nondegenerate()?;
    Ok(composition_operator(map, d))
}

/// Same as [`containment_matrix`] without the degeneracy check.
pub(crate) fn composition_operator(map: &MapParam, d: u32) -> Matrix {
    let field = map.field();
    let monos = monomials(map.n() + 1, d);
    let powers = map.power_table(d);
    let rows = d as usize * map.e() + 1;
    let mut m = Matrix::zeros(field, rows, monos.len());
    for (col, exps) in monos.iter().enumerate() {
        let image = exps
            .iter()
            .enumerate()
            .filter(|(_, &k)| k > 0)
            .map(|(i, &k)| &powers[i][k as usize])
            .fold(None, |acc: Option<crate::poly::BinaryForm>, p| {
                Some(match acc {
                    None => p.clone(),
                    Some(a) => a.mul(p),
                })
            })
            .expect("degree >= 1 monomial");
        for (row, &c) in image.coeffs().iter().enumerate() {
            m.set(row, col, c);
        }
    }
    m
}

/// Picks a random nondegenerate curve, then a uniformly random hypersurface
/// through it. With `marked`, also picks `t0` and sets `p = f(1, t0)`.
pub fn sample_incidence(
    inst: ProblemInstance,
    field: PrimeField,
    seed: u64,
    marked: bool,
) -> Result<IncidencePoint> {
    check_prime(inst, field)?;
    let mut rng = rng(seed);
    sample_incidence_with(inst, field, &mut rng, marked)
}

pub(crate) fn check_prime(inst: ProblemInstance, field: PrimeField) -> Result<()> {
    let bound = u64::from(inst.d) * u64::from(inst.e);
    if field.modulus() <= bound {
        return Err(Error::PrimeTooSmall {
            prime: field.modulus(),
            bound,
        });
    }
    Ok(())
}

pub(crate) fn sample_incidence_with<R: Rng + ?Sized>(
    inst: ProblemInstance,
    field: PrimeField,
    rng: &mut R,
    marked: bool,
) -> Result<IncidencePoint> {
    let n = inst.n as usize;
    let e = inst.e as usize;
    let map = MapParam::random_nondegenerate(n, e, field, rng);
    let form = random_form_through(&map, inst.d, rng)?;
    let point = IncidencePoint::new(form, map)?;
    if !marked {
        return Ok(point);
    }
    for _ in 0..MAX_RESAMPLES {
        let t0 = rng.gen_range(0..field.modulus());
        let image = point.map.point_at(t0);
        if image.iter().any(|&x| x != 0) {
            return point.with_marking(t0, image);
        }
    }
    Err(Error::Malformed("could not find a parameter with nonzero image".into()))
}

/// A uniformly random nonzero form of degree `d` vanishing on `map`.
pub fn random_form_through<R: Rng + ?Sized>(map: &MapParam, d: u32, rng: &mut R) -> Result<MultiPoly> {
    let field = map.field();
    let m = composition_operator(map, d);
    if m.rank() == m.cols() {
        return Err(Error::NoHypersurface {
            conditions: m.rows(),
            coefficients: m.cols(),
        });
    }
    for _ in 0..MAX_RESAMPLES {
        let coeffs = m.random_kernel_point_with(rng)?;
        if coeffs.iter().any(|&c| c != 0) {
            return MultiPoly::from_dense(field, map.n() + 1, d, &coeffs);
        }
    }
    Err(Error::NoSolution)
}

/// Derivatives of the `ed + 1` coefficients of `F o f` with respect to the
/// map coefficients `a_{i,j}`: column `i(e+1) + j` holds
/// `(dF/dx_i o f) * s^(e-j) t^j`.
pub fn jacobian_matrix(pt: &IncidencePoint) -> Result<Matrix> {
    let map = &pt.map;
    let (n, e) = (map.n(), map.e());
    let d = pt.form.degree() as usize;
    let field = pt.field();
    let mut jac = Matrix::zeros(field, d * e + 1, (n + 1) * (e + 1));
    for i in 0..=n {
        let g = pt.form.partial_derivative(i)?.compose_with_map(map)?;
        for j in 0..=e {
            let col = i * (e + 1) + j;
            for (k, &c) in g.coeffs().iter().enumerate() {
                jac.set(k + j, col, c);
            }
        }
    }
    Ok(jac)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModuliCertificate {
    pub rank: usize,
    pub unknowns: usize,
    /// `unknowns - rank - 4`
    pub local_dim: i64,
    /// `e(n-d+1) + n - 4`
    pub expected_dim: i64,
    pub matches_expected: bool,
}

/// Upper bound on the dimension of the space of degree-`e` maps to `V(F)`
/// near `f`, modulo reparametrization and scaling.
pub fn local_moduli_dim(pt: &IncidencePoint) -> Result<ModuliCertificate> {
    let jac = jacobian_matrix(pt)?;
    let rank = jac.rank();
    let unknowns = jac.cols();
    let local_dim = unknowns as i64 - rank as i64 - GROUP_DIM;
    let (n, d, e) = dims(pt);
    let expected_dim = formulas::expected_dim_moduli_raw(n, d, e);
    Ok(ModuliCertificate {
        rank,
        unknowns,
        local_dim,
        expected_dim,
        matches_expected: local_dim == expected_dim,
    })
}

/// Debug variant of [`local_moduli_dim`]: instead of subtracting the group
/// dimension, pins `a_{0,0}, a_{0,e}, a_{1,0}, a_{1,e}`. Agrees with the
/// arithmetic version whenever the slice is transverse to the group orbit.
pub fn local_moduli_dim_sliced(pt: &IncidencePoint) -> Result<i64> {
    let jac = jacobian_matrix(pt)?;
    let e = pt.map.e();
    let field = pt.field();
    let mut slice = Matrix::zeros(field, GROUP_DIM as usize, jac.cols());
    for (r, col) in [0, e, e + 1, 2 * e + 1].into_iter().enumerate() {
        slice.set(r, col, 1);
    }
    let stacked = jac.vstack(&slice)?;
    Ok(jac.cols() as i64 - stacked.rank() as i64)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiberCertificate {
    pub combined_rank: usize,
    /// `ed + n`: one less than the number of equations.
    pub expected_rank: usize,
    pub unknowns: usize,
    /// `unknowns - combined_rank - 4`
    pub local_dim: i64,
    /// `e(n-d+1) - 2`
    pub expected_dim: i64,
    pub chart: usize,
    pub matches_expected: bool,
    /// `combined_rank != ed + n`
    pub anomaly: bool,
}

/// Local dimension of degree-`e` curves through the marked point.
///
/// Unknowns are the map coefficients plus `t0`. Equations are the `ed + 1`
/// coefficients of `F o f` and the `n` chart conditions
/// `f_i(t0) - p_i f_c(t0) = 0` (`i != c`, `p` normalized so `p_c = 1`).
pub fn marked_local_fiber_dim(pt: &IncidencePoint) -> Result<FiberCertificate> {
    let marking = pt
        .marking
        .as_ref()
        .ok_or_else(|| Error::InconsistentMarking("point carries no marking".into()))?;
    let field = pt.field();
    if pt.form.evaluate(&marking.point)? != 0 {
        return Err(Error::InconsistentMarking("marked point is not on the hypersurface".into()));
    }
    let map = &pt.map;
    let (n, e) = (map.n(), map.e());
    let obstruction = jacobian_matrix(pt)?;
    let unknowns = obstruction.cols() + 1;
    let c = marking.chart;
    let scale = field.inv(marking.point[c]).expect("chart coordinate is nonzero");
    let normalized: Vec<u64> = marking.point.iter().map(|&x| field.mul(x, scale)).collect();

    let mut combined = Matrix::zeros(field, obstruction.rows() + n, unknowns);
    for r in 0..obstruction.rows() {
        for col in 0..obstruction.cols() {
            combined.set(r, col, obstruction.get(r, col));
        }
    }
    let t0 = marking.t0;
    let t_pows: Vec<u64> = (0..=e as u64).map(|j| field.pow(t0, j)).collect();
    let forms = map.forms();
    let (_, dc) = forms[c].evaluate_affine(t0);
    for (row, i) in (obstruction.rows()..).zip((0..=n).filter(|&i| i != c)) {
        let pi = normalized[i];
        for (j, &tp) in t_pows.iter().enumerate() {
            combined.set(row, i * (e + 1) + j, tp);
            combined.set(row, c * (e + 1) + j, field.neg(field.mul(pi, tp)));
        }
        let (_, di) = forms[i].evaluate_affine(t0);
        combined.set(row, unknowns - 1, field.sub(di, field.mul(pi, dc)));
    }

    let combined_rank = combined.rank();
    let expected_rank = pt.form.degree() as usize * e + n;
    let local_dim = unknowns as i64 - combined_rank as i64 - GROUP_DIM;
    let (ni, di, ei) = dims(pt);
    let expected_dim = formulas::expected_fiber_dim(ni, di, ei);
    Ok(FiberCertificate {
        combined_rank,
        expected_rank,
        unknowns,
        local_dim,
        expected_dim,
        chart: c,
        matches_expected: local_dim == expected_dim,
        anomaly: combined_rank != expected_rank,
    })
}

/// Rank of the linear conditions on `F` saying every partial `dF/dx_i`
/// vanishes identically along `f`.
pub fn singular_locus_conditions_rank(map: &MapParam, d: u32) -> Result<usize> {
    map.ensure_nondegenerate()?;
    Ok(singular_locus_matrix(map, d).rank())
}

pub(crate) fn singular_locus_matrix(map: &MapParam, d: u32) -> Matrix {
    let field = map.field();
    let n_vars = map.n() + 1;
    let monos = monomials(n_vars, d);
    let block = d.saturating_sub(1) as usize * map.e() + 1;
    let mut m = Matrix::zeros(field, n_vars * block, monos.len());
    if d == 0 {
        return m;
    }
    // column images of the degree d-1 monomials
    let lower = composition_operator_any(map, d - 1);
    let lower_index: std::collections::HashMap<Vec<u32>, usize> = monomials(n_vars, d - 1)
        .into_iter()
        .enumerate()
        .map(|(i, e)| (e, i))
        .collect();
    for (col, exps) in monos.iter().enumerate() {
        for i in 0..n_vars {
            if exps[i] == 0 {
                continue;
            }
            let mut reduced = exps.clone();
            reduced[i] -= 1;
            let src = lower_index[&reduced];
            let factor = u64::from(exps[i]) % field.modulus();
            for k in 0..block {
                let v = field.mul(lower.get(k, src), factor);
                m.set(i * block + k, col, v);
            }
        }
    }
    m
}

/// [`composition_operator`] extended to degree 0 (the constant monomial).
fn composition_operator_any(map: &MapParam, d: u32) -> Matrix {
    if d == 0 {
        Matrix::identity(map.field(), 1)
    } else {
        composition_operator(map, d)
    }
}

fn dims(pt: &IncidencePoint) -> (i64, i64, i64) {
    (
        pt.map.n() as i64,
        i64::from(pt.form.degree()),
        pt.map.e() as i64,
    )
}

/// Which incidence property a verification suite certifies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    /// rank of the containment matrix equals `ed + 1`
    Containment,
    /// local moduli dimension equals `e(n-d+1) + n - 4`
    Jacobian,
    /// marked fiber dimension equals `e(n-d+1) - 2`, combined rank `ed + n`
    Marked,
    /// conditions for singularity along the curve: exactly `nd + 1` for lines
    Singular,
}

impl Check {
    pub fn name(self) -> &'static str {
        match self {
            Check::Containment => "containment",
            Check::Jacobian => "jacobian",
            Check::Marked => "marked",
            Check::Singular => "singular",
        }
    }

    /// Singular-locus counts must hold on every trial; the others are
    /// statistical.
    pub fn is_deterministic(self) -> bool {
        matches!(self, Check::Singular)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SuiteConfig {
    pub check: Check,
    pub inst: ProblemInstance,
    pub prime: u64,
    pub trials: usize,
    pub seed: u64,
    /// Defaults to [`default_pass_threshold`].
    pub pass_threshold: Option<usize>,
}

/// `ceil(49 T / 50)`: 49 of 50 trials by default.
pub fn default_pass_threshold(trials: usize) -> usize {
    (49 * trials).div_ceil(50)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrialOutcome {
    pub trial: usize,
    pub seed: u64,
    pub rank: Option<usize>,
    pub local_dim: Option<i64>,
    pub chart: Option<usize>,
    pub passed: bool,
    /// Hard-invariant breach (dimension below expected, or singular rank
    /// below `nd + 1`).
    pub invariant_violated: bool,
    pub anomaly: bool,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub check: Check,
    pub n: u32,
    pub d: u32,
    pub e: u32,
    pub prime: u64,
    pub trials: usize,
    pub seed: u64,
    pub expected_rank: usize,
    pub expected_dim: Option<i64>,
    pub pass_count: usize,
    pub pass_threshold: usize,
    pub anomalies: Vec<u64>,
    pub invariant_ok: bool,
    pub verdict: bool,
    pub outcomes: Vec<TrialOutcome>,
}

/// Runs `trials` independent samples in parallel; outcomes are reported in
/// trial order regardless of scheduling.
pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteReport> {
    let field = PrimeField::new(cfg.prime)?;
    check_prime(cfg.inst, field)?;
    let inst = cfg.inst;
    let (n, d, e) = (i64::from(inst.n), i64::from(inst.d), i64::from(inst.e));
    let (expected_rank, expected_dim) = match cfg.check {
        Check::Containment => (inst.obstruction_rank() as usize, None),
        Check::Jacobian => (
            inst.obstruction_rank() as usize,
            Some(formulas::expected_dim_moduli_raw(n, d, e)),
        ),
        Check::Marked => (
            (d * e + n) as usize,
            Some(formulas::expected_fiber_dim(n, d, e)),
        ),
        Check::Singular => (formulas::singular_line_conditions(n, d) as usize, None),
    };
    let outcomes: Vec<TrialOutcome> = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| {
            let seed = derive_seed(cfg.seed, trial as u64);
            run_trial(cfg.check, inst, field, trial, seed, expected_rank)
        })
        .collect();
    let pass_count = outcomes.iter().filter(|o| o.passed).count();
    let pass_threshold = if cfg.check.is_deterministic() {
        cfg.trials
    } else {
        cfg.pass_threshold.unwrap_or_else(|| default_pass_threshold(cfg.trials))
    };
    let invariant_ok = outcomes.iter().all(|o| !o.invariant_violated);
    let anomalies = outcomes.iter().filter(|o| o.anomaly).map(|o| o.seed).collect();
    Ok(SuiteReport {
        check: cfg.check,
        n: inst.n,
        d: inst.d,
        e: inst.e,
        prime: cfg.prime,
        trials: cfg.trials,
        seed: cfg.seed,
        expected_rank,
        expected_dim,
        pass_count,
        pass_threshold,
        anomalies,
        invariant_ok,
        verdict: invariant_ok && pass_count >= pass_threshold,
        outcomes,
    })
}

fn run_trial(
    check: Check,
    inst: ProblemInstance,
    field: PrimeField,
    trial: usize,
    seed: u64,
    expected_rank: usize,
) -> TrialOutcome {
    let mut out = TrialOutcome {
        trial,
        seed,
        rank: None,
        local_dim: None,
        chart: None,
        passed: false,
        invariant_violated: false,
        anomaly: false,
        error: None,
    };
    let mut rng = rng(seed);
    let result: Result<()> = (|| {
        match check {
            Check::Containment => {
                let map = MapParam::random_nondegenerate(inst.n as usize, inst.e as usize, field, &mut rng);
                let rank = containment_matrix(&map, inst.d)?.rank();
                out.rank = Some(rank);
                out.passed = rank == expected_rank;
            }
            Check::Jacobian => {
                let pt = sample_incidence_with(inst, field, &mut rng, false)?;
                let cert = local_moduli_dim(&pt)?;
                out.rank = Some(cert.rank);
                out.local_dim = Some(cert.local_dim);
                out.passed = cert.matches_expected;
                out.invariant_violated = cert.local_dim < cert.expected_dim;
            }
            Check::Marked => {
                let pt = sample_incidence_with(inst, field, &mut rng, true)?;
                let cert = marked_local_fiber_dim(&pt)?;
                out.rank = Some(cert.combined_rank);
                out.local_dim = Some(cert.local_dim);
                out.chart = Some(cert.chart);
                out.anomaly = cert.anomaly;
                out.passed = cert.matches_expected && !cert.anomaly;
            }
            Check::Singular => {
                let map = MapParam::random_nondegenerate(inst.n as usize, inst.e as usize, field, &mut rng);
                let rank = singular_locus_conditions_rank(&map, inst.d)?;
                out.rank = Some(rank);
                out.passed = if inst.e == 1 {
                    rank == expected_rank
                } else {
                    rank >= expected_rank
                };
                out.invariant_violated = rank < expected_rank;
            }
        }
        Ok(())
    })();
    if let Err(err) = result {
        out.error = Some(err.to_string());
        out.passed = false;
    }
    out
}

/// A suite run with at most one retry at the next prime above `2p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub attempts: Vec<SuiteReport>,
    pub retried: bool,
    pub verdict: bool,
}

pub fn run_suite_with_retry(cfg: &SuiteConfig) -> Result<VerifyReport> {
    let first = run_suite(cfg)?;
    if first.verdict {
        return Ok(VerifyReport {
            verdict: true,
            retried: false,
            attempts: vec![first],
        });
    }
    let retry_cfg = SuiteConfig {
        prime: next_prime(2 * cfg.prime),
        ..*cfg
    };
    let second = run_suite(&retry_cfg)?;
    Ok(VerifyReport {
        verdict: second.verdict,
        retried: true,
        attempts: vec![first, second],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn fp(p: u64) -> PrimeField {
        PrimeField::new(p).unwrap()
    }

    fn inst(n: u32, d: u32, e: u32) -> ProblemInstance {
        ProblemInstance::new(n, d, e).unwrap()
    }

    #[test]
    fn line_in_plane_of_linear_forms() {
        let f = fp(10007);
        let map = MapParam::new(f, vec![vec![1, 0], vec![0, 1], vec![0, 0]]).unwrap();
        let m = containment_matrix(&map, 1).unwrap();
        assert_eq!((m.rows(), m.cols()), (2, 3));
        assert_eq!(m.rank(), 2);
        // kernel is spanned by x2: c0 = c1 = 0
        let k = m.kernel_basis();
        assert_eq!(k, vec![vec![0, 0, 1]]);
    }

    #[test]
    fn degenerate_map_refused() {
        let f = fp(10007);
        let map = MapParam::new(f, vec![vec![1, 1], vec![2, 2], vec![3, 3]]).unwrap();
        assert!(matches!(containment_matrix(&map, 2), Err(Error::DegenerateMap)));
        assert!(matches!(singular_locus_conditions_rank(&map, 2), Err(Error::DegenerateMap)));
    }

    #[test]
    fn conic_containment_rank_and_kernel_dim() {
        let f = fp(10007);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let map = MapParam::random_nondegenerate(4, 2, f, &mut rng);
        let m = containment_matrix(&map, 3).unwrap();
        assert_eq!((m.rows(), m.cols()), (7, 35));
        assert_eq!(m.rank(), 7);
        assert_eq!(m.kernel_basis().len(), 28);
    }

    #[test]
    fn sampled_points_lie_on_incidence() {
        let f = fp(10007);
        for seed in 0..5 {
            let pt = sample_incidence(inst(4, 3, 2), f, seed, true).unwrap();
            assert!(pt.form().compose_with_map(pt.map()).unwrap().is_zero());
            let mk = pt.marking().unwrap();
            assert_eq!(pt.form().evaluate(&mk.point).unwrap(), 0);
        }
    }

    #[test]
    fn small_prime_refused() {
        let err = sample_incidence(inst(4, 3, 2), fp(5), 0, false).unwrap_err();
        assert!(matches!(err, Error::PrimeTooSmall { prime: 5, bound: 6 }));
    }

    #[test]
    fn no_hypersurface_when_conditions_exceed_coefficients() {
        // e = 5 curves in P^2 impose 11 conditions on the 10 cubic coefficients
        let f = fp(10007);
        let err = sample_incidence(inst(2, 3, 5), f, 0, false).unwrap_err();
        assert!(matches!(err, Error::NoHypersurface { conditions: 16, coefficients: 10 }));
    }

    #[test]
    fn linear_form_jacobian() {
        let f = fp(10007);
        let x0 = MultiPoly::parse("x0", f, 5).unwrap();
        let map = MapParam::new(f, vec![vec![0, 0, 0], vec![1, 2, 3], vec![4, 5, 6], vec![1, 0, 0], vec![0, 0, 1]]).unwrap();
        let pt = IncidencePoint::new(x0, map).unwrap();
        let jac = jacobian_matrix(&pt).unwrap();
        assert_eq!((jac.rows(), jac.cols()), (3, 15));
        for r in 0..3 {
            for c in 3..15 {
                assert_eq!(jac.get(r, c), 0);
            }
        }
        assert_eq!(jac.rank(), 3);
    }

    #[test]
    fn veronese_conic_is_unobstructed() {
        let f = fp(10007);
        let conic = MultiPoly::parse("x0*x2 - x1^2", f, 3).unwrap();
        let map = MapParam::new(f, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
        let pt = IncidencePoint::new(conic, map).unwrap();
        let cert = local_moduli_dim(&pt).unwrap();
        assert_eq!(cert.rank, 5);
        // expected e(n-d+1)+n-4 = 2 - 2 = 0
        assert_eq!(cert.local_dim, 0);
        assert!(cert.matches_expected);
    }

    #[test]
    fn lines_on_cubic_threefold() {
        let f = fp(10007);
        let hits = (0..10)
            .filter(|&s| {
                let pt = sample_incidence(inst(4, 3, 1), f, s, false).unwrap();
                local_moduli_dim(&pt).unwrap().local_dim == 2
            })
            .count();
        assert!(hits >= 9);
    }

    #[test]
    fn sliced_dimension_agrees() {
        let f = fp(10007);
        for seed in 0..5 {
            let pt = sample_incidence(inst(5, 3, 2), f, seed, false).unwrap();
            assert_eq!(
                local_moduli_dim_sliced(&pt).unwrap(),
                local_moduli_dim(&pt).unwrap().local_dim
            );
        }
    }

    #[test]
    fn marking_validation() {
        let f = fp(10007);
        let pt = sample_incidence(inst(4, 3, 1), f, 3, false).unwrap();
        assert!(matches!(marked_local_fiber_dim(&pt), Err(Error::InconsistentMarking(_))));
        let off = vec![1, 2, 3, 4, 5];
        let on_curve = pt.map().point_at(9);
        assert!(pt.clone().with_marking(9, off).is_err());
        let other_t = pt.map().point_at(10);
        assert!(pt.clone().with_marking(9, other_t).is_err());
        let scaled: Vec<u64> = on_curve.iter().map(|&x| f.mul(x, 77)).collect();
        let marked = pt.with_marking(9, scaled).unwrap();
        let cert = marked_local_fiber_dim(&marked).unwrap();
        assert_eq!(cert.expected_dim, 0);
    }

    #[test]
    fn lines_through_a_point() {
        let f = fp(10007);
        let pt = sample_incidence(inst(6, 4, 1), f, 11, true).unwrap();
        let cert = marked_local_fiber_dim(&pt).unwrap();
        assert_eq!(cert.local_dim, 1);
        assert_eq!(cert.combined_rank, 4 + 6);
        assert!(!cert.anomaly);
    }

    #[test]
    fn coordinate_line_singular_conditions_match_monomial_list() {
        // line (s, 0, ..., 0, t): F must lose every monomial x0^j xn^(d-j)
        // and x_i x0^j xn^(d-j-1)
        let f = fp(10007);
        for (n, d) in [(2usize, 2u32), (4, 3), (6, 4)] {
            let mut rows = vec![vec![0u64; 2]; n + 1];
            rows[0] = vec![1, 0];
            rows[n] = vec![0, 1];
            let map = MapParam::new(f, rows).unwrap();
            let m = singular_locus_matrix(&map, d);
            assert_eq!(m.rank(), n * d as usize + 1);
            let listed: Vec<usize> = monomials(n + 1, d)
                .iter()
                .enumerate()
                .filter(|(_, e)| {
                    let inner: u32 = e[1..n].iter().sum();
                    inner <= 1
                })
                .map(|(i, _)| i)
                .collect();
            assert_eq!(listed.len(), n * d as usize + 1);
            // the kernel is exactly the forms supported off the listed monomials
            for v in m.kernel_basis() {
                assert!(listed.iter().all(|&i| v[i] == 0));
            }
        }
    }

    #[test]
    fn jacobian_rank_invariances() {
        let f = fp(10007);
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for seed in 0..4 {
            let pt = sample_incidence(inst(4, 3, 2), f, seed, false).unwrap();
            let base = jacobian_matrix(&pt).unwrap().rank();

            let gamma = [3, 7, 2, 9];
            let re = IncidencePoint::new(pt.form().clone(), pt.map().reparametrize(gamma)).unwrap();
            assert_eq!(jacobian_matrix(&re).unwrap().rank(), base);

            let sc = IncidencePoint::new(pt.form().clone(), pt.map().scale(1234)).unwrap();
            assert_eq!(jacobian_matrix(&sc).unwrap().rank(), base);

            let a = loop {
                let rows: Vec<Vec<u64>> = (0..5).map(|_| (0..5).map(|_| rng.gen_range(0..10007)).collect()).collect();
                let m = Matrix::from_rows(f, &rows).unwrap();
                if m.inverse().is_some() {
                    break m;
                }
            };
            let moved_form = pt.form().linear_substitution(&a.inverse().unwrap()).unwrap();
            let moved_map = pt.map().apply_linear(&a).unwrap();
            let moved = IncidencePoint::new(moved_form, moved_map).unwrap();
            assert_eq!(jacobian_matrix(&moved).unwrap().rank(), base);
        }
    }

    #[test]
    fn euler_relation_on_curve() {
        // d (F o f) = sum_i f_i (dF/dx_i o f) for any F and f
        let f = fp(10007);
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let form = MultiPoly::random_homogeneous(4, 3, f, 8);
        let map = MapParam::random_with(4, 2, f, &mut rng);
        let mut total = crate::poly::BinaryForm::zero(f, 6);
        for (i, fi) in map.forms().iter().enumerate() {
            let g = form.partial_derivative(i).unwrap().compose_with_map(&map).unwrap();
            total = total.add(&fi.mul(&g));
        }
        let mut scaled = crate::poly::BinaryForm::zero(f, 6);
        scaled.add_scaled(&form.compose_with_map(&map).unwrap(), 3);
        assert_eq!(total, scaled);
        assert!(!total.is_zero());
    }

    #[test]
    fn pass_threshold_default() {
        assert_eq!(default_pass_threshold(50), 49);
        assert_eq!(default_pass_threshold(10), 10);
        assert_eq!(default_pass_threshold(100), 98);
    }
}
