//! Closed-form dimension counts for rational curves on hypersurfaces.
//!
//! All values are plain integers. Only [`DimReport::expected_dim_moduli`]
//! is clamped at zero; the raw value is kept alongside it.

use serde::Serialize;

use crate::error::{Error, Result};

/// Ambient data: a degree-`d` hypersurface in `P^n` and curves of degree `e`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ProblemInstance {
    pub n: u32,
    pub d: u32,
    pub e: u32,
}

impl ProblemInstance {
    pub fn new(n: u32, d: u32, e: u32) -> Result<Self> {
        if n == 0 || d == 0 || e == 0 {
            return Err(Error::Usage(format!(
                "n, d and e must all be at least 1 (got n={n}, d={d}, e={e})"
            )));
        }
        Ok(Self { n, d, e })
    }

    /// `n >= d + 2`, the range where the flatness and dimension results hold.
    pub fn fano_range(&self) -> bool {
        self.n >= self.d + 2
    }

    /// `N = C(n+d, d) - 1`, the dimension of the space of hypersurfaces;
    /// `None` if it overflows.
    pub fn hypersurface_space_dim(&self) -> Option<u64> {
        binomial(u64::from(self.n + self.d), u64::from(self.d))
            .and_then(|b| u64::try_from(b - 1).ok())
    }

    /// Number of monomials of degree `d` in `n + 1` variables.
    pub fn num_monomials(&self) -> Option<u64> {
        self.hypersurface_space_dim().map(|v| v + 1)
    }

    /// Coefficient count `(n+1)(e+1)` of a parametrized degree-`e` map.
    pub fn map_unknowns(&self) -> u64 {
        u64::from(self.n + 1) * u64::from(self.e + 1)
    }

    /// `ed + 1`, the number of coefficients of `F o f`.
    pub fn obstruction_rank(&self) -> u64 {
        u64::from(self.e) * u64::from(self.d) + 1
    }
}

/// `C(n, k)` with overflow detection.
pub fn binomial(n: u64, k: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul(u128::from(n - i))? / u128::from(i + 1);
    }
    Some(acc)
}

fn choose2(n: i64) -> i64 {
    n * (n - 1) / 2
}

/// `e(n-d+1) + n - 4`, before clamping.
pub fn expected_dim_moduli_raw(n: i64, d: i64, e: i64) -> i64 {
    e * (n - d + 1) + n - 4
}

/// `e(n-d+1) - 2`: dimension of degree-`e` curves through a general point.
pub fn expected_fiber_dim(n: i64, d: i64, e: i64) -> i64 {
    e * (n - d + 1) - 2
}

/// `(e+1)(n+1) - 4`: dimension of degree-`e` rational curves in `P^n`.
pub fn dim_ambient_moduli(n: i64, e: i64) -> i64 {
    (e + 1) * (n + 1) - 4
}

/// `floor((n+1)/(n-d+1))`, defined when `n >= d`.
pub fn threshold_degree(n: i64, d: i64) -> Option<i64> {
    (n >= d).then(|| (n + 1) / (n - d + 1))
}

/// `C(d+k, k)`: conditions for a degree-`d` hypersurface to contain a fixed
/// `k`-dimensional variety.
pub fn conditions_contain_k_variety(d: u64, k: u64) -> Option<u128> {
    binomial(d + k, k)
}

/// `nd + 1`: conditions for a hypersurface to be singular along a fixed line.
pub fn singular_line_conditions(n: i64, d: i64) -> i64 {
    n * d + 1
}

/// Codimension bound for hypersurfaces that fail 1-levelness:
/// `min(n(d-2)+3, C(n,2) - n + 1)`. Requires `n >= d + 2`.
pub fn codim_s1(n: i64, d: i64) -> Option<i64> {
    (n >= d + 2).then(|| (n * (d - 2) + 3).min(choose2(n) - n + 1))
}

/// `n(d-e-1) - e + 4`: codimension of hypersurfaces singular along some
/// degree-`e` rational curve.
pub fn codim_sing_curve(n: i64, d: i64, e: i64) -> i64 {
    n * (d - e - 1) - e + 4
}

/// `C(n,2) + d - 2en + e(e+1)(n-d+1)/2 - e + 1`.
pub fn codim_se_closed(n: i64, d: i64, e: i64) -> i64 {
    let tri = e * (e + 1) * (n - d + 1);
    assert!(tri % 2 == 0, "e(e+1)(n-d+1) is a product of consecutive integers times an integer");
    choose2(n) + d - 2 * e * n + tri / 2 - e + 1
}

/// One row of the codimension table for `S_e`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SeBound {
    pub e: i64,
    pub recursive: i64,
    pub closed: i64,
}

/// The recursive bound `L_e = min(L_{e-1}, L_{e-1} - 2n + e(n-d+1) - 1,
/// n(d-e-1) - e + 4)` seeded with `L_1 = codim_s1(n, d)`, paired with the
/// closed form, for `1 <= e <= e_max`.
pub fn codim_se_bounds(n: i64, d: i64, e_max: i64) -> Result<Vec<SeBound>> {
    let Some(mut level) = codim_s1(n, d) else {
        return Err(Error::Usage(format!(
            "the S_e recursion needs n >= d + 2 (got n={n}, d={d})"
        )));
    };
    let mut out = Vec::with_capacity(e_max.max(0) as usize);
    for e in 1..=e_max {
        if e > 1 {
            level = level
                .min(level - 2 * n + e * (n - d + 1) - 1)
                .min(codim_sing_curve(n, d, e));
        }
        out.push(SeBound {
            e,
            recursive: level,
            closed: codim_se_closed(n, d, e),
        });
    }
    Ok(out)
}

/// Dimension of degree-`k` covers of degree-`e/k` curves through a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CoverDim {
    pub k: i64,
    pub dim: i64,
    /// `e(n-d+1) - 2 > dim`; only evaluated when `n >= d + 2`.
    pub below_expected: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundaryDims {
    /// Reducible curves through a smooth point: `e(n-d+1) - 3`.
    pub smooth: i64,
    /// Reducible curves through a singular point: `e(n-d+1) - 2`.
    pub singular: i64,
    pub covers: Vec<CoverDim>,
}

pub fn boundary_and_cover_dims(n: i64, d: i64, e: i64) -> BoundaryDims {
    let slope = n - d + 1;
    let fano = n >= d + 2;
    let covers = (2..=e)
        .filter(|k| e % k == 0)
        .map(|k| {
            let dim = (e / k) * slope + 2 * k - 4;
            CoverDim {
                k,
                dim,
                below_expected: fano.then(|| expected_fiber_dim(n, d, e) > dim),
            }
        })
        .collect();
    BoundaryDims {
        smooth: e * slope - 3,
        singular: e * slope - 2,
        covers,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdicts {
    pub fano_range: bool,
    /// `e` lies in the scanned range `ceil((n+1)/2) <= d <= n-2`, `e <= threshold`.
    pub in_scan_range: bool,
    pub recursive_ge_closed: Option<bool>,
    pub closed_positive: Option<bool>,
    pub covers_below_expected: Option<bool>,
}

/// Every formula output for one `(n, d, e)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DimReport {
    pub n: u32,
    pub d: u32,
    pub e: u32,
    pub hypersurface_space_dim: Option<u64>,
    pub expected_dim_moduli: i64,
    pub expected_dim_moduli_raw: i64,
    pub expected_fiber_dim: i64,
    pub dim_ambient_moduli: i64,
    pub obstruction_rank: i64,
    pub threshold_degree: Option<i64>,
    pub codim_s1: Option<i64>,
    pub singular_line_conditions: i64,
    pub codim_sing_curve: i64,
    pub codim_se_recursive: Option<i64>,
    pub codim_se_closed: Option<i64>,
    pub boundary_dim_smooth: i64,
    pub boundary_dim_singular: i64,
    pub multiple_cover_dims: Vec<CoverDim>,
    pub verdicts: Verdicts,
}

impl DimReport {
    /// True when a scanned-range instance violates the positivity bounds.
    pub fn inconsistent(&self) -> bool {
        self.verdicts.in_scan_range
            && (self.verdicts.recursive_ge_closed == Some(false)
                || self.verdicts.closed_positive == Some(false))
    }
}

/// Whether `(n, d, e)` is inside the range the positivity scan covers.
pub fn in_scan_range(n: i64, d: i64, e: i64) -> bool {
    n >= 6
        && (n + 2) / 2 <= d
        && d <= n - 2
        && e >= 1
        && threshold_degree(n, d).is_some_and(|t| e <= t)
}

pub fn dim_report(inst: ProblemInstance) -> DimReport {
    let (n, d, e) = (i64::from(inst.n), i64::from(inst.d), i64::from(inst.e));
    let raw = expected_dim_moduli_raw(n, d, e);
    let se = codim_se_bounds(n, d, e).ok().and_then(|v| v.last().copied());
    let bd = boundary_and_cover_dims(n, d, e);
    let covers_below = bd
        .covers
        .iter()
        .map(|c| c.below_expected)
        .try_fold(true, |acc, v| v.map(|b| acc && b));
    DimReport {
        n: inst.n,
        d: inst.d,
        e: inst.e,
        hypersurface_space_dim: inst.hypersurface_space_dim(),
        expected_dim_moduli: raw.max(0),
        expected_dim_moduli_raw: raw,
        expected_fiber_dim: expected_fiber_dim(n, d, e),
        dim_ambient_moduli: dim_ambient_moduli(n, e),
        obstruction_rank: e * d + 1,
        threshold_degree: threshold_degree(n, d),
        codim_s1: codim_s1(n, d),
        singular_line_conditions: singular_line_conditions(n, d),
        codim_sing_curve: codim_sing_curve(n, d, e),
        codim_se_recursive: se.map(|b| b.recursive),
        codim_se_closed: se.map(|b| b.closed),
        boundary_dim_smooth: bd.smooth,
        boundary_dim_singular: bd.singular,
        multiple_cover_dims: bd.covers,
        verdicts: Verdicts {
            fano_range: inst.fano_range(),
            in_scan_range: in_scan_range(n, d, e),
            recursive_ge_closed: se.map(|b| b.recursive >= b.closed),
            closed_positive: se.map(|b| b.closed > 0),
            covers_below_expected: if inst.fano_range() { covers_below } else { None },
        },
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    ClosedNotPositive,
    RecursiveBelowClosed,
    ClosedAtOneMismatch,
    QuadraticInequality,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub n: i64,
    pub d: i64,
    pub e: Option<i64>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanResult {
    pub n_max: i64,
    pub cases_scanned: u64,
    pub violations: Vec<Violation>,
}

/// Exhaustive check of the positivity bounds for `6 <= n <= n_max`,
/// `ceil((n+1)/2) <= d <= n-2`, `1 <= e <= floor((n+1)/(n-d+1))`.
pub fn positivity_scan(n_max: i64) -> ScanResult {
    let mut violations = Vec::new();
    let mut cases = 0u64;
    for n in 6..=n_max {
        for d in (n + 2) / 2..=n - 2 {
            let lhs = (n * n + 2 * d + 3) * (n - d + 1);
            let rhs = 3 * n * n + 4 * n + 1;
            if lhs <= rhs {
                violations.push(Violation {
                    kind: ViolationKind::QuadraticInequality,
                    n,
                    d,
                    e: None,
                    detail: format!("(n^2+2d+3)(n-d+1) = {lhs} <= 3n^2+4n+1 = {rhs}"),
                });
            }
            let top = threshold_degree(n, d).expect("d <= n - 2");
            let bounds = codim_se_bounds(n, d, top).expect("n >= d + 2");
            for b in bounds {
                cases += 1;
                if b.closed <= 0 {
                    violations.push(Violation {
                        kind: ViolationKind::ClosedNotPositive,
                        n,
                        d,
                        e: Some(b.e),
                        detail: format!("closed form {}", b.closed),
                    });
                }
                if b.recursive < b.closed {
                    violations.push(Violation {
                        kind: ViolationKind::RecursiveBelowClosed,
                        n,
                        d,
                        e: Some(b.e),
                        detail: format!("recursive {} < closed {}", b.recursive, b.closed),
                    });
                }
                if b.e == 1 && b.closed != choose2(n) - n + 1 {
                    violations.push(Violation {
                        kind: ViolationKind::ClosedAtOneMismatch,
                        n,
                        d,
                        e: Some(1),
                        detail: format!("closed form {} at e = 1", b.closed),
                    });
                }
            }
        }
    }
    ScanResult {
        n_max,
        cases_scanned: cases,
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn report(n: u32, d: u32, e: u32) -> DimReport {
        dim_report(ProblemInstance::new(n, d, e).unwrap())
    }

    #[test]
    fn quintic_threefold_has_expected_dimension_zero() {
        for e in 1..=20 {
            let r = report(4, 5, e);
            assert_eq!(r.expected_dim_moduli, 0);
            assert_eq!(r.expected_dim_moduli_raw, 0);
        }
    }

    #[test]
    fn substitution_examples() {
        let r = report(6, 4, 3);
        assert_eq!(r.expected_dim_moduli, 11);
        assert_eq!(r.expected_fiber_dim, 7);
        assert_eq!(r.dim_ambient_moduli, 24);
        assert_eq!(r.obstruction_rank, 13);
        assert_eq!(threshold_degree(5, 3), Some(2));
        assert_eq!(report(4, 5, 1).threshold_degree, None);
        assert_eq!(report(4, 3, 1).hypersurface_space_dim, Some(34));
    }

    #[test]
    fn raw_value_kept_below_zero() {
        let r = report(2, 5, 1);
        assert_eq!(r.expected_dim_moduli_raw, -4);
        assert_eq!(r.expected_dim_moduli, 0);
    }

    #[test]
    fn containment_conditions() {
        assert_eq!(conditions_contain_k_variety(7, 0), Some(1));
        assert_eq!(conditions_contain_k_variety(3, 1), Some(4));
    }

    #[test]
    fn s1_and_line_counts() {
        assert_eq!(codim_s1(6, 4), Some(10));
        assert_eq!(codim_s1(5, 4), None);
        assert_eq!(singular_line_conditions(2, 2), 5);
        assert_eq!(codim_se_closed(6, 4, 1), 10);
    }

    #[test]
    fn singular_curve_counts() {
        assert_eq!(codim_sing_curve(6, 4, 2), 8);
        for n in 1..10 {
            for d in 1..10 {
                assert_eq!(codim_sing_curve(n, d, d - 1), 5 - d);
                assert_eq!(codim_sing_curve(n, d, 1), n * (d - 2) + 3);
            }
        }
    }

    #[test]
    fn se_table_for_sextic_fourfold_case() {
        let t = codim_se_bounds(6, 4, 3).unwrap();
        assert_eq!(t[0], SeBound { e: 1, recursive: 10, closed: 10 });
        assert_eq!(t[1], SeBound { e: 2, recursive: 3, closed: 3 });
        // min(3, 3 - 12 + 9 - 1, 6*0 - 3 + 4) = min(3, -1, 1)
        assert_eq!(t[2], SeBound { e: 3, recursive: -1, closed: -1 });
        assert_eq!(codim_se_bounds(6, 4, 1).unwrap().len(), 1);
        assert!(codim_se_bounds(5, 4, 2).is_err());
    }

    #[test]
    fn cover_dims() {
        let b = boundary_and_cover_dims(6, 4, 4);
        assert_eq!(b.smooth, 9);
        assert_eq!(b.singular, 10);
        let k2 = b.covers.iter().find(|c| c.k == 2).unwrap();
        assert_eq!(k2.dim, 6);
        assert_eq!(k2.below_expected, Some(true));
        assert_eq!(b.covers.iter().map(|c| c.k).collect::<Vec<_>>(), vec![2, 4]);

        let prime = boundary_and_cover_dims(6, 4, 7);
        assert_eq!(prime.covers.iter().map(|c| c.k).collect::<Vec<_>>(), vec![7]);

        // n = d + 2, e = k = 2: 2*3 - 2 = 4 > 1*3 + 0 = 3
        let edge = boundary_and_cover_dims(7, 5, 2);
        assert_eq!(edge.covers[0].dim, 3);
        assert_eq!(edge.covers[0].below_expected, Some(true));
        assert_eq!(boundary_and_cover_dims(5, 4, 2).covers[0].below_expected, None);
    }

    #[test]
    fn small_scans() {
        let s = positivity_scan(6);
        assert!(s.violations.is_empty());
        assert_eq!(s.cases_scanned, 2);
        let s = positivity_scan(5);
        assert_eq!(s.cases_scanned, 0);
        assert!(s.violations.is_empty());
    }

    #[test]
    fn full_scan_is_clean() {
        let s = positivity_scan(60);
        assert!(s.violations.is_empty(), "{:?}", s.violations);
        assert_eq!(s.cases_scanned, 3503);
    }

    #[test]
    fn report_consistency_flags() {
        let r = report(6, 4, 2);
        assert!(r.verdicts.in_scan_range);
        assert_eq!(r.codim_se_recursive, Some(3));
        assert!(!r.inconsistent());
        // e = 3 is past the threshold, the negative bound is not a contradiction
        let r = report(6, 4, 3);
        assert!(!r.verdicts.in_scan_range);
        assert_eq!(r.verdicts.closed_positive, Some(false));
        assert!(!r.inconsistent());
    }

    proptest! {
        #[test]
        fn binomial_symmetry(d in 0u64..40, k in 0u64..40) {
            prop_assert_eq!(binomial(d + k, k), binomial(d + k, d));
        }

        #[test]
        fn singular_curve_identity(n in 1i64..80, d in 1i64..80, e in 1i64..30) {
            prop_assert_eq!(
                singular_line_conditions(n, d) - dim_ambient_moduli(n, e),
                codim_sing_curve(n, d, e)
            );
        }

        #[test]
        fn closed_form_at_one(n in 3i64..200, d in 1i64..200) {
            prop_assert_eq!(codim_se_closed(n, d, 1), choose2(n) - n + 1);
        }

        #[test]
        fn expected_dim_increases_in_e(n in 1u32..40, d in 1u32..40, e in 1u32..30) {
            prop_assume!(n >= d);
            let (a, b) = (report(n, d, e), report(n, d, e + 1));
            prop_assert!(b.expected_dim_moduli_raw > a.expected_dim_moduli_raw);
            if n >= 4 {
                prop_assert!(b.expected_dim_moduli > a.expected_dim_moduli);
            }
        }
    }
}
