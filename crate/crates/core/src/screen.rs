//! Outlier-candidate screening: enumerate tail-constrained integer
//! polynomials, locate parameter pairs matching the outlier profile (one
//! simple zero, one even-order zero, a template tail), and filter by the
//! order and root-product constraints.
//!
//! The screen is conjecture-facing: the expectation is that nothing
//! survives every filter. A survivor is a research event to be flagged,
//! not a build failure.

use crate::bseries::{
    root_product_bound, trivial_region_test, BSeries, Tail, TrivialRegion, Trunc, ZeroReport,
};
use crate::bseries::tail_polynomial;
use crate::error::{Error, Result};
use crate::ifs::Params;
use crate::roots::{companion_roots, eval_int_poly, eval_int_poly_derivative, int_poly_real_zeros};
use rayon::prelude::*;
use serde::Serialize;

/// Enumeration cap: `3^m` finite parts are visited.
pub const M_MAX_LIMIT: usize = 18;

/// Named constants quoted by the screening filters.
#[derive(Clone, Debug, Serialize)]
pub struct ScreenConstants {
    /// Lower bound for the location of any zero of multiplicity >= 2.
    pub alpha2_lower: f64,
    /// Approximate smallest location of an order-3 zero.
    pub alpha3_approx: f64,
    /// `1 / (2 C(5)^{1/5})`, the product-bound pivot for five roots.
    pub inv_two_c5: f64,
    /// `C(4)`, the product bound for four roots.
    pub c4: f64,
    /// Two tabulated points of the third-zero lower-bound function used by
    /// the fixed two-step filter: at 0.7485 the bound is >= 0.67, at
    /// 0.7463 it is >= 0.69.
    pub psi_table_points: [(f64, f64); 2],
}

impl Default for ScreenConstants {
    fn default() -> Self {
        ScreenConstants {
            alpha2_lower: 0.668,
            alpha3_approx: 0.7278,
            inv_two_c5: 1.0 / (2.0 * crate::bseries::per_root_bound(5).expect("n=5")),
            c4: root_product_bound(4).expect("n=4"),
            psi_table_points: [(0.7485, 0.67), (0.7463, 0.69)],
        }
    }
}

/// A parameter pair matching the outlier profile, with its witnessing
/// series and integer defining polynomial.
#[derive(Clone, Debug, Serialize)]
pub struct OutlierCandidate {
    /// Zero pair ordered by value (`gamma <= lambda`).
    pub params: Params,
    pub series: BSeries,
    pub simple_zero: ZeroReport,
    pub even_zero: ZeroReport,
    pub tail_case: Tail,
    /// Coefficients in `{-2..2}`; index i multiplies `x^i`.
    pub defining_polynomial: Vec<i8>,
    /// Set when the derivative-magnitude order classification was
    /// ambiguous; such candidates are kept rather than silently dropped.
    pub order_uncertain: bool,
}

/// Outcome of the constraint filters.
#[derive(Clone, Debug, Serialize)]
pub enum Constrained {
    Kept,
    Rejected(String),
}

fn zero_report(loc: f64, order: usize, sign_change: bool, residual: f64) -> ZeroReport {
    ZeroReport {
        location: loc,
        order_estimate: order,
        is_sign_change: sign_change,
        bracket_lo: loc,
        bracket_hi: loc,
        sign_lo: 0,
        sign_hi: 0,
        residual,
    }
}

/// Enumerate candidates among all finite parts of degree <= `m_max` with
/// the given tail template. Emitted candidates have one simple and one
/// even-order zero inside `(-1,1) \ {0}` with `|gamma lambda| < 1/2`,
/// `gamma != lambda`, and full-series residuals below `1e-10` at both
/// zeros. Deterministic order: by degree, then lexicographic coefficients.
pub fn enumerate_candidates(m_max: usize, tail_case: Tail) -> Result<Vec<OutlierCandidate>> {
    if m_max > M_MAX_LIMIT {
        return Err(Error::ResourceLimit(format!(
            "m_max {m_max} exceeds enumeration limit {M_MAX_LIMIT}"
        )));
    }
    if tail_case == Tail::Zero {
        return Err(Error::Precondition(
            "screening requires one of the four template tails".into(),
        ));
    }
    // Degree-d finite parts have a_d != 0, so lower degrees are not
    // revisited with trailing zeros (the tail index would differ).
    let mut out: Vec<OutlierCandidate> = Vec::new();
    for degree in 0..=m_max {
        let count = if degree == 0 {
            1usize
        } else {
            2 * 3usize.pow(degree as u32 - 1)
        };
        let mut batch: Vec<OutlierCandidate> = (0..count)
            .into_par_iter()
            .filter_map(|idx| {
                let coeffs = decode_finite_part(degree, idx);
                screen_one(&coeffs, tail_case)
            })
            .collect();
        batch.sort_by(|a, b| a.series.coeffs().cmp(b.series.coeffs()));
        out.extend(batch);
    }
    Ok(out)
}

/// Decode enumeration index into a finite part `[1, a_1, ..., a_d]` with
/// `a_d != 0`; trits little-endian over indices `1..d`, last coefficient
/// from `{1, -1}`.
fn decode_finite_part(degree: usize, idx: usize) -> Vec<i8> {
    let mut coeffs = vec![1i8];
    if degree == 0 {
        return coeffs;
    }
    let mut rest = idx;
    for _ in 1..degree {
        coeffs.push([0i8, 1, -1][rest % 3]);
        rest /= 3;
    }
    coeffs.push([1i8, -1][rest % 2]);
    coeffs
}

const ZERO_SCAN_GRID: f64 = 2e-3;
const ZERO_TOL: f64 = 1e-13;

fn screen_one(p: &[i8], tail_case: Tail) -> Option<OutlierCandidate> {
    let q = tail_polynomial(tail_case, p).ok()?;
    // Cheap rejection: an even-order zero needs a derivative sign change
    // with a small polynomial value; scan coarsely before refining.
    if !coarse_double_zero_possible(&q) {
        return None;
    }
    let zeros = int_poly_real_zeros(&q, -0.999, 0.999, ZERO_SCAN_GRID, ZERO_TOL);
    let zeros: Vec<_> = zeros.into_iter().filter(|(z, _, _)| z.abs() > 1e-9).collect();
    let simples: Vec<_> = zeros.iter().filter(|(_, o, _)| *o == 1).collect();
    let evens: Vec<_> = zeros
        .iter()
        .filter(|(_, o, sc)| !sc && o % 2 == 0)
        .collect();
    if simples.is_empty() || evens.is_empty() {
        return None;
    }
    let series = BSeries::new(p.to_vec(), tail_case).ok()?;
    for &&(s_loc, s_ord, _) in &simples {
        for &&(e_loc, e_ord, _) in &evens {
            if (s_loc - e_loc).abs() < 1e-9 {
                continue;
            }
            if trivial_region_test(s_loc, e_loc) != TrivialRegion::Nontrivial {
                continue;
            }
            let rs = series.eval(s_loc, Trunc::Infinite).ok()?.abs();
            let re = series.eval(e_loc, Trunc::Infinite).ok()?.abs();
            if rs > 1e-10 || re > 1e-10 {
                continue;
            }
            let (gamma, lambda) = if s_loc <= e_loc {
                (s_loc, e_loc)
            } else {
                (e_loc, s_loc)
            };
            // Ambiguous classification: a "simple" zero with a second
            // derivative-scale dip nearby.
            let order_uncertain = s_ord > 3 || e_ord > 4;
            return Some(OutlierCandidate {
                params: Params::new(gamma, lambda).ok()?,
                series: series.clone(),
                simple_zero: zero_report(s_loc, s_ord, true, rs),
                even_zero: zero_report(e_loc, e_ord, false, re),
                tail_case,
                defining_polynomial: q,
                order_uncertain,
            });
        }
    }
    None
}

/// Coarse pass: true when some derivative sign change sits where `|q|` is
/// small, i.e. a multiple real zero is conceivable.
fn coarse_double_zero_possible(q: &[i8]) -> bool {
    const STEPS: usize = 48;
    let scale: f64 = q.iter().map(|&c| (c as f64).abs()).sum::<f64>().max(1.0);
    let mut prev_d = eval_int_poly_derivative(q, -0.99, 1);
    for k in 1..=STEPS {
        let x = -0.99 + 1.98 * k as f64 / STEPS as f64;
        let d = eval_int_poly_derivative(q, x, 1);
        if prev_d == 0.0 || (d != 0.0 && prev_d.signum() != d.signum()) {
            // Derivative turns here; is q small anywhere near?
            let x_prev = -0.99 + 1.98 * (k - 1) as f64 / STEPS as f64;
            let vals = [
                eval_int_poly(q, x_prev),
                eval_int_poly(q, 0.5 * (x_prev + x)),
                eval_int_poly(q, x),
            ];
            if vals.iter().any(|v| v.abs() < 0.08 * scale) {
                return true;
            }
        }
        prev_d = d;
    }
    false
}

/// Apply the order and product constraints to one candidate.
///
/// Rejections:
/// * both zeros of multiplicity >= 2 in the nontrivial region;
/// * a positive ordered pair whose smaller zero is the even-order one,
///   eliminated by the fixed two-step chain on the quoted constants;
/// * a root-product infeasibility: the product of root magnitudes of the
///   defining polynomial inside `|z| <= |lambda|` falls below `C(n)`.
pub fn apply_constraints(c: &OutlierCandidate) -> Constrained {
    let consts = ScreenConstants::default();
    let (g, l) = (c.params.gamma(), c.params.lambda());
    let prod = (g * l).abs();

    if c.simple_zero.order_estimate >= 2 && c.even_zero.order_estimate >= 2 && prod < 0.5 {
        return Constrained::Rejected(
            "both zeros multiple in the nontrivial region".into(),
        );
    }
    if 0.0 < g && g < l {
        let gamma_is_even = (c.even_zero.location - g).abs() < (c.simple_zero.location - g).abs();
        if gamma_is_even {
            return Constrained::Rejected(psi_chain_trace(&consts));
        }
    }
    // Product bound on roots of the defining polynomial inside the lambda
    // disk (pole factors of the tail lie on |x| = 1, outside).
    let coeffs: Vec<f64> = c.defining_polynomial.iter().map(|&v| v as f64).collect();
    let roots = companion_roots(&coeffs);
    let radius = l.abs() + 1e-9;
    let inside: Vec<f64> = roots
        .iter()
        .map(|z| z.norm())
        .filter(|&n| n <= radius)
        .collect();
    if !inside.is_empty() {
        let product: f64 = inside.iter().product();
        let bound = root_product_bound(inside.len()).expect("n >= 1");
        if product < bound * (1.0 - 1e-9) {
            return Constrained::Rejected(format!(
                "root-product infeasible: {} roots inside |z| <= {:.4} give {:.4e} < C({}) = {:.4e}",
                inside.len(),
                radius,
                product,
                inside.len(),
                bound
            ));
        }
    }
    Constrained::Kept
}

/// The fixed two-step elimination for a positive pair whose smaller zero is
/// even-order, using only the quoted constants: each step tightens the
/// feasible window until it closes below the order-3 threshold.
fn psi_chain_trace(c: &ScreenConstants) -> String {
    let l1 = 0.5 / c.alpha2_lower;
    let g1 = c.psi_table_points[0].1;
    let l2 = 0.5 / g1;
    let g2 = c.psi_table_points[1].1;
    let l3 = 0.5 / g2;
    format!(
        "positive pair with even-order smaller zero: gamma >= {:.3} forces lambda <= {:.4}, \
         then gamma >= {:.2} forces lambda <= {:.4}, then gamma >= {:.2} forces lambda <= {:.4} \
         below alpha3 ~ {:.4}; no such pair is nontrivial",
        c.alpha2_lower, l1, g1, l2, g2, l3, c.alpha3_approx
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_match_quoted_values() {
        let c = ScreenConstants::default();
        assert_eq!(c.alpha2_lower, 0.668);
        assert!((c.c4 - 0.286).abs() < 5e-4);
        assert!((c.inv_two_c5 - 0.655).abs() < 5e-4);
        assert!(c.alpha3_approx > 1.0 / 2f64.sqrt());
    }

    #[test]
    fn tiny_enumeration_is_empty() {
        for tail in [Tail::AllPlus, Tail::AllMinus, Tail::AltPlusEven, Tail::AltMinusEven] {
            let cands = enumerate_candidates(2, tail).unwrap();
            assert!(cands.is_empty(), "unexpected candidates at m_max=2: {cands:?}");
        }
    }

    #[test]
    fn rejects_double_double() {
        let series = BSeries::new(vec![1], Tail::AllPlus).unwrap();
        let c = OutlierCandidate {
            params: Params::new(0.67, 0.70).unwrap(),
            series,
            simple_zero: zero_report(0.67, 2, false, 0.0),
            even_zero: zero_report(0.70, 2, false, 0.0),
            tail_case: Tail::AllPlus,
            defining_polynomial: vec![1, 0],
            order_uncertain: false,
        };
        match apply_constraints(&c) {
            Constrained::Rejected(r) => assert!(r.contains("both zeros multiple"), "{r}"),
            Constrained::Kept => panic!("should reject"),
        }
    }

    #[test]
    fn rejects_positive_pair_with_even_small_zero() {
        let series = BSeries::new(vec![1], Tail::AllPlus).unwrap();
        let c = OutlierCandidate {
            params: Params::new(0.69, 0.71).unwrap(),
            series,
            simple_zero: zero_report(0.71, 1, true, 0.0),
            even_zero: zero_report(0.69, 2, false, 0.0),
            tail_case: Tail::AllPlus,
            defining_polynomial: vec![1, 0],
            order_uncertain: false,
        };
        match apply_constraints(&c) {
            Constrained::Rejected(r) => assert!(r.contains("even-order smaller zero"), "{r}"),
            Constrained::Kept => panic!("should reject"),
        }
    }

    #[test]
    fn decode_covers_all_parts() {
        let mut seen = std::collections::HashSet::new();
        for idx in 0..18 {
            let c = decode_finite_part(3, idx);
            assert_eq!(c.len(), 4);
            assert_eq!(c[0], 1);
            assert_ne!(c[3], 0);
            seen.insert(c);
        }
        assert_eq!(seen.len(), 18);
    }
}
