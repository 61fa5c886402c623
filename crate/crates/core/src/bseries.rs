//! Power series `1 + sum a_n x^n` with `a_n` in `{-1, 0, 1}`: evaluation,
//! truncation, real-zero location, zero-order estimation, the unique-zero
//! probe for truncations, root-product bounds, the trivial-region test, and
//! tail-template polynomials.
//!
//! A series is stored as a finite coefficient list plus a tail template that
//! fixes every coefficient from the end of the list onward. All evaluation
//! is double precision; tails are summed in closed form.

use crate::error::{Error, Result};
use crate::roots::{bisect_to, scan_sign_changes};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Default relative threshold used when classifying the order of a zero from
/// successive derivative magnitudes.
pub const ORDER_TOL: f64 = 1e-5;

/// Residual threshold (relative to the local series bound) for accepting a
/// critical point as an even-order zero.
pub const EVEN_ZERO_RESIDUAL: f64 = 1e-8;

/// Coefficient pattern applied from the end of the explicit list onward.
/// The alternating templates are indexed by absolute coefficient parity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Tail {
    Zero,
    AllPlus,
    AllMinus,
    /// Even indices carry `+1`, odd indices `-1`.
    AltPlusEven,
    /// Even indices carry `-1`, odd indices `+1`.
    AltMinusEven,
}

impl Tail {
    fn coeff_at(self, n: usize) -> i8 {
        match self {
            Tail::Zero => 0,
            Tail::AllPlus => 1,
            Tail::AllMinus => -1,
            Tail::AltPlusEven => {
                if n % 2 == 0 {
                    1
                } else {
                    -1
                }
            }
            Tail::AltMinusEven => {
                if n % 2 == 0 {
                    -1
                } else {
                    1
                }
            }
        }
    }
}

/// Truncation degree for evaluation; `Infinite` sums the tail in closed form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Trunc {
    Degree(usize),
    Infinite,
}

/// A series `1 + sum a_n x^n`, `a_n` in `{-1, 0, 1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BSeries {
    coeffs: Vec<i8>,
    tail: Tail,
}

impl BSeries {
    pub fn new(coeffs: Vec<i8>, tail: Tail) -> Result<Self> {
        if coeffs.first() != Some(&1) {
            return Err(Error::Precondition(
                "constant coefficient must be +1".into(),
            ));
        }
        if coeffs.iter().any(|c| !(-1..=1).contains(c)) {
            return Err(Error::Precondition(
                "coefficients must lie in {-1,0,1}".into(),
            ));
        }
        Ok(BSeries { coeffs, tail })
    }

    pub fn finite(coeffs: Vec<i8>) -> Result<Self> {
        BSeries::new(coeffs, Tail::Zero)
    }

    pub fn one() -> Self {
        BSeries {
            coeffs: vec![1],
            tail: Tail::Zero,
        }
    }

    pub fn coeffs(&self) -> &[i8] {
        &self.coeffs
    }

    pub fn tail(&self) -> Tail {
        self.tail
    }

    /// Coefficient at index `n`, tail included.
    pub fn coeff(&self, n: usize) -> i8 {
        if n < self.coeffs.len() {
            self.coeffs[n]
        } else {
            self.tail.coeff_at(n)
        }
    }

    /// Degree of the explicit coefficient list (tail starts right after).
    pub fn explicit_degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_finite(&self) -> bool {
        self.tail == Tail::Zero
    }

    /// Materialize the truncation through degree `n` as a finite series.
    pub fn truncate_degree(&self, n: usize) -> BSeries {
        let coeffs = (0..=n).map(|i| self.coeff(i)).collect();
        BSeries {
            coeffs,
            tail: Tail::Zero,
        }
    }

    /// Evaluate `f` (or a truncation of it) at `x`.
    ///
    /// The full sum requires `|x| < 1` unless the tail is zero; truncations
    /// are exact Horner sums.
    pub fn eval(&self, x: f64, trunc: Trunc) -> Result<f64> {
        self.eval_derivative(x, 0, trunc)
    }

    /// `k`-th derivative of `f` (or a truncation) at `x`.
    pub fn eval_derivative(&self, x: f64, k: usize, trunc: Trunc) -> Result<f64> {
        match trunc {
            Trunc::Degree(n) => {
                let mut acc = 0.0;
                for i in (0..=n).rev() {
                    let c = self.coeff(i) as f64;
                    acc = acc * x + c * falling_factorial(i, k);
                }
                // The Horner pass above multiplies the degree-i term by x^i;
                // derivatives need x^{i-k}, so divide the whole sum once.
                if k == 0 {
                    Ok(acc)
                } else if x == 0.0 {
                    Ok(self.coeff(k) as f64 * falling_factorial(k, k))
                } else {
                    Ok(acc / x.powi(k as i32))
                }
            }
            Trunc::Infinite => {
                if self.tail != Tail::Zero && x.abs() >= 1.0 {
                    return Err(Error::Domain(format!(
                        "|x| must be < 1 for the infinite sum, got {x}"
                    )));
                }
                let head = {
                    let n = self.coeffs.len() - 1;
                    let mut acc = 0.0;
                    for i in (0..=n).rev() {
                        acc = acc * x + self.coeffs[i] as f64 * falling_factorial(i, k);
                    }
                    if k == 0 {
                        acc
                    } else if x == 0.0 {
                        if k < self.coeffs.len() {
                            self.coeffs[k] as f64 * falling_factorial(k, k)
                        } else {
                            0.0
                        }
                    } else {
                        acc / x.powi(k as i32)
                    }
                };
                Ok(head + self.tail_derivative(x, k))
            }
        }
    }

    /// Closed-form `k`-th derivative of the tail, which is `sigma x^s g(x)`
    /// with `g = 1/(1 -+ x)` and `s` the first tail index.
    fn tail_derivative(&self, x: f64, k: usize) -> f64 {
        let s = self.coeffs.len();
        let (sigma, plus_pole) = match self.tail {
            Tail::Zero => return 0.0,
            Tail::AllPlus => (1.0, false),
            Tail::AllMinus => (-1.0, false),
            // sum_{n>=s} (-1)^n x^n = (-1)^s x^s / (1+x)
            Tail::AltPlusEven => (if s % 2 == 0 { 1.0 } else { -1.0 }, true),
            Tail::AltMinusEven => (if s % 2 == 0 { -1.0 } else { 1.0 }, true),
        };
        // Leibniz over (x^s)^{(i)} g^{(k-i)}.
        let mut total = 0.0;
        for i in 0..=k.min(s) {
            let pow_part = falling_factorial(s, i) * x.powi((s - i) as i32);
            let j = k - i;
            let g_part = if plus_pole {
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                sign * factorial(j) / (1.0 + x).powi(j as i32 + 1)
            } else {
                factorial(j) / (1.0 - x).powi(j as i32 + 1)
            };
            total += binomial(k, i) * pow_part * g_part;
        }
        sigma * total
    }

    /// Upper bound for `|f^{(k)}|` valid for every member of the class at
    /// `|x| < 1`: `k! / (1 - |x|)^{k+1}`.
    pub fn derivative_bound(x: f64, k: usize) -> f64 {
        factorial(k) / (1.0 - x.abs()).powi(k as i32 + 1)
    }
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

fn falling_factorial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    ((n - k + 1)..=n).map(|i| i as f64).product()
}

fn binomial(n: usize, k: usize) -> f64 {
    factorial(n) / (factorial(k) * factorial(n - k))
}

impl fmt::Display for BSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &c in &self.coeffs {
            let ch = match c {
                1 => '+',
                -1 => '-',
                _ => '0',
            };
            write!(f, "{ch}")?;
        }
        let s = self.coeffs.len();
        let tail = match self.tail {
            Tail::Zero => "",
            Tail::AllPlus => "(+)",
            Tail::AllMinus => "(-)",
            Tail::AltPlusEven => {
                if s % 2 == 0 {
                    "(+-)"
                } else {
                    "(-+)"
                }
            }
            Tail::AltMinusEven => {
                if s % 2 == 0 {
                    "(-+)"
                } else {
                    "(+-)"
                }
            }
        };
        write!(f, "{tail}")
    }
}

impl FromStr for BSeries {
    type Err = Error;

    /// Text format: coefficient string over `{+,0,-}` followed by an optional
    /// tail token in `{"", "(+)", "(-)", "(+-)", "(-+)"}`. The alternating
    /// tokens continue periodically from the first tail index.
    fn from_str(s: &str) -> Result<Self> {
        let (coeff_part, tail_part) = match s.find('(') {
            None => (s, ""),
            Some(i) => (&s[..i], &s[i..]),
        };
        let coeffs: Vec<i8> = coeff_part
            .chars()
            .map(|c| match c {
                '+' => Ok(1),
                '-' => Ok(-1),
                '0' => Ok(0),
                other => Err(Error::Parse(format!("bad coefficient '{other}' in {s}"))),
            })
            .collect::<Result<_>>()?;
        if coeffs.is_empty() {
            return Err(Error::Parse("series needs at least the constant term".into()));
        }
        let start = coeffs.len();
        let tail = match tail_part {
            "" => Tail::Zero,
            "(+)" => Tail::AllPlus,
            "(-)" => Tail::AllMinus,
            "(+-)" => {
                if start % 2 == 0 {
                    Tail::AltPlusEven
                } else {
                    Tail::AltMinusEven
                }
            }
            "(-+)" => {
                if start % 2 == 0 {
                    Tail::AltMinusEven
                } else {
                    Tail::AltPlusEven
                }
            }
            other => return Err(Error::Parse(format!("bad tail token '{other}'"))),
        };
        BSeries::new(coeffs, tail)
    }
}

impl Serialize for BSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for BSeries {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

// ---------------------------------------------------------------------------
// Real zeros
// ---------------------------------------------------------------------------

/// A located real zero with order classification.
#[derive(Clone, Debug, Serialize)]
pub struct ZeroReport {
    pub location: f64,
    pub order_estimate: usize,
    pub is_sign_change: bool,
    pub bracket_lo: f64,
    pub bracket_hi: f64,
    pub sign_lo: i8,
    pub sign_hi: i8,
    pub residual: f64,
}

/// Estimate the order of a zero at `x0` from successive derivative
/// magnitudes, restricted to the parity implied by `sign_change`.
pub(crate) fn estimate_order(
    f: &BSeries,
    x0: f64,
    trunc: Trunc,
    sign_change: bool,
    order_tol: f64,
) -> usize {
    const MAX_ORDER: usize = 9;
    let start = if sign_change { 1 } else { 2 };
    let mut j = start;
    while j <= MAX_ORDER {
        let d = f.eval_derivative(x0, j, trunc).unwrap_or(f64::NAN).abs();
        if d > order_tol * BSeries::derivative_bound(x0, j) {
            return j;
        }
        j += 2;
    }
    if sign_change {
        MAX_ORDER
    } else {
        MAX_ORDER - 1
    }
}

/// Locate real zeros of `f` (at truncation `trunc`) inside `[a, b]` by
/// sign-change bracketing on a grid, bisected to `tol`. A second pass over
/// zeros of the derivative detects even-order zeros where `|f|` falls below
/// a residual threshold. May miss even-order zeros between grid points.
pub fn find_real_zeros(
    f: &BSeries,
    trunc: Trunc,
    interval: (f64, f64),
    grid: f64,
    tol: f64,
) -> Result<Vec<ZeroReport>> {
    let (a, b) = interval;
    if !(a < b) {
        return Err(Error::Precondition(format!("empty interval [{a}, {b}]")));
    }
    if a <= -1.0 || b >= 1.0 {
        return Err(Error::Precondition("interval must sit inside (-1, 1)".into()));
    }
    if grid > (b - a) / 8.0 {
        return Err(Error::Precondition(
            "grid must not exceed an eighth of the interval".into(),
        ));
    }
    let g = |x: f64| f.eval(x, trunc).unwrap_or(f64::NAN);
    let dg = |x: f64| f.eval_derivative(x, 1, trunc).unwrap_or(f64::NAN);
    // An exact zero on a grid point can masquerade as a sign change;
    // classify from the signs just outside the located zero.
    let h = (grid / 4.0).max(16.0 * tol);
    let crosses = |z: f64| g(z - h) * g(z + h) < 0.0;

    let mut reports = Vec::new();
    for (lo, hi) in scan_sign_changes(&g, a, b, grid) {
        let mut loc = bisect_to(&g, lo, hi, tol);
        // No member of the class vanishes inside (-1/2, 1/2); push the
        // midpoint out of that band if rounding left it just inside.
        let mut extra = 0;
        let (mut l2, mut h2) = (lo, hi);
        while loc.abs() < 0.5 && extra < 200 && l2 < h2 {
            if g(l2).signum() == g(loc).signum() {
                l2 = loc;
            } else {
                h2 = loc;
            }
            loc = 0.5 * (l2 + h2);
            extra += 1;
        }
        let sc = crosses(loc);
        let order = estimate_order(f, loc, trunc, sc, ORDER_TOL);
        reports.push(ZeroReport {
            location: loc,
            order_estimate: order,
            is_sign_change: sc,
            bracket_lo: lo,
            bracket_hi: hi,
            sign_lo: g(lo).signum() as i8,
            sign_hi: g(hi).signum() as i8,
            residual: g(loc).abs(),
        });
    }
    // Even-order zeros sit at critical points with tiny residual.
    for (lo, hi) in scan_sign_changes(&dg, a, b, grid) {
        let c = bisect_to(&dg, lo, hi, tol);
        let resid = g(c).abs();
        if resid < EVEN_ZERO_RESIDUAL / (1.0 - c.abs())
            && !reports
                .iter()
                .any(|r| (r.location - c).abs() < 4.0 * tol.max(h))
        {
            let sc = crosses(c);
            let order = estimate_order(f, c, trunc, sc, ORDER_TOL);
            reports.push(ZeroReport {
                location: c,
                order_estimate: order,
                is_sign_change: sc,
                bracket_lo: lo,
                bracket_hi: hi,
                sign_lo: g(lo).signum() as i8,
                sign_hi: g(hi).signum() as i8,
                residual: resid,
            });
        }
    }
    reports.sort_by(|p, q| p.location.total_cmp(&q.location));
    debug_assert!(reports.iter().all(|r| r.location.abs() >= 0.5));
    Ok(reports)
}

// ---------------------------------------------------------------------------
// Unique-zero probe for truncations
// ---------------------------------------------------------------------------

/// Witness for a probe failure: a truncation whose zero structure near the
/// probed zero is not a single zero free of other critical points.
#[derive(Clone, Debug, Serialize)]
pub struct ProbeWitness {
    pub eps: f64,
    pub degree: usize,
    pub zeros: Vec<f64>,
    pub critical_points: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub enum ProbeVerdict {
    /// Every scheduled radius stabilized: beyond the recorded threshold all
    /// truncations have exactly one zero and no stray critical point.
    HoldsUpToNMax { thresholds: Vec<(f64, usize)> },
    /// The smallest scheduled radius still fails at the deepest truncation.
    FailsWithWitness(ProbeWitness),
    /// Mixed or unstably late behavior; no verdict is forced.
    Inconclusive,
}

enum EpsOutcome {
    Holds(usize),
    Fails(ProbeWitness),
    Borderline,
}

/// Probe whether truncations of `f` eventually have a unique zero (and no
/// other critical point) in shrinking intervals around a verified zero.
///
/// A finite verdict, not a proof: `holds` means stabilization was observed
/// at every radius in the schedule up to degree `n_max`. Failures at a
/// larger radius combined with success at smaller ones are flagged as
/// inconclusive rather than decided.
pub fn property_u_probe(
    f: &BSeries,
    zero: f64,
    eps_schedule: &[f64],
    n_max: usize,
) -> Result<ProbeVerdict> {
    let resid = f.eval(zero, Trunc::Infinite)?.abs();
    if resid > 1e-7 / (1.0 - zero.abs()) {
        return Err(Error::Precondition(format!(
            "not a verified zero: residual {resid:.3e} at {zero}"
        )));
    }
    if n_max == 0 || eps_schedule.is_empty() {
        return Ok(ProbeVerdict::Inconclusive);
    }

    const GRID_POINTS: usize = 256;
    const STABLE_RUN: usize = 8;
    let mut outcomes = Vec::with_capacity(eps_schedule.len());
    for &eps in eps_schedule {
        let lo = (zero - eps).max(-0.999_999);
        let hi = (zero + eps).min(0.999_999);
        let xs: Vec<f64> = (0..=GRID_POINTS)
            .map(|i| lo + (hi - lo) * i as f64 / GRID_POINTS as f64)
            .collect();
        // Incremental truncation values: adding degree n contributes
        // a_n x^n to f and n a_n x^{n-1} to f'.
        let mut vals = vec![0.0f64; xs.len()];
        let mut dvals = vec![0.0f64; xs.len()];
        let mut pow_n = vec![1.0f64; xs.len()];
        let mut pow_nm1 = vec![1.0f64; xs.len()];
        let mut cond = Vec::with_capacity(n_max + 1);
        for n in 0..=n_max {
            let c = f.coeff(n) as f64;
            if c != 0.0 {
                for i in 0..xs.len() {
                    vals[i] += c * pow_n[i];
                    if n >= 1 {
                        dvals[i] += c * n as f64 * pow_nm1[i];
                    }
                }
            }
            for (i, &x) in xs.iter().enumerate() {
                pow_nm1[i] = pow_n[i];
                pow_n[i] *= x;
            }
            cond.push(truncation_condition(&xs, &vals, &dvals, eps));
        }
        // Longest true suffix of the condition sequence.
        let mut n_star = n_max + 1;
        for n in (0..=n_max).rev() {
            if cond[n].is_none() {
                n_star = n;
            } else {
                break;
            }
        }
        if n_star == n_max + 1 {
            let (zeros, critical_points) = cond[n_max].clone().unwrap();
            outcomes.push(EpsOutcome::Fails(ProbeWitness {
                eps,
                degree: n_max,
                zeros,
                critical_points,
            }));
        } else if n_max - n_star < STABLE_RUN {
            outcomes.push(EpsOutcome::Borderline);
        } else {
            outcomes.push(EpsOutcome::Holds(n_star));
        }
    }

    // Decide: a definitive failure must persist at the smallest radius;
    // a large-radius failure alongside small-radius success is borderline.
    let last = outcomes.last().unwrap();
    if let EpsOutcome::Fails(w) = last {
        return Ok(ProbeVerdict::FailsWithWitness(w.clone()));
    }
    if outcomes.iter().all(|o| matches!(o, EpsOutcome::Holds(_))) {
        let thresholds = eps_schedule
            .iter()
            .zip(&outcomes)
            .map(|(&e, o)| match o {
                EpsOutcome::Holds(n) => (e, *n),
                _ => unreachable!(),
            })
            .collect();
        return Ok(ProbeVerdict::HoldsUpToNMax { thresholds });
    }
    Ok(ProbeVerdict::Inconclusive)
}

/// `None` when the truncation sampled on `xs` has exactly one zero and no
/// stray critical point; otherwise the offending locations.
#[allow(clippy::type_complexity)]
fn truncation_condition(
    xs: &[f64],
    vals: &[f64],
    dvals: &[f64],
    eps: f64,
) -> Option<(Vec<f64>, Vec<f64>)> {
    let mut zeros = Vec::new();
    let mut crits = Vec::new();
    for i in 0..xs.len() - 1 {
        if vals[i] == 0.0 || vals[i].signum() != vals[i + 1].signum() {
            zeros.push(0.5 * (xs[i] + xs[i + 1]));
        }
        if dvals[i] == 0.0 || dvals[i].signum() != dvals[i + 1].signum() {
            crits.push(0.5 * (xs[i] + xs[i + 1]));
        }
    }
    let coincide = eps / 16.0;
    let stray: Vec<f64> = crits
        .iter()
        .copied()
        .filter(|c| !(zeros.len() == 1 && (c - zeros[0]).abs() <= coincide))
        .collect();
    if zeros.len() == 1 && stray.is_empty() {
        None
    } else {
        Some((zeros, stray))
    }
}

// ---------------------------------------------------------------------------
// Root-product bounds
// ---------------------------------------------------------------------------

/// Lower bound `C(n) = (1 + 1/n)^{-n/2} (1 + n)^{-1/2}` for the product of
/// the magnitudes of `n` roots near the origin.
pub fn root_product_bound(n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("n must be positive".into()));
    }
    let nf = n as f64;
    Ok((1.0 + 1.0 / nf).powf(-nf / 2.0) * (1.0 + nf).powf(-0.5))
}

/// Per-root bound `D(n) = C(n)^{1/n}`, strictly increasing in `n`.
pub fn per_root_bound(n: usize) -> Result<f64> {
    Ok(root_product_bound(n)?.powf(1.0 / n as f64))
}

// ---------------------------------------------------------------------------
// Trivial region
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TrivialRegion {
    TrivialN,
    Nontrivial,
    OutOfDomain,
}

/// Classify raw coordinates against the region `1/2 <= |gamma lambda| < 1`
/// where connectedness follows from the volume argument.
pub fn trivial_region_test(gamma: f64, lambda: f64) -> TrivialRegion {
    if !gamma.is_finite() || !lambda.is_finite() || gamma.abs() >= 1.0 || lambda.abs() >= 1.0 {
        return TrivialRegion::OutOfDomain;
    }
    let p = (gamma * lambda).abs();
    if p >= 0.5 {
        TrivialRegion::TrivialN
    } else {
        TrivialRegion::Nontrivial
    }
}

// ---------------------------------------------------------------------------
// Anti-diagonal reduction
// ---------------------------------------------------------------------------

/// Even-part series `g(y) = 1 + sum a_{2n} y^n`. If `f(t) = f(-t) = 0` then
/// `g(t^2) = 0`, forcing `t^2 >= 1/2`.
pub fn antidiagonal_reduce(f: &BSeries) -> BSeries {
    let s = f.coeffs().len();
    let k = s.div_ceil(2);
    let coeffs: Vec<i8> = (0..k).map(|i| f.coeff(2 * i)).collect();
    let tail = match f.tail() {
        Tail::Zero => Tail::Zero,
        Tail::AllPlus | Tail::AltPlusEven => Tail::AllPlus,
        Tail::AllMinus | Tail::AltMinusEven => Tail::AllMinus,
    };
    BSeries::new(coeffs, tail).expect("even part keeps the constant term")
}

// ---------------------------------------------------------------------------
// Tail-template polynomials
// ---------------------------------------------------------------------------

/// Integer polynomial (coefficients in `{-2..2}`) whose real zeros inside
/// `(-1, 1)` are exactly the zeros of the series `p + tail`:
///
/// * all-plus tail:  `(1-x) p(x) + x^{m+1}`
/// * all-minus tail: `(1-x) p(x) - x^{m+1}`
/// * alternating tails: `(1+x) p(x) +- x^{m+1}` with the sign `(-1)^{m+1}`
///   for the even-plus template and `(-1)^m` for the even-minus one, from
///   summing `sum_{n>m} (+-1)^n x^n` as a geometric series.
pub fn tail_polynomial(tail: Tail, p: &[i8]) -> Result<Vec<i8>> {
    if p.first() != Some(&1) {
        return Err(Error::Precondition("constant term must be +1".into()));
    }
    if p.iter().any(|c| !(-1..=1).contains(c)) {
        return Err(Error::Precondition("coefficients must lie in {-1,0,1}".into()));
    }
    let m = p.len() - 1;
    let sign_m1: i8 = if (m + 1) % 2 == 0 { 1 } else { -1 };
    let (mult, x_sign): (i8, i8) = match tail {
        Tail::Zero => return Ok(p.to_vec()),
        Tail::AllPlus => (-1, 1),
        Tail::AllMinus => (-1, -1),
        Tail::AltPlusEven => (1, sign_m1),
        Tail::AltMinusEven => (1, -sign_m1),
    };
    // (1 + mult*x) * p + x_sign * x^{m+1}
    let mut q = vec![0i8; m + 2];
    for (i, &c) in p.iter().enumerate() {
        q[i] += c;
        q[i + 1] += mult * c;
    }
    q[m + 1] += x_sign;
    debug_assert!(q.iter().all(|c| (-2..=2).contains(c)));
    Ok(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn golden() -> BSeries {
        BSeries::finite(vec![1, -1, -1]).unwrap()
    }

    #[test]
    fn eval_constant_and_tails() {
        let one = BSeries::one();
        assert_eq!(one.eval(0.3, Trunc::Infinite).unwrap(), 1.0);
        assert_eq!(one.eval(-0.9, Trunc::Infinite).unwrap(), 1.0);

        // 1 + x + x^2 + ... = 1/(1-x)
        let allp = BSeries::new(vec![1], Tail::AllPlus).unwrap();
        assert!((allp.eval(0.5, Trunc::Infinite).unwrap() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn eval_golden_zero() {
        let x = (5f64.sqrt() - 1.0) / 2.0;
        assert!(golden().eval(x, Trunc::Infinite).unwrap().abs() < 1e-12);
    }

    #[test]
    fn infinite_eval_rejects_unit_argument() {
        let allp = BSeries::new(vec![1], Tail::AllPlus).unwrap();
        assert!(allp.eval(1.0, Trunc::Infinite).is_err());
        // A finite series is a polynomial and evaluates anywhere.
        assert!(golden().eval(1.0, Trunc::Infinite).is_ok());
    }

    #[test]
    fn tail_closed_forms_match_partial_sums() {
        for tail in [Tail::AllPlus, Tail::AllMinus, Tail::AltPlusEven, Tail::AltMinusEven] {
            for coeffs in [vec![1], vec![1, 0, -1], vec![1, 1, -1, 0, 1]] {
                let f = BSeries::new(coeffs, tail).unwrap();
                for x in [-0.93f64, -0.4, 0.37, 0.88] {
                    let closed = f.eval(x, Trunc::Infinite).unwrap();
                    let brute: f64 = (0..4000).map(|n| f.coeff(n) as f64 * x.powi(n as i32)).sum();
                    assert!(
                        (closed - brute).abs() < 1e-11,
                        "{f} at {x}: {closed} vs {brute}"
                    );
                }
            }
        }
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let f = BSeries::new(vec![1, -1, 0, 1], Tail::AltPlusEven).unwrap();
        let x = 0.42;
        let h = 1e-6;
        let fd = (f.eval(x + h, Trunc::Infinite).unwrap() - f.eval(x - h, Trunc::Infinite).unwrap())
            / (2.0 * h);
        let an = f.eval_derivative(x, 1, Trunc::Infinite).unwrap();
        assert!((fd - an).abs() < 1e-6, "{fd} vs {an}");
        let fd2 = (f.eval_derivative(x + h, 1, Trunc::Infinite).unwrap()
            - f.eval_derivative(x - h, 1, Trunc::Infinite).unwrap())
            / (2.0 * h);
        let an2 = f.eval_derivative(x, 2, Trunc::Infinite).unwrap();
        assert!((fd2 - an2).abs() < 1e-5, "{fd2} vs {an2}");
    }

    #[test]
    fn truncation_is_prefix_sum() {
        let f = BSeries::new(vec![1, -1], Tail::AllPlus).unwrap();
        let x: f64 = 0.7;
        let direct: f64 = (0..=5).map(|n| f.coeff(n) as f64 * x.powi(n as i32)).sum();
        assert!((f.eval(x, Trunc::Degree(5)).unwrap() - direct).abs() < 1e-14);
    }

    #[test]
    fn find_golden_zero() {
        let zs = find_real_zeros(&golden(), Trunc::Infinite, (0.0, 0.99), 1e-3, 1e-12).unwrap();
        assert_eq!(zs.len(), 1);
        let z = &zs[0];
        assert!((z.location - 0.618_033_988_749_895).abs() < 1e-9);
        assert!(z.is_sign_change);
        assert_eq!(z.order_estimate, 1);
        assert!(z.bracket_lo < z.location && z.location < z.bracket_hi);
    }

    #[test]
    fn constant_series_has_no_zeros() {
        let zs =
            find_real_zeros(&BSeries::one(), Trunc::Infinite, (-0.99, 0.99), 1e-3, 1e-12).unwrap();
        assert!(zs.is_empty());
    }

    #[test]
    fn probe_simple_zero_holds() {
        let v = property_u_probe(&golden(), 0.618_033_988_749_895, &[1e-2, 1e-3, 1e-4], 60)
            .unwrap();
        assert!(matches!(v, ProbeVerdict::HoldsUpToNMax { .. }), "{v:?}");
    }

    #[test]
    fn probe_zero_budget_is_inconclusive() {
        let v = property_u_probe(&golden(), 0.618_033_988_749_895, &[1e-2], 0).unwrap();
        assert!(matches!(v, ProbeVerdict::Inconclusive));
    }

    #[test]
    fn probe_rejects_unverified_zero() {
        assert!(property_u_probe(&golden(), 0.3, &[1e-2], 50).is_err());
    }

    #[test]
    fn product_bounds() {
        assert!((root_product_bound(1).unwrap() - 0.5).abs() < 1e-15);
        assert!((root_product_bound(4).unwrap() - 0.286).abs() < 5e-4);
        let d5 = per_root_bound(5).unwrap();
        assert!((1.0 / (2.0 * d5) - 0.655).abs() < 5e-4);
    }

    #[test]
    fn per_root_bound_increasing() {
        let mut prev = 0.0;
        for n in 1..=64 {
            let d = per_root_bound(n).unwrap();
            assert!(d > prev, "D({n}) = {d} not above {prev}");
            prev = d;
        }
    }

    #[test]
    fn trivial_region_cases() {
        assert_eq!(trivial_region_test(0.8, 0.7), TrivialRegion::TrivialN);
        assert_eq!(trivial_region_test(0.6, 0.6), TrivialRegion::Nontrivial);
        assert_eq!(trivial_region_test(1.0, 0.4), TrivialRegion::OutOfDomain);
        assert_eq!(trivial_region_test(-0.8, 0.7), TrivialRegion::TrivialN);
    }

    #[test]
    fn antidiagonal_even_part() {
        // Coefficients [1, -1] then even +1 / odd -1: even part is all-plus.
        let f = BSeries::new(vec![1, -1], Tail::AltPlusEven).unwrap();
        let g = antidiagonal_reduce(&f);
        assert_eq!(g.tail(), Tail::AllPlus);
        for y in [0.1, 0.35, 0.8] {
            let lhs = g.eval(y, Trunc::Infinite).unwrap();
            let t = y.sqrt();
            let rhs = 0.5
                * (f.eval(t, Trunc::Infinite).unwrap() + f.eval(-t, Trunc::Infinite).unwrap());
            assert!((lhs - rhs).abs() < 1e-12);
        }
        // All-plus even part never vanishes on (0, 1).
        let zs = find_real_zeros(&g, Trunc::Infinite, (0.001, 0.99), 1e-3, 1e-12).unwrap();
        assert!(zs.iter().all(|z| z.location < 0.0));
    }

    #[test]
    fn antidiagonal_boundary_case() {
        // 1 - x^2 reduces to 1 - y with its zero at the excluded boundary.
        let f = BSeries::finite(vec![1, 0, -1]).unwrap();
        let g = antidiagonal_reduce(&f);
        assert_eq!(g.coeffs(), &[1, -1]);
        let zs = find_real_zeros(&g, Trunc::Infinite, (-0.99, 0.99), 1e-3, 1e-12).unwrap();
        assert!(zs.is_empty());
    }

    #[test]
    fn tail_polynomial_examples() {
        // p = 1, all-plus: (1-x) + x = 1.
        let q = tail_polynomial(Tail::AllPlus, &[1]).unwrap();
        assert_eq!(q, vec![1, 0]);
        // p = 1 - x, all-plus: 1 - 2x + 2x^2, negative discriminant.
        let q = tail_polynomial(Tail::AllPlus, &[1, -1]).unwrap();
        assert_eq!(q, vec![1, -2, 2]);
    }

    #[test]
    fn series_text_format() {
        let f: BSeries = "+-0-(+)".parse().unwrap();
        assert_eq!(f.coeffs(), &[1, -1, 0, -1]);
        assert_eq!(f.tail(), Tail::AllPlus);
        assert_eq!(f.coeff(4), 1);
        assert_eq!(f.to_string(), "+-0-(+)");

        let g: BSeries = "+0(+-)".parse().unwrap();
        // Tail starts at index 2 (even) with '+', so even indices carry +1.
        assert_eq!(g.tail(), Tail::AltPlusEven);
        assert_eq!(g.coeff(2), 1);
        assert_eq!(g.coeff(3), -1);
        assert_eq!(g.to_string(), "+0(+-)");

        let h: BSeries = "+0-(+-)".parse().unwrap();
        // Tail starts at index 3 (odd) with '+', so odd indices carry +1.
        assert_eq!(h.tail(), Tail::AltMinusEven);
        assert_eq!(h.coeff(3), 1);
        assert_eq!(h.coeff(4), -1);
        assert_eq!(h.to_string(), "+0-(+-)");

        assert!("0+".parse::<BSeries>().is_err());
        assert!("+-(x)".parse::<BSeries>().is_err());
    }
}
