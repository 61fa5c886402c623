//! Parameters, symbolic words, the address map, cylinder translation
//! vectors, and attractor sampling for the planar pair of contractions
//!
//! ```text
//! p(x) = T x + (1, 1),    m(x) = T x - (1, 1),    T = diag(gamma, lambda).
//! ```
//!
//! Words over the alphabet `{p, m}` address points of the attractor through
//! the map `pi(w) = sum_{i>=0} w_i T^i (1,1)` with `p -> +1`, `m -> -1`;
//! the first letter carries index 0, so `pi(p^inf)` is the fixed point of
//! `p`. Finite and eventually periodic words are evaluated in closed form.

use crate::bseries::{BSeries, Tail};
use crate::error::{Error, Result};
use crate::geom::PlanePoint;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Hard cap for the exact sampler; `2^depth` points are materialized.
pub const MAX_SAMPLE_DEPTH: usize = 20;

// ---------------------------------------------------------------------------
// Parameters
// ---------------------------------------------------------------------------

/// A parameter pair `(gamma, lambda)` with both entries strictly inside
/// `(-1, 1)`, inducing the diagonal contraction `T = diag(gamma, lambda)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Params {
    gamma: f64,
    lambda: f64,
}

impl Params {
    pub fn new(gamma: f64, lambda: f64) -> Result<Self> {
        if !gamma.is_finite() || !lambda.is_finite() || gamma.abs() >= 1.0 || lambda.abs() >= 1.0 {
            return Err(Error::Domain(format!(
                "parameters must lie strictly inside (-1,1), got ({gamma}, {lambda})"
            )));
        }
        Ok(Params { gamma, lambda })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Contraction factor `L = max(|gamma|, |lambda|) < 1`; equals the norm
    /// of the pair of maps since `T` is diagonal.
    pub fn l_factor(&self) -> f64 {
        self.gamma.abs().max(self.lambda.abs())
    }

    /// Most statements about the pair require `gamma != lambda`.
    pub fn on_diagonal(&self) -> bool {
        self.gamma == self.lambda
    }

    /// `T x` componentwise.
    pub fn apply_t(&self, p: PlanePoint) -> PlanePoint {
        PlanePoint::new(self.gamma * p.x, self.lambda * p.y)
    }

    /// Coordinatewise bound of the attractor: `|x| <= 1/(1-|gamma|)`,
    /// `|y| <= 1/(1-|lambda|)`.
    pub fn extent(&self) -> PlanePoint {
        PlanePoint::new(
            1.0 / (1.0 - self.gamma.abs()),
            1.0 / (1.0 - self.lambda.abs()),
        )
    }

    /// Euclidean bound on the distance from any attractor point to its
    /// depth-`depth` cylinder representative.
    pub fn truncation_radius(&self, depth: usize) -> f64 {
        let gx = self.gamma.abs().powi(depth as i32) / (1.0 - self.gamma.abs());
        let gy = self.lambda.abs().powi(depth as i32) / (1.0 - self.lambda.abs());
        gx.hypot(gy)
    }

    /// Swap the two coordinates.
    pub fn swapped(&self) -> Params {
        Params {
            gamma: self.lambda,
            lambda: self.gamma,
        }
    }

    /// Flip the sign of both coordinates. The attractor is the same point
    /// set; addresses transform by flipping every odd-indexed letter.
    pub fn negated(&self) -> Params {
        Params {
            gamma: -self.gamma,
            lambda: -self.lambda,
        }
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.gamma, self.lambda)
    }
}

impl FromStr for Params {
    type Err = Error;

    /// Text format: `"gamma,lambda"` in decimal.
    fn from_str(s: &str) -> Result<Self> {
        let mut it = s.split(',');
        let g = it
            .next()
            .ok_or_else(|| Error::Parse(format!("bad params: {s}")))?;
        let l = it
            .next()
            .ok_or_else(|| Error::Parse(format!("bad params: {s}")))?;
        if it.next().is_some() {
            return Err(Error::Parse(format!("bad params: {s}")));
        }
        let g: f64 = g
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad number in params: {s}")))?;
        let l: f64 = l
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad number in params: {s}")))?;
        Params::new(g, l)
    }
}

// ---------------------------------------------------------------------------
// Letters and words
// ---------------------------------------------------------------------------

/// One letter of the two-map alphabet; `P` carries coefficient `+1`,
/// `M` carries `-1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Letter {
    P,
    M,
}

impl Letter {
    pub fn coeff(self) -> f64 {
        match self {
            Letter::P => 1.0,
            Letter::M => -1.0,
        }
    }

    pub fn flip(self) -> Letter {
        match self {
            Letter::P => Letter::M,
            Letter::M => Letter::P,
        }
    }

    fn ch(self) -> char {
        match self {
            Letter::P => 'p',
            Letter::M => 'm',
        }
    }
}

/// A finite or eventually periodic word over `{p, m}`.
///
/// An empty `period` denotes a finite word; a nonempty one denotes the
/// infinite word `preperiod . period period ...`. Construction canonicalizes:
/// the period is primitive and as much of the preperiod as possible is
/// absorbed into the periodic part, so structural equality decides word
/// equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SignedWord {
    preperiod: Vec<Letter>,
    period: Vec<Letter>,
}

impl SignedWord {
    pub fn finite(letters: &[Letter]) -> SignedWord {
        SignedWord {
            preperiod: letters.to_vec(),
            period: Vec::new(),
        }
    }

    pub fn eventually_periodic(preperiod: &[Letter], period: &[Letter]) -> Result<SignedWord> {
        if period.is_empty() {
            return Err(Error::InvalidWord("period must be nonempty".into()));
        }
        let mut w = SignedWord {
            preperiod: preperiod.to_vec(),
            period: period.to_vec(),
        };
        w.canonicalize();
        Ok(w)
    }

    /// The constant word `letter^inf`.
    pub fn constant(letter: Letter) -> SignedWord {
        SignedWord {
            preperiod: Vec::new(),
            period: vec![letter],
        }
    }

    fn canonicalize(&mut self) {
        if self.period.is_empty() {
            return;
        }
        // Reduce the period to its primitive root.
        let n = self.period.len();
        for d in 1..n {
            if n % d == 0 && (0..n).all(|i| self.period[i] == self.period[i % d]) {
                self.period.truncate(d);
                break;
            }
        }
        // Absorb preperiod letters that match the rotating period tail.
        while let Some(&last) = self.preperiod.last() {
            if last == *self.period.last().unwrap() {
                self.preperiod.pop();
                let tail = self.period.pop().unwrap();
                self.period.insert(0, tail);
            } else {
                break;
            }
        }
    }

    pub fn is_finite(&self) -> bool {
        self.period.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.preperiod.is_empty() && self.period.is_empty()
    }

    /// Length of a finite word; `None` for infinite words.
    pub fn finite_len(&self) -> Option<usize> {
        self.is_finite().then_some(self.preperiod.len())
    }

    pub fn preperiod(&self) -> &[Letter] {
        &self.preperiod
    }

    pub fn period(&self) -> &[Letter] {
        &self.period
    }

    /// Letter at position `i`; `None` past the end of a finite word.
    pub fn letter_at(&self, i: usize) -> Option<Letter> {
        if i < self.preperiod.len() {
            Some(self.preperiod[i])
        } else if self.period.is_empty() {
            None
        } else {
            Some(self.period[(i - self.preperiod.len()) % self.period.len()])
        }
    }

    /// First `m` letters as a finite word.
    pub fn truncate(&self, m: usize) -> Result<SignedWord> {
        let mut letters = Vec::with_capacity(m);
        for i in 0..m {
            letters.push(self.letter_at(i).ok_or_else(|| {
                Error::InvalidWord(format!("word has fewer than {m} letters"))
            })?);
        }
        Ok(SignedWord::finite(&letters))
    }

    /// Letterwise negation `p <-> m`.
    pub fn negate(&self) -> SignedWord {
        let mut w = SignedWord {
            preperiod: self.preperiod.iter().map(|l| l.flip()).collect(),
            period: self.period.iter().map(|l| l.flip()).collect(),
        };
        w.canonicalize();
        w
    }

    /// Flip every letter at an odd position. Addresses transform this way
    /// when both parameters change sign.
    pub fn alternate(&self) -> SignedWord {
        let flip_at = |l: Letter, i: usize| if i % 2 == 1 { l.flip() } else { l };
        let pre: Vec<Letter> = self
            .preperiod
            .iter()
            .enumerate()
            .map(|(i, &l)| flip_at(l, i))
            .collect();
        if self.period.is_empty() {
            return SignedWord::finite(&pre);
        }
        // An odd period needs doubling before the parity flip repeats.
        let mut per = self.period.clone();
        if per.len() % 2 == 1 {
            per.extend_from_slice(&self.period);
        }
        let phase = self.preperiod.len();
        let per: Vec<Letter> = per
            .iter()
            .enumerate()
            .map(|(j, &l)| flip_at(l, phase + j))
            .collect();
        let mut w = SignedWord {
            preperiod: pre,
            period: per,
        };
        w.canonicalize();
        w
    }

    /// One-letter prepend `a . w`.
    pub fn prepend(&self, letter: Letter) -> SignedWord {
        let mut pre = Vec::with_capacity(self.preperiod.len() + 1);
        pre.push(letter);
        pre.extend_from_slice(&self.preperiod);
        let mut w = SignedWord {
            preperiod: pre,
            period: self.period.clone(),
        };
        w.canonicalize();
        w
    }
}

impl fmt::Display for SignedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.preperiod {
            write!(f, "{}", l.ch())?;
        }
        if !self.period.is_empty() {
            write!(f, "(")?;
            for l in &self.period {
                write!(f, "{}", l.ch())?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl FromStr for SignedWord {
    type Err = Error;

    /// Text format: letters over `{p, m}` with an optional parenthesized
    /// period, e.g. `"mp(m)"` or `"(mp)"`.
    fn from_str(s: &str) -> Result<Self> {
        let parse_letters = |part: &str| -> Result<Vec<Letter>> {
            part.chars()
                .map(|c| match c {
                    'p' => Ok(Letter::P),
                    'm' => Ok(Letter::M),
                    other => Err(Error::Parse(format!("bad letter '{other}' in word: {s}"))),
                })
                .collect()
        };
        match s.find('(') {
            None => Ok(SignedWord::finite(&parse_letters(s)?)),
            Some(open) => {
                if !s.ends_with(')') {
                    return Err(Error::Parse(format!("unterminated period in word: {s}")));
                }
                let pre = parse_letters(&s[..open])?;
                let per = parse_letters(&s[open + 1..s.len() - 1])?;
                SignedWord::eventually_periodic(&pre, &per)
            }
        }
    }
}

impl Serialize for SignedWord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for SignedWord {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

// ---------------------------------------------------------------------------
// Address map and cylinder offsets
// ---------------------------------------------------------------------------

fn partial_sum(letters: &[Letter], params: &Params) -> PlanePoint {
    // Evaluate sum c_i x^i back to front, one fused pass per coordinate.
    let mut x = 0.0;
    let mut y = 0.0;
    for &l in letters.iter().rev() {
        let c = l.coeff();
        x = x * params.gamma + c;
        y = y * params.lambda + c;
    }
    PlanePoint::new(x, y)
}

/// Evaluate the address map `pi(w) = sum_{i>=0} w_i T^i (1,1)`.
///
/// Eventually periodic words are evaluated in closed form (finite prefix sum
/// plus a geometric tail), exact up to rounding. A finite word is evaluated
/// as its partial sum and requires `depth >= length`.
pub fn eval_address(w: &SignedWord, params: &Params, depth: usize) -> Result<PlanePoint> {
    if w.is_empty() {
        return Err(Error::InvalidWord("word must have at least one letter".into()));
    }
    if w.is_finite() {
        let len = w.preperiod.len();
        if depth < len {
            return Err(Error::Precondition(format!(
                "depth {depth} below finite word length {len}"
            )));
        }
        return Ok(partial_sum(&w.preperiod, params));
    }
    let head = partial_sum(&w.preperiod, params);
    let per = partial_sum(&w.period, params);
    let k = w.period.len() as i32;
    let rho = w.preperiod.len() as i32;
    let tail_x = params.gamma.powi(rho) * per.x / (1.0 - params.gamma.powi(k));
    let tail_y = params.lambda.powi(rho) * per.y / (1.0 - params.lambda.powi(k));
    Ok(PlanePoint::new(head.x + tail_x, head.y + tail_y))
}

/// Translation vector `s_u` of the cylinder `u A = T^{|u|} A + s_u`.
pub fn cylinder_offset(u: &SignedWord, params: &Params) -> Result<PlanePoint> {
    match u.finite_len() {
        None => Err(Error::InvalidWord("cylinder word must be finite".into())),
        Some(0) => Err(Error::InvalidWord("cylinder word must be nonempty".into())),
        Some(_) => Ok(partial_sum(&u.preperiod, params)),
    }
}

/// Normalized translation vector `w = T^{-m} (s_u - s_v)` for equal-length
/// words `u, v` that differ in their first letter, so that
/// `u A = v A + T^m w`.
pub fn normalized_translation(
    u: &SignedWord,
    v: &SignedWord,
    params: &Params,
) -> Result<PlanePoint> {
    let (Some(nu), Some(nv)) = (u.finite_len(), v.finite_len()) else {
        return Err(Error::InvalidWord("words must be finite".into()));
    };
    if nu != nv {
        return Err(Error::LengthMismatch(nu, nv));
    }
    if nu == 0 {
        return Err(Error::InvalidWord("words must be nonempty".into()));
    }
    if u.preperiod[0] == v.preperiod[0] {
        return Err(Error::SharedPrefix);
    }
    if params.gamma == 0.0 || params.lambda == 0.0 {
        return Err(Error::Domain("T is singular when gamma or lambda is 0".into()));
    }
    let su = partial_sum(&u.preperiod, params);
    let sv = partial_sum(&v.preperiod, params);
    let m = nu as i32;
    Ok(PlanePoint::new(
        (su.x - sv.x) / params.gamma.powi(m),
        (su.y - sv.y) / params.lambda.powi(m),
    ))
}

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

/// One representative `s_u` per cylinder of order `depth`, in lexicographic
/// word order with `p < m`. Every attractor point lies within
/// `truncation_radius(depth)` of the returned set.
pub fn attractor_sample(params: &Params, depth: usize) -> Result<Vec<PlanePoint>> {
    if depth == 0 {
        return Err(Error::Precondition("depth must be positive".into()));
    }
    if depth > MAX_SAMPLE_DEPTH {
        return Err(Error::ResourceLimit(format!(
            "sample depth {depth} exceeds maximum {MAX_SAMPLE_DEPTH}"
        )));
    }
    let mut pts = vec![PlanePoint::new(1.0, 1.0), PlanePoint::new(-1.0, -1.0)];
    let mut step = PlanePoint::new(1.0, 1.0);
    for _ in 1..depth {
        step = params.apply_t(step);
        let mut next = Vec::with_capacity(pts.len() * 2);
        // Appending a letter at index d adds +-T^d (1,1); p-children first
        // keeps word-lexicographic order.
        for &pt in &pts {
            next.push(pt + step);
        }
        for &pt in &pts {
            next.push(pt - step);
        }
        // Interleave so that index bits spell the word, first letter most
        // significant: children of u are adjacent.
        let half = pts.len();
        let mut ordered = Vec::with_capacity(next.len());
        for i in 0..half {
            ordered.push(next[i]);
            ordered.push(next[half + i]);
        }
        pts = ordered;
    }
    Ok(pts)
}

/// Adaptive sampler: subdivide until the truncation radius drops below
/// `target_radius`, keeping one exact cylinder offset per `quantum`-cell
/// and discarding the rest.
///
/// Kept points are exact members of the depth-`d` offset set; discarding
/// only opens a coverage gap, bounded by `quantum * sqrt(2) / (1 - L)`
/// because a discarded branch's descendants stay within the contracted
/// image of its kept neighbor's. Returns `(points, truncation_radius,
/// coverage_gap)`.
pub fn attractor_sample_adaptive(
    params: &Params,
    target_radius: f64,
    quantum: f64,
    max_points: usize,
) -> Result<(Vec<PlanePoint>, f64, f64)> {
    if target_radius <= 0.0 || quantum <= 0.0 {
        return Err(Error::Precondition("radius and quantum must be positive".into()));
    }
    let l = params.l_factor();
    if l == 0.0 {
        return Ok((
            vec![PlanePoint::new(1.0, 1.0), PlanePoint::new(-1.0, -1.0)],
            0.0,
            0.0,
        ));
    }
    let dedup_err = quantum * std::f64::consts::SQRT_2 / (1.0 - l);

    // Dense epoch-stamped marker over the quantized offset box when it
    // fits; hashing otherwise.
    let extent = params.extent();
    let qw = (2.0 * extent.x / quantum).ceil() as usize + 3;
    let qh = (2.0 * extent.y / quantum).ceil() as usize + 3;
    let dense = qw.checked_mul(qh).is_some_and(|n| n <= 48 << 20);
    let mut marks: Vec<u32> = if dense { vec![0; qw * qh] } else { Vec::new() };
    let mut epoch = 0u32;
    let mut seen_hash: std::collections::HashSet<(i64, i64)> = std::collections::HashSet::new();

    let mut pts = vec![PlanePoint::new(1.0, 1.0), PlanePoint::new(-1.0, -1.0)];
    let mut depth = 1usize;
    while params.truncation_radius(depth) > target_radius {
        depth += 1;
        if depth > 4096 {
            return Err(Error::ResourceLimit("sampler failed to converge".into()));
        }
        epoch += 1;
        if !dense {
            seen_hash.clear();
        }
        let mut next = Vec::with_capacity((pts.len() * 2).min(max_points + 1));
        for &pt in &pts {
            for sign in [1.0, -1.0] {
                let child = params.apply_t(pt) + PlanePoint::new(sign, sign);
                let fresh = if dense {
                    let i = ((child.x + extent.x) / quantum) as usize + 1;
                    let j = ((child.y + extent.y) / quantum) as usize + 1;
                    let id = j * qw + i;
                    let hit = marks[id] != epoch;
                    marks[id] = epoch;
                    hit
                } else {
                    seen_hash.insert((
                        (child.x / quantum).round() as i64,
                        (child.y / quantum).round() as i64,
                    ))
                };
                if fresh {
                    next.push(child);
                }
            }
        }
        if next.len() > max_points {
            return Err(Error::ResourceLimit(format!(
                "adaptive sample exceeded {max_points} points at depth {depth}"
            )));
        }
        pts = next;
    }
    Ok((pts, params.truncation_radius(depth), dedup_err))
}

// ---------------------------------------------------------------------------
// Cylinder gap
// ---------------------------------------------------------------------------

/// Bounds on `delta = d(p A, m A)` from a depth-truncated sample.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct CylinderGap {
    /// Certified lower bound (sample distance minus twice the truncation
    /// radius, clamped at zero).
    pub lower_bound: f64,
    /// Raw minimum distance between the two truncated samples; within twice
    /// the truncation radius of the true gap.
    pub upper_estimate: f64,
    pub truncation_radius: f64,
}

/// Minimum distance between two point sets via a spatial hash with an
/// expanding search radius: a pass at radius `r` either certifies the true
/// minimum (any closer pair shares adjacent buckets) or quadruples `r`.
fn min_cross_distance(a: &[PlanePoint], b: &[PlanePoint], start_radius: f64) -> f64 {
    use std::collections::HashMap;
    if a.is_empty() || b.is_empty() {
        return f64::INFINITY;
    }
    let mut r = start_radius.max(1e-12);
    for _ in 0..64 {
        let key = |p: PlanePoint| ((p.x / r).floor() as i64, (p.y / r).floor() as i64);
        let mut buckets: HashMap<(i64, i64), Vec<PlanePoint>> = HashMap::new();
        for &q in b {
            buckets.entry(key(q)).or_default().push(q);
        }
        let mut best = f64::INFINITY;
        for &p in a {
            let (ki, kj) = key(p);
            for di in -1..=1 {
                for dj in -1..=1 {
                    if let Some(v) = buckets.get(&(ki + di, kj + dj)) {
                        for q in v {
                            best = best.min(p.dist_sq(*q));
                        }
                    }
                }
            }
        }
        let best = best.sqrt();
        if best <= r {
            return best;
        }
        r *= 4.0;
    }
    f64::INFINITY
}

/// Lower and upper bounds for the distance between the two first-level
/// cylinders from the depth-`depth` sample.
pub fn cylinder_gap(params: &Params, depth: usize) -> Result<CylinderGap> {
    let sample = attractor_sample(params, depth)?;
    let half = sample.len() / 2;
    // Index bits spell the word with the first letter as the highest bit,
    // so the p-cylinder sample is exactly the first half.
    let p_side = &sample[..half];
    let m_side = &sample[half..];
    let trunc = params.truncation_radius(depth);
    let raw = min_cross_distance(p_side, m_side, trunc.max(1e-12));
    Ok(CylinderGap {
        lower_bound: (raw - 2.0 * trunc).max(0.0),
        upper_estimate: raw,
        truncation_radius: trunc,
    })
}

/// Same bounds computed with the adaptive sampler at a target truncation
/// radius; used where `2^depth` exact sampling is too coarse or too large.
pub fn cylinder_gap_adaptive(params: &Params, target_radius: f64) -> Result<CylinderGap> {
    let quantum = target_radius / 2.0;
    let (pts, trunc, dedup) = attractor_sample_adaptive(params, target_radius, quantum, 16 << 20)?;
    // Children of one extra subdivision step carry the first letter, which
    // splits the sample into its two first-level cylinders.
    let mut p_side = Vec::with_capacity(pts.len());
    let mut m_side = Vec::with_capacity(pts.len());
    for &pt in &pts {
        p_side.push(params.apply_t(pt) + PlanePoint::new(1.0, 1.0));
        m_side.push(params.apply_t(pt) - PlanePoint::new(1.0, 1.0));
    }
    let raw = min_cross_distance(&p_side, &m_side, (trunc + dedup).max(1e-12));
    // Side points are exact cylinder offsets, each within L * trunc of its
    // cylinder, so the upper bound does not pay for coverage gaps; only
    // the lower bound does.
    let up_slop = params.l_factor() * trunc;
    let low_slop = params.l_factor() * (trunc + dedup);
    Ok(CylinderGap {
        lower_bound: (raw - 2.0 * low_slop).max(0.0),
        upper_estimate: raw,
        truncation_radius: up_slop,
    })
}

// ---------------------------------------------------------------------------
// Words induced by a series
// ---------------------------------------------------------------------------

/// Split a series into the word pair it is induced from: `u_i - v_i = 2 f_i`
/// with the zero-coefficient convention `(p, p)`. `u` starts with `p` and `v`
/// with `m`; an eventually periodic series yields eventually periodic words.
pub fn words_from_series(f: &BSeries) -> (SignedWord, SignedWord) {
    let pair = |c: i8| match c {
        1 => (Letter::P, Letter::M),
        -1 => (Letter::M, Letter::P),
        _ => (Letter::P, Letter::P),
    };
    let mut u = Vec::with_capacity(f.coeffs().len());
    let mut v = Vec::with_capacity(f.coeffs().len());
    for &c in f.coeffs() {
        let (a, b) = pair(c);
        u.push(a);
        v.push(b);
    }
    let s = f.coeffs().len();
    let (pu, pv): (Vec<Letter>, Vec<Letter>) = match f.tail() {
        Tail::Zero => (vec![Letter::P], vec![Letter::P]),
        Tail::AllPlus => (vec![Letter::P], vec![Letter::M]),
        Tail::AllMinus => (vec![Letter::M], vec![Letter::P]),
        Tail::AltPlusEven | Tail::AltMinusEven => {
            let at = |n: usize| {
                let sign = if n % 2 == 0 { 1 } else { -1 };
                let sign = if matches!(f.tail(), Tail::AltPlusEven) {
                    sign
                } else {
                    -sign
                };
                pair(sign)
            };
            let (u0, v0) = at(s);
            let (u1, v1) = at(s + 1);
            (vec![u0, u1], vec![v0, v1])
        }
    };
    let u = SignedWord::eventually_periodic(&u, &pu).expect("nonempty period");
    let v = SignedWord::eventually_periodic(&v, &pv).expect("nonempty period");
    (u, v)
}

// ---------------------------------------------------------------------------
// Parameter symmetries
// ---------------------------------------------------------------------------

/// Record of the symmetry applied to bring a parameter pair into a normal
/// form. Points map back by swapping coordinates when `swapped`; addresses
/// map back through [`SignedWord::alternate`] when `negated` (the negated
/// pair has the same attractor as a point set).
#[derive(Clone, Copy, Debug)]
pub struct Normalized {
    pub params: Params,
    pub swapped: bool,
    pub negated: bool,
}

impl Normalized {
    pub fn point_back(&self, p: PlanePoint) -> PlanePoint {
        if self.swapped {
            PlanePoint::new(p.y, p.x)
        } else {
            p
        }
    }

    pub fn address_back(&self, w: &SignedWord) -> SignedWord {
        if self.negated {
            w.alternate()
        } else {
            w.clone()
        }
    }
}

/// Normalize an opposite-sign pair to `gamma < 0 < lambda`, `|gamma| < |lambda|`.
pub fn normalize_opposite_sign(params: &Params) -> Result<Normalized> {
    let (g, l) = (params.gamma(), params.lambda());
    if g == 0.0 || l == 0.0 || g * l > 0.0 {
        return Err(Error::Unsupported(
            "normalization requires strictly opposite signs".into(),
        ));
    }
    if g.abs() == l.abs() {
        return Err(Error::Unsupported(
            "anti-diagonal pairs are handled by the trivial-region test".into(),
        ));
    }
    let mut cur = *params;
    let mut swapped = false;
    let mut negated = false;
    if cur.gamma() > 0.0 {
        cur = cur.swapped();
        swapped = !swapped;
    }
    if cur.gamma().abs() > cur.lambda().abs() {
        cur = cur.negated().swapped();
        negated = !negated;
        swapped = !swapped;
    }
    Ok(Normalized {
        params: cur,
        swapped,
        negated,
    })
}

/// Normalize a same-sign pair to `0 < gamma < lambda`.
pub fn normalize_same_sign(params: &Params) -> Result<Normalized> {
    let (g, l) = (params.gamma(), params.lambda());
    if g == 0.0 || l == 0.0 || g * l < 0.0 {
        return Err(Error::Unsupported(
            "normalization requires strictly equal signs".into(),
        ));
    }
    if params.on_diagonal() {
        return Err(Error::Precondition("diagonal pairs are excluded".into()));
    }
    let mut cur = *params;
    let mut swapped = false;
    let mut negated = false;
    if cur.gamma() < 0.0 {
        cur = cur.negated();
        negated = true;
    }
    if cur.gamma() > cur.lambda() {
        cur = cur.swapped();
        swapped = true;
    }
    Ok(Normalized {
        params: cur,
        swapped,
        negated,
    })
}
