//! The real slice: membership predicates for the invariant angle sets,
//! the pseudocenter bisection that enumerates real hyperbolic windows,
//! tuning substitutions, the Feigenbaum iteration and the piecewise linear
//! embedding of dynamical angle sets into parameter space.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::angles::{rat, tent, Angle, BinaryExpansion, Rational};
use crate::error::{MentError, Result};
use crate::symbolic::{is_dominant, pseudocenter, RunString};

/// Which invariant angle set a membership query tests.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MembershipKind {
    /// Rays landing on the spine: T^n(ℓθ) ≤ ℓ_c for all n ≥ 1.
    Spine,
    /// Rays landing on the Hubbard tree: T^n(ℓθ) ≥ L_c for all n ≥ 0.
    Htree,
    /// Real parameter angles: T^n(ℓθ) ≤ ℓθ for all n ≥ 0.
    RealParam,
    /// Parameter rays landing to the right of c: RealParam plus
    /// θ ∈ [1−θ_c, θ_c], the interval containing 0.
    ParamSlice,
}

#[derive(Clone, Debug)]
pub struct MembershipQuery {
    pub kind: MembershipKind,
    pub test_angle: Angle,
    pub characteristic_angle: Angle,
}

/// Distinct tent-map orbit values of x, starting with x itself.
pub fn tent_orbit_values(x: &Rational) -> Vec<Rational> {
    let mut seen: HashMap<Rational, usize> = HashMap::new();
    let mut out = Vec::new();
    let mut v = x.clone();
    while !seen.contains_key(&v) {
        seen.insert(v.clone(), out.len());
        out.push(v.clone());
        v = tent(&v);
    }
    out
}

/// Decides a membership query exactly by checking one full preperiod plus
/// period of the tent orbit.
pub fn member(q: &MembershipQuery) -> Result<bool> {
    if q.characteristic_angle.value() > &rat(1, 2) {
        return Err(MentError::Precondition(format!(
            "characteristic angle {} must lie in [0, 1/2]",
            q.characteristic_angle
        )));
    }
    let lx = q.test_angle.ell();
    let orbit = tent_orbit_values(&lx);
    match q.kind {
        MembershipKind::Spine => {
            let lc = q.characteristic_angle.ell();
            // n ≥ 1: skip the value at n = 0 but keep everything reachable,
            // including the revisit of ℓθ when the orbit is periodic.
            let first = tent(&lx);
            let tail = tent_orbit_values(&first);
            Ok(tail.iter().all(|v| v <= &lc))
        }
        MembershipKind::Htree => {
            let big_l = q.characteristic_angle.double().ell();
            Ok(orbit.iter().all(|v| v >= &big_l))
        }
        MembershipKind::RealParam => Ok(orbit.iter().all(|v| v <= &lx)),
        MembershipKind::ParamSlice => {
            let in_interval = q.test_angle <= q.characteristic_angle
                || q.test_angle >= q.characteristic_angle.one_minus();
            if !in_interval {
                return Ok(false);
            }
            member(&MembershipQuery {
                kind: MembershipKind::RealParam,
                test_angle: q.test_angle.clone(),
                characteristic_angle: q.characteristic_angle.clone(),
            })
        }
    }
}

pub fn is_real_param(theta: &Angle) -> bool {
    member(&MembershipQuery {
        kind: MembershipKind::RealParam,
        test_angle: theta.clone(),
        characteristic_angle: Angle::zero(),
    })
    .unwrap_or(false)
}

/// A real hyperbolic window: the pair of angles spanning a real hyperbolic
/// component, with `lo` of period `period` and `hi` of period `2·period`
/// under doubling.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Window {
    pub lo: Angle,
    pub hi: Angle,
    pub period: u32,
    pub pseudocenter: Angle,
}

/// The hyperbolic window of smallest period inside (lo, hi): take the dyadic
/// pseudocenter 0.s_1…s_n (s_n = 1); the window is bounded by
/// 0.(s_1…s_{n−1})* and 0.(s_1…s_{n−1} š_1…š_{n−1})*.
pub fn next_window(lo: &Angle, hi: &Angle) -> Result<Window> {
    if !(lo < hi && hi.value() <= &rat(1, 2)) {
        return Err(MentError::Precondition(format!(
            "need 0 ≤ lo < hi ≤ 1/2, got ({lo}, {hi})"
        )));
    }
    let pc = pseudocenter(lo, hi)?;
    let exp = pc.expansion();
    debug_assert_eq!(exp.per, vec![false]);
    let bits = exp.pre; // ends in 1
    let n = bits.len();
    if n < 2 {
        return Err(MentError::Precondition(format!(
            "degenerate branch: pseudocenter {pc} has a one-digit expansion"
        )));
    }
    let word = &bits[..n - 1];
    let lo_w = BinaryExpansion {
        pre: vec![],
        per: word.to_vec(),
    }
    .to_angle();
    let mut double_word = word.to_vec();
    double_word.extend(word.iter().map(|b| !b));
    let hi_w = BinaryExpansion {
        pre: vec![],
        per: double_word,
    }
    .to_angle();
    if &lo_w < lo || &hi_w > hi {
        return Err(MentError::Precondition(format!(
            "degenerate branch: ({lo}, {hi}) lies inside a single window"
        )));
    }
    let (_, per) = lo_w.orbit_shape();
    if per != n - 1 {
        return Err(MentError::Internal(format!(
            "window word of length {} is not primitive for pseudocenter {pc}",
            n - 1
        )));
    }
    Ok(Window {
        lo: lo_w,
        hi: hi_w,
        period: (n - 1) as u32,
        pseudocenter: pc,
    })
}

/// Breadth-first bisection from (0, 1/2). Returns all windows found within
/// `depth` levels (sorted by `lo`) together with the frontier gaps that
/// remain uncovered.
pub fn bisection_frontier(depth: u32) -> (Vec<Window>, Vec<(Angle, Angle)>) {
    let mut windows = Vec::new();
    let mut frontier = vec![(Angle::zero(), Angle::half())];
    for _ in 0..depth {
        let mut next = Vec::new();
        for (a, b) in frontier {
            match next_window(&a, &b) {
                Ok(w) => {
                    if a < w.lo {
                        next.push((a, w.lo.clone()));
                    }
                    if w.hi < b {
                        next.push((w.hi.clone(), b));
                    }
                    windows.push(w);
                }
                Err(_) => {
                    // Nothing of smaller period fits; keep the gap as is.
                    next.push((a, b));
                }
            }
        }
        frontier = next;
    }
    windows.sort_by(|x, y| x.lo.cmp(&y.lo));
    (windows, frontier)
}

pub fn enumerate_windows(depth: u32) -> Vec<Window> {
    bisection_frontier(depth).0
}

/// A tuning substitution 0 ↦ Σ_0, 1 ↦ Σ_1 acting digit-wise on binary
/// expansions.
#[derive(Clone, Debug)]
pub struct Tuning {
    pub sigma0: Vec<bool>,
    pub sigma1: Vec<bool>,
}

impl Tuning {
    pub fn from_words(sigma0: Vec<bool>, sigma1: Vec<bool>) -> Result<Tuning> {
        if sigma0.len() != sigma1.len() || sigma0.is_empty() {
            return Err(MentError::Precondition(
                "tuning words must be nonempty and of equal length".into(),
            ));
        }
        Ok(Tuning { sigma0, sigma1 })
    }

    /// Tuning words of a real window: Σ_0 is the period word of `lo`, and the
    /// second root ray is the conjugate angle 1 − lo, whose period word is the
    /// bitwise complement.
    pub fn from_window(w: &Window) -> Tuning {
        let sigma0 = w.lo.expansion().per;
        let sigma1 = sigma0.iter().map(|b| !b).collect();
        Tuning { sigma0, sigma1 }
    }

    /// Tuning for the real window rooted at a purely periodic angle.
    pub fn from_root(root: &Angle) -> Result<Tuning> {
        if !root.is_periodic() {
            return Err(MentError::Precondition(format!(
                "{root} is not purely periodic, so it roots no real window"
            )));
        }
        let sigma0 = root.expansion().per;
        let sigma1: Vec<bool> = sigma0.iter().map(|b| !b).collect();
        Tuning::from_words(sigma0, sigma1)
    }

    pub fn period(&self) -> usize {
        self.sigma0.len()
    }

    /// Digit-by-digit substitution on the binary expansion of θ.
    pub fn apply(&self, theta: &Angle) -> Angle {
        let e = theta.expansion();
        let mut pre = Vec::with_capacity(e.pre.len() * self.period());
        for &b in &e.pre {
            pre.extend_from_slice(if b { &self.sigma1 } else { &self.sigma0 });
        }
        let mut per = Vec::with_capacity(e.per.len() * self.period());
        for &b in &e.per {
            per.extend_from_slice(if b { &self.sigma1 } else { &self.sigma0 });
        }
        BinaryExpansion { pre, per }.to_angle()
    }

    /// Root of the tuning window, α(W) = 0.(Σ_0)*.
    pub fn alpha(&self) -> Angle {
        self.apply(&Angle::zero())
    }

    /// Tip of the tuning window, ω(W) = 0.Σ_0 (Σ̌_0)* = τ_W(1/2) mirrored
    /// into [0, 1/2].
    pub fn omega(&self) -> Angle {
        let t = self.apply(&Angle::half());
        if t.value() <= &rat(1, 2) {
            t
        } else {
            t.one_minus()
        }
    }
}

/// Basilica tuning (Σ_0, Σ_1) = (01, 10); its iteration from 1/2 converges to
/// the Feigenbaum angle.
pub fn basilica_tuning() -> Tuning {
    Tuning {
        sigma0: vec![false, true],
        sigma1: vec![true, false],
    }
}

/// Iterates the basilica tuning from 1/2 until two consecutive iterates agree
/// on `tolerance_bits` binary digits; returns that iterate exactly.
pub fn feigenbaum_angle(tolerance_bits: u32) -> Result<Angle> {
    if tolerance_bits == 0 {
        return Err(MentError::Precondition("tolerance_bits must be ≥ 1".into()));
    }
    let tau = basilica_tuning();
    let mut theta = Angle::half();
    for _ in 0..200 {
        let next = tau.apply(&theta);
        if theta.first_bits(tolerance_bits as usize) == next.first_bits(tolerance_bits as usize) {
            return Ok(theta);
        }
        theta = next;
    }
    Err(MentError::Internal(
        "feigenbaum iteration failed to stabilize".into(),
    ))
}

/// The piecewise linear map F attached to a dominant string S, sending
/// dynamical angles into the parameter section. With
/// s = 0.0 1^{s_1} 0^{s_2} … 0^{s_n} and N = s_1 + … + s_n:
/// F(θ) = s + (1−θ)/2^{N+1} on [0, 1/2), mirrored symmetrically
/// (F(1−θ) = 1 − F(θ)) on [1/2, 1).
pub fn embed_f(theta: &Angle, s: &[u64]) -> Result<Angle> {
    if !is_dominant(s) {
        return Err(MentError::Precondition(format!(
            "{} is not a dominant string",
            RunString::finite(s)
        )));
    }
    if theta.is_zero() {
        return Err(MentError::Precondition("need θ in (0, 1)".into()));
    }
    let big_n: u64 = s.iter().sum();
    let mut bits = vec![false];
    for (i, &len) in s.iter().enumerate() {
        let d = i % 2 == 0;
        for _ in 0..len {
            bits.push(d);
        }
    }
    let mut num = BigInt::zero();
    for &b in &bits {
        num = num * 2 + BigInt::from(b as u8);
    }
    let denom = BigInt::from(2).pow(big_n as u32 + 1);
    let s_val = BigRational::new(num, denom.clone());
    let shift = BigRational::new(BigInt::one(), denom);
    let v = if theta.value() < &rat(1, 2) {
        &s_val + (Rational::one() - theta.value()) * &shift
    } else {
        Rational::one() - &s_val - theta.value() * &shift
    };
    Ok(Angle::new(v))
}

/// Covering-based upper estimate of the dimension of the parameter section
/// R ∩ [0, θ_c], from the gaps left by `depth` levels of the bisection.
/// Solves Σ |gap|^s = 1 for s; nonincreasing in depth and converging slowly
/// from above.
pub fn param_dimension_estimate(theta_c: &Angle, depth: u32) -> Result<f64> {
    if depth < 2 {
        return Err(MentError::Precondition("depth must be ≥ 2".into()));
    }
    if theta_c.is_zero() || theta_c.value() > &rat(1, 2) || !is_real_param(theta_c) {
        return Err(MentError::Precondition(format!(
            "{theta_c} is not a real parameter angle in (0, 1/2]"
        )));
    }
    let (_, gaps) = bisection_frontier(depth);
    let mut lens: Vec<f64> = Vec::new();
    for (a, b) in gaps {
        let lo = a.value().clone();
        let hi = b.value().clone().min(theta_c.value().clone());
        if lo < hi {
            lens.push((hi - lo).to_f64().unwrap());
        }
    }
    if lens.is_empty() {
        return Ok(0.0);
    }
    let total: f64 = lens.iter().map(|l| l.ln()).sum::<f64>();
    if !total.is_finite() {
        return Err(MentError::Internal("gap length underflow".into()));
    }
    let f = |s: f64| -> f64 { lens.iter().map(|l| l.powf(s)).sum::<f64>() };
    if f(1.0) >= 1.0 {
        return Ok(1.0);
    }
    let (mut lo_s, mut hi_s) = (0.0f64, 1.0f64);
    for _ in 0..80 {
        let mid = 0.5 * (lo_s + hi_s);
        if f(mid) >= 1.0 {
            lo_s = mid;
        } else {
            hi_s = mid;
        }
    }
    Ok(0.5 * (lo_s + hi_s))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(n: i64, d: i64) -> Angle {
        Angle::from_frac(n, d).unwrap()
    }

    fn q(kind: MembershipKind, t: (i64, i64), c: (i64, i64)) -> MembershipQuery {
        MembershipQuery {
            kind,
            test_angle: a(t.0, t.1),
            characteristic_angle: a(c.0, c.1),
        }
    }

    #[test]
    fn membership_examples() {
        assert!(member(&q(MembershipKind::Htree, (1, 7), (3, 7))).unwrap());
        assert!(member(&q(MembershipKind::RealParam, (3, 7), (0, 1))).unwrap());
        assert!(member(&q(MembershipKind::Spine, (1, 2), (1, 2))).unwrap());
        assert!(member(&q(MembershipKind::ParamSlice, (1, 3), (3, 7))).unwrap());
        // the interval filter really cuts
        assert!(!member(&q(MembershipKind::ParamSlice, (17, 36), (3, 7))).unwrap());
        assert!(!is_real_param(&a(1, 4)));
        assert!(is_real_param(&a(13, 28)));
    }

    #[test]
    fn worked_bisection_example() {
        let w = next_window(&a(2, 5), &a(3, 7)).unwrap();
        assert_eq!(w.lo, a(2, 5));
        assert_eq!(w.hi, a(7, 17));
        assert_eq!(w.period, 4);
        assert_eq!(w.pseudocenter, a(13, 32));

        let w2 = next_window(&a(7, 17), &a(3, 7)).unwrap();
        assert_eq!(w2.period, 5);
        assert_eq!(w2.lo, a(13, 31));
    }

    #[test]
    fn root_window() {
        let w = next_window(&Angle::zero(), &Angle::half()).unwrap();
        assert_eq!(w.lo, Angle::zero());
        assert_eq!(w.hi, a(1, 3));
        assert_eq!(w.period, 1);
        assert_eq!(w.pseudocenter, a(1, 4));
    }

    #[test]
    fn window_enumeration_depths() {
        let d1 = enumerate_windows(1);
        assert_eq!(d1.len(), 1);
        assert_eq!(d1[0].hi, a(1, 3));

        let d2 = enumerate_windows(2);
        assert!(d2
            .iter()
            .any(|w| w.lo == a(1, 3) && w.hi == a(2, 5) && w.pseudocenter == a(3, 8)));

        let d3 = enumerate_windows(3);
        assert!(d3
            .iter()
            .any(|w| w.lo == a(3, 7) && w.period == 3 && w.pseudocenter == a(7, 16)));
        assert_eq!(d3.len(), 3);
    }

    #[test]
    fn window_endpoints_are_parameters_and_idempotent() {
        for w in enumerate_windows(4) {
            assert!(is_real_param(&w.lo), "lo {}", w.lo);
            assert!(is_real_param(&w.hi), "hi {}", w.hi);
            let again = next_window(&w.lo, &w.hi).unwrap();
            assert_eq!(again, w);
        }
    }

    #[test]
    fn tuning_examples() {
        let basilica = basilica_tuning();
        assert_eq!(basilica.apply(&Angle::zero()), a(1, 3));
        assert_eq!(basilica.apply(&Angle::half()), a(7, 12));
        let tuned_airplane = basilica.apply(&a(3, 7));
        assert_eq!(tuned_airplane, a(26, 63));
        assert_eq!(tuned_airplane.orbit_shape(), (0, 6));
        // window-derived words match the hand-written ones
        let w = next_window(&a(1, 3), &a(1, 2)).unwrap();
        let t = Tuning::from_window(&w);
        assert_eq!(t.sigma0, vec![false, true]);
        assert_eq!(t.sigma1, vec![true, false]);
    }

    #[test]
    fn feigenbaum_iteration() {
        let f2 = feigenbaum_angle(2).unwrap();
        let tau = basilica_tuning();
        assert_eq!(
            f2.first_bits(2),
            tau.apply(&f2).first_bits(2)
        );
        // agreement prefix roughly doubles per step
        let f20 = feigenbaum_angle(20).unwrap();
        assert_eq!(f20.first_bits(20), tau.apply(&f20).first_bits(20));
    }

    #[test]
    fn embedding_examples() {
        assert_eq!(embed_f(&a(1, 3), &[2, 1]).unwrap(), a(5, 12));
        assert_eq!(embed_f(&a(2, 3), &[2, 1]).unwrap(), a(7, 12));
        // symmetry F(1−θ) = 1 − F(θ)
        let th = a(5, 17);
        let f = embed_f(&th, &[2, 1, 1, 1]).unwrap();
        let g = embed_f(&th.one_minus(), &[2, 1, 1, 1]).unwrap();
        assert_eq!(g, f.one_minus());
        assert!(is_real_param(&a(5, 12)));
        assert!(embed_f(&a(1, 3), &[1, 1]).is_err());
    }

    #[test]
    fn param_dim_trivial_cases() {
        assert_eq!(param_dimension_estimate(&a(1, 3), 5).unwrap(), 0.0);
        assert!(param_dimension_estimate(&a(1, 3), 1).is_err());
    }

    #[test]
    fn param_dim_full_slice() {
        let e = param_dimension_estimate(&Angle::half(), 12).unwrap();
        assert!(e >= 0.95 && e <= 1.0, "estimate {e}");
    }
}
