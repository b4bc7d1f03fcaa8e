//! Run-length codes of binary expansions, the alternate lexicographic
//! order, extremal and dominant strings, and the dyadic pseudocenter.
//!
//! A run string records the block lengths of a binary expansion. Finite
//! strings are compared by the alternate lexicographic order: at the first
//! difference, a larger entry wins at odd positions and loses at even ones.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::angles::{rat, Angle, Rational};
use crate::error::{MentError, Result};

/// What follows the leading runs of a run string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tail {
    /// The string stops: a finite word of positive integers.
    Finite,
    /// The given word repeats forever (kept primitive).
    Periodic(Vec<u64>),
    /// A final infinite run of zeros (dyadic angles only).
    Zeros,
}

/// Finite or eventually periodic sequence of positive integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RunString {
    pub head: Vec<u64>,
    pub tail: Tail,
}

impl RunString {
    pub fn finite(word: &[u64]) -> RunString {
        RunString {
            head: word.to_vec(),
            tail: Tail::Finite,
        }
    }

    pub fn periodic(head: &[u64], cycle: &[u64]) -> RunString {
        RunString {
            head: head.to_vec(),
            tail: Tail::Periodic(cycle.to_vec()),
        }
    }

    pub fn is_infinite(&self) -> bool {
        !matches!(self.tail, Tail::Finite)
    }

    /// Run at position i (0-based); None past the end of a finite string.
    fn run(&self, i: usize) -> Option<Run> {
        if i < self.head.len() {
            return Some(Run::Finite(self.head[i]));
        }
        match &self.tail {
            Tail::Finite => None,
            Tail::Zeros => {
                if i == self.head.len() {
                    Some(Run::Infinite)
                } else {
                    None
                }
            }
            Tail::Periodic(c) => Some(Run::Finite(c[(i - self.head.len()) % c.len()])),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Run {
    Finite(u64),
    Infinite,
}

impl fmt::Display for RunString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |w: &[u64]| {
            w.iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        match &self.tail {
            Tail::Finite => write!(f, "({})", join(&self.head)),
            Tail::Zeros => {
                if self.head.is_empty() {
                    write!(f, "(∞)")
                } else {
                    write!(f, "({},∞)", join(&self.head))
                }
            }
            Tail::Periodic(c) => {
                if self.head.is_empty() {
                    write!(f, "({})*", join(c))
                } else {
                    write!(f, "({}|{})*", join(&self.head), join(c))
                }
            }
        }
    }
}

impl FromStr for RunString {
    type Err = MentError;

    fn from_str(s: &str) -> Result<RunString> {
        let s = s.trim();
        let bad = || MentError::Parse(format!("bad run string '{s}'"));
        let (body, periodic) = match s.strip_suffix('*') {
            Some(b) => (b, true),
            None => (s, false),
        };
        let body = body
            .strip_prefix('(')
            .and_then(|b| b.strip_suffix(')'))
            .ok_or_else(bad)?;
        let parse_word = |w: &str| -> Result<Vec<u64>> {
            if w.trim().is_empty() {
                return Ok(Vec::new());
            }
            w.split(',')
                .map(|t| t.trim().parse::<u64>().map_err(|_| bad()))
                .collect()
        };
        if periodic {
            let (head, cycle) = match body.split_once('|') {
                Some((h, c)) => (parse_word(h)?, parse_word(c)?),
                None => (Vec::new(), parse_word(body)?),
            };
            if cycle.is_empty() || cycle.iter().any(|&x| x == 0) {
                return Err(bad());
            }
            Ok(RunString::periodic(&head, &cycle))
        } else if let Some(h) = body.strip_suffix(",∞") {
            Ok(RunString {
                head: parse_word(h)?,
                tail: Tail::Zeros,
            })
        } else {
            let head = parse_word(body)?;
            if head.iter().any(|&x| x == 0) {
                return Err(bad());
            }
            Ok(RunString::finite(&head))
        }
    }
}

/// Run-length code w_θ of the binary expansion of θ, counting from the first
/// digit after the point. Depends only on ℓ(θ). The zero angle has no runs.
pub fn runlength(theta: &Angle) -> Result<RunString> {
    if theta.is_zero() {
        return Err(MentError::Precondition(
            "runlength of the zero angle is undefined".into(),
        ));
    }
    let e = theta.expansion();
    if e.per == vec![false] {
        // Dyadic: finite runs, then infinitely many zeros.
        let mut runs = Vec::new();
        let mut i = 0;
        while i < e.pre.len() {
            let d = e.pre[i];
            let mut j = i;
            while j < e.pre.len() && e.pre[j] == d {
                j += 1;
            }
            if j == e.pre.len() && !d {
                break; // merges into the zero tail
            }
            runs.push((j - i) as u64);
            i = j;
        }
        return Ok(RunString {
            head: runs,
            tail: Tail::Zeros,
        });
    }
    // Eventually periodic digits: walk runs; a run starting at a previously
    // seen phase of the period closes the cycle.
    let pre_len = e.pre.len();
    let per_len = e.per.len();
    let mut runs: Vec<u64> = Vec::new();
    let mut first_seen: Vec<Option<usize>> = vec![None; per_len];
    let mut pos = 0usize;
    loop {
        if pos >= pre_len {
            let phase = (pos - pre_len) % per_len;
            if let Some(k) = first_seen[phase] {
                let cycle = runs.split_off(k);
                return Ok(RunString {
                    head: runs,
                    tail: Tail::Periodic(cycle),
                });
            }
            first_seen[phase] = Some(runs.len());
        }
        let d = e.bit(pos);
        let mut len = 0u64;
        while e.bit(pos) == d {
            len += 1;
            pos += 1;
            // A run cannot outlast preperiod + one full period of equal digits
            // unless the angle were dyadic, handled above.
            if len as usize > pre_len + 2 * per_len + 2 {
                return Err(MentError::Internal("runaway run in runlength".into()));
            }
        }
        runs.push(len);
    }
}

/// Alternate lexicographic comparison of equal-length finite words.
pub fn cmp_words(a: &[u64], b: &[u64]) -> Ordering {
    debug_assert_eq!(a.len(), b.len());
    for (i, (&x, &y)) in a.iter().zip(b.iter()).enumerate() {
        if x != y {
            let odd = i % 2 == 0; // 1-based position parity
            return if odd {
                y.cmp(&x)
            } else {
                x.cmp(&y)
            };
        }
    }
    Ordering::Equal
}

/// Alternate lexicographic comparison. Requires both strings infinite, or
/// both finite with equal length.
pub fn alt_lex_compare(s: &RunString, t: &RunString) -> Result<Ordering> {
    match (&s.tail, &t.tail) {
        (Tail::Finite, Tail::Finite) => {
            if s.head.len() != t.head.len() {
                return Err(MentError::Precondition(
                    "alternate order needs equal finite lengths (use << for mixed lengths)".into(),
                ));
            }
            Ok(cmp_words(&s.head, &t.head))
        }
        (Tail::Finite, _) | (_, Tail::Finite) => Err(MentError::Precondition(
            "cannot compare a finite run string with an infinite one".into(),
        )),
        _ => {
            let bound = compare_bound(s, t);
            for i in 0..bound {
                let (x, y) = (s.run(i), t.run(i));
                match (x, y) {
                    (Some(rx), Some(ry)) => {
                        if rx != ry {
                            let odd = i % 2 == 0;
                            let ord = match (rx, ry) {
                                (Run::Infinite, Run::Finite(_)) => Ordering::Greater,
                                (Run::Finite(_), Run::Infinite) => Ordering::Less,
                                (Run::Finite(a), Run::Finite(b)) => a.cmp(&b),
                                (Run::Infinite, Run::Infinite) => Ordering::Equal,
                            };
                            return Ok(if odd { ord.reverse() } else { ord });
                        }
                        if rx == Run::Infinite {
                            return Ok(Ordering::Equal);
                        }
                    }
                    (None, None) => return Ok(Ordering::Equal),
                    (None, Some(_)) => return Ok(Ordering::Less),
                    (Some(_), None) => return Ok(Ordering::Greater),
                }
            }
            Ok(Ordering::Equal)
        }
    }
}

fn compare_bound(s: &RunString, t: &RunString) -> usize {
    let cyc = |r: &RunString| match &r.tail {
        Tail::Periodic(c) => c.len(),
        _ => 1,
    };
    s.head.len() + t.head.len() + cyc(s).lcm(&cyc(t)) + 2
}

/// The partial order S << T on finite strings: some common-length truncation
/// satisfies S_1^i < T_1^i.
pub fn double_lt(s: &[u64], t: &[u64]) -> bool {
    let n = s.len().min(t.len());
    (1..=n).any(|i| cmp_words(&s[..i], &t[..i]) == Ordering::Less)
}

/// A finite string is extremal when it is strictly smaller than all its
/// rotations: XY < YX for every proper splitting.
pub fn is_extremal(s: &[u64]) -> bool {
    if s.is_empty() {
        return false;
    }
    (1..s.len()).all(|i| {
        let mut rot = s[i..].to_vec();
        rot.extend_from_slice(&s[..i]);
        cmp_words(s, &rot) == Ordering::Less
    })
}

/// A finite string is dominant when it has even length and XY << Y for every
/// proper splitting XY.
pub fn is_dominant(s: &[u64]) -> bool {
    if s.is_empty() || s.len() % 2 != 0 {
        return false;
    }
    (1..s.len()).all(|i| double_lt(s, &s[i..]))
}

/// Dominant strings S^n 1^{2m} approximating the periodic string S̄ from the
/// non-renormalizable side. Returns `count` of them, each verified dominant.
pub fn dominant_approximations(s: &[u64], count: usize) -> Result<Vec<Vec<u64>>> {
    if !is_extremal(s) || s.len() % 2 != 0 {
        return Err(MentError::Precondition(format!(
            "{} is not an extremal string of even length",
            RunString::finite(s)
        )));
    }
    let m_cap = 2 * s.len() + 6;
    let mut out = Vec::with_capacity(count);
    for n in 1..=count {
        let mut base: Vec<u64> = Vec::with_capacity(n * s.len() + 2);
        for _ in 0..n {
            base.extend_from_slice(s);
        }
        let found = (1..=m_cap).find_map(|m| {
            let mut cand = base.clone();
            cand.extend(std::iter::repeat(1u64).take(2 * m));
            if is_dominant(&cand) {
                Some(cand)
            } else {
                None
            }
        });
        match found {
            Some(c) => out.push(c),
            None => {
                return Err(MentError::Precondition(format!(
                    "no dominant continuation of {}^{} within the search cap",
                    RunString::finite(s),
                    n
                )))
            }
        }
    }
    Ok(out)
}

/// Characteristic angle in [1/4, 1/2] of the parameter whose kneading run
/// string is the periodic word S̄ (|S| even).
pub fn angle_of_periodic_runstring(s: &[u64]) -> Result<Angle> {
    if s.is_empty() || s.len() % 2 != 0 || s.contains(&0) {
        return Err(MentError::Precondition(
            "need a nonempty even-length string of positive integers".into(),
        ));
    }
    // ℓ(D θ_c) has digits 0^{s1−1} then (1^{s2} 0^{s3} … 1^{s_n} 0^{s1}) repeating.
    let mut pre = Vec::new();
    for _ in 1..s[0] {
        pre.push(false);
    }
    let mut per = Vec::new();
    for (i, &len) in s.iter().enumerate().skip(1) {
        let d = i % 2 == 1;
        for _ in 0..len {
            per.push(d);
        }
    }
    for _ in 0..s[0] {
        per.push(false);
    }
    let x = crate::angles::BinaryExpansion { pre, per }.to_angle();
    // ℓ(θ_c) = 1 − x/2 and θ_c = ℓ(θ_c)/2.
    let v: Rational = (Rational::one() - x.value() / rat(2, 1)) / rat(2, 1);
    Ok(Angle::new(v))
}

/// The unique dyadic angle with shortest binary expansion strictly inside the
/// arc (lo, hi), the arc being read counterclockwise without passing 0.
pub fn pseudocenter(lo: &Angle, hi: &Angle) -> Result<Angle> {
    if lo >= hi {
        return Err(MentError::Precondition(format!(
            "empty interval ({lo}, {hi})"
        )));
    }
    let two = BigInt::from(2);
    let mut pow = BigInt::one();
    for level in 0..4096u32 {
        if level > 0 {
            pow *= &two;
        }
        if level == 0 {
            continue;
        }
        let lo_scaled = lo.value() * BigRational::from_integer(pow.clone());
        let hi_scaled = hi.value() * BigRational::from_integer(pow.clone());
        let m = lo_scaled.floor().to_integer() + BigInt::one();
        if BigRational::from_integer(m.clone()) < hi_scaled {
            if (&m % &two).is_zero() {
                return Err(MentError::Internal(
                    "pseudocenter landed on an even candidate".into(),
                ));
            }
            return Ok(Angle::new(BigRational::new(m, pow)));
        }
    }
    Err(MentError::Internal("pseudocenter level cap exceeded".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(n: i64, d: i64) -> Angle {
        Angle::from_frac(n, d).unwrap()
    }

    #[test]
    fn runlength_examples() {
        assert_eq!(runlength(&a(1, 7)).unwrap(), RunString::periodic(&[], &[2, 1]));
        assert_eq!(runlength(&a(3, 7)).unwrap(), RunString::periodic(&[], &[1, 2]));
        let half = runlength(&Angle::half()).unwrap();
        assert_eq!(half.head, vec![1]);
        assert_eq!(half.tail, Tail::Zeros);
        assert!(runlength(&Angle::zero()).is_err());
        // depends only on ℓ(θ)
        assert_eq!(runlength(&a(3, 7)).unwrap(), runlength(&a(4, 7)).unwrap());
    }

    #[test]
    fn alt_lex_examples() {
        let s21 = RunString::periodic(&[], &[2, 1]);
        let s12 = RunString::periodic(&[], &[1, 2]);
        let s23 = RunString::periodic(&[], &[2, 3]);
        assert_eq!(alt_lex_compare(&s21, &s12).unwrap(), Ordering::Less);
        assert_eq!(alt_lex_compare(&s21, &s23).unwrap(), Ordering::Less);
        assert_eq!(alt_lex_compare(&s21, &s21).unwrap(), Ordering::Equal);
        assert_eq!(
            cmp_words(&[2, 1], &[1, 2]),
            Ordering::Less
        );
    }

    #[test]
    fn double_lt_examples() {
        assert!(double_lt(&[5, 2, 4, 3], &[2, 9, 9, 9]));
        assert!(!double_lt(&[2, 1], &[2, 1]));
        assert!(double_lt(&[2, 1, 2], &[1, 2]));
    }

    #[test]
    fn extremal_examples() {
        assert!(is_extremal(&[2, 1, 2]));
        assert!(is_extremal(&[3]));
        assert!(!is_extremal(&[1, 2, 2]));
        assert!(!is_extremal(&[2, 1, 2, 1])); // a proper power
    }

    #[test]
    fn dominant_examples() {
        assert!(is_dominant(&[5, 2, 4, 3]));
        assert!(!is_dominant(&[5, 2, 4, 5]));
        assert!(is_dominant(&[2, 1]));
        assert!(!is_dominant(&[3])); // odd length
        assert!(!is_dominant(&[1, 1]));
    }

    #[test]
    fn dominant_approximation_family() {
        let approx = dominant_approximations(&[2, 1], 2).unwrap();
        assert_eq!(approx[0], vec![2, 1, 1, 1]);
        assert_eq!(approx[1], vec![2, 1, 2, 1, 1, 1]);
        for s in &approx {
            assert!(is_dominant(s));
        }
        assert!(dominant_approximations(&[1, 1], 2).is_err());
        // approximants' angles converge to the angle of S̄ from below
        let target = angle_of_periodic_runstring(&[2, 1]).unwrap();
        assert_eq!(target, a(3, 7));
        let angles: Vec<Angle> = dominant_approximations(&[2, 1], 4)
            .unwrap()
            .iter()
            .map(|s| angle_of_periodic_runstring(s).unwrap())
            .collect();
        for w in angles.windows(2) {
            assert!(w[0] < w[1]);
        }
        for x in &angles {
            assert!(x < &target);
        }
    }

    #[test]
    fn pseudocenter_examples() {
        assert_eq!(pseudocenter(&a(13, 15), &a(14, 15)).unwrap(), a(7, 8));
        assert_eq!(pseudocenter(&a(2, 5), &a(3, 7)).unwrap(), a(13, 32));
        assert_eq!(pseudocenter(&Angle::zero(), &Angle::half()).unwrap(), a(1, 4));
        assert!(pseudocenter(&a(1, 2), &a(1, 2)).is_err());
    }

    #[test]
    fn runstring_text_round_trip() {
        for s in ["(2,1,2)", "(2,1)*", "(3|2,1)*", "(1,∞)"] {
            let r: RunString = s.parse().unwrap();
            assert_eq!(r.to_string(), s);
        }
    }
}
