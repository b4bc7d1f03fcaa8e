//! Exact circle angles, canonical binary expansions, leaves and arcs.
//!
//! An [`Angle`] is a rational point of the circle R/Z kept in lowest terms,
//! so the doubling map, the length function `ell` and the tent map are all
//! decidable exactly. Floats never appear in this module.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{MentError, Result};

pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// A point of the circle R/Z, stored as an exact rational in [0, 1).
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Angle(Rational);

impl Angle {
    /// Wraps a rational onto [0, 1).
    pub fn new(value: Rational) -> Angle {
        Angle(value.clone() - value.floor())
    }

    pub fn from_frac(num: i64, den: i64) -> Result<Angle> {
        if den == 0 {
            return Err(MentError::Parse("zero denominator".into()));
        }
        Ok(Angle::new(rat(num, den)))
    }

    pub fn zero() -> Angle {
        Angle(Rational::zero())
    }

    pub fn half() -> Angle {
        Angle(rat(1, 2))
    }

    pub fn value(&self) -> &Rational {
        &self.0
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// The doubling map D(θ) = 2θ mod 1.
    pub fn double(&self) -> Angle {
        Angle::new(&self.0 * rat(2, 1))
    }

    pub fn double_n(&self, n: usize) -> Angle {
        let mut a = self.clone();
        for _ in 0..n {
            a = a.double();
        }
        a
    }

    /// The mirror angle 1 − θ (0 maps to itself).
    pub fn one_minus(&self) -> Angle {
        Angle::new(Rational::one() - &self.0)
    }

    pub fn plus_half(&self) -> Angle {
        Angle::new(&self.0 + rat(1, 2))
    }

    /// True when the denominator is a power of two, i.e. the binary
    /// expansion terminates.
    pub fn is_dyadic(&self) -> bool {
        let mut d = self.denom().clone();
        let two = BigInt::from(2);
        while (&d % &two).is_zero() {
            d /= &two;
        }
        d.is_one()
    }

    /// True when the doubling orbit is purely periodic (odd denominator).
    pub fn is_periodic(&self) -> bool {
        (self.denom() % BigInt::from(2)).is_one() || self.denom().is_one()
    }

    /// Length ℓ(θ) of the leaf (θ, 1−θ) measured on the side containing 0:
    /// 2θ for θ < 1/2, otherwise 2 − 2θ.
    pub fn ell(&self) -> Rational {
        let half = rat(1, 2);
        if self.0 < half {
            &self.0 * rat(2, 1)
        } else {
            rat(2, 1) - &self.0 * rat(2, 1)
        }
    }

    /// Canonical eventually periodic binary expansion.
    pub fn expansion(&self) -> BinaryExpansion {
        let mut seen: HashMap<Rational, usize> = HashMap::new();
        let mut digits: Vec<bool> = Vec::new();
        let mut x = self.0.clone();
        let half = rat(1, 2);
        loop {
            if let Some(&start) = seen.get(&x) {
                let per = digits.split_off(start);
                return BinaryExpansion { pre: digits, per };
            }
            seen.insert(x.clone(), digits.len());
            let bit = x >= half;
            digits.push(bit);
            x = &x * rat(2, 1);
            if bit {
                x -= Rational::one();
            }
        }
    }

    /// Streams the first `n` binary digits.
    pub fn first_bits(&self, n: usize) -> Vec<bool> {
        self.expansion().bits_prefix(n)
    }

    /// (preperiod length, period length) of the doubling orbit.
    pub fn orbit_shape(&self) -> (usize, usize) {
        let e = self.expansion();
        (e.pre.len(), e.per.len())
    }

    /// Distinct doubling orbit points, in orbit order, up to the first repeat.
    pub fn orbit(&self) -> Vec<Angle> {
        let mut seen: HashMap<Angle, usize> = HashMap::new();
        let mut out = Vec::new();
        let mut x = self.clone();
        while !seen.contains_key(&x) {
            seen.insert(x.clone(), out.len());
            out.push(x.clone());
            x = x.double();
        }
        out
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom().is_one() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl FromStr for Angle {
    type Err = MentError;

    /// Accepts "p/q", a bare integer, or binary text like "0.01(10)",
    /// "0.(011)", "0.101".
    fn from_str(s: &str) -> Result<Angle> {
        let s = s.trim();
        if s.starts_with("0.") || s.starts_with('.') {
            let body = s.strip_prefix("0.").or_else(|| s.strip_prefix('.')).unwrap();
            let exp = BinaryExpansion::parse_body(body)?;
            return Ok(exp.to_angle());
        }
        if let Some((n, d)) = s.split_once('/') {
            let num: BigInt = n
                .trim()
                .parse()
                .map_err(|_| MentError::Parse(format!("bad numerator in '{s}'")))?;
            let den: BigInt = d
                .trim()
                .parse()
                .map_err(|_| MentError::Parse(format!("bad denominator in '{s}'")))?;
            if den.is_zero() {
                return Err(MentError::Parse(format!("zero denominator in '{s}'")));
            }
            return Ok(Angle::new(Rational::new(num, den)));
        }
        let num: BigInt = s
            .parse()
            .map_err(|_| MentError::Parse(format!("bad angle '{s}'")))?;
        Ok(Angle::new(Rational::from_integer(num)))
    }
}

impl Serialize for Angle {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Angle {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Angle, D::Error> {
        let s = String::deserialize(de)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The full tent map T(x) = min(2x, 2 − 2x) on [0, 1].
pub fn tent(x: &Rational) -> Rational {
    let two_x = x * rat(2, 1);
    let alt = rat(2, 1) - &two_x;
    if two_x <= alt {
        two_x
    } else {
        alt
    }
}

/// Canonical binary expansion: finite preperiod word followed by a primitive
/// period word. Dyadic angles carry period word "0"; an all-ones period never
/// occurs (0.111… is wrapped to 0).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryExpansion {
    pub pre: Vec<bool>,
    pub per: Vec<bool>,
}

impl BinaryExpansion {
    pub fn to_angle(&self) -> Angle {
        let pre_len = self.pre.len() as u32;
        let per_len = self.per.len() as u32;
        let mut pre_val = BigInt::zero();
        for &b in &self.pre {
            pre_val = pre_val * 2 + BigInt::from(b as u8);
        }
        let mut per_val = BigInt::zero();
        for &b in &self.per {
            per_val = per_val * 2 + BigInt::from(b as u8);
        }
        let two = BigInt::from(2);
        let pre_den = two.pow(pre_len);
        let mut v = Rational::new(pre_val, pre_den.clone());
        if per_len > 0 {
            let per_den = (two.pow(per_len) - BigInt::one()) * pre_den;
            v += Rational::new(per_val, per_den);
        }
        Angle::new(v)
    }

    /// Digit at position i (0-based, after the binary point).
    pub fn bit(&self, i: usize) -> bool {
        if i < self.pre.len() {
            self.pre[i]
        } else {
            self.per[(i - self.pre.len()) % self.per.len()]
        }
    }

    pub fn bits_prefix(&self, n: usize) -> Vec<bool> {
        (0..n).map(|i| self.bit(i)).collect()
    }

    fn parse_body(body: &str) -> Result<BinaryExpansion> {
        let bad = || MentError::Parse(format!("bad binary angle body '{body}'"));
        let parse_bits = |t: &str| -> Result<Vec<bool>> {
            t.chars()
                .map(|c| match c {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    _ => Err(bad()),
                })
                .collect()
        };
        let (pre_s, per_s) = match body.find('(') {
            Some(i) => {
                let rest = &body[i + 1..];
                let j = rest.find(')').ok_or_else(bad)?;
                if !rest[j + 1..].is_empty() {
                    return Err(bad());
                }
                (&body[..i], &rest[..j])
            }
            None => (body, ""),
        };
        let pre = parse_bits(pre_s)?;
        let per = if per_s.is_empty() {
            vec![false]
        } else {
            parse_bits(per_s)?
        };
        if pre.is_empty() && per_s.is_empty() {
            return Err(bad());
        }
        Ok(BinaryExpansion { pre, per })
    }
}

impl fmt::Display for BinaryExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "0.")?;
        for &b in &self.pre {
            write!(f, "{}", b as u8)?;
        }
        write!(f, "(")?;
        for &b in &self.per {
            write!(f, "{}", b as u8)?;
        }
        write!(f, ")")
    }
}

/// An unordered pair of angles joined by a chord of the disk. Endpoints are
/// stored ascending; `a == b` is the degenerate case.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Leaf {
    pub a: Angle,
    pub b: Angle,
}

impl Leaf {
    pub fn new(x: Angle, y: Angle) -> Leaf {
        if x <= y {
            Leaf { a: x, b: y }
        } else {
            Leaf { a: y, b: x }
        }
    }

    pub fn degenerate(x: Angle) -> Leaf {
        Leaf { a: x.clone(), b: x }
    }

    pub fn is_degenerate(&self) -> bool {
        self.a == self.b
    }

    /// Shorter arc distance between the endpoints, in [0, 1/2].
    pub fn length(&self) -> Rational {
        let d = self.b.value() - self.a.value();
        let alt = Rational::one() - &d;
        if d <= alt {
            d
        } else {
            alt
        }
    }

    pub fn image(&self) -> Leaf {
        Leaf::new(self.a.double(), self.b.double())
    }

    fn has_endpoint(&self, x: &Angle) -> bool {
        &self.a == x || &self.b == x
    }

    /// Strictly inside the open arc (a, b) that runs counterclockwise from
    /// the smaller to the larger endpoint.
    fn strictly_inside(&self, x: &Angle) -> bool {
        x > &self.a && x < &self.b
    }

    /// True when the two chords cross in the open disk.
    pub fn crosses(&self, other: &Leaf) -> bool {
        if self.has_endpoint(&other.a) || self.has_endpoint(&other.b) {
            return false;
        }
        self.strictly_inside(&other.a) != self.strictly_inside(&other.b)
    }
}

/// Leaf length as a free function, matching the chord-length use sites.
pub fn leaf_length(leaf: &Leaf) -> Rational {
    leaf.length()
}

/// Whether `l1` separates `l2` from the degenerate leaf at `root`: the
/// endpoints of `l2` and the root lie in different components of the circle
/// minus `l1`'s endpoints. Crossing chords are rejected.
pub fn leaf_separates(l1: &Leaf, l2: &Leaf, root: &Angle) -> Result<bool> {
    if l1.crosses(l2) {
        return Err(MentError::Precondition(format!(
            "leaves ({}, {}) and ({}, {}) are linked",
            l1.a, l1.b, l2.a, l2.b
        )));
    }
    if l1 == l2 || l1.is_degenerate() {
        return Ok(false);
    }
    if l1.has_endpoint(root) {
        return Ok(false);
    }
    // Where does l2 sit relative to l1? Shared endpoints are ignored.
    let mut side: Option<bool> = None;
    for e in [&l2.a, &l2.b] {
        if !l1.has_endpoint(e) {
            side = Some(l1.strictly_inside(e));
        }
    }
    let Some(l2_inside) = side else {
        return Ok(false);
    };
    let root_inside = l1.strictly_inside(root);
    Ok(l2_inside != root_inside)
}

/// Open arc of the circle running counterclockwise from `start` to `end`.
/// When `start == end` the arc is empty. The arc contains 0 exactly when
/// `start > end`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CircArc {
    pub start: Angle,
    pub end: Angle,
}

impl CircArc {
    pub fn new(start: Angle, end: Angle) -> CircArc {
        CircArc { start, end }
    }

    pub fn is_empty(&self) -> bool {
        self.start == self.end
    }

    pub fn contains_zero(&self) -> bool {
        !self.is_empty() && self.start > self.end
    }

    pub fn contains(&self, x: &Angle) -> bool {
        if self.is_empty() {
            return false;
        }
        if self.start < self.end {
            x > &self.start && x < &self.end
        } else {
            x > &self.start || x < &self.end
        }
    }

    pub fn length(&self) -> Rational {
        let d = self.end.value() - self.start.value();
        if d.is_negative() {
            d + Rational::one()
        } else {
            d
        }
    }

    /// Arc bounded by the two endpoints of `leaf` that contains 0. Degenerate
    /// leaves give the empty arc.
    pub fn through_zero(leaf: &Leaf) -> CircArc {
        if leaf.is_degenerate() {
            return CircArc::new(leaf.a.clone(), leaf.b.clone());
        }
        // (b, a) runs from the larger endpoint up through 1 ≡ 0.
        CircArc::new(leaf.b.clone(), leaf.a.clone())
    }

    /// Arc bounded by the endpoints of `leaf` that avoids 0.
    pub fn avoiding_zero(leaf: &Leaf) -> CircArc {
        CircArc::new(leaf.a.clone(), leaf.b.clone())
    }
}

/// Exact comparison of two angles as circle points, numeric order on [0, 1).
pub fn angle_cmp(a: &Angle, b: &Angle) -> Ordering {
    a.cmp(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(n: i64, d: i64) -> Angle {
        Angle::from_frac(n, d).unwrap()
    }

    #[test]
    fn doubling_examples() {
        assert_eq!(a(3, 7).double(), a(6, 7));
        assert_eq!(Angle::zero().double(), Angle::zero());
        assert_eq!(a(9, 31).double(), a(18, 31));
    }

    #[test]
    fn ell_examples() {
        assert_eq!(a(1, 3).ell(), rat(2, 3));
        assert_eq!(a(2, 3).ell(), rat(2, 3));
        assert_eq!(a(3, 7).ell(), rat(6, 7));
        // symmetry
        assert_eq!(a(3, 7).ell(), a(4, 7).ell());
    }

    #[test]
    fn tent_examples() {
        assert_eq!(tent(&rat(1, 3)), rat(2, 3));
        assert_eq!(tent(&rat(2, 3)), rat(2, 3));
        // semiconjugacy at 3/7: ℓ(D(3/7)) = T(ℓ(3/7)) = 2/7
        assert_eq!(a(3, 7).double().ell(), rat(2, 7));
        assert_eq!(tent(&a(3, 7).ell()), rat(2, 7));
    }

    #[test]
    fn expansion_round_trip_and_canonical_form() {
        let x = a(3, 7);
        let e = x.expansion();
        assert!(e.pre.is_empty());
        assert_eq!(e.per, vec![false, true, true]);
        assert_eq!(e.to_angle(), x);

        let y = a(5, 12);
        let e = y.expansion();
        assert_eq!(e.pre, vec![false, true]);
        assert_eq!(e.per, vec![true, false]);
        assert_eq!(e.to_angle(), y);

        // dyadic: period word "0"
        let d = a(1, 4);
        let e = d.expansion();
        assert_eq!(e.pre, vec![false, true]);
        assert_eq!(e.per, vec![false]);
        assert_eq!(e.to_angle(), d);
    }

    #[test]
    fn parse_and_print() {
        assert_eq!("0.(011)".parse::<Angle>().unwrap(), a(3, 7));
        assert_eq!("0.01(10)".parse::<Angle>().unwrap(), a(5, 12));
        assert_eq!("3/7".parse::<Angle>().unwrap(), a(3, 7));
        assert_eq!(a(3, 7).expansion().to_string(), "0.(011)");
        assert_eq!(a(5, 12).expansion().to_string(), "0.01(10)");
        assert!("junk".parse::<Angle>().is_err());
    }

    #[test]
    fn leaf_lengths() {
        assert_eq!(leaf_length(&Leaf::new(a(1, 3), a(2, 3))), rat(1, 3));
        assert_eq!(leaf_length(&Leaf::degenerate(a(1, 7))), rat(0, 1));
        assert_eq!(leaf_length(&Leaf::new(a(3, 7), a(4, 7))), rat(1, 7));
    }

    #[test]
    fn separation_examples() {
        let l1 = Leaf::new(a(1, 3), a(2, 3));
        let l2 = Leaf::new(a(3, 7), a(4, 7));
        let zero = Angle::zero();
        assert!(leaf_separates(&l1, &l2, &zero).unwrap());
        assert!(!leaf_separates(&l1, &l1, &zero).unwrap());
        assert!(!leaf_separates(&l2, &l1, &zero).unwrap());
        // linked leaves are rejected
        let l3 = Leaf::new(a(1, 2), a(3, 4));
        assert!(leaf_separates(&l1, &l3, &zero).is_err());
    }

    #[test]
    fn arcs() {
        let j = CircArc::through_zero(&Leaf::new(a(6, 7), a(1, 7)));
        assert!(j.contains_zero());
        assert!(j.contains(&Angle::zero()));
        assert!(j.contains(&a(1, 14)));
        assert!(!j.contains(&a(1, 2)));
        assert_eq!(j.length(), rat(2, 7));
    }
}
