//! Probabilities, information contents and entropy.
//!
//! Probabilities are carried either as exact rationals or as binary64 floats.
//! Information contents are always binary64 bits, since `-log2(p)` is
//! irrational for almost every rational `p`. A probability of zero maps to
//! `+inf` bits so refuted models can flow through an update without special
//! casing.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Float normalization tolerance for distributions and likelihood columns.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-9;

/// A real number that is either an exact rational or a binary64 float.
///
/// Arithmetic between two exact values stays exact; anything touching a
/// float degrades to a float.
#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Exact(BigRational),
    Float(f64),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Exact(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar::Exact(BigRational::one())
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Float(_) => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => ratio_to_f64(r),
            Scalar::Float(f) => *f,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_zero(),
            Scalar::Float(f) => *f == 0.0,
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a + b),
            _ => Scalar::Float(self.to_f64() + other.to_f64()),
        }
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a * b),
            _ => Scalar::Float(self.to_f64() * other.to_f64()),
        }
    }

    /// `None` when the divisor is zero.
    pub fn div(&self, other: &Scalar) -> Option<Scalar> {
        if other.is_zero() {
            return None;
        }
        Some(match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(a / b),
            _ => Scalar::Float(self.to_f64() / other.to_f64()),
        })
    }

    /// Base-2 logarithm; `-inf` at zero. Negative inputs yield NaN.
    pub fn log2(&self) -> f64 {
        match self {
            Scalar::Exact(r) => ratio_log2(r),
            Scalar::Float(f) => f.log2(),
        }
    }

    /// Exact sign-aware comparison when both sides are exact, float otherwise.
    pub fn partial_cmp_value(&self, other: &Scalar) -> Option<std::cmp::Ordering> {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Some(a.cmp(b)),
            _ => self.to_f64().partial_cmp(&other.to_f64()),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) if r.denom().is_one() => write!(f, "{}", r.numer()),
            Scalar::Exact(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Scalar::Float(x) => write!(f, "{x}"),
        }
    }
}

fn ratio_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Only reachable for magnitudes beyond f64 range.
        let l = ratio_log2(r);
        if r.is_negative() {
            -l.exp2()
        } else {
            l.exp2()
        }
    })
}

fn bigint_log2(n: &BigInt) -> f64 {
    debug_assert!(n.sign() == Sign::Plus);
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().unwrap_or(f64::INFINITY).log2();
    }
    let shift = bits - 64;
    let top: BigInt = n >> shift;
    top.to_f64().unwrap_or(f64::INFINITY).log2() + shift as f64
}

fn ratio_log2(r: &BigRational) -> f64 {
    if r.is_zero() {
        return f64::NEG_INFINITY;
    }
    if r.is_negative() {
        return f64::NAN;
    }
    if r.is_one() {
        return 0.0;
    }
    match r.to_f64() {
        Some(v) if v.is_normal() => v.log2(),
        _ => bigint_log2(r.numer()) - bigint_log2(r.denom()),
    }
}

/// Parse `"num/den"`, an integer, or a decimal literal.
///
/// Fractions and integers are exact; decimals are floats.
impl FromStr for Scalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let bad = || Error::BadProbabilityLiteral(s.to_string());
        if let Some((n, d)) = t.split_once('/') {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            return Ok(Scalar::Exact(BigRational::new(n, d)));
        }
        if let Ok(n) = t.parse::<BigInt>() {
            return Ok(Scalar::Exact(BigRational::from_integer(n)));
        }
        match t.parse::<f64>() {
            Ok(f) if f.is_finite() => Ok(Scalar::Float(f)),
            _ => Err(bad()),
        }
    }
}

/// A probability in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Probability(Scalar);

impl Probability {
    pub fn new(value: Scalar) -> Result<Self> {
        let ok = match &value {
            Scalar::Exact(r) => !r.is_negative() && *r <= BigRational::one(),
            Scalar::Float(f) => (0.0..=1.0).contains(f),
        };
        if ok {
            Ok(Probability(value))
        } else {
            Err(Error::ProbabilityOutOfRange(value.to_string()))
        }
    }

    /// Exact `num/den`, reduced to lowest terms.
    pub fn ratio(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::BadProbabilityLiteral(format!("{num}/{den}")));
        }
        Self::new(Scalar::Exact(BigRational::new(num.into(), den.into())))
    }

    pub fn from_rational(r: BigRational) -> Result<Self> {
        Self::new(Scalar::Exact(r))
    }

    pub fn from_f64(p: f64) -> Result<Self> {
        Self::new(Scalar::Float(p))
    }

    pub fn zero() -> Self {
        Probability(Scalar::zero())
    }

    pub fn one() -> Self {
        Probability(Scalar::one())
    }

    pub fn scalar(&self) -> &Scalar {
        &self.0
    }

    pub fn into_scalar(self) -> Scalar {
        self.0
    }

    pub fn is_exact(&self) -> bool {
        self.0.is_exact()
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        self.0.as_exact()
    }

    pub fn value(&self) -> f64 {
        self.0.to_f64()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn info(&self) -> Bits {
        info_content(self)
    }
}

impl fmt::Display for Probability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl FromStr for Probability {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Probability::new(s.parse()?)
    }
}

/// An amount of information in bits. Never NaN; may be infinite.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Bits(f64);

impl Bits {
    pub const ZERO: Bits = Bits(0.0);
    pub const INFINITY: Bits = Bits(f64::INFINITY);
    pub const NEG_INFINITY: Bits = Bits(f64::NEG_INFINITY);

    pub fn new(value: f64) -> Result<Self> {
        if value.is_nan() {
            Err(Error::NanBits)
        } else {
            Ok(Bits(value))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }

    /// `self - other`, rejecting the `inf - inf` case.
    pub fn minus(self, other: Bits) -> Result<Bits> {
        Bits::new(self.0 - other.0)
    }
}

impl From<Bits> for f64 {
    fn from(b: Bits) -> f64 {
        b.0
    }
}

impl fmt::Display for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} bits", self.0)
    }
}

/// Self-information `-log2 p`. Zero probability gives `+inf`.
pub fn info_content(p: &Probability) -> Bits {
    // -log2(0) is +inf; -(-inf) keeps the sign right and avoids -0.0 at p = 1.
    let l = p.scalar().log2();
    Bits(if l == 0.0 { 0.0 } else { -l })
}

/// Probability carried by an information content: `2^-b`.
pub fn prob_from_info(b: Bits) -> Result<Probability> {
    if b.0 < 0.0 {
        return Err(Error::NegativeInformation(b.0));
    }
    Ok(Probability(Scalar::Float((-b.0).exp2())))
}

/// Labeled discrete distribution.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    labels: Vec<String>,
    probabilities: Vec<Probability>,
}

impl Distribution {
    pub fn new(labels: Vec<String>, probabilities: Vec<Probability>) -> Result<Self> {
        Self::with_context(labels, probabilities, "distribution")
    }

    pub(crate) fn with_context(
        labels: Vec<String>,
        probabilities: Vec<Probability>,
        context: &str,
    ) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::EmptyDistribution);
        }
        if labels.len() != probabilities.len() {
            return Err(Error::LengthMismatch {
                what: format!("{context} probabilities"),
                expected: labels.len(),
                found: probabilities.len(),
            });
        }
        check_unique(&labels)?;
        check_normalized(probabilities.iter(), context)?;
        Ok(Distribution {
            labels,
            probabilities,
        })
    }

    /// Exact uniform distribution over `labels`.
    pub fn uniform(labels: Vec<String>) -> Result<Self> {
        let n = labels.len() as i64;
        if n == 0 {
            return Err(Error::EmptyDistribution);
        }
        let probabilities = (0..n).map(|_| Probability::ratio(1, n)).collect::<Result<_>>()?;
        Self::new(labels, probabilities)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn probabilities(&self) -> &[Probability] {
        &self.probabilities
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn get(&self, label: &str) -> Option<&Probability> {
        self.index_of(label).map(|i| &self.probabilities[i])
    }

    pub fn is_exact(&self) -> bool {
        self.probabilities.iter().all(Probability::is_exact)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &Probability)> {
        self.labels
            .iter()
            .map(String::as_str)
            .zip(self.probabilities.iter())
    }
}

pub(crate) fn check_unique(labels: &[String]) -> Result<()> {
    for (i, l) in labels.iter().enumerate() {
        if labels[..i].contains(l) {
            return Err(Error::DuplicateLabel(l.clone()));
        }
    }
    Ok(())
}

/// Exact sum must be exactly one; any float entry switches to the tolerance.
pub(crate) fn check_normalized<'a>(
    probs: impl Iterator<Item = &'a Probability>,
    context: &str,
) -> Result<()> {
    let sum = probs.fold(Scalar::zero(), |acc, p| acc.add(p.scalar()));
    let ok = match &sum {
        Scalar::Exact(r) => r.is_one(),
        Scalar::Float(f) => (f - 1.0).abs() <= NORMALIZATION_TOLERANCE,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::NotNormalized {
            context: context.to_string(),
            sum: sum.to_string(),
        })
    }
}

/// `p * I(p)` with `0 * inf = 0`.
pub(crate) fn weighted_surprisal(weight: f64, bits: f64) -> f64 {
    if weight == 0.0 {
        0.0
    } else {
        weight * bits
    }
}

/// Shannon entropy in bits.
pub fn entropy(d: &Distribution) -> Bits {
    let h = d
        .probabilities()
        .iter()
        .map(|p| weighted_surprisal(p.value(), info_content(p).value()))
        .sum::<f64>();
    Bits(h.max(0.0))
}
