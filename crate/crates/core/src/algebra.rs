//! Exact truth degrees and the three residuated algebras on the unit interval.
//!
//! Every fuzzy quantity in the engine is a [`Degree`]: an arbitrary-precision
//! rational in `[0, 1]`. All three supported t-norms and their residua are
//! closed over the rationals, so no operation ever rounds.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Errors produced while building a [`Degree`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DegreeError {
    #[error("malformed degree literal `{0}`")]
    Syntax(String),
    #[error("degree `{0}` lies outside [0, 1]")]
    OutOfRange(String),
    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),
}

/// A truth value in `[0, 1]`, stored as a reduced rational.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Degree(BigRational);

impl Degree {
    pub fn zero() -> Self {
        Degree(BigRational::zero())
    }

    pub fn one() -> Self {
        Degree(BigRational::one())
    }

    /// Wraps a rational, rejecting values outside the unit interval.
    pub fn new(value: BigRational) -> Result<Self, DegreeError> {
        if value.is_negative() || value > BigRational::one() {
            return Err(DegreeError::OutOfRange(value.to_string()));
        }
        Ok(Degree(value))
    }

    /// `numer / denom` as a degree.
    pub fn ratio(numer: i64, denom: i64) -> Result<Self, DegreeError> {
        if denom == 0 {
            return Err(DegreeError::ZeroDenominator(format!("{numer}/{denom}")));
        }
        Self::new(BigRational::new(numer.into(), denom.into()))
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    /// Nearest `f64`; for display only, never for decisions.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Exact `numer/denom` rendering, e.g. `3/10`, `0`, `1`.
    pub fn to_rational_string(&self) -> String {
        if self.0.denom().is_one() {
            self.0.numer().to_string()
        } else {
            format!("{}/{}", self.0.numer(), self.0.denom())
        }
    }

    /// Lattice meet (minimum).
    pub fn meet(&self, other: &Degree) -> Degree {
        if self <= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    /// Lattice join (maximum).
    pub fn join(&self, other: &Degree) -> Degree {
        if self >= other {
            self.clone()
        } else {
            other.clone()
        }
    }

    /// Meet of a family; the empty meet is 1.
    pub fn meet_all<'a, I: IntoIterator<Item = &'a Degree>>(items: I) -> Degree {
        items
            .into_iter()
            .min()
            .cloned()
            .unwrap_or_else(Degree::one)
    }

    /// Join of a family; the empty join is 0.
    pub fn join_all<'a, I: IntoIterator<Item = &'a Degree>>(items: I) -> Degree {
        items
            .into_iter()
            .max()
            .cloned()
            .unwrap_or_else(Degree::zero)
    }

    // Only called with results that are in range by construction.
    fn from_unchecked(value: BigRational) -> Degree {
        debug_assert!(!value.is_negative() && value <= BigRational::one());
        Degree(value)
    }
}

impl fmt::Debug for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Degree({})", self.to_rational_string())
    }
}

/// Renders the shortest exact literal: a terminating decimal when the
/// denominator only has factors 2 and 5, `n/d` otherwise.
impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match terminating_decimal(&self.0) {
            Some(s) => f.write_str(&s),
            None => f.write_str(&self.to_rational_string()),
        }
    }
}

fn terminating_decimal(value: &BigRational) -> Option<String> {
    let mut denom = value.denom().clone();
    let two = BigInt::from(2);
    let five = BigInt::from(5);
    let (mut twos, mut fives) = (0u32, 0u32);
    while denom.is_even() {
        denom /= &two;
        twos += 1;
    }
    while (&denom % &five).is_zero() {
        denom /= &five;
        fives += 1;
    }
    if !denom.is_one() {
        return None;
    }
    let digits = twos.max(fives);
    if digits == 0 {
        return Some(value.numer().to_string());
    }
    let scaled = value * BigRational::from_integer(BigInt::from(10).pow(digits));
    let scaled = scaled.to_integer().to_string();
    let width = digits as usize + 1;
    let padded = format!("{scaled:0>width$}");
    let (int_part, frac_part) = padded.split_at(padded.len() - digits as usize);
    Some(format!("{int_part}.{frac_part}"))
}

/// Accepts `0`, `1`, decimals such as `0.25` and rationals such as `1/4`.
impl FromStr for Degree {
    type Err = DegreeError;

    fn from_str(text: &str) -> Result<Self, Self::Err> {
        let s = text.trim();
        let syntax = || DegreeError::Syntax(text.to_string());
        let (negative, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s),
        };
        let is_digits = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit());
        let value = if let Some((num, den)) = body.split_once('/') {
            let (num, den) = (num.trim(), den.trim());
            if !is_digits(num) || !is_digits(den) {
                return Err(syntax());
            }
            let den: BigInt = den.parse().map_err(|_| syntax())?;
            if den.is_zero() {
                return Err(DegreeError::ZeroDenominator(text.to_string()));
            }
            BigRational::new(num.parse().map_err(|_| syntax())?, den)
        } else if let Some((int, frac)) = body.split_once('.') {
            if !(is_digits(int) || int.is_empty()) || !is_digits(frac) {
                return Err(syntax());
            }
            let all: BigInt = format!("{int}{frac}").parse().map_err(|_| syntax())?;
            let scale = BigInt::from(10).pow(frac.len() as u32);
            BigRational::new(all, scale)
        } else if is_digits(body) {
            BigRational::from_integer(body.parse().map_err(|_| syntax())?)
        } else {
            return Err(syntax());
        };
        let value = if negative { -value } else { value };
        if value.is_negative() || value > BigRational::one() {
            return Err(DegreeError::OutOfRange(text.to_string()));
        }
        Ok(Degree(value))
    }
}

/// The residuated algebra an engine run is parameterized by.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Algebra {
    Goedel,
    Product,
    Lukasiewicz,
}

impl Algebra {
    pub const ALL: [Algebra; 3] = [Algebra::Goedel, Algebra::Product, Algebra::Lukasiewicz];

    pub fn name(self) -> &'static str {
        match self {
            Algebra::Goedel => "godel",
            Algebra::Product => "product",
            Algebra::Lukasiewicz => "lukasiewicz",
        }
    }

    /// The t-norm `a ⊗ b`.
    pub fn conj(self, a: &Degree, b: &Degree) -> Degree {
        match self {
            Algebra::Goedel => a.meet(b),
            Algebra::Product => Degree::from_unchecked(&a.0 * &b.0),
            Algebra::Lukasiewicz => {
                let sum = &a.0 + &b.0 - BigRational::one();
                if sum.is_positive() {
                    Degree::from_unchecked(sum)
                } else {
                    Degree::zero()
                }
            }
        }
    }

    /// The residuum `a → b`, the largest `s` with `s ⊗ a ≤ b`.
    pub fn resid(self, a: &Degree, b: &Degree) -> Degree {
        if a <= b {
            return Degree::one();
        }
        match self {
            Algebra::Goedel => b.clone(),
            // a > b ≥ 0, so a is nonzero
            Algebra::Product => Degree::from_unchecked(&b.0 / &a.0),
            Algebra::Lukasiewicz => Degree::from_unchecked(BigRational::one() - &a.0 + &b.0),
        }
    }

    /// The biresiduum `a ↔ b`.
    pub fn biresid(self, a: &Degree, b: &Degree) -> Degree {
        self.resid(a, b).meet(&self.resid(b, a))
    }
}

impl fmt::Display for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algebra {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "godel" | "goedel" | "gödel" | "g" => Ok(Algebra::Goedel),
            "product" | "p" => Ok(Algebra::Product),
            "lukasiewicz" | "łukasiewicz" | "l" => Ok(Algebra::Lukasiewicz),
            other => Err(format!(
                "unknown t-norm `{other}` (expected godel, product or lukasiewicz)"
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str) -> Degree {
        s.parse().unwrap()
    }

    #[test]
    fn table_values() {
        assert_eq!(Algebra::Lukasiewicz.conj(&d("0.7"), &d("0.4")), d("0.1"));
        assert_eq!(Algebra::Product.conj(&d("0.7"), &d("0.4")), d("0.28"));
        assert_eq!(Algebra::Goedel.conj(&d("0.7"), &d("0.4")), d("0.4"));
        assert_eq!(Algebra::Product.resid(&d("0.8"), &d("0.4")), d("0.5"));
        assert_eq!(Algebra::Lukasiewicz.resid(&d("0.4"), &d("0.3")), d("0.9"));
        assert_eq!(Algebra::Goedel.resid(&d("0.4"), &d("0.3")), d("0.3"));
    }

    #[test]
    fn biresiduum_examples() {
        assert_eq!(Algebra::Goedel.biresid(&d("0.3"), &d("0.4")), d("0.3"));
        assert_eq!(Algebra::Lukasiewicz.biresid(&d("0.4"), &d("0.3")), d("0.9"));
        for alg in Algebra::ALL {
            assert!(alg.biresid(&d("2/7"), &d("2/7")).is_one());
        }
    }

    #[test]
    fn neutral_and_ordered_residuum() {
        for alg in Algebra::ALL {
            for x in ["0", "1/3", "0.5", "1"] {
                assert_eq!(alg.conj(&d(x), &Degree::one()), d(x));
                assert!(alg.resid(&d(x), &d("1")).is_one());
            }
        }
    }

    #[test]
    fn literals() {
        assert_eq!(d("1/4"), d("0.25"));
        assert_eq!(d("2/4").to_rational_string(), "1/2");
        assert_eq!(d("0").to_string(), "0");
        assert_eq!(d("1").to_string(), "1");
        assert_eq!(d("3/10").to_string(), "0.3");
        assert_eq!(d("2/3").to_string(), "2/3");
        assert_eq!(d("1/8").to_string(), "0.125");
        assert_eq!(d(".5"), d("1/2"));
        assert!(matches!("1.5".parse::<Degree>(), Err(DegreeError::OutOfRange(_))));
        assert!(matches!("-0.1".parse::<Degree>(), Err(DegreeError::OutOfRange(_))));
        assert!(matches!("2".parse::<Degree>(), Err(DegreeError::OutOfRange(_))));
        assert!(matches!("1/0".parse::<Degree>(), Err(DegreeError::ZeroDenominator(_))));
        assert!(matches!("abc".parse::<Degree>(), Err(DegreeError::Syntax(_))));
        assert!(matches!("0.".parse::<Degree>(), Err(DegreeError::Syntax(_))));
    }

    #[test]
    fn empty_aggregates() {
        assert!(Degree::meet_all(std::iter::empty()).is_one());
        assert!(Degree::join_all(std::iter::empty()).is_zero());
    }

    #[test]
    fn algebra_names_parse() {
        for alg in Algebra::ALL {
            assert_eq!(alg.name().parse::<Algebra>().unwrap(), alg);
        }
        assert!("min".parse::<Algebra>().is_err());
    }
}
