//! Scalar fields for the exact linear algebra layer.
//!
//! Everything downstream is generic over [`Field`]. Two implementations are
//! provided: [`num_rational::BigRational`] and [`Rational`], an exact rational
//! that keeps numerator and denominator in machine words while they fit and
//! promotes to a `BigRational` otherwise. The two agree bit-for-bit on every
//! operation; `Rational` is simply faster on the small integers and small
//! fractions that dominate face and descent algebra computations.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// An exact field of characteristic zero, ordered so that signs of
/// determinants are meaningful.
pub trait Field:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
{
    fn from_i64(v: i64) -> Self;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }

    /// `self += a * b` without cloning `self`.
    fn mul_add_assign(&mut self, a: &Self, b: &Self) {
        *self += a.clone() * b.clone();
    }

    /// Accumulates the bilinear product `sum_{i,j} u_i v_j T(i,j)` into `out`,
    /// where `terms(i, j)` lists the structure constants `(k, c)` of the
    /// product of basis elements `i` and `j`.
    fn accumulate_bilinear<'s, T>(out: &mut [Self], u: &[(u32, Self)], v: &[(u32, Self)], terms: T)
    where
        Self: 's,
        T: Fn(u32, u32) -> &'s [(u32, Self)],
    {
        for (i, a) in u {
            for (j, b) in v {
                let ab = a.clone() * b.clone();
                for (k, c) in terms(*i, *j) {
                    out[*k as usize].mul_add_assign(&ab, c);
                }
            }
        }
    }

    fn signum_i8(&self) -> i8 {
        match self.partial_cmp(&Self::zero()) {
            Some(Ordering::Greater) => 1,
            Some(Ordering::Less) => -1,
            _ => 0,
        }
    }

    /// The value as an exact `BigRational`, used at serialization boundaries.
    fn to_big(&self) -> BigRational;
}

impl Field for BigRational {
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn mul_add_assign(&mut self, a: &Self, b: &Self) {
        *self += a * b;
    }

    fn to_big(&self) -> BigRational {
        self.clone()
    }
}

/// Exact rational number with an inline machine-word representation.
///
/// Invariant: the value is always reduced with a positive denominator, and
/// it is stored inline whenever numerator and denominator both fit in `i64`.
#[derive(Clone)]
pub struct Rational(Repr);

#[derive(Clone)]
enum Repr {
    Small(i64, i64),
    Big(Box<BigRational>),
}

fn fit(num: i128, den: i128) -> Rational {
    debug_assert!(den > 0);
    if let (Ok(n), Ok(d)) = (i64::try_from(num), i64::try_from(den)) {
        Rational(Repr::Small(n, d))
    } else {
        Rational::from_big(BigRational::new_raw(BigInt::from(num), BigInt::from(den)))
    }
}

fn reduce(num: i128, den: i128) -> Rational {
    debug_assert!(den != 0);
    let (mut num, mut den) = (num, den);
    if den < 0 {
        // i128::MIN cannot arise from products of two i64 magnitudes.
        num = -num;
        den = -den;
    }
    if den == 1 {
        return fit(num, 1);
    }
    let g = num.gcd(&den);
    if g > 1 {
        num /= g;
        den /= g;
    }
    fit(num, den)
}

impl Rational {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        reduce(num as i128, den as i128)
    }

    pub fn from_integer(v: i64) -> Self {
        Rational(Repr::Small(v, 1))
    }

    pub fn from_big(v: BigRational) -> Self {
        // BigRational keeps itself reduced with a positive denominator.
        if let (Some(n), Some(d)) = (v.numer().to_i64(), v.denom().to_i64()) {
            Rational(Repr::Small(n, d))
        } else {
            Rational(Repr::Big(Box::new(v)))
        }
    }

    pub fn to_bigrational(&self) -> BigRational {
        match &self.0 {
            Repr::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Repr::Big(b) => (**b).clone(),
        }
    }

    /// Numerator and denominator when the value is stored inline.
    pub fn as_small(&self) -> Option<(i64, i64)> {
        match self.0 {
            Repr::Small(n, d) => Some((n, d)),
            Repr::Big(_) => None,
        }
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small(_, d) => *d == 1,
            Repr::Big(b) => b.is_integer(),
        }
    }

    pub fn to_i64(&self) -> Option<i64> {
        match &self.0 {
            Repr::Small(n, 1) => Some(*n),
            Repr::Small(..) => None,
            Repr::Big(b) if b.is_integer() => b.numer().to_i64(),
            Repr::Big(_) => None,
        }
    }

    pub fn numer(&self) -> BigInt {
        match &self.0 {
            Repr::Small(n, _) => BigInt::from(*n),
            Repr::Big(b) => b.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match &self.0 {
            Repr::Small(_, d) => BigInt::from(*d),
            Repr::Big(b) => b.denom().clone(),
        }
    }

    pub fn recip(&self) -> Self {
        match &self.0 {
            Repr::Small(n, d) => {
                assert!(*n != 0, "reciprocal of zero");
                reduce(*d as i128, *n as i128)
            }
            Repr::Big(b) => Rational::from_big(b.recip()),
        }
    }

    pub fn abs(&self) -> Self {
        if self.signum_i8() < 0 {
            -self.clone()
        } else {
            self.clone()
        }
    }

    fn add_ref(&self, rhs: &Rational) -> Rational {
        match (&self.0, &rhs.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                if *b == 1 && *d == 1 {
                    return fit(*a as i128 + *c as i128, 1);
                }
                if b == d {
                    return reduce(*a as i128 + *c as i128, *b as i128);
                }
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                reduce(a * d + c * b, b * d)
            }
            _ => Rational::from_big(self.to_bigrational() + rhs.to_bigrational()),
        }
    }

    fn sub_ref(&self, rhs: &Rational) -> Rational {
        match (&self.0, &rhs.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                if *b == 1 && *d == 1 {
                    return fit(*a as i128 - *c as i128, 1);
                }
                if b == d {
                    return reduce(*a as i128 - *c as i128, *b as i128);
                }
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                reduce(a * d - c * b, b * d)
            }
            _ => Rational::from_big(self.to_bigrational() - rhs.to_bigrational()),
        }
    }

    fn mul_ref(&self, rhs: &Rational) -> Rational {
        match (&self.0, &rhs.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                if *a == 0 || *c == 0 {
                    return Rational::zero();
                }
                if *b == 1 && *d == 1 {
                    return fit(*a as i128 * *c as i128, 1);
                }
                // Cross-reduce in i64 before widening.
                let g1 = a.gcd(d);
                let g2 = c.gcd(b);
                let (a, d) = (a / g1, d / g1);
                let (c, b) = (c / g2, b / g2);
                fit(a as i128 * c as i128, b as i128 * d as i128)
            }
            _ => Rational::from_big(self.to_bigrational() * rhs.to_bigrational()),
        }
    }

    fn div_ref(&self, rhs: &Rational) -> Rational {
        match (&self.0, &rhs.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                assert!(*c != 0, "division by zero");
                if *a == 0 {
                    return Rational::zero();
                }
                let g1 = a.gcd(c);
                let g2 = b.gcd(d);
                let (a, c) = ((a / g1) as i128, (c / g1) as i128);
                let (b, d) = ((b / g2) as i128, (d / g2) as i128);
                let (mut num, mut den) = (a * d, b * c);
                if den < 0 {
                    num = -num;
                    den = -den;
                }
                fit(num, den)
            }
            _ => Rational::from_big(self.to_bigrational() / rhs.to_bigrational()),
        }
    }
}

impl Field for Rational {
    fn from_i64(v: i64) -> Self {
        Rational::from_integer(v)
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Rational::new(num, den)
    }

    fn mul_add_assign(&mut self, a: &Self, b: &Self) {
        if let (Repr::Small(x, 1), Repr::Small(y, 1), Repr::Small(z, 1)) = (&self.0, &a.0, &b.0) {
            let v = *x as i128 + (*y as i128) * (*z as i128);
            *self = fit(v, 1);
            return;
        }
        let p = a.mul_ref(b);
        *self = self.add_ref(&p);
    }

    fn accumulate_bilinear<'s, T>(out: &mut [Self], u: &[(u32, Self)], v: &[(u32, Self)], terms: T)
    where
        Self: 's,
        T: Fn(u32, u32) -> &'s [(u32, Self)],
    {
        if !accumulate_scaled(out, u, v, &terms) {
            for (i, a) in u {
                for (j, b) in v {
                    let ab = a.mul_ref(b);
                    for (k, c) in terms(*i, *j) {
                        out[*k as usize].mul_add_assign(&ab, c);
                    }
                }
            }
        }
    }

    fn signum_i8(&self) -> i8 {
        match &self.0 {
            Repr::Small(n, _) => n.signum() as i8,
            Repr::Big(b) => {
                if b.is_positive() {
                    1
                } else if b.is_negative() {
                    -1
                } else {
                    0
                }
            }
        }
    }

    fn to_big(&self) -> BigRational {
        self.to_bigrational()
    }
}

/// Puts a sparse vector over a common denominator, returning the scaled
/// numerators and the denominator, or `None` if anything leaves `i64`.
fn common_denominator(u: &[(u32, Rational)]) -> Option<(Vec<(u32, i64)>, i64)> {
    let mut den: i64 = 1;
    for (_, q) in u {
        let (_, d) = q.as_small()?;
        if d != 1 {
            let g = den.gcd(&d);
            den = den.checked_mul(d / g)?;
        }
    }
    let mut scaled = Vec::with_capacity(u.len());
    for (i, q) in u {
        let (n, d) = q.as_small()?;
        scaled.push((*i, n.checked_mul(den / d)?));
    }
    Some((scaled, den))
}

/// Integer kernel for [`Field::accumulate_bilinear`]. Returns `false`, with
/// `out` untouched, when intermediate values would leave `i128`.
fn accumulate_scaled<'s, T>(out: &mut [Rational], u: &[(u32, Rational)], v: &[(u32, Rational)], terms: &T) -> bool
where
    T: Fn(u32, u32) -> &'s [(u32, Rational)],
{
    let Some((us, ud)) = common_denominator(u) else {
        return false;
    };
    let Some((vs, vd)) = common_denominator(v) else {
        return false;
    };
    let mut acc = vec![0i128; out.len()];
    for (i, a) in &us {
        for (j, b) in &vs {
            let ab = (*a as i128) * (*b as i128);
            for (k, c) in terms(*i, *j) {
                let term = match c.as_small() {
                    Some((1, 1)) => ab,
                    Some((-1, 1)) => -ab,
                    Some((c, 1)) => match ab.checked_mul(c as i128) {
                        Some(t) => t,
                        None => return false,
                    },
                    _ => return false,
                };
                let slot = &mut acc[*k as usize];
                match slot.checked_add(term) {
                    Some(s) => *slot = s,
                    None => return false,
                }
            }
        }
    }
    let den = (ud as i128) * (vd as i128);
    for (slot, n) in out.iter_mut().zip(acc) {
        if n != 0 {
            *slot += reduce(n, den);
        }
    }
    true
}

impl Zero for Rational {
    fn zero() -> Self {
        Rational(Repr::Small(0, 1))
    }

    fn is_zero(&self) -> bool {
        matches!(self.0, Repr::Small(0, _))
    }
}

impl One for Rational {
    fn one() -> Self {
        Rational(Repr::Small(1, 1))
    }
}

impl Default for Rational {
    fn default() -> Self {
        Rational::zero()
    }
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Rational::from_integer(v)
    }
}

impl From<BigRational> for Rational {
    fn from(v: BigRational) -> Self {
        Rational::from_big(v)
    }
}

impl PartialEq for Rational {
    fn eq(&self, other: &Self) -> bool {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => a == c && b == d,
            // Canonical representation: a promoted value never equals an inline one.
            (Repr::Big(a), Repr::Big(b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for Rational {}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                ((*a as i128) * (*d as i128)).cmp(&((*c as i128) * (*b as i128)))
            }
            _ => self.to_bigrational().cmp(&other.to_bigrational()),
        }
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Hash for Rational {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match &self.0 {
            Repr::Small(n, d) => {
                n.hash(state);
                d.hash(state);
            }
            Repr::Big(b) => {
                b.numer().hash(state);
                b.denom().hash(state);
            }
        }
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(n, 1) => write!(f, "{n}"),
            Repr::Small(n, d) => write!(f, "{n}/{d}"),
            Repr::Big(b) => write!(f, "{b}"),
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseRationalError(String);

impl fmt::Display for ParseRationalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid rational literal `{}`", self.0)
    }
}

impl std::error::Error for ParseRationalError {}

impl FromStr for Rational {
    type Err = ParseRationalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseRationalError(s.to_string());
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s.trim(), "1"),
        };
        let n: BigInt = n.parse().map_err(|_| err())?;
        let d: BigInt = d.parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        Ok(Rational::from_big(BigRational::new(n, d)))
    }
}

impl Neg for Rational {
    type Output = Rational;

    fn neg(self) -> Rational {
        match self.0 {
            Repr::Small(n, d) => match n.checked_neg() {
                Some(m) => Rational(Repr::Small(m, d)),
                None => fit(-(n as i128), d as i128),
            },
            Repr::Big(b) => Rational::from_big(-*b),
        }
    }
}

impl Neg for &Rational {
    type Output = Rational;

    fn neg(self) -> Rational {
        -self.clone()
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $inner:ident, $atr:ident, $am:ident) => {
        impl $tr<Rational> for Rational {
            type Output = Rational;
            fn $m(self, rhs: Rational) -> Rational {
                self.$inner(&rhs)
            }
        }
        impl<'a> $tr<&'a Rational> for Rational {
            type Output = Rational;
            fn $m(self, rhs: &'a Rational) -> Rational {
                self.$inner(rhs)
            }
        }
        impl<'a> $tr<Rational> for &'a Rational {
            type Output = Rational;
            fn $m(self, rhs: Rational) -> Rational {
                self.$inner(&rhs)
            }
        }
        impl<'a, 'b> $tr<&'b Rational> for &'a Rational {
            type Output = Rational;
            fn $m(self, rhs: &'b Rational) -> Rational {
                self.$inner(rhs)
            }
        }
        impl $atr<Rational> for Rational {
            fn $am(&mut self, rhs: Rational) {
                *self = self.$inner(&rhs);
            }
        }
        impl<'a> $atr<&'a Rational> for Rational {
            fn $am(&mut self, rhs: &'a Rational) {
                *self = self.$inner(rhs);
            }
        }
    };
}

forward_binop!(Add, add, add_ref, AddAssign, add_assign);
forward_binop!(Sub, sub, sub_ref, SubAssign, sub_assign);
forward_binop!(Mul, mul, mul_ref, MulAssign, mul_assign);
forward_binop!(Div, div, div_ref, DivAssign, div_assign);

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl Product for Rational {
    fn product<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::one(), |acc, x| acc * x)
    }
}

impl serde::Serialize for Rational {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn big(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn reduced_and_signed() {
        let q = Rational::new(6, -4);
        assert_eq!(q.as_small(), Some((-3, 2)));
        assert_eq!(q.to_string(), "-3/2");
        assert_eq!(Rational::new(0, -7), Rational::zero());
    }

    #[test]
    fn promotes_on_overflow_and_demotes_back() {
        let a = Rational::from_integer(i64::MAX);
        let b = &a * &a;
        assert!(b.as_small().is_none());
        let c = &b / &a;
        assert_eq!(c, a);
        assert!(c.as_small().is_some());
        let neg = -Rational::from_integer(i64::MIN);
        assert_eq!(neg.to_bigrational(), BigRational::from_integer(-BigInt::from(i64::MIN)));
    }

    #[test]
    fn parse_round_trip() {
        let q: Rational = "-12/18".parse().unwrap();
        assert_eq!(q, Rational::new(-2, 3));
        assert!("1/0".parse::<Rational>().is_err());
    }

    proptest! {
        #[test]
        fn agrees_with_bigrational(
            a in -1_000_000_000_000i64..1_000_000_000_000,
            b in 1i64..1_000_000_000,
            c in -1_000_000_000_000i64..1_000_000_000_000,
            d in 1i64..1_000_000_000,
        ) {
            let (x, y) = (Rational::new(a, b), Rational::new(c, d));
            let (bx, by) = (big(a, b), big(c, d));
            prop_assert_eq!((&x + &y).to_bigrational(), &bx + &by);
            prop_assert_eq!((&x - &y).to_bigrational(), &bx - &by);
            prop_assert_eq!((&x * &y).to_bigrational(), &bx * &by);
            if c != 0 {
                prop_assert_eq!((&x / &y).to_bigrational(), &bx / &by);
            }
            let mut acc = x.clone();
            acc.mul_add_assign(&y, &y);
            prop_assert_eq!(acc.to_bigrational(), &bx + &by * &by);
            prop_assert_eq!(x.cmp(&y), bx.cmp(&by));
        }
    }
}
