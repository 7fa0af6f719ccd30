//! Exact arithmetic on the Moser lattice.
//!
//! A lattice point is stored as its four integer Moser coefficients
//! `(a, b, c, d)`, standing for `a + b·ω₁ + c·ω₃ + d·ω₁ω₃` with
//! `ω₁ = 1/2 + i·√3/2` and `ω₃ = 5/6 + i·√11/6`.
//!
//! Real parts of lattice points live in `span_Q{1, √33}` and imaginary parts
//! in `span_Q{√3, √11}`, so every squared distance is of the form
//! `u + v·√33` with rational `u`, `v`. Comparisons are decided exactly.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

/// Arbitrary precision rational, always kept in lowest terms.
pub type Rational = BigRational;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn rat_int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// A point of the Moser lattice, given by its Moser coefficients.
///
/// The derived ordering is lexicographic on `(a, b, c, d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct MoserPoint {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl MoserPoint {
    pub const ZERO: MoserPoint = MoserPoint::new(0, 0, 0, 0);
    pub const ONE: MoserPoint = MoserPoint::new(1, 0, 0, 0);
    pub const OMEGA1: MoserPoint = MoserPoint::new(0, 1, 0, 0);
    pub const OMEGA3: MoserPoint = MoserPoint::new(0, 0, 1, 0);
    pub const OMEGA13: MoserPoint = MoserPoint::new(0, 0, 0, 1);

    /// The eight unit vectors `±1, ±ω₁, ±ω₃, ±ω₁ω₃`.
    pub const BASIS_UNITS: [MoserPoint; 8] = [
        MoserPoint::new(1, 0, 0, 0),
        MoserPoint::new(-1, 0, 0, 0),
        MoserPoint::new(0, 1, 0, 0),
        MoserPoint::new(0, -1, 0, 0),
        MoserPoint::new(0, 0, 1, 0),
        MoserPoint::new(0, 0, -1, 0),
        MoserPoint::new(0, 0, 0, 1),
        MoserPoint::new(0, 0, 0, -1),
    ];

    pub const fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        MoserPoint { a, b, c, d }
    }

    pub const fn coeffs(&self) -> [i64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub const fn from_coeffs(c: [i64; 4]) -> Self {
        MoserPoint::new(c[0], c[1], c[2], c[3])
    }

    /// Multiplication by `ω₁` (rotation by π/3), using `ω₁² = ω₁ − 1`.
    pub fn mul_omega1(&self) -> Self {
        MoserPoint::new(-self.b, self.a + self.b, -self.d, self.c + self.d)
    }

    /// Multiplication by `1 − ω₁ = conj(ω₁)` (rotation by −π/3).
    pub fn mul_omega1_conj(&self) -> Self {
        *self - self.mul_omega1()
    }

    /// Approximate complex coordinates, for display and numeric cross-checks.
    pub fn to_f64(&self) -> (f64, f64) {
        let s3 = 3f64.sqrt();
        let s11 = 11f64.sqrt();
        let s33 = 33f64.sqrt();
        let (a, b, c, d) = (self.a as f64, self.b as f64, self.c as f64, self.d as f64);
        let re = a + b / 2.0 + 5.0 * c / 6.0 + 5.0 * d / 12.0 - d * s33 / 12.0;
        let im = (b / 2.0 + 5.0 * d / 12.0) * s3 + (c / 6.0 + d / 12.0) * s11;
        (re, im)
    }
}

impl Add for MoserPoint {
    type Output = MoserPoint;
    fn add(self, o: MoserPoint) -> MoserPoint {
        MoserPoint::new(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)
    }
}

impl Sub for MoserPoint {
    type Output = MoserPoint;
    fn sub(self, o: MoserPoint) -> MoserPoint {
        MoserPoint::new(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)
    }
}

impl Neg for MoserPoint {
    type Output = MoserPoint;
    fn neg(self) -> MoserPoint {
        MoserPoint::new(-self.a, -self.b, -self.c, -self.d)
    }
}

impl fmt::Display for MoserPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} {}", self.a, self.b, self.c, self.d)
    }
}

impl FromStr for MoserPoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let parts: Vec<&str> = s.split_whitespace().collect();
        if parts.len() != 4 {
            return Err(Error::Parse(format!(
                "expected 4 coefficients, got {:?}",
                s
            )));
        }
        let mut c = [0i64; 4];
        for (slot, p) in c.iter_mut().zip(&parts) {
            *slot = p
                .parse()
                .map_err(|_| Error::Parse(format!("bad coefficient {:?} in {:?}", p, s)))?;
        }
        Ok(MoserPoint::from_coeffs(c))
    }
}

/// Exact real/imaginary decomposition of a lattice point:
/// `re = re0 + re33·√33`, `im = im3·√3 + im11·√11`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexParts {
    pub re0: Rational,
    pub re33: Rational,
    pub im3: Rational,
    pub im11: Rational,
}

pub fn to_complex(p: MoserPoint) -> ComplexParts {
    let (a, b, c, d) = (p.a, p.b, p.c, p.d);
    ComplexParts {
        re0: rat(12 * a + 6 * b + 10 * c + 5 * d, 12),
        re33: rat(-d, 12),
        im3: rat(6 * b + 5 * d, 12),
        im11: rat(2 * c + d, 12),
    }
}

/// Squared length of a lattice vector scaled by 144, as integers `(144u, 144v)`.
///
/// This is the fast path behind [`sq_dist`] and the congruence keys.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SqDist {
    pub u144: i64,
    pub v144: i64,
}

impl SqDist {
    pub const ONE: SqDist = SqDist { u144: 144, v144: 0 };

    pub fn of_vector(p: MoserPoint) -> SqDist {
        let big_a = 12 * p.a + 6 * p.b + 10 * p.c + 5 * p.d;
        let big_b = 6 * p.b + 5 * p.d;
        let big_e = 2 * p.c + p.d;
        let big_d = p.d;
        SqDist {
            u144: big_a * big_a + 33 * big_d * big_d + 3 * big_b * big_b + 11 * big_e * big_e,
            v144: 2 * (big_b * big_e - big_a * big_d),
        }
    }

    pub fn between(p: MoserPoint, q: MoserPoint) -> SqDist {
        SqDist::of_vector(p - q)
    }

    pub fn is_zero(&self) -> bool {
        self.u144 == 0 && self.v144 == 0
    }

    pub fn to_quad(self) -> QuadValue {
        QuadValue::new(rat(self.u144, 144), rat(self.v144, 144))
    }

    pub fn to_f64(self) -> f64 {
        (self.u144 as f64 + self.v144 as f64 * 33f64.sqrt()) / 144.0
    }
}

/// Sign of `x + y·√33` for integers.
fn sign_surd_i128(x: i128, y: i128) -> Ordering {
    match (x.cmp(&0), y.cmp(&0)) {
        (Ordering::Equal, s) | (s, Ordering::Equal) => s,
        (Ordering::Greater, Ordering::Greater) => Ordering::Greater,
        (Ordering::Less, Ordering::Less) => Ordering::Less,
        (Ordering::Greater, Ordering::Less) => (x * x).cmp(&(33 * y * y)),
        (Ordering::Less, Ordering::Greater) => (33 * y * y).cmp(&(x * x)),
    }
}

impl Ord for SqDist {
    fn cmp(&self, other: &Self) -> Ordering {
        sign_surd_i128(
            self.u144 as i128 - other.u144 as i128,
            self.v144 as i128 - other.v144 as i128,
        )
    }
}

impl PartialOrd for SqDist {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Exact real number `u + v·√33`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadValue {
    pub u: Rational,
    pub v: Rational,
}

fn sign_surd(x: &Rational, y: &Rational) -> Ordering {
    let sx = x.cmp(&Rational::zero());
    let sy = y.cmp(&Rational::zero());
    match (sx, sy) {
        (Ordering::Equal, s) | (s, Ordering::Equal) => s,
        (Ordering::Greater, Ordering::Greater) => Ordering::Greater,
        (Ordering::Less, Ordering::Less) => Ordering::Less,
        (Ordering::Greater, Ordering::Less) => (x * x).cmp(&(y * y * rat_int(33))),
        (Ordering::Less, Ordering::Greater) => (y * y * rat_int(33)).cmp(&(x * x)),
    }
}

impl QuadValue {
    pub fn new(u: Rational, v: Rational) -> Self {
        QuadValue { u, v }
    }

    pub fn from_rational(r: Rational) -> Self {
        QuadValue::new(r, Rational::zero())
    }

    pub fn is_rational(&self) -> bool {
        self.v.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.v.is_zero() && self.u.is_one()
    }

    /// Exact comparison with a rational number.
    pub fn cmp_rational(&self, r: &Rational) -> Ordering {
        sign_surd(&(&self.u - r), &self.v)
    }

    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.u.to_f64().unwrap_or(f64::NAN) + self.v.to_f64().unwrap_or(f64::NAN) * 33f64.sqrt()
    }

    pub fn is_negative(&self) -> bool {
        self.cmp_rational(&Rational::zero()) == Ordering::Less
    }
}

impl Ord for QuadValue {
    fn cmp(&self, other: &Self) -> Ordering {
        sign_surd(&(&self.u - &other.u), &(&self.v - &other.v))
    }
}

impl PartialOrd for QuadValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for QuadValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.v.is_zero() {
            write!(f, "{}", self.u)
        } else if self.v.is_negative() {
            write!(f, "{} - {}*sqrt(33)", self.u, -&self.v)
        } else {
            write!(f, "{} + {}*sqrt(33)", self.u, self.v)
        }
    }
}

/// Exact squared Euclidean distance `|φ(p) − φ(q)|²`.
pub fn sq_dist(p: MoserPoint, q: MoserPoint) -> QuadValue {
    SqDist::between(p, q).to_quad()
}

pub fn is_unit_distance(p: MoserPoint, q: MoserPoint) -> bool {
    SqDist::between(p, q) == SqDist::ONE
}

#[cfg(test)]
mod tests {
    use super::*;

    // |re|² + |im|² expanded directly from the complex parts; independent of
    // the integer closed form used by `SqDist`.
    fn sq_norm_via_parts(p: MoserPoint) -> QuadValue {
        let c = to_complex(p);
        let two = rat_int(2);
        let u = &c.re0 * &c.re0
            + rat_int(33) * &c.re33 * &c.re33
            + rat_int(3) * &c.im3 * &c.im3
            + rat_int(11) * &c.im11 * &c.im11;
        let v = &two * &c.re0 * &c.re33 + &two * &c.im3 * &c.im11;
        QuadValue::new(u, v)
    }

    #[test]
    fn complex_parts_of_basis() {
        let z = to_complex(MoserPoint::ZERO);
        assert!(z.re0.is_zero() && z.re33.is_zero() && z.im3.is_zero() && z.im11.is_zero());

        let w1 = to_complex(MoserPoint::OMEGA1);
        assert_eq!(w1.re0, rat(1, 2));
        assert!(w1.re33.is_zero());
        assert_eq!(w1.im3, rat(1, 2));
        assert!(w1.im11.is_zero());

        // ω₁ω₃ = (1/2 + i√3/2)(5/6 + i√11/6)
        //      = 5/12 − √33/12 + i(5√3/12 + √11/12)
        let w13 = to_complex(MoserPoint::OMEGA13);
        assert_eq!(w13.re0, rat(5, 12));
        assert_eq!(w13.re33, rat(-1, 12));
        assert_eq!(w13.im3, rat(5, 12));
        assert_eq!(w13.im11, rat(1, 12));
    }

    #[test]
    fn basis_vectors_are_unit() {
        for p in MoserPoint::BASIS_UNITS {
            assert!(sq_dist(MoserPoint::ZERO, p).is_one(), "{p}");
            assert!(is_unit_distance(MoserPoint::ZERO, p));
        }
        assert!(!is_unit_distance(
            MoserPoint::ZERO,
            MoserPoint::new(2, 0, 0, 0)
        ));
        // |1 + ω₁|² = (3/2)² + (√3/2)² = 3
        let d = sq_dist(MoserPoint::ZERO, MoserPoint::new(1, 1, 0, 0));
        assert_eq!(d, QuadValue::from_rational(rat_int(3)));
        assert!(!is_unit_distance(
            MoserPoint::ZERO,
            MoserPoint::new(1, 1, 0, 0)
        ));
    }

    #[test]
    fn closed_form_matches_expansion() {
        for a in -3..=3 {
            for b in -3..=3 {
                for c in -3..=3 {
                    for d in -3..=3 {
                        let p = MoserPoint::new(a, b, c, d);
                        assert_eq!(sq_dist(p, MoserPoint::ZERO), sq_norm_via_parts(p), "{p}");
                    }
                }
            }
        }
    }

    #[test]
    fn zero_only_at_equal_points() {
        for a in -2..=2 {
            for b in -2..=2 {
                for c in -2..=2 {
                    for d in -2..=2 {
                        let p = MoserPoint::new(a, b, c, d);
                        assert_eq!(SqDist::of_vector(p).is_zero(), p == MoserPoint::ZERO);
                    }
                }
            }
        }
    }

    #[test]
    fn rotation_matches_complex_multiplication() {
        // ω₁ · ω₁ = ω₁ − 1
        assert_eq!(
            MoserPoint::OMEGA1.mul_omega1(),
            MoserPoint::new(-1, 1, 0, 0)
        );
        assert_eq!(MoserPoint::ONE.mul_omega1(), MoserPoint::OMEGA1);
        assert_eq!(MoserPoint::OMEGA3.mul_omega1(), MoserPoint::OMEGA13);
        let p = MoserPoint::new(2, -1, 3, 1);
        assert_eq!(p.mul_omega1().mul_omega1_conj(), p);
    }

    #[test]
    fn quad_ordering() {
        // √33 ≈ 5.7446
        let q = QuadValue::new(rat_int(-5), rat_int(1));
        assert_eq!(q.cmp_rational(&Rational::zero()), Ordering::Greater);
        assert_eq!(q.cmp_rational(&rat(3, 4)), Ordering::Less);
        let q = QuadValue::new(rat_int(6), rat_int(-1));
        assert_eq!(q.cmp_rational(&Rational::zero()), Ordering::Greater);
        let q = QuadValue::new(rat_int(5), rat_int(-1));
        assert!(q.is_negative());
        assert!(QuadValue::new(rat_int(1), rat_int(0)) < QuadValue::new(rat_int(-4), rat_int(1)));
        let a = SqDist { u144: 144, v144: 0 };
        let b = SqDist {
            u144: -700,
            v144: 144,
        };
        assert_eq!(a.cmp(&b), a.to_quad().cmp(&b.to_quad()));
    }

    #[test]
    fn parse_and_display() {
        let p: MoserPoint = " 1 -2  3 4 ".parse().unwrap();
        assert_eq!(p, MoserPoint::new(1, -2, 3, 4));
        assert_eq!(p.to_string(), "1 -2 3 4");
        assert!("1 2 3".parse::<MoserPoint>().is_err());
        assert!("1 2 x 4".parse::<MoserPoint>().is_err());
    }
}
