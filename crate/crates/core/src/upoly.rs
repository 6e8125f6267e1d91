//! Dense univariate polynomials over the rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};

use crate::poly::{format_rational, rational_to_f64, MultiPoly, Rational, Var};

/// Coefficients from the constant term upwards; never carries trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct UPoly {
    coeffs: Vec<Rational>,
}

impl UPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// The monic linear polynomial `u - root`.
    pub fn linear_root(root: &Rational) -> Self {
        Self::new(vec![-root.clone(), Rational::one()])
    }

    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| crate::poly::int(c)).collect())
    }

    /// Reads a polynomial whose only variable is `var`.
    pub fn from_multi(p: &MultiPoly, var: Var) -> Option<Self> {
        if p.support().iter().any(|&v| v != var) {
            return None;
        }
        let coeffs = p
            .coefficients(var)
            .into_iter()
            .map(|c| c.as_constant().expect("coefficient is constant"))
            .collect();
        Some(Self::new(coeffs))
    }

    pub fn to_multi(&self, var: Var) -> MultiPoly {
        let cs: Vec<MultiPoly> = self
            .coeffs
            .iter()
            .map(|c| MultiPoly::constant(c.clone()))
            .collect();
        MultiPoly::from_coefficients(var, &cs)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, u: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * u + c;
        }
        acc
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + rational_to_f64(c).unwrap_or(f64::NAN);
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * crate::poly::int(k as i64))
                .collect(),
        )
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        self.scale(&self.leading().recip())
    }

    pub fn div_rem(&self, divisor: &UPoly) -> (UPoly, UPoly) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let lead_inv = divisor.leading().recip();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            let q = &rem[k] * &lead_inv;
            if q.is_zero() {
                continue;
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                rem[k - dd + j] -= &q * d;
            }
            quot[k - dd] = q;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    /// Quotient if `divisor` divides exactly.
    pub fn div_exact(&self, divisor: &UPoly) -> Option<UPoly> {
        let (q, r) = self.div_rem(divisor);
        r.is_zero().then_some(q)
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &UPoly) -> UPoly {
        let mut a = self.monic();
        let mut b = other.monic();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// Monic squarefree part.
    pub fn squarefree(&self) -> UPoly {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_exact(&g).expect("gcd divides").monic()
    }

    pub fn pow(&self, n: u32) -> UPoly {
        (0..n).fold(UPoly::one(), |acc, _| &acc * self)
    }

    /// Polynomial of least degree through the points (Newton form).
    pub fn interpolate(points: &[(Rational, Rational)]) -> UPoly {
        let n = points.len();
        let mut dd: Vec<Rational> = points.iter().map(|(_, v)| v.clone()).collect();
        for level in 1..n {
            for i in (level..n).rev() {
                let num = &dd[i] - &dd[i - 1];
                let den = &points[i].0 - &points[i - level].0;
                dd[i] = num / den;
            }
        }
        let mut out = UPoly::zero();
        for i in (0..n).rev() {
            out = &(&out * &UPoly::linear_root(&points[i].0)) + &UPoly::constant(dd[i].clone());
        }
        out
    }

    /// Rational function `num / den` with `deg num <= num_bound` agreeing with
    /// the data at every point, via the extended Euclidean algorithm applied to
    /// the interpolating polynomial. The denominator is returned monic.
    pub fn rational_reconstruct(
        points: &[(Rational, Rational)],
        num_bound: usize,
    ) -> Option<(UPoly, UPoly)> {
        let modulus = points
            .iter()
            .fold(UPoly::one(), |acc, (u, _)| &acc * &UPoly::linear_root(u));
        let interp = UPoly::interpolate(points);
        let (mut r0, mut r1) = (modulus, interp);
        let (mut s0, mut s1) = (UPoly::zero(), UPoly::one());
        while r1.degree().map_or(false, |d| d > num_bound) {
            let (q, r) = r0.div_rem(&r1);
            let s = &s0 - &(&q * &s1);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        if s1.is_zero() {
            return None;
        }
        let g = r1.gcd(&s1);
        let (num, den) = if g.degree().unwrap_or(0) > 0 {
            (r1.div_exact(&g)?, s1.div_exact(&g)?)
        } else {
            (r1, s1)
        };
        let lead = den.leading();
        let (num, den) = (num.scale(&lead.recip()), den.scale(&lead.recip()));
        for (u, v) in points {
            let d = den.eval(u);
            if d.is_zero() || num.eval(u) != v * &d {
                return None;
            }
        }
        Some((num, den))
    }

    /// Makes a rational multiple with integer coprime coefficients and positive leading coefficient.
    pub fn primitive(&self) -> UPoly {
        let m = self.to_multi(Var::T).primitive_part();
        let p = UPoly::from_multi(&m, Var::T).unwrap_or_default();
        if p.leading().is_negative() {
            -p
        } else {
            p
        }
    }

    /// `Some(c)` when `self = c * other` for a rational constant `c`.
    pub fn proportionality(&self, other: &UPoly) -> Option<Rational> {
        if self.degree() != other.degree() || other.is_zero() {
            return None;
        }
        let c = self.leading() / other.leading();
        (other.scale(&c) == *self).then_some(c)
    }
}

impl fmt::Display for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_multi(Var::T))
    }
}

impl fmt::Debug for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(format_rational).collect();
        write!(f, "UPoly[{}]", parts.join(", "))
    }
}

impl Add for &UPoly {
    type Output = UPoly;
    fn add(self, rhs: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UPoly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &UPoly {
    type Output = UPoly;
    fn sub(self, rhs: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        UPoly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &UPoly {
    type Output = UPoly;
    fn mul(self, rhs: &UPoly) -> UPoly {
        if self.is_zero() || rhs.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UPoly::new(out)
    }
}

impl Neg for UPoly {
    type Output = UPoly;
    fn neg(self) -> UPoly {
        UPoly::new(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{int, rat};

    #[test]
    fn gcd_examples() {
        let a = UPoly::from_ints(&[-1, 0, 1]);
        let b = UPoly::from_ints(&[1, 2, 1]);
        assert_eq!(a.gcd(&b), UPoly::from_ints(&[1, 1]));
        let c = UPoly::from_ints(&[0, 1]);
        let d = UPoly::from_ints(&[1, 1]);
        assert_eq!(c.gcd(&d), UPoly::one());
        assert_eq!(a.gcd(&UPoly::zero()), a.monic());
    }

    #[test]
    fn squarefree_drops_repeats() {
        // (u-1)^2 (u+2)
        let p = &UPoly::from_ints(&[-1, 1]).pow(2) * &UPoly::from_ints(&[2, 1]);
        assert_eq!(p.squarefree(), &UPoly::from_ints(&[-1, 1]) * &UPoly::from_ints(&[2, 1]));
    }

    #[test]
    fn interpolation_recovers_cubic() {
        let p = UPoly::from_ints(&[3, -1, 0, 2]);
        let pts: Vec<_> = (0..4).map(|k| (int(k), p.eval(&int(k)))).collect();
        assert_eq!(UPoly::interpolate(&pts), p);
    }

    #[test]
    fn rational_reconstruction() {
        // (u^2 + 1) / (3u - 2)
        let num = UPoly::from_ints(&[1, 0, 1]);
        let den = UPoly::from_ints(&[-2, 3]);
        let pts: Vec<_> = (0..7)
            .map(|k| {
                let u = int(k);
                (u.clone(), num.eval(&u) / den.eval(&u))
            })
            .collect();
        let (n, d) = UPoly::rational_reconstruct(&pts, 3).unwrap();
        assert_eq!(d, den.monic());
        assert_eq!(n, num.scale(&rat(1, 3)));
    }

    #[test]
    fn proportionality_factor() {
        let a = UPoly::from_ints(&[2, 4]);
        let b = UPoly::from_ints(&[1, 2]);
        assert_eq!(a.proportionality(&b), Some(int(2)));
        assert_eq!(a.proportionality(&UPoly::from_ints(&[1, 3])), None);
    }
}
