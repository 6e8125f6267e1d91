//! Polynomials in one main variable with coefficients in `Q[t]`.

use std::fmt;

use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::{rational_to_f64, MultiPoly, Rational, Var};
use crate::upoly::UPoly;

#[derive(Clone, PartialEq, Eq)]
pub struct UniPolyInT {
    var: Var,
    coeffs: Vec<UPoly>,
}

impl UniPolyInT {
    /// Splits `p` by powers of `var`. Every coefficient must be a polynomial in `t` alone.
    pub fn from_multi(p: &MultiPoly, var: Var) -> Result<Self> {
        if var == Var::T {
            return Err(Error::DegenerateSystem("main variable cannot be t".into()));
        }
        if p.is_zero() {
            return Err(Error::DegenerateSystem("zero polynomial".into()));
        }
        let coeffs = p
            .coefficients(var)
            .iter()
            .map(|c| {
                UPoly::from_multi(c, Var::T).ok_or_else(|| {
                    Error::DegenerateSystem(format!("coefficient {c} depends on more than t"))
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { var, coeffs })
    }

    pub fn var(&self) -> Var {
        self.var
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[UPoly] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> UPoly {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> &UPoly {
        self.coeffs.last().expect("non-empty")
    }

    pub fn to_multi(&self) -> MultiPoly {
        let cs: Vec<MultiPoly> = self.coeffs.iter().map(|c| c.to_multi(Var::T)).collect();
        MultiPoly::from_coefficients(self.var, &cs)
    }

    /// Exact univariate polynomial in the main variable at a fixed time.
    pub fn at(&self, t: &Rational) -> UPoly {
        UPoly::new(self.coeffs.iter().map(|c| c.eval(t)).collect())
    }

    /// Coefficients at a fixed time, rounded to doubles, constant term first.
    pub fn evaluate_complex(&self, t: &Rational) -> Result<Vec<Complex64>> {
        let exact = self.at(t);
        exact
            .coeffs()
            .iter()
            .enumerate()
            .map(|(index, c)| {
                rational_to_f64(c)
                    .map(|v| Complex64::new(v, 0.0))
                    .ok_or(Error::CoefficientOverflow { index })
            })
            .collect()
    }

    /// Derivative with respect to the main variable.
    pub fn d_main(&self) -> Self {
        let coeffs: Vec<UPoly> = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.scale(&crate::poly::int(k as i64)))
            .collect();
        Self::trimmed(self.var, coeffs)
    }

    /// Derivative with respect to `t`.
    pub fn d_t(&self) -> Self {
        Self::trimmed(self.var, self.coeffs.iter().map(UPoly::derivative).collect())
    }

    fn trimmed(var: Var, mut coeffs: Vec<UPoly>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(UPoly::is_zero) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(UPoly::zero());
        }
        Self { var, coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(UPoly::is_zero)
    }

    /// Value at complex main-variable `z` with exact time `t` (coefficients rounded after evaluation).
    pub fn eval_at(&self, z: Complex64, t: &Rational) -> Complex64 {
        let mut acc = Complex64::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * z + rational_to_f64(&c.eval(t)).unwrap_or(f64::NAN);
        }
        acc
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::trimmed(self.var, self.coeffs.iter().map(|p| p.scale(c)).collect())
    }
}

impl fmt::Display for UniPolyInT {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_multi())
    }
}

impl fmt::Debug for UniPolyInT {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UniPolyInT[{}]({})", self.var, self.to_multi())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_poly;
    use crate::poly::int;

    #[test]
    fn nine_root_eliminant_at_t1() {
        let p = parse_poly(
            "-17*x^9+(4*t-4)*x^7+(3*t+25)*x^6+(4*t^2+16*t+12)*x^4+(-3*t^2-18*t-27)*x^3+t^3+9*t^2+27*t+27",
        )
        .unwrap();
        let u = UniPolyInT::from_multi(&p, Var::X).unwrap();
        let cs = u.evaluate_complex(&int(1)).unwrap();
        assert_eq!(cs.len(), 10);
        assert_eq!(cs[9].re, -17.0);
        assert_eq!(cs[0].re, 64.0);
    }

    #[test]
    fn rejects_foreign_variables() {
        let p = parse_poly("x^2 + y").unwrap();
        assert!(UniPolyInT::from_multi(&p, Var::X).is_err());
        assert!(UniPolyInT::from_multi(&MultiPoly::zero(), Var::X).is_err());
    }

    #[test]
    fn derivatives() {
        let p = parse_poly("t*x^2 + t^2*x + 5").unwrap();
        let u = UniPolyInT::from_multi(&p, Var::X).unwrap();
        assert_eq!(u.d_main().to_multi(), parse_poly("2*t*x + t^2").unwrap());
        assert_eq!(u.d_t().to_multi(), parse_poly("x^2 + 2*t*x").unwrap());
    }
}
