//! Sparse multivariate polynomials over the rationals.
//!
//! The variable universe is fixed to `x`, `y`, `t` and `M`. Terms are kept in a
//! map from exponent tuples to non-zero coefficients, so two polynomials are
//! equal exactly when their term maps are equal.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational number, always stored in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// Complex double used for every floating point stage of the pipeline.
pub type ComplexValue = Complex64;

/// Builds the rational `num / den`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p"` or `"p/q"` (optional sign, no decimals).
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let valid = |s: &str, signed: bool| {
        let digits = if signed {
            s.strip_prefix(['-', '+']).unwrap_or(s)
        } else {
            s
        };
        !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
    };
    if !valid(num, true) || !valid(den, false) {
        return None;
    }
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(Rational::new(num, den))
}

/// Nearest double, `None` when the value does not fit.
pub fn rational_to_f64(r: &Rational) -> Option<f64> {
    r.to_f64().filter(|v| v.is_finite())
}

/// Exact rational equal to a finite double.
pub fn f64_to_rational(v: f64) -> Option<Rational> {
    Rational::from_float(v)
}

/// Formats a rational as `p` or `p/q`.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    X,
    Y,
    T,
    M,
}

impl Var {
    pub const ALL: [Var; 4] = [Var::X, Var::Y, Var::T, Var::M];

    pub fn index(self) -> usize {
        match self {
            Var::X => 0,
            Var::Y => 1,
            Var::T => 2,
            Var::M => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::X => "x",
            Var::Y => "y",
            Var::T => "t",
            Var::M => "M",
        }
    }

    pub fn from_name(name: &str) -> Option<Var> {
        match name {
            "x" => Some(Var::X),
            "y" => Some(Var::Y),
            "t" => Some(Var::T),
            "M" => Some(Var::M),
            _ => None,
        }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Exponents of `(x, y, t, M)`.
pub type Exponents = [u32; 4];

/// A complete or partial assignment of rational values to variables.
#[derive(Clone, Debug, Default)]
pub struct Bindings {
    values: [Option<Rational>; 4],
}

impl Bindings {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, var: Var, value: Rational) -> Self {
        self.values[var.index()] = Some(value);
        self
    }

    pub fn set(&mut self, var: Var, value: Rational) {
        self.values[var.index()] = Some(value);
    }

    pub fn get(&self, var: Var) -> Option<&Rational> {
        self.values[var.index()].as_ref()
    }
}

#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    terms: BTreeMap<Exponents, Rational>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, [0; 4])
    }

    pub fn from_int(c: i64) -> Self {
        Self::constant(int(c))
    }

    pub fn var(v: Var) -> Self {
        let mut e = [0; 4];
        e[v.index()] = 1;
        Self::monomial(Rational::one(), e)
    }

    pub fn monomial(c: Rational, exps: Exponents) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        Self { terms }
    }

    /// Sums the given terms, merging duplicates and dropping zeros.
    pub fn from_terms<I: IntoIterator<Item = (Exponents, Rational)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    /// `sum coeffs[k] * var^k`.
    pub fn from_coefficients(var: Var, coeffs: &[MultiPoly]) -> Self {
        let mut out = Self::zero();
        for (k, c) in coeffs.iter().enumerate() {
            for (e, v) in &c.terms {
                let mut e = *e;
                e[var.index()] += k as u32;
                out.add_term(e, v.clone());
            }
        }
        out
    }

    fn add_term(&mut self, exps: Exponents, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(slot) => {
                slot.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Rational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exps: &Exponents) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    /// The constant value if the polynomial has no variables.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&[0; 4]).cloned(),
            _ => None,
        }
    }

    pub fn degree(&self, var: Var) -> Option<u32> {
        self.terms.keys().map(|e| e[var.index()]).max()
    }

    /// Degree in `var`, with the zero polynomial reported as 0.
    pub fn deg(&self, var: Var) -> u32 {
        self.degree(var).unwrap_or(0)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Joint degree in the listed variables.
    pub fn degree_in(&self, vars: &[Var]) -> Option<u32> {
        self.terms
            .keys()
            .map(|e| vars.iter().map(|v| e[v.index()]).sum())
            .max()
    }

    /// Variables that occur with a positive exponent.
    pub fn support(&self) -> Vec<Var> {
        Var::ALL
            .into_iter()
            .filter(|v| self.terms.keys().any(|e| e[v.index()] > 0))
            .collect()
    }

    pub fn contains(&self, var: Var) -> bool {
        self.terms.keys().any(|e| e[var.index()] > 0)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut result = Self::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Formal partial derivative.
    pub fn differentiate(&self, var: Var) -> Self {
        let i = var.index();
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut d = *e;
            d[i] -= 1;
            out.add_term(d, c * Rational::from_integer(BigInt::from(e[i])));
        }
        out
    }

    /// Coefficients with respect to `var`, index `k` holding the part multiplying `var^k`.
    pub fn coefficients(&self, var: Var) -> Vec<MultiPoly> {
        let i = var.index();
        let deg = self.deg(var) as usize;
        let mut out = vec![MultiPoly::zero(); deg + 1];
        if self.is_zero() {
            return out;
        }
        for (e, c) in &self.terms {
            let mut rest = *e;
            rest[i] = 0;
            out[e[i] as usize].add_term(rest, c.clone());
        }
        out
    }

    /// Homogeneous part of joint degree `d` in `vars`.
    pub fn homogeneous_part(&self, vars: &[Var], d: u32) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| vars.iter().map(|v| e[v.index()]).sum::<u32>() == d)
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
        }
    }

    /// Exact substitution of the bound variables; unbound ones stay symbolic.
    pub fn evaluate_exact(&self, bindings: &Bindings) -> Self {
        let mut powers: [Vec<Rational>; 4] = Default::default();
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            let mut coeff = c.clone();
            let mut rest = *e;
            for v in Var::ALL {
                let i = v.index();
                if let Some(value) = bindings.get(v) {
                    let k = e[i] as usize;
                    let table = &mut powers[i];
                    if table.is_empty() {
                        table.push(Rational::one());
                    }
                    while table.len() <= k {
                        let next = table.last().unwrap() * value;
                        table.push(next);
                    }
                    coeff *= &table[k];
                    rest[i] = 0;
                }
            }
            out.add_term(rest, coeff);
        }
        out
    }

    /// Value at a full binding, `None` if some variable in the support is unbound.
    pub fn evaluate_rational(&self, bindings: &Bindings) -> Option<Rational> {
        self.evaluate_exact(bindings).as_constant()
    }

    /// Floating point evaluation with complex values for every variable.
    pub fn evaluate_complex(&self, values: &[ComplexValue; 4]) -> ComplexValue {
        let mut acc = ComplexValue::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let mut term = ComplexValue::new(c.to_f64().unwrap_or(f64::NAN), 0.0);
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    term *= values[i].powu(k);
                }
            }
            acc += term;
        }
        acc
    }

    /// Sum of the absolute values of every term at the given point, used to scale residuals.
    pub fn magnitude_at(&self, values: &[ComplexValue; 4]) -> f64 {
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut m = c.to_f64().unwrap_or(f64::NAN).abs();
                for (i, &k) in e.iter().enumerate() {
                    if k > 0 {
                        m *= values[i].norm().powi(k as i32);
                    }
                }
                m
            })
            .sum()
    }

    /// Simultaneous substitution `var -> replacement` for every `Some` entry.
    pub fn compose(&self, replacements: &[Option<MultiPoly>; 4]) -> Self {
        let mut power_cache: [Vec<MultiPoly>; 4] = Default::default();
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            let mut term = MultiPoly::constant(c.clone());
            let mut rest = [0u32; 4];
            for (i, &k) in e.iter().enumerate() {
                match &replacements[i] {
                    Some(r) => {
                        let cache = &mut power_cache[i];
                        if cache.is_empty() {
                            cache.push(MultiPoly::one());
                        }
                        while cache.len() <= k as usize {
                            let next = cache.last().unwrap() * r;
                            cache.push(next);
                        }
                        term = &term * &cache[k as usize];
                    }
                    None => rest[i] = k,
                }
            }
            let shift = MultiPoly::monomial(Rational::one(), rest);
            out = &out + &(&term * &shift);
        }
        out
    }

    /// Exact quotient `self / divisor`, or `None` when the division leaves a remainder.
    pub fn div_exact(&self, divisor: &MultiPoly) -> Option<MultiPoly> {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        if self.is_zero() {
            return Some(Self::zero());
        }
        if let Some(c) = divisor.as_constant() {
            return Some(self.scale(&c.recip()));
        }
        // lex order on the exponent tuple is a monomial order, so the map's last key leads
        let (lead_e, lead_c) = divisor.terms.iter().next_back().unwrap();
        let lead_c_inv = lead_c.recip();
        let mut rem = self.clone();
        let mut quotient = Self::zero();
        while let Some((e, c)) = rem.terms.iter().next_back() {
            let mut q_e = [0u32; 4];
            for i in 0..4 {
                if e[i] < lead_e[i] {
                    return None;
                }
                q_e[i] = e[i] - lead_e[i];
            }
            let q_c = c * &lead_c_inv;
            for (de, dc) in &divisor.terms {
                let mut te = *de;
                for i in 0..4 {
                    te[i] += q_e[i];
                }
                rem.add_term(te, -(dc * &q_c));
            }
            quotient.add_term(q_e, q_c);
        }
        Some(quotient)
    }

    /// Least common multiple of the coefficient denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.terms
            .values()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }

    /// Positive gcd of the numerators after clearing denominators, as a rational content.
    pub fn content(&self) -> Rational {
        if self.is_zero() {
            return Rational::zero();
        }
        let den = self.denominator_lcm();
        let g = self
            .terms
            .values()
            .map(|c| (c * Rational::from_integer(den.clone())).to_integer())
            .fold(BigInt::zero(), |acc, n| acc.gcd(&n));
        Rational::new(g, den)
    }

    /// Integer-coefficient multiple with unit content and positive leading term
    /// in graded order.
    pub fn primitive_part(&self) -> MultiPoly {
        if self.is_zero() {
            return Self::zero();
        }
        let mut p = self.scale(&self.content().recip());
        if p.leading_term_graded().map(|(_, c)| c.is_negative()) == Some(true) {
            p = -p;
        }
        p
    }

    /// Leading term under the printing order (graded lex, x > y > M > t).
    pub fn leading_term_graded(&self) -> Option<(Exponents, Rational)> {
        self.terms
            .iter()
            .max_by(|a, b| graded_cmp(a.0, b.0))
            .map(|(e, c)| (*e, c.clone()))
    }

    /// Terms sorted for printing, largest first.
    pub fn sorted_terms(&self) -> Vec<(Exponents, Rational)> {
        let mut v: Vec<_> = self.terms.iter().map(|(e, c)| (*e, c.clone())).collect();
        v.sort_by(|a, b| graded_cmp(&b.0, &a.0));
        v
    }
}

/// Graded lexicographic comparison with x > y > M > t.
pub fn graded_cmp(a: &Exponents, b: &Exponents) -> Ordering {
    let da: u32 = a.iter().sum();
    let db: u32 = b.iter().sum();
    da.cmp(&db)
        .then(a[0].cmp(&b[0]))
        .then(a[1].cmp(&b[1]))
        .then(a[3].cmp(&b[3]))
        .then(a[2].cmp(&b[2]))
}

// inside a monomial, factors print alphabetically: M, t, x, y
const FACTOR_ORDER: [Var; 4] = [Var::M, Var::T, Var::X, Var::Y];

fn format_monomial(e: &Exponents) -> String {
    let mut parts = Vec::new();
    for v in FACTOR_ORDER {
        match e[v.index()] {
            0 => {}
            1 => parts.push(v.name().to_string()),
            k => parts.push(format!("{}^{}", v.name(), k)),
        }
    }
    parts.join("*")
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (idx, (e, c)) in self.sorted_terms().into_iter().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if negative {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if negative { " - " } else { " + " })?;
            }
            let mono = format_monomial(&e);
            if mono.is_empty() {
                f.write_str(&format_rational(&abs))?;
            } else if abs.is_one() {
                f.write_str(&mono)?;
            } else {
                write!(f, "{}*{}", format_rational(&abs), mono)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly({self})")
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        let (mut big, small) = if self.terms.len() >= rhs.terms.len() {
            (self.clone(), rhs)
        } else {
            (rhs.clone(), self)
        };
        for (e, c) in &small.terms {
            big.add_term(*e, c.clone());
        }
        big
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2], ea[3] + eb[3]];
                out.add_term(e, ca * cb);
            }
        }
        out
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly {
            terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect(),
        }
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -self.clone()
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for MultiPoly {
            type Output = MultiPoly;
            fn $m(self, rhs: MultiPoly) -> MultiPoly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $m(self, rhs: &MultiPoly) -> MultiPoly {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// A polynomial with coefficients rounded to doubles, for repeated evaluation.
#[derive(Clone, Debug, PartialEq)]
pub struct FloatPoly {
    terms: Vec<(Exponents, f64)>,
}

impl FloatPoly {
    pub fn new(p: &MultiPoly) -> Self {
        Self {
            terms: p
                .terms
                .iter()
                .map(|(e, c)| (*e, c.to_f64().unwrap_or(f64::NAN)))
                .collect(),
        }
    }

    /// Value and sum of absolute term values at `(x, y, t, M)`.
    pub fn eval(&self, values: &[ComplexValue; 4]) -> (ComplexValue, f64) {
        let mut acc = ComplexValue::new(0.0, 0.0);
        let mut mag = 0.0;
        for (e, c) in &self.terms {
            let mut term = ComplexValue::new(*c, 0.0);
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    term *= values[i].powu(k);
                }
            }
            mag += term.norm();
            acc += term;
        }
        (acc, mag)
    }

    pub fn value(&self, values: &[ComplexValue; 4]) -> ComplexValue {
        self.eval(values).0
    }
}
