//! Exact real-root isolation by Sturm sequences.

use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};

use crate::poly::{int, Rational};
use crate::upoly::UPoly;

/// `(lo, hi]` containing exactly one real root; `lo == hi` marks an exact rational root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsolatingInterval {
    pub lo: Rational,
    pub hi: Rational,
}

impl IsolatingInterval {
    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn midpoint(&self) -> Rational {
        (&self.lo + &self.hi) / int(2)
    }

    pub fn contains(&self, u: &Rational) -> bool {
        if self.lo == self.hi {
            return *u == self.lo;
        }
        *u > self.lo && *u <= self.hi
    }
}

pub struct SturmSequence {
    seq: Vec<UPoly>,
}

impl SturmSequence {
    pub fn new(p: &UPoly) -> Self {
        let mut seq = vec![p.clone(), p.derivative()];
        while !seq.last().unwrap().is_zero() {
            let n = seq.len();
            let (_, r) = seq[n - 2].div_rem(&seq[n - 1]);
            // positive rescaling keeps the sign pattern and the numbers small
            let r = if r.is_zero() {
                r
            } else {
                let s = r.primitive();
                if (s.leading().is_positive()) == (r.leading().is_positive()) {
                    -s
                } else {
                    s
                }
            };
            seq.push(r);
        }
        seq.pop();
        Self { seq }
    }

    pub fn variations(&self, u: &Rational) -> usize {
        let signs: Vec<Ordering> = self
            .seq
            .iter()
            .map(|p| p.eval(u).cmp(&Rational::zero()))
            .filter(|s| *s != Ordering::Equal)
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Number of distinct real roots in `(a, b]`.
    pub fn count(&self, a: &Rational, b: &Rational) -> usize {
        self.variations(a).saturating_sub(self.variations(b))
    }
}

/// All real roots lie strictly inside `(-B, B)` with this Cauchy bound `B`.
pub fn cauchy_bound(p: &UPoly) -> Rational {
    let lead = p.leading().abs();
    let max = p
        .coeffs()
        .iter()
        .take(p.coeffs().len().saturating_sub(1))
        .map(|c| c.abs() / &lead)
        .max()
        .unwrap_or_else(Rational::zero);
    Rational::one() + max
}

/// Number of distinct real roots of `p` over the whole line.
pub fn count_real_roots(p: &UPoly) -> usize {
    if p.degree().unwrap_or(0) == 0 {
        return 0;
    }
    let sf = p.squarefree();
    let b = cauchy_bound(&sf);
    SturmSequence::new(&sf).count(&-b.clone(), &b)
}

/// Isolating intervals for the distinct real roots of `p` in `[a, b]`, or on the whole line.
pub fn isolate_real_roots(p: &UPoly, range: Option<(Rational, Rational)>) -> Vec<IsolatingInterval> {
    if p.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let sf = p.squarefree();
    let sturm = SturmSequence::new(&sf);
    let (a, b) = range.unwrap_or_else(|| {
        let bound = cauchy_bound(&sf);
        (-bound.clone(), bound)
    });
    let mut out = Vec::new();
    if sf.eval(&a).is_zero() {
        out.push(IsolatingInterval {
            lo: a.clone(),
            hi: a.clone(),
        });
    }
    let mut stack = vec![(a, b)];
    while let Some((lo, hi)) = stack.pop() {
        match sturm.count(&lo, &hi) {
            0 => {}
            1 => {
                if sf.eval(&hi).is_zero() {
                    out.push(IsolatingInterval {
                        lo: hi.clone(),
                        hi,
                    });
                } else {
                    out.push(IsolatingInterval { lo, hi });
                }
            }
            _ => {
                let mid = (&lo + &hi) / int(2);
                stack.push((mid.clone(), hi));
                stack.push((lo, mid));
            }
        }
    }
    out.sort_by(|x, y| x.lo.cmp(&y.lo));
    out
}

/// Bisects an isolating interval of the squarefree polynomial `p` until it is narrower than `width`.
pub fn refine(p: &UPoly, interval: &IsolatingInterval, width: &Rational) -> IsolatingInterval {
    let sf = p.squarefree();
    let mut iv = interval.clone();
    if iv.lo == iv.hi {
        return iv;
    }
    let sturm = SturmSequence::new(&sf);
    while iv.width() > *width {
        let mid = iv.midpoint();
        if sf.eval(&mid).is_zero() {
            return IsolatingInterval {
                lo: mid.clone(),
                hi: mid,
            };
        }
        if sturm.count(&iv.lo, &mid) == 1 {
            iv.hi = mid;
        } else {
            iv.lo = mid;
        }
    }
    iv
}
