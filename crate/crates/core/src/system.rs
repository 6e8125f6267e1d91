//! Validated generating systems `F1(x, y, t) = 0`, `F2(x, y, t) = 0`.

use crate::error::{Error, Result};
use crate::parser::parse_poly;
use crate::poly::{MultiPoly, Var};

const XY: [Var; 2] = [Var::X, Var::Y];

/// A coefficient of the degree `(n - I)` part in `(x, y)` that grows faster than `t^I`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureWarning {
    /// 1 or 2.
    pub equation: usize,
    /// Joint degree in `(x, y)` of the offending part.
    pub xy_degree: u32,
    pub t_degree: u32,
    pub allowed: u32,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PolySystem {
    pub f1: MultiPoly,
    pub f2: MultiPoly,
    /// Total degree of `f1` in `(x, y)`.
    pub n: u32,
    /// Total degree of `f2` in `(x, y)`.
    pub m: u32,
    pub warnings: Vec<StructureWarning>,
}

impl PolySystem {
    pub fn new(f1: MultiPoly, f2: MultiPoly) -> Result<Self> {
        for (idx, f) in [(1, &f1), (2, &f2)] {
            if f.contains(Var::M) {
                return Err(Error::Config(format!("F{idx} must not contain M")));
            }
            if !f.contains(Var::X) && !f.contains(Var::Y) {
                return Err(Error::Config(format!("F{idx} depends on neither x nor y")));
            }
        }
        let n = f1.degree_in(&XY).unwrap_or(0);
        let m = f2.degree_in(&XY).unwrap_or(0);
        let mut warnings = structure_warnings(1, &f1, n);
        warnings.extend(structure_warnings(2, &f2, m));
        Ok(Self {
            f1,
            f2,
            n,
            m,
            warnings,
        })
    }

    pub fn parse(f1: &str, f2: &str) -> Result<Self> {
        Self::new(parse_poly(f1)?, parse_poly(f2)?)
    }

    /// Expected number of roots-particles `N = n m`.
    pub fn root_count(&self) -> usize {
        (self.n * self.m) as usize
    }

    /// Top-degree homogeneous parts in `(x, y)`.
    pub fn leading_forms(&self) -> (MultiPoly, MultiPoly) {
        (
            self.f1.homogeneous_part(&XY, self.n),
            self.f2.homogeneous_part(&XY, self.m),
        )
    }

    pub fn satisfies_structure(&self) -> bool {
        self.warnings.is_empty()
    }

    pub fn equation(&self, idx: usize) -> &MultiPoly {
        match idx {
            1 => &self.f1,
            _ => &self.f2,
        }
    }
}

fn structure_warnings(equation: usize, f: &MultiPoly, n: u32) -> Vec<StructureWarning> {
    (0..=n)
        .filter_map(|d| {
            let part = f.homogeneous_part(&XY, d);
            let t_degree = part.degree(Var::T)?;
            let allowed = n - d;
            (t_degree > allowed).then_some(StructureWarning {
                equation,
                xy_degree: d,
                t_degree,
                allowed,
            })
        })
        .collect()
}
