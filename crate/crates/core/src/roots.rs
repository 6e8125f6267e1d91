//! All complex roots of an eliminant at a fixed time.
//!
//! Simultaneous Aberth–Ehrlich iteration from deterministic starting points
//! (or the previous time step's roots), followed by Newton polishing.

use num_complex::Complex64;

use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::poly::Rational;
use crate::univariate::UniPolyInT;

#[derive(Clone, Debug, PartialEq)]
pub struct RootSet {
    pub t: Rational,
    /// Counted with multiplicity; length equals the eliminant degree.
    pub roots: Vec<Complex64>,
    /// Relative condition estimate of each root.
    pub condition: Vec<f64>,
    /// Multiplicity cluster label of each root.
    pub clusters: Vec<usize>,
    /// Largest scaled residual over the roots.
    pub residual: f64,
}

impl RootSet {
    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn cluster_sizes(&self) -> Vec<usize> {
        let n = self.clusters.iter().copied().max().map_or(0, |m| m + 1);
        let mut sizes = vec![0; n];
        for &c in &self.clusters {
            sizes[c] += 1;
        }
        sizes
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RootKind {
    Real,
    /// Member of a complex conjugate pair; holds the partner's index.
    Pair(usize),
}

impl RootKind {
    pub fn is_real(self) -> bool {
        matches!(self, RootKind::Real)
    }
}

/// Value and derivative by Horner's rule; `coeffs` runs from the constant term up.
pub fn horner(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

fn magnitude(coeffs: &[Complex64], z: Complex64) -> f64 {
    let r = z.norm();
    coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
}

fn normwise_magnitude(coeffs: &[Complex64], z: Complex64) -> f64 {
    let r = z.norm();
    let big = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    big * coeffs.iter().fold(0.0, |acc, _| acc * r + 1.0)
}

/// `|p(z)| / (max |c_i| sum |z|^i)`, the normwise backward error of `z` as a root.
pub fn scaled_residual(coeffs: &[Complex64], z: Complex64) -> f64 {
    let m = normwise_magnitude(coeffs, z);
    if m == 0.0 {
        return 0.0;
    }
    horner(coeffs, z).0.norm() / m
}

/// Cauchy bound `1 + max |c_i / c_n|`.
pub fn cauchy_radius(coeffs: &[Complex64]) -> f64 {
    let lead = coeffs.last().unwrap().norm();
    1.0 + coeffs[..coeffs.len() - 1]
        .iter()
        .map(|c| c.norm() / lead)
        .fold(0.0, f64::max)
}

/// Roots of unity on the Cauchy circle, turned by a fixed small angle.
pub fn initial_guesses(coeffs: &[Complex64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let radius = cauchy_radius(coeffs);
    (0..n)
        .map(|k| {
            let angle = std::f64::consts::TAU * k as f64 / n as f64 + 0.4;
            Complex64::from_polar(radius, angle)
        })
        .collect()
}

/// Solves the polynomial with the given coefficients (constant term first).
pub fn solve_poly(
    coeffs: &[Complex64],
    warm: Option<&[Complex64]>,
    tol: &Tolerances,
) -> Result<(Vec<Complex64>, f64)> {
    let n = coeffs.len().saturating_sub(1);
    if n > 0 && coeffs[n].norm() == 0.0 {
        return Err(Error::DegenerateSystem("leading coefficient vanishes".into()));
    }
    let zeros = coeffs.iter().take(n).take_while(|c| c.norm() == 0.0).count();
    if zeros > 0 {
        let warm = warm.filter(|w| w.len() == n).map(|w| {
            let mut w = w.to_vec();
            w.sort_by(|a, b| a.norm().total_cmp(&b.norm()));
            w.split_off(zeros)
        });
        let (mut roots, residual) = solve_poly(&coeffs[zeros..], warm.as_deref(), tol)?;
        roots.extend(std::iter::repeat(Complex64::new(0.0, 0.0)).take(zeros));
        return Ok((roots, residual));
    }
    if n == 0 {
        return Ok((Vec::new(), 0.0));
    }
    if n == 1 {
        let z = -coeffs[0] / coeffs[1];
        return Ok((vec![z], scaled_residual(coeffs, z)));
    }
    let mut z: Vec<Complex64> = match warm {
        Some(w) if w.len() == n && w.iter().all(|v| v.is_finite()) => dedupe(w),
        _ => initial_guesses(coeffs),
    };
    for _ in 0..tol.max_iterations {
        let mut max_step: f64 = 0.0;
        for k in 0..n {
            let (p, dp) = horner(coeffs, z[k]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let s: Complex64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| (z[k] - z[j]).inv())
                .sum();
            let w = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if w.is_finite() {
                z[k] -= w;
                max_step = max_step.max(w.norm() / (1.0 + z[k].norm()));
            }
        }
        if max_step < 1e-15 {
            break;
        }
    }
    polish(coeffs, &mut z);
    let residual = z
        .iter()
        .map(|&r| scaled_residual(coeffs, r))
        .fold(0.0, f64::max);
    if !(residual <= tol.root) {
        return Err(Error::NoConvergence { best: z, residual });
    }
    Ok((z, residual))
}

fn dedupe(w: &[Complex64]) -> Vec<Complex64> {
    // coincident starting points stall the Aberth correction
    let mut out: Vec<Complex64> = Vec::with_capacity(w.len());
    for (k, &v) in w.iter().enumerate() {
        let mut v = v;
        while out.iter().any(|u| (u - v).norm() <= 1e-12 * (1.0 + v.norm())) {
            v += Complex64::from_polar(1e-7 * (1.0 + v.norm()), 0.7 + k as f64);
        }
        out.push(v);
    }
    out
}

fn polish(coeffs: &[Complex64], z: &mut [Complex64]) {
    for r in z.iter_mut() {
        let mut best = scaled_residual(coeffs, *r);
        for _ in 0..3 {
            let (p, dp) = horner(coeffs, *r);
            let cand = *r - p / dp;
            if !cand.is_finite() {
                break;
            }
            let res = scaled_residual(coeffs, cand);
            if res < best {
                best = res;
                *r = cand;
            } else {
                break;
            }
        }
    }
}

/// Snaps nearly real roots to the real axis and averages conjugate partners so
/// the set is exactly closed under conjugation. Partners are matched closest
/// first; a root whose conjugate is farther than the real axis is taken as real.
pub fn symmetrize(roots: &mut [Complex64], eps_real: f64) {
    let n = roots.len();
    let mut done = vec![false; n];
    for i in 0..n {
        if roots[i].im.abs() < eps_real * (1.0 + roots[i].norm()) {
            roots[i].im = 0.0;
            done[i] = true;
        }
    }
    let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
    for i in (0..n).filter(|&i| !done[i] && roots[i].im > 0.0) {
        for j in (0..n).filter(|&j| !done[j] && roots[j].im < 0.0) {
            let gap = (roots[i] - roots[j].conj()).norm();
            if gap < roots[i].im.abs() + roots[j].im.abs() {
                pairs.push((gap, i, j));
            }
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    for (_, i, j) in pairs {
        if done[i] || done[j] {
            continue;
        }
        let avg = (roots[i] + roots[j].conj()) * 0.5;
        roots[i] = avg;
        roots[j] = avg.conj();
        done[i] = true;
        done[j] = true;
    }
    for i in 0..n {
        if !done[i] {
            roots[i].im = 0.0;
        }
    }
}

/// Groups roots closer than `eps_cluster (1 + |z|)`; labels follow first appearance.
pub fn cluster_labels(roots: &[Complex64], eps_cluster: f64) -> Vec<usize> {
    let n = roots.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        p[i] = r;
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            if (roots[i] - roots[j]).norm() < eps_cluster * (1.0 + roots[i].norm()) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut labels = vec![usize::MAX; n];
    let mut next = 0;
    let mut map = std::collections::HashMap::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        labels[i] = *map.entry(r).or_insert_with(|| {
            next += 1;
            next - 1
        });
    }
    labels
}

/// All roots of the eliminant at `t`, optionally continued from a previous root set.
pub fn solve_at(
    e: &UniPolyInT,
    t: &Rational,
    warm: Option<&RootSet>,
    tol: &Tolerances,
) -> Result<RootSet> {
    let coeffs = e.evaluate_complex(t)?;
    if coeffs.len() != e.degree() + 1 {
        return Err(Error::DegenerateSystem(
            "leading coefficient vanishes at this time".into(),
        ));
    }
    let (mut roots, _) = solve_poly(&coeffs, warm.map(|w| w.roots.as_slice()), tol)?;
    symmetrize(&mut roots, tol.real);
    let residual = roots
        .iter()
        .map(|&z| scaled_residual(&coeffs, z))
        .fold(0.0, f64::max);
    let condition = roots
        .iter()
        .map(|&z| {
            let (_, dp) = horner(&coeffs, z);
            magnitude(&coeffs, z) / ((1.0 + z.norm()) * dp.norm())
        })
        .collect();
    let clusters = cluster_labels(&roots, tol.cluster);
    Ok(RootSet {
        t: t.clone(),
        roots,
        condition,
        clusters,
        residual,
    })
}

/// Tags each root as real or as a member of a conjugate pair.
pub fn classify_real(roots: &[Complex64], eps_real: f64, eps_conj: f64) -> Result<Vec<RootKind>> {
    let n = roots.len();
    let mut kinds: Vec<Option<RootKind>> = vec![None; n];
    for i in 0..n {
        if roots[i].im.abs() < eps_real * (1.0 + roots[i].norm()) {
            kinds[i] = Some(RootKind::Real);
        }
    }
    for i in 0..n {
        if kinds[i].is_some() {
            continue;
        }
        let target = roots[i].conj();
        let partner = (0..n)
            .filter(|&j| j != i && kinds[j].is_none())
            .filter(|&j| (roots[j] - target).norm() <= eps_conj * (1.0 + target.norm()))
            .min_by(|&a, &b| {
                (roots[a] - target)
                    .norm()
                    .total_cmp(&(roots[b] - target).norm())
            });
        match partner {
            Some(j) => {
                kinds[i] = Some(RootKind::Pair(j));
                kinds[j] = Some(RootKind::Pair(i));
            }
            None => return Err(Error::UnpairedRoot(roots[i])),
        }
    }
    Ok(kinds.into_iter().map(Option::unwrap).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_poly;
    use crate::poly::{int, Var};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn imaginary_unit_pair() {
        let e = UniPolyInT::from_multi(&parse_poly("x^2 + 1").unwrap(), Var::X).unwrap();
        let rs = solve_at(&e, &int(7), None, &Tolerances::default()).unwrap();
        let mut ims: Vec<f64> = rs.roots.iter().map(|z| z.im).collect();
        ims.sort_by(f64::total_cmp);
        assert!((ims[0] + 1.0).abs() < 1e-14 && (ims[1] - 1.0).abs() < 1e-14);
        assert!(rs.roots.iter().all(|z| z.re.abs() < 1e-14));
    }

    #[test]
    fn warm_start_from_perturbed_roots() {
        let e = UniPolyInT::from_multi(&parse_poly("x^4 - 3*x^3 + t*x + 2").unwrap(), Var::X).unwrap();
        let tol = Tolerances::default();
        let cold = solve_at(&e, &int(1), None, &tol).unwrap();
        let mut warm = cold.clone();
        for (k, z) in warm.roots.iter_mut().enumerate() {
            *z += c(1e-4 * (k as f64 - 1.5), 5e-5);
        }
        let again = solve_at(&e, &int(1), Some(&warm), &tol).unwrap();
        for z in &cold.roots {
            let d = again.roots.iter().map(|w| (w - z).norm()).fold(f64::MAX, f64::min);
            assert!(d < 1e-10, "{z} lost ({d})");
        }
    }

    #[test]
    fn classify_examples() {
        let kinds = classify_real(&[c(1.0, 0.0), c(2.0, 3.0), c(2.0, -3.0)], 1e-9, 1e-8).unwrap();
        assert_eq!(kinds, vec![RootKind::Real, RootKind::Pair(2), RootKind::Pair(1)]);
        let kinds = classify_real(&[c(0.5, 1e-13)], 1e-9, 1e-8).unwrap();
        assert_eq!(kinds, vec![RootKind::Real]);
        assert!(matches!(
            classify_real(&[c(2.0, 3.0)], 1e-9, 1e-8),
            Err(Error::UnpairedRoot(_))
        ));
    }

    #[test]
    fn double_root_forms_a_cluster() {
        // (x - 1)^2 (x + 2)
        let coeffs = [c(2.0, 0.0), c(-3.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)];
        let (mut roots, _) = solve_poly(&coeffs, None, &Tolerances::default()).unwrap();
        symmetrize(&mut roots, 1e-9);
        let labels = cluster_labels(&roots, 1e-6);
        let mut sizes = std::collections::HashMap::new();
        for l in labels {
            *sizes.entry(l).or_insert(0) += 1;
        }
        let mut sizes: Vec<_> = sizes.into_values().collect();
        sizes.sort();
        assert_eq!(sizes, vec![1, 2]);
    }

    #[test]
    fn split_double_root_is_closed() {
        let mut roots = vec![c(-1.77, 0.0), c(-1.77, 8e-9), c(0.88, 0.59), c(0.88, -0.59), c(0.17, 0.57)];
        symmetrize(&mut roots, 1e-9);
        assert_eq!(roots[1], c(-1.77, 0.0));
        assert_eq!(roots[2], roots[3].conj());
        assert_eq!(roots[4].im, 0.0);
    }
}
