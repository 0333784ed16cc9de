//! Self-map pairs on a compact interval and a common-fixed-point search.
//!
//! The search runs four stages, cheapest first, and returns the first point
//! whose residuals under both maps are within tolerance: closed-form roots,
//! Picard iteration, Mann iteration through the affine convex structure, and
//! grid refinement.

use crate::cone::Vector;
use crate::convexity::ConvexStructure;
use crate::error::{Error, Result};
use crate::pcm_space::PcmSpace;
use crate::report::{AxiomReport, CheckBuilder, Witness};
use crate::scalar::{linspace, Real};

const INEQ_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum MapKind<T> {
    /// `x / 2`
    ScaleHalf,
    /// `x² / 3 + 1 / 2`
    Quad,
    /// `a·x + b`
    Affine { a: T, b: T },
    /// Piecewise-linear interpolation through `(x, y)` knots sorted by `x`.
    Tabulated(Vec<(T, T)>),
}

impl<T: Real> MapKind<T> {
    pub fn identity() -> Self {
        MapKind::Affine { a: T::one(), b: T::zero() }
    }

    fn apply(&self, x: T) -> T {
        match self {
            MapKind::ScaleHalf => x * T::lit(0.5),
            MapKind::Quad => x * x / T::lit(3.0) + T::lit(0.5),
            MapKind::Affine { a, b } => *a * x + *b,
            MapKind::Tabulated(knots) => {
                let i = knots.partition_point(|(kx, _)| *kx <= x);
                if i == 0 {
                    return knots[0].1;
                }
                if i == knots.len() {
                    return knots[i - 1].1;
                }
                let (x0, y0) = knots[i - 1];
                let (x1, y1) = knots[i];
                y0 + (y1 - y0) * (x - x0) / (x1 - x0)
            }
        }
    }

    /// Closed-form fixed points, unfiltered.
    fn exact_roots(&self) -> Vec<T> {
        match self {
            MapKind::ScaleHalf => vec![T::zero()],
            MapKind::Quad => {
                let r3 = T::lit(3.0).sqrt();
                let two = T::lit(2.0);
                vec![(T::lit(3.0) - r3) / two, (T::lit(3.0) + r3) / two]
            }
            MapKind::Affine { a, b } if *a != T::one() => vec![*b / (T::one() - *a)],
            _ => Vec::new(),
        }
    }
}

/// A map `f: E → E` on the closed interval `E = [lo, hi]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SelfMap<T> {
    pub kind: MapKind<T>,
    pub lo: T,
    pub hi: T,
}

impl<T: Real> SelfMap<T> {
    /// Checks `f(E) ⊆ E` on 1001 evenly spaced points.
    pub fn new(kind: MapKind<T>, lo: T, hi: T) -> Result<Self> {
        Self::with_grid(kind, lo, hi, 1001)
    }

    /// Checks `f(E) ⊆ E` on `n` evenly spaced points; the error witness is
    /// the first grid point mapped outside `E`.
    pub fn with_grid(kind: MapKind<T>, lo: T, hi: T, n: usize) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::Input(format!("map domain needs finite lo < hi, got [{lo}, {hi}]")));
        }
        if n < 2 {
            return Err(Error::Input("range grid needs at least 2 points".into()));
        }
        if let MapKind::Tabulated(knots) = &kind {
            if knots.len() < 2 || knots.windows(2).any(|w| !(w[0].0 < w[1].0)) {
                return Err(Error::Input("tabulated map needs at least 2 knots with increasing x".into()));
            }
            if knots[0].0 > lo || knots[knots.len() - 1].0 < hi {
                return Err(Error::Input("tabulated map does not cover its domain".into()));
            }
        }
        let map = SelfMap { kind, lo, hi };
        for x in linspace(lo, hi, n) {
            let y = map.kind.apply(x);
            if !(y >= lo && y <= hi) {
                return Err(Error::Construction {
                    reason: format!("map sends {x} to {y}, outside [{lo}, {hi}]"),
                    witness: vec![x.as_f64()],
                });
            }
        }
        Ok(map)
    }

    pub fn contains(&self, x: T) -> bool {
        x >= self.lo && x <= self.hi
    }

    pub fn eval(&self, x: T) -> Result<T> {
        if !self.contains(x) {
            return Err(Error::Domain(format!("{x} is outside [{}, {}]", self.lo, self.hi)));
        }
        Ok(self.kind.apply(x))
    }

    pub fn apply(&self, x: T) -> T {
        self.kind.apply(x)
    }

    pub fn residual(&self, x: T) -> T {
        (self.kind.apply(x) - x).abs()
    }

    /// `x0, f(x0), f²(x0), …` with `steps + 1` entries.
    pub fn picard_trajectory(&self, x0: T, steps: usize) -> Result<Vec<T>> {
        let mut x = x0;
        self.eval(x)?;
        let mut out = Vec::with_capacity(steps + 1);
        out.push(x);
        for _ in 0..steps {
            x = self.kind.apply(x);
            out.push(x);
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Exact,
    Picard,
    Mann,
    Grid,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::Picard => "picard",
            Method::Mann => "mann",
            Method::Grid => "grid",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPointConfig<T> {
    pub tol: T,
    pub max_iter: usize,
    pub mann_mu: T,
    pub grid_n: usize,
}

impl<T: Real> Default for FixedPointConfig<T> {
    fn default() -> Self {
        FixedPointConfig {
            tol: T::lit(1e-9),
            max_iter: 1_000_000,
            mann_mu: T::lit(0.5),
            grid_n: 1001,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FixedPointResult<T> {
    pub point: T,
    pub residual_f: T,
    pub residual_g: T,
    pub iterations: usize,
    pub method: Method,
}

fn check_pair<T: Real>(f: &SelfMap<T>, g: &SelfMap<T>) -> Result<()> {
    if f.lo != g.lo || f.hi != g.hi {
        return Err(Error::Precondition("f and g must share their domain".into()));
    }
    Ok(())
}

fn check_grids<T: Real>(space: &PcmSpace<T>, f: &SelfMap<T>, samples: &[T], t_samples: &[Vector<T>]) -> Result<()> {
    if samples.is_empty() || t_samples.is_empty() {
        return Err(Error::Input("map sweep needs point and t samples".into()));
    }
    for &x in samples {
        f.eval(x)?;
        space.check_point(x)?;
    }
    for t in t_samples {
        space.check_t(t)?;
    }
    Ok(())
}

/// `F(fx, fy, ε) ≥ F(x, y, ε)` on `samples² × t_samples`; witness `(x, y, ε)`.
pub fn check_nonexpansive<T: Real>(
    space: &PcmSpace<T>,
    f: &SelfMap<T>,
    samples: &[T],
    t_samples: &[Vector<T>],
) -> Result<AxiomReport> {
    check_grids(space, f, samples, t_samples)?;
    let tol = T::lit(INEQ_TOL);
    let mut b = CheckBuilder::new("nonexpansive");
    for &x in samples {
        for &y in samples {
            let (fx, fy) = (f.apply(x), f.apply(y));
            for t in t_samples {
                let slack = space.eval_unchecked(fx, fy, t) - space.eval_unchecked(x, y, t);
                b.record(slack.as_f64(), slack >= -tol, || Witness::scalars(&[x, y]).push_vector(t));
            }
        }
    }
    Ok(AxiomReport {
        checks: vec![b.finish()],
    })
}

/// `F(f(x), g(y), t) ≥ F(x, y, t)` for `x ≠ y`, plus `f(x), g(x) ∈ E` on the samples.
pub fn check_pair_condition<T: Real>(
    space: &PcmSpace<T>,
    f: &SelfMap<T>,
    g: &SelfMap<T>,
    samples: &[T],
    t_samples: &[Vector<T>],
) -> Result<AxiomReport> {
    check_pair(f, g)?;
    check_grids(space, f, samples, t_samples)?;
    let tol = T::lit(INEQ_TOL);
    let mut cond = CheckBuilder::new("pair-condition");
    let mut range = CheckBuilder::new("pair-range");
    for &x in samples {
        let (fx, gx) = (f.apply(x), g.apply(x));
        let outside = |v: T| {
            if v < f.lo {
                v - f.lo
            } else if v > f.hi {
                f.hi - v
            } else {
                (v - f.lo).min(f.hi - v)
            }
        };
        let slack = outside(fx).min(outside(gx));
        range.record(slack.as_f64(), slack >= T::zero(), || Witness::scalars(&[x, fx, gx]));
        for &y in samples.iter().filter(|y| **y != x) {
            let gy = g.apply(y);
            for t in t_samples {
                let slack = space.eval_unchecked(fx, gy, t) - space.eval_unchecked(x, y, t);
                cond.record(slack.as_f64(), slack >= -tol, || Witness::scalars(&[x, y]).push_vector(t));
            }
        }
    }
    Ok(AxiomReport {
        checks: vec![cond.finish(), range.finish()],
    })
}

/// `|f(x) − x| ≤ tol` and `|g(x) − x| ≤ tol` by direct evaluation.
pub fn verify_fixed_point<T: Real>(f: &SelfMap<T>, g: &SelfMap<T>, x: T, tol: T) -> Result<bool> {
    Ok((f.eval(x)? - x).abs() <= tol && (g.eval(x)? - x).abs() <= tol)
}

fn result<T: Real>(f: &SelfMap<T>, g: &SelfMap<T>, x: T, iterations: usize, method: Method) -> FixedPointResult<T> {
    FixedPointResult {
        point: x,
        residual_f: f.residual(x),
        residual_g: g.residual(x),
        iterations,
        method,
    }
}

fn iterate<T: Real>(
    f: &SelfMap<T>,
    g: &SelfMap<T>,
    cfg: &FixedPointConfig<T>,
    method: Method,
    step: impl Fn(T) -> Result<T>,
) -> Result<Option<FixedPointResult<T>>> {
    let step_tol = cfg.tol / T::lit(10.0);
    let mut x = (f.lo + f.hi) * T::lit(0.5);
    for n in 1..=cfg.max_iter {
        let next = step(x)?;
        if !next.is_finite() {
            return Ok(None);
        }
        let done = (next - x).abs() <= step_tol && f.residual(next) <= cfg.tol && g.residual(next) <= cfg.tol;
        x = next;
        if done {
            return Ok(Some(result(f, g, x, n, method)));
        }
    }
    Ok(None)
}

/// Searches `E` for a common fixed point of `f` and `g`.
///
/// Returns [`Error::NotConverged`] with the best grid candidate when no stage
/// reaches `cfg.tol`.
pub fn find_common_fixed_point<T: Real>(
    f: &SelfMap<T>,
    g: &SelfMap<T>,
    cfg: &FixedPointConfig<T>,
) -> Result<FixedPointResult<T>> {
    check_pair(f, g)?;
    if !(cfg.tol > T::zero()) {
        return Err(Error::Input(format!("tolerance {} must be positive", cfg.tol)));
    }
    if !(cfg.mann_mu > T::zero() && cfg.mann_mu < T::one()) {
        return Err(Error::Input(format!("mann_mu = {} is outside (0, 1)", cfg.mann_mu)));
    }
    if cfg.grid_n < 2 {
        return Err(Error::Input("grid_n must be at least 2".into()));
    }

    let mut roots = f.kind.exact_roots();
    if roots.is_empty() {
        roots = g.kind.exact_roots();
    }
    roots.retain(|r| f.contains(*r));
    roots.sort_by(|a, b| a.partial_cmp(b).expect("finite roots"));
    if let Some(&r) = roots
        .iter()
        .find(|r| f.residual(**r) <= cfg.tol && g.residual(**r) <= cfg.tol)
    {
        return Ok(result(f, g, r, 0, Method::Exact));
    }

    if let Some(r) = iterate(f, g, cfg, Method::Picard, |x| Ok(f.apply(x)))? {
        return Ok(r);
    }
    let affine = ConvexStructure::Affine;
    let mann = |x: T| {
        let fx = f.apply(x);
        // the structure only accepts points ordered inside E, so clamp
        affine.s_point(x, fx.max(f.lo).min(f.hi), cfg.mann_mu)
    };
    if let Some(r) = iterate(f, g, cfg, Method::Mann, mann)? {
        return Ok(r);
    }

    let worst = |x: T| f.residual(x).max(g.residual(x));
    let (mut lo, mut hi) = (f.lo, f.hi);
    let mut evaluations = 0;
    let mut best = (lo, worst(lo));
    for _ in 0..200 {
        let grid = linspace(lo, hi, cfg.grid_n);
        evaluations += grid.len();
        let (i, r) = grid
            .iter()
            .enumerate()
            .map(|(i, &x)| (i, worst(x)))
            .fold((0, T::infinity()), |acc, cur| if cur.1 < acc.1 { cur } else { acc });
        if r < best.1 {
            best = (grid[i], r);
        }
        if best.1 <= cfg.tol {
            return Ok(result(f, g, best.0, evaluations, Method::Grid));
        }
        let new_lo = grid[i.saturating_sub(1)];
        let new_hi = grid[(i + 1).min(grid.len() - 1)];
        if !(new_lo < new_hi) || (new_lo == lo && new_hi == hi) {
            break;
        }
        lo = new_lo;
        hi = new_hi;
    }
    Err(Error::NotConverged {
        best: best.0.as_f64(),
        residual: best.1.as_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Status;

    fn t1(v: f64) -> Vector<f64> {
        Vector::scalar(v)
    }

    fn unit(kind: MapKind<f64>) -> SelfMap<f64> {
        SelfMap::new(kind, 0.0, 1.0).unwrap()
    }

    #[test]
    fn range_check_reports_first_escape() {
        let err = SelfMap::with_grid(MapKind::Affine { a: 1.0, b: 0.9 }, 0.0, 1.0, 11).unwrap_err();
        match err {
            Error::Construction { witness, .. } => assert_eq!(witness, vec![0.2]),
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn nonexpansive_examples() {
        let h = PcmSpace::heaviside(0.0, 1.0, 5).unwrap();
        let pts = linspace(0.0, 1.0, 21);
        let ts = vec![t1(0.1), t1(0.5), t1(1.0)];
        let r = check_nonexpansive(&h, &unit(MapKind::Quad), &pts, &ts).unwrap();
        assert_eq!(r.checks[0].status, Status::Pass);
        let r = check_nonexpansive(&h, &unit(MapKind::identity()), &pts, &ts).unwrap();
        assert_eq!(r.checks[0].status, Status::Pass);
        assert_eq!(r.checks[0].margin, 0.0);
    }

    #[test]
    fn expansive_map_fails() {
        let h = PcmSpace::heaviside(0.0, 1.0, 5).unwrap();
        // 2x − 0.5 leaves [0, 1], so build it without the range check
        let f = SelfMap {
            kind: MapKind::Affine { a: 2.0, b: -0.5 },
            lo: 0.0,
            hi: 1.0,
        };
        let r = check_nonexpansive(&h, &f, &[0.0, 0.5], &[t1(0.6)]).unwrap();
        assert_eq!(r.checks[0].status, Status::Fail);
        assert_eq!(r.checks[0].witness.as_ref().unwrap().flatten(), vec![0.0, 0.5, 0.6]);
        assert_eq!(r.checks[0].margin, -1.0);
    }

    #[test]
    fn pair_condition_scale_half() {
        let s = PcmSpace::fraction(0.0, 1.0, 11).unwrap();
        let f = unit(MapKind::ScaleHalf);
        let r = check_pair_condition(&s, &f, &f, &linspace(0.0, 1.0, 11), &[t1(0.5), t1(1.0), t1(2.0)]).unwrap();
        assert!(r.checks.iter().all(|c| c.status == Status::Pass), "{r:?}");
    }

    #[test]
    fn solver_examples() {
        let cfg = FixedPointConfig::default();
        let half = unit(MapKind::ScaleHalf);
        let r = find_common_fixed_point(&half, &half, &cfg).unwrap();
        assert_eq!(r.point, 0.0);
        assert_eq!(r.method, Method::Exact);

        let quad = unit(MapKind::Quad);
        let r = find_common_fixed_point(&quad, &quad, &cfg).unwrap();
        assert!((r.point - (3.0 - 3.0_f64.sqrt()) / 2.0).abs() <= 1e-9);
        assert!(r.residual_f <= 1e-9 && r.residual_g <= 1e-9);

        let id = unit(MapKind::identity());
        let r = find_common_fixed_point(&id, &id, &cfg).unwrap();
        assert_eq!((r.point, r.method, r.residual_f), (0.5, Method::Picard, 0.0));
    }

    #[test]
    fn later_stages_are_reached() {
        let cfg = FixedPointConfig::default();
        // Picard oscillates on 1 − x; Mann averages it down to 0.5
        let flip = unit(MapKind::Tabulated(vec![(0.0, 1.0), (1.0, 0.0)]));
        let r = find_common_fixed_point(&flip, &flip, &cfg).unwrap();
        assert_eq!(r.method, Method::Picard);
        let cfg_far = FixedPointConfig { max_iter: 50, ..cfg };
        let tent = unit(MapKind::Tabulated(vec![(0.0, 0.2), (0.3, 1.0), (1.0, 0.0)]));
        let r = find_common_fixed_point(&tent, &tent, &cfg_far).unwrap();
        assert!(verify_fixed_point(&tent, &tent, r.point, 1e-9).unwrap());
    }

    #[test]
    fn disjoint_fixed_points_do_not_converge() {
        let f = unit(MapKind::ScaleHalf);
        let g = unit(MapKind::Affine { a: 0.5, b: 0.5 });
        let cfg = FixedPointConfig { max_iter: 1000, ..FixedPointConfig::default() };
        assert!(matches!(find_common_fixed_point(&f, &g, &cfg), Err(Error::NotConverged { .. })));
    }

    #[test]
    fn verify_examples() {
        let half = unit(MapKind::ScaleHalf);
        assert!(verify_fixed_point(&half, &half, 0.0, 0.0).unwrap());
        let quad = unit(MapKind::Quad);
        assert!(verify_fixed_point(&quad, &quad, (3.0 - 3.0_f64.sqrt()) / 2.0, 1e-12).unwrap());
        assert!(matches!(
            verify_fixed_point(&quad, &quad, (3.0 + 3.0_f64.sqrt()) / 2.0, 1e-12),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn picard_decay_on_scale_half() {
        let half = unit(MapKind::ScaleHalf);
        let traj = half.picard_trajectory(0.8, 20).unwrap();
        for (n, x) in traj.iter().enumerate() {
            assert_eq!(*x, 0.8 * 0.5_f64.powi(n as i32));
        }
    }
}
