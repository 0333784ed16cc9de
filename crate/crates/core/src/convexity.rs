//! Convex structures `S(x, y, μ)` and the probabilistic convexity conditions.
//!
//! Three conditions are checked on sampled tuples:
//!
//! - the convexity inequality
//!   `F(S(x,y,μ), z, 2ε) ≥ F(x, z, ε/μ) ∗ F(y, z, ε/(1−μ))`,
//! - strict convexity, read as the splitting equalities
//!   `F(z, x, t) = F(x, y, t/(1−μ))` and `F(z, y, t) = F(x, y, t/μ)` for
//!   `z = S(x, y, μ)`, together with uniqueness of `z` on a grid,
//! - the strict structural inequality
//!   `F(S(x,y,μ), z, ε) > min{F(x, z, ε), F(z, y, ε)}`.

use crate::cone::Vector;
use crate::error::{Error, Result};
use crate::pcm_space::{Carrier, PcmSpace};
use crate::report::{AxiomReport, CheckBuilder, Witness};
use crate::scalar::Real;

const INEQ_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Default, PartialEq)]
pub enum ConvexStructure<T> {
    /// `μx + (1 − μ)y`.
    #[default]
    Affine,
    /// Explicit values `((x, y, μ), S(x, y, μ))` for `μ ∈ (0, 1)`; the
    /// boundary laws supply `μ = 0` and `μ = 1`.
    Tabulated(Vec<((T, T, T), T)>),
}

/// Finite union of closed intervals.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalSet<T>(pub Vec<(T, T)>);

impl<T: Real> IntervalSet<T> {
    pub fn new(parts: Vec<(T, T)>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::Input("interval set is empty".into()));
        }
        for &(lo, hi) in &parts {
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                return Err(Error::Input(format!("bad interval [{lo}, {hi}]")));
            }
        }
        Ok(IntervalSet(parts))
    }

    pub fn interval(lo: T, hi: T) -> Result<Self> {
        Self::new(vec![(lo, hi)])
    }

    pub fn contains(&self, p: T) -> bool {
        self.0.iter().any(|&(lo, hi)| p >= lo && p <= hi)
    }
}

fn check_inner_mus<T: Real>(mus: &[T]) -> Result<()> {
    if mus.is_empty() {
        return Err(Error::Input("mu grid is empty".into()));
    }
    for &mu in mus {
        if !(mu > T::zero() && mu < T::one()) {
            return Err(Error::Precondition(format!("mu = {mu} is outside (0, 1)")));
        }
    }
    Ok(())
}

fn check_mu<T: Real>(mu: T) -> Result<()> {
    if mu >= T::zero() && mu <= T::one() {
        Ok(())
    } else {
        Err(Error::Domain(format!("mu = {mu} is outside [0, 1]")))
    }
}

impl<T: Real> ConvexStructure<T> {
    pub fn s_point(&self, x: T, y: T, mu: T) -> Result<T> {
        check_mu(mu)?;
        if mu.is_zero() {
            return Ok(y);
        }
        if mu == T::one() || x == y {
            return Ok(x);
        }
        match self {
            ConvexStructure::Affine => {
                let s = mu * x + (T::one() - mu) * y;
                Ok(s.max(x.min(y)).min(x.max(y)))
            }
            ConvexStructure::Tabulated(table) => table
                .iter()
                .find(|((a, b, m), _)| *a == x && *b == y && *m == mu)
                .map(|(_, s)| *s)
                .ok_or_else(|| Error::Input(format!("no table entry for ({x}, {y}, {mu})"))),
        }
    }

    fn check_space(&self, space: &PcmSpace<T>) -> Result<()> {
        match (self, &space.carrier) {
            (ConvexStructure::Affine, Carrier::Interval { .. }) | (ConvexStructure::Tabulated(_), _) => Ok(()),
            _ => Err(Error::Unsupported("the affine structure needs an interval carrier".into())),
        }
    }

    fn check_inputs(&self, space: &PcmSpace<T>, samples: &[T], mus: &[T], t_samples: &[Vector<T>]) -> Result<()> {
        self.check_space(space)?;
        check_inner_mus(mus)?;
        if samples.is_empty() || t_samples.is_empty() {
            return Err(Error::Input("convexity sweep needs point and t samples".into()));
        }
        for &p in samples {
            space.check_point(p)?;
        }
        for t in t_samples {
            space.check_t(t)?;
        }
        Ok(())
    }

    /// Boundary laws `S(x,y,0) = y`, `S(x,y,1) = x`, idempotence `S(x,x,μ) = x`
    /// and, for `x ≠ y`, some grid `μ` with `S(x,y,μ) ∉ {x, y}`.
    pub fn check_laws(&self, samples: &[T], mus: &[T]) -> Result<AxiomReport> {
        for &mu in mus {
            check_mu(mu)?;
        }
        let mut boundary = CheckBuilder::new("boundary-law");
        let mut idem = CheckBuilder::new("idempotence");
        let mut interior = CheckBuilder::new("interior-point-exists");
        for &x in samples {
            for &y in samples {
                let s0 = self.s_point(x, y, T::zero())?;
                let s1 = self.s_point(x, y, T::one())?;
                let err = (s0 - y).abs().max((s1 - x).abs());
                boundary.record(-err.as_f64(), s0 == y && s1 == x, || Witness::scalars(&[x, y]));
                if x == y {
                    for &mu in mus {
                        let s = self.s_point(x, x, mu)?;
                        idem.record(-(s - x).abs().as_f64(), s == x, || Witness::scalars(&[x, mu, s]));
                    }
                    continue;
                }
                let mut found = false;
                for &mu in mus {
                    let s = self.s_point(x, y, mu)?;
                    if s != x && s != y {
                        found = true;
                        break;
                    }
                }
                interior.record(if found { 0.0 } else { -1.0 }, found, || Witness::scalars(&[x, y]));
            }
        }
        Ok(AxiomReport {
            checks: vec![boundary.finish(), idem.finish(), interior.finish()],
        })
    }

    /// The convexity inequality on `samples³ × mus × t_samples`; witness `(x, y, z, μ, ε)`.
    pub fn check_g1(
        &self,
        space: &PcmSpace<T>,
        samples: &[T],
        mus: &[T],
        t_samples: &[Vector<T>],
    ) -> Result<AxiomReport> {
        self.check_inputs(space, samples, mus, t_samples)?;
        let tol = T::lit(INEQ_TOL);
        let two = T::lit(2.0);
        let mut b = CheckBuilder::new("convexity-inequality");
        for &x in samples {
            for &y in samples {
                for &mu in mus {
                    let s = self.s_point(x, y, mu)?;
                    for &z in samples {
                        for eps in t_samples {
                            let lhs = space.eval_unchecked(s, z, &eps.scale(two)?);
                            let a = space.eval_unchecked(x, z, &eps.scale(T::one() / mu)?);
                            let c = space.eval_unchecked(y, z, &eps.scale(T::one() / (T::one() - mu))?);
                            let slack = lhs - space.tnorm.combine(a, c);
                            b.record(slack.as_f64(), slack >= -tol, || {
                                Witness::scalars(&[x, y, z, mu]).push_vector(eps)
                            });
                        }
                    }
                }
            }
        }
        Ok(AxiomReport {
            checks: vec![b.finish()],
        })
    }

    /// The strict structural inequality plus the equality-collapse scan.
    ///
    /// A tuple passes when `LHS − RHS > 10⁻¹²`. Tuples with `x = y`, and
    /// tuples where both sides are equal at `0` or `1`, are degenerate.
    /// `equality-collapse` fails a tuple with `x ≠ y` whose two sides agree
    /// at every `ε` of the grid with at least one unsaturated value.
    pub fn check_g3(
        &self,
        space: &PcmSpace<T>,
        samples: &[T],
        mus: &[T],
        t_samples: &[Vector<T>],
    ) -> Result<AxiomReport> {
        self.check_inputs(space, samples, mus, t_samples)?;
        let tol = T::lit(INEQ_TOL);
        let saturated = |v: T| v.is_zero() || v == T::one();
        let mut strict = CheckBuilder::new("strict-structural-inequality");
        let mut collapse = CheckBuilder::new("equality-collapse");
        for &x in samples {
            for &y in samples {
                for &mu in mus {
                    let s = self.s_point(x, y, mu)?;
                    for &z in samples {
                        let mut all_equal = true;
                        let mut any_unsaturated = false;
                        for eps in t_samples {
                            let lhs = space.eval_unchecked(s, z, eps);
                            let rhs = space.eval_unchecked(x, z, eps).min(space.eval_unchecked(z, y, eps));
                            let slack = lhs - rhs;
                            let equal = slack.abs() <= tol;
                            all_equal &= equal;
                            any_unsaturated |= equal && !(saturated(lhs) && saturated(rhs));
                            let witness = || Witness::scalars(&[x, y, z, mu]).push_vector(eps);
                            if x == y || (lhs == rhs && saturated(lhs)) {
                                strict.degenerate(witness);
                            } else {
                                strict.record(slack.as_f64(), slack > tol, witness);
                            }
                        }
                        if x == y {
                            continue;
                        }
                        let witness = || Witness::scalars(&[x, y, z, mu]);
                        if all_equal && any_unsaturated {
                            collapse.record(-1.0, false, witness);
                        } else if all_equal {
                            collapse.degenerate(witness);
                        } else {
                            collapse.record(0.0, true, witness);
                        }
                    }
                }
            }
        }
        Ok(AxiomReport {
            checks: vec![strict.finish(), collapse.finish()],
        })
    }

    /// Splitting equalities within `tol` for `z = S(x, y, μ)` on
    /// `samples² × mus × t_samples`, then a sweep of `z_grid` for other points
    /// meeting both equalities at every `t`.
    ///
    /// Mismatches at a jump of a step kernel (the value changes under a
    /// relative `10⁻⁹` perturbation of `t`) are degenerate. Impostors found by
    /// the grid sweep are degenerate too: agreement on finitely many `t` does
    /// not establish the equalities.
    pub fn check_strict_convexity(
        &self,
        space: &PcmSpace<T>,
        samples: &[T],
        mus: &[T],
        t_samples: &[Vector<T>],
        z_grid: &[T],
        tol: T,
    ) -> Result<AxiomReport> {
        self.check_inputs(space, samples, mus, t_samples)?;
        if !(tol >= T::zero()) {
            return Err(Error::Precondition(format!("tolerance {tol} is negative")));
        }
        let lo_f = T::one() - T::lit(1e-9);
        let hi_f = T::one() + T::lit(1e-9);
        let at_jump = |p: T, q: T, t: &Vector<T>| -> Result<bool> {
            Ok((space.eval_unchecked(p, q, &t.scale(lo_f)?) - space.eval_unchecked(p, q, &t.scale(hi_f)?)).abs() > tol)
        };
        let mut split = CheckBuilder::new("strict-convexity-split");
        let mut unique = CheckBuilder::new("strict-convexity-uniqueness");
        for &x in samples {
            for &y in samples {
                for &mu in mus {
                    let z = self.s_point(x, y, mu)?;
                    let mut scaled = Vec::with_capacity(t_samples.len());
                    for t in t_samples {
                        let tx = t.scale(T::one() / (T::one() - mu))?;
                        let ty = t.scale(T::one() / mu)?;
                        let fx = space.eval_unchecked(x, y, &tx);
                        let fy = space.eval_unchecked(x, y, &ty);
                        let err = (space.eval_unchecked(z, x, t) - fx)
                            .abs()
                            .max((space.eval_unchecked(z, y, t) - fy).abs());
                        let witness = || Witness::scalars(&[x, y, mu]).push_vector(t);
                        if err > tol
                            && (at_jump(z, x, t)? || at_jump(x, y, &tx)? || at_jump(z, y, t)? || at_jump(x, y, &ty)?)
                        {
                            split.degenerate(witness);
                        } else {
                            split.record((tol - err).as_f64(), err <= tol, witness);
                        }
                        scaled.push((t, fx, fy));
                    }
                    if x == y {
                        continue;
                    }
                    for &zp in z_grid {
                        if (zp - z).abs() <= tol {
                            continue;
                        }
                        let mismatch = scaled
                            .iter()
                            .map(|(t, fx, fy)| {
                                (space.eval_unchecked(zp, x, t) - *fx)
                                    .abs()
                                    .max((space.eval_unchecked(zp, y, t) - *fy).abs())
                            })
                            .fold(T::zero(), T::max);
                        let witness = || Witness::scalars(&[x, y, mu, zp]);
                        if mismatch <= tol {
                            unique.degenerate(witness);
                        } else {
                            unique.record((mismatch - tol).as_f64(), true, witness);
                        }
                    }
                }
            }
        }
        Ok(AxiomReport {
            checks: vec![split.finish(), unique.finish()],
        })
    }

    /// First `(x, y, μ, S)` over probe pairs inside `set` with `S(x, y, μ) ∉ set`.
    pub fn convexity_witness(&self, set: &IntervalSet<T>, probes: &[T], mus: &[T]) -> Result<Option<(T, T, T, T)>> {
        let inside: Vec<T> = probes.iter().copied().filter(|p| set.contains(*p)).collect();
        for &x in &inside {
            for &y in &inside {
                for &mu in mus {
                    let s = self.s_point(x, y, mu)?;
                    if !set.contains(s) {
                        return Ok(Some((x, y, mu, s)));
                    }
                }
            }
        }
        Ok(None)
    }

    pub fn is_convex_set(&self, set: &IntervalSet<T>, probes: &[T], mus: &[T]) -> Result<bool> {
        Ok(self.convexity_witness(set, probes, mus)?.is_none())
    }

    /// Closed convex shell of a finite set: `[min Y, max Y]` for the affine structure.
    pub fn closed_convex_shell(&self, points: &[T]) -> Result<(T, T)> {
        if !matches!(self, ConvexStructure::Affine) {
            return Err(Error::Unsupported("shells are only computed for the affine structure".into()));
        }
        if points.is_empty() {
            return Err(Error::Input("shell of an empty set".into()));
        }
        if points.iter().any(|p| !p.is_finite()) {
            return Err(Error::Input("shell input contains a non-finite value".into()));
        }
        let lo = points.iter().copied().fold(T::infinity(), T::min);
        let hi = points.iter().copied().fold(T::neg_infinity(), T::max);
        Ok((lo, hi))
    }

    /// Probes inside the closed ball `N_c[ε, λ]` stay inside under `S`; witness `(a, b, μ)`.
    #[allow(clippy::too_many_arguments)]
    pub fn closed_ball_convexity_check(
        &self,
        space: &PcmSpace<T>,
        center: T,
        eps: &Vector<T>,
        lambda: T,
        probes: &[T],
        mus: &[T],
    ) -> Result<AxiomReport> {
        self.check_space(space)?;
        for &mu in mus {
            check_mu(mu)?;
        }
        let ball = crate::topology::Neighborhood::closed(center, eps.clone(), lambda);
        let mut inside = Vec::new();
        for &p in probes {
            if space.member(&ball, p)? {
                inside.push(p);
            }
        }
        let threshold = T::one() - lambda;
        let mut b = CheckBuilder::new("closed-ball-convexity");
        for &a in &inside {
            for &c in &inside {
                for &mu in mus {
                    let s = self.s_point(a, c, mu)?;
                    let slack = space.eval_unchecked(center, s, eps) - threshold;
                    b.record(slack.as_f64(), slack >= T::zero(), || Witness::scalars(&[a, c, mu]));
                }
            }
        }
        Ok(AxiomReport {
            checks: vec![b.finish()],
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Status;
    use crate::scalar::linspace;

    fn t1(v: f64) -> Vector<f64> {
        Vector::scalar(v)
    }

    const AFF: ConvexStructure<f64> = ConvexStructure::Affine;

    #[test]
    fn s_point_examples() {
        assert_eq!(AFF.s_point(0.2, 0.8, 0.5).unwrap(), 0.5);
        assert_eq!(AFF.s_point(0.3, 0.9, 0.0).unwrap(), 0.9);
        assert_eq!(AFF.s_point(0.3, 0.9, 1.0).unwrap(), 0.3);
        assert_eq!(AFF.s_point(0.0, 1.0, 0.25).unwrap(), 0.75);
        assert!(matches!(AFF.s_point(0.0, 1.0, 1.5), Err(Error::Domain(_))));
    }

    #[test]
    fn laws_hold_for_affine() {
        let r = AFF.check_laws(&linspace(0.0, 1.0, 7), &linspace(0.0, 1.0, 11)).unwrap();
        assert!(r.checks.iter().all(|c| c.status == Status::Pass), "{r:?}");
    }

    fn grids() -> (Vec<f64>, Vec<f64>, Vec<Vector<f64>>) {
        (linspace(0.0, 1.0, 5), vec![0.25, 0.5, 0.75], vec![t1(0.2), t1(1.0)])
    }

    #[test]
    fn g1_passes_on_heaviside_and_fraction() {
        let (pts, mus, ts) = grids();
        for space in [PcmSpace::heaviside(0.0, 1.0, 5).unwrap(), PcmSpace::fraction(0.0, 1.0, 5).unwrap()] {
            let r = AFF.check_g1(&space, &pts, &mus, &ts).unwrap();
            assert_eq!(r.checks[0].status, Status::Pass, "{r:?}");
        }
    }

    #[test]
    fn g1_rejects_boundary_mu() {
        let (pts, _, ts) = grids();
        let space = PcmSpace::fraction(0.0, 1.0, 5).unwrap();
        assert!(matches!(AFF.check_g1(&space, &pts, &[0.0], &ts), Err(Error::Precondition(_))));
    }

    #[test]
    fn g3_heaviside_example() {
        let h = PcmSpace::heaviside(0.0, 1.0, 5).unwrap();
        let r = AFF.check_g3(&h, &[0.0, 0.5, 1.0], &[0.5], &[t1(0.6)]).unwrap();
        let strict = r.get("strict-structural-inequality").unwrap();
        assert_ne!(strict.status, Status::Fail, "{r:?}");
        let r = AFF.check_g3(&h, &[0.0, 1.0], &[0.5], &[t1(0.4)]).unwrap();
        assert_ne!(r.get("strict-structural-inequality").unwrap().status, Status::Fail);
        assert_eq!(h.eval_kernel(0.5, 0.5, &t1(0.4)).unwrap(), 1.0);
    }

    #[test]
    fn g3_fraction_example() {
        let f = PcmSpace::fraction(0.0, 1.0, 5).unwrap();
        let lhs = f.eval_kernel(0.5, 0.0, &t1(1.0)).unwrap();
        assert!((lhs - 2.0 / 3.0).abs() < 1e-15);
        let (pts, mus, ts) = grids();
        let r = AFF.check_g3(&f, &pts, &mus, &ts).unwrap();
        assert!(r.all_passed(), "{r:?}");
        assert_eq!(r.get("equality-collapse").unwrap().status, Status::Pass);
    }

    #[test]
    fn g3_coincident_points_are_degenerate() {
        let f = PcmSpace::fraction(0.0, 1.0, 5).unwrap();
        let r = AFF.check_g3(&f, &[0.3], &[0.5], &[t1(1.0)]).unwrap();
        assert_eq!(r.get("strict-structural-inequality").unwrap().status, Status::Degenerate);
    }

    #[test]
    fn strict_convexity_heaviside_example() {
        let h = PcmSpace::heaviside(0.0, 1.0, 5).unwrap();
        let z = AFF.s_point(0.0, 1.0, 0.3).unwrap();
        assert!((z - 0.7).abs() < 1e-15);
        let ts: Vec<_> = (0..100).map(|k| t1(0.005 + 0.01 * k as f64)).collect();
        let r = AFF
            .check_strict_convexity(&h, &[0.0, 1.0], &[0.3, 0.5], &ts, &linspace(0.0, 1.0, 101), 1e-12)
            .unwrap();
        assert_ne!(r.get("strict-convexity-split").unwrap().status, Status::Fail, "{r:?}");
        assert_eq!(r.get("strict-convexity-uniqueness").unwrap().status, Status::Pass, "{r:?}");
    }

    #[test]
    fn strict_convexity_fraction() {
        let f = PcmSpace::fraction(0.0, 1.0, 5).unwrap();
        let (pts, mus, ts) = grids();
        let r = AFF
            .check_strict_convexity(&f, &pts, &mus, &ts, &linspace(0.0, 1.0, 101), 1e-12)
            .unwrap();
        assert!(r.checks.iter().all(|c| c.status == Status::Pass), "{r:?}");
    }

    #[test]
    fn coarse_t_grid_leaves_impostors() {
        let h = PcmSpace::heaviside(0.0, 1.0, 5).unwrap();
        let r = AFF
            .check_strict_convexity(&h, &[0.0, 1.0], &[0.5], &[t1(0.2), t1(1.0)], &linspace(0.0, 1.0, 101), 1e-12)
            .unwrap();
        assert_eq!(r.get("strict-convexity-uniqueness").unwrap().status, Status::Degenerate);
    }

    #[test]
    fn convex_set_examples() {
        let probes = linspace(0.0, 1.0, 21);
        let mus = linspace(0.0, 1.0, 11);
        assert!(AFF.is_convex_set(&IntervalSet::interval(0.2, 0.7).unwrap(), &probes, &mus).unwrap());
        let split = IntervalSet::new(vec![(0.0, 0.3), (0.7, 1.0)]).unwrap();
        assert!(!AFF.is_convex_set(&split, &[0.1, 0.9], &[0.5]).unwrap());
        assert_eq!(AFF.convexity_witness(&split, &[0.1, 0.9], &[0.5]).unwrap(), Some((0.1, 0.9, 0.5, 0.5)));
        assert!(AFF.is_convex_set(&IntervalSet::interval(0.4, 0.4).unwrap(), &[0.4], &mus).unwrap());
    }

    #[test]
    fn shell_examples() {
        assert_eq!(AFF.closed_convex_shell(&[0.2, 0.9, 0.4]).unwrap(), (0.2, 0.9));
        assert_eq!(AFF.closed_convex_shell(&[0.3]).unwrap(), (0.3, 0.3));
        assert_eq!(AFF.closed_convex_shell(&[0.0, 1.0]).unwrap(), (0.0, 1.0));
        let tab: ConvexStructure<f64> = ConvexStructure::Tabulated(vec![]);
        assert!(matches!(tab.closed_convex_shell(&[0.1]), Err(Error::Unsupported(_))));
    }

    #[test]
    fn ball_convexity_examples() {
        let f = PcmSpace::fraction(0.0, 1.0, 5).unwrap();
        let r = AFF
            .closed_ball_convexity_check(&f, 0.5, &t1(1.0), 0.4, &linspace(0.0, 1.0, 21), &linspace(0.0, 1.0, 11))
            .unwrap();
        assert_eq!(r.checks[0].status, Status::Pass);
        assert!(r.checks[0].checked > 0);

        let h = PcmSpace::heaviside(-1.0, 1.0, 5).unwrap();
        let r = AFF
            .closed_ball_convexity_check(&h, 0.0, &t1(0.3), 0.5, &linspace(-0.29, 0.29, 30), &linspace(0.0, 1.0, 11))
            .unwrap();
        assert_eq!(r.checks[0].status, Status::Pass);
    }

    #[test]
    fn tabulated_lookup() {
        let tab = ConvexStructure::Tabulated(vec![((0.0, 1.0, 0.5), 0.5)]);
        assert_eq!(tab.s_point(0.0, 1.0, 0.5).unwrap(), 0.5);
        assert_eq!(tab.s_point(0.0, 1.0, 0.0).unwrap(), 1.0);
        assert!(matches!(tab.s_point(0.0, 1.0, 0.3), Err(Error::Input(_))));
    }
}
