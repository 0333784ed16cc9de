//! The (ε,λ)-neighborhood topology of a [`PcmSpace`].
//!
//! Open sets are never materialised; everything here works through basis
//! neighborhoods `N_p(ε, λ) = {q : F(p, q, ε) > 1 − λ}` evaluated on finite
//! point sets. Left limits `sup_{s<t} F(·, ·, s)` are approximated on a grid
//! along the ray through `t` that stops at `t·(1 − 10⁻⁹)`.

use crate::cone::Vector;
use crate::error::{Error, Result};
use crate::pcm_space::PcmSpace;
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq)]
pub struct Neighborhood<T> {
    pub center: T,
    pub eps: Vector<T>,
    pub lambda: T,
    /// Closed variant uses `≥ 1 − λ` instead of `> 1 − λ`.
    pub closed: bool,
}

impl<T: Real> Neighborhood<T> {
    pub fn open(center: T, eps: Vector<T>, lambda: T) -> Self {
        Neighborhood {
            center,
            eps,
            lambda,
            closed: false,
        }
    }

    pub fn closed(center: T, eps: Vector<T>, lambda: T) -> Self {
        Neighborhood {
            center,
            eps,
            lambda,
            closed: true,
        }
    }

    /// The countable-basis member `N_x(ε/n, 1/n)` for the smallest `n ≥ 2`
    /// with `1/n < λ`; it is contained in `N_x(ε, λ)`.
    pub fn local_basis(center: T, eps: &Vector<T>, lambda: T) -> Result<Self> {
        check_lambda(lambda)?;
        let mut n = (T::one() / lambda).floor() + T::one();
        n = n.max(T::lit(2.0));
        while T::one() / n >= lambda {
            n = n + T::one();
        }
        Ok(Neighborhood::open(center, eps.scale(T::one() / n)?, T::one() / n))
    }
}

/// Outcome of a finite-prefix convergence or Cauchy test. `Consistent` is
/// evidence, never a proof.
#[derive(Debug, Clone, PartialEq)]
pub enum Verdict<T> {
    /// Every schedule entry is satisfied by a tail starting at or before `tail_start`.
    Consistent { tail_start: usize },
    /// No admissible tail stays inside the neighborhood for `(eps, lambda)`;
    /// `index` is the latest offending term and `value` its kernel value.
    Refuted {
        eps: Vector<T>,
        lambda: T,
        index: usize,
        value: T,
    },
}

impl<T> Verdict<T> {
    pub fn is_consistent(&self) -> bool {
        matches!(self, Verdict::Consistent { .. })
    }
}

/// Separating balls for two distinct points.
#[derive(Debug, Clone, PartialEq)]
pub struct HausdorffWitness<T> {
    /// The `t` actually used; balls have radius argument `eps / 2`.
    pub eps: Vector<T>,
    /// `F(p, q, eps)`.
    pub lambda: T,
    pub lambda0: T,
    /// `λ1 ∗ λ1 ≥ λ0`; the balls are `N(eps/2, 1 − λ1)`.
    pub lambda1: T,
}

impl<T: Real> HausdorffWitness<T> {
    pub fn balls(&self, p: T, q: T) -> Result<(Neighborhood<T>, Neighborhood<T>)> {
        let half = self.eps.scale(T::lit(0.5))?;
        let lam = T::one() - self.lambda1;
        Ok((Neighborhood::open(p, half.clone(), lam), Neighborhood::open(q, half, lam)))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiameterProfile<T> {
    pub set: Vec<T>,
    /// `(t, δ_A(t))` in grid order.
    pub values: Vec<(Vector<T>, T)>,
    /// Largest grid value, approximating `sup_t δ_A(t)`.
    pub overall: T,
}

impl<T: Real> DiameterProfile<T> {
    /// `δ_A` never decreases between grid points `t_i ⪯ t_j`.
    pub fn is_nondecreasing(&self, cone: &crate::cone::ConeSpec) -> bool {
        self.values.iter().all(|(ti, di)| {
            self.values.iter().all(|(tj, dj)| match cone.order(ti, tj) {
                Ok(o) if o.is_leq() => *dj >= *di,
                _ => true,
            })
        })
    }

    pub fn is_bounded(&self, tol: T) -> bool {
        self.overall >= T::one() - tol
    }

    pub fn is_semi_bounded(&self, tol: T) -> bool {
        self.overall > T::zero() && !self.is_bounded(tol)
    }
}

/// A point whose worst-case left-limit profile exceeds the set's diameter.
#[derive(Debug, Clone, PartialEq)]
pub struct Nondiametral<T> {
    pub x: T,
    pub t0: Vector<T>,
    pub margin: T,
}

fn check_lambda<T: Real>(lambda: T) -> Result<()> {
    if lambda > T::zero() && lambda < T::one() {
        Ok(())
    } else {
        Err(Error::Domain(format!("lambda = {lambda} is outside (0, 1)")))
    }
}

impl<T: Real> PcmSpace<T> {
    pub fn member(&self, nbhd: &Neighborhood<T>, q: T) -> Result<bool> {
        check_lambda(nbhd.lambda)?;
        let v = self.eval_kernel(nbhd.center, q, &nbhd.eps)?;
        let threshold = T::one() - nbhd.lambda;
        Ok(if nbhd.closed { v >= threshold } else { v > threshold })
    }

    /// Whether every probe in `N_p(eps1, lam1)` also lies in `N_p(eps2, lam2)`.
    pub fn neighborhood_monotone_check(
        &self,
        p: T,
        eps1: &Vector<T>,
        lam1: T,
        eps2: &Vector<T>,
        lam2: T,
        probe: &[T],
    ) -> Result<bool> {
        if !self.cone.order(eps1, eps2)?.is_leq() || lam1 > lam2 {
            return Err(Error::Precondition("need eps1 ⪯ eps2 and lam1 ≤ lam2".into()));
        }
        let small = Neighborhood::open(p, eps1.clone(), lam1);
        let large = Neighborhood::open(p, eps2.clone(), lam2);
        for &q in probe {
            if self.member(&small, q)? && !self.member(&large, q)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Builds separating balls around `p ≠ q`.
    ///
    /// With `λ = F(p, q, t)` and `λ0 = λ + (1 − λ)/5`, the t-norm supplies
    /// `λ1` with `λ1 ∗ λ1 ≥ λ0`; the balls `N_p(t/2, 1 − λ1)` and
    /// `N_q(t/2, 1 − λ1)` are then disjoint in any Menger space. When
    /// `F(p, q, t) = 1`, `t` is halved until the kernel drops below 1.
    pub fn hausdorff_witness(&self, p: T, q: T, t0: &Vector<T>) -> Result<HausdorffWitness<T>> {
        if p == q {
            return Err(Error::Precondition("separation needs two distinct points".into()));
        }
        let mut eps = t0.clone();
        let mut lambda = self.eval_kernel(p, q, &eps)?;
        let half = T::lit(0.5);
        let mut halvings = 0;
        while lambda >= T::one() {
            if halvings == 64 {
                return Err(Error::WitnessNotFound(format!(
                    "kernel stays at 1 for points {p} and {q} down to t = {:?}",
                    eps.components()
                )));
            }
            eps = eps.scale(half)?;
            if !self.cone.in_interior(&eps)? {
                return Err(Error::WitnessNotFound("t underflowed while searching".into()));
            }
            lambda = self.eval_kernel(p, q, &eps)?;
            halvings += 1;
        }
        let lambda0 = lambda + (T::one() - lambda) * T::lit(0.2);
        let lambda1 = self.tnorm.find_idempotent_bound(lambda0)?;
        Ok(HausdorffWitness {
            eps,
            lambda,
            lambda0,
            lambda1,
        })
    }

    /// First probe lying in both separating balls, if any.
    pub fn common_probe(&self, p: T, q: T, witness: &HausdorffWitness<T>, probes: &[T]) -> Result<Option<T>> {
        let (bp, bq) = witness.balls(p, q)?;
        for &r in probes {
            if self.member(&bp, r)? && self.member(&bq, r)? {
                return Ok(Some(r));
            }
        }
        Ok(None)
    }

    fn check_schedules(&self, seq: &[T], eps_schedule: &[Vector<T>], lam_schedule: &[T]) -> Result<()> {
        if seq.is_empty() || eps_schedule.is_empty() || lam_schedule.is_empty() {
            return Err(Error::Input("sequence prefix and schedules must be nonempty".into()));
        }
        for &l in lam_schedule {
            check_lambda(l)?;
        }
        for e in eps_schedule {
            self.check_t(e)?;
        }
        for &x in seq {
            self.check_point(x)?;
        }
        Ok(())
    }

    /// Finite-prefix convergence test: for each `(ε, λ)` some tail covering
    /// at least the second half of the prefix must stay in `N_x(ε, λ)`.
    pub fn converges(
        &self,
        seq: &[T],
        x: T,
        eps_schedule: &[Vector<T>],
        lam_schedule: &[T],
    ) -> Result<Verdict<T>> {
        self.check_schedules(seq, eps_schedule, lam_schedule)?;
        self.check_point(x)?;
        let latest_start = seq.len() / 2;
        let mut tail_start = 0;
        for eps in eps_schedule {
            for &lambda in lam_schedule {
                let threshold = T::one() - lambda;
                let last_bad = seq
                    .iter()
                    .enumerate()
                    .rev()
                    .map(|(n, &xn)| (n, self.eval_unchecked(xn, x, eps)))
                    .find(|(_, v)| !(*v > threshold));
                match last_bad {
                    Some((n, value)) if n >= latest_start => {
                        return Ok(Verdict::Refuted {
                            eps: eps.clone(),
                            lambda,
                            index: n,
                            value,
                        })
                    }
                    Some((n, _)) => tail_start = tail_start.max(n + 1),
                    None => {}
                }
            }
        }
        Ok(Verdict::Consistent { tail_start })
    }

    /// Finite-prefix Cauchy test with the same tail rule as [`Self::converges`].
    pub fn is_cauchy(&self, seq: &[T], eps_schedule: &[Vector<T>], lam_schedule: &[T]) -> Result<Verdict<T>> {
        self.check_schedules(seq, eps_schedule, lam_schedule)?;
        let latest_start = seq.len() / 2;
        let mut tail_start = 0;
        for eps in eps_schedule {
            for &lambda in lam_schedule {
                let threshold = T::one() - lambda;
                // n0 must exceed min(n, m) for every failing pair
                let mut needed = 0;
                let mut offender = None;
                for n in 0..seq.len() {
                    for m in (n + 1)..seq.len() {
                        let v = self.eval_unchecked(seq[n], seq[m], eps);
                        if !(v > threshold) && n + 1 > needed {
                            needed = n + 1;
                            offender = Some((m, v));
                        }
                    }
                }
                if needed > latest_start {
                    let (index, value) = offender.expect("offender recorded with needed");
                    return Ok(Verdict::Refuted {
                        eps: eps.clone(),
                        lambda,
                        index,
                        value,
                    });
                }
                tail_start = tail_start.max(needed);
            }
        }
        Ok(Verdict::Consistent { tail_start })
    }

    /// `sup_{s<t} F(x, y, s)` on `resolution` grid points `s = t·(1 − 10⁻⁹)·k/resolution`.
    pub fn left_limit(&self, x: T, y: T, t: &Vector<T>, resolution: usize) -> Result<T> {
        let top = T::left_open_factor();
        let res = T::lit(resolution as f64);
        let mut best = T::zero();
        for k in 1..=resolution {
            let s = t.scale(top * T::lit(k as f64) / res)?;
            best = best.max(self.eval_unchecked(x, y, &s));
        }
        Ok(best)
    }

    fn check_set(&self, a: &[T]) -> Result<()> {
        if a.is_empty() {
            return Err(Error::Input("point set is empty".into()));
        }
        for &p in a {
            self.check_point(p)?;
        }
        Ok(())
    }

    /// Left-limit table `L[i][j] = sup_{s<t} F(a_i, a_j, s)`.
    fn left_limit_table(&self, a: &[T], t: &Vector<T>, resolution: usize) -> Result<Vec<Vec<T>>> {
        let n = a.len();
        let mut table = vec![vec![T::one(); n]; n];
        for i in 0..n {
            for j in i..n {
                let v = self.left_limit(a[i], a[j], t, resolution)?;
                table[i][j] = v;
                table[j][i] = v;
            }
        }
        Ok(table)
    }

    /// Probabilistic diameter `δ_A(t) = inf_{x,y∈A} sup_{s<t} F(x, y, s)`.
    pub fn prob_diameter(&self, a: &[T], t: &Vector<T>, resolution: usize) -> Result<T> {
        self.check_set(a)?;
        self.check_t(t)?;
        if resolution == 0 {
            return Err(Error::Input("grid resolution must be positive".into()));
        }
        let table = self.left_limit_table(a, t, resolution)?;
        Ok(table.iter().flatten().copied().fold(T::one(), T::min))
    }

    pub fn diameter_profile(&self, a: &[T], t_grid: &[Vector<T>], resolution: usize) -> Result<DiameterProfile<T>> {
        if t_grid.is_empty() {
            return Err(Error::Input("t grid is empty".into()));
        }
        let mut values = Vec::with_capacity(t_grid.len());
        for t in t_grid {
            values.push((t.clone(), self.prob_diameter(a, t, resolution)?));
        }
        let overall = values.iter().map(|(_, d)| *d).fold(T::zero(), T::max);
        Ok(DiameterProfile {
            set: a.to_vec(),
            values,
            overall,
        })
    }

    /// First `(ε, λ)`, scanning λ then ε in grid order, with `F(x, y, ε) > 1 − λ`
    /// for every pair in `a`.
    pub fn is_fc_bounded(
        &self,
        a: &[T],
        eps_grid: &[Vector<T>],
        lambda_grid: &[T],
    ) -> Result<Option<(Vector<T>, T)>> {
        self.check_set(a)?;
        for e in eps_grid {
            self.check_t(e)?;
        }
        for &l in lambda_grid {
            check_lambda(l)?;
        }
        for &lambda in lambda_grid {
            let threshold = T::one() - lambda;
            for eps in eps_grid {
                let all = a
                    .iter()
                    .enumerate()
                    .all(|(i, &x)| a[i..].iter().all(|&y| self.eval_unchecked(x, y, eps) > threshold));
                if all {
                    return Ok(Some((eps.clone(), lambda)));
                }
            }
        }
        Ok(None)
    }

    /// Searches `a × t_grid` for the point whose profile
    /// `inf_y sup_{s<t} F(x, y, s)` beats `δ_A(t)` by the largest margin;
    /// margins at or below `tol` count as diametral.
    pub fn find_nondiametral(
        &self,
        a: &[T],
        t_grid: &[Vector<T>],
        resolution: usize,
        tol: T,
    ) -> Result<Option<Nondiametral<T>>> {
        if a.len() < 2 {
            return Err(Error::Precondition("diametral analysis needs at least two points".into()));
        }
        self.check_set(a)?;
        if resolution == 0 {
            return Err(Error::Input("grid resolution must be positive".into()));
        }
        let mut best: Option<Nondiametral<T>> = None;
        for t in t_grid {
            self.check_t(t)?;
            let table = self.left_limit_table(a, t, resolution)?;
            let rows: Vec<T> = table.iter().map(|row| row.iter().copied().fold(T::one(), T::min)).collect();
            let delta = rows.iter().copied().fold(T::one(), T::min);
            for (i, &row) in rows.iter().enumerate() {
                let margin = row - delta;
                if margin > tol && best.as_ref().map_or(true, |b| margin > b.margin) {
                    best = Some(Nondiametral {
                        x: a[i],
                        t0: t.clone(),
                        margin,
                    });
                }
            }
        }
        Ok(best)
    }

    /// Greedy cover of `a` by open balls `N_c(eps, lambda)` centred at points of `a`.
    pub fn totally_bounded_cover(&self, a: &[T], eps: &Vector<T>, lambda: T) -> Result<Vec<T>> {
        self.check_set(a)?;
        let mut centers: Vec<T> = Vec::new();
        for &p in a {
            let mut covered = false;
            for &c in &centers {
                if self.member(&Neighborhood::open(c, eps.clone(), lambda), p)? {
                    covered = true;
                    break;
                }
            }
            if !covered {
                // validates eps/lambda even for the first center
                self.member(&Neighborhood::open(p, eps.clone(), lambda), p)?;
                centers.push(p);
            }
        }
        Ok(centers)
    }
}
