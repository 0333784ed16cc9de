//! Probabilistic cone metric spaces.
//!
//! A [`PcmSpace`] pairs a carrier set with a distance kernel `F(p, q, t) ∈ [0, 1]`,
//! a t-norm and a cone. The vector argument `t` must lie in the cone interior;
//! it is reduced to a positive real by the kernel's [`Scalarizer`] before the
//! family formula is applied.
//!
//! Axiom checking is sampled: a failure is a disproof, a pass is evidence at
//! the resolution of the supplied grids.

use serde::{Deserialize, Serialize};

use crate::cone::{ConeSpec, Vector};
use crate::error::{Error, Result};
use crate::report::{AxiomReport, CheckBuilder, Witness};
use crate::scalar::{linspace, Real};
use crate::tnorm::TNorm;

#[derive(Debug, Clone, PartialEq)]
pub enum Carrier<T> {
    /// Closed interval `[lo, hi]`, sampled at `samples` evenly spaced points.
    Interval { lo: T, hi: T, samples: usize },
    Points(Vec<T>),
    /// `{1, 2, …, max}`.
    Naturals { max: u64 },
}

impl<T: Real> Carrier<T> {
    pub fn interval(lo: T, hi: T, samples: usize) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::Input(format!("interval needs finite lo < hi, got [{lo}, {hi}]")));
        }
        if samples < 2 {
            return Err(Error::Input(format!("interval needs at least 2 samples, got {samples}")));
        }
        Ok(Carrier::Interval { lo, hi, samples })
    }

    pub fn points(points: Vec<T>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Input("point carrier is empty".into()));
        }
        if points.iter().any(|p| !p.is_finite()) {
            return Err(Error::Input("point carrier contains a non-finite value".into()));
        }
        Ok(Carrier::Points(points))
    }

    pub fn naturals(max: u64) -> Result<Self> {
        if max == 0 {
            return Err(Error::Input("naturals carrier needs max ≥ 1".into()));
        }
        Ok(Carrier::Naturals { max })
    }

    pub fn contains(&self, p: T) -> bool {
        match self {
            Carrier::Interval { lo, hi, .. } => p >= *lo && p <= *hi,
            Carrier::Points(ps) => ps.contains(&p),
            Carrier::Naturals { max } => {
                p >= T::one() && p.fract().is_zero() && p <= T::lit(*max as f64)
            }
        }
    }

    pub fn samples(&self) -> Vec<T> {
        match self {
            Carrier::Interval { lo, hi, samples } => linspace(*lo, *hi, *samples),
            Carrier::Points(ps) => ps.clone(),
            Carrier::Naturals { max } => (1..=*max).map(|n| T::lit(n as f64)).collect(),
        }
    }

    pub fn bounds(&self) -> Option<(T, T)> {
        match self {
            Carrier::Interval { lo, hi, .. } => Some((*lo, *hi)),
            _ => None,
        }
    }
}

/// Distance descriptor turned into a step kernel by [`PcmSpace::from_cone_metric`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConeMetric {
    /// `|x − y|`
    Absolute,
    /// `|x − y|²`; violates the triangle inequality.
    Squared,
    /// `0` on the diagonal, `1` elsewhere.
    Discrete,
}

impl ConeMetric {
    pub fn distance<T: Real>(self, x: T, y: T) -> T {
        match self {
            ConeMetric::Absolute => (x - y).abs(),
            ConeMetric::Squared => (x - y) * (x - y),
            ConeMetric::Discrete => {
                if x == y {
                    T::zero()
                } else {
                    T::one()
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelFamily {
    /// `1` when `t > |p − q|`, else `0`.
    Heaviside,
    /// `exp(−|p − q| / t)`.
    ExpRatio,
    /// `t / (t + |p − q|)`.
    Fraction,
    /// `min(p, q) / max(p, q)`, independent of `t`; positive carriers only.
    RationalPair,
    /// `1` when `t > d(p, q)`, else `0`.
    FromConeMetric(ConeMetric),
}

/// How a cone vector `t ≫ θ` is reduced to a positive real.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scalarizer {
    #[default]
    Norm,
    FirstComponent,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kernel<T> {
    pub family: KernelFamily,
    /// Multiplier on `|p − q|` for the distance-based families.
    pub scale: T,
    pub scalarizer: Scalarizer,
}

impl<T: Real> Kernel<T> {
    pub fn new(family: KernelFamily) -> Self {
        Kernel {
            family,
            scale: T::one(),
            scalarizer: Scalarizer::Norm,
        }
    }

    pub fn with_scale(mut self, scale: T) -> Self {
        self.scale = scale;
        self
    }

    pub fn with_scalarizer(mut self, scalarizer: Scalarizer) -> Self {
        self.scalarizer = scalarizer;
        self
    }

    /// Values are only ever `0` or `1`.
    pub fn is_step(&self) -> bool {
        matches!(self.family, KernelFamily::Heaviside | KernelFamily::FromConeMetric(_))
    }

    pub fn scalarize(&self, cone: &ConeSpec, t: &Vector<T>) -> T {
        match self.scalarizer {
            Scalarizer::Norm => cone.norm_of(t),
            Scalarizer::FirstComponent => t[0],
        }
    }

    /// Family formula at an already scalarized, positive `ts`.
    pub fn eval_scalar(&self, p: T, q: T, ts: T) -> T {
        let step = |d: T| if ts > d { T::one() } else { T::zero() };
        match self.family {
            KernelFamily::Heaviside => step(self.scale * (p - q).abs()),
            KernelFamily::FromConeMetric(m) => step(m.distance(p, q)),
            KernelFamily::ExpRatio => (-(self.scale * (p - q).abs()) / ts).exp(),
            KernelFamily::Fraction => ts / (ts + self.scale * (p - q).abs()),
            KernelFamily::RationalPair => {
                if p == q {
                    T::one()
                } else {
                    p.min(q) / p.max(q)
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PcmSpace<T> {
    pub carrier: Carrier<T>,
    pub cone: ConeSpec,
    pub tnorm: TNorm,
    pub kernel: Kernel<T>,
}

impl<T: Real> PcmSpace<T> {
    pub fn new(carrier: Carrier<T>, cone: ConeSpec, tnorm: TNorm, kernel: Kernel<T>) -> Result<Self> {
        if kernel.family == KernelFamily::RationalPair && !matches!(carrier, Carrier::Naturals { .. }) {
            return Err(Error::Input("kernel family incompatible with carrier".into()));
        }
        if !(kernel.scale.is_finite() && kernel.scale > T::zero()) {
            return Err(Error::Input(format!("kernel scale must be positive, got {}", kernel.scale)));
        }
        Ok(PcmSpace {
            carrier,
            cone,
            tnorm,
            kernel,
        })
    }

    /// `H(t − |x − y|)` on `[lo, hi]` with the minimum t-norm.
    pub fn heaviside(lo: T, hi: T, samples: usize) -> Result<Self> {
        Self::new(
            Carrier::interval(lo, hi, samples)?,
            ConeSpec::orthant(1)?,
            TNorm::Minimum,
            Kernel::new(KernelFamily::Heaviside),
        )
    }

    /// `t / (t + |x − y|)` on `[lo, hi]` with the minimum t-norm.
    pub fn fraction(lo: T, hi: T, samples: usize) -> Result<Self> {
        Self::new(
            Carrier::interval(lo, hi, samples)?,
            ConeSpec::orthant(1)?,
            TNorm::Minimum,
            Kernel::new(KernelFamily::Fraction),
        )
    }

    /// `exp(−|x − y| / ‖t‖)` over the planar orthant with the product t-norm.
    pub fn exp_ratio(lo: T, hi: T, samples: usize) -> Result<Self> {
        Self::new(
            Carrier::interval(lo, hi, samples)?,
            ConeSpec::orthant(2)?,
            TNorm::Product,
            Kernel::new(KernelFamily::ExpRatio),
        )
    }

    /// `min/max` ratio on `{1, …, max}` with the product t-norm.
    pub fn rational_pair(max: u64) -> Result<Self> {
        Self::new(
            Carrier::naturals(max)?,
            ConeSpec::orthant(1)?,
            TNorm::Product,
            Kernel::new(KernelFamily::RationalPair),
        )
    }

    /// Embeds a real-valued cone metric as the step kernel `H(t − d(p, q))`
    /// with the minimum t-norm, after sweeping the metric axioms over the
    /// carrier samples.
    pub fn from_cone_metric(metric: ConeMetric, carrier: Carrier<T>) -> Result<Self> {
        let report = check_cone_metric_axioms(metric, &carrier.samples())?;
        if let Some(failed) = report.failures().next() {
            return Err(Error::Construction {
                reason: format!("{} failed with margin {}", failed.axiom_id, failed.margin),
                witness: failed.witness.as_ref().map(|w| w.flatten()).unwrap_or_default(),
            });
        }
        Self::from_cone_metric_unchecked(metric, carrier)
    }

    /// Same embedding without the metric sweep, for inspecting broken metrics.
    pub fn from_cone_metric_unchecked(metric: ConeMetric, carrier: Carrier<T>) -> Result<Self> {
        Self::new(
            carrier,
            ConeSpec::orthant(1)?,
            TNorm::Minimum,
            Kernel::new(KernelFamily::FromConeMetric(metric)),
        )
    }

    pub fn samples(&self) -> Vec<T> {
        self.carrier.samples()
    }

    pub(crate) fn check_t(&self, t: &Vector<T>) -> Result<()> {
        if !self.cone.in_interior(t)? {
            return Err(Error::Domain(format!("t = {:?} is not in the cone interior", t.components())));
        }
        Ok(())
    }

    pub(crate) fn check_point(&self, p: T) -> Result<()> {
        if !self.carrier.contains(p) {
            return Err(Error::Input(format!("point {p} is outside the carrier")));
        }
        Ok(())
    }

    pub fn eval_kernel(&self, p: T, q: T, t: &Vector<T>) -> Result<T> {
        self.check_t(t)?;
        self.check_point(p)?;
        self.check_point(q)?;
        Ok(self.eval_unchecked(p, q, t))
    }

    pub(crate) fn eval_unchecked(&self, p: T, q: T, t: &Vector<T>) -> T {
        self.kernel.eval_scalar(p, q, self.kernel.scalarize(&self.cone, t))
    }

    /// `t ↦ c·(1, …, 1)` in the cone's dimension.
    pub fn t_splat(&self, c: T) -> Result<Vector<T>> {
        let t = Vector::new(vec![c; self.cone.dim])?;
        self.check_t(&t)?;
        Ok(t)
    }

    /// Sampled sweep of positivity, identity, symmetry, certainty propagation,
    /// the Menger triangle inequality, kernel range and monotonicity in `t`.
    ///
    /// Step kernels vanish whenever `t ≤ d(p, q)` and reach `1` as soon as
    /// `t > d(p, q)`; their zero values and their distinct-point ones are
    /// reported as degenerate, not failed.
    pub fn check_pcm_axioms(&self, points: &[T], t_samples: &[Vector<T>], tol: T) -> Result<AxiomReport> {
        if points.is_empty() || t_samples.is_empty() {
            return Err(Error::Input("axiom sweep needs point and t samples".into()));
        }
        if !(tol >= T::zero()) {
            return Err(Error::Precondition(format!("tolerance {tol} is negative")));
        }
        for &p in points {
            self.check_point(p)?;
        }
        for t in t_samples {
            self.check_t(t)?;
        }
        if !points.iter().any(|p| *p != points[0]) {
            return Err(Error::Precondition("axiom sweep needs at least two distinct points".into()));
        }

        let n = points.len();
        let m = t_samples.len();
        // f[(i * n + j) * m + k] = F(p_i, p_j, t_k)
        let mut f = Vec::with_capacity(n * n * m);
        for &p in points {
            for &q in points {
                for t in t_samples {
                    f.push(self.eval_unchecked(p, q, t));
                }
            }
        }
        let at = |i: usize, j: usize, k: usize| f[(i * n + j) * m + k];

        let step = self.kernel.is_step();
        let one = T::one();
        let mut range = CheckBuilder::new("kernel-range");
        let mut pcm1 = CheckBuilder::new("pcm1-positivity");
        let mut pcm2 = CheckBuilder::new("pcm2-identity");
        let mut pcm3 = CheckBuilder::new("pcm3-symmetry");
        for (i, &p) in points.iter().enumerate() {
            for (j, &q) in points.iter().enumerate() {
                for (k, t) in t_samples.iter().enumerate() {
                    let v = at(i, j, k);
                    let w = || Witness::scalars(&[p, q]).push_vector(t);
                    let in_range = v >= T::zero() && v <= one;
                    range.record(v.min(one - v).as_f64(), in_range, w);

                    if v > T::zero() {
                        pcm1.record(v.as_f64(), true, w);
                    } else if step && v.is_zero() {
                        pcm1.degenerate(w);
                    } else {
                        pcm1.record(v.as_f64(), false, w);
                    }

                    if p == q {
                        pcm2.record((v - one).as_f64(), v == one, w);
                    } else if v >= one - tol {
                        pcm2.degenerate(w);
                    } else {
                        pcm2.record((one - v).as_f64(), true, w);
                    }

                    let diff = (v - at(j, i, k)).abs();
                    pcm3.record(-diff.as_f64(), diff.is_zero(), w);
                }
            }
        }

        let mut mono = CheckBuilder::new("distribution-monotonicity");
        for (k1, t1) in t_samples.iter().enumerate() {
            for (k2, t2) in t_samples.iter().enumerate() {
                if k1 == k2 || !self.cone.order(t1, t2)?.is_leq() {
                    continue;
                }
                for (i, &p) in points.iter().enumerate() {
                    for (j, &q) in points.iter().enumerate() {
                        let slack = at(i, j, k2) - at(i, j, k1);
                        mono.record(slack.as_f64(), slack >= -tol, || {
                            Witness::scalars(&[p, q]).push_vector(t1).push_vector(t2)
                        });
                    }
                }
            }
        }

        let mut pcm4 = CheckBuilder::new("pcm4-certainty-propagation");
        let mut pcm5 = CheckBuilder::new("pcm5-menger-triangle");
        for (kt, t) in t_samples.iter().enumerate() {
            for (ks, s) in t_samples.iter().enumerate() {
                let ts = t.add(s)?;
                // F(p_i, p_l, t + s) for every ordered pair
                let sum: Vec<T> = points
                    .iter()
                    .flat_map(|&p| points.iter().map(move |&r| (p, r)))
                    .map(|(p, r)| self.eval_unchecked(p, r, &ts))
                    .collect();
                for (i, &p) in points.iter().enumerate() {
                    for (j, &q) in points.iter().enumerate() {
                        let fpq = at(i, j, kt);
                        for (l, &r) in points.iter().enumerate() {
                            let fqr = at(j, l, ks);
                            let fpr = sum[i * n + l];
                            let w = || Witness::scalars(&[p, q, r]).push_vector(t).push_vector(s);
                            if fpq == one && fqr == one {
                                pcm4.record((fpr - one).as_f64(), fpr >= one - tol, w);
                            }
                            let slack = fpr - self.tnorm.combine(fpq, fqr);
                            pcm5.record(slack.as_f64(), slack >= -tol, w);
                        }
                    }
                }
            }
        }
        if step {
            pcm1.note("step kernel vanishes for t ≤ d(p, q)");
        }

        Ok(AxiomReport {
            checks: vec![
                range.finish(),
                pcm1.finish(),
                pcm2.finish(),
                pcm3.finish(),
                pcm4.finish(),
                pcm5.finish(),
                mono.finish(),
            ],
        })
    }
}

/// Sweep of nonnegativity, identity of indiscernibles, symmetry and the
/// triangle inequality for a real-valued metric on `points`.
/// The triangle witness is reported as `(x, z, y)` for `d(x, y) ≤ d(x, z) + d(z, y)`.
pub fn check_cone_metric_axioms<T: Real>(metric: ConeMetric, points: &[T]) -> Result<AxiomReport> {
    if points.is_empty() {
        return Err(Error::Input("metric sweep needs at least one point".into()));
    }
    let tol = T::lit(1e-12);
    let mut cm1 = CheckBuilder::new("cm1-nonnegativity");
    let mut cm2 = CheckBuilder::new("cm2-identity");
    let mut cm3 = CheckBuilder::new("cm3-symmetry");
    let mut cm4 = CheckBuilder::new("cm4-triangle");
    for &x in points {
        for &y in points {
            let d = metric.distance(x, y);
            let w = || Witness::scalars(&[x, y]);
            cm1.record(d.as_f64(), d >= T::zero(), w);
            let ok = (x == y) == d.is_zero();
            cm2.record(if x == y { -d.as_f64() } else { d.as_f64() }, ok, w);
            let diff = (d - metric.distance(y, x)).abs();
            cm3.record(-diff.as_f64(), diff.is_zero(), w);
            for &z in points {
                let slack = metric.distance(x, z) + metric.distance(z, y) - d;
                cm4.record(slack.as_f64(), slack >= -tol, || Witness::scalars(&[x, z, y]));
            }
        }
    }
    Ok(AxiomReport {
        checks: vec![cm1.finish(), cm2.finish(), cm3.finish(), cm4.finish()],
    })
}
