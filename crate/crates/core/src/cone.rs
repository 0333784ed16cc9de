//! Finite-dimensional cones and the orders they induce.
//!
//! Only the nonnegative orthant is built in. For a cone `P` the crate uses
//! `x ⪯ y ⇔ y − x ∈ P`, `x ≺ y ⇔ x ⪯ y ∧ x ≠ y` and `x ≪ y ⇔ y − x ∈ Int P`.

use std::ops::{Deref, Index};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::{AxiomReport, CheckBuilder, Witness};
use crate::scalar::Real;

/// A finite vector with at least one component and no NaN/infinite entries.
#[derive(Debug, Clone, PartialEq, PartialOrd)]
pub struct Vector<T>(Vec<T>);

impl<T: Real> Vector<T> {
    pub fn new(components: Vec<T>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::Input("vector must have at least one component".into()));
        }
        if let Some(bad) = components.iter().find(|c| !c.is_finite()) {
            return Err(Error::Domain(format!("non-finite vector component {bad}")));
        }
        Ok(Vector(components))
    }

    /// One-dimensional vector. `v` must be finite.
    pub fn scalar(v: T) -> Self {
        debug_assert!(v.is_finite());
        Vector(vec![v])
    }

    /// The vector `(v, v, …, v)` of the given dimension.
    pub fn splat(dim: usize, v: T) -> Self {
        debug_assert!(dim > 0 && v.is_finite());
        Vector(vec![v; dim])
    }

    pub fn zero(dim: usize) -> Self {
        Self::splat(dim, T::zero())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn components(&self) -> &[T] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<T> {
        self.0
    }

    fn same_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        Vector::new(self.0.iter().zip(&other.0).map(|(a, b)| *a + *b).collect())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_dim(other)?;
        Vector::new(self.0.iter().zip(&other.0).map(|(a, b)| *a - *b).collect())
    }

    pub fn scale(&self, k: T) -> Result<Self> {
        Vector::new(self.0.iter().map(|c| *c * k).collect())
    }

    pub fn neg(&self) -> Self {
        Vector(self.0.iter().map(|c| -*c).collect())
    }

    pub fn min_component(&self) -> T {
        self.0.iter().copied().fold(T::infinity(), T::min)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }

    pub fn norm(&self, norm: Norm) -> T {
        match norm {
            Norm::Sup => self.0.iter().fold(T::zero(), |m, c| m.max(c.abs())),
            Norm::Euclidean => self.0.iter().fold(T::zero(), |acc, c| acc.hypot(*c)),
        }
    }
}

impl<T> Deref for Vector<T> {
    type Target = [T];

    fn deref(&self) -> &[T] {
        &self.0
    }
}

impl<T> Index<usize> for Vector<T> {
    type Output = T;

    fn index(&self, i: usize) -> &T {
        &self.0[i]
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Norm {
    #[default]
    Sup,
    Euclidean,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConeKind {
    #[default]
    NonnegativeOrthant,
}

/// Strongest relation of `x` relative to `y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Order {
    NotComparable,
    /// `x ⪯ y` with `x = y`.
    Leq,
    /// `x ≺ y`: comparable, distinct, but `y − x` touches the boundary.
    Lt,
    /// `x ≪ y`.
    Ll,
}

impl Order {
    pub fn is_leq(self) -> bool {
        self != Order::NotComparable
    }

    pub fn is_lt(self) -> bool {
        matches!(self, Order::Lt | Order::Ll)
    }

    pub fn is_ll(self) -> bool {
        self == Order::Ll
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConeSpec {
    pub dim: usize,
    pub kind: ConeKind,
    pub norm: Norm,
}

impl ConeSpec {
    /// Nonnegative orthant of `ℝ^dim` with the sup norm.
    pub fn orthant(dim: usize) -> Result<Self> {
        Self::with_norm(dim, Norm::Sup)
    }

    pub fn with_norm(dim: usize, norm: Norm) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Input("cone dimension must be positive".into()));
        }
        Ok(ConeSpec {
            dim,
            kind: ConeKind::NonnegativeOrthant,
            norm,
        })
    }

    pub(crate) fn check_dim<T: Real>(&self, v: &Vector<T>) -> Result<()> {
        if v.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: v.dim(),
            });
        }
        Ok(())
    }

    pub fn contains<T: Real>(&self, v: &Vector<T>) -> Result<bool> {
        self.check_dim(v)?;
        Ok(v.iter().all(|c| *c >= T::zero()))
    }

    /// Strict positivity of every component; no tolerance is applied.
    pub fn in_interior<T: Real>(&self, v: &Vector<T>) -> Result<bool> {
        self.check_dim(v)?;
        Ok(v.iter().all(|c| *c > T::zero()))
    }

    pub fn order<T: Real>(&self, x: &Vector<T>, y: &Vector<T>) -> Result<Order> {
        self.check_dim(x)?;
        self.check_dim(y)?;
        let diff = y.sub(x)?;
        if self.in_interior(&diff)? {
            Ok(Order::Ll)
        } else if self.contains(&diff)? {
            Ok(if diff.is_zero() { Order::Leq } else { Order::Lt })
        } else {
            Ok(Order::NotComparable)
        }
    }

    pub fn norm_of<T: Real>(&self, v: &Vector<T>) -> T {
        v.norm(self.norm)
    }

    /// Sampled check of closure under nonnegative combinations, pointedness,
    /// and the two interior-absorption properties `P + Int P ⊂ Int P` and
    /// `α Int P ⊆ Int P`. Every sample is treated as a claimed member of the cone.
    pub fn check_cone_axioms<T: Real>(&self, samples: &[Vector<T>], scalars: &[T]) -> Result<AxiomReport> {
        if samples.is_empty() {
            return Err(Error::Input("cone axiom check needs at least one sample".into()));
        }
        for s in samples {
            self.check_dim(s)?;
        }
        if let Some(a) = scalars.iter().find(|a| !(**a >= T::zero())) {
            return Err(Error::Precondition(format!("scalar {a} is negative")));
        }

        let mut closure = CheckBuilder::new("cone-closure");
        for x in samples {
            for y in samples {
                for &a in scalars {
                    for &b in scalars {
                        let comb = x.scale(a)?.add(&y.scale(b)?)?;
                        let margin = comb.min_component();
                        closure.record(margin.as_f64(), self.contains(&comb)?, || {
                            Witness::default()
                                .push_vector(x)
                                .push_vector(y)
                                .push_scalar(a)
                                .push_scalar(b)
                        });
                    }
                }
            }
        }

        let mut pointed = CheckBuilder::new("cone-pointedness");
        for x in samples {
            let minus = x.neg();
            let claimed = samples.iter().any(|s| *s == minus) || (self.contains(x)? && self.contains(&minus)?);
            let ok = !claimed || x.is_zero();
            let margin = if ok { 0.0 } else { -self.norm_of(x).as_f64() };
            pointed.record(margin, ok, || Witness::default().push_vector(x));
        }

        let mut absorb = CheckBuilder::new("interior-absorption");
        let mut scaling = CheckBuilder::new("interior-scaling");
        for q in samples.iter().filter(|q| self.in_interior(*q).unwrap_or(false)) {
            for p in samples.iter().filter(|p| self.contains(*p).unwrap_or(false)) {
                let sum = p.add(q)?;
                absorb.record(sum.min_component().as_f64(), self.in_interior(&sum)?, || {
                    Witness::default().push_vector(p).push_vector(q)
                });
            }
            for &alpha in scalars.iter().filter(|a| **a > T::zero()) {
                let scaled = q.scale(alpha)?;
                scaling.record(scaled.min_component().as_f64(), self.in_interior(&scaled)?, || {
                    Witness::default().push_scalar(alpha).push_vector(q)
                });
            }
        }

        Ok(AxiomReport {
            checks: vec![closure.finish(), pointed.finish(), absorb.finish(), scaling.finish()],
        })
    }

    /// Largest `‖x‖/‖y‖` over pairs with `θ ⪯ x ⪯ y`, a lower bound on the
    /// normal constant.
    pub fn normal_constant_estimate<T: Real>(&self, pairs: &[(Vector<T>, Vector<T>)]) -> Result<T> {
        if pairs.is_empty() {
            return Err(Error::Input("normal constant estimate needs at least one pair".into()));
        }
        let mut best = T::zero();
        for (x, y) in pairs {
            if !self.contains(x)? || !self.order(x, y)?.is_leq() {
                return Err(Error::Precondition(format!(
                    "pair ({:?}, {:?}) violates θ ⪯ x ⪯ y",
                    x.components(),
                    y.components()
                )));
            }
            if y.is_zero() {
                return Err(Error::Precondition("y must differ from θ".into()));
            }
            best = best.max(self.norm_of(x) / self.norm_of(y));
        }
        Ok(best)
    }

    /// An interior point below both `c1` and `c2`: their componentwise minimum, halved.
    pub fn common_lower_interior<T: Real>(&self, c1: &Vector<T>, c2: &Vector<T>) -> Result<Vector<T>> {
        if !self.in_interior(c1)? || !self.in_interior(c2)? {
            return Err(Error::Precondition("both inputs must lie in the cone interior".into()));
        }
        let half = T::lit(0.5);
        Vector::new(c1.iter().zip(c2.iter()).map(|(a, b)| a.min(*b) * half).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Status;

    fn v(c: &[f64]) -> Vector<f64> {
        Vector::new(c.to_vec()).unwrap()
    }

    #[test]
    fn contains_examples() {
        let c2 = ConeSpec::orthant(2).unwrap();
        assert!(c2.contains(&v(&[1.0, 0.0])).unwrap());
        assert!(!c2.contains(&v(&[-0.1, 2.0])).unwrap());
        assert!(ConeSpec::orthant(1).unwrap().contains(&v(&[0.0])).unwrap());
    }

    #[test]
    fn interior_examples() {
        let c2 = ConeSpec::orthant(2).unwrap();
        assert!(c2.in_interior(&v(&[0.5, 0.5])).unwrap());
        assert!(!c2.in_interior(&v(&[0.0, 1.0])).unwrap());
        assert!(ConeSpec::orthant(1).unwrap().in_interior(&v(&[1e-12])).unwrap());
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let c2 = ConeSpec::orthant(2).unwrap();
        assert_eq!(
            c2.contains(&v(&[1.0])),
            Err(Error::DimensionMismatch { expected: 2, found: 1 })
        );
        assert!(c2.order(&v(&[1.0, 2.0]), &v(&[1.0])).is_err());
    }

    #[test]
    fn order_examples() {
        let c = ConeSpec::orthant(2).unwrap();
        assert_eq!(c.order(&v(&[1.0, 2.0]), &v(&[2.0, 3.0])).unwrap(), Order::Ll);
        let o = c.order(&v(&[1.0, 2.0]), &v(&[1.0, 3.0])).unwrap();
        assert_eq!(o, Order::Lt);
        assert!(o.is_leq() && o.is_lt() && !o.is_ll());
        assert_eq!(c.order(&v(&[1.0, 0.0]), &v(&[0.0, 1.0])).unwrap(), Order::NotComparable);
        assert_eq!(c.order(&v(&[1.0, 1.0]), &v(&[1.0, 1.0])).unwrap(), Order::Leq);
    }

    #[test]
    fn cone_axioms_pass_on_orthant_samples() {
        let c = ConeSpec::orthant(2).unwrap();
        let samples = vec![v(&[0.0, 0.0]), v(&[1.0, 0.0]), v(&[0.5, 2.0]), v(&[3.0, 1.0])];
        let r = c.check_cone_axioms(&samples, &[0.0, 1.0, 2.0]).unwrap();
        assert!(r.all_passed(), "{r:?}");
        assert_eq!(r.checks.len(), 4);
    }

    #[test]
    fn pointedness_fails_for_claimed_opposites() {
        let c = ConeSpec::orthant(2).unwrap();
        let samples = vec![v(&[1.0, 1.0]), v(&[-1.0, -1.0])];
        let r = c.check_cone_axioms(&samples, &[0.0, 1.0]).unwrap();
        let p3 = r.get("cone-pointedness").unwrap();
        assert_eq!(p3.status, Status::Fail);
        assert_eq!(p3.witness.as_ref().unwrap().flatten(), vec![1.0, 1.0]);
    }

    #[test]
    fn one_dimensional_exhaustive_pass() {
        let c = ConeSpec::orthant(1).unwrap();
        let r = c.check_cone_axioms(&[v(&[0.5]), v(&[2.0])], &[0.5, 3.0]).unwrap();
        assert!(r.all_passed());
        // 2 x-samples × 2 y-samples × 2 × 2 scalar pairs
        assert_eq!(r.get("cone-closure").unwrap().checked, 16);
        assert_eq!(r.get("cone-closure").unwrap().margin, 0.5 * 0.5 + 0.5 * 0.5);
    }

    #[test]
    fn cone_axiom_input_errors() {
        let c = ConeSpec::orthant(1).unwrap();
        assert!(matches!(c.check_cone_axioms::<f64>(&[], &[1.0]), Err(Error::Input(_))));
        assert!(matches!(
            c.check_cone_axioms(&[v(&[1.0])], &[-1.0]),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn normal_constant_examples() {
        let sup = ConeSpec::orthant(2).unwrap();
        let k = sup
            .normal_constant_estimate(&[(v(&[1.0, 1.0]), v(&[2.0, 2.0])), (v(&[0.0, 1.0]), v(&[1.0, 1.0]))])
            .unwrap();
        assert_eq!(k, 1.0);

        let euc = ConeSpec::with_norm(2, Norm::Euclidean).unwrap();
        let k = euc.normal_constant_estimate(&[(v(&[1.0, 0.0]), v(&[1.0, 1.0]))]).unwrap();
        assert!((k - 1.0 / 2.0_f64.sqrt()).abs() < 1e-15);

        let one = ConeSpec::orthant(1).unwrap();
        assert_eq!(one.normal_constant_estimate(&[(v(&[0.3]), v(&[0.3]))]).unwrap(), 1.0);
    }

    #[test]
    fn normal_constant_rejects_unordered_pairs() {
        let c = ConeSpec::orthant(2).unwrap();
        assert!(matches!(
            c.normal_constant_estimate(&[(v(&[2.0, 0.0]), v(&[1.0, 1.0]))]),
            Err(Error::Precondition(_))
        ));
        assert!(matches!(
            c.normal_constant_estimate(&[(v(&[-1.0, 0.0]), v(&[1.0, 1.0]))]),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn common_lower_interior_examples() {
        let c = ConeSpec::orthant(2).unwrap();
        assert_eq!(c.common_lower_interior(&v(&[2.0, 4.0]), &v(&[3.0, 1.0])).unwrap(), v(&[1.0, 0.5]));
        assert_eq!(c.common_lower_interior(&v(&[1.0, 1.0]), &v(&[1.0, 1.0])).unwrap(), v(&[0.5, 0.5]));
        let c1 = ConeSpec::orthant(1).unwrap();
        assert_eq!(c1.common_lower_interior(&v(&[4.0]), &v(&[6.0])).unwrap(), v(&[2.0]));
        assert!(matches!(
            c.common_lower_interior(&v(&[0.0, 1.0]), &v(&[1.0, 1.0])),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn vector_rejects_non_finite() {
        assert!(Vector::new(vec![f64::NAN]).is_err());
        assert!(Vector::new(vec![1.0, f64::INFINITY]).is_err());
        assert!(Vector::<f64>::new(vec![]).is_err());
    }

    #[test]
    fn works_in_single_precision() {
        let c = ConeSpec::orthant(2).unwrap();
        let x = Vector::new(vec![1.0_f32, 2.0]).unwrap();
        let y = Vector::new(vec![2.0_f32, 3.0]).unwrap();
        assert_eq!(c.order(&x, &y).unwrap(), Order::Ll);
    }
}
