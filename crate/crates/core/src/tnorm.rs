//! Triangular norms on the unit interval.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::{AxiomReport, CheckBuilder, Witness};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TNorm {
    Product,
    #[default]
    Minimum,
    /// `min(1, a + b)`. Not a t-norm (the unit law fails); kept as a
    /// negative fixture for the axiom sweeps.
    BoundedSum,
}

fn check_unit<T: Real>(name: &str, v: T) -> Result<()> {
    if v >= T::zero() && v <= T::one() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} = {v} is outside [0, 1]")))
    }
}

fn check_open_unit<T: Real>(name: &str, v: T) -> Result<()> {
    if v > T::zero() && v < T::one() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} = {v} is outside (0, 1)")))
    }
}

impl TNorm {
    pub fn name(self) -> &'static str {
        match self {
            TNorm::Product => "product",
            TNorm::Minimum => "minimum",
            TNorm::BoundedSum => "bounded-sum",
        }
    }

    pub fn apply<T: Real>(self, a: T, b: T) -> Result<T> {
        check_unit("a", a)?;
        check_unit("b", b)?;
        Ok(self.combine(a, b))
    }

    /// `apply` without the domain check, for values already known to lie in `[0, 1]`.
    pub fn combine<T: Real>(self, a: T, b: T) -> T {
        match self {
            TNorm::Product => a * b,
            TNorm::Minimum => a.min(b),
            TNorm::BoundedSum => (a + b).min(T::one()),
        }
    }

    pub fn check_axioms<T: Real>(self, grid: &[T]) -> Result<AxiomReport> {
        let assoc_tol = match self {
            TNorm::Minimum => T::zero(),
            _ => T::lit(1e-15).max(T::epsilon() * T::lit(4.0)),
        };
        check_binary_op_axioms(|a, b| self.combine(a, b), grid, assoc_tol)
    }

    /// Some `r3 ∈ (0, 1)` with `r1 ∗ r3 ≥ r2`, for `1 > r1 > r2 > 0`.
    pub fn find_companion<T: Real>(self, r1: T, r2: T) -> Result<T> {
        check_open_unit("r1", r1)?;
        check_open_unit("r2", r2)?;
        if r1 <= r2 {
            return Err(Error::Precondition(format!("need r1 > r2, got r1 = {r1}, r2 = {r2}")));
        }
        match self {
            TNorm::Minimum => Ok(r2),
            TNorm::Product => {
                let cap = T::one() - T::epsilon();
                let r3 = nudge_up((r2 / r1).min(cap), cap, |r3| r1 * r3 >= r2);
                if r1 * r3 >= r2 {
                    Ok(r3)
                } else {
                    Err(Error::WitnessNotFound(format!("no representable companion for r1 = {r1}, r2 = {r2}")))
                }
            }
            TNorm::BoundedSum => Err(Error::Unsupported("companion search needs a t-norm".into())),
        }
    }

    /// Some `r5 ∈ (0, 1)` with `r5 ∗ r5 ≥ r4`, for `r4 ∈ (0, 1)`.
    pub fn find_idempotent_bound<T: Real>(self, r4: T) -> Result<T> {
        check_open_unit("r4", r4)?;
        match self {
            TNorm::Minimum => Ok(r4),
            TNorm::Product => {
                let cap = T::one() - T::epsilon();
                let r5 = nudge_up(r4.sqrt().min(cap), cap, |r5| r5 * r5 >= r4);
                if r5 * r5 >= r4 {
                    Ok(r5)
                } else {
                    Err(Error::WitnessNotFound(format!("no representable bound for r4 = {r4}")))
                }
            }
            TNorm::BoundedSum => Err(Error::Unsupported("idempotent bound needs a t-norm".into())),
        }
    }
}

/// Raises `x` by relative machine-epsilon steps until `ok(x)` or `cap` is reached.
fn nudge_up<T: Real>(mut x: T, cap: T, ok: impl Fn(T) -> bool) -> T {
    for _ in 0..16 {
        if ok(x) || x >= cap {
            break;
        }
        x = (x + x * T::epsilon()).min(cap);
    }
    x
}

/// Grid sweep of commutativity, associativity, monotonicity and the unit law
/// for an arbitrary binary operation on `[0, 1]`.
pub fn check_binary_op_axioms<T: Real>(
    op: impl Fn(T, T) -> T,
    grid: &[T],
    assoc_tol: T,
) -> Result<AxiomReport> {
    if grid.is_empty() {
        return Err(Error::Input("t-norm axiom grid is empty".into()));
    }
    for &g in grid {
        check_unit("grid value", g)?;
    }

    let mut comm = CheckBuilder::new("tnorm-commutativity");
    let mut assoc = CheckBuilder::new("tnorm-associativity");
    let mut mono = CheckBuilder::new("tnorm-monotonicity");
    let mut unit = CheckBuilder::new("tnorm-unit");

    for &a in grid {
        for &b in grid {
            let diff = (op(a, b) - op(b, a)).abs();
            comm.record(-diff.as_f64(), diff.is_zero(), || Witness::scalars(&[a, b]));
            for &c in grid {
                let diff = (op(a, op(b, c)) - op(op(a, b), c)).abs();
                assoc.record((assoc_tol - diff).as_f64(), diff <= assoc_tol, || Witness::scalars(&[a, b, c]));
            }
        }
        let u = op(a, T::one());
        let diff = (u - a).abs();
        unit.record(-diff.as_f64(), diff.is_zero(), || Witness::scalars(&[a, u]));
    }
    for &a in grid {
        for &c in grid.iter().filter(|c| **c >= a) {
            for &b in grid {
                for &d in grid.iter().filter(|d| **d >= b) {
                    let slack = op(c, d) - op(a, b);
                    mono.record(slack.as_f64(), slack >= T::zero(), || Witness::scalars(&[a, b, c, d]));
                }
            }
        }
    }

    Ok(AxiomReport {
        checks: vec![comm.finish(), assoc.finish(), mono.finish(), unit.finish()],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Status;
    use crate::scalar::linspace;

    #[test]
    fn apply_examples() {
        assert!((TNorm::Product.apply(0.3, 0.7).unwrap() - 0.21_f64).abs() < 1e-16);
        assert_eq!(TNorm::Minimum.apply(0.3, 0.7).unwrap(), 0.3_f64);
        assert_eq!(TNorm::Product.apply(0.5, 1.0).unwrap(), 0.5_f64);
    }

    #[test]
    fn apply_rejects_out_of_range() {
        assert!(matches!(TNorm::Product.apply(1.2_f64, 0.5), Err(Error::Domain(_))));
        assert!(matches!(TNorm::Minimum.apply(0.5_f64, -0.1), Err(Error::Domain(_))));
    }

    #[test]
    fn minimum_passes_on_quarter_grid() {
        let r = TNorm::Minimum.check_axioms(&[0.0, 0.25, 0.5, 0.75, 1.0_f64]).unwrap();
        assert!(r.checks.iter().all(|c| c.status == Status::Pass), "{r:?}");
    }

    #[test]
    fn product_passes_on_eleven_grid() {
        let grid = linspace(0.0_f64, 1.0, 11);
        let r = TNorm::Product.check_axioms(&grid).unwrap();
        assert!(r.checks.iter().all(|c| c.status == Status::Pass), "{r:?}");
        assert_eq!(r.get("tnorm-associativity").unwrap().checked, 11 * 11 * 11);
    }

    #[test]
    fn bounded_sum_fails_unit_law_only() {
        let r = TNorm::BoundedSum.check_axioms(&[0.5, 0.8_f64]).unwrap();
        assert_eq!(r.get("tnorm-monotonicity").unwrap().status, Status::Pass);
        let unit = r.get("tnorm-unit").unwrap();
        assert_eq!(unit.status, Status::Fail);
        assert_eq!(unit.witness.as_ref().unwrap().flatten(), vec![0.5, 1.0]);
        assert_eq!(unit.margin, -0.5);
    }

    #[test]
    fn empty_grid_is_input_error() {
        assert!(matches!(TNorm::Minimum.check_axioms::<f64>(&[]), Err(Error::Input(_))));
    }

    #[test]
    fn companion_examples() {
        assert_eq!(TNorm::Minimum.find_companion(0.8, 0.5_f64).unwrap(), 0.5);
        let r3 = TNorm::Product.find_companion(0.8, 0.4_f64).unwrap();
        assert_eq!(r3, 0.5);
        assert!(0.8 * r3 >= 0.4);
        let r2 = 0.9 - 1e-9;
        assert_eq!(TNorm::Minimum.find_companion(0.9, r2).unwrap(), r2);
        assert!(matches!(
            TNorm::Product.find_companion(0.4, 0.8_f64),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn idempotent_bound_examples() {
        let r5 = TNorm::Product.find_idempotent_bound(0.49_f64).unwrap();
        assert!((r5 - 0.7).abs() < 1e-15);
        assert!(r5 * r5 >= 0.49);
        assert_eq!(TNorm::Minimum.find_idempotent_bound(0.6_f64).unwrap(), 0.6);
        let r5 = TNorm::Product.find_idempotent_bound(0.99_f64).unwrap();
        assert!((r5 - 0.99498743710662).abs() < 1e-12);
        assert!(matches!(TNorm::Product.find_idempotent_bound(1.0_f64), Err(Error::Domain(_))));
    }

    #[test]
    fn bounded_sum_has_no_solvers() {
        assert!(matches!(
            TNorm::BoundedSum.find_companion(0.8, 0.4_f64),
            Err(Error::Unsupported(_))
        ));
    }
}
