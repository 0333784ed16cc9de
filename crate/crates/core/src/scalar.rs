use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating-point scalar the whole crate is generic over.
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal; every literal used by the crate is
    /// representable (possibly rounded) in both `f32` and `f64`.
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("literal representable in scalar type")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// `1 - max(1e-9, machine epsilon)`: the factor that places a grid point
    /// strictly below its upper end even in single precision.
    fn left_open_factor() -> Self {
        Self::one() - Self::lit(1e-9).max(Self::epsilon())
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// `n` evenly spaced points covering `[lo, hi]` inclusive.
pub fn linspace<T: Real>(lo: T, hi: T, n: usize) -> Vec<T> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let steps = T::lit((n - 1) as f64);
            (0..n)
                .map(|i| {
                    if i == n - 1 {
                        hi
                    } else {
                        lo + (hi - lo) * T::lit(i as f64) / steps
                    }
                })
                .collect()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linspace_hits_both_ends() {
        let g = linspace(0.0_f64, 1.0, 11);
        assert_eq!(g.len(), 11);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[10], 1.0);
        assert!((g[3] - 0.3).abs() < 1e-15);
    }

    #[test]
    fn left_open_factor_is_below_one() {
        assert!(f32::left_open_factor() < 1.0);
        assert!(f64::left_open_factor() < 1.0);
        assert_eq!(f64::left_open_factor(), 1.0 - 1e-9);
    }
}
