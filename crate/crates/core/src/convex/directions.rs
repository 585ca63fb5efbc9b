//! Direction sampling plans on the unit sphere.

use crate::error::{Error, Result};

pub const DEFAULT_DIRECTIONS_2D: usize = 720;
pub const DEFAULT_DIRECTIONS_3D: usize = 2048;

/// Unit directions: `±1` in 1D, `count` angles uniformly spaced over a half
/// circle in 2D, a Fibonacci lattice on the upper hemisphere in 3D. The
/// opposite directions are implied, since the profiles are symmetric.
pub fn direction_plan(dim: usize, count: Option<usize>) -> Result<Vec<Vec<f64>>> {
    match dim {
        1 => Ok(vec![vec![1.0]]),
        2 => {
            let n = count.unwrap_or(DEFAULT_DIRECTIONS_2D);
            if n == 0 {
                return Err(Error::InvalidParameter("direction count must be positive".into()));
            }
            Ok((0..n)
                .map(|k| {
                    let a = std::f64::consts::PI * k as f64 / n as f64;
                    vec![a.cos(), a.sin()]
                })
                .collect())
        }
        3 => {
            let n = count.unwrap_or(DEFAULT_DIRECTIONS_3D);
            if n == 0 {
                return Err(Error::InvalidParameter("direction count must be positive".into()));
            }
            let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
            Ok((0..n)
                .map(|k| {
                    let z = 1.0 - (k as f64 + 0.5) / n as f64;
                    let rho = (1.0 - z * z).sqrt();
                    let a = golden * k as f64;
                    vec![rho * a.cos(), rho * a.sin(), z]
                })
                .collect())
        }
        d => Err(Error::UnsupportedDimension(d)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plans_are_unit_vectors() {
        for d in 1..=3 {
            for u in direction_plan(d, Some(37)).unwrap() {
                let n: f64 = u.iter().map(|x| x * x).sum();
                assert!((n - 1.0).abs() < 1e-12);
            }
        }
        assert_eq!(direction_plan(2, None).unwrap().len(), 720);
    }
}
