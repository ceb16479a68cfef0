//! Least-squares power-law fits on log-log axes.

use num_traits::Float;
use serde::Serialize;

use crate::error::{Error, Result};

/// `ln size ≈ slope·ln N + intercept`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FitResult<T> {
    pub slope: T,
    pub intercept: T,
    pub r_squared: T,
    pub points: Vec<(u64, u64)>,
}

pub fn fit_exponent<T: Float>(points: &[(u64, u64)]) -> Result<FitResult<T>> {
    if points.len() < 3 {
        return Err(Error::Fit(format!("need at least 3 points, got {}", points.len())));
    }
    if let Some(&(n, s)) = points.iter().find(|&&(n, s)| n < 2 || s < 1) {
        return Err(Error::Fit(format!("point ({n}, {s}) needs N ≥ 2 and size ≥ 1")));
    }
    if points.iter().all(|&(n, _)| n == points[0].0) {
        return Err(Error::Fit("all N are equal".into()));
    }
    let conv = |v: u64| T::from(v).unwrap().ln();
    let xs: Vec<T> = points.iter().map(|&(n, _)| conv(n)).collect();
    let ys: Vec<T> = points.iter().map(|&(_, s)| conv(s)).collect();
    let count = T::from(points.len()).unwrap();
    let mean = |v: &[T]| v.iter().fold(T::zero(), |a, &b| a + b) / count;
    let (mx, my) = (mean(&xs), mean(&ys));
    let mut sxx = T::zero();
    let mut sxy = T::zero();
    let mut syy = T::zero();
    for (&x, &y) in xs.iter().zip(&ys) {
        let (dx, dy) = (x - mx, y - my);
        sxx = sxx + dx * dx;
        sxy = sxy + dx * dy;
        syy = syy + dy * dy;
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == T::zero() {
        // constant sizes are fit exactly by a flat line
        T::one()
    } else {
        let ss_res = xs
            .iter()
            .zip(&ys)
            .map(|(&x, &y)| {
                let r = y - (slope * x + intercept);
                r * r
            })
            .fold(T::zero(), |a, b| a + b);
        (T::one() - ss_res / syy).max(T::zero()).min(T::one())
    };
    Ok(FitResult {
        slope,
        intercept,
        r_squared,
        points: points.to_vec(),
    })
}
