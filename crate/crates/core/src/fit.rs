//! Least-squares fits used to extract rates from sampled curves.

use crate::error::{Result, ZenoError};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

pub fn linear_fit(xs: &[f64], ys: &[f64]) -> Result<LinearFit> {
    if xs.len() != ys.len() || xs.len() < 2 {
        return Err(ZenoError::InvalidArgument(
            "linear fit needs at least two paired samples".into(),
        ));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
        syy += (y - my) * (y - my);
    }
    if sxx == 0.0 {
        return Err(ZenoError::InvalidArgument("degenerate abscissae".into()));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r_squared = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok(LinearFit {
        slope,
        intercept,
        r_squared,
    })
}

/// Rate k of y(t) ≈ A e^{−k t}, from a straight-line fit of ln|y| against t.
pub fn exponential_rate(ts: &[f64], ys: &[f64]) -> Result<f64> {
    let sign = ys.first().map(|y| y.signum()).unwrap_or(0.0);
    if sign == 0.0 || ys.iter().any(|y| y.signum() != sign || *y == 0.0) {
        return Err(ZenoError::InvalidArgument(
            "exponential fit needs samples of one strict sign".into(),
        ));
    }
    let logs: Vec<f64> = ys.iter().map(|y| y.abs().ln()).collect();
    Ok(-linear_fit(ts, &logs)?.slope)
}
