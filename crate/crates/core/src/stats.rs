//! Small numerical helpers shared across modules.

/// Neumaier-compensated sum.
pub fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

pub fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    compensated_sum(values.iter().copied()) / values.len() as f64
}

/// Unbiased sample variance.
pub fn variance(values: &[f64]) -> f64 {
    let n = values.len();
    if n < 2 {
        return f64::NAN;
    }
    let m = mean(values);
    compensated_sum(values.iter().map(|v| (v - m) * (v - m))) / (n - 1) as f64
}

pub fn correlation(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let (ma, mb) = (mean(a), mean(b));
    let cov = compensated_sum(a.iter().zip(b).map(|(x, y)| (x - ma) * (y - mb)));
    let va = compensated_sum(a.iter().map(|x| (x - ma) * (x - ma)));
    let vb = compensated_sum(b.iter().map(|y| (y - mb) * (y - mb)));
    cov / (va * vb).sqrt()
}

/// Wasserstein-1 distance between two empirical distributions on the line.
pub fn wasserstein1(a: &[f64], b: &[f64]) -> f64 {
    if a.is_empty() || b.is_empty() {
        return f64::NAN;
    }
    let mut xs: Vec<(f64, f64)> = Vec::with_capacity(a.len() + b.len());
    let wa = 1.0 / a.len() as f64;
    let wb = 1.0 / b.len() as f64;
    xs.extend(a.iter().map(|&v| (v, wa)));
    xs.extend(b.iter().map(|&v| (v, -wb)));
    xs.sort_by(|p, q| p.0.total_cmp(&q.0));
    // W1 = ∫ |F_a − F_b| dx over the merged support.
    let mut cdf_gap = 0.0;
    let mut total = 0.0;
    for pair in xs.windows(2) {
        cdf_gap += pair[0].1;
        total += cdf_gap.abs() * (pair[1].0 - pair[0].0);
    }
    total
}

/// Ordinary least squares `y = intercept + slope·x`; returns
/// `(slope, slope_stderr, intercept)`.
pub fn linear_regression(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = mean(x);
    let my = mean(y);
    let sxx: f64 = x.iter().map(|v| (v - mx) * (v - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| {
            let r = b - intercept - slope * a;
            r * r
        })
        .sum();
    let stderr = if n > 2.0 {
        (ssr / (n - 2.0) / sxx).sqrt()
    } else {
        f64::NAN
    };
    (slope, stderr, intercept)
}
