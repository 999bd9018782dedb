//! Small statistical helpers shared by tests, the validation suite and
//! the Monte Carlo estimators.

/// Sample mean and its standard error.
pub fn empirical_mean_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// One-sample Kolmogorov-Smirnov statistic against a CDF; `sorted` must
/// be ascending.
pub fn ks_statistic<F: Fn(f64) -> f64>(sorted: &[f64], cdf: F) -> f64 {
    let n = sorted.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        d = d.max((f - i as f64 / n).abs());
        d = d.max(((i + 1) as f64 / n - f).abs());
    }
    d
}

/// Asymptotic one-sample KS critical value at the 1% level.
pub fn ks_critical_1pct(n: usize) -> f64 {
    1.628 / (n as f64).sqrt()
}

/// Total variation distance between two finite probability vectors
/// (padded with zeros to equal length).
pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    let len = p.len().max(q.len());
    let mut tv = 0.0;
    for i in 0..len {
        let a = p.get(i).copied().unwrap_or(0.0);
        let b = q.get(i).copied().unwrap_or(0.0);
        tv += (a - b).abs();
    }
    tv / 2.0
}

/// Variance estimate that detects heavy tails instead of reporting a
/// meaningless number.
#[derive(Clone, Copy, Debug)]
pub enum VarianceEstimate {
    Finite { value: f64, std_err: f64 },
    /// Batch means of `x^2` disagree wildly: the second moment does not
    /// stabilize at this sample size.
    HeavyTailed { batch_spread: f64 },
}

/// Median-of-means diagnostic: split into batches, compare batch means
/// of `x^2`; a spread beyond `5x` flags a non-convergent variance.
pub fn variance_estimate(xs: &[f64]) -> VarianceEstimate {
    const BATCHES: usize = 20;
    let n = xs.len();
    let batch = (n / BATCHES).max(1);
    let mut means = Vec::with_capacity(BATCHES);
    for b in 0..BATCHES {
        let lo = b * batch;
        let hi = ((b + 1) * batch).min(n);
        if lo >= hi {
            break;
        }
        means.push(xs[lo..hi].iter().map(|x| x * x).sum::<f64>() / (hi - lo) as f64);
    }
    let max = means.iter().cloned().fold(f64::MIN, f64::max);
    let min = means.iter().cloned().fold(f64::MAX, f64::min);
    let spread = if min > 0.0 { max / min } else { f64::INFINITY };
    if spread > 5.0 {
        return VarianceEstimate::HeavyTailed {
            batch_spread: spread,
        };
    }
    let sq: Vec<f64> = xs.iter().map(|x| x * x).collect();
    let (m2, se) = empirical_mean_stderr(&sq);
    VarianceEstimate::Finite {
        value: m2,
        std_err: se,
    }
}
