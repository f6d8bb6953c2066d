//! Sample statistics used by experiments and validation.

/// Mean, spread and standard error of a sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub n: usize,
    pub mean: f64,
    /// Unbiased standard deviation.
    pub std: f64,
    pub stderr: f64,
    /// Standard error of `std` under the large-sample approximation
    /// `sqrt((m₄ − s⁴) / n) / (2 s)`.
    pub std_stderr: f64,
}

impl Summary {
    pub fn of(xs: &[f64]) -> Summary {
        let n = xs.len();
        if n == 0 {
            return Summary {
                n,
                mean: f64::NAN,
                std: f64::NAN,
                stderr: f64::NAN,
                std_stderr: f64::NAN,
            };
        }
        let nf = n as f64;
        let mean = xs.iter().sum::<f64>() / nf;
        let (m2, m4) = xs.iter().fold((0.0, 0.0), |(a, b), &x| {
            let d2 = (x - mean) * (x - mean);
            (a + d2, b + d2 * d2)
        });
        let var = if n > 1 { m2 / (nf - 1.0) } else { 0.0 };
        let std = var.sqrt();
        let m4 = m4 / nf;
        let std_stderr = if std > 0.0 {
            ((m4 - var * var).max(0.0) / nf).sqrt() / (2.0 * std)
        } else {
            0.0
        };
        Summary {
            n,
            mean,
            std,
            stderr: std / nf.sqrt(),
            std_stderr,
        }
    }

    /// `|mean − target| / stderr`, with a zero stderr giving 0 or ∞.
    pub fn z_score(&self, target: f64) -> f64 {
        let diff = (self.mean - target).abs();
        if self.stderr > 0.0 {
            diff / self.stderr
        } else if diff == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    }
}

pub fn mean(xs: &[f64]) -> f64 {
    Summary::of(xs).mean
}

/// Two-sample Kolmogorov–Smirnov statistic `sup |F₁ − F₂|`.
pub fn ks_statistic(a: &[f64], b: &[f64]) -> f64 {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    a.sort_by(f64::total_cmp);
    b.sort_by(f64::total_cmp);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j, mut d) = (0usize, 0usize, 0.0f64);
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    d
}

/// Asymptotic critical value of the two-sample KS statistic at level `alpha`:
/// `sqrt(−½ ln(α/2)) · sqrt((n + m)/(n m))`.
pub fn ks_critical(n: usize, m: usize, alpha: f64) -> f64 {
    let c = (-0.5 * (alpha / 2.0).ln()).sqrt();
    let (n, m) = (n as f64, m as f64);
    c * ((n + m) / (n * m)).sqrt()
}

/// Least-squares line `y = a + b x`, returning `(b, a)`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

/// Slope of `ln y` against `ln x`.
pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    linear_fit(&lx, &ly).0
}

/// Median of a sample (NaN when empty).
pub fn median(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        return f64::NAN;
    }
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summary_basic() {
        let s = Summary::of(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(s.mean, 2.5);
        assert!((s.std - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert!((s.stderr - s.std / 2.0).abs() < 1e-15);
        assert_eq!(s.z_score(2.5), 0.0);
        assert!(Summary::of(&[]).mean.is_nan());
    }

    #[test]
    fn ks() {
        let a = [0.1, 0.2, 0.3];
        assert_eq!(ks_statistic(&a, &a), 0.0);
        assert_eq!(ks_statistic(&a, &[1.0, 2.0]), 1.0);
        assert!((ks_critical(1000, 1000, 0.05) - 1.358 * (2.0f64 / 1000.0).sqrt()).abs() < 1e-3);
    }

    #[test]
    fn slopes() {
        let xs = [1.0, 2.0, 4.0, 8.0];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| 3.0 * x.powf(-0.5)).collect();
        assert!((log_log_slope(&xs, &ys) + 0.5).abs() < 1e-12);
        assert_eq!(median(&[3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&[4.0, 1.0, 2.0, 3.0]), 2.5);
    }
}
