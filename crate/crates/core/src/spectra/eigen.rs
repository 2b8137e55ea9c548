//! Eigenvalues of real symmetric tridiagonal matrices by Sturm-sequence bisection.

/// Number of eigenvalues strictly below `x`, for diagonal `d` and squared off-diagonal `e2`.
pub fn count_below(d: &[f64], e2: &[f64], x: f64) -> usize {
    let pivmin = f64::MIN_POSITIVE / f64::EPSILON;
    let mut count = 0;
    let mut q = 1.0;
    for (i, &di) in d.iter().enumerate() {
        q = if i == 0 { di - x } else { di - x - e2[i - 1] / q };
        if q.abs() < pivmin {
            q = -pivmin;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Interval containing the whole spectrum.
pub fn gershgorin(d: &[f64], e: &[f64]) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for (i, &di) in d.iter().enumerate() {
        let left = if i > 0 { e[i - 1].abs() } else { 0.0 };
        let right = e.get(i).map_or(0.0, |v| v.abs());
        lo = lo.min(di - left - right);
        hi = hi.max(di + left + right);
    }
    (lo, hi)
}

/// The `k`-th largest eigenvalue (`k ≥ 1`) to absolute accuracy `rel · max(1, |ℓ|)`.
fn kth_largest(d: &[f64], e2: &[f64], k: usize, bounds: (f64, f64), rel: f64) -> f64 {
    let n = d.len();
    let target = n - k + 1;
    let (mut lo, mut hi) = bounds;
    while hi - lo > rel * lo.abs().max(hi.abs()).max(1.0) {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if count_below(d, e2, mid) >= target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// The `count` largest eigenvalues in decreasing order, each to `1e-12 · max(1, |ℓ|)`.
pub fn top_eigenvalues(d: &[f64], e: &[f64], count: usize) -> Vec<f64> {
    assert_eq!(e.len() + 1, d.len(), "off-diagonal must be one shorter than the diagonal");
    let e2: Vec<f64> = e.iter().map(|v| v * v).collect();
    let (lo, hi) = gershgorin(d, e);
    let scale = lo.abs().max(hi.abs()).max(1.0);
    let pad = 1e-9 * scale;
    let bounds = (lo - pad, hi + pad);
    (1..=count.min(d.len()))
        .map(|k| kth_largest(d, &e2, k, bounds, 1e-12))
        .collect()
}

pub fn eigenvalues(d: &[f64], e: &[f64]) -> Vec<f64> {
    top_eigenvalues(d, e, d.len())
}

/// Characteristic polynomial `det(zI − T)` in ascending coefficients via the three-term recurrence.
pub fn char_poly(d: &[f64], e: &[f64]) -> Vec<f64> {
    let mut prev = vec![1.0];
    let mut cur = super::charfn::mul_linear(&prev, -d[0]);
    for i in 1..d.len() {
        let mut next = super::charfn::mul_linear(&cur, -d[i]);
        let w2 = e[i - 1] * e[i - 1];
        for (k, p) in prev.iter().enumerate() {
            next[k] -= w2 * p;
        }
        prev = cur;
        cur = next;
    }
    cur
}
