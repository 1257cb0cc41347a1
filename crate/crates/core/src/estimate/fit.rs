/// Least squares `min |sum_j c_j cols[j] - y|` by Householder QR.
/// Returns `None` for rank-deficient systems or fewer rows than columns.
#[allow(clippy::needless_range_loop)] // Householder updates read clearest with indices
pub fn least_squares(cols: &[Vec<f64>], y: &[f64]) -> Option<Vec<f64>> {
    let k = cols.len();
    let m = y.len();
    if k == 0 || m < k || cols.iter().any(|c| c.len() != m) {
        return None;
    }
    // row-major copy
    let mut a: Vec<Vec<f64>> = (0..m)
        .map(|i| cols.iter().map(|c| c[i]).collect())
        .collect();
    let mut b = y.to_vec();
    let scale = cols
        .iter()
        .flatten()
        .fold(0.0f64, |s, x| s.max(x.abs()))
        .max(f64::MIN_POSITIVE);
    for j in 0..k {
        let norm = (j..m).map(|i| a[i][j] * a[i][j]).sum::<f64>().sqrt();
        if norm <= 1e-13 * scale {
            return None;
        }
        let alpha = if a[j][j] > 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = (j..m).map(|i| a[i][j]).collect();
        v[0] -= alpha;
        let vv: f64 = v.iter().map(|x| x * x).sum();
        if vv == 0.0 {
            continue;
        }
        for c in j..k {
            let dot: f64 = (j..m).map(|i| v[i - j] * a[i][c]).sum();
            let f = 2.0 * dot / vv;
            for i in j..m {
                a[i][c] -= f * v[i - j];
            }
        }
        let dot: f64 = (j..m).map(|i| v[i - j] * b[i]).sum();
        let f = 2.0 * dot / vv;
        for i in j..m {
            b[i] -= f * v[i - j];
        }
    }
    let mut x = vec![0.0; k];
    for j in (0..k).rev() {
        let s: f64 = (j + 1..k).map(|c| a[j][c] * x[c]).sum();
        x[j] = (b[j] - s) / a[j][j];
    }
    Some(x)
}
