use betafluct::circular::default_sine_n;
use betafluct::stats::{centered_spans, default_xi_grid, tail_check, variance_scan, ScanSpec, SECOND_MOMENT_BOUND};

fn ranks(xs: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..xs.len()).collect();
    idx.sort_by(|&a, &b| xs[a].total_cmp(&xs[b]));
    let mut r = vec![0.0; xs.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && xs[idx[j + 1]] == xs[idx[i]] {
            j += 1;
        }
        for k in i..=j {
            r[idx[k]] = 0.5 * (i + j) as f64;
        }
        i = j + 1;
    }
    r
}

fn spearman(a: &[f64], b: &[f64]) -> f64 {
    let (ra, rb) = (ranks(a), ranks(b));
    let mean = (a.len() - 1) as f64 / 2.0;
    let cov: f64 = ra.iter().zip(&rb).map(|(x, y)| (x - mean) * (y - mean)).sum();
    let va: f64 = ra.iter().map(|x| (x - mean).powi(2)).sum();
    let vb: f64 = rb.iter().map(|y| (y - mean).powi(2)).sum();
    cov / (va * vb).sqrt()
}

#[test]
fn spearman_helper() {
    assert!((spearman(&[1.0, 2.0, 3.0], &[10.0, 20.0, 30.0]) - 1.0).abs() < 1e-12);
    assert!((spearman(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]) + 1.0).abs() < 1e-12);
}

#[test]
fn scans_do_not_depend_on_worker_count() {
    let specs = [
        ScanSpec::circular(2.0, 128, &default_xi_grid(128).unwrap()),
        ScanSpec::gaussian(1.0, 64, &centered_spans(64, 8.0, &[1.0, 8.0, 64.0])),
        ScanSpec::sine(4.0, 400, &[1.0, 10.0, 40.0]),
    ];
    for spec in &specs {
        let one = variance_scan(spec, 1000, 77, 1).unwrap();
        for workers in [4, 16] {
            assert_eq!(one, variance_scan(spec, 1000, 77, workers).unwrap(), "{:?}", spec.ensemble);
        }
    }
}

#[test]
fn circular_variance_grows_with_scale() {
    let n = 256;
    let rows = variance_scan(&ScanSpec::circular(2.0, n, &default_xi_grid(n).unwrap()), 100_000, 2, 0).unwrap();
    let xi: Vec<f64> = rows.iter().map(|r| r.xi).collect();
    let var: Vec<f64> = rows.iter().map(|r| r.variance).collect();
    let rho = spearman(&xi, &var);
    assert!(rho > 0.9, "spearman {rho}: {var:?}");
}

#[test]
fn sine_window_variance_is_stable_in_n() {
    let x = 20.0;
    let m = 20_000;
    let a = &variance_scan(&ScanSpec::sine(2.0, default_sine_n(x), &[x]), m, 3, 0).unwrap()[0];
    let b = &variance_scan(&ScanSpec::sine(2.0, 2 * default_sine_n(x), &[x]), m, 4, 0).unwrap()[0];
    let width = (a.var_ci_hi - a.var_ci_lo).max(b.var_ci_hi - b.var_ci_lo);
    assert!((a.variance - b.variance).abs() < width, "{a:?} {b:?}");
    let sd = a.variance.sqrt();
    assert!((a.mean - x / std::f64::consts::TAU).abs() < 3.0 * sd / (m as f64).sqrt() + 1e-9, "{a:?}");
}

#[test]
fn phase_tail_below_exponential_bound() {
    let n = 100;
    let report = tail_check(2.0, n, 1.0 / n as f64, 0.7, &[12.0, 24.0, 48.0], 1_000_000, 5, 0).unwrap();
    for row in &report.rows {
        assert!(row.empirical <= row.bound && row.holds(), "{row:?}");
    }
    assert!(report.second_moment <= SECOND_MOMENT_BOUND);
}
