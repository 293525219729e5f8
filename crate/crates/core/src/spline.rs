//! Not-a-knot cubic splines on strictly increasing abscissae.

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct CubicSpline {
    xs: Vec<f64>,
    ys: Vec<f64>,
    /// Second derivatives at the knots.
    m: Vec<f64>,
}

impl CubicSpline {
    /// Two knots give a line, three a parabola, four or more a not-a-knot
    /// cubic spline.
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        let n = xs.len();
        if n < 2 || ys.len() != n {
            return Err(Error::InvalidParameter(format!(
                "spline needs at least 2 matching samples, got {} x and {} y",
                n,
                ys.len()
            )));
        }
        if xs.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidParameter(
                "spline abscissae must be strictly increasing".into(),
            ));
        }
        let m = match n {
            2 => vec![0.0; 2],
            3 => {
                let d0 = (ys[1] - ys[0]) / (xs[1] - xs[0]);
                let d1 = (ys[2] - ys[1]) / (xs[2] - xs[1]);
                let c = 2.0 * (d1 - d0) / (xs[2] - xs[0]);
                vec![c; 3]
            }
            _ => not_a_knot_moments(&xs, &ys),
        };
        Ok(Self { xs, ys, m })
    }

    pub fn knots(&self) -> &[f64] {
        &self.xs
    }

    fn interval(&self, x: f64) -> usize {
        let n = self.xs.len();
        match self.xs.partition_point(|&k| k <= x) {
            0 => 0,
            i if i >= n => n - 2,
            i => i - 1,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let i = self.interval(x);
        let h = self.xs[i + 1] - self.xs[i];
        let a = (self.xs[i + 1] - x) / h;
        let b = (x - self.xs[i]) / h;
        a * self.ys[i]
            + b * self.ys[i + 1]
            + ((a * a * a - a) * self.m[i] + (b * b * b - b) * self.m[i + 1]) * h * h / 6.0
    }

    pub fn derivative(&self, x: f64) -> f64 {
        let i = self.interval(x);
        let h = self.xs[i + 1] - self.xs[i];
        let a = (self.xs[i + 1] - x) / h;
        let b = (x - self.xs[i]) / h;
        (self.ys[i + 1] - self.ys[i]) / h
            + ((1.0 - 3.0 * a * a) * self.m[i] + (3.0 * b * b - 1.0) * self.m[i + 1]) * h / 6.0
    }
}

fn not_a_knot_moments(xs: &[f64], ys: &[f64]) -> Vec<f64> {
    let n = xs.len();
    let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
    let d: Vec<f64> = (0..n - 1).map(|i| (ys[i + 1] - ys[i]) / h[i]).collect();

    // Unknowns M_1..M_{n-2}; M_0 and M_{n-1} are eliminated through the
    // third-derivative continuity at x_1 and x_{n-2}.
    let k = n - 2;
    let mut sub = vec![0.0; k];
    let mut diag = vec![0.0; k];
    let mut sup = vec![0.0; k];
    let mut rhs = vec![0.0; k];
    for r in 0..k {
        let i = r + 1;
        sub[r] = h[i - 1];
        diag[r] = 2.0 * (h[i - 1] + h[i]);
        sup[r] = h[i];
        rhs[r] = 6.0 * (d[i] - d[i - 1]);
    }
    // M_0 = ((h0 + h1) M_1 − h0 M_2) / h1
    let (h0, h1) = (h[0], h[1]);
    diag[0] += h0 * (h0 + h1) / h1;
    if k > 1 {
        sup[0] -= h0 * h0 / h1;
    }
    // M_{n-1} = ((hl + hp) M_{n-2} − hl M_{n-3}) / hp, hl = h[n-2], hp = h[n-3]
    let (hl, hp) = (h[n - 2], h[n - 3]);
    diag[k - 1] += hl * (hl + hp) / hp;
    if k > 1 {
        sub[k - 1] -= hl * hl / hp;
    }

    let inner = if k == 1 {
        vec![rhs[0] / diag[0]]
    } else {
        thomas(&sub, &diag, &sup, &rhs)
    };

    let mut m = vec![0.0; n];
    m[1..n - 1].copy_from_slice(&inner);
    let m2 = if n > 3 { m[2] } else { m[1] };
    m[0] = ((h0 + h1) * m[1] - h0 * m2) / h1;
    let m_n3 = if n > 3 { m[n - 3] } else { m[n - 2] };
    m[n - 1] = ((hl + hp) * m[n - 2] - hl * m_n3) / hp;
    m
}

fn thomas(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    c[0] = sup[0] / diag[0];
    d[0] = rhs[0] / diag[0];
    for i in 1..n {
        let denom = diag[i] - sub[i] * c[i - 1];
        c[i] = if i + 1 < n { sup[i] / denom } else { 0.0 };
        d[i] = (rhs[i] - sub[i] * d[i - 1]) / denom;
    }
    let mut x = vec![0.0; n];
    x[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = d[i] - c[i] * x[i + 1];
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cubic(x: f64) -> f64 {
        0.5 * x * x * x - 2.0 * x * x + x - 3.0
    }

    fn cubic_prime(x: f64) -> f64 {
        1.5 * x * x - 4.0 * x + 1.0
    }

    #[test]
    fn reproduces_cubics_exactly() {
        for n in [4usize, 5, 9, 30] {
            let xs: Vec<f64> = (0..n)
                .map(|i| -1.0 + 3.0 * (i as f64 / (n - 1) as f64).powf(1.3))
                .collect();
            let ys = xs.iter().map(|&x| cubic(x)).collect();
            let s = CubicSpline::new(xs, ys).unwrap();
            for j in 0..50 {
                let x = -1.0 + 3.0 * j as f64 / 49.0;
                assert!((s.eval(x) - cubic(x)).abs() < 1e-11, "n={n} x={x}");
                assert!(
                    (s.derivative(x) - cubic_prime(x)).abs() < 1e-10,
                    "n={n} x={x}"
                );
            }
        }
    }

    #[test]
    fn small_sample_counts() {
        let line = CubicSpline::new(vec![0.0, 2.0], vec![1.0, 5.0]).unwrap();
        assert_eq!(line.eval(1.0), 3.0);
        assert_eq!(line.derivative(0.3), 2.0);
        let par = CubicSpline::new(vec![0.0, 1.0, 3.0], vec![0.0, 1.0, 9.0]).unwrap();
        assert!((par.eval(2.0) - 4.0).abs() < 1e-14);
        assert!((par.derivative(2.0) - 4.0).abs() < 1e-14);
    }

    #[test]
    fn interpolates_knots() {
        let xs: Vec<f64> = (0..17).map(|i| i as f64 * 0.4).collect();
        let ys: Vec<f64> = xs.iter().map(|x| x.sin()).collect();
        let s = CubicSpline::new(xs.clone(), ys.clone()).unwrap();
        for (x, y) in xs.iter().zip(&ys) {
            assert!((s.eval(*x) - y).abs() < 1e-14);
        }
    }

    #[test]
    fn fourth_order_accuracy() {
        let err = |n: usize| {
            let xs: Vec<f64> = (0..n).map(|i| 3.0 * i as f64 / (n - 1) as f64).collect();
            let ys = xs.iter().map(|x| x.sin()).collect();
            let s = CubicSpline::new(xs, ys).unwrap();
            (0..301)
                .map(|j| {
                    let x = 3.0 * j as f64 / 300.0;
                    (s.eval(x) - x.sin()).abs()
                })
                .fold(0.0, f64::max)
        };
        let ratio = err(21) / err(41);
        assert!(ratio > 12.0, "ratio {ratio}");
    }

    #[test]
    fn rejects_unsorted() {
        assert!(CubicSpline::new(vec![0.0, 0.0, 1.0], vec![1.0; 3]).is_err());
        assert!(CubicSpline::new(vec![0.0], vec![1.0]).is_err());
    }
}
