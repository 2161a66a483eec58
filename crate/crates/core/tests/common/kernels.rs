use std::f64::consts::PI;
use std::path::PathBuf;

use irshcn::analytical::{u_derivative, u_function};
use irshcn::quad::{integrate, Tolerance};
use irshcn::specialfn::{
    composition_derivatives, gauss_2f1, inverse_laplace_cdf, lower_gamma_reg, InversionMethod, LaplaceInverter,
};
use num_complex::Complex64;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn read_rows(name: &str) -> Vec<Vec<f64>> {
    let mut rdr = csv::Reader::from_path(data(name)).unwrap();
    rdr.records()
        .map(|r| r.unwrap().iter().map(|v| v.parse::<f64>().unwrap()).collect())
        .collect()
}

/// Worst relative error found by a check, with a description of where.
#[derive(Debug, Clone)]
pub struct Worst {
    pub error: f64,
    pub at: String,
    pub points: usize,
}

impl Worst {
    fn new() -> Self {
        Worst {
            error: 0.0,
            at: String::new(),
            points: 0,
        }
    }

    fn record(&mut self, error: f64, at: impl FnOnce() -> String) {
        self.points += 1;
        // NaN counts as worst
        if error.is_nan() || error > self.error {
            self.error = error;
            self.at = at();
        }
    }
}

/// ₂F₁ against 50-digit values on the negative real axis.
pub fn hyp2f1_oracle() -> Worst {
    let mut worst = Worst::new();
    for r in read_rows("hyp2f1_negative_axis.csv") {
        let got = gauss_2f1(r[0], r[1], r[2], r[3]).unwrap_or(f64::NAN);
        let rel = ((got - r[4]) / r[4]).abs();
        worst.record(rel, || format!("2F1({}, {}; {}; {})", r[0], r[1], r[2], r[3]));
    }
    worst
}

/// Derivatives of exp(V) at s = 1 built from closed-form U derivatives and
/// the Bell-polynomial composition, against high-precision differences.
pub fn exp_v_derivatives_oracle() -> Worst {
    let rows = read_rows("exp_v_derivatives.csv");
    let cases = rows.iter().map(|r| r[0] as usize).max().unwrap() + 1;
    let mut worst = Worst::new();
    for case in 0..cases {
        let rs: Vec<&Vec<f64>> = rows.iter().filter(|r| r[0] as usize == case).collect();
        let (alpha, z, beta, lam, c, a) = (rs[0][1], rs[0][2], rs[0][3], rs[0][4], rs[0][5], rs[0][6]);
        let n = rs.len() - 1;
        let v0 = -a - 2.0 * PI * lam * u_function(c, alpha, z, beta).unwrap();
        let derivs: Vec<f64> = (1..=n)
            .map(|i| {
                let u = u_derivative(i, c, alpha, z, beta).unwrap();
                let lin = if i == 1 { -a } else { 0.0 };
                lin - 2.0 * PI * lam * c.powi(i as i32) * u
            })
            .collect();
        let got = composition_derivatives(&derivs, n, v0).unwrap();
        for r in &rs {
            let i = r[7] as usize;
            let rel = ((got[i] - r[8]) / r[8]).abs();
            worst.record(rel, || format!("case {case}, order {i}"));
        }
    }
    worst
}

pub fn u_by_quadrature(x: f64, alpha: f64, e: f64, beta: f64) -> f64 {
    // ∫_e^∞ (1 − 1/(1 + xβz^{−α})) z dz with z = e/t
    integrate(
        |t: f64| {
            if t == 0.0 {
                return 0.0;
            }
            let z = e / t;
            let g = x * beta * z.powf(-alpha);
            g / (1.0 + g) * z * e / (t * t)
        },
        0.0,
        1.0,
        Tolerance::rel(1e-13).with_abs(0.0),
    )
    .unwrap()
}

pub const U_GRID_PARAMS: [(f64, f64, f64); 5] = [
    (4.0, 1.0, 1.0),
    (3.5, 25.0, 1.42e-4),
    (3.0, 7.0, 1e-3),
    (2.5, 120.0, 1.42e-4),
    (5.0, 3.0, 0.2),
];

/// U against direct quadrature over eleven decades around the knee.
pub fn u_quadrature_oracle() -> Worst {
    let mut worst = Worst::new();
    for &(alpha, e, beta) in &U_GRID_PARAMS {
        let scale = e.powf(alpha) / beta;
        for p in -40..=40 {
            let x = scale * 10f64.powf(p as f64 / 8.0);
            let got = u_function(x, alpha, e, beta).unwrap_or(f64::NAN);
            let want = u_by_quadrature(x, alpha, e, beta);
            worst.record(((got - want) / want).abs(), || {
                format!("α={alpha} e={e} β={beta} x={x:e}")
            });
        }
    }
    worst
}

pub fn inverters() -> Vec<LaplaceInverter> {
    vec![
        LaplaceInverter::default(),
        LaplaceInverter {
            method: InversionMethod::TalbotContour,
            ..Default::default()
        },
    ]
}

/// Inverted exponential and Gamma(3, 2) transforms against their CDFs.
/// Absolute error; a decrease between successive points counts as error too.
pub fn inverse_laplace_oracle() -> Worst {
    let mut worst = Worst::new();
    for inv in inverters() {
        let mut prev = 0.0;
        for i in 1..=60 {
            let y = 0.1 * i as f64;
            let e = inverse_laplace_cdf(|s| Ok(1.0 / (1.0 + s)), y, &inv).unwrap_or(f64::NAN);
            worst.record((e - (1.0 - (-y).exp())).abs(), || format!("{:?} exp y={y}", inv.method));
            worst.record(prev - e, || format!("{:?} exp not monotone at y={y}", inv.method));
            prev = e;
            let g = inverse_laplace_cdf(|s: Complex64| Ok((1.0 + 2.0 * s).powi(-3)), y, &inv).unwrap_or(f64::NAN);
            let want = lower_gamma_reg(3.0, y / 2.0).unwrap();
            worst.record((g - want).abs(), || format!("{:?} gamma y={y}", inv.method));
        }
    }
    worst
}
