//! Adaptive Gauss–Kronrod (7/15) quadrature on finite intervals.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadSettings {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadSettings {
    fn default() -> Self {
        QuadSettings {
            abs_tol: 1e-13,
            rel_tol: 1e-11,
            max_intervals: 4000,
        }
    }
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn gk15(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64) -> Panel {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        kronrod += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    Panel {
        a,
        b,
        value: kronrod * h,
        error: ((kronrod - gauss) * h).abs(),
    }
}

/// `∫_a^b f`, bisecting the panel with the largest error estimate until the
/// total estimate meets the tolerance.
pub fn integrate(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, s: QuadSettings) -> Result<f64> {
    integrate_breaks(&mut f, &[a, b], s)
}

/// Integral over `[p_0, p_n]` with the integrand split at the given
/// breakpoints (sorted, duplicates dropped).
pub fn integrate_breaks(f: &mut impl FnMut(f64) -> f64, points: &[f64], s: QuadSettings) -> Result<f64> {
    let mut pts: Vec<f64> = points.iter().copied().filter(|p| p.is_finite()).collect();
    pts.sort_by(f64::total_cmp);
    pts.dedup_by(|a, b| (*a - *b).abs() <= 1e-15 * a.abs().max(1.0));
    if pts.len() < 2 {
        return Ok(0.0);
    }
    let mut panels: Vec<Panel> = pts.windows(2).map(|w| gk15(f, w[0], w[1])).collect();
    loop {
        let total: f64 = panels.iter().map(|p| p.value).sum();
        let err: f64 = panels.iter().map(|p| p.error).sum();
        if err <= s.abs_tol.max(s.rel_tol * total.abs()) {
            return Ok(total);
        }
        if panels.len() >= s.max_intervals {
            return Err(Error::Accuracy {
                what: format!("adaptive quadrature (error estimate {err:e})"),
                partial: total,
            });
        }
        let (idx, _) = panels
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.error.total_cmp(&b.1.error))
            .expect("at least one panel");
        let p = panels.swap_remove(idx);
        let m = 0.5 * (p.a + p.b);
        if m <= p.a || m >= p.b {
            // cannot subdivide further in floating point
            return Err(Error::Accuracy {
                what: "adaptive quadrature (interval underflow)".into(),
                partial: total,
            });
        }
        panels.push(gk15(f, p.a, m));
        panels.push(gk15(f, m, p.b));
    }
}

/// Fixed composite Gauss–Legendre rule with `panels` equal panels of 7
/// points each. Returns `(nodes, weights)`.
pub fn gauss_legendre_nodes(a: f64, b: f64, panels: usize) -> (Vec<f64>, Vec<f64>) {
    // 7-point rule: the odd-index Kronrod abscissae
    let xs = [XGK[1], XGK[3], XGK[5], 0.0];
    let mut nodes = Vec::with_capacity(7 * panels);
    let mut weights = Vec::with_capacity(7 * panels);
    let width = (b - a) / panels as f64;
    for p in 0..panels {
        let lo = a + p as f64 * width;
        let c = lo + 0.5 * width;
        let h = 0.5 * width;
        for j in 0..3 {
            nodes.push(c - h * xs[j]);
            weights.push(h * WG[j]);
            nodes.push(c + h * xs[j]);
            weights.push(h * WG[j]);
        }
        nodes.push(c);
        weights.push(h * WG[3]);
    }
    (nodes, weights)
}
