//! Globally adaptive 21-point Gauss-Kronrod quadrature.
//!
//! The integrand may be vector valued (`[f64; N]`): every component is
//! integrated on the same set of nodes, and an interval is accepted only
//! when all components meet the tolerance. The pressure integrals over the
//! cylinder angle use this to share one set of pressure evaluations between
//! the three area weights.

// Node and weight tables are quoted at their published precision.
#![allow(clippy::excessive_precision)]

use crate::error::{CasimirError, Result};
use crate::summation::CompensatedSum;

const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
];

const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077208659812978,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];

// Weights of the embedded 10-point Gauss rule, at XGK[1], XGK[3], ..., XGK[9].
const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

/// Stopping criteria for [`integrate`] and [`integrate_vec`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-9,
            abs_tol: 0.0,
            max_intervals: 2000,
        }
    }
}

/// Result of a vector-valued integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature<const N: usize> {
    pub value: [f64; N],
    pub abs_error: [f64; N],
    pub intervals: usize,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel<const N: usize> {
    lower: f64,
    upper: f64,
    value: [f64; N],
    error: [f64; N],
}

fn rescale_error(err: f64, res_abs: f64, res_asc: f64) -> f64 {
    let mut scaled = err.abs();
    if res_asc != 0.0 && scaled != 0.0 {
        let scale = (200.0 * scaled / res_asc).powf(1.5);
        scaled = if scale < 1.0 { res_asc * scale } else { res_asc };
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        scaled = scaled.max(50.0 * f64::EPSILON * res_abs);
    }
    scaled
}

fn gauss_kronrod<const N: usize, F>(f: &mut F, lower: f64, upper: f64) -> Panel<N>
where
    F: FnMut(f64) -> [f64; N],
{
    let center = 0.5 * (lower + upper);
    let half = 0.5 * (upper - lower);

    let mut fv1 = [[0.0; N]; 10];
    let mut fv2 = [[0.0; N]; 10];
    for j in 0..10 {
        let dx = half * XGK[j];
        fv1[j] = f(center - dx);
        fv2[j] = f(center + dx);
    }
    let fc = f(center);

    let mut value = [0.0; N];
    let mut error = [0.0; N];
    for k in 0..N {
        let mut kronrod = WGK[10] * fc[k];
        let mut gauss = 0.0;
        let mut res_abs = (WGK[10] * fc[k]).abs();
        for j in 0..10 {
            let pair = fv1[j][k] + fv2[j][k];
            kronrod += WGK[j] * pair;
            res_abs += WGK[j] * (fv1[j][k].abs() + fv2[j][k].abs());
            if j % 2 == 1 {
                gauss += WG[j / 2] * pair;
            }
        }
        let mean = 0.5 * kronrod;
        let mut res_asc = WGK[10] * (fc[k] - mean).abs();
        for j in 0..10 {
            res_asc += WGK[j] * ((fv1[j][k] - mean).abs() + (fv2[j][k] - mean).abs());
        }
        let abs_half = half.abs();
        value[k] = kronrod * half;
        error[k] = rescale_error((kronrod - gauss) * half, res_abs * abs_half, res_asc * abs_half);
    }
    Panel {
        lower,
        upper,
        value,
        error,
    }
}

/// Integrates a vector-valued `f` over `[points[0], points[last]]`, starting
/// from the panels delimited by `points` (which must be increasing).
pub fn integrate_vec<const N: usize, F>(mut f: F, points: &[f64], opts: QuadOptions) -> Result<Quadrature<N>>
where
    F: FnMut(f64) -> [f64; N],
{
    assert!(points.len() >= 2, "need at least one panel");
    let mut panels: Vec<Panel<N>> = points
        .windows(2)
        .filter(|w| w[1] > w[0])
        .map(|w| gauss_kronrod(&mut f, w[0], w[1]))
        .collect();
    let mut evaluations = 21 * panels.len();
    if panels.is_empty() {
        return Ok(Quadrature {
            value: [0.0; N],
            abs_error: [0.0; N],
            intervals: 0,
            evaluations: 0,
        });
    }

    loop {
        let (value, error) = totals(&panels);
        let tolerance: [f64; N] = std::array::from_fn(|k| opts.abs_tol.max(opts.rel_tol * value[k].abs()));
        if (0..N).all(|k| error[k] <= tolerance[k]) {
            return Ok(Quadrature {
                value,
                abs_error: error,
                intervals: panels.len(),
                evaluations,
            });
        }

        // Split the panel contributing most to the normalized excess error.
        let worst = panels
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let weight: f64 = (0..N)
                    .map(|k| p.error[k] / tolerance[k].max(f64::MIN_POSITIVE))
                    .fold(0.0, f64::max);
                (i, weight)
            })
            .fold(
                (0, f64::NEG_INFINITY),
                |best, cur| if cur.1 > best.1 { cur } else { best },
            )
            .0;
        let Panel { lower, upper, .. } = panels[worst];
        let mid = 0.5 * (lower + upper);
        let too_narrow = mid <= lower || mid >= upper || (upper - lower) < 1e-14 * lower.abs().max(upper.abs());
        if panels.len() >= opts.max_intervals || too_narrow {
            let abs_error = error.iter().cloned().fold(0.0, f64::max);
            return Err(CasimirError::Convergence {
                lower: points[0],
                upper: points[points.len() - 1],
                abs_error,
                intervals: panels.len(),
            });
        }
        let left = gauss_kronrod(&mut f, lower, mid);
        let right = gauss_kronrod(&mut f, mid, upper);
        evaluations += 42;
        panels[worst] = left;
        panels.insert(worst + 1, right);
    }
}

fn totals<const N: usize>(panels: &[Panel<N>]) -> ([f64; N], [f64; N]) {
    let mut value = [0.0; N];
    let mut error = [0.0; N];
    for k in 0..N {
        let mut v = CompensatedSum::new();
        let mut e = CompensatedSum::new();
        for p in panels {
            v.add(p.value[k]);
            e.add(p.error[k]);
        }
        value[k] = v.value();
        error[k] = e.value();
    }
    (value, error)
}

/// Scalar convenience wrapper around [`integrate_vec`].
pub fn integrate<F>(mut f: F, points: &[f64], opts: QuadOptions) -> Result<Quadrature<1>>
where
    F: FnMut(f64) -> f64,
{
    integrate_vec(|x| [f(x)], points, opts)
}
