//! Gauss–Legendre rules, fixed-panel composite integration and an
//! adaptive bisection driver.

use std::f64::consts::PI;
use std::ops::{Add, Mul};

use crate::error::{Error, Result};

/// An `order`-point Gauss–Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes are found by Newton iteration on P_n from the usual cosine
    /// initial guess.
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "Gauss-Legendre order must be positive");
        let n = order;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            weights[i] = w;
            nodes[n - 1 - i] = x;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Single-panel integral over [lo, hi].
    pub fn integrate<T, F>(&self, mut f: F, lo: f64, hi: f64) -> T
    where
        T: Copy + Add<Output = T> + Mul<f64, Output = T>,
        F: FnMut(f64) -> T,
    {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        let mut iter = self.nodes.iter().zip(&self.weights);
        let (x0, w0) = iter.next().expect("non-empty rule");
        let mut acc = f(mid + half * x0) * *w0;
        for (x, w) in iter {
            acc = acc + f(mid + half * x) * *w;
        }
        acc * half
    }

    /// Composite rule over `panels` equal sub-intervals of [lo, hi].
    pub fn integrate_panels<T, F>(&self, mut f: F, lo: f64, hi: f64, panels: usize) -> T
    where
        T: Copy + Add<Output = T> + Mul<f64, Output = T>,
        F: FnMut(f64) -> T,
    {
        assert!(panels >= 1);
        let width = (hi - lo) / panels as f64;
        let mut acc = self.integrate(&mut f, lo, lo + width);
        for p in 1..panels {
            let a = lo + p as f64 * width;
            acc = acc + self.integrate(&mut f, a, a + width);
        }
        acc
    }
}

/// P_n(x) and P_n'(x) by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Value of an adaptive integral with its estimated absolute error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
}

const MAX_DEPTH: usize = 48;

/// Cap on the number of accepted panels, so that a noisy integrand cannot
/// make the recursion run for ever.
const MAX_PANELS: usize = 1 << 16;

/// Adaptive bisection with a Gauss–Legendre panel rule.
///
/// A panel is accepted when the one-panel and two-half-panel results
/// differ by less than its share of the absolute budget `tol * |I|`.
/// Gives up after [`MAX_DEPTH`] levels or [`MAX_PANELS`] panels and
/// reports the achieved error.
pub fn adaptive<F>(rule: &GaussLegendre, f: F, lo: f64, hi: f64, tol: f64) -> Result<Estimate>
where
    F: Fn(f64) -> f64,
{
    if lo == hi {
        return Ok(Estimate { value: 0.0, error: 0.0 });
    }
    let rough = rule.integrate_panels(&f, lo, hi, 4);
    let budget = (tol * rough.abs()).max(f64::MIN_POSITIVE);
    let whole = rule.integrate(&f, lo, hi);
    let mut state = Bisection { value: 0.0, error: 0.0, panels: 0, exhausted: false };
    bisect(rule, &f, lo, hi, whole, budget, 0, &mut state);
    let Bisection { value, error, exhausted, .. } = state;
    if exhausted && error > tol * value.abs() {
        return Err(Error::QuadratureNotConverged {
            achieved: error,
            target: tol * value.abs(),
        });
    }
    Ok(Estimate { value, error })
}

struct Bisection {
    value: f64,
    error: f64,
    panels: usize,
    exhausted: bool,
}

impl Bisection {
    fn accept(&mut self, value: f64, error: f64) {
        self.value += value;
        self.error += error;
        self.panels += 1;
    }
}

#[allow(clippy::too_many_arguments)]
fn bisect<F: Fn(f64) -> f64>(
    rule: &GaussLegendre,
    f: &F,
    lo: f64,
    hi: f64,
    whole: f64,
    budget: f64,
    depth: usize,
    state: &mut Bisection,
) {
    let mid = 0.5 * (lo + hi);
    let left = rule.integrate(f, lo, mid);
    let right = rule.integrate(f, mid, hi);
    let refined = left + right;
    let diff = (refined - whole).abs();
    if diff <= budget || diff <= 4.0 * f64::EPSILON * refined.abs() {
        state.accept(refined, diff);
        return;
    }
    if depth >= MAX_DEPTH || state.panels >= MAX_PANELS || mid <= lo || mid >= hi {
        state.exhausted = true;
        state.accept(refined, diff);
        return;
    }
    bisect(rule, f, lo, mid, left, 0.5 * budget, depth + 1, state);
    bisect(rule, f, mid, hi, right, 0.5 * budget, depth + 1, state);
}
