//! Projected-gradient ascent with backtracking.

use super::simplex::project_raw;
use super::SolverConfig;
use crate::objective::Polynomial;

const ARMIJO: f64 = 1e-4;
const MIN_STEP: f64 = 1e-20;
const MAX_STEP: f64 = 1e8;

#[derive(Debug, Clone)]
pub(crate) struct Run {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// `‖P(x + ∇f) − x‖_∞`; zero exactly at first-order stationary points.
pub(crate) fn stationarity(x: &[f64], g: &[f64]) -> f64 {
    let moved: Vec<f64> = x.iter().zip(g).map(|(a, b)| a + b).collect();
    project_raw(&moved)
        .iter()
        .zip(x)
        .map(|(p, a)| (p - a).abs())
        .fold(0.0, f64::max)
}

/// Ascends from `x0` (projected first). The step starts at
/// `cfg.initial_step`, halves until the Armijo condition holds, and doubles
/// after each accepted step.
pub(crate) fn ascend(poly: &Polynomial, x0: &[f64], cfg: &SolverConfig) -> Run {
    ascend_masked(poly, x0, cfg, None)
}

/// Like [`ascend`] but confined to the face of coordinates where `face` is
/// true. Convergence is still judged on the whole simplex.
pub(crate) fn ascend_on_face(poly: &Polynomial, x0: &[f64], cfg: &SolverConfig, face: &[bool]) -> Run {
    ascend_masked(poly, x0, cfg, Some(face))
}

fn ascend_masked(poly: &Polynomial, x0: &[f64], cfg: &SolverConfig, face: Option<&[bool]>) -> Run {
    let pin = |v: &mut [f64]| {
        if let Some(face) = face {
            v.iter_mut().zip(face).filter(|(_, &on)| !on).for_each(|(a, _)| *a = -1e300);
        }
    };
    let face_stationarity = |x: &[f64], g: &[f64]| match face {
        Some(face) => {
            let gf: Vec<f64> = g.iter().zip(face).map(|(&gi, &on)| if on { gi } else { -1e300 }).collect();
            stationarity(x, &gf)
        }
        None => stationarity(x, g),
    };
    let mut start = x0.to_vec();
    pin(&mut start);
    let mut x = project_raw(&start);
    let mut f = poly.eval(&x);
    let mut g = poly.gradient(&x);
    let mut step = cfg.initial_step;
    let mut y = vec![0.0; x.len()];
    let mut trial = vec![0.0; x.len()];

    for it in 0..cfg.max_iters {
        if face_stationarity(&x, &g) <= cfg.tol_grad {
            return Run { x, value: f, iterations: it, converged: true };
        }
        let accepted = loop {
            for ((t, a), b) in trial.iter_mut().zip(&x).zip(&g) {
                *t = a + step * b;
            }
            pin(&mut trial);
            y.copy_from_slice(&project_raw(&trial));
            let ascent: f64 = y.iter().zip(&x).zip(&g).map(|((yi, xi), gi)| gi * (yi - xi)).sum();
            let fy = poly.eval(&y);
            if fy >= f + ARMIJO * ascent && fy >= f {
                break Some(fy);
            }
            step *= 0.5;
            if step < MIN_STEP {
                break None;
            }
        };
        match accepted {
            Some(fy) => {
                std::mem::swap(&mut x, &mut y);
                f = fy;
                poly.gradient_into(&x, &mut g);
                step = (step * 2.0).min(MAX_STEP);
            }
            None => {
                let converged = stationarity(&x, &g) <= cfg.tol_grad.sqrt();
                return Run { x, value: f, iterations: it + 1, converged };
            }
        }
    }
    let converged = stationarity(&x, &g) <= cfg.tol_grad;
    Run { x, value: f, iterations: cfg.max_iters, converged }
}
