//! Central finite-difference gradient checking.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy)]
pub struct GradCheckOptions {
    /// Finite-difference step.
    pub h: f64,
    /// Coordinates are sampled at random when the point has more than this many entries.
    pub max_coords: usize,
    /// Magnitudes below this floor are compared absolutely rather than relatively.
    pub abs_floor: f64,
    pub seed: u64,
}

impl Default for GradCheckOptions {
    fn default() -> Self {
        GradCheckOptions {
            h: 1e-5,
            max_coords: 256,
            abs_floor: 1e-6,
            seed: 0,
        }
    }
}

/// `|a - n| / max(|a|, |n|, floor)`.
pub fn relative_error(analytic: f64, numeric: f64, floor: f64) -> f64 {
    let denom = analytic.abs().max(numeric.abs()).max(floor);
    (analytic - numeric).abs() / denom
}

/// Compare `analytic` against central differences of `f` around `point` and return the worst
/// relative error over the checked coordinates.
pub fn grad_check<F>(mut f: F, point: &[f64], analytic: &[f64], opts: GradCheckOptions) -> f64
where
    F: FnMut(&[f64]) -> f64,
{
    assert_eq!(point.len(), analytic.len(), "gradient length");
    assert!(opts.h > 0.0);
    let coords: Vec<usize> = if point.len() > opts.max_coords {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let mut c = sample(&mut rng, point.len(), opts.max_coords).into_vec();
        c.sort_unstable();
        c
    } else {
        (0..point.len()).collect()
    };

    let mut x = point.to_vec();
    let mut worst = 0.0f64;
    for i in coords {
        let orig = x[i];
        x[i] = orig + opts.h;
        let plus = f(&x);
        x[i] = orig - opts.h;
        let minus = f(&x);
        x[i] = orig;
        let numeric = (plus - minus) / (2.0 * opts.h);
        worst = worst.max(relative_error(analytic[i], numeric, opts.abs_floor));
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_is_exact() {
        let f = |x: &[f64]| x.iter().map(|v| v * v).sum::<f64>();
        let p = [0.5, -1.5, 2.0];
        let g: Vec<f64> = p.iter().map(|v| 2.0 * v).collect();
        assert!(grad_check(f, &p, &g, GradCheckOptions::default()) < 1e-9);
    }

    #[test]
    fn detects_wrong_gradient() {
        let f = |x: &[f64]| x[0] * 3.0;
        assert!(grad_check(f, &[1.0], &[2.0], GradCheckOptions::default()) > 0.3);
    }

    #[test]
    fn subsamples_large_points() {
        let mut calls = 0;
        let p = vec![0.0; 1000];
        let g = vec![1.0; 1000];
        let err = grad_check(
            |x: &[f64]| {
                calls += 1;
                x.iter().sum()
            },
            &p,
            &g,
            GradCheckOptions {
                max_coords: 10,
                ..Default::default()
            },
        );
        assert!(err < 1e-9);
        assert_eq!(calls, 20);
    }
}
