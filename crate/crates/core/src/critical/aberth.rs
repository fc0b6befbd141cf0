use num_complex::Complex64 as C;

/// Maximum Aberth-Ehrlich sweeps.
pub const MAX_ITERATIONS: usize = 200;

fn horner(coeffs: &[C], z: C) -> (C, C) {
    let mut p = C::new(0.0, 0.0);
    let mut dp = C::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// All complex roots of `sum coeffs[k] z^k` by simultaneous Aberth-Ehrlich
/// iteration. Leading coefficients below `1e-14` of the largest are dropped.
/// Returns the roots and whether the iteration converged.
pub fn aberth_roots(coeffs: &[C]) -> (Vec<C>, bool) {
    let scale = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut deg = coeffs.len().saturating_sub(1);
    while deg > 0 && coeffs[deg].norm() <= 1e-14 * scale {
        deg -= 1;
    }
    if deg == 0 {
        return (vec![], true);
    }
    let a: Vec<C> = coeffs[..=deg].iter().map(|c| c / coeffs[deg]).collect();
    // Fujiwara-type radius for the initial circle
    let radius = (0..deg)
        .map(|k| a[k].norm().powf(1.0 / (deg - k) as f64))
        .fold(0.0, f64::max)
        .max(1e-3);
    let mut z: Vec<C> = (0..deg)
        .map(|k| C::from_polar(radius, 2.0 * std::f64::consts::PI * k as f64 / deg as f64 + 0.4))
        .collect();
    let mut converged = false;
    for _ in 0..MAX_ITERATIONS {
        let mut max_step: f64 = 0.0;
        for k in 0..deg {
            let (p, dp) = horner(&a, z[k]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let s: C = (0..deg).filter(|&j| j != k).map(|j| 1.0 / (z[k] - z[j])).sum();
            let step = ratio / (1.0 - ratio * s);
            if step.re.is_finite() && step.im.is_finite() {
                z[k] -= step;
                max_step = max_step.max(step.norm() / (1.0 + z[k].norm()));
            }
        }
        if max_step < 1e-15 {
            converged = true;
            break;
        }
    }
    (z, converged)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_roots() {
        // (z - 1)(z - 2)(z + 3) = z^3 - 7z + 6
        let c: Vec<C> = [6.0, -7.0, 0.0, 1.0].iter().map(|&x| C::new(x, 0.0)).collect();
        let (mut r, ok) = aberth_roots(&c);
        assert!(ok);
        r.sort_by(|a, b| a.re.total_cmp(&b.re));
        for (got, want) in r.iter().zip([-3.0, 1.0, 2.0]) {
            assert!((got - C::new(want, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn complex_roots_and_degree_drop() {
        let c: Vec<C> = [1.0, 0.0, 1.0, 0.0].iter().map(|&x| C::new(x, 0.0)).collect();
        let (r, _) = aberth_roots(&c);
        assert_eq!(r.len(), 2);
        for z in r {
            assert!((z * z + 1.0).norm() < 1e-12);
        }
    }
}
