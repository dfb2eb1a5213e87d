//! Small numerical kernels shared across the crate: adaptive quadrature,
//! tanh-sinh quadrature for endpoint singularities, bisection on monotone
//! functions and golden-section minimization.

/// Adaptive Simpson quadrature on `[a, b]` with absolute tolerance `tol`.
///
/// The integrand must be finite on the closed interval.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, 48)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
}

/// Tanh-sinh (double-exponential) quadrature on `(a, b)`.
///
/// Tolerates integrable singularities at the endpoints, which is what the
/// level-set measure integrals produce at local extrema of an eigenfunction.
pub fn tanh_sinh<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let c = 0.5 * (a + b);
    let r = 0.5 * (b - a);
    // x = c + r*tanh(pi/2 sinh t), weight = r * (pi/2) cosh t / cosh^2(pi/2 sinh t)
    let node = |t: f64| -> (f64, f64) {
        let s = std::f64::consts::FRAC_PI_2 * t.sinh();
        let x = c + r * s.tanh();
        let w = r * std::f64::consts::FRAC_PI_2 * t.cosh() / (s.cosh() * s.cosh());
        (x, w)
    };
    let eval = |h: f64| -> f64 {
        let t_max = 6.5;
        let (x0, w0) = node(0.0);
        let mut sum = w0 * f(x0);
        let mut t = h;
        while t <= t_max {
            for sign in [-1.0, 1.0] {
                let (x, w) = node(sign * t);
                if w.is_finite() && w > 0.0 && x > a.min(b) && x < a.max(b) {
                    let fx = f(x);
                    if fx.is_finite() {
                        sum += w * fx;
                    }
                }
            }
            t += h;
        }
        sum * h
    };
    let mut h = 0.5;
    let mut prev = eval(h);
    for level in 0..11 {
        h *= 0.5;
        let cur = eval(h);
        if level >= 2 && (cur - prev).abs() <= tol * (1.0 + cur.abs()) {
            return cur;
        }
        prev = cur;
    }
    prev
}

/// Bisection for a root of a monotone non-increasing function `g` on `[lo, hi]`.
///
/// Requires `g(lo) >= 0 >= g(hi)`. Returns the midpoint once the bracket is
/// shorter than `tol`.
pub fn bisect_decreasing<G: Fn(f64) -> f64>(g: &G, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    debug_assert!(lo <= hi);
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if g(mid) >= 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Golden-section minimization of a unimodal function on `[a, b]`.
///
/// Stops when the bracket is shorter than `xtol`; returns `(x_min, f_min)`.
pub fn golden_section_min<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, xtol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..200 {
        if (b - a).abs() <= xtol {
            break;
        }
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, f(x))
}

/// Root of a continuous function by bisection given a sign-changing bracket.
pub fn bisect_root<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, xtol: f64) -> f64 {
    let mut fa = f(a);
    for _ in 0..200 {
        if (b - a).abs() <= xtol {
            break;
        }
        let m = 0.5 * (a + b);
        let fm = f(m);
        if (fa <= 0.0) == (fm <= 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn simpson_integrates_polynomial_exactly() {
        let f = |x: f64| 3.0 * x * x;
        let v = adaptive_simpson(&f, 0.0, 2.0, 1e-12);
        assert!((v - 8.0).abs() < 1e-11);
    }

    #[test]
    fn simpson_integrates_cosine() {
        let v = adaptive_simpson(&|x: f64| x.cos(), 0.0, PI / 2.0, 1e-12);
        assert!((v - 1.0).abs() < 1e-11);
    }

    #[test]
    fn tanh_sinh_handles_inverse_sqrt_singularity() {
        // int_0^1 1/sqrt(x) dx = 2. Nodes carry absolute coordinates, so the
        // singular tail below one ulp of the interval scale is unreachable;
        // that caps the accuracy near sqrt(eps) for unbounded integrands.
        let v = tanh_sinh(&|x: f64| 1.0 / x.sqrt(), 0.0, 1.0, 1e-12);
        assert!((v - 2.0).abs() < 5e-8, "got {v}");
        // Integrands vanishing at the singular endpoint are exact to the
        // requested tolerance.
        let w = tanh_sinh(&|x: f64| x.sqrt(), 0.0, 1.0, 1e-12);
        assert!((w - 2.0 / 3.0).abs() < 1e-11, "got {w}");
    }

    #[test]
    fn tanh_sinh_smooth_case() {
        let v = tanh_sinh(&|x: f64| x.sin(), 0.0, PI, 1e-12);
        assert!((v - 2.0).abs() < 1e-10, "got {v}");
    }

    #[test]
    fn bisect_decreasing_finds_median_like_point() {
        // g(x) = 1 - x is nonincreasing with root at 1.
        let x = bisect_decreasing(&|x: f64| 1.0 - x, 0.0, 2.0, 1e-13);
        assert!((x - 1.0).abs() < 1e-12);
    }

    #[test]
    fn golden_section_finds_parabola_minimum() {
        let (x, _) = golden_section_min(&|x: f64| (x - 0.3).powi(2), -1.0, 1.0, 1e-12);
        assert!((x - 0.3).abs() < 1e-10);
    }

    #[test]
    fn bisect_root_on_sine() {
        let r = bisect_root(&|x: f64| x.sin(), 3.0, 3.3, 1e-13);
        assert!((r - PI).abs() < 1e-12);
    }
}
