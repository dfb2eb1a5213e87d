//! p-trigonometric functions: pi_p and sin_p, built from the defining
//! integral F(x) = int_0^x (1 - s^p)^(-1/p) ds whose inverse on [0, pi_p/2]
//! is sin_p, extended to the real line by reflection and periodicity.

use super::PExponent;
use crate::numeric::adaptive_simpson;

/// Closed form pi_p = 2 pi / (p sin(pi/p)): the smallest positive root of
/// sin_p.
pub fn pi_p(p: PExponent) -> f64 {
    let pv = p.get();
    2.0 * std::f64::consts::PI / (pv * (std::f64::consts::PI / pv).sin())
}

/// pi_p recomputed as 2 int_0^1 (1 - s^p)^(-1/p) ds, independently of the
/// closed form. The integrable endpoint singularity is removed by the
/// substitution u = t^{p'} on the tail.
pub fn pi_p_from_integral(p: PExponent) -> f64 {
    2.0 * (defining_integral_smooth(p, SPLIT) + tail_integral(p, SPLIT))
}

const SPLIT: f64 = 0.9;

fn integrand(p: f64, s: f64) -> f64 {
    (1.0 - s.powf(p)).powf(-1.0 / p)
}

/// F on [0, x] for x away from the singular endpoint.
fn defining_integral_smooth(p: PExponent, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let pv = p.get();
    adaptive_simpson(&|s| integrand(pv, s), 0.0, x, 1e-13)
}

/// int_x^1 (1 - s^p)^(-1/p) ds via u = 1 - s followed by u = t^{p'}, which
/// turns the u^(-1/p) singularity into a smooth integrand.
fn tail_integral(p: PExponent, x: f64) -> f64 {
    let pv = p.get();
    let q = p.dual();
    let upper = (1.0 - x).powf(1.0 / q);
    if upper <= 0.0 {
        return 0.0;
    }
    // g(u) = (1 - (1-u)^p) / (p u), smooth with g(0) = 1.
    let g = |u: f64| -> f64 {
        if u < 1e-14 {
            1.0
        } else {
            -f64::exp_m1(pv * f64::ln_1p(-u)) / (pv * u)
        }
    };
    let f = |t: f64| g(t.powf(q)).powf(-1.0 / pv);
    q * pv.powf(-1.0 / pv) * adaptive_simpson(&f, 0.0, upper, 1e-13)
}

/// Value of the defining integral F at any x in [0, 1].
pub fn defining_integral(p: PExponent, x: f64) -> f64 {
    assert!((0.0..=1.0).contains(&x));
    if x <= SPLIT {
        defining_integral_smooth(p, x)
    } else {
        0.5 * pi_p(p) - tail_integral(p, x)
    }
}

/// Tabulated sin_p on [0, pi_p/2] with Newton refinement against the
/// defining integral at evaluation time.
#[derive(Debug, Clone)]
pub struct PTrigTable {
    p: PExponent,
    pi_p: f64,
    /// Quarter-period sample of (t, x = sin_p(t)) pairs, strictly increasing.
    nodes: Vec<(f64, f64)>,
}

impl PTrigTable {
    pub fn new(p: PExponent) -> PTrigTable {
        let pi_val = pi_p(p);
        let quarter = 0.5 * pi_val;
        let n = 96;
        let mut nodes = Vec::with_capacity(n + 1);
        let mut x = 0.0f64;
        for i in 0..=n {
            let t = quarter * i as f64 / n as f64;
            x = invert_from_seed(p, t, x.max(t / quarter * 0.5));
            nodes.push((t, x));
        }
        nodes.last_mut().expect("nonempty").1 = 1.0;
        debug_assert!(nodes.windows(2).all(|w| w[0].1 < w[1].1 + 1e-15));
        PTrigTable { p, pi_p: pi_val, nodes }
    }

    pub fn exponent(&self) -> PExponent {
        self.p
    }

    pub fn pi_p(&self) -> f64 {
        self.pi_p
    }

    /// sin_p(x) for any real x.
    pub fn sin(&self, x: f64) -> f64 {
        let period = 2.0 * self.pi_p;
        let y = x.rem_euclid(period);
        let quarter = 0.5 * self.pi_p;
        if y <= quarter {
            self.core(y)
        } else if y <= self.pi_p {
            self.core(self.pi_p - y)
        } else if y <= self.pi_p + quarter {
            -self.core(y - self.pi_p)
        } else {
            -self.core(period - y)
        }
    }

    /// Inverse of the defining integral on [0, pi_p/2].
    fn core(&self, t: f64) -> f64 {
        debug_assert!((-1e-12..=0.5 * self.pi_p + 1e-12).contains(&t));
        let t = t.clamp(0.0, 0.5 * self.pi_p);
        if t == 0.0 {
            return 0.0;
        }
        if (t - 0.5 * self.pi_p).abs() < 1e-14 {
            return 1.0;
        }
        let quarter = 0.5 * self.pi_p;
        let pos = (t / quarter * (self.nodes.len() - 1) as f64).floor() as usize;
        let pos = pos.min(self.nodes.len() - 2);
        let (t0, x0) = self.nodes[pos];
        let (t1, x1) = self.nodes[pos + 1];
        let seed = if t1 > t0 { x0 + (x1 - x0) * (t - t0) / (t1 - t0) } else { x0 };
        invert_from_seed(self.p, t, seed)
    }
}

/// Solve F(x) = t by safeguarded Newton (F' = (1 - x^p)^(-1/p)).
fn invert_from_seed(p: PExponent, t: f64, seed: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    let pv = p.get();
    let mut x = seed.clamp(0.0, 1.0 - 1e-15);
    let mut lo = 0.0f64;
    let mut hi = 1.0f64;
    for _ in 0..60 {
        let fx = defining_integral(p, x) - t;
        if fx.abs() <= 1e-13 {
            return x;
        }
        if fx > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        let fprime = (1.0 - x.powf(pv)).powf(-1.0 / pv);
        let mut next = x - fx / fprime;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - x).abs() <= 1e-16 {
            return next;
        }
        x = next;
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn pexp(p: f64) -> PExponent {
        PExponent::new(p).unwrap()
    }

    #[test]
    fn pi_2_is_pi_exactly() {
        assert_eq!(pi_p(pexp(2.0)), PI);
    }

    #[test]
    fn pi_3_closed_form() {
        // 2 pi / (3 sin(pi/3)) = 4 pi / (3 sqrt(3))
        let expected = 4.0 * PI / (3.0 * 3.0f64.sqrt());
        assert!((pi_p(pexp(3.0)) - expected).abs() < 1e-15);
        assert!((pi_p(pexp(3.0)) - 2.4184).abs() < 1e-4);
    }

    #[test]
    fn pi_p_decreases_to_two() {
        let p10 = pi_p(pexp(10.0));
        let p100 = pi_p(pexp(100.0));
        assert!((p10 - 2.033).abs() < 2e-3);
        assert!((p100 - 2.0003).abs() < 1e-3);
        assert!(p10 > p100 && p100 > 2.0);
    }

    #[test]
    fn integral_cross_check() {
        for &p in &[1.5, 2.0, 3.0, 4.0] {
            let pe = pexp(p);
            let closed = pi_p(pe);
            let quad = pi_p_from_integral(pe);
            assert!((closed - quad).abs() < 1e-10, "p={p}: {closed} vs {quad}");
        }
    }

    #[test]
    fn sin_2_matches_sine() {
        let table = PTrigTable::new(pexp(2.0));
        let mut worst = 0.0f64;
        for i in 0..=1000 {
            let x = 2.0 * PI * i as f64 / 1000.0;
            worst = worst.max((table.sin(x) - x.sin()).abs());
        }
        assert!(worst <= 1e-10, "max deviation {worst}");
    }

    #[test]
    fn quarter_and_half_period_values() {
        for &p in &[1.5, 2.0, 3.0, 4.0] {
            let table = PTrigTable::new(pexp(p));
            assert!((table.sin(0.5 * table.pi_p()) - 1.0).abs() < 1e-12, "p={p}");
            assert!(table.sin(table.pi_p()).abs() < 1e-12, "p={p}");
            assert!(table.sin(0.0).abs() < 1e-15);
        }
    }

    #[test]
    fn defining_relation_holds_on_quarter_period() {
        for &p in &[1.5, 2.0, 3.0] {
            let pe = pexp(p);
            let table = PTrigTable::new(pe);
            for i in 1..40 {
                let x = 0.5 * table.pi_p() * i as f64 / 40.0;
                let s = table.sin(x);
                let back = defining_integral(pe, s);
                assert!((back - x).abs() <= 1e-9, "p={p} x={x}: {back}");
            }
        }
    }
}
