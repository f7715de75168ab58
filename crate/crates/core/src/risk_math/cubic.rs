//! Real roots of polynomials of degree at most three.
//!
//! Closed form (Cardano for one real root, the trigonometric form for three),
//! followed by a few Newton steps on the original coefficients. Leading
//! coefficients that are negligible relative to the largest coefficient drop
//! the degree, so `(1 - OR)^2 D^3 + ...` at `OR = 1` becomes a linear solve.

use std::f64::consts::PI;

/// Coefficients below this fraction of the largest one are treated as zero.
pub const DEGENERATE_REL: f64 = 1e-12;

const NEWTON_STEPS: usize = 8;

/// Evaluate `a3 x^3 + a2 x^2 + a1 x + a0` by Horner's rule.
pub fn eval(coeffs: [f64; 4], x: f64) -> f64 {
    let [a3, a2, a1, a0] = coeffs;
    ((a3 * x + a2) * x + a1) * x + a0
}

fn eval_deriv(coeffs: [f64; 4], x: f64) -> f64 {
    let [a3, a2, a1, _] = coeffs;
    (3.0 * a3 * x + 2.0 * a2) * x + a1
}

/// All real roots of `a3 x^3 + a2 x^2 + a1 x + a0`, sorted ascending, with
/// coincident roots reported once. An identically zero polynomial yields no
/// roots.
pub fn real_roots(a3: f64, a2: f64, a1: f64, a0: f64) -> Vec<f64> {
    let coeffs = [a3, a2, a1, a0];
    let scale = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    if scale == 0.0 || !scale.is_finite() {
        return Vec::new();
    }
    let tiny = DEGENERATE_REL * scale;

    let mut roots = if a3.abs() > tiny {
        cubic_closed_form(a2 / a3, a1 / a3, a0 / a3)
    } else if a2.abs() > tiny {
        quadratic(a2, a1, a0)
    } else if a1.abs() > tiny {
        vec![-a0 / a1]
    } else {
        Vec::new()
    };

    for r in roots.iter_mut() {
        *r = polish(coeffs, *r);
    }
    roots.retain(|r| r.is_finite());
    roots.sort_by(|x, y| x.total_cmp(y));
    roots.dedup_by(|x, y| (*x - *y).abs() <= 1e-12 * x.abs().max(y.abs()).max(1.0));
    roots
}

fn polish(coeffs: [f64; 4], mut x: f64) -> f64 {
    let mut fx = eval(coeffs, x);
    for _ in 0..NEWTON_STEPS {
        if fx == 0.0 {
            break;
        }
        let dfx = eval_deriv(coeffs, x);
        if dfx == 0.0 || !dfx.is_finite() {
            break;
        }
        let next = x - fx / dfx;
        let fnext = eval(coeffs, next);
        if !(fnext.abs() < fx.abs()) {
            break;
        }
        x = next;
        fx = fnext;
    }
    x
}

fn quadratic(a: f64, b: f64, c: f64) -> Vec<f64> {
    let disc = b * b - 4.0 * a * c;
    if disc < 0.0 {
        return Vec::new();
    }
    if disc == 0.0 {
        return vec![-b / (2.0 * a)];
    }
    // q has the sign of b so the two roots never come from a difference of
    // nearly equal numbers.
    let q = -0.5 * (b + b.signum_or_one() * disc.sqrt());
    let mut out = vec![q / a];
    if q != 0.0 {
        out.push(c / q);
    }
    out
}

trait SignumOrOne {
    fn signum_or_one(self) -> f64;
}

impl SignumOrOne for f64 {
    fn signum_or_one(self) -> f64 {
        if self < 0.0 {
            -1.0
        } else {
            1.0
        }
    }
}

/// Roots of the monic cubic `x^3 + b x^2 + c x + d`.
fn cubic_closed_form(b: f64, c: f64, d: f64) -> Vec<f64> {
    let shift = b / 3.0;
    // depressed cubic y^3 + p y + q with x = y - b/3
    let p = c - b * b / 3.0;
    let q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;

    let half_q = q / 2.0;
    let third_p = p / 3.0;
    let disc = half_q * half_q + third_p * third_p * third_p;

    if p == 0.0 && q == 0.0 {
        return vec![-shift];
    }

    if disc > 0.0 {
        let sq = disc.sqrt();
        let u = (-half_q - half_q.signum_or_one() * sq).cbrt();
        let y = if u != 0.0 { u - third_p / u } else { 0.0 };
        vec![y - shift]
    } else {
        let r = (-third_p).sqrt();
        let cos_arg = (-half_q / (r * r * r)).clamp(-1.0, 1.0);
        let phi = cos_arg.acos();
        (0..3)
            .map(|k| 2.0 * r * ((phi - 2.0 * PI * k as f64) / 3.0).cos() - shift)
            .collect()
    }
}
