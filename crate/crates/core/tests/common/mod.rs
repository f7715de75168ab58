//! Independent reference implementations used by the integration tests.
//! None of these call into the crate's solvers.

#![allow(dead_code)]

/// Expected genotype totals `(EE, Ee, ee)` under Hardy-Weinberg.
pub fn totals(f: f64, n: f64) -> (f64, f64, f64) {
    (n * f * f, n * 2.0 * f * (1.0 - f), n * (1.0 - f) * (1.0 - f))
}

/// Cells `[A, B, C, D, E, G]` (EE/Ee/ee by diseased/healthy) found by
/// stepping the diseased EE count `A = 1, 2, ...` and stopping at the first
/// integer where the EE-vs-ee odds ratio `A G / (B E)` reaches `OR^2`. At
/// each `A` the Ee cells follow from the Ee-vs-ee constraint, a quadratic in
/// `C`.
pub fn increment_a(f: f64, p: f64, or: f64, n: f64) -> [f64; 6] {
    let (t1, t2, t3) = totals(f, n);
    let t4 = n * p;
    let cells_at = |a: f64| -> Option<[f64; 6]> {
        let b = t1 - a;
        let s = t4 - a;
        let lo = (s - t3).max(0.0);
        let hi = t2.min(s);
        if b <= 0.0 || hi < lo {
            return None;
        }
        // (1 - OR) C^2 + (t3 - S + OR t2 + OR S) C - OR t2 S = 0
        let qa = 1.0 - or;
        let qb = t3 - s + or * t2 + or * s;
        let qc = -or * t2 * s;
        let c = if qa.abs() < 1e-14 {
            -qc / qb
        } else {
            let disc = (qb * qb - 4.0 * qa * qc).max(0.0).sqrt();
            let roots = [(-qb + disc) / (2.0 * qa), (-qb - disc) / (2.0 * qa)];
            let tol = 1e-9 * n;
            *roots.iter().find(|&&c| c >= lo - tol && c <= hi + tol)?
        };
        let e = s - c;
        Some([a, b, c, t2 - c, e, t3 - e])
    };
    let mut a = 1.0;
    let mut last = None;
    while a < t1.min(t4) {
        if let Some(cells) = cells_at(a) {
            let [a_, b, _, _, e, g] = cells;
            last = Some(cells);
            if a_ * g / (b * e) >= or * or {
                return cells;
            }
        }
        a += 1.0;
    }
    last.expect("increment-A scan found no valid table")
}

/// Cells `[A, B, C, D, E, G]` by bisection on the healthy ee odds `w`
/// (diseased/healthy among ee): the other genotypes have odds `OR w` and
/// `OR^2 w`, and `w` is chosen so the diseased total is `n p`.
pub fn bisect_w(f: f64, p: f64, or: f64, n: f64) -> [f64; 6] {
    let (t1, t2, t3) = totals(f, n);
    let diseased = |w: f64| {
        let share = |odds: f64| odds / (1.0 + odds);
        (t1 * share(or * or * w), t2 * share(or * w), t3 * share(w))
    };
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while {
        let (a, c, e) = diseased(hi);
        a + c + e < n * p
    } {
        hi *= 2.0;
    }
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        let (a, c, e) = diseased(mid);
        if a + c + e < n * p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (a, c, e) = diseased(0.5 * (lo + hi));
    [a, t1 - a, c, t2 - c, e, t3 - e]
}

/// Mann-Whitney AUC by comparing every diseased/non-diseased pair.
pub fn brute_auc(scores: &[f64], truth: &[u8]) -> f64 {
    let mut twice_wins = 0u64;
    let mut pairs = 0u64;
    for (i, &si) in scores.iter().enumerate() {
        if truth[i] != 1 {
            continue;
        }
        for (j, &sj) in scores.iter().enumerate() {
            if truth[j] != 0 {
                continue;
            }
            pairs += 1;
            twice_wins += match si.partial_cmp(&sj).unwrap() {
                std::cmp::Ordering::Greater => 2,
                std::cmp::Ordering::Equal => 1,
                std::cmp::Ordering::Less => 0,
            };
        }
    }
    twice_wins as f64 / (2 * pairs) as f64
}

/// Logistic log-likelihood of `(intercept, beta...)` on rows `x`.
pub fn log_likelihood(params: &[f64], x: &[Vec<f64>], y: &[f64]) -> f64 {
    x.iter()
        .zip(y)
        .map(|(row, &yi)| {
            let eta = params[0] + row.iter().zip(&params[1..]).map(|(a, b)| a * b).sum::<f64>();
            // log(1 + e^eta), stable
            let softplus = if eta > 0.0 { eta + (-eta).exp().ln_1p() } else { eta.exp().ln_1p() };
            yi * eta - softplus
        })
        .sum()
}

/// Maximize the logistic likelihood by cyclic coordinate golden-section
/// search, each coordinate bracketed in `[-bound, bound]`.
pub fn golden_section_mle(x: &[Vec<f64>], y: &[f64], bound: f64) -> Vec<f64> {
    let k = x[0].len() + 1;
    let mut params = vec![0.0; k];
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    for _sweep in 0..5000 {
        let mut moved = 0.0f64;
        for j in 0..k {
            let objective = |v: f64, params: &mut Vec<f64>| {
                let old = params[j];
                params[j] = v;
                let ll = log_likelihood(params, x, y);
                params[j] = old;
                ll
            };
            let (mut lo, mut hi) = (params[j] - bound.min(4.0), params[j] + bound.min(4.0));
            lo = lo.max(-bound);
            hi = hi.min(bound);
            let mut c = hi - ratio * (hi - lo);
            let mut d = lo + ratio * (hi - lo);
            let mut fc = objective(c, &mut params);
            let mut fd = objective(d, &mut params);
            while hi - lo > 1e-12 {
                if fc > fd {
                    hi = d;
                    d = c;
                    fd = fc;
                    c = hi - ratio * (hi - lo);
                    fc = objective(c, &mut params);
                } else {
                    lo = c;
                    c = d;
                    fc = fd;
                    d = lo + ratio * (hi - lo);
                    fd = objective(d, &mut params);
                }
            }
            let best = 0.5 * (lo + hi);
            moved = moved.max((best - params[j]).abs());
            params[j] = best;
        }
        if moved < 1e-10 {
            break;
        }
    }
    params
}
