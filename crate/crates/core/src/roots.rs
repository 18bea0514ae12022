//! Bracketing and bisection for monotone scalar functions.

/// Bisects `g(t) = target` on `[a, b]`, assuming `g(a) - target` and
/// `g(b) - target` have opposite signs or one of them is zero. Stops when
/// the bracket no longer shrinks in floating point. Without a sign change the
/// endpoint with the smaller residual is returned.
pub fn bisect<F>(mut g: F, mut a: f64, mut b: f64, target: f64) -> f64
where
    F: FnMut(f64) -> Option<f64>,
{
    let Some(ga) = g(a) else { return b };
    let sa = ga - target;
    if sa == 0.0 {
        return a;
    }
    if let Some(gb) = g(b) {
        let sb = gb - target;
        if sb == 0.0 || (sb < 0.0) == (sa < 0.0) {
            return if sb.abs() < sa.abs() { b } else { a };
        }
    }
    for _ in 0..2000 {
        let m = 0.5 * (a + b);
        if m <= a.min(b) || m >= a.max(b) {
            break;
        }
        let Some(gm) = g(m) else { break };
        let sm = gm - target;
        if sm == 0.0 {
            return m;
        }
        if (sm < 0.0) == (sa < 0.0) {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Points approaching the end `end` of an interval from the finite point
/// `mid`: geometric for finite ends, doubling for infinite ones.
fn approach(mid: f64, end: f64, k: i32) -> f64 {
    if end.is_finite() {
        end + (mid - end) * libm::exp2(-(k as f64))
    } else {
        mid + end.signum() * libm::exp2(k as f64)
    }
}

/// Finds `t` in `[lo, hi]` (ends may be infinite, and need not lie in the
/// domain of `g`) with
/// `g(t) = target` for continuous monotone `g`. Returns `None` when no sign
/// change is found within the probing budget.
pub fn solve_monotone<F>(mut g: F, lo: f64, hi: f64, target: f64) -> Option<f64>
where
    F: FnMut(f64) -> Option<f64>,
{
    let mid = match (lo.is_finite(), hi.is_finite()) {
        (true, true) => 0.5 * (lo + hi),
        (true, false) => lo + 1.0,
        (false, true) => hi - 1.0,
        (false, false) => 0.0,
    };
    let gm = g(mid)? - target;
    if gm == 0.0 {
        return Some(mid);
    }
    for k in 0..1100 {
        for end in [lo, hi] {
            if end.is_finite() && k > 1074 {
                continue;
            }
            if !end.is_finite() && k > 1000 {
                continue;
            }
            // k = 0 probes a finite end itself, where g may still be defined.
            let s = if k == 0 && end.is_finite() { end } else { approach(mid, end, k) };
            if s == end && k > 0 {
                continue;
            }
            if let Some(gs) = g(s) {
                let d = gs - target;
                if d == 0.0 {
                    return Some(s);
                }
                if (d < 0.0) != (gm < 0.0) {
                    return Some(bisect(&mut g, s, mid, target));
                }
            }
        }
    }
    None
}
