//! Bessel functions of the first kind.
//!
//! `bessel_j` backs the closed-form oracles in the test suites (ballistic
//! walk profiles go as J_r(2Jt)); it is deliberately independent of every
//! propagation path in this crate. Miller's backward recurrence with
//! normalization J_0 + 2·Σ J_2k = 1, accurate to ~1e-13 for the moderate
//! arguments used here.

/// J_n(x) for integer order.
pub fn bessel_j(order: i64, x: f64) -> f64 {
    if x < 0.0 {
        let v = bessel_j(order, -x);
        return if order % 2 == 0 { v } else { -v };
    }
    if order < 0 {
        let v = bessel_j(-order, x);
        return if order % 2 == 0 { v } else { -v };
    }
    let n = order as usize;
    if x == 0.0 {
        return if n == 0 { 1.0 } else { 0.0 };
    }

    // start high enough above both order and argument for the recurrence to
    // have converged onto the minimal solution by the time it reaches n
    let start = (n.max(x.ceil() as usize) + 16 + 2 * (x.sqrt().ceil() as usize)) | 1;
    let mut jp = 0.0_f64; // J_{k+1}
    let mut jc = 1e-300_f64; // J_k, arbitrary small seed
    let mut result = 0.0;
    let mut norm = 0.0;

    for k in (1..=start).rev() {
        let jm = (2.0 * k as f64 / x) * jc - jp;
        jp = jc;
        jc = jm;
        if k - 1 == n {
            result = jc;
        }
        if (k - 1) % 2 == 0 {
            norm += if k - 1 == 0 { jc } else { 2.0 * jc };
        }
        if jc.abs() > 1e250 {
            jc *= 1e-250;
            jp *= 1e-250;
            result *= 1e-250;
            norm *= 1e-250;
        }
    }
    result / norm
}
