use std::f64::consts::E;

use crate::error::{Error, Result};

const MAX_ITER: usize = 64;

/// Principal branch `W₀(x)` of the Lambert function, `w·e^w = x`, `w ≥ −1`.
pub fn lambert_w0(x: f64) -> Result<f64> {
    let branch = -1.0 / E;
    if x.is_nan() || x < branch {
        return Err(Error::domain("lambert_w0", format!("x must be >= -1/e, got {x}")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x == f64::INFINITY {
        return Ok(f64::INFINITY);
    }
    // distance to the branch point, computed without cancellation in 1 + e·x
    let q = E.mul_add(x, 1.0);
    if q <= 0.0 {
        return Ok(-1.0);
    }
    let mut w = if q < 0.3 {
        let p = (2.0 * q).sqrt();
        -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p
    } else if x < 3.0 {
        let l = x.ln_1p();
        l * (1.0 - l.ln_1p() / (2.0 + l))
    } else {
        let l1 = x.ln();
        let l2 = l1.ln();
        l1 - l2 + l2 / l1
    };

    for _ in 0..MAX_ITER {
        let ew = w.exp();
        let f = w * ew - x;
        let wp1 = w + 1.0;
        if wp1 == 0.0 {
            break;
        }
        let denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        let step = f / denom;
        w -= step;
        if w < -1.0 {
            w = -1.0;
        }
        if step.abs() <= 4.0 * f64::EPSILON * w.abs().max(1.0) {
            break;
        }
    }
    Ok(w)
}
