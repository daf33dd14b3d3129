use std::f64::consts::PI;

use num_complex::Complex64;

/// Principal argument in `(-pi, pi]`.
pub fn principal_arg(z: Complex64) -> f64 {
    let a = z.im.atan2(z.re);
    if a <= -PI {
        PI
    } else {
        a
    }
}

fn small_int(x: f64) -> Option<i32> {
    (x.fract() == 0.0 && x.abs() <= 64.0).then_some(x as i32)
}

/// `z^a conj(z)^b = |z|^(a+b) e^{i(a-b) Arg z}` with `0^0 = 1`.
///
/// Defined for `a, b >= 0`. Integer exponents use repeated multiplication so
/// that `a = b` gives an exactly real result and polynomial identities hold to
/// rounding.
pub fn power_kernel(z: Complex64, a: f64, b: f64) -> Complex64 {
    debug_assert!(a >= 0.0 && b >= 0.0, "power_kernel needs nonnegative exponents");
    power_kernel_signed(z, a, b)
}

/// Same formula, allowing signed exponents with `a + b >= 0`.
///
/// At `z = 0` the value is 1 when `a + b = 0` and 0 when `a + b > 0`. With
/// `a + b < 0` the result at zero is infinite.
pub fn power_kernel_signed(z: Complex64, a: f64, b: f64) -> Complex64 {
    if a == 0.0 && b == 0.0 {
        return Complex64::new(1.0, 0.0);
    }
    let r = z.norm();
    if r == 0.0 {
        let s = a + b;
        return if s > 0.0 {
            Complex64::new(0.0, 0.0)
        } else if s == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(f64::INFINITY, 0.0)
        };
    }
    if a == b {
        return Complex64::new(real_pow(z.norm_sqr(), a), 0.0);
    }
    if let (Some(ai), Some(bi)) = (small_int(a), small_int(b)) {
        if ai >= 0 && bi >= 0 {
            return z.powi(ai) * z.conj().powi(bi);
        }
        let unit = z / r;
        return unit.powi(ai - bi) * r.powi(ai + bi);
    }
    let modulus = r.powf(a + b);
    let theta = (a - b) * principal_arg(z);
    Complex64::from_polar(modulus, theta)
}

fn real_pow(x: f64, e: f64) -> f64 {
    match small_int(e) {
        Some(i) => x.powi(i),
        None => x.powf(e),
    }
}
