//! Small numeric helpers shared by the other modules.

use core::f64::consts::{PI, TAU};
#[allow(unused_imports)]
use num_traits::Float;

pub type Complex = num_complex::Complex64;

#[inline]
pub fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

#[inline]
pub fn unit(theta: f64) -> Complex {
    Complex::new(theta.cos(), theta.sin())
}

/// Argument in `[0, 2π)`. Every module that compares angles bitwise goes
/// through this one function.
#[inline]
pub fn arg_normalized(z: Complex) -> f64 {
    normalize_angle(z.im.atan2(z.re))
}

#[inline]
pub fn normalize_angle(theta: f64) -> f64 {
    let mut t = theta % TAU;
    if t < 0.0 {
        t += TAU;
    }
    if t >= TAU {
        t -= TAU;
    }
    t
}

/// Wrap into `(-π, π]`.
#[inline]
pub fn wrap_pi(theta: f64) -> f64 {
    let mut t = normalize_angle(theta);
    if t > PI {
        t -= TAU;
    }
    t
}

#[inline]
pub fn log_plus(x: f64) -> f64 {
    if x > 0.0 {
        x
    } else {
        0.0
    }
}

#[inline]
pub fn log_minus(x: f64) -> f64 {
    if x < 0.0 {
        -x
    } else {
        0.0
    }
}

#[inline]
pub fn pos(x: f64) -> f64 {
    if x > 0.0 {
        x
    } else {
        0.0
    }
}

/// `x^e` with the convention `0^0 = 1`.
#[inline]
pub fn pow0(x: f64, e: f64) -> f64 {
    if e == 0.0 {
        1.0
    } else {
        x.powf(e)
    }
}

/// Neumaier compensated sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct Sum {
    s: f64,
    c: f64,
}

impl Sum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.s + x;
        if self.s.abs() >= x.abs() {
            self.c += (self.s - t) + x;
        } else {
            self.c += (x - t) + self.s;
        }
        self.s = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.s + self.c
    }
}

impl core::iter::FromIterator<f64> for Sum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = Sum::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

pub fn sum<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    iter.into_iter().collect::<Sum>().value()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angles_normalize() {
        assert_eq!(normalize_angle(-0.5 * PI), 1.5 * PI);
        assert_eq!(normalize_angle(0.0), 0.0);
        assert!((wrap_pi(1.5 * PI) + 0.5 * PI).abs() < 1e-15);
        assert!(arg_normalized(c(-1.0, -0.0)) < TAU);
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let v = [1e16, 1.0, -1e16, 1.0];
        assert_eq!(sum(v), 2.0);
    }
}
