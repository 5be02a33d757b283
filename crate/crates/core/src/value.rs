//! Signed log-scale reals.
//!
//! Partition functions overflow `f64` quickly as `N_f` grows, so most
//! routines report `ln|x|` together with the sign. A sign of zero marks an
//! exact zero (for example a Morris integral with a Gamma pole in the
//! denominator).

use std::fmt;
use std::ops::{Div, Mul};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogValue {
    pub ln_abs: f64,
    /// -1, 0 or +1.
    pub sign: i8,
}

impl LogValue {
    pub const ZERO: LogValue = LogValue { ln_abs: f64::NEG_INFINITY, sign: 0 };
    pub const ONE: LogValue = LogValue { ln_abs: 0.0, sign: 1 };

    pub fn new(ln_abs: f64, sign: i8) -> Self {
        if sign == 0 {
            Self::ZERO
        } else {
            LogValue { ln_abs, sign: sign.signum() }
        }
    }

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else {
            LogValue { ln_abs: x.abs().ln(), sign: if x > 0.0 { 1 } else { -1 } }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    pub fn value(&self) -> f64 {
        match self.sign {
            0 => 0.0,
            s => f64::from(s) * self.ln_abs.exp(),
        }
    }

    pub fn recip(self) -> Self {
        assert!(self.sign != 0, "reciprocal of an exact zero");
        LogValue { ln_abs: -self.ln_abs, sign: self.sign }
    }

    pub fn powi(self, n: i32) -> Self {
        if n == 0 {
            return Self::ONE;
        }
        if self.sign == 0 {
            return Self::ZERO;
        }
        let sign = if self.sign < 0 && n % 2 != 0 { -1 } else { 1 };
        LogValue { ln_abs: self.ln_abs * f64::from(n), sign }
    }

    /// Relative difference `|self/other - 1|`, computed in log space.
    pub fn rel_diff(&self, other: &LogValue) -> f64 {
        match (self.sign, other.sign) {
            (0, 0) => 0.0,
            (a, b) if a != b => f64::INFINITY,
            _ => (self.ln_abs - other.ln_abs).exp_m1().abs(),
        }
    }
}

impl Mul for LogValue {
    type Output = LogValue;
    fn mul(self, rhs: LogValue) -> LogValue {
        if self.sign == 0 || rhs.sign == 0 {
            return Self::ZERO;
        }
        LogValue { ln_abs: self.ln_abs + rhs.ln_abs, sign: self.sign * rhs.sign }
    }
}

impl Div for LogValue {
    type Output = LogValue;
    fn div(self, rhs: LogValue) -> LogValue {
        self * rhs.recip()
    }
}

impl fmt::Display for LogValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            0 => write!(f, "0"),
            s => write!(f, "{}exp({})", if s < 0 { "-" } else { "" }, self.ln_abs),
        }
    }
}
