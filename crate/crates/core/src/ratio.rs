//! Exact comparisons against `r = (15 + √505) / 20`, the positive root of
//! `10 r² - 15 r - 7 = 0`. Every test clears denominators and squares once,
//! so no floating point is involved.

/// `r` to double precision, for display only.
pub const R_APPROX: f64 = 1.873_610_252_712_211_4;

/// `opt <= r · alg`.
pub fn within_ratio(opt: usize, alg: usize) -> bool {
    // 20 opt <= (15 + √505) alg  <=>  20 opt - 15 alg <= alg √505.
    let x = 20 * opt as i128 - 15 * alg as i128;
    let y = alg as i128;
    x <= 0 || x * x <= 505 * y * y
}

/// `a / b > (5/7) r`, that is `7 a > 5 r b`; true when `b = 0`.
pub fn exceeds_five_sevenths_r(a: usize, b: usize) -> bool {
    if b == 0 {
        return true;
    }
    // 7a > b (15 + √505) / 4  <=>  28a - 15b > b √505.
    let x = 28 * a as i128 - 15 * b as i128;
    let y = b as i128;
    x > 0 && x * x > 505 * y * y
}

/// `11 s >= 14 opt`.
pub fn is_critical_ratio(s: usize, opt: usize) -> bool {
    11 * s >= 14 * opt
}

/// `alg >= (4/5) opt` with integers.
pub fn at_least_four_fifths(alg: usize, opt: usize) -> bool {
    5 * alg >= 4 * opt
}
