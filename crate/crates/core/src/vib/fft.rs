use core::f64::consts::PI;

use libm::{cos, sin};
use num_complex::Complex64;

pub fn is_power_of_two(n: usize) -> bool {
    n != 0 && n & (n - 1) == 0
}

/// Iterative radix-2 decimation-in-time FFT. `data.len()` must be a power of
/// two.
pub fn fft_in_place(data: &mut [Complex64]) {
    let n = data.len();
    assert!(is_power_of_two(n), "FFT length must be a power of two");
    let bits = n.trailing_zeros();
    if bits == 0 {
        return;
    }
    for i in 0..n {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if j > i {
            data.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let ang = -2.0 * PI / len as f64;
        let half = len / 2;
        for start in (0..n).step_by(len) {
            for k in 0..half {
                // direct twiddles keep rounding error from accumulating
                let w = Complex64::new(cos(ang * k as f64), sin(ang * k as f64));
                let a = data[start + k];
                let b = data[start + k + half] * w;
                data[start + k] = a + b;
                data[start + k + half] = a - b;
            }
        }
        len <<= 1;
    }
}
