// SPDX-License-Identifier: Apache-2.0

/// Jacobi symbol `(a/n)` for odd positive `n`.
fn jacobi(a: i64, n: i64) -> i32 {
    debug_assert!(n > 0 && n % 2 == 1);
    let mut a = a.rem_euclid(n);
    let mut n = n;
    let mut t = 1;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r = n % 8;
            if r == 3 || r == 5 {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            t = -t;
        }
        a %= n;
    }
    if n == 1 {
        t
    } else {
        0
    }
}

/// The extended Kronecker symbol `(a/b)`, defined for all integers.
///
/// `(a/2)` is read off `a mod 8` and `(a/-1)` off the sign of `a`.
pub fn kronecker(a: i64, b: i64) -> i32 {
    if b == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    let mut res = 1;
    let mut b = b;
    if b < 0 {
        b = -b;
        if a < 0 {
            res = -res;
        }
    }
    let v = b.trailing_zeros();
    if v > 0 {
        if a % 2 == 0 {
            return 0;
        }
        if v % 2 == 1 {
            let r = a.rem_euclid(8);
            if r == 3 || r == 5 {
                res = -res;
            }
        }
        b >>= v;
    }
    res * jacobi(a, b)
}
