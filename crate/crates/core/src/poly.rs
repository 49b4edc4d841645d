//! Dense polynomial helpers over `Z_n`, coefficients stored constant term first.

/// Base-`base` digits of `value`, least significant first, padded to `len`.
pub(crate) fn to_digits(mut value: u32, base: u32, len: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(len);
    for _ in 0..len {
        out.push(value % base);
        value /= base;
    }
    out
}

pub(crate) fn from_digits(digits: &[u32], base: u32) -> u32 {
    digits.iter().rev().fold(0, |acc, &d| acc * base + d)
}

/// Product of two residues modulo a monic `modulus` of degree `m`, over `Z_n`.
///
/// `a` and `b` have length `m`; the result has length `m`.
pub(crate) fn mul_reduce(a: &[u32], b: &[u32], modulus: &[u32], n: u32) -> Vec<u32> {
    let m = modulus.len() - 1;
    let mut prod = vec![0u64; 2 * m.max(1)];
    let n64 = u64::from(n);
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + u64::from(x) * u64::from(y)) % n64;
        }
    }
    for deg in (m..prod.len()).rev() {
        let c = prod[deg];
        if c == 0 {
            continue;
        }
        for (k, &mk) in modulus.iter().enumerate() {
            let slot = deg - m + k;
            prod[slot] = (prod[slot] + (n64 - c) * u64::from(mk)) % n64;
        }
    }
    prod.truncate(m);
    prod.into_iter().map(|c| c as u32).collect()
}

/// Remainder of `dividend` by a monic `divisor` over `Z_n`, degree-trimmed.
pub(crate) fn rem(dividend: &[u32], divisor: &[u32], n: u32) -> Vec<u32> {
    let d = divisor.len() - 1;
    let mut r: Vec<u64> = dividend.iter().map(|&c| u64::from(c % n)).collect();
    let n64 = u64::from(n);
    while r.len() > d {
        let top = r.len() - 1;
        let c = r[top];
        if c != 0 {
            for (k, &dk) in divisor.iter().enumerate() {
                let slot = top - d + k;
                r[slot] = (r[slot] + (n64 - c) * u64::from(dk)) % n64;
            }
        }
        r.pop();
    }
    while r.last() == Some(&0) {
        r.pop();
    }
    r.into_iter().map(|c| c as u32).collect()
}

/// Product of two polynomials over `Z_n`, no reduction.
pub(crate) fn mul_full(a: &[u32], b: &[u32], n: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + u64::from(x) * u64::from(y)) % u64::from(n);
        }
    }
    out.into_iter().map(|c| c as u32).collect()
}

pub(crate) fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while u64::from(d) * u64::from(d) <= u64::from(n) {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digits_round_trip() {
        assert_eq!(to_digits(11, 3, 3), vec![2, 0, 1]);
        assert_eq!(from_digits(&[2, 0, 1], 3), 11);
    }

    #[test]
    fn reduce_mod_x2_plus_1_over_z3() {
        // (x + 1)^2 = 2x mod (x^2 + 1, 3)
        let m = [1, 0, 1];
        assert_eq!(mul_reduce(&[1, 1], &[1, 1], &m, 3), vec![0, 2]);
    }

    #[test]
    fn remainder_detects_factor() {
        // x^3 - 1 = (x - 1)(x^2 + x + 1) over Z_4
        assert!(rem(&[3, 0, 0, 1], &[1, 1, 1], 4).is_empty());
        assert!(!rem(&[3, 0, 0, 1], &[1, 0, 1], 4).is_empty());
    }

    #[test]
    fn small_primes() {
        let primes: Vec<u32> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(primes, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert_eq!(lcm(3, 26), 78);
    }
}
