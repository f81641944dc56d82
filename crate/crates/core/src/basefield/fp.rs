//! Scalar arithmetic in the prime field `F_p`, values kept in `0..p`.

#[inline]
pub fn add(a: u32, b: u32, p: u32) -> u32 {
    let s = a as u64 + b as u64;
    (if s >= p as u64 { s - p as u64 } else { s }) as u32
}

#[inline]
pub fn sub(a: u32, b: u32, p: u32) -> u32 {
    if a >= b {
        a - b
    } else {
        (a as u64 + p as u64 - b as u64) as u32
    }
}

#[inline]
pub fn neg(a: u32, p: u32) -> u32 {
    if a == 0 {
        0
    } else {
        p - a
    }
}

#[inline]
pub fn mul(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

pub fn pow(a: u32, mut e: u64, p: u32) -> u32 {
    let mut base = a % p;
    let mut acc = 1 % p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(acc, base, p);
        }
        base = mul(base, base, p);
        e >>= 1;
    }
    acc
}

/// Inverse of a nonzero residue (Fermat).
pub fn inv(a: u32, p: u32) -> u32 {
    debug_assert!(a % p != 0, "inverse of zero mod {p}");
    pow(a, (p - 2) as u64, p)
}

/// Reduce a signed integer into `0..p`.
pub fn from_i64(n: i64, p: u32) -> u32 {
    n.rem_euclid(p as i64) as u32
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverses_mod_small_primes() {
        for p in [2u32, 3, 5, 7, 101] {
            for a in 1..p {
                assert_eq!(mul(a, inv(a, p), p), 1);
            }
        }
    }

    #[test]
    fn signed_reduction() {
        assert_eq!(from_i64(-1, 3), 2);
        assert_eq!(from_i64(7, 5), 2);
        assert!(is_prime(2) && is_prime(3) && !is_prime(9) && !is_prime(1));
    }
}
