//! Polynomials over GF(2) packed into machine words (bit i = coefficient of x^i).

/// Degree of a nonzero polynomial; `None` for the zero polynomial.
pub fn degree(p: u128) -> Option<u32> {
    if p == 0 {
        None
    } else {
        Some(127 - p.leading_zeros())
    }
}

/// Carry-less product.
pub fn clmul(a: u64, b: u64) -> u128 {
    let mut acc = 0u128;
    let mut b = b;
    let a = a as u128;
    let mut shift = 0;
    while b != 0 {
        let tz = b.trailing_zeros();
        shift += tz;
        acc ^= a << shift;
        b >>= tz;
        b >>= 1;
        shift += 1;
    }
    acc
}

/// `p mod modulus`; `modulus` must be nonzero.
pub fn rem(mut p: u128, modulus: u64) -> u64 {
    let md = degree(modulus as u128).expect("zero modulus");
    let m = modulus as u128;
    while let Some(d) = degree(p) {
        if d < md {
            break;
        }
        p ^= m << (d - md);
    }
    p as u64
}

pub fn mulmod(a: u64, b: u64, modulus: u64) -> u64 {
    rem(clmul(a, b), modulus)
}

pub fn powmod(base: u64, mut exp: u128, modulus: u64) -> u64 {
    let mut result = rem(1, modulus);
    let mut b = rem(base as u128, modulus);
    while exp > 0 {
        if exp & 1 == 1 {
            result = mulmod(result, b, modulus);
        }
        b = mulmod(b, b, modulus);
        exp >>= 1;
    }
    result
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = rem(a as u128, b);
        a = b;
        b = r;
    }
    a
}

/// Distinct prime divisors by trial division.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Rabin's irreducibility test: `f` of degree k is irreducible iff
/// x^(2^k) = x mod f and gcd(x^(2^(k/p)) - x, f) = 1 for every prime p | k.
pub fn is_irreducible(f: u64) -> bool {
    let Some(k) = degree(f as u128) else {
        return false;
    };
    if k == 0 {
        return false;
    }
    if k == 1 {
        return true;
    }
    // x^(2^i) mod f for i = 0..=k
    let mut frob = Vec::with_capacity(k as usize + 1);
    let mut cur = rem(0b10, f);
    frob.push(cur);
    for _ in 0..k {
        cur = mulmod(cur, cur, f);
        frob.push(cur);
    }
    if frob[k as usize] != rem(0b10, f) {
        return false;
    }
    prime_factors(k as u64).into_iter().all(|p| {
        let t = frob[(k as u64 / p) as usize] ^ 0b10;
        gcd(f, t) == 1
    })
}

/// Whether x has multiplicative order 2^k - 1 modulo the irreducible `f`.
pub fn x_is_primitive(f: u64) -> bool {
    let k = degree(f as u128).unwrap_or(0);
    if k == 0 {
        return false;
    }
    let order = (1u64 << k) - 1;
    if powmod(0b10, order as u128, f) != 1 {
        return false;
    }
    prime_factors(order)
        .into_iter()
        .all(|p| powmod(0b10, (order / p) as u128, f) != 1)
}

/// The numerically smallest degree-k irreducible polynomial for which x is
/// primitive, falling back to the smallest irreducible one.
pub fn standard_modulus(k: u32) -> u64 {
    assert!((1..=40).contains(&k), "degree {k} out of range");
    let lo = 1u64 << k;
    let hi = lo << 1;
    let mut first_irreducible = None;
    for f in lo..hi {
        if !is_irreducible(f) {
            continue;
        }
        if x_is_primitive(f) {
            return f;
        }
        first_irreducible.get_or_insert(f);
    }
    first_irreducible.expect("irreducible polynomials exist in every degree")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_irreducible(f: u64) -> bool {
        let d = degree(f as u128).unwrap();
        (2u64..(1 << d)).all(|g| {
            let dg = degree(g as u128).unwrap();
            dg == 0 || dg >= d || rem(f as u128, g) != 0
        })
    }

    #[test]
    fn rabin_matches_trial_division() {
        for f in 2u64..(1 << 11) {
            assert_eq!(is_irreducible(f), brute_irreducible(f), "f = {f:#b}");
        }
    }

    #[test]
    fn standard_moduli_small_degrees() {
        assert_eq!(standard_modulus(2), 0b111);
        assert_eq!(standard_modulus(3), 0b1011);
        assert_eq!(standard_modulus(4), 0b10011);
        // x^8+x^4+x^3+x+1 is irreducible but x is not primitive for it.
        assert_eq!(standard_modulus(8), 0x11d);
    }

    #[test]
    fn factors() {
        assert_eq!(prime_factors(255), vec![3, 5, 17]);
        assert_eq!(prime_factors(4095), vec![3, 5, 7, 13]);
        assert_eq!(prime_factors(1), Vec::<u64>::new());
    }
}
