//! Polynomial helpers over the prime field Z/p, used before a [`Field`](super::Field)
//! exists (modulus validation and default-modulus search).

pub(crate) fn trim(v: &mut Vec<u32>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn inv_mod(a: u32, p: u32) -> u32 {
    pow_mod(a, p - 2, p)
}

pub(crate) fn pow_mod(a: u32, mut e: u32, p: u32) -> u32 {
    let p64 = p as u64;
    let mut acc = 1u64;
    let mut base = (a % p) as u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p64;
        }
        base = base * base % p64;
        e >>= 1;
    }
    acc as u32
}

/// Remainder of `a` modulo the monic polynomial `f`.
fn rem_monic(mut a: Vec<u32>, f: &[u32], p: u32) -> Vec<u32> {
    let df = f.len() - 1;
    trim(&mut a);
    while a.len() > df {
        let lead = *a.last().unwrap();
        let shift = a.len() - 1 - df;
        if lead != 0 {
            for (i, &c) in f.iter().enumerate() {
                let t = (lead as u64 * c as u64 % p as u64) as u32;
                a[shift + i] = (a[shift + i] + p - t) % p;
            }
        }
        a.pop();
        trim(&mut a);
    }
    a
}

fn mul_mod(a: &[u32], b: &[u32], f: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    rem_monic(out.into_iter().map(|c| c as u32).collect(), f, p)
}

fn pow_poly_mod(base: &[u32], mut e: u64, f: &[u32], p: u32) -> Vec<u32> {
    let mut acc = rem_monic(vec![1], f, p);
    let mut b = rem_monic(base.to_vec(), f, p);
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(&acc, &b, f, p);
        }
        b = mul_mod(&b, &b, f, p);
        e >>= 1;
    }
    acc
}

fn sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let n = a.len().max(b.len());
    let mut out: Vec<u32> = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(&mut out);
    out
}

/// Monic gcd over Z/p.
fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let lead_inv = inv_mod(*y.last().unwrap(), p);
        let monic: Vec<u32> = y
            .iter()
            .map(|&c| (c as u64 * lead_inv as u64 % p as u64) as u32)
            .collect();
        let r = rem_monic(x, &monic, p);
        x = monic;
        y = r;
    }
    x
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub(crate) fn is_prime(n: u64) -> bool {
    n >= 2 && prime_factors(n) == [n]
}

/// Rabin's irreducibility test for a monic `f` of degree h over Z/p.
pub(crate) fn is_irreducible(f: &[u32], p: u32) -> bool {
    let h = f.len() - 1;
    if h == 0 {
        return false;
    }
    if h == 1 {
        return true;
    }
    let x = vec![0, 1];
    // frob[i] = x^(p^i) mod f
    let mut frob = vec![rem_monic(x.clone(), f, p)];
    for _ in 0..h {
        let next = pow_poly_mod(frob.last().unwrap(), p as u64, f, p);
        frob.push(next);
    }
    if !sub(&frob[h], &frob[0], p).is_empty() {
        return false;
    }
    for r in prime_factors(h as u64) {
        let m = h / r as usize;
        let g = gcd(f, &sub(&frob[m], &x, p), p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

/// Smallest monic irreducible of degree h, ordering candidates by the base-p
/// integer formed from the non-leading coefficients (highest degree most
/// significant).
pub(crate) fn default_modulus(p: u32, h: u32) -> Vec<u32> {
    let count = (p as u64).pow(h);
    for n in 0..count {
        let mut f = Vec::with_capacity(h as usize + 1);
        let mut m = n;
        for _ in 0..h {
            f.push((m % p as u64) as u32);
            m /= p as u64;
        }
        f.push(1);
        if is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Trial division by every monic polynomial of degree 1..=h/2.
    fn irreducible_by_trial_division(f: &[u32], p: u32) -> bool {
        let h = f.len() - 1;
        for d in 1..=h / 2 {
            let count = (p as u64).pow(d as u32);
            for n in 0..count {
                let mut g = Vec::new();
                let mut m = n;
                for _ in 0..d {
                    g.push((m % p as u64) as u32);
                    m /= p as u64;
                }
                g.push(1);
                if rem_monic(f.to_vec(), &g, p).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn rabin_matches_trial_division() {
        for &(p, h) in &[(2u32, 2u32), (2, 3), (2, 4), (2, 5), (3, 2), (3, 3), (5, 2), (7, 2)] {
            let count = (p as u64).pow(h);
            for n in 0..count {
                let mut f = Vec::new();
                let mut m = n;
                for _ in 0..h {
                    f.push((m % p as u64) as u32);
                    m /= p as u64;
                }
                f.push(1);
                assert_eq!(is_irreducible(&f, p), irreducible_by_trial_division(&f, p), "{f:?} mod {p}");
            }
        }
    }

    #[test]
    fn known_moduli() {
        assert!(is_irreducible(&[1, 1, 0, 1], 2));
        assert!(is_irreducible(&[1, 0, 0, 1, 1], 2));
        assert!(!is_irreducible(&[1, 0, 0, 1], 2));
        assert_eq!(default_modulus(2, 3), vec![1, 1, 0, 1]);
        assert_eq!(default_modulus(3, 1), vec![0, 1]);
    }
}
