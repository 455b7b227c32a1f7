//! Dense univariate polynomials over `F_p`, coefficients low degree first.

fn trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn inv_mod(a: u32, p: u32) -> u32 {
    let mut acc = 1u64;
    let mut base = a as u64 % p as u64;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    acc as u32
}

pub fn mul(p: u32, a: &[u32], b: &[u32]) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    trim(out.into_iter().map(|x| x as u32).collect())
}

pub fn sub(p: u32, a: &[u32], b: &[u32]) -> Vec<u32> {
    let n = a.len().max(b.len());
    let out = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(out)
}

/// Remainder of `a` modulo a nonzero `m`.
pub fn rem(p: u32, a: &[u32], m: &[u32]) -> Vec<u32> {
    let m = trim(m.to_vec());
    assert!(!m.is_empty(), "division by zero polynomial");
    let mut r = trim(a.to_vec());
    let lead_inv = inv_mod(*m.last().unwrap(), p) as u64;
    while r.len() >= m.len() {
        let shift = r.len() - m.len();
        let c = (*r.last().unwrap() as u64 * lead_inv) % p as u64;
        for (i, &mi) in m.iter().enumerate() {
            let sub = (c * mi as u64) % p as u64;
            r[shift + i] = ((r[shift + i] as u64 + p as u64 - sub) % p as u64) as u32;
        }
        r = trim(r);
    }
    r
}

pub fn gcd(p: u32, a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let r = rem(p, &a, &b);
        a = b;
        b = r;
    }
    a
}

/// `x^(p^k) mod m`.
fn x_pow_p_pow(p: u32, k: u32, m: &[u32]) -> Vec<u32> {
    let mut cur = rem(p, &[0, 1], m);
    for _ in 0..k {
        // raise to the p-th power by square-and-multiply
        let mut acc = vec![1u32];
        let mut base = cur.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = rem(p, &mul(p, &acc, &base), m);
            }
            base = rem(p, &mul(p, &base, &base), m);
            e >>= 1;
        }
        cur = acc;
    }
    cur
}

/// Rabin's irreducibility test for a monic polynomial over `F_p`.
pub fn is_irreducible(p: u32, f: &[u32]) -> bool {
    let f = trim(f.to_vec());
    let n = match f.len() {
        0 | 1 => return false,
        len => (len - 1) as u32,
    };
    if n == 1 {
        return true;
    }
    let x = vec![0u32, 1];
    if sub(p, &x_pow_p_pow(p, n, &f), &x).iter().any(|&c| c != 0) {
        return false;
    }
    let mut m = n;
    let mut prime_divisors = Vec::new();
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            prime_divisors.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        prime_divisors.push(m);
    }
    prime_divisors.into_iter().all(|r| {
        let h = sub(p, &x_pow_p_pow(p, n / r, &f), &x);
        gcd(p, &h, &f).len() == 1
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_irreducible(p: u32, f: &[u32]) -> bool {
        let n = f.len() - 1;
        // try every monic divisor of degree 1..=n/2
        for d in 1..=n / 2 {
            let count = (p as u64).pow(d as u32);
            for code in 0..count {
                let mut g = Vec::new();
                let mut c = code;
                for _ in 0..d {
                    g.push((c % p as u64) as u32);
                    c /= p as u64;
                }
                g.push(1);
                if rem(p, f, &g).is_empty() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn rabin_matches_trial_division() {
        for p in [2u32, 3, 5] {
            for n in 2..=4u32 {
                let count = (p as u64).pow(n);
                for code in 0..count {
                    let mut f = Vec::new();
                    let mut c = code;
                    for _ in 0..n {
                        f.push((c % p as u64) as u32);
                        c /= p as u64;
                    }
                    f.push(1);
                    assert_eq!(is_irreducible(p, &f), brute_irreducible(p, &f), "p={p} f={f:?}");
                }
            }
        }
    }
}
