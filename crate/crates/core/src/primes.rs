//! Small prime tables. Everything here works with the first few hundred primes at most.

/// The first `d` primes, in increasing order.
pub fn first_primes(d: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(d);
    let mut candidate = 2u64;
    while out.len() < d {
        if out.iter().take_while(|&&p| p * p <= candidate).all(|&p| candidate % p != 0) {
            out.push(candidate);
        }
        candidate += 1;
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            return false;
        }
        p += 1;
    }
    true
}

/// Exponent vector of `n` over `primes`, or `None` if some other prime divides `n`.
pub fn factor_over(mut n: u64, primes: &[u64]) -> Option<Vec<u32>> {
    if n == 0 {
        return None;
    }
    let mut exps = vec![0u32; primes.len()];
    for (e, &p) in exps.iter_mut().zip(primes) {
        while n % p == 0 {
            n /= p;
            *e += 1;
        }
    }
    (n == 1).then_some(exps)
}

/// Index of `p` in the prime sequence (2 -> 0, 3 -> 1, ...), if `p` is prime.
pub fn prime_index(p: u64) -> Option<usize> {
    if !is_prime(p) {
        return None;
    }
    Some((2..p).filter(|&q| is_prime(q)).count())
}
