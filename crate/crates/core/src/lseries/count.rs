use std::collections::BTreeMap;

use rayon::prelude::*;

use super::model::Model;

/// Primes up to and including `bound`.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    num_prime::nt_funcs::primes(bound + 1)
}

/// a_p = p + 1 − #Ẽ(𝔽_p) on a model minimal at p, for every prime p ≤ bound
/// not already present in `known`.
pub fn fill_ap(model: &Model, known: &mut BTreeMap<u64, i64>, bound: u64) {
    let missing: Vec<u64> = primes_up_to(bound).into_iter().filter(|p| !known.contains_key(p)).collect();
    let values: Vec<(u64, i64)> = missing
        .par_iter()
        .map(|&p| (p, p as i64 + 1 - model.count_points(p) as i64))
        .collect();
    known.extend(values);
}

/// a_1, …, a_nmax (index 0 unused) from the prime coefficients; `bad` tells
/// whether a prime divides the conductor.
pub fn an_coefficients(ap: &BTreeMap<u64, i64>, bad: impl Fn(u64) -> bool, nmax: usize) -> Vec<i64> {
    let mut spf = vec![0u32; nmax + 1];
    for i in 2..=nmax {
        if spf[i] == 0 {
            let mut j = i;
            while j <= nmax {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
                j += i;
            }
        }
    }
    let mut a = vec![0i64; nmax + 1];
    if nmax >= 1 {
        a[1] = 1;
    }
    for n in 2..=nmax {
        let p = spf[n] as usize;
        let mut m = n;
        let mut k = 0;
        while m % p == 0 {
            m /= p;
            k += 1;
        }
        let pk = n / m;
        if m > 1 {
            a[n] = a[pk] * a[m];
            continue;
        }
        let ap_val = ap[&(p as u64)];
        a[n] = if k == 1 {
            ap_val
        } else if bad(p as u64) {
            ap_val * a[n / p]
        } else {
            ap_val * a[n / p] - p as i64 * a[n / p / p]
        };
    }
    a
}
