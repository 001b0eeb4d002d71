//! Pieri-rule oracle for Schubert products.
//!
//! Kept independent of the tableau code: `σ_μ` is expanded by the
//! Jacobi–Trudi determinant into special classes `σ_r`, and each special
//! class acts on `σ_λ` by the Pieri rule (adding a horizontal strip inside
//! the box). Used to check the Littlewood–Richardson multiplication table.

use std::collections::BTreeMap;

use super::schubert::Partition;

/// `σ_λ · σ_r`: all `ν ⊇ λ` in the `k × width` box with `ν/λ` a horizontal strip of size `r`.
pub fn pieri(lambda: &[usize], r: usize, k: usize, width: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut nu = lambda.to_vec();
    nu.resize(k, 0);
    let lam = nu.clone();
    fn go(i: usize, left: usize, lam: &[usize], width: usize, nu: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if i == lam.len() {
            if left == 0 {
                out.push(nu.clone());
            }
            return;
        }
        let cap = if i == 0 { width } else { lam[i - 1] };
        for add in 0..=left.min(cap - lam[i]) {
            nu[i] = lam[i] + add;
            go(i + 1, left - add, lam, width, nu, out);
        }
        nu[i] = lam[i];
    }
    go(0, r, &lam, width, &mut nu, &mut out);
    out
}

fn permutations(n: usize) -> Vec<(Vec<usize>, i64)> {
    fn go(prefix: &mut Vec<usize>, used: &mut Vec<bool>, n: usize, out: &mut Vec<(Vec<usize>, i64)>) {
        if prefix.len() == n {
            let mut inversions = 0;
            for i in 0..n {
                for j in i + 1..n {
                    if prefix[i] > prefix[j] {
                        inversions += 1;
                    }
                }
            }
            out.push((prefix.clone(), if inversions % 2 == 0 { 1 } else { -1 }));
            return;
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                go(prefix, used, n, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), &mut vec![false; n], n, &mut out);
    out
}

/// `σ_λ · σ_μ` in `CH^∗(Gr(k, n))` computed through Jacobi–Trudi and Pieri.
pub fn product(k: usize, n: usize, lambda: &[usize], mu: &[usize]) -> BTreeMap<Partition, i64> {
    let width = n - k;
    let parts: Vec<usize> = mu.iter().copied().filter(|&x| x > 0).collect();
    let len = parts.len();
    let mut start = lambda.to_vec();
    start.resize(k, 0);
    let mut total: BTreeMap<Partition, i64> = BTreeMap::new();
    for (perm, sign) in permutations(len) {
        // Π_i h_{μ_i − i + σ(i)}
        let degrees: Option<Vec<usize>> = (0..len)
            .map(|i| {
                let d = parts[i] as i64 - i as i64 + perm[i] as i64;
                (d >= 0).then_some(d as usize)
            })
            .collect();
        let Some(degrees) = degrees else { continue };
        let mut current: BTreeMap<Partition, i64> = BTreeMap::from([(start.clone(), 1)]);
        for d in degrees {
            let mut next = BTreeMap::new();
            for (p, c) in &current {
                for q in pieri(p, d, k, width) {
                    *next.entry(q).or_insert(0) += c;
                }
            }
            current = next;
        }
        for (p, c) in current {
            *total.entry(p).or_insert(0) += sign * c;
        }
    }
    total.retain(|_, c| *c != 0);
    total
}
