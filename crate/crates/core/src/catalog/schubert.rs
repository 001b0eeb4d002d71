//! Schubert calculus on Grassmannians via Littlewood–Richardson tableaux.

use std::collections::BTreeMap;

pub type Partition = Vec<usize>;

/// All partitions with at most `rows` parts, each at most `width`, of total size `size`.
pub fn partitions_in_box(rows: usize, width: usize, size: usize) -> Vec<Partition> {
    fn go(rows: usize, max_part: usize, remaining: usize, prefix: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if prefix.len() == rows {
            if remaining == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        let slots = rows - prefix.len();
        if remaining > slots * max_part {
            return;
        }
        for part in (0..=max_part.min(remaining)).rev() {
            prefix.push(part);
            go(rows, part, remaining - part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(rows, width, size, &mut Vec::new(), &mut out);
    out
}

pub fn size(p: &[usize]) -> usize {
    p.iter().sum()
}

/// Complement of `p` in the `rows × width` box.
pub fn complement(p: &[usize], rows: usize, width: usize) -> Partition {
    (0..rows).map(|i| width - p[rows - 1 - i]).collect()
}

pub fn label(p: &[usize]) -> String {
    let parts: Vec<String> = p.iter().filter(|&&x| x > 0).map(|x| x.to_string()).collect();
    if parts.is_empty() {
        "1".to_string()
    } else {
        format!("s[{}]", parts.join(","))
    }
}

/// Littlewood–Richardson coefficient `c^ν_{λμ}`: the number of semistandard
/// fillings of `ν/λ` with content `μ` whose reverse reading word is a
/// lattice word.
pub fn lr_coefficient(lambda: &[usize], mu: &[usize], nu: &[usize]) -> u64 {
    let rows = nu.len();
    let pad = |p: &[usize]| -> Vec<usize> {
        let mut v = p.to_vec();
        v.resize(rows.max(p.len()), 0);
        v
    };
    let lambda = pad(lambda);
    if lambda.len() > rows || (0..rows).any(|i| lambda[i] > nu[i]) {
        return 0;
    }
    let content: Vec<usize> = mu.iter().copied().filter(|&x| x > 0).collect();
    if size(nu) != size(&lambda) + size(&content) {
        return 0;
    }
    if content.is_empty() {
        return 1;
    }
    // cells in reading order: rows top to bottom, each row right to left
    let cells: Vec<(usize, usize)> =
        (0..rows).flat_map(|r| (lambda[r]..nu[r]).rev().map(move |c| (r, c))).collect();
    let mut filling: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut counts = vec![0usize; content.len()];

    fn search(
        pos: usize,
        cells: &[(usize, usize)],
        lambda: &[usize],
        content: &[usize],
        filling: &mut BTreeMap<(usize, usize), usize>,
        counts: &mut Vec<usize>,
    ) -> u64 {
        if pos == cells.len() {
            return u64::from(counts.as_slice() == content);
        }
        let (r, c) = cells[pos];
        let mut total = 0;
        for v in 0..content.len() {
            if counts[v] == content[v] || (v > 0 && counts[v] + 1 > counts[v - 1]) {
                continue;
            }
            // weakly increasing along the row: right neighbour was filled already
            if let Some(&right) = filling.get(&(r, c + 1)) {
                if v > right {
                    continue;
                }
            }
            // strictly increasing down columns
            if r > 0 && c >= lambda[r - 1] {
                if let Some(&above) = filling.get(&(r - 1, c)) {
                    if v <= above {
                        continue;
                    }
                }
            }
            filling.insert((r, c), v);
            counts[v] += 1;
            total += search(pos + 1, cells, lambda, content, filling, counts);
            counts[v] -= 1;
            filling.remove(&(r, c));
        }
        total
    }

    search(0, &cells, &lambda, &content, &mut filling, &mut counts)
}

/// `σ_λ · σ_μ` in `CH^∗(Gr(k, n))` as a map partition ↦ coefficient.
pub fn schubert_product(k: usize, n: usize, lambda: &[usize], mu: &[usize]) -> BTreeMap<Partition, u64> {
    let width = n - k;
    let total = size(lambda) + size(mu);
    let mut out = BTreeMap::new();
    if total > k * width {
        return out;
    }
    for nu in partitions_in_box(k, width, total) {
        let c = lr_coefficient(lambda, mu, &nu);
        if c > 0 {
            out.insert(nu, c);
        }
    }
    out
}
