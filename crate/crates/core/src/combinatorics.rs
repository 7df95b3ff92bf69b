//! Subset iteration and colexicographic ranking.

/// Advances `c` (strictly increasing, entries < n) to the next subset in
/// lexicographic order. Returns false after the last one.
pub fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    for i in (0..k).rev() {
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// Table of C(x, j) for x ≤ n, j ≤ t.
pub struct BinomialTable {
    t: usize,
    rows: Vec<u64>,
}

impl BinomialTable {
    pub fn new(n: usize, t: usize) -> Self {
        let mut rows = vec![0u64; (n + 1) * (t + 1)];
        for x in 0..=n {
            for j in 0..=t {
                rows[x * (t + 1) + j] = binomial(x as u64, j as u64);
            }
        }
        BinomialTable { t, rows }
    }

    #[inline]
    pub fn get(&self, x: usize, j: usize) -> u64 {
        self.rows[x * (self.t + 1) + j]
    }

    /// Colex rank of a strictly increasing subset: Σ C(s_i, i+1).
    #[inline]
    pub fn rank(&self, subset: &[usize]) -> usize {
        subset
            .iter()
            .enumerate()
            .map(|(i, &s)| self.get(s, i + 1))
            .sum::<u64>() as usize
    }

    pub fn unrank(&self, mut rank: u64, size: usize, n: usize) -> Vec<usize> {
        let mut out = vec![0; size];
        let mut hi = n;
        for i in (0..size).rev() {
            let mut x = hi;
            while x > 0 && self.get(x - 1, i + 1) > rank {
                x -= 1;
            }
            let x = x - 1;
            out[i] = x;
            rank -= self.get(x, i + 1);
            hi = x;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combination_count() {
        let mut c = vec![0, 1, 2];
        let mut n = 1;
        while next_combination(&mut c, 7) {
            n += 1;
        }
        assert_eq!(n, binomial(7, 3));
    }

    #[test]
    fn colex_rank_is_a_bijection() {
        let table = BinomialTable::new(10, 3);
        let mut seen = vec![false; binomial(10, 3) as usize];
        let mut c = vec![0, 1, 2];
        loop {
            let r = table.rank(&c);
            assert!(!seen[r]);
            seen[r] = true;
            assert_eq!(table.unrank(r as u64, 3, 10), c);
            if !next_combination(&mut c, 10) {
                break;
            }
        }
        assert!(seen.iter().all(|&s| s));
    }
}
