//! Partition enumeration used for monomial bases and exponential expansions.

/// All partitions of `n` into parts `>= min_part`, each weakly decreasing.
pub fn partitions_min(n: i64, min_part: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(rem: i64, max: i64, min: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if rem == 0 {
            out.push(cur.clone());
            return;
        }
        let mut p = max.min(rem);
        while p >= min {
            cur.push(p);
            rec(rem - p, p, min, cur, out);
            cur.pop();
            p -= 1;
        }
    }
    if n >= 0 {
        rec(n, n, min_part.max(1), &mut cur, &mut out);
    }
    out
}

/// Partitions of `n` into odd parts, largest first.
pub fn odd_partitions(n: i64) -> Vec<Vec<i64>> {
    fn rec(rest: i64, max: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        let mut p = max.min(rest);
        if p % 2 == 0 {
            p -= 1;
        }
        while p >= 1 {
            cur.push(p);
            rec(rest - p, p, cur, out);
            cur.pop();
            p -= 2;
        }
    }
    let mut out = Vec::new();
    if n >= 0 {
        rec(n, n, &mut Vec::new(), &mut out);
    }
    out
}

pub fn partitions(n: i64) -> Vec<Vec<i64>> {
    partitions_min(n, 1)
}

/// Partition counts `p(0..=n)` by the standard product recurrence.
pub fn partition_counts(n: usize) -> Vec<u64> {
    let mut p = vec![0u64; n + 1];
    p[0] = 1;
    for part in 1..=n {
        for k in part..=n {
            p[k] += p[k - part];
        }
    }
    p
}

/// Multiplicity factorial `prod_i m_i!` of a partition.
pub fn multiplicity_factorial(parts: &[i64]) -> u64 {
    let mut out = 1u64;
    let mut i = 0;
    while i < parts.len() {
        let mut j = i;
        while j < parts.len() && parts[j] == parts[i] {
            j += 1;
        }
        for k in 1..=(j - i) as u64 {
            out *= k;
        }
        i = j;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_match_enumeration() {
        let p = partition_counts(12);
        for n in 0..=12 {
            assert_eq!(partitions(n as i64).len() as u64, p[n]);
        }
        assert_eq!(&p[..6], &[1, 1, 2, 3, 5, 7]);
    }

    #[test]
    fn restricted_parts() {
        assert_eq!(partitions_min(4, 2), vec![vec![4], vec![2, 2]]);
        assert_eq!(multiplicity_factorial(&[2, 2, 1]), 2);
    }
}
