fn inv(a: u64, p: u64) -> u64 {
    // Fermat
    let mut r = 1u64;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

/// Determinant as the signed sum over all permutations.
pub fn det_leibniz(m: &[Vec<u64>], p: u64) -> u64 {
    let n = m.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = 0u64;
    permute(&mut perm, 0, true, &mut |perm, even| {
        let mut prod = 1u64;
        for (i, &j) in perm.iter().enumerate() {
            prod = prod * (m[i][j] % p) % p;
            if prod == 0 {
                return;
            }
        }
        total = if even {
            (total + prod) % p
        } else {
            (total + p - prod) % p
        };
    });
    total
}

fn permute(perm: &mut Vec<usize>, k: usize, even: bool, f: &mut dyn FnMut(&[usize], bool)) {
    if k == perm.len() {
        f(perm, even);
        return;
    }
    for i in k..perm.len() {
        perm.swap(k, i);
        permute(perm, k + 1, if i == k { even } else { !even }, f);
        perm.swap(k, i);
    }
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if n < k {
        return Vec::new();
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Rank as the size of the largest nonvanishing minor.
pub fn rank_by_minors(m: &[Vec<u64>], p: u64) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    for k in (1..=rows.min(cols)).rev() {
        for rs in subsets(rows, k) {
            for cs in subsets(cols, k) {
                let minor: Vec<Vec<u64>> = rs
                    .iter()
                    .map(|&i| cs.iter().map(|&j| m[i][j]).collect())
                    .collect();
                if det_leibniz(&minor, p) != 0 {
                    return k;
                }
            }
        }
    }
    0
}

/// Rank by plain row reduction.
pub fn rank_gauss(m: &[Vec<u64>], p: u64) -> usize {
    let mut a: Vec<Vec<u64>> = m
        .iter()
        .map(|r| r.iter().map(|x| x % p).collect())
        .collect();
    let cols = a.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(piv) = (rank..a.len()).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(rank, piv);
        let iv = inv(a[rank][c], p);
        for i in 0..a.len() {
            if i != rank && a[i][c] != 0 {
                let f = a[i][c] * iv % p;
                for j in 0..cols {
                    a[i][j] = (a[i][j] + p - f * a[rank][j] % p) % p;
                }
            }
        }
        rank += 1;
    }
    rank
}
