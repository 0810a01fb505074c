//! Small dense integer matrices and the Smith normal form with transforms.

pub type IMat = Vec<Vec<i128>>;

pub fn identity(n: usize) -> IMat {
    (0..n)
        .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
        .collect()
}

pub fn mat_mul(a: &IMat, b: &IMat) -> IMat {
    let m = a.len();
    let k = b.len();
    let n = if k == 0 { 0 } else { b[0].len() };
    let mut c = vec![vec![0i128; n]; m];
    for i in 0..m {
        for t in 0..k {
            let x = a[i][t];
            if x == 0 {
                continue;
            }
            for j in 0..n {
                c[i][j] += x * b[t][j];
            }
        }
    }
    c
}

pub fn mat_vec(a: &IMat, v: &[i128]) -> Vec<i128> {
    a.iter()
        .map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum())
        .collect()
}

pub fn transpose(a: &IMat) -> IMat {
    if a.is_empty() {
        return Vec::new();
    }
    (0..a[0].len())
        .map(|j| a.iter().map(|row| row[j]).collect())
        .collect()
}

/// `U·A·V = diag(d_1, …, d_k, 0, …)` with `d_i | d_{i+1}`, `d_i ≥ 0`,
/// `U`, `V` unimodular. `u_inv` is the inverse of `U`.
#[derive(Clone, Debug)]
pub struct Smith {
    pub u: IMat,
    pub u_inv: IMat,
    pub v: IMat,
    pub diag: Vec<i128>,
}

pub fn smith(a: &IMat, rows: usize, cols: usize) -> Smith {
    let mut a = a.clone();
    let mut u = identity(rows);
    let mut u_inv = identity(rows);
    let mut v = identity(cols);

    // row_i += c·row_j
    let add_row = |a: &mut IMat, u: &mut IMat, u_inv: &mut IMat, i: usize, j: usize, c: i128| {
        for col in 0..cols {
            a[i][col] += c * a[j][col];
        }
        for col in 0..rows {
            u[i][col] += c * u[j][col];
        }
        for row in u_inv.iter_mut() {
            row[j] -= c * row[i];
        }
    };
    let swap_rows = |a: &mut IMat, u: &mut IMat, u_inv: &mut IMat, i: usize, j: usize| {
        a.swap(i, j);
        u.swap(i, j);
        for row in u_inv.iter_mut() {
            row.swap(i, j);
        }
    };
    let add_col = |a: &mut IMat, v: &mut IMat, i: usize, j: usize, c: i128| {
        for row in a.iter_mut() {
            row[i] += c * row[j];
        }
        for row in v.iter_mut() {
            row[i] += c * row[j];
        }
    };
    let swap_cols = |a: &mut IMat, v: &mut IMat, i: usize, j: usize| {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
        for row in v.iter_mut() {
            row.swap(i, j);
        }
    };

    let k = rows.min(cols);
    for t in 0..k {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if a[i][j] != 0 && best.map_or(true, |(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else { break };
            if bi != t {
                swap_rows(&mut a, &mut u, &mut u_inv, t, bi);
            }
            if bj != t {
                swap_cols(&mut a, &mut v, t, bj);
            }
            let piv = a[t][t];
            let mut clean = true;
            for i in t + 1..rows {
                let q = a[i][t] / piv;
                if q != 0 {
                    add_row(&mut a, &mut u, &mut u_inv, i, t, -q);
                }
                if a[i][t] != 0 {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                let q = a[t][j] / piv;
                if q != 0 {
                    add_col(&mut a, &mut v, j, t, -q);
                }
                if a[t][j] != 0 {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| a[i][j] % piv != 0));
            match bad {
                Some(i) => add_row(&mut a, &mut u, &mut u_inv, t, i, 1),
                None => break,
            }
        }
        if a[t][t] < 0 {
            for col in 0..cols {
                a[t][col] = -a[t][col];
            }
            for col in 0..rows {
                u[t][col] = -u[t][col];
            }
            for row in u_inv.iter_mut() {
                row[t] = -row[t];
            }
        }
    }
    let diag = (0..k).map(|t| a[t][t]).collect();
    Smith { u, u_inv, v, diag }
}

/// `a mod m` in `[0, m)`.
pub fn modp(a: i128, m: i128) -> i128 {
    a.rem_euclid(m)
}
