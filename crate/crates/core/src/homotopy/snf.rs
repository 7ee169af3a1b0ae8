use super::{generator_of, Presentation};

/// Invariant factors of the abelianization: the nontrivial torsion divisors in
/// increasing divisibility order, then one `0` per free rank.
pub fn abelianized_invariants(pr: &Presentation) -> Vec<u64> {
    let cols = pr.generators;
    let mut m: Vec<Vec<i128>> = pr
        .relators
        .iter()
        .map(|r| {
            let mut row = vec![0i128; cols];
            for &l in r {
                row[generator_of(l)] += l.signum() as i128;
            }
            row
        })
        .filter(|row| row.iter().any(|&x| x != 0))
        .collect();
    let diag = smith_diagonal(&mut m, cols);
    let mut out: Vec<u64> = diag.iter().filter(|&&d| d > 1).map(|&d| d as u64).collect();
    out.extend(std::iter::repeat(0).take(cols - diag.len()));
    out
}

/// Diagonal of the Smith normal form, nonzero entries only, each dividing the next.
fn smith_diagonal(m: &mut [Vec<i128>], cols: usize) -> Vec<i128> {
    let rows = m.len();
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        let mut pivot = None;
        for i in t..rows {
            for j in t..cols {
                if m[i][j] != 0 && pivot.map_or(true, |(pi, pj): (usize, usize)| m[i][j].abs() < m[pi][pj].abs()) {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                let q = m[i][t] / m[t][t];
                if q != 0 {
                    for j in t..cols {
                        m[i][j] -= q * m[t][j];
                    }
                }
                if m[i][t] != 0 {
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                let q = m[t][j] / m[t][t];
                if q != 0 {
                    for row in m.iter_mut() {
                        row[j] -= q * row[t];
                    }
                }
                if m[t][j] != 0 {
                    dirty = true;
                }
            }
            if dirty {
                // A smaller remainder exists in row or column t; move it to the pivot.
                let mut best = (t, t);
                for i in t..rows {
                    if m[i][t] != 0 && m[i][t].abs() < m[best.0][best.1].abs() {
                        best = (i, t);
                    }
                }
                for j in t..cols {
                    if m[t][j] != 0 && m[t][j].abs() < m[best.0][best.1].abs() {
                        best = (t, j);
                    }
                }
                m.swap(t, best.0);
                for row in m.iter_mut() {
                    row.swap(t, best.1);
                }
                continue;
            }
            let d = m[t][t];
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| m[i][j] % d != 0));
            match bad {
                Some(i) => {
                    for j in t..cols {
                        m[t][j] += m[i][j];
                    }
                }
                None => break,
            }
        }
        diag.push(m[t][t].abs());
        t += 1;
    }
    diag
}
