//! Smith normal form over the integers, used to name finitely generated
//! abelian groups given by generators and relations.

/// Invariant factors of the integer matrix `m` (rows are relations), in
/// divisibility order, zeros dropped.
pub fn invariant_factors(m: &[Vec<i64>]) -> Vec<u64> {
    let mut a: Vec<Vec<i128>> = m.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    for t in 0..rows.min(cols) {
        let Some((pi, pj)) = smallest(&a, t..rows, t..cols) else { break };
        move_to(&mut a, t, pi, pj);
        loop {
            // clear column t, then row t; a smaller remainder becomes the pivot
            for i in t + 1..rows {
                let q = a[i][t] / a[t][t];
                for j in t..cols {
                    a[i][j] -= q * a[t][j];
                }
            }
            if let Some((i, j)) = smallest(&a, t + 1..rows, t..t + 1) {
                move_to(&mut a, t, i, j);
                continue;
            }
            for j in t + 1..cols {
                let q = a[t][j] / a[t][t];
                for row in a.iter_mut().skip(t) {
                    row[j] -= q * row[t];
                }
            }
            if let Some((i, j)) = smallest(&a, t..t + 1, t + 1..cols) {
                move_to(&mut a, t, i, j);
                continue;
            }
            // the pivot must divide the rest of the block
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| a[i][j] % a[t][t] != 0));
            match bad {
                Some(i) => {
                    for j in t..cols {
                        let v = a[i][j];
                        a[t][j] += v;
                    }
                }
                None => break,
            }
        }
        diag.push(a[t][t].unsigned_abs() as u64);
    }
    diag
}

/// Position of the nonzero entry of least absolute value in the block.
fn smallest(
    a: &[Vec<i128>],
    rows: std::ops::Range<usize>,
    cols: std::ops::Range<usize>,
) -> Option<(usize, usize)> {
    rows.flat_map(|i| cols.clone().map(move |j| (i, j)))
        .filter(|&(i, j)| a[i][j] != 0)
        .min_by_key(|&(i, j)| a[i][j].abs())
}

fn move_to(a: &mut [Vec<i128>], t: usize, i: usize, j: usize) {
    a.swap(t, i);
    for row in a.iter_mut() {
        row.swap(t, j);
    }
}

/// Name of `ℤ^n / ⟨relations⟩`, e.g. `Z × Z/2`; `1` for the trivial group.
pub fn abelian_group_name(generators: usize, relations: &[Vec<i64>]) -> String {
    let factors = invariant_factors(relations);
    let rank = generators - factors.len();
    let mut parts: Vec<String> = vec!["Z".to_owned(); rank];
    let mut torsion: Vec<u64> = factors.into_iter().filter(|&d| d > 1).collect();
    torsion.sort_unstable();
    parts.extend(torsion.iter().map(|d| format!("Z/{d}")));
    if parts.is_empty() {
        "1".to_owned()
    } else {
        parts.join(" × ")
    }
}
