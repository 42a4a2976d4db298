//! Brute-force reference implementations, written against the definitions
//! only and sharing no code with the library's search routines.

#![allow(dead_code)]

use loopforge::FiniteLoop;

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        let n = used.len();
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                prefix.push(v);
                rec(prefix, used, out);
                prefix.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// Reduced Latin squares of order `n`, built row by row from whole
/// permutations. Row `r` must start with `r`, and no column may repeat.
pub fn reduced_latin_squares(n: usize) -> Vec<Vec<Vec<usize>>> {
    let perms = permutations(n);
    let mut out = Vec::new();
    let mut rows: Vec<Vec<usize>> = vec![(0..n).collect()];
    fn rec(n: usize, perms: &[Vec<usize>], rows: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        let r = rows.len();
        if r == n {
            out.push(rows.clone());
            return;
        }
        for p in perms.iter().filter(|p| p[0] == r) {
            if rows.iter().all(|row| row.iter().zip(p).all(|(a, b)| a != b)) {
                rows.push(p.clone());
                rec(n, perms, rows, out);
                rows.pop();
            }
        }
    }
    rec(n, &perms, &mut rows, &mut out);
    out
}

pub fn to_rows(l: &FiniteLoop) -> Vec<Vec<usize>> {
    l.rows()
}

/// `table'[xσ][yσ] = (xy)σ`, flattened.
fn relabelled(rows: &[Vec<usize>], sigma: &[usize]) -> Vec<usize> {
    let n = rows.len();
    let mut t = vec![0; n * n];
    for x in 0..n {
        for y in 0..n {
            t[sigma[x] * n + sigma[y]] = sigma[rows[x][y]];
        }
    }
    t
}

/// Smallest relabelled table over every bijection sending the identity to 0.
pub fn brute_canonical(l: &FiniteLoop) -> Vec<usize> {
    let rows = l.rows();
    let e = l.identity();
    permutations(l.order())
        .into_iter()
        .filter(|s| s[e] == 0)
        .map(|s| relabelled(&rows, &s))
        .min()
        .unwrap()
}

/// Whether some bijection `σ` satisfies `(xy)σ = xσ·yσ`.
pub fn brute_isomorphic(g: &FiniteLoop, h: &FiniteLoop) -> bool {
    let n = g.order();
    if h.order() != n {
        return false;
    }
    permutations(n)
        .iter()
        .any(|s| (0..n).all(|x| (0..n).all(|y| s[g.mul(x, y)] == h.mul(s[x], s[y]))))
}

/// `xy·z = e ⟹ x·yz = e`, straight from the definition.
pub fn naive_wip(l: &FiniteLoop) -> bool {
    let n = l.order();
    let e = l.identity();
    (0..n).all(|x| {
        (0..n).all(|y| (0..n).all(|z| l.mul(l.mul(x, y), z) != e || l.mul(x, l.mul(y, z)) == e))
    })
}

/// `xy·x^ρ = y`.
pub fn naive_cip(l: &FiniteLoop) -> bool {
    let n = l.order();
    let e = l.identity();
    let rho = |x: usize| (0..n).find(|&r| l.mul(x, r) == e).unwrap();
    (0..n).all(|x| (0..n).all(|y| l.mul(l.mul(x, y), rho(x)) == y))
}

/// All loops of order `n` from the oracle squares.
pub fn oracle_loops(n: usize) -> Vec<FiniteLoop> {
    reduced_latin_squares(n)
        .iter()
        .map(|rows| FiniteLoop::from_rows(rows).unwrap())
        .collect()
}
