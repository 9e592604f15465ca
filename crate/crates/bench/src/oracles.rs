//! Direct definitions used to check the packed computations.

use std::collections::VecDeque;

use gpr_core::apps::boolean::BoolMatrix;
use gpr_core::apps::cfg::CnfGrammar;

/// CYK table filled span by span.
pub fn cyk(g: &CnfGrammar, w: &[char]) -> bool {
    let n = w.len();
    if n == 0 {
        return false;
    }
    let nts: Vec<&str> = g.nonterminals().into_iter().collect();
    let idx = |a: &str| nts.iter().position(|x| *x == a).expect("declared nonterminal");
    let mut t = vec![vec![vec![false; nts.len()]; n]; n];
    for (i, c) in w.iter().enumerate() {
        for (a, term) in &g.unary {
            if term.starts_with(*c) {
                t[i][i][idx(a)] = true;
            }
        }
    }
    for span in 2..=n {
        for i in 0..=n - span {
            let j = i + span - 1;
            for k in i..j {
                for (a, b, c) in &g.binary {
                    if t[i][k][idx(b)] && t[k + 1][j][idx(c)] {
                        t[i][j][idx(a)] = true;
                    }
                }
            }
        }
    }
    t[0][n - 1][idx(&g.start)]
}

pub fn bfs(adj: &BoolMatrix, src: usize) -> Vec<Option<u32>> {
    let n = adj.n();
    let mut dist = vec![None; n];
    dist[src] = Some(0);
    let mut queue = VecDeque::from([src]);
    while let Some(u) = queue.pop_front() {
        let du = dist[u].expect("queued vertices are reached");
        for v in 0..n {
            if adj.get(u, v) && dist[v].is_none() {
                dist[v] = Some(du + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}

pub fn triangles(adj: &BoolMatrix) -> u64 {
    let n = adj.n();
    let mut c = 0;
    for i in 0..n {
        for j in i + 1..n {
            if !adj.get(i, j) {
                continue;
            }
            for k in j + 1..n {
                c += (adj.get(j, k) && adj.get(i, k)) as u64;
            }
        }
    }
    c
}

/// `OR_{k=i}^{j-1} X[i][k] AND Y[k+1][j]`.
pub fn offset_product(x: &BoolMatrix, y: &BoolMatrix) -> BoolMatrix {
    BoolMatrix::from_fn(x.n(), |i, j| (i..j).any(|k| x.get(i, k) && y.get(k + 1, j)))
}
