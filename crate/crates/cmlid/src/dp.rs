//! Max-sum decoding over four-label lattices, shared by the HMM and CRF.
//!
//! A lattice is a node-score table `nodes[i][y]` plus an edge-score table
//! `edges[y_prev][y]`; a path scores node 0 plus the alternating sum of
//! edges and nodes along it. Both decoders here fold that sum right to
//! left, so a path's score comes out bit-identical whichever one computes
//! it.

/// Highest-scoring path. Exact score ties resolve to the path that is
/// lexicographically smallest in label order, compared left to right.
pub(crate) fn max_sum_path(nodes: &[[f64; 4]], edges: &[[f64; 4]; 4]) -> (Vec<usize>, f64) {
    let n = nodes.len();
    assert!(n > 0, "empty lattice");
    // bwd[i][y]: best score of the path suffix starting at position i with label y
    let mut bwd = vec![[0.0f64; 4]; n];
    bwd[n - 1] = nodes[n - 1];
    for i in (0..n - 1).rev() {
        for y in 0..4 {
            let mut best = f64::NEG_INFINITY;
            for next in 0..4 {
                let v = edges[y][next] + bwd[i + 1][next];
                if v > best {
                    best = v;
                }
            }
            bwd[i][y] = nodes[i][y] + best;
        }
    }
    // Greedy left-to-right reconstruction: at each step pick the smallest
    // label that still admits a maximum-score completion.
    let (first, score) = argmax4(&bwd[0]);
    let mut path = Vec::with_capacity(n);
    path.push(first);
    let mut prev = first;
    for row in &bwd[1..] {
        let mut best = f64::NEG_INFINITY;
        let mut pick = 0;
        for y in 0..4 {
            let v = edges[prev][y] + row[y];
            if v > best {
                best = v;
                pick = y;
            }
        }
        path.push(pick);
        prev = pick;
    }
    (path, score)
}

/// Brute-force maximum over all 4^n paths, enumerated in lexicographic label
/// order so ties resolve exactly as in [`max_sum_path`].
pub(crate) fn exhaustive_max_path(nodes: &[[f64; 4]], edges: &[[f64; 4]; 4]) -> (Vec<usize>, f64) {
    let n = nodes.len();
    assert!(n > 0, "empty lattice");
    let total = 4usize.pow(n as u32);
    let mut best_path = vec![0usize; n];
    let mut best = path_score(nodes, edges, &best_path);
    let mut labels = vec![0usize; n];
    for code in 1..total {
        // digits most-significant first keeps the enumeration lexicographic
        for (pos, slot) in labels.iter_mut().enumerate() {
            *slot = (code >> (2 * (n - 1 - pos))) & 3;
        }
        let s = path_score(nodes, edges, &labels);
        if s > best {
            best = s;
            best_path.copy_from_slice(&labels);
        }
    }
    (best_path, best)
}

/// Score of one path, folded right to left to match the decoder's own
/// summation order.
pub(crate) fn path_score(nodes: &[[f64; 4]], edges: &[[f64; 4]; 4], path: &[usize]) -> f64 {
    let n = path.len();
    let mut acc = nodes[n - 1][path[n - 1]];
    for i in (0..n - 1).rev() {
        acc = nodes[i][path[i]] + (edges[path[i]][path[i + 1]] + acc);
    }
    acc
}

fn argmax4(values: &[f64; 4]) -> (usize, f64) {
    let mut best = f64::NEG_INFINITY;
    let mut pick = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > best {
            best = v;
            pick = i;
        }
    }
    (pick, best)
}
