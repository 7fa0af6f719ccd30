//! Exact maximum independent set for graphs with up to 128 vertices.
//!
//! Branch and bound as a maximum clique search in the complement, with a
//! greedy colouring bound (Tomita-style MCQ).

pub(crate) fn max_independent_set(adj: &[u128]) -> u128 {
    let n = adj.len();
    assert!(n <= 128, "at most 128 vertices");
    if n == 0 {
        return 0;
    }
    let all = if n == 128 {
        u128::MAX
    } else {
        (1u128 << n) - 1
    };
    let cadj: Vec<u128> = (0..n).map(|v| !adj[v] & all & !(1u128 << v)).collect();

    // Seed with a greedy independent set (lowest degree first).
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| adj[v].count_ones());
    let mut greedy = 0u128;
    let mut blocked = 0u128;
    for v in order {
        if blocked >> v & 1 == 0 {
            greedy |= 1 << v;
            blocked |= adj[v] | (1 << v);
        }
    }
    let mut best = (greedy, greedy.count_ones());
    expand(&cadj, 0, 0, all, &mut best);
    best.0
}

fn expand(cadj: &[u128], r: u128, rsize: u32, p: u128, best: &mut (u128, u32)) {
    let mut order: Vec<(usize, u32)> = Vec::with_capacity(p.count_ones() as usize);
    let mut uncoloured = p;
    let mut colour = 0;
    while uncoloured != 0 {
        colour += 1;
        let mut q = uncoloured;
        while q != 0 {
            let v = q.trailing_zeros() as usize;
            q &= !(1u128 << v) & !cadj[v];
            uncoloured &= !(1u128 << v);
            order.push((v, colour));
        }
    }
    let mut p = p;
    for &(v, c) in order.iter().rev() {
        if rsize + c <= best.1 {
            return;
        }
        let np = p & cadj[v];
        let nr = r | (1u128 << v);
        if np == 0 {
            if rsize + 1 > best.1 {
                *best = (nr, rsize + 1);
            }
        } else {
            expand(cadj, nr, rsize + 1, np, best);
        }
        p &= !(1u128 << v);
    }
}
