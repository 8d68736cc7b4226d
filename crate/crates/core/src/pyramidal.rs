//! Optimal pyramidal tours and the cyclic-shift local search BELPERM.
//!
//! A tour `<0, a_1, .., n-1, .., b_k, 0>` is pyramidal when it climbs
//! monotonically from node 0 to node `n-1` and descends back. `E(x, y)` is
//! the cheapest path that starts at `x`, ends at `y` and visits every node
//! above `k = max(x, y)`. Node `k + 1` must sit next to one of the two open
//! ends, which gives the two-way recursion below; the whole tour is `E(0, 0)`.

use crate::matrices::{Costs, Permutation, Relabeled};

/// A closed tour starting at node 0 (closing arc implicit).
#[derive(Debug, Clone, PartialEq)]
pub struct Tour {
    pub nodes: Vec<usize>,
    pub length: f64,
}

impl Tour {
    pub fn from_nodes<C: Costs + ?Sized>(c: &C, nodes: Vec<usize>) -> Self {
        let length = c.tour_length(&nodes);
        Tour { nodes, length }
    }
}

const REL_EPS: f64 = 1e-9;

/// `a` is better than `b` by more than the floating-point noise floor.
pub(crate) fn strictly_less(a: f64, b: f64) -> bool {
    a < b - REL_EPS * a.abs().max(b.abs()).max(1.0)
}

/// Minimum-length pyramidal tour, `O(n^2)` time and space.
///
/// Ties prefer attaching the next node at the start-side end of the path.
pub fn optimal_pyramidal<C: Costs + ?Sized>(c: &C) -> Tour {
    let n = c.order();
    assert!(n >= 2, "a tour needs at least two nodes");
    let top = n - 1;
    // e[x * n + y]; only pairs with max(x, y) = k and min(x, y) < k, plus (0, 0), are used.
    let mut e = vec![f64::INFINITY; n * n];
    for x in 0..top {
        e[x * n + top] = c.cost(x, top);
        e[top * n + x] = c.cost(top, x);
    }
    let value = |e: &[f64], x: usize, y: usize| {
        let k = x.max(y) + 1;
        let via_start = c.cost(x, k) + e[k * n + y];
        let via_end = e[x * n + k] + c.cost(k, y);
        (via_start, via_end)
    };
    for k in (1..top).rev() {
        for other in 0..k {
            let (a, b) = value(&e, other, k);
            e[other * n + k] = a.min(b);
            let (a, b) = value(&e, k, other);
            e[k * n + other] = a.min(b);
        }
    }
    let (a, b) = value(&e, 0, 0);

    // Walk the choices back from (0, 0).
    let mut head = vec![0];
    let mut tail = Vec::new();
    let (mut x, mut y) = (0, 0);
    let mut take_start = a <= b;
    loop {
        let k = x.max(y) + 1;
        if take_start {
            head.push(k);
            x = k;
        } else {
            tail.push(k);
            y = k;
        }
        if k == top {
            break;
        }
        let (a, b) = value(&e, x, y);
        take_start = a <= b;
    }
    head.extend(tail.into_iter().rev());
    Tour::from_nodes(c, head)
}

/// Iterated pyramidal search over all cyclic shifts of a numbering.
///
/// Each sweep solves the pyramidal DP for every cyclic shift of the current
/// numbering; the best tour found becomes the next numbering. Stops when a
/// sweep fails to improve on the incumbent. The returned tour starts at
/// node 0 and is never longer than the tour `start` itself.
pub fn belperm<C: Costs + ?Sized>(c: &C, start: &Permutation) -> Tour {
    let n = c.order();
    assert_eq!(start.order(), n, "numbering order must match the matrix");
    if n < 4 {
        return optimal_pyramidal(c);
    }
    let mut incumbent = Tour::from_nodes(c, start.rotated_to(0).into_vec());
    loop {
        let numbering = Permutation::new(incumbent.nodes.clone()).expect("tour is a permutation");
        let mut best: Option<Tour> = None;
        for k in 0..n {
            let shifted = numbering.cyclic_shift(k);
            let view = Relabeled { inner: c, map: shifted.as_slice() };
            let local = optimal_pyramidal(&view);
            let mapped: Vec<usize> = local.nodes.iter().map(|&v| shifted.get(v)).collect();
            let tour = Tour::from_nodes(c, Permutation::new(mapped).expect("bijection").rotated_to(0).into_vec());
            if best.as_ref().map_or(true, |b| tour.length < b.length) {
                best = Some(tour);
            }
        }
        let best = best.expect("n >= 1 shifts");
        if strictly_less(best.length, incumbent.length) {
            incumbent = best;
        } else {
            return incumbent;
        }
    }
}
