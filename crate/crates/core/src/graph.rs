//! Small directed-graph helpers over dense node indices.

use alloc::vec;
use alloc::vec::Vec;

/// Strongly connected components (Tarjan, iterative). Returns the component
/// id of each node; ids are in reverse topological order of the condensation.
pub fn scc(adj: &[Vec<usize>]) -> Vec<usize> {
    let n = adj.len();
    const NONE: usize = usize::MAX;
    let mut index = vec![NONE; n];
    let mut low = vec![0; n];
    let mut on_stack = vec![false; n];
    let mut stack = Vec::new();
    let mut comp = vec![NONE; n];
    let mut next_index = 0;
    let mut next_comp = 0;
    let mut frames: Vec<(usize, usize)> = Vec::new();
    for root in 0..n {
        if index[root] != NONE {
            continue;
        }
        frames.push((root, 0));
        while let Some(&mut (v, ref mut edge)) = frames.last_mut() {
            if *edge == 0 && index[v] == NONE {
                index[v] = next_index;
                low[v] = next_index;
                next_index += 1;
                stack.push(v);
                on_stack[v] = true;
            }
            if let Some(&w) = adj[v].get(*edge) {
                *edge += 1;
                if index[w] == NONE {
                    frames.push((w, 0));
                } else if on_stack[w] {
                    low[v] = low[v].min(index[w]);
                }
                continue;
            }
            frames.pop();
            if let Some(&(parent, _)) = frames.last() {
                low[parent] = low[parent].min(low[v]);
            }
            if low[v] == index[v] {
                loop {
                    let w = stack.pop().expect("tarjan stack");
                    on_stack[w] = false;
                    comp[w] = next_comp;
                    if w == v {
                        break;
                    }
                }
                next_comp += 1;
            }
        }
    }
    comp
}

/// Nodes reachable from `seeds` (seeds included).
pub fn reachable(adj: &[Vec<usize>], seeds: impl IntoIterator<Item = usize>) -> Vec<bool> {
    let mut seen = vec![false; adj.len()];
    let mut todo: Vec<usize> = Vec::new();
    for s in seeds {
        if !seen[s] {
            seen[s] = true;
            todo.push(s);
        }
    }
    while let Some(v) = todo.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                todo.push(w);
            }
        }
    }
    seen
}

/// Weighted edge list `(from, to, weight)` on `n` nodes: marks the nodes
/// reachable from a cycle containing an edge of positive weight.
pub fn reachable_from_positive_cycle(n: usize, edges: &[(usize, usize, u64)]) -> Vec<bool> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b, _) in edges {
        adj[a].push(b);
    }
    let comp = scc(&adj);
    let seeds = edges
        .iter()
        .filter(|&&(a, b, w)| w > 0 && comp[a] == comp[b])
        .map(|&(a, _, _)| a);
    reachable(&adj, seeds)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scc_groups_cycles() {
        let adj = vec![vec![1], vec![0, 2], vec![3], vec![2], vec![]];
        let c = scc(&adj);
        assert_eq!(c[0], c[1]);
        assert_eq!(c[2], c[3]);
        assert_ne!(c[0], c[2]);
        assert_ne!(c[4], c[2]);
    }

    #[test]
    fn positive_cycle_reachability() {
        // 0 -> 1 (w 0), 1 -> 0 (w 1), 1 -> 2, 3 isolated with zero self loop
        let r = reachable_from_positive_cycle(4, &[(0, 1, 0), (1, 0, 1), (1, 2, 0), (3, 3, 0)]);
        assert_eq!(r, vec![true, true, true, false]);
    }
}
