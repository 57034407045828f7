//! Maximum bipartite matching by augmenting paths.
//!
//! Left vertices are `0..adj.len()`, right vertices `0..n_right`. Left
//! vertices are processed in index order and neighbors in the order given,
//! so results are deterministic.

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    pub left_to_right: Vec<Option<usize>>,
    pub right_to_left: Vec<Option<usize>>,
}

impl Matching {
    pub fn size(&self) -> usize {
        self.left_to_right.iter().flatten().count()
    }

    pub fn covers_left(&self) -> bool {
        self.left_to_right.iter().all(Option::is_some)
    }
}

pub fn maximum_matching(adj: &[Vec<usize>], n_right: usize) -> Matching {
    let mut m = Matching {
        left_to_right: vec![None; adj.len()],
        right_to_left: vec![None; n_right],
    };
    let mut visited = vec![false; n_right];
    for u in 0..adj.len() {
        visited.iter_mut().for_each(|v| *v = false);
        augment(u, adj, &mut visited, &mut m);
    }
    m
}

fn augment(u: usize, adj: &[Vec<usize>], visited: &mut [bool], m: &mut Matching) -> bool {
    for &v in &adj[u] {
        if visited[v] {
            continue;
        }
        visited[v] = true;
        let free = match m.right_to_left[v] {
            None => true,
            Some(w) => augment(w, adj, visited, m),
        };
        if free {
            m.left_to_right[u] = Some(v);
            m.right_to_left[v] = Some(u);
            return true;
        }
    }
    false
}

/// For a maximum matching that leaves some left vertex exposed, returns a
/// left set `S` (sorted) together with its neighborhood `N(S)` where
/// `|N(S)| < |S|`: the vertices reachable from the first exposed left
/// vertex along alternating paths.
pub fn hall_violator(adj: &[Vec<usize>], m: &Matching) -> Option<(Vec<usize>, Vec<usize>)> {
    let start = m.left_to_right.iter().position(Option::is_none)?;
    let mut left_seen = vec![false; adj.len()];
    let mut right_seen = vec![false; m.right_to_left.len()];
    let mut stack = vec![start];
    left_seen[start] = true;
    while let Some(u) = stack.pop() {
        for &v in &adj[u] {
            if right_seen[v] {
                continue;
            }
            right_seen[v] = true;
            // every right vertex reached here is matched, else the matching was not maximum
            let w = m.right_to_left[v]?;
            if !left_seen[w] {
                left_seen[w] = true;
                stack.push(w);
            }
        }
    }
    let left = (0..adj.len()).filter(|&u| left_seen[u]).collect();
    let right = (0..right_seen.len()).filter(|&v| right_seen[v]).collect();
    Some((left, right))
}
