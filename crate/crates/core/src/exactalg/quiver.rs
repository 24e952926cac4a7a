use std::fmt::Write as _;

use serde::Serialize;

/// An arrow with multiplicity between two vertices (by index).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Arrow {
    pub source: usize,
    pub target: usize,
    pub multiplicity: usize,
}

/// A finite quiver with labeled vertices; arrows are kept sorted by
/// `(source, target)` with one entry per pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Quiver {
    pub labels: Vec<String>,
    pub arrows: Vec<Arrow>,
}

impl Quiver {
    pub fn new(labels: Vec<String>, arrows: impl IntoIterator<Item = Arrow>) -> Self {
        let mut merged: Vec<Arrow> = Vec::new();
        let mut all: Vec<Arrow> = arrows.into_iter().filter(|a| a.multiplicity > 0).collect();
        all.sort();
        for a in all {
            match merged.last_mut() {
                Some(last) if last.source == a.source && last.target == a.target => last.multiplicity += a.multiplicity,
                _ => merged.push(a),
            }
        }
        Quiver { labels, arrows: merged }
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    /// Number of arrows counted with multiplicity.
    pub fn arrow_count(&self) -> usize {
        self.arrows.iter().map(|a| a.multiplicity).sum()
    }

    pub fn multiplicity(&self, source: usize, target: usize) -> usize {
        self.arrows
            .binary_search_by(|a| (a.source, a.target).cmp(&(source, target)))
            .map(|i| self.arrows[i].multiplicity)
            .unwrap_or(0)
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.arrows.iter().filter(|a| a.source == v).map(|a| a.multiplicity).sum()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.arrows.iter().filter(|a| a.target == v).map(|a| a.multiplicity).sum()
    }

    fn topological_order(&self) -> Option<Vec<usize>> {
        let n = self.vertex_count();
        let mut indegree = vec![0usize; n];
        for a in &self.arrows {
            indegree[a.target] += 1;
        }
        let mut stack: Vec<usize> = (0..n).rev().filter(|&v| indegree[v] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(v) = stack.pop() {
            order.push(v);
            for a in self.arrows.iter().filter(|a| a.source == v) {
                indegree[a.target] -= 1;
                if indegree[a.target] == 0 {
                    stack.push(a.target);
                }
            }
        }
        (order.len() == n).then_some(order)
    }

    pub fn is_acyclic(&self) -> bool {
        self.topological_order().is_some()
    }

    /// Number of arrows in a longest path, or `None` if there is a cycle.
    pub fn longest_path(&self) -> Option<usize> {
        let order = self.topological_order()?;
        let mut best = vec![0usize; self.vertex_count()];
        for &v in &order {
            for a in self.arrows.iter().filter(|a| a.source == v) {
                best[a.target] = best[a.target].max(best[v] + 1);
            }
        }
        Some(best.into_iter().max().unwrap_or(0))
    }

    /// Graphviz rendering with stable vertex names `v0, v1, …`.
    pub fn to_dot(&self, name: &str) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "digraph \"{name}\" {{");
        for (i, l) in self.labels.iter().enumerate() {
            let _ = writeln!(s, "  v{i} [label=\"{}\"];", l.replace('"', "\\\""));
        }
        for a in &self.arrows {
            if a.multiplicity == 1 {
                let _ = writeln!(s, "  v{} -> v{};", a.source, a.target);
            } else {
                let _ = writeln!(s, "  v{} -> v{} [label=\"{}\"];", a.source, a.target, a.multiplicity);
            }
        }
        s.push_str("}\n");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn arrow(source: usize, target: usize) -> Arrow {
        Arrow {
            source,
            target,
            multiplicity: 1,
        }
    }

    #[test]
    fn longest_path_and_cycles() {
        let q = Quiver::new(vec!["a".into(), "b".into(), "c".into()], [arrow(0, 1), arrow(1, 2), arrow(0, 2), arrow(0, 1)]);
        assert_eq!(q.multiplicity(0, 1), 2);
        assert_eq!(q.arrow_count(), 4);
        assert_eq!(q.longest_path(), Some(2));
        assert_eq!(q.out_degree(0), 3);
        let cyclic = Quiver::new(vec!["a".into(), "b".into()], [arrow(0, 1), arrow(1, 0)]);
        assert!(!cyclic.is_acyclic());
        let looped = Quiver::new(vec!["a".into()], [arrow(0, 0)]);
        assert_eq!(looped.longest_path(), None);
    }

    #[test]
    fn dot_is_stable() {
        let q = Quiver::new(vec!["{1;-}".into(), "{;1}".into()], [arrow(0, 1)]);
        assert_eq!(q.to_dot("Q"), q.clone().to_dot("Q"));
        assert!(q.to_dot("Q").contains("v0 -> v1;"));
    }
}
