use std::collections::{HashMap, VecDeque};

use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::RationalMatrix;

/// A directed spanning tree and a directed graph on one vertex set.
///
/// JSON form: `{"vertices": [..], "tree": [[u, v], ..], "edges": [[u, v], ..]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawInstance")]
pub struct NetworkInstance {
    vertices: Vec<String>,
    tree: Vec<(String, String)>,
    edges: Vec<(String, String)>,
}

#[derive(Deserialize)]
struct RawInstance {
    vertices: Vec<String>,
    tree: Vec<(String, String)>,
    edges: Vec<(String, String)>,
}

impl TryFrom<RawInstance> for NetworkInstance {
    type Error = Error;

    fn try_from(raw: RawInstance) -> Result<Self> {
        NetworkInstance::new(raw.vertices, raw.tree, raw.edges)
    }
}

impl NetworkInstance {
    pub fn new(
        vertices: Vec<String>,
        tree: Vec<(String, String)>,
        edges: Vec<(String, String)>,
    ) -> Result<Self> {
        let inst = NetworkInstance {
            vertices,
            tree,
            edges,
        };
        let index = inst.index()?;
        for (u, v) in inst.tree.iter().chain(&inst.edges) {
            for w in [u, v] {
                if !index.contains_key(w.as_str()) {
                    return Err(Error::UnknownVertex(w.clone()));
                }
            }
        }
        let nv = inst.vertices.len();
        if inst.tree.len() + 1 != nv {
            return Err(Error::NotATree(format!(
                "{} arcs on {} vertices",
                inst.tree.len(),
                nv
            )));
        }
        let adj = inst.adjacency(&index);
        let mut seen = vec![false; nv];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for &(y, _, _) in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        if let Some(i) = seen.iter().position(|s| !s) {
            return Err(Error::NotATree(format!(
                "vertex {} is not connected",
                inst.vertices[i]
            )));
        }
        Ok(inst)
    }

    /// Convenience constructor from string slices.
    pub fn from_strs(vertices: &[&str], tree: &[(&str, &str)], edges: &[(&str, &str)]) -> Result<Self> {
        let own = |a: &[(&str, &str)]| a.iter().map(|(u, v)| (u.to_string(), v.to_string())).collect();
        Self::new(
            vertices.iter().map(|s| s.to_string()).collect(),
            own(tree),
            own(edges),
        )
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn tree_arcs(&self) -> &[(String, String)] {
        &self.tree
    }

    pub fn graph_arcs(&self) -> &[(String, String)] {
        &self.edges
    }

    fn index(&self) -> Result<HashMap<&str, usize>> {
        if self.vertices.is_empty() {
            return Err(Error::NotATree("no vertices".into()));
        }
        let mut index = HashMap::with_capacity(self.vertices.len());
        for (i, v) in self.vertices.iter().enumerate() {
            if index.insert(v.as_str(), i).is_some() {
                return Err(Error::DuplicateVertex(v.clone()));
            }
        }
        Ok(index)
    }

    /// For each vertex: (neighbour, tree arc index, +1 if the arc points to
    /// the neighbour, -1 otherwise).
    fn adjacency(&self, index: &HashMap<&str, usize>) -> Vec<Vec<(usize, usize, i8)>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for (k, (u, v)) in self.tree.iter().enumerate() {
            let (a, b) = (index[u.as_str()], index[v.as_str()]);
            adj[a].push((b, k, 1));
            adj[b].push((a, k, -1));
        }
        adj
    }
}

/// The `tree arcs x graph arcs` matrix `M`.
///
/// For a graph arc `(u, v)` let `P` be the unique tree path from `u` to `v`.
/// `M[x][(u, v)]` is `1` when tree arc `x` is traversed forward along `P`, `-1`
/// when traversed backward, and `0` when `x` is not on `P`. Some statements of
/// this definition write the condition as "b occurs in forward direction in P"
/// without introducing `b`; it is read here as the tree arc `x`.
///
/// Rows follow the order of [`NetworkInstance::tree_arcs`], columns that of
/// [`NetworkInstance::graph_arcs`]. A loop `(u, u)` gives a zero column.
pub fn network_matrix(inst: &NetworkInstance) -> RationalMatrix {
    let index = inst.index().expect("validated at construction");
    let adj = inst.adjacency(&index);
    let nv = inst.vertices.len();
    let mut m = RationalMatrix::zeros(inst.tree.len(), inst.edges.len());
    for (col, (u, v)) in inst.edges.iter().enumerate() {
        let (s, t) = (index[u.as_str()], index[v.as_str()]);
        // BFS from s; parent[x] = (previous vertex, arc, direction of travel)
        let mut parent: Vec<Option<(usize, usize, i8)>> = vec![None; nv];
        let mut seen = vec![false; nv];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            if x == t {
                break;
            }
            for &(y, arc, dir) in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    parent[y] = Some((x, arc, dir));
                    queue.push_back(y);
                }
            }
        }
        let mut x = t;
        while let Some((prev, arc, dir)) = parent[x] {
            let value = if dir > 0 {
                BigRational::one()
            } else {
                -BigRational::one()
            };
            m.set(arc, col, value);
            x = prev;
        }
    }
    m
}

fn e(i: usize) -> String {
    format!("e{i}")
}

fn f(j: usize) -> String {
    format!("f{j}")
}

/// The matrix `A` and the tree/graph pair for the complete bipartite case.
///
/// `A` is `mn x (m + n + 1)`. Row `(j - 1) * m + (i - 1)` is the coordinate of
/// `e_i ⊗ f_j`, where `e_0 = -(e_1 + .. + e_m)` and `f_0 = -(f_1 + .. + f_n)`.
/// Columns are `e_0 ⊗ f_0`, then `e_0 ⊗ f_j` for `j = 1..=n`, then `e_i ⊗ f_0`
/// for `i = 1..=m`.
///
/// The tree is `(e0, f0)`, `(e0, fj)`, `(ei, f0)` in that order. Graph arcs run
/// `(fj, ei)`, `j`-major, so that `network_matrix` equals the transpose of `A`
/// exactly; with arcs `(ei, fj)` it would equal its negative.
pub fn bipartite_construction(m: usize, n: usize) -> Result<(RationalMatrix, NetworkInstance)> {
    for (what, got) in [("m", m), ("n", n)] {
        if got == 0 {
            return Err(Error::TooSmall { what, min: 1, got: got as u64 });
        }
    }
    let one = BigRational::one();
    let mut a = RationalMatrix::zeros(m * n, m + n + 1);
    for j in 1..=n {
        for i in 1..=m {
            let row = (j - 1) * m + (i - 1);
            a.set(row, 0, one.clone());
            a.set(row, j, -one.clone());
            a.set(row, n + i, -one.clone());
        }
    }

    let vertices: Vec<String> = (0..=m).map(e).chain((0..=n).map(f)).collect();
    let mut tree = vec![(e(0), f(0))];
    tree.extend((1..=n).map(|j| (e(0), f(j))));
    tree.extend((1..=m).map(|i| (e(i), f(0))));
    let edges = (1..=n)
        .flat_map(|j| (1..=m).map(move |i| (f(j), e(i))))
        .collect();
    Ok((a, NetworkInstance::new(vertices, tree, edges)?))
}
