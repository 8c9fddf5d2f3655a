//! Glued k-ary trees `G_k(2n)` and the reduction of their random walk to the
//! path `P_2n`.
//!
//! Each half is a k-ary tree of height `n` (root at height 1). Every leaf
//! carries `k` potential edges; the gluing pairs the `k · k^{n-1}` potential
//! edges of side 1 with those of side 2 by a uniformly random perfect matching.
//! The same leaf pair may be drawn more than once, so glue edges form a
//! multiset; [`GluedTree::build_simple`] rejects such draws instead.
//!
//! Height `h` on side 1 maps to path vertex `h`, height `h` on side 2 to
//! `2n + 1 - h`. With `p = 1/(k+1)` the height classes are exactly lumpable
//! onto the chain of [`path_transition_matrix`].

use std::collections::{BTreeMap, HashSet};
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::params::WalkParams;

const MAX_SIMPLE_ATTEMPTS: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Vertex {
    /// 1 or 2.
    pub side: u8,
    /// 1 (root) ..= n (leaves).
    pub height: usize,
    /// Position within its height level, from 0.
    pub index: usize,
}

impl Vertex {
    pub fn label(&self) -> String {
        format!("s{}h{}i{}", self.side, self.height, self.index)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GluedTree {
    pub k: usize,
    pub n: usize,
    pub seed: u64,
    pub vertices: Vec<Vertex>,
    /// Tree edges of side 1, tree edges of side 2, then glue edges
    /// `(side-1 leaf, side-2 leaf)`.
    pub edges: Vec<(usize, usize)>,
    /// Number of glue edges at the end of `edges`.
    pub glue_edges: usize,
}

/// Row-stochastic matrix stored as sorted `(column, probability)` rows.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseTransition {
    pub rows: Vec<Vec<(usize, f64)>>,
}

impl SparseTransition {
    /// One step of the distribution `μ -> μ P`.
    pub fn propagate(&self, dist: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; dist.len()];
        for (i, row) in self.rows.iter().enumerate() {
            if dist[i] == 0.0 {
                continue;
            }
            for &(j, pij) in row {
                out[j] += dist[i] * pij;
            }
        }
        out
    }
}

fn level_offsets(k: usize, n: usize) -> Vec<usize> {
    let mut offsets = vec![0; n + 2];
    let mut width = 1;
    for h in 1..=n {
        offsets[h + 1] = offsets[h] + width;
        width *= k;
    }
    offsets
}

impl GluedTree {
    /// Glued tree with a uniformly random potential-edge matching.
    pub fn build(k: usize, n: usize, seed: u64) -> Result<Self> {
        let mut tree = Self::skeleton(k, n, seed)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (left, mut right) = tree.leaf_slots();
        right.shuffle(&mut rng);
        tree.attach(&left, &right);
        Ok(tree)
    }

    /// Like [`GluedTree::build`] but redraws the matching until no leaf pair
    /// is joined twice.
    pub fn build_simple(k: usize, n: usize, seed: u64) -> Result<Self> {
        let mut tree = Self::skeleton(k, n, seed)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (left, mut right) = tree.leaf_slots();
        for _ in 0..MAX_SIMPLE_ATTEMPTS {
            right.shuffle(&mut rng);
            let mut seen = HashSet::with_capacity(left.len());
            if left.iter().zip(&right).all(|pair| seen.insert(pair)) {
                tree.attach(&left, &right);
                return Ok(tree);
            }
        }
        Err(Error::Gluing(format!(
            "no simple gluing found in {MAX_SIMPLE_ATTEMPTS} draws for k = {k}, n = {n}"
        )))
    }

    fn skeleton(k: usize, n: usize, seed: u64) -> Result<Self> {
        if k < 2 || n < 2 {
            return Err(Error::InvalidParams(format!("need k >= 2 and n >= 2, got k = {k}, n = {n}")));
        }
        let offsets = level_offsets(k, n);
        let half = offsets[n + 1];
        let mut vertices = Vec::with_capacity(2 * half);
        let mut edges = Vec::new();
        for side in [1u8, 2] {
            let base = if side == 1 { 0 } else { half };
            for h in 1..=n {
                for index in 0..offsets[h + 1] - offsets[h] {
                    vertices.push(Vertex { side, height: h, index });
                    if h > 1 {
                        let parent = base + offsets[h - 1] + index / k;
                        edges.push((parent, base + offsets[h] + index));
                    }
                }
            }
        }
        Ok(Self { k, n, seed, vertices, edges, glue_edges: 0 })
    }

    /// Potential-edge slots of the side-1 and side-2 leaves, `k` per leaf.
    fn leaf_slots(&self) -> (Vec<usize>, Vec<usize>) {
        let offsets = level_offsets(self.k, self.n);
        let half = offsets[self.n + 1];
        let leaves = offsets[self.n]..half;
        let slots = |base: usize| {
            leaves
                .clone()
                .flat_map(|leaf| std::iter::repeat_n(base + leaf, self.k))
                .collect::<Vec<_>>()
        };
        (slots(0), slots(half))
    }

    fn attach(&mut self, left: &[usize], right: &[usize]) {
        self.edges.extend(left.iter().copied().zip(right.iter().copied()));
        self.glue_edges = left.len();
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertices.len()];
        for &(u, v) in &self.edges {
            deg[u] += 1;
            deg[v] += 1;
        }
        deg
    }

    /// Number of glue edges duplicating an earlier glue edge.
    pub fn repeated_glue_edges(&self) -> usize {
        let mut seen = HashSet::new();
        self.glue().iter().filter(|e| !seen.insert(**e)).count()
    }

    pub fn glue(&self) -> &[(usize, usize)] {
        &self.edges[self.edges.len() - self.glue_edges..]
    }

    /// Path vertex of a tree vertex.
    pub fn path_class(&self, v: usize) -> usize {
        let vertex = self.vertices[v];
        if vertex.side == 1 {
            vertex.height
        } else {
            2 * self.n + 1 - vertex.height
        }
    }

    /// One `u v` line per edge, with labels `s<side>h<height>i<index>`.
    pub fn edge_list(&self) -> String {
        let mut out = String::new();
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "{} {}", self.vertices[u].label(), self.vertices[v].label());
        }
        out
    }

    pub fn walk_params(&self) -> WalkParams {
        WalkParams::from_arity(self.n, self.k).expect("tree dimensions were validated")
    }
}

/// Simple random walk on the glued tree; multi-edges count with multiplicity.
pub fn tree_walk_probabilities(tree: &GluedTree) -> SparseTransition {
    let mut counts: Vec<BTreeMap<usize, usize>> = vec![BTreeMap::new(); tree.vertex_count()];
    for &(u, v) in &tree.edges {
        *counts[u].entry(v).or_default() += 1;
        *counts[v].entry(u).or_default() += 1;
    }
    let rows = counts
        .into_iter()
        .map(|row| {
            let degree: usize = row.values().sum();
            row.into_iter().map(|(j, c)| (j, c as f64 / degree as f64)).collect()
        })
        .collect();
    SparseTransition { rows }
}

/// The birth–death chain on `P_2n`.
#[derive(Debug, Clone, PartialEq)]
pub struct PathChain {
    pub n: usize,
    /// `transition[(i-1, j-1)] = p_{i,j}`.
    pub transition: Matrix,
}

impl PathChain {
    pub fn propagate(&self, dist: &[f64]) -> Vec<f64> {
        let m = 2 * self.n;
        (0..m).map(|j| (0..m).map(|i| dist[i] * self.transition[(i, j)]).sum()).collect()
    }
}

/// `p_{1,2} = p_{2n,2n-1} = 1`; steps toward the centre have probability `q`
/// and steps toward the nearer end have probability `p`.
pub fn path_transition_matrix(params: &WalkParams) -> PathChain {
    let (n, p, q) = (params.n(), params.p(), params.q());
    let m = 2 * n;
    let mut t = Matrix::zeros(m, m);
    t[(0, 1)] = 1.0;
    t[(m - 1, m - 2)] = 1.0;
    for i in 2..m {
        let (up, down) = if i <= n { (q, p) } else { (p, q) };
        t[(i - 1, i)] = up;
        t[(i - 1, i - 2)] = down;
    }
    PathChain { n, transition: t }
}

/// Projected tree-walk distributions: `[start vertex][t][path vertex - 1]`
/// for `t = 0..=steps`.
pub fn projected_trajectories(tree: &GluedTree, steps: usize) -> Vec<Vec<Vec<f64>>> {
    let walk = tree_walk_probabilities(tree);
    let m = 2 * tree.n;
    let project = |dist: &[f64]| {
        let mut out = vec![0.0; m];
        for (v, mass) in dist.iter().enumerate() {
            out[tree.path_class(v) - 1] += mass;
        }
        out
    };
    (0..tree.vertex_count())
        .map(|start| {
            let mut dist = vec![0.0; tree.vertex_count()];
            dist[start] = 1.0;
            let mut traj = Vec::with_capacity(steps + 1);
            traj.push(project(&dist));
            for _ in 0..steps {
                dist = walk.propagate(&dist);
                traj.push(project(&dist));
            }
            traj
        })
        .collect()
}

/// Largest gap between projected tree-walk distributions and the path chain
/// started at the matching path vertex, over every start vertex, every
/// `t <= steps` and every path vertex.
pub fn verify_lumping(tree: &GluedTree, steps: usize) -> f64 {
    let chain = path_transition_matrix(&tree.walk_params());
    let m = 2 * tree.n;
    let mut worst = 0.0f64;
    for (start, traj) in projected_trajectories(tree, steps).iter().enumerate() {
        let mut dist = vec![0.0; m];
        dist[tree.path_class(start) - 1] = 1.0;
        for projected in traj {
            for (a, b) in projected.iter().zip(&dist) {
                worst = worst.max((a - b).abs());
            }
            dist = chain.propagate(&dist);
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_glued_tree_shape() {
        let t = GluedTree::build(2, 3, 7).unwrap();
        assert_eq!(t.vertex_count(), 14);
        assert_eq!(t.edge_count(), 20);
        assert_eq!(t.glue_edges, 8);
        let deg = t.degrees();
        for (v, vertex) in t.vertices.iter().enumerate() {
            let expected = if vertex.height == 1 { 2 } else { 3 };
            assert_eq!(deg[v], expected, "{}", vertex.label());
        }
    }

    #[test]
    fn degrees_and_glue_regularity() {
        for (k, n) in [(2, 3), (3, 2), (2, 5)] {
            for seed in 0..5 {
                let t = GluedTree::build(k, n, seed).unwrap();
                let deg = t.degrees();
                for (v, vertex) in t.vertices.iter().enumerate() {
                    assert_eq!(deg[v], if vertex.height == 1 { k } else { k + 1 });
                }
                let mut glue_deg = vec![0; t.vertex_count()];
                for &(u, v) in t.glue() {
                    assert_eq!(t.vertices[u].side, 1);
                    assert_eq!(t.vertices[v].side, 2);
                    glue_deg[u] += 1;
                    glue_deg[v] += 1;
                }
                for (v, vertex) in t.vertices.iter().enumerate() {
                    assert_eq!(glue_deg[v], if vertex.height == n { k } else { 0 });
                }
            }
        }
    }

    #[test]
    fn counts_follow_formulas() {
        for (k, n) in [(2usize, 2usize), (3, 4), (4, 3)] {
            let t = GluedTree::build(k, n, 1).unwrap();
            let per_half: usize = (1..=n).map(|h| k.pow(h as u32 - 1)).sum();
            let inner: usize = (2..=n).map(|h| k.pow(h as u32 - 1)).sum();
            assert_eq!(t.vertex_count(), 2 * per_half);
            assert_eq!(t.edge_count(), 2 * inner + k * k.pow(n as u32 - 1));
        }
    }

    #[test]
    fn deterministic_given_seed() {
        let a = GluedTree::build(3, 3, 99).unwrap();
        let b = GluedTree::build(3, 3, 99).unwrap();
        assert_eq!(a.edge_list(), b.edge_list());
        let c = GluedTree::build(3, 3, 100).unwrap();
        assert_ne!(a.glue(), c.glue());
    }

    #[test]
    fn simple_gluing_has_no_repeats() {
        for seed in 0..5 {
            let t = GluedTree::build_simple(3, 2, seed).unwrap();
            assert_eq!(t.repeated_glue_edges(), 0);
        }
    }

    #[test]
    fn walk_probabilities() {
        let t = GluedTree::build(3, 3, 5).unwrap();
        let walk = tree_walk_probabilities(&t);
        // side-1 root: 1/k to each child
        assert_eq!(walk.rows[0].len(), 3);
        for &(j, pr) in &walk.rows[0] {
            assert_eq!(t.vertices[j].height, 2);
            assert!((pr - 1.0 / 3.0).abs() < 1e-15);
        }
        for (v, row) in walk.rows.iter().enumerate() {
            let total: f64 = row.iter().map(|(_, pr)| pr).sum();
            assert!((total - 1.0).abs() < 1e-14);
            let vertex = t.vertices[v];
            if vertex.height > 1 {
                let up: f64 = row
                    .iter()
                    .filter(|(j, _)| t.vertices[*j].side == vertex.side && t.vertices[*j].height < vertex.height)
                    .map(|(_, pr)| pr)
                    .sum();
                assert!((up - 0.25).abs() < 1e-15);
            }
            if vertex.side == 1 && vertex.height == 3 {
                let across: f64 =
                    row.iter().filter(|(j, _)| t.vertices[*j].side == 2).map(|(_, pr)| pr).sum();
                assert!((across - 0.75).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn path_chain_rows() {
        let chain = path_transition_matrix(&WalkParams::new(3, 1.0 / 3.0).unwrap());
        let row2 = chain.transition.row(1);
        assert_eq!(row2, &[1.0 / 3.0, 0.0, 1.0 - 1.0 / 3.0, 0.0, 0.0, 0.0]);
        for s in chain.transition.row_sums() {
            assert_eq!(s, 1.0);
        }
    }

    #[test]
    fn root_reaches_height_two() {
        let t = GluedTree::build(2, 3, 3).unwrap();
        let traj = projected_trajectories(&t, 1);
        assert_eq!(traj[0][1], vec![0.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn lumping_is_exact() {
        let t = GluedTree::build(2, 3, 11).unwrap();
        assert!(verify_lumping(&t, 50) <= 1e-12);
    }

    #[test]
    fn label_format() {
        let t = GluedTree::build(2, 2, 0).unwrap();
        assert_eq!(t.vertices[0].label(), "s1h1i0");
        assert_eq!(t.vertices[5].label(), "s2h2i1");
        assert!(t.edge_list().starts_with("s1h1i0 s1h2i0\n"));
    }
}
