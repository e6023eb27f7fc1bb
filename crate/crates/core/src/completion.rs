//! Completing a multiplicative coefficient matrix from some of its entries.
//!
//! Each specified off-diagonal entry `a_ij` is an edge of a graph on the
//! indices and fixes the ratio `f(i)/f(j)`. A depth-first spanning forest
//! propagates `f` from the lowest index of each component; every entry left
//! out of the forest closes a cycle whose consistency is then checked. The
//! propagation works on ratios directly, so no logarithm branch is ever chosen.

use std::f64::consts::TAU;

use crate::error::{Result, SchurError};
use crate::matrix::{ComplexMatrix, Tolerance, C64};
use crate::multiplicative::ScalingVector;

/// Square matrix with some entries unspecified.
#[derive(Debug, Clone, PartialEq)]
pub struct PartialMatrix {
    n: usize,
    entries: Vec<Option<C64>>,
}

impl PartialMatrix {
    /// `entries` is row-major; `None` marks an unspecified entry. Specified
    /// entries must be finite and nonzero.
    pub fn new(n: usize, entries: Vec<Option<C64>>) -> Result<Self> {
        if n == 0 {
            return Err(SchurError::InvalidDimensions("n must be positive".into()));
        }
        if entries.len() != n * n {
            return Err(SchurError::InvalidDimensions(format!(
                "{n}x{n} needs {} entries, got {}",
                n * n,
                entries.len()
            )));
        }
        for (pos, z) in entries.iter().enumerate() {
            let Some(z) = z else { continue };
            let (row, col) = (pos / n + 1, pos % n + 1);
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(SchurError::NonFinite { row, col });
            }
            if z.norm() == 0.0 {
                return Err(SchurError::ZeroEntry { row, col });
            }
        }
        Ok(Self { n, entries })
    }

    /// Nothing specified.
    pub fn empty(n: usize) -> Self {
        Self::new(n, vec![None; n * n]).expect("empty partial matrix is valid")
    }

    /// Keeps the entries of `a` where `mask(i, j)` (0-based) is true.
    pub fn from_mask(a: &ComplexMatrix, mask: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let n = a.require_square("PartialMatrix::from_mask")?;
        let entries = (0..n * n)
            .map(|p| {
                let (i, j) = (p / n, p % n);
                mask(i, j).then(|| a[(i, j)])
            })
            .collect();
        Self::new(n, entries)
    }

    /// Specifies `a_ij` (0-based).
    pub fn set(&mut self, i: usize, j: usize, value: C64) -> Result<()> {
        assert!(i < self.n && j < self.n, "index out of range");
        if value.norm() == 0.0 {
            return Err(SchurError::ZeroEntry { row: i + 1, col: j + 1 });
        }
        self.entries[i * self.n + j] = Some(value);
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Option<C64> {
        self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[Option<C64>] {
        &self.entries
    }

    /// Specified entries as 0-based `(i, j, value)` in row-major order.
    pub fn specified(&self) -> impl Iterator<Item = (usize, usize, C64)> + '_ {
        self.entries
            .iter()
            .enumerate()
            .filter_map(move |(p, z)| z.map(|z| (p / self.n, p % self.n, z)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompletionStatus {
    Completed,
    Inconsistent,
    Underdetermined,
}

impl CompletionStatus {
    pub fn label(self) -> &'static str {
        match self {
            CompletionStatus::Completed => "completed",
            CompletionStatus::Inconsistent => "inconsistent",
            CompletionStatus::Underdetermined => "underdetermined",
        }
    }
}

/// A specified entry contradicting the others.
///
/// `cycle` lists 1-based indices `i, ..., j` along the spanning forest from
/// `i` to `j`; the violating entry `a_ij` closes it. A single index marks a
/// specified diagonal entry different from 1.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub entry: (usize, usize),
    pub cycle: Vec<usize>,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompletionReport {
    pub status: CompletionStatus,
    pub matrix: Option<ComplexMatrix>,
    pub scaling: Option<ScalingVector>,
    pub violations: Vec<Violation>,
    /// Connected components (1-based, ascending) of the constraint graph.
    pub components: Vec<Vec<usize>>,
}

#[derive(Clone, Copy)]
struct Edge {
    i: usize,
    j: usize,
    value: C64,
}

/// Completes `p` to a multiplicative matrix, reports the cycles that make it
/// impossible, or lists the components that leave it underdetermined.
///
/// With `star_preserving`, every specified entry must be unimodular; the
/// completion is then Hermitian with unimodular entries.
pub fn complete_partial(p: &PartialMatrix, tol: Tolerance, star_preserving: bool) -> Result<CompletionReport> {
    let n = p.n();
    let one = C64::new(1.0, 0.0);

    if star_preserving {
        if let Some((i, j, z)) = p.specified().find(|(_, _, z)| (z.norm() - 1.0).abs() > tol.unit()) {
            return Err(SchurError::Precondition(format!(
                "star-preserving completion needs unimodular entries; a_{},{} has modulus {}",
                i + 1,
                j + 1,
                z.norm()
            )));
        }
    }

    let mut violations = Vec::new();
    let mut edges = Vec::new();
    for (i, j, value) in p.specified() {
        if i == j {
            let residual = (value - one).norm();
            if residual > tol.unit() {
                violations.push(Violation {
                    entry: (i + 1, i + 1),
                    cycle: vec![i + 1],
                    residual,
                });
            }
        } else {
            edges.push(Edge { i, j, value });
        }
    }

    let mut adjacency: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (id, e) in edges.iter().enumerate() {
        adjacency[e.i].push((e.j, id));
        adjacency[e.j].push((e.i, id));
    }
    for list in &mut adjacency {
        list.sort_unstable();
    }

    // Depth-first spanning forest, lowest-numbered neighbour first.
    let mut f = vec![C64::new(0.0, 0.0); n];
    let mut visited = vec![false; n];
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut depth = vec![0usize; n];
    let mut tree_edge = vec![false; edges.len()];
    let mut components = Vec::new();
    for root in 0..n {
        if visited[root] {
            continue;
        }
        visited[root] = true;
        f[root] = one;
        let mut members = vec![root];
        let mut stack = vec![(root, 0usize)];
        while let Some(&mut (u, ref mut next)) = stack.last_mut() {
            if *next == adjacency[u].len() {
                stack.pop();
                continue;
            }
            let (v, id) = adjacency[u][*next];
            *next += 1;
            if visited[v] {
                continue;
            }
            let e = edges[id];
            // a_ij = f(i)/f(j)
            f[v] = if e.i == u { f[u] / e.value } else { f[u] * e.value };
            visited[v] = true;
            parent[v] = Some((u, id));
            depth[v] = depth[u] + 1;
            tree_edge[id] = true;
            members.push(v);
            stack.push((v, 0));
        }
        members.sort_unstable();
        components.push(members.into_iter().map(|v| v + 1).collect::<Vec<_>>());
    }

    for (id, e) in edges.iter().enumerate() {
        if tree_edge[id] {
            continue;
        }
        let predicted = f[e.i] / f[e.j];
        let residual = (e.value - predicted).norm();
        if residual > tol.bound(e.value.norm()) {
            violations.push(Violation {
                entry: (e.i + 1, e.j + 1),
                cycle: tree_path(e.i, e.j, &parent, &depth)
                    .into_iter()
                    .map(|v| v + 1)
                    .collect(),
                residual,
            });
        }
    }

    let (status, matrix, scaling) = if !violations.is_empty() {
        (CompletionStatus::Inconsistent, None, None)
    } else if components.len() > 1 {
        (CompletionStatus::Underdetermined, None, None)
    } else {
        let m = ComplexMatrix::from_fn(n, n, |i, j| if i == j { one } else { f[i] / f[j] });
        (CompletionStatus::Completed, Some(m), Some(ScalingVector::new(f)?))
    };
    Ok(CompletionReport {
        status,
        matrix,
        scaling,
        violations,
        components,
    })
}

/// Vertices on the forest path from `from` to `to` (same component).
fn tree_path(from: usize, to: usize, parent: &[Option<(usize, usize)>], depth: &[usize]) -> Vec<usize> {
    let mut up = vec![from];
    let mut down = vec![to];
    let (mut a, mut b) = (from, to);
    while depth[a] > depth[b] {
        a = parent[a].expect("non-root has a parent").0;
        up.push(a);
    }
    while depth[b] > depth[a] {
        b = parent[b].expect("non-root has a parent").0;
        down.push(b);
    }
    while a != b {
        a = parent[a].expect("non-root has a parent").0;
        b = parent[b].expect("non-root has a parent").0;
        up.push(a);
        down.push(b);
    }
    down.pop();
    up.extend(down.into_iter().rev());
    up
}

/// `b_ij = ln(a_ij) / (2πi)` on the principal branch, real part reduced to
/// `[0, 1)`. The imaginary part `-ln|a_ij| / 2π` carries the modulus.
pub fn log_coordinates(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            if a[(i, j)].norm() == 0.0 {
                return Err(SchurError::ZeroEntry { row: i + 1, col: j + 1 });
            }
        }
    }
    Ok(a.map(|z| {
        let mut turn = (z.arg() / TAU).rem_euclid(1.0);
        if turn >= 1.0 {
            turn = 0.0;
        }
        C64::new(turn, -z.norm().ln() / TAU)
    }))
}
