use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{all_integral, Scalar};

/// A finite metric space stored as a dense, row-major distance table.
///
/// Construction always goes through validation, so every instance satisfies
/// the metric axioms up to the axiom tolerance it was built with.
#[derive(Debug, Clone, Serialize)]
pub struct FiniteMetricSpace<T> {
    ids: Vec<String>,
    #[serde(skip)]
    index: HashMap<String, usize>,
    dist: Vec<T>,
    integral: bool,
}

/// Where a distance table comes from.
#[derive(Debug, Clone)]
pub enum SpaceSource<T> {
    /// Explicit table, rows indexed like `ids`.
    Table { ids: Vec<String>, rows: Vec<Vec<T>> },
    /// Weighted undirected graph; distances are shortest-path lengths.
    Graph { ids: Vec<String>, edges: Vec<(usize, usize, T)> },
    /// Points of `R^n` under the `p`-norm.
    Cloud { ids: Vec<String>, coords: Vec<Vec<T>>, p: T },
}

impl<T: Scalar> FiniteMetricSpace<T> {
    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, i: usize) -> &str {
        &self.ids[i]
    }

    pub fn index_of(&self, id: &str) -> Result<usize> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownPoint(id.to_string()))
    }

    #[inline]
    pub fn dist(&self, i: usize, j: usize) -> T {
        self.dist[i * self.len() + j]
    }

    pub fn row(&self, i: usize) -> &[T] {
        let n = self.len();
        &self.dist[i * n..(i + 1) * n]
    }

    /// True when every distance is an integer (exact instance).
    pub fn is_integral(&self) -> bool {
        self.integral
    }

    pub fn diameter(&self) -> T {
        self.dist.iter().copied().fold(T::zero(), T::max)
    }

    /// Largest distance between two points of `set`.
    pub fn set_diameter(&self, set: &[usize]) -> T {
        let mut best = T::zero();
        for &a in set {
            for &b in set {
                best = best.max(self.dist(a, b));
            }
        }
        best
    }

    /// Rows of the table, for serialization.
    pub fn rows(&self) -> Vec<Vec<T>> {
        (0..self.len()).map(|i| self.row(i).to_vec()).collect()
    }

    /// Build without the O(n^3) triangle scan. Used by constructors whose
    /// output is a metric by construction.
    fn from_trusted(ids: Vec<String>, dist: Vec<T>) -> Result<Self> {
        let index = index_ids(&ids)?;
        let integral = all_integral(&dist);
        let space = FiniteMetricSpace { ids, index, dist, integral };
        let n = space.len();
        for i in 0..n {
            for j in (i + 1)..n {
                if space.dist(i, j) <= T::zero() {
                    return Err(Error::ZeroDistanceDistinctPoints(
                        space.ids[i].clone(),
                        space.ids[j].clone(),
                    ));
                }
            }
        }
        Ok(space)
    }
}

fn index_ids(ids: &[String]) -> Result<HashMap<String, usize>> {
    let mut index = HashMap::with_capacity(ids.len());
    for (i, id) in ids.iter().enumerate() {
        if index.insert(id.clone(), i).is_some() {
            return Err(Error::DuplicateId(id.clone()));
        }
    }
    Ok(index)
}

/// Validate a square table against the metric axioms with the scalar's
/// default axiom tolerance (zero for integer tables).
pub fn validate_metric<T: Scalar>(ids: Vec<String>, rows: Vec<Vec<T>>) -> Result<FiniteMetricSpace<T>> {
    let flat: Vec<T> = rows.iter().flatten().copied().collect();
    let tol = if all_integral(&flat) { T::zero() } else { T::of(T::AXIOM_TOLERANCE) };
    validate_metric_with(ids, rows, tol)
}

/// Validate with an explicit absolute tolerance.
///
/// The first violated axiom is reported, checked in the order: shape,
/// entries, diagonal, symmetry, separation, triangle. For the triangle
/// inequality the witness is the triple with the largest excess; ties go to
/// the lexicographically first endpoint pair and then to the intermediate
/// point closest to the first endpoint.
pub fn validate_metric_with<T: Scalar>(
    ids: Vec<String>,
    rows: Vec<Vec<T>>,
    tol: T,
) -> Result<FiniteMetricSpace<T>> {
    let n = rows.len();
    if ids.len() != n {
        return Err(Error::IdCountMismatch { rows: n, ids: ids.len() });
    }
    for (row, r) in rows.iter().enumerate() {
        if r.len() != n {
            return Err(Error::NotSquare { row, len: r.len(), expected: n });
        }
    }
    let index = index_ids(&ids)?;
    for i in 0..n {
        for j in 0..n {
            let v = rows[i][j];
            if !v.is_finite() || v < T::zero() {
                return Err(Error::InvalidDistance(ids[i].clone(), ids[j].clone()));
            }
        }
    }
    for i in 0..n {
        if rows[i][i] > tol {
            return Err(Error::NonzeroSelfDistance(ids[i].clone()));
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (rows[i][j] - rows[j][i]).abs() > tol {
                return Err(Error::Asymmetry(ids[i].clone(), ids[j].clone()));
            }
            if rows[i][j] <= tol {
                return Err(Error::ZeroDistanceDistinctPoints(ids[i].clone(), ids[j].clone()));
            }
        }
    }
    let mut worst: Option<(T, usize, usize, usize)> = None;
    for x in 0..n {
        for z in (x + 1)..n {
            for y in 0..n {
                let excess = rows[x][z] - (rows[x][y] + rows[y][z]);
                if excess <= tol {
                    continue;
                }
                let better = match worst {
                    None => true,
                    Some((e, wx, wz, wy)) => {
                        excess > e
                            || (excess == e
                                && (x, z) == (wx, wz)
                                && rows[x][y] < rows[x][wy])
                    }
                };
                if better {
                    worst = Some((excess, x, z, y));
                }
            }
        }
    }
    if let Some((_, x, z, y)) = worst {
        return Err(Error::TriangleViolation {
            x: ids[x].clone(),
            y: ids[y].clone(),
            z: ids[z].clone(),
        });
    }
    let dist: Vec<T> = rows.into_iter().flatten().collect();
    let integral = all_integral(&dist);
    Ok(FiniteMetricSpace { ids, index, dist, integral })
}

/// Build a space from any supported source.
pub fn build_space<T: Scalar>(source: SpaceSource<T>) -> Result<FiniteMetricSpace<T>> {
    match source {
        SpaceSource::Table { ids, rows } => validate_metric(ids, rows),
        SpaceSource::Graph { ids, edges } => graph_metric(ids, &edges),
        SpaceSource::Cloud { ids, coords, p } => cloud_metric(ids, &coords, p),
    }
}

#[derive(PartialEq)]
struct HeapEntry<T> {
    cost: T,
    node: usize,
}

impl<T: Scalar> Eq for HeapEntry<T> {}

impl<T: Scalar> PartialOrd for HeapEntry<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Scalar> Ord for HeapEntry<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        // min-heap on cost
        other
            .cost
            .partial_cmp(&self.cost)
            .unwrap_or(Ordering::Equal)
            .then_with(|| other.node.cmp(&self.node))
    }
}

/// Shortest-path metric of a weighted undirected graph (Dijkstra from every vertex).
pub fn graph_metric<T: Scalar>(ids: Vec<String>, edges: &[(usize, usize, T)]) -> Result<FiniteMetricSpace<T>> {
    let n = ids.len();
    let mut adj: Vec<Vec<(usize, T)>> = vec![Vec::new(); n];
    for &(u, v, w) in edges {
        if u >= n || v >= n {
            return Err(Error::UnknownPoint(format!("#{}", u.max(v))));
        }
        if !(w.is_finite() && w > T::zero()) {
            return Err(Error::InvalidEdgeWeight(ids[u].clone(), ids[v].clone()));
        }
        adj[u].push((v, w));
        adj[v].push((u, w));
    }
    let mut dist = vec![T::infinity(); n * n];
    let mut heap = BinaryHeap::new();
    for s in 0..n {
        let row = &mut dist[s * n..(s + 1) * n];
        row[s] = T::zero();
        heap.push(HeapEntry { cost: T::zero(), node: s });
        while let Some(HeapEntry { cost, node }) = heap.pop() {
            if cost > row[node] {
                continue;
            }
            for &(next, w) in &adj[node] {
                let c = cost + w;
                if c < row[next] {
                    row[next] = c;
                    heap.push(HeapEntry { cost: c, node: next });
                }
            }
        }
        if let Some(t) = row.iter().position(|d| d.is_infinite()) {
            return Err(Error::DisconnectedGraph(ids[s].clone(), ids[t].clone()));
        }
    }
    // Dijkstra sums in different orders; force exact symmetry.
    for i in 0..n {
        for j in (i + 1)..n {
            let m = dist[i * n + j].min(dist[j * n + i]);
            dist[i * n + j] = m;
            dist[j * n + i] = m;
        }
    }
    FiniteMetricSpace::from_trusted(ids, dist)
}

/// `p`-norm distances between coordinate rows.
pub fn cloud_metric<T: Scalar>(ids: Vec<String>, coords: &[Vec<T>], p: T) -> Result<FiniteMetricSpace<T>> {
    if !(p.is_finite() && p >= T::one()) {
        return Err(Error::InvalidPNorm(p.as_f64()));
    }
    if ids.len() != coords.len() {
        return Err(Error::IdCountMismatch { rows: coords.len(), ids: ids.len() });
    }
    let dim = coords.first().map_or(0, Vec::len);
    if coords.iter().any(|c| c.len() != dim) {
        return Err(Error::DimensionMismatch);
    }
    let n = coords.len();
    let mut dist = vec![T::zero(); n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let d = p_norm_diff(&coords[i], &coords[j], p);
            dist[i * n + j] = d;
            dist[j * n + i] = d;
        }
    }
    FiniteMetricSpace::from_trusted(ids, dist)
}

/// `||a - b||_p`.
pub fn p_norm_diff<T: Scalar>(a: &[T], b: &[T], p: T) -> T {
    if p == T::one() {
        a.iter().zip(b).map(|(x, y)| (*x - *y).abs()).sum()
    } else if p == T::of(2.0) {
        a.iter().zip(b).map(|(x, y)| (*x - *y) * (*x - *y)).sum::<T>().sqrt()
    } else {
        a.iter()
            .zip(b)
            .map(|(x, y)| (*x - *y).abs().powf(p))
            .sum::<T>()
            .powf(p.recip())
    }
}

/// Point ids `0, 1, ..., n-1`.
pub fn numbered_ids(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}
