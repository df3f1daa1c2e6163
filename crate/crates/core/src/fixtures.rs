//! Bundled instances used by tests, examples and the CLI suite.

use crate::metric::{
    cloud_metric, graph_metric, validate_metric, FiniteMetricSpace, QuotientStructure, Section,
};
use crate::scalar::Scalar;

/// Four points `a, b, c, d` with `d(a,b) = d(c,d) = 2`, `d(a,c) = d(b,d) = 1`,
/// `d(a,d) = d(b,c) = 3`, split into fibers `F1 = {a, b}` and `F2 = {c, d}`.
pub fn w4<T: Scalar>() -> (FiniteMetricSpace<T>, QuotientStructure) {
    let v = T::of;
    let rows = vec![
        vec![v(0.0), v(2.0), v(1.0), v(3.0)],
        vec![v(2.0), v(0.0), v(3.0), v(1.0)],
        vec![v(1.0), v(3.0), v(0.0), v(2.0)],
        vec![v(3.0), v(1.0), v(2.0), v(0.0)],
    ];
    let ids = ["a", "b", "c", "d"].map(String::from).to_vec();
    let space = validate_metric(ids, rows).expect("W4 is a metric");
    let quotient =
        QuotientStructure::from_blocks(space.ids(), vec![("F1".into(), vec![0, 1]), ("F2".into(), vec![2, 3])])
            .expect("W4 fibers partition the points");
    (space, quotient)
}

/// W4 section through the named points (fiber order `F1`, `F2`).
pub fn w4_section<T: Scalar>(space: &FiniteMetricSpace<T>, quotient: &QuotientStructure, p1: &str, p2: &str) -> Section {
    Section::from_points(space, quotient, &[p1, p2]).expect("valid W4 section")
}

/// Metric used on a plane grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridMetric {
    /// Shortest paths along grid edges (the `l1` distance); a path metric.
    Path,
    /// Euclidean distance of the grid points.
    Euclidean,
}

/// Rectangular grid in the plane with vertical fibers (one per column).
///
/// Point `(i, j)` sits at `(i * spacing, (j - origin_row) * spacing)`, has id
/// `g{i}_{j}`, index `i * rows + j`, and lies in fiber `x{i}`.
#[derive(Debug, Clone)]
pub struct PlaneGrid<T> {
    pub space: FiniteMetricSpace<T>,
    pub quotient: QuotientStructure,
    pub columns: usize,
    pub rows: usize,
    pub spacing: T,
    pub origin_row: usize,
}

impl<T: Scalar> PlaneGrid<T> {
    pub fn new(columns: usize, rows: usize, spacing: T, metric: GridMetric) -> Self {
        let origin_row = rows / 2;
        let mut ids = Vec::with_capacity(columns * rows);
        let mut coords = Vec::with_capacity(columns * rows);
        let mut assignment = Vec::with_capacity(columns * rows);
        for i in 0..columns {
            for j in 0..rows {
                ids.push(format!("g{i}_{j}"));
                coords.push(vec![
                    T::from_usize(i).unwrap() * spacing,
                    (T::from_usize(j).unwrap() - T::from_usize(origin_row).unwrap()) * spacing,
                ]);
                assignment.push(i);
            }
        }
        let p = match metric {
            GridMetric::Path => T::one(),
            GridMetric::Euclidean => T::of(2.0),
        };
        let space = cloud_metric(ids, &coords, p).expect("grid points are distinct");
        let fiber_ids = (0..columns).map(|i| format!("x{i}")).collect();
        let quotient = QuotientStructure::from_assignment(space.ids(), fiber_ids, &assignment)
            .expect("columns partition the grid");
        PlaneGrid { space, quotient, columns, rows, spacing, origin_row }
    }

    #[inline]
    pub fn point(&self, column: usize, row: usize) -> usize {
        column * self.rows + row
    }

    /// Column and row of a point index.
    pub fn cell(&self, x: usize) -> (usize, usize) {
        (x / self.rows, x % self.rows)
    }

    /// Signed vertical coordinate of a point.
    pub fn height(&self, x: usize) -> T {
        let (_, j) = self.cell(x);
        (T::from_usize(j).unwrap() - T::from_usize(self.origin_row).unwrap()) * self.spacing
    }

    /// Horizontal coordinate of a point.
    pub fn abscissa(&self, x: usize) -> T {
        T::from_usize(self.cell(x).0).unwrap() * self.spacing
    }

    /// The section through the origin row.
    pub fn zero_section(&self) -> Section {
        self.graph_section(&vec![0; self.columns])
    }

    /// Section at row offsets `offsets[i]` from the origin row, clamped to the grid.
    pub fn graph_section(&self, offsets: &[isize]) -> Section {
        let choice = offsets
            .iter()
            .enumerate()
            .map(|(i, &o)| {
                let j = (self.origin_row as isize + o).clamp(0, self.rows as isize - 1) as usize;
                self.point(i, j)
            })
            .collect();
        Section::new(&self.quotient, choice).expect("one point per column")
    }
}

/// Cycle graph on `2m` vertices with antipodal fibers `{i, i + m}`.
/// Rotations are isometries preserving the fibers.
pub fn antipodal_cycle<T: Scalar>(m: usize) -> (FiniteMetricSpace<T>, QuotientStructure) {
    let n = 2 * m;
    let ids: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let edges: Vec<(usize, usize, T)> = (0..n).map(|i| (i, (i + 1) % n, T::one())).collect();
    let space = graph_metric(ids, &edges).expect("cycle is connected");
    let blocks = (0..m).map(|i| (format!("p{i}"), vec![i, i + m])).collect();
    let quotient = QuotientStructure::from_blocks(space.ids(), blocks).expect("antipodal pairs partition the cycle");
    (space, quotient)
}

/// Path graph `v0 - v1 - ... - v{n-1}` with unit edges.
pub fn unit_path<T: Scalar>(n: usize) -> FiniteMetricSpace<T> {
    let ids = (0..n).map(|i| format!("v{i}")).collect();
    let edges: Vec<(usize, usize, T)> = (1..n).map(|i| (i - 1, i, T::one())).collect();
    graph_metric(ids, &edges).expect("path is connected")
}
