//! Grid geometry, edge identifiers and the `Instance` ground truth.
//!
//! Coordinates are 1-based `(row, col)`. Edges are always identified by
//! their undirected canonical pair; the orientation of a directed instance
//! is a separate per-edge attribute.

use std::fmt;

use thiserror::Error;

/// Smallest heavy weight admitted by the two-valued `{1, k}` profile.
pub const MIN_HEAVY_WEIGHT: u64 = 5;

/// Heavy weight used by generators when none is given.
pub const DEFAULT_K: u64 = 5;
/// Largest accepted edge weight; keeps walk and path sums far from `u64` overflow.
pub const MAX_WEIGHT: u64 = u32::MAX as u64;

/// A grid vertex, 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vertex {
    pub row: u32,
    pub col: u32,
}

impl Vertex {
    pub const fn new(row: u32, col: u32) -> Self {
        Vertex { row, col }
    }

    /// Sort key used by every target tie-break: column first, then row.
    pub fn col_major_key(self) -> (u32, u32) {
        (self.col, self.row)
    }
}

impl fmt::Display for Vertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row, self.col)
    }
}

/// Neighbor directions in the global tie-break order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Dir {
    Down,
    Right,
    Up,
    Left,
}

impl Dir {
    pub const ORDER: [Dir; 4] = [Dir::Down, Dir::Right, Dir::Up, Dir::Left];
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GridError {
    #[error("grid dimensions must be positive, got {rows}x{cols}")]
    BadDimensions { rows: u32, cols: u32 },
}

/// Shape of the grid: `rows x cols`, optionally directed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GridSpec {
    pub rows: u32,
    pub cols: u32,
    pub directed: bool,
}

impl GridSpec {
    pub fn new(rows: u32, cols: u32, directed: bool) -> Result<Self, GridError> {
        if rows == 0 || cols == 0 {
            return Err(GridError::BadDimensions { rows, cols });
        }
        Ok(GridSpec {
            rows,
            cols,
            directed,
        })
    }

    /// Undirected `rows x cols` grid. Panics on a zero dimension.
    pub fn undirected(rows: u32, cols: u32) -> Self {
        Self::new(rows, cols, false).expect("positive dimensions")
    }

    /// Directed `rows x cols` grid. Panics on a zero dimension.
    pub fn directed(rows: u32, cols: u32) -> Self {
        Self::new(rows, cols, true).expect("positive dimensions")
    }

    /// The undirected ladder `2 x n`.
    pub fn ladder(n: u32) -> Self {
        Self::undirected(2, n)
    }

    pub fn is_ladder(&self) -> bool {
        self.rows == 2
    }

    pub fn vertex_count(&self) -> usize {
        self.rows as usize * self.cols as usize
    }

    /// `m(n-1) + (m-1)n`.
    pub fn edge_count(&self) -> usize {
        let (m, n) = (self.rows as usize, self.cols as usize);
        m * (n - 1) + (m - 1) * n
    }

    pub fn contains(&self, v: Vertex) -> bool {
        (1..=self.rows).contains(&v.row) && (1..=self.cols).contains(&v.col)
    }

    /// Row-major 0-based index of an in-bounds vertex.
    pub fn index(&self, v: Vertex) -> usize {
        debug_assert!(self.contains(v), "{v} outside {}x{}", self.rows, self.cols);
        (v.row as usize - 1) * self.cols as usize + (v.col as usize - 1)
    }

    pub fn vertex(&self, index: usize) -> Vertex {
        let n = self.cols as usize;
        Vertex::new((index / n) as u32 + 1, (index % n) as u32 + 1)
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        (0..self.vertex_count()).map(move |i| self.vertex(i))
    }

    pub fn step(&self, v: Vertex, dir: Dir) -> Option<Vertex> {
        let to = match dir {
            Dir::Down => Vertex::new(v.row + 1, v.col),
            Dir::Right => Vertex::new(v.row, v.col + 1),
            Dir::Up if v.row > 1 => Vertex::new(v.row - 1, v.col),
            Dir::Left if v.col > 1 => Vertex::new(v.row, v.col - 1),
            _ => return None,
        };
        self.contains(to).then_some(to)
    }

    /// Grid neighbors of `v` in the order Down, Right, Up, Left.
    pub fn neighbors(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        Dir::ORDER.into_iter().filter_map(move |d| self.step(v, d))
    }

    /// Index of an edge in the canonical order, if the edge belongs to this grid.
    pub fn edge_index(&self, e: EdgeId) -> Option<usize> {
        let (a, b) = (e.a, e.b);
        if !self.contains(a) || !self.contains(b) {
            return None;
        }
        let (m, n) = (self.rows as usize, self.cols as usize);
        let (r0, c0) = (a.row as usize - 1, a.col as usize - 1);
        // Every row but the last carries n-1 horizontal and n vertical edges.
        let has_down = r0 + 1 < m;
        let base = r0 * (2 * n - 1) + c0 * (1 + usize::from(has_down));
        if b.row == a.row && b.col == a.col + 1 {
            Some(base)
        } else if b.row == a.row + 1 && b.col == a.col {
            let has_right = c0 + 1 < n;
            Some(base + usize::from(has_right))
        } else {
            None
        }
    }

    /// Inverse of [`GridSpec::edge_index`].
    pub fn edge(&self, index: usize) -> EdgeId {
        let (m, n) = (self.rows as usize, self.cols as usize);
        let per_row = 2 * n - 1;
        let r0 = index / per_row;
        if r0 + 1 < m {
            let off = index % per_row;
            let a_of = |c0: usize| Vertex::new(r0 as u32 + 1, c0 as u32 + 1);
            if off == 2 * (n - 1) {
                let a = a_of(n - 1);
                EdgeId::from_canonical(a, Vertex::new(a.row + 1, a.col))
            } else if off.is_multiple_of(2) {
                let a = a_of(off / 2);
                EdgeId::from_canonical(a, Vertex::new(a.row, a.col + 1))
            } else {
                let a = a_of(off / 2);
                EdgeId::from_canonical(a, Vertex::new(a.row + 1, a.col))
            }
        } else {
            // Last row: horizontal edges only.
            let off = index - (m - 1) * per_row;
            let a = Vertex::new(m as u32, off as u32 + 1);
            EdgeId::from_canonical(a, Vertex::new(a.row, a.col + 1))
        }
    }

    pub fn edge_between(&self, u: Vertex, v: Vertex) -> Option<usize> {
        EdgeId::new(u, v).and_then(|e| self.edge_index(e))
    }

    /// Edges incident to `v`, as `(edge index, neighbor)` in neighbor order.
    pub fn incident(&self, v: Vertex) -> impl Iterator<Item = (usize, Vertex)> + '_ {
        self.neighbors(v).map(move |u| {
            let e = self.edge_between(v, u).expect("neighbors share an edge");
            (e, u)
        })
    }
}

/// Every edge of the grid exactly once, sorted by `(row1, col1, row2, col2)`.
pub fn canonical_edges(spec: &GridSpec) -> Vec<EdgeId> {
    (0..spec.edge_count()).map(|i| spec.edge(i)).collect()
}

/// Undirected grid edge; `a` is the lexicographically smaller endpoint.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId {
    a: Vertex,
    b: Vertex,
}

impl EdgeId {
    /// Canonicalizes the endpoint order; `None` unless `u` and `v` are grid-adjacent.
    pub fn new(u: Vertex, v: Vertex) -> Option<Self> {
        let dr = u.row.abs_diff(v.row);
        let dc = u.col.abs_diff(v.col);
        if dr + dc != 1 {
            return None;
        }
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        Some(EdgeId { a, b })
    }

    fn from_canonical(a: Vertex, b: Vertex) -> Self {
        debug_assert!(a < b);
        EdgeId { a, b }
    }

    pub fn first(&self) -> Vertex {
        self.a
    }

    pub fn second(&self) -> Vertex {
        self.b
    }

    pub fn is_vertical(&self) -> bool {
        self.a.col == self.b.col
    }

    pub fn other(&self, v: Vertex) -> Vertex {
        if v == self.a {
            self.b
        } else {
            self.a
        }
    }

    pub fn tail(&self, o: Orientation) -> Vertex {
        match o {
            Orientation::Forward => self.a,
            Orientation::Backward => self.b,
        }
    }

    pub fn head(&self, o: Orientation) -> Vertex {
        self.other(self.tail(o))
    }

    /// Orientation whose tail is `from`; `None` if `from` is not an endpoint.
    pub fn orientation_from(&self, from: Vertex) -> Option<Orientation> {
        if from == self.a {
            Some(Orientation::Forward)
        } else if from == self.b {
            Some(Orientation::Backward)
        } else {
            None
        }
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.a, self.b)
    }
}

/// The single traversable direction of a directed edge.
/// `Forward` runs from the canonical first endpoint to the second.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Orientation {
    Forward,
    Backward,
}

/// Fully specified ground truth: weights, optional orientations, start.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Instance {
    pub spec: GridSpec,
    /// Indexed by canonical edge index.
    pub weights: Vec<u64>,
    /// Present exactly for directed instances.
    pub orientation: Option<Vec<Orientation>>,
    pub start: Vertex,
    /// Designated heavy weight, if the instance was drawn from a `{1, k}` family.
    pub k: Option<u64>,
}

impl Instance {
    /// Undirected instance with every weight equal to `w`, starting at `(1,1)`.
    pub fn uniform(spec: GridSpec, w: u64) -> Self {
        Instance {
            spec,
            weights: vec![w; spec.edge_count()],
            orientation: spec
                .directed
                .then(|| vec![Orientation::Forward; spec.edge_count()]),
            start: Vertex::new(1, 1),
            k: None,
        }
    }

    pub fn all_ones(spec: GridSpec) -> Self {
        Self::uniform(spec, 1)
    }

    pub fn with_k(mut self, k: u64) -> Self {
        self.k = Some(k);
        self
    }

    pub fn set_weight(&mut self, u: Vertex, v: Vertex, w: u64) {
        let e = self.spec.edge_between(u, v).expect("adjacent vertices");
        self.weights[e] = w;
    }

    /// Orients the edge `from -> to`. Panics on undirected instances.
    pub fn set_arc(&mut self, from: Vertex, to: Vertex) {
        let id = EdgeId::new(from, to).expect("adjacent vertices");
        let e = self.spec.edge_index(id).expect("edge in grid");
        let o = id.orientation_from(from).expect("endpoint");
        self.orientation.as_mut().expect("directed instance")[e] = o;
    }

    pub fn weight(&self, edge: usize) -> u64 {
        self.weights[edge]
    }

    pub fn orientation_of(&self, edge: usize) -> Option<Orientation> {
        self.orientation.as_ref().map(|o| o[edge])
    }

    /// Weight of the move `from -> to` if that move is legal in the ground truth.
    pub fn traversal(&self, from: Vertex, to: Vertex) -> Option<u64> {
        let e = self.spec.edge_between(from, to)?;
        match self.orientation_of(e) {
            Some(o) if self.spec.edge(e).tail(o) != from => None,
            _ => Some(self.weights[e]),
        }
    }

    /// Vertices reachable from the start (respecting orientation).
    pub fn reachable_from_start(&self) -> Vec<bool> {
        let mut seen = vec![false; self.spec.vertex_count()];
        if !self.spec.contains(self.start) {
            return seen;
        }
        let mut stack = vec![self.start];
        seen[self.spec.index(self.start)] = true;
        while let Some(v) = stack.pop() {
            for u in self.spec.neighbors(v) {
                let i = self.spec.index(u);
                if !seen[i] && self.traversal(v, u).is_some() {
                    seen[i] = true;
                    stack.push(u);
                }
            }
        }
        seen
    }

    /// Vertical reflection: row `i` becomes row `m + 1 - i`. Start is reflected too.
    pub fn mirrored_rows(&self) -> Instance {
        let spec = self.spec;
        let flip = |v: Vertex| Vertex::new(spec.rows + 1 - v.row, v.col);
        let mut out = self.clone();
        out.start = flip(self.start);
        for e in 0..spec.edge_count() {
            let id = spec.edge(e);
            let (fa, fb) = (flip(id.first()), flip(id.second()));
            let ne = spec.edge_between(fa, fb).expect("reflection keeps adjacency");
            out.weights[ne] = self.weights[e];
            if let (Some(src), Some(dst)) = (&self.orientation, out.orientation.as_mut()) {
                let tail = flip(id.tail(src[e]));
                dst[ne] = spec.edge(ne).orientation_from(tail).expect("endpoint");
            }
        }
        out
    }

    /// Number of traversals over edges whose weight equals `heavy` along a walk.
    pub fn heavy_traversals(&self, walk: &[Vertex], heavy: u64) -> usize {
        walk.windows(2)
            .filter(|w| self.traversal(w[0], w[1]) == Some(heavy))
            .count()
    }

    /// Cost of a walk, or `None` if some step is not a legal move.
    pub fn walk_cost(&self, walk: &[Vertex]) -> Option<u64> {
        walk.windows(2)
            .map(|w| self.traversal(w[0], w[1]))
            .sum::<Option<u64>>()
    }
}

/// Optional weight restriction checked by [`validate_with_profile`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WeightProfile {
    /// Weights in `{1, k}` with `k >= min_k`; `k` must be declared.
    TwoValued { min_k: u64 },
}

impl WeightProfile {
    pub fn two_valued() -> Self {
        WeightProfile::TwoValued {
            min_k: MIN_HEAVY_WEIGHT,
        }
    }
}

/// One broken invariant of an [`Instance`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    BadDimensions,
    StartOutOfBounds(Vertex),
    WeightTableSize { expected: usize, found: usize },
    NonPositiveWeight(EdgeId),
    WeightTooLarge(EdgeId),
    OrientationOnUndirected,
    MissingOrientation,
    OrientationTableSize { expected: usize, found: usize },
    UnreachableVertices(Vec<Vertex>),
    NonPositiveK,
    MissingK,
    KBelowMinimum { k: u64, min: u64 },
    WeightOutsideAlphabet { edge: EdgeId, weight: u64 },
}

/// Structural validation. An empty report means the instance is valid.
pub fn validate_instance(inst: &Instance) -> Vec<Violation> {
    let mut out = Vec::new();
    let spec = inst.spec;
    if spec.rows == 0 || spec.cols == 0 {
        out.push(Violation::BadDimensions);
        return out;
    }
    if !spec.contains(inst.start) {
        out.push(Violation::StartOutOfBounds(inst.start));
    }
    let expected = spec.edge_count();
    if inst.weights.len() != expected {
        out.push(Violation::WeightTableSize {
            expected,
            found: inst.weights.len(),
        });
    } else {
        for (e, &w) in inst.weights.iter().enumerate() {
            if w == 0 {
                out.push(Violation::NonPositiveWeight(spec.edge(e)));
            } else if w > MAX_WEIGHT {
                out.push(Violation::WeightTooLarge(spec.edge(e)));
            }
        }
    }
    let mut orientation_ok = true;
    match (&inst.orientation, spec.directed) {
        (Some(_), false) => {
            out.push(Violation::OrientationOnUndirected);
            orientation_ok = false;
        }
        (None, true) => {
            out.push(Violation::MissingOrientation);
            orientation_ok = false;
        }
        (Some(o), true) if o.len() != expected => {
            out.push(Violation::OrientationTableSize {
                expected,
                found: o.len(),
            });
            orientation_ok = false;
        }
        _ => {}
    }
    if inst.k == Some(0) {
        out.push(Violation::NonPositiveK);
    }
    if spec.directed && orientation_ok && spec.contains(inst.start) {
        let seen = inst.reachable_from_start();
        let missing: Vec<Vertex> = spec
            .vertices()
            .filter(|v| !seen[spec.index(*v)])
            .collect();
        if !missing.is_empty() {
            out.push(Violation::UnreachableVertices(missing));
        }
    }
    out
}

/// [`validate_instance`] plus the checks of a weight profile.
pub fn validate_with_profile(inst: &Instance, profile: WeightProfile) -> Vec<Violation> {
    let mut out = validate_instance(inst);
    match profile {
        WeightProfile::TwoValued { min_k } => match inst.k {
            None => out.push(Violation::MissingK),
            Some(k) => {
                if k < min_k {
                    out.push(Violation::KBelowMinimum { k, min: min_k });
                }
                if inst.weights.len() == inst.spec.edge_count() {
                    for (e, &w) in inst.weights.iter().enumerate() {
                        if w != 1 && w != k {
                            out.push(Violation::WeightOutsideAlphabet {
                                edge: inst.spec.edge(e),
                                weight: w,
                            });
                        }
                    }
                }
            }
        },
    }
    out
}
