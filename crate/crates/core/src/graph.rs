//! The bipartite graph dual to the surface quiver, restricted to the shadow
//! of a point, and its closure over the adjusted surface.
//!
//! Lattice sites are faces of the graph. Each unit square of the lattice
//! (named by its lower-left corner) holds one vertex, or two triangles split
//! by a diagonal arrow. Positions are in quarter units so that every vertex
//! has an integer key: the whole square `(i,j)` sits at `(4i+2, 4j+2)`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::surface::{check_scope, Point3, Shadow, Site, SteppedSurface, SurfaceError, NEIGHBOR_STEPS};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error(transparent)]
    Scope(#[from] SurfaceError),
    #[error("the shadow of {0} is a single open face; the value is t at the apex")]
    DegenerateShadow(Point3),
    #[error("quiver face around square {0:?} is not an oriented cycle")]
    NotOriented(Site),
    #[error("edge {0:?} joins two vertices of the same color")]
    NotBipartite(EdgeKey),
    #[error("vertex {0:?} sits between two different row pairs")]
    InconsistentRow(VertexKey),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Color {
    White,
    Black,
}

/// The piece of a lattice square a vertex occupies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Part {
    Whole,
    NW,
    SE,
    SW,
    NE,
}

/// Sides of a lattice square: `A=(i,j)`, `B=(i+1,j)`, `C=(i+1,j+1)`, `D=(i,j+1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Side {
    Bottom,
    Right,
    Top,
    Left,
}

impl Part {
    /// Lattice corners of the piece in counter-clockwise order, as offsets.
    fn corners(self) -> &'static [Site] {
        match self {
            Part::Whole => &[(0, 0), (1, 0), (1, 1), (0, 1)],
            Part::NW => &[(0, 0), (1, 1), (0, 1)],
            Part::SE => &[(0, 0), (1, 0), (1, 1)],
            Part::SW => &[(0, 0), (1, 0), (0, 1)],
            Part::NE => &[(1, 0), (1, 1), (0, 1)],
        }
    }

    fn has_side(self, side: Side) -> bool {
        use Side::*;
        match self {
            Part::Whole => true,
            Part::NW => matches!(side, Top | Left),
            Part::SE => matches!(side, Bottom | Right),
            Part::SW => matches!(side, Bottom | Left),
            Part::NE => matches!(side, Right | Top),
        }
    }

    fn offset(self) -> (i32, i32) {
        match self {
            Part::Whole => (2, 2),
            Part::NW => (1, 3),
            Part::SE => (3, 1),
            Part::SW => (1, 1),
            Part::NE => (3, 3),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct VertexKey {
    pub square: Site,
    pub part: Part,
}

impl VertexKey {
    pub fn pos(&self) -> (i32, i32) {
        let (dx, dy) = self.part.offset();
        (4 * self.square.0 + dx, 4 * self.square.1 + dy)
    }

    /// Lattice sites touching this vertex, i.e. its incident faces.
    pub fn faces(&self) -> impl Iterator<Item = Site> + '_ {
        self.part.corners().iter().map(|&(a, b)| (self.square.0 + a, self.square.1 + b))
    }
}

/// Identity of an edge by the quiver arrow it crosses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum EdgeKey {
    /// Crosses the arrow between `(i,j)` and `(i,j+1)`.
    Horizontal(Site),
    /// Crosses the arrow between `(i,j)` and `(i+1,j)`.
    Vertical(Site),
    /// The diagonal inside a split square.
    Diagonal(Site),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum EdgeClass {
    Horizontal,
    Vertical,
    Diagonal,
}

/// Colors read left to right along a horizontal or diagonal edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum HType {
    /// White then black; horizontal ones are named `N` after the face below.
    WhiteBlack,
    /// Black then white; horizontal ones are named `S` after the face above.
    BlackWhite,
}

/// The `N(i,j)` / `S(i,j)` name of a horizontal edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum HName {
    N(Site),
    S(Site),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Vertex {
    pub id: usize,
    pub key: VertexKey,
    pub color: Color,
    pub pos: (i32, i32),
    pub row: i32,
}

/// An oriented edge: horizontal and diagonal ones run left to right,
/// vertical ones from black to white.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeRec {
    pub id: usize,
    pub key: EdgeKey,
    pub tail: usize,
    pub head: usize,
    pub class: EdgeClass,
    pub htype: Option<HType>,
    /// The two faces on either side of the edge.
    pub faces: [Site; 2],
}

impl EdgeRec {
    pub fn hname(&self) -> Option<HName> {
        match (self.key, self.htype) {
            (EdgeKey::Horizontal((i, j)), Some(HType::WhiteBlack)) => Some(HName::N((i, j))),
            (EdgeKey::Horizontal((i, j)), Some(HType::BlackWhite)) => Some(HName::S((i, j + 1))),
            _ => None,
        }
    }

    /// Member of the reference set: white-black horizontal or diagonal.
    pub fn is_reference(&self) -> bool {
        self.htype == Some(HType::WhiteBlack)
    }

    pub fn touches(&self, v: usize) -> bool {
        self.tail == v || self.head == v
    }

    pub fn other(&self, v: usize) -> usize {
        if self.tail == v {
            self.head
        } else {
            self.tail
        }
    }
}

/// The graph generated by a set of faces, plus the open faces around it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpenFaceGraph {
    point: Point3,
    closure: bool,
    shadow: Shadow,
    vertices: Vec<Vertex>,
    edges: Vec<EdgeRec>,
    vertex_index: BTreeMap<VertexKey, usize>,
    edge_index: BTreeMap<EdgeKey, usize>,
    face_edges: BTreeMap<Site, Vec<usize>>,
}

/// Local shape of one lattice square.
#[derive(Clone, Copy, Debug)]
enum Shape {
    Whole,
    /// Split along A-C, `forward` when the arrow runs A to C.
    AC { forward: bool },
    /// Split along B-D, `forward` when the arrow runs D to B.
    BD { forward: bool },
}

fn shape_of(h: &impl Fn(Site) -> i32, (i, j): Site) -> Shape {
    let (a, b, c, d) = (h((i, j)), h((i + 1, j)), h((i + 1, j + 1)), h((i, j + 1)));
    if a == c && b == d {
        Shape::Whole
    } else if a == c {
        Shape::AC { forward: d < b }
    } else {
        Shape::BD { forward: a < c }
    }
}

/// Direction of the quiver arrow between adjacent or diagonal sites:
/// true when it runs `u -> v`.
fn arrow(h: &impl Fn(Site) -> i32, u: Site, v: Site) -> bool {
    let (di, dj) = (v.0 - u.0, v.1 - u.1);
    match (di.abs(), dj.abs()) {
        // Horizontal arrows descend, vertical arrows ascend.
        (1, 0) => h(u) > h(v),
        (0, 1) => h(u) < h(v),
        _ => {
            let square = (u.0.min(v.0), u.1.min(v.1));
            let (i, j) = square;
            match shape_of(h, square) {
                Shape::AC { forward } => (u == (i, j)) == forward,
                Shape::BD { forward } => (u == (i, j + 1)) == forward,
                Shape::Whole => unreachable!("no diagonal arrow in a whole square"),
            }
        }
    }
}

fn parts_of(shape: Shape) -> &'static [Part] {
    match shape {
        Shape::Whole => &[Part::Whole],
        Shape::AC { .. } => &[Part::NW, Part::SE],
        Shape::BD { .. } => &[Part::SW, Part::NE],
    }
}

fn color_of(h: &impl Fn(Site) -> i32, key: VertexKey) -> Result<Color, GraphError> {
    let corners: Vec<Site> = key.faces().collect();
    let ccw: Vec<bool> = (0..corners.len())
        .map(|n| arrow(h, corners[n], corners[(n + 1) % corners.len()]))
        .collect();
    if ccw.iter().all(|&x| x) {
        Ok(Color::White)
    } else if ccw.iter().all(|&x| !x) {
        Ok(Color::Black)
    } else {
        Err(GraphError::NotOriented(key.square))
    }
}

fn part_with_side(h: &impl Fn(Site) -> i32, square: Site, side: Side) -> VertexKey {
    let part = parts_of(shape_of(h, square))
        .iter()
        .copied()
        .find(|p| p.has_side(side))
        .expect("every side of a square belongs to one piece");
    VertexKey { square, part }
}

/// Endpoints (first is left or upper) and bounded faces of an edge.
fn edge_geometry(h: &impl Fn(Site) -> i32, key: EdgeKey) -> (VertexKey, VertexKey, [Site; 2]) {
    match key {
        EdgeKey::Horizontal((i, j)) => (
            part_with_side(h, (i - 1, j), Side::Right),
            part_with_side(h, (i, j), Side::Left),
            [(i, j), (i, j + 1)],
        ),
        EdgeKey::Vertical((i, j)) => (
            part_with_side(h, (i, j), Side::Bottom),
            part_with_side(h, (i, j - 1), Side::Top),
            [(i, j), (i + 1, j)],
        ),
        EdgeKey::Diagonal((i, j)) => match shape_of(h, (i, j)) {
            Shape::AC { .. } => (
                VertexKey { square: (i, j), part: Part::NW },
                VertexKey { square: (i, j), part: Part::SE },
                [(i, j), (i + 1, j + 1)],
            ),
            Shape::BD { .. } => (
                VertexKey { square: (i, j), part: Part::SW },
                VertexKey { square: (i, j), part: Part::NE },
                [(i + 1, j), (i, j + 1)],
            ),
            Shape::Whole => unreachable!("diagonal key on a whole square"),
        },
    }
}

impl OpenFaceGraph {
    fn build(
        h: impl Fn(Site) -> i32,
        point: Point3,
        shadow: Shadow,
        generators: &BTreeSet<Site>,
        closure: bool,
    ) -> Result<Self, GraphError> {
        let mut keys = BTreeSet::new();
        for &(i, j) in generators {
            keys.insert(EdgeKey::Horizontal((i, j)));
            keys.insert(EdgeKey::Horizontal((i, j - 1)));
            keys.insert(EdgeKey::Vertical((i, j)));
            keys.insert(EdgeKey::Vertical((i - 1, j)));
            for square in [(i, j), (i - 1, j), (i - 1, j - 1), (i, j - 1)] {
                let (a, b) = square;
                let touches = match shape_of(&h, square) {
                    Shape::Whole => false,
                    Shape::AC { .. } => (i, j) == (a, b) || (i, j) == (a + 1, b + 1),
                    Shape::BD { .. } => (i, j) == (a + 1, b) || (i, j) == (a, b + 1),
                };
                if touches {
                    keys.insert(EdgeKey::Diagonal(square));
                }
            }
        }

        let geometry: Vec<(EdgeKey, VertexKey, VertexKey, [Site; 2])> = keys
            .iter()
            .map(|&k| {
                let (u, v, faces) = edge_geometry(&h, k);
                (k, u, v, faces)
            })
            .collect();
        let vkeys: BTreeSet<VertexKey> = geometry.iter().flat_map(|g| [g.1, g.2]).collect();
        // Ids follow position order, bottom row first.
        let mut vkeys: Vec<VertexKey> = vkeys.into_iter().collect();
        vkeys.sort_by_key(|k| {
            let (x, y) = k.pos();
            (y, x)
        });
        let mut vertices = Vec::with_capacity(vkeys.len());
        let mut vertex_index = BTreeMap::new();
        for (id, key) in vkeys.into_iter().enumerate() {
            let color = color_of(&h, key)?;
            let row = row_of(key, point.j)?;
            vertex_index.insert(key, id);
            vertices.push(Vertex { id, key, color, pos: key.pos(), row });
        }

        let mut edges = Vec::with_capacity(geometry.len());
        let mut edge_index = BTreeMap::new();
        let mut face_edges: BTreeMap<Site, Vec<usize>> = BTreeMap::new();
        for (id, (key, u, v, faces)) in geometry.into_iter().enumerate() {
            let (u, v) = (vertex_index[&u], vertex_index[&v]);
            let (cu, cv) = (vertices[u].color, vertices[v].color);
            if cu == cv {
                return Err(GraphError::NotBipartite(key));
            }
            let (class, tail, head, htype) = match key {
                EdgeKey::Vertical(_) => {
                    let (t, hd) = if cu == Color::Black { (u, v) } else { (v, u) };
                    (EdgeClass::Vertical, t, hd, None)
                }
                _ => {
                    let class =
                        if matches!(key, EdgeKey::Horizontal(_)) { EdgeClass::Horizontal } else { EdgeClass::Diagonal };
                    let htype = if cu == Color::White { HType::WhiteBlack } else { HType::BlackWhite };
                    (class, u, v, Some(htype))
                }
            };
            for f in faces {
                face_edges.entry(f).or_default().push(id);
            }
            edge_index.insert(key, id);
            edges.push(EdgeRec { id, key, tail, head, class, htype, faces });
        }
        Ok(OpenFaceGraph { point, closure, shadow, vertices, edges, vertex_index, edge_index, face_edges })
    }

    pub fn point(&self) -> Point3 {
        self.point
    }

    pub fn is_closure(&self) -> bool {
        self.closure
    }

    /// Closed faces of the underlying graph with open faces.
    pub fn closed_faces(&self) -> &BTreeSet<Site> {
        &self.shadow.interior
    }

    /// The open faces of the graph (the shadow boundary); closed in the closure.
    pub fn open_faces(&self) -> &BTreeSet<Site> {
        &self.shadow.boundary
    }

    /// Faces whose `t` enters the weights: interior plus boundary.
    pub fn all_faces(&self) -> BTreeSet<Site> {
        self.shadow.all_faces()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[EdgeRec] {
        &self.edges
    }

    pub fn vertex(&self, id: usize) -> &Vertex {
        &self.vertices[id]
    }

    pub fn edge(&self, id: usize) -> &EdgeRec {
        &self.edges[id]
    }

    pub fn vertex_id(&self, key: VertexKey) -> Option<usize> {
        self.vertex_index.get(&key).copied()
    }

    pub fn edge_id(&self, key: EdgeKey) -> Option<usize> {
        self.edge_index.get(&key).copied()
    }

    /// Edges of the graph that are sides of face `x`.
    pub fn sides(&self, x: Site) -> &[usize] {
        self.face_edges.get(&x).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn incident(&self, v: usize) -> impl Iterator<Item = &EdgeRec> {
        self.edges.iter().filter(move |e| e.touches(v))
    }

    /// The reference edge set: white-black horizontal and diagonal edges.
    pub fn reference_set(&self) -> BTreeSet<usize> {
        self.edges.iter().filter(|e| e.is_reference()).map(|e| e.id).collect()
    }

    /// `(r_min, r_max)` over all vertices.
    pub fn row_range(&self) -> (i32, i32) {
        let rows = self.vertices.iter().map(|v| v.row);
        (rows.clone().min().unwrap_or(0), rows.max().unwrap_or(-1))
    }

    /// Renders DOT with deterministic ordering.
    pub fn to_dot(&self, highlight: &BTreeSet<usize>) -> String {
        let mut out = String::new();
        let name = if self.closure { "closure" } else { "graph" };
        let _ = writeln!(out, "graph {name} {{");
        let _ = writeln!(out, "  // point {}", self.point);
        for f in &self.shadow.interior {
            let _ = writeln!(out, "  // closed face ({},{})", f.0, f.1);
        }
        for f in &self.shadow.boundary {
            let _ = writeln!(out, "  // open face ({},{})", f.0, f.1);
        }
        for v in &self.vertices {
            let fill = match v.color {
                Color::White => "white",
                Color::Black => "black",
            };
            let _ = writeln!(
                out,
                "  v{} [label=\"r{}\", style=filled, fillcolor={fill}, fontcolor=gray50, pos=\"{},{}!\"];",
                v.id,
                v.row,
                f64::from(v.pos.0) / 4.0,
                f64::from(v.pos.1) / 4.0
            );
        }
        for e in &self.edges {
            let style = match e.class {
                EdgeClass::Horizontal => "solid",
                EdgeClass::Vertical => "dashed",
                EdgeClass::Diagonal => "dotted",
            };
            let color = if highlight.contains(&e.id) { ", color=red, penwidth=2" } else { "" };
            let _ = writeln!(out, "  v{} -- v{} [style={style}{color}]; // e{} {:?}", e.tail, e.head, e.id, e.key);
        }
        out.push_str("}\n");
        out
    }
}

fn row_of(key: VertexKey, j0: i32) -> Result<i32, GraphError> {
    let faces: BTreeSet<Site> = key.faces().collect();
    let rows: BTreeSet<i32> =
        faces.iter().filter(|&&(i, j)| faces.contains(&(i, j + 1))).map(|&(_, j)| j - j0).collect();
    match rows.len() {
        1 => Ok(*rows.iter().next().expect("one row")),
        _ => Err(GraphError::InconsistentRow(key)),
    }
}

fn nondegenerate(s: &SteppedSurface, p: Point3) -> Result<Shadow, GraphError> {
    let shadow = check_scope(s, p)?;
    if shadow.is_degenerate() {
        return Err(GraphError::DegenerateShadow(p));
    }
    Ok(shadow)
}

/// The graph with open faces generated by the closed faces of the shadow.
pub fn build_graph(s: &SteppedSurface, p: Point3) -> Result<OpenFaceGraph, GraphError> {
    let shadow = nondegenerate(s, p)?;
    let generators = shadow.interior.clone();
    OpenFaceGraph::build(|(i, j)| s.height(i, j), p, shadow, &generators, false)
}

/// The closure: the graph of the adjusted surface generated by all shadow faces.
pub fn build_closure(s: &SteppedSurface, p: Point3) -> Result<OpenFaceGraph, GraphError> {
    let shadow = nondegenerate(s, p)?;
    let adjusted = s.adjusted(p);
    let generators = shadow.all_faces();
    OpenFaceGraph::build(|(i, j)| adjusted.height(i, j), p, shadow, &generators, true)
}

/// Left-most and right-most vertices of the south and north halves.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BoundarySets {
    pub left_sw: BTreeSet<usize>,
    pub right_se: BTreeSet<usize>,
    pub left_nw: BTreeSet<usize>,
    pub right_ne: BTreeSet<usize>,
}

/// A vertex is left-most when no horizontal or diagonal edge enters it
/// from the left, right-most when none leaves it to the right. South means
/// a row below the center face.
pub fn boundary_sets(g: &OpenFaceGraph) -> BoundarySets {
    let mut has_left = vec![false; g.vertices.len()];
    let mut has_right = vec![false; g.vertices.len()];
    for e in g.edges.iter().filter(|e| e.class != EdgeClass::Vertical) {
        has_right[e.tail] = true;
        has_left[e.head] = true;
    }
    let mut out = BoundarySets::default();
    for v in &g.vertices {
        let south = v.row < 0;
        if !has_left[v.id] {
            if south { &mut out.left_sw } else { &mut out.left_nw }.insert(v.id);
        }
        if !has_right[v.id] {
            if south { &mut out.right_se } else { &mut out.right_ne }.insert(v.id);
        }
    }
    out
}

/// Rows of every vertex, with the range.
pub fn rows(g: &OpenFaceGraph) -> (BTreeMap<usize, i32>, (i32, i32)) {
    (g.vertices.iter().map(|v| (v.id, v.row)).collect(), g.row_range())
}

/// Faces adjacent to a face, used to sanity check shadow shapes.
pub fn neighbors((i, j): Site) -> impl Iterator<Item = Site> {
    NEIGHBOR_STEPS.iter().map(move |(di, dj)| (i + di, j + dj))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(i: i32, j: i32, k: i32) -> Point3 {
        Point3::new(i, j, k).unwrap()
    }

    #[test]
    fn arrows_of_the_sample_portion() {
        // Heights of a 4x4 patch, top row is j = 3.
        let rows = [[0, 1, 2, 3], [1, 2, 1, 2], [2, 1, 0, 1], [1, 2, 1, 2]];
        let h = |(i, j): Site| rows[(3 - j) as usize][i as usize];
        let expected: &[(Site, Site)] = &[
            ((0, 3), (0, 2)),
            ((1, 3), (0, 3)),
            ((1, 3), (1, 2)),
            ((2, 3), (1, 3)),
            ((2, 3), (3, 2)),
            ((3, 3), (2, 3)),
            ((0, 2), (1, 3)),
            ((0, 2), (0, 1)),
            ((1, 2), (0, 2)),
            ((1, 2), (2, 2)),
            ((2, 2), (2, 3)),
            ((2, 2), (1, 1)),
            ((2, 2), (3, 1)),
            ((3, 2), (2, 2)),
            ((3, 2), (3, 3)),
            ((0, 1), (1, 1)),
            ((1, 1), (1, 2)),
            ((1, 1), (2, 1)),
            ((1, 1), (1, 0)),
            ((2, 1), (2, 2)),
            ((2, 1), (2, 0)),
            ((3, 1), (3, 2)),
            ((3, 1), (2, 1)),
            ((3, 1), (3, 0)),
            ((0, 0), (0, 1)),
            ((1, 0), (0, 0)),
            ((1, 0), (2, 0)),
            ((2, 0), (1, 1)),
            ((2, 0), (3, 1)),
            ((3, 0), (2, 0)),
        ];
        for &(u, v) in expected {
            assert!(arrow(&h, u, v), "{u:?} -> {v:?}");
            assert!(!arrow(&h, v, u));
        }
        let diagonals = (0..3)
            .flat_map(|i| (0..3).map(move |j| (i, j)))
            .filter(|&sq| !matches!(shape_of(&h, sq), Shape::Whole))
            .count();
        assert_eq!(diagonals, 6);
    }

    #[test]
    fn single_square_at_the_first_step() {
        let g = build_graph(&SteppedSurface::fund(), pt(0, 0, 1)).unwrap();
        assert_eq!(g.closed_faces().len(), 1);
        assert_eq!(g.vertices().len(), 4);
        assert_eq!(g.edges().len(), 4);
        assert_eq!(g.row_range(), (-1, 0));
        let b = boundary_sets(&g);
        assert_eq!((b.left_sw.len(), b.right_se.len()), (1, 1));
    }

    #[test]
    fn degenerate_shadow_is_refused() {
        assert_eq!(
            build_graph(&SteppedSurface::fund(), pt(0, 0, -1)),
            Err(GraphError::DegenerateShadow(pt(0, 0, -1)))
        );
    }

    #[test]
    fn boundary_colors() {
        for p in [pt(0, 0, 1), pt(1, 0, 2), pt(0, 0, 3)] {
            let g = build_graph(&SteppedSurface::fund(), p).unwrap();
            let b = boundary_sets(&g);
            let color = |v: &usize| g.vertex(*v).color;
            assert!(b.left_sw.iter().chain(&b.right_ne).all(|v| color(v) == Color::Black));
            assert!(b.right_se.iter().chain(&b.left_nw).all(|v| color(v) == Color::White));
            for g in [g.clone(), build_closure(&SteppedSurface::fund(), p).unwrap()] {
                let b = boundary_sets(&g);
                assert_eq!(b.left_sw.len(), b.right_se.len(), "{p}");
                assert_eq!(b.left_nw.len(), b.right_ne.len(), "{p}");
            }
        }
    }

    fn connected(g: &OpenFaceGraph) -> bool {
        let mut seen = vec![false; g.vertices().len()];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for e in g.incident(v) {
                let w = e.other(v);
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.into_iter().all(|x| x)
    }

    #[test]
    fn graph_embeds_in_its_closure() {
        let surfaces = [
            (SteppedSurface::fund(), pt(0, 0, 3)),
            (SteppedSurface::fund(), pt(1, 0, 4)),
            (SteppedSurface::grafted(pt(0, 0, 3), |i, j| (i + j).abs() - 1).unwrap(), pt(0, 0, 3)),
            (SteppedSurface::grafted(pt(0, 0, 5), |i, j| 1 - i + j).unwrap(), pt(0, 0, 5)),
        ];
        for (s, p) in surfaces {
            let g = build_graph(&s, p).unwrap();
            let gbar = build_closure(&s, p).unwrap();
            assert!(connected(&g) && connected(&gbar), "{p}");
            for e in g.edges() {
                let id = gbar.edge_id(e.key).expect("edge of G missing from the closure");
                let f = gbar.edge(id);
                assert_eq!(g.vertex(e.tail).key, gbar.vertex(f.tail).key);
                assert_eq!(g.vertex(e.head).key, gbar.vertex(f.head).key);
                assert_eq!(g.vertex(e.tail).color, gbar.vertex(f.tail).color);
                assert_eq!(e.htype, f.htype);
            }
        }
    }
}
