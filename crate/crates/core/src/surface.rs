//! Combinatorial model of the fiber surface.
//!
//! A [`CellSurface`] is a finite collection of polygons glued along edges.
//! Faces are stored as cyclic lists of darts and are all traversed
//! counter-clockwise with respect to the surface orientation, so a face lies
//! on the left of every dart it uses. Interior edges are used by exactly two
//! darts of opposite direction; boundary edges by exactly one.
//!
//! The module builds one canonical picture of a genus `g` surface with `k`
//! boundary circles carrying two parallel tuples of arcs that form a good
//! pair, and provides the cut-along-arcs operation used everywhere else.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::unionfind::UnionFind;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SurfaceError {
    #[error("genus must be at least 1, got {0}")]
    GenusTooSmall(usize),
    #[error("at least two boundary components are required, got {0}")]
    TooFewBoundaries(usize),
    #[error("malformed cell complex: {0}")]
    Malformed(String),
    #[error("arc {arc} is not properly embedded: {reason}")]
    InvalidArc { arc: String, reason: String },
    #[error("arcs {first} and {second} {reason}")]
    ArcConflict {
        first: String,
        second: String,
        reason: String,
    },
}

/// Genus and number of boundary circles of the fiber.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SurfaceSpec {
    genus: usize,
    boundary_count: usize,
}

impl SurfaceSpec {
    pub fn new(genus: usize, boundary_count: usize) -> Result<Self, SurfaceError> {
        if genus < 1 {
            return Err(SurfaceError::GenusTooSmall(genus));
        }
        if boundary_count < 2 {
            return Err(SurfaceError::TooFewBoundaries(boundary_count));
        }
        Ok(Self {
            genus,
            boundary_count,
        })
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn boundary_count(&self) -> usize {
        self.boundary_count
    }

    pub fn euler_characteristic(&self) -> i64 {
        2 - 2 * self.genus as i64 - self.boundary_count as i64
    }
}

impl fmt::Display for SurfaceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F(g={}, k={})", self.genus, self.boundary_count)
    }
}

/// Sign of an oriented good pair or sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn flipped(self) -> Self {
        match self {
            Sign::Positive => Sign::Negative,
            Sign::Negative => Sign::Positive,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Sign::Positive => "positive",
            Sign::Negative => "negative",
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Topological type of a compact connected oriented surface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SurfaceType {
    pub genus: usize,
    pub boundary_count: usize,
}

impl SurfaceType {
    pub fn euler_characteristic(&self) -> i64 {
        2 - 2 * self.genus as i64 - self.boundary_count as i64
    }

    pub fn is_disk(&self) -> bool {
        self.genus == 0 && self.boundary_count == 1
    }

    pub fn is_annulus(&self) -> bool {
        self.genus == 0 && self.boundary_count == 2
    }
}

impl fmt::Display for SurfaceType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_disk() {
            f.write_str("disk")
        } else if self.is_annulus() {
            f.write_str("annulus")
        } else {
            write!(f, "g{}b{}", self.genus, self.boundary_count)
        }
    }
}

/// An edge used in a given direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dart {
    pub edge: usize,
    pub forward: bool,
}

impl Dart {
    pub fn new(edge: usize, forward: bool) -> Self {
        Self { edge, forward }
    }

    pub fn reversed(self) -> Self {
        Self {
            edge: self.edge,
            forward: !self.forward,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub tail: usize,
    pub head: usize,
    pub boundary: bool,
    /// Index of the boundary circle of the fiber this edge lies on, if any.
    pub circle: Option<usize>,
}

/// One end of an edge, as seen from the vertex it is incident to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeEnd {
    pub edge: usize,
    pub at_head: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellSurface {
    vertex_count: usize,
    edges: Vec<Edge>,
    faces: Vec<Vec<Dart>>,
}

impl CellSurface {
    /// Validates and assembles a complex. Rejects anything that is not an
    /// oriented surface with boundary.
    pub fn new(
        vertex_count: usize,
        edges: Vec<Edge>,
        faces: Vec<Vec<Dart>>,
    ) -> Result<Self, SurfaceError> {
        let surface = Self {
            vertex_count,
            edges,
            faces,
        };
        surface.validate()?;
        Ok(surface)
    }

    fn validate(&self) -> Result<(), SurfaceError> {
        let bad = |msg: String| Err(SurfaceError::Malformed(msg));
        for (i, e) in self.edges.iter().enumerate() {
            if e.tail >= self.vertex_count || e.head >= self.vertex_count {
                return bad(format!("edge {i} references a missing vertex"));
            }
            if e.circle.is_some() && !e.boundary {
                return bad(format!("edge {i} carries a circle label but is interior"));
            }
        }
        let mut uses = vec![(0usize, 0usize); self.edges.len()];
        for (f, face) in self.faces.iter().enumerate() {
            if face.is_empty() {
                return bad(format!("face {f} is empty"));
            }
            for (p, d) in face.iter().enumerate() {
                if d.edge >= self.edges.len() {
                    return bad(format!("face {f} references a missing edge"));
                }
                let next = face[(p + 1) % face.len()];
                if self.dart_head(*d) != self.dart_tail(next) {
                    return bad(format!("face {f} is not a closed cycle at position {p}"));
                }
                if d.forward {
                    uses[d.edge].0 += 1;
                } else {
                    uses[d.edge].1 += 1;
                }
            }
        }
        for (i, (fw, bw)) in uses.iter().enumerate() {
            let ok = if self.edges[i].boundary {
                fw + bw == 1
            } else {
                *fw == 1 && *bw == 1
            };
            if !ok {
                return bad(format!(
                    "edge {i} is used {fw} times forward and {bw} times backward"
                ));
            }
        }
        let mut boundary_ends = vec![0usize; self.vertex_count];
        for e in self.edges.iter().filter(|e| e.boundary) {
            boundary_ends[e.tail] += 1;
            boundary_ends[e.head] += 1;
        }
        if let Some(v) = boundary_ends.iter().position(|&c| c != 0 && c != 2) {
            return bad(format!("vertex {v} is not a manifold boundary point"));
        }
        let corners = self.corner_classes(&BTreeSet::new());
        let mut seen = vec![false; self.vertex_count];
        for &v in &corners.vertex {
            seen[v] = true;
        }
        if let Some(v) = seen.iter().position(|s| !s) {
            return bad(format!("vertex {v} is not incident to any face"));
        }
        if corners.count != self.vertex_count {
            return bad("some vertex link is disconnected".to_string());
        }
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn faces(&self) -> &[Vec<Dart>] {
        &self.faces
    }

    pub fn dart_tail(&self, d: Dart) -> usize {
        let e = &self.edges[d.edge];
        if d.forward {
            e.tail
        } else {
            e.head
        }
    }

    pub fn dart_head(&self, d: Dart) -> usize {
        let e = &self.edges[d.edge];
        if d.forward {
            e.head
        } else {
            e.tail
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count as i64 - self.edges.len() as i64 + self.faces.len() as i64
    }

    pub fn is_boundary_vertex(&self, v: usize) -> bool {
        self.edges
            .iter()
            .any(|e| e.boundary && (e.tail == v || e.head == v))
    }

    pub fn boundary_circle_count(&self) -> usize {
        let mut uf = UnionFind::new(self.vertex_count);
        let mut on_boundary = vec![false; self.vertex_count];
        for e in self.edges.iter().filter(|e| e.boundary) {
            uf.union(e.tail, e.head);
            on_boundary[e.tail] = true;
        }
        let roots: BTreeSet<usize> = (0..self.vertex_count)
            .filter(|&v| on_boundary[v])
            .map(|v| uf.find(v))
            .collect();
        roots.len()
    }

    pub fn component_count(&self) -> usize {
        let mut uf = UnionFind::new(self.faces.len());
        let mut first_use: Vec<Option<usize>> = vec![None; self.edges.len()];
        for (f, face) in self.faces.iter().enumerate() {
            for d in face {
                match first_use[d.edge] {
                    Some(g) => {
                        uf.union(f, g);
                    }
                    None => first_use[d.edge] = Some(f),
                }
            }
        }
        uf.labels().1
    }

    /// Classifies a connected complex by Euler characteristic and boundary
    /// count. Orientability is guaranteed by construction.
    pub fn classify(&self) -> Result<SurfaceType, SurfaceError> {
        if self.component_count() != 1 {
            return Err(SurfaceError::Malformed(
                "classification needs a connected complex".into(),
            ));
        }
        let chi = self.euler_characteristic();
        let b = self.boundary_circle_count() as i64;
        let twice_genus = 2 - chi - b;
        if twice_genus < 0 || twice_genus % 2 != 0 {
            return Err(SurfaceError::Malformed(format!(
                "inconsistent Euler characteristic {chi} with {b} boundary circles"
            )));
        }
        Ok(SurfaceType {
            genus: (twice_genus / 2) as usize,
            boundary_count: b as usize,
        })
    }

    /// Cyclic order of edge ends around `v`, following the surface
    /// orientation. For boundary vertices the order starts at the boundary
    /// edge leaving `v` along the induced boundary orientation.
    pub fn rotation_at(&self, v: usize) -> Vec<EdgeEnd> {
        let end_of = |d: Dart, at_tail: bool| EdgeEnd {
            edge: d.edge,
            at_head: d.forward != at_tail,
        };
        // Each corner at v maps its incoming edge end to its outgoing one.
        let mut next: BTreeMap<EdgeEnd, EdgeEnd> = BTreeMap::new();
        for face in &self.faces {
            for p in 0..face.len() {
                let d = face[p];
                if self.dart_tail(d) != v {
                    continue;
                }
                let prev = face[(p + face.len() - 1) % face.len()];
                next.insert(end_of(d, true), end_of(prev, false));
            }
        }
        let targets: BTreeSet<EdgeEnd> = next.values().copied().collect();
        let start = next
            .keys()
            .copied()
            .find(|k| !targets.contains(k))
            .or_else(|| next.keys().next().copied());
        let mut out = Vec::new();
        let mut cur = start;
        while let Some(c) = cur {
            if out.contains(&c) {
                break;
            }
            out.push(c);
            cur = next.get(&c).copied();
        }
        out
    }

    fn corner_classes(&self, cut: &BTreeSet<usize>) -> Corners {
        let mut offset = Vec::with_capacity(self.faces.len());
        let mut total = 0;
        for face in &self.faces {
            offset.push(total);
            total += face.len();
        }
        let corner = |f: usize, p: usize| offset[f] + p % self.faces[f].len();
        let mut vertex = vec![0; total];
        let mut occurrences: Vec<Vec<(usize, usize)>> = vec![Vec::new(); self.edges.len()];
        for (f, face) in self.faces.iter().enumerate() {
            for (p, d) in face.iter().enumerate() {
                vertex[corner(f, p)] = self.dart_tail(*d);
                occurrences[d.edge].push((f, p));
            }
        }
        let mut uf = UnionFind::new(total);
        for (e, occ) in occurrences.iter().enumerate() {
            if self.edges[e].boundary || cut.contains(&e) || occ.len() != 2 {
                continue;
            }
            let (f1, p1) = occ[0];
            let (f2, p2) = occ[1];
            uf.union(corner(f1, p1), corner(f2, p2 + 1));
            uf.union(corner(f1, p1 + 1), corner(f2, p2));
        }
        let (class, count) = uf.labels();
        Corners {
            offset,
            vertex,
            class,
            count,
        }
    }

    /// Same complex with the opposite orientation.
    pub fn mirrored(&self) -> Self {
        let faces = self
            .faces
            .iter()
            .map(|face| face.iter().rev().map(|d| d.reversed()).collect())
            .collect();
        Self {
            vertex_count: self.vertex_count,
            edges: self.edges.clone(),
            faces,
        }
    }

    /// Walks the boundary circle through `v` along its induced orientation
    /// and returns its vertices, starting at `v`.
    pub fn boundary_walk(&self, v: usize) -> Vec<usize> {
        let mut out_dart = BTreeMap::new();
        for face in &self.faces {
            for d in face {
                if self.edges[d.edge].boundary {
                    out_dart.insert(self.dart_tail(*d), *d);
                }
            }
        }
        let mut walk = Vec::new();
        let mut cur = v;
        while let Some(d) = out_dart.get(&cur) {
            walk.push(cur);
            cur = self.dart_head(*d);
            if cur == v {
                break;
            }
        }
        walk
    }
}

struct Corners {
    offset: Vec<usize>,
    /// Vertex at each corner.
    vertex: Vec<usize>,
    /// Corner class after gluing, i.e. the vertex of the glued complex.
    class: Vec<usize>,
    count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ArcFamily {
    Alpha,
    Beta,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ArcLabel {
    pub family: ArcFamily,
    /// Zero-based tuple index; displayed one-based.
    pub index: usize,
}

impl fmt::Display for ArcLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self.family {
            ArcFamily::Alpha => "alpha",
            ArcFamily::Beta => "beta",
        };
        write!(f, "{name}^{}", self.index + 1)
    }
}

/// An oriented edge path in a [`CellSurface`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkedArc {
    pub label: ArcLabel,
    pub darts: Vec<Dart>,
}

impl MarkedArc {
    pub fn vertices(&self, surface: &CellSurface) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.darts.len() + 1);
        if let Some(first) = self.darts.first() {
            out.push(surface.dart_tail(*first));
        }
        out.extend(self.darts.iter().map(|d| surface.dart_head(*d)));
        out
    }

    pub fn reversed(&self) -> Self {
        Self {
            label: self.label,
            darts: self.darts.iter().rev().map(|d| d.reversed()).collect(),
        }
    }

    pub fn start(&self, surface: &CellSurface) -> usize {
        surface.dart_tail(self.darts[0])
    }

    pub fn end(&self, surface: &CellSurface) -> usize {
        surface.dart_head(*self.darts.last().expect("arcs are nonempty"))
    }
}

/// `k` arcs, arc `j` running from boundary circle `j` back to itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParallelTuple {
    pub arcs: Vec<MarkedArc>,
}

impl ParallelTuple {
    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    /// Checks the defining properties against `spec`: the cut has `k − 1`
    /// annuli and one piece of genus `g − 1` with two boundary circles, and
    /// the piece to the right of arc `j` is the one to the left of arc
    /// `j + 1` (cyclically), the genus piece sitting between the last and
    /// the first arc.
    pub fn verify(&self, surface: &CellSurface, spec: SurfaceSpec) -> Result<(), SurfaceError> {
        let k = spec.boundary_count();
        let bad = |msg: String| Err(SurfaceError::Malformed(msg));
        if self.arcs.len() != k {
            return bad(format!("tuple has {} arcs, expected {k}", self.arcs.len()));
        }
        for (j, arc) in self.arcs.iter().enumerate() {
            let circles =
                [arc.start(surface), arc.end(surface)].map(|v| boundary_circle_label(surface, v));
            if circles != [Some(j), Some(j)] {
                return bad(format!(
                    "{} does not have both ends on circle {}",
                    arc.label,
                    j + 1
                ));
            }
        }
        let cut = cut_along(surface, &self.arcs)?;
        if cut.crossings != 0 {
            return bad("tuple arcs intersect".into());
        }
        if cut.components.len() != k {
            return bad(format!(
                "cut has {} components, expected {k}",
                cut.components.len()
            ));
        }
        for comp in &cut.components {
            let sides: BTreeSet<(usize, Side)> =
                comp.arc_sides.iter().map(|s| (s.arc, s.side)).collect();
            let Some(&(j, _)) = sides.iter().find(|(_, side)| *side == Side::Right) else {
                return bad("a component lies to the right of no arc".into());
            };
            let expected: BTreeSet<(usize, Side)> =
                [(j, Side::Right), ((j + 1) % k, Side::Left)].into();
            if sides != expected {
                return bad(format!(
                    "component to the right of arc {} is not bounded by arcs {} and {}",
                    j + 1,
                    j + 1,
                    (j + 1) % k + 1
                ));
            }
            let want = if j + 1 == k {
                SurfaceType {
                    genus: spec.genus() - 1,
                    boundary_count: 2,
                }
            } else {
                SurfaceType {
                    genus: 0,
                    boundary_count: 2,
                }
            };
            if comp.topology != want {
                return bad(format!(
                    "component between arcs {} and {} is {}, expected {}",
                    j + 1,
                    (j + 1) % k + 1,
                    comp.topology,
                    want
                ));
            }
        }
        Ok(())
    }
}

fn boundary_circle_label(surface: &CellSurface, v: usize) -> Option<usize> {
    surface
        .edges()
        .iter()
        .find(|e| e.boundary && (e.tail == v || e.head == v))
        .and_then(|e| e.circle)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Left,
    Right,
}

/// A copy of one edge of a cut arc on the boundary of a cut component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ArcSide {
    /// Index of the arc in the list passed to [`cut_along`].
    pub arc: usize,
    /// Position of the edge along the arc.
    pub position: usize,
    /// Index of the sub-arc between consecutive crossings that the edge
    /// belongs to.
    pub piece: usize,
    pub side: Side,
}

#[derive(Debug, Clone)]
pub struct CutComponent {
    pub surface: CellSurface,
    pub topology: SurfaceType,
    /// Faces of the original complex making up this component.
    pub faces: Vec<usize>,
    pub arc_sides: Vec<ArcSide>,
    /// Whether the component contains boundary edges of the original surface.
    pub meets_boundary: bool,
}

impl CutComponent {
    pub fn euler_characteristic(&self) -> i64 {
        self.surface.euler_characteristic()
    }
}

#[derive(Debug, Clone)]
pub struct CutResult {
    pub components: Vec<CutComponent>,
    pub arc_count: usize,
    /// Number of transverse double points between distinct arcs.
    pub crossings: usize,
    pub euler_before: i64,
}

impl CutResult {
    pub fn euler_after(&self) -> i64 {
        self.components
            .iter()
            .map(|c| c.euler_characteristic())
            .sum()
    }
}

/// Cuts `surface` open along `arcs` and classifies the pieces.
///
/// Arcs must be simple edge paths from boundary to boundary through interior
/// vertices and interior edges. Distinct arcs may share only interior
/// vertices where they cross transversally; any other contact is rejected.
/// Every call checks `Σχ(pieces) = χ(F) + #arcs + #crossings`.
pub fn cut_along(surface: &CellSurface, arcs: &[MarkedArc]) -> Result<CutResult, SurfaceError> {
    let mut owner: BTreeMap<usize, (usize, usize)> = BTreeMap::new();
    let mut vertex_users: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
    for (i, arc) in arcs.iter().enumerate() {
        validate_arc(surface, arc)?;
        for (p, d) in arc.darts.iter().enumerate() {
            if let Some((other, _)) = owner.insert(d.edge, (i, p)) {
                return Err(SurfaceError::ArcConflict {
                    first: arcs[other].label.to_string(),
                    second: arc.label.to_string(),
                    reason: "share an edge".into(),
                });
            }
        }
        for (p, v) in arc.vertices(surface).into_iter().enumerate() {
            vertex_users.entry(v).or_default().push((i, p));
        }
    }

    let mut crossing_vertices = BTreeSet::new();
    for (&v, users) in &vertex_users {
        if users.len() < 2 {
            continue;
        }
        let (a, pa) = users[0];
        let (b, pb) = users[1];
        let conflict = |reason: &str| SurfaceError::ArcConflict {
            first: arcs[a].label.to_string(),
            second: arcs[b].label.to_string(),
            reason: reason.to_string(),
        };
        if users.len() > 2 {
            return Err(conflict("meet a third arc at a common vertex"));
        }
        if surface.is_boundary_vertex(v) {
            return Err(conflict("touch at a boundary point"));
        }
        if !crosses_transversally(surface, &arcs[a], pa, &arcs[b], pb, v) {
            return Err(conflict("touch without crossing"));
        }
        crossing_vertices.insert(v);
    }

    let cut_edges: BTreeSet<usize> = owner.keys().copied().collect();
    let corners = surface.corner_classes(&cut_edges);

    let faces = surface.faces();
    let mut face_uf = UnionFind::new(faces.len());
    let mut first_use: Vec<Option<usize>> = vec![None; surface.edges().len()];
    for (f, face) in faces.iter().enumerate() {
        for d in face {
            if cut_edges.contains(&d.edge) || surface.edges()[d.edge].boundary {
                continue;
            }
            match first_use[d.edge] {
                Some(g) => {
                    face_uf.union(f, g);
                }
                None => first_use[d.edge] = Some(f),
            }
        }
    }
    let (face_label, component_count) = face_uf.labels();

    let piece_index: Vec<Vec<usize>> = arcs
        .iter()
        .map(|arc| {
            let verts = arc.vertices(surface);
            let mut piece = 0;
            (0..arc.darts.len())
                .map(|p| {
                    if p > 0 && crossing_vertices.contains(&verts[p]) {
                        piece += 1;
                    }
                    piece
                })
                .collect()
        })
        .collect();

    let mut components = Vec::with_capacity(component_count);
    for c in 0..component_count {
        let member_faces: Vec<usize> = (0..faces.len()).filter(|&f| face_label[f] == c).collect();
        let mut vertex_map: BTreeMap<usize, usize> = BTreeMap::new();
        let mut edge_map: BTreeMap<(usize, u8), usize> = BTreeMap::new();
        let mut new_edges: Vec<Edge> = Vec::new();
        let mut new_faces = Vec::with_capacity(member_faces.len());
        let mut arc_sides = Vec::new();
        let mut meets_boundary = false;
        for &f in &member_faces {
            let face = &faces[f];
            let mut new_face = Vec::with_capacity(face.len());
            for (p, d) in face.iter().enumerate() {
                let mut local = |corner: usize| {
                    let class = corners.class[corner];
                    let next = vertex_map.len();
                    *vertex_map.entry(class).or_insert(next)
                };
                let from = local(corners.offset[f] + p);
                let to = local(corners.offset[f] + (p + 1) % face.len());
                let old = &surface.edges()[d.edge];
                let is_cut = cut_edges.contains(&d.edge);
                meets_boundary |= old.boundary;
                let key = if is_cut {
                    (d.edge, u8::from(d.forward))
                } else {
                    (d.edge, 2)
                };
                let id = *edge_map.entry(key).or_insert_with(|| {
                    let (tail, head) = if d.forward { (from, to) } else { (to, from) };
                    new_edges.push(Edge {
                        tail,
                        head,
                        boundary: old.boundary || is_cut,
                        circle: old.circle,
                    });
                    new_edges.len() - 1
                });
                new_face.push(Dart::new(id, d.forward));
                if let Some(&(arc, position)) = owner.get(&d.edge) {
                    let along = arcs[arc].darts[position].forward == d.forward;
                    arc_sides.push(ArcSide {
                        arc,
                        position,
                        piece: piece_index[arc][position],
                        side: if along { Side::Left } else { Side::Right },
                    });
                }
            }
            new_faces.push(new_face);
        }
        arc_sides.sort();
        let piece = CellSurface::new(vertex_map.len(), new_edges, new_faces)?;
        let topology = piece.classify()?;
        components.push(CutComponent {
            surface: piece,
            topology,
            faces: member_faces,
            arc_sides,
            meets_boundary,
        });
    }

    let result = CutResult {
        components,
        arc_count: arcs.len(),
        crossings: crossing_vertices.len(),
        euler_before: surface.euler_characteristic(),
    };
    let expected = result.euler_before + result.arc_count as i64 + result.crossings as i64;
    if result.euler_after() != expected {
        return Err(SurfaceError::Malformed(format!(
            "Euler bookkeeping failed after cutting: {} != {}",
            result.euler_after(),
            expected
        )));
    }
    Ok(result)
}

fn validate_arc(surface: &CellSurface, arc: &MarkedArc) -> Result<(), SurfaceError> {
    let fail = |reason: &str| {
        Err(SurfaceError::InvalidArc {
            arc: arc.label.to_string(),
            reason: reason.to_string(),
        })
    };
    if arc.darts.is_empty() {
        return fail("empty path");
    }
    for (p, d) in arc.darts.iter().enumerate() {
        if d.edge >= surface.edges().len() {
            return fail("references a missing edge");
        }
        if surface.edges()[d.edge].boundary {
            return fail("runs along the boundary");
        }
        if p > 0 && surface.dart_head(arc.darts[p - 1]) != surface.dart_tail(*d) {
            return fail("is not a connected path");
        }
    }
    let verts = arc.vertices(surface);
    let distinct: BTreeSet<usize> = verts.iter().copied().collect();
    if distinct.len() != verts.len() {
        return fail("is not simple");
    }
    let last = verts.len() - 1;
    if !surface.is_boundary_vertex(verts[0]) || !surface.is_boundary_vertex(verts[last]) {
        return fail("does not end on the boundary");
    }
    if verts[1..last]
        .iter()
        .any(|&v| surface.is_boundary_vertex(v))
    {
        return fail("touches the boundary in its interior");
    }
    Ok(())
}

fn crosses_transversally(
    surface: &CellSurface,
    a: &MarkedArc,
    pa: usize,
    b: &MarkedArc,
    pb: usize,
    v: usize,
) -> bool {
    let ends = |arc: &MarkedArc, p: usize| -> Option<[EdgeEnd; 2]> {
        if p == 0 || p == arc.darts.len() {
            return None;
        }
        let before = arc.darts[p - 1];
        let after = arc.darts[p];
        Some([
            EdgeEnd {
                edge: before.edge,
                at_head: before.forward,
            },
            EdgeEnd {
                edge: after.edge,
                at_head: !after.forward,
            },
        ])
    };
    let (Some(ea), Some(eb)) = (ends(a, pa), ends(b, pb)) else {
        return false;
    };
    let rot = surface.rotation_at(v);
    let pos = |e: EdgeEnd| rot.iter().position(|r| *r == e);
    let (Some(a0), Some(a1), Some(b0), Some(b1)) = (pos(ea[0]), pos(ea[1]), pos(eb[0]), pos(eb[1]))
    else {
        return false;
    };
    let (lo, hi) = (a0.min(a1), a0.max(a1));
    let inside = |x: usize| lo < x && x < hi;
    inside(b0) != inside(b1)
}

/// Two parallel tuples forming a good pair of the given sign.
#[derive(Debug, Clone)]
pub struct GoodPairConfiguration {
    pub spec: SurfaceSpec,
    pub surface: CellSurface,
    pub alpha: ParallelTuple,
    pub beta: ParallelTuple,
    pub sign: Sign,
}

impl GoodPairConfiguration {
    /// `counts[i][j]` = number of common points of `alpha^i` and `beta^j`.
    pub fn intersection_matrix(&self) -> Vec<Vec<usize>> {
        let verts = |arc: &MarkedArc| -> BTreeSet<usize> {
            arc.vertices(&self.surface).into_iter().collect()
        };
        self.alpha
            .arcs
            .iter()
            .map(|a| {
                let va = verts(a);
                self.beta
                    .arcs
                    .iter()
                    .map(|b| verts(b).intersection(&va).count())
                    .collect()
            })
            .collect()
    }

    /// Local picture at boundary circle `j`: walking the circle along its
    /// induced orientation from the start of `alpha^j`, the pair is
    /// positive when the start of `beta^j` comes before the end of
    /// `alpha^j`, negative otherwise.
    pub fn local_sign(&self, j: usize) -> Option<Sign> {
        let s = &self.surface;
        let (a, b) = (&self.alpha.arcs[j], &self.beta.arcs[j]);
        let walk = s.boundary_walk(a.start(s));
        let at = |v: usize| walk.iter().position(|&w| w == v);
        let (a_end, b_start, b_end) = (at(a.end(s))?, at(b.start(s))?, at(b.end(s))?);
        if b_start < a_end && a_end < b_end {
            Some(Sign::Positive)
        } else if b_end < a_end && a_end < b_start {
            Some(Sign::Negative)
        } else {
            None
        }
    }

    /// All invariants of a good oriented pair, checked on the complex.
    pub fn verify(&self) -> Result<(), SurfaceError> {
        self.alpha.verify(&self.surface, self.spec)?;
        self.beta.verify(&self.surface, self.spec)?;
        let m = self.intersection_matrix();
        for (i, row) in m.iter().enumerate() {
            for (j, &count) in row.iter().enumerate() {
                let want = usize::from(i != j);
                if count != want {
                    return Err(SurfaceError::Malformed(format!(
                        "alpha^{} and beta^{} meet {count} times, expected {want}",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        for j in 0..self.spec.boundary_count() {
            if self.local_sign(j) != Some(self.sign) {
                return Err(SurfaceError::Malformed(format!(
                    "local picture at boundary {} is not {}",
                    j + 1,
                    self.sign
                )));
            }
        }
        Ok(())
    }

    /// Both tuples, alpha first.
    pub fn all_arcs(&self) -> Vec<MarkedArc> {
        self.alpha
            .arcs
            .iter()
            .chain(self.beta.arcs.iter())
            .cloned()
            .collect()
    }
}

/// Canonical surface with the standard parallel tuple.
pub fn standard_parallel_tuple(
    spec: SurfaceSpec,
) -> Result<(CellSurface, ParallelTuple), SurfaceError> {
    let config = canonical_good_pair(spec, Sign::Positive)?;
    Ok((config.surface, config.alpha))
}

/// The canonical good pair of the requested sign.
///
/// The surface is a ring of `k` cylinders. Cylinder `m` runs from
/// `alpha^m` (bottom) to `alpha^{m+1}` (top); the last one carries the
/// `g − 1` handles. Each bottom and top circle is the arc plus two boundary
/// edges on the matching boundary circle of `F`. The arcs `beta^j` run up
/// through every cylinder as straight strands whose slots shift by one
/// position per cylinder, so `beta^j` starts on circle `j` at the bottom of
/// cylinder `j`, crosses each other alpha arc once and ends on circle `j` at
/// the top of cylinder `j − 1`. The negative pair is the mirror image, with
/// both orientations of the surface and the arcs reversed.
pub fn canonical_good_pair(
    spec: SurfaceSpec,
    sign: Sign,
) -> Result<GoodPairConfiguration, SurfaceError> {
    let positive = build_positive_pair(spec)?;
    let config = match sign {
        Sign::Positive => positive,
        Sign::Negative => {
            let reverse = |t: &ParallelTuple| ParallelTuple {
                arcs: t.arcs.iter().map(MarkedArc::reversed).collect(),
            };
            GoodPairConfiguration {
                spec,
                surface: positive.surface.mirrored(),
                alpha: reverse(&positive.alpha),
                beta: reverse(&positive.beta),
                sign: Sign::Negative,
            }
        }
    };
    if config.surface.euler_characteristic() != spec.euler_characteristic() {
        return Err(SurfaceError::Malformed(format!(
            "constructed complex has χ = {}, expected {}",
            config.surface.euler_characteristic(),
            spec.euler_characteristic()
        )));
    }
    Ok(config)
}

#[derive(Default)]
struct Builder {
    vertex_count: usize,
    edges: Vec<Edge>,
    faces: Vec<Vec<Dart>>,
}

impl Builder {
    fn vertex(&mut self) -> usize {
        self.vertex_count += 1;
        self.vertex_count - 1
    }

    fn edge(&mut self, tail: usize, head: usize, circle: Option<usize>) -> usize {
        self.edges.push(Edge {
            tail,
            head,
            boundary: circle.is_some(),
            circle,
        });
        self.edges.len() - 1
    }
}

/// Vertices and edges of one circle of a cylinder, listed in the `+x`
/// direction: `P, c_0 … c_{k−2}, Q, X` where `X` is the boundary slot.
struct Circle {
    vertices: Vec<usize>,
    /// `edges[i]` joins `vertices[i]` to `vertices[i + 1]` (cyclically),
    /// oriented in the `+x` direction.
    edges: Vec<usize>,
}

impl Circle {
    /// Vertex position of crossing slot `slot`; slot `k − 1` is `X`.
    fn position(&self, slot: usize, k: usize) -> usize {
        if slot + 1 == k {
            k + 1
        } else {
            slot + 1
        }
    }

    /// Darts from slot `from` to slot `from + 1` in the `+x` direction.
    fn segment(&self, from: usize, k: usize) -> Vec<Dart> {
        let len = self.vertices.len();
        let start = self.position(from % k, k);
        let stop = self.position((from + 1) % k, k);
        let mut out = Vec::new();
        let mut p = start;
        while p != stop {
            out.push(Dart::new(self.edges[p], true));
            p = (p + 1) % len;
        }
        out
    }
}

fn build_positive_pair(spec: SurfaceSpec) -> Result<GoodPairConfiguration, SurfaceError> {
    let k = spec.boundary_count();
    let mut b = Builder::default();

    // Vertices on alpha^m: P, c_0 … c_{k−2}, Q.
    let alpha_vertices: Vec<Vec<usize>> = (0..k)
        .map(|_| (0..k + 1).map(|_| b.vertex()).collect())
        .collect();
    let alpha_edges: Vec<Vec<usize>> = alpha_vertices
        .iter()
        .map(|vs| vs.windows(2).map(|w| b.edge(w[0], w[1], None)).collect())
        .collect();

    // Cylinder m: bottom circle on alpha^m (boundary slot s_m on circle m),
    // top circle on alpha^{m+1} (boundary slot e_{m+1} on circle m+1).
    let mut bottoms = Vec::with_capacity(k);
    let mut tops = Vec::with_capacity(k);
    for m in 0..k {
        let up = (m + 1) % k;
        for (circle_index, list) in [(m, &mut bottoms), (up, &mut tops)] {
            let slot = b.vertex();
            let av = &alpha_vertices[circle_index];
            let (p, q) = (av[0], av[k]);
            let to_slot = b.edge(q, slot, Some(circle_index));
            let from_slot = b.edge(slot, p, Some(circle_index));
            let mut vertices = av.clone();
            vertices.push(slot);
            let mut edges = alpha_edges[circle_index].clone();
            edges.push(to_slot);
            edges.push(from_slot);
            list.push(Circle { vertices, edges });
        }
    }

    // Strand i of cylinder m runs from bottom slot i to top slot i − 1.
    let shift = |slot: usize| (slot + k - 1) % k;
    let mut strands = vec![Vec::with_capacity(k); k];
    for m in 0..k {
        for i in 0..k {
            let from = bottoms[m].vertices[bottoms[m].position(i, k)];
            let to = tops[m].vertices[tops[m].position(shift(i), k)];
            let e = b.edge(from, to, None);
            strands[m].push(e);
        }
    }

    for m in 0..k {
        for i in 0..k {
            let next = (i + 1) % k;
            let mut face = bottoms[m].segment(i, k);
            face.push(Dart::new(strands[m][next], true));
            let mut top = tops[m].segment(shift(i), k);
            top.reverse();
            face.extend(top.into_iter().map(Dart::reversed));
            face.push(Dart::new(strands[m][i], false));
            if m + 1 == k && i + 1 == k {
                face = attach_handles(&mut b, face, spec.genus() - 1);
            }
            b.faces.push(face);
        }
    }

    let surface = CellSurface::new(b.vertex_count, b.edges, b.faces)?;

    let alpha = ParallelTuple {
        arcs: (0..k)
            .map(|j| MarkedArc {
                label: ArcLabel {
                    family: ArcFamily::Alpha,
                    index: j,
                },
                darts: alpha_edges[j]
                    .iter()
                    .rev()
                    .map(|&e| Dart::new(e, false))
                    .collect(),
            })
            .collect(),
    };

    let beta = ParallelTuple {
        arcs: (0..k)
            .map(|j| {
                let mut darts = Vec::with_capacity(k);
                let mut slot = k - 1;
                for step in 0..k {
                    let m = (j + step) % k;
                    darts.push(Dart::new(strands[m][slot], true));
                    slot = shift(slot);
                }
                MarkedArc {
                    label: ArcLabel {
                        family: ArcFamily::Beta,
                        index: j,
                    },
                    darts,
                }
            })
            .collect(),
    };

    Ok(GoodPairConfiguration {
        spec,
        surface,
        alpha,
        beta,
        sign: Sign::Positive,
    })
}

/// Replaces a face by the same face with `handles` handles glued into it,
/// through a slit from its first corner to a new interior vertex.
fn attach_handles(b: &mut Builder, face: Vec<Dart>, handles: usize) -> Vec<Dart> {
    if handles == 0 {
        return face;
    }
    let anchor = {
        let d = face[0];
        let e = &b.edges[d.edge];
        if d.forward {
            e.tail
        } else {
            e.head
        }
    };
    let hub = b.vertex();
    let slit = b.edge(anchor, hub, None);
    let mut out = vec![Dart::new(slit, true)];
    for _ in 0..handles {
        let x = b.edge(hub, hub, None);
        let y = b.edge(hub, hub, None);
        out.extend([
            Dart::new(x, true),
            Dart::new(y, true),
            Dart::new(x, false),
            Dart::new(y, false),
        ]);
    }
    out.push(Dart::new(slit, false));
    out.extend(face);
    out
}
