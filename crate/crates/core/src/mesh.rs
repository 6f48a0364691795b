//! Structured triangulations of the unit square.
//!
//! A mesh subdivides (0,1)² into an n×n grid of squares and splits each
//! square into two triangles along the diagonal from its lower-left to its
//! upper-right corner. All elements are stored with counter-clockwise vertex
//! order.
//!
//! Conventions used throughout the crate:
//!
//! * local edge `i` of an element runs from local vertex `i` to local vertex
//!   `(i + 1) % 3`;
//! * an interior facet stores the adjacent elements as `(elem_a, elem_b)`
//!   with `elem_a < elem_b`, and its unit normal points from `elem_a` into
//!   `elem_b`;
//! * a boundary facet stores its single element and the outward unit normal;
//! * the diameter of an element is the length of its longest edge.
//!
//! The mesh is immutable after construction; refinement means building a new
//! mesh with a larger `n`.

use crate::{Error, Result};

pub type Point2 = nalgebra::Point2<f64>;
pub type Vec2 = nalgebra::Vector2<f64>;

/// Geometry shared by interior and boundary facets.
#[derive(Debug, Clone)]
pub struct FacetGeometry {
    /// Facet endpoints, ordered as traversed by the (first) adjacent element.
    pub endpoints: [Point2; 2],
    /// Unit normal. Points from `elem_a` into `elem_b` for interior facets
    /// and out of the domain for boundary facets.
    pub normal: Vec2,
    /// Euclidean length of the facet.
    pub length: f64,
    /// Facet mesh size: the mean of the adjacent element diameters (a single
    /// diameter on the boundary). Used for penalty and norm weights.
    pub h: f64,
}

/// A facet shared by two elements.
#[derive(Debug, Clone)]
pub struct InteriorFacet {
    pub elem_a: usize,
    pub elem_b: usize,
    /// Local edge index of the facet within `elem_a` / `elem_b`.
    pub edge_a: usize,
    pub edge_b: usize,
    pub geometry: FacetGeometry,
}

/// A facet on the domain boundary, owned by a single element.
#[derive(Debug, Clone)]
pub struct BoundaryFacet {
    pub elem: usize,
    pub edge: usize,
    pub geometry: FacetGeometry,
}

/// An immutable conforming triangulation of the unit square.
#[derive(Debug, Clone)]
pub struct Mesh {
    vertices: Vec<Point2>,
    /// Vertex indices per element, counter-clockwise.
    elements: Vec<[usize; 3]>,
    interior_facets: Vec<InteriorFacet>,
    boundary_facets: Vec<BoundaryFacet>,
    diameters: Vec<f64>,
    h_max: f64,
    n: usize,
}

impl Mesh {
    /// Builds the structured n×n triangulation (2n² elements).
    ///
    /// Elements are numbered square by square, row-major in the grid; within
    /// square `s` the triangle below the diagonal is element `2s` and the one
    /// above it is `2s + 1`.
    pub fn structured(n: usize) -> Result<Mesh> {
        if n == 0 {
            return Err(Error::InvalidArgument(
                "mesh subdivision count n must be at least 1".into(),
            ));
        }
        let np = n + 1;
        let mut vertices = Vec::with_capacity(np * np);
        for j in 0..np {
            for i in 0..np {
                vertices.push(Point2::new(i as f64 / n as f64, j as f64 / n as f64));
            }
        }
        let vid = |i: usize, j: usize| j * np + i;

        let mut elements = Vec::with_capacity(2 * n * n);
        for j in 0..n {
            for i in 0..n {
                let (v00, v10) = (vid(i, j), vid(i + 1, j));
                let (v01, v11) = (vid(i, j + 1), vid(i + 1, j + 1));
                // Diagonal v00–v11; both orientations counter-clockwise.
                elements.push([v00, v10, v11]);
                elements.push([v00, v11, v01]);
            }
        }

        let mut mesh = Mesh {
            vertices,
            elements,
            interior_facets: Vec::new(),
            boundary_facets: Vec::new(),
            diameters: Vec::new(),
            h_max: 0.0,
            n,
        };
        mesh.diameters = (0..mesh.elements.len())
            .map(|e| {
                let [a, b, c] = mesh.element_vertices(e);
                let l0 = (b - a).norm();
                let l1 = (c - b).norm();
                let l2 = (a - c).norm();
                l0.max(l1).max(l2)
            })
            .collect();
        mesh.h_max = mesh.diameters.iter().cloned().fold(0.0, f64::max);
        mesh.build_facets();
        mesh.validate()?;
        Ok(mesh)
    }

    /// Pairs up element edges into interior and boundary facet records.
    fn build_facets(&mut self) {
        use std::collections::BTreeMap;
        // Edge key: sorted vertex pair. Values: (element, local edge).
        let mut seen: BTreeMap<(usize, usize), (usize, usize)> = BTreeMap::new();
        for e in 0..self.elements.len() {
            let verts = self.elements[e];
            for le in 0..3 {
                let (p, q) = (verts[le], verts[(le + 1) % 3]);
                let key = (p.min(q), p.max(q));
                match seen.remove(&key) {
                    None => {
                        seen.insert(key, (e, le));
                    }
                    Some((e0, le0)) => {
                        // e0 < e because elements are visited in order.
                        let geometry = self.facet_geometry(e0, le0, Some(e));
                        self.interior_facets.push(InteriorFacet {
                            elem_a: e0,
                            elem_b: e,
                            edge_a: le0,
                            edge_b: le,
                            geometry,
                        });
                    }
                }
            }
        }
        // Unpaired edges lie on the boundary. BTreeMap iteration keeps the
        // order deterministic.
        for (_, (e, le)) in seen {
            let geometry = self.facet_geometry(e, le, None);
            self.boundary_facets.push(BoundaryFacet {
                elem: e,
                edge: le,
                geometry,
            });
        }
    }

    /// Geometry of local edge `le` of element `e`, with the normal oriented
    /// away from `e` (into `other` when given).
    fn facet_geometry(&self, e: usize, le: usize, other: Option<usize>) -> FacetGeometry {
        let verts = self.elements[e];
        let a = self.vertices[verts[le]];
        let b = self.vertices[verts[(le + 1) % 3]];
        let t = b - a;
        let length = t.norm();
        // Counter-clockwise traversal keeps the interior on the left, so the
        // right-hand rotation of the tangent points outward.
        let normal = Vec2::new(t.y, -t.x) / length;
        let h = match other {
            Some(o) => 0.5 * (self.diameters[e] + self.diameters[o]),
            None => self.diameters[e],
        };
        FacetGeometry {
            endpoints: [a, b],
            normal,
            length,
            h,
        }
    }

    /// Checks orientation, facet completeness, and normal conventions.
    fn validate(&self) -> Result<()> {
        for e in 0..self.elements.len() {
            if self.signed_area(e) <= 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "element {e} is not counter-clockwise"
                )));
            }
        }
        let n_edges = 3 * self.elements.len();
        if 2 * self.interior_facets.len() + self.boundary_facets.len() != n_edges {
            return Err(Error::InvalidArgument(
                "facet records do not partition the element edges".into(),
            ));
        }
        for f in &self.interior_facets {
            if f.elem_a >= f.elem_b {
                return Err(Error::InvalidArgument(
                    "interior facet elements are not ordered".into(),
                ));
            }
            let d = self.centroid(f.elem_b) - self.centroid(f.elem_a);
            if f.geometry.normal.dot(&d) <= 0.0 {
                return Err(Error::InvalidArgument(
                    "interior facet normal does not point from elem_a to elem_b".into(),
                ));
            }
        }
        Ok(())
    }

    fn signed_area(&self, e: usize) -> f64 {
        let [a, b, c] = self.element_vertices(e);
        0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn n_elements(&self) -> usize {
        self.elements.len()
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn element_vertices(&self, e: usize) -> [Point2; 3] {
        let [a, b, c] = self.elements[e];
        [self.vertices[a], self.vertices[b], self.vertices[c]]
    }

    pub fn area(&self, e: usize) -> f64 {
        self.signed_area(e)
    }

    pub fn centroid(&self, e: usize) -> Point2 {
        let [a, b, c] = self.element_vertices(e);
        Point2::new((a.x + b.x + c.x) / 3.0, (a.y + b.y + c.y) / 3.0)
    }

    /// Element diameter (longest edge).
    pub fn diameter(&self, e: usize) -> f64 {
        self.diameters[e]
    }

    /// Largest element diameter in the mesh.
    pub fn h_max(&self) -> f64 {
        self.h_max
    }

    pub fn interior_facets(&self) -> &[InteriorFacet] {
        &self.interior_facets
    }

    pub fn boundary_facets(&self) -> &[BoundaryFacet] {
        &self.boundary_facets
    }

    /// Test-only fixture: a single reference-like element with no facet
    /// records, for probing volume terms in isolation.
    #[cfg(test)]
    pub(crate) fn isolated_element(verts: [Point2; 3]) -> Mesh {
        let d0 = (verts[1] - verts[0]).norm();
        let d1 = (verts[2] - verts[1]).norm();
        let d2 = (verts[0] - verts[2]).norm();
        let d = d0.max(d1).max(d2);
        Mesh {
            vertices: verts.to_vec(),
            elements: vec![[0, 1, 2]],
            interior_facets: Vec::new(),
            boundary_facets: Vec::new(),
            diameters: vec![d],
            h_max: d,
            n: 1,
        }
    }
}
