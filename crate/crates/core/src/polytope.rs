//! Exact convex polytopes in Q^n with eagerly built face lattices.
//!
//! A polytope is stored with both representations: vertices (canonically
//! sorted) and halfspaces `<a, x> >= b`. Lower-dimensional polytopes are
//! first-class; their affine hull is pinned by pairs of opposite halfspaces.
//! Every combinatorial decision (membership, face identification, tightness)
//! is made in exact rational arithmetic.

use crate::linalg::{
    determinant, independent_subset, nullspace, rank_of_rows, solve, Point, Vector,
};
use crate::num::{parse_rational, rational_to_f64, Rational};
use num_traits::{Signed, Zero};
use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::{BTreeMap, BTreeSet, HashSet};

#[derive(Debug, thiserror::Error)]
pub enum GeometryError {
    #[error("empty point list")]
    EmptyInput,
    #[error("ambient dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("point is not inside the polytope")]
    PointOutside,
    #[error("scale factor must be nonnegative")]
    NegativeScale,
    #[error("face index {0} out of range")]
    FaceIndex(usize),
    #[error("index {0} out of range (limit {1})")]
    IndexOutOfRange(usize, usize),
    #[error("inconsistent facet description: {0}")]
    BadFacets(String),
    #[error("parse error: {0}")]
    Parse(String),
}

/// Closed halfspace `<normal, x> >= offset`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Halfspace {
    pub normal: Vector,
    pub offset: Rational,
}

impl Halfspace {
    pub fn eval(&self, x: &Point) -> Rational {
        self.normal.dot(x) - self.offset.clone()
    }

    pub fn contains(&self, x: &Point) -> bool {
        !self.eval(x).is_negative()
    }

    pub fn tight_on(&self, x: &Point) -> bool {
        self.eval(x).is_zero()
    }

    /// Canonical form for dedup: primitive scaling with sign fixed by the
    /// normal's first nonzero entry.
    fn canonical(&self) -> (Vec<Rational>, bool) {
        let mut all = self.normal.coords.clone();
        all.push(-self.offset.clone());
        let prim = crate::num::primitive_integer_scale(&all);
        let flip = prim
            .iter()
            .take(self.normal.dim())
            .find(|v| !v.is_zero())
            .map(|v| crate::num::bigint_sign(v) < 0)
            .unwrap_or(false);
        let coords: Vec<Rational> = prim
            .into_iter()
            .map(|v| {
                let q = Rational::from_integer(v);
                if flip {
                    -q
                } else {
                    q
                }
            })
            .collect();
        (coords, flip)
    }
}

/// One face of the lattice: vertex index set plus the halfspaces tight on it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub dim: usize,
    pub vertices: Vec<usize>,
    pub halfspaces: Vec<usize>,
}

/// Affine chart of a polytope's hull: `p = origin + basis * c`.
#[derive(Clone, Debug)]
pub struct Chart {
    pub origin: Point,
    pub basis: Vec<Vector>,
}

impl Chart {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Chart coordinates of `p`, or `None` if `p` is outside the affine hull.
    pub fn coords(&self, p: &Point) -> Option<Vector> {
        let n = self.origin.dim();
        let d = self.basis.len();
        if d == 0 {
            return if *p == self.origin {
                Some(Vector::new(Vec::new()))
            } else {
                None
            };
        }
        let rows: Vec<Vector> = (0..n)
            .map(|i| Vector::new((0..d).map(|j| self.basis[j].coords[i].clone()).collect()))
            .collect();
        let rhs: Vec<Rational> = (0..n)
            .map(|i| &p.coords[i] - &self.origin.coords[i])
            .collect();
        let c = solve(&rows, &rhs)?;
        Some(Vector::new(c))
    }
}

#[derive(Clone, Debug)]
pub struct Polytope {
    ambient_dim: usize,
    intrinsic_dim: usize,
    vertices: Vec<Point>,
    halfspaces: Vec<Halfspace>,
    /// Halfspaces `0..facet_count` are genuine facets; the rest are the
    /// affine-hull equality pairs.
    facet_count: usize,
    faces: Vec<Face>,
    chart: Chart,
}

impl PartialEq for Polytope {
    fn eq(&self, other: &Self) -> bool {
        self.ambient_dim == other.ambient_dim && self.vertices == other.vertices
    }
}
impl Eq for Polytope {}

impl std::hash::Hash for Polytope {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.vertices.hash(state);
    }
}

impl Polytope {
    /// Exact convex hull with complete face lattice. Interior points are
    /// discarded; lower-dimensional hulls are allowed.
    pub fn convex_hull(points: &[Point]) -> Result<Polytope, GeometryError> {
        if points.is_empty() {
            return Err(GeometryError::EmptyInput);
        }
        let n = points[0].dim();
        for p in points {
            if p.dim() != n {
                return Err(GeometryError::DimensionMismatch(n, p.dim()));
            }
        }
        let mut pts: Vec<Point> = points.to_vec();
        pts.sort();
        pts.dedup();

        let chart = chart_of(&pts);
        let d = chart.dim();
        let coords: Vec<Vector> = pts
            .iter()
            .map(|p| chart.coords(p).expect("input point outside own affine hull"))
            .collect();

        if d == 0 {
            return Ok(assemble_point(pts.remove(0)));
        }

        let chart_facets = if d == 1 {
            hull_facets_1d(&coords)
        } else if d == 2 {
            hull_facets_2d(&coords)
        } else {
            hull_facets_general(&coords, d)
        };
        assemble(pts, chart, chart_facets)
    }

    /// Builds a polytope from claimed vertices and facet vertex-index sets,
    /// verifying convex position and facet supports exactly. Used for large
    /// structured inputs where brute-force facet enumeration is wasteful.
    pub fn from_facets(
        points: &[Point],
        facets: &[Vec<usize>],
    ) -> Result<Polytope, GeometryError> {
        if points.is_empty() {
            return Err(GeometryError::EmptyInput);
        }
        let n = points[0].dim();
        for p in points {
            if p.dim() != n {
                return Err(GeometryError::DimensionMismatch(n, p.dim()));
            }
        }
        let mut sorted: Vec<Point> = points.to_vec();
        sorted.sort();
        sorted.dedup();
        if sorted.len() != points.len() {
            return Err(GeometryError::BadFacets("duplicate points".into()));
        }
        let perm: BTreeMap<&Point, usize> =
            sorted.iter().enumerate().map(|(i, p)| (p, i)).collect();

        let chart = chart_of(&sorted);
        let d = chart.dim();
        let coords: Vec<Vector> = sorted
            .iter()
            .map(|p| chart.coords(p).expect("point outside own affine hull"))
            .collect();

        let mut chart_facets = Vec::new();
        for facet in facets {
            let idx: Vec<usize> = facet.iter().map(|&i| perm[&points[i]]).collect();
            if idx.len() < d {
                return Err(GeometryError::BadFacets("facet with too few vertices".into()));
            }
            let edges: Vec<Vector> = idx[1..]
                .iter()
                .map(|&i| &coords[i] - &coords[idx[0]])
                .collect();
            if rank_of_rows(&edges) != d - 1 {
                return Err(GeometryError::BadFacets(
                    "facet vertices do not span a hyperplane".into(),
                ));
            }
            let ns = nullspace(&edges, d);
            debug_assert_eq!(ns.len(), 1);
            let mut normal = ns.into_iter().next().unwrap().primitive_signed();
            let mut offset = normal.dot(&coords[idx[0]]);
            let mut saw_pos = false;
            let mut saw_neg = false;
            for c in &coords {
                match crate::num::sign(&(&normal.dot(c) - &offset)) {
                    1 => saw_pos = true,
                    -1 => saw_neg = true,
                    _ => {}
                }
            }
            if saw_pos && saw_neg {
                return Err(GeometryError::BadFacets("claimed facet is not supporting".into()));
            }
            if saw_neg {
                normal = -&normal;
                offset = -offset;
            }
            let tight: BTreeSet<usize> = (0..coords.len())
                .filter(|&i| normal.dot(&coords[i]) == offset)
                .collect();
            let given: BTreeSet<usize> = idx.iter().copied().collect();
            if tight != given {
                return Err(GeometryError::BadFacets(
                    "facet vertex set does not match its supporting hyperplane".into(),
                ));
            }
            chart_facets.push((normal, offset, tight));
        }
        // Dedup (shared hyperplanes would be double-listed facets).
        chart_facets.sort_by(|a, b| a.0.coords.cmp(&b.0.coords).then(a.1.cmp(&b.1)));
        chart_facets.dedup_by(|a, b| a.0 == b.0 && a.1 == b.1);
        let poly = assemble(sorted, chart, chart_facets)?;
        if poly.vertices.len() != points.len() {
            return Err(GeometryError::BadFacets(
                "some input points are not vertices under the claimed facets".into(),
            ));
        }
        Ok(poly)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn intrinsic_dim(&self) -> usize {
        self.intrinsic_dim
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn halfspaces(&self) -> &[Halfspace] {
        &self.halfspaces
    }

    pub fn facet_count(&self) -> usize {
        self.facet_count
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn face(&self, idx: usize) -> Result<&Face, GeometryError> {
        self.faces.get(idx).ok_or(GeometryError::FaceIndex(idx))
    }

    pub fn faces_of_dim(&self, k: usize) -> impl Iterator<Item = (usize, &Face)> {
        self.faces
            .iter()
            .enumerate()
            .filter(move |(_, f)| f.dim == k)
    }

    /// Index of the improper top face (the polytope itself).
    pub fn top_face(&self) -> usize {
        self.faces.len() - 1
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn contains_point(&self, x: &Point) -> bool {
        x.dim() == self.ambient_dim && self.halfspaces.iter().all(|h| h.contains(x))
    }

    /// Relative-interior membership: inside, with every facet strict.
    pub fn contains_in_relint(&self, x: &Point) -> bool {
        if !self.contains_point(x) {
            return false;
        }
        self.halfspaces[..self.facet_count]
            .iter()
            .all(|h| h.eval(x).is_positive())
    }

    pub fn contains_polytope(&self, other: &Polytope) -> bool {
        other.vertices.iter().all(|v| self.contains_point(v))
    }

    /// Indices of halfspaces tight at `x` (requires membership).
    pub fn active_halfspaces(&self, x: &Point) -> Result<Vec<usize>, GeometryError> {
        if !self.contains_point(x) {
            return Err(GeometryError::PointOutside);
        }
        Ok((0..self.halfspaces.len())
            .filter(|&i| self.halfspaces[i].tight_on(x))
            .collect())
    }

    /// The face whose relative interior contains `x`.
    pub fn face_containing(&self, x: &Point) -> Result<usize, GeometryError> {
        let active: BTreeSet<usize> = self.active_halfspaces(x)?.into_iter().collect();
        // The face is the set of vertices tight on everything x is tight on.
        let verts: Vec<usize> = (0..self.vertices.len())
            .filter(|&v| {
                active
                    .iter()
                    .all(|&h| self.halfspaces[h].tight_on(&self.vertices[v]))
            })
            .collect();
        self.faces
            .iter()
            .position(|f| f.vertices == verts)
            .ok_or(GeometryError::PointOutside)
    }

    pub fn face_vertices(&self, idx: usize) -> Result<Vec<Point>, GeometryError> {
        let f = self.face(idx)?;
        Ok(f.vertices.iter().map(|&v| self.vertices[v].clone()).collect())
    }

    pub fn face_polytope(&self, idx: usize) -> Result<Polytope, GeometryError> {
        Polytope::convex_hull(&self.face_vertices(idx)?)
    }

    pub fn face_barycenter(&self, idx: usize) -> Result<Point, GeometryError> {
        let f = self.face(idx)?;
        let k = Rational::from_integer((f.vertices.len() as i64).into());
        let mut acc = Vector::zero(self.ambient_dim);
        for &v in &f.vertices {
            acc = &acc + &self.vertices[v];
        }
        Ok(acc.scale(&k.recip()))
    }

    pub fn barycenter(&self) -> Point {
        self.face_barycenter(self.top_face()).expect("top face exists")
    }

    /// `t*P + x` with exact coordinates; `t = 0` collapses to the point `x`.
    pub fn affine_image(&self, t: &Rational, x: &Point) -> Result<Polytope, GeometryError> {
        if t.is_negative() {
            return Err(GeometryError::NegativeScale);
        }
        if x.dim() != self.ambient_dim {
            return Err(GeometryError::DimensionMismatch(self.ambient_dim, x.dim()));
        }
        let mapped: Vec<Point> = self
            .vertices
            .iter()
            .map(|v| &v.scale(t) + x)
            .collect();
        Polytope::convex_hull(&mapped)
    }

    /// Vertex-wise negation `-P`.
    pub fn negate(&self) -> Polytope {
        let mapped: Vec<Point> = self.vertices.iter().map(|v| -v).collect();
        Polytope::convex_hull(&mapped).expect("negation preserves hull validity")
    }

    /// Simplices (vertex index lists of length `dim+1`) triangulating a face,
    /// fanned from its minimal vertex. No new vertices are introduced.
    pub fn triangulate_face(&self, idx: usize) -> Result<Vec<Vec<usize>>, GeometryError> {
        let mut memo: BTreeMap<usize, Vec<Vec<usize>>> = BTreeMap::new();
        self.triangulate_face_memo(idx, &mut memo)
    }

    fn triangulate_face_memo(
        &self,
        idx: usize,
        memo: &mut BTreeMap<usize, Vec<Vec<usize>>>,
    ) -> Result<Vec<Vec<usize>>, GeometryError> {
        if let Some(t) = memo.get(&idx) {
            return Ok(t.clone());
        }
        let f = self.face(idx)?.clone();
        let result = if f.vertices.len() == f.dim + 1 {
            vec![f.vertices.clone()]
        } else {
            let anchor = f.vertices[0];
            let mut simplices = Vec::new();
            for (sub_idx, sub) in self.faces.iter().enumerate() {
                if sub.dim + 1 != f.dim
                    || sub.vertices.contains(&anchor)
                    || !is_subset(&sub.vertices, &f.vertices)
                {
                    continue;
                }
                for mut s in self.triangulate_face_memo(sub_idx, memo)? {
                    s.push(anchor);
                    simplices.push(s);
                }
            }
            simplices
        };
        memo.insert(idx, result.clone());
        Ok(result)
    }

    /// Exact `intrinsic_dim`-volume measured in the given chart's basis.
    /// Comparisons between cells of a common target must use the target's
    /// chart so the (possibly non-Euclidean) scale factor cancels.
    pub fn volume_in_chart(&self, chart: &Chart) -> Rational {
        let d = chart.dim();
        if d == 0 {
            return Rational::from_integer(1.into());
        }
        if self.intrinsic_dim != d {
            return Rational::zero();
        }
        let coords: Vec<Vector> = self
            .vertices
            .iter()
            .map(|v| chart.coords(v).expect("cell outside target affine hull"))
            .collect();
        let mut total = Rational::zero();
        let mut factorial = Rational::from_integer(1.into());
        for k in 1..=d {
            factorial *= Rational::from_integer((k as i64).into());
        }
        for simplex in self
            .triangulate_face(self.top_face())
            .expect("top face triangulation")
        {
            let edges: Vec<Vector> = simplex[1..]
                .iter()
                .map(|&v| &coords[v] - &coords[simplex[0]])
                .collect();
            let det = determinant(&edges);
            total += det.abs();
        }
        total / factorial
    }

    /// Exact Lebesgue volume for full-dimensional polytopes (identity
    /// chart); for lower-dimensional ones the value is relative to the
    /// polytope's own chart basis and only meaningful for comparisons in
    /// that chart.
    pub fn volume_exact(&self) -> Rational {
        if self.intrinsic_dim == self.ambient_dim {
            let identity = Chart {
                origin: Point::zero(self.ambient_dim),
                basis: (0..self.ambient_dim)
                    .map(|i| Vector::unit(self.ambient_dim, i))
                    .collect(),
            };
            self.volume_in_chart(&identity)
        } else {
            self.volume_in_chart(&self.chart)
        }
    }

    /// Euclidean k-volume of a face (float; used by intrinsic volumes).
    pub fn face_volume_f64(&self, idx: usize) -> Result<f64, GeometryError> {
        let f = self.face(idx)?;
        let k = f.dim;
        if k == 0 {
            return Ok(1.0);
        }
        let mut factorial = 1.0;
        for i in 1..=k {
            factorial *= i as f64;
        }
        let mut total = 0.0;
        for simplex in self.triangulate_face(idx)? {
            let base = self.vertices[simplex[0]].to_f64();
            let edges: Vec<Vec<f64>> = simplex[1..]
                .iter()
                .map(|&v| {
                    self.vertices[v]
                        .to_f64()
                        .iter()
                        .zip(&base)
                        .map(|(a, b)| a - b)
                        .collect()
                })
                .collect();
            // Gram determinant
            let mut gram = vec![vec![0.0; k]; k];
            for i in 0..k {
                for j in 0..k {
                    gram[i][j] = edges[i].iter().zip(&edges[j]).map(|(a, b)| a * b).sum();
                }
            }
            let det = det_f64(&mut gram);
            total += det.max(0.0).sqrt() / factorial;
        }
        Ok(total)
    }

    pub fn bounding_box(&self) -> (Vector, Vector) {
        let n = self.ambient_dim;
        let mut lo = self.vertices[0].coords.clone();
        let mut hi = lo.clone();
        for v in &self.vertices[1..] {
            for i in 0..n {
                if v.coords[i] < lo[i] {
                    lo[i] = v.coords[i].clone();
                }
                if v.coords[i] > hi[i] {
                    hi[i] = v.coords[i].clone();
                }
            }
        }
        (Vector::new(lo), Vector::new(hi))
    }

    pub fn to_f64_vertices(&self) -> Vec<Vec<f64>> {
        self.vertices.iter().map(|v| v.to_f64()).collect()
    }
}

fn det_f64(m: &mut [Vec<f64>]) -> f64 {
    let n = m.len();
    let mut det = 1.0;
    for c in 0..n {
        let p = (c..n).max_by(|&a, &b| m[a][c].abs().partial_cmp(&m[b][c].abs()).unwrap());
        let p = p.unwrap();
        if m[p][c].abs() < 1e-300 {
            return 0.0;
        }
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det *= m[c][c];
        for i in (c + 1)..n {
            let f = m[i][c] / m[c][c];
            for j in c..n {
                m[i][j] -= f * m[c][j];
            }
        }
    }
    det
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    // both sorted
    let mut it = b.iter();
    'outer: for x in a {
        for y in it.by_ref() {
            if y == x {
                continue 'outer;
            }
            if y > x {
                return false;
            }
        }
        return false;
    }
    true
}

/// Affine chart spanned by a point set.
fn chart_of(pts: &[Point]) -> Chart {
    let origin = pts[0].clone();
    let edges: Vec<Vector> = pts[1..].iter().map(|p| p - &origin).collect();
    let idx = independent_subset(&edges);
    Chart {
        basis: idx.into_iter().map(|i| edges[i].clone()).collect(),
        origin,
    }
}

fn assemble_point(p: Point) -> Polytope {
    let n = p.dim();
    let mut halfspaces = Vec::new();
    for i in 0..n {
        let e = Vector::unit(n, i);
        halfspaces.push(Halfspace {
            offset: e.dot(&p),
            normal: e.clone(),
        });
        halfspaces.push(Halfspace {
            offset: -e.dot(&p),
            normal: -&e,
        });
    }
    Polytope {
        ambient_dim: n,
        intrinsic_dim: 0,
        chart: Chart {
            origin: p.clone(),
            basis: Vec::new(),
        },
        vertices: vec![p],
        halfspaces,
        facet_count: 0,
        faces: vec![Face {
            dim: 0,
            vertices: vec![0],
            halfspaces: Vec::new(),
        }],
    }
}

/// 1-D hull in chart coordinates: min and max.
fn hull_facets_1d(coords: &[Vector]) -> Vec<(Vector, Rational, BTreeSet<usize>)> {
    let mut min_i = 0;
    let mut max_i = 0;
    for (i, c) in coords.iter().enumerate() {
        if c.coords[0] < coords[min_i].coords[0] {
            min_i = i;
        }
        if c.coords[0] > coords[max_i].coords[0] {
            max_i = i;
        }
    }
    let lo = coords[min_i].coords[0].clone();
    let hi = coords[max_i].coords[0].clone();
    let tight = |val: &Rational| -> BTreeSet<usize> {
        (0..coords.len())
            .filter(|&i| &coords[i].coords[0] == val)
            .collect()
    };
    vec![
        (Vector::from_ints(&[1]), lo.clone(), tight(&lo)),
        (Vector::from_ints(&[-1]), -hi.clone(), tight(&hi)),
    ]
}

/// 2-D hull: monotone chain with exact orientation predicate.
fn hull_facets_2d(coords: &[Vector]) -> Vec<(Vector, Rational, BTreeSet<usize>)> {
    let mut order: Vec<usize> = (0..coords.len()).collect();
    order.sort_by(|&a, &b| coords[a].coords.cmp(&coords[b].coords));
    let orient = |o: usize, a: usize, b: usize| -> i32 {
        let e1 = &coords[a] - &coords[o];
        let e2 = &coords[b] - &coords[o];
        crate::num::sign(&(&(&e1.coords[0] * &e2.coords[1]) - &(&e1.coords[1] * &e2.coords[0])))
    };
    let build = |iter: &mut dyn Iterator<Item = usize>| -> Vec<usize> {
        let mut chain: Vec<usize> = Vec::new();
        for i in iter {
            while chain.len() >= 2 && orient(chain[chain.len() - 2], chain[chain.len() - 1], i) <= 0
            {
                chain.pop();
            }
            chain.push(i);
        }
        chain
    };
    let lower = build(&mut order.iter().copied());
    let upper = build(&mut order.iter().rev().copied());
    let mut ring = lower;
    ring.pop();
    let mut upper = upper;
    upper.pop();
    ring.extend(upper);
    // ring is the CCW hull; consecutive pairs are edges
    let m = ring.len();
    let mut facets = Vec::new();
    for e in 0..m {
        let a = ring[e];
        let b = ring[(e + 1) % m];
        let dirv = &coords[b] - &coords[a];
        // inward normal of a CCW edge: rotate direction by +90 degrees
        let normal = Vector::new(vec![-dirv.coords[1].clone(), dirv.coords[0].clone()])
            .primitive_signed();
        let mut offset = normal.dot(&coords[a]);
        // primitive_signed may flip orientation; re-orient inward
        let inward_ok = coords
            .iter()
            .all(|c| !(&normal.dot(c) - &offset).is_negative());
        let (normal, offset) = if inward_ok {
            (normal, offset)
        } else {
            offset = -offset;
            (-&normal, offset)
        };
        let tight: BTreeSet<usize> = (0..coords.len())
            .filter(|&i| normal.dot(&coords[i]) == offset)
            .collect();
        facets.push((normal, offset, tight));
    }
    facets.sort_by(|a, b| a.0.coords.cmp(&b.0.coords).then(a.1.cmp(&b.1)));
    facets.dedup_by(|a, b| a.0 == b.0 && a.1 == b.1);
    facets
}

/// General-dimension facet enumeration over affinely independent d-subsets.
/// Brute force; fine at desk scale.
fn hull_facets_general(coords: &[Vector], d: usize) -> Vec<(Vector, Rational, BTreeSet<usize>)> {
    let m = coords.len();
    let mut seen: HashSet<(Vec<Rational>, Rational)> = HashSet::new();
    let mut facets = Vec::new();
    let mut subset: Vec<usize> = (0..d).collect();
    loop {
        // candidate hyperplane through coords[subset]
        let edges: Vec<Vector> = subset[1..]
            .iter()
            .map(|&i| &coords[i] - &coords[subset[0]])
            .collect();
        if rank_of_rows(&edges) == d - 1 {
            let ns = nullspace(&edges, d);
            if ns.len() == 1 {
                let normal0 = ns.into_iter().next().unwrap().primitive_signed();
                let offset0 = normal0.dot(&coords[subset[0]]);
                if seen.insert((normal0.coords.clone(), offset0.clone())) {
                    let mut saw_pos = false;
                    let mut saw_neg = false;
                    for c in coords {
                        match crate::num::sign(&(&normal0.dot(c) - &offset0)) {
                            1 => saw_pos = true,
                            -1 => saw_neg = true,
                            _ => {}
                        }
                        if saw_pos && saw_neg {
                            break;
                        }
                    }
                    if !(saw_pos && saw_neg) {
                        let (normal, offset) = if saw_neg {
                            (-&normal0, -offset0.clone())
                        } else {
                            (normal0.clone(), offset0.clone())
                        };
                        let tight: BTreeSet<usize> = (0..m)
                            .filter(|&i| normal.dot(&coords[i]) == offset)
                            .collect();
                        facets.push((normal, offset, tight));
                    }
                }
            }
        }
        // next d-subset
        let mut advanced = false;
        let mut i = d;
        while i > 0 {
            i -= 1;
            if subset[i] != i + m - d {
                subset[i] += 1;
                for j in (i + 1)..d {
                    subset[j] = subset[j - 1] + 1;
                }
                advanced = true;
                break;
            }
        }
        if !advanced {
            break;
        }
    }
    // dedup facets that arose from different subsets after reorientation
    facets.sort_by(|a, b| a.0.coords.cmp(&b.0.coords).then(a.1.cmp(&b.1)));
    facets.dedup_by(|a, b| a.0 == b.0 && a.1 == b.1);
    facets
}

/// Shared tail of hull construction: filter true vertices, build the face
/// lattice by intersection closure of facet vertex sets, lift halfspaces to
/// the ambient space.
fn assemble(
    pts: Vec<Point>,
    chart: Chart,
    chart_facets: Vec<(Vector, Rational, BTreeSet<usize>)>,
) -> Result<Polytope, GeometryError> {
    let n = pts[0].dim();
    let d = chart.dim();

    // A point is a vertex iff its tight facet normals span the chart.
    let mut vertex_ids = Vec::new();
    for i in 0..pts.len() {
        let active: Vec<Vector> = chart_facets
            .iter()
            .filter(|(_, _, tight)| tight.contains(&i))
            .map(|(nrm, _, _)| nrm.clone())
            .collect();
        if rank_of_rows(&active) == d {
            vertex_ids.push(i);
        }
    }
    if vertex_ids.is_empty() {
        return Err(GeometryError::BadFacets("no vertices found".into()));
    }
    let remap: BTreeMap<usize, usize> = vertex_ids
        .iter()
        .enumerate()
        .map(|(new, &old)| (old, new))
        .collect();
    let vertices: Vec<Point> = vertex_ids.iter().map(|&i| pts[i].clone()).collect();


    // Facet vertex sets in new indexing.
    let facet_sets: Vec<BTreeSet<usize>> = chart_facets
        .iter()
        .map(|(_, _, tight)| {
            tight
                .iter()
                .filter_map(|i| remap.get(i).copied())
                .collect()
        })
        .collect();

    // Intersection closure gives every face as a vertex set.
    let all: BTreeSet<usize> = (0..vertices.len()).collect();
    let mut family: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
    family.insert(all.clone());
    for f in &facet_sets {
        if !f.is_empty() {
            family.insert(f.clone());
        }
    }
    loop {
        let snapshot: Vec<BTreeSet<usize>> = family.iter().cloned().collect();
        let mut grew = false;
        for i in 0..snapshot.len() {
            for j in (i + 1)..snapshot.len() {
                let inter: BTreeSet<usize> =
                    snapshot[i].intersection(&snapshot[j]).copied().collect();
                if !inter.is_empty() && family.insert(inter) {
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }

    // Lift halfspaces to ambient coordinates.
    let mut halfspaces = Vec::new();
    for (nrm, off, _) in &chart_facets {
        // solve basis^T a = nrm
        let rows: Vec<Vector> = chart.basis.to_vec();
        let a = solve(&rows, &nrm.coords).expect("basis rows are independent");
        let a = Vector::new(a);
        let b = &a.dot(&chart.origin) + off;
        halfspaces.push(Halfspace { normal: a, offset: b });
    }
    let facet_count = halfspaces.len();
    for w in nullspace(&chart.basis, n) {
        let c = w.dot(&chart.origin);
        halfspaces.push(Halfspace {
            normal: w.clone(),
            offset: c.clone(),
        });
        halfspaces.push(Halfspace {
            normal: -&w,
            offset: -c,
        });
    }

    // Grade faces by affine rank and attach tight halfspaces.
    let mut faces: Vec<Face> = Vec::new();
    for set in family {
        let verts: Vec<usize> = set.iter().copied().collect();
        let edges: Vec<Vector> = verts[1..]
            .iter()
            .map(|&v| &vertices[v] - &vertices[verts[0]])
            .collect();
        let dim = rank_of_rows(&edges);
        let tight_hs: Vec<usize> = (0..halfspaces.len())
            .filter(|&h| verts.iter().all(|&v| halfspaces[h].tight_on(&vertices[v])))
            .collect();
        faces.push(Face {
            dim,
            vertices: verts,
            halfspaces: tight_hs,
        });
    }
    faces.sort_by(|a, b| a.dim.cmp(&b.dim).then(a.vertices.cmp(&b.vertices)));

    let poly = Polytope {
        ambient_dim: n,
        intrinsic_dim: d,
        vertices,
        halfspaces,
        facet_count,
        faces,
        chart,
    };
    debug_assert!(poly.check_consistency());
    Ok(poly)
}

impl Polytope {
    /// V-rep/H-rep agreement check, run at construction in debug builds.
    pub fn check_consistency(&self) -> bool {
        for v in &self.vertices {
            if !self.contains_point(v) {
                return false;
            }
        }
        // every facet supports at least one face of dimension intrinsic_dim-1
        if self.intrinsic_dim > 0 {
            for h in 0..self.facet_count {
                let tight: Vec<usize> = (0..self.vertices.len())
                    .filter(|&v| self.halfspaces[h].tight_on(&self.vertices[v]))
                    .collect();
                let edges: Vec<Vector> = tight[1..]
                    .iter()
                    .map(|&v| &self.vertices[v] - &self.vertices[tight[0]])
                    .collect();
                if tight.is_empty() || rank_of_rows(&edges) != self.intrinsic_dim - 1 {
                    return false;
                }
            }
        }
        true
    }
}

/// Exact intersection of two polytopes; `None` when empty.
pub fn intersect_polytopes(p: &Polytope, q: &Polytope) -> Option<Polytope> {
    assert_eq!(p.ambient_dim, q.ambient_dim, "ambient dimension mismatch");
    let n = p.ambient_dim;
    // cheap bbox reject
    let (plo, phi) = p.bounding_box();
    let (qlo, qhi) = q.bounding_box();
    for i in 0..n {
        if plo.coords[i] > qhi.coords[i] || qlo.coords[i] > phi.coords[i] {
            return None;
        }
    }

    // Deduplicate halfspaces and the hyperplanes they bound.
    let mut halfspaces: Vec<Halfspace> = Vec::new();
    let mut seen_hs: HashSet<Vec<Rational>> = HashSet::new();
    for h in p.halfspaces.iter().chain(q.halfspaces.iter()) {
        if h.normal.is_zero() {
            continue;
        }
        let (canon, _) = h.canonical();
        // canonical() fixes the sign of the normal part, so opposite halfspaces
        // of an equality pair stay distinct via their offset sign... they do not:
        // keep the raw signed canonical form instead.
        let mut key = h.normal.primitive().coords.clone();
        let scale = first_ratio(&h.normal, &Vector::new(key.clone()));
        key.push(&h.offset * &scale);
        let _ = canon;
        if seen_hs.insert(key) {
            halfspaces.push(h.clone());
        }
    }

    let mut planes: Vec<(Vector, Rational)> = Vec::new();
    let mut seen_pl: HashSet<(Vec<Rational>, Rational)> = HashSet::new();
    for h in &halfspaces {
        let nrm = h.normal.primitive_signed();
        let scale = first_ratio(&h.normal, &nrm);
        let off = &h.offset * &scale;
        if seen_pl.insert((nrm.coords.clone(), off.clone())) {
            planes.push((nrm, off));
        }
    }

    // Vertices are basic feasible solutions of n independent hyperplanes.
    let m = planes.len();
    if m < n {
        // can only happen for full-space degenerate input; not expected here
        return None;
    }
    let mut candidates: BTreeSet<Vector> = BTreeSet::new();
    let mut subset: Vec<usize> = (0..n).collect();
    loop {
        let rows: Vec<Vector> = subset.iter().map(|&i| planes[i].0.clone()).collect();
        if rank_of_rows(&rows) == n {
            let rhs: Vec<Rational> = subset.iter().map(|&i| planes[i].1.clone()).collect();
            if let Some(x) = solve(&rows, &rhs) {
                let x = Vector::new(x);
                if halfspaces.iter().all(|h| h.contains(&x)) {
                    candidates.insert(x);
                }
            }
        }
        // next subset
        let mut i = n;
        let mut advanced = false;
        while i > 0 {
            i -= 1;
            if subset[i] != i + m - n {
                subset[i] += 1;
                for j in (i + 1)..n {
                    subset[j] = subset[j - 1] + 1;
                }
                advanced = true;
                break;
            }
        }
        if !advanced {
            break;
        }
    }
    if candidates.is_empty() {
        return None;
    }
    let pts: Vec<Point> = candidates.into_iter().collect();
    Some(Polytope::convex_hull(&pts).expect("intersection hull"))
}

fn first_ratio(original: &Vector, primitive: &Vector) -> Rational {
    // scale s with primitive = s * original on the first nonzero coordinate
    for (o, p) in original.coords.iter().zip(&primitive.coords) {
        if !o.is_zero() {
            return p / o;
        }
    }
    Rational::from_integer(1.into())
}

// ---------------------------------------------------------------------------
// JSON: {"dim": n, "vertices": [["p/q", ...], ...]}. H-reps are recomputed.
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct PolytopeJson {
    dim: usize,
    vertices: Vec<Vec<String>>,
}

impl Serialize for Polytope {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        PolytopeJson {
            dim: self.ambient_dim,
            vertices: self
                .vertices
                .iter()
                .map(|v| v.coords.iter().map(|c| c.to_string()).collect())
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Polytope {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = PolytopeJson::deserialize(deserializer)?;
        let mut pts = Vec::new();
        for v in &raw.vertices {
            if v.len() != raw.dim {
                return Err(D::Error::custom("vertex arity does not match dim"));
            }
            let coords: Result<Vec<Rational>, _> = v.iter().map(|s| parse_rational(s)).collect();
            pts.push(Vector::new(coords.map_err(D::Error::custom)?));
        }
        Polytope::convex_hull(&pts).map_err(D::Error::custom)
    }
}

/// Float bounding box helper used by support checks.
pub fn bounding_box_f64(p: &Polytope) -> (Vec<f64>, Vec<f64>) {
    let (lo, hi) = p.bounding_box();
    (
        lo.coords.iter().map(rational_to_f64).collect(),
        hi.coords.iter().map(rational_to_f64).collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{rat, rat_int};

    fn pt(coords: &[i64]) -> Point {
        Point::from_ints(coords)
    }

    fn unit_square() -> Polytope {
        Polytope::convex_hull(&[pt(&[0, 0]), pt(&[1, 0]), pt(&[0, 1]), pt(&[1, 1])]).unwrap()
    }

    #[test]
    fn square_combinatorics() {
        let s = unit_square();
        assert_eq!(s.intrinsic_dim(), 2);
        assert_eq!(s.vertices().len(), 4);
        assert_eq!(s.faces_of_dim(0).count(), 4);
        assert_eq!(s.faces_of_dim(1).count(), 4);
        assert_eq!(s.faces_of_dim(2).count(), 1);
        assert_eq!(s.facet_count(), 4);
    }

    #[test]
    fn single_point_hull() {
        let p = Polytope::convex_hull(&[pt(&[2, 3])]).unwrap();
        assert_eq!(p.intrinsic_dim(), 0);
        assert_eq!(p.faces().len(), 1);
        assert!(p.contains_point(&pt(&[2, 3])));
        assert!(!p.contains_point(&pt(&[2, 4])));
    }

    #[test]
    fn cube_with_interior_point_discards_it() {
        let mut pts = Vec::new();
        for x in 0..2 {
            for y in 0..2 {
                for z in 0..2 {
                    pts.push(pt(&[x, y, z]));
                }
            }
        }
        pts.push(Point::new(vec![rat(1, 2), rat(1, 2), rat(1, 2)]));
        let c = Polytope::convex_hull(&pts).unwrap();
        assert_eq!(c.vertices().len(), 8);
        assert_eq!(c.faces_of_dim(2).count(), 6);
        assert_eq!(c.faces_of_dim(1).count(), 12);
        assert_eq!(c.faces_of_dim(0).count(), 8);
        assert_eq!(c.volume_exact(), rat_int(1));
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let err = Polytope::convex_hull(&[pt(&[0, 0]), pt(&[1, 2, 3])]);
        assert!(matches!(err, Err(GeometryError::DimensionMismatch(_, _))));
    }

    #[test]
    fn lower_dimensional_hull_gets_equality_pairs() {
        // segment in the plane
        let s = Polytope::convex_hull(&[pt(&[0, 0]), pt(&[2, 2])]).unwrap();
        assert_eq!(s.intrinsic_dim(), 1);
        assert!(s.contains_point(&pt(&[1, 1])));
        assert!(!s.contains_point(&pt(&[1, 0])));
        assert_eq!(s.faces().len(), 3); // 2 endpoints + the segment
    }

    #[test]
    fn affine_image_examples() {
        let s = unit_square();
        let big = s.affine_image(&rat_int(2), &pt(&[1, 1])).unwrap();
        let expect =
            Polytope::convex_hull(&[pt(&[1, 1]), pt(&[3, 1]), pt(&[1, 3]), pt(&[3, 3])]).unwrap();
        assert_eq!(big, expect);

        let same = s.affine_image(&rat_int(1), &pt(&[0, 0])).unwrap();
        assert_eq!(same, s);

        let seg = Polytope::convex_hull(&[pt(&[0]), pt(&[1])]).unwrap();
        let collapsed = seg.affine_image(&rat_int(0), &pt(&[5])).unwrap();
        assert_eq!(collapsed.intrinsic_dim(), 0);
        assert_eq!(collapsed.vertices()[0], pt(&[5]));

        assert!(matches!(
            s.affine_image(&rat_int(-1), &pt(&[0, 0])),
            Err(GeometryError::NegativeScale)
        ));
    }

    #[test]
    fn affine_image_composition_is_exact() {
        let s = unit_square();
        let a = s
            .affine_image(&rat(3, 2), &pt(&[0, 0]))
            .unwrap()
            .affine_image(&rat(4, 3), &pt(&[2, -1]))
            .unwrap();
        let b = s.affine_image(&rat_int(2), &pt(&[2, -1])).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn negate_examples() {
        let s = unit_square();
        let neg = s.negate();
        let expect =
            Polytope::convex_hull(&[pt(&[0, 0]), pt(&[-1, 0]), pt(&[0, -1]), pt(&[-1, -1])])
                .unwrap();
        assert_eq!(neg, expect);

        let sym = Polytope::convex_hull(&[
            pt(&[-1, -1, -1]),
            pt(&[1, -1, -1]),
            pt(&[-1, 1, -1]),
            pt(&[1, 1, -1]),
            pt(&[-1, -1, 1]),
            pt(&[1, -1, 1]),
            pt(&[-1, 1, 1]),
            pt(&[1, 1, 1]),
        ])
        .unwrap();
        assert_eq!(sym.negate(), sym);

        let simplex =
            Polytope::convex_hull(&[pt(&[0, 0]), pt(&[1, 0]), pt(&[0, 1])]).unwrap();
        let nsimplex = simplex.negate();
        let expect =
            Polytope::convex_hull(&[pt(&[0, 0]), pt(&[-1, 0]), pt(&[0, -1])]).unwrap();
        assert_eq!(nsimplex, expect);
    }

    #[test]
    fn euler_relation_on_proper_faces() {
        // sum over proper nonempty faces of (-1)^dim = 1 + (-1)^(n-1)
        for (poly, n) in [
            (unit_square(), 2usize),
            (
                Polytope::convex_hull(&[pt(&[0, 0, 0]), pt(&[1, 0, 0]), pt(&[0, 1, 0]), pt(&[0, 0, 1])])
                    .unwrap(),
                3,
            ),
        ] {
            let top = poly.top_face();
            let sum: i64 = poly
                .faces()
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != top)
                .map(|(_, f)| if f.dim % 2 == 0 { 1 } else { -1 })
                .sum();
            let expect = 1 + if (n - 1) % 2 == 0 { 1 } else { -1 };
            assert_eq!(sum, expect);
        }
    }

    #[test]
    fn intersection_of_overlapping_squares() {
        let a = unit_square();
        let b = a
            .affine_image(&rat_int(1), &Point::new(vec![rat(1, 2), rat(1, 2)]))
            .unwrap();
        let inter = intersect_polytopes(&a, &b).unwrap();
        assert_eq!(inter.volume_exact(), rat(1, 4));

        let far = a.affine_image(&rat_int(1), &pt(&[5, 5])).unwrap();
        assert!(intersect_polytopes(&a, &far).is_none());

        // touching squares intersect in an edge
        let right = a.affine_image(&rat_int(1), &pt(&[1, 0])).unwrap();
        let edge = intersect_polytopes(&a, &right).unwrap();
        assert_eq!(edge.intrinsic_dim(), 1);
    }

    #[test]
    fn triangulate_square_gives_two_triangles() {
        let s = unit_square();
        let t = s.triangulate_face(s.top_face()).unwrap();
        assert_eq!(t.len(), 2);
        for simplex in &t {
            assert_eq!(simplex.len(), 3);
        }
    }

    #[test]
    fn json_round_trip_recomputes_hull() {
        let s = unit_square();
        let js = serde_json::to_string(&s).unwrap();
        let back: Polytope = serde_json::from_str(&js).unwrap();
        assert_eq!(back, s);
        let manual = r#"{"dim":2,"vertices":[["0","0"],["1","0"],["1","1"],["0","1"],["1/2","1/2"]]}"#;
        let parsed: Polytope = serde_json::from_str(manual).unwrap();
        assert_eq!(parsed, s); // interior point dropped
    }

    #[test]
    fn brute_force_facet_oracle_matches_cube() {
        // Independent oracle: enumerate all point triples, keep supporting
        // hyperplanes; compare the facet set against the constructor's.
        let mut pts = Vec::new();
        for x in 0..2 {
            for y in 0..2 {
                for z in 0..2 {
                    pts.push(pt(&[x, y, z]));
                }
            }
        }
        pts.push(Point::new(vec![rat(1, 2), rat(1, 2), rat(1, 2)]));
        let cube = Polytope::convex_hull(&pts).unwrap();

        let mut oracle: BTreeSet<(Vec<Rational>, Rational)> = BTreeSet::new();
        let m = pts.len();
        for i in 0..m {
            for j in (i + 1)..m {
                for k in (j + 1)..m {
                    let e1 = &pts[j] - &pts[i];
                    let e2 = &pts[k] - &pts[i];
                    let ns = nullspace(&[e1.clone(), e2.clone()], 3);
                    if ns.len() != 1 {
                        continue;
                    }
                    let nrm = ns[0].primitive_signed();
                    let off = nrm.dot(&pts[i]);
                    let signs: Vec<i32> = pts
                        .iter()
                        .map(|p| crate::num::sign(&(&nrm.dot(p) - &off)))
                        .collect();
                    if signs.iter().all(|&s| s >= 0) {
                        oracle.insert((nrm.coords.clone(), off.clone()));
                    } else if signs.iter().all(|&s| s <= 0) {
                        oracle.insert(((-&nrm).coords, -off));
                    }
                }
            }
        }
        let got: BTreeSet<(Vec<Rational>, Rational)> = cube.halfspaces()[..cube.facet_count()]
            .iter()
            .map(|h| {
                let nrm = h.normal.primitive();
                let s = first_ratio(&h.normal, &nrm);
                (nrm.coords, &h.offset * &s)
            })
            .collect();
        assert_eq!(oracle, got);
    }
}
