//! Polyhedral cones with dual V/H representations, duality, lineality, and
//! decomposition into pointed simplicial pieces for quadrature.

use crate::linalg::{nullspace, rank_of_rows, solve, Point, Vector};
use crate::num::Rational;
use crate::polytope::{GeometryError, Polytope};
use num_traits::{Signed, Zero};
use std::collections::BTreeSet;

/// Closed convex polyhedral cone `{x : <a, x - apex> >= 0 for all a}`.
/// Generators and halfspaces are kept in agreement; `generators` spans the
/// cone together with the lineality directions it contains (lines appear as
/// +/- pairs).
#[derive(Clone, Debug)]
pub struct Cone {
    pub apex: Point,
    pub generators: Vec<Vector>,
    pub halfspaces: Vec<Vector>,
}

impl Cone {
    /// Cone from halfspace normals (apex at the origin).
    pub fn from_halfspaces(dim: usize, normals: Vec<Vector>) -> Cone {
        let normals: Vec<Vector> = normals
            .into_iter()
            .filter(|v| !v.is_zero())
            .map(|v| v.primitive())
            .collect();
        let mut dedup: Vec<Vector> = Vec::new();
        let mut seen = BTreeSet::new();
        for v in normals {
            if seen.insert(v.coords.clone()) {
                dedup.push(v);
            }
        }
        let generators = generators_from_halfspaces(dim, &dedup);
        Cone {
            apex: Point::zero(dim),
            generators,
            halfspaces: dedup,
        }
    }

    /// Cone spanned by `rays` (apex at the origin). The halfspace
    /// representation is obtained via the dual.
    pub fn from_generators(dim: usize, rays: Vec<Vector>) -> Cone {
        let rays: Vec<Vector> = rays
            .into_iter()
            .filter(|v| !v.is_zero())
            .map(|v| v.primitive())
            .collect();
        let mut dedup: Vec<Vector> = Vec::new();
        let mut seen = BTreeSet::new();
        for v in rays {
            if seen.insert(v.coords.clone()) {
                dedup.push(v);
            }
        }
        // halfspaces of cone(R) = generators of {y : <y, r> >= 0 for r in R}
        let halfspaces = generators_from_halfspaces(dim, &dedup);
        Cone {
            apex: Point::zero(dim),
            generators: dedup,
            halfspaces,
        }
    }

    pub fn dim_ambient(&self) -> usize {
        self.apex.dim()
    }

    /// Dimension of the linear span of the cone.
    pub fn dim(&self) -> usize {
        rank_of_rows(&self.generators)
    }

    /// Basis of the largest linear subspace contained in the cone.
    pub fn lineality_space(&self) -> Vec<Vector> {
        nullspace(&self.halfspaces, self.dim_ambient())
    }

    pub fn is_pointed(&self) -> bool {
        self.lineality_space().is_empty()
    }

    pub fn contains(&self, dir: &Vector) -> bool {
        self.halfspaces.iter().all(|a| !a.dot(dir).is_negative())
    }

    /// The dual cone `{y : <y, x> >= 0 for all x in C}`; requires apex at the
    /// origin, per the construction it feeds.
    pub fn dual(&self) -> Result<Cone, GeometryError> {
        if !self.apex.is_zero() {
            return Err(GeometryError::BadFacets("dual cone requires apex at origin".into()));
        }
        // H-rep of the dual is exactly the generator list, and vice versa.
        Ok(Cone {
            apex: self.apex.clone(),
            generators: self.halfspaces.clone(),
            halfspaces: self.generators.clone(),
        })
    }

    /// Fiberwise antipode `-C`.
    pub fn negate(&self) -> Cone {
        Cone {
            apex: self.apex.clone(),
            generators: self.generators.iter().map(|g| -g).collect(),
            halfspaces: self.halfspaces.iter().map(|a| -a).collect(),
        }
    }

    /// Point-set equality via mutual containment of generators.
    pub fn set_eq(&self, other: &Cone) -> bool {
        self.apex == other.apex
            && self.generators.iter().all(|g| other.contains(g))
            && other.generators.iter().all(|g| self.contains(g))
    }

    /// Splits the cone into pointed simplicial subcones with pairwise
    /// disjoint interiors whose union is the cone. Each piece has exactly
    /// `self.dim()` independent rays.
    pub fn simplicial_cover(&self) -> Vec<Vec<Vector>> {
        let dim = self.dim_ambient();
        if self.dim() == 0 {
            return Vec::new();
        }
        let mut out = Vec::new();
        split_lineality(dim, &self.halfspaces, &mut out);
        out
    }

    /// Truncation `C ∩ [-r, r]^n` as a polytope (exact), used by fiber
    /// quadrature. Returns `None` for the zero cone.
    pub fn box_truncation(&self, r: &Rational) -> Option<Polytope> {
        let n = self.dim_ambient();
        if self.dim() == 0 {
            return None;
        }
        debug_assert!(self.apex.is_zero());
        let mut normals: Vec<(Vector, Rational)> = self
            .halfspaces
            .iter()
            .map(|a| (a.clone(), Rational::zero()))
            .collect();
        for i in 0..n {
            normals.push((Vector::unit(n, i), -r.clone()));
            normals.push((-&Vector::unit(n, i), -r.clone()));
        }
        // vertex enumeration over the bounded region
        let verts = enumerate_vertices(n, &normals);
        if verts.is_empty() {
            return None;
        }
        Some(Polytope::convex_hull(&verts).expect("truncated cone hull"))
    }
}

/// Extreme directions of `{x : <a_i, x> >= 0}`, including +/- lineality basis.
fn generators_from_halfspaces(dim: usize, normals: &[Vector]) -> Vec<Vector> {
    let lineality = nullspace(normals, dim);
    let mut gens: Vec<Vector> = Vec::new();
    let mut seen: BTreeSet<Vec<Rational>> = BTreeSet::new();
    let mut push = |v: Vector, gens: &mut Vec<Vector>| {
        let p = v.primitive();
        if !p.is_zero() && seen.insert(p.coords.clone()) {
            gens.push(p);
        }
    };
    for l in &lineality {
        push(l.clone(), &mut gens);
        push(-l, &mut gens);
    }
    let rank = dim - lineality.len();
    if rank == 0 {
        return gens;
    }
    if normals.is_empty() {
        return gens;
    }
    // Quotient-extreme rays have an active set of rank exactly rank-1.
    let m = normals.len();
    let take = rank - 1;
    let mut subset: Vec<usize> = (0..take).collect();
    loop {
        let rows: Vec<Vector> = subset.iter().map(|&i| normals[i].clone()).collect();
        let ns = nullspace(&rows, dim);
        if ns.len() == lineality.len() + 1 {
            // pick a nullspace direction outside the lineality
            for cand in &ns {
                let mut ext = lineality.clone();
                ext.push(cand.clone());
                if rank_of_rows(&ext) != lineality.len() + 1 {
                    continue;
                }
                for v in [cand.clone(), -cand] {
                    if normals.iter().all(|a| !a.dot(&v).is_negative()) {
                        push(v, &mut gens);
                    }
                }
                break;
            }
        }
        if take == 0 {
            break;
        }
        let mut i = take;
        let mut advanced = false;
        while i > 0 {
            i -= 1;
            if subset[i] != i + m - take {
                subset[i] += 1;
                for j in (i + 1)..take {
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
    gens
}

/// Recursive splitting: remove lineality by cutting along a hyperplane, then
/// fan pointed cones from an extreme ray.
fn split_lineality(dim: usize, halfspaces: &[Vector], out: &mut Vec<Vec<Vector>>) {
    let lin = nullspace(halfspaces, dim);
    if let Some(l) = lin.first() {
        let mut plus = halfspaces.to_vec();
        plus.push(l.clone());
        let mut minus = halfspaces.to_vec();
        minus.push(-l);
        split_lineality(dim, &plus, out);
        split_lineality(dim, &minus, out);
        return;
    }
    split_pointed(dim, halfspaces, out);
}

fn split_pointed(dim: usize, halfspaces: &[Vector], out: &mut Vec<Vec<Vector>>) {
    let rays = generators_from_halfspaces(dim, halfspaces);
    let rank = rank_of_rows(&rays);
    if rank == 0 {
        return;
    }
    if rays.len() == rank {
        out.push(rays);
        return;
    }
    // fan from the first extreme ray over facets not containing it
    let r0 = rays[0].clone();
    for a in halfspaces {
        if a.dot(&r0).is_zero() {
            continue; // facet contains r0
        }
        // facet subcone: cone ∩ {a = 0}
        let mut sub = halfspaces.to_vec();
        sub.push(a.clone());
        sub.push(-a);
        let mut pieces = Vec::new();
        split_pointed(dim, &sub, &mut pieces);
        for mut piece in pieces {
            piece.push(r0.clone());
            if rank_of_rows(&piece) == piece.len() {
                out.push(piece);
            }
        }
    }
}

/// Basic feasible solutions of a halfspace system `<a, x> >= b`.
fn enumerate_vertices(n: usize, system: &[(Vector, Rational)]) -> Vec<Point> {
    let mut planes: Vec<(Vector, Rational)> = Vec::new();
    let mut seen: BTreeSet<(Vec<Rational>, Rational)> = BTreeSet::new();
    for (a, b) in system {
        let p = a.primitive_signed();
        let scale = {
            let mut s = Rational::from_integer(1.into());
            for (o, q) in a.coords.iter().zip(&p.coords) {
                if !o.is_zero() {
                    s = q / o;
                    break;
                }
            }
            s
        };
        let off = b * &scale;
        if seen.insert((p.coords.clone(), off.clone())) {
            planes.push((p, off));
        }
    }
    let m = planes.len();
    if m < n {
        return Vec::new();
    }
    let mut found: BTreeSet<Vector> = BTreeSet::new();
    let mut subset: Vec<usize> = (0..n).collect();
    loop {
        let rows: Vec<Vector> = subset.iter().map(|&i| planes[i].0.clone()).collect();
        if rank_of_rows(&rows) == n {
            let rhs: Vec<Rational> = subset.iter().map(|&i| planes[i].1.clone()).collect();
            if let Some(x) = solve(&rows, &rhs) {
                let x = Vector::new(x);
                if system.iter().all(|(a, b)| !(&a.dot(&x) - b).is_negative()) {
                    found.insert(x);
                }
            }
        }
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
    found.into_iter().collect()
}

/// Tangent cone of `P` at `x`: the closure of feasible directions, i.e. the
/// intersection of the halfspaces active at `x`, moved to the origin.
pub fn tangent_cone(p: &Polytope, x: &Point) -> Result<Cone, GeometryError> {
    let active = p.active_halfspaces(x)?;
    let normals: Vec<Vector> = active
        .into_iter()
        .map(|i| p.halfspaces()[i].normal.clone())
        .collect();
    Ok(Cone::from_halfspaces(p.ambient_dim(), normals))
}

/// Dual cone operation, re-exported at the module level for spec parity.
pub fn dual_cone(c: &Cone) -> Result<Cone, GeometryError> {
    c.dual()
}
