//! Characteristic and normal cycles of polytopes as oriented cell chains.
//!
//! A characteristic-cycle cell is `relint(F) x N_F` where `N_F` is the dual
//! of the tangent cone along the face `F` (inward normals). The normal cycle
//! applies the fiberwise antipode, drops the zero-section cell, and replaces
//! each cone by its intersection with the unit sphere.
//!
//! Orientation convention: the chain is oriented so that the map
//! `(x, xi) -> x - xi` is orientation preserving onto R^n; concretely a cell
//! frame (face basis followed by fiber basis) is positive iff
//! `(-1)^(n - dim F) det[face basis | fiber basis] > 0`. Normal-cycle cells
//! put the outward radial direction first among the fiber directions. The
//! convention is validated by the Stokes and Gauss-degree checks rather than
//! assumed.

use crate::cone::{tangent_cone, Cone};
use crate::form::DifferentialForm;
use crate::integrate::{integrate, IntegrateError};
use crate::polytope::{GeometryError, Polytope};
use crate::quadrature::QuadratureRule;
use serde::ser::SerializeStruct;
use serde::Serialize;
use std::sync::Arc;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChainSpace {
    /// Subset of R^n x R^n, conic fibers, cells of total dimension n.
    Characteristic,
    /// Subset of R^n x S^{n-1}, spherical fibers, cells of dimension n-1.
    Normal,
}

#[derive(Clone, Debug)]
pub struct CycleCell {
    /// Face index into the source polytope's lattice.
    pub face: usize,
    /// Characteristic cells carry the dual tangent cone (inward normals);
    /// normal cells carry its antipodal image (outward normals), whose
    /// sphere trace is the fiber.
    pub cone: Cone,
    /// Diagnostic orientation flip (used by the falsification controls).
    pub flipped: bool,
}

#[derive(Clone, Debug)]
pub struct CycleChain {
    pub polytope: Arc<Polytope>,
    pub space: ChainSpace,
    pub cells: Vec<CycleCell>,
}

impl CycleChain {
    pub fn ambient_dim(&self) -> usize {
        self.polytope.ambient_dim()
    }

    /// Degree of forms the chain pairs with.
    pub fn degree(&self) -> usize {
        match self.space {
            ChainSpace::Characteristic => self.polytope.ambient_dim(),
            ChainSpace::Normal => self.polytope.ambient_dim() - 1,
        }
    }

    pub fn with_flipped_cell(mut self, idx: usize) -> CycleChain {
        self.cells[idx].flipped = !self.cells[idx].flipped;
        self
    }

    /// Fiber dimension bookkeeping: `dim F + dim cone = n` for
    /// characteristic cells, `dim F + (dim cone - 1) = n - 1` for normal
    /// cells.
    pub fn dimensions_consistent(&self) -> bool {
        let n = self.ambient_dim();
        self.cells.iter().all(|c| {
            let k = self.polytope.faces()[c.face].dim;
            k + c.cone.dim() == n
        })
    }
}

/// `CC(P)`: one cell per face of `P`, fibered by the dual of the tangent
/// cone at a relative-interior point of the face.
pub fn characteristic_cycle(p: &Polytope) -> Result<CycleChain, GeometryError> {
    let arc = Arc::new(p.clone());
    let mut cells = Vec::with_capacity(p.faces().len());
    for fi in 0..p.faces().len() {
        let x = p.face_barycenter(fi)?;
        let cone = tangent_cone(p, &x)?.dual()?;
        cells.push(CycleCell {
            face: fi,
            cone,
            flipped: false,
        });
    }
    Ok(CycleChain {
        polytope: arc,
        space: ChainSpace::Characteristic,
        cells,
    })
}

/// `N(P)`: antipodal image of `CC(P)` minus the zero section, projectivized
/// to the sphere bundle. The interior cell (zero cone) disappears.
pub fn normal_cycle(p: &Polytope) -> Result<CycleChain, GeometryError> {
    let cc = characteristic_cycle(p)?;
    let cells = cc
        .cells
        .into_iter()
        .filter(|c| c.cone.dim() > 0)
        .map(|c| CycleCell {
            face: c.face,
            cone: c.cone.negate(),
            flipped: false,
        })
        .collect();
    Ok(CycleChain {
        polytope: cc.polytope,
        space: ChainSpace::Normal,
        cells,
    })
}

/// Cycle-closedness certificate: `|integral of d(beta)|` over the chain.
/// Closed chains return residuals at quadrature roundoff; a deliberately
/// flipped cell makes the residual macroscopic.
pub fn stokes_check(
    chain: &CycleChain,
    beta: &DifferentialForm,
    rule: &QuadratureRule,
) -> Result<f64, IntegrateError> {
    let expected = chain.degree().checked_sub(1).ok_or(IntegrateError::DegreeMismatch {
        form: 0,
        chain: chain.degree(),
    })?;
    if let Some(d) = beta.degree() {
        if d != expected {
            return Err(IntegrateError::DegreeMismatch {
                form: d,
                chain: chain.degree(),
            });
        }
    }
    let dbeta = beta.exterior_derivative()?;
    let value = integrate(chain, &dbeta, rule)?;
    Ok(value.abs())
}

impl Serialize for CycleChain {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct CellJson {
            face_vertices: Vec<usize>,
            cone_generators: Vec<Vec<String>>,
            sign: i8,
        }
        let cells: Vec<CellJson> = self
            .cells
            .iter()
            .map(|c| CellJson {
                face_vertices: self.polytope.faces()[c.face].vertices.clone(),
                cone_generators: c
                    .cone
                    .generators
                    .iter()
                    .map(|g| g.coords.iter().map(|q| q.to_string()).collect())
                    .collect(),
                sign: if c.flipped { -1 } else { 1 },
            })
            .collect();
        let mut s = serializer.serialize_struct("CycleChain", 3)?;
        s.serialize_field(
            "ambient",
            match self.space {
                ChainSpace::Characteristic => "CC",
                ChainSpace::Normal => "N",
            },
        )?;
        s.serialize_field("polytope", self.polytope.as_ref())?;
        s.serialize_field("cells", &cells)?;
        s.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Point;

    fn pt(coords: &[i64]) -> Point {
        Point::from_ints(coords)
    }

    #[test]
    fn characteristic_cycle_of_a_point_is_the_full_fiber() {
        let p = Polytope::convex_hull(&[pt(&[1, 2, 3])]).unwrap();
        let cc = characteristic_cycle(&p).unwrap();
        assert_eq!(cc.cells.len(), 1);
        assert_eq!(cc.cells[0].cone.dim(), 3);
        assert_eq!(cc.cells[0].cone.lineality_space().len(), 3);
        assert!(cc.dimensions_consistent());

        let nc = normal_cycle(&p).unwrap();
        assert_eq!(nc.cells.len(), 1); // {x0} x S^{n-1}
    }

    #[test]
    fn characteristic_cycle_of_unit_interval() {
        let p = Polytope::convex_hull(&[pt(&[0]), pt(&[1])]).unwrap();
        let cc = characteristic_cycle(&p).unwrap();
        assert_eq!(cc.cells.len(), 3);
        assert!(cc.dimensions_consistent());
        for c in &cc.cells {
            let k = cc.polytope.faces()[c.face].dim;
            match k {
                0 => {
                    // vertex fibers: half-lines; at 0 the inward dual points
                    // in +xi, at 1 in -xi
                    assert_eq!(c.cone.dim(), 1);
                    let v = &cc.polytope.faces()[c.face].vertices;
                    let at_zero = cc.polytope.vertices()[v[0]] == pt(&[0]);
                    let dir = pt(&[if at_zero { 1 } else { -1 }]);
                    assert!(c.cone.contains(&dir));
                    assert!(!c.cone.contains(&-&dir));
                }
                1 => assert_eq!(c.cone.dim(), 0),
                _ => unreachable!(),
            }
        }
    }

    #[test]
    fn square_cycles_have_expected_cell_counts() {
        let p = Polytope::convex_hull(&[pt(&[0, 0]), pt(&[1, 0]), pt(&[0, 1]), pt(&[1, 1])])
            .unwrap();
        let cc = characteristic_cycle(&p).unwrap();
        assert_eq!(cc.cells.len(), 9); // 4 vertices, 4 edges, interior
        assert!(cc.dimensions_consistent());
        let nc = normal_cycle(&p).unwrap();
        assert_eq!(nc.cells.len(), 8); // interior cell dropped
        assert!(nc.cells.iter().all(|c| c.cone.dim() >= 1));
    }

    #[test]
    fn conic_invariance_of_fibers() {
        use crate::num::rat_int;
        let p = Polytope::convex_hull(&[pt(&[0, 0]), pt(&[2, 0]), pt(&[0, 3])]).unwrap();
        let cc = characteristic_cycle(&p).unwrap();
        for c in &cc.cells {
            let doubled = Cone::from_generators(
                2,
                c.cone
                    .generators
                    .iter()
                    .map(|g| g.scale(&rat_int(2)))
                    .collect(),
            );
            assert!(doubled.set_eq(&c.cone));
        }
    }

    #[test]
    fn negation_gives_the_antipodal_bijection() {
        let p = Polytope::convex_hull(&[pt(&[0, 0]), pt(&[2, 0]), pt(&[0, 1]), pt(&[2, 1])])
            .unwrap();
        let q = p.negate();
        let cc_p = characteristic_cycle(&p).unwrap();
        let cc_q = characteristic_cycle(&q).unwrap();
        assert_eq!(cc_p.cells.len(), cc_q.cells.len());
        for cp in &cc_p.cells {
            // the face -F of -P with the antipodal cone
            let fp = &cc_p.polytope.faces()[cp.face];
            let neg_verts: Vec<Point> = fp
                .vertices
                .iter()
                .map(|&v| -&cc_p.polytope.vertices()[v])
                .collect();
            let found = cc_q.cells.iter().find(|cq| {
                let fq = &cc_q.polytope.faces()[cq.face];
                let mut qverts: Vec<Point> = fq
                    .vertices
                    .iter()
                    .map(|&v| cc_q.polytope.vertices()[v].clone())
                    .collect();
                qverts.sort();
                let mut nverts = neg_verts.clone();
                nverts.sort();
                qverts == nverts
            });
            let cq = found.expect("matching face of -P");
            assert!(cq.cone.set_eq(&cp.cone.negate()));
        }
    }
}
