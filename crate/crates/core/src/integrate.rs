//! Oriented integration of differential forms over cycle chains.
//!
//! Each cell is a product of a face and a cone (or spherical) fiber. The
//! face is triangulated exactly on its vertex lattice; conic fibers are
//! truncated to the form's fiber box and triangulated; spherical fibers are
//! split into pointed simplicial cones and parameterized by central
//! projection. Orientation signs are exact rational determinant signs for
//! conic cells; spherical pieces evaluate the sign of a continuous
//! nonvanishing frame determinant at the piece barycenter.
//!
//! Per-cell integrals run in parallel and are summed in cell order, so the
//! result does not depend on the schedule.

use crate::cycle::{ChainSpace, CycleChain};
use crate::form::{Coefficient, DifferentialForm, FormError, FormSpace, FormTerm};
use crate::linalg::{determinant, Vector};
use crate::polytope::{bounding_box_f64, GeometryError, Polytope};
use crate::quadrature::{simplex_points, QuadratureRule};

#[derive(Debug, thiserror::Error)]
pub enum IntegrateError {
    #[error("form lives on the wrong space for this chain")]
    SpaceMismatch,
    #[error("degree mismatch: form degree {form}, chain degree {chain}")]
    DegreeMismatch { form: usize, chain: usize },
    #[error("probe leaves the form's base support box")]
    OutsideSupport,
    #[error(transparent)]
    Form(#[from] FormError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Oriented integral of `form` over `chain`.
pub fn integrate(
    chain: &CycleChain,
    form: &DifferentialForm,
    rule: &QuadratureRule,
) -> Result<f64, IntegrateError> {
    integrate_impl(chain, form, rule, false)
}

/// Sequential twin of [`integrate`], kept for the benchmark comparison.
pub fn integrate_seq(
    chain: &CycleChain,
    form: &DifferentialForm,
    rule: &QuadratureRule,
) -> Result<f64, IntegrateError> {
    integrate_impl(chain, form, rule, true)
}

fn integrate_impl(
    chain: &CycleChain,
    form: &DifferentialForm,
    rule: &QuadratureRule,
    sequential: bool,
) -> Result<f64, IntegrateError> {
    match (chain.space, form.space) {
        (ChainSpace::Characteristic, FormSpace::Cotangent) => {}
        (ChainSpace::Normal, FormSpace::SphereBundle) => {}
        _ => return Err(IntegrateError::SpaceMismatch),
    }
    if let Some(d) = form.degree() {
        if d != chain.degree() {
            return Err(IntegrateError::DegreeMismatch {
                form: d,
                chain: chain.degree(),
            });
        }
    } else {
        return Ok(0.0); // zero form
    }
    let (lo, hi) = bounding_box_f64(&chain.polytope);
    if !form.support.contains_base_box(&lo, &hi) {
        return Err(IntegrateError::OutsideSupport);
    }
    let k_cells = chain.cells.len();
    let worker = |i: usize| -> Result<f64, IntegrateError> {
        let cell = &chain.cells[i];
        let v = match chain.space {
            ChainSpace::Characteristic => cell_integral_cc(chain, i, form, rule)?,
            ChainSpace::Normal => cell_integral_nc(chain, i, form, rule)?,
        };
        Ok(if cell.flipped { -v } else { v })
    };
    let parts: Vec<Result<f64, IntegrateError>> = if sequential {
        crate::exec::map_indexed_seq(k_cells, worker)
    } else {
        crate::exec::map_indexed(k_cells, worker)
    };
    let mut total = 0.0;
    for p in parts {
        total += p?;
    }
    Ok(total)
}

/// Quadrature order for the coefficient polynomials of `terms` integrated
/// over a `dim`-simplex. The Duffy map multiplies per-axis degree by up to
/// the simplex dimension and adds the Jacobian's degree, hence the scaling;
/// exactness is certified, never downgraded.
fn order_for_terms(terms: &[&FormTerm], rule: &QuadratureRule, dim: usize) -> usize {
    let mut deg = None;
    for t in terms {
        match t.coef.degree() {
            Some(d) => deg = Some(deg.unwrap_or(0usize).max(d)),
            None => return rule.order,
        }
    }
    match deg {
        Some(d) => rule.order_for_degree(d * dim.max(1) + dim),
        None => rule.order,
    }
}

/// Face simplices as (origin, edge columns) in f64 plus the exact edge
/// vectors for orientation determinants.
struct FaceSimplex {
    origin: Vec<f64>,
    edges: Vec<Vec<f64>>,
    edges_exact: Vec<Vector>,
}

fn face_simplices(p: &Polytope, face: usize) -> Result<Vec<FaceSimplex>, GeometryError> {
    let simplices = p.triangulate_face(face)?;
    Ok(simplices
        .into_iter()
        .map(|ids| {
            let v0 = &p.vertices()[ids[0]];
            FaceSimplex {
                origin: v0.to_f64(),
                edges: ids[1..]
                    .iter()
                    .map(|&v| (&p.vertices()[v] - v0).to_f64())
                    .collect(),
                edges_exact: ids[1..].iter().map(|&v| &p.vertices()[v] - v0).collect(),
            }
        })
        .collect())
}

fn minor_det(rows: &[usize], cols: &[Vec<f64>]) -> f64 {
    let k = rows.len();
    debug_assert_eq!(k, cols.len());
    if k == 0 {
        return 1.0;
    }
    let mut m: Vec<Vec<f64>> = (0..k)
        .map(|r| (0..k).map(|c| cols[c][rows[r]]).collect())
        .collect();
    det_f64(&mut m)
}

fn det_f64(m: &mut [Vec<f64>]) -> f64 {
    let n = m.len();
    if n == 0 {
        return 1.0;
    }
    let mut det = 1.0;
    for c in 0..n {
        let p = (c..n)
            .max_by(|&a, &b| m[a][c].abs().partial_cmp(&m[b][c].abs()).unwrap())
            .unwrap();
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

/// Characteristic cell `relint(F) x N_F`: fiber truncated to the form's
/// symmetric box and triangulated exactly. A parameterization piece
/// contributes with the sign of `(-1)^(n-k) det[face edges | fiber edges]`.
fn cell_integral_cc(
    chain: &CycleChain,
    idx: usize,
    form: &DifferentialForm,
    rule: &QuadratureRule,
) -> Result<f64, IntegrateError> {
    let p = chain.polytope.as_ref();
    let n = p.ambient_dim();
    let cell = &chain.cells[idx];
    let k = p.faces()[cell.face].dim;
    let fiber_dim = cell.cone.dim();
    debug_assert_eq!(k + fiber_dim, n);

    let terms: Vec<&FormTerm> = form
        .terms
        .iter()
        .filter(|t| t.horizontal_degree() == k)
        .collect();
    if terms.is_empty() {
        return Ok(0.0);
    }
    let order = order_for_terms(&terms, rule, k.max(fiber_dim));
    let face_pieces = face_simplices(p, cell.face)?;
    let face_quad = simplex_points(k, order);

    // fiber pieces: triangulated truncation of the cone
    struct FiberPiece {
        origin: Vec<f64>,
        edges: Vec<Vec<f64>>,
        edges_exact: Vec<Vector>,
    }
    let fiber_pieces: Vec<FiberPiece> = if fiber_dim == 0 {
        vec![FiberPiece {
            origin: vec![0.0; n],
            edges: Vec::new(),
            edges_exact: Vec::new(),
        }]
    } else {
        let radius = crate::num::Rational::from_float(form.support.fiber_radius)
            .expect("finite fiber radius");
        let trunc = cell
            .cone
            .box_truncation(&radius)
            .expect("nonzero cone truncation");
        face_simplices(&trunc, trunc.top_face())?
            .into_iter()
            .map(|fs| FiberPiece {
                origin: fs.origin,
                edges: fs.edges,
                edges_exact: fs.edges_exact,
            })
            .collect()
    };
    let fiber_quad = simplex_points(fiber_dim, order);

    let mut total = 0.0;
    for fp in &face_pieces {
        for cp in &fiber_pieces {
            // orientation: (-1)^(n-k) sgn det[face edges | fiber edges]
            let mut frame: Vec<Vector> = fp.edges_exact.clone();
            frame.extend(cp.edges_exact.iter().cloned());
            let det = determinant(&frame);
            let sgn = crate::num::sign(&det);
            if sgn == 0 {
                continue;
            }
            let orientation = if (n - k) % 2 == 0 { sgn } else { -sgn } as f64;

            // constant minors per term
            let term_factors: Vec<f64> = terms
                .iter()
                .map(|t| {
                    let base_minor = minor_det(&t.base, &fp.edges);
                    let fiber_rows: Vec<usize> = t.fiber.clone();
                    let fiber_minor = minor_det(&fiber_rows, &cp.edges);
                    base_minor * fiber_minor
                })
                .collect();
            if term_factors.iter().all(|f| *f == 0.0) {
                continue;
            }

            let mut piece = 0.0;
            let mut point = vec![0.0; 2 * n];
            for (u, wu) in &face_quad {
                for c in 0..n {
                    let mut x = fp.origin[c];
                    for (j, uj) in u.iter().enumerate() {
                        x += uj * fp.edges[j][c];
                    }
                    point[c] = x;
                }
                for (s, ws) in &fiber_quad {
                    for c in 0..n {
                        let mut xi = cp.origin[c];
                        for (j, sj) in s.iter().enumerate() {
                            xi += sj * cp.edges[j][c];
                        }
                        point[n + c] = xi;
                    }
                    let mut val = 0.0;
                    for (t, factor) in terms.iter().zip(&term_factors) {
                        if *factor != 0.0 {
                            val += factor * t.coef.eval(&point);
                        }
                    }
                    piece += wu * ws * val;
                }
            }
            total += orientation * piece;
        }
    }
    Ok(total)
}

/// Normal cell `relint(F) x (C ∩ S^{n-1})` with `C` the outward cone:
/// pointed simplicial subcones, central-projection parameterization, radial
/// direction first in the orientation frame.
fn cell_integral_nc(
    chain: &CycleChain,
    idx: usize,
    form: &DifferentialForm,
    rule: &QuadratureRule,
) -> Result<f64, IntegrateError> {
    let p = chain.polytope.as_ref();
    let n = p.ambient_dim();
    let cell = &chain.cells[idx];
    let k = p.faces()[cell.face].dim;
    let m = cell.cone.dim(); // fiber cone dimension; sphere part has dim m-1
    debug_assert_eq!(k + m, n);

    let terms: Vec<&FormTerm> = form
        .terms
        .iter()
        .filter(|t| t.horizontal_degree() == k && t.fiber.len() == m - 1)
        .collect();
    if terms.is_empty() {
        return Ok(0.0);
    }
    let face_pieces = face_simplices(p, cell.face)?;
    let face_order = order_for_terms(&terms, rule, k).max(4);
    let face_quad = simplex_points(k, face_order);
    let sphere_quad = simplex_points(m - 1, rule.order);

    let mut total = 0.0;
    for rays_exact in split_wide_pieces(cell.cone.simplicial_cover()) {
        debug_assert_eq!(rays_exact.len(), m);
        let rays: Vec<Vec<f64>> = rays_exact
            .iter()
            .map(|r| {
                let rf = r.to_f64();
                let norm: f64 = rf.iter().map(|x| x * x).sum::<f64>().sqrt();
                rf.iter().map(|x| x / norm).collect()
            })
            .collect();
        // unit sphere point and tangent frame at simplex coordinates sigma
        let eval_u = |sigma: &[f64]| -> (Vec<f64>, Vec<Vec<f64>>) {
            let mut w = vec![0.0; n];
            let mut last = 1.0;
            for s in sigma {
                last -= s;
            }
            for c in 0..n {
                let mut acc = last * rays[m - 1][c];
                for (j, s) in sigma.iter().enumerate() {
                    acc += s * rays[j][c];
                }
                w[c] = acc;
            }
            let norm: f64 = w.iter().map(|x| x * x).sum::<f64>().sqrt();
            let u: Vec<f64> = w.iter().map(|x| x / norm).collect();
            // d u / d sigma_j = (I - u u^T)(r_j - r_last) / |W|
            let tangent: Vec<Vec<f64>> = (0..m - 1)
                .map(|j| {
                    let dir: Vec<f64> = (0..n).map(|c| rays[j][c] - rays[m - 1][c]).collect();
                    let du: f64 = dir.iter().zip(&u).map(|(a, b)| a * b).sum();
                    (0..n).map(|c| (dir[c] - du * u[c]) / norm).collect()
                })
                .collect();
            (u, tangent)
        };

        for fp in &face_pieces {
            // orientation at the piece barycenter: the slice convention puts
            // the outward radial direction first, det[u | face edges | t_j],
            // equal to (-1)^k det[face edges | u | t_j]
            let bary = vec![1.0 / m as f64; m - 1];
            let (u0, t0) = eval_u(&bary);
            let mut cols: Vec<Vec<f64>> = fp.edges.clone();
            cols.push(u0.clone());
            cols.extend(t0.iter().cloned());
            let rows: Vec<usize> = (0..n).collect();
            let det0 = minor_det(&rows, &cols);
            if det0.abs() < 1e-13 {
                continue;
            }
            let orientation = if k % 2 == 0 { det0.signum() } else { -det0.signum() };

            let mut piece = 0.0;
            let mut point = vec![0.0; 2 * n];
            for (uq, wu) in &face_quad {
                for c in 0..n {
                    let mut x = fp.origin[c];
                    for (j, uj) in uq.iter().enumerate() {
                        x += uj * fp.edges[j][c];
                    }
                    point[c] = x;
                }
                for (sq, ws) in &sphere_quad {
                    let (u, tangent) = eval_u(sq);
                    for c in 0..n {
                        point[n + c] = u[c];
                    }
                    let mut val = 0.0;
                    for t in &terms {
                        let base_minor = minor_det(&t.base, &fp.edges);
                        if base_minor == 0.0 {
                            continue;
                        }
                        let fiber_minor = minor_det(&t.fiber, &tangent);
                        if fiber_minor == 0.0 {
                            continue;
                        }
                        val += base_minor * fiber_minor * t.coef.eval(&point);
                    }
                    piece += wu * ws * val;
                }
            }
            total += orientation * piece;
        }
    }
    Ok(total)
}

/// Bisects simplicial cone pieces with wide ray pairs so the central
/// projection parameterization stays well conditioned. The inserted
/// directions are rational (approximately unit-normalized sums), keeping the
/// pieces exact.
fn split_wide_pieces(pieces: Vec<Vec<Vector>>) -> Vec<Vec<Vector>> {
    const MIN_DOT: f64 = 0.5;
    let approx_unit = |v: &Vector| -> Vector {
        let f = v.to_f64();
        let norm: f64 = f.iter().map(|x| x * x).sum::<f64>().sqrt();
        let scale = crate::num::Rational::from_float(1.0 / norm).expect("finite norm");
        v.scale(&scale)
    };
    let mut queue = pieces;
    let mut out = Vec::new();
    let mut guard = 0;
    while let Some(rays) = queue.pop() {
        guard += 1;
        if guard > 4096 {
            out.push(rays);
            continue;
        }
        let units: Vec<Vec<f64>> = rays
            .iter()
            .map(|r| {
                let f = r.to_f64();
                let norm: f64 = f.iter().map(|x| x * x).sum::<f64>().sqrt();
                f.iter().map(|x| x / norm).collect()
            })
            .collect();
        let mut widest: Option<(usize, usize, f64)> = None;
        for i in 0..rays.len() {
            for j in (i + 1)..rays.len() {
                let dot: f64 = units[i].iter().zip(&units[j]).map(|(a, b)| a * b).sum();
                if widest.map(|(_, _, d)| dot < d).unwrap_or(true) {
                    widest = Some((i, j, dot));
                }
            }
        }
        match widest {
            Some((i, j, dot)) if dot < MIN_DOT => {
                let mid = (&approx_unit(&rays[i]) + &approx_unit(&rays[j])).primitive();
                let mut a = rays.clone();
                a[i] = mid.clone();
                let mut b = rays;
                b[j] = mid;
                queue.push(a);
                queue.push(b);
            }
            _ => out.push(rays),
        }
    }
    out
}

/// Integral of a density (a function against Lebesgue measure) over a
/// full-dimensional polytope.
pub fn integrate_density(
    p: &Polytope,
    coef: &Coefficient,
    rule: &QuadratureRule,
) -> Result<f64, IntegrateError> {
    let n = p.ambient_dim();
    if p.intrinsic_dim() < n {
        return Ok(0.0);
    }
    let order = match coef.degree() {
        Some(d) => rule.order_for_degree(d * n + n),
        None => rule.order,
    };
    let quad = simplex_points(n, order);
    let pieces = face_simplices(p, p.top_face())?;
    let mut total = 0.0;
    for fp in &pieces {
        let rows: Vec<usize> = (0..n).collect();
        let jac = minor_det(&rows, &fp.edges).abs();
        if jac == 0.0 {
            continue;
        }
        let mut acc = 0.0;
        let mut x = vec![0.0; n];
        for (u, w) in &quad {
            for c in 0..n {
                let mut v = fp.origin[c];
                for (j, uj) in u.iter().enumerate() {
                    v += uj * fp.edges[j][c];
                }
                x[c] = v;
            }
            acc += w * coef.eval(&x);
        }
        total += jac * acc;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycle::{characteristic_cycle, normal_cycle, stokes_check};
    use crate::form::{Diff, Poly, SupportBox};
    use crate::linalg::Point;

    fn pt(coords: &[i64]) -> Point {
        Point::from_ints(coords)
    }

    fn support(n: usize) -> SupportBox {
        SupportBox::cube(n, 10.0, 2.0)
    }

    fn square() -> Polytope {
        Polytope::convex_hull(&[pt(&[0, 0]), pt(&[1, 0]), pt(&[0, 1]), pt(&[1, 1])]).unwrap()
    }

    fn cube() -> Polytope {
        let mut pts = Vec::new();
        for x in 0..2 {
            for y in 0..2 {
                for z in 0..2 {
                    pts.push(pt(&[x, y, z]));
                }
            }
        }
        Polytope::convex_hull(&pts).unwrap()
    }

    #[test]
    fn gauss_degree_is_one() {
        let rule = QuadratureRule::default();
        for p in [
            Polytope::convex_hull(&[pt(&[3, 4])]).unwrap(),
            Polytope::convex_hull(&[pt(&[0]), pt(&[2])]).unwrap(),
            square(),
            Polytope::convex_hull(&[pt(&[0, 0]), pt(&[3, 1]), pt(&[1, 2])]).unwrap(),
            cube(),
            Polytope::convex_hull(&[pt(&[0, 0, 0]), pt(&[1, 0, 0]), pt(&[0, 1, 0]), pt(&[0, 0, 1])])
                .unwrap(),
            // lower-dimensional bodies
            Polytope::convex_hull(&[pt(&[0, 0]), pt(&[2, 1])]).unwrap(),
            Polytope::convex_hull(&[pt(&[0, 0, 0]), pt(&[1, 1, 0]), pt(&[0, 1, 0])]).unwrap(),
        ] {
            let n = p.ambient_dim();
            let nc = normal_cycle(&p).unwrap();
            let gauss = DifferentialForm::sphere_area_form(n, support(n));
            let v = integrate(&nc, &gauss, &rule).unwrap();
            assert!((v - 1.0).abs() < 1e-6, "gauss degree {v} for n={n}");
        }
    }

    #[test]
    fn zero_form_integrates_to_zero() {
        let rule = QuadratureRule::default();
        let cc = characteristic_cycle(&square()).unwrap();
        let zero = DifferentialForm::zero(crate::form::FormSpace::Cotangent, 2, support(2));
        assert_eq!(integrate(&cc, &zero, &rule).unwrap(), 0.0);
    }

    #[test]
    fn horizontal_bump_reduces_to_base_integral() {
        // f(x) dx1^dx2 over CC(square) = integral of f over the square
        let rule = QuadratureRule::default();
        let cc = characteristic_cycle(&square()).unwrap();
        let n = 2;
        // f = x1^2 x2 + 1 on the square
        let f = Poly::var(2 * n, 0)
            .mul(&Poly::var(2 * n, 0))
            .mul(&Poly::var(2 * n, 1))
            .add(&Poly::constant(2 * n, 1.0));
        let mut form = DifferentialForm::zero(crate::form::FormSpace::Cotangent, n, support(n));
        form.push_term(
            crate::form::Coefficient::Poly(f.clone()),
            &[Diff::Base(0), Diff::Base(1)],
        );
        let via_cc = integrate(&cc, &form, &rule).unwrap();
        // direct 2-D quadrature oracle (density polynomials live on R^n)
        let f_base = Poly::var(n, 0)
            .mul(&Poly::var(n, 0))
            .mul(&Poly::var(n, 1))
            .add(&Poly::constant(n, 1.0));
        let direct = integrate_density(&square(), &Coefficient::Poly(f_base), &rule).unwrap();
        assert!((via_cc - direct).abs() < 1e-9, "{via_cc} vs {direct}");
        assert!((via_cc - (1.0 / 6.0 + 1.0)).abs() < 1e-12);
    }

    #[test]
    fn euler_vertical_form_gives_chi() {
        let rule = QuadratureRule::default();
        for p in [
            square(),
            cube(),
            Polytope::convex_hull(&[pt(&[0]), pt(&[5])]).unwrap(),
            Polytope::convex_hull(&[pt(&[0, 0]), pt(&[3, 1]), pt(&[1, 2])]).unwrap(),
        ] {
            let n = p.ambient_dim();
            let cc = characteristic_cycle(&p).unwrap();
            let chi_form = DifferentialForm::euler_vertical_form(n, support(n));
            let v = integrate(&cc, &chi_form, &rule).unwrap();
            assert!((v - 1.0).abs() < 1e-8, "chi via CC = {v}, n = {n}");
        }
    }

    #[test]
    fn stokes_residual_vanishes_and_flips_detect() {
        let rule = QuadratureRule::default();
        let n = 2;
        let nc = normal_cycle(&square()).unwrap();
        // beta = x1 * xi2 * (angular-ish 0-form); d(beta) integrates to ~0
        let mut beta = DifferentialForm::zero(crate::form::FormSpace::SphereBundle, n, support(n));
        beta.push_term(
            crate::form::Coefficient::Poly(
                Poly::var(2 * n, 0).mul(&Poly::var(2 * n, n + 1)),
            ),
            &[],
        );
        let res = stokes_check(&nc, &beta, &rule).unwrap();
        assert!(res < 1e-10, "stokes residual {res}");

        // flip the vertex cell at (1,1), whose arc genuinely contributes
        let nc2 = normal_cycle(&square()).unwrap();
        let idx = nc2
            .cells
            .iter()
            .position(|c| {
                let f = &nc2.polytope.faces()[c.face];
                f.dim == 0 && nc2.polytope.vertices()[f.vertices[0]] == pt(&[1, 1])
            })
            .unwrap();
        let flipped = nc2.with_flipped_cell(idx);
        let res_flipped = stokes_check(&flipped, &beta, &rule).unwrap();
        assert!(res_flipped > 1e-3, "flipped residual {res_flipped}");

        // beta = 0 gives exactly zero
        let zero = DifferentialForm::zero(crate::form::FormSpace::SphereBundle, n, support(n));
        assert_eq!(stokes_check(&nc, &zero, &rule).unwrap(), 0.0);
    }

    #[test]
    fn stokes_on_characteristic_chain() {
        // beta with fiber-box-vanishing factor so the truncation boundary
        // carries no flux
        let rule = QuadratureRule::default();
        let n = 2;
        let cc = characteristic_cycle(&square()).unwrap();
        let r = 2.0;
        let r2 = Poly::constant(2 * n, r * r);
        let cutoff = |j: usize| {
            let xi = Poly::var(2 * n, n + j);
            let f = r2.add(&xi.mul(&xi).scale(-1.0));
            f.mul(&f)
        };
        let bump = cutoff(0).mul(&cutoff(1));
        let mut beta = DifferentialForm::zero(crate::form::FormSpace::Cotangent, n, support(n));
        beta.push_term(
            crate::form::Coefficient::Poly(bump.mul(&Poly::var(2 * n, 0))),
            &[Diff::Fiber(1)],
        );
        let res = stokes_check(&cc, &beta, &rule).unwrap();
        assert!(res < 1e-8, "cc stokes residual {res}");
    }

    #[test]
    fn density_integral_matches_volume() {
        let rule = QuadratureRule::default();
        let one = Coefficient::Poly(Poly::constant(3, 1.0));
        let v = integrate_density(&cube(), &one, &rule).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
    }
}
