//! Refinement constructions: subordinate refinements against open box
//! covers, coning triangulations, and the seeded common-refinement scheme
//! built from randomly perturbed grid triangulations.

use crate::linalg::{Point, Vector};
use crate::num::{rat, rat_int, Rational};
use crate::polytope::Polytope;
use crate::subdivision::{
    pairwise_intersection_cells, strict_transversal, Subdivision, SubdivisionError, Target,
};
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;

#[derive(Debug, thiserror::Error)]
pub enum RefineError {
    #[error("cover does not cover the target; witness {witness:?}")]
    CoverInsufficient { witness: Point },
    #[error("transversality not achieved within the retry budget of {budget} perturbations")]
    TransversalityBudget { budget: usize },
    #[error("grid pitch exhausted while seeking a subordinate refinement")]
    PitchExhausted,
    #[error("subdivision is invalid: {0}")]
    Invalid(String),
    #[error(transparent)]
    Subdivision(#[from] SubdivisionError),
}

/// Open axis-aligned box with rational corners.
#[derive(Clone, Debug)]
pub struct OpenBox {
    pub lo: Vec<Rational>,
    pub hi: Vec<Rational>,
}

impl OpenBox {
    pub fn new(lo: Vec<Rational>, hi: Vec<Rational>) -> OpenBox {
        assert_eq!(lo.len(), hi.len());
        assert!(lo.iter().zip(&hi).all(|(a, b)| a < b), "degenerate box");
        OpenBox { lo, hi }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn contains_point_strict(&self, p: &Point) -> bool {
        p.coords
            .iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(x, (lo, hi))| x > lo && x < hi)
    }

    /// Closed polytope contained in the open box: every vertex strictly
    /// inside.
    pub fn contains_polytope(&self, p: &Polytope) -> bool {
        p.vertices().iter().all(|v| self.contains_point_strict(v))
    }
}

/// Exact verification that the open boxes cover `target`. Splits the target
/// by every box wall, recursing into wall slices, and checks that each
/// piece's relative interior lies in some box. Returns an uncovered witness
/// point if any.
pub fn verify_open_cover(target: &Polytope, boxes: &[OpenBox]) -> Option<Point> {
    let n = target.ambient_dim();
    let mut walls: Vec<(usize, Rational)> = Vec::new();
    let mut seen = BTreeSet::new();
    for b in boxes {
        for i in 0..n {
            for v in [&b.lo[i], &b.hi[i]] {
                if seen.insert((i, v.clone())) {
                    walls.push((i, v.clone()));
                }
            }
        }
    }
    check_cover_rec(target, boxes, &walls)
}

fn check_cover_rec(
    region: &Polytope,
    boxes: &[OpenBox],
    walls: &[(usize, Rational)],
) -> Option<Point> {
    // split by each wall hyperplane; full-dim pieces keep the region's dim
    let d = region.intrinsic_dim();
    let mut pieces = vec![region.clone()];
    for (axis, value) in walls {
        let normal = Vector::unit(region.ambient_dim(), *axis);
        let mut next = Vec::new();
        for p in pieces {
            next.extend(split_piece(&p, &normal, value, d));
        }
        pieces = next;
    }
    for p in &pieces {
        let b = p.barycenter();
        if !boxes.iter().any(|bx| bx.contains_point_strict(&b)) {
            return Some(b);
        }
    }
    // wall slices can be uncovered even when the full-dim pieces are covered
    for (axis, value) in walls {
        let normal = Vector::unit(region.ambient_dim(), *axis);
        if let Some(slice) = slice_with_hyperplane(region, &normal, value) {
            if slice.intrinsic_dim() < d {
                let remaining: Vec<(usize, Rational)> = walls
                    .iter()
                    .filter(|(a, v)| !(*a == *axis && v == value))
                    .cloned()
                    .collect();
                if let Some(w) = check_cover_rec(&slice, boxes, &remaining) {
                    return Some(w);
                }
            }
        }
    }
    None
}

fn split_piece(p: &Polytope, normal: &Vector, offset: &Rational, keep_dim: usize) -> Vec<Polytope> {
    let vals: Vec<Rational> = p
        .vertices()
        .iter()
        .map(|v| &normal.dot(v) - offset)
        .collect();
    let any_pos = vals.iter().any(|v| v.is_positive());
    let any_neg = vals.iter().any(|v| v.is_negative());
    if !(any_pos && any_neg) {
        return vec![p.clone()];
    }
    let mut out = Vec::new();
    for sign in [1i32, -1] {
        let mut pts: Vec<Point> = p
            .vertices()
            .iter()
            .zip(&vals)
            .filter(|(_, v)| crate::num::sign(v) * sign >= 0)
            .map(|(q, _)| q.clone())
            .collect();
        for (ei, _) in p.faces_of_dim(1) {
            let f = p.face(ei).expect("edge");
            let (a, b) = (f.vertices[0], f.vertices[1]);
            let (va, vb) = (&vals[a], &vals[b]);
            if (va.is_positive() && vb.is_negative()) || (va.is_negative() && vb.is_positive()) {
                let t = va / &(va - vb);
                let pa = &p.vertices()[a];
                let pb = &p.vertices()[b];
                pts.push(pa + &(pb - pa).scale(&t));
            }
        }
        if pts.is_empty() {
            continue;
        }
        let piece = Polytope::convex_hull(&pts).expect("split piece");
        if piece.intrinsic_dim() == keep_dim {
            out.push(piece);
        }
    }
    out
}

fn slice_with_hyperplane(p: &Polytope, normal: &Vector, offset: &Rational) -> Option<Polytope> {
    let vals: Vec<Rational> = p
        .vertices()
        .iter()
        .map(|v| &normal.dot(v) - offset)
        .collect();
    let any_pos = vals.iter().any(|v| v.is_positive());
    let any_neg = vals.iter().any(|v| v.is_negative());
    let mut pts: Vec<Point> = p
        .vertices()
        .iter()
        .zip(&vals)
        .filter(|(_, v)| v.is_zero())
        .map(|(q, _)| q.clone())
        .collect();
    if any_pos && any_neg {
        for (ei, _) in p.faces_of_dim(1) {
            let f = p.face(ei).expect("edge");
            let (a, b) = (f.vertices[0], f.vertices[1]);
            let (va, vb) = (&vals[a], &vals[b]);
            if (va.is_positive() && vb.is_negative()) || (va.is_negative() && vb.is_positive()) {
                let t = va / &(va - vb);
                let pa = &p.vertices()[a];
                let pb = &p.vertices()[b];
                pts.push(pa + &(pb - pa).scale(&t));
            }
        }
    }
    if pts.is_empty() {
        return None;
    }
    Some(Polytope::convex_hull(&pts).expect("slice hull"))
}

// ---------------------------------------------------------------------------
// Perturbed grid triangulations
// ---------------------------------------------------------------------------

/// Kuhn triangulation of a box grid, affinely perturbed, returned as a
/// face-closed simplicial subdivision of the image box.
///
/// `lo`/`hi` bound the unperturbed grid, `cells_per_axis` fixes the pitch,
/// and the perturbation is `x -> (I + eps R) x + t` with rational entries
/// drawn from the seeded generator.
pub fn perturbed_grid(
    lo: &[Rational],
    hi: &[Rational],
    cells_per_axis: usize,
    rng: &mut ChaCha8Rng,
    perturb_scale: &Rational,
) -> Subdivision {
    let n = lo.len();
    let k = cells_per_axis.max(1);
    // lattice vertices
    let steps: Vec<Rational> = (0..n)
        .map(|i| (&hi[i] - &lo[i]) / rat_int(k as i64))
        .collect();
    let mut rand_rat = |scale: &Rational| -> Rational {
        let num = rng.gen_range(-64i64..=64);
        scale * &rat(num, 64)
    };
    // affine map
    let mut matrix: Vec<Vec<Rational>> = vec![vec![Rational::zero(); n]; n];
    for (i, row) in matrix.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            *entry = if i == j {
                Rational::from_integer(1.into()) + rand_rat(perturb_scale)
            } else {
                rand_rat(perturb_scale)
            };
        }
    }
    let shift: Vec<Rational> = (0..n).map(|_| rand_rat(perturb_scale)).collect();
    let apply = |p: &[Rational]| -> Point {
        let coords: Vec<Rational> = (0..n)
            .map(|i| {
                let mut acc = shift[i].clone();
                for j in 0..n {
                    acc += &matrix[i][j] * &p[j];
                }
                acc
            })
            .collect();
        Point::new(coords)
    };

    // enumerate lattice cubes and their Kuhn simplices
    let mut simplices: Vec<Vec<Point>> = Vec::new();
    let mut cube_idx = vec![0usize; n];
    loop {
        let corner: Vec<Rational> = (0..n)
            .map(|i| &lo[i] + &(&steps[i] * &rat_int(cube_idx[i] as i64)))
            .collect();
        // Kuhn: one simplex per permutation of axes
        let mut perm: Vec<usize> = (0..n).collect();
        loop {
            let mut verts = Vec::with_capacity(n + 1);
            let mut p = corner.clone();
            verts.push(apply(&p));
            for &axis in perm.iter() {
                p[axis] = &p[axis] + &steps[axis];
                verts.push(apply(&p));
            }
            simplices.push(verts);
            if !next_permutation(&mut perm) {
                break;
            }
        }
        // advance cube index
        let mut i = 0;
        loop {
            if i == n {
                break;
            }
            cube_idx[i] += 1;
            if cube_idx[i] < k {
                break;
            }
            cube_idx[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
    }

    // all faces of all simplices (vertex subsets), deduplicated
    let mut cells: BTreeSet<Vec<Point>> = BTreeSet::new();
    for verts in &simplices {
        let m = verts.len();
        for mask in 1u32..(1 << m) {
            let subset: Vec<Point> = (0..m)
                .filter(|&b| mask & (1 << b) != 0)
                .map(|b| verts[b].clone())
                .collect();
            let mut sorted = subset;
            sorted.sort();
            cells.insert(sorted);
        }
    }
    let polys: Vec<Polytope> = cells
        .into_iter()
        .map(|verts| Polytope::convex_hull(&verts).expect("simplex hull"))
        .collect();
    // target: image of the whole box
    let mut corners = Vec::new();
    for mask in 0..(1u32 << n) {
        let p: Vec<Rational> = (0..n)
            .map(|i| {
                if mask & (1 << i) != 0 {
                    hi[i].clone()
                } else {
                    lo[i].clone()
                }
            })
            .collect();
        corners.push(apply(&p));
    }
    let target = Polytope::convex_hull(&corners).expect("box hull");
    Subdivision::new(Target::Polytope(target), polys).expect("grid subdivision")
}

fn next_permutation(perm: &mut [usize]) -> bool {
    let n = perm.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && perm[i - 1] >= perm[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while perm[j] <= perm[i - 1] {
        j -= 1;
    }
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}

/// Bounding box of a subdivision's cells, expanded by `margin` per side.
fn bbox_with_margin(d: &Subdivision, margin: &Rational) -> (Vec<Rational>, Vec<Rational>) {
    let n = d.ambient_dim();
    let mut lo: Option<Vec<Rational>> = None;
    let mut hi: Option<Vec<Rational>> = None;
    for c in d.cells() {
        let (clo, chi) = c.bounding_box();
        match (&mut lo, &mut hi) {
            (Some(lo), Some(hi)) => {
                for i in 0..n {
                    if clo.coords[i] < lo[i] {
                        lo[i] = clo.coords[i].clone();
                    }
                    if chi.coords[i] > hi[i] {
                        hi[i] = chi.coords[i].clone();
                    }
                }
            }
            _ => {
                lo = Some(clo.coords.clone());
                hi = Some(chi.coords.clone());
            }
        }
    }
    let (mut lo, mut hi) = (lo.unwrap(), hi.unwrap());
    for i in 0..n {
        lo[i] -= margin;
        hi[i] += margin;
    }
    (lo, hi)
}

/// Clips `grid` (a subdivision of a larger region) to the target of `d` by
/// pairwise intersection. The result refines `d` when the grid is strictly
/// transversal to it.
pub fn intersect_with_grid(d: &Subdivision, grid: &Subdivision) -> Result<Subdivision, RefineError> {
    let cells = pairwise_intersection_cells(d, grid);
    let out = Subdivision::new(d.target().clone(), cells)?;
    Ok(out)
}

/// A refinement of `d` subordinate to the open cover: every output cell lies
/// strictly inside at least one box.
pub fn refine_subordinate(
    d: &Subdivision,
    boxes: &[OpenBox],
    seed: u64,
) -> Result<Subdivision, RefineError> {
    // the cover must cover the target set
    match d.target() {
        Target::Polytope(t) => {
            if let Some(w) = verify_open_cover(t, boxes) {
                return Err(RefineError::CoverInsufficient { witness: w });
            }
        }
        Target::SelfUnion => {
            for c in d.cells() {
                if let Some(w) = verify_open_cover(c, boxes) {
                    return Err(RefineError::CoverInsufficient { witness: w });
                }
            }
        }
    }
    let subordinate =
        |s: &Subdivision| s.cells().iter().all(|c| boxes.iter().any(|b| b.contains_polytope(c)));
    if subordinate(d) {
        return Ok(d.clone());
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let margin = rat(1, 3);
    let (lo, hi) = bbox_with_margin(d, &margin);
    let extent = (0..lo.len())
        .map(|i| &hi[i] - &lo[i])
        .max()
        .unwrap_or_else(|| rat_int(1));

    let mut cells_per_axis = 2usize;
    for _halving in 0..7 {
        let pitch = &extent / rat_int(cells_per_axis as i64);
        let perturb = &pitch * &rat(1, 24);
        for _attempt in 0..16 {
            let grid = perturbed_grid(&lo, &hi, cells_per_axis, &mut rng, &perturb);
            if !grid_covers(&grid, d) {
                continue;
            }
            if strict_transversal(d, &grid).is_err() {
                continue;
            }
            let refined = intersect_with_grid(d, &grid)?;
            if subordinate(&refined) {
                if refined.refines(d).is_err() {
                    continue;
                }
                return Ok(refined);
            }
            break; // pitch too coarse; halve
        }
        cells_per_axis *= 2;
    }
    Err(RefineError::PitchExhausted)
}

fn grid_covers(grid: &Subdivision, d: &Subdivision) -> bool {
    let Some(tgt) = grid.target().as_polytope() else {
        return false;
    };
    d.cells()
        .iter()
        .all(|c| c.vertices().iter().all(|v| tgt.contains_in_relint(v)))
}

/// Coning triangulation: refines `d` so that every cell is a simplex, by
/// coning each cell's (recursively triangulated) boundary from its
/// barycenter, dimension by dimension.
pub fn cone_triangulate(d: &Subdivision) -> Result<Subdivision, RefineError> {
    let mut order: Vec<usize> = (0..d.cells().len()).collect();
    order.sort_by_key(|&i| d.cells()[i].intrinsic_dim());

    let target_dim = d.target_dim();
    // out[i] = simplices (vertex lists) subdividing cell i
    let mut out: Vec<Vec<Vec<Point>>> = vec![Vec::new(); d.cells().len()];
    for &ci in &order {
        let cell = &d.cells()[ci];
        let dim = cell.intrinsic_dim();
        if dim == 0 {
            out[ci] = vec![cell.vertices().to_vec()];
            continue;
        }
        // lower-dimensional cells that are already simplices stay whole;
        // top-dimensional cells are always coned from the barycenter
        let is_simplex = cell.vertices().len() == dim + 1;
        if is_simplex && dim < target_dim {
            out[ci] = vec![cell.vertices().to_vec()];
            continue;
        }
        // cells of d lying in the boundary of this cell
        let mut boundary_simplices: Vec<Vec<Point>> = Vec::new();
        for &cj in &order {
            if cj == ci {
                continue;
            }
            let other = &d.cells()[cj];
            if other.intrinsic_dim() >= dim || !cell.contains_polytope(other) {
                continue;
            }
            // contained in a proper face iff some facet is tight on it
            let in_boundary = cell.halfspaces()[..cell.facet_count()].iter().any(|h| {
                other.vertices().iter().all(|v| h.tight_on(v))
            });
            if in_boundary {
                boundary_simplices.extend(out[cj].iter().cloned());
            }
        }
        if boundary_simplices.is_empty() {
            return Err(RefineError::Invalid(format!(
                "cell {ci} has an uncovered boundary; input is not a subdivision"
            )));
        }
        let b = cell.barycenter();
        let mut simplices = vec![vec![b.clone()]];
        for s in &boundary_simplices {
            let mut coned = s.clone();
            coned.push(b.clone());
            simplices.push(coned);
        }
        out[ci] = simplices;
    }
    let mut cells: BTreeSet<Vec<Point>> = BTreeSet::new();
    for group in &out {
        for s in group {
            let mut sorted = s.clone();
            sorted.sort();
            cells.insert(sorted);
        }
    }
    let polys: Vec<Polytope> = cells
        .into_iter()
        .map(|verts| Polytope::convex_hull(&verts).expect("cone simplex"))
        .collect();
    let result = Subdivision::new(d.target().clone(), polys)?;
    Ok(result)
}

/// Common-refinement scheme: draws a perturbed grid triangulation `d3`
/// transversal to both inputs (strict lineality test, retried under the
/// seeded generator), then returns `(d3, d1 ∩ d3, d2 ∩ d3)` with both
/// intersections verified as refinements of their inputs.
pub fn common_refinement_scheme(
    d1: &Subdivision,
    d2: &Subdivision,
    seed: u64,
) -> Result<(Subdivision, Subdivision, Subdivision), RefineError> {
    match (d1.target(), d2.target()) {
        (Target::Polytope(a), Target::Polytope(b)) if a != b => {
            return Err(RefineError::Subdivision(SubdivisionError::TargetMismatch));
        }
        _ => {}
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let margin = rat(1, 2);
    let (lo, hi) = bbox_with_margin(d1, &margin);
    let d1_valid = d1.verify().pass;
    let d2_valid = d2.verify().pass;
    let budget = 32usize;
    for _attempt in 0..budget {
        let pitch_cells = 2usize;
        let extent = (0..lo.len())
            .map(|i| &hi[i] - &lo[i])
            .max()
            .unwrap_or_else(|| rat_int(1));
        let perturb = &extent * &rat(1, 48);
        let grid = perturbed_grid(&lo, &hi, pitch_cells, &mut rng, &perturb);
        if !grid_covers(&grid, d1) || !grid_covers(&grid, d2) {
            continue;
        }
        if strict_transversal(d1, &grid).is_err() || strict_transversal(d2, &grid).is_err() {
            continue;
        }
        let dp = intersect_with_grid(d1, &grid)?;
        let dpp = intersect_with_grid(d2, &grid)?;
        // Refinement in the Def-poly-5 sense only makes sense against inputs
        // that are themselves subdivisions; bare cell families (e.g. the
        // trivial {P}) just get the grid restriction.
        if d1_valid && dp.refines(d1).is_err() {
            continue;
        }
        if d2_valid && dpp.refines(d2).is_err() {
            continue;
        }
        return Ok((grid, dp, dpp));
    }
    Err(RefineError::TransversalityBudget { budget })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::rat;

    fn pt(coords: &[i64]) -> Point {
        Point::from_ints(coords)
    }

    fn square() -> Polytope {
        Polytope::convex_hull(&[pt(&[0, 0]), pt(&[1, 0]), pt(&[0, 1]), pt(&[1, 1])]).unwrap()
    }

    fn unit_segment() -> Polytope {
        Polytope::convex_hull(&[pt(&[0]), pt(&[1])]).unwrap()
    }

    fn boxr(lo: &[(i64, i64)], hi: &[(i64, i64)]) -> OpenBox {
        OpenBox::new(
            lo.iter().map(|&(n, d)| rat(n, d)).collect(),
            hi.iter().map(|&(n, d)| rat(n, d)).collect(),
        )
    }

    #[test]
    fn open_cover_verification() {
        let seg = unit_segment();
        // (-.1,.6) and (.4,1.1) cover [0,1]
        let boxes = vec![boxr(&[(-1, 10)], &[(6, 10)]), boxr(&[(4, 10)], &[(11, 10)])];
        assert!(verify_open_cover(&seg, &boxes).is_none());
        // (-.1,.5) and (.5,1.1) leave the point 1/2 uncovered
        let boxes = vec![boxr(&[(-1, 10)], &[(1, 2)]), boxr(&[(1, 2)], &[(11, 10)])];
        let w = verify_open_cover(&seg, &boxes).expect("gap at 1/2");
        assert_eq!(w.coords[0], rat(1, 2));
    }

    #[test]
    fn refine_subordinate_on_segment() {
        let seg = unit_segment();
        let d = Subdivision::face_complex(&seg);
        let boxes = vec![boxr(&[(-1, 10)], &[(6, 10)]), boxr(&[(4, 10)], &[(11, 10)])];
        let refined = refine_subordinate(&d, &boxes, 7).unwrap();
        assert!(refined.verify().pass);
        assert!(refined.refines(&d).is_ok());
        for c in refined.cells() {
            assert!(
                boxes.iter().any(|b| b.contains_polytope(c)),
                "cell not inside any box: {:?}",
                c.vertices()
            );
        }
    }

    #[test]
    fn refine_subordinate_already_fine_returns_input() {
        let seg = unit_segment();
        let d = Subdivision::face_complex(&seg);
        let big = vec![boxr(&[(-1, 1)], &[(2, 1)])];
        let refined = refine_subordinate(&d, &big, 3).unwrap();
        assert_eq!(refined.cells().len(), d.cells().len());
    }

    #[test]
    fn refine_subordinate_square_cover() {
        let s = square();
        let d = Subdivision::face_complex(&s);
        // four overlapping quadrant boxes
        let boxes = vec![
            boxr(&[(-1, 10), (-1, 10)], &[(6, 10), (6, 10)]),
            boxr(&[(4, 10), (-1, 10)], &[(11, 10), (6, 10)]),
            boxr(&[(-1, 10), (4, 10)], &[(6, 10), (11, 10)]),
            boxr(&[(4, 10), (4, 10)], &[(11, 10), (11, 10)]),
        ];
        let refined = refine_subordinate(&d, &boxes, 11).unwrap();
        assert!(refined.verify().pass, "{:?}", refined.verify().violations);
        assert!(refined.refines(&d).is_ok());
        for c in refined.cells() {
            assert!(boxes.iter().any(|b| b.contains_polytope(c)));
        }
    }

    #[test]
    fn cone_triangulate_square_face_complex() {
        let s = square();
        let d = Subdivision::face_complex(&s);
        let t = cone_triangulate(&d).unwrap();
        assert!(t.verify().pass);
        assert!(t.refines(&d).is_ok());
        // 4 triangles coned from the center, plus induced edges/vertices;
        // boundary edges are already simplices and stay whole
        assert_eq!(t.strata()[2].len(), 4);
        // 4 boundary edges + 4 center spokes
        assert_eq!(t.strata()[1].len(), 8);
        // 4 corners + 1 center
        assert_eq!(t.strata()[0].len(), 5);
        // all simplices
        for c in t.cells() {
            assert_eq!(c.vertices().len(), c.intrinsic_dim() + 1);
        }
    }

    #[test]
    fn cone_triangulate_single_segment() {
        let seg = unit_segment();
        let d = Subdivision::face_complex(&seg);
        let t = cone_triangulate(&d).unwrap();
        // two segments and three vertices
        assert_eq!(t.strata()[1].len(), 2);
        assert_eq!(t.strata()[0].len(), 3);
    }

    #[test]
    fn cone_triangulate_tetrahedron_counts() {
        let tet = Polytope::convex_hull(&[
            pt(&[0, 0, 0]),
            pt(&[1, 0, 0]),
            pt(&[0, 1, 0]),
            pt(&[0, 0, 1]),
        ])
        .unwrap();
        let d = Subdivision::face_complex(&tet);
        let t = cone_triangulate(&d).unwrap();
        assert!(t.verify().pass);
        // hand count: boundary faces are simplices and stay whole; the tet
        // is coned from its center over 4 vertices, 6 edges, 4 triangles:
        //   vertices: 4 + center; edges: 6 + 4 spokes;
        //   triangles: 4 + 6 coned edges; tets: 4 coned triangles
        assert_eq!(t.strata()[0].len(), 5);
        assert_eq!(t.strata()[1].len(), 10);
        assert_eq!(t.strata()[2].len(), 10);
        assert_eq!(t.strata()[3].len(), 4);
        for c in t.cells() {
            assert_eq!(c.vertices().len(), c.intrinsic_dim() + 1);
        }
    }

    #[test]
    fn common_refinement_on_two_diagonals() {
        let s = square();
        let tri = |a: &[i64], b: &[i64], c: &[i64]| {
            Polytope::convex_hull(&[pt(a), pt(b), pt(c)]).unwrap()
        };
        let seg = |a: &[i64], b: &[i64]| Polytope::convex_hull(&[pt(a), pt(b)]).unwrap();
        let ptp = |a: &[i64]| Polytope::convex_hull(&[pt(a)]).unwrap();
        let d1 = Subdivision::new(
            Target::Polytope(s.clone()),
            vec![
                tri(&[0, 1], &[1, 1], &[1, 0]),
                tri(&[0, 1], &[0, 0], &[1, 0]),
                seg(&[0, 1], &[1, 0]),
                seg(&[0, 0], &[1, 0]),
                seg(&[1, 0], &[1, 1]),
                seg(&[1, 1], &[0, 1]),
                seg(&[0, 1], &[0, 0]),
                ptp(&[0, 0]),
                ptp(&[1, 0]),
                ptp(&[0, 1]),
                ptp(&[1, 1]),
            ],
        )
        .unwrap();
        let d2 = Subdivision::new(
            Target::Polytope(s.clone()),
            vec![
                tri(&[0, 0], &[1, 1], &[1, 0]),
                tri(&[0, 0], &[1, 1], &[0, 1]),
                seg(&[0, 0], &[1, 1]),
                seg(&[0, 0], &[1, 0]),
                seg(&[1, 0], &[1, 1]),
                seg(&[1, 1], &[0, 1]),
                seg(&[0, 1], &[0, 0]),
                ptp(&[0, 0]),
                ptp(&[1, 0]),
                ptp(&[0, 1]),
                ptp(&[1, 1]),
            ],
        )
        .unwrap();
        let (d3, dp, dpp) = common_refinement_scheme(&d1, &d2, 7).unwrap();
        assert!(d3.verify().pass);
        assert!(dp.verify().pass);
        assert!(dpp.verify().pass);
        assert!(dp.refines(&d1).is_ok());
        assert!(dpp.refines(&d2).is_ok());
    }

    #[test]
    fn one_dimensional_breakpoints_move_off_shared_values() {
        // two partitions of [0,1] sharing the breakpoint 1/2; the grid must
        // avoid 1/2 exactly
        let seg = |a: Rational, b: Rational| {
            Polytope::convex_hull(&[Point::new(vec![a]), Point::new(vec![b])]).unwrap()
        };
        let p = |a: Rational| Polytope::convex_hull(&[Point::new(vec![a])]).unwrap();
        let mk = |bp: Rational| {
            Subdivision::new(
                Target::Polytope(seg(rat(0, 1), rat(1, 1))),
                vec![
                    seg(rat(0, 1), bp.clone()),
                    seg(bp.clone(), rat(1, 1)),
                    p(rat(0, 1)),
                    p(bp),
                    p(rat(1, 1)),
                ],
            )
            .unwrap()
        };
        let d1 = mk(rat(1, 2));
        let d2 = mk(rat(1, 2));
        let (d3, dp, dpp) = common_refinement_scheme(&d1, &d2, 5).unwrap();
        // grid breakpoints are distinct from 1/2
        for c in d3.cells() {
            if c.intrinsic_dim() == 0 {
                assert_ne!(c.vertices()[0].coords[0], rat(1, 2));
            }
        }
        assert!(dp.refines(&d1).is_ok());
        assert!(dpp.refines(&d2).is_ok());
    }

    #[test]
    fn trivial_inputs_give_grid_restriction() {
        let s = square();
        let d1 = Subdivision::trivial(&s);
        let (d3, dp, dpp) = common_refinement_scheme(&d1, &d1, 13).unwrap();
        // dp = d3 restricted to the square
        let restricted = intersect_with_grid(&d1, &d3).unwrap();
        assert_eq!(dp.cells().len(), restricted.cells().len());
        assert_eq!(dp.cells().len(), dpp.cells().len());
        for (a, b) in dp.cells().iter().zip(restricted.cells()) {
            assert_eq!(a, b);
        }
        // the bare {P} family has no boundary cells, so the restriction is
        // not itself a verified subdivision; the top stratum still tiles P
        let area: Rational = dp.strata()[2]
            .iter()
            .map(|&i| dp.cells()[i].volume_exact())
            .sum();
        assert_eq!(area, rat(1, 1));
    }
}
