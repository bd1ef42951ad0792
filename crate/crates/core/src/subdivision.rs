//! Subdivisions of polytopal targets: cell families where every point of the
//! target lies in the relative interior of some cell (condition 1) and a cell
//! meeting another's relative interior is contained in it (condition 2).
//!
//! Condition 1 is certified exactly: stratified volume accounting in the
//! target's chart plus recursion over cell facets, with explicit witness
//! points on failure. Condition 2 is checked exactly on all cell pairs.

use crate::linalg::{rank_of_rows, Point, Vector};
use crate::num::Rational;
use crate::polytope::{intersect_polytopes, GeometryError, Polytope};
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

#[derive(Debug, thiserror::Error)]
pub enum SubdivisionError {
    #[error("ambient dimension mismatch")]
    AmbientMismatch,
    #[error("cell index {0} out of range (have {1} cells)")]
    CellIndex(usize, usize),
    #[error("subdivisions have different targets")]
    TargetMismatch,
    #[error("cell with vertices {cell} is non-transversal to itself (lineality spaces coincide)")]
    SelfCell { cell: String },
    #[error("non-transversal cells {a} and {b}: lineality spaces of the face classes at {witness:?} do not span the ambient space")]
    NonTransversal { a: usize, b: usize, witness: Point },
    #[error("intersection family is not a subdivision: {0}")]
    InvalidIntersection(String),
    #[error("input family fails subdivision verification: {0}")]
    InvalidSubdivision(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// What a subdivision subdivides. `SelfUnion` means "exactly the union of
/// the listed cells" (used for non-convex complexes).
#[derive(Clone, Debug)]
pub enum Target {
    Polytope(Polytope),
    SelfUnion,
}

impl Target {
    pub fn as_polytope(&self) -> Option<&Polytope> {
        match self {
            Target::Polytope(p) => Some(p),
            Target::SelfUnion => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Subdivision {
    target: Target,
    cells: Vec<Polytope>,
    /// strata[r] = indices of cells with intrinsic dimension r
    strata: Vec<Vec<usize>>,
    ambient: usize,
}

impl Subdivision {
    pub fn new(target: Target, cells: Vec<Polytope>) -> Result<Subdivision, SubdivisionError> {
        if cells.is_empty() {
            return Err(SubdivisionError::InvalidSubdivision("no cells".into()));
        }
        let ambient = match &target {
            Target::Polytope(p) => p.ambient_dim(),
            Target::SelfUnion => cells[0].ambient_dim(),
        };
        let mut cells = cells;
        for c in &cells {
            if c.ambient_dim() != ambient {
                return Err(SubdivisionError::AmbientMismatch);
            }
        }
        cells.sort_by(|a, b| a.vertices().cmp(b.vertices()));
        cells.dedup();
        let max_dim = cells.iter().map(|c| c.intrinsic_dim()).max().unwrap_or(0);
        let mut strata = vec![Vec::new(); max_dim + 1];
        for (i, c) in cells.iter().enumerate() {
            strata[c.intrinsic_dim()].push(i);
        }
        Ok(Subdivision {
            target,
            cells,
            strata,
            ambient,
        })
    }

    /// All faces of `p` as cells; the canonical subdivision of a polytope.
    pub fn face_complex(p: &Polytope) -> Subdivision {
        let cells: Vec<Polytope> = (0..p.faces().len())
            .map(|i| p.face_polytope(i).expect("face polytope"))
            .collect();
        Subdivision::new(Target::Polytope(p.clone()), cells).expect("face complex is valid")
    }

    /// Just `{P}`. Not a valid subdivision of a compact polytope in the
    /// strict sense (boundary points are uncovered) but accepted as an input
    /// where the operations only need the cell list.
    pub fn trivial(p: &Polytope) -> Subdivision {
        Subdivision::new(Target::Polytope(p.clone()), vec![p.clone()]).expect("trivial family")
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn target(&self) -> &Target {
        &self.target
    }

    pub fn target_dim(&self) -> usize {
        match &self.target {
            Target::Polytope(p) => p.intrinsic_dim(),
            Target::SelfUnion => self.strata.len() - 1,
        }
    }

    pub fn cells(&self) -> &[Polytope] {
        &self.cells
    }

    pub fn cell(&self, i: usize) -> Result<&Polytope, SubdivisionError> {
        self.cells
            .get(i)
            .ok_or(SubdivisionError::CellIndex(i, self.cells.len()))
    }

    pub fn strata(&self) -> &[Vec<usize>] {
        &self.strata
    }

    /// Indices of cells contained in `region`.
    pub fn cells_inside(&self, region: &Polytope) -> Vec<usize> {
        (0..self.cells.len())
            .filter(|&i| region.contains_polytope(&self.cells[i]))
            .collect()
    }

    /// The cell whose relative interior contains `x`, if any.
    pub fn cell_with_relint_containing(&self, x: &Point) -> Option<usize> {
        (0..self.cells.len()).find(|&i| self.cells[i].contains_in_relint(x))
    }

    pub fn verify(&self) -> VerifyReport {
        let mut violations = Vec::new();

        // condition (2), all ordered pairs
        for i in 0..self.cells.len() {
            for j in 0..self.cells.len() {
                if i == j {
                    continue;
                }
                if let Some(w) = relint_meet_witness(&self.cells[i], &self.cells[j]) {
                    if !self.cells[j].contains_polytope(&self.cells[i]) {
                        violations.push(Violation::NestingViolated {
                            cell: i,
                            other: j,
                            witness: w,
                        });
                    }
                }
            }
        }

        // condition (1)
        let mut checker = CoverChecker::new(&self.cells);
        match &self.target {
            Target::Polytope(t) => {
                let mut outside = false;
                for i in 0..self.cells.len() {
                    if !t.contains_polytope(&self.cells[i]) {
                        let w = self.cells[i]
                            .vertices()
                            .iter()
                            .find(|v| !t.contains_point(v))
                            .expect("some vertex is outside")
                            .clone();
                        violations.push(Violation::CellOutsideTarget { cell: i, witness: w });
                        outside = true;
                    }
                }
                if !outside {
                    checker.check(t, &mut violations);
                }
            }
            Target::SelfUnion => {
                // every facet of every cell must be covered by cells inside it
                for c in &self.cells {
                    let top = c.top_face();
                    for (fi, f) in c.faces().iter().enumerate() {
                        if fi == top || f.dim + 1 != c.intrinsic_dim() {
                            continue;
                        }
                        let facet = c.face_polytope(fi).expect("facet polytope");
                        checker.check(&facet, &mut violations);
                    }
                }
            }
        }

        // barycenter probes: cheap spot diagnostics on top of the exact check
        for c in &self.cells {
            let b = c.barycenter();
            if self.cell_with_relint_containing(&b).is_none() {
                violations.push(Violation::NotCovered { witness: b });
            }
        }

        dedup_violations(&mut violations);
        VerifyReport {
            pass: violations.is_empty(),
            violations,
        }
    }

    /// Refinement in the sense that for every cell `Q` of `coarse`, the cells
    /// of `self` inside `Q` subdivide `Q`.
    pub fn refines(&self, coarse: &Subdivision) -> Result<(), RefinementViolation> {
        for (qi, q) in coarse.cells.iter().enumerate() {
            let inside: Vec<Polytope> = self
                .cells_inside(q)
                .into_iter()
                .map(|i| self.cells[i].clone())
                .collect();
            if inside.is_empty() {
                return Err(RefinementViolation {
                    coarse_cell: qi,
                    detail: "no cells inside".into(),
                });
            }
            let sub = Subdivision::new(Target::Polytope(q.clone()), inside)
                .expect("refinement sub-family");
            let report = sub.verify();
            if !report.pass {
                return Err(RefinementViolation {
                    coarse_cell: qi,
                    detail: format!("{:?}", report.violations[0]),
                });
            }
        }
        Ok(())
    }
}

#[derive(Debug)]
pub struct RefinementViolation {
    pub coarse_cell: usize,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub enum Violation {
    CellOutsideTarget { cell: usize, witness: Point },
    NotCovered { witness: Point },
    NestingViolated { cell: usize, other: usize, witness: Point },
}

#[derive(Debug)]
pub struct VerifyReport {
    pub pass: bool,
    pub violations: Vec<Violation>,
}

impl VerifyReport {
    pub fn uncovered_witnesses(&self) -> Vec<&Point> {
        self.violations
            .iter()
            .filter_map(|v| match v {
                Violation::NotCovered { witness } => Some(witness),
                _ => None,
            })
            .collect()
    }
}

fn dedup_violations(violations: &mut Vec<Violation>) {
    let mut seen = BTreeSet::new();
    violations.retain(|v| {
        let key = format!("{v:?}");
        seen.insert(key)
    });
}

/// Witness point in `relint(a) ∩ b`, if the two meet that way.
pub(crate) fn relint_meet_witness(a: &Polytope, b: &Polytope) -> Option<Point> {
    let inter = intersect_polytopes(a, b)?;
    // relint(a) meets inter iff every facet of a has a strict vertex of inter
    for h in &a.halfspaces()[..a.facet_count()] {
        if !inter.vertices().iter().any(|v| {
            use num_traits::Signed;
            h.eval(v).is_positive()
        }) {
            return None;
        }
    }
    Some(inter.barycenter())
}

/// Witness point in `relint(a) ∩ relint(b)`, if nonempty.
pub(crate) fn relint_relint_witness(a: &Polytope, b: &Polytope) -> Option<Point> {
    let inter = intersect_polytopes(a, b)?;
    for p in [a, b] {
        for h in &p.halfspaces()[..p.facet_count()] {
            if !inter.vertices().iter().any(|v| {
                use num_traits::Signed;
                h.eval(v).is_positive()
            }) {
                return None;
            }
        }
    }
    Some(inter.barycenter())
}

/// Exact coverage certification: the relative interiors of `cells` contained
/// in a convex target `t` cover `t` iff the top-dimensional volume accounting
/// is exact and, recursively, every facet of every top cell is covered.
struct CoverChecker<'a> {
    cells: &'a [Polytope],
    visited: BTreeSet<Vec<Point>>,
}

impl<'a> CoverChecker<'a> {
    fn new(cells: &'a [Polytope]) -> Self {
        CoverChecker {
            cells,
            visited: BTreeSet::new(),
        }
    }

    fn check(&mut self, t: &Polytope, violations: &mut Vec<Violation>) {
        if !self.visited.insert(t.vertices().to_vec()) {
            return;
        }
        let d = t.intrinsic_dim();
        let inside: Vec<usize> = (0..self.cells.len())
            .filter(|&i| t.contains_polytope(&self.cells[i]))
            .collect();

        if d == 0 {
            let covered = inside
                .iter()
                .any(|&i| self.cells[i].vertices() == t.vertices());
            if !covered {
                violations.push(Violation::NotCovered {
                    witness: t.vertices()[0].clone(),
                });
            }
            return;
        }

        let chart = t.chart();
        let mut total = Rational::zero();
        let mut tops = Vec::new();
        for &i in &inside {
            if self.cells[i].intrinsic_dim() == d {
                total += self.cells[i].volume_in_chart(chart);
                tops.push(i);
            }
        }
        if total != t.volume_in_chart(chart) {
            let witness =
                find_uncovered_point(t, self.cells, &inside).unwrap_or_else(|| t.barycenter());
            violations.push(Violation::NotCovered { witness });
            return;
        }
        // recurse into the facets of every top cell
        for &i in &tops {
            let c = &self.cells[i];
            let top_face = c.top_face();
            for (fi, f) in c.faces().iter().enumerate() {
                if fi == top_face || f.dim + 1 != d {
                    continue;
                }
                let facet = c.face_polytope(fi).expect("facet polytope");
                self.check(&facet, violations);
            }
        }
    }
}

/// Deterministic witness search: split `t` by the facet hyperplanes of the
/// top-dimensional candidate cells; any surviving full-dimensional piece not
/// inside a cell yields an interior witness point.
fn find_uncovered_point(t: &Polytope, cells: &[Polytope], inside: &[usize]) -> Option<Point> {
    let d = t.intrinsic_dim();
    let tops: Vec<&Polytope> = inside
        .iter()
        .map(|&i| &cells[i])
        .filter(|c| c.intrinsic_dim() == d)
        .collect();
    let relint_covered = |x: &Point| cells.iter().any(|c| c.contains_in_relint(x));

    let mut pieces: Vec<Polytope> = vec![t.clone()];
    for c in &tops {
        let mut next = Vec::new();
        for piece in pieces {
            if tops.iter().any(|cc| cc.contains_polytope(&piece)) {
                continue; // already covered
            }
            let mut split_parts = vec![piece];
            for h in &c.halfspaces()[..c.facet_count()] {
                let mut parts = Vec::new();
                for part in split_parts {
                    parts.extend(split_by_hyperplane(&part, &h.normal, &h.offset, d));
                }
                split_parts = parts;
            }
            next.extend(split_parts);
        }
        pieces = next;
    }
    for piece in &pieces {
        if tops.iter().any(|c| c.contains_polytope(piece)) {
            continue;
        }
        let b = piece.barycenter();
        if !relint_covered(&b) {
            return Some(b);
        }
        for v in piece.vertices() {
            let mid = (&b + v).scale(&crate::num::rat(1, 2));
            if !relint_covered(&mid) {
                return Some(mid);
            }
        }
    }
    None
}

fn split_by_hyperplane(
    p: &Polytope,
    normal: &Vector,
    offset: &Rational,
    keep_dim: usize,
) -> Vec<Polytope> {
    use num_traits::Signed;
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
                let x = pa + &(pb - pa).scale(&t);
                pts.push(x);
            }
        }
        if pts.is_empty() {
            continue;
        }
        let piece = Polytope::convex_hull(&pts).expect("split piece hull");
        if piece.intrinsic_dim() == keep_dim {
            out.push(piece);
        }
    }
    out
}

// ---------------------------------------------------------------------------
// ComplexSet and reduced decompositions
// ---------------------------------------------------------------------------

/// A union of cells of a subdivision, stored with its unique reduced
/// decomposition (the inclusion-maximal members).
#[derive(Clone, Debug)]
pub struct ComplexSet {
    pub subdivision: Arc<Subdivision>,
    pub members: Vec<usize>,
    pub reduced: Vec<usize>,
}

impl ComplexSet {
    pub fn new(
        subdivision: Arc<Subdivision>,
        members: impl IntoIterator<Item = usize>,
    ) -> Result<ComplexSet, SubdivisionError> {
        let mut members: Vec<usize> = members.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        for &m in &members {
            subdivision.cell(m)?;
        }
        let reduced = reduced_decomposition(&subdivision, &members);
        Ok(ComplexSet {
            subdivision,
            members,
            reduced,
        })
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains_point(&self, x: &Point) -> bool {
        self.members
            .iter()
            .any(|&i| self.subdivision.cells()[i].contains_point(x))
    }
}

/// The unique inclusion-minimal antichain presenting the union of `members`:
/// the inclusion-maximal cells. Idempotent.
pub fn reduced_decomposition(sub: &Subdivision, members: &[usize]) -> Vec<usize> {
    let mut out = Vec::new();
    'outer: for (k, &i) in members.iter().enumerate() {
        for (l, &j) in members.iter().enumerate() {
            if k == l {
                continue;
            }
            let ci = &sub.cells()[i];
            let cj = &sub.cells()[j];
            if cj.contains_polytope(ci) {
                // drop ci if strictly contained, or equal with a later index
                if !ci.contains_polytope(cj) || l < k {
                    continue 'outer;
                }
            }
        }
        out.push(i);
    }
    out.sort_unstable();
    out.dedup();
    out
}

// ---------------------------------------------------------------------------
// Transversal intersection of subdivisions
// ---------------------------------------------------------------------------

enum PairObstruction {
    SelfCell,
    Class { witness: Point },
}

/// Exact transversality certificate for the face classes of a cell pair.
///
/// The literal lineality test of the source definition fails for *any* two
/// subdivisions of a common compact target (shared target faces give
/// zero-lineality classes), so shared faces are exempted: a class `(F, F')`
/// with `F ⊆ F'` or `F' ⊆ F` is an exact coincidence and harmless, except
/// for identical cells of full target dimension, which are reported as
/// self-non-transversal.
fn check_pair_transversal(
    a: &Polytope,
    b: &Polytope,
    ambient: usize,
    target_dim: usize,
) -> Result<(), PairObstruction> {
    if intersect_polytopes(a, b).is_none() {
        return Ok(());
    }
    if a == b && a.intrinsic_dim() == target_dim {
        return Err(PairObstruction::SelfCell);
    }
    for (fi, fa) in a.faces().iter().enumerate() {
        for (gi, fb) in b.faces().iter().enumerate() {
            // fast path: lineality spaces already span the ambient space
            let mut dirs: Vec<Vector> = Vec::new();
            let va: Vec<Point> = fa.vertices.iter().map(|&v| a.vertices()[v].clone()).collect();
            let vb: Vec<Point> = fb.vertices.iter().map(|&v| b.vertices()[v].clone()).collect();
            for set in [&va, &vb] {
                for v in &set[1..] {
                    dirs.push(v - &set[0]);
                }
            }
            if rank_of_rows(&dirs) == ambient {
                continue;
            }
            let pa = a.face_polytope(fi).expect("face polytope");
            let pb = b.face_polytope(gi).expect("face polytope");
            let Some(witness) = relint_relint_witness(&pa, &pb) else {
                continue;
            };
            let nested = pa.contains_polytope(&pb) || pb.contains_polytope(&pa);
            if nested {
                if pa == pb && pa.intrinsic_dim() == target_dim {
                    return Err(PairObstruction::SelfCell);
                }
                continue;
            }
            return Err(PairObstruction::Class { witness });
        }
    }
    Ok(())
}

/// Strict lineality-sum test used against generic auxiliary grids: every face
/// class with intersecting relative interiors must have direction spaces
/// summing to the ambient space, with no exemptions.
pub(crate) fn strict_transversal(
    d: &Subdivision,
    grid: &Subdivision,
) -> Result<(), (usize, usize, Point)> {
    let ambient = d.ambient_dim();
    for (i, a) in d.cells().iter().enumerate() {
        for (j, b) in grid.cells().iter().enumerate() {
            if intersect_polytopes(a, b).is_none() {
                continue;
            }
            for (fi, fa) in a.faces().iter().enumerate() {
                for (gi, fb) in b.faces().iter().enumerate() {
                    let mut dirs: Vec<Vector> = Vec::new();
                    let va: Vec<Point> =
                        fa.vertices.iter().map(|&v| a.vertices()[v].clone()).collect();
                    let vb: Vec<Point> =
                        fb.vertices.iter().map(|&v| b.vertices()[v].clone()).collect();
                    for set in [&va, &vb] {
                        for v in &set[1..] {
                            dirs.push(v - &set[0]);
                        }
                    }
                    if rank_of_rows(&dirs) == ambient {
                        continue;
                    }
                    let pa = a.face_polytope(fi).expect("face polytope");
                    let pb = b.face_polytope(gi).expect("face polytope");
                    if let Some(w) = relint_relint_witness(&pa, &pb) {
                        return Err((i, j, w));
                    }
                }
            }
        }
    }
    Ok(())
}

/// All nonempty pairwise intersections, deduplicated. The target is taken
/// from `d1`. Used both for same-target intersection and for clipping with
/// an auxiliary grid that covers more than the target.
pub(crate) fn pairwise_intersection_cells(d1: &Subdivision, d2: &Subdivision) -> Vec<Polytope> {
    let pairs: Vec<(usize, usize)> = (0..d1.cells().len())
        .flat_map(|i| (0..d2.cells().len()).map(move |j| (i, j)))
        .collect();
    let cells: Vec<Option<Polytope>> = crate::exec::map_indexed(pairs.len(), |k| {
        let (i, j) = pairs[k];
        intersect_polytopes(&d1.cells()[i], &d2.cells()[j])
    });
    let mut out: Vec<Polytope> = cells.into_iter().flatten().collect();
    out.sort_by(|a, b| a.vertices().cmp(b.vertices()));
    out.dedup();
    out
}

/// Intersection of two transversal subdivisions of the same target
/// (cells are all nonempty pairwise intersections). The output is verified
/// to be a subdivision refining both inputs.
pub fn intersect_subdivisions(
    d1: &Subdivision,
    d2: &Subdivision,
) -> Result<Subdivision, SubdivisionError> {
    if d1.ambient_dim() != d2.ambient_dim() {
        return Err(SubdivisionError::AmbientMismatch);
    }
    match (&d1.target, &d2.target) {
        (Target::Polytope(a), Target::Polytope(b)) if a != b => {
            return Err(SubdivisionError::TargetMismatch);
        }
        _ => {}
    }
    let target_dim = d1.target_dim().max(d2.target_dim());
    for (i, a) in d1.cells().iter().enumerate() {
        for (j, b) in d2.cells().iter().enumerate() {
            match check_pair_transversal(a, b, d1.ambient_dim(), target_dim) {
                Ok(()) => {}
                Err(PairObstruction::SelfCell) => {
                    return Err(SubdivisionError::SelfCell {
                        cell: format!("{:?}", a.vertices()),
                    });
                }
                Err(PairObstruction::Class { witness }) => {
                    return Err(SubdivisionError::NonTransversal { a: i, b: j, witness });
                }
            }
        }
    }
    let cells = pairwise_intersection_cells(d1, d2);
    let out = Subdivision::new(d1.target.clone(), cells)?;
    let report = out.verify();
    if !report.pass {
        return Err(SubdivisionError::InvalidIntersection(format!(
            "{:?}",
            report.violations[0]
        )));
    }
    for d in [d1, d2] {
        if let Err(v) = out.refines(d) {
            return Err(SubdivisionError::InvalidIntersection(format!(
                "does not refine input at cell {}: {}",
                v.coarse_cell, v.detail
            )));
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct SubdivisionJson {
    /// `null` means the target is the union of the cells.
    target: Option<Polytope>,
    cells: Vec<Polytope>,
}

impl Serialize for Subdivision {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        SubdivisionJson {
            target: self.target.as_polytope().cloned(),
            cells: self.cells.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Subdivision {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = SubdivisionJson::deserialize(deserializer)?;
        let target = match raw.target {
            Some(p) => Target::Polytope(p),
            None => Target::SelfUnion,
        };
        Subdivision::new(target, raw.cells).map_err(D::Error::custom)
    }
}

/// Index map from cell vertex lists to indices, for canonical lookups.
pub fn cell_index_map(sub: &Subdivision) -> BTreeMap<Vec<Point>, usize> {
    sub.cells()
        .iter()
        .enumerate()
        .map(|(i, c)| (c.vertices().to_vec(), i))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{rat, rat_int};

    fn pt(coords: &[i64]) -> Point {
        Point::from_ints(coords)
    }

    fn square() -> Polytope {
        Polytope::convex_hull(&[pt(&[0, 0]), pt(&[1, 0]), pt(&[0, 1]), pt(&[1, 1])]).unwrap()
    }

    /// Square cut by one diagonal (NW-SE when `nw_se`), with all boundary
    /// structure as cells.
    fn diagonal_triangulation(nw_se: bool) -> Subdivision {
        let s = square();
        let (nw, ne, se, sw) = (pt(&[0, 1]), pt(&[1, 1]), pt(&[1, 0]), pt(&[0, 0]));
        let (d1, d2) = if nw_se {
            (nw.clone(), se.clone())
        } else {
            (ne.clone(), sw.clone())
        };
        let tri = |a: &Point, b: &Point, c: &Point| {
            Polytope::convex_hull(&[a.clone(), b.clone(), c.clone()]).unwrap()
        };
        let seg = |a: &Point, b: &Point| Polytope::convex_hull(&[a.clone(), b.clone()]).unwrap();
        let ptp = |a: &Point| Polytope::convex_hull(&[a.clone()]).unwrap();
        let (t1, t2) = if nw_se {
            (tri(&nw, &ne, &se), tri(&nw, &sw, &se))
        } else {
            (tri(&ne, &nw, &sw), tri(&ne, &se, &sw))
        };
        let cells = vec![
            t1,
            t2,
            seg(&d1, &d2),
            seg(&nw, &ne),
            seg(&ne, &se),
            seg(&se, &sw),
            seg(&sw, &nw),
            ptp(&nw),
            ptp(&ne),
            ptp(&se),
            ptp(&sw),
        ];
        Subdivision::new(Target::Polytope(s), cells).unwrap()
    }

    #[test]
    fn standard_triangulation_passes() {
        let d = diagonal_triangulation(true);
        let report = d.verify();
        assert!(report.pass, "{:?}", report.violations);
    }

    #[test]
    fn overlapping_triangles_fail_condition_two() {
        let t1 = Polytope::convex_hull(&[pt(&[0, 0]), pt(&[2, 0]), pt(&[0, 2])]).unwrap();
        let t2 = Polytope::convex_hull(&[pt(&[1, 0]), pt(&[3, 0]), pt(&[1, 2])]).unwrap();
        let d = Subdivision::new(Target::SelfUnion, vec![t1, t2]).unwrap();
        let report = d.verify();
        assert!(!report.pass);
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::NestingViolated { .. })));
    }

    #[test]
    fn missing_shared_edge_yields_diagonal_witness() {
        let s = square();
        let t1 = Polytope::convex_hull(&[pt(&[0, 1]), pt(&[1, 1]), pt(&[1, 0])]).unwrap();
        let t2 = Polytope::convex_hull(&[pt(&[0, 1]), pt(&[0, 0]), pt(&[1, 0])]).unwrap();
        let d = Subdivision::new(Target::Polytope(s), vec![t1, t2]).unwrap();
        let report = d.verify();
        assert!(!report.pass);
        let mid = Point::new(vec![rat(1, 2), rat(1, 2)]);
        assert!(
            report.uncovered_witnesses().iter().any(|w| **w == mid),
            "expected the diagonal midpoint among witnesses: {:?}",
            report.violations
        );
    }

    #[test]
    fn face_complex_is_a_subdivision() {
        let cube = Polytope::convex_hull(&[
            pt(&[0, 0, 0]),
            pt(&[1, 0, 0]),
            pt(&[0, 1, 0]),
            pt(&[1, 1, 0]),
            pt(&[0, 0, 1]),
            pt(&[1, 0, 1]),
            pt(&[0, 1, 1]),
            pt(&[1, 1, 1]),
        ])
        .unwrap();
        let d = Subdivision::face_complex(&cube);
        assert_eq!(d.cells().len(), 8 + 12 + 6 + 1);
        assert!(d.verify().pass);
    }

    #[test]
    fn reduced_decomposition_examples() {
        let d = diagonal_triangulation(true);
        let sub = Arc::new(d);
        // triangle plus one of its edges: the edge is absorbed
        let tri_idx = sub.strata()[2][0];
        let edge_inside = (0..sub.cells().len())
            .find(|&i| {
                sub.cells()[i].intrinsic_dim() == 1
                    && sub.cells()[tri_idx].contains_polytope(&sub.cells()[i])
            })
            .unwrap();
        let cs = ComplexSet::new(sub.clone(), vec![tri_idx, edge_inside]).unwrap();
        assert_eq!(cs.reduced, vec![tri_idx]);

        // two triangles listed with the shared diagonal: triangles only
        let t2 = sub.strata()[2][1];
        let diag = (0..sub.cells().len())
            .find(|&i| {
                sub.cells()[i].intrinsic_dim() == 1
                    && sub.cells()[tri_idx].contains_polytope(&sub.cells()[i])
                    && sub.cells()[t2].contains_polytope(&sub.cells()[i])
            })
            .unwrap();
        let cs = ComplexSet::new(sub.clone(), vec![tri_idx, t2, diag]).unwrap();
        let mut expect = vec![tri_idx, t2];
        expect.sort_unstable();
        assert_eq!(cs.reduced, expect);

        // idempotent
        let again = reduced_decomposition(&sub, &cs.reduced);
        assert_eq!(again, cs.reduced);
    }

    #[test]
    fn two_diagonal_subdivisions_intersect_to_the_envelope() {
        let d1 = diagonal_triangulation(true);
        let d2 = diagonal_triangulation(false);
        let out = intersect_subdivisions(&d1, &d2).unwrap();
        assert!(out.verify().pass);
        assert!(out.refines(&d1).is_ok());
        assert!(out.refines(&d2).is_ok());
        // 4 envelope triangles, 4 half-diagonals + 4 boundary edges,
        // 4 corners + center
        assert_eq!(out.strata()[2].len(), 4);
        assert_eq!(out.strata()[1].len(), 8);
        assert_eq!(out.strata()[0].len(), 5);
        let center = Point::new(vec![rat(1, 2), rat(1, 2)]);
        assert!(out
            .cells()
            .iter()
            .any(|c| c.intrinsic_dim() == 0 && c.vertices()[0] == center));
    }

    #[test]
    fn self_intersection_with_full_cell_errors() {
        let d = diagonal_triangulation(true);
        let err = intersect_subdivisions(&d, &d);
        assert!(matches!(err, Err(SubdivisionError::SelfCell { .. })), "{err:?}");
    }

    #[test]
    fn trivial_against_triangulation_returns_the_triangulation() {
        let s = square();
        let trivial = Subdivision::trivial(&s);
        let t = diagonal_triangulation(true);
        let out = intersect_subdivisions(&trivial, &t).unwrap();
        assert_eq!(out.cells().len(), t.cells().len());
        for (a, b) in out.cells().iter().zip(t.cells()) {
            assert_eq!(a, b);
        }
    }

    #[test]
    fn segment_subdivision_volume_accounting() {
        let seg = |a: Rational, b: Rational| {
            Polytope::convex_hull(&[Point::new(vec![a]), Point::new(vec![b])]).unwrap()
        };
        let p = |a: Rational| Polytope::convex_hull(&[Point::new(vec![a])]).unwrap();
        let target = seg(rat_int(0), rat_int(1));
        let cells = vec![
            seg(rat_int(0), rat(1, 2)),
            seg(rat(1, 2), rat_int(1)),
            p(rat_int(0)),
            p(rat(1, 2)),
            p(rat_int(1)),
        ];
        let d = Subdivision::new(Target::Polytope(target.clone()), cells).unwrap();
        assert!(d.verify().pass);

        // dropping the interior breakpoint: condition (1) fails at 1/2
        let cells = vec![
            seg(rat_int(0), rat(1, 2)),
            seg(rat(1, 2), rat_int(1)),
            p(rat_int(0)),
            p(rat_int(1)),
        ];
        let d = Subdivision::new(Target::Polytope(target), cells).unwrap();
        let report = d.verify();
        assert!(!report.pass);
        assert!(report
            .uncovered_witnesses()
            .iter()
            .any(|w| w.coords[0] == rat(1, 2)));
    }
}
