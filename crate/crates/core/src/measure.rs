//! Finitely additive measures on the union-closure of a subdivision, built
//! from generator values by the inclusion-exclusion recursion over strata.
//!
//! `extend` verifies the structural assumptions exhaustively before building
//! anything: every pairwise cell intersection must be a union of cells of
//! type at most the minimum, strictly lower for distinct cells of equal type.
//! Evaluation canonicalizes presentations to reduced decompositions and
//! memoizes, so values are presentation-independent by construction; the raw
//! (non-canonicalized) evaluation path is kept for uniqueness testing.

use crate::num::MeasureScalar;
use crate::polytope::{intersect_polytopes, Polytope};
use crate::refine::{refine_subordinate, OpenBox, RefineError};
use crate::subdivision::{ComplexSet, Subdivision, SubdivisionError};
use crate::linalg::Point;
use std::collections::HashMap;
use std::sync::Arc;

#[derive(Debug, thiserror::Error)]
pub enum MeasureError {
    #[error("generator table has {got} entries for {want} cells")]
    GeneratorArity { got: usize, want: usize },
    #[error("cells {a} and {b} intersect in a set that is not a union of cells; witness {witness:?}")]
    IntersectionNotCellUnion { a: usize, b: usize, witness: Point },
    #[error("distinct cells {a} and {b} of equal type {ty} intersect in type {got}")]
    EqualTypeIntersection { a: usize, b: usize, ty: usize, got: usize },
    #[error("set is not in the union-closure: cell index {0} out of range")]
    NotInClosure(usize),
    #[error("boxes do not cover the evaluation region; witness {witness:?}")]
    CoverInsufficient { witness: Point },
    #[error("local evaluators disagree on cell {cell}: {left:?} vs {right:?}")]
    OverlapIncompatible { cell: usize, left: String, right: String },
    #[error(transparent)]
    Refine(#[from] RefineError),
    #[error(transparent)]
    Subdivision(#[from] SubdivisionError),
}

/// Generator values `m : Λ -> C`, indexed like the subdivision's cells.
#[derive(Clone, Debug)]
pub struct GeneratorTable<S>(pub Vec<S>);

impl<S: MeasureScalar> GeneratorTable<S> {
    pub fn constant(sub: &Subdivision, value: S) -> Self {
        GeneratorTable(vec![value; sub.cells().len()])
    }

    pub fn from_fn(sub: &Subdivision, f: impl FnMut(&Polytope) -> S) -> Self {
        GeneratorTable(sub.cells().iter().map(f).collect())
    }
}

/// The finitely additive measure extending a generator table over the
/// union-closure of a subdivision.
#[derive(Clone, Debug)]
pub struct Measure<S> {
    sub: Arc<Subdivision>,
    m: Vec<S>,
    /// members of cell_i ∩ cell_j as a reduced list of cell indices
    pair_members: Vec<Vec<Vec<usize>>>,
    /// cell containment matrix: contains[i][j] == cell_i ⊇ cell_j
    contains: Vec<Vec<bool>>,
}

impl<S: MeasureScalar> Measure<S> {
    pub fn subdivision(&self) -> &Arc<Subdivision> {
        &self.sub
    }

    pub fn generator(&self, i: usize) -> &S {
        &self.m[i]
    }

    /// Builds the measure, verifying assumptions (1)-(3) exhaustively over
    /// cell pairs. Assumption (3), uniqueness of reduced decompositions,
    /// holds structurally for antichains of maximal cells and is not
    /// re-enumerated.
    pub fn extend(
        sub: Arc<Subdivision>,
        table: GeneratorTable<S>,
    ) -> Result<Measure<S>, MeasureError> {
        Self::extend_impl(sub, table, true)
    }

    /// Extension without the assumption audit, for callers that have already
    /// verified the subdivision (the audit is quadratic in cells).
    pub fn extend_unchecked(
        sub: Arc<Subdivision>,
        table: GeneratorTable<S>,
    ) -> Result<Measure<S>, MeasureError> {
        Self::extend_impl(sub, table, false)
    }

    fn extend_impl(
        sub: Arc<Subdivision>,
        table: GeneratorTable<S>,
        check: bool,
    ) -> Result<Measure<S>, MeasureError> {
        let k = sub.cells().len();
        if table.0.len() != k {
            return Err(MeasureError::GeneratorArity {
                got: table.0.len(),
                want: k,
            });
        }
        let cells = sub.cells();
        let contains: Vec<Vec<bool>> = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| cells[i].contains_polytope(&cells[j]))
                    .collect()
            })
            .collect();

        let results: Vec<Result<Vec<Vec<usize>>, MeasureError>> =
            crate::exec::map_indexed(k, |i| {
                let mut row = Vec::with_capacity(k);
                for j in 0..k {
                    if j < i {
                        row.push(Vec::new()); // filled from symmetry below
                        continue;
                    }
                    let inter = if i == j {
                        Some(cells[i].clone())
                    } else if contains[i][j] {
                        Some(cells[j].clone())
                    } else if contains[j][i] {
                        Some(cells[i].clone())
                    } else {
                        intersect_polytopes(&cells[i], &cells[j])
                    };
                    let members = match inter {
                        None => Vec::new(),
                        Some(ref poly) => {
                            let inside: Vec<usize> = (0..k)
                                .filter(|&c| poly.contains_polytope(&cells[c]))
                                .collect();
                            if check && i != j {
                                // the union of the inside cells must be the
                                // whole intersection
                                if let Some(w) = uncovered_in(poly, cells, &inside) {
                                    return Err(MeasureError::IntersectionNotCellUnion {
                                        a: i,
                                        b: j,
                                        witness: w,
                                    });
                                }
                                let ti = cells[i].intrinsic_dim();
                                let tj = cells[j].intrinsic_dim();
                                if ti == tj && poly.intrinsic_dim() >= ti {
                                    return Err(MeasureError::EqualTypeIntersection {
                                        a: i,
                                        b: j,
                                        ty: ti,
                                        got: poly.intrinsic_dim(),
                                    });
                                }
                            }
                            maximal_members(&contains, inside)
                        }
                    };
                    row.push(members);
                }
                Ok(row)
            });
        let mut pair_members: Vec<Vec<Vec<usize>>> = Vec::with_capacity(k);
        for r in results {
            pair_members.push(r?);
        }
        for i in 0..k {
            for j in 0..i {
                pair_members[i][j] = pair_members[j][i].clone();
            }
        }
        Ok(Measure {
            sub,
            m: table.0,
            pair_members,
            contains,
        })
    }

    /// Measure of the union of `members`, canonicalized to the reduced
    /// decomposition first.
    pub fn evaluate(&self, members: &[usize]) -> Result<S, MeasureError> {
        for &i in members {
            if i >= self.m.len() {
                return Err(MeasureError::NotInClosure(i));
            }
        }
        let reduced = self.reduce(members);
        let mut memo: HashMap<Vec<usize>, S> = HashMap::new();
        Ok(self.eval_rec(&reduced, &mut memo))
    }

    pub fn evaluate_set(&self, set: &ComplexSet) -> Result<S, MeasureError> {
        self.evaluate(&set.members)
    }

    /// Evaluation applied literally to the (deduplicated) presentation as
    /// given, without canonicalizing to the reduced decomposition. Values
    /// must agree with `evaluate`; the uniqueness tests exercise that.
    pub fn evaluate_presentation_raw(&self, members: &[usize]) -> Result<S, MeasureError> {
        for &i in members {
            if i >= self.m.len() {
                return Err(MeasureError::NotInClosure(i));
            }
        }
        let mut list = members.to_vec();
        list.sort_unstable();
        list.dedup();
        let mut memo: HashMap<Vec<usize>, S> = HashMap::new();
        Ok(self.inclusion_exclusion(&list, &mut memo))
    }

    fn reduce(&self, members: &[usize]) -> Vec<usize> {
        let mut list = members.to_vec();
        list.sort_unstable();
        list.dedup();
        let mut out = Vec::new();
        'outer: for (a, &i) in list.iter().enumerate() {
            for (b, &j) in list.iter().enumerate() {
                if a == b {
                    continue;
                }
                if self.contains[j][i] && (!self.contains[i][j] || b < a) {
                    continue 'outer;
                }
            }
            out.push(i);
        }
        out
    }

    fn eval_rec(&self, reduced: &[usize], memo: &mut HashMap<Vec<usize>, S>) -> S {
        if reduced.is_empty() {
            return S::zero_value();
        }
        if reduced.len() == 1 {
            return self.m[reduced[0]].clone();
        }
        if let Some(v) = memo.get(reduced) {
            return v.clone();
        }
        let value = self.inclusion_exclusion(reduced, memo);
        memo.insert(reduced.to_vec(), value.clone());
        value
    }

    /// The defining recursion: sum of generators of the presentation plus the
    /// signed measures of all multi-intersections, enumerated depth-first
    /// with empty-intersection pruning.
    fn inclusion_exclusion(&self, list: &[usize], memo: &mut HashMap<Vec<usize>, S>) -> S {
        let mut total = S::zero_value();
        for &i in list {
            total = total.add_ref(&self.m[i]);
        }
        // DFS over subsets I with |I| >= 2; current = members of the partial
        // intersection
        let mut stack: Vec<(usize, Vec<usize>, usize)> = Vec::new(); // (next index, members, |I|)
        for (pos, &i) in list.iter().enumerate() {
            stack.push((pos, vec![i], 1));
        }
        while let Some((pos, current, size)) = stack.pop() {
            for (next_pos, &j) in list.iter().enumerate().skip(pos + 1) {
                let inter = self.intersect_members(&current, j);
                if inter.is_empty() {
                    continue;
                }
                let value = self.eval_rec(&inter, memo);
                if (size + 1) % 2 == 0 {
                    // |I| even: sign (-1)^{|I|+1} = -1
                    total = total.sub_ref(&value);
                } else {
                    total = total.add_ref(&value);
                }
                stack.push((next_pos, inter, size + 1));
            }
        }
        total
    }

    /// Members of `(union of current-members) ∩ cell_j`, reduced.
    fn intersect_members(&self, current: &[usize], j: usize) -> Vec<usize> {
        let mut acc: Vec<usize> = Vec::new();
        for &c in current {
            acc.extend_from_slice(&self.pair_members[c][j]);
        }
        acc.sort_unstable();
        acc.dedup();
        maximal_members(&self.contains, acc)
    }

    /// Member list of the intersection of two union-sets, via the pairwise
    /// member table.
    pub fn intersect_sets(&self, a: &[usize], b: &[usize]) -> Vec<usize> {
        let mut acc = Vec::new();
        for &i in a {
            for &j in b {
                acc.extend_from_slice(&self.pair_members[i][j]);
            }
        }
        acc.sort_unstable();
        acc.dedup();
        maximal_members(&self.contains, acc)
    }

    pub fn union_sets(&self, a: &[usize], b: &[usize]) -> Vec<usize> {
        let mut acc = a.to_vec();
        acc.extend_from_slice(b);
        acc.sort_unstable();
        acc.dedup();
        maximal_members(&self.contains, acc)
    }
}

fn maximal_members(contains: &[Vec<bool>], mut list: Vec<usize>) -> Vec<usize> {
    list.sort_unstable();
    list.dedup();
    let mut out = Vec::new();
    'outer: for (a, &i) in list.iter().enumerate() {
        for (b, &j) in list.iter().enumerate() {
            if a == b {
                continue;
            }
            if contains[j][i] && (!contains[i][j] || b < a) {
                continue 'outer;
            }
        }
        out.push(i);
    }
    out
}

/// Relative-interior coverage witness: a point of `poly` in no candidate
/// cell's relative interior, when the candidates fail to tile it.
fn uncovered_in(poly: &Polytope, cells: &[Polytope], inside: &[usize]) -> Option<Point> {
    use num_traits::Zero;
    let chart = poly.chart();
    let d = poly.intrinsic_dim();
    let mut total = crate::num::Rational::zero();
    for &i in inside {
        if cells[i].intrinsic_dim() == d {
            total += cells[i].volume_in_chart(chart);
        }
    }
    if total == poly.volume_in_chart(chart) {
        // top stratum tiles; recurse on facets through a scratch checker
        let sub_cells: Vec<Polytope> = inside.iter().map(|&i| cells[i].clone()).collect();
        if sub_cells.is_empty() {
            return Some(poly.barycenter());
        }
        let scratch = Subdivision::new(
            crate::subdivision::Target::Polytope(poly.clone()),
            sub_cells,
        )
        .ok()?;
        let report = scratch.verify();
        if report.pass {
            return None;
        }
        return report.uncovered_witnesses().first().map(|p| (*p).clone());
    }
    // deficit at the top stratum: the barycenter of an uncovered piece
    let b = poly.barycenter();
    if !cells.iter().any(|c| c.contains_in_relint(&b)) {
        return Some(b);
    }
    for v in poly.vertices() {
        let mid = (&b + v).scale(&crate::num::rat(1, 2));
        if !cells.iter().any(|c| c.contains_in_relint(&mid)) {
            return Some(mid);
        }
    }
    Some(b)
}

// ---------------------------------------------------------------------------
// Gluing local evaluators over an open cover
// ---------------------------------------------------------------------------

pub type Evaluator<S> = Arc<dyn Fn(&Polytope) -> S + Send + Sync>;

/// Open boxes with one valuation evaluator per box; evaluators must agree on
/// cells inside overlaps (spot-checked during gluing).
pub struct LocalValuationCover<S> {
    pub boxes: Vec<OpenBox>,
    pub evaluators: Vec<Evaluator<S>>,
    /// Tolerance for the overlap compatibility check (ignored by exact
    /// scalars).
    pub compat_tol: f64,
}

/// Glues the local evaluators over a subordinate refinement of `base` and
/// evaluates the union of `members` (cell indices into `base`).
///
/// The result is independent of the subordinate refinement chosen and of
/// which containing box evaluates each cell; the compatibility spot-check
/// turns silent disagreement into an error.
pub fn glue<S: MeasureScalar>(
    cover: &LocalValuationCover<S>,
    base: &Subdivision,
    members: &[usize],
    seed: u64,
) -> Result<S, MeasureError> {
    let refined = refine_subordinate(base, &cover.boxes, seed).map_err(|e| match e {
        RefineError::CoverInsufficient { witness } => MeasureError::CoverInsufficient { witness },
        other => MeasureError::Refine(other),
    })?;
    let mut values = Vec::with_capacity(refined.cells().len());
    for (ci, cell) in refined.cells().iter().enumerate() {
        let holders: Vec<usize> = (0..cover.boxes.len())
            .filter(|&b| cover.boxes[b].contains_polytope(cell))
            .collect();
        debug_assert!(!holders.is_empty(), "refinement is subordinate");
        let value = (cover.evaluators[holders[0]])(cell);
        for &other in &holders[1..] {
            let v2 = (cover.evaluators[other])(cell);
            if !value.close(&v2, cover.compat_tol) {
                return Err(MeasureError::OverlapIncompatible {
                    cell: ci,
                    left: format!("{value:?}"),
                    right: format!("{v2:?}"),
                });
            }
        }
        values.push(value);
    }
    let refined = Arc::new(refined);
    let mu = Measure::extend_unchecked(refined.clone(), GeneratorTable(values))?;
    // map base members to refined members
    let mut fine_members = Vec::new();
    for &m in members {
        let region = &base.cells()[m];
        fine_members.extend(refined.cells_inside(region));
    }
    fine_members.sort_unstable();
    fine_members.dedup();
    mu.evaluate(&fine_members)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{exact_complex, exact_one, rat, rat_int, ExactComplex};
    use crate::subdivision::Target;
    use num_traits::Zero;

    fn pt(coords: &[i64]) -> Point {
        Point::from_ints(coords)
    }

    fn one() -> ExactComplex {
        exact_one()
    }

    fn segment_split() -> Arc<Subdivision> {
        let seg = |a: crate::num::Rational, b: crate::num::Rational| {
            Polytope::convex_hull(&[Point::new(vec![a]), Point::new(vec![b])]).unwrap()
        };
        let p = |a: crate::num::Rational| Polytope::convex_hull(&[Point::new(vec![a])]).unwrap();
        Arc::new(
            Subdivision::new(
                Target::Polytope(seg(rat_int(0), rat_int(1))),
                vec![
                    seg(rat_int(0), rat(1, 2)),
                    seg(rat(1, 2), rat_int(1)),
                    p(rat_int(0)),
                    p(rat(1, 2)),
                    p(rat_int(1)),
                ],
            )
            .unwrap(),
        )
    }

    /// Square fanned from the center into 4 triangles with full boundary
    /// structure.
    fn fanned_square() -> Arc<Subdivision> {
        let s =
            Polytope::convex_hull(&[pt(&[0, 0]), pt(&[2, 0]), pt(&[0, 2]), pt(&[2, 2])]).unwrap();
        Arc::new(crate::refine::cone_triangulate(&Subdivision::face_complex(&s)).unwrap())
    }

    #[test]
    fn unit_generators_on_split_segment() {
        let sub = segment_split();
        let mu = Measure::extend(sub.clone(), GeneratorTable::constant(&sub, one())).unwrap();
        // whole segment: 1 + 1 - 1 = 1
        let all: Vec<usize> = (0..sub.cells().len()).collect();
        assert_eq!(mu.evaluate(&all).unwrap(), one());
        // single generator cell
        for i in 0..sub.cells().len() {
            assert_eq!(mu.evaluate(&[i]).unwrap(), one());
        }
        // empty set
        assert!(mu.evaluate(&[]).unwrap().is_zero_value());
    }

    #[test]
    fn length_generators_give_lebesgue_measure() {
        let sub = segment_split();
        let table = GeneratorTable::from_fn(&sub, |c| {
            if c.intrinsic_dim() == 1 {
                exact_complex(c.volume_exact(), rat_int(0))
            } else {
                ExactComplex::zero()
            }
        });
        let mu = Measure::extend(sub.clone(), table).unwrap();
        let all: Vec<usize> = (0..sub.cells().len()).collect();
        assert_eq!(
            mu.evaluate(&all).unwrap(),
            exact_complex(rat_int(1), rat_int(0))
        );
        let segments: Vec<usize> = sub.strata()[1].to_vec();
        assert_eq!(
            mu.evaluate(&segments[..1]).unwrap(),
            exact_complex(rat(1, 2), rat_int(0))
        );
    }

    #[test]
    fn euler_characteristic_of_fanned_square_and_boundary() {
        let sub = fanned_square();
        let mu = Measure::extend(sub.clone(), GeneratorTable::constant(&sub, one())).unwrap();
        let all: Vec<usize> = (0..sub.cells().len()).collect();
        assert_eq!(mu.evaluate(&all).unwrap(), one());

        // boundary cycle: the 4 original edges and corners, chi = 0
        let target = match sub.target() {
            Target::Polytope(p) => p.clone(),
            _ => unreachable!(),
        };
        let boundary: Vec<usize> = (0..sub.cells().len())
            .filter(|&i| {
                let c = &sub.cells()[i];
                c.intrinsic_dim() < 2
                    && target.halfspaces()[..target.facet_count()]
                        .iter()
                        .any(|h| c.vertices().iter().all(|v| h.tight_on(v)))
            })
            .collect();
        assert!(!boundary.is_empty());
        assert!(mu.evaluate(&boundary).unwrap().is_zero_value());
    }

    #[test]
    fn evaluation_is_presentation_independent() {
        let sub = fanned_square();
        // random-ish complex generators
        let table = GeneratorTable(
            (0..sub.cells().len())
                .map(|i| exact_complex(rat(i as i64 % 7, 3), rat((i as i64 * 5) % 11, 2)))
                .collect(),
        );
        let mu = Measure::extend(sub.clone(), table).unwrap();
        let all: Vec<usize> = (0..sub.cells().len()).collect();
        let canonical = mu.evaluate(&all).unwrap();
        let raw = mu.evaluate_presentation_raw(&all).unwrap();
        assert_eq!(canonical, raw);
        // reduced presentation evaluates the same
        let reduced = crate::subdivision::reduced_decomposition(&sub, &all);
        assert_eq!(mu.evaluate(&reduced).unwrap(), canonical);
        assert_eq!(mu.evaluate_presentation_raw(&reduced).unwrap(), canonical);
    }

    #[test]
    fn full_additivity_against_atom_oracle() {
        let sub = fanned_square();
        let table = GeneratorTable(
            (0..sub.cells().len())
                .map(|i| exact_complex(rat(((i * i) % 5) as i64, 1), rat((i % 3) as i64, 4)))
                .collect(),
        );
        let mu = Measure::extend(sub.clone(), table.clone()).unwrap();

        // atom oracle: Mobius weights over the containment order
        let k = sub.cells().len();
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by_key(|&i| sub.cells()[i].intrinsic_dim());
        let mut w: Vec<ExactComplex> = vec![ExactComplex::zero(); k];
        for &i in &order {
            let mut below = ExactComplex::zero();
            for &j in &order {
                if j != i && sub.cells()[i].contains_polytope(&sub.cells()[j]) {
                    below = below.add_ref(&w[j]);
                }
            }
            w[i] = table.0[i].sub_ref(&below);
        }
        let oracle = |members: &[usize]| -> ExactComplex {
            let mut total = ExactComplex::zero();
            for j in 0..k {
                if members
                    .iter()
                    .any(|&mi| sub.cells()[mi].contains_polytope(&sub.cells()[j]))
                {
                    total = total.add_ref(&w[j]);
                }
            }
            total
        };

        // all pairs A, B drawn from a family of unions
        let families: Vec<Vec<usize>> = vec![
            (0..k).collect(),
            sub.strata()[2].to_vec(),
            sub.strata()[1].to_vec(),
            vec![sub.strata()[2][0], sub.strata()[2][1]],
            vec![sub.strata()[2][0]],
            vec![sub.strata()[1][0], sub.strata()[2][2]],
        ];
        for a in &families {
            assert_eq!(mu.evaluate(a).unwrap(), oracle(a), "oracle mismatch");
            for b in &families {
                let union = mu.union_sets(a, b);
                let inter = mu.intersect_sets(a, b);
                let lhs = mu.evaluate(&union).unwrap();
                let rhs = mu
                    .evaluate(a)
                    .unwrap()
                    .add_ref(&mu.evaluate(b).unwrap())
                    .sub_ref(&mu.evaluate(&inter).unwrap());
                assert_eq!(lhs, rhs, "additivity identity");
            }
        }
    }

    #[test]
    fn vanishing_generators_vanish_everywhere() {
        let sub = fanned_square();
        let mu =
            Measure::extend(sub.clone(), GeneratorTable::constant(&sub, ExactComplex::zero()))
                .unwrap();
        let all: Vec<usize> = (0..sub.cells().len()).collect();
        assert!(mu.evaluate(&all).unwrap().is_zero_value());
        assert!(mu.evaluate(&all[2..5]).unwrap().is_zero_value());
    }

    #[test]
    fn refinement_consistency_round_trip() {
        // coarse: fanned square; fine: its coning triangulation
        let coarse = fanned_square();
        let fine = Arc::new(crate::refine::cone_triangulate(&coarse).unwrap());
        assert!(fine.refines(&coarse).is_ok());
        let fine_table = GeneratorTable(
            (0..fine.cells().len())
                .map(|i| exact_complex(rat((i % 9) as i64, 2), rat((i % 4) as i64, 3)))
                .collect(),
        );
        let mu_fine = Measure::extend(fine.clone(), fine_table).unwrap();
        // induce coarse generators by evaluating the fine measure
        let coarse_table = GeneratorTable(
            (0..coarse.cells().len())
                .map(|i| {
                    let region = &coarse.cells()[i];
                    mu_fine.evaluate(&fine.cells_inside(region)).unwrap()
                })
                .collect(),
        );
        let mu_coarse = Measure::extend(coarse.clone(), coarse_table).unwrap();
        // agreement on the union-closure of the coarse subdivision
        let sets: Vec<Vec<usize>> = vec![
            (0..coarse.cells().len()).collect(),
            coarse.strata()[2].to_vec(),
            vec![coarse.strata()[2][0], coarse.strata()[2][3]],
            coarse.strata()[1][..3].to_vec(),
        ];
        for s in sets {
            let coarse_val = mu_coarse.evaluate(&s).unwrap();
            let mut fine_members = Vec::new();
            for &c in &s {
                fine_members.extend(fine.cells_inside(&coarse.cells()[c]));
            }
            let fine_val = mu_fine.evaluate(&fine_members).unwrap();
            assert_eq!(coarse_val, fine_val);
        }
    }

    #[test]
    fn assumption_violation_is_reported() {
        // two unit squares sharing an edge, without the edge as a cell:
        // their intersection is not a union of cells
        let a = Polytope::convex_hull(&[pt(&[0, 0]), pt(&[1, 0]), pt(&[0, 1]), pt(&[1, 1])])
            .unwrap();
        let b = Polytope::convex_hull(&[pt(&[1, 0]), pt(&[2, 0]), pt(&[1, 1]), pt(&[2, 1])])
            .unwrap();
        let sub = Arc::new(Subdivision::new(Target::SelfUnion, vec![a, b]).unwrap());
        let err = Measure::extend(sub.clone(), GeneratorTable::constant(&sub, one()));
        assert!(
            matches!(err, Err(MeasureError::IntersectionNotCellUnion { .. })),
            "{err:?}"
        );
    }

    #[test]
    fn glue_area_and_euler_over_box_cover() {
        let base = fanned_square(); // subdivides [0,2]^2
        let boxr = |lo: [(i64, i64); 2], hi: [(i64, i64); 2]| {
            OpenBox::new(
                lo.iter().map(|&(n, d)| rat(n, d)).collect(),
                hi.iter().map(|&(n, d)| rat(n, d)).collect(),
            )
        };
        let boxes = vec![
            boxr([(-1, 10), (-1, 10)], [(13, 10), (21, 10)]),
            boxr([(7, 10), (-1, 10)], [(21, 10), (21, 10)]),
        ];
        let area: Evaluator<ExactComplex> =
            Arc::new(|p: &Polytope| {
                if p.intrinsic_dim() == p.ambient_dim() {
                    exact_complex(p.volume_exact(), rat_int(0))
                } else {
                    ExactComplex::zero()
                }
            });
        let all: Vec<usize> = (0..base.cells().len()).collect();
        for seed in [1u64, 2, 3, 4, 5] {
            let cover = LocalValuationCover {
                boxes: boxes.clone(),
                evaluators: vec![area.clone(), area.clone()],
                compat_tol: 0.0,
            };
            let glued = glue(&cover, &base, &all, seed).unwrap();
            assert_eq!(glued, exact_complex(rat_int(4), rat_int(0)), "seed {seed}");
        }

        // Euler characteristic via unit generators
        let chi: Evaluator<ExactComplex> = Arc::new(|_: &Polytope| exact_one());
        let cover = LocalValuationCover {
            boxes: boxes.clone(),
            evaluators: vec![chi.clone(), chi.clone()],
            compat_tol: 0.0,
        };
        let glued = glue(&cover, &base, &all, 9).unwrap();
        assert_eq!(glued, one());

        // mismatched evaluators: area vs doubled area
        let area2: Evaluator<ExactComplex> = Arc::new(|p: &Polytope| {
            if p.intrinsic_dim() == p.ambient_dim() {
                exact_complex(&p.volume_exact() * &rat_int(2), rat_int(0))
            } else {
                ExactComplex::zero()
            }
        });
        let cover = LocalValuationCover {
            boxes,
            evaluators: vec![area, area2],
            compat_tol: 0.0,
        };
        let err = glue(&cover, &base, &all, 9);
        assert!(matches!(err, Err(MeasureError::OverlapIncompatible { .. })));
    }
}
