//! External (solid) angles of polytope faces: the normalized spherical
//! measure of the face's normal cone inside the orthogonal complement of the
//! face's affine hull. Exact arc fractions in effective dimension 2,
//! spherical excess in dimension 3, Monte Carlo with reported standard error
//! above that.

use crate::cone::{tangent_cone, Cone};
use crate::exec;
use crate::linalg::{gram_schmidt_f64, project_onto_span, rank_of_rows, Vector};
use crate::polytope::{GeometryError, Polytope};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

/// Angle value plus the Monte Carlo standard error when sampling was used.
#[derive(Clone, Copy, Debug)]
pub struct AngleEstimate {
    pub value: f64,
    pub mc_stderr: Option<f64>,
}

impl AngleEstimate {
    fn exact(value: f64) -> Self {
        AngleEstimate {
            value,
            mc_stderr: None,
        }
    }
}

pub const MC_ANGLE_SAMPLES: usize = 200_000;

/// Normalized solid angle of the normal cone of face `face` of `p`.
/// `external_angle(P, top_face) == 1`.
pub fn external_angle(p: &Polytope, face: usize) -> Result<AngleEstimate, GeometryError> {
    external_angle_with(p, face, MC_ANGLE_SAMPLES, 0x5eed)
}

pub fn external_angle_with(
    p: &Polytope,
    face: usize,
    mc_samples: usize,
    mc_seed: u64,
) -> Result<AngleEstimate, GeometryError> {
    let x = p.face_barycenter(face)?;
    let tangent = tangent_cone(p, &x)?;
    let normal = tangent.dual()?;
    Ok(solid_angle_fraction(&normal, mc_samples, mc_seed))
}

/// Fraction of directions of `span(cone)`... more precisely: the fraction of
/// the unit sphere of the cone's linear span occupied by the cone. The cone's
/// span is the orthogonal complement of the face for normal cones of faces.
pub fn solid_angle_fraction(cone: &Cone, mc_samples: usize, mc_seed: u64) -> AngleEstimate {
    // Quotient out the lineality: the directional fraction is preserved.
    let lineality = cone.lineality_space();
    let rays: Vec<Vector> = cone
        .generators
        .iter()
        .map(|g| {
            if lineality.is_empty() {
                g.clone()
            } else {
                (g - &project_onto_span(g, &lineality)).primitive()
            }
        })
        .filter(|g| !g.is_zero())
        .collect();
    let mut dedup: Vec<Vector> = Vec::new();
    for r in rays {
        if !dedup.contains(&r) {
            dedup.push(r);
        }
    }
    let m = rank_of_rows(&dedup);
    match m {
        0 => AngleEstimate::exact(1.0),
        1 => AngleEstimate::exact(0.5),
        2 => AngleEstimate::exact(planar_fraction(&dedup)),
        3 => AngleEstimate::exact(spherical_fraction(cone, &lineality)),
        _ => mc_fraction(cone, &lineality, &dedup, mc_samples, mc_seed),
    }
}

/// Pointed planar cone: fraction = (largest pairwise angle) / 2 pi.
fn planar_fraction(rays: &[Vector]) -> f64 {
    let basis = gram_schmidt_f64(rays);
    debug_assert_eq!(basis.len(), 2);
    let coords: Vec<[f64; 2]> = rays
        .iter()
        .map(|r| {
            let rf = r.to_f64();
            let a: f64 = rf.iter().zip(&basis[0]).map(|(x, y)| x * y).sum();
            let b: f64 = rf.iter().zip(&basis[1]).map(|(x, y)| x * y).sum();
            let n = (a * a + b * b).sqrt();
            [a / n, b / n]
        })
        .collect();
    let mut max_angle: f64 = 0.0;
    for i in 0..coords.len() {
        for j in (i + 1)..coords.len() {
            let dotv = coords[i][0] * coords[j][0] + coords[i][1] * coords[j][1];
            let angle = dotv.clamp(-1.0, 1.0).acos();
            max_angle = max_angle.max(angle);
        }
    }
    max_angle / (2.0 * PI)
}

/// Pointed 3-dimensional quotient cone: triangulate into simplicial cones and
/// sum spherical-triangle areas (Van Oosterom-Strackee).
fn spherical_fraction(cone: &Cone, lineality: &[Vector]) -> f64 {
    let pieces = quotient_simplicial(cone, lineality);
    let mut total = 0.0;
    for rays in &pieces {
        debug_assert_eq!(rays.len(), 3);
        let basis = gram_schmidt_f64(rays);
        let unit: Vec<[f64; 3]> = rays
            .iter()
            .map(|r| {
                let rf = r.to_f64();
                let mut c = [0.0; 3];
                for (k, b) in basis.iter().enumerate() {
                    c[k] = rf.iter().zip(b).map(|(x, y)| x * y).sum();
                }
                let n = (c[0] * c[0] + c[1] * c[1] + c[2] * c[2]).sqrt();
                [c[0] / n, c[1] / n, c[2] / n]
            })
            .collect();
        let (a, b, c) = (unit[0], unit[1], unit[2]);
        let det = a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
            + a[2] * (b[0] * c[1] - b[1] * c[0]);
        let ab: f64 = a.iter().zip(&b).map(|(x, y)| x * y).sum();
        let bc: f64 = b.iter().zip(&c).map(|(x, y)| x * y).sum();
        let ca: f64 = c.iter().zip(&a).map(|(x, y)| x * y).sum();
        let omega = 2.0 * det.abs().atan2(1.0 + ab + bc + ca);
        total += omega;
    }
    total / (4.0 * PI)
}

/// Simplicial pieces of the pointed quotient of `cone` by its lineality,
/// expressed in ambient coordinates (each piece: `quotient dim` rays).
fn quotient_simplicial(cone: &Cone, lineality: &[Vector]) -> Vec<Vec<Vector>> {
    if lineality.is_empty() {
        return cone.simplicial_cover();
    }
    // Project the cone onto the complement of the lineality and cover there.
    let projected: Vec<Vector> = cone
        .generators
        .iter()
        .map(|g| (g - &project_onto_span(g, lineality)).primitive())
        .filter(|g| !g.is_zero())
        .collect();
    let quotient = Cone::from_generators(cone.dim_ambient(), projected);
    quotient.simplicial_cover()
}

/// Monte Carlo directional fraction in the pointed quotient span.
fn mc_fraction(
    cone: &Cone,
    lineality: &[Vector],
    quotient_rays: &[Vector],
    samples: usize,
    seed: u64,
) -> AngleEstimate {
    let quotient = Cone::from_generators(cone.dim_ambient(), quotient_rays.to_vec());
    let basis = {
        let idx = crate::linalg::independent_subset(quotient_rays);
        let b: Vec<Vector> = idx.iter().map(|&i| quotient_rays[i].clone()).collect();
        gram_schmidt_f64(&b)
    };
    let _ = lineality;
    let m = basis.len();
    let n = cone.dim_ambient();
    let halfspaces: Vec<Vec<f64>> = quotient.halfspaces.iter().map(|h| h.to_f64()).collect();
    let chunk = 10_000;
    let hits = exec::sum_chunked(samples, chunk, |range| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (range.start as u64).wrapping_mul(0x9e3779b9));
        let mut count = 0.0;
        for _ in range {
            // isotropic direction in the quotient span
            let mut dir = vec![0.0; n];
            for b in &basis {
                let g: f64 = sample_gauss(&mut rng);
                for (d, bi) in dir.iter_mut().zip(b) {
                    *d += g * bi;
                }
            }
            if halfspaces
                .iter()
                .all(|h| h.iter().zip(&dir).map(|(a, d)| a * d).sum::<f64>() >= 0.0)
            {
                count += 1.0;
            }
        }
        count
    });
    let _ = m;
    let p = hits / samples as f64;
    let se = (p * (1.0 - p) / samples as f64).sqrt();
    AngleEstimate {
        value: p,
        mc_stderr: Some(se),
    }
}

/// Sequential twin used by the benchmark suite.
pub fn solid_angle_fraction_seq(cone: &Cone, samples: usize, seed: u64) -> f64 {
    let lineality = cone.lineality_space();
    let rays: Vec<Vector> = cone
        .generators
        .iter()
        .map(|g| {
            if lineality.is_empty() {
                g.clone()
            } else {
                (g - &project_onto_span(g, &lineality)).primitive()
            }
        })
        .filter(|g| !g.is_zero())
        .collect();
    let quotient = Cone::from_generators(cone.dim_ambient(), rays.clone());
    let idx = crate::linalg::independent_subset(&rays);
    let b: Vec<Vector> = idx.iter().map(|&i| rays[i].clone()).collect();
    let basis = gram_schmidt_f64(&b);
    let n = cone.dim_ambient();
    let halfspaces: Vec<Vec<f64>> = quotient.halfspaces.iter().map(|h| h.to_f64()).collect();
    let hits = exec::sum_chunked_seq(samples, 10_000, |range| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (range.start as u64).wrapping_mul(0x9e3779b9));
        let mut count = 0.0;
        for _ in range {
            let mut dir = vec![0.0; n];
            for bb in &basis {
                let g: f64 = sample_gauss(&mut rng);
                for (d, bi) in dir.iter_mut().zip(bb) {
                    *d += g * bi;
                }
            }
            if halfspaces
                .iter()
                .all(|h| h.iter().zip(&dir).map(|(a, d)| a * d).sum::<f64>() >= 0.0)
            {
                count += 1.0;
            }
        }
        count
    });
    hits / samples as f64
}

fn sample_gauss(rng: &mut ChaCha8Rng) -> f64 {
    // Box-Muller; one draw per call is fine here.
    let u1: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (2.0 * PI * u2).cos()
}

/// `V_k(P) = sum over k-faces of vol_k(F) * external_angle(F, P)`.
pub fn intrinsic_volume(p: &Polytope, k: usize) -> Result<f64, GeometryError> {
    if k > p.ambient_dim() {
        return Err(GeometryError::IndexOutOfRange(k, p.ambient_dim()));
    }
    let mut total = 0.0;
    let face_ids: Vec<usize> = p.faces_of_dim(k).map(|(i, _)| i).collect();
    for idx in face_ids {
        let vol = p.face_volume_f64(idx)?;
        let angle = external_angle(p, idx)?;
        total += vol * angle.value;
    }
    Ok(total)
}
