//! Differential forms on the flat cotangent space R^n x R^n (coordinates
//! x_1..x_n, xi_1..xi_n) and on the sphere bundle R^n x S^{n-1}. Terms are
//! wedge monomials with polynomial (or opaque callback) coefficients;
//! support is certified by an explicit base box and a fiber truncation
//! radius. The Euler-Verdier involution and exterior derivative act
//! symbolically on the polynomial data.

use serde::{Deserialize, Serialize};
use std::fmt;
use std::sync::Arc;

#[derive(Debug, thiserror::Error)]
pub enum FormError {
    #[error("coefficient is an opaque callback; the operation needs polynomial data")]
    OpaqueCoefficient,
    #[error("ambient space mismatch")]
    SpaceMismatch,
    #[error("degree mismatch: form has degree {form}, expected {expected}")]
    DegreeMismatch { form: usize, expected: usize },
    #[error("parse error: {0}")]
    Parse(String),
}

// ---------------------------------------------------------------------------
// Polynomials over f64 with exact monomial structure
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq)]
pub struct Monomial {
    pub coef: f64,
    pub powers: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Poly {
    pub nvars: usize,
    pub monomials: Vec<Monomial>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Poly {
        Poly {
            nvars,
            monomials: Vec::new(),
        }
    }

    pub fn constant(nvars: usize, c: f64) -> Poly {
        Poly {
            nvars,
            monomials: vec![Monomial {
                coef: c,
                powers: vec![0; nvars],
            }],
        }
        .canonical()
    }

    pub fn var(nvars: usize, i: usize) -> Poly {
        let mut powers = vec![0; nvars];
        powers[i] = 1;
        Poly {
            nvars,
            monomials: vec![Monomial { coef: 1.0, powers }],
        }
    }

    pub fn from_monomials(nvars: usize, monomials: Vec<Monomial>) -> Poly {
        Poly { nvars, monomials }.canonical()
    }

    fn canonical(mut self) -> Poly {
        self.monomials.sort_by(|a, b| a.powers.cmp(&b.powers));
        let mut merged: Vec<Monomial> = Vec::new();
        for m in self.monomials.drain(..) {
            if let Some(last) = merged.last_mut() {
                if last.powers == m.powers {
                    last.coef += m.coef;
                    continue;
                }
            }
            merged.push(m);
        }
        merged.retain(|m| m.coef != 0.0);
        self.monomials = merged;
        self
    }

    pub fn is_zero(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn eval(&self, point: &[f64]) -> f64 {
        debug_assert_eq!(point.len(), self.nvars);
        let mut total = 0.0;
        for m in &self.monomials {
            let mut v = m.coef;
            for (p, &x) in m.powers.iter().zip(point) {
                for _ in 0..*p {
                    v *= x;
                }
            }
            total += v;
        }
        total
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut monomials = self.monomials.clone();
        monomials.extend(other.monomials.clone());
        Poly {
            nvars: self.nvars,
            monomials,
        }
        .canonical()
    }

    pub fn scale(&self, s: f64) -> Poly {
        Poly {
            nvars: self.nvars,
            monomials: self
                .monomials
                .iter()
                .map(|m| Monomial {
                    coef: m.coef * s,
                    powers: m.powers.clone(),
                })
                .collect(),
        }
        .canonical()
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut monomials = Vec::new();
        for a in &self.monomials {
            for b in &other.monomials {
                monomials.push(Monomial {
                    coef: a.coef * b.coef,
                    powers: a
                        .powers
                        .iter()
                        .zip(&b.powers)
                        .map(|(x, y)| x + y)
                        .collect(),
                });
            }
        }
        Poly {
            nvars: self.nvars,
            monomials,
        }
        .canonical()
    }

    pub fn partial(&self, var: usize) -> Poly {
        let monomials = self
            .monomials
            .iter()
            .filter(|m| m.powers[var] > 0)
            .map(|m| {
                let mut powers = m.powers.clone();
                powers[var] -= 1;
                Monomial {
                    coef: m.coef * m.powers[var] as f64,
                    powers,
                }
            })
            .collect();
        Poly {
            nvars: self.nvars,
            monomials,
        }
        .canonical()
    }

    /// Substitutes `z -> -z` for the listed variables (sign flip by parity;
    /// exact on the float coefficients).
    pub fn negate_vars(&self, vars: &[usize]) -> Poly {
        let monomials = self
            .monomials
            .iter()
            .map(|m| {
                let parity: u32 = vars.iter().map(|&v| m.powers[v]).sum();
                Monomial {
                    coef: if parity % 2 == 0 { m.coef } else { -m.coef },
                    powers: m.powers.clone(),
                }
            })
            .collect();
        Poly {
            nvars: self.nvars,
            monomials,
        }
        .canonical()
    }

    pub fn total_degree(&self) -> usize {
        self.monomials
            .iter()
            .map(|m| m.powers.iter().sum::<u32>() as usize)
            .max()
            .unwrap_or(0)
    }
}

// ---------------------------------------------------------------------------
// Coefficients and form terms
// ---------------------------------------------------------------------------

#[derive(Clone)]
pub enum Coefficient {
    Poly(Poly),
    Callback(Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>),
}

impl fmt::Debug for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficient::Poly(p) => write!(f, "Poly({} monomials)", p.monomials.len()),
            Coefficient::Callback(_) => write!(f, "Callback"),
        }
    }
}

impl Coefficient {
    pub fn eval(&self, point: &[f64]) -> f64 {
        match self {
            Coefficient::Poly(p) => p.eval(point),
            Coefficient::Callback(f) => f(point),
        }
    }

    pub fn poly(&self) -> Option<&Poly> {
        match self {
            Coefficient::Poly(p) => Some(p),
            Coefficient::Callback(_) => None,
        }
    }

    pub fn degree(&self) -> Option<usize> {
        self.poly().map(|p| p.total_degree())
    }

    pub fn is_zero_poly(&self) -> bool {
        matches!(self, Coefficient::Poly(p) if p.is_zero())
    }
}

/// One wedge monomial `coef * dx_I ^ dxi_J` with `I`, `J` strictly
/// increasing (0-based variable indices).
#[derive(Clone, Debug)]
pub struct FormTerm {
    pub coef: Coefficient,
    pub base: Vec<usize>,
    pub fiber: Vec<usize>,
}

impl FormTerm {
    pub fn horizontal_degree(&self) -> usize {
        self.base.len()
    }

    pub fn degree(&self) -> usize {
        self.base.len() + self.fiber.len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormSpace {
    /// Forms on R^n x R^n; valuation forms have degree n.
    Cotangent,
    /// Forms on R^n x S^{n-1}; valuation forms have degree n-1.
    SphereBundle,
}

/// Properness certificate: base support box plus the fiber truncation radius
/// (sup norm) outside of which the cotangent-space form is taken to taper to
/// zero. The taper lives strictly outside every probe, so quadrature sees
/// polynomials only. The fiber box is symmetric, hence stable under the
/// fiberwise antipodal map.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SupportBox {
    pub base: Vec<[f64; 2]>,
    pub fiber_radius: f64,
}

impl SupportBox {
    pub fn cube(n: usize, half_width: f64, fiber_radius: f64) -> SupportBox {
        SupportBox {
            base: vec![[-half_width, half_width]; n],
            fiber_radius,
        }
    }

    pub fn contains_base_box(&self, lo: &[f64], hi: &[f64]) -> bool {
        self.base
            .iter()
            .zip(lo.iter().zip(hi))
            .all(|([a, b], (l, h))| *a <= *l + 1e-12 && *h <= *b + 1e-12)
    }
}

#[derive(Clone, Debug)]
pub struct DifferentialForm {
    pub space: FormSpace,
    pub n: usize,
    pub terms: Vec<FormTerm>,
    pub support: SupportBox,
}

/// Differential symbols for building wedge monomials in arbitrary order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Diff {
    Base(usize),
    Fiber(usize),
}

impl DifferentialForm {
    pub fn zero(space: FormSpace, n: usize, support: SupportBox) -> DifferentialForm {
        DifferentialForm {
            space,
            n,
            terms: Vec::new(),
            support,
        }
    }

    /// Number of coefficient variables: (x, xi) pairs for both spaces (the
    /// sphere bundle uses the fiber slot for the sphere point).
    pub fn nvars(&self) -> usize {
        2 * self.n
    }

    pub fn degree(&self) -> Option<usize> {
        self.terms.first().map(|t| t.degree())
    }

    /// Adds `coef * wedge` with the wedge given in any order; sorts into the
    /// canonical base-then-fiber order, folding the permutation sign into
    /// the coefficient. Repeated differentials annihilate the term.
    pub fn push_term(&mut self, coef: Coefficient, wedge: &[Diff]) {
        let mut order: Vec<(usize, usize)> = wedge
            .iter()
            .map(|d| match d {
                Diff::Base(i) => (0usize, *i),
                Diff::Fiber(j) => (1usize, *j),
            })
            .collect();
        // parity of the sorting permutation
        let mut sign = 1.0f64;
        let m = order.len();
        for i in 0..m {
            for j in (i + 1)..m {
                if order[j] < order[i] {
                    order.swap(i, j);
                    sign = -sign;
                }
            }
        }
        for w in order.windows(2) {
            if w[0] == w[1] {
                return; // dz ^ dz = 0
            }
        }
        let base: Vec<usize> = order.iter().filter(|(k, _)| *k == 0).map(|(_, i)| *i).collect();
        let fiber: Vec<usize> = order.iter().filter(|(k, _)| *k == 1).map(|(_, i)| *i).collect();
        let coef = match (sign < 0.0, coef) {
            (true, Coefficient::Poly(p)) => Coefficient::Poly(p.scale(-1.0)),
            (true, Coefficient::Callback(f)) => {
                Coefficient::Callback(Arc::new(move |v: &[f64]| -f(v)))
            }
            (false, c) => c,
        };
        self.terms.push(FormTerm { coef, base, fiber });
        self.merge_terms();
    }

    fn merge_terms(&mut self) {
        self.terms
            .sort_by(|a, b| a.base.cmp(&b.base).then(a.fiber.cmp(&b.fiber)));
        let mut merged: Vec<FormTerm> = Vec::new();
        for t in self.terms.drain(..) {
            if let Some(last) = merged.last_mut() {
                if last.base == t.base && last.fiber == t.fiber {
                    match (&last.coef, &t.coef) {
                        (Coefficient::Poly(a), Coefficient::Poly(b)) => {
                            last.coef = Coefficient::Poly(a.add(b));
                            continue;
                        }
                        _ => {
                            let a = last.coef.clone();
                            let b = t.coef.clone();
                            last.coef = Coefficient::Callback(Arc::new(move |v: &[f64]| {
                                a.eval(v) + b.eval(v)
                            }));
                            continue;
                        }
                    }
                }
            }
            merged.push(t);
        }
        merged.retain(|t| !t.coef.is_zero_poly());
        self.terms = merged;
    }

    pub fn add(&self, other: &DifferentialForm) -> Result<DifferentialForm, FormError> {
        if self.space != other.space || self.n != other.n {
            return Err(FormError::SpaceMismatch);
        }
        let mut out = self.clone();
        out.terms.extend(other.terms.clone());
        out.merge_terms();
        Ok(out)
    }

    pub fn scale(&self, s: f64) -> DifferentialForm {
        let mut out = self.clone();
        for t in &mut out.terms {
            t.coef = match &t.coef {
                Coefficient::Poly(p) => Coefficient::Poly(p.scale(s)),
                Coefficient::Callback(f) => {
                    let f = f.clone();
                    Coefficient::Callback(Arc::new(move |v: &[f64]| s * f(v)))
                }
            };
        }
        out.merge_terms();
        out
    }

    /// The Euler-Verdier involution `(-1)^n a*`: pulls back under the
    /// fiberwise antipode and multiplies by `(-1)^n`. Term-by-term the sign
    /// is `(-1)^(n + |fiber wedge|)` together with `xi -> -xi` in the
    /// coefficient; applying it twice is the identity.
    pub fn euler_verdier(&self) -> DifferentialForm {
        let n = self.n;
        let fiber_vars: Vec<usize> = (n..2 * n).collect();
        let mut out = self.clone();
        for t in &mut out.terms {
            let sign = if (n + t.fiber.len()) % 2 == 0 { 1.0 } else { -1.0 };
            t.coef = match &t.coef {
                Coefficient::Poly(p) => {
                    Coefficient::Poly(p.negate_vars(&fiber_vars).scale(sign))
                }
                Coefficient::Callback(f) => {
                    let f = f.clone();
                    Coefficient::Callback(Arc::new(move |v: &[f64]| {
                        let mut w = v.to_vec();
                        for c in w[n..2 * n].iter_mut() {
                            *c = -*c;
                        }
                        sign * f(&w)
                    }))
                }
            };
        }
        out.merge_terms();
        out
    }

    /// Plain fiberwise antipodal pullback `a*` (no global sign).
    pub fn antipodal_pullback(&self) -> DifferentialForm {
        let flipped = self.euler_verdier();
        if self.n % 2 == 0 {
            flipped
        } else {
            flipped.scale(-1.0)
        }
    }

    /// Exterior derivative, polynomial coefficients only.
    pub fn exterior_derivative(&self) -> Result<DifferentialForm, FormError> {
        let n = self.n;
        let mut out = DifferentialForm::zero(self.space, n, self.support.clone());
        for t in &self.terms {
            let Some(p) = t.coef.poly() else {
                return Err(FormError::OpaqueCoefficient);
            };
            for v in 0..2 * n {
                let dp = p.partial(v);
                if dp.is_zero() {
                    continue;
                }
                let mut wedge: Vec<Diff> = Vec::with_capacity(t.degree() + 1);
                wedge.push(if v < n { Diff::Base(v) } else { Diff::Fiber(v - n) });
                wedge.extend(t.base.iter().map(|&i| Diff::Base(i)));
                wedge.extend(t.fiber.iter().map(|&j| Diff::Fiber(j)));
                out.push_term(Coefficient::Poly(dp), &wedge);
            }
        }
        Ok(out)
    }

    /// Largest `i` with the form in `W_i`: the minimum horizontal degree over
    /// nonzero terms (in flat coordinates). `None` for callback coefficients.
    pub fn filtration_level(&self) -> Option<usize> {
        let mut level = self.n;
        for t in &self.terms {
            if t.coef.poly().is_none() {
                return None;
            }
            level = level.min(t.horizontal_degree());
        }
        Some(level)
    }

    /// Terms of horizontal degree exactly `i` (the graded image: a fiber
    /// (deg - i)-form tensored with a base i-form in flat coordinates).
    pub fn graded_component(&self, i: usize) -> DifferentialForm {
        DifferentialForm {
            space: self.space,
            n: self.n,
            terms: self
                .terms
                .iter()
                .filter(|t| t.horizontal_degree() == i)
                .cloned()
                .collect(),
            support: self.support.clone(),
        }
    }

    /// Evaluates the form at `(x, xi)` on an ordered frame of tangent
    /// vectors in R^{2n} (each of length 2n).
    pub fn value_on_frame(&self, point: &[f64], frame: &[Vec<f64>]) -> f64 {
        let n = self.n;
        let k = frame.len();
        let mut total = 0.0;
        for t in &self.terms {
            if t.degree() != k {
                continue;
            }
            let rows: Vec<usize> = t
                .base
                .iter()
                .copied()
                .chain(t.fiber.iter().map(|&j| n + j))
                .collect();
            let mut m: Vec<Vec<f64>> = (0..k)
                .map(|r| (0..k).map(|c| frame[c][rows[r]]).collect())
                .collect();
            let det = det_f64(&mut m);
            if det != 0.0 {
                total += t.coef.eval(point) * det;
            }
        }
        total
    }

    /// Independent route to the filtration level: the coordinate-subspace
    /// vanishing test. For every coordinate n-plane `F` spanned by base
    /// directendions `A` and fiber directions `B`, the restriction vanishes
    /// iff the `(A, B)` coefficient is zero; the level is the largest `i`
    /// such that all planes with `|B| > n - i` kill the form. Probes the
    /// coefficients at seeded sample points.
    pub fn filtration_level_coordinate_oracle(&self, samples: &[Vec<f64>]) -> usize {
        let n = self.n;
        let mut level = n;
        for t in &self.terms {
            let nonzero = samples.iter().any(|s| t.coef.eval(s).abs() > 1e-12);
            if nonzero {
                level = level.min(t.horizontal_degree());
            }
        }
        level
    }

    /// Normalized pullback of the sphere volume form to the sphere bundle:
    /// integrating it over a normal cycle computes the Gauss-map degree.
    pub fn sphere_area_form(n: usize, support: SupportBox) -> DifferentialForm {
        let area = match n {
            1 => 2.0,
            2 => 2.0 * std::f64::consts::PI,
            3 => 4.0 * std::f64::consts::PI,
            _ => {
                // 2 pi^(n/2) / Gamma(n/2)
                let mut g = if n % 2 == 0 { 1.0 } else { std::f64::consts::PI.sqrt() };
                let mut x = n as f64 / 2.0 - 1.0;
                while x > 0.0 {
                    g *= x;
                    x -= 1.0;
                }
                2.0 * std::f64::consts::PI.powf(n as f64 / 2.0) / g
            }
        };
        let mut form = DifferentialForm::zero(FormSpace::SphereBundle, n, support);
        for j in 0..n {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            let coef = Poly::var(2 * n, n + j).scale(sign / area);
            let wedge: Vec<Diff> = (0..n).filter(|&l| l != j).map(Diff::Fiber).collect();
            form.push_term(Coefficient::Poly(coef), &wedge);
        }
        form
    }

    /// Cotangent-space form whose characteristic-cycle integral is the Euler
    /// characteristic: a normalized fiber bump times the vertical volume
    /// form, signed `(-1)^n`. The bump vanishes to first order on the fiber
    /// truncation box, so the truncated integral is the genuine one.
    pub fn euler_vertical_form(n: usize, support: SupportBox) -> DifferentialForm {
        let r = support.fiber_radius;
        let one_dim = 16.0 * r.powi(5) / 15.0;
        let norm = one_dim.powi(n as i32).recip();
        let mut bump = Poly::constant(2 * n, if n % 2 == 0 { norm } else { -norm });
        for j in 0..n {
            let xi = Poly::var(2 * n, n + j);
            let factor = Poly::constant(2 * n, r * r).add(&xi.mul(&xi).scale(-1.0));
            bump = bump.mul(&factor.mul(&factor));
        }
        let mut form = DifferentialForm::zero(FormSpace::Cotangent, n, support);
        let wedge: Vec<Diff> = (0..n).map(Diff::Fiber).collect();
        form.push_term(Coefficient::Poly(bump), &wedge);
        form
    }

    /// Structural equality for polynomial forms (term-by-term).
    pub fn poly_eq(&self, other: &DifferentialForm) -> bool {
        if self.space != other.space || self.n != other.n || self.terms.len() != other.terms.len()
        {
            return false;
        }
        self.terms.iter().zip(&other.terms).all(|(a, b)| {
            a.base == b.base
                && a.fiber == b.fiber
                && match (a.coef.poly(), b.coef.poly()) {
                    (Some(p), Some(q)) => p == q,
                    _ => false,
                }
        })
    }
}

fn det_f64(m: &mut [Vec<f64>]) -> f64 {
    let n = m.len();
    if n == 0 {
        return 1.0;
    }
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

// ---------------------------------------------------------------------------
// JSON: {"ambient":"CC"|"N","n":..,"terms":[{"coef":{"poly":[{"c":..,
// "x":[..],"xi":[..]}]},"wedge":["dx1","dxi2"]}],"support_box":{...}}
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct MonomialJson {
    c: serde_json::Value,
    #[serde(default)]
    x: Vec<u32>,
    #[serde(default)]
    xi: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
struct CoefJson {
    poly: Vec<MonomialJson>,
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    coef: CoefJson,
    wedge: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct FormJson {
    ambient: String,
    n: usize,
    terms: Vec<TermJson>,
    support_box: SupportBox,
}

impl Serialize for DifferentialForm {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::Error;
        let mut terms = Vec::new();
        for t in &self.terms {
            let Some(p) = t.coef.poly() else {
                return Err(S::Error::custom("callback coefficients are not serializable"));
            };
            let monomials = p
                .monomials
                .iter()
                .map(|m| MonomialJson {
                    c: serde_json::json!(m.coef),
                    x: m.powers[..self.n].to_vec(),
                    xi: m.powers[self.n..].to_vec(),
                })
                .collect();
            let wedge = t
                .base
                .iter()
                .map(|i| format!("dx{}", i + 1))
                .chain(t.fiber.iter().map(|j| format!("dxi{}", j + 1)))
                .collect();
            terms.push(TermJson {
                coef: CoefJson { poly: monomials },
                wedge,
            });
        }
        FormJson {
            ambient: match self.space {
                FormSpace::Cotangent => "CC".into(),
                FormSpace::SphereBundle => "N".into(),
            },
            n: self.n,
            terms,
            support_box: self.support.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DifferentialForm {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = FormJson::deserialize(deserializer)?;
        let space = match raw.ambient.as_str() {
            "CC" => FormSpace::Cotangent,
            "N" => FormSpace::SphereBundle,
            other => return Err(D::Error::custom(format!("unknown ambient {other:?}"))),
        };
        let n = raw.n;
        let mut form = DifferentialForm::zero(space, n, raw.support_box);
        for t in raw.terms {
            let mut monomials = Vec::new();
            for m in t.coef.poly {
                let c = match &m.c {
                    serde_json::Value::Number(v) => v.as_f64().unwrap_or(f64::NAN),
                    serde_json::Value::String(s) => crate::num::parse_rational(s)
                        .map(|q| crate::num::rational_to_f64(&q))
                        .map_err(D::Error::custom)?,
                    other => {
                        return Err(D::Error::custom(format!("bad coefficient {other:?}")))
                    }
                };
                let mut powers = vec![0u32; 2 * n];
                for (i, p) in m.x.iter().enumerate() {
                    if i >= n {
                        return Err(D::Error::custom("x powers exceed dimension"));
                    }
                    powers[i] = *p;
                }
                for (j, p) in m.xi.iter().enumerate() {
                    if j >= n {
                        return Err(D::Error::custom("xi powers exceed dimension"));
                    }
                    powers[n + j] = *p;
                }
                monomials.push(Monomial { coef: c, powers });
            }
            let mut wedge = Vec::new();
            for w in &t.wedge {
                if let Some(i) = w.strip_prefix("dxi") {
                    let i: usize = i.parse().map_err(|_| D::Error::custom("bad wedge"))?;
                    wedge.push(Diff::Fiber(i - 1));
                } else if let Some(i) = w.strip_prefix("dx") {
                    let i: usize = i.parse().map_err(|_| D::Error::custom("bad wedge"))?;
                    wedge.push(Diff::Base(i - 1));
                } else {
                    return Err(D::Error::custom(format!("unknown differential {w:?}")));
                }
            }
            form.push_term(Coefficient::Poly(Poly::from_monomials(2 * n, monomials)), &wedge);
        }
        Ok(form)
    }
}
