//! Gauss-Legendre tensor quadrature on simplex products. Nodes are computed
//! once per order by Newton iteration on the Legendre recurrence and cached.

use std::collections::HashMap;
use std::sync::OnceLock;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scheme {
    /// Tensor Gauss-Legendre over Duffy-mapped simplices.
    GaussLegendreTensor,
}

#[derive(Clone, Copy, Debug)]
pub struct QuadratureRule {
    /// Points per axis.
    pub order: usize,
    pub scheme: Scheme,
    /// Tolerance target reported alongside results; not used to adapt.
    pub tol: f64,
}

impl Default for QuadratureRule {
    fn default() -> Self {
        QuadratureRule {
            order: 16,
            scheme: Scheme::GaussLegendreTensor,
            tol: 1e-8,
        }
    }
}

impl QuadratureRule {
    pub fn with_order(order: usize) -> Self {
        QuadratureRule {
            order,
            ..Default::default()
        }
    }

    /// Order sufficient to integrate a univariate polynomial of degree `deg`
    /// exactly, capped by the configured order from below (never lowers the
    /// result's accuracy: Gauss of order m is exact for degree 2m-1).
    pub fn order_for_degree(&self, deg: usize) -> usize {
        let needed = deg / 2 + 1;
        needed.max(2).min(self.order.max(2))
    }
}

/// Nodes and weights on [0, 1].
pub fn gauss_legendre_unit(order: usize) -> &'static (Vec<f64>, Vec<f64>) {
    static CACHE: OnceLock<std::sync::Mutex<HashMap<usize, &'static (Vec<f64>, Vec<f64>)>>> =
        OnceLock::new();
    let cache = CACHE.get_or_init(|| std::sync::Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap();
    if let Some(&r) = guard.get(&order) {
        return r;
    }
    let leaked: &'static (Vec<f64>, Vec<f64>) = Box::leak(Box::new(compute_gl(order)));
    guard.insert(order, leaked);
    leaked
}

fn compute_gl(order: usize) -> (Vec<f64>, Vec<f64>) {
    let n = order.max(1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n {
        // Chebyshev initial guess on [-1, 1]
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre(n, x);
        nodes[i] = 0.5 * (1.0 - x); // map to [0,1], ascending later
        weights[i] = 1.0 / ((1.0 - x * x) * dp * dp); // already halved: 2/((1-x^2)dp^2) / 2
    }
    // sort ascending
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| nodes[a].partial_cmp(&nodes[b]).unwrap());
    (
        idx.iter().map(|&i| nodes[i]).collect(),
        idx.iter().map(|&i| weights[i]).collect(),
    )
}

fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let pk = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = pk;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

/// Quadrature points and weights for the standard k-simplex
/// `{u : u_i >= 0, sum u <= 1}` via the Duffy (collapsed) transform. The
/// transform is polynomial, so polynomial integrands stay polynomial and the
/// tensor rule is exact at sufficient order. `k = 0` yields one point.
pub fn simplex_points(k: usize, order: usize) -> Vec<(Vec<f64>, f64)> {
    if k == 0 {
        return vec![(Vec::new(), 1.0)];
    }
    let (nodes, weights) = gauss_legendre_unit(order);
    let mut out = Vec::with_capacity(order.pow(k as u32));
    let mut idx = vec![0usize; k];
    loop {
        // Duffy: u_1 = t_1, u_2 = t_2 (1 - t_1), u_3 = t_3 (1 - t_1)(1 - t_2)...
        let mut point = Vec::with_capacity(k);
        let mut weight = 1.0;
        let mut remaining = 1.0;
        for j in 0..k {
            let t = nodes[idx[j]];
            let u = t * remaining;
            point.push(u);
            weight *= weights[idx[j]] * remaining;
            remaining *= 1.0 - t;
        }
        out.push((point, weight));
        // advance counter
        let mut j = 0;
        loop {
            if j == k {
                return out;
            }
            idx[j] += 1;
            if idx[j] < order.max(1) {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
    }
}
