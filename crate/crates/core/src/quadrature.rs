//! Gauss-Jacobi rules on `[0, 1]` (Golub-Welsch) and their Duffy-collapsed
//! tensor product on the unit triangle.

use crate::linalg::{sym_eig, LinalgError, SymMatrix};
pub use crate::moments::beta_mass;
use crate::moments::{DomainError, TriangleWeightParams};
use crate::poly::Poly2;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum QuadratureError {
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// One-dimensional rule for `integral_0^1 f(x) x^a (1-x)^b dx`.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussJacobiRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub a: f64,
    pub b: f64,
}

impl GaussJacobiRule {
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Monic recurrence `p_{k+1} = (x - diag_k) p_k - offdiag_sq_k p_{k-1}` for
/// the weight `x^a (1-x)^b` on `[0, 1]`.
fn jacobi_recurrence(n: usize, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
    // Standard interval [-1, 1] with weight (1-t)^al (1+t)^be, t = 2x - 1.
    let (al, be) = (b, a);
    let s = al + be;
    let mut diag = Vec::with_capacity(n);
    let mut off_sq = vec![0.0; n];
    for (k, off) in off_sq.iter_mut().enumerate() {
        let kf = k as f64;
        let t = if k == 0 {
            (be - al) / (s + 2.0)
        } else {
            (be * be - al * al) / ((2.0 * kf + s) * (2.0 * kf + s + 2.0))
        };
        diag.push(0.5 * (1.0 + t));
        if k >= 1 {
            let v = if k == 1 {
                4.0 * (1.0 + al) * (1.0 + be) / ((2.0 + s).powi(2) * (3.0 + s))
            } else {
                4.0 * kf * (kf + al) * (kf + be) * (kf + s)
                    / ((2.0 * kf + s).powi(2) * (2.0 * kf + s + 1.0) * (2.0 * kf + s - 1.0))
            };
            *off = 0.25 * v;
        }
    }
    (diag, off_sq)
}

/// `n`-point Gauss-Jacobi rule on `[0, 1]` for the weight `x^a (1-x)^b`,
/// exact for polynomials of degree `<= 2n - 1`.
///
/// Nodes come from the eigenvalues of the Jacobi matrix and are then polished
/// by Newton steps on the recurrence; weights use the Christoffel sum.
pub fn gauss_jacobi(n: usize, a: f64, b: f64) -> Result<GaussJacobiRule, QuadratureError> {
    for (name, v) in [("a", a), ("b", b)] {
        if v.is_nan() || v <= -1.0 {
            return Err(DomainError::Exponent { name, value: v }.into());
        }
    }
    if n == 0 {
        return Err(DomainError::TooSmall {
            what: "number of nodes",
            min: 1,
            value: n,
        }
        .into());
    }
    let (diag, off_sq) = jacobi_recurrence(n, a, b);
    let jac = SymMatrix::from_upper(n, |i, j| {
        if i == j {
            diag[i]
        } else if j == i + 1 {
            off_sq[j].sqrt()
        } else {
            0.0
        }
    });
    let eig = sym_eig(&jac)?;
    let mass = beta_mass(a, b);

    let eval = |x: f64| {
        // (p_n(x), p_n'(x), sum_k p_k(x)^2 / ||p_k||^2)
        let (mut p_prev, mut p) = (0.0, 1.0);
        let (mut d_prev, mut d) = (0.0, 0.0);
        let mut norm = 1.0;
        let mut christoffel = 1.0;
        for k in 0..n {
            let p_next = (x - diag[k]) * p - off_sq[k] * p_prev;
            let d_next = p + (x - diag[k]) * d - off_sq[k] * d_prev;
            p_prev = p;
            p = p_next;
            d_prev = d;
            d = d_next;
            if k + 1 < n {
                norm *= off_sq[k + 1];
                christoffel += p * p / norm;
            }
        }
        (p, d, christoffel)
    };

    let mut nodes = eig.values.clone();
    let mut weights = Vec::with_capacity(n);
    for x in nodes.iter_mut() {
        for _ in 0..3 {
            let (p, d, _) = eval(*x);
            if d == 0.0 {
                break;
            }
            let step = p / d;
            *x -= step;
            if step.abs() <= 1e-17 {
                break;
            }
        }
        let (_, _, christoffel) = eval(*x);
        weights.push(mass / christoffel);
    }
    Ok(GaussJacobiRule {
        nodes,
        weights,
        a,
        b,
    })
}

/// Cubature rule for `integral_T f rho` on the unit triangle.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<(f64, f64)>,
    pub weights: Vec<f64>,
    /// Guaranteed total degree of polynomial exactness.
    pub exactness_degree: u32,
}

impl QuadratureRule {
    pub fn integrate(&self, f: impl Fn(f64, f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&(x1, x2), &w)| w * f(x1, x2))
            .sum()
    }

    pub fn integrate_poly<T: Scalar>(&self, q: &Poly2<T>) -> f64 {
        self.integrate(|x1, x2| q.eval(x1, x2))
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// Duffy-collapsed tensor rule: `x1 = u`, `x2 = (1-u) v` turns
/// `rho dx` into `u^alpha (1-u)^(beta+gamma+1) v^beta (1-v)^gamma du dv`,
/// integrated by `gauss_jacobi(n, alpha, beta+gamma+1)` times
/// `gauss_jacobi(n, beta, gamma)`.
pub fn triangle_rule<T: Scalar>(
    n: usize,
    p: &TriangleWeightParams<T>,
) -> Result<QuadratureRule, QuadratureError> {
    let p = p.to_f64();
    let (a, b, c) = (*p.alpha(), *p.beta(), *p.gamma());
    let ru = gauss_jacobi(n, a, b + c + 1.0)?;
    let rv = gauss_jacobi(n, b, c)?;
    let mut nodes = Vec::with_capacity(n * n);
    let mut weights = Vec::with_capacity(n * n);
    for (&u, &wu) in ru.nodes.iter().zip(&ru.weights) {
        for (&v, &wv) in rv.nodes.iter().zip(&rv.weights) {
            nodes.push((u, (1.0 - u) * v));
            weights.push(wu * wv);
        }
    }
    Ok(QuadratureRule {
        nodes,
        weights,
        exactness_degree: n as u32 - 1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moments::dirichlet_moment;
    use crate::poly::Monomial;

    #[test]
    fn one_point_rules() {
        let r = gauss_jacobi(1, 0.0, 0.0).unwrap();
        assert!((r.nodes[0] - 0.5).abs() < 1e-16);
        assert!((r.weights[0] - 1.0).abs() < 1e-15);

        let (a, b) = (0.7, -0.3);
        let r = gauss_jacobi(1, a, b).unwrap();
        assert!((r.nodes[0] - (a + 1.0) / (a + b + 2.0)).abs() < 1e-15);
        assert!((r.weights[0] - beta_mass(a, b)).abs() < 1e-15);
    }

    #[test]
    fn two_point_legendre() {
        let r = gauss_jacobi(2, 0.0, 0.0).unwrap();
        let s3 = 3f64.sqrt();
        assert!((r.nodes[0] - (3.0 - s3) / 6.0).abs() < 1e-15);
        assert!((r.nodes[1] - (3.0 + s3) / 6.0).abs() < 1e-15);
        assert!((r.weights[0] - 0.5).abs() < 1e-15 && (r.weights[1] - 0.5).abs() < 1e-15);
        // degree-3 exactness
        assert!((r.integrate(|x| x * x * x) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn exact_to_degree_2n_minus_1() {
        for &(a, b) in &[(0.0, 0.0), (-0.5, 0.5), (2.0, 3.5), (-0.9, -0.9)] {
            let n = 6;
            let r = gauss_jacobi(n, a, b).unwrap();
            assert!(
                (r.weights.iter().sum::<f64>() - beta_mass(a, b)).abs() < 1e-13 * beta_mass(a, b)
            );
            for k in 0..2 * n {
                let exact = beta_mass(a + k as f64, b);
                let got = r.integrate(|x| x.powi(k as i32));
                assert!(
                    (got - exact).abs() <= 1e-13 * exact,
                    "a={a} b={b} k={k} rel={}",
                    (got - exact).abs() / exact
                );
            }
        }
    }

    #[test]
    fn beta_mass_values() {
        assert_eq!(beta_mass(0.0, 1.0), 0.5);
        assert!((beta_mass(2.0, 3.0) - 1.0 / 60.0).abs() < 1e-17);
        let half = std::f64::consts::PI / 8.0;
        assert!((beta_mass(0.5, 0.5) - half).abs() < 1e-15);
        assert!((beta_mass(-0.5, -0.5) - std::f64::consts::PI).abs() < 1e-14);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(gauss_jacobi(3, -1.0, 0.0).is_err());
        assert!(gauss_jacobi(3, 0.0, -2.0).is_err());
        assert!(gauss_jacobi(0, 0.0, 0.0).is_err());
    }

    #[test]
    fn single_node_triangle_rule() {
        let p = TriangleWeightParams::<f64>::lebesgue();
        let r = triangle_rule(1, &p).unwrap();
        assert_eq!(r.len(), 1);
        let (x1, x2) = r.nodes[0];
        assert!((x1 - 1.0 / 3.0).abs() < 1e-15 && (x2 - 1.0 / 3.0).abs() < 1e-15);
        assert!((r.weights[0] - 0.5).abs() < 1e-15);
        assert!((r.integrate(|x, _| x) - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn nodes_strictly_interior() {
        let p = TriangleWeightParams::new(2.0, -0.5, 0.25).unwrap();
        let r = triangle_rule(10, &p).unwrap();
        for (&(x1, x2), &w) in r.nodes.iter().zip(&r.weights) {
            assert!(x1 > 0.0 && x2 > 0.0 && x1 + x2 < 1.0);
            assert!(w > 0.0);
        }
        assert!((r.integrate(|_, _| 1.0) - p.total_mass()).abs() < 1e-14 * p.total_mass());
    }

    #[test]
    fn degree_seven_with_eight_points() {
        let p = TriangleWeightParams::new(0.5, -0.5, 1.5).unwrap();
        let r = triangle_rule(8, &p).unwrap();
        for m in Monomial::up_to(7) {
            let exact = dirichlet_moment(m.x1, m.x2, &p);
            let got = r.integrate(|x, y| x.powi(m.x1 as i32) * y.powi(m.x2 as i32));
            assert!((got - exact).abs() <= 1e-13 * exact, "{m:?}");
        }
    }
}
