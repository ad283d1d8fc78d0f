//! Spectral Galerkin discretization of `L u = -(1/rho) div(rho Phi grad u) + c u`
//! with `c = 2 + x1^2 + x2^2` on the unit triangle.
//!
//! The basis is the Gram-Schmidt orthogonalization of the graded-lex monomials
//! against the exact moment functional. Matrix entries are first formed in the
//! scalar field `T` and only converted to `f64` at the end, so in rational mode
//! every entry carries a single rounding.

use thiserror::Error;

use crate::linalg::{
    cholesky, dot, generalized_sym_eig, ldl_unit_inverse, norm2, sym_eig, LinalgError, Matrix,
    SymMatrix,
};
use crate::moments::{MomentTable, TriangleWeightParams};
use crate::poly::{Axis, MatPoly2, Monomial, Poly2};
use crate::quadrature::{triangle_rule, QuadratureError};
use crate::scalar::{signed_sqrt_ratio, Scalar};
use crate::weight::{normal_flux, triangle_psi, DomainEdges, PearsonData, WeightSpec};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GalerkinError {
    #[error("basis factorization failed at pivot {pivot} (value {value:e})")]
    Factorization { pivot: usize, value: f64 },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

/// The potential `c(x) = 2 + x1^2 + x2^2`.
pub fn potential<T: Scalar>() -> Poly2<T> {
    Poly2::from_terms([
        (Monomial::ONE, T::from_i64(2)),
        (Monomial::new(2, 0), T::one()),
        (Monomial::new(0, 2), T::one()),
    ])
}

/// Orthonormal basis of polynomials of total degree `<= degree` in
/// `L^2(T, rho)`.
#[derive(Clone, Debug)]
pub struct BasisSet<T: Scalar = crate::scalar::Rational> {
    degree: u32,
    table: MomentTable<T>,
    transform: Vec<Vec<T>>,
    pivots: Vec<T>,
    monic: Vec<Poly2<T>>,
    functions: Vec<Poly2<f64>>,
}

/// `b_k = p_k / sqrt(mu00 * d_k)` where `p_k` is the `k`-th orthogonalized
/// monomial and `d_k = <p_k, p_k> / mu00`.
pub fn build_basis<T: Scalar>(
    degree: u32,
    p: &TriangleWeightParams<T>,
) -> Result<BasisSet<T>, GalerkinError> {
    // Assembly needs moments of (basis * basis * c) and (grad * Phi * grad).
    let table = MomentTable::new(p, 2 * degree + 2);
    let monos: Vec<Monomial> = Monomial::up_to(degree).collect();
    let gram: Vec<Vec<T>> = monos
        .iter()
        .map(|a| {
            monos
                .iter()
                .map(|b| {
                    let ab = *a * *b;
                    table.ratio(ab.x1, ab.x2)
                })
                .collect()
        })
        .collect();
    let (transform, pivots) = ldl_unit_inverse(&gram).map_err(|e| match e {
        LinalgError::NotSpd { pivot, value } => GalerkinError::Factorization { pivot, value },
        other => GalerkinError::Linalg(other),
    })?;
    let mass = table.mass();
    let monic: Vec<Poly2<T>> = transform
        .iter()
        .map(|row| Poly2::from_terms(row.iter().cloned().enumerate().map(|(j, c)| (monos[j], c))))
        .collect();
    let functions = monic
        .iter()
        .zip(&pivots)
        .map(|(q, d)| q.to_f64().scale(&(1.0 / (mass * d.to_f64()).sqrt())))
        .collect();
    Ok(BasisSet {
        degree,
        table,
        transform,
        pivots,
        monic,
        functions,
    })
}

impl<T: Scalar> BasisSet<T> {
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    pub fn params(&self) -> &TriangleWeightParams<T> {
        self.table.params()
    }

    pub fn moments(&self) -> &MomentTable<T> {
        &self.table
    }

    /// Orthonormal functions in monomial form.
    pub fn functions(&self) -> &[Poly2<f64>] {
        &self.functions
    }

    /// Orthogonal, monic-in-leading-monomial polynomials in the field `T`.
    pub fn orthogonal(&self) -> &[Poly2<T>] {
        &self.monic
    }

    /// `<p_k, p_k> / mu00` for each orthogonal polynomial.
    pub fn pivots(&self) -> &[T] {
        &self.pivots
    }

    /// Lower-triangular `B` with `b_k = sum_j B[k][j] m_j` over graded-lex
    /// monomials `m_j`; the diagonal is positive.
    pub fn transform(&self) -> Matrix {
        let n = self.len();
        let mass = self.table.mass();
        let mut out = Matrix::zeros(n, n);
        for (k, (row, d)) in self.transform.iter().zip(&self.pivots).enumerate() {
            let s = 1.0 / (mass * d.to_f64()).sqrt();
            for (j, c) in row.iter().enumerate() {
                out[(k, j)] = c.to_f64() * s;
            }
        }
        out
    }

    /// `sum_k coeffs[k] b_k` in monomial form.
    pub fn combine(&self, coeffs: &[f64]) -> Poly2<f64> {
        let mut out = Poly2::zero();
        for (c, b) in coeffs.iter().zip(&self.functions) {
            out = &out + &b.scale(c);
        }
        out
    }

    /// Normalize the exact matrix `C X C^t` of orthogonal-polynomial inner
    /// products into the orthonormal basis.
    fn normalize(&self, x: &[Vec<T>]) -> SymMatrix {
        SymMatrix::from_upper(self.len(), |i, j| {
            let d = self.pivots[i].clone() * self.pivots[j].clone();
            signed_sqrt_ratio(&x[i][j], &d)
        })
    }

    /// `C X C^t` for the symmetric monomial matrix `X` (upper triangle used).
    fn congruence(&self, x: &[Vec<T>]) -> Vec<Vec<T>> {
        let n = self.len();
        // Y = X C^t: Y[a][j] = sum_{b <= j} X[a][b] C[j][b]
        let y: Vec<Vec<T>> = (0..n)
            .map(|a| {
                (0..n)
                    .map(|j| {
                        let mut acc = T::zero();
                        for (b, c) in self.transform[j].iter().enumerate() {
                            if !c.is_zero() {
                                let xab = if a <= b { &x[a][b] } else { &x[b][a] };
                                if !xab.is_zero() {
                                    acc = acc + xab.clone() * c.clone();
                                }
                            }
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        // Z = C Y, upper triangle only.
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if j < i {
                            return T::zero();
                        }
                        let mut acc = T::zero();
                        for (a, c) in self.transform[i].iter().enumerate() {
                            if !c.is_zero() && !y[a][j].is_zero() {
                                acc = acc + c.clone() * y[a][j].clone();
                            }
                        }
                        acc
                    })
                    .collect()
            })
            .collect()
    }

    /// Orthonormal-basis matrix of `(u, v) -> integral form(u, v) rho`, where
    /// `form` maps a pair of monomials to a polynomial integrand.
    fn assemble_form(&self, form: impl Fn(Monomial, Monomial) -> Poly2<T>) -> SymMatrix {
        let monos: Vec<Monomial> = Monomial::up_to(self.degree).collect();
        let n = monos.len();
        let x: Vec<Vec<T>> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if j < i {
                            T::zero()
                        } else {
                            self.table.integrate_ratio(&form(monos[i], monos[j]))
                        }
                    })
                    .collect()
            })
            .collect();
        self.normalize(&self.congruence(&x))
    }

    /// `<f, b_k>_rho` for every basis function.
    pub fn project(&self, f: &Poly2<T>) -> Vec<f64> {
        let root = self.table.mass().sqrt();
        self.project_scaled(f).iter().map(|r| r * root).collect()
    }

    /// `<f, b_k>_rho / sqrt(mu00)` for every basis function, exactly
    /// rounded from the field `T`.
    fn project_scaled(&self, f: &Poly2<T>) -> Vec<f64> {
        self.monic
            .iter()
            .zip(&self.pivots)
            .map(|(q, d)| signed_sqrt_ratio(&self.table.integrate_ratio(&(f * q)), d))
            .collect()
    }
}

fn mono_poly<T: Scalar>(m: Monomial) -> Poly2<T> {
    Poly2::term(T::one(), m)
}

fn mono_gradient<T: Scalar>(m: Monomial) -> [Poly2<T>; 2] {
    mono_poly::<T>(m).gradient()
}

/// Mass, stiffness and potential matrices in an orthonormal basis.
#[derive(Clone, Debug, PartialEq)]
pub struct GramSet {
    pub m: SymMatrix,
    pub s: SymMatrix,
    pub v: SymMatrix,
}

impl GramSet {
    /// Matrix of the bilinear form `a = S + V`.
    pub fn a(&self) -> SymMatrix {
        self.s.add(&self.v)
    }

    pub fn order(&self) -> usize {
        self.m.order()
    }
}

/// Assemble `M`, `S` and `V` for the diffusion matrix `phi`.
pub fn assemble<T: Scalar>(basis: &BasisSet<T>, phi: &MatPoly2<T>) -> GramSet {
    let c = potential::<T>();
    let m = basis.assemble_form(|a, b| mono_poly(a * b));
    let v = basis.assemble_form(|a, b| c.mul_monomial(&T::one(), a * b));
    let s = basis.assemble_form(|a, b| phi.quadratic_form(&mono_gradient(a), &mono_gradient(b)));
    GramSet { m, s, v }
}

/// The same three matrices in the plain monomial basis (not orthonormal),
/// integrated against `rho` including the total mass.
pub fn assemble_monomial<T: Scalar>(
    degree: u32,
    phi: &MatPoly2<T>,
    p: &TriangleWeightParams<T>,
) -> GramSet {
    let table = MomentTable::new(p, 2 * degree + 2);
    let monos: Vec<Monomial> = Monomial::up_to(degree).collect();
    let c = potential::<T>();
    let build = |form: &dyn Fn(Monomial, Monomial) -> Poly2<T>| {
        SymMatrix::from_upper(monos.len(), |i, j| {
            table.integrate(&form(monos[i], monos[j]))
        })
    };
    GramSet {
        m: build(&|a, b| mono_poly(a * b)),
        s: build(&|a, b| phi.quadratic_form(&mono_gradient(a), &mono_gradient(b))),
        v: build(&|a, b| c.mul_monomial(&T::one(), a * b)),
    }
}

/// `(integral of (grad v)^t Phi grad u rho) + (integral of c u v rho)`.
pub fn bilinear_form<T: Scalar>(
    u: &Poly2<T>,
    v: &Poly2<T>,
    phi: &MatPoly2<T>,
    p: &TriangleWeightParams<T>,
) -> f64 {
    let deg = u.degree() + v.degree() + phi.degree().max(2);
    let table = MomentTable::new(p, deg);
    let grad = phi.quadratic_form(&v.gradient(), &u.gradient());
    let pot = &(&potential::<T>() * u) * v;
    table.integrate(&(&grad + &pot))
}

/// `sqrt(integral of u^2 rho + integral of (grad u)^t Phi grad u rho)`.
pub fn sobolev_norm<T: Scalar>(
    u: &Poly2<T>,
    phi: &MatPoly2<T>,
    p: &TriangleWeightParams<T>,
) -> f64 {
    let g = u.gradient();
    let integrand = &(u * u) + &phi.quadratic_form(&g, &g);
    let table = MomentTable::new(p, integrand.degree());
    table.integrate(&integrand).max(0.0).sqrt()
}

/// `-sum_ij Phi_ij d_i d_j u - psi . grad u + c u` for a general `phi` with
/// Pearson data `pearson`.
pub fn apply_operator<T: Scalar>(
    u: &Poly2<T>,
    phi: &MatPoly2<T>,
    pearson: &PearsonData<T>,
) -> Poly2<T> {
    let g = u.gradient();
    let mut out = &potential::<T>() * u;
    for a in Axis::BOTH {
        out = &out - &(&pearson.psi[a.index()] * &g[a.index()]);
        for b in Axis::BOTH {
            out = &out - &(phi.get(a.index(), b.index()) * &g[a.index()].diff(b));
        }
    }
    out
}

/// The generalized Helmholtz operator for the triangle weight.
pub fn apply_l<T: Scalar>(u: &Poly2<T>, p: &TriangleWeightParams<T>) -> Poly2<T> {
    apply_operator(u, &MatPoly2::triangle(), &triangle_psi(p))
}

/// `q1 q2 ... (1/rho) div(rho w)` as a polynomial, computed from the weight
/// factors directly: `D div w + w . (D grad rho / rho)`.
pub fn cleared_divergence<T: Scalar>(w: &[Poly2<T>; 2], weight: &WeightSpec<T>) -> Poly2<T> {
    let d = weight.denominator();
    let n = weight.log_gradient_numerator();
    let div = &w[0].diff(Axis::X1) + &w[1].diff(Axis::X2);
    &(&d * &div) + &(&(&w[0] * &n[0]) + &(&w[1] * &n[1]))
}

/// 1-based index of the first edge on which the flux `(Phi grad u) . n` is not
/// divisible by the edge form.
pub fn flux_check<T: Scalar>(
    u: &Poly2<T>,
    phi: &MatPoly2<T>,
    edges: &DomainEdges<T>,
) -> Result<(), usize> {
    let g = u.gradient();
    for (k, e) in edges.edges().iter().enumerate() {
        if normal_flux(phi, &g, e).div_exact(&e.form).is_err() {
            return Err(k + 1);
        }
    }
    Ok(())
}

/// Galerkin approximation of the weak solution of `L u = f`.
#[derive(Clone, Debug, PartialEq)]
pub struct WeakSolution {
    pub degree: u32,
    /// Coefficients in the orthonormal basis.
    pub coeffs: Vec<f64>,
    /// The solution in monomial form.
    pub solution: Poly2<f64>,
}

/// Solve `(S + V) c = r` with `r_k = <f, b_k>_rho` for a basis and assembled
/// matrices of the triangle problem.
pub fn solve_weak_with<T: Scalar>(
    basis: &BasisSet<T>,
    gram: &GramSet,
    f: &Poly2<T>,
) -> Result<WeakSolution, GalerkinError> {
    let chol = cholesky(&gram.a())?;
    // Solve with r / sqrt(mu00), then rescale, so the monomial form never
    // touches the floating total mass.
    let scaled = chol.solve(&basis.project_scaled(f))?;
    let mut solution = Poly2::zero();
    for (c, (q, d)) in scaled.iter().zip(basis.monic.iter().zip(&basis.pivots)) {
        let s = c / d.to_f64().sqrt();
        solution = &solution + &q.to_f64().scale(&s);
    }
    let root = basis.table.mass().sqrt();
    Ok(WeakSolution {
        degree: basis.degree,
        coeffs: scaled.iter().map(|c| c * root).collect(),
        solution,
    })
}

/// Weak solution of `L u = f` on polynomials of degree `<= degree`.
pub fn solve_weak<T: Scalar>(
    f: &Poly2<T>,
    degree: u32,
    p: &TriangleWeightParams<T>,
) -> Result<WeakSolution, GalerkinError> {
    let basis = build_basis(degree, p)?;
    let gram = assemble(&basis, &MatPoly2::triangle());
    solve_weak_with(&basis, &gram, f)
}

/// Weak solution for a general right-hand side; `<f, b_k>` is approximated
/// by the Duffy rule with `degree + 4` points per direction.
pub fn solve_weak_fn<T: Scalar>(
    f: impl Fn(f64, f64) -> f64,
    degree: u32,
    p: &TriangleWeightParams<T>,
) -> Result<WeakSolution, GalerkinError> {
    let basis = build_basis(degree, p)?;
    let gram = assemble(&basis, &MatPoly2::triangle());
    let rule = triangle_rule(degree as usize + 4, p)?;
    let values: Vec<f64> = rule.nodes.iter().map(|&(x1, x2)| f(x1, x2)).collect();
    let rhs: Vec<f64> = basis
        .functions
        .iter()
        .map(|b| {
            rule.nodes
                .iter()
                .zip(&rule.weights)
                .zip(&values)
                .map(|((&(x1, x2), w), fv)| w * fv * b.eval(x1, x2))
                .sum()
        })
        .collect();
    let coeffs = cholesky(&gram.a())?.solve(&rhs)?;
    Ok(WeakSolution {
        degree,
        solution: basis.combine(&coeffs),
        coeffs,
    })
}

/// Ritz values and vectors of `(S + V) q = nu M q`.
#[derive(Clone, Debug, PartialEq)]
pub struct EigResult {
    pub degree: u32,
    /// Ascending.
    pub values: Vec<f64>,
    /// Column `k` holds the coefficients of the `k`-th eigenfunction.
    pub vectors: Matrix,
}

impl EigResult {
    /// Eigenvalues of `T = L^{-1}` in descending order.
    pub fn reciprocals(&self) -> Vec<f64> {
        self.values.iter().map(|v| 1.0 / v).collect()
    }

    pub fn vector(&self, k: usize) -> Vec<f64> {
        self.vectors.column(k)
    }

    pub fn eigenfunction<T: Scalar>(&self, basis: &BasisSet<T>, k: usize) -> Poly2<f64> {
        basis.combine(&self.vector(k))
    }

    /// `max_k ||(S+V) q_k - nu_k M q_k|| / ||q_k||`.
    pub fn max_residual(&self, gram: &GramSet) -> f64 {
        let a = gram.a();
        (0..self.values.len())
            .map(|k| {
                let q = self.vector(k);
                let aq = a.mul_vec(&q);
                let mq = gram.m.mul_vec(&q);
                let r: Vec<f64> = aq
                    .iter()
                    .zip(&mq)
                    .map(|(x, y)| x - self.values[k] * y)
                    .collect();
                norm2(&r) / norm2(&q)
            })
            .fold(0.0, f64::max)
    }

    /// `max_ij |q_i^t M q_j - delta_ij|`.
    pub fn orthogonality_defect(&self, m: &SymMatrix) -> f64 {
        let n = self.values.len();
        let mq: Vec<Vec<f64>> = (0..n).map(|k| m.mul_vec(&self.vector(k))).collect();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            let qi = self.vector(i);
            for (j, mqj) in mq.iter().enumerate().skip(i) {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot(&qi, mqj) - target).abs());
            }
        }
        worst
    }
}

/// Ritz pairs for an orthonormal basis, where `M = I` up to rounding and the
/// problem is a standard symmetric one.
pub fn eig_orthonormal(degree: u32, gram: &GramSet) -> Result<EigResult, GalerkinError> {
    let eig = sym_eig(&gram.a())?;
    Ok(EigResult {
        degree,
        values: eig.values,
        vectors: eig.vectors,
    })
}

/// Ritz pairs for any basis via Cholesky reduction of `M`.
pub fn eig_generalized(degree: u32, gram: &GramSet) -> Result<EigResult, GalerkinError> {
    let eig = generalized_sym_eig(&gram.a(), &gram.m)?;
    Ok(EigResult {
        degree,
        values: eig.values,
        vectors: eig.vectors,
    })
}

/// Eigenvalues of the triangle problem on polynomials of degree `<= degree`.
pub fn solve_eig<T: Scalar>(
    degree: u32,
    p: &TriangleWeightParams<T>,
) -> Result<EigResult, GalerkinError> {
    let basis = build_basis(degree, p)?;
    let gram = assemble(&basis, &MatPoly2::triangle());
    eig_orthonormal(degree, &gram)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::triangle_rule;
    use crate::scalar::Rational;

    type P = Poly2<Rational>;

    fn p(s: &str) -> P {
        P::parse(s).unwrap()
    }

    fn lebesgue() -> TriangleWeightParams<Rational> {
        TriangleWeightParams::lebesgue()
    }

    #[test]
    fn degree_zero_basis() {
        let b = build_basis(0, &lebesgue()).unwrap();
        assert_eq!(b.len(), 1);
        assert!((b.functions()[0].coeff(Monomial::ONE) - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(build_basis(1, &lebesgue()).unwrap().len(), 3);
    }

    #[test]
    fn orthonormal_by_quadrature() {
        let b = build_basis(2, &lebesgue()).unwrap();
        let rule = triangle_rule(4, &lebesgue()).unwrap();
        for (i, bi) in b.functions().iter().enumerate() {
            for (j, bj) in b.functions().iter().enumerate() {
                let g = rule.integrate(|x, y| bi.eval(x, y) * bj.eval(x, y));
                let target = if i == j { 1.0 } else { 0.0 };
                assert!((g - target).abs() <= 1e-12, "({i},{j}) {g}");
            }
        }
        let t = b.transform();
        for k in 0..b.len() {
            assert!(t[(k, k)] > 0.0);
            for j in k + 1..b.len() {
                assert_eq!(t[(k, j)], 0.0);
            }
        }
    }

    #[test]
    fn small_matrices() {
        let b = build_basis(0, &lebesgue()).unwrap();
        let g = assemble(&b, &MatPoly2::triangle());
        assert_eq!(g.s.get(0, 0), 0.0);
        assert!((g.v.get(0, 0) - 7.0 / 3.0).abs() < 1e-15);
        assert!((g.m.get(0, 0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn stiffness_is_diagonal_for_triangle_weight() {
        // The orthogonal polynomials of degree n are eigenfunctions of the
        // principal part with eigenvalue n (n + alpha + beta + gamma + 2).
        let params = TriangleWeightParams::<Rational>::new(
            Rational::from_i64(1),
            Rational::from_ratio(1, 2),
            Rational::from_i64(0),
        )
        .unwrap();
        let b = build_basis(4, &params).unwrap();
        let g = assemble(&b, &MatPoly2::triangle());
        let s = 1.5;
        for (k, m) in Monomial::up_to(4).enumerate() {
            let n = m.degree() as f64;
            for j in 0..b.len() {
                let target = if j == k { n * (n + s + 2.0) } else { 0.0 };
                assert!((g.s.get(k, j) - target).abs() < 1e-12, "({k},{j})");
            }
        }
        assert!(g.m.sub(&SymMatrix::identity(b.len())).max_abs() < 1e-15);
    }

    #[test]
    fn float_and_rational_modes_agree() {
        let exact = build_basis(3, &lebesgue()).unwrap();
        let float = build_basis(3, &TriangleWeightParams::<f64>::lebesgue()).unwrap();
        let ge = assemble(&exact, &MatPoly2::triangle());
        let gf = assemble(&float, &MatPoly2::triangle());
        assert!(ge.a().sub(&gf.a()).max_abs() < 1e-11);
    }

    #[test]
    fn float_basis_reports_failing_pivot() {
        match build_basis(16, &TriangleWeightParams::<f64>::lebesgue()) {
            Err(GalerkinError::Factorization { pivot, .. }) => assert!(pivot > 1),
            other => panic!("expected factorization failure, got {other:?}"),
        }
    }

    #[test]
    fn sobolev_norm_examples() {
        let phi = MatPoly2::triangle();
        let lb = lebesgue();
        assert_eq!(sobolev_norm(&P::zero(), &phi, &lb), 0.0);
        assert!((sobolev_norm(&P::one(), &phi, &lb) - 0.5f64.sqrt()).abs() < 1e-15);
        assert!((sobolev_norm(&P::x1(), &phi, &lb) - (1.0f64 / 6.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn apply_l_examples() {
        let lb = lebesgue();
        assert_eq!(apply_l(&P::one(), &lb), p("2 + x1^2 + x2^2"));
        assert_eq!(apply_l(&P::x1(), &lb), p("-1 + 5*x1 + x1^3 + x1*x2^2"));
    }

    #[test]
    fn divergence_form_matches() {
        let params = TriangleWeightParams::<Rational>::new(
            Rational::from_ratio(1, 3),
            Rational::from_ratio(-1, 2),
            Rational::from_i64(2),
        )
        .unwrap();
        let u = p("x1^3*x2 - 2*x2^2 + 5/7*x1*x2 + x1");
        let phi = MatPoly2::triangle();
        let w = phi.mul_vec(&u.gradient());
        let weight = WeightSpec::triangle(&params);
        let lhs = &weight.denominator() * &(&apply_l(&u, &params) - &(&potential() * &u));
        assert!((&lhs + &cleared_divergence(&w, &weight)).is_zero());
    }

    #[test]
    fn manufactured_solution() {
        let lb = lebesgue();
        let f = apply_l(&p("x1*x2"), &lb);
        let sol = solve_weak(&f, 4, &lb).unwrap();
        for (m, c) in sol.solution.terms() {
            let target = if m == Monomial::new(1, 1) { 1.0 } else { 0.0 };
            assert!((c - target).abs() < 1e-10, "{m:?} {c}");
        }
        let zero = solve_weak(&P::zero(), 3, &lb).unwrap();
        assert!(zero.coeffs.iter().all(|c| *c == 0.0));
    }

    #[test]
    fn function_rhs_matches_polynomial_rhs() {
        let lb = lebesgue();
        let f = p("2 + x1^2 + x2^2");
        let a = solve_weak(&f, 3, &lb).unwrap();
        let b = solve_weak_fn(|x, y| 2.0 + x * x + y * y, 3, &lb).unwrap();
        for (x, y) in a.coeffs.iter().zip(&b.coeffs) {
            assert!((x - y).abs() < 1e-12);
        }
        assert!((b.solution.coeff(Monomial::ONE) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn degree_zero_eigenvalue() {
        let e = solve_eig(0, &lebesgue()).unwrap();
        assert!((e.values[0] - 7.0 / 3.0).abs() < 1e-14);
        assert!((e.reciprocals()[0] - 3.0 / 7.0).abs() < 1e-15);
    }

    #[test]
    fn generalized_path_on_monomial_basis() {
        let lb = lebesgue();
        let basis = build_basis(3, &lb).unwrap();
        let ortho = eig_orthonormal(3, &assemble(&basis, &MatPoly2::triangle())).unwrap();
        let mono = assemble_monomial(3, &MatPoly2::triangle(), &lb);
        let gen = eig_generalized(3, &mono).unwrap();
        for (x, y) in ortho.values.iter().zip(&gen.values) {
            assert!((x - y).abs() < 1e-9 * x, "{x} {y}");
        }
        assert!(gen.orthogonality_defect(&mono.m) < 1e-9);
        assert!(gen.max_residual(&mono) < 1e-8);
        // Eigenfunctions agree up to sign.
        let f0 = ortho.eigenfunction(&basis, 0);
        let g0 = Poly2::from_terms(Monomial::up_to(3).zip(gen.vector(0)));
        let s = f0.eval(0.2, 0.3) / g0.eval(0.2, 0.3);
        assert!((s.abs() - 1.0).abs() < 1e-8);
        assert!((&f0 - &g0.scale(&s)).max_abs_coeff() < 1e-7);
    }

    #[test]
    fn basis_satisfies_flux_condition() {
        let b = build_basis(4, &lebesgue()).unwrap();
        let edges = DomainEdges::triangle();
        for q in b.orthogonal() {
            assert_eq!(flux_check(q, &MatPoly2::triangle(), &edges), Ok(()));
        }
        assert_eq!(flux_check(&P::x1(), &MatPoly2::identity(), &edges), Err(1));
    }
}
