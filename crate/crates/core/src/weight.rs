//! Classical weight verification for factored weights `rho = prod q_i^g_i`.
//!
//! With linear factors, `grad(rho)/rho = sum g_i grad(q_i)/q_i` has the
//! explicit denominator `prod q_i`, so the Pearson equation, the boundary
//! condition and the auxiliary matrix system all reduce to exact polynomial
//! identities.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

use crate::moments::TriangleWeightParams;
use crate::poly::{Axis, MatPoly2, Poly2};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WeightError {
    #[error("factor {index} must have degree exactly 1, got `{form}`")]
    NotLinear { index: usize, form: String },
    #[error("factor {index} has exponent {value}, which must be > -1")]
    Exponent { index: usize, value: f64 },
    #[error("weight needs at least one factor")]
    Empty,
    #[error("edge {index} has a zero normal direction")]
    ZeroNormal { index: usize },
}

/// One factor `form^exponent` of a weight.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightFactor<T> {
    pub form: Poly2<T>,
    pub exponent: T,
}

/// Product of powers of affine forms.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightSpec<T> {
    factors: Vec<WeightFactor<T>>,
}

impl<T: Scalar> WeightSpec<T> {
    /// Exponents `<= -1` are rejected for every factor.
    pub fn new(factors: Vec<WeightFactor<T>>) -> Result<Self, WeightError> {
        if factors.is_empty() {
            return Err(WeightError::Empty);
        }
        for (index, f) in factors.iter().enumerate() {
            if f.form.degree() != 1 {
                return Err(WeightError::NotLinear {
                    index,
                    form: f.form.to_string(),
                });
            }
            if f.exponent.partial_cmp(&-T::one()) != Some(Ordering::Greater) {
                return Err(WeightError::Exponent {
                    index,
                    value: f.exponent.to_f64(),
                });
            }
        }
        Ok(WeightSpec { factors })
    }

    /// `x1^alpha x2^beta (1-x1-x2)^gamma`.
    pub fn triangle(p: &TriangleWeightParams<T>) -> Self {
        let forms = triangle_forms::<T>();
        let exps = [p.alpha().clone(), p.beta().clone(), p.gamma().clone()];
        WeightSpec {
            factors: forms
                .into_iter()
                .zip(exps)
                .map(|(form, exponent)| WeightFactor { form, exponent })
                .collect(),
        }
    }

    pub fn factors(&self) -> &[WeightFactor<T>] {
        &self.factors
    }

    /// `prod q_i`, the common denominator of `grad(rho)/rho`.
    pub fn denominator(&self) -> Poly2<T> {
        self.factors
            .iter()
            .fold(Poly2::one(), |acc, f| &acc * &f.form)
    }

    /// `D * grad(rho)/rho` as a pair of polynomials, `D = prod q_i`.
    pub fn log_gradient_numerator(&self) -> [Poly2<T>; 2] {
        let mut out = [Poly2::zero(), Poly2::zero()];
        for (k, f) in self.factors.iter().enumerate() {
            let others = self
                .factors
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != k)
                .fold(Poly2::one(), |acc, (_, g)| &acc * &g.form);
            for axis in Axis::BOTH {
                let t = f.form.diff(axis).scale(&f.exponent);
                out[axis.index()] = &out[axis.index()] + &(&t * &others);
            }
        }
        out
    }

    /// Pointwise value of `rho`.
    pub fn eval(&self, x1: f64, x2: f64) -> f64 {
        self.factors
            .iter()
            .map(|f| f.form.eval(x1, x2).powf(f.exponent.to_f64()))
            .product()
    }
}

/// `x1`, `x2`, `1 - x1 - x2`.
pub fn triangle_forms<T: Scalar>() -> [Poly2<T>; 3] {
    [
        Poly2::x1(),
        Poly2::x2(),
        Poly2::affine(T::one(), -T::one(), -T::one()),
    ]
}

/// The affine pair `psi_i(x) = x . D_i + E_i` solving `div(rho Phi) = rho psi`.
#[derive(Clone, Debug, PartialEq)]
pub struct PearsonData<T> {
    pub psi: [Poly2<T>; 2],
    /// `directions[i] = D_i`, the linear coefficients of `psi_i`.
    pub directions: [[T; 2]; 2],
    /// `constants[i] = E_i`.
    pub constants: [T; 2],
}

impl<T: Scalar> PearsonData<T> {
    pub fn from_psi(psi: [Poly2<T>; 2]) -> Self {
        use crate::poly::Monomial;
        let lin = |p: &Poly2<T>| [p.coeff(Monomial::new(1, 0)), p.coeff(Monomial::new(0, 1))];
        PearsonData {
            directions: [lin(&psi[0]), lin(&psi[1])],
            constants: [psi[0].coeff(Monomial::ONE), psi[1].coeff(Monomial::ONE)],
            psi,
        }
    }

    /// `det(D_1, D_2)`.
    pub fn det(&self) -> T {
        let [d1, d2] = &self.directions;
        d1[0].clone() * d2[1].clone() - d1[1].clone() * d2[0].clone()
    }
}

/// Closed-form Pearson pair for the triangle:
/// `psi_1 = alpha + 1 - (alpha+beta+gamma+3) x1`, `psi_2 = beta + 1 - (...) x2`.
pub fn triangle_psi<T: Scalar>(p: &TriangleWeightParams<T>) -> PearsonData<T> {
    let s3 = p.sum() + T::from_i64(3);
    PearsonData::from_psi([
        Poly2::affine(p.alpha().clone() + T::one(), -s3.clone(), T::zero()),
        Poly2::affine(p.beta().clone() + T::one(), T::zero(), -s3),
    ])
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PearsonFailure {
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("component {component} of div(rho Phi)/rho is not a polynomial (denominator does not divide)")]
    NotDivisible { component: usize },
    #[error("psi_{component} has degree {degree}, expected an affine polynomial")]
    PsiNotAffine { component: usize, degree: u32 },
    #[error("det(D1, D2) vanishes")]
    DegenerateDirections,
}

impl PearsonFailure {
    pub fn stage(&self) -> &'static str {
        match self {
            PearsonFailure::NotSymmetric => "not_symmetric",
            PearsonFailure::NotDivisible { .. } => "not_divisible",
            PearsonFailure::PsiNotAffine { .. } => "psi_not_affine",
            PearsonFailure::DegenerateDirections => "degenerate_directions",
        }
    }
}

/// Solve the Pearson equation `div(rho Phi) = rho (psi_1, psi_2)` for `psi`.
///
/// For `j = 1, 2` the numerator `P_j = D sum_i d_i Phi_ij + sum_i Phi_ij N_i`
/// (with `N = D grad(rho)/rho`) must be divisible by `D = prod q_k`, and the
/// quotient must be affine with independent linear parts.
pub fn pearson_check<T: Scalar>(
    phi: &MatPoly2<T>,
    w: &WeightSpec<T>,
) -> Result<PearsonData<T>, PearsonFailure> {
    if !phi.is_symmetric() {
        return Err(PearsonFailure::NotSymmetric);
    }
    let den = w.denominator();
    let log_num = w.log_gradient_numerator();
    let mut psi = [Poly2::zero(), Poly2::zero()];
    for (j, psi_j) in psi.iter_mut().enumerate() {
        let mut div_phi = Poly2::zero();
        let mut contraction = Poly2::zero();
        for axis in Axis::BOTH {
            let i = axis.index();
            div_phi = &div_phi + &phi.get(i, j).diff(axis);
            contraction = &contraction + &(phi.get(i, j) * &log_num[i]);
        }
        let numerator = &(&den * &div_phi) + &contraction;
        let quotient = numerator
            .div_exact(&den)
            .map_err(|_| PearsonFailure::NotDivisible { component: j + 1 })?;
        let quotient = drop_negligible(&quotient);
        if quotient.degree() > 1 {
            return Err(PearsonFailure::PsiNotAffine {
                component: j + 1,
                degree: quotient.degree(),
            });
        }
        *psi_j = quotient;
    }
    let data = PearsonData::from_psi(psi);
    if data.det().is_negligible() {
        return Err(PearsonFailure::DegenerateDirections);
    }
    Ok(data)
}

fn drop_negligible<T: Scalar>(p: &Poly2<T>) -> Poly2<T> {
    Poly2::from_terms(
        p.terms()
            .filter(|(_, c)| !c.is_negligible())
            .map(|(m, c)| (m, c.clone())),
    )
}

/// A straight boundary edge: the affine form vanishing on it and an outward
/// normal direction (any positive multiple of the unit normal).
#[derive(Clone, Debug, PartialEq)]
pub struct Edge<T> {
    pub form: Poly2<T>,
    pub normal: [T; 2],
}

impl<T: Scalar> Edge<T> {
    pub fn unit_normal(&self) -> [f64; 2] {
        let (a, b) = (self.normal[0].to_f64(), self.normal[1].to_f64());
        let r = a.hypot(b);
        [a / r, b / r]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DomainEdges<T> {
    edges: Vec<Edge<T>>,
}

impl<T: Scalar> DomainEdges<T> {
    pub fn new(edges: Vec<Edge<T>>) -> Result<Self, WeightError> {
        for (index, e) in edges.iter().enumerate() {
            if e.form.degree() != 1 {
                return Err(WeightError::NotLinear {
                    index,
                    form: e.form.to_string(),
                });
            }
            if e.normal[0].is_zero() && e.normal[1].is_zero() {
                return Err(WeightError::ZeroNormal { index });
            }
        }
        Ok(DomainEdges { edges })
    }

    /// Edges of `{x1, x2 >= 0, x1 + x2 <= 1}` with normals `(-1,0)`, `(0,-1)`, `(1,1)`.
    pub fn triangle() -> Self {
        let [f1, f2, f3] = triangle_forms::<T>();
        let (o, z) = (T::one(), T::zero());
        DomainEdges {
            edges: vec![
                Edge {
                    form: f1,
                    normal: [-o.clone(), z.clone()],
                },
                Edge {
                    form: f2,
                    normal: [z, -o.clone()],
                },
                Edge {
                    form: f3,
                    normal: [o.clone(), o],
                },
            ],
        }
    }

    pub fn edges(&self) -> &[Edge<T>] {
        &self.edges
    }
}

/// First boundary failure: 1-based edge index and 1-based component of `Phi n`.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("boundary condition fails on edge {edge} (component {component} of Phi n)")]
pub struct BoundaryFailure {
    pub edge: usize,
    pub component: usize,
}

/// Outcome for one edge: `None` on success, else the failing component.
pub fn edge_check<T: Scalar>(phi: &MatPoly2<T>, edge: &Edge<T>) -> Option<usize> {
    let n = [
        Poly2::constant(edge.normal[0].clone()),
        Poly2::constant(edge.normal[1].clone()),
    ];
    let phi_n = phi.mul_vec(&n);
    (0..2)
        .find(|&k| phi_n[k].div_exact(&edge.form).is_err())
        .map(|k| k + 1)
}

/// Bounded-domain form of the Neumann-type condition: on each edge `l = 0`,
/// both components of `Phi n` must be divisible by `l`, so that
/// `(rho Phi grad p) . n` vanishes there for every polynomial `p`.
pub fn boundary_check<T: Scalar>(
    phi: &MatPoly2<T>,
    edges: &DomainEdges<T>,
) -> Result<(), BoundaryFailure> {
    for (edge, e) in edges.edges().iter().enumerate() {
        if let Some(component) = edge_check(phi, e) {
            return Err(BoundaryFailure {
                edge: edge + 1,
                component,
            });
        }
    }
    Ok(())
}

/// `(Phi g) . n` for a polynomial vector field `g`.
pub fn normal_flux<T: Scalar>(phi: &MatPoly2<T>, g: &[Poly2<T>; 2], edge: &Edge<T>) -> Poly2<T> {
    let pg = phi.mul_vec(g);
    &pg[0].scale(&edge.normal[0]) + &pg[1].scale(&edge.normal[1])
}

/// Convention for the 2x2 array of first derivatives of a pair `(f, g)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    /// Rows index the derivative axis: `J[a][c] = d_a (f, g)_c`.
    A,
    /// Columns index the derivative axis: `J[c][a] = d_a (f, g)_c` (the Jacobian).
    B,
}

impl Orientation {
    pub const BOTH: [Orientation; 2] = [Orientation::A, Orientation::B];
}

impl fmt::Display for Orientation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Orientation::A => f.write_str("A"),
            Orientation::B => f.write_str("B"),
        }
    }
}

fn pair_derivatives<T: Scalar>(pair: [&Poly2<T>; 2], orientation: Orientation) -> MatPoly2<T> {
    let d = |c: usize, axis: Axis| pair[c].diff(axis);
    match orientation {
        Orientation::A => MatPoly2::new([
            [d(0, Axis::X1), d(1, Axis::X1)],
            [d(0, Axis::X2), d(1, Axis::X2)],
        ]),
        Orientation::B => MatPoly2::new([
            [d(0, Axis::X1), d(0, Axis::X2)],
            [d(1, Axis::X1), d(1, Axis::X2)],
        ]),
    }
}

/// Nonzero residuals `lhs - rhs` of the two matrix equations.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("auxiliary system fails under orientation {orientation}")]
pub struct CompatFailure<T: Scalar> {
    pub orientation: Orientation,
    /// `residuals[k]` for column `k` of `Phi`; zero when that equation holds.
    pub residuals: [MatPoly2<T>; 2],
}

/// Residuals of `phi_1k d_1 Phi + phi_2k d_2 Phi - Phi J(phi_1k, phi_2k)`, k = 1, 2.
pub fn compat_residuals<T: Scalar>(
    phi: &MatPoly2<T>,
    orientation: Orientation,
) -> [MatPoly2<T>; 2] {
    let d1 = phi.diff(Axis::X1);
    let d2 = phi.diff(Axis::X2);
    let residual = |k: usize| {
        let lhs = &d1.scale_poly(phi.get(0, k)) + &d2.scale_poly(phi.get(1, k));
        let rhs = phi.mat_mul(&pair_derivatives(
            [phi.get(0, k), phi.get(1, k)],
            orientation,
        ));
        &lhs - &rhs
    };
    [residual(0), residual(1)]
}

#[allow(clippy::result_large_err)]
pub fn compat_system_check<T: Scalar>(
    phi: &MatPoly2<T>,
    orientation: Orientation,
) -> Result<(), CompatFailure<T>> {
    let residuals = compat_residuals(phi, orientation);
    if residuals.iter().all(MatPoly2::is_negligible) {
        Ok(())
    } else {
        Err(CompatFailure {
            orientation,
            residuals,
        })
    }
}

/// `K` in `div(rho Phi v) = K rho`:
/// `psi_1 v_1 + psi_2 v_2 + sum_ij Phi_ij d_i v_j`.
pub fn divergence_k<T: Scalar>(
    v: &[Poly2<T>; 2],
    phi: &MatPoly2<T>,
    pearson: &PearsonData<T>,
) -> Poly2<T> {
    let mut k = &(&pearson.psi[0] * &v[0]) + &(&pearson.psi[1] * &v[1]);
    for axis in Axis::BOTH {
        let i = axis.index();
        for (j, vj) in v.iter().enumerate() {
            k = &k + &(phi.get(i, j) * &vj.diff(axis));
        }
    }
    k
}
