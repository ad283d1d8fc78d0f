//! Moments of the Jacobi weight `x1^a x2^b (1-x1-x2)^c` on the unit triangle.
//!
//! Every moment is stored as the ratio `mu(m,n) / mu(0,0)`, which is a
//! rational function of the exponents and therefore exact in rational mode.
//! The total mass `mu(0,0)` is only materialized at the `f64` boundary.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use statrs::function::gamma::ln_gamma;
use thiserror::Error;

use crate::poly::{Monomial, Poly2};
use crate::scalar::{Rational, Scalar};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DomainError {
    #[error("exponent {name} = {value} must be > -1")]
    Exponent { name: &'static str, value: f64 },
    #[error("{what} must be at least {min}, got {value}")]
    TooSmall {
        what: &'static str,
        min: usize,
        value: usize,
    },
}

/// Exponents of `x1^alpha x2^beta (1-x1-x2)^gamma`, each `> -1`.
#[derive(Clone, Debug, PartialEq)]
pub struct TriangleWeightParams<T = Rational> {
    alpha: T,
    beta: T,
    gamma: T,
}

impl<T: Scalar> TriangleWeightParams<T> {
    pub fn new(alpha: T, beta: T, gamma: T) -> Result<Self, DomainError> {
        for (name, v) in [("alpha", &alpha), ("beta", &beta), ("gamma", &gamma)] {
            if v.partial_cmp(&-T::one()) != Some(Ordering::Greater) {
                return Err(DomainError::Exponent {
                    name,
                    value: v.to_f64(),
                });
            }
        }
        Ok(TriangleWeightParams { alpha, beta, gamma })
    }

    /// All three exponents equal.
    pub fn uniform(e: T) -> Result<Self, DomainError> {
        Self::new(e.clone(), e.clone(), e)
    }

    /// `alpha = beta = gamma = 0`, i.e. Lebesgue measure on the triangle.
    pub fn lebesgue() -> Self {
        TriangleWeightParams {
            alpha: T::zero(),
            beta: T::zero(),
            gamma: T::zero(),
        }
    }

    pub fn alpha(&self) -> &T {
        &self.alpha
    }

    pub fn beta(&self) -> &T {
        &self.beta
    }

    pub fn gamma(&self) -> &T {
        &self.gamma
    }

    /// `alpha + beta + gamma`.
    pub fn sum(&self) -> T {
        self.alpha.clone() + self.beta.clone() + self.gamma.clone()
    }

    pub fn to_f64(&self) -> TriangleWeightParams<f64> {
        TriangleWeightParams {
            alpha: self.alpha.to_f64(),
            beta: self.beta.to_f64(),
            gamma: self.gamma.to_f64(),
        }
    }

    /// `mu(0,0)` as a product of two beta integrals.
    pub fn total_mass(&self) -> f64 {
        if let Some(exact) = self.exact_total_mass() {
            return exact.to_f64();
        }
        let (a, b, c) = (self.alpha.to_f64(), self.beta.to_f64(), self.gamma.to_f64());
        beta_mass(a, b + c + 1.0) * beta_mass(b, c)
    }

    /// `a! b! c! / (a+b+c+2)!` when all exponents are exactly integers.
    pub fn exact_total_mass(&self) -> Option<T> {
        let a = self.alpha.to_exact_integer()?;
        let b = self.beta.to_exact_integer()?;
        let c = self.gamma.to_exact_integer()?;
        let fact = |n: i64| (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k));
        let q = Rational::new(fact(a) * fact(b) * fact(c), fact(a + b + c + 2));
        Some(T::from_rational(&q))
    }
}

impl<T: Scalar> fmt::Display for TriangleWeightParams<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.alpha, self.beta, self.gamma)
    }
}

/// Table of moment ratios `mu(m,n)/mu(0,0)` for `m + n <= max_degree`,
/// indexed by graded monomial position.
#[derive(Clone, Debug)]
pub struct MomentTable<T = Rational> {
    params: TriangleWeightParams<T>,
    max_degree: u32,
    ratios: Vec<T>,
    mass: f64,
}

impl<T: Scalar> MomentTable<T> {
    pub fn new(params: &TriangleWeightParams<T>, max_degree: u32) -> Self {
        let len = Monomial::count_up_to(max_degree);
        let mut ratios = vec![T::zero(); len];
        ratios[0] = T::one();
        let s3 = params.sum() + T::from_i64(3);
        for n in 0..max_degree {
            for m in Monomial::up_to(n).filter(|m| m.degree() == n) {
                let base = ratios[m.graded_index()].clone();
                let den = s3.clone() + T::from_i64(n as i64);
                // Each degree-(n+1) monomial is reached from its lower neighbour
                // in x2 when possible, otherwise from x1.
                if m.x2 == 0 {
                    let up = Monomial::new(m.x1 + 1, 0);
                    ratios[up.graded_index()] = base.clone()
                        * (params.alpha.clone() + T::from_i64(m.x1 as i64 + 1))
                        / den.clone();
                }
                let up = Monomial::new(m.x1, m.x2 + 1);
                ratios[up.graded_index()] =
                    base * (params.beta.clone() + T::from_i64(m.x2 as i64 + 1)) / den;
            }
        }
        MomentTable {
            params: params.clone(),
            max_degree,
            ratios,
            mass: params.total_mass(),
        }
    }

    pub fn params(&self) -> &TriangleWeightParams<T> {
        &self.params
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    /// `mu(0,0)` as `f64`.
    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// `mu(m,n)/mu(0,0)`; computed directly when outside the table.
    pub fn ratio(&self, m: u32, n: u32) -> T {
        let mono = Monomial::new(m, n);
        if mono.degree() <= self.max_degree {
            return self.ratios[mono.graded_index()].clone();
        }
        moment_ratio(m, n, &self.params)
    }

    pub fn moment(&self, m: u32, n: u32) -> f64 {
        self.mass * self.ratio(m, n).to_f64()
    }

    /// `(integral of q rho) / mu(0,0)`, exact in rational mode.
    pub fn integrate_ratio(&self, q: &Poly2<T>) -> T {
        let mut acc = T::zero();
        for (m, c) in q.terms() {
            acc = acc + c.clone() * self.ratio(m.x1, m.x2);
        }
        acc
    }

    pub fn integrate(&self, q: &Poly2<T>) -> f64 {
        self.mass * self.integrate_ratio(q).to_f64()
    }

    /// Exact integral, available when the total mass itself is exact.
    pub fn integrate_exact(&self, q: &Poly2<T>) -> Option<T> {
        Some(self.params.exact_total_mass()? * self.integrate_ratio(q))
    }
}

/// `mu(m,n)/mu(0,0)` by the product form of the moment recurrences.
pub fn moment_ratio<T: Scalar>(m: u32, n: u32, p: &TriangleWeightParams<T>) -> T {
    let s3 = p.sum() + T::from_i64(3);
    let mut r = T::one();
    for k in 0..m {
        r = r * (p.alpha.clone() + T::from_i64(k as i64 + 1))
            / (s3.clone() + T::from_i64(k as i64));
    }
    for l in 0..n {
        r = r * (p.beta.clone() + T::from_i64(l as i64 + 1))
            / (s3.clone() + T::from_i64((m + l) as i64));
    }
    r
}

/// `mu(m,n) = integral over the triangle of x1^m x2^n rho`.
pub fn dirichlet_moment<T: Scalar>(m: u32, n: u32, p: &TriangleWeightParams<T>) -> f64 {
    p.total_mass() * moment_ratio(m, n, p).to_f64()
}

/// `integral of q rho` over the triangle, by exact moment summation.
pub fn integrate_poly<T: Scalar>(q: &Poly2<T>, p: &TriangleWeightParams<T>) -> f64 {
    MomentTable::new(p, q.degree()).integrate(q)
}

/// `B(a+1, b+1)`, the mass of `x^a (1-x)^b` on `[0, 1]`.
///
/// Exponents are first shifted into `(-1, 0]` with the recurrence
/// `B(a+1, b+1) = a / (a+b+1) * B(a, b+1)`, so integer exponents give an
/// exact rational product and only the remainder goes through `ln_gamma`.
/// Large exponents skip the shift and use log-gamma differences directly.
pub fn beta_mass(a: f64, b: f64) -> f64 {
    if a.max(b) > 64.0 {
        return (ln_gamma(a + 1.0) + ln_gamma(b + 1.0) - ln_gamma(a + b + 2.0)).exp();
    }
    let (mut a, mut b) = (a, b);
    let mut scale = 1.0;
    while a > 0.0 {
        scale *= a / (a + b + 1.0);
        a -= 1.0;
    }
    while b > 0.0 {
        scale *= b / (a + b + 1.0);
        b -= 1.0;
    }
    if a == 0.0 && b == 0.0 {
        return scale;
    }
    scale * (ln_gamma(a + 1.0) + ln_gamma(b + 1.0) - ln_gamma(a + b + 2.0)).exp()
}

/// Independent closed form `Gamma(a+m+1) Gamma(b+n+1) Gamma(c+1) / Gamma(a+b+c+m+n+3)`
/// through log-gamma; used to cross-check the recurrence.
pub fn dirichlet_moment_lgamma(m: u32, n: u32, p: &TriangleWeightParams<f64>) -> f64 {
    let (a, b, c) = (p.alpha, p.beta, p.gamma);
    let (m, n) = (m as f64, n as f64);
    (ln_gamma(a + m + 1.0) + ln_gamma(b + n + 1.0) + ln_gamma(c + 1.0)
        - ln_gamma(a + b + c + m + n + 3.0))
    .exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    fn leb() -> TriangleWeightParams<Rational> {
        TriangleWeightParams::lebesgue()
    }

    #[test]
    fn rejects_non_integrable_exponents() {
        assert!(TriangleWeightParams::new(q(-1, 1), q(0, 1), q(0, 1)).is_err());
        assert!(TriangleWeightParams::new(0.0, -1.5, 0.0).is_err());
        assert!(TriangleWeightParams::new(q(-1, 2), q(-99, 100), q(5, 1)).is_ok());
    }

    #[test]
    fn lebesgue_moments() {
        assert_eq!(dirichlet_moment(0, 0, &leb()), 0.5);
        assert_eq!(moment_ratio(2, 0, &leb()), q(1, 6));
        assert!((dirichlet_moment(2, 0, &leb()) - 1.0 / 12.0).abs() < 1e-17);
        assert_eq!(leb().exact_total_mass(), Some(q(1, 2)));
    }

    #[test]
    fn second_moment_matches_one_dimensional_integral() {
        // integral_0^1 x^2 (1-x) dx by composite Simpson on a fine grid.
        let n = 2000;
        let h = 1.0 / n as f64;
        let f = |x: f64| x * x * (1.0 - x);
        let mut s = f(0.0) + f(1.0);
        for k in 1..n {
            s += if k % 2 == 1 { 4.0 } else { 2.0 } * f(k as f64 * h);
        }
        let simpson = s * h / 3.0;
        assert!((simpson - dirichlet_moment(2, 0, &leb())).abs() < 1e-13);
    }

    #[test]
    fn general_mass_is_gamma_ratio() {
        let p = TriangleWeightParams::new(0.5, -0.5, 1.5).unwrap();
        // Gamma(1.5) Gamma(0.5) Gamma(2.5) / Gamma(4.5) = (sqrt(pi)/2)(sqrt(pi))(3 sqrt(pi)/4) / (105 sqrt(pi)/16)
        let expect = std::f64::consts::PI * 2.0 / 35.0;
        assert!((p.total_mass() - expect).abs() < 1e-14 * expect);
        let p = TriangleWeightParams::new(q(2, 1), q(3, 1), q(1, 1)).unwrap();
        assert_eq!(p.exact_total_mass(), Some(q(2 * 6, 40320)));
    }

    #[test]
    fn table_matches_product_form() {
        let p = TriangleWeightParams::new(q(1, 3), q(-1, 2), q(7, 4)).unwrap();
        let t = MomentTable::new(&p, 8);
        for m in Monomial::up_to(8) {
            assert_eq!(t.ratio(m.x1, m.x2), moment_ratio(m.x1, m.x2, &p));
        }
        assert_eq!(t.ratio(9, 3), moment_ratio(9, 3, &p));
    }

    #[test]
    fn integrate_examples() {
        let t = MomentTable::new(&leb(), 4);
        assert_eq!(t.integrate_exact(&Poly2::one()), Some(q(1, 2)));
        let f = Poly2::<Rational>::parse("2 + x1^2 + x2^2").unwrap();
        assert_eq!(t.integrate_exact(&f), Some(q(7, 6)));
        assert_eq!(integrate_poly(&Poly2::<Rational>::zero(), &leb()), 0.0);
        assert!((integrate_poly(&f, &leb()) - 7.0 / 6.0).abs() < 1e-15);
    }
}
