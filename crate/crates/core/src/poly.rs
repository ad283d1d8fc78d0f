//! Bivariate polynomials over a [`Scalar`] field.
//!
//! Terms are stored sparsely and iterated in graded lexicographic order:
//! `1, x1, x2, x1^2, x1*x2, x2^2, ...`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::scalar::{parse_rational, Rational, Scalar};

/// Exponent pair of `x1^i * x2^j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub x1: u32,
    pub x2: u32,
}

impl Monomial {
    pub const ONE: Monomial = Monomial { x1: 0, x2: 0 };

    pub const fn new(x1: u32, x2: u32) -> Self {
        Monomial { x1, x2 }
    }

    pub const fn degree(self) -> u32 {
        self.x1 + self.x2
    }

    /// Position in the graded lexicographic enumeration.
    pub const fn graded_index(self) -> usize {
        let n = self.degree() as usize;
        n * (n + 1) / 2 + self.x2 as usize
    }

    pub fn from_graded_index(k: usize) -> Self {
        let mut n = 0usize;
        while (n + 1) * (n + 2) / 2 <= k {
            n += 1;
        }
        let x2 = (k - n * (n + 1) / 2) as u32;
        Monomial::new(n as u32 - x2, x2)
    }

    /// All monomials of total degree `<= degree`, in graded lex order.
    pub fn up_to(degree: u32) -> impl Iterator<Item = Monomial> {
        (0..=degree).flat_map(|n| (0..=n).map(move |j| Monomial::new(n - j, j)))
    }

    /// Number of monomials of total degree `<= degree`.
    pub const fn count_up_to(degree: u32) -> usize {
        let d = degree as usize;
        (d + 1) * (d + 2) / 2
    }

    pub fn divides(self, other: Monomial) -> bool {
        self.x1 <= other.x1 && self.x2 <= other.x2
    }
}

impl Mul for Monomial {
    type Output = Monomial;

    fn mul(self, rhs: Monomial) -> Monomial {
        Monomial::new(self.x1 + rhs.x1, self.x2 + rhs.x2)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then(self.x2.cmp(&other.x2))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Axis {
    X1,
    X2,
}

impl Axis {
    pub const BOTH: [Axis; 2] = [Axis::X1, Axis::X2];

    pub fn index(self) -> usize {
        match self {
            Axis::X1 => 0,
            Axis::X2 => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("not divisible: term {0:?} of the remainder cannot be reduced")]
    NotDivisible(Monomial),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("polynomial parse error at byte {position}: {message}")]
pub struct ParsePolyError {
    pub position: usize,
    pub message: String,
}

/// A polynomial in `x1, x2` with no stored zero coefficients.
#[derive(Clone, PartialEq)]
pub struct Poly2<T> {
    terms: BTreeMap<Monomial, T>,
}

impl<T: Scalar> Default for Poly2<T> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<T: Scalar> Poly2<T> {
    pub fn zero() -> Self {
        Poly2 {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(T::one())
    }

    pub fn constant(c: T) -> Self {
        Self::term(c, Monomial::ONE)
    }

    pub fn term(c: T, m: Monomial) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn x1() -> Self {
        Self::term(T::one(), Monomial::new(1, 0))
    }

    pub fn x2() -> Self {
        Self::term(T::one(), Monomial::new(0, 1))
    }

    /// `c0 + c1*x1 + c2*x2`.
    pub fn affine(c0: T, c1: T, c2: T) -> Self {
        let mut p = Self::zero();
        p.add_term(Monomial::ONE, c0);
        p.add_term(Monomial::new(1, 0), c1);
        p.add_term(Monomial::new(0, 1), c2);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, T)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    /// Build from coefficients listed in graded lex order.
    pub fn from_graded_coeffs(coeffs: &[T]) -> Self {
        Self::from_terms(
            coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| (Monomial::from_graded_index(k), c.clone())),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Total degree; the zero polynomial reports 0.
    pub fn degree(&self) -> u32 {
        self.terms.keys().next_back().map_or(0, |m| m.degree())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: Monomial) -> T {
        self.terms.get(&m).cloned().unwrap_or_else(T::zero)
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (Monomial, &T)> + '_ {
        self.terms.iter().map(|(m, c)| (*m, c))
    }

    pub fn leading(&self) -> Option<(Monomial, &T)> {
        self.terms.iter().next_back().map(|(m, c)| (*m, c))
    }

    /// Coefficient vector in graded lex order, padded to `len`.
    pub fn graded_coeffs(&self, len: usize) -> Vec<T> {
        let mut out = vec![T::zero(); len];
        for (m, c) in self.terms() {
            let k = m.graded_index();
            if k < len {
                out[k] = c.clone();
            }
        }
        out
    }

    pub fn add_term(&mut self, m: Monomial, c: T) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let sum = existing.clone() + c;
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn scale(&self, c: &T) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self::from_terms(self.terms().map(|(m, v)| (m, v.clone() * c.clone())))
    }

    pub fn mul_monomial(&self, c: &T, m: Monomial) -> Self {
        Self::from_terms(self.terms().map(|(k, v)| (k * m, v.clone() * c.clone())))
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn diff(&self, axis: Axis) -> Self {
        let mut out = Self::zero();
        for (m, c) in self.terms() {
            let (e, dm) = match axis {
                Axis::X1 if m.x1 > 0 => (m.x1, Monomial::new(m.x1 - 1, m.x2)),
                Axis::X2 if m.x2 > 0 => (m.x2, Monomial::new(m.x1, m.x2 - 1)),
                _ => continue,
            };
            out.add_term(dm, c.clone() * T::from_i64(e as i64));
        }
        out
    }

    pub fn gradient(&self) -> [Self; 2] {
        [self.diff(Axis::X1), self.diff(Axis::X2)]
    }

    /// Exact quotient `q` with `self = q * divisor`.
    ///
    /// Leading-term reduction in graded lex order; a single divisor always
    /// forms a Groebner basis of its ideal, so the remainder vanishes iff the
    /// division is exact.
    pub fn div_exact(&self, divisor: &Self) -> Result<Self, PolyError> {
        let (lead_m, lead_c) = divisor.leading().ok_or(PolyError::DivisionByZero)?;
        let lead_c = lead_c.clone();
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while let Some((m, c)) = rem.leading() {
            if T::EXACT || !c.is_negligible() {
                if !lead_m.divides(m) {
                    return Err(PolyError::NotDivisible(m));
                }
                let qm = Monomial::new(m.x1 - lead_m.x1, m.x2 - lead_m.x2);
                let qc = c.clone() / lead_c.clone();
                rem = &rem - &divisor.mul_monomial(&qc, qm);
                // Cancellation of the leading term is exact only in rational mode.
                rem.terms.remove(&m);
                quot.add_term(qm, qc);
            } else {
                rem.terms.remove(&m);
            }
        }
        Ok(quot)
    }

    pub fn eval(&self, x1: f64, x2: f64) -> f64 {
        self.terms()
            .map(|(m, c)| c.to_f64() * x1.powi(m.x1 as i32) * x2.powi(m.x2 as i32))
            .sum()
    }

    pub fn eval_exact(&self, x1: &T, x2: &T) -> T {
        let mut acc = T::zero();
        for (m, c) in self.terms() {
            let mut t = c.clone();
            for _ in 0..m.x1 {
                t = t * x1.clone();
            }
            for _ in 0..m.x2 {
                t = t * x2.clone();
            }
            acc = acc + t;
        }
        acc
    }

    pub fn map_coeffs<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Poly2<U> {
        Poly2::from_terms(self.terms().map(|(m, c)| (m, f(c))))
    }

    pub fn to_f64(&self) -> Poly2<f64> {
        self.map_coeffs(|c| c.to_f64())
    }

    /// `true` when every coefficient is negligible (exact zero in rational mode).
    pub fn is_negligible(&self) -> bool {
        self.terms.values().all(|c| c.is_negligible())
    }

    /// Largest coefficient magnitude, as `f64`.
    pub fn max_abs_coeff(&self) -> f64 {
        self.terms
            .values()
            .fold(0.0, |a, c| a.max(c.to_f64().abs()))
    }

    /// Parse the textual format `c*x1^i*x2^j + ...`. Parentheses and
    /// integer powers of groups are accepted as well.
    pub fn parse(text: &str) -> Result<Self, ParsePolyError> {
        let mut parser = Parser {
            src: text.as_bytes(),
            pos: 0,
        };
        let p = parser.expr()?;
        parser.skip_ws();
        if parser.pos != parser.src.len() {
            return Err(parser.error("unexpected trailing input"));
        }
        Ok(p.map_coeffs(|c| T::from_rational(c)))
    }
}

impl<T: Scalar> fmt::Display for Poly2<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms().enumerate() {
            let negative = *c < T::zero();
            let mag = if negative { -c.clone() } else { c.clone() };
            match (k, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mut parts: Vec<String> = Vec::new();
            if m == Monomial::ONE || !mag.is_one() {
                parts.push(mag.to_string());
            }
            for (name, e) in [("x1", m.x1), ("x2", m.x2)] {
                match e {
                    0 => {}
                    1 => parts.push(name.to_string()),
                    _ => parts.push(format!("{name}^{e}")),
                }
            }
            f.write_str(&parts.join("*"))?;
        }
        Ok(())
    }
}

impl<T: fmt::Debug> fmt::Debug for Poly2<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.terms.iter().map(|(m, c)| ((m.x1, m.x2), c)))
            .finish()
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

type RPoly = Poly2<Rational>;

impl Parser<'_> {
    fn error(&self, message: &str) -> ParsePolyError {
        ParsePolyError {
            position: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<RPoly, ParsePolyError> {
        let mut acc = RPoly::zero();
        let mut first = true;
        loop {
            let sign = match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    1
                }
                Some(b'-') => {
                    self.pos += 1;
                    -1
                }
                _ if first => 1,
                _ => return Ok(acc),
            };
            first = false;
            let t = self.product()?;
            acc = if sign < 0 { &acc - &t } else { &acc + &t };
        }
    }

    fn product(&mut self) -> Result<RPoly, ParsePolyError> {
        let mut acc = self.power()?;
        while self.peek() == Some(b'*') {
            self.pos += 1;
            let rhs = self.power()?;
            acc = &acc * &rhs;
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<RPoly, ParsePolyError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let e: u32 = std::str::from_utf8(&self.src[start..self.pos])
                .ok()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| self.error("expected a nonnegative integer exponent"))?;
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<RPoly, ParsePolyError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.error("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(b'x') => {
                let rest = &self.src[self.pos..];
                if rest.starts_with(b"x1") {
                    self.pos += 2;
                    Ok(RPoly::x1())
                } else if rest.starts_with(b"x2") {
                    self.pos += 2;
                    Ok(RPoly::x2())
                } else {
                    Err(self.error("unknown variable (expected x1 or x2)"))
                }
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => {
                let start = self.pos;
                while self.pos < self.src.len() {
                    let c = self.src[self.pos];
                    let exp_sign = (c == b'-' || c == b'+')
                        && self.pos > start
                        && matches!(self.src[self.pos - 1], b'e' | b'E');
                    if c.is_ascii_digit() || c == b'.' || c == b'e' || c == b'E' || exp_sign {
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
                let mut value = parse_rational(
                    std::str::from_utf8(&self.src[start..self.pos]).unwrap_or_default(),
                )
                .ok_or_else(|| self.error("malformed number"))?;
                // `7/3` binds as a single coefficient literal.
                if self.peek() == Some(b'/') {
                    self.pos += 1;
                    let den = match self.atom()? {
                        d if d.degree() == 0 && !d.is_zero() => d.coeff(Monomial::ONE),
                        _ => return Err(self.error("denominator must be a nonzero constant")),
                    };
                    value /= den;
                }
                Ok(RPoly::constant(value))
            }
            _ => Err(self.error("expected a number, x1, x2 or '('")),
        }
    }
}

impl<T: Scalar> Add for &Poly2<T> {
    type Output = Poly2<T>;

    fn add(self, rhs: &Poly2<T>) -> Poly2<T> {
        let mut out = self.clone();
        for (m, c) in rhs.terms() {
            out.add_term(m, c.clone());
        }
        out
    }
}

impl<T: Scalar> Sub for &Poly2<T> {
    type Output = Poly2<T>;

    fn sub(self, rhs: &Poly2<T>) -> Poly2<T> {
        let mut out = self.clone();
        for (m, c) in rhs.terms() {
            out.add_term(m, -c.clone());
        }
        out
    }
}

impl<T: Scalar> Mul for &Poly2<T> {
    type Output = Poly2<T>;

    fn mul(self, rhs: &Poly2<T>) -> Poly2<T> {
        let mut out = Poly2::zero();
        for (ma, ca) in self.terms() {
            for (mb, cb) in rhs.terms() {
                out.add_term(ma * mb, ca.clone() * cb.clone());
            }
        }
        out
    }
}

impl<T: Scalar> Neg for &Poly2<T> {
    type Output = Poly2<T>;

    fn neg(self) -> Poly2<T> {
        self.map_coeffs(|c| -c.clone())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $method:ident) => {
        impl<T: Scalar> $tr for Poly2<T> {
            type Output = Poly2<T>;

            fn $method(self, rhs: Poly2<T>) -> Poly2<T> {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl<T: Scalar> Neg for Poly2<T> {
    type Output = Poly2<T>;

    fn neg(self) -> Poly2<T> {
        -&self
    }
}

/// 2x2 matrix of polynomials.
#[derive(Clone, PartialEq, Debug)]
pub struct MatPoly2<T> {
    entries: [[Poly2<T>; 2]; 2],
}

impl<T: Scalar> MatPoly2<T> {
    pub fn new(entries: [[Poly2<T>; 2]; 2]) -> Self {
        MatPoly2 { entries }
    }

    pub fn symmetric(a11: Poly2<T>, a12: Poly2<T>, a22: Poly2<T>) -> Self {
        MatPoly2 {
            entries: [[a11, a12.clone()], [a12, a22]],
        }
    }

    pub fn identity() -> Self {
        Self::symmetric(Poly2::one(), Poly2::zero(), Poly2::one())
    }

    pub fn zero() -> Self {
        Self::symmetric(Poly2::zero(), Poly2::zero(), Poly2::zero())
    }

    /// `[[x1(1-x1), -x1 x2], [-x1 x2, x2(1-x2)]]`, the matrix attached to the
    /// Jacobi weight on the unit triangle.
    pub fn triangle() -> Self {
        let x1 = Poly2::<T>::x1();
        let x2 = Poly2::<T>::x2();
        let one = Poly2::<T>::one();
        Self::symmetric(&x1 * &(&one - &x1), -(&x1 * &x2), &x2 * &(&one - &x2))
    }

    /// Zero-based `(row, col)`.
    pub fn get(&self, row: usize, col: usize) -> &Poly2<T> {
        &self.entries[row][col]
    }

    pub fn entries(&self) -> &[[Poly2<T>; 2]; 2] {
        &self.entries
    }

    pub fn is_symmetric(&self) -> bool {
        self.entries[0][1] == self.entries[1][0]
    }

    pub fn degree(&self) -> u32 {
        self.entries
            .iter()
            .flatten()
            .map(Poly2::degree)
            .max()
            .unwrap_or(0)
    }

    pub fn map(&self, f: impl Fn(&Poly2<T>) -> Poly2<T>) -> Self {
        MatPoly2 {
            entries: [
                [f(&self.entries[0][0]), f(&self.entries[0][1])],
                [f(&self.entries[1][0]), f(&self.entries[1][1])],
            ],
        }
    }

    pub fn diff(&self, axis: Axis) -> Self {
        self.map(|p| p.diff(axis))
    }

    pub fn scale_poly(&self, s: &Poly2<T>) -> Self {
        self.map(|p| p * s)
    }

    pub fn mat_mul(&self, rhs: &Self) -> Self {
        let e = |i: usize, j: usize| {
            &(&self.entries[i][0] * &rhs.entries[0][j])
                + &(&self.entries[i][1] * &rhs.entries[1][j])
        };
        MatPoly2 {
            entries: [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]],
        }
    }

    pub fn mul_vec(&self, v: &[Poly2<T>; 2]) -> [Poly2<T>; 2] {
        let row = |i: usize| &(&self.entries[i][0] * &v[0]) + &(&self.entries[i][1] * &v[1]);
        [row(0), row(1)]
    }

    /// `a^t Phi b` for polynomial vectors.
    pub fn quadratic_form(&self, a: &[Poly2<T>; 2], b: &[Poly2<T>; 2]) -> Poly2<T> {
        let pb = self.mul_vec(b);
        &(&a[0] * &pb[0]) + &(&a[1] * &pb[1])
    }

    pub fn to_f64(&self) -> MatPoly2<f64> {
        MatPoly2 {
            entries: [
                [self.entries[0][0].to_f64(), self.entries[0][1].to_f64()],
                [self.entries[1][0].to_f64(), self.entries[1][1].to_f64()],
            ],
        }
    }

    pub fn is_negligible(&self) -> bool {
        self.entries.iter().flatten().all(Poly2::is_negligible)
    }
}

impl<T: Scalar> Add for &MatPoly2<T> {
    type Output = MatPoly2<T>;

    fn add(self, rhs: &MatPoly2<T>) -> MatPoly2<T> {
        let e = |i: usize, j: usize| &self.entries[i][j] + &rhs.entries[i][j];
        MatPoly2::new([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
    }
}

impl<T: Scalar> Sub for &MatPoly2<T> {
    type Output = MatPoly2<T>;

    fn sub(self, rhs: &MatPoly2<T>) -> MatPoly2<T> {
        let e = |i: usize, j: usize| &self.entries[i][j] - &rhs.entries[i][j];
        MatPoly2::new([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type P = Poly2<Rational>;

    fn p(s: &str) -> P {
        P::parse(s).unwrap()
    }

    #[test]
    fn graded_order_and_index() {
        let ms: Vec<_> = Monomial::up_to(2).collect();
        assert_eq!(
            ms,
            vec![
                Monomial::new(0, 0),
                Monomial::new(1, 0),
                Monomial::new(0, 1),
                Monomial::new(2, 0),
                Monomial::new(1, 1),
                Monomial::new(0, 2)
            ]
        );
        for (k, m) in Monomial::up_to(9).enumerate() {
            assert_eq!(m.graded_index(), k);
            assert_eq!(Monomial::from_graded_index(k), m);
        }
        assert_eq!(Monomial::count_up_to(12), 91);
        let mut sorted = ms.clone();
        sorted.sort();
        assert_eq!(sorted, ms);
    }

    #[test]
    fn multiplication_examples() {
        assert_eq!(&p("x1") * &p("x2"), p("x1*x2"));
        let l = p("1 - x1 - x2");
        assert_eq!(&l * &l, p("1 - 2*x1 - 2*x2 + x1^2 + 2*x1*x2 + x2^2"));
        let prod = &p("x1*(1-x1)") * &p("1 - 3*x1");
        assert_eq!(prod, p("x1 - 4*x1^2 + 3*x1^3"));
        assert_eq!(prod.degree(), 3);
    }

    #[test]
    fn multiplication_agrees_with_pointwise_evaluation() {
        let a = p("x1*(1-x1)");
        let b = p("1 - 3*x1");
        let prod = &a * &b;
        for (x, y) in [
            (0.1, 0.7),
            (-1.3, 2.0),
            (0.25, 0.25),
            (3.0, -0.5),
            (0.9, 0.05),
        ] {
            let lhs = prod.eval(x, y);
            let rhs = a.eval(x, y) * b.eval(x, y);
            assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + rhs.abs()));
        }
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(p("x1*(1-x1)").diff(Axis::X1), p("1 - 2*x1"));
        assert_eq!(p("-x1*x2").diff(Axis::X2), p("-x1"));
        assert!(p("7/3").diff(Axis::X1).is_zero());
        assert!(P::zero().diff(Axis::X2).is_zero());
    }

    #[test]
    fn exact_division_examples() {
        assert_eq!(p("x1*x2").div_exact(&p("x1")), Ok(p("x2")));
        assert_eq!(
            p("x1*(1-x1) - x1*x2").div_exact(&p("1 - x1 - x2")),
            Ok(p("x1"))
        );
        assert!(matches!(
            p("1 + x1").div_exact(&p("x1")),
            Err(PolyError::NotDivisible(_))
        ));
        assert_eq!(
            p("x1").div_exact(&P::zero()),
            Err(PolyError::DivisionByZero)
        );
        assert_eq!(P::zero().div_exact(&p("x1")), Ok(P::zero()));
    }

    #[test]
    fn evaluation_examples() {
        assert_eq!(p("x1 + x2").eval(0.25, 0.25), 0.5);
        assert_eq!(P::zero().eval(0.3, -2.0), 0.0);
        let third = Rational::from_ratio(1, 3);
        assert_eq!(
            p("x1*(1-x1)").eval_exact(&third, &third),
            Rational::from_ratio(2, 9)
        );
    }

    #[test]
    fn printing_and_parsing() {
        let q = p("7/3*x1^2*x2 - 3*x1 + 1 - x2^4");
        assert_eq!(q.to_string(), "1 - 3*x1 + 7/3*x1^2*x2 - x2^4");
        assert_eq!(p(&q.to_string()), q);
        assert_eq!(P::zero().to_string(), "0");
        assert_eq!(p("-x1").to_string(), "-x1");
        assert_eq!(p("0.5*x1 + 2 * (x2)^2"), p("1/2*x1 + 2*x2^2"));
        assert!(P::parse("x3").is_err());
        assert!(P::parse("1 +").is_err());
        assert!(P::parse("(x1").is_err());
        assert!(P::parse("x1 x2").is_err());
        assert_eq!(
            Poly2::<f64>::parse("1/4 + x1").unwrap().to_string(),
            "0.25 + x1"
        );
    }

    #[test]
    fn triangle_matrix() {
        let phi = MatPoly2::<Rational>::triangle();
        assert!(phi.is_symmetric());
        assert_eq!(phi.degree(), 2);
        assert_eq!(phi.get(0, 1), &p("-x1*x2"));
        assert_eq!(phi.get(1, 1), &p("x2 - x2^2"));
    }
}
