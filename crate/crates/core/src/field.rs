//! Arithmetic in the finite fields `F_{p^m}`.
//!
//! Elements are stored as the base-`p` integer encoding of their coordinate
//! vector over a fixed monic irreducible modulus: coordinate `i` is the
//! coefficient of `X^i`. Extension fields use the Conway polynomials shipped
//! in [`CONWAY`], so the embedding `F_{p^m} -> F_{p^M}` for `m | M` is the
//! canonical one (`X_m -> X_M^{(p^M-1)/(p^m-1)}`).

use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};

/// Largest supported characteristic.
pub const MAX_CHARACTERISTIC: u32 = 64;
/// Largest coordinate count an element may carry.
pub const MAX_DEGREE: u32 = 12;

/// Conway polynomials, low-to-high coefficients without the leading 1.
static CONWAY: &[(u32, u32, &[u32])] = &[
    (2, 2, &[1, 1]),
    (2, 3, &[1, 1, 0]),
    (2, 4, &[1, 1, 0, 0]),
    (2, 5, &[1, 0, 1, 0, 0]),
    (2, 6, &[1, 1, 0, 1, 1, 0]),
    (3, 2, &[2, 2]),
    (3, 3, &[1, 2, 0]),
    (3, 4, &[2, 0, 0, 2]),
    (3, 5, &[1, 2, 0, 0, 0]),
    (3, 6, &[2, 2, 1, 0, 2, 0]),
    (5, 2, &[2, 4]),
    (5, 3, &[3, 3, 0]),
    (5, 4, &[2, 4, 4, 0]),
    (5, 5, &[3, 4, 0, 0, 0]),
    (5, 6, &[2, 0, 1, 4, 1, 0]),
];

pub(crate) fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// A finite field `F_{p^m}` from the built-in table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GaloisField {
    p: u32,
    m: u32,
}

impl GaloisField {
    pub fn new(p: u32, m: u32) -> Result<Self> {
        if !is_prime(p) || p > MAX_CHARACTERISTIC {
            return Err(Error::UnsupportedField { p, m });
        }
        if m == 0 || m > MAX_DEGREE {
            return Err(Error::UnsupportedField { p, m });
        }
        if m > 1 && modulus_of(p, m).is_none() {
            return Err(Error::UnsupportedField { p, m });
        }
        Ok(GaloisField { p, m })
    }

    /// The prime field `F_p`.
    pub fn prime(p: u32) -> Result<Self> {
        Self::new(p, 1)
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    pub fn order(&self) -> u64 {
        (self.p as u64).pow(self.m)
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            p: self.p,
            m: self.m,
            value: 0,
        }
    }

    pub fn one(&self) -> FieldElement {
        FieldElement {
            p: self.p,
            m: self.m,
            value: 1,
        }
    }

    /// The class of the integer `n` in the prime subfield.
    pub fn from_int(&self, n: i64) -> FieldElement {
        let p = self.p as i64;
        let value = n.rem_euclid(p) as u64;
        FieldElement {
            p: self.p,
            m: self.m,
            value,
        }
    }

    /// The generator `X` of the polynomial basis (equal to `1` when `m = 1`).
    pub fn generator(&self) -> FieldElement {
        if self.m == 1 {
            // X + c is the modulus; only meaningful for the Conway root.
            return self.one();
        }
        FieldElement {
            p: self.p,
            m: self.m,
            value: self.p as u64,
        }
    }

    pub fn from_digits(&self, digits: &[u32]) -> Result<FieldElement> {
        if digits.len() > self.m as usize {
            return Err(Error::InvalidFieldElement);
        }
        let mut value = 0u64;
        for &d in digits.iter().rev() {
            if d >= self.p {
                return Err(Error::InvalidFieldElement);
            }
            value = value * self.p as u64 + d as u64;
        }
        Ok(FieldElement {
            p: self.p,
            m: self.m,
            value,
        })
    }

    /// Element with the given base-`p` encoding.
    pub fn from_index(&self, value: u64) -> Result<FieldElement> {
        if value >= self.order() {
            return Err(Error::InvalidFieldElement);
        }
        Ok(FieldElement {
            p: self.p,
            m: self.m,
            value,
        })
    }

    /// All elements in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        let (p, m) = (self.p, self.m);
        (0..self.order()).map(move |value| FieldElement { p, m, value })
    }

    fn contains(&self, x: &FieldElement) -> bool {
        x.p == self.p && x.m == self.m
    }

    /// Canonical embedding of `x` into this field; `x.degree()` must divide `self.degree()`.
    pub fn embed(&self, x: FieldElement) -> Result<FieldElement> {
        if x.p != self.p || !self.m.is_multiple_of(x.m) {
            return Err(Error::FieldMismatch);
        }
        if x.m == self.m {
            return Ok(x);
        }
        let exponent = (self.order() - 1) / (x.field().order() - 1);
        let gamma = self.generator_power(exponent);
        let mut acc = self.zero();
        let mut power = self.one();
        for d in x.digits() {
            acc += power.scale_int(d);
            power = power * gamma;
        }
        Ok(acc)
    }

    fn generator_power(&self, e: u64) -> FieldElement {
        self.generator().pow(e)
    }

    /// Preimage of `x` under the embedding of the subfield of degree `sub`, if any.
    pub fn restrict(&self, x: FieldElement, sub: u32) -> Result<Option<FieldElement>> {
        if !self.contains(&x) || sub == 0 || !self.m.is_multiple_of(sub) {
            return Err(Error::FieldMismatch);
        }
        let small = GaloisField::new(self.p, sub)?;
        if sub == 1 {
            return Ok((x.value < self.p as u64).then(|| small.from_int(x.value as i64)));
        }
        for y in small.elements() {
            if self.embed(y)? == x {
                return Ok(Some(y));
            }
        }
        Ok(None)
    }

    /// Smallest supported field containing both `self` and `other`.
    pub fn join(&self, other: &GaloisField) -> Result<GaloisField> {
        if self.p != other.p {
            return Err(Error::FieldMismatch);
        }
        let l = num_integer::lcm(self.m, other.m);
        GaloisField::new(self.p, l)
    }
}

impl fmt::Display for GaloisField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.m == 1 {
            write!(f, "GF({})", self.p)
        } else {
            write!(f, "GF({}^{})", self.p, self.m)
        }
    }
}

fn modulus_of(p: u32, m: u32) -> Option<&'static [u32]> {
    CONWAY
        .iter()
        .find(|(q, d, _)| *q == p && *d == m)
        .map(|(_, _, c)| *c)
}

/// An element of `F_{p^m}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FieldElement {
    p: u32,
    m: u32,
    value: u64,
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.m == 1 {
            return write!(f, "{}", self.value);
        }
        let digits = self.digits();
        let mut first = true;
        for (i, d) in digits.iter().enumerate().rev() {
            if *d == 0 {
                continue;
            }
            if !first {
                f.write_str("+")?;
            }
            first = false;
            match (i, d) {
                (0, d) => write!(f, "{}", d)?,
                (1, 1) => f.write_str("X")?,
                (1, d) => write!(f, "{}X", d)?,
                (i, 1) => write!(f, "X^{}", i)?,
                (i, d) => write!(f, "{}X^{}", d, i)?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

type Coords = [u32; MAX_DEGREE as usize];

impl FieldElement {
    pub fn field(&self) -> GaloisField {
        GaloisField {
            p: self.p,
            m: self.m,
        }
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.m
    }

    /// Base-`p` encoding of the coordinate vector.
    pub fn index(&self) -> u64 {
        self.value
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn is_one(&self) -> bool {
        self.value == 1
    }

    /// Coordinates over the polynomial basis, low to high, always `m` long.
    pub fn digits(&self) -> Vec<u32> {
        let c = self.coords();
        c[..self.m as usize].to_vec()
    }

    /// True when the element lies in the prime subfield.
    pub fn is_prime_field(&self) -> bool {
        self.value < self.p as u64
    }

    fn coords(&self) -> Coords {
        let mut c = [0u32; MAX_DEGREE as usize];
        let mut v = self.value;
        let p = self.p as u64;
        for slot in c.iter_mut().take(self.m as usize) {
            *slot = (v % p) as u32;
            v /= p;
        }
        c
    }

    fn from_coords(p: u32, m: u32, c: &Coords) -> Self {
        let mut value = 0u64;
        for &d in c[..m as usize].iter().rev() {
            value = value * p as u64 + d as u64;
        }
        FieldElement { p, m, value }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.p != other.p || self.m != other.m {
            Err(Error::FieldMismatch)
        } else {
            Ok(())
        }
    }

    pub fn try_add(self, other: Self) -> Result<Self> {
        self.check_same(&other)?;
        Ok(self.add_unchecked(other))
    }

    pub fn try_mul(self, other: Self) -> Result<Self> {
        self.check_same(&other)?;
        Ok(self.mul_unchecked(other))
    }

    pub fn try_sub(self, other: Self) -> Result<Self> {
        self.check_same(&other)?;
        Ok(self.add_unchecked(other.neg_unchecked()))
    }

    pub fn try_div(self, other: Self) -> Result<Self> {
        self.check_same(&other)?;
        Ok(self.mul_unchecked(other.inv()?))
    }

    fn add_unchecked(self, other: Self) -> Self {
        if self.m == 1 {
            let value = (self.value + other.value) % self.p as u64;
            return FieldElement { value, ..self };
        }
        let (a, b) = (self.coords(), other.coords());
        let mut c = [0u32; MAX_DEGREE as usize];
        for i in 0..self.m as usize {
            c[i] = (a[i] + b[i]) % self.p;
        }
        Self::from_coords(self.p, self.m, &c)
    }

    fn neg_unchecked(self) -> Self {
        if self.m == 1 {
            let value = (self.p as u64 - self.value) % self.p as u64;
            return FieldElement { value, ..self };
        }
        let a = self.coords();
        let mut c = [0u32; MAX_DEGREE as usize];
        for i in 0..self.m as usize {
            c[i] = (self.p - a[i]) % self.p;
        }
        Self::from_coords(self.p, self.m, &c)
    }

    fn mul_unchecked(self, other: Self) -> Self {
        let p = self.p;
        if self.m == 1 {
            let value = (self.value * other.value) % p as u64;
            return FieldElement { value, ..self };
        }
        if self.value == 0 || other.value == 0 {
            return FieldElement { value: 0, ..self };
        }
        let m = self.m as usize;
        let (a, b) = (self.coords(), other.coords());
        let mut prod = [0u32; 2 * MAX_DEGREE as usize];
        for i in 0..m {
            if a[i] == 0 {
                continue;
            }
            for j in 0..m {
                prod[i + j] = (prod[i + j] + a[i] * b[j]) % p;
            }
        }
        let modulus = modulus_of(p, self.m).expect("validated field");
        for d in (m..2 * m - 1).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            // X^m = -(modulus low part)
            for k in 0..m {
                let sub = (c * modulus[k]) % p;
                prod[d - m + k] = (prod[d - m + k] + p - sub) % p;
            }
        }
        let mut c = [0u32; MAX_DEGREE as usize];
        c[..m].copy_from_slice(&prod[..m]);
        Self::from_coords(p, self.m, &c)
    }

    /// Multiplies by an integer from the prime field.
    pub fn scale_int(self, k: u32) -> Self {
        self.mul_unchecked(self.field().from_int(k as i64))
    }

    pub fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = self.field().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_unchecked(base);
            }
            base = base.mul_unchecked(base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(self.field().order() - 2))
    }

    /// `x^{p^e}`; negative `e` gives iterated `p`-th roots.
    pub fn frobenius(self, e: i64) -> Self {
        let steps = e.rem_euclid(self.m as i64);
        let mut x = self;
        for _ in 0..steps {
            x = x.pow(self.p as u64);
        }
        x
    }

    /// The unique `y` with `y^p = x`.
    pub fn pth_root(self) -> Self {
        self.frobenius(-1)
    }

    /// Roots of `X^p - X - a` in this field.
    pub fn artin_schreier_roots(self) -> Vec<Self> {
        let field = self.field();
        // One root r gives all of them as r + i, i in F_p.
        for r in field.elements() {
            if r.pow(self.p as u64) - r == self {
                return (0..self.p).map(|i| r + field.from_int(i as i64)).collect();
            }
        }
        Vec::new()
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $body:expr) => {
        impl core::ops::$tr for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                assert!(
                    self.p == rhs.p && self.m == rhs.m,
                    "field mismatch: {} vs {}",
                    self.field(),
                    rhs.field()
                );
                $body(self, rhs)
            }
        }
    };
}

binop!(Add, add, |a: FieldElement, b| a.add_unchecked(b));
binop!(Sub, sub, |a: FieldElement, b: FieldElement| a
    .add_unchecked(b.neg_unchecked()));
binop!(Mul, mul, |a: FieldElement, b| a.mul_unchecked(b));

impl core::ops::Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.neg_unchecked()
    }
}

impl core::ops::AddAssign for FieldElement {
    fn add_assign(&mut self, rhs: FieldElement) {
        *self = *self + rhs;
    }
}

/// Moore interpolation data: `sum_i c_i a_i^{p^j} = [j = 0 mod d]` for all `j >= 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MooreData {
    pub degree: u32,
    pub basis: Vec<FieldElement>,
    pub coefficients: Vec<FieldElement>,
}

impl MooreData {
    /// Evaluates `sum_i c_i a_i^{p^j}`.
    pub fn pairing(&self, j: i64) -> FieldElement {
        let field = self.basis[0].field();
        self.basis
            .iter()
            .zip(&self.coefficients)
            .fold(field.zero(), |acc, (a, c)| acc + *c * a.frobenius(j))
    }
}

/// Determinant of the Moore matrix with `(i, j)` entry `x_i^{p^{j-1}}`.
pub fn moore_determinant(xs: &[FieldElement]) -> Result<FieldElement> {
    let d = xs.len();
    if d == 0 {
        return Err(Error::InvalidArgument("empty Moore matrix"));
    }
    let field = xs[0].field();
    let mut rows: Vec<Vec<FieldElement>> = Vec::with_capacity(d);
    for x in xs {
        if x.field() != field {
            return Err(Error::FieldMismatch);
        }
        rows.push((0..d as i64).map(|j| x.frobenius(j)).collect());
    }
    let mut det = field.one();
    for col in 0..d {
        let Some(pivot) = (col..d).find(|&r| !rows[r][col].is_zero()) else {
            return Ok(field.zero());
        };
        if pivot != col {
            rows.swap(pivot, col);
            det = -det;
        }
        let inv = rows[col][col].inv()?;
        det = det * rows[col][col];
        for r in col + 1..d {
            let factor = rows[r][col] * inv;
            if factor.is_zero() {
                continue;
            }
            for k in col..d {
                let v = rows[col][k];
                rows[r][k] = rows[r][k] - factor * v;
            }
        }
    }
    Ok(det)
}

/// Moore data for `(p, d)`: basis `1, X, ..., X^{d-1}` of `F_{p^d}` over `F_p`
/// and the row vector `c` with `c B = e_1` for the Moore matrix `B`.
pub fn moore_basis(p: u32, d: u32) -> Result<MooreData> {
    if d == 0 {
        return Err(Error::InvalidArgument("Moore degree must be at least 1"));
    }
    let field = GaloisField::new(p, d)?;
    let basis: Vec<FieldElement> = if d == 1 {
        alloc::vec![field.one()]
    } else {
        let x = field.generator();
        (0..d as u64).map(|i| x.pow(i)).collect()
    };
    let n = d as usize;
    // Solve B^T c^T = e_1 where B[i][j] = a_i^{p^j}: row j of the system is
    // sum_i c_i a_i^{p^j} = delta_{j0}.
    let mut aug: Vec<Vec<FieldElement>> = (0..n)
        .map(|j| {
            let mut row: Vec<FieldElement> = basis.iter().map(|a| a.frobenius(j as i64)).collect();
            row.push(if j == 0 { field.one() } else { field.zero() });
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| !aug[r][col].is_zero())
            .ok_or(Error::InvalidArgument("singular Moore matrix"))?;
        aug.swap(pivot, col);
        let inv = aug[col][col].inv()?;
        for k in col..=n {
            aug[col][k] = aug[col][k] * inv;
        }
        for r in 0..n {
            if r == col || aug[r][col].is_zero() {
                continue;
            }
            let factor = aug[r][col];
            for k in col..=n {
                let v = aug[col][k];
                aug[r][k] = aug[r][k] - factor * v;
            }
        }
    }
    let coefficients = aug.iter().map(|row| row[n]).collect();
    Ok(MooreData {
        degree: d,
        basis,
        coefficients,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f4() -> GaloisField {
        GaloisField::new(2, 2).unwrap()
    }

    #[test]
    fn prime_field_addition() {
        let f2 = GaloisField::prime(2).unwrap();
        assert_eq!(f2.one() + f2.one(), f2.zero());
    }

    #[test]
    fn omega_squared() {
        let f = f4();
        let w = f.generator();
        assert_eq!(w * w, w + f.one());
        assert_eq!(w.inv().unwrap(), w + f.one());
        assert_eq!(w.frobenius(1), w + f.one());
    }

    #[test]
    fn inverse_by_search() {
        for field in [
            f4(),
            GaloisField::new(3, 2).unwrap(),
            GaloisField::new(5, 3).unwrap(),
        ] {
            for x in field.elements().skip(1) {
                let brute = field.elements().find(|y| x * *y == field.one()).unwrap();
                assert_eq!(x.inv().unwrap(), brute);
            }
        }
    }

    #[test]
    fn division_by_zero() {
        assert_eq!(f4().zero().inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn mismatched_fields() {
        let a = f4().one();
        let b = GaloisField::prime(2).unwrap().one();
        assert_eq!(a.try_add(b), Err(Error::FieldMismatch));
    }

    #[test]
    fn frobenius_round_trip_f8() {
        let f8 = GaloisField::new(2, 3).unwrap();
        for x in f8.elements() {
            assert_eq!(x.frobenius(0), x);
            assert_eq!(x.frobenius(1).frobenius(-1), x);
            assert_eq!(x.pth_root().pow(2), x);
            assert_eq!(x.frobenius(3), x);
        }
    }

    #[test]
    fn every_table_entry_is_primitive() {
        for &(p, m, _) in CONWAY {
            let field = GaloisField::new(p, m).unwrap();
            let x = field.generator();
            let order = field.order() - 1;
            let mut y = field.one();
            for k in 1..=order {
                y = y * x;
                if y.is_one() {
                    assert_eq!(k, order, "X has order {} in {}", k, field);
                }
            }
            assert!(y.is_one());
        }
    }

    #[test]
    fn embedding_is_a_ring_homomorphism() {
        for (p, small, big) in [
            (2, 2, 4),
            (2, 3, 6),
            (2, 2, 6),
            (3, 2, 6),
            (3, 3, 6),
            (5, 2, 4),
        ] {
            let s = GaloisField::new(p, small).unwrap();
            let b = GaloisField::new(p, big).unwrap();
            for x in s.elements() {
                for y in s.elements().step_by(3) {
                    assert_eq!(
                        b.embed(x + y).unwrap(),
                        b.embed(x).unwrap() + b.embed(y).unwrap()
                    );
                    assert_eq!(
                        b.embed(x * y).unwrap(),
                        b.embed(x).unwrap() * b.embed(y).unwrap()
                    );
                }
                assert_eq!(b.restrict(b.embed(x).unwrap(), small).unwrap(), Some(x));
            }
        }
        let f8 = GaloisField::new(2, 3).unwrap();
        assert_eq!(f8.embed(f4().one()), Err(Error::FieldMismatch));
    }

    #[test]
    fn moore_small_cases() {
        let m1 = moore_basis(3, 1).unwrap();
        assert_eq!(m1.basis.len(), 1);
        assert!(m1.basis[0].is_one() && m1.coefficients[0].is_one());
        for j in 0..5 {
            assert!(m1.pairing(j).is_one());
        }

        let m = moore_basis(2, 2).unwrap();
        let f = f4();
        let w = f.generator();
        assert_eq!(m.basis, alloc::vec![f.one(), w]);
        assert_eq!(m.coefficients, alloc::vec![w + f.one(), f.one()]);
    }

    #[test]
    fn moore_interpolation_identity() {
        for p in [2, 3, 5] {
            for d in 1..=4 {
                let data = moore_basis(p, d).unwrap();
                for j in 0..(2 * d as i64) {
                    let expected = if j % d as i64 == 0 { 1 } else { 0 };
                    assert_eq!(data.pairing(j).index(), expected, "p={} d={} j={}", p, d, j);
                }
            }
        }
    }

    #[test]
    fn moore_determinant_detects_dependence() {
        // Exhaustive over all tuples for p = 2, d <= 3.
        for d in 1..=3u32 {
            let field = GaloisField::new(2, d).unwrap();
            let q = field.order();
            let tuples = q.pow(d);
            for code in 0..tuples {
                let mut c = code;
                let xs: Vec<FieldElement> = (0..d)
                    .map(|_| {
                        let v = c % q;
                        c /= q;
                        field.from_index(v).unwrap()
                    })
                    .collect();
                // F_2-independence: no nonempty subset sums to zero.
                let independent = (1u32..(1 << d)).all(|mask| {
                    let s = (0..d as usize)
                        .filter(|i| mask & (1 << i) != 0)
                        .fold(field.zero(), |acc, i| acc + xs[i]);
                    !s.is_zero()
                });
                let det = moore_determinant(&xs).unwrap();
                assert_eq!(!det.is_zero(), independent);
            }
        }
    }

    #[test]
    fn artin_schreier_constant_roots() {
        let f2 = GaloisField::prime(2).unwrap();
        // X^2 - X - 1 has no root in F_2 but splits in F_4.
        assert!(f2.one().artin_schreier_roots().is_empty());
        let roots = f4().one().artin_schreier_roots();
        assert_eq!(roots.len(), 2);
        for r in roots {
            assert!((r * r - r).is_one());
        }
    }
}
