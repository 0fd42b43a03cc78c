//! A complex-number tower that stays exact as long as it can.
//!
//! `ExactComplex` holds one of three representations: a rational, an element
//! of a number field with a fixed complex embedding, or a binary big-float
//! pair.  Arithmetic promotes operands to the cheapest common level:
//!
//! * rationals embed into any field as constants;
//! * two quadratic fields `ℚ(√a)`, `ℚ(√b)` with small radicands merge into
//!   the biquadratic compositum `ℚ(√a, √b)`;
//! * anything else degrades to floating point at the carried precision.
//!
//! Every value carries an evaluation precision (bits); binary operations
//! propagate the maximum of the operand precisions, mirroring the float
//! layer.  Quadratic field values are normalised on construction: radicands
//! are made squarefree and the embedding is rewritten on the principal
//! branch, so `√-8` and `2·√-2` are literally the same value.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::bigfloat::{f_to_decimal_string, CF, DEFAULT_PREC};
use super::numberfield::{
    quad_value, sqrt_coords_in_compositum, square_part, NumberField, NumberFieldElement,
    COMPOSITUM_LIMIT,
};
use super::NumericsError;

#[derive(Clone, Debug)]
pub enum Value {
    Rat(BigRational),
    Alg(Box<NumberFieldElement>),
    Dec(CF),
}

#[derive(Clone, Debug)]
pub struct ExactComplex {
    pub value: Value,
    pub prec: u32,
}

impl ExactComplex {
    pub fn rat(q: BigRational) -> Self {
        ExactComplex { value: Value::Rat(q), prec: DEFAULT_PREC }
    }

    pub fn from_int(n: i64) -> Self {
        Self::rat(BigRational::from(BigInt::from(n)))
    }

    pub fn from_bigint(n: &BigInt) -> Self {
        Self::rat(BigRational::from(n.clone()))
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// The imaginary unit as the generator of ℚ(√-1).
    pub fn i() -> Self {
        Self::alg(NumberFieldElement::generator(&NumberField::quadratic(&BigInt::from(-1))))
    }

    /// √n for integer n: rational when n is a perfect square, otherwise an
    /// element of the canonical quadratic field (principal branch).
    pub fn sqrt_int(n: i64) -> Self {
        if n == 0 {
            return Self::zero();
        }
        let b = BigInt::from(n);
        let (s, core) = square_part(&b.abs());
        if core.is_one() && n > 0 {
            return Self::from_bigint(&s);
        }
        Self::alg(quad_value(&b, &BigRational::zero(), &BigRational::one(), true))
    }

    /// Wrap a field element, collapsing rational constants and rewriting
    /// quadratics over the canonical squarefree/principal generator.
    pub fn alg(e: NumberFieldElement) -> Self {
        ExactComplex { value: normalize_alg(e), prec: DEFAULT_PREC }
    }

    pub fn dec(z: CF) -> Self {
        let prec = z.precision().max(1);
        ExactComplex { value: Value::Dec(z), prec }
    }

    pub fn at_prec(mut self, prec: u32) -> Self {
        self.prec = prec;
        if let Value::Dec(z) = &self.value {
            self.value = Value::Dec(z.with_prec(prec));
        }
        self
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self.value, Value::Dec(_))
    }

    pub fn is_zero(&self) -> bool {
        match &self.value {
            Value::Rat(q) => q.is_zero(),
            Value::Alg(e) => e.is_zero(),
            Value::Dec(z) => z.is_exact_zero(),
        }
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        match &self.value {
            Value::Rat(q) => Some(q.clone()),
            Value::Alg(e) => e.as_rational(),
            Value::Dec(_) => None,
        }
    }

    /// Numeric value at `prec` bits.
    pub fn eval(&self, prec: u32) -> CF {
        match &self.value {
            Value::Rat(q) => CF::from_rats(q, &BigRational::zero(), prec),
            Value::Alg(e) => e
                .eval(prec)
                .expect("field embeddings are validated when values are constructed"),
            Value::Dec(z) => z.with_prec(prec),
        }
    }

    /// Numeric value at the carried precision.
    pub fn eval_default(&self) -> CF {
        self.eval(self.prec)
    }

    pub fn neg(&self) -> Self {
        let value = match &self.value {
            Value::Rat(q) => Value::Rat(-q),
            Value::Alg(e) => Value::Alg(Box::new(e.neg())),
            Value::Dec(z) => Value::Dec(-z),
        };
        ExactComplex { value, prec: self.prec }
    }

    pub fn add(&self, other: &Self) -> Self {
        let prec = self.prec.max(other.prec);
        match unify(self, other, prec) {
            Unified::Rat(a, b) => ExactComplex { value: Value::Rat(a + b), prec },
            Unified::Alg(a, b) => ExactComplex { value: normalize_alg(a.add(&b)), prec },
            Unified::Dec(a, b) => ExactComplex { value: Value::Dec(&a + &b), prec },
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let prec = self.prec.max(other.prec);
        match unify(self, other, prec) {
            Unified::Rat(a, b) => ExactComplex { value: Value::Rat(a * b), prec },
            Unified::Alg(a, b) => ExactComplex { value: normalize_alg(a.mul(&b)), prec },
            Unified::Dec(a, b) => ExactComplex { value: Value::Dec(&a * &b), prec },
        }
    }

    pub fn div(&self, other: &Self) -> Result<Self, NumericsError> {
        if other.is_zero() {
            return Err(NumericsError::DivisionByZero);
        }
        let prec = self.prec.max(other.prec);
        Ok(match unify(self, other, prec) {
            Unified::Rat(a, b) => ExactComplex { value: Value::Rat(a / b), prec },
            Unified::Alg(a, b) => {
                ExactComplex { value: normalize_alg(a.mul(&b.inv()?)), prec }
            }
            Unified::Dec(a, b) => ExactComplex { value: Value::Dec(&a / &b), prec },
        })
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        let value = match &self.value {
            Value::Rat(r) => Value::Rat(r * q),
            Value::Alg(e) => normalize_alg(e.scale(q)),
            Value::Dec(z) => {
                let f = super::bigfloat::f_from_rat(q, self.prec);
                Value::Dec(z.mul_f(&f))
            }
        };
        ExactComplex { value, prec: self.prec }
    }

    /// Exact equality; `None` when one side is a float (no certification).
    pub fn eq_exact(&self, other: &Self) -> Option<bool> {
        if !self.is_exact() || !other.is_exact() {
            return None;
        }
        match unify(self, other, self.prec.max(other.prec)) {
            Unified::Rat(a, b) => Some(a == b),
            Unified::Alg(a, b) => Some(a == b),
            Unified::Dec(_, _) => None,
        }
    }
}

impl PartialEq for ExactComplex {
    /// Exact representations compare exactly (after promotion); floats
    /// compare bit-for-bit.  Mixed exact/float never compares equal.
    fn eq(&self, other: &Self) -> bool {
        match (self.eq_exact(other), &self.value, &other.value) {
            (Some(t), _, _) => t,
            (None, Value::Dec(a), Value::Dec(b)) => a.re == b.re && a.im == b.im,
            _ => false,
        }
    }
}

enum Unified {
    Rat(BigRational, BigRational),
    Alg(NumberFieldElement, NumberFieldElement),
    Dec(CF, CF),
}

/// Shape of a field for promotion decisions.
enum Shape {
    /// Canonical ℚ(√d): squarefree radicand, principal embedding.
    Quad(BigInt),
    /// ℚ(√a, √b) built by `NumberField::compositum`.
    Comp(i64, i64),
    Generic,
}

fn shape(k: &NumberField) -> Shape {
    if let Some((a, b)) = k.parents {
        return Shape::Comp(a, b);
    }
    if let Some(d) = k.quadratic_radicand() {
        // construction normalises quadratics, so d is squarefree/principal
        return Shape::Quad(d);
    }
    Shape::Generic
}

fn small(d: &BigInt) -> Option<i64> {
    use num_traits::ToPrimitive;
    let v = d.to_i64()?;
    (v.unsigned_abs() <= COMPOSITUM_LIMIT as u64).then_some(v)
}

fn embed_quad_in_compositum(e: &NumberFieldElement, c: i64, other: i64) -> NumberFieldElement {
    let k = NumberField::compositum(
        if c < other { c } else { other },
        if c < other { other } else { c },
    );
    // order of parents does not change the field or the generator t = √a+√b
    let root = NumberFieldElement::new(k.clone(), sqrt_coords_in_compositum(c, other));
    let x = NumberFieldElement::from_rat(&k, &e.coeffs[0]);
    x.add(&root.scale(&e.coeffs[1]))
}

fn unify(a: &ExactComplex, b: &ExactComplex, prec: u32) -> Unified {
    use Value::*;
    match (&a.value, &b.value) {
        (Rat(x), Rat(y)) => Unified::Rat(x.clone(), y.clone()),
        (Rat(x), Alg(e)) => {
            Unified::Alg(NumberFieldElement::from_rat(&e.field, x), (**e).clone())
        }
        (Alg(e), Rat(y)) => {
            Unified::Alg((**e).clone(), NumberFieldElement::from_rat(&e.field, y))
        }
        (Alg(e1), Alg(e2)) if e1.field == e2.field => {
            Unified::Alg((**e1).clone(), (**e2).clone())
        }
        (Alg(e1), Alg(e2)) => match (shape(&e1.field), shape(&e2.field)) {
            (Shape::Quad(c1), Shape::Quad(c2)) => {
                match (small(&c1), small(&c2)) {
                    (Some(v1), Some(v2)) if v1 != v2 => Unified::Alg(
                        embed_quad_in_compositum(e1, v1, v2),
                        embed_quad_in_compositum(e2, v2, v1),
                    ),
                    // equal radicands would mean equal fields, handled above
                    _ => Unified::Dec(a.eval(prec), b.eval(prec)),
                }
            }
            (Shape::Quad(c), Shape::Comp(pa, pb)) => match small(&c) {
                Some(v) if v == pa || v == pb => {
                    let other = if v == pa { pb } else { pa };
                    Unified::Alg(embed_quad_in_compositum(e1, v, other), (**e2).clone())
                }
                _ => Unified::Dec(a.eval(prec), b.eval(prec)),
            },
            (Shape::Comp(pa, pb), Shape::Quad(c)) => match small(&c) {
                Some(v) if v == pa || v == pb => {
                    let other = if v == pa { pb } else { pa };
                    Unified::Alg((**e1).clone(), embed_quad_in_compositum(e2, v, other))
                }
                _ => Unified::Dec(a.eval(prec), b.eval(prec)),
            },
            _ => Unified::Dec(a.eval(prec), b.eval(prec)),
        },
        _ => Unified::Dec(a.eval(prec), b.eval(prec)),
    }
}

/// ℚ-coordinates of a family of exact values in one common field.
///
/// Finds the smallest field of the promotion tower containing every value
/// (ℚ itself, a single number field, or the biquadratic compositum of two
/// small quadratic fields) and returns each value's coordinate vector in
/// its power basis, all of one length.  Splitting a ℂ-linear condition over
/// such coordinates turns it into equivalent ℚ-linear conditions; any
/// faithful basis works, so no canonical choice is needed.  Returns `None`
/// when a value is floating point or no supported common field exists.
pub fn rational_coordinates(values: &[ExactComplex]) -> Option<Vec<Vec<BigRational>>> {
    let mut fields: Vec<&NumberField> = Vec::new();
    for v in values {
        match &v.value {
            Value::Dec(_) => return None,
            Value::Alg(e) => {
                if !fields.iter().any(|k| **k == e.field) {
                    fields.push(&e.field);
                }
            }
            Value::Rat(_) => {}
        }
    }
    // the target field and a map sending each member field to its radicand
    // when an embedding step is needed
    let embed = |e: &NumberFieldElement, target: &NumberField| -> Option<NumberFieldElement> {
        if e.field == *target {
            return Some(e.clone());
        }
        let d = e.field.quadratic_radicand()?;
        let (a, b) = target.parents?;
        let v = small(&d)?;
        if v != a && v != b {
            return None;
        }
        Some(embed_quad_in_compositum(e, v, if v == a { b } else { a }))
    };
    let target: Option<NumberField> = match fields.len() {
        0 => None,
        1 => Some(fields[0].clone()),
        _ => {
            // every field must be quadratic or the one compositum present
            let comps: Vec<&&NumberField> =
                fields.iter().filter(|k| k.parents.is_some()).collect();
            let base = match comps.len() {
                0 => {
                    let d1 = small(&fields[0].quadratic_radicand()?)?;
                    let d2 = small(&fields[1].quadratic_radicand()?)?;
                    NumberField::compositum(d1.min(d2), d1.max(d2))
                }
                1 => (*comps[0]).clone(),
                _ => return None,
            };
            Some(base)
        }
    };
    let deg = target.as_ref().map_or(1, |k| k.degree());
    let mut out = Vec::with_capacity(values.len());
    for v in values {
        let mut row = vec![BigRational::zero(); deg];
        match &v.value {
            Value::Rat(q) => row[0] = q.clone(),
            Value::Alg(e) => {
                let lifted = embed(e, target.as_ref()?)?;
                if lifted.coeffs.len() > deg {
                    return None;
                }
                row[..lifted.coeffs.len()].clone_from_slice(&lifted.coeffs);
            }
            Value::Dec(_) => return None,
        }
        out.push(row);
    }
    Some(out)
}

/// Collapse rational constants; rewrite quadratic values over the canonical
/// squarefree radicand with the principal embedding.
fn normalize_alg(e: NumberFieldElement) -> Value {
    if let Some(q) = e.as_rational() {
        return Value::Rat(q);
    }
    if e.field.parents.is_none() {
        if let Some(d) = e.field.quadratic_radicand() {
            let (s, core_abs) = square_part(&d.abs());
            let core = if d.is_negative() { -core_abs } else { core_abs };
            let canonical = NumberField::quadratic(&core);
            if canonical == e.field {
                return Value::Alg(Box::new(NumberFieldElement::new(canonical, e.coeffs)));
            }
            // θ_old = ±s·θ_new; the stored root approximation decides the sign
            let principal = if core.is_negative() {
                e.field.root_im.is_positive()
            } else {
                e.field.root_re.is_positive()
            };
            let mut y = &e.coeffs[1] * BigRational::from(s);
            if !principal {
                y = -y;
            }
            return Value::Alg(Box::new(NumberFieldElement::new(
                canonical,
                vec![e.coeffs[0].clone(), y],
            )));
        }
    }
    Value::Alg(Box::new(e))
}

impl fmt::Display for ExactComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.value {
            Value::Rat(q) => write!(f, "{}", q),
            Value::Alg(e) => {
                if let Some(d) = e.field.quadratic_radicand() {
                    let (x, y) = (&e.coeffs[0], &e.coeffs[1]);
                    if x.is_zero() {
                        return write!(f, "{}·√({})", y, d);
                    }
                    if y.is_positive() {
                        return write!(f, "{} + {}·√({})", x, y, d);
                    }
                    return write!(f, "{} - {}·√({})", x, -y, d);
                }
                write!(f, "alg[")?;
                for (i, c) in e.coeffs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{}", c)?;
                }
                write!(f, "] mod ")?;
                for (i, c) in e.field.poly.iter().enumerate().rev() {
                    if i == e.field.poly.len() - 1 {
                        write!(f, "θ^{}", i)?;
                    } else if !c.is_zero() {
                        write!(f, " {} {}·θ^{}", if c.is_negative() { "-" } else { "+" }, c.abs(), i)?;
                    }
                }
                Ok(())
            }
            Value::Dec(z) => {
                let re = f_to_decimal_string(&z.re);
                let im = f_to_decimal_string(&z.im);
                write!(f, "{} + {}i", re, im)
            }
        }
    }
}
