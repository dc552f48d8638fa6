//! Exact scalar arithmetic: rationals, quantum integers at a fixed rational
//! `q`, and Laurent polynomials in one formal parameter `u`.
//!
//! The parameter `u` stands for the lowest-weight eigenvalue: a unimodular
//! `omega` for positive weights ([`ParamKind::Circle`], where the `#`
//! involution sends `u^n -> u^-n`) or a real `t` for weight zero
//! ([`ParamKind::Real`], where the involution is the identity).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num::complex::Complex64;
use num::rational::BigRational;
use num::traits::{One, Signed, ToPrimitive, Zero};
use num::BigInt;
use serde::{Deserialize, Serialize};

use crate::error::{Result, TubeError};

pub type Rat = BigRational;

pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from(BigInt::from(n))
}

pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().expect("rational out of f64 range")
}

/// Formats a rational as `p/r` (or just `p` when the denominator is one).
pub fn rat_string(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn rat_from_str(s: &str) -> Result<Rat> {
    Rat::from_str(s.trim()).map_err(|e| TubeError::InvalidParam(format!("bad rational {s:?}: {e}")))
}

/// Involution behaviour of the formal parameter.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ParamKind {
    /// `u` lives on the unit circle; the involution inverts it.
    Circle,
    /// `u` is real; the involution fixes it.
    Real,
}

/// The loop parameter data: an exact rational `q > 0` and `delta = q + 1/q`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QParam {
    q: Rat,
    delta: Rat,
}

impl QParam {
    pub fn new(q: Rat) -> Result<Self> {
        if q <= Rat::zero() {
            return Err(TubeError::InvalidParam(format!(
                "q must be positive, got {}",
                rat_string(&q)
            )));
        }
        let delta = &q + q.recip();
        Ok(QParam { q, delta })
    }

    pub fn from_q_str(s: &str) -> Result<Self> {
        QParam::new(rat_from_str(s)?)
    }

    pub fn q(&self) -> &Rat {
        &self.q
    }

    /// `delta = q + 1/q`; always `>= 2` for rational `q > 0`.
    pub fn delta(&self) -> &Rat {
        &self.delta
    }

    pub fn is_q_one(&self) -> bool {
        self.q.is_one()
    }

    /// `q^n` for a signed exponent.
    pub fn qpow(&self, n: i64) -> Rat {
        let p = self.q.pow(n.unsigned_abs() as i32);
        if n < 0 {
            p.recip()
        } else {
            p
        }
    }

    /// The quantum integer `[n] = (q^n - q^-n)/(q - q^-1)`, with `[n] = n` at `q = 1`.
    pub fn qint(&self, n: i64) -> Rat {
        assert!(n >= 0, "qint takes a nonnegative index");
        if self.is_q_one() {
            return rat_int(n);
        }
        let num = self.qpow(n) - self.qpow(-n);
        let den = self.qpow(1) - self.qpow(-1);
        num / den
    }

    /// `q^n + q^-n`, the two-sided power sum used by the B-coefficient recursion.
    pub fn qpow_sym(&self, n: i64) -> Rat {
        self.qpow(n) + self.qpow(-n)
    }
}

/// A Laurent polynomial in `u` with exact rational coefficients.
///
/// Constants act as wildcards for the parameter kind: combining a constant
/// with any scalar adopts the other operand's kind.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct Scalar {
    kind: ParamKind,
    coeffs: BTreeMap<i64, Rat>,
}

impl Scalar {
    pub fn zero(kind: ParamKind) -> Self {
        Scalar {
            kind,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(kind: ParamKind, c: Rat) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(0, c);
        }
        Scalar { kind, coeffs }
    }

    pub fn one(kind: ParamKind) -> Self {
        Scalar::constant(kind, Rat::one())
    }

    pub fn monomial(kind: ParamKind, exp: i64, c: Rat) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(exp, c);
        }
        Scalar { kind, coeffs }
    }

    pub fn kind(&self) -> ParamKind {
        self.kind
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.is_empty() || (self.coeffs.len() == 1 && self.coeffs.contains_key(&0))
    }

    pub fn as_constant(&self) -> Option<Rat> {
        if self.coeffs.is_empty() {
            Some(Rat::zero())
        } else if self.is_constant() {
            self.coeffs.get(&0).cloned()
        } else {
            None
        }
    }

    pub fn coeff(&self, exp: i64) -> Rat {
        self.coeffs.get(&exp).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn support(&self) -> impl Iterator<Item = (&i64, &Rat)> {
        self.coeffs.iter()
    }

    fn joined_kind(&self, other: &Scalar) -> ParamKind {
        if self.is_constant() {
            other.kind
        } else if other.is_constant() {
            self.kind
        } else {
            assert_eq!(
                self.kind, other.kind,
                "cannot combine circle- and real-kind scalars"
            );
            self.kind
        }
    }

    fn insert(coeffs: &mut BTreeMap<i64, Rat>, exp: i64, c: Rat) {
        if c.is_zero() {
            return;
        }
        match coeffs.entry(exp) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().clone() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn scale(&self, c: &Rat) -> Scalar {
        if c.is_zero() {
            return Scalar::zero(self.kind);
        }
        Scalar {
            kind: self.kind,
            coeffs: self
                .coeffs
                .iter()
                .map(|(e, v)| (*e, v * c))
                .collect(),
        }
    }

    /// Multiplies by the monomial `u^exp`.
    pub fn shift(&self, exp: i64) -> Scalar {
        Scalar {
            kind: self.kind,
            coeffs: self.coeffs.iter().map(|(e, v)| (e + exp, v.clone())).collect(),
        }
    }

    /// The kind-appropriate involution: `u -> 1/u` on the circle, identity on the line.
    pub fn involute(&self) -> Scalar {
        match self.kind {
            ParamKind::Real => self.clone(),
            ParamKind::Circle => Scalar {
                kind: self.kind,
                coeffs: self.coeffs.iter().map(|(e, v)| (-e, v.clone())).collect(),
            },
        }
    }

    /// Substitutes a complex number for `u`; coefficients go to float last.
    pub fn eval_complex(&self, point: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in &self.coeffs {
            acc += Complex64::new(rat_to_f64(c), 0.0) * point.powi(*e as i32);
        }
        acc
    }

    /// Exact evaluation at a nonzero rational point.
    pub fn eval_rat(&self, point: &Rat) -> Rat {
        assert!(!point.is_zero(), "cannot evaluate a Laurent polynomial at 0");
        let mut acc = Rat::zero();
        for (e, c) in &self.coeffs {
            let p = point.pow(e.unsigned_abs() as i32);
            let p = if *e < 0 { p.recip() } else { p };
            acc += c * p;
        }
        acc
    }

    /// Exact evaluation at a Gaussian-rational point `re + im*i`.
    pub fn eval_gauss(&self, re: &Rat, im: &Rat) -> (Rat, Rat) {
        let mut acc = GaussRat::zero();
        let point = GaussRat {
            re: re.clone(),
            im: im.clone(),
        };
        for (e, c) in &self.coeffs {
            let p = point.powi(*e);
            acc = acc.add(&p.scale(c));
        }
        (acc.re, acc.im)
    }

    /// Exact division; `None` when `other` does not divide `self`.
    pub fn exact_div(&self, other: &Scalar) -> Option<Scalar> {
        if other.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Scalar::zero(self.joined_kind(other)));
        }
        // Divide as ordinary polynomials after clearing the lowest exponents.
        let a_min = *self.coeffs.keys().next().unwrap();
        let b_min = *other.coeffs.keys().next().unwrap();
        let mut rem = self.shift(-a_min);
        let div = other.shift(-b_min);
        let div_deg = *div.coeffs.keys().next_back().unwrap();
        let div_lead = div.coeff(div_deg);
        let mut quo = Scalar::zero(self.joined_kind(other));
        while !rem.is_zero() {
            let r_deg = *rem.coeffs.keys().next_back().unwrap();
            if r_deg < div_deg {
                return None;
            }
            let c = rem.coeff(r_deg) / div_lead.clone();
            let term = Scalar::monomial(quo.kind, r_deg - div_deg, c);
            rem = &rem - &(&term * &div);
            quo = &quo + &term;
        }
        Some(quo.shift(a_min - b_min))
    }

    /// Serializes as a map `{"exp": "p/r"}`.
    pub fn to_json(&self) -> serde_json::Value {
        let map: BTreeMap<String, String> = self
            .coeffs
            .iter()
            .map(|(e, c)| (e.to_string(), rat_string(c)))
            .collect();
        serde_json::to_value(map).expect("scalar serialization")
    }

    pub fn from_json(kind: ParamKind, v: &serde_json::Value) -> Result<Scalar> {
        let map: BTreeMap<String, String> = serde_json::from_value(v.clone())
            .map_err(|e| TubeError::InvalidParam(format!("bad scalar json: {e}")))?;
        let mut coeffs = BTreeMap::new();
        for (e, c) in map {
            let exp: i64 = e
                .parse()
                .map_err(|e| TubeError::InvalidParam(format!("bad exponent: {e}")))?;
            Scalar::insert(&mut coeffs, exp, rat_from_str(&c)?);
        }
        Ok(Scalar { kind, coeffs })
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, other: &Scalar) -> Scalar {
        let kind = self.joined_kind(other);
        let mut coeffs = self.coeffs.clone();
        for (e, c) in &other.coeffs {
            Scalar::insert(&mut coeffs, *e, c.clone());
        }
        Scalar { kind, coeffs }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, other: &Scalar) -> Scalar {
        self + &(-other)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar {
            kind: self.kind,
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, other: &Scalar) -> Scalar {
        let kind = self.joined_kind(other);
        let mut coeffs = BTreeMap::new();
        for (e1, c1) in &self.coeffs {
            for (e2, c2) in &other.coeffs {
                Scalar::insert(&mut coeffs, e1 + e2, c1 * c2);
            }
        }
        Scalar { kind, coeffs }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match e {
                0 => write!(f, "{}", rat_string(c))?,
                1 => write!(f, "({})u", rat_string(c))?,
                _ => write!(f, "({})u^{}", rat_string(c), e)?,
            }
        }
        Ok(())
    }
}

/// Minimal exact Gaussian-rational helper for evaluating at `i`-like points.
#[derive(Clone, Debug)]
struct GaussRat {
    re: Rat,
    im: Rat,
}

impl GaussRat {
    fn zero() -> Self {
        GaussRat {
            re: Rat::zero(),
            im: Rat::zero(),
        }
    }

    fn one() -> Self {
        GaussRat {
            re: Rat::one(),
            im: Rat::zero(),
        }
    }

    fn add(&self, o: &GaussRat) -> GaussRat {
        GaussRat {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
        }
    }

    fn mul(&self, o: &GaussRat) -> GaussRat {
        GaussRat {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    fn scale(&self, c: &Rat) -> GaussRat {
        GaussRat {
            re: &self.re * c,
            im: &self.im * c,
        }
    }

    fn inv(&self) -> GaussRat {
        let n = &self.re * &self.re + &self.im * &self.im;
        assert!(!n.is_zero(), "division by zero Gaussian rational");
        GaussRat {
            re: &self.re / &n,
            im: -&self.im / &n,
        }
    }

    fn powi(&self, e: i64) -> GaussRat {
        let base = if e < 0 { self.inv() } else { self.clone() };
        let mut acc = GaussRat::one();
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        acc
    }
}

/// `|r|` as a rational.
pub fn rat_abs(r: &Rat) -> Rat {
    r.abs()
}
