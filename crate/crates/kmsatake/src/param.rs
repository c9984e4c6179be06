//! Exact Laurent-polynomial coefficients in the parameter-class variables.
//!
//! Every coefficient appearing in this crate lives in the commutative ring
//! `Z[v^{±1} : v in Vars]` where the variables are the merged parameter
//! classes `s_c` (for `sigma`-symbols), their square-root-of-q images
//! `qh_c` (meaning `q_c^{1/2}`), the Hall-Littlewood variable `t`, the
//! one-variable symbol `z` used by rank-one identities, and auxiliary
//! rename targets. Rational coefficients only appear after a numeric
//! specialization; the symbolic invariants assert integrality.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// A single exponent variable.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Var {
    /// Parameter-class variable `s_c` (one per merged class of sigma symbols).
    Sigma(u16),
    /// `q_c^{1/2}`, the specialization target of `Sigma(c)^{-1}`.
    QHalf(u16),
    /// Hall-Littlewood `t` (the rename target of `sigma^2`).
    T,
    /// Generic one-variable symbol, used by the rank-one table checks.
    Z,
    /// Fresh rename target.
    Aux(u16),
}

impl Var {
    pub fn name(&self) -> String {
        match self {
            Var::Sigma(c) => format!("s{c}"),
            Var::QHalf(c) => format!("qh{c}"),
            Var::T => "t".to_string(),
            Var::Z => "z".to_string(),
            Var::Aux(k) => format!("a{k}"),
        }
    }

    pub fn parse(name: &str) -> Option<Var> {
        match name {
            "t" => return Some(Var::T),
            "z" => return Some(Var::Z),
            _ => {}
        }
        if let Some(rest) = name.strip_prefix("qh") {
            return rest.parse().ok().map(Var::QHalf);
        }
        if let Some(rest) = name.strip_prefix('s') {
            return rest.parse().ok().map(Var::Sigma);
        }
        if let Some(rest) = name.strip_prefix('a') {
            return rest.parse().ok().map(Var::Aux);
        }
        None
    }
}

/// A Laurent monomial: sorted sparse exponent vector, no zero exponents.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Mono(Vec<(Var, i64)>);

impl Mono {
    pub fn one() -> Self {
        Mono(Vec::new())
    }

    pub fn var(v: Var) -> Self {
        Mono(vec![(v, 1)])
    }

    pub fn power(v: Var, e: i64) -> Self {
        if e == 0 {
            Mono::one()
        } else {
            Mono(vec![(v, e)])
        }
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, v: Var) -> i64 {
        self.0
            .iter()
            .find(|(w, _)| *w == v)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, i64)> + '_ {
        self.0.iter().copied()
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            let (va, ea) = self.0[i];
            let (vb, eb) = other.0[j];
            match va.cmp(&vb) {
                std::cmp::Ordering::Less => {
                    out.push((va, ea));
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push((vb, eb));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    if ea + eb != 0 {
                        out.push((va, ea + eb));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Mono(out)
    }

    pub fn inv(&self) -> Mono {
        Mono(self.0.iter().map(|&(v, e)| (v, -e)).collect())
    }

    /// Signed total degree restricted to `Sigma` variables.
    pub fn sigma_degree(&self) -> i64 {
        self.0
            .iter()
            .filter(|(v, _)| matches!(v, Var::Sigma(_)))
            .map(|(_, e)| *e)
            .sum()
    }
}

/// What a variable is sent to under `ParamCoeff::substitute`.
#[derive(Clone, Debug)]
pub enum Subst {
    /// Keep the variable as is.
    Keep,
    /// `v^k  ->  target^{k*num/den}`; errors when `k*num` is not divisible by `den`.
    Monomial { target: Var, num: i64, den: i64 },
    /// `v^k -> r^k`, exact rational arithmetic.
    Rational(BigRational),
}

/// Sparse exact Laurent polynomial over the variables of [`Var`].
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct ParamCoeff {
    terms: BTreeMap<Mono, BigRational>,
}

pub fn big(i: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(i))
}

impl ParamCoeff {
    pub fn zero() -> Self {
        ParamCoeff::default()
    }

    pub fn one() -> Self {
        ParamCoeff::from_int(1)
    }

    pub fn from_int(i: i64) -> Self {
        Self::from_rational(big(i))
    }

    pub fn from_rational(r: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !r.is_zero() {
            terms.insert(Mono::one(), r);
        }
        ParamCoeff { terms }
    }

    pub fn monomial(m: Mono, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        ParamCoeff { terms }
    }

    /// The variable itself, `v^1`.
    pub fn var(v: Var) -> Self {
        Self::monomial(Mono::var(v), big(1))
    }

    /// `v^e`.
    pub fn var_pow(v: Var, e: i64) -> Self {
        Self::monomial(Mono::power(v, e), big(1))
    }

    /// `v - v^{-1}`.
    pub fn var_minus_inv(v: Var) -> Self {
        Self::var_pow(v, 1).sub(&Self::var_pow(v, -1))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&Mono::one())
                .map(|c| c.is_one())
                .unwrap_or(false)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (&Mono, &BigRational)> {
        self.terms.iter()
    }

    /// The lex-largest monomial and its coefficient.
    pub fn leading_term(&self) -> Option<(&Mono, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn coeff(&self, m: &Mono) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn add_assign_term(&mut self, m: Mono, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_assign(&mut self, other: &ParamCoeff) {
        for (m, c) in &other.terms {
            self.add_assign_term(m.clone(), c.clone());
        }
    }

    pub fn add(&self, other: &ParamCoeff) -> ParamCoeff {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn sub(&self, other: &ParamCoeff) -> ParamCoeff {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_assign_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> ParamCoeff {
        ParamCoeff {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), -c.clone()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &ParamCoeff) -> ParamCoeff {
        let mut out = ParamCoeff::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_assign_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn mul_mono(&self, m: &Mono, c: &BigRational) -> ParamCoeff {
        let mut out = ParamCoeff::zero();
        for (ma, ca) in &self.terms {
            out.add_assign_term(ma.mul(m), ca * c);
        }
        out
    }

    pub fn scale(&self, c: &BigRational) -> ParamCoeff {
        self.mul_mono(&Mono::one(), c)
    }

    /// Single-term view, if this coefficient is a monomial.
    pub fn as_monomial(&self) -> Option<(&Mono, &BigRational)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    /// Inverse of a nonzero monomial coefficient.
    pub fn inverse_monomial(&self) -> Result<ParamCoeff> {
        let (m, c) = self
            .as_monomial()
            .ok_or_else(|| Error::NonUnitLeading(format!("{self}")))?;
        Ok(ParamCoeff::monomial(m.inv(), c.recip()))
    }

    /// True when every coefficient is an integer.
    pub fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    /// Largest absolute `Sigma`-degree over the support, 0 for the zero polynomial.
    pub fn max_abs_sigma_degree(&self) -> i64 {
        self.terms
            .keys()
            .map(|m| m.sigma_degree().abs())
            .max()
            .unwrap_or(0)
    }

    /// Drop monomials whose absolute `Sigma`-degree exceeds `bound`.
    pub fn truncate_sigma_degree(&self, bound: i64) -> ParamCoeff {
        ParamCoeff {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.sigma_degree().abs() <= bound)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Apply a substitution variable by variable.
    pub fn substitute(&self, map: &dyn Fn(Var) -> Subst) -> Result<ParamCoeff> {
        let mut out = ParamCoeff::zero();
        for (m, c) in &self.terms {
            let mut mono = Mono::one();
            let mut coef = c.clone();
            for (v, e) in m.iter() {
                match map(v) {
                    Subst::Keep => mono = mono.mul(&Mono::power(v, e)),
                    Subst::Monomial { target, num, den } => {
                        let p = e * num;
                        if den == 0 || p % den != 0 {
                            return Err(Error::BadSubstitution(format!(
                                "{}^{} cannot be rewritten in {} (exponent {}/{} not integral)",
                                v.name(),
                                e,
                                target.name(),
                                p,
                                den
                            )));
                        }
                        mono = mono.mul(&Mono::power(target, p / den));
                    }
                    Subst::Rational(r) => {
                        if r.is_zero() {
                            if e < 0 {
                                return Err(Error::BadSubstitution(format!(
                                    "{}^{} evaluated at zero",
                                    v.name(),
                                    e
                                )));
                            }
                            coef = BigRational::zero();
                        } else {
                            coef *= rational_pow(&r, e);
                        }
                    }
                }
            }
            out.add_assign_term(mono, coef);
        }
        Ok(out)
    }

    /// Evaluate at `q = q_value` (all `QHalf` variables get `q_value^{1/2}`);
    /// every other variable must be absent. Odd half-powers require `q_value`
    /// to be a square of a rational.
    pub fn eval_q(&self, q_value: &BigRational) -> Result<BigRational> {
        let sqrt = rational_sqrt(q_value);
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (v, e) in m.iter() {
                match v {
                    Var::QHalf(_) => {
                        if e % 2 == 0 {
                            term *= rational_pow(q_value, e / 2);
                        } else if let Some(s) = &sqrt {
                            term *= rational_pow(s, e);
                        } else {
                            return Err(Error::BadSubstitution(format!(
                                "odd power of q^(1/2) with non-square q = {q_value}"
                            )));
                        }
                    }
                    other => {
                        return Err(Error::BadSubstitution(format!(
                            "cannot evaluate symbolic variable {}",
                            other.name()
                        )))
                    }
                }
            }
            acc += term;
        }
        Ok(acc)
    }
}

fn rational_pow(r: &BigRational, e: i64) -> BigRational {
    let mut acc = BigRational::one();
    let base = if e >= 0 { r.clone() } else { r.recip() };
    for _ in 0..e.unsigned_abs() {
        acc *= base.clone();
    }
    acc
}

fn integer_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let s = n.sqrt();
    if &s * &s == *n {
        Some(s)
    } else {
        None
    }
}

fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    let num = integer_sqrt(r.numer())?;
    let den = integer_sqrt(r.denom())?;
    Some(BigRational::new(num, den))
}

impl fmt::Display for ParamCoeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut ordered: Vec<(&Mono, &BigRational)> = self.terms.iter().collect();
        ordered.sort_by(|(m1, _), (m2, _)| {
            let d1: i64 = m1.iter().map(|(_, e)| e).sum();
            let d2: i64 = m2.iter().map(|(_, e)| e).sum();
            (d2, m2).cmp(&(d1, m1))
        });
        let mut first = true;
        for (m, c) in ordered {
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mono = display_mono(m);
            if mono.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{mono}")?;
            } else {
                write!(f, "{abs}*{mono}")?;
            }
        }
        Ok(())
    }
}

/// Renders a monomial, folding even `qh` powers into powers of `q`.
fn display_mono(m: &Mono) -> String {
    let mut parts = Vec::new();
    for (v, e) in m.iter() {
        match v {
            Var::QHalf(c) => {
                let q = if c == 0 && m.iter().all(|(w, _)| !matches!(w, Var::QHalf(d) if d != 0))
                {
                    "q".to_string()
                } else {
                    format!("q{c}")
                };
                if e % 2 == 0 {
                    parts.push(pow_str(&q, e / 2));
                } else {
                    parts.push(format!("{q}^({e}/2)"));
                }
            }
            other => parts.push(pow_str(&other.name(), e)),
        }
    }
    parts.retain(|p| !p.is_empty());
    parts.join("*")
}

fn pow_str(base: &str, e: i64) -> String {
    match e {
        0 => String::new(),
        1 => base.to_string(),
        _ => format!("{base}^{e}"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_arithmetic_cancels() {
        let s = Mono::var(Var::Sigma(0));
        let si = s.inv();
        assert!(s.mul(&si).is_one());
        assert_eq!(s.mul(&s).exponent(Var::Sigma(0)), 2);
    }

    #[test]
    fn sigma_minus_inverse_squares() {
        // (s - s^{-1})^2 = s^2 - 2 + s^{-2}
        let d = ParamCoeff::var_minus_inv(Var::Sigma(0));
        let sq = d.mul(&d);
        assert_eq!(sq.coeff(&Mono::power(Var::Sigma(0), 2)), big(1));
        assert_eq!(sq.coeff(&Mono::one()), big(-2));
        assert_eq!(sq.coeff(&Mono::power(Var::Sigma(0), -2)), big(1));
        assert_eq!(sq.num_terms(), 3);
    }

    #[test]
    fn substitute_sigma_to_qhalf() {
        // s -> qh^{-1}: s - s^{-1}  =>  qh^{-1} - qh
        let d = ParamCoeff::var_minus_inv(Var::Sigma(0));
        let map = |v: Var| match v {
            Var::Sigma(c) => Subst::Monomial {
                target: Var::QHalf(c),
                num: -1,
                den: 1,
            },
            _ => Subst::Keep,
        };
        let got = d.substitute(&map).unwrap();
        assert_eq!(got.coeff(&Mono::power(Var::QHalf(0), -1)), big(1));
        assert_eq!(got.coeff(&Mono::power(Var::QHalf(0), 1)), big(-1));
    }

    #[test]
    fn substitute_square_rename_requires_even() {
        let odd = ParamCoeff::var(Var::Sigma(0));
        let map = |v: Var| match v {
            Var::Sigma(_) => Subst::Monomial {
                target: Var::T,
                num: 1,
                den: 2,
            },
            _ => Subst::Keep,
        };
        assert!(odd.substitute(&map).is_err());
        let even = ParamCoeff::var_pow(Var::Sigma(0), 4);
        let got = even.substitute(&map).unwrap();
        assert_eq!(got.coeff(&Mono::power(Var::T, 2)), big(1));
    }

    #[test]
    fn numeric_specialization_is_exact() {
        // q = 4: s -> 1/2 via qh = 2.
        let d = ParamCoeff::var_minus_inv(Var::Sigma(0));
        let map = |v: Var| match v {
            Var::Sigma(c) => Subst::Monomial {
                target: Var::QHalf(c),
                num: -1,
                den: 1,
            },
            _ => Subst::Keep,
        };
        let q = d.substitute(&map).unwrap();
        let val = q.eval_q(&big(4)).unwrap();
        // 1/2 - 2 = -3/2
        assert_eq!(val, BigRational::new(BigInt::from(-3), BigInt::from(2)));
        // q = 2 needs sqrt(2): odd powers must fail
        assert!(q.eval_q(&big(2)).is_err());
    }

    #[test]
    fn display_folds_q_powers() {
        let c = ParamCoeff::var_pow(Var::QHalf(0), 2).sub(&ParamCoeff::one());
        assert_eq!(format!("{c}"), "q - 1");
    }
}
