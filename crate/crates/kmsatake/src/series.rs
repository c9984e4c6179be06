//! Truncated formal series over the lattice, with the sign-aware
//! expansions of the functions `b` and `c`.
//!
//! A [`TruncSeries`] stores finitely many terms together with a window
//! `(ceiling, depth)`: every stored or omitted exponent `mu` satisfies
//! `ceiling - mu` in the positive coroot cone, and all coefficients at
//! height at most `depth` below the ceiling are exact. Finite Laurent
//! polynomials carry the distinguished `Exact` depth. Mixing the two
//! regimes without flags is the main correctness hazard of this kind of
//! computation, so the window travels with every value and every
//! operation recomputes it.

use std::collections::BTreeMap;

use crate::param::{ParamCoeff, Subst, Var};
use crate::root_datum::RootDatum;
use crate::weyl::{PosRealCoroot, WeylElt};
use crate::{Error, Result};

/// Exactness marker: a finite polynomial, or certified through height `N`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Depth {
    Exact,
    At(i64),
}

impl Depth {
    pub fn min(self, other: Depth) -> Depth {
        match (self, other) {
            (Depth::Exact, d) | (d, Depth::Exact) => d,
            (Depth::At(a), Depth::At(b)) => Depth::At(a.min(b)),
        }
    }

    pub fn shift(self, by: i64) -> Depth {
        match self {
            Depth::Exact => Depth::Exact,
            Depth::At(a) => Depth::At(a + by),
        }
    }

    pub fn covers(self, h: i64) -> bool {
        match self {
            Depth::Exact => true,
            Depth::At(a) => h <= a,
        }
    }
}

/// Sparse exponent-to-coefficient map with an explicit window.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TruncSeries {
    /// `None` marks an unwindowed finite polynomial (only produced by
    /// exponent relabeling when no dominating exponent exists).
    ceiling: Option<Vec<i64>>,
    depth: Depth,
    terms: BTreeMap<Vec<i64>, ParamCoeff>,
}

impl TruncSeries {
    /// The single term `e^lambda`, exact.
    pub fn monomial(lambda: &[i64]) -> TruncSeries {
        let mut terms = BTreeMap::new();
        terms.insert(lambda.to_vec(), ParamCoeff::one());
        TruncSeries {
            ceiling: Some(lambda.to_vec()),
            depth: Depth::Exact,
            terms,
        }
    }

    /// `c * e^lambda`, exact.
    pub fn scaled_monomial(lambda: &[i64], c: ParamCoeff) -> TruncSeries {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(lambda.to_vec(), c);
        }
        TruncSeries {
            ceiling: Some(lambda.to_vec()),
            depth: Depth::Exact,
            terms,
        }
    }

    /// The unit series `1` with ceiling `0`, exact.
    pub fn one(d: usize) -> TruncSeries {
        TruncSeries::monomial(&vec![0; d])
    }

    /// Empty series with the given window.
    pub fn zero_window(ceiling: Vec<i64>, depth: Depth) -> TruncSeries {
        TruncSeries {
            ceiling: Some(ceiling),
            depth,
            terms: BTreeMap::new(),
        }
    }

    /// The unit series `1` in a depth-`n` window at ceiling `0`.
    pub fn one_window(d: usize, n: i64) -> TruncSeries {
        let mut s = TruncSeries::zero_window(vec![0; d], Depth::At(n));
        s.push_term(vec![0; d], ParamCoeff::one());
        s
    }

    /// Assemble an exact polynomial from raw parts (internal).
    pub(crate) fn from_exact_parts(
        ceiling: Option<Vec<i64>>,
        terms: BTreeMap<Vec<i64>, ParamCoeff>,
    ) -> TruncSeries {
        TruncSeries {
            ceiling,
            depth: Depth::Exact,
            terms,
        }
    }

    /// Anchor an exact polynomial at a declared ceiling (its support must
    /// lie below it; `validate` checks that).
    pub fn with_ceiling(&self, ceiling: &[i64]) -> TruncSeries {
        TruncSeries {
            ceiling: Some(ceiling.to_vec()),
            depth: self.depth,
            terms: self.terms.clone(),
        }
    }

    pub fn ceiling(&self) -> Option<&[i64]> {
        self.ceiling.as_deref()
    }

    pub fn depth(&self) -> Depth {
        self.depth
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<i64>, &ParamCoeff)> {
        self.terms.iter()
    }

    pub fn coeff(&self, mu: &[i64]) -> ParamCoeff {
        self.terms.get(mu).cloned().unwrap_or_default()
    }

    /// Height of `mu` below the ceiling; errors without a window.
    pub fn height_below_ceiling(&self, rd: &RootDatum, mu: &[i64]) -> Result<i64> {
        let ceil = self.ceiling.as_ref().ok_or(Error::Unwindowed)?;
        let diff: Vec<i64> = ceil.iter().zip(mu).map(|(a, b)| a - b).collect();
        rd.height(&diff)
    }

    pub(crate) fn push_term_pub(&mut self, mu: Vec<i64>, c: ParamCoeff) {
        self.push_term(mu, c)
    }

    fn push_term(&mut self, mu: Vec<i64>, c: ParamCoeff) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(mu) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                e.get_mut().add_assign(&c);
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Internal invariant check: every exponent inside the window cone and
    /// within depth. Used by tests and debug assertions.
    pub fn validate(&self, rd: &RootDatum) -> Result<()> {
        let Some(ceil) = self.ceiling.as_ref() else {
            return Ok(());
        };
        for mu in self.terms.keys() {
            let diff: Vec<i64> = ceil.iter().zip(mu).map(|(a, b)| a - b).collect();
            let q = rd.coroot_coordinates(&diff).ok_or_else(|| {
                Error::Window(format!("exponent {mu:?} not below ceiling {ceil:?}"))
            })?;
            if q.iter().any(|&c| c < 0) {
                return Err(Error::Window(format!(
                    "exponent {mu:?} outside the cone below {ceil:?}"
                )));
            }
            let h: i64 = q.iter().sum();
            if !self.depth.covers(h) {
                return Err(Error::Window(format!(
                    "exponent {mu:?} at height {h} beyond depth"
                )));
            }
        }
        Ok(())
    }

    /// Restrict to the window `(ceiling, depth)`, dropping deeper terms.
    pub fn truncate(&self, rd: &RootDatum, depth: Depth) -> Result<TruncSeries> {
        let mut out = TruncSeries {
            ceiling: self.ceiling.clone(),
            depth: self.depth.min(depth),
            terms: BTreeMap::new(),
        };
        if out.ceiling.is_none() {
            out.terms = self.terms.clone();
            return Ok(out);
        }
        for (mu, c) in &self.terms {
            let h = self.height_below_ceiling(rd, mu)?;
            if out.depth.covers(h) {
                out.terms.insert(mu.clone(), c.clone());
            }
        }
        Ok(out)
    }

    /// Rewrite the window against a new, higher ceiling. The effective
    /// depth grows by the height gap, since every omitted exponent between
    /// the two ceilings has an exactly-zero coefficient.
    pub fn raise_ceiling(&self, rd: &RootDatum, new_ceiling: &[i64]) -> Result<TruncSeries> {
        let old = self.ceiling.as_ref().ok_or(Error::Unwindowed)?;
        let diff: Vec<i64> = new_ceiling.iter().zip(old).map(|(a, b)| a - b).collect();
        let gap = rd.height(&diff)?;
        if gap < 0 || !rd.in_positive_coroot_cone(&diff) {
            return Err(Error::Window(format!(
                "new ceiling {new_ceiling:?} does not dominate {old:?}"
            )));
        }
        Ok(TruncSeries {
            ceiling: Some(new_ceiling.to_vec()),
            depth: self.depth.shift(gap),
            terms: self.terms.clone(),
        })
    }

    /// Sum, on the least common window.
    pub fn add(&self, rd: &RootDatum, other: &TruncSeries) -> Result<TruncSeries> {
        let ca = self.ceiling.as_ref().ok_or(Error::Unwindowed)?;
        let cb = other.ceiling.as_ref().ok_or(Error::Unwindowed)?;
        if ca.len() != cb.len() {
            return Err(Error::IncompatibleLattice(format!(
                "ranks {} and {}",
                ca.len(),
                cb.len()
            )));
        }
        // Join ceiling: componentwise max in coroot coordinates.
        let diff: Vec<i64> = ca.iter().zip(cb.iter()).map(|(a, b)| a - b).collect();
        let q = rd.coroot_coordinates(&diff).ok_or_else(|| {
            Error::IncompatibleLattice("ceilings differ by a non-coroot vector".into())
        })?;
        let mut join = cb.clone();
        for (j, &c) in q.iter().enumerate() {
            if c > 0 {
                for (x, y) in join.iter_mut().zip(&rd.coroots[j]) {
                    *x += c * y;
                }
            }
        }
        let a = self.raise_ceiling(rd, &join)?;
        let b = other.raise_ceiling(rd, &join)?;
        let depth = a.depth.min(b.depth);
        let mut out = TruncSeries::zero_window(join, depth);
        for src in [&a, &b] {
            for (mu, c) in &src.terms {
                let h = out.height_below_ceiling(rd, mu)?;
                if depth.covers(h) {
                    out.push_term(mu.clone(), c.clone());
                }
            }
        }
        Ok(out)
    }

    pub fn sub(&self, rd: &RootDatum, other: &TruncSeries) -> Result<TruncSeries> {
        self.add(rd, &other.scale_coeff(&ParamCoeff::from_int(-1)))
    }

    /// Product; ceiling adds, depth is the minimum of the two depths.
    pub fn mul(&self, rd: &RootDatum, other: &TruncSeries) -> Result<TruncSeries> {
        let ca = self.ceiling.as_ref().ok_or(Error::Unwindowed)?;
        let cb = other.ceiling.as_ref().ok_or(Error::Unwindowed)?;
        if ca.len() != cb.len() {
            return Err(Error::IncompatibleLattice(format!(
                "ranks {} and {}",
                ca.len(),
                cb.len()
            )));
        }
        let ceiling: Vec<i64> = ca.iter().zip(cb.iter()).map(|(a, b)| a + b).collect();
        let depth = self.depth.min(other.depth);
        let mut out = TruncSeries::zero_window(ceiling, depth);
        // Heights add, so precompute them once per factor.
        let ha: Vec<(i64, &Vec<i64>, &ParamCoeff)> = self
            .terms
            .iter()
            .map(|(mu, c)| (self.height_below_ceiling(rd, mu).unwrap(), mu, c))
            .collect();
        let hb: Vec<(i64, &Vec<i64>, &ParamCoeff)> = other
            .terms
            .iter()
            .map(|(mu, c)| (other.height_below_ceiling(rd, mu).unwrap(), mu, c))
            .collect();
        for (h1, m1, c1) in &ha {
            for (h2, m2, c2) in &hb {
                if !depth.covers(h1 + h2) {
                    continue;
                }
                let mu: Vec<i64> = m1.iter().zip(m2.iter()).map(|(a, b)| a + b).collect();
                out.push_term(mu, c1.mul(c2));
            }
        }
        Ok(out)
    }

    pub fn scale_coeff(&self, c: &ParamCoeff) -> TruncSeries {
        let mut terms = BTreeMap::new();
        for (mu, x) in &self.terms {
            let v = x.mul(c);
            if !v.is_zero() {
                terms.insert(mu.clone(), v);
            }
        }
        TruncSeries {
            ceiling: self.ceiling.clone(),
            depth: self.depth,
            terms,
        }
    }

    /// Multiply by the exact monomial `e^lambda` (shifts the ceiling).
    pub fn shift(&self, lambda: &[i64]) -> TruncSeries {
        let ceiling = self
            .ceiling
            .as_ref()
            .map(|c| c.iter().zip(lambda).map(|(a, b)| a + b).collect());
        let terms = self
            .terms
            .iter()
            .map(|(mu, c)| {
                (
                    mu.iter().zip(lambda).map(|(a, b)| a + b).collect(),
                    c.clone(),
                )
            })
            .collect();
        TruncSeries {
            ceiling,
            depth: self.depth,
            terms,
        }
    }

    /// Multiplicative inverse through depth `n`. The leading coefficient
    /// (at the ceiling) must be a unit monomial; the result is verified by
    /// multiplying back.
    pub fn invert_unit(&self, rd: &RootDatum, n: i64) -> Result<TruncSeries> {
        let ceil = self.ceiling.clone().ok_or(Error::Unwindowed)?;
        let lead = self.coeff(&ceil);
        if lead.is_zero() {
            return Err(Error::NonUnitLeading("zero leading coefficient".into()));
        }
        let lead_inv = lead.inverse_monomial()?;
        let neg_ceil: Vec<i64> = ceil.iter().map(|x| -x).collect();
        // f = lead e^{ceil} (1 - h), supp(h) at height >= 1
        let mut h = TruncSeries::zero_window(vec![0; ceil.len()], Depth::At(n));
        for (mu, c) in &self.terms {
            if mu == &ceil {
                continue;
            }
            let hgt = self.height_below_ceiling(rd, mu)?;
            if hgt <= n {
                let shifted: Vec<i64> = mu.iter().zip(&ceil).map(|(a, b)| a - b).collect();
                h.push_term(shifted, c.mul(&lead_inv).neg());
            }
        }
        // geometric series in h
        let mut acc = TruncSeries::one(ceil.len()).truncate(rd, Depth::At(n))?;
        let mut pow = h.clone();
        while !pow.is_empty() {
            acc = acc.add(rd, &pow)?;
            pow = pow.mul(rd, &h)?;
        }
        let inv = acc.scale_coeff(&lead_inv).shift(&neg_ceil);
        // contract check: f * inv = 1 through depth n
        let check = self.mul(rd, &inv)?;
        let one = TruncSeries::one(ceil.len()).truncate(rd, Depth::At(n))?;
        if !check.agrees_with(rd, &one, Depth::At(n))? {
            return Err(Error::Window("inverse verification failed".into()));
        }
        Ok(inv)
    }

    /// Relabel exponents by `w`. Only exact polynomials may be transported
    /// across a Weyl action; truncated expansions must be recomputed in the
    /// reflected direction instead.
    pub fn relabel(&self, rd: &RootDatum, w: &WeylElt) -> Result<TruncSeries> {
        if self.depth != Depth::Exact {
            return Err(Error::Window(
                "relabel applies to exact polynomials only".into(),
            ));
        }
        let d = rd.lattice_dim;
        let mut terms = BTreeMap::new();
        for (mu, c) in &self.terms {
            terms.insert(w.apply(mu, d), c.clone());
        }
        // Recompute the ceiling as the order-maximum of the support.
        let mut ceiling: Option<Vec<i64>> = None;
        let mut best: Option<(i64, Vec<i64>)> = None;
        for mu in terms.keys() {
            let r = rd.two_rho_pairing(mu);
            if best.as_ref().map(|(b, _)| r > *b).unwrap_or(true) {
                best = Some((r, mu.clone()));
            }
        }
        if let Some((_, cand)) = best {
            let dominates = terms.keys().all(|mu| {
                let diff: Vec<i64> = cand.iter().zip(mu).map(|(a, b)| a - b).collect();
                rd.in_positive_coroot_cone(&diff)
            });
            if dominates {
                ceiling = Some(cand);
            }
        }
        Ok(TruncSeries {
            ceiling,
            depth: Depth::Exact,
            terms,
        })
    }

    /// Coefficientwise substitution.
    pub fn specialize(&self, map: &dyn Fn(Var) -> Subst) -> Result<TruncSeries> {
        let mut terms = BTreeMap::new();
        for (mu, c) in &self.terms {
            let v = c.substitute(map)?;
            if !v.is_zero() {
                terms.insert(mu.clone(), v);
            }
        }
        Ok(TruncSeries {
            ceiling: self.ceiling.clone(),
            depth: self.depth,
            terms,
        })
    }

    /// Compare within a depth window (both series restricted to it).
    pub fn agrees_with(&self, rd: &RootDatum, other: &TruncSeries, depth: Depth) -> Result<bool> {
        let a = self.truncate(rd, depth)?;
        let b = other.truncate(rd, depth)?;
        if a.ceiling == b.ceiling {
            return Ok(a.terms == b.terms);
        }
        let diff = a.sub(rd, &b)?;
        Ok(diff.is_empty())
    }

    /// First exponent where two series differ within a window, for reports.
    pub fn first_discrepancy(
        &self,
        rd: &RootDatum,
        other: &TruncSeries,
        depth: Depth,
    ) -> Result<Option<Vec<i64>>> {
        let a = self.truncate(rd, depth)?;
        let b = other.truncate(rd, depth)?;
        let diff = a.sub(rd, &b)?;
        Ok(diff.terms.keys().next().cloned())
    }
}

/// Orientation of a real coroot argument.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Sign {
    Positive,
    Negative,
}

/// The expansion of `b(sigma_beta, sigma'_beta; e^{beta})` at a signed real
/// coroot, with support in the negative coroot cone, exact through depth
/// `n`. The direction of the geometric expansion follows the sign of the
/// coroot: both orientations are series in `e^{-|beta|}`.
///
/// Closed form of the coefficients at `e^{-m |beta|}`:
/// positive coroot: `-(sigma' - sigma'^{-1})` for odd `m >= 1`,
/// `-(sigma - sigma^{-1})` for even `m >= 2`, nothing at `m = 0`;
/// negative coroot: `+(sigma - sigma^{-1})` for even `m >= 0`,
/// `+(sigma' - sigma'^{-1})` for odd `m`.
pub fn expand_b(rd: &RootDatum, beta: &PosRealCoroot, sign: Sign, n: i64) -> TruncSeries {
    expand_b_raw(
        rd,
        &beta.coords,
        beta.height,
        beta.sigma_var(),
        beta.sigma_prime_var(),
        sign,
        n,
    )
}

/// As [`expand_b`], from the raw coroot data (positive-orientation coords).
pub(crate) fn expand_b_raw(
    rd: &RootDatum,
    coords: &[i64],
    height: i64,
    sigma: Var,
    sigma_prime: Var,
    sign: Sign,
    n: i64,
) -> TruncSeries {
    let d = rd.lattice_dim;
    let s = ParamCoeff::var_minus_inv(sigma);
    let sp = ParamCoeff::var_minus_inv(sigma_prime);
    let mut out = TruncSeries::zero_window(vec![0; d], Depth::At(n));
    let mut m = match sign {
        Sign::Positive => 1,
        Sign::Negative => 0,
    };
    while m * height <= n {
        let base = if m % 2 == 0 { &s } else { &sp };
        let coeff = match sign {
            Sign::Positive => base.neg(),
            Sign::Negative => base.clone(),
        };
        let mu: Vec<i64> = coords.iter().map(|x| -m * x).collect();
        out.push_term(mu, coeff);
        m += 1;
    }
    out
}

/// The expansion of `c(beta) = sigma_beta - b(beta)`: constant term
/// `sigma_beta` for a positive coroot, `sigma_beta^{-1}` for a negative one.
pub fn expand_c(rd: &RootDatum, beta: &PosRealCoroot, sign: Sign, n: i64) -> TruncSeries {
    expand_c_raw(
        rd,
        &beta.coords,
        beta.height,
        beta.sigma_var(),
        beta.sigma_prime_var(),
        sign,
        n,
    )
}

pub(crate) fn expand_c_raw(
    rd: &RootDatum,
    coords: &[i64],
    height: i64,
    sigma: Var,
    sigma_prime: Var,
    sign: Sign,
    n: i64,
) -> TruncSeries {
    let d = rd.lattice_dim;
    let mut out = match sign {
        Sign::Positive => expand_b_raw(rd, coords, height, sigma, sigma_prime, sign, n)
            .scale_coeff(&ParamCoeff::from_int(-1)),
        // c(-gamma) = sigma^{-1} + b-expansion at the positive orientation
        Sign::Negative => expand_b_raw(rd, coords, height, sigma, sigma_prime, Sign::Positive, n),
    };
    let constant = match sign {
        Sign::Positive => ParamCoeff::var_pow(sigma, 1),
        Sign::Negative => ParamCoeff::var_pow(sigma, -1),
    };
    out.push_term(vec![0; d], constant);
    out
}

/// `c'(beta) = sigma_beta c(beta)`; for a negative coroot this is the
/// kernel factor with constant term `1`.
pub fn expand_c_prime(rd: &RootDatum, beta: &PosRealCoroot, sign: Sign, n: i64) -> TruncSeries {
    expand_c(rd, beta, sign, n).scale_coeff(&ParamCoeff::var(beta.sigma_var()))
}

/// Display helper: `(depth, exponent)`-sorted rendering used by the CLI.
pub fn render_pretty(rd: &RootDatum, s: &TruncSeries) -> String {
    let mut items: Vec<(i64, &Vec<i64>, &ParamCoeff)> = s
        .iter()
        .map(|(mu, c)| {
            let h = s.height_below_ceiling(rd, mu).unwrap_or(0);
            (h, mu, c)
        })
        .collect();
    items.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
    if items.is_empty() {
        return "0".to_string();
    }
    items
        .iter()
        .map(|(_, mu, c)| {
            let cs = format!("{c}");
            if mu.iter().all(|&x| x == 0) && cs == "1" {
                return "1".to_string();
            }
            let coords = mu
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(",");
            if cs == "1" {
                format!("e^({coords})")
            } else if cs.contains(' ') {
                format!("({cs})*e^({coords})")
            } else {
                format!("{cs}*e^({coords})")
            }
        })
        .collect::<Vec<_>>()
        .join(" + ")
}
