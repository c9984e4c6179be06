//! Symmetrizer kernels: the product `Delta`, its Weyl twists, the
//! identity-component coefficient `Gamma`, the multiplier `m_sigma`, the
//! truncated symmetrizer images `P^lambda(e^lambda)` and `H_lambda`, and
//! the Cherednik identity checker.
//!
//! All series here share ceiling `0` or `lambda` and a common depth `n`.
//! The length cutoff for symmetrizer sums is `2n` (plus the length of the
//! component being read off): a coefficient at height `h` of the
//! `[v]`-component only receives contributions from `w` with
//! `l(w) - l(v) <= 2h`, so the cutoff is exact, not a heuristic. An
//! adaptive mode re-runs with growing cutoffs until the window stabilizes
//! twice and asserts agreement.

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use crate::dl::DlContext;
use crate::param::{big, ParamCoeff};
use crate::root_datum::RootDatum;
use crate::series::{expand_c_raw, Depth, Sign, TruncSeries};
use crate::weyl::{
    inversion_coroots, min_coset_reps, positive_real_coroots, WeylElt,
};
use crate::{Error, Result};

/// Options for the symmetrizer computations.
#[derive(Clone, Copy, Debug, Default)]
pub struct SymOptions {
    /// Re-run sums with increasing length cutoffs until the depth window
    /// stabilizes twice, and assert agreement with the closed-form cutoff.
    pub adaptive_cutoff: bool,
}

/// Shared state for the symmetrizer computations at one depth.
pub struct SymContext<'a> {
    pub rd: &'a RootDatum,
    pub dl: &'a DlContext<'a>,
    pub depth: i64,
    pub options: SymOptions,
    cache: RefCell<HashMap<&'static str, Rc<TruncSeries>>>,
    twist_cache: RefCell<HashMap<Vec<u8>, Rc<TruncSeries>>>,
}

impl<'a> SymContext<'a> {
    pub fn new(rd: &'a RootDatum, dl: &'a DlContext<'a>, depth: i64) -> Self {
        SymContext {
            rd,
            dl,
            depth,
            options: SymOptions::default(),
            cache: RefCell::new(HashMap::new()),
            twist_cache: RefCell::new(HashMap::new()),
        }
    }

    pub fn with_options(mut self, options: SymOptions) -> Self {
        self.options = options;
        self
    }

    fn cached(
        &self,
        key: &'static str,
        compute: impl FnOnce() -> Result<TruncSeries>,
    ) -> Result<Rc<TruncSeries>> {
        if let Some(s) = self.cache.borrow().get(key) {
            return Ok(Rc::clone(s));
        }
        let s = Rc::new(compute()?);
        self.cache.borrow_mut().insert(key, Rc::clone(&s));
        Ok(s)
    }

    /// The kernel `Delta`: product over the positive real coroots of the
    /// normalized factors `sigma_beta c(-beta)`, each `1 + O(e^{-beta})`.
    /// Coroots of height beyond the depth contribute only past the window,
    /// so the enumeration stops there; factors multiply in increasing
    /// height to keep intermediate supports small.
    pub fn delta(&self) -> Result<Rc<TruncSeries>> {
        self.cached("delta", || {
            let n = self.depth;
            let mut acc = TruncSeries::one_window(self.rd.lattice_dim, n);
            for beta in positive_real_coroots(self.rd, n) {
                let factor = expand_c_raw(
                    self.rd,
                    &beta.coords,
                    beta.height,
                    beta.sigma_var(),
                    beta.sigma_prime_var(),
                    Sign::Negative,
                    n,
                )
                .scale_coeff(&ParamCoeff::var(beta.sigma_var()));
                acc = acc.mul(self.rd, &factor)?;
            }
            Ok(acc)
        })
    }

    pub fn delta_inverse(&self) -> Result<Rc<TruncSeries>> {
        self.cached("delta_inv", || self.delta()?.invert_unit(self.rd, self.depth))
    }

    /// The twist `^w Delta`, computed as `Delta` times the inversion-set
    /// quotient `prod c(beta)/c(-beta)`; a truncation is never relabeled.
    pub fn delta_twist(&self, w: &WeylElt) -> Result<Rc<TruncSeries>> {
        if let Some(s) = self.twist_cache.borrow().get(&w.word) {
            return Ok(Rc::clone(s));
        }
        let n = self.depth;
        let mut acc = (*self.delta()?).clone();
        for beta in inversion_coroots(self.rd, w) {
            let num = expand_c_raw(
                self.rd,
                &beta.coords,
                beta.height,
                beta.sigma_var(),
                beta.sigma_prime_var(),
                Sign::Positive,
                n,
            );
            let den = expand_c_raw(
                self.rd,
                &beta.coords,
                beta.height,
                beta.sigma_var(),
                beta.sigma_prime_var(),
                Sign::Negative,
                n,
            )
            .invert_unit(self.rd, n)?;
            acc = acc.mul(self.rd, &num)?.mul(self.rd, &den)?;
        }
        let acc = Rc::new(acc);
        self.twist_cache
            .borrow_mut()
            .insert(w.word.clone(), Rc::clone(&acc));
        Ok(acc)
    }

    /// `Gamma`: the `[e]`-component of the symmetrizer sum, cutoff `2n`.
    pub fn gamma(&self) -> Result<Rc<TruncSeries>> {
        self.cached("gamma", || {
            let got = self.component_of_symmetrizer(&[], 2 * self.depth as usize)?;
            if self.options.adaptive_cutoff {
                let stable = self.adaptive_component(&[])?;
                if !got.agrees_with(self.rd, &stable, Depth::At(self.depth))? {
                    return Err(Error::Window(
                        "adaptive cutoff disagrees with the closed-form bound for Gamma".into(),
                    ));
                }
            }
            Ok(got)
        })
    }

    pub fn gamma_inverse(&self) -> Result<Rc<TruncSeries>> {
        self.cached("gamma_inv", || self.gamma()?.invert_unit(self.rd, self.depth))
    }

    /// `[v]`-component of `sum_{l(w) <= cutoff} sigma_w H_w` at this depth.
    fn component_of_symmetrizer(&self, v_word: &[u8], cutoff: usize) -> Result<TruncSeries> {
        let p = self.dl.symmetrizer(cutoff, self.depth)?;
        Ok(p.component(v_word)
            .cloned()
            .unwrap_or_else(|| TruncSeries::zero_window(vec![0; self.rd.lattice_dim], Depth::At(self.depth))))
    }

    /// Increase the cutoff until the depth window stabilizes twice.
    fn adaptive_component(&self, v_word: &[u8]) -> Result<TruncSeries> {
        let mut cutoff = v_word.len().max(1);
        let mut prev = self.component_of_symmetrizer(v_word, cutoff)?;
        let mut stable = 0;
        loop {
            cutoff += 1;
            let next = self.component_of_symmetrizer(v_word, cutoff)?;
            if next.agrees_with(self.rd, &prev, Depth::At(self.depth))? {
                stable += 1;
                if stable >= 2 {
                    return Ok(next);
                }
            } else {
                stable = 0;
            }
            prev = next;
        }
    }

    /// The multiplier `m_sigma = Gamma Delta^{-1}`; `1` in finite type.
    pub fn m_sigma(&self) -> Result<Rc<TruncSeries>> {
        self.cached("m_sigma", || {
            self.gamma()?.mul(self.rd, self.delta_inverse()?.as_ref())
        })
    }

    /// Invertibility witness: `m_sigma * H_0 = 1` through the depth.
    pub fn m_sigma_witness(&self) -> Result<bool> {
        let h0 = self.h_lambda(&vec![0; self.rd.lattice_dim])?;
        let prod = self.m_sigma()?.mul(self.rd, &h0)?;
        let one = TruncSeries::one_window(self.rd.lattice_dim, self.depth);
        prod.agrees_with(self.rd, &one, Depth::At(self.depth))
    }

    /// `P^lambda(e^lambda) = sum over minimal representatives of
    /// sigma_w H_w(e^lambda)`, truncated at the depth; the `2n` length
    /// cutoff is exact by the support bounds.
    pub fn p_lambda(&self, lambda: &[i64]) -> Result<TruncSeries> {
        let got = self.p_lambda_with_cutoff(lambda, 2 * self.depth as usize)?;
        if self.options.adaptive_cutoff {
            let mut cutoff = 1;
            let mut prev = self.p_lambda_with_cutoff(lambda, cutoff)?;
            let mut stable = 0;
            loop {
                cutoff += 1;
                let next = self.p_lambda_with_cutoff(lambda, cutoff)?;
                if next.agrees_with(self.rd, &prev, Depth::At(self.depth))? {
                    stable += 1;
                    if stable >= 2 {
                        break;
                    }
                } else {
                    stable = 0;
                }
                prev = next;
            }
            if !got.agrees_with(self.rd, &prev, Depth::At(self.depth))? {
                return Err(Error::Window(
                    "adaptive cutoff disagrees with the closed-form bound for P^lambda".into(),
                ));
            }
        }
        Ok(got)
    }

    /// As [`SymContext::p_lambda`] with an explicit length cutoff
    /// (used by the stabilization checks).
    pub fn p_lambda_with_cutoff(&self, lambda: &[i64], cutoff: usize) -> Result<TruncSeries> {
        self.rd.check_vector(lambda)?;
        if !self.rd.is_dominant(lambda) {
            return Err(Error::NotDominant(format!("{lambda:?}")));
        }
        let n = self.depth;
        let reps = min_coset_reps(self.rd, lambda, cutoff, self.dl.cap)?;
        let mut acc = TruncSeries::zero_window(lambda.to_vec(), Depth::At(n));
        for w in &reps {
            let hw = self.dl.apply_hw_window(w, lambda, n)?;
            let sw = ParamCoeff::monomial(w.sigma_mono(self.rd), big(1));
            acc = acc.add(self.rd, &hw.scale_coeff(&sw))?;
        }
        Ok(acc)
    }

    /// `H_lambda` by the quotient route `P^lambda(e^lambda) Delta Gamma^{-1}`,
    /// which keeps every coefficient a Laurent polynomial.
    pub fn h_lambda(&self, lambda: &[i64]) -> Result<TruncSeries> {
        let p = self.p_lambda(lambda)?;
        p.mul(self.rd, self.delta()?.as_ref())?
            .mul(self.rd, self.gamma_inverse()?.as_ref())?
            .truncate(self.rd, Depth::At(self.depth))
    }

    /// The twisted orbit sum `sum_w ^w Delta e^{w lambda}` for regular
    /// dominant `lambda`; an independent route to `H_lambda` (they must
    /// agree for regular `lambda`). Elements beyond length `n` only reach
    /// past the window since `ht(lambda - w lambda) >= l(w)`.
    pub fn j_regular(&self, lambda: &[i64]) -> Result<TruncSeries> {
        self.rd.check_vector(lambda)?;
        if !self.rd.is_regular_dominant(lambda) {
            return Err(Error::NotRegular(format!("{lambda:?}")));
        }
        let n = self.depth;
        let ball = self.dl.ball(n as usize)?;
        let mut acc = TruncSeries::zero_window(lambda.to_vec(), Depth::At(n));
        for w in ball.elements.iter().filter(|w| w.length() <= n as usize) {
            let tw = self.delta_twist(w)?;
            let wl = w.apply(lambda, self.rd.lattice_dim);
            let term = tw.shift(&wl).raise_ceiling(self.rd, lambda)?;
            acc = acc.add(self.rd, &term)?;
        }
        acc.truncate(self.rd, Depth::At(n))
    }

    /// Check `C_v Delta = Gamma ^v Delta` for all `v` up to `len_bound`.
    /// `C_v` is read off the symmetrizer with cutoff `2n + l(v)`, which
    /// certifies it through the full depth; the right-hand side never
    /// relabels a truncation.
    pub fn cherednik_check(&self, len_bound: usize) -> Result<CherednikReport> {
        let n = self.depth;
        let cutoff = 2 * self.depth as usize + len_bound;
        let p = self.dl.symmetrizer(cutoff, n)?;
        let ball = self.dl.ball(len_bound)?;
        let gamma = self.gamma()?;
        let delta = self.delta()?;
        let mut rows = Vec::new();
        for v in ball.elements.iter().filter(|v| v.length() <= len_bound) {
            let c_v = p
                .component(&v.word)
                .cloned()
                .unwrap_or_else(|| TruncSeries::zero_window(vec![0; self.rd.lattice_dim], Depth::At(n)));
            let lhs = c_v.mul(self.rd, &delta)?;
            let rhs = gamma.mul(self.rd, self.delta_twist(v)?.as_ref())?;
            let checked_depth = n.min(p.certified_depth(v.length()));
            let ok = lhs.agrees_with(self.rd, &rhs, Depth::At(checked_depth))?;
            let discrepancy = if ok {
                None
            } else {
                lhs.first_discrepancy(self.rd, &rhs, Depth::At(checked_depth))?
            };
            rows.push(CherednikRow {
                word: v.word.clone(),
                checked_depth,
                ok,
                discrepancy,
            });
        }
        Ok(CherednikReport { rows })
    }

    /// Optional user-supplied imaginary kernel factor
    /// `prod ((1 - sigma^2 e^{-beta}) / (1 - e^{-beta}))^m`; requires equal
    /// parameters and nonnegative multiplicities. Listed W-translates must
    /// carry equal multiplicities (validated within the depth window).
    pub fn delta_im(&self, imaginary: &[(Vec<i64>, u32)]) -> Result<TruncSeries> {
        if !self.rd.classes.is_equal_mode() {
            return Err(Error::UnequalParameters);
        }
        let n = self.depth;
        let d = self.rd.lattice_dim;
        let listed: HashMap<&[i64], u32> = imaginary
            .iter()
            .map(|(v, m)| (v.as_slice(), *m))
            .collect();
        for (v, m) in imaginary {
            self.rd.check_vector(v)?;
            let h = self.rd.height(v)?;
            if h < 1 || !self.rd.in_positive_coroot_cone(v) {
                return Err(Error::Window(format!(
                    "imaginary coroot {v:?} is not in the positive cone"
                )));
            }
            for i in 0..self.rd.index_count {
                let rv = self.rd.reflect(i, v)?;
                if let Some(&m2) = listed.get(rv.as_slice()) {
                    if m2 != *m {
                        return Err(Error::Window(format!(
                            "multiplicities differ along the orbit of {v:?}"
                        )));
                    }
                }
            }
        }
        let sigma = self.rd.classes.class_var(0);
        let mut acc = TruncSeries::one_window(d, n);
        for (v, mult) in imaginary {
            let h = self.rd.height(v)?;
            // (1 - s^2 e^{-v}) / (1 - e^{-v}) = 1 + (1 - s^2) sum_k e^{-kv}
            let mut factor = TruncSeries::one_window(d, n);
            let coeff = ParamCoeff::one().sub(&ParamCoeff::var_pow(sigma, 2));
            let mut k = 1;
            while k * h <= n {
                let mu: Vec<i64> = v.iter().map(|x| -k * x).collect();
                factor.push_term_pub(mu, coeff.clone());
                k += 1;
            }
            for _ in 0..*mult {
                acc = acc.mul(self.rd, &factor)?;
            }
        }
        Ok(acc)
    }
}

/// Result rows of the Cherednik identity check.
#[derive(Clone, Debug)]
pub struct CherednikRow {
    pub word: Vec<u8>,
    pub checked_depth: i64,
    pub ok: bool,
    pub discrepancy: Option<Vec<i64>>,
}

#[derive(Clone, Debug)]
pub struct CherednikReport {
    pub rows: Vec<CherednikRow>,
}

impl CherednikReport {
    pub fn all_ok(&self) -> bool {
        self.rows.iter().all(|r| r.ok)
    }
}

/// Check that the negative-multiplicity guard stays separate from `u32`
/// parsing at the API boundary (the CLI parses signed input).
pub fn validate_multiforms(ms: &[i64]) -> Result<Vec<u32>> {
    ms.iter()
        .map(|&m| u32::try_from(m).map_err(|_| Error::NegativeMultiplicity))
        .collect()
}
