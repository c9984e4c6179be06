//! Demazure-Lusztig operators and truncated group-algebra elements.
//!
//! Two computation regimes, chosen per use. Anything applied to a single
//! `e^lambda` is computed as an exact Laurent polynomial: the operator
//! `H_i` acts termwise through a one-variable exact division along the
//! coroot string, so no truncation is ever transported across a
//! reflection. Group-algebra elements `H_w = sum f_v [v]`, whose
//! coefficients live in the negative coroot cone, are instead kept as
//! depth-truncated series; there the exponent heights only add, so a
//! fixed window is closed under right multiplication by `h_i`.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;

use crate::param::{Mono, ParamCoeff, Var};
use crate::root_datum::RootDatum;
use crate::series::{expand_b_raw, expand_c_raw, Depth, Sign, TruncSeries};
use crate::weyl::{weyl_ball, WeylBall, WeylElt, DEFAULT_ELEMENT_CAP};
use crate::{Error, Result};

/// The unit monomials entering one operator step
/// `f  ->  scale * ( t ^{r_i}f + b(t, u; e^{alpha_i^vee}) (f - ^{r_i}f) )`.
#[derive(Clone, Debug)]
struct StepRing {
    t: Mono,
    u: Mono,
    scale: Mono,
}

impl StepRing {
    /// `H_i` in the parameter ring.
    fn sigma(rd: &RootDatum, i: usize) -> StepRing {
        let (s, sp) = rd.sigma_vars(i);
        StepRing {
            t: Mono::var(s),
            u: Mono::var(sp),
            scale: Mono::one(),
        }
    }

    /// The image of `sigma_i H_i` under `sigma -> q^{-1/2}`.
    fn q_scaled(rd: &RootDatum, i: usize) -> StepRing {
        let t = Mono::power(Var::QHalf(rd.classes.sigma[i]), -1);
        let u = Mono::power(Var::QHalf(rd.classes.sigma_prime[i]), -1);
        StepRing {
            scale: t.clone(),
            t,
            u,
        }
    }
}

/// Reachability pruning data for window-restricted operator chains: the
/// target window `(lambda, n)` and the matrices of all subword products of
/// the operators still to be applied. A monomial can be dropped as soon as
/// no remaining subword can bring it back within the window, because every
/// later exponent has the form `u(mu) - nu` with `nu` in the positive cone.
struct Prune<'a> {
    rd: &'a RootDatum,
    lambda: &'a [i64],
    n: i64,
    /// For each subword matrix `u`: `2 rho(lambda) - 2 rho(u(.))` data,
    /// stored as the row vector `2 rho . u` for fast evaluation.
    rows: Vec<Vec<i64>>,
}

impl<'a> Prune<'a> {
    fn new(rd: &'a RootDatum, lambda: &'a [i64], n: i64, subwords: &[Vec<i64>]) -> Self {
        let d = rd.lattice_dim;
        let rows = subwords
            .iter()
            .map(|m| {
                (0..d)
                    .map(|c| (0..d).map(|r| rd.two_rho[r] * m[r * d + c]).sum())
                    .collect()
            })
            .collect();
        Prune {
            rd,
            lambda,
            n,
            rows,
        }
    }

    /// Twice the height of `lambda - u(mu)` for each subword `u`.
    fn gaps(&self, mu: &[i64]) -> Vec<i64> {
        let top = self.rd.two_rho_pairing(self.lambda);
        self.rows
            .iter()
            .map(|row| top - row.iter().zip(mu).map(|(a, b)| a * b).sum::<i64>())
            .collect()
    }

    fn keep(&self, mu: &[i64]) -> bool {
        self.gaps(mu).iter().any(|&g| g <= 2 * self.n)
    }

    /// Allowed `j`-interval union for the string `mu - j alpha^vee`,
    /// `j` in `[lo, hi]`, from the per-subword linear height functions.
    fn string_intervals(&self, mu: &[i64], alpha: &[i64], lo: i64, hi: i64) -> Vec<(i64, i64)> {
        let base = self.gaps(mu);
        let mut ivs: Vec<(i64, i64)> = Vec::new();
        for (row, b) in self.rows.iter().zip(base) {
            // gap(j) = b + 2 j ht(u(alpha)); keep when gap <= 2n
            let slope: i64 = row.iter().zip(alpha).map(|(a, x)| a * x).sum();
            let (a, z) = if slope == 0 {
                if b <= 2 * self.n {
                    (lo, hi)
                } else {
                    continue;
                }
            } else if slope > 0 {
                let j_max = (2 * self.n - b).div_euclid(slope);
                (lo, j_max.min(hi))
            } else {
                let j_min = -((2 * self.n - b).div_euclid(-slope));
                (j_min.max(lo), hi)
            };
            if a <= z {
                ivs.push((a, z));
            }
        }
        ivs.sort_unstable();
        let mut merged: Vec<(i64, i64)> = Vec::new();
        for (a, z) in ivs {
            match merged.last_mut() {
                Some((_, pz)) if a <= *pz + 1 => *pz = (*pz).max(z),
                _ => merged.push((a, z)),
            }
        }
        merged
    }
}

type PolyMap = BTreeMap<Vec<i64>, ParamCoeff>;

fn add_term(map: &mut PolyMap, mu: Vec<i64>, c: ParamCoeff) {
    if c.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match map.entry(mu) {
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

/// One exact operator step on a finite polynomial, with optional pruning.
///
/// For each monomial `e^mu` with `m = alpha_i(mu)` the result is
/// `scale ( t e^{r_i mu} + Q )`, where `Q` is the exact quotient of
/// `((t - t^{-1}) + (u - u^{-1}) z)(1 - z^{-m})` by `(1 - z^2)` read along
/// the string `e^{mu - j alpha_i^vee}`. Odd `m` requires `t = u`; the
/// parameter-class constraints make this automatic on valid data.
fn dl_step(
    rd: &RootDatum,
    f: &PolyMap,
    i: usize,
    ring: &StepRing,
    prune: Option<&Prune>,
) -> Result<PolyMap> {
    let tc = ParamCoeff::monomial(ring.t.clone(), crate::param::big(1))
        .sub(&ParamCoeff::monomial(ring.t.inv(), crate::param::big(1)));
    let uc = ParamCoeff::monomial(ring.u.clone(), crate::param::big(1))
        .sub(&ParamCoeff::monomial(ring.u.inv(), crate::param::big(1)));
    let lead = ParamCoeff::monomial(ring.scale.mul(&ring.t), crate::param::big(1));
    let scale_tc = tc.mul_mono(&ring.scale, &crate::param::big(1));
    let scale_uc = uc.mul_mono(&ring.scale, &crate::param::big(1));
    let alpha = &rd.coroots[i];
    let mut out = PolyMap::new();
    for (mu, coeff) in f {
        let m = rd.pair(i, mu);
        if m % 2 != 0 && ring.t != ring.u {
            return Err(Error::DivisionRemainder(format!(
                "alpha_{i}(mu) = {m} odd with distinct parameters"
            )));
        }
        // reflected leading term
        let rmu: Vec<i64> = mu.iter().zip(alpha).map(|(x, c)| x - m * c).collect();
        if prune.map(|p| p.keep(&rmu)).unwrap_or(true) {
            add_term(&mut out, rmu, coeff.mul(&lead));
        }
        // string terms
        let (lo, hi) = if m > 0 { (1, m) } else { (m + 1, 0) };
        if lo > hi {
            continue;
        }
        let ranges = match prune {
            Some(p) => p.string_intervals(mu, alpha, lo, hi),
            None => vec![(lo, hi)],
        };
        for (a, z) in ranges {
            for j in a..=z {
                // m > 0: coefficient -(j odd ? uc : tc); m < 0 at k = -j: +(k odd ? uc : tc)
                let odd = j.rem_euclid(2) == 1;
                let base = if odd { &scale_uc } else { &scale_tc };
                let c = if m > 0 {
                    coeff.mul(base).neg()
                } else {
                    coeff.mul(base)
                };
                let x: Vec<i64> = mu.iter().zip(alpha).map(|(v, c)| v - j * c).collect();
                add_term(&mut out, x, c);
            }
        }
    }
    Ok(out)
}

/// A truncation of an element of the group algebra: finitely many
/// components `f_v [v]`, all sharing ceiling `0` and one depth, keyed by
/// the canonical word of `v`. `len_bound` records which `w` entered a
/// symmetrizer-style sum (0 for a single `H_w`).
#[derive(Clone, Debug)]
pub struct GroupSeries {
    pub terms: BTreeMap<Vec<u8>, (WeylElt, TruncSeries)>,
    pub len_bound: usize,
    pub depth: i64,
}

impl GroupSeries {
    pub fn unit(d: usize, n: i64) -> GroupSeries {
        let mut terms = BTreeMap::new();
        terms.insert(
            Vec::new(),
            (WeylElt::identity(d), TruncSeries::one_window(d, n)),
        );
        GroupSeries {
            terms,
            len_bound: 0,
            depth: n,
        }
    }

    pub fn component(&self, word: &[u8]) -> Option<&TruncSeries> {
        self.terms.get(word).map(|(_, s)| s)
    }

    /// Depth through which the `[v]`-component of a symmetrizer sum with
    /// this `len_bound` is certified.
    pub fn certified_depth(&self, v_len: usize) -> i64 {
        if self.len_bound == 0 {
            self.depth
        } else {
            self.depth
                .min((self.len_bound as i64 - v_len as i64).div_euclid(2))
        }
    }
}

/// Operator context: root datum plus content-addressed caches for the
/// `b`/`c` expansions, the canonical-word ball, and group elements. Caches
/// are per-context; share nothing across threads (create one per worker).
type ExpandCache = HashMap<(Vec<i64>, i64, bool), Rc<TruncSeries>>;
type HwCache = HashMap<(Vec<u8>, i64), Rc<GroupSeries>>;

pub struct DlContext<'a> {
    pub rd: &'a RootDatum,
    pub cap: usize,
    ball: RefCell<Option<Rc<WeylBall>>>,
    expand_cache: RefCell<ExpandCache>,
    hw_cache: RefCell<HwCache>,
}

impl<'a> DlContext<'a> {
    pub fn new(rd: &'a RootDatum) -> Self {
        DlContext {
            rd,
            cap: DEFAULT_ELEMENT_CAP,
            ball: RefCell::new(None),
            expand_cache: RefCell::new(HashMap::new()),
            hw_cache: RefCell::new(HashMap::new()),
        }
    }

    pub fn with_cap(rd: &'a RootDatum, cap: usize) -> Self {
        let mut ctx = Self::new(rd);
        ctx.cap = cap;
        ctx
    }

    /// Canonical-word ball of radius at least `len`.
    pub fn ball(&self, len: usize) -> Result<Rc<WeylBall>> {
        {
            let cur = self.ball.borrow();
            if let Some(b) = cur.as_ref() {
                if b.len_bound() >= len {
                    return Ok(Rc::clone(b));
                }
            }
        }
        let fresh = Rc::new(weyl_ball(self.rd, len, self.cap)?);
        *self.ball.borrow_mut() = Some(Rc::clone(&fresh));
        Ok(fresh)
    }

    /// Cached sign-aware expansion of `b` or `c` at the (signed) coroot
    /// vector `v`, to depth `n`.
    fn expansion(&self, v: &[i64], n: i64, want_c: bool) -> Result<Rc<TruncSeries>> {
        let key = (v.to_vec(), n, want_c);
        if let Some(s) = self.expand_cache.borrow().get(&key) {
            return Ok(Rc::clone(s));
        }
        let rd = self.rd;
        let h = rd.height(v)?;
        if h == 0 {
            return Err(Error::NotRealCoroot(format!("{v:?}")));
        }
        let (sign, coords, height) = if h > 0 {
            (Sign::Positive, v.to_vec(), h)
        } else {
            (Sign::Negative, v.iter().map(|x| -x).collect(), -h)
        };
        // identify the parameter classes through the orbit
        let (beta, _) = crate::weyl::identify_coroot(rd, &coords)?;
        let s = if want_c {
            expand_c_raw(
                rd,
                &coords,
                height,
                beta.sigma_var(),
                beta.sigma_prime_var(),
                sign,
                n,
            )
        } else {
            expand_b_raw(
                rd,
                &coords,
                height,
                beta.sigma_var(),
                beta.sigma_prime_var(),
                sign,
                n,
            )
        };
        let s = Rc::new(s);
        self.expand_cache.borrow_mut().insert(key, Rc::clone(&s));
        Ok(s)
    }

    /// `H_i(f)` for an exact Laurent polynomial `f`.
    pub fn apply_h(&self, i: usize, f: &TruncSeries) -> Result<TruncSeries> {
        self.rd.check_index(i)?;
        if f.depth() != Depth::Exact {
            return Err(Error::Window(
                "operators in the exact regime take finite polynomials".into(),
            ));
        }
        let map: PolyMap = f.iter().map(|(m, c)| (m.clone(), c.clone())).collect();
        let out = dl_step(self.rd, &map, i, &StepRing::sigma(self.rd, i), None)?;
        poly_to_exact_series(self.rd, out)
    }

    /// The `q`-ring step: the image of `sigma_i H_i` after
    /// `sigma -> q^{-1/2}`, acting on exact polynomials over `q^{1/2}`.
    pub fn apply_scaled_h_q(&self, i: usize, f: &TruncSeries) -> Result<TruncSeries> {
        self.rd.check_index(i)?;
        if f.depth() != Depth::Exact {
            return Err(Error::Window(
                "operators in the exact regime take finite polynomials".into(),
            ));
        }
        let map: PolyMap = f.iter().map(|(m, c)| (m.clone(), c.clone())).collect();
        let out = dl_step(self.rd, &map, i, &StepRing::q_scaled(self.rd, i), None)?;
        poly_to_exact_series(self.rd, out)
    }

    /// `H_w(e^lambda)` as an exact Laurent polynomial, iterating the
    /// canonical word rightmost letter first.
    pub fn apply_hw(&self, w: &WeylElt, lambda: &[i64]) -> Result<TruncSeries> {
        self.rd.check_vector(lambda)?;
        let mut map = PolyMap::new();
        map.insert(lambda.to_vec(), ParamCoeff::one());
        for &i in w.word.iter().rev() {
            map = dl_step(self.rd, &map, i as usize, &StepRing::sigma(self.rd, i as usize), None)?;
        }
        let out = poly_to_exact_series(self.rd, map)?;
        if self.rd.is_dominant(lambda) && crate::weyl::is_min_coset_rep(self.rd, lambda, w) {
            // support stays below lambda for minimal representatives
            let anchored = out.with_ceiling(lambda);
            anchored.validate(self.rd)?;
            return Ok(anchored);
        }
        Ok(out)
    }

    /// Window-restricted variant: coefficients of `H_w(e^lambda)` at
    /// exponents within height `n` of `lambda`, exact; deeper exponents are
    /// pruned as soon as no remaining subword product can lift them back.
    /// The `ring` chooses the plain or `q`-specialized scaled step.
    fn apply_hw_window_ring(
        &self,
        w: &WeylElt,
        lambda: &[i64],
        n: i64,
        q_ring: bool,
    ) -> Result<TruncSeries> {
        self.rd.check_vector(lambda)?;
        let d = self.rd.lattice_dim;
        let nword = w.word.len();
        // subword-product matrices of every prefix
        let mut subwords: Vec<Vec<Vec<i64>>> = Vec::with_capacity(nword + 1);
        subwords.push(vec![WeylElt::identity(d).matrix]);
        for k in 0..nword {
            let i = w.word[k] as usize;
            let prev = &subwords[k];
            let mut next: Vec<Vec<i64>> = prev.clone();
            for m in prev {
                let prod = mat_mul_flat(m, self.rd.simple_reflection_matrix(i), d);
                if !next.contains(&prod) {
                    next.push(prod);
                }
            }
            subwords.push(next);
        }
        let mut map = PolyMap::new();
        map.insert(lambda.to_vec(), ParamCoeff::one());
        for k in (0..nword).rev() {
            let i = w.word[k] as usize;
            let ring = if q_ring {
                StepRing::q_scaled(self.rd, i)
            } else {
                StepRing::sigma(self.rd, i)
            };
            let prune = Prune::new(self.rd, lambda, n, &subwords[k]);
            map = dl_step(self.rd, &map, i, &ring, Some(&prune))?;
        }
        // final restriction to the window
        let mut out = TruncSeries::zero_window(lambda.to_vec(), Depth::At(n));
        for (mu, c) in map {
            let diff: Vec<i64> = lambda.iter().zip(&mu).map(|(a, b)| a - b).collect();
            let h = self.rd.height(&diff)?;
            if h <= n {
                out.push_term_pub(mu, c);
            }
        }
        Ok(out)
    }

    /// Window-restricted `H_w(e^lambda)` in the parameter ring.
    pub fn apply_hw_window(&self, w: &WeylElt, lambda: &[i64], n: i64) -> Result<TruncSeries> {
        self.apply_hw_window_ring(w, lambda, n, false)
    }

    /// Window-restricted `q`-ring chain: the image of
    /// `sigma_w H_w(e^lambda)` under `sigma -> q^{-1/2}`.
    pub fn apply_scaled_hw_q_window(
        &self,
        w: &WeylElt,
        lambda: &[i64],
        n: i64,
    ) -> Result<TruncSeries> {
        self.apply_hw_window_ring(w, lambda, n, true)
    }

    /// `H_w` as a truncated group-algebra element, built by right
    /// multiplication along the canonical word and cached per prefix.
    pub fn group_element(&self, w: &WeylElt, n: i64) -> Result<Rc<GroupSeries>> {
        self.group_element_word(&w.word, n)
    }

    fn group_element_word(&self, word: &[u8], n: i64) -> Result<Rc<GroupSeries>> {
        let key = (word.to_vec(), n);
        if let Some(g) = self.hw_cache.borrow().get(&key) {
            return Ok(Rc::clone(g));
        }
        let d = self.rd.lattice_dim;
        let out = if word.is_empty() {
            GroupSeries::unit(d, n)
        } else {
            let (prefix, last) = word.split_at(word.len() - 1);
            let i = last[0] as usize;
            let prev = self.group_element_word(prefix, n)?;
            let ball = self.ball(word.len())?;
            let mut terms: BTreeMap<Vec<u8>, (WeylElt, TruncSeries)> = BTreeMap::new();
            for (v, f_v) in prev.terms.values() {
                let beta = crate::weyl::apply_to_coroot(self.rd, v, i);
                let c_i = self.expansion(&beta, n, true)?;
                let b_i = self.expansion(&beta, n, false)?;
                // (f_v [v]) h_i = f_v (^v c)[v r_i] + f_v (^v b)[v]
                let vri_mat = mat_mul_flat(&v.matrix, self.rd.simple_reflection_matrix(i), d);
                let vri = ball
                    .get(&vri_mat)
                    .ok_or_else(|| Error::Window("ball too small for product".into()))?
                    .clone();
                let add_to = |terms: &mut BTreeMap<Vec<u8>, (WeylElt, TruncSeries)>,
                              target: WeylElt,
                              s: TruncSeries|
                 -> Result<()> {
                    use std::collections::btree_map::Entry;
                    match terms.entry(target.word.clone()) {
                        Entry::Vacant(e) => {
                            e.insert((target, s));
                        }
                        Entry::Occupied(mut e) => {
                            let merged = e.get().1.add(self.rd, &s)?;
                            e.get_mut().1 = merged;
                        }
                    }
                    Ok(())
                };
                add_to(&mut terms, vri, f_v.mul(self.rd, &c_i)?)?;
                add_to(&mut terms, v.clone(), f_v.mul(self.rd, &b_i)?)?;
            }
            terms.retain(|_, (_, s)| !s.is_empty());
            GroupSeries {
                terms,
                len_bound: 0,
                depth: n,
            }
        };
        let out = Rc::new(out);
        self.hw_cache.borrow_mut().insert(key, Rc::clone(&out));
        Ok(out)
    }

    /// `sum_{l(w) <= len_bound} sigma_w H_w` as a truncated group element.
    pub fn symmetrizer(&self, len_bound: usize, n: i64) -> Result<GroupSeries> {
        let ball = self.ball(len_bound)?;
        let mut terms: BTreeMap<Vec<u8>, (WeylElt, TruncSeries)> = BTreeMap::new();
        // the cached ball may be larger than requested
        for w in ball.elements.iter().filter(|w| w.length() <= len_bound) {
            let sw = ParamCoeff::monomial(w.sigma_mono(self.rd), crate::param::big(1));
            let ge = self.group_element(w, n)?;
            for (key, (v, f_v)) in &ge.terms {
                let scaled = f_v.scale_coeff(&sw);
                use std::collections::btree_map::Entry;
                match terms.entry(key.clone()) {
                    Entry::Vacant(e) => {
                        e.insert((v.clone(), scaled));
                    }
                    Entry::Occupied(mut e) => {
                        let merged = e.get().1.add(self.rd, &scaled)?;
                        e.get_mut().1 = merged;
                    }
                }
            }
        }
        Ok(GroupSeries {
            terms,
            len_bound,
            depth: n,
        })
    }

    /// Pair a group element with `e^lambda`: `sum_v f_v e^{v lambda}`,
    /// truncated to depth `n` below `lambda`.
    pub fn group_apply_monomial(
        &self,
        ge: &GroupSeries,
        lambda: &[i64],
        n: i64,
    ) -> Result<TruncSeries> {
        let mut acc = TruncSeries::zero_window(lambda.to_vec(), Depth::At(n));
        for (v, f_v) in ge.terms.values() {
            let vl = v.apply(lambda, self.rd.lattice_dim);
            let shifted = f_v.shift(&vl);
            let raised = shifted.raise_ceiling(self.rd, lambda)?;
            acc = acc.add(self.rd, &raised)?;
        }
        acc.truncate(self.rd, Depth::At(n))
    }
}

fn mat_mul_flat(a: &[i64], b: &[i64], d: usize) -> Vec<i64> {
    let mut out = vec![0i64; d * d];
    for r in 0..d {
        for k in 0..d {
            let x = a[r * d + k];
            if x == 0 {
                continue;
            }
            for c in 0..d {
                out[r * d + c] += x * b[k * d + c];
            }
        }
    }
    out
}

fn poly_to_exact_series(rd: &RootDatum, map: PolyMap) -> Result<TruncSeries> {
    // ceiling: the order-maximum of the support when it exists
    let mut best: Option<Vec<i64>> = None;
    let mut best_rho = i64::MIN;
    for mu in map.keys() {
        let r = rd.two_rho_pairing(mu);
        if r > best_rho {
            best_rho = r;
            best = Some(mu.clone());
        }
    }
    let ceiling = best.filter(|cand| {
        map.keys().all(|mu| {
            let diff: Vec<i64> = cand.iter().zip(mu).map(|(a, b)| a - b).collect();
            rd.in_positive_coroot_cone(&diff)
        })
    });
    Ok(TruncSeries::from_exact_parts(ceiling, map))
}
