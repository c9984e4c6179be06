//! Weyl-group combinatorics: enumeration by length, canonical words,
//! inversion sets, coset representatives, real coroots and Poincare series.
//!
//! Elements are identified by their integer matrix on the lattice `Y`
//! (the columns of `coroots_in_basis` are independent, so the action is
//! faithful); words are ShortLex-minimal reduced words, which makes every
//! downstream enumeration deterministic.

use std::collections::HashMap;

use crate::param::{Mono, ParamCoeff, Var};
use crate::root_datum::RootDatum;
use crate::{Error, Result};

pub const DEFAULT_ELEMENT_CAP: usize = 200_000;

/// A Weyl-group element: lattice matrix plus its canonical reduced word.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct WeylElt {
    /// Row-major `d x d` integer matrix acting on column vectors of `Y`.
    pub matrix: Vec<i64>,
    /// ShortLex-minimal reduced word over the index set.
    pub word: Vec<u8>,
}

impl WeylElt {
    pub fn identity(d: usize) -> Self {
        let mut m = vec![0i64; d * d];
        for k in 0..d {
            m[k * d + k] = 1;
        }
        WeylElt {
            matrix: m,
            word: Vec::new(),
        }
    }

    pub fn length(&self) -> usize {
        self.word.len()
    }

    pub fn apply(&self, v: &[i64], d: usize) -> Vec<i64> {
        (0..d)
            .map(|r| (0..d).map(|c| self.matrix[r * d + c] * v[c]).sum())
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        self.word.is_empty()
    }

    /// The product monomial of class variables along the word
    /// (well defined by the parameter-class constraints).
    pub fn sigma_mono(&self, rd: &RootDatum) -> Mono {
        let mut m = Mono::one();
        for &i in &self.word {
            m = m.mul(&Mono::var(Var::Sigma(rd.classes.sigma[i as usize])));
        }
        m
    }

    /// `sigma_w^2` as a coefficient.
    pub fn sigma_sq(&self, rd: &RootDatum) -> ParamCoeff {
        let m = self.sigma_mono(rd);
        ParamCoeff::monomial(m.mul(&self.sigma_mono(rd)), crate::param::big(1))
    }
}

fn mat_mul(a: &[i64], b: &[i64], d: usize) -> Vec<i64> {
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

/// All elements of length at most `len_bound`, breadth-first by length,
/// each layer sorted by canonical word.
#[derive(Clone, Debug)]
pub struct WeylBall {
    pub elements: Vec<WeylElt>,
    /// First element index of each length layer; `layers[l]..layers[l+1]`.
    pub layers: Vec<usize>,
    index: HashMap<Vec<i64>, usize>,
}

impl WeylBall {
    pub fn len_bound(&self) -> usize {
        self.layers.len().saturating_sub(2)
    }

    pub fn get(&self, matrix: &[i64]) -> Option<&WeylElt> {
        self.index.get(matrix).map(|&k| &self.elements[k])
    }

    pub fn length_of(&self, matrix: &[i64]) -> Option<usize> {
        self.get(matrix).map(|w| w.length())
    }

    pub fn layer(&self, l: usize) -> &[WeylElt] {
        &self.elements[self.layers[l]..self.layers[l + 1]]
    }

    /// True when the whole group was exhausted strictly below the bound
    /// (some layer within the bound is empty).
    pub fn exhausted(&self) -> bool {
        self.layers.windows(2).any(|w| w[0] == w[1])
    }
}

/// BFS over right multiplication, dedup by matrix. Canonical words are
/// ShortLex-minimal because parents are visited in canonical order and
/// letters in increasing order.
pub fn weyl_ball(rd: &RootDatum, len_bound: usize, cap: usize) -> Result<WeylBall> {
    weyl_ball_for(rd, &(0..rd.index_count).collect::<Vec<_>>(), len_bound, cap)
}

/// Ball of the standard parabolic subgroup generated by `gens`.
pub fn weyl_ball_for(
    rd: &RootDatum,
    gens: &[usize],
    len_bound: usize,
    cap: usize,
) -> Result<WeylBall> {
    for &i in gens {
        rd.check_index(i)?;
    }
    let d = rd.lattice_dim;
    let e = WeylElt::identity(d);
    let mut index = HashMap::new();
    index.insert(e.matrix.clone(), 0usize);
    let mut elements = vec![e];
    let mut layers = vec![0usize, 1];
    for _len in 0..len_bound {
        let (lo, hi) = (layers[layers.len() - 2], layers[layers.len() - 1]);
        let mut next: Vec<WeylElt> = Vec::new();
        for k in lo..hi {
            let w = elements[k].clone();
            for &i in gens {
                let m = mat_mul(&w.matrix, rd.simple_reflection_matrix(i), d);
                if index.contains_key(&m) || next.iter().any(|x| x.matrix == m) {
                    continue;
                }
                let mut word = w.word.clone();
                word.push(i as u8);
                next.push(WeylElt { matrix: m, word });
                if elements.len() + next.len() > cap {
                    return Err(Error::CapExceeded(elements.len() + next.len(), cap));
                }
            }
        }
        next.sort_by(|a, b| a.word.cmp(&b.word));
        for w in next {
            index.insert(w.matrix.clone(), elements.len());
            elements.push(w);
        }
        layers.push(elements.len());
        if layers[layers.len() - 1] == layers[layers.len() - 2] {
            // group exhausted; pad remaining layers as empty
            while layers.len() < len_bound + 2 {
                layers.push(elements.len());
            }
            break;
        }
    }
    Ok(WeylBall {
        elements,
        layers,
        index,
    })
}

/// A positive real coroot with its parameter classes.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PosRealCoroot {
    /// Coordinates of `beta^vee` in the `Y`-basis.
    pub coords: Vec<i64>,
    /// Coordinates in the coroot basis (all nonnegative).
    pub q_coords: Vec<i64>,
    /// The linear form `beta` on the `Y`-basis.
    pub root_form: Vec<i64>,
    /// Sum of `q_coords`.
    pub height: i64,
    /// Class variables of `(sigma_beta, sigma'_beta)`.
    pub sigma_class: u16,
    pub sigma_prime_class: u16,
}

impl PosRealCoroot {
    pub fn sigma_var(&self) -> Var {
        Var::Sigma(self.sigma_class)
    }
    pub fn sigma_prime_var(&self) -> Var {
        Var::Sigma(self.sigma_prime_class)
    }
}

fn simple_coroot(rd: &RootDatum, i: usize) -> PosRealCoroot {
    let mut q = vec![0i64; rd.index_count];
    q[i] = 1;
    PosRealCoroot {
        coords: rd.coroots[i].clone(),
        q_coords: q,
        root_form: rd.roots_on_basis[i].clone(),
        height: 1,
        sigma_class: rd.classes.sigma[i],
        sigma_prime_class: rd.classes.sigma_prime[i],
    }
}

/// Reflect a coroot (with its root form) by `r_i`, keeping the classes.
fn reflect_coroot(rd: &RootDatum, i: usize, b: &PosRealCoroot) -> PosRealCoroot {
    let m = rd.pair(i, &b.coords);
    let coords: Vec<i64> = b
        .coords
        .iter()
        .zip(&rd.coroots[i])
        .map(|(x, c)| x - m * c)
        .collect();
    // dual action on the form: beta . r_i
    let mb: i64 = b
        .root_form
        .iter()
        .zip(&rd.coroots[i])
        .map(|(x, c)| x * c)
        .sum();
    let root_form: Vec<i64> = b
        .root_form
        .iter()
        .zip(&rd.roots_on_basis[i])
        .map(|(x, a)| x - mb * a)
        .collect();
    let q_coords = rd
        .coroot_coordinates(&coords)
        .expect("reflected coroot stays in the coroot lattice");
    let height = q_coords.iter().sum();
    PosRealCoroot {
        coords,
        q_coords,
        root_form,
        height,
        sigma_class: b.sigma_class,
        sigma_prime_class: b.sigma_prime_class,
    }
}

/// Every positive real coroot of height at most `height_bound`, generated
/// by closing the simple coroots under simple reflections. Sorted by
/// (height, coords) so the enumeration order is deterministic.
pub fn positive_real_coroots(rd: &RootDatum, height_bound: i64) -> Vec<PosRealCoroot> {
    let mut seen: HashMap<Vec<i64>, PosRealCoroot> = HashMap::new();
    let mut queue: Vec<PosRealCoroot> = Vec::new();
    if height_bound >= 1 {
        for i in 0..rd.index_count {
            let b = simple_coroot(rd, i);
            seen.insert(b.coords.clone(), b.clone());
            queue.push(b);
        }
    }
    while let Some(b) = queue.pop() {
        for i in 0..rd.index_count {
            let nb = reflect_coroot(rd, i, &b);
            if nb.height < 1 || nb.height > height_bound {
                continue;
            }
            if nb.q_coords.iter().any(|&c| c < 0) {
                continue;
            }
            if !seen.contains_key(&nb.coords) {
                seen.insert(nb.coords.clone(), nb.clone());
                queue.push(nb);
            }
        }
    }
    let mut out: Vec<PosRealCoroot> = seen.into_values().collect();
    out.sort_by(|a, b| (a.height, &a.coords).cmp(&(b.height, &b.coords)));
    out
}

/// Identify an arbitrary lattice vector as `+/-` a positive real coroot.
pub fn identify_coroot(rd: &RootDatum, v: &[i64]) -> Result<(PosRealCoroot, bool)> {
    let h = rd
        .height(v)
        .map_err(|_| Error::NotRealCoroot(format!("{v:?}")))?;
    if h == 0 {
        return Err(Error::NotRealCoroot(format!("{v:?} has height 0")));
    }
    let positive = h > 0;
    let target: Vec<i64> = if positive {
        v.to_vec()
    } else {
        v.iter().map(|x| -x).collect()
    };
    positive_real_coroots(rd, h.abs())
        .into_iter()
        .find(|b| b.coords == target)
        .map(|b| (b, positive))
        .ok_or_else(|| Error::NotRealCoroot(format!("{v:?}")))
}

/// The coroots of the inversion set of `w^{-1}`, read off the canonical
/// word: `beta_k = r_{i_1} ... r_{i_{k-1}}(alpha_{i_k}^vee)`.
pub fn inversion_coroots(rd: &RootDatum, w: &WeylElt) -> Vec<PosRealCoroot> {
    let mut out = Vec::with_capacity(w.length());
    for k in 0..w.word.len() {
        let mut b = simple_coroot(rd, w.word[k] as usize);
        for &i in w.word[..k].iter().rev() {
            b = reflect_coroot(rd, i as usize, &b);
        }
        out.push(b);
    }
    out
}

/// `w(alpha_i^vee)` as a lattice vector.
pub fn apply_to_coroot(rd: &RootDatum, w: &WeylElt, i: usize) -> Vec<i64> {
    w.apply(&rd.coroots[i], rd.lattice_dim)
}

/// True when `l(w r_i) > l(w)`, tested as `w(alpha_i^vee)` positive.
pub fn ascends_right(rd: &RootDatum, w: &WeylElt, i: usize) -> bool {
    let v = apply_to_coroot(rd, w, i);
    rd.two_rho_pairing(&v) > 0
}

/// Minimal-length coset representatives for `W / W_lambda` up to `len_bound`,
/// for a dominant `lambda`; `W_lambda` is generated by the `r_i` with
/// `alpha_i(lambda) = 0`.
pub fn min_coset_reps(
    rd: &RootDatum,
    lambda: &[i64],
    len_bound: usize,
    cap: usize,
) -> Result<Vec<WeylElt>> {
    rd.check_vector(lambda)?;
    if !rd.is_dominant(lambda) {
        return Err(Error::NotDominant(format!("{lambda:?}")));
    }
    let stab: Vec<usize> = (0..rd.index_count)
        .filter(|&i| rd.pair(i, lambda) == 0)
        .collect();
    let ball = weyl_ball(rd, len_bound, cap)?;
    Ok(ball
        .elements
        .iter()
        .filter(|w| stab.iter().all(|&i| ascends_right(rd, w, i)))
        .cloned()
        .collect())
}

/// Membership test for the minimal-representative set of `lambda`.
pub fn is_min_coset_rep(rd: &RootDatum, lambda: &[i64], w: &WeylElt) -> bool {
    (0..rd.index_count)
        .filter(|&i| rd.pair(i, lambda) == 0)
        .all(|i| ascends_right(rd, w, i))
}

/// Poincare census: the sum of `sigma_w^2` over elements of length at most
/// `degree_bound` in the parabolic subgroup generated by `gens` (or the
/// whole group). The flag reports whether the group was exhausted.
pub struct PoincareSeries {
    pub series: ParamCoeff,
    pub exact: bool,
}

pub fn poincare_series(
    rd: &RootDatum,
    gens: Option<&[usize]>,
    degree_bound: usize,
    cap: usize,
) -> Result<PoincareSeries> {
    let all: Vec<usize> = (0..rd.index_count).collect();
    let gens = gens.unwrap_or(&all);
    let ball = weyl_ball_for(rd, gens, degree_bound, cap)?;
    let mut series = ParamCoeff::zero();
    for w in &ball.elements {
        series.add_assign(&w.sigma_sq(rd));
    }
    Ok(PoincareSeries {
        series,
        exact: ball.exhausted(),
    })
}
