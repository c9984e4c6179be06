//! Root data: generalized Cartan matrix, realization lattice, parameter
//! classes and the form `rho`.
//!
//! A [`RootDatum`] is the single source of structure for everything else in
//! the crate. Exponents of all series are integer vectors in a declared
//! basis of the lattice `Y`; the simple roots act as integer linear forms
//! (rows of `roots_on_basis`) and the simple coroots are integer vectors
//! (columns of `coroots_in_basis`).

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::Value;

use crate::param::Var;
use crate::{Error, Result};

/// Parameter classes: the symbols `sigma_i`, `sigma'_i` partitioned by the
/// mandatory identifications, each class owning one [`Var::Sigma`] variable.
#[derive(Clone, Debug)]
pub struct ParamClasses {
    /// Class id of `sigma_i`, indexed by `i`.
    pub sigma: Vec<u16>,
    /// Class id of `sigma'_i`, indexed by `i`.
    pub sigma_prime: Vec<u16>,
    /// Number of classes.
    pub count: u16,
}

impl ParamClasses {
    pub fn class_var(&self, class: u16) -> Var {
        Var::Sigma(class)
    }

    /// True when all symbols have been merged into a single class.
    pub fn is_equal_mode(&self) -> bool {
        self.count == 1
    }
}

/// How the lattice is declared in a config.
#[derive(Clone, Debug)]
pub enum LatticeConfig {
    /// `d = n`, roots act as coordinates, coroots are the transposed GCM.
    Coweight,
    /// Explicit realization matrices.
    Explicit {
        roots_on_basis: Vec<Vec<i64>>,
        coroots_in_basis: Vec<Vec<i64>>,
    },
}

/// Parameter policy: the mandated identifications only, or merge everything.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParamPolicy {
    Auto,
    Equal,
}

/// Parsed root-datum description (see the JSON schema in the guide).
#[derive(Clone, Debug)]
pub struct RootDatumConfig {
    pub cartan: Vec<Vec<i64>>,
    pub lattice: LatticeConfig,
    /// Entries are rationals; halves are the only non-integers accepted.
    pub rho: Option<Vec<BigRational>>,
    pub parameters: ParamPolicy,
}

impl RootDatumConfig {
    pub fn coweight(cartan: Vec<Vec<i64>>) -> Self {
        RootDatumConfig {
            cartan,
            lattice: LatticeConfig::Coweight,
            rho: None,
            parameters: ParamPolicy::Auto,
        }
    }

    pub fn with_equal_parameters(mut self) -> Self {
        self.parameters = ParamPolicy::Equal;
        self
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text)
            .map_err(|e| Error::Config(format!("invalid JSON: {e}")))?;
        Self::from_json(&v)
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Config("top level must be an object".into()))?;
        if let Some(s) = obj.get("schema") {
            if s.as_i64() != Some(1) {
                return Err(Error::Config(format!("unsupported schema {s}")));
            }
        }
        let cartan = obj
            .get("cartan")
            .ok_or_else(|| Error::Config("missing field \"cartan\"".into()))?;
        let cartan = int_matrix(cartan, "cartan")?;
        let lattice = match obj.get("lattice") {
            None => LatticeConfig::Coweight,
            Some(Value::String(s)) if s == "coweight" => LatticeConfig::Coweight,
            Some(Value::Object(l)) => {
                let roots = l.get("roots_on_basis").ok_or_else(|| {
                    Error::Config("lattice object missing \"roots_on_basis\"".into())
                })?;
                let coroots = l.get("coroots_in_basis").ok_or_else(|| {
                    Error::Config("lattice object missing \"coroots_in_basis\"".into())
                })?;
                LatticeConfig::Explicit {
                    roots_on_basis: int_matrix(roots, "roots_on_basis")?,
                    coroots_in_basis: int_matrix(coroots, "coroots_in_basis")?,
                }
            }
            Some(other) => {
                return Err(Error::Config(format!(
                    "field \"lattice\" must be \"coweight\" or an object, got {other}"
                )))
            }
        };
        let rho = match obj.get("rho") {
            None => None,
            Some(Value::Array(items)) => {
                let mut out = Vec::with_capacity(items.len());
                for (k, item) in items.iter().enumerate() {
                    out.push(parse_rational(item).ok_or_else(|| {
                        Error::Config(format!("rho[{k}] must be an integer or \"p/2\" string"))
                    })?);
                }
                Some(out)
            }
            Some(other) => {
                return Err(Error::Config(format!(
                    "field \"rho\" must be an array, got {other}"
                )))
            }
        };
        let parameters = match obj.get("parameters") {
            None => ParamPolicy::Auto,
            Some(Value::String(s)) if s == "auto" => ParamPolicy::Auto,
            Some(Value::String(s)) if s == "equal" => ParamPolicy::Equal,
            Some(other) => {
                return Err(Error::Config(format!(
                    "field \"parameters\" must be \"auto\" or \"equal\", got {other}"
                )))
            }
        };
        Ok(RootDatumConfig {
            cartan,
            lattice,
            rho,
            parameters,
        })
    }
}

fn int_matrix(v: &Value, field: &str) -> Result<Vec<Vec<i64>>> {
    let rows = v
        .as_array()
        .ok_or_else(|| Error::Config(format!("field \"{field}\" must be an array of arrays")))?;
    let mut out = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let row = row
            .as_array()
            .ok_or_else(|| Error::Config(format!("{field}[{i}] must be an array")))?;
        let mut r = Vec::with_capacity(row.len());
        for (j, x) in row.iter().enumerate() {
            r.push(
                x.as_i64()
                    .ok_or_else(|| Error::Config(format!("{field}[{i}][{j}] must be an integer")))?,
            );
        }
        out.push(r);
    }
    Ok(out)
}

fn parse_rational(v: &Value) -> Option<BigRational> {
    if let Some(i) = v.as_i64() {
        return Some(BigRational::from_integer(BigInt::from(i)));
    }
    let s = v.as_str()?;
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim().parse::<i64>().ok()?, b.trim().parse::<i64>().ok()?),
        None => (s.trim().parse::<i64>().ok()?, 1),
    };
    if den == 0 {
        return None;
    }
    Some(BigRational::new(BigInt::from(num), BigInt::from(den)))
}

/// Validated root datum. All downstream objects borrow one of these.
#[derive(Clone, Debug)]
pub struct RootDatum {
    /// Number of simple roots (`|I|`).
    pub index_count: usize,
    /// Rank of the lattice `Y`.
    pub lattice_dim: usize,
    /// `cartan[i][j] = alpha_j(alpha_i^vee)`.
    pub cartan: Vec<Vec<i64>>,
    /// Row `i` is the linear form `alpha_i` on the `Y`-basis.
    pub roots_on_basis: Vec<Vec<i64>>,
    /// Entry `j` is the coordinate vector of `alpha_j^vee`.
    pub coroots: Vec<Vec<i64>>,
    /// Twice the form `rho`; `rho(alpha_i^vee) = 1` for every `i`.
    pub two_rho: Vec<i64>,
    pub classes: ParamClasses,
    /// Left inverse of the coroot matrix: `coroot_solve.0 * C = den * Id`.
    coroot_inv: (Vec<Vec<i64>>, i64),
    /// Matrices of the simple reflections on `Y` (row-major `d x d`).
    simple_refl: Vec<Vec<i64>>,
}

impl RootDatum {
    pub fn build(config: RootDatumConfig) -> Result<Self> {
        let n = config.cartan.len();
        if n == 0 {
            return Err(Error::Gcm("empty matrix".into()));
        }
        for (i, row) in config.cartan.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Gcm(format!("row {i} has length {}", row.len())));
            }
        }
        let a = &config.cartan;
        for i in 0..n {
            if a[i][i] != 2 {
                return Err(Error::Gcm(format!("diagonal entry A[{i}][{i}] = {}", a[i][i])));
            }
            for j in 0..n {
                if i != j {
                    if a[i][j] > 0 {
                        return Err(Error::Gcm(format!(
                            "off-diagonal entry A[{i}][{j}] = {} is positive",
                            a[i][j]
                        )));
                    }
                    if (a[i][j] == 0) != (a[j][i] == 0) {
                        return Err(Error::Gcm(format!(
                            "A[{i}][{j}] = {} but A[{j}][{i}] = {}",
                            a[i][j], a[j][i]
                        )));
                    }
                }
            }
        }

        let (roots, coroots_cols) = match &config.lattice {
            LatticeConfig::Coweight => {
                // d = n, alpha_i = i-th coordinate, alpha_j^vee = j-th row of A.
                let roots: Vec<Vec<i64>> = (0..n)
                    .map(|i| (0..n).map(|k| if k == i { 1 } else { 0 }).collect())
                    .collect();
                let coroots: Vec<Vec<i64>> = (0..n).map(|j| (0..n).map(|i| a[j][i]).collect()).collect();
                (roots, coroots)
            }
            LatticeConfig::Explicit {
                roots_on_basis,
                coroots_in_basis,
            } => {
                if roots_on_basis.len() != n {
                    return Err(Error::Realization(format!(
                        "roots_on_basis has {} rows, expected {n}",
                        roots_on_basis.len()
                    )));
                }
                let d = roots_on_basis
                    .first()
                    .map(|r| r.len())
                    .ok_or_else(|| Error::Realization("empty roots_on_basis".into()))?;
                if d == 0 || roots_on_basis.iter().any(|r| r.len() != d) {
                    return Err(Error::Realization("ragged roots_on_basis".into()));
                }
                if coroots_in_basis.len() != d || coroots_in_basis.iter().any(|r| r.len() != n) {
                    return Err(Error::Realization(format!(
                        "coroots_in_basis must be {d} x {n}"
                    )));
                }
                let coroots: Vec<Vec<i64>> = (0..n)
                    .map(|j| (0..d).map(|k| coroots_in_basis[k][j]).collect())
                    .collect();
                (roots_on_basis.clone(), coroots)
            }
        };
        let d = roots[0].len();

        // Pairing: alpha_i(alpha_j^vee) must equal A[j][i].
        for i in 0..n {
            for j in 0..n {
                let got: i64 = (0..d).map(|k| roots[i][k] * coroots_cols[j][k]).sum();
                if got != a[j][i] {
                    return Err(Error::Realization(format!(
                        "alpha_{i}(alpha_{j}^vee) = {got}, Cartan matrix says {}",
                        a[j][i]
                    )));
                }
            }
        }
        if rank_of(&roots) != n {
            return Err(Error::Realization(
                "rows of roots_on_basis are linearly dependent".into(),
            ));
        }
        let coroot_rows: Vec<Vec<i64>> = coroots_cols.clone();
        if rank_of(&coroot_rows) != n {
            return Err(Error::Realization(
                "columns of coroots_in_basis are linearly dependent \
                 (singular GCMs need an explicit realization with d > n)"
                    .into(),
            ));
        }

        let coroot_inv = left_inverse(&coroots_cols, d)?;

        // rho: solve rho . alpha_i^vee = 1 when omitted (unique only for d = n).
        let two_rho = match &config.rho {
            Some(r) => {
                if r.len() != d {
                    return Err(Error::Rho(format!("of length {}, expected {d}", r.len())));
                }
                let mut t = Vec::with_capacity(d);
                for x in r {
                    let tx = x * BigRational::from_integer(BigInt::from(2));
                    if !tx.is_integer() {
                        return Err(Error::Rho("not integer or half-integer".into()));
                    }
                    t.push(int_to_i64(&tx.to_integer())?);
                }
                for (j, col) in coroots_cols.iter().enumerate() {
                    let v: i64 = (0..d).map(|k| t[k] * col[k]).sum();
                    if v != 2 {
                        return Err(Error::Rho(format!(
                            "invalid: rho(alpha_{j}^vee) = {}/2, must be 1",
                            v
                        )));
                    }
                }
                t
            }
            None => {
                if d != n {
                    return Err(Error::Rho(
                        "ambiguous on a lattice with d > n".into(),
                    ));
                }
                // Solve rho(alpha_j^vee) = 1 exactly; 2*rho must be integral.
                let ones = vec![BigRational::from_integer(BigInt::from(1)); n];
                let constraints: Vec<Vec<i64>> = coroots_cols.clone();
                let rho = solve_square(&constraints, &ones)
                    .ok_or_else(|| Error::Rho("unsolvable on this lattice".into()))?;
                let mut t = Vec::with_capacity(d);
                for x in &rho {
                    let tx = x * BigRational::from_integer(BigInt::from(2));
                    if !tx.is_integer() {
                        return Err(Error::Rho(
                            "not half-integral on this lattice".into(),
                        ));
                    }
                    t.push(int_to_i64(&tx.to_integer())?);
                }
                for (j, col) in coroots_cols.iter().enumerate() {
                    let v: i64 = (0..d).map(|k| t[k] * col[k]).sum();
                    debug_assert_eq!(v, 2, "solved rho fails on coroot {j}");
                }
                t
            }
        };

        // Parameter classes by union-find over {sigma_0..sigma_{n-1}, sigma'_0..}.
        let mut uf: Vec<usize> = (0..2 * n).collect();
        fn find(uf: &mut [usize], mut x: usize) -> usize {
            while uf[x] != x {
                uf[x] = uf[uf[x]];
                x = uf[x];
            }
            x
        }
        fn union(uf: &mut [usize], a: usize, b: usize) {
            let (ra, rb) = (find(uf, a), find(uf, b));
            if ra != rb {
                let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
                uf[hi] = lo;
            }
        }
        match config.parameters {
            ParamPolicy::Equal => {
                for k in 1..2 * n {
                    union(&mut uf, 0, k);
                }
            }
            ParamPolicy::Auto => {
                for i in 0..n {
                    // alpha_i(Y) contains an odd integer  =>  sigma_i = sigma'_i
                    if roots[i].iter().any(|x| x % 2 != 0) {
                        union(&mut uf, i, n + i);
                    }
                    for j in 0..n {
                        if i != j && a[i][j] == -1 && a[j][i] == -1 {
                            union(&mut uf, i, j);
                            union(&mut uf, i, n + i);
                            union(&mut uf, j, n + j);
                        }
                    }
                }
            }
        }
        let mut ids = vec![u16::MAX; 2 * n];
        let mut count: u16 = 0;
        for k in 0..2 * n {
            let r = find(&mut uf, k);
            if ids[r] == u16::MAX {
                ids[r] = count;
                count += 1;
            }
            ids[k] = ids[r];
        }
        let classes = ParamClasses {
            sigma: ids[..n].to_vec(),
            sigma_prime: ids[n..].to_vec(),
            count,
        };

        // Simple reflection matrices: r_i = Id - coroot_i (x) root_i.
        let simple_refl: Vec<Vec<i64>> = (0..n)
            .map(|i| {
                let mut m = vec![0i64; d * d];
                for r in 0..d {
                    for c in 0..d {
                        m[r * d + c] =
                            if r == c { 1 } else { 0 } - coroots_cols[i][r] * roots[i][c];
                    }
                }
                m
            })
            .collect();

        Ok(RootDatum {
            index_count: n,
            lattice_dim: d,
            cartan: config.cartan,
            roots_on_basis: roots,
            coroots: coroots_cols,
            two_rho,
            classes,
            coroot_inv,
            simple_refl,
        })
    }

    pub fn check_index(&self, i: usize) -> Result<()> {
        if i < self.index_count {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange(i, self.index_count))
        }
    }

    pub fn check_vector(&self, v: &[i64]) -> Result<()> {
        if v.len() == self.lattice_dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch(v.len(), self.lattice_dim))
        }
    }

    /// `alpha_i(v)`.
    pub fn pair(&self, i: usize, v: &[i64]) -> i64 {
        self.roots_on_basis[i]
            .iter()
            .zip(v)
            .map(|(a, b)| a * b)
            .sum()
    }

    /// `r_i(v) = v - alpha_i(v) alpha_i^vee`.
    pub fn reflect(&self, i: usize, v: &[i64]) -> Result<Vec<i64>> {
        self.check_index(i)?;
        self.check_vector(v)?;
        let m = self.pair(i, v);
        Ok(v.iter()
            .zip(&self.coroots[i])
            .map(|(x, c)| x - m * c)
            .collect())
    }

    /// Row-major `d x d` matrix of `r_i`.
    pub fn simple_reflection_matrix(&self, i: usize) -> &[i64] {
        &self.simple_refl[i]
    }

    /// `2 rho(v)`; equals `2 ht(v)` when `v` lies in the coroot lattice.
    pub fn two_rho_pairing(&self, v: &[i64]) -> i64 {
        self.two_rho.iter().zip(v).map(|(a, b)| a * b).sum()
    }

    /// Height of a coroot-lattice vector; errors when `2 rho(v)` is odd
    /// (which would mean `v` is outside the coroot lattice).
    pub fn height(&self, v: &[i64]) -> Result<i64> {
        let t = self.two_rho_pairing(v);
        if t % 2 != 0 {
            return Err(Error::Window(format!(
                "vector {v:?} is not in the coroot lattice (2 rho = {t})"
            )));
        }
        Ok(t / 2)
    }

    /// Coordinates in the coroot basis, when `v` lies in the coroot lattice.
    pub fn coroot_coordinates(&self, v: &[i64]) -> Option<Vec<i64>> {
        let (p, den) = &self.coroot_inv;
        let n = self.index_count;
        let d = self.lattice_dim;
        let mut x = Vec::with_capacity(n);
        for row in p.iter() {
            let s: i64 = (0..d).map(|k| row[k] * v[k]).sum();
            if s % den != 0 {
                return None;
            }
            x.push(s / den);
        }
        // Verify (catches vectors outside the span of the coroots).
        for k in 0..d {
            let got: i64 = (0..n).map(|j| self.coroots[j][k] * x[j]).sum();
            if got != v[k] {
                return None;
            }
        }
        Some(x)
    }

    /// True when `v` is a nonnegative combination of simple coroots.
    pub fn in_positive_coroot_cone(&self, v: &[i64]) -> bool {
        self.coroot_coordinates(v)
            .map(|x| x.iter().all(|&c| c >= 0))
            .unwrap_or(false)
    }

    /// True when `alpha_i(v) >= 0` for all `i`.
    pub fn is_dominant(&self, v: &[i64]) -> bool {
        (0..self.index_count).all(|i| self.pair(i, v) >= 0)
    }

    /// True when `alpha_i(v) > 0` for all `i`.
    pub fn is_regular_dominant(&self, v: &[i64]) -> bool {
        (0..self.index_count).all(|i| self.pair(i, v) > 0)
    }

    /// Braid order of the pair `(i, j)`: 2, 3, 4, 6 or `None` for infinite.
    pub fn braid_order(&self, i: usize, j: usize) -> Option<u32> {
        match self.cartan[i][j] * self.cartan[j][i] {
            0 => Some(2),
            1 => Some(3),
            2 => Some(4),
            3 => Some(6),
            _ => None,
        }
    }

    /// Parameter class variables of `(sigma_i, sigma'_i)`.
    pub fn sigma_vars(&self, i: usize) -> (Var, Var) {
        (
            Var::Sigma(self.classes.sigma[i]),
            Var::Sigma(self.classes.sigma_prime[i]),
        )
    }
}

fn int_to_i64(b: &BigInt) -> Result<i64> {
    i64::try_from(b).map_err(|_| Error::Rho("entry overflows".into()))
}

/// Rank of an integer matrix (rows given), by fraction-free elimination.
fn rank_of(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|&x| BigRational::from_integer(BigInt::from(x)))
                .collect()
        })
        .collect();
    let nrows = m.len();
    let ncols = m.first().map(|r| r.len()).unwrap_or(0);
    let mut rank = 0;
    let mut col = 0;
    use num_traits::Zero;
    while rank < nrows && col < ncols {
        let pivot = (rank..nrows).find(|&r| !m[r][col].is_zero());
        if let Some(p) = pivot {
            m.swap(rank, p);
            let inv = m[rank][col].recip();
            for c in col..ncols {
                let v = &m[rank][c] * &inv;
                m[rank][c] = v;
            }
            for r in 0..nrows {
                if r != rank && !m[r][col].is_zero() {
                    let f = m[r][col].clone();
                    for c in col..ncols {
                        let v = &m[r][c] - &f * &m[rank][c];
                        m[r][c] = v;
                    }
                }
            }
            rank += 1;
        }
        col += 1;
    }
    rank
}

/// Solve a square rational system `M x = b` exactly.
fn solve_square(m: &[Vec<i64>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    use num_traits::Zero;
    let n = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            row.iter()
                .map(|&x| BigRational::from_integer(BigInt::from(x)))
                .chain(std::iter::once(rhs.clone()))
                .collect()
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, p);
        let inv = a[col][col].recip();
        for c in col..=n {
            let v = &a[col][c] * &inv;
            a[col][c] = v;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in col..=n {
                    let v = &a[r][c] - &f * &a[col][c];
                    a[r][c] = v;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[row.len() - 1].clone()).collect())
}

/// Integer left inverse `P` of the coroot matrix with `P C = den Id`.
fn left_inverse(coroot_cols: &[Vec<i64>], d: usize) -> Result<(Vec<Vec<i64>>, i64)> {
    let n = coroot_cols.len();
    // Solve (C^T C) X = C^T over the rationals; P = X.
    let mut gram = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            gram[i][j] = (0..d).map(|k| coroot_cols[i][k] * coroot_cols[j][k]).sum();
        }
    }
    let mut p_rows: Vec<Vec<BigRational>> = Vec::with_capacity(n);
    for i in 0..n {
        // i-th row of P solves gram * x = e_i, then row = x^T C^T.
        let e: Vec<BigRational> = (0..n)
            .map(|k| BigRational::from_integer(BigInt::from(if k == i { 1 } else { 0 })))
            .collect();
        let x = solve_square(&gram, &e)
            .ok_or_else(|| Error::Realization("coroot Gram matrix is singular".into()))?;
        let row: Vec<BigRational> = (0..d)
            .map(|k| {
                (0..n)
                    .map(|j| &x[j] * BigRational::from_integer(BigInt::from(coroot_cols[j][k])))
                    .sum()
            })
            .collect();
        p_rows.push(row);
    }
    // Clear denominators.
    let mut den = BigInt::from(1);
    for row in &p_rows {
        for v in row {
            let q = v.denom();
            den = num_integer::lcm(den.clone(), q.clone());
        }
    }
    let den_i: i64 = i64::try_from(&den)
        .map_err(|_| Error::Realization("coroot inverse denominator overflows".into()))?;
    let p: Vec<Vec<i64>> = p_rows
        .iter()
        .map(|row| {
            row.iter()
                .map(|v| {
                    let scaled = v * BigRational::from_integer(den.clone());
                    i64::try_from(&scaled.to_integer()).map_err(|_| {
                        Error::Realization("coroot inverse entry overflows".into())
                    })
                })
                .collect::<Result<Vec<i64>>>()
        })
        .collect::<Result<Vec<Vec<i64>>>>()?;
    Ok((p, den_i))
}
