//! Exact integer and rational linear algebra.
//!
//! Everything downstream (phases, polynomial coefficients, ideal slices) is
//! built on the types here. Nothing in this module uses floating point.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ArithError {
    #[error("congruence system has no solution")]
    NoSolution,
    #[error("modulus must be positive")]
    BadModulus,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("denominator {0} is not invertible modulo {1}")]
    NotInvertible(BigInt, u64),
}

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Representative of `q` modulo 1 in `[0, 1)`.
pub fn frac_mod_one(q: &Rational) -> Rational {
    q - q.floor()
}

pub fn lcm_all<'a>(vals: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    vals.into_iter().fold(
        BigInt::one(),
        |acc, v| {
            if v.is_zero() {
                acc
            } else {
                acc.lcm(v)
            }
        },
    )
}

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> Result<Self, ArithError> {
        let cols = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != cols) {
            return Err(ArithError::Dimension("ragged rows".into()));
        }
        let data = rows
            .iter()
            .flat_map(|r| r.iter().cloned().map(Into::into))
            .collect();
        Ok(IntMatrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix, ArithError> {
        if self.cols != other.rows {
            return Err(ArithError::Dimension(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let prod = a * &other[(k, j)];
                    out[(i, j)] += prod;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(BigInt::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    /// Determinant of a square matrix (fraction-free elimination).
    pub fn determinant(&self) -> Result<BigInt, ArithError> {
        if self.rows != self.cols {
            return Err(ArithError::Dimension(
                "determinant of non-square matrix".into(),
            ));
        }
        let n = self.rows;
        let mut m: Vec<Vec<BigInt>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !m[i][k].is_zero()) else {
                return Ok(BigInt::zero());
            };
            if p != k {
                m.swap(p, k);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&m[k][k] * &m[i][j] - &m[i][k] * &m[k][j]) / &prev;
                    m[i][j] = v;
                }
                m[i][k] = BigInt::zero();
            }
            prev = m[k][k].clone();
        }
        Ok(sign * prev)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += factor * row[src]
    fn add_row(&mut self, dst: usize, src: usize, factor: &BigInt) {
        for j in 0..self.cols {
            let v = &self[(src, j)] * factor;
            self[(dst, j)] += v;
        }
    }

    /// col[dst] += factor * col[src]
    fn add_col(&mut self, dst: usize, src: usize, factor: &BigInt) {
        for i in 0..self.rows {
            let v = &self[(i, src)] * factor;
            self[(i, dst)] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -&self[(i, j)];
            self[(i, j)] = v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|v| v.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Dense rational matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RatMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>, cols: usize) -> Result<Self, ArithError> {
        if rows.iter().any(|r| r.len() != cols) {
            return Err(ArithError::Dimension("ragged rows".into()));
        }
        Ok(RatMatrix {
            rows: rows.len(),
            cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }
}

impl std::ops::Index<(usize, usize)> for RatMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

/// `U * A * V = S` with `U`, `V` unimodular and `S` diagonal, each diagonal
/// entry dividing the next.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    /// Diagonal entries of `S` (length `min(rows, cols)`).
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.s.rows.min(self.s.cols))
            .map(|i| self.s[(i, i)].clone())
            .collect()
    }
}

pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let (m, n) = (a.rows, a.cols);
    let mut s = a.clone();
    let mut u = IntMatrix::identity(m);
    let mut v = IntMatrix::identity(n);

    for t in 0..m.min(n) {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    let e = &s[(i, j)];
                    if e.is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| e.abs() < s[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return SmithForm { u, s, v };
            };
            s.swap_rows(t, pi);
            u.swap_rows(t, pi);
            s.swap_cols(t, pj);
            v.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..m {
                if s[(i, t)].is_zero() {
                    continue;
                }
                let q = -s[(i, t)].div_floor(&s[(t, t)]);
                s.add_row(i, t, &q);
                u.add_row(i, t, &q);
                clean &= s[(i, t)].is_zero();
            }
            for j in t + 1..n {
                if s[(t, j)].is_zero() {
                    continue;
                }
                let q = -s[(t, j)].div_floor(&s[(t, t)]);
                s.add_col(j, t, &q);
                v.add_col(j, t, &q);
                clean &= s[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }
            let pivot = s[(t, t)].clone();
            let offender =
                (t + 1..m).find(|&i| (t + 1..n).any(|j| !s[(i, j)].is_multiple_of(&pivot)));
            match offender {
                Some(i) => {
                    s.add_row(t, i, &BigInt::one());
                    u.add_row(t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if s[(t, t)].is_negative() {
            s.negate_row(t);
            u.negate_row(t);
        }
    }
    SmithForm { u, s, v }
}

fn clear_denominators(row: &[Rational]) -> Vec<BigInt> {
    let l = lcm_all(row.iter().map(|q| q.denom()));
    row.iter().map(|q| q.numer() * (&l / q.denom())).collect()
}

/// Integer row echelon form by fraction-free (Bareiss) elimination.
/// Returns the echelon rows and the pivot column of each.
fn bareiss_echelon(m: &RatMatrix) -> (Vec<Vec<BigInt>>, Vec<usize>) {
    let mut a: Vec<Vec<BigInt>> = (0..m.rows).map(|i| clear_denominators(m.row(i))).collect();
    let (rows, cols) = (m.rows, m.cols);
    let mut prev = BigInt::one();
    let mut r = 0;
    let mut pivots = Vec::new();
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(p, r);
        for i in r + 1..rows {
            if a[i][c].is_zero() {
                if !prev.is_one() || !a[r][c].is_one() {
                    for j in c + 1..cols {
                        let v = (&a[r][c] * &a[i][j]) / &prev;
                        a[i][j] = v;
                    }
                }
                continue;
            }
            for j in c + 1..cols {
                let v = (&a[r][c] * &a[i][j] - &a[i][c] * &a[r][j]) / &prev;
                a[i][j] = v;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        pivots.push(c);
        r += 1;
    }
    a.truncate(r);
    (a, pivots)
}

/// Rank and a nullspace basis (right kernel) of `m`, computed exactly.
pub fn rank_nullspace(m: &RatMatrix) -> (usize, Vec<Vec<Rational>>) {
    let (ech, pivots) = bareiss_echelon(m);
    let rank = pivots.len();
    let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
    let mut basis = Vec::new();
    for f in (0..m.cols).filter(|c| !pivot_set.contains(c)) {
        let mut x = vec![Rational::zero(); m.cols];
        x[f] = Rational::one();
        for (row, &pc) in ech.iter().zip(&pivots).rev() {
            let mut acc = Rational::zero();
            for j in pc + 1..m.cols {
                if !row[j].is_zero() && !x[j].is_zero() {
                    acc += Rational::from_integer(row[j].clone()) * &x[j];
                }
            }
            x[pc] = -acc / Rational::from_integer(row[pc].clone());
        }
        basis.push(x);
    }
    (rank, basis)
}

pub fn rank(m: &RatMatrix) -> usize {
    bareiss_echelon(m).1.len()
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = ((acc as u128 * b as u128) % p as u128) as u64;
        }
        b = ((b as u128 * b as u128) % p as u128) as u64;
        e >>= 1;
    }
    acc
}

pub fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for small in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(small) {
            return n == small;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = ((x as u128 * x as u128) % n as u128) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn next_prime(mut n: u64) -> u64 {
    while !is_prime(n) {
        n += 1;
    }
    n
}

pub fn reduce_mod_prime(q: &Rational, p: u64) -> Result<u64, ArithError> {
    let pb = BigInt::from(p);
    let num = q.numer().mod_floor(&pb).to_u64().unwrap_or(0);
    let den = q.denom().mod_floor(&pb).to_u64().unwrap_or(0);
    if den == 0 {
        return Err(ArithError::NotInvertible(q.denom().clone(), p));
    }
    Ok(((num as u128 * inv_mod(den, p) as u128) % p as u128) as u64)
}

/// Rank of `m` with entries reduced modulo the prime `p`.
pub fn rank_mod_prime(m: &RatMatrix, p: u64) -> Result<usize, ArithError> {
    let mut ech = ModpEchelon::new(p);
    for i in 0..m.rows {
        let mut row = Vec::new();
        for (j, q) in m.row(i).iter().enumerate() {
            let v = reduce_mod_prime(q, p)?;
            if v != 0 {
                row.push((j, v));
            }
        }
        ech.insert(row);
    }
    Ok(ech.rank())
}

/// Solutions of `A x ≡ b (mod m)`: `particular + span(generators)` mod `m`.
#[derive(Clone, Debug)]
pub struct CongruenceSolution {
    pub modulus: BigInt,
    pub particular: Vec<BigInt>,
    pub generators: Vec<Vec<BigInt>>,
}

impl CongruenceSolution {
    /// All solutions, by closure of the generator set. Intended for small
    /// moduli; stops with `None` once `cap` solutions have been produced.
    pub fn enumerate(&self, cap: usize) -> Option<Vec<Vec<BigInt>>> {
        let m = &self.modulus;
        let reduce =
            |v: Vec<BigInt>| -> Vec<BigInt> { v.into_iter().map(|x| x.mod_floor(m)).collect() };
        let zero = vec![BigInt::zero(); self.particular.len()];
        let mut seen = std::collections::HashSet::new();
        seen.insert(zero.clone());
        let mut frontier = vec![zero];
        while let Some(cur) = frontier.pop() {
            for g in &self.generators {
                let next = reduce(cur.iter().zip(g).map(|(a, b)| a + b).collect());
                if seen.insert(next.clone()) {
                    if seen.len() > cap {
                        return None;
                    }
                    frontier.push(next);
                }
            }
        }
        let mut out: Vec<Vec<BigInt>> = seen
            .into_iter()
            .map(|h| reduce(h.iter().zip(&self.particular).map(|(a, b)| a + b).collect()))
            .collect();
        out.sort();
        Some(out)
    }
}

pub fn solve_congruences(
    a: &IntMatrix,
    b: &[BigInt],
    m: &BigInt,
) -> Result<CongruenceSolution, ArithError> {
    if !m.is_positive() {
        return Err(ArithError::BadModulus);
    }
    if b.len() != a.rows {
        return Err(ArithError::Dimension(format!(
            "rhs length {} for {} rows",
            b.len(),
            a.rows
        )));
    }
    let snf = smith_normal_form(a);
    let ub = snf.u.mul_vec(b);
    let n = a.cols;
    let mut y0 = vec![BigInt::zero(); n];
    let mut ygens: Vec<Vec<BigInt>> = Vec::new();
    for (i, c) in ub.iter().enumerate() {
        let s = if i < n {
            snf.s[(i, i)].clone()
        } else {
            BigInt::zero()
        };
        let g = s.gcd(m);
        if !c.is_multiple_of(&g) {
            return Err(ArithError::NoSolution);
        }
        if i >= n {
            continue;
        }
        let step = m / &g;
        if !step.is_one() {
            let s_red = (&s / &g).mod_floor(&step);
            let inv = mod_inverse(&s_red, &step).ok_or(ArithError::NoSolution)?;
            y0[i] = ((c / &g) * inv).mod_floor(&step);
        }
        let mut gen = vec![BigInt::zero(); n];
        gen[i] = step;
        ygens.push(gen);
    }
    for i in ub.len()..n {
        let mut gen = vec![BigInt::zero(); n];
        gen[i] = BigInt::one();
        ygens.push(gen);
    }
    let particular: Vec<BigInt> = snf
        .v
        .mul_vec(&y0)
        .into_iter()
        .map(|x| x.mod_floor(m))
        .collect();
    let generators = ygens
        .iter()
        .map(|g| {
            snf.v
                .mul_vec(g)
                .into_iter()
                .map(|x| x.mod_floor(m))
                .collect::<Vec<_>>()
        })
        .filter(|g: &Vec<BigInt>| g.iter().any(|x| !x.is_zero()))
        .collect();
    Ok(CongruenceSolution {
        modulus: m.clone(),
        particular,
        generators,
    })
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// Sparse row: `(column, value)` pairs sorted by column, no zero values.
pub type SparseRow<T> = Vec<(usize, T)>;

/// Incremental exact row echelon form over sparse integer rows.
///
/// Rows are combined fraction-free and kept primitive (content 1, positive
/// leading entry). The pivot of a row is its smallest column index.
#[derive(Clone, Debug, Default)]
pub struct SparseEchelon {
    rows: Vec<SparseRow<BigInt>>,
    pivot_of: HashMap<usize, usize>,
}

impl SparseEchelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_of.contains_key(&col)
    }

    pub fn pivot_columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.pivot_of.keys().copied()
    }

    /// Adds a row; returns true when it was independent of the rows so far.
    pub fn insert(&mut self, mut row: SparseRow<BigInt>) -> bool {
        row.retain(|(_, v)| !v.is_zero());
        row.sort_by_key(|(c, _)| *c);
        while let Some(&(lead, _)) = row.first() {
            match self.pivot_of.get(&lead) {
                Some(&k) => {
                    row = combine_int(&row, &self.rows[k], lead);
                }
                None => {
                    make_primitive(&mut row);
                    self.pivot_of.insert(lead, self.rows.len());
                    self.rows.push(row);
                    return true;
                }
            }
        }
        false
    }

    /// Reduces a rational vector until no pivot column is left in its support.
    pub fn reduce(&self, v: SparseRow<Rational>) -> SparseRow<Rational> {
        let mut cur: std::collections::BTreeMap<usize, Rational> =
            v.into_iter().filter(|(_, x)| !x.is_zero()).collect();
        let mut from = 0usize;
        loop {
            let next = cur
                .range(from..)
                .map(|(c, _)| *c)
                .find(|c| self.pivot_of.contains_key(c));
            let Some(c) = next else { break };
            let prow = &self.rows[self.pivot_of[&c]];
            let factor = cur[&c].clone() / Rational::from_integer(prow[0].1.clone());
            for (j, pv) in prow {
                let delta = &factor * Rational::from_integer(pv.clone());
                let e = cur.entry(*j).or_insert_with(Rational::zero);
                *e -= delta;
                if e.is_zero() {
                    cur.remove(j);
                }
            }
            from = c + 1;
        }
        cur.into_iter().collect()
    }
}

fn combine_int(r: &SparseRow<BigInt>, q: &SparseRow<BigInt>, col: usize) -> SparseRow<BigInt> {
    let rc = r
        .iter()
        .find(|(c, _)| *c == col)
        .map(|(_, v)| v.clone())
        .unwrap_or_default();
    let q0 = q[0].1.clone();
    let g = rc.gcd(&q0);
    let (fr, fq) = (&q0 / &g, &rc / &g);
    let mut out = Vec::with_capacity(r.len() + q.len());
    let (mut i, mut j) = (0, 0);
    while i < r.len() || j < q.len() {
        let take_r = j >= q.len() || (i < r.len() && r[i].0 < q[j].0);
        let take_q = i >= r.len() || (j < q.len() && q[j].0 < r[i].0);
        if take_r {
            out.push((r[i].0, &r[i].1 * &fr));
            i += 1;
        } else if take_q {
            out.push((q[j].0, -(&q[j].1 * &fq)));
            j += 1;
        } else {
            let v = &r[i].1 * &fr - &q[j].1 * &fq;
            if !v.is_zero() {
                out.push((r[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    make_primitive(&mut out);
    out
}

fn make_primitive(row: &mut SparseRow<BigInt>) {
    let Some(first) = row.first() else { return };
    let mut g = BigInt::zero();
    for (_, v) in row.iter() {
        g = g.gcd(v);
        if g.is_one() {
            break;
        }
    }
    if first.1.is_negative() {
        g = -g;
    }
    if !g.is_one() {
        for (_, v) in row.iter_mut() {
            *v = &*v / &g;
        }
    }
}

/// Incremental row echelon form over GF(p).
#[derive(Clone, Debug)]
pub struct ModpEchelon {
    p: u64,
    rows: Vec<SparseRow<u64>>,
    pivot_of: HashMap<usize, usize>,
}

impl ModpEchelon {
    pub fn new(p: u64) -> Self {
        ModpEchelon {
            p,
            rows: Vec::new(),
            pivot_of: HashMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn insert(&mut self, mut row: SparseRow<u64>) -> bool {
        let p = self.p;
        row.retain(|(_, v)| *v % p != 0);
        row.sort_by_key(|(c, _)| *c);
        while let Some(&(lead, lv)) = row.first() {
            match self.pivot_of.get(&lead) {
                Some(&k) => {
                    let q = &self.rows[k];
                    let mut out = Vec::with_capacity(row.len() + q.len());
                    let (mut i, mut j) = (0, 0);
                    let f = p - lv;
                    while i < row.len() || j < q.len() {
                        if j >= q.len() || (i < row.len() && row[i].0 < q[j].0) {
                            out.push(row[i]);
                            i += 1;
                        } else if i >= row.len() || q[j].0 < row[i].0 {
                            out.push((q[j].0, ((f as u128 * q[j].1 as u128) % p as u128) as u64));
                            j += 1;
                        } else {
                            let v = ((row[i].1 as u128 + f as u128 * q[j].1 as u128) % p as u128)
                                as u64;
                            if v != 0 {
                                out.push((row[i].0, v));
                            }
                            i += 1;
                            j += 1;
                        }
                    }
                    row = out;
                }
                None => {
                    let inv = inv_mod(lv, p);
                    for (_, v) in row.iter_mut() {
                        *v = ((*v as u128 * inv as u128) % p as u128) as u64;
                    }
                    self.pivot_of.insert(lead, self.rows.len());
                    self.rows.push(row);
                    return true;
                }
            }
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn im(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    fn check_snf(a: &IntMatrix) -> SmithForm {
        let f = smith_normal_form(a);
        let uav = f.u.mul(a).unwrap().mul(&f.v).unwrap();
        assert_eq!(uav, f.s);
        assert!(f.s.is_diagonal());
        let d = f.invariant_factors();
        for w in d.windows(2) {
            if !w[0].is_zero() {
                assert!(w[1].is_multiple_of(&w[0]), "{:?}", d);
            } else {
                assert!(w[1].is_zero());
            }
        }
        assert!(d.iter().all(|x| !x.is_negative()));
        assert_eq!(f.u.determinant().unwrap().abs(), BigInt::one());
        assert_eq!(f.v.determinant().unwrap().abs(), BigInt::one());
        f
    }

    #[test]
    fn snf_identity() {
        let f = check_snf(&IntMatrix::identity(3));
        assert_eq!(f.s, IntMatrix::identity(3));
    }

    #[test]
    fn snf_two_by_two() {
        let f = check_snf(&im(&[vec![2, 4], vec![6, 8]]));
        assert_eq!(
            f.invariant_factors(),
            vec![BigInt::from(2), BigInt::from(4)]
        );
    }

    #[test]
    fn snf_zero() {
        let f = check_snf(&IntMatrix::zeros(2, 3));
        assert_eq!(f.s, IntMatrix::zeros(2, 3));
    }

    #[test]
    fn snf_rectangular() {
        check_snf(&im(&[
            vec![3, 0, 0, -3, 0, 0],
            vec![0, 3, 0, -3, 0, 0],
            vec![2, 7, -1, 4, 4, 0],
        ]));
        check_snf(&im(&[vec![0, 6], vec![4, 0], vec![10, 12]]));
    }

    #[test]
    fn congruence_single() {
        let s = solve_congruences(&im(&[vec![3]]), &[BigInt::zero()], &BigInt::from(9)).unwrap();
        let all = s.enumerate(100).unwrap();
        let flat: Vec<BigInt> = all.into_iter().map(|v| v[0].clone()).collect();
        assert_eq!(
            flat,
            vec![BigInt::from(0), BigInt::from(3), BigInt::from(6)]
        );
    }

    #[test]
    fn congruence_inconsistent() {
        let r = solve_congruences(&im(&[vec![2]]), &[BigInt::one()], &BigInt::from(4));
        assert_eq!(r.unwrap_err(), ArithError::NoSolution);
    }

    #[test]
    fn congruence_inhomogeneous() {
        // 2x + 4y ≡ 2 (mod 6)
        let a = im(&[vec![2, 4]]);
        let s = solve_congruences(&a, &[BigInt::from(2)], &BigInt::from(6)).unwrap();
        let got = s.enumerate(1000).unwrap();
        let mut want = Vec::new();
        for x in 0..6i64 {
            for y in 0..6i64 {
                if (2 * x + 4 * y - 2).rem_euclid(6) == 0 {
                    want.push(vec![BigInt::from(x), BigInt::from(y)]);
                }
            }
        }
        assert_eq!(got, want);
    }

    #[test]
    fn rank_identity_and_zero() {
        let (r, ns) = rank_nullspace(&RatMatrix::identity(4));
        assert_eq!(r, 4);
        assert!(ns.is_empty());
        let z = RatMatrix::zeros(1, 3);
        let (r, ns) = rank_nullspace(&z);
        assert_eq!(r, 0);
        assert_eq!(ns.len(), 3);
    }

    #[test]
    fn nullspace_vectors_are_kernel() {
        let rows = vec![
            vec![int(1), int(2), int(3), int(4)],
            vec![int(2), int(4), int(6), int(8)],
            vec![rat(1, 2), int(0), int(1), rat(-3, 7)],
        ];
        let m = RatMatrix::from_rows(rows, 4).unwrap();
        let (r, ns) = rank_nullspace(&m);
        assert_eq!(r, 2);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            for i in 0..m.rows() {
                let dot: Rational = m.row(i).iter().zip(v).map(|(a, b)| a * b).sum();
                assert!(dot.is_zero());
            }
        }
    }

    #[test]
    fn sparse_echelon_matches_dense() {
        let rows: Vec<Vec<i64>> = vec![
            vec![1, 2, 0, 3],
            vec![2, 4, 0, 6],
            vec![0, 1, 1, 0],
            vec![1, 3, 1, 3],
        ];
        let mut e = SparseEchelon::new();
        let mut ranks = Vec::new();
        for r in &rows {
            e.insert(
                r.iter()
                    .enumerate()
                    .filter(|(_, v)| **v != 0)
                    .map(|(c, v)| (c, BigInt::from(*v)))
                    .collect(),
            );
            ranks.push(e.rank());
        }
        assert_eq!(ranks, vec![1, 1, 2, 2]);
        let reduced = e.reduce(vec![(0, int(1)), (1, int(2)), (3, int(3))]);
        assert!(reduced.is_empty());
    }

    #[test]
    fn primes() {
        assert!(is_prime(10007));
        assert!(!is_prime(10001));
        assert_eq!(next_prime(10000), 10007);
    }
}
