//! Exact linear algebra over Z/n.
//!
//! Row vectors throughout: a matrix `A` acts as `x ↦ xA`. Subgroups of
//! `(Z/n)^d` are stored as Howell bases, which are unique, so equality of
//! subgroups is equality of bases.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{dim_err, Error, Result};

/// Largest modulus accepted unless a caller raises the guard.
pub const DEFAULT_MODULUS_BOUND: u64 = 1 << 16;
/// Hard ceiling: products of two residues must fit in a `u64`.
pub const MAX_MODULUS: u64 = 1 << 31;

/// Checks `2 <= n <= bound` (and the hard ceiling).
pub fn check_modulus(n: u64, bound: u64) -> Result<u32> {
    let bound = bound.min(MAX_MODULUS);
    if n < 2 || n > bound {
        return Err(Error::Modulus { modulus: n, bound });
    }
    Ok(n as u32)
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

/// Returns `(g, s, t)` with `s*a + t*b = g = gcd(a, b)`.
fn xgcd(a: i64, b: i64) -> (i64, i64, i64) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i64, 0i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

#[inline]
pub(crate) fn reduce_i64(x: i64, n: u32) -> u32 {
    x.rem_euclid(n as i64) as u32
}

/// A unit `u` of Z/n with `u * a ≡ gcd(a, n) (mod n)`.
fn normalizing_unit(a: u32, n: u32) -> u32 {
    let g = gcd(a as u64, n as u64) as u32;
    let (a1, n1) = (a / g, n / g);
    let u0 = if n1 == 1 {
        0
    } else {
        let (_, s, _) = xgcd(a1 as i64, n1 as i64);
        reduce_i64(s, n1)
    };
    let mut u = u0;
    for _ in 0..=g {
        if gcd(u as u64, n as u64) == 1 {
            return u;
        }
        u += n1;
    }
    unreachable!("a unit lift always exists")
}

/// `row_a <- row_a - q * row_b` over Z/n.
#[inline]
fn sub_multiple(row_a: &mut [u32], row_b: &[u32], q: u32, n: u32) {
    if q == 0 {
        return;
    }
    let n64 = n as u64;
    let qn = (n - q % n) as u64;
    for (x, &y) in row_a.iter_mut().zip(row_b) {
        *x = ((*x as u64 + qn * y as u64) % n64) as u32;
    }
}

#[inline]
fn scaled(row: &[u32], k: u32, n: u32) -> Vec<u32> {
    row.iter().map(|&x| ((x as u64 * k as u64) % n as u64) as u32).collect()
}

/// Howell form of a list of rows of width `cols`. Returns the nonzero
/// canonical rows together with their pivot columns.
fn howell_rows(mut rows: Vec<Vec<u32>>, cols: usize, n: u32) -> (Vec<Vec<u32>>, Vec<usize>) {
    rows.retain(|r| r.iter().any(|&x| x != 0));
    let n64 = n as u64;
    let mut r = 0usize;
    let mut pivots = Vec::new();
    for j in 0..cols {
        if r >= rows.len() {
            break;
        }
        // gather the gcd of column j (rows r..) into row r
        for i in (r + 1)..rows.len() {
            let b = rows[i][j];
            if b == 0 {
                continue;
            }
            let a = rows[r][j];
            let (g, s, t) = xgcd(a as i64, b as i64);
            let s = reduce_i64(s, n) as u64;
            let t = reduce_i64(t, n) as u64;
            let bg = ((b as i64 / g) as u64) % n64;
            let ag = ((a as i64 / g) as u64) % n64;
            let (top, bottom) = {
                let (lo, hi) = rows.split_at_mut(i);
                (&mut lo[r], &mut hi[0])
            };
            for k in j..cols {
                let x = top[k] as u64;
                let y = bottom[k] as u64;
                let new_top = (s * x + t * y) % n64;
                let new_bottom = (bg * x + (n64 - ag) * y) % n64;
                top[k] = new_top as u32;
                bottom[k] = new_bottom as u32;
            }
        }
        let a = rows[r][j];
        if a == 0 {
            // column empty below the current pivot row; look for a row with
            // a nonzero entry (only possible if row r was zero there)
            if let Some(i) = ((r + 1)..rows.len()).find(|&i| rows[i][j] != 0) {
                rows.swap(r, i);
            } else {
                continue;
            }
        }
        let a = rows[r][j];
        let u = normalizing_unit(a, n);
        if u != 1 {
            rows[r] = scaled(&rows[r], u, n);
        }
        let g = rows[r][j];
        // reduce the entries above the pivot
        let pivot_row = rows[r].clone();
        for row in rows.iter_mut().take(r) {
            let q = row[j] / g;
            sub_multiple(row, &pivot_row, q, n);
        }
        // annihilator closure
        let ann = scaled(&pivot_row, n / g, n);
        if ann.iter().any(|&x| x != 0) {
            rows.push(ann);
        }
        pivots.push(j);
        r += 1;
    }
    rows.truncate(r);
    (rows, pivots)
}

/// Dense matrix over Z/n with reduced entries.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ZnMatrix {
    modulus: u32,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl ZnMatrix {
    /// Builds a matrix from signed entries, reducing them mod `modulus`.
    pub fn new(modulus: u32, rows: usize, cols: usize, entries: &[i64]) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::Modulus { modulus: modulus as u64, bound: MAX_MODULUS });
        }
        if entries.len() != rows * cols {
            return dim_err(alloc::format!("{} entries for a {}x{} matrix", entries.len(), rows, cols));
        }
        let data = entries.iter().map(|&x| reduce_i64(x, modulus)).collect();
        Ok(Self { modulus, rows, cols, data })
    }

    pub fn zeros(modulus: u32, rows: usize, cols: usize) -> Self {
        Self { modulus, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(modulus: u32, size: usize) -> Self {
        let mut m = Self::zeros(modulus, size, size);
        for i in 0..size {
            m.data[i * size + i] = 1 % modulus;
        }
        m
    }

    /// Builds a matrix from rows of residues (already reduced or not).
    pub fn from_rows(modulus: u32, cols: usize, rows: &[Vec<u32>]) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            if r.len() != cols {
                return dim_err(alloc::format!("row of length {} in width {}", r.len(), cols));
            }
            data.extend(r.iter().map(|&x| x % modulus));
        }
        Ok(Self { modulus, rows: rows.len(), cols, data })
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }
    pub fn set(&mut self, i: usize, j: usize, value: i64) {
        self.data[i * self.cols + j] = reduce_i64(value, self.modulus);
    }
    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }
    pub fn row_vecs(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }
    pub fn data(&self) -> &[u32] {
        &self.data
    }
    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn mul(&self, other: &ZnMatrix) -> Result<ZnMatrix> {
        if self.cols != other.rows || self.modulus != other.modulus {
            return dim_err(alloc::format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows,
                self.cols,
                other.rows,
                other.cols
            ));
        }
        let n = self.modulus as u64;
        let mut out = ZnMatrix::zeros(self.modulus, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k) as u64;
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = ((out.data[idx] as u64 + a * other.get(k, j) as u64) % n) as u32;
                }
            }
        }
        Ok(out)
    }

    fn zip_with(&self, other: &ZnMatrix, f: impl Fn(u64, u64, u64) -> u64) -> Result<ZnMatrix> {
        if self.rows != other.rows || self.cols != other.cols || self.modulus != other.modulus {
            return dim_err("shape mismatch in elementwise operation");
        }
        let n = self.modulus as u64;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| (f(a as u64, b as u64, n) % n) as u32).collect();
        Ok(ZnMatrix { modulus: self.modulus, rows: self.rows, cols: self.cols, data })
    }

    pub fn add(&self, other: &ZnMatrix) -> Result<ZnMatrix> {
        self.zip_with(other, |a, b, _| a + b)
    }

    pub fn sub(&self, other: &ZnMatrix) -> Result<ZnMatrix> {
        self.zip_with(other, |a, b, n| a + n - b)
    }

    pub fn scale(&self, k: i64) -> ZnMatrix {
        let k = reduce_i64(k, self.modulus) as u64;
        let n = self.modulus as u64;
        let data = self.data.iter().map(|&a| ((a as u64 * k) % n) as u32).collect();
        ZnMatrix { modulus: self.modulus, rows: self.rows, cols: self.cols, data }
    }

    pub fn transpose(&self) -> ZnMatrix {
        let mut out = ZnMatrix::zeros(self.modulus, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.get(i, j);
            }
        }
        out
    }

    /// Row vector times matrix.
    pub fn apply(&self, x: &[u32]) -> Vec<u32> {
        let n = self.modulus as u64;
        let mut out = vec![0u64; self.cols];
        for (i, &xi) in x.iter().enumerate().take(self.rows) {
            if xi == 0 {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                *o = (*o + xi as u64 * self.get(i, j) as u64) % n;
            }
        }
        out.into_iter().map(|v| v as u32).collect()
    }

    /// Flattened row-major entries, used as coordinates of a morphism.
    pub fn to_vec(&self) -> Vec<u32> {
        self.data.clone()
    }

    pub fn from_flat(modulus: u32, rows: usize, cols: usize, flat: &[u32]) -> ZnMatrix {
        debug_assert_eq!(flat.len(), rows * cols);
        ZnMatrix { modulus, rows, cols, data: flat.iter().map(|&x| x % modulus).collect() }
    }

    /// Block-diagonal sum.
    pub fn block_diag(modulus: u32, blocks: &[&ZnMatrix]) -> ZnMatrix {
        let rows: usize = blocks.iter().map(|b| b.rows).sum();
        let cols: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = ZnMatrix::zeros(modulus, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.data[(r0 + i) * cols + c0 + j] = b.get(i, j);
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }
}

/// Howell canonical form of the row span of `a`.
pub fn howell_form(a: &ZnMatrix) -> ZnMatrix {
    let (rows, _) = howell_rows(a.row_vecs(), a.cols, a.modulus);
    ZnMatrix::from_rows(a.modulus, a.cols, &rows).expect("widths agree")
}

/// Generators of `{x : xA = 0}`.
pub fn left_kernel(a: &ZnMatrix) -> Vec<Vec<u32>> {
    left_kernel_rows(&a.row_vecs(), a.cols, a.modulus)
}

/// Kernel of `x ↦ Σ x_i rows_i` for rows of width `cols`.
pub(crate) fn left_kernel_rows(rows: &[Vec<u32>], cols: usize, n: u32) -> Vec<Vec<u32>> {
    let k = rows.len();
    if k == 0 {
        return Vec::new();
    }
    let aug: Vec<Vec<u32>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut v = Vec::with_capacity(cols + k);
            v.extend_from_slice(r);
            v.extend((0..k).map(|j| u32::from(i == j) % n));
            v
        })
        .collect();
    let (h, piv) = howell_rows(aug, cols + k, n);
    h.into_iter().zip(piv).filter(|(_, p)| *p >= cols).map(|(r, _)| r[cols..].to_vec()).collect()
}

/// A solution of `xA = b`: one particular solution and kernel generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Solution {
    pub particular: Vec<u32>,
    pub kernel: Vec<Vec<u32>>,
}

/// Solves `xA = b` over Z/n.
pub fn solve_linear(a: &ZnMatrix, b: &[u32]) -> Result<Option<Solution>> {
    if b.len() != a.cols {
        return dim_err(alloc::format!("right-hand side of length {} for {} columns", b.len(), a.cols));
    }
    Ok(solve_rows(&a.row_vecs(), a.cols, a.modulus, b))
}

pub(crate) fn solve_rows(rows: &[Vec<u32>], cols: usize, n: u32, b: &[u32]) -> Option<Solution> {
    let k = rows.len();
    let aug: Vec<Vec<u32>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut v = Vec::with_capacity(cols + k);
            v.extend_from_slice(r);
            v.extend((0..k).map(|j| u32::from(i == j) % n));
            v
        })
        .collect();
    let (h, piv) = howell_rows(aug, cols + k, n);
    let mut v: Vec<u32> = b.iter().map(|&x| x % n).chain(core::iter::repeat_n(0, k)).collect();
    for (row, &p) in h.iter().zip(&piv) {
        if p >= cols {
            break;
        }
        let g = row[p];
        if !v[p].is_multiple_of(g) {
            return None;
        }
        let q = v[p] / g;
        sub_multiple(&mut v, row, q, n);
    }
    if v[..cols].iter().any(|&x| x != 0) {
        return None;
    }
    let particular = v[cols..].iter().map(|&x| (n - x) % n).collect();
    let kernel = h.into_iter().zip(piv).filter(|(_, p)| *p >= cols).map(|(r, _)| r[cols..].to_vec()).collect();
    Some(Solution { particular, kernel })
}

/// Coefficients `c` with `Σ c_i cands_i - target ∈ modulo`, if any.
pub fn solve_in_span(cands: &[Vec<u32>], modulo: &CanonicalSubgroup, target: &[u32]) -> Option<Vec<u32>> {
    let k = cands.len();
    let mut rows: Vec<Vec<u32>> = cands.to_vec();
    rows.extend(modulo.basis.iter().cloned());
    let sol = solve_rows(&rows, modulo.dim, modulo.modulus, target)?;
    Some(sol.particular[..k].to_vec())
}

/// Generators of `{c : Σ c_i images_i ∈ target}`.
pub fn coefficient_preimage(images: &[Vec<u32>], target: &CanonicalSubgroup) -> Vec<Vec<u32>> {
    let k = images.len();
    let mut rows: Vec<Vec<u32>> = images.to_vec();
    rows.extend(target.basis.iter().cloned());
    left_kernel_rows(&rows, target.dim, target.modulus)
        .into_iter()
        .map(|r| r[..k].to_vec())
        .filter(|r| r.iter().any(|&x| x != 0))
        .collect()
}

/// `Σ c_i vectors_i`.
pub fn combine(coeffs: &[u32], vectors: &[Vec<u32>], dim: usize, n: u32) -> Vec<u32> {
    let mut out = vec![0u64; dim];
    let n64 = n as u64;
    for (&c, v) in coeffs.iter().zip(vectors) {
        if c == 0 {
            continue;
        }
        for (o, &x) in out.iter_mut().zip(v) {
            *o = (*o + c as u64 * x as u64) % n64;
        }
    }
    out.into_iter().map(|x| x as u32).collect()
}

pub fn vec_add(a: &[u32], b: &[u32], n: u32) -> Vec<u32> {
    a.iter().zip(b).map(|(&x, &y)| ((x as u64 + y as u64) % n as u64) as u32).collect()
}

pub fn vec_sub(a: &[u32], b: &[u32], n: u32) -> Vec<u32> {
    a.iter().zip(b).map(|(&x, &y)| ((x as u64 + n as u64 - y as u64) % n as u64) as u32).collect()
}

pub fn vec_scale(a: &[u32], k: u32, n: u32) -> Vec<u32> {
    scaled(a, k, n)
}

/// Cardinality of a finite abelian group, kept as prime exponents so that
/// huge ambient groups do not overflow.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct GroupOrder {
    exps: Vec<(u32, i64)>,
}

fn factor(mut m: u32) -> Vec<(u32, i64)> {
    let mut out = Vec::new();
    let mut p = 2u32;
    while (p as u64) * (p as u64) <= m as u64 {
        if m.is_multiple_of(p) {
            let mut e = 0;
            while m.is_multiple_of(p) {
                m /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if m > 1 {
        out.push((m, 1));
    }
    out
}

impl GroupOrder {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn of(m: u32) -> Self {
        Self { exps: factor(m) }
    }

    pub fn mul(&self, other: &GroupOrder) -> GroupOrder {
        self.combine(other, 1)
    }

    /// Exact quotient; panics in debug builds on a non-divisor.
    pub fn div(&self, other: &GroupOrder) -> GroupOrder {
        let q = self.combine(other, -1);
        debug_assert!(q.exps.iter().all(|&(_, e)| e >= 0));
        q
    }

    fn combine(&self, other: &GroupOrder, sign: i64) -> GroupOrder {
        let mut exps = self.exps.clone();
        for &(p, e) in &other.exps {
            match exps.iter_mut().find(|(q, _)| *q == p) {
                Some(slot) => slot.1 += sign * e,
                None => exps.push((p, sign * e)),
            }
        }
        exps.retain(|&(_, e)| e != 0);
        exps.sort_unstable();
        GroupOrder { exps }
    }

    /// The order as an integer, if it fits.
    pub fn value(&self) -> Option<u128> {
        let mut acc: u128 = 1;
        for &(p, e) in &self.exps {
            if e < 0 {
                return None;
            }
            for _ in 0..e {
                acc = acc.checked_mul(p as u128)?;
            }
        }
        Some(acc)
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }
}

/// A subgroup of `(Z/n)^d` in Howell canonical form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalSubgroup {
    modulus: u32,
    dim: usize,
    basis: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

/// Lattice operation selector for [`CanonicalSubgroup::op`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubgroupOp {
    Sum,
    Intersect,
    Contains,
}

/// Result of [`CanonicalSubgroup::op`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubgroupResult {
    Group(CanonicalSubgroup),
    Bool(bool),
}

impl CanonicalSubgroup {
    pub fn zero(modulus: u32, dim: usize) -> Self {
        Self { modulus, dim, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn full(modulus: u32, dim: usize) -> Self {
        let gens: Vec<Vec<u32>> = (0..dim).map(|i| (0..dim).map(|j| u32::from(i == j)).collect()).collect();
        Self::from_generators(modulus, dim, &gens)
    }

    /// Subgroup generated by the given vectors (entries are reduced).
    pub fn from_generators(modulus: u32, dim: usize, gens: &[Vec<u32>]) -> Self {
        let rows: Vec<Vec<u32>> = gens
            .iter()
            .map(|g| {
                debug_assert_eq!(g.len(), dim);
                g.iter().map(|&x| x % modulus).collect()
            })
            .collect();
        let (basis, pivots) = howell_rows(rows, dim, modulus);
        Self { modulus, dim, basis, pivots }
    }

    pub fn from_matrix(a: &ZnMatrix) -> Self {
        Self::from_generators(a.modulus, a.cols, &a.row_vecs())
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn basis(&self) -> &[Vec<u32>] {
        &self.basis
    }
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }
    pub fn basis_matrix(&self) -> ZnMatrix {
        ZnMatrix::from_rows(self.modulus, self.dim, &self.basis).expect("widths agree")
    }
    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    /// Canonical representative of the coset `v + G`.
    pub fn reduce(&self, v: &[u32]) -> Vec<u32> {
        let mut v: Vec<u32> = v.iter().map(|&x| x % self.modulus).collect();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            let g = row[p];
            let q = v[p] / g;
            sub_multiple(&mut v, row, q, self.modulus);
        }
        v
    }

    pub fn contains_vec(&self, v: &[u32]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim || self.modulus != other.modulus {
            return dim_err(alloc::format!(
                "subgroups of (Z/{})^{} and (Z/{})^{}",
                self.modulus,
                self.dim,
                other.modulus,
                other.dim
            ));
        }
        Ok(())
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.sum_unchecked(other))
    }

    pub(crate) fn sum_unchecked(&self, other: &Self) -> Self {
        let mut gens = self.basis.clone();
        gens.extend(other.basis.iter().cloned());
        Self::from_generators(self.modulus, self.dim, &gens)
    }

    /// Adds extra generators.
    pub fn extend(&self, gens: &[Vec<u32>]) -> Self {
        let mut all = self.basis.clone();
        all.extend(gens.iter().cloned());
        Self::from_generators(self.modulus, self.dim, &all)
    }

    pub fn intersect(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.intersect_unchecked(other))
    }

    pub(crate) fn intersect_unchecked(&self, other: &Self) -> Self {
        let d = self.dim;
        let n = self.modulus;
        let mut rows = Vec::new();
        for a in &self.basis {
            let mut r = a.clone();
            r.extend_from_slice(a);
            rows.push(r);
        }
        for b in &other.basis {
            let mut r = b.clone();
            r.extend(core::iter::repeat_n(0, d));
            rows.push(r);
        }
        let (h, piv) = howell_rows(rows, 2 * d, n);
        let gens: Vec<Vec<u32>> =
            h.into_iter().zip(piv).filter(|(_, p)| *p >= d).map(|(r, _)| r[d..].to_vec()).collect();
        Self::from_generators(n, d, &gens)
    }

    /// `other ⊆ self`.
    pub fn contains(&self, other: &Self) -> Result<bool> {
        self.check_same(other)?;
        Ok(self.contains_unchecked(other))
    }

    pub(crate) fn contains_unchecked(&self, other: &Self) -> bool {
        other.basis.iter().all(|v| self.contains_vec(v))
    }

    /// Dispatches a lattice operation by name.
    pub fn op(&self, other: &Self, op: SubgroupOp) -> Result<SubgroupResult> {
        Ok(match op {
            SubgroupOp::Sum => SubgroupResult::Group(self.sum(other)?),
            SubgroupOp::Intersect => SubgroupResult::Group(self.intersect(other)?),
            SubgroupOp::Contains => SubgroupResult::Bool(self.contains(other)?),
        })
    }

    /// Additive order of each basis row inside the subgroup decomposition:
    /// every element is uniquely `Σ c_i b_i` with `0 <= c_i < n / pivot_i`.
    pub fn coefficient_ranges(&self) -> Vec<u32> {
        self.basis.iter().zip(&self.pivots).map(|(row, &p)| self.modulus / row[p]).collect()
    }

    pub fn order(&self) -> GroupOrder {
        self.coefficient_ranges().into_iter().fold(GroupOrder::one(), |acc, k| acc.mul(&GroupOrder::of(k)))
    }

    /// All elements, or `None` if there are more than `budget`.
    pub fn elements(&self, budget: u128) -> Option<Vec<Vec<u32>>> {
        let total = self.order().value()?;
        if total > budget {
            return None;
        }
        let ranges = self.coefficient_ranges();
        let mut out = Vec::with_capacity(total as usize);
        let mut coeffs = vec![0u32; ranges.len()];
        loop {
            out.push(combine(&coeffs, &self.basis, self.dim, self.modulus));
            let mut i = 0;
            loop {
                if i == coeffs.len() {
                    return Some(out);
                }
                coeffs[i] += 1;
                if coeffs[i] < ranges[i] {
                    break;
                }
                coeffs[i] = 0;
                i += 1;
            }
        }
    }

    /// Canonical representatives of `(Z/n)^d / self`, or `None` past `budget`.
    pub fn coset_representatives(&self, budget: u128) -> Option<Vec<Vec<u32>>> {
        let mut ranges = vec![self.modulus; self.dim];
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            ranges[p] = row[p];
        }
        let mut total: u128 = 1;
        for &r in &ranges {
            total = total.checked_mul(r as u128)?;
            if total > budget {
                return None;
            }
        }
        let mut out = Vec::with_capacity(total as usize);
        let mut v = vec![0u32; self.dim];
        loop {
            out.push(v.clone());
            let mut i = 0;
            loop {
                if i == v.len() {
                    return Some(out);
                }
                v[i] += 1;
                if v[i] < ranges[i] {
                    break;
                }
                v[i] = 0;
                i += 1;
            }
        }
    }

    /// `|(Z/n)^d / self|`.
    pub fn index(&self) -> GroupOrder {
        let mut full = GroupOrder::one();
        for _ in 0..self.dim {
            full = full.mul(&GroupOrder::of(self.modulus));
        }
        full.div(&self.order())
    }

    /// Image of the subgroup under a linear map given by a matrix.
    pub fn image(&self, map: &ZnMatrix) -> Self {
        let gens: Vec<Vec<u32>> = self.basis.iter().map(|v| map.apply(v)).collect();
        Self::from_generators(self.modulus, map.cols(), &gens)
    }

    /// Orthogonal complement under the standard pairing.
    pub fn perp(&self) -> Self {
        // {w : b·w = 0 for all basis rows b} = left kernel of the transpose
        let bt = self.basis_matrix().transpose();
        let gens = left_kernel(&bt);
        Self::from_generators(self.modulus, self.dim, &gens)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::collections::BTreeSet;
    use proptest::prelude::*;

    fn span_brute(rows: &[Vec<u32>], n: u32, d: usize) -> BTreeSet<Vec<u32>> {
        let mut set = BTreeSet::new();
        set.insert(vec![0u32; d]);
        loop {
            let mut added = Vec::new();
            for v in &set {
                for r in rows {
                    let w = vec_add(v, r, n);
                    if !set.contains(&w) {
                        added.push(w);
                    }
                }
            }
            if added.is_empty() {
                return set;
            }
            set.extend(added);
        }
    }

    fn m(n: u32, rows: usize, cols: usize, e: &[i64]) -> ZnMatrix {
        ZnMatrix::new(n, rows, cols, e).unwrap()
    }

    #[test]
    fn howell_identity_is_fixed() {
        let id = ZnMatrix::identity(4, 2);
        assert_eq!(howell_form(&id), id);
    }

    #[test]
    fn howell_diagonal_two_is_fixed() {
        let a = m(4, 2, 2, &[2, 0, 0, 2]);
        assert_eq!(howell_form(&a), a);
    }

    #[test]
    fn howell_collapses_dependent_rows() {
        let a = m(4, 2, 2, &[1, 2, 2, 0]);
        assert_eq!(howell_form(&a), m(4, 1, 2, &[1, 2]));
    }

    #[test]
    fn howell_adds_annihilator_rows() {
        // span of (2,1) mod 4 contains (0,2); Howell form must show it
        let a = m(4, 1, 2, &[2, 1]);
        let h = howell_form(&a);
        assert_eq!(h, m(4, 2, 2, &[2, 1, 0, 2]));
    }

    #[test]
    fn solve_scalar_cases() {
        let a = m(4, 1, 1, &[2]);
        let sol = solve_linear(&a, &[2]).unwrap().unwrap();
        assert_eq!(sol.particular, vec![1]);
        let ker = CanonicalSubgroup::from_generators(4, 1, &sol.kernel);
        assert_eq!(ker, CanonicalSubgroup::from_generators(4, 1, &[vec![2]]));
        assert!(solve_linear(&a, &[1]).unwrap().is_none());
    }

    #[test]
    fn solve_two_by_two() {
        let a = m(4, 2, 2, &[1, 2, 2, 0]);
        let sol = solve_linear(&a, &[3, 2]).unwrap().unwrap();
        assert_eq!(a.apply(&sol.particular), vec![3, 2]);
        // brute force: solutions x with xA = (3,2)
        let mut brute = Vec::new();
        let mut kernel_brute = BTreeSet::new();
        for x0 in 0..4u32 {
            for x1 in 0..4u32 {
                let y = a.apply(&[x0, x1]);
                if y == [3, 2] {
                    brute.push(vec![x0, x1]);
                }
                if y == [0, 0] {
                    kernel_brute.insert(vec![x0, x1]);
                }
            }
        }
        assert_eq!(brute.len(), 4);
        assert_eq!(span_brute(&sol.kernel, 4, 2), kernel_brute);
    }

    #[test]
    fn solve_rejects_bad_dimensions() {
        let a = m(4, 1, 2, &[1, 0]);
        assert!(matches!(solve_linear(&a, &[1]), Err(Error::Dimension(_))));
    }

    #[test]
    fn subgroup_sum_intersect_contains() {
        let g1 = CanonicalSubgroup::from_generators(4, 2, &[vec![2, 0]]);
        let g2 = CanonicalSubgroup::from_generators(4, 2, &[vec![0, 2]]);
        let s = g1.sum(&g2).unwrap();
        assert_eq!(s.basis(), &[vec![2, 0], vec![0, 2]]);
        assert_eq!(s.order().value(), Some(4));

        let a = CanonicalSubgroup::from_generators(4, 2, &[vec![1, 1]]);
        let b = CanonicalSubgroup::from_generators(4, 2, &[vec![1, 3]]);
        let i = a.intersect(&b).unwrap();
        assert_eq!(i, CanonicalSubgroup::from_generators(4, 2, &[vec![2, 2]]));

        let two = CanonicalSubgroup::from_generators(4, 1, &[vec![2]]);
        let zero = CanonicalSubgroup::zero(4, 1);
        assert!(two.contains(&zero).unwrap());
        assert!(matches!(two.op(&zero, SubgroupOp::Contains).unwrap(), SubgroupResult::Bool(true)));
        assert!(two.sum(&g1).is_err());
    }

    #[test]
    fn group_orders() {
        assert_eq!(CanonicalSubgroup::from_generators(4, 1, &[vec![2]]).order().value(), Some(2));
        assert_eq!(CanonicalSubgroup::zero(4, 2).order().value(), Some(1));
        assert_eq!(CanonicalSubgroup::from_generators(4, 2, &[vec![1, 2]]).order().value(), Some(4));
    }

    #[test]
    fn modulus_guard() {
        assert!(check_modulus(4, DEFAULT_MODULUS_BOUND).is_ok());
        assert!(check_modulus(1, DEFAULT_MODULUS_BOUND).is_err());
        assert!(check_modulus((1 << 16) + 1, DEFAULT_MODULUS_BOUND).is_err());
    }

    #[test]
    fn perp_is_double_annihilator() {
        let g = CanonicalSubgroup::from_generators(4, 2, &[vec![2, 1]]);
        assert_eq!(g.perp().perp(), g);
    }

    fn small_case() -> impl Strategy<Value = (u32, usize, Vec<Vec<u32>>)> {
        (prop::sample::select(vec![2u32, 3, 4, 8, 9]), 1usize..=3, 0usize..=4)
            .prop_flat_map(|(n, d, k)| (Just(n), Just(d), prop::collection::vec(prop::collection::vec(0..n, d), k)))
    }

    proptest! {
        #[test]
        fn howell_preserves_span_and_is_idempotent((n, d, rows) in small_case()) {
            let g = CanonicalSubgroup::from_generators(n, d, &rows);
            prop_assert_eq!(span_brute(g.basis(), n, d), span_brute(&rows, n, d));
            let again = CanonicalSubgroup::from_generators(n, d, g.basis());
            prop_assert_eq!(&again, &g);
            prop_assert_eq!(g.order().value().unwrap() as usize, span_brute(&rows, n, d).len());
            for b in g.basis() {
                prop_assert!(g.contains_vec(b));
            }
        }

        #[test]
        fn equality_matches_span_equality(
            (n, d, rows) in small_case(),
            other in prop::collection::vec(prop::collection::vec(0u32..9, 3), 0..4)
        ) {
            let other: Vec<Vec<u32>> = other.into_iter().map(|r| r[..d].iter().map(|x| x % n).collect()).collect();
            let a = CanonicalSubgroup::from_generators(n, d, &rows);
            let b = CanonicalSubgroup::from_generators(n, d, &other);
            prop_assert_eq!(a == b, span_brute(&rows, n, d) == span_brute(&other, n, d));
        }

        #[test]
        fn lattice_laws(
            (n, d, rows) in small_case(),
            other in prop::collection::vec(prop::collection::vec(0u32..9, 3), 0..4)
        ) {
            let other: Vec<Vec<u32>> = other.into_iter().map(|r| r[..d].iter().map(|x| x % n).collect()).collect();
            let a = CanonicalSubgroup::from_generators(n, d, &rows);
            let b = CanonicalSubgroup::from_generators(n, d, &other);
            prop_assert_eq!(a.sum(&b).unwrap(), b.sum(&a).unwrap());
            prop_assert_eq!(a.intersect(&b).unwrap(), b.intersect(&a).unwrap());
            prop_assert_eq!(a.sum(&a.intersect(&b).unwrap()).unwrap(), a.clone());
            prop_assert_eq!(a.intersect(&a.sum(&b).unwrap()).unwrap(), a.clone());
            let sa = span_brute(&rows, n, d);
            let sb = span_brute(&other, n, d);
            let inter: BTreeSet<_> = sa.intersection(&sb).cloned().collect();
            prop_assert_eq!(span_brute(a.intersect(&b).unwrap().basis(), n, d), inter);
        }

        #[test]
        fn solve_verifies_by_substitution(
            (n, d, rows) in small_case(),
            target in prop::collection::vec(0u32..9, 3)
        ) {
            let k = rows.len();
            let a = ZnMatrix::from_rows(n, d, &rows).unwrap();
            let b: Vec<u32> = target[..d].iter().map(|x| x % n).collect();
            let reachable = span_brute(&rows, n, d).contains(&b);
            match solve_linear(&a, &b).unwrap() {
                Some(sol) => {
                    prop_assert!(reachable);
                    prop_assert_eq!(a.apply(&sol.particular), b);
                    for z in &sol.kernel {
                        prop_assert!(a.apply(z).iter().all(|&x| x == 0));
                    }
                    if k > 0 {
                        let ker: BTreeSet<Vec<u32>> = span_brute(&sol.kernel, n, k);
                        let full = CanonicalSubgroup::full(n, k).elements(1 << 20).unwrap();
                        let brute: BTreeSet<Vec<u32>> = full.into_iter()
                            .filter(|x| a.apply(x).iter().all(|&v| v == 0)).collect();
                        prop_assert_eq!(ker, brute);
                    }
                }
                None => prop_assert!(!reachable),
            }
        }

        #[test]
        fn coset_representatives_are_canonical_and_complete((n, d, rows) in small_case()) {
            let g = CanonicalSubgroup::from_generators(n, d, &rows);
            let reps = g.coset_representatives(1 << 20).unwrap();
            prop_assert_eq!(reps.len() as u128, g.index().value().unwrap());
            for r in &reps {
                prop_assert_eq!(&g.reduce(r), r);
            }
        }

        #[test]
        fn reduce_gives_coset_representatives(
            (n, d, rows) in small_case(),
            v in prop::collection::vec(0u32..9, 3),
            w in prop::collection::vec(0u32..9, 3)
        ) {
            let g = CanonicalSubgroup::from_generators(n, d, &rows);
            let v: Vec<u32> = v[..d].iter().map(|x| x % n).collect();
            let w: Vec<u32> = w[..d].iter().map(|x| x % n).collect();
            let same = g.contains_vec(&vec_sub(&v, &w, n));
            prop_assert_eq!(same, g.reduce(&v) == g.reduce(&w));
        }
    }
}
