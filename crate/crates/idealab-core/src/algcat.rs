//! Finite Z/n-algebras and their finitely presented left modules.
//!
//! A module is a quotient of the free group `(Z/n)^d` by a relation
//! subgroup, with one action matrix per algebra basis element. Elements are
//! row vectors and `e_a` acts by `v ↦ v·A_a`, so `A_b·A_a` must agree with
//! the action of `e_a e_b`. A morphism `M → N` is a `d_M × d_N` matrix whose
//! row `i` is the image of generator `i`; the composite `g ∘ f` is `F·G`.
//!
//! Hom groups live in the flattened matrix space `(Z/n)^{d_M d_N}` as a
//! subgroup `S` that contains `Z = rel(N)^{d_M}`, so `Hom(M, N) = S / Z`.
//! Subgroups of Hom between `Z` and `S` ("lifted" subgroups) are how the
//! rest of the crate stores ideal components and subobjects.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{dim_err, invalid, Error, Result};
use crate::znlin::{
    coefficient_preimage, combine, left_kernel_rows, solve_in_span, vec_sub, CanonicalSubgroup, GroupOrder, ZnMatrix,
};

fn unit_vec(len: usize, i: usize) -> Vec<u32> {
    let mut v = vec![0; len];
    v[i] = 1;
    v
}

/// A finite associative unital algebra, free of rank `m` over Z/n.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteAlgebra {
    modulus: u32,
    rank: usize,
    /// `mult[(a*m + b)*m + k]` is the `e_k` coefficient of `e_a e_b`.
    mult: Vec<u32>,
    unit: Vec<u32>,
    radical: Option<CanonicalSubgroup>,
}

impl FiniteAlgebra {
    /// Validates structure constants `table[a][b] = e_a e_b`, the unit, and
    /// optionally designated radical generators.
    pub fn new(
        modulus: u32,
        rank: usize,
        table: &[Vec<Vec<u32>>],
        unit: &[u32],
        radical: Option<&[Vec<u32>]>,
    ) -> Result<Self> {
        if modulus < 2 {
            return Err(Error::Modulus { modulus: modulus as u64, bound: crate::znlin::MAX_MODULUS });
        }
        if rank == 0 {
            return invalid("an algebra needs rank at least 1");
        }
        if table.len() != rank || table.iter().any(|r| r.len() != rank) {
            return dim_err(format!("multiplication table must be {rank}x{rank}"));
        }
        let mut mult = Vec::with_capacity(rank * rank * rank);
        for (a, row) in table.iter().enumerate() {
            for (b, v) in row.iter().enumerate() {
                if v.len() != rank {
                    return dim_err(format!("product e{a}·e{b} has length {}", v.len()));
                }
                mult.extend(v.iter().map(|&x| x % modulus));
            }
        }
        if unit.len() != rank {
            return dim_err(format!("unit vector has length {}", unit.len()));
        }
        let mut alg =
            FiniteAlgebra { modulus, rank, mult, unit: unit.iter().map(|&x| x % modulus).collect(), radical: None };
        for a in 0..rank {
            let ea = unit_vec(rank, a);
            if alg.multiply(&alg.unit, &ea) != ea || alg.multiply(&ea, &alg.unit) != ea {
                return invalid(format!("unit does not act as identity on e{a}"));
            }
        }
        for a in 0..rank {
            for b in 0..rank {
                let ab = alg.basis_product(a, b).to_vec();
                for c in 0..rank {
                    let ec = unit_vec(rank, c);
                    let left = alg.multiply(&ab, &ec);
                    let bc = alg.basis_product(b, c).to_vec();
                    let right = alg.multiply(&unit_vec(rank, a), &bc);
                    if left != right {
                        return invalid(format!("multiplication not associative on (e{a}, e{b}, e{c})"));
                    }
                }
            }
        }
        if let Some(gens) = radical {
            if gens.iter().any(|g| g.len() != rank) {
                return dim_err("radical generator of wrong length");
            }
            let ideal = alg.two_sided_ideal(gens);
            alg.check_radical(&ideal)?;
            alg.radical = Some(ideal);
        }
        Ok(alg)
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }
    pub fn rank(&self) -> usize {
        self.rank
    }
    pub fn unit(&self) -> &[u32] {
        &self.unit
    }
    /// The designated radical as a subgroup of the algebra, if any.
    pub fn radical(&self) -> Option<&CanonicalSubgroup> {
        self.radical.as_ref()
    }

    pub fn basis_product(&self, a: usize, b: usize) -> &[u32] {
        let start = (a * self.rank + b) * self.rank;
        &self.mult[start..start + self.rank]
    }

    pub fn multiply(&self, x: &[u32], y: &[u32]) -> Vec<u32> {
        let n = self.modulus as u64;
        let mut out = vec![0u64; self.rank];
        for (a, &xa) in x.iter().enumerate() {
            if xa == 0 {
                continue;
            }
            for (b, &yb) in y.iter().enumerate() {
                if yb == 0 {
                    continue;
                }
                let c = (xa as u64 * yb as u64) % n;
                for (o, &p) in out.iter_mut().zip(self.basis_product(a, b)) {
                    *o = (*o + c * p as u64) % n;
                }
            }
        }
        out.into_iter().map(|v| v as u32).collect()
    }

    fn two_sided_ideal(&self, gens: &[Vec<u32>]) -> CanonicalSubgroup {
        let mut ideal = CanonicalSubgroup::from_generators(self.modulus, self.rank, gens);
        loop {
            let mut more = Vec::new();
            for g in ideal.basis() {
                for a in 0..self.rank {
                    let ea = unit_vec(self.rank, a);
                    more.push(self.multiply(&ea, g));
                    more.push(self.multiply(g, &ea));
                }
            }
            let next = ideal.extend(&more);
            if next == ideal {
                return ideal;
            }
            ideal = next;
        }
    }

    fn check_radical(&self, ideal: &CanonicalSubgroup) -> Result<()> {
        let mut power = ideal.clone();
        let mut steps = 0;
        while !power.is_zero() {
            steps += 1;
            if steps > self.rank * 32 + 1 {
                return invalid("designated radical is not nilpotent");
            }
            let mut prods = Vec::new();
            for x in power.basis() {
                for y in ideal.basis() {
                    prods.push(self.multiply(x, y));
                }
            }
            let next = CanonicalSubgroup::from_generators(self.modulus, self.rank, &prods);
            if next == power {
                return invalid("designated radical is not nilpotent");
            }
            power = next;
        }
        // the quotient must be a division ring: every element outside the
        // radical is invertible
        let reps = ideal
            .coset_representatives(1 << 16)
            .ok_or_else(|| Error::Validation("radical quotient too large to check".into()))?;
        for x in reps.iter().filter(|x| x.iter().any(|&v| v != 0)) {
            let rows: Vec<Vec<u32>> = (0..self.rank).map(|b| self.multiply(x, &unit_vec(self.rank, b))).collect();
            let span = CanonicalSubgroup::from_generators(self.modulus, self.rank, &rows);
            if span != CanonicalSubgroup::full(self.modulus, self.rank) {
                return invalid(format!("element {x:?} outside the radical is not a unit"));
            }
        }
        Ok(())
    }

    /// The opposite algebra (same basis, reversed products).
    pub fn opposite(&self) -> FiniteAlgebra {
        let m = self.rank;
        let mut mult = vec![0; m * m * m];
        for a in 0..m {
            for b in 0..m {
                let start = (a * m + b) * m;
                mult[start..start + m].copy_from_slice(self.basis_product(b, a));
            }
        }
        FiniteAlgebra { modulus: self.modulus, rank: m, mult, unit: self.unit.clone(), radical: self.radical.clone() }
    }
}

/// A finitely presented left module.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlgModule {
    algebra: Arc<FiniteAlgebra>,
    gens: usize,
    relations: CanonicalSubgroup,
    action: Vec<ZnMatrix>,
}

fn rows_in(sub: &CanonicalSubgroup, m: &ZnMatrix) -> Option<usize> {
    (0..m.rows()).find(|&i| !sub.contains_vec(m.row(i)))
}

fn reduce_rows(sub: &CanonicalSubgroup, m: &ZnMatrix) -> ZnMatrix {
    let rows: Vec<Vec<u32>> = (0..m.rows()).map(|i| sub.reduce(m.row(i))).collect();
    ZnMatrix::from_rows(m.modulus(), m.cols(), &rows).expect("widths agree")
}

impl AlgModule {
    /// Validates a presentation: `gens` free generators, relation rows and
    /// one action matrix per basis element of the algebra.
    pub fn new(
        algebra: Arc<FiniteAlgebra>,
        gens: usize,
        relations: &[Vec<u32>],
        action: Vec<ZnMatrix>,
    ) -> Result<Self> {
        let n = algebra.modulus;
        if relations.iter().any(|r| r.len() != gens) {
            return dim_err("relation row of wrong length");
        }
        if action.len() != algebra.rank {
            return dim_err(format!("{} action matrices for an algebra of rank {}", action.len(), algebra.rank));
        }
        for (a, m) in action.iter().enumerate() {
            if m.rows() != gens || m.cols() != gens || m.modulus() != n {
                return dim_err(format!("action matrix of e{a} has the wrong shape"));
            }
        }
        let rel = CanonicalSubgroup::from_generators(n, gens, relations);
        for (a, m) in action.iter().enumerate() {
            for r in rel.basis() {
                if !rel.contains_vec(&m.apply(r)) {
                    return invalid(format!("action of e{a} does not preserve the relations"));
                }
            }
        }
        for a in 0..algebra.rank {
            for b in 0..algebra.rank {
                let lhs = action[b].mul(&action[a])?;
                let rhs = linear_action(&action, algebra.basis_product(a, b), n, gens);
                if rows_in(&rel, &lhs.sub(&rhs)?).is_some() {
                    return invalid(format!("action violates the structure constants at (e{a}, e{b})"));
                }
            }
        }
        let unit = linear_action(&action, &algebra.unit, n, gens);
        if rows_in(&rel, &unit.sub(&ZnMatrix::identity(n, gens))?).is_some() {
            return invalid("unit does not act as the identity");
        }
        Ok(Self::from_parts(algebra, gens, rel, action))
    }

    pub(crate) fn from_parts(
        algebra: Arc<FiniteAlgebra>,
        gens: usize,
        relations: CanonicalSubgroup,
        action: Vec<ZnMatrix>,
    ) -> Self {
        let action = action.iter().map(|m| reduce_rows(&relations, m)).collect();
        AlgModule { algebra, gens, relations, action }
    }

    pub fn zero(algebra: Arc<FiniteAlgebra>) -> Self {
        let n = algebra.modulus;
        let action = (0..algebra.rank).map(|_| ZnMatrix::zeros(n, 0, 0)).collect();
        Self::from_parts(algebra, 0, CanonicalSubgroup::zero(n, 0), action)
    }

    /// The algebra as a left module over itself.
    pub fn regular(algebra: Arc<FiniteAlgebra>) -> Self {
        Self::free(algebra, 1)
    }

    /// The free module of the given rank.
    pub fn free(algebra: Arc<FiniteAlgebra>, rank: usize) -> Self {
        let m = algebra.rank;
        let n = algebra.modulus;
        let action = (0..m)
            .map(|a| {
                let block = ZnMatrix::from_rows(
                    n,
                    m,
                    &(0..m).map(|b| algebra.basis_product(a, b).to_vec()).collect::<Vec<_>>(),
                )
                .expect("widths agree");
                let blocks: Vec<&ZnMatrix> = (0..rank).map(|_| &block).collect();
                ZnMatrix::block_diag(n, &blocks)
            })
            .collect();
        Self::from_parts(algebra, rank * m, CanonicalSubgroup::zero(n, rank * m), action)
    }

    pub fn algebra(&self) -> &Arc<FiniteAlgebra> {
        &self.algebra
    }
    pub fn modulus(&self) -> u32 {
        self.algebra.modulus
    }
    pub fn gens(&self) -> usize {
        self.gens
    }
    pub fn relations(&self) -> &CanonicalSubgroup {
        &self.relations
    }
    pub fn action(&self, a: usize) -> &ZnMatrix {
        &self.action[a]
    }
    pub fn actions(&self) -> &[ZnMatrix] {
        &self.action
    }

    /// Cardinality of the module.
    pub fn order(&self) -> GroupOrder {
        self.relations.index()
    }

    pub fn is_zero(&self) -> bool {
        self.order().is_one()
    }

    /// Canonical representatives of all elements, or `None` past `budget`.
    pub fn elements(&self, budget: u128) -> Option<Vec<Vec<u32>>> {
        self.relations.coset_representatives(budget)
    }

    /// `v·x` for an algebra element `x`.
    pub fn act(&self, x: &[u32], v: &[u32]) -> Vec<u32> {
        let m = linear_action(&self.action, x, self.modulus(), self.gens);
        self.relations.reduce(&m.apply(v))
    }

    /// Smallest action-closed lifted subgroup containing `elems`.
    pub fn submodule_closure(&self, elems: &[Vec<u32>]) -> CanonicalSubgroup {
        let mut sub = self.relations.extend(elems);
        loop {
            let mut more = Vec::new();
            for v in sub.basis() {
                for a in &self.action {
                    more.push(a.apply(v));
                }
            }
            let next = sub.extend(&more);
            if next == sub {
                return sub;
            }
            sub = next;
        }
    }

    /// Orders `|k·M|` for each divisor `k` of `n`, an isomorphism invariant.
    pub fn layer_orders(&self) -> Vec<GroupOrder> {
        let n = self.modulus();
        (1..=n)
            .filter(|k| n.is_multiple_of(*k))
            .map(|k| {
                let gens: Vec<Vec<u32>> =
                    (0..self.gens).map(|i| unit_vec(self.gens, i).into_iter().map(|x| x * k % n).collect()).collect();
                self.relations.extend(&gens).order().div(&self.relations.order())
            })
            .collect()
    }
}

/// `Σ x_k A_k`.
fn linear_action(action: &[ZnMatrix], x: &[u32], n: u32, d: usize) -> ZnMatrix {
    let mut out = ZnMatrix::zeros(n, d, d);
    for (k, &c) in x.iter().enumerate() {
        if c != 0 {
            out = out.add(&action[k].scale(c as i64)).expect("shapes agree");
        }
    }
    out
}

pub(crate) fn same_object(a: &Arc<AlgModule>, b: &Arc<AlgModule>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

/// `rel(N)^{d_M}` inside the flattened space of `d_M × d_N` matrices.
pub fn lifted_zero(source_gens: usize, target: &AlgModule) -> CanonicalSubgroup {
    let dn = target.gens;
    let n = target.modulus();
    let mut gens = Vec::new();
    for i in 0..source_gens {
        for r in target.relations.basis() {
            let mut v = vec![0; source_gens * dn];
            v[i * dn..(i + 1) * dn].copy_from_slice(r);
            gens.push(v);
        }
    }
    CanonicalSubgroup::from_generators(n, source_gens * dn, &gens)
}

/// A module homomorphism, stored with rows reduced modulo the target
/// relations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Morphism {
    source: Arc<AlgModule>,
    target: Arc<AlgModule>,
    matrix: ZnMatrix,
}

impl Morphism {
    /// Validates that `matrix` defines a module map.
    pub fn new(source: Arc<AlgModule>, target: Arc<AlgModule>, matrix: ZnMatrix) -> Result<Self> {
        if source.algebra != target.algebra {
            return invalid("morphism between modules over different algebras");
        }
        if matrix.rows() != source.gens || matrix.cols() != target.gens {
            return dim_err(format!(
                "{}x{} matrix for a map from {} to {} generators",
                matrix.rows(),
                matrix.cols(),
                source.gens,
                target.gens
            ));
        }
        for r in source.relations.basis() {
            if !target.relations.contains_vec(&matrix.apply(r)) {
                return invalid("matrix does not send relations to relations");
            }
        }
        for (a, (am, an)) in source.action.iter().zip(&target.action).enumerate() {
            let diff = am.mul(&matrix)?.sub(&matrix.mul(an)?)?;
            if rows_in(&target.relations, &diff).is_some() {
                return invalid(format!("matrix does not commute with the action of e{a}"));
            }
        }
        Ok(Self::from_parts(source, target, matrix))
    }

    pub(crate) fn from_parts(source: Arc<AlgModule>, target: Arc<AlgModule>, matrix: ZnMatrix) -> Self {
        let matrix = reduce_rows(&target.relations, &matrix);
        Morphism { source, target, matrix }
    }

    pub(crate) fn from_flat(source: &Arc<AlgModule>, target: &Arc<AlgModule>, flat: &[u32]) -> Self {
        let m = ZnMatrix::from_flat(source.modulus(), source.gens, target.gens, flat);
        Self::from_parts(source.clone(), target.clone(), m)
    }

    pub fn identity(m: &Arc<AlgModule>) -> Self {
        Self::from_parts(m.clone(), m.clone(), ZnMatrix::identity(m.modulus(), m.gens))
    }

    pub fn zero(source: &Arc<AlgModule>, target: &Arc<AlgModule>) -> Self {
        let z = ZnMatrix::zeros(source.modulus(), source.gens, target.gens);
        Morphism { source: source.clone(), target: target.clone(), matrix: z }
    }

    pub fn source(&self) -> &Arc<AlgModule> {
        &self.source
    }
    pub fn target(&self) -> &Arc<AlgModule> {
        &self.target
    }
    pub fn matrix(&self) -> &ZnMatrix {
        &self.matrix
    }
    /// Row-major coordinates in the flattened Hom space.
    pub fn flat(&self) -> Vec<u32> {
        self.matrix.to_vec()
    }
    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    /// Image of an element of the source.
    pub fn apply(&self, v: &[u32]) -> Vec<u32> {
        self.target.relations.reduce(&self.matrix.apply(v))
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &Morphism) -> Result<Morphism> {
        compose(self, first)
    }

    fn check_parallel(&self, other: &Morphism) -> Result<()> {
        if !same_object(&self.source, &other.source) || !same_object(&self.target, &other.target) {
            return dim_err("morphisms are not parallel");
        }
        Ok(())
    }

    pub fn add(&self, other: &Morphism) -> Result<Morphism> {
        self.check_parallel(other)?;
        Ok(Self::from_parts(self.source.clone(), self.target.clone(), self.matrix.add(&other.matrix)?))
    }

    pub fn sub(&self, other: &Morphism) -> Result<Morphism> {
        self.check_parallel(other)?;
        Ok(Self::from_parts(self.source.clone(), self.target.clone(), self.matrix.sub(&other.matrix)?))
    }

    pub fn scale(&self, k: i64) -> Morphism {
        Self::from_parts(self.source.clone(), self.target.clone(), self.matrix.scale(k))
    }

    /// Lifted kernel: `{x : x·F ∈ rel(N)}`.
    pub fn kernel_lifted(&self) -> CanonicalSubgroup {
        self.preimage(&self.target.relations)
    }

    /// Lifted preimage of a lifted subgroup of the target.
    pub fn preimage(&self, lifted: &CanonicalSubgroup) -> CanonicalSubgroup {
        let rows = self.matrix.row_vecs();
        let gens = coefficient_preimage(&rows, lifted);
        CanonicalSubgroup::from_generators(self.source.modulus(), self.source.gens, &gens)
            .sum_unchecked(&self.source.relations)
    }

    /// Lifted image inside the target.
    pub fn image_lifted(&self) -> CanonicalSubgroup {
        self.target.relations.extend(&self.matrix.row_vecs())
    }

    /// Lifted image of a lifted subgroup of the source.
    pub fn image_of(&self, lifted: &CanonicalSubgroup) -> CanonicalSubgroup {
        let imgs: Vec<Vec<u32>> = lifted.basis().iter().map(|v| self.matrix.apply(v)).collect();
        self.target.relations.extend(&imgs)
    }

    pub fn is_mono(&self) -> bool {
        self.kernel_lifted() == self.source.relations
    }

    pub fn is_epi(&self) -> bool {
        self.image_lifted() == CanonicalSubgroup::full(self.target.modulus(), self.target.gens)
    }

    pub fn is_iso(&self) -> bool {
        self.is_mono() && self.is_epi()
    }
}

/// `g ∘ f`.
pub fn compose(g: &Morphism, f: &Morphism) -> Result<Morphism> {
    if !same_object(&f.target, &g.source) {
        return dim_err("composite of non-composable morphisms");
    }
    Ok(Morphism::from_parts(f.source.clone(), g.target.clone(), f.matrix.mul(&g.matrix)?))
}

/// `Hom(M, N)` as the lifted subgroup `S` over `Z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomGroup {
    source: Arc<AlgModule>,
    target: Arc<AlgModule>,
    space: CanonicalSubgroup,
    zero: CanonicalSubgroup,
    gens: Vec<Morphism>,
    orders: Vec<u32>,
}

/// Computes `Hom(M, N)`.
pub fn hom_group(source: &Arc<AlgModule>, target: &Arc<AlgModule>) -> Result<HomGroup> {
    if source.algebra != target.algebra {
        return invalid("Hom between modules over different algebras");
    }
    let n = source.modulus();
    let (dm, dn) = (source.gens, target.gens);
    let rank = source.algebra.rank;
    let rel_m = source.relations.basis();
    let blocks = rel_m.len() + rank * dm;
    let width = blocks * dn;
    // constraint images of the elementary matrices E_ij
    let mut images = Vec::with_capacity(dm * dn);
    for i in 0..dm {
        for j in 0..dn {
            let mut v = vec![0u32; width];
            for (b, r) in rel_m.iter().enumerate() {
                v[b * dn + j] = r[i];
            }
            for a in 0..rank {
                let am = &source.action[a];
                let an = &target.action[a];
                for p in 0..dm {
                    let base = (rel_m.len() + a * dm + p) * dn;
                    let c = am.get(p, i);
                    v[base + j] = (v[base + j] + c) % n;
                    if p == i {
                        for q in 0..dn {
                            v[base + q] = (v[base + q] + n - an.get(j, q)) % n;
                        }
                    }
                }
            }
            images.push(v);
        }
    }
    let mut target_gens = Vec::new();
    for b in 0..blocks {
        for r in target.relations.basis() {
            let mut v = vec![0; width];
            v[b * dn..(b + 1) * dn].copy_from_slice(r);
            target_gens.push(v);
        }
    }
    let constraint_target = CanonicalSubgroup::from_generators(n, width, &target_gens);
    let zero = lifted_zero(dm, target);
    let space = CanonicalSubgroup::from_generators(n, dm * dn, &coefficient_preimage(&images, &constraint_target))
        .sum_unchecked(&zero);
    Ok(HomGroup::from_space(source, target, space, zero))
}

/// Additive order of `v` modulo `zero`.
pub(crate) fn order_mod(v: &[u32], zero: &CanonicalSubgroup) -> u32 {
    let n = zero.modulus();
    (1..=n).filter(|k| n.is_multiple_of(*k)).find(|&k| zero.contains_vec(&crate::znlin::vec_scale(v, k, n))).unwrap_or(n)
}

/// Greedy generating set of `space / zero`.
pub(crate) fn quotient_generators(space: &CanonicalSubgroup, zero: &CanonicalSubgroup) -> Vec<Vec<u32>> {
    let mut acc = zero.clone();
    let mut out = Vec::new();
    for row in space.basis() {
        let r = zero.reduce(row);
        if !acc.contains_vec(&r) {
            acc = acc.extend(core::slice::from_ref(&r));
            out.push(r);
        }
    }
    out
}

impl HomGroup {
    pub(crate) fn from_space(
        source: &Arc<AlgModule>,
        target: &Arc<AlgModule>,
        space: CanonicalSubgroup,
        zero: CanonicalSubgroup,
    ) -> Self {
        let flats = quotient_generators(&space, &zero);
        let orders = flats.iter().map(|v| order_mod(v, &zero)).collect();
        let gens = flats.iter().map(|v| Morphism::from_flat(source, target, v)).collect();
        HomGroup { source: source.clone(), target: target.clone(), space, zero, gens, orders }
    }

    pub fn source(&self) -> &Arc<AlgModule> {
        &self.source
    }
    pub fn target(&self) -> &Arc<AlgModule> {
        &self.target
    }
    /// The lifted subgroup `S`.
    pub fn space(&self) -> &CanonicalSubgroup {
        &self.space
    }
    /// The subgroup `Z` of matrices representing zero.
    pub fn zero(&self) -> &CanonicalSubgroup {
        &self.zero
    }
    pub fn generators(&self) -> &[Morphism] {
        &self.gens
    }
    pub fn generator_orders(&self) -> &[u32] {
        &self.orders
    }
    pub fn order(&self) -> GroupOrder {
        self.space.order().div(&self.zero.order())
    }
    pub fn morphism(&self, flat: &[u32]) -> Morphism {
        Morphism::from_flat(&self.source, &self.target, flat)
    }

    /// All elements of a lifted subgroup between `Z` and `S`, one
    /// canonical morphism each, or `None` past `budget`.
    pub fn elements_of(&self, lifted: &CanonicalSubgroup, budget: u128) -> Option<Vec<Morphism>> {
        let size = lifted.order().div(&self.zero.order()).value()?;
        if size > budget {
            return None;
        }
        let flats = quotient_generators(lifted, &self.zero);
        let orders: Vec<u32> = flats.iter().map(|v| order_mod(v, &self.zero)).collect();
        let mut seen = BTreeSet::new();
        let mut coeffs = vec![0u32; flats.len()];
        let d = lifted.dim();
        let n = lifted.modulus();
        loop {
            seen.insert(self.zero.reduce(&combine(&coeffs, &flats, d, n)));
            let mut i = 0;
            loop {
                if i == coeffs.len() {
                    return Some(seen.into_iter().map(|f| self.morphism(&f)).collect());
                }
                coeffs[i] += 1;
                if coeffs[i] < orders[i] {
                    break;
                }
                coeffs[i] = 0;
                i += 1;
            }
        }
    }

    pub fn elements(&self, budget: u128) -> Option<Vec<Morphism>> {
        self.elements_of(&self.space, budget)
    }
}

/// `h : A → B` with `g ∘ h = f`, for `f : A → C` and `g : B → C`.
pub fn factor_through(f: &Morphism, g: &Morphism) -> Result<Option<Morphism>> {
    let hom = hom_group(&f.source, &g.source)?;
    factor_through_in(&hom, f, g)
}

/// As [`factor_through`] with `Hom(A, B)` supplied.
pub fn factor_through_in(hom: &HomGroup, f: &Morphism, g: &Morphism) -> Result<Option<Morphism>> {
    if !same_object(&f.target, &g.target) || !same_object(&hom.source, &f.source) {
        return dim_err("factor_through needs matching codomains");
    }
    let images: Vec<Vec<u32>> =
        hom.gens.iter().map(|s| s.matrix.mul(&g.matrix).expect("shapes agree").to_vec()).collect();
    let zero = lifted_zero(f.source.gens, &f.target);
    Ok(solve_in_span(&images, &zero, &f.flat()).map(|c| {
        let flats: Vec<Vec<u32>> = hom.gens.iter().map(|s| s.flat()).collect();
        hom.morphism(&combine(&c, &flats, hom.space.dim(), hom.space.modulus()))
    }))
}

/// `h : B → C` with `h ∘ i = f`, for `f : A → C` and `i : A → B`.
pub fn factor_through_left(f: &Morphism, i: &Morphism) -> Result<Option<Morphism>> {
    let hom = hom_group(&i.target, &f.target)?;
    factor_through_left_in(&hom, f, i)
}

/// As [`factor_through_left`] with `Hom(B, C)` supplied.
pub fn factor_through_left_in(hom: &HomGroup, f: &Morphism, i: &Morphism) -> Result<Option<Morphism>> {
    if !same_object(&f.source, &i.source) || !same_object(&hom.target, &f.target) {
        return dim_err("left factorization needs matching domains");
    }
    let images: Vec<Vec<u32>> =
        hom.gens.iter().map(|s| i.matrix.mul(&s.matrix).expect("shapes agree").to_vec()).collect();
    let zero = lifted_zero(f.source.gens, &f.target);
    Ok(solve_in_span(&images, &zero, &f.flat()).map(|c| {
        let flats: Vec<Vec<u32>> = hom.gens.iter().map(|s| s.flat()).collect();
        hom.morphism(&combine(&c, &flats, hom.space.dim(), hom.space.modulus()))
    }))
}

/// The submodule of `n` given by a lifted, action-closed subgroup, with its
/// inclusion.
pub fn submodule(module: &Arc<AlgModule>, lifted: &CanonicalSubgroup) -> (Arc<AlgModule>, Morphism) {
    let rel = &module.relations;
    let gens: Vec<Vec<u32>> =
        lifted.basis().iter().map(|v| rel.reduce(v)).filter(|v| v.iter().any(|&x| x != 0)).collect();
    let sub = module_on_generators(module, &gens);
    let incl = ZnMatrix::from_rows(module.modulus(), module.gens, &gens).expect("widths agree");
    (sub.clone(), Morphism::from_parts(sub, module.clone(), incl))
}

/// Presents the submodule spanned by `gens` (assumed action-closed modulo
/// relations) on those generators.
fn module_on_generators(module: &Arc<AlgModule>, gens: &[Vec<u32>]) -> Arc<AlgModule> {
    let n = module.modulus();
    let rel = &module.relations;
    let k = gens.len();
    let relations = coefficient_preimage(gens, rel);
    let relations = CanonicalSubgroup::from_generators(n, k, &relations);
    let action = module
        .action
        .iter()
        .map(|a| {
            let rows: Vec<Vec<u32>> = gens
                .iter()
                .map(|g| solve_in_span(gens, rel, &a.apply(g)).expect("submodule is action-closed"))
                .collect();
            ZnMatrix::from_flat(n, k, k, &rows.concat())
        })
        .collect();
    Arc::new(AlgModule::from_parts(module.algebra.clone(), k, relations, action))
}

/// The quotient of `module` by a lifted submodule, with the projection.
pub fn quotient(module: &Arc<AlgModule>, lifted: &CanonicalSubgroup) -> (Arc<AlgModule>, Morphism) {
    let q = AlgModule::from_parts(
        module.algebra.clone(),
        module.gens,
        lifted.sum_unchecked(&module.relations),
        module.action.clone(),
    );
    let q = Arc::new(q);
    let proj = Morphism::from_parts(module.clone(), q.clone(), ZnMatrix::identity(module.modulus(), module.gens));
    (q, proj)
}

/// Kernel, image factorization and cokernel of a morphism.
#[derive(Clone, Debug)]
pub struct ExactParts {
    pub kernel: Arc<AlgModule>,
    pub kernel_mono: Morphism,
    pub image: Arc<AlgModule>,
    pub image_epi: Morphism,
    pub image_mono: Morphism,
    pub cokernel: Arc<AlgModule>,
    pub cokernel_epi: Morphism,
}

pub fn exact_parts(f: &Morphism) -> ExactParts {
    let (kernel, kernel_mono) = submodule(&f.source, &f.kernel_lifted());
    let (image, image_mono) = submodule(&f.target, &f.image_lifted());
    let img_gens = image_mono.matrix.row_vecs();
    let rows: Vec<Vec<u32>> = f
        .matrix
        .row_vecs()
        .iter()
        .map(|r| solve_in_span(&img_gens, &f.target.relations, r).expect("row lies in the image"))
        .collect();
    let epi = ZnMatrix::from_flat(f.source.modulus(), f.source.gens, image.gens, &rows.concat());
    let image_epi = Morphism::from_parts(f.source.clone(), image.clone(), epi);
    let (cokernel, cokernel_epi) = quotient(&f.target, &f.image_lifted());
    ExactParts { kernel, kernel_mono, image, image_epi, image_mono, cokernel, cokernel_epi }
}

/// A biproduct with its structure maps.
#[derive(Clone, Debug)]
pub struct DirectSum {
    pub module: Arc<AlgModule>,
    pub injections: Vec<Morphism>,
    pub projections: Vec<Morphism>,
}

pub fn direct_sum(algebra: &Arc<FiniteAlgebra>, summands: &[Arc<AlgModule>]) -> Result<DirectSum> {
    if summands.iter().any(|s| s.algebra != *algebra) {
        return invalid("direct sum over different algebras");
    }
    let n = algebra.modulus;
    let total: usize = summands.iter().map(|s| s.gens).sum();
    let mut rels = Vec::new();
    let mut offset = 0;
    for s in summands {
        for r in s.relations.basis() {
            let mut v = vec![0; total];
            v[offset..offset + s.gens].copy_from_slice(r);
            rels.push(v);
        }
        offset += s.gens;
    }
    let action = (0..algebra.rank)
        .map(|a| {
            let blocks: Vec<&ZnMatrix> = summands.iter().map(|s| &s.action[a]).collect();
            ZnMatrix::block_diag(n, &blocks)
        })
        .collect();
    let module = Arc::new(AlgModule::from_parts(
        algebra.clone(),
        total,
        CanonicalSubgroup::from_generators(n, total, &rels),
        action,
    ));
    let mut injections = Vec::new();
    let mut projections = Vec::new();
    let mut offset = 0;
    for s in summands {
        let mut inj = ZnMatrix::zeros(n, s.gens, total);
        let mut proj = ZnMatrix::zeros(n, total, s.gens);
        for i in 0..s.gens {
            inj.set(i, offset + i, 1);
            proj.set(offset + i, i, 1);
        }
        injections.push(Morphism::from_parts(s.clone(), module.clone(), inj));
        projections.push(Morphism::from_parts(module.clone(), s.clone(), proj));
        offset += s.gens;
    }
    Ok(DirectSum { module, injections, projections })
}

/// The morphism `⊕_i A_i → B` with components `maps[i]`.
pub fn copair(source: &DirectSum, maps: &[Morphism]) -> Result<Morphism> {
    let target =
        maps.first().map(|m| m.target.clone()).ok_or_else(|| Error::Input("copair needs at least one map".into()))?;
    let rows: Vec<Vec<u32>> = maps.iter().flat_map(|m| m.matrix.row_vecs()).collect();
    let mat = ZnMatrix::from_rows(target.modulus(), target.gens, &rows)?;
    Morphism::new(source.module.clone(), target, mat)
}

/// The morphism `A → ⊕_i B_i` with components `maps[i]`.
pub fn pair(target: &DirectSum, maps: &[Morphism]) -> Result<Morphism> {
    let source =
        maps.first().map(|m| m.source.clone()).ok_or_else(|| Error::Input("pair needs at least one map".into()))?;
    let n = source.modulus();
    let total = target.module.gens;
    let mut mat = ZnMatrix::zeros(n, source.gens, total);
    let mut offset = 0;
    for m in maps {
        for i in 0..source.gens {
            for j in 0..m.target.gens {
                mat.set(i, offset + j, m.matrix.get(i, j) as i64);
            }
        }
        offset += m.target.gens;
    }
    Morphism::new(source, target.module.clone(), mat)
}

/// Free cover `A^{d} → X` sending the unit of copy `j` to generator `j`.
pub fn free_cover(module: &Arc<AlgModule>) -> (Arc<AlgModule>, Morphism) {
    let alg = &module.algebra;
    let m = alg.rank;
    let free = Arc::new(AlgModule::free(alg.clone(), module.gens));
    let mut rows = Vec::with_capacity(module.gens * m);
    for j in 0..module.gens {
        for b in 0..m {
            rows.push(module.action[b].row(j).to_vec());
        }
    }
    let mat = ZnMatrix::from_flat(module.modulus(), module.gens * m, module.gens, &rows.concat());
    (free.clone(), Morphism::from_parts(free, module.clone(), mat))
}

/// Lifted subgroup of `Hom(A, B)` of maps factoring through a projective:
/// the image of `Hom(A, F)` along a free cover `F → B`.
pub fn projective_part(a: &Arc<AlgModule>, b: &Arc<AlgModule>) -> Result<CanonicalSubgroup> {
    let (free, cover) = free_cover(b);
    let hom = hom_group(a, &free)?;
    let flats: Vec<Vec<u32>> = hom.gens.iter().map(|h| compose(&cover, h).map(|m| m.flat())).collect::<Result<_>>()?;
    Ok(lifted_zero(a.gens, b).extend(&flats))
}

/// Character basis `rel^⊥` of a module, as rows.
fn characters(module: &AlgModule) -> Vec<Vec<u32>> {
    module.relations.perp().basis().to_vec()
}

/// `D(M) = Hom_{Z/n}(M, Z/n)`, a left module over the opposite algebra.
pub fn dual(module: &Arc<AlgModule>) -> Arc<AlgModule> {
    let n = module.modulus();
    let d = module.gens;
    let chars = characters(module);
    let k = chars.len();
    let relations = CanonicalSubgroup::from_generators(n, k, &left_kernel_rows(&chars, d, n));
    let zero = CanonicalSubgroup::zero(n, d);
    let action = module
        .action
        .iter()
        .map(|a| {
            let at = a.transpose();
            let rows: Vec<Vec<u32>> = chars
                .iter()
                .map(|w| solve_in_span(&chars, &zero, &at.apply(w)).expect("characters are action-closed"))
                .collect();
            ZnMatrix::from_flat(n, k, k, &rows.concat())
        })
        .collect();
    let op = Arc::new(module.algebra.opposite());
    Arc::new(AlgModule::from_parts(op, k, relations, action))
}

/// `D(f) : D(N) → D(M)` for `f : M → N`.
pub fn dual_morphism(f: &Morphism) -> Morphism {
    let n = f.source.modulus();
    let dm = dual(&f.source);
    let dn = dual(&f.target);
    let chars_m = characters(&f.source);
    let chars_n = characters(&f.target);
    let zero = CanonicalSubgroup::zero(n, f.source.gens);
    let ft = f.matrix.transpose();
    let rows: Vec<Vec<u32>> = chars_n
        .iter()
        .map(|w| solve_in_span(&chars_m, &zero, &ft.apply(w)).expect("pullback of a character"))
        .collect();
    let mat = ZnMatrix::from_flat(n, chars_n.len(), chars_m.len(), &rows.concat());
    Morphism::from_parts(dn, dm, mat)
}

/// Evaluation `M → D(D(M))`; an isomorphism for every finite module.
pub fn double_dual_evaluation(module: &Arc<AlgModule>) -> Morphism {
    let n = module.modulus();
    let d1 = dual(module);
    let dd = dual(&d1);
    let chars = characters(module);
    let chars2 = characters(&d1);
    let k = chars.len();
    let zero = CanonicalSubgroup::zero(n, k);
    let rows: Vec<Vec<u32>> = (0..module.gens)
        .map(|j| {
            let y: Vec<u32> = chars.iter().map(|w| w[j]).collect();
            solve_in_span(&chars2, &zero, &y).expect("evaluation is a character")
        })
        .collect();
    let mat = ZnMatrix::from_flat(n, module.gens, chars2.len(), &rows.concat());
    // D(D(M)) is over the opposite of the opposite, which equals the algebra
    let dd = Arc::new(AlgModule::from_parts(module.algebra.clone(), dd.gens, dd.relations.clone(), dd.action.clone()));
    Morphism::from_parts(module.clone(), dd, mat)
}

/// Outcome of a budgeted isomorphism search.
#[derive(Clone, Debug)]
pub enum IsoSearch {
    Found { forward: Morphism, backward: Morphism },
    NotIsomorphic,
    Undecided,
}

impl IsoSearch {
    pub fn is_found(&self) -> bool {
        matches!(self, IsoSearch::Found { .. })
    }
}

/// Looks for an isomorphism `M → N` among at most `budget` morphisms.
pub fn find_isomorphism(m: &Arc<AlgModule>, n: &Arc<AlgModule>, budget: u128) -> Result<IsoSearch> {
    if m.order() != n.order() || m.layer_orders() != n.layer_orders() {
        return Ok(IsoSearch::NotIsomorphic);
    }
    let hom = hom_group(m, n)?;
    let Some(all) = hom.elements(budget) else {
        return Ok(IsoSearch::Undecided);
    };
    for f in all {
        if f.is_mono() {
            let back = factor_through(&Morphism::identity(n), &f)?
                .ok_or_else(|| Error::Validation("monomorphism of equal order has no inverse".into()))?;
            return Ok(IsoSearch::Found { forward: f, backward: back });
        }
    }
    Ok(IsoSearch::NotIsomorphic)
}

/// All submodules as lifted subgroups, or `None` past `budget` elements
/// or submodules.
pub fn submodules(module: &AlgModule, budget: u128) -> Option<Vec<CanonicalSubgroup>> {
    let elems = module.elements(budget)?;
    let cyclic: Vec<CanonicalSubgroup> =
        elems.iter().map(|e| module.submodule_closure(core::slice::from_ref(e))).collect();
    let mut found = BTreeSet::new();
    found.insert(module.relations.clone());
    let mut queue = vec![module.relations.clone()];
    while let Some(k) = queue.pop() {
        for c in &cyclic {
            let next = k.sum_unchecked(c);
            if found.insert(next.clone()) {
                if found.len() as u128 > budget {
                    return None;
                }
                queue.push(next);
            }
        }
    }
    Some(found.into_iter().collect())
}

/// `x - y` on module elements.
pub fn element_sub(module: &AlgModule, x: &[u32], y: &[u32]) -> Vec<u32> {
    module.relations.reduce(&vec_sub(x, y, module.modulus()))
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use proptest::prelude::*;

    pub(crate) fn zn_algebra(n: u32) -> Arc<FiniteAlgebra> {
        Arc::new(FiniteAlgebra::new(n, 1, &[vec![vec![1]]], &[1], Some(&[vec![primes_of(n)]])).unwrap())
    }

    fn primes_of(n: u32) -> u32 {
        (2..=n).find(|p| n.is_multiple_of(*p)).unwrap()
    }

    pub(crate) fn dual_numbers() -> Arc<FiniteAlgebra> {
        // basis {1, x}, x² = 0
        let t = vec![vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1], vec![0, 0]]];
        Arc::new(FiniteAlgebra::new(2, 2, &t, &[1, 0], Some(&[vec![0, 1]])).unwrap())
    }

    /// Path algebra of 1 → 2 over F₂, basis {e1, e2, a} with a = e2·a·e1.
    pub(crate) fn a2_path() -> Arc<FiniteAlgebra> {
        let z = vec![0, 0, 0];
        let e1 = vec![1, 0, 0];
        let e2 = vec![0, 1, 0];
        let a = vec![0, 0, 1];
        let t = vec![
            vec![e1.clone(), z.clone(), z.clone()],
            vec![z.clone(), e2.clone(), a.clone()],
            vec![a.clone(), z.clone(), z.clone()],
        ];
        Arc::new(FiniteAlgebra::new(2, 3, &t, &[1, 1, 0], None).unwrap())
    }

    pub(crate) fn cyclic(alg: &Arc<FiniteAlgebra>, order: u32) -> Arc<AlgModule> {
        let n = alg.modulus();
        let rel = if order == n { vec![] } else { vec![vec![order]] };
        Arc::new(AlgModule::new(alg.clone(), 1, &rel, vec![ZnMatrix::identity(n, 1)]).unwrap())
    }

    fn mor(s: &Arc<AlgModule>, t: &Arc<AlgModule>, e: &[i64]) -> Morphism {
        Morphism::new(s.clone(), t.clone(), ZnMatrix::new(s.modulus(), s.gens(), t.gens(), e).unwrap()).unwrap()
    }

    /// Exhaustive Hom count: all matrices satisfying the module-map
    /// conditions, modulo matrices into the relations.
    pub(crate) fn brute_hom_order(m: &Arc<AlgModule>, t: &Arc<AlgModule>) -> usize {
        let n = m.modulus();
        let cells = m.gens() * t.gens();
        let total = (n as usize).pow(cells as u32);
        let zero = lifted_zero(m.gens(), t);
        let mut seen = BTreeSet::new();
        for idx in 0..total {
            let mut x = idx;
            let flat: Vec<i64> = (0..cells)
                .map(|_| {
                    let v = x % n as usize;
                    x /= n as usize;
                    v as i64
                })
                .collect();
            let mat = ZnMatrix::new(n, m.gens(), t.gens(), &flat).unwrap();
            if Morphism::new(m.clone(), t.clone(), mat.clone()).is_ok() {
                seen.insert(zero.reduce(mat.data()));
            }
        }
        seen.len()
    }

    #[test]
    fn algebra_validation() {
        assert!(FiniteAlgebra::new(4, 1, &[vec![vec![1]]], &[1], None).is_ok());
        assert!(dual_numbers().rank() == 2);
        let t = vec![vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1], vec![1, 0]]];
        let err = FiniteAlgebra::new(2, 2, &t, &[0, 1], None).unwrap_err();
        assert!(matches!(err, Error::Validation(_)));
        // non-associative table: e1·e1 = e0 with e0 the unit but e1 acting oddly
        let bad = vec![vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1], vec![0, 1]]];
        assert!(FiniteAlgebra::new(3, 2, &bad, &[1, 0], Some(&[vec![0, 1]])).is_err());
    }

    #[test]
    fn module_validation() {
        let z4 = zn_algebra(4);
        let r = cyclic(&z4, 4);
        let s = cyclic(&z4, 2);
        assert_eq!(r.order().value(), Some(4));
        assert_eq!(s.order().value(), Some(2));
        let dn = dual_numbers();
        // x acting as the identity: x² must act as 0
        let bad = AlgModule::new(dn, 1, &[], vec![ZnMatrix::identity(2, 1), ZnMatrix::identity(2, 1)]);
        assert!(matches!(bad, Err(Error::Validation(_))));
    }

    #[test]
    fn hom_groups_over_z4() {
        let z4 = zn_algebra(4);
        let r = cyclic(&z4, 4);
        let s = cyclic(&z4, 2);
        let zero = Arc::new(AlgModule::zero(z4.clone()));
        let end_r = hom_group(&r, &r).unwrap();
        assert_eq!(end_r.order().value(), Some(4));
        assert_eq!(end_r.generators().len(), 1);
        assert!(end_r.generators()[0].is_iso());
        let sr = hom_group(&s, &r).unwrap();
        assert_eq!(sr.order().value(), Some(2));
        assert_eq!(sr.generators()[0], mor(&s, &r, &[2]));
        assert_eq!(hom_group(&r, &zero).unwrap().order().value(), Some(1));
        for (a, b) in [(&r, &r), (&r, &s), (&s, &r), (&s, &s)] {
            assert_eq!(hom_group(a, b).unwrap().order().value().unwrap() as usize, brute_hom_order(a, b));
        }
    }

    #[test]
    fn composition_rules() {
        let z4 = zn_algebra(4);
        let r = cyclic(&z4, 4);
        let s = cyclic(&z4, 2);
        let two = mor(&r, &r, &[2]);
        assert!(compose(&two, &two).unwrap().is_zero());
        let f = mor(&r, &s, &[1]);
        assert_eq!(compose(&f, &Morphism::identity(&r)).unwrap(), f);
        // all composites among {R, S}, checked on elements
        let objs = [r.clone(), s.clone()];
        for a in &objs {
            for b in &objs {
                for c in &objs {
                    for f in hom_group(a, b).unwrap().elements(64).unwrap() {
                        for g in hom_group(b, c).unwrap().elements(64).unwrap() {
                            let gf = compose(&g, &f).unwrap();
                            for x in a.elements(64).unwrap() {
                                assert_eq!(gf.apply(&x), g.apply(&f.apply(&x)));
                            }
                        }
                    }
                }
            }
        }
        assert!(compose(&f, &f).is_err());
    }

    #[test]
    fn exact_parts_of_multiplication_by_two() {
        let z4 = zn_algebra(4);
        let r = cyclic(&z4, 4);
        let s = cyclic(&z4, 2);
        let parts = exact_parts(&mor(&r, &r, &[2]));
        for m in [&parts.kernel, &parts.image, &parts.cokernel] {
            assert!(matches!(find_isomorphism(m, &s, 64).unwrap(), IsoSearch::Found { .. }));
        }
        // the kernel inclusion is 1 ↦ 2
        assert_eq!(parts.kernel_mono.apply(&[1]), vec![2]);
        let id = exact_parts(&Morphism::identity(&r));
        assert!(id.kernel.is_zero() && id.cokernel.is_zero());
        let zero = exact_parts(&Morphism::zero(&r, &s));
        assert_eq!(zero.kernel.order(), r.order());
        assert_eq!(zero.cokernel.order(), s.order());
    }

    #[test]
    fn direct_sums() {
        let z4 = zn_algebra(4);
        let r = cyclic(&z4, 4);
        let s = cyclic(&z4, 2);
        let zero = Arc::new(AlgModule::zero(z4.clone()));
        let ds = direct_sum(&z4, &[r.clone(), s.clone()]).unwrap();
        assert_eq!(ds.module.order().value(), Some(8));
        for (i, p) in ds.projections.iter().enumerate() {
            for (j, e) in ds.injections.iter().enumerate() {
                let pe = compose(p, e).unwrap();
                assert_eq!(pe.is_zero(), i != j);
                if i == j {
                    assert_eq!(pe, Morphism::identity(&[r.clone(), s.clone()][i]));
                }
            }
        }
        let sum = compose(&ds.injections[0], &ds.projections[0])
            .unwrap()
            .add(&compose(&ds.injections[1], &ds.projections[1]).unwrap())
            .unwrap();
        assert_eq!(sum, Morphism::identity(&ds.module));
        let rz = direct_sum(&z4, &[r.clone(), zero]).unwrap();
        assert!(matches!(find_isomorphism(&rz.module, &r, 64).unwrap(), IsoSearch::Found { .. }));
        assert!(direct_sum(&z4, &[]).unwrap().module.is_zero());
    }

    #[test]
    fn duality() {
        let z4 = zn_algebra(4);
        let r = cyclic(&z4, 4);
        let s = cyclic(&z4, 2);
        let zero = Arc::new(AlgModule::zero(z4.clone()));
        assert!(dual(&zero).is_zero());
        for m in [&r, &s] {
            let d = dual(m);
            assert_eq!(d.order(), m.order());
            assert!(double_dual_evaluation(m).is_iso());
        }
        // D(S) is S again (Z/4 is commutative)
        let ds = dual(&s);
        let ds = Arc::new(AlgModule::from_parts(z4.clone(), ds.gens(), ds.relations().clone(), ds.actions().to_vec()));
        assert!(matches!(find_isomorphism(&ds, &s, 64).unwrap(), IsoSearch::Found { .. }));
        let a2 = a2_path();
        let p1 = Arc::new(AlgModule::regular(a2.clone()));
        assert!(double_dual_evaluation(&p1).is_iso());
        let f = mor(&r, &s, &[1]);
        let df = dual_morphism(&f);
        assert_eq!(df.source().order(), s.order());
    }

    #[test]
    fn factorizations() {
        let z4 = zn_algebra(4);
        let r = cyclic(&z4, 4);
        let s = cyclic(&z4, 2);
        let id = Morphism::identity(&r);
        let two = mor(&r, &r, &[2]);
        assert!(factor_through(&id, &two).unwrap().is_none());
        let h = factor_through(&two, &two).unwrap().unwrap();
        assert_eq!(compose(&two, &h).unwrap(), two);
        let z = Morphism::zero(&r, &r);
        assert!(
            factor_through(&z, &two).unwrap().unwrap().is_zero()
                || compose(&two, &factor_through(&z, &two).unwrap().unwrap()).unwrap().is_zero()
        );
        let q = mor(&r, &s, &[1]);
        let h = factor_through_left(&two, &q).unwrap().unwrap();
        assert_eq!(compose(&h, &q).unwrap(), two);
        assert!(factor_through_left(&id, &q).unwrap().is_none());
    }

    #[test]
    fn free_cover_is_epi() {
        let a2 = a2_path();
        let p1 = Arc::new(AlgModule::regular(a2.clone()));
        let ds = direct_sum(&a2, &[p1.clone(), p1.clone()]).unwrap();
        let (_, cover) = free_cover(&ds.module);
        assert!(cover.is_epi());
    }

    fn small_module() -> impl Strategy<Value = (u32, u32)> {
        prop::sample::select(vec![(4u32, 1u32), (4, 2), (4, 4), (9, 3), (9, 9), (8, 2), (8, 4)])
    }

    proptest! {
        #[test]
        fn factor_through_is_exact_on_cyclics(
            (n, a) in small_module(), b in 0usize..3, c in 0usize..3, fv in 0i64..9, gv in 0i64..9
        ) {
            let alg = zn_algebra(n);
            let divs: Vec<u32> = (1..=n).filter(|k| n % k == 0 && *k > 1).collect();
            let ma = cyclic(&alg, divs[b % divs.len()]);
            let mb = cyclic(&alg, divs[c % divs.len()]);
            let mc = cyclic(&alg, if a > 1 { a } else { n });
            let fs = hom_group(&ma, &mc).unwrap().elements(256).unwrap();
            let gs = hom_group(&mb, &mc).unwrap().elements(256).unwrap();
            let f = &fs[fv as usize % fs.len()];
            let g = &gs[gv as usize % gs.len()];
            let hs = hom_group(&ma, &mb).unwrap().elements(256).unwrap();
            let exists = hs.iter().any(|h| compose(g, h).unwrap() == *f);
            match factor_through(f, g).unwrap() {
                Some(h) => prop_assert_eq!(&compose(g, &h).unwrap(), f),
                None => prop_assert!(!exists),
            }
        }

        #[test]
        fn exactness_and_counting((n, a) in small_module(), b in 0usize..3, fv in 0usize..16) {
            let alg = zn_algebra(n);
            let divs: Vec<u32> = (1..=n).filter(|k| n % k == 0 && *k > 1).collect();
            let m = cyclic(&alg, if a > 1 { a } else { n });
            let t = cyclic(&alg, divs[b % divs.len()]);
            let ds = direct_sum(&alg, &[m.clone(), t.clone()]).unwrap();
            let fs = hom_group(&ds.module, &t).unwrap().elements(1024).unwrap();
            let f = &fs[fv % fs.len()];
            let p = exact_parts(f);
            prop_assert!(compose(f, &p.kernel_mono).unwrap().is_zero());
            prop_assert!(compose(&p.cokernel_epi, f).unwrap().is_zero());
            prop_assert_eq!(compose(&p.image_mono, &p.image_epi).unwrap(), f.clone());
            prop_assert_eq!(ds.module.order(), p.kernel.order().mul(&p.image.order()));
            prop_assert_eq!(
                hom_group(&ds.module, &t).unwrap().order().value().unwrap() as usize,
                brute_hom_order(&ds.module, &t)
            );
        }
    }
}
