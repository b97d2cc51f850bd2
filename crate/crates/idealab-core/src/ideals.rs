//! Ideals of a module category (or of its stable quotient) over a finite
//! universe of objects.
//!
//! An ideal is defined intrinsically, by generators or by an operation on
//! other ideals, and caches its components on `U × U`. Components off the
//! universe are computed on demand from the same definition. Operations that
//! quantify over all objects (annihilators of derived ideals, products,
//! conductors) range over `U`, which is exact when `U` lists every
//! indecomposable up to isomorphism.

use alloc::borrow::Cow;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::algcat::{
    compose, hom_group, projective_part, quotient_generators, same_object, AlgModule, FiniteAlgebra, HomGroup, Morphism,
};
use crate::error::{invalid, Error, Result};
use crate::znlin::{coefficient_preimage, combine, CanonicalSubgroup, ZnMatrix};

/// A finite list of objects with cached Hom groups. In a stable universe
/// the zero subgroup of each Hom group also contains the maps factoring
/// through projectives.
#[derive(Debug)]
pub struct Universe {
    algebra: Arc<FiniteAlgebra>,
    names: Vec<String>,
    objects: Vec<Arc<AlgModule>>,
    stable: bool,
    homs: Vec<HomGroup>,
}

impl Universe {
    pub fn new(algebra: Arc<FiniteAlgebra>, entries: Vec<(String, Arc<AlgModule>)>) -> Result<Arc<Self>> {
        Self::build(algebra, entries, false)
    }

    /// The same objects viewed in the stable category.
    pub fn stable(algebra: Arc<FiniteAlgebra>, entries: Vec<(String, Arc<AlgModule>)>) -> Result<Arc<Self>> {
        Self::build(algebra, entries, true)
    }

    fn build(algebra: Arc<FiniteAlgebra>, entries: Vec<(String, Arc<AlgModule>)>, stable: bool) -> Result<Arc<Self>> {
        if entries.iter().any(|(_, m)| *m.algebra() != algebra) {
            return invalid("universe object over a different algebra");
        }
        let (names, objects): (Vec<_>, Vec<_>) = entries.into_iter().unzip();
        let mut u = Universe { algebra, names, objects, stable, homs: Vec::new() };
        let mut homs = Vec::with_capacity(u.objects.len() * u.objects.len());
        for a in &u.objects {
            for b in &u.objects {
                homs.push(u.compute_hom(a, b)?);
            }
        }
        u.homs = homs;
        Ok(Arc::new(u))
    }

    fn compute_hom(&self, a: &Arc<AlgModule>, b: &Arc<AlgModule>) -> Result<HomGroup> {
        let h = hom_group(a, b)?;
        if !self.stable {
            return Ok(h);
        }
        let p = projective_part(a, b)?;
        Ok(HomGroup::from_space(a, b, h.space().clone(), h.zero().sum_unchecked(&p)))
    }

    pub fn algebra(&self) -> &Arc<FiniteAlgebra> {
        &self.algebra
    }
    pub fn len(&self) -> usize {
        self.objects.len()
    }
    pub fn is_empty(&self) -> bool {
        self.objects.is_empty()
    }
    pub fn is_stable(&self) -> bool {
        self.stable
    }
    pub fn objects(&self) -> &[Arc<AlgModule>] {
        &self.objects
    }
    pub fn object(&self, i: usize) -> &Arc<AlgModule> {
        &self.objects[i]
    }
    pub fn names(&self) -> &[String] {
        &self.names
    }
    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }
    pub fn index_of(&self, m: &Arc<AlgModule>) -> Option<usize> {
        self.objects.iter().position(|o| same_object(o, m))
    }
    pub fn index_of_name(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
    pub fn hom_at(&self, i: usize, j: usize) -> &HomGroup {
        &self.homs[i * self.objects.len() + j]
    }

    /// `Hom(A, B)` for arbitrary objects, cached on the universe.
    pub fn hom(&self, a: &Arc<AlgModule>, b: &Arc<AlgModule>) -> Result<Cow<'_, HomGroup>> {
        match (self.index_of(a), self.index_of(b)) {
            (Some(i), Some(j)) => Ok(Cow::Borrowed(self.hom_at(i, j))),
            _ => Ok(Cow::Owned(self.compute_hom(a, b)?)),
        }
    }

    /// Whether `f` is zero in this category.
    pub fn is_zero(&self, f: &Morphism) -> Result<bool> {
        Ok(self.hom(f.source(), f.target())?.zero().contains_vec(&f.flat()))
    }

    /// Equality of parallel morphisms in this category.
    pub fn equal(&self, f: &Morphism, g: &Morphism) -> Result<bool> {
        self.is_zero(&f.sub(g)?)
    }
}

/// Which side an annihilator or conductor is taken on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

/// Lattice operation selector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LatticeOp {
    Sum,
    Meet,
}

#[derive(Debug)]
enum IdealDef {
    Generated(Vec<Morphism>),
    Full,
    Sum(Ideal, Ideal),
    Meet(Ideal, Ideal),
    Product(Ideal, Ideal),
    LeftAnn(Ideal),
    RightAnn(Ideal),
    /// `ℓ(I : J) = {f : f∘j ∈ I for j ∈ J}`.
    LeftConductor(Ideal, Ideal),
    /// `r(I : J) = {f : i∘f ∈ J for i ∈ I}`.
    RightConductor(Ideal, Ideal),
}

/// An ideal with its components cached on `U × U`.
#[derive(Clone, Debug)]
pub struct Ideal {
    universe: Arc<Universe>,
    def: Arc<IdealDef>,
    cache: Vec<CanonicalSubgroup>,
}

impl PartialEq for Ideal {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.universe, &other.universe) && self.cache == other.cache
    }
}

impl Eq for Ideal {}

/// One linear test on `Hom(A, B)`: `pre · F · post` must land in `target`.
struct Test<'a> {
    pre: Option<ZnMatrix>,
    post: Option<ZnMatrix>,
    target: Cow<'a, CanonicalSubgroup>,
}

/// Lifted subgroup of `hom` cut out by the tests.
fn constrained(hom: &HomGroup, tests: &[Test<'_>]) -> CanonicalSubgroup {
    if tests.is_empty() {
        return hom.space().clone();
    }
    let n = hom.space().modulus();
    let width: usize = tests.iter().map(|t| t.target.dim()).sum();
    let mut target_gens = Vec::new();
    let mut offset = 0;
    for t in tests {
        for r in t.target.basis() {
            let mut v = vec![0; width];
            v[offset..offset + r.len()].copy_from_slice(r);
            target_gens.push(v);
        }
        offset += t.target.dim();
    }
    let target = CanonicalSubgroup::from_generators(n, width, &target_gens);
    let gens = hom.generators();
    let images: Vec<Vec<u32>> = gens
        .iter()
        .map(|s| {
            let mut v = Vec::with_capacity(width);
            for t in tests {
                let mut m = s.matrix().clone();
                if let Some(pre) = &t.pre {
                    m = pre.mul(&m).expect("shapes agree");
                }
                if let Some(post) = &t.post {
                    m = m.mul(post).expect("shapes agree");
                }
                v.extend_from_slice(m.data());
            }
            v
        })
        .collect();
    let flats: Vec<Vec<u32>> = gens.iter().map(|g| g.flat()).collect();
    let combos: Vec<Vec<u32>> =
        coefficient_preimage(&images, &target).iter().map(|c| combine(c, &flats, hom.space().dim(), n)).collect();
    hom.zero().extend(&combos)
}

impl Ideal {
    fn build(universe: &Arc<Universe>, def: IdealDef) -> Result<Ideal> {
        let mut ideal = Ideal { universe: universe.clone(), def: Arc::new(def), cache: Vec::new() };
        let mut cache = Vec::with_capacity(universe.len() * universe.len());
        for a in universe.objects() {
            for b in universe.objects() {
                cache.push(ideal.compute(a, b)?);
            }
        }
        ideal.cache = cache;
        Ok(ideal)
    }

    /// The smallest ideal containing the given morphisms.
    pub fn generate(universe: &Arc<Universe>, generators: Vec<Morphism>) -> Result<Ideal> {
        if generators.iter().any(|g| *g.source().algebra() != universe.algebra) {
            return invalid("generator over a different algebra");
        }
        Self::build(universe, IdealDef::Generated(generators))
    }

    pub fn zero(universe: &Arc<Universe>) -> Ideal {
        Self::build(universe, IdealDef::Generated(Vec::new())).expect("the zero ideal always builds")
    }

    pub fn full(universe: &Arc<Universe>) -> Ideal {
        Self::build(universe, IdealDef::Full).expect("the full ideal always builds")
    }

    /// The ideal of morphisms factoring through sums of the given universe
    /// objects.
    pub fn object_ideal(universe: &Arc<Universe>, objects: &[usize]) -> Result<Ideal> {
        let gens = objects.iter().map(|&i| Morphism::identity(universe.object(i))).collect();
        Self::generate(universe, gens)
    }

    fn check_same(&self, other: &Ideal) -> Result<()> {
        if !Arc::ptr_eq(&self.universe, &other.universe) {
            return Err(Error::Input("ideals over different universes".into()));
        }
        Ok(())
    }

    pub fn sum(&self, other: &Ideal) -> Result<Ideal> {
        self.check_same(other)?;
        if let (IdealDef::Generated(a), IdealDef::Generated(b)) = (&*self.def, &*other.def) {
            let mut gens = a.clone();
            gens.extend(b.iter().cloned());
            return Self::generate(&self.universe, gens);
        }
        Self::build(&self.universe, IdealDef::Sum(self.clone(), other.clone()))
    }

    pub fn meet(&self, other: &Ideal) -> Result<Ideal> {
        self.check_same(other)?;
        Self::build(&self.universe, IdealDef::Meet(self.clone(), other.clone()))
    }

    pub fn lattice_op(&self, other: &Ideal, op: LatticeOp) -> Result<Ideal> {
        match op {
            LatticeOp::Sum => self.sum(other),
            LatticeOp::Meet => self.meet(other),
        }
    }

    /// `self · other = span{i ∘ j}` with `i ∈ self`, `j ∈ other`.
    pub fn product(&self, other: &Ideal) -> Result<Ideal> {
        self.check_same(other)?;
        Self::build(&self.universe, IdealDef::Product(self.clone(), other.clone()))
    }

    pub fn left_annihilator(&self) -> Ideal {
        Self::build(&self.universe, IdealDef::LeftAnn(self.clone())).expect("annihilators build")
    }

    pub fn right_annihilator(&self) -> Ideal {
        Self::build(&self.universe, IdealDef::RightAnn(self.clone())).expect("annihilators build")
    }

    pub fn annihilator(&self, side: Side) -> Ideal {
        match side {
            Side::Left => self.left_annihilator(),
            Side::Right => self.right_annihilator(),
        }
    }

    /// `ℓ(self : other) = {f : f∘j ∈ self for all j ∈ other}`.
    pub fn left_conductor(&self, other: &Ideal) -> Result<Ideal> {
        self.check_same(other)?;
        Self::build(&self.universe, IdealDef::LeftConductor(self.clone(), other.clone()))
    }

    /// `r(self : other) = {f : i∘f ∈ other for all i ∈ self}`.
    pub fn right_conductor(&self, other: &Ideal) -> Result<Ideal> {
        self.check_same(other)?;
        Self::build(&self.universe, IdealDef::RightConductor(self.clone(), other.clone()))
    }

    pub fn conductor(&self, other: &Ideal, side: Side) -> Result<Ideal> {
        match side {
            Side::Left => self.left_conductor(other),
            Side::Right => self.right_conductor(other),
        }
    }

    pub fn universe(&self) -> &Arc<Universe> {
        &self.universe
    }

    /// Whether the ideal was given by explicit generators.
    pub fn is_generated(&self) -> bool {
        matches!(&*self.def, IdealDef::Generated(_))
    }

    /// Generators: the defining list for generated ideals, otherwise the
    /// cached components, which generate the ideal when `U` lists all
    /// indecomposables.
    pub fn generators(&self) -> Vec<Morphism> {
        if let IdealDef::Generated(g) = &*self.def {
            return g.clone();
        }
        let n = self.universe.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let hom = self.universe.hom_at(i, j);
                for v in quotient_generators(&self.cache[i * n + j], hom.zero()) {
                    out.push(hom.morphism(&v));
                }
            }
        }
        out
    }

    /// Cached component at universe indices `(i, j)`.
    pub fn component_at(&self, i: usize, j: usize) -> &CanonicalSubgroup {
        &self.cache[i * self.universe.len() + j]
    }

    /// Component `I(A, B)` for arbitrary objects.
    pub fn component(&self, a: &Arc<AlgModule>, b: &Arc<AlgModule>) -> Result<Cow<'_, CanonicalSubgroup>> {
        if !self.cache.is_empty() {
            if let (Some(i), Some(j)) = (self.universe.index_of(a), self.universe.index_of(b)) {
                return Ok(Cow::Borrowed(self.component_at(i, j)));
            }
        }
        self.compute(a, b).map(Cow::Owned)
    }

    /// Generators of `I(A, B)` modulo zero.
    pub fn component_generators(&self, a: &Arc<AlgModule>, b: &Arc<AlgModule>) -> Result<Vec<Morphism>> {
        let hom = self.universe.hom(a, b)?;
        let comp = self.component(a, b)?;
        Ok(quotient_generators(&comp, hom.zero()).iter().map(|v| hom.morphism(v)).collect())
    }

    pub fn contains(&self, f: &Morphism) -> Result<bool> {
        Ok(self.component(f.source(), f.target())?.contains_vec(&f.flat()))
    }

    /// `other ⊆ self` on the universe.
    pub fn includes(&self, other: &Ideal) -> bool {
        self.cache.iter().zip(&other.cache).all(|(a, b)| a.contains_unchecked(b))
    }

    pub fn is_zero(&self) -> bool {
        let n = self.universe.len();
        (0..n).all(|i| (0..n).all(|j| *self.component_at(i, j) == *self.universe.hom_at(i, j).zero()))
    }

    /// Elements of the cached component, one canonical representative each.
    pub fn elements_at(&self, i: usize, j: usize, budget: u128) -> Option<Vec<Morphism>> {
        self.universe.hom_at(i, j).elements_of(self.component_at(i, j), budget)
    }

    fn compute(&self, a: &Arc<AlgModule>, b: &Arc<AlgModule>) -> Result<CanonicalSubgroup> {
        let u = &self.universe;
        let hom = u.hom(a, b)?;
        match &*self.def {
            IdealDef::Full => Ok(hom.space().clone()),
            IdealDef::Generated(gens) => {
                let mut flats = Vec::new();
                for g in gens {
                    let pre = u.hom(a, g.source())?;
                    let post = u.hom(g.target(), b)?;
                    for x in pre.generators() {
                        let gx = compose(g, x)?;
                        for y in post.generators() {
                            flats.push(compose(y, &gx)?.flat());
                        }
                    }
                }
                Ok(hom.zero().extend(&flats))
            }
            IdealDef::Sum(i, j) => Ok(i.component(a, b)?.sum_unchecked(&*j.component(a, b)?)),
            IdealDef::Meet(i, j) => Ok(i.component(a, b)?.intersect_unchecked(&*j.component(a, b)?)),
            IdealDef::Product(i, j) => {
                let mut flats = Vec::new();
                for x in u.objects() {
                    let js = j.component_generators(a, x)?;
                    if js.is_empty() {
                        continue;
                    }
                    for ii in i.component_generators(x, b)? {
                        for jj in &js {
                            flats.push(compose(&ii, jj)?.flat());
                        }
                    }
                }
                Ok(hom.zero().extend(&flats))
            }
            IdealDef::LeftAnn(inner) => {
                // j with j∘i = 0 for every i ∈ inner(X, A)
                let mut tests = Vec::new();
                for (i, x) in inner.tests_into(a)? {
                    tests.push(Test {
                        pre: Some(i.matrix().clone()),
                        post: None,
                        target: Cow::Owned(u.hom(&x, b)?.zero().clone()),
                    });
                }
                Ok(constrained(&hom, &tests))
            }
            IdealDef::RightAnn(inner) => {
                let mut tests = Vec::new();
                for (j, y) in inner.tests_out_of(b)? {
                    tests.push(Test {
                        pre: None,
                        post: Some(j.matrix().clone()),
                        target: Cow::Owned(u.hom(a, &y)?.zero().clone()),
                    });
                }
                Ok(constrained(&hom, &tests))
            }
            IdealDef::LeftConductor(outer, inner) => {
                let mut tests = Vec::new();
                for (j, x) in inner.tests_into(a)? {
                    tests.push(Test {
                        pre: Some(j.matrix().clone()),
                        post: None,
                        target: Cow::Owned(outer.component(&x, b)?.into_owned()),
                    });
                }
                Ok(constrained(&hom, &tests))
            }
            IdealDef::RightConductor(outer, inner) => {
                let mut tests = Vec::new();
                for (i, y) in outer.tests_out_of(b)? {
                    tests.push(Test {
                        pre: None,
                        post: Some(i.matrix().clone()),
                        target: Cow::Owned(inner.component(a, &y)?.into_owned()),
                    });
                }
                Ok(constrained(&hom, &tests))
            }
        }
    }

    /// Morphisms `i : X → A` spanning `self(−, A)` as a right module over
    /// composition, with their domains.
    fn tests_into(&self, a: &Arc<AlgModule>) -> Result<Vec<(Morphism, Arc<AlgModule>)>> {
        let u = &self.universe;
        let mut out = Vec::new();
        if let IdealDef::Generated(gens) = &*self.def {
            for g in gens {
                for y in u.hom(g.target(), a)?.generators() {
                    out.push((compose(y, g)?, g.source().clone()));
                }
            }
        } else {
            for x in u.objects() {
                for i in self.component_generators(x, a)? {
                    out.push((i, x.clone()));
                }
            }
        }
        Ok(out)
    }

    /// Morphisms `j : B → Y` spanning `self(B, −)`, with their codomains.
    fn tests_out_of(&self, b: &Arc<AlgModule>) -> Result<Vec<(Morphism, Arc<AlgModule>)>> {
        let u = &self.universe;
        let mut out = Vec::new();
        if let IdealDef::Generated(gens) = &*self.def {
            for g in gens {
                for x in u.hom(b, g.source())?.generators() {
                    out.push((compose(g, x)?, g.target().clone()));
                }
            }
        } else {
            for y in u.objects() {
                for j in self.component_generators(b, y)? {
                    out.push((j, y.clone()));
                }
            }
        }
        Ok(out)
    }

    /// Universe indices `X` with `1_X` in the ideal.
    pub fn objects(&self) -> Vec<usize> {
        (0..self.universe.len())
            .filter(|&i| {
                let id = Morphism::identity(self.universe.object(i));
                self.component_at(i, i).contains_vec(&id.flat())
            })
            .collect()
    }

    /// `Ob(I)` within `U`, and whether `I` equals the ideal of maps
    /// factoring through sums of those objects (exactly, on `U`).
    pub fn object_analysis(&self) -> ObjectAnalysis {
        let objects = self.objects();
        let generated = Ideal::object_ideal(&self.universe, &objects).expect("identities generate");
        ObjectAnalysis { is_object_ideal: generated == *self, objects }
    }

    /// Checks that every cached component is closed under composition with
    /// Hom generators on both sides.
    pub fn is_saturated(&self) -> bool {
        let u = &self.universe;
        let n = u.len();
        for i in 0..n {
            for j in 0..n {
                let comp = self.component_at(i, j);
                let hom = u.hom_at(i, j);
                for v in comp.basis() {
                    let f = hom.morphism(v);
                    for k in 0..n {
                        for y in u.hom_at(j, k).generators() {
                            let yf = compose(y, &f).expect("composable");
                            if !self.component_at(i, k).contains_vec(&yf.flat()) {
                                return false;
                            }
                        }
                        for x in u.hom_at(k, i).generators() {
                            let fx = compose(&f, x).expect("composable");
                            if !self.component_at(k, j).contains_vec(&fx.flat()) {
                                return false;
                            }
                        }
                    }
                }
            }
        }
        true
    }
}

/// Result of [`Ideal::object_analysis`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ObjectAnalysis {
    pub objects: Vec<usize>,
    pub is_object_ideal: bool,
}

/// `Hom(i, j) = 0`: `j ∘ x ∘ i = 0` for every `x : cod(i) → dom(j)`.
pub fn is_hom_orthogonal(universe: &Universe, i: &Morphism, j: &Morphism) -> Result<bool> {
    let hom = universe.hom(i.target(), j.source())?;
    let zero = universe.hom(i.source(), j.target())?;
    for x in hom.generators() {
        let jxi = compose(j, &compose(x, i)?)?;
        if !zero.zero().contains_vec(&jxi.flat()) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::algcat::tests::{a2_path, cyclic, dual_numbers, zn_algebra};
    use alloc::collections::BTreeSet;
    use alloc::string::ToString;
    use proptest::prelude::*;

    pub(crate) struct Fixture {
        pub universe: Arc<Universe>,
    }

    pub(crate) fn z4() -> Fixture {
        let alg = zn_algebra(4);
        let r = cyclic(&alg, 4);
        let s = cyclic(&alg, 2);
        Fixture { universe: Universe::new(alg, vec![("R".to_string(), r), ("S".to_string(), s)]).unwrap() }
    }

    pub(crate) fn proj_z4() -> Fixture {
        let alg = zn_algebra(4);
        let r = cyclic(&alg, 4);
        Fixture { universe: Universe::new(alg, vec![("R".to_string(), r)]).unwrap() }
    }

    pub(crate) fn z9() -> Fixture {
        let alg = zn_algebra(9);
        let r = cyclic(&alg, 9);
        let s = cyclic(&alg, 3);
        Fixture { universe: Universe::new(alg, vec![("R".to_string(), r), ("S".to_string(), s)]).unwrap() }
    }

    pub(crate) fn f2x2() -> Fixture {
        let alg = dual_numbers();
        let r = Arc::new(AlgModule::regular(alg.clone()));
        let k = Arc::new(
            AlgModule::new(alg.clone(), 1, &[], vec![ZnMatrix::identity(2, 1), ZnMatrix::zeros(2, 1, 1)]).unwrap(),
        );
        Fixture { universe: Universe::new(alg, vec![("R".to_string(), r), ("k".to_string(), k)]).unwrap() }
    }

    pub(crate) fn a2() -> Fixture {
        let alg = a2_path();
        let m = |rows: usize, e: &[i64]| ZnMatrix::new(2, rows, rows, e).unwrap();
        let p1 = Arc::new(
            AlgModule::new(alg.clone(), 2, &[], vec![m(2, &[1, 0, 0, 0]), m(2, &[0, 0, 0, 1]), m(2, &[0, 1, 0, 0])])
                .unwrap(),
        );
        let p2 = Arc::new(AlgModule::new(alg.clone(), 1, &[], vec![m(1, &[0]), m(1, &[1]), m(1, &[0])]).unwrap());
        let s1 = Arc::new(AlgModule::new(alg.clone(), 1, &[], vec![m(1, &[1]), m(1, &[0]), m(1, &[0])]).unwrap());
        Fixture {
            universe: Universe::new(alg, vec![("P1".to_string(), p1), ("P2".to_string(), p2), ("S1".to_string(), s1)])
                .unwrap(),
        }
    }

    pub(crate) fn all_fixtures() -> Vec<Fixture> {
        vec![z4(), z9(), f2x2(), a2()]
    }

    fn obj(f: &Fixture, name: &str) -> Arc<AlgModule> {
        f.universe.object(f.universe.index_of_name(name).unwrap()).clone()
    }

    fn mor(s: &Arc<AlgModule>, t: &Arc<AlgModule>, e: &[i64]) -> Morphism {
        Morphism::new(s.clone(), t.clone(), ZnMatrix::new(s.modulus(), s.gens(), t.gens(), e).unwrap()).unwrap()
    }

    type ElementSets = Vec<BTreeSet<Vec<u32>>>;

    /// Brute-force closure of a set of morphisms under addition and
    /// composition with every morphism between universe objects.
    fn brute_closure(u: &Universe, gens: &[Morphism]) -> ElementSets {
        let n = u.len();
        let all: Vec<Vec<Morphism>> = (0..n * n).map(|k| u.hom_at(k / n, k % n).elements(4096).unwrap()).collect();
        let mut sets: ElementSets = vec![BTreeSet::new(); n * n];
        for k in 0..n * n {
            sets[k].insert(u.hom_at(k / n, k % n).zero().reduce(&vec![0; u.hom_at(k / n, k % n).space().dim()]));
        }
        for g in gens {
            let (i, j) = (u.index_of(g.source()).unwrap(), u.index_of(g.target()).unwrap());
            sets[i * n + j].insert(u.hom_at(i, j).zero().reduce(&g.flat()));
        }
        loop {
            let mut changed = false;
            for i in 0..n {
                for j in 0..n {
                    let current: Vec<Vec<u32>> = sets[i * n + j].iter().cloned().collect();
                    for v in &current {
                        let f = u.hom_at(i, j).morphism(v);
                        for k in 0..n {
                            for y in &all[j * n + k] {
                                let w = u.hom_at(i, k).zero().reduce(&compose(y, &f).unwrap().flat());
                                changed |= sets[i * n + k].insert(w);
                            }
                            for x in &all[k * n + i] {
                                let w = u.hom_at(k, j).zero().reduce(&compose(&f, x).unwrap().flat());
                                changed |= sets[k * n + j].insert(w);
                            }
                        }
                        for w in &current {
                            let s = u.hom_at(i, j).zero().reduce(&f.add(&u.hom_at(i, j).morphism(w)).unwrap().flat());
                            changed |= sets[i * n + j].insert(s);
                        }
                    }
                }
            }
            if !changed {
                return sets;
            }
        }
    }

    fn cache_sets(ideal: &Ideal) -> ElementSets {
        let u = ideal.universe();
        let n = u.len();
        (0..n * n)
            .map(|k| {
                ideal
                    .elements_at(k / n, k % n, 4096)
                    .unwrap()
                    .into_iter()
                    .map(|f| u.hom_at(k / n, k % n).zero().reduce(&f.flat()))
                    .collect()
            })
            .collect()
    }

    /// Brute-force left annihilator on the universe.
    fn brute_left_ann(u: &Universe, sets: &ElementSets) -> ElementSets {
        let n = u.len();
        let mut out = vec![BTreeSet::new(); n * n];
        for a in 0..n {
            for b in 0..n {
                for j in u.hom_at(a, b).elements(4096).unwrap() {
                    let ok = (0..n).all(|x| {
                        sets[x * n + a].iter().all(|v| {
                            let i = u.hom_at(x, a).morphism(v);
                            u.is_zero(&compose(&j, &i).unwrap()).unwrap()
                        })
                    });
                    if ok {
                        out[a * n + b].insert(u.hom_at(a, b).zero().reduce(&j.flat()));
                    }
                }
            }
        }
        out
    }

    #[test]
    fn generated_ideals_match_brute_closure() {
        let f = proj_z4();
        let r = obj(&f, "R");
        let gen2 = Ideal::generate(&f.universe, vec![mor(&r, &r, &[2])]).unwrap();
        let comp: BTreeSet<Vec<u32>> = gen2.elements_at(0, 0, 16).unwrap().iter().map(|m| m.flat()).collect();
        assert_eq!(comp, [vec![0], vec![2]].into_iter().collect());
        assert!(Ideal::generate(&f.universe, vec![]).unwrap().is_zero());

        let f = z4();
        let (r, s) = (obj(&f, "R"), obj(&f, "S"));
        let socle = Ideal::generate(&f.universe, vec![Morphism::identity(&s)]).unwrap();
        let rr: BTreeSet<Vec<u32>> = socle.elements_at(0, 0, 16).unwrap().iter().map(|m| m.flat()).collect();
        assert_eq!(rr, [vec![0], vec![2]].into_iter().collect());
        assert_eq!(cache_sets(&socle), brute_closure(&f.universe, &[Morphism::identity(&s)]));
        assert!(socle.is_saturated());
        let gen2 = Ideal::generate(&f.universe, vec![mor(&r, &r, &[2])]).unwrap();
        assert_eq!(cache_sets(&gen2), brute_closure(&f.universe, &[mor(&r, &r, &[2])]));
    }

    #[test]
    fn membership() {
        let f = proj_z4();
        let r = obj(&f, "R");
        let gen2 = Ideal::generate(&f.universe, vec![mor(&r, &r, &[2])]).unwrap();
        assert!(gen2.contains(&mor(&r, &r, &[2])).unwrap());
        assert!(!gen2.contains(&Morphism::identity(&r)).unwrap());
        assert!(gen2.contains(&Morphism::zero(&r, &r)).unwrap());
        // an off-universe query: R ⊕ R
        let ds = crate::algcat::direct_sum(r.algebra(), &[r.clone(), r.clone()]).unwrap();
        let twice = Morphism::identity(&ds.module).scale(2);
        assert!(gen2.contains(&twice).unwrap());
        assert!(!gen2.contains(&Morphism::identity(&ds.module)).unwrap());
    }

    #[test]
    fn lattice_and_products() {
        let f = proj_z4();
        let r = obj(&f, "R");
        let gen2 = Ideal::generate(&f.universe, vec![mor(&r, &r, &[2])]).unwrap();
        let zero = Ideal::zero(&f.universe);
        let full = Ideal::full(&f.universe);
        assert_eq!(gen2.sum(&zero).unwrap(), gen2);
        assert_eq!(gen2.meet(&full).unwrap(), gen2);
        assert!(gen2.product(&gen2).unwrap().is_zero());
        assert_eq!(full.product(&gen2).unwrap(), gen2);
        assert_eq!(gen2.product(&full).unwrap(), gen2);

        let f = z4();
        let (r, s) = (obj(&f, "R"), obj(&f, "S"));
        let socle = Ideal::generate(&f.universe, vec![Morphism::identity(&s)]).unwrap();
        let gen2 = Ideal::generate(&f.universe, vec![mor(&r, &r, &[2])]).unwrap();
        let sum = socle.sum(&gen2).unwrap();
        assert_eq!(sum.component_at(0, 0).order().value(), Some(2));
        assert_eq!(socle.product(&socle).unwrap(), socle);
    }

    #[test]
    fn annihilators_and_conductors() {
        let f = proj_z4();
        let r = obj(&f, "R");
        let gen2 = Ideal::generate(&f.universe, vec![mor(&r, &r, &[2])]).unwrap();
        let full = Ideal::full(&f.universe);
        let zero = Ideal::zero(&f.universe);
        assert_eq!(gen2.left_annihilator(), gen2);
        assert_eq!(gen2.right_annihilator(), gen2);
        assert_eq!(zero.left_annihilator(), full);
        assert!(full.left_annihilator().is_zero());
        assert_eq!(gen2.left_conductor(&zero).unwrap(), full);
        assert_eq!(full.left_conductor(&gen2).unwrap(), full);
        assert_eq!(gen2.left_conductor(&full).unwrap(), gen2);
        assert!(is_hom_orthogonal(&f.universe, &mor(&r, &r, &[2]), &mor(&r, &r, &[2])).unwrap());
        assert!(!is_hom_orthogonal(&f.universe, &Morphism::identity(&r), &Morphism::identity(&r)).unwrap());

        let f = z4();
        let (r, s) = (obj(&f, "R"), obj(&f, "S"));
        // Hom(S, R) = {0, 1 ↦ 2} and the quotient kills 2, so the pair is
        // orthogonal
        let q = mor(&r, &s, &[1]);
        let brute = f
            .universe
            .hom_at(1, 0)
            .elements(16)
            .unwrap()
            .iter()
            .all(|x| compose(&q, &compose(x, &Morphism::identity(&s)).unwrap()).unwrap().is_zero());
        assert!(brute);
        assert_eq!(is_hom_orthogonal(&f.universe, &Morphism::identity(&s), &q).unwrap(), brute);
        assert!(!is_hom_orthogonal(&f.universe, &Morphism::identity(&r), &q).unwrap());
    }

    #[test]
    fn object_analysis() {
        let f = proj_z4();
        let r = obj(&f, "R");
        let gen2 = Ideal::generate(&f.universe, vec![mor(&r, &r, &[2])]).unwrap();
        assert!(gen2.objects().is_empty());
        assert!(!gen2.object_analysis().is_object_ideal);
        let full = Ideal::full(&f.universe);
        assert_eq!(full.objects(), vec![0]);
        assert!(full.object_analysis().is_object_ideal);
        let f = z4();
        let s = obj(&f, "S");
        let socle = Ideal::generate(&f.universe, vec![Morphism::identity(&s)]).unwrap();
        assert!(socle.objects().contains(&1));
        assert!(socle.object_analysis().is_object_ideal);
    }

    /// Every Hom element of every fixture as a candidate generator.
    fn corpus_generators(f: &Fixture) -> Vec<Morphism> {
        let u = &f.universe;
        let n = u.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                out.extend(u.hom_at(i, j).elements(64).unwrap().into_iter().filter(|m| !m.is_zero()));
            }
        }
        out
    }

    #[test]
    fn left_annihilator_matches_brute_force() {
        for f in all_fixtures() {
            for g in corpus_generators(&f) {
                let ideal = Ideal::generate(&f.universe, vec![g.clone()]).unwrap();
                let sets = brute_closure(&f.universe, &[g]);
                assert_eq!(cache_sets(&ideal), sets);
                assert_eq!(cache_sets(&ideal.left_annihilator()), brute_left_ann(&f.universe, &sets));
            }
        }
    }

    fn fixture_and_pair() -> impl Strategy<Value = (usize, usize, usize)> {
        (0usize..4, 0usize..64, 0usize..64)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn annihilator_laws((fi, a, b) in fixture_and_pair()) {
            let f = &all_fixtures()[fi];
            let gens = corpus_generators(f);
            let i1 = Ideal::generate(&f.universe, vec![gens[a % gens.len()].clone()]).unwrap();
            let i2 = Ideal::generate(&f.universe, vec![gens[b % gens.len()].clone()]).unwrap();
            let l1 = i1.left_annihilator();
            let l2 = i2.left_annihilator();
            // orthogonality equals annihilation
            let n = f.universe.len();
            for x in 0..n {
                for y in 0..n {
                    for j in f.universe.hom_at(x, y).elements(64).unwrap() {
                        let orth = i1.generators().iter().all(|g| is_hom_orthogonal(&f.universe, g, &j).unwrap());
                        prop_assert_eq!(orth, l1.contains(&j).unwrap());
                    }
                }
            }
            prop_assert!(l1.product(&i1).unwrap().is_zero());
            prop_assert!(i1.product(&i1.right_annihilator()).unwrap().is_zero());
            prop_assert_eq!(i1.sum(&i2).unwrap().left_annihilator(), l1.meet(&l2).unwrap());
            prop_assert_eq!(i1.product(&i2).unwrap().left_annihilator(), l2.left_conductor(&i1).unwrap());
            prop_assert_eq!(
                i1.product(&i2).unwrap().right_annihilator(),
                i2.right_conductor(&i1.right_annihilator()).unwrap()
            );
            let rl = l1.right_annihilator();
            prop_assert_eq!(rl.left_annihilator().right_annihilator(), rl.clone());
            prop_assert!(rl.includes(&i1));
            // inclusion reversal
            let s = i1.sum(&i2).unwrap();
            prop_assert!(l1.includes(&s.left_annihilator()));
            // conductor maximality
            let c = l2.left_conductor(&i1).unwrap();
            prop_assert!(l2.includes(&c.product(&i1).unwrap()));
            for x in 0..n {
                for y in 0..n {
                    for h in f.universe.hom_at(x, y).elements(64).unwrap() {
                        if !c.contains(&h).unwrap() {
                            let bigger = Ideal::generate(&f.universe, {
                                let mut g = c.generators();
                                g.push(h.clone());
                                g
                            }).unwrap();
                            prop_assert!(!l2.includes(&bigger.product(&i1).unwrap()));
                        }
                    }
                }
            }
        }
    }
}
