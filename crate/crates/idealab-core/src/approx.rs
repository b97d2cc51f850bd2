//! Precovers, preenvelopes, ideal torsion pairs and preradicals in the
//! module category of a finite algebra.
//!
//! Every ideal is finitely generated here, so the coproduct construction
//! behind the Eklof–Trlifaj lemma is finite and serves as the canonical
//! precover and preenvelope builder.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::algcat::{
    compose, copair, direct_sum, exact_parts, free_cover, pair, quotient, submodule, AlgModule, Morphism,
};
use crate::error::{invalid, Error, Result};
use crate::ideals::{Ideal, Universe};
use crate::znlin::{coefficient_preimage, combine, solve_in_span, CanonicalSubgroup};
use crate::Verdict;

/// Default bound on the size of the coset searched by [`is_cover`].
pub const COVER_BUDGET: u128 = 4096;

/// `h` with `g ∘ h = f` in the universe's category, if one exists.
pub fn factors_through(u: &Universe, f: &Morphism, g: &Morphism) -> Result<Option<Morphism>> {
    let hom = u.hom(f.source(), g.source())?;
    let target = u.hom(f.source(), f.target())?;
    let images = hom.generators().iter().map(|s| compose(g, s).map(|m| m.flat())).collect::<Result<Vec<_>>>()?;
    Ok(solve_in_span(&images, target.zero(), &f.flat()).map(|c| {
        let flats: Vec<Vec<u32>> = hom.generators().iter().map(|s| s.flat()).collect();
        hom.morphism(&combine(&c, &flats, hom.space().dim(), hom.space().modulus()))
    }))
}

/// `h` with `h ∘ i = f` in the universe's category, if one exists.
pub fn factors_through_left(u: &Universe, f: &Morphism, i: &Morphism) -> Result<Option<Morphism>> {
    let hom = u.hom(i.target(), f.target())?;
    let target = u.hom(f.source(), f.target())?;
    let images = hom.generators().iter().map(|s| compose(s, i).map(|m| m.flat())).collect::<Result<Vec<_>>>()?;
    Ok(solve_in_span(&images, target.zero(), &f.flat()).map(|c| {
        let flats: Vec<Vec<u32>> = hom.generators().iter().map(|s| s.flat()).collect();
        hom.morphism(&combine(&c, &flats, hom.space().dim(), hom.space().modulus()))
    }))
}

/// Nonzero composites `g ∘ f` with `f` an ideal generator and `g` a Hom
/// generator `cod f → x`.
fn into_composites(ideal: &Ideal, x: &Arc<AlgModule>) -> Result<Vec<Morphism>> {
    let u = ideal.universe();
    let mut out = Vec::new();
    for f in ideal.generators() {
        let hom = u.hom(f.target(), x)?;
        for g in hom.generators() {
            let gf = compose(g, &f)?;
            if !gf.is_zero() {
                out.push(gf);
            }
        }
    }
    Ok(out)
}

/// Nonzero composites `f ∘ g` with `g` a Hom generator `x → dom f`.
fn out_of_composites(ideal: &Ideal, x: &Arc<AlgModule>) -> Result<Vec<Morphism>> {
    let u = ideal.universe();
    let mut out = Vec::new();
    for f in ideal.generators() {
        let hom = u.hom(x, f.source())?;
        for g in hom.generators() {
            let fg = compose(&f, g)?;
            if !fg.is_zero() {
                out.push(fg);
            }
        }
    }
    Ok(out)
}

fn zero_module(x: &Arc<AlgModule>) -> Arc<AlgModule> {
    Arc::new(AlgModule::zero(x.algebra().clone()))
}

/// The coproduct of all generator composites into `x`.
pub fn et_precover(ideal: &Ideal, x: &Arc<AlgModule>) -> Result<Morphism> {
    let maps = into_composites(ideal, x)?;
    if maps.is_empty() {
        return Ok(Morphism::zero(&zero_module(x), x));
    }
    let sources: Vec<_> = maps.iter().map(|m| m.source().clone()).collect();
    copair(&direct_sum(x.algebra(), &sources)?, &maps)
}

/// The product of all generator composites out of `x`.
pub fn et_preenvelope(ideal: &Ideal, x: &Arc<AlgModule>) -> Result<Morphism> {
    let maps = out_of_composites(ideal, x)?;
    if maps.is_empty() {
        return Ok(Morphism::zero(x, &zero_module(x)));
    }
    let targets: Vec<_> = maps.iter().map(|m| m.target().clone()).collect();
    pair(&direct_sum(x.algebra(), &targets)?, &maps)
}

/// Lifted trace `Σ im(g ∘ f)` of the ideal in `x`.
pub fn trace(ideal: &Ideal, x: &Arc<AlgModule>) -> Result<CanonicalSubgroup> {
    let mut acc = x.relations().clone();
    for m in into_composites(ideal, x)? {
        acc = acc.sum_unchecked(&m.image_lifted());
    }
    Ok(acc)
}

/// Whether `i : T → X` lies in the ideal and every ideal morphism from a
/// universe object into `X` factors through it.
pub fn is_precover(ideal: &Ideal, i: &Morphism) -> Result<bool> {
    if !ideal.contains(i)? {
        return Ok(false);
    }
    let u = ideal.universe();
    for a in u.objects() {
        for h in ideal.component_generators(a, i.target())? {
            if factors_through(u, &h, i)?.is_none() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Dual of [`is_precover`].
pub fn is_preenvelope(ideal: &Ideal, j: &Morphism) -> Result<bool> {
    if !ideal.contains(j)? {
        return Ok(false);
    }
    let u = ideal.universe();
    for b in u.objects() {
        for h in ideal.component_generators(j.source(), b)? {
            if factors_through_left(u, &h, j)?.is_none() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Lifted subgroup of `End(T)` of the endomorphisms `h` with `i ∘ h = 0`.
fn right_annihilating_endos(u: &Universe, i: &Morphism) -> Result<CanonicalSubgroup> {
    let t = i.source();
    let end = u.hom(t, t)?;
    let zero = u.hom(t, i.target())?;
    let images = end.generators().iter().map(|h| compose(i, h).map(|m| m.flat())).collect::<Result<Vec<_>>>()?;
    let flats: Vec<Vec<u32>> = end.generators().iter().map(|h| h.flat()).collect();
    let combos: Vec<Vec<u32>> = coefficient_preimage(&images, zero.zero())
        .iter()
        .map(|c| combine(c, &flats, end.space().dim(), end.space().modulus()))
        .collect();
    Ok(end.zero().extend(&combos))
}

/// Lifted subgroup of `End(F)` of the endomorphisms `h` with `h ∘ j = 0`.
fn left_annihilating_endos(u: &Universe, j: &Morphism) -> Result<CanonicalSubgroup> {
    let f = j.target();
    let end = u.hom(f, f)?;
    let zero = u.hom(j.source(), f)?;
    let images = end.generators().iter().map(|h| compose(h, j).map(|m| m.flat())).collect::<Result<Vec<_>>>()?;
    let flats: Vec<Vec<u32>> = end.generators().iter().map(|h| h.flat()).collect();
    let combos: Vec<Vec<u32>> = coefficient_preimage(&images, zero.zero())
        .iter()
        .map(|c| combine(c, &flats, end.space().dim(), end.space().modulus()))
        .collect();
    Ok(end.zero().extend(&combos))
}

/// Every element of `1 + K` is an isomorphism, or undecided past `budget`.
fn coset_all_isos(u: &Universe, object: &Arc<AlgModule>, k: &CanonicalSubgroup, budget: u128) -> Result<Verdict> {
    let end = u.hom(object, object)?;
    let Some(elems) = end.elements_of(k, budget) else {
        return Ok(Verdict::Undecided);
    };
    let one = Morphism::identity(object);
    for h in elems {
        if !one.add(&h)?.is_iso() {
            return Ok(Verdict::Fail);
        }
    }
    Ok(Verdict::Pass)
}

/// Whether a precover is a cover: every `f` with `i ∘ f = i` is an
/// isomorphism. Errors when `i` is not a precover.
pub fn is_cover(i: &Morphism, ideal: &Ideal, budget: u128) -> Result<Verdict> {
    if !is_precover(ideal, i)? {
        return Err(Error::Input("morphism is not a precover".into()));
    }
    let u = ideal.universe();
    coset_all_isos(u, i.source(), &right_annihilating_endos(u, i)?, budget)
}

/// Dual of [`is_cover`].
pub fn is_envelope(j: &Morphism, ideal: &Ideal, budget: u128) -> Result<Verdict> {
    if !is_preenvelope(ideal, j)? {
        return Err(Error::Input("morphism is not a preenvelope".into()));
    }
    let u = ideal.universe();
    coset_all_isos(u, j.target(), &left_annihilating_endos(u, j)?, budget)
}

/// `0 → T(X) → X → F(X) → 0` for one universe object.
#[derive(Clone, Debug)]
pub struct TorsionSequence {
    pub object: usize,
    /// `T(X)` as a lifted subgroup of `X`.
    pub trace: CanonicalSubgroup,
    pub inclusion: Morphism,
    pub projection: Morphism,
}

impl TorsionSequence {
    fn at(universe: &Universe, object: usize, trace: CanonicalSubgroup) -> Self {
        let x = universe.object(object);
        let (_, inclusion) = submodule(x, &trace);
        let (_, projection) = quotient(x, &trace);
        TorsionSequence { object, trace, inclusion, projection }
    }

    pub fn torsion(&self) -> &Arc<AlgModule> {
        self.inclusion.source()
    }
    pub fn free(&self) -> &Arc<AlgModule> {
        self.projection.target()
    }
}

/// The ideal torsion pair `(r(ℓ(I)), ℓ(I))` with its sequences on `U`.
#[derive(Clone, Debug)]
pub struct TorsionPair {
    pub generating: Ideal,
    pub torsion: Ideal,
    pub free: Ideal,
    pub sequences: Vec<TorsionSequence>,
}

pub fn generated_torsion_pair(ideal: &Ideal) -> Result<TorsionPair> {
    let u = ideal.universe();
    let free = ideal.left_annihilator();
    let torsion = free.right_annihilator();
    let sequences =
        (0..u.len()).map(|x| Ok(TorsionSequence::at(u, x, trace(ideal, u.object(x))?))).collect::<Result<_>>()?;
    Ok(TorsionPair { generating: ideal.clone(), torsion, free, sequences })
}

/// One named boolean check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub holds: bool,
}

fn check(name: &str, holds: bool) -> Check {
    Check { name: name.into(), holds }
}

impl TorsionPair {
    pub fn universe(&self) -> &Arc<Universe> {
        self.torsion.universe()
    }

    /// Exactness, membership and annihilator identities.
    pub fn verify(&self) -> Result<Vec<Check>> {
        let mut mono = true;
        let mut epi = true;
        let mut exact = true;
        let mut i_in = true;
        let mut j_in = true;
        for s in &self.sequences {
            mono &= s.inclusion.is_mono();
            epi &= s.projection.is_epi();
            exact &= s.inclusion.image_lifted() == s.projection.kernel_lifted();
            i_in &= self.torsion.contains(&s.inclusion)?;
            j_in &= self.free.contains(&s.projection)?;
        }
        Ok(vec![
            check("inclusion monic", mono),
            check("projection epic", epi),
            check("exact", exact),
            check("inclusion in I", i_in),
            check("projection in J", j_in),
            check("J = l(I)", self.free == self.torsion.left_annihilator()),
            check("I = r(J)", self.torsion == self.free.right_annihilator()),
        ])
    }

    /// Whether `I` coincides with the ideal it was generated from.
    pub fn is_closed(&self) -> bool {
        self.torsion == self.generating
    }
}

/// Truth values of the four Salce conditions for a sequence `T → X → F`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SalceReport {
    pub precover: bool,
    pub members: bool,
    pub preenvelope: bool,
    pub both: bool,
}

impl SalceReport {
    pub fn all_agree(&self) -> bool {
        let v = self.precover;
        self.members == v && self.preenvelope == v && self.both == v
    }
}

pub fn salce_report(torsion: &Ideal, free: &Ideal, i: &Morphism, j: &Morphism) -> Result<SalceReport> {
    let precover = is_precover(torsion, i)?;
    let members = torsion.contains(i)? && free.contains(j)?;
    let preenvelope = is_preenvelope(free, j)?;
    Ok(SalceReport { precover, members, preenvelope, both: precover && preenvelope })
}

pub fn verify_salce(pair: &TorsionPair, object: usize) -> Result<SalceReport> {
    let s = &pair.sequences[object];
    salce_report(&pair.torsion, &pair.free, &s.inclusion, &s.projection)
}

/// The sequence at `object` with the deflation replaced by zero, and the
/// inflation by its kernel `1_X`.
pub fn corrupt_deflation(pair: &TorsionPair, object: usize) -> (Morphism, Morphism) {
    let s = &pair.sequences[object];
    let x = s.projection.source();
    (Morphism::identity(x), Morphism::zero(x, s.free()))
}

/// The trivial sequence `0 → X → X` at `object`.
pub fn trivial_sequence(pair: &TorsionPair, object: usize) -> (Morphism, Morphism) {
    let x = pair.universe().object(object);
    (Morphism::zero(&zero_module(x), x), Morphism::identity(x))
}

/// Whether every universe object has a monic `I`-cover.
pub fn has_monic_covers(pair: &TorsionPair) -> Result<bool> {
    for s in &pair.sequences {
        if !is_precover(&pair.generating, &s.inclusion)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug)]
enum PreradicalDef {
    Trace(Ideal),
    Sum(Preradical, Preradical),
    Meet(Preradical, Preradical),
    /// `outer(inner(X))`.
    Compose(Preradical, Preradical),
    /// `(first : second)(X) / first(X) = second(X / first(X))`.
    Colon(Preradical, Preradical),
}

/// A subfunctor of the identity, evaluable on any module.
#[derive(Clone, Debug)]
pub struct Preradical {
    universe: Arc<Universe>,
    def: Arc<PreradicalDef>,
}

/// Preradical operations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PreradicalOp {
    Sum,
    Meet,
    Compose,
    Colon,
}

impl PreradicalOp {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "sum" => Some(Self::Sum),
            "meet" => Some(Self::Meet),
            "compose" => Some(Self::Compose),
            "colon" => Some(Self::Colon),
            _ => None,
        }
    }
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Sum => "sum",
            Self::Meet => "meet",
            Self::Compose => "compose",
            Self::Colon => "colon",
        }
    }
}

impl Preradical {
    /// `X ↦` trace of the ideal in `X`.
    pub fn trace_of(ideal: &Ideal) -> Preradical {
        Preradical { universe: ideal.universe().clone(), def: Arc::new(PreradicalDef::Trace(ideal.clone())) }
    }

    pub fn identity(universe: &Arc<Universe>) -> Preradical {
        Self::trace_of(&Ideal::full(universe))
    }

    pub fn zero(universe: &Arc<Universe>) -> Preradical {
        Self::trace_of(&Ideal::zero(universe))
    }

    pub fn universe(&self) -> &Arc<Universe> {
        &self.universe
    }

    pub fn combine(&self, other: &Preradical, op: PreradicalOp) -> Result<Preradical> {
        if !Arc::ptr_eq(&self.universe, &other.universe) {
            return Err(Error::Input("preradicals over different universes".into()));
        }
        let (a, b) = (self.clone(), other.clone());
        let def = match op {
            PreradicalOp::Sum => PreradicalDef::Sum(a, b),
            PreradicalOp::Meet => PreradicalDef::Meet(a, b),
            PreradicalOp::Compose => PreradicalDef::Compose(a, b),
            PreradicalOp::Colon => PreradicalDef::Colon(a, b),
        };
        Ok(Preradical { universe: self.universe.clone(), def: Arc::new(def) })
    }

    /// `t(X)` as a lifted subgroup of `X`.
    pub fn eval(&self, x: &Arc<AlgModule>) -> Result<CanonicalSubgroup> {
        match &*self.def {
            PreradicalDef::Trace(ideal) => trace(ideal, x),
            PreradicalDef::Sum(a, b) => Ok(a.eval(x)?.sum_unchecked(&b.eval(x)?)),
            PreradicalDef::Meet(a, b) => Ok(a.eval(x)?.intersect_unchecked(&b.eval(x)?)),
            PreradicalDef::Compose(outer, inner) => {
                let (sub, incl) = submodule(x, &inner.eval(x)?);
                Ok(incl.image_of(&outer.eval(&sub)?))
            }
            PreradicalDef::Colon(first, second) => {
                let (q, proj) = quotient(x, &first.eval(x)?);
                Ok(proj.preimage(&second.eval(&q)?))
            }
        }
    }

    /// Values on every universe object.
    pub fn values(&self) -> Result<Vec<CanonicalSubgroup>> {
        self.universe.objects().iter().map(|x| self.eval(x)).collect()
    }

    /// Pointwise equality on `U`.
    pub fn agrees_with(&self, other: &Preradical) -> Result<bool> {
        Ok(self.values()? == other.values()?)
    }

    /// Inclusion `ι_X : t(X) → X`.
    pub fn inclusion(&self, x: &Arc<AlgModule>) -> Result<Morphism> {
        Ok(submodule(x, &self.eval(x)?).1)
    }

    /// `t(f) : t(X) → t(Y)`, or `None` when `f` does not restrict.
    pub fn restrict(&self, f: &Morphism) -> Result<Option<Morphism>> {
        let ix = self.inclusion(f.source())?;
        let iy = self.inclusion(f.target())?;
        factors_through(&self.universe, &compose(f, &ix)?, &iy)
    }

    /// `ι_Y ∘ t(f) = f ∘ ι_X` for every Hom generator between universe
    /// objects.
    pub fn is_natural(&self) -> Result<bool> {
        let u = &self.universe;
        let vals = self.values()?;
        for i in 0..u.len() {
            for j in 0..u.len() {
                for f in u.hom_at(i, j).generators() {
                    if !vals[j].contains_unchecked(&f.image_of(&vals[i])) {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    /// The ideal generated by the torsion subobjects of universe objects.
    pub fn ideal(&self) -> Result<Ideal> {
        let gens = self.universe.objects().iter().map(|x| self.inclusion(x)).collect::<Result<Vec<_>>>()?;
        Ideal::generate(&self.universe, gens)
    }

    pub fn torsion_pair(&self) -> Result<TorsionPair> {
        generated_torsion_pair(&self.ideal()?)
    }

    /// `t(K) = K ∩ t(X)` for the kernel `K` of every Hom generator.
    pub fn is_left_exact(&self) -> Result<bool> {
        let u = &self.universe;
        let vals = self.values()?;
        for i in 0..u.len() {
            for j in 0..u.len() {
                for f in u.hom_at(i, j).generators() {
                    let parts = exact_parts(f);
                    let inner = parts.kernel_mono.image_of(&self.eval(&parts.kernel)?);
                    if inner != parts.kernel_mono.image_lifted().intersect_unchecked(&vals[i]) {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}

/// The preradical of a torsion pair: `X ↦ T(X)`.
pub fn preradical_of(pair: &TorsionPair) -> Result<Preradical> {
    let t = Preradical::trace_of(&pair.generating);
    for s in &pair.sequences {
        if t.eval(pair.universe().object(s.object))? != s.trace {
            return invalid("torsion sequence disagrees with the trace");
        }
    }
    Ok(t)
}

/// The combined preradical compared against the ideal-level operation.
#[derive(Clone, Debug)]
pub struct CombineReport {
    pub op: PreradicalOp,
    pub result: Preradical,
    /// Its own torsion pair matches the expected `(I, J)`.
    pub torsion_matches: bool,
    pub free_matches: bool,
    /// `t(X)` equals the trace of the expected `I` on `U`.
    pub pointwise_matches: bool,
}

impl CombineReport {
    pub fn holds(&self) -> bool {
        self.torsion_matches && self.free_matches && self.pointwise_matches
    }
}

/// Combines the preradicals of two complete pairs. `Compose` yields
/// `t2(t1(X))` with pair `(I1 I2, ℓ(I1 I2))`; `Colon` yields `t1 : t2`
/// with pair `(r(J2 J1), J2 J1)`.
pub fn preradical_combine(first: &TorsionPair, second: &TorsionPair, op: PreradicalOp) -> Result<CombineReport> {
    let t1 = preradical_of(first)?;
    let t2 = preradical_of(second)?;
    let (i1, j1, i2, j2) = (&first.torsion, &first.free, &second.torsion, &second.free);
    let (result, expected_i, expected_j) = match op {
        PreradicalOp::Sum => {
            let j = j1.meet(j2)?;
            (t1.combine(&t2, op)?, j.right_annihilator(), j)
        }
        PreradicalOp::Meet => {
            let i = i1.meet(i2)?;
            (t1.combine(&t2, op)?, i.clone(), i.left_annihilator())
        }
        PreradicalOp::Compose => {
            let i = i1.product(i2)?;
            (t2.combine(&t1, op)?, i.clone(), i.left_annihilator())
        }
        PreradicalOp::Colon => {
            let j = j2.product(j1)?;
            (t1.combine(&t2, op)?, j.right_annihilator(), j)
        }
    };
    let own = result.torsion_pair()?;
    let expected = Preradical::trace_of(&expected_i);
    Ok(CombineReport {
        op,
        torsion_matches: own.torsion == expected_i,
        free_matches: own.free == expected_j,
        pointwise_matches: result.agrees_with(&expected)?,
        result,
    })
}

/// Idempotence and radical flags with the object-ideal analysis of the
/// pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PreradicalClass {
    pub idempotent: bool,
    pub radical: bool,
    pub torsion_object_ideal: bool,
    pub free_object_ideal: bool,
}

impl PreradicalClass {
    /// `I` object ideal ⇔ idempotent, `J` object ideal ⇔ radical.
    pub fn consistent(&self) -> bool {
        self.idempotent == self.torsion_object_ideal && self.radical == self.free_object_ideal
    }
}

pub fn classify_preradical(t: &Preradical) -> Result<PreradicalClass> {
    let idempotent = t.combine(t, PreradicalOp::Compose)?.agrees_with(t)?;
    let radical = t.combine(t, PreradicalOp::Colon)?.agrees_with(t)?;
    let pair = t.torsion_pair()?;
    Ok(PreradicalClass {
        idempotent,
        radical,
        torsion_object_ideal: pair.torsion.object_analysis().is_object_ideal,
        free_object_ideal: pair.free.object_analysis().is_object_ideal,
    })
}

/// Whether `m` is projective: its free cover splits.
pub fn is_projective(m: &Arc<AlgModule>) -> Result<bool> {
    let (_, cover) = free_cover(m);
    Ok(crate::algcat::factor_through(&Morphism::identity(m), &cover)?.is_some())
}

/// Whether `m` is injective: its dual is projective.
pub fn is_injective(m: &Arc<AlgModule>) -> Result<bool> {
    is_projective(&crate::algcat::dual(m))
}

/// An `r(ℓ(I))`-preenvelope of `x` by pushing a preenvelope of its free
/// cover along the cover.
pub fn extend_preenvelope_from_projectives(ideal: &Ideal, x: &Arc<AlgModule>) -> Result<Morphism> {
    let closed = ideal.left_annihilator().right_annihilator();
    let (free, cover) = free_cover(x);
    let env = et_preenvelope(&closed, &free)?;
    let sum = direct_sum(x.algebra(), &[x.clone(), env.target().clone()])?;
    let diagonal = pair(&sum, &[cover, env.scale(-1)])?;
    let (_, proj) = quotient(&sum.module, &diagonal.image_lifted());
    compose(&proj, &sum.injections[0])
}
