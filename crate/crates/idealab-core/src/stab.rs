//! Stable categories of self-injective algebras.
//!
//! Hulls and covers, the shift Σ and its inverse Ω, stable Hom, Ext as
//! `stableHom(A, ΣB)`, the correspondence between ideals containing the
//! projectives and stable ideals, Ext-special precovers and the transfer
//! of completeness between cotorsion pairs and stable torsion pairs.
//! Covers need designated radical generators; the algebra is assumed
//! local so that greedy generator selection modulo the radical is minimal.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::algcat::{
    compose, copair, direct_sum, double_dual_evaluation, dual, dual_morphism, factor_through, factor_through_left,
    free_cover, hom_group, pair, projective_part, quotient, quotient_generators, submodule, submodules, AlgModule,
    FiniteAlgebra, HomGroup, IsoSearch, Morphism,
};
use crate::approx::{et_precover, is_precover};
use crate::error::{invalid, Error, Result};
use crate::ideals::{Ideal, Universe};
use crate::wkc::{
    additive_closure, arrow_of, verify_we_axioms_within, verify_wkc_axioms, Arrow, Conflation, Finding,
    FiniteCategoryData, ModuleConflation, Shift, Truncation,
};
use crate::znlin::{coefficient_preimage, combine, solve_in_span, CanonicalSubgroup, ZnMatrix};
use crate::Verdict;

/// Outcome of the Baer test on the regular module.
#[derive(Clone, Debug)]
pub struct BaerReport {
    pub verdict: Verdict,
    pub ideals_tested: usize,
    /// A map from a left ideal into the algebra with no extension.
    pub counterexample: Option<Morphism>,
}

/// Baer test: every map from a left ideal into the regular module extends
/// along the inclusion. Extendable maps form a subgroup, so Hom generators
/// suffice.
pub fn check_self_injective(alg: &Arc<FiniteAlgebra>, budget: u128) -> Result<BaerReport> {
    let regular = Arc::new(AlgModule::regular(alg.clone()));
    let Some(subs) = submodules(&regular, budget) else {
        return Ok(BaerReport { verdict: Verdict::Undecided, ideals_tested: 0, counterexample: None });
    };
    for lifted in &subs {
        let (sub, incl) = submodule(&regular, lifted);
        for h in hom_group(&sub, &regular)?.generators() {
            if factor_through_left(h, &incl)?.is_none() {
                return Ok(BaerReport {
                    verdict: Verdict::Fail,
                    ideals_tested: subs.len(),
                    counterexample: Some(h.clone()),
                });
            }
        }
    }
    Ok(BaerReport { verdict: Verdict::Pass, ideals_tested: subs.len(), counterexample: None })
}

fn unit_vector(len: usize, i: usize) -> Vec<u32> {
    let mut v = vec![0; len];
    v[i] = 1;
    v
}

/// Minimal projective cover `A^k ↠ M`: keeps the generators that are not
/// in `JM` plus the span of those already kept.
pub fn projective_cover(m: &Arc<AlgModule>) -> Result<(Arc<AlgModule>, Morphism)> {
    let alg = m.algebra();
    let radical = alg.radical().ok_or_else(|| Error::Input("the algebra designates no radical generators".into()))?;
    let units: Vec<Vec<u32>> = (0..m.gens()).map(|j| m.relations().reduce(&unit_vector(m.gens(), j))).collect();
    let radical_part: Vec<Vec<u32>> =
        radical.basis().iter().flat_map(|r| units.iter().map(move |u| m.act(r, u))).collect();
    let mut span = m.submodule_closure(&radical_part);
    let mut kept = Vec::new();
    for u in &units {
        if !span.contains_vec(u) {
            span = span.sum_unchecked(&m.submodule_closure(core::slice::from_ref(u)));
            kept.push(u.clone());
        }
    }
    let rank = alg.rank();
    let free = Arc::new(AlgModule::free(alg.clone(), kept.len()));
    let rows: Vec<Vec<u32>> =
        kept.iter().flat_map(|u| (0..rank).map(move |b| m.act(&unit_vector(rank, b), u))).collect();
    let cover = Morphism::new(free.clone(), m.clone(), ZnMatrix::from_rows(m.modulus(), m.gens(), &rows)?)?;
    if !cover.is_epi() {
        return invalid("radical generators do not yield a cover");
    }
    Ok((free, cover))
}

/// `M ↪ D(P(D(M)))`, the dual of a projective cover of the dual.
pub fn injective_hull(m: &Arc<AlgModule>) -> Result<Morphism> {
    let (_, cover) = projective_cover(&dual(m))?;
    hull_from_cover(m, &cover)
}

/// `M ↪ D(F)` for an epimorphism `F ↠ D(M)` from a projective.
pub(crate) fn hull_from_cover(m: &Arc<AlgModule>, cover: &Morphism) -> Result<Morphism> {
    let dcover = dual_morphism(cover);
    let ev = double_dual_evaluation(m);
    let e = dcover.target();
    let hull =
        Arc::new(AlgModule::from_parts(m.algebra().clone(), e.gens(), e.relations().clone(), e.actions().to_vec()));
    let iota = Morphism::new(m.clone(), hull, ev.matrix().mul(dcover.matrix())?)?;
    if !iota.is_mono() {
        return invalid("hull map is not monic");
    }
    Ok(iota)
}

/// `A → E(A) → Σ(A)`.
pub fn cosyzygy(a: &Arc<AlgModule>) -> Result<ModuleConflation> {
    let iota = injective_hull(a)?;
    let (_, proj) = quotient(iota.target(), &iota.image_lifted());
    Ok(ModuleConflation { inflation: iota, deflation: proj })
}

/// `Ω(A) → P(A) → A`.
pub fn syzygy(a: &Arc<AlgModule>) -> Result<ModuleConflation> {
    let (free, cover) = projective_cover(a)?;
    let (_, incl) = submodule(&free, &cover.kernel_lifted());
    Ok(ModuleConflation { inflation: incl, deflation: cover })
}

/// `Σ(f) : ΣA → ΣB` induced by an extension of `ι_B ∘ f` along `ι_A`.
pub fn sigma_morphism(f: &Morphism, source: &ModuleConflation, target: &ModuleConflation) -> Result<Morphism> {
    let pushed = compose(&target.inflation, f)?;
    let middle = factor_through_left(&pushed, &source.inflation)?
        .ok_or_else(|| Error::Validation("hull map does not extend".into()))?;
    let outer = compose(&target.deflation, &middle)?;
    factor_through_left(&outer, &source.deflation)?.ok_or_else(|| Error::Validation("shift does not descend".into()))
}

/// `Ω(f) : ΩA → ΩB` restricted from a lift of `f ∘ p_A` along `p_B`.
pub fn omega_morphism(f: &Morphism, source: &ModuleConflation, target: &ModuleConflation) -> Result<Morphism> {
    let pulled = compose(f, &source.deflation)?;
    let middle = factor_through(&pulled, &target.deflation)?
        .ok_or_else(|| Error::Validation("cover map does not lift".into()))?;
    let inner = compose(&middle, &source.inflation)?;
    factor_through(&inner, &target.inflation)?.ok_or_else(|| Error::Validation("syzygy map does not restrict".into()))
}

/// `Hom(A, B) / P(A, B)`.
pub fn stable_hom(a: &Arc<AlgModule>, b: &Arc<AlgModule>) -> Result<HomGroup> {
    let h = hom_group(a, b)?;
    let p = projective_part(a, b)?;
    Ok(HomGroup::from_space(a, b, h.space().clone(), p))
}

/// Whether `1_M` factors through a projective.
pub fn is_stably_zero(m: &Arc<AlgModule>) -> Result<bool> {
    Ok(projective_part(m, m)?.contains_vec(&Morphism::identity(m).flat()))
}

fn stacked(n: u32, parts: &[&CanonicalSubgroup]) -> CanonicalSubgroup {
    let dim: usize = parts.iter().map(|p| p.dim()).sum();
    let mut gens = Vec::new();
    let mut offset = 0;
    for p in parts {
        for r in p.basis() {
            let mut v = vec![0; dim];
            v[offset..offset + r.len()].copy_from_slice(r);
            gens.push(v);
        }
        offset += p.dim();
    }
    CanonicalSubgroup::from_generators(n, dim, &gens)
}

/// Budgeted search for `f : A → B` with a stable inverse.
pub fn stable_isomorphism(a: &Arc<AlgModule>, b: &Arc<AlgModule>, budget: u128) -> Result<IsoSearch> {
    let n = a.modulus();
    let ab = stable_hom(a, b)?;
    let ba = stable_hom(b, a)?;
    let zero = stacked(n, &[&projective_part(a, a)?, &projective_part(b, b)?]);
    let target = [Morphism::identity(a).flat(), Morphism::identity(b).flat()].concat();
    let flats: Vec<Vec<u32>> = ba.generators().iter().map(|g| g.flat()).collect();
    let Some(candidates) = ab.elements(budget) else {
        return Ok(IsoSearch::Undecided);
    };
    for f in candidates {
        let images: Vec<Vec<u32>> = ba
            .generators()
            .iter()
            .map(|g| Ok([compose(g, &f)?.flat(), compose(&f, g)?.flat()].concat()))
            .collect::<Result<_>>()?;
        if let Some(c) = solve_in_span(&images, &zero, &target) {
            let backward = ba.morphism(&combine(&c, &flats, ba.space().dim(), n));
            return Ok(IsoSearch::Found { forward: f, backward });
        }
    }
    Ok(IsoSearch::NotIsomorphic)
}

/// `Ext(A, B)` as `stableHom(A, ΣB)`, given a cosyzygy of `B`.
pub fn ext_group(a: &Arc<AlgModule>, b: &ModuleConflation) -> Result<HomGroup> {
    stable_hom(a, b.deflation.target())
}

/// `Ext(f, g) = 0` for `f : A → A'`, `g : B → B'`, given cosyzygies of
/// `B` and `B'`: `Σg ∘ h ∘ f` is stably zero for every generator `h` of
/// `stableHom(A', ΣB)`.
pub fn ext_orthogonal_with(
    f: &Morphism,
    g: &Morphism,
    source: &ModuleConflation,
    target: &ModuleConflation,
) -> Result<bool> {
    let sg = sigma_morphism(g, source, target)?;
    let zero = projective_part(f.source(), sg.target())?;
    for h in stable_hom(f.target(), sg.source())?.generators() {
        if !zero.contains_vec(&compose(&sg, &compose(h, f)?)?.flat()) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `Ext(f, g) = 0`, computed through stable Hom.
pub fn is_ext_orthogonal(f: &Morphism, g: &Morphism) -> Result<bool> {
    ext_orthogonal_with(f, g, &cosyzygy(g.source())?, &cosyzygy(g.target())?)
}

/// `Ext(f, g) = 0` computed on projective presentations: every class
/// `φ : Ω'A' → B` of `Ext(A', B)` is sent to `g ∘ φ ∘ Ω'f`, which must
/// extend over the free cover of `A`.
pub fn ext_action_vanishes(f: &Morphism, g: &Morphism) -> Result<bool> {
    let (free_a, pa) = free_cover(f.source());
    let (_, ia) = submodule(&free_a, &pa.kernel_lifted());
    let (free_b, pb) = free_cover(f.target());
    let (omega_b, ib) = submodule(&free_b, &pb.kernel_lifted());
    let lift =
        factor_through(&compose(f, &pa)?, &pb)?.ok_or_else(|| Error::Validation("free cover does not lift".into()))?;
    let restricted = factor_through(&compose(&lift, &ia)?, &ib)?
        .ok_or_else(|| Error::Validation("lift does not restrict to syzygies".into()))?;
    for phi in hom_group(&omega_b, g.source())?.generators() {
        let image = compose(g, &compose(phi, &restricted)?)?;
        if factor_through_left(&image, &ia)?.is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The extension `B → Y → A` pushed out from `Ω' → F → A` along `φ`.
fn pushout_extension(phi: &Morphism, incl: &Morphism, cover: &Morphism) -> Result<ModuleConflation> {
    let b = phi.target();
    let ds = direct_sum(b.algebra(), &[b.clone(), cover.source().clone()])?;
    let glue = pair(&ds, &[phi.clone(), incl.scale(-1)])?;
    let (_, q) = quotient(&ds.module, &glue.image_lifted());
    let k = compose(&q, &ds.injections[0])?;
    let outer = copair(&ds, &[Morphism::zero(b, cover.target()), cover.clone()])?;
    let c = factor_through_left(&outer, &q)?.ok_or_else(|| Error::Validation("pushout does not descend".into()))?;
    if !k.is_mono() || !c.is_epi() || c.kernel_lifted() != k.image_lifted() {
        return invalid("pushout is not a short exact sequence");
    }
    Ok(ModuleConflation { inflation: k, deflation: c })
}

/// Some `h : Y → Y'` with `h ∘ k = k'` and `c' ∘ h = c`.
fn equivalent_extensions(x: &ModuleConflation, y: &ModuleConflation) -> Result<bool> {
    let n = x.inflation.source().modulus();
    let hom = hom_group(x.inflation.target(), y.inflation.target())?;
    let images: Vec<Vec<u32>> = hom
        .generators()
        .iter()
        .map(|h| Ok([compose(h, &x.inflation)?.flat(), compose(&y.deflation, h)?.flat()].concat()))
        .collect::<Result<_>>()?;
    let zero = stacked(
        n,
        &[
            hom_group(x.inflation.source(), y.inflation.target())?.zero(),
            hom_group(x.inflation.target(), y.deflation.target())?.zero(),
        ],
    );
    let target = [y.inflation.flat(), x.deflation.flat()].concat();
    Ok(solve_in_span(&images, &zero, &target).is_some())
}

/// Number of equivalence classes of short exact sequences `B → Y → A`,
/// enumerated as pushouts of a free presentation of `A`. `None` past the
/// budget.
pub fn ses_class_count(a: &Arc<AlgModule>, b: &Arc<AlgModule>, budget: u128) -> Result<Option<u128>> {
    let (free, cover) = free_cover(a);
    let (omega, incl) = submodule(&free, &cover.kernel_lifted());
    let Some(maps) = hom_group(&omega, b)?.elements(budget) else {
        return Ok(None);
    };
    let mut classes: Vec<ModuleConflation> = Vec::new();
    for phi in &maps {
        let ext = pushout_extension(phi, &incl, &cover)?;
        let mut known = false;
        for c in &classes {
            if equivalent_extensions(&ext, c)? {
                known = true;
                break;
            }
        }
        if !known {
            classes.push(ext);
        }
    }
    Ok(Some(classes.len() as u128))
}

/// The cone of `f : X → Y` in the stable category: the pushout `D` of
/// `X → E(X)` along `f`, with `Y → D` and the connecting map `D → ΣX`.
#[derive(Clone, Debug)]
pub struct Cone {
    pub object: Arc<AlgModule>,
    pub to_cone: Morphism,
    pub connecting: Morphism,
}

pub fn cone(f: &Morphism, hull: &ModuleConflation) -> Result<Cone> {
    let ds = direct_sum(f.source().algebra(), &[f.target().clone(), hull.inflation.target().clone()])?;
    let glue = pair(&ds, &[f.clone(), hull.inflation.scale(-1)])?;
    let (object, q) = quotient(&ds.module, &glue.image_lifted());
    let to_cone = compose(&q, &ds.injections[0])?;
    let outer = copair(&ds, &[Morphism::zero(f.target(), hull.deflation.target()), hull.deflation.clone()])?;
    let connecting =
        factor_through_left(&outer, &q)?.ok_or_else(|| Error::Validation("cone map does not descend".into()))?;
    Ok(Cone { object, to_cone, connecting })
}

/// The fiber `F → Y` of `c : Y → Z`: the pullback of `P(Z) → Z` along `c`.
pub fn fiber(c: &Morphism, cover: &ModuleConflation) -> Result<(Arc<AlgModule>, Morphism)> {
    let ds = direct_sum(c.source().algebra(), &[c.source().clone(), cover.deflation.source().clone()])?;
    let joint = copair(&ds, &[c.clone(), cover.deflation.scale(-1)])?;
    let (object, incl) = submodule(&ds.module, &joint.kernel_lifted());
    Ok((object, compose(&ds.projections[0], &incl)?))
}

/// Index of a universe object stably isomorphic to `m`, with the
/// isomorphism and its stable inverse.
pub fn match_stable(u: &Universe, m: &Arc<AlgModule>, budget: u128) -> Result<Option<(usize, Morphism, Morphism)>> {
    for (i, x) in u.objects().iter().enumerate() {
        match stable_isomorphism(m, x, budget)? {
            IsoSearch::Found { forward, backward } => return Ok(Some((i, forward, backward))),
            IsoSearch::NotIsomorphic => {}
            IsoSearch::Undecided => return Err(Error::Input("stable isomorphism search over budget".into())),
        }
    }
    Ok(None)
}

/// Where `Σ` sends a universe object.
#[derive(Clone, Debug)]
pub enum ShiftMatch {
    /// `ΣA` is stably zero.
    Zero,
    /// `ΣA ≅ U[index]` stably, with the isomorphism both ways.
    Object { index: usize, to: Morphism, from: Morphism },
    /// No universe object is stably isomorphic to `ΣA`.
    Outside,
}

/// A self-injective algebra with a universe, its stable view and fixed
/// hulls and covers of the universe objects.
#[derive(Debug)]
pub struct StableContext {
    plain: Arc<Universe>,
    stable: Arc<Universe>,
    cosyzygies: Vec<ModuleConflation>,
    syzygies: Vec<ModuleConflation>,
    shifts: Vec<ShiftMatch>,
    projectives: Ideal,
    budget: u128,
}

/// An Ext-special precover: the deflation `T ⊕ P → A` (or `1_A`), its
/// kernel `F → T ⊕ P` and the certificate `g : Ω(A) → F`.
#[derive(Clone, Debug)]
pub struct SpecialPrecover {
    pub deflation: Morphism,
    pub kernel: Morphism,
    pub certificate: Morphism,
    /// The deflation is an `I`-precover.
    pub precover: bool,
    /// `Ext(f, g) = 0` for every generator `f` of `I`.
    pub orthogonal: bool,
}

/// Findings of [`StableContext::verify_transfer`], plus `Ob(I)` and
/// `Ob(J)` when both ideals are object ideals.
#[derive(Clone, Debug)]
pub struct TransferReport {
    pub findings: Vec<Finding>,
    pub object_pair: Option<(Vec<usize>, Vec<usize>)>,
}

impl TransferReport {
    pub fn verdict(&self) -> Verdict {
        self.findings.iter().fold(Verdict::Pass, |acc, f| acc.and(f.verdict))
    }
    pub fn finding(&self, id: &str) -> Option<&Finding> {
        self.findings.iter().find(|f| f.id == id)
    }
}

impl StableContext {
    /// Requires a self-injective algebra with designated radical generators.
    pub fn new(universe: &Arc<Universe>, budget: u128) -> Result<Self> {
        let alg = universe.algebra();
        match check_self_injective(alg, budget)?.verdict {
            Verdict::Pass => {}
            Verdict::Fail => return Err(Error::Input("the algebra is not self-injective".into())),
            Verdict::Undecided => return Err(Error::Input("self-injectivity undecided within budget".into())),
        }
        let entries: Vec<(String, Arc<AlgModule>)> =
            universe.names().iter().cloned().zip(universe.objects().iter().cloned()).collect();
        let stable = Universe::stable(alg.clone(), entries)?;
        let cosyzygies: Vec<ModuleConflation> = universe.objects().iter().map(cosyzygy).collect::<Result<_>>()?;
        let syzygies: Vec<ModuleConflation> = universe.objects().iter().map(syzygy).collect::<Result<_>>()?;
        let mut shifts = Vec::with_capacity(universe.len());
        for c in &cosyzygies {
            let s = c.deflation.target();
            shifts.push(if is_stably_zero(s)? {
                ShiftMatch::Zero
            } else {
                match match_stable(universe, s, budget)? {
                    Some((index, to, from)) => ShiftMatch::Object { index, to, from },
                    None => ShiftMatch::Outside,
                }
            });
        }
        let n = universe.len();
        let mut gens = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let hom = universe.hom_at(i, j);
                let p = projective_part(universe.object(i), universe.object(j))?;
                gens.extend(quotient_generators(&p, hom.zero()).iter().map(|v| hom.morphism(v)));
            }
        }
        let projectives = Ideal::generate(universe, gens)?;
        Ok(StableContext { plain: universe.clone(), stable, cosyzygies, syzygies, shifts, projectives, budget })
    }

    pub fn plain(&self) -> &Arc<Universe> {
        &self.plain
    }
    pub fn stable(&self) -> &Arc<Universe> {
        &self.stable
    }
    pub fn budget(&self) -> u128 {
        self.budget
    }
    pub fn cosyzygy_at(&self, i: usize) -> &ModuleConflation {
        &self.cosyzygies[i]
    }
    pub fn syzygy_at(&self, i: usize) -> &ModuleConflation {
        &self.syzygies[i]
    }
    pub fn shift_at(&self, i: usize) -> &ShiftMatch {
        &self.shifts[i]
    }
    /// The ideal `P` of maps factoring through projectives, on `U`.
    pub fn projective_ideal(&self) -> &Ideal {
        &self.projectives
    }

    fn cosyzygy_of(&self, m: &Arc<AlgModule>) -> Result<ModuleConflation> {
        match self.plain.index_of(m) {
            Some(i) => Ok(self.cosyzygies[i].clone()),
            None => cosyzygy(m),
        }
    }

    /// `Ext(f, g) = 0` using the cached hulls where possible.
    pub fn is_ext_orthogonal(&self, f: &Morphism, g: &Morphism) -> Result<bool> {
        ext_orthogonal_with(f, g, &self.cosyzygy_of(g.source())?, &self.cosyzygy_of(g.target())?)
    }

    pub fn contains_projectives(&self, ideal: &Ideal) -> bool {
        ideal.includes(&self.projectives)
    }

    /// `π(I)`: the same generators in the stable universe.
    pub fn pi_ideal(&self, ideal: &Ideal) -> Result<Ideal> {
        Ideal::generate(&self.stable, ideal.generators())
    }

    /// The preimage of a stable ideal: its generators plus `P`.
    pub fn lift(&self, ideal: &Ideal) -> Result<Ideal> {
        let mut gens = ideal.generators();
        gens.extend(self.projectives.generators());
        Ideal::generate(&self.plain, gens)
    }

    /// `π(Σ(J))` on the stable universe, transporting each `Σg` through
    /// the stable isomorphisms `ΣB ≅ U[i]`.
    pub fn sigma_ideal(&self, ideal: &Ideal) -> Result<Ideal> {
        let mut gens = Vec::new();
        for g in ideal.generators() {
            let (Some(i), Some(j)) = (self.plain.index_of(g.source()), self.plain.index_of(g.target())) else {
                return Err(Error::Input("ideal generator outside the universe".into()));
            };
            let (ShiftMatch::Object { from, .. }, ShiftMatch::Object { to, .. }) = (&self.shifts[i], &self.shifts[j])
            else {
                if matches!(self.shifts[i], ShiftMatch::Outside) || matches!(self.shifts[j], ShiftMatch::Outside) {
                    return Err(Error::Input("the universe is not closed under the shift".into()));
                }
                continue;
            };
            let sg = sigma_morphism(&g, &self.cosyzygies[i], &self.cosyzygies[j])?;
            gens.push(compose(to, &compose(&sg, from)?)?);
        }
        Ideal::generate(&self.stable, gens)
    }

    /// The subgroup of each `Hom(X, Y)` on `U` cut out by the linear
    /// conditions `test(f)`, each landing in its own subgroup.
    fn cut_out<F>(&self, test: F) -> Result<Ideal>
    where
        F: Fn(&Morphism) -> Result<Vec<(Vec<u32>, CanonicalSubgroup)>>,
    {
        let n = self.plain.len();
        let modulus = self.plain.algebra().modulus();
        let mut gens = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let hom = self.plain.hom_at(i, j);
                let conditions: Vec<Vec<(Vec<u32>, CanonicalSubgroup)>> =
                    hom.generators().iter().map(&test).collect::<Result<_>>()?;
                let Some(first) = conditions.first() else {
                    continue;
                };
                let zeros: Vec<&CanonicalSubgroup> = first.iter().map(|(_, z)| z).collect();
                let target = stacked(modulus, &zeros);
                let images: Vec<Vec<u32>> =
                    conditions.iter().map(|c| c.iter().flat_map(|(v, _)| v.iter().copied()).collect()).collect();
                let flats: Vec<Vec<u32>> = hom.generators().iter().map(|g| g.flat()).collect();
                for c in coefficient_preimage(&images, &target) {
                    gens.push(hom.morphism(&combine(&c, &flats, hom.space().dim(), modulus)));
                }
            }
        }
        Ideal::generate(&self.plain, gens)
    }

    /// `I^{⊥₁}`: maps `g` with `Ext(f, g) = 0` for all `f` in `I`.
    pub fn ext_right_orthogonal(&self, ideal: &Ideal) -> Result<Ideal> {
        let fs = ideal.generators();
        self.cut_out(|g| {
            let (Some(b), Some(b2)) = (self.plain.index_of(g.source()), self.plain.index_of(g.target())) else {
                return Err(Error::Input("morphism outside the universe".into()));
            };
            let sg = sigma_morphism(g, &self.cosyzygies[b], &self.cosyzygies[b2])?;
            let mut out = Vec::new();
            for f in &fs {
                let zero = projective_part(f.source(), sg.target())?;
                for h in stable_hom(f.target(), sg.source())?.generators() {
                    out.push((compose(&sg, &compose(h, f)?)?.flat(), zero.clone()));
                }
            }
            Ok(out)
        })
    }

    /// `⊥₁J`: maps `f` with `Ext(f, g) = 0` for all `g` in `J`.
    pub fn ext_left_orthogonal(&self, ideal: &Ideal) -> Result<Ideal> {
        let shifted: Vec<Morphism> = ideal
            .generators()
            .iter()
            .map(|g| sigma_morphism(g, &self.cosyzygy_of(g.source())?, &self.cosyzygy_of(g.target())?))
            .collect::<Result<_>>()?;
        self.cut_out(|f| {
            let mut out = Vec::new();
            for sg in &shifted {
                let zero = projective_part(f.source(), sg.target())?;
                for h in stable_hom(f.target(), sg.source())?.generators() {
                    out.push((compose(sg, &compose(h, f)?)?.flat(), zero.clone()));
                }
            }
            Ok(out)
        })
    }

    /// The deflation precover `(i, p) : T ⊕ P → A` of an ideal containing
    /// the projectives (`1_A` when it lies in `I`), its kernel `F` and the
    /// induced `g : Ω(A) → F`.
    pub fn ext_special_precover(&self, ideal: &Ideal, a: usize) -> Result<SpecialPrecover> {
        let obj = self.plain.object(a);
        let omega = &self.syzygies[a];
        let deflation = if ideal.contains(&Morphism::identity(obj))? {
            Morphism::identity(obj)
        } else {
            let i = et_precover(ideal, obj)?;
            let ds = direct_sum(obj.algebra(), &[i.source().clone(), omega.deflation.source().clone()])?;
            copair(&ds, &[i, omega.deflation.clone()])?
        };
        let (_, kernel) = submodule(deflation.source(), &deflation.kernel_lifted());
        let lift = factor_through(&omega.deflation, &deflation)?
            .ok_or_else(|| Error::Validation("the deflation is not epic".into()))?;
        let certificate = factor_through(&compose(&lift, &omega.inflation)?, &kernel)?
            .ok_or_else(|| Error::Validation("syzygy does not land in the kernel".into()))?;
        let precover = is_precover(ideal, &deflation)?;
        let mut orthogonal = true;
        for f in ideal.generators() {
            if !self.is_ext_orthogonal(&f, &certificate)? {
                orthogonal = false;
                break;
            }
        }
        Ok(SpecialPrecover { deflation, kernel, certificate, precover, orthogonal })
    }

    /// A deflation `T → A` with `T` a sum of objects of `Ob(I)` (and the
    /// projective cover of `A`), pruned copy by copy while it stays an
    /// epic `I`-precover, with its kernel.
    pub fn object_approximation(&self, ideal: &Ideal, objects: &[usize], a: usize) -> Result<(Morphism, Morphism)> {
        let obj = self.plain.object(a);
        let mut maps: Vec<Morphism> = Vec::new();
        for &x in objects {
            maps.extend(self.plain.hom_at(x, a).generators().iter().cloned());
        }
        maps.push(self.syzygies[a].deflation.clone());
        let assemble = |maps: &[Morphism]| -> Result<Morphism> {
            let sources: Vec<Arc<AlgModule>> = maps.iter().map(|m| m.source().clone()).collect();
            copair(&direct_sum(obj.algebra(), &sources)?, maps)
        };
        let mut k = 0;
        while k < maps.len() {
            let mut fewer = maps.clone();
            fewer.remove(k);
            if !fewer.is_empty() {
                let d = assemble(&fewer)?;
                if d.is_epi() && is_precover(ideal, &d)? {
                    maps = fewer;
                    continue;
                }
            }
            k += 1;
        }
        let d = assemble(&maps)?;
        let (_, kernel) = submodule(d.source(), &d.kernel_lifted());
        Ok((d, kernel))
    }

    /// Stable side of a special precover: `π(d)` is a `π(I)`-precover of
    /// `A`, and the connecting map `A → ΣF` of the conflation annihilates
    /// `π(I)` on the right.
    fn stable_special(&self, ideal: &Ideal, sp: &SpecialPrecover) -> Result<(bool, bool)> {
        let d = &sp.deflation;
        let a = d.target();
        let hull = cosyzygy(sp.kernel.source())?;
        let extended = factor_through_left(&hull.inflation, &sp.kernel)?
            .ok_or_else(|| Error::Validation("hull map does not extend".into()))?;
        let connecting = factor_through_left(&compose(&hull.deflation, &extended)?, d)?
            .ok_or_else(|| Error::Validation("connecting map does not descend".into()))?;
        let mut precover = true;
        let mut special = true;
        for t in self.plain.objects() {
            let zero_a = projective_part(t, a)?;
            let zero_s = projective_part(t, connecting.target())?;
            let images: Vec<Vec<u32>> = hom_group(t, d.source())?
                .generators()
                .iter()
                .map(|h| compose(d, h).map(|m| m.flat()))
                .collect::<Result<_>>()?;
            for i in ideal.component_generators(t, a)? {
                precover &= solve_in_span(&images, &zero_a, &i.flat()).is_some();
                special &= zero_s.contains_vec(&compose(&connecting, &i)?.flat());
            }
        }
        Ok((precover, special))
    }

    /// Checks a cotorsion pair `(I, J)` against its stable counterpart
    /// `(π(I), π(Σ(J)))`. Errors when the pair is not Ext-orthogonal.
    pub fn verify_transfer(&self, first: &Ideal, second: &Ideal) -> Result<TransferReport> {
        for f in first.generators() {
            for g in second.generators() {
                if !self.is_ext_orthogonal(&f, &g)? {
                    return Err(Error::Input(format!(
                        "the pair is not Ext-orthogonal: generator {:?} against {:?}",
                        f.matrix().data(),
                        g.matrix().data()
                    )));
                }
            }
        }
        let mut findings = Vec::new();
        findings.push(Finding::new("projectives", Verdict::from_bool(self.contains_projectives(first)), None));
        let right = self.ext_right_orthogonal(first)?;
        let left = self.ext_left_orthogonal(second)?;
        let maximal = match (right == *second, left == *first) {
            (true, true) => None,
            (false, _) => Some("the second ideal is smaller than the right Ext-orthogonal of the first".into()),
            (_, false) => Some("the first ideal is smaller than the left Ext-orthogonal of the second".into()),
        };
        findings.push(Finding::new("maximal", Verdict::from_bool(maximal.is_none()), maximal));
        let pi_first = self.pi_ideal(first)?;
        let sigma_second = self.sigma_ideal(second)?;
        let torsion = match (sigma_second == pi_first.left_annihilator(), pi_first == sigma_second.right_annihilator())
        {
            (true, true) => None,
            (false, _) => Some("π(Σ(J)) differs from the left annihilator of π(I)".into()),
            (_, false) => Some("π(I) differs from the right annihilator of π(Σ(J))".into()),
        };
        findings.push(Finding::new("stable-torsion-pair", Verdict::from_bool(torsion.is_none()), torsion));
        let mut module_precover = None;
        let mut stable_precover = None;
        let mut ext_special = None;
        let mut hom_special = None;
        let mut objects_ok = None;
        let analysis = (first.object_analysis(), second.object_analysis());
        let both_objects = analysis.0.is_object_ideal && analysis.1.is_object_ideal;
        for a in 0..self.plain.len() {
            let name = self.plain.name(a);
            let sp = self.ext_special_precover(first, a)?;
            let (st_pre, st_special) = self.stable_special(first, &sp)?;
            if !sp.precover {
                module_precover.get_or_insert_with(|| format!("at {name}"));
            }
            if !sp.orthogonal {
                ext_special.get_or_insert_with(|| format!("certificate at {name}"));
            }
            if !st_pre {
                stable_precover.get_or_insert_with(|| format!("at {name}"));
            }
            if !st_special {
                hom_special.get_or_insert_with(|| format!("connecting map at {name}"));
            }
            if both_objects {
                let (_, kernel) = self.object_approximation(first, &analysis.0.objects, a)?;
                if !second.contains(&Morphism::identity(kernel.source()))? {
                    objects_ok
                        .get_or_insert_with(|| format!("pruned approximation of {name} has its kernel outside Ob(J)"));
                }
            }
        }
        let pass = |w: &Option<String>| Verdict::from_bool(w.is_none());
        findings.push(Finding::new("precovering", pass(&module_precover), module_precover.clone()));
        findings.push(Finding::new("stably-precovering", pass(&stable_precover), stable_precover.clone()));
        findings.push(Finding::new("ext-special", pass(&ext_special), ext_special.clone()));
        findings.push(Finding::new("hom-special", pass(&hom_special), hom_special.clone()));
        let ext_complete = module_precover.is_none() && ext_special.is_none();
        let stable_complete = stable_precover.is_none() && hom_special.is_none();
        findings.push(Finding::new(
            "transfer",
            Verdict::from_bool(ext_complete == stable_complete),
            (ext_complete != stable_complete)
                .then(|| format!("Ext side complete: {ext_complete}, stable side complete: {stable_complete}")),
        ));
        let object_pair = if both_objects {
            let v = if objects_ok.is_none() { Verdict::Pass } else { Verdict::Undecided };
            findings.push(Finding::new("object-pair", v, objects_ok));
            Some((analysis.0.objects, analysis.1.objects))
        } else {
            None
        };
        Ok(TransferReport { findings, object_pair })
    }
}

/// The stable additive closure of a universe with its shift and the
/// standard triangles whose three terms lie in the closure.
#[derive(Debug)]
pub struct StableStructure {
    pub universe: Arc<Universe>,
    pub data: FiniteCategoryData,
    pub conflations: Vec<Conflation>,
    /// Arrows, keyed by reduced coordinates, whose cone (fiber) is
    /// stably isomorphic to a closure object.
    cones_inside: BTreeSet<(usize, usize, Vec<u32>)>,
    fibers_inside: BTreeSet<(usize, usize, Vec<u32>)>,
    budget: u128,
}

/// One standard triangle `X → Y → D → ΣX` per stable morphism of the
/// closure, kept when `D` is stably isomorphic to a closure object.
pub fn stable_structure(base: &Universe, budget: u128) -> Result<StableStructure> {
    let mc = additive_closure(base, true)?;
    let u = mc.universe.clone();
    let cosyzygies: Vec<ModuleConflation> = u.objects().iter().map(cosyzygy).collect::<Result<_>>()?;
    let syzygies: Vec<ModuleConflation> = u.objects().iter().map(syzygy).collect::<Result<_>>()?;
    let mut objects = Vec::with_capacity(u.len());
    let mut to = Vec::with_capacity(u.len());
    let mut from = Vec::with_capacity(u.len());
    for (x, c) in cosyzygies.iter().enumerate() {
        let (i, t, f) = match_stable(&u, c.deflation.target(), budget)?
            .ok_or_else(|| Error::Input(format!("the shift of {} leaves the closure", u.name(x))))?;
        objects.push(i);
        to.push(t);
        from.push(f);
    }
    let n = u.len();
    let mut images = Vec::with_capacity(n * n);
    for x in 0..n {
        for y in 0..n {
            let mut row = Vec::new();
            for g in u.hom_at(x, y).generators() {
                let sg = sigma_morphism(g, &cosyzygies[x], &cosyzygies[y])?;
                row.push(arrow_of(&u, &compose(&to[y], &compose(&sg, &from[x])?)?)?.coords);
            }
            images.push(row);
        }
    }
    let data = mc.data.with_shift(Shift { objects, images })?;
    let mut conflations = Vec::new();
    let mut cones_inside = BTreeSet::new();
    let mut fibers_inside = BTreeSet::new();
    for x in 0..n {
        for y in 0..n {
            let maps = u
                .hom_at(x, y)
                .elements(budget)
                .ok_or_else(|| Error::Input("stable Hom enumeration over budget".into()))?;
            for f in maps {
                let key = arrow_key(&data, &arrow_of(&u, &f)?);
                if match_stable(&u, &fiber(&f, &syzygies[y])?.0, budget)?.is_some() {
                    fibers_inside.insert(key.clone());
                }
                let c = cone(&f, &cosyzygies[x])?;
                let Some((_, psi, psi_inv)) = match_stable(&u, &c.object, budget)? else {
                    continue;
                };
                cones_inside.insert(key);
                let connecting = compose(&to[x], &compose(&c.connecting, &psi_inv)?)?;
                conflations.push(Conflation {
                    inflation: arrow_of(&u, &f)?,
                    deflation: arrow_of(&u, &compose(&psi, &c.to_cone)?)?,
                    connecting: Some(arrow_of(&u, &connecting)?),
                });
            }
        }
    }
    Ok(StableStructure { universe: u, data, conflations, cones_inside, fibers_inside, budget })
}

fn arrow_key(data: &FiniteCategoryData, a: &Arrow) -> (usize, usize, Vec<u32>) {
    (a.from, a.to, data.hom(a.from, a.to).relations.reduce(&a.coords))
}

impl StableStructure {
    /// Both axiom verifiers, relative to the truncation.
    pub fn verify(&self) -> Vec<Finding> {
        let mut out = verify_wkc_axioms(&self.data, &self.conflations, self.budget);
        out.extend(verify_we_axioms_within(&self.data, &self.conflations, self.budget, Some(self)));
        out
    }
}

impl Truncation for StableStructure {
    fn cone_outside(&self, k: &Arrow) -> bool {
        !self.cones_inside.contains(&arrow_key(&self.data, k))
    }

    fn fiber_outside(&self, c: &Arrow) -> bool {
        !self.fibers_inside.contains(&arrow_key(&self.data, c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algcat::find_isomorphism;
    use crate::algcat::tests::{a2_path, cyclic, dual_numbers, zn_algebra};
    use crate::approx::is_projective;
    use crate::ideals::tests::{f2x2, z4, z9};
    use alloc::collections::BTreeSet;
    use alloc::string::ToString;
    use proptest::prelude::*;
    use std::sync::OnceLock;

    const BUDGET: u128 = 100_000;

    fn z8() -> Arc<Universe> {
        let alg = zn_algebra(8);
        let entries = [8, 4, 2].iter().map(|&k| (format!("Z{k}"), cyclic(&alg, k))).collect();
        Universe::new(alg, entries).unwrap()
    }

    fn contexts() -> &'static [StableContext] {
        static CTX: OnceLock<Vec<StableContext>> = OnceLock::new();
        CTX.get_or_init(|| {
            [z4().universe, f2x2().universe, z9().universe, z8()]
                .iter()
                .map(|u| StableContext::new(u, BUDGET).unwrap())
                .collect()
        })
    }

    fn obj(u: &Universe, name: &str) -> Arc<AlgModule> {
        u.object(u.index_of_name(name).unwrap()).clone()
    }

    /// Baer test by enumeration: every element of `Hom(I, R)` is the
    /// restriction of some element of `Hom(R, R)`.
    fn brute_baer(alg: &Arc<FiniteAlgebra>) -> bool {
        let r = Arc::new(AlgModule::regular(alg.clone()));
        let ends = hom_group(&r, &r).unwrap().elements(BUDGET).unwrap();
        submodules(&r, BUDGET).unwrap().iter().all(|lifted| {
            let (sub, incl) = submodule(&r, lifted);
            let restricted: BTreeSet<Vec<u32>> = ends.iter().map(|e| compose(e, &incl).unwrap().flat()).collect();
            let hom = hom_group(&sub, &r).unwrap();
            hom.elements(BUDGET).unwrap().iter().all(|h| {
                restricted.iter().any(|v| hom.zero().contains_vec(&crate::znlin::vec_sub(v, &h.flat(), r.modulus())))
            })
        })
    }

    #[test]
    fn baer_test_matches_enumeration() {
        let z4 = check_self_injective(&zn_algebra(4), BUDGET).unwrap();
        assert_eq!(z4.verdict, Verdict::Pass);
        assert_eq!(z4.ideals_tested, 3);
        assert_eq!(check_self_injective(&dual_numbers(), BUDGET).unwrap().verdict, Verdict::Pass);
        let a2 = check_self_injective(&a2_path(), BUDGET).unwrap();
        assert_eq!(a2.verdict, Verdict::Fail);
        assert!(a2.counterexample.is_some());
        for (alg, expected) in
            [(zn_algebra(4), true), (zn_algebra(9), true), (dual_numbers(), true), (a2_path(), false)]
        {
            assert_eq!(brute_baer(&alg), expected);
        }
        assert_eq!(check_self_injective(&zn_algebra(4), 1).unwrap().verdict, Verdict::Undecided);
    }

    #[test]
    fn context_needs_self_injective_algebra() {
        let a2 = crate::ideals::tests::a2().universe;
        assert!(matches!(StableContext::new(&a2, BUDGET), Err(Error::Input(_))));
    }

    /// `|Hom(A, B)| / |P(A, B)|` with `P` spanned by enumerated composites
    /// through the regular module.
    fn brute_stable_order(a: &Arc<AlgModule>, b: &Arc<AlgModule>) -> usize {
        let r = Arc::new(AlgModule::regular(a.algebra().clone()));
        let hom = hom_group(a, b).unwrap();
        let n = a.modulus();
        let mut through: BTreeSet<Vec<u32>> = BTreeSet::new();
        for x in hom_group(a, &r).unwrap().elements(BUDGET).unwrap() {
            for y in hom_group(&r, b).unwrap().elements(BUDGET).unwrap() {
                through.insert(hom.zero().reduce(&compose(&y, &x).unwrap().flat()));
            }
        }
        loop {
            let list: Vec<Vec<u32>> = through.iter().cloned().collect();
            let before = through.len();
            for u in &list {
                for v in &list {
                    through.insert(hom.zero().reduce(&crate::znlin::vec_add(u, v, n)));
                }
            }
            if through.len() == before {
                break;
            }
        }
        hom.elements(BUDGET).unwrap().len() / through.len()
    }

    #[test]
    fn stable_hom_orders() {
        let u = z4().universe;
        let (r, s) = (obj(&u, "R"), obj(&u, "S"));
        assert_eq!(stable_hom(&s, &s).unwrap().order().value(), Some(2));
        assert_eq!(stable_hom(&r, &s).unwrap().order().value(), Some(1));
        assert!(is_stably_zero(&r).unwrap());
        for ctx in contexts() {
            let u = ctx.plain();
            for a in u.objects() {
                for b in u.objects() {
                    let order = stable_hom(a, b).unwrap().order().value().unwrap() as usize;
                    assert_eq!(order, brute_stable_order(a, b));
                }
            }
        }
    }

    #[test]
    fn shift_of_the_simple() {
        let u = z4().universe;
        let (r, s) = (obj(&u, "R"), obj(&u, "S"));
        let c = cosyzygy(&s).unwrap();
        assert!(matches!(find_isomorphism(c.deflation.target(), &s, BUDGET).unwrap(), IsoSearch::Found { .. }));
        assert!(find_isomorphism(c.inflation.target(), &r, BUDGET).unwrap().is_found());
        assert_eq!(cosyzygy(&r).unwrap().deflation.target().order().value(), Some(1));
        let back = syzygy(c.deflation.target()).unwrap();
        assert!(stable_isomorphism(back.inflation.source(), &s, BUDGET).unwrap().is_found());
    }

    #[test]
    fn shift_and_loop_are_inverse() {
        for ctx in contexts() {
            for a in ctx.plain().objects() {
                let up = cosyzygy(a).unwrap();
                let down = syzygy(up.deflation.target()).unwrap();
                assert!(stable_isomorphism(down.inflation.source(), a, BUDGET).unwrap().is_found());
                let down = syzygy(a).unwrap();
                let up = cosyzygy(down.inflation.source()).unwrap();
                assert!(stable_isomorphism(up.deflation.target(), a, BUDGET).unwrap().is_found());
                assert!(is_projective(up.inflation.target()).unwrap());
                assert!(is_projective(down.deflation.source()).unwrap());
            }
        }
    }

    #[test]
    fn shift_ignores_the_hull_choice() {
        for ctx in contexts() {
            for a in ctx.plain().objects() {
                let (_, wide) = free_cover(&dual(a));
                let iota = hull_from_cover(a, &wide).unwrap();
                let (other, _) = quotient(iota.target(), &iota.image_lifted());
                let fixed = cosyzygy(a).unwrap();
                assert!(stable_isomorphism(&other, fixed.deflation.target(), BUDGET).unwrap().is_found());
            }
        }
    }

    #[test]
    fn ext_orders_match_extension_classes() {
        let u = z4().universe;
        let s = obj(&u, "S");
        assert_eq!(ext_group(&s, &cosyzygy(&s).unwrap()).unwrap().order().value(), Some(2));
        assert_eq!(ses_class_count(&s, &s, BUDGET).unwrap(), Some(2));
        for ctx in contexts() {
            let u = ctx.plain();
            for a in u.objects() {
                for (j, b) in u.objects().iter().enumerate() {
                    let ext = ext_group(a, ctx.cosyzygy_at(j)).unwrap().order().value();
                    assert_eq!(ext, ses_class_count(a, b, BUDGET).unwrap());
                }
            }
        }
    }

    #[test]
    fn orthogonality_routes_agree_on_generators() {
        let u = z4().universe;
        let (r, s) = (obj(&u, "R"), obj(&u, "S"));
        let one = Morphism::identity(&s);
        assert!(!is_ext_orthogonal(&one, &one).unwrap());
        assert!(!ext_action_vanishes(&one, &one).unwrap());
        let two = Morphism::identity(&r).scale(2);
        for g in hom_group(&s, &r).unwrap().generators() {
            assert_eq!(is_ext_orthogonal(&two, g).unwrap(), ext_action_vanishes(&two, g).unwrap());
        }
        for ctx in contexts() {
            let u = ctx.plain();
            let gens: Vec<Morphism> = (0..u.len())
                .flat_map(|i| (0..u.len()).flat_map(move |j| u.hom_at(i, j).generators().to_vec()))
                .collect();
            for f in &gens {
                for g in &gens {
                    assert_eq!(ctx.is_ext_orthogonal(f, g).unwrap(), ext_action_vanishes(f, g).unwrap());
                }
            }
        }
    }

    fn elements_of(u: &Universe, i: usize, j: usize) -> Vec<Morphism> {
        u.hom_at(i, j).elements(BUDGET).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn orthogonality_routes_agree(a in 0usize..3, b in 0usize..3, c in 0usize..3, d in 0usize..3, x in 0usize..64, y in 0usize..64) {
            let ctx = &contexts()[3];
            let u = ctx.plain();
            let fs = elements_of(u, a, b);
            let gs = elements_of(u, c, d);
            let f = &fs[x % fs.len()];
            let g = &gs[y % gs.len()];
            prop_assert_eq!(ctx.is_ext_orthogonal(f, g).unwrap(), ext_action_vanishes(f, g).unwrap());
        }

        #[test]
        fn pi_kills_exactly_projective_maps(a in 0usize..3, b in 0usize..3, x in 0usize..64) {
            let ctx = &contexts()[3];
            let fs = elements_of(ctx.plain(), a, b);
            let f = &fs[x % fs.len()];
            let through = projective_part(f.source(), f.target()).unwrap().contains_vec(&f.flat());
            prop_assert_eq!(ctx.stable().is_zero(f).unwrap(), through);
        }

        #[test]
        fn shift_is_functorial(a in 0usize..3, b in 0usize..3, c in 0usize..3, x in 0usize..64, y in 0usize..64) {
            let ctx = &contexts()[3];
            let u = ctx.plain();
            let fs = elements_of(u, a, b);
            let gs = elements_of(u, b, c);
            let (f, g) = (&fs[x % fs.len()], &gs[y % gs.len()]);
            let (ca, cb, cc) = (ctx.cosyzygy_at(a), ctx.cosyzygy_at(b), ctx.cosyzygy_at(c));
            let whole = sigma_morphism(&compose(g, f).unwrap(), ca, cc).unwrap();
            let parts = compose(&sigma_morphism(g, cb, cc).unwrap(), &sigma_morphism(f, ca, cb).unwrap()).unwrap();
            let diff = whole.sub(&parts).unwrap();
            prop_assert!(projective_part(diff.source(), diff.target()).unwrap().contains_vec(&diff.flat()));
            let (oa, oc) = (ctx.syzygy_at(a), ctx.syzygy_at(c));
            let down = omega_morphism(&compose(g, f).unwrap(), oa, oc).unwrap();
            let parts = compose(
                &omega_morphism(g, ctx.syzygy_at(b), oc).unwrap(),
                &omega_morphism(f, oa, ctx.syzygy_at(b)).unwrap(),
            ).unwrap();
            let diff = down.sub(&parts).unwrap();
            prop_assert!(projective_part(diff.source(), diff.target()).unwrap().contains_vec(&diff.flat()));
        }
    }

    /// Ideals containing the projectives, seeded by single identities and
    /// Hom generators together with `P`.
    fn seeds(ctx: &StableContext) -> Vec<Ideal> {
        let u = ctx.plain();
        let p = ctx.projective_ideal().clone();
        let mut out = vec![p.clone(), Ideal::full(u)];
        for i in 0..u.len() {
            for j in 0..u.len() {
                for g in u.hom_at(i, j).generators() {
                    out.push(p.sum(&Ideal::generate(u, vec![g.clone()]).unwrap()).unwrap());
                }
            }
        }
        out
    }

    #[test]
    fn pi_round_trip() {
        for ctx in contexts() {
            assert!(ctx.pi_ideal(ctx.projective_ideal()).unwrap().is_zero());
            assert_eq!(ctx.pi_ideal(&Ideal::full(ctx.plain())).unwrap(), Ideal::full(ctx.stable()));
            for i in seeds(ctx) {
                assert!(ctx.contains_projectives(&i));
                assert_eq!(ctx.lift(&ctx.pi_ideal(&i).unwrap()).unwrap(), i);
            }
        }
        let ctx = &contexts()[0];
        let i = Ideal::object_ideal(ctx.plain(), &[0, 1]).unwrap();
        assert_eq!(ctx.lift(&ctx.pi_ideal(&i).unwrap()).unwrap(), i);
    }

    #[test]
    fn special_precovers() {
        let ctx = &contexts()[0];
        let u = ctx.plain();
        let (r, s) = (u.index_of_name("R").unwrap(), u.index_of_name("S").unwrap());
        let full = Ideal::full(u);
        let sp = ctx.ext_special_precover(&full, s).unwrap();
        assert!(sp.deflation.is_iso() && sp.precover && sp.orthogonal);
        let simple = ctx.projective_ideal().sum(&Ideal::object_ideal(u, &[s]).unwrap()).unwrap();
        let sp = ctx.ext_special_precover(&simple, s).unwrap();
        assert!(sp.precover && sp.orthogonal);
        let sp = ctx.ext_special_precover(ctx.projective_ideal(), r).unwrap();
        assert!(sp.deflation.is_iso());
        assert_eq!(sp.kernel.source().order().value(), Some(1));
        let sp = ctx.ext_special_precover(ctx.projective_ideal(), s).unwrap();
        assert!(sp.precover && sp.orthogonal);
        assert!(is_projective(sp.deflation.source()).unwrap());
    }

    /// `(⊥₁(I^{⊥₁}), I^{⊥₁})` for each seed, deduplicated.
    fn cotorsion_pairs(ctx: &StableContext) -> Vec<(Ideal, Ideal)> {
        let mut out: Vec<(Ideal, Ideal)> = Vec::new();
        for seed in seeds(ctx) {
            let second = ctx.ext_right_orthogonal(&seed).unwrap();
            let first = ctx.ext_left_orthogonal(&second).unwrap();
            if !out.iter().any(|(a, b)| *a == first && *b == second) {
                out.push((first, second));
            }
        }
        out
    }

    #[test]
    fn transfer_on_the_corpus() {
        let mut total = 0;
        for ctx in contexts() {
            for (first, second) in cotorsion_pairs(ctx) {
                let report = ctx.verify_transfer(&first, &second).unwrap();
                assert_eq!(report.verdict(), Verdict::Pass, "{:?}", report.findings);
                total += 1;
            }
        }
        assert!(total >= 5, "{total} pairs");
    }

    #[test]
    fn trivial_and_simple_pairs() {
        let ctx = &contexts()[0];
        let u = ctx.plain();
        let report = ctx.verify_transfer(ctx.projective_ideal(), &Ideal::full(u)).unwrap();
        assert_eq!(report.verdict(), Verdict::Pass);
        assert!(report.object_pair.is_some());
        let s = u.index_of_name("S").unwrap();
        let simple = ctx.projective_ideal().sum(&Ideal::object_ideal(u, &[s]).unwrap()).unwrap();
        let partner = ctx.ext_right_orthogonal(&simple).unwrap();
        assert_eq!(partner, *ctx.projective_ideal());
        let report = ctx.verify_transfer(&simple, &partner).unwrap();
        assert_eq!(report.verdict(), Verdict::Pass);
        let (obs_i, obs_j) = report.object_pair.unwrap();
        assert_eq!(obs_i.len(), 2);
        assert_eq!(obs_j, vec![u.index_of_name("R").unwrap()]);
    }

    #[test]
    fn non_maximal_pair_is_named() {
        let ctx = &contexts()[0];
        let p = ctx.projective_ideal();
        let report = ctx.verify_transfer(p, p).unwrap();
        assert_eq!(report.finding("maximal").unwrap().verdict, Verdict::Fail);
        assert_eq!(report.finding("stable-torsion-pair").unwrap().verdict, Verdict::Fail);
        let full = Ideal::full(ctx.plain());
        assert!(matches!(ctx.verify_transfer(&full, &full), Err(Error::Input(_))));
    }

    #[test]
    fn stable_triangles_pass_the_verifiers() {
        for u in [z4().universe, f2x2().universe] {
            let st = stable_structure(&u, BUDGET).unwrap();
            assert_eq!(st.data.len(), 3);
            for f in st.verify() {
                assert_eq!(f.verdict, Verdict::Pass, "{f:?}");
            }
        }
    }

    #[test]
    fn truncation_is_needed_for_composites() {
        let st = stable_structure(&z4().universe, BUDGET).unwrap();
        let plain = crate::wkc::verify_we_axioms(&st.data, &st.conflations, BUDGET);
        let we2 = plain.iter().find(|f| f.id == "WE2").unwrap();
        assert_eq!(we2.verdict, Verdict::Fail);
        let within = st.verify();
        let we2 = within.iter().find(|f| f.id == "WE2").unwrap();
        assert!(we2.witness.as_deref().is_some_and(|w| w.contains("leave the data")), "{we2:?}");
        assert_eq!(within.iter().map(|f| f.id.to_string()).collect::<Vec<_>>().len(), 9);
    }
}
