//! Dispatch of single commands to the core library.

use std::path::Path;
use std::sync::Arc;

use idealab_core::algcat::{AlgModule, Morphism};
use idealab_core::approx::{
    classify_preradical, corrupt_deflation, generated_torsion_pair, is_cover, is_envelope, preradical_combine,
    salce_report, Preradical, PreradicalOp, SalceReport, TorsionPair,
};
use idealab_core::ideals::{Ideal, Side, Universe};
use idealab_core::stab::{
    check_self_injective, cosyzygy, ext_group, is_ext_orthogonal, ses_class_count, stable_hom, stable_isomorphism,
    stable_structure, syzygy, ShiftMatch, StableContext, StableStructure,
};
use idealab_core::wkc::{
    additive_closure, arrow_of, morphism_of, short_exact_sequences, split_conflations, to_conflations, verify_pullback,
    verify_we_axioms, verify_wkc_axioms, weak_extension_ideal, weak_pullback, with_five_lemma_breaker,
    without_inflation, without_we1_pair, Conflation, DiamondMode, Finding, FiniteCategoryData, ModuleCategory,
    ModuleConflation,
};
use idealab_core::znlin::{GroupOrder, ZnMatrix};
use idealab_core::Verdict;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::args::{Command, IdealVerb, ModeArg, OpArg, SideArg, StableVerb, TorsionVerb, VerifyVerb, WkcVerb};
use crate::report::CheckRecord;
use crate::workspace::{ModuleRef, MorphismSpec, SequenceSpec, Workspace};
use crate::{anchors, suite, CliError};

pub fn run(ws: &Workspace, cmd: &Command) -> Result<Vec<CheckRecord>, CliError> {
    match cmd {
        Command::Ideal { verb } => ideal(ws, verb),
        Command::Torsion { verb } => torsion(ws, verb),
        Command::Wkc { verb } => wkc(ws, verb),
        Command::Stable { verb } => stable(ws, verb),
        Command::Verify { verb: VerifyVerb::All } => suite::verify_all(ws),
    }
}

fn rec(id: impl Into<String>, anchor: &str, verdict: Verdict) -> CheckRecord {
    CheckRecord::new(id, anchor, verdict)
}

fn pass_if(ok: bool) -> Verdict {
    Verdict::from_bool(ok)
}

pub(crate) fn order_json(o: &GroupOrder) -> Value {
    match o.value() {
        Some(v) if v <= u64::MAX as u128 => json!(v as u64),
        Some(v) => json!(v.to_string()),
        None => json!("overflow"),
    }
}

pub(crate) fn ideal_json(ws: &Workspace, ideal: &Ideal) -> Value {
    let u = ideal.universe();
    let mut comps = Vec::new();
    for i in 0..u.len() {
        for j in 0..u.len() {
            let gens = ideal.component_generators(u.object(i), u.object(j)).expect("universe objects");
            if gens.is_empty() {
                continue;
            }
            let mats: Vec<Vec<Vec<u32>>> = gens.iter().map(|g| g.matrix().row_vecs()).collect();
            comps.push(json!({"from": u.name(i), "to": u.name(j), "generators": mats}));
        }
    }
    let equal: Vec<&str> = ws.ideals().filter(|(_, x)| *x == ideal).map(|(n, _)| n).collect();
    json!({"components": comps, "equal_to": equal})
}

pub(crate) fn map_json(ws: &Workspace, f: &Morphism) -> Value {
    serde_json::to_value(ws.morphism_spec(f)).expect("morphism serializes")
}

fn parse_matrix(s: &str) -> Result<Vec<Vec<u32>>, CliError> {
    serde_json::from_str(s).map_err(|e| CliError::Input(format!("--matrix: {e}")))
}

fn side(s: SideArg) -> Side {
    match s {
        SideArg::Left => Side::Left,
        SideArg::Right => Side::Right,
    }
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn ideal(ws: &Workspace, verb: &IdealVerb) -> Result<Vec<CheckRecord>, CliError> {
    Ok(match verb {
        IdealVerb::Ann { side: s, ideal } => {
            let i = ws.ideal(&ideal.ideal)?;
            let a = i.annihilator(side(*s));
            let product = match s {
                SideArg::Left => a.product(i)?,
                SideArg::Right => i.product(&a)?,
            };
            vec![
                rec("ann", anchors::ORTH_ANN, Verdict::Pass).with(ideal_json(ws, &a)),
                rec("product-vanishes", anchors::Z_P2, pass_if(product.is_zero())),
            ]
        }
        IdealVerb::Sum(two) => {
            let (i, j) = (ws.ideal(&two.first)?, ws.ideal(&two.second)?);
            let s = i.sum(j)?;
            let left = s.left_annihilator() == i.left_annihilator().meet(&j.left_annihilator())?;
            let right = s.right_annihilator() == i.right_annihilator().meet(&j.right_annihilator())?;
            vec![
                rec("sum", anchors::IDEAL, Verdict::Pass).with(ideal_json(ws, &s)),
                rec("orth-of-sum", anchors::ORTH_SUM, pass_if(left && right)),
            ]
        }
        IdealVerb::Meet(two) => {
            let (i, j) = (ws.ideal(&two.first)?, ws.ideal(&two.second)?);
            vec![rec("meet", anchors::IDEAL, Verdict::Pass).with(ideal_json(ws, &i.meet(j)?))]
        }
        IdealVerb::Prod(two) => {
            let (i, j) = (ws.ideal(&two.first)?, ws.ideal(&two.second)?);
            let p = i.product(j)?;
            vec![
                rec("prod", anchors::IDEAL, Verdict::Pass).with(ideal_json(ws, &p)),
                rec("orth-of-prod", anchors::ORTH_PROD, pass_if(suite::orth_of_prod(i, j)?)),
            ]
        }
        IdealVerb::Conductor { side: s, ideals } => {
            let (i, j) = (ws.ideal(&ideals.first)?, ws.ideal(&ideals.second)?);
            let c = i.conductor(j, side(*s))?;
            let lands = match s {
                SideArg::Left => i.includes(&c.product(j)?),
                SideArg::Right => j.includes(&i.product(&c)?),
            };
            vec![
                rec("conductor", anchors::CONDUCTOR, Verdict::Pass).with(ideal_json(ws, &c)),
                rec("conductor-lands", anchors::CONDUCTOR, pass_if(lands)),
            ]
        }
        IdealVerb::Member { ideal, map } => {
            let i = ws.ideal(&ideal.ideal)?;
            let spec = MorphismSpec {
                from: ModuleRef::Name(map.from.clone()),
                to: ModuleRef::Name(map.to.clone()),
                matrix: parse_matrix(&map.matrix)?,
            };
            let f = ws.morphism(&spec, "--from/--to/--matrix")?;
            ws.object(&map.from)?;
            ws.object(&map.to)?;
            vec![rec("member", anchors::IDEAL, pass_if(i.contains(&f)?)).with(map_json(ws, &f))]
        }
        IdealVerb::Objects(one) => {
            let i = ws.ideal(&one.ideal)?;
            let oa = i.object_analysis();
            let names: Vec<&str> = oa.objects.iter().map(|&k| ws.universe.name(k)).collect();
            vec![rec("objects", anchors::OBJECT_IDEAL, Verdict::Pass)
                .with(json!({"objects": names, "object_ideal": oa.is_object_ideal}))]
        }
    })
}

fn salce_json(ws: &Workspace, r: &SalceReport, i: &Morphism, j: &Morphism) -> Value {
    json!({
        "clauses": {"precover": r.precover, "members": r.members, "preenvelope": r.preenvelope, "both": r.both},
        "inflation": map_json(ws, i),
        "deflation": map_json(ws, j),
    })
}

fn salce_records(
    ws: &Workspace,
    pair: &TorsionPair,
    id: &str,
    i: &Morphism,
    j: &Morphism,
) -> Result<Vec<CheckRecord>, CliError> {
    let r = salce_report(&pair.torsion, &pair.free, i, j)?;
    let w = salce_json(ws, &r, i, j);
    let agree = CheckRecord::new(format!("salce-agree{id}"), anchors::SALCE, pass_if(r.all_agree()));
    let holds = CheckRecord::new(format!("salce-holds{id}"), anchors::SALCE, pass_if(r.precover));
    let agree = if r.all_agree() { agree } else { agree.with(w.clone()) };
    let holds = if r.precover { holds } else { holds.with(w) };
    Ok(vec![agree, holds])
}

fn torsion(ws: &Workspace, verb: &TorsionVerb) -> Result<Vec<CheckRecord>, CliError> {
    let u = &ws.universe;
    Ok(match verb {
        TorsionVerb::Generate(one) => {
            let pair = generated_torsion_pair(ws.ideal(&one.ideal)?)?;
            let mut out: Vec<CheckRecord> = pair
                .verify()?
                .into_iter()
                .map(|c| rec(format!("torsion-pair: {}", c.name), anchors::ITP, pass_if(c.holds)))
                .collect();
            for s in &pair.sequences {
                out.push(rec(format!("trace:{}", u.name(s.object)), anchors::ET, Verdict::Pass).with(json!({
                    "trace": s.trace.basis(),
                    "torsion_order": order_json(&s.torsion().order()),
                    "free_order": order_json(&s.free().order()),
                    "inclusion": map_json(ws, &s.inclusion),
                    "projection": map_json(ws, &s.projection),
                })));
            }
            out.push(rec("torsion-ideal", anchors::ITP, Verdict::Pass).with(ideal_json(ws, &pair.torsion)));
            out.push(rec("free-ideal", anchors::ITP, Verdict::Pass).with(ideal_json(ws, &pair.free)));
            out
        }
        TorsionVerb::Salce { ideal, corrupt, replay } => {
            let pair = generated_torsion_pair(ws.ideal(&ideal.ideal)?)?;
            if let Some(path) = replay {
                let seq: SequenceSpec = read_json(path)?;
                let i = ws.morphism(&seq.inflation, "inflation")?;
                let j = ws.morphism(&seq.deflation, "deflation")?;
                if *i.target() != *j.source() {
                    return Err(CliError::Input("replayed maps do not compose".into()));
                }
                return salce_records(ws, &pair, "", &i, &j);
            }
            let bad = corrupt.as_deref().map(|x| ws.object(x)).transpose()?;
            let mut out = Vec::new();
            for s in &pair.sequences {
                let (i, j) = if bad == Some(s.object) {
                    corrupt_deflation(&pair, s.object)
                } else {
                    (s.inclusion.clone(), s.projection.clone())
                };
                out.extend(salce_records(ws, &pair, &format!(":{}", u.name(s.object)), &i, &j)?);
            }
            out
        }
        TorsionVerb::Cover { ideal, object } => {
            let pair = generated_torsion_pair(ws.ideal(&ideal.ideal)?)?;
            let s = &pair.sequences[ws.object(object)?];
            let budget = ws.budgets.cover as u128;
            vec![
                rec(format!("cover:{object}"), anchors::MIN_SL, is_cover(&s.inclusion, &pair.torsion, budget)?)
                    .with(map_json(ws, &s.inclusion)),
                rec(format!("envelope:{object}"), anchors::MIN_SL, is_envelope(&s.projection, &pair.free, budget)?)
                    .with(map_json(ws, &s.projection)),
            ]
        }
        TorsionVerb::Preradical(one) => {
            let i = ws.ideal(&one.ideal)?;
            let t = Preradical::trace_of(i);
            let values: Vec<Value> =
                t.values()?.iter().enumerate().map(|(k, v)| json!({"object": u.name(k), "value": v.basis()})).collect();
            let pair = t.torsion_pair()?;
            vec![
                rec("values", anchors::PRERADICAL, Verdict::Pass).with(json!({
                    "values": values,
                    "left_exact": t.is_left_exact()?,
                    "closed": pair.is_closed(),
                })),
                rec("natural", anchors::PRERADICAL, pass_if(t.is_natural()?)),
                rec("ideal-matches", anchors::PRERADICAL, pass_if(t.ideal()? == pair.torsion)),
            ]
        }
        TorsionVerb::Combine { ideals, op } => {
            let first = generated_torsion_pair(ws.ideal(&ideals.first)?)?;
            let second = generated_torsion_pair(ws.ideal(&ideals.second)?)?;
            let op = match op {
                OpArg::Sum => PreradicalOp::Sum,
                OpArg::Meet => PreradicalOp::Meet,
                OpArg::Compose => PreradicalOp::Compose,
                OpArg::Colon => PreradicalOp::Colon,
            };
            let r = preradical_combine(&first, &second, op)?;
            vec![rec(format!("combine:{}", op.as_str()), anchors::PRERADICALS, pass_if(r.holds())).with(json!({
                "torsion_matches": r.torsion_matches,
                "free_matches": r.free_matches,
                "pointwise_matches": r.pointwise_matches,
            }))]
        }
        TorsionVerb::Classify(one) => {
            let c = classify_preradical(&Preradical::trace_of(ws.ideal(&one.ideal)?))?;
            vec![rec("classify", anchors::RAD, pass_if(c.consistent())).with(json!({
                "idempotent": c.idempotent,
                "radical": c.radical,
                "torsion_object_ideal": c.torsion_object_ideal,
                "free_object_ideal": c.free_object_ideal,
            }))]
        }
    })
}

/// A conflation set over a finite category: the additive closure of the
/// universe, or the stable truncation.
pub(crate) enum Setting {
    Plain { category: ModuleCategory, set: Vec<Conflation>, split: bool },
    Stable(StableStructure),
}

impl Setting {
    pub(crate) fn resolve(ws: &Workspace, name: &str) -> Result<Setting, CliError> {
        let budget = ws.budgets.enumeration as u128;
        if name == "stable" {
            return Ok(Setting::Stable(stable_structure(&ws.universe, budget)?));
        }
        let category = additive_closure(&ws.universe, false)?;
        let (set, split) = match name {
            "ses" => {
                let list = short_exact_sequences(&category, budget)?;
                (to_conflations(&category.universe, &list)?, false)
            }
            "split" => (split_conflations(&category.data), true),
            other => (to_conflations(&category.universe, &ws.conflation_set(other)?)?, false),
        };
        Ok(Setting::Plain { category, set, split })
    }

    pub(crate) fn data(&self) -> &FiniteCategoryData {
        match self {
            Setting::Plain { category, .. } => &category.data,
            Setting::Stable(st) => &st.data,
        }
    }

    pub(crate) fn universe(&self) -> &Arc<Universe> {
        match self {
            Setting::Plain { category, .. } => &category.universe,
            Setting::Stable(st) => &st.universe,
        }
    }

    pub(crate) fn set(&self) -> &[Conflation] {
        match self {
            Setting::Plain { set, .. } => set,
            Setting::Stable(st) => &st.conflations,
        }
    }

    pub(crate) fn findings(&self, ladder: u128) -> Vec<Finding> {
        match self {
            Setting::Plain { category, set, split } => {
                let mut f = verify_wkc_axioms(&category.data, set, ladder);
                if !split {
                    f.extend(verify_we_axioms(&category.data, set, ladder));
                }
                f
            }
            Setting::Stable(st) => st.verify(),
        }
    }
}

pub(crate) fn finding_records(prefix: &str, findings: &[Finding]) -> Vec<CheckRecord> {
    findings
        .iter()
        .map(|f| {
            let r = CheckRecord::new(format!("{prefix}{}", f.id), anchors::for_axiom(&f.id), f.verdict);
            match &f.witness {
                Some(w) => r.with(json!(w)),
                None => r,
            }
        })
        .collect()
}

/// Engineered violations: drop a WE1 pair, drop a composite inflation, or
/// add a Five Lemma breaker.
pub fn engineer(
    data: &FiniteCategoryData,
    set: &[Conflation],
    kind: &str,
    ladder: u128,
) -> Result<Vec<Conflation>, CliError> {
    let first = (0..data.len())
        .find(|&x| Some(x) != data.zero_object())
        .ok_or_else(|| CliError::Input("the category has no nonzero object".into()))?;
    match kind {
        "we1" => Ok(without_we1_pair(data, set, first)),
        "we3" => Ok(with_five_lemma_breaker(data, set, first)?),
        "we2" => {
            // a composite of listed inflations whose removal is visible
            for c in set {
                let k = &c.inflation;
                if data.is_iso(k) || data.is_zero(k) || !data.label(k.to).contains('+') {
                    continue;
                }
                let smaller = without_inflation(data, set, k, ladder);
                if smaller.len() == set.len() {
                    continue;
                }
                let f = verify_we_axioms(data, &smaller, ladder);
                if f.iter().any(|x| x.id == "WE2" && x.verdict == Verdict::Fail) {
                    return Ok(smaller);
                }
            }
            Err(CliError::Input("no composite inflation whose removal breaks WE2".into()))
        }
        other => Err(CliError::Input(format!("unknown violation {other:?} (expected we1, we2 or we3)"))),
    }
}

fn wkc(ws: &Workspace, verb: &WkcVerb) -> Result<Vec<CheckRecord>, CliError> {
    let ladder = ws.budgets.ladder as u128;
    Ok(match verb {
        WkcVerb::Verify { set, violate } => {
            let setting = Setting::resolve(ws, set)?;
            match violate {
                None => finding_records("", &setting.findings(ladder)),
                Some(kind) => {
                    let data = setting.data();
                    let broken = engineer(data, setting.set(), kind, ladder)?;
                    let mut f = verify_wkc_axioms(data, &broken, ladder);
                    f.extend(verify_we_axioms(data, &broken, ladder));
                    finding_records("", &f)
                }
            }
        }
        WkcVerb::Pullback { set, index, from, matrix } => {
            let setting = Setting::resolve(ws, set)?;
            let (data, u) = (setting.data(), setting.universe());
            let c = &setting
                .set()
                .get(*index)
                .ok_or_else(|| {
                    CliError::Input(format!("--index {index}: the set has {} conflations", setting.set().len()))
                })?
                .deflation;
            let x = data.index_of(from).ok_or_else(|| CliError::Input(format!("--from: unknown object {from:?}")))?;
            let (src, tgt) = (u.object(x), u.object(c.to));
            let rows = parse_matrix(matrix)?;
            let m = ZnMatrix::from_rows(ws.modulus(), tgt.gens(), &rows)
                .map_err(|e| CliError::Input(format!("--matrix: {e}")))?;
            if m.rows() != src.gens() {
                return Err(CliError::Input(format!("--matrix: expected {} rows", src.gens())));
            }
            let g = arrow_of(
                u,
                &Morphism::new(src.clone(), tgt.clone(), m).map_err(|e| CliError::Input(format!("--matrix: {e}")))?,
            )?;
            let sq = weak_pullback(data, setting.set(), c, &g)?;
            let ok = verify_pullback(data, c, &g, &sq)?;
            let plain = |a| morphism_of(u, a).matrix().row_vecs();
            vec![CheckRecord::new("pullback", anchors::WEAK_PB, pass_if(ok)).with(json!({
                "corner": data.label(sq.corner),
                "deflation": {"from": data.label(c.from), "to": data.label(c.to), "matrix": plain(c)},
                "to_domain": plain(&sq.to_domain),
                "to_other": plain(&sq.to_other),
            }))]
        }
        WkcVerb::Diamond { ideals, mode, set } => {
            let (i, j) = (ws.ideal(&ideals.first)?, ws.ideal(&ideals.second)?);
            let (mode, list) = match mode {
                ModeArg::Formula => (DiamondMode::Formula, Vec::new()),
                ModeArg::Search => (DiamondMode::Search, search_conflations(ws, set)?),
            };
            let d = weak_extension_ideal(i, j, mode, &list)?;
            let mut w = ideal_json(ws, &d.ideal);
            w["exact"] = json!(d.exact);
            vec![CheckRecord::new(
                "diamond",
                anchors::DIAMOND,
                if d.exact { Verdict::Pass } else { Verdict::Undecided },
            )
            .with(w)]
        }
    })
}

/// Module conflations whose end terms are universe objects.
fn search_conflations(ws: &Workspace, set: &str) -> Result<Vec<ModuleConflation>, CliError> {
    let list = if set == "ses" {
        let category = additive_closure(&ws.universe, false)?;
        short_exact_sequences(&category, ws.budgets.enumeration as u128)?
    } else {
        ws.conflation_set(set)?
    };
    let u = &ws.universe;
    Ok(list
        .into_iter()
        .filter(|s| u.index_of(s.inflation.source()).is_some() && u.index_of(s.deflation.target()).is_some())
        .map(|s| {
            let a = u.object(u.index_of(s.inflation.source()).expect("checked")).clone();
            let c = u.object(u.index_of(s.deflation.target()).expect("checked")).clone();
            let k = Morphism::new(a, s.inflation.target().clone(), s.inflation.matrix().clone()).expect("same module");
            let d = Morphism::new(s.deflation.source().clone(), c, s.deflation.matrix().clone()).expect("same module");
            ModuleConflation { inflation: k, deflation: d }
        })
        .collect())
}

pub(crate) fn context(ws: &Workspace) -> Result<StableContext, CliError> {
    Ok(StableContext::new(&ws.universe, ws.budgets.enumeration as u128)?)
}

fn object_module(ws: &Workspace, name: &str) -> Result<Arc<AlgModule>, CliError> {
    Ok(ws.universe.object(ws.object(name)?).clone())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PairSpec {
    first: MorphismSpec,
    second: MorphismSpec,
}

fn stable(ws: &Workspace, verb: &StableVerb) -> Result<Vec<CheckRecord>, CliError> {
    let budget = ws.budgets.enumeration as u128;
    Ok(match verb {
        StableVerb::Selfinj => {
            let r = check_self_injective(&ws.algebra, budget)?;
            let mut w = json!({"left_ideals_tested": r.ideals_tested});
            if let Some(f) = &r.counterexample {
                w["non_extending_map"] = map_json(ws, f);
            }
            vec![rec("self-injective", anchors::SELFINJ, r.verdict).with(w)]
        }
        StableVerb::Hom { from, to } => {
            context(ws)?;
            let (a, b) = (object_module(ws, from)?, object_module(ws, to)?);
            let h = stable_hom(&a, &b)?;
            let gens: Vec<Value> = h
                .generators()
                .iter()
                .zip(h.generator_orders())
                .map(|(g, o)| json!({"matrix": g.matrix().row_vecs(), "order": o}))
                .collect();
            vec![rec(format!("stable-hom:{from}:{to}"), anchors::STABLE, Verdict::Pass)
                .with(json!({"order": order_json(&h.order()), "generators": gens}))]
        }
        StableVerb::Sigma { object } => {
            let ctx = context(ws)?;
            let k = ws.object(object)?;
            let a = ws.universe.object(k);
            let hull = cosyzygy(a)?;
            let shifted = hull.deflation.target().clone();
            let back = syzygy(&shifted)?;
            let inverse = stable_isomorphism(back.inflation.source(), a, budget)?;
            let matched = match ctx.shift_at(k) {
                ShiftMatch::Zero => json!("0"),
                ShiftMatch::Object { index, .. } => json!(ws.universe.name(*index)),
                ShiftMatch::Outside => Value::Null,
            };
            vec![rec(format!("sigma:{object}"), anchors::SHIFT, pass_if(inverse.is_found())).with(json!({
                "shift": serde_json::to_value(crate::workspace::module_spec(&shifted)).expect("spec serializes"),
                "universe_object": matched,
                "hull": map_json(ws, &hull.inflation),
            }))]
        }
        StableVerb::Ext { from, to } => {
            context(ws)?;
            let (a, b) = (object_module(ws, from)?, object_module(ws, to)?);
            let ext = ext_group(&a, &cosyzygy(&b)?)?.order();
            let count = ses_class_count(&a, &b, budget)?;
            let verdict = match (ext.value(), count) {
                (_, None) => Verdict::Undecided,
                (Some(e), Some(c)) => pass_if(e == c),
                (None, Some(_)) => Verdict::Fail,
            };
            vec![rec(format!("ext:{from}:{to}"), anchors::EXT, verdict)
                .with(json!({"ext_order": order_json(&ext), "extension_classes": count.map(|c| c as u64)}))]
        }
        StableVerb::Orth { first, second, replay } => {
            context(ws)?;
            if let Some(path) = replay {
                let pair: PairSpec = read_json(path)?;
                let f = ws.morphism(&pair.first, "first")?;
                let g = ws.morphism(&pair.second, "second")?;
                let ok = is_ext_orthogonal(&f, &g)?;
                return Ok(vec![rec("ext-orthogonal", anchors::EXT, pass_if(ok))
                    .with(json!({"first": map_json(ws, &f), "second": map_json(ws, &g)}))]);
            }
            let (Some(first), Some(second)) = (first, second) else {
                return Err(CliError::Input("stable orth needs -i and -j, or --replay".into()));
            };
            let (i, j) = (ws.ideal(first)?, ws.ideal(second)?);
            let mut out = Vec::new();
            let mut bad = None;
            'outer: for f in i.generators() {
                for g in j.generators() {
                    if !is_ext_orthogonal(&f, &g)? {
                        bad = Some((f, g));
                        break 'outer;
                    }
                }
            }
            let r = rec("ext-orthogonal", anchors::EXT, pass_if(bad.is_none()));
            out.push(match bad {
                Some((f, g)) => r.with(json!({"first": map_json(ws, &f), "second": map_json(ws, &g)})),
                None => r,
            });
            out
        }
        StableVerb::Special { ideal, object } => {
            let ctx = context(ws)?;
            let sp = ctx.ext_special_precover(ws.ideal(&ideal.ideal)?, ws.object(object)?)?;
            let w = json!({"deflation": map_json(ws, &sp.deflation), "kernel": map_json(ws, &sp.kernel)});
            vec![
                rec(format!("precover:{object}"), anchors::SPECIAL, pass_if(sp.precover)).with(w),
                rec(format!("kernel-orthogonal:{object}"), anchors::SPECIAL, pass_if(sp.orthogonal)),
            ]
        }
        StableVerb::Transfer(two) => {
            let ctx = context(ws)?;
            let (i, j) = (ws.ideal(&two.first)?, ws.ideal(&two.second)?);
            transfer_records(ws, &ctx, i, j, "")?
        }
    })
}

pub(crate) fn transfer_records(
    ws: &Workspace,
    ctx: &StableContext,
    i: &Ideal,
    j: &Ideal,
    prefix: &str,
) -> Result<Vec<CheckRecord>, CliError> {
    let report = ctx.verify_transfer(i, j)?;
    let mut out: Vec<CheckRecord> = report
        .findings
        .iter()
        .map(|f| {
            let anchor = if f.id == "object-pair" { anchors::OBJECT_PAIR } else { anchors::TRANSFER };
            let r = CheckRecord::new(format!("{prefix}{}", f.id), anchor, f.verdict);
            match &f.witness {
                Some(w) => r.with(json!(w)),
                None => r,
            }
        })
        .collect();
    if let Some((a, b)) = &report.object_pair {
        let names = |v: &Vec<usize>| v.iter().map(|&k| ws.universe.name(k).to_string()).collect::<Vec<_>>();
        if let Some(last) = out.iter_mut().find(|r| r.id.ends_with("object-pair")) {
            if last.witness.is_none() {
                last.witness = Some(json!({"first": names(a), "second": names(b)}));
            }
        }
    }
    Ok(out)
}
