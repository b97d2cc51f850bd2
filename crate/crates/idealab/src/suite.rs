//! `verify all`: every property suite that applies to a workspace, with one
//! aggregated record per property.

use idealab_core::algcat::Morphism;
use idealab_core::approx::{
    classify_preradical, corrupt_deflation, et_precover, et_preenvelope, generated_torsion_pair, is_precover,
    is_preenvelope, preradical_combine, salce_report, verify_salce, Preradical, PreradicalOp, TorsionPair,
};
use idealab_core::ideals::{is_hom_orthogonal, Ideal};
use idealab_core::stab::{check_self_injective, cosyzygy, ext_group, ses_class_count, StableContext};
use idealab_core::wkc::{exactness_gap, verify_we_axioms, verify_wkc_axioms};
use idealab_core::Verdict;
use serde_json::{json, Value};

use crate::commands::{engineer, finding_records, map_json, Setting};
use crate::report::CheckRecord;
use crate::workspace::Workspace;
use crate::{anchors, CliError};

/// Counts instances of one property and keeps the first counterexample.
struct Tally {
    id: String,
    anchor: &'static str,
    checked: usize,
    failure: Option<Value>,
    undecided: Option<Value>,
}

impl Tally {
    fn new(id: &str, anchor: &'static str) -> Self {
        Tally { id: id.to_string(), anchor, checked: 0, failure: None, undecided: None }
    }

    fn add(&mut self, verdict: Verdict, witness: impl FnOnce() -> Value) {
        self.checked += 1;
        match verdict {
            Verdict::Pass => {}
            Verdict::Fail if self.failure.is_none() => self.failure = Some(witness()),
            Verdict::Undecided if self.undecided.is_none() => self.undecided = Some(witness()),
            _ => {}
        }
    }

    fn check(&mut self, ok: bool, witness: impl FnOnce() -> Value) {
        self.add(Verdict::from_bool(ok), witness);
    }

    fn finish(self) -> CheckRecord {
        let (verdict, example) = match (self.failure, self.undecided) {
            (Some(f), _) => (Verdict::Fail, Some(f)),
            (None, Some(u)) => (Verdict::Undecided, Some(u)),
            (None, None) => (Verdict::Pass, None),
        };
        let mut w = json!({"checked": self.checked});
        if let Some(e) = example {
            w["counterexample"] = e;
        }
        CheckRecord::new(self.id, self.anchor, verdict).with(w)
    }
}

/// Named ideals of the workspace, zero, everything, object ideals and
/// principal ideals of Hom generators, closed under annihilators, sums,
/// meets and products, without repetitions.
pub fn corpus(ws: &Workspace) -> Result<Vec<(String, Ideal)>, CliError> {
    let u = &ws.universe;
    let mut out: Vec<(String, Ideal)> = Vec::new();
    let mut push = |name: String, ideal: Ideal| push_new(&mut out, name, ideal);
    for (name, i) in ws.ideals() {
        push(name.to_string(), i.clone());
    }
    push("0".into(), Ideal::zero(u));
    push("Hom".into(), Ideal::full(u));
    for x in 0..u.len() {
        push(format!("Ob({})", u.name(x)), Ideal::object_ideal(u, &[x])?);
    }
    for x in 0..u.len() {
        for y in 0..u.len() {
            for (k, g) in u.hom_at(x, y).generators().iter().enumerate() {
                push(format!("<{}->{}#{k}>", u.name(x), u.name(y)), Ideal::generate(u, vec![g.clone()])?);
            }
        }
    }
    let mut start = 0;
    while start < out.len() {
        let end = out.len();
        for a in start..end {
            let (name, i) = out[a].clone();
            push_new(&mut out, format!("l({name})"), i.left_annihilator());
            push_new(&mut out, format!("r({name})"), i.right_annihilator());
            for b in 0..end {
                let (other, j) = out[b].clone();
                push_new(&mut out, format!("{name}+{other}"), i.sum(&j)?);
                push_new(&mut out, format!("{name}&{other}"), i.meet(&j)?);
                push_new(&mut out, format!("{name}*{other}"), i.product(&j)?);
            }
        }
        start = end;
    }
    Ok(out)
}

fn push_new(out: &mut Vec<(String, Ideal)>, name: String, ideal: Ideal) {
    if !out.iter().any(|(_, x)| *x == ideal) {
        out.push((name, ideal));
    }
}

/// Every nonzero morphism between universe objects on its own and every
/// unordered pair of them.
fn generator_families(ws: &Workspace, budget: u128) -> Result<Vec<Vec<Morphism>>, CliError> {
    let u = &ws.universe;
    let mut maps = Vec::new();
    for x in 0..u.len() {
        for y in 0..u.len() {
            let elems =
                u.hom_at(x, y).elements(budget).ok_or_else(|| CliError::Input("hom enumeration over budget".into()))?;
            maps.extend(elems.into_iter().filter(|f| !f.is_zero()));
        }
    }
    let mut out: Vec<Vec<Morphism>> = maps.iter().map(|f| vec![f.clone()]).collect();
    for (k, f) in maps.iter().enumerate() {
        for g in &maps[k + 1..] {
            out.push(vec![f.clone(), g.clone()]);
        }
    }
    Ok(out)
}

/// `ℓ(I₁I₂) = ℓ(ℓ(I₂) : I₁)` and `r(I₁I₂) = r(I₂ : r(I₁))`.
pub fn orth_of_prod(i: &Ideal, j: &Ideal) -> Result<bool, CliError> {
    let p = i.product(j)?;
    Ok(p.left_annihilator() == j.left_annihilator().left_conductor(i)?
        && p.right_annihilator() == j.right_conductor(&i.right_annihilator())?)
}

pub fn orth_of_sum(i: &Ideal, j: &Ideal) -> Result<bool, CliError> {
    let s = i.sum(j)?;
    Ok(s.left_annihilator() == i.left_annihilator().meet(&j.left_annihilator())?
        && s.right_annihilator() == i.right_annihilator().meet(&j.right_annihilator())?)
}

/// Annihilator membership against Hom-orthogonality to every generator,
/// over all elements of every Hom group.
pub fn orth_and_ann(ideal: &Ideal, budget: u128) -> Result<Verdict, CliError> {
    let u = ideal.universe();
    let gens = ideal.generators();
    let (l, r) = (ideal.left_annihilator(), ideal.right_annihilator());
    for x in 0..u.len() {
        for y in 0..u.len() {
            let Some(elems) = u.hom_at(x, y).elements(budget) else {
                return Ok(Verdict::Undecided);
            };
            for f in elems {
                let mut left_orth = true;
                let mut right_orth = true;
                for g in &gens {
                    left_orth &= is_hom_orthogonal(u, g, &f)?;
                    right_orth &= is_hom_orthogonal(u, &f, g)?;
                }
                if l.contains(&f)? != left_orth || r.contains(&f)? != right_orth {
                    return Ok(Verdict::Fail);
                }
            }
        }
    }
    Ok(Verdict::Pass)
}

pub fn verify_all(ws: &Workspace) -> Result<Vec<CheckRecord>, CliError> {
    let u = &ws.universe;
    let budget = ws.budgets.enumeration as u128;
    let ladder = ws.budgets.ladder as u128;
    let corpus = corpus(ws)?;
    let names: Vec<&str> = corpus.iter().map(|(n, _)| n.as_str()).collect();
    let mut out =
        vec![CheckRecord::new("corpus", anchors::IDEAL, Verdict::Pass)
            .with(json!({"ideals": names, "universe": u.names()}))];

    let mut t = Tally::new("orth-and-ann", anchors::ORTH_ANN);
    for (name, i) in &corpus {
        t.add(orth_and_ann(i, budget)?, || json!({"ideal": name}));
    }
    out.push(t.finish());
    let mut t = Tally::new("orth-and-ann:families", anchors::ORTH_ANN);
    for family in generator_families(ws, budget)? {
        let i = Ideal::generate(u, family.clone())?;
        t.add(
            orth_and_ann(&i, budget)?,
            || json!({"generators": family.iter().map(|g| map_json(ws, g)).collect::<Vec<_>>()}),
        );
    }
    out.push(t.finish());

    let mut sums = Tally::new("orth-of-sum", anchors::ORTH_SUM);
    let mut prods = Tally::new("orth-of-prod", anchors::ORTH_PROD);
    for (a, i) in &corpus {
        for (b, j) in &corpus {
            sums.check(orth_of_sum(i, j)?, || json!({"first": a, "second": b}));
            prods.check(orth_of_prod(i, j)?, || json!({"first": a, "second": b}));
        }
    }
    out.push(sums.finish());
    out.push(prods.finish());

    let mut square = Tally::new("self-annihilating-squares", anchors::Z_P2);
    let mut found = Vec::new();
    for (name, i) in &corpus {
        if *i == i.left_annihilator() && *i == i.right_annihilator() {
            found.push(name.clone());
            square.check(i.product(i)?.is_zero(), || json!({"ideal": name}));
        }
    }
    let mut rec = square.finish();
    rec.witness.as_mut().expect("tally witness")["ideals"] = json!(found);
    out.push(rec);

    let pairs: Vec<(String, TorsionPair)> =
        corpus.iter().map(|(n, i)| generated_torsion_pair(i).map(|p| (n.clone(), p))).collect::<Result<_, _>>()?;
    let gap = exactness_gap(&ws.universe, budget)?;
    out.extend(torsion_records(ws, &pairs)?.into_iter().map(|r| abelian_only(r, &gap)));
    out.extend(et_records(ws, &corpus)?);
    out.extend(preradical_records(&pairs)?.into_iter().map(|r| abelian_only(r, &gap)));
    out.extend(wkc_records(ws, ladder)?);
    out.extend(frobenius_records(ws, budget)?);
    Ok(out)
}

/// Preradical results need kernels and cokernels, so on a universe without
/// them a record is reported undecided with the missing one.
fn abelian_only(mut rec: CheckRecord, gap: &Option<String>) -> CheckRecord {
    let Some(g) = gap else { return rec };
    if rec.id != "rad" && !rec.id.starts_with("preradicals:") {
        return rec;
    }
    rec.verdict = Verdict::Undecided;
    rec.witness.as_mut().expect("tally witness")["not_abelian"] = json!(g);
    rec
}

fn torsion_records(ws: &Workspace, pairs: &[(String, TorsionPair)]) -> Result<Vec<CheckRecord>, CliError> {
    let u = &ws.universe;
    let mut itp = Tally::new("torsion-pairs", anchors::ITP);
    let mut meet = Tally::new("torsion-meet-square", anchors::Z_P2);
    let mut agree = Tally::new("salce-clauses-agree", anchors::SALCE);
    let mut holds = Tally::new("salce-sequences", anchors::SALCE);
    let mut corrupt = Tally::new("salce-corruptions-detected", anchors::SALCE);
    let mut rad = Tally::new("rad", anchors::RAD);
    for (name, pair) in pairs {
        for c in pair.verify()? {
            itp.check(c.holds, || json!({"ideal": name, "clause": c.name}));
        }
        let m = pair.torsion.meet(&pair.free)?;
        meet.check(m.product(&m)?.is_zero(), || json!({"ideal": name}));
        for s in &pair.sequences {
            let x = u.name(s.object);
            let r = verify_salce(pair, s.object)?;
            let w = || json!({"ideal": name, "object": x, "inflation": map_json(ws, &s.inclusion), "deflation": map_json(ws, &s.projection)});
            agree.check(r.all_agree(), w);
            holds.check(r.precover, w);
            if !s.free().is_zero() {
                let (i, j) = corrupt_deflation(pair, s.object);
                let r = salce_report(&pair.torsion, &pair.free, &i, &j)?;
                corrupt.check(r.all_agree() && !r.precover, || {
                    json!({"ideal": name, "object": x, "inflation": map_json(ws, &i), "deflation": map_json(ws, &j)})
                });
            }
        }
        let class = classify_preradical(&Preradical::trace_of(&pair.generating))?;
        rad.check(class.consistent(), || {
            json!({"ideal": name, "idempotent": class.idempotent, "radical": class.radical,
                   "torsion_object_ideal": class.torsion_object_ideal, "free_object_ideal": class.free_object_ideal})
        });
    }
    Ok(vec![itp.finish(), meet.finish(), agree.finish(), holds.finish(), corrupt.finish(), rad.finish()])
}

fn et_records(ws: &Workspace, corpus: &[(String, Ideal)]) -> Result<Vec<CheckRecord>, CliError> {
    let u = &ws.universe;
    let mut pre = Tally::new("et-precover", anchors::ET);
    let mut env = Tally::new("et-preenvelope", anchors::ET);
    for (name, i) in corpus {
        for (k, x) in u.objects().iter().enumerate() {
            let p = et_precover(i, x)?;
            pre.check(is_precover(i, &p)?, || json!({"ideal": name, "object": u.name(k), "map": map_json(ws, &p)}));
            let e = et_preenvelope(i, x)?;
            env.check(is_preenvelope(i, &e)?, || json!({"ideal": name, "object": u.name(k), "map": map_json(ws, &e)}));
        }
    }
    Ok(vec![pre.finish(), env.finish()])
}

/// Preradical formulas over ordered pairs of distinct torsion pairs.
fn preradical_records(pairs: &[(String, TorsionPair)]) -> Result<Vec<CheckRecord>, CliError> {
    let mut distinct: Vec<&(String, TorsionPair)> = Vec::new();
    for p in pairs {
        if !distinct.iter().any(|q| q.1.torsion == p.1.torsion) {
            distinct.push(p);
        }
    }
    let mut out = Vec::new();
    for op in [PreradicalOp::Sum, PreradicalOp::Meet, PreradicalOp::Compose, PreradicalOp::Colon] {
        let mut t = Tally::new(&format!("preradicals:{}", op.as_str()), anchors::PRERADICALS);
        for (a, p) in &distinct {
            for (b, q) in &distinct {
                let r = preradical_combine(p, q, op)?;
                t.check(r.holds(), || {
                    json!({"first": a, "second": b, "torsion_matches": r.torsion_matches,
                           "free_matches": r.free_matches, "pointwise_matches": r.pointwise_matches})
                });
            }
        }
        let mut rec = t.finish();
        rec.witness.as_mut().expect("tally witness")["torsion_pairs"] = json!(distinct.len());
        out.push(rec);
    }
    Ok(out)
}

fn wkc_records(ws: &Workspace, ladder: u128) -> Result<Vec<CheckRecord>, CliError> {
    let mut out = Vec::new();
    let ses = Setting::resolve(ws, "ses")?;
    out.extend(finding_records("ses:", &ses.findings(ladder)));
    let split = Setting::resolve(ws, "split")?;
    out.extend(finding_records("split:", &split.findings(ladder)));
    for (kind, axiom) in [("we1", "WE1"), ("we2", "WE2"), ("we3", "WE3")] {
        let id = format!("violation:{kind}");
        let anchor = anchors::for_axiom(axiom);
        let broken = match engineer(ses.data(), ses.set(), kind, ladder) {
            Ok(b) => b,
            Err(e) => {
                out.push(CheckRecord::new(id, anchor, Verdict::Undecided).with(json!(e.to_string())));
                continue;
            }
        };
        let mut f = verify_wkc_axioms(ses.data(), &broken, ladder);
        f.extend(verify_we_axioms(ses.data(), &broken, ladder));
        let hit = f.iter().find(|x| x.id == axiom).expect("axiom is reported");
        let mut w = json!({"axiom": axiom, "verdict": hit.verdict.as_str()});
        if let Some(s) = &hit.witness {
            w["witness"] = json!(s);
        }
        out.push(CheckRecord::new(id, anchor, Verdict::from_bool(hit.verdict == Verdict::Fail)).with(w));
    }
    Ok(out)
}

fn frobenius_records(ws: &Workspace, budget: u128) -> Result<Vec<CheckRecord>, CliError> {
    let u = &ws.universe;
    let baer = check_self_injective(&ws.algebra, budget)?;
    let decided = baer.verdict != Verdict::Undecided;
    let mut out =
        vec![CheckRecord::new("baer-test", anchors::SELFINJ, if decided { Verdict::Pass } else { Verdict::Undecided })
            .with(json!({"self_injective": baer.verdict == Verdict::Pass, "left_ideals_tested": baer.ideals_tested}))];
    if baer.verdict != Verdict::Pass {
        return Ok(out);
    }
    let ctx = StableContext::new(u, budget)?;

    let mut ext = Tally::new("ext-count", anchors::EXT);
    for (x, a) in u.objects().iter().enumerate() {
        for (y, b) in u.objects().iter().enumerate() {
            let order = ext_group(a, &cosyzygy(b)?)?.order().value();
            let w = || json!({"from": u.name(x), "to": u.name(y), "ext_order": order.map(|v| v as u64)});
            match ses_class_count(a, b, budget)? {
                None => ext.add(Verdict::Undecided, w),
                Some(c) => ext.check(order == Some(c), w),
            }
        }
    }
    out.push(ext.finish());

    let mut transfer = Tally::new("transfer", anchors::TRANSFER);
    for (first, second) in cotorsion_pairs(&ctx)? {
        let report = ctx.verify_transfer(&first, &second)?;
        let bad = report.findings.iter().find(|f| f.verdict != Verdict::Pass).map(|f| f.id.clone());
        transfer.add(report.verdict(), || {
            json!({"finding": bad, "first": crate::commands::ideal_json(ws, &first), "second": crate::commands::ideal_json(ws, &second)})
        });
    }
    out.push(transfer.finish());

    let stable = Setting::resolve(ws, "stable")?;
    out.extend(finding_records("stable:", &stable.findings(ws.budgets.ladder as u128)));
    Ok(out)
}

/// `(⊥(I^⊥), I^⊥)` for `I` the projectives, everything, and projectives
/// plus one Hom generator.
pub fn cotorsion_pairs(ctx: &StableContext) -> Result<Vec<(Ideal, Ideal)>, CliError> {
    let u = ctx.plain();
    let p = ctx.projective_ideal().clone();
    let mut seeds = vec![p.clone(), Ideal::full(u)];
    for i in 0..u.len() {
        for j in 0..u.len() {
            for g in u.hom_at(i, j).generators() {
                seeds.push(p.sum(&Ideal::generate(u, vec![g.clone()])?)?);
            }
        }
    }
    let mut out: Vec<(Ideal, Ideal)> = Vec::new();
    for seed in seeds {
        let second = ctx.ext_right_orthogonal(&seed)?;
        let first = ctx.ext_left_orthogonal(&second)?;
        if !out.iter().any(|(a, b)| *a == first && *b == second) {
            out.push((first, second));
        }
    }
    Ok(out)
}
