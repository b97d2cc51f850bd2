//! Workspace files: schema, validation and canonical re-emission.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use idealab_core::algcat::{AlgModule, FiniteAlgebra, Morphism};
use idealab_core::approx::COVER_BUDGET;
use idealab_core::ideals::{Ideal, Universe};
use idealab_core::wkc::{ModuleConflation, LADDER_BUDGET};
use idealab_core::znlin::{check_modulus, ZnMatrix, DEFAULT_MODULUS_BOUND, MAX_MODULUS};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const DEFAULT_ENUM_BUDGET: u64 = 1 << 20;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorkspaceFile {
    pub modulus: u64,
    pub algebra: AlgebraSpec,
    pub modules: BTreeMap<String, ModuleSpec>,
    #[serde(default)]
    pub ideals: BTreeMap<String, IdealSpec>,
    pub universe: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub conflations: Vec<ConflationSetSpec>,
    #[serde(default)]
    pub options: Options,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraSpec {
    pub rank: usize,
    /// `mult[a][b]` holds the coordinates of `e_a · e_b`.
    pub mult: Vec<Vec<Vec<u32>>>,
    pub unit: Vec<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub radical: Option<Vec<Vec<u32>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleSpec {
    pub gens: usize,
    pub relations: Vec<Vec<u32>>,
    /// One `gens × gens` matrix per algebra basis element.
    pub action: Vec<Vec<Vec<u32>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdealSpec {
    pub generators: Vec<MorphismSpec>,
}

/// A module named in the workspace, or an inline presentation (used by
/// counterexample witnesses).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ModuleRef {
    Name(String),
    Inline(ModuleSpec),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismSpec {
    pub from: ModuleRef,
    pub to: ModuleRef,
    pub matrix: Vec<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceSpec {
    pub inflation: MorphismSpec,
    pub deflation: MorphismSpec,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConflationSetSpec {
    pub name: String,
    pub sequences: Vec<SequenceSpec>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Options {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus_bound: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub enum_budget: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cover_budget: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ladder_budget: Option<u64>,
}

/// Effective budgets after applying workspace options and `IDEALAB_BUDGET_*`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budgets {
    pub modulus_bound: u64,
    pub enumeration: u64,
    pub cover: u64,
    pub ladder: u64,
}

impl Budgets {
    pub fn resolve(options: &Options, env: &dyn Fn(&str) -> Option<String>) -> Result<Self, CliError> {
        let pick = |var: &str, opt: Option<u64>, default: u64| -> Result<u64, CliError> {
            match env(var) {
                Some(v) => v
                    .trim()
                    .parse::<u64>()
                    .map_err(|_| CliError::Input(format!("{var}: expected a non-negative integer, got {v:?}"))),
                None => Ok(opt.unwrap_or(default)),
            }
        };
        Ok(Budgets {
            modulus_bound: pick("IDEALAB_BUDGET_MODULUS", options.modulus_bound, DEFAULT_MODULUS_BOUND)?
                .min(MAX_MODULUS),
            enumeration: pick("IDEALAB_BUDGET_ENUM", options.enum_budget, DEFAULT_ENUM_BUDGET)?,
            cover: pick("IDEALAB_BUDGET_COVER", options.cover_budget, COVER_BUDGET as u64)?,
            ladder: pick("IDEALAB_BUDGET_LADDER", options.ladder_budget, LADDER_BUDGET as u64)?,
        })
    }

    pub fn entries(&self) -> BTreeMap<String, u64> {
        BTreeMap::from([
            ("cover".to_string(), self.cover),
            ("enumeration".to_string(), self.enumeration),
            ("ladder".to_string(), self.ladder),
            ("modulus_bound".to_string(), self.modulus_bound),
        ])
    }
}

/// A validated workspace. Ideals are built lazily because a restricted
/// universe may not contain every module an ideal mentions.
pub struct Workspace {
    pub file: WorkspaceFile,
    pub algebra: Arc<FiniteAlgebra>,
    pub modules: BTreeMap<String, Arc<AlgModule>>,
    pub universe: Arc<Universe>,
    pub budgets: Budgets,
    ideals: BTreeMap<String, Result<Ideal, String>>,
}

fn input<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Input(msg.into()))
}

fn check_rows(rows: &[Vec<u32>], width: usize, n: u32, at: &str) -> Result<(), CliError> {
    for (i, row) in rows.iter().enumerate() {
        if row.len() != width {
            return input(format!("{at}[{i}]: expected {width} entries, found {}", row.len()));
        }
        if let Some(x) = row.iter().find(|&&x| x >= n) {
            return input(format!("{at}[{i}]: entry {x} is not reduced mod {n}"));
        }
    }
    Ok(())
}

fn matrix(rows: &[Vec<u32>], height: usize, width: usize, n: u32, at: &str) -> Result<ZnMatrix, CliError> {
    if rows.len() != height {
        return input(format!("{at}: expected {height} rows, found {}", rows.len()));
    }
    check_rows(rows, width, n, at)?;
    ZnMatrix::from_rows(n, width, rows).map_err(|e| CliError::Input(format!("{at}: {e}")))
}

pub fn build_module(alg: &Arc<FiniteAlgebra>, spec: &ModuleSpec, at: &str) -> Result<Arc<AlgModule>, CliError> {
    let n = alg.modulus();
    check_rows(&spec.relations, spec.gens, n, &format!("{at}.relations"))?;
    if spec.action.len() != alg.rank() {
        return input(format!("{at}.action: expected {} matrices, found {}", alg.rank(), spec.action.len()));
    }
    let action = spec
        .action
        .iter()
        .enumerate()
        .map(|(a, m)| matrix(m, spec.gens, spec.gens, n, &format!("{at}.action[{a}]")))
        .collect::<Result<Vec<_>, _>>()?;
    AlgModule::new(alg.clone(), spec.gens, &spec.relations, action)
        .map(Arc::new)
        .map_err(|e| CliError::Input(format!("{at}: {e}")))
}

pub fn module_spec(m: &AlgModule) -> ModuleSpec {
    ModuleSpec {
        gens: m.gens(),
        relations: m.relations().basis().to_vec(),
        action: m.actions().iter().map(|a| a.row_vecs()).collect(),
    }
}

impl Workspace {
    pub fn read(
        path: &Path,
        universe: Option<&[String]>,
        env: &dyn Fn(&str) -> Option<String>,
    ) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        Self::parse(&text, universe, env).map_err(|e| match e {
            CliError::Input(m) => CliError::Input(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn parse(
        text: &str,
        universe: Option<&[String]>,
        env: &dyn Fn(&str) -> Option<String>,
    ) -> Result<Self, CliError> {
        let file: WorkspaceFile = serde_json::from_str(text).map_err(|e| CliError::Input(format!("schema: {e}")))?;
        Self::from_file(file, universe, env)
    }

    pub fn from_file(
        file: WorkspaceFile,
        universe: Option<&[String]>,
        env: &dyn Fn(&str) -> Option<String>,
    ) -> Result<Self, CliError> {
        let budgets = Budgets::resolve(&file.options, env)?;
        let n =
            check_modulus(file.modulus, budgets.modulus_bound).map_err(|e| CliError::Input(format!("modulus: {e}")))?;
        let spec = &file.algebra;
        if spec.mult.len() != spec.rank {
            return input(format!("algebra.mult: expected {} rows, found {}", spec.rank, spec.mult.len()));
        }
        for (a, row) in spec.mult.iter().enumerate() {
            check_rows(row, spec.rank, n, &format!("algebra.mult[{a}]"))?;
            if row.len() != spec.rank {
                return input(format!("algebra.mult[{a}]: expected {} products, found {}", spec.rank, row.len()));
            }
        }
        check_rows(std::slice::from_ref(&spec.unit), spec.rank, n, "algebra.unit")?;
        if let Some(rad) = &spec.radical {
            check_rows(rad, spec.rank, n, "algebra.radical")?;
        }
        let algebra = FiniteAlgebra::new(n, spec.rank, &spec.mult, &spec.unit, spec.radical.as_deref())
            .map(Arc::new)
            .map_err(|e| CliError::Input(format!("algebra: {e}")))?;

        let mut modules = BTreeMap::new();
        for (name, m) in &file.modules {
            modules.insert(name.clone(), build_module(&algebra, m, &format!("modules.{name}"))?);
        }

        let names: Vec<String> = match universe {
            Some(sub) => {
                for s in sub {
                    if !file.universe.contains(s) {
                        return input(format!("--universe: {s:?} is not in the workspace universe"));
                    }
                }
                file.universe.iter().filter(|s| sub.contains(s)).cloned().collect()
            }
            None => file.universe.clone(),
        };
        let mut entries = Vec::new();
        for (k, name) in names.iter().enumerate() {
            let m =
                modules.get(name).ok_or_else(|| CliError::Input(format!("universe[{k}]: unknown module {name:?}")))?;
            if entries.iter().any(|(other, _): &(String, _)| other == name) {
                return input(format!("universe[{k}]: {name:?} listed twice"));
            }
            entries.push((name.clone(), m.clone()));
        }
        let universe =
            Universe::new(algebra.clone(), entries).map_err(|e| CliError::Input(format!("universe: {e}")))?;

        let mut ws = Workspace { file, algebra, modules, universe, budgets, ideals: BTreeMap::new() };
        let mut ideals = BTreeMap::new();
        for (name, spec) in &ws.file.ideals {
            let at = format!("ideals.{name}");
            let mut gens = Vec::new();
            let mut outside = None;
            for (k, g) in spec.generators.iter().enumerate() {
                let here = format!("{at}.generators[{k}]");
                for end in [&g.from, &g.to] {
                    match end {
                        ModuleRef::Name(m) if !ws.modules.contains_key(m) => {
                            return input(format!("{here}: unknown module {m:?}"));
                        }
                        ModuleRef::Name(m) if !names.contains(m) => {
                            outside.get_or_insert_with(|| m.clone());
                        }
                        ModuleRef::Name(_) => {}
                        ModuleRef::Inline(_) => return input(format!("{here}: ideal generators must name modules")),
                    }
                }
                gens.push(ws.morphism(g, &here)?);
            }
            let built = match outside {
                Some(m) => Err(format!("ideal {name:?} needs module {m:?}, which is outside the universe")),
                None => Ok(Ideal::generate(&ws.universe, gens).map_err(|e| CliError::Input(format!("{at}: {e}")))?),
            };
            ideals.insert(name.clone(), built);
        }
        ws.ideals = ideals;
        for (s, set) in ws.file.conflations.iter().enumerate() {
            for (k, seq) in set.sequences.iter().enumerate() {
                let at = format!("conflations[{s}].sequences[{k}]");
                ws.sequence(seq, &at)?;
            }
        }
        Ok(ws)
    }

    pub fn modulus(&self) -> u32 {
        self.algebra.modulus()
    }

    pub fn resolve_module(&self, r: &ModuleRef, at: &str) -> Result<Arc<AlgModule>, CliError> {
        match r {
            ModuleRef::Name(name) => {
                self.modules.get(name).cloned().ok_or_else(|| CliError::Input(format!("{at}: unknown module {name:?}")))
            }
            ModuleRef::Inline(spec) => build_module(&self.algebra, spec, at),
        }
    }

    /// Builds and validates a module map.
    pub fn morphism(&self, spec: &MorphismSpec, at: &str) -> Result<Morphism, CliError> {
        let source = self.resolve_module(&spec.from, &format!("{at}.from"))?;
        let target = self.resolve_module(&spec.to, &format!("{at}.to"))?;
        let m = matrix(&spec.matrix, source.gens(), target.gens(), self.modulus(), &format!("{at}.matrix"))?;
        Morphism::new(source, target, m).map_err(|e| CliError::Input(format!("{at}: {e}")))
    }

    pub fn sequence(&self, spec: &SequenceSpec, at: &str) -> Result<ModuleConflation, CliError> {
        let inflation = self.morphism(&spec.inflation, &format!("{at}.inflation"))?;
        let deflation = self.morphism(&spec.deflation, &format!("{at}.deflation"))?;
        if *inflation.target() != *deflation.source() {
            return input(format!("{at}: inflation and deflation do not compose"));
        }
        Ok(ModuleConflation { inflation, deflation })
    }

    /// A workspace module name for `m`, if one presents it verbatim.
    pub fn module_name(&self, m: &AlgModule) -> Option<&str> {
        let u = &self.universe;
        u.objects()
            .iter()
            .position(|x| x.as_ref() == m)
            .map(|i| u.name(i))
            .or_else(|| self.modules.iter().find(|(_, x)| x.as_ref() == m).map(|(n, _)| n.as_str()))
    }

    pub fn module_ref(&self, m: &AlgModule) -> ModuleRef {
        match self.module_name(m) {
            Some(name) => ModuleRef::Name(name.to_string()),
            None => ModuleRef::Inline(module_spec(m)),
        }
    }

    pub fn morphism_spec(&self, f: &Morphism) -> MorphismSpec {
        MorphismSpec {
            from: self.module_ref(f.source()),
            to: self.module_ref(f.target()),
            matrix: f.matrix().row_vecs(),
        }
    }

    pub fn ideal(&self, name: &str) -> Result<&Ideal, CliError> {
        match self.ideals.get(name) {
            Some(Ok(i)) => Ok(i),
            Some(Err(msg)) => input(msg.clone()),
            None => input(format!("unknown ideal {name:?}")),
        }
    }

    /// Ideals that live on the current universe, by name.
    pub fn ideals(&self) -> impl Iterator<Item = (&str, &Ideal)> {
        self.ideals.iter().filter_map(|(n, i)| i.as_ref().ok().map(|i| (n.as_str(), i)))
    }

    pub fn conflation_set(&self, name: &str) -> Result<Vec<ModuleConflation>, CliError> {
        let (s, set) = self
            .file
            .conflations
            .iter()
            .enumerate()
            .find(|(_, c)| c.name == name)
            .ok_or_else(|| CliError::Input(format!("unknown conflation set {name:?}")))?;
        set.sequences
            .iter()
            .enumerate()
            .map(|(k, seq)| self.sequence(seq, &format!("conflations[{s}].sequences[{k}]")))
            .collect()
    }

    /// The object index of a universe module name.
    pub fn object(&self, name: &str) -> Result<usize, CliError> {
        self.universe.index_of_name(name).ok_or_else(|| CliError::Input(format!("{name:?} is not a universe object")))
    }

    pub fn emit(&self) -> String {
        serde_json::to_string_pretty(&self.file).expect("workspace serializes")
    }
}
