//! On-disk bundles: `algebra.json`, `modules/*.json`, `chain.json` and
//! `report.json`.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::algebra::{AlgebraJson, FiniteLocalAlgebra};
use crate::chains::Chain;
use crate::constructions::{build_instance, verify_instance, ExampleInstance, ExampleSpec};
use crate::exactlin::{Field, FieldSpec};
use crate::modcalc::{regular_module, residue_field_module, Engine, FiniteModule, ModuleJson, Status};
use crate::report::{ClaimRecord, Report};

#[derive(Debug, thiserror::Error)]
pub enum BundleError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Json { path: PathBuf, source: serde_json::Error },
    #[error("unknown module {0}")]
    UnknownModule(String),
    #[error("{0}")]
    Invalid(String),
}

/// Contents of `chain.json`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainJson {
    pub spec: ExampleSpec,
    pub algebra_ref: String,
    pub modules: Vec<String>,
    pub b_family: Vec<String>,
    pub seed: u64,
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, BundleError> {
    let text = fs::read_to_string(path).map_err(|source| BundleError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| BundleError::Json {
        path: path.to_path_buf(),
        source,
    })
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), BundleError> {
    let mut text = serde_json::to_string_pretty(value).expect("bundle data serializes");
    text.push('\n');
    fs::write(path, text).map_err(|source| BundleError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Writes the instance and its report under `dir`.
pub fn write_bundle<K: Field>(
    dir: &Path,
    spec: &ExampleSpec,
    inst: &ExampleInstance<K>,
    report: &Report,
) -> Result<(), BundleError> {
    let io = |path: &Path| {
        let path = path.to_path_buf();
        move |source| BundleError::Io { path, source }
    };
    let mdir = dir.join("modules");
    fs::create_dir_all(&mdir).map_err(io(&mdir))?;
    let hash = inst.algebra.content_hash();
    write_json(&dir.join("algebra.json"), &inst.algebra.to_json())?;
    let mut names = Vec::new();
    let mut put = |name: String, m: &FiniteModule<K>| -> Result<(), BundleError> {
        write_json(&mdir.join(format!("{name}.json")), &m.to_json(&hash))?;
        names.push(name);
        Ok(())
    };
    put("R".into(), &regular_module(&inst.algebra).with_label("R"))?;
    put("k".into(), &residue_field_module(&inst.algebra).with_label("k"))?;
    for (i, c) in inst.chain.modules().iter().enumerate() {
        put(format!("C{i}"), c)?;
    }
    for (j, b) in inst.family.singles().iter().enumerate() {
        put(format!("B{}", j + 1), b)?;
    }
    let n = inst.chain.length();
    let chain = ChainJson {
        spec: spec.clone(),
        algebra_ref: hash,
        modules: (0..=n).map(|i| format!("C{i}")).collect(),
        b_family: (1..=n).map(|j| format!("B{j}")).collect(),
        seed: report.seed,
    };
    write_json(&dir.join("chain.json"), &chain)?;
    write_json(&dir.join("report.json"), report)
}

/// Field recorded in `algebra.json`, used to pick the arithmetic.
pub fn bundle_field(dir: &Path) -> Result<FieldSpec, BundleError> {
    let a: AlgebraJson = read_json(&dir.join("algebra.json"))?;
    Ok(a.field)
}

pub fn read_chain_json(dir: &Path) -> Result<ChainJson, BundleError> {
    read_json(&dir.join("chain.json"))
}

/// Parsed and validated bundle contents.
pub struct Bundle<K: Field> {
    pub chain: ChainJson,
    pub algebra: Arc<FiniteLocalAlgebra<K>>,
    pub modules: BTreeMap<String, FiniteModule<K>>,
}

impl<K: Field> Bundle<K> {
    pub fn module(&self, name: &str) -> Result<&FiniteModule<K>, BundleError> {
        self.modules.get(name).ok_or_else(|| BundleError::UnknownModule(name.to_string()))
    }
}

/// Reads and validates every file. Axiom violations in the algebra or the
/// modules come back as `BundleError::Invalid`.
pub fn load_bundle<K: Field>(dir: &Path, field: K) -> Result<Bundle<K>, BundleError> {
    let chain = read_chain_json(dir)?;
    let aj: AlgebraJson = read_json(&dir.join("algebra.json"))?;
    let algebra =
        Arc::new(FiniteLocalAlgebra::from_json(field, &aj).map_err(|e| BundleError::Invalid(format!("algebra.json: {e}")))?);
    let mut modules = BTreeMap::new();
    let mdir = dir.join("modules");
    let entries = fs::read_dir(&mdir).map_err(|source| BundleError::Io {
        path: mdir.clone(),
        source,
    })?;
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    for p in paths {
        let name = p.file_stem().unwrap().to_string_lossy().into_owned();
        let mj: ModuleJson = read_json(&p)?;
        let m = FiniteModule::from_json(&algebra, &mj).map_err(|e| BundleError::Invalid(format!("modules/{name}.json: {e}")))?;
        modules.insert(name, m);
    }
    for name in chain.modules.iter().chain(&chain.b_family) {
        if !modules.contains_key(name) {
            return Err(BundleError::UnknownModule(name.clone()));
        }
    }
    Ok(Bundle {
        chain,
        algebra,
        modules,
    })
}

fn failed_report(spec: &ExampleSpec, seed: u64, id: &str, why: String) -> Report {
    let mut r = Report {
        exponents: spec.exponents.clone(),
        field: spec.field,
        dim: 0,
        n: spec.n(),
        nilpotency_index: 0,
        bound: spec.bound,
        order: spec.order,
        identity_order: spec.identity_order,
        seed,
        status: Status::Pass,
        claims: Vec::new(),
    };
    r.push(ClaimRecord::new(id, "bundle contents", Status::Fail, spec.bound, json!({ "error": why })));
    r
}

/// Verifies the chain stored in a bundle. `spec` carries the bound and
/// orders to use; its exponents must match the bundle's.
pub fn verify_bundle<K: Field>(dir: &Path, field: K, spec: &ExampleSpec, seed: u64) -> Result<Report, BundleError> {
    let bundle = match load_bundle(dir, field.clone()) {
        Ok(b) => b,
        Err(BundleError::Invalid(why)) => return Ok(failed_report(spec, seed, "bundle.valid", why)),
        Err(e) => return Err(e),
    };
    let inst = build_instance(spec, field).map_err(|e| BundleError::Invalid(e.to_string()))?;
    if *inst.algebra != *bundle.algebra {
        return Ok(failed_report(
            spec,
            seed,
            "bundle.algebra_matches_exponents",
            format!("algebra.json is not the tensor algebra for exponents {:?}", spec.exponents),
        ));
    }
    let mut mods = Vec::new();
    for name in &bundle.chain.modules {
        let m = bundle.module(name)?.clone();
        mods.push(m.rebase(&inst.algebra).map_err(|e| BundleError::Invalid(e.to_string()))?);
    }
    let chain = Chain::new_unchecked(inst.algebra.clone(), mods, spec.bound);
    let inst = inst.with_chain(chain);
    let engine = Engine::new(seed);
    Ok(verify_instance(&engine, &inst, spec))
}
